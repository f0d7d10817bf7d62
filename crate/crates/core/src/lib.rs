//! Numerics for discrete quantum mechanics with pure imaginary shifts:
//! the quantum dilogarithm, Askey-Wilson-type orthogonal polynomials on
//! |q| = 1, four exactly solvable Hamiltonians built from them, and the
//! verification machinery that checks the whole construction numerically.

pub mod oracle;
pub mod qdilog;
pub mod qpoly;
pub mod quad;
pub mod systems;
pub mod verify;

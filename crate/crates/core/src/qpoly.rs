//! q-series kernel: q-Pochhammer symbols, terminating basic hypergeometric
//! series, the Askey-Wilson polynomial at general complex q, its p-tilde
//! limit, recurrence and leading-coefficient data, and the classical
//! reference polynomials (Laguerre, Jacobi, Wilson, continuous Hahn) used in
//! the limit checks.
//!
//! Polynomials are evaluated through the hypergeometric sum; the three-term
//! recurrence is kept as a cross-check, not as the evaluation path.

use num_complex::Complex64;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance below which a denominator Pochhammer factor counts as vanished.
const POCHHAMMER_ZERO: f64 = 1e-13;

#[derive(Debug, thiserror::Error)]
pub enum QPolyError {
    #[error("denominator Pochhammer factor (b_{which}; q)_k vanished at k = {k}")]
    DenominatorPochhammerZero { k: usize, which: usize },
    #[error("recurrence denominator 1 - b4 q^{exponent} vanished")]
    RecurrenceDenominatorZero { exponent: i64 },
}

pub type Result<T> = std::result::Result<T, QPolyError>;

/// Finite q-Pochhammer (a; q)_n = prod_{k=1..n} (1 - a q^{k-1}).
pub fn qpochhammer(a: Complex64, q: Complex64, n: usize) -> Complex64 {
    let mut prod = Complex64::new(1.0, 0.0);
    let mut aq = a;
    for _ in 0..n {
        prod *= 1.0 - aq;
        aq *= q;
    }
    prod
}

/// (a_1, ..., a_m; q)_n = prod_j (a_j; q)_n.
pub fn qpochhammer_multi(a: &[Complex64], q: Complex64, n: usize) -> Complex64 {
    a.iter().map(|&aj| qpochhammer(aj, q, n)).product()
}

/// Terminating r-phi-s sum truncated at k = n. The numerator list must
/// contain q^{-n} so all later terms vanish; the caller supplies n. Includes
/// the (-1)^{(1+s-r)k} q^{(1+s-r)k(k-1)/2} balancing factor.
pub fn basic_hypergeom_terminating(
    numerator: &[Complex64],
    denominator: &[Complex64],
    q: Complex64,
    z: Complex64,
    n: usize,
) -> Result<Complex64> {
    let excess = 1 + denominator.len() as i64 - numerator.len() as i64;
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut qk = Complex64::new(1.0, 0.0); // q^{k-1} while building term k
    for k in 1..=n {
        for a in numerator {
            term *= 1.0 - a * qk;
        }
        for (j, b) in denominator.iter().enumerate() {
            let f = 1.0 - b * qk;
            if f.norm() < POCHHAMMER_ZERO {
                return Err(QPolyError::DenominatorPochhammerZero { k, which: j });
            }
            term /= f;
        }
        let f = 1.0 - q * qk; // (q; q)_k factor
        if f.norm() < POCHHAMMER_ZERO {
            return Err(QPolyError::DenominatorPochhammerZero { k, which: denominator.len() });
        }
        term /= f;
        term *= z;
        // balancing factor ratio from k-1 to k: ((-1) q^{k-1})^{1+s-r}
        match excess.cmp(&0) {
            std::cmp::Ordering::Greater => {
                for _ in 0..excess {
                    term *= -qk;
                }
            }
            std::cmp::Ordering::Less => {
                for _ in 0..(-excess) {
                    term /= -qk;
                }
            }
            std::cmp::Ordering::Equal => {}
        }
        sum += term;
        qk *= q;
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy)]
pub struct AWParameterQuad {
    pub a: [Complex64; 4],
}

impl AWParameterQuad {
    pub fn new(a1: Complex64, a2: Complex64, a3: Complex64, a4: Complex64) -> Self {
        AWParameterQuad { a: [a1, a2, a3, a4] }
    }

    pub fn b4(&self) -> Complex64 {
        self.a.iter().product()
    }
}

/// Solve eta = (u + 1/u)/2 for u, returning the root with |u| >= 1.
pub fn eta_to_u(eta: Complex64) -> Complex64 {
    let s = (eta * eta - 1.0).sqrt();
    // add constructively: eta - s for nearly opposite phases would cancel
    // catastrophically at large |eta| and can still pass a |u| >= 1 test
    if (eta.re * s.re + eta.im * s.im) >= 0.0 {
        eta + s
    } else {
        eta - s
    }
}

/// q^{-n} as a complex power, computed by repeated division for exactness at
/// small n.
fn q_pow(q: Complex64, n: i64) -> Complex64 {
    let mut r = Complex64::new(1.0, 0.0);
    if n >= 0 {
        for _ in 0..n {
            r *= q;
        }
    } else {
        for _ in 0..(-n) {
            r /= q;
        }
    }
    r
}

/// Askey-Wilson polynomial p_n(eta; a1,a2,a3,a4 | q), evaluated through the
/// a1-prefactored terminating 4-phi-3.
pub fn askey_wilson(n: usize, eta: Complex64, p: &AWParameterQuad, q: Complex64) -> Result<Complex64> {
    // full parameter symmetry: put the largest-modulus parameter in the a1
    // slot so the a1^{-n} prefactor does not amplify roundoff
    let mut a = p.a;
    a.sort_by(|x, y| y.norm().partial_cmp(&x.norm()).unwrap());
    let [a1, a2, a3, a4] = a;
    let p = &AWParameterQuad::new(a1, a2, a3, a4);
    let u = eta_to_u(eta);
    let pre = q_pow(a1, -(n as i64)) * qpochhammer_multi(&[a1 * a2, a1 * a3, a1 * a4], q, n);
    let phi = basic_hypergeom_terminating(
        &[q_pow(q, -(n as i64)), p.b4() * q_pow(q, n as i64 - 1), a1 * u, a1 / u],
        &[a1 * a2, a1 * a3, a1 * a4],
        q,
        q,
        n,
    )?;
    Ok(pre * phi)
}

/// The limit polynomial p-tilde_n(eta; a1,a2,a3,a4 | q), a 3-phi-2 closed
/// form.
pub fn ptilde(n: usize, eta: Complex64, p: &AWParameterQuad, q: Complex64) -> Result<Complex64> {
    // symmetric only under a1 <-> a2 and a3 <-> a4: swap within the first
    // pair so the a1^{-n} prefactor uses the larger modulus
    let [mut a1, mut a2, a3, a4] = p.a;
    if a2.norm() > a1.norm() {
        std::mem::swap(&mut a1, &mut a2);
    }
    let p = &AWParameterQuad::new(a1, a2, a3, a4);
    let pre = q_pow(a1, -(n as i64)) * qpochhammer_multi(&[a1 * a3, a1 * a4], q, n);
    let phi = basic_hypergeom_terminating(
        &[q_pow(q, -(n as i64)), p.b4() * q_pow(q, n as i64 - 1), a1 * eta],
        &[a1 * a3, a1 * a4],
        q,
        q,
        n,
    )?;
    Ok(pre * phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyVariant {
    AskeyWilson,
    PTilde,
}

#[derive(Debug, Clone, Copy)]
pub struct RecurrenceTriple {
    pub a_n: Complex64,
    pub b_n: Complex64,
    pub c_n: Complex64,
}

/// Three-term recurrence coefficients: eta p_n = A_n p_{n+1} + B_n p_n +
/// C_n p_{n-1} (and the tilde analogue).
pub fn aw_recurrence(
    n: usize,
    p: &AWParameterQuad,
    q: Complex64,
    variant: PolyVariant,
) -> Result<RecurrenceTriple> {
    let [a1, a2, a3, a4] = p.a;
    let b4 = p.b4();
    let ni = n as i64;
    let d = |e: i64| -> Result<Complex64> {
        let v = 1.0 - b4 * q_pow(q, e);
        if v.norm() < POCHHAMMER_ZERO {
            Err(QPolyError::RecurrenceDenominatorZero { exponent: e })
        } else {
            Ok(v)
        }
    };
    let (d0, d1, d2) = (d(2 * ni - 2)?, d(2 * ni - 1)?, d(2 * ni)?);
    let qn = q_pow(q, ni);
    let qn1 = q_pow(q, ni - 1);
    match variant {
        PolyVariant::AskeyWilson => {
            let a_n = (1.0 - b4 * qn1) / (2.0 * d1 * d2);
            let b_n = (a1 + 1.0 / a1) / 2.0
                - (1.0 - b4 * qn1) * (1.0 - a1 * a2 * qn) * (1.0 - a1 * a3 * qn)
                    * (1.0 - a1 * a4 * qn)
                    / (2.0 * a1 * d1 * d2)
                - a1 * (1.0 - qn) * (1.0 - a2 * a3 * qn1) * (1.0 - a2 * a4 * qn1)
                    * (1.0 - a3 * a4 * qn1)
                    / (2.0 * d0 * d1);
            let c_n = (1.0 - qn)
                * (1.0 - a1 * a2 * qn1) * (1.0 - a1 * a3 * qn1) * (1.0 - a1 * a4 * qn1)
                * (1.0 - a2 * a3 * qn1) * (1.0 - a2 * a4 * qn1) * (1.0 - a3 * a4 * qn1)
                / (2.0 * d0 * d1);
            Ok(RecurrenceTriple { a_n, b_n, c_n })
        }
        PolyVariant::PTilde => {
            let a_n = (1.0 - b4 * qn1) / (d1 * d2);
            let b_n = 1.0 / a1
                - (1.0 - b4 * qn1) * (1.0 - a1 * a3 * qn) * (1.0 - a1 * a4 * qn)
                    / (a1 * d1 * d2)
                + a1 * a3 * a4 * qn1 * (1.0 - qn) * (1.0 - a2 * a3 * qn1)
                    * (1.0 - a2 * a4 * qn1)
                    / (d0 * d1);
            let c_n = -a3 * a4 * qn1 * (1.0 - qn)
                * (1.0 - a1 * a3 * qn1) * (1.0 - a1 * a4 * qn1)
                * (1.0 - a2 * a3 * qn1) * (1.0 - a2 * a4 * qn1)
                / (d0 * d1);
            Ok(RecurrenceTriple { a_n, b_n, c_n })
        }
    }
}

/// Leading coefficient: c_n = 2^n (b4 q^{n-1}; q)_n, or without the 2^n for
/// the tilde variant.
pub fn leading_coefficient(
    n: usize,
    p: &AWParameterQuad,
    q: Complex64,
    variant: PolyVariant,
) -> Complex64 {
    let base = qpochhammer(p.b4() * q_pow(q, n as i64 - 1), q, n);
    match variant {
        PolyVariant::AskeyWilson => base * 2f64.powi(n as i32),
        PolyVariant::PTilde => base,
    }
}

/// Max relative residual of the q -> 1/q inversion identity over sample eta:
/// p_n(eta; a | 1/q) = (-1)^n b4^n q^{-3n(n-1)/2} p_n(eta; 1/a | q)
/// (with the (a3,a4,a1,a2) index swap on the inverted side for the tilde
/// variant).
pub fn duality_check(n: usize, p: &AWParameterQuad, q: Complex64, variant: PolyVariant) -> Result<f64> {
    let [a1, a2, a3, a4] = p.a;
    let inv = |x: Complex64| 1.0 / x;
    let swapped = match variant {
        PolyVariant::AskeyWilson => AWParameterQuad::new(inv(a1), inv(a2), inv(a3), inv(a4)),
        PolyVariant::PTilde => AWParameterQuad::new(inv(a3), inv(a4), inv(a1), inv(a2)),
    };
    let scale = (-1f64).powi(n as i32)
        * Complex64::new(1.0, 0.0)
        * p.b4().powu(n as u32)
        * q_pow(q, -3 * (n as i64) * (n as i64 - 1) / 2);
    let mut worst: f64 = 0.0;
    for j in 0..7 {
        let eta = Complex64::new(0.3 * j as f64 - 1.0, 0.1 * (j % 3) as f64);
        let (lhs, rhs) = match variant {
            PolyVariant::AskeyWilson => (
                askey_wilson(n, eta, p, 1.0 / q)?,
                scale * askey_wilson(n, eta, &swapped, q)?,
            ),
            PolyVariant::PTilde => (
                ptilde(n, eta, p, 1.0 / q)?,
                scale * ptilde(n, eta, &swapped, q)?,
            ),
        };
        let denom = lhs.norm().max(rhs.norm()).max(1.0);
        worst = worst.max((lhs - rhs).norm() / denom);
    }
    Ok(worst)
}

/// Rising factorial (a)_n = a (a+1) ... (a+n-1).
pub fn pochhammer(a: Complex64, n: usize) -> Complex64 {
    (0..n).map(|k| a + k as f64).product()
}

/// Terminating generalized hypergeometric sum rFs(...; z), truncated at k = n
/// where the first numerator parameter is -n.
fn hypergeom_terminating(num: &[Complex64], den: &[Complex64], z: Complex64, n: usize) -> Complex64 {
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let kf = k as f64;
        for a in num {
            term *= a + kf;
        }
        for b in den {
            term /= b + kf;
        }
        term *= z / (kf + 1.0);
        sum += term;
    }
    sum
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Classical reference polynomials for the limit checks.
#[derive(Debug, Clone, Copy)]
pub enum ClassicalKind {
    Laguerre { alpha: Complex64 },
    Jacobi { alpha: Complex64, beta: Complex64 },
    /// Wilson polynomial W_n(eta; a1..a4), eta = x^2.
    Wilson { a: [Complex64; 4] },
    /// Continuous Hahn p_n(eta; a1..a4) in the i^n (a1+a3, a1+a4)_n / n!
    /// normalization.
    ContinuousHahn { a: [Complex64; 4] },
}

pub fn classical_poly(kind: ClassicalKind, n: usize, arg: Complex64) -> Complex64 {
    let neg_n = Complex64::new(-(n as f64), 0.0);
    match kind {
        ClassicalKind::Laguerre { alpha } => {
            pochhammer(alpha + 1.0, n) / factorial(n)
                * hypergeom_terminating(&[neg_n], &[alpha + 1.0], arg, n)
        }
        ClassicalKind::Jacobi { alpha, beta } => {
            pochhammer(alpha + 1.0, n) / factorial(n)
                * hypergeom_terminating(
                    &[neg_n, alpha + beta + (n as f64) + 1.0],
                    &[alpha + 1.0],
                    (1.0 - arg) / 2.0,
                    n,
                )
        }
        ClassicalKind::Wilson { a } => {
            let [a1, a2, a3, a4] = a;
            let x = arg.sqrt();
            pochhammer(a1 + a2, n) * pochhammer(a1 + a3, n) * pochhammer(a1 + a4, n)
                * hypergeom_terminating(
                    &[
                        neg_n,
                        a1 + a2 + a3 + a4 + (n as f64) - 1.0,
                        a1 + I * x,
                        a1 - I * x,
                    ],
                    &[a1 + a2, a1 + a3, a1 + a4],
                    Complex64::new(1.0, 0.0),
                    n,
                )
        }
        ClassicalKind::ContinuousHahn { a } => {
            let [a1, a2, a3, a4] = a;
            I.powu(n as u32) * pochhammer(a1 + a3, n) * pochhammer(a1 + a4, n) / factorial(n)
                * hypergeom_terminating(
                    &[neg_n, a1 + a2 + a3 + a4 + (n as f64) - 1.0, a1 + I * arg],
                    &[a1 + a3, a1 + a4],
                    Complex64::new(1.0, 0.0),
                    n,
                )
        }
    }
}

/// Monomial coefficients [c_0, ..., c_d] of a degree-d polynomial from its
/// values, by Newton divided differences at equispaced nodes on the circle
/// |z| = 2 (well-conditioned for the small degrees used here).
pub fn polynomial_coefficients<F>(mut f: F, degree: usize) -> std::result::Result<Vec<Complex64>, QPolyError>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let m = degree + 1;
    let nodes: Vec<Complex64> = (0..m)
        .map(|j| 2.0 * Complex64::cis(2.0 * std::f64::consts::PI * j as f64 / m as f64))
        .collect();
    let mut dd: Vec<Complex64> = nodes.iter().map(|&z| f(z)).collect::<Result<_>>()?;
    // divided-difference table, in place: dd[j] becomes f[x_0..x_j]
    for level in 1..m {
        for j in (level..m).rev() {
            dd[j] = (dd[j] - dd[j - 1]) / (nodes[j] - nodes[j - level]);
        }
    }
    // expand the Newton form p = dd[0] + (z-x_0)(dd[1] + (z-x_1)(...)) by
    // Horner: coeffs <- coeffs * (z - x_j) + dd[j]
    let mut coeffs = vec![Complex64::new(0.0, 0.0); m];
    coeffs[0] = dd[m - 1];
    for j in (0..m - 1).rev() {
        let mut next = vec![Complex64::new(0.0, 0.0); m];
        for k in 0..m - 1 {
            next[k + 1] += coeffs[k];
            next[k] -= nodes[j] * coeffs[k];
        }
        next[m - 1] -= nodes[j] * coeffs[m - 1]; // no-op unless degree overflows
        next[0] += dd[j];
        coeffs = next;
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_quad(rng: &mut ChaCha8Rng) -> AWParameterQuad {
        // parameter moduli in a moderate annulus: large products would put
        // |b4 q^k| near 1 (small recurrence denominators), tiny ones starve
        // the hypergeometric sums into catastrophic cancellation
        let mut g = || rng.gen_range(0.35..0.65) * Complex64::cis(rng.gen_range(0.0..6.28));
        AWParameterQuad::new(g(), g(), g(), g())
    }

    /// Sample eta of modulus >= 1, where the evaluations are dominated by
    /// their leading terms and stay well-conditioned.
    fn random_eta(rng: &mut ChaCha8Rng) -> Complex64 {
        rng.gen_range(1.0..2.0) * Complex64::cis(rng.gen_range(0.0..6.28))
    }

    #[test]
    fn qpochhammer_basics() {
        let (a, q) = (c(0.3, 0.7), c(0.5, -0.2));
        assert_eq!(qpochhammer(a, q, 0), c(1.0, 0.0));
        assert_eq!(qpochhammer(a, q, 1), 1.0 - a);
        // middle factor vanishes: (2; 0.5)_3 = (1-2)(1-1)(1-0.5) = 0
        assert_eq!(qpochhammer(c(2.0, 0.0), c(0.5, 0.0), 3), c(0.0, 0.0));
    }

    #[test]
    fn phi_n0_is_one() {
        let q = c(0.4, 0.3);
        let v = basic_hypergeom_terminating(&[c(1.0, 0.0)], &[c(0.5, 0.0)], q, q, 0).unwrap();
        assert_eq!(v, c(1.0, 0.0));
    }

    #[test]
    fn phi_first_term_matches_product_arithmetic() {
        // 4-phi-3 balanced case: the k=1 term is (prod num)/(prod den) * q/(1-q)
        let q = c(0.6, 0.1);
        let num = [c(0.2, 0.1), c(0.3, -0.2), c(-0.4, 0.0), c(0.1, 0.5)];
        let den = [c(0.7, 0.0), c(0.5, 0.3), c(-0.2, 0.1)];
        let v = basic_hypergeom_terminating(&num, &den, q, q, 1).unwrap();
        let t1: Complex64 = num.iter().map(|a| 1.0 - a).product::<Complex64>()
            / den.iter().map(|b| 1.0 - b).product::<Complex64>()
            * q / (1.0 - q);
        assert!((v - (1.0 + t1)).norm() < 1e-14);
    }

    #[test]
    fn termination_factor_is_exactly_zero() {
        // (q^{-n}; q)_k = 0 for k > n (factor 1 - q^{-n} q^{n} = 0)
        let q = c(0.8, 0.3);
        for n in 0..5i64 {
            let f = qpochhammer(q_pow(q, -n), q, n as usize + 1);
            assert!(f.norm() < 1e-12, "n = {n}: {f}");
        }
    }

    #[test]
    fn denominator_zero_is_reported() {
        let q = c(0.5, 0.0);
        let r = basic_hypergeom_terminating(
            &[q_pow(q, -2)],
            &[c(2.0, 0.0)], // 1 - 2*0.5 = 0 at k = 2
            q,
            q,
            2,
        );
        assert!(matches!(r, Err(QPolyError::DenominatorPochhammerZero { k: 2, which: 0 })));
    }

    #[test]
    fn askey_wilson_n0_and_root_independence() {
        let q = Complex64::cis(-0.7);
        let p = AWParameterQuad::new(c(0.3, -0.4), c(0.2, 0.6), c(-0.5, 0.1), c(0.4, 0.4));
        assert_eq!(askey_wilson(0, c(0.37, 0.0), &p, q).unwrap(), c(1.0, 0.0));
        // p_n depends only on eta: compare the u and 1/u assemblies directly
        let (n, eta) = (4usize, c(0.43, -0.21));
        let u = eta_to_u(eta);
        let [a1, a2, a3, a4] = p.a;
        let assemble = |w: Complex64| -> Complex64 {
            q_pow(a1, -(n as i64))
                * qpochhammer_multi(&[a1 * a2, a1 * a3, a1 * a4], q, n)
                * basic_hypergeom_terminating(
                    &[q_pow(q, -(n as i64)), p.b4() * q_pow(q, n as i64 - 1), a1 * w, a1 / w],
                    &[a1 * a2, a1 * a3, a1 * a4],
                    q,
                    q,
                    n,
                )
                .unwrap()
        };
        let (v1, v2) = (assemble(u), assemble(1.0 / u));
        assert!((v1 - v2).norm() < 1e-12 * v1.norm().max(1.0));
    }

    #[test]
    fn askey_wilson_parameter_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let q = Complex64::cis(-0.9);
        for _ in 0..10 {
            let p = random_quad(&mut rng);
            let [a1, a2, a3, a4] = p.a;
            let perm = AWParameterQuad::new(a3, a1, a4, a2);
            let eta = c(rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5));
            let v1 = askey_wilson(3, eta, &p, q).unwrap();
            let v2 = askey_wilson(3, eta, &perm, q).unwrap();
            assert!((v1 - v2).norm() < 1e-10 * v1.norm().max(1.0), "{v1} vs {v2}");
        }
    }

    #[test]
    fn ptilde_matches_scaling_limit() {
        let q = Complex64::cis(-0.6);
        let p = AWParameterQuad::new(c(0.4, -0.3), c(0.1, 0.5), c(-0.6, 0.2), c(0.3, 0.3));
        let [a1, a2, a3, a4] = p.a;
        let eta = c(0.8, -0.1);
        for n in 1..=4usize {
            let direct = ptilde(n, eta, &p, q).unwrap();
            let t = 1e-6;
            let scaled = AWParameterQuad::new(t * a1, t * a2, a3 / t, a4 / t);
            let lim = t.powi(n as i32) * askey_wilson(n, eta / (2.0 * t), &scaled, q).unwrap();
            assert!(
                (direct - lim).norm() < 1e-5 * direct.norm().max(1.0),
                "n = {n}: {direct} vs {lim}"
            );
        }
    }

    #[test]
    fn ptilde_pair_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = Complex64::cis(-1.1);
        for _ in 0..10 {
            let p = random_quad(&mut rng);
            let [a1, a2, a3, a4] = p.a;
            let eta = c(rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5));
            let v = ptilde(3, eta, &p, q).unwrap();
            let s12 = ptilde(3, eta, &AWParameterQuad::new(a2, a1, a3, a4), q).unwrap();
            let s34 = ptilde(3, eta, &AWParameterQuad::new(a1, a2, a4, a3), q).unwrap();
            assert!((v - s12).norm() < 1e-10 * v.norm().max(1.0));
            assert!((v - s34).norm() < 1e-10 * v.norm().max(1.0));
        }
    }

    #[test]
    fn three_term_recurrence_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let q = Complex64::cis(-rng.gen_range(0.3..2.8));
            let p = random_quad(&mut rng);
            let eta = random_eta(&mut rng);
            for variant in [PolyVariant::AskeyWilson, PolyVariant::PTilde] {
                let eval = |n: usize| -> Complex64 {
                    match variant {
                        PolyVariant::AskeyWilson => askey_wilson(n, eta, &p, q).unwrap(),
                        PolyVariant::PTilde => ptilde(n, eta, &p, q).unwrap(),
                    }
                };
                for n in 1..=8usize {
                    let r = aw_recurrence(n, &p, q, variant).unwrap();
                    let lhs = eta * eval(n);
                    let t1 = r.a_n * eval(n + 1);
                    let t2 = r.b_n * eval(n);
                    let t3 = r.c_n * eval(n - 1);
                    let rhs = t1 + t2 + t3;
                    // scale by the term magnitudes: cancellation between the
                    // three terms is what limits the attainable residual
                    let scale = (lhs.norm() + t1.norm() + t2.norm() + t3.norm()).max(1.0);
                    assert!(
                        (lhs - rhs).norm() < 1e-10 * scale,
                        "variant {variant:?} n {n}: residual {}",
                        (lhs - rhs).norm() / scale
                    );
                }
            }
        }
    }

    #[test]
    fn recurrence_a_is_leading_coefficient_ratio() {
        let q = Complex64::cis(-0.8);
        let p = AWParameterQuad::new(c(0.3, -0.2), c(0.5, 0.1), c(-0.4, 0.3), c(0.2, 0.2));
        for variant in [PolyVariant::AskeyWilson, PolyVariant::PTilde] {
            for n in 0..6usize {
                let r = aw_recurrence(n, &p, q, variant).unwrap();
                let ratio = leading_coefficient(n, &p, q, variant)
                    / leading_coefficient(n + 1, &p, q, variant);
                assert!((r.a_n - ratio).norm() < 1e-11 * ratio.norm().max(1.0));
            }
        }
    }

    #[test]
    fn leading_coefficient_trivials() {
        let q = Complex64::cis(-0.8);
        let p = AWParameterQuad::new(c(0.3, -0.2), c(0.5, 0.1), c(-0.4, 0.3), c(0.2, 0.2));
        assert_eq!(leading_coefficient(0, &p, q, PolyVariant::AskeyWilson), c(1.0, 0.0));
        for n in 0..6usize {
            let cn = leading_coefficient(n, &p, q, PolyVariant::AskeyWilson);
            let ctn = leading_coefficient(n, &p, q, PolyVariant::PTilde);
            assert!((ctn - cn / 2f64.powi(n as i32)).norm() < 1e-13 * cn.norm().max(1.0));
        }
    }

    #[test]
    fn leading_coefficient_matches_interpolation() {
        let q = Complex64::cis(-0.7);
        let p = AWParameterQuad::new(c(0.4, -0.1), c(0.3, 0.2), c(-0.2, 0.4), c(0.1, -0.3));
        for n in 1..=6usize {
            for variant in [PolyVariant::AskeyWilson, PolyVariant::PTilde] {
                let coeffs = polynomial_coefficients(
                    |z| match variant {
                        PolyVariant::AskeyWilson => askey_wilson(n, z, &p, q),
                        PolyVariant::PTilde => ptilde(n, z, &p, q),
                    },
                    n,
                )
                .unwrap();
                let lead = leading_coefficient(n, &p, q, variant);
                assert!(
                    (coeffs[n] - lead).norm() < 1e-9 * lead.norm().max(1.0),
                    "n = {n} {variant:?}: {} vs {lead}",
                    coeffs[n]
                );
            }
        }
    }

    #[test]
    fn degree_from_interpolation_is_n() {
        let q = Complex64::cis(-0.5);
        let p = AWParameterQuad::new(c(0.4, -0.1), c(0.3, 0.2), c(-0.2, 0.4), c(0.1, -0.3));
        for n in 0..=8usize {
            // interpolate at degree n+2 and confirm the top two coefficients
            // vanish while the degree-n one does not
            let coeffs =
                polynomial_coefficients(|z| askey_wilson(n, z, &p, q), n + 2).unwrap();
            assert!(coeffs[n + 1].norm() < 1e-8);
            assert!(coeffs[n + 2].norm() < 1e-8);
            assert!(coeffs[n].norm() > 1e-6);
        }
    }

    #[test]
    fn duality_and_reflection() {
        let q = Complex64::cis(-0.9);
        let p = AWParameterQuad::new(c(0.6, -0.2), c(0.4, 0.3), c(-0.3, 0.5), c(0.2, -0.4));
        assert!(duality_check(0, &p, q, PolyVariant::AskeyWilson).unwrap() < 1e-14);
        assert!(duality_check(3, &p, q, PolyVariant::AskeyWilson).unwrap() < 1e-10);
        assert!(duality_check(3, &p, q, PolyVariant::PTilde).unwrap() < 1e-10);
        // reflection p_n(-eta; a | q) = (-1)^n p_n(eta; -a | q)
        let [a1, a2, a3, a4] = p.a;
        let neg = AWParameterQuad::new(-a1, -a2, -a3, -a4);
        for n in 0..5usize {
            let eta = c(0.52, -0.13);
            let lhs = askey_wilson(n, -eta, &p, q).unwrap();
            let rhs = (-1f64).powi(n as i32) * askey_wilson(n, eta, &neg, q).unwrap();
            assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn classical_trivials() {
        let x = c(0.7, 0.2);
        let al = c(1.3, 0.0);
        let be = c(0.4, 0.0);
        assert_eq!(classical_poly(ClassicalKind::Laguerre { alpha: al }, 0, x), c(1.0, 0.0));
        assert_eq!(
            classical_poly(ClassicalKind::Jacobi { alpha: al, beta: be }, 0, x),
            c(1.0, 0.0)
        );
        // P_1^{(a,b)}(x) = (a+1) + (a+b+2)(x-1)/2
        let p1 = classical_poly(ClassicalKind::Jacobi { alpha: al, beta: be }, 1, x);
        let expect = al + 1.0 + (al + be + 2.0) * (x - 1.0) / 2.0;
        assert!((p1 - expect).norm() < 1e-13);
        // L_1^{(a)}(x) = a + 1 - x
        let l1 = classical_poly(ClassicalKind::Laguerre { alpha: al }, 1, x);
        assert!((l1 - (al + 1.0 - x)).norm() < 1e-13);
    }

    #[test]
    fn wilson_w1_vs_series() {
        let a = [c(0.5, 0.1), c(0.8, -0.2), c(1.1, 0.3), c(0.7, 0.0)];
        let [a1, a2, a3, a4] = a;
        let eta = c(0.9, -0.4); // eta = x^2
        let x = eta.sqrt();
        let w1 = classical_poly(ClassicalKind::Wilson { a }, 1, eta);
        // direct k = 0, 1 terms of the 4F3
        let sum = 1.0
            + (-1.0) * (a1 + a2 + a3 + a4) * (a1 + I * x) * (a1 - I * x)
                / ((a1 + a2) * (a1 + a3) * (a1 + a4));
        let expect = (a1 + a2) * (a1 + a3) * (a1 + a4) * sum;
        assert!((w1 - expect).norm() < 1e-12 * expect.norm());
    }

    #[test]
    fn polynomial_coefficients_recovers_cubic() {
        let coeffs = polynomial_coefficients(
            |z| Ok(c(2.0, 1.0) + c(0.0, -3.0) * z + c(1.5, 0.0) * z * z * z),
            3,
        )
        .unwrap();
        assert!((coeffs[0] - c(2.0, 1.0)).norm() < 1e-12);
        assert!((coeffs[1] - c(0.0, -3.0)).norm() < 1e-12);
        assert!(coeffs[2].norm() < 1e-12);
        assert!((coeffs[3] - c(1.5, 0.0)).norm() < 1e-12);
    }
}

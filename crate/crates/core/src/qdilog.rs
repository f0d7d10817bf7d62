//! The quantum dilogarithm Phi_gamma(z).
//!
//! Inside the strip |Im z| < gamma + pi the function is computed from its
//! series expansion (with the rational-gamma variant skipping the vanishing
//! sine denominators), or from the defining contour integral close to the
//! imaginary axis where the series degrades. Outside the strip it is
//! continued by the shift relation Phi(z + i*gamma) = Phi(z - i*gamma)/(1 + e^z),
//! accumulating the multiplicative factors exactly.
//!
//! Also provides the dilogarithm Li2 and the Faddeev product form.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::quad;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Whether gamma/pi is declared rational (gamma = M pi / N, gcd(M,N) = 1).
/// Declared by the caller; never sniffed from the floating value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rationality {
    Irrational,
    Rational { m: u64, n: u64 },
}

#[derive(Debug, thiserror::Error)]
pub enum QDilogError {
    #[error("|Im z| = {imag:.6} lies outside the strip |Im z| < gamma + pi = {bound:.6}")]
    StripViolation { imag: f64, bound: f64 },
    #[error("series tail estimate {tail:.3e} still above tolerance after {terms} terms")]
    TruncationNotConverged { tail: f64, terms: usize },
    #[error("rho = {rho} outside (0, min(pi/gamma, 1)) = (0, {max:.6})")]
    InvalidRho { rho: f64, max: f64 },
    #[error(transparent)]
    QuadratureNotConverged(#[from] quad::QuadratureNotConverged),
    #[error("z within exclusion radius of the pole at {0}")]
    PoleProximity(Complex64),
    #[error("{0}")]
    DomainError(String),
}

pub type Result<T> = std::result::Result<T, QDilogError>;

/// Evaluation context: gamma, its declared rationality, and the numerical
/// policy knobs.
#[derive(Debug, Clone)]
pub struct QDilogContext {
    pub gamma: f64,
    pub rationality: Rationality,
    pub series_truncation: usize,
    pub strip_margin: f64,
    /// Below this |Re z| the series is abandoned for the defining integral.
    pub axis_threshold: f64,
    pub pole_exclusion_radius: f64,
}

impl QDilogContext {
    pub fn new(gamma: f64) -> Self {
        assert!(gamma > 0.0, "gamma must be positive");
        QDilogContext {
            gamma,
            rationality: Rationality::Irrational,
            series_truncation: 20_000,
            strip_margin: 1e-9,
            axis_threshold: 5e-3,
            pole_exclusion_radius: 1e-6 * (gamma + PI),
        }
    }

    pub fn rational(m: u64, n: u64) -> Self {
        assert!(m > 0 && n > 0 && gcd(m, n) == 1, "M, N must be coprime positive");
        let gamma = m as f64 * PI / n as f64;
        let mut ctx = Self::new(gamma);
        ctx.rationality = Rationality::Rational { m, n };
        ctx
    }

    pub fn strip_bound(&self) -> f64 {
        self.gamma + PI
    }

    fn check_strip(&self, z: Complex64) -> Result<()> {
        if z.im.abs() >= self.strip_bound() {
            return Err(QDilogError::StripViolation {
                imag: z.im.abs(),
                bound: self.strip_bound(),
            });
        }
        Ok(())
    }

    /// sin(pi^2 n / gamma), using exact integer reduction when gamma = M pi/N.
    fn sin_pi_term(&self, n: u64) -> f64 {
        match self.rationality {
            Rationality::Irrational => (PI * PI * n as f64 / self.gamma).sin(),
            // pi^2 n / gamma = pi n N / M
            Rationality::Rational { m, n: nn } => {
                let r = (n * nn) % (2 * m);
                (PI * r as f64 / m as f64).sin()
            }
        }
    }

    /// sin(gamma n), using exact integer reduction when gamma = M pi/N.
    fn sin_z_term(&self, n: u64) -> f64 {
        match self.rationality {
            Rationality::Irrational => (self.gamma * n as f64).sin(),
            // gamma n = pi M n / N
            Rationality::Rational { m, n: nn } => {
                let r = (n * m) % (2 * nn);
                (PI * r as f64 / nn as f64).sin()
            }
        }
    }

    fn skip_pi(&self, n: u64) -> bool {
        matches!(self.rationality, Rationality::Rational { m, .. } if n % m == 0)
    }

    fn skip_z(&self, n: u64) -> bool {
        matches!(self.rationality, Rationality::Rational { n: nn, .. } if n % nn == 0)
    }

    /// The quadratic exponent of the product relation and the Re z > 0 branch:
    /// i/(4 gamma) (z^2 + (gamma^2 + pi^2)/3).
    pub fn quadratic_prefactor_log(&self, z: Complex64) -> Complex64 {
        I / (4.0 * self.gamma) * (z * z + (self.gamma * self.gamma + PI * PI) / 3.0)
    }

    /// log Phi_gamma(z) by the series expansion, strictly inside the strip,
    /// |Re z| not too small.
    fn log_series(&self, z: Complex64) -> Result<Complex64> {
        let sign = if z.re > 0.0 { -1.0 } else { 1.0 };
        // Re z > 0 branch uses e^{-pi z n/gamma}, e^{-z n}; Re z < 0 flips signs.
        let decay = z.re.abs();
        let mut sum_pi = Complex64::new(0.0, 0.0);
        let mut sum_z = Complex64::new(0.0, 0.0);
        let mut comp_pi = Complex64::new(0.0, 0.0);
        let mut comp_z = Complex64::new(0.0, 0.0);
        let wpi = sign * PI / self.gamma * z;
        let wz = sign * z;
        let mut quiet = 0usize;
        let mut last_scale = 0.0f64;
        for n in 1..=self.series_truncation as u64 {
            let alt = if n % 2 == 0 { 1.0 } else { -1.0 };
            let c = alt / (2.0 * n as f64);
            let mut t_abs = 0.0f64;
            if !self.skip_pi(n) {
                let t = c * (wpi * n as f64).exp() / self.sin_pi_term(n);
                let y = t - comp_pi;
                let s = sum_pi + y;
                comp_pi = (s - sum_pi) - y;
                sum_pi = s;
                t_abs = t.norm();
            }
            if !self.skip_z(n) {
                let t = c * (wz * n as f64).exp() / self.sin_z_term(n);
                let y = t - comp_z;
                let s = sum_z + y;
                comp_z = (s - sum_z) - y;
                sum_z = s;
                t_abs = t_abs.max(t.norm());
            }
            let scale = 1.0 + sum_pi.norm() + sum_z.norm();
            last_scale = t_abs;
            if t_abs < 1e-17 * scale {
                quiet += 1;
                if quiet >= 4 {
                    let corr = self.rational_limit_correction(z);
                    return Ok(if z.re > 0.0 {
                        self.quadratic_prefactor_log(z) + I * (sum_pi + sum_z) + corr
                    } else {
                        -I * (sum_pi + sum_z) + corr
                    });
                }
            } else {
                quiet = 0;
            }
            // tail will never shrink if the decay is null
            if decay == 0.0 && n > 64 {
                break;
            }
        }
        Err(QDilogError::TruncationNotConverged {
            tail: last_scale,
            terms: self.series_truncation,
        })
    }

    /// At gamma = M pi / N the terms n = kM of the pi-sum and n = kN of the
    /// z-sum have vanishing sine denominators; their pairwise sum stays
    /// finite in the limit. The 1/epsilon parts cancel and the finite
    /// remainder sums to a closed form in Li2 and log, which must accompany
    /// the sums restricted to the non-vanishing denominators.
    fn rational_limit_correction(&self, z: Complex64) -> Complex64 {
        let Rationality::Rational { m, n } = self.rationality else {
            return Complex64::new(0.0, 0.0);
        };
        let sigma = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
        let (mf, nf) = (m as f64, n as f64);
        if z.re > 0.0 {
            let t = sigma * (-nf * z).exp();
            I * (-dilog(t) / (2.0 * PI * mf * nf) + z * (1.0 - t).ln() / (2.0 * PI * mf))
        } else {
            let t = sigma * (nf * z).exp();
            -I * (-dilog(t) / (2.0 * PI * mf * nf) - z * (1.0 - t).ln() / (2.0 * PI * mf))
        }
    }

    /// log Phi_gamma(z) by the defining contour integral (half-line fold plus
    /// semicircle of radius rho around the origin).
    fn log_integral(&self, z: Complex64, rho: f64) -> Result<Complex64> {
        let rho_max = (PI / self.gamma).min(1.0);
        if !(rho > 0.0 && rho < rho_max) {
            return Err(QDilogError::InvalidRho { rho, max: rho_max });
        }
        let gamma = self.gamma;
        let gap = self.strip_bound() - z.im.abs();
        let t_max = (rho + 1.0).max(42.0 / gap);
        let line = quad::integrate(
            |t| {
                // sin(zt) / (2i sinh(gamma t) sinh(pi t) t), written with the
                // dominant exponentials cancelled so large t cannot overflow
                let num = ((I * z - gamma - PI) * t).exp() - ((-I * z - gamma - PI) * t).exp();
                let den = (1.0 - (-2.0 * gamma * t).exp()) * (1.0 - (-2.0 * PI * t).exp()) * t;
                -num / den
            },
            rho,
            t_max,
            1e-14,
            1e-13,
            4000,
        )?;
        let semicircle = quad::integrate(
            |theta| {
                let t = rho * Complex64::new(0.0, theta).exp();
                (-I * z * t).exp() / (4.0 * I * (gamma * t).sinh() * (PI * t).sinh())
            },
            0.0,
            PI,
            1e-14,
            1e-13,
            2000,
        )?;
        Ok(line.value + semicircle.value)
    }

    /// log Phi_gamma(z) anywhere in the strip: series away from the imaginary
    /// axis, defining integral close to it.
    pub fn log_qdilog_strip(&self, z: Complex64) -> Result<Complex64> {
        self.check_strip(z)?;
        if z.re.abs() >= self.axis_threshold {
            self.log_series(z)
        } else {
            self.log_integral(z, 0.5 * (PI / self.gamma).min(1.0))
        }
    }

    /// Phi_gamma(z) by the series expansion; strip only.
    pub fn eval_qdilog_series(&self, z: Complex64) -> Result<Complex64> {
        self.check_strip(z)?;
        if z.re.abs() >= self.axis_threshold {
            Ok(self.log_series(z)?.exp())
        } else {
            // Re z -> 0 is defined as a two-sided limit; take it through the
            // defining integral, which is regular across the axis.
            Ok(self.log_integral(z, 0.5 * (PI / self.gamma).min(1.0))?.exp())
        }
    }

    /// Phi_gamma(z) by the integral representation with caller-chosen rho.
    pub fn eval_qdilog_integral(&self, z: Complex64, rho: f64) -> Result<Complex64> {
        self.check_strip(z)?;
        Ok(self.log_integral(z, rho)?.exp())
    }

    /// Distance from z to the nearest pole i((2n1-1) gamma + (2n2-1) pi),
    /// n1, n2 >= 1, together with that pole.
    pub fn nearest_pole(&self, z: Complex64) -> (f64, Complex64) {
        let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
        if z.im < self.gamma + PI - 1.0 {
            // nearest lattice point is at least gamma+pi up; quick bound
            let p = I * (self.gamma + PI);
            return ((z - p).norm(), p);
        }
        let n2_max = ((z.im / (2.0 * PI)) as i64 + 2).max(1);
        for n2 in 1..=n2_max {
            let rem = z.im - (2 * n2 - 1) as f64 * PI;
            let guess = (rem / (2.0 * self.gamma) + 0.5).round() as i64;
            for n1 in [guess - 1, guess, guess + 1] {
                if n1 < 1 {
                    continue;
                }
                let p = I * ((2 * n1 - 1) as f64 * self.gamma + (2 * n2 - 1) as f64 * PI);
                let d = (z - p).norm();
                if d < best.0 {
                    best = (d, p);
                }
            }
        }
        best
    }

    /// Phi_gamma(z) on the whole plane: reduce into the strip by the
    /// gamma-shift relation, accumulating the 1/(1 + e^z) factors exactly.
    pub fn eval_qdilog(&self, z: Complex64) -> Result<Complex64> {
        if z.im > 0.0 {
            let (d, pole) = self.nearest_pole(z);
            if d < self.pole_exclusion_radius {
                return Err(QDilogError::PoleProximity(pole));
            }
        }
        let bound = self.strip_bound() - self.strip_margin.max(1e-12);
        let mut zz = z;
        let mut factor = Complex64::new(1.0, 0.0);
        let step = 2.0 * self.gamma;
        let mut guard = 0usize;
        while zz.im >= bound {
            // Phi(z) = Phi(z - 2 i gamma) / (1 + e^{z - i gamma})
            factor /= 1.0 + (zz - I * self.gamma).exp();
            zz -= I * step;
            guard += 1;
            if guard > 200_000 {
                return Err(QDilogError::DomainError(
                    "continuation did not reach the strip".into(),
                ));
            }
        }
        while zz.im <= -bound {
            // Phi(z) = Phi(z + 2 i gamma) (1 + e^{z + i gamma})
            factor *= 1.0 + (zz + I * self.gamma).exp();
            zz += I * step;
            guard += 1;
            if guard > 200_000 {
                return Err(QDilogError::DomainError(
                    "continuation did not reach the strip".into(),
                ));
            }
        }
        Ok(factor * self.log_qdilog_strip(zz)?.exp())
    }
}

/// Dilogarithm Li2(z) = sum z^k / k^2, continued by the inversion, reflection
/// and Landen identities.
pub fn dilog(z: Complex64) -> Complex64 {
    dilog_inner(z, 0)
}

fn dilog_inner(z: Complex64, depth: usize) -> Complex64 {
    let pi2_6 = PI * PI / 6.0;
    if z.norm() <= 0.5 || depth > 8 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 1..500u32 {
            term *= z;
            let add = term / (k as f64 * k as f64);
            sum += add;
            if add.norm() < 1e-17 * (sum.norm() + 1.0) {
                break;
            }
        }
        return sum;
    }
    if z.norm() > 1.0 {
        // Li2(z) = -Li2(1/z) - pi^2/6 - ln^2(-z)/2
        let l = (-z).ln();
        return -dilog_inner(1.0 / z, depth + 1) - pi2_6 - 0.5 * l * l;
    }
    if (1.0 - z).norm() <= 0.5 {
        // Li2(z) = pi^2/6 - ln z ln(1-z) - Li2(1-z)
        let w = 1.0 - z;
        if w.norm() < 1e-200 {
            return Complex64::new(pi2_6, 0.0);
        }
        return pi2_6 - z.ln() * w.ln() - dilog_inner(w, depth + 1);
    }
    // Landen: Li2(z) = -Li2(z/(z-1)) - ln^2(1-z)/2
    let l = (1.0 - z).ln();
    -dilog_inner(z / (z - 1.0), depth + 1) - 0.5 * l * l
}

/// Infinite q-Pochhammer (a; q)_inf, |q| < 1, truncated once the remaining
/// factors are within tolerance of 1.
pub fn qpochhammer_inf(a: Complex64, q: Complex64) -> Result<Complex64> {
    if q.norm() >= 1.0 {
        return Err(QDilogError::DomainError(format!(
            "|q| = {} >= 1 in infinite q-Pochhammer",
            q.norm()
        )));
    }
    let mut prod = Complex64::new(1.0, 0.0);
    let mut aq = a;
    for _ in 0..100_000 {
        if aq.norm() < 1e-18 {
            return Ok(prod);
        }
        prod *= 1.0 - aq;
        aq *= q;
    }
    Err(QDilogError::DomainError(
        "infinite q-Pochhammer did not truncate".into(),
    ))
}

/// Faddeev's quantum dilogarithm in its infinite product form, Im b^2 > 0.
pub fn eval_faddeev_product(b: Complex64, z: Complex64) -> Result<Complex64> {
    let b2 = b * b;
    if b2.im <= 0.0 {
        return Err(QDilogError::DomainError(format!(
            "Im b^2 = {} <= 0: product form diverges",
            b2.im
        )));
    }
    let two_pi_i = 2.0 * PI * I;
    let q_num = (-two_pi_i / b2).exp();
    let q_den = (two_pi_i * b2).exp();
    let a_num = -(2.0 * PI / b * z - PI * I / b2).exp();
    let a_den = -(2.0 * PI * b * z + PI * I * b2).exp();
    Ok(qpochhammer_inf(a_num, q_num)? / qpochhammer_inf(a_den, q_den)?)
}

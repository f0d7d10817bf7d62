//! The four solvable discrete quantum-mechanical systems with pure imaginary
//! shifts built on the sinusoidal coordinates eta(x) = e^{-x}, e^{x},
//! cosh x, sinh x: validated parameters, factorised potentials,
//! quantum-dilogarithm ground states, closed-form eigenpolynomials and
//! eigenvalues, finite-spectrum bookkeeping, and the conjectured
//! normalization constants h_n.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::qdilog::{QDilogContext, QDilogError};
use crate::qpoly::{self, AWParameterQuad, QPolyError};

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Reduces the imaginary part to (-pi, pi] without changing e^w.
fn wrap_exponent(w: Complex64) -> Complex64 {
    let mut im = w.im.rem_euclid(2.0 * PI);
    if im > PI {
        im -= 2.0 * PI;
    }
    Complex64::new(w.re, im)
}

/// Principal log of e^w - 1, overflow-safe for large Re w. The eigenfunction
/// identities treat the exponentials pointwise (e^w is periodic in Im w), so
/// the principal branch of the value is the branch they close under.
fn log_em1(w: Complex64) -> Complex64 {
    let w = wrap_exponent(w);
    if w.re > 1.0 {
        w + (1.0 - (-w).exp()).ln()
    } else {
        (w.exp() - 1.0).ln()
    }
}

/// Principal log of 1 + e^w, overflow-safe for large Re w.
fn log_1pe(w: Complex64) -> Complex64 {
    let w = wrap_exponent(w);
    if w.re > 1.0 {
        w + (1.0 + (-w).exp()).ln()
    } else {
        (1.0 + w.exp()).ln()
    }
}

/// Which sinusoidal coordinate the system is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// eta(x) = e^{-x},  x in (-inf, inf)
    V,
    /// eta(x) = e^{x},   x in (-inf, inf)
    VI,
    /// eta(x) = cosh x,  x in (0, inf)
    VII,
    /// eta(x) = sinh x,  x in (-inf, inf)
    VIII,
}

impl CaseTag {
    pub fn domain_is_half_line(self) -> bool {
        self == CaseTag::VII
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SystemError {
    #[error("parameter range violated: {0}")]
    RangeViolation(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("empty spectrum: n_max would be negative")]
    EmptySpectrum,
    #[error("index n = {n} beyond the finite spectrum n_max = {n_max}")]
    IndexBeyondSpectrum { n: usize, n_max: usize },
    #[error("x = {0} is a pole of the potential")]
    PoleOfPotential(Complex64),
    #[error("evaluation hit a quantum-dilogarithm pole: {0}")]
    EvaluationPole(#[from] QDilogError),
    #[error(transparent)]
    Poly(#[from] QPolyError),
    #[error("shifted parameters leave the valid range at step {0}")]
    ShiftedParamsOutOfRange(usize),
}

pub type Result<T> = std::result::Result<T, SystemError>;

/// Gamma, either as a plain value or declared as M pi / N.
#[derive(Debug, Clone, Copy)]
pub enum GammaSpec {
    Value(f64),
    RationalPi { m: u64, n: u64 },
}

impl GammaSpec {
    pub fn value(self) -> f64 {
        match self {
            GammaSpec::Value(g) => g,
            GammaSpec::RationalPi { m, n } => m as f64 * PI / n as f64,
        }
    }
}

/// Validated parameters of one system, immutable after build.
#[derive(Debug, Clone)]
pub struct SystemParams {
    pub case: CaseTag,
    pub gamma: f64,
    pub gamma_rational: Option<(u64, u64)>,
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    /// Only meaningful for case VIII; fixed to 1 otherwise so K pi / gamma
    /// reduces to pi / gamma in the shared formulas.
    pub k: i32,
    pub n_max: usize,
}

impl SystemParams {
    pub fn build(
        case: CaseTag,
        gamma: GammaSpec,
        alpha1: f64,
        alpha2: f64,
        beta1: f64,
        beta2: f64,
        k: i32,
    ) -> Result<Self> {
        let g = gamma.value();
        if !(g > 0.0 && g < PI) {
            return Err(SystemError::RangeViolation(format!(
                "gamma = {g} outside (0, pi)"
            )));
        }
        let k = if case == CaseTag::VIII { k } else { 1 };
        if case == CaseTag::VIII && !(-1..=1).contains(&k) {
            return Err(SystemError::RangeViolation(format!("K = {k} not in {{-1,0,1}}")));
        }
        let alpha = [alpha1, alpha2];
        let beta = [beta1, beta2];
        for (j, &aj) in alpha.iter().enumerate() {
            if !(-PI < g * aj && g * aj <= PI) {
                return Err(SystemError::RangeViolation(format!(
                    "gamma*alpha{} = {} outside (-pi, pi]",
                    j + 1,
                    g * aj
                )));
            }
        }
        let asum = alpha1 + alpha2;
        // hermiticity gates
        let gate_bound = k as f64 * PI + g / 2.0;
        if !(-g * asum > gate_bound) {
            return Err(SystemError::RangeViolation(format!(
                "-gamma*alpha = {} must exceed K*pi + gamma/2 = {}",
                -g * asum,
                gate_bound
            )));
        }
        let lower = |ga: f64| g - PI < ga && ga < 0.0; // "negative window"
        let upper = |ga: f64| g < ga && ga < PI; // "positive window"
        let windows_ok = match (case, k) {
            (CaseTag::VIII, -1) => upper(g * alpha1) && upper(g * alpha2),
            (CaseTag::VIII, 0) => {
                (lower(g * alpha1) && upper(g * alpha2))
                    || (lower(g * alpha2) && upper(g * alpha1))
            }
            _ => lower(g * alpha1) && lower(g * alpha2),
        };
        if !windows_ok {
            return Err(SystemError::RangeViolation(format!(
                "gamma*alpha_j = ({}, {}) outside the case window",
                g * alpha1,
                g * alpha2
            )));
        }
        // n_max = greatest integer strictly below 1/2 - alpha - K pi / gamma
        let bound = 0.5 - asum - k as f64 * PI / g;
        let nearest = bound.round();
        if (bound - nearest).abs() < 1e-12 {
            return Err(SystemError::DegenerateParameters(format!(
                "spectrum bound {bound} within 1e-12 of an integer; [x]' is discontinuous here"
            )));
        }
        let floor = bound.floor();
        if floor < 0.0 {
            return Err(SystemError::EmptySpectrum);
        }
        let n_max = floor as usize;
        let gamma_rational = match gamma {
            GammaSpec::Value(_) => None,
            GammaSpec::RationalPi { m, n } => Some((m, n)),
        };
        let sys = SystemParams {
            case,
            gamma: g,
            gamma_rational,
            alpha,
            beta,
            k,
            n_max,
        };
        // degenerate Pochhammer guard: no product of two eigenpolynomial
        // parameters may satisfy a_i a_j q^m = 1 for the orders that occur
        let q = sys.q();
        let aw = sys.aw_params();
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let mut prod = aw.a[i] * aw.a[j];
                for _ in 0..=n_max {
                    if (1.0 - prod).norm() < 1e-10 {
                        return Err(SystemError::DegenerateParameters(format!(
                            "(a_{} a_{}; q)_k vanishes within 1e-10",
                            i + 1,
                            j + 1
                        )));
                    }
                    prod *= q;
                }
            }
        }
        Ok(sys)
    }

    pub fn q(&self) -> Complex64 {
        Complex64::cis(-self.gamma)
    }

    pub fn alpha_sum(&self) -> f64 {
        self.alpha[0] + self.alpha[1]
    }

    /// a_j = e^{-i gamma lambda_j}, lambda_j = alpha_j + i beta_j.
    pub fn a(&self, j: usize) -> Complex64 {
        (-I * self.gamma * Complex64::new(self.alpha[j], self.beta[j])).exp()
    }

    /// alpha_j^- : gamma alpha_j shifted by -+ pi back into (-pi, pi].
    pub fn alpha_minus(&self, j: usize) -> f64 {
        let ga = self.gamma * self.alpha[j];
        if ga <= 0.0 {
            (ga + PI) / self.gamma
        } else {
            (ga - PI) / self.gamma
        }
    }

    /// The Askey-Wilson-type parameter quadruple entering P_n.
    pub fn aw_params(&self) -> AWParameterQuad {
        let (a1, a2) = (self.a(0), self.a(1));
        let (r1, r2) = (1.0 / a1.conj(), 1.0 / a2.conj());
        match self.case {
            CaseTag::VIII => AWParameterQuad::new(I * a1, I * a2, -I * r1, -I * r2),
            _ => AWParameterQuad::new(-a1, -a2, -r1, -r2),
        }
    }

    /// Quantum-dilogarithm context at gamma/2 (the ground state and h_n are
    /// built from Phi_{gamma/2}).
    pub fn half_gamma_ctx(&self) -> QDilogContext {
        match self.gamma_rational {
            Some((m, n)) if m % 2 == 0 => QDilogContext::rational(m / 2, n),
            Some((m, n)) => QDilogContext::rational(m, 2 * n),
            None => QDilogContext::new(self.gamma / 2.0),
        }
    }

    /// The sinusoidal coordinate.
    pub fn eta(&self, x: Complex64) -> Complex64 {
        match self.case {
            CaseTag::V => (-x).exp(),
            CaseTag::VI => x.exp(),
            CaseTag::VII => x.cosh(),
            CaseTag::VIII => x.sinh(),
        }
    }

    /// The auxiliary function of the shape-invariance machinery.
    pub fn varphi(&self, x: Complex64) -> Complex64 {
        match self.case {
            CaseTag::V => (-x).exp(),
            CaseTag::VI => x.exp(),
            CaseTag::VII => 2.0 * x.sinh(),
            CaseTag::VIII => 2.0 * x.cosh(),
        }
    }

    /// The explicit unit phase in front of V whose square root is prescribed
    /// as e^{i pi K / 2} rather than a principal root: K = 1 for cases V,
    /// VII; K = -1 for case VI; K as given for case VIII.
    fn phase_k(&self) -> i32 {
        match self.case {
            CaseTag::V | CaseTag::VII => 1,
            CaseTag::VI => -1,
            CaseTag::VIII => self.k,
        }
    }

    /// The factorised potential without its unit phase e^{i pi K}.
    fn potential_body(&self, x: Complex64) -> Result<Complex64> {
        let g = self.gamma;
        let asum = self.alpha_sum();
        let (a1, a2) = (self.a(0), self.a(1));
        let ex = x.exp();
        match self.case {
            CaseTag::V => {
                // e^{-i gamma/2} e^{i gamma alpha} prod (1 + a_j^{*-1} e^x)
                let f = (1.0 + ex / a1.conj()) * (1.0 + ex / a2.conj());
                Ok(Complex64::cis(-g / 2.0 + g * asum) * f)
            }
            CaseTag::VI => {
                // e^{i gamma/2} e^{-i gamma alpha} prod (1 + a_j^{-1} e^{-x})
                let f = (1.0 + 1.0 / (a1 * ex)) * (1.0 + 1.0 / (a2 * ex));
                Ok(Complex64::cis(g / 2.0 - g * asum) * f)
            }
            CaseTag::VII => {
                // for |e^x| > 1 cancel e^{4x} between numerator and
                // denominator first: the naive complex division would
                // overflow |den|^2 around Re x ~ 89
                let (num, den) = if ex.norm() > 1.0 {
                    let em = 1.0 / ex;
                    (
                        (em + a1) * (em + a2) * (em + 1.0 / a1.conj()) * (em + 1.0 / a2.conj()),
                        (1.0 - em * em) * (Complex64::cis(-g) - em * em),
                    )
                } else {
                    (
                        (1.0 + a1 * ex)
                            * (1.0 + a2 * ex)
                            * (1.0 + ex / a1.conj())
                            * (1.0 + ex / a2.conj()),
                        (ex * ex - 1.0) * (Complex64::cis(-g) * ex * ex - 1.0),
                    )
                };
                if den.norm() < 1e-14 {
                    return Err(SystemError::PoleOfPotential(x));
                }
                Ok(Complex64::cis(-g / 2.0 + g * asum) * num / den)
            }
            CaseTag::VIII => {
                let (num, den) = if ex.norm() > 1.0 {
                    let em = 1.0 / ex;
                    (
                        (em + a1) * (em + a2) * (em - 1.0 / a1.conj()) * (em - 1.0 / a2.conj()),
                        (em * em + 1.0) * (em * em + Complex64::cis(-g)),
                    )
                } else {
                    (
                        (1.0 + a1 * ex)
                            * (1.0 + a2 * ex)
                            * (1.0 - ex / a1.conj())
                            * (1.0 - ex / a2.conj()),
                        (1.0 + ex * ex) * (1.0 + Complex64::cis(-g) * ex * ex),
                    )
                };
                if den.norm() < 1e-14 {
                    return Err(SystemError::PoleOfPotential(x));
                }
                Ok(Complex64::cis(-g / 2.0 + g * asum) * num / den)
            }
        }
    }

    /// V(x; lambda), phase included.
    pub fn potential(&self, x: Complex64) -> Result<Complex64> {
        let phase = if self.phase_k() % 2 == 0 { 1.0 } else { -1.0 };
        Ok(phase * self.potential_body(x)?)
    }

    /// V*(x; lambda): the conjugate-coefficient function, V*(x) =
    /// conj(V(conj(x))).
    pub fn potential_star(&self, x: Complex64) -> Result<Complex64> {
        Ok(self.potential(x.conj())?.conj())
    }

    /// sqrt(V(x; lambda)) with the prescribed root e^{i pi K/2} of the unit
    /// phase and factor-wise principal roots of the rest. For real x inside
    /// the domain every factor stays off the negative real axis, so the
    /// factor-wise principal root is the analytic branch.
    pub fn sqrt_potential(&self, x: Complex64) -> Result<Complex64> {
        let g = self.gamma;
        let asum = self.alpha_sum();
        let (a1, a2) = (self.a(0), self.a(1));
        let ex = x.exp();
        let root_phase = Complex64::cis(self.phase_k() as f64 * PI / 2.0);
        let body = match self.case {
            CaseTag::V => {
                Complex64::cis((-g / 2.0 + g * asum) / 2.0)
                    * (1.0 + ex / a1.conj()).sqrt()
                    * (1.0 + ex / a2.conj()).sqrt()
            }
            CaseTag::VI => {
                Complex64::cis((g / 2.0 - g * asum) / 2.0)
                    * (1.0 + 1.0 / (a1 * ex)).sqrt()
                    * (1.0 + 1.0 / (a2 * ex)).sqrt()
            }
            CaseTag::VII => {
                // interleave the divisions so intermediate magnitudes stay
                // near O(1): dividing one ~e^{2x} product by another would
                // overflow the naive complex division at large Re x
                let d1 = (ex * ex - 1.0).sqrt();
                let d2 = (Complex64::cis(-g) * ex * ex - 1.0).sqrt();
                if d1.norm() * d2.norm() < 1e-14 {
                    return Err(SystemError::PoleOfPotential(x));
                }
                Complex64::cis((-g / 2.0 + g * asum) / 2.0)
                    * ((1.0 + a1 * ex).sqrt() / d1)
                    * ((1.0 + a2 * ex).sqrt() / d2)
                    * (1.0 + ex / a1.conj()).sqrt()
                    * (1.0 + ex / a2.conj()).sqrt()
            }
            CaseTag::VIII => {
                let d1 = (1.0 + ex * ex).sqrt();
                let d2 = (1.0 + Complex64::cis(-g) * ex * ex).sqrt();
                if d1.norm() * d2.norm() < 1e-14 {
                    return Err(SystemError::PoleOfPotential(x));
                }
                Complex64::cis((-g / 2.0 + g * asum) / 2.0)
                    * ((1.0 + a1 * ex).sqrt() / d1)
                    * ((1.0 + a2 * ex).sqrt() / d2)
                    * (1.0 - ex / a1.conj()).sqrt()
                    * (1.0 - ex / a2.conj()).sqrt()
            }
        };
        Ok(root_phase * body)
    }

    /// sqrt(V*)(x) = conj(sqrt(V)(conj(x))).
    pub fn sqrt_potential_star(&self, x: Complex64) -> Result<Complex64> {
        Ok(self.sqrt_potential(x.conj())?.conj())
    }

    /// The ground-state wavefunction phi_0(x; lambda).
    pub fn groundstate(&self, x: Complex64) -> Result<Complex64> {
        Ok(self.log_groundstate(x)?.exp())
    }

    /// log phi_0(x; lambda), assembled from Phi_{gamma/2} quotients;
    /// overflow-safe at large |Re x|.
    pub fn log_groundstate(&self, x: Complex64) -> Result<Complex64> {
        let g = self.gamma;
        let ctx = self.half_gamma_ctx();
        let pi_over_g = PI / g;
        let mut log = Complex64::new(0.0, 0.0);
        let mut phi_ratio_log = Complex64::new(0.0, 0.0);
        let mut add_ratio = |num: Complex64, den: Complex64| -> Result<()> {
            phi_ratio_log += ctx.log_qdilog_strip(num)? - ctx.log_qdilog_strip(den)?;
            Ok(())
        };
        match self.case {
            CaseTag::V | CaseTag::VI => {
                let s = if self.case == CaseTag::V { x } else { -x };
                log += (0.5 - self.alpha_sum() - pi_over_g) * s;
                for j in 0..2 {
                    let shift = I * g * (0.5 - self.alpha[j]);
                    add_ratio(s - g * self.beta[j] + shift, s - g * self.beta[j] - shift)?;
                }
            }
            CaseTag::VII => {
                log += (0.5 - self.alpha_sum() - pi_over_g) * x;
                log += 0.5 * (log_em1(2.0 * x) + log_em1(4.0 * pi_over_g * x));
                for j in 0..2 {
                    let shift = I * g * (0.5 - self.alpha[j]);
                    add_ratio(x + g * self.beta[j] + shift, x + g * self.beta[j] - shift)?;
                    add_ratio(x - g * self.beta[j] + shift, x - g * self.beta[j] - shift)?;
                }
            }
            CaseTag::VIII => {
                log += (0.5 - self.alpha_sum() - self.k as f64 * pi_over_g) * x;
                log += 0.5 * log_1pe(2.0 * x);
                for j in 0..2 {
                    let shift = I * g * (0.5 - self.alpha[j]);
                    let shift_m = I * g * (0.5 - self.alpha_minus(j));
                    add_ratio(x + g * self.beta[j] + shift, x + g * self.beta[j] - shift)?;
                    add_ratio(x - g * self.beta[j] + shift_m, x - g * self.beta[j] - shift_m)?;
                }
            }
        }
        Ok(log + 0.5 * phi_ratio_log)
    }

    /// E_n.
    pub fn energy(&self, n: usize) -> Result<f64> {
        if n > self.n_max {
            return Err(SystemError::IndexBeyondSpectrum { n, n_max: self.n_max });
        }
        Ok(self.energy_unchecked(n))
    }

    /// E_n without the finite-spectrum gate; the triangular-matrix and
    /// closure cross-checks need a little slack beyond n_max.
    pub(crate) fn energy_unchecked(&self, n: usize) -> f64 {
        let g = self.gamma;
        let sign = match self.case {
            CaseTag::VIII => {
                if (self.k + 1) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            _ => 1.0,
        };
        sign * 4.0
            * (g / 2.0 * n as f64).sin()
            * (g / 2.0 * (n as f64 - 1.0 + 2.0 * self.alpha_sum())).sin()
    }

    /// P_n(eta; lambda), the closed-form eigenpolynomial.
    pub fn eigenpoly(&self, n: usize, eta_value: Complex64) -> Result<Complex64> {
        if n > self.n_max {
            return Err(SystemError::IndexBeyondSpectrum { n, n_max: self.n_max });
        }
        self.eigenpoly_unchecked(n, eta_value)
    }

    pub(crate) fn eigenpoly_unchecked(&self, n: usize, eta_value: Complex64) -> Result<Complex64> {
        let g = self.gamma;
        let nf = n as f64;
        let q = self.q();
        let aw = self.aw_params();
        let prefactor = Complex64::cis(
            -PI / 2.0 * nf + g * 0.75 * nf * (nf - 1.0) + g * self.alpha_sum() * nf,
        );
        let core = match self.case {
            CaseTag::V | CaseTag::VI => qpoly::ptilde(n, eta_value, &aw, q)?,
            CaseTag::VII => qpoly::askey_wilson(n, eta_value, &aw, q)?,
            CaseTag::VIII => {
                (-I).powu(n as u32) * qpoly::askey_wilson(n, I * eta_value, &aw, q)?
            }
        };
        Ok(prefactor * core)
    }

    /// The left side of the eigenvalue equation for the similarity
    /// transformed Hamiltonian: V(x)(P_n(eta(x - i gamma)) - P_n(eta(x))) +
    /// V*(x)(P_n(eta(x + i gamma)) - P_n(eta(x))).
    pub fn schrodinger_lhs(&self, n: usize, x: Complex64) -> Result<Complex64> {
        let ig = I * self.gamma;
        let p0 = self.eigenpoly_unchecked(n, self.eta(x))?;
        let pm = self.eigenpoly_unchecked(n, self.eta(x - ig))?;
        let pp = self.eigenpoly_unchecked(n, self.eta(x + ig))?;
        Ok(self.potential(x)? * (pm - p0) + self.potential_star(x)? * (pp - p0))
    }

    /// The shape-invariance shift lambda -> lambda + delta, delta = (1/2, 1/2).
    pub fn shifted(&self, steps: usize) -> Result<SystemParams> {
        let d = 0.5 * steps as f64;
        SystemParams::build(
            self.case,
            match self.gamma_rational {
                Some((m, n)) => GammaSpec::RationalPi { m, n },
                None => GammaSpec::Value(self.gamma),
            },
            self.alpha[0] + d,
            self.alpha[1] + d,
            self.beta[0],
            self.beta[1],
            self.k,
        )
        .map_err(|_| SystemError::ShiftedParamsOutOfRange(steps))
    }

    /// The conjectured normalization constant h_n, returned as the complex
    /// evaluation of the printed formula (its imaginary part vanishing is
    /// itself a check).
    pub fn conjectured_norm(&self, n: usize) -> Result<Complex64> {
        if n > self.n_max {
            return Err(SystemError::IndexBeyondSpectrum { n, n_max: self.n_max });
        }
        let g = self.gamma;
        let nf = n as f64;
        let al = self.alpha_sum();
        let (b1, b2) = (self.beta[0], self.beta[1]);
        let ctx = self.half_gamma_ctx();
        let phi = |z: Complex64| ctx.eval_qdilog(z);
        let mut h = Complex64::new(2.0 * PI, 0.0);
        // shared sine product; case VIII carries (-1)^{K+1} per factor
        let sine_sign = if self.case == CaseTag::VIII && (self.k + 1) % 2 != 0 {
            -1.0
        } else {
            1.0
        };
        for kk in 0..n {
            let kf = kk as f64;
            h *= sine_sign
                * 4.0
                * (g / 2.0 * (kf + 1.0)).sin()
                * (g * (nf + al - 1.0 - kf / 2.0)).sin();
        }
        h *= phi(I * (PI - g / 2.0))?;
        match self.case {
            CaseTag::V | CaseTag::VI => {
                h /= phi(-I * (3.0 * PI + g * (2.0 * nf + 2.0 * al - 0.5)))?;
                for j in 0..2 {
                    h *= phi(-I * (PI + g * (nf + 2.0 * self.alpha[j] - 0.5)))?;
                }
                for eps in [1.0, -1.0] {
                    h *= phi(Complex64::new(eps * g * (b1 - b2), 0.0)
                        - I * (PI + g * (nf + al - 0.5)))?;
                }
                let exp_im = g / 2.0
                    * ((self.alpha[0] - self.alpha[1]).powi(2)
                        - (b1 - b2).powi(2)
                        - (nf + al) * (2.0 * PI / g + 1.0)
                        - 8.0 * PI * PI / (3.0 * g * g)
                        - PI / g
                        + 1.0 / 3.0);
                h *= Complex64::cis(exp_im);
                h *= (-(b1 + b2) * (PI + g * (nf + al - 0.5))).exp();
            }
            CaseTag::VII => {
                h /= phi(-I * (3.0 * PI + g * (2.0 * nf + 2.0 * al - 0.5)))?;
                for j in 0..2 {
                    h *= phi(-I * (PI + g * (nf + 2.0 * self.alpha[j] - 0.5)))?;
                }
                for e1 in [1.0, -1.0] {
                    for e2 in [1.0, -1.0] {
                        h *= phi(Complex64::new(g * (e1 * b1 + e2 * b2), 0.0)
                            - I * (PI + g * (nf + al - 0.5)))?;
                    }
                }
                let exp_im = g / 2.0
                    * ((nf + al - 1.0).powi(2)
                        + (self.alpha[0] - self.alpha[1]).powi(2)
                        - 2.0 * (b1 * b1 + b2 * b2)
                        - 2.0 * (0.5 + PI / g).powi(2));
                h *= Complex64::cis(exp_im);
            }
            CaseTag::VIII => {
                let kf = self.k as f64;
                h /= phi(-I * ((1.0 + 2.0 * kf) * PI + g * (2.0 * nf + 2.0 * al - 0.5)))?;
                let sgn = [self.alpha[0].signum(), self.alpha[1].signum()];
                for j in 0..2 {
                    h *= phi(-I * (-sgn[j] * PI + g * (nf + 2.0 * self.alpha[j] - 0.5)))?;
                }
                for eps in [1.0, -1.0] {
                    h *= phi(Complex64::new(eps * g * (b1 - b2), 0.0)
                        - I * ((1.0 + kf - kf * kf) * PI + g * (nf + al - 0.5)))?;
                }
                for eps in [1.0, -1.0] {
                    h *= phi(Complex64::new(eps * g * (b1 + b2), 0.0)
                        - I * (kf * (kf + 1.0) * PI + g * (nf + al - 0.5)))?;
                }
                let exp_im = g / 2.0
                    * ((nf + al).powi(2)
                        + 2.0 * (nf + al) * (kf * PI / g - 1.0)
                        + (self.alpha[0] - self.alpha[1])
                            * (self.alpha[0] - self.alpha[1]
                                - PI / g * (sgn[0] - sgn[1]))
                        - 2.0 * (b1 * b1 + b2 * b2)
                        + 0.5
                        - PI / g * (1.0 + 2.0 * kf)
                        + PI * PI / (g * g));
                h *= Complex64::cis(exp_im);
                h *= (PI * (sgn[0] * b1 + sgn[1] * b2)).exp();
            }
        }
        Ok(h)
    }

    /// Reference fixture parameters for each case (and K for case VIII),
    /// chosen inside the range gates with a small but nonempty spectrum.
    pub fn fixture(case: CaseTag, k: i32) -> SystemParams {
        let gamma = GammaSpec::RationalPi { m: 1, n: 5 };
        match (case, k) {
            (CaseTag::VIII, -1) => {
                SystemParams::build(case, gamma, 1.5, 1.5, 0.3, -0.2, -1).unwrap()
            }
            (CaseTag::VIII, 0) => {
                SystemParams::build(case, gamma, -3.0, 1.4, 0.3, -0.2, 0).unwrap()
            }
            (CaseTag::VIII, _) => {
                SystemParams::build(case, gamma, -3.0, -3.0, 0.3, -0.2, 1).unwrap()
            }
            _ => SystemParams::build(case, gamma, -3.0, -3.0, 0.3, -0.2, 1).unwrap(),
        }
    }

    /// A real point comfortably inside the domain, used as a generic sample
    /// anchor.
    pub fn domain_anchor(&self) -> f64 {
        if self.case.domain_is_half_line() {
            1.0
        } else {
            0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn all_fixtures() -> Vec<SystemParams> {
        vec![
            SystemParams::fixture(CaseTag::V, 1),
            SystemParams::fixture(CaseTag::VI, 1),
            SystemParams::fixture(CaseTag::VII, 1),
            SystemParams::fixture(CaseTag::VIII, 1),
            SystemParams::fixture(CaseTag::VIII, -1),
            SystemParams::fixture(CaseTag::VIII, 0),
        ]
    }

    /// A random real point in the interior of the domain.
    fn sample_x(sys: &SystemParams, rng: &mut ChaCha8Rng) -> f64 {
        if sys.case.domain_is_half_line() {
            rng.gen_range(0.2..2.5)
        } else {
            rng.gen_range(-2.0..2.0)
        }
    }

    #[test]
    fn build_accepts_reference_vii() {
        let sys = SystemParams::build(
            CaseTag::VII,
            GammaSpec::RationalPi { m: 1, n: 5 },
            -3.0,
            -3.0,
            0.0,
            0.0,
            1,
        )
        .unwrap();
        assert_eq!(sys.n_max, 1);
    }

    #[test]
    fn build_rejects_small_alpha() {
        let r = SystemParams::build(
            CaseTag::VII,
            GammaSpec::RationalPi { m: 1, n: 5 },
            -1.0,
            -1.0,
            0.0,
            0.0,
            1,
        );
        assert!(matches!(r, Err(SystemError::RangeViolation(_))));
    }

    #[test]
    fn eta_trivials() {
        let vii = SystemParams::fixture(CaseTag::VII, 1);
        assert_eq!(vii.eta(c(0.0, 0.0)), c(1.0, 0.0));
        assert_eq!(vii.varphi(c(0.0, 0.0)), c(0.0, 0.0));
        let v = SystemParams::fixture(CaseTag::V, 1);
        assert!((v.eta(c(-(2f64.ln()), 0.0)) - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sinusoidal_axiom() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for sys in all_fixtures() {
            let g = sys.gamma;
            let r11 = (Complex64::cis(g / 2.0) - Complex64::cis(-g / 2.0)).powu(2);
            for _ in 0..5 {
                let x = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let lhs = sys.eta(x - I * g) + sys.eta(x + I * g);
                let rhs = (2.0 + r11) * sys.eta(x);
                assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));
            }
        }
    }

    #[test]
    fn potential_conjugation_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let vii = SystemParams::fixture(CaseTag::VII, 1);
        for _ in 0..10 {
            let x = c(rng.gen_range(0.2..2.0), 0.0);
            let lhs = vii.potential_star(x).unwrap();
            let rhs = vii.potential(-x).unwrap();
            assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));
        }
        let v5 = SystemParams::fixture(CaseTag::V, 1);
        let v6 = SystemParams::fixture(CaseTag::VI, 1);
        for _ in 0..10 {
            let x = c(rng.gen_range(-2.0..2.0), 0.0);
            let lhs = v6.potential(x).unwrap();
            let rhs = v5.potential_star(-x).unwrap();
            assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn case_v_potential_is_large_shift_limit_of_vii() {
        // substituting x -> -x + R, a_j -> a_j^{*-1} e^R into the case VII
        // potential and letting R grow reproduces the case V potential
        let v5 = SystemParams::fixture(CaseTag::V, 1);
        let g = v5.gamma;
        let r = 30.0f64;
        let x = c(0.4, 0.0);
        let expect = v5.potential(x).unwrap();
        // rebuild the VII factorised form at shifted arguments directly
        let xs = -x + r;
        let exs = xs.exp();
        let b = [v5.a(0).conj().inv() * r.exp(), v5.a(1).conj().inv() * r.exp()];
        let num = (1.0 + b[0] * exs)
            * (1.0 + b[1] * exs)
            * (1.0 + exs / b[0].conj())
            * (1.0 + exs / b[1].conj());
        let den = (exs * exs - 1.0) * (Complex64::cis(-g) * exs * exs - 1.0);
        // a1* a2* / |a1 a2| for the shifted parameter set equals that of v5
        let got = -Complex64::cis(-g / 2.0 + g * v5.alpha_sum()) * num / den;
        // the half-line potential seen from the far end reproduces the
        // conjugate full-line potential
        let expect_star = v5.potential_star(x).unwrap();
        assert!(
            (got - expect_star).norm() < 1e-10 * expect.norm(),
            "{got} vs {expect_star}"
        );
    }

    #[test]
    fn sqrt_potential_squares_to_potential() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for sys in all_fixtures() {
            for _ in 0..8 {
                let x = c(sample_x(&sys, &mut rng), rng.gen_range(-0.3..0.3));
                let s = sys.sqrt_potential(x).unwrap();
                let v = sys.potential(x).unwrap();
                assert!(
                    (s * s - v).norm() < 1e-11 * v.norm().max(1.0),
                    "case {:?} x {x}",
                    sys.case
                );
            }
        }
    }

    #[test]
    fn zero_mode_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for sys in all_fixtures() {
            for _ in 0..20 {
                let x = c(sample_x(&sys, &mut rng), 0.0);
                let hg = I * sys.gamma / 2.0;
                let lhs = sys.sqrt_potential_star(x - hg).unwrap()
                    * sys.groundstate(x - hg).unwrap();
                let rhs =
                    sys.sqrt_potential(x + hg).unwrap() * sys.groundstate(x + hg).unwrap();
                let scale = lhs.norm().max(rhs.norm()).max(1e-30);
                assert!(
                    (lhs - rhs).norm() / scale < 1e-9,
                    "case {:?} K {} x {x}: rel {}",
                    sys.case,
                    sys.k,
                    (lhs - rhs).norm() / scale
                );
            }
        }
    }

    #[test]
    fn groundstate_reality_and_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for sys in all_fixtures() {
            for _ in 0..10 {
                let x = c(sample_x(&sys, &mut rng), 0.0);
                let v = sys.groundstate(x).unwrap();
                assert!(
                    v.im.abs() < 1e-10 * v.norm().max(1e-30),
                    "case {:?} K {} x {x}: {v}",
                    sys.case,
                    sys.k
                );
                assert!(v.re * v.re > 0.0, "weight must be positive at {x}");
            }
        }
    }

    #[test]
    fn case_vii_weight_parity() {
        let sys = SystemParams::fixture(CaseTag::VII, 1);
        for &x in &[0.3, 0.9, 1.7] {
            let p = sys.groundstate(c(x, 0.0)).unwrap();
            let m = sys.groundstate(c(-x, 0.0)).unwrap();
            assert!(
                (p * p - m * m).norm() < 1e-9 * (p * p).norm(),
                "x = {x}: {} vs {}",
                p * p,
                m * m
            );
        }
    }

    #[test]
    fn case_v_vi_mirror() {
        let v5 = SystemParams::fixture(CaseTag::V, 1);
        let v6 = SystemParams::fixture(CaseTag::VI, 1);
        for &x in &[-1.2, 0.0, 0.7, 2.1] {
            let lhs = v6.groundstate(c(x, 0.0)).unwrap();
            let rhs = v5.groundstate(c(-x, 0.0)).unwrap();
            assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1e-30));
        }
    }

    #[test]
    fn groundstate_decay_exponent_vii() {
        let sys = SystemParams::fixture(CaseTag::VII, 1);
        let expo = -0.5 + sys.alpha_sum() + PI / sys.gamma;
        let mut ratios = vec![];
        for &r in &[20.0, 30.0, 40.0] {
            let lg = sys.log_groundstate(c(r, 0.0)).unwrap();
            ratios.push(lg.re - expo * r);
        }
        // log phi0 - expo * R should be flat: slope within 2% of zero
        // relative to the exponent scale
        let slope = (ratios[2] - ratios[0]) / 20.0;
        assert!(
            slope.abs() < 0.02 * expo.abs(),
            "slope {slope} vs exponent {expo}"
        );
    }

    #[test]
    fn energies_start_at_zero_and_increase() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for sys in all_fixtures() {
            assert_eq!(sys.energy(0).unwrap(), 0.0);
            for n in 1..=sys.n_max {
                assert!(sys.energy(n).unwrap() > sys.energy(n - 1).unwrap());
            }
        }
        // random draws per case: every accepted parameter set has a strictly
        // increasing spectrum
        let mut accepted = 0;
        while accepted < 100 {
            let a1 = rng.gen_range(-4.0..-2.8);
            let a2 = rng.gen_range(-4.0..-2.8);
            let g = GammaSpec::Value(rng.gen_range(0.4..0.8));
            let case = match accepted % 4 {
                0 => CaseTag::V,
                1 => CaseTag::VI,
                2 => CaseTag::VII,
                _ => CaseTag::VIII,
            };
            let Ok(sys) = SystemParams::build(
                case,
                g,
                a1,
                a2,
                rng.gen_range(-0.5..0.5),
                rng.gen_range(-0.5..0.5),
                1,
            ) else {
                continue;
            };
            accepted += 1;
            let mut last = -1e-30;
            for n in 0..=sys.n_max {
                let e = sys.energy(n).unwrap();
                assert!(e > last, "case {:?}: E_{n} = {e} after {last}", sys.case);
                last = e;
            }
        }
    }

    #[test]
    fn reference_first_energy_vii() {
        // gamma = pi/5, alpha = -6: E_1 = 4 sin(pi/10) sin(-6 pi/5)
        let sys = SystemParams::fixture(CaseTag::VII, 1);
        let e1 = sys.energy(1).unwrap();
        let expect = 4.0 * (PI / 10.0).sin() * (-6.0 * PI / 5.0).sin();
        assert!((e1 - expect).abs() < 1e-14);
        assert!((e1 - 0.7266).abs() < 1e-3, "E_1 = {e1}");
    }

    #[test]
    fn eigenpoly_reality() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for sys in all_fixtures() {
            for n in 0..=sys.n_max {
                for _ in 0..5 {
                    let eta = sys.eta(c(sample_x(&sys, &mut rng), 0.0));
                    let p = sys.eigenpoly(n, eta).unwrap();
                    assert!(
                        p.im.abs() < 1e-11 * p.norm().max(1e-30),
                        "case {:?} K {} n {n}: {p}",
                        sys.case,
                        sys.k
                    );
                }
            }
        }
    }

    #[test]
    fn eigenvalue_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for sys in all_fixtures() {
            for n in 0..=sys.n_max {
                let e = sys.energy(n).unwrap();
                for _ in 0..20 {
                    let x = c(sample_x(&sys, &mut rng), rng.gen_range(-0.2..0.2));
                    let lhs = sys.schrodinger_lhs(n, x).unwrap();
                    let rhs = e * sys.eigenpoly(n, sys.eta(x)).unwrap();
                    let scale = lhs.norm().max(rhs.norm()).max(1.0);
                    assert!(
                        (lhs - rhs).norm() / scale < 1e-9,
                        "case {:?} K {} n {n} x {x}",
                        sys.case,
                        sys.k
                    );
                }
            }
        }
    }

    #[test]
    fn schrodinger_lhs_vanishes_for_constant() {
        let sys = SystemParams::fixture(CaseTag::VII, 1);
        let v = sys.schrodinger_lhs(0, c(0.8, 0.1)).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn conjectured_norm_is_positive_real() {
        for sys in all_fixtures() {
            for n in 0..=sys.n_max {
                let h = sys.conjectured_norm(n).unwrap();
                assert!(
                    h.im.abs() < 1e-9 * h.norm(),
                    "case {:?} K {} n {n}: h = {h}",
                    sys.case,
                    sys.k
                );
                assert!(h.re > 0.0, "case {:?} K {} n {n}: h = {h}", sys.case, sys.k);
            }
        }
    }

    #[test]
    fn index_beyond_spectrum_is_reported() {
        let sys = SystemParams::fixture(CaseTag::VII, 1);
        assert!(matches!(
            sys.energy(sys.n_max + 1),
            Err(SystemError::IndexBeyondSpectrum { .. })
        ));
        assert!(matches!(
            sys.eigenpoly(sys.n_max + 1, c(1.2, 0.0)),
            Err(SystemError::IndexBeyondSpectrum { .. })
        ));
    }
}

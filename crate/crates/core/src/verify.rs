//! Quadrature-backed verification of the solvable systems: orthogonality
//! integrals on the case domains, conjectured norms against direct
//! integration, hermiticity of the shift Hamiltonian, and the continuum
//! limits toward ordinary Schroedinger systems and the Wilson / continuous
//! Hahn families.
//!
//! - `inner_product` integrates phi_0(x)^2 P_n P_m with decay-informed
//!   domain truncation driven by the known exponential fall-off rates.
//! - `orthogonality_report` assembles the Gram matrix normalized by the
//!   conjectured norms and grades it against the identity.
//! - `hermiticity_residual` compares (f1, H f2) with (H f1, f2), the
//!   Hamiltonian applied through sqrt(V) e^{gamma p} sqrt(V*).
//! - `oqm_limit_check` drives gamma -> 0 parameter embeddings toward the
//!   Morse, hyperbolic Darboux-Poschl-Teller and hyperbolic symmetric top
//!   systems; `wilson_hahn_limit_check` drives R -> infinity toward the
//!   Wilson and continuous Hahn systems.
//! - the `suite_*` runners aggregate `VerificationReport` records for the
//!   command-line front end, serializable as JSON and CSV.

use crate::oracle;
use crate::qdilog::QDilogContext;
use crate::qpoly::{
    self, askey_wilson, aw_recurrence, classical_poly, polynomial_coefficients, ptilde,
    AWParameterQuad, ClassicalKind, PolyVariant,
};
use crate::quad::{integrate, QuadratureNotConverged};
use crate::systems::{CaseTag, GammaSpec, SystemError, SystemParams, I};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Truncation radii solved from the decay exponents of the integrand.
    AdaptiveOnDomain,
    /// Fixed symmetric truncation at the given radius.
    TruncatedDomain(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub scheme: Scheme,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_refinements: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            scheme: Scheme::AdaptiveOnDomain,
            abs_tol: 1e-12,
            rel_tol: 1e-9,
            max_refinements: 4000,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureNotConverged),
    #[error("degree pair ({n1}, {n2}) violates (n1+n2)/2 < {bound}")]
    DegreeBoundViolation { n1: usize, n2: usize, bound: f64 },
    #[error("embedding out of range at gamma = {gamma}: {message}")]
    EmbeddingOutOfRange { gamma: f64, message: String },
}

pub type Result<T> = std::result::Result<T, VerifyError>;

/// Immutable parameter snapshot carried inside a report.
#[derive(Debug, Clone, Serialize)]
pub struct ParamsSnapshot {
    pub case: String,
    pub gamma: f64,
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    pub k: i32,
    pub n_max: usize,
}

impl ParamsSnapshot {
    pub fn of(sys: &SystemParams) -> Self {
        ParamsSnapshot {
            case: format!("{:?}", sys.case),
            gamma: sys.gamma,
            alpha: sys.alpha,
            beta: sys.beta,
            k: sys.k,
            n_max: sys.n_max,
        }
    }
}

/// One pass/fail record; `passed` is always `residual <= tolerance`.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub params: Option<ParamsSnapshot>,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub notes: String,
}

impl VerificationReport {
    pub fn new(
        check_id: impl Into<String>,
        params: Option<&SystemParams>,
        residual: f64,
        tolerance: f64,
        notes: impl Into<String>,
    ) -> Self {
        VerificationReport {
            check_id: check_id.into(),
            params: params.map(ParamsSnapshot::of),
            residual,
            tolerance,
            passed: residual <= tolerance,
            notes: notes.into(),
        }
    }

    fn from_result(
        check_id: impl Into<String>,
        params: Option<&SystemParams>,
        result: Result<f64>,
        tolerance: f64,
        notes: impl Into<String>,
    ) -> Self {
        match result {
            Ok(residual) => VerificationReport::new(check_id, params, residual, tolerance, notes),
            Err(e) => VerificationReport::new(
                check_id,
                params,
                f64::INFINITY,
                tolerance,
                format!("error: {e}"),
            ),
        }
    }
}

/// Reports as a JSON array.
pub fn reports_to_json(reports: &[VerificationReport]) -> String {
    serde_json::to_string_pretty(reports).expect("report serialization cannot fail")
}

/// Reports as an RFC 4180 CSV summary.
pub fn reports_to_csv(reports: &[VerificationReport]) -> String {
    fn field(s: &str) -> String {
        if s.contains(',') || s.contains('"') || s.contains('\n') {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s.to_string()
        }
    }
    let mut out = String::from(
        "check_id,case,gamma,alpha1,alpha2,beta1,beta2,K,n_max,residual,tolerance,passed,notes\r\n",
    );
    for r in reports {
        let p = match &r.params {
            Some(p) => format!(
                "{},{},{},{},{},{},{},{}",
                field(&p.case),
                p.gamma,
                p.alpha[0],
                p.alpha[1],
                p.beta[0],
                p.beta[1],
                p.k,
                p.n_max
            ),
            None => ",,,,,,,".to_string(),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\r\n",
            field(&r.check_id),
            p,
            r.residual,
            r.tolerance,
            r.passed,
            field(&r.notes)
        ));
    }
    out
}

/// The finite-spectrum bound 1/2 - alpha - K pi / gamma.
fn spectrum_bound(sys: &SystemParams) -> f64 {
    0.5 - sys.alpha_sum() - sys.k as f64 * PI / sys.gamma
}

/// Exponential decay rates (left tail, right tail) of phi_0(x)^2 times a
/// polynomial of total degree `deg`, reduced by `extra` when the integrand
/// carries additional exponentially growing factors (e.g. the potential).
fn decay_rates(sys: &SystemParams, deg: f64, extra: f64) -> (f64, f64) {
    let slow = (2.0 * spectrum_bound(sys) - deg).max(0.05);
    // the potential grows like e^{2|x|} only toward the fast tail of cases
    // V and VI; everywhere else it approaches a constant
    let fast = (1.0 + 2.0 * PI / sys.gamma - extra).max(0.05);
    match sys.case {
        CaseTag::V => (slow, fast),
        CaseTag::VI => (fast, slow),
        CaseTag::VII => (f64::INFINITY, slow),
        CaseTag::VIII => (slow, slow),
    }
}

/// Plot window covering at least six decay lengths of phi_0(x)^2 on each
/// side of the domain.
pub fn weight_window(sys: &SystemParams) -> (f64, f64) {
    let (rate_l, rate_r) = decay_rates(sys, 0.0, 0.0);
    let b = (12.0 / rate_r).max(3.0);
    let a = if sys.case.domain_is_half_line() {
        0.0
    } else {
        -(12.0 / rate_l).max(3.0)
    };
    (a, b)
}

/// Integration window [a, b] for the given scheme; decay-informed when
/// adaptive: rate * R = log(scale / abs_tol) + 10.
fn domain_window<F>(
    sys: &SystemParams,
    deg: f64,
    extra: f64,
    cfg: &QuadratureConfig,
    f: &F,
) -> (f64, f64)
where
    F: Fn(f64) -> Result<Complex64>,
{
    let half_line = sys.case.domain_is_half_line();
    if let Scheme::TruncatedDomain(r) = cfg.scheme {
        return (if half_line { 0.0 } else { -r }, r);
    }
    let samples: &[f64] = if half_line {
        &[0.3, 0.8, 1.5, 2.5]
    } else {
        &[-2.0, -1.0, 0.0, 1.0, 2.0]
    };
    let scale = samples
        .iter()
        .filter_map(|&x| f(x).ok().map(|v| v.norm()))
        .fold(1.0f64, f64::max);
    let (rate_l, rate_r) = decay_rates(sys, deg, extra);
    let budget = (scale / cfg.abs_tol.max(1e-300)).ln() + 10.0;
    let r_of = |rate: f64| (budget / rate).clamp(8.0, 600.0);
    if half_line {
        (0.0, r_of(rate_r))
    } else {
        (-r_of(rate_l), r_of(rate_r))
    }
}

/// Adaptive integral of `f` over the (possibly truncated) case domain,
/// propagating the first evaluation error out of the quadrature loop.
fn integrate_on_domain<F>(
    sys: &SystemParams,
    deg: f64,
    extra: f64,
    cfg: &QuadratureConfig,
    f: F,
) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let (a, b) = domain_window(sys, deg, extra, cfg, &f);
    let mut captured: Option<VerifyError> = None;
    let result = integrate(
        |x| match f(x) {
            // non-finite values are 0 * inf underflow products in the far
            // tail, where the decay-informed window guarantees the true
            // integrand is negligible
            Ok(v) if v.re.is_finite() && v.im.is_finite() => v,
            Ok(_) => Complex64::new(0.0, 0.0),
            Err(e) => {
                if captured.is_none() {
                    captured = Some(e);
                }
                Complex64::new(0.0, 0.0)
            }
        },
        a,
        b,
        cfg.abs_tol,
        cfg.rel_tol,
        cfg.max_refinements,
    );
    if let Some(e) = captured {
        return Err(e);
    }
    Ok(result?.value)
}

/// (phi_n, phi_m) = int phi_0(x)^2 P_n(eta(x)) P_m(eta(x)) dx.
pub fn inner_product(
    sys: &SystemParams,
    n: usize,
    m: usize,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    for idx in [n, m] {
        if idx > sys.n_max {
            return Err(SystemError::IndexBeyondSpectrum {
                n: idx,
                n_max: sys.n_max,
            }
            .into());
        }
    }
    integrate_on_domain(sys, (n + m) as f64, 0.0, cfg, |x| {
        let xc = Complex64::new(x, 0.0);
        let w = sys.groundstate(xc)?;
        let eta = sys.eta(xc);
        Ok(w * w * sys.eigenpoly(n, eta)? * sys.eigenpoly(m, eta)?)
    })
}

/// The full Gram matrix of inner products (no normalization).
pub fn gram_matrix(sys: &SystemParams, cfg: &QuadratureConfig) -> Result<Vec<Vec<Complex64>>> {
    let size = sys.n_max + 1;
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); size]; size];
    for n in 0..size {
        for m in n..size {
            let v = inner_product(sys, n, m, cfg)?;
            gram[n][m] = v;
            gram[m][n] = v;
        }
    }
    Ok(gram)
}

/// Gram matrix normalized by sqrt(h_n h_m), graded against the identity:
/// off-diagonals below 1e-7, diagonals within 1e-6 of one. The report's
/// residual is the worst deviation measured in units of its own tolerance.
pub fn orthogonality_report(
    sys: &SystemParams,
    cfg: &QuadratureConfig,
) -> Result<(Vec<Vec<f64>>, VerificationReport)> {
    const OFFDIAG_TOL: f64 = 1e-7;
    const DIAG_TOL: f64 = 1e-6;
    let size = sys.n_max + 1;
    let norms: Vec<f64> = (0..size)
        .map(|n| Ok(sys.conjectured_norm(n)?.re))
        .collect::<Result<_>>()?;
    let gram = gram_matrix(sys, cfg)?;
    let mut normalized = vec![vec![0.0; size]; size];
    let mut worst = 0.0f64;
    for n in 0..size {
        for m in 0..size {
            let g = gram[n][m].re / (norms[n] * norms[m]).sqrt();
            normalized[n][m] = g;
            let unit = if n == m {
                (g - 1.0).abs() / DIAG_TOL
            } else {
                g.abs() / OFFDIAG_TOL
            };
            worst = worst.max(unit);
        }
    }
    let report = VerificationReport::new(
        format!("orthogonality-{:?}-K{}", sys.case, sys.k),
        Some(sys),
        worst,
        1.0,
        format!(
            "worst Gram deviation in units of its tolerance (off-diagonal {OFFDIAG_TOL}, \
             diagonal {DIAG_TOL}); matrix size {size}"
        ),
    );
    Ok((normalized, report))
}

/// Relative disagreement between (phi_n, phi_n) by quadrature and the
/// conjectured closed-form norm, maximized over the whole spectrum.
pub fn norm_comparison(sys: &SystemParams, cfg: &QuadratureConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 0..=sys.n_max {
        let by_quadrature = inner_product(sys, n, n, cfg)?.re;
        let conjectured = sys.conjectured_norm(n)?.re;
        worst = worst.max((by_quadrature - conjectured).abs() / conjectured.abs());
    }
    Ok(worst)
}

/// H f at x through the factorized form sqrt(V) e^{gamma p} sqrt(V*) +
/// sqrt(V*) e^{-gamma p} sqrt(V) - V - V*.
pub fn apply_hamiltonian<F>(sys: &SystemParams, f: &F, x: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let ig = I * sys.gamma;
    let up = sys.sqrt_potential(x)? * sys.sqrt_potential_star(x - ig)? * f(x - ig)?;
    let down = sys.sqrt_potential_star(x)? * sys.sqrt_potential(x + ig)? * f(x + ig)?;
    let diag = (sys.potential(x)? + sys.potential_star(x)?) * f(x)?;
    Ok(up + down - diag)
}

/// The degree bound on eigenfunction pairs entering hermiticity.
fn hermiticity_bound(sys: &SystemParams) -> f64 {
    let direct = spectrum_bound(sys);
    if sys.case == CaseTag::VIII {
        let alpha_minus = sys.alpha_minus(0) + sys.alpha_minus(1);
        direct.min(0.5 - alpha_minus + sys.k as f64 * PI / sys.gamma)
    } else {
        direct
    }
}

/// |(f1, H f2) - (H f1, f2)| / (|(f1, H f2)| + |(H f1, f2)| + eps) with
/// f_i = phi_0 P_{n_i}. Both bilinear forms vanish for orthogonal pairs,
/// so eps is the natural scale sqrt(h_{n1} h_{n2}) (1 + |E_{n1}| + |E_{n2}|)
/// rather than a fixed epsilon.
pub fn hermiticity_residual(
    sys: &SystemParams,
    n1: usize,
    n2: usize,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let bound = hermiticity_bound(sys);
    if !((n1 + n2) as f64 / 2.0 < bound - 1e-9) {
        return Err(VerifyError::DegreeBoundViolation { n1, n2, bound });
    }
    let eigenfunction = |n: usize| {
        move |x: Complex64| -> Result<Complex64> {
            Ok(sys.groundstate(x)? * sys.eigenpoly(n, sys.eta(x))?)
        }
    };
    let f1 = eigenfunction(n1);
    let f2 = eigenfunction(n2);
    let deg = (n1 + n2) as f64;
    let lhs = integrate_on_domain(sys, deg, 2.0, cfg, |x| {
        let xc = Complex64::new(x, 0.0);
        Ok(f1(xc)? * apply_hamiltonian(sys, &f2, xc)?)
    })?;
    let rhs = integrate_on_domain(sys, deg, 2.0, cfg, |x| {
        let xc = Complex64::new(x, 0.0);
        Ok(apply_hamiltonian(sys, &f1, xc)? * f2(xc)?)
    })?;
    let eps = (sys.conjectured_norm(n1)?.re * sys.conjectured_norm(n2)?.re).sqrt()
        * (1.0 + sys.energy(n1)?.abs() + sys.energy(n2)?.abs());
    Ok((lhs - rhs).norm() / (lhs.norm() + rhs.norm() + eps))
}

/// Pointwise |H phi_n - E_n phi_n| / scale, maximized over sample points.
pub fn pointwise_eigen_residual(sys: &SystemParams, n: usize, xs: &[f64]) -> Result<f64> {
    let e_n = sys.energy(n)?;
    let f = |x: Complex64| -> Result<Complex64> {
        Ok(sys.groundstate(x)? * sys.eigenpoly(n, sys.eta(x))?)
    };
    let mut worst = 0.0f64;
    for &x in xs {
        let xc = Complex64::new(x, 0.0);
        let h = apply_hamiltonian(sys, &f, xc)?;
        let rhs = e_n * f(xc)?;
        worst = worst.max((h - rhs).norm() / rhs.norm().max(f(xc)?.norm()).max(1e-30));
    }
    Ok(worst)
}

/// Quadrature self-consistency: halving rel_tol must move every inner
/// product by less than ten times the tighter tolerance (relative).
pub fn quadrature_selfconsistency(sys: &SystemParams, cfg: &QuadratureConfig) -> Result<f64> {
    let mut tighter = *cfg;
    tighter.rel_tol *= 0.5;
    let mut worst = 0.0f64;
    for n in 0..=sys.n_max {
        for m in n..=sys.n_max {
            let coarse = inner_product(sys, n, m, cfg)?;
            let fine = inner_product(sys, n, m, &tighter)?;
            let allowed = 10.0 * tighter.rel_tol * fine.norm().max(cfg.abs_tol);
            worst = worst.max((coarse - fine).norm() / allowed);
        }
    }
    Ok(worst)
}

/// Targets of the gamma -> 0 limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OqmTarget {
    Morse,
    HyperbolicDPT,
    HyperbolicSymTopII,
}

/// Fixed continuum-side parameters used by `oqm_limit_check`. All are
/// gamma-independent; non-integer `h` keeps the spectrum bound away from
/// the excluded integer values.
struct OqmFixture {
    g: f64,
    h: f64,
    h1: f64,
    mu: f64,
    beta_prime: [f64; 2],
}

const OQM_FIXTURE: OqmFixture = OqmFixture {
    g: 2.0,
    h: 5.3,
    h1: 0.25,
    mu: 1.25,
    beta_prime: [0.6, 0.65],
};
const OQM_HDPT_H: f64 = 6.5;

fn oqm_system(case: CaseTag, target: OqmTarget, gamma: f64) -> Result<SystemParams> {
    let fx = &OQM_FIXTURE;
    let embed = |a1, a2, b1, b2, k| {
        SystemParams::build(case, GammaSpec::Value(gamma), a1, a2, b1, b2, k).map_err(|e| {
            VerifyError::EmbeddingOutOfRange {
                gamma,
                message: e.to_string(),
            }
        })
    };
    match (case, target) {
        (CaseTag::V | CaseTag::VI, OqmTarget::Morse) => {
            let b = fx.beta_prime.map(|bp| -(gamma * bp).ln() / gamma);
            embed(
                -PI / (2.0 * gamma) - fx.h1,
                -PI / (2.0 * gamma) - fx.h + fx.h1 + 0.5,
                b[0],
                b[1],
                1,
            )
        }
        (CaseTag::VII, OqmTarget::HyperbolicDPT) => embed(
            -PI / gamma + 0.5 * (fx.g + 0.5),
            0.5 * (-OQM_HDPT_H + 0.5),
            0.0,
            0.0,
            1,
        ),
        (CaseTag::VIII, OqmTarget::HyperbolicSymTopII) => embed(
            -PI / (2.0 * gamma) - fx.h1,
            -PI / (2.0 * gamma) - fx.h + fx.h1 + 0.5,
            0.7,
            fx.mu - 0.7,
            1,
        ),
        _ => Err(VerifyError::EmbeddingOutOfRange {
            gamma,
            message: format!("no embedding of case {case:?} into {target:?}"),
        }),
    }
}

/// Max relative distance of (scaled energies, phi_0, scaled P_n) from the
/// continuum target at one gamma.
fn oqm_distance(sys: &SystemParams, case: CaseTag, target: OqmTarget) -> Result<f64> {
    let fx = &OQM_FIXTURE;
    let g2 = sys.gamma * sys.gamma;
    let mirror = if case == CaseTag::VI { -1.0 } else { 1.0 };
    let (xs, x_map): (&[f64], fn(f64) -> f64) = match target {
        OqmTarget::HyperbolicDPT => (&[0.3, 0.7, 1.2, 2.0], |x| 2.0 * x),
        _ => (&[-2.0, -1.0, -0.3, 0.5, 1.2], |x| x),
    };
    let n_checked = sys.n_max.min(2);

    // energies
    let mut dist = 0.0f64;
    for n in 0..=n_checked {
        let nf = n as f64;
        let (scaled, tgt) = match target {
            OqmTarget::Morse | OqmTarget::HyperbolicSymTopII => {
                (sys.energy(n)? / g2, nf * (2.0 * fx.h - nf))
            }
            OqmTarget::HyperbolicDPT => (
                4.0 * sys.energy(n)? / g2,
                4.0 * nf * (OQM_HDPT_H - fx.g - nf),
            ),
        };
        dist = dist.max((scaled - tgt).abs() / (1.0 + tgt.abs()));
    }

    // ground state
    let phi_target = |x: f64| -> Complex64 {
        match target {
            OqmTarget::Morse => Complex64::new((fx.h * x - fx.mu * x.exp()).exp(), 0.0),
            OqmTarget::HyperbolicDPT => Complex64::new(
                2f64.powf(fx.g - OQM_HDPT_H) * x.sinh().powf(fx.g) * x.cosh().powf(-OQM_HDPT_H),
                0.0,
            ),
            OqmTarget::HyperbolicSymTopII => Complex64::new(
                2f64.powf(-fx.h)
                    * (-0.5 * PI * fx.mu).exp()
                    * x.cosh().powf(-fx.h)
                    * (-fx.mu * x.sinh().atan()).exp(),
                0.0,
            ),
        }
    };
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for &x in xs {
        let value = sys.groundstate(Complex64::new(mirror * x_map(x), 0.0))?;
        let tgt = phi_target(x);
        num = num.max((value - tgt).norm());
        den = den.max(tgt.norm());
    }
    dist = dist.max(num / den);

    // eigenpolynomials
    for n in 0..=n_checked {
        let nf = n as f64;
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        let poly_target = |x: f64| -> Complex64 {
            match target {
                OqmTarget::Morse => {
                    let arg = Complex64::new(2.0 * fx.mu * x.exp(), 0.0);
                    fact * (-nf * x).exp()
                        * classical_poly(
                            ClassicalKind::Laguerre {
                                alpha: Complex64::new(2.0 * fx.h - 2.0 * nf, 0.0),
                            },
                            n,
                            arg,
                        )
                }
                OqmTarget::HyperbolicDPT => {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    sign * 4f64.powi(n as i32)
                        * fact
                        * classical_poly(
                            ClassicalKind::Jacobi {
                                alpha: Complex64::new(fx.g - 0.5, 0.0),
                                beta: Complex64::new(-OQM_HDPT_H - 0.5, 0.0),
                            },
                            n,
                            Complex64::new((2.0 * x).cosh(), 0.0),
                        )
                }
                OqmTarget::HyperbolicSymTopII => {
                    // Empirically the limit carries i^n here, not i^{-n}:
                    // the two differ by (-1)^n, and only i^n matches the
                    // closed-form P_n verified by the determinant oracle.
                    4f64.powi(n as i32)
                        * fact
                        * I.powu(n as u32)
                        * classical_poly(
                            ClassicalKind::Jacobi {
                                alpha: Complex64::new(-fx.h - 0.5, -fx.mu),
                                beta: Complex64::new(-fx.h - 0.5, fx.mu),
                            },
                            n,
                            I * Complex64::new(x.sinh(), 0.0),
                        )
                }
            }
        };
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for &x in xs {
            let eta = sys.eta(Complex64::new(mirror * x_map(x), 0.0));
            let scaled = sys.eigenpoly(n, eta)? / sys.gamma.powi(n as i32);
            let tgt = poly_target(x);
            num = num.max((scaled - tgt).norm());
            den = den.max(tgt.norm());
        }
        dist = dist.max(num / den.max(1.0));
    }
    Ok(dist)
}

/// gamma -> 0 limit check: distances to the continuum target must shrink
/// monotonically along the sequence, with each halving of gamma cutting
/// the distance by at least 1.5x.
pub fn oqm_limit_check(
    case: CaseTag,
    target: OqmTarget,
    gamma_sequence: &[f64],
) -> Result<VerificationReport> {
    let mut distances = Vec::with_capacity(gamma_sequence.len());
    let mut last_sys = None;
    for &gamma in gamma_sequence {
        let sys = oqm_system(case, target, gamma)?;
        distances.push(oqm_distance(&sys, case, target)?);
        last_sys = Some(sys);
    }
    let monotone = distances.windows(2).all(|w| w[1] < w[0]);
    let min_ratio = distances
        .windows(2)
        .map(|w| w[0] / w[1])
        .fold(f64::INFINITY, f64::min);
    let order = distances
        .windows(2)
        .map(|w| (w[0] / w[1]).log2())
        .sum::<f64>()
        / (distances.len() - 1).max(1) as f64;
    let residual = if monotone && min_ratio >= 1.5 {
        *distances.last().unwrap()
    } else {
        f64::INFINITY
    };
    Ok(VerificationReport::new(
        format!("oqm-limit-{case:?}-{target:?}"),
        last_sys.as_ref(),
        residual,
        0.05,
        format!(
            "distances along gamma {gamma_sequence:?}: {distances:?}; monotone {monotone}, \
             min halving ratio {min_ratio:.2}, fitted order {order:.2}{}",
            if target == OqmTarget::HyperbolicSymTopII {
                "; polynomial target uses the empirically matched phase i^n (i^{-n} \
                 differs by (-1)^n and does not converge)"
            } else {
                ""
            }
        ),
    ))
}

/// Fixed shifted parameters lambda'_j of the R -> infinity embedding.
const LAMBDA_PRIME: [Complex64; 2] = [
    Complex64::new(1.5, 0.3),
    Complex64::new(2.0, -0.2),
];

fn wilson_hahn_system(case: CaseTag, r: f64) -> Result<SystemParams> {
    SystemParams::build(
        case,
        GammaSpec::Value(1.0 / r),
        -PI * r + LAMBDA_PRIME[0].re,
        -PI * r + LAMBDA_PRIME[1].re,
        LAMBDA_PRIME[0].im,
        LAMBDA_PRIME[1].im,
        1,
    )
    .map_err(|e| VerifyError::EmbeddingOutOfRange {
        gamma: 1.0 / r,
        message: e.to_string(),
    })
}

/// Relative distance of R^{3n} P_n (case VII) or R^{2n} P_n (case VI) from
/// its Wilson / continuous Hahn target at one R, maximized over sample x'.
pub fn wilson_poly_distance(case: CaseTag, r: f64, n: usize) -> Result<f64> {
    let sys = wilson_hahn_system(case, r)?;
    let [l1, l2] = LAMBDA_PRIME;
    let xs: &[f64] = if case == CaseTag::VII {
        &[0.4, 1.0, 1.7]
    } else {
        &[-1.2, 0.3, 1.4]
    };
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for &xp in xs {
        let eta = sys.eta(Complex64::new(xp / r, 0.0));
        let (scaled, tgt) = match case {
            CaseTag::VII => {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                (
                    r.powi(3 * n as i32) * sys.eigenpoly(n, eta)?,
                    sign * classical_poly(
                        ClassicalKind::Wilson {
                            a: [l1, l2, l1.conj(), l2.conj()],
                        },
                        n,
                        Complex64::new(xp * xp, 0.0),
                    ),
                )
            }
            CaseTag::VI => (
                r.powi(2 * n as i32) * sys.eigenpoly(n, eta)?,
                fact * classical_poly(
                    ClassicalKind::ContinuousHahn {
                        a: [l1, l2, l1.conj(), l2.conj()],
                    },
                    n,
                    Complex64::new(xp, 0.0),
                ),
            ),
            _ => {
                return Err(VerifyError::EmbeddingOutOfRange {
                    gamma: 1.0 / r,
                    message: format!("case {case:?} has no Wilson/continuous-Hahn limit"),
                })
            }
        };
        num = num.max((scaled - tgt).norm());
        den = den.max(tgt.norm());
    }
    Ok(num / den.max(1.0))
}

/// Max relative distance of (R^2 V, scaled P_n, R^2 E_n) from the Wilson
/// (case VII) or continuous Hahn (case VI) system at one R.
fn wilson_hahn_distance(case: CaseTag, r: f64) -> Result<f64> {
    let sys = wilson_hahn_system(case, r)?;
    let [l1, l2] = LAMBDA_PRIME;
    let xs: &[f64] = if case == CaseTag::VII {
        &[0.4, 1.0, 1.7]
    } else {
        &[-1.2, 0.3, 1.4]
    };
    let mut dist = 0.0f64;
    // potential
    for &xp in xs {
        let ix = I * xp;
        let v = r * r * sys.potential(Complex64::new(xp / r, 0.0))?;
        let tgt = match case {
            CaseTag::VII => {
                (l1 + ix) * (l1.conj() + ix) * (l2 + ix) * (l2.conj() + ix)
                    / (2.0 * ix * (2.0 * ix + 1.0))
            }
            _ => (l1 + ix) * (l2 + ix),
        };
        dist = dist.max((v - tgt).norm() / tgt.norm());
    }
    // eigenpolynomials
    for n in 0..=2usize {
        dist = dist.max(wilson_poly_distance(case, r, n)?);
    }
    // energies; sum of lambda'_j and conjugates
    let sigma = 2.0 * (l1.re + l2.re);
    for n in 1..=2usize {
        let nf = n as f64;
        let tgt = nf * (nf + sigma - 1.0);
        dist = dist.max((r * r * sys.energy(n)? - tgt).abs() / tgt.abs());
    }
    Ok(dist)
}

/// R -> infinity limit check toward the Wilson (case VII) or continuous
/// Hahn (case VI) system: distances must shrink monotonically along the
/// R-sequence and end below tolerance.
pub fn wilson_hahn_limit_check(case: CaseTag, r_sequence: &[f64]) -> Result<VerificationReport> {
    let mut distances = Vec::with_capacity(r_sequence.len());
    for &r in r_sequence {
        distances.push(wilson_hahn_distance(case, r)?);
    }
    let monotone = distances.windows(2).all(|w| w[1] < w[0]);
    let residual = if monotone {
        *distances.last().unwrap()
    } else {
        f64::INFINITY
    };
    let sys = wilson_hahn_system(case, *r_sequence.last().unwrap())?;
    Ok(VerificationReport::new(
        format!("wilson-hahn-limit-{case:?}"),
        Some(&sys),
        residual,
        0.05,
        format!("distances along R {r_sequence:?}: {distances:?}; monotone {monotone}"),
    ))
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

/// Quantum-dilogarithm invariants: functional relation, unit modulus on the
/// real axis, series/integral agreement, rational-gamma branch, inversion.
pub fn suite_qdilog() -> Vec<VerificationReport> {
    let mut reports = Vec::new();
    let gamma = 0.9;
    let ctx = QDilogContext::new(gamma);
    let zs = [
        Complex64::new(1.1, 0.3),
        Complex64::new(-0.8, 0.2),
        Complex64::new(0.6, -0.7),
    ];

    let functional = || -> Result<f64> {
        let mut worst = 0.0f64;
        for &z in &zs {
            let num = ctx.eval_qdilog(z - I * gamma).map_err(SystemError::from)?;
            let den = ctx.eval_qdilog(z + I * gamma).map_err(SystemError::from)?;
            let target = 1.0 + z.exp();
            worst = worst.max((num / den - target).norm() / target.norm());
        }
        Ok(worst)
    };
    reports.push(VerificationReport::from_result(
        "qdilog-functional-relation",
        None,
        functional(),
        1e-9,
        "Phi(z - i gamma)/Phi(z + i gamma) = 1 + e^z",
    ));

    let modulus = || -> Result<f64> {
        let mut worst = 0.0f64;
        for &x in &[-2.0, 0.7, 3.0] {
            let v = ctx
                .eval_qdilog(Complex64::new(x, 0.0))
                .map_err(SystemError::from)?;
            worst = worst.max((v.norm() - 1.0).abs());
        }
        Ok(worst)
    };
    reports.push(VerificationReport::from_result(
        "qdilog-unit-modulus",
        None,
        modulus(),
        1e-10,
        "|Phi(x)| = 1 on the real axis",
    ));

    let series_vs_integral = || -> Result<f64> {
        let mut worst = 0.0f64;
        for &z in &[Complex64::new(1.0, 0.4), Complex64::new(-1.3, -0.5)] {
            let s = ctx.eval_qdilog_series(z).map_err(SystemError::from)?;
            let i = ctx.eval_qdilog_integral(z, 0.5).map_err(SystemError::from)?;
            worst = worst.max((s - i).norm() / s.norm());
        }
        Ok(worst)
    };
    reports.push(VerificationReport::from_result(
        "qdilog-series-vs-integral",
        None,
        series_vs_integral(),
        1e-9,
        "series expansion against the defining integral, off-axis",
    ));

    let rational_branch = || -> Result<f64> {
        // the generic series diverges at rational gamma; check the rational
        // branch against the functional relation instead
        let rat = QDilogContext::rational(1, 4);
        let mut worst = 0.0f64;
        for &z in &[Complex64::new(0.9, 0.2), Complex64::new(-1.2, -0.3)] {
            let num = rat.eval_qdilog(z - I * rat.gamma).map_err(SystemError::from)?;
            let den = rat.eval_qdilog(z + I * rat.gamma).map_err(SystemError::from)?;
            let target = 1.0 + z.exp();
            worst = worst.max((num / den - target).norm() / target.norm());
        }
        Ok(worst)
    };
    reports.push(VerificationReport::from_result(
        "qdilog-rational-branch",
        None,
        rational_branch(),
        1e-8,
        "rational gamma = pi/4 branch satisfies the functional relation",
    ));

    let inversion = || -> Result<f64> {
        let mut worst = 0.0f64;
        for &z in &zs {
            let lhs = ctx.eval_qdilog(z).map_err(SystemError::from)?
                * ctx.eval_qdilog(-z).map_err(SystemError::from)?;
            let rhs =
                (I / (4.0 * gamma) * (z * z + (gamma * gamma + PI * PI) / 3.0)).exp();
            worst = worst.max((lhs - rhs).norm() / rhs.norm());
        }
        Ok(worst)
    };
    reports.push(VerificationReport::from_result(
        "qdilog-inversion",
        None,
        inversion(),
        1e-9,
        "Phi(z) Phi(-z) equals the explicit Gaussian factor",
    ));
    reports
}

/// Polynomial invariants: three-term recurrence, parameter symmetry,
/// leading coefficients.
pub fn suite_polynomials() -> Vec<VerificationReport> {
    let mut reports = Vec::new();
    let q = Complex64::cis(-0.8);
    let p = AWParameterQuad::new(
        Complex64::new(0.3, -0.2),
        Complex64::new(0.5, 0.1),
        Complex64::new(-0.4, 0.3),
        Complex64::new(0.2, 0.2),
    );
    let eta = Complex64::new(0.7, 0.2);

    let recurrence = || -> Result<f64> {
        let mut worst = 0.0f64;
        for variant in [PolyVariant::AskeyWilson, PolyVariant::PTilde] {
            let eval = |n: usize| -> Result<Complex64> {
                Ok(match variant {
                    PolyVariant::AskeyWilson => askey_wilson(n, eta, &p, q),
                    PolyVariant::PTilde => ptilde(n, eta, &p, q),
                }
                .map_err(SystemError::from)?)
            };
            for n in 1..=6usize {
                let r = aw_recurrence(n, &p, q, variant).map_err(SystemError::from)?;
                let terms = [
                    r.a_n * eval(n + 1)?,
                    r.b_n * eval(n)?,
                    r.c_n * eval(n - 1)?,
                ];
                let lhs = eta * eval(n)?;
                let rhs = terms[0] + terms[1] + terms[2];
                let scale = terms.iter().map(|t| t.norm()).sum::<f64>().max(1.0);
                worst = worst.max((lhs - rhs).norm() / scale);
            }
        }
        Ok(worst)
    };
    reports.push(VerificationReport::from_result(
        "poly-three-term-recurrence",
        None,
        recurrence(),
        1e-9,
        "eta p_n = A_n p_{n+1} + B_n p_n + C_n p_{n-1}, both variants",
    ));

    let symmetry = || -> Result<f64> {
        let swapped = AWParameterQuad::new(p.a[1], p.a[0], p.a[2], p.a[3]);
        let mut worst = 0.0f64;
        for n in 0..=5usize {
            let lhs = askey_wilson(n, eta, &p, q).map_err(SystemError::from)?;
            let rhs = askey_wilson(n, eta, &swapped, q).map_err(SystemError::from)?;
            worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1.0));
        }
        Ok(worst)
    };
    reports.push(VerificationReport::from_result(
        "poly-parameter-symmetry",
        None,
        symmetry(),
        1e-8,
        "the polynomial is symmetric under swapping a1 and a2",
    ));

    let leading = || -> Result<f64> {
        let mut worst = 0.0f64;
        for n in 1..=5usize {
            let coeffs =
                polynomial_coefficients(|z| askey_wilson(n, z, &p, q), n).map_err(SystemError::from)?;
            let expected =
                qpoly::leading_coefficient(n, &p, q, PolyVariant::AskeyWilson);
            worst = worst
                .max((coeffs[n] - expected).norm() / expected.norm().max(1.0));
        }
        Ok(worst)
    };
    reports.push(VerificationReport::from_result(
        "poly-leading-coefficient",
        None,
        leading(),
        1e-8,
        "top monomial coefficient matches the closed form",
    ));
    reports
}

/// Per-fixture system invariants: ground energy zero, eigenvalue equation,
/// pointwise Schroedinger equation through the factorized Hamiltonian.
pub fn suite_systems() -> Vec<VerificationReport> {
    let mut reports = Vec::new();
    for sys in all_fixtures() {
        let tag = format!("{:?}-K{}", sys.case, sys.k);
        let xs: Vec<f64> = if sys.case.domain_is_half_line() {
            vec![0.4, 0.9, 1.7]
        } else {
            vec![-1.3, 0.2, 1.1]
        };

        reports.push(VerificationReport::from_result(
            format!("systems-ground-energy-{tag}"),
            Some(&sys),
            sys.energy(0).map_err(VerifyError::from).map(f64::abs),
            1e-12,
            "E_0 = 0",
        ));

        let eigen = || -> Result<f64> {
            let mut worst = 0.0f64;
            for n in 0..=sys.n_max {
                let e = sys.energy(n)?;
                for &x in &xs {
                    let xc = Complex64::new(x, 0.1);
                    let lhs = sys.schrodinger_lhs(n, xc)?;
                    let rhs = e * sys.eigenpoly(n, sys.eta(xc))?;
                    worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1.0));
                }
            }
            Ok(worst)
        };
        reports.push(VerificationReport::from_result(
            format!("systems-eigen-equation-{tag}"),
            Some(&sys),
            eigen(),
            1e-9,
            "similarity-transformed eigenvalue equation at sample points",
        ));

        let pointwise = || -> Result<f64> {
            let mut worst = 0.0f64;
            for n in 0..=sys.n_max {
                worst = worst.max(pointwise_eigen_residual(&sys, n, &xs)?);
            }
            Ok(worst)
        };
        reports.push(VerificationReport::from_result(
            format!("systems-pointwise-schroedinger-{tag}"),
            Some(&sys),
            pointwise(),
            1e-8,
            "H phi_n = E_n phi_n through sqrt(V) e^{gamma p} sqrt(V*)",
        ));
    }
    reports
}

/// Deeper-spectrum companions of the standard fixtures: the parameter
/// shift checks need the shifted system to stay inside the range gates.
fn deep_fixtures() -> Vec<SystemParams> {
    let g = GammaSpec::RationalPi { m: 1, n: 8 };
    vec![
        SystemParams::build(CaseTag::V, g, -6.7, -6.9, 0.3, -0.2, 1).unwrap(),
        SystemParams::build(CaseTag::VI, g, -6.7, -6.9, 0.3, -0.2, 1).unwrap(),
        SystemParams::build(CaseTag::VII, g, -6.7, -6.9, 0.3, -0.2, 1).unwrap(),
        SystemParams::build(CaseTag::VIII, g, -6.7, -6.9, 0.3, -0.2, 1).unwrap(),
        SystemParams::build(CaseTag::VIII, g, 2.3, 2.1, 0.3, -0.2, -1).unwrap(),
        SystemParams::build(CaseTag::VIII, g, -6.7, 2.1, 0.3, -0.2, 0).unwrap(),
    ]
}

/// Per-fixture oracle equivalences: determinant against closed form,
/// closure relation, shape invariance, norm recursion chains. The shift
/// checks run on the deep fixtures so one parameter step stays admissible.
pub fn suite_oracle() -> Vec<VerificationReport> {
    let mut reports = Vec::new();
    for sys in all_fixtures() {
        let tag = format!("{:?}-K{}", sys.case, sys.k);

        let determinant = || -> Result<f64> {
            let mut worst = 0.0f64;
            for n in 0..=sys.n_max.min(4) {
                let det = oracle::determinant_eigenpoly(&sys, n)?;
                let closed = polynomial_coefficients(|z| Ok(sys.eigenpoly(n, z).unwrap()), n)
                    .map_err(SystemError::from)?;
                let scale = closed.iter().map(|c| c.norm()).fold(1.0, f64::max);
                for k in 0..=n {
                    worst = worst.max((det[k] - closed[k]).norm() / scale);
                }
            }
            Ok(worst)
        };
        reports.push(VerificationReport::from_result(
            format!("oracle-determinant-{tag}"),
            Some(&sys),
            determinant(),
            1e-8,
            "determinant eigenpolynomial equals the hypergeometric closed form",
        ));

        reports.push(VerificationReport::from_result(
            format!("oracle-closure-{tag}"),
            Some(&sys),
            Ok(oracle::verify_closure(&sys, sys.n_max.min(4))),
            1e-9,
            "closure relation as a matrix identity on the triangular action",
        ));

    }
    for sys in deep_fixtures() {
        let tag = format!("{:?}-K{}", sys.case, sys.k);
        let anchor = sys.domain_anchor();

        let shape = || -> Result<f64> {
            let r = oracle::shape_invariance_check(&sys, Complex64::new(anchor + 0.4, 0.0))?;
            Ok(r.potential.max(r.groundstate))
        };
        reports.push(VerificationReport::from_result(
            format!("oracle-shape-invariance-{tag}"),
            Some(&sys),
            shape(),
            1e-8,
            "potential and ground-state transformation under the parameter shift",
        ));

        let chains = || -> Result<f64> {
            let n = 1.min(sys.n_max);
            Ok(oracle::norm_chain_shape_invariance(&sys, n)?
                .max(oracle::norm_chain_recurrence(&sys, n)?)
                .max(oracle::norm_h0_functional(&sys, n)?))
        };
        reports.push(VerificationReport::from_result(
            format!("oracle-norm-chains-{tag}"),
            Some(&sys),
            chains(),
            1e-7,
            "conjectured norms satisfy the recursion chains",
        ));
    }
    reports
}

/// Quadrature checks on every fixture: Gram identity, conjectured norms,
/// hermiticity, mirror symmetry, self-consistency.
pub fn suite_quadrature(cfg: &QuadratureConfig) -> Vec<VerificationReport> {
    let mut reports = Vec::new();
    let mut grams: Vec<(CaseTag, Vec<Vec<f64>>)> = Vec::new();
    for sys in all_fixtures() {
        let tag = format!("{:?}-K{}", sys.case, sys.k);
        match orthogonality_report(&sys, cfg) {
            Ok((gram, report)) => {
                grams.push((sys.case, gram));
                reports.push(report);
            }
            Err(e) => reports.push(VerificationReport::new(
                format!("orthogonality-{tag}"),
                Some(&sys),
                f64::INFINITY,
                1.0,
                format!("error: {e}"),
            )),
        }
        reports.push(VerificationReport::from_result(
            format!("norms-vs-quadrature-{tag}"),
            Some(&sys),
            norm_comparison(&sys, cfg),
            1e-6,
            "conjectured h_n against direct integration of phi_n^2",
        ));
        let herm = || -> Result<f64> {
            let mut worst = 0.0f64;
            for (n1, n2) in [(0usize, 0usize), (0, 1.min(sys.n_max))] {
                worst = worst.max(hermiticity_residual(&sys, n1, n2, cfg)?);
            }
            Ok(worst)
        };
        reports.push(VerificationReport::from_result(
            format!("hermiticity-{tag}"),
            Some(&sys),
            herm(),
            1e-8,
            "(f1, H f2) = (H f1, f2) for admissible degree pairs",
        ));
    }

    let mirror = || -> f64 {
        let v = grams.iter().find(|(c, _)| *c == CaseTag::V);
        let vi = grams.iter().find(|(c, _)| *c == CaseTag::VI);
        match (v, vi) {
            (Some((_, a)), Some((_, b))) => a
                .iter()
                .flatten()
                .zip(b.iter().flatten())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
            _ => f64::INFINITY,
        }
    };
    reports.push(VerificationReport::new(
        "gram-mirror-v-vi",
        None,
        mirror(),
        1e-7,
        "mirror systems share one Gram matrix",
    ));

    let sys = SystemParams::fixture(CaseTag::VII, 1);
    reports.push(VerificationReport::from_result(
        "quadrature-selfconsistency-VII",
        Some(&sys),
        quadrature_selfconsistency(&sys, cfg),
        1.0,
        "halving rel_tol moves inner products by < 10x the tighter tolerance",
    ));
    reports
}

/// Continuum limit checks, both directions.
pub fn suite_limits() -> Vec<VerificationReport> {
    let gammas = [0.2, 0.1, 0.05, 0.025];
    let rs = [20.0, 40.0, 80.0];
    let mut reports = Vec::new();
    for (case, target) in [
        (CaseTag::V, OqmTarget::Morse),
        (CaseTag::VII, OqmTarget::HyperbolicDPT),
        (CaseTag::VIII, OqmTarget::HyperbolicSymTopII),
    ] {
        reports.push(match oqm_limit_check(case, target, &gammas) {
            Ok(r) => r,
            Err(e) => VerificationReport::new(
                format!("oqm-limit-{case:?}-{target:?}"),
                None,
                f64::INFINITY,
                0.05,
                format!("error: {e}"),
            ),
        });
    }
    for case in [CaseTag::VII, CaseTag::VI] {
        reports.push(match wilson_hahn_limit_check(case, &rs) {
            Ok(r) => r,
            Err(e) => VerificationReport::new(
                format!("wilson-hahn-limit-{case:?}"),
                None,
                f64::INFINITY,
                0.05,
                format!("error: {e}"),
            ),
        });
    }
    reports
}

/// Every suite, concatenated; the acceptance surface of the library.
pub fn all_suites(cfg: &QuadratureConfig) -> Vec<VerificationReport> {
    let mut reports = suite_qdilog();
    reports.extend(suite_polynomials());
    reports.extend(suite_systems());
    reports.extend(suite_oracle());
    reports.extend(suite_quadrature(cfg));
    reports.extend(suite_limits());
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn diagonal_inner_products_are_positive() {
        for sys in all_fixtures() {
            let v = inner_product(&sys, 0, 0, &cfg()).unwrap();
            assert!(v.re > 0.0, "case {:?} K {}: {v}", sys.case, sys.k);
            assert!(v.im.abs() < 1e-9 * v.re);
        }
    }

    #[test]
    fn case_vii_real_parameters_orthogonality() {
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
        let ip = inner_product(&sys, 0, 1, &cfg()).unwrap();
        let h0 = sys.conjectured_norm(0).unwrap().re;
        let h1 = sys.conjectured_norm(1).unwrap().re;
        assert!(ip.norm() / (h0 * h1).sqrt() < 1e-8);
    }

    #[test]
    fn gram_matrices_are_identity() {
        let mut grams = Vec::new();
        for sys in all_fixtures() {
            let (gram, report) = orthogonality_report(&sys, &cfg()).unwrap();
            assert!(
                report.passed,
                "case {:?} K {}: residual {} ({})",
                sys.case, sys.k, report.residual, report.notes
            );
            assert_eq!(gram.len(), sys.n_max + 1);
            grams.push((sys.case, sys.k, gram));
        }
        // the n_max = 1 fixtures produce 2x2 matrices
        let (_, _, g) = grams.iter().find(|(c, k, _)| *c == CaseTag::V && *k == 1).unwrap();
        assert_eq!(g.len(), 2);
        // mirror pair shares the Gram matrix
        let (_, _, g5) = grams.iter().find(|(c, _, _)| *c == CaseTag::V).unwrap();
        let (_, _, g6) = grams.iter().find(|(c, _, _)| *c == CaseTag::VI).unwrap();
        for (row5, row6) in g5.iter().zip(g6) {
            for (a, b) in row5.iter().zip(row6) {
                assert!((a - b).abs() < 1e-7, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn norms_match_conjectured_closed_forms() {
        for sys in all_fixtures() {
            let worst = norm_comparison(&sys, &cfg()).unwrap();
            assert!(
                worst < 1e-6,
                "case {:?} K {}: relative disagreement {worst}",
                sys.case,
                sys.k
            );
        }
    }

    #[test]
    fn truncated_domain_agrees_with_adaptive() {
        let sys = SystemParams::fixture(CaseTag::VII, 1);
        let adaptive = inner_product(&sys, 0, 0, &cfg()).unwrap();
        let mut truncated_cfg = cfg();
        truncated_cfg.scheme = Scheme::TruncatedDomain(40.0);
        let truncated = inner_product(&sys, 0, 0, &truncated_cfg).unwrap();
        assert!((adaptive - truncated).norm() < 1e-7 * adaptive.norm());
    }

    #[test]
    fn hermiticity_residuals_are_small() {
        for sys in all_fixtures() {
            for (n1, n2) in [(0usize, 0usize), (0, 1)] {
                let r = hermiticity_residual(&sys, n1, n2, &cfg()).unwrap();
                assert!(
                    r < 1e-8,
                    "case {:?} K {} pair ({n1},{n2}): {r}",
                    sys.case,
                    sys.k
                );
            }
        }
    }

    #[test]
    fn degree_bound_violation_is_reported() {
        let sys = SystemParams::fixture(CaseTag::VII, 1);
        let err = hermiticity_residual(&sys, sys.n_max + 2, sys.n_max + 2, &cfg()).unwrap_err();
        assert!(matches!(err, VerifyError::DegreeBoundViolation { .. }));
    }

    #[test]
    fn pointwise_schroedinger_equation_holds() {
        for sys in all_fixtures() {
            let xs: Vec<f64> = if sys.case.domain_is_half_line() {
                vec![0.5, 1.2, 2.3]
            } else {
                vec![-1.4, 0.3, 1.6]
            };
            for n in 0..=sys.n_max {
                let r = pointwise_eigen_residual(&sys, n, &xs).unwrap();
                assert!(
                    r < 1e-8,
                    "case {:?} K {} n {n}: {r}",
                    sys.case,
                    sys.k
                );
            }
        }
    }

    #[test]
    fn quadrature_is_selfconsistent() {
        let sys = SystemParams::fixture(CaseTag::V, 1);
        let worst = quadrature_selfconsistency(&sys, &cfg()).unwrap();
        assert!(worst < 1.0, "self-consistency ratio {worst}");
    }

    #[test]
    fn morse_limit_converges() {
        let r = oqm_limit_check(CaseTag::V, OqmTarget::Morse, &[0.2, 0.1, 0.05, 0.025]).unwrap();
        assert!(r.passed, "{} -> {} ({})", r.check_id, r.residual, r.notes);
    }

    #[test]
    fn hyperbolic_dpt_limit_converges() {
        let r = oqm_limit_check(
            CaseTag::VII,
            OqmTarget::HyperbolicDPT,
            &[0.2, 0.1, 0.05, 0.025],
        )
        .unwrap();
        assert!(r.passed, "{} -> {} ({})", r.check_id, r.residual, r.notes);
    }

    #[test]
    fn hyperbolic_symtop_limit_converges() {
        let r = oqm_limit_check(
            CaseTag::VIII,
            OqmTarget::HyperbolicSymTopII,
            &[0.2, 0.1, 0.05, 0.025],
        )
        .unwrap();
        assert!(r.passed, "{} -> {} ({})", r.check_id, r.residual, r.notes);
    }

    #[test]
    fn constant_polynomial_limit_is_exact() {
        let sys = oqm_system(CaseTag::V, OqmTarget::Morse, 0.1).unwrap();
        let p0 = sys.eigenpoly(0, sys.eta(Complex64::new(0.7, 0.0))).unwrap();
        assert!((p0 - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn mismatched_limit_pairing_is_rejected() {
        let err = oqm_limit_check(CaseTag::V, OqmTarget::HyperbolicDPT, &[0.1]).unwrap_err();
        assert!(matches!(err, VerifyError::EmbeddingOutOfRange { .. }));
    }

    #[test]
    fn out_of_range_gamma_is_rejected() {
        let err = oqm_limit_check(CaseTag::V, OqmTarget::Morse, &[2.5]).unwrap_err();
        assert!(matches!(err, VerifyError::EmbeddingOutOfRange { .. }));
    }

    #[test]
    fn wilson_limit_converges() {
        let r = wilson_hahn_limit_check(CaseTag::VII, &[20.0, 40.0, 80.0]).unwrap();
        assert!(r.passed, "{} -> {} ({})", r.check_id, r.residual, r.notes);
        // the degree-one polynomial alone: close at R = 80 and closer than at 40
        let d40 = wilson_poly_distance(CaseTag::VII, 40.0, 1).unwrap();
        let d80 = wilson_poly_distance(CaseTag::VII, 80.0, 1).unwrap();
        assert!(d80 < 0.05, "R = 80 distance {d80}");
        assert!(d80 < d40, "{d80} !< {d40}");
        // degree-zero limits are exact at any R
        let d0 = wilson_poly_distance(CaseTag::VII, 20.0, 0).unwrap();
        assert!(d0 < 1e-10, "constant distance {d0}");
    }

    #[test]
    fn continuous_hahn_limit_converges() {
        let r = wilson_hahn_limit_check(CaseTag::VI, &[20.0, 40.0, 80.0]).unwrap();
        assert!(r.passed, "{} -> {} ({})", r.check_id, r.residual, r.notes);
    }

    #[test]
    fn reports_serialize_to_json_and_csv() {
        let sys = SystemParams::fixture(CaseTag::V, 1);
        let reports = vec![
            VerificationReport::new("demo-a", Some(&sys), 1e-9, 1e-6, "plain note"),
            VerificationReport::new("demo-b", None, 2.0, 1.0, "note, with comma and \"quote\""),
        ];
        let json = reports_to_json(&reports);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.as_array().unwrap().len(), 2);
        assert_eq!(parsed[0]["passed"], serde_json::Value::Bool(true));
        assert_eq!(parsed[1]["passed"], serde_json::Value::Bool(false));
        let csv = reports_to_csv(&reports);
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("check_id,case,gamma"));
        assert!(csv.contains("\"note, with comma and \"\"quote\"\"\""));
    }

    #[test]
    fn fast_suites_pass() {
        for report in suite_qdilog()
            .into_iter()
            .chain(suite_polynomials())
            .chain(suite_systems())
            .chain(suite_oracle())
        {
            assert!(
                report.passed,
                "{}: residual {} ({})",
                report.check_id, report.residual, report.notes
            );
        }
    }
}

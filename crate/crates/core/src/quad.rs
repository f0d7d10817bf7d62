//! Adaptive Gauss-Kronrod quadrature for complex-valued integrands on real
//! intervals.
//!
//! A 7-15 point pair drives the local error estimate; intervals are bisected
//! until the estimate drops below `abs_tol + rel_tol * |running integral|`.

use num_complex::Complex64;

/// Kronrod-15 abscissae on [-1, 1] (positive half; symmetric).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];

/// Kronrod-15 weights.
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// Gauss-7 weights (on the even-indexed Kronrod abscissae).
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, thiserror::Error)]
#[error("quadrature failed to converge: estimated error {error:.3e} after {evaluations} evaluations")]
pub struct QuadratureNotConverged {
    pub error: f64,
    pub evaluations: usize,
}

fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kronrod = Complex64::new(0.0, 0.0);
    let mut gauss = Complex64::new(0.0, 0.0);
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let (fl, fr) = if x == 0.0 {
            let v = f(c);
            (v, Complex64::new(0.0, 0.0))
        } else {
            (f(c - h * x), f(c + h * x))
        };
        let pair = fl + fr;
        kronrod += wk * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        } else if x == 0.0 {
            gauss += WG[3] * fl;
        }
    }
    let value = kronrod * h;
    let err = ((kronrod - gauss) * h).norm();
    // The classic (200 err)^1.5 sharpening is overkill here; plain difference
    // with a floor keeps the estimate conservative.
    (value, err.max(1e-300))
}

/// Adaptively integrate `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_refinements: usize,
) -> Result<QuadResult, QuadratureNotConverged> {
    struct Seg {
        a: f64,
        b: f64,
        value: Complex64,
        err: f64,
    }
    let (value, err) = gk15(&mut f, a, b);
    let mut evals = 15;
    let mut segs = vec![Seg { a, b, value, err }];
    for _ in 0..max_refinements {
        let total: Complex64 = segs.iter().map(|s| s.value).sum();
        let total_err: f64 = segs.iter().map(|s| s.err).sum();
        let tol = abs_tol + rel_tol * total.norm();
        if total_err <= tol {
            return Ok(QuadResult {
                value: total,
                abs_error: total_err,
                evaluations: evals,
            });
        }
        // split the worst segment
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|(_, s), (_, t)| s.err.partial_cmp(&t.err).unwrap())
            .unwrap();
        let Seg { a, b, .. } = segs.swap_remove(idx);
        let m = 0.5 * (a + b);
        let (v1, e1) = gk15(&mut f, a, m);
        let (v2, e2) = gk15(&mut f, m, b);
        evals += 30;
        segs.push(Seg {
            a,
            b: m,
            value: v1,
            err: e1,
        });
        segs.push(Seg {
            a: m,
            b,
            value: v2,
            err: e2,
        });
    }
    let total: Complex64 = segs.iter().map(|s| s.value).sum();
    let total_err: f64 = segs.iter().map(|s| s.err).sum();
    let tol = abs_tol + rel_tol * total.norm();
    if total_err <= tol {
        Ok(QuadResult {
            value: total,
            abs_error: total_err,
            evaluations: evals,
        })
    } else {
        Err(QuadratureNotConverged {
            error: total_err,
            evaluations: evals,
        })
    }
}

//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;
const MAX_EVALUATIONS: u64 = 20_000_000;

struct State {
    failed: bool,
    evaluations: u64,
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Fails if some subinterval still misses its share of the tolerance at the
/// maximum recursion depth, or if the integrand produces a non-finite value.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut state = State {
        failed: false,
        evaluations: 3,
    };
    let v = recurse(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut state);
    if state.failed {
        return Err(Error::Quadrature(format!(
            "tolerance {tol:e} not met on [{a}, {b}] within depth {MAX_DEPTH}"
        )));
    }
    if !v.is_finite() {
        return Err(Error::Quadrature(format!("non-finite integral on [{a}, {b}]")));
    }
    Ok(v)
}

/// Integrates over consecutive breakpoints, splitting `tol` by interval width.
pub fn adaptive_simpson_pieces<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: f64) -> Result<f64> {
    let span = breaks.last().unwrap_or(&0.0) - breaks.first().unwrap_or(&0.0);
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let share = if span > 0.0 { tol * (w[1] - w[0]) / span } else { tol };
        total += adaptive_simpson(&f, w[0], w[1], share)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    state: &mut State,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    state.evaluations += 2;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    if depth == 0 || m <= a || m >= b || state.evaluations > MAX_EVALUATIONS {
        state.failed = true;
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, state)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = adaptive_simpson(|x| 3.0 * x * x + 1.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 10.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_and_root() {
        let v = adaptive_simpson(f64::exp, 0.0, 1.0, 1e-13).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-12);
        // the endpoint singularity of the derivative limits how far tolerance can be pushed
        let v = adaptive_simpson(f64::sqrt, 0.0, 1.0, 1e-7).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn pieces_sum() {
        let v = adaptive_simpson_pieces(f64::sin, &[0.0, 1.0, 2.0, std::f64::consts::PI], 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn reports_non_finite() {
        assert!(adaptive_simpson(|x| 1.0 / x, 0.0, 1.0, 1e-12).is_err());
    }
}

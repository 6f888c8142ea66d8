//! One-dimensional quadrature rules.

use crate::error::{Error, Result};

/// Panels the interval is pre-split into before refinement. Seeding the
/// recursion this way gives a tolerance scale that is not fooled by a
/// lucky first Simpson estimate of an oscillating integrand.
const SEED_PANELS: usize = 32;
const MAX_DEPTH: u32 = 48;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Sum of the local Richardson error estimates.
    pub error: f64,
}

/// Adaptive Simpson integration of `f` over `[a, b]` to relative
/// tolerance `rel_tol`, measured against ∫|f|.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("integration bounds", format!("[{a}, {b}] not finite")));
    }
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }

    let h = (b - a) / SEED_PANELS as f64;
    let mut panels = Vec::with_capacity(SEED_PANELS);
    let mut abs_scale = 0.0;
    for i in 0..SEED_PANELS {
        let lo = a + h * i as f64;
        let hi = if i + 1 == SEED_PANELS { b } else { a + h * (i + 1) as f64 };
        let mid = 0.5 * (lo + hi);
        let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
        let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        abs_scale += (hi - lo) / 6.0 * (flo.abs() + 4.0 * fmid.abs() + fhi.abs());
        panels.push(Panel { lo, hi, flo, fmid, fhi, whole });
    }

    let tol = (rel_tol * abs_scale).max(f64::MIN_POSITIVE);
    let panel_tol = tol / SEED_PANELS as f64;
    let mut value = 0.0;
    let mut error = 0.0;
    let mut exhausted = false;
    for p in &panels {
        let (v, e) = refine(&f, p, panel_tol, MAX_DEPTH, &mut exhausted);
        value += v;
        error += e;
    }
    if exhausted {
        let coarse: f64 = panels.iter().map(|p| p.whole).sum();
        return Err(Error::Convergence {
            what: "adaptive Simpson quadrature",
            coarse,
            fine: value,
        });
    }
    Ok(Estimate { value, error })
}

struct Panel {
    lo: f64,
    hi: f64,
    flo: f64,
    fmid: f64,
    fhi: f64,
    whole: f64,
}

fn refine<F: Fn(f64) -> f64>(f: &F, p: &Panel, tol: f64, depth: u32, exhausted: &mut bool) -> (f64, f64) {
    let mid = 0.5 * (p.lo + p.hi);
    let lm = 0.5 * (p.lo + mid);
    let rm = 0.5 * (mid + p.hi);
    let (flm, frm) = (f(lm), f(rm));
    let left = (mid - p.lo) / 6.0 * (p.flo + 4.0 * flm + p.fmid);
    let right = (p.hi - mid) / 6.0 * (p.fmid + 4.0 * frm + p.fhi);
    let delta = left + right - p.whole;
    if delta.abs() <= 15.0 * tol {
        return (left + right + delta / 15.0, delta.abs() / 15.0);
    }
    if depth == 0 || mid <= p.lo || mid >= p.hi {
        *exhausted = true;
        return (left + right + delta / 15.0, delta.abs() / 15.0);
    }
    let l = Panel {
        lo: p.lo,
        hi: mid,
        flo: p.flo,
        fmid: flm,
        fhi: p.fmid,
        whole: left,
    };
    let r = Panel {
        lo: mid,
        hi: p.hi,
        flo: p.fmid,
        fmid: frm,
        fhi: p.fhi,
        whole: right,
    };
    let (lv, le) = refine(f, &l, 0.5 * tol, depth - 1, exhausted);
    let (rv, re) = refine(f, &r, 0.5 * tol, depth - 1, exhausted);
    (lv + rv, le + re)
}

/// Nodes and weights of the composite trapezoid rule with `n` nodes on
/// `[a, b]`.
pub fn trapezoid(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "trapezoid rule needs at least two nodes");
    let h = (b - a) / (n - 1) as f64;
    let nodes = (0..n).map(|i| a + h * i as f64).collect();
    let mut weights = vec![h; n];
    weights[0] = 0.5 * h;
    weights[n - 1] = 0.5 * h;
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn simpson_polynomials_and_gaussian() {
        let est = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12).unwrap();
        assert_relative_eq!(est.value, 0.0, epsilon = 1e-13);
        let est = adaptive_simpson(|x| (-x * x).exp(), 0.0, 8.0, 1e-12).unwrap();
        assert_relative_eq!(est.value, std::f64::consts::PI.sqrt() / 2.0, max_relative = 1e-11);
    }

    #[test]
    fn simpson_oscillatory() {
        let est = adaptive_simpson(|x| (30.0 * x).sin() * x, 0.0, std::f64::consts::PI, 1e-12).unwrap();
        // ∫ x sin(30x) over [0, π] = −π cos(30π)/30 = −π/30
        assert_relative_eq!(est.value, -std::f64::consts::PI / 30.0, max_relative = 1e-10);
    }

    #[test]
    fn simpson_empty_interval() {
        assert_eq!(adaptive_simpson(|x| x, 3.0, 3.0, 1e-10).unwrap().value, 0.0);
    }

    #[test]
    fn simpson_reports_nonconvergence() {
        // Discontinuous integrand with a tolerance below what depth allows.
        let err = adaptive_simpson(|x| if x < 1.0 / 3.0 { 0.0 } else { 1e300 }, 0.0, 1.0, 1e-300).unwrap_err();
        assert!(err.is_convergence());
    }

    #[test]
    fn trapezoid_weights() {
        let (x, w) = trapezoid(0.0, 1.0, 5);
        assert_eq!(x, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(w, vec![0.125, 0.25, 0.25, 0.25, 0.125]);
    }
}

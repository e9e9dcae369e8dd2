//! Adaptive Simpson quadrature and the trapezoid rule.

use crate::math;

const MAX_DEPTH: u32 = 48;

/// Adaptive Simpson over `[a, b]` to absolute tolerance `tol`, with the
/// Richardson correction applied on accepted panels.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0;
    refine(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn refine(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) * (fa + 4.0 * flm + fm) / 6.0;
    let right = (b - m) * (fm + 4.0 * frm + fb) / 6.0;
    let both = left + right;
    let delta = both - whole;
    if depth == 0 || math::abs(delta) <= 15.0 * tol || m <= a || m >= b {
        return both + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// `[a, b]` cut into `panels` equal pieces, each integrated adaptively. The
/// initial cut keeps narrow features from slipping between the first nodes.
pub fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, tol: f64) -> f64 {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let tol = tol / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == panels { b } else { lo + h };
            adaptive_simpson(f, lo, hi, tol)
        })
        .sum()
}

/// Upper end of the substituted variable; the sliver beyond it corresponds to
/// abscissae past `scale * 1e12`.
const T_MAX: f64 = 1.0 - 1e-12;

/// ∫ f over `[start, ∞)` through `x = start + scale·t/(1−t)`.
pub fn integrate_to_infinity(f: &impl Fn(f64) -> f64, start: f64, scale: f64, tol: f64) -> f64 {
    let g = |t: f64| {
        let u = 1.0 - t;
        f(start + scale * t / u) * scale / (u * u)
    };
    integrate(&g, 0.0, T_MAX, 64, tol)
}

/// ∫ f over `(−∞, end]`.
pub fn integrate_from_neg_infinity(f: &impl Fn(f64) -> f64, end: f64, scale: f64, tol: f64) -> f64 {
    integrate_to_infinity(&|x: f64| f(2.0 * end - x), end, scale, tol)
}

/// ∫ f over the real line, split at `center`.
pub fn integrate_real_line(f: &impl Fn(f64) -> f64, center: f64, scale: f64, tol: f64) -> f64 {
    integrate_from_neg_infinity(f, center, scale, 0.5 * tol) + integrate_to_infinity(f, center, scale, 0.5 * tol)
}

/// Trapezoid rule over ascending, possibly non-uniform abscissae.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2).zip(ys.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
}

/// Three-point Gauss-Legendre rule on `[a, b]`; exact for polynomials of degree ≤ 5.
pub fn gauss_legendre3(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const NODE: f64 = 0.774_596_669_241_483_4; // sqrt(3/5)
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    h * (5.0 * f(c - h * NODE) + 8.0 * f(c) + 5.0 * f(c + h * NODE)) / 9.0
}

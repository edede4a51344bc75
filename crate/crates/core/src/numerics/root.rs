//! Bracketing root finder (Brent's method).

use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 200;

/// Finds a root of `f` in `[lo, hi]`, given `f(lo)` and `f(hi)` of opposite
/// sign (or one of them zero).
///
/// Combines inverse quadratic interpolation, secant steps and bisection.
/// Terminates once the bracket is narrower than `tol` (plus a few ulps of
/// the iterate) or `f` vanishes exactly.
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::domain(format!("root tolerance must be positive, got {tol}")));
    }
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::domain("function is NaN at a bracket end"));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo, hi, f_lo: fa, f_hi: fb });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITERATIONS {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(m) };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::domain(format!("function is NaN at {b}")));
        }
    }
    Err(Error::RootNotConverged { iterations: MAX_ITERATIONS, lo: b.min(c), hi: b.max(c) })
}

/// Expands `[lo, hi]` geometrically (both ends, positive domain) until `f`
/// changes sign, then hands over to [`find_root`]. Bounds are clamped to
/// `[min, max]`.
pub fn find_root_positive_expanding<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    min: f64,
    max: f64,
    tol: f64,
) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut f_lo, mut f_hi) = (f(lo), f(hi));
    while f_lo.signum() == f_hi.signum() && f_lo != 0.0 && f_hi != 0.0 {
        if lo <= min && hi >= max {
            return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
        }
        lo = (lo / 16.0).max(min);
        hi = (hi * 16.0).min(max);
        f_lo = f(lo);
        f_hi = f(hi);
    }
    find_root(f, lo, hi, tol)
}

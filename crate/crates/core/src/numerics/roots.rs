//! Bracketed scalar root finding (Brent's method).

use crate::error::Error;

/// Root of `f` inside [lo, hi], located to absolute tolerance `tol`.
///
/// Requires a sign change: `f(lo) * f(hi) <= 0`, otherwise fails with
/// `Error::Bracket`. Combines bisection with secant and inverse quadratic
/// steps; convergence is guaranteed for continuous `f`.
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64, Error> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::input("root bracket must be finite with lo < hi"));
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::input("root tolerance must be positive and finite"));
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if !fa.is_finite() || !fb.is_finite() {
        return Err(Error::input("function returned a non-finite value at the bracket"));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket { lo, hi });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
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
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Try interpolation: secant if only two points, else inverse
            // quadratic through (a, b, c).
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0)),
                    (qa - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let accept = 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs());
            if accept {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 {
            d
        } else {
            tol1 * xm.signum()
        };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::input("function returned a non-finite value during iteration"));
        }
    }
    Err(Error::NoConvergence {
        iterations: 200,
        last_change: (b - a).abs(),
    })
}

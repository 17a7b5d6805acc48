//! Airy function of the first kind, its derivative, and its negative zeros.
//!
//! Four evaluation regimes, chosen so truncation and cancellation both stay
//! below 1e-12 absolute on |x| <= 20:
//!
//! * -6 <= x < 5.75: Maclaurin series in the standard (f, g) solution pair.
//! * x >= 5.75: exponential asymptotic expansion, truncated at the smallest
//!   term. The handover sits where the series' cancellation loss and the
//!   expansion's truncation floor are both ~3e-13.
//! * x <= -8: oscillatory asymptotic expansion, truncated at the smallest term.
//! * -8 < x < -6: Taylor continuation of the ODE y'' = x y from an anchor at
//!   x = -8, where the oscillatory expansion is already accurate.
//!
//! The seams are consistent to a few 1e-13, which the test suite pins down.

use crate::fmath::{cos, exp, powf, sin, sqrt};

/// Ai(0) = 3^(-2/3) / Gamma(2/3).
pub const AIRY_AI_AT_ZERO: f64 = 0.355_028_053_887_817_239_26;
/// Ai'(0) = -3^(-1/3) / Gamma(1/3).
pub const AIRY_AI_PRIME_AT_ZERO: f64 = -0.258_819_403_792_806_798_41;

const SQRT_PI: f64 = 1.772_453_850_905_516_027_3;
const FRAC_PI_4: f64 = core::f64::consts::FRAC_PI_4;

/// Value and first derivative of Ai at `x`.
///
/// NaN propagates; +inf maps to (0, 0). Absolute accuracy is 1e-12 or better
/// for |x| <= 20; beyond -20 the phase of the oscillation slowly loses
/// precision (error ~ |x|^(3/2) * eps).
pub fn airy_ai_with_prime(x: f64) -> (f64, f64) {
    if x.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if x == f64::INFINITY {
        return (0.0, 0.0);
    }
    if x == f64::NEG_INFINITY {
        return (f64::NAN, f64::NAN);
    }
    if x >= 5.75 {
        asymptotic_positive(x)
    } else if x >= -6.0 {
        maclaurin(x)
    } else if x <= -8.0 {
        asymptotic_negative(x)
    } else {
        let (y, yp) = asymptotic_negative(-8.0);
        taylor_continue(-8.0, y, yp, x)
    }
}

/// Ai(x).
pub fn airy_ai(x: f64) -> f64 {
    airy_ai_with_prime(x).0
}

/// Ai'(x).
pub fn airy_ai_prime(x: f64) -> f64 {
    airy_ai_with_prime(x).1
}

/// Maclaurin series. Ai = Ai(0) f + Ai'(0) g where f, g solve y'' = x y with
/// f(0) = 1, f'(0) = 0 and g(0) = 0, g'(0) = 1. Coefficients obey
/// a[n+3] = a[n] / ((n+2)(n+3)). Worst-case cancellation at the positive end
/// of the branch loses ~3 digits, still within budget.
fn maclaurin(x: f64) -> (f64, f64) {
    let x2 = x * x;
    let x3 = x2 * x;
    // Running terms of f, g, f', g'; sums seeded with the k = 0 terms.
    let mut tf = 1.0;
    let mut tg = x;
    let mut tfp = 0.0;
    let mut tgp = 1.0;
    let mut f = tf;
    let mut g = tg;
    let mut fp = tfp;
    let mut gp = tgp;
    for k in 1..=60u32 {
        let km = f64::from(k - 1);
        tf *= x3 / ((3.0 * km + 2.0) * (3.0 * km + 3.0));
        tg *= x3 / ((3.0 * km + 3.0) * (3.0 * km + 4.0));
        tgp *= x3 / ((3.0 * km + 1.0) * (3.0 * km + 3.0));
        tfp = if k == 1 {
            0.5 * x2
        } else {
            tfp * (km + 1.0) / km * x3 / ((3.0 * km + 2.0) * (3.0 * km + 3.0))
        };
        f += tf;
        g += tg;
        fp += tfp;
        gp += tgp;
        let tmax = tf.abs() + tg.abs() + tfp.abs() + tgp.abs();
        if tmax < 1e-17 * (f.abs() + g.abs() + fp.abs() + gp.abs() + 1.0) {
            break;
        }
    }
    (
        AIRY_AI_AT_ZERO * f + AIRY_AI_PRIME_AT_ZERO * g,
        AIRY_AI_AT_ZERO * fp + AIRY_AI_PRIME_AT_ZERO * gp,
    )
}

/// u[k+1] = u[k] (6k+1)(6k+5) / (72 (k+1)); v[k] = u[k] (6k+1) / (1-6k).
/// These drive both asymptotic branches.
#[inline]
fn next_u(u: f64, k: f64) -> f64 {
    u * (6.0 * k + 1.0) * (6.0 * k + 5.0) / (72.0 * (k + 1.0))
}

#[inline]
fn v_of_u(u: f64, k: f64) -> f64 {
    u * (6.0 * k + 1.0) / (1.0 - 6.0 * k)
}

/// x >= 5.75. Ai ~ e^{-z} / (2 sqrt(pi) x^{1/4}) * sum (-1)^k u_k z^{-k} with
/// z = (2/3) x^{3/2}; the derivative uses v_k. Truncated at the smallest
/// term; at the branch edge that term is ~1e-8 relative, i.e. ~3e-13 absolute.
fn asymptotic_positive(x: f64) -> (f64, f64) {
    let z = 2.0 / 3.0 * x * sqrt(x);
    let mut s = 1.0;
    let mut sp = 1.0;
    let mut u = 1.0;
    let mut pw = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..40u32 {
        let kf = f64::from(k);
        u = next_u(u, kf);
        let v = v_of_u(u, kf + 1.0);
        pw *= -1.0 / z;
        let term = u * pw;
        if term.abs() >= prev {
            break;
        }
        s += term;
        sp += v * pw;
        prev = term.abs();
        if term.abs() < 1e-17 * s.abs() {
            break;
        }
    }
    let root4 = powf(x, 0.25);
    let damp = exp(-z) / (2.0 * SQRT_PI);
    (damp / root4 * s, -damp * root4 * sp)
}

/// x <= -8. With z = -x, w = (2/3) z^{3/2}:
/// Ai(-z)  = [cos(w - pi/4) P + sin(w - pi/4) Q] / (sqrt(pi) z^{1/4})
/// Ai'(-z) = [sin(w - pi/4) R - cos(w - pi/4) S] * z^{1/4} / sqrt(pi)
/// where P, R collect even-index u, v and Q, S odd-index ones, signs
/// alternating per pair. Truncated at the smallest term (~2e-14 at z = 8).
fn asymptotic_negative(x: f64) -> (f64, f64) {
    let z = -x;
    let w = 2.0 / 3.0 * z * sqrt(z);
    let mut p = 0.0;
    let mut q = 0.0;
    let mut r = 0.0;
    let mut s = 0.0;
    let mut u = 1.0;
    let mut v = 1.0;
    let mut ipw = 1.0;
    let mut prev = f64::INFINITY;
    let mut m = 0u32;
    loop {
        let tu: f64 = u * ipw;
        if tu.abs() >= prev {
            break;
        }
        let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if m % 2 == 0 {
            p += sign * tu;
            r += sign * v * ipw;
        } else {
            q += sign * tu;
            s += sign * v * ipw;
        }
        prev = tu.abs();
        if tu.abs() < 1e-18 || m >= 30 {
            break;
        }
        let mf = f64::from(m);
        u = next_u(u, mf);
        v = v_of_u(u, mf + 1.0);
        ipw /= w;
        m += 1;
    }
    let co = cos(w - FRAC_PI_4);
    let si = sin(w - FRAC_PI_4);
    let root4 = powf(z, 0.25);
    (
        (co * p + si * q) / (SQRT_PI * root4),
        (si * r - co * s) * root4 / SQRT_PI,
    )
}

/// Taylor step for y'' = x y from (x0, y, y'). Coefficients obey
/// a[n+2] = (x0 a[n] + a[n-1]) / ((n+1)(n+2)). Entire solution, so a single
/// step of |h| <= 2 converges fast; peak term growth costs ~3e-14 absolute.
fn taylor_continue(x0: f64, y0: f64, y1: f64, x: f64) -> (f64, f64) {
    const N: usize = 48;
    let h = x - x0;
    let mut a = [0.0f64; N];
    a[0] = y0;
    a[1] = y1;
    a[2] = 0.5 * x0 * y0;
    for n in 1..N - 2 {
        a[n + 2] = (x0 * a[n] + a[n - 1]) / (((n + 1) * (n + 2)) as f64);
    }
    let mut y = 0.0;
    let mut yp = 0.0;
    for n in (1..N).rev() {
        y = y * h + a[n];
        yp = yp * h + a[n] * n as f64;
    }
    (y * h + a[0], yp)
}

/// k-th negative zero of Ai (k >= 1), accurate to machine precision.
///
/// Seeded by the standard large-k expansion of the zero locations, then
/// polished by Newton on Ai (Ai' is bounded away from zero at every zero
/// of Ai, so the iteration is safe).
///
/// # Panics
///
/// Panics if `k == 0`.
pub fn airy_zero(k: u32) -> f64 {
    assert!(k >= 1, "airy_zero: zeros are indexed from 1");
    let t = 3.0 * core::f64::consts::PI * (4.0 * f64::from(k) - 1.0) / 8.0;
    let t2 = 1.0 / (t * t);
    let guess = -powf(t, 2.0 / 3.0)
        * (1.0 + t2 * (5.0 / 48.0 + t2 * (-5.0 / 36.0 + t2 * (77125.0 / 82944.0))));
    let mut x = guess;
    for _ in 0..8 {
        let (ai, aip) = airy_ai_with_prime(x);
        let mut step = ai / aip;
        if step.abs() > 0.5 {
            step = 0.5 * step.signum();
        }
        x -= step;
        if step.abs() < 1e-15 * x.abs() {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Adjacent regimes must agree where they hand over, evaluated at the
    /// same abscissa so no derivative term enters the comparison.
    #[test]
    fn seams_are_consistent() {
        let pairs = [
            (maclaurin(5.75), asymptotic_positive(5.75)),
            (
                maclaurin(-6.0),
                {
                    let (y, yp) = asymptotic_negative(-8.0);
                    taylor_continue(-8.0, y, yp, -6.0)
                },
            ),
            (
                asymptotic_negative(-7.95),
                {
                    let (y, yp) = asymptotic_negative(-8.0);
                    taylor_continue(-8.0, y, yp, -7.95)
                },
            ),
        ];
        // Derivative sums carry an extra factor ~3k/x per term, so their
        // cancellation loss is a few times larger than the value's.
        for (i, (lhs, rhs)) in pairs.iter().enumerate() {
            assert!((lhs.0 - rhs.0).abs() < 1e-12, "Ai seam {i}: {} vs {}", lhs.0, rhs.0);
            assert!((lhs.1 - rhs.1).abs() < 4e-12, "Ai' seam {i}: {} vs {}", lhs.1, rhs.1);
        }
    }

    #[test]
    fn non_finite_inputs() {
        assert!(airy_ai(f64::NAN).is_nan());
        assert_eq!(airy_ai(f64::INFINITY), 0.0);
        assert!(airy_ai(f64::NEG_INFINITY).is_nan());
    }

    #[test]
    #[should_panic]
    fn zero_index_panics() {
        airy_zero(0);
    }
}


//! Adaptive integration built on the 15-point Gauss-Kronrod rule.
//!
//! Finite intervals use worst-first bisection of subintervals. Semi-infinite
//! integrals march over geometrically growing panels and stop once the
//! integrand has demonstrably died off relative to its running peak; this
//! assumes super-polynomial decay, which every integrand in this crate has
//! (squared Airy tails, Gaussian-like eigenfunction tails, exp(-s^3)).

use alloc::vec::Vec;

use crate::error::Error;

/// Tolerances and budget for adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    /// Absolute tolerance on the total integral.
    pub abs_tol: f64,
    /// Relative tolerance on the total integral.
    pub rel_tol: f64,
    /// Maximum bisection depth for any subinterval.
    pub max_depth: u32,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            abs_tol: 1e-12,
            rel_tol: 1e-11,
            max_depth: 40,
        }
    }
}

/// Integral estimate with its error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error_bound: f64,
}

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights. Gauss nodes sit at the odd Kronrod indices.
const XGK: [f64; 7] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Panel {
    value: f64,
    error: f64,
    peak: f64,
}

/// One Gauss-Kronrod pass over [a, b]. The error estimate follows the
/// QUADPACK model: the raw Gauss/Kronrod difference is sharpened through the
/// scaled-deviation heuristic and floored at 50 eps times the L1 magnitude.
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let hl = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    let fc = f(c);
    let mut resg = WG[3] * fc;
    let mut resk = WGK[7] * fc;
    let mut resabs = WGK[7] * fc.abs();
    let mut peak = fc.abs();
    let mut fv = [0.0f64; 14];
    for j in 0..7 {
        let dx = hl * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
        peak = peak.max(f1.abs()).max(f2.abs());
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[2 * j] - reskh).abs() + (fv[2 * j + 1] - reskh).abs());
    }
    let value = resk * hl;
    let resabs_s = resabs * hl.abs();
    let resasc_s = resasc * hl.abs();
    let mut error = ((resk - resg) * hl).abs();
    if resasc_s != 0.0 && error != 0.0 {
        let scaled = 200.0 * error / resasc_s;
        error = resasc_s * (scaled * libm::sqrt(scaled)).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs_s;
    if resabs_s > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    Panel {
        value,
        error,
        peak,
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    level: u32,
}

/// Adaptive integral of `f` over the finite interval [a, b].
///
/// Returns the estimate once the summed error bound meets
/// `max(abs_tol, rel_tol * |value|)`. If some subinterval would need to be
/// bisected past `max_depth`, fails with `Error::Accuracy` carrying the best
/// estimate so far.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, quad: &Quadrature) -> Result<Estimate, Error> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::input("integration bounds must be finite"));
    }
    if !(quad.abs_tol >= 0.0) || !(quad.rel_tol >= 0.0) || quad.abs_tol + quad.rel_tol == 0.0 {
        return Err(Error::input("tolerances must be non-negative and not both zero"));
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error_bound: 0.0,
        });
    }
    if a > b {
        let mut est = integrate(f, b, a, quad)?;
        est.value = -est.value;
        return Ok(est);
    }

    const MAX_SEGMENTS: usize = 16_384;
    let first = kronrod15(&f, a, b);
    if !first.value.is_finite() {
        return Err(Error::input("integrand returned a non-finite value"));
    }
    let mut segs = Vec::with_capacity(64);
    segs.push(Segment {
        a,
        b,
        value: first.value,
        error: first.error,
        level: 0,
    });

    loop {
        let mut total = 0.0;
        let mut total_err = 0.0;
        let mut worst = 0usize;
        for (i, s) in segs.iter().enumerate() {
            total += s.value;
            total_err += s.error;
            if s.error > segs[worst].error {
                worst = i;
            }
        }
        let tol = quad.abs_tol.max(quad.rel_tol * total.abs());
        if total_err <= tol {
            return Ok(Estimate {
                value: total,
                error_bound: total_err,
            });
        }
        if segs[worst].level >= quad.max_depth || segs.len() >= MAX_SEGMENTS {
            return Err(Error::Accuracy {
                estimate: total,
                error_bound: total_err,
            });
        }
        let Segment {
            a: sa, b: sb, level, ..
        } = segs[worst];
        let mid = 0.5 * (sa + sb);
        if mid <= sa || mid >= sb {
            // Interval shrunk to machine spacing; nothing further to split.
            return Err(Error::Accuracy {
                estimate: total,
                error_bound: total_err,
            });
        }
        let left = kronrod15(&f, sa, mid);
        let right = kronrod15(&f, mid, sb);
        if !left.value.is_finite() || !right.value.is_finite() {
            return Err(Error::input("integrand returned a non-finite value"));
        }
        segs[worst] = Segment {
            a: sa,
            b: mid,
            value: left.value,
            error: left.error,
            level: level + 1,
        };
        segs.push(Segment {
            a: mid,
            b: sb,
            value: right.value,
            error: right.error,
            level: level + 1,
        });
    }
}

/// Adaptive integral of `f` over [a, +inf).
///
/// Marches over panels of geometrically doubling width (first panel has unit
/// width), refining each panel with [`integrate`]. Stops after three
/// consecutive panels whose sampled peak |f| falls below 1e-16 of the running
/// peak; fails with `Error::Accuracy` if 64 panels do not reach that state.
/// A function that stays identically zero for the first several panels is
/// treated as zero.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    quad: &Quadrature,
) -> Result<Estimate, Error> {
    if !a.is_finite() {
        return Err(Error::input("lower bound must be finite"));
    }
    let panel_quad = Quadrature {
        abs_tol: 0.125 * quad.abs_tol,
        rel_tol: 0.25 * quad.rel_tol,
        max_depth: quad.max_depth,
    };
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut peak = 0.0f64;
    let mut quiet_run = 0u32;
    let mut lo = a;
    let mut width = 1.0;
    for panel_idx in 0..64u32 {
        let hi = lo + width;
        let coarse = kronrod15(&f, lo, hi);
        let est = integrate(&f, lo, hi, &panel_quad)?;
        total += est.value;
        total_err += est.error_bound;
        peak = peak.max(coarse.peak);
        if peak > 0.0 && coarse.peak < 1e-16 * peak {
            quiet_run += 1;
            if quiet_run >= 3 {
                return Ok(Estimate {
                    value: total,
                    error_bound: total_err,
                });
            }
        } else {
            quiet_run = 0;
        }
        if peak == 0.0 && panel_idx >= 6 {
            return Ok(Estimate {
                value: 0.0,
                error_bound: 0.0,
            });
        }
        lo = hi;
        width *= 2.0;
    }
    Err(Error::Accuracy {
        estimate: total,
        error_bound: total_err,
    })
}

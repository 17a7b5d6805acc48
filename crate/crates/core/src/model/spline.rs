//! Cubic Hermite interpolation of sampled functions on nonuniform grids.
//!
//! Node slopes come from the 3-point Lagrange derivative, so quadratics are
//! reproduced exactly and smooth data interpolates at O(h^3). Piecewise
//! integrals use the exact Hermite antiderivative
//! h/2 (y0 + y1) + h^2/12 (m0 - m1).

use alloc::vec::Vec;

use crate::error::Error;

/// A sampled function with cubic Hermite evaluation, differentiation, and
/// integration. Evaluation outside the sampled span clamps to the end nodes.
#[derive(Clone, Debug)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
    /// prefix[i] = integral from xs[0] to xs[i].
    prefix: Vec<f64>,
}

impl CubicSpline {
    /// Builds the interpolant. Needs at least 3 strictly increasing, finite
    /// abscissae and finite ordinates of the same length.
    pub fn new(xs: &[f64], ys: &[f64]) -> Result<Self, Error> {
        if xs.len() != ys.len() {
            return Err(Error::input("abscissae and ordinates differ in length"));
        }
        if xs.len() < 3 {
            return Err(Error::input("need at least 3 samples"));
        }
        for w in xs.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::input("abscissae must be strictly increasing"));
            }
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err(Error::input("samples must be finite"));
        }
        let n = xs.len();
        let mut slopes = Vec::with_capacity(n);
        slopes.push(lagrange3_deriv(xs[0], xs[0], xs[1], xs[2], ys[0], ys[1], ys[2]));
        for i in 1..n - 1 {
            slopes.push(lagrange3_deriv(
                xs[i],
                xs[i - 1],
                xs[i],
                xs[i + 1],
                ys[i - 1],
                ys[i],
                ys[i + 1],
            ));
        }
        slopes.push(lagrange3_deriv(
            xs[n - 1],
            xs[n - 3],
            xs[n - 2],
            xs[n - 1],
            ys[n - 3],
            ys[n - 2],
            ys[n - 1],
        ));

        let mut prefix = Vec::with_capacity(n);
        prefix.push(0.0);
        let mut acc = 0.0;
        for i in 0..n - 1 {
            let h = xs[i + 1] - xs[i];
            acc += 0.5 * h * (ys[i] + ys[i + 1]) + h * h / 12.0 * (slopes[i] - slopes[i + 1]);
            prefix.push(acc);
        }
        Ok(CubicSpline {
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            slopes,
            prefix,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    pub fn samples(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.ys)
    }

    pub fn node_slopes(&self) -> &[f64] {
        &self.slopes
    }

    /// Index of the interval containing x (clamped to the span).
    fn interval(&self, x: f64) -> usize {
        let n = self.xs.len();
        let i = self.xs.partition_point(|&t| t <= x);
        i.clamp(1, n - 1) - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.domain();
        if x <= lo {
            return self.ys[0];
        }
        if x >= hi {
            return *self.ys.last().unwrap();
        }
        let i = self.interval(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        self.ys[i] * h00
            + h * self.slopes[i] * h10
            + self.ys[i + 1] * h01
            + h * self.slopes[i + 1] * h11
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return 0.0;
        }
        let i = self.interval(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        (self.ys[i] - self.ys[i + 1]) * (6.0 * t2 - 6.0 * t) / h
            + self.slopes[i] * (3.0 * t2 - 4.0 * t + 1.0)
            + self.slopes[i + 1] * (3.0 * t2 - 2.0 * t)
    }

    pub fn second_deriv(&self, x: f64) -> f64 {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return 0.0;
        }
        let i = self.interval(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        (self.ys[i] - self.ys[i + 1]) * (12.0 * t - 6.0) / (h * h)
            + self.slopes[i] * (6.0 * t - 4.0) / h
            + self.slopes[i + 1] * (6.0 * t - 2.0) / h
    }

    /// Integral over the full sampled span.
    pub fn integral(&self) -> f64 {
        *self.prefix.last().unwrap()
    }

    /// Integral from the first node to x (clamped to the span).
    pub fn integral_to(&self, x: f64) -> f64 {
        let (lo, hi) = self.domain();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return self.integral();
        }
        let i = self.interval(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        // Antiderivatives of the Hermite basis on [0, 1], scaled by h.
        let i00 = 0.5 * t4 - t3 + t;
        let i10 = 0.25 * t4 - 2.0 / 3.0 * t3 + 0.5 * t2;
        let i01 = -0.5 * t4 + t3;
        let i11 = 0.25 * t4 - t3 / 3.0;
        self.prefix[i]
            + h * (self.ys[i] * i00
                + h * self.slopes[i] * i10
                + self.ys[i + 1] * i01
                + h * self.slopes[i + 1] * i11)
    }
}

/// Derivative at `x` of the parabola through (x0,y0), (x1,y1), (x2,y2).
pub(crate) fn lagrange3_deriv(x: f64, x0: f64, x1: f64, x2: f64, y0: f64, y1: f64, y2: f64) -> f64 {
    y0 * (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2))
        + y1 * (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2))
        + y2 * (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn grid(n: usize) -> Vec<f64> {
        // Deliberately nonuniform: quadratic stretching on [0, 2].
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                2.0 * t * (0.5 + 0.5 * t)
            })
            .collect()
    }

    #[test]
    fn reproduces_quadratics_exactly() {
        let xs = grid(17);
        let f = |x: f64| 3.0 - 2.0 * x + 0.5 * x * x;
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let s = CubicSpline::new(&xs, &ys).unwrap();
        for k in 0..100 {
            let x = 2.0 * k as f64 / 99.0;
            assert!((s.eval(x) - f(x)).abs() < 1e-13);
            assert!((s.deriv(x) - (-2.0 + x)).abs() < 1e-12);
            assert!((s.second_deriv(x) - 1.0).abs() < 1e-10);
        }
        // Exact integral of the quadratic over [0, 2] is 4/3... compute:
        // int_0^2 (3 - 2x + x^2/2) = 6 - 4 + 4/3 = 10/3.
        assert!((s.integral() - 10.0 / 3.0).abs() < 1e-12);
        assert!((s.integral_to(1.3) - (3.0 * 1.3 - 1.69 + 1.3f64.powi(3) / 6.0)).abs() < 1e-12);
    }

    #[test]
    fn converges_cubically_on_smooth_data() {
        let mut errs = [0.0f64; 2];
        for (pass, n) in [33usize, 65].iter().enumerate() {
            let xs: Vec<f64> = (0..*n).map(|i| 3.0 * i as f64 / (*n - 1) as f64).collect();
            let ys: Vec<f64> = xs.iter().map(|&x| x.sin()).collect();
            let s = CubicSpline::new(&xs, &ys).unwrap();
            let mut worst = 0.0f64;
            for k in 0..500 {
                let x = 3.0 * k as f64 / 499.0;
                worst = worst.max((s.eval(x) - x.sin()).abs());
            }
            errs[pass] = worst;
        }
        // Halving h should shrink the sup error by at least ~2^3.
        assert!(
            errs[0] / errs[1] > 6.0,
            "convergence ratio {}",
            errs[0] / errs[1]
        );
    }

    #[test]
    fn clamps_outside_domain() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [5.0, 7.0, 4.0];
        let s = CubicSpline::new(&xs, &ys).unwrap();
        assert_eq!(s.eval(-3.0), 5.0);
        assert_eq!(s.eval(9.0), 4.0);
        assert_eq!(s.integral_to(-1.0), 0.0);
        assert_eq!(s.integral_to(99.0), s.integral());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CubicSpline::new(&[0.0, 1.0], &[1.0, 2.0]).is_err());
        assert!(CubicSpline::new(&[0.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(CubicSpline::new(&[0.0, 1.0, 2.0], &[1.0, f64::NAN, 3.0]).is_err());
        assert!(CubicSpline::new(&[0.0, 1.0, 2.0], &[1.0, 2.0]).is_err());
    }
}

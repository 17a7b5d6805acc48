//! Drift fields reconstructed from a stationary radial density.
//!
//! Inverting the stationary radial balance with zero net radial current
//! gives v_rho = D P' / P. The angular drift is a free circulation
//! v_phi = lambda / rho whose strength is fixed by the winding constraint:
//! the mean angular velocity over the density must equal speed / radius.

use crate::error::Error;
use crate::fmath::hypot;
use crate::model::spline::CubicSpline;
use crate::model::{PhysicalParams, RadialDensity};

/// Radial drift v_rho(rho) = D P'(rho) / P(rho).
///
/// Singular at the wall, where P vanishes quadratically and the ratio
/// diverges to +inf; [`RadialDrift::at`] reports that as `None` and the
/// capped accessor saturates instead. Outside the sampled span the true
/// drift tends to the constant inward pull of the exponential tail, so the
/// capped accessor saturates inward there.
#[derive(Clone, Debug)]
pub struct RadialDrift {
    curve: CubicSpline,
    diffusion: f64,
    wall: f64,
    outer: f64,
}

impl RadialDrift {
    /// Builds the drift from a density that is strictly positive at every
    /// interior node. A zero interior sample would make the ratio undefined
    /// on a set the dynamics actually visits, so it is rejected.
    pub fn of(density: &RadialDensity, params: &PhysicalParams) -> Result<Self, Error> {
        let values = density.values();
        if values.iter().skip(1).any(|&p| !(p > 0.0)) {
            return Err(Error::input(
                "density must be strictly positive at interior nodes",
            ));
        }
        Ok(RadialDrift {
            curve: CubicSpline::new(density.grid().nodes(), values)?,
            diffusion: params.diffusion,
            wall: density.grid().wall(),
            outer: density.grid().outer(),
        })
    }

    /// v_rho at `rho`, or `None` where the ratio is singular or undefined:
    /// at or below the wall and beyond the sampled span.
    pub fn at(&self, rho: f64) -> Option<f64> {
        if rho <= self.wall || rho >= self.outer {
            return None;
        }
        let p = self.curve.eval(rho);
        if !(p > 0.0) {
            return None;
        }
        Some(self.diffusion * self.curve.deriv(rho) / p)
    }

    /// v_rho clamped to [-cap, +cap], with the singular and out-of-span
    /// regions mapped to the saturation value of the side they sit on:
    /// +cap at and below the wall (the density pushes hard away from the
    /// wall), -cap beyond the span (the tail pulls steadily inward).
    pub fn capped_at(&self, rho: f64, cap: f64) -> f64 {
        if rho <= self.wall {
            return cap;
        }
        if rho >= self.outer {
            return -cap;
        }
        match self.at(rho) {
            Some(v) => v.clamp(-cap, cap),
            // Interpolation dipped to zero between nodes; only possible deep
            // in the tail, where the drift is inward.
            None => -cap,
        }
    }
}

/// Angular drift v_phi(rho) = strength / rho.
#[derive(Clone, Copy, Debug)]
pub struct AngularDrift {
    strength: f64,
}

impl AngularDrift {
    /// Fixes the circulation strength lambda = speed / (2 pi radius C) from
    /// the density's winding constant C.
    pub fn of(density: &RadialDensity, params: &PhysicalParams) -> Result<Self, Error> {
        let c = density.winding_constant();
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::input("winding constant must be positive and finite"));
        }
        Ok(AngularDrift {
            strength: params.speed / (2.0 * core::f64::consts::PI * params.radius * c),
        })
    }

    pub fn with_strength(strength: f64) -> Self {
        AngularDrift { strength }
    }

    /// lambda = v_phi * rho, constant over the plane.
    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn at(&self, rho: f64) -> f64 {
        self.strength / rho
    }
}

/// The full planar drift: radial gradient flow plus angular circulation.
#[derive(Clone, Debug)]
pub struct DriftField {
    radial: RadialDrift,
    angular: AngularDrift,
}

impl DriftField {
    pub fn of(density: &RadialDensity, params: &PhysicalParams) -> Result<Self, Error> {
        Ok(DriftField {
            radial: RadialDrift::of(density, params)?,
            angular: AngularDrift::of(density, params)?,
        })
    }

    pub fn radial(&self) -> &RadialDrift {
        &self.radial
    }

    pub fn angular(&self) -> &AngularDrift {
        &self.angular
    }

    /// Cartesian drift vector at `(x, y)`, with the radial component capped.
    pub fn cartesian_at(&self, x: f64, y: f64, cap: f64) -> [f64; 2] {
        let rho = hypot(x, y);
        if !(rho > 0.0) {
            // The origin is inside the disc; any direction is as wrong as
            // any other, and the integrator reflects the step anyway.
            return [cap, 0.0];
        }
        let vr = self.radial.capped_at(rho, cap);
        let vp = self.angular.at(rho);
        let (cx, cy) = (x / rho, y / rho);
        [vr * cx - vp * cy, vr * cy + vp * cx]
    }
}

/// Mean angular velocity of the density under an angular drift:
/// 2 pi int (v_phi(rho) / rho) P(rho) rho drho. For a drift built by
/// [`AngularDrift::of`] from the same density this closes to
/// speed / radius by construction.
pub fn mean_angular_velocity(density: &RadialDensity, angular: &AngularDrift) -> f64 {
    let xs = density.grid().nodes();
    let ys: alloc::vec::Vec<f64> = xs
        .iter()
        .zip(density.values().iter())
        .map(|(&rho, &p)| 2.0 * core::f64::consts::PI * angular.at(rho) * p)
        .collect();
    match CubicSpline::new(xs, &ys) {
        Ok(c) => c.integral(),
        Err(_) => f64::NAN,
    }
}

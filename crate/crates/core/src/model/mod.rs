//! Problem parameters, radial grids, and sampled radial densities.
//!
//! The physical setting: a particle diffuses in the plane outside an
//! impenetrable disc, driven around it so that its mean angular speed about
//! the centre is fixed. Everything downstream works with the marginal radial
//! density P(rho) of the stationary state, sampled on a grid that starts at
//! the disc edge.

pub mod drift;
pub mod spline;

use alloc::vec::Vec;

use crate::error::Error;
use crate::fmath::{asinh, sinh, sqrt};
use spline::CubicSpline;

pub use drift::{AngularDrift, DriftField, RadialDrift};

/// Disc radius, prescribed tangential speed at the disc edge, and diffusion
/// coefficient. Radius and diffusion must be positive; the speed may be zero
/// (pure diffusion), though the solvers that need a bound state require it
/// to be positive and say so.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams {
    pub radius: f64,
    pub speed: f64,
    pub diffusion: f64,
}

impl PhysicalParams {
    pub fn new(radius: f64, speed: f64, diffusion: f64) -> Result<Self, Error> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::input("radius must be positive and finite"));
        }
        if !(speed >= 0.0) || !speed.is_finite() {
            return Err(Error::input("speed must be non-negative and finite"));
        }
        if !(diffusion > 0.0) || !diffusion.is_finite() {
            return Err(Error::input("diffusion must be positive and finite"));
        }
        Ok(PhysicalParams {
            radius,
            speed,
            diffusion,
        })
    }

    /// Dimensionless drive mu = (1 + (speed * radius / (2 pi C D R^2) ...)
    /// expressed through the winding constant: with angular drift strength
    /// lambda = V / (2 pi R C), mu = (1 + (lambda / D)^2) / 2.
    pub fn drive(&self, winding_constant: f64) -> f64 {
        let lambda = self.speed / (2.0 * core::f64::consts::PI * self.radius * winding_constant);
        0.5 * (1.0 + (lambda / self.diffusion) * (lambda / self.diffusion))
    }
}

/// Strictly increasing radial abscissae whose first node is the disc edge.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
}

impl RadialGrid {
    /// Validates and adopts explicit nodes.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self, Error> {
        if nodes.len() < 4 {
            return Err(Error::input("grid needs at least 4 nodes"));
        }
        if !(nodes[0] > 0.0) {
            return Err(Error::input("grid must start at a positive radius"));
        }
        if nodes.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("grid nodes must be finite"));
        }
        for w in nodes.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::input("grid nodes must be strictly increasing"));
            }
        }
        Ok(RadialGrid { nodes })
    }

    /// Equally spaced nodes on [wall, outer].
    pub fn uniform(wall: f64, outer: f64, n: usize) -> Result<Self, Error> {
        if !(outer > wall) {
            return Err(Error::input("outer radius must exceed the wall"));
        }
        let step = (outer - wall) / (n.max(2) - 1) as f64;
        Self::from_nodes((0..n).map(|i| wall + step * i as f64).collect())
    }

    /// Nodes on [wall, outer] crowded toward the wall by a sinh map;
    /// `strength` ~ 2 concentrates roughly half the nodes in the first
    /// quarter of the span. `strength` = 0 is rejected; use `uniform`.
    pub fn clustered_near_wall(
        wall: f64,
        outer: f64,
        n: usize,
        strength: f64,
    ) -> Result<Self, Error> {
        if !(outer > wall) {
            return Err(Error::input("outer radius must exceed the wall"));
        }
        if !(strength > 0.0) || !strength.is_finite() {
            return Err(Error::input("clustering strength must be positive"));
        }
        let span = outer - wall;
        let denom = sinh(strength);
        let nodes = (0..n)
            .map(|i| {
                let t = i as f64 / (n.max(2) - 1) as f64;
                wall + span * sinh(strength * t) / denom
            })
            .collect();
        Self::from_nodes(nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// First node: the disc edge.
    pub fn wall(&self) -> f64 {
        self.nodes[0]
    }

    /// Last node.
    pub fn outer(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    pub fn span(&self) -> f64 {
        self.outer() - self.wall()
    }
}

/// How thoroughly [`RadialDensity`] constructors vet the samples.
enum Vetting {
    /// Mass must already equal 1 within `NORMALIZATION_TOL`.
    Normalized,
    /// Samples are rescaled to unit mass.
    Rescale,
    /// Mass is left alone (partial or truncated data in tests and
    /// intermediate solver states).
    Raw,
}

/// Tolerance on `2 pi int rho P drho = 1` accepted by [`RadialDensity::new`].
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// Radial density P sampled on a [`RadialGrid`], interpolated as a cubic.
///
/// Invariants held by construction: P is non-negative, vanishes exactly at
/// the wall node, and is finite everywhere. Queries outside the sampled span
/// return zero (the density lives on [wall, outer] to working precision).
#[derive(Clone, Debug)]
pub struct RadialDensity {
    grid: RadialGrid,
    values: Vec<f64>,
    curve: CubicSpline,
}

impl RadialDensity {
    /// Adopts samples that are already normalized to unit mass.
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self, Error> {
        Self::build(grid, values, Vetting::Normalized)
    }

    /// Adopts samples and rescales them to unit mass.
    pub fn normalized(grid: RadialGrid, values: Vec<f64>) -> Result<Self, Error> {
        Self::build(grid, values, Vetting::Rescale)
    }

    /// Adopts samples without touching or checking their mass. Meant for
    /// truncated or otherwise partial data whose derived quantities are
    /// still meaningful.
    pub fn unnormalized(grid: RadialGrid, values: Vec<f64>) -> Result<Self, Error> {
        Self::build(grid, values, Vetting::Raw)
    }

    fn build(grid: RadialGrid, mut values: Vec<f64>, vetting: Vetting) -> Result<Self, Error> {
        if values.len() != grid.len() {
            return Err(Error::input("need one sample per grid node"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("density samples must be finite"));
        }
        let peak = values.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        if !(peak > 0.0) {
            return Err(Error::input("density must not vanish identically"));
        }
        for v in values.iter_mut() {
            if *v < 0.0 {
                if *v < -1e-12 * peak {
                    return Err(Error::input("density samples must be non-negative"));
                }
                *v = 0.0;
            }
        }
        // The stationary density vanishes at the impenetrable wall; nudge an
        // almost-zero first sample onto the invariant, reject anything else.
        if values[0].abs() > 1e-8 * peak {
            return Err(Error::input("density must vanish at the wall node"));
        }
        values[0] = 0.0;

        let mut density = RadialDensity {
            curve: CubicSpline::new(grid.nodes(), &values)?,
            grid,
            values,
        };
        match vetting {
            Vetting::Raw => {}
            Vetting::Rescale => {
                let mass = density.normalization();
                if !(mass > 0.0) || !mass.is_finite() {
                    return Err(Error::input("density mass must be positive"));
                }
                for v in density.values.iter_mut() {
                    *v /= mass;
                }
                density.curve = CubicSpline::new(density.grid.nodes(), &density.values)?;
            }
            Vetting::Normalized => {
                let mass = density.normalization();
                if (mass - 1.0).abs() > NORMALIZATION_TOL {
                    return Err(Error::input(
                        "samples are not normalized; use RadialDensity::normalized",
                    ));
                }
            }
        }
        Ok(density)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// P(rho); zero outside the sampled span.
    pub fn value_at(&self, rho: f64) -> f64 {
        if rho < self.grid.wall() || rho > self.grid.outer() {
            return 0.0;
        }
        self.curve.eval(rho).max(0.0)
    }

    /// dP/drho; zero outside the sampled span.
    pub fn derivative_at(&self, rho: f64) -> f64 {
        self.curve.deriv(rho)
    }

    /// d2P/drho2; zero outside the sampled span, one-sided at the wall.
    pub fn second_derivative_at(&self, rho: f64) -> f64 {
        self.curve.second_deriv(rho)
    }

    /// Total mass 2 pi int rho P(rho) drho over the sampled span.
    pub fn normalization(&self) -> f64 {
        self.weighted_integral(|rho, p| 2.0 * core::f64::consts::PI * rho * p)
    }

    /// The winding constant C = int P(rho) / rho drho that normalizes the
    /// angular drift against the prescribed mean angular velocity.
    pub fn winding_constant(&self) -> f64 {
        self.weighted_integral(|rho, p| p / rho)
    }

    /// Mass inside radius `rho`: 2 pi int_wall^rho rho' P drho'.
    pub fn mass_within(&self, rho: f64) -> f64 {
        match self.mass_curve() {
            Ok(c) => c.integral_to(rho),
            Err(_) => 0.0,
        }
    }

    /// Radius enclosing the fraction `p` of the total mass.
    pub fn quantile(&self, p: f64) -> Result<f64, Error> {
        if !(0.0 < p && p < 1.0) {
            return Err(Error::input("quantile fraction must lie in (0, 1)"));
        }
        let cdf = self.mass_curve()?;
        let total = cdf.integral();
        if !(total > 0.0) {
            return Err(Error::input("density has no mass"));
        }
        let target = p * total;
        crate::numerics::find_root(
            |rho| cdf.integral_to(rho) - target,
            self.grid.wall(),
            self.grid.outer(),
            1e-12 * self.grid.span(),
        )
    }

    fn mass_curve(&self) -> Result<CubicSpline, Error> {
        let xs = self.grid.nodes();
        let ys: Vec<f64> = xs
            .iter()
            .zip(self.values.iter())
            .map(|(&rho, &p)| 2.0 * core::f64::consts::PI * rho * p)
            .collect();
        CubicSpline::new(xs, &ys)
    }

    fn weighted_integral(&self, w: impl Fn(f64, f64) -> f64) -> f64 {
        let xs = self.grid.nodes();
        let ys: Vec<f64> = xs
            .iter()
            .zip(self.values.iter())
            .map(|(&rho, &p)| w(rho, p))
            .collect();
        match CubicSpline::new(xs, &ys) {
            Ok(c) => c.integral(),
            Err(_) => f64::NAN,
        }
    }
}

/// A wall-clustered grid sized for the boundary-layer scale of the density:
/// the strip has width ~ radius / drive^{1/3}, and the default span covers
/// `widths` of those (15 is ample for every solver in this crate).
pub fn default_grid(params: &PhysicalParams, drive: f64, n: usize) -> Result<RadialGrid, Error> {
    if !(drive > 0.0) || !drive.is_finite() {
        return Err(Error::input("drive must be positive"));
    }
    let width = params.radius / crate::fmath::cbrt(drive);
    let span = 15.0 * width;
    RadialGrid::clustered_near_wall(params.radius, params.radius + span, n, 2.0)
}

/// Inverse of the sinh clustering map, exposed for tests that need to know
/// where a physical radius lands in grid coordinate.
pub fn clustering_coordinate(wall: f64, outer: f64, strength: f64, rho: f64) -> f64 {
    asinh((rho - wall) / (outer - wall) * sinh(strength)) / strength
}

/// sqrt wrapper shared by modules that take square roots of densities.
pub(crate) fn sqrt_clamped(v: f64) -> f64 {
    sqrt(v.max(0.0))
}

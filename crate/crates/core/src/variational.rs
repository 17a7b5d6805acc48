//! Action functionals behind the stationary law, and a direct numerical
//! check that the solved density is a minimizer.
//!
//! The stationary density is the normalized P that minimizes the kinetic
//! cost 2 pi int (v_rho^2 + v_phi^2) P rho drho at the prescribed mean
//! angular speed. Written through P alone the cost splits into a radial
//! gradient term and an angular circulation term
//!
//! ```text
//! S = 2 pi D^2 int P'^2 / P rho drho + V^2 / (2 pi R^2) (int P / rho drho)^-1.
//! ```
//!
//! The radial term is always evaluated in amplitude form, Q = sqrt(P) and
//! 8 pi D^2 int Q'^2 rho drho, because the P-form is 0/0 at the wall while
//! Q' stays finite there. [`verify_minimality`] probes the minimum with
//! seeded smooth bumps: each perturbed amplitude is squared, renormalized
//! exactly, and re-scored, so the comparison is between genuine densities at
//! fixed total mass and no Lagrange term is involved.

use alloc::vec::Vec;

use crate::error::Error;
use crate::fmath::{cbrt, sqrt};
use crate::model::spline::CubicSpline;
use crate::model::{sqrt_clamped, DriftField, PhysicalParams, RadialDensity, RadialGrid};
use crate::rng::Stream;

const TWO_PI: f64 = core::f64::consts::TAU;

/// Perturbation sizes used by the minimality probes, symmetric so the fit
/// separates the linear and quadratic responses cleanly.
pub const PROBE_EPSILONS: [f64; 4] = [-1e-2, -1e-3, 1e-3, 1e-2];

/// The action split by origin. `lagrange` is present only when a
/// normalization multiplier was requested; `total` sums whatever is present.
#[derive(Clone, Copy, Debug)]
pub struct ActionBreakdown {
    /// 8 pi D^2 int Q'^2 rho drho, the gradient cost of the radial profile.
    pub radial: f64,
    /// V^2 / (2 pi R^2 C), the circulation cost at winding constant C.
    pub angular: f64,
    /// gamma times the total mass, when a multiplier gamma was supplied.
    pub lagrange: Option<f64>,
    pub total: f64,
}

/// Scores a density against the split action.
///
/// The density must be strictly positive at interior nodes: the action is
/// the kinetic cost of the gradient flow D P'/P, which is undefined
/// wherever P vanishes inside the domain.
pub fn action_of_density(
    density: &RadialDensity,
    params: &PhysicalParams,
) -> Result<ActionBreakdown, Error> {
    if density.values().iter().skip(1).any(|&p| !(p > 0.0)) {
        return Err(Error::input(
            "action needs a density that is strictly positive at interior nodes",
        ));
    }
    let radial = radial_action(density, params.diffusion)?;
    let winding = density.winding_constant();
    if !(winding > 0.0) || !winding.is_finite() {
        return Err(Error::input("winding constant must be positive and finite"));
    }
    let angular =
        params.speed * params.speed / (TWO_PI * params.radius * params.radius * winding);
    Ok(ActionBreakdown {
        radial,
        angular,
        lagrange: None,
        total: radial + angular,
    })
}

/// Same split, plus the normalization term `gamma` times the total mass.
pub fn action_with_multiplier(
    density: &RadialDensity,
    params: &PhysicalParams,
    gamma: f64,
) -> Result<ActionBreakdown, Error> {
    let mut breakdown = action_of_density(density, params)?;
    let term = gamma * density.normalization();
    breakdown.lagrange = Some(term);
    breakdown.total += term;
    Ok(breakdown)
}

/// Kinetic cost 2 pi int (v_rho^2 + v_phi^2) P rho drho of an arbitrary
/// axisymmetric velocity field over the density.
///
/// `wall_radial_cost` is the finite limit of v_rho^2 P at the wall node,
/// where a gradient-flow v_rho itself diverges; pass 0 for fields regular
/// there. The angular part contributes nothing at the wall since P(R) = 0.
pub fn action_of_components(
    density: &RadialDensity,
    v_rho: impl Fn(f64) -> f64,
    v_phi: impl Fn(f64) -> f64,
    wall_radial_cost: f64,
) -> Result<f64, Error> {
    let nodes = density.grid().nodes();
    let mut samples = Vec::with_capacity(nodes.len());
    samples.push(wall_radial_cost * nodes[0]);
    for (&rho, &p) in nodes.iter().zip(density.values().iter()).skip(1) {
        let vr = v_rho(rho);
        let vp = v_phi(rho);
        samples.push((vr * vr + vp * vp) * p * rho);
    }
    Ok(TWO_PI * CubicSpline::new(nodes, &samples)?.integral())
}

/// Kinetic cost of a reconstructed drift field over the density it should
/// balance. Equals [`action_of_density`]'s total up to quadrature error when
/// the field was built from the same density.
///
/// The radial drift must be defined at every interior node of the density's
/// grid. At the wall the cost uses the gradient-flow limit v_rho^2 P ->
/// 2 D^2 P''(R); at the outer node, where the field spline ends, the ratio
/// is taken one-sided from the density itself.
pub fn action_of_velocity(
    density: &RadialDensity,
    field: &DriftField,
    params: &PhysicalParams,
) -> Result<f64, Error> {
    let nodes = density.grid().nodes();
    let outer = density.grid().outer();
    let d = params.diffusion;
    for &rho in &nodes[1..nodes.len() - 1] {
        if field.radial().at(rho).is_none() {
            return Err(Error::input(
                "radial drift undefined inside the density support",
            ));
        }
    }
    let wall_cost = 2.0 * d * d * density.second_derivative_at(nodes[0]);
    let v_rho = |rho: f64| {
        if let Some(v) = field.radial().at(rho) {
            return v;
        }
        let p = density.value_at(rho);
        if rho >= outer && p > 0.0 {
            d * density.derivative_at(rho) / p
        } else {
            0.0
        }
    };
    action_of_components(density, v_rho, |rho| field.angular().at(rho), wall_cost)
}

fn radial_action(density: &RadialDensity, diffusion: f64) -> Result<f64, Error> {
    let nodes = density.grid().nodes();
    let q: Vec<f64> = density.values().iter().map(|&p| sqrt_clamped(p)).collect();
    let q_curve = CubicSpline::new(nodes, &q)?;
    let samples: Vec<f64> = q_curve
        .node_slopes()
        .iter()
        .zip(nodes.iter())
        .map(|(&slope, &rho)| slope * slope * rho)
        .collect();
    Ok(8.0 * core::f64::consts::PI * diffusion * diffusion
        * CubicSpline::new(nodes, &samples)?.integral())
}

/// Action changes along one perturbation direction of the amplitude.
///
/// `direction` holds eta sampled on the density's grid with eta(wall) = 0.
/// For each epsilon the amplitude sqrt(P) + epsilon eta is squared,
/// renormalized exactly, and re-scored; returned is the scored total minus
/// the unperturbed one, in the order of `epsilons`.
pub fn probe_direction(
    density: &RadialDensity,
    params: &PhysicalParams,
    direction: &[f64],
    epsilons: &[f64],
) -> Result<Vec<f64>, Error> {
    let grid = density.grid();
    if direction.len() != grid.len() {
        return Err(Error::input("need one direction sample per grid node"));
    }
    if direction[0] != 0.0 {
        return Err(Error::input("perturbation must vanish at the wall"));
    }
    let q: Vec<f64> = density.values().iter().map(|&p| sqrt_clamped(p)).collect();
    let base = action_of_density(density, params)?.total;
    let mut deltas = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let perturbed: Vec<f64> = q
            .iter()
            .zip(direction.iter())
            .map(|(&qi, &di)| {
                let a = qi + eps * di;
                a * a
            })
            .collect();
        let candidate = RadialDensity::normalized(grid.clone(), perturbed)?;
        deltas.push(action_of_density(&candidate, params)?.total - base);
    }
    Ok(deltas)
}

/// One seeded bump direction and the action changes it produced.
#[derive(Clone, Copy, Debug)]
pub struct PerturbationProbe {
    pub id: usize,
    /// Bump center, in radius units.
    pub center: f64,
    /// Bump scale; the support spans two scales to either side.
    pub width: f64,
    pub epsilons: [f64; 4],
    pub delta_actions: [f64; 4],
    /// Fitted first-order response b of delta = b eps + a eps^2.
    pub linear: f64,
    /// Fitted second-order response a.
    pub quadratic: f64,
}

/// Outcome of the seeded minimality probes.
#[derive(Clone, Debug)]
pub struct MinimalityReport {
    pub base_action: f64,
    /// Allowance for quadrature noise in the margins, 1e-8 of the base.
    pub noise_floor: f64,
    pub probes: Vec<PerturbationProbe>,
}

impl MinimalityReport {
    /// Smallest action change over all probes and sizes. Nonnegative up to
    /// the noise floor at a minimum.
    pub fn worst_margin(&self) -> f64 {
        self.probes
            .iter()
            .flat_map(|p| p.delta_actions.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest fitted curvature over all probes.
    pub fn min_curvature(&self) -> f64 {
        self.probes
            .iter()
            .map(|p| p.quadratic)
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest |linear| / |2 quadratic| over all probes: the measured size
    /// of the first variation against the second-variation scale.
    pub fn worst_stationarity(&self) -> f64 {
        self.probes
            .iter()
            .map(|p| p.linear.abs() / (2.0 * p.quadratic).abs())
            .fold(0.0, f64::max)
    }

    /// Ids of probes with a margin below the noise floor or with curvature
    /// whose action contribution at the largest size is below it.
    pub fn violations(&self) -> Vec<usize> {
        self.probes
            .iter()
            .filter(|p| {
                let eps_max = p
                    .epsilons
                    .iter()
                    .fold(0.0f64, |m, &e| m.max(e.abs()));
                p.delta_actions.iter().any(|&d| d < -self.noise_floor)
                    || p.quadratic * eps_max * eps_max < -self.noise_floor
            })
            .map(|p| p.id)
            .collect()
    }
}

/// Probes the solved density with `n_perturbations` seeded smooth bumps.
///
/// Bump centers and scales are drawn inside the boundary strip, the bump is
/// orthogonalized against the amplitude in the rho-weighted inner product so
/// the mass is preserved to first order, and its norm is matched to the
/// amplitude's so sizes are comparable across draws. Probe k draws from
/// stream (seed, k); results are independent of evaluation order.
pub fn verify_minimality(
    density: &RadialDensity,
    params: &PhysicalParams,
    n_perturbations: usize,
    seed: u64,
) -> Result<MinimalityReport, Error> {
    if n_perturbations < 10 {
        return Err(Error::input("need at least 10 perturbations"));
    }
    let grid = density.grid();
    let nodes = grid.nodes();
    let strip = params.radius / cbrt(params.drive(density.winding_constant()));
    if !(strip > 0.0) || !strip.is_finite() {
        return Err(Error::input("density has no resolvable boundary strip"));
    }
    let q: Vec<f64> = density.values().iter().map(|&p| sqrt_clamped(p)).collect();
    let q_norm_sq = weighted_norm_sq(grid, &q)?;
    let base = action_of_density(density, params)?.total;
    let noise_floor = 1e-8 * base.abs();

    let mut probes = Vec::with_capacity(n_perturbations);
    for id in 0..n_perturbations {
        let mut stream = Stream::new(seed, id as u64);
        let center = params.radius + stream.uniform_in(0.25, 0.55) * strip;
        let width = stream.uniform_in(0.04, 0.10) * strip;

        let mut eta: Vec<f64> = nodes
            .iter()
            .map(|&rho| bump((rho - center) / width))
            .collect();
        eta[0] = 0.0;
        let overlap = weighted_dot(grid, &eta, &q)?;
        for (e, &qi) in eta.iter_mut().zip(q.iter()) {
            *e -= overlap / q_norm_sq * qi;
        }
        let eta_norm_sq = weighted_norm_sq(grid, &eta)?;
        if !(eta_norm_sq > 0.0) {
            return Err(Error::input(
                "perturbation support fell between grid nodes",
            ));
        }
        let scale = sqrt(q_norm_sq / eta_norm_sq);
        for e in eta.iter_mut() {
            *e *= scale;
        }

        let deltas = probe_direction(density, params, &eta, &PROBE_EPSILONS)?;
        let (linear, quadratic) = fit_quadratic(&PROBE_EPSILONS, &deltas)?;
        probes.push(PerturbationProbe {
            id,
            center,
            width,
            epsilons: PROBE_EPSILONS,
            delta_actions: [deltas[0], deltas[1], deltas[2], deltas[3]],
            linear,
            quadratic,
        });
    }
    Ok(MinimalityReport {
        base_action: base,
        noise_floor,
        probes,
    })
}

/// Cubic B-spline kernel: positive on (-2, 2), C^2, peak 2/3 at 0.
fn bump(t: f64) -> f64 {
    let a = t.abs();
    if a >= 2.0 {
        0.0
    } else if a >= 1.0 {
        let b = 2.0 - a;
        b * b * b / 6.0
    } else {
        (4.0 - 6.0 * a * a + 3.0 * a * a * a) / 6.0
    }
}

fn weighted_dot(grid: &RadialGrid, f: &[f64], g: &[f64]) -> Result<f64, Error> {
    let nodes = grid.nodes();
    let samples: Vec<f64> = nodes
        .iter()
        .zip(f.iter().zip(g.iter()))
        .map(|(&rho, (&fi, &gi))| fi * gi * rho)
        .collect();
    Ok(CubicSpline::new(nodes, &samples)?.integral())
}

fn weighted_norm_sq(grid: &RadialGrid, f: &[f64]) -> Result<f64, Error> {
    weighted_dot(grid, f, f)
}

/// Least-squares (b, a) of y = b x + a x^2 over the given points.
fn fit_quadratic(xs: &[f64], ys: &[f64]) -> Result<(f64, f64), Error> {
    let (mut s2, mut s3, mut s4, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        let x2 = x * x;
        s2 += x2;
        s3 += x2 * x;
        s4 += x2 * x2;
        r1 += y * x;
        r2 += y * x2;
    }
    let det = s2 * s4 - s3 * s3;
    if det == 0.0 {
        return Err(Error::input("perturbation sizes do not determine a fit"));
    }
    Ok(((r1 * s4 - r2 * s3) / det, (r2 * s2 - r1 * s3) / det))
}

//! Direct simulation of the winding diffusion.
//!
//! Paths follow the Euler-Maruyama update x' = x + v(x) dt + sqrt(2 D dt) xi
//! in Cartesian coordinates, with the drift assembled on the fly from its
//! polar components; integrating in the plane avoids the spurious radial
//! drift that polar SDEs pick up. The disc is impenetrable: a step landing
//! inside is reflected across the circle at fixed angle, so recorded radii
//! never dip below the wall. The gradient-flow v_rho diverges at the wall,
//! which no explicit scheme can represent; it is clamped at a configurable
//! cap and the reflection backstops the remainder.
//!
//! Path k draws every number from the counter-keyed stream (seed, k), so
//! results are bit-identical however paths are scheduled, and partial runs
//! merge by plain addition of histogram counts.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::fmath::{atan2, cbrt, cos, floor, hypot, sin, sqrt};
use crate::model::spline::CubicSpline;
use crate::model::{DriftField, PhysicalParams, RadialDensity};
use crate::numerics::find_root;
use crate::rng::Stream;

const TAU: f64 = core::f64::consts::TAU;

/// Clamp rule for the wall-divergent radial drift: ten diffusion speeds per
/// boundary strip width, 10 D mu^{1/3} / R.
pub fn default_drift_cap(params: &PhysicalParams, drive: f64) -> f64 {
    10.0 * params.diffusion * cbrt(drive) / params.radius
}

/// Run shape and numerical guards for [`simulate`].
#[derive(Clone, Copy, Debug)]
pub struct SimConfig {
    pub dt: f64,
    /// Steps taken per path, burn-in included.
    pub n_steps: u64,
    pub n_paths: u64,
    /// Leading steps per path that are integrated but not recorded.
    pub burn_in: u64,
    pub seed: u64,
    /// Clamp on |v_rho|; see [`default_drift_cap`] for the usual choice.
    pub drift_cap: f64,
    pub histogram_bins: usize,
    /// Binned radial window [lo, hi]; lo must sit at the disc edge. Radii
    /// at or beyond hi land in a final catch-all bin.
    pub bin_range: (f64, f64),
}

/// Merged outcome of a run.
///
/// `counts` has one entry per histogram bin plus the final catch-all, so
/// the entries sum to exactly `n_effective` = n_paths (n_steps - burn_in).
/// `elapsed_time` is the recorded span of one path; the mean winding rate
/// is total_angle / (n_paths elapsed_time), with a standard error taken
/// across paths.
#[derive(Clone, Debug)]
pub struct SimulationStats {
    /// histogram_bins + 1 ascending edges spanning the binned window.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Same layout, restricted to the first half of the recorded steps.
    pub first_half_counts: Vec<u64>,
    pub total_angle: f64,
    pub elapsed_time: f64,
    pub n_effective: u64,
    pub mean_winding_rate: f64,
    pub winding_rate_se: f64,
    /// Filled by the caller from [`compare_distribution`].
    pub ks_distance: Option<f64>,
}

impl SimulationStats {
    /// Counts from the second half of the recorded steps.
    pub fn second_half_counts(&self) -> Vec<u64> {
        self.counts
            .iter()
            .zip(self.first_half_counts.iter())
            .map(|(&all, &first)| all - first)
            .collect()
    }

    /// Radius below which the fraction `p` of recorded samples lies,
    /// interpolated linearly inside its bin. Fails if the quantile falls in
    /// the catch-all bin, where no upper edge exists.
    pub fn empirical_quantile(&self, p: f64) -> Result<f64, Error> {
        if !(0.0 < p && p < 1.0) {
            return Err(Error::input("quantile fraction must lie in (0, 1)"));
        }
        let total: u64 = self.counts.iter().sum();
        if total == 0 {
            return Err(Error::input("histogram is empty"));
        }
        let target = p * total as f64;
        let mut cum = 0.0;
        for (i, &c) in self.counts[..self.counts.len() - 1].iter().enumerate() {
            let next = cum + c as f64;
            if next >= target && c > 0 {
                let frac = (target - cum) / c as f64;
                return Ok(self.edges[i] + frac * (self.edges[i + 1] - self.edges[i]));
            }
            cum = next;
        }
        Err(Error::input("quantile falls beyond the binned window"))
    }
}

/// One path's contribution, mergeable by addition in any order.
#[derive(Clone, Debug)]
pub struct PathOutcome {
    pub counts: Vec<u64>,
    pub first_half_counts: Vec<u64>,
    /// Total signed angle swept after burn-in.
    pub angle: f64,
}

/// A validated run: drift field, initial-condition sampler, and bins.
pub struct Simulation {
    params: PhysicalParams,
    config: SimConfig,
    field: DriftField,
    /// 2 pi rho P(rho), whose running integral is the radial CDF.
    mass_curve: CubicSpline,
    total_mass: f64,
    bin_width: f64,
}

impl Simulation {
    /// Validates the configuration against the target law and builds the
    /// reusable run state.
    ///
    /// Rejected configurations: empty or inverted shapes, a drift clamp
    /// that can cross a histogram bin in one step, and a time step so
    /// coarse that the clamped drift moves a tenth of the boundary strip
    /// per step.
    pub fn prepare(
        params: &PhysicalParams,
        target: &RadialDensity,
        config: &SimConfig,
    ) -> Result<Self, Error> {
        if !(config.dt > 0.0) || !config.dt.is_finite() {
            return Err(Error::input("time step must be positive and finite"));
        }
        if config.n_paths == 0 {
            return Err(Error::input("need at least one path"));
        }
        if config.burn_in >= config.n_steps {
            return Err(Error::input("burn-in must leave steps to record"));
        }
        if !(config.drift_cap > 0.0) || !config.drift_cap.is_finite() {
            return Err(Error::input("drift cap must be positive and finite"));
        }
        if config.histogram_bins < 2 {
            return Err(Error::input("need at least 2 histogram bins"));
        }
        let (lo, hi) = config.bin_range;
        if (lo - params.radius).abs() > 1e-9 * params.radius {
            return Err(Error::input("binned window must start at the disc edge"));
        }
        if !(hi > lo) || !hi.is_finite() {
            return Err(Error::input("binned window must have positive width"));
        }
        let bin_width = (hi - lo) / config.histogram_bins as f64;
        if config.drift_cap * config.dt >= bin_width {
            return Err(Error::input(
                "clamped drift crosses a whole bin per step; widen bins or shrink dt",
            ));
        }
        let strip = params.radius / cbrt(params.drive(target.winding_constant()));
        if config.drift_cap * config.dt >= strip / 10.0 {
            return Err(Error::input(
                "time step too coarse for the boundary strip",
            ));
        }
        let field = DriftField::of(target, params)?;
        let nodes = target.grid().nodes();
        let weighted: Vec<f64> = nodes
            .iter()
            .zip(target.values().iter())
            .map(|(&rho, &p)| TAU * rho * p)
            .collect();
        let mass_curve = CubicSpline::new(nodes, &weighted)?;
        let total_mass = mass_curve.integral();
        if !(total_mass > 0.0) {
            return Err(Error::input("target density has no mass"));
        }
        Ok(Simulation {
            params: *params,
            config: *config,
            field,
            mass_curve,
            total_mass,
            bin_width,
        })
    }

    /// Radius enclosing the mass fraction `u` of the target law.
    fn initial_radius(&self, u: f64) -> f64 {
        let (lo, hi) = self.mass_curve.domain();
        let want = u * self.total_mass;
        match find_root(
            |rho| self.mass_curve.integral_to(rho) - want,
            lo,
            hi,
            1e-12 * (hi - lo),
        ) {
            Ok(rho) => rho,
            // Roundoff at the very ends of the mass curve; clamp inward.
            Err(_) => {
                if u < 0.5 {
                    lo
                } else {
                    hi
                }
            }
        }
    }

    fn bin_of(&self, rho: f64) -> usize {
        let i = floor((rho - self.config.bin_range.0) / self.bin_width) as usize;
        i.min(self.config.histogram_bins)
    }

    /// Integrates path `path`, drawing from stream (seed, path).
    pub fn run_path(&self, path: u64) -> PathOutcome {
        let mut stream = Stream::new(self.config.seed, path);
        let u = loop {
            let u = stream.uniform();
            if u > 0.0 {
                break u;
            }
        };
        let rho0 = self.initial_radius(u);
        let theta = stream.uniform_in(0.0, TAU);
        let mut pos = [rho0 * cos(theta), rho0 * sin(theta)];

        let amplitude = sqrt(2.0 * self.params.diffusion * self.config.dt);
        let recorded = self.config.n_steps - self.config.burn_in;
        let half = recorded / 2;
        let mut counts = vec![0u64; self.config.histogram_bins + 1];
        let mut first_half_counts = vec![0u64; self.config.histogram_bins + 1];
        let mut angle = 0.0;
        for s in 0..self.config.n_steps {
            let noise = [stream.normal(), stream.normal()];
            let drift = self
                .field
                .cartesian_at(pos[0], pos[1], self.config.drift_cap);
            let (next, rho) = advance(
                pos,
                drift,
                self.params.radius,
                self.config.dt,
                amplitude,
                noise,
            );
            if s >= self.config.burn_in {
                angle += atan2(
                    pos[0] * next[1] - pos[1] * next[0],
                    pos[0] * next[0] + pos[1] * next[1],
                );
                let bin = self.bin_of(rho);
                counts[bin] += 1;
                if s - self.config.burn_in < half {
                    first_half_counts[bin] += 1;
                }
            }
            pos = next;
        }
        PathOutcome {
            counts,
            first_half_counts,
            angle,
        }
    }

    /// Merges exactly n_paths outcomes into run statistics. Addition is
    /// commutative, so any path order gives the same result.
    pub fn collect(
        &self,
        outcomes: impl IntoIterator<Item = PathOutcome>,
    ) -> Result<SimulationStats, Error> {
        let bins = self.config.histogram_bins;
        let mut counts = vec![0u64; bins + 1];
        let mut first_half_counts = vec![0u64; bins + 1];
        let mut total_angle = 0.0;
        let mut rate_sum = 0.0;
        let mut rate_sq_sum = 0.0;
        let mut merged: u64 = 0;
        let recorded = self.config.n_steps - self.config.burn_in;
        let elapsed_time = recorded as f64 * self.config.dt;
        for outcome in outcomes {
            if outcome.counts.len() != bins + 1 || outcome.first_half_counts.len() != bins + 1 {
                return Err(Error::input("path outcome has a foreign bin layout"));
            }
            for (acc, &c) in counts.iter_mut().zip(outcome.counts.iter()) {
                *acc += c;
            }
            for (acc, &c) in first_half_counts
                .iter_mut()
                .zip(outcome.first_half_counts.iter())
            {
                *acc += c;
            }
            total_angle += outcome.angle;
            let rate = outcome.angle / elapsed_time;
            rate_sum += rate;
            rate_sq_sum += rate * rate;
            merged += 1;
        }
        if merged != self.config.n_paths {
            return Err(Error::input("outcome count does not match n_paths"));
        }
        let n = merged as f64;
        let mean_winding_rate = total_angle / (n * elapsed_time);
        let winding_rate_se = if merged > 1 {
            let var = (rate_sq_sum - rate_sum * rate_sum / n) / (n - 1.0);
            sqrt(var.max(0.0) / n)
        } else {
            0.0
        };
        let edges = (0..=bins)
            .map(|i| self.config.bin_range.0 + i as f64 * self.bin_width)
            .collect();
        Ok(SimulationStats {
            edges,
            counts,
            first_half_counts,
            total_angle,
            elapsed_time,
            n_effective: self.config.n_paths * recorded,
            mean_winding_rate,
            winding_rate_se,
            ks_distance: None,
        })
    }
}

/// Runs every path sequentially under the validated configuration.
pub fn simulate(
    params: &PhysicalParams,
    target: &RadialDensity,
    config: &SimConfig,
) -> Result<SimulationStats, Error> {
    let sim = Simulation::prepare(params, target, config)?;
    let stats = sim.collect((0..config.n_paths).map(|p| sim.run_path(p)))?;
    Ok(stats)
}

/// One Euler-Maruyama update of a full drift field, reflection included.
pub fn step(
    position: [f64; 2],
    field: &DriftField,
    params: &PhysicalParams,
    dt: f64,
    drift_cap: f64,
    noise: [f64; 2],
) -> [f64; 2] {
    let drift = field.cartesian_at(position[0], position[1], drift_cap);
    let amplitude = sqrt(2.0 * params.diffusion * dt);
    advance(position, drift, params.radius, dt, amplitude, noise).0
}

/// The same update with an explicit Cartesian drift vector. `wall` may be
/// zero for free-space diffusion.
pub fn step_with_drift(
    position: [f64; 2],
    drift: [f64; 2],
    wall: f64,
    diffusion: f64,
    dt: f64,
    noise: [f64; 2],
) -> [f64; 2] {
    advance(position, drift, wall, dt, sqrt(2.0 * diffusion * dt), noise).0
}

/// Applies drift and noise, then reflects across the circle at fixed angle
/// if the move ends inside the disc. Returns the new position and its
/// radius as recorded (the reflected value is never below the wall).
fn advance(
    position: [f64; 2],
    drift: [f64; 2],
    wall: f64,
    dt: f64,
    amplitude: f64,
    noise: [f64; 2],
) -> ([f64; 2], f64) {
    let x = position[0] + drift[0] * dt + amplitude * noise[0];
    let y = position[1] + drift[1] * dt + amplitude * noise[1];
    let rho = hypot(x, y);
    if rho >= wall {
        return ([x, y], rho);
    }
    let reflected = 2.0 * wall - rho;
    let (cx, cy) = if rho > 0.0 {
        (x / rho, y / rho)
    } else {
        // Landed dead on the center; keep the incoming direction.
        let r0 = hypot(position[0], position[1]);
        (position[0] / r0, position[1] / r0)
    };
    ([reflected * cx, reflected * cy], reflected)
}

/// Empirical law against a target law.
#[derive(Clone, Copy, Debug)]
pub struct DistributionComparison {
    /// Sup distance between the binned empirical CDF and the target CDF.
    pub ks: f64,
    /// Pearson statistic over bins with at least 10 expected counts.
    pub chi_square: f64,
    pub chi_square_bins: usize,
    pub threshold: f64,
    pub passes: bool,
}

/// Kolmogorov-Smirnov and chi-square comparison of a recorded histogram
/// against a density, evaluated at the bin edges with the 2 pi rho area
/// weight folded into the target CDF. `passes` reports ks <= threshold.
pub fn compare_distribution(
    stats: &SimulationStats,
    target: &RadialDensity,
    threshold: f64,
) -> Result<DistributionComparison, Error> {
    let total: u64 = stats.counts.iter().sum();
    if total == 0 {
        return Err(Error::input("histogram is empty"));
    }
    let span_end = target.grid().outer();
    let last_edge = *stats.edges.last().unwrap();
    if last_edge > span_end + 1e-9 * span_end {
        return Err(Error::input("binned window extends beyond the target law"));
    }
    let mass = target.normalization();
    if !(mass > 0.0) {
        return Err(Error::input("target density has no mass"));
    }
    let n = total as f64;
    let mut ks = 0.0f64;
    let mut cum = 0u64;
    let mut target_lo = 0.0;
    let mut chi_square = 0.0;
    let mut chi_square_bins = 0;
    for (i, &count) in stats.counts.iter().enumerate() {
        let target_hi = if i < stats.counts.len() - 1 {
            target.mass_within(stats.edges[i + 1]) / mass
        } else {
            1.0
        };
        cum += count;
        if i < stats.counts.len() - 1 {
            ks = ks.max((cum as f64 / n - target_hi).abs());
        }
        let expected = n * (target_hi - target_lo);
        if expected >= 10.0 {
            let diff = count as f64 - expected;
            chi_square += diff * diff / expected;
            chi_square_bins += 1;
        }
        target_lo = target_hi;
    }
    Ok(DistributionComparison {
        ks,
        chi_square,
        chi_square_bins,
        threshold,
        passes: ks <= threshold,
    })
}

//! `simulate`: direct paths against a computed law, with the histogram and
//! distribution comparison written out.

use rayon::prelude::*;
use serde::Serialize;
use windisc_core::model::{PhysicalParams, RadialDensity};
use windisc_core::montecarlo::{
    compare_distribution, default_drift_cap, PathOutcome, SimConfig, Simulation,
};
use windisc_core::{asymptotic, bvp};

use crate::config::{pick, Common, FileConfig, SimulationBlock, Source};
use crate::output::{self, Table};
use crate::{CliError, SimulateArgs};

#[derive(Clone, Serialize)]
struct ResolvedConfig {
    #[serde(flatten)]
    common: Common,
    source: Source,
    nodes: usize,
    dt: f64,
    steps: u64,
    paths: u64,
    burn_in: u64,
    bins: usize,
    window_widths: f64,
    drift_cap: f64,
    threshold: f64,
}

#[derive(Serialize)]
struct StatsReport<'a> {
    command: &'static str,
    config: &'a ResolvedConfig,
    n_effective: u64,
    elapsed_time: f64,
    total_angle: f64,
    winding: WindingStats,
    comparison: ComparisonStats,
    quantiles: QuantileStats,
}

#[derive(Serialize)]
struct WindingStats {
    rate: f64,
    standard_error: f64,
    expected: f64,
    deviation_se: f64,
}

#[derive(Serialize)]
struct ComparisonStats {
    ks: f64,
    chi_square: f64,
    chi_square_bins: usize,
    threshold: f64,
    passes: bool,
}

#[derive(Serialize)]
struct QuantileStats {
    q25: Option<f64>,
    q50: Option<f64>,
    q75: Option<f64>,
}

/// Builds the law the paths start from, drift along, and are scored against.
pub(crate) fn target_law(
    params: &PhysicalParams,
    source: Source,
    nodes: usize,
) -> Result<(RadialDensity, f64), CliError> {
    match source {
        Source::Asymptotic => {
            let constants = asymptotic::constants_self_consistent(params)?;
            let density = asymptotic::density_on_default_grid(params, &constants, nodes)?;
            Ok((density, constants.width))
        }
        Source::Solve => {
            let solution = bvp::self_consistent_solve(params, nodes, 1e-10, 80)?;
            let constants = asymptotic::constants_with_winding(params, solution.winding)?;
            Ok((solution.eigen.density, constants.width))
        }
    }
}

pub fn run(args: SimulateArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let (common, params) = Common::resolve(&args.common, &file)?;
    let sim = file.simulation.unwrap_or(SimulationBlock::default());
    let source = pick(args.source, file.source, Source::Asymptotic);
    let nodes = pick(args.nodes, file.grid.as_ref().and_then(|g| g.nodes), 2048);

    let (density, width) = target_law(&params, source, nodes)?;
    let drive = params.drive(density.winding_constant());
    let config = ResolvedConfig {
        source,
        nodes,
        dt: pick(args.dt, sim.dt, 1e-3),
        steps: pick(args.steps, sim.steps, 60),
        paths: pick(args.paths, sim.paths, 20_000),
        burn_in: pick(args.burn_in, sim.burn_in, 10),
        bins: pick(args.bins, sim.bins, 200),
        window_widths: pick(args.window_widths, sim.window_widths, 8.0),
        drift_cap: pick(
            args.drift_cap,
            sim.drift_cap,
            default_drift_cap(&params, drive),
        ),
        threshold: pick(args.threshold, sim.threshold, 0.02),
        common,
    };

    let sim_config = SimConfig {
        dt: config.dt,
        n_steps: config.steps,
        n_paths: config.paths,
        burn_in: config.burn_in,
        seed: config.common.seed,
        drift_cap: config.drift_cap,
        histogram_bins: config.bins,
        bin_range: (
            params.radius,
            params.radius + config.window_widths * width,
        ),
    };
    let simulation = Simulation::prepare(&params, &density, &sim_config)?;
    let outcomes: Vec<PathOutcome> = (0..sim_config.n_paths)
        .into_par_iter()
        .map(|path| simulation.run_path(path))
        .collect();
    let stats = simulation.collect(outcomes)?;
    let fit = compare_distribution(&stats, &density, config.threshold)?;

    let expected = params.speed / params.radius;
    let deviation_se = if stats.winding_rate_se > 0.0 {
        (stats.mean_winding_rate - expected).abs() / stats.winding_rate_se
    } else {
        f64::INFINITY
    };

    let out = &config.common.out;
    let mut rows = Vec::with_capacity(stats.counts.len());
    for (i, &count) in stats.counts.iter().enumerate() {
        let lo = stats.edges[i.min(stats.edges.len() - 1)];
        let hi = if i + 1 < stats.edges.len() {
            stats.edges[i + 1]
        } else {
            f64::INFINITY
        };
        rows.push(vec![lo, hi, count as f64]);
    }
    let histogram_path = output::write_table(
        out,
        "histogram",
        "simulate",
        &config,
        &Table {
            columns: &["bin_lo", "bin_hi", "count"],
            rows,
        },
        config.common.format,
    )?;

    let stats_path = output::write_report(
        out,
        "stats",
        &StatsReport {
            command: "simulate",
            config: &config,
            n_effective: stats.n_effective,
            elapsed_time: stats.elapsed_time,
            total_angle: stats.total_angle,
            winding: WindingStats {
                rate: stats.mean_winding_rate,
                standard_error: stats.winding_rate_se,
                expected,
                deviation_se,
            },
            comparison: ComparisonStats {
                ks: fit.ks,
                chi_square: fit.chi_square,
                chi_square_bins: fit.chi_square_bins,
                threshold: fit.threshold,
                passes: fit.passes,
            },
            quantiles: QuantileStats {
                q25: stats.empirical_quantile(0.25).ok(),
                q50: stats.empirical_quantile(0.50).ok(),
                q75: stats.empirical_quantile(0.75).ok(),
            },
        },
    )?;

    println!(
        "ks = {} (threshold {}, passes = {}), winding rate = {} ({} se from V/R), n_effective = {}",
        output::sig(fit.ks),
        config.threshold,
        fit.passes,
        output::sig(stats.mean_winding_rate),
        output::sig(deviation_se),
        stats.n_effective,
    );
    println!(
        "wrote {}, {}",
        histogram_path.display(),
        stats_path.display()
    );
    Ok(())
}

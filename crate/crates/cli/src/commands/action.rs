//! `action`: score a computed law and probe that it is a minimum.

use serde::Serialize;
use windisc_core::variational;

use crate::config::{pick, Common, FileConfig, Source};
use crate::output;
use crate::{ActionArgs, CliError};

#[derive(Clone, Serialize)]
struct ResolvedConfig {
    #[serde(flatten)]
    common: Common,
    source: Source,
    nodes: usize,
    perturbations: usize,
}

#[derive(Serialize)]
struct BreakdownReport<'a> {
    command: &'static str,
    config: &'a ResolvedConfig,
    radial: f64,
    angular: f64,
    total: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    constrained: Option<ConstrainedValues>,
}

#[derive(Serialize)]
struct ConstrainedValues {
    gamma: f64,
    lagrange: f64,
    total: f64,
}

#[derive(Serialize)]
struct MinimalityReport<'a> {
    command: &'static str,
    config: &'a ResolvedConfig,
    base_action: f64,
    noise_floor: f64,
    worst_margin: f64,
    min_curvature: f64,
    worst_stationarity: f64,
    violations: Vec<usize>,
    deltas: Vec<DeltaEntry>,
}

#[derive(Serialize)]
struct DeltaEntry {
    perturbation_id: usize,
    epsilon: f64,
    delta_action: f64,
}

pub fn run(args: ActionArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let (common, params) = Common::resolve(&args.common, &file)?;
    let config = ResolvedConfig {
        source: pick(args.source, file.source, Source::Solve),
        nodes: pick(args.nodes, file.grid.as_ref().and_then(|g| g.nodes), 2048),
        perturbations: pick(
            args.perturbations,
            file.minimality.as_ref().and_then(|m| m.perturbations),
            50,
        ),
        common,
    };

    let (density, gamma) = match config.source {
        Source::Solve => {
            let solution =
                windisc_core::bvp::self_consistent_solve(&params, config.nodes, 1e-10, 80)?;
            let gamma = solution.eigen.gamma;
            (solution.eigen.density, Some(gamma))
        }
        Source::Asymptotic => {
            let constants = windisc_core::asymptotic::constants_self_consistent(&params)?;
            let density =
                windisc_core::asymptotic::density_on_default_grid(&params, &constants, config.nodes)?;
            (density, None)
        }
    };

    let breakdown = variational::action_of_density(&density, &params)?;
    let constrained = match gamma {
        Some(g) => {
            let scored = variational::action_with_multiplier(&density, &params, g)?;
            Some(ConstrainedValues {
                gamma: g,
                lagrange: scored.lagrange.unwrap_or(0.0),
                total: scored.total,
            })
        }
        None => None,
    };

    let probes = variational::verify_minimality(
        &density,
        &params,
        config.perturbations,
        config.common.seed,
    )?;
    let mut deltas = Vec::with_capacity(probes.probes.len() * 4);
    for probe in &probes.probes {
        for (&epsilon, &delta_action) in probe.epsilons.iter().zip(&probe.delta_actions) {
            deltas.push(DeltaEntry {
                perturbation_id: probe.id,
                epsilon,
                delta_action,
            });
        }
    }
    let violations = probes.violations();

    let out = &config.common.out;
    let breakdown_path = output::write_report(
        out,
        "breakdown",
        &BreakdownReport {
            command: "action",
            config: &config,
            radial: breakdown.radial,
            angular: breakdown.angular,
            total: breakdown.total,
            constrained,
        },
    )?;
    let minimality_path = output::write_report(
        out,
        "minimality",
        &MinimalityReport {
            command: "action",
            config: &config,
            base_action: probes.base_action,
            noise_floor: probes.noise_floor,
            worst_margin: probes.worst_margin(),
            min_curvature: probes.min_curvature(),
            worst_stationarity: probes.worst_stationarity(),
            violations: violations.clone(),
            deltas,
        },
    )?;

    println!(
        "action = {} (radial {}, angular {}), worst margin = {}, min curvature = {}",
        output::sig(breakdown.total),
        output::sig(breakdown.radial),
        output::sig(breakdown.angular),
        output::sig(probes.worst_margin()),
        output::sig(probes.min_curvature()),
    );
    if !violations.is_empty() {
        println!(
            "warning: {} perturbation(s) lowered the action beyond the noise floor: {:?}",
            violations.len(),
            violations
        );
    }
    println!(
        "wrote {}, {}",
        breakdown_path.display(),
        minimality_path.display()
    );
    Ok(())
}

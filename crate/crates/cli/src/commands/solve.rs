//! `solve`: the self-consistent eigenproblem, scored against the closed form.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;
use windisc_core::bvp::{self, SelfConsistentSolution};
use windisc_core::model::{PhysicalParams, RadialDensity, RadialDrift};
use windisc_core::{asymptotic, variational};

use crate::config::{pick, Common, FileConfig};
use crate::output::{self, Table};
use crate::{CliError, SolveArgs};

#[derive(Clone, Serialize)]
struct ResolvedConfig {
    #[serde(flatten)]
    common: Common,
    nodes: usize,
    tolerance: f64,
    max_iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep_radii: Option<Vec<f64>>,
}

struct Outcome {
    radius: f64,
    solution: SelfConsistentSolution,
    gamma_linearized: f64,
    winding_root: f64,
    winding_leading: f64,
    profile_sup_error: f64,
    l1_mass_error: f64,
}

#[derive(Serialize)]
struct SolutionReport<'a> {
    command: &'static str,
    config: &'a ResolvedConfig,
    gamma: f64,
    gamma_linearized: f64,
    winding: WindingValues,
    iterations: usize,
    history: &'a [f64],
    node_count: usize,
    grid_spacing: f64,
    domain_end: f64,
    residual: ResidualValues,
    comparison: ComparisonValues,
    action: ActionValues,
}

#[derive(Serialize)]
struct WindingValues {
    value: f64,
    root: f64,
    leading: f64,
}

#[derive(Serialize)]
struct ResidualValues {
    stationarity: f64,
    flux: f64,
}

#[derive(Serialize)]
struct ComparisonValues {
    profile_sup_error: f64,
    l1_mass_error: f64,
}

#[derive(Serialize)]
struct ActionValues {
    radial: f64,
    angular: f64,
    total: f64,
}

pub fn run(args: SolveArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let (common, params) = Common::resolve(&args.common, &file)?;
    let solver = file.solver.unwrap_or_default();
    let config = ResolvedConfig {
        nodes: pick(args.nodes, file.grid.as_ref().and_then(|g| g.nodes), 2048),
        tolerance: pick(args.tolerance, solver.tolerance, 1e-10),
        max_iterations: pick(args.max_iterations, solver.max_iterations, 80),
        sweep_radii: args.sweep_radii.or(solver.sweep_radii),
        common,
    };
    match config.sweep_radii.clone() {
        Some(radii) => sweep(&params, &config, &radii),
        None => single(&params, &config),
    }
}

fn single(params: &PhysicalParams, config: &ResolvedConfig) -> Result<(), CliError> {
    let outcome = solve_at(params, config, params.radius)?;
    let density = &outcome.solution.eigen.density;

    let table = Table {
        columns: &["rho", "P"],
        rows: density
            .grid()
            .nodes()
            .iter()
            .zip(density.values())
            .map(|(&rho, &p)| vec![rho, p])
            .collect(),
    };
    let out = &config.common.out;
    let density_path =
        output::write_table(out, "P", "solve", config, &table, config.common.format)?;

    let drift = RadialDrift::of(density, params)?;
    let residual = bvp::residual_of(density, &drift, params.diffusion);
    let action = variational::action_of_density(density, params)?;
    let solution_path = output::write_report(
        out,
        "solution",
        &SolutionReport {
            command: "solve",
            config,
            gamma: outcome.solution.eigen.gamma,
            gamma_linearized: outcome.gamma_linearized,
            winding: WindingValues {
                value: outcome.solution.winding,
                root: outcome.winding_root,
                leading: outcome.winding_leading,
            },
            iterations: outcome.solution.iterations,
            history: &outcome.solution.history,
            node_count: density.grid().len(),
            grid_spacing: outcome.solution.eigen.grid_spacing,
            domain_end: outcome.solution.eigen.domain_end,
            residual: ResidualValues {
                stationarity: residual.stationarity,
                flux: residual.flux,
            },
            comparison: ComparisonValues {
                profile_sup_error: outcome.profile_sup_error,
                l1_mass_error: outcome.l1_mass_error,
            },
            action: ActionValues {
                radial: action.radial,
                angular: action.angular,
                total: action.total,
            },
        },
    )?;

    println!(
        "gamma = {} (linearized {}), C = {} after {} iterations, profile sup error {}",
        output::sig(outcome.solution.eigen.gamma),
        output::sig(outcome.gamma_linearized),
        output::sig(outcome.solution.winding),
        outcome.solution.iterations,
        output::sig(outcome.profile_sup_error),
    );
    let comparison_path = write_comparison(config, &[outcome])?;
    println!(
        "wrote {}, {}, {}",
        density_path.display(),
        solution_path.display(),
        comparison_path.display()
    );
    Ok(())
}

fn sweep(params: &PhysicalParams, config: &ResolvedConfig, radii: &[f64]) -> Result<(), CliError> {
    if radii.is_empty() {
        return Err(CliError::Config("sweep needs at least one radius".into()));
    }
    let outcomes: Vec<Result<Outcome, CliError>> = radii
        .par_iter()
        .map(|&radius| {
            let swept = PhysicalParams::new(radius, params.speed, params.diffusion)?;
            solve_at(&swept, config, radius)
        })
        .collect();
    let mut rows = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        rows.push(outcome?);
    }
    let path = write_comparison(config, &rows)?;
    for row in &rows {
        println!(
            "R = {}: profile sup error {}, gamma {}, C {}",
            row.radius,
            output::sig(row.profile_sup_error),
            output::sig(row.solution.eigen.gamma),
            output::sig(row.solution.winding),
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn solve_at(
    params: &PhysicalParams,
    config: &ResolvedConfig,
    radius: f64,
) -> Result<Outcome, CliError> {
    let solution =
        bvp::self_consistent_solve(params, config.nodes, config.tolerance, config.max_iterations)?;
    let constants = asymptotic::constants_with_winding(params, solution.winding)?;
    let closed = asymptotic::density(
        params,
        &constants,
        solution.eigen.density.grid().clone(),
    )?;
    Ok(Outcome {
        radius,
        profile_sup_error: bvp::airy_profile_distance(params, &solution)?,
        l1_mass_error: l1_mass_distance(&solution.eigen.density, &closed),
        gamma_linearized: constants.gamma,
        winding_root: asymptotic::self_consistent_winding(params)?,
        winding_leading: asymptotic::leading_winding(params),
        solution,
    })
}

/// Integral of |a - b| 2 pi rho drho on the (shared) grid of `a`.
fn l1_mass_distance(a: &RadialDensity, b: &RadialDensity) -> f64 {
    let nodes = a.grid().nodes();
    let f: Vec<f64> = nodes
        .iter()
        .zip(a.values().iter().zip(b.values()))
        .map(|(&rho, (&pa, &pb))| TAU * rho * (pa - pb).abs())
        .collect();
    let mut sum = 0.0;
    for i in 1..nodes.len() {
        sum += 0.5 * (f[i] + f[i - 1]) * (nodes[i] - nodes[i - 1]);
    }
    sum
}

fn write_comparison(
    config: &ResolvedConfig,
    outcomes: &[Outcome],
) -> Result<std::path::PathBuf, CliError> {
    let table = Table {
        columns: &[
            "R",
            "profile_sup_error",
            "l1_mass_error",
            "gamma",
            "gamma_linearized",
            "C",
            "C_root",
        ],
        rows: outcomes
            .iter()
            .map(|o| {
                vec![
                    o.radius,
                    o.profile_sup_error,
                    o.l1_mass_error,
                    o.solution.eigen.gamma,
                    o.gamma_linearized,
                    o.solution.winding,
                    o.winding_root,
                ]
            })
            .collect(),
    };
    output::write_table(
        &config.common.out,
        "comparison",
        "solve",
        config,
        &table,
        config.common.format,
    )
}

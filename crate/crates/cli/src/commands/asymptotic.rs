//! `asymptotic`: the closed-form strip density and its constants.

use serde::Serialize;
use windisc_core::asymptotic;

use crate::config::{Common, ConstantChoice, FileConfig};
use crate::output::{self, Table};
use crate::{AsymptoticArgs, CliError};

#[derive(Clone, Serialize)]
struct ResolvedConfig {
    #[serde(flatten)]
    common: Common,
    constant: ConstantChoice,
    nodes: usize,
}

#[derive(Serialize)]
struct ConstantsReport<'a> {
    command: &'static str,
    config: &'a ResolvedConfig,
    /// Winding constants: the strip-collapse value, the self-consistency
    /// root, and whichever of the two the density was built with.
    winding: WindingValues,
    mu: f64,
    omega_sq: f64,
    airy_zero: f64,
    strip_width: f64,
    peak_offset: f64,
    amplitude_sq: f64,
    gamma: f64,
}

#[derive(Serialize)]
struct WindingValues {
    leading: f64,
    self_consistent_root: f64,
    used: f64,
}

#[derive(Serialize)]
struct WindingReport<'a> {
    command: &'static str,
    config: &'a ResolvedConfig,
    leading: f64,
    root: f64,
    /// Quadrature cross-check of the first-order deficit coefficient.
    deficit: DeficitValues,
}

#[derive(Serialize)]
struct DeficitValues {
    first_moment_measured: f64,
    first_moment_closed: f64,
    measured_coefficient: f64,
    series_coefficient: f64,
    pi_scaled_coefficient: f64,
    ratio_to_series: f64,
}

pub fn run(args: AsymptoticArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let (common, params) = Common::resolve(&args.common, &file)?;
    let config = ResolvedConfig {
        constant: crate::config::pick(args.constant, file.constant, ConstantChoice::Leading),
        nodes: crate::config::pick(args.nodes, file.grid.as_ref().and_then(|g| g.nodes), 2048),
        common,
    };

    let leading = asymptotic::leading_winding(&params);
    let root = asymptotic::self_consistent_winding(&params)?;
    let used = match config.constant {
        ConstantChoice::Leading => leading,
        ConstantChoice::SelfConsistent => root,
    };
    let constants = asymptotic::constants_with_winding(&params, used)?;
    let density = asymptotic::density_on_default_grid(&params, &constants, config.nodes)?;

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
    let density_path = output::write_table(
        out,
        "P",
        "asymptotic",
        &config,
        &table,
        config.common.format,
    )?;

    let constants_path = output::write_report(
        out,
        "constants",
        &ConstantsReport {
            command: "asymptotic",
            config: &config,
            winding: WindingValues {
                leading,
                self_consistent_root: root,
                used,
            },
            mu: constants.drive,
            omega_sq: constants.omega_sq,
            airy_zero: constants.airy_zero,
            strip_width: constants.width,
            peak_offset: constants.offset,
            amplitude_sq: constants.amplitude_sq,
            gamma: constants.gamma,
        },
    )?;

    let deficit = asymptotic::winding_deficit_report(&params)?;
    let winding_path = output::write_report(
        out,
        "winding",
        &WindingReport {
            command: "asymptotic",
            config: &config,
            leading,
            root,
            deficit: DeficitValues {
                first_moment_measured: deficit.first_moment_measured,
                first_moment_closed: deficit.first_moment_closed,
                measured_coefficient: deficit.measured_coefficient,
                series_coefficient: deficit.series_coefficient,
                pi_scaled_coefficient: deficit.pi_scaled_coefficient,
                ratio_to_series: deficit.ratio_to_series,
            },
        },
    )?;

    println!(
        "mu = {}, C = {} ({:?}), strip width = {}",
        output::sig(constants.drive),
        output::sig(used),
        config.constant,
        output::sig(constants.width),
    );
    println!(
        "wrote {}, {}, {}",
        density_path.display(),
        constants_path.display(),
        winding_path.display()
    );
    Ok(())
}

//! `opconv` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "opconv", version, about = "Ortho-para hydrogen conversion toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Contact matrix element xi(Z, theta) and yield W over a Z range.
    XiSweep(XiSweepArgs),
    /// Quadrupole alignment factor from a table or the energy model.
    Alignment(AlignmentArgs),
    /// Equilibrium ortho fraction.
    Equilibrium(EquilibriumArgs),
    /// Rotational heat capacity in units of k_B.
    HeatCapacity(HeatCapacityArgs),
    /// Storage tank boil-off, or calibration of the rate constant.
    Tank(TankArgs),
    /// Filter then steric conversion of a population.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["density", "synthetic"])))]
pub struct XiSweepArgs {
    /// Cube file with the net spin density.
    #[arg(long)]
    pub density: Option<PathBuf>,
    /// Analytic density `KIND:A:R0` with KIND exponential or gaussian.
    #[arg(long)]
    pub synthetic: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    pub z_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub z_max: f64,
    #[arg(long, default_value_t = 26)]
    pub z_steps: usize,
    /// Comma-separated bond tilts in degrees.
    #[arg(long, default_value = "10,70", value_delimiter = ',')]
    pub theta: Vec<f64>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda_c: f64,
    /// H-H distance (angstrom).
    #[arg(long, default_value_t = opconv::density::DEFAULT_BOND_LENGTH)]
    pub bond_length: f64,
    /// Spin center `X,Y,Z` (angstrom).
    #[arg(long, default_value = "0,0,0", value_delimiter = ',', allow_negative_numbers = true)]
    pub center: Vec<f64>,
    /// Unit probe axis `X,Y,Z`.
    #[arg(long, default_value = "0,0,1", value_delimiter = ',', allow_negative_numbers = true)]
    pub axis: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct AlignmentArgs {
    /// CSV table with columns j,mj,etot_ev,d.
    #[arg(long, conflicts_with = "model", requires_all = ["j", "etot"])]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub j: Option<u32>,
    /// Total energy of the group (eV).
    #[arg(long)]
    pub etot: Option<f64>,
    /// Use the translational-energy model instead of a table.
    #[arg(long, requires = "et")]
    pub model: bool,
    /// Comma-separated translational energies (eV).
    #[arg(long, value_delimiter = ',')]
    pub et: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub vmin: f64,
    #[arg(long, default_value_t = 0.1)]
    pub width: f64,
    #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
    pub a_slow: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub a_fast: f64,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("temps").required(true).args(["temp_kelvin", "temp_range"])))]
pub struct EquilibriumArgs {
    #[arg(long)]
    pub temp_kelvin: Option<f64>,
    /// `LO:HI:STEPS`, inclusive.
    #[arg(long)]
    pub temp_range: Option<String>,
    #[command(flatten)]
    pub rotor: RotorArgs,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("temps").required(true).args(["temp_kelvin", "temp_range"])))]
pub struct HeatCapacityArgs {
    /// para, ortho, normal or equilibrium.
    #[arg(long)]
    pub species: String,
    #[arg(long)]
    pub temp_kelvin: Option<f64>,
    /// `LO:HI:STEPS`, inclusive.
    #[arg(long)]
    pub temp_range: Option<String>,
    #[command(flatten)]
    pub rotor: RotorArgs,
}

#[derive(Debug, Args)]
pub struct RotorArgs {
    /// Rotational constant B (meV).
    #[arg(long, default_value_t = 7.54)]
    pub rot_const: f64,
    /// Highest rotational level kept in the sums.
    #[arg(long, default_value_t = 20)]
    pub j_max: u32,
}

#[derive(Debug, Args)]
pub struct TankArgs {
    /// Initial ortho fraction.
    #[arg(long, default_value_t = 0.75, allow_negative_numbers = true)]
    pub x0: f64,
    /// Initial liquid amount (mol).
    #[arg(long, default_value_t = 1.0)]
    pub n0: f64,
    #[arg(long, default_value_t = 100.0)]
    pub hours: f64,
    #[arg(long, default_value_t = opconv::tank::DEFAULT_DT)]
    pub dt: f64,
    /// Kinetic order, 1 or 2.
    #[arg(long, default_value_t = 2)]
    pub order: u8,
    /// Rate constant k (1/h).
    #[arg(long, required_unless_present = "calibrate", allow_negative_numbers = true)]
    pub rate: Option<f64>,
    /// Solve for the rate constant instead of simulating.
    #[arg(long, conflicts_with = "rate", requires = "target_boiloff")]
    pub calibrate: bool,
    #[arg(long)]
    pub target_boiloff: Option<f64>,
    #[arg(long, default_value_t = 100.0)]
    pub at_hours: f64,
    /// Latent heat (kJ/mol).
    #[arg(long, default_value_t = opconv::tank::DEFAULT_LATENT_HEAT)]
    pub latent: f64,
    /// External heat leak (kJ/h).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub heat_leak: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub catalyst_gamma: f64,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// CSV population with columns j,mj,et_ev,weight.
    #[arg(long)]
    pub population: PathBuf,
    /// slow, fast or none.
    #[arg(long, default_value = "slow")]
    pub filter: String,
    #[arg(long)]
    pub steric_ratio: f64,
    /// Conversion rate of helicopter-like rotors (1/h).
    #[arg(long)]
    pub base_rate: f64,
    /// Residence time (h).
    #[arg(long)]
    pub dwell: f64,
    #[arg(long, default_value_t = 0.5)]
    pub vmin: f64,
    #[arg(long, default_value_t = 0.1)]
    pub width: f64,
    #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
    pub a_slow: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub a_fast: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::XiSweep(a) => commands::xi_sweep(a),
        Command::Alignment(a) => commands::alignment(a),
        Command::Equilibrium(a) => commands::equilibrium(a),
        Command::HeatCapacity(a) => commands::heat_capacity(a),
        Command::Tank(a) => commands::tank(a),
        Command::Pipeline(a) => commands::pipeline(a),
    };
    let rendered = match result {
        Ok(r) => r.render(cli.format),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, rendered).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(rendered.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| format!("cannot write output: {e}"))
        }
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

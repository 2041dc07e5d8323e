use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use opconv::alignment::{classify, dqf_alignment_model, quadrupole_alignment, AlignmentTable, FilterParams};
use opconv::density::cube::parse_cube;
use opconv::density::{synthetic_field, ProbeGeometry, ProfileKind, SpinDensityField};
use opconv::hyperfine::{find_extrema, linspace, sweep, HyperfineParams, OrthoPolicy};
use opconv::pipeline::{run_pipeline, ConversionParams, FilterMode, MoleculePopulation, StageReport};
use opconv::tank::{boiloff_fraction, calibrate_rate, simulate, KineticOrder, TankParams, TankState};
use opconv::thermo::{RotationalModel, Species};
use opconv::Error;
use serde_json::{json, Value};

use crate::output::{row, Config, Rendered};
use crate::{AlignmentArgs, EquilibriumArgs, HeatCapacityArgs, PipelineArgs, RotorArgs, TankArgs, XiSweepArgs};

#[derive(Debug)]
pub enum CmdError {
    /// Bad flag values; exit code 2.
    Usage(String),
    /// Failure while reading inputs or computing; exit code 1.
    Runtime(String),
}

impl CmdError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CmdError::Usage(_) => 2,
            CmdError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Usage(m) | CmdError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(msg) => CmdError::Usage(msg),
            Error::AlignmentUndefined | Error::ThetaNotInCurve(_) => CmdError::Usage(e.to_string()),
            other => CmdError::Runtime(other.to_string()),
        }
    }
}

type CmdResult = Result<Rendered, CmdError>;

fn usage(msg: impl Into<String>) -> CmdError {
    CmdError::Usage(msg.into())
}

fn open(path: &Path) -> Result<BufReader<File>, CmdError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CmdError::Runtime(format!("cannot open {}: {e}", path.display())))
}

fn vec3(values: &[f64], flag: &str) -> Result<[f64; 3], CmdError> {
    <[f64; 3]>::try_from(values).map_err(|_| usage(format!("--{flag} expects three comma-separated numbers")))
}

fn parse_synthetic(text: &str) -> Result<(ProfileKind, f64, f64), CmdError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [kind, a, r0] = parts.as_slice() else {
        return Err(usage(format!("--synthetic expects KIND:A:R0, got '{text}'")));
    };
    let kind: ProfileKind = kind.parse()?;
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("--synthetic: '{s}' is not a number")))
    };
    Ok((kind, num(a)?, num(r0)?))
}

/// Inclusive `LO:HI:STEPS` temperature grid.
fn parse_range(text: &str) -> Result<Vec<f64>, CmdError> {
    let bad = || usage(format!("--temp-range expects LO:HI:STEPS, got '{text}'"));
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(bad());
    };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n == 0 || !(hi >= lo) {
        return Err(usage(format!(
            "--temp-range needs HI >= LO and STEPS >= 1, got '{text}'"
        )));
    }
    Ok(linspace(lo, hi, n))
}

fn temperatures(single: Option<f64>, range: Option<&str>) -> Result<Vec<f64>, CmdError> {
    match (single, range) {
        (Some(t), None) => Ok(vec![t]),
        (None, Some(r)) => parse_range(r),
        _ => Err(usage("give exactly one of --temp-kelvin and --temp-range")),
    }
}

fn rotor(args: &RotorArgs, config: &mut Config) -> Result<RotationalModel<f64>, CmdError> {
    config.set("rot_const_mev", args.rot_const).set("j_max", args.j_max);
    Ok(RotationalModel::new(args.rot_const, args.j_max)?)
}

pub fn xi_sweep(args: &XiSweepArgs) -> CmdResult {
    let mut config = Config::new("xi-sweep");
    let field: SpinDensityField<f64> = match (&args.density, &args.synthetic) {
        (Some(path), None) => {
            config.set("density", path.display());
            let bytes =
                std::fs::read(path).map_err(|e| CmdError::Runtime(format!("cannot read {}: {e}", path.display())))?;
            parse_cube(&bytes).map_err(|e| CmdError::Runtime(format!("{}: {e}", path.display())))?
        }
        (None, Some(text)) => {
            let (kind, a, r0) = parse_synthetic(text)?;
            config.set("synthetic", text);
            synthetic_field(kind, a, r0, vec3(&args.center, "center")?)?
        }
        _ => return Err(usage("give exactly one of --density and --synthetic")),
    };
    let center = vec3(&args.center, "center")?;
    let axis = vec3(&args.axis, "axis")?;
    let norm = axis.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Err(usage("--axis must be nonzero"));
    }
    let axis = axis.map(|c| c / norm);
    let geom = ProbeGeometry::new(axis, center, args.bond_length, 0.0)?;
    let params = HyperfineParams::new(args.lambda_c, OrthoPolicy::Unpolarized)?;
    if args.z_steps < 2 {
        return Err(usage(format!("--z-steps must be at least 2, got {}", args.z_steps)));
    }
    let z = linspace(args.z_min, args.z_max, args.z_steps);
    let thetas: Vec<String> = args.theta.iter().map(|t| t.to_string()).collect();
    config
        .set("z_min", args.z_min)
        .set("z_max", args.z_max)
        .set("z_steps", args.z_steps)
        .set("theta_deg", thetas.join(";"))
        .set("lambda_c", args.lambda_c)
        .set("bond_length", args.bond_length)
        .set("center", format!("{};{};{}", center[0], center[1], center[2]))
        .set("axis", format!("{};{};{}", axis[0], axis[1], axis[2]));
    let curve = sweep(&field, &geom, &params, &z, &args.theta)?;
    let extrema: Vec<Value> = args
        .theta
        .iter()
        .map(|&t| Ok(json!({ "theta_deg": t, "extrema": find_extrema(&curve, t)? })))
        .collect::<Result<_, CmdError>>()?;
    Ok(Rendered {
        config,
        csv: curve.to_csv(),
        json: json!({ "curve": curve, "xi_extrema": extrema }),
    })
}

pub fn alignment(args: &AlignmentArgs) -> CmdResult {
    let mut config = Config::new("alignment");
    let filter = FilterParams::new(args.vmin, args.a_slow, args.a_fast, args.width)?;
    if let Some(path) = &args.table {
        let (j, etot) = match (args.j, args.etot) {
            (Some(j), Some(e)) => (j, e),
            _ => return Err(usage("--table needs --j and --etot")),
        };
        config.set("table", path.display()).set("j", j).set("etot_ev", etot);
        let table = AlignmentTable::<f64>::from_csv(open(path)?)?;
        let a = quadrupole_alignment(&table, j, etot)?;
        let character = classify(a);
        return Ok(Rendered {
            config,
            csv: format!("j,etot_ev,alignment,character\n{j},{},{character}\n", row(&[etot, a])),
            json: json!({ "j": j, "etot_ev": etot, "alignment": a, "character": character.to_string() }),
        });
    }
    if !args.model {
        return Err(usage("give either --table FILE --j N --etot EV or --model --et EV"));
    }
    if args.et.is_empty() {
        return Err(usage("--model needs at least one --et value"));
    }
    config
        .set("model", "logistic")
        .set("vmin_ev", args.vmin)
        .set("width_ev", args.width)
        .set("a_slow", args.a_slow)
        .set("a_fast", args.a_fast);
    let mut csv = String::from("et_ev,alignment,character\n");
    let mut rows = Vec::new();
    for &et in &args.et {
        if !(et >= 0.0) || !et.is_finite() {
            return Err(usage(format!("translational energy must be >= 0, got {et}")));
        }
        let a = dqf_alignment_model(et, &filter);
        let character = classify(a);
        csv.push_str(&format!("{},{character}\n", row(&[et, a])));
        rows.push(json!({ "et_ev": et, "alignment": a, "character": character.to_string() }));
    }
    Ok(Rendered {
        config,
        csv,
        json: Value::Array(rows),
    })
}

pub fn equilibrium(args: &EquilibriumArgs) -> CmdResult {
    let mut config = Config::new("equilibrium");
    let temps = temperatures(args.temp_kelvin, args.temp_range.as_deref())?;
    let model = rotor(&args.rotor, &mut config)?;
    let mut csv = String::from("t_k,x_ortho\n");
    let mut rows = Vec::new();
    for t in temps {
        let x = model.equilibrium_ortho_fraction(t)?;
        csv.push_str(&row(&[t, x]));
        csv.push('\n');
        rows.push(json!({ "t_k": t, "x_ortho": x }));
    }
    Ok(Rendered {
        config,
        csv,
        json: Value::Array(rows),
    })
}

pub fn heat_capacity(args: &HeatCapacityArgs) -> CmdResult {
    let mut config = Config::new("heat-capacity");
    let species: Species = args.species.parse()?;
    config.set("species", species);
    let temps = temperatures(args.temp_kelvin, args.temp_range.as_deref())?;
    let model = rotor(&args.rotor, &mut config)?;
    let mut csv = String::from("t_k,c_rot_over_kb\n");
    let mut rows = Vec::new();
    for t in temps {
        let c = model.rotational_heat_capacity(species, t)?;
        csv.push_str(&row(&[t, c]));
        csv.push('\n');
        rows.push(json!({ "t_k": t, "c_rot_over_kb": c }));
    }
    Ok(Rendered {
        config,
        csv,
        json: Value::Array(rows),
    })
}

fn tank_params(args: &TankArgs, rate: f64) -> Result<TankParams<f64>, CmdError> {
    let params = TankParams {
        order: KineticOrder::from_int(args.order)?,
        rate,
        latent: args.latent,
        heat_leak: args.heat_leak,
        catalyst_gamma: args.catalyst_gamma,
        ..TankParams::default()
    };
    params.validate()?;
    Ok(params)
}

pub fn tank(args: &TankArgs) -> CmdResult {
    let mut config = Config::new("tank");
    let state0 = TankState::new(args.n0, args.x0)?;
    let base = tank_params(args, 0.0)?;
    config
        .set("x0", args.x0)
        .set("n0_mol", args.n0)
        .set("order", args.order)
        .set("latent_kj_per_mol", args.latent)
        .set("conversion_heat_kj_per_mol", base.conversion_heat)
        .set("heat_leak_kj_per_h", args.heat_leak)
        .set("catalyst_gamma", args.catalyst_gamma)
        .set("dt_h", args.dt);
    if args.calibrate {
        let target = args
            .target_boiloff
            .ok_or_else(|| usage("--calibrate needs --target-boiloff"))?;
        config.set("target_boiloff", target).set("at_hours", args.at_hours);
        if args.n0 != 1.0 && args.heat_leak != 0.0 {
            return Err(usage("--calibrate with a heat leak requires --n0 1"));
        }
        let k = calibrate_rate(args.x0, target, args.at_hours, &base, args.dt)?;
        let traj = simulate(&state0, &base.with_rate(k), args.at_hours, args.dt)?;
        let achieved = boiloff_fraction(&traj)?;
        let end = traj.last().copied().ok_or(Error::EmptyTrajectory)?;
        return Ok(Rendered {
            config,
            csv: format!(
                "rate_per_h,boiloff,at_hours,x_ortho_final\n{}\n",
                row(&[k, achieved, args.at_hours, end.x_ortho])
            ),
            json: json!({ "rate_per_h": k, "boiloff": achieved, "at_hours": args.at_hours, "final": end }),
        });
    }
    let rate = args.rate.ok_or_else(|| usage("give --rate or --calibrate"))?;
    let params = tank_params(args, rate)?;
    config.set("rate_per_h", rate).set("hours", args.hours);
    let traj = simulate(&state0, &params, args.hours, args.dt)?;
    let boiloff = boiloff_fraction(&traj)?;
    let mut csv = String::from("t_h,n_mol,x_ortho\n");
    for s in &traj {
        csv.push_str(&row(&[s.t_h, s.n_mol, s.x_ortho]));
        csv.push('\n');
    }
    Ok(Rendered {
        config,
        csv,
        json: json!({ "boiloff": boiloff, "trajectory": traj }),
    })
}

fn stage_row(name: &str, s: &StageReport<f64>) -> String {
    format!(
        "{name},{}\n",
        row(&[
            s.input_weight,
            s.output_weight,
            s.unconverted_weight,
            s.mean_alignment,
            s.conversion_probability,
            s.enhancement,
        ])
    )
}

pub fn pipeline(args: &PipelineArgs) -> CmdResult {
    let mut config = Config::new("pipeline");
    let mode: FilterMode = args.filter.parse()?;
    let filter = FilterParams::new(args.vmin, args.a_slow, args.a_fast, args.width)?;
    let conv = ConversionParams::new(args.steric_ratio, args.base_rate, args.dwell)?;
    config
        .set("population", args.population.display())
        .set("filter", mode)
        .set("steric_ratio", args.steric_ratio)
        .set("base_rate_per_h", args.base_rate)
        .set("dwell_h", args.dwell)
        .set("vmin_ev", args.vmin)
        .set("width_ev", args.width)
        .set("a_slow", args.a_slow)
        .set("a_fast", args.a_fast);
    let pop = MoleculePopulation::<f64>::from_csv(open(&args.population)?)?;
    let report = run_pipeline(&pop, mode, &filter, &conv)?;
    let mut csv = String::from(
        "stage,input_weight,output_weight,unconverted_weight,mean_alignment,conversion_probability,enhancement\n",
    );
    csv.push_str(&stage_row("unfiltered", &report.unfiltered));
    csv.push_str(&stage_row("filtered", &report.filtered));
    Ok(Rendered {
        config,
        csv,
        json: serde_json::to_value(&report).map_err(|e| CmdError::Runtime(e.to_string()))?,
    })
}

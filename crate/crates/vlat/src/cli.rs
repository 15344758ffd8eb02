//! Command-line interface. Every command produces one JSON report plus a
//! verdict; `main` writes the report and turns the verdict into the exit
//! status.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use vlat_core::lattice::{
    build_subspace, carleson_integral_with, check_invariance, check_membership, make_member, validate_spec,
    CarlesonOptions, CarlesonReport, IdealSpec, InvarianceReport, MembershipReport, ValidationReport,
};
use vlat_core::inner::SingularVerdict;
use vlat_core::operators::{apply_tn, matrix_of, OperatorTag};
use vlat_core::series::{DynPoly, TaylorPoly};
use vlat_core::span::distance_to_span;
use vlat_core::{Mode, QComplex, C64};

use crate::json::{
    band_matrix_to_json, basis_to_json, ideal_from_json, ideal_to_json, num, series_as, series_from_json,
    series_list_as, series_to_json, JsonScalar,
};
use crate::random::{case_rng, random_poly, SpecBounds};
use crate::suites::{verify_identities, verify_lattice, verify_norms, LatticeConfig, RunConfig};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "vlat", version, about = "Exact and floating-point checks for shift-plus-Volterra operators on truncated Taylor series")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    /// Truncation degree budget.
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// `float` or `rational`.
    #[arg(long, global = true)]
    pub mode: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall time in suite reports (breaks byte-for-byte
    /// reproducibility).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Intertwining, inverse pair, iterated integral and `T_n` evaluation paths.
    VerifyIdentities {
        /// Perturb one matrix entry to check that the harness notices.
        #[arg(long)]
        corrupt_operator: bool,
        /// Use the zero polynomial for every case.
        #[arg(long)]
        zero_input: bool,
    },
    /// Norm inequalities with their explicit constants.
    VerifyNorms {
        /// Check a single series from this file instead of random ones.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        zero_input: bool,
    },
    /// Random ideal specs: membership, invariance and span distance.
    VerifyLattice {
        /// Cofactors per spec.
        #[arg(long, default_value_t = 5)]
        cofactors: usize,
    },
    #[command(subcommand)]
    Ideal(IdealCommand),
    #[command(subcommand)]
    Subspace(SubspaceCommand),
    #[command(subcommand)]
    Matrix(MatrixCommand),
}

#[derive(Debug, Subcommand)]
pub enum IdealCommand {
    /// Structural checks plus the log-integrability integral.
    Validate {
        spec: PathBuf,
        #[arg(long, default_value_t = 1 << 12)]
        quad_points: usize,
    },
    /// Members for the given cofactors, or for random ones.
    Generate {
        spec: PathBuf,
        #[arg(long)]
        cofactors: Option<PathBuf>,
        /// Number of random cofactors when no file is given.
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
    /// Membership of a series.
    Check {
        spec: PathBuf,
        #[arg(long)]
        series: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum SubspaceCommand {
    Build { spec: PathBuf, cofactors: PathBuf },
    CheckInvariance { spec: PathBuf, cofactors: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum MatrixCommand {
    /// Banded matrix of an operator on polynomials of degree < dim.
    Dump {
        /// `shift`, `volterra`, `riemann_liouville(n)`, `nth_derivative(n)` or `t_n(n)`.
        #[arg(long)]
        op: String,
        #[arg(long)]
        dim: usize,
    },
}

/// A report and whether it records a mathematical violation.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub violation: bool,
}

impl Outcome {
    fn pass(report: Value) -> Self {
        Self { report, violation: false }
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn read_spec(path: &Path) -> Result<IdealSpec, CliError> {
    ideal_from_json(&read_json(path)?)
}

fn parse_mode(mode: Option<&str>) -> Result<Option<Mode>, CliError> {
    mode.map(|m| m.parse().map_err(CliError::from)).transpose()
}

/// `--mode` if given, otherwise rational when every series in the file
/// declares it, otherwise float.
fn mode_for(explicit: Option<Mode>, series: &Value) -> Mode {
    explicit.unwrap_or_else(|| {
        let items = series.as_array().or_else(|| series.get("cofactors").and_then(Value::as_array));
        let rational = items.is_some_and(|a| !a.is_empty() && a.iter().all(|s| s.get("mode").and_then(Value::as_str) == Some("rational")));
        if rational {
            Mode::Rational
        } else {
            Mode::Float
        }
    })
}

impl Common {
    fn run_config(&self, base: RunConfig) -> Result<RunConfig, CliError> {
        Ok(RunConfig {
            seed: self.seed.unwrap_or(base.seed),
            trials: self.trials.unwrap_or(base.trials),
            n_max: self.n_max.unwrap_or(base.n_max),
            degree: self.degree.unwrap_or(base.degree),
            tol: self.tol.unwrap_or(base.tol),
            mode: parse_mode(self.mode.as_deref())?.unwrap_or(base.mode),
            ..base
        })
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let common = &cli.common;
    match &cli.command {
        Command::VerifyIdentities { corrupt_operator, zero_input } => {
            let cfg = common.run_config(RunConfig {
                corrupt_operator: *corrupt_operator,
                zero_input: *zero_input,
                ..RunConfig::default()
            })?;
            let r = verify_identities(&cfg)?;
            Ok(Outcome { report: r.to_json(common.timing), violation: !r.ok() })
        }
        Command::VerifyNorms { input, zero_input } => {
            let cfg = common.run_config(RunConfig {
                trials: 1000,
                n_max: 4,
                degree: 30,
                mode: Mode::Float,
                zero_input: *zero_input,
                ..RunConfig::default()
            })?;
            let input = input.as_deref().map(|p| series_as::<C64>(&read_json(p)?)).transpose()?;
            let r = verify_norms(&cfg, input.as_ref())?;
            Ok(Outcome { report: r.to_json(common.timing), violation: !r.ok() })
        }
        Command::VerifyLattice { cofactors } => {
            let cfg = common.run_config(RunConfig { trials: 50, ..RunConfig::default() })?;
            let mut lat = LatticeConfig { cofactors: *cofactors, ..LatticeConfig::default() };
            if let Some(n) = common.n_max {
                lat.bounds = SpecBounds { n_max: n, ..lat.bounds };
            }
            if let Some(t) = common.tol {
                lat.bounds.tol = t;
            }
            let r = verify_lattice(&cfg, &lat)?;
            Ok(Outcome { report: r.to_json(common.timing), violation: !r.ok() })
        }
        Command::Ideal(cmd) => run_ideal(common, cmd),
        Command::Subspace(cmd) => run_subspace(common, cmd),
        Command::Matrix(MatrixCommand::Dump { op, dim }) => {
            let tag: OperatorTag = op.parse()?;
            if *dim == 0 {
                return Err(CliError::Input("--dim must be at least 1".into()));
            }
            let report = match parse_mode(common.mode.as_deref())?.unwrap_or(Mode::Rational) {
                Mode::Rational => band_matrix_to_json(&matrix_of::<QComplex>(tag, *dim), &tag.to_string()),
                Mode::Float => band_matrix_to_json(&matrix_of::<C64>(tag, *dim), &tag.to_string()),
            };
            Ok(Outcome::pass(report))
        }
    }
}

pub fn validation_to_json(v: &ValidationReport) -> Value {
    json!({
        "nested": v.nested,
        "associated": v.associated,
        "isolated": v.isolated,
        "accumulation_vacuous": v.accumulation_vacuous,
        "notes": v.notes,
        "warnings": v.warnings,
    })
}

pub fn carleson_to_json(c: &CarlesonReport) -> Value {
    json!({
        "quad_points": c.quad_points,
        "value": num(c.value),
        "refined": num(c.refined),
        "convergence": num(c.convergence),
        "collisions": c.collisions,
        "floored": c.floored.iter().map(|&x| num(x)).collect::<Vec<_>>(),
        "verdict": c.verdict.as_str(),
        "advisory": true,
    })
}

pub fn membership_to_json(r: &MembershipReport) -> Value {
    let singular = match &r.cond_ii.singular {
        SingularVerdict::NotApplicable => json!({"label": "exact", "ok": true}),
        SingularVerdict::Heuristic { ok, norm_half, norm_full } => {
            json!({"label": "heuristic", "ok": ok, "norm_half": num(*norm_half), "norm_full": num(*norm_full)})
        }
    };
    let violation = r.cond_i_violation.map(|v| {
        let p = vlat_core::inner::boundary_point(v.theta);
        json!({
            "level": v.level,
            "theta": num(v.theta),
            "point": [num(p.re), num(p.im)],
            "derivative": v.derivative,
            "value": num(v.value),
        })
    });
    json!({
        "ok": r.ok(),
        "scale": num(r.scale),
        "cond_i": {
            "ok": r.cond_i,
            "worst": num(r.cond_i_worst),
            "exact": r.cond_i_exact,
            "counterexample": violation,
        },
        "cond_ii": {
            "ok": r.cond_ii.ok(),
            "blaschke_ok": r.cond_ii.blaschke_ok,
            "blaschke_worst": num(r.cond_ii.blaschke_worst),
            "singular": singular,
        },
        "in_sn2": {"ok": r.in_sn2, "change": num(r.in_sn2_change), "label": r.in_sn2_label},
        "in_zero_subalgebra": r.in_zero_subalgebra,
    })
}

fn invariance_to_json(r: &InvarianceReport) -> Value {
    json!({
        "max_rel_residual": num(r.max_rel_residual),
        "all_exact": r.all_exact,
        "all_members": r.all_members,
        "elements": r.elements.iter().map(|e| json!({
            "max_abs_residual": num(e.max_abs_residual),
            "max_rel_residual": num(e.max_rel_residual),
            "exact": e.exact,
            "shift_member": e.shift_member,
        })).collect::<Vec<_>>(),
    })
}

fn generate<S: JsonScalar>(spec: &IdealSpec, cofactors: &[TaylorPoly<S>]) -> Value {
    let members: Vec<Value> = cofactors
        .iter()
        .map(|q| json!({"cofactor": series_to_json(q), "member": series_to_json(&make_member(spec, q).member)}))
        .collect();
    json!({"spec": ideal_to_json(spec), "members": members})
}

fn random_cofactors<S: JsonScalar>(seed: u64, count: usize) -> Vec<TaylorPoly<S>> {
    (0..count).map(|i| random_poly(&mut case_rng(seed, i as u64), 3)).collect()
}

fn run_ideal(common: &Common, cmd: &IdealCommand) -> Result<Outcome, CliError> {
    match cmd {
        IdealCommand::Validate { spec, quad_points } => {
            let spec = read_spec(spec)?;
            let validation = validate_spec(&spec)?;
            let carleson = carleson_integral_with(&spec, *quad_points, &CarlesonOptions::default());
            // A divergent verdict is advisory and does not fail the command.
            Ok(Outcome::pass(json!({
                "spec": ideal_to_json(&spec),
                "valid": true,
                "validation": validation_to_json(&validation),
                "carleson": carleson_to_json(&carleson),
            })))
        }
        IdealCommand::Generate { spec, cofactors, count } => {
            let spec = read_spec(spec)?;
            let explicit = parse_mode(common.mode.as_deref())?;
            let report = match cofactors {
                Some(path) => {
                    let v = read_json(path)?;
                    match mode_for(explicit, &v) {
                        Mode::Float => generate(&spec, &non_empty(series_list_as::<C64>(&v)?)?),
                        Mode::Rational => generate(&spec, &non_empty(series_list_as::<QComplex>(&v)?)?),
                    }
                }
                None => {
                    let seed = common.seed.unwrap_or(42);
                    match explicit.unwrap_or(Mode::Float) {
                        Mode::Float => generate(&spec, &random_cofactors::<C64>(seed, *count)),
                        Mode::Rational => generate(&spec, &random_cofactors::<QComplex>(seed, *count)),
                    }
                }
            };
            Ok(Outcome::pass(report))
        }
        IdealCommand::Check { spec, series } => {
            let spec = read_spec(spec)?;
            let f = series_from_json(&read_json(series)?)?;
            let r = match &f {
                DynPoly::Float(p) => check_membership(p, &spec)?,
                DynPoly::Rational(p) => check_membership(p, &spec)?,
            };
            let mut report = membership_to_json(&r);
            report["mode"] = json!(f.mode().as_str());
            Ok(Outcome { violation: !r.ok(), report })
        }
    }
}

fn non_empty<T>(v: Vec<T>) -> Result<Vec<T>, CliError> {
    if v.is_empty() {
        Err(vlat_core::Error::EmptyCofactors.into())
    } else {
        Ok(v)
    }
}

/// Relative tolerance for the float invariance identity.
pub const INVARIANCE_TOL: f64 = 1e-10;

fn invariance<S: JsonScalar>(spec: &IdealSpec, cofactors: &[TaylorPoly<S>], tol: f64) -> Result<Outcome, CliError> {
    let basis = build_subspace(spec, cofactors)?;
    let inv = check_invariance(&basis)?;
    let float_elements: Vec<_> = basis.elements.iter().map(TaylorPoly::to_float).collect();
    let mut enlarged = float_elements.clone();
    enlarged.extend(basis.pushforwards().iter().map(TaylorPoly::to_float));
    let distances: Vec<_> = float_elements.iter().map(|f| distance_to_span(&apply_tn(f, spec.n()), &enlarged)).collect();
    let max_distance = distances.iter().map(|d| d.distance).fold(0.0, f64::max);
    let max_scaled = distances.iter().map(|d| d.scaled_distance).fold(0.0, f64::max);
    let ok = inv.ok(S::MODE, tol) && max_scaled <= spec.tol();
    let mut report = invariance_to_json(&inv);
    report["mode"] = json!(S::MODE.as_str());
    report["tol"] = num(tol);
    report["max_distance"] = num(max_distance);
    report["max_scaled_distance"] = num(max_scaled);
    report["distance_tol"] = num(spec.tol());
    report["gram_condition"] = num(distances.iter().map(|d| d.gram_condition).fold(0.0, f64::max));
    report["ok"] = json!(ok);
    Ok(Outcome { report, violation: !ok })
}

fn run_subspace(common: &Common, cmd: &SubspaceCommand) -> Result<Outcome, CliError> {
    let explicit = parse_mode(common.mode.as_deref())?;
    match cmd {
        SubspaceCommand::Build { spec, cofactors } => {
            let spec = read_spec(spec)?;
            let v = read_json(cofactors)?;
            let report = match mode_for(explicit, &v) {
                Mode::Float => basis_to_json(&build_subspace(&spec, &series_list_as::<C64>(&v)?)?),
                Mode::Rational => basis_to_json(&build_subspace(&spec, &series_list_as::<QComplex>(&v)?)?),
            };
            Ok(Outcome::pass(report))
        }
        SubspaceCommand::CheckInvariance { spec, cofactors } => {
            let spec = read_spec(spec)?;
            let v = read_json(cofactors)?;
            let tol = common.tol.unwrap_or(INVARIANCE_TOL);
            match mode_for(explicit, &v) {
                Mode::Float => invariance(&spec, &series_list_as::<C64>(&v)?, tol),
                Mode::Rational => invariance(&spec, &series_list_as::<QComplex>(&v)?, tol),
            }
        }
    }
}

//! Randomized verification suites. Cases run in parallel, each on its own
//! RNG stream, and are reported in case order.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};
use vlat_core::lattice::{build_subspace, check_invariance, check_membership, validate_spec};
use vlat_core::operators::{
    apply_nth_derivative, apply_riemann_liouville, apply_tn, apply_tn_weighted, iterated_integral, matrix_of,
    verify_intertwining, OperatorTag,
};
use vlat_core::series::{FloatPoly, Keep, RationalPoly, TaylorPoly};
use vlat_core::spaces::{
    check_derivative_nesting, check_nesting, check_pointwise_bound, check_submultiplicative, InequalityReport,
};
use vlat_core::span::distance_to_span;
use vlat_core::{Mode, QComplex, Scalar, C64};

use crate::json::{digest, ideal_to_json, num, series_to_json, JsonScalar};
use crate::random::{case_rng, random_ideal_spec, random_poly, SpecBounds};
use crate::CliError;

/// Boundary grid for the sup-norm estimate.
pub const SUP_GRID: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub trials: usize,
    pub n_max: usize,
    /// Truncation budget; random polynomials have degree at most
    /// `degree − n_max` in the identity suite and `degree` elsewhere.
    pub degree: usize,
    pub tol: f64,
    pub mode: Mode,
    /// Perturb one entry of the `T_n` matrix (harness self-test).
    pub corrupt_operator: bool,
    /// Replace every random input by zero.
    pub zero_input: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: 200,
            n_max: 5,
            degree: 45,
            tol: 1e-12,
            mode: Mode::Rational,
            corrupt_operator: false,
            zero_input: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials == 0 {
            return Err(CliError::Input("--trials must be at least 1".into()));
        }
        if self.n_max == 0 {
            return Err(CliError::Input("--n-max must be at least 1".into()));
        }
        if self.degree < self.n_max + 2 {
            return Err(CliError::Input(format!(
                "--degree {} must be at least n_max + 2 = {}",
                self.degree,
                self.n_max + 2
            )));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(CliError::Input("--tol must be a non-negative number".into()));
        }
        Ok(())
    }

    fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "trials": self.trials,
            "n_max": self.n_max,
            "degree": self.degree,
            "tol": num(self.tol),
            "mode": self.mode.as_str(),
            "corrupt_operator": self.corrupt_operator,
            "zero_input": self.zero_input,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Case {
    pub case: usize,
    pub check: String,
    pub n: usize,
    pub digest: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
    /// Skipped because the input makes the check vacuous.
    pub vacuous: bool,
}

impl Case {
    fn to_json(&self) -> Value {
        let mut v = json!({
            "case": self.case,
            "check": self.check,
            "n": self.n,
            "digest": self.digest,
            "lhs": num(self.lhs),
            "rhs": num(self.rhs),
            "ok": self.ok,
        });
        if self.vacuous {
            v["vacuous"] = Value::Bool(true);
        }
        v
    }

    /// `lhs / rhs`, or 0 when both vanish.
    pub fn ratio(&self) -> f64 {
        if self.rhs > 0.0 {
            self.lhs / self.rhs
        } else if self.lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub config: Value,
    pub cases: Vec<Case>,
    pub failures: usize,
    /// Per-check summary: constant used, worst ratio or residual.
    pub summary: BTreeMap<String, Value>,
    pub wall_time: f64,
}

impl SuiteReport {
    fn new(suite: &'static str, config: Value, cases: Vec<Case>, summary: BTreeMap<String, Value>, start: Instant) -> Self {
        let failures = cases.iter().filter(|c| !c.ok).count();
        Self { suite, config, cases, failures, summary, wall_time: start.elapsed().as_secs_f64() }
    }

    pub fn ok(&self) -> bool {
        self.failures == 0
    }

    /// Wall time is left out unless asked for, so reports are reproducible
    /// byte for byte.
    pub fn to_json(&self, timing: bool) -> Value {
        let mut v = json!({
            "suite": self.suite,
            "config": self.config,
            "cases": self.cases.iter().map(Case::to_json).collect::<Vec<_>>(),
            "failures": self.failures,
            "summary": self.summary,
        });
        if timing {
            v["wall_time"] = num(self.wall_time);
        }
        v
    }

    /// Worst `lhs` among cases with the given check name.
    pub fn worst(&self, check: &str) -> f64 {
        self.cases.iter().filter(|c| c.check == check).map(|c| c.lhs).fold(0.0, f64::max)
    }

    pub fn count(&self, check: &str) -> usize {
        self.cases.iter().filter(|c| c.check == check).count()
    }

    pub fn failures_of(&self, check: &str) -> usize {
        self.cases.iter().filter(|c| c.check == check && !c.ok).count()
    }
}

fn residual_case<S: Scalar>(case: usize, check: &str, n: usize, digest: &str, lhs: &TaylorPoly<S>, rhs: &TaylorPoly<S>, tol: f64) -> Case {
    let abs = lhs.max_abs_diff(rhs);
    let (residual, ok) = match S::MODE {
        Mode::Rational => (abs, lhs == rhs),
        Mode::Float => {
            let scale = lhs.max_abs_coeff().max(rhs.max_abs_coeff());
            let rel = if scale > 0.0 { abs / scale } else { abs };
            (rel, rel <= tol)
        }
    };
    Case {
        case,
        check: check.into(),
        n,
        digest: digest.into(),
        lhs: residual,
        rhs: if S::MODE == Mode::Rational { 0.0 } else { tol },
        ok,
        vacuous: false,
    }
}

fn identity_cases<S: JsonScalar>(cfg: &RunConfig, case: usize) -> Vec<Case> {
    let f: TaylorPoly<S> = if cfg.zero_input {
        TaylorPoly::zero()
    } else {
        random_poly(&mut case_rng(cfg.seed, case as u64), cfg.degree - cfg.n_max)
    };
    let d = digest(&series_to_json(&f));
    let mut out = Vec::new();
    for n in 1..=cfg.n_max {
        let r = verify_intertwining(n, &f);
        out.push(residual_case(case, "intertwining", n, &d, &r.lhs, &r.rhs, cfg.tol));

        let left = apply_nth_derivative(&apply_riemann_liouville(&f, n), n);
        out.push(residual_case(case, "inverse_left", n, &d, &left, &f, cfg.tol));
        // V_n D^n is the identity only on series vanishing to order n.
        let shifted = f.multiply(&TaylorPoly::monomial(n, S::one()), Keep::Full);
        let right = apply_riemann_liouville(&apply_nth_derivative(&shifted, n), n);
        out.push(residual_case(case, "inverse_right", n, &d, &right, &shifted, cfg.tol));

        out.push(residual_case(case, "iterated_integral", n, &d, &iterated_integral(&f, n), &apply_riemann_liouville(&f, n), cfg.tol));

        let direct = apply_tn(&f, n);
        out.push(residual_case(case, "tn_weighted_shift", n, &d, &apply_tn_weighted(&f, n), &direct, cfg.tol));
        let dim = (f.coeffs().len() + 1).max(2);
        let mut m = matrix_of::<S>(OperatorTag::Tn(n), dim);
        if cfg.corrupt_operator {
            if let Some(e) = m.entry_mut(1, 0) {
                *e = e.clone() + S::one();
            }
        }
        let via_matrix = TaylorPoly::new(m.apply(f.truncate(dim - 1).coeffs()));
        out.push(residual_case(case, "tn_matrix", n, &d, &via_matrix, &direct, cfg.tol));
    }
    out
}

fn residual_summary(cases: &[Case]) -> BTreeMap<String, Value> {
    let mut summary: BTreeMap<String, (f64, usize, usize)> = BTreeMap::new();
    for c in cases {
        let e = summary.entry(c.check.clone()).or_insert((0.0, 0, 0));
        e.0 = e.0.max(c.lhs);
        e.1 += 1;
        e.2 += usize::from(!c.ok);
    }
    summary
        .into_iter()
        .map(|(k, (worst, count, failures))| (k, json!({"worst_residual": num(worst), "cases": count, "failures": failures})))
        .collect()
}

/// Intertwining, inverse pair, iterated integral and the three `T_n`
/// evaluation paths over `trials` random polynomials and `n = 1..=n_max`.
pub fn verify_identities(cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let cases: Vec<Case> = match cfg.mode {
        Mode::Rational => (0..cfg.trials).into_par_iter().flat_map_iter(|i| identity_cases::<QComplex>(cfg, i)).collect(),
        Mode::Float => (0..cfg.trials).into_par_iter().flat_map_iter(|i| identity_cases::<C64>(cfg, i)).collect(),
    };
    let summary = residual_summary(&cases);
    Ok(SuiteReport::new("verify-identities", cfg.to_json(), cases, summary, start))
}

fn inequality_case(case: usize, digest: &str, r: &InequalityReport) -> Case {
    Case { case, check: r.check.into(), n: r.n, digest: digest.into(), lhs: r.lhs, rhs: r.rhs, ok: r.ok, vacuous: false }
}

fn norm_cases(cfg: &RunConfig, case: usize, input: Option<&FloatPoly>) -> Vec<Case> {
    let (f, g) = match input {
        Some(p) => (p.clone(), p.clone()),
        None if cfg.zero_input => (FloatPoly::zero(), FloatPoly::zero()),
        None => {
            let mut rng = case_rng(cfg.seed, case as u64);
            let f: FloatPoly = random_poly(&mut rng, cfg.degree);
            let g: FloatPoly = random_poly(&mut rng, cfg.degree);
            (f, g)
        }
    };
    let d = digest(&json!([series_to_json(&f), series_to_json(&g)]));
    if f.is_zero() || g.is_zero() {
        return vec![Case { case, check: "vacuous".into(), n: 0, digest: d, lhs: 0.0, rhs: 0.0, ok: true, vacuous: true }];
    }
    let mut out = vec![inequality_case(case, &d, &check_pointwise_bound(&f, SUP_GRID))];
    out.push(inequality_case(case, &d, &check_submultiplicative(&f, &g, 1).inequality));
    for k in 1..=cfg.n_max {
        out.push(inequality_case(case, &d, &check_nesting(&f, k)));
        out.push(inequality_case(case, &d, &check_derivative_nesting(&f, k)));
        if k > 1 {
            out.push(inequality_case(case, &d, &check_submultiplicative(&f, &g, k).inequality));
        }
    }
    out
}

fn ratio_summary(cases: &[Case], constants: &BTreeMap<String, f64>) -> BTreeMap<String, Value> {
    let mut summary: BTreeMap<String, (f64, usize, usize)> = BTreeMap::new();
    for c in cases.iter().filter(|c| !c.vacuous) {
        let e = summary.entry(format!("{}[{}]", c.check, c.n)).or_insert((0.0, 0, 0));
        e.0 = e.0.max(c.ratio());
        e.1 += 1;
        e.2 += usize::from(!c.ok);
    }
    summary
        .into_iter()
        .map(|(k, (worst, count, failures))| {
            let constant = constants.get(&k).copied().unwrap_or(f64::NAN);
            (k, json!({"constant": num(constant), "worst_ratio": num(worst), "cases": count, "failures": failures}))
        })
        .collect()
}

/// Embedding, nesting, derivative nesting and submultiplicativity over
/// random pairs (or a single supplied input). Float mode only.
pub fn verify_norms(cfg: &RunConfig, input: Option<&FloatPoly>) -> Result<SuiteReport, CliError> {
    cfg.validate()?;
    if cfg.mode != Mode::Float {
        return Err(CliError::Input("verify-norms runs in float mode only".into()));
    }
    let start = Instant::now();
    let trials = if input.is_some() { 1 } else { cfg.trials };
    let cases: Vec<Case> = (0..trials).into_par_iter().flat_map_iter(|i| norm_cases(cfg, i, input)).collect();
    let mut constants = BTreeMap::new();
    constants.insert("pointwise_bound[1]".to_string(), 2.0);
    for k in 1..=cfg.n_max {
        constants.insert(format!("nesting[{k}]"), vlat_core::spaces::nesting_constant(k));
        constants.insert(format!("derivative_nesting[{k}]"), (vlat_core::spaces::derivative_constant(k) + 1.0).sqrt());
        constants.insert(format!("submultiplicative[{k}]"), vlat_core::spaces::submultiplicative_constant(k));
    }
    let summary = ratio_summary(&cases, &constants);
    Ok(SuiteReport::new("verify-norms", cfg.to_json(), cases, summary, start))
}

/// Settings for [`verify_lattice`] beyond the run config.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeConfig {
    pub cofactors: usize,
    pub cofactor_degree: usize,
    pub bounds: SpecBounds,
    /// Relative tolerance for the float invariance identity.
    pub invariance_tol: f64,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self { cofactors: 5, cofactor_degree: 3, bounds: SpecBounds::default(), invariance_tol: 1e-10 }
    }
}

fn lattice_cases(cfg: &RunConfig, lat: &LatticeConfig, case: usize) -> Result<Vec<Case>, CliError> {
    let mut rng = case_rng(cfg.seed, case as u64);
    let spec = random_ideal_spec(&mut rng, &lat.bounds);
    let rational: Vec<RationalPoly> = (0..lat.cofactors).map(|_| random_poly(&mut rng, lat.cofactor_degree)).collect();
    let float: Vec<FloatPoly> = rational.iter().map(|q| q.to_float()).collect();
    let d = digest(&json!({"spec": ideal_to_json(&spec), "cofactors": rational.iter().map(series_to_json).collect::<Vec<_>>()}));
    let tol = spec.tol();
    let n = spec.n();
    let mk = |check: &str, lhs: f64, rhs: f64, ok: bool| Case {
        case,
        check: check.into(),
        n,
        digest: d.clone(),
        lhs,
        rhs,
        ok,
        vacuous: false,
    };
    let mut out = Vec::new();
    out.push(mk("validate", 0.0, 0.0, validate_spec(&spec).is_ok()));

    let basis = build_subspace(&spec, &float)?;
    for g in &basis.pre_images {
        let r = check_membership(g, &spec)?;
        let worst = r.cond_i_worst.max(r.cond_ii.blaschke_worst).max(r.in_sn2_change);
        out.push(mk("membership", worst, tol, r.ok()));
    }
    let inv = check_invariance(&basis)?;
    out.push(mk("invariance_float", inv.max_rel_residual, lat.invariance_tol, inv.ok(Mode::Float, lat.invariance_tol)));
    if spec.inner().atoms().is_empty() {
        let exact = check_invariance(&build_subspace(&spec, &rational)?)?;
        out.push(mk("invariance_exact", if exact.all_exact { 0.0 } else { exact.max_rel_residual.max(f64::MIN_POSITIVE) }, 0.0, exact.ok(Mode::Rational, 0.0)));
    }
    let mut enlarged = basis.elements.clone();
    enlarged.extend(basis.pushforwards());
    for f in &basis.elements {
        let dist = distance_to_span(&apply_tn(f, n), &enlarged);
        out.push(mk("span_distance", dist.scaled_distance, tol, dist.scaled_distance <= tol));
    }
    Ok(out)
}

/// Random validated ideal specs, `lat.cofactors` members each: membership,
/// invariance (exact for atom-free specs), and span distance of `T_n f`.
pub fn verify_lattice(cfg: &RunConfig, lat: &LatticeConfig) -> Result<SuiteReport, CliError> {
    if cfg.trials == 0 || lat.cofactors == 0 {
        return Err(CliError::Input("--trials and --cofactors must be at least 1".into()));
    }
    let start = Instant::now();
    let per_case: Vec<Vec<Case>> =
        (0..cfg.trials).into_par_iter().map(|i| lattice_cases(cfg, lat, i)).collect::<Result<_, _>>()?;
    let cases: Vec<Case> = per_case.into_iter().flatten().collect();
    let summary = residual_summary(&cases);
    let mut config = cfg.to_json();
    config["cofactors"] = json!(lat.cofactors);
    config["cofactor_degree"] = json!(lat.cofactor_degree);
    config["n_max"] = json!(lat.bounds.n_max);
    config["max_radius"] = num(lat.bounds.max_radius);
    config["max_mass"] = num(lat.bounds.max_mass);
    config["invariance_tol"] = num(lat.invariance_tol);
    Ok(SuiteReport::new("verify-lattice", config, cases, summary, start))
}

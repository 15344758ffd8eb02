//! Ideal data `I{G; K_0, …, K_{n−1}}` and the invariant subspaces of `T_n`
//! built from them.
//!
//! An ideal is described by an inner function `G` and nested finite sets of
//! boundary angles `K_0 ⊇ K_1 ⊇ … ⊇ K_{n−1}`; its members vanish to order
//! `i + 1` on `K_i` and have inner part divisible by `G`. The subspaces of
//! `T_n` are `{g^{(n)} : g ∈ I ∩ ₀S_n²}`. Here ideals are sampled through
//! generated members `G · Π(z − ζ)^{d(ζ)} · z^n · q` rather than
//! represented as closed sets.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::inner::{
    angle_distance, apply_blaschke_factors, boundary_point, canonical_angle, divides_inner_part, singular_series,
    DivisibilityReport, InnerSpec,
};
use crate::operators::{apply_nth_derivative, apply_shift, apply_tn, relative};
use crate::scalar::{Mode, Scalar, C64};
use crate::series::{FloatPoly, Keep, TaylorPoly};
use crate::spaces::{default_zero_tol, in_zero_subalgebra, sn_norm};
use crate::{Error, Result};

/// Angles closer than this are the same boundary point.
pub const ANGLE_TOL: f64 = 1e-12;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Minimum quadrature size for [`carleson_integral`].
pub const MIN_QUAD_POINTS: usize = 256;

/// Lowest truncation degree used for the singular-divisibility check.
pub const SINGULAR_CHECK_DEGREE: usize = 64;

/// Nested finite boundary sets `K_0 ⊇ K_1 ⊇ … ⊇ K_{n−1}` of canonical
/// angles. Inclusion is non-strict.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroChain {
    sets: Vec<Vec<f64>>,
}

fn contains_angle(set: &[f64], theta: f64) -> bool {
    set.iter().any(|&t| angle_distance(t, theta) <= ANGLE_TOL)
}

impl ZeroChain {
    /// Canonicalizes, deduplicates and sorts each set, then checks nesting.
    pub fn new(sets: Vec<Vec<f64>>) -> Result<Self> {
        let mut canon: Vec<Vec<f64>> = Vec::with_capacity(sets.len());
        for set in sets {
            let mut out: Vec<f64> = Vec::with_capacity(set.len());
            for theta in set {
                if !theta.is_finite() {
                    return Err(Error::BadAngle);
                }
                let t = canonical_angle(theta);
                if !contains_angle(&out, t) {
                    out.push(t);
                }
            }
            out.sort_by(f64::total_cmp);
            canon.push(out);
        }
        let chain = Self { sets: canon };
        chain.check_nesting()?;
        Ok(chain)
    }

    /// `n` empty sets.
    pub fn empty(n: usize) -> Self {
        Self { sets: vec![Vec::new(); n] }
    }

    pub fn check_nesting(&self) -> Result<()> {
        for i in 1..self.sets.len() {
            for &t in &self.sets[i] {
                if !contains_angle(&self.sets[i - 1], t) {
                    return Err(Error::NestingViolated { outer: i - 1, inner: i, angle: t });
                }
            }
        }
        Ok(())
    }

    /// Number of sets.
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.iter().all(|s| s.is_empty())
    }

    pub fn sets(&self) -> &[Vec<f64>] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &[f64] {
        self.sets.get(i).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `d(ζ) = 1 + max{i : ζ ∈ K_i}`, or 0 when `ζ ∉ K_0`.
    pub fn order_at(&self, theta: f64) -> usize {
        self.sets.iter().take_while(|s| contains_angle(s, theta)).count()
    }

    /// Points of `K_0` with their vanishing orders.
    pub fn points(&self) -> Vec<(f64, usize)> {
        self.set(0).iter().map(|&t| (t, self.order_at(t))).collect()
    }
}

/// Data of the ideal `I{G; K_0, …, K_{n−1}}` plus numerical settings.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealSpec {
    n: usize,
    inner: InnerSpec,
    chain: ZeroChain,
    trunc_degree: usize,
    tol: f64,
    atom_order: usize,
}

impl IdealSpec {
    /// Structural checks only; see [`validate_spec`] for the rest. An empty
    /// chain stands for `n` empty sets.
    pub fn new(n: usize, inner: InnerSpec, chain: ZeroChain, trunc_degree: usize, tol: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroOrder);
        }
        let chain = if chain.is_empty() { ZeroChain::empty(n) } else { chain };
        if chain.len() != n {
            return Err(Error::ChainLength { expected: n, got: chain.len() });
        }
        Ok(Self { n, inner, chain, trunc_degree, tol, atom_order: default_atom_order(n) })
    }

    /// `G = 1`, all `K_i` empty.
    pub fn trivial(n: usize) -> Result<Self> {
        Self::new(n, InnerSpec::trivial(), ZeroChain::empty(n), 64, DEFAULT_TOL)
    }

    /// Order of the boundary factor paired with each singular atom.
    pub fn with_atom_order(mut self, order: usize) -> Self {
        self.atom_order = order.max(self.n);
        self
    }

    pub fn with_trunc_degree(mut self, trunc_degree: usize) -> Self {
        self.trunc_degree = trunc_degree;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn inner(&self) -> &InnerSpec {
        &self.inner
    }

    pub fn chain(&self) -> &ZeroChain {
        &self.chain
    }

    pub fn trunc_degree(&self) -> usize {
        self.trunc_degree
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn atom_order(&self) -> usize {
        self.atom_order
    }

    /// Truncation used for the inner factor: doubled when atoms are present.
    pub fn working_trunc_degree(&self) -> usize {
        if self.inner.atoms().is_empty() {
            self.trunc_degree
        } else {
            2 * self.trunc_degree
        }
    }

    fn is_atom_angle(&self, theta: f64) -> bool {
        self.inner.atoms().iter().any(|a| angle_distance(a.theta, theta) <= ANGLE_TOL)
    }

    /// Degree of the exact polynomial part of a member with `q = 1`.
    fn polynomial_degree(&self) -> usize {
        let boundary: usize = self.chain.points().iter().map(|&(_, d)| d).sum();
        boundary + self.atom_order * self.inner.atoms().len() + self.inner.total_multiplicity() as usize + self.n
    }
}

/// Default order of the boundary factor paired with an atom.
pub fn default_atom_order(n: usize) -> usize {
    2 * n + 5
}

/// Truncation degree at which the geometric tails of the Blaschke series
/// are negligible at tolerance `tol` for `S_n²` checks: the smallest
/// `N ≥ G.default_trunc_degree()` (in steps of 16) with
/// `(N/2)^{2(n+m−1)} r^N ≤ 10⁻³ tol`, `r` the largest zero modulus and `m`
/// the largest multiplicity.
pub fn suggested_trunc_degree(inner: &InnerSpec, n: usize, tol: f64) -> usize {
    let mut big_n = inner.default_trunc_degree();
    let r = inner.blaschke().iter().map(|z| z.a.norm()).fold(0.0, f64::max);
    if r == 0.0 {
        return big_n;
    }
    let m = inner.blaschke().iter().map(|z| z.multiplicity).max().unwrap_or(1) as f64;
    let target = libm::log(1e-3 * tol);
    let power = 2.0 * (n as f64 + m - 1.0);
    let log_r = libm::log(r);
    while power * libm::log(big_n as f64 / 2.0) + big_n as f64 * log_r > target && big_n < 1 << 16 {
        big_n += 16;
    }
    big_n
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub nested: bool,
    pub associated: bool,
    /// `K_0 ∖ K_{n−1}` is isolated: automatic for finite sets.
    pub isolated: bool,
    /// The Blaschke zeros accumulate only on `K_{n−1}`: vacuous for finitely
    /// many zeros.
    pub accumulation_vacuous: bool,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
}

/// Nesting, atom/`K_{n−1}` association and the facts that hold
/// automatically for finite data.
pub fn validate_spec(spec: &IdealSpec) -> Result<ValidationReport> {
    spec.chain.check_nesting()?;
    let last = spec.chain.set(spec.n - 1);
    for atom in spec.inner.atoms() {
        if !contains_angle(last, atom.theta) {
            return Err(Error::AtomOutsideKernel(atom.theta));
        }
    }
    let notes = vec![
        String::from("finite boundary sets: K_0 \\ K_(n-1) is isolated"),
        String::from("finitely many Blaschke zeros: accumulation condition is vacuous"),
        String::from("finite sets have arc-length measure zero: the ideal is not forced to be zero"),
    ];
    let mut warnings = spec.inner.warnings();
    if spec.trunc_degree < spec.inner.default_trunc_degree() {
        warnings.push(format!(
            "trunc_degree {} is below the default {} for this inner function",
            spec.trunc_degree,
            spec.inner.default_trunc_degree()
        ));
    }
    Ok(ValidationReport { nested: true, associated: true, isolated: true, accumulation_vacuous: true, notes, warnings })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CarlesonOptions {
    /// Decrease of the floored integral per grid doubling that counts as a
    /// drop.
    pub drop_threshold: f64,
    /// Grid size at which the divergence detector starts.
    pub detector_base: usize,
    /// Number of doublings examined by the detector.
    pub doublings: usize,
}

impl Default for CarlesonOptions {
    fn default() -> Self {
        Self { drop_threshold: 0.5, detector_base: MIN_QUAD_POINTS, doublings: 3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CarlesonVerdict {
    Finite,
    /// Advisory: the floored integral kept dropping under refinement.
    Divergent,
}

impl CarlesonVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            CarlesonVerdict::Finite => "finite",
            CarlesonVerdict::Divergent => "divergent",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CarlesonReport {
    pub quad_points: usize,
    /// `∫ log ρ |dz|` on `quad_points` nodes.
    pub value: f64,
    /// The same on twice as many nodes.
    pub refined: f64,
    /// `|refined − value|`.
    pub convergence: f64,
    /// Nodes with `ρ < 1e−14` on the base grid.
    pub collisions: usize,
    /// Floored integrals at the detector levels.
    pub floored: Vec<f64>,
    pub verdict: CarlesonVerdict,
}

struct DistanceSet {
    points: Vec<C64>,
}

impl DistanceSet {
    fn new(spec: &IdealSpec) -> Self {
        let mut points: Vec<C64> = spec.chain.set(0).iter().map(|&t| boundary_point(t)).collect();
        points.extend(spec.inner.blaschke().iter().map(|z| z.a));
        Self { points }
    }

    fn rho(&self, z: C64) -> f64 {
        self.points.iter().map(|p| (z - p).norm()).fold(f64::INFINITY, f64::min)
    }

    /// Trapezoid rule for `∫ log ρ dθ`. A node on a boundary point gets the
    /// cell integral `h (log(h/2) − 1)` of `log|t|` instead.
    fn integral(&self, m: usize) -> (f64, usize) {
        if self.points.is_empty() {
            return (0.0, 0);
        }
        let h = TAU / m as f64;
        let mut sum = 0.0;
        let mut collisions = 0;
        for j in 0..m {
            let rho = self.rho(boundary_point(h * j as f64));
            if rho < 1e-14 {
                collisions += 1;
                sum += h * (libm::log(h / 2.0) - 1.0);
            } else {
                sum += h * libm::log(rho);
            }
        }
        (sum, collisions)
    }

    /// `h Σ log max(ρ, h)`: finite sets give a limit, sets of positive
    /// measure keep dropping by about `|K| log 2` per doubling.
    fn floored(&self, m: usize) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        let h = TAU / m as f64;
        (0..m).map(|j| h * libm::log(self.rho(boundary_point(h * j as f64)).max(h))).sum()
    }
}

pub fn carleson_integral(spec: &IdealSpec, quad_points: usize) -> CarlesonReport {
    carleson_integral_with(spec, quad_points, &CarlesonOptions::default())
}

/// `∫_{∂𝔻} log ρ |dz|` with `ρ(z) = min_{ζ∈K} |z − ζ|`, `K = K_0 ∪ {a_k}`.
/// An empty `K` gives 0.
pub fn carleson_integral_with(spec: &IdealSpec, quad_points: usize, options: &CarlesonOptions) -> CarlesonReport {
    let quad_points = quad_points.max(MIN_QUAD_POINTS);
    let set = DistanceSet::new(spec);
    let (value, collisions) = set.integral(quad_points);
    let (refined, _) = set.integral(2 * quad_points);
    let base = options.detector_base.max(16);
    let floored: Vec<f64> = (0..=options.doublings).map(|j| set.floored(base << j)).collect();
    let mut run = 0;
    let mut verdict = CarlesonVerdict::Finite;
    for w in floored.windows(2) {
        if w[0] - w[1] > options.drop_threshold {
            run += 1;
            if run >= 2 {
                verdict = CarlesonVerdict::Divergent;
            }
        } else {
            run = 0;
        }
    }
    CarlesonReport {
        quad_points,
        value,
        refined,
        convergence: (refined - value).abs(),
        collisions,
        floored,
        verdict,
    }
}

fn linear_factor<S: Scalar>(theta: f64) -> TaylorPoly<S> {
    TaylorPoly::new(vec![-S::from_c64(boundary_point(theta)), S::one()])
}

fn boundary_factor_where<S: Scalar>(chain: &ZeroChain, keep: impl Fn(f64) -> bool) -> TaylorPoly<S> {
    let mut out = TaylorPoly::one();
    for (theta, d) in chain.points() {
        if keep(theta) {
            out = out.multiply(&linear_factor::<S>(theta).pow(d as u32, Keep::Full), Keep::Full);
        }
    }
    out
}

/// `Π_{ζ∈K_0} (z − ζ)^{d(ζ)}`.
pub fn boundary_factor<S: Scalar>(chain: &ZeroChain) -> TaylorPoly<S> {
    boundary_factor_where(chain, |_| true)
}

#[derive(Clone, Debug)]
pub struct MemberRecipe<S> {
    pub spec: IdealSpec,
    pub cofactor: TaylorPoly<S>,
    pub member: TaylorPoly<S>,
}

/// `G · Π(z − ζ)^{d(ζ)} · z^n · q`.
///
/// The transcendental part — `G` times the factors `(z − ζ)^{atom order}`
/// at the atoms — is formed as one series truncated at the working degree;
/// the remaining factors are polynomials and multiply in exactly.
pub fn make_member<S: Scalar>(spec: &IdealSpec, q: &TaylorPoly<S>) -> MemberRecipe<S> {
    let head: TaylorPoly<S> = if spec.inner.is_trivial() {
        TaylorPoly::one()
    } else {
        let big_n = spec.working_trunc_degree();
        let mut core = singular_series(spec.inner.atoms(), big_n);
        for atom in spec.inner.atoms() {
            let factor = linear_factor::<C64>(atom.theta).pow(spec.atom_order as u32, Keep::Full);
            core = core.multiply(&factor, Keep::Upto(big_n));
        }
        apply_blaschke_factors(core, spec.inner.blaschke(), big_n).lift()
    };
    let boundary = boundary_factor_where::<S>(&spec.chain, |t| !spec.is_atom_angle(t));
    let member = head
        .multiply(&boundary, Keep::Full)
        .multiply(&TaylorPoly::monomial(spec.n, S::one()), Keep::Full)
        .multiply(q, Keep::Full);
    MemberRecipe { spec: spec.clone(), cofactor: q.clone(), member }
}

/// First boundary condition that failed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryViolation {
    /// `ζ ∈ K_level`.
    pub level: usize,
    pub theta: f64,
    pub derivative: usize,
    /// `|f^{(derivative)}(ζ)| / scale`.
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MembershipReport {
    /// `f^{(j)}` vanishes on `K_i` for `j ≤ i`.
    pub cond_i: bool,
    pub cond_i_worst: f64,
    pub cond_i_violation: Option<BoundaryViolation>,
    /// Every boundary value was evaluated in exact arithmetic.
    pub cond_i_exact: bool,
    /// `G` divides the inner part of `f`.
    pub cond_ii: DivisibilityReport,
    pub in_sn2: bool,
    /// Relative change of `‖f‖_{S_n²}` when the series is cut in half.
    pub in_sn2_change: f64,
    /// "numeric", or "heuristic" when atoms are present.
    pub in_sn2_label: &'static str,
    pub in_zero_subalgebra: bool,
    /// `max(1, ‖f‖_{S_n²})`: boundary values are measured relative to it.
    pub scale: f64,
}

impl MembershipReport {
    pub fn ok(&self) -> bool {
        self.cond_i && self.cond_ii.ok() && self.in_sn2 && self.in_zero_subalgebra
    }
}

/// The boundary point as an exact scalar when it is `±1` or `±i`.
fn exact_point<S: Scalar>(theta: f64) -> Option<S> {
    let p = boundary_point(theta);
    let unit = |x: f64| x == 0.0 || x == 1.0 || x == -1.0;
    (S::MODE == Mode::Rational && unit(p.re) && unit(p.im)).then(|| S::from_c64(p))
}

/// Tests `f` against the conditions of the ideal, at `spec.tol`.
pub fn check_membership<S: Scalar>(f: &TaylorPoly<S>, spec: &IdealSpec) -> Result<MembershipReport> {
    let tol = spec.tol;
    let n = spec.n;
    let ff = f.to_float();
    let norm = sn_norm(&ff, n).total;
    let scale = norm.max(1.0);

    let mut cond_i_worst: f64 = 0.0;
    let mut cond_i_violation = None;
    let mut cond_i_exact = true;
    let max_order = spec.chain.points().iter().map(|&(_, d)| d).max().unwrap_or(0);
    let float_derivs: Vec<FloatPoly> = (0..max_order).map(|j| ff.differentiate(j)).collect();
    let mut exact_derivs: Vec<TaylorPoly<S>> = Vec::new();
    for (theta, d) in spec.chain.points() {
        let exact = exact_point::<S>(theta);
        if exact.is_some() && exact_derivs.is_empty() {
            exact_derivs = (0..max_order).map(|j| f.differentiate(j)).collect();
        }
        cond_i_exact &= exact.is_some();
        for j in 0..d {
            let value = match &exact {
                Some(z) => {
                    let v = exact_derivs[j].evaluate(z);
                    if v.is_zero() {
                        0.0
                    } else {
                        v.to_c64().norm()
                    }
                }
                None => float_derivs[j].evaluate_c64(boundary_point(theta)).norm(),
            } / scale;
            let bad = value.is_nan() || value > tol;
            if bad && cond_i_violation.is_none() {
                cond_i_violation = Some(BoundaryViolation { level: d - 1, theta, derivative: j, value });
            }
            if value > cond_i_worst || value.is_nan() {
                cond_i_worst = value;
            }
        }
    }

    let n_check = SINGULAR_CHECK_DEGREE.max(2 * (spec.polynomial_degree() + 16));
    let cond_ii = divides_inner_part(&spec.inner, &ff, n_check, tol)?;

    let cut = ff.trunc_degree().max(spec.working_trunc_degree()) / 2;
    let half = sn_norm(&ff.truncate(cut), n).total;
    let in_sn2_change = relative((norm - half).abs(), norm);
    let in_sn2 = norm.is_finite() && in_sn2_change <= tol;

    Ok(MembershipReport {
        cond_i: cond_i_violation.is_none(),
        cond_i_worst,
        cond_i_violation,
        cond_i_exact: cond_i_exact && S::MODE == Mode::Rational,
        cond_ii,
        in_sn2,
        in_sn2_change,
        in_sn2_label: if spec.inner.atoms().is_empty() { "numeric" } else { "heuristic" },
        in_zero_subalgebra: in_zero_subalgebra(f, n, default_zero_tol(f, n)),
        scale,
    })
}

/// `{g^{(n)}}` for generated members `g` of `I ∩ ₀S_n²`.
#[derive(Clone, Debug)]
pub struct SubspaceBasis<S> {
    pub spec: IdealSpec,
    pub pre_images: Vec<TaylorPoly<S>>,
    pub elements: Vec<TaylorPoly<S>>,
}

impl<S: Scalar> PartialEq for MemberRecipe<S> {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.cofactor == other.cofactor && self.member == other.member
    }
}

impl<S: Scalar> PartialEq for SubspaceBasis<S> {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.pre_images == other.pre_images && self.elements == other.elements
    }
}

impl<S: Scalar> SubspaceBasis<S> {
    /// `D^n(z·g)` for each pre-image `g`; equals `T_n` of the element.
    pub fn pushforwards(&self) -> Vec<TaylorPoly<S>> {
        self.pre_images.iter().map(|g| apply_nth_derivative(&apply_shift(g), self.spec.n)).collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

pub fn build_subspace<S: Scalar>(spec: &IdealSpec, cofactors: &[TaylorPoly<S>]) -> Result<SubspaceBasis<S>> {
    if cofactors.is_empty() {
        return Err(Error::EmptyCofactors);
    }
    let pre_images: Vec<TaylorPoly<S>> = cofactors.iter().map(|q| make_member(spec, q).member).collect();
    let elements = pre_images.iter().map(|g| g.differentiate(spec.n)).collect();
    Ok(SubspaceBasis { spec: spec.clone(), pre_images, elements })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ElementInvariance {
    /// `max |T_n(f) − D^n(z·g)|` over coefficients.
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    /// Equality in the scalar's own arithmetic.
    pub exact: bool,
    /// `z·g` passes [`check_membership`].
    pub shift_member: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub elements: Vec<ElementInvariance>,
    pub max_rel_residual: f64,
    pub all_exact: bool,
    pub all_members: bool,
}

impl InvarianceReport {
    /// Exact equality in rational mode; relative residual within `tol`
    /// otherwise. Membership of every `z·g` is required in both.
    pub fn ok(&self, mode: Mode, tol: f64) -> bool {
        let identity = match mode {
            Mode::Rational => self.all_exact,
            Mode::Float => self.max_rel_residual <= tol,
        };
        identity && self.all_members
    }
}

/// Checks one element: `T_n(f) = D^n(z·g)` and `z·g ∈ I ∩ ₀S_n²`.
pub fn check_element<S: Scalar>(spec: &IdealSpec, g: &TaylorPoly<S>, f: &TaylorPoly<S>) -> Result<ElementInvariance> {
    let lhs = apply_tn(f, spec.n);
    let shifted = apply_shift(g);
    let rhs = apply_nth_derivative(&shifted, spec.n);
    let max_abs_residual = lhs.max_abs_diff(&rhs);
    let scale = lhs.max_abs_coeff().max(rhs.max_abs_coeff());
    Ok(ElementInvariance {
        max_abs_residual,
        max_rel_residual: relative(max_abs_residual, scale),
        exact: lhs == rhs,
        shift_member: check_membership(&shifted, spec)?.ok(),
    })
}

pub fn check_invariance<S: Scalar>(basis: &SubspaceBasis<S>) -> Result<InvarianceReport> {
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let elements = basis
        .pre_images
        .iter()
        .zip(&basis.elements)
        .map(|(g, f)| check_element(&basis.spec, g, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize_invariance(elements))
}

pub fn summarize_invariance(elements: Vec<ElementInvariance>) -> InvarianceReport {
    InvarianceReport {
        max_rel_residual: elements.iter().map(|e| e.max_rel_residual).fold(0.0, f64::max),
        all_exact: elements.iter().all(|e| e.exact),
        all_members: elements.iter().all(|e| e.shift_member),
        elements,
    }
}

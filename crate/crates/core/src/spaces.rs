//! The algebras `S_n² = {f ∈ H² : f^{(n)} ∈ H²}` with
//! `‖f‖²_{S_n²} = ‖f^{(n)}‖²_{H²} + ‖f‖²_{H²}`, their embedding and nesting
//! inequalities, and the subalgebra `₀S_n²` of functions vanishing to order
//! `n` at the origin.
//!
//! The inequality checks use explicit constants:
//!
//! * sup-norm embedding: `‖f‖_∞ ≤ 2 ‖f‖_{S_1²}`;
//! * nesting: `‖f‖_{S_k²} ≤ C_k ‖f‖_{S_{k+1}²}` with `C_k = √((k!)² + 1)`;
//! * derivative nesting: `‖f'‖_{S_k²} ≤ √(D_k + 1) ‖f‖_{S_{k+1}²}` with
//!   `D_k = C_k²`;
//! * submultiplicativity: `‖fg‖_{S_n²} ≤ M_n ‖f‖_{S_n²} ‖g‖_{S_n²}` with
//!   `M_1 = 4` and `M_{k+1} = M_k √(4 C_k² (D_k + 1) + C_k⁴)`.

use alloc::vec::Vec;

use crate::scalar::{Mode, Scalar};
use crate::series::{Keep, TaylorPoly};

/// Slack added to every right-hand side to absorb rounding.
pub const INEQUALITY_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnNormReport {
    pub n: usize,
    pub hardy_part: f64,
    pub derivative_part: f64,
    pub total: f64,
}

pub fn sn_norm<S: Scalar>(f: &TaylorPoly<S>, n: usize) -> SnNormReport {
    let hardy_part = f.hardy_norm();
    let derivative_part = f.differentiate(n).hardy_norm();
    SnNormReport {
        n,
        hardy_part,
        derivative_part,
        total: libm::hypot(hardy_part, derivative_part),
    }
}

/// Outcome of one inequality check `lhs ≤ rhs`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InequalityReport {
    pub check: &'static str,
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub ok: bool,
}

impl InequalityReport {
    fn new(check: &'static str, n: usize, lhs: f64, rhs: f64, constant: f64) -> Self {
        let ok = lhs.is_finite() && rhs.is_finite() && lhs <= rhs + INEQUALITY_SLACK;
        Self { check, n, lhs, rhs, constant, ok }
    }

    /// `lhs / rhs`, or 0 when both sides vanish.
    pub fn ratio(&self) -> f64 {
        if self.rhs > 0.0 {
            self.lhs / self.rhs
        } else if self.lhs > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|m| m as f64).product()
}

/// `C_k = √((k!)² + 1)`.
pub fn nesting_constant(k: usize) -> f64 {
    libm::sqrt(factorial(k) * factorial(k) + 1.0)
}

/// `D_k = C_k² = (k!)² + 1`.
pub fn derivative_constant(k: usize) -> f64 {
    let f = factorial(k);
    f * f + 1.0
}

/// `‖f‖_∞ ≤ 2‖f‖_{S_1²}`, with the sup norm estimated on a boundary grid.
pub fn check_pointwise_bound<S: Scalar>(f: &TaylorPoly<S>, grid: usize) -> InequalityReport {
    let lhs = f.sup_norm_estimate(grid);
    let rhs = 2.0 * sn_norm(f, 1).total;
    InequalityReport::new("pointwise_bound", 1, lhs, rhs, 2.0)
}

/// `‖f‖_{S_k²} ≤ C_k ‖f‖_{S_{k+1}²}`.
pub fn check_nesting<S: Scalar>(f: &TaylorPoly<S>, k: usize) -> InequalityReport {
    let c = nesting_constant(k);
    let lhs = sn_norm(f, k).total;
    let rhs = c * sn_norm(f, k + 1).total;
    InequalityReport::new("nesting", k, lhs, rhs, c)
}

/// `‖f'‖_{S_k²} ≤ √(D_k + 1) ‖f‖_{S_{k+1}²}`.
pub fn check_derivative_nesting<S: Scalar>(f: &TaylorPoly<S>, k: usize) -> InequalityReport {
    let c = libm::sqrt(derivative_constant(k) + 1.0);
    let lhs = sn_norm(&f.differentiate(1), k).total;
    let rhs = c * sn_norm(f, k + 1).total;
    InequalityReport::new("derivative_nesting", k, lhs, rhs, c)
}

/// One level of the submultiplicativity constant chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainLevel {
    pub k: usize,
    /// `C_k`.
    pub nesting: f64,
    /// `D_k`.
    pub derivative: f64,
    /// `M_k`, admissible for `S_k²`.
    pub multiplicative: f64,
}

/// Levels `1..=n` of the constant chain.
pub fn constant_chain(n: usize) -> Vec<ChainLevel> {
    let mut levels = Vec::with_capacity(n);
    let mut m = 4.0;
    for k in 1..=n {
        let c = nesting_constant(k);
        let d = derivative_constant(k);
        levels.push(ChainLevel { k, nesting: c, derivative: d, multiplicative: m });
        m *= libm::sqrt(4.0 * c * c * (d + 1.0) + c * c * c * c);
    }
    levels
}

pub fn submultiplicative_constant(n: usize) -> f64 {
    constant_chain(n).last().map_or(4.0, |l| l.multiplicative)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubmultiplicativeReport {
    pub inequality: InequalityReport,
    pub chain: Vec<ChainLevel>,
}

/// `‖fg‖_{S_n²} ≤ M_n ‖f‖_{S_n²} ‖g‖_{S_n²}`, product taken at full degree.
pub fn check_submultiplicative<S: Scalar>(
    f: &TaylorPoly<S>,
    g: &TaylorPoly<S>,
    n: usize,
) -> SubmultiplicativeReport {
    let chain = constant_chain(n.max(1));
    let m = chain.last().map_or(4.0, |l| l.multiplicative);
    let lhs = sn_norm(&f.multiply(g, Keep::Full), n).total;
    let rhs = m * sn_norm(f, n).total * sn_norm(g, n).total;
    SubmultiplicativeReport {
        inequality: InequalityReport::new("submultiplicative", n, lhs, rhs, m),
        chain,
    }
}

/// Default tolerance for [`in_zero_subalgebra`]: exact zero in rational
/// mode, `1e-10 · ‖f‖_{S_n²}` in float mode.
pub fn default_zero_tol<S: Scalar>(f: &TaylorPoly<S>, n: usize) -> f64 {
    match S::MODE {
        Mode::Rational => 0.0,
        Mode::Float => 1e-10 * sn_norm(f, n).total,
    }
}

/// `f^{(i)}(0) = 0` for `0 ≤ i < n`, i.e. `|a_i| ≤ tol`. A zero tolerance
/// demands exact zeros.
pub fn in_zero_subalgebra<S: Scalar>(f: &TaylorPoly<S>, n: usize, tol: f64) -> bool {
    f.coeffs().iter().take(n).all(|a| {
        if tol == 0.0 {
            a.is_zero()
        } else {
            a.abs() <= tol
        }
    })
}

/// `f = poly_part + tail` with `poly_part ∈ span{1, …, z^{n−1}}` and
/// `tail ∈ ₀S_n²`.
#[derive(Clone, Debug)]
pub struct Decomposition<S> {
    pub n: usize,
    pub poly_part: TaylorPoly<S>,
    pub tail: TaylorPoly<S>,
}

impl<S: Scalar> PartialEq for Decomposition<S> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.poly_part == other.poly_part && self.tail == other.tail
    }
}

impl<S: Scalar> Decomposition<S> {
    pub fn reconstruct(&self) -> TaylorPoly<S> {
        self.poly_part.add(&self.tail)
    }
}

pub fn decompose<S: Scalar>(f: &TaylorPoly<S>, n: usize) -> Decomposition<S> {
    let head = n.min(f.coeffs().len());
    let poly_part = if n == 0 {
        TaylorPoly::zero()
    } else {
        TaylorPoly::new(f.coeffs()[..head].to_vec())
    };
    let mut tail = f.coeffs().to_vec();
    for c in tail.iter_mut().take(n) {
        *c = S::zero();
    }
    Decomposition { n, poly_part, tail: TaylorPoly::new(tail) }
}

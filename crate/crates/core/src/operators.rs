//! Coefficient-level operators on truncated series.
//!
//! * `M_z`: forward shift.
//! * Volterra: `f ↦ ∫₀^z f`.
//! * `V_n`: Riemann–Liouville integral `(1/Γ(n)) ∫₀^z (z−w)^{n−1} f(w) dw`,
//!   acting on monomials as `z^k ↦ k!/(k+n)! · z^{k+n}`.
//! * `D^n`: n-th derivative, the inverse of `V_n` on its range.
//! * `T_n = M_z + n·Volterra`, a weighted shift
//!   `z^k ↦ (k+1+n)/(k+1) · z^{k+1}`.
//!
//! `T_n` and `V_n` raise the truncation degree (by 1 and `n`), so identity
//! checks compare full results rather than truncated ones.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::scalar::{falling_reciprocal, rising_ratio, Scalar};
use crate::series::TaylorPoly;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorTag {
    Shift,
    Volterra,
    RiemannLiouville(usize),
    NthDerivative(usize),
    Tn(usize),
}

impl OperatorTag {
    /// Rejects parametrized tags with `n = 0`.
    pub fn validate(self) -> Result<Self> {
        match self {
            OperatorTag::RiemannLiouville(0) | OperatorTag::NthDerivative(0) | OperatorTag::Tn(0) => {
                Err(Error::ZeroOrder)
            }
            tag => Ok(tag),
        }
    }

    /// Number of sub-diagonals (entries `(row, col)` with `row > col`).
    pub fn lower_band(self) -> usize {
        match self {
            OperatorTag::Shift | OperatorTag::Volterra | OperatorTag::Tn(_) => 1,
            OperatorTag::RiemannLiouville(n) => n,
            OperatorTag::NthDerivative(_) => 0,
        }
    }

    pub fn upper_band(self) -> usize {
        match self {
            OperatorTag::NthDerivative(n) => n,
            _ => 0,
        }
    }

    pub fn apply<S: Scalar>(self, f: &TaylorPoly<S>) -> TaylorPoly<S> {
        match self {
            OperatorTag::Shift => apply_shift(f),
            OperatorTag::Volterra => f.integrate(),
            OperatorTag::RiemannLiouville(n) => apply_riemann_liouville(f, n),
            OperatorTag::NthDerivative(n) => apply_nth_derivative(f, n),
            OperatorTag::Tn(n) => apply_tn(f, n),
        }
    }

    /// Image of `z^k`, as `(row, coefficient)`; `None` when it vanishes.
    fn monomial_image<S: Scalar>(self, k: usize) -> Option<(usize, S)> {
        match self {
            OperatorTag::Shift => Some((k + 1, S::one())),
            OperatorTag::Volterra => Some((k + 1, S::one() / S::from_int(k as i64 + 1))),
            OperatorTag::Tn(n) => Some((k + 1, tn_weight(k, n))),
            OperatorTag::RiemannLiouville(n) => Some((k + n, falling_reciprocal(k, k + n))),
            OperatorTag::NthDerivative(n) => {
                (k >= n).then(|| (k - n, rising_ratio(k - n, k)))
            }
        }
    }
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorTag::Shift => f.write_str("shift"),
            OperatorTag::Volterra => f.write_str("volterra"),
            OperatorTag::RiemannLiouville(n) => write!(f, "riemann_liouville({n})"),
            OperatorTag::NthDerivative(n) => write!(f, "nth_derivative({n})"),
            OperatorTag::Tn(n) => write!(f, "t_n({n})"),
        }
    }
}

impl FromStr for OperatorTag {
    type Err = Error;

    /// Accepts `shift`, `volterra`, `riemann_liouville(n)`,
    /// `nth_derivative(n)` and `t_n(n)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownOperator(s.to_string());
        let s = s.trim();
        match s {
            "shift" => return Ok(OperatorTag::Shift),
            "volterra" => return Ok(OperatorTag::Volterra),
            _ => {}
        }
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let arg = rest.strip_suffix(')').ok_or_else(bad)?;
        let n: usize = arg.trim().parse().map_err(|_| bad())?;
        let tag = match name.trim() {
            "riemann_liouville" => OperatorTag::RiemannLiouville(n),
            "nth_derivative" => OperatorTag::NthDerivative(n),
            "t_n" => OperatorTag::Tn(n),
            _ => return Err(bad()),
        };
        tag.validate()
    }
}

/// `(k+1+n)/(k+1)`, the weight of `T_n` on `z^k`.
pub fn tn_weight<S: Scalar>(k: usize, n: usize) -> S {
    S::from_int((k + 1 + n) as i64) / S::from_int(k as i64 + 1)
}

/// `M_z`: `b_{k+1} = a_k`, `b_0 = 0`.
pub fn apply_shift<S: Scalar>(f: &TaylorPoly<S>) -> TaylorPoly<S> {
    let mut coeffs = Vec::with_capacity(f.coeffs().len() + 1);
    coeffs.push(S::zero());
    coeffs.extend(f.coeffs().iter().cloned());
    TaylorPoly::new(coeffs)
}

/// `T_n f = z f + n ∫₀^z f`.
pub fn apply_tn<S: Scalar>(f: &TaylorPoly<S>, n: usize) -> TaylorPoly<S> {
    apply_shift(f).add(&f.integrate().scale(&S::from_int(n as i64)))
}

/// `T_n` through its weighted-shift form.
pub fn apply_tn_weighted<S: Scalar>(f: &TaylorPoly<S>, n: usize) -> TaylorPoly<S> {
    let mut coeffs = vec![S::zero()];
    coeffs.extend(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(k, a)| a.clone() * tn_weight::<S>(k, n)),
    );
    TaylorPoly::new(coeffs)
}

/// `V_n f`, truncation degree `N + n`.
pub fn apply_riemann_liouville<S: Scalar>(f: &TaylorPoly<S>, n: usize) -> TaylorPoly<S> {
    let mut coeffs = vec![S::zero(); n];
    coeffs.extend(f.coeffs().iter().enumerate().map(|(k, a)| {
        if a.is_zero() {
            S::zero()
        } else {
            a.clone() * falling_reciprocal::<S>(k, k + n)
        }
    }));
    TaylorPoly::new(coeffs)
}

pub fn apply_nth_derivative<S: Scalar>(f: &TaylorPoly<S>, n: usize) -> TaylorPoly<S> {
    f.differentiate(n)
}

/// `n`-fold application of the Volterra primitive.
pub fn iterated_integral<S: Scalar>(f: &TaylorPoly<S>, n: usize) -> TaylorPoly<S> {
    (0..n).fold(f.clone(), |acc, _| acc.integrate())
}

/// Monomial-basis matrix of an operator, restricted to a `dim × dim` block.
/// Only nonzero entries are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct BandMatrix<S> {
    pub dim: usize,
    pub lower: usize,
    pub upper: usize,
    entries: BTreeMap<(usize, usize), S>,
}

impl<S: Scalar> BandMatrix<S> {
    pub fn new(dim: usize, lower: usize, upper: usize) -> Self {
        Self { dim, lower, upper, entries: BTreeMap::new() }
    }

    /// Stores `value` at `(row, col)`; zero values and positions outside the
    /// matrix or the declared band are ignored.
    pub fn set(&mut self, row: usize, col: usize, value: S) {
        let in_band = (row >= col && row - col <= self.lower) || (col > row && col - row <= self.upper);
        if row < self.dim && col < self.dim && in_band && !value.is_zero() {
            self.entries.insert((row, col), value);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> S {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(S::zero)
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Mutable access for harness self-tests that deliberately corrupt an
    /// entry.
    pub fn entry_mut(&mut self, row: usize, col: usize) -> Option<&mut S> {
        self.entries.get_mut(&(row, col))
    }

    /// `A·x` for a coefficient vector of length `dim` (shorter input is
    /// zero-padded).
    pub fn apply(&self, x: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (&(r, c), v) in &self.entries {
            if let Some(xc) = x.get(c) {
                out[r] = out[r].clone() + v.clone() * xc.clone();
            }
        }
        out
    }
}

/// Column `k` holds the image of `z^k`, cut to `dim` rows.
pub fn matrix_of<S: Scalar>(op: OperatorTag, dim: usize) -> BandMatrix<S> {
    let mut m = BandMatrix::new(dim, op.lower_band(), op.upper_band());
    for k in 0..dim {
        if let Some((row, v)) = op.monomial_image::<S>(k) {
            m.set(row, k, v);
        }
    }
    m
}

#[derive(Clone, Debug)]
pub struct IntertwiningReport<S> {
    pub n: usize,
    /// `V_n(T_n f)`.
    pub lhs: TaylorPoly<S>,
    /// `M_z(V_n f)`.
    pub rhs: TaylorPoly<S>,
    pub max_abs_residual: f64,
    /// Residual divided by the largest coefficient of either side.
    pub max_rel_residual: f64,
    /// Coefficientwise equality in the scalar's own arithmetic.
    pub exact: bool,
}

/// Compares `V_n T_n f` with `M_z V_n f`.
pub fn verify_intertwining<S: Scalar>(n: usize, f: &TaylorPoly<S>) -> IntertwiningReport<S> {
    let lhs = apply_riemann_liouville(&apply_tn(f, n), n);
    let rhs = apply_shift(&apply_riemann_liouville(f, n));
    let max_abs_residual = lhs.max_abs_diff(&rhs);
    let scale = lhs.max_abs_coeff().max(rhs.max_abs_coeff());
    IntertwiningReport {
        n,
        exact: lhs == rhs,
        max_rel_residual: relative(max_abs_residual, scale),
        max_abs_residual,
        lhs,
        rhs,
    }
}

#[derive(Clone, Debug)]
pub struct InverseReport<S> {
    pub n: usize,
    /// `D^n(V_n f) − f`.
    pub left_residual: f64,
    /// `f` with its first `n` coefficients removed.
    pub tail: TaylorPoly<S>,
    /// `V_n(D^n g) − g` for `g = tail`.
    pub right_residual: f64,
    pub left_exact: bool,
    pub right_exact: bool,
}

impl<S> InverseReport<S> {
    pub fn exact(&self) -> bool {
        self.left_exact && self.right_exact
    }
}

/// Checks `D^n V_n = Id` on `f` and `V_n D^n = Id` on the part of `f` that
/// vanishes to order `n` at the origin.
pub fn verify_inverse<S: Scalar>(n: usize, f: &TaylorPoly<S>) -> InverseReport<S> {
    let left = apply_nth_derivative(&apply_riemann_liouville(f, n), n);
    let mut tail_coeffs = f.coeffs().to_vec();
    for c in tail_coeffs.iter_mut().take(n) {
        *c = S::zero();
    }
    let tail = TaylorPoly::new(tail_coeffs);
    let right = apply_riemann_liouville(&apply_nth_derivative(&tail, n), n);
    InverseReport {
        n,
        left_residual: left.max_abs_diff(f),
        right_residual: right.max_abs_diff(&tail),
        left_exact: left == *f,
        right_exact: right == tail,
        tail,
    }
}

pub(crate) fn relative(abs: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        abs / scale
    } else {
        abs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{QComplex, C64};
    use crate::series::{FloatPoly, RationalPoly};

    type Q = RationalPoly;

    fn qr(p: i64, d: i64) -> QComplex {
        QComplex::from_int(p) / QComplex::from_int(d)
    }

    fn mono(k: usize, c: QComplex) -> Q {
        Q::monomial(k, c)
    }

    #[test]
    fn shift_examples() {
        assert_eq!(apply_shift(&Q::one()), mono(1, qr(1, 1)));
        assert_eq!(apply_shift(&mono(4, qr(1, 1))), mono(5, qr(1, 1)));
        assert_eq!(apply_shift(&Q::from_ints(&[1, 2])), Q::from_ints(&[0, 1, 2]));
        assert_eq!(apply_shift(&Q::from_ints(&[1, 2])).trunc_degree(), 2);
    }

    #[test]
    fn tn_examples() {
        for n in 1..5 {
            assert_eq!(apply_tn(&Q::one(), n), mono(1, QComplex::from_int(1 + n as i64)));
        }
        // z·z + ∫z = z² + z²/2
        let z = mono(1, qr(1, 1));
        let by_hand = apply_shift(&z).add(&z.integrate());
        assert_eq!(apply_tn(&z, 1), by_hand);
        assert_eq!(apply_tn(&z, 1), mono(2, qr(3, 2)));
        let z2 = mono(2, qr(1, 1));
        let direct = apply_shift(&z2).add(&z2.integrate().scale(&QComplex::from_int(3)));
        assert_eq!(apply_tn(&z2, 3), direct);
        assert_eq!(apply_tn(&z2, 3), mono(3, qr(2, 1)));
    }

    #[test]
    fn tn_dual_paths_agree() {
        let f = Q::new(vec![qr(1, 3), qr(-2, 5), QComplex::new(qr(0, 1).re, qr(7, 2).re), qr(9, 4)]);
        for n in 1..6 {
            assert_eq!(apply_tn(&f, n), apply_tn_weighted(&f, n));
        }
    }

    #[test]
    fn riemann_liouville_examples() {
        let f = Q::from_ints(&[4, -1, 3]);
        assert_eq!(apply_riemann_liouville(&f, 1), f.integrate());
        assert_eq!(apply_riemann_liouville(&mono(1, qr(1, 1)), 2), mono(3, qr(1, 6)));
        let triple = Q::one().integrate().integrate().integrate();
        assert_eq!(apply_riemann_liouville(&Q::one(), 3), triple);
        assert_eq!(triple, mono(3, qr(1, 6)));
        assert_eq!(apply_riemann_liouville(&f, 3).trunc_degree(), f.trunc_degree() + 3);
    }

    #[test]
    fn nth_derivative_examples() {
        assert_eq!(apply_nth_derivative(&mono(1, qr(1, 1)), 1), Q::one());
        let f = Q::from_ints(&[2, 0, -3, 5]);
        assert_eq!(apply_nth_derivative(&apply_riemann_liouville(&f, 2), 2), f);
        assert!(apply_nth_derivative(&mono(2, qr(1, 1)), 3).is_zero());
    }

    #[test]
    fn matrix_examples() {
        let m = matrix_of::<QComplex>(OperatorTag::Shift, 3);
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(1, 0), qr(1, 1));
        assert_eq!(m.get(2, 1), qr(1, 1));

        let t = matrix_of::<QComplex>(OperatorTag::Tn(1), 3);
        assert_eq!(t.nnz(), 2);
        assert_eq!(t.get(1, 0), qr(2, 1));
        assert_eq!(t.get(2, 1), qr(3, 2));

        let rl = matrix_of::<QComplex>(OperatorTag::RiemannLiouville(2), 4);
        assert_eq!(rl.nnz(), 2);
        assert_eq!(rl.get(2, 0), qr(1, 2));
        assert_eq!(rl.get(3, 1), qr(1, 6));

        let t2 = matrix_of::<QComplex>(OperatorTag::Tn(2), 4);
        assert_eq!((t2.get(1, 0), t2.get(2, 1), t2.get(3, 2)), (qr(3, 1), qr(2, 1), qr(5, 3)));

        assert_eq!(matrix_of::<QComplex>(OperatorTag::NthDerivative(5), 3).nnz(), 0);
        let d = matrix_of::<QComplex>(OperatorTag::NthDerivative(2), 5);
        assert_eq!(d.get(0, 2), qr(2, 1));
        assert_eq!(d.get(2, 4), qr(12, 1));
    }

    #[test]
    fn matrix_agrees_with_functional_form() {
        let f = Q::new((0..7).map(|k| qr(k as i64 - 3, k as i64 + 2)).collect());
        let dim = 12;
        for op in [
            OperatorTag::Shift,
            OperatorTag::Volterra,
            OperatorTag::Tn(3),
            OperatorTag::RiemannLiouville(4),
            OperatorTag::NthDerivative(2),
        ] {
            let m = matrix_of::<QComplex>(op, dim);
            assert!(m.entries().all(|(r, c, _)| r < dim && c < dim));
            let via_matrix = Q::new(m.apply(f.coeffs()));
            assert_eq!(via_matrix, op.apply(&f).truncate(dim - 1), "{op}");
        }
        let ff: FloatPoly = f.to_float();
        let m = matrix_of::<C64>(OperatorTag::RiemannLiouville(3), dim);
        let diff = FloatPoly::new(m.apply(ff.coeffs())).max_abs_diff(&apply_riemann_liouville(&ff, 3).truncate(dim - 1));
        assert!(diff <= 1e-13);
    }

    #[test]
    fn band_is_respected() {
        let mut m = BandMatrix::<QComplex>::new(4, 1, 0);
        m.set(3, 0, qr(1, 1));
        m.set(0, 1, qr(1, 1));
        m.set(9, 8, qr(1, 1));
        assert_eq!(m.nnz(), 0);
        assert_eq!(matrix_of::<QComplex>(OperatorTag::Shift, 1).nnz(), 0);
    }

    #[test]
    fn tag_parsing() {
        for s in ["shift", "volterra", "riemann_liouville(3)", "nth_derivative(5)", "t_n(2)"] {
            let tag: OperatorTag = s.parse().unwrap();
            assert_eq!(tag.to_string(), s);
        }
        assert_eq!("t_n(0)".parse::<OperatorTag>(), Err(Error::ZeroOrder));
        assert!("t_n(x)".parse::<OperatorTag>().is_err());
        assert!("rotate".parse::<OperatorTag>().is_err());
        assert!("t_n(2".parse::<OperatorTag>().is_err());
    }

    #[test]
    fn intertwining_examples() {
        let z = mono(1, qr(1, 1));
        let r = verify_intertwining(1, &z);
        assert!(r.exact);
        assert_eq!(r.lhs, mono(3, qr(1, 2)));
        assert_eq!(r.rhs, mono(3, qr(1, 2)));

        let r = verify_intertwining(2, &Q::one());
        assert!(r.exact);
        assert_eq!(r.lhs, mono(3, qr(1, 2)));
        assert_eq!(r.max_abs_residual, 0.0);

        for n in 1..6 {
            let r = verify_intertwining(n, &Q::zero());
            assert!(r.exact);
            assert_eq!(r.max_abs_residual, 0.0);
        }
    }

    #[test]
    fn inverse_examples() {
        let r = verify_inverse(1, &Q::one());
        assert!(r.left_exact);
        let z5 = mono(5, qr(1, 1));
        assert_eq!(apply_nth_derivative(&z5, 2), mono(3, qr(20, 1)));
        assert_eq!(apply_riemann_liouville(&apply_nth_derivative(&z5, 2), 2), z5);
        assert!(verify_inverse(2, &z5).exact());
        let one_plus_z = Q::from_ints(&[1, 1]);
        assert!(apply_riemann_liouville(&apply_nth_derivative(&one_plus_z, 2), 2).is_zero());
        let r = verify_inverse(2, &one_plus_z);
        assert!(r.tail.is_zero());
        assert!(r.exact());
    }
}

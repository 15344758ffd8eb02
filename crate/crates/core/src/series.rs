//! Truncated Taylor series `Σ_{k≤N} a_k z^k`.
//!
//! A [`TaylorPoly`] always stores exactly `N + 1` coefficients, where `N` is
//! its truncation degree. Trailing coefficients may be zero; equality
//! ignores them. The zero series is `[0]` with `N = 0`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_traits::Zero;

use crate::scalar::{Mode, QComplex, Scalar, C64};
use crate::{Error, Result};

/// How many coefficients of a product to retain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    /// Degree `N_f + N_g`: the exact polynomial product.
    Full,
    /// Truncate to this degree.
    Upto(usize),
}

#[derive(Clone, Debug)]
pub struct TaylorPoly<S> {
    coeffs: Vec<S>,
}

pub type FloatPoly = TaylorPoly<C64>;
pub type RationalPoly = TaylorPoly<QComplex>;

impl<S: Scalar> TaylorPoly<S> {
    /// Builds a series from its coefficient list. An empty list yields the
    /// zero series.
    pub fn new(coeffs: Vec<S>) -> Self {
        if coeffs.is_empty() {
            Self::zero()
        } else {
            Self { coeffs }
        }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![S::zero()] }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![S::one()] }
    }

    /// `c · z^k`, truncation degree `k`.
    pub fn monomial(k: usize, c: S) -> Self {
        let mut coeffs = vec![S::zero(); k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    /// The zero series carried at truncation degree `n`.
    pub fn zeros(n: usize) -> Self {
        Self { coeffs: vec![S::zero(); n + 1] }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| S::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero past the truncation degree.
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn trunc_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Index of the highest nonzero coefficient, `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn mode(&self) -> Mode {
        S::MODE
    }

    /// Keeps coefficients `0..=n`, padding with zeros if `n` exceeds the
    /// current truncation degree.
    pub fn truncate(&self, n: usize) -> Self {
        let mut coeffs: Vec<S> = self.coeffs.iter().take(n + 1).cloned().collect();
        coeffs.resize(n + 1, S::zero());
        Self { coeffs }
    }

    /// Drops trailing zero coefficients (keeping at least one).
    pub fn trimmed(&self) -> Self {
        let len = self.degree().map_or(1, |d| d + 1);
        Self { coeffs: self.coeffs[..len].to_vec() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self {
            coeffs: (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self {
            coeffs: (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn map(&self, f: impl FnMut(&S) -> S) -> Self {
        Self { coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Cauchy product.
    pub fn multiply(&self, other: &Self, keep: Keep) -> Self {
        let full = self.trunc_degree() + other.trunc_degree();
        let top = match keep {
            Keep::Full => full,
            Keep::Upto(n) => n,
        };
        let mut out = vec![S::zero(); top + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > top || a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(top - i + 1) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self { coeffs: out }
    }

    pub fn pow(&self, e: u32, keep: Keep) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.multiply(self, keep);
        }
        acc
    }

    /// Power-series quotient `self / den` to degree `n`; `None` when
    /// `den(0) = 0`.
    pub fn divide(&self, den: &Self, n: usize) -> Option<Self> {
        let d0 = den.coeff(0);
        if d0.is_zero() {
            return None;
        }
        let mut out: Vec<S> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeff(k);
            for j in 1..=k.min(den.trunc_degree()) {
                let dj = &den.coeffs[j];
                if !dj.is_zero() {
                    acc = acc - dj.clone() * out[k - j].clone();
                }
            }
            out.push(acc / d0.clone());
        }
        Some(Self { coeffs: out })
    }

    /// `order`-th derivative: `b_k = (k+order)!/k! · a_{k+order}`, truncation
    /// degree `N − order` (the zero series when `N < order`).
    pub fn differentiate(&self, order: usize) -> Self {
        let n = self.trunc_degree();
        if order == 0 {
            return self.clone();
        }
        if n < order {
            return Self::zero();
        }
        Self {
            coeffs: (0..=n - order)
                .map(|k| {
                    let a = &self.coeffs[k + order];
                    if a.is_zero() {
                        S::zero()
                    } else {
                        a.clone() * crate::scalar::rising_ratio::<S>(k, k + order)
                    }
                })
                .collect(),
        }
    }

    /// Primitive vanishing at the origin: `b_{k+1} = a_k/(k+1)`.
    pub fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(S::zero());
        for (k, a) in self.coeffs.iter().enumerate() {
            coeffs.push(a.clone() / S::from_int(k as i64 + 1));
        }
        Self { coeffs }
    }

    /// Horner evaluation in the scalar's own arithmetic.
    pub fn evaluate(&self, z: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    /// Horner evaluation in float arithmetic.
    pub fn evaluate_c64(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, c| acc * z + c.to_c64())
    }

    /// `‖f‖²_{H²} = Σ |a_k|²`.
    pub fn hardy_norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs_sqr).sum()
    }

    pub fn hardy_norm(&self) -> f64 {
        libm::sqrt(self.hardy_norm_sqr())
    }

    /// `⟨f, g⟩ = Σ a_k · conj(b_k)`.
    pub fn hardy_inner(&self, other: &Self) -> S {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.conj())
    }

    /// `max |f(e^{iθ_j})|` over `grid_size` equispaced boundary points.
    ///
    /// This is a lower bound for `‖f‖_∞`, so an upper-bound inequality that
    /// holds for the estimate is not contradicted by it. Grids that double
    /// in size contain the coarser grid's nodes exactly.
    ///
    /// # Panics
    /// If `grid_size < 16`.
    pub fn sup_norm_estimate(&self, grid_size: usize) -> f64 {
        assert!(grid_size >= 16, "boundary grid needs at least 16 points");
        (0..grid_size)
            .map(|j| self.evaluate_c64(unit_point(j, grid_size)).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_finite)
    }

    pub fn to_float(&self) -> FloatPoly {
        TaylorPoly { coeffs: self.coeffs.iter().map(Scalar::to_c64).collect() }
    }

    /// Exact lift of the float image of this series (identity on rational
    /// series already exact).
    pub fn lift<T: Scalar>(&self) -> TaylorPoly<T> {
        TaylorPoly {
            coeffs: self.coeffs.iter().map(|c| T::from_c64(c.to_c64())).collect(),
        }
    }

    /// Largest `|a_k − b_k|` over the union of both supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs).fold(0.0, f64::max)
    }
}

impl RationalPoly {
    pub fn to_rational(&self) -> RationalPoly {
        self.clone()
    }
}

impl FloatPoly {
    /// Exact rational image of a float series.
    pub fn to_rational(&self) -> RationalPoly {
        self.lift()
    }
}

impl<S: Scalar> PartialEq for TaylorPoly<S> {
    fn eq(&self, other: &Self) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|k| self.coeff(k) == other.coeff(k))
    }
}

/// `e^{2πij/m}` with the angle formed as `τ·j/m` so that doubled grids
/// reproduce coarse nodes bit for bit.
pub(crate) fn unit_point(j: usize, m: usize) -> C64 {
    let theta = TAU * j as f64 / m as f64;
    C64::new(libm::cos(theta), libm::sin(theta))
}

/// A series whose scalar mode is only known at run time (for example after
/// parsing JSON).
#[derive(Clone, Debug, PartialEq)]
pub enum DynPoly {
    Float(FloatPoly),
    Rational(RationalPoly),
}

impl DynPoly {
    pub fn mode(&self) -> Mode {
        match self {
            DynPoly::Float(_) => Mode::Float,
            DynPoly::Rational(_) => Mode::Rational,
        }
    }

    pub fn trunc_degree(&self) -> usize {
        match self {
            DynPoly::Float(p) => p.trunc_degree(),
            DynPoly::Rational(p) => p.trunc_degree(),
        }
    }

    pub fn to_float(&self) -> FloatPoly {
        match self {
            DynPoly::Float(p) => p.clone(),
            DynPoly::Rational(p) => p.to_float(),
        }
    }

    pub fn to_rational(&self) -> RationalPoly {
        match self {
            DynPoly::Float(p) => p.to_rational(),
            DynPoly::Rational(p) => p.clone(),
        }
    }

    /// Converts to the requested mode (float → rational is exact).
    pub fn into_mode(self, mode: Mode) -> DynPoly {
        match (self, mode) {
            (DynPoly::Float(p), Mode::Rational) => DynPoly::Rational(p.to_rational()),
            (DynPoly::Rational(p), Mode::Float) => DynPoly::Float(p.to_float()),
            (p, _) => p,
        }
    }

    fn mismatch(&self, other: &DynPoly) -> Error {
        Error::ModeMismatch { left: self.mode(), right: other.mode() }
    }

    pub fn add(&self, other: &DynPoly) -> Result<DynPoly> {
        match (self, other) {
            (DynPoly::Float(a), DynPoly::Float(b)) => Ok(DynPoly::Float(a.add(b))),
            (DynPoly::Rational(a), DynPoly::Rational(b)) => Ok(DynPoly::Rational(a.add(b))),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn multiply(&self, other: &DynPoly, keep: Keep) -> Result<DynPoly> {
        match (self, other) {
            (DynPoly::Float(a), DynPoly::Float(b)) => Ok(DynPoly::Float(a.multiply(b, keep))),
            (DynPoly::Rational(a), DynPoly::Rational(b)) => {
                Ok(DynPoly::Rational(a.multiply(b, keep)))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn hardy_inner(&self, other: &DynPoly) -> Result<C64> {
        match (self, other) {
            (DynPoly::Float(a), DynPoly::Float(b)) => Ok(a.hardy_inner(b)),
            (DynPoly::Rational(a), DynPoly::Rational(b)) => Ok(a.hardy_inner(b).to_c64()),
            _ => Err(self.mismatch(other)),
        }
    }
}

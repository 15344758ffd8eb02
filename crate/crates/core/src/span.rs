//! `H²`-orthogonal distance from a series to the span of a finite family.
//!
//! With Gram matrix `G_ij = ⟨b_j, b_i⟩` and `c_i = ⟨f, b_i⟩` the distance is
//! `√(‖f‖² − c*G⁻¹c)`. Since the `H²` inner product is the Euclidean one on
//! coefficients, `G = R*R` for the QR factorization of the coefficient
//! matrix, and the distance is computed as the norm of the explicit
//! residual `f − QQ*f`. This avoids the cancellation in `‖f‖² − c*G⁻¹c`.
//! Nearly dependent columns are dropped, which is the pseudo-inverse of a
//! singular Gram matrix.

use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::C64;
use crate::series::FloatPoly;

/// Relative norm below which an orthogonalized column counts as dependent.
pub const RANK_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SpanDistance {
    pub distance: f64,
    /// `distance / max(1, ‖f‖)`.
    pub scaled_distance: f64,
    /// Number of basis elements kept after dropping dependent ones.
    pub rank: usize,
    /// Condition number of the Gram matrix of the kept elements.
    pub gram_condition: f64,
    /// Some basis element was (numerically) dependent on the others.
    pub singular: bool,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn norm(a: &[C64]) -> f64 {
    libm::sqrt(a.iter().map(|x| x.norm_sqr()).sum::<f64>())
}

fn padded(p: &FloatPoly, len: usize) -> Vec<C64> {
    let mut v = p.coeffs().to_vec();
    v.resize(len, C64::new(0.0, 0.0));
    v
}

/// Removes the components along `q` from `v`, twice.
fn orthogonalize(v: &mut [C64], q: &[Vec<C64>]) {
    for _ in 0..2 {
        for qi in q {
            let c = dot(v, qi);
            for (x, y) in v.iter_mut().zip(qi) {
                *x -= c * y;
            }
        }
    }
}

/// Gram matrix `G_ij = ⟨b_j, b_i⟩`.
pub fn gram_matrix(basis: &[FloatPoly]) -> Vec<Vec<C64>> {
    basis
        .iter()
        .map(|bi| basis.iter().map(|bj| bj.hardy_inner(bi)).collect())
        .collect()
}

pub fn distance_to_span(f: &FloatPoly, basis: &[FloatPoly]) -> SpanDistance {
    let len = basis
        .iter()
        .map(|b| b.coeffs().len())
        .chain(core::iter::once(f.coeffs().len()))
        .max()
        .unwrap_or(1);
    let mut q: Vec<Vec<C64>> = Vec::new();
    let mut r_diag: Vec<f64> = Vec::new();
    let mut r_cols: Vec<Vec<C64>> = Vec::new();
    let mut singular = false;
    for b in basis {
        let orig = padded(b, len);
        let n0 = norm(&orig);
        let mut v = orig.clone();
        orthogonalize(&mut v, &q);
        let nv = norm(&v);
        if n0 == 0.0 || nv <= RANK_TOL * n0 {
            singular = true;
            continue;
        }
        for x in v.iter_mut() {
            *x /= nv;
        }
        let col: Vec<C64> = q.iter().map(|qi| dot(&orig, qi)).chain(core::iter::once(C64::new(nv, 0.0))).collect();
        q.push(v);
        r_diag.push(nv);
        r_cols.push(col);
    }
    let mut res = padded(f, len);
    orthogonalize(&mut res, &q);
    let distance = norm(&res);
    SpanDistance {
        distance,
        scaled_distance: distance / f.hardy_norm().max(1.0),
        rank: q.len(),
        gram_condition: gram_condition(&r_cols),
        singular,
    }
}

/// `cond(R*R) = (σ_max(R)/σ_min(R))²`, by power iteration on `R*R` and
/// inverse iteration through triangular solves.
fn gram_condition(cols: &[Vec<C64>]) -> f64 {
    let k = cols.len();
    if k == 0 {
        return 1.0;
    }
    // r[i][j] = R_ij for i ≤ j.
    let r = |i: usize, j: usize| -> C64 { cols[j].get(i).copied().unwrap_or(C64::new(0.0, 0.0)) };
    let mul_r = |x: &[C64]| -> Vec<C64> { (0..k).map(|i| (i..k).map(|j| r(i, j) * x[j]).sum()).collect() };
    let mul_rh = |x: &[C64]| -> Vec<C64> { (0..k).map(|j| (0..=j).map(|i| r(i, j).conj() * x[i]).sum()).collect() };
    // R x = b (upper triangular).
    let solve_r = |b: &[C64]| -> Vec<C64> {
        let mut x = vec![C64::new(0.0, 0.0); k];
        for i in (0..k).rev() {
            let s: C64 = (i + 1..k).map(|j| r(i, j) * x[j]).sum();
            x[i] = (b[i] - s) / r(i, i);
        }
        x
    };
    // R* x = b (lower triangular).
    let solve_rh = |b: &[C64]| -> Vec<C64> {
        let mut x = vec![C64::new(0.0, 0.0); k];
        for i in 0..k {
            let s: C64 = (0..i).map(|j| r(j, i).conj() * x[j]).sum();
            x[i] = (b[i] - s) / r(i, i).conj();
        }
        x
    };
    let start: Vec<C64> = (0..k).map(|i| C64::new(1.0, 0.1 * i as f64)).collect();
    let power = |apply: &dyn Fn(&[C64]) -> Vec<C64>| -> f64 {
        let mut x = start.clone();
        let mut lambda = 0.0;
        for _ in 0..200 {
            let nx = norm(&x);
            for v in x.iter_mut() {
                *v /= nx;
            }
            let y = apply(&x);
            lambda = norm(&y);
            x = y;
        }
        lambda
    };
    let lmax = power(&|x| mul_rh(&mul_r(x)));
    let inv_lmin = power(&|x| solve_r(&solve_rh(x)));
    lmax * inv_lmin
}

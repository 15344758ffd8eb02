//! Finite inner functions: Blaschke products with finitely many zeros and
//! singular inner functions of finitely many point masses.
//!
//! The Blaschke factor for `a ≠ 0` is `(|a|/a)(a − z)/(1 − āz)`, and `z` for
//! `a = 0`. A point mass `μ` at `ζ = e^{iθ}` contributes
//! `exp(−μ (ζ + z)/(ζ − z))`.
//!
//! All series here are float series truncated at a caller-chosen degree
//! `N`; the truncation of a product is computed exactly (up to rounding),
//! never as the product of independently truncated factors.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::scalar::C64;
use crate::series::{FloatPoly, Keep, TaylorPoly};
use crate::{Error, Result};

/// Zeros closer than this to the circle trigger a conditioning warning.
pub const NEAR_BOUNDARY: f64 = 1e-3;

/// Boundary points within this angular distance of an exclusion angle are
/// skipped by [`inner_modulus_check`].
pub const EXCLUSION_RADIUS: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlaschkeZero {
    pub a: C64,
    pub multiplicity: u32,
}

impl BlaschkeZero {
    pub fn new(a: C64, multiplicity: u32) -> Self {
        Self { a, multiplicity }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularAtom {
    /// Boundary angle in `[0, 2π)`.
    pub theta: f64,
    pub mass: f64,
}

impl SingularAtom {
    pub fn new(theta: f64, mass: f64) -> Self {
        Self { theta, mass }
    }

    pub fn point(&self) -> C64 {
        boundary_point(self.theta)
    }
}

/// Canonical representative of an angle in `[0, 2π)`.
pub fn canonical_angle(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t < 0.0 {
        t += TAU;
    }
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = canonical_angle(a - b);
    d.min(TAU - d)
}

/// `e^{iθ}`, with components within `1e-15` of `0` or `±1` snapped so that
/// the quarter-turn points are exact.
pub fn boundary_point(theta: f64) -> C64 {
    let snap = |x: f64| {
        for target in [0.0, 1.0, -1.0] {
            if (x - target).abs() < 1e-15 {
                return target;
            }
        }
        x
    };
    C64::new(snap(libm::cos(theta)), snap(libm::sin(theta)))
}

/// A desk-scale inner function `G = B·S`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct InnerSpec {
    blaschke: Vec<BlaschkeZero>,
    atoms: Vec<SingularAtom>,
}

impl InnerSpec {
    /// Validates the data and merges repeated zeros (adding multiplicities)
    /// and repeated atoms (adding masses). Zero multiplicities are dropped.
    pub fn new(blaschke: Vec<BlaschkeZero>, atoms: Vec<SingularAtom>) -> Result<Self> {
        let mut zeros: Vec<BlaschkeZero> = Vec::new();
        for z in blaschke {
            if !(z.a.re.is_finite() && z.a.im.is_finite()) || z.a.norm() >= 1.0 {
                return Err(Error::ZeroOutsideDisk { re: z.a.re, im: z.a.im });
            }
            if z.multiplicity == 0 {
                continue;
            }
            match zeros.iter_mut().find(|w| (w.a - z.a).norm() <= 1e-14) {
                Some(w) => w.multiplicity += z.multiplicity,
                None => zeros.push(z),
            }
        }
        let mut merged: Vec<SingularAtom> = Vec::new();
        for at in atoms {
            if !at.theta.is_finite() {
                return Err(Error::BadAngle);
            }
            if !(at.mass.is_finite() && at.mass > 0.0) {
                return Err(Error::BadAtomMass(at.mass));
            }
            let theta = canonical_angle(at.theta);
            match merged.iter_mut().find(|w| angle_distance(w.theta, theta) <= 1e-12) {
                Some(w) => w.mass += at.mass,
                None => merged.push(SingularAtom { theta, mass: at.mass }),
            }
        }
        Ok(Self { blaschke: zeros, atoms: merged })
    }

    /// The constant inner function 1.
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn blaschke(&self) -> &[BlaschkeZero] {
        &self.blaschke
    }

    pub fn atoms(&self) -> &[SingularAtom] {
        &self.atoms
    }

    pub fn is_trivial(&self) -> bool {
        self.blaschke.is_empty() && self.atoms.is_empty()
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.blaschke.iter().map(|z| z.multiplicity).sum()
    }

    /// `64 + 16·(total multiplicity + atom count)`.
    pub fn default_trunc_degree(&self) -> usize {
        64 + 16 * (self.total_multiplicity() as usize + self.atoms.len())
    }

    /// Angles excluded from boundary modulus checks: the atom locations.
    /// Finite zero sets have no accumulation points to add.
    pub fn exclusion_angles(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.theta).collect()
    }

    /// Zeros within [`NEAR_BOUNDARY`] of the unit circle.
    pub fn warnings(&self) -> Vec<String> {
        self.blaschke
            .iter()
            .filter(|z| 1.0 - z.a.norm() < NEAR_BOUNDARY)
            .map(|z| alloc::format!("zero {} lies within {NEAR_BOUNDARY} of the unit circle; truncated series converge slowly", z.a))
            .collect()
    }

    /// Taylor coefficients of `B·S` to degree `n`.
    pub fn series(&self, n: usize) -> FloatPoly {
        let s = singular_series(&self.atoms, n);
        apply_blaschke_factors(s, &self.blaschke, n)
    }
}

/// Multiplies a series by each Blaschke factor in turn, keeping degree `n`.
/// Each factor costs `O(n)`: multiply by `c(a − z)`, then divide by
/// `1 − āz` through `y_k = x_k + ā y_{k−1}`.
pub fn apply_blaschke_factors(start: FloatPoly, zeros: &[BlaschkeZero], n: usize) -> FloatPoly {
    let mut cur: Vec<C64> = start.truncate(n).into_coeffs();
    for z in zeros {
        for _ in 0..z.multiplicity {
            if z.a == C64::new(0.0, 0.0) {
                cur.rotate_right(1);
                cur[0] = C64::new(0.0, 0.0);
                continue;
            }
            let r = z.a.norm();
            let unit = C64::new(r, 0.0) / z.a;
            let ca = unit * z.a;
            let mut x = vec![C64::new(0.0, 0.0); n + 1];
            for k in 0..=n {
                x[k] = ca * cur[k];
                if k > 0 {
                    x[k] -= unit * cur[k - 1];
                }
            }
            let abar = z.a.conj();
            let mut prev = C64::new(0.0, 0.0);
            for xk in x.iter_mut() {
                *xk += abar * prev;
                prev = *xk;
            }
            cur = x;
        }
    }
    TaylorPoly::new(cur)
}

/// Taylor coefficients of the finite Blaschke product to degree `n`.
pub fn blaschke_series(zeros: &[BlaschkeZero], n: usize) -> FloatPoly {
    apply_blaschke_factors(FloatPoly::one(), zeros, n)
}

/// Taylor coefficients of `exp(−Σ μ_j (ζ_j + z)/(ζ_j − z))` to degree `n`.
///
/// The exponent is `E(z) = −Σμ_j − 2 Σ_{k≥1} (Σ_j μ_j ζ̄_j^k) z^k`, and
/// `S = exp(E)` follows from `k s_k = Σ_{j=1}^k j e_j s_{k−j}`.
pub fn singular_series(atoms: &[SingularAtom], n: usize) -> FloatPoly {
    let mut e = vec![C64::new(0.0, 0.0); n + 1];
    for at in atoms {
        e[0] -= at.mass;
        let zbar = at.point().conj();
        let mut p = C64::new(1.0, 0.0);
        for ek in e.iter_mut().skip(1) {
            p *= zbar;
            *ek -= 2.0 * at.mass * p;
        }
    }
    let weighted: Vec<C64> = e.iter().enumerate().map(|(j, c)| c * j as f64).collect();
    let mut s = vec![C64::new(0.0, 0.0); n + 1];
    s[0] = C64::new(libm::exp(e[0].re), 0.0);
    for k in 1..=n {
        let acc: C64 = (1..=k).map(|j| weighted[j] * s[k - j]).sum();
        s[k] = acc / k as f64;
    }
    TaylorPoly::new(s)
}

/// Worst deviations found by [`inner_modulus_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct ModulusReport {
    /// Largest `| |f(e^{iθ})| − 1 |` over non-excluded grid angles.
    pub boundary_worst: f64,
    pub boundary_worst_theta: f64,
    /// Largest `|f(z)| − 1` over interior samples (negative when `|f| < 1`
    /// everywhere sampled).
    pub interior_worst: f64,
    pub interior_worst_point: C64,
    pub boundary_points: usize,
    pub tol: f64,
    pub ok: bool,
}

const INTERIOR_RADII: [f64; 4] = [0.0, 0.5, 0.75, 0.9];

/// Checks `|f| ≤ 1 + tol` inside the disk and `||f| − 1| ≤ tol` on the
/// boundary grid, skipping angles within [`EXCLUSION_RADIUS`] of any
/// exclusion angle.
pub fn inner_modulus_check(f: &FloatPoly, grid: usize, exclusions: &[f64], tol: f64) -> ModulusReport {
    let mut boundary_worst = 0.0;
    let mut boundary_worst_theta = 0.0;
    let mut boundary_points = 0;
    for j in 0..grid {
        let theta = TAU * j as f64 / grid as f64;
        if exclusions.iter().any(|&e| angle_distance(theta, e) <= EXCLUSION_RADIUS) {
            continue;
        }
        boundary_points += 1;
        let dev = (f.evaluate_c64(C64::from_polar(1.0, theta)).norm() - 1.0).abs();
        if dev > boundary_worst {
            boundary_worst = dev;
            boundary_worst_theta = theta;
        }
    }
    let mut interior_worst = f64::NEG_INFINITY;
    let mut interior_worst_point = C64::new(0.0, 0.0);
    let angles = grid.clamp(1, 256);
    for &r in &INTERIOR_RADII {
        for j in 0..angles {
            let z = C64::from_polar(r, TAU * j as f64 / angles as f64);
            let excess = f.evaluate_c64(z).norm() - 1.0;
            if excess > interior_worst {
                interior_worst = excess;
                interior_worst_point = z;
            }
            if r == 0.0 {
                break;
            }
        }
    }
    ModulusReport {
        ok: boundary_worst <= tol && interior_worst <= tol,
        boundary_worst,
        boundary_worst_theta,
        interior_worst,
        interior_worst_point,
        boundary_points,
        tol,
    }
}

/// Verdict on divisibility by the singular factor. Finitely many
/// coefficients cannot decide membership of `f/S` in `H²`; the check is a
/// tail-stability heuristic.
#[derive(Clone, Debug, PartialEq)]
pub enum SingularVerdict {
    /// No atoms: the singular factor is 1.
    NotApplicable,
    Heuristic {
        ok: bool,
        /// `‖h‖` truncated at `N_check/2`.
        norm_half: f64,
        /// `‖h‖` truncated at `N_check`.
        norm_full: f64,
    },
}

impl SingularVerdict {
    pub fn ok(&self) -> bool {
        match self {
            SingularVerdict::NotApplicable => true,
            SingularVerdict::Heuristic { ok, .. } => *ok,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SingularVerdict::NotApplicable => "exact",
            SingularVerdict::Heuristic { .. } => "heuristic",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivisibilityReport {
    pub blaschke_ok: bool,
    /// Largest `|f^{(j)}(a)| / scale` over zeros `a` and `j < mult(a)`.
    pub blaschke_worst: f64,
    pub scale: f64,
    pub singular: SingularVerdict,
}

impl DivisibilityReport {
    pub fn ok(&self) -> bool {
        self.blaschke_ok && self.singular.ok()
    }
}

/// Does `G` divide the inner part of `f`?
///
/// Blaschke part: `f` must vanish to order `m` at each zero `a` of
/// multiplicity `m`, tested as `|f^{(j)}(a)| ≤ tol · scale` with
/// `scale = max(1, ‖f‖_{S_m²})`, `m` the largest multiplicity.
///
/// Singular part: `h = f · Π(1 − āz)^m / S` is formed by series division
/// (the polynomial factor cancels the Blaschke denominators and does not
/// affect membership in `H²`), and its `H²` norm truncated at `N_check/2`
/// and `N_check` must agree to relative `tol`.
pub fn divides_inner_part(g: &InnerSpec, f: &FloatPoly, n_check: usize, tol: f64) -> Result<DivisibilityReport> {
    let max_mult = g.blaschke.iter().map(|z| z.multiplicity).max().unwrap_or(0) as usize;
    let scale = crate::spaces::sn_norm(f, max_mult.max(1)).total.max(1.0);
    let mut blaschke_worst: f64 = 0.0;
    for z in &g.blaschke {
        let mut d = f.clone();
        for _ in 0..z.multiplicity {
            blaschke_worst = blaschke_worst.max(d.evaluate_c64(z.a).norm() / scale);
            d = d.differentiate(1);
        }
    }
    let singular = if g.atoms.is_empty() || f.is_zero() {
        SingularVerdict::NotApplicable
    } else {
        let s = singular_series(&g.atoms, n_check);
        if s.coeff(0).norm() == 0.0 {
            return Err(Error::ZeroInner);
        }
        let mut p = f.truncate(n_check);
        for z in &g.blaschke {
            let lin = FloatPoly::new(vec![C64::new(1.0, 0.0), -z.a.conj()]);
            for _ in 0..z.multiplicity {
                p = p.multiply(&lin, Keep::Upto(n_check));
            }
        }
        let h = p.divide(&s, n_check).ok_or(Error::ZeroInner)?;
        let norm_full = h.hardy_norm();
        let norm_half = h.truncate(n_check / 2).hardy_norm();
        let ok = norm_full.is_finite() && (norm_full - norm_half).abs() <= tol * norm_full.max(1e-300);
        SingularVerdict::Heuristic { ok, norm_half, norm_full }
    };
    Ok(DivisibilityReport {
        blaschke_ok: blaschke_worst <= tol,
        blaschke_worst,
        scale,
        singular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_at_origin_is_z() {
        let b = blaschke_series(&[BlaschkeZero::new(c(0.0, 0.0), 1)], 5);
        assert_eq!(b, FloatPoly::monomial(1, c(1.0, 0.0)));
        let b3 = blaschke_series(&[BlaschkeZero::new(c(0.0, 0.0), 3)], 8);
        assert_eq!(b3, FloatPoly::monomial(3, c(1.0, 0.0)));
    }

    #[test]
    fn half_zero_coefficients() {
        let b = blaschke_series(&[BlaschkeZero::new(c(0.5, 0.0), 1)], 2);
        assert_eq!(b.coeffs(), &[c(0.5, 0.0), c(-0.75, 0.0), c(-0.375, 0.0)]);
    }

    #[test]
    fn vanishes_at_own_zeros() {
        let zeros = [
            BlaschkeZero::new(c(0.3, -0.2), 1),
            BlaschkeZero::new(c(-0.5, 0.4), 2),
            BlaschkeZero::new(c(0.0, 0.6), 1),
        ];
        let b = blaschke_series(&zeros, 128);
        for z in &zeros {
            assert!(b.evaluate_c64(z.a).norm() <= 1e-10);
        }
        // Double zero: derivative vanishes too.
        assert!(b.differentiate(1).evaluate_c64(c(-0.5, 0.4)).norm() <= 1e-9);
    }

    #[test]
    fn value_at_origin_is_product_of_moduli() {
        let zeros = [BlaschkeZero::new(c(0.9, 0.0), 1), BlaschkeZero::new(c(-0.3, 0.4), 2)];
        let b = blaschke_series(&zeros, 64);
        let expected = 0.9 * 0.5f64.powi(2);
        assert_relative_eq!(b.evaluate_c64(c(0.0, 0.0)).re, expected, epsilon = 1e-10);
        assert!(b.coeff(0).im.abs() <= 1e-12);
    }

    #[test]
    fn product_truncation_matches_closed_form_inside() {
        let zeros = [BlaschkeZero::new(c(0.4, 0.3), 1), BlaschkeZero::new(c(-0.2, -0.1), 1)];
        let b = blaschke_series(&zeros, 200);
        let z = c(0.3, 0.5);
        let closed: C64 = zeros
            .iter()
            .map(|w| (w.a.norm() / w.a) * (w.a - z) / (1.0 - w.a.conj() * z))
            .product();
        assert!((b.evaluate_c64(z) - closed).norm() <= 1e-13);
    }

    #[test]
    fn singular_examples() {
        assert_eq!(singular_series(&[], 10), FloatPoly::one().truncate(10));
        let s = singular_series(&[SingularAtom::new(0.0, 1.0)], 32);
        assert_relative_eq!(s.evaluate_c64(c(0.0, 0.0)).re, (-1.0f64).exp());
        // Along the radius toward the atom the modulus decreases to 0. The
        // truncation must be long enough to resolve r = 0.99.
        let s = singular_series(&[SingularAtom::new(0.0, 1.0)], 4000);
        let vals: Vec<f64> = [0.5, 0.9, 0.99].iter().map(|&r| s.evaluate_c64(c(r, 0.0)).norm()).collect();
        assert!(vals[0] > vals[1] && vals[1] > vals[2], "{vals:?}");
        let exact = |r: f64| (-(1.0 + r) / (1.0 - r)).exp();
        assert_relative_eq!(vals[0], exact(0.5), epsilon = 1e-12);
        assert!(vals[2] < 1e-6);
    }

    #[test]
    fn singular_matches_closed_form_inside() {
        let atoms = [SingularAtom::new(1.0, 0.3), SingularAtom::new(4.0, 0.7)];
        let s = singular_series(&atoms, 400);
        let z = c(-0.2, 0.4);
        let closed = atoms
            .iter()
            .map(|a| {
                let zeta = a.point();
                -a.mass * (zeta + z) / (zeta - z)
            })
            .sum::<C64>()
            .exp();
        assert!((s.evaluate_c64(z) - closed).norm() <= 1e-12);
    }

    #[test]
    fn exp_additivity() {
        let a = [SingularAtom::new(0.5, 0.4)];
        let b = [SingularAtom::new(2.5, 0.25), SingularAtom::new(5.0, 0.1)];
        let n = 96;
        let both: Vec<SingularAtom> = a.iter().chain(&b).copied().collect();
        let joint = singular_series(&both, n);
        let product = singular_series(&a, n).multiply(&singular_series(&b, n), Keep::Upto(n));
        assert!(joint.max_abs_diff(&product) <= 1e-10);
    }

    #[test]
    fn modulus_check_blaschke_passes() {
        let b = blaschke_series(&[BlaschkeZero::new(c(0.5, 0.0), 1)], 64);
        let r = inner_modulus_check(&b, 1024, &[], 1e-6);
        assert!(r.ok, "{r:?}");
        assert!(r.boundary_worst < 1e-12);
        assert_eq!(r.boundary_points, 1024);
    }

    #[test]
    fn modulus_check_rejects_two_z() {
        let f = FloatPoly::monomial(1, c(2.0, 0.0));
        let r = inner_modulus_check(&f, 256, &[], 1e-6);
        assert!(!r.ok);
        assert_relative_eq!(r.boundary_worst, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn modulus_check_singular_off_atom() {
        // The boundary values of the closed form are unimodular off the atom;
        // the degree-96 partial sum converges only slowly there (Taylor
        // coefficients of a singular inner function decay like k^{-3/4}), so
        // the tolerance reflects the truncation, and it shrinks with N.
        let atom = [SingularAtom::new(0.0, 0.25)];
        let closed = |t: f64| {
            let z = C64::from_polar(1.0, t);
            (-0.25 * (1.0 + z) / (1.0 - z)).exp().norm()
        };
        for t in [0.2, 1.0, 3.0, 6.0] {
            assert_relative_eq!(closed(t), 1.0, epsilon = 1e-12);
        }
        let s96 = singular_series(&atom, 96);
        let r96 = inner_modulus_check(&s96, 4096, &[0.0], 0.15);
        assert!(r96.ok, "{r96:?}");
        let s400 = singular_series(&atom, 400);
        let r400 = inner_modulus_check(&s400, 4096, &[0.0], 0.15);
        assert!(r400.boundary_worst < r96.boundary_worst);
        let no_exclusion = inner_modulus_check(&s96, 4096, &[], 0.15);
        assert!(no_exclusion.boundary_points > r96.boundary_points);
    }

    #[test]
    fn spec_validation_and_merging() {
        assert!(InnerSpec::new(vec![BlaschkeZero::new(c(1.0, 0.0), 1)], vec![]).is_err());
        assert!(InnerSpec::new(vec![], vec![SingularAtom::new(0.0, 0.0)]).is_err());
        assert!(InnerSpec::new(vec![], vec![SingularAtom::new(f64::NAN, 1.0)]).is_err());
        let g = InnerSpec::new(
            vec![BlaschkeZero::new(c(0.5, 0.0), 1), BlaschkeZero::new(c(0.5, 0.0), 2)],
            vec![SingularAtom::new(TAU + 0.5, 0.25), SingularAtom::new(0.5, 0.25)],
        )
        .unwrap();
        assert_eq!(g.blaschke().len(), 1);
        assert_eq!(g.total_multiplicity(), 3);
        assert_eq!(g.atoms().len(), 1);
        assert_relative_eq!(g.atoms()[0].mass, 0.5);
        assert_eq!(g.default_trunc_degree(), 64 + 16 * 4);
        let near = InnerSpec::new(vec![BlaschkeZero::new(c(0.9995, 0.0), 1)], vec![]).unwrap();
        assert_eq!(near.warnings().len(), 1);
        assert!(g.warnings().is_empty());
    }

    #[test]
    fn divides_examples() {
        let g = InnerSpec::new(vec![BlaschkeZero::new(c(0.5, 0.0), 1)], vec![]).unwrap();
        let n = 96;
        let multiple = g.series(n).multiply(&FloatPoly::from_ints(&[1, 1]), Keep::Full);
        let r = divides_inner_part(&g, &multiple, 64, 1e-9).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.singular.label(), "exact");

        let r = divides_inner_part(&g, &FloatPoly::from_ints(&[1, 1]), 64, 1e-9).unwrap();
        assert!(!r.ok());
        assert!(r.blaschke_worst > 0.1);

        let trivial = InnerSpec::trivial();
        assert!(divides_inner_part(&trivial, &FloatPoly::from_ints(&[3, -1, 2]), 64, 1e-9).unwrap().ok());
    }

    #[test]
    fn singular_divisibility_heuristic() {
        let g = InnerSpec::new(
            vec![BlaschkeZero::new(c(0.9, 0.0), 1)],
            vec![SingularAtom::new(1.0, 0.5)],
        )
        .unwrap();
        let multiple = g.series(256).multiply(&FloatPoly::from_ints(&[2, -1, 1]), Keep::Upto(256));
        let r = divides_inner_part(&g, &multiple, 64, 1e-9).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.singular.label(), "heuristic");

        // Missing the singular factor: f/S has exploding coefficients.
        let only_b = blaschke_series(g.blaschke(), 256);
        let r = divides_inner_part(&g, &only_b, 64, 1e-9).unwrap();
        assert!(r.blaschke_ok);
        assert!(!r.singular.ok());
    }
}

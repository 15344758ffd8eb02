//! Seeded random inputs. Every case draws from its own ChaCha stream keyed
//! by `(seed, case index)`, so results do not depend on scheduling.

use std::f64::consts::TAU;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use vlat_core::inner::{BlaschkeZero, InnerSpec, SingularAtom};
use vlat_core::lattice::{suggested_trunc_degree, IdealSpec, ZeroChain};
use vlat_core::series::TaylorPoly;
use vlat_core::{Mode, Scalar, C64};

pub fn case_rng(seed: u64, case: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

/// Dyadic denominator used for rational coefficients.
pub const DYADIC_BITS: u32 = 8;

/// Uniform in `[-1, 1]`; a multiple of `2^-8` in rational mode, so the same
/// draw is exactly representable in both modes.
pub fn unit_real(rng: &mut impl Rng, mode: Mode) -> f64 {
    match mode {
        Mode::Float => rng.gen_range(-1.0..=1.0),
        Mode::Rational => {
            let d = 1i64 << DYADIC_BITS;
            rng.gen_range(-d..=d) as f64 / d as f64
        }
    }
}

/// Coefficients uniform in the complex unit square, degree uniform in
/// `[0, max_degree]`.
pub fn random_poly<S: Scalar>(rng: &mut impl Rng, max_degree: usize) -> TaylorPoly<S> {
    let degree = rng.gen_range(0..=max_degree);
    TaylorPoly::new(
        (0..=degree)
            .map(|_| {
                let re = unit_real(rng, S::MODE);
                let im = unit_real(rng, S::MODE);
                S::from_c64(C64::new(re, im))
            })
            .collect(),
    )
}

/// Bounds for [`random_ideal_spec`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecBounds {
    pub n_max: usize,
    pub max_points: usize,
    pub max_zeros: usize,
    pub max_radius: f64,
    pub max_atoms: usize,
    /// Atom masses are drawn from `[0.05, max_mass]`.
    pub max_mass: f64,
    pub tol: f64,
}

impl Default for SpecBounds {
    fn default() -> Self {
        Self { n_max: 3, max_points: 4, max_zeros: 2, max_radius: 0.9, max_atoms: 1, max_mass: 1.0, tol: 1e-9 }
    }
}

/// A spec that passes validation by construction: atoms sit on points of
/// `K_{n−1}`, and the truncation degree is the suggested one.
pub fn random_ideal_spec(rng: &mut impl Rng, bounds: &SpecBounds) -> IdealSpec {
    let n = rng.gen_range(1..=bounds.n_max.max(1));
    let atom_count = rng.gen_range(0..=bounds.max_atoms);
    let min_points = atom_count.min(bounds.max_points);
    let point_count = rng.gen_range(min_points..=bounds.max_points.max(min_points));
    // Each point gets a depth d ∈ [1, n]: it lies in K_0, …, K_{d−1}.
    // The first `atom_count` points have full depth and carry the atoms.
    let points: Vec<(f64, usize)> = (0..point_count)
        .map(|j| {
            let theta = rng.gen_range(0.0..TAU);
            let depth = if j < atom_count { n } else { rng.gen_range(1..=n) };
            (theta, depth)
        })
        .collect();
    let sets: Vec<Vec<f64>> =
        (0..n).map(|i| points.iter().filter(|&&(_, d)| d > i).map(|&(t, _)| t).collect()).collect();
    let atoms: Vec<SingularAtom> =
        points.iter().take(atom_count).map(|&(t, _)| SingularAtom::new(t, rng.gen_range(0.05..=bounds.max_mass))).collect();
    let zero_count = rng.gen_range(0..=bounds.max_zeros);
    let zeros: Vec<BlaschkeZero> = (0..zero_count)
        .map(|_| {
            // Uniform in the disk of radius max_radius.
            let r = bounds.max_radius * rng.gen::<f64>().sqrt();
            let t = rng.gen_range(0.0..TAU);
            BlaschkeZero::new(C64::from_polar(r, t), rng.gen_range(1..=2))
        })
        .collect();
    let inner = InnerSpec::new(zeros, atoms).expect("generated inner data is valid");
    let trunc = suggested_trunc_degree(&inner, n, bounds.tol);
    IdealSpec::new(n, inner, ZeroChain::new(sets).expect("generated chain is nested"), trunc, bounds.tol)
        .expect("generated spec is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use vlat_core::lattice::validate_spec;
    use vlat_core::series::{FloatPoly, RationalPoly};

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| case_rng(7, 3).gen()).collect();
        let b: Vec<u64> = (0..4).map(|_| case_rng(7, 3).gen()).collect();
        assert_eq!(a, b);
        assert_ne!(case_rng(7, 3).gen::<u64>(), case_rng(7, 4).gen::<u64>());
        assert_ne!(case_rng(7, 3).gen::<u64>(), case_rng(8, 3).gen::<u64>());
    }

    #[test]
    fn rational_draws_are_dyadic() {
        let p: RationalPoly = random_poly(&mut case_rng(1, 0), 10);
        for c in p.coeffs() {
            assert!(c.re.denom() <= &256.into() && c.im.denom() <= &256.into());
        }
        let f: FloatPoly = random_poly(&mut case_rng(1, 0), 10);
        assert!(f.coeffs().iter().all(|c| c.re.abs() <= 1.0 && c.im.abs() <= 1.0));
    }

    #[test]
    fn random_specs_validate() {
        for case in 0..200 {
            let spec = random_ideal_spec(&mut case_rng(11, case), &SpecBounds::default());
            validate_spec(&spec).unwrap();
            assert!(spec.n() <= 3 && spec.chain().set(0).len() <= 4);
            assert!(spec.inner().blaschke().len() <= 2 && spec.inner().atoms().len() <= 1);
        }
    }
}

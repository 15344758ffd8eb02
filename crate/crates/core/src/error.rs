use alloc::string::String;

use crate::scalar::Mode;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("scalar mode mismatch: {left:?} vs {right:?}")]
    ModeMismatch { left: Mode, right: Mode },
    #[error("unknown scalar mode `{0}`")]
    UnknownMode(String),
    #[error("malformed rational `{0}`")]
    BadRational(String),
    #[error("order parameter must be at least 1")]
    ZeroOrder,
    #[error("unknown operator tag `{0}`")]
    UnknownOperator(String),
    #[error("Blaschke zero {re}+{im}i is not strictly inside the unit disk")]
    ZeroOutsideDisk { re: f64, im: f64 },
    #[error("singular atom mass must be positive and finite, got {0}")]
    BadAtomMass(f64),
    #[error("non-finite boundary angle")]
    BadAngle,
    #[error("chain of length {got} does not match n = {expected}")]
    ChainLength { expected: usize, got: usize },
    #[error("nesting violated: angle {angle} is in K_{inner} but not in K_{outer}")]
    NestingViolated { outer: usize, inner: usize, angle: f64 },
    #[error("singular atom at angle {0} is not in K_(n-1)")]
    AtomOutsideKernel(f64),
    #[error("cannot divide by an identically zero inner function")]
    ZeroInner,
    #[error("empty cofactor list")]
    EmptyCofactors,
    #[error("empty basis")]
    EmptyBasis,
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("differential does not square to zero in degree {0}")]
    DifferentialSquare(i32),

    #[error("map is not closed: {0}")]
    NotClosed(String),

    #[error("wrong degree: expected {expected}, got {got}")]
    WrongDegree { expected: i32, got: i32 },

    #[error("map is not an endomorphism")]
    NotEndomorphism,

    #[error("associativity fails on basis triple ({0}, {1}, {2})")]
    AssociativityViolation(usize, usize, usize),

    #[error("unit axiom fails against basis element {0}")]
    UnitViolation(usize),

    #[error("Leibniz rule fails on basis pair ({0}, {1})")]
    LeibnizViolation(usize, usize),

    #[error("algebra differential does not square to zero on basis element {0}")]
    DifferentialSquareViolation(usize),

    #[error("multiplication is not degree-additive on ({0}, {1})")]
    DegreeViolation(usize, usize),

    #[error("structure constant ({i}, {j}, {k}) out of range for dimension {dim}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, dim: usize },

    #[error("algebra is not concentrated in degree 0 with zero differential")]
    NotDegreeZeroConcentrated,

    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("twist is not strictly lower-triangular at ({0}, {1})")]
    NotTriangular(usize, usize),

    #[error("twist entry ({0}, {1}) is incompatible with generator shifts")]
    ShiftMismatch(usize, usize),

    #[error("idempotent is not idempotent or not closed")]
    BadIdempotent,

    #[error("endomorphism is not compatible with the idempotent (e f e != f)")]
    IdempotentIncompatible,

    #[error("augmentation is not a quasi-isomorphism")]
    AugmentationNotQuasiIso,

    #[error("no diagonal resolution available for {0}")]
    NoDiagonalResolution(String),

    #[error("middle algebra {0} is not separable")]
    NotSeparable(String),

    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

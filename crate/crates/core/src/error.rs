use thiserror::Error;

/// Errors raised across the laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NonHermitian(f64),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite matrix entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("problem too large: {what} = {value} exceeds {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("value out of range: {0}")]
    BadRange(String),

    #[error("Hamiltonian has no terms")]
    EmptyHamiltonian,

    #[error("operator is not of controlled form |0><0|(x)I + |1><1|(x)U ({0:e} off)")]
    NotControlledForm(f64),

    #[error("eigenphase {0} lies on the branch cut of the principal logarithm")]
    BranchCut(f64),

    #[error("encoded block would exceed unit norm ({0})")]
    NormBound(f64),

    #[error("phase-factor solver did not converge (residual {0:e})")]
    NotConverged(f64),

    #[error("polynomial violates QSP conditions: {0}")]
    ConditionViolated(String),

    #[error("QET circuit needs an odd number of rotations, got {0}")]
    BadPhaseCount(usize),

    #[error("iQFT band must satisfy 1 <= b <= r (b = {band}, r = {r})")]
    BadBand { band: usize, r: usize },

    #[error("delta = {delta} is below the feasibility floor {floor}")]
    InfeasibleDelta { delta: f64, floor: f64 },

    #[error("{n_anc} ancillas outside the admissible range [{min}, {max}]")]
    AncillaRange { n_anc: usize, min: usize, max: usize },

    #[error("post-selection probability {0:e} is too small")]
    PostselectFailed(f64),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

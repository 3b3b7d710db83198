use thiserror::Error;

/// Which half of the ergodicity check failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErgodicityFailure {
    Reducible,
    Periodic { period: usize },
    ReducibleAndPeriodic { period: usize },
}

impl std::fmt::Display for ErgodicityFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ErgodicityFailure::Reducible => write!(f, "not irreducible"),
            ErgodicityFailure::Periodic { period } => {
                write!(f, "periodic (gcd of cycle lengths {period})")
            }
            ErgodicityFailure::ReducibleAndPeriodic { period } => {
                write!(f, "not irreducible and periodic (period {period} on the start class)")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("empty matrix")]
    Empty,

    #[error("row {row} sums to {sum}, deviating from 1 by more than {tol:e}")]
    RowSum { row: usize, sum: f64, tol: f64 },

    #[error("entry P[{row}][{col}] = {value} is negative")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("entry P[{row}][{col}] = {value} is not a finite probability")]
    BadEntry { row: usize, col: usize, value: f64 },

    #[error("chain is not ergodic: {0}")]
    NotErgodic(ErgodicityFailure),

    #[error("chain is not reversible (detailed balance violated by {violation:e})")]
    NotReversible { violation: f64 },

    #[error("power iteration did not converge within {iterations} iterations (last change {change:e})")]
    Convergence { iterations: usize, change: f64 },

    #[error("mixing time exceeds the iteration cap of {cap} steps")]
    IterationCap { cap: u64 },

    #[error("singular linear system: {0}")]
    SingularSystem(&'static str),

    #[error("eigensolver failure: {0}")]
    Eigensolver(String),

    #[error("stationary distribution has zero entry at state {0}")]
    ZeroStationaryEntry(usize),

    #[error("state index {index} out of range for {n} states")]
    Index { index: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{name} = {value} is out of range: {expected}")]
    Range {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("bad generator parameters: {0}")]
    BadParams(String),

    #[error("top eigenvalue of the discriminant is degenerate (next Hamiltonian eigenvalue {next_mu:e})")]
    DegenerateTopEigenvalue { next_mu: f64 },

    #[error("input state is not normalized (norm^2 = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("pointer size {0} must be an even power of two and at least 4")]
    BadSize(usize),

    #[error("post-selection probability {probability:e} is numerically zero")]
    ZeroProbability { probability: f64 },

    #[error("gap estimate {0} must be positive")]
    NonPositiveGap(f64),

    #[error("no valid target: pi_j = {pi_j} for state {j}, but s* needs pi_j < 1/2")]
    NoValidJ { j: usize, pi_j: f64 },

    #[error("coefficient A diverges at alpha = 1")]
    Divergence,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("sampled post-selection exceeded {0} attempts")]
    TooManyAttempts(u64),

    #[error("chain JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    ok: bool,
    expected: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Range {
            name,
            value,
            expected,
        })
    }
}

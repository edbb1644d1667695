//! Crate-wide error type. Every fallible operation returns one of these
//! variants, so the CLI can map the whole family onto its two failure exit
//! codes (config vs computation).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Fock cutoffs below 1 cannot represent two-photon states, which g²(0)
    /// needs.
    #[error("invalid truncation: cutoff {0} < 1")]
    InvalidTruncation(usize),

    /// Operands live on Hilbert spaces of different dimension.
    #[error("space mismatch: expected dimension {expected}, found {found}")]
    SpaceMismatch { expected: usize, found: usize },

    /// Dissipator rates must be nonnegative.
    #[error("invalid rate {0}: dissipator rates must be >= 0")]
    InvalidRate(f64),

    /// Physical parameters violate their constraints (negative rates,
    /// non-positive decay, ...).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Dense superoperators grow as dim²×dim²; beyond this size the direct
    /// splitting solver must be used instead.
    #[error("dimension {dim} too large for a dense superoperator (max {max})")]
    DimensionTooLarge { dim: usize, max: usize },

    /// The steady-state system is rank-deficient beyond the expected
    /// one-dimensional kernel.
    #[error("degenerate steady state: linear system is singular")]
    DegenerateSteadyState,

    /// Steady-state solve finished but the result fails its residual or
    /// state-invariant checks.
    #[error("steady-state solve failed: {0}")]
    SolveFailed(String),

    /// Time integration exceeded the allowed trace drift.
    #[error("integration unstable: trace drift {drift:.3e} exceeds {limit:.3e}")]
    IntegrationUnstable { drift: f64, limit: f64 },

    /// g²(0) is undefined when the mode is unpopulated.
    #[error("no photons: <a†a> = {0:.3e} is below threshold")]
    NoPhotons(f64),

    /// The one- or two-excitation amplitude block is exactly singular.
    #[error("degenerate manifold: amplitude block is singular")]
    DegenerateManifold,

    /// Convergence tolerance outside (0, 0.1].
    #[error("invalid tolerance {0}: must be in (0, 0.1]")]
    InvalidTolerance(f64),

    /// Malformed sweep specification.
    #[error("invalid sweep spec: {0}")]
    SpecError(String),

    /// Scalar minimization found no finite objective values.
    #[error("optimization failed: {0}")]
    OptimizationFailed(String),

    /// Figure preset name not in the registry.
    #[error("unknown figure preset '{0}'")]
    UnknownPreset(String),

    /// LAPACK reported a singular factorization (zero pivot).
    #[error("singular matrix in {routine}")]
    SingularMatrix { routine: &'static str },

    /// LAPACK reported an argument/convergence failure.
    #[error("{routine} failed with info={info}")]
    LapackError { routine: &'static str, info: i32 },
}

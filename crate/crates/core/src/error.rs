use thiserror::Error;

/// Errors raised by the numerical kernel, the state and channel layers,
/// the constructions and the certification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NonHermitian { residual: f64 },

    #[error("negative eigenvalue {value:e} below tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("overlap with the Gibbs state vanishes ({overlap:e})")]
    ZeroOverlap { overlap: f64 },

    #[error("inverse temperatures differ: {input} vs {output}")]
    BetaMismatch { input: f64, output: f64 },

    #[error("Choi matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("map is not trace preserving (residual {residual:e})")]
    NotTracePreserving { residual: f64 },

    #[error("states are not orthogonal (Tr(rho1 rho2) = {overlap:e})")]
    NotOrthogonal { overlap: f64 },

    #[error("infeasible eta: complementary state has eigenvalue {min_eigenvalue:e}")]
    InfeasibleEta { min_eigenvalue: f64 },

    #[error("precondition violated: {condition} (residual {residual:e})")]
    PreconditionViolated { condition: String, residual: f64 },

    #[error(
        "Gibbs weights do not satisfy tau_S[i] < tau_S'[i'] < tau_S[j]: \
         tau_S[i] = {tau_s_i}, tau_S'[i'] = {tau_sp_ip}, tau_S[j] = {tau_s_j}"
    )]
    ConditionNotMet { tau_s_i: f64, tau_sp_ip: f64, tau_s_j: f64 },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("scale parameter must be positive, got {0}")]
    NonPositiveA(f64),

    #[error("environment state is not a pure incoherent state (residual {residual:e})")]
    CoherentEnvironmentState { residual: f64 },

    #[error("reversible pair carries no recovery channel")]
    MissingRecovery,

    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

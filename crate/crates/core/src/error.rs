use thiserror::Error;

/// Everything that can go wrong inside the core crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NonHermitianInput { defect: f64 },
    #[error("matrix is not symmetric (defect {defect:.3e})")]
    AsymmetricInput { defect: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("not a valid density matrix: {reason}")]
    InvalidState { reason: &'static str },
    #[error("parameter `{name}` = {value} is out of range")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("time must be non-negative, got {0}")]
    InvalidTime(f64),
    #[error("step {dt} exceeds the stability limit {limit}")]
    StepTooLarge { dt: f64, limit: f64 },
    #[error("positivity lost at t = {t} (min eigenvalue {min_eigenvalue:.3e})")]
    PositivityLost { t: f64, min_eigenvalue: f64 },
    #[error("correlation Tr(rho s_n x s_m) has imaginary residue {residue:.3e}")]
    NonRealCorrelation { residue: f64 },
    #[error("radicand {0:.3e} is negative beyond round-off")]
    NegativeRadicand(f64),
    #[error("model variant has no stationary state")]
    UnsupportedVariant,
    #[error("unknown figure {0}")]
    UnknownFigure(u32),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

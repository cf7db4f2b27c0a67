use thiserror::Error;

/// Errors raised by validation and by operations with restricted domains.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("direction is not a unit vector (norm {0})")]
    NotUnitVector(f64),

    #[error("Bloch vector longer than one (norm {0})")]
    BlochTooLong(f64),

    #[error("matrix is not Hermitian (deviation {0})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0})")]
    NotPositive(f64),

    #[error("negative probability {0}")]
    NegativeProbability(f64),

    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("degenerate constraint geometry: {0}")]
    DegenerateGeometry(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_domain(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    domain: &'static str,
) -> Result<()> {
    if value.is_nan() || value < lo || value > hi {
        return Err(Error::Domain {
            name,
            value,
            domain,
        });
    }
    Ok(())
}

use thiserror::Error;

/// Errors produced by the numerical and physical layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A special function left the representable range. `exponent` is the
    /// natural-log magnitude of the value that could not be represented.
    #[error("overflow: result magnitude ~ e^{exponent:.1} exceeds f64 range")]
    Overflow { exponent: f64 },

    /// An iterative quadrature failed to reach its tolerance.
    #[error("accuracy not reached: last two estimates {last:e} and {previous:e}")]
    Accuracy { last: f64, previous: f64 },

    /// The integrand of a Laguerre integral grows at least as fast as the weight.
    #[error(
        "laguerre integrand grows like e^({rate:.3} y) (need < 1); \
         shrink |V0| or move the contour radius toward the branch points"
    )]
    Divergence { rate: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    /// The kernel factors are singular at zero separation.
    #[error("kernel factor is singular at zeta = 0")]
    SingularPoint,

    #[error("classically forbidden segment [{from}, {to}]")]
    ForbiddenRegion { from: f64, to: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{field}: {message}")]
    InvalidInput { field: String, message: String },
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidInput {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

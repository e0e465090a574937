use thiserror::Error;

/// Domain errors raised by the algebra, product, Dirichlet and zero modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("analytic part has zero derivative; dilatation is undefined")]
    ConstantAnalyticPart,

    #[error("input harmonic function is constant")]
    ConstantInput,

    #[error("alpha must be a nonzero real")]
    InvalidAlpha,

    #[error("point {re}+{im}i lies outside the open unit disk")]
    OutsideDisk { re: f64, im: f64 },

    #[error("degenerate degrees: deg h = {} must exceed deg g = {}", show_deg(.deg_h), show_deg(.deg_g))]
    DegenerateDegrees {
        deg_h: Option<usize>,
        deg_g: Option<usize>,
    },

    #[error("function is numerically zero on the contour")]
    NearZeroOnContour,

    #[error("zero isolation failed: {0}")]
    NonIsolatedZeros(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ConstantAnalyticPart => "ConstantAnalyticPart",
            Error::ConstantInput => "ConstantInput",
            Error::InvalidAlpha => "InvalidAlpha",
            Error::OutsideDisk { .. } => "OutsideDisk",
            Error::DegenerateDegrees { .. } => "DegenerateDegrees",
            Error::NearZeroOnContour => "NearZeroOnContour",
            Error::NonIsolatedZeros(_) => "NonIsolatedZeros",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

fn show_deg(d: &Option<usize>) -> String {
    d.map_or_else(|| "-inf".to_string(), |n| n.to_string())
}

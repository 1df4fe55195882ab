use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("symbol {symbol} out of range for alphabet of size {size}")]
    SymbolOutOfRange { symbol: u32, size: usize },

    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(usize, usize),

    #[error("operands live in different shift spaces")]
    SpaceMismatch,

    #[error("invalid shift space: {0}")]
    InvalidSpace(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point is not in the shift space")]
    PointNotInSpace,

    #[error("budget exceeded: {what} (limit {limit}){}", .n_reached.map(|n| format!(", reached n = {n}")).unwrap_or_default())]
    Budget {
        what: &'static str,
        limit: usize,
        n_reached: Option<usize>,
    },

    #[error("image is not a finite union of cylinders in this space; refine and retry")]
    InexactImage,

    #[error("operation requires a shift-power map, got {0}")]
    NotShiftPower(String),

    #[error("operation requires a subshift of finite type")]
    NotFiniteType,

    #[error("edge graph is not a disjoint union of strongly connected pieces; potentials are undetermined")]
    Reducible,

    #[error("closing precondition violated: d(x, T^k x) = {distance} >= delta0 = {delta0}")]
    ClosingPrecondition { distance: f64, delta0: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn budget(what: &'static str, limit: usize) -> Self {
        Error::Budget {
            what,
            limit,
            n_reached: None,
        }
    }

    pub(crate) fn at_n(self, n: usize) -> Self {
        match self {
            Error::Budget { what, limit, .. } => Error::Budget {
                what,
                limit,
                n_reached: Some(n),
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

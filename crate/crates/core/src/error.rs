use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// Significant probability reached the edge of the truncated momentum ladder.
    #[error("momentum ladder overflow: {mass:.3e} probability at the edge of n_max = {n_max}")]
    LadderOverflow { n_max: usize, mass: f64 },

    #[error("zero detuning: phi_d = Omega^2 t_p / (8 delta_L) is undefined")]
    ZeroDetuning,

    #[error("quadrature not converged: node doubling shifts P_s({n}) by {shift:.3e}")]
    QuadratureNotConverged { n: i64, shift: f64 },

    #[error("detection cuts discarded the entire signal")]
    EmptySignal,

    #[error("{failed} of {total} atoms overflowed the momentum ladder (limit 0.1%)")]
    TooManyFailures { failed: usize, total: usize },

    #[error("unknown figure id `{0}` (expected fig1a, fig1b, fig2a or fig2b)")]
    UnknownFigure(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::LadderOverflow { .. }
                | Error::QuadratureNotConverged { .. }
                | Error::EmptySignal
                | Error::TooManyFailures { .. }
        )
    }
}

use thiserror::Error;

use crate::scba::SelfEnergySolution;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "self-energy did not converge at E = {} eV after {} iterations (residual {:.3e})",
        .last.energy, .last.iterations, .last.residual
    )]
    NoConvergence { last: SelfEnergySolution },

    #[error("quadrature failed for {what}: {detail}")]
    Quadrature { what: &'static str, detail: String },

    #[error(
        "Landau cutoff insufficient: tail estimate {tail:.3e} exceeds tolerance at N_c = {n_cutoff}; raise the level cap"
    )]
    Cutoff { tail: f64, n_cutoff: usize },

    #[error("infinite lifetime: Im(sigma) = 0")]
    InfiniteLifetime,

    #[error("invalid sweep spec, field `{field}`: {reason}")]
    Spec { field: &'static str, reason: String },

    #[error("unknown figure preset `{0}` (valid: fig1, fig2a, fig2b, fig3, fig4, fig5, fig6)")]
    UnknownPreset(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

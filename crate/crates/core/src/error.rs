use thiserror::Error;

use crate::spectral::BlockIndex;

pub type Result<T> = std::result::Result<T, Error>;

/// Norm of one off-diagonal or diagonal block, attached to diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockNorm {
    pub block: BlockIndex,
    pub norm: f64,
}

#[derive(Debug, Error)]
pub enum Error {
    /// The caller handed over data that violates a documented precondition.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Two sectors that the spectrum claims are distinct have the same
    /// eigenvalue pair within the clustering tolerance.
    #[error("degenerate spectrum: {0}")]
    Spectrum(String),

    /// The cochain handed to the homotopy has a component in the commutant,
    /// so it is not exact.
    #[error("cochain is not exact: nonzero diagonal blocks {blocks:?}")]
    NotExact { blocks: Vec<BlockNorm> },

    /// No first-order correction of the symmetry exists.
    #[error("perturbation breaks the symmetry at first order: {blocks:?}")]
    FirstOrderObstructed { blocks: Vec<BlockNorm> },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Names the offending argument in an input error.
    pub(crate) fn prefixed(self, what: &str) -> Self {
        match self {
            Error::Input(msg) => Error::Input(format!("{what}: {msg}")),
            e => e,
        }
    }

    /// True for errors caused by invalid input rather than numerical trouble.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Input(_) | Error::NotExact { .. } | Error::Spectrum(_)
        )
    }
}

//! The enveloping vertex algebra `U(R)` at bounded weight: PBW states, mode
//! actions, n-th products, identity verification, graded dimensions and the
//! `C₂` quotient.

mod c2;
mod context;
mod dims;
mod identities;
mod state;

pub use c2::{c2_quotient, C2Report, C2Weight};
pub use context::EnvContext;
pub use dims::{basis_by_weight, graded_dimension, symmetric_algebra_dimension, GradedDims};
pub use identities::{verify_identities, IdentityWindows};
pub use state::{render_word, EnvElem, Mode, Word};

use crate::vlie::VlieError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EnvError {
    #[error("the enveloping algebra needs a graded presentation")]
    Ungraded,
    #[error("generator `{0}` must have positive weight")]
    NonPositiveWeight(String),
    #[error("`{0}` is not a central element of the presentation")]
    UnknownCentral(String),
    #[error("presentation too large for the envelope engine")]
    TooLarge,
    #[error("state is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error(transparent)]
    Vlie(#[from] VlieError),
}

#[cfg(test)]
mod tests;

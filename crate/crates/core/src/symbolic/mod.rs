//! Exact scalar arithmetic, divided-power polynomials and binomial utilities.

pub mod binomial;
pub mod dpoly;
pub mod linalg;
pub mod rational;
pub mod scalar;
pub mod symbol;

pub use binomial::{binom, binom_scalar, check_binomial_identities, BinomialReport};
pub use dpoly::{render_linear, Coeff, DPoly, DPolyError, Exps, OpPoly, Var};
pub use rational::Q;
pub use scalar::{Monomial, Scalar, ScalarError};
pub use symbol::Symbol;

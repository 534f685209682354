//! Vertex Lie algebra presentations and the λ-bracket engine.

pub mod check;
pub mod ops;
pub mod presentation;
pub mod relem;

pub use check::{apply_morphism, check_identities, check_morphism, CheckOptions, IdentityReport, MorphismMap};
pub use ops::{
    bracket, bracket_in, jacobi_residual, jacobi_residual_shifted, lie_bracket, locality_order, opposite_bracket,
    skew_residual, tth_products,
};
pub use presentation::{GeneratorDecl, Presentation, PresentationBuilder, VlieError};
pub use relem::{from_products, LambdaPoly, Parity, RElem};

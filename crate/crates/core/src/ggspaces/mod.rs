//! The join spaces `EG_N`, their quotients `BG_N`, explicit model spaces, and
//! the equivariant embedding of a space with a free action into a join.

mod embed;
mod join;
mod shapes;

use thiserror::Error;

use crate::complexes::ComplexError;

pub use embed::{equivariant_embed, Embedding};
pub use join::{bg_space, eg_space, enumerate_hn, h_transitivity_check, hn_order, EgSpace, HNElement, JoinSimplex};
pub use shapes::{
    antipodal_action, crosspolytope_boundary, cycle_complex, product_triangulation, rp_deltaset, torus7, torus_product,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GgError {
    #[error("enumeration of {size} elements exceeds the limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("simplex {simplex} of dimension {dim} meets some vertex orbit twice")]
    OrbitViolation { dim: usize, simplex: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

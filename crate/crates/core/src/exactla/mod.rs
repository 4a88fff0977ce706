//! Exact linear algebra over `Z` and exact fields.
//!
//! Everything downstream reduces to three primitives here: Smith normal
//! form, the subquotient `ker g / im f` with explicit coordinates, and
//! direct limits over finite directed preorders.

mod field;
mod group;
mod matrix;
mod quotient;
mod snf;
mod table;

pub use field::{field_cohomology, Field, FieldMatrix, Scalar};
pub use group::{CyclicSum, FgAbGroup, GroupMap};
pub(crate) use group::{big_to_json, json_to_big};
pub use matrix::IntMatrix;
pub use quotient::{cokernel, direct_limit, induced_map, kernel, subquotient, Diagram, DirectLimit, Quotient, Subquotient};
pub use snf::{smith_normal_form, SmithForm};
pub use table::TableGroup;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("composition of consecutive maps is not zero")]
    CompositionNotZero,
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid homomorphism: {0}")]
    InvalidMap(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("matrices are over different fields")]
    FieldMismatch,
    #[error("index relation is not a preorder: {0}")]
    NotAPreorder(String),
    #[error("index preorder is not directed: {first} and {second} have no common upper bound")]
    NotDirected { first: usize, second: usize },
    #[error("diagram is not functorial along {path:?}: {reason}")]
    NotFunctorial { path: Vec<usize>, reason: String },
}

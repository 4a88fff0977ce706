//! Finite commutative rings, their spectra, and structural ringed spaces.

mod ring;
mod scheme;

pub use ring::{FiniteRing, Ideal, RingHom};
pub use scheme::{
    additive_group, additive_map, additive_presheaf, disjoint_union_assembly, recognize_structural_scheme, ring_components,
    sheaf_from_stalks, sheafify_rings, spec, structural_affine, structural_from_components, DisjointUnion, MemberReport,
    RingedFiniteSpace, SchemeError, SchemeReport, Spectrum, StalkReport,
};

use thiserror::Error;

/// Default bound on ring and monoid sizes for exhaustive enumeration.
pub const DEFAULT_MAX_ELEMENTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("not a commutative ring: {0}")]
    NotARing(String),
    #[error("the zero ring is not allowed here")]
    ZeroRing,
    #[error("more than {bound} elements")]
    TooLarge { bound: usize },
    #[error("ideal {0} is not prime")]
    NotPrime(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("invalid ring homomorphism: {0}")]
    InvalidHom(String),
    #[error("localization is not a local ring")]
    NotLocal,
}

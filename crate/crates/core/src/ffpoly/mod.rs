//! Arithmetic in 𝔽_q and 𝔽_q[x], factorization, and the polynomial families
//! attached to classical groups.

pub mod factor;
pub mod family;
pub mod field;
pub mod poly;

pub use factor::{count_factors, factor, factor_with_seed, FactorMultiset, DEFAULT_SEED};
pub use family::{
    block_count, conjugate_reciprocal, count_irreducibles, enumerate_family,
    enumerate_irreducibles, in_family, necklace, FamilyKind, FamilyTag,
};
pub use field::{Field, FqElem, DEFAULT_FIELD_BOUND};
pub use poly::Poly;

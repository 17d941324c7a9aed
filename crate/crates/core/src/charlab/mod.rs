//! Character tables and the character-side statistics built on them.

mod analysis;
mod table;

pub use analysis::{
    admissible_fourier, fourier_l1_bound, generic_bound_fraction, is_simple, max_power_character_value,
    power_word_distribution, triple_probability, zeta, FourierReport, GenericBound, TripleProbability,
};
pub use table::{
    compute_table, CharacterTable, Provenance, TableOptions, DEFAULT_MAX_CLASSES, DEFAULT_POWER_BOUND,
    DEFAULT_TABLE_SEED, INTEGRALITY_TOL, ORTHOGONALITY_TOL,
};

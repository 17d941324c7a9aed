//! Enumerable finite groups and brute-force statistics on them.
//!
//! Elements are indices `0..|G|` with the identity at 0. Backends are
//! permutation groups (`A_n`, `S_n`, cyclic `C_n`, degree ≤ 10) and matrix
//! groups `SL_n`, `GL_n`, `PSL_n` over 𝔽_q for `n ≤ 3`.

mod classes;
mod distribution;
mod group;
mod linear;

pub use classes::{
    centralizer_order, conjugacy_classes, fiber_histogram, fiber_histogram_by_classes, fiber_histogram_direct,
    generating_set, power_class_map, ConjClassData, FiberHistogram, POWER_MAP_CHECK_LIMIT,
};
pub use distribution::{
    class_multiplication_coefficients, l1_to_uniform, word_distribution, word_distribution_convolution,
    word_distribution_monte_carlo, word_distribution_naive, Distribution, MonteCarloDistribution,
};
pub use group::{Backend, CyclicGroup, FiniteGroup, Group, MatrixOps, PermKind};
pub use linear::{count_unipotents, fact_of, regular_semisimple_centralizers, sl2_trace_transitivity, TraceTripleReport};

//! Exact truncated power series: Euler products, the family block-count
//! distributions built from them, and tail tables.

mod family_dist;
mod series;
mod tail;

pub use family_dist::{
    block_fibers, enumerated_block_histogram, enumerated_factor_histogram, family_factor_distribution,
    uniform_twist_distribution, GROUP_RING_CELL_LIMIT,
};
pub use series::{bivariate_euler_product, euler_product, BiSeries, IntSeries};
pub use tail::{empirical_fit, tail_table, EmpiricalFit, TailRow, TailTable, Threshold};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::necklace;
    use num_bigint::{BigInt, BigUint};

    #[test]
    fn power_series_identity_to_forty() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let e: Vec<BigInt> = (1..=40).map(|n| BigInt::from(necklace(n, q))).collect();
            let s = euler_product(&e, 40).unwrap();
            for n in 0..=40 {
                assert_eq!(*s.coeff(n), BigUint::from(q).pow(n as u32), "q={q} n={n}");
            }
        }
    }
}

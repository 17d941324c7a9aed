use num_traits::ToPrimitive;
use wordmaplab::ffpoly::FamilyKind;
use wordmaplab::genfun::{enumerated_block_histogram, enumerated_factor_histogram, family_factor_distribution};
use wordmaplab::Budget;

fn check(kind: FamilyKind, q: u64, n_max: usize) {
    let dist = family_factor_distribution(kind, q, n_max).unwrap();
    let budget = Budget::default();
    for n in 1..=n_max {
        let series: Vec<u64> = dist.row(n).iter().map(|c| c.to_u64().unwrap()).collect();
        let counted = enumerated_block_histogram(kind, q, n, &budget).unwrap();
        assert_eq!(series, counted, "{kind} q={q} n={n}");
    }
}

#[test]
fn linear_rows_match_enumeration() {
    check(FamilyKind::Linear, 2, 10);
    check(FamilyKind::Linear, 3, 10);
}

#[test]
fn self_dual_rows_match_enumeration() {
    check(FamilyKind::SelfDual, 2, 10);
    check(FamilyKind::SelfDual, 3, 10);
}

#[test]
fn unitary_rows_match_enumeration() {
    check(FamilyKind::Unitary, 2, 6);
}

#[test]
fn row_sums_are_family_sizes() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let lin = family_factor_distribution(FamilyKind::Linear, q, 24).unwrap();
        let uni = family_factor_distribution(FamilyKind::Unitary, q, 24).unwrap();
        let sd = family_factor_distribution(FamilyKind::SelfDual, q, 24).unwrap();
        for n in 1..=24u32 {
            let expect = num_bigint::BigUint::from(q).pow(n - 1);
            assert_eq!(lin.row_sum(n as usize), expect);
            assert_eq!(uni.row_sum(n as usize), expect);
            assert_eq!(sd.row_sum(n as usize), num_bigint::BigUint::from(q).pow(n));
        }
    }
}

#[test]
fn self_dual_blocks_bound_factor_counts() {
    let budget = Budget::default();
    for n in 1..=6 {
        let blocks = enumerated_block_histogram(FamilyKind::SelfDual, 3, n, &budget).unwrap();
        let factors = enumerated_factor_histogram(FamilyKind::SelfDual, 3, n, &budget).unwrap();
        assert_eq!(blocks.iter().sum::<u64>(), factors.iter().sum::<u64>());
        // each block contributes one or two irreducible factors
        let weighted = |h: &[u64]| h.iter().enumerate().map(|(i, c)| i as u64 * c).sum::<u64>();
        assert!(weighted(&blocks) <= weighted(&factors));
        assert!(weighted(&factors) <= 2 * weighted(&blocks));
    }
}

#[test]
fn default_truncation_is_feasible() {
    for q in [2u64, 9, 16] {
        let d = family_factor_distribution(FamilyKind::Unitary, q, 64).unwrap();
        assert_eq!(d.row_sum(64), num_bigint::BigUint::from(q).pow(63));
    }
}

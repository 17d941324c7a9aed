//! Block-count distributions of the linear, unitary and self-dual polynomial
//! families.
//!
//! The linear and unitary families are cut out of all Frobenius-stable
//! (resp. `x ↦ x^{-q}`-stable) root multisets by the condition that the
//! product of the roots is 1. Each minimal block carries the product of its
//! roots, an element of a cyclic group `Γ` of order `q - 1` (resp. `q + 1`).
//! The generating function is the `Γ`-graded Euler product read off at the
//! identity; this is the character average `(1/|Γ|) Σ_χ` evaluated exactly
//! in the group ring ℤ[Γ], using the true number of blocks over each element
//! of `Γ` rather than assuming the blocks are spread evenly.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ffpoly::{block_count, count_irreducibles, enumerate_family, necklace, FamilyKind, FamilyTag};
use crate::genfun::series::{bivariate_euler_product, negative_binomials, BiSeries};
use crate::numtheory::{divisors, totient};

/// Largest `(N + 1)² · |Γ|` accepted by the group-ring product.
pub const GROUP_RING_CELL_LIMIT: u64 = 50_000_000;

/// Order of the cyclic group of root products, and the sign `s` in
/// `|Fix(T^n)| = q^n - s^n`.
fn grading(kind: FamilyKind, q: u64) -> Option<(u64, i64)> {
    match kind {
        FamilyKind::Linear => Some((q - 1, 1)),
        FamilyKind::Unitary => Some((q + 1, -1)),
        FamilyKind::SelfDual => None,
    }
}

/// For each block size `n = 1..=truncation`, the number of minimal blocks of
/// size `n` whose root product is `g^c`, indexed by `c mod |Γ|`.
pub fn block_fibers(kind: FamilyKind, q: u64, truncation: usize) -> Result<Vec<Vec<BigUint>>> {
    let (order, sign) = grading(kind, q)
        .ok_or_else(|| Error::InvalidArgument("self-dual blocks carry no grading".into()))?;
    let k = order as usize;
    let qi = BigInt::from(q);
    // exact[n - 1][c]: elements of exact period n with orbit product g^c
    let mut exact: Vec<Vec<BigInt>> = Vec::with_capacity(truncation);
    let mut out = Vec::with_capacity(truncation);
    for n in 1..=truncation {
        let fixed = qi.pow(n as u32) - BigInt::from(sign).pow(n as u32);
        let per_fiber = &fixed / BigInt::from(order);
        let mut h = vec![per_fiber; k];
        for d in divisors(n).into_iter().filter(|&d| d < n) {
            let e = n / d;
            for (u, count) in exact[d - 1].iter().enumerate() {
                h[(u * e) % k] -= count;
            }
        }
        let mut blocks = Vec::with_capacity(k);
        for (c, v) in h.iter().enumerate() {
            let (quot, rem) = v.div_rem(&BigInt::from(n));
            if !rem.is_zero() || quot.sign() == num_bigint::Sign::Minus {
                return Err(Error::TwistIntegrality(format!(
                    "{kind} q={q}: {v} elements of period {n} over class {c}"
                )));
            }
            blocks.push(quot.to_biguint().unwrap());
        }
        exact.push(h);
        out.push(blocks);
    }
    Ok(out)
}

/// `c_{n,m}`: number of degree-`n` members of the family (degree `2n` for
/// the self-dual family) whose root multiset splits into exactly `m` blocks.
pub fn family_factor_distribution(kind: FamilyKind, q: u64, truncation: usize) -> Result<BiSeries> {
    crate::ffpoly::field::prime_power(q)?;
    let Some((order, _)) = grading(kind, q) else {
        let exps: Vec<BigInt> = (1..=truncation).map(|n| BigInt::from(necklace(n, q))).collect();
        return bivariate_euler_product(&exps, truncation);
    };
    let k = order as usize;
    let cells = ((truncation + 1) as u64).pow(2).saturating_mul(order);
    if cells > GROUP_RING_CELL_LIMIT {
        return Err(Error::budget("group-ring series cells", cells as u128, GROUP_RING_CELL_LIMIT));
    }
    let fibers = block_fibers(kind, q, truncation)?;
    // series[n][m][c]
    let zero_row = |n: usize| vec![vec![BigUint::zero(); k]; n + 1];
    let mut series: Vec<Vec<Vec<BigUint>>> = (0..=truncation).map(zero_row).collect();
    series[0][0][0] = BigUint::from(1u32);
    for n in 1..=truncation {
        let depth = truncation / n;
        // graded factor ∏_c (1 - [c] z)^{-f_c}, truncated at z^depth
        let mut factor = vec![vec![BigUint::zero(); k]; depth + 1];
        factor[0][0] = BigUint::from(1u32);
        for (c, f) in fibers[n - 1].iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let binom = negative_binomials(f, depth);
            let mut next = vec![vec![BigUint::zero(); k]; depth + 1];
            for (i, row) in factor.iter().enumerate() {
                for (t, a) in row.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in binom.iter().enumerate().take(depth + 1 - i) {
                        next[i + j][(t + j * c) % k] += a * b;
                    }
                }
            }
            factor = next;
        }
        let mut next: Vec<Vec<Vec<BigUint>>> = (0..=truncation).map(zero_row).collect();
        for (deg, rows) in series.iter().enumerate() {
            for (m, cells) in rows.iter().enumerate() {
                for (t, a) in cells.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, graded) in factor.iter().enumerate() {
                        let target = deg + n * j;
                        if target > truncation {
                            break;
                        }
                        for (u, b) in graded.iter().enumerate() {
                            if !b.is_zero() {
                                next[target][m + j][(t + u) % k] += a * b;
                            }
                        }
                    }
                }
            }
        }
        series = next;
    }
    let rows = series
        .into_iter()
        .map(|rows| rows.into_iter().map(|mut cells| cells.swap_remove(0)).collect())
        .collect();
    Ok(BiSeries::from_rows(rows))
}

/// Character average assuming every character of order `o` sees the blocks
/// of size `n` spread evenly over the `o`-th roots of unity, so that each
/// twisted product is `∏ (1 - x^{no} y^o)^{-|I_n|/o}`. Only valid when that
/// even spread holds; otherwise the exponents or the final average fail to
/// be integers and a [`Error::TwistIntegrality`] is returned.
pub fn uniform_twist_distribution(kind: FamilyKind, q: u64, truncation: usize) -> Result<BiSeries> {
    let Some((order, _)) = grading(kind, q) else {
        return family_factor_distribution(kind, q, truncation);
    };
    let mut acc: Vec<Vec<BigUint>> = (0..=truncation).map(|n| vec![BigUint::zero(); n + 1]).collect();
    for o in (1..=order).filter(|o| order % o == 0) {
        let depth = truncation / o as usize;
        let mut exps = Vec::with_capacity(depth);
        for n in 1..=depth {
            let count = count_irreducibles(kind, n, q)?;
            let (quot, rem) = count.div_rem(&BigUint::from(o));
            if !rem.is_zero() {
                return Err(Error::TwistIntegrality(format!(
                    "|I_{n}| = {count} is not divisible by character order {o}"
                )));
            }
            exps.push(BigInt::from(quot));
        }
        let twisted = bivariate_euler_product(&exps, depth)?;
        let weight = BigUint::from(totient(o));
        for n in 0..=depth {
            for (m, c) in twisted.row(n).iter().enumerate() {
                acc[n * o as usize][m * o as usize] += c * &weight;
            }
        }
    }
    let mut rows = Vec::with_capacity(acc.len());
    for (n, row) in acc.into_iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (m, c) in row.into_iter().enumerate() {
            let (quot, rem) = c.div_rem(&BigUint::from(order));
            if !rem.is_zero() {
                return Err(Error::TwistIntegrality(format!(
                    "average of c_{{{n},{m}}} over {order} characters is not an integer"
                )));
            }
            out.push(quot);
        }
        rows.push(out);
    }
    Ok(BiSeries::from_rows(rows))
}

/// Histogram of block counts over the degree-`n` family members (degree
/// `2n` for the self-dual kind), by enumeration and factoring.
pub fn enumerated_block_histogram(kind: FamilyKind, q: u64, n: usize, budget: &Budget) -> Result<Vec<u64>> {
    let tag = match kind {
        FamilyKind::Linear => FamilyTag::Linear { n, q },
        FamilyKind::Unitary => FamilyTag::Unitary { n, q },
        FamilyKind::SelfDual => FamilyTag::SelfDual { degree: 2 * n, q },
    };
    let mut hist = vec![0u64; n + 1];
    for p in enumerate_family(&tag, budget)? {
        let blocks = block_count(&p, kind)?;
        if blocks > n {
            return Err(Error::Invariant(format!("{p} has {blocks} blocks, more than {n}")));
        }
        hist[blocks] += 1;
    }
    Ok(hist)
}

/// Histogram of irreducible factor counts (with multiplicity) over the same
/// members as [`enumerated_block_histogram`]. For the self-dual kind this
/// differs from the block count, which is at least half of it.
pub fn enumerated_factor_histogram(kind: FamilyKind, q: u64, n: usize, budget: &Budget) -> Result<Vec<u64>> {
    let tag = match kind {
        FamilyKind::Linear => FamilyTag::Linear { n, q },
        FamilyKind::Unitary => FamilyTag::Unitary { n, q },
        FamilyKind::SelfDual => FamilyTag::SelfDual { degree: 2 * n, q },
    };
    let mut hist = vec![0u64; tag.degree() + 1];
    for p in enumerate_family(&tag, budget)? {
        hist[crate::ffpoly::count_factors(&p)?] += 1;
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn row(series: &BiSeries, n: usize) -> Vec<u64> {
        series.row(n).iter().map(|c| c.to_u64().unwrap()).collect()
    }

    #[test]
    fn linear_examples() {
        let s = family_factor_distribution(FamilyKind::Linear, 2, 4).unwrap();
        assert_eq!(row(&s, 2), vec![0, 1, 1]);
        let s = family_factor_distribution(FamilyKind::Linear, 3, 4).unwrap();
        assert_eq!(row(&s, 1), vec![0, 1]);
        // x^2 + 1 irreducible, (x+1)^2, (x+2)^2
        assert_eq!(row(&s, 2), vec![0, 1, 2]);
    }

    #[test]
    fn self_dual_example() {
        let s = family_factor_distribution(FamilyKind::SelfDual, 2, 4).unwrap();
        assert_eq!(row(&s, 2), vec![0, 1, 3]);
    }

    #[test]
    fn fibers_sum_to_irreducible_counts() {
        for (kind, q) in [(FamilyKind::Linear, 3u64), (FamilyKind::Linear, 7), (FamilyKind::Unitary, 2), (FamilyKind::Unitary, 5)] {
            let fibers = block_fibers(kind, q, 10).unwrap();
            for (i, f) in fibers.iter().enumerate() {
                let total: BigUint = f.iter().sum();
                assert_eq!(total, count_irreducibles(kind, i + 1, q).unwrap());
            }
        }
    }

    #[test]
    fn matches_enumeration_small() {
        let b = Budget::default();
        for (kind, q, nmax) in [
            (FamilyKind::Linear, 3u64, 6),
            (FamilyKind::Linear, 4, 4),
            (FamilyKind::Linear, 5, 4),
            (FamilyKind::Unitary, 2, 5),
            (FamilyKind::Unitary, 3, 3),
            (FamilyKind::SelfDual, 3, 4),
        ] {
            let s = family_factor_distribution(kind, q, nmax).unwrap();
            for n in 1..=nmax {
                assert_eq!(row(&s, n), enumerated_block_histogram(kind, q, n, &b).unwrap(), "{kind} q={q} n={n}");
            }
        }
    }

    #[test]
    fn uniform_twist_is_exact_only_for_trivial_grading() {
        let exact = family_factor_distribution(FamilyKind::Linear, 2, 12).unwrap();
        assert_eq!(uniform_twist_distribution(FamilyKind::Linear, 2, 12).unwrap(), exact);
        // over GF(3) the quadratic irreducibles have norms 1, 2, 2
        assert!(matches!(
            uniform_twist_distribution(FamilyKind::Linear, 3, 2),
            Err(Error::TwistIntegrality(_))
        ));
        assert!(matches!(
            uniform_twist_distribution(FamilyKind::Unitary, 2, 3),
            Err(Error::TwistIntegrality(_))
        ));
    }
}

//! Squarefree, distinct-degree and equal-degree (Cantor–Zassenhaus)
//! factorization over 𝔽_q.

use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ffpoly::field::{Field, FqElem};
use crate::ffpoly::poly::Poly;

/// Seed used for equal-degree splitting unless a caller supplies one.
pub const DEFAULT_SEED: u64 = 0x5eed_1e55_f00d_2024;

/// The irreducible factorization of a nonzero polynomial. For linear-type
/// matrix elements the factors are the Frobenius orbits of `Spec g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorMultiset {
    pub field: Arc<Field>,
    pub unit: FqElem,
    /// Monic irreducible factors in ascending order, with multiplicities.
    pub factors: Vec<(Poly, usize)>,
}

impl FactorMultiset {
    /// Number of irreducible factors counted with multiplicity.
    pub fn count(&self) -> usize {
        self.factors.iter().map(|(_, m)| m).sum()
    }

    pub fn distinct(&self) -> usize {
        self.factors.len()
    }

    pub fn recompose(&self) -> Poly {
        let mut acc = Poly::constant(&self.field, self.unit);
        for (p, m) in &self.factors {
            acc = acc.mul(&p.pow(*m as u64));
        }
        acc
    }
}

pub fn factor(p: &Poly) -> Result<FactorMultiset> {
    factor_with_seed(p, DEFAULT_SEED)
}

pub fn factor_with_seed(p: &Poly, seed: u64) -> Result<FactorMultiset> {
    if p.is_zero() {
        return Err(Error::ZeroInput);
    }
    let unit = p.lead();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (sq, mult) in squarefree(&p.monic()) {
        for (block, d) in distinct_degree(&sq) {
            for irr in equal_degree(&block, d, &mut rng) {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort();
    // merge repeated factors produced by separate squarefree parts
    let mut merged: Vec<(Poly, usize)> = Vec::with_capacity(factors.len());
    for (f, m) in factors {
        match merged.last_mut() {
            Some((g, n)) if *g == f => *n += m,
            _ => merged.push((f, m)),
        }
    }
    Ok(FactorMultiset {
        field: p.field().clone(),
        unit,
        factors: merged,
    })
}

/// Total number of irreducible factors, with multiplicity.
pub fn count_factors(p: &Poly) -> Result<usize> {
    Ok(factor(p)?.count())
}

/// Squarefree decomposition of a monic polynomial into coprime squarefree
/// parts with multiplicities.
pub fn squarefree(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let p = f.field().characteristic() as usize;
    let d = f.derivative();
    if d.is_zero() {
        for (g, m) in squarefree(&f.pth_root()) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_one() {
        for (g, m) in squarefree(&c.pth_root()) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a monic squarefree polynomial into products of irreducibles of
/// equal degree, returning `(product, degree)` pairs.
pub fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let x = Poly::x(f.field());
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = rest.frobenius_power_of_x(&h);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if let Some(n) = rest.degree().filter(|&n| n > 0) {
        out.push((rest, n));
    }
    out
}

/// Cantor–Zassenhaus splitting of a product of distinct irreducibles of degree `d`.
pub fn equal_degree<R: Rng>(f: &Poly, d: usize, rng: &mut R) -> Vec<Poly> {
    let n = f.degree().unwrap_or(0);
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field().clone();
    let q = field.order();
    let odd_exponent = (q % 2 == 1)
        .then(|| (BigUint::from(q).pow(d as u32) - 1u32) / 2u32);
    let trace_terms = (field.degree() as usize) * d;
    let mut pending = vec![f.clone()];
    let mut done = Vec::new();
    while let Some(g) = pending.pop() {
        if g.degree() == Some(d) {
            done.push(g);
            continue;
        }
        loop {
            let gd = g.degree().unwrap();
            let a = Poly::new(
                field.clone(),
                (0..gd).map(|_| FqElem(rng.gen_range(0..q))).collect(),
            );
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = match &odd_exponent {
                Some(e) => a.pow_mod(e, &g).sub(&Poly::one(&field)),
                None => {
                    // absolute trace a + a^2 + a^4 + ... mod g
                    let mut t = a.rem(&g);
                    let mut acc = t.clone();
                    for _ in 1..trace_terms {
                        t = t.mul_mod(&t, &g);
                        acc = acc.add(&t);
                    }
                    acc
                }
            };
            let h = g.gcd(&b);
            let hd = h.degree().unwrap_or(0);
            if hd > 0 && hd < gd {
                pending.push(g.div_exact(&h));
                pending.push(h);
                break;
            }
        }
    }
    done
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(q: u64, codes: &[u32]) -> Poly {
        Poly::from_codes(&Field::of_order(q).unwrap(), codes)
    }

    #[test]
    fn spec_examples() {
        let f = factor(&poly(2, &[1, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(poly(2, &[1, 1]), 2)]);

        let quartic = poly(2, &[1, 1, 1, 1, 1]);
        assert_eq!(factor(&quartic).unwrap().count(), 1);

        let cubic = poly(3, &[0, 2, 0, 1]);
        let f = factor(&cubic).unwrap();
        assert_eq!(
            f.factors,
            vec![(poly(3, &[0, 1]), 1), (poly(3, &[1, 1]), 1), (poly(3, &[2, 1]), 1)]
        );
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_factors(&poly(2, &[1, 0, 1])).unwrap(), 2);
        assert_eq!(count_factors(&poly(2, &[1, 1, 1])).unwrap(), 1);
        let p = poly(3, &[1, 0, 1]).mul(&poly(3, &[1, 1]));
        assert_eq!(count_factors(&p).unwrap(), 2);
    }

    #[test]
    fn quartic_irreducible_by_trial_division() {
        // trial division by every monic polynomial of degree 1 and 2 over GF(2)
        let f = Field::of_order(2).unwrap();
        let quartic = poly(2, &[1, 1, 1, 1, 1]);
        for code in 2u32..8 {
            let d = Poly::from_codes(&f, &[code & 1, (code >> 1) & 1, code >> 2]);
            if d.degree().unwrap() >= 1 {
                assert!(!quartic.rem(&d.monic()).is_zero());
            }
        }
    }

    #[test]
    fn zero_is_rejected() {
        assert!(matches!(factor(&poly(5, &[])), Err(Error::ZeroInput)));
    }

    #[test]
    fn inseparable_inputs() {
        // (x^2 + x + 1)^4 over GF(2) and x^9 - 1 over GF(3)
        let base = poly(2, &[1, 1, 1]).pow(4);
        assert_eq!(factor(&base).unwrap().factors, vec![(poly(2, &[1, 1, 1]), 4)]);
        let p = poly(3, &[2, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(factor(&p).unwrap().factors, vec![(poly(3, &[2, 1]), 9)]);
        let p = poly(9, &[5, 0, 0, 1]).mul(&poly(9, &[3, 7, 1]).pow(3));
        let fm = factor(&p).unwrap();
        assert_eq!(fm.recompose(), p);
    }

    #[test]
    fn seed_does_not_change_result() {
        let p = poly(7, &[3, 1, 4, 1, 5, 2, 6, 0, 1]);
        assert_eq!(factor_with_seed(&p, 1).unwrap(), factor_with_seed(&p, 99).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn factor_recomposes(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]),
                             raw in prop::collection::vec(0u32..1000, 1..12)) {
            let field = Field::of_order(q).unwrap();
            let codes: Vec<u32> = raw.iter().map(|c| c % q as u32).collect();
            let p = Poly::from_codes(&field, &codes);
            prop_assume!(!p.is_zero());
            let fm = factor(&p).unwrap();
            prop_assert_eq!(fm.recompose(), p.clone());
            for (f, _) in &fm.factors {
                prop_assert!(f.is_irreducible_rabin());
                prop_assert!(f.is_monic());
            }
        }
    }
}

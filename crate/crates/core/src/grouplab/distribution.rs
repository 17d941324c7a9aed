use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::grouplab::{power_class_map, ConjClassData, FiniteGroup};
use crate::words::Word;

/// Word-map pushforward: `counts[C]` tuples land in class `C`, out of
/// `total = |G|^d`. Word maps are conjugation-equivariant, so each element of
/// `C` receives `counts[C] / |C|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Distribution {
    pub group_order: usize,
    pub class_sizes: Vec<usize>,
    #[serde(serialize_with = "big_vec")]
    pub counts: Vec<BigUint>,
    #[serde(with = "crate::decimal")]
    pub total: BigUint,
}

fn big_vec<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::decimal::vec::serialize(v, s)
}

impl Distribution {
    pub fn uniform(classes: &ConjClassData) -> Distribution {
        Distribution {
            group_order: classes.order,
            class_sizes: classes.sizes.clone(),
            counts: classes.sizes.iter().map(|&s| BigUint::from(s)).collect(),
            total: BigUint::from(classes.order),
        }
    }

    /// Probability of landing in class `c`.
    pub fn class_mass(&self, c: usize) -> BigRational {
        BigRational::new(BigInt::from(self.counts[c].clone()), BigInt::from(self.total.clone()))
    }

    /// Probability of each single element of class `c`.
    pub fn element_probability(&self, c: usize) -> BigRational {
        self.class_mass(c) / BigRational::from_integer(BigInt::from(self.class_sizes[c]))
    }

    pub fn class_masses_f64(&self) -> Vec<f64> {
        let total = big_to_f64(&self.total);
        self.counts.iter().map(|c| big_to_f64(c) / total).collect()
    }

    /// `Σ_g |P(g) - 1/|G||`.
    pub fn l1_to_uniform(&self) -> BigRational {
        l1_to_uniform(self)
    }
}

pub(crate) fn big_to_f64(x: &BigUint) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::INFINITY)
}

pub fn l1_to_uniform(dist: &Distribution) -> BigRational {
    let n = BigInt::from(dist.group_order);
    let total = BigInt::from(dist.total.clone());
    let mut acc = BigInt::zero();
    for (c, &size) in dist.counts.iter().zip(&dist.class_sizes) {
        // |count/total - size/n| = |count·n - size·total| / (total·n)
        acc += (BigInt::from(c.clone()) * &n - BigInt::from(size) * &total).abs();
    }
    BigRational::new(acc, total * n)
}

fn check_classes<G: FiniteGroup + ?Sized>(group: &G, classes: &ConjClassData) -> Result<()> {
    if classes.order != group.order() {
        return Err(Error::InvalidArgument("class data belongs to a different group".into()));
    }
    Ok(())
}

/// Exhaustive evaluation over `G^d`, `d = rank(w)`. Per-element counts are
/// checked to be constant on classes.
pub fn word_distribution_naive<G: FiniteGroup + ?Sized>(
    group: &G,
    classes: &ConjClassData,
    w: &Word,
    budget: &Budget,
) -> Result<Distribution> {
    check_classes(group, classes)?;
    let n = group.order();
    let d = w.rank();
    let cost = (n as u128).pow(d as u32) * (w.len().max(1) as u128);
    if cost > budget.pair_ops as u128 {
        let hint = if w.power_pair().is_some() {
            "the two-letter power word has a convolution path"
        } else {
            "use the Monte-Carlo mode for an approximate distribution"
        };
        return Err(Error::BudgetExceeded {
            what: format!("naive evaluation of {w} over {}^{d}", group.name()),
            required: cost,
            budget: budget.pair_ops,
            hint: Some(hint.into()),
        });
    }
    let mut exps: Vec<i64> = w.letters().iter().map(|l| l.1).collect();
    exps.sort_unstable();
    exps.dedup();
    let powers: Vec<Vec<usize>> = exps.iter().map(|&e| (0..n).map(|g| group.pow(g, e)).collect()).collect();
    let program: Vec<(usize, usize)> = w
        .letters()
        .iter()
        .map(|&(g, e)| (g as usize - 1, exps.binary_search(&e).unwrap()))
        .collect();
    let per_element: Vec<u64> = if d == 0 {
        let mut v = vec![0u64; n];
        v[group.identity()] = 1;
        v
    } else {
        (0..n)
            .into_par_iter()
            .fold(
                || (vec![0u64; n], vec![0usize; d]),
                |(mut acc, mut tuple), first| {
                    tuple.iter_mut().for_each(|t| *t = 0);
                    tuple[0] = first;
                    loop {
                        let mut x = group.identity();
                        for &(slot, p) in &program {
                            x = group.mul(x, powers[p][tuple[slot]]);
                        }
                        acc[x] += 1;
                        if !advance(&mut tuple[1..], n) {
                            break;
                        }
                    }
                    (acc, tuple)
                },
            )
            .map(|(acc, _)| acc)
            .reduce(|| vec![0u64; n], |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            })
    };
    let mut counts = vec![0u64; classes.len()];
    let mut first = vec![None; classes.len()];
    for (g, &k) in per_element.iter().enumerate() {
        let c = classes.class_of[g] as usize;
        counts[c] += k;
        match first[c] {
            None => first[c] = Some(k),
            Some(v) if v != k => {
                return Err(Error::Invariant(format!("word-map counts vary inside class {c}")));
            }
            _ => {}
        }
    }
    Ok(Distribution {
        group_order: n,
        class_sizes: classes.sizes.clone(),
        counts: counts.into_iter().map(BigUint::from).collect(),
        total: BigUint::from(n).pow(d as u32),
    })
}

fn advance(tuple: &mut [usize], n: usize) -> bool {
    for t in tuple.iter_mut() {
        *t += 1;
        if *t < n {
            return true;
        }
        *t = 0;
    }
    false
}

/// `a[C][D][E] = #{(y, z) ∈ D × E : yz = rep(C)}`, the class multiplication
/// coefficients, indexed `[C][D * k + E]`.
pub fn class_multiplication_coefficients<G: FiniteGroup + ?Sized>(group: &G, classes: &ConjClassData) -> Vec<Vec<u64>> {
    let k = classes.len();
    classes
        .reps
        .par_iter()
        .map(|&x| {
            let mut row = vec![0u64; k * k];
            for y in 0..group.order() {
                let z = group.mul(group.inv(y), x);
                row[classes.class_of[y] as usize * k + classes.class_of[z] as usize] += 1;
            }
            row
        })
        .collect()
}

/// `x_i^{m1} x_j^{m2}` (`i ≠ j`) by class-wise convolution of the two
/// power-map pushforwards. Unused generators below the rank contribute a
/// factor `|G|` each.
pub fn word_distribution_convolution<G: FiniteGroup + ?Sized>(
    group: &G,
    classes: &ConjClassData,
    w: &Word,
) -> Result<Distribution> {
    check_classes(group, classes)?;
    let (m1, m2) = w
        .power_pair()
        .ok_or_else(|| Error::InvalidArgument(format!("{w} is not a product of powers of two generators")))?;
    let n = group.order();
    let k = classes.len();
    let push = |m: i64| -> Result<Vec<u64>> {
        let map = power_class_map(group, classes, m)?;
        let mut out = vec![0u64; k];
        for (d, &c) in map.iter().enumerate() {
            out[c] += classes.sizes[d] as u64;
        }
        Ok(out)
    };
    // A_D = number of x with x^m in D; each element of D is hit A_D/|D| times
    let a = push(m1)?;
    let b = push(m2)?;
    let coeffs = class_multiplication_coefficients(group, classes);
    let mut counts = Vec::with_capacity(k);
    for (c, row) in coeffs.iter().enumerate() {
        let mut at_rep = BigUint::zero();
        for d in 0..k {
            for e in 0..k {
                let t = row[d * k + e];
                if t == 0 || a[d] == 0 || b[e] == 0 {
                    continue;
                }
                // per-element preimage counts are A_D/|D| and B_E/|E|
                let num = BigUint::from(t) * a[d] * b[e];
                let den = BigUint::from(classes.sizes[d] as u64 * classes.sizes[e] as u64);
                at_rep += num / den;
            }
        }
        counts.push(at_rep * classes.sizes[c]);
    }
    let extra = w.rank() - 2;
    let scale = BigUint::from(n).pow(extra as u32);
    Ok(Distribution {
        group_order: n,
        class_sizes: classes.sizes.clone(),
        counts: counts.into_iter().map(|c| c * &scale).collect(),
        total: BigUint::from(n).pow(w.rank() as u32),
    })
}

/// Convolution path for two-letter power words, otherwise the naive path.
pub fn word_distribution<G: FiniteGroup + ?Sized>(
    group: &G,
    classes: &ConjClassData,
    w: &Word,
    budget: &Budget,
) -> Result<Distribution> {
    if w.power_pair().is_some() {
        word_distribution_convolution(group, classes, w)
    } else {
        word_distribution_naive(group, classes, w, budget)
    }
}

/// Approximate distribution from uniform samples of `G^d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloDistribution {
    pub samples: u64,
    pub seed: u64,
    pub class_sizes: Vec<usize>,
    pub class_masses: Vec<f64>,
    pub standard_errors: Vec<f64>,
    /// Plug-in estimate of the L¹ distance; biased upward.
    pub l1_estimate: f64,
}

const MC_CHUNK: u64 = 1 << 16;

pub fn word_distribution_monte_carlo<G: FiniteGroup + ?Sized>(
    group: &G,
    classes: &ConjClassData,
    w: &Word,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloDistribution> {
    check_classes(group, classes)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("Monte-Carlo mode needs at least one sample".into()));
    }
    let n = group.order();
    let d = w.rank();
    let k = classes.len();
    let chunks = samples.div_ceil(MC_CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|chunk| -> Result<Vec<u64>> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let todo = MC_CHUNK.min(samples - chunk * MC_CHUNK);
            let mut acc = vec![0u64; k];
            let mut tuple = vec![0usize; d];
            for _ in 0..todo {
                tuple.iter_mut().for_each(|t| *t = rng.gen_range(0..n));
                acc[classes.class_of[w.evaluate(&tuple, group)?] as usize] += 1;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(vec![0u64; k], |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        });
    let s = samples as f64;
    let masses: Vec<f64> = counts.iter().map(|&c| c as f64 / s).collect();
    let errors = masses.iter().map(|&p| (p * (1.0 - p) / s).sqrt()).collect();
    let l1 = masses
        .iter()
        .zip(&classes.sizes)
        .map(|(&p, &size)| (p - size as f64 / n as f64).abs())
        .sum();
    Ok(MonteCarloDistribution {
        samples,
        seed,
        class_sizes: classes.sizes.clone(),
        class_masses: masses,
        standard_errors: errors,
        l1_estimate: l1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouplab::{conjugacy_classes, Group};
    use crate::words::parse;

    fn setup(spec: &str) -> (Group, ConjClassData) {
        let g = Group::parse(spec).unwrap();
        let c = conjugacy_classes(&g, &Budget::default()).unwrap();
        (g, c)
    }

    #[test]
    fn single_letter_is_uniform() {
        let b = Budget::default();
        for spec in ["A4", "SL2(3)", "S4", "PSL2(7)", "GL2(3)", "C7", "SL3(2)"] {
            let (g, c) = setup(spec);
            let d = word_distribution_naive(&g, &c, &parse("x1").unwrap(), &b).unwrap();
            assert_eq!(d, Distribution::uniform(&c));
            assert!(d.l1_to_uniform().is_zero());
        }
    }

    #[test]
    fn commutator_on_a5() {
        let (g, c) = setup("A5");
        let d = word_distribution_naive(&g, &c, &parse("x1 x2 x1^-1 x2^-1").unwrap(), &Budget::default()).unwrap();
        assert_eq!(d.counts[0], BigUint::from(300u32));
        assert_eq!(d.total, BigUint::from(3600u32));
    }

    #[test]
    fn convolution_matches_naive() {
        let b = Budget::default();
        for spec in ["A5", "SL2(5)", "S4"] {
            let (g, c) = setup(spec);
            for text in ["x1^2 x2^2", "x1^3 x2^-2", "x2^2 x1^6", "x1 x3^2"] {
                let w = parse(text).unwrap();
                let naive = word_distribution_naive(&g, &c, &w, &b).unwrap();
                assert_eq!(naive, word_distribution_convolution(&g, &c, &w).unwrap(), "{spec} {text}");
            }
        }
    }

    #[test]
    fn l1_examples() {
        let (_, c) = setup("A5");
        let mut point = Distribution::uniform(&c);
        point.counts = (0..c.len()).map(|i| BigUint::from(u32::from(i == 0))).collect();
        point.total = BigUint::from(1u32);
        assert_eq!(point.l1_to_uniform(), BigRational::new(BigInt::from(59 * 2), BigInt::from(60)));
    }

    #[test]
    fn naive_budget_hint() {
        let (g, c) = setup("A5");
        let tiny = Budget { elements: 1_000_000, pair_ops: 100 };
        match word_distribution_naive(&g, &c, &parse("x1^2 x2^2").unwrap(), &tiny) {
            Err(Error::BudgetExceeded { hint: Some(h), .. }) => assert!(h.contains("convolution")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn monte_carlo_is_seeded_and_close() {
        let (g, c) = setup("A5");
        let w = parse("x1^2 x2^2").unwrap();
        let a = word_distribution_monte_carlo(&g, &c, &w, 200_000, 3).unwrap();
        let b = word_distribution_monte_carlo(&g, &c, &w, 200_000, 3).unwrap();
        assert_eq!(a, b);
        let exact = word_distribution_convolution(&g, &c, &w).unwrap().class_masses_f64();
        for ((p, e), x) in a.class_masses.iter().zip(&a.standard_errors).zip(&exact) {
            assert!((p - x).abs() < 6.0 * e + 1e-9);
        }
    }
}

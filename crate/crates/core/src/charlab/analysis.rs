use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::budget::Budget;
use crate::charlab::table::{CharacterTable, INTEGRALITY_TOL};
use crate::error::{Error, Result};
use crate::grouplab::{word_distribution_naive, ConjClassData, FiniteGroup};
use crate::words::Word;

/// `ζ^G(s) = Σ_χ χ(1)^{-s}`.
pub fn zeta(table: &CharacterTable, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::InvalidArgument(format!("zeta needs s > 0, got {s}")));
    }
    Ok(table.degrees().iter().map(|&d| (d as f64).powf(-s)).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TripleProbability {
    /// Clamped to `[0, 1]`.
    pub value: f64,
    pub raw: f64,
    pub clamped: bool,
}

/// Probability that `x₁^{m₁} x₂^{m₂} = g` for uniform conjugates `x₁` of
/// `c₁` and `x₂` of `c₂`, with `g` a fixed element of class `g_class`.
pub fn triple_probability(
    table: &CharacterTable,
    c1: usize,
    c2: usize,
    m1: i64,
    m2: i64,
    g_class: usize,
) -> Result<TripleProbability> {
    let p1 = table.power_map(m1)?;
    let p2 = table.power_map(m2)?;
    Ok(triple_from_maps(table, p1[c1], p2[c2], g_class))
}

fn triple_from_maps(table: &CharacterTable, a: usize, b: usize, g: usize) -> TripleProbability {
    let sum: Complex64 = table
        .characters
        .iter()
        .map(|r| r[a] * r[b] * r[g].conj() / r[0].re)
        .sum();
    let raw = sum.re / table.order as f64;
    let value = raw.clamp(0.0, 1.0);
    TripleProbability { value, raw, clamped: value != raw }
}

/// Class masses of `x₁^{m₁} x₂^{m₂}` on `G × G`, aggregated over class pairs
/// with weights `|C₁||C₂|/|G|²`.
pub fn power_word_distribution(table: &CharacterTable, m1: i64, m2: i64) -> Result<Vec<f64>> {
    let k = table.class_count();
    let n = table.order as f64;
    let p1 = table.power_map(m1)?;
    let p2 = table.power_map(m2)?;
    let mut out = vec![0.0; k];
    for (c, slot) in out.iter_mut().enumerate() {
        for c1 in 0..k {
            for c2 in 0..k {
                let w = table.class_sizes[c1] as f64 * table.class_sizes[c2] as f64 / (n * n);
                *slot += w * table.class_sizes[c] as f64 * triple_from_maps(table, p1[c1], p2[c2], c).value;
            }
        }
    }
    Ok(out)
}

/// `(‖P - μ‖₁, bound)` with bound `|G| (Σ_{χ≠1} |⟨P, χ⟩|²)^{1/2}` from
/// Cauchy–Schwarz and Parseval; `masses[C]` is the mass of class `C`.
pub fn fourier_l1_bound(table: &CharacterTable, masses: &[f64]) -> (f64, f64) {
    let n = table.order as f64;
    let l1 = masses
        .iter()
        .zip(&table.class_sizes)
        .map(|(&p, &s)| (p - s as f64 / n).abs())
        .sum();
    let energy: f64 = table
        .characters
        .iter()
        .skip(1)
        .map(|r| (r.iter().zip(masses).map(|(z, &p)| z.conj() * p).sum::<Complex64>() / n).norm_sqr())
        .sum();
    (l1, n * energy.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourierReport {
    pub word: String,
    pub d: usize,
    /// `a_χ` with `N_w = Σ a_χ χ`, in table order.
    pub coefficients: Vec<[f64; 2]>,
    pub r: i64,
    pub k: i64,
    pub r_in_range: bool,
    pub parity_ok: bool,
    pub max_pattern_error: f64,
    pub max_reconstruction_error: f64,
    pub bound: f64,
    pub l1: f64,
    pub bound_holds: bool,
}

impl FourierReport {
    pub fn all_checks_pass(&self) -> bool {
        self.r_in_range && self.parity_ok && self.k >= 1 && self.bound_holds
    }
}

/// Fourier analysis of `N_w(g) = |{x ∈ G^d : w(x) = g}|` for an admissible
/// word, with `N_w` counted exhaustively.
pub fn admissible_fourier<G: FiniteGroup + ?Sized>(
    group: &G,
    classes: &ConjClassData,
    table: &CharacterTable,
    w: &Word,
    budget: &Budget,
) -> Result<FourierReport> {
    if !w.is_admissible() || w.is_empty() {
        return Err(Error::InvalidArgument(format!("{w} is not a nonempty admissible word")));
    }
    if classes.sizes != table.class_sizes {
        return Err(Error::InvalidArgument("class data and table disagree".into()));
    }
    let d = w.rank();
    let n = table.order as f64;
    let dist = word_distribution_naive(group, classes, w, budget)?;
    // per-element counts
    let per: Vec<f64> = dist
        .counts
        .iter()
        .zip(&classes.sizes)
        .map(|(c, &s)| c.to_f64().unwrap() / s as f64)
        .collect();
    let coeffs: Vec<Complex64> = table
        .characters
        .iter()
        .map(|r| {
            (0..r.len()).map(|c| r[c].conj() * per[c] * classes.sizes[c] as f64).sum::<Complex64>() / n
        })
        .collect();
    let target = n.powi(d as i32 - 1);
    if coeffs.iter().any(|a| a.im.abs() > INTEGRALITY_TOL * target || a.re <= 0.0) {
        return Err(Error::FourierPattern(format!("coefficients of {w} are not positive reals")));
    }
    let degrees = table.degrees();
    let probe = degrees
        .iter()
        .position(|&deg| deg > 1)
        .ok_or_else(|| Error::FourierPattern("no nonlinear character to fix r".into()))?;
    let k = ((target / coeffs[probe].re).ln() / (degrees[probe] as f64).ln()).round() as i64;
    let mut max_pattern_error = 0.0f64;
    for (a, &deg) in coeffs.iter().zip(&degrees) {
        let predicted = target / (deg as f64).powi(k as i32);
        max_pattern_error = max_pattern_error.max((a.re - predicted).abs() / predicted);
    }
    if max_pattern_error > INTEGRALITY_TOL {
        return Err(Error::FourierPattern(format!(
            "no single integer r fits {w}: best k = {k} leaves relative error {max_pattern_error:e}"
        )));
    }
    let mut max_reconstruction_error = 0.0f64;
    for (c, &exact) in per.iter().enumerate() {
        let rec: Complex64 = coeffs.iter().zip(&table.characters).map(|(a, r)| a * r[c]).sum();
        max_reconstruction_error = max_reconstruction_error.max((rec - exact).norm() / exact.abs().max(1.0));
    }
    if max_reconstruction_error > INTEGRALITY_TOL {
        return Err(Error::Tolerance(format!("Σ a_χ χ misses N_w by {max_reconstruction_error:e}")));
    }
    let r = d as i64 - k;
    let bound = if k >= 1 { (zeta(table, 2.0 * k as f64)? - 1.0).max(0.0).sqrt() } else { f64::INFINITY };
    let l1 = dist.l1_to_uniform().to_f64().unwrap();
    Ok(FourierReport {
        word: w.to_string(),
        d,
        coefficients: coeffs.iter().map(|z| [z.re, z.im]).collect(),
        r,
        k,
        r_in_range: 1 <= r && r <= d as i64,
        parity_ok: (r - d as i64).rem_euclid(2) == 1,
        max_pattern_error,
        max_reconstruction_error,
        bound,
        l1,
        bound_holds: l1 <= bound + 1e-12,
    })
}

/// No nontrivial character has a kernel beyond the identity class.
pub fn is_simple(table: &CharacterTable) -> bool {
    table.order > 1
        && table.characters.iter().skip(1).all(|r| {
            (1..r.len()).all(|c| (r[c] - r[0]).norm() > INTEGRALITY_TOL)
        })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenericBound {
    pub epsilon: f64,
    pub fraction: f64,
    /// `2 - ζ^G(2ε)`.
    pub zeta_bound: f64,
    pub lower_bound: f64,
    pub holds: bool,
    pub simple: bool,
}

/// Fraction of `g` with `|χ(g)| ≤ χ(1)^ε` for every `χ ≠ 1`, against
/// `max(0, 2 - ζ^G(2ε))`. A failure is an error only on simple tables.
pub fn generic_bound_fraction(table: &CharacterTable, epsilon: f64) -> Result<GenericBound> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {epsilon}")));
    }
    let good: usize = (0..table.class_count())
        .filter(|&c| {
            table.characters.iter().skip(1).all(|r| r[c].norm() <= r[0].re.powf(epsilon) + 1e-9)
        })
        .map(|c| table.class_sizes[c])
        .sum();
    let fraction = good as f64 / table.order as f64;
    let zeta_bound = 2.0 - zeta(table, 2.0 * epsilon)?;
    let lower_bound = zeta_bound.max(0.0);
    let simple = is_simple(table);
    let holds = fraction + 1e-12 >= lower_bound;
    if simple && !holds {
        return Err(Error::Invariant(format!(
            "generic fraction {fraction} below 2 - ζ(2ε) = {zeta_bound} on a simple group"
        )));
    }
    Ok(GenericBound { epsilon, fraction, zeta_bound, lower_bound, holds, simple })
}

/// `max_{χ ≠ 1, C ∈ classes} |χ(C^m)|`; descriptive only.
pub fn max_power_character_value(table: &CharacterTable, m: i64, classes: &[usize]) -> Result<f64> {
    let map = table.power_map(m)?;
    let map = &map;
    Ok(table
        .characters
        .iter()
        .skip(1)
        .flat_map(|r| classes.iter().map(move |&c| r[map[c]].norm()))
        .fold(0.0, f64::max))
}

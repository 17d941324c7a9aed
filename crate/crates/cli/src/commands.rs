use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};
use wordmaplab::charlab::{
    admissible_fourier, compute_table, fourier_l1_bound, generic_bound_fraction, power_word_distribution, zeta,
    CharacterTable, TableOptions,
};
use wordmaplab::ffpoly::{count_irreducibles, enumerate_irreducibles, necklace, FamilyKind, FamilyTag};
use wordmaplab::genfun::{enumerated_block_histogram, euler_product, family_factor_distribution, tail_table};
use wordmaplab::grouplab::{
    conjugacy_classes, count_unipotents, fiber_histogram_by_classes, fiber_histogram_direct,
    regular_semisimple_centralizers, sl2_trace_transitivity, word_distribution, word_distribution_monte_carlo,
    ConjClassData, Distribution, FiniteGroup, Group,
};
use wordmaplab::words::{parse, Word};
use wordmaplab::{Budget, Error};

use crate::artifact::Artifact;
use crate::config::{Command, ExperimentConfig, Family, GroupWord, TableAction};
use crate::CliError;

/// Tolerance for character-side against exact class masses.
pub const CHARACTER_AGREEMENT_TOL: f64 = 1e-8;

fn big(n: &BigUint) -> Value {
    Value::String(n.to_string())
}

fn rational(r: &BigRational) -> (Value, Value) {
    (Value::String(r.numer().to_string()), Value::String(r.denom().to_string()))
}

pub fn execute(config: &ExperimentConfig) -> Result<Artifact, CliError> {
    let budget = &config.budget;
    match &config.command {
        Command::IdentityCheck { q, trunc, lambda } => identity_check(*q, *trunc, *lambda),
        Command::IrreducibleCounts { family, q, n_max } => irreducible_counts(*family, *q, *n_max, budget),
        Command::FactorDist { family, q, trunc, enumerate } => factor_dist(*family, *q, *trunc, *enumerate, budget),
        Command::Tail { family, q, trunc, m_max, k } => tail(*family, *q, *trunc, *m_max, k),
        Command::Wordmap { target, monte_carlo } => wordmap(target, *monte_carlo, config.seed, budget),
        Command::Fibers { group, m } => fibers(group, m, budget),
        Command::Unipotents { group } => unipotents(group, budget),
        Command::Sl2Triples { q, traces } => sl2_triples(*q, traces.as_deref(), budget),
        Command::Zeta { group, s } => zeta_values(group, s, config.seed, budget),
        Command::GenericBound { group, eps } => generic_bound(group, eps, config.seed, budget),
        Command::Admissible { target } => admissible(target, config.seed, budget),
        Command::Table { action: TableAction::Emit { group } } => table_emit(group, config.seed, budget),
        Command::Table { action: TableAction::Ingest { input } } => {
            let text = std::fs::read_to_string(input).map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
            table_ingest(&text)
        }
    }
}

fn identity_check(q: u64, trunc: usize, lambda: u32) -> Result<Artifact, CliError> {
    let mut a = Artifact::new(&["n", "d_n", "expected", "equal"]);
    let exps: Vec<BigInt> = (1..=trunc).map(|n| BigInt::from(necklace(n, q)) * lambda).collect();
    let series = euler_product(&exps, trunc)?;
    let qb = BigUint::from(q);
    let mut binom = BigUint::one();
    let mut mismatches = 0;
    for n in 0..=trunc {
        if n > 0 {
            // C(n+λ-1, n) from C(n+λ-2, n-1)
            binom = binom * BigUint::from(n + lambda as usize - 1) / BigUint::from(n);
        }
        let expected = &binom * qb.pow(n as u32);
        let got = series.coeff(n);
        let equal = *got == expected;
        mismatches += usize::from(!equal);
        a.row(vec![json!(n), big(got), big(&expected), json!(equal)]);
    }
    a.note("q", q);
    a.note("lambda", lambda);
    a.check(
        "euler product identity d_n = C(n+lambda-1, n) q^n",
        mismatches == 0,
        format!("{mismatches} mismatches for n <= {trunc}"),
    );
    Ok(a)
}

fn irreducible_counts(family: Family, q: u64, n_max: usize, budget: &Budget) -> Result<Artifact, CliError> {
    let kind = FamilyKind::from(family);
    let mut a = Artifact::new(&["family", "q", "n", "formula", "enumerated", "equal"]);
    let mut mismatches = 0;
    for n in 1..=n_max {
        let formula = count_irreducibles(kind, n, q)?;
        let counted = BigUint::from(enumerate_irreducibles(kind, n, q, budget)?);
        let equal = formula == counted;
        mismatches += usize::from(!equal);
        a.row(vec![json!(kind.to_string()), json!(q), json!(n), big(&formula), big(&counted), json!(equal)]);
    }
    a.check("closed-form block counts equal enumeration", mismatches == 0, format!("{mismatches} mismatches"));
    Ok(a)
}

fn family_tag(kind: FamilyKind, n: usize, q: u64) -> FamilyTag {
    match kind {
        FamilyKind::Linear => FamilyTag::Linear { n, q },
        FamilyKind::Unitary => FamilyTag::Unitary { n, q },
        FamilyKind::SelfDual => FamilyTag::SelfDual { degree: 2 * n, q },
    }
}

fn factor_dist(family: Family, q: u64, trunc: usize, enumerate: usize, budget: &Budget) -> Result<Artifact, CliError> {
    let kind = FamilyKind::from(family);
    let dist = family_factor_distribution(kind, q, trunc)?;
    let mut a = Artifact::new(&["family", "q", "n", "m", "count"]);
    let mut bad_totals = Vec::new();
    for n in 1..=trunc {
        for m in 0..=n {
            a.row(vec![json!(kind.to_string()), json!(q), json!(n), json!(m), big(&dist.coeff(n, m))]);
        }
        if dist.row_sum(n) != family_tag(kind, n, q).cardinality() {
            bad_totals.push(n);
        }
    }
    a.note("family", kind.to_string());
    a.note("q", q);
    a.note("count_convention", "minimal blocks; degree 2n for selfdual");
    a.check("row totals equal family sizes", bad_totals.is_empty(), format!("failing n: {bad_totals:?}"));
    if enumerate > 0 {
        let mut bad = Vec::new();
        for n in 1..=enumerate {
            let hist = enumerated_block_histogram(kind, q, n, budget)?;
            let exact: Vec<u64> = (0..=n).map(|m| dist.coeff(n, m).to_u64().unwrap_or(u64::MAX)).collect();
            if hist != exact {
                bad.push(n);
            }
        }
        a.check(
            "generating function equals enumeration histogram",
            bad.is_empty(),
            format!("n <= {enumerate}, failing n: {bad:?}"),
        );
    }
    Ok(a)
}

fn tail(family: Family, q: u64, trunc: usize, m_max: usize, ks: &[u32]) -> Result<Artifact, CliError> {
    let kind = FamilyKind::from(family);
    let table = tail_table(kind, q, trunc, m_max, ks)?;
    let mut a = Artifact::new(&["family", "q", "n", "m", "tail_num", "tail_den"]);
    for r in &table.rows {
        a.row(vec![json!(kind.to_string()), json!(q), json!(r.n), json!(r.m), big(&r.num), big(&r.den)]);
    }
    a.note("thresholds", &table.thresholds);
    a.note("empirical_fits", &table.empirical);
    let monotone = table.rows.windows(2).all(|w| {
        w[0].n != w[1].n
            || &w[1].num * &w[0].den <= &w[0].num * &w[1].den
    });
    a.check("tails are nonincreasing in m", monotone, format!("n <= {trunc}, m <= {m_max}"));
    Ok(a)
}

struct GroupData {
    group: Group,
    classes: ConjClassData,
}

fn load_group(spec: &str, budget: &Budget) -> Result<GroupData, CliError> {
    let group = Group::parse_with_budget(spec, budget)?;
    let classes = conjugacy_classes(&group, budget)?;
    Ok(GroupData { group, classes })
}

fn table_for(data: &GroupData, seed: u64) -> Result<CharacterTable, Error> {
    compute_table(&data.group, &data.classes, &TableOptions { seed, ..TableOptions::default() })
}

fn distribution_rows(a: &mut Artifact, dist: &Distribution) {
    for (c, &size) in dist.class_sizes.iter().enumerate() {
        let (num, den) = rational(&dist.class_mass(c));
        a.row(vec![json!(c), json!(size), num, den]);
    }
}

/// Character-side class masses when the word has a character formula.
fn character_masses(table: &CharacterTable, classes: &ConjClassData, w: &Word) -> Option<Result<Vec<f64>, Error>> {
    if let Some((m1, m2)) = w.power_pair() {
        return Some(power_word_distribution(table, m1, m2));
    }
    if w.is_empty() {
        let mut masses = vec![0.0; classes.len()];
        masses[0] = 1.0;
        return Some(Ok(masses));
    }
    if let [(_, m)] = w.letters()[..] {
        return Some(table.power_map(m).map(|map| {
            let mut masses = vec![0.0; classes.len()];
            for (d, &c) in map.iter().enumerate() {
                masses[c] += classes.sizes[d] as f64 / classes.order as f64;
            }
            masses
        }));
    }
    None
}

fn wordmap(target: &GroupWord, monte_carlo: Option<u64>, seed: u64, budget: &Budget) -> Result<Artifact, CliError> {
    let data = load_group(&target.group, budget)?;
    let w = parse(&target.word)?;
    if let Some(samples) = monte_carlo {
        let mc = word_distribution_monte_carlo(&data.group, &data.classes, &w, samples, seed)?;
        let mut a = Artifact::new(&["class_index", "class_size", "mass_estimate", "standard_error"]);
        a.approximate = true;
        for (c, &size) in mc.class_sizes.iter().enumerate() {
            a.row(vec![json!(c), json!(size), json!(mc.class_masses[c]), json!(mc.standard_errors[c])]);
        }
        a.note("group", data.group.name());
        a.note("word", w.to_string());
        a.note("samples", samples);
        a.note("l1_estimate", mc.l1_estimate);
        return Ok(a);
    }
    let dist = word_distribution(&data.group, &data.classes, &w, budget)?;
    let mut a = Artifact::new(&["class_index", "class_size", "probability_num", "probability_den"]);
    distribution_rows(&mut a, &dist);
    let l1 = dist.l1_to_uniform();
    let (num, den) = rational(&l1);
    a.note("group", data.group.name());
    a.note("word", w.to_string());
    a.note("probability", "class mass");
    a.note("method", if w.power_pair().is_some() { "convolution" } else { "enumeration" });
    a.note("l1_num", num);
    a.note("l1_den", den);
    a.note("l1", l1.to_f64().unwrap_or(f64::NAN));
    let exact = dist.class_masses_f64();
    match table_for(&data, seed) {
        Ok(table) => {
            if let Some(masses) = character_masses(&table, &data.classes, &w) {
                let masses = masses?;
                let gap = exact.iter().zip(&masses).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                a.note("character_max_discrepancy", gap);
                a.check(
                    "character-side distribution equals exact distribution",
                    gap < CHARACTER_AGREEMENT_TOL,
                    format!("max class discrepancy {gap:e}"),
                );
            } else {
                a.note("character_side", "no character formula for this word");
            }
            let (l1f, bound) = fourier_l1_bound(&table, &exact);
            a.note("fourier_l1_bound", bound);
            a.check("L1 distance within Fourier bound", l1f <= bound + 1e-9, format!("{l1f} <= {bound}"));
        }
        Err(Error::InvalidArgument(msg)) => a.note("character_side", msg),
        Err(e) => return Err(e.into()),
    }
    Ok(a)
}

fn fibers(spec: &str, ms: &[i64], budget: &Budget) -> Result<Artifact, CliError> {
    let data = load_group(spec, budget)?;
    let mut a = Artifact::new(&["m", "fiber_size", "elements"]);
    let (mut disagree, mut bad_mass) = (Vec::new(), Vec::new());
    for &m in ms {
        let direct = fiber_histogram_direct(&data.group, m, budget)?;
        let by_class = fiber_histogram_by_classes(&data.group, &data.classes, m)?;
        if direct != by_class {
            disagree.push(m);
        }
        if direct.mass() != data.group.order() {
            bad_mass.push(m);
        }
        for (size, count) in &direct.counts {
            a.row(vec![json!(m), json!(size), json!(count)]);
        }
    }
    a.note("group", data.group.name());
    a.note("order", data.group.order());
    a.check("direct and class-based fiber histograms agree", disagree.is_empty(), format!("failing m: {disagree:?}"));
    a.check("histogram mass equals |G|", bad_mass.is_empty(), format!("failing m: {bad_mass:?}"));
    Ok(a)
}

fn unipotents(spec: &str, budget: &Budget) -> Result<Artifact, CliError> {
    let group = Group::parse_with_budget(spec, budget)?;
    let ops = group.linear_ops()?;
    let count = count_unipotents(&group, budget)?;
    let (q, n) = (ops.field.order() as u64, ops.n as u32);
    let expected = BigUint::from(q).pow(n * n - n);
    let equal = BigUint::from(count) == expected;
    let mut a = Artifact::new(&["group", "q", "n", "count", "expected", "equal"]);
    a.row(vec![json!(group.name()), json!(q), json!(n), json!(count), big(&expected), json!(equal)]);
    a.check("unipotent count equals q^(n^2-n)", equal, format!("{count} against {expected}"));
    Ok(a)
}

fn sl2_triples(q: u64, traces: Option<&[u32]>, budget: &Budget) -> Result<Artifact, CliError> {
    let triples: Vec<[u32; 3]> = match traces {
        Some(&[a1, a2, a3]) => vec![[a1, a2, a3]],
        Some(_) => return Err(CliError::Usage("--traces takes exactly three values".into())),
        None => {
            let q = q as u32;
            (0..q).flat_map(|a| (0..q).flat_map(move |b| (0..q).map(move |c| [a, b, c]))).collect()
        }
    };
    let mut a = Artifact::new(&[
        "a1", "a2", "a3", "rejected", "solutions", "pgl2_order", "pgl2_free", "pgl2_transitive", "sl2_stabilizer",
        "sl2_orbits",
    ]);
    let mut bad = Vec::new();
    for t in triples {
        let r = sl2_trace_transitivity(q, t, budget)?;
        if r.rejected.is_none() && !(r.simply_transitive() && r.solutions == r.pgl2_order) {
            bad.push(t);
        }
        a.row(vec![
            json!(t[0]),
            json!(t[1]),
            json!(t[2]),
            json!(r.rejected),
            json!(r.solutions),
            json!(r.pgl2_order),
            json!(r.pgl2_free),
            json!(r.pgl2_transitive),
            json!(r.sl2_stabilizer),
            json!(r.sl2_orbits),
        ]);
    }
    a.check(
        "admissible traces give one free PGL2 orbit",
        bad.is_empty(),
        format!("failing triples: {bad:?}"),
    );
    let sl2 = Group::parse_with_budget(&format!("SL2({q})"), budget)?;
    let orders: BTreeSet<usize> = regular_semisimple_centralizers(&sl2, budget)?.into_iter().map(|(_, c)| c).collect();
    let tori = [q as usize - 1, q as usize + 1];
    a.note("centralizer_orders", &orders);
    a.check(
        "regular semisimple centralizers have order q-1 or q+1",
        orders.iter().all(|c| tori.contains(c)),
        format!("{orders:?}"),
    );
    Ok(a)
}

fn zeta_values(spec: &str, s: &[f64], seed: u64, budget: &Budget) -> Result<Artifact, CliError> {
    let table = table_for(&load_group(spec, budget)?, seed)?;
    let mut a = Artifact::new(&["s", "zeta"]);
    for &s in s {
        a.row(vec![json!(s), json!(zeta(&table, s)?)]);
    }
    a.note("group", &table.group);
    a.note("degrees", table.degrees());
    Ok(a)
}

fn generic_bound(spec: &str, eps: &[f64], seed: u64, budget: &Budget) -> Result<Artifact, CliError> {
    let table = table_for(&load_group(spec, budget)?, seed)?;
    let mut a = Artifact::new(&["epsilon", "fraction", "zeta_bound", "lower_bound", "holds", "simple"]);
    let mut failing = Vec::new();
    for &e in eps {
        match generic_bound_fraction(&table, e) {
            Ok(r) => a.row(vec![
                json!(r.epsilon),
                json!(r.fraction),
                json!(r.zeta_bound),
                json!(r.lower_bound),
                json!(r.holds),
                json!(r.simple),
            ]),
            Err(Error::Invariant(msg)) => failing.push(format!("eps={e}: {msg}")),
            Err(e) => return Err(e.into()),
        }
    }
    a.note("group", &table.group);
    a.check(
        "generic fraction >= max(0, 2 - zeta(2 eps)) on simple groups",
        failing.is_empty(),
        failing.join("; "),
    );
    Ok(a)
}

fn admissible(target: &GroupWord, seed: u64, budget: &Budget) -> Result<Artifact, CliError> {
    let data = load_group(&target.group, budget)?;
    let table = table_for(&data, seed)?;
    let w = parse(&target.word)?;
    let r = admissible_fourier(&data.group, &data.classes, &table, &w, budget)?;
    let mut a = Artifact::new(&["character", "degree", "coeff_re", "coeff_im", "predicted"]);
    let top = (data.group.order() as f64).powi(r.d as i32 - 1);
    for (i, (c, deg)) in r.coefficients.iter().zip(table.degrees()).enumerate() {
        a.row(vec![json!(i), json!(deg), json!(c[0]), json!(c[1]), json!(top / (deg as f64).powi(r.k as i32))]);
    }
    a.note("group", &table.group);
    a.note("word", &r.word);
    a.note("d", r.d);
    a.note("r", r.r);
    a.note("k", r.k);
    a.note("max_pattern_error", r.max_pattern_error);
    a.note("max_reconstruction_error", r.max_reconstruction_error);
    a.note("l1", r.l1);
    a.note("bound", r.bound);
    a.check("1 <= r <= d", r.r_in_range, format!("r = {}, d = {}", r.r, r.d));
    a.check("r and d have opposite parity", r.parity_ok, format!("r = {}, d = {}", r.r, r.d));
    a.check("k = d - r >= 1", r.k >= 1, format!("k = {}", r.k));
    a.check("L1 distance within sqrt(zeta(2k) - 1)", r.bound_holds, format!("{} <= {}", r.l1, r.bound));
    Ok(a)
}

fn table_emit(spec: &str, seed: u64, budget: &Budget) -> Result<Artifact, CliError> {
    let table = table_for(&load_group(spec, budget)?, seed)?;
    let mut a = Artifact::default();
    a.document = Some(serde_json::to_value(&table)?);
    a.check("table invariants", true, "validated at construction");
    Ok(a)
}

fn table_ingest(text: &str) -> Result<Artifact, CliError> {
    let table = CharacterTable::from_json(text)?;
    let mut a = Artifact::new(&["character", "degree"]);
    for (i, d) in table.degrees().into_iter().enumerate() {
        a.row(vec![json!(i), json!(d)]);
    }
    a.note("group", &table.group);
    a.note("order", table.order);
    a.note("classes", table.class_count());
    let sum: u64 = table.degrees().iter().map(|d| d * d).sum();
    a.check("sum of squared degrees equals |G|", sum == table.order as u64, format!("{sum} against {}", table.order));
    a.check("table invariants", true, "re-validated on ingest");
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_rows_for_binomial_case() {
        let a = identity_check(2, 20, 3).unwrap();
        assert!(a.passed());
        // C(5, 3) · 2³
        assert_eq!(a.rows[3][1], json!("80"));
    }

    #[test]
    fn single_letter_is_uniform() {
        let budget = Budget::default();
        let a = wordmap(&GroupWord { group: "A5".into(), word: "x1".into() }, None, 1, &budget).unwrap();
        assert_eq!(a.summary["l1"], json!(0.0));
        assert!(a.passed());
    }
}

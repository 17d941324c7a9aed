//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use wordmaplab::charlab::{
    admissible_fourier, compute_table, generic_bound_fraction, power_word_distribution, CharacterTable, TableOptions,
};
use wordmaplab::ffpoly::{count_irreducibles, enumerate_irreducibles, necklace, FamilyKind};
use wordmaplab::genfun::{enumerated_block_histogram, euler_product, family_factor_distribution};
use wordmaplab::grouplab::{
    conjugacy_classes, count_unipotents, fiber_histogram, regular_semisimple_centralizers, sl2_trace_transitivity,
    word_distribution_convolution, ConjClassData, FiniteGroup, Group,
};
use wordmaplab::words::parse;
use wordmaplab::{Budget, Error};
use wordmaplab_cli::{run, Command, ExperimentConfig, Family, Format, GroupWord, TableAction};

type Verdict = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(limit: Duration, start: Instant, detail: String) -> Verdict {
    let took = start.elapsed();
    ensure(took < limit, format!("{detail}; {:.2}s of {}s allowed", took.as_secs_f64(), limit.as_secs()))
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn setup(spec: &str) -> Result<(Group, ConjClassData, CharacterTable), String> {
    let g = Group::parse(spec).map_err(fail)?;
    let c = conjugacy_classes(&g, &Budget::default()).map_err(fail)?;
    let t = compute_table(&g, &c, &TableOptions::default()).map_err(fail)?;
    Ok((g, c, t))
}

fn lemma_identity() -> Verdict {
    let start = Instant::now();
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let e: Vec<BigInt> = (1..=40).map(|n| BigInt::from(necklace(n, q))).collect();
        let s = euler_product(&e, 40).map_err(fail)?;
        if let Some(n) = (0..=40).find(|&n| *s.coeff(n) != BigUint::from(q).pow(n as u32)) {
            return Err(format!("q={q}: d_{n} = {} differs from q^n", s.coeff(n)));
        }
    }
    within(Duration::from_secs(5), start, "d_n = q^n for n <= 40, 7 fields".into())
}

fn binomial_case() -> Verdict {
    for lambda in [2u32, 3] {
        for q in [2u64, 3] {
            let e: Vec<BigInt> = (1..=20).map(|n| BigInt::from(necklace(n, q)) * lambda).collect();
            let s = euler_product(&e, 20).map_err(fail)?;
            let mut binom = BigUint::from(1u32);
            for n in 0..=20usize {
                if n > 0 {
                    binom = binom * BigUint::from(n + lambda as usize - 1) / BigUint::from(n);
                }
                if *s.coeff(n) != &binom * BigUint::from(q).pow(n as u32) {
                    return Err(format!("lambda={lambda} q={q} n={n}"));
                }
            }
        }
    }
    Ok("d_n = C(n+lambda-1, n) q^n for lambda in {2,3}, q in {2,3}, n <= 20".into())
}

fn irreducible_counts() -> Verdict {
    let budget = Budget::default();
    let cases: [(FamilyKind, &[u64], usize); 3] = [
        (FamilyKind::Linear, &[2, 3, 4, 5], 6),
        (FamilyKind::Unitary, &[2, 3], 4),
        (FamilyKind::SelfDual, &[2, 3, 5], 6),
    ];
    let mut checked = 0;
    for (kind, qs, n_max) in cases {
        for &q in qs {
            for n in 1..=n_max {
                let formula = count_irreducibles(kind, n, q).map_err(fail)?;
                let counted = enumerate_irreducibles(kind, n, q, &budget).map_err(fail)?;
                if formula != BigUint::from(counted) {
                    return Err(format!("{kind} q={q} n={n}: formula {formula}, enumeration {counted}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (family, q, n) cases equal"))
}

fn factor_distributions() -> Verdict {
    let start = Instant::now();
    let budget = Budget::default();
    let cases = [
        (FamilyKind::Linear, 2u64, 10usize),
        (FamilyKind::Linear, 3, 10),
        (FamilyKind::SelfDual, 2, 5),
        (FamilyKind::SelfDual, 3, 5),
        (FamilyKind::Unitary, 2, 6),
    ];
    for (kind, q, n_max) in cases {
        let dist = family_factor_distribution(kind, q, n_max).map_err(fail)?;
        for n in 1..=n_max {
            let hist = enumerated_block_histogram(kind, q, n, &budget).map_err(fail)?;
            let exact: Vec<u64> = (0..=n).map(|m| dist.coeff(n, m).to_u64().unwrap()).collect();
            if hist != exact {
                return Err(format!("{kind} q={q} n={n}: {exact:?} against enumerated {hist:?}"));
            }
        }
    }
    within(Duration::from_secs(120), start, "5 families match enumeration".into())
}

fn totals() -> Verdict {
    for q in [2u64, 3, 4, 5] {
        for (kind, shift) in [(FamilyKind::Linear, 1u32), (FamilyKind::SelfDual, 0)] {
            let dist = family_factor_distribution(kind, q, 30).map_err(fail)?;
            for n in 1..=30u32 {
                if dist.row_sum(n as usize) != BigUint::from(q).pow(n - shift) {
                    return Err(format!("{kind} q={q} n={n}"));
                }
            }
        }
    }
    Ok("row sums q^(n-1) linear, q^n self-dual, n <= 30".into())
}

fn frobenius_oracle() -> Verdict {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for spec in ["A5", "A6", "PSL2(7)", "PSL2(11)", "SL2(5)"] {
        let (g, c, t) = setup(spec)?;
        for m1 in [1i64, 2, 3, 6] {
            for m2 in [1i64, 2, 3, 6] {
                let w = parse(&format!("x1^{m1} x2^{m2}")).map_err(fail)?;
                let exact = word_distribution_convolution(&g, &c, &w).map_err(fail)?.class_masses_f64();
                let chars = power_word_distribution(&t, m1, m2).map_err(fail)?;
                let gap = exact.iter().zip(&chars).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                if gap >= 1e-8 {
                    return Err(format!("{spec} ({m1},{m2}): discrepancy {gap:e}"));
                }
                worst = worst.max(gap);
            }
        }
    }
    within(Duration::from_secs(300), start, format!("max class discrepancy {worst:.1e}"))
}

fn uniformity_trend() -> Verdict {
    let w = parse("x1^2 x2^2").map_err(fail)?;
    let mut values = Vec::new();
    for q in [5u64, 7, 9, 11, 13] {
        let g = Group::parse(&format!("PSL2({q})")).map_err(fail)?;
        let c = conjugacy_classes(&g, &Budget::default()).map_err(fail)?;
        let d = word_distribution_convolution(&g, &c, &w).map_err(fail)?.l1_to_uniform();
        values.push((q, d.to_f64().unwrap()));
    }
    let listing: Vec<String> = values.iter().map(|(q, d)| format!("q={q}: {d:.4}")).collect();
    ensure(
        values[4].1 < values[0].1 && values.iter().all(|&(_, d)| d < 1.0),
        listing.join(", "),
    )
}

fn steinberg() -> Verdict {
    let mut got = Vec::new();
    for (spec, expected) in [("SL2(3)", 9), ("SL2(5)", 25), ("SL2(7)", 49), ("SL3(2)", 64)] {
        let g = Group::parse(spec).map_err(fail)?;
        let n = count_unipotents(&g, &Budget::default()).map_err(fail)?;
        if n != expected {
            return Err(format!("{spec}: {n} unipotents, expected {expected}"));
        }
        got.push(format!("{spec}={n}"));
    }
    Ok(got.join(", "))
}

fn trace_transitivity() -> Verdict {
    let start = Instant::now();
    let budget = Budget::default();
    // 𝔽₅ ∖ {±2}
    let allowed = [0u32, 1, 4];
    let (mut tested, mut skipped) = (0, 0);
    for a in allowed {
        for b in allowed {
            for c in allowed {
                let r = sl2_trace_transitivity(5, [a, b, c], &budget).map_err(fail)?;
                if r.rejected.is_some() {
                    skipped += 1;
                    continue;
                }
                if r.solutions != 120 || !r.pgl2_free || !r.pgl2_transitive {
                    return Err(format!(
                        "traces ({a},{b},{c}): {} solutions, free {}, transitive {}",
                        r.solutions, r.pgl2_free, r.pgl2_transitive
                    ));
                }
                tested += 1;
            }
        }
    }
    let sl2 = Group::parse("SL2(5)").map_err(fail)?;
    let cents = regular_semisimple_centralizers(&sl2, &budget).map_err(fail)?;
    if let Some((g, c)) = cents.iter().find(|(_, c)| *c != 4 && *c != 6) {
        return Err(format!("element {g} has centralizer order {c}"));
    }
    within(
        Duration::from_secs(120),
        start,
        format!("{tested} triples with 120 solutions and free PGL2 action, {skipped} excluded; {} centralizers in {{4,6}}", cents.len()),
    )
}

fn fiber_cross_check() -> Verdict {
    let budget = Budget::default();
    for q in [3u64, 5, 7] {
        let g = Group::parse(&format!("SL2({q})")).map_err(fail)?;
        let c = conjugacy_classes(&g, &budget).map_err(fail)?;
        for m in [2i64, 3, 4, 6] {
            let h = fiber_histogram(&g, &c, m, &budget).map_err(|e| format!("SL2({q}) m={m}: {e}"))?;
            if h.mass() != g.order() {
                return Err(format!("SL2({q}) m={m}: mass {}", h.mass()));
            }
        }
    }
    Ok("both routes agree for SL2(3), SL2(5), SL2(7), m in {2,3,4,6}".into())
}

fn admissible_words() -> Verdict {
    let budget = Budget::default();
    let mut notes = Vec::new();
    for spec in ["A5", "PSL2(7)"] {
        let (g, c, t) = setup(spec)?;
        for text in ["x1 x2 x1^-1 x2^-1", "x1 x2 x3 x1^-1 x2^-1 x3^-1"] {
            let w = parse(text).map_err(fail)?;
            let r = match admissible_fourier(&g, &c, &t, &w, &budget) {
                Err(Error::BudgetExceeded { .. }) if spec != "A5" && w.rank() == 3 => {
                    notes.push(format!("{spec} {text}: over budget, skipped"));
                    continue;
                }
                other => other.map_err(|e| format!("{spec} {text}: {e}"))?,
            };
            if !(r.all_checks_pass() && r.max_pattern_error < 1e-6) {
                return Err(format!(
                    "{spec} {text}: r={} k={} parity {} pattern error {:e} l1 {} bound {}",
                    r.r, r.k, r.parity_ok, r.max_pattern_error, r.l1, r.bound
                ));
            }
            notes.push(format!("{spec} d={} r={} l1={:.2e}<={:.3}", r.d, r.r, r.l1, r.bound));
        }
    }
    Ok(notes.join("; "))
}

fn generic_bound() -> Verdict {
    let mut notes = Vec::new();
    for spec in ["A5", "A6", "PSL2(7)", "PSL2(11)"] {
        let (_, _, t) = setup(spec)?;
        for eps in [0.25, 0.5] {
            let r = generic_bound_fraction(&t, eps).map_err(|e| format!("{spec} eps={eps}: {e}"))?;
            if !r.holds {
                return Err(format!("{spec} eps={eps}: {} < {}", r.fraction, r.lower_bound));
            }
            notes.push(format!("{spec}@{eps}: {:.3}>={:.3}", r.fraction, r.lower_bound));
        }
    }
    Ok(notes.join(", "))
}

fn every_command() -> Vec<Command> {
    let gw = |group: &str, word: &str| GroupWord { group: group.into(), word: word.into() };
    vec![
        Command::IdentityCheck { q: 3, trunc: 40, lambda: 1 },
        Command::IrreducibleCounts { family: Family::Unitary, q: 3, n_max: 4 },
        Command::FactorDist { family: Family::Linear, q: 2, trunc: 16, enumerate: 6 },
        Command::Tail { family: Family::Selfdual, q: 3, trunc: 20, m_max: 6, k: vec![1, 2] },
        Command::Wordmap { target: gw("A5", "x1^2 x2^2"), monte_carlo: None },
        Command::Wordmap { target: gw("PSL2(7)", "x1 x2 x1^-1 x2^-1"), monte_carlo: Some(50_000) },
        Command::Fibers { group: "SL2(5)".into(), m: vec![2, 3, 4, 6] },
        Command::Unipotents { group: "SL3(2)".into() },
        Command::Sl2Triples { q: 5, traces: None },
        Command::Zeta { group: "A6".into(), s: vec![0.5, 1.0, 2.0] },
        Command::GenericBound { group: "PSL2(11)".into(), eps: vec![0.25, 0.5] },
        Command::Admissible { target: gw("A5", "x1 x2 x1^-1 x2^-1") },
        Command::Table { action: TableAction::Emit { group: "PSL2(7)".into() } },
    ]
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(fail)?;
    let table_path = dir.path().join("table.json");
    let mut commands = every_command();
    commands.push(Command::Table { action: TableAction::Ingest { input: table_path.clone() } });
    let mut runs = 0;
    for (i, command) in commands.into_iter().enumerate() {
        for format in [Format::Csv, Format::Json] {
            let name = command.name();
            let out = if matches!(command, Command::Table { action: TableAction::Emit { .. } }) {
                table_path.clone()
            } else {
                dir.path().join(format!("{i}-{name}.out"))
            };
            let mut config = ExperimentConfig::new(command.clone());
            config.format = format;
            config.out = Some(out.clone());
            config.seed = 20240917;
            let mut bytes = Vec::new();
            for _ in 0..2 {
                let outcome = run(&config).map_err(|e| format!("{name}: {e}"))?;
                if outcome.exit_code() != 0 {
                    return Err(format!("{name}: invariant failures {:?}", outcome.artifact.failures()));
                }
                bytes.push(std::fs::read(&out).map_err(fail)?);
            }
            if bytes[0] != bytes[1] {
                return Err(format!("{name} ({format:?}) differs between runs"));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} command/format pairs byte-identical across reruns"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 13] = [
        ("power series identity", lemma_identity),
        ("binomial exponents", binomial_case),
        ("irreducible counts", irreducible_counts),
        ("factor-count distributions", factor_distributions),
        ("distribution totals", totals),
        ("Frobenius formula oracle", frobenius_oracle),
        ("almost-uniformity trend", uniformity_trend),
        ("Steinberg counts", steinberg),
        ("SL2 trace transitivity", trace_transitivity),
        ("fiber cross-check", fiber_cross_check),
        ("admissible words", admissible_words),
        ("generic character bound", generic_bound),
        ("determinism", determinism),
    ];
    let total = criteria.len();
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", total - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

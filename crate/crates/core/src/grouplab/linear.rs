use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ffpoly::{count_factors, Field, FqElem, Poly};
use crate::grouplab::{FiniteGroup, Group};

/// Number of irreducible factors of the characteristic polynomial, with
/// multiplicity.
pub fn fact_of(group: &Group, g: usize) -> Result<usize> {
    count_factors(&group.charpoly(g)?)
}

/// Elements with characteristic polynomial `(x - 1)^n`.
pub fn count_unipotents(group: &Group, budget: &Budget) -> Result<usize> {
    let ops = group.linear_ops()?;
    budget.check_elements("unipotent enumeration", group.order() as u128)?;
    let target = Poly::linear(&ops.field, FqElem::ONE).pow(ops.n as u64);
    Ok((0..group.order()).filter(|&g| ops.charpoly(group.element(g)) == target).count())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceTripleReport {
    pub q: u64,
    pub traces: [u32; 3],
    /// Reason the traces violate the precondition, if they do.
    pub rejected: Option<String>,
    /// `|{(x₁,x₂,x₃) ∈ SL₂³ : x₁x₂x₃ = e, tr xᵢ = aᵢ}|`.
    pub solutions: usize,
    pub sl2_order: usize,
    /// `GL₂` acting by simultaneous conjugation, modulo scalars.
    pub pgl2_order: usize,
    pub pgl2_free: bool,
    pub pgl2_transitive: bool,
    /// Stabilizer of a sample solution under `SL₂` conjugation.
    pub sl2_stabilizer: usize,
    pub sl2_orbits: usize,
}

impl TraceTripleReport {
    pub fn simply_transitive(&self) -> bool {
        self.rejected.is_none() && self.pgl2_free && self.pgl2_transitive
    }
}

/// Solutions of `x₁x₂x₃ = e` in `SL₂(𝔽_q)` with prescribed regular
/// semisimple traces, and the simultaneous conjugation action on them.
/// Inputs violating the precondition return a report with `rejected` set.
pub fn sl2_trace_transitivity(q: u64, traces: [u32; 3], budget: &Budget) -> Result<TraceTripleReport> {
    let field = Field::of_order(q)?;
    let a: Vec<FqElem> = traces.iter().map(|&t| field.elem(t)).collect::<Result<_>>()?;
    let two = field.from_int(2);
    let minus_two = field.neg(two);
    let mut report = TraceTripleReport {
        q,
        traces,
        rejected: None,
        solutions: 0,
        sl2_order: 0,
        pgl2_order: 0,
        pgl2_free: false,
        pgl2_transitive: false,
        sl2_stabilizer: 0,
        sl2_orbits: 0,
    };
    if let Some(i) = a.iter().position(|&t| t == two || t == minus_two) {
        report.rejected = Some(format!("a{} ∈ {{-2, 2}} is not a regular semisimple trace", i + 1));
        return Ok(report);
    }
    let f = &field;
    let sq = |x: FqElem| f.mul(x, x);
    let lhs = f.add(f.add(sq(a[0]), sq(a[1])), sq(a[2]));
    let rhs = f.add(f.mul(f.mul(a[0], a[1]), a[2]), f.from_int(4));
    if lhs == rhs {
        report.rejected = Some("a1² + a2² + a3² = a1·a2·a3 + 4".into());
        return Ok(report);
    }
    let sl2 = Group::matrix(2, field.clone(), true, false, budget)?;
    let gl2 = Group::matrix(2, field.clone(), false, false, budget)?;
    let n = sl2.order();
    report.sl2_order = n;
    report.pgl2_order = gl2.order() / (q as usize - 1);
    let ops = sl2.linear_ops()?;
    let by_trace = |t: FqElem| -> Vec<usize> { (0..n).filter(|&g| ops.trace(sl2.element(g)) == t).collect() };
    let (t1, t2) = (by_trace(a[0]), by_trace(a[1]));
    budget.check_pairs("trace triple enumeration", (t1.len() * t2.len()) as u128)?;
    let mut sols: Vec<[usize; 3]> = Vec::new();
    for &x1 in &t1 {
        for &x2 in &t2 {
            let x3 = sl2.inv(sl2.mul(x1, x2));
            if ops.trace(sl2.element(x3)) == a[2] {
                sols.push([x1, x2, x3]);
            }
        }
    }
    report.solutions = sols.len();
    let Some(&sample) = sols.first() else {
        return Ok(report);
    };
    // conjugate sl2 triples by GL₂ elements through raw matrices
    let conj = |g: usize, x: usize| -> usize {
        let m = gl2.element(g);
        let mi = gl2.element(gl2.inv(g));
        let raw = ops.mul(&ops.mul(mi, sl2.element(x)), m);
        sl2.index_of(&raw).expect("conjugation preserves SL₂")
    };
    let act = |g: usize, t: &[usize; 3]| [conj(g, t[0]), conj(g, t[1]), conj(g, t[2])];
    let mut orbit: Vec<[usize; 3]> = Vec::new();
    let mut gl2_stabilizer = 0;
    for g in 0..gl2.order() {
        let img = act(g, &sample);
        if img == sample {
            gl2_stabilizer += 1;
        }
        orbit.push(img);
    }
    orbit.sort_unstable();
    orbit.dedup();
    sols.sort_unstable();
    report.pgl2_free = gl2_stabilizer == q as usize - 1;
    report.pgl2_transitive = orbit == sols;
    report.sl2_stabilizer = (0..n)
        .filter(|&g| {
            let g_gl = gl2.index_of(sl2.element(g)).unwrap();
            act(g_gl, &sample) == sample
        })
        .count();
    report.sl2_orbits = report.solutions * report.sl2_stabilizer / n;
    Ok(report)
}

/// `(element, centralizer order)` for each regular semisimple element of
/// `SL₂(q)`, by enumeration.
pub fn regular_semisimple_centralizers(group: &Group, budget: &Budget) -> Result<Vec<(usize, usize)>> {
    if !group.is_special_linear() || group.linear_ops()?.n != 2 {
        return Err(Error::InvalidArgument("needs an SL2 backend".into()));
    }
    let ops = group.linear_ops()?;
    let two = ops.field.from_int(2);
    let minus_two = ops.field.neg(two);
    budget.check_pairs("centralizers", (group.order() as u128).pow(2))?;
    let mut out = Vec::new();
    for g in 0..group.order() {
        let t = ops.trace(group.element(g));
        if t != two && t != minus_two {
            let c = (0..group.order()).filter(|&h| group.mul(h, g) == group.mul(g, h)).count();
            out.push((g, c));
        }
    }
    Ok(out)
}

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::grouplab::FiniteGroup;

/// Conjugacy classes sorted by representative order, then size, then least
/// element index. Each representative is the least index in its class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjClassData {
    pub order: usize,
    pub reps: Vec<usize>,
    pub sizes: Vec<usize>,
    pub rep_orders: Vec<usize>,
    pub centralizers: Vec<usize>,
    /// Element index to class index.
    pub class_of: Vec<u32>,
}

impl ConjClassData {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Class of `g⁻¹` for each class.
    pub fn inverse_classes<G: FiniteGroup + ?Sized>(&self, group: &G) -> Vec<usize> {
        self.reps.iter().map(|&r| self.class_of[group.inv(r)] as usize).collect()
    }

    /// Elements of each class, ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.len()];
        for (g, &c) in self.class_of.iter().enumerate() {
            out[c as usize].push(g);
        }
        out
    }
}

/// Greedy generating set: each element not in the span of the previous ones.
pub fn generating_set<G: FiniteGroup + ?Sized>(group: &G) -> Vec<usize> {
    let n = group.order();
    let mut inside = vec![false; n];
    inside[group.identity()] = true;
    let mut members = vec![group.identity()];
    let mut gens = Vec::new();
    for g in 0..n {
        if inside[g] {
            continue;
        }
        gens.push(g);
        // close the subgroup under right multiplication by all generators
        let mut queue: VecDeque<usize> = members.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &s in &gens {
                let y = group.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        if members.len() == n {
            break;
        }
    }
    gens
}

pub fn conjugacy_classes<G: FiniteGroup + ?Sized>(group: &G, budget: &Budget) -> Result<ConjClassData> {
    let n = group.order();
    budget.check_elements("conjugacy classes", n as u128)?;
    let gens = generating_set(group);
    let mut class_of = vec![u32::MAX; n];
    let mut raw: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if class_of[x] != u32::MAX {
            continue;
        }
        let id = raw.len() as u32;
        class_of[x] = id;
        let mut orbit = vec![x];
        let mut i = 0;
        while i < orbit.len() {
            let y = orbit[i];
            for &s in &gens {
                let z = group.conj(y, s);
                if class_of[z] == u32::MAX {
                    class_of[z] = id;
                    orbit.push(z);
                }
            }
            i += 1;
        }
        raw.push(orbit);
    }
    let mut keyed: Vec<(usize, usize, usize, usize)> = raw
        .iter()
        .enumerate()
        .map(|(i, orb)| {
            let rep = *orb.iter().min().unwrap();
            (group.elem_order(rep), orb.len(), rep, i)
        })
        .collect();
    keyed.sort_unstable();
    let mut relabel = vec![0u32; raw.len()];
    for (new, k) in keyed.iter().enumerate() {
        relabel[k.3] = new as u32;
    }
    for c in class_of.iter_mut() {
        *c = relabel[*c as usize];
    }
    let data = ConjClassData {
        order: n,
        reps: keyed.iter().map(|k| k.2).collect(),
        sizes: keyed.iter().map(|k| k.1).collect(),
        rep_orders: keyed.iter().map(|k| k.0).collect(),
        centralizers: keyed.iter().map(|k| n / k.1).collect(),
        class_of,
    };
    if data.sizes.iter().sum::<usize>() != n || data.sizes.iter().any(|s| n % s != 0) {
        return Err(Error::Invariant("class sizes do not partition the group".into()));
    }
    Ok(data)
}

/// Exhaustive representative-independence check is run up to this order.
pub const POWER_MAP_CHECK_LIMIT: usize = 10_000;

/// Class of `g^m` for each class of `g`.
pub fn power_class_map<G: FiniteGroup + ?Sized>(group: &G, classes: &ConjClassData, m: i64) -> Result<Vec<usize>> {
    let map: Vec<usize> = classes.reps.iter().map(|&r| classes.class_of[group.pow(r, m)] as usize).collect();
    if group.order() <= POWER_MAP_CHECK_LIMIT {
        for g in 0..group.order() {
            let c = classes.class_of[g] as usize;
            if classes.class_of[group.pow(g, m)] as usize != map[c] {
                return Err(Error::Invariant(format!("power map m={m} depends on the representative of class {c}")));
            }
        }
    }
    Ok(map)
}

/// Fiber size `|{h : hᵐ = gᵐ}|` to the number of `g` attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberHistogram {
    pub m: i64,
    pub counts: BTreeMap<usize, usize>,
}

impl FiberHistogram {
    pub fn mass(&self) -> usize {
        self.counts.values().sum()
    }
}

pub fn fiber_histogram_direct<G: FiniteGroup + ?Sized>(group: &G, m: i64, budget: &Budget) -> Result<FiberHistogram> {
    use rayon::prelude::*;
    let n = group.order();
    budget.check_pairs("direct fiber double loop", (n as u128) * (n as u128))?;
    let powers: Vec<usize> = (0..n).map(|h| group.pow(h, m)).collect();
    let fibers: Vec<usize> = (0..n)
        .into_par_iter()
        .map(|g| powers.iter().filter(|&&y| y == powers[g]).count())
        .collect();
    let mut counts = BTreeMap::new();
    for f in fibers {
        *counts.entry(f).or_insert(0) += 1;
    }
    Ok(FiberHistogram { m, counts })
}

/// Fiber at `g` is `Σ_{D : Dᵐ = C} |D| / |C|` with `C` the class of `gᵐ`.
pub fn fiber_histogram_by_classes<G: FiniteGroup + ?Sized>(
    group: &G,
    classes: &ConjClassData,
    m: i64,
) -> Result<FiberHistogram> {
    let map = power_class_map(group, classes, m)?;
    let mut preimage = vec![0usize; classes.len()];
    for (d, &c) in map.iter().enumerate() {
        preimage[c] += classes.sizes[d];
    }
    let mut counts = BTreeMap::new();
    for (d, &c) in map.iter().enumerate() {
        if preimage[c] % classes.sizes[c] != 0 {
            return Err(Error::Invariant(format!("class {c} fiber is not uniform")));
        }
        *counts.entry(preimage[c] / classes.sizes[c]).or_insert(0) += classes.sizes[d];
    }
    Ok(FiberHistogram { m, counts })
}

/// Both routes; errors unless they agree exactly.
pub fn fiber_histogram<G: FiniteGroup + ?Sized>(
    group: &G,
    classes: &ConjClassData,
    m: i64,
    budget: &Budget,
) -> Result<FiberHistogram> {
    let direct = fiber_histogram_direct(group, m, budget)?;
    let by_class = fiber_histogram_by_classes(group, classes, m)?;
    if direct != by_class {
        return Err(Error::Invariant(format!("fiber histograms disagree for m={m}")));
    }
    if direct.mass() != group.order() {
        return Err(Error::Invariant("fiber histogram mass differs from |G|".into()));
    }
    Ok(direct)
}

pub fn centralizer_order<G: FiniteGroup + ?Sized>(group: &G, g: usize, budget: &Budget) -> Result<usize> {
    budget.check_elements("centralizer enumeration", group.order() as u128)?;
    Ok((0..group.order()).filter(|&h| group.mul(h, g) == group.mul(g, h)).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouplab::{CyclicGroup, Group};

    fn classes(spec: &str) -> (Group, ConjClassData) {
        let g = Group::parse(spec).unwrap();
        let c = conjugacy_classes(&g, &Budget::default()).unwrap();
        (g, c)
    }

    #[test]
    fn a5_classes() {
        let (_, c) = classes("A5");
        let mut sizes = c.sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![1, 12, 12, 15, 20]);
        assert_eq!(c.rep_orders, vec![1, 2, 3, 5, 5]);
    }

    #[test]
    fn small_class_facts() {
        let (_, c) = classes("SL2(3)");
        assert_eq!((c.reps[0], c.sizes[0]), (0, 1));
        let (_, c) = classes("PSL2(7)");
        assert_eq!(c.sizes.iter().sum::<usize>(), 168);
        assert_eq!(c.len(), 6);
        for (s, z) in c.sizes.iter().zip(&c.centralizers) {
            assert_eq!(s * z, 168);
        }
    }

    #[test]
    fn power_maps() {
        let (g, c) = classes("A5");
        assert_eq!(power_class_map(&g, &c, 1).unwrap(), (0..5).collect::<Vec<_>>());
        let five = power_class_map(&g, &c, 5).unwrap();
        assert_eq!((five[3], five[4]), (0, 0));
        let (g, c) = classes("SL2(5)");
        let minus = g.matrix_element(&[-1, 0, 0, -1]).unwrap();
        let sq = power_class_map(&g, &c, 2).unwrap();
        assert_eq!(sq[c.class_of[minus] as usize], 0);
        assert_eq!(c.sizes[c.class_of[minus] as usize], 1);
    }

    #[test]
    fn fiber_examples() {
        let b = Budget::default();
        let c5 = Group::parse("C5").unwrap();
        let cc = conjugacy_classes(&c5, &b).unwrap();
        let h = fiber_histogram(&c5, &cc, 5, &b).unwrap();
        assert_eq!(h.counts, BTreeMap::from([(5, 5)]));
        let z = CyclicGroup(12);
        let h = fiber_histogram_direct(&z, 4, &b).unwrap();
        assert_eq!(h.counts, BTreeMap::from([(4, 12)]));

        let (g, c) = classes("SL2(3)");
        assert_eq!(fiber_histogram(&g, &c, 2, &b).unwrap().mass(), 24);
        let (g, c) = classes("SL2(5)");
        let h = fiber_histogram(&g, &c, 2, &b).unwrap();
        let x = g.matrix_element(&[2, 0, 0, 3]).unwrap();
        let x2 = g.pow(x, 2);
        let fiber = (0..g.order()).filter(|&y| g.pow(y, 2) == x2).count();
        assert!(fiber >= 2);
        assert!(h.counts.contains_key(&fiber));
    }

    #[test]
    fn centralizers() {
        let b = Budget::default();
        let g = Group::parse("SL2(5)").unwrap();
        let x = g.matrix_element(&[2, 0, 0, 3]).unwrap();
        assert_eq!(centralizer_order(&g, x, &b).unwrap(), 4);
        assert_eq!(centralizer_order(&g, 0, &b).unwrap(), 120);
        let g = Group::parse("SL2(3)").unwrap();
        let y = g.matrix_element(&[0, 1, -1, 0]).unwrap();
        assert_eq!(g.elem_order(y), 4);
        assert_eq!(centralizer_order(&g, y, &b).unwrap(), 4);
    }
}

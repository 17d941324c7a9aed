use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grouplab::{class_multiplication_coefficients, power_class_map, ConjClassData, FiniteGroup};

pub const ORTHOGONALITY_TOL: f64 = 1e-8;
pub const INTEGRALITY_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_CLASSES: usize = 60;
pub const DEFAULT_POWER_BOUND: i64 = 12;
pub const DEFAULT_TABLE_SEED: u64 = 0x7ab1e;
const SEPARATION_TOL: f64 = 1e-7;
const SEPARATION_ATTEMPTS: u64 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub method: String,
    pub seed: u64,
}

/// Character table in the JSON layout used on disk. `characters[χ][C]`;
/// row 0 is the trivial character and column 0 the identity class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub group: String,
    pub order: usize,
    pub class_sizes: Vec<usize>,
    pub class_orders: Vec<usize>,
    pub power_maps: BTreeMap<i64, Vec<usize>>,
    #[serde(with = "complex_rows")]
    pub characters: Vec<Vec<Complex64>>,
    pub provenance: Provenance,
}

mod complex_rows {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<Complex64>], s: S) -> Result<S::Ok, S::Error> {
        rows.iter()
            .map(|r| r.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Complex64>>, D::Error> {
        let raw: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect())
    }
}

#[derive(Clone, Debug)]
pub struct TableOptions {
    pub seed: u64,
    pub power_bound: i64,
    pub max_classes: usize,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { seed: DEFAULT_TABLE_SEED, power_bound: DEFAULT_POWER_BOUND, max_classes: DEFAULT_MAX_CLASSES }
    }
}

/// Class-algebra method: central characters are the common eigenvectors of
/// the class multiplication matrices, separated by one random
/// conjugation-symmetric combination made Hermitian by `D^{-1/2} · D^{1/2}`
/// with `D = diag |C|`.
pub fn compute_table<G: FiniteGroup + ?Sized>(
    group: &G,
    classes: &ConjClassData,
    options: &TableOptions,
) -> Result<CharacterTable> {
    let k = classes.len();
    if k > options.max_classes {
        return Err(Error::InvalidArgument(format!("{k} classes exceed the table bound {}", options.max_classes)));
    }
    let coeffs = class_multiplication_coefficients(group, classes);
    let inverse = classes.inverse_classes(group);
    let mut power_maps = BTreeMap::new();
    for m in 1..=options.power_bound {
        power_maps.insert(m, power_class_map(group, classes, m)?);
    }
    let mut last_err = None;
    for attempt in 0..SEPARATION_ATTEMPTS {
        let seed = options.seed.wrapping_add(attempt);
        match central_characters(&coeffs, &classes.sizes, &inverse, seed) {
            Ok(chars) => {
                let table = CharacterTable {
                    group: group.name(),
                    order: group.order(),
                    class_sizes: classes.sizes.clone(),
                    class_orders: classes.rep_orders.clone(),
                    power_maps,
                    characters: sort_characters(chars),
                    provenance: Provenance { method: "class-algebra".into(), seed },
                };
                table.validate()?;
                return Ok(table);
            }
            Err(e @ Error::EigenSeparation { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap())
}

fn central_characters(
    coeffs: &[Vec<u64>],
    sizes: &[usize],
    inverse: &[usize],
    seed: u64,
) -> Result<Vec<Vec<Complex64>>> {
    let k = sizes.len();
    let order: usize = sizes.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = vec![Complex64::new(0.0, 0.0); k];
    for j in 1..k {
        let l = inverse[j];
        if l < j {
            c[j] = c[l].conj();
        } else if l == j {
            c[j] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        } else {
            c[j] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    // H[l][i] = Σ_j c_j a_{j,l,i} with a_{j,l,i} = coeffs[i][j·k + l]
    let sq: Vec<f64> = sizes.iter().map(|&s| (s as f64).sqrt()).collect();
    let h = DMatrix::from_fn(k, k, |l, i| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, cj) in c.iter().enumerate() {
            let a = coeffs[i][j * k + l];
            if a != 0 {
                acc += cj * a as f64;
            }
        }
        acc * (sq[i] / sq[l])
    });
    let herm = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if vals.windows(2).any(|w| (w[1] - w[0]) < SEPARATION_TOL * scale) {
        return Err(Error::EigenSeparation { seed });
    }
    let mut out = Vec::with_capacity(k);
    for col in 0..k {
        let w = eig.eigenvectors.column(col);
        let v: Vec<Complex64> = (0..k).map(|i| w[i] * sq[i]).collect();
        let v0 = v[0];
        let v: Vec<Complex64> = v.iter().map(|x| x / v0).collect();
        let norm: f64 = v.iter().zip(sizes).map(|(x, &s)| x.norm_sqr() / s as f64).sum();
        let degree = (order as f64 / norm).sqrt();
        out.push((0..k).map(|i| v[i] * (degree / sizes[i] as f64)).collect());
    }
    Ok(out)
}

fn sort_characters(mut chars: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let key = |row: &Vec<Complex64>| -> (bool, i64, Vec<(i64, i64)>) {
        let trivial = row.iter().all(|z| (z - 1.0).norm() < INTEGRALITY_TOL);
        let rounded = row
            .iter()
            .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
            .collect();
        (!trivial, row[0].re.round() as i64, rounded)
    };
    chars.sort_by_cached_key(key);
    let snap = |x: f64| if (x - x.round()).abs() < 1e-10 { x.round() + 0.0 } else { x };
    for row in chars.iter_mut() {
        for z in row.iter_mut() {
            *z = Complex64::new(snap(z.re), snap(z.im));
        }
    }
    chars
}

impl CharacterTable {
    pub fn class_count(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.characters.iter().map(|r| r[0].re.round() as u64).collect()
    }

    /// Class containing the inverses of class `j`, read off the columns.
    pub fn inverse_classes(&self) -> Vec<usize> {
        let k = self.class_count();
        (0..k)
            .map(|j| {
                (0..k)
                    .find(|&l| self.characters.iter().all(|r| (r[l] - r[j].conj()).norm() < INTEGRALITY_TOL))
                    .unwrap_or(j)
            })
            .collect()
    }

    /// Class of `g^m` for `g` in class `c`, composed from stored maps when
    /// `m` itself is not stored.
    pub fn power_map(&self, m: i64) -> Result<Vec<usize>> {
        if let Some(map) = self.power_maps.get(&m) {
            return Ok(map.clone());
        }
        let k = self.class_count();
        if m == 0 {
            return Ok(vec![0; k]);
        }
        let mut map: Vec<usize> = if m < 0 { self.inverse_classes() } else { (0..k).collect() };
        let mut rest = m.unsigned_abs();
        let mut p = 2u64;
        while rest > 1 {
            if rest % p == 0 {
                let step = self.power_maps.get(&(p as i64)).ok_or(Error::MissingPowerMap(m))?;
                map = map.iter().map(|&c| step[c]).collect();
                rest /= p;
            } else {
                p += 1;
            }
        }
        Ok(map)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.class_count();
        let n = self.order;
        let fmt = |m: String| Error::TableFormat(m);
        if k == 0 || self.class_orders.len() != k || self.characters.len() != k {
            return Err(fmt(format!("expected {k} class orders and {k} characters")));
        }
        if self.characters.iter().any(|r| r.len() != k) {
            return Err(fmt("character rows must have one value per class".into()));
        }
        if self.class_sizes.iter().sum::<usize>() != n || self.class_sizes.iter().any(|&s| s == 0 || n % s != 0) {
            return Err(fmt("class sizes must divide |G| and sum to it".into()));
        }
        if self.class_sizes[0] != 1 || self.class_orders[0] != 1 {
            return Err(fmt("class 0 must be the identity".into()));
        }
        for (m, map) in &self.power_maps {
            if map.len() != k || map.iter().any(|&c| c >= k) || map[0] != 0 {
                return Err(fmt(format!("power map {m} is malformed")));
            }
            for (c, &o) in self.class_orders.iter().enumerate() {
                if *m > 0 && *m % o as i64 == 0 && map[c] != 0 {
                    return Err(fmt(format!("power map {m} sends class {c} of order {o} away from 1")));
                }
            }
        }
        let mut sum_sq = 0u64;
        for (i, row) in self.characters.iter().enumerate() {
            let d = row[0];
            if d.im.abs() > INTEGRALITY_TOL || (d.re - d.re.round()).abs() > INTEGRALITY_TOL || d.re < 0.5 {
                return Err(Error::Tolerance(format!("degree of character {i} is {d}")));
            }
            let deg = d.re.round() as u64;
            if n as u64 % deg != 0 {
                return Err(Error::Tolerance(format!("degree {deg} does not divide {n}")));
            }
            sum_sq += deg * deg;
        }
        if sum_sq != n as u64 {
            return Err(Error::Tolerance(format!("Σχ(1)² = {sum_sq} ≠ {n}")));
        }
        for (a, ra) in self.characters.iter().enumerate() {
            for (b, rb) in self.characters.iter().enumerate() {
                let ip: Complex64 = (0..k).map(|c| ra[c] * rb[c].conj() * self.class_sizes[c] as f64).sum::<Complex64>()
                    / n as f64;
                let target = if a == b { 1.0 } else { 0.0 };
                if (ip - target).norm() > ORTHOGONALITY_TOL {
                    return Err(Error::Tolerance(format!("row orthogonality ⟨χ{a},χ{b}⟩ = {ip}")));
                }
            }
        }
        for c in 0..k {
            for d in 0..k {
                let s: Complex64 = self.characters.iter().map(|r| r[c] * r[d].conj()).sum();
                let target = if c == d { (n / self.class_sizes[c]) as f64 } else { 0.0 };
                if (s - target).norm() > ORTHOGONALITY_TOL * (n as f64) {
                    return Err(Error::Tolerance(format!("column orthogonality at classes {c}, {d}: {s}")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses and re-validates every invariant.
    pub fn from_json(text: &str) -> Result<CharacterTable> {
        let t: CharacterTable = serde_json::from_str(text)?;
        t.validate()?;
        Ok(t)
    }
}

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::ffpoly::FamilyKind;
use crate::genfun::family_dist::family_factor_distribution;

/// `(Σ_{j>m} c_{n,j}) / (Σ_j c_{n,j})` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailRow {
    pub n: usize,
    pub m: usize,
    #[serde(with = "crate::decimal")]
    pub num: BigUint,
    #[serde(with = "crate::decimal")]
    pub den: BigUint,
}

/// Least `m` with tail `< n^{-k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Threshold {
    pub n: usize,
    pub k: u32,
    pub least_m: usize,
}

/// Least-squares line through `(m, ln tail)` over the nonzero tails with
/// `1 ≤ m < n`. Descriptive only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalFit {
    pub n: usize,
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailTable {
    pub kind: FamilyKind,
    pub q: u64,
    pub n_max: usize,
    pub m_max: usize,
    pub rows: Vec<TailRow>,
    pub thresholds: Vec<Threshold>,
    /// Labeled "empirical" wherever emitted.
    pub empirical: Vec<EmpiricalFit>,
}

impl TailTable {
    pub fn tail(&self, n: usize, m: usize) -> Option<&TailRow> {
        self.rows.iter().find(|r| r.n == n && r.m == m)
    }
}

/// Tails for `1 ≤ n ≤ n_max`, `0 ≤ m ≤ m_max`, plus the least-`m`
/// thresholds for each `k` in `ks`.
pub fn tail_table(kind: FamilyKind, q: u64, n_max: usize, m_max: usize, ks: &[u32]) -> Result<TailTable> {
    let dist = family_factor_distribution(kind, q, n_max)?;
    let mut rows = Vec::new();
    let mut thresholds = Vec::new();
    let mut empirical = Vec::new();
    for n in 1..=n_max {
        let row = dist.row(n);
        let total: BigUint = row.iter().sum();
        // suffix[m] = Σ_{j>m} c_{n,j}
        let mut suffix = vec![BigUint::zero(); n + 1];
        for m in (0..n).rev() {
            suffix[m] = &suffix[m + 1] + &row[m + 1];
        }
        let tail_at = |m: usize| suffix.get(m).cloned().unwrap_or_default();
        for m in 0..=m_max {
            let s = tail_at(m);
            let g = s.gcd(&total);
            let (num, den) = if s.is_zero() { (s, BigUint::from(1u32)) } else { (&s / &g, &total / &g) };
            rows.push(TailRow { n, m, num, den });
        }
        for &k in ks {
            let scale = BigUint::from(n).pow(k);
            let least_m = (0..=n).find(|&m| tail_at(m) * &scale < total).unwrap_or(n);
            thresholds.push(Threshold { n, k, least_m });
        }
        if let Some(fit) = empirical_fit(n, &suffix[..n.min(m_max + 1)], &total) {
            empirical.push(fit);
        }
    }
    Ok(TailTable { kind, q, n_max, m_max, rows, thresholds, empirical })
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Fit over `suffix[m]` for `m ≥ 1`; `None` with fewer than three nonzero points.
pub fn empirical_fit(n: usize, suffix: &[BigUint], total: &BigUint) -> Option<EmpiricalFit> {
    let ln_total = ln_big(total);
    let pts: Vec<(f64, f64)> = suffix
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, s)| !s.is_zero())
        .map(|(m, s)| (m as f64, ln_big(s) - ln_total))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some(EmpiricalFit { n, slope, intercept: my - slope * mx, points: pts.len() })
}

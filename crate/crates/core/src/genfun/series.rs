use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Power series truncated at degree `N`, with coefficients `d_0..=d_N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntSeries {
    #[serde(with = "crate::decimal::vec")]
    coeffs: Vec<BigUint>,
}

impl IntSeries {
    pub fn one(truncation: usize) -> Self {
        let mut coeffs = vec![BigUint::zero(); truncation + 1];
        coeffs[0] = BigUint::one();
        IntSeries { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigUint>) -> Self {
        assert!(!coeffs.is_empty());
        IntSeries { coeffs }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &BigUint {
        &self.coeffs[n]
    }

    pub fn mul(&self, other: &IntSeries) -> IntSeries {
        let n = self.truncation().min(other.truncation());
        let mut out = vec![BigUint::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        IntSeries { coeffs: out }
    }
}

/// Truncated bivariate series; row `n` holds `c_{n,0..=n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BiSeries {
    #[serde(with = "crate::decimal::rows")]
    rows: Vec<Vec<BigUint>>,
}

impl BiSeries {
    pub fn one(truncation: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> =
            (0..=truncation).map(|n| vec![BigUint::zero(); n + 1]).collect();
        rows[0][0] = BigUint::one();
        BiSeries { rows }
    }

    pub(crate) fn from_rows(rows: Vec<Vec<BigUint>>) -> Self {
        debug_assert!(rows.iter().enumerate().all(|(n, r)| r.len() == n + 1));
        BiSeries { rows }
    }

    pub fn truncation(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> &[BigUint] {
        &self.rows[n]
    }

    pub fn coeff(&self, n: usize, m: usize) -> BigUint {
        self.rows[n].get(m).cloned().unwrap_or_default()
    }

    /// Σ_m c_{n,m}.
    pub fn row_sum(&self, n: usize) -> BigUint {
        self.rows[n].iter().sum()
    }

    /// Sets `y = 1`.
    pub fn collapse(&self) -> IntSeries {
        IntSeries::from_coeffs((0..self.rows.len()).map(|n| self.row_sum(n)).collect())
    }
}

/// `C(e + k - 1, k)` for k = 0..=count, the coefficients of (1 - z)^{-e}.
pub(crate) fn negative_binomials(e: &BigUint, count: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(count + 1);
    let mut b = BigUint::one();
    out.push(b.clone());
    for k in 1..=count {
        b = b * (e + BigUint::from(k - 1)) / BigUint::from(k);
        out.push(b.clone());
    }
    out
}

fn checked_exponents(exponents: &[BigInt]) -> Result<Vec<BigUint>> {
    exponents
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if e.is_negative() {
                Err(Error::NegativeExponent(i + 1))
            } else {
                Ok(e.to_biguint().unwrap())
            }
        })
        .collect()
}

/// Coefficients of `∏_{n=1}^{N} (1 - x^n)^{-e_n}` truncated at `x^N`;
/// `exponents[n - 1]` is `e_n`.
pub fn euler_product(exponents: &[BigInt], truncation: usize) -> Result<IntSeries> {
    if exponents.len() < truncation {
        return Err(Error::InvalidArgument(format!(
            "need e_1..e_{truncation}, got {} exponents",
            exponents.len()
        )));
    }
    let exps = checked_exponents(&exponents[..truncation])?;
    let mut series = IntSeries::one(truncation);
    for (idx, e) in exps.iter().enumerate() {
        let n = idx + 1;
        if e.is_zero() {
            continue;
        }
        let binom = negative_binomials(e, truncation / n);
        let mut next = vec![BigUint::zero(); truncation + 1];
        for (i, a) in series.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in binom.iter().enumerate() {
                let j = i + n * k;
                if j > truncation {
                    break;
                }
                next[j] += a * b;
            }
        }
        series.coeffs = next;
    }
    Ok(series)
}

/// Coefficients `c_{n,m}` of `∏_{i=1}^{N} (1 - x^i y)^{-e_i}` for n ≤ N.
pub fn bivariate_euler_product(exponents: &[BigInt], truncation: usize) -> Result<BiSeries> {
    if exponents.len() < truncation {
        return Err(Error::InvalidArgument(format!(
            "need e_1..e_{truncation}, got {} exponents",
            exponents.len()
        )));
    }
    let exps = checked_exponents(&exponents[..truncation])?;
    let mut series = BiSeries::one(truncation);
    for (idx, e) in exps.iter().enumerate() {
        let n = idx + 1;
        if e.is_zero() {
            continue;
        }
        let binom = negative_binomials(e, truncation / n);
        let mut next = BiSeries::one(truncation);
        next.rows[0][0] = BigUint::zero();
        for (i, row) in series.rows.iter().enumerate() {
            for (m, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, b) in binom.iter().enumerate() {
                    let j = i + n * k;
                    if j > truncation {
                        break;
                    }
                    next.rows[j][m + k] += a * b;
                }
            }
        }
        series = next;
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::necklace;
    use proptest::prelude::*;

    fn necklaces(q: u64, n: usize, scale: u64) -> Vec<BigInt> {
        (1..=n).map(|k| BigInt::from(necklace(k, q)) * scale).collect()
    }

    #[test]
    fn lemma_identity_q2() {
        let s = euler_product(&necklaces(2, 20, 1), 20).unwrap();
        for n in 0..=20 {
            assert_eq!(*s.coeff(n), BigUint::from(2u32).pow(n as u32));
        }
    }

    #[test]
    fn doubled_exponents_give_binomial() {
        let s = euler_product(&necklaces(2, 10, 2), 10).unwrap();
        for n in 0..=10u32 {
            assert_eq!(*s.coeff(n as usize), BigUint::from(n + 1) * BigUint::from(2u32).pow(n));
        }
    }

    #[test]
    fn empty_product() {
        let s = euler_product(&vec![BigInt::zero(); 6], 6).unwrap();
        assert_eq!(*s.coeff(0), BigUint::one());
        assert!(s.coeffs()[1..].iter().all(Zero::is_zero));
        let b = bivariate_euler_product(&vec![BigInt::from(3); 4], 4).unwrap();
        assert_eq!(b.coeff(0, 0), BigUint::one());
    }

    #[test]
    fn negative_exponent_rejected() {
        let e = vec![BigInt::from(1), BigInt::from(-1)];
        assert!(matches!(euler_product(&e, 2), Err(Error::NegativeExponent(2))));
        assert!(matches!(bivariate_euler_product(&e, 2), Err(Error::NegativeExponent(2))));
    }

    #[test]
    fn bivariate_row_two() {
        let b = bivariate_euler_product(&necklaces(2, 10, 1), 10).unwrap();
        assert_eq!(b.row(2), &[BigUint::zero(), BigUint::one(), BigUint::from(3u32)]);
        for n in 0..=10 {
            assert_eq!(b.row_sum(n), BigUint::from(2u32).pow(n as u32));
        }
    }

    /// Brute-force oracle: multiply out the truncated factors one power at a time.
    fn naive_product(exps: &[u64], n: usize) -> Vec<BigUint> {
        let mut s = vec![BigUint::zero(); n + 1];
        s[0] = BigUint::one();
        for (idx, &e) in exps.iter().enumerate() {
            let step = idx + 1;
            for _ in 0..e {
                // multiply by 1/(1 - x^step) = running prefix sum with stride
                for j in step..=n {
                    let prev = s[j - step].clone();
                    s[j] += prev;
                }
            }
        }
        s
    }

    proptest! {
        #[test]
        fn collapse_matches_univariate(exps in prop::collection::vec(0u64..6, 12)) {
            let e: Vec<BigInt> = exps.iter().map(|&x| BigInt::from(x)).collect();
            let uni = euler_product(&e, 12).unwrap();
            let bi = bivariate_euler_product(&e, 12).unwrap();
            prop_assert_eq!(bi.collapse(), uni.clone());
            prop_assert_eq!(uni.coeffs().to_vec(), naive_product(&exps, 12));
        }
    }
}

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigUint;

use crate::ffpoly::field::{prime_factors, Field, FqElem};

/// Dense univariate polynomial over 𝔽_q. Coefficients are stored low
/// degree first with no trailing zeros; the zero polynomial is empty.
#[derive(Clone)]
pub struct Poly {
    field: Arc<Field>,
    coeffs: Vec<FqElem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && *self.field == *other.field
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let show_coeff = *c != FqElem::ONE || i == 0;
            let coeff = if self.field.degree() > 1 {
                format!("[{}]", c.0)
            } else {
                c.0.to_string()
            };
            match (i, show_coeff) {
                (0, _) => write!(f, "{coeff}")?,
                (1, false) => write!(f, "x")?,
                (1, true) => write!(f, "{coeff}x")?,
                (_, false) => write!(f, "x^{i}")?,
                (_, true) => write!(f, "{coeff}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(field: Arc<Field>, mut coeffs: Vec<FqElem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    /// Builds a polynomial from integer codes, low degree first.
    pub fn from_codes(field: &Arc<Field>, codes: &[u32]) -> Poly {
        Poly::new(field.clone(), codes.iter().map(|&c| FqElem(c)).collect())
    }

    pub fn zero(field: &Arc<Field>) -> Poly {
        Poly::new(field.clone(), Vec::new())
    }

    pub fn one(field: &Arc<Field>) -> Poly {
        Poly::new(field.clone(), vec![FqElem::ONE])
    }

    pub fn x(field: &Arc<Field>) -> Poly {
        Poly::new(field.clone(), vec![FqElem::ZERO, FqElem::ONE])
    }

    pub fn constant(field: &Arc<Field>, c: FqElem) -> Poly {
        Poly::new(field.clone(), vec![c])
    }

    /// `x - root`.
    pub fn linear(field: &Arc<Field>, root: FqElem) -> Poly {
        Poly::new(field.clone(), vec![field.neg(root), FqElem::ONE])
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FqElem::ONE
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == FqElem::ONE
    }

    pub fn monic(&self) -> Poly {
        match self.field.inv(self.lead()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: FqElem) -> Poly {
        let f = &self.field;
        Poly::new(f.clone(), self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f.clone(), coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f.clone(), coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![FqElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f.clone(), out)
    }

    pub fn pow(&self, mut n: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let f = &self.field;
        if self.coeffs.len() < divisor.coeffs.len() {
            return (Poly::zero(f), self.clone());
        }
        let inv_lead = f.inv(divisor.lead()).unwrap();
        let dd = divisor.deg();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FqElem::ZERO; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd];
            if c.is_zero() {
                continue;
            }
            let t = f.mul(c, inv_lead);
            quot[k] = t;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = f.sub(rem[k + i], f.mul(t, d));
            }
        }
        rem.truncate(dd);
        (Poly::new(f.clone(), quot), Poly::new(f.clone(), rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.divrem(divisor).1
    }

    /// Exact quotient; callers guarantee divisibility.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divrem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Poly::new(f.clone(), coeffs)
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly) -> Poly {
        self.mul(other).rem(modulus)
    }

    pub fn pow_mod(&self, n: &BigUint, modulus: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(modulus);
        let base = self.rem(modulus);
        for i in (0..n.bits()).rev() {
            acc = acc.mul_mod(&acc, modulus);
            if n.bit(i) {
                acc = acc.mul_mod(&base, modulus);
            }
        }
        acc
    }

    pub fn eval(&self, x: FqElem) -> FqElem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(FqElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Applies `map` to every coefficient.
    pub fn map_coeffs(&self, map: impl Fn(FqElem) -> FqElem) -> Poly {
        Poly::new(self.field.clone(), self.coeffs.iter().map(|&c| map(c)).collect())
    }

    /// `x^deg · P(1/x)`, the coefficient reversal.
    pub fn reversed(&self) -> Poly {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(self.field.clone(), c)
    }

    /// Monic polynomial whose roots are the inverses of the roots of `self`
    /// (requires a nonzero constant term).
    pub fn reciprocal(&self) -> Poly {
        self.reversed().monic()
    }

    /// p-th root of a polynomial whose derivative vanishes.
    pub(crate) fn pth_root(&self) -> Poly {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let coeffs = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|&c| f.pth_root(c))
            .collect();
        Poly::new(f.clone(), coeffs)
    }

    /// `x^(q^k) mod self`, computed by repeated q-th powering.
    pub(crate) fn frobenius_power_of_x(&self, from: &Poly) -> Poly {
        from.pow_mod(&BigUint::from(self.field.order()), self)
    }

    /// Ben-Or irreducibility test: no factor of degree ≤ deg/2.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let m = self.monic();
        let x = Poly::x(&self.field);
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = m.frobenius_power_of_x(&h);
            if !m.gcd(&h.sub(&x)).is_one() {
                return false;
            }
        }
        true
    }

    /// Rabin's test; independent of [`Poly::is_irreducible`] for cross-checks.
    pub fn is_irreducible_rabin(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(n) => n,
        };
        let m = self.monic();
        let x = Poly::x(&self.field);
        let q = BigUint::from(self.field.order());
        let xq = |k: usize| x.pow_mod(&q.pow(k as u32), &m);
        if xq(n) != x.rem(&m) {
            return false;
        }
        prime_factors(n as u64)
            .into_iter()
            .all(|r| m.gcd(&xq(n / r as usize).sub(&x)).is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Arc<Field> {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn arithmetic_basics() {
        let f = gf(3);
        let a = Poly::from_codes(&f, &[1, 0, 1]);
        let b = Poly::from_codes(&f, &[1, 1]);
        let prod = a.mul(&b);
        assert_eq!(prod, Poly::from_codes(&f, &[1, 1, 1, 1]));
        let (q, r) = prod.divrem(&b);
        assert_eq!(q, a);
        assert!(r.is_zero());
        assert_eq!(a.to_string(), "x^2 + 1");
        assert_eq!(a.gcd(&b), Poly::one(&f));
        assert_eq!(prod.derivative(), Poly::from_codes(&f, &[1, 2, 0]));
    }

    #[test]
    fn irreducibility_tests_agree() {
        let f = gf(2);
        let quintic = Poly::from_codes(&f, &[1, 1, 1, 1, 1]);
        assert!(quintic.is_irreducible());
        assert!(quintic.is_irreducible_rabin());
        assert!(!Poly::from_codes(&f, &[1, 0, 1]).is_irreducible());
        for q in [2u64, 3, 4] {
            let f = gf(q);
            for code in 0..(q as u32).pow(4) {
                let mut c: Vec<u32> = (0..4).map(|i| (code / (q as u32).pow(i)) % q as u32).collect();
                c.push(1);
                let p = Poly::from_codes(&f, &c);
                assert_eq!(p.is_irreducible(), p.is_irreducible_rabin(), "{p}");
            }
        }
    }

    #[test]
    fn reciprocal_and_eval() {
        let f = gf(5);
        let p = Poly::from_codes(&f, &[2, 3, 1]);
        let r = p.reciprocal();
        for a in f.elements().skip(1) {
            if p.eval(a).is_zero() {
                assert!(r.eval(f.inv(a).unwrap()).is_zero());
            }
        }
    }
}

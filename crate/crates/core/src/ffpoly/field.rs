use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::ffpoly::poly::Poly;

/// Largest field order accepted unless a caller asks for more.
pub const DEFAULT_FIELD_BOUND: u64 = 1 << 16;

const ADD_TABLE_LIMIT: u32 = 256;

/// An element of 𝔽_q in the polynomial basis: digit `i` of the base-`p`
/// expansion is the coefficient of `t^i`, where `t` is a root of the
/// field's modulus.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElem(pub u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The finite field 𝔽_q, q = p^e, with log/antilog tables.
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; modulus {:?})", self.p, self.e, self.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q` as `p^e`, or fails if it is not a prime power.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return Err(Error::NotPrimePower(q));
    }
    let p = factors[0];
    let (mut e, mut r) = (0, q);
    while r > 1 {
        r /= p;
        e += 1;
    }
    Ok((p as u32, e))
}

impl Field {
    pub fn new(p: u32, e: u32) -> Result<Arc<Field>> {
        Field::with_bound(p, e, DEFAULT_FIELD_BOUND)
    }

    pub fn of_order(q: u64) -> Result<Arc<Field>> {
        let (p, e) = prime_power(q)?;
        Field::new(p, e)
    }

    pub fn with_bound(p: u32, e: u32, bound: u64) -> Result<Arc<Field>> {
        if !is_prime(p as u64) || e == 0 {
            return Err(Error::NotPrimePower((p as u64).saturating_pow(e)));
        }
        let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q > bound || q > u32::MAX as u64 {
            return Err(Error::FieldBound { q, bound });
        }
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            least_irreducible(p, e)?
        };
        Ok(Arc::new(Field::build(p, e, q as u32, modulus)))
    }

    fn build(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Field {
        let mut field = Field {
            p,
            e,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            add: None,
        };
        field.neg = (0..q).map(|a| field.slow_neg(a)).collect();
        if q <= ADD_TABLE_LIMIT && field.e > 1 && p != 2 {
            let mut table = vec![0; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = field.slow_add(a, b);
                }
            }
            field.add = Some(table);
        }
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| field.slow_pow(g, order / r) != 1)
            })
            .expect("multiplicative group of a finite field is cyclic");
        field.exp = Vec::with_capacity(order as usize);
        field.log = vec![0; q as usize];
        let mut x = 1;
        for i in 0..order as u32 {
            field.exp.push(x);
            field.log[x as usize] = i;
            x = field.slow_mul(x, generator);
        }
        field
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = vec![0; self.e as usize];
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    fn undigits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&sum)
    }

    fn slow_neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = self
            .digits(a)
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        self.undigits(&d)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let e = self.e as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * e];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (e..2 * e).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..e {
                let m = self.modulus[i] as u64;
                prod[k - e + i] = (prod[k - e + i] + (p - c) * m) % p;
            }
        }
        let digits: Vec<u32> = prod[..e].iter().map(|&d| d as u32).collect();
        self.undigits(&digits)
    }

    fn slow_pow(&self, a: u32, mut n: u64) -> u32 {
        let (mut base, mut acc) = (a, 1);
        while n > 0 {
            if n & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients (low to high) over 𝔽_p of the monic defining polynomial.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Residues of `a` in the polynomial basis; always `e` entries.
    pub fn coeffs(&self, a: FqElem) -> Vec<u32> {
        self.digits(a.0)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FqElem> {
        if coeffs.len() != self.e as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidArgument(format!(
                "expected {} residues mod {}",
                self.e, self.p
            )));
        }
        Ok(FqElem(self.undigits(coeffs)))
    }

    pub fn elem(&self, code: u32) -> Result<FqElem> {
        if code >= self.q {
            return Err(Error::InvalidArgument(format!(
                "element code {code} out of range for GF({})",
                self.q
            )));
        }
        Ok(FqElem(code))
    }

    /// Image of an integer under ℤ → 𝔽_p ⊆ 𝔽_q.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(FqElem)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.p == 2 {
            FqElem(a.0 ^ b.0)
        } else if self.e == 1 {
            let s = a.0 + b.0;
            FqElem(if s >= self.p { s - self.p } else { s })
        } else if let Some(table) = &self.add {
            FqElem(table[(a.0 * self.q + b.0) as usize])
        } else {
            FqElem(self.slow_add(a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        let n = self.q - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        FqElem(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        if a.is_zero() {
            return None;
        }
        let n = self.q - 1;
        Some(FqElem(self.exp[((n - self.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Option<FqElem> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: FqElem, n: u64) -> FqElem {
        if n == 0 {
            return FqElem::ONE;
        }
        if a.is_zero() {
            return FqElem::ZERO;
        }
        let order = (self.q - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (n % order)) % order;
        FqElem(self.exp[l as usize])
    }

    pub fn pow_big(&self, a: FqElem, n: &BigUint) -> FqElem {
        let order = BigUint::from(self.q - 1);
        if n.bits() == 0 {
            return FqElem::ONE;
        }
        let reduced = (n % &order).to_u64_digits().first().copied().unwrap_or(0);
        if a.is_zero() {
            return FqElem::ZERO;
        }
        self.pow(a, if reduced == 0 { order.to_u64_digits()[0] } else { reduced })
    }

    /// The absolute Frobenius `a ↦ a^p`.
    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.pow(a, self.p as u64)
    }

    /// `a^(1/p)`, the inverse of the Frobenius.
    pub fn pth_root(&self, a: FqElem) -> FqElem {
        self.pow(a, (self.q / self.p) as u64)
    }

    /// A fixed primitive element (generator of 𝔽_q^×).
    pub fn primitive(&self) -> FqElem {
        FqElem(self.exp.get(1).copied().unwrap_or(1))
    }

    /// Discrete logarithm to the base [`Field::primitive`].
    pub fn log(&self, a: FqElem) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }
}

/// Least monic irreducible of degree `e` over 𝔽_p, ordered by the integer
/// encoding Σ cᵢ pⁱ of its non-leading coefficients.
fn least_irreducible(p: u32, e: u32) -> Result<Vec<u32>> {
    let prime = Field::new(p, 1)?;
    let count = (p as u64).pow(e);
    for code in 0..count {
        let mut coeffs = Vec::with_capacity(e as usize + 1);
        let mut c = code;
        for _ in 0..e {
            coeffs.push((c % p as u64) as u32);
            c /= p as u64;
        }
        coeffs.push(1);
        if coeffs[0] == 0 {
            continue;
        }
        let poly = Poly::new(
            prime.clone(),
            coeffs.iter().map(|&c| FqElem(c)).collect(),
        );
        if poly.is_irreducible() {
            return Ok(coeffs);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

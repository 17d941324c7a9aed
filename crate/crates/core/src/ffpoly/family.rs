//! The characteristic-polynomial families of special linear, special
//! unitary and self-dual classical groups, their irreducible "blocks", and
//! exhaustive enumeration used as oracles for the generating functions.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ffpoly::factor::factor;
use crate::ffpoly::field::{prime_power, Field, FqElem};
use crate::ffpoly::poly::Poly;
use crate::numtheory::{divisors, mobius};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Linear,
    Unitary,
    SelfDual,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Linear => "linear",
            FamilyKind::Unitary => "unitary",
            FamilyKind::SelfDual => "selfdual",
        })
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" | "l" | "sl" => Ok(FamilyKind::Linear),
            "unitary" | "u" | "su" => Ok(FamilyKind::Unitary),
            "selfdual" | "self-dual" | "o" | "orthogonal" => Ok(FamilyKind::SelfDual),
            _ => Err(Error::InvalidArgument(format!("unknown family {s:?}"))),
        }
    }
}

/// A concrete family of monic polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    /// Degree `n` over 𝔽_q with `P(0) = (-1)^n`.
    Linear { n: usize, q: u64 },
    /// Degree `n` over 𝔽_{q²} with `P̄(x) = (-x)^n P(1/x)`.
    Unitary { n: usize, q: u64 },
    /// Even degree over 𝔽_q with `P(x) = x^degree P(1/x)`.
    SelfDual { degree: usize, q: u64 },
}

impl FamilyTag {
    pub fn kind(&self) -> FamilyKind {
        match self {
            FamilyTag::Linear { .. } => FamilyKind::Linear,
            FamilyTag::Unitary { .. } => FamilyKind::Unitary,
            FamilyTag::SelfDual { .. } => FamilyKind::SelfDual,
        }
    }

    pub fn q(&self) -> u64 {
        match *self {
            FamilyTag::Linear { q, .. }
            | FamilyTag::Unitary { q, .. }
            | FamilyTag::SelfDual { q, .. } => q,
        }
    }

    pub fn degree(&self) -> usize {
        match *self {
            FamilyTag::Linear { n, .. } | FamilyTag::Unitary { n, .. } => n,
            FamilyTag::SelfDual { degree, .. } => degree,
        }
    }

    /// The field the member polynomials live over (𝔽_{q²} for unitary).
    pub fn field(&self) -> Result<Arc<Field>> {
        let (p, e) = prime_power(self.q())?;
        match self {
            FamilyTag::Unitary { .. } => Field::new(p, 2 * e),
            _ => Field::new(p, e),
        }
    }

    /// Number of members: q^(n-1) for the linear and unitary families, q^n
    /// for the self-dual family of degree 2n.
    pub fn cardinality(&self) -> BigUint {
        let q = BigUint::from(self.q());
        match *self {
            FamilyTag::Linear { n, .. } | FamilyTag::Unitary { n, .. } => {
                q.pow(n.saturating_sub(1) as u32)
            }
            FamilyTag::SelfDual { degree, .. } => q.pow((degree / 2) as u32),
        }
    }

    fn validate(&self) -> Result<()> {
        if let FamilyTag::SelfDual { degree, .. } = self {
            if degree % 2 == 1 {
                return Err(Error::InvalidArgument(format!(
                    "self-dual family needs even degree, got {degree}"
                )));
            }
        }
        if self.degree() == 0 {
            return Err(Error::InvalidArgument("family degree must be positive".into()));
        }
        prime_power(self.q()).map(|_| ())
    }
}

fn sign_power(field: &Field, n: usize) -> FqElem {
    if n % 2 == 0 {
        FqElem::ONE
    } else {
        field.neg(FqElem::ONE)
    }
}

/// The q-Frobenius `a ↦ a^q` of 𝔽_{q²}.
fn conj(field: &Field, q: u64) -> impl Fn(FqElem) -> FqElem + '_ {
    move |a| field.pow(a, q)
}

/// Whether `p` satisfies the defining identity of `family`.
pub fn in_family(p: &Poly, family: &FamilyTag) -> Result<bool> {
    family.validate()?;
    let expected = family.degree();
    let found = p.degree().ok_or(Error::ZeroInput)?;
    if found != expected {
        return Err(Error::DegreeMismatch { expected, found });
    }
    if *p.field().as_ref() != *family.field()? {
        return Err(Error::FieldMismatch);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let f = p.field();
    Ok(match *family {
        FamilyTag::Linear { n, .. } => p.coeff(0) == sign_power(f, n),
        FamilyTag::Unitary { n, q } => {
            let conj = conj(f, q);
            let sign = sign_power(f, n);
            (0..=n).all(|j| conj(p.coeff(j)) == f.mul(sign, p.coeff(n - j)))
        }
        FamilyTag::SelfDual { degree, .. } => (0..=degree).all(|j| p.coeff(j) == p.coeff(degree - j)),
    })
}

/// Streams every member of `family` exactly once.
pub fn enumerate_family(
    family: &FamilyTag,
    budget: &Budget,
) -> Result<impl Iterator<Item = Poly>> {
    family.validate()?;
    let size = family.cardinality();
    let required = size.to_u128().unwrap_or(u128::MAX);
    budget.check_elements(&format!("enumerating {family:?}"), required)?;
    let field = family.field()?;
    let family = *family;
    let q = family.q();
    // free coordinates and how each member is assembled from them
    let (alphabet, slots): (Vec<FqElem>, usize) = match family {
        FamilyTag::Linear { n, .. } => (field.elements().collect(), n - 1),
        FamilyTag::SelfDual { degree, .. } => (field.elements().collect(), degree / 2),
        FamilyTag::Unitary { n, .. } => (field.elements().collect(), n / 2),
    };
    let subfield: Vec<FqElem> = field
        .elements()
        .filter(|&a| field.pow(a, q) == a)
        .collect();
    let total = required as u64;
    Ok((0..total).map(move |index| {
        let f = &field;
        let mut digits = Vec::with_capacity(slots);
        let mut rest = index;
        let radix = |slot: usize| -> u64 {
            match family {
                FamilyTag::Unitary { n, .. } if n % 2 == 0 && slot + 1 == n / 2 => subfield.len() as u64,
                _ => alphabet.len() as u64,
            }
        };
        for slot in 0..slots {
            let r = radix(slot);
            digits.push((rest % r) as usize);
            rest /= r;
        }
        match family {
            FamilyTag::Linear { n, .. } => {
                let mut c = vec![FqElem::ZERO; n + 1];
                c[0] = sign_power(f, n);
                c[n] = FqElem::ONE;
                for (i, &d) in digits.iter().enumerate() {
                    c[i + 1] = alphabet[d];
                }
                Poly::new(f.clone(), c)
            }
            FamilyTag::SelfDual { degree, .. } => {
                let mut c = vec![FqElem::ZERO; degree + 1];
                c[0] = FqElem::ONE;
                c[degree] = FqElem::ONE;
                for (i, &d) in digits.iter().enumerate() {
                    c[i + 1] = alphabet[d];
                    c[degree - i - 1] = alphabet[d];
                }
                Poly::new(f.clone(), c)
            }
            FamilyTag::Unitary { n, q } => {
                let sign = sign_power(f, n);
                let mut c = vec![FqElem::ZERO; n + 1];
                c[n] = FqElem::ONE;
                c[0] = sign;
                for (slot, &d) in digits.iter().enumerate() {
                    let j = slot + 1;
                    if n % 2 == 0 && j == n / 2 {
                        c[j] = subfield[d];
                    } else {
                        c[j] = alphabet[d];
                        c[n - j] = f.mul(sign, f.pow(alphabet[d], q));
                    }
                }
                Poly::new(f.clone(), c)
            }
        }
    }))
}

/// Exhaustive filter over all monic polynomials of the family's degree;
/// the oracle for [`enumerate_family`].
pub fn enumerate_family_by_filter(family: &FamilyTag, budget: &Budget) -> Result<Vec<Poly>> {
    family.validate()?;
    let field = family.field()?;
    let n = family.degree();
    let q = field.order() as u64;
    let count = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    budget.check_elements("filtering monic polynomials", count)?;
    let mut out = Vec::new();
    for p in monic_polys(&field, n) {
        if in_family(&p, family)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// All monic polynomials of degree `n` over `field`.
pub fn monic_polys(field: &Arc<Field>, n: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = field.order() as u64;
    let total = q.pow(n as u32);
    (0..total).map(move |mut code| {
        let mut c = Vec::with_capacity(n + 1);
        for _ in 0..n {
            c.push(FqElem((code % q) as u32));
            code /= q;
        }
        c.push(FqElem::ONE);
        Poly::new(field.clone(), c)
    })
}

/// `P_n(q) = (1/n) Σ_{d | n} μ(n/d) q^d`, the number of monic irreducibles of degree `n`.
pub fn necklace(n: usize, q: u64) -> BigUint {
    orbit_count(n, |d| BigInt::from(q).pow(d as u32))
}

fn orbit_count(n: usize, fixed: impl Fn(usize) -> BigInt) -> BigUint {
    assert!(n >= 1);
    let total: BigInt = divisors(n)
        .into_iter()
        .map(|d| fixed(d) * mobius(n / d))
        .sum();
    let (quot, rem) = (&total / n, &total % n);
    assert!(rem == BigInt::from(0) && !quot.is_negative(), "orbit count not integral");
    quot.to_biguint().unwrap()
}

/// Closed-form counts of minimal blocks: |𝓘𝓛ₙ(q)|, |𝓘𝒰ₙ(q)| or |𝓘𝒪ₙ(q)|.
/// For the self-dual kind `n` is the block size `m`, so odd `m ≥ 3` gives 0.
pub fn count_irreducibles(kind: FamilyKind, n: usize, q: u64) -> Result<BigUint> {
    prime_power(q)?;
    if n == 0 {
        return Err(Error::InvalidArgument("block size must be positive".into()));
    }
    let qi = BigInt::from(q);
    Ok(match kind {
        FamilyKind::Linear => orbit_count(n, |d| qi.pow(d as u32) - 1),
        FamilyKind::Unitary => orbit_count(n, |d| {
            let sign = if d % 2 == 0 { 1 } else { -1 };
            qi.pow(d as u32) - sign
        }),
        FamilyKind::SelfDual => match (n, q % 2) {
            (1, 1) => BigUint::from(2u32),
            (1, _) => BigUint::from(1u32),
            (2, 1) => BigUint::from(q - 2),
            (2, _) => BigUint::from(q - 1),
            (m, _) if m % 2 == 1 => BigUint::from(0u32),
            (m, _) => necklace(m / 2, q),
        },
    })
}

/// `P̃(x)`: the monic polynomial whose roots are `α^{-q}` for the roots `α` of `p`.
pub fn conjugate_reciprocal(p: &Poly, q: u64) -> Poly {
    let f = p.field().clone();
    p.reciprocal().map_coeffs(|c| f.pow(c, q))
}

/// Counts minimal blocks of size `n` by exhaustive irreducibility testing.
pub fn enumerate_irreducibles(kind: FamilyKind, n: usize, q: u64, budget: &Budget) -> Result<u64> {
    let (p, e) = prime_power(q)?;
    match kind {
        FamilyKind::Linear => {
            let field = Field::new(p, e)?;
            budget.check_elements("irreducible enumeration", (q as u128).pow(n as u32))?;
            Ok(monic_polys(&field, n)
                .filter(|f| !f.coeff(0).is_zero() && f.is_irreducible())
                .count() as u64)
        }
        FamilyKind::Unitary => {
            let field = Field::new(p, 2 * e)?;
            budget.check_elements("irreducible enumeration", ((q * q) as u128).pow(n as u32))?;
            let mut twice = 0u64;
            for f in monic_polys(&field, n).filter(|f| !f.coeff(0).is_zero() && f.is_irreducible()) {
                if conjugate_reciprocal(&f, q) == f {
                    twice += 2;
                }
            }
            if n % 2 == 0 {
                for f in monic_polys(&field, n / 2)
                    .filter(|f| !f.coeff(0).is_zero() && f.is_irreducible())
                {
                    if conjugate_reciprocal(&f, q) != f {
                        twice += 1;
                    }
                }
            }
            Ok(twice / 2)
        }
        FamilyKind::SelfDual => {
            let field = Field::new(p, e)?;
            budget.check_elements("irreducible enumeration", (q as u128).pow(n as u32))?;
            let mut twice = 0u64;
            for f in monic_polys(&field, n).filter(|f| !f.coeff(0).is_zero() && f.is_irreducible()) {
                if f.reciprocal() == f {
                    twice += 2;
                }
            }
            if n % 2 == 0 {
                for f in monic_polys(&field, n / 2)
                    .filter(|f| !f.coeff(0).is_zero() && f.is_irreducible())
                {
                    if f.reciprocal() != f {
                        twice += 1;
                    }
                }
            }
            Ok(twice / 2)
        }
    }
}

/// Number of minimal blocks in the root multiset of a family member:
/// irreducible factors for the linear family, `x ↦ x^{-q}` orbits for the
/// unitary family, and 𝓘𝒪⁺ blocks for the self-dual family (where each
/// `{1,1}` or `{-1,-1}` pair is one block).
pub fn block_count(p: &Poly, kind: FamilyKind) -> Result<usize> {
    let fm = factor(p)?;
    if fm.factors.iter().any(|(f, _)| f.coeff(0).is_zero()) {
        return Err(Error::InvalidArgument("root 0 has no block decomposition".into()));
    }
    match kind {
        FamilyKind::Linear => Ok(fm.count()),
        FamilyKind::Unitary => {
            let field = p.field();
            let q = (field.order() as f64).sqrt().round() as u64;
            paired_blocks(&fm.factors, |f| conjugate_reciprocal(f, q), |_| false)
        }
        FamilyKind::SelfDual => {
            let f = p.field().clone();
            let is_pm_one = |g: &Poly| {
                g.degree() == Some(1)
                    && (g.coeff(0) == f.neg(FqElem::ONE) || g.coeff(0) == FqElem::ONE)
            };
            paired_blocks(&fm.factors, Poly::reciprocal, is_pm_one)
        }
    }
}

fn paired_blocks(
    factors: &[(Poly, usize)],
    partner: impl Fn(&Poly) -> Poly,
    halved: impl Fn(&Poly) -> bool,
) -> Result<usize> {
    let mut blocks = 0;
    for (f, m) in factors {
        if halved(f) {
            if m % 2 == 1 {
                return Err(Error::Invariant(format!("root of {f} has odd multiplicity {m}")));
            }
            blocks += m / 2;
            continue;
        }
        let g = partner(f);
        if g == *f {
            blocks += m;
        } else {
            let partner_mult = factors
                .iter()
                .find(|(h, _)| *h == g)
                .map(|(_, k)| *k)
                .unwrap_or(0);
            if partner_mult != *m {
                return Err(Error::Invariant(format!(
                    "factor {f} and its partner {g} have different multiplicities"
                )));
            }
            if *f < g {
                blocks += m;
            }
        }
    }
    Ok(blocks)
}

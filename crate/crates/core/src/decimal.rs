//! Serde adapters writing big integers as decimal strings.

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_str_radix(10)).collect::<Vec<_>>().serialize(s)
    }
}

pub mod rows {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<BigUint>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|r| r.iter().map(|x| x.to_str_radix(10)).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

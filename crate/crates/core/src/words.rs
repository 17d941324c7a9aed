//! Free-group words.
//!
//! Surface syntax: `term+` with `term := 'x' INT ('^' SIGNED_INT)?`, terms
//! separated by whitespace or an optional `*`. The identity word prints as
//! `1` and parses back from `1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grouplab::FiniteGroup;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<(u32, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// Freely reduces `letters`: adjacent powers of one generator merge and
    /// zero exponents vanish.
    pub fn from_letters(letters: impl IntoIterator<Item = (u32, i64)>) -> Result<Self> {
        let mut out: Vec<(u32, i64)> = Vec::new();
        for (g, e) in letters {
            if g == 0 {
                return Err(Error::InvalidArgument("generator indices start at 1".into()));
            }
            push_reduced(&mut out, g, e)?;
        }
        Ok(Word { letters: out })
    }

    pub fn letters(&self) -> &[(u32, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Largest generator index, 0 for the identity word.
    pub fn rank(&self) -> usize {
        self.letters.iter().map(|&(g, _)| g as usize).max().unwrap_or(0)
    }

    /// Distinct generators occurring in the word, ascending.
    pub fn generators(&self) -> Vec<u32> {
        let mut gens: Vec<u32> = self.letters.iter().map(|&(g, _)| g).collect();
        gens.sort_unstable();
        gens.dedup();
        gens
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for &(g, e) in &other.letters {
            push_reduced(&mut out, g, e).expect("exponents of reduced words stay in range");
        }
        Word { letters: out }
    }

    /// Every occurring generator appears in exactly two letters, one with
    /// exponent 1 and one with exponent -1.
    pub fn is_admissible(&self) -> bool {
        self.generators().into_iter().all(|g| {
            let exps: Vec<i64> = self.letters.iter().filter(|l| l.0 == g).map(|l| l.1).collect();
            exps.len() == 2 && exps.contains(&1) && exps.contains(&-1)
        })
    }

    /// `Some((m1, m2))` when the word is `x_i^{m1} x_j^{m2}` with `i ≠ j`.
    pub fn power_pair(&self) -> Option<(i64, i64)> {
        match self.letters[..] {
            [(a, m1), (b, m2)] if a != b => Some((m1, m2)),
            _ => None,
        }
    }

    /// Image under `x_i ↦ assignment[i - 1]`.
    pub fn evaluate<G: FiniteGroup + ?Sized>(&self, assignment: &[usize], group: &G) -> Result<usize> {
        let mut acc = group.identity();
        for &(g, e) in &self.letters {
            let x = *assignment.get(g as usize - 1).ok_or(Error::MissingGenerator(g))?;
            acc = group.mul(acc, group.pow(x, e));
        }
        Ok(acc)
    }
}

pub fn is_admissible(w: &Word) -> bool {
    w.is_admissible()
}

pub fn evaluate<G: FiniteGroup + ?Sized>(w: &Word, assignment: &[usize], group: &G) -> Result<usize> {
    w.evaluate(assignment, group)
}

fn push_reduced(out: &mut Vec<(u32, i64)>, g: u32, e: i64) -> Result<()> {
    if e == 0 {
        return Ok(());
    }
    match out.last_mut() {
        Some(last) if last.0 == g => {
            let sum = last
                .1
                .checked_add(e)
                .ok_or_else(|| Error::InvalidArgument(format!("exponent of x{g} overflows")))?;
            if sum == 0 {
                out.pop();
            } else {
                last.1 = sum;
            }
        }
        _ => out.push((g, e)),
    }
    Ok(())
}

pub fn parse(text: &str) -> Result<Word> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip = |pos: &mut usize| {
        while *pos < bytes.len() && (bytes[*pos].is_ascii_whitespace() || bytes[*pos] == b'*') {
            *pos += 1;
        }
    };
    let digits = |pos: &mut usize| -> &str {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        &text[start..*pos]
    };
    skip(&mut pos);
    if text[pos..].trim() == "1" {
        return Ok(Word::identity());
    }
    if pos == bytes.len() {
        return Err(Error::Syntax { pos, msg: "empty word".into() });
    }
    let mut letters = Vec::new();
    while pos < bytes.len() {
        if bytes[pos] != b'x' {
            return Err(Error::Syntax { pos, msg: format!("expected 'x', found {:?}", char_at(text, pos)) });
        }
        pos += 1;
        let at = pos;
        let index = digits(&mut pos);
        let gen: u32 = match index.parse() {
            Ok(g) if g >= 1 => g,
            Ok(_) => return Err(Error::Syntax { pos: at, msg: "generator index must be at least 1".into() }),
            Err(_) if index.is_empty() => {
                return Err(Error::Syntax { pos: at, msg: "expected generator index".into() })
            }
            Err(_) => return Err(Error::Syntax { pos: at, msg: "generator index out of range".into() }),
        };
        let mut exp = 1i64;
        if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            let at = pos;
            let negative = match bytes.get(pos) {
                Some(b'-') => {
                    pos += 1;
                    true
                }
                Some(b'+') => {
                    pos += 1;
                    false
                }
                _ => false,
            };
            let mag = digits(&mut pos);
            if mag.is_empty() {
                return Err(Error::Syntax { pos, msg: "expected exponent".into() });
            }
            let signed = if negative { format!("-{mag}") } else { mag.to_string() };
            exp = signed
                .parse()
                .map_err(|_| Error::Syntax { pos: at, msg: "exponent out of 64-bit range".into() })?;
            if exp == 0 {
                return Err(Error::ZeroExponent(at));
            }
        }
        letters.push((gen, exp));
        let before = pos;
        skip(&mut pos);
        if pos == before && pos < bytes.len() {
            return Err(Error::Syntax { pos, msg: "terms must be separated".into() });
        }
    }
    Word::from_letters(letters)
}

fn char_at(text: &str, pos: usize) -> char {
    text[pos..].chars().next().unwrap_or(' ')
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, &(g, e)) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if e == 1 {
                write!(f, "x{g}")?;
            } else {
                write!(f, "x{g}^{e}")?;
            }
        }
        Ok(())
    }
}

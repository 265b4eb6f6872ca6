//! Monomials, weight vectors and the weight-then-exponent order.
//!
//! A monomial in `m` variables is stored as its exponent vector
//! `(u_1, ..., u_m)`. Its weight vector counts, for each bit position `t`,
//! how many exponents have bit `t` set; weight vectors grade the filtration
//! that everything downstream (hit spaces, quotient bases, group actions)
//! is organized around.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Exponent vector of a monomial `x_1^{u_1} ... x_m^{u_m}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u64>,
}

impl Monomial {
    pub fn new(exps: Vec<u64>) -> Self {
        assert!(!exps.is_empty(), "a monomial needs at least one variable");
        Monomial { exps }
    }

    /// The all-zero monomial (the constant 1) in `m` variables.
    pub fn one(m: usize) -> Self {
        Monomial::new(vec![0; m])
    }

    /// Number of variables.
    pub fn vars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn degree(&self) -> u64 {
        degree_of(&self.exps)
    }

    pub fn weight_vector(&self) -> WeightVector {
        weight_of(&self.exps)
    }

    /// True when every exponent is positive.
    pub fn is_full_support(&self) -> bool {
        self.exps.iter().all(|&u| u > 0)
    }

    /// Total order on monomials of one degree: weight vectors first
    /// (left-lexicographic), exponent vectors (left-lexicographic) as the
    /// tie break. Comparing monomials of different degrees is a contract
    /// violation.
    pub fn compare(&self, other: &Monomial) -> Result<Ordering> {
        if self.vars() != other.vars() {
            return Err(Error::VariableMismatch {
                left: self.vars(),
                right: other.vars(),
            });
        }
        let (dl, dr) = (self.degree(), other.degree());
        if dl != dr {
            return Err(Error::DegreeMismatch { left: dl, right: dr });
        }
        Ok(cmp_graded(&self.exps, &other.exps))
    }
}

impl fmt::Display for Monomial {
    /// Bracketed exponent list, e.g. `[1,3,5]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, u) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{u}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [u1,...,um], got {s:?}")))?;
        let exps = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("bad exponent {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if exps.is_empty() {
            return Err(Error::Parse("empty exponent list".into()));
        }
        Ok(Monomial::new(exps))
    }
}

/// Finitely supported sequence `(w_1, w_2, ...)` of non-negative integers,
/// stored with trailing zeros trimmed. Its degree is `sum 2^{t-1} w_t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector {
    entries: Vec<u32>,
}

impl WeightVector {
    pub fn new(mut entries: Vec<u32>) -> Self {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        WeightVector { entries }
    }

    pub fn empty() -> Self {
        WeightVector { entries: Vec::new() }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Entry at 1-based position `t` (zero beyond the stored support).
    pub fn entry(&self, t: usize) -> u32 {
        if t == 0 {
            return 0;
        }
        self.entries.get(t - 1).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, &w)| (w as u64) << i)
            .sum()
    }
}

impl PartialOrd for WeightVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeightVector {
    /// Left-lexicographic; the shorter vector is padded with zeros.
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.entries.len().max(other.entries.len());
        for t in 0..n {
            let a = self.entries.get(t).copied().unwrap_or(0);
            let b = other.entries.get(t).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for WeightVector {
    /// Parenthesized entry list, e.g. `(2,2,1,1)`; `()` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for WeightVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(s);
        if inner.trim().is_empty() {
            return Ok(WeightVector::empty());
        }
        let entries = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad weight entry {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightVector::new(entries))
    }
}

pub fn degree_of(exps: &[u64]) -> u64 {
    exps.iter().sum()
}

/// Weight vector of an exponent slice: entry `t` counts the exponents with
/// bit `t-1` set.
pub fn weight_of(exps: &[u64]) -> WeightVector {
    let mut all = 0u64;
    for &u in exps {
        all |= u;
    }
    let bits = (64 - all.leading_zeros()) as usize;
    let mut entries = vec![0u32; bits];
    for &u in exps {
        let mut rest = u;
        while rest != 0 {
            let t = rest.trailing_zeros() as usize;
            entries[t] += 1;
            rest &= rest - 1;
        }
    }
    WeightVector::new(entries)
}

/// Compare the weight vectors of two exponent slices without allocating.
pub fn cmp_weights_of(a: &[u64], b: &[u64]) -> Ordering {
    let mut all = 0u64;
    for &u in a.iter().chain(b) {
        all |= u;
    }
    let bits = 64 - all.leading_zeros();
    for t in 0..bits {
        let wa = a.iter().filter(|&&u| u >> t & 1 == 1).count();
        let wb = b.iter().filter(|&&u| u >> t & 1 == 1).count();
        match wa.cmp(&wb) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

/// The weight-then-exponent order on exponent slices. Total on monomials of
/// one degree; callers are responsible for only comparing equal degrees.
pub fn cmp_graded(a: &[u64], b: &[u64]) -> Ordering {
    match cmp_weights_of(a, b) {
        Ordering::Equal => a.cmp(b),
        ord => ord,
    }
}

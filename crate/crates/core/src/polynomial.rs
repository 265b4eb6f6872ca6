//! Homogeneous polynomials over F2, stored as canonical sorted term sets.

use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::monomial::{cmp_graded, Monomial};

/// A finite F2-sum of monomials of one degree.
///
/// Terms are kept strictly descending in the weight-then-exponent order, so
/// equality is structural and output is reproducible. Addition is symmetric
/// difference of term sets; `p + p = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    m: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero(m: usize) -> Self {
        Polynomial { m, terms: Vec::new() }
    }

    pub fn from_monomial(x: Monomial) -> Self {
        Polynomial {
            m: x.vars(),
            terms: vec![x],
        }
    }

    /// Build from a term list, canceling duplicate pairs mod 2.
    ///
    /// All terms must share one variable count and one degree.
    pub fn from_monomials(m: usize, mut terms: Vec<Monomial>) -> Result<Self> {
        for t in &terms {
            if t.vars() != m {
                return Err(Error::VariableMismatch {
                    left: m,
                    right: t.vars(),
                });
            }
        }
        if let Some(first) = terms.first() {
            let d = first.degree();
            for t in &terms[1..] {
                if t.degree() != d {
                    return Err(Error::DegreeMismatch {
                        left: d,
                        right: t.degree(),
                    });
                }
            }
        }
        terms.sort_by(|a, b| cmp_graded(b.exponents(), a.exponents()));
        Ok(Polynomial {
            m,
            terms: cancel_sorted_pairs(terms),
        })
    }

    pub fn vars(&self) -> usize {
        self.m
    }

    /// Degree of the terms; `None` for the zero polynomial (its degree is
    /// carried by context).
    pub fn degree(&self) -> Option<u64> {
        self.terms.first().map(Monomial::degree)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in strictly descending order.
    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }
}

/// Drop equal adjacent pairs from a sorted term list (characteristic 2).
fn cancel_sorted_pairs(terms: Vec<Monomial>) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::with_capacity(terms.len());
    let mut it = terms.into_iter().peekable();
    while let Some(t) = it.next() {
        if it.peek() == Some(&t) {
            it.next();
        } else {
            out.push(t);
        }
    }
    out
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.m, rhs.m, "variable count mismatch in polynomial sum");
        if let (Some(a), Some(b)) = (self.degree(), rhs.degree()) {
            assert_eq!(a, b, "degree mismatch in polynomial sum");
        }
        // merge two descending lists, canceling equal terms
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            let a = &self.terms[i];
            let b = &rhs.terms[j];
            match cmp_graded(b.exponents(), a.exponents()) {
                std::cmp::Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&rhs.terms[j..]);
        Polynomial { m: self.m, terms: out }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        *self = &*self + rhs;
    }
}

impl fmt::Display for Polynomial {
    /// `+`-joined monomials, descending; `0` for the zero polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Err(Error::Parse(
                "the zero polynomial has no variable count; pass a term list".into(),
            ));
        }
        let terms = s
            .split('+')
            .map(|t| t.trim().parse::<Monomial>())
            .collect::<Result<Vec<_>>>()?;
        let m = terms
            .first()
            .map(Monomial::vars)
            .ok_or_else(|| Error::Parse("empty polynomial text".into()))?;
        Polynomial::from_monomials(m, terms)
    }
}

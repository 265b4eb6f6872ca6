//! The action of Steenrod squares on the polynomial algebra over F2.
//!
//! On a single variable power, `Sq^j(x^a) = C(a, j) x^{a+j}` with the
//! binomial read mod 2, so `Sq^j(x^a)` survives exactly when `j` is a bitwise
//! subset of `a`. The action on a monomial is the Cartan convolution over all
//! per-variable splittings of `k`; enumerating bit subsets per variable keeps
//! that polynomial-time in the output size.

use crate::adem::SqWord;
use crate::monomial::Monomial;
use crate::polynomial::Polynomial;

/// C(a, j) mod 2 by Lucas' theorem: odd iff the bits of `j` are a subset of
/// the bits of `a`.
#[inline]
pub fn binomial_odd(a: u64, j: u64) -> bool {
    j & !a == 0
}

/// Visit the exponent vector of every term of `Sq^k` applied to the monomial
/// with exponents `exps`. Terms are pairwise distinct; `scratch` must have
/// the same length as `exps`.
pub(crate) fn for_each_sq_term<F: FnMut(&[u64])>(
    k: u64,
    exps: &[u64],
    scratch: &mut [u64],
    f: &mut F,
) {
    debug_assert_eq!(exps.len(), scratch.len());
    // capacity[j] = how much of k the variables j.. can still absorb
    let mut capacity = vec![0u64; exps.len() + 1];
    for j in (0..exps.len()).rev() {
        capacity[j] = capacity[j + 1] + exps[j];
    }
    if k > capacity[0] {
        return; // unstable vanishing
    }
    descend(0, k, exps, &capacity, scratch, f);
}

fn descend<F: FnMut(&[u64])>(
    j: usize,
    remaining: u64,
    exps: &[u64],
    capacity: &[u64],
    scratch: &mut [u64],
    f: &mut F,
) {
    if j == exps.len() {
        if remaining == 0 {
            f(scratch);
        }
        return;
    }
    let a = exps[j];
    // submasks of a, descending, including 0
    let mut s = a;
    loop {
        if s <= remaining && remaining - s <= capacity[j + 1] {
            scratch[j] = a + s;
            descend(j + 1, remaining - s, exps, capacity, scratch, f);
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & a;
    }
    scratch[j] = a;
}

/// `Sq^k` applied to a monomial. Returns the zero polynomial when `k`
/// exceeds the degree.
pub fn sq_monomial(k: u64, x: &Monomial) -> Polynomial {
    let m = x.vars();
    let mut terms = Vec::new();
    let mut scratch = vec![0u64; m];
    for_each_sq_term(k, x.exponents(), &mut scratch, &mut |t| {
        terms.push(Monomial::new(t.to_vec()));
    });
    Polynomial::from_monomials(m, terms).expect("terms share the degree deg(x) + k")
}

/// `Sq^k` applied term by term (the squares are additive).
pub fn sq_polynomial(k: u64, p: &Polynomial) -> Polynomial {
    let mut terms = Vec::new();
    let mut scratch = vec![0u64; p.vars()];
    for x in p.terms() {
        for_each_sq_term(k, x.exponents(), &mut scratch, &mut |t| {
            terms.push(Monomial::new(t.to_vec()));
        });
    }
    Polynomial::from_monomials(p.vars(), terms).expect("terms share the degree deg(p) + k")
}

/// Apply a composition `Sq^{i_1} ... Sq^{i_r}` right to left.
pub fn sq_word_action(word: &SqWord, p: &Polynomial) -> Polynomial {
    let mut acc = p.clone();
    for &i in word.indices().iter().rev() {
        acc = sq_polynomial(i as u64, &acc);
    }
    acc
}

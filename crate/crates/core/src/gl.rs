//! Invertible linear substitutions of variables over F2.

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::polynomial::Polynomial;

/// An invertible m x m bit matrix acting by substitution
/// `x_j -> sum_k M[j][k] x_k`.
///
/// Row `j` is the bitmask of variables appearing in the image of `x_{j+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearSubstitution {
    m: usize,
    rows: Vec<u64>,
}

impl LinearSubstitution {
    pub fn identity(m: usize) -> Self {
        LinearSubstitution {
            m,
            rows: (0..m).map(|j| 1 << j).collect(),
        }
    }

    /// Build from row bitmasks; the matrix must be invertible over F2.
    pub fn from_rows(m: usize, rows: Vec<u64>) -> Result<Self> {
        assert!(m >= 1 && m <= 64, "1..=64 variables");
        if rows.len() != m {
            return Err(Error::VariableMismatch {
                left: m,
                right: rows.len(),
            });
        }
        if rank_of(&rows) != m {
            return Err(Error::SingularSubstitution);
        }
        Ok(LinearSubstitution { m, rows })
    }

    /// Substitution permuting the variables: `x_j -> x_{perm[j]}`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let m = perm.len();
        LinearSubstitution::from_rows(m, perm.iter().map(|&k| 1u64 << k).collect())
    }

    pub fn vars(&self) -> usize {
        self.m
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn get(&self, j: usize, k: usize) -> bool {
        self.rows[j] >> k & 1 == 1
    }

    /// The substitution applying `self`'s formulas first, then `g`'s.
    pub fn then(&self, g: &LinearSubstitution) -> LinearSubstitution {
        assert_eq!(self.m, g.m);
        let rows = self
            .rows
            .iter()
            .map(|&row| {
                let mut acc = 0u64;
                let mut rest = row;
                while rest != 0 {
                    let k = rest.trailing_zeros() as usize;
                    acc ^= g.rows[k];
                    rest &= rest - 1;
                }
                acc
            })
            .collect();
        LinearSubstitution { m: self.m, rows }
    }
}

fn rank_of(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &row in rows {
        let mut v = row;
        for &b in &basis {
            let lead = 1u64 << (63 - b.leading_zeros());
            if v & lead != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
        }
    }
    basis.len()
}

/// A generating set for `GL(m, F2)`: the m-cycle, the transposition of the
/// first two variables, and the transvection `x_1 -> x_1 + x_2`. Fixed
/// spaces of this set are fixed spaces of the whole group.
pub fn gl_generators(m: usize) -> Vec<LinearSubstitution> {
    if m == 1 {
        return vec![LinearSubstitution::identity(1)];
    }
    let cycle: Vec<usize> = (0..m).map(|j| (j + 1) % m).collect();
    let mut swap: Vec<usize> = (0..m).collect();
    swap.swap(0, 1);
    let mut trans = LinearSubstitution::identity(m);
    trans.rows[0] = 0b11;
    vec![
        LinearSubstitution::permutation(&cycle).expect("cycles are invertible"),
        LinearSubstitution::permutation(&swap).expect("transpositions are invertible"),
        trans,
    ]
}

/// Fully expand `g` applied to a monomial: the product over variables of
/// `(sum_k g[j][k] x_k)^{u_j}`, with powers split along binary digits
/// (squaring doubles exponents term-wise in characteristic 2).
pub fn substitute(g: &LinearSubstitution, x: &Monomial) -> Result<Polynomial> {
    if g.vars() != x.vars() {
        return Err(Error::VariableMismatch {
            left: g.vars(),
            right: x.vars(),
        });
    }
    let m = g.vars();
    let mut terms: Vec<Vec<u64>> = vec![vec![0u64; m]];
    for (j, &u) in x.exponents().iter().enumerate() {
        let row = g.rows[j];
        let mut bit = 0u32;
        let mut rest = u;
        while rest != 0 {
            if rest & 1 == 1 {
                // multiply by sum_k x_k^{2^bit} over the row's variables
                let mut next: Vec<Vec<u64>> =
                    Vec::with_capacity(terms.len() * row.count_ones() as usize);
                for t in &terms {
                    let mut vars = row;
                    while vars != 0 {
                        let k = vars.trailing_zeros() as usize;
                        vars &= vars - 1;
                        let mut t2 = t.clone();
                        t2[k] += 1u64 << bit;
                        next.push(t2);
                    }
                }
                next.sort_unstable();
                terms = cancel_pairs(next);
            }
            rest >>= 1;
            bit += 1;
        }
    }
    Polynomial::from_monomials(m, terms.into_iter().map(Monomial::new).collect())
}

pub fn substitute_poly(g: &LinearSubstitution, p: &Polynomial) -> Result<Polynomial> {
    let mut acc = Polynomial::zero(p.vars());
    for t in p.terms() {
        acc += &substitute(g, t)?;
    }
    Ok(acc)
}

fn cancel_pairs(sorted: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = Vec::with_capacity(sorted.len());
    let mut it = sorted.into_iter().peekable();
    while let Some(t) = it.next() {
        if it.peek() == Some(&t) {
            it.next();
        } else {
            out.push(t);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn mono(exps: &[u64]) -> Monomial {
        Monomial::new(exps.to_vec())
    }

    #[test]
    fn identity_fixes_everything() {
        let g = LinearSubstitution::identity(3);
        let x = mono(&[2, 0, 5]);
        assert_eq!(substitute(&g, &x).unwrap(), Polynomial::from_monomial(x));
    }

    #[test]
    fn swapping_variables_swaps_exponents() {
        let g = LinearSubstitution::permutation(&[1, 0]).unwrap();
        let x = mono(&[2, 1]);
        assert_eq!(
            substitute(&g, &x).unwrap(),
            Polynomial::from_monomial(mono(&[1, 2]))
        );
    }

    #[test]
    fn transvection_squares_without_cross_terms() {
        // (x1 + x2)^2 = x1^2 + x2^2 in characteristic 2
        let g = gl_generators(2).pop().unwrap();
        assert_eq!(g.rows(), &[0b11, 0b10]);
        let p = substitute(&g, &mono(&[2, 0])).unwrap();
        assert_eq!(
            p,
            Polynomial::from_monomials(2, vec![mono(&[2, 0]), mono(&[0, 2])]).unwrap()
        );
        // (x1 + x2)^3 keeps the cross terms of odd multiplicity
        let q = substitute(&g, &mono(&[3, 0])).unwrap();
        assert_eq!(q.len(), 4);
        assert_eq!(q.degree(), Some(3));
    }

    #[test]
    fn singular_matrices_are_rejected() {
        assert!(matches!(
            LinearSubstitution::from_rows(2, vec![0b11, 0b11]),
            Err(Error::SingularSubstitution)
        ));
        assert!(LinearSubstitution::from_rows(2, vec![0b01, 0b11]).is_ok());
    }

    #[test]
    fn composition_matches_sequential_substitution() {
        let gens = gl_generators(3);
        let x = mono(&[1, 2, 1]);
        for g in &gens {
            for h in &gens {
                let seq = substitute_poly(g, &substitute(h, &x).unwrap()).unwrap();
                let composed = substitute(&h.then(g), &x).unwrap();
                assert_eq!(seq, composed);
            }
        }
    }

    #[test]
    fn generators_generate_the_whole_group() {
        // closure enumeration, checked against prod_{i<m} (2^m - 2^i)
        for m in 1..=4usize {
            let gens = gl_generators(m);
            let mut seen: HashSet<Vec<u64>> = HashSet::new();
            let mut frontier = vec![LinearSubstitution::identity(m)];
            seen.insert(frontier[0].rows().to_vec());
            while let Some(g) = frontier.pop() {
                for h in &gens {
                    let gh = g.then(h);
                    if seen.insert(gh.rows().to_vec()) {
                        frontier.push(gh);
                    }
                }
            }
            let order: u64 = (0..m).map(|i| (1u64 << m) - (1 << i)).product();
            assert_eq!(seen.len() as u64, order, "m = {m}");
        }
    }

    #[test]
    fn substitution_preserves_degree() {
        let gens = gl_generators(3);
        for g in &gens {
            for exps in [&[3u64, 1, 0][..], &[0, 2, 2], &[5, 1, 1]] {
                let x = mono(exps);
                let p = substitute(g, &x).unwrap();
                assert_eq!(p.degree(), Some(x.degree()));
            }
        }
    }
}

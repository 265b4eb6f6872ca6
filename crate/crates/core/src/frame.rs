//! Coordinate frames: all monomials of a fixed (m, n), sorted descending.

use std::collections::HashMap;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::monomial::{weight_of, Monomial, WeightVector};

/// The ordered coordinate system for degree-`n` monomials in `m` variables.
///
/// Index 0 is the largest monomial in the weight-then-exponent order, so a
/// row's leading coordinate in the echelon layer is its largest monomial.
#[derive(Debug)]
pub struct CoordinateFrame {
    m: usize,
    n: u64,
    /// exponent vectors, flat with stride m, strictly descending
    exps: Vec<u64>,
    index: HashMap<Box<[u64]>, u32>,
    hash: [u8; 32],
}

impl CoordinateFrame {
    /// Enumerate and sort the full frame.
    pub fn new(m: usize, n: u64) -> Arc<CoordinateFrame> {
        assert!(m >= 1, "at least one variable");
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut current = vec![0u64; m];
        compositions(n, 0, &mut current, &mut rows);
        // weight keys are precomputed once; the sort comparator reuses them
        let mut keyed: Vec<(WeightVector, Vec<u64>)> = rows
            .into_iter()
            .map(|e| (weight_of(&e), e))
            .collect();
        keyed.sort_unstable_by(|(wa, ea), (wb, eb)| {
            wb.cmp(wa).then_with(|| eb.cmp(ea))
        });
        let mut exps = Vec::with_capacity(keyed.len() * m);
        let mut index = HashMap::with_capacity(keyed.len());
        for (i, (_, e)) in keyed.iter().enumerate() {
            exps.extend_from_slice(e);
            index.insert(e.clone().into_boxed_slice(), i as u32);
        }
        let mut hasher = Sha256::new();
        hasher.update((m as u64).to_le_bytes());
        hasher.update(n.to_le_bytes());
        for &u in &exps {
            hasher.update(u.to_le_bytes());
        }
        Arc::new(CoordinateFrame {
            m,
            n,
            exps,
            index,
            hash: hasher.finalize().into(),
        })
    }

    pub fn vars(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.exps.len() / self.m
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents_of(&self, i: usize) -> &[u64] {
        &self.exps[i * self.m..(i + 1) * self.m]
    }

    pub fn monomial(&self, i: usize) -> Monomial {
        Monomial::new(self.exponents_of(i).to_vec())
    }

    pub fn weight_of(&self, i: usize) -> WeightVector {
        weight_of(self.exponents_of(i))
    }

    pub fn full_support(&self, i: usize) -> bool {
        self.exponents_of(i).iter().all(|&u| u > 0)
    }

    pub fn index_of(&self, exps: &[u64]) -> Option<u32> {
        self.index.get(exps).copied()
    }

    /// Content hash identifying the frame (and therefore the coordinate
    /// order) for cached artifacts.
    pub fn hash(&self) -> [u8; 32] {
        self.hash
    }
}

fn compositions(rest: u64, j: usize, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if j + 1 == current.len() {
        current[j] = rest;
        out.push(current.clone());
        return;
    }
    for v in 0..=rest {
        current[j] = v;
        compositions(rest - v, j + 1, current, out);
    }
}

/// Binomial coefficient, used for frame-size sanity checks.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::{cmp_graded, cmp_weights_of};
    use std::cmp::Ordering;

    #[test]
    fn frame_sizes_match_the_stars_and_bars_count() {
        for (m, n) in [(1usize, 5u64), (2, 7), (3, 10), (5, 6)] {
            let f = CoordinateFrame::new(m, n);
            assert_eq!(
                f.len() as u128,
                binomial(n + m as u64 - 1, m as u64 - 1),
                "({m},{n})"
            );
        }
        // the two desk-scale frames
        assert_eq!(binomial(22, 4), 7315);
        assert_eq!(binomial(45, 4), 148_995);
    }

    #[test]
    fn strictly_descending_and_indexed() {
        let f = CoordinateFrame::new(3, 8);
        for i in 1..f.len() {
            assert_eq!(
                cmp_graded(f.exponents_of(i - 1), f.exponents_of(i)),
                Ordering::Greater
            );
        }
        for i in 0..f.len() {
            assert_eq!(f.index_of(f.exponents_of(i)), Some(i as u32));
        }
        assert_eq!(f.index_of(&[9, 0, 0]), None);
    }

    #[test]
    fn weight_runs_are_contiguous() {
        // descending graded order groups equal weights together
        let f = CoordinateFrame::new(4, 9);
        let mut seen = Vec::new();
        let mut i = 0;
        while i < f.len() {
            let w = f.weight_of(i);
            assert!(!seen.contains(&w), "weight {w} split into two runs");
            let mut j = i;
            while j < f.len()
                && cmp_weights_of(f.exponents_of(i), f.exponents_of(j)) == Ordering::Equal
            {
                j += 1;
            }
            seen.push(w);
            i = j;
        }
    }

    #[test]
    fn degree_zero_frame_is_the_constant() {
        let f = CoordinateFrame::new(4, 0);
        assert_eq!(f.len(), 1);
        assert_eq!(f.exponents_of(0), &[0, 0, 0, 0]);
        assert!(f.weight_of(0).is_empty());
    }

    #[test]
    fn hash_depends_on_shape() {
        let a = CoordinateFrame::new(3, 5);
        let b = CoordinateFrame::new(3, 6);
        let c = CoordinateFrame::new(4, 5);
        assert_ne!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash(), CoordinateFrame::new(3, 5).hash());
    }
}

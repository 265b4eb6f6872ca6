//! Incremental reduced row echelon form over F2, with the pivot of a row at
//! its leading (smallest-index) coordinate.
//!
//! Rows are kept fully reduced at all times: a row's pivot coordinate is set
//! in no other row, so the stored basis is the canonical reduced echelon
//! basis of the span and two spaces are equal as subspaces exactly when the
//! stored data agree.

use crate::gf2::bitvec::BitVec;

const NO_ROW: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonSpace {
    dim: usize,
    /// rows[k] has pivot pivots[k]; fully reduced against each other
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
    row_of_pivot: Vec<u32>,
}

impl EchelonSpace {
    pub fn new(dim: usize) -> Self {
        EchelonSpace {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            row_of_pivot: vec![NO_ROW; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, coord: usize) -> bool {
        self.row_of_pivot[coord] != NO_ROW
    }

    /// Pivot coordinates in ascending order.
    pub fn pivots(&self) -> Vec<usize> {
        let mut p = self.pivots.clone();
        p.sort_unstable();
        p
    }

    /// Non-pivot coordinates in ascending order.
    pub fn nonpivots(&self) -> Vec<usize> {
        (0..self.dim).filter(|&c| !self.is_pivot(c)).collect()
    }

    pub fn row_with_pivot(&self, coord: usize) -> Option<&BitVec> {
        match self.row_of_pivot[coord] {
            NO_ROW => None,
            k => Some(&self.rows[k as usize]),
        }
    }

    /// Enlarge the span by `v`. Returns whether the rank increased.
    pub fn insert(&mut self, v: BitVec) -> bool {
        assert_eq!(v.len(), self.dim, "vector does not live in this frame");
        let Some(v) = self.reduce_owned(v) else {
            return false;
        };
        let pivot = v.first_one().expect("nonzero after reduction");
        // back-substitution keeps existing rows fully reduced
        for row in &mut self.rows {
            if row.get(pivot) {
                row.xor_assign(&v);
            }
        }
        self.row_of_pivot[pivot] = self.rows.len() as u32;
        self.pivots.push(pivot);
        self.rows.push(v);
        true
    }

    /// The unique representative of `v + span` with no pivot coordinate set;
    /// zero exactly when `v` is in the span.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.dim, "vector does not live in this frame");
        match self.reduce_owned(v.clone()) {
            Some(r) => r,
            None => BitVec::zeros(self.dim),
        }
    }

    /// Reduce in place; `None` when the result is zero. Since rows are fully
    /// reduced, one ascending pass over the set bits suffices: xoring a row
    /// only flips non-pivot coordinates beyond its pivot.
    fn reduce_owned(&self, mut v: BitVec) -> Option<BitVec> {
        let mut from = 0;
        while let Some(i) = v.first_one_from(from) {
            match self.row_of_pivot[i] {
                NO_ROW => from = i + 1,
                k => {
                    v.xor_assign(&self.rows[k as usize]);
                    from = i + 1;
                }
            }
        }
        if v.is_zero() {
            None
        } else {
            Some(v)
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Rows ordered by ascending pivot (the canonical presentation).
    pub fn sorted_rows(&self) -> Vec<&BitVec> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_unstable_by_key(|&k| self.pivots[k]);
        order.into_iter().map(|k| &self.rows[k]).collect()
    }
}

/// Basis of the kernel of the linear map with the given columns: all `v`
/// with `sum_{j in v} cols[j] = 0`.
///
/// Works as an augmented forward elimination: each incoming column carries
/// the unit vector recording which inputs were combined; a column that
/// reduces to zero yields a kernel vector.
pub fn kernel_of_columns(constraint_dim: usize, cols: &[BitVec]) -> Vec<BitVec> {
    let n = cols.len();
    let mut rows: Vec<(BitVec, BitVec)> = Vec::new();
    let mut row_of_pivot = vec![NO_ROW; constraint_dim];
    let mut kernel = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        assert_eq!(c.len(), constraint_dim, "column length mismatch");
        let mut v = c.clone();
        let mut aug = BitVec::unit(n, j);
        let mut from = 0;
        while let Some(i) = v.first_one_from(from) {
            match row_of_pivot[i] {
                NO_ROW => break,
                k => {
                    let (rv, ra) = &rows[k as usize];
                    v.xor_assign(rv);
                    aug.xor_assign(ra);
                    from = i + 1;
                }
            }
        }
        match v.first_one() {
            None => kernel.push(aug),
            Some(p) => {
                row_of_pivot[p] = rows.len() as u32;
                rows.push((v, aug));
            }
        }
    }
    kernel
}

/// A matrix over F2 stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    nrows: usize,
    cols: Vec<BitVec>,
}

impl BitMatrix {
    pub fn from_columns(nrows: usize, cols: Vec<BitVec>) -> Self {
        for c in &cols {
            assert_eq!(c.len(), nrows, "column length mismatch");
        }
        BitMatrix { nrows, cols }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            nrows: n,
            cols: (0..n).map(|j| BitVec::unit(n, j)).collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &BitVec {
        &self.cols[j]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cols[j].get(i)
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.ncols());
        let mut out = BitVec::zeros(self.nrows);
        for j in v.iter_ones() {
            out.xor_assign(&self.cols[j]);
        }
        out
    }

    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.ncols(), rhs.nrows());
        BitMatrix {
            nrows: self.nrows,
            cols: rhs.cols.iter().map(|c| self.mul_vec(c)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        let mut space = EchelonSpace::new(self.nrows);
        for c in &self.cols {
            space.insert(c.clone());
        }
        space.rank()
    }

    /// Rows `rows` by columns `cols` submatrix.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> BitMatrix {
        let picked = cols
            .iter()
            .map(|&j| {
                BitVec::from_ones(
                    rows.len(),
                    rows.iter()
                        .enumerate()
                        .filter(|&(_, &i)| self.cols[j].get(i))
                        .map(|(k, _)| k),
                )
            })
            .collect();
        BitMatrix::from_columns(rows.len(), picked)
    }
}

/// Common 1-eigenspace of a family of square matrices: the canonical echelon
/// basis of `{v : M v = v for all M}`.
pub fn fixed_space(mats: &[BitMatrix]) -> EchelonSpace {
    let d = match mats.first() {
        None => return EchelonSpace::new(0),
        Some(m) => {
            assert_eq!(m.nrows(), m.ncols(), "fixed_space needs square matrices");
            m.nrows()
        }
    };
    for m in mats {
        assert_eq!((m.nrows(), m.ncols()), (d, d), "matrix size mismatch");
    }
    // stack the columns of every M - I and take the kernel
    let stacked: Vec<BitVec> = (0..d)
        .map(|j| {
            let mut col = BitVec::zeros(d * mats.len());
            for (k, m) in mats.iter().enumerate() {
                for i in m.col(j).iter_ones() {
                    col.set(k * d + i);
                }
                if m.col(j).get(j) {
                    col.clear(k * d + j);
                } else {
                    col.set(k * d + j);
                }
            }
            col
        })
        .collect();
    let mut space = EchelonSpace::new(d);
    for v in kernel_of_columns(d * mats.len(), &stacked) {
        space.insert(v);
    }
    space
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_vector_and_repeats() {
        let mut s = EchelonSpace::new(3);
        assert!(!s.insert(BitVec::zeros(3)));
        assert_eq!(s.rank(), 0);
        assert!(s.insert(BitVec::unit(3, 0)));
        assert!(!s.insert(BitVec::unit(3, 0)));
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn all_nonzero_vectors_fill_the_space() {
        let mut s = EchelonSpace::new(3);
        for mask in 1u32..8 {
            s.insert(BitVec::from_ones(3, (0..3).filter(|&i| mask >> i & 1 == 1)));
        }
        assert_eq!(s.rank(), 3);
        assert!(s.nonpivots().is_empty());
    }

    #[test]
    fn reduce_is_linear_and_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let dim = 40;
        let mut s = EchelonSpace::new(dim);
        for _ in 0..25 {
            s.insert(random_vec(&mut rng, dim));
        }
        assert_eq!(s.reduce(&BitVec::zeros(dim)), BitVec::zeros(dim));
        for _ in 0..50 {
            let u = random_vec(&mut rng, dim);
            let v = random_vec(&mut rng, dim);
            let mut uv = u.clone();
            uv.xor_assign(&v);
            let mut sum = s.reduce(&u);
            sum.xor_assign(&s.reduce(&v));
            assert_eq!(s.reduce(&uv), sum);
            assert_eq!(s.reduce(&s.reduce(&u)), s.reduce(&u));
        }
        // every row reduces to zero
        for row in &s.rows {
            assert!(s.contains(row));
        }
    }

    #[test]
    fn empty_space_reduces_to_identity() {
        let s = EchelonSpace::new(8);
        let v = BitVec::from_ones(8, [2, 5]);
        assert_eq!(s.reduce(&v), v);
    }

    fn random_vec(rng: &mut ChaCha8Rng, dim: usize) -> BitVec {
        BitVec::from_ones(dim, (0..dim).filter(|_| rng.gen_bool(0.3)))
    }

    #[test]
    fn canonical_under_insertion_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dim = 32;
        let gens: Vec<BitVec> = (0..20).map(|_| random_vec(&mut rng, dim)).collect();
        let mut reference = EchelonSpace::new(dim);
        for g in &gens {
            reference.insert(g.clone());
        }
        for _ in 0..10 {
            let mut shuffled = gens.clone();
            shuffled.shuffle(&mut rng);
            let mut s = EchelonSpace::new(dim);
            for g in shuffled {
                s.insert(g);
            }
            assert_eq!(s.pivots(), reference.pivots());
            assert_eq!(s.sorted_rows(), reference.sorted_rows());
        }
    }

    #[test]
    fn rank_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let dim = rng.gen_range(1..30);
            let count = rng.gen_range(0..40);
            let mut s = EchelonSpace::new(dim);
            for _ in 0..count {
                s.insert(random_vec(&mut rng, dim));
            }
            assert!(s.rank() <= dim.min(count));
            assert_eq!(s.rank() + s.nonpivots().len(), dim);
        }
    }

    #[test]
    fn fixed_space_of_identity_is_everything() {
        let d = 5;
        let s = fixed_space(&[BitMatrix::identity(d)]);
        assert_eq!(s.rank(), d);
    }

    #[test]
    fn fixed_space_of_a_cycle_is_the_diagonal() {
        for d in 2..=6usize {
            let cols = (0..d)
                .map(|j| BitVec::unit(d, (j + 1) % d))
                .collect::<Vec<_>>();
            let m = BitMatrix::from_columns(d, cols);
            let s = fixed_space(&[m.clone()]);
            assert_eq!(s.rank(), 1, "d = {d}");
            // brute force over all vectors
            let brute = (1u64..1 << d)
                .filter(|mask| {
                    let v = BitVec::from_ones(d, (0..d).filter(|&i| mask >> i & 1 == 1));
                    m.mul_vec(&v) == v
                })
                .count();
            assert_eq!(brute, (1 << s.rank()) - 1);
        }
    }

    #[test]
    fn fixed_space_matches_brute_force_on_random_4x4() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let d = 4;
            let mats: Vec<BitMatrix> = (0..rng.gen_range(1..3))
                .map(|_| {
                    BitMatrix::from_columns(
                        d,
                        (0..d).map(|_| random_vec(&mut rng, d)).collect(),
                    )
                })
                .collect();
            let s = fixed_space(&mats);
            let brute = (0u64..1 << d)
                .filter(|&mask| {
                    let v = BitVec::from_ones(d, (0..d).filter(|&i| mask >> i & 1 == 1));
                    mats.iter().all(|m| m.mul_vec(&v) == v)
                })
                .count();
            assert_eq!(1usize << s.rank(), brute);
        }
    }

    #[test]
    fn kernel_of_columns_spans_all_dependencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let dim = rng.gen_range(1..12);
            let n = rng.gen_range(1..14);
            let cols: Vec<BitVec> = (0..n).map(|_| random_vec(&mut rng, dim)).collect();
            let kernel = kernel_of_columns(dim, &cols);
            for k in &kernel {
                let mut sum = BitVec::zeros(dim);
                for j in k.iter_ones() {
                    sum.xor_assign(&cols[j]);
                }
                assert!(sum.is_zero());
            }
            let mut colspace = EchelonSpace::new(dim);
            for c in &cols {
                colspace.insert(c.clone());
            }
            assert_eq!(kernel.len(), n - colspace.rank());
        }
    }
}

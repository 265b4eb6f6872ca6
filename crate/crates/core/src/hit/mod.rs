//! Hit subspaces and admissible monomial bases of the quotient by the
//! Steenrod action.
//!
//! In degree `n` the hit subspace is the sum of the images of `Sq^{2^i}`
//! from the lower degrees `n - 2^i`. With the frame sorted weight-first
//! descending and pivots at leading coordinates, a monomial is congruent to
//! a sum of strictly smaller monomials exactly when it is a pivot of the hit
//! echelon, so the admissible basis of the quotient is the non-pivot set and
//! the weight-graded dimensions are the non-pivot counts per weight run.

pub mod kameko;

use std::ops::Range;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frame::CoordinateFrame;
use crate::gf2::bitvec::BitVec;
use crate::gf2::builder::{echelonize_sparse, CheckpointStore, StreamOptions};
use crate::gf2::compact::CompactEchelon;
use crate::gf2::echelon::EchelonSpace;
use crate::monomial::WeightVector;
use crate::polynomial::Polynomial;
use crate::steenrod::for_each_sq_term;

/// Budgets and tuning for hit-space construction.
#[derive(Clone, Debug)]
pub struct HitOptions {
    pub mem_ceiling_bytes: Option<u64>,
    pub deadline: Option<Instant>,
    /// frames up to this size use plain in-memory full-width echelon rows
    pub dense_frame_limit: usize,
    /// directory for resumable checkpoints of streamed runs
    pub checkpoint_dir: Option<PathBuf>,
    pub checkpoint_every: u64,
    pub secondary_cap: usize,
    pub chunk: usize,
}

impl Default for HitOptions {
    fn default() -> Self {
        HitOptions {
            mem_ceiling_bytes: None,
            deadline: None,
            dense_frame_limit: 32_768,
            checkpoint_dir: None,
            checkpoint_every: 100_000,
            secondary_cap: 1024,
            chunk: 4096,
        }
    }
}

/// One `Sq^{2^i}` generator batch in a hit-space recipe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorFamily {
    pub square: u64,
    pub source_degree: u64,
    pub generators: usize,
}

/// The echelonized hit subspace of one degree.
#[derive(Debug)]
pub struct HitSpace {
    m: usize,
    n: u64,
    frame: Arc<CoordinateFrame>,
    ech: CompactEchelon,
    families: Vec<GeneratorFamily>,
}

impl HitSpace {
    pub fn vars(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> u64 {
        self.n
    }

    pub fn frame(&self) -> &Arc<CoordinateFrame> {
        &self.frame
    }

    pub fn echelon(&self) -> &CompactEchelon {
        &self.ech
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    /// Dimension of the quotient in this degree.
    pub fn codim(&self) -> usize {
        self.ech.codim()
    }

    /// Which `Sq^{2^i}` images were echelonized, largest square first.
    pub fn families(&self) -> &[GeneratorFamily] {
        &self.families
    }
}

/// True when the binary-digit-sum criterion forces the quotient in degree
/// `n` to vanish for `m` variables. An optimization filter only; the
/// linear-algebra path never consults it.
pub fn wood_trivial(m: usize, n: u64) -> bool {
    (n + m as u64).count_ones() > m as u32
}

/// Echelonize the images of all `Sq^{2^i}` landing in degree `n`.
pub fn hit_space(m: usize, n: u64, opts: &HitOptions) -> Result<HitSpace> {
    assert!(m >= 1, "at least one variable");
    let frame = CoordinateFrame::new(m, n);
    let mut squares: Vec<u64> = Vec::new();
    let mut k = 1u64;
    while k <= n {
        squares.push(k);
        k <<= 1;
    }
    squares.reverse(); // fewest generators first

    let mut families = Vec::with_capacity(squares.len());
    if frame.len() <= opts.dense_frame_limit {
        let mut space = EchelonSpace::new(frame.len());
        for &k in &squares {
            let gens = family_generators(&frame, k);
            families.push(GeneratorFamily {
                square: k,
                source_degree: n - k,
                generators: gens.len(),
            });
            for (count, g) in gens.into_iter().enumerate() {
                if count % 1024 == 0 {
                    check_deadline(opts, frame.len())?;
                }
                space.insert(BitVec::from_ones(
                    frame.len(),
                    g.into_iter().map(|c| c as usize),
                ));
            }
        }
        let ech = CompactEchelon::from_echelon(&space);
        return Ok(HitSpace { m, n, frame, ech, families });
    }

    // streamed path for large frames
    let mut gens: Vec<Vec<u32>> = Vec::new();
    for &k in &squares {
        check_deadline(opts, frame.len())?;
        let batch = family_generators(&frame, k);
        families.push(GeneratorFamily {
            square: k,
            source_degree: n - k,
            generators: batch.len(),
        });
        gens.extend(batch);
    }
    let stream = StreamOptions {
        mem_ceiling_bytes: opts.mem_ceiling_bytes,
        deadline: opts.deadline,
        secondary_cap: opts.secondary_cap,
        chunk: opts.chunk,
        checkpoint_every: opts.checkpoint_every,
    };
    let ech = match opts.checkpoint_dir.as_ref() {
        None => echelonize_sparse(frame.len(), &gens, &stream, None)?,
        Some(dir) => {
            let key = frame.hash();
            let mut store = FileCheckpoint::new(dir.clone(), &key);
            let out = echelonize_sparse(frame.len(), &gens, &stream, Some((&mut store, key)))?;
            store.remove();
            out
        }
    };
    Ok(HitSpace { m, n, frame, ech, families })
}

fn check_deadline(opts: &HitOptions, frame: usize) -> Result<()> {
    match opts.deadline {
        Some(d) if Instant::now() > d => Err(Error::DeadlineExceeded { frame }),
        _ => Ok(()),
    }
}

/// All `Sq^k(Y)` for `Y` over the source frame, as ascending coordinate
/// lists in the target frame. Source monomials are processed in frame order.
fn family_generators(frame: &Arc<CoordinateFrame>, k: u64) -> Vec<Vec<u32>> {
    let m = frame.vars();
    let source = CoordinateFrame::new(m, frame.degree() - k);
    (0..source.len())
        .into_par_iter()
        .map(|i| {
            let mut coords = Vec::new();
            let mut scratch = vec![0u64; m];
            for_each_sq_term(k, source.exponents_of(i), &mut scratch, &mut |t| {
                coords.push(frame.index_of(t).expect("image term lives in the frame"));
            });
            coords.sort_unstable();
            coords
        })
        .collect()
}

/// File-backed checkpoint store under a cache directory.
struct FileCheckpoint {
    path: PathBuf,
}

impl FileCheckpoint {
    fn new(dir: PathBuf, key: &[u8; 32]) -> Self {
        let name: String = key.iter().map(|b| format!("{b:02x}")).collect();
        FileCheckpoint {
            path: dir.join(format!("{name}.ckpt")),
        }
    }

    fn remove(&self) {
        let _ = std::fs::remove_file(&self.path);
    }
}

impl CheckpointStore for FileCheckpoint {
    fn reader(&mut self) -> Option<Box<dyn std::io::Read>> {
        std::fs::File::open(&self.path)
            .ok()
            .map(|f| Box::new(std::io::BufReader::new(f)) as Box<dyn std::io::Read>)
    }

    fn writer(&mut self) -> std::io::Result<Box<dyn std::io::Write + '_>> {
        if let Some(parent) = self.path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let f = std::fs::File::create(&self.path)?;
        Ok(Box::new(std::io::BufWriter::new(f)))
    }
}

/// One weight-graded piece of an admissible basis.
#[derive(Clone, Debug)]
pub struct OmegaPiece {
    pub omega: WeightVector,
    pub dim: usize,
    /// admissibles with at least one zero exponent
    pub dim_zero: usize,
    /// admissibles with full support
    pub dim_positive: usize,
    /// contiguous range into the admissible list
    pub range: Range<usize>,
}

/// Admissible monomials of one `(m, n)`, grouped by weight vector, together
/// with the hit echelon used for normal forms.
#[derive(Debug)]
pub struct QBasis {
    hit: HitSpace,
    admissibles: Vec<u32>,
    pieces: Vec<OmegaPiece>,
}

/// Compute the admissible monomial basis of the quotient in degree `n`.
pub fn admissible_basis(m: usize, n: u64, opts: &HitOptions) -> Result<QBasis> {
    let hit = hit_space(m, n, opts)?;
    Ok(QBasis::from_hit(hit))
}

impl QBasis {
    pub fn from_hit(hit: HitSpace) -> QBasis {
        let admissibles: Vec<u32> = hit.ech.nonpivots().to_vec();
        let frame = hit.frame();
        let mut pieces: Vec<OmegaPiece> = Vec::new();
        let mut start = 0;
        while start < admissibles.len() {
            let omega = frame.weight_of(admissibles[start] as usize);
            let mut end = start;
            let mut positive = 0;
            while end < admissibles.len() {
                let c = admissibles[end] as usize;
                if frame.weight_of(c) != omega {
                    break;
                }
                if frame.full_support(c) {
                    positive += 1;
                }
                end += 1;
            }
            pieces.push(OmegaPiece {
                omega,
                dim: end - start,
                dim_zero: end - start - positive,
                dim_positive: positive,
                range: start..end,
            });
            start = end;
        }
        QBasis { hit, admissibles, pieces }
    }

    pub fn vars(&self) -> usize {
        self.hit.vars()
    }

    pub fn degree(&self) -> u64 {
        self.hit.degree()
    }

    pub fn dim(&self) -> usize {
        self.admissibles.len()
    }

    pub fn hit(&self) -> &HitSpace {
        &self.hit
    }

    pub fn frame(&self) -> &Arc<CoordinateFrame> {
        self.hit.frame()
    }

    /// Frame coordinates of the admissibles, ascending (largest monomial
    /// first); this is also the coordinate order of normal forms.
    pub fn admissible_coords(&self) -> &[u32] {
        &self.admissibles
    }

    pub fn admissible_monomial(&self, j: usize) -> crate::monomial::Monomial {
        self.hit.frame().monomial(self.admissibles[j] as usize)
    }

    /// Weight pieces in descending weight order; their ranges partition the
    /// admissible list.
    pub fn omega_pieces(&self) -> &[OmegaPiece] {
        &self.pieces
    }

    pub fn piece_of(&self, omega: &WeightVector) -> Option<&OmegaPiece> {
        self.pieces.iter().find(|p| &p.omega == omega)
    }

    /// Counts of admissibles with a zero exponent vs full support.
    pub fn zero_positive_split(&self) -> (usize, usize) {
        let zero: usize = self.pieces.iter().map(|p| p.dim_zero).sum();
        (zero, self.dim() - zero)
    }

    /// Coordinates of `p` in the admissible basis, modulo the hit space.
    pub fn normal_form(&self, p: &Polynomial) -> Result<BitVec> {
        if p.vars() != self.vars() {
            return Err(Error::VariableMismatch {
                left: self.vars(),
                right: p.vars(),
            });
        }
        if let Some(d) = p.degree() {
            if d != self.degree() {
                return Err(Error::DegreeMismatch {
                    left: self.degree(),
                    right: d,
                });
            }
        }
        let frame = self.hit.frame();
        let coords = p
            .terms()
            .iter()
            .map(|t| frame.index_of(t.exponents()).expect("term in frame"));
        Ok(self.hit.ech.reduce_coords(coords))
    }

    /// Normal form of a sum of frame coordinates.
    pub fn normal_form_coords(&self, coords: impl IntoIterator<Item = u32>) -> BitVec {
        self.hit.ech.reduce_coords(coords)
    }
}

/// Per-weight quotient dimensions computed the literal way, for
/// cross-validation: restrict the hit space to the down-set of monomials of
/// weight at most `omega` and quotient by the strictly-lower part.
///
/// The intersection dimension is found by a fresh elimination on the hit
/// basis restricted to the forbidden (higher-order) coordinates, independent
/// of the pivot bookkeeping of the fast path.
pub fn omega_dims_by_quotient(hit: &HitSpace) -> Vec<(WeightVector, usize)> {
    let frame = hit.frame();
    let d = frame.len();
    // weight runs over the frame, descending
    let mut runs: Vec<(WeightVector, Range<usize>)> = Vec::new();
    let mut start = 0;
    while start < d {
        let omega = frame.weight_of(start);
        let mut end = start;
        while end < d && frame.weight_of(end) == omega {
            end += 1;
        }
        runs.push((omega.clone(), start..end));
        start = end;
    }
    let rows: Vec<BitVec> = (0..hit.rank()).map(|k| hit.ech.expand_row(k)).collect();
    let mut out = Vec::with_capacity(runs.len());
    for (omega, range) in &runs {
        // dim(H ∩ span(coords >= start)) = rank(H) - rank(H restricted to
        // coords < start); same with end. The piece dimension is the count
        // of weight-omega monomials minus the pivots the intersection gains.
        let inter = |cut: usize| -> usize {
            if cut == 0 {
                return rows.len();
            }
            let mut restricted = EchelonSpace::new(cut);
            for r in &rows {
                restricted.insert(BitVec::from_ones(
                    cut,
                    r.iter_ones().take_while(|&c| c < cut),
                ));
            }
            rows.len() - restricted.rank()
        };
        let gained = inter(range.start) - inter(range.end);
        out.push((omega.clone(), (range.end - range.start) - gained));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_variable_degree_two_is_all_hit() {
        let hit = hit_space(1, 2, &HitOptions::default()).unwrap();
        assert_eq!(hit.rank(), 1);
        assert_eq!(hit.codim(), 0);
    }

    #[test]
    fn degree_zero_has_the_constant_basis() {
        let q = admissible_basis(3, 0, &HitOptions::default()).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(q.admissible_monomial(0).exponents(), &[0, 0, 0]);
        assert_eq!(q.omega_pieces().len(), 1);
        assert!(q.omega_pieces()[0].omega.is_empty());
        assert_eq!(q.zero_positive_split(), (1, 0));
    }

    #[test]
    fn one_variable_split_in_degree_one() {
        let q = admissible_basis(1, 1, &HitOptions::default()).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(q.zero_positive_split(), (0, 1));
    }

    #[test]
    fn one_variable_quotient_survives_exactly_at_spikes() {
        for n in 0..=33u64 {
            let hit = hit_space(1, n, &HitOptions::default()).unwrap();
            let expected = if (n + 1).is_power_of_two() { 1 } else { 0 };
            assert_eq!(hit.codim(), expected, "n = {n}");
        }
    }

    #[test]
    fn dense_and_streamed_paths_agree() {
        for (m, n) in [(2usize, 12u64), (3, 9), (3, 10)] {
            let dense = hit_space(m, n, &HitOptions::default()).unwrap();
            let streamed = hit_space(
                m,
                n,
                &HitOptions {
                    dense_frame_limit: 0,
                    secondary_cap: 3,
                    chunk: 7,
                    ..HitOptions::default()
                },
            )
            .unwrap();
            assert_eq!(dense.echelon(), streamed.echelon(), "({m},{n})");
        }
    }

    #[test]
    fn normal_form_fixes_admissibles_and_kills_hit_elements() {
        let q = admissible_basis(2, 6, &HitOptions::default()).unwrap();
        for j in 0..q.dim() {
            let x = q.admissible_monomial(j);
            let nf = q
                .normal_form(&Polynomial::from_monomial(x))
                .unwrap();
            assert_eq!(nf.iter_ones().collect::<Vec<_>>(), vec![j]);
        }
        // an explicit hit element: Sq^1 of anything in degree 5
        let y = crate::monomial::Monomial::new(vec![3, 2]);
        let img = crate::steenrod::sq_monomial(1, &y);
        assert!(q.normal_form(&img).unwrap().is_zero());
    }

    #[test]
    fn omega_sum_rule_and_quotient_cross_check() {
        for (m, n) in [(2usize, 9u64), (3, 7), (3, 11)] {
            let q = admissible_basis(m, n, &HitOptions::default()).unwrap();
            let total: usize = q.omega_pieces().iter().map(|p| p.dim).sum();
            assert_eq!(total, q.dim());
            let slow = omega_dims_by_quotient(q.hit());
            for (omega, dim) in &slow {
                let fast = q.piece_of(omega).map_or(0, |p| p.dim);
                assert_eq!(fast, *dim, "({m},{n}) omega {omega}");
            }
        }
    }

    #[test]
    fn wood_filter_agrees_with_linear_algebra() {
        for m in 1..=3usize {
            for n in 0..=20u64 {
                let hit = hit_space(m, n, &HitOptions::default()).unwrap();
                if wood_trivial(m, n) {
                    assert_eq!(hit.codim(), 0, "({m},{n})");
                }
                // the filter matches the spike criterion exactly
                assert_eq!(wood_trivial(m, n), crate::xi::xi(n) > m as u32);
            }
        }
    }

    #[test]
    fn families_are_recorded_largest_square_first() {
        let hit = hit_space(2, 12, &HitOptions::default()).unwrap();
        let squares: Vec<u64> = hit.families().iter().map(|f| f.square).collect();
        assert_eq!(squares, vec![8, 4, 2, 1]);
        for f in hit.families() {
            assert_eq!(f.source_degree, 12 - f.square);
        }
    }
}

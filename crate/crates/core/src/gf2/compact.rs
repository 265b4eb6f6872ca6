//! Frozen reduced echelon spaces with tails stored over the non-pivot
//! coordinates only.
//!
//! In fully reduced form a row is its pivot plus a combination of non-pivot
//! coordinates, so for spaces of small codimension this representation is
//! dramatically smaller than full-width rows. It supports exactly what the
//! consumers need: membership, normal forms and the pivot/non-pivot split.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::gf2::bitvec::{words_for, BitVec};
use crate::gf2::echelon::EchelonSpace;

const MAGIC: &[u8; 14] = b"SQ2HIT-ECH v1\n";
const NO_POS: u32 = u32::MAX;

/// Identifies the frame an echelon space was computed over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchHeader {
    pub m: u32,
    pub n: u64,
    pub frame_hash: [u8; 32],
}

/// A reduced row echelon subspace, immutable, pivot = leading coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactEchelon {
    dim: usize,
    /// ascending coordinate indices
    pivots: Vec<u32>,
    nonpivots: Vec<u32>,
    /// coordinate -> position in `nonpivots`, or NO_POS for pivots
    nonpivot_pos: Vec<u32>,
    /// coordinate -> row index, or NO_POS for non-pivots
    row_of_pivot: Vec<u32>,
    tail_words: usize,
    /// rank x tail_words, row k belongs to pivots[k]; bit p refers to
    /// nonpivots[p]
    tails: Vec<u64>,
}

impl CompactEchelon {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn codim(&self) -> usize {
        self.nonpivots.len()
    }

    pub fn pivots(&self) -> &[u32] {
        &self.pivots
    }

    pub fn nonpivots(&self) -> &[u32] {
        &self.nonpivots
    }

    pub fn is_pivot(&self, coord: usize) -> bool {
        self.row_of_pivot[coord] != NO_POS
    }

    /// Position of a coordinate in the non-pivot (quotient) ordering.
    pub fn nonpivot_position(&self, coord: usize) -> Option<usize> {
        match self.nonpivot_pos[coord] {
            NO_POS => None,
            p => Some(p as usize),
        }
    }

    fn tail(&self, row: usize) -> &[u64] {
        &self.tails[row * self.tail_words..(row + 1) * self.tail_words]
    }

    /// Normal form of a sum of coordinates: the coefficients over the
    /// non-pivot coordinates of the unique representative mod the row space.
    /// Linear in the input; zero exactly for members of the span.
    pub fn reduce_coords(&self, coords: impl IntoIterator<Item = u32>) -> BitVec {
        let mut out = vec![0u64; self.tail_words];
        for c in coords {
            let c = c as usize;
            assert!(c < self.dim, "coordinate out of range");
            match self.row_of_pivot[c] {
                NO_POS => {
                    let p = self.nonpivot_pos[c] as usize;
                    out[p >> 6] ^= 1 << (p & 63);
                }
                row => {
                    for (a, b) in out.iter_mut().zip(self.tail(row as usize)) {
                        *a ^= b;
                    }
                }
            }
        }
        BitVec::from_words(self.nonpivots.len(), out)
    }

    /// Normal form of a full-width vector over the frame.
    pub fn reduce_dense(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.dim, "vector does not live in this frame");
        self.reduce_coords(v.iter_ones().map(|i| i as u32))
    }

    pub fn contains_coords(&self, coords: impl IntoIterator<Item = u32>) -> bool {
        self.reduce_coords(coords).is_zero()
    }

    /// Expand a stored row back to a full-width vector (pivot + tail).
    pub fn expand_row(&self, row: usize) -> BitVec {
        let mut v = BitVec::zeros(self.dim);
        v.set(self.pivots[row] as usize);
        let tail = self.tail(row);
        for (w, &word) in tail.iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                let p = (w << 6) + rest.trailing_zeros() as usize;
                v.set(self.nonpivots[p] as usize);
                rest &= rest - 1;
            }
        }
        v
    }

    pub fn from_parts(
        dim: usize,
        pivots: Vec<u32>,
        tails: Vec<u64>,
    ) -> CompactEchelon {
        let mut row_of_pivot = vec![NO_POS; dim];
        for (k, &p) in pivots.iter().enumerate() {
            debug_assert!(k == 0 || pivots[k - 1] < p, "pivots must ascend");
            row_of_pivot[p as usize] = k as u32;
        }
        let mut nonpivots = Vec::with_capacity(dim - pivots.len());
        let mut nonpivot_pos = vec![NO_POS; dim];
        for c in 0..dim {
            if row_of_pivot[c] == NO_POS {
                nonpivot_pos[c] = nonpivots.len() as u32;
                nonpivots.push(c as u32);
            }
        }
        let tail_words = words_for(nonpivots.len());
        assert_eq!(tails.len(), pivots.len() * tail_words);
        CompactEchelon {
            dim,
            pivots,
            nonpivots,
            nonpivot_pos,
            row_of_pivot,
            tail_words,
            tails,
        }
    }

    pub fn from_echelon(space: &EchelonSpace) -> CompactEchelon {
        let dim = space.dim();
        let pivots: Vec<u32> = space.pivots().iter().map(|&p| p as u32).collect();
        let nonpivots = space.nonpivots();
        let mut pos = vec![NO_POS; dim];
        for (k, &c) in nonpivots.iter().enumerate() {
            pos[c] = k as u32;
        }
        let tail_words = words_for(nonpivots.len());
        let mut tails = vec![0u64; pivots.len() * tail_words];
        for (k, &p) in pivots.iter().enumerate() {
            let row = space
                .row_with_pivot(p as usize)
                .expect("pivot row exists");
            let tail = &mut tails[k * tail_words..(k + 1) * tail_words];
            for c in row.iter_ones() {
                if c != p as usize {
                    let q = pos[c] as usize;
                    debug_assert_ne!(pos[c], NO_POS, "reduced row hits only non-pivots");
                    tail[q >> 6] ^= 1 << (q & 63);
                }
            }
        }
        CompactEchelon::from_parts(dim, pivots, tails)
    }

    /// Serialize with a versioned magic string and frame identification.
    pub fn write_to(&self, header: &EchHeader, mut w: impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&header.m.to_le_bytes())?;
        w.write_all(&header.n.to_le_bytes())?;
        w.write_all(&header.frame_hash)?;
        w.write_all(&(self.dim as u64).to_le_bytes())?;
        w.write_all(&(self.pivots.len() as u64).to_le_bytes())?;
        for &p in &self.pivots {
            w.write_all(&p.to_le_bytes())?;
        }
        for &word in &self.tails {
            w.write_all(&word.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<(EchHeader, CompactEchelon)> {
        let mut magic = [0u8; 14];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::CorruptArtifact("bad magic string".into()));
        }
        let mut b4 = [0u8; 4];
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b4)?;
        let m = u32::from_le_bytes(b4);
        r.read_exact(&mut b8)?;
        let n = u64::from_le_bytes(b8);
        let mut frame_hash = [0u8; 32];
        r.read_exact(&mut frame_hash)?;
        r.read_exact(&mut b8)?;
        let dim = u64::from_le_bytes(b8) as usize;
        r.read_exact(&mut b8)?;
        let rank = u64::from_le_bytes(b8) as usize;
        if rank > dim {
            return Err(Error::CorruptArtifact("rank exceeds dimension".into()));
        }
        let mut pivots = Vec::with_capacity(rank);
        for _ in 0..rank {
            r.read_exact(&mut b4)?;
            let p = u32::from_le_bytes(b4);
            if p as usize >= dim || pivots.last().is_some_and(|&q| q >= p) {
                return Err(Error::CorruptArtifact("pivot list not ascending".into()));
            }
            pivots.push(p);
        }
        let tail_words = words_for(dim - rank);
        let mut tails = vec![0u64; rank * tail_words];
        for word in tails.iter_mut() {
            r.read_exact(&mut b8)?;
            *word = u64::from_le_bytes(b8);
        }
        Ok((
            EchHeader { m, n, frame_hash },
            CompactEchelon::from_parts(dim, pivots, tails),
        ))
    }
}

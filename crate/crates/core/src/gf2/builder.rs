//! Streamed echelonization of very large sparse generator sets.
//!
//! Frames at the top of the desk-scale range (~1.5e5 coordinates) with
//! ~4.5e5 generators cannot afford full-width reduced rows during
//! construction. This builder exploits two facts about hit-space generator
//! streams: generators are sparse, and the final space has small
//! codimension, so fully reduced tails only touch few coordinates.
//!
//! The algorithm:
//!
//! 1. Bucket generators by leading coordinate. One representative per
//!    distinct lead is an echelon set for free (distinct leads are
//!    independent); the rest become "pending".
//! 2. Turn the representatives into fully reduced rows stored over the
//!    complement of their leads only. Processing leads in descending
//!    coordinate order means every tail reference hits an already-reduced
//!    row, so no reduction cascades.
//! 3. Reduce each pending generator against the primary rows (sparse-driven)
//!    and fold survivors into a small secondary echelon. When the secondary
//!    grows past a cap, its pivots are merged into the primary store and all
//!    rows are re-packed over the shrunken coordinate set.
//!
//! The produced pivot set is canonical (it only depends on the span), and
//! the final reduced rows are the canonical RREF tails, so results are
//! independent of chunking and thread count.

use std::io::{Read, Write};
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::bitvec::words_for;
use crate::gf2::compact::CompactEchelon;

const NO_POS: u32 = u32::MAX;
const CKPT_MAGIC: &[u8; 15] = b"SQ2HIT-CKPT v1\n";

/// Budget and tuning knobs for a streamed echelonization.
#[derive(Clone, Debug)]
pub struct StreamOptions {
    pub mem_ceiling_bytes: Option<u64>,
    pub deadline: Option<Instant>,
    /// secondary rows accumulated before a re-pack epoch
    pub secondary_cap: usize,
    /// pending generators reduced per parallel chunk
    pub chunk: usize,
    /// checkpoint after this many pending generators (when a store is given)
    pub checkpoint_every: u64,
}

impl Default for StreamOptions {
    fn default() -> Self {
        StreamOptions {
            mem_ceiling_bytes: None,
            deadline: None,
            secondary_cap: 1024,
            chunk: 4096,
            checkpoint_every: 100_000,
        }
    }
}

/// Persistence hook for resumable long runs.
pub trait CheckpointStore {
    /// Open the previously saved state, if any.
    fn reader(&mut self) -> Option<Box<dyn Read>>;
    /// Open a writer for a fresh state snapshot (replacing the old one).
    fn writer(&mut self) -> std::io::Result<Box<dyn Write + '_>>;
}

struct BigEchelon {
    dim: usize,
    /// ascending coordinate ids still unclaimed by a pivot at epoch start
    active: Vec<u32>,
    /// coordinate -> position in `active` (valid for active coords only)
    pos_of: Vec<u32>,
    width: usize,
    /// fully reduced rows, tails over active positions; pivot bit implicit
    rows: Vec<Vec<u64>>,
    pivot_of_row: Vec<u32>,
    /// coordinate -> row index
    row_of_coord: Vec<u32>,
    /// forward-reduced epoch rows over active positions, own pivot bit set
    sec_rows: Vec<Vec<u64>>,
    sec_pivot_pos: Vec<u32>,
    /// active position -> secondary row index
    sec_of_pos: Vec<u32>,
}

impl BigEchelon {
    fn first_one_from(bits: &[u64], start: usize, len: usize) -> Option<usize> {
        if start >= len {
            return None;
        }
        let mut w = start >> 6;
        let mut cur = bits[w] & (u64::MAX << (start & 63));
        loop {
            if cur != 0 {
                let i = (w << 6) + cur.trailing_zeros() as usize;
                return (i < len).then_some(i);
            }
            w += 1;
            if w == bits.len() {
                return None;
            }
            cur = bits[w];
        }
    }

    #[inline]
    fn xor_into(dst: &mut [u64], src: &[u64]) {
        for (a, b) in dst.iter_mut().zip(src) {
            *a ^= b;
        }
    }

    /// Residue of a sparse generator against the primary rows.
    fn primary_residue(&self, gen: &[u32], out: &mut Vec<u64>) {
        out.clear();
        out.resize(self.width, 0);
        for &c in gen {
            match self.row_of_coord[c as usize] {
                NO_POS => {
                    let p = self.pos_of[c as usize] as usize;
                    out[p >> 6] ^= 1 << (p & 63);
                }
                k => Self::xor_into(out, &self.rows[k as usize]),
            }
        }
    }

    /// Forward-reduce a residue against the secondary echelon; returns the
    /// leading position of the (fully scanned) survivor.
    fn secondary_scan(&self, bits: &mut [u64]) -> Option<usize> {
        let nact = self.active.len();
        let mut lead = None;
        let mut from = 0;
        while let Some(p) = Self::first_one_from(bits, from, nact) {
            match self.sec_of_pos[p] {
                NO_POS => {
                    lead.get_or_insert(p);
                    from = p + 1;
                }
                k => {
                    Self::xor_into(bits, &self.sec_rows[k as usize]);
                    from = p + 1;
                }
            }
        }
        lead
    }

    fn insert_secondary(&mut self, bits: Vec<u64>, lead: usize) {
        self.sec_of_pos[lead] = self.sec_rows.len() as u32;
        self.sec_pivot_pos.push(lead as u32);
        self.sec_rows.push(bits);
    }

    fn estimate_bytes(&self) -> u64 {
        let row_bytes = (self.width * 8 + 40) as u64;
        (self.rows.len() + self.sec_rows.len()) as u64 * row_bytes + self.dim as u64 * 12
    }

    /// Fold the secondary pivots into the primary store and re-pack every
    /// row over the shrunken active set.
    fn recompress(&mut self) {
        if self.sec_rows.is_empty() {
            return;
        }
        let nact = self.active.len();
        // order secondary rows by pivot position, then clear later pivots
        // out of earlier tails (descending order leaves nothing to cascade)
        let mut order: Vec<usize> = (0..self.sec_rows.len()).collect();
        order.sort_unstable_by_key(|&k| self.sec_pivot_pos[k]);
        for &k in order.iter().rev() {
            let pivot = self.sec_pivot_pos[k] as usize;
            let mut from = pivot + 1;
            loop {
                let mut row = std::mem::take(&mut self.sec_rows[k]);
                let Some(q) = Self::first_one_from(&row, from, nact) else {
                    self.sec_rows[k] = row;
                    break;
                };
                match self.sec_of_pos[q] {
                    NO_POS => {
                        self.sec_rows[k] = row;
                        from = q + 1;
                    }
                    j => {
                        Self::xor_into(&mut row, &self.sec_rows[j as usize]);
                        self.sec_rows[k] = row;
                        from = q + 1;
                    }
                }
            }
        }
        // clear secondary pivot bits out of the primary rows
        let mut mask = vec![0u64; self.width];
        for &p in &self.sec_pivot_pos {
            mask[(p >> 6) as usize] |= 1 << (p & 63);
        }
        for row_idx in 0..self.rows.len() {
            for w in 0..self.width {
                let mut hits = self.rows[row_idx][w] & mask[w];
                while hits != 0 {
                    let p = (w << 6) + hits.trailing_zeros() as usize;
                    let j = self.sec_of_pos[p] as usize;
                    let sec = std::mem::take(&mut self.sec_rows[j]);
                    Self::xor_into(&mut self.rows[row_idx], &sec);
                    self.sec_rows[j] = sec;
                    hits = self.rows[row_idx][w] & mask[w];
                }
            }
        }
        // shrink the active set and re-pack all rows over it
        let mut new_pos = vec![NO_POS; nact];
        let mut new_active = Vec::with_capacity(nact - self.sec_rows.len());
        for (p, &coord) in self.active.iter().enumerate() {
            if self.sec_of_pos[p] == NO_POS {
                new_pos[p] = new_active.len() as u32;
                new_active.push(coord);
            }
        }
        let new_width = words_for(new_active.len());
        let repack = |bits: &[u64], skip: Option<usize>| -> Vec<u64> {
            let mut out = vec![0u64; new_width];
            for (w, &word) in bits.iter().enumerate() {
                let mut rest = word;
                while rest != 0 {
                    let p = (w << 6) + rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    if Some(p) == skip {
                        continue;
                    }
                    let q = new_pos[p] as usize;
                    debug_assert_ne!(new_pos[p], NO_POS);
                    out[q >> 6] |= 1 << (q & 63);
                }
            }
            out
        };
        for row in self.rows.iter_mut() {
            *row = repack(row, None);
        }
        for &k in &order {
            let pivot_pos = self.sec_pivot_pos[k] as usize;
            let coord = self.active[pivot_pos];
            let packed = repack(&self.sec_rows[k], Some(pivot_pos));
            self.row_of_coord[coord as usize] = self.rows.len() as u32;
            self.pivot_of_row.push(coord);
            self.rows.push(packed);
        }
        for (p, &coord) in new_active.iter().enumerate() {
            self.pos_of[coord as usize] = p as u32;
        }
        self.active = new_active;
        self.width = new_width;
        self.sec_rows.clear();
        self.sec_pivot_pos.clear();
        self.sec_of_pos = vec![NO_POS; self.active.len()];
    }

    fn into_compact(mut self) -> CompactEchelon {
        self.recompress();
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_unstable_by_key(|&k| self.pivot_of_row[k]);
        let tail_words = words_for(self.active.len());
        debug_assert_eq!(tail_words, self.width);
        let mut pivots = Vec::with_capacity(order.len());
        let mut tails = Vec::with_capacity(order.len() * tail_words);
        for &k in &order {
            pivots.push(self.pivot_of_row[k]);
            tails.extend_from_slice(&self.rows[k]);
        }
        CompactEchelon::from_parts(self.dim, pivots, tails)
    }
}

/// Echelonize a stream of sparse generators over a frame of `dim`
/// coordinates. Each generator lists its set coordinates in ascending order.
///
/// Returns the canonical reduced echelon form of the span. Budget overruns
/// surface as resource errors; with a checkpoint store attached, a later run
/// with the same `state_key` resumes where the previous one stopped.
pub fn echelonize_sparse(
    dim: usize,
    gens: &[Vec<u32>],
    opts: &StreamOptions,
    mut checkpoint: Option<(&mut dyn CheckpointStore, [u8; 32])>,
) -> Result<CompactEchelon> {
    // bucket by leading coordinate
    let mut rep_of_lead = vec![NO_POS; dim];
    let mut pending: Vec<u32> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        debug_assert!(g.windows(2).all(|w| w[0] < w[1]), "coords must ascend");
        match g.first() {
            None => continue, // zero generator
            Some(&lead) => {
                if rep_of_lead[lead as usize] == NO_POS {
                    rep_of_lead[lead as usize] = i as u32;
                } else {
                    pending.push(i as u32);
                }
            }
        }
    }

    let mut cursor = 0u64;
    let mut state = match checkpoint
        .as_mut()
        .and_then(|(store, key)| try_load_state(*store, key, dim))
    {
        Some((st, cur)) => {
            cursor = cur;
            st
        }
        None => build_primary(dim, gens, &rep_of_lead, opts)?,
    };

    let mut since_checkpoint = 0u64;
    let mut residue: Vec<Vec<u64>> = Vec::new();
    while (cursor as usize) < pending.len() {
        if let Some(deadline) = opts.deadline {
            if Instant::now() > deadline {
                return Err(Error::DeadlineExceeded { frame: dim });
            }
        }
        if let Some(ceiling) = opts.mem_ceiling_bytes {
            if state.estimate_bytes() > ceiling {
                return Err(Error::MemoryCeiling {
                    frame: dim,
                    needed_gb: state.estimate_bytes() as f64 / (1u64 << 30) as f64,
                    ceiling_gb: ceiling as f64 / (1u64 << 30) as f64,
                });
            }
        }
        let chunk_end = (cursor as usize + opts.chunk).min(pending.len());
        let chunk = &pending[cursor as usize..chunk_end];
        // reduce the chunk against the frozen state in parallel, then fold
        // the survivors in sequentially (late survivors may need another
        // pass against rows the fold just added)
        residue.clear();
        chunk
            .par_iter()
            .map(|&gi| {
                let mut bits = Vec::new();
                state.primary_residue(&gens[gi as usize], &mut bits);
                match state.secondary_scan(&mut bits) {
                    Some(_) => bits,
                    None => Vec::new(),
                }
            })
            .collect_into_vec(&mut residue);
        // residues from this chunk live in the current epoch's position
        // space, so re-packing must wait for the chunk boundary
        for bits in residue.drain(..) {
            if bits.is_empty() {
                continue;
            }
            let mut bits = bits;
            if let Some(lead) = state.secondary_scan(&mut bits) {
                state.insert_secondary(bits, lead);
            }
        }
        if state.sec_rows.len() >= opts.secondary_cap {
            state.recompress();
        }
        cursor = chunk_end as u64;
        since_checkpoint += chunk.len() as u64;
        if since_checkpoint >= opts.checkpoint_every {
            since_checkpoint = 0;
            if let Some((store, key)) = checkpoint.as_mut() {
                state.recompress();
                save_state(*store, key, &state, cursor)?;
            }
        }
    }
    Ok(state.into_compact())
}

fn build_primary(
    dim: usize,
    gens: &[Vec<u32>],
    rep_of_lead: &[u32],
    opts: &StreamOptions,
) -> Result<BigEchelon> {
    let mut pivot_coords: Vec<u32> = (0..dim as u32)
        .filter(|&c| rep_of_lead[c as usize] != NO_POS)
        .collect();
    let mut pos_of = vec![NO_POS; dim];
    let mut active = Vec::with_capacity(dim - pivot_coords.len());
    for c in 0..dim as u32 {
        if rep_of_lead[c as usize] == NO_POS {
            pos_of[c as usize] = active.len() as u32;
            active.push(c);
        }
    }
    let width = words_for(active.len());
    if let Some(ceiling) = opts.mem_ceiling_bytes {
        let projected = pivot_coords.len() as u64 * (width * 8 + 40) as u64;
        if projected > ceiling {
            return Err(Error::MemoryCeiling {
                frame: dim,
                needed_gb: projected as f64 / (1u64 << 30) as f64,
                ceiling_gb: ceiling as f64 / (1u64 << 30) as f64,
            });
        }
    }
    let mut state = BigEchelon {
        dim,
        active,
        pos_of,
        width,
        rows: Vec::with_capacity(pivot_coords.len()),
        pivot_of_row: Vec::with_capacity(pivot_coords.len()),
        row_of_coord: vec![NO_POS; dim],
        sec_rows: Vec::new(),
        sec_pivot_pos: Vec::new(),
        sec_of_pos: vec![NO_POS; 0],
    };
    state.sec_of_pos = vec![NO_POS; state.active.len()];
    // descending leads: every tail reference is an already-reduced row
    pivot_coords.sort_unstable_by(|a, b| b.cmp(a));
    for &p in &pivot_coords {
        let gen = &gens[rep_of_lead[p as usize] as usize];
        debug_assert_eq!(gen[0], p);
        let mut bits = vec![0u64; state.width];
        for &c in &gen[1..] {
            match state.row_of_coord[c as usize] {
                NO_POS => {
                    let q = state.pos_of[c as usize] as usize;
                    bits[q >> 6] ^= 1 << (q & 63);
                }
                k => BigEchelon::xor_into(&mut bits, &state.rows[k as usize]),
            }
        }
        state.row_of_coord[p as usize] = state.rows.len() as u32;
        state.pivot_of_row.push(p);
        state.rows.push(bits);
    }
    Ok(state)
}

fn save_state(
    store: &mut dyn CheckpointStore,
    key: &[u8; 32],
    state: &BigEchelon,
    cursor: u64,
) -> Result<()> {
    debug_assert!(state.sec_rows.is_empty(), "checkpoint after recompress");
    let mut w = store.writer()?;
    w.write_all(CKPT_MAGIC)?;
    w.write_all(key)?;
    w.write_all(&(state.dim as u64).to_le_bytes())?;
    w.write_all(&cursor.to_le_bytes())?;
    w.write_all(&(state.active.len() as u64).to_le_bytes())?;
    for &c in &state.active {
        w.write_all(&c.to_le_bytes())?;
    }
    w.write_all(&(state.rows.len() as u64).to_le_bytes())?;
    for (k, row) in state.rows.iter().enumerate() {
        w.write_all(&state.pivot_of_row[k].to_le_bytes())?;
        for &word in row {
            w.write_all(&word.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn try_load_state(
    store: &mut dyn CheckpointStore,
    key: &[u8; 32],
    dim: usize,
) -> Option<(BigEchelon, u64)> {
    let mut r = store.reader()?;
    let mut magic = [0u8; 15];
    r.read_exact(&mut magic).ok()?;
    if &magic != CKPT_MAGIC {
        return None;
    }
    let mut stored_key = [0u8; 32];
    r.read_exact(&mut stored_key).ok()?;
    if &stored_key != key {
        return None;
    }
    let mut b8 = [0u8; 8];
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b8).ok()?;
    if u64::from_le_bytes(b8) as usize != dim {
        return None;
    }
    r.read_exact(&mut b8).ok()?;
    let cursor = u64::from_le_bytes(b8);
    r.read_exact(&mut b8).ok()?;
    let nact = u64::from_le_bytes(b8) as usize;
    if nact > dim {
        return None;
    }
    let mut active = Vec::with_capacity(nact);
    for _ in 0..nact {
        r.read_exact(&mut b4).ok()?;
        active.push(u32::from_le_bytes(b4));
    }
    let width = words_for(nact);
    r.read_exact(&mut b8).ok()?;
    let nrows = u64::from_le_bytes(b8) as usize;
    if nrows + nact != dim {
        return None;
    }
    let mut pos_of = vec![NO_POS; dim];
    for (p, &c) in active.iter().enumerate() {
        pos_of[c as usize] = p as u32;
    }
    let mut rows = Vec::with_capacity(nrows);
    let mut pivot_of_row = Vec::with_capacity(nrows);
    let mut row_of_coord = vec![NO_POS; dim];
    for k in 0..nrows {
        r.read_exact(&mut b4).ok()?;
        let p = u32::from_le_bytes(b4);
        if p as usize >= dim {
            return None;
        }
        let mut row = vec![0u64; width];
        for word in row.iter_mut() {
            r.read_exact(&mut b8).ok()?;
            *word = u64::from_le_bytes(b8);
        }
        row_of_coord[p as usize] = k as u32;
        pivot_of_row.push(p);
        rows.push(row);
    }
    let sec_of_pos = vec![NO_POS; nact];
    Some((
        BigEchelon {
            dim,
            active,
            pos_of,
            width,
            rows,
            pivot_of_row,
            row_of_coord,
            sec_rows: Vec::new(),
            sec_pivot_pos: Vec::new(),
            sec_of_pos,
        },
        cursor,
    ))
}

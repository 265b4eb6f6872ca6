//! The induced GL(m, F2) action on quotient bases and its fixed subspaces.
//!
//! Substitution cannot raise the weight filtration, so with an admissible
//! basis ordered weight-first the action matrices are block triangular over
//! the weight runs; the diagonal block at a weight is the action on that
//! graded piece. Invariants are computed as common fixed vectors of a
//! generating set, never by summing over the group.

use rayon::prelude::*;

use crate::error::Result;
use crate::gf2::bitvec::BitVec;
use crate::gf2::echelon::{fixed_space, BitMatrix};
use crate::gl::{gl_generators, substitute, substitute_poly, LinearSubstitution};
use crate::hit::QBasis;
use crate::monomial::WeightVector;
use crate::polynomial::Polynomial;

/// Matrix of the substitution action on a quotient basis: the column of an
/// admissible monomial is the normal form of its full substitution image.
pub fn action_matrix(g: &LinearSubstitution, q: &QBasis) -> Result<BitMatrix> {
    if g.vars() != q.vars() {
        return Err(crate::error::Error::VariableMismatch {
            left: g.vars(),
            right: q.vars(),
        });
    }
    let frame = q.frame().clone();
    let cols: Vec<BitVec> = (0..q.dim())
        .into_par_iter()
        .map(|j| {
            let x = q.admissible_monomial(j);
            let image = substitute(g, &x).expect("variable counts match");
            let coords = image
                .terms()
                .iter()
                .map(|t| frame.index_of(t.exponents()).expect("degree preserved"));
            q.normal_form_coords(coords)
        })
        .collect();
    Ok(BitMatrix::from_columns(q.dim(), cols))
}

/// Dimensions of the invariant subspaces at one `(m, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantsReport {
    /// fixed space of the whole quotient in this degree
    pub dim_full: usize,
    /// fixed space of each weight-graded diagonal block, descending weight
    pub by_omega: Vec<(WeightVector, usize)>,
}

/// Fixed-space dimensions of the generator action, on the full quotient and
/// per weight block.
pub fn invariants_report(q: &QBasis) -> Result<InvariantsReport> {
    let mats = generator_matrices(q)?;
    let dim_full = fixed_space(&mats).rank();
    let mut by_omega = Vec::with_capacity(q.omega_pieces().len());
    for piece in q.omega_pieces() {
        let idx: Vec<usize> = piece.range.clone().collect();
        let blocks: Vec<BitMatrix> = mats.iter().map(|m| m.submatrix(&idx, &idx)).collect();
        by_omega.push((piece.omega.clone(), fixed_space(&blocks).rank()));
    }
    Ok(InvariantsReport { dim_full, by_omega })
}

/// Action matrices of the standard generating set.
pub fn generator_matrices(q: &QBasis) -> Result<Vec<BitMatrix>> {
    gl_generators(q.vars())
        .iter()
        .map(|g| action_matrix(g, q))
        .collect()
}

/// Check that a polynomial represents a nonzero class of the given weight
/// piece fixed by every generator: the weight-block coordinates of the
/// normal form must be nonzero and unchanged by substitution.
pub fn verify_invariant(q: &QBasis, p: &Polynomial, omega: &WeightVector) -> Result<bool> {
    let Some(piece) = q.piece_of(omega) else {
        return Ok(false);
    };
    let block = |v: &BitVec| -> Vec<usize> {
        v.iter_ones()
            .filter(|j| piece.range.contains(j))
            .collect()
    };
    let reference = block(&q.normal_form(p)?);
    if reference.is_empty() {
        return Ok(false);
    }
    for g in gl_generators(q.vars()) {
        let image = substitute_poly(&g, p)?;
        let moved = q.normal_form(&image)?;
        if block(&moved) != reference {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True when no entry of the action matrix pairs a higher-weight row with a
/// lower-weight column (the action never raises the filtration).
pub fn weight_block_triangular(m: &BitMatrix, q: &QBasis) -> bool {
    for (ci, piece) in q.omega_pieces().iter().enumerate() {
        for j in piece.range.clone() {
            for i in m.col(j).iter_ones() {
                let row_piece = q
                    .omega_pieces()
                    .iter()
                    .position(|p| p.range.contains(&i))
                    .expect("row inside some piece");
                if row_piece < ci {
                    return false;
                }
            }
        }
    }
    true
}

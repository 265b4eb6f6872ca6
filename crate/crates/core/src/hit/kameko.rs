//! The halving homomorphism between quotient degrees `m + 2n -> n`: a class
//! of a monomial with all exponents odd maps to the class of the halved
//! monomial, everything else to zero.

use crate::error::{Error, Result};
use crate::gf2::bitvec::BitVec;
use crate::gf2::echelon::EchelonSpace;
use crate::hit::{admissible_basis, HitOptions, QBasis};
use crate::monomial::Monomial;
use crate::xi::xi;

/// The halving map assembled on admissible bases.
#[derive(Debug)]
pub struct KamekoMap {
    pub domain: QBasis,
    pub codomain: QBasis,
    /// column per domain admissible; `None` for the zero column
    columns: Vec<Option<BitVec>>,
    pub rank: usize,
}

impl KamekoMap {
    pub fn kernel_dim(&self) -> usize {
        self.domain.dim() - self.rank
    }

    pub fn is_epimorphism(&self) -> bool {
        self.rank == self.codomain.dim()
    }

    pub fn column(&self, j: usize) -> Option<&BitVec> {
        self.columns[j].as_ref()
    }

    pub fn zero_columns(&self) -> usize {
        self.columns.iter().filter(|c| c.is_none()).count()
    }
}

/// Halved monomial when every exponent is odd, `None` otherwise.
pub fn halve_monomial(x: &Monomial) -> Option<Monomial> {
    if !x.exponents().iter().all(|&u| u % 2 == 1) {
        return None;
    }
    Some(Monomial::new(
        x.exponents().iter().map(|&u| (u - 1) / 2).collect(),
    ))
}

/// Build the halving map from degree `m + 2n` onto degree `n`.
pub fn kameko_matrix(m: usize, n: u64, opts: &HitOptions) -> Result<KamekoMap> {
    let domain = admissible_basis(m, m as u64 + 2 * n, opts)?;
    let codomain = admissible_basis(m, n, opts)?;
    kameko_between(domain, codomain)
}

/// Assemble the halving map between two precomputed bases; the degrees must
/// satisfy `domain = m + 2 * codomain`.
pub fn kameko_between(domain: QBasis, codomain: QBasis) -> Result<KamekoMap> {
    if domain.vars() != codomain.vars() {
        return Err(Error::VariableMismatch {
            left: domain.vars(),
            right: codomain.vars(),
        });
    }
    let m = domain.vars() as u64;
    if domain.degree() != m + 2 * codomain.degree() {
        return Err(Error::HalvingParity {
            m: domain.vars(),
            domain: domain.degree(),
            codomain: codomain.degree(),
        });
    }
    let codomain_frame = codomain.frame().clone();
    let columns: Vec<Option<BitVec>> = (0..domain.dim())
        .map(|j| {
            let x = domain.admissible_monomial(j);
            halve_monomial(&x).map(|h| {
                let coord = codomain_frame
                    .index_of(h.exponents())
                    .expect("halved monomial lives in the codomain frame");
                codomain.normal_form_coords([coord])
            })
        })
        .collect();
    let mut image = EchelonSpace::new(codomain.dim());
    for col in columns.iter().flatten() {
        image.insert(col.clone());
    }
    let rank = image.rank();
    Ok(KamekoMap {
        domain,
        codomain,
        columns,
        rank,
    })
}

/// The halving map is an isomorphism of the quotients exactly when the
/// target degree needs `m` spikes.
pub fn kameko_iso_check(m: usize, n: u64) -> bool {
    xi(n) == m as u32
}

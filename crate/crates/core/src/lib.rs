//! Minimal generating sets of the polynomial algebra `F2[x_1..x_m]` as a
//! module over the mod-2 Steenrod algebra.
//!
//! The crate computes, exactly and over F2:
//!
//! - the action of Steenrod squares on polynomials and the normalization of
//!   square compositions to the admissible basis ([`steenrod`], [`adem`]);
//! - hit subspaces and the admissible monomial basis of the quotient
//!   `Q = F2 (x)_A P_m` in a degree, graded by weight vectors ([`hit`]);
//! - the halving (Kameko-type) homomorphism between quotient degrees and its
//!   kernel ([`hit::kameko`]);
//! - the induced `GL(m, F2)` action on the quotient and its invariant
//!   subspaces ([`gl`], [`invariants`]).
//!
//! Everything is backed by dense bit-packed linear algebra over monomial
//! coordinate frames ([`gf2`], [`frame`]), with a streamed echelonization
//! path for frames beyond in-cache sizes.

pub mod adem;
pub mod error;
pub mod frame;
pub mod gf2;
pub mod gl;
pub mod hit;
pub mod invariants;
pub mod monomial;
pub mod polynomial;
pub mod steenrod;
pub mod xi;

pub use adem::{adem_normalize, SqSum, SqWord};
pub use error::{Error, Result};
pub use frame::CoordinateFrame;
pub use gl::LinearSubstitution;
pub use hit::{admissible_basis, hit_space, HitOptions, HitSpace, QBasis};
pub use monomial::{Monomial, WeightVector};
pub use polynomial::Polynomial;
pub use steenrod::{sq_monomial, sq_polynomial, sq_word_action};
pub use xi::xi;

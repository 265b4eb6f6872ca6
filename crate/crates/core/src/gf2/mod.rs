//! Dense bit-packed linear algebra over F2 keyed by frame coordinates.

pub mod bitvec;
pub mod builder;
pub mod compact;
pub mod echelon;

pub use bitvec::BitVec;
pub use builder::{echelonize_sparse, CheckpointStore, StreamOptions};
pub use compact::{CompactEchelon, EchHeader};
pub use echelon::{fixed_space, kernel_of_columns, BitMatrix, EchelonSpace};

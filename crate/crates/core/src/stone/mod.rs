//! Finite-depth models of Stone spaces with a complete partition indexed by
//! a PO system.

mod cells;
mod check;
mod decompose;
mod matching;
mod model;
mod term;

pub use cells::{Info, Key, Node, Word};
pub use check::{check_partition_invariants, WITNESS_WINDOW};
pub use decompose::{minimum_decomposition, Decomposition, TrimPiece, TRIM_DESCENT};
pub use matching::{back_and_forth, GenMeasure, Matching, Piece, MAX_EXTRA_LEVELS};
pub use model::{approximate, mu_of_cell, Cell, Model};
pub use term::{build_space, AttachCase, BuildStrategy, Space, SpaceTerm};

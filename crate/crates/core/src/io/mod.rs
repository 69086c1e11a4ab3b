//! Binary grid persistence.

mod rgrd;

pub use rgrd::{decode_grid, encode_grid, read_grid, write_grid, GridArray, MAX_DIMS};

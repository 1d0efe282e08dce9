//! Fixed inputs shared by the benchmarks.

use seqprod::{rand_effect, rand_instrument, rand_operation, FiniteInstrument, Matrix, Operation};

pub const DIMS: [usize; 3] = [2, 4, 8];

/// A seeded random effect at `dim`, as a bare matrix.
pub fn effect_matrix(dim: usize) -> Matrix {
    rand_effect(dim, 0x5eed ^ dim as u64).into_matrix()
}

pub fn operation(dim: usize) -> Operation {
    rand_operation(dim, 3, 0x0b ^ dim as u64)
}

pub fn instrument(dim: usize) -> FiniteInstrument {
    rand_instrument(dim, 3, 2, 0x1a ^ dim as u64)
}

//! GF(2) linear codes: packed bit vectors and matrices, syndromes, coset
//! leaders, nearest-codeword quantization, distance diagnostics and nested
//! code construction.

mod bits;
mod code;

pub use bits::{BitMatrix, BitVec};
pub use code::{
    build_nested, covering_rows, improve_covering, improve_covering_rows,
    sample_random_linear_code, CodeDiagnostics, CosetTable, LinearCode, NestedCode, WordOps,
    MAX_SPECTRUM_DIM, MAX_TABLE_LEN, MAX_TABLE_REDUNDANCY,
};

//! Shared fixtures for the criterion benchmarks.

use prcss_core::complex::{toric_complex, ChainComplex2};
use prcss_core::f2::BitVector;

/// Toric complex of side `l` together with its plaquette generators.
pub fn toric_fixture(l: usize) -> (ChainComplex2, Vec<BitVector>) {
    let complex = toric_complex(l).expect("l >= 2");
    let gens = complex.boundary2().transpose().to_bitvectors();
    (complex, gens)
}

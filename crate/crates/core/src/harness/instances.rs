//! Seeded random instances shared by the verification suite and tests.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::css::CssCode;
use crate::discrepancy::Hypergraph;
use crate::f2::{kernel_basis, row_space_basis, BitVector, F2Matrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_word(rng: &mut impl Rng, n: usize) -> BitVector {
    let mut w = BitVector::zeros(n);
    for i in 0..n {
        if rng.random_bool(0.5) {
            w.set(i);
        }
    }
    w
}

pub fn random_weight_word(rng: &mut impl Rng, n: usize, d: usize) -> BitVector {
    let support = rand::seq::index::sample(rng, n, d).into_vec();
    BitVector::from_support(n, &support).expect("indices below n")
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> F2Matrix {
    let words: Vec<BitVector> = (0..rows).map(|_| random_word(rng, cols)).collect();
    F2Matrix::from_bitvectors(cols, &words).expect("lengths agree")
}

/// Basis of the row space of a random `dim x n` matrix, so the dimension is
/// at most `dim`.
pub fn random_code(rng: &mut impl Rng, n: usize, dim: usize) -> Vec<BitVector> {
    row_space_basis(&random_matrix(rng, dim, n))
}

/// `(n, basis)` with `n` in `n_range` and dimension up to `max_dim`.
pub fn random_codes(seed: u64, count: usize, n_lo: usize, n_hi: usize, max_dim: usize) -> Vec<(usize, Vec<BitVector>)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.random_range(n_lo..=n_hi);
            let dim = r.random_range(0..=max_dim.min(n));
            (n, random_code(&mut r, n, dim))
        })
        .collect()
}

/// A CSS code with random X checks and Z checks drawn from their dual.
pub fn random_css(rng: &mut impl Rng, n: usize, mx: usize, mz: usize) -> CssCode {
    let x = random_code(rng, n, mx);
    let dual = kernel_basis(&F2Matrix::from_bitvectors(n, &x).expect("lengths agree"));
    let z: Vec<BitVector> = (0..mz)
        .map(|_| {
            let mut w = BitVector::zeros(n);
            for b in &dual {
                if rng.random_bool(0.5) {
                    w.xor_assign(b);
                }
            }
            w
        })
        .collect();
    CssCode::new(n, &x, &z).expect("Z drawn from the dual of X")
}

/// Generator sets for walks: `n` in `n_lo..=n_hi`, at most `max_gens`
/// generators, mixing fixed-weight and arbitrary words (repeats allowed).
pub fn random_generator_sets(seed: u64, count: usize, n_lo: usize, n_hi: usize, max_gens: usize) -> Vec<(usize, Vec<BitVector>)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.random_range(n_lo..=n_hi);
            let k = r.random_range(1..=max_gens);
            let fixed = r.random_bool(0.5);
            let d = r.random_range(1..=n.min(4));
            let gens = (0..k)
                .map(|_| {
                    if fixed {
                        random_weight_word(&mut r, n, d)
                    } else {
                        random_word(&mut r, n)
                    }
                })
                .collect();
            (n, gens)
        })
        .collect()
}

/// A random `d`-uniform hypergraph with `m` distinct faces.
///
/// # Panics
/// If `m > C(n, d)`.
pub fn random_hypergraph(rng: &mut impl Rng, n: usize, d: usize, m: usize) -> Hypergraph {
    assert!(d <= n && m <= choose_small(n, d), "{m} distinct {d}-subsets of {n} points do not exist");
    let mut faces = BTreeSet::new();
    while faces.len() < m {
        let mut f = rand::seq::index::sample(rng, n, d).into_vec();
        f.sort_unstable();
        faces.insert(f);
    }
    Hypergraph::new(n, d, faces.into_iter().collect()).expect("distinct in-range faces")
}

fn choose_small(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Hypergraphs with `n` in `n_lo..=n_hi`, `d <= 4`, and up to `2n` faces.
pub fn random_hypergraphs(seed: u64, count: usize, n_lo: usize, n_hi: usize) -> Vec<Hypergraph> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.random_range(n_lo..=n_hi);
            let d = r.random_range(1..=n.min(4));
            let most = choose_small(n, d).min(2 * n);
            let m = r.random_range(1..=most);
            random_hypergraph(&mut r, n, d, m)
        })
        .collect()
}

/// Weight-`d` generators where every bit lies in exactly `k` of them, from
/// the configuration model with rejection. `d` must divide `n k`.
pub fn regular_generators(rng: &mut impl Rng, n: usize, d: usize, k: usize) -> Option<Vec<BitVector>> {
    if !(n * k).is_multiple_of(d) {
        return None;
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
    'attempt: for _ in 0..1000 {
        stubs.shuffle(rng);
        let mut seen = BTreeSet::new();
        let mut gens = Vec::new();
        for chunk in stubs.chunks(d) {
            let mut f = chunk.to_vec();
            f.sort_unstable();
            if f.windows(2).any(|w| w[0] == w[1]) || !seen.insert(f.clone()) {
                continue 'attempt;
            }
            gens.push(BitVector::from_support(n, &f).expect("in range"));
        }
        return Some(gens);
    }
    None
}

/// `(n, d, generators)` for the enumerator-floor audit: bit degree 1
/// (disjoint generators) or 2, `n <= n_max`.
pub fn ldpc_codes(seed: u64, count: usize, n_max: usize) -> Vec<(usize, usize, Vec<BitVector>)> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d = r.random_range(2..=4usize);
        let k = if out.len() % 2 == 0 { 1 } else { 2 };
        let blocks = n_max / d;
        let n = d * r.random_range(1..=blocks);
        if let Some(gens) = regular_generators(&mut r, n, d, k) {
            out.push((n, d, gens));
        }
    }
    out
}

/// A random row-stochastic chain on `states` states with small-denominator
/// rational entries and a self-loop everywhere, so it is aperiodic.
pub fn random_chain_rows(rng: &mut impl Rng, states: usize) -> Vec<Vec<(usize, u32)>> {
    (0..states)
        .map(|i| {
            let mut row: Vec<(usize, u32)> = vec![(i, rng.random_range(1..=4))];
            row.push(((i + 1) % states, rng.random_range(1..=4)));
            for j in 0..states {
                if rng.random_bool(0.3) {
                    row.push((j, rng.random_range(1..=4)));
                }
            }
            row
        })
        .collect()
}

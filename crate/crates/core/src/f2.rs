//! Linear algebra over GF(2).
//!
//! Matrices are stored sparsely (one sorted support list per row) and
//! converted to packed `u64` bitsets for elimination. Pivots are always
//! chosen at the lowest available column so every basis this module
//! returns is reproducible run to run.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum F2Error {
    #[error("row {row}: column index {index} out of range for {cols} columns")]
    IndexOutOfRange { row: usize, index: usize, cols: usize },
    #[error("row {row}: column index {index} listed twice")]
    DuplicateIndex { row: usize, index: usize },
    #[error("vector length {found} does not match expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("span of dimension {dim} exceeds enumeration cap {cap}")]
    CapExceeded { dim: usize, cap: u64 },
    #[error("basis is linearly dependent (vector {index})")]
    DependentBasis { index: usize },
    #[error("subspace vector {index} is not contained in the ambient space")]
    NotSubspace { index: usize },
}

/// `2^dim`, or `None` once it no longer fits a `u64`.
pub fn span_size(dim: usize) -> Option<u64> {
    if dim < 64 {
        Some(1u64 << dim)
    } else {
        None
    }
}

/// Fails with [`F2Error::CapExceeded`] when `2^dim > cap`.
pub fn check_cap(dim: usize, cap: u64) -> Result<(), F2Error> {
    match span_size(dim) {
        Some(size) if size <= cap => Ok(()),
        _ => Err(F2Error::CapExceeded { dim, cap }),
    }
}

// ---------------------------------------------------------------------------
// BitVector
// ---------------------------------------------------------------------------

/// A word in `F_2^n`, packed 64 bits per limb.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Builds a vector from the positions of its ones.
    pub fn from_support(len: usize, support: &[usize]) -> Result<Self, F2Error> {
        let mut v = Self::zeros(len);
        for &i in support {
            if i >= len {
                return Err(F2Error::IndexOutOfRange {
                    row: 0,
                    index: i,
                    cols: len,
                });
            }
            if v.get(i) {
                return Err(F2Error::DuplicateIndex { row: 0, index: i });
            }
            v.set(i);
        }
        Ok(v)
    }

    /// Parses a string of `0`/`1` characters, bit 0 first.
    ///
    /// # Panics
    /// Panics on any other character; intended for literals in tests and docs.
    pub fn from_bits(bits: &str) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i),
                other => panic!("invalid bit character {other:?}"),
            }
        }
        v
    }

    /// Unit vector `e_i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Hamming weight `|x|`.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    /// Size of the intersection of the two supports.
    pub fn overlap(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn lowest_set(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * 64 + w.trailing_zeros() as usize)
    }

    /// Indices of the ones, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (k, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(k * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    /// Single-limb view, available when `len <= 64`.
    pub fn as_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn from_u64(len: usize, word: u64) -> Self {
        assert!(len <= 64);
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = word & mask;
        }
        v
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

// ---------------------------------------------------------------------------
// F2Matrix
// ---------------------------------------------------------------------------

/// Sparse binary matrix: one ascending support list per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    row_supports: Vec<Vec<usize>>,
}

impl F2Matrix {
    /// Validates indices and sorts each row.
    pub fn new(rows: usize, cols: usize, row_supports: Vec<Vec<usize>>) -> Result<Self, F2Error> {
        if row_supports.len() != rows {
            return Err(F2Error::LengthMismatch {
                expected: rows,
                found: row_supports.len(),
            });
        }
        let mut row_supports = row_supports;
        for (r, support) in row_supports.iter_mut().enumerate() {
            support.sort_unstable();
            for w in support.windows(2) {
                if w[0] == w[1] {
                    return Err(F2Error::DuplicateIndex { row: r, index: w[0] });
                }
            }
            if let Some(&last) = support.last() {
                if last >= cols {
                    return Err(F2Error::IndexOutOfRange {
                        row: r,
                        index: last,
                        cols,
                    });
                }
            }
        }
        Ok(Self {
            rows,
            cols,
            row_supports,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_supports: vec![Vec::new(); rows],
        }
    }

    pub fn identity(size: usize) -> Self {
        Self {
            rows: size,
            cols: size,
            row_supports: (0..size).map(|i| vec![i]).collect(),
        }
    }

    /// Rows given as bit vectors of length `cols`.
    pub fn from_bitvectors(cols: usize, rows: &[BitVector]) -> Result<Self, F2Error> {
        let mut supports = Vec::with_capacity(rows.len());
        for r in rows {
            if r.len() != cols {
                return Err(F2Error::LengthMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            supports.push(r.support());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            row_supports: supports,
        })
    }

    /// Rows written as `0`/`1` strings; test helper.
    pub fn from_bit_rows(cols: usize, rows: &[&str]) -> Self {
        let vs: Vec<BitVector> = rows.iter().map(|r| BitVector::from_bits(r)).collect();
        Self::from_bitvectors(cols, &vs).expect("row length")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_support(&self, r: usize) -> &[usize] {
        &self.row_supports[r]
    }

    pub fn row_supports(&self) -> &[Vec<usize>] {
        &self.row_supports
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row_supports[r].binary_search(&c).is_ok()
    }

    pub fn row(&self, r: usize) -> BitVector {
        let mut v = BitVector::zeros(self.cols);
        for &c in &self.row_supports[r] {
            v.set(c);
        }
        v
    }

    pub fn to_bitvectors(&self) -> Vec<BitVector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut cols = vec![Vec::new(); self.cols];
        for (r, support) in self.row_supports.iter().enumerate() {
            for &c in support {
                cols[c].push(r);
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            row_supports: cols,
        }
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.row_supports.iter().map(Vec::len).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for support in &self.row_supports {
            for &c in support {
                w[c] += 1;
            }
        }
        w
    }

    pub fn is_zero(&self) -> bool {
        self.row_supports.iter().all(Vec::is_empty)
    }

    /// `M x` over GF(2).
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector, F2Error> {
        if x.len() != self.cols {
            return Err(F2Error::LengthMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        let mut out = BitVector::zeros(self.rows);
        for (r, support) in self.row_supports.iter().enumerate() {
            if support.iter().filter(|&&c| x.get(c)).count() % 2 == 1 {
                out.set(r);
            }
        }
        Ok(out)
    }

    /// Matrix product `self * other` over GF(2).
    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix, F2Error> {
        if self.cols != other.rows {
            return Err(F2Error::LengthMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let other_rows = other.to_bitvectors();
        let mut supports = Vec::with_capacity(self.rows);
        for support in &self.row_supports {
            let mut acc = BitVector::zeros(other.cols);
            for &k in support {
                acc.xor_assign(&other_rows[k]);
            }
            supports.push(acc.support());
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            row_supports: supports,
        })
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Elimination
// ---------------------------------------------------------------------------

/// Reduced row echelon form with lowest-column pivots.
struct Rref {
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
}

fn rref(m: &F2Matrix) -> Rref {
    let mut rows = m.to_bitvectors();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..m.cols() {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    Rref { rows, pivots }
}

pub fn rank(m: &F2Matrix) -> usize {
    rref(m).pivots.len()
}

/// Basis of `{x : M x = 0}`, one vector per free column in ascending order.
pub fn kernel_basis(m: &F2Matrix) -> Vec<BitVector> {
    let Rref { rows, pivots } = rref(m);
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols())
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitVector::unit(m.cols(), f);
            for (row, &p) in rows.iter().zip(&pivots) {
                if row.get(f) {
                    v.set(p);
                }
            }
            v
        })
        .collect()
}

/// The rows of `M` that are independent of the rows before them.
pub fn row_space_basis(m: &F2Matrix) -> Vec<BitVector> {
    let mut echelon = EchelonBasis::new(m.cols());
    m.to_bitvectors()
        .into_iter()
        .filter(|r| echelon.insert(r))
        .collect()
}

/// Incrementally built basis kept in lowest-bit echelon form.
///
/// Each stored vector owns the position of its lowest set bit, so reducing a
/// word strictly raises its lowest set bit until it vanishes or lands on a
/// free position.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    len: usize,
    by_pivot: Vec<Option<BitVector>>,
    dim: usize,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            by_pivot: vec![None; len],
            dim: 0,
        }
    }

    pub fn from_vectors<'a>(len: usize, vs: impl IntoIterator<Item = &'a BitVector>) -> Self {
        let mut b = Self::new(len);
        for v in vs {
            b.insert(v);
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn reduce(&self, w: &BitVector) -> BitVector {
        assert_eq!(w.len(), self.len);
        let mut w = w.clone();
        while let Some(p) = w.lowest_set() {
            match &self.by_pivot[p] {
                Some(v) => w.xor_assign(v),
                None => break,
            }
        }
        w
    }

    pub fn contains(&self, w: &BitVector) -> bool {
        self.reduce(w).is_zero()
    }

    /// Adds `w` if it is independent; returns whether it was.
    pub fn insert(&mut self, w: &BitVector) -> bool {
        let r = self.reduce(w);
        match r.lowest_set() {
            Some(p) => {
                self.by_pivot[p] = Some(r);
                self.dim += 1;
                true
            }
            None => false,
        }
    }
}

// ---------------------------------------------------------------------------
// Span enumeration
// ---------------------------------------------------------------------------

/// Gray-code iterator over every element of `span(basis)`.
pub struct SpanIter {
    basis: Vec<BitVector>,
    current: BitVector,
    index: u64,
    total: u64,
}

impl Iterator for SpanIter {
    type Item = BitVector;

    fn next(&mut self) -> Option<BitVector> {
        if self.index == self.total {
            return None;
        }
        let out = self.current.clone();
        self.index += 1;
        if self.index < self.total {
            let flip = self.index.trailing_zeros() as usize;
            self.current.xor_assign(&self.basis[flip]);
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.index) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for SpanIter {}

fn check_basis(len: usize, basis: &[BitVector], cap: u64) -> Result<(), F2Error> {
    check_cap(basis.len(), cap)?;
    let mut echelon = EchelonBasis::new(len);
    for (i, b) in basis.iter().enumerate() {
        if b.len() != len {
            return Err(F2Error::LengthMismatch {
                expected: len,
                found: b.len(),
            });
        }
        if !echelon.insert(b) {
            return Err(F2Error::DependentBasis { index: i });
        }
    }
    Ok(())
}

/// Every codeword of `span(basis)` exactly once, in Gray-code order.
///
/// `len` is the ambient length, needed when the basis is empty.
pub fn enumerate_span(len: usize, basis: &[BitVector], cap: u64) -> Result<SpanIter, F2Error> {
    check_basis(len, basis, cap)?;
    Ok(SpanIter {
        basis: basis.to_vec(),
        current: BitVector::zeros(len),
        index: 0,
        total: 1u64 << basis.len(),
    })
}

/// Word types the parallel span kernel can walk.
pub trait SpanWord: Clone + Send + Sync {
    fn xor_in(&mut self, other: &Self);
    fn hamming(&self) -> usize;
}

impl SpanWord for u64 {
    #[inline]
    fn xor_in(&mut self, other: &Self) {
        *self ^= other;
    }
    #[inline]
    fn hamming(&self) -> usize {
        self.count_ones() as usize
    }
}

impl SpanWord for BitVector {
    #[inline]
    fn xor_in(&mut self, other: &Self) {
        self.xor_assign(other);
    }
    #[inline]
    fn hamming(&self) -> usize {
        self.weight()
    }
}

const SERIAL_BITS: usize = 14;

/// Visits every `(word, coefficient mask)` of `span(basis)` and folds the
/// results. The high coefficient bits are split into independent chunks run
/// on the rayon pool; `reduce` must be associative and commutative for the
/// result to be deterministic.
///
/// The caller is responsible for the cap check; `basis.len()` must be < 64.
pub fn span_fold<W, A, I, F, R>(basis: &[W], zero: W, init: I, visit: F, reduce: R) -> A
where
    W: SpanWord,
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, &W, u64) + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    let m = basis.len();
    assert!(m < 64, "span dimension {m} too large to enumerate");
    let high = m.saturating_sub(SERIAL_BITS).min(10);
    let low = m - high;
    let chunk = |c: u64| {
        let mut acc = init();
        let mut word = zero.clone();
        let mut mask = c << low;
        for t in 0..high {
            if (c >> t) & 1 == 1 {
                word.xor_in(&basis[low + t]);
            }
        }
        let total = 1u64 << low;
        for i in 0..total {
            visit(&mut acc, &word, mask);
            let next = i + 1;
            if next < total {
                let b = next.trailing_zeros() as usize;
                word.xor_in(&basis[b]);
                mask ^= 1u64 << b;
            }
        }
        acc
    };
    if high == 0 {
        return chunk(0);
    }
    (0..1u64 << high)
        .into_par_iter()
        .map(chunk)
        .reduce(&init, &reduce)
}

/// Converts a basis to single-limb words when the ambient length allows.
pub fn basis_as_u64(basis: &[BitVector]) -> Option<Vec<u64>> {
    basis.iter().map(BitVector::as_u64).collect()
}

/// Minimum-weight word of `V - S`, where `S = span(sub)` must lie inside
/// `V = span(space)`. Returns `None` when `S = V`.
///
/// The basis of `V` is rebuilt as `sub` followed by coset representatives,
/// so a word lies outside `S` exactly when some representative coefficient
/// is set. Ties on weight go to the smallest coefficient mask.
pub fn min_weight_outside(
    len: usize,
    sub: &[BitVector],
    space: &[BitVector],
    cap: u64,
) -> Result<Option<(usize, BitVector)>, F2Error> {
    let mut echelon = EchelonBasis::new(len);
    let mut basis: Vec<BitVector> = Vec::new();
    for v in sub {
        if echelon.insert(v) {
            basis.push(v.clone());
        }
    }
    let inner = basis.len();
    let space_echelon = EchelonBasis::from_vectors(len, space);
    if let Some(index) = basis.iter().position(|v| !space_echelon.contains(v)) {
        return Err(F2Error::NotSubspace { index });
    }
    for v in space {
        if echelon.insert(v) {
            basis.push(v.clone());
        }
    }
    check_cap(basis.len(), cap)?;
    if basis.len() == inner {
        return Ok(None);
    }
    let outer_mask: u64 = !((1u64 << inner) - 1);
    let better = |a: Option<(usize, u64)>, b: Option<(usize, u64)>| match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    };
    let best = match basis_as_u64(&basis) {
        Some(words) => span_fold(
            &words,
            0u64,
            || None,
            |acc: &mut Option<(usize, u64)>, w, mask| {
                if mask & outer_mask != 0 {
                    *acc = better(*acc, Some((w.hamming(), mask)));
                }
            },
            better,
        ),
        None => span_fold(
            &basis,
            BitVector::zeros(len),
            || None,
            |acc: &mut Option<(usize, u64)>, w, mask| {
                if mask & outer_mask != 0 {
                    *acc = better(*acc, Some((w.hamming(), mask)));
                }
            },
            better,
        ),
    };
    Ok(best.map(|(weight, mask)| {
        let mut w = BitVector::zeros(len);
        for (i, b) in basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                w.xor_assign(b);
            }
        }
        (weight, w)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn m(cols: usize, rows: &[&str]) -> F2Matrix {
        F2Matrix::from_bit_rows(cols, rows)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&F2Matrix::zeros(3, 3)), 0);
        assert_eq!(rank(&F2Matrix::identity(4)), 4);
        assert_eq!(rank(&m(3, &["110", "011", "101"])), 2);
    }

    #[test]
    fn rank_dependent_rows_by_exhaustive_combination() {
        // oracle: the number of distinct row combinations is 2^rank
        let mat = m(3, &["110", "011", "101"]);
        let rows = mat.to_bitvectors();
        let mut seen = HashSet::new();
        for mask in 0u32..8 {
            let mut acc = BitVector::zeros(3);
            for (i, r) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc.xor_assign(r);
                }
            }
            seen.insert(acc);
        }
        assert_eq!(seen.len(), 1 << rank(&mat));
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&F2Matrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&F2Matrix::zeros(2, 3)).len(), 3);

        let single = m(3, &["111"]);
        let ker = kernel_basis(&single);
        assert_eq!(ker.len(), 2);
        // oracle: all 8 vectors, keep those with even overlap with 111
        let even: HashSet<BitVector> = (0u64..8)
            .map(|x| BitVector::from_u64(3, x))
            .filter(|v| v.weight() % 2 == 0)
            .collect();
        let span: HashSet<BitVector> = enumerate_span(3, &ker, 1 << 20).unwrap().collect();
        assert_eq!(span, even);
        assert_eq!(ker[0], BitVector::from_bits("110"));
        assert_eq!(ker[1], BitVector::from_bits("101"));
    }

    #[test]
    fn row_space_examples() {
        let basis = row_space_basis(&m(3, &["110", "011", "101"]));
        assert_eq!(basis.len(), 2);
        assert_eq!(basis, vec![BitVector::from_bits("110"), BitVector::from_bits("011")]);
        assert_eq!(row_space_basis(&F2Matrix::identity(3)).len(), 3);
        assert!(row_space_basis(&F2Matrix::zeros(2, 3)).is_empty());
    }

    #[test]
    fn span_examples() {
        let basis = vec![BitVector::from_bits("110"), BitVector::from_bits("011")];
        let words: HashSet<String> = enumerate_span(3, &basis, 16)
            .unwrap()
            .map(|w| w.to_string())
            .collect();
        let expected: HashSet<String> = ["000", "110", "011", "101"].iter().map(|s| s.to_string()).collect();
        assert_eq!(words, expected);

        let empty: Vec<BitVector> = enumerate_span(3, &[], 1).unwrap().collect();
        assert_eq!(empty, vec![BitVector::zeros(3)]);

        let big: Vec<BitVector> = (0..40).map(|i| BitVector::unit(40, i)).collect();
        assert!(matches!(
            enumerate_span(40, &big, 1 << 30),
            Err(F2Error::CapExceeded { dim: 40, .. })
        ));
    }

    #[test]
    fn span_rejects_dependent_basis() {
        let basis = vec![
            BitVector::from_bits("110"),
            BitVector::from_bits("011"),
            BitVector::from_bits("101"),
        ];
        assert_eq!(
            enumerate_span(3, &basis, 64).err(),
            Some(F2Error::DependentBasis { index: 2 })
        );
    }

    #[test]
    fn matrix_rejects_bad_indices() {
        assert!(matches!(
            F2Matrix::new(1, 3, vec![vec![3]]),
            Err(F2Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            F2Matrix::new(1, 3, vec![vec![1, 1]]),
            Err(F2Error::DuplicateIndex { .. })
        ));
    }

    #[test]
    fn span_fold_matches_serial_enumeration() {
        let basis: Vec<BitVector> = (0..17).map(|i| {
            let mut v = BitVector::unit(40, i);
            v.set(39 - i);
            v
        }).collect();
        let words = basis_as_u64(&basis).unwrap();
        let total = span_fold(&words, 0u64, || 0u64, |acc, w, _| *acc += w.count_ones() as u64, |a, b| a + b);
        let serial: u64 = enumerate_span(40, &basis, 1 << 20)
            .unwrap()
            .map(|w| w.weight() as u64)
            .sum();
        assert_eq!(total, serial);
    }

    #[test]
    fn span_fold_masks_reproduce_words() {
        let basis: Vec<u64> = vec![0b0011, 0b0110, 0b1100, 0b1000];
        let ok = span_fold(
            &basis,
            0u64,
            || true,
            |acc, w, mask| {
                let direct = (0..4).filter(|i| mask >> i & 1 == 1).fold(0u64, |a, i| a ^ basis[i]);
                *acc &= direct == *w;
            },
            |a, b| a && b,
        );
        assert!(ok);
    }
}

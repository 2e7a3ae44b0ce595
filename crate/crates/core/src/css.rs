//! CSS codes and their brute-force parameters.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{ChainComplex2, ComplexError};
use crate::enumerator::WeightEnumerator;
use crate::f2::{
    self, basis_as_u64, kernel_basis, row_space_basis, span_fold, BitVector, EchelonBasis, F2Error,
    F2Matrix, SpanWord,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CssError {
    #[error("X generator {x} and Z generator {z} overlap oddly")]
    NotOrthogonal { x: usize, z: usize },
    #[error("n - m_X - m_Z = {n} - {m_x} - {m_z} is negative")]
    NegativeDimension { n: usize, m_x: usize, m_z: usize },
    #[error("code encodes no logical qubits")]
    NoLogicals,
    #[error(transparent)]
    F2(#[from] F2Error),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A pair `C_X`, `C_Z` of subspaces of `GF(2)^n` with `C_Z` inside `C_X^perp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    n: usize,
    basis_x: Vec<BitVector>,
    basis_z: Vec<BitVector>,
}

fn check_lengths(n: usize, vs: &[BitVector]) -> Result<(), F2Error> {
    match vs.iter().find(|v| v.len() != n) {
        Some(v) => Err(F2Error::LengthMismatch {
            expected: n,
            found: v.len(),
        }),
        None => Ok(()),
    }
}

fn check_orthogonal(x: &[BitVector], z: &[BitVector]) -> Result<(), CssError> {
    for (i, a) in x.iter().enumerate() {
        for (j, b) in z.iter().enumerate() {
            if a.dot(b) {
                return Err(CssError::NotOrthogonal { x: i, z: j });
            }
        }
    }
    Ok(())
}

fn independent(n: usize, vs: &[BitVector]) -> Vec<BitVector> {
    let mut e = EchelonBasis::new(n);
    vs.iter().filter(|v| e.insert(v)).cloned().collect()
}

impl CssCode {
    /// Builds a code from arbitrary generating sets, keeping an independent
    /// subset of each.
    pub fn new(n: usize, gens_x: &[BitVector], gens_z: &[BitVector]) -> Result<Self, CssError> {
        check_lengths(n, gens_x)?;
        check_lengths(n, gens_z)?;
        check_orthogonal(gens_x, gens_z)?;
        Ok(Self {
            n,
            basis_x: independent(n, gens_x),
            basis_z: independent(n, gens_z),
        })
    }

    /// Takes the bases verbatim. Dependent inputs are not rejected here; they
    /// surface as [`CssError::NegativeDimension`] or a wrong `k`.
    pub fn from_bases(n: usize, basis_x: Vec<BitVector>, basis_z: Vec<BitVector>) -> Result<Self, CssError> {
        check_lengths(n, &basis_x)?;
        check_lengths(n, &basis_z)?;
        check_orthogonal(&basis_x, &basis_z)?;
        Ok(Self { n, basis_x, basis_z })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis_x(&self) -> &[BitVector] {
        &self.basis_x
    }

    pub fn basis_z(&self) -> &[BitVector] {
        &self.basis_z
    }

    pub fn m_x(&self) -> usize {
        self.basis_x.len()
    }

    pub fn m_z(&self) -> usize {
        self.basis_z.len()
    }

    /// Generators as matrix rows, X first.
    pub fn matrices(&self) -> (F2Matrix, F2Matrix) {
        (
            F2Matrix::from_bitvectors(self.n, &self.basis_x).expect("lengths checked"),
            F2Matrix::from_bitvectors(self.n, &self.basis_z).expect("lengths checked"),
        )
    }
}

/// `C_X = im d2` (columns of `d2`), `C_Z` = row space of `d1`.
pub fn css_from_complex(complex: &ChainComplex2) -> Result<CssCode, CssError> {
    complex.validate()?;
    let x = row_space_basis(&complex.boundary2().transpose());
    let z = row_space_basis(complex.boundary1());
    CssCode::from_bases(complex.n(), x, z)
}

/// `k = n - m_X - m_Z`.
pub fn code_dimension(code: &CssCode) -> Result<usize, CssError> {
    let (n, m_x, m_z) = (code.n, code.m_x(), code.m_z());
    n.checked_sub(m_x + m_z)
        .ok_or(CssError::NegativeDimension { n, m_x, m_z })
}

fn dual_basis(n: usize, gens: &[BitVector]) -> Vec<BitVector> {
    kernel_basis(&F2Matrix::from_bitvectors(n, gens).expect("lengths checked"))
}

/// Lightest word of `(C_X^perp - C_Z) u (C_Z^perp - C_X)` with a witness.
pub fn min_distance_witness(code: &CssCode, cap: u64) -> Result<(usize, BitVector), CssError> {
    if code_dimension(code)? == 0 {
        return Err(CssError::NoLogicals);
    }
    let n = code.n;
    f2::check_cap(n - code.m_x(), cap)?;
    f2::check_cap(n - code.m_z(), cap)?;
    let z_side = f2::min_weight_outside(n, &code.basis_z, &dual_basis(n, &code.basis_x), cap)?;
    let x_side = f2::min_weight_outside(n, &code.basis_x, &dual_basis(n, &code.basis_z), cap)?;
    [z_side, x_side]
        .into_iter()
        .flatten()
        .min_by_key(|(w, _)| *w)
        .ok_or(CssError::NoLogicals)
}

/// Exact minimum distance by enumeration of both dual spaces.
pub fn min_distance(code: &CssCode, cap: u64) -> Result<usize, CssError> {
    Ok(min_distance_witness(code, cap)?.0)
}

/// Outcome of a distance computation that may fall back to a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistanceResult {
    Exact { d_min: usize },
    /// `d_min <= upper`, from the lightest logical found without full enumeration.
    UpperBound { upper: usize },
}

impl DistanceResult {
    pub fn value(&self) -> usize {
        match self {
            Self::Exact { d_min } => *d_min,
            Self::UpperBound { upper } => *upper,
        }
    }
}

/// Lightest logical among sums of at most two dual-basis vectors.
fn cheap_logical(n: usize, sub: &[BitVector], space: &[BitVector]) -> Option<usize> {
    let inner = EchelonBasis::from_vectors(n, sub);
    let mut best: Option<usize> = None;
    let mut consider = |w: &BitVector| {
        if !w.is_zero() && !inner.contains(w) {
            best = Some(best.map_or(w.weight(), |b| b.min(w.weight())));
        }
    };
    for (i, a) in space.iter().enumerate() {
        consider(a);
        for b in &space[i + 1..] {
            consider(&a.xor(b));
        }
    }
    best
}

/// [`min_distance`] when the spaces fit under `cap`, otherwise an upper
/// bound from low-weight combinations of kernel basis vectors.
pub fn min_distance_or_bound(code: &CssCode, cap: u64) -> Result<DistanceResult, CssError> {
    match min_distance(code, cap) {
        Ok(d_min) => Ok(DistanceResult::Exact { d_min }),
        Err(CssError::F2(F2Error::CapExceeded { .. })) => {
            let n = code.n;
            let a = cheap_logical(n, &code.basis_z, &dual_basis(n, &code.basis_x));
            let b = cheap_logical(n, &code.basis_x, &dual_basis(n, &code.basis_z));
            a.into_iter()
                .chain(b)
                .min()
                .map(|upper| DistanceResult::UpperBound { upper })
                .ok_or(CssError::NoLogicals)
        }
        Err(e) => Err(e),
    }
}

fn count_weights<W: SpanWord>(basis: &[W], zero: W, n: usize) -> Vec<u64> {
    span_fold(
        basis,
        zero,
        || vec![0u64; n + 1],
        |acc: &mut Vec<u64>, w, _| acc[w.hamming()] += 1,
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )
}

/// Exact weight enumerator of `span(basis)` in length `n`.
pub fn weight_enumerator(basis: &[BitVector], n: usize, cap: u64) -> Result<WeightEnumerator, F2Error> {
    f2::enumerate_span(n, basis, cap)?;
    let counts = match basis_as_u64(basis) {
        Some(words) => count_weights(&words, 0u64, n),
        None => count_weights(basis, BitVector::zeros(n), n),
    };
    Ok(WeightEnumerator::new(counts.into_iter().map(BigUint::from).collect()).expect("n + 1 bins"))
}

/// `n, k, d_min` together with rate and relative distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub d_min: usize,
}

impl CodeParams {
    pub fn of(code: &CssCode, cap: u64) -> Result<Self, CssError> {
        Ok(Self {
            n: code.n(),
            k: code_dimension(code)?,
            d_min: min_distance(code, cap)?,
        })
    }

    pub fn rate(&self) -> BigRational {
        BigRational::new(BigInt::from(self.k), BigInt::from(self.n))
    }

    pub fn delta_min(&self) -> BigRational {
        BigRational::new(BigInt::from(self.d_min), BigInt::from(self.n))
    }
}

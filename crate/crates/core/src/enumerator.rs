//! Weight enumerators, the MacWilliams transform, and the weak-binomiality
//! test.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::kravchuk::{binomial, KravchukTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumeratorError {
    #[error("enumerator needs at least one bin")]
    Empty,
    #[error("code size {given} does not equal the enumerator total {total}")]
    SizeMismatch { given: BigUint, total: BigUint },
    #[error("dual count at weight {k} is not an integer; input is not a linear code's enumerator")]
    NonIntegerResult { k: usize },
    #[error("dual count at weight {k} is negative; input is not a linear code's enumerator")]
    NegativeResult { k: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// `(B_0, ..., B_n)`: number of codewords of each Hamming weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightEnumerator {
    counts: Vec<BigUint>,
}

impl WeightEnumerator {
    pub fn new(counts: Vec<BigUint>) -> Result<Self, EnumeratorError> {
        if counts.is_empty() {
            return Err(EnumeratorError::Empty);
        }
        Ok(Self { counts })
    }

    pub fn from_u64(counts: &[u64]) -> Result<Self, EnumeratorError> {
        Self::new(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// Enumerator of the zero code `{0}` in length `n`.
    pub fn zero_code(n: usize) -> Self {
        let mut counts = vec![BigUint::zero(); n + 1];
        counts[0] = BigUint::one();
        Self { counts }
    }

    /// Enumerator of the full space: `B_k = C(n, k)`.
    pub fn full_space(n: usize) -> Self {
        Self {
            counts: (0..=n)
                .map(|k| binomial(n, k).to_biguint().expect("binomials are non-negative"))
                .collect(),
        }
    }

    /// Ambient length.
    pub fn n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn count(&self, k: usize) -> &BigUint {
        &self.counts[k]
    }

    /// `sum_k B_k`, the number of codewords.
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// `Some(m)` when the total is `2^m`.
    pub fn log2_total(&self) -> Option<usize> {
        let total = self.total();
        let bits = total.bits() as usize;
        (bits > 0 && total == BigUint::one() << (bits - 1)).then(|| bits - 1)
    }

    /// Smallest nonzero weight that occurs, if any.
    pub fn min_nonzero_weight(&self) -> Option<usize> {
        (1..self.counts.len()).find(|&k| !self.counts[k].is_zero())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.counts.iter().map(ToString::to_string).collect()
    }
}

impl Serialize for WeightEnumerator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

/// `B_k^perp = |C|^-1 sum_j P_k(j) B_j`.
pub fn macwilliams_transform(
    enumerator: &WeightEnumerator,
    code_size: &BigUint,
) -> Result<WeightEnumerator, EnumeratorError> {
    macwilliams_with(&KravchukTable::new(enumerator.n()), enumerator, code_size)
}

/// [`macwilliams_transform`] against a prebuilt table of matching length.
pub fn macwilliams_with(
    table: &KravchukTable,
    enumerator: &WeightEnumerator,
    code_size: &BigUint,
) -> Result<WeightEnumerator, EnumeratorError> {
    let n = enumerator.n();
    if table.n() != n {
        return Err(EnumeratorError::InvalidParameter(format!(
            "Kravchuk table has n = {}, enumerator has n = {n}",
            table.n()
        )));
    }
    let total = enumerator.total();
    if &total != code_size {
        return Err(EnumeratorError::SizeMismatch {
            given: code_size.clone(),
            total,
        });
    }
    let size = BigInt::from(code_size.clone());
    let counts: Vec<BigInt> = enumerator.counts.iter().map(|c| BigInt::from(c.clone())).collect();
    let mut dual = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let sum: BigInt = (0..=n)
            .filter(|&j| !counts[j].is_zero())
            .map(|j| table.get(k, j) * &counts[j])
            .sum();
        let (q, r) = sum.div_rem(&size);
        if !r.is_zero() {
            return Err(EnumeratorError::NonIntegerResult { k });
        }
        if q.is_negative() {
            return Err(EnumeratorError::NegativeResult { k });
        }
        dual.push(q.to_biguint().expect("checked non-negative"));
    }
    Ok(WeightEnumerator { counts: dual })
}

/// `|C| sum_j alpha_j B_j^perp - sum_j alpha(j) B_j`, where `alpha` is given
/// by its Kravchuk coefficients. Zero whenever `B`, `B_perp` are a dual pair.
pub fn functional_identity_check(
    alpha: &[BigInt],
    enumerator: &WeightEnumerator,
    dual: &WeightEnumerator,
    code_size: &BigUint,
) -> BigInt {
    let n = enumerator.n();
    let table = KravchukTable::new(n);
    let size = BigInt::from(code_size.clone());
    let lhs: BigInt = alpha
        .iter()
        .zip(dual.counts())
        .map(|(a, b)| a * BigInt::from(b.clone()))
        .sum::<BigInt>()
        * size;
    let rhs: BigInt = (0..=n)
        .map(|j| table.combine(alpha, j) * BigInt::from(enumerator.count(j).clone()))
        .sum();
    lhs - rhs
}

/// Relative amount by which the fractional part of `2^x` is shaved before
/// comparison, so rounding can only make the bound smaller.
pub const WEAK_BINOMIAL_SLACK: f64 = 1e-12;

/// A rational lower bound on `2^x`. Exact when `x` is an integer.
fn pow2_lower(x: f64) -> BigRational {
    let whole = x.floor();
    let frac = x - whole;
    let whole = whole as i64;
    let scale = if whole >= 0 {
        BigRational::from_integer(BigInt::one() << whole as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-whole) as usize)
    };
    if frac == 0.0 {
        return scale;
    }
    let f = frac.exp2() * (1.0 - WEAK_BINOMIAL_SLACK);
    scale * BigRational::from_float(f).expect("finite")
}

/// Weights `k` at which `B_k > 2^{zeta n} C(n,k) / |C^perp| + 2^{eta n}`.
///
/// Empty means the code is `(zeta, eta)`-weakly-binomial. The transcendental
/// factors are rounded down (see [`WEAK_BINOMIAL_SLACK`]) so a violation is
/// never missed; when `zeta n` and `eta n` are integers the test is exact.
pub fn weakly_binomial_check(
    enumerator: &WeightEnumerator,
    dual_size: &BigUint,
    zeta: f64,
    eta: f64,
) -> Result<Vec<usize>, EnumeratorError> {
    for (name, v) in [("zeta", zeta), ("eta", eta)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(EnumeratorError::InvalidParameter(format!(
                "{name} must be finite and >= 0, got {v}"
            )));
        }
    }
    if dual_size.is_zero() {
        return Err(EnumeratorError::InvalidParameter("dual size must be positive".into()));
    }
    let n = enumerator.n();
    let scale = pow2_lower(zeta * n as f64) / BigRational::from_integer(BigInt::from(dual_size.clone()));
    let floor = pow2_lower(eta * n as f64);
    Ok((0..=n)
        .filter(|&k| {
            let bound = &scale * BigRational::from_integer(binomial(n, k)) + &floor;
            BigRational::from_integer(BigInt::from_biguint(Sign::Plus, enumerator.count(k).clone())) > bound
        })
        .collect())
}

/// Floating-point view of a rational, for reporting.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

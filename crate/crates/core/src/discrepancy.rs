//! Discrepancy of `d`-uniform hypergraphs against the binomial overlap law.
//!
//! Vertices are 0-based here; files and serialized reports use 1-based
//! labels.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::Serialize;
use thiserror::Error;

use crate::f2::{BitVector, F2Matrix};
use crate::kravchuk::binomial;

/// Largest vertex count handled by [`discrepancy_exact`] unless overridden.
pub const EXACT_THRESHOLD: usize = 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiscrepancyError {
    #[error("face {face} has {found} vertices, expected {expected}")]
    WrongFaceSize { face: usize, expected: usize, found: usize },
    #[error("face {face} repeats a vertex")]
    RepeatedVertex { face: usize },
    #[error("face {face} names vertex {vertex} outside 0..{n}")]
    VertexOutOfRange { face: usize, vertex: usize, n: usize },
    #[error("faces {first} and {second} coincide")]
    DuplicateFace { first: usize, second: usize },
    #[error("hypergraph has no faces")]
    NoFaces,
    #[error("uniformity d must be at least 1")]
    ZeroUniformity,
    #[error("rows {rows:?} do not have the weight {expected} of row 0")]
    NotUniform { expected: usize, rows: Vec<usize> },
    #[error("n = {n} exceeds the exhaustive threshold {threshold}; use sampled mode")]
    TooLarge { n: usize, threshold: usize },
    #[error("subset has length {found}, expected {expected}")]
    SubsetLength { expected: usize, found: usize },
    #[error("samples must be at least 1")]
    NoSamples,
}

/// Faces of a `d`-uniform hypergraph on `n` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    d: usize,
    faces: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Faces are sorted internally; their order is kept.
    pub fn new(n: usize, d: usize, faces: Vec<Vec<usize>>) -> Result<Self, DiscrepancyError> {
        if d == 0 {
            return Err(DiscrepancyError::ZeroUniformity);
        }
        if faces.is_empty() {
            return Err(DiscrepancyError::NoFaces);
        }
        let mut sorted = Vec::with_capacity(faces.len());
        let mut seen = std::collections::HashMap::new();
        for (i, mut f) in faces.into_iter().enumerate() {
            if f.len() != d {
                return Err(DiscrepancyError::WrongFaceSize {
                    face: i,
                    expected: d,
                    found: f.len(),
                });
            }
            f.sort_unstable();
            if let Some(&vertex) = f.iter().find(|&&v| v >= n) {
                return Err(DiscrepancyError::VertexOutOfRange { face: i, vertex, n });
            }
            if f.windows(2).any(|w| w[0] == w[1]) {
                return Err(DiscrepancyError::RepeatedVertex { face: i });
            }
            if let Some(&first) = seen.get(&f) {
                return Err(DiscrepancyError::DuplicateFace { first, second: i });
            }
            seen.insert(f.clone(), i);
            sorted.push(f);
        }
        Ok(Self { n, d, faces: sorted })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for f in &self.faces {
            for &v in f {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Common vertex degree `K`, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.vertex_degrees();
        let first = *deg.first()?;
        deg.iter().all(|&k| k == first).then_some(first)
    }

    /// Faces as length-`n` indicator words.
    pub fn face_words(&self) -> Vec<BitVector> {
        self.faces
            .iter()
            .map(|f| BitVector::from_support(self.n, f).expect("validated"))
            .collect()
    }

    /// The same hypergraph with vertex `v` renamed `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, DiscrepancyError> {
        Self::new(
            self.n,
            self.d,
            self.faces.iter().map(|f| f.iter().map(|&v| perm[v]).collect()).collect(),
        )
    }
}

/// `A(S, j)` for `j = 0..=d`: faces with exactly `j` vertices in `S`.
pub fn overlap_counts(h: &Hypergraph, s: &BitVector) -> Result<Vec<u64>, DiscrepancyError> {
    if s.len() != h.n {
        return Err(DiscrepancyError::SubsetLength {
            expected: h.n,
            found: s.len(),
        });
    }
    let mut a = vec![0u64; h.d + 1];
    for f in &h.faces {
        a[f.iter().filter(|&&v| s.get(v)).count()] += 1;
    }
    Ok(a)
}

/// The law each overlap frequency is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// `C(d,j) (s/n)^j (1 - s/n)^(d-j)`.
    #[default]
    Binomial,
    /// `C(s,j) C(n-s,d-j) / C(n,d)`, the exact law of a uniform `d`-set.
    Hypergeometric,
}

impl Reference {
    /// Target probability for subset size `s` and overlap `j`.
    pub fn target(self, n: usize, d: usize, s: usize, j: usize) -> BigRational {
        match self {
            Reference::Binomial => {
                let num = binomial(d, j) * BigInt::from(s).pow(j as u32) * BigInt::from(n - s).pow((d - j) as u32);
                BigRational::new(num, BigInt::from(n).pow(d as u32))
            }
            Reference::Hypergeometric => {
                BigRational::new(binomial(s, j) * binomial(n - s, d - j), binomial(n, d))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Sampled,
}

/// Worst deviation found and the subset attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscrepancyReport {
    pub epsilon: BigRational,
    pub witness_s: Vec<usize>,
    pub witness_j: usize,
    /// `A(witness_s, witness_j)`.
    pub witness_count: u64,
    pub mode: Mode,
    /// Subsets evaluated.
    pub samples: u64,
    pub reference: Reference,
}

impl DiscrepancyReport {
    pub fn epsilon_f64(&self) -> f64 {
        self.epsilon.to_f64().unwrap_or(f64::NAN)
    }
}

impl Serialize for DiscrepancyReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DiscrepancyReport", 8)?;
        st.serialize_field("epsilon", &crate::ratio_str(&self.epsilon))?;
        st.serialize_field("epsilon_f64", &self.epsilon_f64())?;
        let witness: Vec<usize> = self.witness_s.iter().map(|v| v + 1).collect();
        st.serialize_field("witness_s", &witness)?;
        st.serialize_field("witness_j", &self.witness_j)?;
        st.serialize_field("witness_count", &self.witness_count)?;
        st.serialize_field("mode", &self.mode)?;
        st.serialize_field("samples", &self.samples)?;
        st.serialize_field("reference", &self.reference)?;
        st.end()
    }
}

/// Per `(|S|, j)` extremes of `A(S, j)`, each with the smallest key attaining it.
#[derive(Clone)]
struct Extremes {
    d: usize,
    /// Indexed by `s * (d + 1) + j`: `(min, key)` and `(max, key)`.
    lo: Vec<Option<(u64, u64)>>,
    hi: Vec<Option<(u64, u64)>>,
}

impl Extremes {
    fn new(n: usize, d: usize) -> Self {
        let len = (n + 1) * (d + 1);
        Self {
            d,
            lo: vec![None; len],
            hi: vec![None; len],
        }
    }

    fn record(&mut self, s: usize, counts: &[u64], key: u64) {
        let base = s * (self.d + 1);
        for (j, &a) in counts.iter().enumerate() {
            let lo = &mut self.lo[base + j];
            if lo.is_none_or(|(v, k)| (a, key) < (v, k)) {
                *lo = Some((a, key));
            }
            let hi = &mut self.hi[base + j];
            if hi.is_none_or(|(v, k)| a > v || (a == v && key < k)) {
                *hi = Some((a, key));
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (i, o) in other.lo.into_iter().enumerate() {
            if let Some((a, key)) = o {
                let lo = &mut self.lo[i];
                if lo.is_none_or(|(v, k)| (a, key) < (v, k)) {
                    *lo = Some((a, key));
                }
            }
        }
        for (i, o) in other.hi.into_iter().enumerate() {
            if let Some((a, key)) = o {
                let hi = &mut self.hi[i];
                if hi.is_none_or(|(v, k)| a > v || (a == v && key < k)) {
                    *hi = Some((a, key));
                }
            }
        }
        self
    }

    /// `(epsilon, key, j, count)` maximising the deviation; ties go to the
    /// smaller key, then smaller `j`.
    fn resolve(&self, n: usize, faces: u64, reference: Reference) -> (BigRational, u64, usize, u64) {
        let e = BigRational::from_integer(BigInt::from(faces));
        let mut best: Option<(BigRational, u64, usize, u64)> = None;
        for s in 0..=n {
            for j in 0..=self.d {
                let target = reference.target(n, self.d, s, j);
                let idx = s * (self.d + 1) + j;
                for (a, key) in [self.lo[idx], self.hi[idx]].into_iter().flatten() {
                    let dev = (BigRational::from_integer(BigInt::from(a)) / &e - &target).abs();
                    let better = match &best {
                        None => true,
                        Some((b, bk, bj, _)) => dev > *b || (dev == *b && (key, j) < (*bk, *bj)),
                    };
                    if better {
                        best = Some((dev, key, j, a));
                    }
                }
            }
        }
        best.expect("at least the empty subset is recorded")
    }
}

/// Exhaustive discrepancy over all `2^n` subsets, `n <= EXACT_THRESHOLD`.
pub fn discrepancy_exact(h: &Hypergraph) -> Result<DiscrepancyReport, DiscrepancyError> {
    discrepancy_exact_with(h, EXACT_THRESHOLD, Reference::Binomial)
}

/// [`discrepancy_exact`] with an explicit threshold and reference law.
pub fn discrepancy_exact_with(
    h: &Hypergraph,
    threshold: usize,
    reference: Reference,
) -> Result<DiscrepancyReport, DiscrepancyError> {
    let n = h.n;
    if n > threshold.min(32) {
        return Err(DiscrepancyError::TooLarge { n, threshold });
    }
    let d = h.d;
    let masks: Vec<u32> = h
        .faces
        .iter()
        .map(|f| f.iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    let total: u64 = 1u64 << n;
    let chunk_bits = n.min(10);
    let chunks = 1u64 << (n - chunk_bits);
    let per_chunk = 1u64 << chunk_bits;
    let ext = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut ext = Extremes::new(n, d);
            let mut counts = vec![0u64; d + 1];
            for low in 0..per_chunk {
                let s = (c << chunk_bits) | low;
                counts.iter_mut().for_each(|x| *x = 0);
                let sm = s as u32;
                for &f in &masks {
                    counts[(f & sm).count_ones() as usize] += 1;
                }
                ext.record(sm.count_ones() as usize, &counts, s);
            }
            ext
        })
        .reduce(|| Extremes::new(n, d), Extremes::merge);
    let (epsilon, key, j, count) = ext.resolve(n, masks.len() as u64, reference);
    Ok(DiscrepancyReport {
        epsilon,
        witness_s: (0..n).filter(|&v| key >> v & 1 == 1).collect(),
        witness_j: j,
        witness_count: count,
        mode: Mode::Exact,
        samples: total,
        reference,
    })
}

/// Structured subsets always tried by the sampler: singletons, the first and
/// second halves, alternating vertices, and every face.
fn heuristic_subsets(h: &Hypergraph) -> Vec<Vec<usize>> {
    let n = h.n;
    let mut out: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    out.push((0..n / 2).collect());
    out.push((n / 2..n).collect());
    out.push((0..n).step_by(2).collect());
    out.push((1..n).step_by(2).collect());
    out.extend(h.faces.iter().cloned());
    out
}

/// Lower bound on the discrepancy from `samples` random subsets (size drawn
/// uniformly from `0..=n`, then a uniform subset of that size) plus the
/// heuristic family. Deterministic in `seed`.
pub fn discrepancy_sampled(h: &Hypergraph, samples: u64, seed: u64) -> Result<DiscrepancyReport, DiscrepancyError> {
    discrepancy_sampled_with(h, samples, seed, Reference::Binomial)
}

pub fn discrepancy_sampled_with(
    h: &Hypergraph,
    samples: u64,
    seed: u64,
    reference: Reference,
) -> Result<DiscrepancyReport, DiscrepancyError> {
    if samples == 0 {
        return Err(DiscrepancyError::NoSamples);
    }
    let n = h.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut subsets = heuristic_subsets(h);
    for _ in 0..samples {
        let size = rng.random_range(0..=n);
        let mut s = index::sample(&mut rng, n, size).into_vec();
        s.sort_unstable();
        subsets.push(s);
    }
    // dedupe keeps the first occurrence so keys stay deterministic
    let mut seen = BTreeSet::new();
    subsets.retain(|s| seen.insert(s.clone()));

    let membership: Vec<Vec<bool>> = subsets
        .iter()
        .map(|s| {
            let mut m = vec![false; n];
            s.iter().for_each(|&v| m[v] = true);
            m
        })
        .collect();
    let d = h.d;
    let ext = membership
        .par_iter()
        .enumerate()
        .fold(
            || Extremes::new(n, d),
            |mut ext, (key, m)| {
                let mut counts = vec![0u64; d + 1];
                for f in &h.faces {
                    counts[f.iter().filter(|&&v| m[v]).count()] += 1;
                }
                ext.record(subsets[key].len(), &counts, key as u64);
                ext
            },
        )
        .reduce(|| Extremes::new(n, d), Extremes::merge);
    let (epsilon, key, j, count) = ext.resolve(n, h.num_faces() as u64, reference);
    Ok(DiscrepancyReport {
        epsilon,
        witness_s: subsets[key as usize].clone(),
        witness_j: j,
        witness_count: count,
        mode: Mode::Sampled,
        samples: subsets.len() as u64,
        reference,
    })
}

/// `|A(S,j)/|E| - target|` for one subset, to re-check a witness.
pub fn deviation(h: &Hypergraph, s: &[usize], j: usize, reference: Reference) -> Result<BigRational, DiscrepancyError> {
    let word = BitVector::from_support(h.n, s).map_err(|_| DiscrepancyError::SubsetLength {
        expected: h.n,
        found: s.iter().max().map_or(0, |m| m + 1),
    })?;
    let a = overlap_counts(h, &word)?;
    let freq = BigRational::new(BigInt::from(a[j]), BigInt::from(h.num_faces()));
    Ok((freq - reference.target(h.n, h.d, s.len(), j)).abs())
}

/// Rows of `m` as faces on `m.cols()` vertices.
pub fn rows_as_hypergraph(m: &F2Matrix) -> Result<Hypergraph, DiscrepancyError> {
    if m.rows() == 0 {
        return Err(DiscrepancyError::NoFaces);
    }
    let weights = m.row_weights();
    let expected = weights[0];
    let rows: Vec<usize> = (0..m.rows()).filter(|&r| weights[r] != expected).collect();
    if !rows.is_empty() {
        return Err(DiscrepancyError::NotUniform { expected, rows });
    }
    Hypergraph::new(m.cols(), expected, m.row_supports().to_vec())
}

/// Whether `epsilon` is an exact zero deviation.
pub fn is_perfect(report: &DiscrepancyReport) -> bool {
    report.epsilon.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::toric_complex;
    use rand::seq::SliceRandom;

    fn complete2(n: usize) -> Hypergraph {
        let mut faces = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                faces.push(vec![a, b]);
            }
        }
        Hypergraph::new(n, 2, faces).unwrap()
    }

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn overlap_examples() {
        let h = complete2(4);
        let s = BitVector::from_support(4, &[0, 1]).unwrap();
        assert_eq!(overlap_counts(&h, &s).unwrap(), vec![1, 4, 1]);
        assert_eq!(overlap_counts(&h, &BitVector::zeros(4)).unwrap(), vec![6, 0, 0]);
        let all = BitVector::from_support(4, &[0, 1, 2, 3]).unwrap();
        assert_eq!(overlap_counts(&h, &all).unwrap(), vec![0, 0, 6]);
    }

    #[test]
    fn exact_examples() {
        let singletons = Hypergraph::new(5, 1, (0..5).map(|v| vec![v]).collect()).unwrap();
        assert!(is_perfect(&discrepancy_exact(&singletons).unwrap()));

        let rep = discrepancy_exact(&complete2(4)).unwrap();
        assert_eq!(rep.epsilon, r(1, 6));
        assert_eq!(rep.witness_s.len(), 2);
        assert_eq!(rep.witness_j, 1);

        let single = Hypergraph::new(4, 2, vec![vec![0, 1]]).unwrap();
        let rep = discrepancy_exact(&single).unwrap();
        assert_eq!(rep.epsilon, r(3, 4));
        assert_eq!(rep.witness_s, vec![0, 1]);
        assert_eq!(rep.witness_j, 2);
    }

    #[test]
    fn witness_reproduces_epsilon() {
        let h = rows_as_hypergraph(&toric_complex(2).unwrap().boundary2().transpose()).unwrap();
        let rep = discrepancy_exact(&h).unwrap();
        assert_eq!(deviation(&h, &rep.witness_s, rep.witness_j, rep.reference).unwrap(), rep.epsilon);
    }

    #[test]
    fn exact_rejects_large() {
        let h = Hypergraph::new(30, 1, vec![vec![0]]).unwrap();
        assert!(matches!(discrepancy_exact(&h), Err(DiscrepancyError::TooLarge { .. })));
    }

    #[test]
    fn sampled_is_deterministic_and_below_exact() {
        let h = rows_as_hypergraph(&toric_complex(3).unwrap().boundary2().transpose()).unwrap();
        let a = discrepancy_sampled(&h, 500, 11).unwrap();
        let b = discrepancy_sampled(&h, 500, 11).unwrap();
        assert_eq!(a, b);
        let exact = discrepancy_exact(&h).unwrap();
        assert!(a.epsilon <= exact.epsilon);
        assert_eq!(
            discrepancy_sampled(&complete2(4), 10_000, 3).unwrap().epsilon,
            r(1, 6)
        );
    }

    #[test]
    fn hypergraph_from_rows() {
        let m = F2Matrix::from_bit_rows(4, &["1100", "0110"]);
        let h = rows_as_hypergraph(&m).unwrap();
        assert_eq!(h.d(), 2);
        assert_eq!(h.faces(), &[vec![0, 1], vec![1, 2]]);
        let bad = F2Matrix::from_bit_rows(4, &["1100", "0111", "1000"]);
        assert_eq!(
            rows_as_hypergraph(&bad),
            Err(DiscrepancyError::NotUniform { expected: 2, rows: vec![1, 2] })
        );
        let t = rows_as_hypergraph(&toric_complex(3).unwrap().boundary2().transpose()).unwrap();
        assert_eq!((t.d(), t.num_faces(), t.n()), (4, 9, 18));
        assert_eq!(t.regular_degree(), Some(2));
    }

    #[test]
    fn validation() {
        assert!(matches!(
            Hypergraph::new(3, 2, vec![vec![0, 0]]),
            Err(DiscrepancyError::RepeatedVertex { .. })
        ));
        assert!(matches!(
            Hypergraph::new(3, 2, vec![vec![0, 1], vec![1, 0]]),
            Err(DiscrepancyError::DuplicateFace { first: 0, second: 1 })
        ));
        assert!(matches!(
            Hypergraph::new(3, 2, vec![vec![0, 3]]),
            Err(DiscrepancyError::VertexOutOfRange { .. })
        ));
        assert!(Hypergraph::new(3, 2, vec![vec![0]]).is_err());
    }

    #[test]
    fn complement_symmetry_and_relabelling() {
        let h = Hypergraph::new(7, 3, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 6], vec![0, 3, 6]]).unwrap();
        let s = BitVector::from_support(7, &[1, 3, 5]).unwrap();
        let c = BitVector::from_support(7, &[0, 2, 4, 6]).unwrap();
        let a = overlap_counts(&h, &s).unwrap();
        let b = overlap_counts(&h, &c).unwrap();
        for j in 0..=3 {
            assert_eq!(a[j], b[3 - j]);
        }
        let mut perm: Vec<usize> = (0..7).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(5));
        let e1 = discrepancy_exact(&h).unwrap().epsilon;
        let e2 = discrepancy_exact(&h.relabel(&perm).unwrap()).unwrap().epsilon;
        assert_eq!(e1, e2);
    }

    #[test]
    fn hypergeometric_reference_is_exact_for_complete_hypergraphs() {
        let rep = discrepancy_exact_with(&complete2(5), EXACT_THRESHOLD, Reference::Hypergeometric).unwrap();
        assert!(rep.epsilon.is_zero());
    }
}

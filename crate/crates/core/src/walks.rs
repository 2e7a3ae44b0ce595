//! Finite Markov chains with exact rational transitions: stationary laws,
//! lumping, detailed balance, and the Cayley walk on a code together with
//! its projection onto Hamming shells.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde_json::json;
use thiserror::Error;

use crate::discrepancy::Reference;
use crate::enumerator::WeightEnumerator;
use crate::f2::{self, basis_as_u64, span_fold, BitVector, F2Error, SpanWord};
use crate::kravchuk::binomial;

/// Chains with at most this many states are solved exactly.
pub const EXACT_STATES: usize = 64;

/// Iteration budget for the floating-point solver.
const MAX_ITERATIONS: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("row {row} sums to {sum}, not 1")]
    NotStochastic { row: usize, sum: String },
    #[error("row {row} has negative entry at column {col}")]
    NegativeEntry { row: usize, col: usize },
    #[error("row {row} names column {col} outside 0..{states}")]
    EntryOutOfRange { row: usize, col: usize, states: usize },
    #[error("chain is reducible; communicating classes {components:?}")]
    Reducible { components: Vec<Vec<usize>> },
    #[error("power iteration stopped with residual {residual:e}")]
    NotConverged { residual: f64 },
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("block {block} has zero stationary mass")]
    ZeroBlockMass { block: usize },
    #[error("distribution has {found} entries, chain has {expected} states")]
    DistributionLength { expected: usize, found: usize },
    #[error("generator set is empty")]
    EmptyGenerators,
    #[error("chains have n = {expected} and n = {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("shell stationary law differs from the uniform law aggregated by shells")]
    NonUniformStationary,
    #[error(transparent)]
    F2(#[from] F2Error),
}

/// Row-stochastic matrix stored as sorted sparse rows of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteChain {
    rows: Vec<Vec<(usize, BigRational)>>,
    labels: Option<Vec<String>>,
}

impl FiniteChain {
    /// Zero entries are dropped, duplicate columns summed.
    pub fn new(rows: Vec<Vec<(usize, BigRational)>>) -> Result<Self, WalkError> {
        let states = rows.len();
        let mut clean = Vec::with_capacity(states);
        for (r, row) in rows.into_iter().enumerate() {
            let mut merged: BTreeMap<usize, BigRational> = BTreeMap::new();
            for (c, v) in row {
                if c >= states {
                    return Err(WalkError::EntryOutOfRange { row: r, col: c, states });
                }
                if v.is_negative() {
                    return Err(WalkError::NegativeEntry { row: r, col: c });
                }
                *merged.entry(c).or_insert_with(BigRational::zero) += v;
            }
            let row: Vec<(usize, BigRational)> = merged.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            let sum: BigRational = row.iter().map(|(_, v)| v).sum();
            if !sum.is_one() {
                return Err(WalkError::NotStochastic {
                    row: r,
                    sum: crate::ratio_str(&sum),
                });
            }
            clean.push(row);
        }
        Ok(Self { rows: clean, labels: None })
    }

    pub fn from_dense(m: Vec<Vec<BigRational>>) -> Result<Self, WalkError> {
        Self::new(m.into_iter().map(|row| row.into_iter().enumerate().collect()).collect())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn states(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[(usize, BigRational)] {
        &self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        match self.rows[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(pos) => self.rows[i][pos].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<BigRational>> {
        let n = self.states();
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![BigRational::zero(); n];
                for (c, v) in row {
                    dense[*c] = v.clone();
                }
                dense
            })
            .collect()
    }

    /// Strongly connected components, each sorted, in order of smallest state.
    pub fn communicating_classes(&self) -> Vec<Vec<usize>> {
        let mut g = DiGraph::<(), ()>::with_capacity(self.states(), 0);
        let nodes: Vec<_> = (0..self.states()).map(|_| g.add_node(())).collect();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, _) in row {
                g.add_edge(nodes[i], nodes[*j], ());
            }
        }
        let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|ix| ix.index()).collect();
                c.sort_unstable();
                c
            })
            .collect();
        comps.sort();
        comps
    }

    pub fn check_irreducible(&self) -> Result<(), WalkError> {
        let comps = self.communicating_classes();
        if comps.len() > 1 {
            return Err(WalkError::Reducible { components: comps });
        }
        Ok(())
    }

    /// `pi^T M`.
    pub fn left_apply(&self, pi: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.states()];
        for (i, row) in self.rows.iter().enumerate() {
            if pi[i].is_zero() {
                continue;
            }
            for (j, v) in row {
                out[*j] += &pi[i] * v;
            }
        }
        out
    }

    /// Exact test of `pi^T M = pi^T`.
    pub fn is_stationary(&self, pi: &[BigRational]) -> bool {
        pi.len() == self.states() && self.left_apply(pi) == pi
    }

    /// The chain restricted to `states`, which must be closed under
    /// transitions.
    pub fn restrict(&self, states: &[usize]) -> Result<Self, WalkError> {
        let mut index = vec![usize::MAX; self.states()];
        for (k, &s) in states.iter().enumerate() {
            index[s] = k;
        }
        let rows = states
            .iter()
            .map(|&s| {
                self.rows[s]
                    .iter()
                    .map(|(c, v)| (index[*c], v.clone()))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        if rows.iter().flatten().any(|(c, _)| *c == usize::MAX) {
            return Err(WalkError::BadPartition("restriction leaves the state set".into()));
        }
        Self::new(rows)
    }
}

/// A stationary law, exact when the solver allowed it.
#[derive(Clone, Debug, PartialEq)]
pub enum Distribution {
    Exact(Vec<BigRational>),
    Approx { values: Vec<f64>, residual: f64 },
}

impl Distribution {
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Distribution::Exact(v) => v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
            Distribution::Approx { values, .. } => values.clone(),
        }
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        match self {
            Distribution::Exact(v) => Some(v),
            Distribution::Approx { .. } => None,
        }
    }
}

/// Solves `pi^T (M - I) = 0`, `sum pi = 1` by elimination. Periodic chains
/// are fine; the chain must be irreducible for the answer to be unique.
fn solve_exact(chain: &FiniteChain) -> Vec<BigRational> {
    let n = chain.states();
    let dense = chain.to_dense();
    // equation per column j, last replaced by normalisation
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut eq: Vec<BigRational> = (0..n).map(|i| dense[i][j].clone()).collect();
            eq[j] -= BigRational::one();
            eq.push(BigRational::zero());
            eq
        })
        .collect();
    a[n - 1] = vec![BigRational::one(); n + 1];
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("irreducible chains have a unique stationary law");
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
    }
    a.into_iter().map(|row| row[n].clone()).collect()
}

fn solve_float(chain: &FiniteChain, tol: f64) -> Result<(Vec<f64>, f64), WalkError> {
    let n = chain.states();
    let rows: Vec<Vec<(usize, f64)>> = chain
        .rows
        .iter()
        .map(|r| r.iter().map(|(c, v)| (*c, v.to_f64().unwrap_or(0.0))).collect())
        .collect();
    let step = |pi: &[f64]| {
        let mut out = vec![0.0; n];
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row {
                out[*j] += pi[i] * v;
            }
        }
        out
    };
    let residual = |pi: &[f64]| {
        step(pi).iter().zip(pi).map(|(a, b)| (a - b).abs()).sum::<f64>()
    };
    let mut pi = vec![1.0 / n as f64; n];
    for it in 0..MAX_ITERATIONS {
        // lazy step so periodic chains converge
        let next: Vec<f64> = step(&pi).iter().zip(&pi).map(|(a, b)| 0.5 * (a + b)).collect();
        let total: f64 = next.iter().sum();
        pi = next.into_iter().map(|x| x / total).collect();
        if it % 64 == 63 {
            let r = residual(&pi);
            if r <= tol {
                return Ok((pi, r));
            }
        }
    }
    let r = residual(&pi);
    if r <= tol {
        Ok((pi, r))
    } else {
        Err(WalkError::NotConverged { residual: r })
    }
}

/// Stationary law of an irreducible chain: exact for up to
/// [`EXACT_STATES`] states, power iteration on the lazy chain beyond.
pub fn stationary(chain: &FiniteChain, tol: f64) -> Result<Distribution, WalkError> {
    chain.check_irreducible()?;
    if chain.states() <= EXACT_STATES {
        return Ok(Distribution::Exact(solve_exact(chain)));
    }
    let (values, residual) = solve_float(chain, tol)?;
    Ok(Distribution::Approx { values, residual })
}

fn check_partition(states: usize, partition: &[Vec<usize>]) -> Result<(), WalkError> {
    let mut seen = vec![false; states];
    for (b, block) in partition.iter().enumerate() {
        if block.is_empty() {
            return Err(WalkError::BadPartition(format!("block {b} is empty")));
        }
        for &s in block {
            if s >= states {
                return Err(WalkError::BadPartition(format!("state {s} out of range")));
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(WalkError::BadPartition(format!("state {s} appears twice")));
            }
        }
    }
    if let Some(s) = seen.iter().position(|x| !x) {
        return Err(WalkError::BadPartition(format!("state {s} is not covered")));
    }
    Ok(())
}

/// `pi_A = sum_{i in A} pi_i` for each block.
pub fn aggregate(pi: &[BigRational], partition: &[Vec<usize>]) -> Vec<BigRational> {
    partition
        .iter()
        .map(|block| block.iter().map(|&i| &pi[i]).sum())
        .collect()
}

/// `M'_{A,B} = sum_{i in A} sum_{j in B} (pi_i / pi_A) M_{i,j}`.
pub fn coarse_grain(
    chain: &FiniteChain,
    partition: &[Vec<usize>],
    pi: &[BigRational],
) -> Result<FiniteChain, WalkError> {
    if pi.len() != chain.states() {
        return Err(WalkError::DistributionLength {
            expected: chain.states(),
            found: pi.len(),
        });
    }
    check_partition(chain.states(), partition)?;
    let mut block_of = vec![0usize; chain.states()];
    for (b, block) in partition.iter().enumerate() {
        for &s in block {
            block_of[s] = b;
        }
    }
    let mass = aggregate(pi, partition);
    let mut rows = Vec::with_capacity(partition.len());
    for (a, block) in partition.iter().enumerate() {
        if mass[a].is_zero() {
            return Err(WalkError::ZeroBlockMass { block: a });
        }
        let mut row: BTreeMap<usize, BigRational> = BTreeMap::new();
        for &i in block {
            if pi[i].is_zero() {
                continue;
            }
            let w = &pi[i] / &mass[a];
            for (j, v) in chain.row(i) {
                *row.entry(block_of[*j]).or_insert_with(BigRational::zero) += &w * v;
            }
        }
        rows.push(row.into_iter().collect());
    }
    FiniteChain::new(rows)
}

/// Detailed-balance result: the largest `|pi_i M_ij - pi_j M_ji|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reversibility {
    pub reversible: bool,
    pub max_violation: BigRational,
    pub worst: Option<(usize, usize)>,
}

/// Checks `pi_i M_ij = pi_j M_ji` exactly and accepts violations up to `tol`.
pub fn is_reversible(chain: &FiniteChain, pi: &[BigRational], tol: f64) -> Result<Reversibility, WalkError> {
    if pi.len() != chain.states() {
        return Err(WalkError::DistributionLength {
            expected: chain.states(),
            found: pi.len(),
        });
    }
    let mut max = BigRational::zero();
    let mut worst = None;
    for i in 0..chain.states() {
        for (j, v) in chain.row(i) {
            if *j <= i {
                continue;
            }
            let gap = (&pi[i] * v - &pi[*j] * chain.entry(*j, i)).abs();
            if gap > max {
                max = gap;
                worst = Some((i, *j));
            }
        }
        // entries with M_ij = 0 but M_ji > 0 show up from the other side
        for (j, v) in chain.row(i) {
            if *j < i && chain.entry(*j, i).is_zero() {
                let gap = (&pi[i] * v).abs();
                if gap > max {
                    max = gap;
                    worst = Some((*j, i));
                }
            }
        }
    }
    let reversible = max.to_f64().unwrap_or(f64::INFINITY) <= tol;
    Ok(Reversibility {
        reversible,
        max_violation: max,
        worst,
    })
}

/// Echelon rows that remember which basis vectors they combine.
struct TrackedEchelon {
    rows: Vec<(usize, BitVector, u64)>,
}

impl TrackedEchelon {
    fn reduce(&self, w: &BitVector) -> (BitVector, u64) {
        let mut w = w.clone();
        let mut combo = 0u64;
        for (pivot, row, c) in &self.rows {
            if w.get(*pivot) {
                w.xor_assign(row);
                combo ^= c;
            }
        }
        (w, combo)
    }
}

/// Random walk on `span(E)` that adds a uniformly chosen generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyWalk {
    n: usize,
    generators: Vec<BitVector>,
    basis: Vec<BitVector>,
    /// Coordinates of each generator in `basis`.
    coords: Vec<u64>,
}

impl CayleyWalk {
    pub fn new(n: usize, generators: Vec<BitVector>) -> Result<Self, WalkError> {
        if generators.is_empty() {
            return Err(WalkError::EmptyGenerators);
        }
        if let Some(g) = generators.iter().find(|g| g.len() != n) {
            return Err(F2Error::LengthMismatch {
                expected: n,
                found: g.len(),
            }
            .into());
        }
        let mut ech = TrackedEchelon { rows: Vec::new() };
        let mut basis = Vec::new();
        for g in &generators {
            let (r, combo) = ech.reduce(g);
            if let Some(p) = r.lowest_set() {
                if basis.len() >= 63 {
                    return Err(F2Error::CapExceeded { dim: basis.len() + 1, cap: u64::MAX }.into());
                }
                let bit = 1u64 << basis.len();
                basis.push(g.clone());
                ech.rows.push((p, r, combo ^ bit));
            }
        }
        let coords = generators.iter().map(|g| ech.reduce(g).1).collect();
        Ok(Self {
            n,
            generators,
            basis,
            coords,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[BitVector] {
        &self.generators
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }

    pub fn span_dim(&self) -> usize {
        self.basis.len()
    }

    /// The codeword with coefficient mask `state`.
    pub fn state_word(&self, state: u64) -> BitVector {
        let mut w = BitVector::zeros(self.n);
        for (i, b) in self.basis.iter().enumerate() {
            if state >> i & 1 == 1 {
                w.xor_assign(b);
            }
        }
        w
    }

    /// The full walk on `2^m` states indexed by coefficient mask.
    pub fn to_chain(&self, cap: u64) -> Result<FiniteChain, WalkError> {
        f2::check_cap(self.span_dim(), cap)?;
        let e = BigInt::from(self.generators.len());
        let mut mult: BTreeMap<u64, usize> = BTreeMap::new();
        for &c in &self.coords {
            *mult.entry(c).or_default() += 1;
        }
        let rows = (0..1u64 << self.span_dim())
            .map(|x| {
                mult.iter()
                    .map(|(&c, &k)| ((x ^ c) as usize, BigRational::new(BigInt::from(k), e.clone())))
                    .collect()
            })
            .collect();
        FiniteChain::new(rows)
    }

    /// States grouped by Hamming weight of their word, lightest shell first,
    /// together with the shell weights.
    pub fn shell_partition(&self, cap: u64) -> Result<(Vec<usize>, Vec<Vec<usize>>), WalkError> {
        f2::check_cap(self.span_dim(), cap)?;
        let mut shells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..1u64 << self.span_dim() {
            shells.entry(self.state_word(x).weight()).or_default().push(x as usize);
        }
        Ok(shells.into_iter().unzip())
    }

    /// Uniform law on the `2^m` states.
    pub fn uniform(&self) -> Vec<BigRational> {
        let size = 1usize << self.span_dim();
        vec![BigRational::new(BigInt::one(), BigInt::from(size)); size]
    }
}

/// A chain on Hamming shells `0..=n`. Rows outside `support` carry no
/// constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineChain {
    n: usize,
    transition: Vec<Vec<BigRational>>,
    support: Vec<usize>,
    span_dim: Option<usize>,
    enumerator: Option<WeightEnumerator>,
}

impl LineChain {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn transition(&self) -> &[Vec<BigRational>] {
        &self.transition
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.transition[i][j]
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Dimension of the underlying code, for Cayley-derived chains.
    pub fn span_dim(&self) -> Option<usize> {
        self.span_dim
    }

    /// Shell sizes of the underlying code, for Cayley-derived chains.
    pub fn enumerator(&self) -> Option<&WeightEnumerator> {
        self.enumerator.as_ref()
    }

    /// The chain on the support shells, in support order.
    pub fn support_chain(&self) -> Result<FiniteChain, WalkError> {
        let rows = self
            .support
            .iter()
            .map(|&i| {
                self.support
                    .iter()
                    .enumerate()
                    .map(|(k, &j)| (k, self.transition[i][j].clone()))
                    .collect()
            })
            .collect();
        FiniteChain::new(rows)
    }

    /// Exact stationary law over all `n + 1` shells, zero off the support.
    pub fn stationary(&self) -> Result<Vec<BigRational>, WalkError> {
        let chain = self.support_chain()?;
        chain.check_irreducible()?;
        let pi = solve_exact(&chain);
        let mut full = vec![BigRational::zero(); self.n + 1];
        for (k, &i) in self.support.iter().enumerate() {
            full[i] = pi[k].clone();
        }
        Ok(full)
    }

    /// `2^m pi`, which recovers the weight enumerator of the code.
    pub fn enumerator_from_stationary(&self, span_dim: usize) -> Result<WeightEnumerator, WalkError> {
        let scale = BigRational::from_integer(BigInt::one() << span_dim);
        let counts = self
            .stationary()?
            .into_iter()
            .map(|p| {
                let c = p * &scale;
                if !c.is_integer() {
                    return Err(WalkError::NonUniformStationary);
                }
                Ok(c.to_integer().to_biguint().expect("non-negative"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WeightEnumerator::new(counts).expect("n + 1 bins"))
    }

    /// `{"n", "support", "transition"}` with rationals as `p/q` strings.
    pub fn to_json(&self) -> serde_json::Value {
        let transition: Vec<Vec<String>> = self
            .transition
            .iter()
            .map(|row| row.iter().map(crate::ratio_str).collect())
            .collect();
        json!({
            "n": self.n,
            "support": self.support,
            "transition": transition,
        })
    }
}

fn count_shell_moves<W: SpanWord>(basis: &[W], gens: &[W], zero: W, n: usize) -> (Vec<u64>, Vec<u64>) {
    let width = n + 1;
    span_fold(
        basis,
        zero,
        || (vec![0u64; width], vec![0u64; width * width]),
        |(shell, moves): &mut (Vec<u64>, Vec<u64>), x, _| {
            let a = x.hamming();
            shell[a] += 1;
            for g in gens {
                let mut y = x.clone();
                y.xor_in(g);
                moves[a * width + y.hamming()] += 1;
            }
        },
        |(mut s1, mut m1), (s2, m2)| {
            s1.iter_mut().zip(s2).for_each(|(a, b)| *a += b);
            m1.iter_mut().zip(m2).for_each(|(a, b)| *a += b);
            (s1, m1)
        },
    )
}

/// Shell projection of the Cayley walk on `span(generators)`, lumped with the
/// uniform law on the code. The shell stationary law is solved independently
/// and must agree with the aggregated uniform law.
pub fn cayley_line_chain(n: usize, generators: &[BitVector], cap: u64) -> Result<LineChain, WalkError> {
    let walk = CayleyWalk::new(n, generators.to_vec())?;
    let m = walk.span_dim();
    f2::check_cap(m, cap)?;
    let (shell, moves) = match (basis_as_u64(walk.basis()), basis_as_u64(walk.generators())) {
        (Some(b), Some(g)) => count_shell_moves(&b, &g, 0u64, n),
        _ => count_shell_moves(walk.basis(), walk.generators(), BitVector::zeros(n), n),
    };
    let e = generators.len() as u64;
    let width = n + 1;
    let mut transition = vec![vec![BigRational::zero(); width]; width];
    for a in 0..width {
        if shell[a] == 0 {
            continue;
        }
        let denom = BigInt::from(e) * BigInt::from(shell[a]);
        for b in 0..width {
            let k = moves[a * width + b];
            if k > 0 {
                transition[a][b] = BigRational::new(BigInt::from(k), denom.clone());
            }
        }
    }
    let support: Vec<usize> = (0..width).filter(|&a| shell[a] > 0).collect();
    let enumerator = WeightEnumerator::from_u64(&shell).expect("n + 1 bins");
    let line = LineChain {
        n,
        transition,
        support,
        span_dim: Some(m),
        enumerator: Some(enumerator.clone()),
    };
    if line.enumerator_from_stationary(m)? != enumerator {
        return Err(WalkError::NonUniformStationary);
    }
    Ok(line)
}

fn reachable_from_zero(transition: &[Vec<BigRational>]) -> Vec<usize> {
    let mut seen = vec![false; transition.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for (j, v) in transition[i].iter().enumerate() {
            if !v.is_zero() && !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    (0..transition.len()).filter(|&i| seen[i]).collect()
}

/// Shell chain of the walk whose generators are all weight-`d` words:
/// `M_{i, i+d-2j} = C(i,j) C(n-i,d-j) / C(n,d)`. The support is the set of
/// shells reachable from 0.
pub fn complete_weight_d_line_chain(n: usize, d: usize) -> Result<LineChain, WalkError> {
    if d == 0 || d > n {
        return Err(WalkError::Range(format!("need 1 <= d <= n, got d = {d}, n = {n}")));
    }
    let total = binomial(n, d);
    let mut transition = vec![vec![BigRational::zero(); n + 1]; n + 1];
    for (i, row) in transition.iter_mut().enumerate() {
        for j in 0..=d.min(i) {
            if d - j > n - i {
                continue;
            }
            let target = i + d - 2 * j;
            row[target] = BigRational::new(binomial(i, j) * binomial(n - i, d - j), total.clone());
        }
    }
    let support = reachable_from_zero(&transition);
    Ok(LineChain {
        n,
        transition,
        support,
        span_dim: None,
        enumerator: None,
    })
}

/// `C(n,k) / sum_{s in support} C(n,s)` on the support, zero elsewhere.
pub fn binomial_law_on(n: usize, support: &[usize]) -> Vec<BigRational> {
    let total: BigInt = support.iter().map(|&k| binomial(n, k)).sum();
    let mut out = vec![BigRational::zero(); n + 1];
    for &k in support {
        out[k] = BigRational::new(binomial(n, k), total.clone());
    }
    out
}

/// Largest `|line_ij - reference_ij|` over rows in `line`'s support.
pub fn perturbation_margin(line: &LineChain, reference: &LineChain) -> Result<BigRational, WalkError> {
    if line.n != reference.n {
        return Err(WalkError::ShapeMismatch {
            expected: line.n,
            found: reference.n,
        });
    }
    let mut max = BigRational::zero();
    for &i in &line.support {
        for j in 0..=line.n {
            let gap = (&line.transition[i][j] - &reference.transition[i][j]).abs();
            if gap > max {
                max = gap;
            }
        }
    }
    Ok(max)
}

/// Worst gap between `M_{i, i+d-2j}` (zero when the target shell is out of
/// range) and the reference law for overlap `j`, over support rows `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapMargin {
    pub margin: BigRational,
    pub worst: Option<(usize, usize)>,
}

pub fn overlap_margin(line: &LineChain, d: usize, reference: Reference) -> Result<OverlapMargin, WalkError> {
    let n = line.n;
    if d == 0 || d > n {
        return Err(WalkError::Range(format!("need 1 <= d <= n, got d = {d}, n = {n}")));
    }
    let mut margin = BigRational::zero();
    let mut worst = None;
    for &i in &line.support {
        for j in 0..=d {
            let target_shell = (i + d).checked_sub(2 * j).filter(|&t| t <= n);
            let entry = target_shell.map_or_else(BigRational::zero, |t| line.transition[i][t].clone());
            let gap = (entry - reference.target(n, d, i, j)).abs();
            if gap > margin {
                margin = gap;
                worst = Some((i, j));
            }
        }
    }
    Ok(OverlapMargin { margin, worst })
}

/// Which form of the stationary ratio bound held on the interval, from the
/// tightest down.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioForm {
    /// Exponent `2 sqrt(eps) (n/2 - i)` as signed.
    Strict,
    /// Exponent `2 sqrt(eps) |n/2 - i|`.
    Symmetric,
    /// Symmetric exponent times `1 / pi_ref_{floor(n/2)}`.
    Polynomial,
    Neither,
    /// The interval holds no shell.
    Vacuous,
}

/// Audit of `pi_eps_i <= pi_ref_i 2^{2 sqrt(eps) (n/2 - i)}` on
/// `[n eps^{1/(2d)}, n (1 - eps^{1/(2d)})]` together with two relaxations.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RatioAudit {
    pub interval: (usize, usize),
    pub checked: Vec<usize>,
    pub strict_violations: Vec<usize>,
    pub symmetric_violations: Vec<usize>,
    pub polynomial_violations: Vec<usize>,
    pub held: RatioForm,
}

/// Relative slack for the floating comparison in [`ratio_audit`].
const RATIO_SLACK: f64 = 1e-12;

pub fn ratio_audit(pi_eps: &[BigRational], pi_ref: &[BigRational], epsilon: f64, d: usize) -> Result<RatioAudit, WalkError> {
    if pi_eps.len() != pi_ref.len() || pi_eps.is_empty() {
        return Err(WalkError::DistributionLength {
            expected: pi_ref.len(),
            found: pi_eps.len(),
        });
    }
    if !(0.0..=1.0).contains(&epsilon) || d == 0 {
        return Err(WalkError::Range(format!("epsilon = {epsilon}, d = {d}")));
    }
    let n = pi_eps.len() - 1;
    let root = epsilon.powf(1.0 / (2.0 * d as f64));
    let lo = (n as f64 * root).ceil().max(0.0) as usize;
    let hi_f = (n as f64 * (1.0 - root)).floor();
    let hi = if hi_f < 0.0 { 0 } else { hi_f as usize };
    let checked: Vec<usize> = if hi_f < 0.0 || lo > hi { vec![] } else { (lo..=hi.min(n)).collect() };
    let mid = pi_ref[n / 2].to_f64().unwrap_or(0.0);
    let poly = if mid > 0.0 { 1.0 / mid } else { f64::INFINITY };
    let rate = 2.0 * epsilon.sqrt();
    let mut strict_violations = Vec::new();
    let mut symmetric_violations = Vec::new();
    let mut polynomial_violations = Vec::new();
    for &i in &checked {
        let lhs = pi_eps[i].to_f64().unwrap_or(f64::NAN);
        let reference = pi_ref[i].to_f64().unwrap_or(f64::NAN);
        let offset = n as f64 / 2.0 - i as f64;
        let strict = reference * (rate * offset).exp2();
        let symmetric = reference * (rate * offset.abs()).exp2();
        if lhs > strict * (1.0 + RATIO_SLACK) {
            strict_violations.push(i);
        }
        if lhs > symmetric * (1.0 + RATIO_SLACK) {
            symmetric_violations.push(i);
        }
        if lhs > symmetric * poly * (1.0 + RATIO_SLACK) {
            polynomial_violations.push(i);
        }
    }
    let held = if checked.is_empty() {
        RatioForm::Vacuous
    } else if strict_violations.is_empty() {
        RatioForm::Strict
    } else if symmetric_violations.is_empty() {
        RatioForm::Symmetric
    } else if polynomial_violations.is_empty() {
        RatioForm::Polynomial
    } else {
        RatioForm::Neither
    };
    Ok(RatioAudit {
        interval: (lo, hi),
        checked,
        strict_violations,
        symmetric_violations,
        polynomial_violations,
        held,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::css::weight_enumerator;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn bv(s: &str) -> BitVector {
        BitVector::from_bits(s)
    }

    fn weight_words(n: usize, d: usize) -> Vec<BitVector> {
        (0u64..1 << n)
            .filter(|w| w.count_ones() as usize == d)
            .map(|w| BitVector::from_u64(n, w))
            .collect()
    }

    #[test]
    fn two_state_symmetric() {
        let c = FiniteChain::from_dense(vec![vec![r(1, 2), r(1, 2)], vec![r(1, 2), r(1, 2)]]).unwrap();
        assert_eq!(stationary(&c, 1e-12).unwrap(), Distribution::Exact(vec![r(1, 2), r(1, 2)]));
    }

    #[test]
    fn rejects_non_stochastic() {
        assert!(matches!(
            FiniteChain::from_dense(vec![vec![r(1, 2), r(1, 3)], vec![r(0, 1), r(1, 1)]]),
            Err(WalkError::NotStochastic { row: 0, .. })
        ));
        assert!(matches!(
            FiniteChain::from_dense(vec![vec![r(3, 2), r(-1, 2)], vec![r(0, 1), r(1, 1)]]),
            Err(WalkError::NegativeEntry { row: 0, col: 1 })
        ));
    }

    #[test]
    fn reducible_is_reported() {
        let c = FiniteChain::from_dense(vec![vec![r(1, 1), r(0, 1)], vec![r(1, 2), r(1, 2)]]).unwrap();
        assert_eq!(
            stationary(&c, 1e-12),
            Err(WalkError::Reducible { components: vec![vec![0], vec![1]] })
        );
    }

    #[test]
    fn cayley_on_f2_squared() {
        let walk = CayleyWalk::new(2, vec![bv("10"), bv("01")]).unwrap();
        let chain = walk.to_chain(1 << 10).unwrap();
        let pi = stationary(&chain, 1e-12).unwrap();
        assert_eq!(pi, Distribution::Exact(vec![r(1, 4); 4]));
        let (weights, shells) = walk.shell_partition(1 << 10).unwrap();
        assert_eq!(weights, vec![0, 1, 2]);
        let coarse = coarse_grain(&chain, &shells, &walk.uniform()).unwrap();
        let Distribution::Exact(cpi) = stationary(&coarse, 1e-12).unwrap() else {
            panic!()
        };
        assert_eq!(cpi, vec![r(1, 4), r(1, 2), r(1, 4)]);
        assert_eq!(cpi, aggregate(&walk.uniform(), &shells));
        assert!(is_reversible(&chain, &walk.uniform(), 0.0).unwrap().reversible);
        assert!(is_reversible(&coarse, &cpi, 0.0).unwrap().reversible);
    }

    #[test]
    fn coarse_grain_trivial_partitions() {
        let walk = CayleyWalk::new(3, vec![bv("110"), bv("011"), bv("111")]).unwrap();
        let chain = walk.to_chain(1 << 10).unwrap();
        let pi = walk.uniform();
        let singletons: Vec<Vec<usize>> = (0..chain.states()).map(|s| vec![s]).collect();
        assert_eq!(coarse_grain(&chain, &singletons, &pi).unwrap(), chain);
        let one = vec![(0..chain.states()).collect::<Vec<_>>()];
        let c = coarse_grain(&chain, &one, &pi).unwrap();
        assert_eq!(c.to_dense(), vec![vec![r(1, 1)]]);
        assert!(matches!(
            coarse_grain(&chain, &[vec![0, 1]], &pi),
            Err(WalkError::BadPartition(_))
        ));
        let mut skewed = vec![r(0, 1); chain.states()];
        skewed[1] = r(1, 1);
        assert!(matches!(
            coarse_grain(&chain, &singletons, &skewed),
            Err(WalkError::ZeroBlockMass { block: 0 })
        ));
    }

    #[test]
    fn cyclic_drift_is_not_reversible() {
        let c = FiniteChain::from_dense(vec![
            vec![r(0, 1), r(9, 10), r(1, 10)],
            vec![r(1, 10), r(0, 1), r(9, 10)],
            vec![r(9, 10), r(1, 10), r(0, 1)],
        ])
        .unwrap();
        let Distribution::Exact(pi) = stationary(&c, 1e-12).unwrap() else {
            panic!()
        };
        assert_eq!(pi, vec![r(1, 3); 3]);
        let rev = is_reversible(&c, &pi, 1e-12).unwrap();
        assert!(!rev.reversible);
        assert_eq!(rev.max_violation, r(8, 30));
    }

    #[test]
    fn line_chain_examples() {
        let line = cayley_line_chain(3, &[bv("110"), bv("011")], 1 << 20).unwrap();
        assert_eq!(line.stationary().unwrap(), vec![r(1, 4), r(0, 1), r(3, 4), r(0, 1)]);
        let b = weight_enumerator(&[bv("110"), bv("011")], 3, 1 << 20).unwrap();
        assert_eq!(line.enumerator_from_stationary(2).unwrap(), b);

        let single = cayley_line_chain(2, &[bv("11")], 1 << 20).unwrap();
        assert_eq!(single.support(), &[0, 2]);

        let all = cayley_line_chain(3, &weight_words(3, 1), 1 << 20).unwrap();
        assert_eq!(all.stationary().unwrap(), vec![r(1, 8), r(3, 8), r(3, 8), r(1, 8)]);
    }

    #[test]
    fn complete_chain_examples() {
        let c = complete_weight_d_line_chain(3, 1).unwrap();
        for i in 0..3 {
            assert_eq!(*c.entry(i, i + 1), r(3 - i as i64, 3));
        }
        assert_eq!(c.stationary().unwrap(), vec![r(1, 8), r(3, 8), r(3, 8), r(1, 8)]);

        let flip = complete_weight_d_line_chain(4, 4).unwrap();
        assert_eq!(*flip.entry(0, 4), r(1, 1));
        assert_eq!(flip.support(), &[0, 4]);

        let even = complete_weight_d_line_chain(4, 2).unwrap();
        assert_eq!(even.support(), &[0, 2, 4]);
        assert_eq!(even.stationary().unwrap(), binomial_law_on(4, &[0, 2, 4]));
        assert_eq!(even.stationary().unwrap()[2], r(6, 8));

        assert!(complete_weight_d_line_chain(3, 0).is_err());
        assert!(complete_weight_d_line_chain(3, 4).is_err());
    }

    #[test]
    fn complete_chain_matches_cayley_projection() {
        for n in 2..=7 {
            for d in 1..=n {
                let a = complete_weight_d_line_chain(n, d).unwrap();
                let b = cayley_line_chain(n, &weight_words(n, d), 1 << 20).unwrap();
                for &i in b.support() {
                    assert_eq!(a.transition()[i], b.transition()[i], "n={n} d={d} i={i}");
                }
                assert_eq!(a.support(), b.support());
            }
        }
    }

    #[test]
    fn margins() {
        let a = complete_weight_d_line_chain(5, 2).unwrap();
        assert!(perturbation_margin(&a, &a).unwrap().is_zero());
        let b = complete_weight_d_line_chain(6, 2).unwrap();
        assert!(matches!(perturbation_margin(&a, &b), Err(WalkError::ShapeMismatch { .. })));
        let m = overlap_margin(&a, 2, Reference::Hypergeometric).unwrap();
        assert!(m.margin.is_zero());
    }

    #[test]
    fn float_solver_agrees_with_exact() {
        let walk = CayleyWalk::new(7, (0..7).map(|i| BitVector::unit(7, i)).collect()).unwrap();
        let chain = walk.to_chain(1 << 10).unwrap();
        assert_eq!(chain.states(), 128);
        let Distribution::Approx { values, residual } = stationary(&chain, 1e-12).unwrap() else {
            panic!("expected the float path")
        };
        assert!(residual <= 1e-12);
        assert!(values.iter().all(|v| (v - 1.0 / 128.0).abs() < 1e-10));
    }

    #[test]
    fn chain_json_uses_ratio_strings() {
        let c = complete_weight_d_line_chain(2, 1).unwrap();
        let v = c.to_json();
        assert_eq!(v["n"], 2);
        assert_eq!(v["transition"][0][1], "1/1");
        assert_eq!(v["transition"][1][0], "1/2");
    }

    #[test]
    fn ratio_audit_on_identical_laws() {
        // the signed exponent is negative above n/2, so even pi_eps = pi_ref
        // breaks the strict form there
        let c = complete_weight_d_line_chain(10, 3).unwrap();
        let pi = c.stationary().unwrap();
        let audit = ratio_audit(&pi, &binomial_law_on(10, c.support()), 1e-6, 3).unwrap();
        assert_eq!(audit.interval, (1, 9));
        assert_eq!(audit.strict_violations, vec![6, 7, 8, 9]);
        assert_eq!(audit.held, RatioForm::Symmetric);
    }
}

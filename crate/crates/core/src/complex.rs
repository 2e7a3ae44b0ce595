//! 2-complexes `X2 -> X1 -> X0` over GF(2) and their homological quantities.
//!
//! Here "boundary space" always means `im d2`; weight-enumerator counts live
//! in [`crate::enumerator`].

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::f2::{self, basis_as_u64, kernel_basis, span_fold, BitVector, F2Error, F2Matrix, SpanWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("d1 has {boundary1_cols} columns but d2 has {boundary2_rows} rows")]
    ShapeMismatch {
        boundary1_cols: usize,
        boundary2_rows: usize,
    },
    #[error("boundary property violated: (d1 d2)[{row}][{col}] = 1")]
    BoundaryViolation { row: usize, col: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("generation failed: {0}")]
    GenerationFailure(String),
    #[error("every chain is a cycle; cycle expansion is undefined")]
    Degenerate,
    #[error(transparent)]
    F2(#[from] F2Error),
}

/// `d2: X2 -> X1` (shape `n x |X2|`) and `d1: X1 -> X0` (shape `|X0| x n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex2 {
    boundary2: F2Matrix,
    boundary1: F2Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    /// Max column weight of `d2` (edges per 2-face).
    pub d_col2: usize,
    /// Max row weight of `d1` (edges per vertex).
    pub d_row1: usize,
    /// Max row weight of `d2` (2-faces per edge).
    pub k2: usize,
    /// Max column weight of `d1` (vertices per edge).
    pub k1: usize,
    /// Every row and column attains its class maximum.
    pub regular: bool,
}

impl ChainComplex2 {
    pub fn new(boundary2: F2Matrix, boundary1: F2Matrix) -> Result<Self, ComplexError> {
        if boundary1.cols() != boundary2.rows() {
            return Err(ComplexError::ShapeMismatch {
                boundary1_cols: boundary1.cols(),
                boundary2_rows: boundary2.rows(),
            });
        }
        Ok(Self {
            boundary2,
            boundary1,
        })
    }

    /// Builds the complex of a graph: `d1` is the vertex-edge incidence and
    /// each face is given as a list of edge indices.
    pub fn from_graph(
        vertices: usize,
        edges: &[(usize, usize)],
        faces: &[Vec<usize>],
    ) -> Result<Self, ComplexError> {
        let mut incidence = vec![Vec::new(); vertices];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= vertices || v >= vertices || u == v {
                return Err(ComplexError::InvalidParameter(format!(
                    "edge {e} = ({u}, {v}) is not a proper edge on {vertices} vertices"
                )));
            }
            incidence[u].push(e);
            incidence[v].push(e);
        }
        let boundary1 = F2Matrix::new(vertices, edges.len(), incidence)?;
        let boundary2 = F2Matrix::new(faces.len(), edges.len(), faces.to_vec())?.transpose();
        Self::new(boundary2, boundary1)
    }

    pub fn boundary2(&self) -> &F2Matrix {
        &self.boundary2
    }

    pub fn boundary1(&self) -> &F2Matrix {
        &self.boundary1
    }

    /// `|X1|`, the qubit count of the associated code.
    pub fn n(&self) -> usize {
        self.boundary2.rows()
    }

    /// Checks `d1 d2 = 0` and returns the degree statistics.
    pub fn validate(&self) -> Result<DegreeProfile, ComplexError> {
        let product = self.boundary1.mul(&self.boundary2)?;
        if let Some((row, support)) = product
            .row_supports()
            .iter()
            .enumerate()
            .find(|(_, s)| !s.is_empty())
        {
            return Err(ComplexError::BoundaryViolation { row, col: support[0] });
        }
        Ok(self.degree_profile())
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        fn max_and_uniform(ws: &[usize]) -> (usize, bool) {
            let max = ws.iter().copied().max().unwrap_or(0);
            (max, ws.iter().all(|&w| w == max))
        }
        let (d_col2, u1) = max_and_uniform(&self.boundary2.col_weights());
        let (d_row1, u2) = max_and_uniform(&self.boundary1.row_weights());
        let (k2, u3) = max_and_uniform(&self.boundary2.row_weights());
        let (k1, u4) = max_and_uniform(&self.boundary1.col_weights());
        DegreeProfile {
            d_col2,
            d_row1,
            k2,
            k1,
            regular: u1 && u2 && u3 && u4,
        }
    }

    /// Columns of `d2` as words in `F_2^n` (the 2-face generators).
    pub fn face_generators(&self) -> Vec<BitVector> {
        self.boundary2.transpose().to_bitvectors()
    }
}

/// The `L x L` square cellulation of the torus.
///
/// Vertex `(x, y)` is `y L + x`; horizontal edge `h(x, y)` joins `(x, y)` to
/// `(x+1, y)` and has index `y L + x`; vertical edge `v(x, y)` joins `(x, y)`
/// to `(x, y+1)` and has index `L^2 + y L + x`. Plaquette `(x, y)` is bounded
/// by `h(x, y)`, `h(x, y+1)`, `v(x, y)`, `v(x+1, y)`.
pub fn toric_complex(l: usize) -> Result<ChainComplex2, ComplexError> {
    if l < 2 {
        return Err(ComplexError::InvalidParameter(format!(
            "toric side length must be >= 2, got {l}"
        )));
    }
    let vertex = |x: usize, y: usize| (y % l) * l + (x % l);
    let h = |x: usize, y: usize| (y % l) * l + (x % l);
    let v = |x: usize, y: usize| l * l + (y % l) * l + (x % l);
    let mut edges = vec![(0, 0); 2 * l * l];
    for y in 0..l {
        for x in 0..l {
            edges[h(x, y)] = (vertex(x, y), vertex(x + 1, y));
            edges[v(x, y)] = (vertex(x, y), vertex(x, y + 1));
        }
    }
    let faces: Vec<Vec<usize>> = (0..l)
        .flat_map(|y| (0..l).map(move |x| (x, y)))
        .map(|(x, y)| vec![h(x, y), h(x, y + 1), v(x, y), v(x + 1, y)])
        .collect();
    ChainComplex2::from_graph(l * l, &edges, &faces)
}

const REGULAR_GRAPH_ATTEMPTS: usize = 1000;

/// Random simple `degree`-regular graph by the pairing model with rejection.
/// Edges come back as `(u, v)` with `u < v`, sorted.
pub fn random_regular_graph(
    vertices: usize,
    degree: usize,
    rng: &mut impl Rng,
) -> Result<Vec<(usize, usize)>, ComplexError> {
    if !(vertices * degree).is_multiple_of(2) {
        return Err(ComplexError::InvalidParameter(format!(
            "nv * degree must be even (nv = {vertices}, degree = {degree})"
        )));
    }
    if degree >= vertices {
        return Err(ComplexError::InvalidParameter(format!(
            "no simple {degree}-regular graph on {vertices} vertices"
        )));
    }
    let mut points: Vec<usize> = (0..vertices)
        .flat_map(|v| std::iter::repeat_n(v, degree))
        .collect();
    'attempt: for _ in 0..REGULAR_GRAPH_ATTEMPTS {
        points.shuffle(rng);
        let mut edges = BTreeSet::new();
        for pair in points.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !edges.insert((u, v)) {
                continue 'attempt;
            }
        }
        return Ok(edges.into_iter().collect());
    }
    Err(ComplexError::GenerationFailure(format!(
        "no simple {degree}-regular graph on {vertices} vertices after {REGULAR_GRAPH_ATTEMPTS} pairings"
    )))
}

/// Fundamental cycles of the BFS tree rooted at `root`, as sorted edge lists.
fn bfs_cycles(
    vertices: usize,
    adjacency: &[Vec<(usize, usize)>],
    root: usize,
) -> Vec<Vec<usize>> {
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; vertices];
    let mut depth = vec![usize::MAX; vertices];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut tree_edge = BTreeSet::new();
    while let Some(u) = queue.pop_front() {
        for &(w, e) in &adjacency[u] {
            if depth[w] == usize::MAX {
                depth[w] = depth[u] + 1;
                parent[w] = Some((u, e));
                tree_edge.insert(e);
                queue.push_back(w);
            }
        }
    }
    let mut cycles = Vec::new();
    for (u, nbrs) in adjacency.iter().enumerate() {
        for &(w, e) in nbrs {
            if u > w || tree_edge.contains(&e) || depth[u] == usize::MAX {
                continue;
            }
            let mut cycle = vec![e];
            let (mut a, mut b) = (u, w);
            while a != b {
                let step_a = depth[a] >= depth[b];
                let node = if step_a { &mut a } else { &mut b };
                let (p, pe) = parent[*node].expect("non-root vertex has a parent");
                cycle.push(pe);
                *node = p;
            }
            cycle.sort_unstable();
            cycles.push(cycle);
        }
    }
    cycles
}

/// Complex over a random `degree`-regular graph whose 2-faces are
/// `num_faces` distinct short cycles of one common length.
///
/// BFS roots are drawn from the seeded generator for at most
/// `50 * num_faces` attempts; the shortest cycle length that has collected
/// `num_faces` distinct cycles wins. Output depends only on the arguments.
pub fn graph_cycle_complex(
    vertices: usize,
    degree: usize,
    num_faces: usize,
    seed: u64,
) -> Result<ChainComplex2, ComplexError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = random_regular_graph(vertices, degree, &mut rng)?;
    let mut adjacency = vec![Vec::new(); vertices];
    for (e, &(u, v)) in edges.iter().enumerate() {
        adjacency[u].push((v, e));
        adjacency[v].push((u, e));
    }
    let mut by_length: BTreeMap<usize, BTreeSet<Vec<usize>>> = BTreeMap::new();
    let attempts = 50 * num_faces.max(1);
    let mut chosen = None;
    if num_faces == 0 {
        chosen = Some(Vec::new());
    }
    for _ in 0..attempts {
        if chosen.is_some() {
            break;
        }
        let root = rng.random_range(0..vertices);
        for cycle in bfs_cycles(vertices, &adjacency, root) {
            by_length.entry(cycle.len()).or_default().insert(cycle);
        }
        chosen = by_length
            .values()
            .find(|set| set.len() >= num_faces)
            .map(|set| set.iter().take(num_faces).cloned().collect());
    }
    let faces = chosen.ok_or_else(|| {
        ComplexError::GenerationFailure(format!(
            "fewer than {num_faces} distinct equal-length cycles after {attempts} BFS roots"
        ))
    })?;
    let complex = ChainComplex2::from_graph(vertices, &edges, &faces)?;
    complex.validate()?;
    Ok(complex)
}

/// First systole: minimum weight of a cycle that is not a boundary, or
/// `None` when every cycle bounds.
pub fn systole1(complex: &ChainComplex2, cap: u64) -> Result<Option<usize>, ComplexError> {
    Ok(systole1_witness(complex, cap)?.map(|(w, _)| w))
}

/// [`systole1`] together with a minimising cycle.
pub fn systole1_witness(
    complex: &ChainComplex2,
    cap: u64,
) -> Result<Option<(usize, BitVector)>, ComplexError> {
    complex.validate()?;
    let cycles = kernel_basis(complex.boundary1());
    f2::check_cap(cycles.len(), cap)?;
    let boundaries = complex.face_generators();
    Ok(f2::min_weight_outside(complex.n(), &boundaries, &cycles, cap)?)
}

fn coset_minima<W: SpanWord + Hash + Eq>(columns: &[W], zero: W) -> HashMap<W, u32> {
    fn merge<W: Hash + Eq>(mut a: HashMap<W, u32>, b: HashMap<W, u32>) -> HashMap<W, u32> {
        for (k, v) in b {
            a.entry(k).and_modify(|x| *x = (*x).min(v)).or_insert(v);
        }
        a
    }
    span_fold(
        columns,
        zero,
        HashMap::new,
        |acc: &mut HashMap<W, u32>, syndrome, x| {
            let weight = x.count_ones();
            acc.entry(syndrome.clone())
                .and_modify(|m| *m = (*m).min(weight))
                .or_insert(weight);
        },
        merge,
    )
}

/// `min over x not in Z1 of |d1 x| / min_{w in Z1} |x + w|`, exactly.
///
/// The ratio only depends on the syndrome `d1 x`, so all `2^n` chains are
/// bucketed by syndrome and each bucket keeps its lightest member.
pub fn cycle_expansion1(complex: &ChainComplex2, cap: u64) -> Result<BigRational, ComplexError> {
    let n = complex.n();
    f2::check_cap(n, cap)?;
    let columns = complex.boundary1().transpose().to_bitvectors();
    let ratios: Vec<(usize, u32)> = match basis_as_u64(&columns) {
        Some(words) => coset_minima(&words, 0u64)
            .into_iter()
            .map(|(s, m)| (s.count_ones() as usize, m))
            .collect(),
        None => coset_minima(&columns, BitVector::zeros(complex.boundary1().rows()))
            .into_iter()
            .map(|(s, m)| (s.weight(), m))
            .collect(),
    };
    ratios
        .into_iter()
        .filter(|&(syndrome_weight, _)| syndrome_weight > 0)
        .map(|(s, m)| BigRational::new(BigInt::from(s), BigInt::from(m)))
        .min()
        .ok_or(ComplexError::Degenerate)
}

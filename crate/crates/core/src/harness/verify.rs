//! The verification ledger: every audited claim, the instances it was tried
//! on, and the outcome.

use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::experiment::{run_experiment, ExperimentConfig, Source, VERSION};
use super::instances::{self, random_css, random_hypergraphs, rng};
use super::sweep::{sweep, SweepConfig};
use crate::bounds::{self, Epsilon0Branch};
use crate::complex::{cycle_expansion1, graph_cycle_complex, systole1, toric_complex, ChainComplex2};
use crate::css::{code_dimension, css_from_complex, min_distance, weight_enumerator, CssCode};
use crate::discrepancy::{discrepancy_exact, Hypergraph, Reference};
use crate::enumerator::{functional_identity_check, macwilliams_with, weakly_binomial_check, WeightEnumerator};
use crate::f2::{kernel_basis, EchelonBasis, F2Matrix};
use crate::kravchuk::{binomial, kravchuk_decompose, kravchuk_square_coeffs, KravchukTable};
use crate::walks::{
    aggregate, binomial_law_on, cayley_line_chain, coarse_grain, complete_weight_d_line_chain, is_reversible,
    overlap_margin, ratio_audit, stationary, CayleyWalk, Distribution, FiniteChain, RatioForm,
};

const CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// No instance reaches the claim's hypotheses.
    Vacuous,
    /// Informational; never counted as a failure.
    Note,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub id: &'static str,
    pub claim: &'static str,
    pub instances: u64,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ledger {
    pub version: &'static str,
    pub level: Level,
    pub entries: Vec<LedgerEntry>,
}

impl Ledger {
    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| e.status == Status::Fail).count()
    }

    pub fn entry(&self, id: &str) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ledger is serializable")
    }
}

struct Outcome {
    instances: u64,
    status: Status,
    detail: String,
}

impl Outcome {
    /// Pass when `failures` is empty, otherwise Fail listing the first few.
    fn check(instances: u64, failures: Vec<String>, ok_detail: impl Into<String>) -> Self {
        if failures.is_empty() {
            Self {
                instances,
                status: Status::Pass,
                detail: ok_detail.into(),
            }
        } else {
            let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
            Self {
                instances,
                status: Status::Fail,
                detail: format!("{} failing: {}", failures.len(), shown.join("; ")),
            }
        }
    }

    fn with(instances: u64, status: Status, detail: impl Into<String>) -> Self {
        Self {
            instances,
            status,
            detail: detail.into(),
        }
    }
}

type CheckFn = fn(Level) -> Outcome;

/// `(id, claim, check)` for every ledger entry, in ledger order.
const CHECKS: &[(&str, &str, CheckFn)] = &[
    ("boundary-property", "d1 d2 = 0 and every column of d2 lies in ker d1", boundary_property),
    ("css-orthogonality", "C_X and C_Z built from a complex are orthogonal", css_orthogonality),
    ("css-dimension", "k = n - rank H_X - rank H_Z", css_dimension),
    ("css-distance", "min_distance equals brute-force logical weight", css_distance),
    ("systole", "first systole equals brute-force lightest non-bounding cycle", systole_check),
    ("cycle-expansion", "cycle expansion on small graphs", cycle_expansion),
    ("kravchuk-character-sum", "P_m(|u|) = sum over weight-m x of (-1)^(x.u)", kravchuk_character_sum),
    ("kravchuk-orthogonality", "sum_k C(n,k) P_i(k) P_j(k) = delta_ij 2^n C(n,i), n <= 64", kravchuk_orthogonality),
    ("kravchuk-upper-bound", "|P_m(k)| <= C(n,m), n <= 64", kravchuk_upper_bound),
    ("kravchuk-square-decomposition", "P_m^2 = sum_i C(2i,i) C(n-2i,m-i) P_2i pointwise, n <= 40", kravchuk_square),
    ("kravchuk-decomposition", "Kravchuk coefficients reconstruct any function on 0..=n", kravchuk_decomposition),
    ("macwilliams-brute-force", "MacWilliams transform equals the brute-force dual enumerator", macwilliams_brute_force),
    ("macwilliams-involution", "transforming twice returns the enumerator", macwilliams_involution),
    ("macwilliams-functional-identity", "|C| sum alpha_j B_perp_j = sum alpha(j) B_j", macwilliams_functional),
    ("weak-binomial-definition", "weakly-binomial check on reference codes", weak_binomial_definition),
    ("discrepancy-definition", "discrepancy on reference hypergraphs, witness and invariances", discrepancy_definition),
    ("overlap-transition-margin", "coarse Cayley transitions deviate from the binomial target by at most epsilon", overlap_transition_margin),
    ("coarse-grained-stationary", "aggregated stationary law is stationary for the coarse-grained chain", coarse_grained_stationary),
    ("cayley-reversible", "the Cayley walk is reversible for the uniform law", cayley_reversible),
    ("coarse-reversible", "shell coarse-graining of a Cayley walk is reversible", coarse_reversible),
    ("walk-enumerator", "2^m times the shell stationary law is the weight enumerator", walk_enumerator),
    ("complete-walk-binomial-law", "complete weight-d walk has the binomial law on its support", complete_walk_binomial),
    ("even-weight-support", "complete walk support: all shells for odd d, even shells for even d", even_weight_support),
    ("stationary-ratio-bound", "pi_eps_i <= pi_i 2^(2 sqrt(eps)(n/2 - i)) on the central interval", stationary_ratio_bound),
    ("weak-binomial-from-discrepancy", "face codes are (eps^1/2, H(eps^(1/(2d))))-weakly-binomial", weak_binomial_from_discrepancy),
    ("epsilon0-threshold", "eps0(d) = min(H^-1(beta_max)^(2d), 2^(-2d))", epsilon0_threshold),
    ("distance-bound", "relative distance bound (12/d^2) eps^(1/(2d)) log^2(1/eps)", distance_bound_check),
    ("rate-bound", "asymptotic rate bound 1 - (delta/2) log 3 - H(delta/2)", rate_bound),
    ("rate-bound-root", "the rate bound has a root in [0.35, 0.4]", rate_bound_root),
    ("rate-bound-chord", "rate bound lies under the chord 1 - delta/z", rate_bound_chord),
    ("distance-cap", "distance cap 4 H(eta) under its two hypotheses", distance_cap),
    ("theorem-chain", "4 H(H(eps^(1/(2d)))) <= distance bound below eps0", theorem_chain),
    ("f-function", "f_{d,beta}(beta^d) >= beta^d on the hypothesis region", f_function),
    ("f-function-proof-steps", "intermediate inequalities of the f argument", f_function_steps),
    ("entropy-sandwich", "x <= H(x) <= 2x log(1/x) on [0, 1/2]", entropy_sandwich),
    ("binomial-estimates", "binomial and partial-sum estimates against 2^(nH(k/n))", binomial_estimates),
    ("entropy-inverse", "entropy_inverse inverts entropy on [0, 1/2]", entropy_inverse_check),
    ("ldpc-enumerator-floor", "B_k >= C(n/d^2, k/d) for weight-d generators of uniform degree", ldpc_enumerator_floor),
    ("pseudorandom-distance-theorem", "relative distance of eps-pseudorandom complexes is bounded", pseudorandom_distance),
    ("pseudorandom-systole-theorem", "systoles of eps-pseudorandom complexes are bounded", pseudorandom_systole),
    ("pipeline-determinism", "experiment and sweep reports are byte-identical across reruns", pipeline_determinism),
];

/// Ledger ids in ledger order.
pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Runs every check. A panicking check becomes a failed entry.
pub fn verify_suite(level: Level) -> Ledger {
    let entries = CHECKS
        .par_iter()
        .map(|&(id, claim, check)| {
            let out = catch_unwind(AssertUnwindSafe(|| check(level))).unwrap_or_else(|payload| {
                let msg = payload
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into());
                Outcome::with(0, Status::Fail, format!("panicked: {msg}"))
            });
            LedgerEntry {
                id,
                claim,
                instances: out.instances,
                status: out.status,
                detail: out.detail,
            }
        })
        .collect();
    Ledger {
        version: VERSION,
        level,
        entries,
    }
}

fn pick<T>(level: Level, quick: T, full: T) -> T {
    match level {
        Level::Quick => quick,
        Level::Full => full,
    }
}

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn reference_complexes(level: Level) -> Vec<(String, ChainComplex2)> {
    let mut out: Vec<(String, ChainComplex2)> = (2..=pick(level, 4, 6))
        .map(|l| (format!("toric L={l}"), toric_complex(l).expect("l >= 2")))
        .collect();
    for seed in 0..pick(level, 4, 10) {
        if let Ok(c) = graph_cycle_complex(12, 3, 4, seed) {
            out.push((format!("graph-cycle(12,3,4,{seed})"), c));
        }
    }
    out
}

fn boundary_property(level: Level) -> Outcome {
    let mut failures = Vec::new();
    let complexes = reference_complexes(level);
    for (name, c) in &complexes {
        if let Err(e) = c.validate() {
            failures.push(format!("{name}: {e}"));
        }
        for (i, col) in c.boundary2().transpose().to_bitvectors().iter().enumerate() {
            if !c.boundary1().mul_vec(col).expect("shapes agree").is_zero() {
                failures.push(format!("{name}: face {i} has nonzero boundary"));
            }
        }
    }
    let bad = ChainComplex2::from_graph(3, &[(0, 1), (1, 2)], &[vec![0]]).expect("shapes agree");
    if bad.validate().is_ok() {
        failures.push("open path accepted as a face".into());
    }
    Outcome::check(complexes.len() as u64 + 1, failures, "all generated complexes satisfy the boundary property")
}

fn css_orthogonality(level: Level) -> Outcome {
    let mut failures = Vec::new();
    let complexes = reference_complexes(level);
    for (name, c) in &complexes {
        match css_from_complex(c) {
            Ok(code) => {
                for x in code.basis_x() {
                    if code.basis_z().iter().any(|z| x.dot(z)) {
                        failures.push(format!("{name}: X and Z generators overlap oddly"));
                        break;
                    }
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    Outcome::check(complexes.len() as u64, failures, "pairwise inner products vanish")
}

fn css_dimension(level: Level) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for l in 2..=pick(level, 4, 6) {
        count += 1;
        let k = code_dimension(&css_from_complex(&toric_complex(l).expect("l >= 2")).expect("valid"));
        if k.as_ref().ok() != Some(&2) {
            failures.push(format!("toric L={l}: k = {k:?}"));
        }
    }
    let steane = steane();
    count += 1;
    if code_dimension(&steane).ok() != Some(1) {
        failures.push("Steane code k != 1".into());
    }
    let mut g = rng(11);
    for _ in 0..pick(level, 30, 100) {
        let n = g.random_range(4..=14);
        let (mx, mz) = (g.random_range(0..n / 2 + 1), g.random_range(0..n / 2 + 1));
        let code = random_css(&mut g, n, mx, mz);
        count += 1;
        let expect = n - code.m_x() - code.m_z();
        if code_dimension(&code).ok() != Some(expect) {
            failures.push(format!("random n={n}: dimension mismatch"));
        }
    }
    Outcome::check(count, failures, "toric k = 2, Steane k = 1, random codes match rank count")
}

fn steane() -> CssCode {
    let rows = F2Matrix::from_bit_rows(7, &["1010101", "0110011", "0001111"]).to_bitvectors();
    CssCode::new(7, &rows, &rows).expect("Hamming code is self-orthogonal")
}

/// Lightest logical by scanning every word of length `n <= 20`.
fn brute_distance(code: &CssCode) -> Option<usize> {
    let n = code.n();
    let ex = EchelonBasis::from_vectors(n, code.basis_x());
    let ez = EchelonBasis::from_vectors(n, code.basis_z());
    let mut best: Option<usize> = None;
    for m in 1u64..1 << n {
        let w = crate::f2::BitVector::from_u64(n, m);
        let wt = w.weight();
        if best.is_some_and(|b| wt >= b) {
            continue;
        }
        let in_x_perp = code.basis_x().iter().all(|x| !x.dot(&w));
        let in_z_perp = code.basis_z().iter().all(|z| !z.dot(&w));
        if (in_x_perp && !ez.contains(&w)) || (in_z_perp && !ex.contains(&w)) {
            best = Some(wt);
        }
    }
    best
}

fn css_distance(level: Level) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for l in 2..=4 {
        count += 1;
        let code = css_from_complex(&toric_complex(l).expect("l >= 2")).expect("valid");
        if min_distance(&code, CAP).ok() != Some(l) {
            failures.push(format!("toric L={l}: distance != {l}"));
        }
    }
    count += 1;
    if min_distance(&steane(), CAP).ok() != Some(3) {
        failures.push("Steane distance != 3".into());
    }
    let mut g = rng(12);
    for _ in 0..pick(level, 20, 60) {
        let n = g.random_range(4..=pick(level, 11, 14));
        let (mx, mz) = (g.random_range(0..n / 2 + 1), g.random_range(0..n / 2 + 1));
        let code = random_css(&mut g, n, mx, mz);
        if code_dimension(&code).unwrap_or(0) == 0 {
            continue;
        }
        count += 1;
        let fast = min_distance(&code, CAP).ok();
        let slow = brute_distance(&code);
        if fast != slow {
            failures.push(format!("random n={n}: {fast:?} vs brute force {slow:?}"));
        }
    }
    Outcome::check(count, failures, "toric d = L, Steane d = 3, random codes match exhaustive search")
}

/// Lightest cycle outside the face span by scanning all `2^n` edge sets.
fn brute_systole(c: &ChainComplex2) -> Option<usize> {
    let n = c.n();
    let cols: Vec<u128> = c
        .boundary1()
        .transpose()
        .to_bitvectors()
        .iter()
        .map(|v| v.support().iter().fold(0u128, |a, &i| a | 1 << i))
        .collect();
    let faces = EchelonBasis::from_vectors(n, &c.face_generators());
    let mut best: Option<usize> = None;
    let mut syndrome = 0u128;
    let mut mask = 0u64;
    for i in 1u64..1 << n {
        let b = i.trailing_zeros() as usize;
        mask ^= 1 << b;
        syndrome ^= cols[b];
        let wt = mask.count_ones() as usize;
        if syndrome != 0 || best.is_some_and(|x| wt >= x) {
            continue;
        }
        if !faces.contains(&crate::f2::BitVector::from_u64(n, mask)) {
            best = Some(wt);
        }
    }
    best
}

fn systole_check(level: Level) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for l in 2..=3 {
        count += 1;
        let s = systole1(&toric_complex(l).expect("l >= 2"), CAP);
        if s != Ok(Some(l)) {
            failures.push(format!("toric L={l}: systole {s:?}"));
        }
    }
    let triangle = ChainComplex2::from_graph(3, &[(0, 1), (1, 2), (0, 2)], &[]).expect("valid");
    count += 1;
    if systole1(&triangle, CAP) != Ok(Some(3)) {
        failures.push("empty triangle systole != 3".into());
    }
    for seed in 0..pick(level, 3, 8) {
        let Ok(c) = graph_cycle_complex(12, 3, 4, seed) else { continue };
        count += 1;
        let fast = systole1(&c, CAP).ok().flatten();
        let slow = brute_systole(&c);
        if fast != slow {
            failures.push(format!("graph-cycle seed {seed}: {fast:?} vs {slow:?}"));
        }
    }
    Outcome::check(count, failures, "toric systole = L, graph-cycle complexes match exhaustive search")
}

fn cycle_expansion(_: Level) -> Outcome {
    let cases: [(&str, ChainComplex2, BigRational); 3] = [
        ("single edge", ChainComplex2::from_graph(2, &[(0, 1)], &[]).expect("valid"), r(2, 1)),
        ("empty triangle", ChainComplex2::from_graph(3, &[(0, 1), (1, 2), (0, 2)], &[]).expect("valid"), r(2, 1)),
        ("path of two edges", ChainComplex2::from_graph(3, &[(0, 1), (1, 2)], &[]).expect("valid"), r(1, 1)),
    ];
    let mut failures = Vec::new();
    for (name, c, want) in &cases {
        match cycle_expansion1(c, CAP) {
            Ok(v) if &v == want => {}
            other => failures.push(format!("{name}: {other:?}, expected {want}")),
        }
    }
    Outcome::check(cases.len() as u64, failures, "expansion matches hand-computed values")
}

fn kravchuk_character_sum(level: Level) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for n in 1..=pick(level, 8, 12) {
        let table = KravchukTable::new(n);
        for w in 0..=n {
            let u: u64 = (1u64 << w) - 1;
            let mut sums = vec![0i64; n + 1];
            for x in 0u64..1 << n {
                let sign = if (x & u).count_ones().is_multiple_of(2) { 1 } else { -1 };
                sums[x.count_ones() as usize] += sign;
            }
            for (m, s) in sums.iter().enumerate() {
                count += 1;
                if BigInt::from(*s) != *table.get(m, w) {
                    failures.push(format!("n={n} m={m} |u|={w}"));
                }
            }
        }
    }
    Outcome::check(count, failures, "closed form equals the character sum")
}

fn kravchuk_orthogonality(_: Level) -> Outcome {
    let results: Vec<(u64, Vec<String>)> = (1..=64usize)
        .into_par_iter()
        .map(|n| {
            let table = KravchukTable::new(n);
            let two_n = BigInt::one() << n;
            let mut failures = Vec::new();
            let mut count = 0;
            for i in 0..=n {
                for j in 0..=n {
                    count += 1;
                    let want = if i == j { &two_n * table.binomial(i) } else { BigInt::zero() };
                    if table.inner_product(i, j) != want {
                        failures.push(format!("n={n} i={i} j={j}"));
                    }
                }
            }
            (count, failures)
        })
        .collect();
    let count = results.iter().map(|(c, _)| c).sum();
    let failures = results.into_iter().flat_map(|(_, f)| f).collect();
    Outcome::check(count, failures, "exact for all i, j and n = 1..=64")
}

fn kravchuk_upper_bound(_: Level) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for n in 1..=64usize {
        let table = KravchukTable::new(n);
        for m in 0..=n {
            for k in 0..=n {
                count += 1;
                if table.get(m, k).abs() > *table.binomial(m) {
                    failures.push(format!("n={n} m={m} k={k}"));
                }
            }
        }
    }
    Outcome::check(count, failures, "exact for all m, k and n = 1..=64")
}

fn kravchuk_square(level: Level) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for n in 1..=pick(level, 24, 40) {
        let table = KravchukTable::new(n);
        for m in 0..=n / 2 {
            let coeffs = kravchuk_square_coeffs(n, m).expect("m <= n/2");
            for x in 0..=n {
                count += 1;
                let p = table.get(m, x);
                if p * p != table.combine(&coeffs, x) {
                    failures.push(format!("n={n} m={m} x={x}"));
                }
            }
        }
    }
    Outcome::check(count, failures, "pointwise exact")
}

fn kravchuk_decomposition(level: Level) -> Outcome {
    let mut failures = Vec::new();
    let mut g = rng(13);
    let trials = pick(level, 20, 60);
    for _ in 0..trials {
        let n = g.random_range(1..=16);
        let f: Vec<BigRational> = (0..=n).map(|_| r(g.random_range(-50..=50), g.random_range(1..=9))).collect();
        let coeffs = kravchuk_decompose(n, &f).expect("length n + 1");
        let table = KravchukTable::new(n);
        for (x, fx) in f.iter().enumerate() {
            let back: BigRational = coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| c * BigRational::from_integer(table.get(j, x).clone()))
                .sum();
            if &back != fx {
                failures.push(format!("n={n} x={x}"));
                break;
            }
        }
    }
    Outcome::check(trials as u64, failures, "random rational functions reconstructed exactly")
}

type CodeCase = (usize, Vec<crate::f2::BitVector>);

fn mac_codes(level: Level) -> Vec<CodeCase> {
    match level {
        Level::Quick => instances::random_codes(21, 40, 2, 14, 10),
        Level::Full => instances::random_codes(21, 200, 2, 18, 12),
    }
}

fn enumerator_and_dual(n: usize, basis: &[crate::f2::BitVector]) -> (WeightEnumerator, WeightEnumerator) {
    let dual = kernel_basis(&F2Matrix::from_bitvectors(n, basis).expect("lengths agree"));
    (
        weight_enumerator(basis, n, CAP).expect("under cap"),
        weight_enumerator(&dual, n, CAP).expect("under cap"),
    )
}

fn macwilliams_brute_force(level: Level) -> Outcome {
    let codes = mac_codes(level);
    let failures: Vec<String> = codes
        .par_iter()
        .filter_map(|(n, basis)| {
            let (b, dual) = enumerator_and_dual(*n, basis);
            let size = BigUint::one() << basis.len();
            match macwilliams_with(&KravchukTable::new(*n), &b, &size) {
                Ok(t) if t == dual => None,
                other => Some(format!("n={n} dim={}: {other:?}", basis.len())),
            }
        })
        .collect();
    let max_n = codes.iter().map(|c| c.0).max().unwrap_or(0);
    Outcome::check(codes.len() as u64, failures, format!("exact on random codes up to n = {max_n}"))
}

fn macwilliams_involution(level: Level) -> Outcome {
    let mut codes = mac_codes(level);
    codes.extend(instances::random_codes(22, pick(level, 5, 20), 19, 20, 12));
    let failures: Vec<String> = codes
        .par_iter()
        .filter_map(|(n, basis)| {
            let b = weight_enumerator(basis, *n, CAP).expect("under cap");
            let table = KravchukTable::new(*n);
            let size = BigUint::one() << basis.len();
            let dual_size = BigUint::one() << (n - basis.len());
            let back = macwilliams_with(&table, &b, &size).and_then(|d| macwilliams_with(&table, &d, &dual_size));
            match back {
                Ok(e) if e == b => None,
                other => Some(format!("n={n}: {other:?}")),
            }
        })
        .collect();
    Outcome::check(codes.len() as u64, failures, "double transform is the identity, n <= 20")
}

fn macwilliams_functional(level: Level) -> Outcome {
    let codes = mac_codes(level);
    let mut g = rng(23);
    let randoms: Vec<Vec<BigInt>> = codes
        .iter()
        .map(|(n, _)| (0..=*n).map(|_| BigInt::from(g.random_range(-20..=20))).collect())
        .collect();
    let failures: Vec<String> = codes
        .par_iter()
        .zip(randoms.par_iter())
        .filter_map(|((n, basis), random)| {
            let (b, dual) = enumerator_and_dual(*n, basis);
            let size = BigUint::one() << basis.len();
            let mut alphas: Vec<Vec<BigInt>> =
                (0..=n / 2).map(|t| kravchuk_square_coeffs(*n, t).expect("t <= n/2")).collect();
            alphas.push(random.clone());
            alphas
                .iter()
                .map(|a| functional_identity_check(a, &b, &dual, &size))
                .find(|res| !res.is_zero())
                .map(|res| format!("n={n}: residual {res}"))
        })
        .collect();
    Outcome::check(codes.len() as u64, failures, "zero residual for squared Kravchuk and random alpha")
}

fn weak_binomial_definition(_: Level) -> Outcome {
    let mut failures = Vec::new();
    let full = WeightEnumerator::full_space(12);
    if weakly_binomial_check(&full, &BigUint::one(), 0.0, 0.0).map(|v| v.is_empty()) != Ok(true) {
        failures.push("full space flagged".into());
    }
    let basis: Vec<_> = (0..8).map(|i| crate::f2::BitVector::unit(16, i)).collect();
    let e8 = weight_enumerator(&basis, 16, CAP).expect("under cap");
    match weakly_binomial_check(&e8, &(BigUint::one() << 8), 0.0, 0.0) {
        Ok(v) if v.contains(&4) => {}
        other => failures.push(format!("span(e1..e8) should violate at 4: {other:?}")),
    }
    let zero = WeightEnumerator::zero_code(10);
    if weakly_binomial_check(&zero, &(BigUint::one() << 10), 0.0, 0.0).map(|v| v.is_empty()) != Ok(true) {
        failures.push("zero code flagged".into());
    }
    Outcome::check(3, failures, "reference codes classified as expected")
}

fn discrepancy_definition(level: Level) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    let cases: [(usize, usize, Vec<Vec<usize>>, BigRational); 2] = [
        (4, 2, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]], r(1, 6)),
        (4, 2, vec![vec![0, 1]], r(3, 4)),
    ];
    for (n, d, faces, want) in cases {
        count += 1;
        let h = Hypergraph::new(n, d, faces).expect("valid");
        match discrepancy_exact(&h) {
            Ok(rep) if rep.epsilon == want => {}
            other => failures.push(format!("n={n} d={d}: {other:?}, expected {want}")),
        }
    }
    let mut g = rng(31);
    for h in random_hypergraphs(32, pick(level, 20, 60), 3, 12) {
        count += 1;
        let rep = discrepancy_exact(&h).expect("n <= 12");
        let dev = crate::discrepancy::deviation(&h, &rep.witness_s, rep.witness_j, Reference::Binomial)
            .expect("valid witness");
        if dev != rep.epsilon {
            failures.push(format!("witness does not reproduce epsilon on n={}", h.n()));
        }
        let mut perm: Vec<usize> = (0..h.n()).collect();
        use rand::seq::SliceRandom;
        perm.shuffle(&mut g);
        let relabeled = discrepancy_exact(&h.relabel(&perm).expect("permutation")).expect("n <= 12");
        if relabeled.epsilon != rep.epsilon {
            failures.push(format!("relabeling changed epsilon on n={}", h.n()));
        }
    }
    Outcome::check(count, failures, "reference values, witness replay and relabeling invariance")
}

/// Random hypergraphs with exhaustive discrepancy and their Cayley shell chain.
fn hypergraph_cases(level: Level) -> Vec<(Hypergraph, BigRational, crate::walks::LineChain)> {
    let hs = match level {
        Level::Quick => random_hypergraphs(41, 40, 3, 10),
        Level::Full => random_hypergraphs(41, 150, 3, 14),
    };
    hs.into_par_iter()
        .map(|h| {
            let eps = discrepancy_exact(&h).expect("n <= 14").epsilon;
            let line = cayley_line_chain(h.n(), &h.face_words(), CAP).expect("under cap");
            (h, eps, line)
        })
        .collect()
}

fn overlap_transition_margin(level: Level) -> Outcome {
    let cases = hypergraph_cases(level);
    let slack = r(1, 1_000_000_000_000);
    let mut failures = Vec::new();
    let mut tight = 0;
    for (h, eps, line) in &cases {
        let m = overlap_margin(line, h.d(), Reference::Binomial).expect("1 <= d <= n");
        if m.margin > eps + &slack {
            failures.push(format!("n={} d={}: margin {} > eps {}", h.n(), h.d(), m.margin, eps));
        }
        if &m.margin == eps {
            tight += 1;
        }
    }
    Outcome::check(
        cases.len() as u64,
        failures,
        format!("margin <= eps on every instance, attained exactly on {tight}"),
    )
}

type GenCase = (usize, Vec<crate::f2::BitVector>);

fn generator_sets(level: Level) -> Vec<GenCase> {
    match level {
        Level::Quick => instances::random_generator_sets(51, 30, 2, 12, 8),
        Level::Full => instances::random_generator_sets(51, 120, 2, 16, 12),
    }
}

struct WalkCase {
    walk: CayleyWalk,
    chain: FiniteChain,
    pi: Vec<BigRational>,
    partition: Vec<Vec<usize>>,
    coarse: FiniteChain,
}

fn walk_case(n: usize, gens: &[crate::f2::BitVector]) -> WalkCase {
    let walk = CayleyWalk::new(n, gens.to_vec()).expect("non-empty");
    let chain = walk.to_chain(CAP).expect("under cap");
    let pi = walk.uniform();
    let (_, partition) = walk.shell_partition(CAP).expect("under cap");
    let coarse = coarse_grain(&chain, &partition, &pi).expect("valid partition");
    WalkCase {
        walk,
        chain,
        pi,
        partition,
        coarse,
    }
}

fn coarse_grained_stationary(level: Level) -> Outcome {
    let sets = generator_sets(level);
    let mut failures: Vec<String> = sets
        .par_iter()
        .filter_map(|(n, gens)| {
            let c = walk_case(*n, gens);
            if c.chain.check_irreducible().is_err() || !c.chain.is_stationary(&c.pi) {
                return Some(format!("n={n}: uniform law not stationary for the walk"));
            }
            let agg = aggregate(&c.pi, &c.partition);
            match stationary(&c.coarse, 1e-12) {
                Ok(Distribution::Exact(p)) if p == agg => None,
                other => Some(format!("n={n} m={}: coarse stationary {other:?}", c.walk.span_dim())),
            }
        })
        .collect();
    let mut g = rng(52);
    let generic = pick(level, 30, 100);
    for t in 0..generic {
        let states = g.random_range(2..=8);
        let rows: Vec<Vec<(usize, BigRational)>> = instances::random_chain_rows(&mut g, states)
            .into_iter()
            .map(|row| {
                let total: u32 = row.iter().map(|(_, w)| w).sum();
                row.into_iter().map(|(j, w)| (j, r(w as i64, total as i64))).collect()
            })
            .collect();
        let chain = merge_duplicates(rows);
        let Ok(Distribution::Exact(pi)) = stationary(&chain, 1e-12) else {
            failures.push(format!("generic chain {t}: no exact stationary law"));
            continue;
        };
        let blocks = g.random_range(1..=states);
        let mut partition = vec![Vec::new(); blocks];
        for s in 0..states {
            let b = if s < blocks { s } else { g.random_range(0..blocks) };
            partition[b].push(s);
        }
        let coarse = coarse_grain(&chain, &partition, &pi).expect("valid partition");
        if !coarse.is_stationary(&aggregate(&pi, &partition)) {
            failures.push(format!("generic chain {t}: aggregated law not stationary"));
        }
    }
    Outcome::check(
        (sets.len() + generic) as u64,
        failures,
        "exact on Cayley walks with shell partitions and on random chains with random partitions",
    )
}

fn merge_duplicates(rows: Vec<Vec<(usize, BigRational)>>) -> FiniteChain {
    let rows = rows
        .into_iter()
        .map(|row| {
            let mut m = std::collections::BTreeMap::<usize, BigRational>::new();
            for (j, v) in row {
                *m.entry(j).or_insert_with(BigRational::zero) += v;
            }
            m.into_iter().collect()
        })
        .collect();
    FiniteChain::new(rows).expect("rows sum to one")
}

fn cayley_reversible(level: Level) -> Outcome {
    let sets = generator_sets(level);
    let failures: Vec<String> = sets
        .par_iter()
        .filter_map(|(n, gens)| {
            let c = walk_case(*n, gens);
            let rev = is_reversible(&c.chain, &c.pi, 0.0).expect("lengths agree");
            (!rev.reversible).then(|| format!("n={n}: violation {}", rev.max_violation))
        })
        .collect();
    Outcome::check(sets.len() as u64, failures, "detailed balance holds exactly")
}

fn coarse_reversible(level: Level) -> Outcome {
    let sets = generator_sets(level);
    let failures: Vec<String> = sets
        .par_iter()
        .filter_map(|(n, gens)| {
            let c = walk_case(*n, gens);
            let agg = aggregate(&c.pi, &c.partition);
            let rev = is_reversible(&c.coarse, &agg, 0.0).expect("lengths agree");
            let line = cayley_line_chain(*n, gens, CAP).expect("under cap");
            if !rev.reversible {
                Some(format!("n={n}: violation {}", rev.max_violation))
            } else if line.support_chain().expect("stochastic") != c.coarse {
                Some(format!("n={n}: shell chain differs from the coarse-grained walk"))
            } else {
                None
            }
        })
        .collect();
    Outcome::check(
        sets.len() as u64,
        failures,
        "detailed balance holds exactly; the shell chain equals the coarse-grained walk",
    )
}

fn walk_enumerator(level: Level) -> Outcome {
    let mut sets = generator_sets(level);
    for h in random_hypergraphs(53, pick(level, 10, 40), 3, pick(level, 14, 20)) {
        sets.push((h.n(), h.face_words()));
    }
    let failures: Vec<String> = sets
        .par_iter()
        .filter_map(|(n, gens)| {
            let line = cayley_line_chain(*n, gens, CAP).expect("under cap");
            let m = line.span_dim().expect("Cayley chain");
            let from_walk = line.enumerator_from_stationary(m).expect("integral");
            let walk = CayleyWalk::new(*n, gens.clone()).expect("non-empty");
            let mut counts = vec![0u64; n + 1];
            for w in crate::f2::enumerate_span(*n, walk.basis(), CAP).expect("under cap") {
                counts[w.weight()] += 1;
            }
            let brute = WeightEnumerator::from_u64(&counts).expect("n + 1 bins");
            (from_walk != brute).then(|| format!("n={n} m={m}"))
        })
        .collect();
    Outcome::check(sets.len() as u64, failures, "exact on every instance")
}

fn complete_walk_binomial(level: Level) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for n in 1..=pick(level, 14, 24) {
        for d in 1..=n {
            count += 1;
            let line = complete_weight_d_line_chain(n, d).expect("1 <= d <= n");
            let pi = line.stationary().expect("irreducible on its support");
            if pi != binomial_law_on(n, line.support()) {
                failures.push(format!("n={n} d={d}"));
                continue;
            }
            if d < n {
                let scale = if d % 2 == 1 { BigInt::one() << n } else { BigInt::one() << (n - 1) };
                for &k in line.support() {
                    if pi[k] != BigRational::new(binomial(n, k), scale.clone()) {
                        failures.push(format!("n={n} d={d} k={k}: normalization"));
                    }
                }
            }
        }
    }
    for n in 1..=pick(level, 6, 8) {
        for d in 1..n {
            count += 1;
            let words: Vec<_> = (0u64..1 << n)
                .filter(|w| w.count_ones() as usize == d)
                .map(|w| crate::f2::BitVector::from_u64(n, w))
                .collect();
            let cayley = cayley_line_chain(n, &words, CAP).expect("under cap");
            let complete = complete_weight_d_line_chain(n, d).expect("1 <= d <= n");
            if cayley.support() != complete.support()
                || cayley.support().iter().any(|&i| cayley.transition()[i] != complete.transition()[i])
            {
                failures.push(format!("n={n} d={d}: Cayley walk on all weight-d words differs"));
            }
        }
    }
    Outcome::check(
        count,
        failures,
        "C(n,k)/2^n for odd d, C(n,k)/2^(n-1) on even shells for even d < n",
    )
}

fn even_weight_support(level: Level) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for n in 2..=pick(level, 20, 40) {
        for d in 1..n {
            count += 1;
            let line = complete_weight_d_line_chain(n, d).expect("1 <= d <= n");
            let want: Vec<usize> = if d % 2 == 1 { (0..=n).collect() } else { (0..=n).step_by(2).collect() };
            if line.support() != want.as_slice() {
                failures.push(format!("n={n} d={d}: support {:?}", line.support()));
            }
        }
    }
    Outcome::check(count, failures, "d = n is excluded, where the walk only reaches shells 0 and n")
}

fn stationary_ratio_bound(level: Level) -> Outcome {
    let cases = hypergraph_cases(level);
    let mut tally = std::collections::BTreeMap::<&'static str, u64>::new();
    let mut failures = Vec::new();
    for (h, eps, line) in &cases {
        let pi_eps = line.stationary().expect("irreducible");
        let reference = complete_weight_d_line_chain(h.n(), h.d()).expect("1 <= d <= n");
        let pi_ref = reference.stationary().expect("irreducible");
        let eps_f = eps.to_f64().unwrap_or(f64::NAN);
        let audit = ratio_audit(&pi_eps, &pi_ref, eps_f, h.d()).expect("lengths agree");
        let key = match audit.held {
            RatioForm::Strict => "strict",
            RatioForm::Symmetric => "symmetric",
            RatioForm::Polynomial => "polynomial",
            RatioForm::Vacuous => "vacuous",
            RatioForm::Neither => {
                failures.push(format!(
                    "n={} d={} eps={}: violations at {:?}",
                    h.n(),
                    h.d(),
                    eps,
                    audit.polynomial_violations
                ));
                "neither"
            }
        };
        *tally.entry(key).or_default() += 1;
    }
    let summary: Vec<String> = tally.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    let all_vacuous = tally.keys().all(|k| *k == "vacuous");
    if failures.is_empty() && all_vacuous {
        return Outcome::with(cases.len() as u64, Status::Vacuous, format!("empty interval everywhere ({})", summary.join(", ")));
    }
    let mut out = Outcome::check(cases.len() as u64, failures, summary.join(", "));
    if out.status == Status::Fail {
        out.detail = format!("{} [{}]", out.detail, summary.join(", "));
    }
    out
}

fn weak_binomial_from_discrepancy(level: Level) -> Outcome {
    let cases = hypergraph_cases(level);
    let mut failures = Vec::new();
    for (h, eps, line) in &cases {
        let eps_f = eps.to_f64().unwrap_or(f64::NAN);
        let zeta = eps_f.sqrt();
        let eta = bounds::entropy(eps_f.powf(1.0 / (2.0 * h.d() as f64))).expect("in [0, 1]");
        let m = line.span_dim().expect("Cayley chain");
        let dual = BigUint::one() << (h.n() - m);
        let b = line.enumerator().expect("Cayley chain");
        match weakly_binomial_check(b, &dual, zeta, eta) {
            Ok(v) if v.is_empty() => {}
            other => failures.push(format!("n={} d={} eps={}: {other:?}", h.n(), h.d(), eps)),
        }
    }
    Outcome::check(cases.len() as u64, failures, "no violating weight on any instance")
}

fn epsilon0_threshold(_: Level) -> Outcome {
    let mut failures = Vec::new();
    match bounds::epsilon0(2) {
        Ok((v, Epsilon0Branch::Entropy)) if (v - 3.021_618_826_395e-6).abs() < 1e-15 => {}
        other => failures.push(format!("d=2: {other:?}")),
    }
    let mut prev = f64::INFINITY;
    for d in 1..=12 {
        match bounds::epsilon0(d) {
            Ok((v, _)) if v > 0.0 && v < prev && v <= (-2.0 * d as f64).exp2() => prev = v,
            other => failures.push(format!("d={d}: {other:?} not decreasing or above 2^(-2d)")),
        }
    }
    Outcome::check(13, failures, "eps0(2) = 3.0216e-6 on the entropy branch, decreasing in d")
}

fn distance_bound_check(_: Level) -> Outcome {
    let mut failures = Vec::new();
    match bounds::distance_bound(2, 1.0 / 16.0) {
        Ok((v, false)) if (v - 24.0).abs() < 1e-12 => {}
        other => failures.push(format!("(2, 1/16): {other:?}")),
    }
    let (e0, _) = bounds::epsilon0(2).expect("d >= 1");
    if !matches!(bounds::distance_bound(2, e0), Ok((_, true))) {
        failures.push("eps0 itself is not applicable".into());
    }
    let mut prev = f64::INFINITY;
    for k in 1..=40 {
        let eps = e0 * 10f64.powi(-k);
        match bounds::distance_bound(2, eps) {
            Ok((v, true)) if v < prev => prev = v,
            other => failures.push(format!("eps={eps:e}: {other:?}")),
        }
    }
    Outcome::check(42, failures, "reference value at eps = 1/16, decreasing below eps0")
}

fn rate_bound(_: Level) -> Outcome {
    let mut failures = Vec::new();
    if bounds::al_rate_bound(0.0) != Ok(1.0) {
        failures.push("g(0) != 1".into());
    }
    match bounds::al_rate_bound(0.2) {
        Ok(v) if (v - 0.372_508_156_338_603).abs() < 1e-12 => {}
        other => failures.push(format!("g(0.2) = {other:?}")),
    }
    Outcome::check(2, failures, "reference values; the vanishing correction term is omitted")
}

fn rate_bound_root(_: Level) -> Outcome {
    match bounds::z_root(1e-13) {
        Ok(z) if (0.35..=0.4).contains(&z) && bounds::al_rate_bound(z).map(|g| g.abs() < 1e-9) == Ok(true) => {
            Outcome::with(1, Status::Pass, format!("z = {z:.10}"))
        }
        other => Outcome::with(1, Status::Fail, format!("{other:?}")),
    }
}

fn rate_bound_chord(_: Level) -> Outcome {
    let z = bounds::z_root(1e-13).expect("root exists");
    let worst = bounds::chord_audit(z, 2001);
    let status = if worst <= 1e-12 { Status::Pass } else { Status::Fail };
    Outcome::with(2001, status, format!("max g(delta) - (1 - delta/z) = {worst:e}"))
}

fn distance_cap(_: Level) -> Outcome {
    let mut failures = Vec::new();
    let ok = bounds::qecc2weak_distance_cap(4, 1e-12, 0.01);
    match ok.cap {
        Some(c) if (c - 4.0 * bounds::entropy(0.01).expect("in range")).abs() < 1e-15 => {}
        _ => failures.push(format!("(4, 1e-12, 0.01): {ok:?}")),
    }
    let zeta = bounds::qecc2weak_distance_cap(4, 1e-7, 0.01);
    if zeta.cap.is_some() || !zeta.reasons.iter().any(|r| r.starts_with("zeta branch")) {
        failures.push(format!("zeta gate: {zeta:?}"));
    }
    let eta = bounds::qecc2weak_distance_cap(4, 1e-12, 0.4);
    if eta.cap.is_some() || !eta.reasons.iter().any(|r| r.starts_with("eta branch")) {
        failures.push(format!("eta gate: {eta:?}"));
    }
    Outcome::check(3, failures, "cap 4H(eta) when both hypotheses hold, reasons otherwise")
}

fn inequality(audit: &bounds::InequalityAudit) -> Outcome {
    let status = if audit.passed() { Status::Pass } else { Status::Fail };
    Outcome::with(
        audit.points as u64,
        status,
        format!(
            "{}: {} violations, worst slack {:e} at {}",
            audit.name,
            audit.violations,
            audit.worst_slack,
            audit.worst_at.as_deref().unwrap_or("-")
        ),
    )
}

fn theorem_chain(level: Level) -> Outcome {
    match bounds::theorem_chain_audit(2..=8, pick(level, 50, 150)) {
        Ok(a) => inequality(&a),
        Err(e) => Outcome::with(0, Status::Fail, e.to_string()),
    }
}

fn f_function(_: Level) -> Outcome {
    inequality(&bounds::f_function_audit(&bounds::f_function_grid(100)).claim)
}

fn f_function_steps(_: Level) -> Outcome {
    let a = bounds::f_function_audit(&bounds::f_function_grid(100));
    let parts: Vec<String> = [&a.first_order, &a.entropy_drop, &a.half_log, &a.final_step]
        .iter()
        .map(|s| format!("{}: {}/{} violations", s.name, s.violations, s.points))
        .collect();
    Outcome::with(a.claim.points as u64, Status::Note, parts.join("; "))
}

fn entropy_sandwich(_: Level) -> Outcome {
    let a = bounds::entropy_sandwich_audit(2000, 60);
    let lower = inequality(&a.lower);
    let upper = inequality(&a.upper);
    let status = if lower.status == Status::Pass && upper.status == Status::Pass { Status::Pass } else { Status::Fail };
    Outcome::with(lower.instances + upper.instances, status, format!("{}; {}", lower.detail, upper.detail))
}

fn binomial_estimates(_: Level) -> Outcome {
    let a = bounds::entropy_sandwich_audit(10, 60);
    let parts = [&a.binomial_upper, &a.binomial_lower, &a.sum_upper, &a.sum_lower];
    let points = parts.iter().map(|p| p.points as u64).sum();
    let ok = parts.iter().all(|p| p.passed());
    let detail: Vec<String> = parts
        .iter()
        .map(|p| format!("{}: {} violations", p.name, p.violations))
        .collect();
    Outcome::with(points, if ok { Status::Pass } else { Status::Fail }, detail.join("; "))
}

fn entropy_inverse_check(_: Level) -> Outcome {
    let mut failures = Vec::new();
    for i in 0..=2000 {
        let x = 0.5 * i as f64 / 2000.0;
        let h = bounds::entropy(x).expect("in range");
        let back = bounds::entropy_inverse(h).expect("in range");
        if (back - x).abs() > 1e-10 {
            failures.push(format!("x={x}: {back}"));
        }
        let y = i as f64 / 2000.0;
        let fwd = bounds::entropy(bounds::entropy_inverse(y).expect("in range")).expect("in range");
        if (fwd - y).abs() > 1e-10 {
            failures.push(format!("y={y}: {fwd}"));
        }
    }
    Outcome::check(4002, failures, "both compositions within 1e-10")
}

fn ldpc_enumerator_floor(level: Level) -> Outcome {
    let codes = instances::ldpc_codes(61, pick(level, 20, 50), 24);
    let mut count = 0;
    let mut failures = Vec::new();
    for (n, d, gens) in &codes {
        let basis = crate::f2::row_space_basis(&F2Matrix::from_bitvectors(*n, gens).expect("lengths agree"));
        let b = weight_enumerator(&basis, *n, CAP).expect("under cap");
        for k in (0..=n / d).step_by(*d) {
            count += 1;
            let floor = bounds::ldpc_enumerator_floor(*n, *d, k).expect("d | k, k <= n/d");
            if BigInt::from(b.count(k).clone()) < floor {
                failures.push(format!("n={n} d={d} k={k}: B_k = {} < {floor}", b.count(k)));
            }
        }
    }
    Outcome::check(
        count,
        failures,
        format!("{} codes with bit degree 1 or 2, every admissible k", codes.len()),
    )
}

fn pipeline_sources() -> Vec<Source> {
    vec![
        Source::Toric { l: 2 },
        Source::Toric { l: 3 },
        Source::GraphCycle {
            vertices: 12,
            degree: 3,
            faces: 4,
            seed: 7,
        },
    ]
}

fn pseudorandom_distance(_: Level) -> Outcome {
    let mut lines = Vec::new();
    let mut applicable = 0;
    let mut failures = Vec::new();
    for src in pipeline_sources() {
        let rep = run_experiment(&ExperimentConfig::new(src.clone()));
        let Some(b) = rep.bounds else {
            failures.push(format!("{src}: no bounds stage"));
            continue;
        };
        if b.applicable {
            applicable += 1;
            if b.within_bound == Some(false) {
                failures.push(format!("{src}: delta_min exceeds the bound"));
            }
        }
        lines.push(format!("{src}: eps = {:.4} vs eps0 = {:.3e}", b.epsilon, b.epsilon0));
    }
    if !failures.is_empty() {
        return Outcome::check(3, failures, "");
    }
    let status = if applicable == 0 { Status::Vacuous } else { Status::Pass };
    Outcome::with(3, status, lines.join("; "))
}

fn pseudorandom_systole(_: Level) -> Outcome {
    let mut lines = Vec::new();
    let mut applicable = 0;
    for src in pipeline_sources() {
        let rep = run_experiment(&ExperimentConfig::new(src.clone()));
        let systole = rep.systole.flatten();
        if rep.bounds.as_ref().is_some_and(|b| b.applicable) {
            applicable += 1;
        }
        lines.push(format!("{src}: systole {systole:?}"));
    }
    let status = if applicable == 0 { Status::Vacuous } else { Status::Note };
    Outcome::with(3, status, format!("no instance has eps <= eps0; {}", lines.join("; ")))
}

fn pipeline_determinism(_: Level) -> Outcome {
    let mut failures = Vec::new();
    for src in pipeline_sources() {
        let cfg = ExperimentConfig::new(src.clone());
        if run_experiment(&cfg).to_json() != run_experiment(&cfg).to_json() {
            failures.push(format!("{src}: experiment reports differ"));
        }
    }
    let mut sampled = ExperimentConfig::new(Source::Toric { l: 4 });
    sampled.samples = 2000;
    sampled.sample_seed = 9;
    if run_experiment(&sampled).to_json() != run_experiment(&sampled).to_json() {
        failures.push("sampled discrepancy reports differ".into());
    }
    let grid = SweepConfig::parse("source=graph-cycle\nnv=12\ndegree=3\nfaces=3,4\nseed=1,2,3\nworkers=3\n")
        .expect("valid grid");
    let a = sweep(&grid).map(|s| s.csv);
    let b = sweep(&grid).map(|s| s.csv);
    match (a, b) {
        (Ok(a), Ok(b)) if a == b => {}
        _ => failures.push("sweep CSVs differ".into()),
    }
    Outcome::check(5, failures, "experiment JSON and sweep CSV identical across reruns")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_ledger_has_no_failures() {
        let ledger = verify_suite(Level::Quick);
        assert_eq!(ledger.entries.len(), CHECKS.len());
        for e in &ledger.entries {
            println!("{:?} {} ({}): {}", e.status, e.id, e.instances, e.detail);
        }
        assert_eq!(ledger.failures(), 0);
    }
}

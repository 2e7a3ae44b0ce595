//! The end-to-end pipeline: complex, discrepancy, CSS parameters,
//! weak-binomiality and bound comparison, as one reproducible report.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::HarnessError;
use crate::bounds::{self, Epsilon0Branch, QeccCap};
use crate::complex::{graph_cycle_complex, systole1, toric_complex, ChainComplex2, DegreeProfile};
use crate::css::{code_dimension, css_from_complex, min_distance_or_bound, weight_enumerator, CssCode, DistanceResult};
use crate::discrepancy::{
    discrepancy_exact_with, discrepancy_sampled_with, rows_as_hypergraph, DiscrepancyReport, Reference,
    EXACT_THRESHOLD,
};
use crate::enumerator::{weakly_binomial_check, WeightEnumerator};
use crate::io::{parse_complex, read_to_string};

/// Version stamp carried by every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest cap accepted without `allow_exponential`.
pub const DEFAULT_CAP: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    Toric { l: usize },
    GraphCycle { vertices: usize, degree: usize, faces: usize, seed: u64 },
    File { path: PathBuf },
}

impl Source {
    pub fn build(&self) -> Result<ChainComplex2, HarnessError> {
        Ok(match self {
            Source::Toric { l } => toric_complex(*l)?,
            Source::GraphCycle { vertices, degree, faces, seed } => graph_cycle_complex(*vertices, *degree, *faces, *seed)?,
            Source::File { path } => parse_complex(&read_to_string(path)?)?,
        })
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Source::GraphCycle { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Toric { l } => write!(f, "toric(L={l})"),
            Source::GraphCycle { vertices, degree, faces, seed } => {
                write!(f, "graph-cycle(nv={vertices}, degree={degree}, faces={faces}, seed={seed})")
            }
            Source::File { path } => write!(f, "file({})", path.display()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DiscrepancyMode {
    /// Exhaustive when `n` is at most the threshold, sampled otherwise.
    #[default]
    Auto,
    Exact,
    Sampled,
}

impl FromStr for DiscrepancyMode {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Self::Auto),
            "exact" => Ok(Self::Exact),
            "sampled" => Ok(Self::Sampled),
            _ => Err(HarnessError::Config(format!("discrepancy mode must be auto|exact|sampled, got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentConfig {
    pub source: Source,
    /// Bound on enumerated states or codewords.
    pub cap: u64,
    pub discrepancy: DiscrepancyMode,
    pub samples: u64,
    pub sample_seed: u64,
    pub exact_threshold: usize,
    pub reference: Reference,
    pub include_timings: bool,
}

impl ExperimentConfig {
    pub fn new(source: Source) -> Self {
        Self {
            source,
            cap: DEFAULT_CAP,
            discrepancy: DiscrepancyMode::Auto,
            samples: 20_000,
            sample_seed: 0,
            exact_threshold: EXACT_THRESHOLD,
            reference: Reference::Binomial,
            include_timings: false,
        }
    }

    /// Parses flat `key = value` lines. Unknown keys are rejected.
    ///
    /// Keys: `source` (`toric`, `graph-cycle`, `file`), `L`, `nv`, `degree`,
    /// `faces`, `seed`, `path`, `cap`, `allow_exponential`, `discrepancy`,
    /// `samples`, `sample_seed`, `exact_threshold`, `reference`,
    /// `include_timings`.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        Self::from_pairs(&parse_pairs(text)?)
    }

    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self, HarnessError> {
        const KNOWN: &[&str] = &[
            "source",
            "L",
            "nv",
            "degree",
            "faces",
            "seed",
            "path",
            "cap",
            "allow_exponential",
            "discrepancy",
            "samples",
            "sample_seed",
            "exact_threshold",
            "reference",
            "include_timings",
        ];
        if let Some(k) = pairs.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(HarnessError::Config(format!("unknown key {k:?}")));
        }
        let get = |k: &str| pairs.get(k).map(String::as_str);
        let source = match get("source") {
            Some("toric") => Source::Toric { l: required(pairs, "L")? },
            Some("graph-cycle") => Source::GraphCycle {
                vertices: required(pairs, "nv")?,
                degree: required(pairs, "degree")?,
                faces: required(pairs, "faces")?,
                seed: optional(pairs, "seed")?.unwrap_or(0),
            },
            Some("file") => Source::File {
                path: PathBuf::from(get("path").ok_or_else(|| HarnessError::Config("missing key \"path\"".into()))?),
            },
            Some(other) => return Err(HarnessError::Config(format!("unknown source {other:?}"))),
            None => return Err(HarnessError::Config("missing key \"source\"".into())),
        };
        let mut cfg = Self::new(source);
        let allow: bool = optional(pairs, "allow_exponential")?.unwrap_or(false);
        if let Some(cap) = optional::<u64>(pairs, "cap")? {
            cfg.cap = checked_cap(cap, allow)?;
        }
        if let Some(mode) = get("discrepancy") {
            cfg.discrepancy = mode.parse()?;
        }
        if let Some(s) = optional(pairs, "samples")? {
            cfg.samples = s;
        }
        if let Some(s) = optional(pairs, "sample_seed")? {
            cfg.sample_seed = s;
        }
        if let Some(t) = optional(pairs, "exact_threshold")? {
            cfg.exact_threshold = t;
        }
        if let Some(r) = get("reference") {
            cfg.reference = match r {
                "binomial" => Reference::Binomial,
                "hypergeometric" => Reference::Hypergeometric,
                _ => return Err(HarnessError::Config(format!("reference must be binomial|hypergeometric, got {r:?}"))),
            };
        }
        if let Some(t) = optional(pairs, "include_timings")? {
            cfg.include_timings = t;
        }
        Ok(cfg)
    }
}

/// Rejects caps above [`DEFAULT_CAP`] unless explicitly allowed.
pub fn checked_cap(cap: u64, allow_exponential: bool) -> Result<u64, HarnessError> {
    if cap > DEFAULT_CAP && !allow_exponential {
        return Err(HarnessError::Config(format!(
            "cap {cap} exceeds {DEFAULT_CAP}; set allow_exponential to confirm"
        )));
    }
    Ok(cap)
}

/// `key = value` lines; `#` starts a comment. Later keys override earlier ones.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, HarnessError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| HarnessError::Config(format!("line {}: expected key = value", i + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn optional<T: FromStr>(pairs: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, HarnessError> {
    pairs
        .get(key)
        .map(|v| {
            v.parse()
                .map_err(|_| HarnessError::Config(format!("bad value {v:?} for {key:?}")))
        })
        .transpose()
}

fn required<T: FromStr>(pairs: &BTreeMap<String, String>, key: &str) -> Result<T, HarnessError> {
    optional(pairs, key)?.ok_or_else(|| HarnessError::Config(format!("missing key {key:?}")))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexSummary {
    pub source: String,
    pub seed: Option<u64>,
    /// Edges, the qubit count.
    pub n: usize,
    pub vertices: usize,
    pub faces: usize,
    /// Face size, the uniformity of the discrepancy hypergraph.
    pub d: usize,
    /// Vertex degree of the face hypergraph when regular.
    pub regular_degree: Option<usize>,
    pub profile: DegreeProfile,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CssSummary {
    pub n: usize,
    pub m_x: usize,
    pub m_z: usize,
    pub k: usize,
    pub rate: String,
    pub distance: Option<DistanceResult>,
    /// `d_min / n` as `p/q`, or the witness bound when not exact.
    pub delta_min: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnumeratorSummary {
    /// Always `C_X`, the span of the faces.
    pub code: &'static str,
    pub dim: usize,
    pub counts: WeightEnumerator,
    pub min_nonzero_weight: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakBinomialSummary {
    pub zeta: f64,
    pub eta: f64,
    /// `log2 |C^perp|`.
    pub dual_log2: usize,
    pub violations: Vec<usize>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsSummary {
    pub d: usize,
    pub epsilon: f64,
    pub epsilon0: f64,
    pub branch: Epsilon0Branch,
    /// `None` when `epsilon` is zero, where the bound degenerates.
    pub distance_bound: Option<f64>,
    pub applicable: bool,
    pub delta_min: Option<f64>,
    pub within_bound: Option<bool>,
    pub distance_cap: QeccCap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageError {
    pub stage: &'static str,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub complex: Option<ComplexSummary>,
    pub discrepancy: Option<DiscrepancyReport>,
    pub css: Option<CssSummary>,
    pub enumerator: Option<EnumeratorSummary>,
    pub weak_binomial: Option<WeakBinomialSummary>,
    pub systole: Option<Option<usize>>,
    pub bounds: Option<BoundsSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<&'static str, f64>>,
    pub errors: Vec<StageError>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn failed(&self) -> bool {
        !self.errors.is_empty()
    }
}

struct Stages {
    errors: Vec<StageError>,
    timings: BTreeMap<&'static str, f64>,
}

impl Stages {
    fn run<T, E: fmt::Display>(&mut self, stage: &'static str, f: impl FnOnce() -> Result<T, E>) -> Option<T> {
        let start = Instant::now();
        let out = f();
        self.timings.insert(stage, start.elapsed().as_secs_f64());
        match out {
            Ok(v) => Some(v),
            Err(e) => {
                self.errors.push(StageError {
                    stage,
                    message: e.to_string(),
                });
                None
            }
        }
    }
}

fn ratio(p: usize, q: usize) -> String {
    crate::ratio_str(&num_rational::BigRational::new(p.into(), q.into()))
}

/// Runs every stage it can. A failing stage is recorded in `errors` and only
/// the stages depending on it are skipped.
pub fn run_experiment(config: &ExperimentConfig) -> ExperimentReport {
    let mut st = Stages {
        errors: Vec::new(),
        timings: BTreeMap::new(),
    };
    let cap = config.cap;
    let complex = st.run("generate", || config.source.build());
    let profile = complex.as_ref().and_then(|c| st.run("validate", || c.validate()));
    let complex = complex.filter(|_| profile.is_some());

    let hypergraph = complex
        .as_ref()
        .and_then(|c| st.run("hypergraph", || rows_as_hypergraph(&c.boundary2().transpose())));
    let summary = complex.as_ref().zip(profile).map(|(c, profile)| ComplexSummary {
        source: config.source.to_string(),
        seed: config.source.seed(),
        n: c.n(),
        vertices: c.boundary1().rows(),
        faces: c.boundary2().cols(),
        d: hypergraph.as_ref().map_or(profile.d_col2, |h| h.d()),
        regular_degree: hypergraph.as_ref().and_then(|h| h.regular_degree()),
        profile,
    });

    let disc = hypergraph.as_ref().and_then(|h| {
        st.run("discrepancy", || {
            let exact = match config.discrepancy {
                DiscrepancyMode::Exact => true,
                DiscrepancyMode::Sampled => false,
                DiscrepancyMode::Auto => h.n() <= config.exact_threshold,
            };
            if exact {
                discrepancy_exact_with(h, config.exact_threshold, config.reference)
            } else {
                discrepancy_sampled_with(h, config.samples, config.sample_seed, config.reference)
            }
        })
    });

    let code: Option<CssCode> = complex.as_ref().and_then(|c| st.run("css", || css_from_complex(c)));
    let k = code.as_ref().and_then(|c| st.run("dimension", || code_dimension(c)));
    let enumerator = code
        .as_ref()
        .and_then(|c| st.run("enumerator", || weight_enumerator(c.basis_x(), c.n(), cap)));

    let d = hypergraph.as_ref().map(|h| h.d());
    let epsilon = disc.as_ref().map(|r| r.epsilon_f64());
    let weak = match (&code, &enumerator, d, epsilon) {
        (Some(c), Some(e), Some(d), Some(eps)) => st.run("weak_binomial", || {
            let zeta = eps.sqrt();
            let eta = bounds::entropy(eps.powf(1.0 / (2.0 * d as f64))).map_err(|e| e.to_string())?;
            let dual_log2 = c.n() - c.m_x();
            let dual = BigUint::one() << dual_log2;
            let violations = weakly_binomial_check(e, &dual, zeta, eta).map_err(|e| e.to_string())?;
            Ok::<_, String>(WeakBinomialSummary {
                zeta,
                eta,
                dual_log2,
                holds: violations.is_empty(),
                violations,
            })
        }),
        _ => None,
    };

    let distance = match (&code, k) {
        (Some(c), Some(k)) if k > 0 => st.run("distance", || min_distance_or_bound(c, cap)),
        _ => None,
    };
    let css = code.as_ref().zip(k).map(|(c, k)| CssSummary {
        n: c.n(),
        m_x: c.m_x(),
        m_z: c.m_z(),
        k,
        rate: ratio(k, c.n()),
        delta_min: distance.as_ref().map(|dr| ratio(dr.value(), c.n())),
        distance: distance.clone(),
    });

    let systole = complex.as_ref().and_then(|c| st.run("systole", || systole1(c, cap)));

    let bounds = match (d, epsilon) {
        (Some(d), Some(eps)) => st.run("bounds", || {
            let (e0, branch) = bounds::epsilon0(d)?;
            let (bound, applicable) = if eps > 0.0 && eps < 1.0 {
                let (b, a) = bounds::distance_bound(d, eps)?;
                (Some(b), a)
            } else {
                (None, eps <= e0)
            };
            let delta_min = css
                .as_ref()
                .and_then(|c| c.distance.as_ref().map(|dr| dr.value() as f64 / c.n as f64));
            let params = bounds::BoundParams::from_epsilon(d, eps.clamp(0.0, 1.0), 1)?;
            Ok::<_, bounds::BoundsError>(BoundsSummary {
                d,
                epsilon: eps,
                epsilon0: e0,
                branch,
                distance_bound: bound,
                applicable,
                delta_min,
                within_bound: match (bound, delta_min, applicable) {
                    (Some(b), Some(dm), true) => Some(dm <= b),
                    _ => None,
                },
                distance_cap: bounds::qecc2weak_distance_cap(d, params.zeta, params.eta),
            })
        }),
        _ => None,
    };

    let enumerator = code.as_ref().zip(enumerator).map(|(c, counts)| EnumeratorSummary {
        code: "C_X",
        dim: c.m_x(),
        min_nonzero_weight: counts.min_nonzero_weight(),
        counts,
    });

    ExperimentReport {
        version: VERSION,
        config: config.clone(),
        complex: summary,
        discrepancy: disc,
        css,
        enumerator,
        weak_binomial: weak,
        systole,
        bounds,
        timings: config.include_timings.then_some(st.timings),
        errors: st.errors,
    }
}

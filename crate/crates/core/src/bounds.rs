//! Closed-form bounds: binary entropy and its inverse, `f_{d,beta}`, the
//! threshold `eps0(d)`, the distance bound for pseudorandom generators, the
//! Ashikhmin-Litsyn rate bound, and the LDPC enumerator floor, plus grid
//! audits of the inequalities they rest on.
//!
//! Logarithms are base 2. Everything is `f64`; hypothesis gates shave a
//! relative [`GATE_SLACK`] off the admissible side so a gate never reports
//! success because of rounding.

use std::f64::consts::LN_2;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::kravchuk::binomial;

/// Relative margin applied in hypothesis gates.
pub const GATE_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("{what} = {value} outside {range}")]
    Range {
        what: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("f_(d,beta) undefined: {0}")]
    Domain(String),
    #[error("bisection found no sign change on [{lo}, {hi}]")]
    ConvergenceFailure { lo: f64, hi: f64 },
    #[error("root {0} is outside [0.35, 0.4]")]
    RootOutsideInterval(f64),
    #[error("need d | k and k <= n / d, got n = {n}, d = {d}, k = {k}")]
    FloorRange { n: usize, d: usize, k: usize },
}

fn range(what: &'static str, value: f64, lo: f64, hi: f64, text: &'static str) -> Result<(), BoundsError> {
    if value.is_nan() || value < lo || value > hi {
        Err(BoundsError::Range { what, value, range: text })
    } else {
        Ok(())
    }
}

/// `log2(1 + x)` without cancellation for small `x`.
fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / LN_2
}

/// `-x log x`, zero at `x = 0`.
fn xlogx_neg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

fn entropy_unchecked(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    xlogx_neg(x) - (1.0 - x) * log2_1p(-x)
}

/// `H(x) = -x log x - (1-x) log(1-x)`.
pub fn entropy(x: f64) -> Result<f64, BoundsError> {
    range("x", x, 0.0, 1.0, "[0, 1]")?;
    Ok(entropy_unchecked(x))
}

/// The `x` in `[0, 1/2]` with `H(x) = y`, by bisection to machine precision.
pub fn entropy_inverse(y: f64) -> Result<f64, BoundsError> {
    range("y", y, 0.0, 1.0, "[0, 1]")?;
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if entropy_unchecked(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `2^{-2 log(2d) / d}`, the largest `beta` (or `eta`) the lemma chain admits.
pub fn beta_max(d: usize) -> f64 {
    (-2.0 * (2.0 * d as f64).log2() / d as f64).exp2()
}

/// `(1-2g) H((b-g)/(1-2g)) - H(b)`, rearranged so each piece is `O(g)`.
fn entropy_shift(beta: f64, gamma: f64) -> f64 {
    let a = -beta * log2_1p(-gamma / beta) + gamma * (beta - gamma).log2();
    let b = if beta < 1.0 {
        -(1.0 - beta) * log2_1p(-gamma / (1.0 - beta)) + gamma * (1.0 - beta - gamma).log2()
    } else {
        0.0
    };
    let c = (1.0 - 2.0 * gamma) * log2_1p(-2.0 * gamma);
    a + b + c
}

/// `f_{d,beta}(gamma) = 2g + (1-2g) H((beta-g)/(1-2g)) + H(2gd)/d^2 - H(beta)`.
pub fn f_value(d: usize, beta: f64, gamma: f64) -> Result<f64, BoundsError> {
    if d == 0 {
        return Err(BoundsError::Domain("d must be positive".into()));
    }
    if !(0.0..=1.0).contains(&beta) || !(0.0..0.5).contains(&gamma) {
        return Err(BoundsError::Domain(format!("beta = {beta}, gamma = {gamma}")));
    }
    let p = (beta - gamma) / (1.0 - 2.0 * gamma);
    if !(0.0..=1.0).contains(&p) {
        return Err(BoundsError::Domain(format!("(beta - gamma)/(1 - 2 gamma) = {p}")));
    }
    let spread = 2.0 * gamma * d as f64;
    if spread > 1.0 {
        return Err(BoundsError::Domain(format!("2 gamma d = {spread} > 1")));
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    let shift = if beta > gamma && beta + gamma < 1.0 {
        entropy_shift(beta, gamma)
    } else {
        (1.0 - 2.0 * gamma) * entropy_unchecked(p) - entropy_unchecked(beta)
    };
    let dd = (d * d) as f64;
    Ok(2.0 * gamma + shift + entropy_unchecked(spread) / dd)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Epsilon0Branch {
    /// `H^{-1}(2^{-2 log(2d)/d})^{2d}`.
    Entropy,
    /// `2^{-2d}`.
    Power,
}

/// `eps0(d) = min{H^{-1}(2^{-2 log(2d)/d})^{2d}, 2^{-2d}}` and the active branch.
pub fn epsilon0(d: usize) -> Result<(f64, Epsilon0Branch), BoundsError> {
    if d == 0 {
        return Err(BoundsError::Range {
            what: "d",
            value: 0.0,
            range: ">= 1",
        });
    }
    let first = entropy_inverse(beta_max(d))?.powi(2 * d as i32);
    let second = (-2.0 * d as f64).exp2();
    Ok(if first <= second {
        (first, Epsilon0Branch::Entropy)
    } else {
        (second, Epsilon0Branch::Power)
    })
}

/// `(12/d^2) eps^{1/(2d)} log^2(1/eps)` with `applicable = eps <= eps0(d)`.
pub fn distance_bound(d: usize, epsilon: f64) -> Result<(f64, bool), BoundsError> {
    if d == 0 {
        return Err(BoundsError::Range {
            what: "d",
            value: 0.0,
            range: ">= 1",
        });
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(BoundsError::Range {
            what: "epsilon",
            value: epsilon,
            range: "(0, 1)",
        });
    }
    let dd = d as f64;
    let l = (1.0 / epsilon).log2();
    let value = 12.0 / (dd * dd) * epsilon.powf(1.0 / (2.0 * dd)) * l * l;
    Ok((value, epsilon <= epsilon0(d)?.0))
}

/// `g(delta) = 1 - (delta/2) log 3 - H(delta/2)`, the asymptotic rate bound.
pub fn al_rate_bound(delta: f64) -> Result<f64, BoundsError> {
    range("delta", delta, 0.0, 1.0, "[0, 1]")?;
    Ok(al_unchecked(delta))
}

fn al_unchecked(delta: f64) -> f64 {
    1.0 - 0.5 * delta * 3f64.log2() - entropy_unchecked(0.5 * delta)
}

/// Root of [`al_rate_bound`] in `[0.3, 0.45]`, required to lie in `[0.35, 0.4]`.
pub fn z_root(tol: f64) -> Result<f64, BoundsError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(BoundsError::Range {
            what: "tol",
            value: tol,
            range: "> 0",
        });
    }
    let (mut lo, mut hi) = (0.3, 0.45);
    if al_unchecked(lo) <= 0.0 || al_unchecked(hi) >= 0.0 {
        return Err(BoundsError::ConvergenceFailure { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if al_unchecked(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z = 0.5 * (lo + hi);
    if !(0.35..=0.4).contains(&z) {
        return Err(BoundsError::RootOutsideInterval(z));
    }
    Ok(z)
}

/// Largest `g(delta) - (1 - delta/z)` over a grid of `[0, z]`; convexity of
/// `g` says it is at most zero up to rounding.
pub fn chord_audit(z: f64, points: usize) -> f64 {
    (0..=points)
        .map(|i| {
            let delta = z * i as f64 / points as f64;
            al_unchecked(delta) - (1.0 - delta / z)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Outcome of the hypothesis gate for the distance cap.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QeccCap {
    pub cap: Option<f64>,
    pub reasons: Vec<String>,
}

/// `4 H(eta)` when `eta <= 2^{-2 log(2d)/d}` and `zeta < eta^d`.
pub fn qecc2weak_distance_cap(d: usize, zeta: f64, eta: f64) -> QeccCap {
    let mut reasons = Vec::new();
    if d == 0 {
        reasons.push("d must be positive".to_string());
    }
    if !(0.0..=0.5).contains(&eta) {
        reasons.push(format!("eta = {eta} outside [0, 1/2]"));
    } else if eta > beta_max(d.max(1)) * (1.0 - GATE_SLACK) {
        reasons.push(format!("eta branch: eta = {eta} exceeds {}", beta_max(d.max(1))));
    }
    if zeta.is_nan() || zeta < 0.0 || zeta >= eta.powi(d as i32) * (1.0 - GATE_SLACK) {
        reasons.push(format!("zeta branch: zeta = {zeta} is not below eta^d = {}", eta.powi(d as i32)));
    }
    let cap = reasons.is_empty().then(|| 4.0 * entropy_unchecked(eta));
    QeccCap { cap, reasons }
}

/// `C(floor(n/d^2), k/d)`, a lower bound on `B_k` for codes with disjoint
/// weight-`d` generators.
pub fn ldpc_enumerator_floor(n: usize, d: usize, k: usize) -> Result<BigInt, BoundsError> {
    if d == 0 || !k.is_multiple_of(d) || k > n / d {
        return Err(BoundsError::FloorRange { n, d, k });
    }
    Ok(binomial(n / (d * d), k / d))
}

/// Derived parameters of the lemma chain for a given `d`, `eps`, `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundParams {
    pub d: usize,
    pub epsilon: f64,
    /// `eps^{1/2}`.
    pub zeta: f64,
    /// `H(eps^{1/(2d)})`.
    pub eta: f64,
    /// `eta^d`.
    pub gamma: f64,
    /// The `beta` fed to `f`, equal to `eta`.
    pub beta: f64,
    /// `eta n`.
    pub t: f64,
    /// `gamma n`.
    pub j: f64,
}

impl BoundParams {
    pub fn from_epsilon(d: usize, epsilon: f64, n: usize) -> Result<Self, BoundsError> {
        range("epsilon", epsilon, 0.0, 1.0, "[0, 1]")?;
        if d == 0 {
            return Err(BoundsError::Range {
                what: "d",
                value: 0.0,
                range: ">= 1",
            });
        }
        let eta = entropy_unchecked(epsilon.powf(1.0 / (2.0 * d as f64)));
        let gamma = eta.powi(d as i32);
        Ok(Self {
            d,
            epsilon,
            zeta: epsilon.sqrt(),
            eta,
            gamma,
            beta: eta,
            t: eta * n as f64,
            j: gamma * n as f64,
        })
    }
}

/// Count and worst slack of one audited inequality (slack < 0 is a violation).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityAudit {
    pub name: String,
    pub points: usize,
    pub violations: usize,
    pub worst_slack: f64,
    pub worst_at: Option<String>,
}

impl InequalityAudit {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            points: 0,
            violations: 0,
            worst_slack: f64::INFINITY,
            worst_at: None,
        }
    }

    /// `slack` is the right side minus the left side, with `tol` forgiven.
    fn record(&mut self, slack: f64, tol: f64, at: impl FnOnce() -> String) {
        self.points += 1;
        if slack < -tol || slack.is_nan() {
            self.violations += 1;
        }
        if slack < self.worst_slack || slack.is_nan() {
            self.worst_slack = slack;
            self.worst_at = Some(at());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.points > 0
    }
}

/// `(d, beta)` grid for the f-function inequality: `d = 2..=11`, `per_d` log-spaced `beta`
/// from `1e-4` up to `beta_max(d)` inclusive.
pub fn f_function_grid(per_d: usize) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    for d in 2..=11 {
        let hi = beta_max(d).min(0.5);
        let (a, b) = (1e-4f64.log2(), hi.log2());
        for i in 0..per_d {
            let t = if per_d == 1 { 1.0 } else { i as f64 / (per_d - 1) as f64 };
            let beta = if i + 1 == per_d { hi } else { (a + (b - a) * t).exp2() };
            out.push((d, beta));
        }
    }
    out
}

/// The inequality `f_{d,beta}(beta^d) >= beta^d` and each step of its derivation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FFunctionAudit {
    pub claim: InequalityAudit,
    /// `H((b - b^d)/(1 - 2b^d)) >= H(b) + b^d log b`.
    pub first_order: InequalityAudit,
    /// `H(2 b^d d) >= -(2 b^d d) log(2 b^d d)`.
    pub entropy_drop: InequalityAudit,
    /// `-b^d log b - b^d (2 log(2d)/d) >= -(1/2) b^d log b`.
    pub half_log: InequalityAudit,
    /// `-(1/2) b^d log b >= b^d`.
    pub final_step: InequalityAudit,
}

pub fn f_function_audit(grid: &[(usize, f64)]) -> FFunctionAudit {
    let mut claim = InequalityAudit::new("f(beta^d) >= beta^d");
    let mut first_order = InequalityAudit::new("first-order entropy expansion");
    let mut entropy_drop = InequalityAudit::new("H(x) >= -x log x");
    let mut half_log = InequalityAudit::new("log(2d) step");
    let mut final_step = InequalityAudit::new("-(1/2) beta^d log beta >= beta^d");
    for &(d, beta) in grid {
        let g = beta.powi(d as i32);
        let at = || format!("d={d} beta={beta:e}");
        // relative tolerance on the scale of beta^d
        let tol = 1e-9 * g;
        match f_value(d, beta, g) {
            Ok(f) => claim.record(f - g, tol, at),
            Err(_) => claim.record(f64::NAN, 0.0, at),
        }
        let p = (beta - g) / (1.0 - 2.0 * g);
        // H(p) - H(beta) = [(1-2g) H(p) - H(beta)] + 2g H(p)
        let gap = entropy_shift(beta, g) + 2.0 * g * entropy_unchecked(p);
        first_order.record(gap - g * beta.log2(), tol, at);
        let x = 2.0 * g * d as f64;
        entropy_drop.record(entropy_unchecked(x) - xlogx_neg(x), tol, at);
        let lb = beta.log2();
        half_log.record((-g * lb - g * 2.0 * (2.0 * d as f64).log2() / d as f64) - (-0.5 * g * lb), tol, at);
        final_step.record(-0.5 * g * lb - g, tol, at);
    }
    FFunctionAudit {
        claim,
        first_order,
        entropy_drop,
        half_log,
        final_step,
    }
}

/// Both sides of `x <= H(x) <= 2x log(1/x)` and the binomial estimates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichAudit {
    pub lower: InequalityAudit,
    pub upper: InequalityAudit,
    /// `C(n,k) <= 2^{nH(k/n)}`.
    pub binomial_upper: InequalityAudit,
    /// `C(n,k) >= 2^{nH(k/n)} / sqrt(8 n e (1-e))`, `1 <= k <= n-1`.
    pub binomial_lower: InequalityAudit,
    /// `sum_{i<=k} C(n,i) <= 2^{nH(k/n)}` for `k <= n/2`.
    pub sum_upper: InequalityAudit,
    /// `sum_{i<=k} C(n,i) >= 2^{nH(k/n)} / sqrt(8 n e (1-e))`, `1 <= k <= n-1`.
    pub sum_lower: InequalityAudit,
}

impl SandwichAudit {
    pub fn all(&self) -> [&InequalityAudit; 6] {
        [
            &self.lower,
            &self.upper,
            &self.binomial_upper,
            &self.binomial_lower,
            &self.sum_upper,
            &self.sum_lower,
        ]
    }

    /// Smallest slack over every audited inequality.
    pub fn worst_slack(&self) -> f64 {
        self.all().iter().map(|a| a.worst_slack).fold(f64::INFINITY, f64::min)
    }
}

fn log2_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().unwrap_or(f64::NAN).log2()
    } else {
        let shift = bits - 900;
        (x >> shift).to_f64().unwrap_or(f64::NAN).log2() + shift as f64
    }
}

/// Entropy sandwich on `grid + 1` points of `[0, 1/2]`, binomial estimates
/// for every `1 <= k <= n - 1`, `n <= max_n`. Binomial comparisons are made
/// in the log domain with tolerance `1e-9`.
pub fn entropy_sandwich_audit(grid: usize, max_n: usize) -> SandwichAudit {
    let mut lower = InequalityAudit::new("x <= H(x)");
    let mut upper = InequalityAudit::new("H(x) <= 2x log(1/x)");
    for i in 0..=grid {
        let x = 0.5 * i as f64 / grid as f64;
        let h = entropy_unchecked(x);
        let at = || format!("x={x}");
        lower.record(h - x, 1e-12, at);
        upper.record(2.0 * xlogx_neg(x) - h, 1e-12, at);
    }
    let mut binomial_upper = InequalityAudit::new("C(n,k) <= 2^{nH}");
    let mut binomial_lower = InequalityAudit::new("C(n,k) >= 2^{nH}/sqrt(8n e(1-e))");
    let mut sum_upper = InequalityAudit::new("sum C(n,i) <= 2^{nH}, k <= n/2");
    let mut sum_lower = InequalityAudit::new("sum C(n,i) >= 2^{nH}/sqrt(8n e(1-e))");
    for n in 2..=max_n {
        let mut partial = BigInt::from(1);
        for k in 1..n {
            let c = binomial(n, k);
            partial += &c;
            let e = k as f64 / n as f64;
            let exponent = n as f64 * entropy_unchecked(e);
            let prefactor = 0.5 * (8.0 * n as f64 * e * (1.0 - e)).log2();
            let lc = log2_big(&c);
            let ls = log2_big(&partial);
            let at = || format!("n={n} k={k}");
            binomial_upper.record(exponent - lc, 1e-9, at);
            binomial_lower.record(lc - (exponent - prefactor), 1e-9, at);
            if 2 * k <= n {
                sum_upper.record(exponent - ls, 1e-9, at);
            }
            sum_lower.record(ls - (exponent - prefactor), 1e-9, at);
        }
    }
    SandwichAudit {
        lower,
        upper,
        binomial_upper,
        binomial_lower,
        sum_upper,
        sum_lower,
    }
}

/// For `eps` below `eps0(d)`: the cap `4 H(eta)` with `eta = H(eps^{1/(2d)})`
/// must not exceed [`distance_bound`]. Grid: `eps0 * 10^{-250 k / per_d}`,
/// `k = 1..=per_d`, strictly below `eps0` so the gates are not decided by
/// rounding at the boundary.
pub fn theorem_chain_audit(d_range: std::ops::RangeInclusive<usize>, per_d: usize) -> Result<InequalityAudit, BoundsError> {
    let mut audit = InequalityAudit::new("4H(H(eps^{1/(2d)})) <= distance bound");
    for d in d_range {
        let (e0, _) = epsilon0(d)?;
        for k in 1..=per_d {
            let eps = e0 * 10f64.powf(-(k as f64) * 250.0 / per_d as f64);
            if eps <= f64::MIN_POSITIVE {
                continue;
            }
            let p = BoundParams::from_epsilon(d, eps, 1)?;
            let gate = qecc2weak_distance_cap(d, p.zeta, p.eta);
            let (bound, applicable) = distance_bound(d, eps)?;
            let at = || format!("d={d} eps={eps:e}");
            match (gate.cap, applicable) {
                (Some(cap), true) => audit.record(bound - cap, 1e-12 * bound, at),
                _ => audit.record(f64::NAN, 0.0, at),
            }
        }
    }
    Ok(audit)
}

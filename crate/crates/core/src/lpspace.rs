//! Weighted `L^p` norms of radial functions, witness functions for
//! non-triviality and non-inclusion, and numerical inclusion experiments.
//!
//! A [`SampledFunction`] is a radial profile `f(|x|)` on `[0, T]` in dimension
//! `d`; integrals over `R^d` pick up the sphere factor `c_d t^(d-1)`. All norms
//! are accumulated in the log domain so `e^ω` never has to be formed.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, WindowSups};
use crate::quad;
use crate::relations::{self, MatrixCondition, MatrixKind, MatrixRelation, RelationVerdict, WeightMatrix};
use crate::verdict::{constants, Verdict};
use crate::weight::WeightFunction;

/// Version of the fixed test battery used by [`inclusion_experiment`].
pub const BATTERY_VERSION: u32 = 1;
const THETA_INDICES: [f64; 3] = [0.5, 1.0, 2.0];
/// Relative slack allowed when comparing two norms computed on the same nodes.
const NORM_TOL: f64 = 1e-9;
const BLOCK_SAMPLES: usize = 33;

/// `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidArgument(format!("p must lie in [1, inf) (got {p})")));
        }
        Ok(Exponent::Finite(p))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// `1/p`, zero for `p = ∞`.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            _ => {
                let p: f64 = s.parse().map_err(|_| Error::Parse(format!("bad exponent '{s}'")))?;
                Exponent::finite(p)
            }
        }
    }
}

/// Radial profile sampled on a grid over `[0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    /// `ln f(t_i)`, kept separately so values far below the underflow limit still count.
    pub log_values: Vec<f64>,
    pub dim: u32,
}

impl SampledFunction {
    pub fn new(grid: GridSpec, values: Vec<f64>, dim: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        if values.len() != grid.n_points {
            return Err(Error::InvalidArgument(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.n_points
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidArgument(format!("sampled moduli must be finite and >= 0 (got {v})")));
        }
        let log_values = values.iter().map(|v| v.ln()).collect();
        Ok(Self { grid, values, log_values, dim })
    }

    /// From `ln f(t_i)`; `-inf` marks a zero.
    pub fn from_logs(grid: GridSpec, log_values: Vec<f64>, dim: u32) -> Result<Self> {
        if let Some(l) = log_values.iter().find(|l| l.is_nan() || **l == f64::INFINITY) {
            return Err(Error::InvalidArgument(format!("log-moduli must be < +inf (got {l})")));
        }
        let mut f = Self::new(grid, log_values.iter().map(|l| l.exp()).collect(), dim)?;
        f.log_values = log_values;
        Ok(f)
    }

    pub fn from_fn(grid: GridSpec, dim: u32, f: impl Fn(f64) -> f64) -> Result<Self> {
        let ts = grid.t_points()?;
        Self::new(grid, ts.iter().map(|&t| f(t)).collect(), dim)
    }

    pub fn ts(&self) -> Result<Vec<f64>> {
        self.grid.t_points()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        let lc = c.abs().ln();
        Self::from_logs(self.grid, self.log_values.iter().map(|l| l + lc).collect(), self.dim)
    }
}

/// Linear radial grid on `[0, t_max]`.
pub fn radial_grid(t_max: f64, n_points: usize) -> Result<GridSpec> {
    GridSpec::linear(0.0, t_max, n_points)
}

/// Surface measure of the unit sphere in `R^d`, `d π^{d/2} / Γ(1 + d/2)`.
pub fn sphere_factor(dim: u32) -> f64 {
    ln_sphere_factor(dim).exp()
}

fn ln_sphere_factor(dim: u32) -> f64 {
    let d = dim as f64;
    d.ln() + 0.5 * d * PI.ln() - ln_gamma(1.0 + 0.5 * d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormValue {
    Finite { value: f64 },
    Divergent { evidence: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub p: Exponent,
    pub value: NormValue,
    /// Logarithm of the norm on the sampled horizon (finite even when flagged divergent).
    pub log_value: f64,
    /// Quadrature error estimate of the norm (zero for `p = ∞`).
    pub error: f64,
}

impl NormResult {
    pub fn is_finite(&self) -> bool {
        matches!(self.value, NormValue::Finite { .. })
    }

    pub fn is_divergent(&self) -> bool {
        !self.is_finite()
    }

    /// Value on the sampled horizon.
    pub fn horizon_value(&self) -> f64 {
        self.log_value.exp()
    }
}

/// Log of the trapezoid integral of `e^{l_i}` over `ts`.
fn log_trapezoid(ts: &[f64], logs: &[f64]) -> f64 {
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    let ys: Vec<f64> = logs.iter().map(|l| (l - m).exp()).collect();
    m + quad::trapezoid(ts, &ys).ln()
}

/// Log-integrand `p log f + ω` (without the sphere factor) at each node.
fn log_integrand(f: &SampledFunction, w: &WeightFunction, p: Exponent, ts: &[f64]) -> Result<Vec<f64>> {
    let pw = match p {
        Exponent::Finite(p) => p,
        Exponent::Infinity => 1.0,
    };
    ts.iter()
        .zip(&f.log_values)
        .map(|(&t, &l)| {
            if l == f64::NEG_INFINITY {
                Ok(l)
            } else {
                Ok(pw * l + w.evaluate(t)?)
            }
        })
        .collect()
}

/// `‖f‖_{p,ω}` on the sampled horizon, with tail divergence flagged from the
/// trend of the log-integrand over the two top decades.
pub fn weighted_norm(f: &SampledFunction, w: &WeightFunction, p: Exponent) -> Result<NormResult> {
    let ts = f.ts()?;
    let mut logs = log_integrand(f, w, p, &ts)?;
    if logs.iter().any(|l| *l == f64::INFINITY) {
        return Err(Error::NonFinite(format!("log-integrand of {} overflows", w.label())));
    }
    let ws = WindowSups::new(&f.grid, &logs)?;
    match p {
        Exponent::Infinity => {
            let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let growing = ws.top > f64::NEG_INFINITY && ws.top - ws.prev >= 0.1 * ws.prev.abs().max(1.0);
            let value = if growing {
                NormValue::Divergent {
                    evidence: format!("log |f| + w rises from {:.4} to {:.4} over the top decade", ws.prev, ws.top),
                }
            } else {
                NormValue::Finite { value: m.exp() }
            };
            Ok(NormResult { p, value, log_value: m, error: 0.0 })
        }
        Exponent::Finite(pv) => {
            let lc = ln_sphere_factor(f.dim);
            let dm1 = (f.dim - 1) as f64;
            if dm1 > 0.0 {
                for (l, t) in logs.iter_mut().zip(&ts) {
                    *l += dm1 * t.ln();
                }
            }
            let full = log_trapezoid(&ts, &logs) + lc;
            // Coarser rule on every other node as the error estimate.
            let half_t: Vec<f64> = ts.iter().step_by(2).copied().collect();
            let half_l: Vec<f64> = logs.iter().step_by(2).copied().collect();
            let coarse = log_trapezoid(&half_t, &half_l) + lc;
            let log_value = full / pv;
            let err = if full == f64::NEG_INFINITY {
                0.0
            } else {
                (log_value.exp() - (coarse / pv).exp()).abs()
            };
            let nondecreasing = ws.top > f64::NEG_INFINITY && ws.top >= ws.prev;
            let value = if nondecreasing {
                NormValue::Divergent {
                    evidence: format!(
                        "log-integrand does not decay over the top decade ({:.4} -> {:.4})",
                        ws.prev, ws.top
                    ),
                }
            } else {
                NormValue::Finite { value: log_value.exp() }
            };
            Ok(NormResult { p, value, log_value, error: err })
        }
    }
}

/// `θ^p_ω = e^{-ω/p}` (`e^{-ω}` for `p = ∞`).
pub fn theta_function(w: &WeightFunction, p: Exponent, grid: GridSpec, dim: u32) -> Result<SampledFunction> {
    let k = match p {
        Exponent::Finite(p) => 1.0 / p,
        Exponent::Infinity => 1.0,
    };
    let ts = grid.t_points()?;
    let logs = ts.iter().map(|&t| Ok(-k * w.evaluate(t)?)).collect::<Result<Vec<_>>>()?;
    SampledFunction::from_logs(grid, logs, dim)
}

fn require_continuous(m: &WeightMatrix, p: Exponent) -> Result<()> {
    if !p.is_infinite() && !m.flags.continuous {
        return Err(Error::InvalidArgument("finite p needs a continuous matrix".into()));
    }
    Ok(())
}

/// Whether `θ^p_{ω^ℓ} ∈ L^p_{ω^{ℓ'}}` on the sampled horizon.
///
/// The verdict is cross-checked against what the matrix growth predicts:
/// membership is forced for `p = ∞, ℓ ≥ ℓ'`, and for `ℓ < ℓ'` the sampled
/// growth of `ω^{ℓ'} - ω^ℓ` decides `p = ∞` exactly.
pub fn theta_membership(m: &WeightMatrix, p: Exponent, ell: f64, ell_p: f64, grid: GridSpec) -> Result<Verdict> {
    if !(ell > 0.0 && ell_p > 0.0) {
        return Err(Error::InvalidArgument("indices must be positive".into()));
    }
    require_continuous(m, p)?;
    let theta = theta_function(&m.member(ell)?, p, grid, 1)?;
    let norm = weighted_norm(&theta, &m.member(ell_p)?, p)?;
    if p.is_infinite() && ell >= ell_p && m.flags.nondecreasing && norm.log_value > 1e-12 {
        return Err(Error::Inconsistency(format!(
            "theta^inf norm {} exceeds 1 for l = {ell} >= l' = {ell_p}",
            norm.horizon_value()
        )));
    }
    let v = if norm.is_finite() {
        Verdict::holds(constants(&[("norm", norm.horizon_value()), ("log_norm", norm.log_value)]))
    } else {
        Verdict::fails(constants(&[("log_norm", norm.log_value)]))
    };
    let note = match &norm.value {
        NormValue::Finite { .. } => format!("theta^{p} of index {ell} in weight index {ell_p}"),
        NormValue::Divergent { evidence } => evidence.clone(),
    };
    Ok(v.with_horizon(grid).with_note(note))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    /// First integer index with `ω^{n0}(n0) > 1`; zero when the bounded path was used.
    pub n0: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub norms: Vec<(f64, NormResult)>,
    pub all_finite: bool,
    pub note: String,
}

/// Builds the radial witness `ψ` showing the Beurling-type space is
/// nontrivial, and checks it lies in `L^p_{ω^ℓ}` for each tested `ℓ`.
///
/// Uses `σ(x) = ω^{n+1}(x)` on `|x| ∈ [n, n+1)`: `ψ^∞ = e^{-σ²}` and
/// `ψ^p = e^{-σ^{a_n b_n}/p}` with the exponents forcing
/// `σ^{a_n b_n} - ω^n ≥ 2(d+1) log(1+|x|)`.
pub fn nontriviality_witness(
    m: &WeightMatrix,
    p: Exponent,
    grid: GridSpec,
    dim: u32,
    tested: &[f64],
) -> Result<(SampledFunction, MembershipReport)> {
    if !m.flags.nondecreasing || !m.flags.radial {
        return Err(Error::InvalidArgument("witness needs a nondecreasing radial matrix".into()));
    }
    require_continuous(m, p)?;
    let ts = grid.t_points()?;
    let member = |l: f64| -> Result<WeightFunction> {
        match &m.kind {
            MatrixKind::Explicit(list) => {
                // Integer indices beyond the list are replaced by the largest member.
                let w = list.iter().rev().find(|(x, _)| *x <= l).or(list.first()).expect("nonempty list");
                Ok(w.1.clone())
            }
            _ => m.member(l),
        }
    };
    if is_bounded_family(m, &grid)? {
        let f = if p.is_infinite() {
            SampledFunction::new(grid, vec![1.0; ts.len()], dim)?
        } else {
            SampledFunction::from_fn(grid, dim, |t| (-t * t).exp())?
        };
        let norms = norms_for(&f, m, p, tested)?;
        let all_finite = norms.iter().all(|(_, n)| n.is_finite());
        let note = "bounded matrix: the weighted space is the unweighted one".to_string();
        return Ok((f, MembershipReport { n0: 0, a: vec![], b: vec![], norms, all_finite, note }));
    }
    let n_max = ts.last().copied().unwrap_or(0.0).floor() as usize + 1;
    let n0 = (1..=64usize)
        .find(|&n| member(n as f64).and_then(|w| w.evaluate(n as f64)).map(|v| v > 1.0).unwrap_or(false))
        .ok_or(Error::WitnessConstructionFailed(64))?;
    let w0 = member(n0 as f64)?;
    let d = dim as f64;
    let mut a = vec![1.0; n_max + 1];
    let mut b = vec![1.0; n_max + 1];
    for n in n0..=n_max {
        let base = w0.evaluate(n as f64)?;
        let wn = member(n as f64)?;
        let (lo, hi) = (wn.evaluate(n as f64)?, wn.evaluate(n as f64 + 1.0)?);
        if base <= 1.0 || lo <= 1.0 {
            return Err(Error::WitnessConstructionFailed(n));
        }
        a[n] = (((2.0 * (d + 1.0)) * (2.0 + n as f64).ln()).ln() / base.ln()).max(1.0);
        b[n] = ((a[n] * hi.ln() + std::f64::consts::LN_2) / lo.ln()).max(1.0);
    }
    let members = (0..=n_max).map(|n| member(n as f64 + 1.0)).collect::<Result<Vec<_>>>()?;
    let vals = ts
        .iter()
        .map(|&t| {
            let n = (t.floor() as usize).min(n_max);
            let s = members[n].evaluate(t)?;
            let e = match p {
                Exponent::Infinity => -s * s,
                Exponent::Finite(pv) => -s.powf(a[n] * b[n]) / pv,
            };
            Ok(e)
        })
        .collect::<Result<Vec<_>>>()?;
    let f = SampledFunction::from_logs(grid, vals, dim)?;
    let norms = norms_for(&f, m, p, tested)?;
    let all_finite = norms.iter().all(|(_, n)| n.is_finite());
    let note = format!("unbounded matrix, exponents switch on at n0 = {n0}");
    Ok((f, MembershipReport { n0, a, b, norms, all_finite, note }))
}

fn is_bounded_family(m: &WeightMatrix, grid: &GridSpec) -> Result<bool> {
    let g = GridSpec::logarithmic(1.0, grid.t_max().max(1e6), 601)?;
    let v = relations::matrix_condition(m, MatrixCondition::BoundedBeur, &relations::default_ell_grid(), &g)?;
    Ok(v.verdict.is_holds())
}

fn norms_for(f: &SampledFunction, m: &WeightMatrix, p: Exponent, tested: &[f64]) -> Result<Vec<(f64, NormResult)>> {
    tested
        .par_iter()
        .map(|&l| Ok((l, weighted_norm(f, &m.member(l)?, p)?)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub n: usize,
    pub center: f64,
    pub radius: f64,
    pub height: f64,
    /// Measure of the shell `{x ∈ R^d : |x| ∈ I_n}`.
    pub measure: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaircaseReport {
    pub blocks: Vec<Block>,
    /// Index form used for the violation: `ω^{l0 + 1/n}` (`l0 = 0` is `ω^{1/n}`).
    pub l0: f64,
    /// `∫ |g|^p`, equal to `Σ 2^{-n}` over the built blocks.
    pub lp_mass: f64,
    /// Per tested index: log of each block's weighted contribution.
    pub log_terms: Vec<(f64, Vec<f64>)>,
    pub divergent: Vec<(f64, bool)>,
}

/// Builds the block function `g = (2^n J_n)^{-1/p}` on disjoint shells where
/// `ω^{l0 + 1/n} ≥ n²`, so `g ∈ L^p` while every weighted norm diverges.
pub fn staircase_witness(
    m: &WeightMatrix,
    p: Exponent,
    n_blocks: usize,
    dim: u32,
    tested: &[f64],
) -> Result<(SampledFunction, StaircaseReport)> {
    if matches!(m.kind, MatrixKind::Explicit(_)) {
        return Err(Error::InvalidArgument("staircase needs a matrix defined for every index".into()));
    }
    if !m.flags.continuous {
        return Err(Error::InvalidArgument("staircase needs a continuous matrix".into()));
    }
    if n_blocks == 0 {
        return Err(Error::EmptyInput);
    }
    let mut centers = find_centers(m, n_blocks, 0.0)?;
    let mut l0 = 0.0;
    if centers.is_none() {
        for l in relations::default_ell_grid() {
            if !grows(&m.member(l)?)? {
                continue;
            }
            if let Some(c) = find_centers(m, n_blocks, l)? {
                centers = Some(c);
                l0 = l;
                break;
            }
        }
    }
    let centers = centers.ok_or(Error::NoViolationFound)?;
    let pv = match p {
        Exponent::Finite(p) => p,
        Exponent::Infinity => return Err(Error::InvalidArgument("the staircase is an L^p witness, p < inf".into())),
    };
    let d = dim as f64;
    let cd = sphere_factor(dim);
    let blocks: Vec<Block> = centers
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let n = i + 1;
            let (a, b) = (x - 1.0, x + 1.0);
            let measure = cd * (b.powf(d) - a.max(0.0).powf(d)) / d;
            let height = (2f64.powi(n as i32) * measure).powf(-1.0 / pv);
            Block { n, center: x, radius: 1.0, height, measure }
        })
        .collect();
    let lp_mass: f64 = blocks.iter().map(|bl| bl.height.powf(pv) * bl.measure).sum();
    let log_terms = tested
        .par_iter()
        .map(|&l| {
            let w = m.member(l)?;
            let terms = blocks
                .iter()
                .map(|bl| {
                    let (a, b) = (bl.center - bl.radius, bl.center + bl.radius);
                    let mx = (0..BLOCK_SAMPLES)
                        .map(|k| w.evaluate(a + (b - a) * k as f64 / (BLOCK_SAMPLES - 1) as f64))
                        .collect::<Result<Vec<_>>>()?
                        .into_iter()
                        .fold(f64::NEG_INFINITY, f64::max);
                    let r = quad::integrate(
                        |t| Ok((w.evaluate(t)? - mx).exp() * t.powf(d - 1.0)),
                        a.max(0.0),
                        b,
                        1e-13,
                        1e-10,
                        200,
                    )?;
                    Ok(pv * bl.height.ln() + cd.ln() + mx + r.value.ln())
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((l, terms))
        })
        .collect::<Result<Vec<_>>>()?;
    let divergent = log_terms
        .iter()
        .map(|(l, terms)| {
            let k = terms.len().min(10);
            let tail = &terms[terms.len() - k..];
            (*l, k >= 2 && tail.windows(2).all(|w| w[1] >= w[0]))
        })
        .collect();
    let t_max = centers.last().copied().unwrap_or(1.0) + 2.0;
    let grid = GridSpec::linear(0.0, t_max, (t_max.ceil() as usize * 8).clamp(2001, 200_001))?;
    let f = SampledFunction::from_fn(grid, dim, |t| {
        blocks.iter().find(|bl| (t - bl.center).abs() <= bl.radius).map_or(0.0, |bl| bl.height)
    })?;
    Ok((f, StaircaseReport { blocks, l0, lp_mass, log_terms, divergent }))
}

/// Sampled `ω` keeps rising over the top decades of `[1, 1e12]`.
fn grows(w: &WeightFunction) -> Result<bool> {
    let s = w.sample(&GridSpec::logarithmic(1.0, 1e12, 241)?)?;
    let ws = WindowSups::new(&s.grid, &s.phis)?;
    Ok(ws.top - ws.prev >= 0.1 * ws.prev.abs().max(1.0))
}

/// Centers `x_n` with `ω^{l0+1/n} ≥ n²` on `[x_n - 1, x_n + 1]`, spaced at least 3 apart.
fn find_centers(m: &WeightMatrix, n_blocks: usize, l0: f64) -> Result<Option<Vec<f64>>> {
    let mut out = Vec::with_capacity(n_blocks);
    let mut prev = -2.0f64;
    for n in 1..=n_blocks {
        let w = m.member(l0 + 1.0 / n as f64)?;
        let target = (n * n) as f64;
        let mut found = None;
        // Doubling search over t = 2^{k/4}, well inside double range.
        for k in 0..=3600 {
            let x = (prev + 3.0).max(2f64.powf(k as f64 / 4.0));
            let ok = (0..BLOCK_SAMPLES)
                .map(|j| w.evaluate(x - 1.0 + 2.0 * j as f64 / (BLOCK_SAMPLES - 1) as f64))
                .collect::<Result<Vec<_>>>();
            match ok {
                Ok(v) if v.iter().all(|&y| y >= target) => {
                    found = Some(x);
                    break;
                }
                Ok(_) => {}
                Err(Error::NonFinite(_)) => break,
                Err(e) => return Err(e),
            }
        }
        match found {
            Some(x) => {
                out.push(x);
                prev = x;
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationRow {
    pub x0: f64,
    pub ell: f64,
    pub n: f64,
    pub l: f64,
    pub lhs_log: f64,
    pub rhs_log: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationReport {
    pub certificate: RelationVerdict,
    pub rows: Vec<TranslationRow>,
    pub note: String,
}

/// Checks `‖T_{x0} f‖_{p,τ^ℓ}^{p} ≤ e^L e^{σ^n(x0)} ‖f‖_{p,σ^n}^{p}` (plain norms for
/// `p = ∞`) for the `(ℓ, n, L)` certified by the mixed condition between `S` and `T`.
///
/// `f` is read as an even function on the line (`d = 1`).
pub fn translation_bound_check(
    s: &WeightMatrix,
    t: &WeightMatrix,
    f: &SampledFunction,
    x0s: &[f64],
    p: Exponent,
    ell_grid: &[f64],
    cond_grid: &GridSpec,
) -> Result<TranslationReport> {
    if f.dim != 1 {
        return Err(Error::InvalidArgument("translation check runs on the line (d = 1)".into()));
    }
    require_continuous(s, p)?;
    require_continuous(t, p)?;
    let ts = f.ts()?;
    let t_max = ts.last().copied().unwrap_or(0.0);
    if let Some(x) = x0s.iter().find(|x| x.abs() > 0.5 * t_max) {
        return Err(Error::GridTooNarrow(format!("shift {x} leaves the sampled support [-{t_max}, {t_max}]")));
    }
    let cert = relations::mixed_relation(s, t, true, ell_grid, cond_grid)?;
    if !cert.verdict.is_holds() {
        return Err(Error::ValidationFailed(format!("mixed condition is {}", cert.verdict.status)));
    }
    // Two-sided nodes y = -t_k .. t_k.
    let mut ys: Vec<f64> = ts.iter().rev().map(|t| -t).collect();
    ys.extend(ts.iter().skip(usize::from(ts[0] == 0.0)).copied());
    let mut fv: Vec<f64> = f.log_values.iter().rev().copied().collect();
    fv.extend(f.log_values.iter().skip(usize::from(ts[0] == 0.0)).copied());
    let pw = match p {
        Exponent::Finite(p) => p,
        Exponent::Infinity => 1.0,
    };
    let lf: Vec<f64> = fv.iter().map(|l| pw * l).collect();
    let combine = |logs: &[f64]| -> f64 {
        if p.is_infinite() {
            logs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        } else {
            log_trapezoid(&ys, logs)
        }
    };
    let jobs: Vec<(f64, crate::relations::IndexEntry)> =
        x0s.iter().flat_map(|&x| cert.index_map.iter().map(move |e| (x, *e))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(x0, e)| {
            let (tau, sigma) = (t.member(e.given)?, s.member(e.chosen)?);
            let lhs: Vec<f64> = ys
                .iter()
                .zip(&lf)
                .map(|(&y, &l)| Ok(if l == f64::NEG_INFINITY { l } else { l + tau.evaluate((y + x0).abs())? }))
                .collect::<Result<_>>()?;
            let rhs: Vec<f64> = ys
                .iter()
                .zip(&lf)
                .map(|(&y, &l)| Ok(if l == f64::NEG_INFINITY { l } else { l + sigma.evaluate(y.abs())? }))
                .collect::<Result<_>>()?;
            let lhs_log = combine(&lhs);
            let rhs_log = e.c + sigma.evaluate(x0.abs())? + combine(&rhs);
            let slack = rhs_log - lhs_log;
            if slack < -1e-6 {
                return Err(Error::ValidationFailed(format!(
                    "translation bound fails at x0 = {x0}, l = {}, n = {}: slack {slack:e}",
                    e.given, e.chosen
                )));
            }
            Ok(TranslationRow { x0, ell: e.given, n: e.chosen, l: e.c, lhs_log, rhs_log, slack })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TranslationReport {
        certificate: cert,
        rows,
        note: "constants certified on the condition grid; uniformity in x0 beyond it is not checked".into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceType {
    Beurling,
    Roumieu,
}

impl FromStr for SpaceType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "beurling" => Ok(SpaceType::Beurling),
            "roumieu" => Ok(SpaceType::Roumieu),
            _ => Err(Error::Parse(format!("unknown space type '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryRow {
    pub function: String,
    /// `(ℓ, n)`: `T`-index and `S`-index.
    pub index_pair: (f64, f64),
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub space: SpaceType,
    pub p: Exponent,
    pub battery_version: u32,
    pub relation: RelationVerdict,
    pub hypothesis_s: Verdict,
    pub hypothesis_t: Verdict,
    /// Both mixed conditions hold; otherwise only the forward arm ran.
    pub hypothesis_verified: bool,
    pub forward: Vec<BatteryRow>,
    pub forward_ok: Option<bool>,
    /// Fixed index of the converse arm: the `S`-index of the θ-function
    /// (Roumieu) or the `T`-index of the weight (Beurling).
    pub converse_index: Option<f64>,
    /// Norms keyed by the varying index (`T`-index for Roumieu, `S`-index for Beurling).
    pub converse: Vec<(f64, NormResult)>,
    pub converse_ok: Option<bool>,
    pub notes: Vec<String>,
}

/// Grids used by [`inclusion_experiment`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentGrids {
    /// Grid for the relation and hypothesis checks (needs 3 decades).
    pub relation: GridSpec,
    /// Radial grid on `[0, T]` for the battery functions.
    pub function: GridSpec,
}

impl Default for ExperimentGrids {
    fn default() -> Self {
        Self {
            relation: GridSpec::logarithmic(1e-3, 1e8, 2201).expect("valid default grid"),
            function: GridSpec::linear(0.0, 1e4, 40_001).expect("valid default grid"),
        }
    }
}

/// Numerical evidence for the inclusion `L^p_[S] ⊆ L^p_[T]`.
///
/// Forward arm: when `S [⪯] T` holds, every battery function satisfies
/// `‖f‖_{p,τ^ℓ} ≤ e^{C/p} ‖f‖_{p,σ^n}` for each certified `(ℓ, n, C)`.
/// Converse arm: when the relation fails, `θ^p_{σ^n}` has divergent
/// `T`-norms for every tested index.
pub fn inclusion_experiment(
    s: &WeightMatrix,
    t: &WeightMatrix,
    p: Exponent,
    space: SpaceType,
    ell_grid: &[f64],
    grids: &ExperimentGrids,
) -> Result<ExperimentReport> {
    require_continuous(s, p)?;
    require_continuous(t, p)?;
    let beur = space == SpaceType::Beurling;
    let rel = if beur { MatrixRelation::Beurling } else { MatrixRelation::Roumieu };
    let relation = relations::matrix_relation(s, t, rel, ell_grid, &grids.relation)?;
    let cond = if beur { MatrixCondition::MixedOm1Beur } else { MatrixCondition::MixedOm1Roum };
    let hypothesis_s = relations::matrix_condition(s, cond, ell_grid, &grids.relation)?.verdict;
    let hypothesis_t = relations::matrix_condition(t, cond, ell_grid, &grids.relation)?.verdict;
    let hypothesis_verified = hypothesis_s.is_holds() && hypothesis_t.is_holds();
    let mut notes = Vec::new();
    if !hypothesis_verified {
        notes.push("mixed condition not verified for both matrices; converse arm skipped".to_string());
    }

    let battery = build_battery(s, p, grids.function, &mut notes)?;
    let (forward, forward_ok) = if relation.verdict.is_holds() {
        let pairs: Vec<(f64, f64, f64)> = relation
            .index_map
            .iter()
            .map(|e| if beur { (e.given, e.chosen, e.c) } else { (e.chosen, e.given, e.c) })
            .collect();
        let jobs: Vec<(&(String, SampledFunction), (f64, f64, f64))> =
            battery.iter().flat_map(|b| pairs.iter().map(move |pr| (b, *pr))).collect();
        let rows = jobs
            .par_iter()
            .map(|((name, f), (ell, n, c))| {
                let lhs = weighted_norm(f, &t.member(*ell)?, p)?.log_value;
                let scale = if p.is_infinite() { 1.0 } else { p.recip() };
                let rhs = c * scale
                    + weighted_norm(f, &s.member(*n)?, p)?.log_value;
                let slack = rhs - lhs;
                let ok = lhs == f64::NEG_INFINITY || slack >= -NORM_TOL * rhs.abs().max(1.0);
                Ok(BatteryRow { function: name.clone(), index_pair: (*ell, *n), lhs, rhs, slack, ok })
            })
            .collect::<Result<Vec<_>>>()?;
        let ok = rows.iter().all(|r| r.ok);
        (rows, Some(ok))
    } else {
        (Vec::new(), None)
    };

    let (converse_index, converse, converse_ok) = if relation.verdict.is_fails() && hypothesis_verified {
        let (fixed, norms) = match space {
            // No T-index absorbs the fixed θ^p_{σ^n}.
            SpaceType::Roumieu => {
                let n = relation.verdict.wit("binding_index").unwrap_or(1.0);
                let n = if matches!(s.kind, MatrixKind::Explicit(_)) { s.quantifier_grid(ell_grid)[0] } else { n };
                let theta = theta_function(&s.member(n)?, p, grids.function, 1)?;
                (n, norms_for(&theta, t, p, &t.quantifier_grid(ell_grid))?)
            }
            // Failure at some ℓ persists at every larger ℓ, so the top T-index
            // is a valid witness index; no θ^p_{σ^n} has finite τ^ℓ-norm there.
            SpaceType::Beurling => {
                let l_star = *t.quantifier_grid(ell_grid).last().ok_or(Error::EmptyInput)?;
                let tau = t.member(l_star)?;
                let norms = s
                    .quantifier_grid(ell_grid)
                    .par_iter()
                    .map(|&n| {
                        let theta = theta_function(&s.member(n)?, p, grids.function, 1)?;
                        Ok((n, weighted_norm(&theta, &tau, p)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                (l_star, norms)
            }
        };
        let ok = norms.iter().all(|(_, r)| r.is_divergent());
        (Some(fixed), norms, Some(ok))
    } else {
        (None, Vec::new(), None)
    };

    Ok(ExperimentReport {
        space,
        p,
        battery_version: BATTERY_VERSION,
        relation,
        hypothesis_s,
        hypothesis_t,
        hypothesis_verified,
        forward,
        forward_ok,
        converse_index,
        converse,
        converse_ok,
        notes,
    })
}

fn build_battery(
    s: &WeightMatrix,
    p: Exponent,
    grid: GridSpec,
    notes: &mut Vec<String>,
) -> Result<Vec<(String, SampledFunction)>> {
    let mut out = Vec::new();
    let indices: Vec<f64> = match &s.kind {
        MatrixKind::Explicit(list) => list.iter().take(3).map(|(l, _)| *l).collect(),
        _ => THETA_INDICES.to_vec(),
    };
    for l in indices {
        out.push((format!("theta[{l}]"), theta_function(&s.member(l)?, p, grid, 1)?));
    }
    if s.flags.nondecreasing && s.flags.radial {
        match nontriviality_witness(s, p, grid, 1, &[]) {
            Ok((f, _)) => out.push(("psi".to_string(), f)),
            Err(e) => notes.push(format!("psi witness skipped: {e}")),
        }
    }
    out.push(("gaussian".to_string(), SampledFunction::from_fn(grid, 1, |t| (-t * t).exp())?));
    out.push(("plateau".to_string(), SampledFunction::from_fn(grid, 1, |t| (2.0 - t).clamp(0.0, 1.0))?));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt_matrix() -> WeightMatrix {
        WeightMatrix::exponential(WeightFunction::power(0.5).unwrap())
    }

    #[test]
    fn sphere_factors() {
        assert!((sphere_factor(1) - 2.0).abs() < 1e-14);
        assert!((sphere_factor(2) - 2.0 * PI).abs() < 1e-13);
        assert!((sphere_factor(3) - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn indicator_norm_in_one_dimension() {
        let g = radial_grid(100.0, 100_001).unwrap();
        let f = SampledFunction::from_fn(g, 1, |t| if t <= 1.0 { 1.0 } else { 0.0 }).unwrap();
        let zero = WeightFunction::profile(&[(0.0, 0.0), (1.0, 0.0)]).unwrap();
        let r = weighted_norm(&f, &zero, Exponent::Finite(1.0)).unwrap();
        assert!(r.is_finite());
        assert!((r.horizon_value() - 2.0).abs() < 1e-3, "{r:?}");
    }

    #[test]
    fn theta_examples() {
        let g = radial_grid(10.0, 1001).unwrap();
        let p1 = WeightFunction::power(1.0).unwrap();
        let th = theta_function(&p1, Exponent::Finite(1.0), g, 1).unwrap();
        assert!((th.values[100] - (-1.0f64).exp()).abs() < 1e-15);
        let th2 = theta_function(&p1, Exponent::Finite(2.0), g, 1).unwrap();
        assert!((th2.values[200] - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn theta_membership_examples() {
        let m = sqrt_matrix();
        let g = radial_grid(1e4, 100_001).unwrap();
        let v = theta_membership(&m, Exponent::Infinity, 1.0, 1.0, g).unwrap();
        assert!(v.is_holds());
        assert!((v.cert("norm").unwrap() - 1.0).abs() < 1e-15);
        let v = theta_membership(&m, Exponent::Finite(1.0), 1.0, 0.25, g).unwrap();
        assert!(v.is_holds());
        // 2 * 2 / (3/4)^2
        // Trapezoid on a linear grid; the sqrt kink at 0 limits accuracy.
        assert!((v.cert("norm").unwrap() - 64.0 / 9.0).abs() < 2e-2, "{v:?}");
        assert!(theta_membership(&m, Exponent::Infinity, 1.0, 2.0, g).unwrap().is_fails());
    }

    #[test]
    fn witnesses_for_sqrt_matrix() {
        let m = sqrt_matrix();
        let g = radial_grid(200.0, 20_001).unwrap();
        let (_, rep) = nontriviality_witness(&m, Exponent::Infinity, g, 1, &[1.0, 2.0, 4.0]).unwrap();
        assert!(rep.all_finite, "{rep:?}");
        let (_, rep) = nontriviality_witness(&m, Exponent::Finite(2.0), g, 1, &[1.0, 2.0, 4.0]).unwrap();
        assert!(rep.all_finite, "{rep:?}");
        let (_, st) = staircase_witness(&m, Exponent::Finite(1.0), 8, 1, &[0.25, 1.0]).unwrap();
        assert!((st.lp_mass - (1.0 - 2f64.powi(-8))).abs() < 1e-10);
        assert!(st.divergent.iter().all(|(_, d)| *d));
    }

    #[test]
    fn bounded_matrix_has_no_staircase() {
        let b = WeightFunction::profile(&[(0.0, 0.0), (1.0, 1.0), (2.0, 1.0)]).unwrap();
        let m = WeightMatrix::exponential(b);
        assert!(matches!(staircase_witness(&m, Exponent::Finite(1.0), 4, 1, &[1.0]), Err(Error::NoViolationFound)));
    }

    #[test]
    fn inclusion_forward_and_converse() {
        let grids = ExperimentGrids::default();
        let ells = relations::default_ell_grid();
        let s = WeightMatrix::exponential(WeightFunction::power(1.0).unwrap());
        let t = sqrt_matrix();
        let r = inclusion_experiment(&s, &t, Exponent::Infinity, SpaceType::Roumieu, &ells, &grids).unwrap();
        assert!(r.relation.verdict.is_holds());
        assert_eq!(r.forward_ok, Some(true));
        let r = inclusion_experiment(&t, &s, Exponent::Infinity, SpaceType::Roumieu, &ells, &grids).unwrap();
        assert!(r.relation.verdict.is_fails());
        assert_eq!(r.converse_ok, Some(true), "{:?}", r.converse);
    }
}

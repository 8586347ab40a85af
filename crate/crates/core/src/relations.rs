//! Growth relations between weights (`≤`, `⪯`, `∼`, `◁` and their dilation
//! variants) and between weight matrices.
//!
//! Relation `rel(σ, τ)` always bounds `τ` by `σ`: `σ ⪯ τ` means
//! `τ ≤ Cσ + C`. All decisions use the same two sampled quantities, the
//! difference `lhs - rhs` and the ratio `lhs / (rhs + 1)`, judged over the
//! two top decade windows of the grid.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditions::{self, ChainLink, ConditionId, ConsistencyReport};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, WindowSups};
use crate::verdict::{constants, Constants, Status, Verdict};
use crate::weight::WeightFunction;

/// Relative growth per decade window that counts as divergence.
pub const FAIL_GROWTH: f64 = 0.1;
/// Largest constant on the geometric C-grid, as a power of two.
pub const C_MAX_LOG2: i32 = 40;
pub const TRIANGLE_EPS: [f64; 4] = [1.0, 0.5, 0.1, 0.01];
/// Exponent used for `∃a > 1` in the strong different-growth condition.
pub const STRONG_GROWTH_A: f64 = 2.0;
const SEARCH_LOG2: i32 = 12;
const LADDER_STEPS: i32 = 10;
const SCAN_POINTS: usize = 512;

/// `{2^k : k = -6..6}`.
pub fn default_ell_grid() -> Vec<f64> {
    (-6..=6).map(|k| 2f64.powi(k)).collect()
}

fn extended_grid(base: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = (-SEARCH_LOG2..=SEARCH_LOG2).map(|k| 2f64.powi(k)).chain(base.iter().copied()).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn c_grid(x: f64) -> Option<f64> {
    (0..=C_MAX_LOG2).map(|k| 2f64.powi(k)).find(|&c| c >= x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Preceq,
    Sim,
    Triangle,
    PreceqC,
    SimC,
    TriangleC,
}

impl Relation {
    pub const ALL: [Relation; 7] = [
        Relation::Le,
        Relation::Preceq,
        Relation::Sim,
        Relation::Triangle,
        Relation::PreceqC,
        Relation::SimC,
        Relation::TriangleC,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::Le => "le",
            Relation::Preceq => "preceq",
            Relation::Sim => "sim",
            Relation::Triangle => "triangle",
            Relation::PreceqC => "preceq_c",
            Relation::SimC => "sim_c",
            Relation::TriangleC => "triangle_c",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Relation::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown relation '{s}'")))
    }
}

/// One recorded quantifier choice: for the given index, the chosen index and constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub given: f64,
    pub chosen: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationVerdict {
    pub relation: String,
    pub verdict: Verdict,
    /// Matrix relations only: `ℓ ↦ n` (or `n ↦ ℓ`) with the constant per pair.
    pub index_map: Vec<IndexEntry>,
    /// Status of the single-weight relation the matrix relation reduces to, if any.
    pub reduction: Option<Status>,
}

impl RelationVerdict {
    fn scalar(rel: &str, verdict: Verdict) -> Self {
        Self { relation: rel.into(), verdict, index_map: Vec::new(), reduction: None }
    }

    pub fn status(&self) -> Status {
        self.verdict.status
    }
}

/// Outcome of testing `lhs ≤ rhs + C` on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
struct PairCheck {
    pass: bool,
    growing: bool,
    c: f64,
    sup: f64,
    u: f64,
    growth: f64,
    /// Sup of `lhs / rhs` over the top window.
    ratio_top: f64,
}

impl PairCheck {
    /// Divergence an exhausted search may report as Fails: the ratio grows, or
    /// it stays clearly above 1 while the difference grows.
    fn diverges(&self) -> bool {
        self.growing && (self.growth >= 1.0 + FAIL_GROWTH || self.ratio_top >= 1.0 + FAIL_GROWTH)
    }
}

fn ratio_growing(w: &WindowSups) -> bool {
    w.top > 0.0 && w.top >= (1.0 + FAIL_GROWTH) * w.prev
}

fn diff_growing(w: &WindowSups) -> bool {
    w.top > 0.0 && w.top - w.prev >= FAIL_GROWTH * w.prev.abs().max(1.0)
}

/// Judges a difference and a ratio sequence sampled on `grid`.
///
/// Passes when the ratio vanishes (`lhs = o(rhs)`), or when both stay bounded;
/// diverges when the ratio grows, or the difference grows without the ratio
/// vanishing.
fn judge(grid: &GridSpec, us: &[f64], d: &[f64], r: &[f64]) -> Result<PairCheck> {
    let wd = WindowSups::new(grid, d)?;
    let wr = WindowSups::new(grid, r)?;
    let (mut sup, mut arg) = (f64::NEG_INFINITY, 0);
    for (i, &x) in d.iter().enumerate() {
        if x > sup {
            sup = x;
            arg = i;
        }
    }
    let c = c_grid(sup.max(1.0));
    let pass = c.is_some() && (wr.ratio_vanishing() || (wd.difference_bounded() && (wr.ratio_bounded() || (wr.top <= 1.0 && !ratio_growing(&wr)))));
    let growing = !pass && (ratio_growing(&wr) || (diff_growing(&wd) && !wr.ratio_vanishing()) || c.is_none());
    let u = if growing { us[wd.top_arg.max(wr.top_arg).min(us.len() - 1)] } else { us[arg] };
    Ok(PairCheck { pass, growing, c: c.unwrap_or(f64::INFINITY), sup, u, growth: wr.growth(), ratio_top: wr.top })
}

/// `lhs ≤ rhs + C` for two sample vectors on a common grid prefix.
fn pair_check(grid: &GridSpec, lhs: &[f64], rhs: &[f64]) -> Result<PairCheck> {
    let n = lhs.len().min(rhs.len());
    let g = grid.truncated(n)?;
    let us = g.u_points();
    let d: Vec<f64> = (0..n).map(|i| lhs[i] - rhs[i]).collect();
    // The plain ratio: any shift of `rhs` makes a constant ratio look like it
    // is still growing while `rhs` is small.
    let r: Vec<f64> = (0..n)
        .map(|i| {
            if rhs[i] > 0.0 {
                lhs[i] / rhs[i]
            } else if lhs[i] > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .collect();
    judge(&g, &us, &d, &r)
}

fn check_grid(grid: &GridSpec) -> Result<()> {
    if grid.decades() < 3.0 {
        return Err(Error::GridTooNarrow(format!("{:.2} decades, relations need 3", grid.decades())));
    }
    Ok(())
}

fn pair_verdict(pc: &PairCheck, cert: Constants, note: &str) -> Verdict {
    if pc.pass {
        Verdict::holds(cert).with_note(note)
    } else if pc.growing {
        Verdict::fails(constants(&[("u", pc.u), ("growth", pc.growth), ("sup", pc.sup)])).with_note(note)
    } else {
        Verdict::inconclusive(pc.growth - 1.0).with_note(note)
    }
}

/// Decides `rel(σ, τ)` on `grid`.
pub fn compare(sigma: &WeightFunction, tau: &WeightFunction, rel: Relation, grid: &GridSpec) -> Result<RelationVerdict> {
    check_grid(grid)?;
    let us = grid.u_points();
    let v = match rel {
        Relation::Le => le(sigma, tau, grid, &us)?,
        Relation::Preceq => preceq(sigma, tau, grid, &us)?,
        Relation::Triangle => triangle(sigma, tau, grid, &us, false)?,
        Relation::TriangleC => triangle(sigma, tau, grid, &us, true)?,
        Relation::PreceqC => preceq_c(sigma, tau, grid, &us)?,
        Relation::Sim | Relation::SimC => {
            let base = if rel == Relation::Sim { Relation::Preceq } else { Relation::PreceqC };
            let fwd = compare(sigma, tau, base, grid)?.verdict;
            let bwd = compare(tau, sigma, base, grid)?.verdict;
            conjunction(&[("fwd", fwd), ("bwd", bwd)])
        }
    };
    let v = if v.horizon.is_none() { v.with_horizon(*grid) } else { v };
    Ok(RelationVerdict::scalar(rel.name(), v))
}

fn prefixed(prefix: &str, c: &Option<Constants>) -> Constants {
    c.iter().flatten().map(|(k, v)| (format!("{prefix}.{k}"), *v)).collect()
}

fn conjunction(parts: &[(&str, Verdict)]) -> Verdict {
    let status = parts.iter().fold(Status::Holds, |s, (_, v)| s.and(v.status));
    match status {
        Status::Holds => Verdict::holds(parts.iter().flat_map(|(p, v)| prefixed(p, &v.certificate)).collect()),
        Status::Fails => {
            let (p, v) = parts.iter().find(|(_, v)| v.is_fails()).expect("a failing part");
            Verdict::fails(prefixed(p, &v.witness))
        }
        Status::Inconclusive => {
            let m = parts.iter().filter_map(|(_, v)| v.margin).fold(0.0, f64::max);
            Verdict::inconclusive(m)
        }
    }
}

fn le(sigma: &WeightFunction, tau: &WeightFunction, grid: &GridSpec, us: &[f64]) -> Result<Verdict> {
    let s = sigma.phi_prefix(us, 0.0)?;
    let t = tau.phi_prefix(us, 0.0)?;
    let n = s.len().min(t.len());
    for i in 0..n {
        if t[i] > s[i] * (1.0 + 1e-12) + 1e-12 {
            return Ok(Verdict::fails(constants(&[("u", us[i]), ("sigma", s[i]), ("tau", t[i])])));
        }
    }
    Ok(Verdict::holds(constants(&[("points", n as f64)])).with_horizon(grid.truncated(n)?))
}

fn preceq(sigma: &WeightFunction, tau: &WeightFunction, grid: &GridSpec, us: &[f64]) -> Result<Verdict> {
    let s = sigma.phi_prefix(us, 0.0)?;
    let t = tau.phi_prefix(us, 0.0)?;
    let n = s.len().min(t.len());
    let g = grid.truncated(n)?;
    let r: Vec<f64> = (0..n).map(|i| t[i] / (s[i] + 1.0)).collect();
    let w = WindowSups::new(&g, &r)?;
    let sup = r.iter().copied().fold(0.0, f64::max);
    let c = c_grid(sup.max(1.0));
    let v = match c {
        Some(c) if w.ratio_bounded() => {
            debug_assert!((0..n).all(|i| t[i] <= c * s[i] + c));
            Verdict::holds(constants(&[("C", c), ("sup_ratio", sup)]))
        }
        _ if ratio_growing(&w) || c.is_none() => {
            Verdict::fails(constants(&[("u", us[w.top_arg]), ("ratio", w.top), ("growth", w.growth())]))
        }
        _ => Verdict::inconclusive(w.growth() - 1.0),
    };
    Ok(v.with_horizon(g).with_note("tau <= C sigma + C over the geometric C-grid"))
}

fn triangle(sigma: &WeightFunction, tau: &WeightFunction, grid: &GridSpec, us: &[f64], dilation: bool) -> Result<Verdict> {
    let t = tau.phi_prefix(us, 0.0)?;
    let mut parts = Vec::new();
    for eps in TRIANGLE_EPS {
        let rhs = if dilation {
            sigma.phi_prefix(us, eps.ln())?
        } else {
            sigma.phi_prefix(us, 0.0)?.into_iter().map(|x| eps * x).collect()
        };
        let pc = pair_check(grid, &t, &rhs)?;
        let key = format!("eps={eps}");
        parts.push((key, pair_verdict(&pc, constants(&[("C", pc.c)]), "")));
    }
    let refs: Vec<(&str, Verdict)> = parts.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
    let note = if dilation { "tau(t) <= sigma(eps t) + C_eps" } else { "tau <= eps sigma + C_eps" };
    Ok(conjunction(&refs).with_note(note))
}

fn preceq_c(sigma: &WeightFunction, tau: &WeightFunction, grid: &GridSpec, us: &[f64]) -> Result<Verdict> {
    let t = tau.phi_prefix(us, 0.0)?;
    let mut last = None;
    for k in 0..=C_MAX_LOG2 {
        let c = 2f64.powi(k);
        let s = sigma.phi_prefix(us, c.ln())?;
        let pc = pair_check(grid, &t, &s)?;
        if pc.pass && pc.sup <= c {
            return Ok(Verdict::holds(constants(&[("C", c), ("sup", pc.sup)]))
                .with_note("tau(t) <= sigma(Ct) + C with C1 = C2 = C"));
        }
        last = Some(pc);
    }
    let pc = last.expect("C-grid is nonempty");
    // Only a growing ratio is conclusive here; a growing difference may still
    // be absorbed by a larger dilation.
    let v = if pc.growing && pc.growth >= 1.0 + FAIL_GROWTH {
        Verdict::fails(constants(&[("u", pc.u), ("growth", pc.growth), ("C", 2f64.powi(C_MAX_LOG2))]))
    } else {
        Verdict::inconclusive(pc.growth - 1.0)
    };
    Ok(v.with_note("no C <= 2^40 certifies tau(t) <= sigma(Ct) + C"))
}

fn or_status(a: Status, b: Status) -> Status {
    match (a, b) {
        (Status::Holds, _) | (_, Status::Holds) => Status::Holds,
        (Status::Fails, Status::Fails) => Status::Fails,
        _ => Status::Inconclusive,
    }
}

/// Checks the four ω₁/ω₆ bridges between `⪯`, `⪯_c`, `◁` and `◁_c`.
pub fn bridge_check(sigma: &WeightFunction, tau: &WeightFunction, grid: &GridSpec) -> Result<ConsistencyReport> {
    if !sigma.is_nondecreasing() || !tau.is_nondecreasing() {
        return Err(Error::NonMonotoneInput("bridge check".into()));
    }
    let mut verdicts = BTreeMap::new();
    for (name, w) in [("sigma", sigma), ("tau", tau)] {
        for c in [ConditionId::Om1, ConditionId::Om6] {
            verdicts.insert(format!("{name}.{}", c.name()), conditions::check_condition(w, c, grid)?);
        }
    }
    for rel in [Relation::Preceq, Relation::PreceqC, Relation::Triangle, Relation::TriangleC] {
        verdicts.insert(rel.name().to_string(), compare(sigma, tau, rel, grid)?.verdict);
    }
    let st = |k: &str| verdicts[k].status;
    let om1 = or_status(st("sigma.om1"), st("tau.om1"));
    let om6 = or_status(st("sigma.om6"), st("tau.om6"));
    let bridges = [
        ("om6", om6, "preceq", "preceq_c"),
        ("om1", om1, "preceq_c", "preceq"),
        ("om1", om1, "triangle", "triangle_c"),
        ("om6", om6, "triangle_c", "triangle"),
    ];
    let mut links = Vec::new();
    for (cond, cs, p, c) in bridges {
        let premise_status = cs.and(st(p));
        let conclusion_status = st(c);
        if premise_status == Status::Holds && conclusion_status == Status::Fails {
            return Err(Error::BridgeViolation(format!("{cond} and {p} hold but {c} fails")));
        }
        links.push(ChainLink {
            premise: format!("{cond} & {p}"),
            conclusion: c.into(),
            premise_status,
            conclusion_status,
            tested: premise_status != Status::Inconclusive && conclusion_status != Status::Inconclusive,
        });
    }
    Ok(ConsistencyReport { verdicts, links, consistent: true })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "weight", rename_all = "snake_case")]
pub enum MatrixKind {
    /// `ω^ℓ = ℓω`.
    Exponential(WeightFunction),
    /// `ω^ℓ(t) = ω(ℓt)`.
    Dilatation(WeightFunction),
    /// Finitely many members with strictly increasing indices.
    Explicit(Vec<(f64, WeightFunction)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFlags {
    pub continuous: bool,
    pub nondecreasing: bool,
    pub radial: bool,
    pub unbounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightMatrix {
    pub kind: MatrixKind,
    pub flags: MatrixFlags,
}

impl WeightMatrix {
    pub fn exponential(w: WeightFunction) -> Self {
        let flags = MatrixFlags { continuous: true, nondecreasing: w.is_nondecreasing(), radial: true, unbounded: false };
        Self { kind: MatrixKind::Exponential(w), flags }
    }

    pub fn dilatation(w: WeightFunction) -> Result<Self> {
        if !w.is_nondecreasing() {
            return Err(Error::NotMonotone);
        }
        let flags = MatrixFlags { continuous: true, nondecreasing: true, radial: true, unbounded: false };
        Ok(Self { kind: MatrixKind::Dilatation(w), flags })
    }

    pub fn explicit(members: Vec<(f64, WeightFunction)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyInput);
        }
        if members.iter().any(|(l, _)| !(*l > 0.0 && l.is_finite())) || members.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidArgument("matrix indices must be positive and strictly increasing".into()));
        }
        let nondecreasing = members.iter().all(|(_, w)| w.is_nondecreasing());
        let flags = MatrixFlags { continuous: true, nondecreasing, radial: true, unbounded: false };
        Ok(Self { kind: MatrixKind::Explicit(members), flags })
    }

    pub fn with_flags(mut self, flags: MatrixFlags) -> Self {
        self.flags = flags;
        self
    }

    /// The member `ω^ℓ`.
    pub fn member(&self, ell: f64) -> Result<WeightFunction> {
        match &self.kind {
            MatrixKind::Exponential(w) => WeightFunction::scaled(ell, w.clone()),
            MatrixKind::Dilatation(w) => WeightFunction::dilated(ell, w.clone()),
            MatrixKind::Explicit(m) => {
                m.iter().find(|(l, _)| *l == ell).map(|(_, w)| w.clone()).ok_or(Error::UnknownIndex(ell))
            }
        }
    }

    /// Indices a universal quantifier runs over.
    pub fn quantifier_grid(&self, ell_grid: &[f64]) -> Vec<f64> {
        match &self.kind {
            MatrixKind::Explicit(m) => m.iter().map(|(l, _)| *l).collect(),
            _ => ell_grid.to_vec(),
        }
    }

    /// Indices an existential search runs over.
    pub fn search_grid(&self, ell_grid: &[f64]) -> Vec<f64> {
        match &self.kind {
            MatrixKind::Explicit(m) => m.iter().map(|(l, _)| *l).collect(),
            _ => extended_grid(ell_grid),
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            MatrixKind::Exponential(w) => format!("exp-type[{}]", w.label()),
            MatrixKind::Dilatation(w) => format!("dil-type[{}]", w.label()),
            MatrixKind::Explicit(m) => format!("explicit[{} members]", m.len()),
        }
    }

    fn samples(&self, ell: f64, us: &[f64], shift: f64) -> Result<Vec<f64>> {
        self.member(ell)?.phi_prefix(us, shift)
    }

    /// Re-checks `ω^{ℓ₁} ≤ ω^{ℓ₂}` for consecutive indices on every grid point.
    pub fn verify_order(&self, ells: &[f64], grid: &GridSpec) -> Result<()> {
        let us = grid.u_points();
        let mut ells = ells.to_vec();
        ells.sort_by(f64::total_cmp);
        ells.dedup();
        let vals = ells.par_iter().map(|&l| self.samples(l, &us, 0.0)).collect::<Result<Vec<_>>>()?;
        for k in 1..ells.len() {
            let (a, b) = (&vals[k - 1], &vals[k]);
            for i in 0..a.len().min(b.len()) {
                if a[i] > b[i] * (1.0 + 1e-12) + 1e-12 {
                    return Err(Error::MatrixOrderViolated { lo: ells[k - 1], hi: ells[k], u: us[i] });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixRelation {
    /// `∀ℓ ∃n ∃C: τ^ℓ ≤ σ^n + C`.
    Beurling,
    /// `∀n ∃ℓ ∃C: τ^ℓ ≤ σ^n + C`.
    Roumieu,
    /// `∀ℓ ∀ℓ' ∃D: τ^ℓ ≤ σ^{ℓ'} + D`.
    Triangle,
}

impl MatrixRelation {
    pub fn name(self) -> &'static str {
        match self {
            MatrixRelation::Beurling => "beurling",
            MatrixRelation::Roumieu => "roumieu",
            MatrixRelation::Triangle => "triangle",
        }
    }
}

impl FromStr for MatrixRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "beurling" => Ok(MatrixRelation::Beurling),
            "roumieu" => Ok(MatrixRelation::Roumieu),
            "triangle" => Ok(MatrixRelation::Triangle),
            _ => Err(Error::Parse(format!("unknown matrix relation '{s}'"))),
        }
    }
}

/// Result of `∀ given ∃ chosen` over a candidate list.
struct Search {
    map: Vec<IndexEntry>,
    status: Status,
    binding: Option<(f64, PairCheck)>,
}

/// For each `given`, tries `candidates` in order and keeps the first pair that passes.
fn search<F>(given: &[f64], candidates: &(dyn Fn(f64) -> Vec<f64> + Sync), check: F) -> Result<Search>
where
    F: Fn(f64, f64) -> Result<PairCheck> + Sync,
{
    let rows: Vec<(f64, Option<IndexEntry>, Option<PairCheck>)> = given
        .par_iter()
        .map(|&g| {
            let mut last = None;
            for c in candidates(g) {
                let pc = check(g, c)?;
                if pc.pass {
                    return Ok((g, Some(IndexEntry { given: g, chosen: c, c: pc.c }), None));
                }
                last = Some(pc);
            }
            Ok((g, None, last))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut map = Vec::new();
    let mut status = Status::Holds;
    let mut binding = None;
    for (g, entry, last) in rows {
        match entry {
            Some(e) => map.push(e),
            None => {
                let pc = last.ok_or(Error::EmptyInput)?;
                let s = if pc.diverges() { Status::Fails } else { Status::Inconclusive };
                // Keep the first (smallest) index that fails outright.
                if binding.is_none() || (s == Status::Fails && status != Status::Fails) {
                    binding = Some((g, pc));
                }
                status = status.and(s);
            }
        }
    }
    Ok(Search { map, status, binding })
}

fn search_verdict(s: &Search, note: &str) -> Verdict {
    let v = match s.status {
        Status::Holds => {
            let cmax = s.map.iter().map(|e| e.c).fold(1.0, f64::max);
            Verdict::holds(constants(&[("pairs", s.map.len() as f64), ("C_max", cmax)]))
        }
        Status::Fails => {
            let (g, pc) = s.binding.expect("failing search has a binding index");
            Verdict::fails(constants(&[("binding_index", g), ("u", pc.u), ("growth", pc.growth)]))
        }
        Status::Inconclusive => {
            let (g, pc) = s.binding.expect("open search has a binding index");
            Verdict::inconclusive(pc.growth - 1.0).with_note(format!("index search exhausted at {g}"))
        }
    };
    if v.note.is_empty() {
        v.with_note(note)
    } else {
        v
    }
}

/// Decides a matrix relation between `S` and `T`.
pub fn matrix_relation(
    s: &WeightMatrix,
    t: &WeightMatrix,
    rel: MatrixRelation,
    ell_grid: &[f64],
    grid: &GridSpec,
) -> Result<RelationVerdict> {
    check_grid(grid)?;
    if ell_grid.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (qs, qt) = (s.quantifier_grid(ell_grid), t.quantifier_grid(ell_grid));
    let (es, et) = (s.search_grid(ell_grid), t.search_grid(ell_grid));
    s.verify_order(&es, grid)?;
    t.verify_order(&et, grid)?;
    let us = grid.u_points();
    let cache_s = SampleCache::new(s, &es, &us)?;
    let cache_t = SampleCache::new(t, &et, &us)?;
    let check = |l: f64, n: f64| pair_check(grid, cache_t.get(l), cache_s.get(n));
    let (verdict, map) = match rel {
        MatrixRelation::Beurling => {
            let r = search(&qt, &|_| es.clone(), check)?;
            (search_verdict(&r, "for all l exists n: tau^l <= sigma^n + C"), r.map)
        }
        MatrixRelation::Roumieu => {
            let mut desc = et.clone();
            desc.reverse();
            let r = search(&qs, &|_| desc.clone(), |n, l| check(l, n))?;
            (search_verdict(&r, "for all n exists l: tau^l <= sigma^n + C"), r.map)
        }
        MatrixRelation::Triangle => {
            let pairs: Vec<(f64, f64)> = qt.iter().flat_map(|&l| qs.iter().map(move |&n| (l, n))).collect();
            let checks = pairs.par_iter().map(|&(l, n)| check(l, n).map(|pc| (l, n, pc))).collect::<Result<Vec<_>>>()?;
            let mut map = Vec::new();
            let mut status = Status::Holds;
            let mut worst: Option<(f64, f64, PairCheck)> = None;
            for (l, n, pc) in checks {
                if pc.pass {
                    map.push(IndexEntry { given: l, chosen: n, c: pc.c });
                } else {
                    let st = if pc.growing { Status::Fails } else { Status::Inconclusive };
                    if worst.is_none() || st == Status::Fails {
                        worst = Some((l, n, pc));
                    }
                    status = status.and(st);
                }
            }
            let v = match (status, worst) {
                (Status::Holds, _) => {
                    let d = map.iter().map(|e| e.c).fold(1.0, f64::max);
                    Verdict::holds(constants(&[("pairs", map.len() as f64), ("D_max", d)]))
                }
                (Status::Fails, Some((l, n, pc))) => {
                    Verdict::fails(constants(&[("l", l), ("l_prime", n), ("u", pc.u), ("growth", pc.growth)]))
                }
                (_, w) => Verdict::inconclusive(w.map_or(0.0, |w| w.2.growth - 1.0)),
            };
            (v.with_note("for all l, l': tau^l <= sigma^l' + D"), map)
        }
    };
    let reduction = match (&s.kind, &t.kind) {
        (MatrixKind::Exponential(a), MatrixKind::Exponential(b)) => {
            let r = if rel == MatrixRelation::Triangle { Relation::Triangle } else { Relation::Preceq };
            Some(compare(a, b, r, grid)?.verdict.status)
        }
        (MatrixKind::Dilatation(a), MatrixKind::Dilatation(b)) => {
            let r = if rel == MatrixRelation::Triangle { Relation::TriangleC } else { Relation::PreceqC };
            Some(compare(a, b, r, grid)?.verdict.status)
        }
        _ => None,
    };
    if let Some(red) = reduction {
        let decided = red != Status::Inconclusive && verdict.status != Status::Inconclusive;
        if decided && red != verdict.status {
            return Err(Error::RelationDisagreement(format!(
                "{} between {} and {}: direct search {} but reduction {}",
                rel.name(),
                s.label(),
                t.label(),
                verdict.status,
                red
            )));
        }
    }
    Ok(RelationVerdict {
        relation: rel.name().into(),
        verdict: verdict.with_horizon(*grid),
        index_map: map,
        reduction,
    })
}

/// Member samples keyed by index.
struct SampleCache {
    ells: Vec<f64>,
    vals: Vec<Vec<f64>>,
}

impl SampleCache {
    fn new(m: &WeightMatrix, ells: &[f64], us: &[f64]) -> Result<Self> {
        Self::shifted(m, ells, us, 0.0)
    }

    fn shifted(m: &WeightMatrix, ells: &[f64], us: &[f64], shift: f64) -> Result<Self> {
        let vals = ells.par_iter().map(|&l| m.samples(l, us, shift)).collect::<Result<Vec<_>>>()?;
        Ok(Self { ells: ells.to_vec(), vals })
    }

    fn get(&self, ell: f64) -> &[f64] {
        let i = self.ells.iter().position(|&l| l == ell).expect("index sampled up front");
        &self.vals[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncatedRelation {
    BeurlingTrunc,
    RoumieuTrunc,
    TriangleTrunc,
}

impl FromStr for TruncatedRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "beurling_trunc" => Ok(TruncatedRelation::BeurlingTrunc),
            "roumieu_trunc" => Ok(TruncatedRelation::RoumieuTrunc),
            "triangle_trunc" => Ok(TruncatedRelation::TriangleTrunc),
            _ => Err(Error::Parse(format!("unknown truncated relation '{s}'"))),
        }
    }
}

/// Verdicts of the truncated-parameter ladder and the implications between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    /// Keys: `scaled_bound`, `beurling_trunc`, `roumieu_trunc`, `ratio_ladder`, `triangle_trunc`.
    pub verdicts: BTreeMap<String, RelationVerdict>,
    pub links: Vec<ChainLink>,
}

/// Relations with index ranges `ℓ ∈ (0, Λ')` / `n ∈ (0, Λ)` (Beurling) and
/// `n > Λ` / `ℓ > Λ'` (Roumieu) for exponential-type matrices.
///
/// Checks `τ ≤ (Λ/Λ')σ + C` ⟹ both truncated relations ⟹ `τ ≤ (K/K')σ + D`
/// for all `K' < Λ'`, `K > Λ`, and the equivalence of the last one with the
/// truncated `◁`. Each link is exercised by the explicit index choice
/// `n = (Λ/Λ')ℓ` (resp. `ℓ = (Λ'/Λ)n`) before any search.
pub fn truncated_matrix_relation(
    s: &WeightMatrix,
    t: &WeightMatrix,
    lambda: f64,
    lambda_p: f64,
    rel: TruncatedRelation,
    grid: &GridSpec,
) -> Result<(RelationVerdict, LadderReport)> {
    check_grid(grid)?;
    let (MatrixKind::Exponential(sigma), MatrixKind::Exponential(tau)) = (&s.kind, &t.kind) else {
        return Err(Error::InvalidArgument("truncated relations are implemented for exponential-type matrices".into()));
    };
    if !(lambda > 0.0 && lambda_p > 0.0 && lambda.is_finite() && lambda_p.is_finite()) {
        return Err(Error::InvalidArgument("truncation parameters must be positive".into()));
    }
    let us = grid.u_points();
    let sv = sigma.phi_prefix(&us, 0.0)?;
    let tv = tau.phi_prefix(&us, 0.0)?;
    let scaled = |a: f64, v: &[f64]| -> Vec<f64> { v.iter().map(|x| a * x).collect() };
    let check = |l: f64, n: f64| pair_check(grid, &scaled(l, &tv), &scaled(n, &sv));
    let ratio = lambda / lambda_p;
    let below = |x: f64, k: i32| x * (1.0 - 2f64.powi(-k));
    let above = |x: f64, k: i32| x * (1.0 + 2f64.powi(-k));

    let mut verdicts = BTreeMap::new();
    let pc = check(1.0, ratio)?;
    verdicts.insert(
        "scaled_bound".to_string(),
        RelationVerdict::scalar(
            "scaled_bound",
            pair_verdict(&pc, constants(&[("C", pc.c), ("ratio", ratio)]), "tau <= (L/L') sigma + C"),
        ),
    );

    let ls: Vec<f64> = (1..=LADDER_STEPS).map(|k| below(lambda_p, k)).collect();
    let ns_above: Vec<f64> = (1..=LADDER_STEPS).map(|k| above(lambda, k)).collect();
    let beur = search(
        &ls,
        &|l| {
            let mut c: Vec<f64> = (1..=30).map(|m| below(lambda, m)).collect();
            c.insert(0, ratio * l);
            c
        },
        check,
    )?;
    verdicts.insert(
        "beurling_trunc".to_string(),
        RelationVerdict {
            relation: "beurling_trunc".into(),
            verdict: search_verdict(&beur, "l in (0, L') exists n in (0, L)"),
            index_map: beur.map.clone(),
            reduction: None,
        },
    );
    let roum = search(
        &ns_above,
        &|n| {
            let mut c: Vec<f64> = (1..=30).rev().map(|m| above(lambda_p, m)).collect();
            c.insert(0, n / ratio);
            c
        },
        |n, l| check(l, n),
    )?;
    verdicts.insert(
        "roumieu_trunc".to_string(),
        RelationVerdict {
            relation: "roumieu_trunc".into(),
            verdict: search_verdict(&roum, "n > L exists l > L'"),
            index_map: roum.map.clone(),
            reduction: None,
        },
    );

    let ladder_pairs: Vec<(f64, f64)> = (1..=LADDER_STEPS).map(|k| (below(lambda_p, k), above(lambda, k))).collect();
    let ladder = all_pairs(&ladder_pairs, |kp, k| check(1.0, k / kp))?;
    verdicts.insert(
        "ratio_ladder".to_string(),
        RelationVerdict {
            relation: "ratio_ladder".into(),
            verdict: ladder.0.with_note("tau <= (K/K') sigma + D for K' < L', K > L"),
            index_map: ladder.1,
            reduction: None,
        },
    );
    let tri_pairs: Vec<(f64, f64)> = ls.iter().flat_map(|&l| ns_above.iter().map(move |&n| (l, n))).collect();
    let tri = all_pairs(&tri_pairs, check)?;
    verdicts.insert(
        "triangle_trunc".to_string(),
        RelationVerdict {
            relation: "triangle_trunc".into(),
            verdict: tri.0.with_note("l in (0, L'), n > L: tau^l <= sigma^n + D"),
            index_map: tri.1,
            reduction: None,
        },
    );

    let implications = [
        ("scaled_bound", "beurling_trunc"),
        ("scaled_bound", "roumieu_trunc"),
        ("beurling_trunc", "ratio_ladder"),
        ("roumieu_trunc", "ratio_ladder"),
        ("ratio_ladder", "triangle_trunc"),
        ("triangle_trunc", "ratio_ladder"),
    ];
    let mut links = Vec::new();
    for (p, c) in implications {
        let (ps, cs) = (verdicts[p].status(), verdicts[c].status());
        if ps == Status::Holds && cs == Status::Fails {
            return Err(Error::ChainViolation { premise: p.into(), conclusion: c.into() });
        }
        links.push(ChainLink {
            premise: p.into(),
            conclusion: c.into(),
            premise_status: ps,
            conclusion_status: cs,
            tested: ps != Status::Inconclusive && cs != Status::Inconclusive,
        });
    }
    let key = match rel {
        TruncatedRelation::BeurlingTrunc => "beurling_trunc",
        TruncatedRelation::RoumieuTrunc => "roumieu_trunc",
        TruncatedRelation::TriangleTrunc => "triangle_trunc",
    };
    let mut head = verdicts[key].clone();
    head.verdict = head.verdict.with_horizon(*grid);
    Ok((head, LadderReport { verdicts, links }))
}

fn all_pairs<F>(pairs: &[(f64, f64)], check: F) -> Result<(Verdict, Vec<IndexEntry>)>
where
    F: Fn(f64, f64) -> Result<PairCheck> + Sync,
{
    let checks = pairs.par_iter().map(|&(a, b)| check(a, b).map(|pc| (a, b, pc))).collect::<Result<Vec<_>>>()?;
    let mut map = Vec::new();
    let mut status = Status::Holds;
    let mut worst = None;
    for (a, b, pc) in checks {
        if pc.pass {
            map.push(IndexEntry { given: a, chosen: b, c: pc.c });
        } else {
            let st = if pc.growing { Status::Fails } else { Status::Inconclusive };
            if worst.is_none() || st == Status::Fails {
                worst = Some((a, b, pc));
            }
            status = status.and(st);
        }
    }
    let v = match (status, worst) {
        (Status::Holds, _) => {
            let d = map.iter().map(|e| e.c).fold(1.0, f64::max);
            Verdict::holds(constants(&[("pairs", map.len() as f64), ("D_max", d)]))
        }
        (Status::Fails, Some((a, b, pc))) => Verdict::fails(constants(&[("a", a), ("b", b), ("u", pc.u), ("growth", pc.growth)])),
        (_, w) => Verdict::inconclusive(w.map_or(0.0, |w| w.2.growth - 1.0)),
    };
    Ok((v, map))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixCondition {
    /// `∀ℓ ∃n: ω^ℓ(2t) ≤ ω^n(t) + L`, implying the two-variable translation bound.
    MixedOm1Beur,
    /// `∀n ∃ℓ: ω^ℓ(2t) ≤ ω^n(t) + L`.
    MixedOm1Roum,
    /// `∀ℓ ∃ℓ₁: ω^{ℓ₁}(t+1) ≤ ω^ℓ(t) + C` on integers.
    Weakom1,
    /// `∀ℓ₁ ∃ℓ: ω^{ℓ₁}(t+1) ≤ ω^ℓ(t) + C` on integers.
    Weakom1Var,
    /// `∀ℓ ∃ℓ' ∃b: ω^ℓ - ω^{ℓ'} ≥ a log(1+t) + b`.
    StrongDifferentGrowth,
    /// `sup (ω^{ℓ'} - ω^ℓ) = ∞` for some `ℓ' > ℓ`.
    WeakDifferentGrowth,
    /// `ω^{ℓ'} - ω^ℓ → ∞` for some `ℓ' > ℓ`.
    WeakDifferentGrowthLim,
    /// `∃ℓ: sup ω^ℓ < ∞`.
    BoundedRoum,
    /// `∀ℓ: sup ω^ℓ < ∞`.
    BoundedBeur,
    /// `∀ℓ: sup ω^ℓ = ∞`.
    Unbounded,
}

impl MatrixCondition {
    pub const ALL: [MatrixCondition; 10] = [
        MatrixCondition::MixedOm1Beur,
        MatrixCondition::MixedOm1Roum,
        MatrixCondition::Weakom1,
        MatrixCondition::Weakom1Var,
        MatrixCondition::StrongDifferentGrowth,
        MatrixCondition::WeakDifferentGrowth,
        MatrixCondition::WeakDifferentGrowthLim,
        MatrixCondition::BoundedRoum,
        MatrixCondition::BoundedBeur,
        MatrixCondition::Unbounded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MatrixCondition::MixedOm1Beur => "mixed_om1_beur",
            MatrixCondition::MixedOm1Roum => "mixed_om1_roum",
            MatrixCondition::Weakom1 => "weakom1",
            MatrixCondition::Weakom1Var => "weakom1var",
            MatrixCondition::StrongDifferentGrowth => "strongdifferentgrowth",
            MatrixCondition::WeakDifferentGrowth => "weakdifferentgrowth",
            MatrixCondition::WeakDifferentGrowthLim => "weakdifferentgrowth_lim",
            MatrixCondition::BoundedRoum => "bounded_roum",
            MatrixCondition::BoundedBeur => "bounded_beur",
            MatrixCondition::Unbounded => "unbounded",
        }
    }
}

impl FromStr for MatrixCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MatrixCondition::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown matrix condition '{s}'")))
    }
}

/// Decides a growth condition of a single matrix.
pub fn matrix_condition(
    w: &WeightMatrix,
    cond: MatrixCondition,
    ell_grid: &[f64],
    grid: &GridSpec,
) -> Result<RelationVerdict> {
    check_grid(grid)?;
    if ell_grid.is_empty() {
        return Err(Error::EmptyInput);
    }
    let q = w.quantifier_grid(ell_grid);
    let e = w.search_grid(ell_grid);
    w.verify_order(&e, grid)?;
    let us = grid.u_points();
    let asc = e.clone();
    let desc: Vec<f64> = e.iter().rev().copied().collect();
    let (verdict, map) = match cond {
        MatrixCondition::MixedOm1Beur | MatrixCondition::MixedOm1Roum => {
            let r = mixed_relation(w, w, cond == MatrixCondition::MixedOm1Beur, ell_grid, grid)?;
            (r.verdict, r.index_map)
        }
        MatrixCondition::Weakom1 | MatrixCondition::Weakom1Var => {
            let ints: Vec<f64> = us.iter().map(|&u| u.exp().round().max(1.0)).collect();
            let u_int: Vec<f64> = ints.iter().map(|t| t.ln()).collect();
            let u_next: Vec<f64> = ints.iter().map(|t| (t + 1.0).ln()).collect();
            let next = SampleCache::new(w, &e, &u_next)?;
            let here = SampleCache::new(w, &e, &u_int)?;
            // lhs index first: omega^{l1}(t+1) <= omega^l(t) + C
            let check = |l1: f64, l: f64| pair_check(grid, next.get(l1), here.get(l));
            let dil = matches!(w.kind, MatrixKind::Dilatation(_));
            let r = if cond == MatrixCondition::Weakom1 {
                let cands = |l: f64| -> Vec<f64> {
                    let mut v: Vec<f64> = desc.iter().copied().filter(|&x| x <= l).collect();
                    if dil {
                        v.retain(|&x| x <= l / 2.0);
                    }
                    v
                };
                search(&q, &cands, |l, l1| check(l1, l))?
            } else {
                let cands = |l1: f64| -> Vec<f64> {
                    let mut v: Vec<f64> = asc.iter().copied().filter(|&x| x >= l1).collect();
                    if dil {
                        v.retain(|&x| x >= 2.0 * l1);
                    }
                    v
                };
                search(&q, &cands, check)?
            };
            let note = if dil {
                "integer t; dilatation type starts at the factor 2 choice"
            } else {
                "integer t: omega^l1(t+1) <= omega^l(t) + C"
            };
            (search_verdict(&r, note), r.map)
        }
        MatrixCondition::StrongDifferentGrowth => {
            let plain = SampleCache::new(w, &e, &us)?;
            let log1p: Vec<f64> = us.iter().map(|&u| STRONG_GROWTH_A * softplus(u)).collect();
            let check = |l: f64, lp: f64| {
                let (a, b) = (plain.get(l), plain.get(lp));
                let n = a.len().min(b.len());
                let gap: Vec<f64> = (0..n).map(|i| (a[i] - b[i]).max(0.0)).collect();
                pair_check(grid, &log1p, &gap)
            };
            let cands = |l: f64| -> Vec<f64> { desc.iter().copied().filter(|&x| x < l).collect() };
            let r = search(&q, &cands, check)?;
            let v = search_verdict(&r, "a = 2: a log(1+t) <= omega^l - omega^l' + C");
            if let MatrixKind::Exponential(base) = &w.kind {
                let om3 = conditions::check_condition(base, ConditionId::Om3, grid)?.status;
                if om3 != Status::Inconclusive && v.status != Status::Inconclusive && om3 != v.status {
                    return Err(Error::RelationDisagreement(format!(
                        "strong different growth {} but om3 {} for {}",
                        v.status,
                        om3,
                        base.label()
                    )));
                }
            }
            (v, r.map)
        }
        MatrixCondition::WeakDifferentGrowth | MatrixCondition::WeakDifferentGrowthLim => {
            let (lo, hi) = (e[0], e[e.len() - 1]);
            let a = w.samples(hi, &us, 0.0)?;
            let b = w.samples(lo, &us, 0.0)?;
            let n = a.len().min(b.len());
            let g = grid.truncated(n)?;
            let gap: Vec<f64> = (0..n).map(|i| a[i] - b[i]).collect();
            let v = if cond == MatrixCondition::WeakDifferentGrowth {
                growth_verdict(&g, &gap)?
            } else {
                // Window infima: sups of the negated gap.
                let neg: Vec<f64> = gap.iter().map(|x| -x).collect();
                let ws = WindowSups::new(&g, &neg)?;
                let (inf_prev, inf_top) = (-ws.prev, -ws.top);
                if inf_top > 0.0 && inf_top - inf_prev >= FAIL_GROWTH * inf_prev.abs().max(1.0) {
                    Verdict::holds(constants(&[("inf_top", inf_top), ("inf_prev", inf_prev)]))
                } else if inf_top <= inf_prev + 0.01 * inf_prev.abs() + 1e-12 {
                    Verdict::fails(constants(&[("inf_top", inf_top), ("inf_prev", inf_prev)]))
                } else {
                    Verdict::inconclusive(inf_top - inf_prev)
                }
            };
            let mut v = v;
            if let Some(c) = v.certificate.as_mut() {
                c.insert("l0".into(), lo);
                c.insert("l0_prime".into(), hi);
            }
            (v.with_note("widest index pair of the search grid"), Vec::new())
        }
        MatrixCondition::BoundedRoum | MatrixCondition::BoundedBeur | MatrixCondition::Unbounded => {
            let ell = if cond == MatrixCondition::BoundedBeur { e[e.len() - 1] } else { e[0] };
            let v = w.samples(ell, &us, 0.0)?;
            let g = grid.truncated(v.len())?;
            let gv = growth_verdict(&g, &v)?;
            let grows = gv.status;
            let status = match (cond, grows) {
                (_, Status::Inconclusive) => Status::Inconclusive,
                (MatrixCondition::Unbounded, s) => s,
                (_, Status::Holds) => Status::Fails,
                (_, _) => Status::Holds,
            };
            let sup = v.iter().copied().fold(0.0, f64::max);
            let out = match status {
                Status::Holds if cond == MatrixCondition::Unbounded => gv.with_note(format!("index {ell} grows")),
                Status::Holds => Verdict::holds(constants(&[("index", ell), ("sup", sup)])),
                Status::Fails if cond == MatrixCondition::Unbounded => {
                    Verdict::fails(constants(&[("index", ell), ("sup", sup)]))
                }
                Status::Fails => Verdict::fails(constants(&[("index", ell), ("sup_top", sup)])),
                Status::Inconclusive => gv,
            };
            (out, Vec::new())
        }
    };
    Ok(RelationVerdict {
        relation: cond.name().into(),
        verdict: verdict.with_horizon(*grid),
        index_map: map,
        reduction: None,
    })
}

/// Mixed translation bound between two matrices: `τ^ℓ(2t) ≤ σ^n(t) + L`
/// (`∀ℓ ∃n` when `beurling`, else `∀n ∃ℓ`).
///
/// For nondecreasing matrices the one-variable form implies
/// `τ^ℓ(s+t) ≤ σ^n(s) + σ^n(t) + L`; otherwise the two-variable form is
/// scanned directly on a subsampled grid.
pub fn mixed_relation(
    s: &WeightMatrix,
    t: &WeightMatrix,
    beurling: bool,
    ell_grid: &[f64],
    grid: &GridSpec,
) -> Result<RelationVerdict> {
    check_grid(grid)?;
    if ell_grid.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (es, et) = (s.search_grid(ell_grid), t.search_grid(ell_grid));
    let q = if beurling { t.quantifier_grid(ell_grid) } else { s.quantifier_grid(ell_grid) };
    let desc: Vec<f64> = et.iter().rev().copied().collect();
    let us = grid.u_points();
    let ln2 = std::f64::consts::LN_2;
    let (r, note) = if s.flags.nondecreasing && t.flags.nondecreasing {
        let doubled = SampleCache::shifted(t, &et, &us, ln2)?;
        let plain = SampleCache::new(s, &es, &us)?;
        let check = |l: f64, n: f64| pair_check(grid, doubled.get(l), plain.get(n));
        let r = if beurling {
            search(&q, &|_| es.clone(), check)?
        } else {
            search(&q, &|_| desc.clone(), |n, l| check(l, n))?
        };
        (r, "radial form: tau^l(2t) <= sigma^n(t) + L")
    } else {
        let check = |l: f64, n: f64| two_variable_scan(t, l, s, n, grid);
        let r = if beurling {
            search(&q, &|_| es.clone(), check)?
        } else {
            search(&q, &|_| desc.clone(), |n, l| check(l, n))?
        };
        (r, "two-variable scan: tau^l(s+t) <= sigma^n(s) + sigma^n(t) + L")
    };
    let name = if beurling { "mixed_om1_beur" } else { "mixed_om1_roum" };
    Ok(RelationVerdict {
        relation: name.into(),
        verdict: search_verdict(&r, note).with_horizon(*grid),
        index_map: r.map,
        reduction: None,
    })
}

/// Holds when `v` grows over the top windows, fails when it is bounded there.
fn growth_verdict(g: &GridSpec, v: &[f64]) -> Result<Verdict> {
    let ws = WindowSups::new(g, v)?;
    Ok(if ratio_growing(&ws) || diff_growing(&ws) {
        Verdict::holds(constants(&[("sup_top", ws.top), ("sup_prev", ws.prev)]))
    } else if ws.difference_bounded() {
        Verdict::fails(constants(&[("sup_top", ws.top), ("sup_prev", ws.prev)]))
    } else {
        Verdict::inconclusive(ws.growth() - 1.0)
    })
}

fn softplus(u: f64) -> f64 {
    if u > 0.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}

fn logaddexp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    m + (-(a - b).abs()).exp().ln_1p()
}

/// `ω^ℓ(s+t) ≤ ω^n(s) + ω^n(t) + L` over pairs `s ≤ t` of a subsampled grid.
fn two_variable_scan(t: &WeightMatrix, l: f64, s: &WeightMatrix, n: f64, grid: &GridSpec) -> Result<PairCheck> {
    let sub = GridSpec { n_points: grid.n_points.min(SCAN_POINTS), ..*grid };
    let us = sub.u_points();
    let big = t.member(l)?;
    let small = s.samples(n, &us, 0.0)?;
    let m = small.len();
    let rows: Vec<(f64, f64)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut d = f64::NEG_INFINITY;
            let mut r = 0.0f64;
            for j in 0..=i {
                let lhs = big.phi(logaddexp(us[i], us[j]))?;
                let rhs = small[i] + small[j];
                d = d.max(lhs - rhs);
                r = r.max(lhs / (rhs + 1.0));
            }
            Ok((d, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let g = sub.truncated(m)?;
    let d: Vec<f64> = rows.iter().map(|x| x.0).collect();
    let r: Vec<f64> = rows.iter().map(|x| x.1).collect();
    judge(&g, &us[..m], &d, &r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::logarithmic(1.0, 1e8, 1601).unwrap()
    }

    fn pw(a: f64) -> WeightFunction {
        WeightFunction::power(a).unwrap()
    }

    #[test]
    fn preceq_examples() {
        let g = grid();
        let r = compare(&pw(1.0), &pw(1.0), Relation::Preceq, &g).unwrap();
        assert!(r.verdict.is_holds());
        assert_eq!(r.verdict.cert("C"), Some(1.0));
        assert!(compare(&pw(0.5), &pw(1.0), Relation::Preceq, &g).unwrap().verdict.is_fails());
        assert!(compare(&pw(1.0), &pw(0.5), Relation::Triangle, &g).unwrap().verdict.is_holds());
        assert!(compare(&pw(1.0), &pw(1.0), Relation::Triangle, &g).unwrap().verdict.is_fails());
    }

    #[test]
    fn dilation_relations_on_log() {
        let g = grid();
        let l = WeightFunction::log();
        assert!(compare(&l, &l, Relation::TriangleC, &g).unwrap().verdict.is_holds());
        assert!(compare(&l, &l, Relation::SimC, &g).unwrap().verdict.is_holds());
        assert!(compare(&pw(0.5), &pw(1.0), Relation::PreceqC, &g).unwrap().verdict.is_fails());
    }

    #[test]
    fn narrow_grid_is_rejected() {
        let g = GridSpec::logarithmic(1.0, 100.0, 100).unwrap();
        assert!(matches!(compare(&pw(1.0), &pw(1.0), Relation::Le, &g), Err(Error::GridTooNarrow(_))));
    }

    #[test]
    fn bridge_on_exp_and_log() {
        let g = GridSpec::logarithmic(1e-2, 300.0, 1201).unwrap();
        let e = WeightFunction::exp();
        let r = bridge_check(&e, &e, &g).unwrap();
        assert!(r.consistent);
        assert!(r.verdicts["preceq"].is_holds());
        let l = WeightFunction::log();
        let r = bridge_check(&l, &l, &grid()).unwrap();
        assert!(r.verdicts["preceq_c"].is_holds());
        assert!(r.verdicts["preceq"].is_holds());
    }

    #[test]
    fn exponential_matrix_examples() {
        let g = grid();
        let ells = default_ell_grid();
        let gev = WeightMatrix::exponential(WeightFunction::gevrey(2.0).unwrap());
        let r = matrix_relation(&gev, &gev, MatrixRelation::Beurling, &ells, &g).unwrap();
        assert!(r.verdict.is_holds());
        assert!(r.index_map.iter().all(|e| e.chosen == e.given));
        let s = WeightMatrix::exponential(pw(1.0));
        let t = WeightMatrix::exponential(pw(0.5));
        assert!(matrix_relation(&s, &t, MatrixRelation::Roumieu, &ells, &g).unwrap().verdict.is_holds());
        assert!(matrix_relation(&t, &s, MatrixRelation::Beurling, &ells, &g).unwrap().verdict.is_fails());
    }

    #[test]
    fn explicit_matrix_order_is_checked() {
        let m = WeightMatrix::explicit(vec![(1.0, pw(1.0)), (2.0, pw(0.5))]).unwrap();
        let r = matrix_condition(&m, MatrixCondition::Unbounded, &default_ell_grid(), &grid());
        assert!(matches!(r, Err(Error::MatrixOrderViolated { .. })));
    }

    #[test]
    fn truncation_ladder_examples() {
        let g = grid();
        let s = WeightMatrix::exponential(pw(1.0));
        let (v, rep) = truncated_matrix_relation(&s, &s, 1.0, 1.0, TruncatedRelation::BeurlingTrunc, &g).unwrap();
        assert!(v.verdict.is_holds());
        assert!(rep.verdicts.values().all(|r| r.verdict.is_holds()));
        let t2 = WeightMatrix::exponential(WeightFunction::scaled(2.0, pw(1.0)).unwrap());
        let (_, rep) = truncated_matrix_relation(&s, &t2, 2.0, 1.0, TruncatedRelation::RoumieuTrunc, &g).unwrap();
        assert!(rep.verdicts["scaled_bound"].verdict.is_holds());
        assert!(rep.verdicts["ratio_ladder"].verdict.is_holds());
        let t3 = WeightMatrix::exponential(WeightFunction::scaled(3.0, pw(1.0)).unwrap());
        let (_, rep) = truncated_matrix_relation(&s, &t3, 2.0, 1.0, TruncatedRelation::TriangleTrunc, &g).unwrap();
        assert!(rep.verdicts["scaled_bound"].verdict.is_fails());
        assert!(rep.verdicts["ratio_ladder"].verdict.is_fails());
    }

    #[test]
    fn matrix_condition_examples() {
        let g = grid();
        let ells = default_ell_grid();
        let gev = WeightMatrix::exponential(WeightFunction::gevrey(2.0).unwrap());
        assert!(matrix_condition(&gev, MatrixCondition::MixedOm1Beur, &ells, &g).unwrap().verdict.is_holds());
        let e = WeightMatrix::exponential(WeightFunction::exp());
        let g_exp = GridSpec::logarithmic(1e-3, 500.0, 1201).unwrap();
        assert!(matrix_condition(&e, MatrixCondition::Weakom1, &ells, &g_exp).unwrap().verdict.is_holds());
        let bounded = WeightMatrix::exponential(WeightFunction::profile(&[(0.0, 0.0), (1.0, 1.0), (2.0, 1.0)]).unwrap());
        assert!(matrix_condition(&bounded, MatrixCondition::BoundedRoum, &ells, &g).unwrap().verdict.is_holds());
        assert!(matrix_condition(&gev, MatrixCondition::Unbounded, &ells, &g).unwrap().verdict.is_holds());
        assert!(matrix_condition(&gev, MatrixCondition::StrongDifferentGrowth, &ells, &g).unwrap().verdict.is_holds());
        let lm = WeightMatrix::exponential(WeightFunction::log());
        assert!(matrix_condition(&lm, MatrixCondition::StrongDifferentGrowth, &ells, &g).unwrap().verdict.is_fails());
    }
}

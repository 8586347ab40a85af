//! A weight that is equivalent to no weight with convex `φ`, yet satisfies
//! `(ω₃)` and is slowly varying.
//!
//! `φ` is piecewise linear through the corners
//! `(0,0), (x_1, φ(x_1)), (x̄_1, φ(y_1)), (y_1, φ(y_1)), (x_2, φ(x_2)), …`:
//! a steep rise of slope `k_j` on `[x_j, x̄_j]`, a plateau on `[x̄_j, y_j]` and a
//! gentle rise of slope `ℓ_j` on `[y_j, x_{j+1}]`. The plateaus sit so far
//! above the chord from `x_j` that no convex function stays within a bounded
//! factor of `φ`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verdict::{constants, Verdict};
use crate::weight::{Profile, WeightFunction};

/// Corners beyond this magnitude are refused.
pub const REPRESENTABLE_MAX: f64 = 1e300;
pub const EXACT_TOL: f64 = 1e-12;
pub const NONEQUIVALENCE_THRESHOLD: f64 = 1e3;
const SAMPLES_PER_SEGMENT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeltaSource {
    DefaultFormula,
    Power { alpha: f64 },
    User,
}

/// `δ_1, δ_2, …` with `δ_{j+1} ≤ δ_j ≤ (j+2)δ_{j+1}` and `δ_j j → ∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleDelta {
    values: Vec<f64>,
    pub source: DeltaSource,
}

impl AdmissibleDelta {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let d = Self { values, source: DeltaSource::User };
        d.validate()?;
        Ok(d)
    }

    /// `δ_j = 1/log(e + j)` for `j = 1..=n`.
    pub fn default_formula(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one delta".into()));
        }
        let values = (1..=n).map(|j| 1.0 / (std::f64::consts::E + j as f64).ln()).collect();
        let d = Self { values, source: DeltaSource::DefaultFormula };
        d.validate()?;
        Ok(d)
    }

    /// `(δ_j^α)`, again admissible for `α ∈ (0, 1]` when `δ_j → 0`.
    pub fn power(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1] (got {alpha})")));
        }
        let values = self.values.iter().map(|d| d.powf(alpha)).collect();
        let d = Self { values, source: DeltaSource::Power { alpha } };
        d.validate()?;
        Ok(d)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `δ_j`, one-based.
    pub fn get(&self, j: usize) -> f64 {
        self.values[j - 1]
    }

    /// Keeps `δ_1..δ_n`.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.values.len() {
            return Err(Error::InvalidArgument(format!("prefix {n} of {} deltas", self.values.len())));
        }
        let d = Self { values: self.values[..n].to_vec(), source: self.source };
        d.validate()?;
        Ok(d)
    }

    /// The two-sided ratio bound exactly; `δ_j j → ∞` through strict increase
    /// of `δ_j j` over the final third and `δ_n n > δ_1`.
    pub fn validate(&self) -> Result<()> {
        let v = &self.values;
        if v.is_empty() {
            return Err(Error::ValidationFailed("empty delta sequence".into()));
        }
        if let Some(d) = v.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return Err(Error::ValidationFailed(format!("delta must be positive and finite (got {d})")));
        }
        for j in 1..v.len() {
            let (a, b) = (v[j - 1], v[j]);
            if b > a || a > (j as f64 + 2.0) * b {
                return Err(Error::ValidationFailed(format!("ratio bound fails between delta_{j} and delta_{}", j + 1)));
            }
        }
        let n = v.len();
        if n >= 3 {
            let start = (2 * n) / 3;
            for j in start.max(1)..n {
                if v[j] * (j + 1) as f64 <= v[j - 1] * j as f64 {
                    return Err(Error::ValidationFailed(format!("delta_j * j not increasing at j = {}", j + 1)));
                }
            }
            if v[n - 1] * n as f64 <= v[0] {
                return Err(Error::ValidationFailed("delta_j * j does not rise above delta_1".into()));
            }
        }
        Ok(())
    }
}

/// Corner arrays of the construction. Index `j - 1` holds block `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleProfile {
    pub j_max: usize,
    pub t1: f64,
    pub delta: AdmissibleDelta,
    /// `t_1..t_{J+1}`.
    pub t: Vec<f64>,
    /// `x_1..x_{J+1}`.
    pub x: Vec<f64>,
    pub xbar: Vec<f64>,
    pub y: Vec<f64>,
    /// `φ(x_1)..φ(x_{J+1})`.
    pub phi_x: Vec<f64>,
    /// `φ(x̄_j) = φ(y_j)`, stored once.
    pub phi_y: Vec<f64>,
    /// Slope on `[x_j, x̄_j]`.
    pub k: Vec<f64>,
    /// Slope on `[y_j, x_{j+1}]`.
    pub l: Vec<f64>,
}

/// Builds the profile for blocks `1..=J`; needs `δ_1..δ_{J+1}`.
pub fn construct(delta: &AdmissibleDelta, t1: f64, j_max: usize) -> Result<CounterexampleProfile> {
    if !(t1 > 0.0 && t1 < 1.0) {
        return Err(Error::InvalidArgument(format!("t1 must lie in (0, 1) (got {t1})")));
    }
    if j_max == 0 {
        return Err(Error::InvalidArgument("J must be >= 1".into()));
    }
    if delta.len() < j_max + 1 {
        return Err(Error::InvalidArgument(format!("J = {j_max} needs {} deltas, got {}", j_max + 1, delta.len())));
    }
    let delta = delta.prefix(j_max + 1)?;
    let mut t = vec![t1];
    let mut x = vec![2.0 / t1];
    let mut phi_x = vec![delta.get(1) * x[0]];
    let (mut xbar, mut y, mut phi_y, mut k, mut l) = (vec![], vec![], vec![], vec![], vec![]);
    for j in 1..=j_max {
        let jf = j as f64;
        let (tj, xj, pxj) = (t[j - 1], x[j - 1], phi_x[j - 1]);
        let denom = 1.0 - jf * tj;
        let yj = 2.0 * jf * xj / denom;
        let pyj = 2.0 * jf * pxj / denom;
        let xbj = tj * yj + (1.0 - tj) * xj;
        let xn = (jf + 1.0) * yj;
        let pxn = delta.get(j + 1) * (jf + 1.0) * xn;
        if [yj, pyj, xn, pxn].iter().any(|v| !(v.is_finite() && *v <= REPRESENTABLE_MAX)) {
            return Err(Error::OverflowAtJ { j, safe: j - 1 });
        }
        t.push(0.5 * (1.0 / jf - tj));
        xbar.push(xbj);
        y.push(yj);
        phi_y.push(pyj);
        k.push((pyj - pxj) / (xbj - xj));
        l.push((pxn - pyj) / (xn - yj));
        x.push(xn);
        phi_x.push(pxn);
    }
    Ok(CounterexampleProfile { j_max, t1, delta, t, x, xbar, y, phi_x, phi_y, k, l })
}

/// Largest `J` whose corners stay below [`REPRESENTABLE_MAX`].
pub fn max_safe_j(t1: f64) -> Result<usize> {
    let delta = AdmissibleDelta::default_formula(400)?;
    match construct(&delta, t1, 398) {
        Ok(_) => Ok(398),
        Err(Error::OverflowAtJ { safe, .. }) => Ok(safe),
        Err(e) => Err(e),
    }
}

impl CounterexampleProfile {
    pub fn corners(&self) -> Vec<(f64, f64)> {
        let mut c = vec![(0.0, 0.0)];
        for j in 0..self.j_max {
            c.push((self.x[j], self.phi_x[j]));
            c.push((self.xbar[j], self.phi_y[j]));
            c.push((self.y[j], self.phi_y[j]));
        }
        c.push((self.x[self.j_max], self.phi_x[self.j_max]));
        c
    }

    pub fn profile(&self) -> Result<Profile> {
        Profile::new(&self.corners())
    }

    /// The weight `ω(t) = φ(log t)` for `t ≥ 1`, zero below.
    pub fn weight(&self) -> Result<WeightFunction> {
        Ok(WeightFunction::from_profile(self.profile()?))
    }

    /// `k_{j}` from the closed form, one-based; valid up to `J + 1`.
    pub fn k_closed(&self, j: usize) -> f64 {
        self.delta.get(j) * j as f64 / self.t[j - 1]
    }
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EXACT_TOL * a.abs().max(b.abs())
}

/// Margin of `a ≤ b` relative to `b`.
fn rel_margin(a: f64, b: f64) -> f64 {
    (b - a) / b.abs().max(f64::MIN_POSITIVE)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub j: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// Positive when satisfied (relative slack for inequalities, `-|rel. error|` for identities).
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateBundle {
    pub checks: Vec<Check>,
    pub all_pass: bool,
    pub failures: usize,
}

impl CertificateBundle {
    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn passes(&self, name: &str) -> bool {
        self.checks.iter().filter(|c| c.name == name).all(|c| c.pass)
    }
}

fn ineq(name: &str, j: usize, lhs: f64, rhs: f64, strict: bool) -> Check {
    let pass = if strict { lhs < rhs } else { lhs <= rhs * (1.0 + EXACT_TOL) };
    Check { name: name.into(), j, lhs, rhs, margin: rel_margin(lhs, rhs), pass }
}

fn ident(name: &str, j: usize, lhs: f64, rhs: f64) -> Check {
    let err = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
    Check { name: name.into(), j, lhs, rhs, margin: -err, pass: rel_close(lhs, rhs) }
}

/// Re-derives every structural property from the stored arrays.
pub fn verify_profile(p: &CounterexampleProfile) -> Result<CertificateBundle> {
    let jm = p.j_max;
    let prof = p.profile();
    let mut checks = Vec::new();
    for j in 1..=jm + 1 {
        let tj = p.t[j - 1];
        checks.push(ineq("t_positive", j, 0.0, tj, true));
        checks.push(ineq("t_below_1_over_j", j, tj, 1.0 / j as f64, true));
        checks.push(ineq("x_lower_bound", j, 2.0 * j as f64 / tj, p.x[j - 1], false));
        checks.push(ident("phi_x_over_x", j, p.phi_x[j - 1] / p.x[j - 1], p.delta.get(j) * j as f64));
    }
    for j in 1..=jm {
        let i = j - 1;
        let jf = j as f64;
        let (x, xb, y, xn) = (p.x[i], p.xbar[i], p.y[i], p.x[i + 1]);
        checks.push(ineq("order_x_xbar", j, x, xb, true));
        checks.push(ineq("order_xbar_y", j, xb, y, true));
        checks.push(ineq("order_y_xnext", j, y, xn, true));
        let gap = (y - xb).min(y - x).min(xn - y).min(xb - x);
        checks.push(ineq("min_gap", j, jf, gap, false));
        let quotient = (p.phi_y[i] - p.phi_x[i]) / (xb - x);
        checks.push(ident("k_closed_form", j, p.k[i], p.k_closed(j)));
        checks.push(ident("k_difference_quotient", j, p.k[i], quotient));
        let lq = (p.phi_x[i + 1] - p.phi_y[i]) / (xn - y);
        checks.push(ident("l_difference_quotient", j, p.l[i], lq));
        checks.push(ineq("l_positive", j, 0.0, p.l[i], true));
        checks.push(ineq("l_upper_bound", j, p.l[i], p.delta.get(j) * (jf * jf + jf + 1.0) / jf, false));
        checks.push(ineq("l_below_next_k", j, p.l[i], p.k_closed(j + 1), true));
        checks.push(ident("phi_y_over_y", j, p.phi_y[i] / y, p.delta.get(j) * jf));
        let target = 2.0 * jf * p.phi_x[i] / (1.0 - jf * p.t[i]);
        checks.push(ident("plateau_height", j, p.phi_y[i], target));
        if let Ok(pr) = &prof {
            let u = p.t[i] * y + (1.0 - p.t[i]) * x;
            checks.push(ident("convex_combination_value", j, pr.phi(u), target));
            let (a, b) = (pr.phi(xb), pr.phi(y));
            checks.push(Check { name: "plateau_exact".into(), j, lhs: a, rhs: b, margin: 0.0, pass: a == b });
        }
    }
    if let Err(e) = prof {
        checks.push(Check { name: format!("profile_builds: {e}"), j: 0, lhs: 0.0, rhs: 0.0, margin: -1.0, pass: false });
    }
    let failures = checks.iter().filter(|c| !c.pass).count();
    Ok(CertificateBundle { checks, all_pass: failures == 0, failures })
}

/// One violation of `φ(ty + (1-t)x) ≤ Atφ(y) + A(1-t)φ(x) + A` at
/// `x = x_j, y = y_j, t = t_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonconvexWitness {
    pub a: f64,
    pub j: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    /// Equivalence constant excluded by this witness: `A = B² + B`.
    pub b: f64,
}

/// Ladder `1, 2, 4, …` up to `a_max` (plus `a_max` itself).
pub fn a_ladder(a_max: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..64).map(|k| 2f64.powi(k)).take_while(|a| *a <= a_max).collect();
    if v.last().is_some_and(|l| *l < a_max) {
        v.push(a_max);
    }
    v
}

/// Smallest block violating the `A`-bounded convexity inequality at
/// `x = x_j, y = y_j, t = t_j`.
fn witness_for(p: &CounterexampleProfile, a: f64) -> Result<NonconvexWitness> {
    for j in 1..=p.j_max {
        let i = j - 1;
        let tj = p.t[i];
        let lhs = p.phi_y[i];
        let rhs = a * tj * p.phi_y[i] + a * (1.0 - tj) * p.phi_x[i] + a;
        if lhs > rhs {
            let b = 0.5 * (-1.0 + (1.0 + 4.0 * a).sqrt());
            return Ok(NonconvexWitness { a, j, lhs, rhs, margin: (lhs - rhs) / lhs, b });
        }
    }
    // With t_j close to 1/(3j), φ(x_j)/φ(y_j) is close to 1/(3j), so a violation
    // needs roughly 1 > 2A/(3j).
    let required = ((2.0 * a / 3.0).ceil() as usize + 1).max(p.j_max + 1);
    Err(Error::JHorizonTooSmall { a, required })
}

/// For each `A` on the ladder, the smallest block violating the `A`-bounded
/// convexity inequality. Any violation excludes every `σ ∼ ω` with convex `φ_σ`
/// whose equivalence constant `B` has `B² + B ≤ A`.
pub fn nonconvexity_certificate(p: &CounterexampleProfile, a_max: f64) -> Result<Vec<NonconvexWitness>> {
    if !(a_max >= 1.0) {
        return Err(Error::InvalidArgument("A_max must be >= 1".into()));
    }
    a_ladder(a_max).par_iter().map(|&a| witness_for(p, a)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderEntry {
    pub a: f64,
    pub witness: Option<NonconvexWitness>,
    /// Estimated horizon when no witness exists up to `J`.
    pub required_j: Option<usize>,
}

/// Same ladder, keeping the per-`A` outcome instead of stopping at the first gap.
pub fn nonconvexity_scan(p: &CounterexampleProfile, a_max: f64) -> Result<Vec<LadderEntry>> {
    if !(a_max >= 1.0) {
        return Err(Error::InvalidArgument("A_max must be >= 1".into()));
    }
    a_ladder(a_max)
        .into_iter()
        .map(|a| match witness_for(p, a) {
            Ok(w) => Ok(LadderEntry { a, witness: Some(w), required_j: None }),
            Err(Error::JHorizonTooSmall { required, .. }) => Ok(LadderEntry { a, witness: None, required_j: Some(required) }),
            Err(e) => Err(e),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockBounds {
    pub j: usize,
    /// `k_j / φ(x_j)` against `1/(2j)`.
    pub case_i: (f64, f64),
    /// `ℓ_j / φ(x̄_j)` against `(j²+j+1)/(4j⁴)`.
    pub case_ii: (f64, f64),
    /// `k_{j+1} / φ(y_j)` against `(j+1)/(2j²)`.
    pub case_iii: (f64, f64),
    /// Sampled `sup φ(γ+s)/φ(s)` over `s ∈ [x_j, x_{j+1}]`.
    pub sampled_sup: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaReport {
    pub gamma: f64,
    pub j0: usize,
    pub blocks: Vec<BlockBounds>,
    /// First block from which every sampled ratio stays `≤ 2`.
    pub threshold_j: Option<usize>,
    pub sup_ratio_tail: f64,
    /// `(P_{ω,γ})` with `K = e`.
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlowVariationReport {
    pub gammas: Vec<GammaReport>,
    pub all_bounds_pass: bool,
}

/// `φ(s + γ) - φ(s)` summed segment by segment, exact even when `γ ≪ s`.
fn increment(p: &Profile, s: f64, gamma: f64) -> f64 {
    let (us, sl) = (p.us(), p.slopes());
    let mut k = p.segment_of(s);
    let mut a = s.max(0.0);
    let mut left = gamma - (a - s);
    let mut total = 0.0;
    // Track the remaining length rather than `s + γ`, which rounds to `s` far out.
    while left > 0.0 {
        let room = if k + 1 < sl.len() { us[k + 1] - a } else { f64::INFINITY };
        let step = left.min(room);
        total += sl[k] * step;
        left -= step;
        if k + 1 >= sl.len() {
            break;
        }
        a = us[k + 1];
        k += 1;
    }
    total
}

/// Slow variation of `ω` along the blocks: the three per-block slope bounds
/// and sampled `φ(γ+s)/φ(s)`, certifying `(P_{ω,γ})` with `K = e` once the
/// ratio stays `≤ 2`.
pub fn slow_variation_certificate(p: &CounterexampleProfile, gammas: &[f64]) -> Result<SlowVariationReport> {
    let prof = p.profile()?;
    let reports = gammas
        .par_iter()
        .map(|&gamma| {
            if !(gamma > 0.0 && gamma.is_finite()) {
                return Err(Error::InvalidArgument(format!("gamma must be positive (got {gamma})")));
            }
            let j0 = (gamma.ceil() as usize).max(1);
            if j0 >= p.j_max {
                return Err(Error::GammaTooLarge { gamma, j0 });
            }
            let blocks: Vec<BlockBounds> = (j0..=p.j_max)
                .map(|j| {
                    let i = j - 1;
                    let jf = j as f64;
                    let ci = (p.k[i] / p.phi_x[i], 1.0 / (2.0 * jf));
                    let cii = (p.l[i] / p.phi_y[i], (jf * jf + jf + 1.0) / (4.0 * jf.powi(4)));
                    let ciii = (p.k_closed(j + 1) / p.phi_y[i], (jf + 1.0) / (2.0 * jf * jf));
                    let segs = [(p.x[i], p.xbar[i]), (p.xbar[i], p.y[i]), (p.y[i], p.x[i + 1])];
                    let mut sup = 1.0f64;
                    for (a, b) in segs {
                        for m in 0..=SAMPLES_PER_SEGMENT {
                            let s = a + (b - a) * m as f64 / SAMPLES_PER_SEGMENT as f64;
                            sup = sup.max(1.0 + increment(&prof, s, gamma) / prof.phi(s));
                        }
                    }
                    let tol = 1.0 + EXACT_TOL;
                    let pass = ci.0 <= ci.1 * tol && cii.0 <= cii.1 * tol && ciii.0 <= ciii.1 * tol;
                    BlockBounds { j, case_i: ci, case_ii: cii, case_iii: ciii, sampled_sup: sup, pass }
                })
                .collect();
            let threshold_j = (0..blocks.len())
                .find(|&s| blocks[s..].iter().all(|b| b.sampled_sup <= 2.0))
                .map(|s| blocks[s].j);
            let tail_from = blocks.len() - (blocks.len() / 3).max(1);
            let sup_ratio_tail = blocks[tail_from..].iter().map(|b| b.sampled_sup).fold(1.0, f64::max);
            let bounds_ok = blocks.iter().all(|b| b.pass);
            let verdict = match threshold_j {
                Some(tj) if bounds_ok => Verdict::holds(constants(&[
                    ("K", std::f64::consts::E),
                    ("gamma", gamma),
                    ("threshold_j", tj as f64),
                    ("sup_ratio_tail", sup_ratio_tail),
                ]))
                .with_note("limsup phi(gamma+s)/phi(s) <= 2 < e beyond the threshold block"),
                _ => Verdict::inconclusive(sup_ratio_tail - 2.0).with_note("ratio not yet below 2 on the constructed blocks"),
            };
            Ok(GammaReport { gamma, j0, blocks, threshold_j, sup_ratio_tail, verdict })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_bounds_pass = reports.iter().all(|r| r.blocks.iter().all(|b| b.pass));
    Ok(SlowVariationReport { gammas: reports, all_bounds_pass })
}

/// Whether two constructions with different `δ` give non-equivalent weights.
///
/// The corners `x_j` do not depend on `δ`, and `φ_δ(x_j)/φ_δ'(x_j) = δ_j/δ'_j`.
/// Holds once one of the ratio sequences is strictly increasing over the
/// final third and passes [`NONEQUIVALENCE_THRESHOLD`]; a strictly increasing
/// ratio below the threshold is reported as an Inconclusive divergence trend.
pub fn nonequivalence(p: &CounterexampleProfile, q: &CounterexampleProfile) -> Result<Verdict> {
    if p.t1 != q.t1 || p.j_max != q.j_max || p.x != q.x {
        return Err(Error::MismatchedCorners);
    }
    let n = p.j_max + 1;
    let fwd: Vec<f64> = (0..n).map(|i| p.phi_x[i] / q.phi_x[i]).collect();
    let bwd: Vec<f64> = fwd.iter().map(|r| 1.0 / r).collect();
    let start = (2 * n) / 3;
    let increasing = |r: &[f64]| start >= 1 && r[start - 1..].windows(2).all(|w| w[1] > w[0]);
    let mut best: Option<(&str, &Vec<f64>)> = None;
    for (name, r) in [("delta/delta'", &fwd), ("delta'/delta", &bwd)] {
        if increasing(r) {
            best = Some((name, r));
        }
    }
    let sup = fwd.iter().chain(&bwd).copied().fold(0.0, f64::max);
    Ok(match best {
        Some((name, r)) => {
            let (i, &top) = r.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("nonempty");
            let cert = constants(&[("ratio_sup", top), ("binding_j", (i + 1) as f64), ("binding_x", p.x[i])]);
            if top >= NONEQUIVALENCE_THRESHOLD {
                Verdict::holds(cert).with_note(format!("{name} increasing and above the threshold"))
            } else {
                Verdict::inconclusive(NONEQUIVALENCE_THRESHOLD - top)
                    .with_note(format!("{name} strictly increasing over the final third (divergence trend), sup {top:.6}"))
            }
        }
        None => Verdict::fails(constants(&[("ratio_sup", sup)])).with_note("phi ratios bounded at the corners"),
    })
}

/// Whether a nonequivalence verdict carries the divergence-trend note.
pub fn has_divergence_trend(v: &Verdict) -> bool {
    v.is_holds() || (v.is_inconclusive() && v.note.contains("divergence trend"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateauGap {
    pub j: usize,
    /// Midpoint of `[x̄_j, y_j]`.
    pub u_plateau: f64,
    pub gap_plateau: f64,
    /// Midpoint of `[x_j, x̄_j]`.
    pub u_steep: f64,
    pub gap_steep: f64,
}

/// What the other modules say about the constructed weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossChecks {
    pub om4: Verdict,
    pub om4_at_first_plateau: bool,
    pub plateau_gaps: Vec<PlateauGap>,
    /// `min (φ - φ**)/max(φ, 1)` on the default grid.
    pub biconjugate_min_slack: f64,
    pub growth_gammas: Vec<f64>,
    pub growth_all_certified: bool,
    pub growth_lower_bound: Option<f64>,
    pub alpha0: Verdict,
}

/// Gaps are reported for blocks `1..=gap_blocks`.
pub fn cross_checks(p: &CounterexampleProfile, gammas: &[f64], gap_blocks: usize) -> Result<CrossChecks> {
    use crate::conditions::{check_condition, ConditionId};
    use crate::conjugate::{alpha0_minorant_check, double_conjugate, GapReport};
    use crate::growth::{default_ks, growth_index};

    let w = p.weight()?;
    let grid = w.default_grid();
    let om4 = check_condition(&w, ConditionId::Om4, &grid)?;
    let om4_at_first_plateau = om4.is_fails() && om4.wit("u") == Some(p.xbar[0]);
    let plateau_gaps = (1..=gap_blocks.min(p.j_max))
        .map(|j| {
            let i = j - 1;
            let u_plateau = 0.5 * (p.xbar[i] + p.y[i]);
            let u_steep = 0.5 * (p.x[i] + p.xbar[i]);
            Ok(PlateauGap {
                j,
                u_plateau,
                gap_plateau: GapReport::gap_at(&w, u_plateau)?,
                u_steep,
                gap_steep: GapReport::gap_at(&w, u_steep)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let gaps = double_conjugate(&w, &grid)?;
    let est = growth_index(&w, gammas, &default_ks(), &grid)?;
    let growth_all_certified = gammas.iter().all(|&g| est.certifies(g));
    let alpha0 = alpha0_minorant_check(&w, &grid)?;
    Ok(CrossChecks {
        om4,
        om4_at_first_plateau,
        plateau_gaps,
        biconjugate_min_slack: gaps.min_slack,
        growth_gammas: gammas.to_vec(),
        growth_all_certified,
        growth_lower_bound: est.lower_bound,
        alpha0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyConfig {
    pub t1: f64,
    pub j_max: usize,
    pub a_max: f64,
    pub gammas: Vec<f64>,
    pub gap_blocks: usize,
    /// Exponent of the comparison sequence `δ^α` for the non-equivalence check.
    pub alpha: f64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self { t1: 0.5, j_max: 60, a_max: 1024.0, gammas: vec![0.5, 1.0, 2.0, 5.0], gap_blocks: 10, alpha: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub config: CertifyConfig,
    pub profile: CounterexampleProfile,
    pub invariants: CertificateBundle,
    pub nonconvexity: Vec<LadderEntry>,
    pub nonconvexity_complete: bool,
    pub slow_variation: SlowVariationReport,
    pub nonequivalence: Verdict,
    pub nonequivalence_trend: bool,
    pub self_equivalence: Verdict,
    pub cross: CrossChecks,
    /// Everything except ladder rungs beyond the horizon passed.
    pub structural_pass: bool,
}

/// Runs every certificate on one construction.
pub fn certify_all(delta: &AdmissibleDelta, cfg: &CertifyConfig) -> Result<CertifyReport> {
    let p = construct(delta, cfg.t1, cfg.j_max)?;
    let invariants = verify_profile(&p)?;
    let nonconvexity = nonconvexity_scan(&p, cfg.a_max)?;
    let nonconvexity_complete = nonconvexity.iter().all(|e| e.witness.is_some());
    let slow_variation = slow_variation_certificate(&p, &cfg.gammas)?;
    let q = construct(&delta.power(cfg.alpha)?, cfg.t1, cfg.j_max)?;
    let nonequivalence = nonequivalence(&p, &q)?;
    let nonequivalence_trend = has_divergence_trend(&nonequivalence);
    let self_equivalence = self::nonequivalence(&p, &p)?;
    let cross = cross_checks(&p, &cfg.gammas, cfg.gap_blocks)?;
    let structural_pass = invariants.all_pass
        && slow_variation.all_bounds_pass
        && slow_variation.gammas.iter().all(|g| g.verdict.is_holds())
        && nonequivalence_trend
        && self_equivalence.is_fails()
        && cross.om4_at_first_plateau
        && cross.plateau_gaps.iter().all(|g| g.gap_plateau > 0.0)
        && cross.biconjugate_min_slack >= -1e-8;
    Ok(CertifyReport {
        config: cfg.clone(),
        profile: p,
        invariants,
        nonconvexity,
        nonconvexity_complete,
        slow_variation,
        nonequivalence,
        nonequivalence_trend,
        self_equivalence,
        cross,
        structural_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_profile(j: usize) -> CounterexampleProfile {
        construct(&AdmissibleDelta::default_formula(j + 1).unwrap(), 0.5, j).unwrap()
    }

    #[test]
    fn spot_values() {
        let p = default_profile(3);
        assert_eq!(p.x[0], 4.0);
        assert_eq!(p.t[1], 0.25);
        assert_eq!(p.y[0], 16.0);
        assert_eq!(p.x[1], 32.0);
        assert!((p.delta.get(1) - 0.761_4).abs() < 1e-4);
    }

    #[test]
    fn default_construction_verifies() {
        let p = default_profile(60);
        let b = verify_profile(&p).unwrap();
        assert!(b.all_pass, "{:?}", b.failed().collect::<Vec<_>>());
    }

    #[test]
    fn tampering_is_detected() {
        let mut p = default_profile(10);
        p.k[4] *= 1.0 + 1e-6;
        let b = verify_profile(&p).unwrap();
        assert!(!b.passes("k_closed_form"));
        let mut p = default_profile(10);
        p.t[2] = 1.0 / 3.0;
        assert!(!verify_profile(&p).unwrap().passes("t_below_1_over_j"));
    }

    #[test]
    fn overflow_reports_safe_j() {
        let d = AdmissibleDelta::default_formula(400).unwrap();
        match construct(&d, 0.5, 300) {
            Err(Error::OverflowAtJ { j, safe }) => assert_eq!(safe + 1, j),
            other => panic!("expected overflow, got {other:?}"),
        }
        assert!(max_safe_j(0.5).unwrap() >= 60);
    }

    #[test]
    fn small_a_witnesses() {
        let p = default_profile(60);
        let w = nonconvexity_certificate(&p, 16.0).unwrap();
        assert_eq!(w[0].j, 1);
        assert!(w.iter().all(|w| w.margin > 0.0));
        assert!(matches!(nonconvexity_certificate(&p, 1024.0), Err(Error::JHorizonTooSmall { .. })));
    }

    #[test]
    fn slow_variation_examples() {
        let p = default_profile(60);
        let r = slow_variation_certificate(&p, &[1.0, 5.0]).unwrap();
        assert!(r.all_bounds_pass);
        let g1 = &r.gammas[0];
        assert!(g1.verdict.is_holds());
        let b10 = g1.blocks.iter().find(|b| b.j == 10).unwrap();
        assert!(b10.case_i.0 <= 0.05);
        assert_eq!(r.gammas[1].j0, 5);
        assert!(matches!(slow_variation_certificate(&p, &[100.0]), Err(Error::GammaTooLarge { .. })));
    }

    #[test]
    fn increment_is_exact_across_corners() {
        let pr = Profile::new(&[(0.0, 0.0), (1.0, 2.0), (2.0, 2.0), (4.0, 3.0)]).unwrap();
        assert!((increment(&pr, 0.5, 2.0) - (pr.phi(2.5) - pr.phi(0.5))).abs() < 1e-15);
        assert!((increment(&pr, 3.0, 5.0) - (pr.phi(8.0) - pr.phi(3.0))).abs() < 1e-15);
    }

    #[test]
    fn cross_module_checks() {
        let p = default_profile(60);
        let c = cross_checks(&p, &[0.5, 1.0, 2.0, 5.0], 10).unwrap();
        assert!(c.om4_at_first_plateau, "{:?}", c.om4);
        assert!(c.plateau_gaps.iter().all(|g| g.gap_plateau > 0.0 && g.gap_steep > 0.0), "{:?}", c.plateau_gaps);
        assert!(c.biconjugate_min_slack >= -1e-8);
        assert!(c.growth_all_certified, "{:?}", c.growth_lower_bound);
        assert!(!c.alpha0.is_fails());
    }

    #[test]
    fn certify_all_lists_uncertified_rungs() {
        let d = AdmissibleDelta::default_formula(61).unwrap();
        let r = certify_all(&d, &CertifyConfig::default()).unwrap();
        assert!(r.structural_pass);
        let missing: Vec<f64> = r.nonconvexity.iter().filter(|e| e.witness.is_none()).map(|e| e.a).collect();
        assert_eq!(missing, vec![128.0, 256.0, 512.0, 1024.0]);
    }

    #[test]
    fn nonequivalence_examples() {
        let d = AdmissibleDelta::default_formula(61).unwrap();
        let p = construct(&d, 0.5, 60).unwrap();
        let q = construct(&d.power(0.5).unwrap(), 0.5, 60).unwrap();
        let v = nonequivalence(&p, &q).unwrap();
        assert!(v.is_inconclusive() && has_divergence_trend(&v), "{v:?}");
        assert!(nonequivalence(&p, &p).unwrap().is_fails());
        let r = construct(&d, 0.25, 60).unwrap();
        assert!(matches!(nonequivalence(&p, &r), Err(Error::MismatchedCorners)));
    }
}

//! The `κ_ω` transform, the growth index `γ(ω)` and slow variation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSpec, WindowSups, RATIO_TREND_TOL};
use crate::quad;
use crate::verdict::{constants, Constants, Verdict};
use crate::weight::WeightFunction;

pub const DEFAULT_GAMMAS: [f64; 8] = [0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0];
pub const DEFAULT_KAPPA_HORIZON: f64 = 1e6;
pub const SLOW_VARIATION_TOL: f64 = 0.05;

/// `K ∈ {e} ∪ {2^k : k = 1..6}`.
pub fn default_ks() -> Vec<f64> {
    let mut ks = vec![std::f64::consts::E];
    ks.extend((1..=6).map(|k| 2f64.powi(k)));
    ks
}

const CERTIFY_SLACK: f64 = 1e-3;
const REFUTE_SLACK: f64 = 1e-9;
const BISECTION_REL: f64 = 0.005;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kappa {
    /// `value` includes the upper tail estimate `tail_hi`.
    Finite { value: f64, tail_lo: f64, tail_hi: f64, error: f64, exact: bool },
    Divergent { evidence: String },
}

impl Kappa {
    pub fn value(&self) -> Option<f64> {
        match self {
            Kappa::Finite { value, .. } => Some(*value),
            Kappa::Divergent { .. } => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, Kappa::Divergent { .. })
    }
}

/// `κ_ω(y) = ∫_1^∞ ω(yt)/t² dt`, integrating to `T = horizon` and bounding the rest.
pub fn kappa(w: &WeightFunction, y: f64, horizon: f64) -> Result<Kappa> {
    if !(y >= 0.0) {
        return Err(Error::InvalidArgument(format!("kappa needs y >= 0 (got {y})")));
    }
    if !(horizon > 1.0) {
        return Err(Error::InvalidArgument("kappa horizon must exceed 1".into()));
    }
    kappa_log(w, y.ln(), horizon.ln())
}

/// `κ_ω(e^v) = ∫_0^∞ φ(v + s) e^{-s} ds` with the quadrature cut at `s = s_max`.
pub fn kappa_log(w: &WeightFunction, v: f64, s_max: f64) -> Result<Kappa> {
    if v == f64::NEG_INFINITY {
        let value = w.evaluate(0.0)?;
        return Ok(Kappa::Finite { value, tail_lo: 0.0, tail_hi: 0.0, error: 0.0, exact: true });
    }
    if let Some(p) = w.as_profile() {
        let value = p.exp_moment(v);
        return Ok(Kappa::Finite { value, tail_lo: 0.0, tail_hi: 0.0, error: 0.0, exact: true });
    }
    let phi = |s: f64| -> Result<Option<f64>> {
        match w.phi(v + s) {
            Ok(x) => Ok(Some(x)),
            Err(Error::NonFinite(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let overflow = || Kappa::Divergent { evidence: format!("weight overflows on [y, yT] for ln y = {v}") };

    // Decay test on the top decade: ω(yt)/t must eventually decrease.
    let probe: Vec<f64> = (0..=20).map(|i| s_max - std::f64::consts::LN_10 * (1.0 - i as f64 / 20.0)).collect();
    let mut g = Vec::with_capacity(probe.len());
    for &s in &probe {
        match phi(s)? {
            Some(x) => g.push(x * (-s).exp()),
            None => return Ok(overflow()),
        }
    }
    if g[20] > 0.0 && g.windows(2).all(|p| p[1] >= p[0] * (1.0 - 1e-12)) {
        return Ok(Kappa::Divergent {
            evidence: format!("omega(yt)/t is nondecreasing over the top decade (ln y = {v})"),
        });
    }
    let (Some(top), Some(below)) = (phi(s_max)?, phi(s_max - 1.0)?) else {
        return Ok(overflow());
    };
    let slope = if top == 0.0 {
        0.0
    } else if below > 0.0 {
        (top / below).ln().max(0.0)
    } else {
        1.0
    };
    if slope >= 1.0 {
        return Ok(Kappa::Divergent { evidence: format!("local growth exponent {slope:.4} >= 1 at the horizon") });
    }
    let mut overflowed = false;
    let r = quad::integrate(
        |s: f64| match phi(s)? {
            Some(x) => Ok(x * (-s).exp()),
            None => {
                overflowed = true;
                Ok(0.0)
            }
        },
        0.0,
        s_max,
        1e-12,
        1e-9,
        4000,
    )?;
    if overflowed {
        return Ok(overflow());
    }
    let tail_lo = top * (-s_max).exp();
    let tail_hi = tail_lo / (1.0 - slope);
    Ok(Kappa::Finite { value: r.value + tail_hi, tail_lo, tail_hi, error: r.error, exact: false })
}

/// Checks `κ_ω ≤ Cω + C` and `ω ≤ Cκ_ω + C` on the points of `y_grid`.
pub fn kappa_equivalence_check(w: &WeightFunction, y_grid: &GridSpec, horizon: f64) -> Result<Verdict> {
    let s_max = horizon.ln();
    let sampled = w.sample(y_grid)?;
    let ks: Vec<Result<Kappa>> = sampled.us.par_iter().map(|&u| kappa_log(w, u, s_max)).collect();
    let mut kappas = Vec::with_capacity(ks.len());
    for (i, k) in ks.into_iter().enumerate() {
        match k {
            Ok(Kappa::Finite { value, .. }) => kappas.push(value),
            Ok(Kappa::Divergent { evidence }) => {
                let u = sampled.us[i];
                return Ok(Verdict::fails(constants(&[("ln_y", u), ("y", u.exp())]))
                    .with_horizon(sampled.grid)
                    .with_note(format!("kappa diverges: {evidence}")));
            }
            Err(Error::HorizonTooSmall(_)) | Err(Error::NonFinite(_)) => break,
            Err(e) => return Err(e),
        }
    }
    let n = kappas.len();
    let grid = sampled.grid.truncated(n)?;
    let phis = &sampled.phis[..n];
    if w.is_nondecreasing() {
        for i in 0..n {
            if kappas[i] < phis[i] * (1.0 - 1e-8) - 1e-12 {
                return Err(Error::Inconsistency(format!(
                    "kappa ({}) below omega ({}) at ln y = {} for a nondecreasing weight",
                    kappas[i], phis[i], sampled.us[i]
                )));
            }
        }
    }
    let upper: Vec<f64> = (0..n).map(|i| kappas[i] / (phis[i] + 1.0)).collect();
    let lower: Vec<f64> = (0..n).map(|i| phis[i] / (kappas[i] + 1.0)).collect();
    let ws = WindowSups::new(&grid, &upper)?;
    let c = upper.iter().chain(&lower).fold(1.0f64, |a, &b| a.max(b));
    if ws.ratio_bounded() {
        Ok(Verdict::holds(constants(&[("C", c), ("sup_top", ws.top), ("sup_prev", ws.prev)]))
            .with_horizon(grid)
            .with_note("kappa <= C omega + C and omega <= C kappa + C on the grid"))
    } else {
        Ok(Verdict::inconclusive(ws.growth() - 1.0)
            .with_horizon(grid)
            .with_note(format!("kappa/(omega+1) grows from {} to {} across the top decades", ws.prev, ws.top)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PStatus {
    Certified,
    Refuted,
    Open,
}

/// One `(γ, K)` evaluation of `sup ω(K^γ t)/ω(t)` over the two top windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexRow {
    pub gamma: f64,
    pub k: f64,
    pub sup_prev: f64,
    pub sup_top: f64,
    pub status: PStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexEstimate {
    /// Largest `γ` with `(P_γ)` certified for some `K`.
    pub lower_bound: Option<f64>,
    /// Smallest `γ` refuted for every tested `K`.
    pub upper_bound: Option<f64>,
    /// Every tested `γ` certified (evidence for `γ(ω) = ∞`).
    pub all_certified: bool,
    /// `K` with the most slack for each certified `γ` of the scan.
    pub best_k: Vec<(f64, f64)>,
    pub rows: Vec<IndexRow>,
    pub bisection_steps: usize,
    pub horizon: GridSpec,
    pub policy: String,
}

impl IndexEstimate {
    pub fn certifies(&self, gamma: f64) -> bool {
        self.rows.iter().any(|r| r.gamma == gamma && r.status == PStatus::Certified)
    }
}

struct IndexProbe<'a> {
    w: &'a WeightFunction,
    us: Vec<f64>,
    phis: Vec<f64>,
    grid: GridSpec,
    range: std::ops::Range<usize>,
}

impl IndexProbe<'_> {
    fn row(&self, gamma: f64, k: f64) -> Result<IndexRow> {
        let shift = gamma * k.ln();
        let r = self.range.clone();
        let ratios: Vec<Result<f64>> = self.us[r.clone()]
            .par_iter()
            .zip(self.phis[r.clone()].par_iter())
            .map(|(&u, &d)| {
                let num = match self.w.phi(u + shift) {
                    Ok(x) => x,
                    Err(Error::NonFinite(_)) => f64::INFINITY,
                    Err(e) => return Err(e),
                };
                Ok(if d > 0.0 {
                    num / d
                } else if num > 0.0 {
                    f64::INFINITY
                } else {
                    1.0
                })
            })
            .collect();
        let mut full = vec![f64::NEG_INFINITY; self.us.len()];
        for (slot, v) in full[r].iter_mut().zip(ratios) {
            *slot = v?;
        }
        let ratios = full;
        let ws = WindowSups::new(&self.grid, &ratios)?;
        let (s0, s1) = (ws.prev, ws.top);
        let status = if s0.max(s1) < k * (1.0 - CERTIFY_SLACK) && ((s1 - s0).abs() <= RATIO_TREND_TOL * s0 || s1 <= s0) {
            PStatus::Certified
        } else if s1 >= k * (1.0 - REFUTE_SLACK) {
            PStatus::Refuted
        } else {
            PStatus::Open
        };
        Ok(IndexRow { gamma, k, sup_prev: s0, sup_top: s1, status })
    }

    fn classify(&self, gamma: f64, ks: &[f64]) -> Result<(PStatus, Vec<IndexRow>)> {
        let rows = ks.iter().map(|&k| self.row(gamma, k)).collect::<Result<Vec<_>>>()?;
        let status = if rows.iter().any(|r| r.status == PStatus::Certified) {
            PStatus::Certified
        } else if rows.iter().all(|r| r.status == PStatus::Refuted) {
            PStatus::Refuted
        } else {
            PStatus::Open
        };
        Ok((status, rows))
    }
}

/// Estimates `γ(ω) = sup{γ : limsup ω(K^γ t)/ω(t) < K for some K > 1}`.
///
/// The limsup is replaced by the sup over the top decade window of `grid`,
/// which must agree with the previous window within 1%. After the scan the
/// bracket between the largest certified and the smallest refuted `γ` is
/// bisected.
pub fn growth_index(w: &WeightFunction, gammas: &[f64], ks: &[f64], grid: &GridSpec) -> Result<IndexEstimate> {
    if !w.is_nondecreasing() {
        return Err(Error::NonMonotoneInput("growth index".into()));
    }
    if gammas.is_empty() || ks.is_empty() {
        return Err(Error::EmptyInput);
    }
    if gammas.iter().any(|&g| !(g > 0.0)) || ks.iter().any(|&k| !(k > 1.0)) {
        return Err(Error::InvalidArgument("gammas must be > 0 and K > 1".into()));
    }
    let sampled = w.sample(grid)?;
    let (prev, top) = sampled.grid.windows()?;
    let range = prev.start..top.end;
    let probe = IndexProbe { w, us: sampled.us.clone(), phis: sampled.phis.clone(), grid: sampled.grid, range };
    let mut gs = gammas.to_vec();
    gs.sort_by(f64::total_cmp);
    gs.dedup();

    let mut rows = Vec::new();
    let mut best_k = Vec::new();
    let mut lower: Option<f64> = None;
    let mut upper: Option<f64> = None;
    let mut all_certified = true;
    for &g in &gs {
        let (status, rs) = probe.classify(g, ks)?;
        match status {
            PStatus::Certified => {
                lower = Some(lower.map_or(g, |l: f64| l.max(g)));
                let best = rs
                    .iter()
                    .filter(|r| r.status == PStatus::Certified)
                    .max_by(|a, b| (a.sup_top / a.k).total_cmp(&(b.sup_top / b.k)).reverse())
                    .expect("certified row exists");
                best_k.push((g, best.k));
            }
            PStatus::Refuted => {
                all_certified = false;
                upper = Some(upper.map_or(g, |u: f64| u.min(g)));
            }
            PStatus::Open => all_certified = false,
        }
        rows.extend(rs);
    }
    if let (Some(l), Some(u)) = (lower, upper) {
        if l > u {
            return Err(Error::Inconsistency(format!("(P_gamma) certified at {l} but refuted at {u}")));
        }
    }

    let mut steps = 0;
    if let (Some(mut lo), Some(mut hi)) = (lower, upper) {
        while (hi - lo) / hi > BISECTION_REL && steps < 60 {
            let mid = 0.5 * (lo + hi);
            let (status, _) = probe.classify(mid, ks)?;
            steps += 1;
            match status {
                PStatus::Certified => lo = mid,
                PStatus::Refuted => hi = mid,
                PStatus::Open => break,
            }
        }
        lower = Some(lo);
        upper = Some(hi);
    }

    Ok(IndexEstimate {
        lower_bound: lower,
        upper_bound: upper,
        all_certified,
        best_k,
        rows,
        bisection_steps: steps,
        horizon: sampled.grid,
        policy: format!(
            "limsup = sup over the top decade; certified if < K(1-{CERTIFY_SLACK}) and the two top decades \
             agree within {RATIO_TREND_TOL}; refuted if >= K(1-{REFUTE_SLACK})"
        ),
    })
}

/// `|ω(ct)/ω(t) - 1|` over the top windows for each factor `c`.
///
/// Holds when the deviation is within `tol` and not growing, or when it
/// decays across the two top decades. Fails when it exceeds `tol` without
/// decaying.
pub fn slowly_varying_check(w: &WeightFunction, factors: &[f64], grid: &GridSpec, tol: f64) -> Result<Verdict> {
    if factors.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sampled = w.sample(grid)?;
    let (prev, top) = sampled.grid.windows()?;
    let mut cert = Constants::new();
    let mut inconclusive: Option<f64> = None;
    for &c in factors {
        if !(c > 0.0) {
            return Err(Error::InvalidArgument("dilation factors must be positive".into()));
        }
        let range = prev.start..top.end;
        let mut dev = vec![0.0; sampled.us.len()];
        for i in range {
            let d = sampled.phis[i];
            let num = match w.phi(sampled.us[i] + c.ln()) {
                Ok(x) => x,
                Err(Error::NonFinite(_)) => f64::INFINITY,
                Err(e) => return Err(e),
            };
            dev[i] = if d > 0.0 { (num / d - 1.0).abs() } else { f64::INFINITY };
        }
        let ws = WindowSups::new(&sampled.grid, &dev)?;
        let decaying = ws.top <= ws.prev * (1.0 - RATIO_TREND_TOL);
        if (ws.top <= tol && ws.top <= ws.prev * (1.0 + RATIO_TREND_TOL)) || decaying {
            cert.insert(format!("dev_top[{c}]"), ws.top);
        } else if ws.top > tol && ws.top >= ws.prev * (1.0 - RATIO_TREND_TOL) {
            let u = sampled.us[ws.top_arg];
            return Ok(Verdict::fails(constants(&[("factor", c), ("u", u), ("deviation", ws.top)]))
                .with_horizon(sampled.grid)
                .with_note(format!("omega(ct)/omega(t) stays away from 1 for c = {c}")));
        } else {
            let m = ws.top - tol;
            inconclusive = Some(inconclusive.map_or(m, |x: f64| x.max(m)));
        }
    }
    let v = match inconclusive {
        Some(m) => Verdict::inconclusive(m),
        None => Verdict::holds(cert),
    };
    Ok(v.with_horizon(sampled.grid)
        .with_note(format!("top-decade deviation tolerance {tol}, or decay across the top two decades")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pw(a: f64) -> WeightFunction {
        WeightFunction::power(a).unwrap()
    }

    #[test]
    fn kappa_power_half() {
        for (y, want) in [(1.0, 2.0), (4.0, 4.0), (100.0, 20.0)] {
            let v = kappa(&pw(0.5), y, 1e6).unwrap().value().unwrap();
            assert!((v / want - 1.0).abs() < 1e-6, "y={y}: {v}");
        }
    }

    #[test]
    fn kappa_power_one_diverges() {
        for y in [0.5, 1.0, 10.0] {
            assert!(kappa(&pw(1.0), y, 1e6).unwrap().is_divergent());
        }
        assert!(kappa(&WeightFunction::exp(), 1.0, 1e6).unwrap().is_divergent());
    }

    #[test]
    fn kappa_at_zero_is_omega_at_zero() {
        assert_eq!(kappa(&pw(0.5), 0.0, 1e6).unwrap().value(), Some(0.0));
    }

    #[test]
    fn kappa_profile_is_exact() {
        let w = WeightFunction::profile(&[(0.0, 0.0), (1.0, 0.5), (4.0, 2.0)]).unwrap();
        let k = kappa(&w, 1.0, 1e6).unwrap();
        assert!(matches!(k, Kappa::Finite { exact: true, .. }));
    }

    #[test]
    fn kappa_equivalence_power_half() {
        let g = GridSpec::logarithmic(1e-2, 1e6, 401).unwrap();
        let v = kappa_equivalence_check(&pw(0.5), &g, 1e6).unwrap();
        assert!(v.is_holds());
        let c = v.cert("C").unwrap();
        assert!(c > 1.9 && c <= 2.0 + 1e-6, "C = {c}");
        assert!(kappa_equivalence_check(&pw(1.0), &g, 1e6).unwrap().is_fails());
    }

    #[test]
    fn index_of_powers() {
        let g = GridSpec::logarithmic(1.0, 1e8, 2001).unwrap();
        for a in [1.0 / 3.0, 0.5, 1.0] {
            let est = growth_index(&pw(a), &DEFAULT_GAMMAS, &default_ks(), &g).unwrap();
            let (lo, hi) = (est.lower_bound.unwrap(), est.upper_bound.unwrap());
            assert!(lo <= 1.0 / a && 1.0 / a <= hi * (1.0 + 1e-12), "{a}: [{lo}, {hi}]");
            assert!((hi - lo) / hi < 0.05);
            assert!(!est.all_certified);
        }
    }

    #[test]
    fn index_of_log_is_unbounded() {
        let g = GridSpec::logarithmic(1.0, 1e8, 2001).unwrap();
        let est = growth_index(&WeightFunction::log(), &DEFAULT_GAMMAS, &default_ks(), &g).unwrap();
        assert!(est.all_certified);
        assert_eq!(est.upper_bound, None);
    }

    #[test]
    fn slow_variation_examples() {
        let g = GridSpec::logarithmic(1e-3, 1e6, 2001).unwrap();
        assert!(slowly_varying_check(&WeightFunction::log(), &[10.0], &g, SLOW_VARIATION_TOL).unwrap().is_holds());
        assert!(slowly_varying_check(&pw(0.5), &[4.0], &g, SLOW_VARIATION_TOL).unwrap().is_fails());
    }
}

//! Young conjugates `φ*(x) = sup_y (xy - φ(y))`, biconjugates, associated
//! weight matrices and the concave/convex hull helpers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditions::{self, ConditionId};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::verdict::{constants, Verdict};
use crate::weight::{Profile, WeightFunction};

const Y_POINTS: usize = 4001;
const GOLDEN_ITERS: usize = 90;
const BICONJ_TOL: f64 = 1e-8;
const CONVEX_GAP_TOL: f64 = 1e-6;

/// Cross-product sign of `o→a` and `o→b`.
/// Same sign as the cross product `(a - o) × (b - o)` for `o.0 < a.0 < b.0`, but
/// built from slopes so that coordinates near `1e200` do not overflow.
fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (b.1 - o.1) / (b.0 - o.0) - (a.1 - o.1) / (a.0 - o.0)
}

/// Lower convex hull of points sorted by strictly increasing abscissa.
fn lower_hull(pts: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut h: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for &p in pts {
        while h.len() >= 2 && cross(h[h.len() - 2], h[h.len() - 1], p) <= 0.0 {
            h.pop();
        }
        h.push(p);
    }
    h
}

fn upper_hull(pts: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut h: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for &p in pts {
        while h.len() >= 2 && cross(h[h.len() - 2], h[h.len() - 1], p) >= 0.0 {
            h.pop();
        }
        h.push(p);
    }
    h
}

/// Piecewise-linear function through `knots`, extended linearly on both sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    pub knots: Vec<(f64, f64)>,
    pub left_slope: f64,
    pub right_slope: f64,
}

impl PiecewiseLinear {
    fn from_hull(h: Vec<(f64, f64)>) -> Self {
        let slope = |a: (f64, f64), b: (f64, f64)| (b.1 - a.1) / (b.0 - a.0);
        let (left_slope, right_slope) = if h.len() >= 2 {
            (slope(h[0], h[1]), slope(h[h.len() - 2], h[h.len() - 1]))
        } else {
            (0.0, 0.0)
        };
        Self { knots: h, left_slope, right_slope }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let k = &self.knots;
        let first = k[0];
        let last = k[k.len() - 1];
        if t <= first.0 {
            return first.1 + self.left_slope * (t - first.0);
        }
        if t >= last.0 {
            return last.1 + self.right_slope * (t - last.0);
        }
        let i = k.partition_point(|p| p.0 <= t) - 1;
        let (a, b) = (k[i], k[i + 1]);
        a.1 + (b.1 - a.1) * (t - a.0) / (b.0 - a.0)
    }
}

fn check_samples(samples: &[(f64, f64)]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::InvalidArgument("sample abscissas must strictly increase".into()));
    }
    if samples.iter().any(|p| !p.1.is_finite() || !p.0.is_finite()) {
        return Err(Error::InvalidArgument("samples must be finite".into()));
    }
    Ok(())
}

/// Upper concave hull of the samples, extended with its end slopes.
pub fn least_concave_majorant(samples: &[(f64, f64)]) -> Result<PiecewiseLinear> {
    check_samples(samples)?;
    Ok(PiecewiseLinear::from_hull(upper_hull(samples)))
}

/// Lower convex hull of the samples, extended with its end slopes.
pub fn largest_convex_minorant(samples: &[(f64, f64)]) -> Result<PiecewiseLinear> {
    check_samples(samples)?;
    Ok(PiecewiseLinear::from_hull(lower_hull(samples)))
}

/// `ω^ι(t) = ω(1/t)`.
pub fn omega_iota(w: &WeightFunction, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("omega_iota needs t > 0 (got {t})")));
    }
    w.evaluate(1.0 / t)
}

/// `φ*(x)` sampled at one point, with the maximizing `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugateSample {
    pub x: f64,
    pub value: f64,
    pub argmax: f64,
}

/// Convex piecewise-linear representation `φ*(x) = max_i (x y_i - φ(y_i))` on `[0, x_max]`.
///
/// For profiles the support points are the vertices of the convex envelope of
/// `φ` and the representation is exact. Otherwise they are the maximizers found
/// at the sample abscissas and `value_at` is a lower bound between samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugateProfile {
    pub support: Vec<(f64, f64)>,
    pub x_max: f64,
    pub exact: bool,
    /// `φ` is not convex, so this is the conjugate of its convex envelope.
    pub envelope: bool,
    pub samples: Vec<ConjugateSample>,
}

impl ConjugateProfile {
    pub fn value_at(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Err(Error::InvalidArgument("conjugate is evaluated on [0, inf)".into()));
        }
        if self.exact && x > self.x_max {
            return Err(Error::Om3Violated(x));
        }
        Ok(self.support.iter().map(|&(y, v)| x * y - v).fold(f64::NEG_INFINITY, f64::max))
    }

    pub fn value_at_zero(&self) -> f64 {
        self.value_at(0.0).expect("0 is in the domain")
    }

    /// Abscissas where the active support point changes, with the slope to the right.
    pub fn breakpoints(&self) -> Vec<(f64, f64)> {
        let s = &self.support;
        (1..s.len())
            .map(|i| ((s[i].1 - s[i - 1].1) / (s[i].0 - s[i - 1].0), s[i].0))
            .filter(|(x, _)| *x >= 0.0 && *x <= self.x_max)
            .collect()
    }
}

/// Convex envelope of a profile: hull vertices and the slope of the final ray.
pub fn profile_envelope(p: &Profile) -> (Vec<(f64, f64)>, f64) {
    let pts: Vec<(f64, f64)> = p.corners().collect();
    let m = p.final_slope();
    let mut h = lower_hull(&pts);
    // A far point on the final ray removes vertices whose incoming slope exceeds m.
    while h.len() >= 2 {
        let (a, b) = (h[h.len() - 2], h[h.len() - 1]);
        if (b.1 - a.1) / (b.0 - a.0) >= m {
            h.pop();
        } else {
            break;
        }
    }
    (h, m)
}

fn envelope_eval(hull: &[(f64, f64)], m: f64, u: f64) -> f64 {
    if u <= hull[0].0 {
        return hull[0].1;
    }
    let last = hull[hull.len() - 1];
    if u >= last.0 {
        return last.1 + m * (u - last.0);
    }
    let i = hull.partition_point(|p| p.0 <= u) - 1;
    let (a, b) = (hull[i], hull[i + 1]);
    if u == a.0 {
        return a.1;
    }
    a.1 + (b.1 - a.1) / (b.0 - a.0) * (u - a.0)
}

/// Shared `y`-grid for the numeric conjugate.
struct YGrid<'a> {
    w: &'a WeightFunction,
    ys: Vec<f64>,
    phis: Vec<f64>,
}

impl<'a> YGrid<'a> {
    fn new(w: &'a WeightFunction, x_max: f64) -> Result<Self> {
        let y_max = 3.0 * x_max.max(std::f64::consts::E).ln() + 50.0;
        let y_min = if w.is_normalized() { 0.0 } else { -y_max };
        let step = (y_max - y_min) / (Y_POINTS - 1) as f64;
        let ys: Vec<f64> = (0..Y_POINTS).map(|i| y_min + step * i as f64).collect();
        let phis = ys
            .par_iter()
            .map(|&y| match w.phi(y) {
                Ok(v) => Ok(v),
                // Overflow: the term xy - φ(y) is -inf there.
                Err(Error::NonFinite(_)) | Err(Error::HorizonTooSmall(_)) => Ok(f64::INFINITY),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self { w, ys, phis })
    }

    fn objective(&self, x: f64, y: f64) -> f64 {
        match self.w.phi(y) {
            Ok(v) => x * y - v,
            Err(_) => f64::NEG_INFINITY,
        }
    }

    fn eval(&self, x: f64) -> Result<ConjugateSample> {
        let n = self.ys.len();
        let (mut j, mut best) = (0, f64::NEG_INFINITY);
        for i in 0..n {
            let v = x * self.ys[i] - self.phis[i];
            if v > best {
                best = v;
                j = i;
            }
        }
        if j == n - 1 {
            return Err(Error::YHorizonTooSmall(x));
        }
        let lo = self.ys[j.saturating_sub(1)];
        let hi = self.ys[j + 1];
        let (y, v) = golden_max(|y| self.objective(x, y), lo, hi);
        let (argmax, value) = if v > best { (y, v) } else { (self.ys[j], best) };
        Ok(ConjugateSample { x, value, argmax })
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

fn om3_precheck(w: &WeightFunction, x: f64) -> Result<()> {
    if let Some(f) = w.equivalent_family() {
        if !conditions::family_table(f, ConditionId::Om3) {
            return Err(Error::Om3Violated(x));
        }
    }
    Ok(())
}

/// Default abscissas: `0` and a geometric grid up to `x_max`.
pub fn default_x_grid(x_max: f64, n: usize) -> Vec<f64> {
    let lo = (x_max * 1e-4).min(1e-3);
    let mut xs = vec![0.0];
    let step = (x_max / lo).ln() / (n - 1) as f64;
    xs.extend((0..n).map(|i| if i + 1 == n { x_max } else { lo * (step * i as f64).exp() }));
    xs
}

/// `φ*` on `[0, x_max]`.
pub fn young_conjugate(w: &WeightFunction, x_max: f64) -> Result<ConjugateProfile> {
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::InvalidArgument("x_max must be positive".into()));
    }
    if let Some(p) = w.as_profile() {
        let (hull, m) = profile_envelope(p);
        if x_max > m {
            return Err(Error::Om3Violated(x_max));
        }
        let envelope = !conditions::check_condition(w, ConditionId::Om4, &w.default_grid())?.is_holds();
        let mut c = ConjugateProfile { support: hull, x_max: m, exact: true, envelope, samples: Vec::new() };
        let xs = default_x_grid(x_max, 401);
        c.samples = xs
            .iter()
            .map(|&x| {
                let (y, v) = c
                    .support
                    .iter()
                    .map(|&(y, v)| (y, x * y - v))
                    .fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
                ConjugateSample { x, value: v, argmax: y }
            })
            .collect();
        return Ok(c);
    }
    young_conjugate_on(w, &default_x_grid(x_max, 1001))
}

/// Numeric `φ*` at the given abscissas (non-profile weights, or any weight
/// when exactness is not needed).
pub fn young_conjugate_on(w: &WeightFunction, xs: &[f64]) -> Result<ConjugateProfile> {
    if xs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if xs.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
        return Err(Error::InvalidArgument("conjugate abscissas must lie in [0, inf)".into()));
    }
    let x_max = xs.iter().copied().fold(0.0, f64::max);
    om3_precheck(w, x_max)?;
    if let Some(p) = w.as_profile() {
        if x_max > p.final_slope() {
            return Err(Error::Om3Violated(x_max));
        }
    }
    let yg = YGrid::new(w, x_max)?;
    let samples = xs.par_iter().map(|&x| yg.eval(x)).collect::<Result<Vec<_>>>()?;
    let mut support: Vec<(f64, f64)> = Vec::with_capacity(samples.len());
    for s in &samples {
        support.push((s.argmax, s.argmax * s.x - s.value));
    }
    support.sort_by(|a, b| a.0.total_cmp(&b.0));
    support.dedup_by(|a, b| a.0 == b.0);
    let envelope = match w.equivalent_family() {
        Some(_) if w.underlying_family().is_some() => false,
        _ => !conditions::check_condition(w, ConditionId::Om4, &w.default_grid())
            .map(|v| v.is_holds())
            .unwrap_or(false),
    };
    Ok(ConjugateProfile { support, x_max, exact: false, envelope, samples })
}

/// `φ*(x)` at a single point.
pub fn young_conjugate_at(w: &WeightFunction, x: f64) -> Result<ConjugateSample> {
    if !(x >= 0.0) {
        return Err(Error::InvalidArgument("conjugate is evaluated on [0, inf)".into()));
    }
    if let Some(p) = w.as_profile() {
        let (hull, m) = profile_envelope(p);
        if x > m {
            return Err(Error::Om3Violated(x));
        }
        let (argmax, value) =
            hull.iter().map(|&(y, v)| (y, x * y - v)).fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        return Ok(ConjugateSample { x, value, argmax });
    }
    om3_precheck(w, x)?;
    YGrid::new(w, x.max(1.0))?.eval(x)
}

/// `φ**` on a grid together with the gap `φ - φ**`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub us: Vec<f64>,
    pub phi: Vec<f64>,
    pub biconjugate: Vec<f64>,
    pub max_gap: f64,
    pub argmax_u: f64,
    /// `min (φ - φ**)`; never below `-1e-8` relative.
    pub min_slack: f64,
    /// Gap below `1e-6` relative everywhere.
    pub convex: bool,
    pub exact: bool,
}

impl GapReport {
    /// Gap at an arbitrary `u` for profile inputs.
    pub fn gap_at(w: &WeightFunction, u: f64) -> Result<f64> {
        let p = w.as_profile().ok_or_else(|| Error::InvalidArgument("gap_at needs a profile".into()))?;
        let (hull, m) = profile_envelope(p);
        Ok(p.phi(u) - envelope_eval(&hull, m, u))
    }
}

/// `φ** (u) = sup_x (xu - φ*(x))` on the points of `u_grid`.
pub fn double_conjugate(w: &WeightFunction, u_grid: &GridSpec) -> Result<GapReport> {
    let sampled = w.sample(u_grid)?;
    let us = sampled.us;
    let phi = sampled.phis;
    let exact = w.as_profile().is_some();
    let bi: Vec<f64> = if let Some(p) = w.as_profile() {
        let (hull, m) = profile_envelope(p);
        us.iter().map(|&u| envelope_eval(&hull, m, u)).collect()
    } else {
        numeric_biconjugate(w, &us, &phi)?
    };
    let mut max_gap = f64::NEG_INFINITY;
    let mut argmax_u = us[0];
    let mut min_slack = f64::INFINITY;
    let mut convex = true;
    for i in 0..us.len() {
        let scale = phi[i].abs().max(1.0);
        let gap = phi[i] - bi[i];
        if gap < -BICONJ_TOL * scale {
            return Err(Error::Inconsistency(format!(
                "biconjugate exceeds phi by {} at u = {}",
                -gap, us[i]
            )));
        }
        if gap > max_gap {
            max_gap = gap;
            argmax_u = us[i];
        }
        min_slack = min_slack.min(gap / scale);
        if gap > CONVEX_GAP_TOL * scale {
            convex = false;
        }
    }
    Ok(GapReport { us, phi, biconjugate: bi, max_gap, argmax_u, min_slack, convex, exact })
}

fn numeric_biconjugate(w: &WeightFunction, us: &[f64], phi: &[f64]) -> Result<Vec<f64>> {
    // Slopes of φ bound the x that can matter.
    let n = us.len();
    let finite: Vec<usize> = (0..n).filter(|&i| us[i].is_finite()).collect();
    let (a, b) = (finite[finite.len() - 2], finite[finite.len() - 1]);
    let top_slope = ((phi[b] - phi[a]) / (us[b] - us[a])).max(0.0);
    let x_max = 2.0 * top_slope + 1.0;
    om3_precheck(w, x_max)?;
    let xs = default_x_grid(x_max, 2001);
    let yg = YGrid::new(w, x_max)?;
    let conj = xs.par_iter().map(|&x| yg.eval(x)).collect::<Result<Vec<_>>>()?;
    let star = |x: f64| -> f64 {
        match yg.eval(x) {
            Ok(s) => s.value,
            Err(_) => f64::INFINITY,
        }
    };
    us.par_iter()
        .map(|&u| {
            if !u.is_finite() {
                return Ok(0.0f64.max(-conj[0].value));
            }
            let (mut j, mut best) = (0, f64::NEG_INFINITY);
            for (i, c) in conj.iter().enumerate() {
                let v = c.x * u - c.value;
                if v > best {
                    best = v;
                    j = i;
                }
            }
            let lo = xs[j.saturating_sub(1)];
            let hi = xs[(j + 1).min(xs.len() - 1)];
            let (_, v) = golden_max(|x| x * u - star(x), lo, hi);
            Ok(best.max(v))
        })
        .collect()
}

/// `log W^(ℓ)_j = φ*(ℓj)/ℓ` for `j = 0..=j_max`.
pub fn associated_weight_matrix(w: &WeightFunction, ell: f64, j_max: usize) -> Result<Vec<f64>> {
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(Error::InvalidArgument("ell must be positive".into()));
    }
    if !w.is_nondecreasing() {
        return Err(Error::NotMatrixAdmissible("weight is not nondecreasing".into()));
    }
    if let Some(f) = w.equivalent_family() {
        if !conditions::family_table(f, ConditionId::Om3) {
            return Err(Error::NotMatrixAdmissible("log(t) = o(omega(t)) fails".into()));
        }
    }
    let xs: Vec<f64> = (0..=j_max).map(|j| ell * j as f64).collect();
    let values: Vec<f64> = if w.as_profile().is_some() {
        xs.iter()
            .map(|&x| young_conjugate_at(w, x).map(|s| s.value))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| match e {
                Error::Om3Violated(x) => {
                    Error::NotMatrixAdmissible(format!("conjugate infinite at x = {x} (finite profile)"))
                }
                e => e,
            })?
    } else {
        young_conjugate_on(w, &xs)?.samples.iter().map(|s| s.value).collect()
    };
    Ok(values.into_iter().map(|v| v / ell).collect())
}

/// Checks `ω^ι ≤ A·(convex minorant of ω^ι) + A` with `A = max(4C, 2D)` from the
/// `(α₀)` certificate, `D = max(1, C ω(t₀))`.
pub fn alpha0_minorant_check(w: &WeightFunction, grid: &GridSpec) -> Result<Verdict> {
    let a0 = conditions::check_condition(w, ConditionId::Alpha0, grid)?;
    if !a0.is_holds() {
        return Ok(Verdict::inconclusive(a0.margin.unwrap_or(0.0)).with_note("alpha0 not certified"));
    }
    let (Some(c), Some(t0)) = (a0.cert("C"), a0.cert("t0")) else {
        return Ok(Verdict::inconclusive(0.0).with_note("alpha0 holds without numeric constants"));
    };
    let d = (c * w.evaluate(t0)?).max(1.0);
    let a = (4.0 * c).max(2.0 * d);
    let s = w.sample(grid)?;
    let mut pts: Vec<(f64, f64)> = s
        .us
        .iter()
        .zip(&s.phis)
        .filter(|(u, _)| u.is_finite() && u.abs() < 700.0)
        .map(|(&u, &p)| ((-u).exp(), p))
        .collect();
    pts.sort_by(|x, y| x.0.total_cmp(&y.0));
    let minorant = largest_convex_minorant(&pts)?;
    for &(t, v) in &pts {
        let m = minorant.eval(t);
        if m > v * (1.0 + 1e-12) + 1e-12 {
            return Err(Error::Inconsistency(format!("convex minorant exceeds omega_iota at t = {t}")));
        }
        if v > a * m + a {
            return Ok(Verdict::fails(constants(&[("t", t), ("omega_iota", v), ("minorant", m), ("A", a)])));
        }
    }
    Ok(Verdict::holds(constants(&[("A", a), ("C", c), ("D", d)]))
        .with_horizon(s.grid)
        .with_note("omega_iota <= A minorant + A with A = max(4C, 2D)"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_one_conjugate() {
        let w = WeightFunction::power(1.0).unwrap();
        for x in [0.1, 1.0, std::f64::consts::E, 10.0, 100.0] {
            let s = young_conjugate_at(&w, x).unwrap();
            let want = x * x.ln() - x;
            assert!((s.value - want).abs() <= 1e-9 * want.abs().max(1.0), "x={x}: {} vs {want}", s.value);
        }
    }

    #[test]
    fn profile_conjugate_example() {
        let w = WeightFunction::profile(&[(0.0, 0.0), (1.0, 0.0), (2.0, 3.0)]).unwrap();
        let c = young_conjugate(&w, 3.0).unwrap();
        assert!(c.exact);
        assert_eq!(c.value_at(1.5).unwrap(), 1.5);
        assert_eq!(c.value_at_zero(), 0.0);
        assert!(matches!(young_conjugate(&w, 4.0), Err(Error::Om3Violated(_))));
    }

    #[test]
    fn log_has_infinite_conjugate() {
        assert!(matches!(young_conjugate(&WeightFunction::log(), 10.0), Err(Error::Om3Violated(_))));
    }

    #[test]
    fn envelope_caps_final_slope() {
        // Steep middle segment followed by a shallow ray.
        let p = Profile::new(&[(0.0, 0.0), (1.0, 0.0), (2.0, 5.0), (3.0, 6.0)]).unwrap();
        let (h, m) = profile_envelope(&p);
        assert_eq!(m, 1.0);
        assert_eq!(h, vec![(0.0, 0.0), (1.0, 0.0)]);
    }

    #[test]
    fn gevrey_biconjugate_has_no_gap() {
        let w = WeightFunction::gevrey(2.0).unwrap();
        let g = GridSpec::logarithmic(1e-3, 1e6, 401).unwrap();
        let r = double_conjugate(&w, &g).unwrap();
        assert!(r.max_gap < 1e-6, "gap {}", r.max_gap);
        assert!(r.convex);
    }

    #[test]
    fn nonconvex_profile_has_gap() {
        let w = WeightFunction::profile(&[(0.0, 0.0), (1.0, 4.0), (2.0, 4.0), (3.0, 9.0)]).unwrap();
        let g = GridSpec::linear(0.5, 30.0, 400).unwrap();
        let r = double_conjugate(&w, &g).unwrap();
        assert!(!r.convex);
        assert!(GapReport::gap_at(&w, 1.5).unwrap() > 0.0);
    }

    #[test]
    fn matrix_of_power_one() {
        let w = WeightFunction::power(1.0).unwrap();
        let lw = associated_weight_matrix(&w, 1.0, 5).unwrap();
        assert!(lw[0].abs() < 1e-12);
        assert!((lw[2] - (2.0 * 2f64.ln() - 2.0)).abs() < 1e-9);
    }

    #[test]
    fn hull_examples() {
        let v = [(0.0, 1.0), (1.0, 0.0), (2.0, 1.0)];
        let lo = largest_convex_minorant(&v).unwrap();
        assert_eq!(lo.knots.len(), 3);
        let up = least_concave_majorant(&v).unwrap();
        assert_eq!(up.knots, vec![(0.0, 1.0), (2.0, 1.0)]);
        assert_eq!(up.eval(1.0), 1.0);
        assert!(matches!(least_concave_majorant(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn omega_iota_examples() {
        assert_eq!(omega_iota(&WeightFunction::power(1.0).unwrap(), 2.0).unwrap(), 0.5);
        assert_eq!(omega_iota(&WeightFunction::log(), 1.0).unwrap(), 2f64.ln());
    }
}

//! Weight functions `ω: [0,∞) → [0,∞)` and their log-reparametrization
//! `φ_ω(u) = ω(e^u)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Closed-form weight families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `t^α`, `α > 0`.
    Power { alpha: f64 },
    /// `t^{1/s}`, `s > 0`.
    Gevrey { s: f64 },
    /// `log(1 + t)`.
    Log,
    /// `log(1 + t)^β`, `β >= 1`.
    LogPower { beta: f64 },
    /// `e^t - 1`.
    Exp,
}

impl Family {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Family::Power { alpha } => alpha > 0.0 && alpha.is_finite(),
            Family::Gevrey { s } => s > 0.0 && s.is_finite(),
            Family::LogPower { beta } => beta >= 1.0 && beta.is_finite(),
            Family::Log | Family::Exp => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("bad family parameters: {self:?}")))
        }
    }

    /// Exponent of a pure power `t^a`, if the family is one.
    pub fn power_exponent(&self) -> Option<f64> {
        match *self {
            Family::Power { alpha } => Some(alpha),
            Family::Gevrey { s } => Some(1.0 / s),
            _ => None,
        }
    }

    fn evaluate(&self, t: f64) -> f64 {
        match *self {
            Family::Power { alpha } => t.powf(alpha),
            Family::Gevrey { s } => t.powf(1.0 / s),
            Family::Log => t.ln_1p(),
            Family::LogPower { beta } => t.ln_1p().powf(beta),
            Family::Exp => t.exp_m1(),
        }
    }

    fn phi(&self, u: f64) -> f64 {
        match *self {
            Family::Power { alpha } => (alpha * u).exp(),
            Family::Gevrey { s } => (u / s).exp(),
            Family::Log => softplus(u),
            Family::LogPower { beta } => softplus(u).powf(beta),
            Family::Exp => u.exp().exp_m1(),
        }
    }

    fn label(&self) -> String {
        match *self {
            Family::Power { alpha } => format!("power({alpha})"),
            Family::Gevrey { s } => format!("gevrey({s})"),
            Family::Log => "log".into(),
            Family::LogPower { beta } => format!("log_power({beta})"),
            Family::Exp => "exp".into(),
        }
    }
}

/// `ln(1 + e^u)` without overflow.
fn softplus(u: f64) -> f64 {
    if u > 0.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}

/// Piecewise-linear `φ` given by corners `(u_k, v_k)` with `(u_0, v_0) = (0, 0)`.
///
/// `φ = 0` for `u < 0` and continues with the final slope past the last corner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    us: Vec<f64>,
    vs: Vec<f64>,
    slopes: Vec<f64>,
}

impl Profile {
    pub fn new(corners: &[(f64, f64)]) -> Result<Self> {
        if corners.len() < 2 {
            return Err(Error::InvalidArgument("profile needs at least two corners".into()));
        }
        if corners[0] != (0.0, 0.0) {
            return Err(Error::InvalidArgument("profile must start at (0, 0)".into()));
        }
        let us: Vec<f64> = corners.iter().map(|c| c.0).collect();
        let vs: Vec<f64> = corners.iter().map(|c| c.1).collect();
        if us.iter().chain(&vs).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("profile corners must be finite".into()));
        }
        for k in 1..us.len() {
            if us[k] <= us[k - 1] {
                return Err(Error::InvalidArgument(format!("corner abscissas not increasing at k = {k}")));
            }
            if vs[k] < vs[k - 1] {
                return Err(Error::InvalidArgument(format!("corner values decrease at k = {k}")));
            }
        }
        let slopes = (1..us.len()).map(|k| (vs[k] - vs[k - 1]) / (us[k] - us[k - 1])).collect();
        Ok(Self { us, vs, slopes })
    }

    pub fn corners(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.us.iter().copied().zip(self.vs.iter().copied())
    }

    pub fn us(&self) -> &[f64] {
        &self.us
    }

    pub fn vs(&self) -> &[f64] {
        &self.vs
    }

    /// Slope of segment `k` (between corners `k` and `k + 1`).
    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn final_slope(&self) -> f64 {
        *self.slopes.last().expect("profile has a segment")
    }

    pub fn last_u(&self) -> f64 {
        *self.us.last().expect("profile has corners")
    }

    /// Index `k` of the segment with `u_k <= u < u_{k+1}` (the last segment past the end).
    pub fn segment_of(&self, u: f64) -> usize {
        let k = self.us.partition_point(|&x| x <= u);
        k.saturating_sub(1).min(self.slopes.len() - 1)
    }

    pub fn phi(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let k = self.segment_of(u);
        if u == self.us[k] {
            return self.vs[k];
        }
        self.vs[k] + self.slopes[k] * (u - self.us[k])
    }

    /// `∫_v^∞ φ(s) e^{v-s} ds`, exact for the piecewise-linear profile.
    pub fn exp_moment(&self, v: f64) -> f64 {
        // On a segment with slope m:
        // ∫_a^b (φ(a) + m(s-a)) e^{v-s} ds = e^{v-a}(φ(a) + m) - e^{v-b}(φ(b) + m).
        let last = self.slopes.len() - 1;
        let mut a = v.max(0.0);
        let mut total = 0.0;
        for k in self.segment_of(a)..=last {
            let m = self.slopes[k];
            total += (v - a).exp() * (self.phi(a) + m);
            if k == last {
                break;
            }
            let b = self.us[k + 1];
            total -= (v - b).exp() * (self.vs[k + 1] + m);
            a = b;
        }
        total
    }
}

/// Weight sequence stored as `log M_p`, `p = 0..=P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSequence {
    log_m: Vec<f64>,
}

impl WeightSequence {
    pub fn from_logs(log_m: Vec<f64>) -> Result<Self> {
        if log_m.len() < 2 {
            return Err(Error::InvalidArgument("sequence needs at least M_0 and M_1".into()));
        }
        if log_m.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("sequence entries must be positive and finite".into()));
        }
        Ok(Self { log_m })
    }

    pub fn from_values(m: &[f64]) -> Result<Self> {
        if m.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::InvalidArgument("sequence entries must be positive".into()));
        }
        Self::from_logs(m.iter().map(|x| x.ln()).collect())
    }

    pub fn log_m(&self) -> &[f64] {
        &self.log_m
    }

    /// Largest index `P`.
    pub fn horizon(&self) -> usize {
        self.log_m.len() - 1
    }

    /// Whether `(M_p)^{1/p}` strictly increases for `p >= from`.
    pub fn root_increasing_from(&self, from: usize) -> bool {
        let roots: Vec<f64> = (from.max(1)..self.log_m.len()).map(|p| self.log_m[p] / p as f64).collect();
        roots.len() >= 2 && roots.windows(2).all(|w| w[1] > w[0])
    }

    /// `max_p (log M_0 + p u - log M_p)` and its argmax.
    pub fn associated_phi(&self, u: f64) -> Result<(f64, usize)> {
        if u == f64::NEG_INFINITY {
            return Ok((0.0, 0));
        }
        let mut best = (0.0, 0usize);
        for (p, lm) in self.log_m.iter().enumerate().skip(1) {
            let v = self.log_m[0] + p as f64 * u - lm;
            if v > best.0 {
                best = (v, p);
            }
        }
        if best.1 == self.horizon() {
            return Err(Error::HorizonTooSmall(format!(
                "associated function at u = {u} attains its sup at the last index P = {}",
                self.horizon()
            )));
        }
        Ok(best)
    }

    /// Largest `u` at which the supremum is still attained below `P`
    /// (exact for log-convex sequences).
    pub fn safe_u_max(&self) -> f64 {
        let p = self.horizon();
        self.log_m[p] - self.log_m[p - 1]
    }
}

/// `ω_M(t) = sup_p log(M_0 t^p / M_p)` on the finite horizon `p <= P`.
pub fn associated_weight_function(m: &WeightSequence, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::InvalidArgument("t must be >= 0".into()));
    }
    Ok(m.associated_phi(t.ln())?.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Repr {
    Analytic(Family),
    Profile(Profile),
    Associated(WeightSequence),
    Scaled { c: f64, base: Box<WeightFunction> },
    Dilated { c: f64, base: Box<WeightFunction> },
    Normalized { shift: f64, base: Box<WeightFunction> },
}

/// Declared properties of a representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub nondecreasing: bool,
    pub normalized: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFunction {
    repr: Repr,
    flags: Flags,
}

impl WeightFunction {
    pub fn analytic(family: Family) -> Result<Self> {
        family.validate()?;
        Ok(Self { repr: Repr::Analytic(family), flags: Flags { nondecreasing: true, normalized: false } })
    }

    pub fn power(alpha: f64) -> Result<Self> {
        Self::analytic(Family::Power { alpha })
    }

    pub fn gevrey(s: f64) -> Result<Self> {
        Self::analytic(Family::Gevrey { s })
    }

    pub fn log() -> Self {
        Self::analytic(Family::Log).expect("log has no parameters")
    }

    pub fn log_power(beta: f64) -> Result<Self> {
        Self::analytic(Family::LogPower { beta })
    }

    pub fn exp() -> Self {
        Self::analytic(Family::Exp).expect("exp has no parameters")
    }

    pub fn profile(corners: &[(f64, f64)]) -> Result<Self> {
        Ok(Self::from_profile(Profile::new(corners)?))
    }

    pub fn from_profile(p: Profile) -> Self {
        Self { repr: Repr::Profile(p), flags: Flags { nondecreasing: true, normalized: true } }
    }

    pub fn associated(m: WeightSequence) -> Result<Self> {
        let from = m.horizon() / 2;
        if !m.root_increasing_from(from) {
            return Err(Error::InvalidArgument(format!(
                "(M_p)^(1/p) must strictly increase beyond p = {from}"
            )));
        }
        let normalized = m.log_m.iter().all(|&l| l >= m.log_m[0]);
        Ok(Self { repr: Repr::Associated(m), flags: Flags { nondecreasing: true, normalized } })
    }

    pub fn scaled(c: f64, base: WeightFunction) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidArgument("scale factor must be positive".into()));
        }
        let flags = base.flags;
        Ok(Self { repr: Repr::Scaled { c, base: Box::new(base) }, flags })
    }

    pub fn dilated(c: f64, base: WeightFunction) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidArgument("dilation factor must be positive".into()));
        }
        let flags = Flags {
            nondecreasing: base.flags.nondecreasing,
            normalized: base.flags.normalized && c <= 1.0,
        };
        Ok(Self { repr: Repr::Dilated { c, base: Box::new(base) }, flags })
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.flags.nondecreasing
    }

    pub fn is_normalized(&self) -> bool {
        self.flags.normalized
    }

    pub fn as_profile(&self) -> Option<&Profile> {
        match &self.repr {
            Repr::Profile(p) => Some(p),
            _ => None,
        }
    }

    /// The closed-form family, looking through scalings and dilations.
    pub fn underlying_family(&self) -> Option<Family> {
        match &self.repr {
            Repr::Analytic(f) => Some(*f),
            Repr::Scaled { base, .. } | Repr::Dilated { base, .. } => base.underlying_family(),
            _ => None,
        }
    }

    /// Like [`Self::underlying_family`] but also looking through normalization,
    /// which only changes the weight up to equivalence.
    pub fn equivalent_family(&self) -> Option<Family> {
        match &self.repr {
            Repr::Analytic(f) => Some(*f),
            Repr::Scaled { base, .. } | Repr::Dilated { base, .. } | Repr::Normalized { base, .. } => {
                base.equivalent_family()
            }
            _ => None,
        }
    }

    /// Grid used when the caller does not supply one.
    pub fn default_grid(&self) -> GridSpec {
        let g = match &self.repr {
            Repr::Analytic(Family::Exp) => GridSpec::logarithmic(1e-3, 300.0, 2001),
            Repr::Analytic(_) => GridSpec::logarithmic(1e-3, 1e6, 2001),
            Repr::Profile(p) => {
                let u = p.last_u();
                if u > 100.0 {
                    GridSpec::iterated(0.01, u, 4000)
                } else {
                    GridSpec::log_domain(-2.0, u + 1e6f64.ln(), 2001)
                }
            }
            Repr::Associated(m) => {
                let u = m.safe_u_max() - std::f64::consts::LN_2;
                GridSpec::log_domain(-2.0, u.max(-1.0), 2001)
            }
            Repr::Scaled { base, .. } | Repr::Dilated { base, .. } | Repr::Normalized { base, .. } => {
                return base.default_grid()
            }
        };
        g.expect("default grid bounds are valid")
    }

    /// `φ` at `us[i] + shift`, stopping at the first point where the weight
    /// overflows or leaves its representable horizon.
    pub fn phi_prefix(&self, us: &[f64], shift: f64) -> Result<Vec<f64>> {
        let vals: Vec<Result<f64>> = us.par_iter().map(|&u| self.phi(u + shift)).collect();
        let mut out = Vec::with_capacity(vals.len());
        for v in vals {
            match v {
                Ok(x) => out.push(x),
                Err(Error::NonFinite(_)) | Err(Error::HorizonTooSmall(_)) => break,
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }

    /// Samples `φ` on a grid, truncating the grid where evaluation stops.
    pub fn sample(&self, grid: &GridSpec) -> Result<Sampled> {
        let us = grid.u_points();
        let phis = self.phi_prefix(&us, 0.0)?;
        let n = phis.len();
        let truncated = n < us.len();
        let grid = grid.truncated(n)?;
        let mut us = us;
        us.truncate(n);
        Ok(Sampled { grid, us, phis, truncated })
    }

    /// `ω(t)`.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument(format!("evaluate needs t >= 0 (got {t})")));
        }
        let v = match &self.repr {
            Repr::Analytic(f) => f.evaluate(t),
            Repr::Profile(p) => {
                if t <= 1.0 {
                    0.0
                } else {
                    p.phi(t.ln())
                }
            }
            Repr::Associated(m) => associated_weight_function(m, t)?,
            Repr::Scaled { c, base } => c * base.evaluate(t)?,
            Repr::Dilated { c, base } => base.evaluate(c * t)?,
            Repr::Normalized { shift, base } => {
                if t <= 1.0 {
                    0.0
                } else {
                    (base.evaluate(t)? - shift).max(0.0)
                }
            }
        };
        self.check(v, t)
    }

    /// `φ_ω(u) = ω(e^u)`, evaluated without leaving the log domain where possible.
    pub fn phi(&self, u: f64) -> Result<f64> {
        if u.is_nan() {
            return Err(Error::InvalidArgument("phi at NaN".into()));
        }
        let v = match &self.repr {
            Repr::Analytic(f) => {
                if u == f64::NEG_INFINITY {
                    0.0
                } else {
                    f.phi(u)
                }
            }
            Repr::Profile(p) => p.phi(u),
            Repr::Associated(m) => m.associated_phi(u)?.0,
            Repr::Scaled { c, base } => c * base.phi(u)?,
            Repr::Dilated { c, base } => base.phi(u + c.ln())?,
            Repr::Normalized { shift, base } => {
                if u <= 0.0 {
                    0.0
                } else {
                    (base.phi(u)? - shift).max(0.0)
                }
            }
        };
        self.check(v, u.exp())
    }

    fn check(&self, v: f64, t: f64) -> Result<f64> {
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("{} at t = {t:e}", self.label())));
        }
        if v < 0.0 {
            return Err(Error::Inconsistency(format!("{} is negative at t = {t:e}", self.label())));
        }
        Ok(v)
    }

    pub fn label(&self) -> String {
        match &self.repr {
            Repr::Analytic(f) => f.label(),
            Repr::Profile(p) => format!("profile({} corners)", p.us.len()),
            Repr::Associated(m) => format!("associated(P={})", m.horizon()),
            Repr::Scaled { c, base } => format!("{c}*{}", base.label()),
            Repr::Dilated { c, base } => format!("{}({c}t)", base.label()),
            Repr::Normalized { base, .. } => format!("normalized({})", base.label()),
        }
    }

    pub fn from_spec(spec: &WeightSpec) -> Result<Self> {
        match spec {
            WeightSpec::Family { family, params } => {
                let get = |k: &str| {
                    params
                        .get(k)
                        .copied()
                        .ok_or_else(|| Error::Parse(format!("family {family} needs parameter {k}")))
                };
                let f = match family.as_str() {
                    "power" => Family::Power { alpha: get("alpha")? },
                    "gevrey" => Family::Gevrey { s: get("s")? },
                    "log" => Family::Log,
                    "log_power" | "logpower" => Family::LogPower { beta: get("beta")? },
                    "exp" => Family::Exp,
                    other => return Err(Error::Parse(format!("unknown family {other}"))),
                };
                Self::analytic(f)
            }
            WeightSpec::Profile { profile } => {
                let corners: Vec<(f64, f64)> = profile.iter().map(|c| (c[0], c[1])).collect();
                Self::profile(&corners)
            }
            WeightSpec::Sequence { sequence } => Self::associated(WeightSequence::from_logs(sequence.clone())?),
            WeightSpec::Scaled { scaled, base } => Self::scaled(*scaled, Self::from_spec(base)?),
            WeightSpec::Dilated { dilated, base } => Self::dilated(*dilated, Self::from_spec(base)?),
            WeightSpec::Normalized { normalized } => normalize(&Self::from_spec(normalized)?),
        }
    }

    pub fn to_spec(&self) -> WeightSpec {
        match &self.repr {
            Repr::Analytic(f) => {
                let (name, params): (&str, Vec<(&str, f64)>) = match *f {
                    Family::Power { alpha } => ("power", vec![("alpha", alpha)]),
                    Family::Gevrey { s } => ("gevrey", vec![("s", s)]),
                    Family::Log => ("log", vec![]),
                    Family::LogPower { beta } => ("log_power", vec![("beta", beta)]),
                    Family::Exp => ("exp", vec![]),
                };
                WeightSpec::Family {
                    family: name.into(),
                    params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
                }
            }
            Repr::Profile(p) => WeightSpec::Profile { profile: p.corners().map(|(u, v)| [u, v]).collect() },
            Repr::Associated(m) => WeightSpec::Sequence { sequence: m.log_m.clone() },
            Repr::Scaled { c, base } => WeightSpec::Scaled { scaled: *c, base: Box::new(base.to_spec()) },
            Repr::Dilated { c, base } => WeightSpec::Dilated { dilated: *c, base: Box::new(base.to_spec()) },
            Repr::Normalized { base, .. } => WeightSpec::Normalized { normalized: Box::new(base.to_spec()) },
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: WeightSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_spec(&spec)
    }
}

/// `φ` sampled on a (possibly truncated) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled {
    pub grid: GridSpec,
    pub us: Vec<f64>,
    pub phis: Vec<f64>,
    pub truncated: bool,
}

impl Sampled {
    /// Keeps the first `n` samples.
    pub fn truncate(&mut self, n: usize) -> Result<()> {
        if n < self.us.len() {
            self.grid = self.grid.truncated(n)?;
            self.us.truncate(n);
            self.phis.truncate(n);
            self.truncated = true;
        }
        Ok(())
    }
}

/// JSON form of a weight definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Family {
        family: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
    Profile {
        profile: Vec<[f64; 2]>,
    },
    Sequence {
        sequence: Vec<f64>,
    },
    Scaled {
        scaled: f64,
        base: Box<WeightSpec>,
    },
    Dilated {
        dilated: f64,
        base: Box<WeightSpec>,
    },
    Normalized {
        normalized: Box<WeightSpec>,
    },
}

/// `ω(t)`.
pub fn evaluate(w: &WeightFunction, t: f64) -> Result<f64> {
    w.evaluate(t)
}

/// `φ_ω(u) = ω(e^u)`.
pub fn phi(w: &WeightFunction, u: f64) -> Result<f64> {
    w.phi(u)
}

/// `σ(t) = max{0, ω(t) - ω(1)}` for `t > 1` and `0` on `[0, 1]`.
pub fn normalize(w: &WeightFunction) -> Result<WeightFunction> {
    if !w.is_nondecreasing() {
        return Err(Error::NotMonotone);
    }
    let shift = w.evaluate(1.0)?;
    if w.is_normalized() || shift == 0.0 && matches!(w.repr, Repr::Profile(_)) {
        return Ok(w.clone());
    }
    Ok(WeightFunction {
        repr: Repr::Normalized { shift, base: Box::new(w.clone()) },
        flags: Flags { nondecreasing: true, normalized: true },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_spot_values() {
        assert_eq!(WeightFunction::power(0.5).unwrap().evaluate(4.0).unwrap(), 2.0);
        assert_eq!(WeightFunction::log().evaluate(0.0).unwrap(), 0.0);
        let e = std::f64::consts::E;
        assert!((WeightFunction::power(1.0).unwrap().phi(1.0).unwrap() - e).abs() < 1e-15);
        assert!((WeightFunction::gevrey(2.0).unwrap().phi(2.0).unwrap() - e).abs() < 1e-15);
    }

    #[test]
    fn profile_interpolates_in_u() {
        let w = WeightFunction::profile(&[(0.0, 0.0), (2.0, 6.0)]).unwrap();
        assert_eq!(w.evaluate(std::f64::consts::E).unwrap(), 3.0);
        assert_eq!(w.phi(-3.0).unwrap(), 0.0);
        assert_eq!(w.phi(5.0).unwrap(), 15.0);
        assert_eq!(w.evaluate(0.5).unwrap(), 0.0);
    }

    #[test]
    fn profile_rejects_bad_corners() {
        assert!(Profile::new(&[(0.0, 0.0)]).is_err());
        assert!(Profile::new(&[(0.5, 0.0), (1.0, 1.0)]).is_err());
        assert!(Profile::new(&[(0.0, 0.0), (1.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(Profile::new(&[(0.0, 0.0), (1.0, 2.0), (2.0, 1.0)]).is_err());
    }

    #[test]
    fn profile_corner_values_are_exact() {
        let p = Profile::new(&[(0.0, 0.0), (4.0, 3.0), (7.5, 3.0), (16.0, 9.1)]).unwrap();
        for (u, v) in p.corners() {
            assert_eq!(p.phi(u), v);
        }
    }

    #[test]
    fn exp_moment_matches_quadrature() {
        let p = Profile::new(&[(0.0, 0.0), (1.0, 0.5), (2.0, 0.5), (3.0, 4.0)]).unwrap();
        for v in [-1.0, 0.0, 0.3, 1.0, 1.7, 2.5, 3.0, 6.0] {
            let r = crate::quad::integrate(
                |s: f64| Ok(p.phi(v + s) * (-s).exp()),
                0.0,
                60.0,
                1e-13,
                1e-13,
                400,
            )
            .unwrap();
            assert!((p.exp_moment(v) - r.value).abs() < 1e-9, "v={v}: {} vs {}", p.exp_moment(v), r.value);
        }
    }

    #[test]
    fn exp_family_overflow_is_reported() {
        let w = WeightFunction::exp();
        assert!(matches!(w.evaluate(1e3), Err(Error::NonFinite(_))));
        assert!(matches!(w.phi(10.0), Err(Error::NonFinite(_))));
    }

    #[test]
    fn normalize_examples() {
        let s = normalize(&WeightFunction::power(1.0).unwrap()).unwrap();
        assert_eq!(s.evaluate(1.0).unwrap(), 0.0);
        assert!((s.evaluate(3.5).unwrap() - 2.5).abs() < 1e-15);
        let l = normalize(&WeightFunction::log()).unwrap();
        assert!((l.evaluate(3.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        let p = WeightFunction::profile(&[(0.0, 0.0), (2.0, 6.0)]).unwrap();
        assert_eq!(normalize(&p).unwrap(), p);
    }

    #[test]
    fn associated_examples() {
        let fact: Vec<f64> = (0..=50).map(|p| (1..=p).map(|k| (k as f64).ln()).sum()).collect();
        let m = WeightSequence::from_logs(fact).unwrap();
        assert_eq!(associated_weight_function(&m, 1.0).unwrap(), 0.0);
        let (v, p) = m.associated_phi(1.0).unwrap();
        assert_eq!(p, 2);
        assert!((v - (2.0 - 2f64.ln())).abs() < 1e-14);

        let sq: Vec<f64> = (0..=20).map(|p| (p * p) as f64 * 2f64.ln()).collect();
        let m = WeightSequence::from_logs(sq).unwrap();
        let v = associated_weight_function(&m, 4.0).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn associated_horizon_detection() {
        let fact: Vec<f64> = (0..=5).map(|p| (1..=p).map(|k| (k as f64).ln()).sum()).collect();
        let m = WeightSequence::from_logs(fact).unwrap();
        assert!(matches!(m.associated_phi(10.0), Err(Error::HorizonTooSmall(_))));
    }

    #[test]
    fn json_round_trip() {
        for text in [
            r#"{"family":"power","params":{"alpha":0.5}}"#,
            r#"{"family":"log"}"#,
            r#"{"profile":[[0,0],[1,2],[3,3]]}"#,
            r#"{"sequence":[0,0,0.7,1.8,3.2,4.8]}"#,
            r#"{"scaled":2,"base":{"family":"exp"}}"#,
        ] {
            let w = WeightFunction::from_json(text).unwrap();
            let again = WeightFunction::from_spec(&w.to_spec()).unwrap();
            assert_eq!(w, again);
        }
        assert!(WeightFunction::from_json(r#"{"family":"power"}"#).is_err());
    }
}

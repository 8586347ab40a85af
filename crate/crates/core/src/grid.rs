//! Sampling grids and the finite-horizon trend tests built on them.
//!
//! A grid is stored in its native coordinate: `t` for linear spacing,
//! `u = ln t` for logarithmic spacing and `ln u` for iterated-logarithmic
//! spacing. The last form exists because piecewise profiles can have corners
//! near `u = 1e182`, where `t = e^u` is not representable.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LN_10: f64 = std::f64::consts::LN_10;

/// Relative growth allowed between the two top windows before a sup-ratio
/// counts as growing.
pub const RATIO_TREND_TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Logarithmic,
    IteratedLogarithmic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub spacing: Spacing,
    pub lo: f64,
    pub hi: f64,
    pub n_points: usize,
}

impl GridSpec {
    fn checked(spacing: Spacing, lo: f64, hi: f64, n_points: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::InvalidArgument(format!(
                "grid bounds must be finite with lo < hi (got {lo}, {hi})"
            )));
        }
        if n_points < 2 {
            return Err(Error::InvalidArgument("grid needs at least 2 points".into()));
        }
        Ok(Self { spacing, lo, hi, n_points })
    }

    /// Uniform grid in `t` on `[t_min, t_max]`.
    pub fn linear(t_min: f64, t_max: f64, n_points: usize) -> Result<Self> {
        if t_min < 0.0 {
            return Err(Error::InvalidArgument("t_min must be >= 0".into()));
        }
        Self::checked(Spacing::Linear, t_min, t_max, n_points)
    }

    /// Geometric grid in `t` on `[t_min, t_max]`, `t_min > 0`.
    pub fn logarithmic(t_min: f64, t_max: f64, n_points: usize) -> Result<Self> {
        if t_min <= 0.0 {
            return Err(Error::InvalidArgument("logarithmic grid needs t_min > 0".into()));
        }
        Self::checked(Spacing::Logarithmic, t_min.ln(), t_max.ln(), n_points)
    }

    /// Geometric grid in `t` given directly by `u = ln t` bounds.
    pub fn log_domain(u_min: f64, u_max: f64, n_points: usize) -> Result<Self> {
        Self::checked(Spacing::Logarithmic, u_min, u_max, n_points)
    }

    /// Geometric grid in `u = ln t` on `[u_min, u_max]`, `u_min > 0`.
    pub fn iterated(u_min: f64, u_max: f64, n_points: usize) -> Result<Self> {
        if u_min <= 0.0 {
            return Err(Error::InvalidArgument("iterated grid needs u_min > 0".into()));
        }
        Self::checked(Spacing::IteratedLogarithmic, u_min.ln(), u_max.ln(), n_points)
    }

    pub fn native_points(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|i| if i + 1 == self.n_points { self.hi } else { self.lo + step * i as f64 })
            .collect()
    }

    fn native_to_u(&self, x: f64) -> f64 {
        match self.spacing {
            Spacing::Linear => x.ln(),
            Spacing::Logarithmic => x,
            Spacing::IteratedLogarithmic => x.exp(),
        }
    }

    /// Grid points as `u = ln t` (may be `-inf` for `t = 0`).
    pub fn u_points(&self) -> Vec<f64> {
        self.native_points().into_iter().map(|x| self.native_to_u(x)).collect()
    }

    /// Grid points as `t`; fails when `t` is not representable.
    pub fn t_points(&self) -> Result<Vec<f64>> {
        let pts: Vec<f64> = match self.spacing {
            Spacing::Linear => self.native_points(),
            _ => self.u_points().into_iter().map(f64::exp).collect(),
        };
        if pts.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite("grid point t = e^u".into()));
        }
        Ok(pts)
    }

    pub fn u_min(&self) -> f64 {
        self.native_to_u(self.lo)
    }

    pub fn u_max(&self) -> f64 {
        self.native_to_u(self.hi)
    }

    /// Horizon `T` (possibly `inf` when it overflows).
    pub fn t_max(&self) -> f64 {
        match self.spacing {
            Spacing::Linear => self.hi,
            _ => self.u_max().exp(),
        }
    }

    /// Base-10 logarithm of the variable whose decades define the trend
    /// windows: `t` for linear and logarithmic grids, `u` for iterated ones.
    fn decade_coord(&self, native: f64) -> f64 {
        match self.spacing {
            Spacing::Linear => native.log10(),
            Spacing::Logarithmic => native / LN_10,
            Spacing::IteratedLogarithmic => native / LN_10,
        }
    }

    /// Number of decades spanned by the grid.
    pub fn decades(&self) -> f64 {
        self.decade_coord(self.hi) - self.decade_coord(self.lo)
    }

    /// Index ranges of the previous and the top decade window.
    pub fn windows(&self) -> Result<(Range<usize>, Range<usize>)> {
        if self.decades() < 2.0 {
            return Err(Error::HorizonTooSmall(format!(
                "grid spans {:.2} decades, the trend test needs 2",
                self.decades()
            )));
        }
        let top = self.decade_coord(self.hi);
        let pts = self.native_points();
        let first_top = pts.partition_point(|&x| self.decade_coord(x) < top - 1.0);
        let first_prev = pts.partition_point(|&x| self.decade_coord(x) < top - 2.0);
        if first_top >= pts.len() || first_prev >= first_top {
            return Err(Error::HorizonTooSmall("grid too coarse for decade windows".into()));
        }
        Ok((first_prev..first_top, first_top..pts.len()))
    }

    /// Same spacing, keeping only the first `n` points.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n == self.n_points {
            return Ok(*self);
        }
        let pts = self.native_points();
        if n < 2 || n > pts.len() {
            return Err(Error::HorizonTooSmall(format!("only {n} evaluable grid points")));
        }
        Ok(Self { spacing: self.spacing, lo: self.lo, hi: pts[n - 1], n_points: n })
    }

    pub fn label(&self) -> String {
        match self.spacing {
            Spacing::Linear => format!("linear t in [{:e}, {:e}], n={}", self.lo, self.hi, self.n_points),
            Spacing::Logarithmic => format!(
                "logarithmic u in [{:.6}, {:.6}], n={}",
                self.lo, self.hi, self.n_points
            ),
            Spacing::IteratedLogarithmic => format!(
                "iterated u in [{:e}, {:e}], n={}",
                self.u_min(),
                self.u_max(),
                self.n_points
            ),
        }
    }
}

/// Suprema of a sampled quantity over the two top decade windows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSups {
    pub prev: f64,
    pub top: f64,
    pub prev_arg: usize,
    pub top_arg: usize,
}

impl WindowSups {
    pub fn new(grid: &GridSpec, values: &[f64]) -> Result<Self> {
        let (prev, top) = grid.windows()?;
        let (prev_arg, prev_v) = argmax(values, prev);
        let (top_arg, top_v) = argmax(values, top);
        Ok(Self { prev: prev_v, top: top_v, prev_arg, top_arg })
    }

    /// Positive ratio sequence stays bounded: top window within 1% of the previous.
    pub fn ratio_bounded(&self) -> bool {
        self.top <= self.prev * (1.0 + RATIO_TREND_TOL)
    }

    /// Positive ratio sequence decays: top window at least 1% below the previous.
    pub fn ratio_vanishing(&self) -> bool {
        self.top <= self.prev * (1.0 - RATIO_TREND_TOL)
    }

    /// Difference sequence stays bounded above.
    pub fn difference_bounded(&self) -> bool {
        self.top <= self.prev + RATIO_TREND_TOL * self.prev.abs() + 1e-12
    }

    /// Growth of the top window relative to the previous one.
    pub fn growth(&self) -> f64 {
        if self.prev == 0.0 {
            if self.top == 0.0 { 1.0 } else { f64::INFINITY }
        } else {
            self.top / self.prev
        }
    }
}

fn argmax(values: &[f64], range: Range<usize>) -> (usize, f64) {
    let mut best = (range.start, f64::NEG_INFINITY);
    for i in range {
        if values[i] > best.1 {
            best = (i, values[i]);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logarithmic_points_hit_bounds() {
        let g = GridSpec::logarithmic(1e-3, 1e6, 901).unwrap();
        let t = g.t_points().unwrap();
        assert!((t[0] - 1e-3).abs() < 1e-15);
        assert!((t[900] / 1e6 - 1.0).abs() < 1e-12);
        assert!((g.decades() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn windows_cover_top_two_decades() {
        let g = GridSpec::logarithmic(1.0, 1e4, 401).unwrap();
        let (prev, top) = g.windows().unwrap();
        assert_eq!(prev, 200..300);
        assert_eq!(top, 300..401);
    }

    #[test]
    fn short_grid_has_no_windows() {
        let g = GridSpec::logarithmic(1.0, 50.0, 100).unwrap();
        assert!(matches!(g.windows(), Err(Error::HorizonTooSmall(_))));
    }

    #[test]
    fn iterated_grid_reaches_huge_u() {
        let g = GridSpec::iterated(1.0, 1e182, 100).unwrap();
        let u = g.u_points();
        assert!((u[99] / 1e182 - 1.0).abs() < 1e-12);
        assert!(g.t_points().is_err());
        assert!(g.windows().is_ok());
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(GridSpec::linear(2.0, 1.0, 10).is_err());
        assert!(GridSpec::linear(0.0, 1.0, 1).is_err());
        assert!(GridSpec::logarithmic(0.0, 1.0, 10).is_err());
    }
}

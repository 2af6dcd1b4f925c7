use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::geom::{angle_diff, wrap_angle};

/// An arc `{center + radius·e^{iθ} : θ ∈ [arg_lo, arg_hi]}`.
///
/// `arg_hi - arg_lo` lies in `[0, 2π]`; the full circle is `[0, 2π]`. An arc
/// whose argument range straddles `0` is stored with a negative `arg_lo`
/// (e.g. `[-1, 1]`), so the interval never wraps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CircleArc {
    pub center: Complex64,
    pub radius: f64,
    pub arg_lo: f64,
    pub arg_hi: f64,
    pub conj_symmetric: bool,
}

impl CircleArc {
    pub fn full(center: Complex64, radius: f64) -> Self {
        Self {
            center,
            radius,
            arg_lo: 0.0,
            arg_hi: TAU,
            conj_symmetric: center.im == 0.0,
        }
    }

    pub fn new(center: Complex64, radius: f64, arg_lo: f64, arg_hi: f64) -> Self {
        debug_assert!(arg_hi >= arg_lo && arg_hi - arg_lo <= TAU + 1e-12);
        let conj_symmetric =
            center.im == 0.0 && angle_diff(arg_lo + arg_hi, 0.0).abs() < 1e-12;
        Self {
            center,
            radius,
            arg_lo,
            arg_hi,
            conj_symmetric,
        }
    }

    pub fn is_full(&self) -> bool {
        self.arg_hi - self.arg_lo >= TAU
    }

    /// Angular extent of the arc.
    pub fn sweep(&self) -> f64 {
        self.arg_hi - self.arg_lo
    }

    /// Whether the direction `theta` (any representative) lies on the arc.
    pub fn contains_arg(&self, theta: f64, tol: f64) -> bool {
        if self.is_full() {
            return true;
        }
        let rel = wrap_angle(theta - self.arg_lo);
        rel <= self.sweep() + tol || rel >= TAU - tol
    }

    /// Angular distance from `theta` to the arc (0 on the arc).
    pub fn arg_distance(&self, theta: f64) -> f64 {
        if self.contains_arg(theta, 0.0) {
            return 0.0;
        }
        angle_diff(theta, self.arg_lo)
            .abs()
            .min(angle_diff(theta, self.arg_hi).abs())
    }

    pub fn point_at(&self, theta: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, theta)
    }

    /// `n + 1` evenly spaced points from `arg_lo` to `arg_hi`.
    pub fn sample(&self, n: usize) -> Vec<Complex64> {
        let n = n.max(1);
        (0..=n)
            .map(|k| self.point_at(self.arg_lo + self.sweep() * k as f64 / n as f64))
            .collect()
    }
}

//! Counting preimages of a point under `R⁻¹` by seeded Newton iteration.

use num_complex::Complex64;
use serde::Serialize;

use super::{jacobian, r_inverse, r_inverse_partials, ArmLinkage, TorusPoint};
use crate::error::{LinkageError, Result};

/// Solutions of `R⁻¹(φ, η) = w`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PreimageCount {
    pub points: Vec<TorusPoint>,
    /// Sum of `sign J` over the solutions.
    pub signed: i64,
    /// Set when `w` is too close to the fold image for the count to be
    /// trusted.
    pub indeterminate: bool,
}

impl PreimageCount {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

/// Below this `|J| / (ab + ac + bc)` a solution is treated as lying on a fold.
const FOLD_TOL: f64 = 1e-4;

/// All preimages of `w`, seeded from the local minima of `|R⁻¹ - w|` on an
/// `n × n` grid.
pub fn preimages(l: &ArmLinkage, w: Complex64, n: usize) -> Result<PreimageCount> {
    if n < 16 {
        return Err(LinkageError::TooFewSamples(n, 16));
    }
    let h = std::f64::consts::TAU / n as f64;
    let resid: Vec<f64> = (0..n * n)
        .map(|k| (r_inverse(l, node(k / n, k % n, h)) - w).norm())
        .collect();
    let at = |i: usize, j: usize| resid[(i % n) * n + j % n];
    let mut seeds = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = at(i, j);
            let is_min = (0..3).all(|di| {
                (0..3).all(|dj| (di == 1 && dj == 1) || v <= at(i + n + di - 1, j + n + dj - 1))
            });
            if is_min {
                seeds.push(node(i, j, h));
            }
        }
    }

    let scale = l.jacobian_scale();
    let tol = 1e-12 * l.disc_radius().max(1.0);
    let mut points: Vec<TorusPoint> = Vec::new();
    let push = |p: TorusPoint, points: &mut Vec<TorusPoint>| {
        // solutions pinned at a fold only converge to about sqrt(tol)
        if !points.iter().any(|q| q.distance(&p) < 1e-5) {
            points.push(p);
        }
    };
    for s in seeds {
        if let Some(p) = newton(l, w, s, tol) {
            push(p, &mut points);
        }
    }
    // near a fold two solutions can share a seed; look along the kernel
    let near_fold: Vec<TorusPoint> = points
        .iter()
        .copied()
        .filter(|p| jacobian(l, *p).abs() < 0.05 * scale)
        .collect();
    for p in near_fold {
        for eps in [1e-4, 1e-3, 1e-2, 5e-2, 0.2] {
            for (dx, dy) in [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)] {
                let s = TorusPoint::new(p.phi + eps * dx, p.eta + eps * dy);
                if let Some(q) = newton(l, w, s, tol) {
                    push(q, &mut points);
                }
            }
        }
    }
    points.sort_by(|x, y| x.phi.total_cmp(&y.phi).then(x.eta.total_cmp(&y.eta)));
    let indeterminate = points
        .iter()
        .any(|p| jacobian(l, *p).abs() < FOLD_TOL * scale);
    let signed = points
        .iter()
        .map(|p| jacobian(l, *p).signum() as i64)
        .sum();
    Ok(PreimageCount {
        points,
        signed,
        indeterminate,
    })
}

/// Number of preimages, or `None` when `w` is on (or numerically at) the
/// fold image.
pub fn preimage_count(l: &ArmLinkage, w: Complex64, n: usize) -> Result<Option<usize>> {
    let p = preimages(l, w, n)?;
    Ok((!p.indeterminate).then(|| p.count()))
}

fn node(i: usize, j: usize, h: f64) -> TorusPoint {
    TorusPoint::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h)
}

fn newton(l: &ArmLinkage, w: Complex64, mut p: TorusPoint, tol: f64) -> Option<TorusPoint> {
    for _ in 0..60 {
        let f = r_inverse(l, p) - w;
        if f.norm() <= tol {
            return Some(p);
        }
        let (dp, de) = r_inverse_partials(l, p);
        let det = dp.re * de.im - de.re * dp.im;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let mut x = -(de.im * f.re - de.re * f.im) / det;
        let mut y = -(-dp.im * f.re + dp.re * f.im) / det;
        let step = x.hypot(y);
        if step > 0.5 {
            x *= 0.5 / step;
            y *= 0.5 / step;
        }
        p = TorusPoint::new(p.phi + x, p.eta + y);
    }
    ((r_inverse(l, p) - w).norm() <= 1e3 * tol).then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{solve_tau_fiber, QuadLinkage};

    fn arm(a: f64, b: f64, c: f64) -> ArmLinkage {
        ArmLinkage::new(a, b, c).unwrap()
    }

    /// Independent count through the closed four-bar `Q(a, b, c, t)`.
    fn fiber_count(l: &ArmLinkage, w: Complex64) -> usize {
        let t = w.norm() * l.a() * l.c() / l.b();
        let (lo, hi) = l.t_range();
        if t <= lo || t >= hi {
            return 0;
        }
        let q = QuadLinkage::new(l.a(), l.b(), l.c(), t).unwrap();
        solve_tau_fiber(&q, -w.arg()).unwrap().len()
    }

    #[test]
    fn counts_agree_with_fibers() {
        for l in [arm(4., 2., 1.), arm(4., 3., 2.)] {
            for (r, th) in [(0.3, 0.2), (1.0, 2.0), (1.6, 3.0), (2.0, 0.1), (0.7, 4.0), (3.0, 1.0)] {
                let w = Complex64::from_polar(r, th);
                let p = preimages(&l, w, 128).unwrap();
                assert!(!p.indeterminate);
                assert_eq!(p.count(), fiber_count(&l, w), "{l} at {w}");
                assert_eq!(p.signed, 0);
            }
        }
    }

    #[test]
    fn origin_has_the_two_triangles() {
        let p = preimages(&arm(4., 3., 2.), Complex64::new(0.0, 0.0), 128).unwrap();
        assert_eq!(p.count(), 2);
        assert!(p.points[0].distance(&p.points[1].conjugate()) < 1e-9);
    }

    #[test]
    fn aligned_image_is_indeterminate() {
        let l = arm(4., 2., 1.);
        let w = r_inverse(&l, TorusPoint::new(0.0, 0.0));
        assert_eq!(preimage_count(&l, w, 128).unwrap(), None);
    }
}

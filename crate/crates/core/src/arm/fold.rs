//! The critical set `{J = 0}` of `R⁻¹` on the torus, its image, and the local
//! structure of the map along it.

use num_complex::Complex64;
use serde::Serialize;

use super::contour::{zero_contours, Contour};
use super::{jacobian, jacobian_gradient, r_inverse, r_inverse_partials, ArmLinkage, TorusPoint};
use crate::error::{LinkageError, Result};

pub const DEFAULT_GRID: usize = 512;

/// Components of the critical set, every vertex projected onto `J = 0`.
pub fn critical_set(l: &ArmLinkage, n: usize) -> Result<Vec<Contour>> {
    l.require_generic()?;
    if n < 16 {
        return Err(LinkageError::TooFewSamples(n, 16));
    }
    let f = |p: TorusPoint| jacobian(l, p);
    let g = |p: TorusPoint| jacobian_gradient(l, p);
    let tol = 1e-14 * l.jacobian_scale();
    let mut contours = zero_contours(f, n);
    for c in &mut contours {
        c.project(f, g, tol);
    }
    Ok(contours)
}

/// Images of the critical curves under `R⁻¹`.
pub fn fold_image(l: &ArmLinkage, n: usize) -> Result<Vec<Vec<Complex64>>> {
    Ok(critical_set(l, n)?
        .iter()
        .map(|c| c.points.iter().map(|p| r_inverse(l, *p)).collect())
        .collect())
}

/// Regions cut out by disjoint simple closed curves on the torus: one more
/// than the number of curves when all are contractible, otherwise exactly
/// the number of curves.
pub fn predicted_region_count(contours: &[Contour]) -> usize {
    let essential = contours.iter().any(Contour::is_essential);
    contours.len() + usize::from(!essential)
}

/// `|sin|` of the angle between the kernel of `dR⁻¹` and the critical curve
/// at a critical point; nonzero exactly at fold points.
pub fn fold_transversality(l: &ArmLinkage, p: TorusPoint) -> f64 {
    let (wp, we) = r_inverse_partials(l, p);
    // rows of the real 2×2 differential
    let rows = [[wp.re, we.re], [wp.im, we.im]];
    let row = if rows[0][0].hypot(rows[0][1]) >= rows[1][0].hypot(rows[1][1]) {
        rows[0]
    } else {
        rows[1]
    };
    let kernel = unit([-row[1], row[0]]);
    let (jp, je) = jacobian_gradient(l, p);
    let tangent = unit([je, -jp]);
    (kernel[0] * tangent[1] - kernel[1] * tangent[0]).abs()
}

fn unit(v: [f64; 2]) -> [f64; 2] {
    let n = v[0].hypot(v[1]);
    if n == 0.0 {
        v
    } else {
        [v[0] / n, v[1] / n]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JetVerdict {
    Fold,
    Degenerate,
}

/// Second-order expansion of `R⁻¹` at an aligned position `(φ0, η0)`:
///
/// `R⁻¹(φ0 + x, η0 + y) = scale · (constant + i·L(x, y) - Q(x, y)/2 + O(3))`
///
/// with `L = lx·x + ly·y` and `Q = qxx·x² + 2qxy·xy + qyy·y²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Jet2 {
    pub corner: TorusPoint,
    pub scale: f64,
    pub constant: f64,
    pub lx: f64,
    pub ly: f64,
    pub qxx: f64,
    pub qxy: f64,
    pub qyy: f64,
    /// Unit vector spanning the kernel of `L`.
    pub kernel: [f64; 2],
    /// `Q` on the kernel; the fold condition is `q_kernel ≠ 0`.
    pub q_kernel: f64,
    pub verdict: JetVerdict,
}

pub fn jet2_at_aligned(l: &ArmLinkage, corner: TorusPoint) -> Result<Jet2> {
    let aligned = |x: f64| x.sin().abs() < 1e-12;
    if !aligned(corner.phi) || !aligned(corner.eta) {
        return Err(LinkageError::NotAligned {
            phi: corner.phi,
            eta: corner.eta,
        });
    }
    let [a, b, c] = l.lengths();
    let s1 = corner.phi.cos().signum();
    let s2 = corner.eta.cos().signum();
    let (a1, a2, a3) = (a * s1 * s2, b * s2, c * s1);
    let lx = a1 + 2.0 * a2 + a3;
    let ly = -(a1 + a2);
    let (qxx, qxy, qyy) = (a1 + 4.0 * a2 + a3, -(a1 + 2.0 * a2), a1 + a2);
    let kernel = unit([ly, -lx]);
    let q_kernel =
        qxx * kernel[0] * kernel[0] + 2.0 * qxy * kernel[0] * kernel[1] + qyy * kernel[1] * kernel[1];
    let size = a + b + c;
    let verdict = if lx.hypot(ly) > 1e-12 * size && q_kernel.abs() > 1e-12 * size {
        JetVerdict::Fold
    } else {
        JetVerdict::Degenerate
    };
    Ok(Jet2 {
        corner: TorusPoint::new(if s1 > 0.0 { 0.0 } else { std::f64::consts::PI }, if s2 > 0.0 { 0.0 } else { std::f64::consts::PI }),
        scale: -b / (a * c),
        constant: a1 + a2 + a3,
        lx,
        ly,
        qxx,
        qxy,
        qyy,
        kernel,
        q_kernel,
        verdict,
    })
}

impl Jet2 {
    /// The truncated expansion at offset `(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let lin = self.lx * x + self.ly * y;
        let quad = self.qxx * x * x + 2.0 * self.qxy * x * y + self.qyy * y * y;
        self.scale * Complex64::new(self.constant - 0.5 * quad, lin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::angle_diff;

    fn arm(a: f64, b: f64, c: f64) -> ArmLinkage {
        ArmLinkage::new(a, b, c).unwrap()
    }

    #[test]
    fn critical_set_of_triangle_arm() {
        let l = arm(4., 3., 2.);
        let cs = critical_set(&l, 256).unwrap();
        assert_eq!(cs.len(), 2);
        for c in &cs {
            for p in &c.points {
                assert!(jacobian(&l, *p).abs() < 1e-12 * l.jacobian_scale());
            }
        }
        assert_eq!(predicted_region_count(&cs), super::super::count_sign_regions(|p| jacobian(&l, p), 256));
    }

    #[test]
    fn aligned_positions_lie_on_the_critical_set() {
        let l = arm(4., 2., 1.);
        let cs = critical_set(&l, 256).unwrap();
        let h = std::f64::consts::TAU / 256.0;
        for corner in TorusPoint::aligned() {
            let near = cs
                .iter()
                .flat_map(|c| c.points.iter())
                .map(|p| angle_diff(p.phi, corner.phi).hypot(angle_diff(p.eta, corner.eta)))
                .fold(f64::MAX, f64::min);
            assert!(near < h, "{corner:?} at distance {near}");
        }
    }

    #[test]
    fn jets_are_folds() {
        for l in [arm(4., 2., 1.), arm(4., 3., 2.), arm(1.5, 2.5, 3.25)] {
            for corner in TorusPoint::aligned() {
                let j = jet2_at_aligned(&l, corner).unwrap();
                assert_eq!(j.verdict, JetVerdict::Fold);
                let w0 = r_inverse(&l, corner);
                assert!((w0 - j.eval(0.0, 0.0)).norm() < 1e-12);
                for (x, y) in [(1e-3, 0.0), (0.0, 1e-3), (7e-4, -5e-4)] {
                    let w = r_inverse(&l, TorusPoint::new(corner.phi + x, corner.eta + y));
                    assert!((w - j.eval(x, y)).norm() < 1e-7);
                }
            }
        }
        assert!(jet2_at_aligned(&arm(1., 2., 3.), TorusPoint::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn origin_corner_curvature() {
        let (a, b, c) = (4.0, 2.0, 1.0);
        let j = jet2_at_aligned(&arm(a, b, c), TorusPoint::new(0.0, 0.0)).unwrap();
        let k = [j.ly, -j.lx];
        let q = j.qxx * k[0] * k[0] + 2.0 * j.qxy * k[0] * k[1] + j.qyy * k[1] * k[1];
        let want = a * (b + c) * (b + c) + b * (a - c) * (a - c) + c * (a + b) * (a + b);
        assert!((q - want).abs() < 1e-9);
    }

    #[test]
    fn critical_curves_are_fold_curves() {
        let l = arm(4., 3., 2.);
        for c in critical_set(&l, 128).unwrap() {
            for p in c.points.iter().step_by(7) {
                assert!(fold_transversality(&l, *p) > 1e-3);
            }
        }
    }
}

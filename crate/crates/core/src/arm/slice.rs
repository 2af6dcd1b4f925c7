//! Slices of the arm moduli space at fixed end-to-end distance `t`.
//!
//! Fixing `t` closes the arm into the four-bar `Q(a, b, c, t)`, so each slice
//! maps onto the circle of radius `bt/(ac)` (or an arc of it, or a point)
//! in the chart at infinity.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::contour::zero_contours;
use super::{end_vector, ArmCase, ArmLinkage, TorusPoint};
use crate::arc::CircleArc;
use crate::error::{LinkageError, Result};
use crate::quad::{
    degenerate_image_report, r_image, DegenerateCase, DegenerateImage, ModuliLayout,
    ModuliTopology, QuadLinkage,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "camelCase")]
pub enum SliceImage {
    Arc(CircleArc),
    Point(Complex64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TSlice {
    pub t: f64,
    /// `bt/(ac)`.
    pub radius: f64,
    pub image: SliceImage,
    /// Set when `Q(a, b, c, t)` is degenerate, i.e. at a Morse value.
    pub degenerate: Option<DegenerateCase>,
    /// Connected components of the slice.
    pub components: usize,
}

/// Image of the slice `{|v4 - v1| = t}` under `R⁻¹`.
pub fn t_slice(l: &ArmLinkage, t: f64) -> Result<TSlice> {
    let (lo, hi) = l.t_range();
    let tol = 1e-12 * hi;
    if !t.is_finite() || t < lo - tol || t > hi + tol {
        return Err(LinkageError::SliceOutOfRange { t, lo, hi });
    }
    let [a, b, c] = l.lengths();
    let radius = b * t / (a * c);
    if t.abs() <= tol {
        if l.case() != ArmCase::ContainsTriangle {
            return Err(LinkageError::SliceOutOfRange { t, lo, hi });
        }
        // the two mirror-image triangles both map to 0
        return Ok(TSlice {
            t: 0.0,
            radius: 0.0,
            image: SliceImage::Point(Complex64::new(0.0, 0.0)),
            degenerate: None,
            components: 2,
        });
    }
    let q = closed_quad(l, t)?;
    if q.is_nondegenerate() {
        let arc = r_image(&q)?;
        let image = if arc.is_full() {
            CircleArc::full(arc.center, radius)
        } else {
            // w ↦ 1/w sends arg θ to -θ and the arc is symmetric under it
            CircleArc::new(arc.center, radius, arc.arg_lo, arc.arg_hi)
        };
        return Ok(TSlice {
            t,
            radius,
            image: SliceImage::Arc(image),
            degenerate: None,
            components: ModuliLayout::of(&q).component_count(),
        });
    }
    let report = degenerate_image_report(&q)?;
    let image = match report.image {
        DegenerateImage::Point(z) => SliceImage::Point(z.inv()),
        DegenerateImage::Circle(arc) if arc.is_full() => {
            SliceImage::Arc(CircleArc::full(arc.center, radius))
        }
        DegenerateImage::Circle(arc) => {
            SliceImage::Arc(CircleArc::new(arc.center, radius, -arc.arg_hi, -arc.arg_lo))
        }
    };
    Ok(TSlice {
        t,
        radius,
        image,
        degenerate: Some(report.case),
        components: connected_components(report.topology),
    })
}

fn connected_components(t: ModuliTopology) -> usize {
    match t {
        ModuliTopology::TwoCircles => 2,
        ModuliTopology::TwoCirclesTwoPoints => 2,
        _ => 1,
    }
}

/// `Q(a, b, c, t)`, snapping `t` to an aligned length when it agrees with
/// one to rounding so that degenerate slices are recognized exactly.
fn closed_quad(l: &ArmLinkage, t: f64) -> Result<QuadLinkage> {
    let [a, b, c] = l.exact().clone();
    let candidates: [BigRational; 4] = [
        &a + &b + &c,
        (&a + &b - &c).abs(),
        (&a - &b + &c).abs(),
        (&a - &b - &c).abs(),
    ];
    let snapped = candidates.iter().find(|m| {
        use num_traits::ToPrimitive;
        !m.is_zero() && (m.to_f64().unwrap_or(f64::NAN) - t).abs() <= 1e-12 * t.abs().max(1.0)
    });
    let exact_t = match snapped {
        Some(m) => m.clone(),
        None => BigRational::from_float(t).ok_or(LinkageError::InvalidLength(vec![t]))?,
    };
    QuadLinkage::from_exact([a, b, c, exact_t])
}

/// Components of the level set `{|v4 - v1| = t}` counted directly on an
/// `n × n` torus grid.
pub fn level_set_components(l: &ArmLinkage, t: f64, n: usize) -> usize {
    zero_contours(|p: TorusPoint| end_vector(l, p).norm_sqr() - t * t, n).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arm::r_inverse;
    use crate::geom::wrap_angle;

    fn arm(a: f64, b: f64, c: f64) -> ArmLinkage {
        ArmLinkage::new(a, b, c).unwrap()
    }

    #[test]
    fn slice_images() {
        let l = arm(4., 2., 1.);
        let s = t_slice(&l, 7.0).unwrap();
        assert_eq!(s.degenerate, Some(DegenerateCase::LongAligned));
        match s.image {
            SliceImage::Point(z) => assert!((z - Complex64::new(-3.5, 0.0)).norm() < 1e-12),
            _ => panic!("expected a point"),
        }
        let s = t_slice(&l, 2.0).unwrap();
        assert!((s.radius - 1.0).abs() < 1e-15);
        assert_eq!(s.components, 1);
        let s = t_slice(&l, 4.0).unwrap();
        assert_eq!(s.components, 2);
        assert!(t_slice(&l, 0.5).is_err());
        assert!(t_slice(&l, 7.5).is_err());
        let s = t_slice(&arm(4., 3., 2.), 0.0).unwrap();
        assert_eq!(s.image, SliceImage::Point(Complex64::new(0.0, 0.0)));
        assert_eq!(s.components, 2);
    }

    #[test]
    fn morse_slices_are_degenerate() {
        let l = arm(4., 2., 1.);
        for t in [3.0, 5.0] {
            assert_eq!(t_slice(&l, t).unwrap().degenerate, Some(DegenerateCase::ShortAligned));
        }
        assert_eq!(t_slice(&l, 1.0).unwrap().degenerate, Some(DegenerateCase::LongAligned));
        let l = ArmLinkage::from_decimals(&["0.4", "0.2", "0.1"]).unwrap();
        assert!(t_slice(&l, 0.4 - 0.2 + 0.1).unwrap().degenerate.is_some());
    }

    #[test]
    fn level_sets_lie_on_the_slice_arc() {
        let l = arm(4., 2., 1.);
        for t in [1.5, 2.0, 4.0, 6.5] {
            let s = t_slice(&l, t).unwrap();
            let SliceImage::Arc(arc) = s.image else { panic!() };
            let f = |p: TorusPoint| end_vector(&l, p).norm_sqr() - t * t;
            let g = |p: TorusPoint| {
                let e = end_vector(&l, p);
                let dp = Complex64::from_polar(l.b(), p.phi) * Complex64::i();
                let de = Complex64::from_polar(l.c(), p.eta) * Complex64::i();
                (2.0 * (e.conj() * dp).re, 2.0 * (e.conj() * de).re)
            };
            let mut cs = zero_contours(f, 128);
            assert_eq!(cs.len(), s.components);
            for c in &mut cs {
                c.project(f, g, 1e-13);
                for p in &c.points {
                    let w = r_inverse(&l, *p);
                    assert!((w.norm() - arc.radius).abs() < 1e-9);
                    assert!(arc.contains_arg(wrap_angle(w.arg()), 1e-7));
                }
            }
        }
    }
}

//! Extended-plane geometry of four-point configurations.
//!
//! Points of the plane are complex numbers. The two cross-ratio orderings
//! used throughout the crate are
//!
//! * `Cr(V) = [v1, v2; v3, v4]`, the cross-ratio of the configuration, and
//! * `R(V) = [v1, v3; v2, v4]`, the *uniformizer*, with `Cr = 1 - R`.
//!
//! On a closed linkage `|R|` only depends on the side lengths, which is what
//! makes `R` the convenient coordinate on the image.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{LinkageError, Result};

/// Relative threshold below which a cross-ratio denominator counts as zero.
pub const DEFAULT_EPS: f64 = 1e-12;

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            ExtendedComplex::Finite(z) => Some(z),
            ExtendedComplex::Infinity => None,
        }
    }

    /// `1 - self`, with infinity fixed.
    pub fn one_minus(&self) -> ExtendedComplex {
        match *self {
            ExtendedComplex::Finite(z) => ExtendedComplex::Finite(Complex64::new(1.0, 0.0) - z),
            ExtendedComplex::Infinity => ExtendedComplex::Infinity,
        }
    }

    /// Infinity is real; finite values are real when the imaginary part is below `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        match *self {
            ExtendedComplex::Finite(z) => z.im.abs() <= tol,
            ExtendedComplex::Infinity => true,
        }
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        ExtendedComplex::Finite(z)
    }
}

/// Reduce an angle to `[0, 2π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed difference `a - b` reduced to `(-π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

fn max_pairwise(points: &[Complex64]) -> f64 {
    let mut m = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            m = m.max((p - q).norm());
        }
    }
    m
}

/// Cross-ratio `[p, q; z, w] = ((z-p)/(z-q)) / ((w-p)/(w-q))` with the default tolerance.
pub fn cross_ratio(
    p: Complex64,
    q: Complex64,
    z: Complex64,
    w: Complex64,
) -> Result<ExtendedComplex> {
    cross_ratio_eps(p, q, z, w, DEFAULT_EPS)
}

/// Cross-ratio with an explicit coincidence tolerance `eps`, relative to the
/// largest pairwise distance of the four points.
///
/// Coinciding pairs give the exact values `0`, `1` and infinity. A
/// denominator smaller than `eps * scale²` maps to infinity.
pub fn cross_ratio_eps(
    p: Complex64,
    q: Complex64,
    z: Complex64,
    w: Complex64,
    eps: f64,
) -> Result<ExtendedComplex> {
    let pts = [p, q, z, w];
    let scale = max_pairwise(&pts);
    if scale == 0.0 {
        return Err(LinkageError::ThreePointsCoincide);
    }
    let tol = eps * scale;
    let same = |x: Complex64, y: Complex64| (x - y).norm() <= tol;
    if three_coincide(&pts, tol) {
        return Err(LinkageError::ThreePointsCoincide);
    }

    if same(z, p) || same(w, q) {
        return Ok(ExtendedComplex::Finite(Complex64::new(0.0, 0.0)));
    }
    if same(z, q) || same(w, p) {
        return Ok(ExtendedComplex::Infinity);
    }
    if same(p, q) || same(z, w) {
        return Ok(ExtendedComplex::Finite(Complex64::new(1.0, 0.0)));
    }

    let num = (z - p) * (w - q);
    let den = (z - q) * (w - p);
    if den.norm() <= eps * scale * scale {
        return Ok(ExtendedComplex::Infinity);
    }
    Ok(ExtendedComplex::Finite(num / den))
}

fn three_coincide(pts: &[Complex64; 4], tol: f64) -> bool {
    const TRIPLES: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    TRIPLES.iter().any(|t| {
        let [i, j, k] = *t;
        (pts[i] - pts[j]).norm() <= tol
            && (pts[j] - pts[k]).norm() <= tol
            && (pts[i] - pts[k]).norm() <= tol
    })
}

/// Whether a configuration closes up (quadrilateral) or is an open 3-arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConfigKind {
    Closed,
    Open,
}

/// Four vertices `v1..v4` in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanarConfig {
    vertices: [Complex64; 4],
    kind: ConfigKind,
}

impl PlanarConfig {
    /// Builds a configuration, rejecting inputs where three vertices coincide.
    pub fn new(vertices: [Complex64; 4], kind: ConfigKind) -> Result<Self> {
        let scale = max_pairwise(&vertices);
        if scale == 0.0 || three_coincide(&vertices, DEFAULT_EPS * scale) {
            return Err(LinkageError::ThreePointsCoincide);
        }
        Ok(Self { vertices, kind })
    }

    pub fn vertices(&self) -> [Complex64; 4] {
        self.vertices
    }

    /// Vertex `v_i` with one-based `i`, matching the usual labels.
    pub fn v(&self, i: usize) -> Complex64 {
        self.vertices[i - 1]
    }

    pub fn kind(&self) -> ConfigKind {
        self.kind
    }

    /// `|v2-v1|, |v3-v2|, |v4-v3|, |v1-v4|`.
    pub fn side_lengths(&self) -> [f64; 4] {
        let v = &self.vertices;
        [
            (v[1] - v[0]).norm(),
            (v[2] - v[1]).norm(),
            (v[3] - v[2]).norm(),
            (v[0] - v[3]).norm(),
        ]
    }

    /// Largest distance between two vertices.
    pub fn scale(&self) -> f64 {
        max_pairwise(&self.vertices)
    }

    /// Mirror image in the real axis.
    pub fn conjugate(&self) -> Self {
        Self {
            vertices: self.vertices.map(|z| z.conj()),
            kind: self.kind,
        }
    }

    /// Representative with `v1 = 0` and `v2` on the positive real axis.
    ///
    /// When `v1 = v2` only the translation is applied.
    pub fn canonical(&self) -> Self {
        let origin = self.vertices[0];
        let d = self.vertices[1] - origin;
        let rot = if d.norm() > 0.0 {
            d.conj() / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut vertices = self.vertices.map(|z| (z - origin) * rot);
        vertices[0] = Complex64::new(0.0, 0.0);
        vertices[1] = Complex64::new(vertices[1].re, 0.0);
        Self {
            vertices,
            kind: self.kind,
        }
    }

    /// Applies `z ↦ a z + b` to every vertex.
    pub fn affine(&self, a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(self.vertices.map(|z| a * z + b), self.kind)
    }
}

/// `Cr(V) = [v1, v2; v3, v4]`.
pub fn config_cross_ratio(v: &PlanarConfig) -> Result<ExtendedComplex> {
    cross_ratio(v.v(1), v.v(2), v.v(3), v.v(4))
}

/// `R(V) = [v1, v3; v2, v4]`; satisfies `Cr(V) = 1 - R(V)`.
pub fn uniformizer(v: &PlanarConfig) -> Result<ExtendedComplex> {
    cross_ratio(v.v(1), v.v(3), v.v(2), v.v(4))
}

/// Angles at `v2` and `v4`, both in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnglePair {
    pub alpha: f64,
    pub gamma: f64,
}

/// `alpha = arg((v3-v2)/(v1-v2))`, `gamma = arg((v1-v4)/(v3-v4))`.
pub fn angles(v: &PlanarConfig) -> Result<AnglePair> {
    let w = v.vertices();
    let tol = DEFAULT_EPS * v.scale();
    for i in 0..4 {
        let j = (i + 1) % 4;
        if (w[j] - w[i]).norm() <= tol {
            return Err(LinkageError::AdjacentVerticesCoincide(i + 1, j + 1));
        }
    }
    let alpha = ((w[2] - w[1]) / (w[0] - w[1])).arg();
    let gamma = ((w[0] - w[3]) / (w[2] - w[3])).arg();
    Ok(AnglePair {
        alpha: wrap_angle(alpha),
        gamma: wrap_angle(gamma),
    })
}

/// Shoelace area of the vertex 4-cycle. Positive for counter-clockwise
/// convex quadrilaterals.
pub fn signed_area(v: &PlanarConfig) -> f64 {
    let w = v.vertices();
    let twice: f64 = (0..4)
        .map(|k| {
            let (p, q) = (w[k], w[(k + 1) % 4]);
            p.re * q.im - q.re * p.im
        })
        .sum();
    0.5 * twice
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square() -> PlanarConfig {
        PlanarConfig::new([c(0., 0.), c(1., 0.), c(1., 1.), c(0., 1.)], ConfigKind::Closed).unwrap()
    }

    #[test]
    fn cross_ratio_direct_substitution() {
        let v = cross_ratio(c(0., 0.), c(2., 0.), c(1., 0.), c(3., 0.)).unwrap();
        let z = v.finite().unwrap();
        assert_abs_diff_eq!(z.re, -1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(z.im, 0.0);
    }

    #[test]
    fn coinciding_pairs_give_special_values() {
        let w = c(0.3, 2.0);
        assert_eq!(
            cross_ratio(c(0., 0.), c(1., 0.), c(0., 0.), w).unwrap(),
            ExtendedComplex::Finite(c(0., 0.))
        );
        assert_eq!(
            cross_ratio(c(0., 0.), c(1., 0.), c(1., 0.), w).unwrap(),
            ExtendedComplex::Infinity
        );
        assert_eq!(
            cross_ratio(c(0., 0.), c(0., 0.), c(1., 0.), w).unwrap(),
            ExtendedComplex::Finite(c(1., 0.))
        );
    }

    #[test]
    fn three_coinciding_points_rejected() {
        let e = cross_ratio(c(1., 1.), c(1., 1.), c(1., 1.), c(0., 0.));
        assert_eq!(e, Err(LinkageError::ThreePointsCoincide));
        assert!(PlanarConfig::new([c(0., 0.); 4], ConfigKind::Open).is_err());
    }

    #[test]
    fn unit_square_values() {
        let sq = square();
        let cr = config_cross_ratio(&sq).unwrap().finite().unwrap();
        assert_abs_diff_eq!(cr.re, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cr.im, 0.0, epsilon = 1e-15);
        let r = uniformizer(&sq).unwrap().finite().unwrap();
        assert_abs_diff_eq!(r.re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(signed_area(&sq), 1.0);
    }

    #[test]
    fn square_angles_follow_orientation() {
        // arg((v3-v2)/(v1-v2)) = arg(-i) for the counter-clockwise square
        let a = angles(&square()).unwrap();
        assert_abs_diff_eq!(a.alpha, 1.5 * PI, epsilon = 1e-15);
        assert_abs_diff_eq!(a.gamma, 1.5 * PI, epsilon = 1e-15);
        let m = angles(&square().conjugate()).unwrap();
        assert_abs_diff_eq!(m.alpha, 0.5 * PI, epsilon = 1e-15);
        assert_abs_diff_eq!(m.gamma, 0.5 * PI, epsilon = 1e-15);
    }

    #[test]
    fn collinear_angles_are_flat() {
        let v = PlanarConfig::new([c(0., 0.), c(2., 0.), c(1., 0.), c(3., 0.)], ConfigKind::Closed)
            .unwrap();
        let a = angles(&v).unwrap();
        for x in [a.alpha, a.gamma] {
            assert!(x.abs() < 1e-15 || (x - PI).abs() < 1e-15, "{x}");
        }
        assert_eq!(signed_area(&v), 0.0);
    }

    #[test]
    fn adjacent_coincidence_rejected_by_angles() {
        let v = PlanarConfig::new([c(0., 0.), c(0., 0.), c(1., 0.), c(0., 1.)], ConfigKind::Closed)
            .unwrap();
        assert_eq!(angles(&v), Err(LinkageError::AdjacentVerticesCoincide(1, 2)));
    }

    #[test]
    fn open_arm_area_vanishes() {
        let v = PlanarConfig::new([c(0., 0.), c(1., 0.), c(1., 1.), c(2., 1.)], ConfigKind::Open)
            .unwrap();
        assert_abs_diff_eq!(signed_area(&v), 0.0);
    }

    #[test]
    fn conjugation_symmetries() {
        let v = PlanarConfig::new(
            [c(0., 0.), c(3., 0.), c(2.2, 1.7), c(-0.4, 1.1)],
            ConfigKind::Closed,
        )
        .unwrap();
        let cr = config_cross_ratio(&v).unwrap().finite().unwrap();
        let crc = config_cross_ratio(&v.conjugate()).unwrap().finite().unwrap();
        assert_abs_diff_eq!(cr.re, crc.re, epsilon = 1e-14);
        assert_abs_diff_eq!(cr.im, -crc.im, epsilon = 1e-14);
        assert_abs_diff_eq!(signed_area(&v), -signed_area(&v.conjugate()), epsilon = 1e-14);
    }

    #[test]
    fn canonical_form_fixes_first_edge() {
        let v = PlanarConfig::new(
            [c(1., 1.), c(1., 3.), c(-1., 3.), c(-0.5, 1.5)],
            ConfigKind::Closed,
        )
        .unwrap();
        let k = v.canonical();
        assert_eq!(k.v(1), c(0., 0.));
        assert_abs_diff_eq!(k.v(2).re, 2.0, epsilon = 1e-15);
        assert_eq!(k.v(2).im, 0.0);
        for (x, y) in v.side_lengths().iter().zip(k.side_lengths()) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(signed_area(&v), signed_area(&k), epsilon = 1e-14);
    }

    #[test]
    fn wrap_and_diff() {
        assert_eq!(wrap_angle(-1e-20), 0.0);
        assert_abs_diff_eq!(wrap_angle(-PI / 2.0), 1.5 * PI);
        assert_abs_diff_eq!(angle_diff(0.1, TAU - 0.1), 0.2, epsilon = 1e-15);
    }
}

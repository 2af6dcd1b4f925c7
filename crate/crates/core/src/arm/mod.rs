//! Planar robot 3-arms: a four-bar whose fourth side is telescopic.
//!
//! The moduli space is the torus of link directions `(phi, eta)` with
//! vertices `0, a, a + b·e^{iφ}, a + b·e^{iφ} + c·e^{iη}`. Everything is
//! computed in the chart at infinity, i.e. on values of `R⁻¹`.

mod annulus;
mod contour;
mod fold;
mod preimage;
mod slice;

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{LinkageError, Result};
use crate::geom::{wrap_angle, ConfigKind, PlanarConfig};

pub use annulus::{
    annulus_image, morse_points, movie_frames, AnnulusImage, MorseKind, MorsePoint, MovieFrame,
    DEFAULT_FRAMES,
};
pub use contour::{count_sign_regions, zero_contours, Contour};
pub use fold::{
    critical_set, fold_image, fold_transversality, jet2_at_aligned, predicted_region_count,
    Jet2, JetVerdict, DEFAULT_GRID,
};
pub use preimage::{preimage_count, preimages, PreimageCount};
pub use slice::{level_set_components, t_slice, SliceImage, TSlice};

/// Whether the arm can close up into a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ArmCase {
    /// The longest link exceeds the sum of the other two.
    NoClosed,
    /// The longest link is shorter than the sum of the others.
    ContainsTriangle,
}

/// Three positive link lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmLinkage {
    lengths: [f64; 3],
    exact: [BigRational; 3],
}

/// A point of the moduli torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorusPoint {
    pub phi: f64,
    pub eta: f64,
}

impl TorusPoint {
    pub fn new(phi: f64, eta: f64) -> Self {
        Self {
            phi: wrap_angle(phi),
            eta: wrap_angle(eta),
        }
    }

    pub fn conjugate(&self) -> Self {
        Self::new(-self.phi, -self.eta)
    }

    /// Distance on the flat torus.
    pub fn distance(&self, other: &TorusPoint) -> f64 {
        use crate::geom::angle_diff;
        angle_diff(self.phi, other.phi).hypot(angle_diff(self.eta, other.eta))
    }

    /// The four aligned positions `{0, π}²`.
    pub fn aligned() -> [TorusPoint; 4] {
        use std::f64::consts::PI;
        [
            TorusPoint::new(0.0, 0.0),
            TorusPoint::new(PI, 0.0),
            TorusPoint::new(0.0, PI),
            TorusPoint::new(PI, PI),
        ]
    }
}

impl ArmLinkage {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let lengths = [a, b, c];
        if lengths.iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(LinkageError::InvalidLength(lengths.to_vec()));
        }
        let exact = lengths.map(|x| BigRational::from_float(x).expect("finite length"));
        Ok(Self { lengths, exact })
    }

    /// Parses comma-separated decimals; genericity is then decided on the
    /// decimal values.
    pub fn from_decimals(parts: &[&str]) -> Result<Self> {
        if parts.len() != 3 {
            return Err(LinkageError::Parse(parts.join(",")));
        }
        let mut lengths = [0.0; 3];
        let mut exact: [BigRational; 3] = Default::default();
        for (i, s) in parts.iter().enumerate() {
            let s = s.trim();
            let q = crate::quad::parse_decimal(s).ok_or_else(|| LinkageError::Parse(s.into()))?;
            let x: f64 = s.parse().map_err(|_| LinkageError::Parse(s.into()))?;
            if !x.is_finite() || !q.is_positive() {
                return Err(LinkageError::InvalidLength(vec![x]));
            }
            lengths[i] = x;
            exact[i] = q;
        }
        Ok(Self { lengths, exact })
    }

    pub fn lengths(&self) -> [f64; 3] {
        self.lengths
    }
    pub fn a(&self) -> f64 {
        self.lengths[0]
    }
    pub fn b(&self) -> f64 {
        self.lengths[1]
    }
    pub fn c(&self) -> f64 {
        self.lengths[2]
    }

    pub(crate) fn exact(&self) -> &[BigRational; 3] {
        &self.exact
    }

    pub fn case(&self) -> ArmCase {
        let [a, b, c] = &self.exact;
        let total = a + b + c;
        let longest = self.exact.iter().max().expect("three lengths");
        if longest.clone() * BigRational::from_integer(2.into()) > total {
            ArmCase::NoClosed
        } else {
            ArmCase::ContainsTriangle
        }
    }

    /// Whether the first link is the longest, the labeling assumed by the
    /// movie pictures. Computations never relabel.
    pub fn longest_first(&self) -> bool {
        self.lengths[0] >= self.lengths[1] && self.lengths[0] >= self.lengths[2]
    }

    /// Rejects arms whose aligned lengths `|±a±b±c|` vanish or coincide.
    pub fn require_generic(&self) -> Result<()> {
        let [a, b, c] = &self.exact;
        let named = [
            ("a+b+c", a + b + c),
            ("|a+b-c|", (a + b - c).abs()),
            ("|a-b+c|", (a - b + c).abs()),
            ("|a-b-c|", (a - b - c).abs()),
        ];
        let vanishing = [("c = a + b", a + b - c), ("b = a + c", a - b + c), ("a = b + c", a - b - c)];
        for (msg, v) in &vanishing {
            if v.is_zero() {
                return Err(LinkageError::NonGenericArm(msg.to_string()));
            }
        }
        for i in 0..named.len() {
            for j in i + 1..named.len() {
                if named[i].1 == named[j].1 {
                    return Err(LinkageError::NonGenericArm(format!(
                        "aligned lengths coincide: {} = {}",
                        named[i].0, named[j].0
                    )));
                }
            }
        }
        Ok(())
    }

    /// Attainable end-to-end distances `[t_min, a + b + c]`.
    pub fn t_range(&self) -> (f64, f64) {
        let [a, b, c] = self.lengths;
        let longest = a.max(b).max(c);
        ((2.0 * longest - a - b - c).max(0.0), a + b + c)
    }

    /// Radius `b(a+b+c)/(ac)` of the disc about 0 containing the image of `R⁻¹`.
    pub fn disc_radius(&self) -> f64 {
        let [a, b, c] = self.lengths;
        b * (a + b + c) / (a * c)
    }

    fn chart_factor(&self) -> f64 {
        -self.b() / (self.a() * self.c())
    }

    /// `|J|` scale for relative tolerances.
    pub(crate) fn jacobian_scale(&self) -> f64 {
        let [a, b, c] = self.lengths;
        a * b + a * c + b * c
    }
}

impl fmt::Display for ArmLinkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.lengths;
        write!(f, "A({a}, {b}, {c})")
    }
}

impl std::str::FromStr for ArmLinkage {
    type Err = LinkageError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        Self::from_decimals(&parts)
    }
}

impl Serialize for ArmLinkage {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.lengths.serialize(s)
    }
}

/// `a + b·e^{iφ} + c·e^{iη}`, the closing vector `v4 - v1`.
pub fn end_vector(l: &ArmLinkage, p: TorusPoint) -> Complex64 {
    Complex64::new(l.a(), 0.0)
        + Complex64::from_polar(l.b(), p.phi)
        + Complex64::from_polar(l.c(), p.eta)
}

/// End-to-end distance `t = |v4 - v1|`.
pub fn end_to_end(l: &ArmLinkage, p: TorusPoint) -> f64 {
    end_vector(l, p).norm()
}

pub fn arm_config(l: &ArmLinkage, p: TorusPoint) -> PlanarConfig {
    let v1 = Complex64::new(0.0, 0.0);
    let v2 = Complex64::new(l.a(), 0.0);
    let v3 = v2 + Complex64::from_polar(l.b(), p.phi);
    let v4 = v3 + Complex64::from_polar(l.c(), p.eta);
    // consecutive vertices are distinct, so no three can coincide
    PlanarConfig::new([v1, v2, v3, v4], ConfigKind::Open).expect("arm vertices")
}

/// `R⁻¹ = -(b/ac)·(a + b·e^{iφ} + c·e^{iη})·e^{i(φ-η)}`.
pub fn r_inverse(l: &ArmLinkage, p: TorusPoint) -> Complex64 {
    end_vector(l, p) * Complex64::from_polar(l.chart_factor(), p.phi - p.eta)
}

/// Partial derivatives `(∂R⁻¹/∂φ, ∂R⁻¹/∂η)`.
pub fn r_inverse_partials(l: &ArmLinkage, p: TorusPoint) -> (Complex64, Complex64) {
    let [a, b, c] = l.lengths();
    let k = Complex64::new(0.0, l.chart_factor());
    let e1 = Complex64::from_polar(1.0, p.phi - p.eta);
    let e2 = Complex64::from_polar(1.0, 2.0 * p.phi - p.eta);
    let e3 = Complex64::from_polar(1.0, p.phi);
    let d_phi = k * (a * e1 + 2.0 * b * e2 + c * e3);
    let d_eta = -k * (a * e1 + b * e2);
    (d_phi, d_eta)
}

/// `ab·sin φ + ac·sin η + bc·sin(η - φ)`, twice the signed area of the arm.
pub fn jacobian(l: &ArmLinkage, p: TorusPoint) -> f64 {
    let [a, b, c] = l.lengths();
    a * b * p.phi.sin() + a * c * p.eta.sin() + b * c * (p.eta - p.phi).sin()
}

/// `(∂J/∂φ, ∂J/∂η)`.
pub fn jacobian_gradient(l: &ArmLinkage, p: TorusPoint) -> (f64, f64) {
    let [a, b, c] = l.lengths();
    let m = b * c * (p.eta - p.phi).cos();
    (a * b * p.phi.cos() - m, a * c * p.eta.cos() + m)
}

/// Distinct Morse values of `t`, ascending: the aligned lengths, plus `0`
/// when the arm can close.
pub fn morse_t_values(l: &ArmLinkage) -> Result<Vec<f64>> {
    l.require_generic()?;
    let [a, b, c] = l.lengths();
    let mut v = vec![a + b + c, (a + b - c).abs(), (a - b + c).abs(), (a - b - c).abs()];
    if l.case() == ArmCase::ContainsTriangle {
        v.push(0.0);
    }
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

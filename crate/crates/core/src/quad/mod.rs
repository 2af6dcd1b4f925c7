//! Closed four-bar linkages `Q(a, b, c, d)`.
//!
//! A configuration is written in the angle chart `(alpha, gamma)` of the
//! angles at `v2` and `v4`; the closing condition is
//! `g(alpha, gamma) = a² + b² - 2ab·cos(alpha) - c² - d² + 2cd·cos(gamma) = 0`.
//!
//! Degeneracy, kite and parallelogram tests compare the side lengths exactly
//! (as rationals), never with a tolerance.

mod critical;
mod degenerate;
mod fiber;
mod trace;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{LinkageError, Result};

pub use critical::{critical_points, mapping_degree, FoldCertificate, MappingDegree};
pub use degenerate::{
    degenerate_case, degenerate_components, degenerate_image_report, ComponentBehavior,
    ComponentReport, DegenerateCase, DegenerateComponent, DegenerateImage, DegenerateImageReport,
};
pub use fiber::{cr_image, cyclic_configurations, r_image, solve_tau_fiber, tau_star};
pub use trace::{
    component_of, embed_config, g_residual, gamma_branches, trace_moduli, ModuliLayout,
    ModuliPoint, DEFAULT_SAMPLES,
};

/// Sign patterns `(s_b, s_c, s_d)` of the eight sums `a ± b ± c ± d`.
const SIGN_PATTERNS: [[i32; 3]; 8] = [
    [1, 1, 1],
    [1, 1, -1],
    [1, -1, 1],
    [-1, 1, 1],
    [1, -1, -1],
    [-1, 1, -1],
    [-1, -1, 1],
    [-1, -1, -1],
];

/// Four positive side lengths `|v1v2| = a`, `|v2v3| = b`, `|v3v4| = c`, `|v4v1| = d`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadLinkage {
    lengths: [f64; 4],
    exact: [BigRational; 4],
}

impl QuadLinkage {
    /// Builds a linkage from floating-point lengths. Exact tests use the
    /// binary values as given.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let lengths = [a, b, c, d];
        if lengths.iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(LinkageError::InvalidLength(lengths.to_vec()));
        }
        let exact = lengths.map(|x| BigRational::from_float(x).expect("finite length"));
        Self::from_parts(lengths, exact)
    }

    /// Parses decimal strings; exact tests then use the decimal values
    /// themselves, so `0.1, 0.2, 0.3, 0.6` is recognized as aligned.
    pub fn from_decimals(parts: &[&str]) -> Result<Self> {
        if parts.len() != 4 {
            return Err(LinkageError::Parse(parts.join(",")));
        }
        let mut lengths = [0.0; 4];
        let mut exact: [BigRational; 4] = Default::default();
        for (i, s) in parts.iter().enumerate() {
            let s = s.trim();
            let q = parse_decimal(s).ok_or_else(|| LinkageError::Parse(s.to_string()))?;
            let x: f64 = s.parse().map_err(|_| LinkageError::Parse(s.to_string()))?;
            if !x.is_finite() || !q.is_positive() {
                return Err(LinkageError::InvalidLength(vec![x]));
            }
            lengths[i] = x;
            exact[i] = q;
        }
        Self::from_parts(lengths, exact)
    }

    pub(crate) fn from_exact(exact: [BigRational; 4]) -> Result<Self> {
        use num_traits::ToPrimitive;
        let lengths = exact.clone().map(|q| q.to_f64().unwrap_or(f64::NAN));
        if lengths.iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(LinkageError::InvalidLength(lengths.to_vec()));
        }
        Self::from_parts(lengths, exact)
    }

    fn from_parts(lengths: [f64; 4], exact: [BigRational; 4]) -> Result<Self> {
        let total: BigRational = exact.iter().sum();
        let (imax, _) = lengths
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc });
        let rest = &total - &exact[imax];
        if exact[imax] > rest {
            return Err(LinkageError::NoRealization {
                longest: lengths[imax],
                rest: lengths.iter().sum::<f64>() - lengths[imax],
            });
        }
        Ok(Self { lengths, exact })
    }

    pub fn lengths(&self) -> [f64; 4] {
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
    pub fn d(&self) -> f64 {
        self.lengths[3]
    }

    /// Largest side, used to scale tolerances.
    pub fn scale(&self) -> f64 {
        self.lengths.iter().cloned().fold(0.0, f64::max)
    }

    fn exact_sum(&self, signs: [i32; 3]) -> BigRational {
        let [a, b, c, d] = &self.exact;
        let term = |s: i32, x: &BigRational| if s > 0 { x.clone() } else { -x.clone() };
        a.clone() + term(signs[0], b) + term(signs[1], c) + term(signs[2], d)
    }

    fn vanishing_sum(&self) -> Option<[i32; 3]> {
        SIGN_PATTERNS
            .iter()
            .copied()
            .find(|s| self.exact_sum(*s).is_zero())
    }

    /// True iff none of the eight sums `a ± b ± c ± d` vanishes.
    pub fn is_nondegenerate(&self) -> bool {
        self.vanishing_sum().is_none()
    }

    /// `Ok(())` for non-degenerate linkages, otherwise the vanishing sum.
    pub fn require_nondegenerate(&self) -> Result<()> {
        match self.vanishing_sum() {
            None => Ok(()),
            Some(s) => Err(LinkageError::Degenerate(format_sum(s))),
        }
    }

    pub fn grashof_signs(&self) -> GrashofSigns {
        let [a, b, c, d] = self.lengths;
        let long_aligned = [a - b - c - d, b - a - c - d, c - a - b - d, d - a - b - c]
            .iter()
            .map(|x| x.abs())
            .fold(f64::INFINITY, f64::min);
        GrashofSigns {
            p1: a + b - c - d,
            p2: a - b + c - d,
            p3: a - b - c + d,
            s: a + b + c + d,
            long_aligned,
        }
    }

    /// Exact sign (-1, 0, 1) of `P1·P2·P3`.
    pub fn product_sign(&self) -> i32 {
        [[1, -1, -1], [-1, 1, -1], [-1, -1, 1]]
            .iter()
            .map(|s| sign(&self.exact_sum(*s)))
            .product()
    }

    /// `R` is onto its circle iff `P1·P2·P3 ≤ 0` (strict for non-degenerate input).
    pub fn is_surjective(&self) -> Result<bool> {
        self.require_nondegenerate()?;
        Ok(self.product_sign() < 0)
    }

    /// The moduli space is connected iff `P1·P2·P3 ≥ 0`.
    pub fn is_connected(&self) -> bool {
        self.product_sign() >= 0
    }

    /// Whether one side equals the sum of the other three.
    pub fn is_long_aligned(&self) -> bool {
        let total: BigRational = self.exact.iter().sum();
        self.exact.iter().any(|x| (x.clone() * BigInt::from(2)) == total)
    }

    pub fn is_rhomboid(&self) -> bool {
        let e = &self.exact;
        e[0] == e[1] && e[1] == e[2] && e[2] == e[3]
    }

    /// `a = b, c = d`, or the rotated labeling `b = c, d = a`.
    pub fn kite_kind(&self) -> Option<KiteKind> {
        let e = &self.exact;
        if self.is_rhomboid() {
            None
        } else if e[0] == e[1] && e[2] == e[3] {
            Some(KiteKind::AbCd)
        } else if e[1] == e[2] && e[3] == e[0] {
            Some(KiteKind::BcDa)
        } else {
            None
        }
    }

    /// `a = c` and `b = d`, rhomboid excluded.
    pub fn is_parallelogram(&self) -> bool {
        let e = &self.exact;
        !self.is_rhomboid() && e[0] == e[2] && e[1] == e[3]
    }

    pub fn classify_topology(&self) -> ModuliTopology {
        self.classify_topology_detailed().topology
    }

    /// Topology together with a flag marking answers that come from the
    /// classifier's own decision rule rather than a stated result.
    pub fn classify_topology_detailed(&self) -> TopologyVerdict {
        use ModuliTopology::*;
        let (topology, classifier_decided) = if self.is_long_aligned() {
            (SinglePoint, false)
        } else if self.is_rhomboid() {
            (ThreeCirclesChain, false)
        } else if let Some(k) = self.kite_kind() {
            (TwoCirclesTwoPoints, k == KiteKind::BcDa)
        } else if self.is_parallelogram() {
            (TwoCirclesTwoPoints, false)
        } else {
            match self.product_sign() {
                0 => (BouquetTwoCircles, true),
                s if s < 0 => (TwoCircles, false),
                _ => (Circle, false),
            }
        };
        TopologyVerdict {
            topology,
            classifier_decided,
        }
    }

    /// `F_τ = 4a²b² + 4c²d² - (a²+b²-c²-d²)² - 8abcd·cos τ`.
    pub fn f_tau(&self, tau: f64) -> f64 {
        self.f_tau_constant() - 8.0 * self.a() * self.b() * self.c() * self.d() * tau.cos()
    }

    pub(crate) fn f_tau_constant(&self) -> f64 {
        let [a, b, c, d] = self.lengths;
        let k = a * a + b * b - c * c - d * d;
        4.0 * a * a * b * b + 4.0 * c * c * d * d - k * k
    }

    /// Radius `ac/bd` of the circle carrying the image of `R`.
    pub fn image_radius(&self) -> f64 {
        self.a() * self.c() / (self.b() * self.d())
    }
}

impl fmt::Display for QuadLinkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.lengths;
        write!(f, "Q({a}, {b}, {c}, {d})")
    }
}

impl FromStr for QuadLinkage {
    type Err = LinkageError;

    /// Comma-separated decimals, e.g. `"3,2,2,1.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        Self::from_decimals(&parts)
    }
}

impl Serialize for QuadLinkage {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.lengths.serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KiteKind {
    /// `a = b` and `c = d`.
    AbCd,
    /// `b = c` and `d = a`.
    BcDa,
}

/// The sign data that govern surjectivity and connectedness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GrashofSigns {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub s: f64,
    /// `min |l_i - Σ_{j≠i} l_j|`; zero exactly for long-aligned linkages.
    pub long_aligned: f64,
}

impl GrashofSigns {
    pub fn product(&self) -> f64 {
        self.p1 * self.p2 * self.p3
    }
}

/// Homeomorphism type of the planar moduli space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModuliTopology {
    Circle,
    TwoCircles,
    BouquetTwoCircles,
    TwoCirclesTwoPoints,
    ThreeCirclesChain,
    SinglePoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TopologyVerdict {
    pub topology: ModuliTopology,
    pub classifier_decided: bool,
}

fn sign(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn format_sum(s: [i32; 3]) -> String {
    let mut out = String::from("a");
    for (sg, name) in s.iter().zip(["b", "c", "d"]) {
        out.push(if *sg > 0 { '+' } else { '-' });
        out.push_str(name);
    }
    out
}

/// Exact value of a plain decimal literal (`12`, `-0.25`, `1.5e-3`).
pub(crate) fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num: BigInt = all.parse().ok()?;
    if neg {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let q = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(q)
}

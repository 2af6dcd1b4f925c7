use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use super::QuadLinkage;
use crate::error::{LinkageError, Result};
use crate::geom::{angle_diff, wrap_angle, ConfigKind, PlanarConfig};

/// Default number of angle samples per branch.
pub const DEFAULT_SAMPLES: usize = 1024;

const MIN_SAMPLES: usize = 16;
const MAX_REFINE_DEPTH: u32 = 40;

/// A point of the moduli space in the `(alpha, gamma)` chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModuliPoint {
    pub alpha: f64,
    pub gamma: f64,
    /// `+1` when `gamma ∈ [0, π]`, `-1` otherwise.
    pub branch: i8,
    pub component: usize,
}

impl ModuliPoint {
    pub(crate) fn new(alpha: f64, gamma: f64, component: usize) -> Self {
        let gamma = wrap_angle(gamma);
        Self {
            alpha: wrap_angle(alpha),
            gamma,
            branch: if gamma <= PI { 1 } else { -1 },
            component,
        }
    }

    /// `arg R = -(alpha + gamma)` reduced to `[0, 2π)`.
    pub fn arg_r(&self) -> f64 {
        wrap_angle(-(self.alpha + self.gamma))
    }
}

/// `g(alpha, gamma)`, the closing condition of the four-bar.
pub fn g_residual(l: &QuadLinkage, alpha: f64, gamma: f64) -> f64 {
    let [a, b, c, d] = l.lengths();
    a * a + b * b - 2.0 * a * b * alpha.cos() - c * c - d * d + 2.0 * c * d * gamma.cos()
}

pub(crate) fn cos_gamma(l: &QuadLinkage, alpha: f64) -> f64 {
    let [a, b, c, d] = l.lengths();
    (c * c + d * d - a * a - b * b + 2.0 * a * b * alpha.cos()) / (2.0 * c * d)
}

fn cos_alpha(l: &QuadLinkage, gamma: f64) -> f64 {
    let [a, b, c, d] = l.lengths();
    (a * a + b * b - c * c - d * d + 2.0 * c * d * gamma.cos()) / (2.0 * a * b)
}

/// Solutions of `cos θ = x` in `[0, 2π)`: two, one when `x = ±1`, none when `|x| > 1`.
fn arccos_pair(x: f64) -> Vec<f64> {
    if !(x.abs() <= 1.0 + 1e-12) {
        return Vec::new();
    }
    let x = x.clamp(-1.0, 1.0);
    if x.abs() == 1.0 {
        return vec![x.acos()];
    }
    let g = x.acos();
    vec![g, TAU - g]
}

/// All `gamma` closing the linkage for the given `alpha`.
pub fn gamma_branches(l: &QuadLinkage, alpha: f64) -> Vec<f64> {
    arccos_pair(cos_gamma(l, alpha))
}

/// Canonical realization (`v1 = 0`, `v2 = a`) of the angle pair.
pub fn embed_config(l: &QuadLinkage, alpha: f64, gamma: f64) -> Result<PlanarConfig> {
    let [a, b, c, d] = l.lengths();
    let scale = l.scale();
    let res = g_residual(l, alpha, gamma);
    if res.abs() > 1e-9 * scale * scale {
        return Err(LinkageError::ConstraintResidual(res));
    }
    let v1 = Complex64::new(0.0, 0.0);
    let v2 = Complex64::new(a, 0.0);
    let v3 = v2 - Complex64::from_polar(b, alpha);
    let den = Complex64::new(1.0, 0.0) - Complex64::from_polar(d / c, gamma);
    if den.norm() < 1e-12 || v3.norm() < 1e-12 * scale {
        // v1 = v3: the fourth vertex is not determined by the angles
        return Err(LinkageError::ConstraintResidual(v3.norm()));
    }
    let u = v3 / den;
    let v4 = v3 - u;
    let closing = ((v4 - v1).norm() - d).abs().max((u.norm() - c).abs());
    if closing > 1e-9 * scale {
        return Err(LinkageError::ConstraintResidual(closing));
    }
    PlanarConfig::new([v1, v2, v3, v4], ConfigKind::Closed)
}

/// How the reachable `alpha` set sits on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModuliLayout {
    /// Every `alpha` is reachable; the two `gamma` branches are separate loops.
    FullCircle,
    /// `alpha ∈ [lo, hi]` (`lo` may be negative), one loop.
    Interval { lo: f64, hi: f64 },
    /// Two conjugate intervals `[lo, hi]` and `[-hi, -lo]`, one loop each.
    TwoIntervals { lo: f64, hi: f64 },
}

impl ModuliLayout {
    pub fn of(l: &QuadLinkage) -> Self {
        let [a, b, c, d] = l.lengths();
        let base = a * a + b * b - c * c - d * d;
        // cos(alpha) where cos(gamma) = -1 and = +1 respectively
        let k_lo = (base - 2.0 * c * d) / (2.0 * a * b);
        let k_hi = (base + 2.0 * c * d) / (2.0 * a * b);
        match (k_lo <= -1.0, k_hi >= 1.0) {
            (true, true) => ModuliLayout::FullCircle,
            (false, true) => {
                let w = k_lo.clamp(-1.0, 1.0).acos();
                ModuliLayout::Interval { lo: -w, hi: w }
            }
            (true, false) => {
                let w = k_hi.clamp(-1.0, 1.0).acos();
                ModuliLayout::Interval { lo: w, hi: TAU - w }
            }
            (false, false) => ModuliLayout::TwoIntervals {
                lo: k_hi.clamp(-1.0, 1.0).acos(),
                hi: k_lo.clamp(-1.0, 1.0).acos(),
            },
        }
    }

    pub fn component_count(&self) -> usize {
        match self {
            ModuliLayout::Interval { .. } => 1,
            _ => 2,
        }
    }
}

/// Index of the traced component containing `(alpha, gamma)`.
pub fn component_of(l: &QuadLinkage, alpha: f64, gamma: f64) -> usize {
    match ModuliLayout::of(l) {
        ModuliLayout::FullCircle => usize::from(wrap_angle(gamma) > PI),
        ModuliLayout::Interval { .. } => 0,
        ModuliLayout::TwoIntervals { .. } => usize::from(wrap_angle(alpha) > PI),
    }
}

/// Samples every component of the moduli space as a closed loop.
///
/// Each branch is sampled on a uniform `alpha` grid of `n` steps; steps that
/// are long on the torus (near the turning points where the branches meet)
/// are subdivided by projecting midpoints back onto `g = 0`, so consecutive
/// points are within `π/n` of each other. Loops are oriented along
/// `(∂g/∂γ, -∂g/∂α)`.
pub fn trace_moduli(l: &QuadLinkage, n: usize) -> Result<Vec<Vec<ModuliPoint>>> {
    l.require_nondegenerate()?;
    if n < MIN_SAMPLES {
        return Err(LinkageError::TooFewSamples(n, MIN_SAMPLES));
    }
    let loops: Vec<Vec<(f64, f64)>> = match ModuliLayout::of(l) {
        ModuliLayout::FullCircle => [1.0, -1.0]
            .iter()
            .map(|&sgn| {
                (0..n)
                    .map(|k| {
                        let alpha = TAU * k as f64 / n as f64;
                        let g = cos_gamma(l, alpha).clamp(-1.0, 1.0).acos();
                        (alpha, sgn * g)
                    })
                    .collect()
            })
            .collect(),
        ModuliLayout::Interval { lo, hi } => vec![interval_loop(l, lo, hi, n)],
        ModuliLayout::TwoIntervals { lo, hi } => vec![
            interval_loop(l, lo, hi, n),
            interval_loop(l, TAU - hi, TAU - lo, n),
        ],
    };
    let max_step = PI / n as f64;
    Ok(loops
        .into_iter()
        .enumerate()
        .map(|(idx, pts)| {
            let pts = orient(l, refine_loop(l, &pts, max_step));
            pts.into_iter()
                .map(|(al, ga)| ModuliPoint::new(al, ga, idx))
                .collect()
        })
        .collect())
}

/// Upper branch from `lo` to `hi`, then the lower branch back.
pub(crate) fn interval_loop(l: &QuadLinkage, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let alphas: Vec<f64> = (0..=n)
        .map(|k| lo + (hi - lo) * k as f64 / n as f64)
        .collect();
    let upper = alphas.iter().map(|&al| (al, cos_gamma(l, al).clamp(-1.0, 1.0).acos()));
    let lower = alphas[1..n]
        .iter()
        .rev()
        .map(|&al| (al, -cos_gamma(l, al).clamp(-1.0, 1.0).acos()));
    upper.chain(lower).collect()
}

fn torus_dist(p: (f64, f64), q: (f64, f64)) -> f64 {
    angle_diff(p.0, q.0).hypot(angle_diff(p.1, q.1))
}

pub(crate) fn refine_loop(l: &QuadLinkage, pts: &[(f64, f64)], max_step: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(pts.len() * 2);
    for i in 0..pts.len() {
        let p = pts[i];
        let q = pts[(i + 1) % pts.len()];
        out.push(p);
        subdivide(l, p, q, max_step, MAX_REFINE_DEPTH, &mut out);
    }
    out
}

fn subdivide(
    l: &QuadLinkage,
    p: (f64, f64),
    q: (f64, f64),
    max_step: f64,
    depth: u32,
    out: &mut Vec<(f64, f64)>,
) {
    if depth == 0 || torus_dist(p, q) <= max_step {
        return;
    }
    let m = project_midpoint(l, p, q);
    subdivide(l, p, m, max_step, depth - 1, out);
    out.push(m);
    subdivide(l, m, q, max_step, depth - 1, out);
}

/// Midpoint of the chord `pq`, moved back onto `g = 0` along the axis in
/// which the curve is a graph.
fn project_midpoint(l: &QuadLinkage, p: (f64, f64), q: (f64, f64)) -> (f64, f64) {
    let [a, b, c, d] = l.lengths();
    let am = p.0 + 0.5 * angle_diff(q.0, p.0);
    let gm = p.1 + 0.5 * angle_diff(q.1, p.1);
    let ga = (2.0 * a * b * am.sin()).abs();
    let gg = (2.0 * c * d * gm.sin()).abs();
    let nearest = |cands: Vec<f64>, target: f64| {
        cands
            .into_iter()
            .min_by(|x, y| {
                angle_diff(*x, target)
                    .abs()
                    .total_cmp(&angle_diff(*y, target).abs())
            })
    };
    let by_alpha = || nearest(arccos_pair(cos_gamma(l, am)), gm).map(|g| (am, g));
    let by_gamma = || nearest(arccos_pair(cos_alpha(l, gm)), am).map(|al| (al, gm));
    let found = if gg >= ga {
        by_alpha().or_else(by_gamma)
    } else {
        by_gamma().or_else(by_alpha)
    };
    found.unwrap_or((am, gm))
}

fn orient(l: &QuadLinkage, pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let [a, b, c, d] = l.lengths();
    // pick the sample where the tangent field is strongest
    let mut best = (0.0, 0.0f64);
    for i in 0..pts.len() {
        let (al, ga) = pts[i];
        let t = (-2.0 * c * d * ga.sin(), -2.0 * a * b * al.sin());
        let next = pts[(i + 1) % pts.len()];
        let step = (angle_diff(next.0, al), angle_diff(next.1, ga));
        let dot = t.0 * step.0 + t.1 * step.1;
        if dot.abs() > best.1.abs() {
            best = (dot, dot);
        }
    }
    if best.0 < 0.0 {
        let mut rev = pts;
        rev.reverse();
        rev
    } else {
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{angles, signed_area};

    fn q(a: f64, b: f64, c: f64, d: f64) -> QuadLinkage {
        QuadLinkage::new(a, b, c, d).unwrap()
    }

    #[test]
    fn branches_of_square_linkage() {
        let g = gamma_branches(&q(1., 1., 1., 1.), PI / 2.0);
        assert_eq!(g.len(), 2);
        assert!((g[0] - PI / 2.0).abs() < 1e-15);
        assert!((g[1] - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn branches_by_substitution() {
        let g = gamma_branches(&q(3., 2., 2., 1.5), 0.0);
        assert_eq!(g.len(), 2);
        assert!((g[0].cos() - 0.875).abs() < 1e-15);
        assert!((g[1].cos() - 0.875).abs() < 1e-15);
        assert!(g[0] > 0.0 && g[1] > PI);
    }

    #[test]
    fn unreachable_angle_has_no_branch() {
        // (3,2,2,1.5): cos(gamma) at alpha = pi is (4+2.25-13-12)/6 < -1
        assert!(gamma_branches(&q(3., 2., 2., 1.5), PI).is_empty());
    }

    #[test]
    fn embedding_square() {
        let v = embed_config(&q(1., 1., 1., 1.), PI / 2.0, PI / 2.0).unwrap();
        let s = v.side_lengths();
        for x in s {
            assert!((x - 1.0).abs() < 1e-12);
        }
        // clockwise unit square
        assert!((v.v(3) - Complex64::new(1.0, -1.0)).norm() < 1e-12);
        assert!((v.v(4) - Complex64::new(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn embedding_reproduces_angles_and_mirrors() {
        let l = q(3., 2., 2., 1.5);
        for alpha in [0.1, 0.3, 6.0] {
            for gamma in gamma_branches(&l, alpha) {
                let v = embed_config(&l, alpha, gamma).unwrap();
                for (x, y) in v.side_lengths().iter().zip(l.lengths()) {
                    assert!((x - y).abs() < 1e-12);
                }
                let ang = angles(&v).unwrap();
                assert!(angle_diff(ang.alpha, alpha).abs() < 1e-12);
                assert!(angle_diff(ang.gamma, gamma).abs() < 1e-12);
                let m = embed_config(&l, -alpha, -gamma).unwrap();
                assert!((signed_area(&m) + signed_area(&v)).abs() < 1e-12);
                assert!((m.v(3) - v.v(3).conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn embedding_rejects_off_curve_angles() {
        assert!(matches!(
            embed_config(&q(3., 2., 2., 1.5), 0.0, 0.0),
            Err(LinkageError::ConstraintResidual(_))
        ));
    }

    #[test]
    fn layouts() {
        assert_eq!(ModuliLayout::of(&q(4., 1., 4., 2.)).component_count(), 2);
        assert_eq!(ModuliLayout::of(&q(3., 2., 2., 1.5)).component_count(), 1);
        assert_eq!(ModuliLayout::of(&q(4., 1., 4., 2.)), ModuliLayout::FullCircle);
        assert!(matches!(
            ModuliLayout::of(&q(3., 2.5, 1., 3.)),
            ModuliLayout::TwoIntervals { .. }
        ));
    }

    #[test]
    fn trace_counts_and_residuals() {
        for (l, count) in [(q(3., 2., 2., 1.5), 1), (q(4., 1., 4., 2.), 2), (q(3., 2.5, 1., 3.), 2)] {
            let comps = trace_moduli(&l, 64).unwrap();
            assert_eq!(comps.len(), count);
            for (i, comp) in comps.iter().enumerate() {
                assert!(comp.len() >= 64);
                for (j, p) in comp.iter().enumerate() {
                    assert_eq!(p.component, i);
                    assert!(g_residual(&l, p.alpha, p.gamma).abs() < 1e-9);
                    assert_eq!(component_of(&l, p.alpha, p.gamma), i);
                    let nx = comp[(j + 1) % comp.len()];
                    assert!(torus_dist((p.alpha, p.gamma), (nx.alpha, nx.gamma)) <= PI / 64.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn trace_rejects_bad_input() {
        assert!(matches!(
            trace_moduli(&q(1., 1., 1., 1.), 64),
            Err(LinkageError::Degenerate(_))
        ));
        assert!(matches!(
            trace_moduli(&q(3., 2., 2., 1.5), 8),
            Err(LinkageError::TooFewSamples(8, 16))
        ));
    }
}

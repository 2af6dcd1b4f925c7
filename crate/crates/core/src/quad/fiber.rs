use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::trace::{component_of, embed_config, g_residual, ModuliPoint};
use super::QuadLinkage;
use crate::arc::CircleArc;
use crate::error::Result;
use crate::geom::{config_cross_ratio, PlanarConfig};

/// `|C/√(A²+B²)|` within this distance of 1 is treated as tangency.
const TANGENCY_TOL: f64 = 1e-10;

/// Configurations with `arg R = tau`.
///
/// With `alpha = -tau - gamma` the closing condition becomes
/// `A·sin γ + B·cos γ = C` where `A = 2ab·sin τ`, `B = 2cd - 2ab·cos τ` and
/// `C = c² + d² - a² - b²`. Writing the left side as `ρ·cos(γ - φ)` gives
/// the solutions in closed form.
pub fn solve_tau_fiber(l: &QuadLinkage, tau: f64) -> Result<Vec<ModuliPoint>> {
    l.require_nondegenerate()?;
    let [a, b, c, d] = l.lengths();
    let coef_sin = 2.0 * a * b * tau.sin();
    let coef_cos = 2.0 * c * d - 2.0 * a * b * tau.cos();
    let rhs = c * c + d * d - a * a - b * b;
    let rho = coef_sin.hypot(coef_cos);
    let scale = l.scale();
    if rho <= 1e-14 * scale * scale {
        return Ok(Vec::new());
    }
    let ratio = rhs / rho;
    let phase = coef_sin.atan2(coef_cos);
    let gammas = if (ratio.abs() - 1.0).abs() <= TANGENCY_TOL {
        vec![phase + if ratio > 0.0 { 0.0 } else { PI }]
    } else if ratio.abs() > 1.0 {
        Vec::new()
    } else {
        let w = ratio.acos();
        vec![phase + w, phase - w]
    };
    let mut out: Vec<ModuliPoint> = gammas
        .into_iter()
        .map(|gamma| {
            let alpha = -tau - gamma;
            ModuliPoint::new(alpha, gamma, component_of(l, alpha, gamma))
        })
        .filter(|p| g_residual(l, p.alpha, p.gamma).abs() <= 1e-8 * scale * scale)
        .collect();
    out.sort_by(|x, y| x.gamma.total_cmp(&y.gamma));
    Ok(out)
}

/// Half-width `τ*` of the excluded arc: `F_τ ≥ 0` iff `cos τ ≤ cos τ*`.
/// `None` when every direction is attained.
pub fn tau_star(l: &QuadLinkage) -> Option<f64> {
    let [a, b, c, d] = l.lengths();
    let ratio = l.f_tau_constant() / (8.0 * a * b * c * d);
    if ratio >= 1.0 {
        None
    } else {
        Some(ratio.max(-1.0).acos())
    }
}

/// Image of the uniformizer: the circle of radius `ac/bd` about 0, or its
/// arc `[τ*, 2π - τ*]` when `R` is not onto.
pub fn r_image(l: &QuadLinkage) -> Result<CircleArc> {
    let surjective = l.is_surjective()?;
    let origin = Complex64::new(0.0, 0.0);
    let radius = l.image_radius();
    Ok(match (surjective, tau_star(l)) {
        (false, Some(ts)) => CircleArc::new(origin, radius, ts, TAU - ts),
        _ => CircleArc::full(origin, radius),
    })
}

/// Image of the cross-ratio, the reflection `w ↦ 1 - w` of [`r_image`].
pub fn cr_image(l: &QuadLinkage) -> Result<CircleArc> {
    let r = r_image(l)?;
    let one = Complex64::new(1.0, 0.0);
    Ok(if r.is_full() {
        CircleArc::full(one, r.radius)
    } else {
        CircleArc::new(one, r.radius, r.arg_lo - PI, r.arg_hi - PI)
    })
}

/// The cyclic configurations: fibers over `τ = 0` (self-intersecting) and
/// `τ = π` (convex), in that order.
pub fn cyclic_configurations(l: &QuadLinkage) -> Result<Vec<PlanarConfig>> {
    let mut out = Vec::new();
    for tau in [0.0, PI] {
        for p in solve_tau_fiber(l, tau)? {
            let v = embed_config(l, p.alpha, p.gamma)?;
            let cr = config_cross_ratio(&v)?;
            debug_assert!(cr.is_real(1e-9 * l.image_radius().max(1.0)));
            out.push(v);
        }
    }
    Ok(out)
}

use std::f64::consts::TAU;

use serde::Serialize;

use super::trace::{component_of, embed_config, trace_moduli, ModuliPoint};
use super::QuadLinkage;
use crate::error::Result;
use crate::geom::{angle_diff, signed_area, uniformizer};

/// A critical point of `arg R` on the moduli space, with the data showing it
/// is a fold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FoldCertificate {
    pub point: ModuliPoint,
    /// `2ab·sin α`, the inverse Lagrange multiplier.
    pub lambda_inv: f64,
    /// `-2ab·sin α·(2ab·cos α - 2cd·cos γ)`; nonzero at a fold.
    pub second_deriv: f64,
    /// Shoelace area of the realized configuration (zero at a fold).
    pub signed_area: f64,
    /// `arg R` at the fold, in `[0, 2π)`.
    pub arg_r: f64,
}

/// Solutions of `2ab·sin α + 2cd·sin γ = 0` on `g = 0`.
///
/// Squaring and adding `ab·sin α = -cd·sin γ` and `ab·cos α = K + cd·cos γ`
/// (with `K = (a²+b²-c²-d²)/2`) gives
/// `cos γ = (a²b² - c²d² - K²) / (2K·cd)`, and then `α` from both relations.
pub fn critical_points(l: &QuadLinkage) -> Result<Vec<FoldCertificate>> {
    l.require_nondegenerate()?;
    let [a, b, c, d] = l.lengths();
    let (ab, cd) = (a * b, c * d);
    let k = 0.5 * (a * a + b * b - c * c - d * d);
    if k == 0.0 {
        return Ok(Vec::new());
    }
    let cos_g = (ab * ab - cd * cd - k * k) / (2.0 * k * cd);
    if !(cos_g.abs() < 1.0) {
        return Ok(Vec::new());
    }
    let g0 = cos_g.acos();
    let mut out = Vec::with_capacity(2);
    for gamma in [g0, TAU - g0] {
        let sin_a = -cd * gamma.sin() / ab;
        let cos_a = (k + cd * gamma.cos()) / ab;
        let alpha = sin_a.atan2(cos_a);
        let point = ModuliPoint::new(alpha, gamma, component_of(l, alpha, gamma));
        let v = embed_config(l, point.alpha, point.gamma)?;
        let lambda_inv = 2.0 * ab * point.alpha.sin();
        let second_deriv =
            -lambda_inv * (2.0 * ab * point.alpha.cos() - 2.0 * cd * point.gamma.cos());
        out.push(FoldCertificate {
            point,
            lambda_inv,
            second_deriv,
            signed_area: signed_area(&v),
            arg_r: point.arg_r(),
        });
    }
    Ok(out)
}

/// Winding numbers of `R` along the traced components.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MappingDegree {
    pub per_component: Vec<i64>,
    pub total: i64,
    /// `|winding - round(winding)|` per component.
    pub residuals: Vec<f64>,
    /// Whether `arg R` moves in one direction only along each component.
    pub strictly_monotone: Vec<bool>,
}

/// Degree of `R` computed from the accumulated change of `arg R(V)` along
/// each oriented component, using the realized configurations.
pub fn mapping_degree(l: &QuadLinkage, n: usize) -> Result<MappingDegree> {
    let comps = trace_moduli(l, n)?;
    let mut per_component = Vec::with_capacity(comps.len());
    let mut residuals = Vec::with_capacity(comps.len());
    let mut strictly_monotone = Vec::with_capacity(comps.len());
    for comp in &comps {
        let args = comp
            .iter()
            .map(|p| {
                let v = embed_config(l, p.alpha, p.gamma)?;
                Ok(uniformizer(&v)?
                    .finite()
                    .map(|z| z.arg())
                    .unwrap_or(0.0))
            })
            .collect::<Result<Vec<f64>>>()?;
        let steps: Vec<f64> = (0..args.len())
            .map(|i| angle_diff(args[(i + 1) % args.len()], args[i]))
            .collect();
        let winding = steps.iter().sum::<f64>() / TAU;
        let rounded = winding.round();
        per_component.push(rounded as i64);
        residuals.push((winding - rounded).abs());
        strictly_monotone.push(steps.iter().all(|s| *s > 0.0) || steps.iter().all(|s| *s < 0.0));
    }
    Ok(MappingDegree {
        total: per_component.iter().sum(),
        per_component,
        residuals,
        strictly_monotone,
    })
}

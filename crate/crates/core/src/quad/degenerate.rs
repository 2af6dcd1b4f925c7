//! Moduli spaces with singular points (some `a ± b ± c ± d = 0`).
//!
//! Each case is sampled component by component from an explicit
//! parameterization, and the behavior of `R` on a component is measured from
//! the samples rather than asserted.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use super::trace::{cos_gamma, embed_config, interval_loop, refine_loop, ModuliLayout};
use super::{KiteKind, ModuliTopology, QuadLinkage};
use crate::arc::CircleArc;
use crate::error::{LinkageError, Result};
use crate::geom::{angle_diff, uniformizer, ConfigKind, PlanarConfig};
use num_traits::Zero;

/// Generic test direction for counting sheets of a covering.
const PROBE_ARG: f64 = 0.739_085_133_215_160_6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DegenerateCase {
    LongAligned,
    ShortAligned,
    Kite(KiteKind),
    Parallelogram,
    Rhomboid,
}

/// One component of a degenerate moduli space, sampled as a closed loop.
#[derive(Debug, Clone)]
pub struct DegenerateComponent {
    pub label: &'static str,
    pub samples: Vec<PlanarConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ComponentBehavior {
    /// The whole component maps to one point.
    Collapses { point: Complex64 },
    /// The component wraps around the image circle; `sheets` counts the
    /// preimages of a generic point, `winding` the signed degree.
    Covers { sheets: usize, winding: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "camelCase")]
pub enum DegenerateImage {
    Point(Complex64),
    Circle(CircleArc),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentReport {
    pub label: &'static str,
    pub behavior: ComponentBehavior,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DegenerateImageReport {
    pub case: DegenerateCase,
    pub topology: ModuliTopology,
    pub image: DegenerateImage,
    /// The point `ac/bd` on the positive real axis, image of the singular
    /// configurations.
    pub special_point: Complex64,
    pub components: Vec<ComponentReport>,
}

impl DegenerateImageReport {
    pub fn covering(&self) -> impl Iterator<Item = &ComponentReport> {
        self.components
            .iter()
            .filter(|c| matches!(c.behavior, ComponentBehavior::Covers { .. }))
    }

    pub fn collapsing(&self) -> impl Iterator<Item = &ComponentReport> {
        self.components
            .iter()
            .filter(|c| matches!(c.behavior, ComponentBehavior::Collapses { .. }))
    }
}

pub fn degenerate_case(l: &QuadLinkage) -> Option<DegenerateCase> {
    if l.is_nondegenerate() {
        None
    } else if l.is_long_aligned() {
        Some(DegenerateCase::LongAligned)
    } else if l.is_rhomboid() {
        Some(DegenerateCase::Rhomboid)
    } else if let Some(k) = l.kite_kind() {
        Some(DegenerateCase::Kite(k))
    } else if l.is_parallelogram() {
        Some(DegenerateCase::Parallelogram)
    } else {
        Some(DegenerateCase::ShortAligned)
    }
}

/// Samples every component of a degenerate moduli space with about `n`
/// points per loop.
pub fn degenerate_components(l: &QuadLinkage, n: usize) -> Result<Vec<DegenerateComponent>> {
    let case = degenerate_case(l).ok_or(LinkageError::NotDegenerate)?;
    let n = n.max(16);
    let [a, _, c, _] = l.lengths();
    let comps = match case {
        DegenerateCase::LongAligned => vec![DegenerateComponent {
            label: "point",
            samples: vec![aligned_config(l)?],
        }],
        DegenerateCase::ShortAligned => bouquet_loops(l, n)?,
        DegenerateCase::Kite(KiteKind::AbCd) => vec![
            DegenerateComponent {
                label: "kites",
                samples: embed_loop(l, &kite_loop(l, n), n),
            },
            DegenerateComponent {
                label: "folded v1=v3",
                samples: folded_diagonal(a, c, n),
            },
        ],
        DegenerateCase::Kite(KiteKind::BcDa) => vec![
            DegenerateComponent {
                label: "kites",
                samples: embed_loop(l, &diagonal_curve(n, 1.0), n),
            },
            DegenerateComponent {
                label: "folded v2=v4",
                samples: embed_loop(l, &diagonal_curve(n, -1.0), n),
            },
        ],
        DegenerateCase::Parallelogram => vec![
            DegenerateComponent {
                label: "parallelograms",
                samples: embed_loop(l, &diagonal_curve(n, 1.0), n),
            },
            DegenerateComponent {
                label: "counter-parallelograms",
                samples: embed_loop(l, &diagonal_curve(n, -1.0), n),
            },
        ],
        DegenerateCase::Rhomboid => vec![
            DegenerateComponent {
                label: "rhombi",
                samples: embed_loop(l, &diagonal_curve(n, 1.0), n),
            },
            DegenerateComponent {
                label: "folded v2=v4",
                samples: embed_loop(l, &diagonal_curve(n, -1.0), n),
            },
            DegenerateComponent {
                label: "folded v1=v3",
                samples: folded_diagonal(a, c, n),
            },
        ],
    };
    Ok(comps)
}

/// Image of `R` on a degenerate linkage, measured on sampled components.
pub fn degenerate_image_report(l: &QuadLinkage) -> Result<DegenerateImageReport> {
    let case = degenerate_case(l).ok_or(LinkageError::NotDegenerate)?;
    let comps = degenerate_components(l, 512)?;
    let radius = l.image_radius();
    let components = comps
        .iter()
        .map(|comp| {
            Ok(ComponentReport {
                label: comp.label,
                behavior: measure(&comp.samples, radius)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let image = match case {
        DegenerateCase::LongAligned => match components[0].behavior {
            ComponentBehavior::Collapses { point } => DegenerateImage::Point(point),
            ComponentBehavior::Covers { .. } => unreachable!("single configuration"),
        },
        _ => DegenerateImage::Circle(CircleArc::full(Complex64::new(0.0, 0.0), radius)),
    };
    Ok(DegenerateImageReport {
        case,
        topology: l.classify_topology(),
        image,
        special_point: Complex64::new(radius, 0.0),
        components,
    })
}

fn measure(samples: &[PlanarConfig], radius: f64) -> Result<ComponentBehavior> {
    let values = samples
        .iter()
        .map(|v| {
            uniformizer(v)?
                .finite()
                .ok_or(LinkageError::ThreePointsCoincide)
        })
        .collect::<Result<Vec<Complex64>>>()?;
    let first = values[0];
    let spread = values.iter().map(|z| (z - first).norm()).fold(0.0, f64::max);
    if spread <= 1e-9 * radius.max(1.0) {
        return Ok(ComponentBehavior::Collapses { point: first });
    }
    let args: Vec<f64> = values.iter().map(|z| z.arg()).collect();
    let mut total = 0.0;
    let mut sheets = 0;
    for i in 0..args.len() {
        let from = args[i];
        let step = angle_diff(args[(i + 1) % args.len()], from);
        total += step;
        let ahead = angle_diff(PROBE_ARG, from);
        if (step > 0.0 && ahead > 0.0 && ahead <= step) || (step < 0.0 && ahead < 0.0 && ahead >= step)
        {
            sheets += 1;
        }
    }
    Ok(ComponentBehavior::Covers {
        sheets,
        winding: (total / TAU).round() as i64,
    })
}

fn embed_loop(l: &QuadLinkage, pts: &[(f64, f64)], n: usize) -> Vec<PlanarConfig> {
    refine_loop(l, pts, PI / n as f64)
        .into_iter()
        .filter_map(|(al, ga)| embed_config(l, al, ga).ok())
        .collect()
}

/// The curve `gamma = sign·alpha`, sampled off the grid points `0` and `π`.
fn diagonal_curve(n: usize, sign: f64) -> Vec<(f64, f64)> {
    (0..n)
        .map(|k| {
            let al = TAU * (k as f64 + 0.5) / n as f64;
            (al, sign * al)
        })
        .collect()
}

/// `(0, a, 0, c·e^{iθ})`: the diagonal `v1v3` has collapsed.
fn folded_diagonal(a: f64, c: f64, n: usize) -> Vec<PlanarConfig> {
    (0..n)
        .filter_map(|k| {
            let theta = TAU * k as f64 / n as f64;
            PlanarConfig::new(
                [
                    Complex64::new(0.0, 0.0),
                    Complex64::new(a, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::from_polar(c, theta),
                ],
                ConfigKind::Closed,
            )
            .ok()
        })
        .collect()
}

fn upper(l: &QuadLinkage, alpha: f64) -> f64 {
    cos_gamma(l, alpha).clamp(-1.0, 1.0).acos()
}

/// Kites with `a = b`, `c = d`, away from the folded circle: one arc of the
/// chart curve followed by its reversed mirror image.
fn kite_loop(l: &QuadLinkage, n: usize) -> Vec<(f64, f64)> {
    let arc: Vec<(f64, f64)> = match ModuliLayout::of(l) {
        ModuliLayout::Interval { hi, .. } => interval_loop(l, 0.0, hi, n),
        _ => (1..n)
            .map(|k| {
                let al = TAU * k as f64 / n as f64;
                (al, upper(l, al))
            })
            .collect(),
    };
    let mirrored = arc.iter().rev().map(|&(al, ga)| (-al, -ga));
    arc.iter().copied().chain(mirrored).collect()
}

/// Two loops of the bouquet, split at the aligned node.
fn bouquet_loops(l: &QuadLinkage, n: usize) -> Result<Vec<DegenerateComponent>> {
    let node_alpha = node_alpha(l);
    let loops: Vec<Vec<(f64, f64)>> = match ModuliLayout::of(l) {
        ModuliLayout::FullCircle => [1.0, -1.0]
            .iter()
            .map(|&s| {
                (0..n)
                    .map(|k| {
                        let al = TAU * k as f64 / n as f64;
                        (al, s * upper(l, al))
                    })
                    .collect()
            })
            .collect(),
        ModuliLayout::Interval { lo, hi } => {
            let mid = if node_alpha == 0.0 { 0.0 } else { PI };
            vec![interval_loop(l, lo, mid, n), interval_loop(l, mid, hi, n)]
        }
        ModuliLayout::TwoIntervals { .. } => {
            return Err(LinkageError::Degenerate("short-aligned layout".into()))
        }
    };
    Ok(loops
        .iter()
        .enumerate()
        .map(|(i, pts)| DegenerateComponent {
            label: if i == 0 { "bouquet loop 1" } else { "bouquet loop 2" },
            samples: embed_loop(l, pts, n),
        })
        .collect())
}

/// `alpha` of the aligned node: `π` when `a + b = c + d`, else `0`.
fn node_alpha(l: &QuadLinkage) -> f64 {
    if l.exact_sum([1, -1, -1]).is_zero() {
        PI
    } else {
        0.0
    }
}

/// The unique configuration of a long-aligned linkage: all vertices on the
/// real axis with the long side running against the others.
fn aligned_config(l: &QuadLinkage) -> Result<PlanarConfig> {
    let lengths = l.lengths();
    let total: f64 = lengths.iter().sum();
    let (long, _) = lengths
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc });
    debug_assert!((2.0 * lengths[long] - total).abs() <= 1e-12 * total);
    // edge directions: +1 except the long side, then flip so that v2 - v1 > 0
    let flip = if long == 0 { 1.0 } else { -1.0 };
    let mut v = [Complex64::new(0.0, 0.0); 4];
    for i in 0..3 {
        let dir = if i == long { flip } else { -flip };
        v[i + 1] = v[i] + Complex64::new(dir * lengths[i], 0.0);
    }
    PlanarConfig::new(v, ConfigKind::Closed)
}

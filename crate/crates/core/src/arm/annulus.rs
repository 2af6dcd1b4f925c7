//! The image of `R⁻¹` as a union of slice images, swept by `t` (the "movie").

use num_complex::Complex64;
use serde::Serialize;

use super::fold::critical_set;
use super::slice::{level_set_components, t_slice, TSlice};
use super::{
    end_to_end, morse_t_values, r_inverse, ArmCase, ArmLinkage, TorusPoint,
};
use crate::error::{LinkageError, Result};

pub const DEFAULT_FRAMES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum MorseKind {
    Minimum,
    Saddle,
    Maximum,
}

/// A critical point of `t = |v4 - v1|` on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MorsePoint {
    pub point: TorusPoint,
    pub t: f64,
    pub kind: MorseKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MovieFrame {
    pub t: f64,
    pub slice: TSlice,
    /// Components of the level set counted on the torus grid; absent at
    /// Morse values, where the level set is singular.
    pub level_components: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnulusImage {
    pub lengths: [f64; 3],
    pub case: ArmCase,
    pub longest_first: bool,
    pub disc_radius: f64,
    pub morse_t_values: Vec<f64>,
    pub critical_points: Vec<MorsePoint>,
    /// Fold curve images, outermost (largest mean modulus) first.
    pub fold_curves: Vec<Vec<Complex64>>,
    pub frames: Vec<MovieFrame>,
}

impl AnnulusImage {
    pub fn outer_boundary(&self) -> &[Complex64] {
        &self.fold_curves[0]
    }

    pub fn inner_boundary(&self) -> &[Complex64] {
        self.fold_curves.last().expect("at least one fold curve")
    }

    pub fn count(&self, kind: MorseKind) -> usize {
        self.critical_points.iter().filter(|m| m.kind == kind).count()
    }

    /// Slice component counts on consecutive open intervals between Morse
    /// values, from the closed four-bars.
    pub fn interval_components(&self) -> Vec<usize> {
        let m = &self.morse_t_values;
        m.windows(2)
            .map(|w| {
                self.frames
                    .iter()
                    .find(|f| f.t > w[0] && f.t < w[1])
                    .map(|f| f.slice.components)
                    .unwrap_or(0)
            })
            .collect()
    }
}

/// Slice values for a movie with about `frames` frames: every Morse value,
/// every midpoint between consecutive ones, then evenly spaced fill.
pub fn movie_frames(l: &ArmLinkage, frames: usize) -> Result<Vec<f64>> {
    let morse = morse_t_values(l)?;
    let (lo, hi) = l.t_range();
    let mut ts = morse.clone();
    ts.extend(morse.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    let fill = frames.saturating_sub(ts.len());
    for k in 0..fill {
        ts.push(lo + (hi - lo) * (k as f64 + 0.5) / fill as f64);
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|x, y| (*x - *y).abs() <= 1e-9 * hi);
    Ok(ts)
}

/// Critical points of `t`: the four aligned positions, and the two
/// triangles when the arm can close.
pub fn morse_points(l: &ArmLinkage) -> Result<Vec<MorsePoint>> {
    l.require_generic()?;
    let [a, b, c] = l.lengths();
    let mut out = Vec::new();
    for p in TorusPoint::aligned() {
        // Hessian of |v4 - v1|² at the aligned position
        let m = 2.0 * b * c * (p.phi - p.eta).cos();
        let fpp = -2.0 * a * b * p.phi.cos() - m;
        let fee = -2.0 * a * c * p.eta.cos() - m;
        let fpe = m;
        let det = fpp * fee - fpe * fpe;
        let kind = if det < 0.0 {
            MorseKind::Saddle
        } else if fpp > 0.0 {
            MorseKind::Minimum
        } else {
            MorseKind::Maximum
        };
        out.push(MorsePoint {
            point: p,
            t: end_to_end(l, p),
            kind,
        });
    }
    if l.case() == ArmCase::ContainsTriangle {
        // the triangle with sides a, b, c: angle at v2 from the law of cosines
        let cos_phi = (c * c - a * a - b * b) / (2.0 * a * b);
        let phi = cos_phi.clamp(-1.0, 1.0).acos();
        let v3 = Complex64::new(a, 0.0) + Complex64::from_polar(b, phi);
        let eta = (-v3).arg();
        for p in [TorusPoint::new(phi, eta), TorusPoint::new(-phi, -eta)] {
            out.push(MorsePoint {
                point: p,
                t: 0.0,
                kind: MorseKind::Minimum,
            });
        }
    }
    out.sort_by(|x, y| x.t.total_cmp(&y.t));
    Ok(out)
}

/// Assembles the movie: slices at each frame, fold curve images and the
/// Morse data of `t`.
pub fn annulus_image(l: &ArmLinkage, frames: usize, grid: usize) -> Result<AnnulusImage> {
    if frames < 2 {
        return Err(LinkageError::TooFewSamples(frames, 2));
    }
    let morse = morse_t_values(l)?;
    let mut fold_curves: Vec<Vec<Complex64>> = critical_set(l, grid)?
        .iter()
        .map(|c| c.points.iter().map(|p| r_inverse(l, *p)).collect())
        .collect();
    let mean = |c: &Vec<Complex64>| c.iter().map(|z| z.norm()).sum::<f64>() / c.len() as f64;
    fold_curves.sort_by(|x, y| mean(y).total_cmp(&mean(x)));
    let level_grid = grid.min(256);
    let frames = movie_frames(l, frames)?
        .into_iter()
        .map(|t| {
            let slice = t_slice(l, t)?;
            let singular = morse.iter().any(|m| (m - t).abs() <= 1e-9 * l.t_range().1);
            let level_components = (!singular).then(|| level_set_components(l, t, level_grid));
            Ok(MovieFrame {
                t,
                slice,
                level_components,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AnnulusImage {
        lengths: l.lengths(),
        case: l.case(),
        longest_first: l.longest_first(),
        disc_radius: l.disc_radius(),
        morse_t_values: morse,
        critical_points: morse_points(l)?,
        fold_curves,
        frames,
    })
}

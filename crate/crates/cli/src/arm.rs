use std::fs;
use std::path::Path;

use anyhow::{Context as _, Result};
use linkage_core::arm::{
    annulus_image, count_sign_regions, critical_set, fold_transversality, jacobian,
    jet2_at_aligned, predicted_region_count, preimages, r_inverse, AnnulusImage, SliceImage,
    TSlice,
};
use linkage_core::{ArmLinkage, Complex64, TorusPoint};
use serde_json::json;

use crate::output::{self, Table};
use crate::svg::{torus_panel, Panel, Svg};
use crate::{Context, ManifestEntry, Outcome};

const ARC_SAMPLES: usize = 128;

pub fn parse(lengths: &str) -> Result<ArmLinkage> {
    let l: ArmLinkage = lengths.parse()?;
    l.require_generic()?;
    Ok(l)
}

fn slice_points(s: &TSlice) -> Vec<Complex64> {
    match s.image {
        SliceImage::Arc(arc) => arc.sample(ARC_SAMPLES),
        SliceImage::Point(z) => vec![z],
    }
}

fn image_panel(left: f64, top: f64, l: &ArmLinkage) -> Panel {
    Panel::centered(left, top, 400.0, 1.1 * l.disc_radius())
}

fn draw_slice(svg: &mut Svg, panel: &Panel, s: &TSlice, stroke: &str) {
    let pts: Vec<(f64, f64)> = slice_points(s).iter().map(|z| panel.mapz(*z)).collect();
    if pts.len() == 1 {
        svg.circle(pts[0], 3.0, stroke, stroke, false);
    } else {
        svg.polyline(&pts, stroke, 1.5, false);
    }
}

fn draw_folds(svg: &mut Svg, panel: &Panel, img: &AnnulusImage) {
    for curve in &img.fold_curves {
        let pts: Vec<(f64, f64)> = curve.iter().map(|z| panel.mapz(*z)).collect();
        svg.polyline(&pts, "#d62728", 2.0, true);
    }
}

fn disc(svg: &mut Svg, panel: &Panel, l: &ArmLinkage) {
    let px = panel.size / (panel.x1 - panel.x0);
    svg.circle(panel.map(0.0, 0.0), l.disc_radius() * px, "#bbbbbb", "none", true);
}

fn summary(l: &ArmLinkage, img: &AnnulusImage) -> serde_json::Value {
    json!({
        "lengths": l.lengths(),
        "caseTag": img.case,
        "longestFirst": img.longest_first,
        "discRadius": img.disc_radius,
        "morseTValues": img.morse_t_values,
        "criticalPoints": img.critical_points,
        "intervalComponents": img.interval_components(),
        "foldCurveCount": img.fold_curves.len(),
        "frames": img.frames.iter().map(|f| json!({
            "t": f.t,
            "radius": f.slice.radius,
            "image": f.slice.image,
            "degenerate": f.slice.degenerate,
            "components": f.slice.components,
            "levelComponents": f.level_components,
        })).collect::<Vec<_>>(),
    })
}

fn frame_table(frames: &[(usize, &TSlice)]) -> Table {
    let mut table = Table::new(
        "one row per sample of a slice image in the chart at infinity (values of 1/R)",
        vec!["frame", "t", "index", "re", "im"],
    );
    for (k, s) in frames {
        for (i, z) in slice_points(s).iter().enumerate() {
            table.push(vec![(*k).into(), s.t.into(), i.into(), z.re.into(), z.im.into()]);
        }
    }
    table
}

fn write_file(dir: &Path, name: &str, bytes: &[u8], manifest: &mut Vec<ManifestEntry>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
    manifest.push(ManifestEntry {
        path: path.display().to_string(),
        bytes: bytes.len() as u64,
    });
    Ok(())
}

pub fn movie(
    ctx: &Context,
    l: &ArmLinkage,
    frames: usize,
    grid: usize,
    emit_dir: Option<&Path>,
) -> Result<Outcome> {
    let img = annulus_image(l, frames, grid)?;
    let result = summary(l, &img);
    let mut manifest = Vec::new();
    if let Some(dir) = emit_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (k, f) in img.frames.iter().enumerate() {
            let mut svg = Svg::new(440.0, 450.0);
            let panel = image_panel(20.0, 30.0, l);
            svg.axes(&panel, &format!("{l}, t = {}", ctx.spec.fmt(f.t)));
            disc(&mut svg, &panel, l);
            draw_folds(&mut svg, &panel, &img);
            draw_slice(&mut svg, &panel, &f.slice, "#1f77b4");
            write_file(dir, &format!("frame_{k:03}.svg"), &svg.finish(), &mut manifest)?;
            let csv = frame_table(&[(k, &f.slice)]).to_csv(&ctx.spec)?;
            write_file(dir, &format!("frame_{k:03}.csv"), &csv, &mut manifest)?;
        }
        let summary_report = output::json_bytes(&ctx.report(result.clone(), Vec::new())?)?;
        write_file(dir, "summary.json", &summary_report, &mut manifest)?;
    }

    let slices: Vec<(usize, &TSlice)> = img.frames.iter().enumerate().map(|(k, f)| (k, &f.slice)).collect();
    let csv = frame_table(&slices).to_csv(&ctx.spec)?;
    let mut svg = Svg::new(440.0, 450.0);
    let panel = image_panel(20.0, 30.0, l);
    svg.axes(&panel, &format!("{l}: slice images"));
    disc(&mut svg, &panel, l);
    for (_, s) in &slices {
        draw_slice(&mut svg, &panel, s, "#1f77b4");
    }
    draw_folds(&mut svg, &panel, &img);
    Ok(Outcome {
        result: ctx.spec.json(&result)?,
        csv: Some(csv),
        svg: Some(svg.finish()),
        manifest,
    })
}

/// Deterministic low-discrepancy torus points.
fn audit_points(n: usize) -> impl Iterator<Item = TorusPoint> {
    let g1 = 0.754_877_666_246_692_8;
    let g2 = 0.569_840_290_998_053_2;
    (1..=n).map(move |k| {
        let k = k as f64;
        TorusPoint::new(std::f64::consts::TAU * (k * g1).fract(), std::f64::consts::TAU * (k * g2).fract())
    })
}

pub fn critical(ctx: &Context, l: &ArmLinkage, grid: usize) -> Result<Outcome> {
    let curves = critical_set(l, grid)?;
    let regions = count_sign_regions(|p| jacobian(l, p), grid);
    let jets = TorusPoint::aligned()
        .iter()
        .map(|p| jet2_at_aligned(l, *p))
        .collect::<linkage_core::Result<Vec<_>>>()?;
    let transversality = curves
        .iter()
        .flat_map(|c| c.points.iter())
        .map(|p| fold_transversality(l, *p))
        .fold(f64::INFINITY, f64::min);
    let scale = {
        let [a, b, c] = l.lengths();
        a * b + a * c + b * c
    };
    let mut audit = Vec::new();
    for p in audit_points(64) {
        if jacobian(l, p).abs() < 0.05 * scale {
            continue;
        }
        let w = r_inverse(l, p);
        let pre = preimages(l, w, 128)?;
        audit.push(json!({
            "w": w,
            "count": pre.count(),
            "signed": pre.signed,
            "indeterminate": pre.indeterminate,
        }));
        if audit.len() == 16 {
            break;
        }
    }
    let result = json!({
        "lengths": l.lengths(),
        "caseTag": l.case(),
        "curveCount": curves.len(),
        "curves": curves.iter().map(|c| json!({
            "winding": [c.winding.0, c.winding.1],
            "essential": c.is_essential(),
            "pointCount": c.points.len(),
        })).collect::<Vec<_>>(),
        "signRegions": regions,
        "predictedSignRegions": predicted_region_count(&curves),
        "minFoldTransversality": transversality,
        "jets": jets,
        "preimageAudit": audit,
    });

    let mut table = Table::new(
        "one row per critical point on the torus and its image under 1/R; angles in radians",
        vec!["curve", "index", "phi", "eta", "w_re", "w_im"],
    );
    let mut svg = Svg::new(860.0, 450.0);
    let torus = torus_panel(20.0, 30.0, 400.0);
    svg.axes(&torus, "critical set on the torus (phi, eta)");
    let plane = image_panel(450.0, 30.0, l);
    svg.axes(&plane, "fold images (1/R)");
    disc(&mut svg, &plane, l);
    for (k, c) in curves.iter().enumerate() {
        let mut img = Vec::with_capacity(c.points.len());
        for (i, p) in c.points.iter().enumerate() {
            let w = r_inverse(l, *p);
            table.push(vec![k.into(), i.into(), p.phi.into(), p.eta.into(), w.re.into(), w.im.into()]);
            img.push(plane.mapz(w));
        }
        let pts: Vec<(f64, f64)> = c.points.iter().map(|p| (p.phi, p.eta)).collect();
        svg.torus_curve(&torus, &pts, "#d62728", true);
        svg.polyline(&img, "#d62728", 1.5, true);
    }
    for p in TorusPoint::aligned() {
        svg.circle(torus.map(p.phi, p.eta), 3.0, "#000000", "#000000", false);
    }
    Ok(Outcome {
        result: ctx.spec.json(&result)?,
        csv: Some(table.to_csv(&ctx.spec)?),
        svg: Some(svg.finish()),
        manifest: Vec::new(),
    })
}

pub fn image(ctx: &Context, l: &ArmLinkage, frames: usize, grid: usize) -> Result<Outcome> {
    let img = annulus_image(l, frames, grid)?;
    let radii = |c: &Vec<Complex64>| {
        let r: Vec<f64> = c.iter().map(|z| z.norm()).collect();
        json!({
            "minRadius": r.iter().cloned().fold(f64::INFINITY, f64::min),
            "maxRadius": r.iter().cloned().fold(0.0, f64::max),
            "pointCount": r.len(),
        })
    };
    let (t_lo, _) = l.t_range();
    let result = json!({
        "lengths": l.lengths(),
        "caseTag": img.case,
        "longestFirst": img.longest_first,
        "discRadius": img.disc_radius,
        "holeRadius": l.b() * t_lo / (l.a() * l.c()),
        "outerBoundary": radii(&img.fold_curves[0]),
        "innerBoundary": radii(img.fold_curves.last().expect("fold curve")),
        "foldCurves": img.fold_curves.iter().map(radii).collect::<Vec<_>>(),
        "morseTValues": img.morse_t_values,
    });
    let mut table = Table::new(
        "one row per sample of a fold curve image in the chart at infinity (values of 1/R)",
        vec!["curve", "index", "re", "im"],
    );
    for (k, c) in img.fold_curves.iter().enumerate() {
        for (i, z) in c.iter().enumerate() {
            table.push(vec![k.into(), i.into(), z.re.into(), z.im.into()]);
        }
    }
    let mut svg = Svg::new(440.0, 450.0);
    let panel = image_panel(20.0, 30.0, l);
    svg.axes(&panel, &format!("{l}: image of 1/R"));
    disc(&mut svg, &panel, l);
    for f in &img.frames {
        draw_slice(&mut svg, &panel, &f.slice, "#9ecae1");
    }
    draw_folds(&mut svg, &panel, &img);
    Ok(Outcome {
        result: ctx.spec.json(&result)?,
        csv: Some(table.to_csv(&ctx.spec)?),
        svg: Some(svg.finish()),
        manifest: Vec::new(),
    })
}

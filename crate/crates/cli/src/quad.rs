use anyhow::Result;
use linkage_core::geom::{config_cross_ratio, uniformizer};
use linkage_core::quad::{
    cr_image, critical_points, degenerate_case, degenerate_components, degenerate_image_report,
    embed_config, g_residual, mapping_degree, r_image, tau_star, trace_moduli, DegenerateImage,
    ModuliPoint,
};
use linkage_core::{CircleArc, Complex64, QuadLinkage};
use serde_json::json;

use crate::output::Table;
use crate::svg::{torus_panel, Panel, Svg};
use crate::{Context, Outcome};

pub fn parse(lengths: &str) -> Result<QuadLinkage> {
    Ok(lengths.parse::<QuadLinkage>()?)
}

pub fn classify(ctx: &Context, l: &QuadLinkage) -> Result<Outcome> {
    let verdict = l.classify_topology_detailed();
    let surjective = if l.is_nondegenerate() {
        Some(l.is_surjective()?)
    } else {
        None
    };
    let signs = l.grashof_signs();
    let result = json!({
        "lengths": l.lengths(),
        "nondegenerate": l.is_nondegenerate(),
        "degenerateCase": degenerate_case(l),
        "topology": verdict.topology,
        "classifierDecided": verdict.classifier_decided,
        "connected": l.is_connected(),
        "surjective": surjective,
        "grashofSigns": signs,
        "product": signs.product(),
        "productSign": l.product_sign(),
        "imageRadius": l.image_radius(),
    });
    let result = ctx.spec.json(&result)?;
    let mut table = Table::new(
        "key,value: classification of the four-bar; nested values as JSON",
        vec!["key", "value"],
    );
    for (k, v) in result.as_object().expect("object") {
        let value = match v {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        table.push(vec![k.as_str().into(), value.into()]);
    }
    Ok(Outcome {
        result,
        csv: Some(table.to_csv(&ctx.spec)?),
        svg: None,
        manifest: Vec::new(),
    })
}

fn r_of(l: &QuadLinkage, p: &ModuliPoint) -> Result<(Complex64, Complex64)> {
    let v = embed_config(l, p.alpha, p.gamma)?;
    let r = uniformizer(&v)?.finite().unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    let cr = config_cross_ratio(&v)?.finite().unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    Ok((r, cr))
}

pub fn image(ctx: &Context, l: &QuadLinkage, samples: usize) -> Result<Outcome> {
    if !l.is_nondegenerate() {
        return degenerate_image(ctx, l, samples);
    }
    let comps = trace_moduli(l, samples)?;
    let r_arc = r_image(l)?;
    let folds = critical_points(l)?;
    let degree = mapping_degree(l, samples)?;
    let result = json!({
        "lengths": l.lengths(),
        "topology": l.classify_topology(),
        "radius": l.image_radius(),
        "fullCircle": r_arc.is_full(),
        "tauStar": if r_arc.is_full() { None } else { tau_star(l) },
        "rImage": r_arc,
        "crImage": cr_image(l)?,
        "folds": folds,
        "degree": degree,
        "componentCount": comps.len(),
        "sampleCount": comps.iter().map(Vec::len).sum::<usize>(),
    });

    let mut table = Table::new(
        "one row per traced configuration; angles in radians; r = uniformizer, cr = 1 - r",
        vec!["component", "index", "alpha", "gamma", "branch", "r_re", "r_im", "cr_re", "cr_im", "g_residual"],
    );
    let mut images = Vec::new();
    for (c, comp) in comps.iter().enumerate() {
        let mut img = Vec::with_capacity(comp.len());
        for (i, p) in comp.iter().enumerate() {
            let (r, cr) = r_of(l, p)?;
            img.push(r);
            table.push(vec![
                c.into(),
                i.into(),
                p.alpha.into(),
                p.gamma.into(),
                (p.branch as i64).into(),
                r.re.into(),
                r.im.into(),
                cr.re.into(),
                cr.im.into(),
                g_residual(l, p.alpha, p.gamma).into(),
            ]);
        }
        images.push(img);
    }

    let mut svg = Svg::new(860.0, 440.0);
    let left = torus_panel(20.0, 30.0, 390.0);
    svg.axes(&left, "moduli space (alpha, gamma)");
    for comp in &comps {
        let pts: Vec<(f64, f64)> = comp.iter().map(|p| (p.alpha, p.gamma)).collect();
        svg.torus_curve(&left, &pts, "#1f77b4", true);
    }
    let right = Panel::centered(450.0, 30.0, 390.0, 1.2 * r_arc.radius);
    svg.axes(&right, "image of R");
    draw_arc(&mut svg, &right, &r_arc);
    for img in &images {
        let pts: Vec<(f64, f64)> = img.iter().map(|z| right.mapz(*z)).collect();
        svg.polyline(&pts, "#ff7f0e", 1.0, false);
    }
    for f in &folds {
        let z = Complex64::from_polar(r_arc.radius, f.arg_r);
        svg.circle(right.mapz(z), 4.0, "#d62728", "#d62728", false);
        svg.circle(left.map(f.point.alpha, f.point.gamma), 4.0, "#d62728", "#d62728", false);
    }
    Ok(Outcome {
        result: ctx.spec.json(&result)?,
        csv: Some(table.to_csv(&ctx.spec)?),
        svg: Some(svg.finish()),
        manifest: Vec::new(),
    })
}

fn draw_arc(svg: &mut Svg, panel: &Panel, arc: &CircleArc) {
    let c = panel.mapz(arc.center);
    let px = panel.size / (panel.x1 - panel.x0);
    svg.circle(c, arc.radius * px, "#bbbbbb", "none", true);
    let pts: Vec<(f64, f64)> = arc.sample(256).iter().map(|z| panel.mapz(*z)).collect();
    svg.polyline(&pts, "#2ca02c", 3.0, false);
}

fn degenerate_image(ctx: &Context, l: &QuadLinkage, samples: usize) -> Result<Outcome> {
    let report = degenerate_image_report(l)?;
    let comps = degenerate_components(l, samples.min(4096))?;
    let result = json!({
        "lengths": l.lengths(),
        "topology": report.topology,
        "radius": l.image_radius(),
        "degenerate": report,
    });
    let mut table = Table::new(
        "one row per sampled configuration of a degenerate moduli space; r = uniformizer",
        vec!["component", "label", "index", "r_re", "r_im"],
    );
    let radius = l.image_radius();
    let panel = Panel::centered(20.0, 30.0, 400.0, 1.3 * radius.max(1.0));
    let mut svg = Svg::new(440.0, 450.0);
    svg.axes(&panel, &format!("image of R, {:?}", report.case));
    if let DegenerateImage::Circle(arc) = &report.image {
        draw_arc(&mut svg, &panel, arc);
    }
    for (c, comp) in comps.iter().enumerate() {
        let mut pts = Vec::new();
        for (i, v) in comp.samples.iter().enumerate() {
            let Some(r) = uniformizer(v).ok().and_then(|r| r.finite()) else { continue };
            table.push(vec![c.into(), comp.label.into(), i.into(), r.re.into(), r.im.into()]);
            pts.push(panel.mapz(r));
        }
        svg.polyline(&pts, "#ff7f0e", 1.0, false);
    }
    svg.circle(panel.map(radius, 0.0), 4.0, "#d62728", "#d62728", false);
    Ok(Outcome {
        result: ctx.spec.json(&result)?,
        csv: Some(table.to_csv(&ctx.spec)?),
        svg: Some(svg.finish()),
        manifest: Vec::new(),
    })
}

pub fn critical(ctx: &Context, l: &QuadLinkage, samples: usize) -> Result<Outcome> {
    let folds = critical_points(l)?;
    let degree = mapping_degree(l, samples)?;
    let result = json!({
        "lengths": l.lengths(),
        "topology": l.classify_topology(),
        "foldCount": folds.len(),
        "folds": folds,
        "tauStar": tau_star(l),
        "degree": degree,
    });
    let mut table = Table::new(
        "one row per fold point of arg R; angles in radians",
        vec!["alpha", "gamma", "component", "lambda_inv", "second_deriv", "signed_area", "arg_r"],
    );
    for f in &folds {
        table.push(vec![
            f.point.alpha.into(),
            f.point.gamma.into(),
            f.point.component.into(),
            f.lambda_inv.into(),
            f.second_deriv.into(),
            f.signed_area.into(),
            f.arg_r.into(),
        ]);
    }
    let mut svg = Svg::new(430.0, 440.0);
    let panel = torus_panel(20.0, 30.0, 390.0);
    svg.axes(&panel, "moduli space with fold points");
    for comp in trace_moduli(l, samples)? {
        let pts: Vec<(f64, f64)> = comp.iter().map(|p| (p.alpha, p.gamma)).collect();
        svg.torus_curve(&panel, &pts, "#1f77b4", true);
    }
    for f in &folds {
        svg.circle(panel.map(f.point.alpha, f.point.gamma), 4.0, "#d62728", "#d62728", false);
    }
    Ok(Outcome {
        result: ctx.spec.json(&result)?,
        csv: Some(table.to_csv(&ctx.spec)?),
        svg: Some(svg.finish()),
        manifest: Vec::new(),
    })
}

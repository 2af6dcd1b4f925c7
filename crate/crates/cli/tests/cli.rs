use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn linkage(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linkage"))
        .args(args)
        .output()
        .expect("run linkage")
}

fn ok_json(args: &[&str]) -> Value {
    let out = linkage(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Value = serde_json::from_slice(&out.stdout).expect("json");
    report["result"].clone()
}

fn f64s(v: &Value) -> Vec<f64> {
    v.as_array()
        .expect("array")
        .iter()
        .map(|x| x.as_f64().expect("number"))
        .collect()
}

/// Parses a CSV file with one leading `#` comment line.
fn read_csv(bytes: &[u8]) -> (String, Vec<String>, Vec<Vec<String>>) {
    let text = std::str::from_utf8(bytes).expect("utf8");
    let (comment, body) = text.split_once('\n').expect("comment line");
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let header = rdr.headers().expect("header").iter().map(String::from).collect();
    let rows = rdr
        .records()
        .map(|r| r.expect("record").iter().map(String::from).collect())
        .collect();
    (comment.to_string(), header, rows)
}

#[test]
fn classify_reports_topology_and_surjectivity() {
    let r = ok_json(&["quad", "classify", "--lengths", "4,1,4,2"]);
    assert_eq!(r["topology"], "TwoCircles");
    assert_eq!(r["connected"], false);
    assert_eq!(r["surjective"], true);

    let r = ok_json(&["quad", "classify", "--lengths", "1,1,1,1"]);
    assert_eq!(r["topology"], "ThreeCirclesChain");
    assert_eq!(r["degenerateCase"], "Rhomboid");
    assert!(r["surjective"].is_null());
}

#[test]
fn classify_csv_has_plain_values() {
    let out = linkage(&["quad", "classify", "--lengths", "4,1,4,2", "--format", "csv"]);
    assert!(out.status.success());
    let (comment, header, rows) = read_csv(&out.stdout);
    assert!(comment.starts_with("# "));
    assert_eq!(header, ["key", "value"]);
    let topology = rows.iter().find(|r| r[0] == "topology").expect("topology row");
    assert_eq!(topology[1], "TwoCircles");
}

#[test]
fn unrealizable_lengths_exit_2() {
    let out = linkage(&["quad", "classify", "--lengths", "1,1,1,5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no planar realization"));

    for bad in ["1,2,3", "1,2,x,4", "1,-2,3,4", "0,1,1,1"] {
        let out = linkage(&["quad", "classify", "--lengths", bad]);
        assert_eq!(out.status.code(), Some(2), "{bad}");
    }
}

#[test]
fn nongeneric_arm_exits_3() {
    let out = linkage(&["arm", "movie", "--lengths", "3,2,1", "--grid", "32"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not generic"));

    let out = linkage(&["arm", "critical", "--lengths", "2,2,1", "--grid", "32"]);
    assert_eq!(out.status.code(), Some(3));

    let out = linkage(&["arm", "image", "--lengths", "1,2", "--grid", "32"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_flags_exit_2() {
    let out = linkage(&["quad", "classify", "--lengths", "4,1,4,2", "--precision", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = linkage(&["quad", "classify", "--lengths", "4,1,4,2", "--format", "svg"]);
    assert_eq!(out.status.code(), Some(2));
    let out = linkage(&["quad", "classify", "--lengths", "4,1,4,2", "--format", "xml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn movie_morse_values() {
    let r = ok_json(&["arm", "movie", "--lengths", "4,2,1", "--grid", "64", "--frames", "8"]);
    assert_eq!(r["caseTag"], "NoClosed");
    assert_eq!(f64s(&r["morseTValues"]), [1.0, 3.0, 5.0, 7.0]);
    assert_eq!(r["intervalComponents"], serde_json::json!([1, 2, 1]));

    let r = ok_json(&["arm", "movie", "--lengths", "4,3,2", "--grid", "64", "--frames", "8"]);
    assert_eq!(r["caseTag"], "ContainsTriangle");
    assert_eq!(f64s(&r["morseTValues"]), [0.0, 1.0, 3.0, 5.0, 9.0]);
    assert_eq!(r["intervalComponents"], serde_json::json!([2, 1, 2, 1]));
}

#[test]
fn lengths_are_not_reordered() {
    let r = ok_json(&["arm", "movie", "--lengths", "1,2,4", "--grid", "64", "--frames", "4"]);
    assert_eq!(f64s(&r["lengths"]), [1.0, 2.0, 4.0]);
    assert_eq!(r["longestFirst"], false);
}

#[test]
fn quad_image_arc_and_full_circle() {
    let r = ok_json(&["quad", "image", "--lengths", "3,2,2,1.5", "--samples", "256"]);
    assert_eq!(r["fullCircle"], false);
    let tau = r["tauStar"].as_f64().expect("tauStar");
    assert!((tau - 0.366482).abs() < 1e-6, "{tau}");
    let radius = r["radius"].as_f64().unwrap();
    assert!((radius - 3.0 * 2.0 / (2.0 * 1.5)).abs() < 1e-12);

    let r = ok_json(&["quad", "image", "--lengths", "4,1,4,2", "--samples", "256"]);
    assert_eq!(r["fullCircle"], true);
    assert!(r["tauStar"].is_null());
}

#[test]
fn degenerate_image_embeds_report() {
    let r = ok_json(&["quad", "image", "--lengths", "2,2,1,1", "--samples", "128"]);
    assert_eq!(r["degenerate"]["case"]["Kite"], "AbCd");
    assert_eq!(r["topology"], "TwoCirclesTwoPoints");
    assert_eq!(r["degenerate"]["image"]["kind"], "circle");
}

#[test]
fn image_csv_lies_on_the_circle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("image.csv");
    let p = path.to_str().unwrap();
    let out = linkage(&[
        "quad", "image", "--lengths", "3,2,2,1.5", "--samples", "128", "--format", "csv", "--out", p,
        "--precision", "15",
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let (_, header, rows) = read_csv(&std::fs::read(&path).unwrap());
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let (re, im, res) = (col("r_re"), col("r_im"), col("g_residual"));
    assert!(rows.len() >= 256);
    for row in &rows {
        let x: f64 = row[re].parse().unwrap();
        let y: f64 = row[im].parse().unwrap();
        assert!((x.hypot(y) - 2.0).abs() < 1e-9, "{row:?}");
        let g: f64 = row[res].parse().unwrap();
        assert!(g.abs() < 1e-9, "{row:?}");
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["quad", "image", "--lengths", "3,2,2,1.5", "--samples", "128"],
        vec!["quad", "critical", "--lengths", "4,1,4,2", "--format", "csv"],
        vec!["arm", "movie", "--lengths", "4,3,2", "--grid", "48", "--frames", "6", "--format", "svg"],
        vec!["arm", "critical", "--lengths", "4,2,1", "--grid", "48"],
    ] {
        let a = linkage(&args);
        let b = linkage(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn emit_dir_writes_manifest_files() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames");
    let r = {
        let out = linkage(&[
            "arm", "movie", "--lengths", "4,2,1", "--grid", "48", "--frames", "5", "--emit-dir",
            frames.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        serde_json::from_slice::<Value>(&out.stdout).unwrap()
    };
    let manifest = r["manifest"].as_array().unwrap();
    let n = r["result"]["frames"].as_array().unwrap().len();
    assert_eq!(manifest.len(), 2 * n + 1);
    for entry in manifest {
        let path = Path::new(entry["path"].as_str().unwrap());
        let meta = std::fs::metadata(path).expect("manifest file exists");
        assert!(meta.len() > 0);
        assert_eq!(meta.len(), entry["bytes"].as_u64().unwrap());
    }
    assert!(frames.join("summary.json").exists());
}

#[test]
fn report_flag_writes_json_next_to_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("c.svg");
    let report = dir.path().join("c.json");
    let out = linkage(&[
        "quad", "critical", "--lengths", "3,2,2,1.5", "--format", "svg", "--out",
        svg.to_str().unwrap(), "--report", report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&svg).unwrap();
    assert!(body.starts_with("<?xml"));
    assert!(body.contains(r#"version="1.1""#));
    assert!(body.trim_end().ends_with("</svg>"));
    let r: Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(r["result"]["foldCount"], 2);
    assert_eq!(r["manifest"][0]["bytes"].as_u64().unwrap() as usize, body.len());
    assert!(r.get("durationSeconds").is_none());
}

#[test]
fn arm_critical_audit_and_corners() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("crit.csv");
    let report = dir.path().join("crit.json");
    let out = linkage(&[
        "arm", "critical", "--lengths", "4,3,2", "--grid", "96", "--format", "csv", "--out",
        csv_path.to_str().unwrap(), "--report", report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let r: Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    let r = &r["result"];
    assert_eq!(r["signRegions"], r["predictedSignRegions"]);
    let audit = r["preimageAudit"].as_array().unwrap();
    assert!(!audit.is_empty());
    for a in audit {
        assert_eq!(a["count"], 2, "{a}");
        assert_eq!(a["indeterminate"], false);
    }
    for jet in r["jets"].as_array().unwrap() {
        assert_eq!(jet["verdict"], "Fold");
    }

    let (_, header, rows) = read_csv(&std::fs::read(&csv_path).unwrap());
    assert_eq!(header, ["curve", "index", "phi", "eta", "w_re", "w_im"]);
    let pi = std::f64::consts::PI;
    let near = |x: f64, y: f64| {
        rows.iter().any(|row| {
            let p: f64 = row[2].parse().unwrap();
            let e: f64 = row[3].parse().unwrap();
            let d = |u: f64, v: f64| {
                let t = (u - v).rem_euclid(2.0 * pi);
                t.min(2.0 * pi - t)
            };
            d(p, x).hypot(d(e, y)) < 0.1
        })
    };
    for (x, y) in [(0.0, 0.0), (pi, 0.0), (0.0, pi), (pi, pi)] {
        assert!(near(x, y), "corner ({x}, {y}) missing from critical set");
    }
}

#[test]
fn arm_image_radii() {
    let r = ok_json(&["arm", "image", "--lengths", "4,2,1", "--grid", "96", "--frames", "8"]);
    let outer = r["outerBoundary"]["maxRadius"].as_f64().unwrap();
    let disc = r["discRadius"].as_f64().unwrap();
    assert!((disc - 2.0 * 7.0 / 4.0).abs() < 1e-12);
    // Sampled fold curves only approach the extremes.
    assert!(outer <= disc * (1.0 + 1e-12) && outer > disc * (1.0 - 1e-3), "{outer} vs {disc}");
    let hole = r["holeRadius"].as_f64().unwrap();
    let inner = r["innerBoundary"]["minRadius"].as_f64().unwrap();
    assert!(inner >= hole * (1.0 - 1e-12) && inner < hole * (1.0 + 1e-2), "{inner} vs {hole}");
}

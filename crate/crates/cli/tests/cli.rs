use std::path::PathBuf;
use std::process::{Command, Output};

fn cgf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cgf")).args(args).output().expect("cgf runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cgf-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn check_exit_codes() {
    let out = cgf(&["check", "drlm_backward_3_slope", "1/12", "2/12", "--oracle", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "extreme");
    assert_eq!(v["oracle"]["agrees"], true);

    let out = cgf(&["check", "drlm_backward_3_slope", "1/4", "1/5", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "not_constructible");

    assert_eq!(cgf(&["check", "drlm_backward_3_slope", "1/4"]).status.code(), Some(2));
    assert_eq!(cgf(&["check", "drlm_backward_3_slope", "1/4", "x"]).status.code(), Some(2));
    assert_eq!(cgf(&["check", "no_such_family", "1/4"]).status.code(), Some(2));
    assert_eq!(cgf(&["check", "gmic", "1/2", "--stage", "bogus"]).status.code(), Some(2));
}

#[test]
fn check_stages() {
    let out = cgf(&["check", "chen_4_slope", "--params", "7/10,2,-4,1/100,49/100", "--stage", "construct", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "constructible");
    let out = cgf(&["check", "chen_4_slope", "7/10", "2", "-4", "1/100", "49/100", "--stage", "minimal", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "not_minimal");
}

#[test]
fn oracle_resolves_uncovered() {
    let out = cgf(&["check", "gj_forward_3_slope", "4/5", "2/3", "1/2", "--oracle", "--json"]);
    let v = json(&out);
    assert_eq!(v["pipeline"], "uncovered_unknown");
    assert_eq!(v["status"], "minimal_not_extreme");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cell_prints_equalities_first() {
    let out = cgf(&["cell", "param_3_slope_1", "6/19", "1/19", "5/19", "8/15", "--stage", "minimality"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].ends_with("= 0"));
    assert!(lines[1..lines.len() - 1].iter().all(|l| l.ends_with("< 0")));
    assert_eq!(*lines.last().unwrap(), "verdict: minimal");

    let out = cgf(&["cell", "drlm_backward_3_slope", "1/12", "2/12", "--json"]);
    let v = json(&out);
    assert_eq!(v["status"], "extreme");
    assert_eq!(v["equalities"][0], "2*f - b = 0");
}

#[test]
fn complex_json_matches_check() {
    let path = tmp("drlm.json");
    let out = cgf(&[
        "complex",
        "drlm_backward_3_slope",
        "--free",
        "f=0..1",
        "--free",
        "b=0..1",
        "--seed",
        "1/12,2/12",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.contains("coverage"));
    assert!(summary.contains("failures"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let cells = v["cells"].as_array().unwrap();
    assert!(cells.iter().any(|c| c["color"] == "blue"));
    assert!(cells.iter().any(|c| c["color"] == "white"));
    for e in v["edges"].as_array().unwrap() {
        let e = e.as_array().unwrap();
        assert!(e[0].as_u64().unwrap() < cells.len() as u64);
        assert!(e[2].is_string());
    }
    assert!(v["failures"].is_array());
    for c in cells.iter().take(6) {
        let p: Vec<&str> = c["test_point"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
        let out = cgf(&["check", "drlm_backward_3_slope", p[0], p[1], "--json"]);
        assert_eq!(json(&out)["status"], c["status"]);
    }

    let out = cgf(&["complex", "drlm_backward_3_slope", "--free", "f=0..1", "--free", "b=0..1", "--seed", "2,1/6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_cell_complex() {
    let out = cgf(&["complex", "drlm_backward_3_slope", "--free", "f=1/20..1/16", "--free", "b=1/8..1/5", "--seed", "1/18,1/7"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["cells"].as_array().unwrap().len(), 1);
    assert_eq!(v["cells"][0]["status"], "extreme");
}

#[test]
fn plot_is_deterministic() {
    let (a, b) = (tmp("a.svg"), tmp("b.svg"));
    for p in [&a, &b] {
        let out = cgf(&[
            "plot",
            "drlm_backward_3_slope",
            "--free",
            "f=0..1",
            "--free",
            "b=0..1",
            "--resolution",
            "2",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let svg = std::fs::read_to_string(&a).unwrap();
    assert_eq!(svg, std::fs::read_to_string(&b).unwrap());
    assert!(svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches(r#"width="200" height="200""#).count(), 4);

    let out = cgf(&["plot", "drlm_backward_3_slope", "--free", "f=0..1", "--free", "b=0..1", "--resolution", "1", "--out", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn plot_overlay() {
    let p = tmp("overlay.svg");
    let out = cgf(&[
        "plot",
        "drlm_backward_3_slope",
        "--free",
        "f=0..1",
        "--free",
        "b=0..1",
        "--resolution",
        "20",
        "--seed",
        "1/12,1/7",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&p).unwrap();
    assert!(svg.matches("<circle").count() > 10);
}

#[test]
fn chen_slice_departs_from_the_claimed_region() {
    use cgf_cli::raster::classify_pixels;
    use cgf_core::bfs::{raster_points, SliceSpec, Stage};
    use cgf_core::{Family, Rational, Verdict};

    let q = |s: &str| -> Rational { s.parse().unwrap() };
    let spec = SliceSpec::new(
        Family::Chen4Slope,
        &[("f", q("7/10")), ("s_pos", q("2")), ("s_neg", q("-4"))],
        &[("lambda_1", q("0"), q("1")), ("lambda_2", q("0"), q("1"))],
    )
    .unwrap();
    // At f = 7/10, s⁺ = 2, s⁻ = -4 the claimed region is
    // 0 ≤ λ₁ < 1/2, 1/5 < λ₂ < 1/2.
    let claimed = |p: &[Rational]| p[0] < q("1/2") && q("1/5") < p[1] && p[1] < q("1/2");
    let n = 40;
    let pixels = classify_pixels(&spec, n, Stage::Extreme, false).unwrap();
    let (mut inside, mut inside_not_extreme) = (0, 0);
    for (p, v) in raster_points(&spec, n).iter().zip(&pixels) {
        if claimed(p) {
            inside += 1;
            if *v != Verdict::Extreme {
                inside_not_extreme += 1;
            }
        }
    }
    assert!(inside > 0);
    assert!(inside_not_extreme > 0, "every claimed pixel is extreme");
    assert!(pixels.contains(&Verdict::Extreme));
}

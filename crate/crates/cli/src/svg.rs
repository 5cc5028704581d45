use std::collections::BTreeSet;
use std::fmt::Write;

use cgf_core::bfs::CellComplex;
use cgf_core::{MultiPoly, SliceSpec, Verdict};

pub fn fill(v: Verdict) -> &'static str {
    match v.color() {
        "white" => "#ffffff",
        "yellow" => "#ffe135",
        "green" => "#3cb44b",
        "blue" => "#4363d8",
        _ => "#a0a0a0",
    }
}

/// Decoration drawn over a raster: cell test points and sampled wall zero
/// sets, both in slice coordinates.
#[derive(Debug, Default, Clone)]
pub struct Overlay {
    pub test_points: Vec<([f64; 2], Verdict)>,
    pub wall_points: Vec<[f64; 2]>,
}

impl Overlay {
    /// Test points of `cx` and sign changes of its wall polynomials along
    /// every pixel row and column of an `n × n` raster, refined `oversample`
    /// times.
    pub fn from_complex(cx: &CellComplex, n: usize, oversample: usize) -> Self {
        let spec = &cx.spec;
        let walls: BTreeSet<MultiPoly> = cx.cells.iter().flat_map(|c| c.atoms.iter().map(|a| a.poly().clone())).collect();
        let test_points = cx
            .cells
            .iter()
            .map(|c| ([c.test_point[0].to_f64(), c.test_point[1].to_f64()], c.verdict))
            .collect();
        let (lo, hi) = bounds(spec);
        let m = n * oversample.max(1);
        let mut wall_points = Vec::new();
        for w in &walls {
            for axis in 0..2 {
                let other = 1 - axis;
                for j in 0..n {
                    let fixed = lo[other] + (hi[other] - lo[other]) * (2 * j + 1) as f64 / (2 * n) as f64;
                    let at = |t: f64| {
                        let mut p = [0.0; 2];
                        p[axis] = t;
                        p[other] = fixed;
                        p
                    };
                    let mut prev: Option<(f64, f64)> = None;
                    for k in 0..=m {
                        let t = lo[axis] + (hi[axis] - lo[axis]) * k as f64 / m as f64;
                        let v = w.eval_f64(&at(t));
                        if let Some((pt, pv)) = prev {
                            if v == 0.0 || (pv != 0.0 && (pv < 0.0) != (v < 0.0)) {
                                let s = if v == 0.0 { t } else { pt + (t - pt) * pv / (pv - v) };
                                wall_points.push(at(s));
                            }
                        }
                        prev = Some((t, v));
                    }
                }
            }
        }
        Overlay { test_points, wall_points }
    }
}

fn bounds(spec: &SliceSpec) -> ([f64; 2], [f64; 2]) {
    ([spec.lo[0].to_f64(), spec.lo[1].to_f64()], [spec.hi[0].to_f64(), spec.hi[1].to_f64()])
}

const LEFT: usize = 56;
const TOP: usize = 12;
const RIGHT: usize = 12;
const BOTTOM: usize = 44;

/// SVG 1.1 document with one rectangle per pixel (row 0 at the bottom, as
/// returned by [`crate::raster::classify_pixels`]).
pub fn render(spec: &SliceSpec, n: usize, pixels: &[Verdict], overlay: Option<&Overlay>) -> String {
    assert!(n >= 2, "resolution must be at least 2");
    assert_eq!(pixels.len(), n * n);
    let s = (400 / n).max(1);
    let side = n * s;
    let (w, h) = (LEFT + side + RIGHT, TOP + side + BOTTOM);
    let names = spec.free_names();
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(out, "<title>{} over ({}, {})</title>", spec.family.name(), names[0], names[1]);
    let _ = writeln!(out, r#"<g shape-rendering="crispEdges" stroke="none">"#);
    for j in 0..n {
        let y = TOP + (n - 1 - j) * s;
        for i in 0..n {
            let x = LEFT + i * s;
            let _ = writeln!(out, r#"<rect x="{x}" y="{y}" width="{s}" height="{s}" fill="{}"/>"#, fill(pixels[j * n + i]));
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<rect x="{LEFT}" y="{TOP}" width="{side}" height="{side}" fill="none" stroke="black"/>"#);
    if let Some(ov) = overlay {
        let (lo, hi) = bounds(spec);
        let map = |p: &[f64; 2]| {
            let u = (p[0] - lo[0]) / (hi[0] - lo[0]);
            let v = (p[1] - lo[1]) / (hi[1] - lo[1]);
            (LEFT as f64 + u * side as f64, TOP as f64 + (1.0 - v) * side as f64)
        };
        let _ = writeln!(out, r##"<g fill="#000000">"##);
        for p in &ov.wall_points {
            let (x, y) = map(p);
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="0.6"/>"#);
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(out, r#"<g stroke="black" stroke-width="0.8">"#);
        for (p, v) in &ov.test_points {
            let (x, y) = map(p);
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{}"/>"#, fill(*v));
        }
        let _ = writeln!(out, "</g>");
    }
    let base = TOP + side;
    let _ = writeln!(out, r#"<g font-family="sans-serif" font-size="11" fill="black">"#);
    let _ = writeln!(out, r#"<text x="{LEFT}" y="{}" text-anchor="start">{}</text>"#, base + 14, spec.lo[0]);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, LEFT + side, base + 14, spec.hi[0]);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, LEFT + side / 2, base + 32, names[0]);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, LEFT - 4, base, spec.lo[1]);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, LEFT - 4, TOP + 10, spec.hi[1]);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, LEFT - 4, TOP + side / 2, names[1]);
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    out
}

//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_GAPS` are expected to fail; the run fails if
//! one of them starts passing (so the list stays honest) or if any other
//! criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use cgf_cli::raster::classify_pixels;
use cgf_core::bfs::{
    bfs_complex, classify, concrete_verdict, coverage, raster_points, sample_cell_points, BfsOptions, CellComplex, SliceSpec,
    Stage,
};
use cgf_core::*;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_GAPS: &[u32] = &[5];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

/// A random rational `n/d` with `d ≤ max_den` in `[lo, hi]` (open ends when
/// `open`), bounds given as `(num, den)`.
fn pick(rng: &mut ChaCha8Rng, lo: (i64, i64), hi: (i64, i64), max_den: i64, open: bool) -> Rational {
    loop {
        let d = rng.gen_range(1..=max_den) as i128;
        let (ln, ld) = (lo.0 as i128 * d, lo.1 as i128);
        let (hn, hd) = (hi.0 as i128 * d, hi.1 as i128);
        let mut nlo = -((-ln).div_euclid(ld));
        let mut nhi = hn.div_euclid(hd);
        if open {
            if nlo * ld == ln {
                nlo += 1;
            }
            if nhi * hd == hn {
                nhi -= 1;
            }
        }
        if nlo <= nhi {
            let n = rng.gen_range(nlo..=nhi);
            return Rational::new(n as i64, d as i64);
        }
    }
}

fn unit_box(family: Family, fixed: &[(&str, Rational)], free: &[&str]) -> SliceSpec {
    let free: Vec<(&str, Rational, Rational)> = free.iter().map(|&n| (n, q("0"), q("1"))).collect();
    SliceSpec::new(family, fixed, &free).unwrap()
}

fn drlm_box() -> SliceSpec {
    unit_box(Family::DrlmBackward3Slope, &[], &["f", "b"])
}

fn gj_box() -> SliceSpec {
    unit_box(Family::GjForward3Slope, &[("f", q("4/5"))], &["lambda_1", "lambda_2"])
}

fn kzh_slice() -> SliceSpec {
    unit_box(Family::Kzh3SlopeParamExtreme1, &[("f", q("6/19"))], &["a", "b"])
}

fn full_box(family: Family) -> SliceSpec {
    unit_box(family, &[], family.params())
}

fn extreme(family: Family, p: &[Rational]) -> Verdict {
    concrete_verdict(family, p, Stage::Extreme).unwrap()
}

fn gj_hypotheses(f: &Rational, l1: &Rational, l2: &Rational) -> bool {
    let zero = Rational::zero();
    let one = Rational::one();
    *l1 >= zero && *l1 <= q("1/2") && *l2 >= zero && *l2 <= one && (l1 * f + l2 * &(f - &one)).is_positive()
}

fn drlm_region(f: &Rational, b: &Rational) -> bool {
    f.is_positive() && f < b && *b <= (Rational::one() + f.clone()) / Rational::from_integer(4)
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut n, mut ok) = (0, 0);
    let mut bad = Vec::new();
    while n < 200 {
        let f = pick(&mut rng, (0, 1), (1, 1), 10_000, true);
        let l1 = pick(&mut rng, (0, 1), (1, 2), 10_000, false);
        let l2 = pick(&mut rng, (0, 1), (1, 1), 10_000, false);
        if !gj_hypotheses(&f, &l1, &l2) {
            continue;
        }
        n += 1;
        let pi = gj_forward_3_slope_or_none(&f, &l1, &l2);
        let v = pi.map(|pi| extremality_test(&pi)).unwrap_or(Verdict::NotConstructible);
        if v == Verdict::Extreme {
            ok += 1;
        } else if bad.len() < 3 {
            bad.push(format!("({f}, {l1}, {l2}) -> {}", v.as_str()));
        }
    }
    outcome(ok == n, format!("{ok}/{n} extreme{}", listing(&bad)))
}

fn gj_forward_3_slope_or_none(f: &Rational, l1: &Rational, l2: &Rational) -> Option<Pwl<Rational>> {
    Family::GjForward3Slope.construct(&[f.clone(), l1.clone(), l2.clone()]).ok()
}

fn listing(bad: &[String]) -> String {
    if bad.is_empty() {
        String::new()
    } else {
        format!("; e.g. {}", bad.join(", "))
    }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let fam = Family::DrlmBackward3Slope;
    let (mut inside, mut outside) = (0, 0);
    let (mut ok_in, mut ok_out) = (0, 0);
    let mut bad = Vec::new();
    while inside < 200 || outside < 50 {
        let f = pick(&mut rng, (0, 1), (1, 1), 10_000, true);
        let b = pick(&mut rng, (0, 1), (1, 1), 10_000, true);
        let p = [f.clone(), b.clone()];
        if drlm_region(&f, &b) {
            if inside == 200 {
                continue;
            }
            inside += 1;
            let v = extreme(fam, &p);
            if v == Verdict::Extreme {
                ok_in += 1;
            } else if bad.len() < 3 {
                bad.push(format!("inside ({f}, {b}) -> {}", v.as_str()));
            }
        } else if f.is_positive() && f < b && outside < 50 {
            let v = extreme(fam, &p);
            if v == Verdict::NotConstructible {
                continue;
            }
            outside += 1;
            if v != Verdict::Extreme {
                ok_out += 1;
            } else if bad.len() < 3 {
                bad.push(format!("outside ({f}, {b}) -> extreme"));
            }
        }
    }
    outcome(
        ok_in == inside && ok_out == outside,
        format!("inside {ok_in}/{inside} extreme, outside {ok_out}/{outside} not extreme{}", listing(&bad)),
    )
}

fn cli_status(args: &[&str]) -> (String, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_cgf")).args(args).arg("--json").output().expect("cgf runs");
    let elapsed = start.elapsed();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("cgf prints JSON");
    (v["status"].as_str().unwrap_or("").to_string(), elapsed)
}

fn criterion_3() -> Outcome {
    let (a, ta) = cli_status(&["check", "chen_4_slope", "7/10", "2", "-4", "1/100", "49/100"]);
    let (b, tb) = cli_status(&["check", "chen_4_slope", "7/10", "2", "-4", "1/10", "1/10"]);
    let limit = Duration::from_secs(10);
    outcome(
        a == "not_minimal" && b == "extreme" && ta < limit && tb < limit,
        format!("(1/100, 49/100) -> {a} in {ta:.2?}; (1/10, 1/10) -> {b} in {tb:.2?}"),
    )
}

fn param_3_cell() -> (SliceSpec, Cell) {
    let spec = full_box(Family::Param3Slope1);
    let mut map = MonomialMap::new(4);
    let cell = classify(&spec, &[q("6/19"), q("1/19"), q("5/19"), q("8/15")], Stage::Minimal, &mut map).unwrap();
    (spec, cell)
}

fn criterion_4() -> Outcome {
    let (_, cell) = param_3_cell();
    let golden = MultiPoly::parse("-f^2*v + 3*f*b*v + f^2 + f*a - 3*f*b - 3*a*b - f*v + b", &["f", "a", "b", "v"]).unwrap();
    let eqs = cell.varieties();
    let hit = eqs.iter().any(|e| e.poly().monic() == golden.monic());
    let shown: Vec<String> = eqs.iter().map(|e| e.display(&["f", "a", "b", "v"]).to_string()).collect();
    outcome(hit, format!("equalities: {}", shown.join("; ")))
}

const KZH_GOLDEN: [&str; 7] = [
    "3*f + 4*a - b - 1 < 0",
    "-a < 0",
    "-f^2 - f*a + 3*f*b + 3*a*b - b < 0",
    "-f + b < 0",
    "f*a - 3*a*b - f + b < 0",
    "-f - 3*b + 1 < 0",
    "-f^2*a + 3*f*a*b - 3*a*b - f + b < 0",
];

fn kzh_cell() -> (SliceSpec, Cell) {
    let spec = full_box(Family::Kzh3SlopeParamExtreme1);
    let mut map = MonomialMap::new(3);
    let cell = classify(&spec, &[q("6/19"), q("1/19"), q("5/19")], Stage::Extreme, &mut map).unwrap();
    (spec, cell)
}

fn criterion_5() -> Outcome {
    let names = ["f", "a", "b"];
    let (_, cell) = kzh_cell();
    let golden: Vec<Atom> = KZH_GOLDEN.iter().map(|s| Atom::parse(s, &names).unwrap()).collect();
    let missing: Vec<String> = golden.iter().filter(|g| !cell.atoms.contains(g)).map(|g| g.display(&names).to_string()).collect();
    let extra: Vec<String> = cell.atoms.iter().filter(|a| !golden.contains(a)).map(|a| a.display(&names).to_string()).collect();
    let found = golden.len() - missing.len();
    outcome(
        missing.is_empty() && extra.is_empty(),
        format!(
            "{found}/7 golden atoms, {} extra, verdict {}; missing [{}]",
            extra.len(),
            cell.verdict.as_str(),
            missing.join("; ")
        ),
    )
}

fn kzh_1_region(f: &Rational, a: &Rational, b: &Rational) -> bool {
    a.is_positive()
        && b.is_positive()
        && b < f
        && (Rational::from_integer(3) * f.clone() + Rational::from_integer(4) * a.clone() - b.clone() - Rational::one()).is_negative()
}

fn kzh_2_region(f: &Rational, a: &Rational, b: &Rational) -> bool {
    b < a && *f < a + b && Rational::from_integer(2) * f.clone() < Rational::one() + a.clone() - b.clone()
}

fn region_points(family: Family, n: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let p: Vec<Rational> = (0..3).map(|_| pick(&mut rng, (0, 1), (1, 1), 1000, true)).collect();
        let inside = match family {
            Family::Kzh3SlopeParamExtreme1 => kzh_1_region(&p[0], &p[1], &p[2]),
            _ => kzh_2_region(&p[0], &p[1], &p[2]),
        };
        if inside && family.construct(&p).is_ok() {
            out.push(p);
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (family, seed) in [(Family::Kzh3SlopeParamExtreme1, 61), (Family::Kzh3SlopeParamExtreme2, 62)] {
        let pts = region_points(family, 200, seed);
        let mut bad = Vec::new();
        let mut ok = 0;
        for p in &pts {
            let v = extreme(family, p);
            if v == Verdict::Extreme {
                ok += 1;
            } else if bad.len() < 3 {
                bad.push(format!("({}, {}, {}) -> {}", p[0], p[1], p[2], v.as_str()));
            }
        }
        pass &= ok == pts.len();
        parts.push(format!("{} {ok}/{} extreme{}", family.name(), pts.len(), listing(&bad)));
    }
    outcome(pass, parts.join("; "))
}

/// Random small-denominator parameters for the oracle comparison.
fn small_params(family: Family, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let unit = |rng: &mut ChaCha8Rng, d| pick(rng, (0, 1), (1, 1), d, true);
    match family {
        Family::Gmic => vec![unit(rng, 30)],
        Family::GjForward3Slope => (0..3).map(|_| unit(rng, 10)).collect(),
        Family::DrlmBackward3Slope => (0..2).map(|_| unit(rng, 30)).collect(),
        Family::Chen4Slope => vec![
            pick(rng, (1, 2), (9, 10), 10, false),
            Rational::from_integer(rng.gen_range(1..=8)),
            Rational::from_integer(-rng.gen_range(1..=8)),
            unit(rng, 10),
            unit(rng, 10),
        ],
        Family::Param3Slope1 => (0..4).map(|_| unit(rng, 20)).collect(),
        Family::Kzh3SlopeParamExtreme1 | Family::Kzh3SlopeParamExtreme2 => (0..3).map(|_| unit(rng, 20)).collect(),
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut decided, mut agree, mut uncovered, mut uncovered_not_extreme) = (0, 0, 0, 0);
    let mut per_family = Vec::new();
    let mut bad = Vec::new();
    for family in Family::all() {
        let mut seen = Vec::new();
        let mut count = 0;
        for _ in 0..200_000 {
            if count == 25 {
                break;
            }
            let p = small_params(family, &mut rng);
            if seen.contains(&p) {
                continue;
            }
            let Ok(pi) = family.construct(&p) else { continue };
            if pi.common_denominator() > BigInt::from(30) || !minimality_test(&pi) {
                continue;
            }
            seen.push(p.clone());
            count += 1;
            let v = extremality_test(&pi);
            let grid = grid_oracle_extremality(&pi).unwrap();
            match v {
                Verdict::UncoveredUnknown => {
                    uncovered += 1;
                    if !grid {
                        uncovered_not_extreme += 1;
                    }
                }
                _ => {
                    decided += 1;
                    if grid == (v == Verdict::Extreme) {
                        agree += 1;
                    } else if bad.len() < 3 {
                        let shown: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                        bad.push(format!("{}({}) {} vs oracle {grid}", family.name(), shown.join(", "), v.as_str()));
                    }
                }
            }
        }
        per_family.push(format!("{}:{count}", family.name()));
    }
    outcome(
        decided >= 50 && agree == decided,
        format!(
            "{agree}/{decided} decided instances agree; {uncovered} uncovered_unknown (oracle: not extreme for {uncovered_not_extreme}); [{}]{}",
            per_family.join(" "),
            listing(&bad)
        ),
    )
}

fn check_cell(spec: &SliceSpec, cell: &Cell, stage: Stage, rng: &mut ChaCha8Rng) -> (usize, usize) {
    let pts = sample_cell_points(spec, cell, 10, rng);
    let good = pts
        .iter()
        .filter(|p| cell.contains(p) && concrete_verdict(spec.family, &spec.full_point(p), stage).unwrap() == cell.verdict)
        .count();
    (good, pts.len())
}

fn complexes() -> Vec<(&'static str, CellComplex)> {
    let opts = BfsOptions::default();
    vec![
        ("drlm", bfs_complex(&drlm_box(), &[q("1/12"), q("1/7")], &opts).unwrap()),
        ("gj f=4/5", bfs_complex(&gj_box(), &[q("4/9"), q("2/3")], &opts).unwrap()),
        ("kzh_1 f=6/19", bfs_complex(&kzh_slice(), &[q("1/19"), q("5/19")], &opts).unwrap()),
    ]
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut cells: Vec<(String, SliceSpec, Cell, Stage)> = Vec::new();
    let (spec, cell) = param_3_cell();
    cells.push(("param_3_slope_1".into(), spec, cell, Stage::Minimal));
    let (spec, cell) = kzh_cell();
    cells.push(("kzh_1 golden".into(), spec, cell, Stage::Extreme));
    for (family, seed) in [(Family::Kzh3SlopeParamExtreme1, 61), (Family::Kzh3SlopeParamExtreme2, 62)] {
        let spec = full_box(family);
        for p in region_points(family, 5, seed) {
            let mut map = MonomialMap::new(3);
            let cell = classify(&spec, &p, Stage::Extreme, &mut map).unwrap();
            cells.push((family.name().into(), spec.clone(), cell, Stage::Extreme));
        }
    }
    for (name, cx) in complexes() {
        for cell in &cx.cells {
            cells.push((name.into(), cx.spec.clone(), cell.clone(), Stage::Extreme));
        }
    }
    let (mut good, mut sampled, mut short) = (0, 0, Vec::new());
    for (name, spec, cell, stage) in &cells {
        let (g, n) = check_cell(spec, cell, *stage, &mut rng);
        good += g;
        sampled += n;
        if n < 10 && short.len() < 3 {
            short.push(format!("{name}: {n} points"));
        }
    }
    let all_sampled = sampled == 10 * cells.len();
    outcome(
        good == sampled && all_sampled,
        format!(
            "{} cells, {good}/{sampled} sample points re-classify to their cell's verdict{}",
            cells.len(),
            if short.is_empty() { String::new() } else { format!("; undersampled: {}", short.join(", ")) }
        ),
    )
}

/// Agreement of an `n × n` raster with `predicate` on pixels farther than
/// one pixel from every boundary line `(a, b, c)`: `a·x + b·y + c = 0`.
fn raster_agreement(
    spec: &SliceSpec,
    n: usize,
    predicate: impl Fn(&Rational, &Rational) -> bool,
    lines: &[(f64, f64, f64)],
) -> (usize, usize) {
    let pixels = classify_pixels(spec, n, Stage::Extreme, false).unwrap();
    let pixel = (spec.hi[0].to_f64() - spec.lo[0].to_f64()) / n as f64;
    let (mut agree, mut total) = (0, 0);
    for (p, v) in raster_points(spec, n).iter().zip(&pixels) {
        let (x, y) = (p[0].to_f64(), p[1].to_f64());
        let near = lines.iter().any(|(a, b, c)| (a * x + b * y + c).abs() / (a * a + b * b).sqrt() <= pixel);
        if near {
            continue;
        }
        total += 1;
        if predicate(&p[0], &p[1]) == (*v == Verdict::Extreme) {
            agree += 1;
        }
    }
    (agree, total)
}

fn criterion_9() -> Outcome {
    let f = q("4/5");
    let gj = raster_agreement(
        &gj_box(),
        200,
        |l1, l2| gj_hypotheses(&f, l1, l2),
        &[(1.0, 0.0, 0.0), (1.0, 0.0, -0.5), (0.0, 1.0, 0.0), (0.0, 1.0, -1.0), (0.8, -0.2, 0.0)],
    );
    let drlm = raster_agreement(&drlm_box(), 200, drlm_region, &[(1.0, 0.0, 0.0), (1.0, -1.0, 0.0), (-0.25, 1.0, -0.25)]);
    let frac = |(a, t): (usize, usize)| a as f64 / t as f64;
    outcome(
        frac(gj) >= 0.99 && frac(drlm) >= 0.99,
        format!(
            "gj f=4/5: {}/{} ({:.2}%); drlm: {}/{} ({:.2}%)",
            gj.0,
            gj.1,
            100.0 * frac(gj),
            drlm.0,
            drlm.1,
            100.0 * frac(drlm)
        ),
    )
}

fn criterion_10() -> Outcome {
    let cx = bfs_complex(&drlm_box(), &[q("1/12"), q("2/12")], &BfsOptions::default()).unwrap();
    let cov = coverage(&cx, 100);
    let samples = raster_points(&cx.spec, 100);
    let raw = samples.iter().filter(|p| cx.locate(p).is_some()).count();
    outcome(
        cov.fraction() >= 0.99,
        format!(
            "{} cells; {}/{} off-wall samples covered ({:.2}%), {} samples on walls (raw {}/{}); {} frontier failures{}",
            cx.cells.len(),
            cov.covered,
            cov.total,
            100.0 * cov.fraction(),
            cov.on_walls,
            raw,
            samples.len(),
            cx.failures.len(),
            if cx.truncated { ", truncated" } else { "" }
        ),
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "gj_forward_3_slope extreme under its hypotheses", criterion_1),
        (2, "drlm_backward_3_slope region", criterion_2),
        (3, "chen_4_slope correction via the CLI", criterion_3),
        (4, "param_3_slope_1 equation discovery", criterion_4),
        (5, "kzh_3_slope_param_extreme_1 seven-inequality cell", criterion_5),
        (6, "kzh families extreme on their regions", criterion_6),
        (7, "grid-free test agrees with the grid oracle", criterion_7),
        (8, "cell soundness", criterion_8),
        (9, "raster agreement with the extreme regions", criterion_9),
        (10, "BFS coverage of the drlm slice", criterion_10),
    ];
    // `cargo test --test acceptance -- 3 7` runs a subset.
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    let mut stale = Vec::new();
    for (id, name, run) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let gap = KNOWN_GAPS.contains(&id);
        let mark = match (out.pass, gap) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known gap)",
            (false, false) => "FAIL",
        };
        println!("criterion {id:>2} {mark}: {name}: {} [{:.1?}]", out.detail, start.elapsed());
        if !out.pass && !gap {
            failed.push(id);
        }
        if out.pass && gap {
            stale.push(id);
        }
    }
    if !stale.is_empty() {
        println!("known gaps now pass, update KNOWN_GAPS: {stale:?}");
    }
    if !failed.is_empty() {
        println!("failed: {failed:?}");
    }
    if !failed.is_empty() || !stale.is_empty() {
        std::process::exit(1);
    }
}

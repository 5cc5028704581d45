use std::path::PathBuf;
use std::process::ExitCode;

use cgf_cli::args::{self, UsageError};
use cgf_cli::raster::classify_pixels;
use cgf_cli::report::{stage_name, CellJson, CheckReport, ComplexJson, ParamJson, FunctionJson, OracleJson};
use cgf_cli::svg::{render, Overlay};
use cgf_core::bfs::{bfs_complex, classify, resolve_with_oracle, run_stage, BfsOptions, Stage};
use cgf_core::{grid_oracle_extremality, Error, MonomialMap, Verdict};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cgf", version, about = "Extremality checks and parameter-cell complexes for cut-generating functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test constructibility, minimality and extremality at one parameter point.
    Check(CheckArgs),
    /// Describe the parameter cell containing a point.
    Cell(CellArgs),
    /// Explore the cell complex of a parameter slice by wall crossing.
    Complex(ComplexArgs),
    /// Render a two-parameter slice as a color-coded SVG.
    Plot(PlotArgs),
    /// List the implemented families and their parameters.
    Families,
}

#[derive(Args)]
struct PointArgs {
    family: String,
    /// Parameter values, in the family's order.
    #[arg(allow_negative_numbers = true)]
    values: Vec<String>,
    /// Parameter values as one comma-separated list.
    #[arg(long)]
    params: Option<String>,
    /// Stop after this stage: construct, minimal or extreme.
    #[arg(long, default_value = "extreme", value_parser = parse_stage)]
    stage: Stage,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Cross-check with the finite-grid oracle.
    #[arg(long)]
    oracle: bool,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CellArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Keep a parameter constant: name=value. Values then cover only the
    /// remaining parameters.
    #[arg(long = "fix")]
    fix: Vec<String>,
    /// Print the cell as JSON.
    #[arg(long)]
    json: bool,
    /// Also write the cell JSON to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SliceArgs {
    family: String,
    /// Constant parameter: name=value.
    #[arg(long = "fix")]
    fix: Vec<String>,
    /// Free parameter with its open range: name=lo..hi.
    #[arg(long = "free")]
    free: Vec<String>,
    #[arg(long, default_value = "extreme", value_parser = parse_stage)]
    stage: Stage,
}

#[derive(Args)]
struct ComplexArgs {
    #[command(flatten)]
    slice: SliceArgs,
    /// Starting point in the free coordinates, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    seed: String,
    /// Raster resolution per axis for the coverage metric.
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long, default_value_t = 500)]
    max_cells: usize,
    /// Seed of the neighbor-search random generator.
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Write the complex JSON here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    #[command(flatten)]
    slice: SliceArgs,
    #[arg(long, default_value_t = 200)]
    resolution: usize,
    /// Resolve uncovered-interval verdicts with the finite-grid oracle.
    #[arg(long)]
    oracle: bool,
    /// Overlay the cell complex explored from this seed.
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

fn parse_stage(s: &str) -> Result<Stage, String> {
    Stage::from_name(s).ok_or_else(|| format!("unknown stage {s:?} (construct, minimal, extreme)"))
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => check(a),
        Command::Cell(a) => cell(a),
        Command::Complex(a) => complex(a),
        Command::Plot(a) => plot(a),
        Command::Families => families(),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn families() -> Result<ExitCode, Failure> {
    for fam in cgf_core::Family::all() {
        let spec = fam.spec();
        println!("{}({})  {}", spec.name, spec.params.join(", "), spec.domain);
    }
    Ok(ExitCode::SUCCESS)
}

fn check(a: CheckArgs) -> Result<ExitCode, Failure> {
    let family = args::family(&a.point.family)?;
    let params = args::params(family, &a.point.values, a.point.params.as_deref())?;
    let stage = a.point.stage;
    let pipeline = run_stage(family, &params, stage)?;
    let pi = family.construct(&params).ok();
    let mut status = pipeline;
    let mut oracle = None;
    if a.oracle && stage == Stage::Extreme {
        if let Some(pi) = pi.as_ref().filter(|_| pipeline != Verdict::NotMinimal) {
            oracle = Some(match grid_oracle_extremality(pi) {
                Ok(ext) => {
                    let agrees = match pipeline {
                        Verdict::Extreme => Some(ext),
                        Verdict::MinimalNotExtreme => Some(!ext),
                        _ => None,
                    };
                    status = resolve_with_oracle(family, &params, pipeline)?;
                    OracleJson { result: if ext { "extreme" } else { "not_extreme" }, agrees }
                }
                Err(Error::Unsupported(_)) => OracleJson { result: "unsupported", agrees: None },
                Err(e) => return Err(e.into()),
            });
        }
    }
    let report = CheckReport {
        family: family.name(),
        params: family.params().iter().zip(&params).map(|(&name, v)| ParamJson { name, value: v.to_string() }).collect(),
        stage: stage_name(stage),
        status: status.as_str(),
        pipeline: pipeline.as_str(),
        function: pi.as_ref().map(FunctionJson::new),
        oracle,
    };
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print_check(&report);
    }
    let wanted = match stage {
        Stage::Construct => Verdict::Constructible,
        Stage::Minimal => Verdict::Minimal,
        Stage::Extreme => Verdict::Extreme,
    };
    Ok(if status == wanted { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn print_check(r: &CheckReport) {
    let params: Vec<String> = r.params.iter().map(|p| format!("{}={}", p.name, p.value)).collect();
    println!("family:        {}", r.family);
    println!("params:        {}", params.join(" "));
    let reached = |v: &[&str]| !v.contains(&r.pipeline);
    println!("constructible: {}", if r.pipeline == "not_constructible" { "no" } else { "yes" });
    if r.stage != "construct" && reached(&["not_constructible"]) {
        println!("minimal:       {}", if r.pipeline == "not_minimal" { "no" } else { "yes" });
    }
    if let Some(pi) = &r.function {
        println!("breakpoints:   {}", pi.breakpoints.join(" "));
        println!("values:        {}", pi.values.join(" "));
    }
    if let Some(o) = &r.oracle {
        let note = match o.agrees {
            Some(true) => " (agrees)",
            Some(false) => " (DISAGREES)",
            None => "",
        };
        println!("oracle:        {}{}", o.result, note);
    }
    if r.pipeline != r.status {
        println!("pipeline:      {}", r.pipeline);
    }
    println!("verdict:       {}", r.status);
}

fn cell(a: CellArgs) -> Result<ExitCode, Failure> {
    let family = args::family(&a.point.family)?;
    let mut values = Vec::new();
    for v in &a.point.values {
        values.extend(args::rational_list(v)?);
    }
    if let Some(p) = &a.point.params {
        values.extend(args::rational_list(p)?);
    }
    let (spec, point) = args::slice_around(family, &values, &a.fix)?;
    let mut map = MonomialMap::new(spec.dim());
    let cell = classify(&spec, &point, a.point.stage, &mut map)?;
    let json = CellJson::new(&cell, &spec.free_names());
    let text = serde_json::to_string_pretty(&json).expect("cell serializes");
    if a.json {
        println!("{text}");
    } else {
        print!("{}", cell.describe(&spec.free_names()));
        println!("verdict: {}", cell.verdict.as_str());
    }
    if let Some(out) = a.out {
        std::fs::write(out, text + "\n")?;
    }
    Ok(ExitCode::SUCCESS)
}

fn slice_of(s: &SliceArgs) -> Result<cgf_core::SliceSpec, Failure> {
    let family = args::family(&s.family)?;
    Ok(args::slice(family, &s.fix, &s.free)?)
}

fn seed_of(spec: &cgf_core::SliceSpec, seed: &str) -> Result<Vec<cgf_core::Rational>, Failure> {
    let point = args::rational_list(seed)?;
    if point.len() != spec.dim() {
        return Err(Failure::Usage(format!("seed needs {} coordinates", spec.dim())));
    }
    if !spec.in_box(&point) {
        return Err(Failure::Usage("seed outside the box".into()));
    }
    Ok(point)
}

fn complex(a: ComplexArgs) -> Result<ExitCode, Failure> {
    let spec = slice_of(&a.slice)?;
    let seed = seed_of(&spec, &a.seed)?;
    let opts = BfsOptions { stage: a.slice.stage, rng_seed: a.rng_seed, max_cells: a.max_cells, ..BfsOptions::default() };
    let cx = bfs_complex(&spec, &seed, &opts)?;
    let resolution = a.resolution.unwrap_or(if spec.dim() <= 2 { 100 } else { 20 });
    let json = ComplexJson::new(&cx, a.slice.stage, resolution);
    let text = serde_json::to_string_pretty(&json).expect("complex serializes");
    match a.out {
        Some(out) => {
            std::fs::write(&out, text + "\n")?;
            print!("{}", json.summary());
        }
        None => {
            println!("{text}");
            eprint!("{}", json.summary());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn plot(a: PlotArgs) -> Result<ExitCode, Failure> {
    let spec = slice_of(&a.slice)?;
    if spec.dim() != 2 {
        return Err(Failure::Usage("plots need exactly two free parameters".into()));
    }
    if a.resolution < 2 {
        return Err(Failure::Usage("resolution must be at least 2".into()));
    }
    let overlay = match &a.seed {
        Some(seed) => {
            let seed = seed_of(&spec, seed)?;
            let opts = BfsOptions { stage: a.slice.stage, ..BfsOptions::default() };
            Some(Overlay::from_complex(&bfs_complex(&spec, &seed, &opts)?, a.resolution, 4))
        }
        None => None,
    };
    let pixels = classify_pixels(&spec, a.resolution, a.slice.stage, a.oracle)?;
    std::fs::write(&a.out, render(&spec, a.resolution, &pixels, overlay.as_ref()))?;
    let mut counts = std::collections::BTreeMap::new();
    for v in &pixels {
        *counts.entry(v.as_str()).or_insert(0usize) += 1;
    }
    for (k, n) in counts {
        println!("{k:<22}{n:>8}");
    }
    Ok(ExitCode::SUCCESS)
}

use cgf_core::bfs::{coverage, CellComplex, Coverage, Stage};
use cgf_core::{Cell, Pwl, Rational, SliceSpec, Verdict};
use serde::Serialize;

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

pub fn stage_name(stage: Stage) -> &'static str {
    match stage {
        Stage::Construct => "construct",
        Stage::Minimal => "minimal",
        Stage::Extreme => "extreme",
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct VerdictJson {
    pub status: &'static str,
}

impl From<Verdict> for VerdictJson {
    fn from(v: Verdict) -> Self {
        VerdictJson { status: v.as_str() }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct FunctionJson {
    pub f: String,
    pub breakpoints: Vec<String>,
    pub values: Vec<String>,
}

impl FunctionJson {
    pub fn new(pi: &Pwl<Rational>) -> Self {
        FunctionJson { f: pi.f().to_string(), breakpoints: strings(pi.breakpoints()), values: strings(pi.values()) }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct OracleJson {
    /// `extreme`, `not_extreme` or `unsupported`.
    pub result: &'static str,
    /// Whether the grid answer matches the grid-free verdict; absent when
    /// either side is undecided.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agrees: Option<bool>,
}

#[derive(Serialize, Debug, Clone)]
pub struct ParamJson {
    pub name: &'static str,
    pub value: String,
}

#[derive(Serialize, Debug, Clone)]
pub struct CheckReport {
    pub family: &'static str,
    pub params: Vec<ParamJson>,
    pub stage: &'static str,
    pub status: &'static str,
    /// Verdict of the grid-free pipeline before any oracle resolution.
    pub pipeline: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleJson>,
}

#[derive(Serialize, Debug, Clone)]
pub struct CellJson {
    pub names: Vec<&'static str>,
    pub test_point: Vec<String>,
    pub status: &'static str,
    pub color: &'static str,
    pub equalities: Vec<String>,
    pub inequalities: Vec<String>,
    /// Surviving inequalities of degree above one.
    pub nonlinear: Vec<String>,
}

impl CellJson {
    pub fn new(cell: &Cell, names: &[&'static str]) -> Self {
        let show = |atoms: Vec<cgf_core::Atom>| atoms.iter().map(|a| a.display(names).to_string()).collect();
        CellJson {
            names: names.to_vec(),
            test_point: strings(&cell.test_point),
            status: cell.verdict.as_str(),
            color: cell.verdict.color(),
            equalities: show(cell.varieties()),
            inequalities: show(cell.walls()),
            nonlinear: show(cell.nonlinear_walls()),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct FreeJson {
    pub name: &'static str,
    pub lo: String,
    pub hi: String,
}

#[derive(Serialize, Debug, Clone)]
pub struct SpecJson {
    pub family: &'static str,
    pub fixed: Vec<ParamJson>,
    pub free: Vec<FreeJson>,
}

impl SpecJson {
    pub fn new(spec: &SliceSpec) -> Self {
        let names = spec.family.params();
        SpecJson {
            family: spec.family.name(),
            fixed: spec.fixed.iter().map(|(i, v)| ParamJson { name: names[*i], value: v.to_string() }).collect(),
            free: spec
                .free
                .iter()
                .zip(spec.lo.iter().zip(&spec.hi))
                .map(|(&i, (lo, hi))| FreeJson { name: names[i], lo: lo.to_string(), hi: hi.to_string() })
                .collect(),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct FailureJson {
    pub cell: usize,
    pub wall: String,
}

#[derive(Serialize, Debug, Clone)]
pub struct CoverageJson {
    pub resolution: usize,
    pub covered: usize,
    pub total: usize,
    pub on_walls: usize,
    pub fraction: f64,
}

#[derive(Serialize, Debug, Clone)]
pub struct ComplexJson {
    pub spec: SpecJson,
    pub stage: &'static str,
    pub cells: Vec<CellJson>,
    pub edges: Vec<(usize, usize, String)>,
    pub failures: Vec<FailureJson>,
    pub truncated: bool,
    pub coverage: CoverageJson,
}

impl ComplexJson {
    pub fn new(cx: &CellComplex, stage: Stage, resolution: usize) -> Self {
        let names = cx.spec.free_names();
        let cov: Coverage = coverage(cx, resolution);
        ComplexJson {
            spec: SpecJson::new(&cx.spec),
            stage: stage_name(stage),
            cells: cx.cells.iter().map(|c| CellJson::new(c, &names)).collect(),
            edges: cx.edges.iter().map(|e| (e.a, e.b, e.wall.display(&names).to_string())).collect(),
            failures: cx
                .failures
                .iter()
                .map(|f| FailureJson { cell: f.cell, wall: f.wall.display(&names).to_string() })
                .collect(),
            truncated: cx.truncated,
            coverage: CoverageJson {
                resolution,
                covered: cov.covered,
                total: cov.total,
                on_walls: cov.on_walls,
                fraction: cov.fraction(),
            },
        }
    }

    /// Cell counts per color, coverage, and failures.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("{:<8}{:<22}{:>6}\n", "color", "status", "cells"));
        let order = [
            Verdict::NotConstructible,
            Verdict::NotMinimal,
            Verdict::MinimalNotExtreme,
            Verdict::Extreme,
            Verdict::UncoveredUnknown,
            Verdict::Constructible,
            Verdict::Minimal,
        ];
        for v in order {
            let n = self.cells.iter().filter(|c| c.status == v.as_str()).count();
            if n > 0 {
                s.push_str(&format!("{:<8}{:<22}{:>6}\n", v.color(), v.as_str(), n));
            }
        }
        s.push_str(&format!("{:<30}{:>6}\n", "total", self.cells.len()));
        let c = &self.coverage;
        s.push_str(&format!(
            "coverage  {:.4} ({}/{} samples at {}x{}, {} on walls)\n",
            c.fraction, c.covered, c.total, c.resolution, c.resolution, c.on_walls
        ));
        s.push_str(&format!("failures  {}\n", self.failures.len()));
        for f in &self.failures {
            s.push_str(&format!("  cell {}: {}\n", f.cell, f.wall));
        }
        if self.truncated {
            s.push_str("truncated: cell limit reached\n");
        }
        s
    }
}

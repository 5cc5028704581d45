//! Cell complexes of a parameter slice: classify a point by a parametric run,
//! cross walls to find neighbors, and search breadth-first.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::atom::{Atom, Rel};
use crate::cell::{Cell, MonomialMap};
use crate::error::{Error, Result};
use crate::families::Family;
use crate::field::OrderedField;
use crate::gj::{extremality_of_minimal, minimality_test, Verdict};
use crate::oracle::grid_oracle_extremality;
use crate::param::ParamContext;
use crate::poly::MultiPoly;
use crate::rational::Rational;

/// A family restricted to a box in some of its parameters, the others fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceSpec {
    pub family: Family,
    /// Fixed parameters as (index into the family's parameter list, value).
    pub fixed: Vec<(usize, Rational)>,
    /// Indices of the free parameters, in the order of point coordinates.
    pub free: Vec<usize>,
    pub lo: Vec<Rational>,
    pub hi: Vec<Rational>,
}

impl SliceSpec {
    pub fn new(family: Family, fixed: &[(&str, Rational)], free: &[(&str, Rational, Rational)]) -> Result<Self> {
        let params = family.params();
        let index = |name: &str| {
            params.iter().position(|p| *p == name).ok_or_else(|| Error::InvalidSlice(format!("unknown parameter `{name}`")))
        };
        let mut spec = SliceSpec { family, fixed: Vec::new(), free: Vec::new(), lo: Vec::new(), hi: Vec::new() };
        for (name, v) in fixed {
            spec.fixed.push((index(name)?, v.clone()));
        }
        for (name, lo, hi) in free {
            if lo >= hi {
                return Err(Error::InvalidSlice(format!("empty range for `{name}`")));
            }
            spec.free.push(index(name)?);
            spec.lo.push(lo.clone());
            spec.hi.push(hi.clone());
        }
        let mut seen: Vec<usize> = spec.fixed.iter().map(|(i, _)| *i).chain(spec.free.iter().copied()).collect();
        seen.sort_unstable();
        if seen != (0..params.len()).collect::<Vec<_>>() {
            return Err(Error::InvalidSlice(String::from("every parameter must be either fixed or free, exactly once")));
        }
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn free_names(&self) -> Vec<&'static str> {
        self.free.iter().map(|&i| self.family.params()[i]).collect()
    }

    /// The full parameter vector for a point of the slice.
    pub fn full_point(&self, point: &[Rational]) -> Vec<Rational> {
        let mut full = vec![Rational::zero(); self.family.params().len()];
        for (i, v) in &self.fixed {
            full[*i] = v.clone();
        }
        for (k, &i) in self.free.iter().enumerate() {
            full[i] = point[k].clone();
        }
        full
    }

    /// Membership in the open box.
    pub fn in_box(&self, point: &[Rational]) -> bool {
        point.len() == self.dim() && point.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (lo, hi))| lo < x && x < hi)
    }

    fn diameter(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| (h - l).to_f64()).fold(0.0, f64::max)
    }
}

/// How far the pipeline runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Stage {
    Construct,
    Minimal,
    #[default]
    Extreme,
}

impl Stage {
    pub fn from_name(s: &str) -> Option<Stage> {
        match s {
            "construct" | "construction" => Some(Stage::Construct),
            "minimal" | "minimality" => Some(Stage::Minimal),
            "extreme" | "extremality" => Some(Stage::Extreme),
            _ => None,
        }
    }
}

/// Construct, test minimality, test extremality, stopping after `stage`.
pub fn run_stage<F: OrderedField>(family: Family, params: &[F], stage: Stage) -> Result<Verdict> {
    let pi = match family.construct(params) {
        Ok(pi) => pi,
        Err(Error::NotConstructible) => return Ok(Verdict::NotConstructible),
        Err(e) => return Err(e),
    };
    if stage == Stage::Construct {
        return Ok(Verdict::Constructible);
    }
    if !minimality_test(&pi) {
        return Ok(Verdict::NotMinimal);
    }
    if stage == Stage::Minimal {
        return Ok(Verdict::Minimal);
    }
    Ok(extremality_of_minimal(&pi))
}

/// The verdict of a concrete run over the rationals.
pub fn concrete_verdict(family: Family, params: &[Rational], stage: Stage) -> Result<Verdict> {
    run_stage(family, params, stage)
}

/// Replaces [`Verdict::UncoveredUnknown`] by the grid oracle's answer when
/// the grid is small enough; other verdicts pass through.
pub fn resolve_with_oracle(family: Family, params: &[Rational], verdict: Verdict) -> Result<Verdict> {
    if verdict != Verdict::UncoveredUnknown {
        return Ok(verdict);
    }
    let pi = family.construct(params)?;
    match grid_oracle_extremality(&pi) {
        Ok(true) => Ok(Verdict::Extreme),
        Ok(false) => Ok(Verdict::MinimalNotExtreme),
        Err(Error::Unsupported(_)) => Ok(verdict),
        Err(e) => Err(e),
    }
}

/// Runs the pipeline parametrically at `point` and reduces its ledger.
pub fn classify(spec: &SliceSpec, point: &[Rational], stage: Stage, map: &mut MonomialMap) -> Result<Cell> {
    let names = spec.free_names();
    let (ctx, gens) = ParamContext::new(&names, point)?;
    let mut params = Vec::with_capacity(spec.family.params().len());
    for i in 0..spec.family.params().len() {
        match spec.free.iter().position(|&j| j == i) {
            Some(k) => params.push(gens[k].clone()),
            None => {
                let v = &spec.fixed.iter().find(|(j, _)| *j == i).unwrap().1;
                params.push(ctx.constant(v));
            }
        }
    }
    let verdict = run_stage(spec.family, &params, stage)?;
    Cell::from_ledger(&ctx.ledger_snapshot(), point, verdict, map)
}

fn abs(x: f64) -> f64 {
    if x < 0.0 {
        -x
    } else {
        x
    }
}

fn eval_f64(p: &MultiPoly, x: &[f64]) -> f64 {
    p.eval_f64(x)
}

fn grad_f64(p: &MultiPoly, x: &[f64]) -> Vec<f64> {
    (0..x.len()).map(|i| eval_f64(&p.derivative(i), x)).collect()
}

/// Scales to unit max-norm; `None` for the zero vector.
fn unit(v: &[f64]) -> Option<Vec<f64>> {
    let n = v.iter().fold(0.0, |m: f64, x| m.max(abs(*x)));
    (n > 0.0 && n.is_finite()).then(|| v.iter().map(|x| x / n).collect())
}

/// Parameters of the neighbor heuristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NeighborConfig {
    pub max_attempts: usize,
    pub max_den: u64,
    /// Distinct cells sought across one wall during the search.
    pub max_neighbors: usize,
    /// Step sizes tried per attempt, halving from a eighth of the box diameter.
    pub halvings: u32,
}

impl Default for NeighborConfig {
    fn default() -> Self {
        NeighborConfig { max_attempts: 40, max_den: 1_000_000, max_neighbors: 4, halvings: 18 }
    }
}

fn rationalize(x: &[f64], max_den: u64) -> Option<Vec<Rational>> {
    x.iter().map(|&v| Rational::from_f64(v).map(|r| r.approximate(max_den))).collect()
}

/// First point of the ray `start + t·dir`, `t > 0`, where `p ≥ 0`, if it is
/// reached inside the box.
fn ray_hit(p: &MultiPoly, start: &[f64], dir: &[f64], lo: &[f64], hi: &[f64]) -> Option<Vec<f64>> {
    let at = |t: f64| -> Vec<f64> { start.iter().zip(dir).map(|(s, d)| s + t * d).collect() };
    let inside = |x: &[f64]| x.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| l <= v && v <= h);
    let width = lo.iter().zip(hi).map(|(l, h)| h - l).fold(0.0, f64::max);
    let dt = width / 512.0;
    let (mut t0, mut t1) = (0.0, dt);
    loop {
        let x = at(t1);
        if !inside(&x) {
            return None;
        }
        if eval_f64(p, &x) >= 0.0 {
            break;
        }
        t0 = t1;
        t1 += dt;
    }
    for _ in 0..60 {
        let mid = 0.5 * (t0 + t1);
        if eval_f64(p, &at(mid)) >= 0.0 {
            t1 = mid;
        } else {
            t0 = mid;
        }
    }
    Some(at(t1))
}

/// A rational point strictly on the positive side of `wall` (as printed,
/// i.e. violating it) that satisfies every other atom of `cell` and lies in
/// the open box. Every returned point is verified exactly.
pub fn find_neighbor_point(
    spec: &SliceSpec,
    cell: &Cell,
    wall: &Atom,
    rng: &mut ChaCha8Rng,
    cfg: &NeighborConfig,
) -> Option<Vec<Rational>> {
    let mut found = None;
    neighbor_search(spec, cell, wall, rng, cfg, |x| {
        found = Some(x);
        ControlFlow::Break(())
    });
    found
}

/// Like [`find_neighbor_point`], but hands every verified point to `visit`
/// (at most one per attempt) until it breaks or the attempts run out.
/// Attempts shoot rays from the test point, from jittered points near it,
/// and from random points of the cell, so that different stretches of the
/// wall are reached.
pub fn neighbor_search(
    spec: &SliceSpec,
    cell: &Cell,
    wall: &Atom,
    rng: &mut ChaCha8Rng,
    cfg: &NeighborConfig,
    mut visit: impl FnMut(Vec<Rational>) -> ControlFlow<()>,
) {
    let p = wall.oriented();
    let others: Vec<&Atom> = cell.atoms.iter().filter(|a| *a != wall).collect();
    let accept = |x: &[Rational]| {
        spec.in_box(x) && p.eval(x).is_positive() && others.iter().all(|a| a.holds_at(x))
    };
    let lo: Vec<f64> = spec.lo.iter().map(Rational::to_f64).collect();
    let hi: Vec<f64> = spec.hi.iter().map(Rational::to_f64).collect();
    let x0: Vec<f64> = cell.test_point.iter().map(Rational::to_f64).collect();
    let diam = spec.diameter();
    let float_ok = |x: &[f64]| {
        others.iter().all(|a| {
            let v = eval_f64(&a.oriented(), x);
            match a.rel() {
                Rel::Lt => v < 0.0,
                Rel::Le => v <= 0.0,
                Rel::Eq => true,
            }
        }) && eval_f64(&p, x) < 0.0
    };
    for attempt in 0..cfg.max_attempts {
        let spread = attempt as f64 / cfg.max_attempts as f64;
        let mut start = x0.clone();
        if attempt >= 2 {
            for _ in 0..32 {
                let cand: Vec<f64> = if attempt % 2 == 0 {
                    lo.iter().zip(&hi).map(|(l, h)| rng.gen_range(*l..*h)).collect()
                } else {
                    x0.iter().map(|v| v + spread * diam * 0.25 * rng.gen_range(-1.0..1.0)).collect()
                };
                if float_ok(&cand) {
                    start = cand;
                    break;
                }
            }
        }
        let Some(g) = unit(&grad_f64(&p, &start)) else { continue };
        let dir: Vec<f64> = if attempt < 2 {
            g
        } else {
            g.iter().map(|gi| gi + 2.0 * spread * rng.gen_range(-1.0..1.0)).collect()
        };
        let Some(hit) = ray_hit(&p, &start, &dir, &lo, &hi) else { continue };
        let Some(n) = unit(&grad_f64(&p, &hit)) else { continue };
        let mut step = diam / 8.0;
        for _ in 0..cfg.halvings {
            let cand: Vec<f64> = hit.iter().zip(&n).map(|(h, d)| h + step * d).collect();
            if let Some(x) = rationalize(&cand, cfg.max_den) {
                if accept(&x) {
                    if visit(x).is_break() {
                        return;
                    }
                    break;
                }
            }
            step *= 0.5;
        }
    }
}

/// Adjacency between cells `a` and `b` across `wall` (canonical polynomial):
/// the wall is negative at the test point of `a` and positive at that of `b`,
/// or the other way round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub wall: MultiPoly,
}

/// A wall whose far side could not be reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub cell: usize,
    pub wall: Atom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    pub spec: SliceSpec,
    pub cells: Vec<Cell>,
    pub edges: Vec<Edge>,
    pub failures: Vec<Failure>,
    /// Whether the search stopped at the cell limit with walls left to cross.
    pub truncated: bool,
}

impl CellComplex {
    /// The index of the cell containing `point`, if any.
    pub fn locate(&self, point: &[Rational]) -> Option<usize> {
        self.cells.iter().position(|c| c.contains(point))
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.cells.iter().filter(|c| c.verdict == verdict).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsOptions {
    pub stage: Stage,
    pub rng_seed: u64,
    pub max_cells: usize,
    pub neighbor: NeighborConfig,
}

impl Default for BfsOptions {
    fn default() -> Self {
        BfsOptions { stage: Stage::Extreme, rng_seed: 0, max_cells: 500, neighbor: NeighborConfig::default() }
    }
}

/// A full-dimensional cell near a seed that landed on a variety, if one is
/// found close by.
fn generic_nearby(
    spec: &SliceSpec,
    cell: &Cell,
    stage: Stage,
    map: &mut MonomialMap,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Cell>> {
    let eqs = cell.varieties();
    let grain = 1000i64;
    let mut radius = Rational::from_f64(spec.diameter() / 64.0).unwrap().approximate(1 << 20);
    for _ in 0..10 {
        for _ in 0..8 {
            let p: Vec<Rational> = cell
                .test_point
                .iter()
                .map(|x| x + &(&radius * &Rational::new(rng.gen_range(-grain..=grain), grain)))
                .collect();
            if !spec.in_box(&p) || eqs.iter().any(|e| e.poly().eval(&p).is_zero()) {
                continue;
            }
            let c = classify(spec, &p, stage, map)?;
            if c.varieties().is_empty() {
                return Ok(Some(c));
            }
        }
        radius = &radius * &Rational::new(1, 2);
    }
    Ok(None)
}

/// Breadth-first wall crossing from the cell of `seed`. Cells are identified
/// by their reduced atom sets; walls are processed in FIFO discovery order.
/// A seed on a variety is first moved to a nearby full-dimensional cell when
/// one exists.
pub fn bfs_complex(spec: &SliceSpec, seed: &[Rational], opts: &BfsOptions) -> Result<CellComplex> {
    if !spec.in_box(seed) {
        return Err(Error::InvalidSlice(String::from("seed outside the box")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
    let mut map = MonomialMap::new(spec.dim());
    let mut first = classify(spec, seed, opts.stage, &mut map)?;
    if !first.varieties().is_empty() {
        if let Some(c) = generic_nearby(spec, &first, opts.stage, &mut map, &mut rng)? {
            first = c;
        }
    }
    let mut cx = CellComplex { spec: spec.clone(), cells: Vec::new(), edges: Vec::new(), failures: Vec::new(), truncated: false };
    let mut index: BTreeMap<Vec<Atom>, usize> = BTreeMap::new();
    let mut queue: VecDeque<(usize, Atom)> = VecDeque::new();
    index.insert(first.atoms.clone(), 0);
    queue.extend(first.walls().into_iter().map(|w| (0, w)));
    cx.cells.push(first);
    while let Some((ci, wall)) = queue.pop_front() {
        let wp = wall.poly().clone();
        let mut reached: Vec<usize> = Vec::new();
        let mut err = None;
        let from = cx.cells[ci].clone();
        neighbor_search(spec, &from, &wall, &mut rng, &opts.neighbor, |point| {
            let j = match cx.locate(&point) {
                Some(j) => j,
                None => {
                    if cx.cells.len() >= opts.max_cells {
                        cx.truncated = true;
                        return ControlFlow::Break(());
                    }
                    let cell = match classify(spec, &point, opts.stage, &mut map) {
                        Ok(c) => c,
                        Err(e) => {
                            err = Some(e);
                            return ControlFlow::Break(());
                        }
                    };
                    match index.get(&cell.atoms) {
                        Some(&j) => j,
                        None => {
                            let j = cx.cells.len();
                            index.insert(cell.atoms.clone(), j);
                            queue.extend(cell.walls().into_iter().map(|w| (j, w)));
                            cx.cells.push(cell);
                            j
                        }
                    }
                }
            };
            if !reached.contains(&j) {
                reached.push(j);
                let valid = wall.oriented().eval(&cx.cells[j].test_point).is_positive();
                if valid && !cx.edges.iter().any(|e| e.wall == wp && (e.a, e.b) == (ci, j)) {
                    cx.edges.push(Edge { a: ci, b: j, wall: wp.clone() });
                }
            }
            if reached.len() >= opts.neighbor.max_neighbors {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if cx.truncated {
            break;
        }
        if reached.is_empty() {
            cx.failures.push(Failure { cell: ci, wall });
        }
    }
    Ok(cx)
}

/// Outer walls of the union of the cells with a given verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionDescription {
    pub atoms: Vec<Atom>,
    /// Surviving atoms of degree above one, to be checked by hand.
    pub nonlinear: Vec<Atom>,
}

/// Collects the reduced atoms of every cell with `verdict` and drops those
/// polynomials that occur with both orientations (inner walls).
pub fn region_union_description(cx: &CellComplex, verdict: Verdict) -> RegionDescription {
    let mut seen: BTreeMap<MultiPoly, (BTreeSet<i8>, Vec<Atom>)> = BTreeMap::new();
    for cell in cx.cells.iter().filter(|c| c.verdict == verdict) {
        for a in &cell.atoms {
            let e = seen.entry(a.poly().clone()).or_default();
            if a.rel() != Rel::Eq {
                e.0.insert(a.orientation());
            }
            if !e.1.contains(a) {
                e.1.push(a.clone());
            }
        }
    }
    let mut atoms: Vec<Atom> = seen.into_values().filter(|(o, _)| o.len() < 2).flat_map(|(_, v)| v).collect();
    atoms.sort();
    let nonlinear = atoms.iter().filter(|a| !a.poly().is_linear()).cloned().collect();
    RegionDescription { atoms, nonlinear }
}

/// Raster coverage of the box by the cells of a complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub covered: usize,
    pub total: usize,
    /// Samples lying exactly on a wall of some cell, left out of `total`.
    pub on_walls: usize,
}

impl Coverage {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.covered as f64 / self.total as f64
        }
    }
}

/// Centers of an `n`-per-axis grid over the box.
pub fn raster_points(spec: &SliceSpec, n: usize) -> Vec<Vec<Rational>> {
    let d = spec.dim();
    let mut out = Vec::new();
    let total = n.pow(d as u32);
    let two_n = Rational::from_integer(2 * n as i64);
    for mut k in 0..total {
        let mut p = Vec::with_capacity(d);
        for i in 0..d {
            let idx = k % n;
            k /= n;
            let t = Rational::from_integer(2 * idx as i64 + 1) / two_n.clone();
            p.push(&spec.lo[i] + &(&t * &(&spec.hi[i] - &spec.lo[i])));
        }
        out.push(p);
    }
    out
}

pub fn coverage(cx: &CellComplex, n: usize) -> Coverage {
    let walls: BTreeSet<MultiPoly> = cx.cells.iter().flat_map(|c| c.atoms.iter().map(|a| a.poly().clone())).collect();
    let mut cov = Coverage { covered: 0, total: 0, on_walls: 0 };
    for p in raster_points(&cx.spec, n) {
        if walls.iter().any(|w| w.eval(&p).is_zero()) {
            cov.on_walls += 1;
            continue;
        }
        cov.total += 1;
        if cx.locate(&p).is_some() {
            cov.covered += 1;
        }
    }
    cov
}

/// Up to `n` distinct random rational points of `cell` inside the box, found
/// by rejection sampling around the test point with shrinking radius. On a
/// single equation of degree one in some coordinate, that coordinate is
/// solved for instead of sampled.
pub fn sample_cell_points(spec: &SliceSpec, cell: &Cell, n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
    let d = spec.dim();
    let eqs = cell.varieties();
    let solve_for = match eqs.as_slice() {
        [] => None,
        [e] => (0..d).rev().find(|&j| e.poly().degree_in(j) == 1).map(|j| (e.poly().clone(), j)),
        _ => return Vec::new(),
    };
    if !eqs.is_empty() && solve_for.is_none() {
        return Vec::new();
    }
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let mut radius = Rational::from_f64(spec.diameter() / 4.0).unwrap().approximate(1 << 20);
    let half = Rational::new(1, 2);
    let grain = 1000i64;
    for _ in 0..40 {
        for _ in 0..50 {
            let mut p: Vec<Rational> = cell
                .test_point
                .iter()
                .map(|x| x + &(&radius * &Rational::new(rng.gen_range(-grain..=grain), grain)))
                .collect();
            if let Some((eq, j)) = &solve_for {
                // eq = c1·x_j + c0 with c0, c1 free of x_j.
                let coeffs = eq.coefficients_in(*j);
                let (c0, c1) = (coeffs[0].eval(&p), coeffs[1].eval(&p));
                if c1.is_zero() {
                    continue;
                }
                p[*j] = -&(c0 / c1);
            }
            if spec.in_box(&p) && cell.contains(&p) && !out.contains(&p) {
                out.push(p);
                if out.len() == n {
                    return out;
                }
            }
        }
        radius = &radius * &half;
    }
    out
}

//! Minimality and grid-free extremality tests for continuous piecewise-linear
//! functions on ℝ/ℤ.
//!
//! All routines are generic over [`OrderedField`], so running them on
//! parametric elements records every branch they take.
//!
//! Minimality uses the vertices of the two-dimensional complex: `Δπ` is affine
//! on each of its cells, so nonnegativity at vertices gives subadditivity
//! everywhere, and for such a function the symmetry condition reduces to the
//! breakpoints because `x ↦ π(x) + π(f − x)` is piecewise linear with breaks
//! only at breakpoints and their reflections.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::field::OrderedField;
use crate::pwl::Pwl;
use crate::rational::Rational;

/// Classification of a function, ordered like the cell colors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    NotConstructible,
    NotMinimal,
    MinimalNotExtreme,
    Extreme,
    UncoveredUnknown,
    /// Constructible; the run stopped before the minimality test.
    Constructible,
    /// Minimal; the run stopped before the extremality test.
    Minimal,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NotConstructible => "not_constructible",
            Verdict::NotMinimal => "not_minimal",
            Verdict::MinimalNotExtreme => "minimal_not_extreme",
            Verdict::Extreme => "extreme",
            Verdict::UncoveredUnknown => "uncovered_unknown",
            Verdict::Constructible => "constructible",
            Verdict::Minimal => "minimal",
        }
    }

    pub fn from_str_name(s: &str) -> Option<Verdict> {
        [
            Verdict::NotConstructible,
            Verdict::NotMinimal,
            Verdict::MinimalNotExtreme,
            Verdict::Extreme,
            Verdict::UncoveredUnknown,
            Verdict::Constructible,
            Verdict::Minimal,
        ]
        .into_iter()
        .find(|v| v.as_str() == s)
    }

    pub fn color(self) -> &'static str {
        match self {
            Verdict::NotConstructible => "white",
            Verdict::NotMinimal => "yellow",
            Verdict::MinimalNotExtreme => "green",
            Verdict::Extreme => "blue",
            Verdict::UncoveredUnknown | Verdict::Constructible | Verdict::Minimal => "gray",
        }
    }
}

/// A vertex `(x, y)` of the complex with `slack = Δπ(x, y)`.
#[derive(Clone, Debug)]
pub struct DeltaVertex<F> {
    pub x: F,
    pub y: F,
    pub slack: F,
}

/// `π(x) + π(y) − π(x + y)`.
pub fn delta_pi<F: OrderedField>(pi: &Pwl<F>, x: &F, y: &F) -> F {
    pi.eval(x).add(&pi.eval(y)).sub(&pi.eval(&x.add(y)))
}

/// Visits the vertices `(bᵢ, bⱼ)` and `(bᵢ, z − bᵢ)`, `z ∈ B ∪ (B + 1)`, skipping
/// those on the trivial lines `x ∈ {0, 1}` and repeated pairs.
fn for_each_vertex<F: OrderedField>(
    pi: &Pwl<F>,
    mut visit: impl FnMut(DeltaVertex<F>) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let b = pi.breakpoints();
    let v = pi.values();
    let n = pi.pieces();
    let one = b[0].one_like();
    let mut seen = BTreeSet::new();
    let mut fresh = |x: &F, y: &F| {
        let (kx, ky) = (x.key(), y.key());
        let k = if kx <= ky { (kx, ky) } else { (ky, kx) };
        seen.insert(k)
    };
    for i in 1..n {
        for j in i..n {
            if fresh(&b[i], &b[j]) {
                let slack = v[i].add(&v[j]).sub(&pi.eval(&b[i].add(&b[j])));
                visit(DeltaVertex { x: b[i].clone(), y: b[j].clone(), slack })?;
            }
        }
    }
    for i in 1..n {
        for k in (i + 1..=n).chain(1..i) {
            let z = if k > i { b[k].clone() } else { one.add(&b[k]) };
            let y = z.sub(&b[i]);
            if fresh(&b[i], &y) {
                let slack = v[i].add(&pi.eval(&y)).sub(&v[k]);
                visit(DeltaVertex { x: b[i].clone(), y, slack })?;
            }
        }
    }
    ControlFlow::Continue(())
}

/// All vertices of the two-dimensional complex (up to the symmetry `x ↔ y`).
pub fn complex_vertices<F: OrderedField>(pi: &Pwl<F>) -> Vec<DeltaVertex<F>> {
    let mut out = Vec::new();
    let _ = for_each_vertex(pi, |d| {
        out.push(d);
        ControlFlow::Continue(())
    });
    out
}

/// Range, `π(0) = 0`, subadditivity at complex vertices, `π(f) = 1`, and
/// symmetry at breakpoints, checked in that order; stops at the first failure.
pub fn minimality_test<F: OrderedField>(pi: &Pwl<F>) -> bool {
    let b = pi.breakpoints();
    let v = pi.values();
    let zero = b[0].zero_like();
    let one = b[0].one_like();
    for x in v {
        if x.lt(&zero) || x.gt(&one) {
            return false;
        }
    }
    if !v[0].is_identically_zero() && !v[0].is_zero() {
        return false;
    }
    let sub = for_each_vertex(pi, |d| {
        if d.slack.is_negative() {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    if sub.is_break() {
        return false;
    }
    let f = pi.f();
    if !pi.eval(f).equals(&one) {
        return false;
    }
    for (x, vx) in b.iter().zip(v) {
        if !vx.add(&pi.eval(&f.sub(x))).equals(&one) {
            return false;
        }
    }
    true
}

/// A closed interval `[lo, hi]`.
#[derive(Clone, Debug)]
pub struct Interval<F> {
    pub lo: F,
    pub hi: F,
}

impl<F: OrderedField> Interval<F> {
    pub fn new(lo: F, hi: F) -> Self {
        Interval { lo, hi }
    }

    fn overlaps(&self, other: &Self) -> bool {
        self.lo.lt(&other.hi) && other.lo.lt(&self.hi)
    }

    fn touches(&self, other: &Self) -> bool {
        self.lo.le(&other.hi) && other.lo.le(&self.hi)
    }

    fn contains(&self, other: &Self) -> bool {
        self.lo.le(&other.lo) && other.hi.le(&self.hi)
    }

    /// Positive-length intersection.
    fn meet(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.max_of(&other.lo);
        let hi = self.hi.min_of(&other.hi);
        if lo.lt(&hi) {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    fn hull(&self, other: &Self) -> Self {
        Interval { lo: self.lo.min_of(&other.lo), hi: self.hi.max_of(&other.hi) }
    }
}

/// A face of the two-dimensional complex on which `Δπ` vanishes. The
/// intervals are the projections to `x`, `y`, and `x + y` (the latter in
/// `[0, 2]`; `wraps` marks faces with `x + y ≥ 1`).
#[derive(Clone, Debug)]
pub struct AdditiveFace<F> {
    pub dim: u8,
    pub vertices: Vec<(F, F)>,
    pub i: Interval<F>,
    pub j: Interval<F>,
    pub k: Interval<F>,
    pub wraps: bool,
}

#[derive(Clone, Debug)]
enum Side<F> {
    /// `x = t`
    X(F),
    /// `y = t`
    Y(F),
    /// `x + y = c`
    D(F),
}

struct Polygon<F> {
    /// Vertex and the side leading to the next vertex.
    verts: Vec<((F, F), Side<F>)>,
}

fn clip<F: OrderedField>(poly: Polygon<F>, c: &F, keep_above: bool) -> Polygon<F> {
    let signs: Vec<core::cmp::Ordering> = poly
        .verts
        .iter()
        .map(|((x, y), _)| {
            let s = x.add(y).sub(c);
            let s = if keep_above { s } else { s.neg() };
            s.sign()
        })
        .collect();
    use core::cmp::Ordering::*;
    let m = poly.verts.len();
    let mut out = Vec::new();
    for idx in 0..m {
        let (p, side) = &poly.verts[idx];
        let q = &poly.verts[(idx + 1) % m].0;
        let (sp, sq) = (signs[idx], signs[(idx + 1) % m]);
        let cross = || match side {
            Side::X(t) => (t.clone(), c.sub(t)),
            Side::Y(t) => (c.sub(t), t.clone()),
            Side::D(_) => unreachable!("parallel sides do not cross"),
        };
        match (sp, sq) {
            (Less, Greater) => out.push((cross(), side.clone())),
            (Less, _) => {}
            (Equal, Less) => out.push((p.clone(), Side::D(c.clone()))),
            (Greater, Less) => {
                out.push((p.clone(), side.clone()));
                out.push((cross(), Side::D(c.clone())));
            }
            _ => out.push((p.clone(), side.clone())),
        }
        let _ = q;
    }
    Polygon { verts: out }
}

/// A two-dimensional cell `I × J ∩ {x + y ∈ K}` with `I, J` pieces of `π` and
/// `K` a piece of the breakpoints extended to `[0, 2]`.
struct Cell2<F> {
    k: usize,
    poly: Polygon<F>,
    additive: Vec<bool>,
}

struct Analysis<F: OrderedField> {
    cells: Vec<Cell2<F>>,
    n: usize,
    /// `(x, y, x + y reduced into [0, 1])` for every additive vertex.
    additive_vertices: Vec<(F, F, F)>,
}

fn extended_breakpoints<F: OrderedField>(pi: &Pwl<F>) -> Vec<F> {
    let b = pi.breakpoints();
    let one = b[0].one_like();
    let mut c: Vec<F> = b.to_vec();
    c.extend(b[1..].iter().map(|x| x.add(&one)));
    c
}

/// First index `t` in `lo..hi` with `!pred(t)`, assuming `pred` is monotone.
fn partition_point(mut lo: usize, mut hi: usize, mut pred: impl FnMut(usize) -> bool) -> usize {
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

fn analyze<F: OrderedField>(pi: &Pwl<F>) -> Analysis<F> {
    let b = pi.breakpoints();
    let v = pi.values();
    let s = pi.slopes();
    let n = pi.pieces();
    let c = extended_breakpoints(pi);
    let one = b[0].one_like();
    // π on piece t of the extended breakpoints.
    let piece_value = |t: usize, z: &F| -> F {
        if t < n {
            v[t].add(&z.sub(&b[t]).mul(&s[t]))
        } else {
            let m = t - n;
            v[m].add(&z.sub(&one).sub(&b[m]).mul(&s[m]))
        }
    };
    let mut slack_cache: BTreeMap<(F::Key, F::Key), (bool, Option<usize>)> = BTreeMap::new();
    let mut additive_vertices = Vec::new();
    let mut cells = Vec::new();
    for i in 0..n {
        for j in i..n {
            let lo = b[i].add(&b[j]);
            let hi = b[i + 1].add(&b[j + 1]);
            let t0 = partition_point(0, 2 * n, |t| c[t + 1].le(&lo));
            let t1 = partition_point(t0, 2 * n, |t| c[t].lt(&hi));
            for k in t0..t1 {
                let rect = Polygon {
                    verts: vec![
                        ((b[i].clone(), b[j].clone()), Side::Y(b[j].clone())),
                        ((b[i + 1].clone(), b[j].clone()), Side::X(b[i + 1].clone())),
                        ((b[i + 1].clone(), b[j + 1].clone()), Side::Y(b[j + 1].clone())),
                        ((b[i].clone(), b[j + 1].clone()), Side::X(b[i].clone())),
                    ],
                };
                let poly = clip(clip(rect, &c[k], true), &c[k + 1], false);
                debug_assert!(poly.verts.len() >= 3);
                let mut additive = Vec::with_capacity(poly.verts.len());
                for ((x, y), _) in &poly.verts {
                    let key = (x.key(), y.key());
                    let zero = match slack_cache.get(&key) {
                        Some(&(z, _)) => z,
                        None => {
                            let z = x.add(y);
                            let slack = v[i].add(&x.sub(&b[i]).mul(&s[i]))
                                .add(&v[j].add(&y.sub(&b[j]).mul(&s[j])))
                                .sub(&piece_value(k, &z));
                            let is_zero = slack.is_identically_zero() || slack.is_zero();
                            let idx = if is_zero {
                                let zr = if k >= n { z.sub(&one) } else { z };
                                additive_vertices.push((x.clone(), y.clone(), zr));
                                Some(additive_vertices.len() - 1)
                            } else {
                                None
                            };
                            slack_cache.insert(key, (is_zero, idx));
                            is_zero
                        }
                    };
                    additive.push(zero);
                }
                cells.push(Cell2 { k, poly, additive });
            }
        }
    }
    Analysis { cells, n, additive_vertices }
}

fn range_of<F: OrderedField>(vals: impl Iterator<Item = F>) -> Interval<F> {
    let mut it = vals;
    let first = it.next().expect("nonempty");
    let mut iv = Interval { lo: first.clone(), hi: first };
    for x in it {
        iv.lo = iv.lo.min_of(&x);
        iv.hi = iv.hi.max_of(&x);
    }
    iv
}

fn faces_of<F: OrderedField>(an: &Analysis<F>) -> Vec<AdditiveFace<F>> {
    let mut faces = Vec::new();
    let mut in_face: BTreeSet<(F::Key, F::Key)> = BTreeSet::new();
    for cell in an.cells.iter().filter(|c| c.additive.iter().all(|&a| a)) {
        let pts: Vec<(F, F)> = cell.poly.verts.iter().map(|(p, _)| p.clone()).collect();
        for (x, y) in &pts {
            in_face.insert((x.key(), y.key()));
        }
        faces.push(AdditiveFace {
            dim: 2,
            i: range_of(pts.iter().map(|p| p.0.clone())),
            j: range_of(pts.iter().map(|p| p.1.clone())),
            k: range_of(pts.iter().map(|p| p.0.add(&p.1))),
            vertices: pts,
            wraps: cell.k >= an.n,
        });
    }
    for cell in an.cells.iter().filter(|c| !c.additive.iter().all(|&a| a)) {
        let m = cell.poly.verts.len();
        for e in 0..m {
            if !(cell.additive[e] && cell.additive[(e + 1) % m]) {
                continue;
            }
            let (p, side) = &cell.poly.verts[e];
            let q = &cell.poly.verts[(e + 1) % m].0;
            let _ = side;
            let pts = vec![p.clone(), q.clone()];
            for (x, y) in &pts {
                in_face.insert((x.key(), y.key()));
            }
            faces.push(AdditiveFace {
                dim: 1,
                i: range_of(pts.iter().map(|p| p.0.clone())),
                j: range_of(pts.iter().map(|p| p.1.clone())),
                k: range_of(pts.iter().map(|p| p.0.add(&p.1))),
                vertices: pts,
                wraps: cell.k >= an.n,
            });
        }
    }
    for (x, y, _) in &an.additive_vertices {
        if in_face.insert((x.key(), y.key())) {
            let z = x.add(y);
            faces.push(AdditiveFace {
                dim: 0,
                vertices: vec![(x.clone(), y.clone())],
                i: Interval::new(x.clone(), x.clone()),
                j: Interval::new(y.clone(), y.clone()),
                k: Interval::new(z.clone(), z),
                wraps: false,
            });
        }
    }
    faces
}

/// Maximal additive faces: 2-faces, then additive edges of non-additive
/// cells, then additive vertices lying on neither.
pub fn additive_faces<F: OrderedField>(pi: &Pwl<F>) -> Vec<AdditiveFace<F>> {
    faces_of(&analyze(pi))
}

/// Covered intervals grouped into components (one common slope per
/// component), and the intervals left uncovered.
#[derive(Clone, Debug)]
pub struct CoveredComponents<F> {
    pub components: Vec<Vec<Interval<F>>>,
    pub uncovered: Vec<Interval<F>>,
}

/// `x ↦ σx + τ` from `dom` onto `img`.
struct Move<F> {
    dom: Interval<F>,
    img: Interval<F>,
    reflect: bool,
    tau: F,
}

impl<F: OrderedField> Move<F> {
    fn apply(&self, iv: &Interval<F>, forward: bool) -> Interval<F> {
        if self.reflect {
            Interval { lo: self.tau.sub(&iv.hi), hi: self.tau.sub(&iv.lo) }
        } else if forward {
            Interval { lo: iv.lo.add(&self.tau), hi: iv.hi.add(&self.tau) }
        } else {
            Interval { lo: iv.lo.sub(&self.tau), hi: iv.hi.sub(&self.tau) }
        }
    }
}

fn shift_down<F: OrderedField>(iv: &Interval<F>, wraps: bool) -> Interval<F> {
    if wraps {
        let one = iv.lo.one_like();
        Interval { lo: iv.lo.sub(&one), hi: iv.hi.sub(&one) }
    } else {
        iv.clone()
    }
}

fn moves_of<F: OrderedField>(faces: &[AdditiveFace<F>]) -> Vec<Move<F>> {
    let mut moves = Vec::new();
    for face in faces.iter().filter(|f| f.dim == 1) {
        let (p, q) = (&face.vertices[0], &face.vertices[1]);
        let one = p.0.one_like();
        if p.0.sub(&q.0).is_identically_zero() {
            // Vertical edge x = t: y ↦ y + t (mod 1).
            let tau = if face.wraps { p.0.sub(&one) } else { p.0.clone() };
            if tau.is_identically_zero() {
                continue;
            }
            moves.push(Move { dom: face.j.clone(), img: shift_down(&face.k, face.wraps), reflect: false, tau });
        } else if p.1.sub(&q.1).is_identically_zero() {
            let tau = if face.wraps { p.1.sub(&one) } else { p.1.clone() };
            if tau.is_identically_zero() {
                continue;
            }
            moves.push(Move { dom: face.i.clone(), img: shift_down(&face.k, face.wraps), reflect: false, tau });
        } else {
            let c = p.0.add(&p.1);
            moves.push(Move { dom: face.i.clone(), img: face.j.clone(), reflect: true, tau: c });
        }
    }
    moves
}

fn normalize<F: OrderedField>(comps: Vec<Vec<Interval<F>>>) -> Vec<Vec<Interval<F>>> {
    let mut comps: Vec<Vec<Interval<F>>> = comps.into_iter().map(merge_intervals).collect();
    'again: loop {
        for a in 0..comps.len() {
            for bi in a + 1..comps.len() {
                let hit = comps[a].iter().any(|u| comps[bi].iter().any(|w| u.overlaps(w)));
                if hit {
                    let other = comps.remove(bi);
                    let mut joined = core::mem::take(&mut comps[a]);
                    joined.extend(other);
                    comps[a] = merge_intervals(joined);
                    continue 'again;
                }
            }
        }
        return comps;
    }
}

fn merge_intervals<F: OrderedField>(mut ivs: Vec<Interval<F>>) -> Vec<Interval<F>> {
    'again: loop {
        for a in 0..ivs.len() {
            for bi in a + 1..ivs.len() {
                if ivs[a].touches(&ivs[bi]) {
                    let other = ivs.remove(bi);
                    ivs[a] = ivs[a].hull(&other);
                    continue 'again;
                }
            }
        }
        return ivs;
    }
}

const MAX_ROUNDS: usize = 64;

fn covered_from<F: OrderedField>(pi: &Pwl<F>, faces: &[AdditiveFace<F>]) -> CoveredComponents<F> {
    let mut comps: Vec<Vec<Interval<F>>> = faces
        .iter()
        .filter(|f| f.dim == 2)
        .map(|f| vec![f.i.clone(), f.j.clone(), shift_down(&f.k, f.wraps)])
        .collect();
    comps = normalize(comps);
    let moves = moves_of(faces);
    for _ in 0..MAX_ROUNDS {
        let mut changed = false;
        for mv in &moves {
            for (dom, forward) in [(&mv.dom, true), (&mv.img, false)] {
                for ci in 0..comps.len() {
                    let mut added = Vec::new();
                    for u in &comps[ci] {
                        if let Some(s) = dom.meet(u) {
                            let t = mv.apply(&s, forward);
                            if !comps[ci].iter().any(|w| w.contains(&t)) {
                                added.push(t);
                            }
                        }
                    }
                    if !added.is_empty() {
                        changed = true;
                        comps[ci].extend(added);
                    }
                }
            }
        }
        comps = normalize(comps);
        if !changed {
            break;
        }
    }
    let b = pi.breakpoints();
    let mut uncovered = Vec::new();
    for w in b.windows(2) {
        let mut cur = w[0].clone();
        loop {
            if cur.ge(&w[1]) {
                break;
            }
            let next = comps.iter().flatten().find(|u| u.lo.le(&cur) && cur.lt(&u.hi)).map(|u| u.hi.clone());
            match next {
                Some(h) => cur = h,
                None => {
                    let stop = comps
                        .iter()
                        .flatten()
                        .filter(|u| cur.lt(&u.lo) && u.lo.lt(&w[1]))
                        .map(|u| u.lo.clone())
                        .reduce(|a, x| a.min_of(&x))
                        .unwrap_or_else(|| w[1].clone());
                    uncovered.push(Interval::new(cur.clone(), stop.clone()));
                    cur = stop;
                }
            }
        }
    }
    CoveredComponents { components: comps, uncovered }
}

/// Directly covered intervals (projections of additive 2-faces, one
/// component per face) closed under the translations and reflections of the
/// additive edges.
pub fn covered_components<F: OrderedField>(pi: &Pwl<F>, faces: &[AdditiveFace<F>]) -> CoveredComponents<F> {
    covered_from(pi, faces)
}

/// Sorted, formally distinct points.
fn insert_sorted<F: OrderedField>(pts: &mut Vec<F>, x: F) {
    if pts.iter().any(|p| p.sub(&x).is_identically_zero()) {
        return;
    }
    let at = partition_point(0, pts.len(), |t| pts[t].lt(&x));
    pts.insert(at, x);
}

/// The perturbation system restricted to slopes: the values of a candidate
/// `φ` are prefix sums of per-component slopes over the refined points, so
/// `φ(1) = 0`, `φ(f) = 1`, and `Δφ = 0` at additive vertices become linear
/// equations in the slopes.
struct SlopeSystem<F> {
    points: Vec<F>,
    owner: Vec<usize>,
    /// `prefix[t][c]` is the length of component `c` inside `[0, points[t]]`.
    prefix: Vec<Vec<F>>,
    ncomp: usize,
}

impl<F: OrderedField> SlopeSystem<F> {
    fn build(pi: &Pwl<F>, cov: &CoveredComponents<F>) -> Option<Self> {
        let zero = pi.f().zero_like();
        let one = pi.f().one_like();
        let mut points: Vec<F> = pi.breakpoints().to_vec();
        for u in cov.components.iter().flatten() {
            for e in [&u.lo, &u.hi] {
                if e.gt(&zero) && e.lt(&one) {
                    insert_sorted(&mut points, e.clone());
                }
            }
        }
        let ncomp = cov.components.len();
        let mut owner = Vec::with_capacity(points.len() - 1);
        for w in points.windows(2) {
            let c = cov.components.iter().position(|comp| comp.iter().any(|u| u.lo.le(&w[0]) && w[1].le(&u.hi)))?;
            owner.push(c);
        }
        let mut prefix = vec![vec![zero.clone(); ncomp]];
        for t in 0..owner.len() {
            let mut row = prefix[t].clone();
            row[owner[t]] = row[owner[t]].add(&points[t + 1].sub(&points[t]));
            prefix.push(row);
        }
        Some(SlopeSystem { points, owner, prefix, ncomp })
    }

    /// Coefficients of `φ(z)` in the slopes, `z ∈ [0, 1]`.
    fn coefficients(&self, z: &F) -> Vec<F> {
        if let Some(t) = self.points.iter().position(|p| p.sub(z).is_identically_zero()) {
            return self.prefix[t].clone();
        }
        let m = self.points.len() - 1;
        let t = partition_point(1, m, |t| self.points[t].lt(z)) - 1;
        let mut row = self.prefix[t].clone();
        row[self.owner[t]] = row[self.owner[t]].add(&z.sub(&self.points[t]));
        row
    }

    fn vertex_row(&self, x: &F, y: &F, z: &F) -> Vec<F> {
        let (a, b, c) = (self.coefficients(x), self.coefficients(y), self.coefficients(z));
        (0..self.ncomp).map(|i| a[i].add(&b[i]).sub(&c[i])).collect()
    }
}

/// Column-by-column reduction to echelon form over all rows. Each column's
/// entries are tested for zero in every row, and the first nonzero entry at
/// or below the current pivot row becomes the pivot. Returns the rank.
fn echelon_rank<F: OrderedField>(ncols: usize, mut rows: Vec<Vec<F>>) -> usize {
    let mut start = 0;
    for c in 0..ncols {
        let Some(r) = (start..rows.len()).find(|&r| !rows[r][c].is_identically_zero() && !rows[r][c].is_zero()) else {
            continue;
        };
        let inv = rows[r][c].one_like().div(&rows[r][c]);
        let pivot: Vec<F> = rows[r].iter().map(|x| x.mul(&inv)).collect();
        rows.swap(r, start);
        rows[start] = pivot;
        for i in 0..rows.len() {
            if i == start || rows[i][c].is_identically_zero() || rows[i][c].is_zero() {
                continue;
            }
            let m = rows[i][c].clone();
            for j in c..ncols {
                if !rows[start][j].is_identically_zero() {
                    rows[i][j] = rows[i][j].sub(&m.mul(&rows[start][j]));
                }
            }
        }
        start += 1;
    }
    start
}

/// Checks exactly, at the concrete values, that `π`'s own slopes solve the system.
fn assert_feasible<F: OrderedField>(pi: &Pwl<F>, sys: &SlopeSystem<F>, rows: &[(Vec<F>, Rational)]) {
    let conc = Pwl::from_breakpoints_values(
        pi.f().value(),
        pi.breakpoints().iter().map(|x| x.value()).collect(),
        pi.values().iter().map(|x| x.value()).collect(),
    )
    .expect("concrete copy of a constructible function");
    let mut slopes: Vec<Option<Rational>> = vec![None; sys.ncomp];
    for (t, &c) in sys.owner.iter().enumerate() {
        let (p, q) = (sys.points[t].value(), sys.points[t + 1].value());
        let s = (conc.eval_rational(&q) - conc.eval_rational(&p)) / (q - p);
        match &slopes[c] {
            Some(prev) => assert_eq!(prev, &s, "component with two slopes"),
            None => slopes[c] = Some(s),
        }
    }
    let slopes: Vec<Rational> = slopes.into_iter().map(|s| s.expect("component without pieces")).collect();
    for (row, rhs) in rows {
        let lhs = row.iter().zip(&slopes).fold(Rational::zero(), |acc, (a, s)| acc + a.value() * s);
        assert_eq!(&lhs, rhs, "the function does not solve its own perturbation system");
    }
}

/// Grid-free extremality test. Checks minimality first; functions with
/// uncovered intervals are reported as [`Verdict::UncoveredUnknown`].
pub fn extremality_test<F: OrderedField>(pi: &Pwl<F>) -> Verdict {
    if !minimality_test(pi) {
        return Verdict::NotMinimal;
    }
    extremality_of_minimal(pi)
}

/// The extremality part of [`extremality_test`] for a function already known
/// to be minimal.
pub fn extremality_of_minimal<F: OrderedField>(pi: &Pwl<F>) -> Verdict {
    let an = analyze(pi);
    let faces = faces_of(&an);
    let cov = covered_from(pi, &faces);
    if !cov.uncovered.is_empty() {
        return Verdict::UncoveredUnknown;
    }
    let Some(sys) = SlopeSystem::build(pi, &cov) else {
        return Verdict::UncoveredUnknown;
    };
    let total = sys.prefix.last().unwrap().clone();
    let at_f = sys.coefficients(pi.f());
    if cfg!(debug_assertions) {
        let mut rows = vec![(total.clone(), Rational::zero()), (at_f.clone(), Rational::one())];
        for (x, y, z) in &an.additive_vertices {
            rows.push((sys.vertex_row(x, y, z), Rational::zero()));
        }
        assert_feasible(pi, &sys, &rows);
    }
    let mut rows = vec![at_f.clone(), total.clone()];
    rows.extend(an.additive_vertices.iter().map(|(x, y, z)| sys.vertex_row(x, y, z)));
    let full = echelon_rank(sys.ncomp, rows) == sys.ncomp;
    if full {
        Verdict::Extreme
    } else {
        Verdict::MinimalNotExtreme
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn gmic_half() -> Pwl<Rational> {
        gmic(&q("1/2")).unwrap()
    }

    #[test]
    fn delta_examples() {
        let p = gmic_half();
        assert_eq!(delta_pi(&p, &q("0"), &q("0")), q("0"));
        assert_eq!(delta_pi(&p, &q("1/4"), &q("1/4")), q("0"));
        let verts = complex_vertices(&p);
        assert!(verts.iter().any(|d| d.x == q("1/2") && d.y == q("1/2")));
    }

    #[test]
    fn vertex_slack_is_symmetric() {
        let p = drlm_backward_3_slope(&q("1/12"), &q("2/12")).unwrap();
        for d in complex_vertices(&p) {
            assert_eq!(delta_pi(&p, &d.x, &d.y), delta_pi(&p, &d.y, &d.x));
            assert_eq!(delta_pi(&p, &d.x, &d.y), d.slack);
        }
        assert!(complex_vertices(&p).iter().any(|d| d.x == q("1/12") && d.y == q("1/12")));
    }

    #[test]
    fn minimality_examples() {
        assert!(minimality_test(&gmic_half()));
        assert!(minimality_test(&gj_forward_3_slope(&q("4/5"), &q("4/9"), &q("2/3")).unwrap()));
        let chen = chen_4_slope(&q("7/10"), &q("2"), &q("-4"), &q("1/100"), &q("49/100")).unwrap();
        assert!(!minimality_test(&chen));
        assert!(complex_vertices(&chen).iter().any(|d| d.slack < q("0")));
    }

    #[test]
    fn gmic_faces() {
        let faces = additive_faces(&gmic_half());
        assert!(faces.iter().any(|f| f.dim == 2));
        let cov = covered_components(&gmic_half(), &faces);
        assert!(cov.uncovered.is_empty());
    }

    #[test]
    fn extremality_examples() {
        let drlm = drlm_backward_3_slope(&q("1/12"), &q("2/12")).unwrap();
        assert_eq!(extremality_test(&drlm), Verdict::Extreme);
        let cov = covered_components(&drlm, &additive_faces(&drlm));
        assert!(cov.uncovered.is_empty());
        let chen = chen_4_slope(&q("7/10"), &q("2"), &q("-4"), &q("1/10"), &q("1/10")).unwrap();
        assert_eq!(extremality_test(&chen), Verdict::Extreme);
        let kzh = kzh_3_slope_param_extreme_1(&q("6/19"), &q("1/19"), &q("5/19")).unwrap();
        assert_eq!(extremality_test(&kzh), Verdict::Extreme);
        let gj = gj_forward_3_slope(&q("4/5"), &q("4/9"), &q("2/3")).unwrap();
        assert_eq!(extremality_test(&gj), Verdict::Extreme);
        assert_eq!(extremality_test(&gmic_half()), Verdict::Extreme);
    }
}

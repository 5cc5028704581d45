//! Polynomial sign atoms and the ledger that collects them during a run.
//!
//! An atom is a canonical polynomial `p` (coprime integer coefficients,
//! positive leading coefficient) with an orientation `s = ±1` and a relation:
//! it asserts `s·p < 0`, `s·p ≤ 0`, or `p = 0`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::fmt::Write as _;

use crate::error::{Error, Result};
use crate::factor::{canonical, div_exact, gcd, squarefree};
use crate::poly::{Monomial, MultiPoly};
use crate::ratfunc::RatFunc;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Eq,
    Lt,
    Le,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Lt => "<",
            Rel::Le => "<=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    poly: MultiPoly,
    orient: i8,
    rel: Rel,
}

impl Atom {
    /// Builds the atom `q rel 0` for an arbitrary nonconstant polynomial `q`.
    pub fn new(q: &MultiPoly, rel: Rel) -> Atom {
        assert!(!q.is_constant(), "constant atom");
        let (scale, poly) = q.primitive();
        let orient = if scale.is_negative() { -1 } else { 1 };
        Atom { poly, orient, rel }
    }

    /// The canonical (positive leading coefficient) polynomial.
    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn orientation(&self) -> i8 {
        self.orient
    }

    pub fn rel(&self) -> Rel {
        self.rel
    }

    /// The polynomial as printed, `s·p`.
    pub fn oriented(&self) -> MultiPoly {
        if self.orient < 0 {
            self.poly.neg()
        } else {
            self.poly.clone()
        }
    }

    pub fn is_strict(&self) -> bool {
        self.rel == Rel::Lt
    }

    pub fn holds_at(&self, point: &[Rational]) -> bool {
        let v = self.oriented().eval(point);
        match self.rel {
            Rel::Eq => v.is_zero(),
            Rel::Lt => v.is_negative(),
            Rel::Le => !v.is_positive(),
        }
    }

    /// The atom describing the other side of this wall: `-s·p < 0`.
    pub fn flipped(&self) -> Atom {
        Atom { poly: self.poly.clone(), orient: -self.orient, rel: Rel::Lt }
    }

    pub fn display<'a, N: AsRef<str>>(&'a self, names: &'a [N]) -> AtomDisplay<'a, N> {
        AtomDisplay { atom: self, names }
    }

    /// Parses `<poly> < 0`, `<poly> <= 0`, or `<poly> = 0`.
    pub fn parse<N: AsRef<str>>(text: &str, names: &[N]) -> Result<Atom> {
        let bad = |reason| Error::Parse(crate::error::ParseError::new(String::from(text), reason));
        let (lhs, rel) = if let Some((l, _)) = text.split_once("<=") {
            (l, Rel::Le)
        } else if let Some((l, _)) = text.split_once('<') {
            (l, Rel::Lt)
        } else if let Some((l, _)) = text.split_once('=') {
            (l, Rel::Eq)
        } else {
            return Err(bad("missing relation"));
        };
        let q = MultiPoly::parse(lhs, names)?;
        if q.is_constant() {
            return Err(bad("constant atom"));
        }
        Ok(Atom::new(&q, rel))
    }
}

/// Canonical order: by polynomial (degree first), then orientation and relation.
impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.poly
            .cmp(&other.poly)
            .then_with(|| self.orient.cmp(&other.orient))
            .then_with(|| self.rel.cmp(&other.rel))
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct AtomDisplay<'a, N> {
    atom: &'a Atom,
    names: &'a [N],
}

impl<N: AsRef<str>> fmt::Display for AtomDisplay<'_, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} 0", self.atom.oriented().display(self.names), self.atom.rel.symbol())
    }
}

/// The atoms recorded by one run, deduplicated by canonical polynomial.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintLedger {
    atoms: BTreeMap<MultiPoly, (i8, Rel)>,
}

impl ConstraintLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn get(&self, poly: &MultiPoly) -> Option<Atom> {
        self.atoms.get(poly).map(|&(orient, rel)| Atom { poly: poly.clone(), orient, rel })
    }

    /// All atoms in canonical order.
    pub fn atoms(&self) -> Vec<Atom> {
        self.atoms
            .iter()
            .map(|(p, &(orient, rel))| Atom { poly: p.clone(), orient, rel })
            .collect()
    }

    fn with_rel(&self, rel: Rel) -> Vec<MultiPoly> {
        self.atoms().into_iter().filter(|a| a.rel == rel).map(|a| a.oriented()).collect()
    }

    pub fn eq_atoms(&self) -> Vec<MultiPoly> {
        self.with_rel(Rel::Eq)
    }

    pub fn lt_atoms(&self) -> Vec<MultiPoly> {
        self.with_rel(Rel::Lt)
    }

    pub fn le_atoms(&self) -> Vec<MultiPoly> {
        self.with_rel(Rel::Le)
    }

    pub(crate) fn remove(&mut self, poly: &MultiPoly) -> Option<Atom> {
        self.atoms.remove(poly).map(|(orient, rel)| Atom { poly: poly.clone(), orient, rel })
    }

    /// Adds an atom, merging with an existing atom on the same polynomial.
    pub fn insert(&mut self, atom: Atom) -> Result<()> {
        let Some(&(o, r)) = self.atoms.get(&atom.poly) else {
            self.atoms.insert(atom.poly, (atom.orient, atom.rel));
            return Ok(());
        };
        let merged = match (r, atom.rel) {
            (Rel::Eq, Rel::Eq) => Some((o, Rel::Eq)),
            (Rel::Eq, Rel::Le) | (Rel::Le, Rel::Eq) => Some((o, Rel::Eq)),
            (Rel::Lt, Rel::Lt) | (Rel::Lt, Rel::Le) | (Rel::Le, Rel::Lt) | (Rel::Le, Rel::Le)
                if o == atom.orient =>
            {
                Some((o, if r == Rel::Le && atom.rel == Rel::Le { Rel::Le } else { Rel::Lt }))
            }
            (Rel::Le, Rel::Le) => Some((o, Rel::Eq)),
            _ => None,
        };
        match merged {
            Some(v) => {
                self.atoms.insert(atom.poly, v);
                Ok(())
            }
            None => Err(Error::InconsistentLedger(alloc::format!("{:?}", atom.poly))),
        }
    }

    /// Whether every atom holds at `point`.
    pub fn holds_at(&self, point: &[Rational]) -> bool {
        self.atoms().iter().all(|a| a.holds_at(point))
    }

    /// One atom per line, `<poly> <rel> 0`, in canonical order.
    pub fn dump<N: AsRef<str>>(&self, names: &[N]) -> String {
        let mut s = String::new();
        for a in self.atoms() {
            let _ = writeln!(s, "{}", a.display(names));
        }
        s
    }
}

/// Splits `p` into canonical squarefree factors with multiplicities. Monomial
/// factors and contents with respect to every variable are separated first.
pub fn split_factors(p: &MultiPoly) -> Vec<(MultiPoly, u32)> {
    let mut out: Vec<(MultiPoly, u32)> = Vec::new();
    split_into(p, 1, &mut out);
    out
}

fn push_factor(out: &mut Vec<(MultiPoly, u32)>, f: MultiPoly, m: u32) {
    if let Some(e) = out.iter_mut().find(|(g, _)| *g == f) {
        e.1 += m;
    } else {
        out.push((f, m));
    }
}

fn split_into(p: &MultiPoly, mult: u32, out: &mut Vec<(MultiPoly, u32)>) {
    if p.is_constant() {
        return;
    }
    let nv = p.nvars();
    // Monomial content.
    let mut lo = [u16::MAX; crate::poly::MAX_VARS];
    for (m, _) in p.terms() {
        for (i, l) in lo.iter_mut().enumerate().take(nv) {
            *l = (*l).min(m.exponent(i));
        }
    }
    if lo[..nv].iter().any(|&e| e > 0) {
        let mono = Monomial::from_exponents(&lo[..nv]);
        for (i, &e) in lo[..nv].iter().enumerate() {
            if e > 0 {
                push_factor(out, MultiPoly::var(nv, i), e as u32 * mult);
            }
        }
        let rest = div_exact(p, &MultiPoly::from_terms(nv, [(mono, Rational::one())])).unwrap();
        split_into(&rest, mult, out);
        return;
    }
    if p.is_linear() {
        push_factor(out, canonical(p), mult);
        return;
    }
    for v in 0..nv {
        if !p.involves(v) {
            continue;
        }
        let coeffs = p.coefficients_in(v);
        let mut c = MultiPoly::zero(nv);
        for k in coeffs.iter().filter(|k| !k.is_zero()) {
            c = gcd(&c, k);
            if c.is_constant() {
                break;
            }
        }
        if !c.is_constant() {
            let rest = div_exact(p, &c).unwrap();
            split_into(&c, mult, out);
            split_into(&rest, mult, out);
            return;
        }
    }
    let (_, fs) = squarefree(p);
    if fs.len() == 1 && fs[0].1 == 1 {
        push_factor(out, fs[0].0.clone(), mult);
    } else {
        for (f, m) in fs {
            split_into(&f, m * mult, out);
        }
    }
}

/// Splits each factor further by gcds with the given existing polynomials.
/// Returns the refined factors and, for each existing polynomial that a new
/// factor properly divides (or shares a proper factor with), its split.
pub fn refine_against(
    factors: Vec<(MultiPoly, u32)>,
    existing: &[MultiPoly],
) -> (Vec<(MultiPoly, u32)>, Vec<(MultiPoly, Vec<MultiPoly>)>) {
    let mut work = factors;
    let mut done: Vec<(MultiPoly, u32)> = Vec::new();
    let mut splits: Vec<(MultiPoly, Vec<MultiPoly>)> = Vec::new();
    'outer: while let Some((f, m)) = work.pop() {
        for h in existing {
            if *h == f || (f.is_linear() && h.is_linear()) {
                continue;
            }
            if splits.iter().any(|(s, _)| s == h) {
                continue;
            }
            let g = if f.is_linear() || h.is_linear() {
                let (small, big) = if f.is_linear() { (&f, h) } else { (h, &f) };
                if div_exact(big, small).is_some() {
                    small.clone()
                } else {
                    continue;
                }
            } else {
                let g = gcd(&f, h);
                if g.is_constant() {
                    continue;
                }
                canonical(&g)
            };
            if g != *h {
                let q = canonical(&div_exact(h, &g).unwrap());
                splits.push((h.clone(), alloc::vec![g.clone(), q]));
            }
            if g != f {
                let q = canonical(&div_exact(&f, &g).unwrap());
                work.push((g, m));
                work.push((q, m));
                continue 'outer;
            }
        }
        push_factor(&mut done, f, m);
    }
    (done, splits)
}

/// Converts an observation about `sym` at `point` into factor atoms.
///
/// `observed` is the sign relation to record: `Less` for `sym < 0`, `Equal`
/// for `sym = 0`; `Greater` records `sym > 0`. With `weak`, a single odd
/// numerator factor is recorded as a non-strict inequality.
pub fn normalize_and_factor(
    sym: &RatFunc,
    point: &[Rational],
    existing: &[MultiPoly],
    weak: bool,
) -> (Vec<Atom>, Vec<(MultiPoly, Vec<MultiPoly>)>) {
    let den_val = sym.den().eval(point);
    assert!(!den_val.is_zero(), "denominator vanishes at the test point");
    let value = sym.num().eval(point) / den_val;
    let mut atoms = Vec::new();
    if sym.num().is_constant() && sym.den().is_constant() {
        return (atoms, Vec::new());
    }
    let strict_sign = |f: &MultiPoly| -> Atom {
        let v = f.eval(point);
        let orient = if v.is_negative() { 1 } else { -1 };
        Atom { poly: f.clone(), orient, rel: Rel::Lt }
    };
    if value.is_zero() {
        let (fs, splits) = refine_against(split_factors(sym.num()), existing);
        for (f, _) in fs {
            if f.eval(point).is_zero() {
                atoms.push(Atom { poly: f, orient: 1, rel: Rel::Eq });
            }
        }
        return (atoms, splits);
    }
    let mut all = split_factors(sym.num());
    let num_len = all.len();
    for (f, m) in split_factors(sym.den()) {
        all.push((f, m));
    }
    let odd_num = all[..num_len].iter().filter(|(_, m)| m % 2 == 1).count();
    let (fs, splits) = refine_against(all, existing);
    let weak_single = weak && odd_num == 1 && sym.den().is_constant();
    for (f, m) in fs {
        if m % 2 == 0 {
            continue;
        }
        let mut a = strict_sign(&f);
        if weak_single {
            a.rel = Rel::Le;
        }
        atoms.push(a);
    }
    (atoms, splits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    const XY: [&str; 2] = ["x", "y"];
    const FABV: [&str; 4] = ["f", "a", "b", "v"];

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s, &XY).unwrap()
    }

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn printing_uses_orientation() {
        let a = Atom::new(&MultiPoly::parse("-a", &FABV).unwrap(), Rel::Lt);
        assert_eq!(a.poly(), &MultiPoly::parse("a", &FABV).unwrap());
        assert_eq!(a.display(&FABV).to_string(), "-a < 0");
        let b = Atom::parse("3*f + 4*a - b - 1 < 0", &FABV).unwrap();
        assert_eq!(b.display(&FABV).to_string(), "3*f + 4*a - b - 1 < 0");
        assert_eq!(b.flipped().display(&FABV).to_string(), "-3*f - 4*a + b + 1 < 0");
    }

    #[test]
    fn factor_atoms_for_rational_observation() {
        // x/(y-1) <= 0 at (1, 0).
        let sym = RatFunc::new(p("x"), p("y - 1")).unwrap();
        let (atoms, _) = normalize_and_factor(&sym, &[r(1, 1), r(0, 1)], &[], false);
        let shown: Vec<_> = atoms.iter().map(|a| a.display(&XY).to_string()).collect();
        assert!(shown.contains(&"-x < 0".to_string()));
        assert!(shown.contains(&"y - 1 < 0".to_string()));

        let sym = RatFunc::from_poly(p("x - 1").pow(2).mul(&p("x + 2")));
        let (atoms, _) = normalize_and_factor(&sym, &[r(-3, 1), r(0, 1)], &[], false);
        assert_eq!(atoms, alloc::vec![Atom::new(&p("x + 2"), Rel::Lt)]);
    }

    #[test]
    fn weak_observation_with_single_factor() {
        let sym = RatFunc::from_poly(p("-x"));
        let (atoms, _) = normalize_and_factor(&sym, &[r(1, 1), r(0, 1)], &[], true);
        assert_eq!(atoms[0].display(&XY).to_string(), "-x <= 0");
    }

    #[test]
    fn zero_observation_keeps_vanishing_factors() {
        let sym = RatFunc::from_poly(p("x - 1").mul(&p("y + 3")));
        let (atoms, _) = normalize_and_factor(&sym, &[r(1, 1), r(0, 1)], &[], false);
        assert_eq!(atoms, alloc::vec![Atom::new(&p("x - 1"), Rel::Eq)]);
    }

    #[test]
    fn splitting_and_refinement() {
        let fs = split_factors(&p("x^2*y + x*y^2"));
        assert_eq!(fs.len(), 3);
        let (fs, splits) = refine_against(alloc::vec![(p("x^2 - y^2"), 1)], &[p("x + y")]);
        assert!(splits.is_empty());
        assert_eq!(fs.len(), 2);
        let (fs, splits) = refine_against(alloc::vec![(p("x + y"), 1)], &[p("x^2 - y^2")]);
        assert_eq!(fs, alloc::vec![(p("x + y"), 1)]);
        assert_eq!(splits.len(), 1);
    }

    #[test]
    fn ledger_merging() {
        let mut l = ConstraintLedger::new();
        l.insert(Atom::new(&p("x - 1"), Rel::Le)).unwrap();
        l.insert(Atom::new(&p("x - 1"), Rel::Lt)).unwrap();
        assert_eq!(l.lt_atoms(), alloc::vec![p("x - 1")]);
        l.insert(Atom::new(&p("y"), Rel::Le)).unwrap();
        l.insert(Atom::new(&p("-y"), Rel::Le)).unwrap();
        assert_eq!(l.eq_atoms(), alloc::vec![p("y")]);
        assert!(l.insert(Atom::new(&p("1 - x"), Rel::Lt)).is_err());
    }
}

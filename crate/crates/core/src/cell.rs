//! From a raw ledger to a reduced cell description: every atom becomes a
//! linear constraint over monomial coordinates, and constraints implied by
//! the others over that linear relaxation are dropped.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::atom::{Atom, ConstraintLedger, Rel};
use crate::error::{Error, Result};
use crate::gj::Verdict;
use crate::lp::{maximize, strictly_feasible, LinConstraint, LpOutcome};
use crate::poly::{Monomial, MultiPoly};
use crate::rational::Rational;

/// Nonconstant monomials numbered in order of first use, with the variables
/// themselves at `0..nvars`. Extending never renumbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    nvars: usize,
    monos: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
}

impl MonomialMap {
    pub fn new(nvars: usize) -> Self {
        let mut map = MonomialMap { nvars, monos: Vec::new(), index: BTreeMap::new() };
        for i in 0..nvars {
            map.index_of(&Monomial::var(i));
        }
        map
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monos
    }

    pub fn get(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinate of `m`, allocating a new one if needed.
    pub fn index_of(&mut self, m: &Monomial) -> usize {
        debug_assert!(!m.is_one());
        if let Some(&i) = self.index.get(m) {
            return i;
        }
        self.monos.push(*m);
        self.index.insert(*m, self.monos.len() - 1);
        self.monos.len() - 1
    }

    /// The point in monomial coordinates.
    pub fn lift(&self, point: &[Rational]) -> Vec<Rational> {
        self.monos.iter().map(|m| m.eval(point)).collect()
    }
}

/// `coeffs · z + constant` compared with zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
    pub strict: bool,
    pub equality: bool,
}

impl HalfSpace {
    fn value(&self, z: &[Rational]) -> Rational {
        self.coeffs.iter().zip(z).fold(self.constant.clone(), |acc, (a, x)| acc + a * x)
    }

    pub fn holds_at(&self, z: &[Rational]) -> bool {
        let v = self.value(z);
        if self.equality {
            v.is_zero()
        } else if self.strict {
            v.is_negative()
        } else {
            !v.is_positive()
        }
    }

    fn padded(&self, dim: usize) -> Vec<Rational> {
        let mut c = self.coeffs.clone();
        c.resize(dim, Rational::zero());
        c
    }

    fn as_lp(&self, dim: usize) -> LinConstraint {
        let coeffs = self.padded(dim);
        let rhs = -&self.constant;
        if self.equality {
            LinConstraint::eq(coeffs, rhs)
        } else {
            LinConstraint::le(coeffs, rhs)
        }
    }
}

/// A not-necessarily-closed polyhedron in monomial coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinPolyhedron {
    pub dim: usize,
    pub constraints: Vec<HalfSpace>,
}

impl LinPolyhedron {
    pub fn holds_at(&self, z: &[Rational]) -> bool {
        self.constraints.iter().all(|h| {
            let mut zz = z.to_vec();
            zz.resize(self.dim.max(z.len()), Rational::zero());
            h.holds_at(&zz)
        })
    }
}

/// One constraint per atom, in the same order.
pub fn linearize(atoms: &[Atom], map: &mut MonomialMap) -> LinPolyhedron {
    let mut rows = Vec::with_capacity(atoms.len());
    for atom in atoms {
        let p = atom.oriented();
        let mut sparse = Vec::new();
        let mut constant = Rational::zero();
        for (m, c) in p.terms() {
            if m.is_one() {
                constant = c.clone();
            } else {
                sparse.push((map.index_of(m), c.clone()));
            }
        }
        rows.push((sparse, constant, atom.rel()));
    }
    let dim = map.len();
    let constraints = rows
        .into_iter()
        .map(|(sparse, constant, rel)| {
            let mut coeffs = vec![Rational::zero(); dim];
            for (i, c) in sparse {
                coeffs[i] = c;
            }
            HalfSpace { coeffs, constant, strict: rel == Rel::Lt, equality: rel == Rel::Eq }
        })
        .collect();
    LinPolyhedron { dim, constraints }
}

/// Whether constraint `k` is implied by the constraints in `others`.
fn implied(poly: &LinPolyhedron, k: usize, others: &[usize]) -> Result<bool> {
    let target = &poly.constraints[k];
    let cons: Vec<LinConstraint> = others.iter().map(|&i| poly.constraints[i].as_lp(poly.dim)).collect();
    let obj = target.padded(poly.dim);
    let bound = -&target.constant;
    match maximize(&obj, &cons) {
        LpOutcome::Unbounded => Ok(false),
        LpOutcome::Infeasible => Err(Error::InconsistentLedger(String::from("empty relaxation"))),
        LpOutcome::Optimal { value, .. } => {
            if value < bound {
                Ok(true)
            } else if value > bound {
                Ok(false)
            } else if !target.strict {
                Ok(true)
            } else {
                // The bound is attained on the closure; it is implied only if
                // no point of the (partly open) remainder attains it.
                let mut with_face = cons;
                with_face.push(LinConstraint::eq(obj, bound));
                let mut strict: Vec<bool> = others.iter().map(|&i| poly.constraints[i].strict).collect();
                strict.push(false);
                Ok(!strictly_feasible(&with_face, &strict))
            }
        }
    }
}

/// Indices of an inclusion-minimal subset defining the same relaxation.
/// Equalities are always kept.
pub fn irredundant_indices(poly: &LinPolyhedron) -> Result<Vec<usize>> {
    let mut keep: Vec<usize> = (0..poly.constraints.len()).collect();
    let mut idx = keep.len();
    while idx > 0 {
        idx -= 1;
        let k = keep[idx];
        if poly.constraints[k].equality {
            continue;
        }
        let others: Vec<usize> = keep.iter().copied().filter(|&i| i != k).collect();
        if implied(poly, k, &others)? {
            keep.remove(idx);
        }
    }
    Ok(keep)
}

pub fn remove_redundancy(poly: &LinPolyhedron) -> Result<LinPolyhedron> {
    let keep = irredundant_indices(poly)?;
    Ok(LinPolyhedron { dim: poly.dim, constraints: keep.into_iter().map(|i| poly.constraints[i].clone()).collect() })
}

/// A reduced semialgebraic cell with the verdict shared by its points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub atoms: Vec<Atom>,
    pub map: MonomialMap,
    pub poly: LinPolyhedron,
    pub test_point: Vec<Rational>,
    pub verdict: Verdict,
}

impl Cell {
    /// Linearizes and reduces the ledger of a run at `test_point`.
    pub fn from_ledger(
        ledger: &ConstraintLedger,
        test_point: &[Rational],
        verdict: Verdict,
        map: &mut MonomialMap,
    ) -> Result<Cell> {
        let raw = ledger.atoms();
        let full = linearize(&raw, map);
        if !full.holds_at(&map.lift(test_point)) {
            return Err(Error::InconsistentLedger(String::from("test point outside its own cell")));
        }
        let keep = irredundant_indices(&full)?;
        let atoms: Vec<Atom> = keep.iter().map(|&i| raw[i].clone()).collect();
        let poly = LinPolyhedron { dim: full.dim, constraints: keep.iter().map(|&i| full.constraints[i].clone()).collect() };
        Ok(Cell { atoms, map: map.clone(), poly, test_point: test_point.to_vec(), verdict })
    }

    /// The strict inequalities, each a wall that can be flipped.
    pub fn walls(&self) -> Vec<Atom> {
        self.atoms.iter().filter(|a| a.rel() != Rel::Eq).cloned().collect()
    }

    /// The equations of the variety containing the cell.
    pub fn varieties(&self) -> Vec<Atom> {
        self.atoms.iter().filter(|a| a.rel() == Rel::Eq).cloned().collect()
    }

    /// Surviving walls of degree above one; the relaxation cannot always
    /// decide whether these are redundant.
    pub fn nonlinear_walls(&self) -> Vec<Atom> {
        self.walls().into_iter().filter(|a| !a.poly().is_linear()).collect()
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        cell_contains(self, point)
    }

    /// Equalities first, then inequalities, each in canonical order.
    pub fn describe<N: AsRef<str>>(&self, names: &[N]) -> String {
        let mut s = String::new();
        for a in self.varieties().iter().chain(self.walls().iter()) {
            let _ = writeln!(s, "{}", a.display(names));
        }
        s
    }
}

pub fn cell_contains(cell: &Cell, point: &[Rational]) -> bool {
    cell.atoms.iter().all(|a| a.holds_at(point))
}

pub fn cell_walls(cell: &Cell) -> Vec<Atom> {
    cell.walls()
}

/// Atoms in canonical order, dropping polynomials of degree zero.
pub fn canonical_atoms(polys: &[(MultiPoly, Rel)]) -> Vec<Atom> {
    let mut v: Vec<Atom> = polys.iter().filter(|(p, _)| !p.is_constant()).map(|(p, r)| Atom::new(p, *r)).collect();
    v.sort();
    v.dedup();
    v
}

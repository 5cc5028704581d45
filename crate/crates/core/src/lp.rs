//! Exact two-phase simplex over the rationals with Bland's rule.

use alloc::vec;
use alloc::vec::Vec;

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
}

/// `coeffs · z (≤ | =) rhs` over free variables `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinConstraint {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl LinConstraint {
    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        LinConstraint { coeffs, sense: Sense::Le, rhs }
    }

    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        LinConstraint { coeffs, sense: Sense::Eq, rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, point: Vec<Rational> },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    /// Reduced costs of a minimization, with `-objective value` in the last slot.
    cost: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let prow = self.rows[r].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        let elim = |row: &mut Vec<Rational>| {
            let m = row[c].clone();
            if m.is_zero() {
                return;
            }
            for &j in &nz {
                row[j] = &row[j] - &(&m * &prow[j]);
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                elim(row);
            }
        }
        elim(&mut self.cost);
        self.basis[r] = c;
    }

    /// Minimizes over columns `< allowed`; returns `false` when unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let w = self.width();
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[w] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Maximizes `obj · z` subject to `cons` with `z` free.
pub fn maximize(obj: &[Rational], cons: &[LinConstraint]) -> LpOutcome {
    let n = obj.len();
    let m = cons.len();
    let nslack = cons.iter().filter(|c| c.sense == Sense::Le).count();
    // Columns: z⁺ (n), z⁻ (n), slacks, artificials (m), rhs.
    let art0 = 2 * n + nslack;
    let w = art0 + m;
    let mut rows = Vec::with_capacity(m);
    let mut slack = 2 * n;
    for (i, con) in cons.iter().enumerate() {
        debug_assert_eq!(con.coeffs.len(), n);
        let mut row = vec![Rational::zero(); w + 1];
        for (j, a) in con.coeffs.iter().enumerate() {
            row[j] = a.clone();
            row[n + j] = -a;
        }
        if con.sense == Sense::Le {
            row[slack] = Rational::one();
            slack += 1;
        }
        row[w] = con.rhs.clone();
        if con.rhs.is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
        row[art0 + i] = Rational::one();
        rows.push(row);
    }
    // Phase 1: minimize the sum of artificials.
    let mut cost = vec![Rational::zero(); w + 1];
    for row in &rows {
        for j in 0..art0 {
            cost[j] = &cost[j] - &row[j];
        }
        cost[w] = &cost[w] - &row[w];
    }
    let mut t = Tableau { rows, cost, basis: (art0..art0 + m).collect() };
    t.run(art0);
    if !t.cost[w].is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive artificials out of the basis; rows with no other support are redundant.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= art0 {
            match (0..art0).find(|&j| !t.rows[r][j].is_zero()) {
                Some(c) => t.pivot(r, c),
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    // Phase 2: minimize −obj·(z⁺ − z⁻).
    let mut cost = vec![Rational::zero(); w + 1];
    for j in 0..n {
        cost[j] = -&obj[j];
        cost[n + j] = obj[j].clone();
    }
    for (i, row) in t.rows.iter().enumerate() {
        let b = t.basis[i];
        let cb = cost[b].clone();
        if cb.is_zero() {
            continue;
        }
        for j in 0..=w {
            if !row[j].is_zero() {
                cost[j] = &cost[j] - &(&cb * &row[j]);
            }
        }
    }
    t.cost = cost;
    if !t.run(art0) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); art0];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < art0 {
            x[b] = t.rows[i][w].clone();
        }
    }
    let point: Vec<Rational> = (0..n).map(|j| &x[j] - &x[n + j]).collect();
    let value = point.iter().zip(obj).fold(Rational::zero(), |acc, (z, c)| acc + z * c);
    LpOutcome::Optimal { value, point }
}

/// Whether some `z` satisfies every constraint with the `strict` ones holding
/// strictly.
pub fn strictly_feasible(cons: &[LinConstraint], strict: &[bool]) -> bool {
    let n = cons.first().map_or(0, |c| c.coeffs.len());
    if cons.is_empty() {
        return true;
    }
    // maximize t subject to a·z + t ≤ b on strict rows, t ≤ 1.
    let mut ext: Vec<LinConstraint> = cons
        .iter()
        .zip(strict)
        .map(|(c, &s)| {
            let mut coeffs = c.coeffs.clone();
            coeffs.push(if s { Rational::one() } else { Rational::zero() });
            LinConstraint { coeffs, sense: c.sense, rhs: c.rhs.clone() }
        })
        .collect();
    let mut cap = vec![Rational::zero(); n + 1];
    cap[n] = Rational::one();
    ext.push(LinConstraint::le(cap.clone(), Rational::one()));
    match maximize(&cap, &ext) {
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        LpOutcome::Unbounded => true,
        LpOutcome::Infeasible => false,
    }
}

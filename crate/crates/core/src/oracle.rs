//! Extremality by finite oversampling: restrict a concrete minimal function
//! with breakpoints in `(1/q)ℤ` to the grid `(1/3q)ℤ/ℤ` and decide whether
//! the additivity equations there determine it uniquely.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::pwl::Pwl;
use crate::rational::Rational;

/// Grids above this size are refused.
pub const MAX_GRID: usize = 3000;

/// `True` iff the restriction of `pi` to `(1/3q)ℤ/ℤ` is the only grid
/// function with `φ(0) = 0`, `φ(f) = 1`, and `φ(u) + φ(v) = φ(u + v)` at every
/// grid pair where `π` is additive.
pub fn grid_oracle_extremality(pi: &Pwl<Rational>) -> Result<bool> {
    let q = pi.common_denominator();
    let n = (q * BigInt::from(3)).to_usize().filter(|&n| n <= MAX_GRID).ok_or(Error::Unsupported("grid too fine"))?;
    let nr = Rational::from_integer(n as i64);
    let fi = pi.f() * &nr;
    if !fi.is_integer() {
        return Err(Error::Unsupported("f is not on the grid"));
    }
    let fi = fi.numer().to_usize().unwrap() % n;
    let vals: Vec<Rational> = (0..n).map(|i| pi.eval_rational(&Rational::new(i as i64, n as i64))).collect();

    let mut tight = Vec::new();
    for u in 0..n {
        for v in u..n {
            let w = (u + v) % n;
            if vals[u].clone() + vals[v].clone() == vals[w] {
                tight.push((u, v, w));
            }
        }
    }
    // Full rank modulo a prime implies full rank over ℚ; only a deficient
    // modular rank needs the exact rerun.
    if full_rank::<ModP>(n, fi, &tight).is_some() {
        return Ok(true);
    }
    match full_rank::<Rational>(n, fi, &tight) {
        Some(sol) => {
            debug_assert_eq!(sol, vals);
            Ok(true)
        }
        None => Ok(false),
    }
}

/// Solution of `φ(0) = 0`, `φ(fi) = 1`, and the tight-pair equations when it
/// is unique.
fn full_rank<S: Scalar>(n: usize, fi: usize, tight: &[(usize, usize, usize)]) -> Option<Vec<S>> {
    let mut rref = Rref::<S>::new(n);
    let row = |entries: &[(usize, i64)]| {
        let mut row = vec![S::from_i64(0); n];
        for &(j, c) in entries {
            row[j] = row[j].add(&S::from_i64(c));
        }
        row
    };
    rref.push(row(&[(0, 1)]), S::from_i64(0));
    rref.push(row(&[(fi, 1)]), S::from_i64(1));
    for &(u, v, w) in tight {
        if rref.rank() == n {
            break;
        }
        rref.push(row(&[(u, 1), (v, 1), (w, -1)]), S::from_i64(0));
    }
    (rref.rank() == n).then(|| rref.solution())
}

trait Scalar: Clone + PartialEq + core::fmt::Debug {
    fn from_i64(c: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn recip(&self) -> Self;
}

impl Scalar for Rational {
    fn from_i64(c: i64) -> Self {
        Rational::from_integer(c)
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn recip(&self) -> Self {
        Rational::recip(self)
    }
}

const P: u64 = (1 << 61) - 1;

#[derive(Clone, Copy, PartialEq, Debug)]
struct ModP(u64);

impl Scalar for ModP {
    fn from_i64(c: i64) -> Self {
        ModP(c.rem_euclid(P as i64) as u64)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        ModP((self.0 + o.0) % P)
    }
    fn sub(&self, o: &Self) -> Self {
        ModP((self.0 + P - o.0) % P)
    }
    fn mul(&self, o: &Self) -> Self {
        ModP(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
    fn recip(&self) -> Self {
        let (mut base, mut e, mut acc) = (*self, P - 2, ModP(1));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// Augmented matrix kept in reduced row echelon form: every pivot column is
/// zero outside its pivot row.
struct Rref<S> {
    ncols: usize,
    rows: Vec<(usize, Vec<S>, S)>,
    pivot_row: Vec<Option<usize>>,
}

impl<S: Scalar> Rref<S> {
    fn new(ncols: usize) -> Self {
        Rref { ncols, rows: Vec::new(), pivot_row: vec![None; ncols] }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn push(&mut self, mut row: Vec<S>, mut rhs: S) {
        // Pivot rows vanish on the other pivot columns, so one pass over the
        // row's own pivot-column entries clears them all.
        let hits: Vec<(usize, S)> = (0..self.ncols)
            .filter(|&j| !row[j].is_zero())
            .filter_map(|j| self.pivot_row[j].map(|r| (r, row[j].clone())))
            .collect();
        for (r, c) in hits {
            let (_, prow, prhs) = &self.rows[r];
            for (x, p) in row.iter_mut().zip(prow) {
                if !p.is_zero() {
                    *x = x.sub(&c.mul(p));
                }
            }
            rhs = rhs.sub(&c.mul(prhs));
        }
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            assert!(rhs.is_zero(), "inconsistent grid system");
            return;
        };
        let inv = row[pc].recip();
        for x in row.iter_mut() {
            *x = x.mul(&inv);
        }
        rhs = rhs.mul(&inv);
        let nz: Vec<usize> = (0..self.ncols).filter(|&j| !row[j].is_zero()).collect();
        for (_, prow, prhs) in self.rows.iter_mut() {
            let c = prow[pc].clone();
            if c.is_zero() {
                continue;
            }
            for &j in &nz {
                prow[j] = prow[j].sub(&c.mul(&row[j]));
            }
            *prhs = prhs.sub(&c.mul(&rhs));
        }
        self.pivot_row[pc] = Some(self.rows.len());
        self.rows.push((pc, row, rhs));
    }

    fn solution(&self) -> Vec<S> {
        let mut out = vec![S::from_i64(0); self.ncols];
        for (pc, _, rhs) in &self.rows {
            out[*pc] = rhs.clone();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn oracle_examples() {
        let drlm = drlm_backward_3_slope(&q("1/12"), &q("2/12")).unwrap();
        assert_eq!(drlm.common_denominator(), BigInt::from(12));
        assert!(grid_oracle_extremality(&drlm).unwrap());
        let chen = chen_4_slope(&q("7/10"), &q("2"), &q("-4"), &q("1/10"), &q("1/10")).unwrap();
        assert!(grid_oracle_extremality(&chen).unwrap());
        assert!(grid_oracle_extremality(&gmic(&q("1/2")).unwrap()).unwrap());
    }

    #[test]
    fn gmic_half_grid_by_hand() {
        // Grid 1/6 with values 0, 1/3, 2/3, 1, 2/3, 1/3. Tight pairs include
        // (1,1)→2 and (1,2)→3, which with φ₀ = 0 and φ₃ = 1 force φ₁ = 1/3,
        // φ₂ = 2/3; (5,5)→4 and (4,5)→3 force φ₅ = 1/3, φ₄ = 2/3.
        let pi = gmic(&q("1/2")).unwrap();
        let vals: Vec<Rational> = (0..6).map(|i| pi.eval_rational(&Rational::new(i, 6))).collect();
        assert_eq!(vals, ["0", "1/3", "2/3", "1", "2/3", "1/3"].map(q).to_vec());
        for (u, v, w) in [(1, 1, 2), (1, 2, 3), (5, 5, 4), (4, 5, 3)] {
            assert_eq!(vals[u].clone() + vals[v].clone(), vals[w]);
        }
        for (u, v) in [(1, 5), (2, 4), (3, 1), (4, 4)] {
            assert_ne!(vals[u].clone() + vals[v].clone(), vals[(u + v) % 6]);
        }
    }
}

//! Continuous piecewise-linear functions on ℝ/ℤ over an ordered field.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::OrderedField;
use crate::rational::Rational;

/// A continuous, 1-periodic piecewise-linear function given by its values at
/// strictly increasing breakpoints `0 = b₀ < … < bₙ = 1`.
#[derive(Clone, Debug)]
pub struct Pwl<F> {
    f: F,
    bkpts: Vec<F>,
    values: Vec<F>,
    slopes: Vec<F>,
}

impl<F: OrderedField> Pwl<F> {
    /// Checks strict increase left to right (each comparison is a branch) and
    /// the endpoint conditions.
    pub fn from_breakpoints_values(f: F, bkpts: Vec<F>, values: Vec<F>) -> Result<Self> {
        if bkpts.len() != values.len() {
            return Err(Error::Arity { expected: bkpts.len(), got: values.len() });
        }
        if bkpts.len() < 2 {
            return Err(Error::NotConstructible);
        }
        let last = bkpts.len() - 1;
        if !bkpts[0].value().is_zero() || !bkpts[last].value().is_one() {
            return Err(Error::NotConstructible);
        }
        for w in bkpts.windows(2) {
            if !w[0].lt(&w[1]) {
                return Err(Error::NotConstructible);
            }
        }
        if !values[0].is_identically_zero() && !values[0].is_zero() {
            return Err(Error::NotConstructible);
        }
        if !values[last].is_identically_zero() && !values[last].is_zero() {
            return Err(Error::NotConstructible);
        }
        let slopes = (0..last)
            .map(|i| values[i + 1].sub(&values[i]).div(&bkpts[i + 1].sub(&bkpts[i])))
            .collect();
        Ok(Pwl { f, bkpts, values, slopes })
    }

    pub fn f(&self) -> &F {
        &self.f
    }

    pub fn breakpoints(&self) -> &[F] {
        &self.bkpts
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    /// Slope on piece `i`, between breakpoints `i` and `i + 1`.
    pub fn slopes(&self) -> &[F] {
        &self.slopes
    }

    pub fn pieces(&self) -> usize {
        self.bkpts.len() - 1
    }

    /// `x − ⌊x⌋`, with the two bounding comparisons recorded.
    pub fn reduce_mod_one(x: &F) -> F {
        let k = x.value().floor();
        let y = if k.is_zero() { x.clone() } else { x.add_rat(&-k) };
        let zero = y.zero_like();
        let one = y.one_like();
        let ok = y.ge(&zero) && y.lt(&one);
        debug_assert!(ok);
        y
    }

    /// Index `i` with `bᵢ ≤ y ≤ bᵢ₊₁` for `y ∈ [0, 1)`; returns `(i, exact)`
    /// where `exact` is set when `y` is formally equal to `bᵢ`.
    pub fn locate(&self, y: &F) -> (usize, bool) {
        if let Some(i) = self.bkpts.iter().position(|b| b.sub(y).is_identically_zero()) {
            return (i, true);
        }
        let (mut lo, mut hi) = (0, self.pieces());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if y.lt(&self.bkpts[mid]) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo, false)
    }

    pub fn eval(&self, x: &F) -> F {
        let y = Self::reduce_mod_one(x);
        let (i, exact) = self.locate(&y);
        if exact {
            return self.values[i].clone();
        }
        self.values[i].add(&y.sub(&self.bkpts[i]).mul(&self.slopes[i]))
    }
}

impl Pwl<Rational> {
    /// Fast exact evaluation for concrete functions.
    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let y = x - x.floor();
        let i = match self.bkpts.binary_search(&y) {
            Ok(i) => return self.values[i].clone(),
            Err(i) => i - 1,
        };
        &self.values[i] + &(&(&y - &self.bkpts[i]) * &self.slopes[i])
    }

    /// Lowest common denominator of the breakpoints.
    pub fn common_denominator(&self) -> num_bigint::BigInt {
        Rational::lcm_of_denominators(self.bkpts.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn gmic_half() -> Pwl<Rational> {
        Pwl::from_breakpoints_values(r(1, 2), vec![r(0, 1), r(1, 2), r(1, 1)], vec![r(0, 1), r(1, 1), r(0, 1)]).unwrap()
    }

    #[test]
    fn evaluation() {
        let p = gmic_half();
        assert_eq!(p.eval(&r(1, 4)), r(1, 2));
        assert_eq!(p.eval(&r(0, 1)), r(0, 1));
        assert_eq!(p.eval(&r(5, 4)), r(1, 2));
        assert_eq!(p.eval(&r(-1, 4)), r(1, 2));
        assert_eq!(p.eval_rational(&r(-1, 4)), r(1, 2));
        assert_eq!(p.eval(&r(1, 1)), r(0, 1));
    }

    #[test]
    fn order_violation_is_not_constructible() {
        let e = Pwl::from_breakpoints_values(
            r(2, 3),
            vec![r(0, 1), r(2, 3), r(1, 3), r(1, 1)],
            vec![r(0, 1), r(1, 1), r(1, 2), r(0, 1)],
        );
        assert_eq!(e.unwrap_err(), Error::NotConstructible);
    }
}

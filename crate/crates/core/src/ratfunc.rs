//! Reduced quotients of polynomials.

use core::fmt;

use crate::error::{Error, Result};
use crate::factor::{div_exact, gcd};
use crate::poly::MultiPoly;
use crate::rational::Rational;

/// `num / den` with `gcd(num, den) = 1` and a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.nvars() != den.nvars() {
            return Err(Error::VariableMismatch(num.nvars(), den.nvars()));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return RatFunc::constant(num.nvars(), Rational::zero());
        }
        if let Some(c) = den.as_constant() {
            return RatFunc { num: num.scale(&c.recip()), den: MultiPoly::one(num.nvars()) };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (div_exact(&num, &g).unwrap(), div_exact(&den, &g).unwrap())
        };
        let lc = den.leading_coefficient().recip();
        RatFunc { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let nv = p.nvars();
        RatFunc { num: p, den: MultiPoly::one(nv) }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        RatFunc::from_poly(MultiPoly::constant(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        RatFunc::from_poly(MultiPoly::var(nvars, i))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one_poly() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.combine(other, true)
    }

    fn combine(&self, other: &RatFunc, negate: bool) -> RatFunc {
        let op = |a: &MultiPoly, b: &MultiPoly| if negate { a.sub(b) } else { a.add(b) };
        if self.den == other.den {
            let num = op(&self.num, &other.num);
            if self.den.is_one_poly() {
                return RatFunc { num, den: self.den.clone() };
            }
            return Self::reduce(num, self.den.clone());
        }
        if other.den.is_one_poly() {
            let num = op(&self.num, &other.num.mul(&self.den));
            return RatFunc { num, den: self.den.clone() }.reduced_if_needed();
        }
        if self.den.is_one_poly() {
            let num = op(&self.num.mul(&other.den), &other.num);
            return RatFunc { num, den: other.den.clone() }.reduced_if_needed();
        }
        let g = gcd(&self.den, &other.den);
        let ra = div_exact(&other.den, &g).unwrap();
        let rb = div_exact(&self.den, &g).unwrap();
        let num = op(&self.num.mul(&ra), &other.num.mul(&rb));
        Self::reduce(num, self.den.mul(&ra))
    }

    /// `num/den` with `gcd(num, den) = 1` is preserved by adding a polynomial,
    /// except that a zero numerator must be canonicalized.
    fn reduced_if_needed(self) -> RatFunc {
        if self.num.is_zero() {
            RatFunc::constant(self.nvars(), Rational::zero())
        } else {
            self
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        Self::reduce(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::constant(self.nvars(), Rational::zero());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(c) = other.as_constant() {
            return Ok(self.scale(&c.recip()));
        }
        Ok(Self::reduce(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    /// Value at `point`, or `None` where the denominator vanishes.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    pub fn display<'a, N: AsRef<str>>(&'a self, names: &'a [N]) -> RatFuncDisplay<'a, N> {
        RatFuncDisplay { r: self, names }
    }
}

impl MultiPoly {
    pub(crate) fn is_one_poly(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

pub struct RatFuncDisplay<'a, N> {
    r: &'a RatFunc,
    names: &'a [N],
}

impl<N: AsRef<str>> fmt::Display for RatFuncDisplay<'_, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r.den.is_one_poly() {
            write!(f, "{}", self.r.num.display(self.names))
        } else {
            write!(f, "({})/({})", self.r.num.display(self.names), self.r.den.display(self.names))
        }
    }
}

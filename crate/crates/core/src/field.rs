//! The ordered-field interface shared by concrete rationals and parametric
//! elements. Every algorithm in the crate is written against this trait, so a
//! single implementation runs both concretely and as a recorded trace.

use core::cmp::Ordering;
use core::fmt;

use crate::error::Result;
use crate::rational::Rational;

pub trait OrderedField: Clone + fmt::Debug {
    /// Exact formal identity key: equal keys mean equal expressions.
    type Key: Ord + Clone + fmt::Debug;

    fn key(&self) -> Self::Key;

    /// The constant `c` in the same field (and context) as `self`.
    fn constant_like(&self, c: &Rational) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn try_div(&self, other: &Self) -> Result<Self>;

    /// Sign of `self`. In parametric fields this is a recorded branch.
    fn sign(&self) -> Ordering;

    /// Concrete value, without recording anything.
    fn value(&self) -> Rational;

    /// Whether `self` is zero as a formal expression (not just at the test
    /// point). Never recorded.
    fn is_identically_zero(&self) -> bool;

    fn div(&self, other: &Self) -> Self {
        self.try_div(other).expect("division by zero")
    }

    fn zero_like(&self) -> Self {
        self.constant_like(&Rational::zero())
    }

    fn one_like(&self) -> Self {
        self.constant_like(&Rational::one())
    }

    fn int_like(&self, n: i64) -> Self {
        self.constant_like(&Rational::from_integer(n))
    }

    fn add_rat(&self, c: &Rational) -> Self {
        self.add(&self.constant_like(c))
    }

    fn scale(&self, c: &Rational) -> Self {
        self.mul(&self.constant_like(c))
    }

    fn compare(&self, other: &Self) -> Ordering {
        self.sub(other).sign()
    }

    fn lt(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Less
    }

    fn le(&self, other: &Self) -> bool {
        self.compare(other) != Ordering::Greater
    }

    fn gt(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Greater
    }

    fn ge(&self, other: &Self) -> bool {
        self.compare(other) != Ordering::Less
    }

    fn equals(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }

    fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    fn min_of(&self, other: &Self) -> Self {
        if self.le(other) {
            self.clone()
        } else {
            other.clone()
        }
    }

    fn max_of(&self, other: &Self) -> Self {
        if self.ge(other) {
            self.clone()
        } else {
            other.clone()
        }
    }
}

impl OrderedField for Rational {
    type Key = Rational;

    fn key(&self) -> Rational {
        self.clone()
    }

    fn constant_like(&self, c: &Rational) -> Self {
        c.clone()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn try_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            Err(crate::error::Error::DivisionByZero)
        } else {
            Ok(self / other)
        }
    }

    fn sign(&self) -> Ordering {
        self.signum()
    }

    fn value(&self) -> Rational {
        self.clone()
    }

    fn is_identically_zero(&self) -> bool {
        Rational::is_zero(self)
    }

    fn compare(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

//! Parametric field elements: a symbolic rational function of the parameters
//! paired with its value at a fixed rational test point. Every sign decision
//! is answered from the value and recorded as factored atoms in the context's
//! ledger.

use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::cmp::Ordering;
use core::fmt;

use crate::atom::{normalize_and_factor, Atom, ConstraintLedger, Rel};
use crate::error::{Error, Result};
use crate::field::OrderedField;
use crate::poly::{MultiPoly, MAX_VARS};
use crate::ratfunc::RatFunc;
use crate::rational::Rational;

struct ContextState {
    names: Vec<String>,
    point: Vec<Rational>,
    ledger: ConstraintLedger,
    recording: bool,
}

/// Shared handle to one parametric run: names, test point, ledger.
#[derive(Clone)]
pub struct ParamContext(Rc<RefCell<ContextState>>);

impl ParamContext {
    /// A fresh context and its generators, one per name.
    pub fn new<N: AsRef<str>>(names: &[N], values: &[Rational]) -> Result<(ParamContext, Vec<ParamElement>)> {
        if names.len() != values.len() {
            return Err(Error::Arity { expected: names.len(), got: values.len() });
        }
        if names.len() > MAX_VARS {
            return Err(Error::TooManyVariables(MAX_VARS));
        }
        let names: Vec<String> = names.iter().map(|n| String::from(n.as_ref())).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::DuplicateName(n.clone()));
            }
        }
        let nv = names.len();
        let ctx = ParamContext(Rc::new(RefCell::new(ContextState {
            names,
            point: values.to_vec(),
            ledger: ConstraintLedger::new(),
            recording: true,
        })));
        let gens = (0..nv)
            .map(|i| ParamElement { ctx: ctx.clone(), sym: RatFunc::var(nv, i), val: values[i].clone() })
            .collect();
        Ok((ctx, gens))
    }

    pub fn nvars(&self) -> usize {
        self.0.borrow().names.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.0.borrow().names.clone()
    }

    pub fn test_point(&self) -> Vec<Rational> {
        self.0.borrow().point.clone()
    }

    pub fn constant(&self, c: &Rational) -> ParamElement {
        ParamElement { ctx: self.clone(), sym: RatFunc::constant(self.nvars(), c.clone()), val: c.clone() }
    }

    /// An element with the given symbolic expression.
    pub fn element(&self, sym: RatFunc) -> Result<ParamElement> {
        let val = sym.eval(&self.0.borrow().point).ok_or(Error::DivisionByZero)?;
        Ok(ParamElement { ctx: self.clone(), sym, val })
    }

    pub fn ledger_snapshot(&self) -> ConstraintLedger {
        self.0.borrow().ledger.clone()
    }

    pub fn same_as(&self, other: &ParamContext) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }

    /// Runs `f` with recording switched off; used for bookkeeping comparisons
    /// that do not influence any branch of the algorithm.
    pub fn without_recording<T>(&self, f: impl FnOnce() -> T) -> T {
        let prev = core::mem::replace(&mut self.0.borrow_mut().recording, false);
        let out = f();
        self.0.borrow_mut().recording = prev;
        out
    }

    /// Records the observed sign of `sym` (`weak` records `≤` where possible).
    fn record(&self, sym: &RatFunc, weak: bool) -> Result<()> {
        let mut st = self.0.borrow_mut();
        if !st.recording {
            return Ok(());
        }
        let existing: Vec<MultiPoly> = st.ledger.atoms().into_iter().map(|a| a.poly().clone()).collect();
        let (atoms, splits) = normalize_and_factor(sym, &st.point, &existing, weak);
        let point = st.point.clone();
        for (old, parts) in splits {
            let Some(prev) = st.ledger.get(&old) else { continue };
            let old_val = old.eval(&point);
            if prev.rel() == Rel::Le && old_val.is_zero() {
                continue;
            }
            st.ledger.remove(&old);
            for part in parts {
                let v = part.eval(&point);
                let atom = if v.is_zero() {
                    Atom::new(&part, Rel::Eq)
                } else if v.is_negative() {
                    Atom::new(&part, Rel::Lt)
                } else {
                    Atom::new(&part.neg(), Rel::Lt)
                };
                st.ledger.insert(atom)?;
            }
        }
        for a in atoms {
            debug_assert!(a.holds_at(&point), "recorded atom fails at the test point");
            st.ledger.insert(a)?;
        }
        Ok(())
    }
}

impl fmt::Debug for ParamContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let st = self.0.borrow();
        write!(f, "ParamContext({:?} = {:?}, {} atoms)", st.names, st.point, st.ledger.len())
    }
}

/// `⟨sym ∥ val⟩`: a symbolic expression and its value at the test point.
#[derive(Clone)]
pub struct ParamElement {
    ctx: ParamContext,
    sym: RatFunc,
    val: Rational,
}

impl ParamElement {
    pub fn context(&self) -> &ParamContext {
        &self.ctx
    }

    pub fn sym(&self) -> &RatFunc {
        &self.sym
    }

    pub fn val(&self) -> &Rational {
        &self.val
    }

    fn check(&self, other: &ParamElement) -> Result<()> {
        if self.ctx.same_as(&other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn make(&self, sym: RatFunc, val: Rational) -> ParamElement {
        debug_assert_eq!(sym.eval(&self.ctx.0.borrow().point).as_ref(), Some(&val), "symbolic/concrete mismatch");
        ParamElement { ctx: self.ctx.clone(), sym, val }
    }

    pub fn try_add(&self, other: &ParamElement) -> Result<ParamElement> {
        self.check(other)?;
        Ok(self.make(self.sym.add(&other.sym), &self.val + &other.val))
    }

    pub fn try_sub(&self, other: &ParamElement) -> Result<ParamElement> {
        self.check(other)?;
        Ok(self.make(self.sym.sub(&other.sym), &self.val - &other.val))
    }

    pub fn try_mul(&self, other: &ParamElement) -> Result<ParamElement> {
        self.check(other)?;
        Ok(self.make(self.sym.mul(&other.sym), &self.val * &other.val))
    }

    /// Division; a nonconstant divisor records its nonvanishing.
    pub fn try_divide(&self, other: &ParamElement) -> Result<ParamElement> {
        self.check(other)?;
        if other.val.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if other.sym.as_constant().is_none() {
            self.ctx.record(&other.sym, false)?;
        }
        Ok(self.make(self.sym.div(&other.sym)?, &self.val / &other.val))
    }

    /// Compares with `other`, records the outcome, and reports whether `rel` holds.
    pub fn compare_rel(&self, other: &ParamElement, rel: CompareOp) -> Result<bool> {
        self.check(other)?;
        let o = self.try_sub(other)?.recorded_sign()?;
        Ok(rel.holds(o))
    }

    fn recorded_sign(&self) -> Result<Ordering> {
        if !self.sym.is_zero() && self.sym.as_constant().is_none() {
            self.ctx.record(&self.sym, false)?;
        }
        Ok(self.val.signum())
    }

    /// Records `self ≤ 0` (or `self ≥ 0` when the value is positive) as a
    /// non-strict atom where the factor structure allows it.
    pub fn record_weak(&self) -> Result<()> {
        if self.sym.as_constant().is_none() {
            self.ctx.record(&self.sym, true)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareOp {
    Lt,
    Le,
    Eq,
    Ne,
    Gt,
    Ge,
}

impl CompareOp {
    pub fn holds(self, o: Ordering) -> bool {
        match self {
            CompareOp::Lt => o == Ordering::Less,
            CompareOp::Le => o != Ordering::Greater,
            CompareOp::Eq => o == Ordering::Equal,
            CompareOp::Ne => o != Ordering::Equal,
            CompareOp::Gt => o == Ordering::Greater,
            CompareOp::Ge => o != Ordering::Less,
        }
    }
}

impl fmt::Debug for ParamElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.ctx.names();
        write!(f, "<{} || {}>", self.sym.display(&names), self.val)
    }
}

impl OrderedField for ParamElement {
    type Key = RatFunc;

    fn key(&self) -> RatFunc {
        self.sym.clone()
    }

    fn constant_like(&self, c: &Rational) -> Self {
        self.ctx.constant(c)
    }

    fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("elements from different contexts")
    }

    fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("elements from different contexts")
    }

    fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("elements from different contexts")
    }

    fn neg(&self) -> Self {
        self.make(self.sym.neg(), -&self.val)
    }

    fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_divide(other)
    }

    fn sign(&self) -> Ordering {
        self.recorded_sign().expect("inconsistent ledger")
    }

    fn value(&self) -> Rational {
        self.val.clone()
    }

    fn is_identically_zero(&self) -> bool {
        self.sym.is_zero()
    }

    fn add_rat(&self, c: &Rational) -> Self {
        self.make(self.sym.add(&RatFunc::constant(self.sym.nvars(), c.clone())), &self.val + c)
    }

    fn scale(&self, c: &Rational) -> Self {
        self.make(self.sym.scale(c), &self.val * c)
    }
}

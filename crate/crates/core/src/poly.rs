//! Sparse multivariate polynomials with rational coefficients.
//!
//! Terms are kept sorted in graded reverse lexicographic order (leading term
//! first), with variables ranked by their position in the parameter list. Two equal
//! polynomials always have identical term vectors.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, ParseError, Result};
use crate::rational::Rational;

/// Maximum number of parameters a polynomial ring may have.
pub const MAX_VARS: usize = 8;

/// Exponent vector of a monomial.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(i: usize) -> Self {
        let mut m = Monomial::default();
        m.exps[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        let mut m = Monomial::default();
        m.exps[..exps.len()].copy_from_slice(exps);
        m
    }

    pub fn exponent(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn exponents(&self) -> &[u16; MAX_VARS] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(other.exps.iter()) {
            *a += *b;
        }
        m
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut m = *other;
        for (a, b) in m.exps.iter_mut().zip(self.exps.iter()) {
            *a -= *b;
        }
        m
    }

    pub fn with_exponent(&self, i: usize, e: u16) -> Monomial {
        let mut m = *self;
        m.exps[i] = e;
        m
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::one();
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                acc = &acc * &point[i].pow(e as u32);
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // Reverse lexicographic tie-break: a smaller power of a later variable ranks higher.
            for i in (0..MAX_VARS).rev() {
                if self.exps[i] != other.exps[i] {
                    return other.exps[i].cmp(&self.exps[i]);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.exps)
    }
}

/// A polynomial over `nvars` ordered variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: Vec<(Monomial, Rational)>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        MultiPoly { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = MultiPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.push((Monomial::one(), c));
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        MultiPoly::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        MultiPoly { nvars, terms: alloc::vec![(Monomial::var(i), Rational::one())] }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert!(m.exps[nvars..].iter().all(|&e| e == 0));
            let e = acc.entry(m).or_insert_with(Rational::zero);
            *e = &*e + &c;
        }
        Self::from_map(nvars, acc)
    }

    fn from_map(nvars: usize, map: BTreeMap<Monomial, Rational>) -> Self {
        let terms = map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        MultiPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exps[var]).max().unwrap_or(0)
    }

    /// Whether variable `var` occurs.
    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exps[var] > 0)
    }

    pub fn is_linear(&self) -> bool {
        self.total_degree() <= 1
    }

    fn check(&self, other: &MultiPoly) -> Result<()> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(Error::VariableMismatch(self.nvars, other.nvars))
        }
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Panics on mismatched rings; use the `checked_*` variants at API boundaries.
    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.checked_add(other).expect("variable mismatch")
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.checked_sub(other).expect("variable mismatch")
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.checked_mul(other).expect("variable mismatch")
    }

    fn merge(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MultiPoly { nvars: self.nvars, terms: out }
    }

    fn mul_unchecked(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(e) => *e = &*e + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::from_map(self.nvars, acc)
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        debug_assert!(point.len() >= self.nvars);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc = &acc + &(c * &m.eval(point));
        }
        acc
    }

    /// Floating-point evaluation, for plotting and search heuristics.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64();
            for (i, xi) in x.iter().enumerate() {
                for _ in 0..m.exponent(i) {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let terms = self.terms.iter().filter(|(m, _)| m.exps[var] > 0).map(|(m, c)| {
            let e = m.exps[var];
            (m.with_exponent(var, e - 1), c * &Rational::from_integer(e as i64))
        });
        MultiPoly::from_terms(self.nvars, terms)
    }

    /// Gradient evaluated at `point`.
    pub fn gradient_at(&self, point: &[Rational]) -> Vec<Rational> {
        (0..self.nvars).map(|i| self.derivative(i).eval(point)).collect()
    }

    /// Coefficients as a polynomial in `var`: entry `k` multiplies `var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = (0..=deg).map(|_| Vec::new()).collect();
        for (m, c) in &self.terms {
            buckets[m.exps[var] as usize].push((m.with_exponent(var, 0), c.clone()));
        }
        buckets.into_iter().map(|t| MultiPoly::from_terms(self.nvars, t)).collect()
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(nvars: usize, var: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let terms = coeffs.iter().enumerate().flat_map(|(k, p)| {
            p.terms.iter().map(move |(m, c)| (m.with_exponent(var, k as u16), c.clone()))
        });
        MultiPoly::from_terms(nvars, terms)
    }

    /// Writes `self = scale * prim` where `prim` has coprime integer
    /// coefficients and a positive leading coefficient.
    pub fn primitive(&self) -> (Rational, MultiPoly) {
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_traits::{One, Signed, Zero};
        if self.is_zero() {
            return (Rational::one(), self.clone());
        }
        let mut lcm = BigInt::one();
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            lcm = lcm.lcm(&c.denom());
            g = g.gcd(&c.numer());
        }
        let mut scale = Rational::from_bigints(g.abs(), lcm);
        if self.leading_coefficient().is_negative() {
            scale = -scale;
        }
        let prim = self.scale(&scale.recip());
        (scale, prim)
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coefficient().recip())
    }

    pub fn display<'a, N: AsRef<str>>(&'a self, names: &'a [N]) -> PolyDisplay<'a, N> {
        PolyDisplay { poly: self, names }
    }

    pub fn to_string_with<N: AsRef<str>>(&self, names: &[N]) -> String {
        self.display(names).to_string()
    }

    /// Parses text such as `-f^2*v + 3*f*b*v + 1/2*a - 1`.
    pub fn parse<N: AsRef<str>>(text: &str, names: &[N]) -> core::result::Result<MultiPoly, ParseError> {
        let mut parser = Parser { src: text, pos: 0, names };
        let p = parser.expr()?;
        parser.skip_ws();
        if parser.pos != text.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(p)
    }
}

impl PartialOrd for MultiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order: by leading monomials first, then coefficients; degree-major.
impl Ord for MultiPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                for (a, b) in self.terms.iter().zip(other.terms.iter()) {
                    let o = a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                self.terms.len().cmp(&other.terms.len())
            })
            .then_with(|| self.nvars.cmp(&other.nvars))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| alloc::format!("x{i}")).collect();
        write!(f, "{}", self.display(&names))
    }
}

pub struct PolyDisplay<'a, N> {
    poly: &'a MultiPoly,
    names: &'a [N],
}

impl<N: AsRef<str>> fmt::Display for PolyDisplay<'_, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let mut first = true;
            if !a.is_one() || m.is_one() {
                write!(f, "{a}")?;
                first = false;
            }
            for (i, &e) in m.exps.iter().enumerate().take(self.poly.nvars) {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.names[i].as_ref())?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

struct Parser<'a, N> {
    src: &'a str,
    pos: usize,
    names: &'a [N],
}

impl<N: AsRef<str>> Parser<'_, N> {
    fn error(&self, reason: &'static str) -> ParseError {
        ParseError::new(String::from(self.src), reason)
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> core::result::Result<MultiPoly, ParseError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                '-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> core::result::Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                '/' => {
                    self.pos += 1;
                    let d = self.factor()?;
                    let d = d.as_constant().ok_or_else(|| self.error("division by a non-constant"))?;
                    if d.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    acc = acc.scale(&d.recip());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> core::result::Result<MultiPoly, ParseError> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                return Ok(self.factor()?.neg());
            }
            Some('+') => {
                self.pos += 1;
                return self.factor();
            }
            _ => {}
        }
        let base = self.base()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let e: u32 = self.src[start..self.pos].parse().map_err(|_| self.error("bad exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> core::result::Result<MultiPoly, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("missing `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let n: Rational = self.src[start..self.pos].parse()?;
                Ok(MultiPoly::constant(self.nvars(), n))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let ident = &self.src[start..self.pos];
                let idx = self
                    .names
                    .iter()
                    .position(|n| n.as_ref() == ident)
                    .ok_or_else(|| self.error("unknown variable"))?;
                Ok(MultiPoly::var(self.nvars(), idx))
            }
            _ => Err(self.error("expected a number, variable, or `(`")),
        }
    }
}

//! Exact division, gcd, and squarefree decomposition of multivariate polynomials.
//!
//! The gcd works recursively on the lowest-index variable present: content and
//! primitive part with respect to that variable, then a primitive
//! pseudo-remainder sequence.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::poly::{Monomial, MultiPoly};
use crate::rational::Rational;

/// `a / b` if `b` divides `a` exactly, else `None`.
pub fn div_exact(a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
    assert!(!b.is_zero(), "division by the zero polynomial");
    let nv = a.nvars();
    if a.is_zero() {
        return Some(MultiPoly::zero(nv));
    }
    if let Some(c) = b.as_constant() {
        return Some(a.scale(&c.recip()));
    }
    let (lm_b, lc_b) = b.leading().cloned().unwrap();
    let lc_inv = lc_b.recip();
    let mut rem = a.clone();
    let mut quot = Vec::new();
    while let Some((lm_r, lc_r)) = rem.leading().cloned() {
        if !lm_b.divides(&lm_r) {
            return None;
        }
        let m = lm_b.quotient_of(&lm_r);
        let c = &lc_r * &lc_inv;
        rem = rem.sub(&b.mul_monomial(&m).scale(&c));
        quot.push((m, c));
    }
    Some(MultiPoly::from_terms(nv, quot))
}

/// Main variable for the remainder sequence: present in both, of least degree.
fn main_var(a: &MultiPoly, b: &MultiPoly) -> Option<usize> {
    let both = (0..a.nvars()).filter(|&i| a.involves(i) && b.involves(i));
    both.min_by_key(|&i| (a.degree_in(i).max(b.degree_in(i)), i))
        .or_else(|| (0..a.nvars()).find(|&i| a.involves(i) || b.involves(i)))
}

/// The largest monomial dividing every term, and the quotient.
fn monomial_content(p: &MultiPoly) -> (Monomial, MultiPoly) {
    let mut exps = [u16::MAX; crate::poly::MAX_VARS];
    for (m, _) in p.terms() {
        for (i, e) in exps.iter_mut().enumerate() {
            *e = (*e).min(m.exponent(i));
        }
    }
    let m = Monomial::from_exponents(&exps[..p.nvars()]);
    let q = MultiPoly::from_terms(p.nvars(), p.terms().iter().map(|(t, c)| (m.quotient_of(t), c.clone())));
    (m, q)
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    assert_eq!(a.nvars(), b.nvars(), "variable mismatch");
    let nv = a.nvars();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(nv);
    }
    // Variables are prime, so monomial parts split off.
    let (ma, a) = monomial_content(a);
    let (mb, b) = monomial_content(b);
    let mut exps = [0u16; crate::poly::MAX_VARS];
    for (i, e) in exps.iter_mut().enumerate().take(nv) {
        *e = ma.exponent(i).min(mb.exponent(i));
    }
    let m = Monomial::from_exponents(&exps[..nv]);
    let g = match heuristic_gcd(&a.primitive().1, &b.primitive().1) {
        Some(g) => g,
        None => gcd_no_monomial(&a, &b),
    };
    g.mul_monomial(&m).monic()
}

fn max_norm(p: &MultiPoly) -> BigInt {
    p.terms().iter().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

fn substitute(p: &MultiPoly, v: usize, x: &Rational) -> MultiPoly {
    MultiPoly::from_terms(
        p.nvars(),
        p.terms().iter().map(|(m, c)| (m.with_exponent(v, 0), c * &x.pow(u32::from(m.exponent(v))))),
    )
}

/// Residue of `n` modulo `m` in `(-m/2, m/2]`.
fn symmetric_mod(n: &BigInt, m: &BigInt) -> BigInt {
    let r = n.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Gcd over ℤ of integer polynomials by evaluation at a large integer and
/// ξ-adic reconstruction (Char, Geddes and Gonnet), verified by division.
/// `None` when no evaluation point in a few tries gives a divisor.
fn heuristic_gcd(a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
    let nv = a.nvars();
    if a.is_constant() && b.is_constant() {
        let g = a.as_constant()?.numer().gcd(&b.as_constant()?.numer());
        return Some(MultiPoly::constant(nv, Rational::from_bigint(g)));
    }
    let v = (0..nv).rev().find(|&i| a.involves(i) || b.involves(i))?;
    let deg = u64::from(a.degree_in(v).max(b.degree_in(v)));
    let mut xi: BigInt = max_norm(a).min(max_norm(b)) * 2 + 29;
    for _ in 0..6 {
        if xi.bits() * deg > 4096 {
            return None;
        }
        let x = Rational::from_bigint(xi.clone());
        let (ea, eb) = (substitute(a, v, &x), substitute(b, v, &x));
        if !ea.is_zero() && !eb.is_zero() {
            let gamma = heuristic_gcd(&ea, &eb)?;
            let mut g = MultiPoly::zero(nv);
            let mut e = gamma;
            let mut k = 0u16;
            while !e.is_zero() {
                let digit = MultiPoly::from_terms(
                    nv,
                    e.terms().iter().map(|(m, c)| (*m, Rational::from_bigint(symmetric_mod(&c.numer(), &xi)))),
                );
                g = g.add(&digit.mul_monomial(&Monomial::var(v).with_exponent(v, k)));
                e = e.sub(&digit).scale(&x.recip());
                k += 1;
            }
            if !g.is_zero() {
                let g = g.primitive().1;
                if div_exact(a, &g).is_some() && div_exact(b, &g).is_some() {
                    let c = content_z(a).gcd(&content_z(b));
                    return Some(g.scale(&Rational::from_bigint(c)));
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

fn content_z(p: &MultiPoly) -> BigInt {
    p.terms().iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(&c.numer()))
}

fn gcd_no_monomial(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let nv = a.nvars();
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(nv);
    }
    if a.terms().len() <= b.terms().len() {
        if div_exact(b, a).is_some() {
            return a.monic();
        }
    } else if div_exact(a, b).is_some() {
        return b.monic();
    }
    let Some(v) = main_var(a, b) else {
        return MultiPoly::one(nv);
    };
    let (ca, pa) = content_split(a, v);
    let (cb, pb) = content_split(b, v);
    let c = gcd(&ca, &cb);
    let g = primitive_gcd(pa, pb, v);
    c.mul(&g).monic()
}

/// Gcd of the coefficients in `v`, and the quotient by it.
fn content_split(p: &MultiPoly, v: usize) -> (MultiPoly, MultiPoly) {
    if !p.involves(v) {
        return (p.clone(), MultiPoly::one(p.nvars()));
    }
    let coeffs = p.coefficients_in(v);
    let mut c = MultiPoly::zero(p.nvars());
    for k in coeffs.iter().rev().filter(|k| !k.is_zero()) {
        c = gcd(&c, k);
        if c.is_constant() {
            break;
        }
    }
    let c = c.monic();
    let q = div_exact(p, &c).expect("content divides");
    (c, q)
}

fn prem(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let db = b.degree_in(v);
    let cb = b.coefficients_in(v);
    let lc_b = cb.last().unwrap().clone();
    let mut r = a.clone();
    loop {
        let dr = r.degree_in(v);
        if r.is_zero() || dr < db {
            return r;
        }
        let lc_r = r.coefficients_in(v).pop().unwrap();
        let shift = crate::poly::Monomial::var(v);
        let mut t = b.mul(&lc_r);
        for _ in 0..(dr - db) {
            t = t.mul_monomial(&shift);
        }
        r = r.mul(&lc_b).sub(&t);
    }
}

/// Gcd of two polynomials that are primitive with respect to `v`.
fn primitive_gcd(mut a: MultiPoly, mut b: MultiPoly, v: usize) -> MultiPoly {
    let nv = a.nvars();
    if !a.involves(v) || !b.involves(v) {
        return MultiPoly::one(nv);
    }
    if a.degree_in(v) < b.degree_in(v) {
        core::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return content_split(&b, v).1;
        }
        if !r.involves(v) {
            return MultiPoly::one(nv);
        }
        a = b;
        b = content_split(&r, v).1;
    }
}

/// Normalizes to coprime integer coefficients with positive leading coefficient.
pub fn canonical(p: &MultiPoly) -> MultiPoly {
    p.primitive().1
}

/// Squarefree decomposition `p = c · ∏ fᵢ^mᵢ` with canonical, pairwise coprime,
/// squarefree, nonconstant factors.
pub fn squarefree(p: &MultiPoly) -> (Rational, Vec<(MultiPoly, u32)>) {
    assert!(!p.is_zero(), "squarefree decomposition of zero");
    let mut out = Vec::new();
    squarefree_into(p, &mut out);
    let mut prod = MultiPoly::one(p.nvars());
    for (f, m) in &out {
        prod = prod.mul(&f.pow(*m));
    }
    let lead = p.leading_coefficient() / prod.leading_coefficient();
    debug_assert_eq!(prod.scale(&lead), *p, "squarefree reassembly");
    (lead, out)
}

fn squarefree_into(p: &MultiPoly, out: &mut Vec<(MultiPoly, u32)>) {
    if p.is_constant() {
        return;
    }
    let v = (0..p.nvars()).find(|&i| p.involves(i)).unwrap();
    let (cont, pp) = content_split(p, v);
    squarefree_into(&cont, out);
    // Yun's algorithm in v; every factor of pp involves v.
    let d = pp.derivative(v);
    let a0 = gcd(&pp, &d);
    let mut b = div_exact(&pp, &a0).unwrap();
    let mut c = div_exact(&d, &a0).unwrap();
    let mut m = 1;
    loop {
        let dd = c.sub(&b.derivative(v));
        let a = gcd(&b, &dd);
        if !a.is_constant() {
            out.push((canonical(&a), m));
        }
        b = div_exact(&b, &a).unwrap();
        if b.is_constant() {
            break;
        }
        c = div_exact(&dd, &a).unwrap();
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const XY: [&str; 2] = ["x", "y"];
    const FAB: [&str; 3] = ["f", "a", "b"];

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s, &XY).unwrap()
    }

    fn q(s: &str) -> MultiPoly {
        MultiPoly::parse(s, &FAB).unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&p("x^2 - 1"), &p("x - 1")), p("x - 1"));
        assert_eq!(gcd(&p("x"), &p("y")), p("1"));
        assert_eq!(gcd(&q("f^2*a - 3*f*a*b"), &q("f*a")), q("f*a"));
        assert_eq!(gcd(&p("0"), &p("0")), p("0"));
        let g = p("x*y + 2*y^2 - 3");
        let a = p("x^2 + y").mul(&g);
        let b = p("x - y^3 + 1").mul(&g);
        assert_eq!(gcd(&a, &b), g.monic());
    }

    #[test]
    fn exact_division() {
        assert_eq!(div_exact(&p("x^2 - y^2"), &p("x + y")), Some(p("x - y")));
        assert_eq!(div_exact(&p("x^2 + 1"), &p("x + 1")), None);
    }

    #[test]
    fn squarefree_examples() {
        let (c, fs) = squarefree(&p("x^2*y"));
        assert_eq!(c, Rational::one());
        assert!(fs.contains(&(p("x"), 2)) && fs.contains(&(p("y"), 1)) && fs.len() == 2);

        let (_, fs) = squarefree(&p("x - 1").pow(2).mul(&p("x + 2")));
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&(p("x - 1"), 2)) && fs.contains(&(p("x + 2"), 1)));

        let (_, fs) = squarefree(&q("f^2 + f*a - 3*f*b - 3*a*b + b"));
        assert_eq!(fs, alloc::vec![(q("f^2 + f*a - 3*f*b - 3*a*b + b"), 1)]);

        let (c, fs) = squarefree(&p("-6*x^3*y + 6*x^3"));
        assert_eq!(c, Rational::from_integer(-6));
        assert!(fs.contains(&(p("x"), 3)) && fs.contains(&(p("y - 1"), 1)));
    }
}

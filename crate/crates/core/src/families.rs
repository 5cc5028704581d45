//! Parametric families of piecewise-linear functions.
//!
//! Every constructor is generic over the field, so the same code builds a
//! concrete function from rationals or records a constructibility trace from
//! parametric elements. Breakpoint order is checked left to right before any
//! value is computed.

use alloc::vec;

use crate::error::{Error, Result};
use crate::field::OrderedField;
use crate::pwl::Pwl;
use crate::rational::Rational;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn increasing<F: OrderedField>(bkpts: &[F]) -> Result<()> {
    for w in bkpts.windows(2) {
        if !w[0].lt(&w[1]) {
            return Err(Error::NotConstructible);
        }
    }
    Ok(())
}

fn quot<F: OrderedField>(a: &F, b: &F) -> Result<F> {
    a.try_div(b).map_err(|_| Error::NotConstructible)
}

/// The two-piece function with breakpoints `0, f, 1`.
pub fn gmic<F: OrderedField>(f: &F) -> Result<Pwl<F>> {
    let bkpts = vec![f.zero_like(), f.clone(), f.one_like()];
    increasing(&bkpts)?;
    Pwl::from_breakpoints_values(f.clone(), bkpts, vec![f.zero_like(), f.one_like(), f.zero_like()])
}

/// Three-slope function with breakpoints `0, a′, a, b, b′, f, 1` where
/// `a = λ₁f/2`, `a′ = a + λ₂(f−1)/2`, `b = f − a`, `b′ = f − a′`.
pub fn gj_forward_3_slope<F: OrderedField>(f: &F, l1: &F, l2: &F) -> Result<Pwl<F>> {
    let half = r(1, 2);
    let a = l1.mul(f).scale(&half);
    let a1 = a.add(&l2.mul(&f.add_rat(&r(-1, 1))).scale(&half));
    let b = f.sub(&a);
    let b1 = f.sub(&a1);
    let bkpts = vec![f.zero_like(), a1, a, b, b1, f.clone(), f.one_like()];
    increasing(&bkpts)?;
    let l12 = l1.add(l2).scale(&half);
    let one = f.one_like();
    let values = vec![
        f.zero_like(),
        l12.clone(),
        l1.scale(&half),
        one.sub(&l1.scale(&half)),
        one.sub(&l12),
        one,
        f.zero_like(),
    ];
    Pwl::from_breakpoints_values(f.clone(), bkpts, values)
}

/// Three-slope function with breakpoints `0, f, b, 1+f−b, 1`.
pub fn drlm_backward_3_slope<F: OrderedField>(f: &F, b: &F) -> Result<Pwl<F>> {
    let one = f.one_like();
    let c = one.add(f).sub(b);
    let bkpts = vec![f.zero_like(), f.clone(), b.clone(), c.clone(), one.clone()];
    increasing(&bkpts)?;
    let opf = one.add(f);
    let values = vec![f.zero_like(), one.clone(), quot(b, &opf)?, quot(&c, &opf)?, f.zero_like()];
    Pwl::from_breakpoints_values(f.clone(), bkpts, values)
}

/// Four-slope function with ten pieces; breakpoints
/// `0, a′, a, b, b′, f, d′, d, c, c′, 1` and slopes
/// `s⁺, s⁻, 1/f, s⁻, s⁺, s⁻, s⁺, 1/(f−1), s⁺, s⁻`. Values accumulate from `π(0) = 0`.
pub fn chen_4_slope<F: OrderedField>(f: &F, sp: &F, sm: &F, l1: &F, l2: &F) -> Result<Pwl<F>> {
    let one = f.one_like();
    let fm1 = f.add_rat(&r(-1, 1));
    let two_ds = sp.sub(sm).scale(&r(2, 1));
    let a1 = quot(&l1.mul(&one.sub(&sm.mul(f))), &two_ds)?;
    let a = l1.mul(f).scale(&r(1, 2));
    let c = one.sub(&l2.mul(&one.sub(f)).scale(&r(1, 2)));
    let c1 = one.sub(&quot(&l2.mul(&one.sub(&sp.mul(&fm1))), &two_ds)?);
    let b = f.sub(&a);
    let b1 = f.sub(&a1);
    let d = one.add(f).sub(&c);
    let d1 = one.add(f).sub(&c1);
    let bkpts = vec![f.zero_like(), a1, a, b, b1, f.clone(), d1, d, c, c1, one.clone()];
    increasing(&bkpts)?;
    let inv_f = quot(&one, f)?;
    let inv_fm1 = quot(&one, &fm1)?;
    let slopes = [sp, sm, &inv_f, sm, sp, sm, sp, &inv_fm1, sp, sm];
    let mut values = vec![f.zero_like()];
    for i in 0..slopes.len() - 1 {
        let step = slopes[i].mul(&bkpts[i + 1].sub(&bkpts[i]));
        values.push(values[i].add(&step));
    }
    values.push(f.zero_like());
    Pwl::from_breakpoints_values(f.clone(), bkpts, values)
}

fn kzh_1_shape<F: OrderedField>(f: &F, a: &F, b: &F, v: Option<&F>) -> Result<Pwl<F>> {
    let one = f.one_like();
    let half = r(1, 2);
    let bkpts = vec![
        f.zero_like(),
        f.clone(),
        f.add(a),
        one.add(f).sub(b).scale(&half),
        one.add(f).add(b).scale(&half),
        one.sub(a),
        one.clone(),
    ];
    increasing(&bkpts)?;
    let v = match v {
        Some(v) => v.clone(),
        None => {
            let num = f.mul(f).add(&f.mul(a)).sub(&f.mul(b).scale(&r(3, 1))).sub(&a.mul(b).scale(&r(3, 1))).add(b);
            let den = f.mul(f).add(f).sub(&f.mul(b).scale(&r(3, 1)));
            quot(&num, &den)?
        }
    };
    let values = vec![
        f.zero_like(),
        one.clone(),
        v.clone(),
        quot(&f.sub(b).scale(&half), f)?,
        quot(&f.add(b).scale(&half), f)?,
        one.sub(&v),
        f.zero_like(),
    ];
    Pwl::from_breakpoints_values(f.clone(), bkpts, values)
}

/// Breakpoints `0, f, f+a, (1+f−b)/2, (1+f+b)/2, 1−a, 1` with a free value `v` at `f+a`.
pub fn param_3_slope_1<F: OrderedField>(f: &F, a: &F, b: &F, v: &F) -> Result<Pwl<F>> {
    kzh_1_shape(f, a, b, Some(v))
}

/// As [`param_3_slope_1`] with `v = (f²+fa−3fb−3ab+b)/(f²+f−3bf)`.
pub fn kzh_3_slope_param_extreme_1<F: OrderedField>(f: &F, a: &F, b: &F) -> Result<Pwl<F>> {
    kzh_1_shape(f, a, b, None)
}

/// Breakpoints `0, (f−a)/4, (f−a)/2, (f+a)/2, f−(f−a)/4, f, (1+f−b)/2, (1+f+b)/2, 1`
/// with `v = (f(f−a+b−2)−ab+2a)/(4f(f+b−1))`; requires `0 < a < f < 1` and `0 < b < f`.
pub fn kzh_3_slope_param_extreme_2<F: OrderedField>(f: &F, a: &F, b: &F) -> Result<Pwl<F>> {
    let zero = f.zero_like();
    let one = f.one_like();
    let guards = zero.lt(a) && a.lt(f) && f.lt(&one) && zero.lt(b) && b.lt(f);
    if !guards {
        return Err(Error::NotConstructible);
    }
    let half = r(1, 2);
    let quarter = r(1, 4);
    let fma = f.sub(a);
    let bkpts = vec![
        zero.clone(),
        fma.scale(&quarter),
        fma.scale(&half),
        f.add(a).scale(&half),
        f.sub(&fma.scale(&quarter)),
        f.clone(),
        one.add(f).sub(b).scale(&half),
        one.add(f).add(b).scale(&half),
        one.clone(),
    ];
    increasing(&bkpts)?;
    let num = f.mul(&f.sub(a).add(b).add_rat(&r(-2, 1))).sub(&a.mul(b)).add(&a.scale(&r(2, 1)));
    let den = f.add(b).add_rat(&r(-1, 1)).mul(f).scale(&r(4, 1));
    let v = quot(&num, &den)?;
    let values = vec![
        zero.clone(),
        v.clone(),
        quot(&fma.scale(&half), f)?,
        quot(&f.add(a).scale(&half), f)?,
        one.sub(&v),
        one.clone(),
        quot(&f.sub(b).scale(&half), f)?,
        quot(&f.add(b).scale(&half), f)?,
        zero,
    ];
    Pwl::from_breakpoints_values(f.clone(), bkpts, values)
}

/// The implemented families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Gmic,
    GjForward3Slope,
    DrlmBackward3Slope,
    Chen4Slope,
    Param3Slope1,
    Kzh3SlopeParamExtreme1,
    Kzh3SlopeParamExtreme2,
}

/// Name, parameters, and parameter-domain notes of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub domain: &'static str,
}

pub const FAMILIES: [FamilySpec; 7] = [
    FamilySpec { family: Family::Gmic, name: "gmic", params: &["f"], domain: "0 < f < 1" },
    FamilySpec {
        family: Family::GjForward3Slope,
        name: "gj_forward_3_slope",
        params: &["f", "lambda_1", "lambda_2"],
        domain: "constructible when 0 < a' < a < b < b' < f < 1",
    },
    FamilySpec {
        family: Family::DrlmBackward3Slope,
        name: "drlm_backward_3_slope",
        params: &["f", "b"],
        domain: "constructible when 0 < f < b < 1 + f - b < 1",
    },
    FamilySpec {
        family: Family::Chen4Slope,
        name: "chen_4_slope",
        params: &["f", "s_pos", "s_neg", "lambda_1", "lambda_2"],
        domain: "constructible when 0 < a' < a < b < b' < f < d' < d < c < c' < 1",
    },
    FamilySpec {
        family: Family::Param3Slope1,
        name: "param_3_slope_1",
        params: &["f", "a", "b", "v"],
        domain: "constructible when 0 < f < f + a < (1 + f - b)/2 < (1 + f + b)/2 < 1 - a < 1",
    },
    FamilySpec {
        family: Family::Kzh3SlopeParamExtreme1,
        name: "kzh_3_slope_param_extreme_1",
        params: &["f", "a", "b"],
        domain: "constructible when 0 < f < f + a < (1 + f - b)/2 < (1 + f + b)/2 < 1 - a < 1",
    },
    FamilySpec {
        family: Family::Kzh3SlopeParamExtreme2,
        name: "kzh_3_slope_param_extreme_2",
        params: &["f", "a", "b"],
        domain: "constructible when 0 < a < f < 1, 0 < b < f, and breakpoints increase",
    },
];

impl Family {
    pub fn from_name(name: &str) -> Result<Family> {
        FAMILIES
            .iter()
            .find(|s| s.name == name)
            .map(|s| s.family)
            .ok_or_else(|| Error::UnknownFamily(alloc::string::String::from(name)))
    }

    pub fn spec(self) -> &'static FamilySpec {
        FAMILIES.iter().find(|s| s.family == self).unwrap()
    }

    pub fn name(self) -> &'static str {
        self.spec().name
    }

    pub fn params(self) -> &'static [&'static str] {
        self.spec().params
    }

    pub fn construct<F: OrderedField>(self, p: &[F]) -> Result<Pwl<F>> {
        let n = self.params().len();
        if p.len() != n {
            return Err(Error::Arity { expected: n, got: p.len() });
        }
        match self {
            Family::Gmic => gmic(&p[0]),
            Family::GjForward3Slope => gj_forward_3_slope(&p[0], &p[1], &p[2]),
            Family::DrlmBackward3Slope => drlm_backward_3_slope(&p[0], &p[1]),
            Family::Chen4Slope => chen_4_slope(&p[0], &p[1], &p[2], &p[3], &p[4]),
            Family::Param3Slope1 => param_3_slope_1(&p[0], &p[1], &p[2], &p[3]),
            Family::Kzh3SlopeParamExtreme1 => kzh_3_slope_param_extreme_1(&p[0], &p[1], &p[2]),
            Family::Kzh3SlopeParamExtreme2 => kzh_3_slope_param_extreme_2(&p[0], &p[1], &p[2]),
        }
    }

    pub fn all() -> impl Iterator<Item = Family> {
        FAMILIES.iter().map(|s| s.family)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn qs(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| q(s)).collect()
    }

    #[test]
    fn gj_breakpoints() {
        let p = gj_forward_3_slope(&q("4/5"), &q("4/9"), &q("2/3")).unwrap();
        assert_eq!(p.breakpoints(), qs(&["0", "1/9", "8/45", "28/45", "31/45", "4/5", "1"]).as_slice());
        let s_plus = q("10/9") / q("2/9");
        let s_minus = q("1") / q("-1/5");
        let expect = [s_plus.clone(), s_minus.clone(), q("5/4"), s_minus.clone(), s_plus, s_minus];
        assert_eq!(p.slopes(), expect.as_slice());
        assert_eq!(gj_forward_3_slope(&q("4/5"), &q("0"), &q("0")).unwrap_err(), Error::NotConstructible);
    }

    #[test]
    fn drlm_values() {
        let p = drlm_backward_3_slope(&q("1/12"), &q("2/12")).unwrap();
        assert_eq!(p.eval(&q("1/12")), q("1"));
        assert_eq!(p.eval(&q("1/6")), q("2/13"));
        assert!(drlm_backward_3_slope(&q("1/5"), &q("1/4")).is_ok());
        assert_eq!(drlm_backward_3_slope(&q("1/4"), &q("1/5")).unwrap_err(), Error::NotConstructible);
    }

    #[test]
    fn kzh_values() {
        let p = kzh_3_slope_param_extreme_1(&q("6/19"), &q("1/19"), &q("5/19")).unwrap();
        assert_eq!(p.values()[2], q("8/15"));
        let p = kzh_3_slope_param_extreme_2(&q("5/9"), &q("3/9"), &q("2/9")).unwrap();
        assert_eq!(p.values()[1], q("11/20"));
        assert_eq!(
            kzh_3_slope_param_extreme_1(&q("6/19"), &q("10/19"), &q("5/19")).unwrap_err(),
            Error::NotConstructible
        );
    }

    #[test]
    fn chen_instances_are_constructible_and_continuous() {
        for ps in [["7/10", "2", "-4", "1/100", "49/100"], ["7/10", "2", "-4", "1/10", "1/10"]] {
            let ps = qs(&ps);
            let p = Family::Chen4Slope.construct(&ps).unwrap();
            assert_eq!(p.pieces(), 10);
            // The accumulated value at 1 vanishes, so the last slope is s⁻.
            assert_eq!(p.slopes()[9], ps[2]);
            assert_eq!(p.eval(p.f()), q("1"));
        }
    }

    #[test]
    fn names_round_trip() {
        for fam in Family::all() {
            assert_eq!(Family::from_name(fam.name()).unwrap(), fam);
        }
        assert!(Family::from_name("nope").is_err());
    }
}

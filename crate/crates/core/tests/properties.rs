use cgf_core::bfs::{classify, sample_cell_points, SliceSpec, Stage};
use cgf_core::cell::linearize;
use cgf_core::factor::{canonical, div_exact, gcd, squarefree};
use cgf_core::families::drlm_backward_3_slope;
use cgf_core::gj::delta_pi;
use cgf_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rat() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=9).prop_map(|(n, d)| Rational::new(n, d))
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u16..=2, 0u16..=2, 0u16..=1), rat()), 1..5).prop_map(|terms| {
        MultiPoly::from_terms(3, terms.into_iter().map(|((a, b, c), k)| (Monomial::from_exponents(&[a, b, c]), k)))
    })
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rat(), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distributivity(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn evaluation_is_a_ring_map(a in poly(), b in poly(), x in point()) {
        prop_assert_eq!(a.mul(&b).eval(&x), a.eval(&x) * b.eval(&x));
        prop_assert_eq!(a.add(&b).eval(&x), a.eval(&x) + b.eval(&x));
    }

    #[test]
    fn gcd_divides_and_keeps_common_factor(a in poly(), b in poly(), c in poly()) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let (ac, bc) = (a.mul(&c), b.mul(&c));
        let g = gcd(&ac, &bc);
        prop_assert!(div_exact(&ac, &g).is_some());
        prop_assert!(div_exact(&bc, &g).is_some());
        prop_assert!(div_exact(&g, &canonical(&c)).is_some());
    }

    #[test]
    fn squarefree_reassembles(a in poly(), b in poly()) {
        let p = a.mul(&a).mul(&b);
        prop_assume!(!p.is_zero());
        let (unit, parts) = squarefree(&p);
        let mut back = MultiPoly::constant(3, unit);
        for (f, e) in &parts {
            back = back.mul(&f.pow(*e));
            prop_assert!(!f.is_constant());
        }
        prop_assert_eq!(back, p);
    }

    #[test]
    fn approximation_respects_denominator(n in -10_000i64..10_000, d in 1i64..10_000, bound in 1u64..200) {
        let x = Rational::new(n, d);
        let a = x.approximate(bound);
        prop_assert!(a.denom() <= num_bigint::BigInt::from(bound));
        let f = x.to_f64();
        prop_assert_eq!(Rational::from_f64(f).unwrap().to_f64(), f);
    }

    #[test]
    fn delta_is_symmetric(xn in 0i64..60, yn in 0i64..60) {
        let q = |s: &str| -> Rational { s.parse().unwrap() };
        let pi = drlm_backward_3_slope(&q("1/12"), &q("1/7")).unwrap();
        let (x, y) = (Rational::new(xn, 60), Rational::new(yn, 60));
        prop_assert_eq!(delta_pi(&pi, &x, &y), delta_pi(&pi, &y, &x));
    }

    #[test]
    fn lifting_preserves_membership(ps in prop::collection::vec(poly(), 1..4), x in point()) {
        let atoms: Vec<Atom> = ps.iter().filter(|p| !p.is_constant()).map(|p| Atom::new(p, Rel::Lt)).collect();
        prop_assume!(!atoms.is_empty());
        let mut map = MonomialMap::new(3);
        let lin = linearize(&atoms, &mut map);
        let direct = atoms.iter().all(|a| a.holds_at(&x));
        prop_assert_eq!(lin.holds_at(&map.lift(&x)), direct);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// Any point of a cell replays the same branches: same reduced cell and
    /// verdict, and the concrete run agrees.
    #[test]
    fn parametric_replay(seed in 0u64..1_000, which in 0usize..3) {
        let q = |s: &str| -> Rational { s.parse().unwrap() };
        let (spec, point) = match which {
            0 => (
                SliceSpec::new(Family::DrlmBackward3Slope, &[], &[("f", q("0"), q("1")), ("b", q("0"), q("1"))]).unwrap(),
                vec![q("1/12"), q("1/7")],
            ),
            1 => (
                SliceSpec::new(Family::GjForward3Slope, &[("f", q("4/5"))], &[("lambda_1", q("0"), q("1")), ("lambda_2", q("0"), q("1"))]).unwrap(),
                vec![q("4/9"), q("2/3")],
            ),
            _ => (
                SliceSpec::new(Family::Kzh3SlopeParamExtreme1, &[], &[("f", q("0"), q("1")), ("a", q("0"), q("1")), ("b", q("0"), q("1"))]).unwrap(),
                vec![q("6/19"), q("1/19"), q("5/19")],
            ),
        };
        let mut map = MonomialMap::new(spec.dim());
        let cell = classify(&spec, &point, Stage::Extreme, &mut map).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for p in sample_cell_points(&spec, &cell, 3, &mut rng) {
            let again = classify(&spec, &p, Stage::Extreme, &mut map).unwrap();
            prop_assert_eq!(&again.atoms, &cell.atoms);
            prop_assert_eq!(again.verdict, cell.verdict);
            let concrete = cgf_core::bfs::concrete_verdict(spec.family, &spec.full_point(&p), Stage::Extreme).unwrap();
            prop_assert_eq!(concrete, cell.verdict);
        }
    }
}

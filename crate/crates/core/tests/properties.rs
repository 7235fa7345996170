mod common;

use std::cmp::Ordering;
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rplaces::balls::{between_ball, CutComplementSpec};
use rplaces::cli::syntax::parse_expr;
use rplaces::cuts::{cut_cmp, equivalent, find_between, restrict, Position};
use rplaces::ordfield::Field;
use rplaces::places::{eval_place, stacked_place, PlaceValue};
use rplaces::quad::Quad;
use rplaces::ratfun::RatFun;
use rplaces::sampling::Sampler;
use rplaces::valgroup::{GroupCut, Subgroup, ValueGroup};

use common::*;

fn lex2() -> Arc<Field> {
    Field::hahn(None, ValueGroup::lex(2))
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn field_axioms(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let f = Field::hahn(Some(5), ValueGroup::lex(2));
        let (a, b, c) = (s.element(&f, 3), s.element(&f, 3), s.element(&f, 3));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert_eq!(a.try_mul(&a.inv().unwrap()).unwrap(), f.one());
        }
    }

    #[test]
    fn order_is_compatible_with_addition(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let f = lex2();
        let (a, b, c) = (s.element(&f, 3), s.element(&f, 3), s.element(&f, 3));
        prop_assert_eq!(a.cmp_field(&b), (&a + &c).cmp_field(&(&b + &c)));
        if c.is_positive() {
            prop_assert_eq!(a.cmp_field(&b), (&a * &c).cmp_field(&(&b * &c)));
        }
    }

    #[test]
    fn expand_matches_long_division(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let f = Field::hahn(None, ValueGroup::lex(1));
        let n = s.polynomial_element(&f, 3);
        let d = s.nonzero_element(&f, 1);
        let d = if d.den().len() == 1 && d.den().terms()[0].0.is_zero() { d } else { f.one() };
        let x = n.checked_div(&d).unwrap();
        let cutoff = ge(&[3]);
        let (got, rest) = x.expand(&cutoff, 512).unwrap();
        let (want, want_rest) = long_division(&series(&n), &series(&d), cutoff.coords(), 512);
        let got: Series = got.terms().iter().map(|(e, c)| (e.coords().to_vec(), c.clone())).collect();
        prop_assert_eq!(got, want);
        prop_assert_eq!(rest, want_rest);
    }

    #[test]
    fn parser_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&mut rng, 5);
        let text = e.to_string();
        prop_assert_eq!(parse_expr(&text).unwrap(), e);
    }

    #[test]
    fn ball_is_convex(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let f = lex2();
        let b = s.proper_ball(&f).unwrap();
        let a = b.center().clone();
        let other = b.with_center(&a).unwrap();
        prop_assert!(other.ball_eq(&b));
        let c = s.polynomial_element(&f, 3);
        let x = &a + &c;
        // v(a - x) = v(c): membership is decided by the radius alone
        let inside = match c.valuation() {
            None => true,
            Some(v) => !lex_below(b.radius(), &v),
        };
        prop_assert_eq!(b.contains(&x).unwrap(), inside);
    }

    #[test]
    fn cut_order_matches_sides(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let f = lex2();
        let c1 = s.cut(&f).unwrap();
        let c2 = s.cut(&f).unwrap();
        let o = cut_cmp(&c1, &c2).unwrap();
        prop_assert_eq!(cut_cmp(&c2, &c1).unwrap(), o.reverse());
        if o == Ordering::Less {
            let a = find_between(&c1, &c2).unwrap();
            prop_assert_eq!(c1.side_of(&a).unwrap(), Position::Above);
            prop_assert_eq!(c2.side_of(&a).unwrap(), Position::Below);
        }
        for _ in 0..5 {
            let x = s.element(&f, 2);
            if c1.side_of(&x).unwrap() == Position::Above && c2.side_of(&x).unwrap() == Position::Below {
                prop_assert_eq!(o, Ordering::Less);
            }
        }
    }

    #[test]
    fn restriction_preserves_order_and_equivalence(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let f = lex2();
        let r = f.subfield(None, Subgroup::new(vec![1])).unwrap();
        let c1 = s.cut(&f).unwrap();
        let c2 = s.cut(&f).unwrap();
        let (r1, r2) = (restrict(&c1, &r).unwrap(), restrict(&c2, &r).unwrap());
        let o = cut_cmp(&c1, &c2).unwrap();
        let ro = cut_cmp(&r1, &r2).unwrap();
        prop_assert!(ro == o || ro == Ordering::Equal);
        if equivalent(&c1, &c2).unwrap() {
            prop_assert!(equivalent(&r1, &r2).unwrap());
        }
    }

    #[test]
    fn between_ball_ignores_the_filler(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let f = lex2();
        let r = f.subfield(None, Subgroup::new(vec![1])).unwrap();
        let b0 = s.proper_ball(&r).unwrap();
        let comp = CutComplementSpec::BallComplement(b0.clone());
        let a = b0.center().lift(&f).unwrap();
        let first = between_ball(&comp, &f, &a).unwrap();
        let tail = f.t(ge(&[1, 0])).unwrap();
        let second = between_ball(&comp, &f, &(&a + &tail)).unwrap();
        prop_assert!(first.ball_eq(&second));
    }

    #[test]
    fn evaluation_is_multiplicative(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let vars = vec!["x".to_string(), "y".to_string()];
        let a = Quad::from_rational(s.rational(3, 2));
        let b = Quad::from_rational(s.rational(3, 2));
        let p = stacked_place(&vars, &[a, b], &vars).unwrap();
        let k = p.base().clone();
        let f: RatFun = s.ratfun(&k, &vars, 2).unwrap();
        let g: RatFun = s.ratfun(&k, &vars, 2).unwrap();
        let vf = eval_place(&p, &f).unwrap().value;
        let vg = eval_place(&p, &g).unwrap().value;
        let vfg = eval_place(&p, &f.mul(&g).unwrap()).unwrap().value;
        let vsum = eval_place(&p, &f.add(&g).unwrap()).unwrap().value;
        if let (PlaceValue::Finite(x), PlaceValue::Finite(y)) = (&vf, &vg) {
            prop_assert_eq!(vfg, PlaceValue::Finite(x.clone() * y.clone()));
            prop_assert_eq!(vsum, PlaceValue::Finite(x.clone() + y.clone()));
        }
    }

    #[test]
    fn group_cut_text_round_trip(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let f = Field::hahn(None, ValueGroup::lex(3));
        let c = s.group_cut(&f, 3);
        let text = c.to_string();
        let mut p = rplaces::cli::syntax::Parser::new(&text).unwrap();
        let back: GroupCut = p.group_cut().unwrap();
        prop_assert_eq!(back, c);
    }
}

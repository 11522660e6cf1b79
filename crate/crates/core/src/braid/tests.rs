use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::irq::verify_distributivity;
use crate::model::Model;
use crate::models::*;
use crate::scale::{Scale, Schedule};
use crate::Rational;

fn half() -> Scale {
    Scale::from_ints(1, 2).unwrap()
}

fn w(src: &str) -> BraidWord {
    BraidWord::parse(src).unwrap()
}

fn inputs<M: Model>(m: &M, strands: usize, n: usize, seed: u64) -> Vec<Vec<M::Point>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (0..strands).map(|_| m.sample_point(&mut rng)).collect()).collect()
}

#[test]
fn parse_and_print() {
    let b = w("braid n=3: s1+{1/2} s2+{1/2} s1+{1/2}");
    assert_eq!(b.strands(), 3);
    assert_eq!(b.len(), 3);
    assert_eq!(b.to_string(), "braid n=3: s1+{1/2} s2+{1/2} s1+{1/2}");
    assert_eq!(w(&b.to_string()), b);
    assert_eq!(w("s1-{t^2}s2+{t}").strands(), 3);
    assert_eq!(w("s1-{t^2}").crossings()[0], Crossing::negative(1, Scale::Power(2)));
    assert_eq!(w("braid n=4:").strands(), 4);
}

#[test]
fn parse_errors() {
    let e = BraidWord::parse("s1+{1/2} x2").unwrap_err();
    assert!(matches!(e, BraidError::Parse(ref p) if p.column == 10), "{e:?}");
    let e = BraidWord::parse("s1*{1/2}").unwrap_err();
    assert!(matches!(e, BraidError::Parse(ref p) if p.column == 3), "{e:?}");
    assert!(matches!(BraidWord::parse("s1+{-1}"), Err(BraidError::Parse(_))));
    assert!(matches!(BraidWord::parse("s0+{1}"), Err(BraidError::Parse(_))));
    assert!(matches!(
        BraidWord::parse("braid n=2: s2+{1/2}"),
        Err(BraidError::Position { position: 2, strands: 2 })
    ));
}

#[test]
fn crossing_actions() {
    let m = AffineModel::<Rational>::new(1);
    let b = w("s1+{1/2}");
    let out = color(&m, &b, &[m.point(&[0]), m.point(&[4])]).unwrap();
    assert_eq!(out, vec![m.point(&[2]), m.point(&[0])]);
    let b = w("s1-{1/2}");
    let out = color(&m, &b, &[m.point(&[0]), m.point(&[4])]).unwrap();
    // 4 •_{1/2} 0 = 4 + 2(0 - 4)
    assert_eq!(out, vec![m.point(&[4]), m.point(&[-4])]);
    assert!(matches!(
        color(&m, &b, &[m.point(&[0])]),
        Err(BraidError::LengthMismatch { expected: 2, got: 1 })
    ));
}

#[test]
fn moves_check_decorations() {
    let b = w("s1+{1/2} s1-{1/2} s2+{1/3}");
    let c = apply_move(&b, &Move::R2Cancel, 0).unwrap();
    assert_eq!(c, w("braid n=3: s2+{1/3}"));
    let e = apply_move(&w("s1+{1/2} s1-{1/3}"), &Move::R2Cancel, 0).unwrap_err();
    assert!(e.to_string().contains("R2 cancel at index 0 expects"), "{e}");

    let ins = Move::R2Insert { position: 2, sign: Sign::Negative, scale: half() };
    assert_eq!(apply_move(&c, &ins, 1).unwrap(), w("braid n=3: s2+{1/3} s2-{1/2} s2+{1/2}"));
    assert!(apply_move(&c, &ins, 5).is_err());

    let r3 = w("s1+{1/2} s2+{1/2} s1+{1/2}");
    let shifted = apply_move(&r3, &Move::R3Shift, 0).unwrap();
    assert_eq!(shifted, w("braid n=3: s2+{1/2} s1+{1/2} s2+{1/2}"));
    assert_eq!(apply_move(&shifted, &Move::R3Shift, 0).unwrap(), r3);
    assert!(is_r3_pair(&r3, &shifted));
    let e = apply_move(&w("s1+{1/2} s2+{1/3} s1+{1/2}"), &Move::R3Shift, 0).unwrap_err();
    assert!(e.to_string().contains("same sign and scale"), "{e}");
    assert!(apply_move(&w("s1+{1/2} s2-{1/2} s1+{1/2}"), &Move::R3Shift, 0).is_err());
    assert_eq!(find_move(&w("braid n=4: s3+{t} s1+{t} s2+{t} s1+{t}"), &Move::R3Shift), Some(1));
}

fn r2_invariant<M: Model>(m: &M, b: &BraidWord, seed: u64) {
    let id = b.then(&b.inverse()).unwrap();
    let back = b.inverse().then(b).unwrap();
    for input in inputs(m, b.strands(), 5, seed) {
        assert_eq!(color(m, &id, &input).unwrap(), input, "{}", m.name());
        assert_eq!(color(m, &back, &input).unwrap(), input, "{}", m.name());
    }
}

#[test]
fn r2_invariance_in_exact_models() {
    let ratio = w("braid n=3: s1+{1/2} s2-{3/7} s1-{5/3} s2+{2}");
    let power = w("braid n=3: s1+{t} s2-{t^-2} s1-{t^3} s2+{t}");
    r2_invariant(&AffineModel::<Rational>::new(2), &ratio, 1);
    r2_invariant(&HeisenbergModel::<Rational>::graded(), &ratio, 2);
    r2_invariant(&HeisenbergModel::<Rational>::isotropic(), &ratio, 3);
    r2_invariant(&AlexanderModel::new(), &power, 4);
    r2_invariant(&ContractibleModel::new(3), &power, 5);
}

fn granularities_agree<M: Model>(m: &M, b: &BraidWord, x: &M::Point, e: Scale) {
    let spec = EncircleSpec::new(x.clone(), e);
    for input in inputs(m, b.strands(), 5, 6) {
        let whole = encircle(m, b, &spec, &input).unwrap();
        let each = encircle(m, b, &spec.clone().per_crossing(), &input).unwrap();
        assert_eq!(whole, each, "{}", m.name());
    }
}

#[test]
fn encircling_granularities_agree() {
    let ratio = w("braid n=3: s1+{1/2} s2-{3/7} s1-{5/3} s2+{2}");
    let power = w("braid n=3: s1+{t} s2-{t^-2} s1-{t^3}");
    let a = AffineModel::<Rational>::new(2);
    granularities_agree(&a, &ratio, &a.point(&[1, -1]), Scale::from_ints(2, 9).unwrap());
    let h = HeisenbergModel::<Rational>::graded();
    granularities_agree(&h, &ratio, &HeisPoint::from_ints(1, 2, -1), half());
    granularities_agree(&AlexanderModel::new(), &power, &LaurentPoly::t(), Scale::Power(2));
    let c = ContractibleModel::new(3);
    granularities_agree(&c, &power, &c.origin(), Scale::Power(1));
}

#[test]
fn affine_encircled_equals_plain() {
    let m = AffineModel::<Rational>::new(2);
    let b = w("braid n=3: s1+{1/2} s2-{3/7} s1+{5/3}");
    let spec = EncircleSpec::new(m.point(&[3, -2]), Scale::from_ints(1, 8).unwrap());
    for input in inputs(&m, 3, 5, 7) {
        assert_eq!(encircle(&m, &b, &spec, &input).unwrap(), color(&m, &b, &input).unwrap());
    }
}

#[test]
fn alexander_r3_and_evaluation() {
    let alex = AlexanderModel::new();
    let b1 = w("braid n=3: s1+{t} s2+{t} s1+{t}");
    let b2 = apply_move(&b1, &Move::R3Shift, 0).unwrap();
    let affine = AffineModel::<Rational>::new(1);
    let half_q = Rational::new(1.into(), 2.into());
    let evaluated = |w: &BraidWord| {
        let cs = w
            .crossings()
            .iter()
            .map(|c| Crossing::new(c.position, c.sign, Scale::ratio(c.scale.abs_value()).unwrap()))
            .collect();
        BraidWord::new(w.strands(), cs).unwrap()
    };
    for input in inputs(&alex, 3, 10, 8) {
        let c1 = color(&alex, &b1, &input).unwrap();
        let c2 = color(&alex, &b2, &input).unwrap();
        assert_eq!(coloring_defect(&alex, &c1, &c2).unwrap(), 0.0);
        let at_half: Vec<Vec<Rational>> = input.iter().map(|p| vec![p.scale_eval(&half_q)]).collect();
        let plain = color(&affine, &evaluated(&b1), &at_half).unwrap();
        let via = c1.iter().map(|p| vec![p.scale_eval(&half_q)]).collect::<Vec<_>>();
        assert_eq!(plain, via);
    }
}

#[test]
fn curved_r3_defect_decays() {
    let m = CurvedModel::new(2);
    let b1 = w("braid n=3: s1+{1/2} s2+{1/2} s1+{1/2}");
    let b2 = apply_move(&b1, &Move::R3Shift, 0).unwrap();
    let ins = inputs(&m, 3, 6, 9);
    let plain = ins
        .iter()
        .map(|i| coloring_defect(&m, &color(&m, &b1, i).unwrap(), &color(&m, &b2, i).unwrap()).unwrap())
        .fold(0.0, f64::max);
    assert!(plain > 1e-4, "{plain}");
    let r = r3_defect_sweep(&m, &b1, &b2, &vec![0.1, 0.2], &Schedule::dyadic(1, 12), &ins).unwrap();
    assert!(r.pass, "{r:?}");
    assert!(r.rate.unwrap() >= 0.9);
    assert!(r3_defect_sweep(&m, &b1, &b1, &vec![0.0, 0.0], &Schedule::dyadic(1, 12), &ins).is_err());
    let c = ContractibleModel::new(3);
    let pw = w("braid n=3: s1+{t} s2+{t} s1+{t}");
    let pw2 = apply_move(&pw, &Move::R3Shift, 0).unwrap();
    let err = r3_defect_sweep(&c, &pw, &pw2, &c.origin(), &Schedule::powers(1, 8), &inputs(&c, 3, 2, 1)).unwrap_err();
    assert!(matches!(err, BraidError::Model(crate::ModelError::NoMetric(_))));
}

/// R3 invariance of plain colorings holds exactly when the crossing operation
/// is self-distributive.
fn r3_iff_distributive<M: Model>(m: &M, lambda: Scale) {
    let b1 = BraidWord::new(3, vec![Crossing::positive(1, lambda.clone()), Crossing::positive(2, lambda.clone()), Crossing::positive(1, lambda.clone())]).unwrap();
    let b2 = apply_move(&b1, &Move::R3Shift, 0).unwrap();
    let r3 = inputs(m, 3, 40, 10)
        .iter()
        .map(|i| {
            let (c1, c2) = (color(m, &b1, i).unwrap(), color(m, &b2, i).unwrap());
            c1.iter().zip(&c2).map(|(p, q)| m.discrepancy(p, q)).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    let dist = verify_distributivity(m, &lambda, &lambda, 40, 10).unwrap();
    let tol = m.law_tolerance();
    assert_eq!(r3 <= tol, dist.pass, "{}: r3 {r3}, distributivity {}", m.name(), dist.max_residual());
}

#[test]
fn r3_invariance_matches_distributivity() {
    r3_iff_distributive(&AffineModel::<Rational>::new(2), half());
    r3_iff_distributive(&AffineModel::<f64>::new(2), half());
    r3_iff_distributive(&HeisenbergModel::<Rational>::graded(), half());
    r3_iff_distributive(&HeisenbergModel::<Rational>::isotropic(), half());
    r3_iff_distributive(&WarpedModel::new(2), half());
    r3_iff_distributive(&CurvedModel::new(2), half());
    r3_iff_distributive(&AlexanderModel::new(), Scale::Power(1));
    r3_iff_distributive(&ContractibleModel::new(3), Scale::Power(1));
}

fn arb_word() -> impl Strategy<Value = BraidWord> {
    let scale = prop_oneof![Just(half()), Just(Scale::from_ints(3, 7).unwrap()), Just(Scale::from_ints(5, 3).unwrap())];
    let crossing = (1usize..=3, any::<bool>(), scale)
        .prop_map(|(p, s, e)| Crossing::new(p, if s { Sign::Positive } else { Sign::Negative }, e));
    prop::collection::vec(crossing, 0..8).prop_map(|cs| BraidWord::new(4, cs).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_round_trip(b in arb_word()) {
        prop_assert_eq!(BraidWord::parse(&b.to_string()).unwrap(), b);
    }

    #[test]
    fn r2_moves_preserve_colorings(b in arb_word(), at in 0usize..8, pos in 1usize..=3, seed in 0u64..500) {
        let m = HeisenbergModel::<Rational>::graded();
        let at = at.min(b.len());
        let ins = Move::R2Insert { position: pos, sign: Sign::Negative, scale: half() };
        let bigger = apply_move(&b, &ins, at).unwrap();
        prop_assert_eq!(apply_move(&bigger, &Move::R2Cancel, at).unwrap(), b.clone());
        for input in inputs(&m, 4, 2, seed) {
            prop_assert_eq!(color(&m, &bigger, &input).unwrap(), color(&m, &b, &input).unwrap());
        }
    }

    #[test]
    fn encircling_is_conjugation(b in arb_word(), seed in 0u64..500) {
        let m = HeisenbergModel::<Rational>::isotropic();
        let spec = EncircleSpec::new(HeisPoint::from_ints(1, 1, 0), Scale::from_ints(1, 3).unwrap());
        for input in inputs(&m, 4, 2, seed) {
            prop_assert_eq!(
                encircle(&m, &b, &spec, &input).unwrap(),
                encircle(&m, &b, &spec.clone().per_crossing(), &input).unwrap()
            );
        }
    }
}

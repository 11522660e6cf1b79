use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::builtin::difference_t;
use super::*;
use super::rewrite::Strategy as RwStrategy;
use proptest::strategy::Strategy;
use crate::model::Model;
use crate::models::*;
use crate::scale::Scale;
use crate::Rational;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn lit(n: i64, d: i64) -> ScaleExpr {
    ScaleExpr::literal(q(n, d)).unwrap()
}

fn t(src: &str) -> Term {
    parse_term(src).unwrap()
}

#[test]
fn fusion_of_literals() {
    let (n, trace) = normalize(&t("o{1/2}(x, o{1/3}(x, y))"));
    assert_eq!(n, Term::dil(lit(1, 6), Term::var("x"), Term::var("y")));
    assert_eq!(trace.rules_used(), vec![Rule::Fusion]);
}

#[test]
fn idempotence_collapses() {
    assert_eq!(normalize(&t("o{e}(x, x)")).0, Term::var("x"));
    assert_eq!(normalize(&t("o{1}(x, y)")).0, Term::var("y"));
    assert_eq!(normalize(&t("b{e}(x, o{e}(x, y))")).0, Term::var("y"));
}

#[test]
fn builtins() {
    let ids = builtin_identities();
    assert_eq!(ids.len(), 7);
    let f = &ids[5];
    let e = ScaleExpr::var("e");
    assert_eq!(f.rhs, difference_t(Term::var("x"), &e, Term::var("u"), Term::var("x")));
    for id in &ids {
        let p = prove_identity(id);
        assert!(p.success(), "{}: {} vs {}", id.label, p.lhs_normal, p.rhs_normal);
        assert_eq!(p.lhs_trace.replay().unwrap(), p.lhs_normal);
        assert_eq!(p.rhs_trace.replay().unwrap(), p.rhs_normal);
    }
}

#[test]
fn sum_after_difference_normalizes_to_v() {
    let b = &builtin_identities()[1];
    assert_eq!(normalize(&b.lhs).0, Term::var("v"));
}

#[test]
fn neutral_element_uses_idempotence_before_unit() {
    let g = &builtin_identities()[6];
    let rules = prove_identity(g).lhs_trace.rules_used();
    let idem = rules.iter().position(|r| *r == Rule::Idem).expect("IDEM used");
    let unit = rules.iter().rposition(|r| *r == Rule::Unit).expect("UNIT used");
    assert!(idem < unit, "{rules:?}");
}

#[test]
fn associativity_proves() {
    let e = &builtin_identities()[4];
    let p = prove_identity(e);
    assert_eq!(p.verdict, Verdict::Success);
    assert!(!p.lhs_trace.steps.is_empty());
}

#[test]
fn commutativity_fails_with_counterexample() {
    let id = Identity::parse("comm: o{e}(x, y) = o{e}(y, x)").unwrap();
    assert_eq!(id.label, "comm");
    let p = prove_identity(&id);
    assert_eq!(p.verdict, Verdict::Fail);
    let c = p.counterexample.expect("counterexample");
    assert_ne!(c.lhs, c.rhs);
    assert!(c.scales.contains_key("e"));
}

#[test]
fn true_but_unprovable_identity_reports_no_counterexample() {
    // Self-distributivity holds in the affine plane but is not a rewrite rule.
    let id = Identity::parse("o{e}(x, o{m}(y, z)) = o{m}(o{e}(x, y), o{e}(x, z))").unwrap();
    let p = prove_identity(&id);
    assert_eq!(p.verdict, Verdict::Fail);
    assert!(p.counterexample.is_none());
    assert_eq!(p.note.as_deref(), Some("no counterexample found in 100 trials"));
}

#[test]
fn fusion_identity_from_text() {
    let id = Identity::parse("o{e}(x, o{m}(x, y)) = o{e*m}(x, y)").unwrap();
    assert!(prove_identity(&id).success());
    assert_eq!(id.vars, vec!["x", "y"]);
    assert_eq!(id.scale_vars, vec!["e", "m"]);
}

#[test]
fn identity_files() {
    let src = "# gate laws\nunit: o{1}(x,y) = y\n\nidem: o{e}(x,x) = x  # trailing\n";
    let ids = Identity::parse_many(src).unwrap();
    assert_eq!(ids.len(), 2);
    let err = Identity::parse_many("a: x = x\nb: o{e}(x = y\n").unwrap_err();
    assert_eq!(err.line, Some(2));
    assert!(Identity::parse("o{e}(x,y)").is_err());
    assert!(Identity::parse("x = y = z").is_err());
}

#[test]
fn replay_detects_tampering() {
    let (_, mut trace) = normalize(&t("o{e}(x, o{m}(x, o{e^-1 m^-1}(x, y)))"));
    assert_eq!(trace.replay().unwrap(), Term::var("y"));
    trace.steps[0].rule = Rule::Idem;
    assert!(trace.replay().is_err());
}

#[test]
fn critical_pairs_join() {
    for src in [
        "o{1}(x, o{m}(x, y))",
        "o{e}(x, o{m}(x, x))",
        "o{e}(x, o{e^-1}(x, y))",
        "o{e}(o{m}(x, x), o{m}(x, x))",
        "o{e}(x, o{m}(x, o{n}(x, o{p}(x, o{q}(x, y)))))",
        "o{e}(x, o{e^-1}(x, o{m}(x, o{m^-1}(x, o{1/2}(x, y)))))",
    ] {
        let term = t(src);
        let (a, _) = normalize_with(&term, RwStrategy::Innermost);
        let (b, _) = normalize_with(&term, RwStrategy::Outermost);
        assert_eq!(a, b, "{src}");
    }
}

fn arb_scale() -> impl Strategy<Value = ScaleExpr> {
    prop_oneof![
        Just(ScaleExpr::var("e")),
        Just(ScaleExpr::var_pow("e", -1)),
        Just(ScaleExpr::var("m")),
        Just(ScaleExpr::one()),
        Just(lit(1, 2)),
        Just(lit(2, 1)),
    ]
}

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::var("x")), Just(Term::var("y")), Just(Term::var("z"))];
    leaf.prop_recursive(5, 48, 2, |inner| {
        (arb_scale(), inner.clone(), inner).prop_map(|(s, b, a)| Term::dil(s, b, a))
    })
}

/// Fusion chains over a shared base, the shape that drives every overlap.
fn arb_chain() -> impl Strategy<Value = Term> {
    (prop::collection::vec(arb_scale(), 1..=5), prop_oneof![Just("x"), Just("y")]).prop_map(|(scales, leaf)| {
        scales
            .into_iter()
            .rev()
            .fold(Term::var(leaf), |acc, s| Term::dil(s, Term::var("x"), acc))
    })
}

fn sample_env<M: Model, R: rand::Rng>(m: &M, rng: &mut R, scales: &[Scale]) -> (BTreeMap<String, M::Point>, BTreeMap<String, Scale>) {
    let pts = ["x", "y", "z"].iter().map(|v| (v.to_string(), m.sample_point(rng))).collect();
    let sc = ["e", "m"].iter().zip(scales).map(|(v, s)| (v.to_string(), s.clone())).collect();
    (pts, sc)
}

fn steps_are_sound<M: Model>(m: &M, trace: &DerivationTrace, scales: &[Scale], seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (pts, sc) = sample_env(m, &mut rng, scales);
    for s in &trace.steps {
        let before = eval(m, &s.before, &pts, &sc);
        let after = eval(m, &s.after, &pts, &sc);
        prop_assert_eq!(before.ok(), after.ok(), "{} at {:?}", s.rule, s.path);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn strategies_agree(term in arb_term()) {
        let (a, _) = normalize_with(&term, RwStrategy::Innermost);
        let (b, _) = normalize_with(&term, RwStrategy::Outermost);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn chains_agree(term in arb_chain()) {
        let (a, _) = normalize_with(&term, RwStrategy::Innermost);
        let (b, _) = normalize_with(&term, RwStrategy::Outermost);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn measure_strictly_decreases(term in arb_term()) {
        let (n, trace) = normalize(&term);
        for s in &trace.steps {
            prop_assert!(s.after.measure() < s.before.measure());
        }
        prop_assert!(rewrite::is_normal(&n));
        prop_assert_eq!(trace.replay().unwrap(), n);
    }

    #[test]
    fn print_parse_round_trip(term in arb_term()) {
        prop_assert_eq!(parse_term(&term.to_string()).unwrap(), term);
    }

    #[test]
    fn rewriting_is_sound(term in arb_term(), seed in 0u64..1000) {
        let (_, trace) = normalize(&term);
        let ratio = [Scale::from_ints(2, 3).unwrap(), Scale::from_ints(5, 2).unwrap()];
        steps_are_sound(&AffineModel::<Rational>::new(2), &trace, &ratio, seed)?;
        steps_are_sound(&HeisenbergModel::<Rational>::graded(), &trace, &ratio, seed)?;
        steps_are_sound(&HeisenbergModel::<Rational>::isotropic(), &trace, &ratio, seed)?;
    }
}

/// Terms with only variable scales, so they can be read in the power-scale models.
fn power_only(term: &Term) -> bool {
    match term {
        Term::Var(_) => true,
        Term::Dil { scale, base, arg } => {
            num_traits::One::is_one(scale.literal_part()) && power_only(base) && power_only(arg)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rewriting_is_sound_in_power_models(term in arb_term(), seed in 0u64..1000) {
        prop_assume!(power_only(&term));
        let (_, trace) = normalize(&term);
        let pw = [Scale::Power(1), Scale::Power(-2)];
        steps_are_sound(&AlexanderModel::new(), &trace, &pw, seed)?;
        steps_are_sound(&ContractibleModel::new(3), &trace, &pw, seed)?;
    }
}

#[test]
fn proved_identities_have_zero_residual_everywhere() {
    fn check<M: Model>(m: &M, e: &Scale) {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for id in builtin_identities() {
            assert!(prove_identity(&id).success());
            for _ in 0..25 {
                let pts: BTreeMap<_, _> = id.vars.iter().map(|v| (v.clone(), m.sample_point(&mut rng))).collect();
                let sc = BTreeMap::from([("e".to_string(), e.clone())]);
                let l = eval(m, &id.lhs, &pts, &sc).unwrap();
                let r = eval(m, &id.rhs, &pts, &sc).unwrap();
                assert_eq!(m.discrepancy(&l, &r), 0.0, "{} in {}", id.label, m.name());
            }
        }
    }
    check(&AffineModel::<Rational>::new(2), &Scale::from_ints(3, 7).unwrap());
    check(&HeisenbergModel::<Rational>::graded(), &Scale::from_ints(1, 4).unwrap());
    check(&HeisenbergModel::<Rational>::isotropic(), &Scale::from_ints(5, 3).unwrap());
    check(&ContractibleModel::new(3), &Scale::Power(2));
    check(&AlexanderModel::new(), &Scale::Power(-1));
}

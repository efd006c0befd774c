//! Acceptance suite: one test per shipped guarantee, each printing a
//! pass line with its runtime (visible with `--nocapture`). Run with
//!
//! ```text
//! cargo test -p bdikit --test acceptance
//! ```

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use bdikit::deliberate::{
    check_theorem1, deliberate, intention_formulas, pw_deliberate, Procedure,
};
use bdikit::gen::{random_tree, with_transformed_payoffs, TreeClass};
use bdikit::logic::{desugar, parse_state_formula};
use bdikit::transform::{enumerate_assignments, transform};
use bdikit::verify::run_trial;
use bdikit::worlds::{holds_state, prob_measure, WorldId, TOLERANCE};

use common::{
    enriched_fixture_model, fixture_extras, fixture_model, fixture_tree, reference_holds, AstGen,
};

fn finish(name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "{name} took {elapsed:?}, over the {budget:?} budget"
    );
    println!("PASS: {name} in {elapsed:?}");
}

#[test]
fn criterion_1_maximin_golden() {
    let started = Instant::now();
    let outcome = deliberate(&fixture_tree(), Procedure::Maximin).unwrap();
    let plans: BTreeSet<String> = outcome.plans.iter().map(|p| p.to_string()).collect();
    assert_eq!(
        plans,
        BTreeSet::from(["NoPoll;Rep".to_string(), "Poll;Rep".to_string()])
    );
    assert!((outcome.root_value - 200.0).abs() <= TOLERANCE);
    finish(
        "criterion 1: worst-case deliberation selects {NoPoll;Rep, Poll;Rep} at 200",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_2_maxexpval_golden() {
    let started = Instant::now();
    let outcome = deliberate(&fixture_tree(), Procedure::Maxexpval).unwrap();
    let plans: BTreeSet<String> = outcome.plans.iter().map(|p| p.to_string()).collect();
    assert_eq!(
        plans,
        BTreeSet::from(["Poll;yes?;Sen".to_string(), "Poll;no?;Rep".to_string()])
    );
    assert!((outcome.root_value - 225.2).abs() <= TOLERANCE);
    finish(
        "criterion 2: expected-value deliberation selects {Poll;yes?;Sen, Poll;no?;Rep} at 225.2",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_3_transform_golden() {
    let started = Instant::now();
    let dt = fixture_tree();
    let result = transform(&dt, Some(&fixture_extras())).unwrap();
    let m = &result.interpretation;

    let goals = m.goal_at(&m.designated);
    assert_eq!(goals.len(), 4);

    let weights = &m.prob[&m.designated];
    let expected = [
        ("b_yes_win", 0.336),
        ("b_yes_loss", 0.084),
        ("b_no_win", 0.116),
        ("b_no_loss", 0.464),
    ];
    let mut total = 0.0;
    for (id, expected_weight) in expected {
        let got = weights[&WorldId::new(id)];
        assert!(
            (got - expected_weight).abs() <= TOLERANCE,
            "{id}: {got} vs {expected_weight}"
        );
        total += got;
    }
    assert!((total - 1.0).abs() <= TOLERANCE, "weights sum to {total}");
    assert_eq!(
        enumerate_assignments(&dt).len(),
        4,
        "one goal world per joint assignment"
    );
    finish(
        "criterion 3: four goal worlds with weights {0.336, 0.084, 0.116, 0.464} summing to 1",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_4_formula_golden_suite() {
    let started = Instant::now();
    let m = fixture_model();
    let check = |text: &str| {
        let f = desugar(&parse_state_formula(text).unwrap());
        holds_state(&m, &m.designated, &f).unwrap()
    };
    assert!(check("BEL(OPTIONAL(<> done(Sen)))"));
    assert!(check("PROB(OPTIONAL(<> yes)) = 0.42"));
    assert!(check("PAYOFF(<> (done(Sen) & loss)) = 100"));
    assert!(check("PAYOFF(<> (done(Sen) & win)) = 300"));
    assert!(check("BEL(OPTIONAL(<> done(Ret)))"));
    assert!(!check("GOAL(OPTIONAL(<> done(Ret)))"));

    let yes = desugar(&parse_state_formula("OPTIONAL(<> yes)").unwrap());
    let measure = prob_measure(&m, &m.designated, &yes).unwrap();
    assert!((measure - 0.42).abs() <= TOLERANCE, "measure {measure}");
    finish(
        "criterion 4: the six fixture formulas hold as stated, measure(<> yes) = 0.42",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_5_intentions_and_theorem() {
    let started = Instant::now();
    let dt = fixture_tree();
    let extras = fixture_extras();
    let base = transform(&dt, Some(&extras)).unwrap().interpretation;

    // (a) under the worst-case procedure.
    let worst = pw_deliberate(&base, Procedure::Maximin).unwrap();
    let a = desugar(
        &parse_state_formula("INTEND[maximin](INEVITABLE(<> done(Rep)))").unwrap(),
    );
    assert!(holds_state(&worst, &worst.designated, &a).unwrap());

    // (b) and (c) under the expected-value procedure.
    let expected = pw_deliberate(&base, Procedure::Maxexpval).unwrap();
    for text in [
        "INTEND[maxexpval](INEVITABLE(<> (done(Poll) & yes -> <> done(Sen))))",
        "INTEND[maxexpval](INEVITABLE(<> (done(Poll) & no -> <> done(Rep))))",
    ] {
        let f = desugar(&parse_state_formula(text).unwrap());
        assert!(
            holds_state(&expected, &expected.designated, &f).unwrap(),
            "{text}"
        );
    }

    // The emitted intention formulas hold on the deliberated models.
    for (proc, model) in [(Procedure::Maximin, &worst), (Procedure::Maxexpval, &expected)] {
        let outcome = deliberate(&dt, proc).unwrap();
        for formula in intention_formulas(&outcome) {
            assert!(
                holds_state(model, &model.designated, &desugar(&formula)).unwrap(),
                "{formula}"
            );
        }
    }

    // Every selected plan is intended, under both procedures.
    assert!(check_theorem1(&dt, Procedure::Maximin, Some(&extras)).unwrap());
    assert!(check_theorem1(&dt, Procedure::Maxexpval, Some(&extras)).unwrap());
    finish(
        "criterion 5: fixture intentions (a), (b), (c) hold and both plan/intention bridges pass",
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_6_property_suite_maxexpval() {
    let started = Instant::now();
    for seed in 0..200u64 {
        let report = run_trial(seed, TreeClass::Maxexpval);
        assert!(
            report.pass(),
            "seed {seed} failed: {:?}",
            report.failures
        );
    }
    finish(
        "criterion 6: 200 seeded trees: value oracle, plan/policy correspondence, intention bridge, C1-C4",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_7_property_suite_maximin_restricted() {
    let started = Instant::now();
    for seed in 0..200u64 {
        let report = run_trial(seed, TreeClass::MaximinRestricted);
        assert!(
            report.pass(),
            "seed {seed} failed: {:?}",
            report.failures
        );
    }
    finish(
        "criterion 7: 200 seeded restricted trees: worst-case value oracle, probability and monotone invariance, C1-C4",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_8_logic_suite() {
    let started = Instant::now();

    // 1000 round trips for each sort.
    let mut fuzz = AstGen::new(0xACCE55);
    for i in 0..1000u32 {
        let f = fuzz.state(6);
        let rendered = f.to_string();
        let parsed = bdikit::logic::parse_state_formula(&rendered)
            .unwrap_or_else(|e| panic!("case {i}: cannot re-parse `{rendered}`: {e}"));
        assert_eq!(parsed, f, "case {i}: `{rendered}`");

        let p = fuzz.path(6);
        let rendered = p.to_string();
        let parsed = bdikit::logic::parse_path_formula(&rendered)
            .unwrap_or_else(|e| panic!("case {i}: cannot re-parse `{rendered}`: {e}"));
        assert_eq!(parsed, p, "case {i}: `{rendered}`");
    }

    // Desugaring soundness: 100 fuzzed formulas against the fixture.
    let m = enriched_fixture_model();
    let mut fuzz = AstGen::without_conditions(0x50FA);
    for i in 0..100u32 {
        let f = fuzz.situation_closed_state(4);
        let expected = reference_holds(&m, &m.designated, &f);
        let got = holds_state(&m, &m.designated, &desugar(&f)).unwrap();
        assert_eq!(got, expected, "case {i}: {f}");
        let once = desugar(&f);
        assert_eq!(desugar(&once), once, "case {i}: not idempotent");
    }

    // Duality and probability laws on the fixture.
    let mut fuzz = AstGen::without_conditions(0xD0A1);
    for _ in 0..100u32 {
        let psi = fuzz.propositional_path(3);
        let optional = desugar(&bdikit::logic::StateFormula::optional(psi.clone()));
        let negated = desugar(&bdikit::logic::StateFormula::inevitable(psi.clone().not()));
        let lhs = holds_state(&m, &m.designated, &optional).unwrap();
        let rhs = holds_state(&m, &m.designated, &negated).unwrap();
        assert_eq!(lhs, !rhs, "duality on {psi}");

        let a = desugar(&fuzz.situation_closed_state(2));
        let b = desugar(&fuzz.situation_closed_state(2));
        let narrow = prob_measure(&m, &m.designated, &a.clone().and(b)).unwrap();
        let wide = prob_measure(&m, &m.designated, &a).unwrap();
        assert!(narrow <= wide + TOLERANCE, "monotonicity on {a}");
    }
    let truth = desugar(&parse_state_formula("PROB(true) >= 1").unwrap());
    assert!(holds_state(&m, &m.designated, &truth).unwrap());

    finish(
        "criterion 8: 1000 round trips per sort, desugaring soundness, duality, probability laws",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_9_affine_invariance() {
    let started = Instant::now();
    let scales = [0.5, 1.0, 2.0, 3.25, 10.0];
    let shifts = [-500.0, -3.0, 0.0, 7.5, 250.0];
    for seed in 0..50u64 {
        let dt = random_tree(seed, TreeClass::Maxexpval);
        let outcome = deliberate(&dt, Procedure::Maxexpval).unwrap();
        for (i, &a) in scales.iter().enumerate() {
            for (j, &b) in shifts.iter().enumerate() {
                if (i + j) % 3 == 2 {
                    continue; // 10 pairs per tree is plenty
                }
                let mapped = with_transformed_payoffs(&dt, |u| a * u + b);
                let mapped_outcome = deliberate(&mapped, Procedure::Maxexpval).unwrap();
                assert_eq!(
                    mapped_outcome.plans, outcome.plans,
                    "seed {seed}, a={a}, b={b}: plan set changed"
                );
                let expected = a * outcome.root_value + b;
                assert!(
                    (mapped_outcome.root_value - expected).abs() <= TOLERANCE,
                    "seed {seed}, a={a}, b={b}: {} vs {expected}",
                    mapped_outcome.root_value
                );
            }
        }
    }
    finish(
        "criterion 9: positive affine payoff maps preserve plan sets and map root values",
        started,
        Duration::from_secs(30),
    );
}

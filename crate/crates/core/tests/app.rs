use renyi::app::{
    run_check, run_condition, run_disintegrate, run_posterior, run_validate, AppError, ExitStatus, NuChoice,
};
use renyi::model::parse_model;
use renyi::posterior::{Likelihood, TruncationFamily};
use renyi::rational::{int, ratio};
use renyi::report::Value;

const DIE: &str = include_str!("../../../models/die.model");
const ABC: &str = include_str!("../../../models/abc-family.model");
const ABC_PERTURBED: &str = include_str!("../../../models/abc-perturbed.model");
const MISSING_UNION: &str = include_str!("../../../models/missing-union.model");

fn text(v: Option<&Value>) -> String {
    match v {
        Some(Value::Text(s)) => s.clone(),
        other => panic!("expected text, got {other:?}"),
    }
}

#[test]
fn condition_on_die() {
    let die = parse_model(DIE).unwrap();
    let out = run_condition(&die, "evens", "all").unwrap();
    assert_eq!(out.status, ExitStatus::Success);
    assert_eq!(out.report.get("probability"), Some(&Value::Number(ratio(1, 2))));
    assert!(out.report.to_text().contains("probability: 1/2 (0.5)"));

    let out = run_condition(&die, "one", "low").unwrap();
    assert_eq!(out.report.get("probability"), Some(&Value::Number(ratio(1, 2))));

    let err = run_condition(&die, "one", "nothing").unwrap_err();
    assert_eq!(err.status(), ExitStatus::Precondition);
    assert!(matches!(
        run_condition(&die, "zzz", "all"),
        Err(AppError::Precondition(_))
    ));
}

#[test]
fn disintegrate_reports_kernels_and_checks() {
    let die = parse_model(DIE).unwrap();
    let out = run_disintegrate(&die, &NuChoice::Counting, &[]).unwrap();
    assert_eq!(out.status, ExitStatus::Success);
    assert_eq!(text(out.report.get("verdict")), "PASS");
    let Some(Value::List(kernels)) = out.report.get("kernels") else {
        panic!()
    };
    for k in kernels {
        let Value::Record(fields) = k else { panic!() };
        assert_eq!(fields[1], ("total".to_string(), Value::Number(int(3))));
    }

    let out = run_disintegrate(&die, &NuChoice::Pushforward, &[]).unwrap();
    assert!(out.report.to_text().matches("probability: true").count() == 2);

    let err = run_disintegrate(&die, &NuChoice::Weights("even = 1\n".into()), &[]).unwrap_err();
    assert_eq!(err.status(), ExitStatus::Precondition);
    let err = run_disintegrate(&die, &NuChoice::Weights("even = x\n".into()), &[]).unwrap_err();
    assert_eq!(err.status(), ExitStatus::Parse);

    let abc = parse_model(ABC).unwrap();
    assert!(run_disintegrate(&abc, &NuChoice::Counting, &[]).is_err());
}

#[test]
fn check_outcomes() {
    let out = run_check(&parse_model(ABC).unwrap()).unwrap();
    assert_eq!(out.status, ExitStatus::Success);
    assert_eq!(text(out.report.get("verdict")), "CONSISTENT");
    assert_eq!(text(out.report.get("round_trip")), "PASS");

    let out = run_check(&parse_model(ABC_PERTURBED).unwrap()).unwrap();
    assert_eq!(out.status, ExitStatus::Verification);
    assert_eq!(text(out.report.get("consistency")), "INCONSISTENT");

    let out = run_check(&parse_model(MISSING_UNION).unwrap()).unwrap();
    assert_eq!(out.status, ExitStatus::Precondition);
    assert!(out.report.to_text().contains("union of {a} and {b} is missing"));

    let out = run_validate(&parse_model(MISSING_UNION).unwrap()).unwrap();
    assert_eq!(out.status, ExitStatus::Verification);
    let out = run_validate(&parse_model(DIE).unwrap()).unwrap();
    assert_eq!(out.status, ExitStatus::Success);
}

#[test]
fn check_reports_unrepresentable_family() {
    // consistent on nested pairs, but {a} has zero probability inside {a b}
    let model =
        parse_model("[carrier]\na b\n[bunch]\n{a}\n{b}\n{a b}\n[tables]\n{a} : a=1\n{b} : b=1\n{a b} : b=1\n").unwrap();
    let out = run_check(&model).unwrap();
    assert_eq!(out.status, ExitStatus::Verification);
    assert_eq!(text(out.report.get("verdict")), "NOT-REPRESENTABLE");
}

#[test]
fn posterior_report() {
    let family = TruncationFamily {
        prior_weight: int(1),
        likelihood: Likelihood::Constant(int(1)),
        observed: 0,
        query: 0,
    };
    let out = run_posterior(&family, &[1, 2]).unwrap();
    assert_eq!(out.report.get("stabilized"), Some(&Value::Flag(false)));
    assert_eq!(
        out.report.get("max_successive_difference"),
        Some(&Value::Number(ratio(2, 15)))
    );
    assert!(run_posterior(&family, &[]).is_err());
}

//! Command layer behind the `renyi` CLI. Every command is a pure function
//! from parsed input to a [`Report`] plus an exit status; all arithmetic is
//! delegated to the library operations.

use thiserror::Error;

use crate::disintegration::{choose_dominating, disintegrate, verify_factorization, NuMode};
use crate::measure::{Event, NonNegFunction};
use crate::model::{self, ModelSpec, ParseError};
use crate::posterior::{posterior_sequence, PosteriorError, TruncationFamily};
use crate::rational::Rational;
use crate::report::{Record, Report, Value};
use crate::state::{check_consistency, reconstruct, states_equal, Bunch, BunchReport, ConditionalFamily, RenyiState};

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Io = 1,
    Usage = 2,
    Parse = 3,
    Precondition = 4,
    Verification = 5,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Precondition(String),
}

impl AppError {
    pub fn status(&self) -> ExitStatus {
        match self {
            AppError::Parse(_) => ExitStatus::Parse,
            AppError::Precondition(_) => ExitStatus::Precondition,
        }
    }
}

impl From<crate::error::Error> for AppError {
    fn from(e: crate::error::Error) -> Self {
        AppError::Precondition(e.to_string())
    }
}

impl From<PosteriorError> for AppError {
    fn from(e: PosteriorError) -> Self {
        AppError::Precondition(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub status: ExitStatus,
}

impl Outcome {
    fn new(report: Report, ok: bool, failure: ExitStatus) -> Self {
        Outcome {
            report,
            status: if ok { ExitStatus::Success } else { failure },
        }
    }
}

/// Source of the dominating measure for `disintegrate`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NuChoice {
    Counting,
    Pushforward,
    /// Contents of a weights file (`label = weight` lines).
    Weights(String),
}

type AppResult<T> = Result<T, AppError>;

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn require_measure(model: &ModelSpec) -> AppResult<RenyiState> {
    model
        .measure
        .clone()
        .map(RenyiState::new)
        .ok_or_else(|| AppError::Precondition("model declares no [measure] section".into()))
}

fn lookup_event(model: &ModelSpec, name: &str) -> AppResult<Event> {
    model
        .event(name)
        .ok_or_else(|| AppError::Precondition(format!("unknown event `{name}`")))
}

fn lookup_function(model: &ModelSpec, name: &str) -> AppResult<NonNegFunction> {
    model
        .function(name)
        .ok_or_else(|| AppError::Precondition(format!("unknown function or event `{name}`")))
}

fn weights_record(labels: &[String], weights: &[Rational]) -> Record {
    Record(
        labels
            .iter()
            .zip(weights)
            .map(|(l, w)| (l.clone(), Value::Number(w.clone())))
            .collect(),
    )
}

/// `P(A | B)` for named `A` (event or function) and `B`.
pub fn run_condition(model: &ModelSpec, event: &str, given: &str) -> AppResult<Outcome> {
    let state = require_measure(model)?;
    let a = lookup_function(model, event)?;
    let b = lookup_event(model, given)?;
    let p = state.condition(&a, &b)?;
    let mut report = Report::new("condition");
    report.push("event", event);
    report.push("given", format!("{given} = {b}"));
    report.push("probability", p);
    Ok(Outcome::new(report, true, ExitStatus::Success))
}

/// Kernels `P^t`, `P_T`, `ν`, and factorization checks for each requested
/// `(A, B)` pair (the model's `[checks]` followed by `extra`).
pub fn run_disintegrate(model: &ModelSpec, nu: &NuChoice, extra: &[(String, String)]) -> AppResult<Outcome> {
    let state = require_measure(model)?;
    let statistic = model
        .statistic
        .clone()
        .ok_or_else(|| AppError::Precondition("model declares no [statistic] section".into()))?;
    let (mode, mode_name) = match nu {
        NuChoice::Counting => (NuMode::Counting, "counting".to_string()),
        NuChoice::Pushforward => (NuMode::Pushforward, "pushforward".to_string()),
        NuChoice::Weights(text) => (
            NuMode::Supplied(model::parse_weights(statistic.codomain(), text)?),
            "supplied".to_string(),
        ),
    };
    let nu = choose_dominating(&state, &statistic, mode)?;
    let cond = disintegrate(&state, &statistic, &nu)?;
    let pushforward = state.representative().pushforward(&statistic)?;

    let codomain = statistic.codomain();
    let mut report = Report::new("disintegrate");
    report.push(
        "codomain",
        codomain.atoms().iter().map(String::as_str).collect::<Vec<_>>(),
    );
    report.push("nu_mode", mode_name);
    report.push("pushforward", weights_record(codomain.atoms(), pushforward.weights()));
    report.push("nu", weights_record(codomain.atoms(), nu.measure().weights()));

    let domain = statistic.domain();
    let kernels: Vec<Record> = (0..codomain.len())
        .map(|t| {
            let fiber = statistic.fiber(t);
            let table = cond.kernel_table(t);
            let weights = Record(
                fiber
                    .indices()
                    .map(|i| (domain.atom(i).to_string(), table[i].clone().into()))
                    .collect(),
            );
            Record::new()
                .with("t", codomain.atom(t))
                .with("total", cond.kernel_total(t))
                .with("probability", cond.is_probability_kernel(t))
                .with("weights", weights)
        })
        .collect();
    report.push("kernels", kernels);

    let pairs: Vec<(String, String)> = model.checks.iter().chain(extra).cloned().collect();
    let mut all_pass = true;
    let mut checks = Vec::new();
    for (a_name, b_name) in &pairs {
        let a = lookup_function(model, a_name)?;
        let b = lookup_event(model, b_name)?;
        let fr = verify_factorization(&cond, &a, &b)?;
        all_pass &= fr.passed();
        let rows: Vec<Record> = fr
            .rows
            .iter()
            .map(|r| {
                Record::new()
                    .with("t", codomain.atom(r.t))
                    .with("kernel_joint", &r.joint)
                    .with("kernel_given", &r.kernel_b)
                    .with(
                        "conditional",
                        r.conditional
                            .as_ref()
                            .map_or(Value::Text("undefined".into()), |c| c.into()),
                    )
                    .with("pushforward_given", &r.pushforward_given)
                    .with("proof_rhs", &r.proof_rhs)
                    .with("factorization", verdict(r.factorization_holds))
                    .with("proof_identity", verdict(r.proof_identity_holds))
            })
            .collect();
        checks.push(
            Record::new()
                .with("function", a_name.as_str())
                .with("given", format!("{b_name} = {b}"))
                .with("given_mass", fr.mass_b.clone())
                .with("verdict", verdict(fr.passed()))
                .with("rows", rows),
        );
    }
    report.push("factorization", checks);
    report.push("verdict", verdict(all_pass));
    Ok(Outcome::new(report, all_pass, ExitStatus::Verification))
}

fn bunch_record(bunch: &Bunch, axioms: &BunchReport) -> Record {
    let mut r = Record::new().with(
        "members",
        bunch.conditions().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
    );
    for axiom in 1..=3u8 {
        let mut a = Record::new().with("holds", axioms.axiom_holds(axiom));
        if let Some(w) = axioms.witness(axiom) {
            a.push("witness", w);
        }
        r.push(&format!("axiom_{axiom}"), a);
    }
    r
}

fn require_bunch(model: &ModelSpec) -> AppResult<Bunch> {
    model
        .bunch
        .clone()
        .ok_or_else(|| AppError::Precondition("model declares no [bunch] section".into()))
}

/// Consistency of the model's conditional family and, when consistent, the
/// reconstructed state with a round-trip check.
pub fn run_check(model: &ModelSpec) -> AppResult<Outcome> {
    let bunch = require_bunch(model)?;
    let axioms = bunch.validate();
    let mut report = Report::new("check");
    report.push("bunch", bunch_record(&bunch, &axioms));
    if !axioms.is_valid() {
        report.push("verdict", "INVALID-BUNCH");
        return Ok(Outcome::new(report, false, ExitStatus::Precondition));
    }
    if model.tables.is_empty() {
        return Err(AppError::Precondition("model declares no [tables] section".into()));
    }
    let family = ConditionalFamily::from_pairs(bunch, model.tables.clone())?;
    let consistency = check_consistency(&family)?;
    report.push("pairs_checked", consistency.pairs_checked);

    if let Some(v) = &consistency.violation {
        let atom = model.carrier.atom(v.atom);
        report.push("consistency", "INCONSISTENT");
        report.push(
            "witness",
            Record::new()
                .with("a", format!("{{{atom}}}"))
                .with("b", v.b.to_string())
                .with("c", v.c.to_string())
                .with("p_a_given_b", &v.lhs)
                .with("p_a_given_c_over_p_b_given_c", &v.rhs),
        );
        report.push("verdict", "INCONSISTENT");
        return Ok(Outcome::new(report, false, ExitStatus::Verification));
    }
    report.push("consistency", "CONSISTENT");

    let state = match reconstruct(&family) {
        Ok(state) => state,
        Err(e) => {
            report.push("reconstruction", format!("FAILED: {e}"));
            report.push("verdict", "NOT-REPRESENTABLE");
            return Ok(Outcome::new(report, false, ExitStatus::Verification));
        }
    };
    report.push("reference_condition", family.bunch().conditions()[0].to_string());
    report.push(
        "reconstruction",
        weights_record(model.carrier.atoms(), state.representative().weights()),
    );
    let round_trip = ConditionalFamily::generate(&state, family.bunch()).is_ok_and(|g| g == family);
    report.push("round_trip", verdict(round_trip));
    let mut ok = round_trip;
    if let Some(m) = &model.measure {
        let equal = states_equal(&state, &RenyiState::new(m.clone()));
        report.push("equals_model_state", equal);
        ok &= equal;
    }
    report.push("verdict", if ok { "CONSISTENT" } else { "MISMATCH" });
    Ok(Outcome::new(report, ok, ExitStatus::Verification))
}

/// Posterior of the query in each window of a truncation family.
pub fn run_posterior(family: &TruncationFamily, windows: &[u32]) -> AppResult<Outcome> {
    let seq = posterior_sequence(family, windows)?;
    let mut report = Report::new("posterior");
    report.push("observed", family.observed);
    report.push("query", family.query);
    let rows: Vec<Record> = seq
        .windows
        .iter()
        .map(|w| {
            Record::new()
                .with("window", i64::from(w.window))
                .with("atoms", w.atoms)
                .with("data_mass", &w.data_mass)
                .with("posterior", &w.posterior)
        })
        .collect();
    report.push("windows", rows);
    report.push("max_successive_difference", seq.max_successive_difference);
    report.push("stabilized", seq.stabilized);
    Ok(Outcome::new(report, true, ExitStatus::Success))
}

/// Structural summary of a model: sections present, bunch axioms and
/// conditional tables.
pub fn run_validate(model: &ModelSpec) -> AppResult<Outcome> {
    let mut report = Report::new("validate");
    let mut ok = true;
    report.push("atoms", model.carrier.len());
    if let Some(m) = &model.measure {
        report.push("total_mass", m.total());
    }
    if let Some(s) = &model.statistic {
        report.push(
            "codomain",
            s.codomain().atoms().iter().map(String::as_str).collect::<Vec<_>>(),
        );
    }
    let events: Vec<Record> = model
        .events
        .iter()
        .map(|(n, e)| Record::new().with("name", n.as_str()).with("atoms", e.to_string()))
        .collect();
    report.push("events", events);
    report.push(
        "functions",
        model.functions.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>(),
    );
    if let Some(bunch) = &model.bunch {
        let axioms = bunch.validate();
        ok &= axioms.is_valid();
        report.push("bunch", bunch_record(bunch, &axioms));
        if !model.tables.is_empty() {
            let tables = match ConditionalFamily::from_pairs(bunch.clone(), model.tables.clone()) {
                Ok(_) => "PASS".to_string(),
                Err(e) => {
                    ok = false;
                    format!("FAIL: {e}")
                }
            };
            report.push("tables", tables);
        }
    } else if !model.tables.is_empty() {
        ok = false;
        report.push("tables", "FAIL: tables given without a [bunch] section");
    }
    report.push("verdict", verdict(ok));
    Ok(Outcome::new(report, ok, ExitStatus::Verification))
}

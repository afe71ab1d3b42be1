//! Turning corpus cases into orders, evaluating them, and the per-case
//! verdicts used by `verify`.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use quatclass::brandt::oracle_class_set;
use quatclass::classnumbers::{compute_fibers, BaseField, FiberOptions, FiberReport};
use quatclass::cmorders::{CatalogOptions, CuratedTable};
use quatclass::numberfield::PrimeIdeal;
use quatclass::quatalg::{
    eichler_order, find_definite_algebra_ramified_at, find_unramified_definite_algebra, EichlerOrderSpec,
    QuaternionAlgebraSpec,
};
use quatclass::selectivity::DeltaBase;
use quatclass::{Error, Result};

use crate::corpus::{parse_elem, resolve_prime, AlgebraChoice, CorpusCase};

/// Search bound for definite algebras with prescribed ramification.
const ALGEBRA_BOUND: u64 = 200;
/// Cap on the number of ideal classes the oracle may collect.
const ORACLE_MAX_CLASSES: usize = 5000;

pub struct Settings {
    pub seed: u64,
    pub curated: Option<CuratedTable>,
    pub jobs: usize,
    pub budget: u64,
    pub delta_base: DeltaBase,
    pub timing: bool,
}

impl Settings {
    pub fn catalog_options(&self) -> CatalogOptions<'_> {
        CatalogOptions { budget: self.budget, curated: self.curated.as_ref() }
    }

    pub fn fiber_options(&self) -> FiberOptions {
        FiberOptions { delta_base: self.delta_base.clone(), relaxed: false }
    }

    pub fn base_field(&self, d: i64) -> Result<BaseField> {
        BaseField::new(d, &self.catalog_options())
    }

    /// Runs `f` on `jobs` worker threads (0: one per core).
    pub fn pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match rayon::ThreadPoolBuilder::new().num_threads(self.jobs).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
}

pub fn algebra_for(bf: &BaseField, choice: &AlgebraChoice) -> Result<QuaternionAlgebraSpec> {
    let f = &bf.f;
    match choice {
        AlgebraChoice::Unramified => find_unramified_definite_algebra(f, ALGEBRA_BOUND),
        AlgebraChoice::RamifiedAt { primes } => {
            let ps = primes.iter().map(|l| resolve_prime(f, l)).collect::<Result<Vec<PrimeIdeal>>>()?;
            find_definite_algebra_ramified_at(f, &bf.group, &ps, ALGEBRA_BOUND)
        }
        AlgebraChoice::Explicit { a, b } => {
            let parse = |s: &str| {
                parse_elem(f.d, s)
                    .ok_or_else(|| Error::InvalidInput(format!("cannot read {s:?} as an element of {}", f.name())))
            };
            let (a, b) = (parse(a)?, parse(b)?);
            if a.is_zero() || b.is_zero() {
                return Err(Error::InvalidInput("algebra parameters must be nonzero".into()));
            }
            QuaternionAlgebraSpec::new(f, a, b)
        }
    }
}

pub fn order_for(bf: &BaseField, case: &CorpusCase) -> Result<EichlerOrderSpec> {
    let alg = algebra_for(bf, &case.algebra)?;
    let level = case.level.iter().map(|l| resolve_prime(&bf.f, l)).collect::<Result<Vec<PrimeIdeal>>>()?;
    eichler_order(&alg, &level)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Unsupported,
    Invalid,
    Fail,
}

impl Status {
    pub fn of_error(e: &Error) -> Status {
        match e {
            Error::Unsupported(_) | Error::BudgetExceeded { .. } | Error::SearchExhausted { .. } => Status::Unsupported,
            Error::InvalidInput(_) | Error::NotSquarefree(_) | Error::Parse { .. } | Error::Table(_) | Error::Io(_) => {
                Status::Invalid
            }
            Error::NonIntegral { .. } | Error::InvariantViolation(_) | Error::Conflict { .. } => Status::Fail,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Unsupported => "unsupported",
            Status::Invalid => "invalid",
            Status::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    /// Whether a failure makes `verify` exit with status 1.
    pub mandatory: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSummary {
    pub classes: usize,
    pub unit_indices: Vec<u64>,
    pub mass: String,
    pub neighbor_prime: u64,
}

#[derive(Debug, Serialize)]
pub struct CaseOutcome {
    pub index: usize,
    pub id: String,
    pub line: usize,
    pub input: CorpusCase,
    pub status: Status,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub report: Option<FiberReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

fn check(name: &str, ok: bool, mandatory: bool, detail: String) -> Check {
    Check { name: name.to_string(), ok, mandatory, detail }
}

/// Whether the oracle should run by default: definite algebras over Q with
/// integral parameters.
pub fn oracle_applies(spec: &EichlerOrderSpec) -> bool {
    let int = |x: &quatclass::numberfield::FElem| x.a.is_integer();
    spec.alg.d == 1 && spec.alg.ram_infinite.len() == 1 && int(&spec.alg.a) && int(&spec.alg.b)
}

pub fn evaluate(
    bf: std::result::Result<&BaseField, &Error>,
    case: &CorpusCase,
    index: usize,
    settings: &Settings,
) -> CaseOutcome {
    let start = Instant::now();
    let mut out = CaseOutcome {
        index,
        id: case.id.clone(),
        line: case.line,
        input: case.clone(),
        status: Status::Pass,
        checks: Vec::new(),
        error: None,
        oracle: None,
        report: None,
        timing_ms: None,
    };
    let result = match bf {
        Ok(bf) => evaluate_into(bf, case, settings, &mut out).map_err(|e| (Status::of_error(&e), e.to_string())),
        Err(e) => Err((Status::of_error(e), format!("{}: {e}", field_label(case.field_d)))),
    };
    if let Err((status, msg)) = result {
        out.status = status;
        if status == Status::Fail {
            out.checks.push(check("computation", false, true, msg.clone()));
        }
        out.error = Some(msg);
    }
    if out.status == Status::Pass && out.checks.iter().any(|c| c.mandatory && !c.ok) {
        out.status = Status::Fail;
    }
    if settings.timing {
        out.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    out
}

pub fn field_label(d: i64) -> String {
    if d == 1 {
        "Q".to_string()
    } else {
        format!("Q(sqrt({d}))")
    }
}

fn evaluate_into(bf: &BaseField, case: &CorpusCase, settings: &Settings, out: &mut CaseOutcome) -> Result<()> {
    let spec = order_for(bf, case)?;
    let report = compute_fibers(bf, &spec, &settings.fiber_options())?;
    let div = &report.divisibility;
    let divides = |b: bool| if b { "|" } else { "does not divide" };
    out.checks.push(check(
        "h_divides",
        div.h_f_divides,
        true,
        format!("h(F) = {} {} {}", div.h_f, divides(div.h_f_divides), report.total),
    ));
    out.checks.push(check(
        "h_plus_divides",
        div.h_plus_divides || !div.h_plus_required,
        div.h_plus_required,
        format!(
            "h+(F) = {} {} {}{}",
            div.h_plus,
            divides(div.h_plus_divides),
            report.total,
            if div.h_plus_required { "" } else { " (not required)" }
        ),
    ));
    let total = report.total_u64();
    if let Some(t) = case.expect.total {
        out.checks.push(check("expect.total", total == Some(t), true, format!("expected {t}, got {}", report.total)));
    }
    if let Some(x) = case.expect.h_divides {
        out.checks.push(check("expect.h_divides", div.h_f_divides == x, true, format!("expected {x}")));
    }
    if let Some(x) = case.expect.h_plus_divides {
        out.checks.push(check("expect.h_plus_divides", div.h_plus_divides == x, true, format!("expected {x}")));
    }
    let want_oracle = case.oracle.unwrap_or_else(|| oracle_applies(&spec));
    if want_oracle || case.expect.classes.is_some() {
        if !oracle_applies(&spec) {
            return Err(Error::InvalidInput("the oracle needs a definite algebra over Q with integral a, b".into()));
        }
        let cs = oracle_class_set(&spec, ORACLE_MAX_CLASSES)?;
        let n = cs.class_number() as u64;
        out.checks.push(check(
            "oracle.total",
            total == Some(n),
            true,
            format!("formula {} vs oracle {n}", report.total),
        ));
        let mass_ok = report.mass.as_ref() == Some(&cs.mass);
        out.checks.push(check("oracle.mass", mass_ok, true, format!("sum 1/w = {}", cs.mass)));
        if let Some(c) = case.expect.classes {
            out.checks.push(check("expect.classes", n == c, true, format!("expected {c}, got {n}")));
        }
        out.oracle = Some(OracleSummary {
            classes: cs.class_number(),
            unit_indices: cs.unit_indices.clone(),
            mass: cs.mass.to_string(),
            neighbor_prime: cs.neighbor_prime,
        });
    }
    out.report = Some(report);
    Ok(())
}

/// Evaluates all cases on the worker pool; results come back in case
/// order.
pub fn run_corpus(cases: &[CorpusCase], settings: &Settings) -> Vec<CaseOutcome> {
    settings.pool(|| {
        let mut ds: Vec<i64> = cases.iter().map(|c| c.field_d).collect();
        ds.sort_unstable();
        ds.dedup();
        let fields: BTreeMap<i64, Result<BaseField>> =
            ds.par_iter().map(|&d| (d, settings.base_field(d))).collect::<Vec<_>>().into_iter().collect();
        cases.par_iter().enumerate().map(|(i, c)| evaluate(fields[&c.field_d].as_ref(), c, i, settings)).collect()
    })
}

/// 0 when every case passes or is unsupported, 1 on any failed check, 2 on
/// invalid input.
pub fn exit_code(outcomes: &[CaseOutcome]) -> i32 {
    if outcomes.iter().any(|o| o.status == Status::Fail) {
        1
    } else if outcomes.iter().any(|o| o.status == Status::Invalid) {
        2
    } else {
        0
    }
}

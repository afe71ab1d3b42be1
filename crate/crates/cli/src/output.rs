//! Human tables and JSON documents for each command.

use std::io::{ErrorKind, Write};

use serde_json::{json, Value};

use quatclass::classnumbers::FiberReport;
use quatclass::quatalg::restricted_class_number;
use quatclass::selectivity::{is_unramified_cm_extension, order_key};
use quatclass::Result;

use crate::corpus::parse_case;
use crate::run::{algebra_for, evaluate, field_label, CaseOutcome, Settings, Status};

/// `println!` that exits quietly when the reader has gone away.
macro_rules! out {
    ($($t:tt)*) => {
        if let Err(e) = writeln!(std::io::stdout().lock(), $($t)*) {
            if e.kind() == ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("failed printing to stdout: {e}");
        }
    };
}

/// Pretty JSON with sorted keys (serde_json maps are ordered by key).
fn emit(mut v: Value, s: &Settings) {
    if let Value::Object(m) = &mut v {
        m.insert("seed".into(), json!(s.seed));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    }
    out!("{}", serde_json::to_string_pretty(&v).expect("JSON values always serialize"));
}

fn row(cells: &[String], widths: &[usize]) -> String {
    cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
}

fn table(header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let head: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    out!("{}", row(&head, &widths));
    for r in rows {
        out!("{}", row(r, &widths));
    }
}

pub fn field(s: &Settings, d: i64, json_out: bool) -> Result<i32> {
    let bf = s.base_field(d)?;
    let g = &bf.group;
    let unit = bf.f.fund_unit.as_ref().map(|e| e.to_string());
    let classes: Vec<Value> =
        (0..g.h_plus()).map(|c| json!({"label": g.label(c), "wide": g.wide_label(g.wide_class_of(c))})).collect();
    if json_out {
        emit(
            json!({
                "field": bf.f.name(),
                "d": d,
                "disc": bf.f.disc.to_string(),
                "fund_unit": unit,
                "unit_norm": bf.f.unit_norm,
                "h": g.h(),
                "h_plus": g.h_plus(),
                "r": g.r(),
                "zeta_minus_one": bf.zeta.to_string(),
                "narrow_classes": classes,
            }),
            s,
        );
        return Ok(0);
    }
    out!("field      {}", bf.f.name());
    out!("disc       {}", bf.f.disc);
    if let Some(u) = unit {
        out!("unit       {u} (norm {})", bf.f.unit_norm);
    }
    out!("h          {}", g.h());
    out!("h+         {}", g.h_plus());
    out!("zeta(-1)   {}", bf.zeta);
    out!();
    let rows: Vec<Vec<String>> = (0..g.h_plus()).map(|c| vec![g.label(c), g.wide_label(g.wide_class_of(c))]).collect();
    table(&["narrow class", "wide class"], &rows);
    Ok(0)
}

pub fn algebra(s: &Settings, d: i64, spec: &str, json_out: bool) -> Result<i32> {
    let bf = s.base_field(d)?;
    let case = parse_case(&format!("field={d} algebra={spec}"), 1)?;
    let alg = algebra_for(&bf, &case.algebra)?;
    let definite = alg.is_totally_definite(&bf.f);
    let hd = restricted_class_number(&bf.f, &bf.group, &alg);
    if json_out {
        emit(
            json!({
                "field": bf.f.name(),
                "a": alg.a.to_string(),
                "b": alg.b.to_string(),
                "ram_finite": alg.ram_labels(),
                "ram_infinite": alg.ram_infinite,
                "totally_definite": definite,
                "eichler_condition": alg.satisfies_eichler_condition(&bf.f),
                "h_d": hd,
            }),
            s,
        );
        return Ok(0);
    }
    out!("algebra            ({}, {}) over {}", alg.a, alg.b, bf.f.name());
    out!("ramified primes    {}", list(&alg.ram_labels()));
    out!("ramified places    {:?}", alg.ram_infinite);
    out!("totally definite   {definite}");
    out!("Eichler condition  {}", alg.satisfies_eichler_condition(&bf.f));
    out!("h_D(F)             {hd}");
    Ok(0)
}

fn list(v: &[String]) -> String {
    if v.is_empty() {
        "-".to_string()
    } else {
        v.join(",")
    }
}

pub fn catalog(s: &Settings, d: i64, json_out: bool) -> Result<i32> {
    let bf = s.base_field(d)?;
    let cat = &bf.catalog;
    if json_out {
        let fields: Vec<Value> = cat
            .fields
            .iter()
            .map(|k| json!({"tag": k.tag, "disc": k.disc.to_string(), "unramified": is_unramified_cm_extension(k)}))
            .collect();
        let orders: Vec<Value> = cat
            .members
            .iter()
            .map(|b| {
                json!({
                    "order": order_key(b),
                    "conductor_norm": b.conductor.norm(),
                    "h": b.h,
                    "w": b.w,
                    "provenance": b.provenance,
                })
            })
            .collect();
        emit(json!({"field": bf.f.name(), "cm_fields": fields, "orders": orders}), s);
        return Ok(0);
    }
    let rows: Vec<Vec<String>> = cat
        .fields
        .iter()
        .map(|k| vec![k.tag.clone(), k.disc.to_string(), is_unramified_cm_extension(k).to_string()])
        .collect();
    table(&["CM field", "disc", "unramified"], &rows);
    out!();
    let rows: Vec<Vec<String>> = cat
        .members
        .iter()
        .map(|b| {
            vec![
                b.tag.clone(),
                b.conductor.label(),
                b.h.to_string(),
                b.w.to_string(),
                format!("{:?}", b.provenance).to_lowercase(),
            ]
        })
        .collect();
    table(&["order", "conductor", "h", "w", "provenance"], &rows);
    Ok(0)
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum CaseView {
    Classno,
    Fibers,
    Oracle,
}

pub fn case(s: &Settings, text: &str, view: CaseView, json_out: bool) -> Result<i32> {
    let mut c = parse_case(text, 1)?;
    if view == CaseView::Oracle {
        c.oracle = Some(true);
    }
    let bf = s.base_field(c.field_d);
    let out = evaluate(bf.as_ref(), &c, 0, s);
    let code = match out.status {
        Status::Fail => 1,
        Status::Invalid | Status::Unsupported => 2,
        Status::Pass => 0,
    };
    if json_out {
        emit(serde_json::to_value(&out).expect("reports serialize"), s);
        return Ok(code);
    }
    if let Some(e) = &out.error {
        eprintln!("{}: {e}", out.status.as_str());
    }
    if let Some(r) = &out.report {
        summary(r);
        if view == CaseView::Fibers {
            fibers(r);
        }
    }
    if let Some(o) = &out.oracle {
        out!("oracle classes    {} (unit indices {:?}, mass {})", o.classes, o.unit_indices, o.mass);
    }
    checks(&out);
    Ok(code)
}

fn summary(r: &FiberReport) {
    out!("field             {}", r.field);
    out!("algebra           ({}, {}), ramified at {}", r.algebra.a, r.algebra.b, list(&r.algebra.ram_finite));
    out!("level             {}", list(&r.level));
    if let (Some(m), Some(msc)) = (&r.mass, &r.mass_sc) {
        out!("mass              {m}");
        out!("mass_sc           {msc}");
    }
    out!("h(F), h+(F)       {}, {}", r.h, r.h_plus);
    out!("total             {}", r.total);
    if let Some(w) = r.assumptions.catalog_warning {
        out!("note              {w}");
    }
}

fn fibers(r: &FiberReport) {
    out!();
    if !r.psi_fibers.is_empty() {
        let rows: Vec<Vec<String>> = r.psi_fibers.iter().map(|(k, v)| vec![k.clone(), v.to_string()]).collect();
        table(&["narrow class", "h_sc"], &rows);
        out!();
    }
    let rows: Vec<Vec<String>> = r.phi_fibers.iter().map(|(k, v)| vec![k.clone(), v.to_string()]).collect();
    table(&["wide class", "phi"], &rows);
    if !r.terms.is_empty() {
        out!();
        let rows: Vec<Vec<String>> = r
            .terms
            .iter()
            .map(|t| {
                vec![
                    t.order.clone(),
                    t.h.to_string(),
                    t.w.to_string(),
                    t.m.to_string(),
                    t.selectivity.selective.to_string(),
                    t.selectivity.delta.iter().map(|x| x.to_string()).collect::<String>(),
                ]
            })
            .collect();
        table(&["order", "h", "w", "M", "selective", "delta"], &rows);
    }
}

fn checks(out: &CaseOutcome) {
    if out.checks.is_empty() {
        return;
    }
    out!();
    let rows: Vec<Vec<String>> = out
        .checks
        .iter()
        .map(|c| vec![c.name.clone(), if c.ok { "ok" } else { "FAIL" }.to_string(), c.detail.clone()])
        .collect();
    table(&["check", "result", "detail"], &rows);
}

pub fn verify(s: &Settings, corpus: &str, outcomes: &[CaseOutcome], json_out: bool) {
    let count = |st: Status| outcomes.iter().filter(|o| o.status == st).count();
    let summary = json!({
        "cases": outcomes.len(),
        "pass": count(Status::Pass),
        "fail": count(Status::Fail),
        "unsupported": count(Status::Unsupported),
        "invalid": count(Status::Invalid),
    });
    if json_out {
        let cases = serde_json::to_value(outcomes).expect("reports serialize");
        emit(json!({"corpus": corpus, "cases": cases, "summary": summary}), s);
        return;
    }
    let rows: Vec<Vec<String>> = outcomes
        .iter()
        .map(|o| {
            let r = o.report.as_ref();
            let mut cells = vec![
                o.index.to_string(),
                o.id.clone(),
                r.map_or_else(|| field_label(o.input.field_d), |r| r.field.clone()),
                r.map_or_else(String::new, |r| list(&r.algebra.ram_finite)),
                r.map_or_else(|| list(&o.input.level), |r| list(&r.level)),
                r.map_or_else(String::new, |r| r.total.to_string()),
                o.oracle.as_ref().map_or_else(String::new, |x| x.classes.to_string()),
                o.status.as_str().to_string(),
            ];
            if s.timing {
                cells.push(o.timing_ms.unwrap_or(0).to_string());
            }
            cells
        })
        .collect();
    let mut header = vec!["#", "id", "field", "ram", "level", "total", "oracle", "status"];
    if s.timing {
        header.push("ms");
    }
    table(&header, &rows);
    for o in outcomes.iter().filter(|o| o.status != Status::Pass) {
        let failed: Vec<String> =
            o.checks.iter().filter(|c| c.mandatory && !c.ok).map(|c| format!("{}: {}", c.name, c.detail)).collect();
        let why = o.error.clone().unwrap_or_else(|| failed.join("; "));
        out!("case {} ({}, line {}): {} {}", o.index, o.id, o.line, o.status.as_str(), why);
    }
    out!(
        "{} cases: {} pass, {} fail, {} unsupported, {} invalid",
        outcomes.len(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Unsupported),
        count(Status::Invalid)
    );
}

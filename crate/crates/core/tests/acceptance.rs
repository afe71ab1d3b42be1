//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;

use quatclass::arith::int::{factor, is_squarefree, primes_up_to};
use quatclass::brandt::{eichler_suborder, ideal_class_set, maximal_order, RationalQuaternionAlgebra};
use quatclass::classnumbers::{compute_fibers, eichler_mass, BaseField, FiberOptions, FiberReport};
use quatclass::cmorders::CatalogOptions;
use quatclass::numberfield::{prime_ideals_above, PrimeIdeal};
use quatclass::quatalg::{
    eichler_order, find_definite_algebra_ramified_at, find_unramified_definite_algebra, EichlerOrderSpec,
};
use quatclass::selectivity::DeltaBase;
use quatclass::{Error, Int, Rat};

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

/// One evaluated case of the real quadratic corpus.
struct Case {
    d: i64,
    order: EichlerOrderSpec,
    report: FiberReport,
    unramified: bool,
}

fn opts() -> FiberOptions {
    FiberOptions::default()
}

fn base_with(default: u8) -> FiberOptions {
    FiberOptions { delta_base: DeltaBase::constant(default), relaxed: true }
}

fn small_primes(bf: &BaseField, bound: u64) -> Vec<PrimeIdeal> {
    primes_up_to(bound).into_iter().flat_map(|p| prime_ideals_above(&bf.f, p)).filter(|q| q.norm() <= bound).collect()
}

fn fields() -> Vec<BaseField> {
    (2..=100i64)
        .filter(|&d| is_squarefree(d))
        .map(|d| BaseField::new(d, &CatalogOptions::default()).expect("base field"))
        .collect()
}

fn criterion_1() -> Verdict {
    let t = Instant::now();
    let bf = BaseField::new(7, &CatalogOptions::default()).unwrap();
    let alg = find_unramified_definite_algebra(&bf.f, 50).unwrap();
    let order = eichler_order(&alg, &[]).unwrap();
    let r = compute_fibers(&bf, &order, &opts()).unwrap();
    let div = &r.divisibility;
    let elapsed = t.elapsed();
    let ok = r.total_u64() == Some(3)
        && div.h_plus == 2
        && !div.h_plus_divides
        && div.h_f == 1
        && div.h_f_divides
        && elapsed < Duration::from_secs(5);
    verdict(
        ok,
        format!(
            "Q(sqrt 7) maximal: total {}, h+ {} divides: {}, h {} divides: {}, {:.2?}",
            r.total, div.h_plus, div.h_plus_divides, div.h_f, div.h_f_divides, elapsed
        ),
    )
}

fn criterion_2() -> Verdict {
    let t = Instant::now();
    let bf = BaseField::new(1, &CatalogOptions::default()).unwrap();
    let ram_of =
        |ps: &[u64]| -> Vec<PrimeIdeal> { ps.iter().map(|&p| prime_ideals_above(&bf.f, p).remove(0)).collect() };
    let mut mismatches = Vec::new();
    let mut anchors = Vec::new();
    let mut cases = 0;
    for n in 2..=200u64 {
        if !is_squarefree(n as i64) {
            continue;
        }
        let ps: Vec<u64> = factor(n).into_iter().map(|x| x.0).collect();
        for mask in 0u32..(1 << ps.len()) {
            if mask.count_ones() % 2 == 0 {
                continue;
            }
            let dp: Vec<u64> = (0..ps.len()).filter(|&k| mask >> k & 1 == 1).map(|k| ps[k]).collect();
            let lp: Vec<u64> = (0..ps.len()).filter(|&k| mask >> k & 1 == 0).map(|k| ps[k]).collect();
            let spec = find_definite_algebra_ramified_at(&bf.f, &bf.group, &ram_of(&dp), 500).unwrap();
            let order = eichler_order(&spec, &ram_of(&lp)).unwrap();
            let r = compute_fibers(&bf, &order, &opts()).unwrap();
            let alg = RationalQuaternionAlgebra::from_spec(&spec).unwrap();
            let (d, l): (u64, u64) = (dp.iter().product(), lp.iter().product());
            let eo = eichler_suborder(&maximal_order(&alg, d).unwrap(), l).unwrap();
            let cs = ideal_class_set(&eo, 5000).unwrap();
            cases += 1;
            let mass = eichler_mass(&bf, &order);
            if r.total_u64() != Some(cs.class_number() as u64) || cs.mass != mass {
                mismatches.push(format!("D={d} N={l}: formula {} oracle {}", r.total, cs.class_number()));
            }
            if l == 1 && [2, 3, 5, 7, 11, 13].contains(&d) {
                anchors.push((d, cs.class_number()));
            }
        }
    }
    anchors.sort();
    let hs: Vec<usize> = anchors.iter().map(|a| a.1).collect();
    let elapsed = t.elapsed();
    let ok = mismatches.is_empty() && hs == vec![1, 1, 1, 1, 2, 1] && elapsed < Duration::from_secs(60);
    let mut detail = format!("{cases} orders with D*N <= 200, maximal h = {hs:?}, {elapsed:.2?}");
    if !mismatches.is_empty() {
        detail += &format!("; mismatches: {}", mismatches.join(", "));
    }
    verdict(ok, detail)
}

/// Criterion 3 sweep: maximal and prime-level orders in the unramified
/// definite algebra of every field.
fn sweep_unramified(fields: &[BaseField]) -> (Vec<Case>, Vec<String>, usize, Duration) {
    let t = Instant::now();
    let mut cases = Vec::new();
    let mut failures = Vec::new();
    let mut clashes = 0;
    for bf in fields {
        let alg = find_unramified_definite_algebra(&bf.f, 200).unwrap();
        let levels: Vec<Vec<PrimeIdeal>> =
            std::iter::once(Vec::new()).chain(small_primes(bf, 50).into_iter().map(|q| vec![q])).collect();
        for level in levels {
            let order = eichler_order(&alg, &level).unwrap();
            match compute_fibers(bf, &order, &opts()) {
                Ok(report) => {
                    if !report.psi.iter().all(|v| v.is_integer() && v > &Rat::zero()) {
                        failures.push(format!("d={} level {:?}", bf.f.d, order.level_labels()));
                    }
                    cases.push(Case { d: bf.f.d, order, report, unramified: true });
                }
                Err(Error::Unsupported(_)) => clashes += 1,
                Err(e) => failures.push(format!("d={} level {:?}: {e}", bf.f.d, order.level_labels())),
            }
        }
    }
    (cases, failures, clashes, t.elapsed())
}

/// Definite algebras ramified at two primes of small norm, maximal and with
/// one level prime.
fn sweep_ramified(fields: &[BaseField]) -> (Vec<Case>, Vec<String>) {
    let mut cases = Vec::new();
    let mut failures = Vec::new();
    for bf in fields {
        let ps = small_primes(bf, 50);
        let pairs = [(0usize, 1usize), (1, 2), (0, 3)];
        for &(i, j) in &pairs {
            if j >= ps.len() {
                continue;
            }
            let ram = vec![ps[i].clone(), ps[j].clone()];
            let alg = match find_definite_algebra_ramified_at(&bf.f, &bf.group, &ram, 200) {
                Ok(a) => a,
                Err(e) => {
                    failures.push(format!(
                        "d={}: algebra ramified at {:?}: {e}",
                        bf.f.d,
                        [ps[i].label(), ps[j].label()]
                    ));
                    continue;
                }
            };
            let level_prime = ps.iter().find(|q| !ram.contains(q)).cloned();
            for level in [Vec::new(), level_prime.into_iter().collect()] {
                let order = eichler_order(&alg, &level).unwrap();
                match compute_fibers(bf, &order, &opts()) {
                    Ok(report) => cases.push(Case { d: bf.f.d, order, report, unramified: false }),
                    Err(Error::Unsupported(_)) => {}
                    Err(e) => failures.push(format!(
                        "d={} ram {:?} level {:?}: {e}",
                        bf.f.d,
                        alg.ram_labels(),
                        order.level_labels()
                    )),
                }
            }
        }
    }
    (cases, failures)
}

fn criterion_4(cases: &[Case], sweep_failures: &[String]) -> Verdict {
    let mut bad = sweep_failures.to_vec();
    let mut ramified = 0;
    for c in cases {
        let total = c.report.total.0.to_integer();
        let h = Int::from(c.report.h);
        let hp = Int::from(c.report.h_plus);
        if !(&total % &h).is_zero() {
            bad.push(format!("d={}: h={} does not divide {}", c.d, c.report.h, total));
        }
        if !c.order.alg.ram_finite.is_empty() {
            ramified += 1;
            if !(&total % &hp).is_zero() {
                bad.push(format!(
                    "d={} ram {:?}: h+={} does not divide {}",
                    c.d,
                    c.order.alg.ram_labels(),
                    c.report.h_plus,
                    total
                ));
            }
        }
    }
    verdict(bad.is_empty(), format!("{} orders ({ramified} finitely ramified){}", cases.len(), failure_suffix(&bad)))
}

fn failure_suffix(bad: &[String]) -> String {
    if bad.is_empty() {
        String::new()
    } else {
        format!("; {} failures, first: {}", bad.len(), bad[0])
    }
}

/// Recomputes delta sums on every wide class directly from the reports.
fn criterion_5(fields: &[BaseField], cases: &[Case]) -> Verdict {
    let by_d: BTreeMap<i64, &BaseField> = fields.iter().map(|bf| (bf.f.d, bf)).collect();
    let mut checked = 0;
    let mut bad = Vec::new();
    for c in cases {
        let bf = by_d[&c.d];
        let g = &bf.group;
        for base in [0u8, 1] {
            let r = match compute_fibers(bf, &c.order, &base_with(base)) {
                Ok(r) => r,
                Err(e) => {
                    bad.push(format!("d={} base {base}: {e}", c.d));
                    continue;
                }
            };
            for t in r.terms.iter().filter(|t| t.selectivity.selective) {
                checked += 1;
                for coset in &g.cosets {
                    let sum: usize = coset.iter().map(|&k| t.selectivity.delta[k] as usize).sum();
                    if 2 * sum != g.r() {
                        bad.push(format!("d={} {} base {base}: coset sum {sum}, r = {}", c.d, t.order, g.r()));
                    }
                }
            }
        }
    }
    verdict(bad.is_empty() && checked > 0, format!("{checked} selective (order, base) pairs{}", failure_suffix(&bad)))
}

fn criterion_6(cases: &[Case]) -> Verdict {
    let mut bad = Vec::new();
    let mut n = 0;
    for c in cases.iter().filter(|c| c.unramified) {
        n += 1;
        let expect = &c.report.total.0 / Rat::from_integer(Int::from(c.report.h));
        if !c.report.phi.iter().all(|v| *v == expect) {
            bad.push(format!("d={} level {:?}: phi {:?}", c.d, c.order.level_labels(), c.report.phi_fibers));
        }
    }
    verdict(
        bad.is_empty(),
        format!("{n} unramified orders, phi = h(O)/h(F) on every wide class{}", failure_suffix(&bad)),
    )
}

/// Every assignment of `Delta(B, O)` to the selective orders.
fn criterion_7(fields: &[BaseField], cases: &[Case]) -> Verdict {
    let by_d: BTreeMap<i64, &BaseField> = fields.iter().map(|bf| (bf.f.d, bf)).collect();
    let anchor_bf = BaseField::new(7, &CatalogOptions::default()).unwrap();
    let anchor_alg = find_unramified_definite_algebra(&anchor_bf.f, 50).unwrap();
    let anchor_order = eichler_order(&anchor_alg, &[]).unwrap();
    let anchor = compute_fibers(&anchor_bf, &anchor_order, &opts()).unwrap();
    let mut jobs: Vec<(&BaseField, &EichlerOrderSpec, &FiberReport)> = vec![(&anchor_bf, &anchor_order, &anchor)];
    jobs.extend(cases.iter().filter(|c| c.unramified).map(|c| (by_d[&c.d], &c.order, &c.report)));
    let mut runs = 0usize;
    let mut bad = Vec::new();
    for (bf, order, base) in jobs {
        let keys: Vec<&String> = base.assumptions.delta_base.keys().collect();
        for mask in 0u64..(1 << keys.len()) {
            let overrides = keys.iter().enumerate().map(|(i, k)| ((*k).clone(), ((mask >> i) & 1) as u8)).collect();
            let o = FiberOptions { delta_base: DeltaBase { default: 1, overrides }, relaxed: true };
            runs += 1;
            match compute_fibers(bf, order, &o) {
                Ok(r) if r.phi == base.phi && r.total == base.total => {}
                Ok(r) => bad.push(format!(
                    "d={} level {:?} mask {mask:b}: phi {:?}",
                    bf.f.d,
                    order.level_labels(),
                    r.phi_fibers
                )),
                Err(e) => bad.push(format!("d={} mask {mask:b}: {e}", bf.f.d)),
            }
        }
    }
    verdict(bad.is_empty(), format!("{runs} recomputations, phi and total unchanged{}", failure_suffix(&bad)))
}

fn criterion_8(fields: &[BaseField], cases: &[Case]) -> Verdict {
    let q = BaseField::new(1, &CatalogOptions::default()).unwrap();
    let mut bad = Vec::new();
    let mut n = 0;
    for p in [2u64, 3, 5, 7, 11, 13] {
        let ram = vec![prime_ideals_above(&q.f, p).remove(0)];
        let alg = find_definite_algebra_ramified_at(&q.f, &q.group, &ram, 500).unwrap();
        for level in [Vec::new(), vec![prime_ideals_above(&q.f, if p == 2 { 3 } else { 2 }).remove(0)]] {
            let order = eichler_order(&alg, &level).unwrap();
            let r = compute_fibers(&q, &order, &opts()).unwrap();
            n += 1;
            if !r.selective_orders().is_empty() {
                bad.push(format!("Q disc {p}: {:?}", r.selective_orders()));
            }
        }
    }
    let minus_one: Vec<i64> = fields.iter().filter(|bf| bf.f.unit_norm == -1).map(|bf| bf.f.d).collect();
    for c in cases.iter().filter(|c| minus_one.contains(&c.d)) {
        n += 1;
        if !c.report.selective_orders().is_empty() {
            bad.push(format!("d={}: {:?}", c.d, c.report.selective_orders()));
        }
    }
    verdict(
        bad.is_empty(),
        format!(
            "{n} orders over Q and {} fields with N(eps) = -1, no selective orders{}",
            minus_one.len(),
            failure_suffix(&bad)
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut lines: Vec<(u32, &str, Verdict)> = Vec::new();
    lines.push((1, "sqrt7 anchor", criterion_1()));
    lines.push((2, "oracle equivalence over Q", criterion_2()));
    let fields = fields();
    let (unram, failures3, clashes, t3) = sweep_unramified(&fields);
    let c3 = verdict(
        failures3.is_empty() && t3 < Duration::from_secs(600),
        format!(
            "{} orders over {} fields, every h_sc a positive integer ({clashes} conductor clashes skipped), {t3:.2?}{}",
            unram.len(),
            fields.len(),
            failure_suffix(&failures3)
        ),
    );
    lines.push((3, "integrality sweep", c3));
    let (ram, failures4) = sweep_ramified(&fields);
    let all: Vec<Case> = unram.into_iter().chain(ram).collect();
    lines.push((4, "divisibility", criterion_4(&all, &failures4)));
    lines.push((5, "coset sums", criterion_5(&fields, &all)));
    lines.push((6, "fiber equality", criterion_6(&all)));
    lines.push((7, "base independence", criterion_7(&fields, &all)));
    lines.push((8, "selectivity negative control", criterion_8(&fields, &all)));
    let mut ok = true;
    for (n, name, v) in &lines {
        ok &= v.ok;
        println!("criterion {n} ({name}): {}: {}", if v.ok { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {} in {:.2?}", if ok { "PASS" } else { "FAIL" }, start.elapsed());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

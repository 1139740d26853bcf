//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nearab::arith::as_prime_power;
use nearab::group::{construct, GroupSpec};
use nearab::lattice::SubgroupLattice;
use nearab::structure::{classify_tqh_p_group, scalar_morphism_check, Verdict};
use nearab::validate::{
    abelian_groups_of_order, corpus, master_graph_checks, unit_checks, validate, CorpusConfig, Suite, ValidateConfig,
    ValidationReport,
};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn within(elapsed: Duration, limit: Duration) -> String {
    format!("{:.3} s, limit {:.1} s", elapsed.as_secs_f64(), limit.as_secs_f64())
}

fn master_graph() -> Outcome {
    let limit = Duration::from_millis(100);
    let start = Instant::now();
    let checks = master_graph_checks();
    let elapsed = start.elapsed();
    let exact = checks.iter().all(|c| c.is_pass());
    outcome(exact && elapsed < limit, format!("edges and ranks exact: {exact}; {}", within(elapsed, limit)))
}

fn unit_groups() -> Outcome {
    let limit = Duration::from_secs(10);
    let start = Instant::now();
    let cases = unit_checks();
    let elapsed = start.elapsed();
    let checks: Vec<_> = cases.iter().flat_map(|(_, c)| c).collect();
    let bad: Vec<&str> =
        cases.iter().filter(|(_, c)| !c.iter().all(|c| c.is_pass())).map(|(n, _)| n.as_str()).collect();
    // 25 odd primes up to 101 times three levels, plus three levels at 2
    let complete = cases.len() == 78;
    outcome(
        bad.is_empty() && complete && elapsed < limit,
        format!("{} moduli, {} checks, mismatches {bad:?}; {}", cases.len(), checks.len(), within(elapsed, limit)),
    )
}

fn scalar_lemma() -> Outcome {
    let limit = Duration::from_secs(60);
    let start = Instant::now();
    let mut groups = 0;
    let mut bad = Vec::new();
    for n in 1..=64u64 {
        let types = if n == 1 { vec![GroupSpec::Cyclic { n: 1 }] } else { abelian_groups_of_order(n) };
        for spec in types {
            groups += 1;
            let g = construct(&spec).expect("abelian specs build");
            match scalar_morphism_check(&g) {
                Ok(r) if r.equal => {}
                other => bad.push(format!("{spec}: {other:?}")),
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed < limit,
        format!("{groups} abelian groups, set mismatches {bad:?}; {}", within(elapsed, limit)),
    )
}

struct PGroupFacts {
    spec: String,
    tqh: bool,
    quasihamiltonian: bool,
    modular: bool,
}

fn p_group_facts() -> Vec<PGroupFacts> {
    corpus(&CorpusConfig::default())
        .into_iter()
        .filter_map(|spec| {
            let (p, _) = as_prime_power(spec.order()?)?;
            let g = construct(&spec).expect("corpus specs build");
            let l = SubgroupLattice::enumerate(&g).expect("p-groups fit the lattice cap");
            let tqh = classify_tqh_p_group(&l, p).expect("order is a power of p").is_tqh();
            Some(PGroupFacts {
                spec: spec.to_string(),
                tqh,
                quasihamiltonian: l.is_quasihamiltonian().0,
                modular: l.is_modular().0,
            })
        })
        .collect()
}

fn classifier(facts: &[PGroupFacts], elapsed: Duration) -> Outcome {
    let limit = Duration::from_secs(300);
    let disagree: Vec<&str> = facts.iter().filter(|f| f.tqh != f.quasihamiltonian).map(|f| f.spec.as_str()).collect();
    let find = |name: &str| facts.iter().find(|f| f.spec == name).map(|f| (f.tqh, f.quasihamiltonian));
    let mandatory = find("Scalar[4]x|Z(2),r=3") == Some((false, false))
        && find("M(2)") == Some((true, true))
        && find("Scalar[9]x|Z(3),r=4") == Some((true, true));
    let orders: BTreeSet<u64> = facts
        .iter()
        .filter_map(|f| f.spec.strip_prefix("Z(").and_then(|s| s.strip_suffix(')')).and_then(|s| s.parse().ok()))
        .collect();
    let bounds_reached = orders.contains(&64) && orders.contains(&81) && orders.contains(&125);
    outcome(
        disagree.is_empty() && mandatory && bounds_reached && elapsed < limit,
        format!(
            "{} p-groups, disagreements {disagree:?}, D8/Q8/order-27 examples correct: {mandatory}, bounds 64/81/125 reached: {bounds_reached}; {}",
            facts.len(),
            within(elapsed, limit)
        ),
    )
}

fn p_modular(facts: &[PGroupFacts]) -> Outcome {
    let disagree: Vec<&str> = facts.iter().filter(|f| f.modular != f.quasihamiltonian).map(|f| f.spec.as_str()).collect();
    let nonmodular = facts.iter().filter(|f| !f.modular).count();
    outcome(
        disagree.is_empty() && !facts.is_empty(),
        format!("{} p-groups ({nonmodular} non-modular), disagreements {disagree:?}", facts.len()),
    )
}

fn failures(report: &ValidationReport, suite: Suite) -> Vec<String> {
    report
        .entries_for(suite)
        .filter(|e| e.check.is_fail())
        .map(|e| format!("{} / {}", e.group_spec, e.check.clause))
        .collect()
}

fn groups_in(report: &ValidationReport, suite: Suite) -> BTreeSet<&str> {
    report.entries_for(suite).map(|e| e.group_spec.as_str()).collect()
}

fn iwasawa(report: &ValidationReport) -> Outcome {
    let bad = failures(report, Suite::Iwasawa);
    let groups = groups_in(report, Suite::Iwasawa);
    let passes = report.entries_for(Suite::Iwasawa).filter(|e| e.check.is_pass()).count();
    // five properties per factor
    let complete = groups.len() == 20 && passes == 5 * groups.len();
    outcome(bad.is_empty() && complete, format!("{} factors, {passes} passing checks, failures {bad:?}", groups.len()))
}

fn zero_failures(report: &ValidationReport, suite: Suite) -> Outcome {
    let bad = failures(report, suite);
    let groups = groups_in(report, suite).len();
    let covered = groups == report.corpus_size;
    let s = report.by_suite[&suite];
    outcome(bad.is_empty() && covered, format!("{groups}/{} groups covered, {s}, failures {bad:?}", report.corpus_size))
}

fn edge_conditions(report: &ValidationReport) -> Outcome {
    let bad = failures(report, Suite::Apq);
    let flagged: Vec<&str> = report
        .entries_for(Suite::Apq)
        .filter(|e| matches!(e.check.verdict, Verdict::Flagged { .. }))
        .map(|e| e.group_spec.as_str())
        .collect();
    let not_met = |name: &str| {
        let v: Vec<_> = report.entries_for(Suite::Apq).filter(|e| e.group_spec == name).collect();
        !v.is_empty() && v.iter().all(|e| matches!(e.check.verdict, Verdict::HypothesisNotMet { .. }))
    };
    let excluded = not_met("Scalar[3]x|Z(2),r=2") && not_met("M(2)");
    let s = report.by_suite[&Suite::Apq];
    outcome(
        bad.is_empty() && flagged.is_empty() && excluded,
        format!("{s}, failures {bad:?}, p = 2 sloping edges {flagged:?}, S3 and Q8 excluded: {excluded}"),
    )
}

fn modular_decomposition(report: &ValidationReport, elapsed: Duration) -> Outcome {
    let limit = Duration::from_secs(300);
    let bad = failures(report, Suite::ModularMain);
    let decomposed: BTreeSet<&str> = report
        .entries_for(Suite::ModularMain)
        .filter(|e| e.check.clause.starts_with("blocks: "))
        .map(|e| e.group_spec.as_str())
        .collect();
    let not_modular: BTreeSet<&str> = report
        .entries_for(Suite::ModularMain)
        .filter(|e| matches!(e.check.verdict, Verdict::HypothesisNotMet { .. }))
        .map(|e| e.group_spec.as_str())
        .collect();
    let covered = decomposed.len() + not_modular.len() == report.corpus_size;
    outcome(
        bad.is_empty() && covered && !report.has_failures() && elapsed < limit,
        format!(
            "{} modular groups decomposed, {} not modular, failures {bad:?}, validate-all failures {}; {}",
            decomposed.len(),
            not_modular.len(),
            report.summary.fail,
            within(elapsed, limit)
        ),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    results.push(("master graph up to 13", master_graph()));
    results.push(("unit groups against brute force", unit_groups()));
    results.push(("cyclic-fixing automorphisms are scalar", scalar_lemma()));

    let start = Instant::now();
    let facts = p_group_facts();
    let elapsed = start.elapsed();
    results.push(("p-group classifier against permutability", classifier(&facts, elapsed)));
    results.push(("p-groups: modular iff quasihamiltonian", p_modular(&facts)));

    let start = Instant::now();
    let report = validate(&Suite::ALL, &ValidateConfig::default());
    let elapsed = start.elapsed();
    results.push(("Iwasawa factors", iwasawa(&report)));
    results.push(("Schur-Zassenhaus complements", zero_failures(&report, Suite::SchurZassenhaus)));
    results.push(("nu-decomposition", zero_failures(&report, Suite::Nu)));
    results.push(("prime graph edge conditions", edge_conditions(&report)));
    results.push(("modular groups split into blocks", modular_decomposition(&report, elapsed)));

    let mut all = true;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("{} [{}] {name}: {}", if o.ok { "PASS" } else { "FAIL" }, i + 1, o.detail);
        all &= o.ok;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

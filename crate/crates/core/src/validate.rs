//! The generated corpus and the validation suites run over it.

use std::cell::OnceCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::arith::{as_prime_power, factorize, gcd, is_prime, pow_mod, prime_divisors};
use crate::error::{Error, Result};
use crate::group::{construct, FiniteGroup, GroupSpec, Subgroup};
use crate::lattice::{ModularityWitness, PermutabilityWitness, SubgroupLattice, LATTICE_CAP};
use crate::primegraph::{build_master_graph, unit_group_bruteforce, unit_group_structure, EdgeKind, PrimaryDecomposition, PrimaryFactor};
use crate::structure::sylow::internal_direct_product;
use crate::structure::{
    apq_check, cga_az_check, classify_tqh_p_group, find_base, find_scaling_subgroup, is_inductively_monothetic_finite,
    members, modular_main_check, nu_decomposition_check, prime_graph_of_group, recognize_iwasawa_pq, sandwich_check,
    scalar_morphism_check, sigma_component, sigma_sylow, sz_complement, szc_status, BaseWitness, Check, Verdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    MasterGraph,
    Units,
    Scalar,
    Tqh,
    PModular,
    Iwasawa,
    SchurZassenhaus,
    Nu,
    Apq,
    ModularMain,
    NearAbelian,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::MasterGraph,
        Suite::Units,
        Suite::Scalar,
        Suite::Tqh,
        Suite::PModular,
        Suite::Iwasawa,
        Suite::SchurZassenhaus,
        Suite::Nu,
        Suite::Apq,
        Suite::ModularMain,
        Suite::NearAbelian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::MasterGraph => "master-graph",
            Suite::Units => "units",
            Suite::Scalar => "scalar",
            Suite::Tqh => "tqh",
            Suite::PModular => "p-modular",
            Suite::Iwasawa => "iwasawa",
            Suite::SchurZassenhaus => "schur-zassenhaus",
            Suite::Nu => "nu",
            Suite::Apq => "apq",
            Suite::ModularMain => "modular-main",
            Suite::NearAbelian => "near-abelian",
        }
    }

    /// Suites that do not run over the group corpus.
    pub fn is_global(self) -> bool {
        matches!(self, Suite::MasterGraph | Suite::Units)
    }

    /// A comma separated list of suite names; `all` selects every suite.
    pub fn parse_selection(text: &str) -> Result<Vec<Suite>> {
        let mut out = BTreeSet::new();
        for part in text.split(',').map(str::trim) {
            if part == "all" {
                out.extend(Suite::ALL);
            } else {
                out.insert(part.parse()?);
            }
        }
        Ok(out.into_iter().collect())
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Order bounds for the generated corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusConfig {
    pub max_order: u64,
    /// Larger bounds for `p`-groups, keyed by `p`.
    pub p_group_orders: BTreeMap<u64, u64>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self { max_order: 64, p_group_orders: BTreeMap::from([(2, 81), (3, 81), (5, 125)]) }
    }
}

impl CorpusConfig {
    pub fn admits(&self, order: u64) -> bool {
        if order <= self.max_order {
            return true;
        }
        as_prime_power(order).is_some_and(|(p, _)| self.p_group_orders.get(&p).is_some_and(|&b| order <= b))
    }

    fn largest(&self) -> u64 {
        self.p_group_orders.values().copied().fold(self.max_order, u64::max)
    }
}

pub const IWASAWA_PAIRS: [(u64, u64); 5] = [(2, 3), (2, 5), (3, 7), (5, 11), (3, 13)];

fn partitions(k: u32, largest: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=k.min(largest)).rev() {
        for mut rest in partitions(k - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every abelian group of order `n` up to isomorphism, as a cyclic group when it is one.
pub fn abelian_groups_of_order(n: u64) -> Vec<GroupSpec> {
    let mut acc: Vec<Vec<u64>> = vec![vec![]];
    for (p, k) in factorize(n) {
        let mut next = Vec::new();
        for prefix in &acc {
            for part in partitions(k, k) {
                let mut f = prefix.clone();
                f.extend(part.iter().rev().map(|&e| p.pow(e)));
                next.push(f);
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|factors| {
            let cyclic = factorize(n).len() == factors.len();
            if cyclic {
                GroupSpec::Cyclic { n }
            } else {
                GroupSpec::AbelianProduct { factors }
            }
        })
        .collect()
}

/// Iwasawa factors for the fixed prime pairs, `c` in `{p, p^2}` and every scalar `z` of order `p`.
pub fn iwasawa_family() -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for (p, q) in IWASAWA_PAIRS {
        for c in [p, p * p] {
            for z in (2..q).filter(|&z| pow_mod(z, p, q) == 1) {
                out.push(GroupSpec::iwasawa(p, q, c, z));
            }
        }
    }
    out
}

/// `A x| Z(h)` for `A` in `{Z(p^2), Z(p^3), Z(p) x Z(p^2)}`, `h` a power of `p` and
/// every unit `r != 1` with `r^h = 1` modulo the exponent of `A`.
fn scalar_family(cfg: &CorpusConfig) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        for base in [vec![p * p], vec![p * p * p], vec![p, p * p]] {
            let exp = *base.iter().max().expect("bases are nonempty");
            let size: u64 = base.iter().product();
            let mut h = p;
            while cfg.admits(size * h) {
                for r in (2..exp).filter(|&r| gcd(r, exp) == 1 && pow_mod(r, h, exp) == 1) {
                    out.push(GroupSpec::SemidirectScalar { base: base.clone(), h, r });
                }
                h *= p;
            }
        }
    }
    out
}

/// The corpus, sorted by spec string with duplicates removed.
pub fn corpus(cfg: &CorpusConfig) -> Vec<GroupSpec> {
    let mut abelian = Vec::new();
    for n in 2..=cfg.largest() {
        if cfg.admits(n) {
            abelian.extend(abelian_groups_of_order(n));
        }
    }
    let mut nonabelian = Vec::new();
    for n in 3.. {
        if 2 * n > cfg.largest() {
            break;
        }
        if cfg.admits(2 * n) {
            nonabelian.push(GroupSpec::dihedral(n));
        }
    }
    for n in 2u32.. {
        let order = 2u64.pow(n + 1);
        if order > cfg.largest() {
            break;
        }
        if cfg.admits(order) {
            nonabelian.push(GroupSpec::QuaternionM { n });
        }
    }
    nonabelian.extend(scalar_family(cfg));
    // the named Iwasawa factors are kept whatever the order bound
    nonabelian.extend(iwasawa_family());

    let order = |s: &GroupSpec| s.order().expect("corpus orders are small");
    let mut products = Vec::new();
    for n in &nonabelian {
        for a in &abelian {
            if cfg.admits(order(n) * order(a)) {
                products.push(GroupSpec::product(vec![n.clone(), a.clone()]));
            }
        }
    }
    for (i, x) in nonabelian.iter().enumerate() {
        for y in &nonabelian[i..] {
            if cfg.admits(order(x) * order(y)) {
                products.push(GroupSpec::product(vec![x.clone(), y.clone()]));
            }
        }
    }
    let mut all: BTreeMap<String, GroupSpec> = BTreeMap::new();
    for s in abelian.into_iter().chain(nonabelian).chain(products) {
        all.entry(s.to_string()).or_insert(s);
    }
    all.into_values().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidateConfig {
    pub corpus: CorpusConfig,
    /// Largest group order whose subgroup lattice is enumerated.
    pub lattice_cap: usize,
    pub timings: bool,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self { corpus: CorpusConfig::default(), lattice_cap: LATTICE_CAP, timings: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub suite: Suite,
    pub group_spec: String,
    #[serde(flatten)]
    pub check: Check,
    /// Milliseconds spent on this group in this suite.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub hypothesis_not_met: usize,
    pub flagged: usize,
}

impl Summary {
    fn add(&mut self, v: &Verdict) {
        match v {
            Verdict::Pass => self.pass += 1,
            Verdict::Fail { .. } => self.fail += 1,
            Verdict::HypothesisNotMet { .. } => self.hypothesis_not_met += 1,
            Verdict::Flagged { .. } => self.flagged += 1,
        }
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pass {} fail {} not-met {} flagged {}",
            self.pass, self.fail, self.hypothesis_not_met, self.flagged
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub suite: String,
    pub corpus_size: usize,
    pub summary: Summary,
    pub by_suite: BTreeMap<Suite, Summary>,
    pub entries: Vec<Entry>,
}

impl ValidationReport {
    pub fn from_entries(suite: String, corpus_size: usize, mut entries: Vec<Entry>) -> Self {
        entries.sort_by(|a, b| a.group_spec.cmp(&b.group_spec).then(a.suite.cmp(&b.suite)));
        let mut summary = Summary::default();
        let mut by_suite: BTreeMap<Suite, Summary> = BTreeMap::new();
        for e in &entries {
            summary.add(&e.check.verdict);
            by_suite.entry(e.suite).or_default().add(&e.check.verdict);
        }
        Self { suite, corpus_size, summary, by_suite, entries }
    }

    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialisation cannot fail")
    }

    pub fn entries_for(&self, suite: Suite) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(move |e| e.suite == suite)
    }
}

/// Runs the selected suites over the corpus.
pub fn validate(suites: &[Suite], cfg: &ValidateConfig) -> ValidationReport {
    let label = if suites.len() == Suite::ALL.len() {
        "all".to_string()
    } else {
        suites.iter().map(|s| s.name()).collect::<Vec<_>>().join(",")
    };
    let mut entries = Vec::new();
    for &s in suites.iter().filter(|s| s.is_global()) {
        entries.extend(timed(s, cfg.timings, || match s {
            Suite::MasterGraph => vec![("MasterGraph(13)".to_string(), master_graph_checks())],
            _ => unit_checks(),
        }));
    }
    let member_suites: Vec<Suite> = suites.iter().copied().filter(|s| !s.is_global()).collect();
    let specs = if member_suites.is_empty() { vec![] } else { corpus(&cfg.corpus) };
    let per_group: Vec<Vec<Entry>> = specs.par_iter().map(|s| analyse_group(s, &member_suites, cfg)).collect();
    entries.extend(per_group.into_iter().flatten());
    ValidationReport::from_entries(label, specs.len(), entries)
}

fn timed(suite: Suite, timings: bool, f: impl FnOnce() -> Vec<(String, Vec<Check>)>) -> Vec<Entry> {
    let start = Instant::now();
    let batches = f();
    let ms = timings.then(|| start.elapsed().as_secs_f64() * 1e3);
    batches
        .into_iter()
        .flat_map(|(name, checks)| {
            checks.into_iter().map(move |check| Entry { suite, group_spec: name.clone(), check, timings: ms })
        })
        .collect()
}

/// Cached facts about one corpus member.
struct Member<'g> {
    spec: &'g GroupSpec,
    g: &'g FiniteGroup,
    lattice: Option<SubgroupLattice<'g>>,
    qh: OnceCell<(bool, Option<PermutabilityWitness>)>,
    modular: OnceCell<(bool, Option<ModularityWitness>)>,
    base: OnceCell<Option<(BaseWitness, Subgroup)>>,
}

impl<'g> Member<'g> {
    fn qh(&self, l: &SubgroupLattice) -> &(bool, Option<PermutabilityWitness>) {
        self.qh.get_or_init(|| l.is_quasihamiltonian())
    }

    fn modular(&self, l: &SubgroupLattice) -> &(bool, Option<ModularityWitness>) {
        self.modular.get_or_init(|| l.is_modular())
    }

    fn base(&self, l: &SubgroupLattice) -> Option<&(BaseWitness, Subgroup)> {
        self.base
            .get_or_init(|| {
                let w = find_base(l)?;
                let h = find_scaling_subgroup(self.g, &w)?;
                Some((w, h))
            })
            .as_ref()
    }

    fn p(&self) -> Option<u64> {
        as_prime_power(self.g.order() as u64).map(|(p, _)| p)
    }
}

/// Runs the per-group suites on one group.
pub fn analyse_group(spec: &GroupSpec, suites: &[Suite], cfg: &ValidateConfig) -> Vec<Entry> {
    let name = spec.to_string();
    let g = match construct(spec) {
        Ok(g) => g,
        Err(e) => {
            let check = Check::fail("group construction", json!(e.to_string()));
            return vec![Entry { suite: suites[0], group_spec: name, check, timings: None }];
        }
    };
    let lattice =
        if g.order() <= cfg.lattice_cap { SubgroupLattice::enumerate_with_cap(&g, cfg.lattice_cap).ok() } else { None };
    let m = Member { spec, g: &g, lattice, qh: OnceCell::new(), modular: OnceCell::new(), base: OnceCell::new() };
    let mut out = Vec::new();
    for &s in suites.iter().filter(|s| !s.is_global()) {
        out.extend(timed(s, cfg.timings, || vec![(name.clone(), run_member_suite(s, &m))]));
    }
    out
}

fn run_member_suite(s: Suite, m: &Member) -> Vec<Check> {
    if s == Suite::Nu {
        return nu_decomposition_check(m.g).checks;
    }
    if s == Suite::Scalar {
        return scalar_checks(m.g);
    }
    let Some(l) = &m.lattice else {
        return vec![Check::not_met("subgroup lattice", "group order exceeds the lattice cap")];
    };
    match s {
        Suite::Tqh => tqh_checks(m, l),
        Suite::PModular => p_modular_checks(m, l),
        Suite::Iwasawa => iwasawa_checks(m, l),
        Suite::SchurZassenhaus => sz_checks(m, l),
        Suite::Apq => match m.base(l) {
            None => vec![Check::not_met("edge conditions", "no abelian base with cyclic quotient")],
            Some((w, h)) => apq_check(m.g, w, &prime_graph_of_group(m.g, w, h)),
        },
        Suite::ModularMain => {
            if !m.modular(l).0 {
                return vec![Check::not_met("modular decomposition", "subgroup lattice is not modular")];
            }
            match modular_main_check(l) {
                Ok(d) => d.checks,
                Err(e) => vec![Check::fail("modular decomposition", json!(e.to_string()))],
            }
        }
        Suite::NearAbelian => near_abelian_checks(m, l),
        Suite::MasterGraph | Suite::Units | Suite::Nu | Suite::Scalar => unreachable!("handled above"),
    }
}

pub fn master_graph_checks() -> Vec<Check> {
    let graph = build_master_graph(13).expect("13 is a valid bound");
    let verticals: BTreeSet<u64> = graph.vertical_edges().map(|e| e.p).collect();
    let sloping: BTreeSet<(u64, u64)> = graph.sloping_edges().map(|e| (e.p, e.q)).collect();
    let want_v = BTreeSet::from([2, 3, 5, 7, 11, 13]);
    let want_s = BTreeSet::from([(2, 3), (2, 5), (2, 7), (2, 11), (2, 13), (3, 7), (3, 13), (5, 11)]);
    let dot = graph.to_dot();
    let ranks = dot.matches("rank=").count();
    vec![
        Check::expect("master graph vertical edges up to 13", verticals == want_v, || json!(verticals)),
        Check::expect("master graph sloping edges up to 13", sloping == want_s, || json!(sloping)),
        Check::expect("DOT export has two ranks", ranks == 2, || json!({"ranks": ranks})),
    ]
}

/// Truncated structure formula against brute force, odd `q <= 101` with `m <= 3` and `q = 2` with `3 <= m <= 5`.
pub fn unit_checks() -> Vec<(String, Vec<Check>)> {
    let mut out = Vec::new();
    for q in (3..=101).filter(|&q| is_prime(q)) {
        let formula = unit_group_structure(q).expect("q is prime");
        for m in 1..=3 {
            let truncated = formula.truncate_omega(q, m - 1);
            out.push((format!("Units({q}^{m})"), vec![compare_units(q, m, &truncated)]));
        }
    }
    let formula = unit_group_structure(2).expect("2 is prime");
    for m in 3..=5 {
        let explicit = PrimaryDecomposition::new([PrimaryFactor::cyclic(2, 1), PrimaryFactor::cyclic(2, m - 2)]);
        let truncated = formula.truncate_omega(2, m - 2);
        let mut checks = vec![compare_units(2, m, &explicit)];
        checks.push(Check::expect("truncated formula at q = 2", truncated == explicit, || json!(truncated.to_string())));
        out.push((format!("Units(2^{m})"), checks));
    }
    out
}

fn compare_units(q: u64, m: u32, expected: &PrimaryDecomposition) -> Check {
    match unit_group_bruteforce(q, m) {
        Ok(brute) => Check::expect("unit group matches brute force", &brute == expected, || {
            json!({"formula": expected.to_string(), "brute_force": brute.to_string()})
        }),
        Err(e) => Check::fail("unit group matches brute force", json!(e.to_string())),
    }
}

fn scalar_checks(g: &FiniteGroup) -> Vec<Check> {
    if !g.is_abelian() {
        return vec![];
    }
    match scalar_morphism_check(g) {
        Ok(r) => vec![
            Check::expect("cyclic-fixing automorphisms are scalar", r.equal, || json!(r)),
            Check::expect("scalar maps counted by SAut", r.saut_order == Some(r.scalar as u64), || json!(r)),
        ],
        Err(e) => vec![Check::fail("cyclic-fixing automorphisms are scalar", json!(e.to_string()))],
    }
}

fn permutability_json(w: &Option<PermutabilityWitness>) -> serde_json::Value {
    json!(w.as_ref().map(|w| [members(&w.x), members(&w.y)]))
}

fn modularity_json(g: &FiniteGroup, w: &Option<ModularityWitness>) -> serde_json::Value {
    json!(w.as_ref().map(|w| {
        let pentagon: Vec<_> = w.pentagon(g).iter().map(members).collect();
        json!({"x": members(&w.x), "y": members(&w.y), "z": members(&w.z), "pentagon": pentagon})
    }))
}

fn tqh_checks(m: &Member, l: &SubgroupLattice) -> Vec<Check> {
    let g = m.g;
    let (qh, pw) = m.qh(l);
    let mut checks = Vec::new();
    if let Some(p) = m.p() {
        match classify_tqh_p_group(l, p) {
            Ok(class) => checks.push(Check::expect("classification agrees with permutability", class.is_tqh() == *qh, || {
                json!({"class": class.to_string(), "quasihamiltonian": qh, "non_permuting": permutability_json(pw)})
            })),
            Err(e) => checks.push(Check::fail("classification agrees with permutability", json!(e.to_string()))),
        }
    }
    if !*qh {
        return checks;
    }
    let (modular, mw) = m.modular(l);
    checks.push(Check::expect("quasihamiltonian implies modular", *modular, || modularity_json(g, mw)));
    let whole = g.whole();
    let sylows: Vec<Option<Subgroup>> =
        prime_divisors(g.order() as u64).into_iter().map(|p| sigma_component(g, &whole, &[p])).collect();
    if sylows.iter().any(Option::is_none) {
        checks.push(Check::fail("sylows: p-elements form subgroups", json!(null)));
    } else {
        let refs: Vec<&Subgroup> = sylows.iter().flatten().collect();
        checks.extend(internal_direct_product(g, &refs).into_iter().map(|mut c| {
            c.clause = format!("sylows: {}", c.clause);
            c
        }));
    }
    if let Some((w, h)) = m.base(l) {
        let graph = prime_graph_of_group(g, w, h);
        checks.push(Check::expect("prime graph components are vertical", graph.vertical_components_only(), || {
            json!(graph.edges)
        }));
    }
    checks
}

fn p_modular_checks(m: &Member, l: &SubgroupLattice) -> Vec<Check> {
    if m.p().is_none() {
        return vec![];
    }
    let (qh, pw) = m.qh(l);
    let (modular, mw) = m.modular(l);
    vec![Check::expect("modular iff quasihamiltonian", qh == modular, || {
        json!({"modular": modular, "quasihamiltonian": qh, "non_permuting": permutability_json(pw), "modular_failure": modularity_json(m.g, mw)})
    })]
}

fn iwasawa_checks(m: &Member, l: &SubgroupLattice) -> Vec<Check> {
    let GroupSpec::Iwasawa { p, q, .. } = *m.spec else {
        return vec![];
    };
    let g = m.g;
    let (qh, _) = m.qh(l);
    let (modular, mw) = m.modular(l);
    let rec = recognize_iwasawa_pq(g);
    let mut checks = vec![
        Check::expect("Iwasawa factor is modular", *modular, || modularity_json(g, mw)),
        Check::expect("Iwasawa factor is not quasihamiltonian", !qh, || json!(null)),
        Check::expect(
            "recognised as an Iwasawa (p,q)-factor",
            rec.as_ref().is_some_and(|r| r.p == p && r.q == q && r.semidirect),
            || json!({"recognised": rec.as_ref().map(|r| (r.p, r.q, r.semidirect))}),
        ),
        Check::expect("Z(G) = {h^p : h in H}", rec.as_ref().is_some_and(|r| r.center_matches), || {
            json!({"center": members(&g.center())})
        }),
    ];
    let edge = m.base(l).map(|(w, h)| prime_graph_of_group(g, w, h).edges);
    let single = edge.as_ref().is_some_and(|e| e.len() == 1 && e[0].p == p && e[0].q == q && e[0].kind == EdgeKind::Sloping);
    checks.push(Check::expect("prime graph is a single sloping edge", single, || json!(edge)));
    checks
}

fn sz_checks(m: &Member, l: &SubgroupLattice) -> Vec<Check> {
    let g = m.g;
    let mut inconsistent = None;
    let mut splitting = 0usize;
    let mut failure = None;
    for n in l.normal_subgroups() {
        if n.is_trivial() || n.order() == g.order() {
            continue;
        }
        let st = szc_status(g, n);
        if !st.consistent() && inconsistent.is_none() {
            inconsistent = Some(json!({"n": members(n), "status": st}));
        }
        if !st.all() {
            continue;
        }
        splitting += 1;
        match sz_complement(l, n) {
            Ok(r) if r.holds() => {}
            Ok(r) => {
                failure.get_or_insert_with(|| json!({"n": members(n), "report": r.check()}));
            }
            Err(e) => {
                failure.get_or_insert_with(|| json!({"n": members(n), "error": e.to_string()}));
            }
        }
    }
    let mut checks =
        vec![Check::expect("splitting condition forms agree", inconsistent.is_none(), || inconsistent.clone().unwrap_or_default())];
    if splitting == 0 {
        checks.push(Check::not_met("complements exist and are conjugate", "no proper normal subgroup meets the splitting condition"));
    } else {
        checks.push(Check::expect("complements exist and are conjugate", failure.is_none(), || failure.clone().unwrap_or_default()));
    }
    checks
}

fn near_abelian_checks(m: &Member, l: &SubgroupLattice) -> Vec<Check> {
    let g = m.g;
    let monothetic = is_inductively_monothetic_finite(g);
    let mut checks = vec![Check::expect("inductively monothetic iff cyclic", monothetic == g.is_cyclic(), || {
        json!({"monothetic": monothetic, "cyclic": g.is_cyclic()})
    })];
    let Some((w, h)) = m.base(l) else {
        match find_base(l) {
            None => checks.push(Check::not_met("near abelian base", "no abelian base with cyclic quotient")),
            Some(w) => checks.push(Check::fail("cyclic scaling subgroup exists", json!({"base": members(&w.a)}))),
        }
        return checks;
    };
    checks.push(Check::pass("cyclic scaling subgroup exists"));
    match sandwich_check(g, &w.a, h) {
        Ok(r) => checks.push(r.check()),
        Err(e) => checks.push(Check::fail("sandwich quotient kernel", json!(e.to_string()))),
    }
    checks.extend(cga_az_check(g, w, h));
    let primes = prime_divisors(g.order() as u64);
    for mask in 1..(1u32 << primes.len()) - 1 {
        let sigma: Vec<u64> = primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        checks.extend(sigma_sylow(l, w, &sigma, h).checks.into_iter().map(|mut c| {
            c.clause = format!("sigma {sigma:?}: {}", c.clause);
            c
        }));
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_type_counts() {
        // numbers of abelian groups of order 16, 36, 64, 72
        let count = |n| abelian_groups_of_order(n).len();
        assert_eq!((count(16), count(36), count(64), count(72), count(7)), (5, 4, 11, 6, 1));
        assert_eq!(abelian_groups_of_order(12), vec![GroupSpec::Cyclic { n: 12 }, GroupSpec::AbelianProduct { factors: vec![2, 2, 3] }]);
    }

    #[test]
    fn corpus_contents() {
        let c = corpus(&CorpusConfig::default());
        let names: BTreeSet<String> = c.iter().map(ToString::to_string).collect();
        assert_eq!(names.len(), c.len());
        for want in ["M(2)", "M(5)", "Scalar[9]x|Z(3),r=4", "Scalar[4]x|Z(2),r=3", "Iwasawa(5,11,c=25,z=3)", "Ab[3,3,3,3]"] {
            assert!(names.contains(want), "{want}");
        }
        assert!(c.iter().all(|s| CorpusConfig::default().admits(s.order().unwrap()) || matches!(s, GroupSpec::Iwasawa { .. })));
        assert_eq!(iwasawa_family().len(), 20);
        // Z(125) and Z(5)^3 are admitted, Z(128) is not
        assert!(names.contains("Z(125)") && !names.contains("Z(128)") && !names.contains("Z(100)"));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_value(s).unwrap(), json!(s.name()));
        }
        assert_eq!(Suite::parse_selection("all").unwrap().len(), 11);
        assert_eq!(Suite::parse_selection("nu,apq").unwrap(), vec![Suite::Nu, Suite::Apq]);
        assert!(Suite::parse_selection("bogus").is_err());
    }

    #[test]
    fn small_validation_run() {
        let cfg = ValidateConfig {
            corpus: CorpusConfig { max_order: 12, p_group_orders: BTreeMap::new() },
            ..Default::default()
        };
        let r = validate(&[Suite::MasterGraph, Suite::Nu, Suite::Apq], &cfg);
        assert!(!r.has_failures(), "{}", r.to_json());
        assert!(r.by_suite[&Suite::Apq].hypothesis_not_met > 0);
        let specs: Vec<&str> = r.entries.iter().map(|e| e.group_spec.as_str()).collect();
        assert!(specs.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(validate(&[Suite::MasterGraph, Suite::Nu, Suite::Apq], &cfg), r);
    }
}

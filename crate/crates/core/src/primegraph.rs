//! The prime master-graph and the primary structure of p-adic unit groups.
//!
//! The master-graph is bipartite: every prime appears once as an upper vertex
//! and once as a lower vertex. An upper prime `p` is joined to a lower prime
//! `q` when `q = p` (a vertical edge) or `p | q - 1` (a sloping edge). The
//! edges of the funnel above `q` describe the torsion of the unit group of the
//! `q`-adic integers; the edges of the cone below `p` describe the `p`-primary
//! part of the unit group of the profinite integers.
//!
//! The displayed formulas for these unit groups treat `q = 2` like an odd
//! prime. Here `q = 2` follows the brute-force truth instead: the units of
//! `Z_2` are `Z(2) x Z_2`, since `{1, 3, 5, 7}` mod 8 is not cyclic.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, factorize, is_prime, valuation};
use crate::error::{Error, Result};

/// Largest modulus accepted by [`unit_group_bruteforce`].
pub const BRUTEFORCE_MODULUS_LIMIT: u64 = 10_000_000;

/// Largest supported bound for the sieve behind [`build_master_graph`].
pub const MAX_BOUND: u64 = 1_000_000;

/// Order-preserving enumeration `n -> p_n` of the primes up to a bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeIndex {
    bound: u64,
    primes: Vec<u64>,
}

impl PrimeIndex {
    pub fn new(bound: u64) -> Result<Self> {
        if bound < 2 {
            return Err(Error::BoundTooSmall(bound));
        }
        if bound > MAX_BOUND {
            return Err(Error::OutOfBound { prime: bound, bound: MAX_BOUND });
        }
        Ok(Self { bound, primes: arith::primes_up_to(bound) })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// The prime `p_n`, 1-based.
    pub fn nth(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.primes.get(i).copied())
    }

    /// The 1-based position `n` with `p_n = p`.
    pub fn position(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok().map(|i| i + 1)
    }

    fn check(&self, p: u64) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > self.bound {
            return Err(Error::OutOfBound { prime: p, bound: self.bound });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Vertical,
    Sloping,
}

/// An edge from the upper vertex `p` to the lower vertex `q`.
///
/// For a sloping edge `q - 1 = p^k * s` with `gcd(p, s) = 1`; vertical edges
/// carry `k = 0, s = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub p: u64,
    pub q: u64,
    pub kind: EdgeKind,
    pub k: u32,
    pub s: u64,
}

impl Edge {
    pub fn vertical(p: u64) -> Self {
        Self { p, q: p, kind: EdgeKind::Vertical, k: 0, s: 1 }
    }

    fn sloping(p: u64, q: u64) -> Self {
        let k = valuation(p, q - 1);
        Self { p, q, kind: EdgeKind::Sloping, k, s: (q - 1) / p.pow(k) }
    }

    pub fn is_vertical(&self) -> bool {
        self.kind == EdgeKind::Vertical
    }
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.p).cmp(&(other.q, other.p))
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            EdgeKind::Vertical => write!(f, "{}->{} (vertical)", self.p, self.q),
            EdgeKind::Sloping => write!(f, "{}->{} (k={}, s={})", self.p, self.q, self.k, self.s),
        }
    }
}

/// `q = p` or `p | q - 1`.
pub fn prime_relation(p: u64, q: u64) -> Result<bool> {
    for x in [p, q] {
        if !is_prime(x) {
            return Err(Error::NotPrime(x));
        }
    }
    Ok(p == q || (q - 1) % p == 0)
}

/// The valuation data `(k, s)` of a sloping edge: `q - 1 = p^k * s`.
pub fn edge_data(p: u64, q: u64) -> Result<(u32, u64)> {
    if !prime_relation(p, q)? || p == q {
        return Err(Error::NotSloping { p, q });
    }
    let e = Edge::sloping(p, q);
    Ok((e.k, e.s))
}

/// The master-graph restricted to primes up to a bound.
///
/// Edges are kept sorted by `(q, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MasterGraph {
    index: PrimeIndex,
    edges: Vec<Edge>,
}

pub fn build_master_graph(bound: u64) -> Result<MasterGraph> {
    let index = PrimeIndex::new(bound)?;
    // smallest prime factor table for factoring every q - 1
    let n = bound as usize;
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut edges = Vec::new();
    for &q in index.primes() {
        let mut rest = (q - 1) as usize;
        let mut divisors = Vec::new();
        while rest > 1 {
            let p = spf[rest] as usize;
            divisors.push(p as u64);
            while rest % p == 0 {
                rest /= p;
            }
        }
        edges.extend(divisors.into_iter().map(|p| Edge::sloping(p, q)));
        edges.push(Edge::vertical(q));
    }
    Ok(MasterGraph { index, edges })
}

impl MasterGraph {
    pub fn bound(&self) -> u64 {
        self.index.bound()
    }

    pub fn index(&self) -> &PrimeIndex {
        &self.index
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertical_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.is_vertical())
    }

    pub fn sloping_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| !e.is_vertical())
    }

    /// Every edge whose upper vertex is `p`.
    pub fn cone(&self, p: u64) -> Result<Vec<Edge>> {
        self.index.check(p)?;
        Ok(self.edges.iter().filter(|e| e.p == p).copied().collect())
    }

    /// Every edge whose lower vertex is `q`. Complete, since all such edges have `p <= q`.
    pub fn funnel(&self, q: u64) -> Result<Vec<Edge>> {
        self.index.check(q)?;
        let start = self.edges.partition_point(|e| e.q < q);
        let end = self.edges.partition_point(|e| e.q <= q);
        Ok(self.edges[start..end].to_vec())
    }

    /// Keeps only the edges accepted by `keep`, as for the graph of a group.
    pub fn filtered(&self, mut keep: impl FnMut(&Edge) -> bool) -> MasterGraph {
        MasterGraph {
            index: self.index.clone(),
            edges: self.edges.iter().filter(|e| keep(e)).copied().collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphJson { bound: self.bound(), edges: &self.edges })
            .expect("graph serialisation cannot fail")
    }

    /// Graphviz rendering: upper primes on the first rank, lower primes on
    /// the second; vertical edges thin, sloping edges thick.
    pub fn to_dot(&self) -> String {
        let mut uppers: Vec<u64> = self.edges.iter().map(|e| e.p).collect();
        let mut lowers: Vec<u64> = self.edges.iter().map(|e| e.q).collect();
        uppers.sort_unstable();
        uppers.dedup();
        lowers.sort_unstable();
        lowers.dedup();
        let mut out = String::from("graph master {\n  rankdir=TB;\n  node [shape=circle];\n");
        out.push_str("  { rank=source;");
        for p in &uppers {
            out.push_str(&format!(" u{p} [label=\"{p}\"];"));
        }
        out.push_str(" }\n  { rank=sink;");
        for q in &lowers {
            out.push_str(&format!(" l{q} [label=\"{q}\"];"));
        }
        out.push_str(" }\n");
        for e in &self.edges {
            let style = match e.kind {
                EdgeKind::Vertical => "penwidth=1",
                EdgeKind::Sloping => "penwidth=3",
            };
            out.push_str(&format!("  u{} -- l{} [{style}];\n", e.p, e.q));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize)]
struct GraphJson<'a> {
    bound: u64,
    edges: &'a [Edge],
}

/// Exponent of a primary factor: `Z(p^k)` or the procyclic `Z_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Exponent {
    Finite(u32),
    Omega,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimaryFactor {
    pub p: u64,
    pub exponent: Exponent,
}

impl PrimaryFactor {
    pub fn cyclic(p: u64, k: u32) -> Self {
        Self { p, exponent: Exponent::Finite(k) }
    }

    pub fn procyclic(p: u64) -> Self {
        Self { p, exponent: Exponent::Omega }
    }

    pub fn order(&self) -> Option<u64> {
        match self.exponent {
            Exponent::Finite(k) => Some(self.p.pow(k)),
            Exponent::Omega => None,
        }
    }
}

impl Ord for PrimaryFactor {
    fn cmp(&self, other: &Self) -> Ordering {
        let rank = |e: Exponent| match e {
            Exponent::Omega => (0, 0),
            Exponent::Finite(k) => (1, u32::MAX - k),
        };
        (self.p, rank(self.exponent)).cmp(&(other.p, rank(other.exponent)))
    }
}

impl PartialOrd for PrimaryFactor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PrimaryFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent {
            Exponent::Omega => write!(f, "Z_{}", self.p),
            Exponent::Finite(k) => write!(f, "Z({})", self.p.pow(k)),
        }
    }
}

/// A formal product of primary procyclic factors, kept in canonical order
/// (prime ascending; within a prime `Z_p` first, then exponents descending).
/// Trivial factors `Z(p^0)` are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimaryDecomposition {
    factors: Vec<PrimaryFactor>,
}

impl PrimaryDecomposition {
    pub fn new(factors: impl IntoIterator<Item = PrimaryFactor>) -> Self {
        let mut factors: Vec<_> = factors
            .into_iter()
            .filter(|f| f.exponent != Exponent::Finite(0))
            .collect();
        factors.sort();
        Self { factors }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &[PrimaryFactor] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Group order, or `None` when a procyclic factor is present.
    pub fn order(&self) -> Option<u64> {
        self.factors.iter().map(PrimaryFactor::order).product()
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.factors.iter().map(|f| f.p).collect();
        ps.dedup();
        ps
    }

    /// The `p`-primary component.
    pub fn component(&self, p: u64) -> Self {
        Self { factors: self.factors.iter().filter(|f| f.p == p).copied().collect() }
    }

    pub fn product(&self, other: &Self) -> Self {
        Self::new(self.factors.iter().chain(other.factors.iter()).copied())
    }

    /// Replaces every `Z_p` by `Z(p^k)`; the factor disappears when `k = 0`.
    pub fn truncate_omega(&self, p: u64, k: u32) -> Self {
        Self::new(self.factors.iter().map(|f| match f.exponent {
            Exponent::Omega if f.p == p => PrimaryFactor::cyclic(p, k),
            _ => *f,
        }))
    }

    /// Reads the primary invariants of a finite abelian group off the
    /// multiset of its element orders. Returns `None` when the counts are not
    /// those of a finite abelian group.
    ///
    /// If `c_j` elements have order dividing `p^j`, then `log_p c_j` is the sum
    /// of `min(e_i, j)` over the exponents `e_i` of the `p`-primary factors.
    pub fn from_element_orders(orders: impl IntoIterator<Item = u64>) -> Option<Self> {
        let orders: Vec<u64> = orders.into_iter().collect();
        let n = orders.len() as u64;
        if n == 0 {
            return None;
        }
        let mut factors = Vec::new();
        for (p, mult) in factorize(n) {
            let mut logs = vec![0u32];
            for j in 1..=mult {
                let pj = p.pow(j);
                let count = orders.iter().filter(|&&o| pj % o == 0).count() as u64;
                logs.push(arith::prime_power_log(p, count)?);
            }
            if logs[mult as usize] != mult {
                return None;
            }
            // at_least[j] = number of factors with exponent >= j
            let at_least: Vec<u32> = (1..=mult as usize)
                .map(|j| logs[j].checked_sub(logs[j - 1]))
                .collect::<Option<_>>()?;
            for j in 1..=mult as usize {
                let next = at_least.get(j).copied().unwrap_or(0);
                let exact = at_least[j - 1].checked_sub(next)?;
                factors.extend((0..exact).map(|_| PrimaryFactor::cyclic(p, j as u32)));
            }
        }
        Some(Self::new(factors))
    }
}

impl fmt::Display for PrimaryDecomposition {
    /// Procyclic factors lead, then the finite ones: `Z_13 x Z(4) x Z(3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let omegas = self.factors.iter().filter(|x| x.exponent == Exponent::Omega);
        let finite = self.factors.iter().filter(|x| x.exponent != Exponent::Omega);
        let parts: Vec<String> = omegas.chain(finite).map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Structure of the unit group of the `q`-adic integers.
///
/// Odd `q`: `Z_q` times one `Z(p^k(e))` per sloping edge of the funnel of `q`.
/// `q = 2`: `Z(2) x Z_2`.
pub fn unit_group_structure(q: u64) -> Result<PrimaryDecomposition> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q == 2 {
        return Ok(PrimaryDecomposition::new([
            PrimaryFactor::cyclic(2, 1),
            PrimaryFactor::procyclic(2),
        ]));
    }
    let torsion = factorize(q - 1).into_iter().map(|(p, k)| PrimaryFactor::cyclic(p, k));
    Ok(PrimaryDecomposition::new(
        std::iter::once(PrimaryFactor::procyclic(q)).chain(torsion),
    ))
}

/// The `p`-primary component of the unit group of the profinite integers,
/// restricted to lower primes up to `bound`: `Z_p` times one `Z(p^k(e))` per
/// sloping edge of the cone of `p`, plus the extra `Z(2)` of `Z_2^x` when `p = 2`.
pub fn sylow_of_ztilde_units(p: u64, bound: u64) -> Result<PrimaryDecomposition> {
    let graph = build_master_graph(bound)?;
    sylow_of_ztilde_units_in(&graph, p)
}

pub fn sylow_of_ztilde_units_in(graph: &MasterGraph, p: u64) -> Result<PrimaryDecomposition> {
    let cone = graph.cone(p)?;
    let mut factors: Vec<PrimaryFactor> = cone
        .iter()
        .map(|e| match e.kind {
            EdgeKind::Vertical => PrimaryFactor::procyclic(p),
            EdgeKind::Sloping => PrimaryFactor::cyclic(p, e.k),
        })
        .collect();
    if p == 2 {
        factors.push(PrimaryFactor::cyclic(2, 1));
    }
    Ok(PrimaryDecomposition::new(factors))
}

/// Brute-force primary decomposition of the units modulo `q^m`, from the
/// orders of all residues.
pub fn unit_group_bruteforce(q: u64, m: u32) -> Result<PrimaryDecomposition> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let modulus = q
        .checked_pow(m)
        .filter(|&n| n <= BRUTEFORCE_MODULUS_LIMIT)
        .ok_or(Error::ModulusTooLarge(q.saturating_pow(m)))?;
    if m == 0 {
        return Ok(PrimaryDecomposition::trivial());
    }
    let phi = modulus / q * (q - 1);
    let phi_factors = factorize(phi);
    let orders = (1..modulus)
        .filter(|x| x % q != 0)
        .map(|x| arith::unit_order(x, modulus, phi, &phi_factors));
    Ok(PrimaryDecomposition::from_element_orders(orders)
        .expect("unit groups are finite abelian"))
}

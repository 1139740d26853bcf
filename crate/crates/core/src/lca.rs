//! Descriptors of periodic locally compact abelian groups, one primary
//! component per prime, and the calculus built on them: classification of
//! inductively monothetic groups, the divisible/procyclic split and the
//! Sylow structure of the scalar automorphism group.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_power_log};
use crate::error::{Error, Result};
use crate::primegraph::{build_master_graph, unit_group_structure, Exponent, MasterGraph, PrimaryDecomposition};

/// Exponent of a general abelian p-group, as a value (`p^k`), or infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupExponent {
    Finite(u64),
    Infinite,
}

/// The isomorphism type of one primary component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentKind {
    /// The p-adic rationals.
    Qp,
    /// The Prüfer group `Z(p^infinity)`.
    Prufer,
    /// The p-adic integers.
    Zp,
    /// `Z(n)` with `n` a power of `p`; `Cyclic(0)` and `Cyclic(1)` are trivial.
    Cyclic(u64),
    GeneralAbelian { exponent: GroupExponent, trivial: bool },
}

impl ComponentKind {
    pub fn is_trivial(&self) -> bool {
        match *self {
            ComponentKind::Cyclic(n) => n <= 1,
            ComponentKind::GeneralAbelian { trivial, .. } => trivial,
            _ => false,
        }
    }

    /// The exponent as `Finite(k)` for `p^k`, or `Omega` when infinite.
    /// `Qp` has no torsion calculus and yields `None`.
    fn exponent_log(&self, p: u64) -> Option<Exponent> {
        match *self {
            ComponentKind::Qp => None,
            ComponentKind::Prufer | ComponentKind::Zp => Some(Exponent::Omega),
            ComponentKind::Cyclic(n) => Some(Exponent::Finite(prime_power_log(p, n.max(1)).unwrap_or(0))),
            ComponentKind::GeneralAbelian { exponent: GroupExponent::Infinite, .. } => Some(Exponent::Omega),
            ComponentKind::GeneralAbelian { exponent: GroupExponent::Finite(e), .. } => {
                Some(Exponent::Finite(prime_power_log(p, e.max(1)).unwrap_or(0)))
            }
        }
    }
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentKind::Qp => write!(f, "Q_p"),
            ComponentKind::Prufer => write!(f, "Prufer"),
            ComponentKind::Zp => write!(f, "Z_p"),
            ComponentKind::Cyclic(n) => write!(f, "Z({n})"),
            ComponentKind::GeneralAbelian { exponent: GroupExponent::Finite(e), .. } => write!(f, "abelian(exp {e})"),
            ComponentKind::GeneralAbelian { exponent: GroupExponent::Infinite, .. } => write!(f, "abelian(exp inf)"),
        }
    }
}

/// A periodic abelian group as a local product of its primary components.
/// Primes that are absent carry the trivial component.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LcaDescriptor {
    components: BTreeMap<u64, ComponentKind>,
}

impl LcaDescriptor {
    pub fn new(components: impl IntoIterator<Item = (u64, ComponentKind)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, kind) in components {
            if !is_prime(p) {
                return Err(Error::Descriptor(format!("key {p} is not a prime")));
            }
            match kind {
                ComponentKind::Cyclic(n) if n > 1 && prime_power_log(p, n).is_none() => {
                    return Err(Error::Descriptor(format!("Z({n}) is not a {p}-group")));
                }
                ComponentKind::GeneralAbelian { exponent: GroupExponent::Finite(e), trivial } => {
                    if e == 0 || prime_power_log(p, e).is_none() {
                        return Err(Error::Descriptor(format!("exponent {e} is not a power of {p}")));
                    }
                    if trivial != (e == 1) {
                        return Err(Error::Descriptor(format!("triviality flag disagrees with exponent {e} at {p}")));
                    }
                }
                ComponentKind::GeneralAbelian { exponent: GroupExponent::Infinite, trivial: true } => {
                    return Err(Error::Descriptor(format!("trivial component at {p} with infinite exponent")));
                }
                _ => {}
            }
            if !kind.is_trivial() && map.insert(p, kind).is_some() {
                return Err(Error::Descriptor(format!("duplicate component at {p}")));
            }
        }
        Ok(Self { components: map })
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn components(&self) -> &BTreeMap<u64, ComponentKind> {
        &self.components
    }

    pub fn component(&self, p: u64) -> Option<ComponentKind> {
        self.components.get(&p).copied()
    }

    pub fn is_trivial(&self) -> bool {
        self.components.is_empty()
    }

    pub fn max_prime(&self) -> Option<u64> {
        self.components.keys().next_back().copied()
    }

    /// Parses the JSON map form `{"p": {"kind": "...", "m": k}}`.
    ///
    /// Kinds are `qp`, `prufer`, `zp`, `cyclic` (with `m` the order) and
    /// `general` (with `m` the exponent; omitted for infinite exponent).
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: BTreeMap<String, RawComponent> = serde_json::from_str(text)?;
        let mut comps = Vec::new();
        for (key, c) in raw {
            let p: u64 = key
                .parse()
                .map_err(|_| Error::Descriptor(format!("key {key:?} is not an integer")))?;
            let kind = match (c.kind.as_str(), c.m) {
                ("qp", _) => ComponentKind::Qp,
                ("prufer", _) => ComponentKind::Prufer,
                ("zp", _) => ComponentKind::Zp,
                ("cyclic", Some(n)) => ComponentKind::Cyclic(n),
                ("cyclic", None) => return Err(Error::Descriptor(format!("cyclic component at {p} needs m"))),
                ("general", Some(e)) => ComponentKind::GeneralAbelian {
                    exponent: GroupExponent::Finite(e),
                    trivial: c.trivial.unwrap_or(e == 1),
                },
                ("general", None) => ComponentKind::GeneralAbelian {
                    exponent: GroupExponent::Infinite,
                    trivial: c.trivial.unwrap_or(false),
                },
                (other, _) => return Err(Error::Descriptor(format!("unknown kind {other:?} at {p}"))),
            };
            comps.push((p, kind));
        }
        Self::new(comps)
    }

    pub fn to_json(&self) -> String {
        let raw: BTreeMap<String, RawComponent> = self
            .components
            .iter()
            .map(|(p, kind)| {
                let (k, m) = match *kind {
                    ComponentKind::Qp => ("qp", None),
                    ComponentKind::Prufer => ("prufer", None),
                    ComponentKind::Zp => ("zp", None),
                    ComponentKind::Cyclic(n) => ("cyclic", Some(n)),
                    ComponentKind::GeneralAbelian { exponent: GroupExponent::Finite(e), .. } => ("general", Some(e)),
                    ComponentKind::GeneralAbelian { exponent: GroupExponent::Infinite, .. } => ("general", None),
                };
                (p.to_string(), RawComponent { kind: k.to_string(), m, trivial: None })
            })
            .collect();
        serde_json::to_string(&raw).expect("descriptor serialisation cannot fail")
    }

    fn restricted(&self, keep: &BTreeSet<u64>) -> Self {
        Self {
            components: self.components.iter().filter(|(p, _)| keep.contains(p)).map(|(p, k)| (*p, *k)).collect(),
        }
    }

    /// Componentwise union of two descriptors on disjoint primes.
    pub fn recombine(&self, other: &Self) -> Result<Self> {
        if let Some(p) = self.components.keys().find(|p| other.components.contains_key(p)) {
            return Err(Error::Descriptor(format!("both parts have a component at {p}")));
        }
        Ok(Self {
            components: self.components.iter().chain(other.components.iter()).map(|(p, k)| (*p, *k)).collect(),
        })
    }
}

impl fmt::Display for LcaDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self.components.iter().map(|(p, k)| format!("{p}: {k}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct RawComponent {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trivial: Option<bool>,
}

/// Primes sorted by the type of their component:
/// A = p-adic rationals, B = Prüfer, C = p-adic integers, D = finite cyclic.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PiPartition {
    pub pi_a: BTreeSet<u64>,
    pub pi_b: BTreeSet<u64>,
    pub pi_c: BTreeSet<u64>,
    pub pi_d: BTreeSet<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitResult {
    pub divisible: LcaDescriptor,
    pub procyclic: LcaDescriptor,
}

/// Accepts exactly the local products of `Q_p`, Prüfer, `Z_p` and finite
/// cyclic components.
pub fn classify_inductively_monothetic(a: &LcaDescriptor) -> Result<PiPartition> {
    let mut part = PiPartition::default();
    for (&p, kind) in &a.components {
        match kind {
            ComponentKind::Qp => part.pi_a.insert(p),
            ComponentKind::Prufer => part.pi_b.insert(p),
            ComponentKind::Zp => part.pi_c.insert(p),
            ComponentKind::Cyclic(_) => part.pi_d.insert(p),
            ComponentKind::GeneralAbelian { .. } => return Err(Error::NotInductivelyMonothetic(p)),
        };
    }
    Ok(part)
}

/// Splits off the largest divisible subgroup `D` (the A and B primes) from the
/// procyclic part `P` (the C and D primes).
pub fn split_divisible_procyclic(a: &LcaDescriptor) -> Result<SplitResult> {
    let part = classify_inductively_monothetic(a)?;
    let div: BTreeSet<u64> = part.pi_a.union(&part.pi_b).copied().collect();
    let pro: BTreeSet<u64> = part.pi_c.union(&part.pi_d).copied().collect();
    Ok(SplitResult { divisible: a.restricted(&div), procyclic: a.restricted(&pro) })
}

/// Every component is finite cyclic or `Z_p`.
pub fn is_pi_procyclic(a: &LcaDescriptor) -> bool {
    a.components.values().all(|k| matches!(k, ComponentKind::Cyclic(_) | ComponentKind::Zp))
}

/// The unit group of `Z(q^m)` (or of `Z_q` for `Omega`), which is the scalar
/// automorphism group of a `q`-group of that exponent.
pub fn saut_component(q: u64, exponent: Exponent) -> Result<PrimaryDecomposition> {
    let full = unit_group_structure(q)?;
    Ok(match exponent {
        Exponent::Omega => full,
        Exponent::Finite(0) => PrimaryDecomposition::trivial(),
        Exponent::Finite(1) if q == 2 => PrimaryDecomposition::trivial(),
        Exponent::Finite(m) if q == 2 => full.truncate_omega(2, m - 2),
        Exponent::Finite(m) => full.truncate_omega(q, m - 1),
    })
}

/// Primary components of `SAut(A)`, keyed by prime.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SautDecomposition {
    pub primaries: BTreeMap<u64, PrimaryDecomposition>,
    /// Components read with a convention, e.g. Prüfer groups taken as infinite exponent.
    pub notes: Vec<String>,
}

impl SautDecomposition {
    /// Group order, when all primaries are finite.
    pub fn order(&self) -> Option<u64> {
        self.primaries.values().map(PrimaryDecomposition::order).product()
    }

    pub fn total(&self) -> PrimaryDecomposition {
        self.primaries.values().fold(PrimaryDecomposition::trivial(), |acc, d| acc.product(d))
    }
}

fn saut_of_component(q: u64, kind: ComponentKind) -> Result<PrimaryDecomposition> {
    let exponent = kind
        .exponent_log(q)
        .ok_or_else(|| Error::Descriptor(format!("Q_p component at {q} has no scalar torsion calculus")))?;
    saut_component(q, exponent)
}

/// `SAut(A)` is the product of the `SAut(A_q)`; each of those splits over the
/// funnel of `q`, and the pieces are regrouped by their own prime.
pub fn saut_decomposition(a: &LcaDescriptor) -> Result<SautDecomposition> {
    let mut out = SautDecomposition::default();
    for (&q, &kind) in &a.components {
        if kind == ComponentKind::Prufer {
            out.notes.push(format!("Prufer component at {q} read as infinite exponent"));
        }
        let local = saut_of_component(q, kind)?;
        for p in local.primes() {
            let entry = out.primaries.entry(p).or_default();
            *entry = entry.product(&local.component(p));
        }
    }
    Ok(out)
}

/// The subgraph of the master-graph keeping the edges that end at a lower
/// prime `q` whose component has nontrivial scalar automorphisms.
pub fn prime_graph_of_lca(a: &LcaDescriptor, bound: u64) -> Result<MasterGraph> {
    if let Some(p) = a.max_prime() {
        if p > bound {
            return Err(Error::OutOfBound { prime: p, bound });
        }
    }
    let mut live = BTreeSet::new();
    for (&q, &kind) in &a.components {
        if !saut_of_component(q, kind)?.is_trivial() {
            live.insert(q);
        }
    }
    Ok(build_master_graph(bound.max(2))?.filtered(|e| live.contains(&e.q)))
}

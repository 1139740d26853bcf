//! Near-abelian structure: bases, scaling subgroups, Sylow theory, prime graphs
//! and the classification checks for quasihamiltonian and modular groups.

pub mod base;
pub mod classify;
pub mod graph;
pub mod scalar;
pub mod sylow;

use serde::Serialize;
use serde_json::Value;

use crate::group::{ElemSet, FiniteGroup, Subgroup};

pub use base::{
    cga_az_check, find_base, find_scaling_subgroup, is_inductively_monothetic_finite, sandwich_check, BaseWitness,
    SandwichReport,
};
pub use classify::{classify_tqh_p_group, modular_main_check, recognize_iwasawa_pq, IwasawaRecognition, MainDecomposition, TqhClass};
pub use graph::{apq_check, prime_graph_of_group, GroupEdge, GroupPrimeGraph};
pub use scalar::{scalar_morphism_check, ScalarLemmaReport};
pub use sylow::{nu_decomposition_check, nu_set, sigma_sylow, sz_complement, szc_status, ComplementReport, NuReport, SzcStatus};

/// Outcome of one checked clause.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail { witness: Value },
    HypothesisNotMet { reason: String },
    /// A reported observation that is not counted as a failure.
    Flagged { note: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub clause: String,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl Check {
    pub fn pass(clause: impl Into<String>) -> Self {
        Self { clause: clause.into(), verdict: Verdict::Pass }
    }

    pub fn fail(clause: impl Into<String>, witness: Value) -> Self {
        Self { clause: clause.into(), verdict: Verdict::Fail { witness } }
    }

    pub fn not_met(clause: impl Into<String>, reason: impl Into<String>) -> Self {
        Self { clause: clause.into(), verdict: Verdict::HypothesisNotMet { reason: reason.into() } }
    }

    pub fn flagged(clause: impl Into<String>, note: impl Into<String>) -> Self {
        Self { clause: clause.into(), verdict: Verdict::Flagged { note: note.into() } }
    }

    /// Pass when `ok`, otherwise fail with the lazily built witness.
    pub fn expect(clause: impl Into<String>, ok: bool, witness: impl FnOnce() -> Value) -> Self {
        if ok {
            Self::pass(clause)
        } else {
            Self::fail(clause, witness())
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self.verdict, Verdict::Fail { .. })
    }

    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// The part of `n` made of primes in `sigma`.
pub fn sigma_part(mut n: u64, sigma: &[u64]) -> u64 {
    let mut part = 1;
    for &p in sigma {
        while n % p == 0 {
            n /= p;
            part *= p;
        }
    }
    part
}

/// The `sigma`-elements of `s`, as a subgroup when they form one.
pub fn sigma_component(g: &FiniteGroup, s: &Subgroup, sigma: &[u64]) -> Option<Subgroup> {
    let set = ElemSet::from_iter(g.order(), s.members().iter().copied().filter(|&x| g.is_sigma_element(x, sigma)));
    g.subgroup_from_set(set)
}

/// Least common multiple of the element orders of `s`.
pub fn exponent(g: &FiniteGroup, s: &Subgroup) -> u64 {
    s.members().iter().fold(1, |acc, &x| crate::arith::lcm(acc, g.element_order(x) as u64))
}

pub(crate) fn members(s: &Subgroup) -> Value {
    Value::from(s.members().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_parts() {
        assert_eq!(sigma_part(60, &[2, 5]), 20);
        assert_eq!(sigma_part(60, &[]), 1);
        assert_eq!(sigma_part(49, &[7]), 49);
    }

    #[test]
    fn verdicts_serialise_flat() {
        let c = Check::fail("x", serde_json::json!([1, 2]));
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["verdict"], "fail");
        assert_eq!(v["witness"], serde_json::json!([1, 2]));
        let c = Check::not_met("y", "A-trivial");
        assert_eq!(serde_json::to_value(&c).unwrap()["verdict"], "hypothesis-not-met");
    }
}

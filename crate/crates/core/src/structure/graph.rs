//! The prime graph of a near-abelian group and the conditions on its edges.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::json;

use super::{exponent, sigma_component, BaseWitness, Check};
use crate::arith::{prime_divisors, valuation};
use crate::group::{Elem, FiniteGroup, Subgroup};
use crate::primegraph::{prime_relation, EdgeKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupEdge {
    pub p: u64,
    pub q: u64,
    pub kind: EdgeKind,
    /// A pair `(x, a)` with `x` in `H_p`, `a` in `A_q` and `[x, a] != 1`.
    pub witness: (Elem, Elem),
    pub in_master_graph: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupPrimeGraph {
    /// Primes `q` with `A_q != 1`.
    pub lower: Vec<u64>,
    /// Primes dividing `|G : C_G(A)|`.
    pub upper: Vec<u64>,
    pub edges: Vec<GroupEdge>,
}

/// A connected component, as its upper primes, lower primes and edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub upper: Vec<u64>,
    pub lower: Vec<u64>,
    pub edges: Vec<(u64, u64, EdgeKind)>,
}

impl GroupPrimeGraph {
    pub fn components(&self) -> Vec<Component> {
        // vertices: (prime, is_upper)
        let mut vertices: Vec<(u64, bool)> = self.upper.iter().map(|&p| (p, true)).collect();
        vertices.extend(self.lower.iter().map(|&q| (q, false)));
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &v in &vertices {
            if seen.contains(&v) {
                continue;
            }
            let mut stack = vec![v];
            let mut comp = Component { upper: vec![], lower: vec![], edges: vec![] };
            seen.insert(v);
            while let Some((r, up)) = stack.pop() {
                if up {
                    comp.upper.push(r);
                } else {
                    comp.lower.push(r);
                }
                for e in &self.edges {
                    let next = match (up, e.p == r, e.q == r) {
                        (true, true, _) => Some((e.q, false)),
                        (false, _, true) => Some((e.p, true)),
                        _ => None,
                    };
                    if let Some(n) = next {
                        if seen.insert(n) {
                            stack.push(n);
                        }
                    }
                }
            }
            comp.upper.sort_unstable();
            comp.lower.sort_unstable();
            comp.edges = self
                .edges
                .iter()
                .filter(|e| comp.upper.contains(&e.p))
                .map(|e| (e.p, e.q, e.kind))
                .collect();
            out.push(comp);
        }
        out
    }

    /// Every component is an isolated vertex or a single vertical edge.
    pub fn vertical_components_only(&self) -> bool {
        self.components().iter().all(|c| c.edges.iter().all(|e| e.2 == EdgeKind::Vertical) && c.edges.len() <= 1)
    }
}

pub fn prime_graph_of_group(g: &FiniteGroup, w: &BaseWitness, h: &Subgroup) -> GroupPrimeGraph {
    let lower = prime_divisors(w.a.order() as u64);
    let upper = prime_divisors((g.order() / w.centralizer.order()) as u64);
    let mut edges = Vec::new();
    for p in prime_divisors(h.order() as u64) {
        let hp = sigma_component(g, h, &[p]).expect("cyclic groups have primary components");
        for &q in &lower {
            let aq = sigma_component(g, &w.a, &[q]).expect("abelian groups have primary components");
            let witness = hp
                .members()
                .iter()
                .find_map(|&x| aq.members().iter().find(|&&a| !g.commute(x, a)).map(|&a| (x, a)));
            if let Some(witness) = witness {
                let kind = if p == q { EdgeKind::Vertical } else { EdgeKind::Sloping };
                let in_master_graph = prime_relation(p, q).unwrap_or(false);
                edges.push(GroupEdge { p, q, kind, witness, in_master_graph });
            }
        }
    }
    edges.sort_by_key(|e| (e.q, e.p));
    GroupPrimeGraph { lower, upper, edges }
}

/// The exponent `r` with `x a x^-1 = a^r` on all of `a_q`, if the action is scalar.
fn scalar_exponent(g: &FiniteGroup, x: Elem, a_q: &Subgroup, exp: u64) -> Option<u64> {
    let a0 = *a_q.members().iter().find(|&&a| g.element_order(a) as u64 == exp)?;
    let image = g.conj(x, a0);
    let r = (0..exp).find(|&r| g.pow(a0, r) == image)?;
    a_q.members().iter().all(|&a| g.conj(x, a) == g.pow(a, r)).then_some(r)
}

/// Edge conditions for an A-nontrivial group: for sloping edges `p` odd, `p | q-1`,
/// `a -> [x,a]` bijective on `A_q` and `A_q meet Z(G) = 1`; for vertical edges the
/// power form `[x,a] = a^(q^m s)` with `A_q meet Z(G)` of exponent dividing `q^m`.
pub fn apq_check(g: &FiniteGroup, w: &BaseWitness, graph: &GroupPrimeGraph) -> Vec<Check> {
    if graph.edges.is_empty() {
        return vec![Check::pass("edge conditions (no edges)")];
    }
    if !w.nontrivial {
        return vec![Check::not_met("edge conditions", "group is A-trivial")];
    }
    let z = g.center();
    let mut checks = Vec::new();
    for e in &graph.edges {
        let (p, q) = (e.p, e.q);
        let tag = format!("e({p},{q})");
        checks.push(Check::expect(format!("{tag} lies in the master graph"), e.in_master_graph, || json!([p, q])));
        let a_q = sigma_component(g, &w.a, &[q]).expect("abelian groups have primary components");
        let c_aq = g.centralizer(&a_q);
        let movers: Vec<Elem> =
            (0..g.order()).filter(|&x| g.is_sigma_element(x, &[p]) && !c_aq.contains(x)).collect();
        let center_meet = a_q.set().intersection(z.set());
        match e.kind {
            EdgeKind::Sloping => {
                if p == 2 {
                    checks.push(Check::flagged(
                        format!("{tag} sloping edge has odd p"),
                        format!("sloping edge from 2 to {q} in an A-nontrivial group"),
                    ));
                } else {
                    checks.push(Check::pass(format!("{tag} sloping edge has odd p")));
                }
                checks.push(Check::expect(format!("{tag} p divides q-1"), (q - 1) % p == 0, || json!([p, q])));
                let bad = movers.iter().copied().find(|&x| {
                    let image: BTreeSet<Elem> = a_q.members().iter().map(|&a| g.commutator(x, a)).collect();
                    image.len() != a_q.order() || !image.iter().all(|&c| a_q.contains(c))
                });
                checks.push(Check::expect(format!("{tag} commutator map bijective on A_q"), bad.is_none(), || {
                    json!({"x": bad})
                }));
                checks.push(Check::expect(format!("{tag} A_q meets Z(G) trivially"), center_meet.len() == 1, || {
                    json!({"meet": center_meet.to_vec()})
                }));
            }
            EdgeKind::Vertical => {
                let exp = exponent(g, &a_q);
                let mut failure = None;
                let mut least_m = u32::MAX;
                for &x in &movers {
                    let Some(r) = scalar_exponent(g, x, &a_q, exp) else {
                        failure = Some(json!({"x": x, "reason": "action on A_q is not scalar"}));
                        break;
                    };
                    let d = (r + exp - 1) % exp;
                    let m = valuation(q, d);
                    let powers: BTreeSet<Elem> = a_q.members().iter().map(|&a| g.pow(a, q.pow(m))).collect();
                    let comms: BTreeSet<Elem> = a_q.members().iter().map(|&a| g.commutator(x, a)).collect();
                    if m == 0 || powers != comms {
                        failure = Some(json!({"x": x, "r": r, "m": m}));
                        break;
                    }
                    least_m = least_m.min(m);
                }
                checks.push(Check::expect(format!("{tag} commutators are a^(q^m s)"), failure.is_none(), || {
                    failure.clone().unwrap_or_default()
                }));
                if failure.is_none() && least_m != u32::MAX {
                    let bound = q.pow(least_m);
                    let meet_exp = center_meet.iter().fold(1u64, |acc, a| crate::arith::lcm(acc, g.element_order(a) as u64));
                    checks.push(Check::expect(
                        format!("{tag} A_q meet Z(G) has exponent dividing q^m"),
                        bound % meet_exp == 0,
                        || json!({"m": least_m, "meet_exponent": meet_exp}),
                    ));
                }
            }
        }
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{construct, GroupSpec};
    use crate::lattice::SubgroupLattice;
    use crate::structure::{find_base, find_scaling_subgroup, Verdict};

    fn analyse(spec: GroupSpec) -> (FiniteGroup, BaseWitness, Subgroup) {
        let g = construct(&spec).unwrap();
        let w = find_base(&SubgroupLattice::enumerate(&g).unwrap()).unwrap();
        let h = find_scaling_subgroup(&g, &w).unwrap();
        (g, w, h)
    }

    #[test]
    fn iwasawa_has_one_sloping_edge() {
        let (g, w, h) = analyse(GroupSpec::iwasawa(3, 7, 3, 2));
        let graph = prime_graph_of_group(&g, &w, &h);
        assert_eq!(graph.edges.len(), 1);
        let e = &graph.edges[0];
        assert_eq!((e.p, e.q, e.kind), (3, 7, EdgeKind::Sloping));
        assert_eq!((graph.upper.clone(), graph.lower.clone()), (vec![3], vec![7]));
        let checks = apq_check(&g, &w, &graph);
        assert!(checks.iter().all(Check::is_pass), "{checks:?}");
        assert_eq!(checks.len(), 5);
    }

    #[test]
    fn scalar_group_has_a_vertical_edge() {
        let (g, w, h) = analyse(GroupSpec::SemidirectScalar { base: vec![9], h: 3, r: 4 });
        let graph = prime_graph_of_group(&g, &w, &h);
        assert_eq!(graph.edges.len(), 1);
        assert_eq!((graph.edges[0].p, graph.edges[0].kind), (3, EdgeKind::Vertical));
        assert!(graph.vertical_components_only());
        let checks = apq_check(&g, &w, &graph);
        assert!(checks.iter().all(Check::is_pass), "{checks:?}");
        assert_eq!(checks.len(), 3);
    }

    #[test]
    fn abelian_groups_have_no_edges() {
        let (g, w, h) = analyse(GroupSpec::AbelianProduct { factors: vec![2, 6] });
        let graph = prime_graph_of_group(&g, &w, &h);
        assert!(graph.edges.is_empty() && graph.upper.is_empty());
        assert_eq!(graph.lower, vec![2, 3]);
        assert_eq!(graph.components().len(), 2);
        assert!(apq_check(&g, &w, &graph)[0].is_pass());
    }

    #[test]
    fn a_trivial_groups_are_excluded() {
        for spec in [GroupSpec::iwasawa(2, 3, 2, 2), GroupSpec::QuaternionM { n: 2 }] {
            let (g, w, h) = analyse(spec);
            let graph = prime_graph_of_group(&g, &w, &h);
            let checks = apq_check(&g, &w, &graph);
            assert!(matches!(checks[0].verdict, Verdict::HypothesisNotMet { .. }));
        }
    }

    #[test]
    fn sloping_edge_from_two_is_flagged() {
        // Z(5) x| Z(4) acting through the full automorphism group: A-nontrivial with p = 2
        let (g, w, h) = analyse(GroupSpec::SemidirectScalar { base: vec![5], h: 4, r: 2 });
        assert!(w.nontrivial);
        let graph = prime_graph_of_group(&g, &w, &h);
        assert_eq!((graph.edges[0].p, graph.edges[0].kind), (2, EdgeKind::Sloping));
        let checks = apq_check(&g, &w, &graph);
        assert!(checks.iter().any(|c| matches!(c.verdict, Verdict::Flagged { .. })));
        assert!(!checks.iter().any(Check::is_fail), "{checks:?}");
    }
}

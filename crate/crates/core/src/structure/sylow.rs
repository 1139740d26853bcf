//! Schur-Zassenhaus splitting, the nu-decomposition and sigma-Sylow subgroups.

use serde::Serialize;
use serde_json::json;

use super::{members, sigma_component, sigma_part, BaseWitness, Check};
use crate::arith::prime_divisors;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::lattice::SubgroupLattice;

/// The three equivalent forms of the splitting condition for `N`, with `sigma`
/// the primes of `|N|`, each evaluated on its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SzcStatus {
    /// `N` is normal and a maximal `sigma`-subgroup.
    pub normal_sylow: bool,
    /// `N` is the set of all `sigma`-elements.
    pub sigma_elements: bool,
    /// `N` is normal and `G/N` has no nontrivial `sigma`-element.
    pub quotient_sigma_free: bool,
}

impl SzcStatus {
    pub fn all(&self) -> bool {
        self.normal_sylow && self.sigma_elements && self.quotient_sigma_free
    }

    pub fn consistent(&self) -> bool {
        self.normal_sylow == self.sigma_elements && self.sigma_elements == self.quotient_sigma_free
    }

    fn first_violation(&self) -> Option<&'static str> {
        if !self.normal_sylow {
            Some("N is not a normal Sylow subgroup")
        } else if !self.sigma_elements {
            Some("N is not the set of sigma-elements")
        } else if !self.quotient_sigma_free {
            Some("G/N contains a sigma-element")
        } else {
            None
        }
    }
}

fn is_sigma_number(n: u64, sigma: &[u64]) -> bool {
    sigma_part(n, sigma) == n
}

pub fn szc_status(g: &FiniteGroup, n: &Subgroup) -> SzcStatus {
    let sigma = prime_divisors(n.order() as u64);
    let normal = g.is_normal(n);
    let maximal = (0..g.order())
        .filter(|&x| !n.contains(x) && g.is_sigma_element(x, &sigma))
        .all(|x| !is_sigma_number(g.extend(n, x).order() as u64, &sigma));
    let (all_sigma, _) = g.sigma_elements(&sigma);
    let quotient_free =
        normal && (0..g.order()).all(|x| prime_divisors(g.order_modulo(x, n) as u64).iter().all(|p| !sigma.contains(p)));
    SzcStatus { normal_sylow: normal && maximal, sigma_elements: &all_sigma == n.set(), quotient_sigma_free: quotient_free }
}

/// A complement of `N` and whether every candidate complement is conjugate to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementReport {
    pub complement: Option<Subgroup>,
    /// Subgroups `K` with `K meet N = 1` and `|K| = |G/N|`.
    pub candidates: usize,
    pub non_conjugate: Option<Subgroup>,
}

impl ComplementReport {
    pub fn holds(&self) -> bool {
        self.complement.is_some() && self.non_conjugate.is_none()
    }

    pub fn check(&self) -> Check {
        Check::expect("complement exists and complements are conjugate", self.holds(), || {
            json!({
                "complement": self.complement.as_ref().map(members),
                "non_conjugate": self.non_conjugate.as_ref().map(members),
            })
        })
    }
}

pub fn sz_complement(l: &SubgroupLattice, n: &Subgroup) -> Result<ComplementReport> {
    let g = l.group();
    if let Some(clause) = szc_status(g, n).first_violation() {
        return Err(Error::Precondition(clause.into()));
    }
    let index = g.order() / n.order();
    let candidates: Vec<&Subgroup> = l
        .subgroups()
        .iter()
        .filter(|k| k.order() == index && k.set().intersection(n.set()).len() == 1)
        .collect();
    let complement = candidates.first().map(|&h| h.clone());
    let non_conjugate = complement
        .as_ref()
        .and_then(|h| candidates.iter().find(|k| g.are_conjugate(k, h).is_none()).map(|&k| k.clone()));
    Ok(ComplementReport { complement, candidates: candidates.len(), non_conjugate })
}

/// Primes `p` of `|G|` whose `p`-elements commute with all `p'`-elements.
pub fn nu_set(g: &FiniteGroup) -> Vec<u64> {
    prime_divisors(g.order() as u64)
        .into_iter()
        .filter(|&p| {
            let ps: Vec<usize> = (0..g.order()).filter(|&x| g.is_sigma_element(x, &[p])).collect();
            let rest = g.sigma_prime_elements(&[p]);
            ps.iter().all(|&x| rest.iter().all(|y| g.commute(x, y)))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct NuReport {
    pub nu: Vec<u64>,
    /// `G_{nu'}` first, then `G_p` for `p` in `nu`; `None` where the elements do not form a subgroup.
    pub factors: Vec<(String, Option<Subgroup>)>,
    pub checks: Vec<Check>,
}

/// Normal factors, pairwise commuting, pairwise meeting trivially, with product `G`.
pub(crate) fn internal_direct_product(g: &FiniteGroup, factors: &[&Subgroup]) -> Vec<Check> {
    let mut checks = Vec::new();
    let not_normal = factors.iter().find(|s| !g.is_normal(s));
    checks.push(Check::expect("factors normal", not_normal.is_none(), || json!(not_normal.map(|s| members(s)))));
    let mut clash = None;
    let mut overlap = None;
    for (i, a) in factors.iter().enumerate() {
        for b in &factors[i + 1..] {
            if clash.is_none() && !a.gens().iter().all(|&x| b.gens().iter().all(|&y| g.commute(x, y))) {
                clash = Some((members(a), members(b)));
            }
            if overlap.is_none() && a.set().intersection(b.set()).len() > 1 {
                overlap = Some((members(a), members(b)));
            }
        }
    }
    checks.push(Check::expect("factors commute", clash.is_none(), || json!(clash)));
    checks.push(Check::expect("factors meet trivially", overlap.is_none(), || json!(overlap)));
    let product = factors.iter().fold(g.trivial_subgroup().set().clone(), |acc, s| g.product_set(&acc, s.set()));
    let orders: usize = factors.iter().map(|s| s.order()).product();
    checks.push(Check::expect("factors multiply to G", product.len() == g.order() && orders == g.order(), || {
        json!({"product_size": product.len(), "order_product": orders})
    }));
    checks
}

pub fn nu_decomposition_check(g: &FiniteGroup) -> NuReport {
    let nu = nu_set(g);
    let rest: Vec<u64> = prime_divisors(g.order() as u64).into_iter().filter(|p| !nu.contains(p)).collect();
    let mut factors = Vec::new();
    let (set, _) = g.sigma_elements(&rest);
    factors.push(("G_nu'".to_string(), g.subgroup_from_set(set)));
    for &p in &nu {
        let (set, _) = g.sigma_elements(&[p]);
        factors.push((format!("G_{p}"), g.subgroup_from_set(set)));
    }
    let missing: Vec<&str> = factors.iter().filter(|(_, s)| s.is_none()).map(|(name, _)| name.as_str()).collect();
    let mut checks = vec![Check::expect("nu factors are subgroups", missing.is_empty(), || json!(missing))];
    if missing.is_empty() {
        let subs: Vec<&Subgroup> = factors.iter().filter_map(|(_, s)| s.as_ref()).collect();
        checks.extend(internal_direct_product(g, &subs));
    }
    NuReport { nu, factors, checks }
}

/// Maximal `sigma`-subgroups and their relation to a base with `C_G(A) = A`.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaSylowReport {
    pub sylows: Vec<Subgroup>,
    pub checks: Vec<Check>,
}

pub fn sigma_sylow(l: &SubgroupLattice, w: &BaseWitness, sigma: &[u64], h: &Subgroup) -> SigmaSylowReport {
    let g = l.group();
    let clause = "sigma-Sylow structure";
    if !w.nontrivial {
        return SigmaSylowReport { sylows: vec![], checks: vec![Check::not_met(clause, "group is A-trivial")] };
    }
    if w.centralizer != w.a {
        return SigmaSylowReport { sylows: vec![], checks: vec![Check::not_met(clause, "C_G(A) differs from A")] };
    }
    let sigma_groups: Vec<usize> =
        (0..l.len()).filter(|&i| is_sigma_number(l.get(i).order() as u64, sigma)).collect();
    let sylows: Vec<Subgroup> = sigma_groups
        .iter()
        .filter(|&&i| !sigma_groups.iter().any(|&j| j != i && l.includes(i, j)))
        .map(|&i| l.get(i).clone())
        .collect();

    let a_sigma = sigma_component(g, &w.a, sigma).expect("primary components of an abelian group");
    let z_sigma = sigma_component(g, &g.center(), sigma).expect("primary components of an abelian group");
    let quotient_sigma = sigma_part(w.quotient_order as u64, sigma) as usize;
    let mut checks = Vec::new();
    for s in &sylows {
        let meet = s.set().intersection(w.a.set());
        checks.push(Check::expect("S meet A is the sigma-component of A", &meet == a_sigma.set(), || {
            json!({"sylow": members(s), "meet": meet.to_vec()})
        }));
        let image = s.order() / meet.len();
        checks.push(Check::expect("SA/A is the sigma-part of G/A", image == quotient_sigma, || {
            json!({"sylow": members(s), "image_order": image, "expected": quotient_sigma})
        }));
        let factored = (0..g.order()).any(|x| {
            let conj = g.conjugate_subgroup(x, h);
            let h_sigma = sigma_component(g, &conj, sigma).expect("cyclic groups have primary components");
            let prod = g.product_set(&g.product_set(a_sigma.set(), z_sigma.set()), h_sigma.set());
            &prod == s.set()
        });
        checks.push(Check::expect("S = A_sigma Z(G)_sigma H_sigma", factored, || json!({"sylow": members(s)})));
    }
    let stray = sylows.iter().find(|s| g.are_conjugate(s, &sylows[0]).is_none());
    checks.push(Check::expect("maximal sigma-subgroups conjugate", stray.is_none(), || {
        json!({"first": members(&sylows[0]), "other": stray.map(members)})
    }));
    SigmaSylowReport { sylows, checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{construct, GroupSpec};
    use crate::structure::{find_base, find_scaling_subgroup};

    fn build(spec: GroupSpec) -> FiniteGroup {
        construct(&spec).unwrap()
    }

    fn s3() -> FiniteGroup {
        build(GroupSpec::iwasawa(2, 3, 2, 2))
    }

    #[test]
    fn szc_examples() {
        let g = s3();
        let n = g.subgroup_generated(&[g.marked("a").unwrap()]);
        let st = szc_status(&g, &n);
        assert!(st.all());

        let g = build(GroupSpec::Cyclic { n: 4 });
        let st = szc_status(&g, &g.subgroup_generated(&[2]));
        assert_eq!(st, SzcStatus { normal_sylow: false, sigma_elements: false, quotient_sigma_free: false });

        let g = build(GroupSpec::Cyclic { n: 6 });
        assert!(szc_status(&g, &g.subgroup_generated(&[3])).all());
        assert!(szc_status(&g, &g.trivial_subgroup()).all());
    }

    #[test]
    fn complements() {
        let g = s3();
        let l = SubgroupLattice::enumerate(&g).unwrap();
        let n = g.subgroup_generated(&[g.marked("a").unwrap()]);
        let r = sz_complement(&l, &n).unwrap();
        assert_eq!((r.candidates, r.complement.as_ref().unwrap().order()), (3, 2));
        assert!(r.holds());

        let g = build(GroupSpec::Cyclic { n: 6 });
        let l = SubgroupLattice::enumerate(&g).unwrap();
        let r = sz_complement(&l, &g.subgroup_generated(&[2])).unwrap();
        assert_eq!(r.candidates, 1);
        assert_eq!(r.complement.unwrap().order(), 2);

        let g = build(GroupSpec::iwasawa(3, 7, 3, 2));
        let l = SubgroupLattice::enumerate(&g).unwrap();
        let n = g.subgroup_generated(&[g.marked("a").unwrap()]);
        let r = sz_complement(&l, &n).unwrap();
        assert_eq!(r.candidates, 7);
        assert!(r.holds());

        let g = build(GroupSpec::Cyclic { n: 4 });
        let l = SubgroupLattice::enumerate(&g).unwrap();
        assert!(matches!(sz_complement(&l, &g.subgroup_generated(&[2])), Err(Error::Precondition(_))));
    }

    #[test]
    fn nu_sets() {
        assert_eq!(nu_set(&build(GroupSpec::Cyclic { n: 30 })), vec![2, 3, 5]);
        assert!(nu_set(&s3()).is_empty());
        let g = build(GroupSpec::product(vec![GroupSpec::QuaternionM { n: 2 }, GroupSpec::Cyclic { n: 3 }]));
        assert_eq!(nu_set(&g), vec![2, 3]);
    }

    #[test]
    fn nu_decompositions() {
        let g = build(GroupSpec::product(vec![GroupSpec::QuaternionM { n: 2 }, GroupSpec::Cyclic { n: 3 }]));
        let r = nu_decomposition_check(&g);
        assert!(r.checks.iter().all(Check::is_pass));
        let orders: Vec<usize> = r.factors.iter().map(|(_, s)| s.as_ref().unwrap().order()).collect();
        assert_eq!(orders, vec![1, 8, 3]);

        let r = nu_decomposition_check(&s3());
        assert_eq!(r.factors.len(), 1);
        assert_eq!(r.factors[0].1.as_ref().unwrap().order(), 6);
        assert!(r.checks.iter().all(Check::is_pass));

        let r = nu_decomposition_check(&build(GroupSpec::Cyclic { n: 30 }));
        assert_eq!(r.factors.len(), 4);
        assert!(r.checks.iter().all(Check::is_pass));
    }

    #[test]
    fn sigma_sylows() {
        let g = build(GroupSpec::iwasawa(3, 7, 3, 2));
        let l = SubgroupLattice::enumerate(&g).unwrap();
        let w = find_base(&l).unwrap();
        let h = find_scaling_subgroup(&g, &w).unwrap();
        let r = sigma_sylow(&l, &w, &[3], &h);
        assert_eq!(r.sylows.len(), 7);
        assert!(r.checks.iter().all(Check::is_pass));
        let r = sigma_sylow(&l, &w, &[7], &h);
        assert_eq!(r.sylows, vec![w.a.clone()]);
        assert!(r.checks.iter().all(Check::is_pass));

        let g = build(GroupSpec::SemidirectScalar { base: vec![9], h: 3, r: 4 });
        let l = SubgroupLattice::enumerate(&g).unwrap();
        let w = find_base(&l).unwrap();
        let h = find_scaling_subgroup(&g, &w).unwrap();
        let r = sigma_sylow(&l, &w, &[3], &h);
        assert_eq!(r.sylows, vec![g.whole()]);
        assert!(r.checks.iter().all(Check::is_pass));

        let g = s3();
        let l = SubgroupLattice::enumerate(&g).unwrap();
        let w = find_base(&l).unwrap();
        let h = find_scaling_subgroup(&g, &w).unwrap();
        let r = sigma_sylow(&l, &w, &[2], &h);
        assert!(matches!(r.checks[0].verdict, crate::structure::Verdict::HypothesisNotMet { .. }));
    }
}

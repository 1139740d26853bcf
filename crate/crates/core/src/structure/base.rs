//! Bases, scaling subgroups and the semidirect sandwich.

use serde::Serialize;
use serde_json::json;

use super::{members, Check};
use crate::error::{Error, Result};
use crate::group::{Elem, ElemSet, FiniteGroup, Subgroup};
use crate::lattice::SubgroupLattice;

/// An abelian subgroup `A` with every subgroup normal in `G` and `G/A` cyclic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseWitness {
    pub a: Subgroup,
    /// Least element whose coset generates `G/A`.
    pub quotient_generator: Elem,
    pub quotient_order: usize,
    pub centralizer: Subgroup,
    /// `|G : C_G(A)| > 2`.
    pub nontrivial: bool,
}

/// Every two-generated subgroup is cyclic.
pub fn is_inductively_monothetic_finite(g: &FiniteGroup) -> bool {
    let n = g.order();
    for x in 0..n {
        for y in x + 1..n {
            let s = g.subgroup_generated(&[x, y]);
            if !s.members().iter().any(|&z| g.element_order(z) == s.order()) {
                return false;
            }
        }
    }
    true
}

/// Elements generating a normal cyclic subgroup.
fn normal_cyclic_elements(g: &FiniteGroup) -> ElemSet {
    ElemSet::from_iter(
        g.order(),
        (0..g.order()).filter(|&x| {
            let c = g.subgroup_generated(&[x]);
            g.generators().iter().all(|&t| c.contains(g.conj(t, x)))
        }),
    )
}

fn witness_with(g: &FiniteGroup, a: &Subgroup, normal_cyclic: &ElemSet) -> Option<BaseWitness> {
    // every subgroup of A is a join of cyclic ones, so normal cyclic subgroups suffice
    if !a.set().is_subset(normal_cyclic) || !g.is_abelian_subgroup(a) {
        return None;
    }
    let index = g.order() / a.order();
    let quotient_generator = (0..g.order()).find(|&x| g.order_modulo(x, a) == index)?;
    let centralizer = g.centralizer(a);
    let nontrivial = g.order() / centralizer.order() > 2;
    Some(BaseWitness { a: a.clone(), quotient_generator, quotient_order: index, centralizer, nontrivial })
}

/// Checks a proposed base.
pub fn base_witness(g: &FiniteGroup, a: &Subgroup) -> Option<BaseWitness> {
    witness_with(g, a, &normal_cyclic_elements(g))
}

/// A base of maximal order, the smallest member set winning ties; `None` when the
/// group is not near abelian.
pub fn find_base(l: &SubgroupLattice) -> Option<BaseWitness> {
    let g = l.group();
    let normal_cyclic = normal_cyclic_elements(g);
    let subs = l.subgroups();
    let mut end = subs.len();
    while end > 0 {
        let order = subs[end - 1].order();
        let start = subs[..end].partition_point(|s| s.order() < order);
        if let Some(w) = subs[start..end].iter().find_map(|s| witness_with(g, s, &normal_cyclic)) {
            return Some(w);
        }
        end = start;
    }
    None
}

pub fn is_scaling_subgroup(g: &FiniteGroup, a: &Subgroup, h: &Subgroup) -> bool {
    a.order() * h.order() == g.order() * g.meet(a, h).order()
}

/// A cyclic `H` with `AH = G` of least order, then least member set.
pub fn find_scaling_subgroup(g: &FiniteGroup, w: &BaseWitness) -> Option<Subgroup> {
    (0..g.order())
        .map(|x| g.subgroup_generated(&[x]))
        .filter(|h| is_scaling_subgroup(g, &w.a, h))
        .min()
}

/// The multiplication map from the external semidirect product `A x| H` onto `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SandwichReport {
    pub semidirect_order: usize,
    pub kernel_order: usize,
    pub intersection_order: usize,
    pub homomorphism: bool,
    pub surjective: bool,
    /// The kernel is exactly `{(h^-1, h) : h in A meet H}`.
    pub kernel_matches: bool,
    pub faithful: bool,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.homomorphism
            && self.surjective
            && self.kernel_matches
            && self.faithful
            && self.kernel_order == self.intersection_order
    }

    pub fn check(&self) -> Check {
        Check::expect("sandwich quotient kernel", self.holds(), || json!(self))
    }
}

pub fn sandwich_check(g: &FiniteGroup, a: &Subgroup, h: &Subgroup) -> Result<SandwichReport> {
    if !g.is_normal(a) {
        return Err(Error::Precondition("A is not normal".into()));
    }
    if !is_scaling_subgroup(g, a, h) {
        return Err(Error::Precondition("AH is not the whole group".into()));
    }
    let (am, hm) = (a.members(), h.members());
    let (na, nh) = (am.len(), hm.len());
    let mut pos_a = vec![usize::MAX; g.order()];
    let mut pos_h = vec![usize::MAX; g.order()];
    am.iter().enumerate().for_each(|(i, &x)| pos_a[x] = i);
    hm.iter().enumerate().for_each(|(j, &x)| pos_h[x] = j);

    let sd_mul = |(i, j): (usize, usize), (k, l): (usize, usize)| {
        let acted = g.conj(hm[j], am[k]);
        (pos_a[g.mul(am[i], acted)], pos_h[g.mul(hm[j], hm[l])])
    };
    let mu = |(i, j): (usize, usize)| g.mul(am[i], hm[j]);

    let gens: Vec<(usize, usize)> =
        a.gens().iter().map(|&x| (pos_a[x], 0)).chain(h.gens().iter().map(|&y| (0, pos_h[y]))).collect();
    let mut homomorphism = true;
    let mut image = ElemSet::empty(g.order());
    let mut kernel = Vec::new();
    for i in 0..na {
        for j in 0..nh {
            let x = (i, j);
            image.insert(mu(x));
            if mu(x) == 0 {
                kernel.push((am[i], hm[j]));
            }
            homomorphism &= gens.iter().all(|&s| mu(sd_mul(x, s)) == g.mul(mu(x), mu(s)));
        }
    }
    let meet = g.meet(a, h);
    let mut expected: Vec<(Elem, Elem)> = meet.members().iter().map(|&y| (g.inv(y), y)).collect();
    expected.sort_unstable();
    kernel.sort_unstable();
    let faithful = ElemSet::from_iter(g.order(), am.iter().copied()).len() == na
        && ElemSet::from_iter(g.order(), hm.iter().copied()).len() == nh;
    Ok(SandwichReport {
        semidirect_order: na * nh,
        kernel_order: kernel.len(),
        intersection_order: meet.order(),
        homomorphism,
        surjective: image.len() == g.order(),
        kernel_matches: kernel == expected,
        faithful,
    })
}

/// `C_G(A) = A Z(G)` and `C_G(A) meet H <= Z(G)`.
pub fn cga_az_check(g: &FiniteGroup, w: &BaseWitness, h: &Subgroup) -> Vec<Check> {
    let z = g.center();
    let az = g.product_set(w.a.set(), z.set());
    let ch = g.meet(&w.centralizer, h);
    vec![
        Check::expect("centralizer of base equals A Z(G)", &az == w.centralizer.set(), || {
            json!({"centralizer": members(&w.centralizer), "a_z": az.to_vec()})
        }),
        Check::expect("centralizer meets scaling subgroup centrally", ch.is_subgroup_of(&z), || {
            json!({"centralizer_meet_h": members(&ch), "center": members(&z)})
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{construct, GroupSpec};

    fn build(spec: GroupSpec) -> FiniteGroup {
        construct(&spec).unwrap()
    }

    fn base_of(g: &FiniteGroup) -> BaseWitness {
        find_base(&SubgroupLattice::enumerate(g).unwrap()).unwrap()
    }

    #[test]
    fn monothetic_means_cyclic() {
        assert!(is_inductively_monothetic_finite(&build(GroupSpec::Cyclic { n: 6 })));
        assert!(!is_inductively_monothetic_finite(&build(GroupSpec::AbelianProduct { factors: vec![2, 2] })));
        assert!(!is_inductively_monothetic_finite(&build(GroupSpec::iwasawa(2, 3, 2, 2))));
    }

    #[test]
    fn bases() {
        let g = build(GroupSpec::AbelianProduct { factors: vec![2, 6] });
        let w = base_of(&g);
        assert_eq!((w.a.clone(), w.quotient_order, w.nontrivial), (g.whole(), 1, false));

        let q8 = build(GroupSpec::QuaternionM { n: 2 });
        let w = base_of(&q8);
        assert_eq!((w.a.order(), w.quotient_order, w.nontrivial), (4, 2, false));
        assert!(w.a.members().iter().any(|&x| q8.element_order(x) == 4));

        let g = build(GroupSpec::iwasawa(3, 7, 3, 2));
        let w = base_of(&g);
        assert_eq!((w.a.order(), w.quotient_order, w.nontrivial), (7, 3, true));
        assert_eq!(w.centralizer, w.a);
    }

    #[test]
    fn non_near_abelian_has_no_base() {
        // G/A cyclic forces A >= G' = Z(3)^2, whose diagonal is not normal
        let g = build(GroupSpec::product(vec![GroupSpec::dihedral(3), GroupSpec::dihedral(3)]));
        assert!(find_base(&SubgroupLattice::enumerate(&g).unwrap()).is_none());
    }

    #[test]
    fn scaling_subgroups() {
        let g = build(GroupSpec::Cyclic { n: 12 });
        assert!(find_scaling_subgroup(&g, &base_of(&g)).unwrap().is_trivial());

        let g = build(GroupSpec::iwasawa(3, 7, 3, 2));
        let w = base_of(&g);
        let h = find_scaling_subgroup(&g, &w).unwrap();
        assert_eq!(h.order(), 3);
        assert_eq!(g.product_set(w.a.set(), h.set()).len(), 21);

        let g = build(GroupSpec::SemidirectScalar { base: vec![9], h: 3, r: 4 });
        let w = base_of(&g);
        assert_eq!(find_scaling_subgroup(&g, &w).unwrap().order(), 3);
    }

    #[test]
    fn sandwich_kernels() {
        let g = build(GroupSpec::Cyclic { n: 4 });
        let a = g.subgroup_generated(&[2]);
        let r = sandwich_check(&g, &a, &g.whole()).unwrap();
        assert_eq!((r.semidirect_order, r.kernel_order), (8, 2));
        assert!(r.holds());

        let g = build(GroupSpec::iwasawa(3, 7, 3, 2));
        let w = base_of(&g);
        let h = find_scaling_subgroup(&g, &w).unwrap();
        let r = sandwich_check(&g, &w.a, &h).unwrap();
        assert_eq!(r.kernel_order, 1);
        assert!(r.holds());

        let refl = g.subgroup_generated(&[g.marked("b").unwrap()]);
        assert!(sandwich_check(&g, &refl, &w.a).is_err());
        assert!(sandwich_check(&g, &w.a, &g.trivial_subgroup()).is_err());
    }

    #[test]
    fn centralizer_of_base() {
        for spec in [
            GroupSpec::iwasawa(3, 7, 3, 2),
            GroupSpec::SemidirectScalar { base: vec![9], h: 3, r: 4 },
            GroupSpec::AbelianProduct { factors: vec![2, 4] },
            GroupSpec::iwasawa(3, 7, 9, 2),
        ] {
            let g = build(spec.clone());
            let w = base_of(&g);
            let h = find_scaling_subgroup(&g, &w).unwrap();
            assert!(cga_az_check(&g, &w, &h).iter().all(Check::is_pass), "{spec}");
        }
        let g = build(GroupSpec::SemidirectScalar { base: vec![9], h: 3, r: 4 });
        let w = base_of(&g);
        assert_eq!(w.centralizer, w.a);
        assert_eq!(g.center().order(), 3);
    }
}

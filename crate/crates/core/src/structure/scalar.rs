//! Automorphisms of a finite abelian group that leave every cyclic subgroup invariant,
//! compared with the scalar maps `x -> x^r`.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::exponent;
use crate::arith::{factorize, gcd};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::lca::{saut_decomposition, ComponentKind, GroupExponent, LcaDescriptor};

/// A permutation of element ids.
pub type Permutation = Vec<u16>;

/// Extends `images` of the group's generators to a homomorphism, if one exists.
fn extend_to_hom(g: &FiniteGroup, images: &[usize]) -> Option<Permutation> {
    let gens = g.generators();
    let mut map = vec![u16::MAX; g.order()];
    map[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (i, &t) in gens.iter().enumerate() {
            let y = g.mul(x, t);
            let fy = g.mul(map[x] as usize, images[i]) as u16;
            if map[y] == u16::MAX {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    Some(map)
}

/// All automorphisms mapping every element into its own cyclic subgroup.
pub fn cyclic_fixing_automorphisms(g: &FiniteGroup) -> BTreeSet<Permutation> {
    let gens = g.generators();
    // an automorphism fixing <t> sends t to a generator of <t>
    let choices: Vec<Vec<usize>> = gens
        .iter()
        .map(|&t| {
            let o = g.element_order(t) as u64;
            (1..=o).filter(|&k| gcd(k, o) == 1).map(|k| g.pow(t, k)).collect()
        })
        .collect();
    let cyclic: Vec<_> = (0..g.order()).map(|x| g.subgroup_generated(&[x])).collect();
    let mut out = BTreeSet::new();
    let mut pick = vec![0usize; gens.len()];
    loop {
        let images: Vec<usize> = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        if let Some(map) = extend_to_hom(g, &images) {
            let bijective = map.iter().collect::<BTreeSet<_>>().len() == g.order();
            if bijective && (0..g.order()).all(|x| cyclic[x].contains(map[x] as usize)) {
                out.insert(map);
            }
        }
        // odometer over the choices
        let mut i = 0;
        while i < pick.len() {
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
        if i == pick.len() {
            break;
        }
    }
    out
}

/// The maps `x -> x^r` for units `r` modulo the exponent.
pub fn scalar_maps(g: &FiniteGroup) -> BTreeSet<Permutation> {
    let exp = exponent(g, &g.whole());
    (1..=exp)
        .filter(|&r| gcd(r, exp) == 1)
        .map(|r| (0..g.order()).map(|x| g.pow(x, r) as u16).collect())
        .collect()
}

/// The descriptor of a finite abelian group, one general component per prime.
pub fn descriptor_of(g: &FiniteGroup) -> Result<LcaDescriptor> {
    let exp = exponent(g, &g.whole());
    LcaDescriptor::new(factorize(exp).into_iter().map(|(p, k)| {
        (p, ComponentKind::GeneralAbelian { exponent: GroupExponent::Finite(p.pow(k)), trivial: false })
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarLemmaReport {
    pub cyclic_fixing: usize,
    pub scalar: usize,
    pub equal: bool,
    /// Order of the scalar automorphism group from the symbolic decomposition.
    pub saut_order: Option<u64>,
}

impl ScalarLemmaReport {
    pub fn holds(&self) -> bool {
        self.equal && self.saut_order == Some(self.scalar as u64)
    }
}

pub fn scalar_morphism_check(g: &FiniteGroup) -> Result<ScalarLemmaReport> {
    if !g.is_abelian() {
        return Err(Error::Precondition("the group is not abelian".into()));
    }
    let fixing = cyclic_fixing_automorphisms(g);
    let scalar = scalar_maps(g);
    let saut_order = saut_decomposition(&descriptor_of(g)?)?.order();
    Ok(ScalarLemmaReport { cyclic_fixing: fixing.len(), scalar: scalar.len(), equal: fixing == scalar, saut_order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{construct, GroupSpec};

    #[test]
    fn scalar_lemma_small_cases() {
        for (factors, expected) in [(vec![9], 6), (vec![2, 2], 1), (vec![2, 4], 2), (vec![3, 9], 6), (vec![8], 4), (vec![6, 6], 2)] {
            let g = construct(&GroupSpec::AbelianProduct { factors: factors.clone() }).unwrap();
            let r = scalar_morphism_check(&g).unwrap();
            assert_eq!(r.scalar, expected, "{factors:?}");
            assert!(r.holds(), "{factors:?}: {r:?}");
        }
    }

    #[test]
    fn cyclic_fixing_is_narrower_than_all_automorphisms() {
        // Aut(Z(2)^2) has order 6, but only the identity fixes the three lines
        let g = construct(&GroupSpec::AbelianProduct { factors: vec![2, 2] }).unwrap();
        assert_eq!(cyclic_fixing_automorphisms(&g).len(), 1);
        let nonabelian = construct(&GroupSpec::dihedral(3)).unwrap();
        assert!(scalar_morphism_check(&nonabelian).is_err());
    }
}

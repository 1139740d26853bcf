//! Subgroup lattices: enumeration, join and meet, permutability and the modular law.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{ElemSet, Elem, FiniteGroup, Subgroup};

pub const LATTICE_CAP: usize = 512;

// Above this many subgroups join/meet are answered from the up/down sets on demand.
const TABLE_LIMIT: usize = 4096;

/// Every subgroup of a group, in canonical order, with the inclusion relation.
pub struct SubgroupLattice<'g> {
    group: &'g FiniteGroup,
    subgroups: Vec<Subgroup>,
    index: HashMap<ElemSet, usize>,
    /// `up[i]` holds the indices of subgroups containing subgroup `i`.
    up: Vec<ElemSet>,
    down: Vec<ElemSet>,
    tables: Option<(Vec<u16>, Vec<u16>)>,
}

/// Two subgroups with `XY != YX`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutabilityWitness {
    pub x: Subgroup,
    pub y: Subgroup,
}

/// Subgroups with `X <= Z` and `X v (Y ^ Z) != (X v Y) ^ Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularityWitness {
    pub x: Subgroup,
    pub y: Subgroup,
    pub z: Subgroup,
}

impl PermutabilityWitness {
    pub fn verify(&self, g: &FiniteGroup) -> bool {
        g.product_set(self.x.set(), self.y.set()) != g.product_set(self.y.set(), self.x.set())
    }
}

impl ModularityWitness {
    pub fn verify(&self, g: &FiniteGroup) -> bool {
        let (left, right) = self.sides(g);
        self.x.is_subgroup_of(&self.z) && left != right
    }

    /// `(X v (Y ^ Z), (X v Y) ^ Z)`.
    pub fn sides(&self, g: &FiniteGroup) -> (Subgroup, Subgroup) {
        let left = g.join(&self.x, &g.meet(&self.y, &self.z));
        let right = g.meet(&g.join(&self.x, &self.y), &self.z);
        (left, right)
    }

    /// A pentagon sublattice: bottom, the short side `Y`, the long side `a < b`, top.
    pub fn pentagon(&self, g: &FiniteGroup) -> [Subgroup; 5] {
        let (a, b) = self.sides(g);
        let bottom = g.meet(&self.y, &self.z);
        let top = g.join(&self.x, &self.y);
        [bottom, self.y.clone(), a, b, top]
    }
}

impl<'g> SubgroupLattice<'g> {
    pub fn enumerate(group: &'g FiniteGroup) -> Result<Self> {
        Self::enumerate_with_cap(group, LATTICE_CAP)
    }

    /// Closes the cyclic subgroups of prime-power order under joins. Every subgroup
    /// is generated by its prime-power elements, so the closure reaches all of them.
    pub fn enumerate_with_cap(group: &'g FiniteGroup, cap: usize) -> Result<Self> {
        if group.order() > cap {
            return Err(Error::OrderCap { order: group.order(), cap });
        }
        let mut extenders = Vec::new();
        let mut seen = HashMap::new();
        for x in 1..group.order() {
            if crate::arith::as_prime_power(group.element_order(x) as u64).is_none() {
                continue;
            }
            let c = group.subgroup_generated(&[x]);
            if !seen.contains_key(c.set()) {
                seen.insert(c.set().clone(), ());
                extenders.push(x);
            }
        }

        let trivial = group.trivial_subgroup();
        let mut found: HashMap<ElemSet, usize> = HashMap::new();
        let mut all = vec![trivial.clone()];
        found.insert(trivial.set().clone(), 0);
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for i in frontier {
                for &x in &extenders {
                    if all[i].contains(x) {
                        continue;
                    }
                    let s = group.extend(&all[i], x);
                    if !found.contains_key(s.set()) {
                        found.insert(s.set().clone(), all.len());
                        next.push(all.len());
                        all.push(s);
                    }
                }
            }
            frontier = next;
        }
        Ok(Self::from_subgroups(group, all))
    }

    fn from_subgroups(group: &'g FiniteGroup, mut subgroups: Vec<Subgroup>) -> Self {
        subgroups.sort();
        let n = subgroups.len();
        let index = subgroups.iter().enumerate().map(|(i, s)| (s.set().clone(), i)).collect();
        let mut up = vec![ElemSet::empty(n); n];
        let mut down = vec![ElemSet::empty(n); n];
        for i in 0..n {
            up[i].insert(i);
            down[i].insert(i);
            for j in i + 1..n {
                if subgroups[j].order() % subgroups[i].order() == 0 && subgroups[i].is_subgroup_of(&subgroups[j]) {
                    up[i].insert(j);
                    down[j].insert(i);
                }
            }
        }
        let mut lattice = Self { group, subgroups, index, up, down, tables: None };
        if n <= TABLE_LIMIT {
            let (mut join, mut meet) = (vec![0u16; n * n], vec![0u16; n * n]);
            for i in 0..n {
                for j in i..n {
                    let (a, b) = (lattice.join_index_slow(i, j) as u16, lattice.meet_index_slow(i, j) as u16);
                    join[i * n + j] = a;
                    join[j * n + i] = a;
                    meet[i * n + j] = b;
                    meet[j * n + i] = b;
                }
            }
            lattice.tables = Some((join, meet));
        }
        lattice
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn get(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn index_of(&self, s: &Subgroup) -> Option<usize> {
        self.index.get(s.set()).copied()
    }

    /// Whether subgroup `i` is contained in subgroup `j`.
    pub fn includes(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    fn join_index_slow(&self, i: usize, j: usize) -> usize {
        self.up[i].first_common(&self.up[j]).expect("the whole group bounds everything")
    }

    fn meet_index_slow(&self, i: usize, j: usize) -> usize {
        self.down[i].last_common(&self.down[j]).expect("the trivial group is below everything")
    }

    pub fn join_index(&self, i: usize, j: usize) -> usize {
        match &self.tables {
            Some((join, _)) => join[i * self.len() + j] as usize,
            None => self.join_index_slow(i, j),
        }
    }

    pub fn meet_index(&self, i: usize, j: usize) -> usize {
        match &self.tables {
            Some((_, meet)) => meet[i * self.len() + j] as usize,
            None => self.meet_index_slow(i, j),
        }
    }

    pub fn join(&self, x: &Subgroup, y: &Subgroup) -> Subgroup {
        let (i, j) = (self.expect_index(x), self.expect_index(y));
        self.subgroups[self.join_index(i, j)].clone()
    }

    pub fn meet(&self, x: &Subgroup, y: &Subgroup) -> Subgroup {
        let (i, j) = (self.expect_index(x), self.expect_index(y));
        self.subgroups[self.meet_index(i, j)].clone()
    }

    fn expect_index(&self, s: &Subgroup) -> usize {
        self.index_of(s).expect("subgroup belongs to this lattice")
    }

    pub fn normal_subgroups(&self) -> Vec<&Subgroup> {
        self.subgroups.iter().filter(|s| self.group.is_normal(s)).collect()
    }

    pub fn cyclic_subgroups(&self) -> Vec<&Subgroup> {
        self.subgroups.iter().filter(|s| s.members().iter().any(|&x| self.group.element_order(x) == s.order())).collect()
    }

    /// Whether subgroups `i` and `j` permute, by `|X||Y| = |X v Y||X ^ Y|`.
    pub fn permute(&self, i: usize, j: usize) -> bool {
        let (x, y) = (self.subgroups[i].order(), self.subgroups[j].order());
        x * y == self.subgroups[self.join_index(i, j)].order() * self.subgroups[self.meet_index(i, j)].order()
    }

    pub fn is_quasihamiltonian(&self) -> (bool, Option<PermutabilityWitness>) {
        let n = self.len();
        for i in 0..n {
            for j in i + 1..n {
                if !self.permute(i, j) {
                    let w = PermutabilityWitness { x: self.subgroups[i].clone(), y: self.subgroups[j].clone() };
                    return (false, Some(w));
                }
            }
        }
        (true, None)
    }

    /// Checks the modular law over all triples with `X < Z`; the least failing triple
    /// in index order is the witness.
    pub fn is_modular(&self) -> (bool, Option<ModularityWitness>) {
        let n = self.len();
        let top = n - 1;
        let failure = (1..n).into_par_iter().find_map_first(|x| {
            for z in self.up[x].iter() {
                if z == x || z == top {
                    continue;
                }
                for y in 0..n {
                    let left = self.join_index(x, self.meet_index(y, z));
                    let right = self.meet_index(self.join_index(x, y), z);
                    if left != right {
                        return Some((x, y, z));
                    }
                }
            }
            None
        });
        match failure {
            None => (true, None),
            Some((x, y, z)) => {
                let s = &self.subgroups;
                (false, Some(ModularityWitness { x: s[x].clone(), y: s[y].clone(), z: s[z].clone() }))
            }
        }
    }

    /// Pairs `(i, j)` where subgroup `j` covers subgroup `i`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in self.up[i].iter().filter(|&j| j != i) {
                let between = self.up[i].intersection(&self.down[j]).len();
                if between == 2 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Node<'a> {
            index: usize,
            order: usize,
            members: &'a [Elem],
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            group_order: usize,
            subgroups: Vec<Node<'a>>,
            covers: Vec<(usize, usize)>,
        }
        let doc = Doc {
            group_order: self.group.order(),
            subgroups: self
                .subgroups
                .iter()
                .enumerate()
                .map(|(index, s)| Node { index, order: s.order(), members: s.members() })
                .collect(),
            covers: self.covers(),
        };
        serde_json::to_string_pretty(&doc).expect("lattice serialises")
    }

    /// Hasse diagram, one rank per subgroup order.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
        let mut orders: Vec<usize> = self.subgroups.iter().map(Subgroup::order).collect();
        orders.dedup();
        for o in orders {
            let ids: Vec<String> =
                (0..self.len()).filter(|&i| self.subgroups[i].order() == o).map(|i| format!("s{i}")).collect();
            let _ = writeln!(out, "  {{ rank=same; {}; }}", ids.join("; "));
        }
        for (i, s) in self.subgroups.iter().enumerate() {
            let _ = writeln!(out, "  s{i} [label=\"{i}: order {}\"];", s.order());
        }
        for (i, j) in self.covers() {
            let _ = writeln!(out, "  s{i} -> s{j};");
        }
        out.push_str("}\n");
        out
    }
}

/// The product set `XY` and whether it is a subgroup.
pub fn set_product(g: &FiniteGroup, x: &Subgroup, y: &Subgroup) -> (ElemSet, bool) {
    let xy = g.product_set(x.set(), y.set());
    let closed = xy.len() == g.join(x, y).order();
    (xy, closed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{construct, GroupSpec};
    use proptest::prelude::*;

    fn build(spec: GroupSpec) -> FiniteGroup {
        construct(&spec).unwrap()
    }

    fn q8() -> FiniteGroup {
        build(GroupSpec::QuaternionM { n: 2 })
    }

    fn d8() -> FiniteGroup {
        build(GroupSpec::dihedral(4))
    }

    // r = (1;0), s = (0;1) in the dihedral model
    fn rotation_reflection(g: &FiniteGroup) -> (Elem, Elem) {
        (g.marked("a").unwrap(), g.marked("b").unwrap())
    }

    #[test]
    fn subgroup_counts() {
        let z7 = build(GroupSpec::Cyclic { n: 7 });
        assert_eq!(SubgroupLattice::enumerate(&z7).unwrap().len(), 2);
        let g = q8();
        let l = SubgroupLattice::enumerate(&g).unwrap();
        assert_eq!(l.len(), 6);
        assert_eq!(l.normal_subgroups().len(), 6);
        let g = build(GroupSpec::iwasawa(3, 7, 3, 2));
        let l = SubgroupLattice::enumerate(&g).unwrap();
        assert_eq!(l.len(), 10);
        let orders: Vec<usize> = l.subgroups().iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![1, 3, 3, 3, 3, 3, 3, 3, 7, 21]);
        // elementary abelian of rank 3 over GF(2): 1 + 7 + 7 + 1
        let g = build(GroupSpec::AbelianProduct { factors: vec![2, 2, 2] });
        assert_eq!(SubgroupLattice::enumerate(&g).unwrap().len(), 16);
    }

    #[test]
    fn cap_is_enforced() {
        let g = build(GroupSpec::Cyclic { n: 600 });
        assert!(matches!(SubgroupLattice::enumerate(&g), Err(Error::OrderCap { order: 600, cap: 512 })));
        assert!(SubgroupLattice::enumerate_with_cap(&g, 600).is_ok());
    }

    #[test]
    fn quaternion_join_and_meet() {
        let g = q8();
        let l = SubgroupLattice::enumerate(&g).unwrap();
        let fours: Vec<&Subgroup> = l.subgroups().iter().filter(|s| s.order() == 4).collect();
        assert_eq!(fours.len(), 3);
        assert_eq!(l.join(fours[0], fours[1]), g.whole());
        assert_eq!(l.meet(fours[0], fours[1]).order(), 2);
        assert_eq!(l.join(fours[2], fours[2]), *fours[2]);
        let (xy, closed) = set_product(&g, fours[0], fours[1]);
        assert_eq!((xy.len(), closed), (8, true));
    }

    #[test]
    fn dihedral_products() {
        let g = d8();
        let (r, s) = rotation_reflection(&g);
        let x = g.subgroup_generated(&[s]);
        let y = g.subgroup_generated(&[g.mul(r, s)]);
        let (xy, closed) = set_product(&g, &x, &y);
        assert_eq!((xy.len(), closed), (4, false));
        let (one_y, closed) = set_product(&g, &g.trivial_subgroup(), &y);
        assert!(closed && &one_y == y.set());
    }

    #[test]
    fn quasihamiltonian_examples() {
        let g = q8();
        assert_eq!(SubgroupLattice::enumerate(&g).unwrap().is_quasihamiltonian(), (true, None));
        let g = build(GroupSpec::AbelianProduct { factors: vec![4, 2, 2] });
        assert!(SubgroupLattice::enumerate(&g).unwrap().is_quasihamiltonian().0);

        let g = d8();
        let (ok, w) = SubgroupLattice::enumerate(&g).unwrap().is_quasihamiltonian();
        let w = w.unwrap();
        assert!(!ok && w.verify(&g));
        assert!(w.x.order() == 2 && w.y.order() == 2);
        assert!(!g.is_normal(&w.x) && !g.is_normal(&w.y));
    }

    #[test]
    fn modular_examples() {
        let g = build(GroupSpec::iwasawa(3, 7, 3, 2));
        let l = SubgroupLattice::enumerate(&g).unwrap();
        assert_eq!(l.is_modular(), (true, None));
        assert!(!l.is_quasihamiltonian().0);

        let g = d8();
        let (ok, w) = SubgroupLattice::enumerate(&g).unwrap().is_modular();
        let w = w.unwrap();
        assert!(!ok && w.verify(&g));
        // the only pentagons in D8 sit over a reflection inside a Klein four-group
        assert_eq!((w.x.order(), w.y.order(), w.z.order()), (2, 2, 4));
        let (left, right) = w.sides(&g);
        assert_eq!((left, right), (w.x.clone(), w.z.clone()));
        let [bottom, y, a, b, top] = w.pentagon(&g);
        assert!(bottom.is_trivial() && top == g.whole());
        assert!(a.is_subgroup_of(&b) && a != b);
        assert_eq!(g.meet(&y, &b), bottom);
        assert_eq!(g.join(&y, &a), top);

        let s3 = build(GroupSpec::iwasawa(2, 3, 2, 2));
        assert!(SubgroupLattice::enumerate(&s3).unwrap().is_modular().0);
    }

    #[test]
    fn exports() {
        let g = q8();
        let l = SubgroupLattice::enumerate(&g).unwrap();
        assert_eq!(l.covers().len(), 7);
        let dot = l.to_dot();
        assert!(dot.contains("s0 -> s1;") && dot.matches("rank=same").count() == 4);
        let v: serde_json::Value = serde_json::from_str(&l.to_json()).unwrap();
        assert_eq!(v["subgroups"].as_array().unwrap().len(), 6);
        assert_eq!(v["subgroups"][5]["order"], 8);
    }

    fn small_specs() -> Vec<GroupSpec> {
        vec![
            GroupSpec::dihedral(4),
            GroupSpec::dihedral(6),
            GroupSpec::QuaternionM { n: 3 },
            GroupSpec::iwasawa(2, 5, 4, 4),
            GroupSpec::SemidirectScalar { base: vec![9], h: 3, r: 4 },
            GroupSpec::AbelianProduct { factors: vec![2, 6] },
            GroupSpec::product(vec![GroupSpec::dihedral(3), GroupSpec::Cyclic { n: 2 }]),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn lattice_axioms_and_ore(which in 0usize..7, a in any::<prop::sample::Index>(),
                                  b in any::<prop::sample::Index>(), c in any::<prop::sample::Index>()) {
            let g = build(small_specs()[which].clone());
            let l = SubgroupLattice::enumerate(&g).unwrap();
            let n = l.len();
            let (x, y, z) = (a.index(n), b.index(n), c.index(n));
            let (j, m) = (|p, q| l.join_index(p, q), |p, q| l.meet_index(p, q));
            prop_assert_eq!(j(x, x), x);
            prop_assert_eq!(m(x, x), x);
            prop_assert_eq!(j(x, y), j(y, x));
            prop_assert_eq!(m(x, y), m(y, x));
            prop_assert_eq!(j(j(x, y), z), j(x, j(y, z)));
            prop_assert_eq!(m(m(x, y), z), m(x, m(y, z)));
            prop_assert_eq!(j(x, m(x, y)), x);
            prop_assert_eq!(m(x, j(x, y)), x);
            prop_assert_eq!(l.get(j(x, y)), &g.join(l.get(x), l.get(y)));
            prop_assert_eq!(l.get(m(x, y)), &g.meet(l.get(x), l.get(y)));

            let (sx, sy) = (l.get(x), l.get(y));
            let (xy, closed) = set_product(&g, sx, sy);
            let yx = g.product_set(sy.set(), sx.set());
            prop_assert_eq!(closed, xy == yx);
            prop_assert_eq!(closed, l.permute(x, y));
            prop_assert_eq!(xy.len() * l.get(m(x, y)).order(), sx.order() * sy.order());
        }
    }

    #[test]
    fn quasihamiltonian_implies_modular() {
        for spec in small_specs() {
            let g = build(spec.clone());
            let l = SubgroupLattice::enumerate(&g).unwrap();
            if l.is_quasihamiltonian().0 {
                assert!(l.is_modular().0, "{spec}");
            }
        }
    }
}

//! Finite groups given by a full multiplication table over ids `0..order`,
//! with the identity at id 0.

mod set;
mod spec;

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

pub use set::ElemSet;
pub use spec::{construct, construct_with_cap, quaternion_relations_at, quaternion_relations_hold, GroupSpec, CONSTRUCTION_CAP};

use crate::arith::prime_divisors;
use crate::error::{Error, Result};

pub type Elem = usize;

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    orders: Vec<u32>,
    generators: Vec<Elem>,
    labels: Option<Vec<String>>,
    marked: Vec<(String, Elem)>,
}

/// A subgroup, identified by its member set. The generator list is advisory.
#[derive(Clone, Debug)]
pub struct Subgroup {
    set: ElemSet,
    members: Vec<Elem>,
    gens: Vec<Elem>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.set == other.set
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.set.hash(state);
    }
}

impl Ord for Subgroup {
    /// By order, then lexicographically by sorted member list.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.members.len(), &self.members).cmp(&(other.members.len(), &other.members))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn set(&self) -> &ElemSet {
        &self.set
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.set.contains(x)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.set.is_subset(&other.set)
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }
}

/// Result of reducing a group modulo a normal subgroup.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    /// Coset id of every element of the parent group.
    pub projection: Vec<Elem>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    order: usize,
    mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Builds and verifies a group from a product function on `0..order`.
    pub fn from_fn(order: usize, cap: usize, f: impl Fn(Elem, Elem) -> Elem) -> Result<Self> {
        if order == 0 {
            return Err(Error::BadTable("empty table".into()));
        }
        if order > cap {
            return Err(Error::OrderCap { order, cap });
        }
        let mut mul = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let c = f(a, b);
                if c >= order {
                    return Err(Error::BadTable(format!("entry {c} out of range at ({a}, {b})")));
                }
                mul.push(c as u16);
            }
        }
        Self::from_raw(order, mul)
    }

    /// Builds and verifies a group from explicit rows.
    pub fn from_table(rows: &[Vec<usize>], labels: Option<Vec<String>>, cap: usize) -> Result<Self> {
        let n = rows.len();
        if let Some((i, _)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::BadTable(format!("row {i} has the wrong length")));
        }
        let g = Self::from_fn(n, cap, |a, b| rows[a][b])?;
        match labels {
            Some(l) if l.len() != n => Err(Error::BadTable("label count differs from order".into())),
            l => Ok(g.with_labels(l)),
        }
    }

    fn from_raw(order: usize, mul: Vec<u16>) -> Result<Self> {
        let at = |a: usize, b: usize| mul[a * order + b] as usize;
        for x in 0..order {
            if at(0, x) != x || at(x, 0) != x {
                return Err(Error::BadTable("element 0 is not the identity".into()));
            }
        }
        // Latin square: every row and column is a permutation
        let mut seen = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                let c = at(a, b);
                if seen[c] == a {
                    return Err(Error::BadTable(format!("row {a} repeats {c}")));
                }
                seen[c] = a;
            }
        }
        seen.fill(usize::MAX);
        for b in 0..order {
            for a in 0..order {
                let c = at(a, b);
                if seen[c] == b {
                    return Err(Error::BadTable(format!("column {b} repeats {c}")));
                }
                seen[c] = b;
            }
        }
        let mut inv = vec![0u16; order];
        for a in 0..order {
            let b = (0..order).find(|&b| at(a, b) == 0).expect("latin rows contain the identity");
            if at(b, a) != 0 {
                return Err(Error::BadTable(format!("left and right inverse of {a} differ")));
            }
            inv[a] = b as u16;
        }
        let generators = magma_generators(order, &at);
        // Light's test: associativity at each generator in the middle spreads to all products.
        for &g in &generators {
            for x in 0..order {
                let xg = at(x, g);
                for y in 0..order {
                    if at(xg, y) != at(x, at(g, y)) {
                        return Err(Error::BadTable(format!("not associative at ({x}, {g}, {y})")));
                    }
                }
            }
        }
        let mut orders = vec![0u32; order];
        for x in 0..order {
            let (mut y, mut k) = (x, 1u32);
            while y != 0 {
                y = at(y, x);
                k += 1;
            }
            orders[x] = k;
        }
        Ok(Self { order, mul, inv, orders, generators, labels: None, marked: Vec::new() })
    }

    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Self {
        self.labels = labels;
        self
    }

    pub(crate) fn with_marked(mut self, marked: Vec<(String, Elem)>) -> Self {
        self.marked = marked;
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a] as usize
    }

    pub fn pow(&self, x: Elem, k: u64) -> Elem {
        let k = k % self.orders[x] as u64;
        (0..k).fold(0, |acc, _| self.mul(acc, x))
    }

    pub fn element_order(&self, x: Elem) -> usize {
        self.orders[x] as usize
    }

    pub fn element_orders(&self) -> &[u32] {
        &self.orders
    }

    /// `g x g^-1`.
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `[x, y] = x y x^-1 y^-1`.
    pub fn commutator(&self, x: Elem, y: Elem) -> Elem {
        self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))
    }

    pub fn commute(&self, x: Elem, y: Elem) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    /// A small generating set of the whole group.
    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: Elem) -> String {
        self.labels.as_ref().map_or_else(|| x.to_string(), |l| l[x].clone())
    }

    /// Designated generators of the recipe, e.g. `a` and `b` of `M_n`.
    pub fn marked(&self, name: &str) -> Option<Elem> {
        self.marked.iter().find(|(n, _)| n == name).map(|(_, e)| *e)
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|&x| g.iter().all(|&y| self.commute(x, y)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.orders.iter().any(|&o| o as usize == self.order)
    }

    pub fn prime_divisors(&self) -> Vec<u64> {
        prime_divisors(self.order as u64)
    }

    pub fn whole(&self) -> Subgroup {
        self.subgroup_generated(&self.generators.clone())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.subgroup_generated(&[])
    }

    /// Least subgroup containing `gens`, by closure under multiplication.
    pub fn subgroup_generated(&self, gens: &[Elem]) -> Subgroup {
        let mut set = ElemSet::empty(self.order);
        set.insert(0);
        let mut members = vec![0];
        let mut kept = Vec::new();
        for &g in gens {
            if set.contains(g) {
                continue;
            }
            kept.push(g);
            self.close(&mut set, &mut members, &kept);
        }
        members.sort_unstable();
        Subgroup { set, members, gens: kept }
    }

    /// Smallest subgroup containing `s` and `x`.
    pub fn extend(&self, s: &Subgroup, x: Elem) -> Subgroup {
        if s.contains(x) {
            return s.clone();
        }
        let mut set = s.set.clone();
        let mut members = s.members.clone();
        let mut gens = s.gens.clone();
        gens.push(x);
        self.close(&mut set, &mut members, &gens);
        members.sort_unstable();
        Subgroup { set, members, gens }
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let (big, small) = if a.order() >= b.order() { (a, b) } else { (b, a) };
        small.gens.iter().fold(big.clone(), |acc, &g| self.extend(&acc, g))
    }

    pub fn meet(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        self.subgroup_from_set(a.set.intersection(&b.set))
            .expect("intersections of subgroups are subgroups")
    }

    // breadth-first closure of `members` under right multiplication by `gens`
    fn close(&self, set: &mut ElemSet, members: &mut Vec<Elem>, gens: &[Elem]) {
        let mut queue: VecDeque<Elem> = members.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
    }

    /// Wraps a member set as a subgroup, or `None` if it is not one.
    pub fn subgroup_from_set(&self, set: ElemSet) -> Option<Subgroup> {
        if !self.is_subgroup_set(&set) {
            return None;
        }
        let members = set.to_vec();
        let sub = self.subgroup_generated(&members);
        debug_assert_eq!(sub.set, set);
        Some(sub)
    }

    /// A finite nonempty set closed under multiplication is a subgroup.
    pub fn is_subgroup_set(&self, set: &ElemSet) -> bool {
        if !set.contains(0) {
            return false;
        }
        let members = set.to_vec();
        members.iter().all(|&a| members.iter().all(|&b| set.contains(self.mul(a, b))))
    }

    pub fn is_normal(&self, s: &Subgroup) -> bool {
        self.generators
            .iter()
            .all(|&g| s.gens.iter().all(|&x| s.contains(self.conj(g, x))))
    }

    pub fn conjugate_subgroup(&self, g: Elem, s: &Subgroup) -> Subgroup {
        let set = ElemSet::from_iter(self.order, s.members.iter().map(|&x| self.conj(g, x)));
        let mut members = set.to_vec();
        members.sort_unstable();
        let gens = s.gens.iter().map(|&x| self.conj(g, x)).collect();
        Subgroup { set, members, gens }
    }

    pub fn are_conjugate(&self, a: &Subgroup, b: &Subgroup) -> Option<Elem> {
        if a.order() != b.order() {
            return None;
        }
        (0..self.order).find(|&g| a.gens.iter().all(|&x| b.contains(self.conj(g, x))))
    }

    pub fn is_abelian_subgroup(&self, s: &Subgroup) -> bool {
        s.gens.iter().all(|&x| s.gens.iter().all(|&y| self.commute(x, y)))
    }

    pub fn center(&self) -> Subgroup {
        let set = ElemSet::from_iter(
            self.order,
            (0..self.order).filter(|&x| self.generators.iter().all(|&g| self.commute(x, g))),
        );
        self.subgroup_from_set(set).expect("the center is a subgroup")
    }

    pub fn centralizer(&self, s: &Subgroup) -> Subgroup {
        let set = ElemSet::from_iter(
            self.order,
            (0..self.order).filter(|&x| s.gens.iter().all(|&a| self.commute(x, a))),
        );
        self.subgroup_from_set(set).expect("centralizers are subgroups")
    }

    /// The subgroup generated by all commutators.
    pub fn commutator_subgroup(&self) -> Subgroup {
        let mut comms = Vec::new();
        let mut seen = ElemSet::empty(self.order);
        for x in 0..self.order {
            for y in 0..self.order {
                let c = self.commutator(x, y);
                if seen.insert(c) {
                    comms.push(c);
                }
            }
        }
        self.subgroup_generated(&comms)
    }

    /// Whether the order of `x` involves only primes of `sigma`.
    pub fn is_sigma_element(&self, x: Elem, sigma: &[u64]) -> bool {
        let mut o = self.orders[x] as u64;
        for &p in sigma {
            while o % p == 0 {
                o /= p;
            }
        }
        o == 1
    }

    /// All `sigma`-elements, and whether they form a subgroup.
    pub fn sigma_elements(&self, sigma: &[u64]) -> (ElemSet, bool) {
        let set = ElemSet::from_iter(self.order, (0..self.order).filter(|&x| self.is_sigma_element(x, sigma)));
        let closed = self.is_subgroup_set(&set);
        (set, closed)
    }

    /// Elements whose order is coprime to every prime of `sigma`.
    pub fn sigma_prime_elements(&self, sigma: &[u64]) -> ElemSet {
        ElemSet::from_iter(
            self.order,
            (0..self.order).filter(|&x| sigma.iter().all(|p| self.orders[x] as u64 % p != 0)),
        )
    }

    /// The set `{xy : x in a, y in b}`.
    pub fn product_set(&self, a: &ElemSet, b: &ElemSet) -> ElemSet {
        let bs = b.to_vec();
        let mut out = ElemSet::empty(self.order);
        for x in a.iter() {
            for &y in &bs {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    /// Least `k >= 1` with `x^k` in `n`; the order of `xN` when `n` is normal.
    pub fn order_modulo(&self, x: Elem, n: &Subgroup) -> usize {
        let (mut y, mut k) = (x, 1);
        while !n.contains(y) {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn quotient(&self, n: &Subgroup) -> Result<Quotient> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let mut projection = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        // cosets ranked by their least element
        for x in 0..self.order {
            if projection[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for &m in &n.members {
                projection[self.mul(x, m)] = id;
            }
        }
        let group = FiniteGroup::from_fn(reps.len(), self.order, |a, b| projection[self.mul(reps[a], reps[b])])?;
        let labels = self.labels.as_ref().map(|l| reps.iter().map(|&r| format!("{}N", l[r])).collect());
        Ok(Quotient { group: group.with_labels(labels), projection })
    }

    pub fn quotient_group(&self, n: &Subgroup) -> Result<FiniteGroup> {
        self.quotient(n).map(|q| q.group)
    }

    /// The subgroup as a group in its own right, with the embedding of its ids.
    pub fn subgroup_as_group(&self, s: &Subgroup) -> (FiniteGroup, Vec<Elem>) {
        let embed = s.members.clone();
        let mut index = vec![usize::MAX; self.order];
        for (i, &x) in embed.iter().enumerate() {
            index[x] = i;
        }
        let g = FiniteGroup::from_fn(embed.len(), self.order, |a, b| index[self.mul(embed[a], embed[b])])
            .expect("subgroups are groups");
        let labels = self.labels.as_ref().map(|l| embed.iter().map(|&x| l[x].clone()).collect());
        (g.with_labels(labels), embed)
    }

    /// External direct product with ids `(a, b) -> a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup, cap: usize) -> Result<FiniteGroup> {
        let m = other.order;
        let order = self.order * m;
        if order > cap {
            return Err(Error::OrderCap { order, cap });
        }
        let g = FiniteGroup::from_fn(order, cap, |x, y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))?;
        let labels = match (&self.labels, &other.labels) {
            (None, None) => None,
            _ => Some((0..order).map(|x| format!("({},{})", self.label(x / m), other.label(x % m))).collect()),
        };
        Ok(g.with_labels(labels))
    }

    /// Cayley-table export `{order, mul, labels?}`.
    pub fn to_table_json(&self) -> String {
        let t = TableJson {
            order: self.order,
            mul: (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect(),
            labels: self.labels.clone(),
        };
        serde_json::to_string(&t).expect("table serialisation cannot fail")
    }

    pub fn from_table_json(text: &str, cap: usize) -> Result<Self> {
        let t: TableJson = serde_json::from_str(text)?;
        if t.mul.len() != t.order {
            return Err(Error::BadTable("order differs from row count".into()));
        }
        Self::from_table(&t.mul, t.labels, cap)
    }
}

// Greedy generating set in the magma sense: every element is a left-normed
// product of the chosen generators.
fn magma_generators(order: usize, at: &impl Fn(usize, usize) -> usize) -> Vec<Elem> {
    let mut reached = vec![false; order];
    reached[0] = true;
    let mut list = vec![0];
    let mut gens: Vec<Elem> = Vec::new();
    loop {
        let Some(next) = (0..order).rev().find(|&x| !reached[x]) else {
            return gens;
        };
        gens.push(next);
        let mut i = 0;
        // re-close from scratch so older elements meet the new generator
        while i < list.len() {
            let x = list[i];
            for &g in &gens {
                let y = at(x, g);
                if !reached[y] {
                    reached[y] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
    }
}

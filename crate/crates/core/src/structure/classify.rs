//! Classification of quasihamiltonian p-groups, recognition of Iwasawa (p,q)-factors
//! and the block decomposition of modular groups.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::json;

use super::sylow::internal_direct_product;
use super::{exponent, members, sigma_part, Check};
use crate::arith::{as_prime_power, prime_divisors, prime_power_log};
use crate::error::{Error, Result};
use crate::group::{quaternion_relations_at, Elem, ElemSet, FiniteGroup, Subgroup};
use crate::lattice::SubgroupLattice;

/// Which description of a quasihamiltonian p-group applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TqhClass {
    Abelian,
    /// `G = A<b>` with `b a b^-1 = a^(1+p^s)` on the abelian subgroup `A`.
    Scalar { s: u32, base_order: usize, b: Elem },
    /// `G = E x M_n` with `E` elementary abelian of the given rank.
    Quaternionic { n: u32, elementary_rank: u32 },
    NotTqh,
}

impl TqhClass {
    pub fn is_tqh(&self) -> bool {
        *self != TqhClass::NotTqh
    }
}

impl fmt::Display for TqhClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TqhClass::Abelian => write!(f, "abelian"),
            TqhClass::Scalar { s, .. } => write!(f, "scalar(s={s})"),
            TqhClass::Quaternionic { n, elementary_rank } => write!(f, "quaternionic(n={n}, A2=Z(2)^{elementary_rank})"),
            TqhClass::NotTqh => write!(f, "not-tqh"),
        }
    }
}

fn scalar_clause(l: &SubgroupLattice, p: u64) -> Option<TqhClass> {
    let g = l.group();
    let min_s = if p == 2 { 2 } else { 1 };
    let cyclics: Vec<Subgroup> = (0..g.order()).map(|b| g.subgroup_generated(&[b])).collect();
    for a in l.subgroups().iter().rev().filter(|a| g.is_abelian_subgroup(a)) {
        let exp = exponent(g, a);
        let a0 = *a.members().iter().find(|&&x| g.element_order(x) as u64 == exp)?;
        for b in 0..g.order() {
            let cyclic = &cyclics[b];
            if a.order() * cyclic.order() != g.order() * a.set().intersection(cyclic.set()).len() {
                continue;
            }
            let image = g.conj(b, a0);
            let Some(r) = (0..exp).find(|&r| g.pow(a0, r) == image) else { continue };
            if !a.members().iter().all(|&x| g.conj(b, x) == g.pow(x, r)) {
                continue;
            }
            // r = 1 + p^s exactly, modulo the exponent
            let d = (r + exp - 1) % exp;
            if let Some(s) = prime_power_log(p, d) {
                if s >= min_s {
                    return Some(TqhClass::Scalar { s, base_order: a.order(), b });
                }
            }
        }
    }
    None
}

fn quaternionic_clause(l: &SubgroupLattice) -> Option<TqhClass> {
    let g = l.group();
    let z = g.center();
    for m in l.subgroups().iter().filter(|m| m.order() >= 8 && !g.is_abelian_subgroup(m)) {
        let n = prime_power_log(2, m.order() as u64)? - 1;
        let fours: Vec<Elem> = m.members().iter().copied().filter(|&x| g.element_order(x) == 4).collect();
        let top: Vec<Elem> = m.members().iter().copied().filter(|&x| g.element_order(x) == 1 << n).collect();
        let presented = fours.iter().any(|&a| top.iter().any(|&b| quaternion_relations_at(g, a, b, n)));
        if !presented {
            continue;
        }
        let rank = prime_power_log(2, (g.order() / m.order()) as u64)?;
        let complement = l.subgroups().iter().find(|e| {
            e.order() * m.order() == g.order()
                && e.is_subgroup_of(&z)
                && e.set().intersection(m.set()).len() == 1
                && e.members().iter().all(|&x| g.element_order(x) <= 2)
        });
        if complement.is_some() {
            return Some(TqhClass::Quaternionic { n, elementary_rank: rank });
        }
    }
    None
}

pub fn classify_tqh_p_group(l: &SubgroupLattice, p: u64) -> Result<TqhClass> {
    let g = l.group();
    if prime_power_log(p, g.order() as u64).is_none() {
        return Err(Error::NotPGroup(p));
    }
    if g.is_abelian() {
        return Ok(TqhClass::Abelian);
    }
    if let Some(c) = scalar_clause(l, p) {
        return Ok(c);
    }
    if p == 2 {
        if let Some(c) = quaternionic_clause(l) {
            return Ok(c);
        }
    }
    Ok(TqhClass::NotTqh)
}

/// A recognised Iwasawa (p,q)-factor `G = A x| H` with `A = G'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IwasawaRecognition {
    pub p: u64,
    pub q: u64,
    pub a: Subgroup,
    pub h: Subgroup,
    pub semidirect: bool,
    /// `Z(G) = {h^p : h in H}`.
    pub center_matches: bool,
}

impl IwasawaRecognition {
    pub fn verified(&self) -> bool {
        self.semidirect && self.center_matches
    }
}

/// Tests `G'` abelian of prime exponent `q` with every subgroup normal, then looks for
/// a cyclic `p`-subgroup `H` with `G'H = G`, `p | q-1`, acting on `G'` with image of order `p`.
pub fn recognize_iwasawa_pq(g: &FiniteGroup) -> Option<IwasawaRecognition> {
    let a = g.commutator_subgroup();
    if a.is_trivial() || !g.is_abelian_subgroup(&a) {
        return None;
    }
    let (q, k) = as_prime_power(exponent(g, &a))?;
    if k != 1 {
        return None;
    }
    let cyclic_normal = a.members().iter().all(|&x| {
        let c = g.subgroup_generated(&[x]);
        g.generators().iter().all(|&t| c.contains(g.conj(t, x)))
    });
    if !cyclic_normal {
        return None;
    }
    let c_a = g.centralizer(&a);
    let h = (0..g.order())
        .filter_map(|x| {
            let (p, _) = as_prime_power(g.element_order(x) as u64)?;
            let h = g.subgroup_generated(&[x]);
            let image = h.order() / h.set().intersection(c_a.set()).len();
            let scaling = a.order() * h.order() == g.order() * a.set().intersection(h.set()).len();
            (p != q && (q - 1) % p == 0 && image as u64 == p && scaling).then_some((p, h))
        })
        .min_by(|x, y| x.1.cmp(&y.1));
    let (p, h) = h?;
    let semidirect = a.set().intersection(h.set()).len() == 1 && a.order() * h.order() == g.order();
    let powers = ElemSet::from_iter(g.order(), h.members().iter().map(|&x| g.pow(x, p)));
    let center_matches = g.center().set() == &powers;
    Some(IwasawaRecognition { p, q, a, h, semidirect, center_matches })
}

/// The partition of the primes into blocks whose Sylow subgroups are direct factors.
#[derive(Clone, Debug, PartialEq)]
pub struct MainDecomposition {
    pub blocks: Vec<Vec<u64>>,
    pub checks: Vec<Check>,
}

impl MainDecomposition {
    pub fn holds(&self) -> bool {
        !self.checks.iter().any(Check::is_fail)
    }
}

/// Blocks are the classes of the relation "some p-element and some q-element do not commute".
fn prime_blocks(g: &FiniteGroup) -> Vec<Vec<u64>> {
    let primes = prime_divisors(g.order() as u64);
    let mut parent: Vec<usize> = (0..primes.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    let elems: Vec<Vec<Elem>> =
        primes.iter().map(|&p| (1..g.order()).filter(|&x| g.is_sigma_element(x, &[p])).collect()).collect();
    for i in 0..primes.len() {
        for j in i + 1..primes.len() {
            let tangled = elems[i].iter().any(|&x| elems[j].iter().any(|&y| !g.commute(x, y)));
            if tangled {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for (i, &p) in primes.iter().enumerate() {
        classes.entry(find(&mut parent, i)).or_default().push(p);
    }
    let mut blocks: Vec<Vec<u64>> = classes.into_values().collect();
    blocks.sort();
    blocks
}

pub fn modular_main_check(l: &SubgroupLattice) -> Result<MainDecomposition> {
    let g = l.group();
    if !l.is_modular().0 {
        return Err(Error::Precondition("the subgroup lattice is not modular".into()));
    }
    let blocks = prime_blocks(g);
    let mut checks = Vec::new();
    let mut factors = Vec::new();
    for block in &blocks {
        let tag = format!("block {block:?}");
        let (set, _) = g.sigma_elements(block);
        let Some(s) = g.subgroup_from_set(set) else {
            checks.push(Check::fail(format!("{tag} is a normal Sylow subgroup"), json!({"block": block})));
            continue;
        };
        let sylow = s.order() as u64 == sigma_part(g.order() as u64, block) && g.is_normal(&s);
        checks.push(Check::expect(format!("{tag} is a normal Sylow subgroup"), sylow, || json!(members(&s))));
        match block.len() {
            1 => {
                let modular = if s.order() == g.order() {
                    true
                } else {
                    let (sub, _) = g.subgroup_as_group(&s);
                    SubgroupLattice::enumerate_with_cap(&sub, usize::MAX)?.is_modular().0
                };
                checks.push(Check::expect(format!("{tag} is a modular p-group"), modular, || json!(members(&s))));
            }
            2 => {
                let (sub, _) = g.subgroup_as_group(&s);
                let found = recognize_iwasawa_pq(&sub);
                let ok = found.as_ref().is_some_and(|r| r.p == block[0] && r.q == block[1] && r.verified());
                checks.push(Check::expect(format!("{tag} is an Iwasawa factor"), ok, || {
                    json!({"recognised": found.as_ref().map(|r| (r.p, r.q, r.verified()))})
                }));
            }
            _ => checks.push(Check::fail(format!("{tag} has at most two primes"), json!({"block": block}))),
        }
        factors.push(s);
    }
    let refs: Vec<&Subgroup> = factors.iter().collect();
    checks.extend(internal_direct_product(g, &refs).into_iter().map(|mut c| {
        c.clause = format!("blocks: {}", c.clause);
        c
    }));
    Ok(MainDecomposition { blocks, checks })
}

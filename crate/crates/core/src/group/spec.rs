use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Elem, FiniteGroup};
use crate::arith::{gcd, is_prime, lcm, pow_mod, prime_power_log};
use crate::error::{Error, Result};

/// Largest group order any recipe may produce.
pub const CONSTRUCTION_CAP: usize = 4096;

/// Serializable recipe for a finite group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GroupSpec {
    Cyclic { n: u64 },
    /// `Z(n_1) x ... x Z(n_k)`.
    AbelianProduct { factors: Vec<u64> },
    DirectProduct { factors: Vec<GroupSpec> },
    /// `A x| Z(h)` where the generator of `Z(h)` multiplies `A` by the unit `r`.
    SemidirectScalar { base: Vec<u64>, h: u64, r: u64 },
    /// The group `M_n` of order `2^(n+1)`.
    QuaternionM { n: u32 },
    /// `GF(q)^rank x| Z(c)`, the generator of `Z(c)` acting as the order-`p` scalar `z`.
    Iwasawa {
        p: u64,
        q: u64,
        c: u64,
        z: u64,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        rank: u32,
    },
    CayleyTable {
        mul: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

fn one() -> u32 {
    1
}

fn is_one(x: &u32) -> bool {
    *x == 1
}

impl GroupSpec {
    pub fn dihedral(n: u64) -> Self {
        GroupSpec::SemidirectScalar { base: vec![n], h: 2, r: n - 1 }
    }

    pub fn iwasawa(p: u64, q: u64, c: u64, z: u64) -> Self {
        GroupSpec::Iwasawa { p, q, c, z, rank: 1 }
    }

    pub fn product(factors: Vec<GroupSpec>) -> Self {
        GroupSpec::DirectProduct { factors }
    }

    /// Order of the described group, computed without building it.
    pub fn order(&self) -> Option<u64> {
        match self {
            GroupSpec::Cyclic { n } => Some(*n),
            GroupSpec::AbelianProduct { factors } => factors.iter().try_fold(1u64, |a, &b| a.checked_mul(b)),
            GroupSpec::DirectProduct { factors } => factors.iter().try_fold(1u64, |a, f| a.checked_mul(f.order()?)),
            GroupSpec::SemidirectScalar { base, h, .. } => base.iter().try_fold(*h, |a, &b| a.checked_mul(b)),
            GroupSpec::QuaternionM { n } => 2u64.checked_pow(n + 1),
            GroupSpec::Iwasawa { q, c, rank, .. } => q.checked_pow(*rank)?.checked_mul(*c),
            GroupSpec::CayleyTable { mul, .. } => Some(mul.len() as u64),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serialisation cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Display for GroupSpec {
    /// Compact name used to key and sort reports.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match self {
            GroupSpec::Cyclic { n } => write!(f, "Z({n})"),
            GroupSpec::AbelianProduct { factors } => write!(f, "Ab[{}]", list(factors)),
            GroupSpec::DirectProduct { factors } => {
                let parts: Vec<String> = factors.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(" x "))
            }
            GroupSpec::SemidirectScalar { base, h, r } => write!(f, "Scalar[{}]x|Z({h}),r={r}", list(base)),
            GroupSpec::QuaternionM { n } => write!(f, "M({n})"),
            GroupSpec::Iwasawa { p, q, c, z, rank } if *rank == 1 => write!(f, "Iwasawa({p},{q},c={c},z={z})"),
            GroupSpec::Iwasawa { p, q, c, z, rank } => write!(f, "Iwasawa({p},{q},c={c},z={z},rank={rank})"),
            GroupSpec::CayleyTable { mul, .. } => write!(f, "Table({})", mul.len()),
        }
    }
}

pub fn construct(spec: &GroupSpec) -> Result<FiniteGroup> {
    construct_with_cap(spec, CONSTRUCTION_CAP)
}

pub fn construct_with_cap(spec: &GroupSpec, cap: usize) -> Result<FiniteGroup> {
    if let Some(order) = spec.order() {
        if order > cap as u64 {
            return Err(Error::OrderCap { order: order as usize, cap });
        }
    } else {
        return Err(Error::InvalidSpec(format!("order of {spec} overflows")));
    }
    match spec {
        GroupSpec::Cyclic { n } => abelian(&[*n], cap),
        GroupSpec::AbelianProduct { factors } => abelian(factors, cap),
        GroupSpec::DirectProduct { factors } => {
            let mut acc = abelian(&[], cap)?;
            for f in factors {
                acc = acc.direct_product(&construct_with_cap(f, cap)?, cap)?;
            }
            Ok(acc)
        }
        GroupSpec::SemidirectScalar { base, h, r } => semidirect_scalar(base, *h, *r, cap),
        GroupSpec::QuaternionM { n } => quaternion_m(*n, cap),
        GroupSpec::Iwasawa { p, q, c, z, rank } => {
            check_iwasawa(*p, *q, *c, *z, *rank)?;
            semidirect_scalar(&vec![*q; *rank as usize], *c, *z, cap)
        }
        GroupSpec::CayleyTable { mul, labels } => FiniteGroup::from_table(mul, labels.clone(), cap),
    }
}

fn check_iwasawa(p: u64, q: u64, c: u64, z: u64, rank: u32) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidSpec(m));
    if !is_prime(p) || !is_prime(q) {
        return bad(format!("Iwasawa primes {p}, {q} must be prime"));
    }
    if (q - 1) % p != 0 {
        return bad(format!("{p} does not divide {q} - 1"));
    }
    if z % q == 1 || pow_mod(z, p, q) != 1 {
        return bad(format!("{z} is not a unit of order {p} modulo {q}"));
    }
    if !matches!(prime_power_log(p, c), Some(k) if k >= 1) {
        return bad(format!("c = {c} is not a positive power of {p}"));
    }
    if rank == 0 {
        return bad("rank must be positive".into());
    }
    Ok(())
}

// Residue vectors flattened row-major, so the last coordinate varies fastest.
fn flatten(moduli: &[u64], coords: &[u64]) -> usize {
    moduli.iter().zip(coords).fold(0usize, |acc, (&m, &c)| acc * m as usize + c as usize)
}

fn unflatten(moduli: &[u64], mut id: usize) -> Vec<u64> {
    let mut out = vec![0; moduli.len()];
    for (slot, &m) in out.iter_mut().zip(moduli).rev() {
        *slot = (id % m as usize) as u64;
        id /= m as usize;
    }
    out
}

fn tuple_label(coords: &[u64]) -> String {
    let parts: Vec<String> = coords.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

fn abelian(moduli: &[u64], cap: usize) -> Result<FiniteGroup> {
    if moduli.contains(&0) {
        return Err(Error::InvalidSpec("cyclic factors must have positive order".into()));
    }
    let order = moduli.iter().product::<u64>() as usize;
    let vecs: Vec<Vec<u64>> = (0..order).map(|i| unflatten(moduli, i)).collect();
    let g = FiniteGroup::from_fn(order, cap, |a, b| {
        let sum: Vec<u64> = moduli.iter().enumerate().map(|(i, &m)| (vecs[a][i] + vecs[b][i]) % m).collect();
        flatten(moduli, &sum)
    })?;
    let labels = vecs.iter().map(|v| tuple_label(v)).collect();
    let marked = (0..moduli.len())
        .filter(|&i| moduli[i] > 1)
        .map(|i| {
            let mut e = vec![0; moduli.len()];
            e[i] = 1;
            (format!("e{i}"), flatten(moduli, &e))
        })
        .collect();
    Ok(g.with_labels(Some(labels)).with_marked(marked))
}

fn semidirect_scalar(base: &[u64], h: u64, r: u64, cap: usize) -> Result<FiniteGroup> {
    if h == 0 || base.contains(&0) {
        return Err(Error::InvalidSpec("orders must be positive".into()));
    }
    let exp = base.iter().fold(1, |a, &b| lcm(a, b));
    if gcd(r % exp.max(1), exp) != 1 && exp > 1 {
        return Err(Error::InvalidSpec(format!("r = {r} is not a unit modulo {exp}")));
    }
    if pow_mod(r, h, exp) != 1 % exp {
        return Err(Error::InvalidSpec(format!("r^h = {r}^{h} is not 1 modulo {exp}")));
    }
    let a_order = base.iter().product::<u64>() as usize;
    let order = a_order * h as usize;
    let vecs: Vec<Vec<u64>> = (0..a_order).map(|i| unflatten(base, i)).collect();
    let scal: Vec<u64> = (0..h).map(|j| pow_mod(r, j, exp.max(1))).collect();
    let h_us = h as usize;
    // (a, j)(a', j') = (a + r^j a', j + j')
    let g = FiniteGroup::from_fn(order, cap, |x, y| {
        let (a, j) = (x / h_us, x % h_us);
        let (b, k) = (y / h_us, y % h_us);
        let sum: Vec<u64> = base
            .iter()
            .enumerate()
            .map(|(i, &m)| (vecs[a][i] + scal[j] % m * vecs[b][i]) % m)
            .collect();
        flatten(base, &sum) * h_us + (j + k) % h_us
    })?;
    let labels = (0..order)
        .map(|x| {
            let parts: Vec<String> = vecs[x / h_us].iter().map(u64::to_string).collect();
            format!("({};{})", parts.join(","), x % h_us)
        })
        .collect();
    let mut marked = Vec::new();
    if base.len() == 1 && base[0] > 1 {
        marked.push(("a".to_string(), h_us));
    }
    if h > 1 {
        marked.push(("b".to_string(), 1));
    }
    Ok(g.with_labels(Some(labels)).with_marked(marked))
}

/// `M_n` as `(Z(4) x| Z(2^n)) / <(2, 2^(n-1))>`, where `Z(2^n)` acts by `-1`.
fn quaternion_m(n: u32, cap: usize) -> Result<FiniteGroup> {
    if n < 2 {
        return Err(Error::InvalidSpec(format!("M_n needs n >= 2, got {n}")));
    }
    let h = 1u64 << n;
    let cover = semidirect_scalar(&[4], h, 3, cap.max(2 * h as usize * 4))?;
    let delta_gen: Elem = 2 * h as usize + (h / 2) as usize;
    let delta = cover.subgroup_generated(&[delta_gen]);
    let q = cover.quotient(&delta)?;
    let a = q.projection[h as usize];
    let b = q.projection[1];
    let group = q.group.with_marked(vec![("a".to_string(), a), ("b".to_string(), b)]);
    if group.order() > cap {
        return Err(Error::OrderCap { order: group.order(), cap });
    }
    Ok(group)
}

/// Checks the defining relations of `M_n` on the designated `a`, `b`, and that
/// they generate the whole group.
pub fn quaternion_relations_hold(g: &FiniteGroup, n: u32) -> bool {
    let (Some(a), Some(b)) = (g.marked("a"), g.marked("b")) else {
        return false;
    };
    quaternion_relations_at(g, a, b, n) && g.order() == 1 << (n + 1)
}

/// `b^(2^n) = 1`, `b^(2^(n-1)) = a^2`, `b a b^-1 = a^-1`, plus `a^4 = 1` and
/// `[a, b] = a^2`, with `<a, b>` of order `2^(n+1)`.
pub fn quaternion_relations_at(g: &FiniteGroup, a: Elem, b: Elem, n: u32) -> bool {
    let half = 1u64 << (n - 1);
    let a2 = g.mul(a, a);
    g.pow(b, 1 << n) == 0
        && g.pow(b, half) == a2
        && g.conj(b, a) == g.inv(a)
        && g.pow(a, 4) == 0
        && g.commutator(a, b) == a2
        && g.subgroup_generated(&[a, b]).order() == 1 << (n + 1)
}

//! Small integer helpers shared by the graph, descriptor and group modules.

use num_integer::Integer;

/// Sieve of Eratosthenes; returns all primes `<= bound` in increasing order.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Deterministic trial division, adequate for the desk-scale inputs used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorisation as `(prime, multiplicity)` pairs, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(p: u64, mut n: u64) -> u32 {
    debug_assert!(n != 0 && p > 1);
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

/// Returns `Some(k)` when `n = p^k`.
pub fn prime_power_log(p: u64, n: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let k = valuation(p, n);
    (p.pow(k) == n).then_some(k)
}

/// If `n` is a prime power `p^k` with `k >= 1`, returns `(p, k)`.
pub fn as_prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Multiplicative order of a unit modulo `modulus`.
pub fn unit_order(x: u64, modulus: u64, group_order: u64, group_factors: &[(u64, u32)]) -> u64 {
    let mut order = group_order;
    for &(p, _) in group_factors {
        while order % p == 0 && pow_mod(x, order / p, modulus) == 1 {
            order /= p;
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_matches_trial_division() {
        let sieved = primes_up_to(500);
        let trial: Vec<u64> = (0..=500).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieved, trial);
        assert!(primes_up_to(1).is_empty());
    }

    #[test]
    fn factorisation_round_trips() {
        for n in 1..2000u64 {
            let back: u64 = factorize(n).iter().map(|&(p, k)| p.pow(k)).product();
            assert_eq!(back, n);
        }
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(as_prime_power(27), Some((3, 3)));
        assert_eq!(as_prime_power(12), None);
        assert_eq!(as_prime_power(1), None);
        assert_eq!(prime_power_log(2, 1), Some(0));
        assert_eq!(prime_power_log(2, 6), None);
    }

    #[test]
    fn unit_orders_mod_small_primes() {
        let f = factorize(12);
        assert_eq!(unit_order(2, 13, 12, &f), 12);
        assert_eq!(unit_order(3, 13, 12, &f), 3);
        assert_eq!(unit_order(12, 13, 12, &f), 2);
    }
}

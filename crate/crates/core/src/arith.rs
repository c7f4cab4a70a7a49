//! Elementary integer arithmetic: gcd, CRT, factorisation, Euler phi,
//! multiplicative orders and the structure of (Z/m)^x.
//!
//! Everything here works on `u64` moduli; the sizes that occur in this crate
//! (group orders, conductors, indices) are all far below that, so trial
//! division is used throughout.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Largest power of 2 dividing `n` (the 2-adic valuation); `n` must be nonzero.
pub fn nu2(n: u64) -> u32 {
    assert!(n != 0, "nu2(0) is undefined");
    n.trailing_zeros()
}

pub fn mod_pow(base: u64, exp: u64, modulus: u64) -> u64 {
    assert!(modulus != 0);
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u128;
    let m = modulus as u128;
    let mut b = (base as u128) % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    result as u64
}

/// Inverse of `a` mod `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorisation by trial division: prime -> exponent.
pub fn factor(n: u64) -> BTreeMap<u64, u32> {
    assert!(n != 0, "factor(0) is undefined");
    let mut out = BTreeMap::new();
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n != 0);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

pub fn euler_phi(n: u64) -> u64 {
    assert!(n != 0);
    let mut result = n;
    for (&p, _) in factor(n).iter() {
        result = result / p * (p - 1);
    }
    result
}

/// Units of Z/m, ascending. For m = 1 this is just {0} (the zero ring's unit).
pub fn units(m: u64) -> Vec<u64> {
    if m == 1 {
        return vec![0];
    }
    (1..m).filter(|&a| gcd(a, m) == 1).collect()
}

pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    assert!(gcd(a % m, m) == 1, "order of a non-unit");
    if m == 1 {
        return 1;
    }
    let mut x = a % m;
    let mut k = 1u64;
    while x != 1 {
        x = (x as u128 * a as u128 % m as u128) as u64;
        k += 1;
    }
    k
}

/// Chinese remainder: given pairwise coprime moduli, the unique residue mod
/// their product. Errors if the moduli are not pairwise coprime.
pub fn crt(pairs: &[(u64, u64)]) -> Result<u64> {
    let mut modulus = 1u64;
    let mut residue = 0u64;
    for &(r, m) in pairs {
        if m == 0 {
            return Err(Error::validation("crt: zero modulus"));
        }
        if gcd(modulus, m) != 1 {
            return Err(Error::validation(format!(
                "crt: moduli {modulus} and {m} are not coprime"
            )));
        }
        // Solve x = residue (mod modulus), x = r (mod m).
        let inv = mod_inverse(modulus % m, m)
            .ok_or_else(|| Error::internal("crt: inverse must exist for coprime moduli"))?;
        let diff = (r % m + m - residue % m) % m;
        let k = (diff as u128 * inv as u128 % m as u128) as u64;
        residue += modulus * k;
        modulus *= m;
    }
    Ok(residue % modulus.max(1))
}

/// Internal direct-product decomposition of (Z/m)^x: a list of (generator,
/// order) pairs, one per cyclic factor. Built from the prime-power pieces of
/// m, with each local generator lifted through the CRT.
pub fn unit_group_structure(m: u64) -> Vec<(u64, u64)> {
    assert!(m >= 1);
    if m <= 2 {
        return Vec::new();
    }
    let mut gens: Vec<(u64, u64)> = Vec::new();
    let fac = factor(m);
    for (&p, &a) in fac.iter() {
        let q = p.pow(a);
        let rest = m / q;
        let lift = |g: u64| -> u64 {
            if rest == 1 {
                g % m
            } else {
                crt(&[(g % q, q), (1 % rest, rest)]).expect("prime powers are coprime")
            }
        };
        if p == 2 {
            match a {
                1 => {}
                2 => gens.push((lift(3), 2)),
                _ => {
                    gens.push((lift(q - 1), 2));
                    gens.push((lift(5), q / 4));
                }
            }
        } else {
            let phi = q / p * (p - 1);
            let g = (2..q)
                .find(|&g| gcd(g, q) == 1 && multiplicative_order(g, q) == phi)
                .expect("odd prime powers have primitive roots");
            gens.push((lift(g), phi));
        }
    }
    gens
}

/// Is `n` a power of two (including 1)?
pub fn is_power_of_two(n: u64) -> bool {
    n != 0 && n & (n - 1) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_lcm_basics() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(7, 0), 7);
        assert_eq!(lcm(4, 6), 12);
    }

    #[test]
    fn phi_agrees_with_unit_count() {
        for m in 2..200 {
            assert_eq!(euler_phi(m), units(m).len() as u64, "phi({m})");
        }
    }

    #[test]
    fn crt_reconstructs() {
        let r = crt(&[(2, 3), (1, 5)]).unwrap();
        assert_eq!(r % 3, 2);
        assert_eq!(r % 5, 1);
        assert!(crt(&[(1, 4), (1, 6)]).is_err());
    }

    #[test]
    fn unit_group_structure_orders_multiply_to_phi() {
        for m in 3..240 {
            let gens = unit_group_structure(m);
            let prod: u64 = gens.iter().map(|&(_, o)| o).product();
            assert_eq!(prod, euler_phi(m), "structure of (Z/{m})^x");
            for &(g, o) in &gens {
                assert_eq!(multiplicative_order(g, m), o);
            }
        }
    }

    #[test]
    fn orders_divide_phi() {
        for m in [7u64, 9, 15, 16, 23] {
            for a in units(m) {
                assert_eq!(euler_phi(m) % multiplicative_order(a, m), 0);
            }
        }
    }
}

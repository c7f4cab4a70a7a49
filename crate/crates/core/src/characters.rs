//! Dirichlet characters with exact root-of-unity values, and the generalized
//! Bernoulli numbers B_{2,chi} that feed L(-1, chi).
//!
//! A character mod f is stored as its table of exponents on (Z/f)^x: chi(a)
//! = zeta_n^{exp(a)} where n is the order of chi. Tables are built from the
//! cyclic decomposition of (Z/f)^x (see [`crate::arith::unit_group_structure`])
//! by brute-force discrete logs — moduli here never exceed a few hundred.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::arith::{self, gcd, lcm};
use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::rational::{rat, Rat};

#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter {
    modulus: u64,
    /// Order of the character (lcm of the orders of its values).
    order: u64,
    /// a -> k with chi(a) = zeta_order^k, for every unit a mod modulus.
    exps: BTreeMap<u64, u64>,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// chi(-1) = 1?
    pub fn is_even(&self) -> bool {
        if self.modulus <= 2 {
            return true;
        }
        self.exps[&(self.modulus - 1)] == 0
    }

    /// chi(a) as an element of Q(zeta_e); e must be divisible by the order.
    pub fn value_in(&self, a: u64, e: u64) -> Result<CyclotomicNumber> {
        if e % self.order != 0 {
            return Err(Error::validation(format!(
                "character of order {} has no values in Q(zeta_{e})",
                self.order
            )));
        }
        let a = a % self.modulus.max(1);
        match self.exps.get(&a) {
            Some(&k) => Ok(CyclotomicNumber::root_of_unity(e, k * (e / self.order))),
            None => Ok(CyclotomicNumber::zero(e)),
        }
    }

    /// All characters mod m, in a deterministic order.
    pub fn group_mod(m: u64) -> Vec<DirichletCharacter> {
        assert!(m >= 1);
        let gens = arith::unit_group_structure(m);
        let phi = arith::euler_phi(m);
        // Element -> exponent tuple over the cyclic decomposition.
        let mut dlog: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        let mut frontier = vec![(1u64 % m.max(1), vec![0u64; gens.len()])];
        dlog.insert(1 % m.max(1), vec![0; gens.len()]);
        for (i, &(g, ord)) in gens.iter().enumerate() {
            let mut next = Vec::new();
            for (elem, tuple) in frontier.iter() {
                let mut x = *elem;
                for e in 0..ord {
                    if e > 0 {
                        x = (x as u128 * g as u128 % m as u128) as u64;
                        let mut t = tuple.clone();
                        t[i] = e;
                        dlog.insert(x, t.clone());
                        next.push((x, t));
                    }
                }
            }
            frontier.extend(next);
        }
        debug_assert_eq!(dlog.len() as u64, phi);

        // One character per exponent tuple on the generators.
        let mut chars = Vec::new();
        let mut choice = vec![0u64; gens.len()];
        loop {
            let order = gens
                .iter()
                .zip(choice.iter())
                .map(|(&(_, ord), &c)| ord / gcd(ord, c))
                .fold(1, lcm);
            let mut exps = BTreeMap::new();
            for (&a, tuple) in dlog.iter() {
                // chi(a) = prod zeta_{ord_i}^{c_i t_i}. On factor i the values
                // have order o_i = ord_i/gcd(ord_i, c_i), so rewrite the i-th
                // contribution as a power of zeta_{o_i} before rescaling into
                // zeta_order.
                let mut k = 0u64;
                for ((&(_, ord_i), &c_i), &t_i) in
                    gens.iter().zip(choice.iter()).zip(tuple.iter())
                {
                    let g = gcd(ord_i, c_i);
                    let o_i = ord_i / g; // order of chi on this factor
                    let c_red = c_i / g;
                    let e = (c_red as u128 * t_i as u128) % o_i as u128;
                    k = ((k as u128 + (order / o_i) as u128 * e) % order as u128) as u64;
                }
                exps.insert(a, k);
            }
            chars.push(DirichletCharacter {
                modulus: m,
                order,
                exps,
            });
            // Odometer over the exponent choices.
            let mut i = 0;
            loop {
                if i == gens.len() {
                    chars.sort_by_key(|c| (c.order, c.exps.clone()));
                    return chars;
                }
                choice[i] += 1;
                if choice[i] < gens[i].1 {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    /// Smallest f' | modulus such that the character factors through
    /// (Z/f')^x.
    pub fn conductor(&self) -> u64 {
        'outer: for f in arith::divisors(self.modulus) {
            // chi factors through f iff chi(a) = 1 whenever a = 1 mod f.
            for (&a, &k) in self.exps.iter() {
                if a % f == 1 % f.max(1) && k != 0 {
                    continue 'outer;
                }
            }
            return f;
        }
        self.modulus
    }

    /// The primitive character of conductor `conductor()` inducing this one.
    pub fn primitive(&self) -> DirichletCharacter {
        let f = self.conductor();
        if f == self.modulus {
            return self.clone();
        }
        let mut exps = BTreeMap::new();
        for a in arith::units(f) {
            // Lift a to a unit mod modulus congruent to a mod f.
            let mut lift = a;
            while gcd(lift, self.modulus) != 1 {
                lift += f;
            }
            exps.insert(a, self.exps[&(lift % self.modulus)]);
        }
        let order = self.order;
        DirichletCharacter {
            modulus: f,
            order,
            exps,
        }
    }
}

/// The even characters mod m, one per element of the dual of
/// Gal(Q(zeta_m)^+ / Q), each reduced to its primitive conductor.
pub fn characters_of_real_subfield(m: u64) -> Result<Vec<DirichletCharacter>> {
    if m < 3 {
        return Err(Error::validation(format!(
            "real cyclotomic subfield needs m >= 3, got {m}"
        )));
    }
    Ok(DirichletCharacter::group_mod(m)
        .into_iter()
        .filter(|c| c.is_even())
        .map(|c| c.primitive())
        .collect())
}

/// Generalized Bernoulli number B_{2,chi} = f * sum_{a=1}^{f} chi(a) B_2(a/f)
/// with B_2(x) = x^2 - x + 1/6, for a primitive even character.
///
/// For the trivial character this is B_2 = 1/6.
pub fn bernoulli_b2(chi: &DirichletCharacter) -> Result<CyclotomicNumber> {
    if !chi.is_even() {
        return Err(Error::validation(
            "B_{2,chi} requested for an odd character; only even characters arise here",
        ));
    }
    if chi.conductor() != chi.modulus() {
        return Err(Error::validation("B_{2,chi} needs a primitive character"));
    }
    let f = chi.modulus().max(1);
    let e = chi.order();
    let mut total = CyclotomicNumber::zero(e);
    for a in 1..=f {
        let b2 = rat(a as i64 * a as i64, (f * f) as i64) - rat(a as i64, f as i64)
            + rat(1, 6);
        let v = chi.value_in(a, e)?;
        if v.is_zero() || b2.is_zero() {
            continue;
        }
        total = total.add(&v.scale(&b2))?;
    }
    Ok(total.scale(&Rat::from_integer(f.into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    #[test]
    fn character_counts() {
        for m in 3..60u64 {
            let group = DirichletCharacter::group_mod(m);
            assert_eq!(group.len() as u64, arith::euler_phi(m), "mod {m}");
            let even = group.iter().filter(|c| c.is_even()).count() as u64;
            assert_eq!(even, arith::euler_phi(m) / 2, "even characters mod {m}");
        }
    }

    #[test]
    fn real_subfield_character_examples() {
        // phi(8)/2 = 2 characters: trivial and the even conductor-8 one.
        let m8 = characters_of_real_subfield(8).unwrap();
        assert_eq!(m8.len(), 2);
        let nontrivial: Vec<_> = m8.iter().filter(|c| !c.is_trivial()).collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(nontrivial[0].conductor(), 8);
        assert_eq!(nontrivial[0].order(), 2);

        let m5 = characters_of_real_subfield(5).unwrap();
        assert_eq!(m5.len(), 2);
        assert_eq!(m5.iter().filter(|c| c.order() == 2).count(), 1);

        let m3 = characters_of_real_subfield(3).unwrap();
        assert_eq!(m3.len(), 1);
        assert!(m3[0].is_trivial());

        assert!(characters_of_real_subfield(2).is_err());
    }

    #[test]
    fn characters_are_multiplicative() {
        for m in [8u64, 15, 16, 21] {
            for chi in DirichletCharacter::group_mod(m) {
                let e = chi.order();
                for &a in arith::units(m).iter().take(6) {
                    for &b in arith::units(m).iter().take(6) {
                        let ab = (a * b) % m;
                        let lhs = chi.value_in(ab, e).unwrap();
                        let rhs = chi
                            .value_in(a, e)
                            .unwrap()
                            .mul(&chi.value_in(b, e).unwrap())
                            .unwrap();
                        assert_eq!(lhs, rhs, "chi mod {m} at ({a},{b})");
                    }
                }
            }
        }
    }

    #[test]
    fn bernoulli_of_trivial_character_is_one_sixth() {
        let trivial = DirichletCharacter::group_mod(1).pop().unwrap();
        let b = bernoulli_b2(&trivial).unwrap();
        assert_eq!(b.as_rational(), Some(rat(1, 6)));
    }

    #[test]
    fn bernoulli_of_conductor8_character() {
        // The quadratic character attached to Q(sqrt 2): direct evaluation of
        // the 4-term defining sum gives 2.
        let chi = characters_of_real_subfield(8)
            .unwrap()
            .into_iter()
            .find(|c| !c.is_trivial())
            .unwrap();
        let b = bernoulli_b2(&chi).unwrap();
        assert_eq!(b.as_rational(), Some(rat_int(2)));
    }

    #[test]
    fn bernoulli_rejects_odd_characters() {
        let odd = DirichletCharacter::group_mod(5)
            .into_iter()
            .find(|c| !c.is_even())
            .unwrap()
            .primitive();
        assert!(bernoulli_b2(&odd).is_err());
    }
}

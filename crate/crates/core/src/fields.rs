//! The real cyclotomic fields K = Q(zeta_m + zeta_m^{-1}): discriminants via
//! the conductor-discriminant relation, and exact zeta_K(-1) as a product of
//! L(-1, chi) = -B_{2,chi}/2 over the even characters of the field.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Signed};

use crate::arith::{self, euler_phi};
use crate::characters::{bernoulli_b2, characters_of_real_subfield};
use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::rational::{rat, Rat};

/// K = Q(zeta_m + zeta_m^{-1}), the maximal totally real subfield of
/// Q(zeta_m); degree phi(m)/2 for m >= 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealCyclotomicField {
    m: u64,
}

impl RealCyclotomicField {
    pub fn new(m: u64) -> Result<Self> {
        if m < 3 {
            return Err(Error::validation(format!(
                "Q(zeta_m)^+ requires m >= 3, got {m}"
            )));
        }
        Ok(RealCyclotomicField { m })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn degree(&self) -> u64 {
        euler_phi(self.m) / 2
    }
}

/// |disc Q(zeta_m)| in factored form: for p^a || m the exponent of p is
/// a*phi(m) - phi(m)/(p-1).
fn cyclotomic_disc_factored(m: u64) -> BTreeMap<u64, u64> {
    let phi = euler_phi(m);
    let mut out = BTreeMap::new();
    for (&p, &a) in arith::factor(m).iter() {
        let e = (a as u64) * phi - phi / (p - 1);
        if e > 0 {
            out.insert(p, e);
        }
    }
    out
}

/// |N(zeta_m - zeta_m^{-1})| down in Q: the norm of the relative different
/// of Q(zeta_m) over its real subfield. Equal to Phi_m(1) for odd m,
/// Phi_{m/2}(1) for m = 2 mod 4 and Phi_{m/2}(1)^2 for 4 | m, where
/// Phi_n(1) is p for n a prime power p^k and 1 otherwise (n >= 2).
fn relative_norm_factor(m: u64) -> BTreeMap<u64, u64> {
    fn phi_at_one(n: u64) -> Option<u64> {
        // Phi_n(1) for n >= 2: p if n = p^k, else 1.
        let f = arith::factor(n);
        if f.len() == 1 {
            Some(*f.keys().next().unwrap())
        } else {
            None
        }
    }
    let mut out = BTreeMap::new();
    if m % 2 == 1 {
        if let Some(p) = phi_at_one(m) {
            out.insert(p, 1);
        }
    } else if m % 4 == 2 {
        if let Some(p) = phi_at_one(m / 2) {
            out.insert(p, 1);
        }
    } else if let Some(p) = phi_at_one(m / 2) {
        out.insert(p, 2);
    }
    out
}

/// |disc K| for K = Q(zeta_m)^+, in factored form, via
/// disc Q(zeta_m) = N(d(Q(zeta_m)/K)) * (disc K)^2.
pub fn disc_real_cyclotomic_factored(m: u64) -> Result<BTreeMap<u64, u64>> {
    RealCyclotomicField::new(m)?;
    let mut disc = cyclotomic_disc_factored(m);
    for (&p, &e) in relative_norm_factor(m).iter() {
        let cur = disc.get(&p).copied().unwrap_or(0);
        if cur < e {
            return Err(Error::internal(format!(
                "relative norm factor does not divide the cyclotomic discriminant at p={p} (m={m})"
            )));
        }
        if cur == e {
            disc.remove(&p);
        } else {
            disc.insert(p, cur - e);
        }
    }
    for (&p, &e) in disc.iter() {
        if e % 2 != 0 {
            return Err(Error::internal(format!(
                "real subfield discriminant is not a perfect square at p={p} (m={m})"
            )));
        }
    }
    Ok(disc.into_iter().map(|(p, e)| (p, e / 2)).collect())
}

/// |disc K| as an integer.
pub fn disc_real_cyclotomic(m: u64) -> Result<BigUint> {
    let factored = disc_real_cyclotomic_factored(m)?;
    let mut out = BigUint::one();
    for (p, e) in factored {
        out *= BigUint::from(p).pow(e as u32);
    }
    Ok(out)
}

/// Exact zeta_K(-1) for K = Q(zeta_m)^+: the product over the even
/// characters chi of the field of L(-1, chi) = -B_{2,chi}/2.
///
/// The product runs over full Galois orbits, so it must come out rational;
/// a non-rational residue after reduction is an internal error.
pub fn zeta_minus_one(field: RealCyclotomicField) -> Result<Rat> {
    let m = field.m();
    let chars = characters_of_real_subfield(m)?;
    let half = rat(-1, 2);
    let mut product = CyclotomicNumber::one(1);
    for chi in &chars {
        let b = bernoulli_b2(chi)?;
        product = product.mul(&b.scale(&half))?;
    }
    let value = product.as_rational().ok_or_else(|| {
        Error::internal(format!(
            "zeta_K(-1) did not reduce to a rational for m={m}"
        ))
    })?;
    // ei_K = (-1)^d zeta_K(-1) / 2^{d-1} is positive for totally real K.
    let d = field.degree();
    let signed = if d % 2 == 1 { -value.clone() } else { value.clone() };
    if !signed.is_positive() {
        return Err(Error::internal(format!(
            "zeta_K(-1) has the wrong sign for m={m}: {value}"
        )));
    }
    Ok(value)
}

/// Discriminant agreement sweep against the polynomial oracle: for each
/// 3 <= m <= max_m, |disc K| must divide disc(min poly of
/// zeta_m + zeta_m^{-1}) with perfect-square quotient. Returns the list of
/// (m, field disc, polynomial disc) triples.
pub fn disc_agreement_sweep(
    max_m: u64,
    parallel: bool,
) -> Result<Vec<(u64, BigUint, BigUint)>> {
    let ms: Vec<u64> = (3..=max_m).collect();
    let results = crate::exec::map_vec(ms, parallel, |m| -> Result<(u64, BigUint, BigUint)> {
        let field_disc = disc_real_cyclotomic(m)?;
        let psi = crate::poly::real_subfield_min_poly(m).to_qpoly();
        let poly_disc = crate::poly::discriminant(&psi);
        if !poly_disc.is_integer() || !poly_disc.is_positive() {
            return Err(Error::internal(format!(
                "polynomial discriminant for m={m} is not a positive integer"
            )));
        }
        let poly_disc = poly_disc.to_integer().to_biguint().unwrap();
        let (q, r) = num_integer::Integer::div_rem(&poly_disc, &field_disc);
        if !num_traits::Zero::is_zero(&r) {
            return Err(Error::internal(format!(
                "field discriminant does not divide the polynomial discriminant for m={m}"
            )));
        }
        if crate::rational::exact_sqrt(&q).is_none() {
            return Err(Error::internal(format!(
                "index^2 quotient is not a perfect square for m={m}"
            )));
        }
        Ok((m, field_disc, poly_disc))
    });
    results.into_iter().collect()
}

pub fn disc_agreement_sweep_seq(max_m: u64) -> Result<Vec<(u64, BigUint, BigUint)>> {
    disc_agreement_sweep(max_m, false)
}

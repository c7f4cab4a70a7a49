//! Exact arithmetic in the cyclotomic fields Q(zeta_e).
//!
//! An element is a rational coefficient vector of length phi(e) representing
//! its canonical residue mod Phi_e. Mixed-conductor operations lift both
//! operands to the lcm of their conductors via zeta_a -> zeta_L^{L/a}; no
//! attempt is made to descend to the minimal conductor afterwards except for
//! the final rationality check callers ask for.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{cyclotomic, QPoly};
use crate::rational::Rat;

#[derive(Debug, Clone, PartialEq)]
pub struct CyclotomicNumber {
    conductor: u64,
    /// Canonical residue mod Phi_e, length phi(e) (trailing zeros kept).
    coeffs: Vec<Rat>,
}

impl CyclotomicNumber {
    fn modulus(e: u64) -> QPoly {
        cyclotomic(e).to_qpoly()
    }

    fn reduce(e: u64, poly: QPoly) -> Self {
        let phi = crate::arith::euler_phi(e) as usize;
        let rem = poly.rem(&Self::modulus(e));
        let mut coeffs = rem.0;
        coeffs.resize(phi, Rat::zero());
        CyclotomicNumber { conductor: e, coeffs }
    }

    pub fn from_rat(e: u64, q: Rat) -> Self {
        assert!(e >= 1);
        Self::reduce(e, QPoly::from_coeffs(vec![q]))
    }

    pub fn zero(e: u64) -> Self {
        Self::from_rat(e, Rat::zero())
    }

    pub fn one(e: u64) -> Self {
        Self::from_rat(e, Rat::one())
    }

    /// zeta_e^k as an element of Q(zeta_e).
    pub fn root_of_unity(e: u64, k: u64) -> Self {
        assert!(e >= 1);
        let k = (k % e) as usize;
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = Rat::one();
        Self::reduce(e, QPoly::from_coeffs(v))
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Re-express in Q(zeta_target); target must be a multiple of the
    /// current conductor.
    pub fn lift_to(&self, target: u64) -> Result<CyclotomicNumber> {
        if target % self.conductor != 0 {
            return Err(Error::validation(format!(
                "cannot lift conductor {} into {}",
                self.conductor, target
            )));
        }
        if target == self.conductor {
            return Ok(self.clone());
        }
        let stride = (target / self.conductor) as usize;
        let mut v = vec![Rat::zero(); self.coeffs.len() * stride];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[i * stride] = c.clone();
            }
        }
        Ok(Self::reduce(target, QPoly::from_coeffs(v)))
    }

    fn common(a: &Self, b: &Self) -> Result<(CyclotomicNumber, CyclotomicNumber, u64)> {
        let l = crate::arith::lcm(a.conductor, b.conductor);
        Ok((a.lift_to(l)?, b.lift_to(l)?, l))
    }

    pub fn add(&self, other: &Self) -> Result<CyclotomicNumber> {
        let (a, b, l) = Self::common(self, other)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| x + y)
            .collect();
        Ok(CyclotomicNumber { conductor: l, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<CyclotomicNumber> {
        let (a, b, l) = Self::common(self, other)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| x - y)
            .collect();
        Ok(CyclotomicNumber { conductor: l, coeffs })
    }

    pub fn mul(&self, other: &Self) -> Result<CyclotomicNumber> {
        let (a, b, l) = Self::common(self, other)?;
        let prod = QPoly::from_coeffs(a.coeffs).mul(&QPoly::from_coeffs(b.coeffs));
        Ok(Self::reduce(l, prod))
    }

    pub fn scale(&self, q: &Rat) -> CyclotomicNumber {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse, via the extended Euclidean algorithm against
    /// Phi_e (which is coprime to any nonzero residue since Phi_e is
    /// irreducible over Q).
    pub fn inverse(&self) -> Result<CyclotomicNumber> {
        if self.is_zero() {
            return Err(Error::validation("inverse of zero cyclotomic number"));
        }
        let f = QPoly::from_coeffs(self.coeffs.clone());
        let m = Self::modulus(self.conductor);
        let (g, s, _) = f.extended_gcd(&m);
        if g != QPoly::one() {
            return Err(Error::internal(
                "cyclotomic modulus not coprime to nonzero element",
            ));
        }
        Ok(Self::reduce(self.conductor, s))
    }

    pub fn pow(&self, k: u64) -> Result<CyclotomicNumber> {
        let mut acc = Self::one(self.conductor);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// The rational value, if this element lies in Q.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_else(Rat::zero))
        } else {
            None
        }
    }
}

//! Dense univariate polynomials over Z and Q.
//!
//! Degrees in this crate stay in the low hundreds, so everything is plain
//! schoolbook arithmetic on coefficient vectors. The two entry points of
//! interest are [`cyclotomic`] (the n-th cyclotomic polynomial, by recursive
//! exact division of x^n - 1) and [`real_subfield_min_poly`] (the minimal
//! polynomial of zeta_m + zeta_m^{-1}, extracted from the palindromic shape
//! of Phi_m), plus an exact resultant/discriminant used as the independent
//! oracle for field discriminants.

use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Rat;

/// Polynomial over Z, dense coefficients, lowest degree first, no trailing
/// zeros (the zero polynomial is the empty vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IPoly(pub Vec<BigInt>);

impl IPoly {
    pub fn zero() -> Self {
        IPoly(Vec::new())
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        let mut v: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        while v.last().map_or(false, |c| c.is_zero()) {
            v.pop();
        }
        IPoly(v)
    }

    pub fn x_pow_minus_one(n: u64) -> Self {
        let mut v = vec![BigInt::zero(); n as usize + 1];
        v[0] = BigInt::from(-1);
        v[n as usize] = BigInt::one();
        IPoly(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of zero polynomial");
        self.0.len() - 1
    }

    pub fn mul(&self, other: &IPoly) -> IPoly {
        if self.is_zero() || other.is_zero() {
            return IPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IPoly(out)
    }

    /// Exact division; panics if the division leaves a remainder (callers
    /// only divide known multiples).
    pub fn div_exact(&self, divisor: &IPoly) -> IPoly {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return IPoly::zero();
        }
        let mut rem = self.0.clone();
        let d = divisor.degree();
        let lead = divisor.0[d].clone();
        assert!(self.degree() >= d, "exact division with deg(a) < deg(b)");
        let mut quot = vec![BigInt::zero(); self.degree() - d + 1];
        for i in (0..quot.len()).rev() {
            let top = rem[i + d].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = num_integer::Integer::div_rem(&top, &lead);
            assert!(r.is_zero(), "non-exact polynomial division");
            quot[i] = q.clone();
            for (k, c) in divisor.0.iter().enumerate() {
                rem[i + k] -= &q * c;
            }
        }
        assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
        IPoly(quot)
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.0.iter().sum()
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| Rat::from_integer(c.clone())).collect())
    }

    /// Coefficients are a palindrome (a_k = a_{d-k}); true for Phi_m, m >= 3.
    pub fn is_palindromic(&self) -> bool {
        let v = &self.0;
        (0..v.len()).all(|i| v[i] == v[v.len() - 1 - i])
    }
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, IPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, IPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The n-th cyclotomic polynomial Phi_n, monic of degree phi(n), computed by
/// dividing x^n - 1 by Phi_d for every proper divisor d of n. Results are
/// memoised process-wide.
pub fn cyclotomic(n: u64) -> IPoly {
    assert!(n >= 1);
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut poly = IPoly::x_pow_minus_one(n);
    for d in crate::arith::divisors(n) {
        if d < n {
            poly = poly.div_exact(&cyclotomic(d));
        }
    }
    cyclotomic_cache()
        .lock()
        .unwrap()
        .insert(n, poly.clone());
    poly
}

/// Minimal polynomial of zeta_m + zeta_m^{-1} over Q, monic of degree
/// phi(m)/2, for m >= 3.
///
/// Phi_m is palindromic of even degree 2d, so Phi_m(x)/x^d is a Z-linear
/// combination of the x^k + x^{-k}, and x^k + x^{-k} = p_k(x + x^{-1}) for
/// the monic integer polynomials p_0 = 2, p_1 = y, p_{k+1} = y p_k - p_{k-1}.
pub fn real_subfield_min_poly(m: u64) -> IPoly {
    assert!(m >= 3, "real subfield needs m >= 3");
    let phi = cyclotomic(m);
    let deg = phi.degree();
    assert!(deg % 2 == 0 && phi.is_palindromic());
    let d = deg / 2;

    let y = IPoly::from_i64(&[0, 1]);
    let mut p_prev = IPoly::from_i64(&[2]); // p_0
    let mut p_cur = y.clone(); // p_1

    let mut acc = vec![BigInt::zero(); d + 1];
    acc[0] = phi.0[d].clone(); // middle coefficient a_d
    for k in 1..=d {
        if k > 1 {
            // p_{k} = y * p_{k-1} - p_{k-2}
            let mut next = y.mul(&p_cur).0;
            for (i, c) in p_prev.0.iter().enumerate() {
                next[i] -= c;
            }
            p_prev = std::mem::replace(&mut p_cur, IPoly(next));
        }
        let a = &phi.0[d + k];
        if !a.is_zero() {
            for (i, c) in p_cur.0.iter().enumerate() {
                acc[i] += a * c;
            }
        }
    }
    while acc.last().map_or(false, |c| c.is_zero()) {
        acc.pop();
    }
    IPoly(acc)
}

/// Polynomial over Q, dense, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct QPoly(pub Vec<Rat>);

impl QPoly {
    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn one() -> Self {
        QPoly(vec![Rat::one()])
    }

    pub fn from_coeffs(mut v: Vec<Rat>) -> Self {
        while v.last().map_or(false, |c| c.is_zero()) {
            v.pop();
        }
        QPoly(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero());
        self.0.len() - 1
    }

    pub fn leading(&self) -> &Rat {
        self.0.last().expect("leading coefficient of zero")
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        QPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] -= c;
        }
        QPoly::from_coeffs(out)
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }

    pub fn scale(&self, q: &Rat) -> QPoly {
        QPoly::from_coeffs(self.0.iter().map(|c| c * q).collect())
    }

    /// Division with remainder.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() || self.0.len() < divisor.0.len() {
            return (QPoly::zero(), self.clone());
        }
        let mut rem = self.0.clone();
        let d = divisor.degree();
        let lead = divisor.leading().clone();
        let mut quot = vec![Rat::zero(); self.0.len() - divisor.0.len() + 1];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + d] / &lead;
            if q.is_zero() {
                continue;
            }
            quot[i] = q.clone();
            for (k, c) in divisor.0.iter().enumerate() {
                let t = &q * c;
                rem[i + k] -= t;
            }
        }
        (QPoly::from_coeffs(quot), QPoly::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &QPoly) -> QPoly {
        self.div_rem(divisor).1
    }

    pub fn derivative(&self) -> QPoly {
        if self.0.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::from_coeffs(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Extended gcd: returns (g, s, t) with s*self + t*other = g, g monic
    /// (or zero).
    pub fn extended_gcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let ns = s0.sub(&q.mul(&s1));
            let nt = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, ns);
            t0 = std::mem::replace(&mut t1, nt);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let lead = r0.leading().clone();
        let inv = lead.recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }
}

/// Resultant of two rational polynomials, by the Euclidean recurrence
/// Res(f, g) = (-1)^{deg f * deg g} lc(g)^{deg f - deg r} Res(g, r).
pub fn resultant(f: &QPoly, g: &QPoly) -> Rat {
    if f.is_zero() || g.is_zero() {
        return Rat::zero();
    }
    let (df, dg) = (f.degree(), g.degree());
    if dg == 0 {
        return pow_rat(g.leading(), df as u32);
    }
    if df < dg {
        let sign = if (df * dg) % 2 == 1 { -Rat::one() } else { Rat::one() };
        return sign * resultant(g, f);
    }
    let r = f.rem(g);
    if r.is_zero() {
        return Rat::zero();
    }
    let sign = if (df * dg) % 2 == 1 { -Rat::one() } else { Rat::one() };
    sign * pow_rat(g.leading(), (df - r.degree()) as u32) * resultant(g, &r)
}

/// Discriminant disc(f) = (-1)^{d(d-1)/2} Res(f, f') / lc(f).
pub fn discriminant(f: &QPoly) -> Rat {
    let d = f.degree();
    let res = resultant(f, &f.derivative());
    let sign = if (d * (d - 1) / 2) % 2 == 1 {
        -Rat::one()
    } else {
        Rat::one()
    };
    sign * res / f.leading().clone()
}

fn pow_rat(q: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..k {
        acc *= q;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), IPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2), IPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(12), IPoly::from_i64(&[1, 0, -1, 0, 1]));
        // Degree-6 value used by the order-28 fibre computation.
        assert_eq!(
            cyclotomic(14),
            IPoly::from_i64(&[1, -1, 1, -1, 1, -1, 1])
        );
    }

    #[test]
    fn cyclotomic_product_recovers_x_n_minus_one() {
        for n in 1..=200u64 {
            let mut prod = IPoly::from_i64(&[1]);
            for d in crate::arith::divisors(n) {
                prod = prod.mul(&cyclotomic(d));
            }
            assert_eq!(prod, IPoly::x_pow_minus_one(n), "product over divisors of {n}");
        }
    }

    #[test]
    fn cyclotomic_degree_is_phi() {
        for n in 1..=200u64 {
            assert_eq!(cyclotomic(n).degree() as u64, crate::arith::euler_phi(n));
        }
    }

    #[test]
    fn real_min_polys() {
        assert_eq!(real_subfield_min_poly(5), IPoly::from_i64(&[-1, 1, 1]));
        assert_eq!(real_subfield_min_poly(8), IPoly::from_i64(&[-2, 0, 1]));
        assert_eq!(real_subfield_min_poly(12), IPoly::from_i64(&[-3, 0, 1]));
        assert_eq!(real_subfield_min_poly(7), IPoly::from_i64(&[-1, -2, 1, 1]));
    }

    #[test]
    fn discriminants_of_known_polynomials() {
        let disc = |coeffs: &[i64]| discriminant(&IPoly::from_i64(coeffs).to_qpoly());
        assert_eq!(disc(&[-2, 0, 1]), crate::rational::rat_int(8)); // x^2 - 2
        assert_eq!(disc(&[-1, -1, 1]), crate::rational::rat_int(5)); // x^2 - x - 1
        assert_eq!(disc(&[-1, -2, 1, 1]), crate::rational::rat_int(49)); // zeta_7 real
        assert_eq!(disc(&[-2, 0, 0, 1]), crate::rational::rat_int(-108)); // x^3 - 2
    }

    #[test]
    fn extended_gcd_inverts_mod_modulus() {
        // Invert x + 2 modulo x^2 + 1 over Q.
        let f = IPoly::from_i64(&[2, 1]).to_qpoly();
        let m = IPoly::from_i64(&[1, 0, 1]).to_qpoly();
        let (g, s, _t) = f.extended_gcd(&m);
        assert_eq!(g, QPoly::one());
        let prod = f.mul(&s).rem(&m);
        assert_eq!(prod, QPoly::one());
    }
}

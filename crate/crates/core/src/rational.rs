//! Arbitrary-precision rationals plus the small amount of certified interval
//! arithmetic the mass-formula bounds need.
//!
//! A [`Rat`] is always in lowest terms with positive denominator (the
//! underlying `num_rational::Ratio` maintains that canonical form). Powers of
//! pi and irrational square roots are never evaluated in floating point for
//! anything load-bearing; they become [`RatInterval`]s — exact rational
//! endpoints enclosing the true value — so that comparisons and ceilings are
//! rigorous.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = Ratio<BigInt>;

pub fn rat(num: i64, den: i64) -> Rat {
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Ratio::from_integer(BigInt::from(n))
}

/// Canonical "num/den" rendering, always including the denominator.
pub fn format_rat(q: &Rat) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parse "num/den" or a bare integer.
pub fn parse_rat(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Ratio::new(n, d))
        }
        None => {
            let n: BigInt = s.trim().parse().ok()?;
            Some(Ratio::from_integer(n))
        }
    }
}

/// Serde helper: render a rational as its canonical "num/den" string.
pub fn serialize_rat<S: serde::Serializer>(q: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rat(q))
}

/// Is the numerator (in lowest terms, up to sign) a power of two? 1 counts.
pub fn numerator_is_power_of_two(q: &Rat) -> bool {
    let n = q.numer().abs();
    let n = n.to_biguint().expect("abs is nonnegative");
    if n.is_zero() {
        return false;
    }
    (&n & (&n - 1u32)).is_zero()
}

pub fn ceil_rat(q: &Rat) -> BigInt {
    q.ceil().to_integer()
}

/// Natural log of a positive big integer, as f64. Uses the top 64 bits of the
/// mantissa, so it is accurate to ~1e-15 relative error regardless of size.
pub fn ln_biguint(n: &BigUint) -> f64 {
    assert!(!n.is_zero(), "ln(0)");
    let bits = n.bits();
    if bits <= 53 {
        return (n.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 53;
    let top: BigUint = n >> shift;
    (top.to_u64().unwrap() as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational, as f64.
pub fn ln_rat(q: &Rat) -> f64 {
    assert!(q.is_positive(), "ln of non-positive rational");
    let n = q.numer().to_biguint().unwrap();
    let d = q.denom().to_biguint().unwrap();
    ln_biguint(&n) - ln_biguint(&d)
}

/// A closed interval with exact rational endpoints, `lo <= hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn point(q: Rat) -> Self {
        RatInterval { lo: q.clone(), hi: q }
    }

    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "inverted interval");
        RatInterval { lo, hi }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Product of two intervals of positive numbers (all we ever need).
    /// Fractions are combined without gcd reduction: the canonical-form
    /// reduction inside `Ratio` costs enormous gcds once pi powers reach
    /// tens of thousands of digits, and nothing downstream needs reduced
    /// endpoints.
    pub fn mul_pos(&self, other: &RatInterval) -> RatInterval {
        assert!(self.is_positive() && other.is_positive());
        RatInterval {
            lo: mul_raw(&self.lo, &other.lo),
            hi: mul_raw(&self.hi, &other.hi),
        }
    }

    /// Reciprocal of an interval of positive numbers.
    pub fn recip_pos(&self) -> RatInterval {
        assert!(self.is_positive());
        RatInterval {
            lo: Ratio::new_raw(self.hi.denom().clone(), self.hi.numer().clone()),
            hi: Ratio::new_raw(self.lo.denom().clone(), self.lo.numer().clone()),
        }
    }

    /// k-th power of an interval of positive numbers, by repeated squaring.
    pub fn pow_pos(&self, k: u64) -> RatInterval {
        assert!(self.is_positive());
        let mut acc = RatInterval::point(Rat::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_pos(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_pos(&base);
            }
        }
        acc
    }

    pub fn scale(&self, q: &Rat) -> RatInterval {
        assert!(q.is_positive());
        RatInterval {
            lo: mul_raw(&self.lo, q),
            hi: mul_raw(&self.hi, q),
        }
    }

    /// Strictly-less comparison of intervals: every point of self is below
    /// every point of other.
    pub fn certainly_lt(&self, other: &RatInterval) -> bool {
        self.hi < other.lo
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            self.lo.to_f64().unwrap_or(f64::INFINITY),
            self.hi.to_f64().unwrap_or(f64::INFINITY),
        )
    }
}

fn mul_raw(a: &Rat, b: &Rat) -> Rat {
    Ratio::new_raw(a.numer() * b.numer(), a.denom() * b.denom())
}

// 100 decimal digits of pi; enough that even a 400th power keeps dozens of
// certified digits.
const PI_DIGITS: &str = "3.141592653589793238462643383279502884197169399375105820974944592307816406286208998628034825342117068";

/// An interval of width 10^-99 around pi.
pub fn pi_interval() -> RatInterval {
    let digits: String = PI_DIGITS.chars().filter(|c| *c != '.').collect();
    let scale = BigInt::from(10u32).pow((digits.len() - 1) as u32);
    let n: BigInt = digits.parse().expect("pi digits parse");
    RatInterval {
        lo: Ratio::new(n.clone(), scale.clone()),
        hi: Ratio::new(n + BigInt::one(), scale),
    }
}

/// Floor integer square root, as a bracket [s, s+1) refined to `extra_bits`
/// fractional bits: returns an interval containing sqrt(n) of relative width
/// about 2^-extra_bits.
pub fn sqrt_interval(n: &BigUint, extra_bits: u32) -> RatInterval {
    if n.is_zero() {
        return RatInterval::point(Rat::zero());
    }
    let scaled = n << (2 * extra_bits as u64);
    let s = scaled.sqrt(); // floor sqrt from num-integer
    let den = BigInt::from(BigUint::one() << extra_bits);
    let lo = Ratio::new(BigInt::from_biguint(Sign::Plus, s.clone()), den.clone());
    let hi = Ratio::new(BigInt::from_biguint(Sign::Plus, s + BigUint::one()), den);
    RatInterval { lo, hi }
}

/// Exact square root if `n` is a perfect square.
pub fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_round_trips() {
        let q = rat(5, 48);
        assert_eq!(format_rat(&q), "5/48");
        assert_eq!(parse_rat("5/48").unwrap(), q);
        assert_eq!(parse_rat("-3").unwrap(), rat_int(-3));
        assert!(parse_rat("1/0").is_none());
    }

    #[test]
    fn power_of_two_numerators() {
        assert!(numerator_is_power_of_two(&rat(1, 6)));
        assert!(numerator_is_power_of_two(&rat(16, 21)));
        assert!(numerator_is_power_of_two(&rat(-8, 3)));
        assert!(!numerator_is_power_of_two(&rat(5, 48)));
        assert!(!numerator_is_power_of_two(&rat(0, 1)));
    }

    #[test]
    fn pi_bracket_is_tight_and_correct() {
        let pi = pi_interval();
        // The bracket is far narrower than an f64 ulp, so compare loosely in
        // floats and exactly on the width.
        let (lo, hi) = pi.to_f64();
        assert!((lo - std::f64::consts::PI).abs() < 1e-12);
        assert!((hi - std::f64::consts::PI).abs() < 1e-12);
        assert!(&pi.hi - &pi.lo < rat(1, 1_000_000_000));
        // 3.1415926 < pi < 3.1415927, checked exactly.
        assert!(pi.lo > rat(31415926, 10_000_000));
        assert!(pi.hi < rat(31415927, 10_000_000));
    }

    #[test]
    fn sqrt_bracket_contains_root() {
        let n = BigUint::from(2u32);
        let iv = sqrt_interval(&n, 80);
        let two = RatInterval::point(rat_int(2));
        let sq = iv.mul_pos(&iv);
        assert!(sq.lo <= two.lo && two.hi <= sq.hi);
        assert_eq!(exact_sqrt(&BigUint::from(49u32)), Some(BigUint::from(7u32)));
        assert_eq!(exact_sqrt(&BigUint::from(48u32)), None);
    }

    #[test]
    fn big_logs_match_small_logs() {
        let n = BigUint::from(1_000_000_007u64);
        assert!((ln_biguint(&n) - (1_000_000_007f64).ln()).abs() < 1e-12);
        let q = rat(22, 7);
        assert!((ln_rat(&q) - (22f64 / 7.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn interval_powers_bracket() {
        let pi = pi_interval();
        let p = pi.pow_pos(10);
        let (lo, hi) = p.to_f64();
        let approx = std::f64::consts::PI.powi(10);
        assert!((lo / approx - 1.0).abs() < 1e-12);
        assert!((hi / approx - 1.0).abs() < 1e-12);
        assert!(p.lo <= p.hi);
        // Width stays negligible even after powering.
        assert!(&p.hi - &p.lo < rat(1, 1_000_000_000));
    }
}

//! The Eichler mass formula over the real cyclotomic fields, and the
//! obstruction tests it powers.
//!
//! For K = Q(zeta_m)^+ of degree d the Eichler constant is
//!
//!   ei_K = 2 zeta_K(2) |disc K|^{3/2} / (2 pi)^{2d} = (-1)^d zeta_K(-1) / 2^{d-1}
//!
//! computed exactly from [`crate::fields::zeta_minus_one`]. The mass of the
//! full class set of a maximal order in a totally definite quaternion
//! algebra over K is then ei_K * h_K * prod (N(p) - 1) over the ramified
//! finite primes; h_K and the ramified norms are fixture inputs, never
//! computed here.
//!
//! Two cancellation obstructions fall out: stably free cancellation forces
//! the field degree to be at most 6, and forces the numerator of ei_K
//! (equivalently of zeta_K(-1)) to be a power of 2.
//!
//! [`class_set_lower_bound`] is the certified lower bound
//! 2 |disc K|^{3/2} / (2^t (2 pi)^phi(m)) for the size of any fibre of the
//! stable class map, taking the worst case t = phi(m) for the
//! totally-positive-unit index. The |disc|^{3/2} part is kept in factored
//! symbolic form (rational times the square root of a small remainder),
//! and the pi power as an exact rational interval.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::Serialize;

use crate::arith::{self, euler_phi};
use crate::error::{Error, Result};
use crate::fields::{disc_real_cyclotomic_factored, zeta_minus_one, RealCyclotomicField};
use crate::rational::{
    ceil_rat, ln_rat, numerator_is_power_of_two, pi_interval, sqrt_interval, Rat, RatInterval,
};

/// ei_K for K = Q(zeta_m)^+, exact.
pub fn eichler_constant(m: u64) -> Result<Rat> {
    let field = RealCyclotomicField::new(m)?;
    let zeta = zeta_minus_one(field)?;
    let d = field.degree();
    let sign = if d % 2 == 1 { -Rat::one() } else { Rat::one() };
    let ei = sign * zeta / Rat::from_integer(BigInt::from(2u64).pow(d as u32 - 1));
    if ei <= Rat::from_integer(0.into()) {
        return Err(Error::internal(format!(
            "Eichler constant must be positive, got {ei} for m={m}"
        )));
    }
    Ok(ei)
}

/// The mass of the class set, with its decomposition recorded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassValue {
    #[serde(serialize_with = "crate::rational::serialize_rat")]
    pub value: Rat,
    #[serde(serialize_with = "crate::rational::serialize_rat")]
    pub eichler_constant: Rat,
    pub class_number_factor: u64,
    #[serde(serialize_with = "crate::rational::serialize_rat")]
    pub ramification_factor: Rat,
}

/// mass(Cls Lambda) = ei_K * h_K * prod (N(p) - 1) for a maximal order in a
/// totally definite quaternion algebra over K = Q(zeta_m)^+. The class
/// number and the ramified prime norms come from fixtures.
pub fn mass_class_set(m: u64, h_k: u64, ramified_norms: &[u64]) -> Result<MassValue> {
    if h_k == 0 {
        return Err(Error::validation("class number fixture must be positive"));
    }
    let ei = eichler_constant(m)?;
    let mut ram = Rat::one();
    for &n in ramified_norms {
        if n < 2 {
            return Err(Error::validation(format!(
                "ramified prime norm must be at least 2, got {n}"
            )));
        }
        ram *= Rat::from_integer(BigInt::from(n - 1));
    }
    let value = ei.clone() * Rat::from_integer(BigInt::from(h_k)) * ram.clone();
    Ok(MassValue {
        value,
        eichler_constant: ei,
        class_number_factor: h_k,
        ramification_factor: ram,
    })
}

/// Degree test: stably free cancellation over K is not yet excluded iff
/// [K : Q] = phi(m)/2 <= 6.
pub fn sfc_degree_obstruction(m: u64) -> Result<bool> {
    RealCyclotomicField::new(m)?;
    Ok(euler_phi(m) / 2 <= 6)
}

/// Numerator test: true iff the numerator of ei_K is a power of two. A
/// false verdict certifies failure of stably free cancellation for any
/// maximal order in a totally definite quaternion algebra over K.
pub fn numerator_power_of_two_test(m: u64) -> Result<bool> {
    let ei = eichler_constant(m)?;
    Ok(numerator_is_power_of_two(&ei))
}

/// The certified lower bound for the fibre size of the stable class map.
#[derive(Debug, Clone)]
pub struct ClassSetBound {
    pub m: u64,
    /// Exact rational coefficient of sqrt(sqrt_arg) * pi^{pi_exp}.
    pub coefficient: Rat,
    /// Argument left under the square root (1 when |disc|^{3/2} is exact).
    pub sqrt_arg: BigUint,
    /// Exponent of pi (always -phi(m) here).
    pub pi_exp: i64,
    /// Certified enclosure of the numeric value.
    pub interval: RatInterval,
    /// Natural log of the value (for shape scans; not certified).
    pub log_lower: f64,
}

impl ClassSetBound {
    /// Ceiling of the certified lower end: a rigorous integer lower bound
    /// for the fibre size (at least 1, since fibres are nonempty).
    pub fn certified_integer(&self) -> BigUint {
        let c = ceil_rat(&self.interval.lo);
        if c <= BigInt::one() {
            BigUint::one()
        } else {
            c.to_biguint().unwrap()
        }
    }
}

/// The exact symbolic pieces of the bound: rational coefficient, leftover
/// square-root argument, and the pi exponent phi(m).
fn bound_parts(m: u64) -> Result<(Rat, BigUint, u64)> {
    if m % 2 != 0 || m < 6 {
        return Err(Error::validation(format!(
            "class-set bound needs an even conductor m = 2n with n >= 3, got {m}"
        )));
    }
    let phi = euler_phi(m);
    let t = phi; // worst case for ord_2 of the totally-positive-unit index
    let disc = disc_real_cyclotomic_factored(m)?;

    // |disc|^{3/2} = prod p^{floor(3e/2)} * sqrt(prod p^{3e mod 2}).
    let mut exact = BigUint::one();
    let mut sqrt_arg = BigUint::one();
    for (&p, &e) in disc.iter() {
        let three_e = 3 * e;
        exact *= BigUint::from(p).pow((three_e / 2) as u32);
        if three_e % 2 == 1 {
            sqrt_arg *= BigUint::from(p);
        }
    }

    let denom_pow2 = BigUint::from(2u32).pow((t + phi) as u32); // 2^t * 2^phi
    let coefficient = Rat::new(BigInt::from(exact * 2u32), BigInt::from(denom_pow2));
    Ok((coefficient, sqrt_arg, phi))
}

fn bound_log(coefficient: &Rat, sqrt_arg: &BigUint, phi: u64) -> f64 {
    ln_rat(coefficient) + 0.5 * crate::rational::ln_biguint(sqrt_arg)
        - phi as f64 * std::f64::consts::PI.ln()
}

/// Lower bound 2 |disc K|^{3/2} / (2^t (2 pi)^phi) for the fibre
/// Cls^{[P]}(Lambda_m) of the stable class map, with the worst-case
/// totally-positive-unit index t = phi(m). Requires m = 2n even, n >= 3.
pub fn class_set_lower_bound(m: u64) -> Result<ClassSetBound> {
    let (coefficient, sqrt_arg, phi) = bound_parts(m)?;
    let sqrt_iv = sqrt_interval(&sqrt_arg, 128);
    let pi_pow = pi_interval().pow_pos(phi).recip_pos();
    let interval = pi_pow.mul_pos(&sqrt_iv).scale(&coefficient);
    let log_lower = bound_log(&coefficient, &sqrt_arg, phi);
    Ok(ClassSetBound {
        m,
        coefficient,
        sqrt_arg,
        pi_exp: -(phi as i64),
        interval,
        log_lower,
    })
}

/// Scan of log(class_set_lower_bound(2n)) over a range of n, optionally in
/// parallel; results in input order either way. Only the factored pieces
/// are computed (no certified intervals), which keeps the scan cheap.
pub fn lower_bound_log_scan(n_lo: u64, n_hi: u64, parallel: bool) -> Result<Vec<(u64, f64)>> {
    let ns: Vec<u64> = (n_lo..=n_hi).collect();
    let rows = crate::exec::map_vec(ns, parallel, |n| {
        bound_parts(2 * n).map(|(c, s, phi)| (n, bound_log(&c, &s, phi)))
    });
    rows.into_iter().collect()
}

pub fn lower_bound_log_scan_seq(n_lo: u64, n_hi: u64) -> Result<Vec<(u64, f64)>> {
    lower_bound_log_scan(n_lo, n_hi, false)
}

/// Fit of the bound's asymptotic shape over a range of n:
/// log bound(2n) >= (3/8) phi(2n) log(2n) - C n log log n.
#[derive(Debug, Clone)]
pub struct BoundShapeFit {
    pub n_lo: u64,
    pub n_hi: u64,
    /// Smallest nonnegative C making the inequality hold on the whole grid.
    pub fitted_c: f64,
    /// Largest residual in the favourable direction (how far above the
    /// main term the bound gets).
    pub max_excess: f64,
}

/// Fit the correction constant for the asymptotic shape of the class-set
/// bound over n in [n_lo, n_hi] and verify the inequality holds with it.
pub fn bound_shape_fit(n_lo: u64, n_hi: u64, parallel: bool) -> Result<BoundShapeFit> {
    if n_lo < 3 || n_hi < n_lo {
        return Err(Error::validation("bound shape fit needs 3 <= n_lo <= n_hi"));
    }
    let rows = lower_bound_log_scan(n_lo, n_hi, parallel)?;
    let mut fitted_c = 0f64;
    let mut max_excess = f64::NEG_INFINITY;
    for (n, log_bound) in &rows {
        let main = 0.375 * euler_phi(2 * n) as f64 * ((2 * n) as f64).ln();
        let correction_scale = *n as f64 * (*n as f64).ln().ln().max(1.0);
        let residual = log_bound - main;
        if residual < 0.0 {
            fitted_c = fitted_c.max(-residual / correction_scale);
        }
        max_excess = max_excess.max(residual);
    }
    // Re-verify with the fitted constant.
    for (n, log_bound) in &rows {
        let main = 0.375 * euler_phi(2 * n) as f64 * ((2 * n) as f64).ln();
        let correction = fitted_c * *n as f64 * (*n as f64).ln().ln().max(1.0);
        if *log_bound < main - correction - 1e-9 {
            return Err(Error::internal(format!(
                "shape inequality fails at n={n} even with the fitted constant"
            )));
        }
    }
    Ok(BoundShapeFit {
        n_lo,
        n_hi,
        fitted_c,
        max_excess,
    })
}

/// Ambiguous class number of the p-th cyclotomic field for an odd prime p,
/// by the closed formula: the product of ramification indices over all
/// places is 2(p-1), the degree is p-1, and the norm index on units is 2,
/// so the fixed-point class group has order 2(p-1) / ((p-1) * 2) = 1.
pub fn ambiguous_class_number(p: u64) -> Result<u64> {
    if !arith::is_prime(p) || p == 2 {
        return Err(Error::validation(format!("need an odd prime, got {p}")));
    }
    let ramification = 2 * (p - 1); // p totally ramified plus the real places
    let degree = p - 1;
    let norm_index = 2; // -1 is never a norm from a CM field
    let denom = degree * norm_index;
    if ramification % denom != 0 {
        return Err(Error::internal(
            "ambiguous class number formula did not divide evenly",
        ));
    }
    Ok(ramification / denom)
}

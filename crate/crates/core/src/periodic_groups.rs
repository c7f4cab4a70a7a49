//! Groups with periodic cohomology, described by structural parameters.
//!
//! A group is one of: cyclic; generalised quaternion Q_4n; the split
//! metacyclic form C_m x| C_n4 (type I); the form (C_t x| C_s) x| Q_{2^n}
//! (type II, with the action of Q_{2^n} on C_t recorded by the residues a, b
//! of the x- and y-actions); a binary polyhedral group; SL_2(F_p) or
//! TL_2(F_p); or the family Q(2^n a; b, c) = C_abc x| Q_{2^n} with
//! prescribed sign actions.
//!
//! Everything downstream is congruence arithmetic on these parameters: the
//! type classification by G/O(G), detection of quaternion quotients, the
//! count of maximal binary polyhedral quotients, and the quaternionic
//! multiplicity m_H. No element tables are ever built.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::arith::{self, crt, divisors, euler_phi, gcd, mod_pow, nu2};
use crate::error::{Error, Result};

/// Structural description of a group with periodic cohomology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum PeriodicGroupSpec {
    /// C_n
    Cyclic { n: u64 },
    /// Q_4n of order `order` = 4n, n >= 2.
    Quaternion { order: u64 },
    /// C_m x|_r C_n4 with m odd, 4 | n4, gcd(m, n4) = 1, r^n4 = 1 mod m.
    TypeI { m: u64, n4: u64, r: u64 },
    /// (C_t x|_r C_s) x|_(a,b) Q_{2^n_exp} with t, s odd coprime and
    /// a^2 = b^2 = 1 mod t.
    TypeII {
        t: u64,
        s: u64,
        r: u64,
        n_exp: u32,
        a: u64,
        b: u64,
    },
    BinaryTetra,
    BinaryOcta,
    BinaryIcosa,
    /// SL_2(F_p), p an odd prime (p = 3 is the binary tetrahedral group,
    /// p = 5 the binary icosahedral group).
    SL2 { p: u64 },
    /// TL_2(F_p), p an odd prime (p = 3 is the binary octahedral group).
    TL2 { p: u64 },
    /// Q(2^n_exp a; b, c) = C_abc x| Q_{2^n_exp} with a, b, c odd and
    /// pairwise coprime; x inverts mod a and b, fixes mod c; y inverts mod
    /// a and c, fixes mod b.
    QFamily { n_exp: u32, a: u64, b: u64, c: u64 },
}

/// Column of the classification table of G by G/O(G).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupType {
    I,
    IIa,
    IIb,
    III,
    IV,
    Va,
    Vb,
    VI,
}

impl std::fmt::Display for GroupType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            GroupType::I => "I",
            GroupType::IIa => "IIa",
            GroupType::IIb => "IIb",
            GroupType::III => "III",
            GroupType::IV => "IV",
            GroupType::Va => "Va",
            GroupType::Vb => "Vb",
            GroupType::VI => "VI",
        };
        f.write_str(s)
    }
}

/// A binary polyhedral group: Q_4n (n >= 2) or one of the three exceptional
/// binary polyhedral groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BinaryPolyhedral {
    Quaternion(u64),
    Ttilde,
    Otilde,
    Itilde,
}

impl BinaryPolyhedral {
    pub fn order(&self) -> u64 {
        match self {
            BinaryPolyhedral::Quaternion(order) => *order,
            BinaryPolyhedral::Ttilde => 24,
            BinaryPolyhedral::Otilde => 48,
            BinaryPolyhedral::Itilde => 120,
        }
    }

    pub fn m_h(&self) -> u64 {
        match self {
            BinaryPolyhedral::Quaternion(order) => (order / 4) / 2,
            BinaryPolyhedral::Ttilde => 1,
            BinaryPolyhedral::Otilde => 2,
            BinaryPolyhedral::Itilde => 2,
        }
    }
}

impl std::fmt::Display for BinaryPolyhedral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BinaryPolyhedral::Quaternion(order) => write!(f, "Q{order}"),
            BinaryPolyhedral::Ttilde => f.write_str("Ttilde"),
            BinaryPolyhedral::Otilde => f.write_str("Otilde"),
            BinaryPolyhedral::Itilde => f.write_str("Itilde"),
        }
    }
}

impl PeriodicGroupSpec {
    /// Check the defining congruences; errors name the failed condition.
    pub fn validate(&self) -> Result<()> {
        match *self {
            PeriodicGroupSpec::Cyclic { n } => {
                if n == 0 {
                    return Err(Error::validation("cyclic group needs n >= 1"));
                }
            }
            PeriodicGroupSpec::Quaternion { order } => {
                if order % 4 != 0 || order < 8 {
                    return Err(Error::validation(format!(
                        "quaternion order must be 4n with n >= 2, got {order}"
                    )));
                }
            }
            PeriodicGroupSpec::TypeI { m, n4, r } => {
                if m == 0 || m % 2 == 0 {
                    return Err(Error::validation(format!(
                        "type I needs m odd positive, got m={m}"
                    )));
                }
                if n4 == 0 || n4 % 4 != 0 {
                    return Err(Error::validation(format!(
                        "type I needs n a positive multiple of 4, got n={n4}"
                    )));
                }
                if gcd(m, n4) != 1 {
                    return Err(Error::validation(format!(
                        "type I needs gcd(m, n) = 1, got gcd({m}, {n4}) = {}",
                        gcd(m, n4)
                    )));
                }
                if m > 1 && gcd(r % m, m) != 1 {
                    return Err(Error::validation(format!(
                        "type I twist r={r} is not a unit mod m={m}"
                    )));
                }
                let m1 = m.max(1);
                if mod_pow(r % m1, n4, m1) != 1 % m1 {
                    return Err(Error::validation(format!(
                        "type I requires r^n = 1 mod m; r={r}, n={n4}, m={m}"
                    )));
                }
            }
            PeriodicGroupSpec::TypeII { t, s, r, n_exp, a, b } => {
                if t % 2 == 0 || s % 2 == 0 || t == 0 || s == 0 {
                    return Err(Error::validation(format!(
                        "type II needs t, s odd positive, got t={t}, s={s}"
                    )));
                }
                if gcd(t, s) != 1 {
                    return Err(Error::validation(format!(
                        "type II needs gcd(t, s) = 1, got gcd({t}, {s}) = {}",
                        gcd(t, s)
                    )));
                }
                if n_exp < 3 {
                    return Err(Error::validation(format!(
                        "type II needs 2-exponent >= 3, got {n_exp}"
                    )));
                }
                for (name, v) in [("r", r), ("a", a), ("b", b)] {
                    if t > 1 && gcd(v % t, t) != 1 {
                        return Err(Error::validation(format!(
                            "type II parameter {name}={v} is not a unit mod t={t}"
                        )));
                    }
                }
                let t1 = t.max(1);
                if mod_pow(a % t1, 2, t1) != 1 % t1 || mod_pow(b % t1, 2, t1) != 1 % t1 {
                    return Err(Error::validation(format!(
                        "type II requires a^2 = b^2 = 1 mod t; a={a}, b={b}, t={t}"
                    )));
                }
            }
            PeriodicGroupSpec::BinaryTetra
            | PeriodicGroupSpec::BinaryOcta
            | PeriodicGroupSpec::BinaryIcosa => {}
            PeriodicGroupSpec::SL2 { p } | PeriodicGroupSpec::TL2 { p } => {
                if !arith::is_prime(p) || p < 3 {
                    return Err(Error::validation(format!(
                        "matrix group parameter must be an odd prime, got {p}"
                    )));
                }
            }
            PeriodicGroupSpec::QFamily { n_exp, a, b, c } => {
                if n_exp < 3 {
                    return Err(Error::validation(format!(
                        "Q(2^n a;b,c) needs n >= 3, got {n_exp}"
                    )));
                }
                for (name, v) in [("a", a), ("b", b), ("c", c)] {
                    if v == 0 || v % 2 == 0 {
                        return Err(Error::validation(format!(
                            "Q(2^n a;b,c) needs {name} odd positive, got {v}"
                        )));
                    }
                }
                for (x, y, nx, ny) in [(a, b, "a", "b"), (a, c, "a", "c"), (b, c, "b", "c")] {
                    if gcd(x, y) != 1 {
                        return Err(Error::validation(format!(
                            "Q(2^n a;b,c) needs {nx}, {ny} coprime, got gcd({x}, {y}) = {}",
                            gcd(x, y)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The equivalent type-II data for a Q(2^n a; b, c) family member:
    /// t = abc, s = 1, trivial metacyclic twist, action pair by CRT.
    pub fn qfamily_as_type_ii(&self) -> Result<PeriodicGroupSpec> {
        let (n_exp, a, b, c) = match *self {
            PeriodicGroupSpec::QFamily { n_exp, a, b, c } => (n_exp, a, b, c),
            _ => return Err(Error::validation("not a Q(2^n a;b,c) spec")),
        };
        self.validate()?;
        let t = a * b * c;
        let x_action = crt(&[((a - 1 % a) % a, a), ((b - 1 % b) % b, b), (1 % c, c)])?;
        let y_action = crt(&[((a - 1 % a) % a, a), (1 % b, b), ((c - 1 % c) % c, c)])?;
        Ok(PeriodicGroupSpec::TypeII {
            t,
            s: 1,
            r: 1,
            n_exp,
            a: x_action,
            b: y_action,
        })
    }
}

/// Type of the group, read off the structural parameters (the quotient
/// G/O(G) by the maximal odd-order normal subgroup).
pub fn classify_type(spec: &PeriodicGroupSpec) -> Result<GroupType> {
    spec.validate()?;
    Ok(match *spec {
        PeriodicGroupSpec::Cyclic { .. } => GroupType::I,
        PeriodicGroupSpec::Quaternion { order } => {
            let n = order / 4;
            match nu2(n) {
                0 => GroupType::I,
                1 => GroupType::IIa,
                _ => GroupType::IIb,
            }
        }
        PeriodicGroupSpec::TypeI { .. } => GroupType::I,
        PeriodicGroupSpec::TypeII { n_exp, .. } => {
            if n_exp == 3 {
                GroupType::IIa
            } else {
                GroupType::IIb
            }
        }
        PeriodicGroupSpec::BinaryTetra => GroupType::III,
        PeriodicGroupSpec::BinaryOcta => GroupType::IV,
        PeriodicGroupSpec::BinaryIcosa => GroupType::Va,
        PeriodicGroupSpec::SL2 { p } => match p {
            3 => GroupType::III,
            5 => GroupType::Va,
            _ => GroupType::Vb,
        },
        PeriodicGroupSpec::TL2 { p } => {
            if p == 3 {
                GroupType::IV
            } else {
                GroupType::VI
            }
        }
        PeriodicGroupSpec::QFamily { n_exp, .. } => {
            if n_exp == 3 {
                GroupType::IIa
            } else {
                GroupType::IIb
            }
        }
    })
}

/// Quaternion quotients of a type-I group C_m x|_r C_4n: all a > 1 with
/// a | m and r = -1 mod a (each certifies a quotient Q_4a).
pub fn quaternion_quotients_type_i(spec: &PeriodicGroupSpec) -> Result<BTreeSet<u64>> {
    spec.validate()?;
    let (m, r) = match *spec {
        PeriodicGroupSpec::TypeI { m, r, .. } => (m, r),
        _ => {
            return Err(Error::validation(
                "quaternion_quotients_type_i needs a type-I spec",
            ))
        }
    };
    Ok(divisors(m)
        .into_iter()
        .filter(|&a| a > 1 && (r % a) == a - 1)
        .collect())
}

/// Admissible action pairs (a, b) mod m for C_m x|_(a,b) Q_{2^n} to be a
/// quaternion group: the three non-trivial sign pairs when n = 3, and only
/// (1,-1) when n >= 4.
fn admissible_pair(a: u64, b: u64, m: u64, n_exp: u32) -> bool {
    if m == 1 {
        return true;
    }
    let am = a % m;
    let bm = b % m;
    let one = 1 % m;
    let minus_one = m - 1;
    if n_exp == 3 {
        (am == one && bm == minus_one)
            || (am == minus_one && bm == one)
            || (am == minus_one && bm == minus_one)
    } else {
        am == one && bm == minus_one
    }
}

/// Quaternion quotients of a type-II group: the odd m >= 1 with m | t,
/// r = 1 mod m and (a, b) admissible mod m; each certifies a quotient
/// Q_{2^n_exp * m}.
pub fn quaternion_quotients_type_ii(spec: &PeriodicGroupSpec) -> Result<BTreeSet<u64>> {
    spec.validate()?;
    let (t, r, n_exp, a, b) = match *spec {
        PeriodicGroupSpec::TypeII { t, r, n_exp, a, b, .. } => (t, r, n_exp, a, b),
        _ => {
            return Err(Error::validation(
                "quaternion_quotients_type_ii needs a type-II spec",
            ))
        }
    };
    Ok(divisors(t)
        .into_iter()
        .filter(|&m| (r % m) == 1 % m && admissible_pair(a, b, m, n_exp))
        .collect())
}

/// The set of maximal binary polyhedral quotients of G, plus the internal
/// consistency check that its size lands in the row allowed for the type
/// (I: 0 or 1; IIa: 1-3; IIb: 1; III/IV/Va: 1; Vb/VI: 0).
pub fn maximal_bpq(spec: &PeriodicGroupSpec) -> Result<BTreeSet<BinaryPolyhedral>> {
    spec.validate()?;
    let ty = classify_type(spec)?;
    let quotients: BTreeSet<BinaryPolyhedral> = match spec {
        PeriodicGroupSpec::Cyclic { .. } => BTreeSet::new(),
        PeriodicGroupSpec::Quaternion { order } => {
            [BinaryPolyhedral::Quaternion(*order)].into_iter().collect()
        }
        PeriodicGroupSpec::TypeI { .. } => {
            let divs = quaternion_quotients_type_i(spec)?;
            maximal_under_divisibility(&divs)
                .into_iter()
                .map(|a| BinaryPolyhedral::Quaternion(4 * a))
                .collect()
        }
        PeriodicGroupSpec::TypeII { n_exp, .. } => {
            let divs = quaternion_quotients_type_ii(spec)?;
            maximal_under_divisibility(&divs)
                .into_iter()
                .map(|m| BinaryPolyhedral::Quaternion(2u64.pow(*n_exp) * m))
                .collect()
        }
        PeriodicGroupSpec::BinaryTetra => [BinaryPolyhedral::Ttilde].into_iter().collect(),
        PeriodicGroupSpec::BinaryOcta => [BinaryPolyhedral::Otilde].into_iter().collect(),
        PeriodicGroupSpec::BinaryIcosa => [BinaryPolyhedral::Itilde].into_iter().collect(),
        PeriodicGroupSpec::SL2 { p } => match p {
            3 => [BinaryPolyhedral::Ttilde].into_iter().collect(),
            5 => [BinaryPolyhedral::Itilde].into_iter().collect(),
            _ => BTreeSet::new(),
        },
        PeriodicGroupSpec::TL2 { p } => {
            if *p == 3 {
                [BinaryPolyhedral::Otilde].into_iter().collect()
            } else {
                BTreeSet::new()
            }
        }
        PeriodicGroupSpec::QFamily { .. } => {
            let as_ii = spec.qfamily_as_type_ii()?;
            return maximal_bpq(&as_ii);
        }
    };
    let count = quotients.len();
    let allowed: &[usize] = match ty {
        GroupType::I => &[0, 1],
        GroupType::IIa => &[1, 2, 3],
        GroupType::IIb => &[1],
        GroupType::III | GroupType::IV | GroupType::Va => &[1],
        GroupType::Vb | GroupType::VI => &[0],
    };
    if !allowed.contains(&count) {
        return Err(Error::internal(format!(
            "maximal quotient count {count} is outside the allowed row for type {ty}"
        )));
    }
    Ok(quotients)
}

fn maximal_under_divisibility(set: &BTreeSet<u64>) -> BTreeSet<u64> {
    set.iter()
        .copied()
        .filter(|&a| !set.iter().any(|&b| b != a && b % a == 0))
        .collect()
}

/// The number m_H of one-dimensional quaternionic components of RG.
///
/// Quaternion groups have m_H(Q_4n) = floor(n/2); the exceptional binary
/// polyhedral groups contribute 1, 2, 2; a group with a unique maximal
/// binary polyhedral quotient inherits its value; and in the type IIa case
/// with quotients Q_{8 m_i} the value is sum(m_i - 1) + 1.
pub fn m_h(spec: &PeriodicGroupSpec) -> Result<u64> {
    spec.validate()?;
    if let PeriodicGroupSpec::Quaternion { order } = spec {
        return Ok((order / 4) / 2);
    }
    let bm = maximal_bpq(spec)?;
    match bm.len() {
        0 => Ok(0),
        1 => Ok(bm.iter().next().unwrap().m_h()),
        _ => {
            // Type IIa with 2 or 3 maximal quotients Q_{8 m_i}.
            let mut total = 0u64;
            for q in &bm {
                match q {
                    BinaryPolyhedral::Quaternion(order) => total += order / 8,
                    _ => {
                        return Err(Error::internal(
                            "multiple maximal quotients must all be quaternionic",
                        ))
                    }
                }
            }
            Ok(total - (bm.len() as u64 - 1))
        }
    }
}

/// Verdict of the non-vanishing criterion for the finiteness obstruction of
/// Q(2^n a; b, c) families: the criterion is sufficient only, so a negative
/// answer carries the failed hypothesis rather than claiming vanishing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MilgramVerdict {
    pub nonvanishing: bool,
    pub reason: String,
}

/// Sufficient criterion for a non-vanishing finiteness obstruction, for the
/// templates Q(8; p, q) with p, q odd primes and Q(2^n; p, 1) with n >= 4.
pub fn milgram_nonvanishing(spec: &PeriodicGroupSpec) -> Result<MilgramVerdict> {
    spec.validate()?;
    let (n_exp, a, p, q) = match *spec {
        PeriodicGroupSpec::QFamily { n_exp, a, b, c } => (n_exp, a, b, c),
        _ => {
            return Err(Error::Inapplicable(
                "criterion applies to Q(2^n a;b,c) specs only".into(),
            ))
        }
    };
    if a != 1 {
        return Err(Error::Inapplicable(format!(
            "criterion requires the a-parameter to be 1, got {a}"
        )));
    }
    if n_exp == 3 {
        if !arith::is_prime(p) || !arith::is_prime(q) || p == q {
            return Err(Error::Inapplicable(format!(
                "Q(8;p,q) case needs p, q distinct odd primes, got ({p}, {q})"
            )));
        }
        if p % 4 == 3 && q % 4 == 3 {
            return Ok(MilgramVerdict {
                nonvanishing: true,
                reason: format!("p={p} and q={q} are both 3 mod 4"),
            });
        }
        if p % 4 == 3 && q % 8 == 5 {
            // Scan odd exponents up to the multiplicative order of p mod q;
            // any hit p^k = +-1 defeats the hypothesis.
            let ord = arith::multiplicative_order(p % q, q);
            let mut k = 1;
            while k <= ord {
                let pk = mod_pow(p % q, k, q);
                if pk == 1 || pk == q - 1 {
                    return Ok(MilgramVerdict {
                        nonvanishing: false,
                        reason: format!("inapplicable: p^{k} = +-1 mod q for odd k={k}"),
                    });
                }
                k += 2;
            }
            return Ok(MilgramVerdict {
                nonvanishing: true,
                reason: format!(
                    "p={p} is 3 mod 4, q={q} is 5 mod 8, and no odd power of p is +-1 mod q"
                ),
            });
        }
        return Ok(MilgramVerdict {
            nonvanishing: false,
            reason: format!(
                "inapplicable: ({p} mod 4, {q} mod 8) = ({}, {})",
                p % 4,
                q % 8
            ),
        });
    }
    // n_exp >= 4 template: Q(2^n; p, 1).
    if q != 1 || !arith::is_prime(p) {
        return Err(Error::Inapplicable(format!(
            "Q(2^n;p,1) case needs an odd prime p and c = 1, got ({p}, {q})"
        )));
    }
    if p % 8 == 1 {
        return Ok(MilgramVerdict {
            nonvanishing: false,
            reason: format!("inapplicable: {p} = 1 mod 8"),
        });
    }
    let modulus = 2u64.pow(n_exp - 1);
    if p % modulus == 1 || p % modulus == modulus - 1 {
        return Ok(MilgramVerdict {
            nonvanishing: false,
            reason: format!("inapplicable: {p} = +-1 mod {modulus}"),
        });
    }
    Ok(MilgramVerdict {
        nonvanishing: true,
        reason: format!("p={p} is neither 1 mod 8 nor +-1 mod {modulus}"),
    })
}

/// An automorphism of Q_4n (n >= 3): x -> x^a, y -> x^b y with a a unit mod
/// 2n and b any residue mod 2n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AutQ4n {
    pub n: u64,
    pub a: u64,
    pub b: u64,
}

impl AutQ4n {
    pub fn new(n: u64, a: u64, b: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Unsupported(
                "automorphisms are parameterised this way only for Q_4n with n >= 3".into(),
            ));
        }
        let m = 2 * n;
        if gcd(a % m, m) != 1 {
            return Err(Error::validation(format!("a={a} is not a unit mod {m}")));
        }
        Ok(AutQ4n {
            n,
            a: a % m,
            b: b % m,
        })
    }

    pub fn identity(n: u64) -> Result<Self> {
        AutQ4n::new(n, 1, 0)
    }

    /// Composition: self after other; (a,b) o (c,d) = (ac, ad + b) mod 2n.
    pub fn compose(&self, other: &AutQ4n) -> Result<AutQ4n> {
        if self.n != other.n {
            return Err(Error::validation(
                "composing automorphisms of different groups",
            ));
        }
        let m = 2 * self.n;
        let a = (self.a as u128 * other.a as u128 % m as u128) as u64;
        let b = ((self.a as u128 * other.b as u128 + self.b as u128) % m as u128) as u64;
        Ok(AutQ4n { n: self.n, a, b })
    }

    pub fn inverse(&self) -> AutQ4n {
        let m = 2 * self.n;
        let a_inv = arith::mod_inverse(self.a, m).expect("a is a unit");
        let b = (m - (a_inv as u128 * self.b as u128 % m as u128) as u64) % m;
        AutQ4n {
            n: self.n,
            a: a_inv,
            b,
        }
    }
}

/// All automorphisms of Q_4n; exactly 2n * phi(2n) of them.
pub fn aut_enumerate(n: u64) -> Result<Vec<AutQ4n>> {
    if n < 3 {
        return Err(Error::Unsupported(
            "automorphisms are parameterised this way only for Q_4n with n >= 3".into(),
        ));
    }
    let m = 2 * n;
    let mut out = Vec::with_capacity((m * euler_phi(m)) as usize);
    for a in arith::units(m) {
        for b in 0..m {
            out.push(AutQ4n { n, a, b });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(order: u64) -> PeriodicGroupSpec {
        PeriodicGroupSpec::Quaternion { order }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_type(&q(28)).unwrap(), GroupType::I);
        assert_eq!(classify_type(&q(8)).unwrap(), GroupType::IIa);
        assert_eq!(classify_type(&q(16)).unwrap(), GroupType::IIb);
        assert_eq!(
            classify_type(&PeriodicGroupSpec::SL2 { p: 7 }).unwrap(),
            GroupType::Vb
        );
        assert_eq!(
            classify_type(&PeriodicGroupSpec::SL2 { p: 5 }).unwrap(),
            GroupType::Va
        );
        assert_eq!(
            classify_type(&PeriodicGroupSpec::TL2 { p: 5 }).unwrap(),
            GroupType::VI
        );
        assert_eq!(
            classify_type(&PeriodicGroupSpec::Cyclic { n: 11 }).unwrap(),
            GroupType::I
        );
    }

    #[test]
    fn invalid_specs_are_rejected() {
        // 2^4 = 16 = 7 mod 9, not 1.
        let bad = PeriodicGroupSpec::TypeI { m: 9, n4: 4, r: 2 };
        assert!(matches!(classify_type(&bad), Err(Error::Validation(_))));
        // 2^2 != 1 mod 9.
        let bad2 = PeriodicGroupSpec::TypeII {
            t: 9,
            s: 1,
            r: 1,
            n_exp: 3,
            a: 2,
            b: 1,
        };
        assert!(quaternion_quotients_type_ii(&bad2).is_err());
    }

    #[test]
    fn type_i_quotients_examples() {
        let spec = PeriodicGroupSpec::TypeI { m: 7, n4: 4, r: 6 };
        assert_eq!(
            quaternion_quotients_type_i(&spec).unwrap(),
            BTreeSet::from([7])
        );
        let spec = PeriodicGroupSpec::TypeI {
            m: 15,
            n4: 4,
            r: 14,
        };
        assert_eq!(
            quaternion_quotients_type_i(&spec).unwrap(),
            BTreeSet::from([3, 5, 15])
        );
        let spec = PeriodicGroupSpec::TypeI { m: 9, n4: 4, r: 1 };
        assert!(quaternion_quotients_type_i(&spec).unwrap().is_empty());
    }

    /// Independent check: exhaustive scan over all a in 2..=m.
    #[test]
    fn type_i_quotients_against_bruteforce() {
        for (m, n4, r) in [(15u64, 4u64, 14u64), (45, 8, 44), (21, 4, 20), (35, 12, 34)] {
            let spec = PeriodicGroupSpec::TypeI { m, n4, r };
            spec.validate().unwrap();
            let got = quaternion_quotients_type_i(&spec).unwrap();
            let brute: BTreeSet<u64> =
                (2..=m).filter(|&a| m % a == 0 && r % a == a - 1).collect();
            assert_eq!(got, brute, "m={m}, r={r}");
        }
    }

    #[test]
    fn type_ii_quotients_examples() {
        let spec = PeriodicGroupSpec::TypeII {
            t: 3,
            s: 1,
            r: 1,
            n_exp: 4,
            a: 1,
            b: 2, // -1 mod 3
        };
        assert_eq!(
            quaternion_quotients_type_ii(&spec).unwrap(),
            BTreeSet::from([1, 3])
        );

        // CRT-specified pair mod 15: a = (-1 mod 3, 1 mod 5), b = (1 mod 3, -1 mod 5).
        let a = crt(&[(2, 3), (1, 5)]).unwrap();
        let b = crt(&[(1, 3), (4, 5)]).unwrap();
        assert_eq!((a, b), (11, 4));
        let spec = PeriodicGroupSpec::TypeII {
            t: 15,
            s: 1,
            r: 1,
            n_exp: 3,
            a,
            b,
        };
        // 15 itself is excluded: (11, 4) mod 15 is none of the admissible pairs.
        assert_eq!(
            quaternion_quotients_type_ii(&spec).unwrap(),
            BTreeSet::from([1, 3, 5])
        );

        let spec = PeriodicGroupSpec::TypeII {
            t: 5,
            s: 1,
            r: 2,
            n_exp: 4,
            a: 1,
            b: 4,
        };
        assert_eq!(
            quaternion_quotients_type_ii(&spec).unwrap(),
            BTreeSet::from([1])
        );
    }

    #[test]
    fn maximal_bpq_examples() {
        assert_eq!(
            maximal_bpq(&q(28)).unwrap(),
            BTreeSet::from([BinaryPolyhedral::Quaternion(28)])
        );
        assert!(maximal_bpq(&PeriodicGroupSpec::SL2 { p: 7 })
            .unwrap()
            .is_empty());

        let a = crt(&[(2, 3), (1, 5)]).unwrap();
        let b = crt(&[(1, 3), (4, 5)]).unwrap();
        let spec = PeriodicGroupSpec::TypeII {
            t: 15,
            s: 1,
            r: 1,
            n_exp: 3,
            a,
            b,
        };
        assert_eq!(
            maximal_bpq(&spec).unwrap(),
            BTreeSet::from([
                BinaryPolyhedral::Quaternion(24),
                BinaryPolyhedral::Quaternion(40)
            ])
        );
    }

    #[test]
    fn m_h_examples() {
        assert_eq!(m_h(&q(28)).unwrap(), 3);
        assert_eq!(m_h(&q(8)).unwrap(), 1);
        // Two maximal quotients Q_24, Q_40: (3 + 5) - 1 = 7.
        let a = crt(&[(2, 3), (1, 5)]).unwrap();
        let b = crt(&[(1, 3), (4, 5)]).unwrap();
        let spec = PeriodicGroupSpec::TypeII {
            t: 15,
            s: 1,
            r: 1,
            n_exp: 3,
            a,
            b,
        };
        assert_eq!(m_h(&spec).unwrap(), 7);
        assert_eq!(m_h(&PeriodicGroupSpec::Cyclic { n: 11 }).unwrap(), 0);
        assert_eq!(m_h(&PeriodicGroupSpec::BinaryOcta).unwrap(), 2);
    }

    #[test]
    fn m_h_floor_formula_cross_check() {
        // floor(n/2) equals the count of quaternionic components of the
        // rational group algebra: sum of phi(d)/2 over d | 2n, d not | n,
        // d >= 3.
        for n in 2..=200u64 {
            let wedderburn: u64 = divisors(2 * n)
                .into_iter()
                .filter(|&d| d >= 3 && n % d != 0)
                .map(|d| euler_phi(d) / 2)
                .sum();
            assert_eq!(m_h(&q(4 * n)).unwrap(), wedderburn, "n={n}");
            assert_eq!(wedderburn, n / 2, "n={n}");
        }
    }

    #[test]
    fn milgram_examples() {
        let q8_3_7 = PeriodicGroupSpec::QFamily {
            n_exp: 3,
            a: 1,
            b: 3,
            c: 7,
        };
        assert!(milgram_nonvanishing(&q8_3_7).unwrap().nonvanishing);

        let q16_3_1 = PeriodicGroupSpec::QFamily {
            n_exp: 4,
            a: 1,
            b: 3,
            c: 1,
        };
        assert!(milgram_nonvanishing(&q16_3_1).unwrap().nonvanishing);

        let q16_7_1 = PeriodicGroupSpec::QFamily {
            n_exp: 4,
            a: 1,
            b: 7,
            c: 1,
        };
        let v = milgram_nonvanishing(&q16_7_1).unwrap();
        assert!(!v.nonvanishing);
        assert!(v.reason.contains("inapplicable"));

        // Template mismatch: a != 1.
        let off_template = PeriodicGroupSpec::QFamily {
            n_exp: 3,
            a: 3,
            b: 5,
            c: 7,
        };
        assert!(matches!(
            milgram_nonvanishing(&off_template),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn aut_compose_examples() {
        let f = AutQ4n::new(7, 3, 2).unwrap();
        let g = AutQ4n::new(7, 5, 1).unwrap();
        let fg = f.compose(&g).unwrap();
        assert_eq!((fg.a, fg.b), (1, 5));
        let id = AutQ4n::identity(7).unwrap();
        let h = AutQ4n::new(7, 9, 11).unwrap();
        assert_eq!(id.compose(&h).unwrap(), h);
        assert_eq!(aut_enumerate(7).unwrap().len(), 84); // 14 * phi(14)
        assert!(AutQ4n::new(2, 1, 0).is_err());
    }

    /// Oracle for the composition law: apply both maps to words in the
    /// normal form x^i y^j (j in {0,1}) and compare with the closed form.
    #[test]
    fn aut_compose_matches_symbolic_action() {
        type Word = (u64, u8);
        let n = 7u64;
        let m = 2 * n;
        // theta_{a,b}(x^i) = x^{a i}; theta_{a,b}(x^i y) = x^{a i + b} y.
        let apply = |t: &AutQ4n, w: Word| -> Word {
            if w.1 == 0 {
                ((t.a * w.0) % m, 0)
            } else {
                (
                    ((t.a as u128 * w.0 as u128 + t.b as u128) % m as u128) as u64,
                    1,
                )
            }
        };
        let samples = [
            (AutQ4n::new(n, 3, 2).unwrap(), AutQ4n::new(n, 5, 1).unwrap()),
            (
                AutQ4n::new(n, 9, 13).unwrap(),
                AutQ4n::new(n, 11, 6).unwrap(),
            ),
            (AutQ4n::new(n, 13, 0).unwrap(), AutQ4n::new(n, 3, 9).unwrap()),
        ];
        for (f, g) in samples {
            let fg = f.compose(&g).unwrap();
            for w in [(1u64, 0u8), (0, 1), (5, 1), (9, 0)] {
                assert_eq!(apply(&fg, w), apply(&f, apply(&g, w)));
            }
        }
    }

    #[test]
    fn aut_group_axioms_exhaustive_for_q28() {
        let all = aut_enumerate(7).unwrap();
        let id = AutQ4n::identity(7).unwrap();
        for t in &all {
            assert_eq!(t.compose(&t.inverse()).unwrap(), id);
            assert_eq!(t.inverse().compose(t).unwrap(), id);
            assert_eq!(t.compose(&id).unwrap(), *t);
        }
        // Associativity on a sample of triples.
        for (i, j, k) in [(0usize, 10, 20), (5, 50, 80), (83, 1, 42), (17, 33, 61)] {
            let (a, b, c) = (&all[i], &all[j], &all[k]);
            assert_eq!(
                a.compose(b).unwrap().compose(c).unwrap(),
                a.compose(&b.compose(c).unwrap()).unwrap()
            );
        }
        // Closure: all composites stay in the enumeration.
        let set: BTreeSet<AutQ4n> = all.iter().copied().collect();
        for t in all.iter().take(20) {
            for u in all.iter().take(20) {
                assert!(set.contains(&t.compose(u).unwrap()));
            }
        }
    }
}

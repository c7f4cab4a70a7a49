//! Swan-module arithmetic and the cancellation predicates built on it.
//!
//! A Swan class (I, r) over a group of order N is recorded by the residue
//! r in (Z/N)^x; tensor product multiplies residues and passing to a
//! quotient of order M | N reduces mod M, so the classes form a copy of
//! (Z/N)^x and quotient maps are group homomorphisms.
//!
//! Stable classes of projectives are forks: a finite set of minimal-grade
//! vertices plus one vertex at every higher grade. [`GradedStableClass`]
//! stores the minimal level and any group action on it; cancellation is
//! "exactly one minimal vertex", and dividing by the action replaces
//! vertices with orbits.
//!
//! [`n_lower_bound`] chains the pieces: a quaternionic multiplicity m_H
//! of at least 3 guarantees a quaternion quotient Q_4n0 with
//! n0 = max(ceil(2 m_H / 3), 6), and the class-set bound over that
//! quotient, divided by the automorphism count 2 n0 phi(2 n0), bounds the
//! number of minimal vertices from below.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::Serialize;

use crate::arith::{euler_phi, gcd};
use crate::error::{Error, Result};
use crate::mass_formula::{class_set_lower_bound, ClassSetBound};
use crate::periodic_groups::{m_h, PeriodicGroupSpec};
use crate::rational::{ceil_rat, Rat};

/// The class of the projective ideal (I, r) over a group of order N;
/// classes with r = s mod N coincide, so equality of the stored residue is
/// equality of classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SwanClass {
    pub group_order: u64,
    pub r: u64,
}

impl SwanClass {
    pub fn new(group_order: u64, r: u64) -> Result<Self> {
        if group_order == 0 {
            return Err(Error::validation("group order must be positive"));
        }
        let r = r % group_order.max(1);
        if group_order > 1 && gcd(r, group_order) != 1 {
            return Err(Error::validation(format!(
                "r={r} is not a unit mod {group_order}"
            )));
        }
        Ok(SwanClass { group_order, r })
    }

    pub fn free(group_order: u64) -> Result<Self> {
        SwanClass::new(group_order, 1)
    }

    pub fn is_free(&self) -> bool {
        self.r == 1 % self.group_order.max(1)
    }
}

/// (I, r) tensor (I, s) = (I, rs).
pub fn swan_product(a: &SwanClass, b: &SwanClass) -> Result<SwanClass> {
    if a.group_order != b.group_order {
        return Err(Error::validation(format!(
            "Swan classes over different group orders: {} vs {}",
            a.group_order, b.group_order
        )));
    }
    let n = a.group_order as u128;
    SwanClass::new(a.group_order, (a.r as u128 * b.r as u128 % n) as u64)
}

/// Extension of scalars along a quotient of order M | N: (I, r) -> (I, r mod M).
pub fn induce_swan(a: &SwanClass, quotient_order: u64) -> Result<SwanClass> {
    if quotient_order == 0 || a.group_order % quotient_order != 0 {
        return Err(Error::validation(format!(
            "{} does not divide the group order {}",
            quotient_order, a.group_order
        )));
    }
    SwanClass::new(quotient_order, a.r % quotient_order)
}

/// Does (I, r) become free over the quotient by a central element of
/// augmentation `psi_augmentation`? Exactly when gcd(eps(psi), r) = 1.
/// (That the quotient ring is torsion-free is the caller's hypothesis.)
pub fn swan_trivializes_under(psi_augmentation: u64, r: u64) -> bool {
    gcd(psi_augmentation, r) == 1
}

/// Cancellation verdict for a representative of the finiteness obstruction.
#[derive(Debug, Clone, Serialize)]
pub struct CancellationVerdict {
    pub m_h: u64,
    pub cancellation: bool,
    /// True when the verdict comes for free from m_H = 0.
    pub eichler: bool,
    pub reason: String,
}

/// Cancellation holds for the stable class of the finiteness obstruction
/// exactly when m_H(G) <= 2; m_H = 0 is the Eichler case where all
/// projectives cancel.
pub fn cancellation_predicate(spec: &PeriodicGroupSpec) -> Result<CancellationVerdict> {
    let m = m_h(spec)?;
    let (cancellation, eichler, reason) = if m == 0 {
        (
            true,
            true,
            "m_H = 0: the rational group algebra has no quaternionic part, so all projectives cancel".to_string(),
        )
    } else if m <= 2 {
        (true, false, format!("m_H = {m} is at most 2"))
    } else {
        (false, false, format!("m_H = {m} exceeds 2"))
    };
    Ok(CancellationVerdict {
        m_h: m,
        cancellation,
        eichler,
        reason,
    })
}

/// A stable class as a fork: labelled minimal vertices plus an implicit
/// single vertex per higher grade, with permutations acting on the minimal
/// level only.
#[derive(Debug, Clone, Serialize)]
pub struct GradedStableClass {
    pub minimal_vertices: Vec<String>,
    /// Grade label of the minimal level (bookkeeping only).
    pub grade_offset: i64,
    /// Generating permutations, as index maps on `minimal_vertices`.
    pub actions: Vec<Vec<usize>>,
}

impl GradedStableClass {
    pub fn new(
        minimal_vertices: Vec<String>,
        grade_offset: i64,
        actions: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if minimal_vertices.is_empty() {
            return Err(Error::validation("a fork has at least one minimal vertex"));
        }
        let n = minimal_vertices.len();
        for perm in &actions {
            if perm.len() != n {
                return Err(Error::validation("action length mismatch"));
            }
            let mut seen = vec![false; n];
            for &i in perm {
                if i >= n || seen[i] {
                    return Err(Error::validation("action is not a permutation"));
                }
                seen[i] = true;
            }
        }
        Ok(GradedStableClass {
            minimal_vertices,
            grade_offset,
            actions,
        })
    }

    /// Orbits of the minimal vertices under the generated permutation
    /// group, each sorted, ordered by least element.
    pub fn orbit_partition(&self) -> Vec<Vec<usize>> {
        let n = self.minimal_vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for perm in &self.actions {
            for (i, &j) in perm.iter().enumerate() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let mut orbits: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = find(&mut parent, i);
            orbits.entry(r).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = orbits.into_values().collect();
        for o in &mut out {
            o.sort_unstable();
        }
        out.sort();
        out
    }
}

/// Cancellation for the fork: a single minimal vertex.
pub fn fork_cancellation(cls: &GradedStableClass) -> bool {
    cls.minimal_vertices.len() == 1
}

/// Cancellation after dividing by the action: a single orbit.
pub fn fork_cancellation_mod_action(cls: &GradedStableClass) -> bool {
    cls.orbit_partition().len() == 1
}

/// The certified counting bound derived from m_H.
#[derive(Debug, Clone)]
pub struct MinimalCountBound {
    pub m_h: u64,
    /// The quaternion quotient order parameter used: max(ceil(2 m_H/3), 6).
    pub n0: u64,
    pub class_set_bound: ClassSetBound,
    /// |Aut(Q_4 n0)| = 2 n0 phi(2 n0).
    pub aut_order: u64,
    /// Certified integer lower bound (at least 1).
    pub certified: BigUint,
    pub log_lower: f64,
}

/// Lower bound for the number of minimal vertices when m_H >= 3: the
/// class-set bound over Q_4n0 divided by the automorphism count.
pub fn n_lower_bound(m_h: u64) -> Result<MinimalCountBound> {
    if m_h < 3 {
        return Err(Error::validation(format!(
            "counting bound applies for m_H >= 3, got {m_h}"
        )));
    }
    let n0 = ((2 * m_h).div_ceil(3)).max(6);
    let class_set_bound = class_set_lower_bound(2 * n0)?;
    let aut_order = 2 * n0 * euler_phi(2 * n0);
    let scaled = class_set_bound
        .interval
        .scale(&Rat::new(BigInt::one(), BigInt::from(aut_order)));
    let c = ceil_rat(&scaled.lo);
    let certified = if c <= BigInt::one() {
        BigUint::one()
    } else {
        c.to_biguint().unwrap()
    };
    let log_lower = class_set_bound.log_lower - (aut_order as f64).ln();
    Ok(MinimalCountBound {
        m_h,
        n0,
        class_set_bound,
        aut_order,
        certified,
        log_lower,
    })
}

/// A recorded fact about a Swan subgroup or class group, kept as a table
/// (these are inputs from the literature, not computed).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SwanFact {
    pub group: &'static str,
    pub statement: &'static str,
}

/// Lookup of the recorded Swan-subgroup facts used by the predicates.
pub fn swan_fact(group: &str) -> Option<SwanFact> {
    const FACTS: [SwanFact; 6] = [
        SwanFact {
            group: "Q8",
            statement: "the class group equals the Swan subgroup",
        },
        SwanFact {
            group: "Q12",
            statement: "the Swan subgroup vanishes",
        },
        SwanFact {
            group: "Q16",
            statement: "the class group equals the Swan subgroup",
        },
        SwanFact {
            group: "Q28",
            statement: "the Swan subgroup vanishes and the class group has order 2",
        },
        SwanFact {
            group: "C23",
            statement: "the class group has order 3 and the Swan subgroup vanishes",
        },
        SwanFact {
            group: "Cp",
            statement: "the Swan subgroup of a cyclic group of prime order vanishes",
        },
    ];
    FACTS.iter().copied().find(|f| f.group == group)
}

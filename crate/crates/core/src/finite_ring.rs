//! Brute-force arithmetic in finite quotient rings F_p[x]/(f) and in 2x2
//! matrix rings over them: unit-group enumeration, double cosets
//! U1 \ R^x / U2, quaternionic norms, square-class partitions and the
//! induced j -> -j action.
//!
//! Everything is exhaustive enumeration: the ambient unit groups here top
//! out at |GL_2(F_9)| = 5760, so no structural group theory is needed.
//! All orderings are by a graded-lexicographic key on coefficient vectors,
//! which makes canonical representatives deterministic (and reproduces the
//! usual 1, 1+j, 1+2j, ... naming in the field cases).

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};

/// Residue of a polynomial mod (p, f): dense coefficients, length deg f.
pub type PolyElem = Vec<u64>;

/// The quotient ring F_p[x]/(f) for a monic nonconstant f.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientRing {
    pub p: u64,
    /// Monic modulus, lowest degree first, length deg+1.
    pub modulus: Vec<u64>,
}

impl QuotientRing {
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::validation(format!(
                "characteristic must be prime, got {p}"
            )));
        }
        if modulus.len() < 2 {
            return Err(Error::validation("modulus must be nonconstant"));
        }
        if modulus.last() != Some(&1) {
            return Err(Error::validation("modulus must be monic"));
        }
        let modulus = modulus.into_iter().map(|c| c % p).collect::<Vec<_>>();
        let mut modulus = modulus;
        *modulus.last_mut().unwrap() = 1;
        Ok(QuotientRing { p, modulus })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }

    pub fn zero(&self) -> PolyElem {
        vec![0; self.degree()]
    }

    pub fn one(&self) -> PolyElem {
        let mut e = self.zero();
        e[0] = 1 % self.p;
        e
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> PolyElem {
        // Reduce an arbitrary-length coefficient vector mod (p, f).
        let p = self.p;
        let d = self.degree();
        let mut work: Vec<u64> = coeffs.iter().map(|&c| c % p).collect();
        while work.len() > d {
            let top = work.pop().unwrap();
            if top != 0 {
                let k = work.len() - d;
                for i in 0..d {
                    let sub = top * self.modulus[i] % p;
                    let idx = k + i;
                    work[idx] = (work[idx] + p - sub) % p;
                }
            }
        }
        work.resize(d, 0);
        work
    }

    pub fn add(&self, a: &PolyElem, b: &PolyElem) -> PolyElem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn neg(&self, a: &PolyElem) -> PolyElem {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    pub fn mul(&self, a: &PolyElem, b: &PolyElem) -> PolyElem {
        let d = self.degree();
        let mut prod = vec![0u64; 2 * d];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        self.from_coeffs(&prod)
    }

    /// Inverse by the extended Euclidean algorithm in F_p[x]; None for
    /// non-units (gcd with the modulus nontrivial).
    pub fn inverse(&self, a: &PolyElem) -> Option<PolyElem> {
        let p = self.p;
        let trim = |v: &[u64]| -> Vec<u64> {
            let mut v = v.to_vec();
            while v.last() == Some(&0) {
                v.pop();
            }
            v
        };
        let mut r0 = trim(&self.modulus);
        let mut r1 = trim(a);
        let mut t0: Vec<u64> = vec![];
        let mut t1: Vec<u64> = vec![1];
        if r1.is_empty() {
            return None;
        }
        let inv_mod_p = |x: u64| arith::mod_inverse(x, p).expect("prime field");
        while !r1.is_empty() {
            // r0 = q * r1 + r
            let mut rem = r0.clone();
            let mut q = vec![0u64; rem.len().saturating_sub(r1.len()) + 1];
            let lead_inv = inv_mod_p(*r1.last().unwrap());
            while rem.len() >= r1.len() && !rem.is_empty() {
                let shift = rem.len() - r1.len();
                let c = rem.last().unwrap() * lead_inv % p;
                q[shift] = c;
                for (i, &rc) in r1.iter().enumerate() {
                    rem[shift + i] = (rem[shift + i] + p - c * rc % p) % p;
                }
                rem = trim(&rem);
                if rem.len() < r1.len() {
                    break;
                }
            }
            // t = t0 - q * t1
            let mut qt = vec![0u64; q.len() + t1.len()];
            for (i, &qc) in q.iter().enumerate() {
                if qc == 0 {
                    continue;
                }
                for (j, &tc) in t1.iter().enumerate() {
                    qt[i + j] = (qt[i + j] + qc * tc) % p;
                }
            }
            let n = qt.len().max(t0.len());
            let mut t = vec![0u64; n];
            for (i, &c) in t0.iter().enumerate() {
                t[i] = c;
            }
            for (i, &c) in qt.iter().enumerate() {
                t[i] = (t[i] + p - c) % p;
            }
            t0 = t1;
            t1 = trim(&t);
            r0 = r1;
            r1 = trim(&rem);
        }
        if r0.len() != 1 {
            return None; // gcd has positive degree
        }
        let scale = inv_mod_p(r0[0]);
        let mut out = vec![0u64; self.degree()];
        for (i, &c) in t0.iter().enumerate() {
            if i < out.len() {
                out[i] = c * scale % p;
            }
        }
        Some(out)
    }

    pub fn is_unit(&self, a: &PolyElem) -> bool {
        self.inverse(a).is_some()
    }

    pub fn pow(&self, a: &PolyElem, k: u64) -> PolyElem {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// All elements, in graded-lex order.
    pub fn elements(&self) -> Vec<PolyElem> {
        let d = self.degree();
        let mut out = Vec::with_capacity(self.size() as usize);
        let mut cur = vec![0u64; d];
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == d {
                    out.sort_by_key(|e| poly_key(e));
                    return out;
                }
                cur[i] += 1;
                if cur[i] < self.p {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// Human-readable label: "0", "3", "j", "1+2j" (x rendered as j).
    pub fn label(&self, e: &PolyElem) -> String {
        let mut parts = Vec::new();
        for (i, &c) in e.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => "j".to_string(),
                k => format!("j^{k}"),
            };
            if i == 0 {
                parts.push(format!("{c}"));
            } else if c == 1 {
                parts.push(var);
            } else {
                parts.push(format!("{c}{var}"));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

/// Graded-lex sort key: effective degree first, then coefficients from the
/// constant term up.
pub fn poly_key(e: &PolyElem) -> Vec<u64> {
    let deg = e.iter().rposition(|&c| c != 0).map_or(0, |i| i as u64);
    let mut key = Vec::with_capacity(e.len() + 1);
    key.push(deg);
    key.extend_from_slice(e);
    key
}

/// A 2x2 matrix over a QuotientRing, row major.
pub type Mat2 = [PolyElem; 4];

/// The ring M_2(F_p[x]/(f)); the base must be a field for the determinant
/// inversion used here (all our cases are).
#[derive(Debug, Clone)]
pub struct Mat2Ring {
    pub base: QuotientRing,
}

impl Mat2Ring {
    pub fn new(base: QuotientRing) -> Self {
        Mat2Ring { base }
    }

    pub fn one(&self) -> Mat2 {
        [
            self.base.one(),
            self.base.zero(),
            self.base.zero(),
            self.base.one(),
        ]
    }

    pub fn add(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        [
            self.base.add(&a[0], &b[0]),
            self.base.add(&a[1], &b[1]),
            self.base.add(&a[2], &b[2]),
            self.base.add(&a[3], &b[3]),
        ]
    }

    pub fn mul(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        let r = &self.base;
        [
            r.add(&r.mul(&a[0], &b[0]), &r.mul(&a[1], &b[2])),
            r.add(&r.mul(&a[0], &b[1]), &r.mul(&a[1], &b[3])),
            r.add(&r.mul(&a[2], &b[0]), &r.mul(&a[3], &b[2])),
            r.add(&r.mul(&a[2], &b[1]), &r.mul(&a[3], &b[3])),
        ]
    }

    pub fn det(&self, a: &Mat2) -> PolyElem {
        let r = &self.base;
        let ad = r.mul(&a[0], &a[3]);
        let bc = r.mul(&a[1], &a[2]);
        r.add(&ad, &r.neg(&bc))
    }

    pub fn inverse(&self, a: &Mat2) -> Option<Mat2> {
        let r = &self.base;
        let det_inv = r.inverse(&self.det(a))?;
        Some([
            r.mul(&a[3], &det_inv),
            r.mul(&r.neg(&a[1]), &det_inv),
            r.mul(&r.neg(&a[2]), &det_inv),
            r.mul(&a[0], &det_inv),
        ])
    }

    pub fn pow(&self, a: &Mat2, k: u64) -> Mat2 {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn label(&self, m: &Mat2) -> String {
        format!(
            "[[{},{}],[{},{}]]",
            self.base.label(&m[0]),
            self.base.label(&m[1]),
            self.base.label(&m[2]),
            self.base.label(&m[3])
        )
    }
}

pub fn mat2_key(m: &Mat2) -> Vec<u64> {
    let mut key = Vec::new();
    for e in m {
        key.extend(poly_key(e));
    }
    key
}

/// Shared interface for the two ambient-ring shapes.
pub trait FiniteRing {
    type Elem: Clone + Eq + std::hash::Hash + std::fmt::Debug;
    fn one(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Full unit list, sorted by the ring's canonical key.
    fn units(&self) -> Vec<Self::Elem>;
    fn key(&self, e: &Self::Elem) -> Vec<u64>;
    fn label(&self, e: &Self::Elem) -> String;
}

impl FiniteRing for QuotientRing {
    type Elem = PolyElem;

    fn one(&self) -> PolyElem {
        self.one()
    }

    fn mul(&self, a: &PolyElem, b: &PolyElem) -> PolyElem {
        self.mul(a, b)
    }

    fn inverse(&self, a: &PolyElem) -> Option<PolyElem> {
        self.inverse(a)
    }

    fn units(&self) -> Vec<PolyElem> {
        self.elements()
            .into_iter()
            .filter(|e| self.is_unit(e))
            .collect()
    }

    fn key(&self, e: &PolyElem) -> Vec<u64> {
        poly_key(e)
    }

    fn label(&self, e: &PolyElem) -> String {
        self.label(e)
    }
}

impl FiniteRing for Mat2Ring {
    type Elem = Mat2;

    fn one(&self) -> Mat2 {
        self.one()
    }

    fn mul(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        self.mul(a, b)
    }

    fn inverse(&self, a: &Mat2) -> Option<Mat2> {
        self.inverse(a)
    }

    fn units(&self) -> Vec<Mat2> {
        let elems = self.base.elements();
        let mut out = Vec::new();
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    for d in &elems {
                        let m: Mat2 = [a.clone(), b.clone(), c.clone(), d.clone()];
                        if self.base.is_unit(&self.det(&m)) {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out.sort_by_key(mat2_key);
        out
    }

    fn key(&self, e: &Mat2) -> Vec<u64> {
        mat2_key(e)
    }

    fn label(&self, e: &Mat2) -> String {
        self.label(e)
    }
}

/// A multiplicatively closed set of units with its generating set.
#[derive(Debug, Clone)]
pub struct UnitSubgroup<E> {
    pub generators: Vec<E>,
    /// Closure of the generators, sorted by the ring key.
    pub elements: Vec<E>,
}

/// Close a generating set of units under multiplication. Errors if any
/// generator is not a unit.
pub fn close_subgroup<R: FiniteRing>(ring: &R, gens: &[R::Elem]) -> Result<UnitSubgroup<R::Elem>> {
    for g in gens {
        if ring.inverse(g).is_none() {
            return Err(Error::validation(format!(
                "subgroup generator {} is not a unit",
                ring.label(g)
            )));
        }
    }
    let mut seen: HashSet<R::Elem> = HashSet::new();
    let mut queue = vec![ring.one()];
    seen.insert(ring.one());
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = ring.mul(&x, g);
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    let mut elements: Vec<R::Elem> = seen.into_iter().collect();
    elements.sort_by_key(|e| ring.key(e));
    Ok(UnitSubgroup {
        generators: gens.to_vec(),
        elements,
    })
}

/// The full unit group, enumerated by invertibility testing.
pub fn unit_group<R: FiniteRing>(ring: &R) -> UnitSubgroup<R::Elem> {
    UnitSubgroup {
        generators: Vec::new(),
        elements: ring.units(),
    }
}

/// One double coset: canonical representative (the key-least element) and
/// the full sorted element list.
#[derive(Debug, Clone)]
pub struct Coset<E> {
    pub rep: E,
    pub elements: Vec<E>,
}

/// The double coset space U1 \ R^x / U2.
#[derive(Debug, Clone)]
pub struct DoubleCosetSpace<E> {
    pub cosets: Vec<Coset<E>>,
    pub membership: HashMap<E, usize>,
    pub u1: UnitSubgroup<E>,
    pub u2: UnitSubgroup<E>,
    pub unit_count: usize,
}

impl<E: Clone + Eq + std::hash::Hash> DoubleCosetSpace<E> {
    pub fn coset_of(&self, e: &E) -> Option<usize> {
        self.membership.get(e).copied()
    }
}

/// Exhaustive double-coset computation by orbit search: multiply by the U1
/// generators on the left and the U2 generators on the right (positive
/// words suffice in a finite group).
pub fn double_cosets<R: FiniteRing>(
    ring: &R,
    u1_gens: &[R::Elem],
    u2_gens: &[R::Elem],
) -> Result<DoubleCosetSpace<R::Elem>> {
    let u1 = close_subgroup(ring, u1_gens)?;
    let u2 = close_subgroup(ring, u2_gens)?;
    let units = ring.units();
    let unit_count = units.len();
    let mut membership: HashMap<R::Elem, usize> = HashMap::with_capacity(unit_count);
    let mut cosets: Vec<Coset<R::Elem>> = Vec::new();
    for u in &units {
        if membership.contains_key(u) {
            continue;
        }
        let idx = cosets.len();
        let mut orbit: Vec<R::Elem> = Vec::new();
        let mut queue = vec![u.clone()];
        membership.insert(u.clone(), idx);
        while let Some(x) = queue.pop() {
            orbit.push(x.clone());
            for g in &u1.generators {
                let y = ring.mul(g, &x);
                if !membership.contains_key(&y) {
                    membership.insert(y.clone(), idx);
                    queue.push(y);
                }
            }
            for g in &u2.generators {
                let y = ring.mul(&x, g);
                if !membership.contains_key(&y) {
                    membership.insert(y.clone(), idx);
                    queue.push(y);
                }
            }
        }
        orbit.sort_by_key(|e| ring.key(e));
        cosets.push(Coset {
            rep: orbit[0].clone(),
            elements: orbit,
        });
    }
    // Units are processed in sorted order, so coset reps are already the
    // key-least elements and cosets are ordered by their reps.
    let total: usize = cosets.iter().map(|c| c.elements.len()).sum();
    if total != unit_count {
        return Err(Error::internal(
            "double cosets do not partition the unit group",
        ));
    }
    Ok(DoubleCosetSpace {
        cosets,
        membership,
        u1,
        u2,
        unit_count,
    })
}

/// Quaternionic norm N(a + bj) = a^2 + b^2 on F_p[x]/(x^2+1).
pub fn quaternion_norm(ring: &QuotientRing, e: &PolyElem) -> Result<u64> {
    if ring.modulus != vec![1, 0, 1] {
        return Err(Error::validation(
            "quaternion norm is defined on F_p[x]/(x^2+1) only",
        ));
    }
    let (a, b) = (e[0], e[1]);
    Ok((a * a + b * b) % ring.p)
}

/// Square-class split of the coset representatives by their norms.
#[derive(Debug, Clone, Serialize)]
pub struct NormSplit {
    /// Labels of representatives with square norm (the stably free side).
    pub square_class: Vec<String>,
    pub nonsquare_class: Vec<String>,
    /// |F_p^x / <squares, norms of subgroup generators>|.
    pub class_fiber_order: u64,
}

/// Partition coset representatives by whether N(rep) is a square mod p.
///
/// Well-definedness needs every U1/U2 generator to have square norm; the
/// check runs first and a violation aborts with an error rather than
/// returning a partition that is not constant on cosets.
pub fn classify_by_norm_square_class(
    ring: &QuotientRing,
    space: &DoubleCosetSpace<PolyElem>,
) -> Result<NormSplit> {
    let p = ring.p;
    let squares: BTreeSet<u64> = (1..p).map(|x| x * x % p).collect();
    for g in space.u1.generators.iter().chain(&space.u2.generators) {
        let n = quaternion_norm(ring, g)?;
        if !squares.contains(&n) {
            return Err(Error::validation(format!(
                "norm of generator {} is {n}, not a square mod {p}; partition would not be constant on cosets",
                ring.label(g)
            )));
        }
    }
    let mut square_class = Vec::new();
    let mut nonsquare_class = Vec::new();
    for c in &space.cosets {
        let n = quaternion_norm(ring, &c.rep)?;
        if squares.contains(&n) {
            square_class.push(ring.label(&c.rep));
        } else {
            nonsquare_class.push(ring.label(&c.rep));
        }
    }
    // The fibre of the class group: F_p^x modulo squares and generator
    // norms (the norms are squares by the precondition, so this is just
    // the square-class group).
    let mut gen_set: BTreeSet<u64> = squares.clone();
    for g in space.u1.generators.iter().chain(&space.u2.generators) {
        gen_set.insert(quaternion_norm(ring, g)?);
    }
    let subgroup = close_units_mod_p(p, &gen_set);
    let class_fiber_order = (p - 1) / subgroup.len() as u64;
    Ok(NormSplit {
        square_class,
        nonsquare_class,
        class_fiber_order,
    })
}

fn close_units_mod_p(p: u64, gens: &BTreeSet<u64>) -> BTreeSet<u64> {
    let mut seen: BTreeSet<u64> = [1 % p].into_iter().collect();
    let mut queue: Vec<u64> = vec![1 % p];
    while let Some(x) = queue.pop() {
        for &g in gens {
            let y = x * g % p;
            if seen.insert(y) {
                queue.push(y);
            }
        }
    }
    seen
}

/// The j -> (-1)^sign j ring map family on F_p[x]/(f): the identity, or
/// the sign flip x -> -x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JSignAction {
    Identity,
    NegateJ,
}

impl JSignAction {
    pub fn apply(&self, ring: &QuotientRing, e: &PolyElem) -> PolyElem {
        match self {
            JSignAction::Identity => e.clone(),
            JSignAction::NegateJ => e
                .iter()
                .enumerate()
                .map(|(i, &c)| if i % 2 == 1 { (ring.p - c) % ring.p } else { c })
                .collect(),
        }
    }

    /// x -> -x is a ring automorphism iff f(-x) = 0 mod f.
    pub fn validate(&self, ring: &QuotientRing) -> Result<()> {
        if matches!(self, JSignAction::Identity) {
            return Ok(());
        }
        let p = ring.p;
        let flipped: Vec<u64> = ring
            .modulus
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 1 { (p - c) % p } else { c })
            .collect();
        // f(-x) must be +-f exactly (degree is preserved).
        let neg: Vec<u64> = ring.modulus.iter().map(|&c| (p - c) % p).collect();
        if flipped != ring.modulus && flipped != neg {
            return Err(Error::validation(
                "x -> -x does not preserve the modulus; not a ring automorphism",
            ));
        }
        Ok(())
    }
}

/// Orbit partition of the coset representatives under the action (an
/// involution on the coset space).
pub fn automorphism_orbit(
    ring: &QuotientRing,
    space: &DoubleCosetSpace<PolyElem>,
    action: JSignAction,
) -> Result<Vec<Vec<usize>>> {
    action.validate(ring)?;
    let mut image_of = Vec::with_capacity(space.cosets.len());
    for c in &space.cosets {
        let img = action.apply(ring, &c.rep);
        let idx = space
            .coset_of(&img)
            .ok_or_else(|| Error::internal("action image left the unit group"))?;
        image_of.push(idx);
    }
    let mut seen = vec![false; space.cosets.len()];
    let mut orbits = Vec::new();
    for i in 0..space.cosets.len() {
        if seen[i] {
            continue;
        }
        let mut orbit = vec![i];
        seen[i] = true;
        let mut j = image_of[i];
        while !seen[j] {
            seen[j] = true;
            orbit.push(j);
            j = image_of[j];
        }
        orbits.push(orbit);
    }
    Ok(orbits)
}

/// Report of a commutative fibre computation (the order-28 chain and the
/// {2,18} chain).
#[derive(Debug, Clone, Serialize)]
pub struct FibreReport {
    pub name: String,
    pub unit_count: usize,
    pub coset_reps: Vec<String>,
    pub coset_sizes: Vec<usize>,
    pub norms: std::collections::BTreeMap<String, u64>,
    /// Cosets in the square norm class (the stably free side) and the rest.
    pub square_class: Vec<String>,
    pub nonsquare_class: Vec<String>,
    pub class_group_order: u64,
    /// Does the stably free class contain exactly one coset?
    pub sfc: bool,
    pub noncancellation: bool,
    /// Orbits of coset representatives under j -> -j, when the fixture
    /// names an action.
    pub orbits: Option<Vec<Vec<String>>>,
    /// Class sizes keyed "trivial"/"nontrivial" before and after the action.
    pub minimal_class_sizes_pre: std::collections::BTreeMap<String, usize>,
    pub minimal_class_sizes_post: Option<std::collections::BTreeMap<String, usize>>,
    /// Non-cancellation of the nontrivial class after dividing by the
    /// action (None without an action).
    pub noncancellation_mod_aut: Option<bool>,
    /// Explicit generator strings attached to the nontrivial classes.
    pub ideal_labels: std::collections::BTreeMap<String, String>,
}

fn chain_err(name: &str, what: impl std::fmt::Display) -> Error {
    Error::internal(format!("{name} fibre chain deviates: {what}"))
}

/// Run a commutative fixture end to end: units, double cosets, norms,
/// square classes, and (when requested) the j -> -j orbit structure.
pub fn fibre_pipeline(fixture: &crate::fixtures::MilnorFixture) -> Result<FibreReport> {
    if fixture.matrix_ring {
        return Err(Error::validation(
            "fibre_pipeline handles commutative fixtures; use matrix_fibre_pipeline",
        ));
    }
    let ring = QuotientRing::new(fixture.p, fixture.modulus_coeffs.clone())?;
    let gens = |specs: &[crate::fixtures::GeneratorSpec]| -> Result<Vec<PolyElem>> {
        specs
            .iter()
            .map(|g| match g {
                crate::fixtures::GeneratorSpec::Coeffs(c) => Ok(ring.from_coeffs(c)),
                crate::fixtures::GeneratorSpec::Named(n) => Err(Error::validation(format!(
                    "named generator {n:?} in a commutative fixture"
                ))),
            })
            .collect()
    };
    let u1 = gens(&fixture.u1_generators)?;
    let u2 = gens(&fixture.u2_generators)?;
    let space = double_cosets(&ring, &u1, &u2)?;

    let coset_reps: Vec<String> = space.cosets.iter().map(|c| ring.label(&c.rep)).collect();
    if let Some(expected) = &fixture.expected_cosets {
        let want: Vec<String> = expected
            .iter()
            .map(|c| ring.label(&ring.from_coeffs(c)))
            .collect();
        if coset_reps != want {
            return Err(chain_err(
                &fixture.name,
                format!("cosets {coset_reps:?}, expected {want:?}"),
            ));
        }
    }

    let mut norms = std::collections::BTreeMap::new();
    for c in &space.cosets {
        norms.insert(ring.label(&c.rep), quaternion_norm(&ring, &c.rep)?);
    }
    let split = classify_by_norm_square_class(&ring, &space)?;
    let sfc = split.square_class.len() == 1;

    let mut pre = std::collections::BTreeMap::new();
    pre.insert("trivial".to_string(), split.square_class.len());
    pre.insert("nontrivial".to_string(), split.nonsquare_class.len());

    let mut orbits_named = None;
    let mut post = None;
    let mut mod_aut = None;
    if let Some(action) = &fixture.action {
        let action = match action.as_str() {
            "negate_j" => JSignAction::NegateJ,
            "identity" => JSignAction::Identity,
            other => {
                return Err(Error::validation(format!(
                    "unknown action {other:?} in fixture {}",
                    fixture.name
                )))
            }
        };
        let orbits = automorphism_orbit(&ring, &space, action)?;
        let squares: std::collections::BTreeSet<&String> = split.square_class.iter().collect();
        let mut trivial_orbits = 0usize;
        let mut nontrivial_orbits = 0usize;
        for orbit in &orbits {
            let rep_label = ring.label(&space.cosets[orbit[0]].rep);
            if squares.contains(&rep_label) {
                trivial_orbits += 1;
            } else {
                nontrivial_orbits += 1;
            }
        }
        let mut p = std::collections::BTreeMap::new();
        p.insert("trivial".to_string(), trivial_orbits);
        p.insert("nontrivial".to_string(), nontrivial_orbits);
        post = Some(p);
        mod_aut = Some(nontrivial_orbits > 1);
        orbits_named = Some(
            orbits
                .iter()
                .map(|o| {
                    o.iter()
                        .map(|&i| ring.label(&space.cosets[i].rep))
                        .collect()
                })
                .collect(),
        );
    }

    Ok(FibreReport {
        name: fixture.name.clone(),
        unit_count: space.unit_count,
        coset_reps,
        coset_sizes: space.cosets.iter().map(|c| c.elements.len()).collect(),
        norms,
        square_class: split.square_class.clone(),
        nonsquare_class: split.nonsquare_class.clone(),
        class_group_order: split.class_fiber_order,
        sfc,
        noncancellation: split.square_class.len() > 1,
        orbits: orbits_named,
        minimal_class_sizes_pre: pre,
        minimal_class_sizes_post: post,
        noncancellation_mod_aut: mod_aut,
        ideal_labels: fixture.ideal_labels.clone().unwrap_or_default(),
    })
}

/// The full order-28 chain, asserting every step: 48 units, the four cosets
/// 1, 1+j, 1+2j, 1+4j, the norm values, the square-class split, class group
/// of order 2, and the orbit collapse of the nontrivial pair under j -> -j.
pub fn q28_pipeline(fixtures: &crate::fixtures::FixtureSet) -> Result<FibreReport> {
    let report = fibre_pipeline(fixtures.milnor("q28")?)?;
    let name = &report.name;
    if report.unit_count != 48 {
        return Err(chain_err(name, format!("unit count {}", report.unit_count)));
    }
    if report.coset_reps != ["1", "1+j", "1+2j", "1+4j"] {
        return Err(chain_err(name, format!("cosets {:?}", report.coset_reps)));
    }
    for (label, want) in [("1", 1u64), ("1+j", 2), ("1+2j", 5), ("1+4j", 3)] {
        if report.norms.get(label) != Some(&want) {
            return Err(chain_err(name, format!("norm of {label}")));
        }
    }
    if report.square_class != ["1", "1+j"] || report.nonsquare_class != ["1+2j", "1+4j"] {
        return Err(chain_err(name, "square-class split"));
    }
    if report.class_group_order != 2 {
        return Err(chain_err(name, "class group order"));
    }
    if !report.noncancellation || report.noncancellation_mod_aut != Some(false) {
        return Err(chain_err(name, "cancellation verdict pair"));
    }
    let post = report.minimal_class_sizes_post.as_ref().unwrap();
    if post.get("trivial") != Some(&2) || post.get("nontrivial") != Some(&1) {
        return Err(chain_err(name, "orbit counts"));
    }
    if report.ideal_labels.get("1+2j").map(String::as_str) != Some("(1+2y,1+x)")
        || report.ideal_labels.get("1+4j").map(String::as_str) != Some("(1+4y,1+x)")
    {
        return Err(chain_err(name, "ideal labels"));
    }
    Ok(report)
}

/// The {2,18} chain: exactly two cosets 1 and 1+j, and a class-group fibre
/// of matching size 2, which forces stably free cancellation.
pub fn l218_pipeline(fixtures: &crate::fixtures::FixtureSet) -> Result<FibreReport> {
    let report = fibre_pipeline(fixtures.milnor("l218")?)?;
    let name = &report.name;
    if report.unit_count != 8 {
        return Err(chain_err(name, format!("unit count {}", report.unit_count)));
    }
    if report.coset_reps != ["1", "1+j"] {
        return Err(chain_err(name, format!("cosets {:?}", report.coset_reps)));
    }
    if report.class_group_order != report.coset_reps.len() as u64 {
        return Err(chain_err(name, "fibre sizes do not match"));
    }
    if !report.sfc {
        return Err(chain_err(name, "stably free cancellation not forced"));
    }
    Ok(report)
}

/// Report of the matrix fibre computation for the {10,30} square.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixFibreReport {
    pub name: String,
    pub unit_count: usize,
    pub coset_count: usize,
    pub identity_rep: String,
    pub one_plus_j_rep: String,
    /// The decisive fact: [1] and [1+j] lie in different double cosets.
    pub classes_distinct: bool,
    /// |F_9^x| / |subgroup generated by the determinants of the generators|.
    pub k1_fiber_order: u64,
    pub u1_order: usize,
    pub u2_order: usize,
}

/// Resolve a symbolic generator for the M_2(F_9) fixture.
fn resolve_matrix_generator(ring: &Mat2Ring, name: &str) -> Result<Mat2> {
    let b = &ring.base;
    let zero = b.zero();
    let one = b.one();
    let minus_one = b.neg(&one);
    let i = b.from_coeffs(&[0, 1]);
    let trace = b.from_coeffs(&[2, 2]); // image of the golden ratio (1+sqrt5)/2
    let zeta: Mat2 = [zero.clone(), minus_one, one.clone(), trace.clone()];
    let j: Mat2 = [zero.clone(), i.clone(), i, zero.clone()];
    match name {
        "zeta" => Ok(zeta),
        "j" => Ok(j),
        "golden" => Ok([trace.clone(), zero.clone(), zero, trace]),
        "one_plus_zeta" => Ok(ring.add(&ring.one(), &zeta)),
        _ => {
            if let Some(k) = name.strip_prefix("one_minus_zeta_pow:") {
                let k: u64 = k
                    .parse()
                    .map_err(|_| Error::validation(format!("bad generator name {name:?}")))?;
                let zk = ring.pow(&zeta, k);
                let neg = [
                    b.neg(&zk[0]),
                    b.neg(&zk[1]),
                    b.neg(&zk[2]),
                    b.neg(&zk[3]),
                ];
                Ok(ring.add(&ring.one(), &neg))
            } else {
                Err(Error::validation(format!(
                    "unknown matrix generator {name:?}"
                )))
            }
        }
    }
}

/// The {10,30} chain over M_2(F_9): enumerate GL_2(F_9), close the two
/// unit-group images, and verify [1] != [1+j] in the double-coset space.
pub fn l1030_pipeline(fixtures: &crate::fixtures::FixtureSet) -> Result<MatrixFibreReport> {
    let fixture = fixtures.milnor("l1030")?;
    if !fixture.matrix_ring {
        return Err(Error::validation("l1030 fixture must be a matrix ring"));
    }
    let base = QuotientRing::new(fixture.p, fixture.modulus_coeffs.clone())?;
    let ring = Mat2Ring::new(base);

    // Consistency of the model: zeta has order 10, j^2 = -1 and
    // j zeta j^{-1} = zeta^{-1}.
    let zeta = resolve_matrix_generator(&ring, "zeta")?;
    let j = resolve_matrix_generator(&ring, "j")?;
    let minus_one: Mat2 = {
        let b = &ring.base;
        let m = b.neg(&b.one());
        [m.clone(), b.zero(), b.zero(), m]
    };
    if ring.pow(&zeta, 10) != ring.one() || ring.pow(&zeta, 5) == ring.one() {
        return Err(Error::internal("zeta image does not have order 10"));
    }
    if ring.mul(&j, &j) != minus_one {
        return Err(Error::internal("j image does not square to -1"));
    }
    let jzj = ring.mul(&ring.mul(&j, &zeta), &ring.inverse(&j).unwrap());
    if jzj != ring.inverse(&zeta).unwrap() {
        return Err(Error::internal("j does not invert zeta"));
    }

    let resolve_all = |specs: &[crate::fixtures::GeneratorSpec]| -> Result<Vec<Mat2>> {
        specs
            .iter()
            .map(|g| match g {
                crate::fixtures::GeneratorSpec::Named(n) => resolve_matrix_generator(&ring, n),
                crate::fixtures::GeneratorSpec::Coeffs(_) => Err(Error::validation(
                    "matrix fixture generators must be named",
                )),
            })
            .collect()
    };
    let u1 = resolve_all(&fixture.u1_generators)?;
    let u2 = resolve_all(&fixture.u2_generators)?;
    let space = double_cosets(&ring, &u1, &u2)?;
    if space.unit_count != 5760 {
        return Err(Error::internal(format!(
            "|GL_2(F_9)| should be 5760, got {}",
            space.unit_count
        )));
    }

    let one = ring.one();
    let one_plus_j = ring.add(&one, &j);
    let c1 = space
        .coset_of(&one)
        .ok_or_else(|| Error::internal("identity missing from cosets"))?;
    let c2 = space
        .coset_of(&one_plus_j)
        .ok_or_else(|| Error::internal("1+j missing from cosets"))?;

    // K_1-level fibre: F_9^x modulo the determinants of all generators.
    let mut dets: Vec<PolyElem> = Vec::new();
    for g in u1.iter().chain(&u2) {
        dets.push(ring.det(g));
    }
    let base_units = ring.base.units();
    let det_subgroup = close_subgroup(&ring.base, &dets)?;
    let k1_fiber_order = (base_units.len() / det_subgroup.elements.len()) as u64;

    Ok(MatrixFibreReport {
        name: fixture.name.clone(),
        unit_count: space.unit_count,
        coset_count: space.cosets.len(),
        identity_rep: ring.label(&space.cosets[c1].rep),
        one_plus_j_rep: ring.label(&space.cosets[c2].rep),
        classes_distinct: c1 != c2,
        k1_fiber_order,
        u1_order: space.u1.elements.len(),
        u2_order: space.u2.elements.len(),
    })
}

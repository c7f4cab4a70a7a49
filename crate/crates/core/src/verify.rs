//! The built-in verification suite: every reference value and structural
//! identity the toolkit is supposed to reproduce, run as named checks with
//! one pass/fail result each.
//!
//! The CLI exposes this as `verify-paper`; checks can be filtered by
//! substring and run in parallel (results are merged in a fixed order
//! either way).

use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::fixtures::FixtureSet;
use crate::rational::format_rat;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

/// Identifiers of all checks, in execution order.
pub fn check_ids() -> Vec<&'static str> {
    vec![
        "ei-constants",
        "ei-numerator-obstruction",
        "mass-fixtures",
        "classify-types",
        "mh-wedderburn",
        "cyclotomic-products",
        "disc-oracle",
        "sfc-spot",
        "sfc-exhaustive",
        "sfc-witnesses",
        "milnor-q28",
        "milnor-l218",
        "milnor-l1030",
        "swan-group",
        "ambiguous-class-number",
        "bound-shape",
        "bound-monotone",
        "aut-group",
        "milgram-criteria",
        "defect-table",
        "fork-q28",
    ]
}

fn run_check(id: &str, fixtures: &FixtureSet) -> Result<String> {
    match id {
        "ei-constants" => {
            for (m_str, want) in &fixtures.reference.ei {
                let m: u64 = m_str
                    .parse()
                    .map_err(|_| Error::FixtureRequired(format!("bad ei key {m_str:?}")))?;
                let got = format_rat(&crate::mass_formula::eichler_constant(m)?);
                if &got != want {
                    return Err(Error::internal(format!(
                        "ei({m}) = {got}, reference says {want}"
                    )));
                }
            }
            Ok(format!(
                "{} Eichler constants match exactly",
                fixtures.reference.ei.len()
            ))
        }
        "ei-numerator-obstruction" => {
            for &m in &fixtures.reference.numerator_not_power_of_two {
                if crate::mass_formula::numerator_power_of_two_test(m)? {
                    return Err(Error::internal(format!(
                        "numerator of ei({m}) unexpectedly a power of two"
                    )));
                }
            }
            if !crate::mass_formula::numerator_power_of_two_test(42)? {
                return Err(Error::internal("numerator of ei(42) should be 1"));
            }
            Ok("numerator obstruction verdicts match".into())
        }
        "mass-fixtures" => {
            for (&m, fx) in &fixtures.fields {
                let mv = crate::mass_formula::mass_class_set(m, fx.h_k, &fx.ramified_norms)?;
                let product = mv.eichler_constant.clone()
                    * crate::rational::Rat::from_integer(mv.class_number_factor.into())
                    * mv.ramification_factor.clone();
                if mv.value != product {
                    return Err(Error::internal(format!(
                        "mass decomposition does not multiply back at m={m}"
                    )));
                }
            }
            Ok(format!("{} mass fixtures consistent", fixtures.fields.len()))
        }
        "classify-types" => {
            use crate::periodic_groups::{classify_type, m_h, GroupType, PeriodicGroupSpec};
            let cases: [(PeriodicGroupSpec, GroupType, Option<u64>); 6] = [
                (
                    PeriodicGroupSpec::Quaternion { order: 28 },
                    GroupType::I,
                    Some(3),
                ),
                (
                    PeriodicGroupSpec::Quaternion { order: 8 },
                    GroupType::IIa,
                    Some(1),
                ),
                (
                    PeriodicGroupSpec::Quaternion { order: 16 },
                    GroupType::IIb,
                    Some(2),
                ),
                (PeriodicGroupSpec::SL2 { p: 7 }, GroupType::Vb, Some(0)),
                (PeriodicGroupSpec::SL2 { p: 5 }, GroupType::Va, Some(2)),
                (PeriodicGroupSpec::TL2 { p: 5 }, GroupType::VI, Some(0)),
            ];
            for (spec, want_type, want_mh) in cases {
                let ty = classify_type(&spec)?;
                if ty != want_type {
                    return Err(Error::internal(format!("{spec:?} classified {ty}")));
                }
                if let Some(want) = want_mh {
                    let got = m_h(&spec)?;
                    if got != want {
                        return Err(Error::internal(format!("m_H({spec:?}) = {got}")));
                    }
                }
            }
            Ok("type table and m_H values match".into())
        }
        "mh-wedderburn" => {
            for n in 2..=200u64 {
                let wedderburn: u64 = arith::divisors(2 * n)
                    .into_iter()
                    .filter(|&d| d >= 3 && n % d != 0)
                    .map(|d| arith::euler_phi(d) / 2)
                    .sum();
                if wedderburn != n / 2 {
                    return Err(Error::internal(format!("component count differs at n={n}")));
                }
            }
            Ok("floor(n/2) equals the quaternionic component count for n <= 200".into())
        }
        "cyclotomic-products" => {
            for n in 1..=200u64 {
                let mut prod = crate::poly::IPoly::from_i64(&[1]);
                for d in arith::divisors(n) {
                    prod = prod.mul(&crate::poly::cyclotomic(d));
                }
                if prod != crate::poly::IPoly::x_pow_minus_one(n) {
                    return Err(Error::internal(format!(
                        "cyclotomic product fails at n={n}"
                    )));
                }
            }
            Ok("prod of cyclotomics recovers x^n - 1 for n <= 200".into())
        }
        "disc-oracle" => {
            let rows = crate::fields::disc_agreement_sweep(100, false)?;
            for (m, want) in [(5u64, 5u64), (8, 8), (12, 12)] {
                let row = rows.iter().find(|r| r.0 == m).unwrap();
                if row.1 != num_bigint::BigUint::from(want) || row.2 != num_bigint::BigUint::from(want)
                {
                    return Err(Error::internal(format!(
                        "quadratic discriminant mismatch at m={m}"
                    )));
                }
            }
            Ok(format!(
                "field discriminants agree with the polynomial oracle for {} conductors",
                rows.len()
            ))
        }
        "sfc-spot" => {
            for indices in &fixtures.reference.sfc_true {
                let spec = crate::orders::validate_order_spec(indices)?;
                if !crate::orders::has_sfc(&spec)?.verdict {
                    return Err(Error::internal(format!("{indices:?} should cancel")));
                }
            }
            for indices in &fixtures.reference.sfc_false {
                let spec = crate::orders::validate_order_spec(indices)?;
                if crate::orders::has_sfc(&spec)?.verdict {
                    return Err(Error::internal(format!("{indices:?} should not cancel")));
                }
            }
            Ok(format!(
                "{} positive and {} negative spot checks",
                fixtures.reference.sfc_true.len(),
                fixtures.reference.sfc_false.len()
            ))
        }
        "sfc-exhaustive" => {
            let rows = crate::orders::sfc_survey(42, false)?;
            let count = rows.len();
            for (indices, verdict) in rows {
                if verdict != crate::orders::in_sfc_list_componentwise(&indices)? {
                    return Err(Error::internal(format!(
                        "classifier and list disagree at {indices:?}"
                    )));
                }
            }
            Ok(format!("procedure matches the literal list on {count} index sets"))
        }
        "sfc-witnesses" => {
            for n in 6..=42u64 {
                let w = crate::orders::q4n_noncancellation_witness(n)?;
                if crate::orders::has_sfc(&w)?.verdict {
                    return Err(Error::internal(format!("witness for n={n} cancels")));
                }
            }
            Ok("non-cancellation witnesses verified for 6 <= n <= 42".into())
        }
        "milnor-q28" => {
            let report = crate::finite_ring::q28_pipeline(fixtures)?;
            if report.coset_reps != fixtures.reference.q28_cosets {
                return Err(Error::internal("coset representatives differ"));
            }
            for (label, want) in &fixtures.reference.q28_norms {
                if report.norms.get(label) != Some(want) {
                    return Err(Error::internal(format!("norm of {label} differs")));
                }
            }
            if report.class_group_order != fixtures.reference.q28_class_group_order {
                return Err(Error::internal("class group order differs"));
            }
            Ok("order-28 fibre chain reproduced".into())
        }
        "milnor-l218" => {
            let report = crate::finite_ring::l218_pipeline(fixtures)?;
            if report.coset_reps != fixtures.reference.l218_cosets {
                return Err(Error::internal("coset representatives differ"));
            }
            Ok("{2,18} fibre chain reproduced".into())
        }
        "milnor-l1030" => {
            let report = crate::finite_ring::l1030_pipeline(fixtures)?;
            if !report.classes_distinct {
                return Err(Error::internal("[1] and [1+j] merged"));
            }
            Ok(format!(
                "GL_2(F_9) fibre has {} double cosets with [1] != [1+j]",
                report.coset_count
            ))
        }
        "swan-group" => {
            for n in 2..=100u64 {
                for &r in arith::units(n).iter() {
                    for &s in arith::units(n).iter() {
                        let prod = crate::swan::swan_product(
                            &crate::swan::SwanClass::new(n, r)?,
                            &crate::swan::SwanClass::new(n, s)?,
                        )?;
                        if prod.r != r * s % n {
                            return Err(Error::internal(format!("product off at N={n}")));
                        }
                    }
                }
                for m in arith::divisors(n) {
                    if m == 1 {
                        continue;
                    }
                    for &r in arith::units(n).iter() {
                        let a = crate::swan::SwanClass::new(n, r)?;
                        let ind = crate::swan::induce_swan(&a, m)?;
                        if ind.r != r % m {
                            return Err(Error::internal(format!(
                                "induction off at N={n}, M={m}"
                            )));
                        }
                    }
                }
            }
            Ok("Swan classes form (Z/N)^x with homomorphic induction, N <= 100".into())
        }
        "ambiguous-class-number" => {
            for p in (3..=100u64).filter(|&p| arith::is_prime(p)) {
                if crate::mass_formula::ambiguous_class_number(p)? != 1 {
                    return Err(Error::internal(format!("ambiguous class number at p={p}")));
                }
            }
            Ok("ambiguous class number is 1 for all odd primes up to 100".into())
        }
        "bound-shape" => {
            let fit = crate::mass_formula::bound_shape_fit(50, 500, false)?;
            if !fit.fitted_c.is_finite() || fit.fitted_c > 10.0 {
                return Err(Error::internal(format!(
                    "shape constant blew up: {}",
                    fit.fitted_c
                )));
            }
            Ok(format!(
                "shape inequality holds on 50..=500 with C = {:.3}",
                fit.fitted_c
            ))
        }
        "bound-monotone" => {
            for chain in [[40u64, 80, 160, 320], [50, 100, 200, 400]] {
                let mut prev = f64::NEG_INFINITY;
                for m_h in chain {
                    let b = crate::swan::n_lower_bound(m_h)?;
                    if b.log_lower <= prev {
                        return Err(Error::internal(format!(
                            "counting bound not monotone at m_H={m_h}"
                        )));
                    }
                    prev = b.log_lower;
                }
            }
            Ok("counting bound monotone along doubling chains".into())
        }
        "aut-group" => {
            let all = crate::periodic_groups::aut_enumerate(7)?;
            if all.len() != 84 {
                return Err(Error::internal(format!("|Aut(Q_28)| = {}", all.len())));
            }
            let id = crate::periodic_groups::AutQ4n::identity(7)?;
            for t in &all {
                if t.compose(&t.inverse())? != id {
                    return Err(Error::internal("inverse law fails"));
                }
            }
            Ok("automorphism group of Q_28 has order 84 with valid inverses".into())
        }
        "milgram-criteria" => {
            use crate::periodic_groups::{milgram_nonvanishing, PeriodicGroupSpec};
            let t1 = milgram_nonvanishing(&PeriodicGroupSpec::QFamily {
                n_exp: 3,
                a: 1,
                b: 3,
                c: 7,
            })?;
            let t2 = milgram_nonvanishing(&PeriodicGroupSpec::QFamily {
                n_exp: 4,
                a: 1,
                b: 3,
                c: 1,
            })?;
            let f1 = milgram_nonvanishing(&PeriodicGroupSpec::QFamily {
                n_exp: 4,
                a: 1,
                b: 7,
                c: 1,
            })?;
            if !t1.nonvanishing || !t2.nonvanishing || f1.nonvanishing {
                return Err(Error::internal("criterion verdicts off"));
            }
            Ok("non-vanishing criterion verdicts match".into())
        }
        "defect-table" => {
            use crate::orders::{defect_trivial, validate_order_spec, DefectTriviality};
            let rows = [
                (vec![30u64], DefectTriviality::Trivial),
                (vec![2, 14], DefectTriviality::Nontrivial),
                (vec![2, 10, 18], DefectTriviality::Unknown),
                (vec![6, 42], DefectTriviality::Trivial),
            ];
            for (indices, want) in rows {
                if defect_trivial(&validate_order_spec(&indices)?) != want {
                    return Err(Error::internal(format!("defect row {indices:?}")));
                }
            }
            Ok("defect-group table matches".into())
        }
        "fork-q28" => {
            use crate::swan::{
                fork_cancellation, fork_cancellation_mod_action, GradedStableClass,
            };
            let nontrivial = GradedStableClass::new(
                vec!["1+2j".into(), "1+4j".into()],
                0,
                vec![vec![1, 0]],
            )?;
            let trivial =
                GradedStableClass::new(vec!["1".into(), "1+j".into()], 0, vec![vec![0, 1]])?;
            let ok = !fork_cancellation(&nontrivial)
                && fork_cancellation_mod_action(&nontrivial)
                && !fork_cancellation(&trivial)
                && !fork_cancellation_mod_action(&trivial);
            if !ok {
                return Err(Error::internal("fork separation fails"));
            }
            Ok("fork cancellation separation reproduced".into())
        }
        other => Err(Error::validation(format!("unknown check id {other:?}"))),
    }
}

/// Run the suite, optionally filtered by substring, optionally in parallel.
/// Results come back in the canonical check order regardless of schedule.
pub fn run(fixtures: &FixtureSet, filter: Option<&str>, parallel: bool) -> Vec<CheckResult> {
    let ids: Vec<&'static str> = check_ids()
        .into_iter()
        .filter(|id| filter.map_or(true, |f| id.contains(f)))
        .collect();
    crate::exec::map_vec(ids, parallel, |id| match run_check(id, fixtures) {
        Ok(detail) => CheckResult {
            id: id.to_string(),
            passed: true,
            detail,
        },
        Err(e) => CheckResult {
            id: id.to_string(),
            passed: false,
            detail: e.to_string(),
        },
    })
}

pub fn run_seq(fixtures: &FixtureSet, filter: Option<&str>) -> Vec<CheckResult> {
    run(fixtures, filter, false)
}

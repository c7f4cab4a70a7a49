//! Acceptance suite: the contract-level checks, one test per criterion,
//! each printing a single pass/fail line (visible with `--nocapture`).

use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use proptest::prelude::*;

use quatlab_core::arith::{divisors, euler_phi, gcd, mod_pow, multiplicative_order, units};
use quatlab_core::fixtures::FixtureSet;
use quatlab_core::periodic_groups::{
    classify_type, m_h, maximal_bpq, BinaryPolyhedral, GroupType, PeriodicGroupSpec,
};
use quatlab_core::rational::{format_rat, rat};

fn criterion(n: u32, name: &str, budget: Option<Duration>, body: impl FnOnce() + UnwindSafe) {
    let start = Instant::now();
    let outcome = catch_unwind(body);
    let elapsed = start.elapsed();
    match outcome {
        Ok(()) => {
            let within = budget.map_or(true, |b| elapsed <= b);
            if within {
                println!(
                    "[acceptance] criterion {n} ({name}): PASS ({:.2?})",
                    elapsed
                );
            } else {
                println!(
                    "[acceptance] criterion {n} ({name}): FAIL (over budget: {:.2?})",
                    elapsed
                );
                panic!("criterion {n} exceeded its runtime budget: {elapsed:.2?}");
            }
        }
        Err(e) => {
            println!("[acceptance] criterion {n} ({name}): FAIL ({:.2?})", elapsed);
            resume_unwind(e);
        }
    }
}

#[test]
fn criterion_01_eichler_constants() {
    criterion(1, "eichler constants", Some(Duration::from_secs(5)), || {
        let table = [
            (16u64, rat(5, 48)),
            (22, rat(5, 132)),
            (26, rat(19, 156)),
            (28, rat(13, 21)),
            (36, rat(31, 36)),
            (42, rat(1, 6)),
        ];
        for (m, want) in table {
            let got = quatlab_core::mass_formula::eichler_constant(m).unwrap();
            assert_eq!(got, want, "ei for m={m}: got {}", format_rat(&got));
        }
    });
}

#[test]
fn criterion_02_sfc_classifier() {
    criterion(2, "sfc classifier", Some(Duration::from_secs(10)), || {
        // Named cases first.
        for (indices, want) in [
            (vec![2u64, 6], true),
            (vec![2, 18], true),
            (vec![14, 18, 30], true),
            (vec![2, 14], false),
            (vec![10, 30], false),
            (vec![8, 24], false),
        ] {
            let spec = quatlab_core::orders::validate_order_spec(&indices).unwrap();
            assert_eq!(
                quatlab_core::orders::has_sfc(&spec).unwrap().verdict,
                want,
                "{indices:?}"
            );
        }
        // Exhaustive agreement with the literal classification list
        // (component-wise) over every valid index set with indices <= 42.
        let rows = quatlab_core::orders::sfc_survey(42, true).unwrap();
        assert!(rows.len() > 2000, "expected a few thousand specs");
        for (indices, verdict) in rows {
            let listed = quatlab_core::orders::in_sfc_list_componentwise(&indices).unwrap();
            assert_eq!(verdict, listed, "procedure vs list at {indices:?}");
        }
    });
}

#[test]
fn criterion_03_q28_pipeline() {
    criterion(3, "order-28 fibre chain", Some(Duration::from_secs(1)), || {
        let fixtures = FixtureSet::load(None).unwrap();
        let report = quatlab_core::finite_ring::q28_pipeline(&fixtures).unwrap();
        assert_eq!(report.unit_count, 48);
        assert_eq!(report.coset_reps, vec!["1", "1+j", "1+2j", "1+4j"]);
        assert_eq!(report.norms["1+j"], 2);
        assert_eq!(report.norms["1+2j"], 5);
        assert_eq!(report.norms["1+4j"], 3);
        assert_eq!(report.square_class, vec!["1", "1+j"]);
        assert_eq!(report.nonsquare_class, vec!["1+2j", "1+4j"]);
        // j -> -j merges the nontrivial pair: the verdict pair on the
        // nontrivial class is (non-cancellation, cancellation mod action).
        assert!(report.noncancellation);
        assert_eq!(report.noncancellation_mod_aut, Some(false));
        let orbits = report.orbits.unwrap();
        assert!(orbits.contains(&vec!["1+2j".to_string(), "1+4j".to_string()]));
    });
}

#[test]
fn criterion_04_l218_fixture() {
    criterion(4, "order-36 {2,18} fibre", Some(Duration::from_secs(1)), || {
        let fixtures = FixtureSet::load(None).unwrap();
        let report = quatlab_core::finite_ring::l218_pipeline(&fixtures).unwrap();
        assert_eq!(report.coset_reps, vec!["1", "1+j"]);
        // Kernel sizes match: the class-group fibre has the same size as
        // the coset space, forcing stably free cancellation.
        assert_eq!(report.class_group_order, 2);
        assert_eq!(report.coset_reps.len() as u64, report.class_group_order);
        assert!(report.sfc);
    });
}

#[test]
fn criterion_05_mh_cross_check() {
    criterion(5, "m_H Wedderburn cross-check", None, || {
        for n in 2..=200u64 {
            let wedderburn: u64 = divisors(2 * n)
                .into_iter()
                .filter(|&d| d >= 3 && n % d != 0)
                .map(|d| euler_phi(d) / 2)
                .sum();
            let spec = PeriodicGroupSpec::Quaternion { order: 4 * n };
            assert_eq!(m_h(&spec).unwrap(), wedderburn, "n={n}");
            assert_eq!(wedderburn, n / 2, "n={n}");
        }
    });
}

fn type_i_strategy() -> impl Strategy<Value = PeriodicGroupSpec> {
    (1u64..=110, 1u64..=12, 0usize..10_000).prop_filter_map(
        "type-I congruences",
        |(half_m, quarter_n, seed)| {
            let m = 2 * half_m + 1;
            let n4 = 4 * quarter_n;
            if gcd(m, n4) != 1 {
                return None;
            }
            let us = units(m);
            let u = us[seed % us.len()].max(1);
            let ord = multiplicative_order(u, m);
            let r = mod_pow(u, ord / gcd(ord, n4), m);
            Some(PeriodicGroupSpec::TypeI { m, n4, r })
        },
    )
}

fn type_ii_strategy() -> impl Strategy<Value = PeriodicGroupSpec> {
    (1u64..=100, 3u32..=6, 0u32..256, 0usize..10_000).prop_filter_map(
        "type-II congruences",
        |(half_t, n_exp, sign_bits, seed)| {
            let t = 2 * half_t + 1;
            // a, b = +-1 on each prime-power factor of t, via the CRT.
            let factors: Vec<(u64, u32)> = quatlab_core::arith::factor(t)
                .into_iter()
                .collect();
            let mut a_parts = Vec::new();
            let mut b_parts = Vec::new();
            for (i, &(p, e)) in factors.iter().enumerate() {
                let q = p.pow(e);
                let a_sign = (sign_bits >> (2 * i)) & 1 == 1;
                let b_sign = (sign_bits >> (2 * i + 1)) & 1 == 1;
                a_parts.push((if a_sign { q - 1 } else { 1 % q }, q));
                b_parts.push((if b_sign { q - 1 } else { 1 % q }, q));
            }
            let a = if t == 1 {
                0
            } else {
                quatlab_core::arith::crt(&a_parts).ok()?
            };
            let b = if t == 1 {
                0
            } else {
                quatlab_core::arith::crt(&b_parts).ok()?
            };
            let us = units(t);
            let r = us[seed % us.len()];
            Some(PeriodicGroupSpec::TypeII {
                t,
                s: 1,
                r,
                n_exp,
                a,
                b,
            })
        },
    )
}

#[test]
fn criterion_06_classification_tables() {
    criterion(6, "classification tables", None, || {
        let strategy = prop_oneof![type_i_strategy(), type_ii_strategy()];
        let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig {
            cases: 600,
            ..ProptestConfig::default()
        });
        runner
            .run(&strategy, |spec| {
                spec.validate().unwrap();
                let ty = classify_type(&spec).unwrap();
                let bm = maximal_bpq(&spec).unwrap();
                let mh = m_h(&spec).unwrap();
                // Quotient-count row of the classification table.
                let allowed: &[usize] = match ty {
                    GroupType::I => &[0, 1],
                    GroupType::IIa => &[1, 2, 3],
                    GroupType::IIb => &[1],
                    _ => panic!("corpus generates types I and II only, got {ty}"),
                };
                prop_assert!(allowed.contains(&bm.len()), "bm count {} for {ty}", bm.len());
                // Parity row for m_H.
                match ty {
                    GroupType::I => {}
                    GroupType::IIa => prop_assert!(mh % 2 == 1 && mh >= 1, "IIa m_H = {mh}"),
                    GroupType::IIb => prop_assert!(mh % 2 == 0 && mh >= 2, "IIb m_H = {mh}"),
                    _ => unreachable!(),
                }
                // Distinct maximal quotient indices of a IIa group are coprime.
                if ty == GroupType::IIa && bm.len() > 1 {
                    let ms: Vec<u64> = bm
                        .iter()
                        .map(|q| match q {
                            BinaryPolyhedral::Quaternion(o) => o / 8,
                            _ => unreachable!(),
                        })
                        .collect();
                    for i in 0..ms.len() {
                        for j in (i + 1)..ms.len() {
                            prop_assert_eq!(gcd(ms[i], ms[j]), 1);
                        }
                    }
                }
                // Quotient bound: m_H >= 3 forces a quaternion quotient of
                // parameter at least max(ceil(2 m_H / 3), 6).
                if mh >= 3 {
                    let needed = ((2 * mh).div_ceil(3)).max(6);
                    let witness = bm.iter().any(|q| match q {
                        BinaryPolyhedral::Quaternion(o) => o / 4 >= needed,
                        _ => false,
                    });
                    prop_assert!(witness, "no large quotient for m_H = {mh}");
                }
                Ok(())
            })
            .unwrap();
    });
}

#[test]
fn criterion_07_swan_calculus() {
    criterion(7, "swan calculus", None, || {
        for n in 2..=100u64 {
            let us = units(n);
            for &r in &us {
                for &s in &us {
                    let prod = quatlab_core::swan::swan_product(
                        &quatlab_core::swan::SwanClass::new(n, r).unwrap(),
                        &quatlab_core::swan::SwanClass::new(n, s).unwrap(),
                    )
                    .unwrap();
                    assert_eq!(prod.r, r * s % n);
                }
                let inv = quatlab_core::arith::mod_inverse(r, n).unwrap();
                assert!(quatlab_core::swan::swan_product(
                    &quatlab_core::swan::SwanClass::new(n, r).unwrap(),
                    &quatlab_core::swan::SwanClass::new(n, inv).unwrap(),
                )
                .unwrap()
                .is_free());
            }
            for d in divisors(n) {
                if d == 1 {
                    continue;
                }
                for &r in &us {
                    let a = quatlab_core::swan::SwanClass::new(n, r).unwrap();
                    for &s in &us {
                        let b = quatlab_core::swan::SwanClass::new(n, s).unwrap();
                        let lhs = quatlab_core::swan::induce_swan(
                            &quatlab_core::swan::swan_product(&a, &b).unwrap(),
                            d,
                        )
                        .unwrap();
                        let rhs = quatlab_core::swan::swan_product(
                            &quatlab_core::swan::induce_swan(&a, d).unwrap(),
                            &quatlab_core::swan::induce_swan(&b, d).unwrap(),
                        )
                        .unwrap();
                        assert_eq!(lhs, rhs, "N={n}, M={d}");
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_08_bound_arithmetic() {
    criterion(8, "bound arithmetic", None, || {
        // Shape: log bound(2n) >= (3/8) phi(2n) log(2n) - C n log log n over
        // 50 <= n <= 500 with a modest fitted constant.
        let fit = quatlab_core::mass_formula::bound_shape_fit(50, 500, true).unwrap();
        assert!(fit.fitted_c.is_finite());
        assert!(
            fit.fitted_c > 0.0 && fit.fitted_c <= 10.0,
            "fitted correction constant out of shape: {}",
            fit.fitted_c
        );
        // Non-vacuity: the bound itself grows without limit over the range.
        let rows = quatlab_core::mass_formula::lower_bound_log_scan(500, 500, false).unwrap();
        assert!(rows[0].1 > 100.0, "log bound at n=500 is {}", rows[0].1);
        // Counting bound monotone from m_H = 40 along doubling chains.
        for chain in [[40u64, 80, 160, 320], [50, 100, 200, 400], [60, 120, 240, 480]] {
            let mut prev_log = f64::NEG_INFINITY;
            let mut prev_cert = BigUint::ZERO;
            for m_h in chain {
                let b = quatlab_core::swan::n_lower_bound(m_h).unwrap();
                assert!(b.log_lower > prev_log, "not monotone at m_H = {m_h}");
                assert!(b.certified >= prev_cert);
                prev_log = b.log_lower;
                prev_cert = b.certified;
            }
        }
    });
}

#[test]
fn criterion_09_ambiguous_class_number() {
    criterion(9, "ambiguous class number", None, || {
        for p in (3..=100u64).filter(|&p| quatlab_core::arith::is_prime(p)) {
            assert_eq!(
                quatlab_core::mass_formula::ambiguous_class_number(p).unwrap(),
                1,
                "p={p}"
            );
        }
    });
}

#[test]
fn criterion_10_discriminants() {
    criterion(10, "discriminants", None, || {
        let rows = quatlab_core::fields::disc_agreement_sweep(100, true).unwrap();
        assert_eq!(rows.len(), 98);
        for (m, want) in [(5u64, 5u64), (8, 8), (12, 12)] {
            let row = rows.iter().find(|r| r.0 == m).unwrap();
            assert_eq!(row.1, BigUint::from(want), "field disc at m={m}");
            assert_eq!(row.2, BigUint::from(want), "poly disc at m={m}");
        }
    });
}

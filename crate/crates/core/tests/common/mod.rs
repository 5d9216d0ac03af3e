//! Strategies and property bodies shared by the property tests and the
//! acceptance run.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use tauforms::brackets::{is_cuspidal, rc_bracket};
use tauforms::forms::{eisenstein, GradedForm};
use tauforms::quasidecomp::{decompose, generators, modular_basis, recompose, solve_bound};
use tauforms::{QSeries, Rational};

pub const CASES: u32 = 100;

pub fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=6).prop_map(|(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
}

pub fn series(truncation: usize) -> impl Strategy<Value = QSeries> {
    prop::collection::vec(rational(), truncation + 1).prop_map(QSeries::from_coeffs)
}

/// Three series sharing a random truncation.
pub fn series_triple() -> impl Strategy<Value = (QSeries, QSeries, QSeries)> {
    (0usize..=12).prop_flat_map(|n| (series(n), series(n), series(n)))
}

pub fn check_ring((a, b, c): (QSeries, QSeries, QSeries)) -> Result<(), TestCaseError> {
    let n = a.truncation();
    prop_assert_eq!(a.add(&b), b.add(&a));
    prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    prop_assert_eq!(a.mul(&b), b.mul(&a));
    prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    prop_assert_eq!(a.add(&QSeries::zero(n)), a.clone());
    prop_assert_eq!(a.mul(&QSeries::one(n)), a.clone());
    prop_assert!(a.add(&a.neg()).is_zero());
    Ok(())
}

pub fn check_leibniz((a, b, _): (QSeries, QSeries, QSeries)) -> Result<(), TestCaseError> {
    let lhs = a.mul(&b).derive(1);
    let rhs = a.derive(1).mul(&b).add(&a.mul(&b.derive(1)));
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// A weight and random coordinates over its generators.
pub fn coordinates() -> impl Strategy<Value = (u32, Vec<Rational>)> {
    (1u32..=12).prop_flat_map(|h| {
        let k = 2 * h;
        let g = tauforms::quasidecomp::generator_count(k).expect("even weight");
        (Just(k), prop::collection::vec(rational(), g))
    })
}

pub fn check_round_trip((k, coords): (u32, Vec<Rational>)) -> Result<(), TestCaseError> {
    let n = solve_bound(k).expect("even weight") + 6;
    let gens = generators(k, n).expect("even weight");
    let mut f = QSeries::zero(n);
    for (g, c) in gens.iter().zip(&coords) {
        f = f.add(&g.form.series().scale(c));
    }
    let form = GradedForm::new(f, k, k / 2).expect("admissible");
    let rec = decompose(&form, k, k / 2).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let got: Vec<Rational> = rec.coordinates.iter().map(|(_, c)| c.clone()).collect();
    prop_assert_eq!(&got, &coords);
    let back = recompose(&rec, n).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(back.series(), form.series());
    Ok(())
}

/// A random modular form of weight `k`: a combination of the echelon basis.
pub fn modular_form(truncation: usize) -> impl Strategy<Value = GradedForm> {
    (2u32..=8)
        .prop_flat_map(|h| {
            let k = 2 * h;
            let dim = tauforms::forms::dim_modular(k as i64).expect("even");
            (Just(k), prop::collection::vec(rational(), dim))
        })
        .prop_filter("nonzero", |(_, c)| c.iter().any(|x| !x.is_zero()))
        .prop_map(move |(k, coords)| {
            let basis = modular_basis(k, truncation).expect("even weight");
            let mut f = QSeries::zero(truncation);
            for (b, c) in basis.iter().zip(&coords) {
                f = f.add(&b.form.series().scale(c));
            }
            GradedForm::modular(f, k).expect("even weight")
        })
}

pub const BRACKET_TRUNCATION: usize = 16;

pub fn bracket_case() -> impl Strategy<Value = (GradedForm, GradedForm, u32)> {
    (
        modular_form(BRACKET_TRUNCATION),
        modular_form(BRACKET_TRUNCATION),
        1u32..=4,
    )
}

pub fn check_cuspidal((f, g, nu): (GradedForm, GradedForm, u32)) -> Result<(), TestCaseError> {
    let h = rc_bracket(&f, &g, nu).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(
        is_cuspidal(&h),
        "[f, g]_{} has constant term {}",
        nu,
        h.coefficient(0)
    );
    Ok(())
}

pub const EISENSTEIN_WEIGHTS: [u32; 5] = [4, 6, 8, 10, 12];

pub fn eisenstein_pair() -> impl Strategy<Value = (u32, u32, u32)> {
    (
        prop::sample::select(EISENSTEIN_WEIGHTS.to_vec()),
        prop::sample::select(EISENSTEIN_WEIGHTS.to_vec()),
        0u32..=4,
    )
}

pub fn check_antisymmetry((k, l, nu): (u32, u32, u32)) -> Result<(), TestCaseError> {
    let n = BRACKET_TRUNCATION;
    let (f, g) = (eisenstein(k, n).unwrap(), eisenstein(l, n).unwrap());
    let fg = rc_bracket(&f, &g, nu).unwrap();
    let gf = rc_bracket(&g, &f, nu).unwrap();
    let sign = Rational::from_integer(BigInt::from(if nu % 2 == 0 { 1 } else { -1 }));
    prop_assert_eq!(fg.series(), &gf.series().scale(&sign));
    Ok(())
}

/// Runs a property for `cases` cases with a fixed seed; the error text on failure.
pub fn run<S, F>(cases: u32, strategy: S, test: F) -> Result<(), String>
where
    S: Strategy,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(
            proptest::test_runner::RngAlgorithm::ChaCha,
        ),
    );
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

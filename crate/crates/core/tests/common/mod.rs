#![allow(dead_code)]

use discres_core::{Coefficient, Monomial, Poly, VarTable};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed_d15c),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn table(names: &[&str]) -> VarTable {
    VarTable::new(names.iter().copied()).unwrap()
}

pub fn int(v: i64) -> Coefficient {
    Coefficient::from_integer(v.into())
}

pub fn parse(text: &str, t: &VarTable) -> Poly {
    Poly::parse(text, Some(t)).unwrap()
}

/// Random polynomial over `t` with at most `terms` terms, per-variable degree `<= deg`.
pub fn poly(t: VarTable, deg: u32, terms: usize, bound: i64) -> impl Strategy<Value = Poly> {
    let n = t.len();
    prop::collection::vec((prop::collection::vec(0..=deg, n), -bound..=bound), 0..=terms).prop_map(move |raw| {
        let terms = raw.into_iter().map(|(e, c)| (Monomial::from_exponents(e), int(c)));
        Poly::from_terms(&t, terms).unwrap()
    })
}

/// Random nonconstant polynomial of positive degree in `v`.
pub fn poly_in(t: VarTable, v: &'static str, deg: u32, terms: usize, bound: i64) -> impl Strategy<Value = Poly> {
    poly(t, deg, terms, bound).prop_filter("positive degree in v", move |p| p.degree(v).unwrap_or(0) > 0)
}

/// Random polynomial with rational coefficients.
pub fn rational_poly(t: VarTable, deg: u32, terms: usize) -> impl Strategy<Value = Poly> {
    let n = t.len();
    prop::collection::vec((prop::collection::vec(0..=deg, n), -20i64..=20, 1i64..=6), 0..=terms).prop_map(move |raw| {
        let terms = raw
            .into_iter()
            .map(|(e, c, d)| (Monomial::from_exponents(e), Coefficient::new(c.into(), d.into())));
        Poly::from_terms(&t, terms).unwrap()
    })
}

/// Product of small random factors, so gcds are nontrivial.
pub fn structured(t: VarTable) -> impl Strategy<Value = (Poly, Poly, Poly)> {
    let f = move || poly(t.clone(), 2, 3, 5).prop_filter("nonzero", |p| !p.is_zero());
    (f(), f(), f())
}

/// Random polynomial of total degree `<= total`.
pub fn poly_total(t: VarTable, total: u32, terms: usize, bound: i64) -> impl Strategy<Value = Poly> {
    let n = t.len();
    prop::collection::vec((prop::collection::vec(0..=total, n), -bound..=bound), 0..=terms).prop_map(move |raw| {
        let terms = raw.into_iter().map(|(mut e, c)| {
            let mut i = 0;
            while e.iter().sum::<u32>() > total {
                e[i % n] = e[i % n].saturating_sub(1);
                i += 1;
            }
            (Monomial::from_exponents(e), int(c))
        });
        Poly::from_terms(&t, terms).unwrap()
    })
}

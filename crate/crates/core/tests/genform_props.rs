mod common;

use common::*;
use discres_core::genform::{
    discriminant_degree, exponent_vectors, form_discriminant, generic_form, multi_discriminant, resultant_of_forms,
    taylor_delta, ResultantMode,
};
use discres_core::{resultant, Coefficient, Monomial, Poly, VarTable};
use proptest::prelude::*;

const XS: [&str; 3] = ["x", "y", "z"];

fn xtable(n: usize) -> VarTable {
    table(&XS[..n])
}

fn factorial(k: u32) -> i64 {
    (1..=k as i64).product()
}

/// Form of degree `d` in the first `n` of x, y, z from a coefficient list.
fn form(n: usize, d: u32, coeffs: &[i64]) -> Poly {
    let t = xtable(n);
    let terms = exponent_vectors(n, d)
        .into_iter()
        .zip(coeffs.iter().cycle())
        .map(|(e, c)| (Monomial::from_exponents(e), int(*c)));
    Poly::from_terms(&t, terms).unwrap()
}

/// `(n, d_1..d_n)` with every `d_i <= 3`.
fn degrees() -> impl Strategy<Value = Vec<u32>> {
    (1usize..=3).prop_flat_map(|n| prop::collection::vec(1u32..=3, n))
}

fn pure_powers(ds: &[u32], scales: &[i64]) -> Vec<Poly> {
    let t = xtable(ds.len());
    ds.iter()
        .enumerate()
        .map(|(i, d)| Poly::var(&t, XS[i]).unwrap().pow(*d).scale(&int(scales[i])))
        .collect()
}

#[test]
fn macaulay_pure_powers_exhaustive() {
    for n in 1..=3usize {
        let mut ds = vec![1u32; n];
        loop {
            let res = resultant_of_forms(&pure_powers(&ds, &[1, 1, 1]), &XS[..n], &ResultantMode::Exact).unwrap();
            assert!(res.is_one(), "Res of pure powers {ds:?} = {res}");
            let mut k = 0;
            while k < n && ds[k] == 3 {
                ds[k] = 1;
                k += 1;
            }
            if k == n {
                break;
            }
            ds[k] += 1;
        }
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn macaulay_scaled_pure_powers(ds in degrees(), scales in prop::collection::vec(prop_oneof![-9i64..=-1, 1i64..=9], 3)) {
        let n = ds.len();
        let res = resultant_of_forms(&pure_powers(&ds, &scales), &XS[..n], &ResultantMode::Exact).unwrap();
        // Res is homogeneous of degree prod_{j != i} d_j in the coefficients of F_i
        let mut expected = int(1);
        for i in 0..n {
            let e: u32 = (0..n).filter(|&j| j != i).map(|j| ds[j]).product();
            expected *= num_traits::pow(int(scales[i]), e as usize);
        }
        prop_assert_eq!(res.constant_value().unwrap(), expected);
    }

    #[test]
    fn taylor_identity(f in rational_poly(table(&["x", "y", "z"]), 6, 6), i in 1u32..=3) {
        let delta = taylor_delta(&f, i, "z", "zp").unwrap();
        let t = delta.vars().clone();
        let f = f.embed(&t);
        let z = Poly::var(&t, "z").unwrap();
        let zp = Poly::var(&t, "zp").unwrap();
        let h = &zp - &z;
        let shifted = f.substitute(&[("z", zp.clone())]).unwrap();
        let mut rhs = &h.pow(i) * &delta;
        let mut deriv = f.clone();
        for j in 0..i {
            let c = Coefficient::new(1.into(), factorial(j).into());
            rhs = &rhs + &(&h.pow(j) * &deriv).scale(&c);
            deriv = deriv.derivative("z").unwrap();
        }
        prop_assert_eq!(shifted, rhs);
    }

    #[test]
    fn binary_macaulay_matches_sylvester(
        a in prop::collection::vec(-9i64..=9, 4),
        b in prop::collection::vec(-9i64..=9, 3),
    ) {
        prop_assume!(a[0] != 0 && b[0] != 0);
        let f = form(2, 3, &a);
        let g = form(2, 2, &b);
        let mac = resultant_of_forms(&[f.clone(), g.clone()], &["x", "y"], &ResultantMode::Exact).unwrap();
        let one = [("y", int(1))];
        let syl = resultant(&f.specialize(&one).unwrap(), &g.specialize(&one).unwrap(), "x").unwrap();
        prop_assert!(mac == syl || mac == -&syl, "{} vs {}", mac, syl);
    }
}

proptest! {
    #![proptest_config(config(20))]

    #[test]
    fn planted_singular_point_kills_delta(
        n in 2usize..=3,
        d in 2u32..=3,
        coeffs in prop::collection::vec(-9i64..=9, 10),
        shear in prop::collection::vec(-3i64..=3, 3),
    ) {
        // no x^d and x^(d-1)*v terms: the gradient vanishes at (1,0,0)
        let h = form(n, d, &coeffs);
        let t = h.vars().clone();
        let keep: Vec<(Monomial, Coefficient)> = h
            .terms()
            .iter()
            .filter(|(m, _)| m.exponent(0) + 1 < d)
            .cloned()
            .collect();
        let h = Poly::from_terms(&t, keep).unwrap();
        prop_assume!(!h.is_zero());
        let v = |s: &str| Poly::var(&t, s).unwrap();
        let mut bind = vec![("x", &v("x") + &v("y").scale(&int(shear[0])))];
        if n == 3 {
            bind[0].1 = &bind[0].1 + &v("z").scale(&int(shear[1]));
            bind.push(("y", &v("y") + &v("z").scale(&int(shear[2]))));
        }
        let f = h.substitute(&bind).unwrap();
        let delta = form_discriminant(&f, &XS[..n], &ResultantMode::Exact).unwrap();
        prop_assert!(delta.is_zero());
    }

    #[test]
    fn random_forms_have_nonzero_delta(
        n in 2usize..=3,
        d in 2u32..=3,
        coeffs in prop::collection::vec(prop_oneof![-99i64..=-1, 1i64..=99], 10),
    ) {
        let f = form(n, d, &coeffs);
        prop_assert!(!form_discriminant(&f, &XS[..n], &ResultantMode::Exact).unwrap().is_zero());
    }

    #[test]
    fn shared_zero_gives_zero_resultant(
        n in 2usize..=3,
        ds in prop::collection::vec(1u32..=2, 3),
        coeffs in prop::collection::vec(-9i64..=9, 30),
        u in prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 3),
    ) {
        let t = xtable(n);
        let point: Vec<(&str, Coefficient)> = (0..n).map(|i| (XS[i], int(u[i]))).collect();
        let forms: Vec<Poly> = (0..n)
            .map(|i| {
                let g = form(n, ds[i], &coeffs[i * 10..]);
                let at_u = g.specialize(&point).unwrap().constant_value().unwrap_or_default();
                let fix = Poly::var(&t, "x").unwrap().pow(ds[i]).scale(&(at_u / num_traits::pow(int(u[0]), ds[i] as usize)));
                &g - &fix
            })
            .collect();
        let res = resultant_of_forms(&forms, &XS[..n], &ResultantMode::Exact).unwrap();
        prop_assert!(res.is_zero());
    }
}

#[test]
fn specialization_commutes_with_resultant() {
    let mut cases = Vec::new();
    for (n, d) in [(2usize, 2u32), (2, 3), (3, 2)] {
        let g = generic_form(n, d).unwrap();
        let x = g.x_refs();
        let grads: Vec<Poly> = x.iter().map(|v| g.body().derivative(v).unwrap()).collect();
        let exact = resultant_of_forms(&grads, &x, &ResultantMode::Exact).unwrap();
        let names: Vec<String> = g.param_names().iter().map(|s| s.to_string()).collect();
        cases.push((grads, x.iter().map(|s| s.to_string()).collect::<Vec<_>>(), names, exact));
    }
    let mut rng = 7i64;
    for (forms, x, names, exact) in cases {
        let x: Vec<&str> = x.iter().map(String::as_str).collect();
        for _ in 0..10 {
            let values: Vec<(String, Coefficient)> = names
                .iter()
                .map(|n| {
                    rng = (rng * 1103515245 + 12345) % 2147483648;
                    (n.clone(), int(rng % 41 - 20))
                })
                .collect();
            let mode = ResultantMode::Specialized(values);
            let spec = resultant_of_forms(&forms, &x, &mode).unwrap();
            assert_eq!(mode.specialize(&exact).unwrap().constant_value(), spec.constant_value());
        }
    }
}

#[test]
fn delta_is_homogeneous_in_old_and_new_variable() {
    for d in 1..=5 {
        let g = generic_form(3, d).unwrap();
        for i in 1..=3u32.min(d) {
            let delta = taylor_delta(g.body(), i, "z", "zp").unwrap();
            assert!(
                delta.is_homogeneous_in(&["x", "y", "z", "zp"], d - i),
                "d = {d}, i = {i}"
            );
        }
    }
}

#[test]
fn degree_law_where_symbolic() {
    for (n, d) in [(2, 2), (2, 3), (2, 4), (3, 2)] {
        let g = generic_form(n, d).unwrap();
        let delta = multi_discriminant(&g).unwrap();
        let params = g.param_names();
        assert_eq!(
            delta.degree_in(&params).unwrap() as u64,
            discriminant_degree(n, d),
            "n = {n}, d = {d}"
        );
    }
}

#[test]
fn taylor_delta_examples() {
    let t = table(&["z"]);
    let zp = |s: &str| Poly::parse(s, Some(&table(&["z", "zp"]))).unwrap();
    assert_eq!(taylor_delta(&parse("z^3", &t), 2, "z", "zp").unwrap(), zp("zp + 2*z"));
    assert_eq!(taylor_delta(&parse("z^2", &t), 1, "z", "zp").unwrap(), zp("z + zp"));
    assert!(taylor_delta(&parse("z", &t), 2, "z", "zp").unwrap().is_zero());
}

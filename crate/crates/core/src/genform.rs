//! Generic forms, Macaulay resultants, the multivariate discriminant, the Taylor
//! remainder operator and the Busé factors of a ternary form.
//!
//! The Macaulay resultant of `n` forms in `n` variables is computed as
//! `det(D) / det(D')`: `D` has one row per monomial of the critical degree
//! `nu = sum(d_i - 1) + 1`, the row of a monomial `m` being `(m / x_i^d_i) F_i`
//! for the first `i` with `x_i^d_i | m`, and `D'` is the submatrix on the
//! monomials divisible by at least two of the `x_i^d_i`. Rows sit on the
//! diagonal position of their monomial, so `Res(x_1^d_1, .., x_n^d_n) = 1`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::euclid::{exact_div, primitive_part, NormalizedPoly};
use crate::matrix::det_poly;
use crate::poly::{Coefficient, Monomial, Poly, VarTable};
use crate::resultant::discriminant;

/// Largest matrix dimension for a fully symbolic Macaulay determinant.
pub const EXACT_MAX_DIM: usize = 20;
/// Largest number of symbolic parameters for a fully symbolic Macaulay determinant.
pub const EXACT_MAX_PARAMS: usize = 8;
/// With at most [`FEW_PARAMS`] symbolic parameters the determinant goes through
/// evaluation and interpolation, which stays cheap up to this dimension.
pub const FEW_PARAMS_MAX_DIM: usize = 400;
pub const FEW_PARAMS: usize = 2;
/// Coordinate changes tried after a vanishing minor.
pub const MAX_RETRIES: usize = 5;

/// Names of the form variables: `x, y, z` for three variables, `x1 .. xn` otherwise.
pub fn form_vars(n: usize) -> Vec<String> {
    if n == 3 {
        vec!["x".into(), "y".into(), "z".into()]
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// All exponent vectors of length `n` and total `d`.
pub fn exponent_vectors(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

fn param_name(alpha: &[u32]) -> String {
    let sep = if alpha.iter().any(|&e| e >= 10) { "_" } else { "" };
    let parts: Vec<String> = alpha.iter().map(|e| e.to_string()).collect();
    format!("C_{}", parts.join(sep))
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `sum C_alpha x^alpha` over all exponent vectors of total `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericForm {
    n: usize,
    d: u32,
    x_vars: Vec<String>,
    params: Vec<(Vec<u32>, String)>,
    body: Poly,
}

pub fn generic_form(n: usize, d: u32) -> Result<GenericForm> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidDimension(format!(
            "a generic form needs n >= 1 and d >= 1, got n = {n}, d = {d}"
        )));
    }
    let mut alphas = exponent_vectors(n, d);
    alphas.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    let params: Vec<(Vec<u32>, String)> = alphas
        .into_iter()
        .map(|a| {
            let name = param_name(&a);
            (a, name)
        })
        .collect();
    GenericForm::build(n, d, form_vars(n), params)
}

impl GenericForm {
    fn build(n: usize, d: u32, x_vars: Vec<String>, params: Vec<(Vec<u32>, String)>) -> Result<Self> {
        let names: Vec<&str> = x_vars
            .iter()
            .map(String::as_str)
            .chain(params.iter().map(|(_, s)| s.as_str()))
            .collect();
        let table = VarTable::new(names)?;
        let terms = params.iter().enumerate().map(|(k, (alpha, _))| {
            let mut e = alpha.clone();
            e.resize(table.len(), 0);
            e[n + k] = 1;
            (Monomial::from_exponents(e), Coefficient::one())
        });
        let body = Poly::from_terms(&table, terms)?;
        Ok(GenericForm {
            n,
            d,
            x_vars,
            params,
            body,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn x_vars(&self) -> &[String] {
        &self.x_vars
    }

    pub fn x_refs(&self) -> Vec<&str> {
        self.x_vars.iter().map(String::as_str).collect()
    }

    /// Exponent vectors with their parameter names, in table order.
    pub fn params(&self) -> &[(Vec<u32>, String)] {
        &self.params
    }

    pub fn param_names(&self) -> Vec<&str> {
        self.params.iter().map(|(_, s)| s.as_str()).collect()
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    /// The parameter multiplying `x^alpha`.
    pub fn param(&self, alpha: &[u32]) -> Option<&str> {
        self.params
            .iter()
            .find(|(a, _)| a.as_slice() == alpha)
            .map(|(_, s)| s.as_str())
    }

    pub fn body(&self) -> &Poly {
        &self.body
    }

    /// The same form with parameters renamed, in table order.
    pub fn renamed(&self, names: &[&str]) -> Result<GenericForm> {
        if names.len() != self.params.len() {
            return Err(Error::InvalidDimension(format!(
                "{} names for {} parameters",
                names.len(),
                self.params.len()
            )));
        }
        let params = self
            .params
            .iter()
            .zip(names)
            .map(|((a, _), s)| (a.clone(), s.to_string()))
            .collect();
        GenericForm::build(self.n, self.d, self.x_vars.clone(), params)
    }

    /// Single-letter parameter names `a, b, c, ..` when they fit without clashing.
    pub fn with_letters(&self) -> Result<GenericForm> {
        let letters: Vec<String> = ('a'..='z')
            .map(|c| c.to_string())
            .filter(|c| !self.x_vars.contains(c))
            .take(self.params.len())
            .collect();
        if letters.len() < self.params.len() {
            return Err(Error::InvalidDimension(format!(
                "{} parameters do not fit in single letters",
                self.params.len()
            )));
        }
        let refs: Vec<&str> = letters.iter().map(String::as_str).collect();
        self.renamed(&refs)
    }
}

/// Evaluation mode of a resultant: fully symbolic, or with some parameters bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResultantMode {
    Exact,
    Specialized(Vec<(String, Coefficient)>),
}

impl ResultantMode {
    pub fn specialize(&self, p: &Poly) -> Result<Poly> {
        match self {
            ResultantMode::Exact => Ok(p.clone()),
            ResultantMode::Specialized(values) => {
                let known: Vec<(&str, Coefficient)> = values
                    .iter()
                    .filter(|(n, _)| p.vars().index_of(n).is_some())
                    .map(|(n, v)| (n.as_str(), v.clone()))
                    .collect();
                p.specialize(&known)
            }
        }
    }
}

/// The Macaulay matrix of `n` forms in `n` variables and its distinguished minor.
#[derive(Clone, Debug)]
pub struct MacaulaySystem {
    forms: Vec<Poly>,
    x_vars: Vec<String>,
    degrees: Vec<u32>,
    nu: u32,
    monomials: Vec<Vec<u32>>,
    /// For each column monomial: the form used for its row.
    row_form: Vec<usize>,
    non_reduced: Vec<usize>,
    table: VarTable,
}

impl MacaulaySystem {
    pub fn new(forms: &[Poly], x_vars: &[&str]) -> Result<Self> {
        let n = x_vars.len();
        if n == 0 || forms.len() != n {
            return Err(Error::InvalidDimension(format!(
                "{} forms in {} variables",
                forms.len(),
                n
            )));
        }
        let mut table = VarTable::new(x_vars.iter().copied())?;
        for f in forms {
            table = table.merge(f.vars());
        }
        let mut degrees = Vec::with_capacity(n);
        for (k, f) in forms.iter().enumerate() {
            let d = f
                .degree_in(x_vars)
                .ok_or_else(|| Error::InhomogeneousInput(format!("form {} is zero", k + 1)))?;
            if !f.is_homogeneous_in(x_vars, d) {
                return Err(Error::InhomogeneousInput(format!("form {} is not homogeneous", k + 1)));
            }
            if d == 0 {
                return Err(Error::InvalidDimension(format!("form {} has degree 0", k + 1)));
            }
            degrees.push(d);
        }
        let nu = degrees.iter().map(|d| d - 1).sum::<u32>() + 1;
        let monomials = exponent_vectors(n, nu);
        let row_form = monomials
            .iter()
            .map(|m| (0..n).find(|&i| m[i] >= degrees[i]).expect("critical degree"))
            .collect();
        let non_reduced = monomials
            .iter()
            .enumerate()
            .filter(|(_, m)| (0..n).filter(|&i| m[i] >= degrees[i]).count() >= 2)
            .map(|(k, _)| k)
            .collect();
        Ok(MacaulaySystem {
            forms: forms.iter().map(|f| f.embed(&table)).collect(),
            x_vars: x_vars.iter().map(|s| s.to_string()).collect(),
            degrees,
            nu,
            monomials,
            row_form,
            non_reduced,
            table,
        })
    }

    pub fn forms(&self) -> &[Poly] {
        &self.forms
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn critical_degree(&self) -> u32 {
        self.nu
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn minor_dim(&self) -> usize {
        self.non_reduced.len()
    }

    /// Variables other than the form variables that the forms involve.
    pub fn params(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for f in &self.forms {
            for v in f.used_var_names() {
                if !self.x_vars.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// Coefficients of each form, keyed by exponent vector in the form variables.
    fn split_forms(&self) -> Vec<Vec<(Vec<u32>, Poly)>> {
        let xi: Vec<usize> = self.x_vars.iter().map(|v| self.table.index_of(v).unwrap()).collect();
        self.forms
            .iter()
            .map(|f| {
                let mut groups: HashMap<Vec<u32>, Vec<(Monomial, Coefficient)>> = HashMap::new();
                for (m, c) in f.terms() {
                    let key: Vec<u32> = xi.iter().map(|&i| m.exponent(i)).collect();
                    let mut rest = m.exponents().to_vec();
                    for &i in &xi {
                        rest[i] = 0;
                    }
                    groups
                        .entry(key)
                        .or_default()
                        .push((Monomial::from_exponents(rest), c.clone()));
                }
                let mut out: Vec<(Vec<u32>, Poly)> = groups
                    .into_iter()
                    .map(|(k, ts)| (k, Poly::from_terms(&self.table, ts).expect("same table")))
                    .collect();
                out.sort_by(|a, b| a.0.cmp(&b.0));
                out
            })
            .collect()
    }

    /// The full Macaulay matrix, rows aligned with their column monomials.
    pub fn matrix(&self) -> Vec<Vec<Poly>> {
        let index: HashMap<&[u32], usize> = self
            .monomials
            .iter()
            .enumerate()
            .map(|(k, m)| (m.as_slice(), k))
            .collect();
        let parts = self.split_forms();
        let zero = Poly::zero(&self.table);
        let dim = self.dim();
        let mut rows = vec![vec![zero; dim]; dim];
        for (r, m) in self.monomials.iter().enumerate() {
            let i = self.row_form[r];
            let mut shift = m.clone();
            shift[i] -= self.degrees[i];
            for (beta, c) in &parts[i] {
                let col: Vec<u32> = beta.iter().zip(&shift).map(|(a, b)| a + b).collect();
                rows[r][index[col.as_slice()]] = c.clone();
            }
        }
        rows
    }

    /// The square submatrix on the non-reduced monomials.
    pub fn minor(&self) -> Vec<Vec<Poly>> {
        let full = self.matrix();
        submatrix(&full, &self.non_reduced)
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }
}

fn submatrix(m: &[Vec<Poly>], idx: &[usize]) -> Vec<Vec<Poly>> {
    idx.iter()
        .map(|&r| idx.iter().map(|&c| m[r][c].clone()).collect())
        .collect()
}

fn symbolic_params(m: &[Vec<Poly>]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for e in m.iter().flatten() {
        for v in e.used_var_names() {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// `det(D) / det(D')` with the bindings of `mode` applied to the matrix entries.
pub fn macaulay_resultant(sys: &MacaulaySystem, mode: &ResultantMode) -> Result<Poly> {
    let full = sys.matrix();
    let full: Vec<Vec<Poly>> = full
        .iter()
        .map(|r| r.iter().map(|e| mode.specialize(e)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let params = symbolic_params(&full);
    let dim = sys.dim();
    let feasible = params.is_empty()
        || (dim <= EXACT_MAX_DIM && params.len() <= EXACT_MAX_PARAMS)
        || (dim <= FEW_PARAMS_MAX_DIM && params.len() <= FEW_PARAMS);
    if !feasible {
        return Err(Error::InfeasibleSize(format!(
            "symbolic Macaulay determinant of dimension {dim} in {} parameters; bind parameters first",
            params.len()
        )));
    }
    let minor = submatrix(&full, &sys.non_reduced);
    let den = det_poly(&minor, &sys.table);
    if den.is_zero() {
        return Err(Error::DegenerateMinor(0));
    }
    let num = det_poly(&full, &sys.table);
    exact_div(&num, &den)
}

/// A random integer matrix of determinant 1: unit lower times unit upper
/// triangular, off-diagonal entries in `[-3, 3]`.
fn unimodular(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let mut l = vec![vec![0i64; n]; n];
    let mut u = vec![vec![0i64; n]; n];
    for i in 0..n {
        l[i][i] = 1;
        u[i][i] = 1;
        for j in 0..i {
            l[i][j] = rng.gen_range(-3..=3);
        }
        for j in i + 1..n {
            u[i][j] = rng.gen_range(-3..=3);
        }
    }
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| l[i][k] * u[k][j]).sum()).collect())
        .collect()
}

fn change_coordinates(forms: &[Poly], x_vars: &[&str], a: &[Vec<i64>]) -> Result<Vec<Poly>> {
    let table = VarTable::new(x_vars.iter().copied())?;
    let images: Vec<Poly> = a
        .iter()
        .map(|row| {
            row.iter().zip(x_vars).fold(Poly::zero(&table), |acc, (&c, v)| {
                &acc + &Poly::var(&table, v)
                    .unwrap()
                    .scale(&BigRational::from_integer(c.into()))
            })
        })
        .collect();
    forms
        .iter()
        .map(|f| {
            let bindings: Vec<(&str, Poly)> = x_vars
                .iter()
                .zip(&images)
                .filter(|(v, _)| f.vars().index_of(v).is_some())
                .map(|(v, p)| (*v, p.clone()))
                .collect();
            f.substitute(&bindings)
        })
        .collect()
}

/// Macaulay resultant of `forms` in `x_vars`. Bindings are applied to the forms
/// first; a vanishing minor triggers up to [`MAX_RETRIES`] random unimodular
/// changes of coordinates, which leave the resultant unchanged.
pub fn resultant_of_forms(forms: &[Poly], x_vars: &[&str], mode: &ResultantMode) -> Result<Poly> {
    let forms: Vec<Poly> = forms.iter().map(|f| mode.specialize(f)).collect::<Result<_>>()?;
    if forms.iter().any(Poly::is_zero) {
        let table = forms.iter().fold(VarTable::empty(), |t, f| t.merge(f.vars()));
        return Ok(Poly::zero(&table));
    }
    let sys = MacaulaySystem::new(&forms, x_vars)?;
    match macaulay_resultant(&sys, &ResultantMode::Exact) {
        Err(Error::DegenerateMinor(_)) => {}
        other => return other,
    }
    for attempt in 0..MAX_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0de + attempt as u64);
        let a = unimodular(x_vars.len(), &mut rng);
        let moved = change_coordinates(&forms, x_vars, &a)?;
        let sys = MacaulaySystem::new(&moved, x_vars)?;
        match macaulay_resultant(&sys, &ResultantMode::Exact) {
            Err(Error::DegenerateMinor(_)) => {}
            other => return other,
        }
    }
    Err(Error::DegenerateMinor(MAX_RETRIES))
}

fn homogeneous_degree(f: &Poly, x_vars: &[&str]) -> Result<u32> {
    let d = f
        .degree_in(x_vars)
        .ok_or_else(|| Error::InhomogeneousInput("zero form".into()))?;
    if !f.is_homogeneous_in(x_vars, d) {
        return Err(Error::InhomogeneousInput(format!("{f}")));
    }
    Ok(d)
}

/// `Res(df/dx_1, .., df/dx_n)`, a fixed nonzero multiple of the discriminant.
/// Linear forms give 1.
pub fn gradient_resultant(f: &Poly, x_vars: &[&str], mode: &ResultantMode) -> Result<Poly> {
    let d = homogeneous_degree(f, x_vars)?;
    if d == 0 {
        return Err(Error::InvalidDimension(
            "the discriminant needs a form of degree >= 1".into(),
        ));
    }
    if d == 1 {
        return Ok(Poly::one(f.vars()));
    }
    let grads: Vec<Poly> = x_vars
        .iter()
        .map(|v| match f.vars().index_of(v) {
            Some(_) => f.derivative(v),
            None => Ok(Poly::zero(f.vars())),
        })
        .collect::<Result<_>>()?;
    resultant_of_forms(&grads, x_vars, mode)
}

/// Discriminant of a form: primitive part of the gradient resultant, or zero.
pub fn form_discriminant(f: &Poly, x_vars: &[&str], mode: &ResultantMode) -> Result<NormalizedPoly> {
    let r = gradient_resultant(f, x_vars, mode)?;
    if r.is_zero() {
        return Ok(crate::euclid::gcd(&r, &r));
    }
    primitive_part(&r)
}

/// The multivariate discriminant of a generic form, computed symbolically.
pub fn multi_discriminant(f: &GenericForm) -> Result<NormalizedPoly> {
    form_discriminant(f.body(), &f.x_refs(), &ResultantMode::Exact)
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// `sum_{k >= i} (1/k!) (v' - v)^(k - i) d^k F / dv^k` over the table of `f`
/// extended by `v'`.
pub fn taylor_delta(f: &Poly, i: u32, v: &str, v_new: &str) -> Result<Poly> {
    if f.vars().index_of(v).is_none() {
        return Err(Error::UnknownVariable(v.to_string()));
    }
    if v == v_new || f.vars().index_of(v_new).is_some() {
        return Err(Error::VariableCollision(v_new.to_string()));
    }
    let (table, _) = f.vars().with_var(v_new)?;
    let f = f.embed(&table);
    let h = &Poly::var(&table, v_new)? - &Poly::var(&table, v)?;
    let deg = f.degree(v).unwrap_or(0);
    let mut acc = Poly::zero(&table);
    let mut deriv = f.clone();
    for _ in 0..i {
        deriv = deriv.derivative(v)?;
    }
    for k in i..=deg {
        if deriv.is_zero() {
            break;
        }
        let c = BigRational::new(BigInt::one(), factorial(k));
        acc = &acc + &(&h.pow(k - i) * &deriv).scale(&c);
        deriv = deriv.derivative(v)?;
    }
    Ok(acc)
}

/// A variable name not yet in `table`, derived from `v`.
pub fn fresh_name(table: &VarTable, v: &str) -> String {
    let mut name = format!("{v}p");
    while table.index_of(&name).is_some() {
        name.push('p');
    }
    name
}

/// The two Busé factors for the ordered pair `(v, w)` (`w` only tags the pair).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuseFactors {
    pub a: Poly,
    /// `b` in specialized mode; equal to `b_squared` in exact mode.
    pub b: Poly,
    pub b_squared: Poly,
    pub pair: (String, String),
}

fn ternary_setup(f: &Poly, x_vars: &[&str], v: &str) -> Result<(u32, Poly)> {
    if x_vars.len() != 3 {
        return Err(Error::InvalidDimension(format!(
            "Busé factors are defined for ternary forms, got {} variables",
            x_vars.len()
        )));
    }
    if !x_vars.contains(&v) {
        return Err(Error::UnknownVariable(v.to_string()));
    }
    let vi = f
        .vars()
        .index_of(v)
        .ok_or_else(|| Error::UnknownVariable(v.to_string()))?;
    let d = homogeneous_degree(f, x_vars)?;
    if d < 3 {
        return Err(Error::InvalidDimension(format!(
            "Busé factors need degree >= 3, got {d}"
        )));
    }
    Ok((d, f.coeff_of_power(vi, d)))
}

fn divide_out(value: &Poly, divisor: &Poly) -> Result<Poly> {
    if divisor.is_zero() {
        return Err(Error::DivisionByZero);
    }
    exact_div(value, divisor)
}

/// `a_{v,w}(f) = Res(f, f_v, f_vv) / (2^(d(d-1)) C_v^2)`, with `C_v` the coefficient of `v^d`.
pub fn buse_a_factor(f: &Poly, x_vars: &[&str], v: &str, mode: &ResultantMode) -> Result<Poly> {
    let (d, lead) = ternary_setup(f, x_vars, v)?;
    let fv = f.derivative(v)?;
    let fvv = fv.derivative(v)?;
    let r = resultant_of_forms(&[f.clone(), fv, fvv], x_vars, mode)?;
    let lead = mode.specialize(&lead)?;
    let two = BigRational::from_integer(BigInt::from(2u32).pow(d * (d - 1)));
    divide_out(&r, &lead.pow(2).scale(&two))
}

/// `b_{v,w}(f)^2 = Res(f, f_v, delta^2(f), delta^2(f_v) - 2 delta^3(f)) / C_v^(2d(d-1)-6)`
/// over the form variables and a fresh copy of `v`; 1 for cubics.
pub fn buse_b_squared(f: &Poly, x_vars: &[&str], v: &str, mode: &ResultantMode) -> Result<Poly> {
    let (d, lead) = ternary_setup(f, x_vars, v)?;
    if d == 3 {
        return Ok(Poly::one(f.vars()));
    }
    let vp = fresh_name(f.vars(), v);
    let fv = f.derivative(v)?;
    let d2 = taylor_delta(f, 2, v, &vp)?;
    let d2v = taylor_delta(&fv, 2, v, &vp)?;
    let d3 = taylor_delta(f, 3, v, &vp)?;
    let g4 = &d2v - &d3.scale(&BigRational::from_integer(2.into()));
    let mut vars4: Vec<&str> = x_vars.to_vec();
    vars4.push(&vp);
    let r = resultant_of_forms(&[f.clone(), fv, d2, g4], &vars4, mode)?;
    let lead = mode.specialize(&lead)?;
    divide_out(&r, &lead.pow(2 * d * (d - 1) - 6))
}

/// Rational square root, if there is one.
pub fn rational_sqrt(c: &Coefficient) -> Option<Coefficient> {
    if c.is_negative() {
        return None;
    }
    let (n, d) = (c.numer(), c.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

/// `b_{v,w}(f)`: a square root of [`buse_b_squared`] in specialized mode,
/// and `b^2` itself in exact mode.
pub fn buse_b_factor(f: &Poly, x_vars: &[&str], v: &str, mode: &ResultantMode) -> Result<Poly> {
    let sq = buse_b_squared(f, x_vars, v, mode)?;
    match (mode, sq.constant_value()) {
        (ResultantMode::Specialized(_), Some(c)) => rational_sqrt(&c)
            .map(|r| Poly::constant(sq.vars(), r))
            .ok_or(Error::NotASquare),
        _ => Ok(sq),
    }
}

/// Both factors for the pair `(v, w)`.
pub fn buse_factors(f: &Poly, x_vars: &[&str], pair: (&str, &str), mode: &ResultantMode) -> Result<BuseFactors> {
    let a = buse_a_factor(f, x_vars, pair.0, mode)?;
    let b_squared = buse_b_squared(f, x_vars, pair.0, mode)?;
    let b = match (mode, b_squared.constant_value()) {
        (ResultantMode::Specialized(_), Some(c)) => {
            Poly::constant(b_squared.vars(), rational_sqrt(&c).ok_or(Error::NotASquare)?)
        }
        _ => b_squared.clone(),
    };
    Ok(BuseFactors {
        a,
        b,
        b_squared,
        pair: (pair.0.to_string(), pair.1.to_string()),
    })
}

/// `z^d + w z x^(d-1) + y^d` over `[x, y, z, w]`.
pub fn buse_witness(d: u32) -> Result<Poly> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("witness degree must be >= 2, got {d}")));
    }
    let table = VarTable::new(["x", "y", "z", "w"])?;
    let m = |e: [u32; 4]| (Monomial::from_exponents(e), Coefficient::one());
    Poly::from_terms(&table, [m([0, 0, d, 0]), m([d - 1, 0, 1, 1]), m([0, d, 0, 0])])
}

/// `disc_y(disc_z(f(1, y, z)))` for a ternary form in `[x, y, z]`.
pub fn iterated_discriminant(f: &Poly, x_vars: &[&str]) -> Result<Poly> {
    if x_vars.len() != 3 {
        return Err(Error::InvalidDimension(
            "iterated discriminant of a ternary form".into(),
        ));
    }
    let dehom = f.specialize(&[(x_vars[0], Coefficient::one())])?;
    let inner = discriminant(&dehom, x_vars[2])?;
    discriminant(&inner, x_vars[1])
}

/// Total degree of a polynomial in the listed variables; `None` for zero.
pub fn degree_in_params(p: &Poly, params: &[&str]) -> Option<u32> {
    p.degree_in(params)
}

/// `n (d - 1)^(n - 1)`.
pub fn discriminant_degree(n: usize, d: u32) -> u64 {
    n as u64 * (d as u64 - 1).pow(n as u32 - 1)
}

/// Number of parameters of a generic form, `binomial(n + d - 1, n - 1)`.
pub fn parameter_count(n: usize, d: u32) -> u64 {
    binomial(n as u64 + d as u64 - 1, n as u64 - 1)
}

//! Sparse multivariate polynomials over the rationals with a named variable table.
//!
//! Terms are kept sorted in descending graded reverse-lexicographic order, with
//! the variable table order (first variable largest) breaking ties. That order
//! is also the canonical print order, so two polynomials are equal exactly when
//! their canonical strings are.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exact rational coefficient, always in lowest terms with positive denominator.
pub type Coefficient = BigRational;

pub(crate) fn is_ident(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Ordered list of distinct variable names. Position is the variable index.
#[derive(Clone, Debug)]
pub struct VarTable {
    names: Arc<[String]>,
}

impl PartialEq for VarTable {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

impl Eq for VarTable {}

impl VarTable {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !is_ident(n) {
                return Err(Error::InvalidVariableName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(Error::DuplicateVariable(n.clone()));
            }
        }
        Ok(VarTable { names: names.into() })
    }

    pub fn empty() -> Self {
        VarTable {
            names: Vec::new().into(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Union by name: this table's variables first, then the new ones of `other`.
    pub fn merge(&self, other: &VarTable) -> VarTable {
        if self == other {
            return self.clone();
        }
        let mut names = self.names.to_vec();
        for n in other.names.iter() {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
        if names.len() == self.len() {
            return self.clone();
        }
        VarTable { names: names.into() }
    }

    /// Returns the table extended by `name` (if missing) and the index of `name`.
    pub fn with_var(&self, name: &str) -> Result<(VarTable, usize)> {
        if let Some(i) = self.index_of(name) {
            return Ok((self.clone(), i));
        }
        if !is_ident(name) {
            return Err(Error::InvalidVariableName(name.to_string()));
        }
        let mut names = self.names.to_vec();
        names.push(name.to_string());
        Ok((VarTable { names: names.into() }, self.len()))
    }
}

/// Exponent vector with cached total degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u32; 8]>,
    total: u32,
}

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, arity),
            total: 0,
        }
    }

    pub fn from_exponents<I: IntoIterator<Item = u32>>(exps: I) -> Self {
        let exps: SmallVec<[u32; 8]> = exps.into_iter().collect();
        let total = exps.iter().sum();
        Monomial { exps, total }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps.get(var).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.total
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.total == 0
    }

    pub(crate) fn mul(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u32; 8]> = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect();
        Monomial {
            exps,
            total: self.total + other.total,
        }
    }

    pub(crate) fn divides(&self, other: &Monomial) -> bool {
        self.total <= other.total && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub(crate) fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u32; 8]> = other.exps.iter().zip(self.exps.iter()).map(|(a, b)| a - b).collect();
        Monomial {
            exps,
            total: other.total - self.total,
        }
    }

    pub(crate) fn with_exponent(&self, var: usize, e: u32) -> Monomial {
        let mut exps = self.exps.clone();
        let old = exps[var];
        exps[var] = e;
        Monomial {
            exps,
            total: self.total - old + e,
        }
    }

    fn remap(&self, map: &[usize], arity: usize) -> Monomial {
        let mut exps: SmallVec<[u32; 8]> = SmallVec::from_elem(0, arity);
        for (i, &e) in self.exps.iter().enumerate() {
            exps[map[i]] = e;
        }
        Monomial {
            exps,
            total: self.total,
        }
    }
}

impl Ord for Monomial {
    /// Graded reverse lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total.cmp(&other.total).then_with(|| {
            let n = self.exps.len().max(other.exps.len());
            for i in (0..n).rev() {
                let (a, b) = (self.exponent(i), other.exponent(i));
                if a != b {
                    return b.cmp(&a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial: a variable table plus strictly descending, nonzero terms.
#[derive(Clone, Debug)]
pub struct Poly {
    vars: VarTable,
    terms: Vec<(Monomial, Coefficient)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = align(self, other);
        a.terms == b.terms
    }
}

impl Eq for Poly {}

pub(crate) fn align<'a>(p: &'a Poly, q: &'a Poly) -> (Cow<'a, Poly>, Cow<'a, Poly>) {
    if p.vars == q.vars {
        return (Cow::Borrowed(p), Cow::Borrowed(q));
    }
    let table = p.vars.merge(&q.vars);
    let a = if table == p.vars {
        Cow::Borrowed(p)
    } else {
        Cow::Owned(p.embed(&table))
    };
    let b = if table == q.vars {
        Cow::Borrowed(q)
    } else {
        Cow::Owned(q.embed(&table))
    };
    (a, b)
}

fn int(v: i64) -> Coefficient {
    BigRational::from_integer(BigInt::from(v))
}

impl Poly {
    pub fn zero(vars: &VarTable) -> Self {
        Poly {
            vars: vars.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(vars: &VarTable) -> Self {
        Self::constant(vars, Coefficient::one())
    }

    pub fn constant(vars: &VarTable, c: Coefficient) -> Self {
        if c.is_zero() {
            return Self::zero(vars);
        }
        Poly {
            vars: vars.clone(),
            terms: vec![(Monomial::one(vars.len()), c)],
        }
    }

    pub fn from_int(vars: &VarTable, c: i64) -> Self {
        Self::constant(vars, int(c))
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(vars: &VarTable, name: &str) -> Result<Self> {
        let i = vars
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var_index(vars, i))
    }

    pub(crate) fn var_index(vars: &VarTable, i: usize) -> Self {
        let m = Monomial::one(vars.len()).with_exponent(i, 1);
        Poly {
            vars: vars.clone(),
            terms: vec![(m, Coefficient::one())],
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms<I>(vars: &VarTable, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Coefficient)>,
    {
        let mut acc: HashMap<Monomial, Coefficient> = HashMap::new();
        for (m, c) in terms {
            if m.arity() != vars.len() {
                return Err(Error::IncompatibleVariables(format!(
                    "monomial arity {} does not match table arity {}",
                    m.arity(),
                    vars.len()
                )));
            }
            *acc.entry(m).or_insert_with(Coefficient::zero) += c;
        }
        Ok(Self::from_map(vars, acc))
    }

    fn from_map(vars: &VarTable, acc: HashMap<Monomial, Coefficient>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly {
            vars: vars.clone(),
            terms,
        }
    }

    /// Caller guarantees the terms are strictly descending and nonzero.
    pub(crate) fn from_sorted(vars: &VarTable, terms: Vec<(Monomial, Coefficient)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Poly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn terms(&self) -> &[(Monomial, Coefficient)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<Coefficient> {
        match self.terms.as_slice() {
            [] => Some(Coefficient::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Coefficient)> {
        self.terms.first()
    }

    pub fn leading_coefficient(&self) -> Option<&Coefficient> {
        self.terms.first().map(|t| &t.1)
    }

    /// Re-expresses the polynomial over a superset table.
    pub fn embed(&self, table: &VarTable) -> Poly {
        if *table == self.vars {
            return self.clone();
        }
        let map: Vec<usize> = self
            .vars
            .names()
            .iter()
            .map(|n| table.index_of(n).expect("embed target must contain every variable"))
            .collect();
        let mut terms: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (m.remap(&map, table.len()), c.clone()))
            .collect();
        let order_kept = map.windows(2).all(|w| w[0] < w[1]);
        if !order_kept {
            terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        }
        Poly {
            vars: table.clone(),
            terms,
        }
    }

    /// Re-expresses the polynomial over `table`, failing if a used variable is missing.
    pub fn restrict_to(&self, table: &VarTable) -> Result<Poly> {
        for i in self.used_vars() {
            if table.index_of(self.vars.name(i)).is_none() {
                return Err(Error::IncompatibleVariables(format!(
                    "`{}` is not in the target table",
                    self.vars.name(i)
                )));
            }
        }
        let map: Vec<Option<usize>> = self.vars.names().iter().map(|n| table.index_of(n)).collect();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps: SmallVec<[u32; 8]> = SmallVec::from_elem(0, table.len());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    exps[map[i].unwrap()] = e;
                }
            }
            (Monomial { exps, total: m.total }, c.clone())
        });
        Poly::from_terms(table, terms)
    }

    /// Indices of variables that occur with positive degree.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exponent(i) > 0))
            .collect()
    }

    /// Names of variables that occur with positive degree.
    pub fn used_var_names(&self) -> Vec<String> {
        self.used_vars()
            .into_iter()
            .map(|i| self.vars.name(i).to_string())
            .collect()
    }

    pub fn scale(&self, c: &Coefficient) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub(crate) fn mul_monomial(&self, m: &Monomial, c: &Coefficient) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    fn add_same(&self, other: &Poly, negate: bool) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    terms.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    terms.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        terms.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            terms.push((t.0.clone(), c));
        }
        Poly {
            vars: self.vars.clone(),
            terms,
        }
    }

    fn mul_same(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.vars);
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_monomial(m, c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial, Coefficient> =
            HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += prod;
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        Poly::from_map(&self.vars, acc)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Degree in `var`; `None` is the negative-infinity degree of the zero polynomial.
    /// A variable absent from the table has degree 0.
    pub fn degree(&self, var: &str) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        match self.vars.index_of(var) {
            Some(i) => Some(self.degree_index(i)),
            None => Some(0),
        }
    }

    pub(crate) fn degree_index(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(i)).max().unwrap_or(0)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.total_degree())
    }

    /// Total degree in a subset of the variables; `None` for the zero polynomial.
    pub fn degree_in(&self, vars: &[&str]) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let idx: Vec<usize> = vars.iter().filter_map(|v| self.vars.index_of(v)).collect();
        Some(
            self.terms
                .iter()
                .map(|(m, _)| idx.iter().map(|&i| m.exponent(i)).sum::<u32>())
                .max()
                .unwrap_or(0),
        )
    }

    /// Whether every term has the same total degree `d` in the listed variables.
    pub fn is_homogeneous_in(&self, vars: &[&str], d: u32) -> bool {
        let idx: Vec<usize> = vars.iter().filter_map(|v| self.vars.index_of(v)).collect();
        self.terms
            .iter()
            .all(|(m, _)| idx.iter().map(|&i| m.exponent(i)).sum::<u32>() == d)
    }

    /// Largest 1-based table position of a variable with positive degree; 0 for constants.
    pub fn level(&self) -> usize {
        (0..self.vars.len())
            .rev()
            .find(|&i| self.degree_index(i) > 0)
            .map_or(0, |i| i + 1)
    }

    /// Leading coefficient with respect to `var`.
    pub fn lc(&self, var: &str) -> Result<Poly> {
        let i = self
            .vars
            .index_of(var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        let d = self.degree_index(i);
        Ok(self.coeff_of_power(i, d))
    }

    pub(crate) fn coeff_of_power(&self, i: usize, d: u32) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(i) == d)
            .map(|(m, c)| (m.with_exponent(i, 0), c.clone()));
        Poly::from_terms(&self.vars, terms).expect("same table")
    }

    /// Dense coefficient list with respect to variable index `i` (entry k multiplies var^k).
    pub(crate) fn coeffs_in(&self, i: usize) -> Vec<Poly> {
        if self.is_zero() {
            return Vec::new();
        }
        let d = self.degree_index(i) as usize;
        let mut buckets: Vec<Vec<(Monomial, Coefficient)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(i) as usize;
            buckets[e].push((m.with_exponent(i, 0), c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut ts| {
                // dropping a variable can reorder terms under degrevlex
                ts.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                Poly::from_sorted(&self.vars, ts)
            })
            .collect()
    }

    /// Inverse of [`Poly::coeffs_in`].
    pub(crate) fn from_coeffs(vars: &VarTable, i: usize, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                debug_assert_eq!(m.exponent(i), 0);
                terms.push((m.with_exponent(i, k as u32), a.clone()));
            }
        }
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly::from_sorted(vars, terms)
    }

    /// Coefficient list with respect to `var` (entry k multiplies var^k).
    pub fn coefficients_in(&self, var: &str) -> Result<Vec<Poly>> {
        let i = self
            .vars
            .index_of(var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        Ok(self.coeffs_in(i))
    }

    pub fn derivative(&self, var: &str) -> Result<Poly> {
        let i = self
            .vars
            .index_of(var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        Ok(self.derivative_index(i))
    }

    pub(crate) fn derivative_index(&self, i: usize) -> Poly {
        let mut terms: Vec<_> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(i) > 0)
            .map(|(m, c)| {
                let e = m.exponent(i);
                (m.with_exponent(i, e - 1), c * int(e as i64))
            })
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly::from_sorted(&self.vars, terms)
    }

    /// Simultaneous substitution of polynomials for variables.
    pub fn substitute(&self, bindings: &[(&str, Poly)]) -> Result<Poly> {
        let mut table = self.vars.clone();
        for (name, image) in bindings {
            if self.vars.index_of(name).is_none() {
                return Err(Error::UnknownVariable(name.to_string()));
            }
            table = table.merge(image.vars());
        }
        if bindings.iter().all(|(_, p)| p.is_constant()) {
            let values: Vec<(&str, Coefficient)> = bindings
                .iter()
                .map(|(n, p)| (*n, p.constant_value().unwrap()))
                .collect();
            return self.specialize(&values);
        }
        let base = self.embed(&table);
        let bound: Vec<(usize, Poly)> = bindings
            .iter()
            .map(|(n, p)| (table.index_of(n).unwrap(), p.embed(&table)))
            .collect();
        let mut powers: Vec<HashMap<u32, Poly>> = vec![HashMap::new(); bound.len()];
        let mut acc = Poly::zero(&table);
        let mut grouped: HashMap<Vec<u32>, Vec<(Monomial, Coefficient)>> = HashMap::new();
        for (m, c) in &base.terms {
            let key: Vec<u32> = bound.iter().map(|(i, _)| m.exponent(*i)).collect();
            let mut rest = m.clone();
            for (i, _) in &bound {
                rest = rest.with_exponent(*i, 0);
            }
            grouped.entry(key).or_default().push((rest, c.clone()));
        }
        let mut keys: Vec<_> = grouped.keys().cloned().collect();
        keys.sort();
        for key in keys {
            let rest_terms = grouped.remove(&key).unwrap();
            let rest = Poly::from_terms(&table, rest_terms)?;
            let mut factor = Poly::one(&table);
            for (slot, &e) in key.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let image = &bound[slot].1;
                let pw = powers[slot].entry(e).or_insert_with(|| image.pow(e)).clone();
                factor = &factor * &pw;
            }
            acc = &acc + &(&rest * &factor);
        }
        Ok(acc)
    }

    /// Substitutes rational values for variables.
    pub fn specialize(&self, values: &[(&str, Coefficient)]) -> Result<Poly> {
        let mut idx = Vec::with_capacity(values.len());
        for (name, v) in values {
            let i = self
                .vars
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            idx.push((i, v));
        }
        let mut pow_cache: HashMap<(usize, u32), Coefficient> = HashMap::new();
        let mut acc: HashMap<Monomial, Coefficient> = HashMap::new();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut mono = m.clone();
            for &(i, v) in &idx {
                let e = m.exponent(i);
                if e > 0 {
                    let p = pow_cache
                        .entry((i, e))
                        .or_insert_with(|| num_traits::pow(v.clone(), e as usize));
                    coeff *= &*p;
                    mono = mono.with_exponent(i, 0);
                }
            }
            if !coeff.is_zero() {
                *acc.entry(mono).or_insert_with(Coefficient::zero) += coeff;
            }
        }
        Ok(Poly::from_map(&self.vars, acc))
    }

    /// Evaluates at a full point, given as values in table order.
    pub fn evaluate(&self, point: &[Coefficient]) -> Coefficient {
        let mut total = Coefficient::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Canonical text form.
    pub fn canonical_string(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<JsonTerm> = self
            .terms
            .iter()
            .map(|(m, c)| JsonTerm {
                c: format_coefficient(c),
                e: m.exponents().to_vec(),
            })
            .collect();
        serde_json::to_value(JsonPoly {
            vars: self.vars.names().to_vec(),
            terms,
        })
        .expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Poly> {
        let jp: JsonPoly = serde_json::from_value(value.clone())?;
        let vars = VarTable::new(jp.vars)?;
        let mut terms = Vec::with_capacity(jp.terms.len());
        for t in jp.terms {
            if t.e.len() != vars.len() {
                return Err(Error::Json(format!(
                    "exponent vector of length {} for {} variables",
                    t.e.len(),
                    vars.len()
                )));
            }
            let c = parse_coefficient(&t.c).ok_or_else(|| Error::Json(format!("bad coefficient `{}`", t.c)))?;
            terms.push((Monomial::from_exponents(t.e), c));
        }
        Poly::from_terms(&vars, terms)
    }

    /// Parses the text grammar. Variables missing from `table` are appended to it.
    pub fn parse(text: &str, table: Option<&VarTable>) -> Result<Poly> {
        crate::parse::parse_poly(text, table)
    }

    /// Rough size measure used to pick cheap pivots and orderings.
    pub(crate) fn weight(&self) -> usize {
        self.terms
            .iter()
            .map(|(_, c)| (c.numer().bits() + c.denom().bits()) as usize + 1)
            .sum()
    }

    pub(crate) fn map_coefficients<F: Fn(&Coefficient) -> Coefficient>(&self, f: F) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Poly {
            vars: self.vars.clone(),
            terms,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    c: String,
    e: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct JsonPoly {
    vars: Vec<String>,
    terms: Vec<JsonTerm>,
}

pub fn format_coefficient(c: &Coefficient) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn parse_coefficient(s: &str) -> Option<Coefficient> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let abs = c.abs();
            let mut first = true;
            if m.is_one() || !abs.is_one() {
                f.write_str(&format_coefficient(&abs))?;
                first = false;
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                f.write_str(self.vars.name(i))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: &'a Poly) -> Poly {
                let (a, b) = align(self, rhs);
                $body(a.as_ref(), b.as_ref())
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &'a Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &Poly, b: &Poly| a.add_same(b, false));
forward_binop!(Sub, sub, |a: &Poly, b: &Poly| a.add_same(b, true));
forward_binop!(Mul, mul, |a: &Poly, b: &Poly| a.mul_same(b));

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.map_coefficients(|c| -c)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// The ring operations as a single entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn arith(p: &Poly, q: &Poly, op: ArithOp) -> Poly {
    match op {
        ArithOp::Add => p + q,
        ArithOp::Sub => p - q,
        ArithOp::Mul => p * q,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s, None).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let t = VarTable::new(["x", "y"]).unwrap();
        let a = Poly::parse("x + y", Some(&t)).unwrap();
        let b = Poly::parse("x - y", Some(&t)).unwrap();
        assert_eq!((&a * &b).to_string(), "x^2 - y^2");
    }

    #[test]
    fn additive_inverse_is_zero() {
        let a = p("3*x^2*y - 7/2*z + 1");
        assert!((&a + &(-&a)).is_zero());
        assert_eq!((&a - &a).to_string(), "0");
    }

    #[test]
    fn disjoint_tables_merge() {
        let a = p("x^2");
        let b = p("y");
        let s = &a + &b;
        assert_eq!(s.vars().names(), &["x".to_string(), "y".to_string()]);
        assert_eq!(s.to_string(), "x^2 + y");
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("x^2 - 1").derivative("x").unwrap().to_string(), "2*x");
        let z = p("z^3");
        let d3 = z
            .derivative("z")
            .unwrap()
            .derivative("z")
            .unwrap()
            .derivative("z")
            .unwrap();
        assert_eq!(d3.to_string(), "6");
        let t = VarTable::new(["x", "y"]).unwrap();
        let y2 = Poly::parse("y^2", Some(&t)).unwrap();
        assert!(y2.derivative("x").unwrap().is_zero());
        assert!(matches!(y2.derivative("w"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn substitution() {
        let t = VarTable::new(["x", "y", "z", "a", "b", "c", "d", "e", "f"]).unwrap();
        let q = Poly::parse("a*x^2 + b*x*y + c*y^2 + d*x*z + e*y*z + f*z^2", Some(&t)).unwrap();
        let at0 = q.substitute(&[("x", Poly::zero(&t))]).unwrap();
        assert_eq!(at0, p("c*y^2 + e*y*z + f*z^2"));
        let u = p("x^2 - 1");
        let v = u.substitute(&[("x", Poly::from_int(u.vars(), 3))]).unwrap();
        assert_eq!(v.to_string(), "8");
        let dehom = q.substitute(&[("x", Poly::one(&t))]).unwrap();
        assert!(dehom.degree_in(&["y", "z"]).unwrap() <= 2);
        assert!(matches!(
            u.substitute(&[("w", Poly::one(&t))]),
            Err(Error::UnknownVariable(_))
        ));
    }

    #[test]
    fn polynomial_substitution() {
        let f = p("x^2 + y");
        let t = f.vars().clone();
        let img = Poly::parse("y + 1", Some(&t)).unwrap();
        assert_eq!(f.substitute(&[("x", img)]).unwrap(), p("y^2 + 3*y + 1"));
    }

    #[test]
    fn degrees_and_level() {
        let t = VarTable::new(["x1", "x2", "x3"]).unwrap();
        let f = Poly::parse("x1^2*x3 + x2", Some(&t)).unwrap();
        assert_eq!(f.degree("x3"), Some(1));
        assert_eq!(f.level(), 3);
        let five = Poly::from_int(&t, 5);
        assert_eq!(five.degree("x1"), Some(0));
        assert_eq!(five.level(), 0);
        assert_eq!(Poly::zero(&t).total_degree(), None);
        assert_eq!(Poly::zero(&t).degree("x1"), None);
        let g = Poly::parse("3*x2*x3^2 + x2^2", Some(&t)).unwrap();
        assert_eq!(g.lc("x3").unwrap().to_string(), "3*x2");
        assert!(matches!(g.lc("q"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn canonical_order_is_degrevlex() {
        let t = VarTable::new(["x", "y", "z"]).unwrap();
        let f = Poly::parse("z^2 + x*z + y^2 + x*y + x^2 + y*z", Some(&t)).unwrap();
        assert_eq!(f.to_string(), "x^2 + x*y + y^2 + x*z + y*z + z^2");
        let g = Poly::parse("1 + x + x^3", Some(&t)).unwrap();
        assert_eq!(g.to_string(), "x^3 + x + 1");
    }

    #[test]
    fn rational_coefficients_print() {
        let f = p("1/2*x - 3/4");
        assert_eq!(f.to_string(), "1/2*x - 3/4");
        assert_eq!(p("-x").to_string(), "-x");
        assert_eq!(p("-1").to_string(), "-1");
    }

    #[test]
    fn json_round_trip() {
        let f = p("-12*y^2 + 1/3*x");
        let j = f.to_json();
        assert_eq!(j["vars"], serde_json::json!(["y", "x"]));
        assert_eq!(Poly::from_json(&j).unwrap(), f);
        let fixed: serde_json::Value =
            serde_json::from_str(r#"{"vars": ["x","y"], "terms": [{"c": "-12", "e": [0,2]}]}"#).unwrap();
        assert_eq!(Poly::from_json(&fixed).unwrap().to_string(), "-12*y^2");
    }

    #[test]
    fn equality_ignores_unused_variables() {
        let a = Poly::parse("x + 1", Some(&VarTable::new(["x", "y"]).unwrap())).unwrap();
        let b = Poly::parse("x + 1", Some(&VarTable::new(["y", "x"]).unwrap())).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn coefficient_split_round_trip() {
        let f = p("x^2*y + 3*x*y^2 - y + 4*x");
        let i = f.vars().index_of("x").unwrap();
        let cs = f.coeffs_in(i);
        assert_eq!(cs.len(), 3);
        assert_eq!(Poly::from_coeffs(f.vars(), i, &cs), f);
    }
}

//! Content, primitive parts, exact division, multivariate gcd and squarefree parts.
//!
//! The gcd works recursively: the polynomials are viewed as univariate in their
//! highest-indexed variable, contents are split off and the primitive parts go
//! through a subresultant remainder sequence. Before running the sequence, both
//! primitive parts are mapped to a prime field at a random point; if the image
//! gcd is constant while the leading coefficients survive, the true gcd of the
//! primitive parts is constant too, and the sequence is skipped.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense;
use crate::error::{Error, Result};
use crate::poly::{align, Coefficient, Monomial, Poly};
use crate::upoly::UPoly;

/// Integer coefficients, integer content 1, positive leading coefficient.
/// The zero polynomial is allowed only as `gcd(0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedPoly(Poly);

impl NormalizedPoly {
    pub fn as_poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_inner(self) -> Poly {
        self.0
    }
}

impl Deref for NormalizedPoly {
    type Target = Poly;
    fn deref(&self) -> &Poly {
        &self.0
    }
}

impl fmt::Display for NormalizedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<NormalizedPoly> for Poly {
    fn from(n: NormalizedPoly) -> Poly {
        n.0
    }
}

/// Returns `r` with `q * r == p`.
pub fn exact_div(p: &Poly, q: &Poly) -> Result<Poly> {
    if q.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (p, q) = align(p, q);
    let (p, q) = (p.as_ref(), q.as_ref());
    if p.is_zero() {
        return Ok(Poly::zero(p.vars()));
    }
    if let Some(c) = q.constant_value() {
        return Ok(p.scale(&c.recip()));
    }
    let (lm, lcq) = q.leading_term().unwrap();
    if p.leading_term().unwrap().0.total_degree() < lm.total_degree() {
        return Err(Error::NotDivisible);
    }
    if q.is_monomial() {
        let inv = lcq.recip();
        let mut terms = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            if !lm.divides(m) {
                return Err(Error::NotDivisible);
            }
            terms.push((lm.quotient_of(m), c * &inv));
        }
        return Ok(Poly::from_sorted(p.vars(), terms));
    }
    let mut rem: BTreeMap<Monomial, Coefficient> = p.terms().iter().map(|(m, c)| (m.clone(), c.clone())).collect();
    let mut quot = Vec::new();
    let tail = &q.terms()[1..];
    while let Some((m, c)) = rem.pop_last() {
        if !lm.divides(&m) {
            return Err(Error::NotDivisible);
        }
        let qm = lm.quotient_of(&m);
        let qc = c / lcq;
        for (mq, cq) in tail {
            let key = mq.mul(&qm);
            let v = &qc * cq;
            match rem.entry(key) {
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() -= v;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(-v);
                }
            }
        }
        quot.push((qm, qc));
    }
    Ok(Poly::from_sorted(p.vars(), quot))
}

/// Rational content, signed so that the primitive part has a positive leading coefficient.
pub fn content(p: &Poly) -> Coefficient {
    if p.is_zero() {
        return Coefficient::zero();
    }
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (_, c) in p.terms() {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    let c = BigRational::new(num, den);
    if p.leading_coefficient().unwrap().is_negative() {
        -c
    } else {
        c
    }
}

/// `p / content(p)`; zero stays zero and nonzero constants become 1.
pub(crate) fn normalize(p: &Poly) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content(p);
    if c.is_one() {
        return p.clone();
    }
    let inv = c.recip();
    p.map_coefficients(|a| a * &inv)
}

pub fn primitive_part(p: &Poly) -> Result<NormalizedPoly> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(NormalizedPoly(normalize(p)))
}

/// Gcd of the primitive parts, normalized. `gcd(p, 0)` is `primitive_part(p)`.
pub fn gcd(p: &Poly, q: &Poly) -> NormalizedPoly {
    let (a, b) = align(p, q);
    NormalizedPoly(gcd_norm(&a, &b))
}

/// Gcd of a list of polynomials; the zero list gives zero.
pub fn gcd_all<'a, I: IntoIterator<Item = &'a Poly>>(ps: I) -> NormalizedPoly {
    let mut it = ps.into_iter();
    let mut g = match it.next() {
        Some(p) => normalize(p),
        None => return NormalizedPoly(Poly::zero(&crate::poly::VarTable::empty())),
    };
    for p in it {
        if g.is_one() {
            break;
        }
        g = gcd(&g, p).into_inner();
    }
    NormalizedPoly(g)
}

fn monomial_gcd(m: &Poly, q: &Poly) -> Poly {
    let (mono, _) = m.leading_term().unwrap();
    let mut exps: Vec<u32> = mono.exponents().to_vec();
    for (t, _) in q.terms() {
        for (i, e) in exps.iter_mut().enumerate() {
            *e = (*e).min(t.exponent(i));
        }
        if exps.iter().all(|&e| e == 0) {
            break;
        }
    }
    Poly::from_sorted(m.vars(), vec![(Monomial::from_exponents(exps), Coefficient::one())])
}

fn gcd_of_list(p: &Poly, list: Vec<Poly>) -> Poly {
    let mut list = list;
    list.retain(|c| !c.is_zero());
    list.sort_by_key(|c| c.weight());
    let mut g = normalize(p);
    for c in &list {
        if g.is_constant() {
            break;
        }
        g = gcd_norm(&g, c);
    }
    g
}

fn content_in(coeffs: &[Poly]) -> Poly {
    let mut list: Vec<&Poly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    list.sort_by_key(|c| c.weight());
    let mut g = normalize(list[0]);
    for c in &list[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd_norm(&g, c);
    }
    g
}

/// Gcd for polynomials over a shared table, normalized.
pub(crate) fn gcd_norm(p: &Poly, q: &Poly) -> Poly {
    if p.is_zero() {
        return normalize(q);
    }
    if q.is_zero() {
        return normalize(p);
    }
    if p.is_constant() || q.is_constant() {
        return Poly::one(p.vars());
    }
    if p.is_monomial() {
        return monomial_gcd(p, q);
    }
    if q.is_monomial() {
        return monomial_gcd(q, p);
    }
    let pv = p.used_vars();
    let qv = q.used_vars();
    let v = *pv.iter().chain(qv.iter()).max().unwrap();
    let in_p = pv.contains(&v);
    let in_q = qv.contains(&v);
    if !in_q {
        return gcd_of_list(q, p.coeffs_in(v));
    }
    if !in_p {
        return gcd_of_list(p, q.coeffs_in(v));
    }
    let pc = p.coeffs_in(v);
    let qc = q.coeffs_in(v);
    let cont_p = content_in(&pc);
    let cont_q = content_in(&qc);
    let pp = normalize(&exact_div(p, &cont_p).expect("content divides"));
    let qq = normalize(&exact_div(q, &cont_q).expect("content divides"));
    let g_c = gcd_norm(&cont_p, &cont_q);
    if pp == qq {
        return normalize(&(&pp * &g_c));
    }
    if modular_gcd_degree(&pp, &qq, v) == Some(0) {
        return g_c;
    }
    if pp.used_vars() == [v] && qq.used_vars() == [v] {
        let g = dense::gcd_dense(&dense::to_dense(&pp, v), &dense::to_dense(&qq, v));
        return normalize(&(&dense::from_dense(pp.vars(), v, &g) * &g_c));
    }
    let a = UPoly::from_poly(&pp, v);
    let b = UPoly::from_poly(&qq, v);
    let last = subresultant_last(a, b);
    if last.deg() == 0 {
        return g_c;
    }
    let cont = content_in(&last.coeffs);
    let g = exact_div(&last.to_poly(), &cont).expect("content divides");
    normalize(&(&g * &g_c))
}

/// Last nonzero entry of the subresultant remainder sequence of `a` and `b`.
fn subresultant_last(a: UPoly, b: UPoly) -> UPoly {
    let (mut a, mut b) = if a.deg() >= b.deg() { (a, b) } else { (b, a) };
    let one = Poly::one(&a.vars);
    let mut g = one.clone();
    let mut h = one;
    loop {
        let delta = (a.deg() - b.deg()) as u32;
        let r = a.prem(&b);
        if r.is_zero() {
            return b;
        }
        if r.deg() == 0 {
            return r;
        }
        let divisor = &g * &h.pow(delta);
        let next = r.div_scalar(&divisor).expect("subresultant division is exact");
        a = b;
        b = next;
        g = a.lc().clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => exact_div(&g.pow(delta), &h.pow(delta - 1)).expect("subresultant division is exact"),
        };
    }
}

const PRECHECK_PRIME: u64 = 2_147_483_647;

fn mod_coeff(c: &Coefficient, p: u64) -> Option<u64> {
    let bp = BigInt::from(p);
    let n = c.numer().mod_floor(&bp).to_u64().unwrap();
    let d = c.denom().mod_floor(&bp).to_u64().unwrap();
    if d == 0 {
        return None;
    }
    Some(mulmod(n, inv_mod(d, p), p))
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn image_mod(p: &Poly, v: usize, point: &[u64], prime: u64) -> Option<Vec<u64>> {
    let deg = p.degree_index(v) as usize;
    let mut out = vec![0u64; deg + 1];
    for (m, c) in p.terms() {
        let mut t = mod_coeff(c, prime)?;
        for (i, &e) in m.exponents().iter().enumerate() {
            if i != v && e > 0 {
                t = mulmod(t, pow_mod(point[i], e as u64, prime), prime);
            }
        }
        let k = m.exponent(v) as usize;
        out[k] = (out[k] + t) % prime;
    }
    Some(out)
}

fn trim_mod(a: &mut Vec<u64>) {
    while matches!(a.last(), Some(0)) {
        a.pop();
    }
}

fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
    trim_mod(&mut a);
    trim_mod(&mut b);
    while !b.is_empty() {
        // a mod b
        let inv = inv_mod(*b.last().unwrap(), p);
        while a.len() >= b.len() {
            let f = mulmod(*a.last().unwrap(), inv, p);
            let shift = a.len() - b.len();
            for (k, &bk) in b.iter().enumerate() {
                a[k + shift] = (a[k + shift] + p - mulmod(f, bk, p)) % p;
            }
            trim_mod(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Degree bound for the gcd of `a` and `b` in variable `v` from one modular image;
/// `None` when the image loses a leading coefficient.
pub(crate) fn modular_gcd_degree(a: &Poly, b: &Poly, v: usize) -> Option<usize> {
    let mut hasher_seed = 0u64;
    for (m, _) in a.terms().iter().take(4).chain(b.terms().iter().take(4)) {
        for &e in m.exponents() {
            hasher_seed = hasher_seed.wrapping_mul(31).wrapping_add(e as u64);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(hasher_seed ^ 0x5eed);
    for _ in 0..2 {
        let point: Vec<u64> = (0..a.vars().len()).map(|_| rng.gen_range(1..PRECHECK_PRIME)).collect();
        let ia = image_mod(a, v, &point, PRECHECK_PRIME)?;
        let ib = image_mod(b, v, &point, PRECHECK_PRIME)?;
        if ia.last() == Some(&0) || ib.last() == Some(&0) {
            continue;
        }
        return Some(gcd_degree_mod(ia, ib, PRECHECK_PRIME));
    }
    None
}

/// Product of the distinct irreducible factors of positive degree, normalized.
/// Constants map to 1 and zero maps to zero.
pub fn sqrfree_part(p: &Poly) -> NormalizedPoly {
    if p.is_zero() {
        return NormalizedPoly(p.clone());
    }
    if p.is_constant() {
        return NormalizedPoly(Poly::one(p.vars()));
    }
    let n = normalize(p);
    let mut g = n.clone();
    for v in n.used_vars().into_iter().rev() {
        let dv = n.derivative_index(v);
        g = gcd_norm(&g, &dv);
        if g.is_constant() {
            return NormalizedPoly(n);
        }
    }
    NormalizedPoly(normalize(&exact_div(&n, &g).expect("gcd divides")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarTable;

    fn xy() -> VarTable {
        VarTable::new(["x", "y"]).unwrap()
    }

    fn p(s: &str) -> Poly {
        Poly::parse(s, Some(&xy())).unwrap()
    }

    #[test]
    fn exact_division() {
        assert_eq!(exact_div(&p("x^2 - y^2"), &p("x + y")).unwrap(), p("x - y"));
        assert_eq!(exact_div(&p("x^2 + 1"), &p("x")), Err(Error::NotDivisible));
        let f = p("3*x*y - 2/3*y^2 + 7");
        assert_eq!(exact_div(&f, &p("1")).unwrap(), f);
        assert_eq!(exact_div(&f, &Poly::zero(&xy())), Err(Error::DivisionByZero));
        assert_eq!(exact_div(&p("x^2 + x*y + 1"), &p("x + y")), Err(Error::NotDivisible));
    }

    #[test]
    fn contents() {
        let f = p("-2*x^2 - 4*x");
        assert_eq!(content(&f), BigRational::from_integer((-2).into()));
        assert_eq!(primitive_part(&f).unwrap().as_poly(), &p("x^2 + 2*x"));
        assert!(primitive_part(&p("7")).unwrap().is_one());
        let g = p("1/2*x + 1/3*y");
        assert_eq!(content(&g), BigRational::new(1.into(), 6.into()));
        assert_eq!(primitive_part(&g).unwrap().as_poly(), &p("3*x + 2*y"));
        assert_eq!(primitive_part(&Poly::zero(&xy())), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn gcds() {
        assert_eq!(gcd(&p("x^2 - y^2"), &p("x + y").pow(2)).as_poly(), &p("x + y"));
        assert!(gcd(&p("6*x"), &p("4*y")).is_one());
        let f = p("-3*x^2 + 3*y");
        assert_eq!(gcd(&f, &Poly::zero(&xy())), primitive_part(&f).unwrap());
        assert!(gcd(&Poly::zero(&xy()), &Poly::zero(&xy())).is_zero());
    }

    #[test]
    fn gcd_with_shared_content() {
        let t = VarTable::new(["x", "y", "z"]).unwrap();
        let a = Poly::parse("x*z + y*z + 2*x + 2*y", Some(&t)).unwrap(); // (x+y)(z+2)
        let b = Poly::parse("x*y + y^2 - x - y", Some(&t)).unwrap(); // (x+y)(y-1)
        assert_eq!(gcd(&a, &b).as_poly(), &Poly::parse("x + y", Some(&t)).unwrap());
    }

    #[test]
    fn squarefree_parts() {
        assert!(sqrfree_part(&p("12")).is_one());
        let f = p("x + y").pow(2) * p("x - y");
        assert_eq!(sqrfree_part(&f).as_poly(), &p("x^2 - y^2"));
        assert_eq!(sqrfree_part(&p("-2*x^2")).as_poly(), &p("x"));
    }
}

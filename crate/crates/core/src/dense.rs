//! Dense kernels behind the sparse interface: univariate integer polynomials
//! with a modular gcd, and determinants of polynomial matrices in few
//! variables by evaluation and interpolation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::euclid::{inv_mod, mulmod};
use crate::matrix::{det_rational, primes};
use crate::poly::{Coefficient, Monomial, Poly, VarTable};

/// Coefficients of `p` in variable `v`, lowest power first. `p` must have integer
/// coefficients and use no other variable.
pub(crate) fn to_dense(p: &Poly, v: usize) -> Vec<BigInt> {
    let d = p.degree_index(v) as usize;
    let mut out = vec![BigInt::zero(); d + 1];
    for (m, c) in p.terms() {
        debug_assert!(c.is_integer());
        out[m.exponent(v) as usize] = c.numer().clone();
    }
    out
}

pub(crate) fn from_dense(vars: &VarTable, v: usize, coeffs: &[BigInt]) -> Poly {
    let mut terms = Vec::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mut e = vec![0u32; vars.len()];
        e[v] = k as u32;
        terms.push((Monomial::from_exponents(e), BigRational::from_integer(c.clone())));
    }
    Poly::from_terms(vars, terms).expect("same table")
}

fn trim(a: &mut Vec<BigInt>) {
    while matches!(a.last(), Some(c) if c.is_zero()) {
        a.pop();
    }
}

fn trim_u64(a: &mut Vec<u64>) {
    while matches!(a.last(), Some(0)) {
        a.pop();
    }
}

fn reduce(a: &[BigInt], p: u64) -> Vec<u64> {
    let bp = BigInt::from(p);
    let mut out: Vec<u64> = a.iter().map(|c| c.mod_floor(&bp).to_u64().unwrap()).collect();
    trim_u64(&mut out);
    out
}

/// Monic gcd over the prime field.
fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    while !b.is_empty() {
        let inv = inv_mod(*b.last().unwrap(), p);
        while a.len() >= b.len() {
            let f = mulmod(*a.last().unwrap(), inv, p);
            let shift = a.len() - b.len();
            for (k, &bk) in b.iter().enumerate() {
                a[k + shift] = (a[k + shift] + p - mulmod(f, bk, p)) % p;
            }
            trim_u64(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&l) = a.last() {
        let inv = inv_mod(l, p);
        for c in a.iter_mut() {
            *c = mulmod(*c, inv, p);
        }
    }
    a
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(a: &[BigInt]) -> Vec<BigInt> {
    let mut c = content(a);
    if a.last().is_some_and(|l| l.is_negative()) {
        c = -c;
    }
    a.iter().map(|x| x / &c).collect()
}

/// `a / b` over the integers when exact.
pub(crate) fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    if r.len() < b.len() {
        return if r.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let top = &r[k + db];
        if top.is_zero() {
            continue;
        }
        let (qk, rem) = top.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                r[k + j] -= &qk * bj;
            }
        }
        q[k] = qk;
    }
    if r.iter().take(db).any(|c| !c.is_zero()) {
        return None;
    }
    Some(q)
}

/// Gcd of two primitive integer polynomials of positive degree, by Chinese
/// remaindering of prime-field images. The result is primitive with a positive
/// leading coefficient; it is checked by trial division before being returned.
pub(crate) fn gcd_dense(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let la = a.last().unwrap();
    let lb = b.last().unwrap();
    let g = la.gcd(lb);
    let mut deg = usize::MAX;
    let mut modulus = BigInt::one();
    let mut image: Vec<BigInt> = Vec::new();
    for p in primes() {
        let bp = BigInt::from(p);
        if (la % &bp).is_zero() || (lb % &bp).is_zero() {
            continue;
        }
        let mut gm = gcd_mod(reduce(a, p), reduce(b, p), p);
        if gm.len() == 1 {
            return vec![BigInt::one()];
        }
        let d = gm.len() - 1;
        if d > deg {
            continue;
        }
        let gp = g.mod_floor(&bp).to_u64().unwrap();
        for c in gm.iter_mut() {
            *c = mulmod(*c, gp, p);
        }
        if d < deg {
            deg = d;
            modulus = bp;
            image = gm.iter().map(|&c| symmetric(BigInt::from(c), &modulus)).collect();
            continue;
        }
        let m_mod = modulus.mod_floor(&bp).to_u64().unwrap();
        let inv = inv_mod(m_mod, p);
        let next_mod = &modulus * &bp;
        let mut changed = false;
        for (c, &r) in image.iter_mut().zip(&gm) {
            let cm = c.mod_floor(&bp).to_u64().unwrap();
            let t = mulmod((r + p - cm) % p, inv, p);
            if t != 0 {
                changed = true;
                *c = symmetric(&*c + &modulus * t, &next_mod);
            }
        }
        modulus = next_mod;
        if !changed {
            let cand = primitive(&image);
            if div_exact(a, &cand).is_some() && div_exact(b, &cand).is_some() {
                return cand;
            }
        }
    }
    unreachable!("prime supply exhausted")
}

fn symmetric(c: BigInt, m: &BigInt) -> BigInt {
    let c = c.mod_floor(m);
    if &c + &c > *m {
        c - m
    } else {
        c
    }
}

/// Upper bound on the degree of `det(m)` in variable `v`.
fn det_degree_bound(m: &[Vec<Poly>], v: usize) -> u32 {
    let n = m.len();
    let mut rows = 0u32;
    let mut cols = vec![None::<u32>; n];
    for r in m {
        let mut best = None::<u32>;
        for (j, e) in r.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let d = e.degree_index(v);
            best = Some(best.map_or(d, |b| b.max(d)));
            cols[j] = Some(cols[j].map_or(d, |b: u32| b.max(d)));
        }
        rows += best.unwrap_or(0);
    }
    let cols: u32 = cols.into_iter().map(|c| c.unwrap_or(0)).sum();
    rows.min(cols)
}

/// Sample points `0, 1, -1, 2, -2, ..`.
fn sample_points(count: usize) -> Vec<BigInt> {
    (0..count as i64)
        .map(|k| if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) })
        .map(BigInt::from)
        .collect()
}

/// Number of evaluations [`det_interpolate`] would perform, if it applies.
pub(crate) fn interpolation_cost(m: &[Vec<Poly>], vars: &[usize]) -> u64 {
    vars.iter()
        .map(|&v| det_degree_bound(m, v) as u64 + 1)
        .fold(1u64, |acc, b| acc.saturating_mul(b))
}

/// Determinant of a polynomial matrix whose entries use only `vars`, by
/// evaluating one variable at a time and interpolating with Newton's formula.
pub(crate) fn det_interpolate(m: &[Vec<Poly>], table: &VarTable, vars: &[usize]) -> Poly {
    let Some((&v, rest)) = vars.split_first() else {
        let q: Vec<Vec<Coefficient>> = m
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| e.constant_value().expect("all variables bound"))
                    .collect()
            })
            .collect();
        return Poly::constant(table, det_rational(&q));
    };
    let bound = det_degree_bound(m, v) as usize;
    let points = sample_points(bound + 1);
    let name = table.name(v).to_string();
    let values: Vec<Poly> = points
        .iter()
        .map(|x| {
            let val = BigRational::from_integer(x.clone());
            let spec: Vec<Vec<Poly>> = m
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|e| {
                            if e.degree_index(v) == 0 {
                                e.clone()
                            } else {
                                e.specialize(&[(name.as_str(), val.clone())]).expect("known variable")
                            }
                        })
                        .collect()
                })
                .collect();
            det_interpolate(&spec, table, rest)
        })
        .collect();
    interpolate(table, v, &points, &values)
}

/// The polynomial of degree below `points.len()` in `v` taking `values[k]` at `points[k]`,
/// coefficientwise in the other variables.
fn interpolate(table: &VarTable, v: usize, points: &[BigInt], values: &[Poly]) -> Poly {
    let mut by_mono: BTreeMap<Monomial, Vec<Coefficient>> = BTreeMap::new();
    let k = points.len();
    for (j, val) in values.iter().enumerate() {
        for (mono, c) in val.terms() {
            by_mono
                .entry(mono.clone())
                .or_insert_with(|| vec![Coefficient::zero(); k])[j] = c.clone();
        }
    }
    let xs: Vec<Coefficient> = points.iter().map(|p| BigRational::from_integer(p.clone())).collect();
    let mut terms = Vec::new();
    for (mono, ys) in by_mono {
        let coeffs = newton(&xs, ys);
        for (e, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                terms.push((mono.with_exponent(v, e as u32), c));
            }
        }
    }
    Poly::from_terms(table, terms).expect("same table")
}

/// Monomial-basis coefficients of the interpolating polynomial.
fn newton(xs: &[Coefficient], mut dd: Vec<Coefficient>) -> Vec<Coefficient> {
    let n = xs.len();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            if num.is_zero() {
                dd[i] = num;
            } else {
                dd[i] = num / (&xs[i] - &xs[i - level]);
            }
        }
    }
    let mut poly = vec![Coefficient::zero(); n];
    let mut len = 0usize;
    for i in (0..n).rev() {
        // poly = poly * (t - xs[i]) + dd[i]
        if len > 0 {
            poly[len] = poly[len - 1].clone();
            for k in (1..len).rev() {
                let t = &poly[k - 1] - &(&poly[k] * &xs[i]);
                poly[k] = t;
            }
            poly[0] = -(&poly[0] * &xs[i]);
        }
        poly[0] += &dd[i];
        len += 1;
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn dense_gcd() {
        // (t - 1)(t + 2) and (t - 1)(3t + 5)
        let a = ints(&[-2, 1, 1]);
        let b = ints(&[-5, 2, 3]);
        assert_eq!(gcd_dense(&a, &b), ints(&[-1, 1]));
        let c = ints(&[1, 0, 1]);
        assert_eq!(gcd_dense(&a, &c), ints(&[1]));
    }

    #[test]
    fn dense_division() {
        let a = ints(&[-2, 1, 1]);
        assert_eq!(div_exact(&a, &ints(&[-1, 1])), Some(ints(&[2, 1])));
        assert_eq!(div_exact(&a, &ints(&[1, 1])), None);
    }

    #[test]
    fn newton_recovers_coefficients() {
        let xs: Vec<Coefficient> = sample_points(4).into_iter().map(BigRational::from_integer).collect();
        // 3t^3 - t + 7
        let ys: Vec<Coefficient> = xs
            .iter()
            .map(|x| x * x * x * BigRational::from_integer(3.into()) - x + BigRational::from_integer(7.into()))
            .collect();
        let c = newton(&xs, ys);
        let expect: Vec<Coefficient> = [7, -1, 0, 3]
            .iter()
            .map(|&v| BigRational::from_integer(v.into()))
            .collect();
        assert_eq!(c, expect);
    }

    #[test]
    fn interpolated_determinant_matches_bareiss() {
        let t = VarTable::new(["s", "t"]).unwrap();
        let p = |s: &str| Poly::parse(s, Some(&t)).unwrap();
        let m = vec![
            vec![p("s + t"), p("2*s - 1"), p("t^2"), p("1")],
            vec![p("3"), p("s*t"), p("0"), p("t - 4")],
            vec![p("s^2 - t"), p("1/2"), p("s"), p("7")],
            vec![p("t"), p("s - t"), p("2*s*t + 1"), p("-3")],
        ];
        let direct = crate::matrix::bareiss_poly(m.clone());
        assert_eq!(det_interpolate(&m, &t, &[0, 1]), direct);
    }
}

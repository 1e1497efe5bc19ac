//! Sylvester matrices, resultants with respect to one variable, and discriminants.
//!
//! The primary resultant is the Bareiss determinant of the Sylvester matrix.
//! [`resultant_prs`] computes the same value through a subresultant remainder
//! sequence and serves as an independent cross-check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::euclid::exact_div;
use crate::matrix::det_poly;
use crate::poly::{Coefficient, Poly};
use crate::upoly::UPoly;

/// The Sylvester matrix of two polynomials with respect to `var`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SylvesterMatrix {
    pub entries: Vec<Vec<Poly>>,
    pub var: String,
}

impl SylvesterMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn determinant(&self, p: &Poly) -> Poly {
        det_poly(&self.entries, p.vars())
    }
}

fn elimination_index(p: &Poly, q: &Poly, var: &str) -> Result<(Poly, Poly, usize)> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let table = p.vars().merge(q.vars());
    let (table, i) = table.with_var(var)?;
    Ok((p.embed(&table), q.embed(&table), i))
}

/// Rows of `p`'s coefficients (highest power first) above rows of `q`'s.
pub fn sylvester(p: &Poly, q: &Poly, var: &str) -> Result<SylvesterMatrix> {
    let (p, q, i) = elimination_index(p, q, var)?;
    let m = p.degree_index(i) as usize;
    let n = q.degree_index(i) as usize;
    if m == 0 && n == 0 {
        return Err(Error::BothConstantInV(var.to_string()));
    }
    let dim = m + n;
    let zero = Poly::zero(p.vars());
    let pc = p.coeffs_in(i);
    let qc = q.coeffs_in(i);
    let mut entries = vec![vec![zero; dim]; dim];
    for r in 0..n {
        for (k, c) in pc.iter().rev().enumerate() {
            entries[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in qc.iter().rev().enumerate() {
            entries[n + r][r + k] = c.clone();
        }
    }
    Ok(SylvesterMatrix {
        entries,
        var: var.to_string(),
    })
}

/// Determinant of the Sylvester matrix.
///
/// When both inputs are homogeneous in `var` together with a set `W` of other
/// variables, and their leading coefficients in `var` avoid `W`, one variable
/// `w` of `W` is set to 1 and restored afterwards: the resultant is then
/// homogeneous of degree `deg p * deg q` in `W`.
pub fn resultant(p: &Poly, q: &Poly, var: &str) -> Result<Poly> {
    let (pe, qe, i) = elimination_index(p, q, var)?;
    let w_set = homogeneity_set(&pe, &qe, i);
    let Some(&w) = w_set.last() else {
        let s = sylvester(&pe, &qe, var)?;
        return Ok(det_poly(&s.entries, pe.vars()));
    };
    let table = pe.vars().clone();
    let one = [(table.name(w), Coefficient::one())];
    let (p1, q1) = (pe.specialize(&one)?, qe.specialize(&one)?);
    let s = sylvester(&p1, &q1, var)?;
    let r1 = det_poly(&s.entries, &table);
    let total = pe.degree_index(i) * qe.degree_index(i);
    let terms = r1.terms().iter().map(|(m, c)| {
        let e: u32 = w_set.iter().map(|&k| m.exponent(k)).sum();
        debug_assert!(e <= total);
        (m.with_exponent(w, total - e), c.clone())
    });
    Poly::from_terms(&table, terms)
}

/// Largest set `W` of variables, not containing `i`, such that every term of `p`
/// (resp. `q`) has degree `deg_i p` (resp. `deg_i q`) in `{i} ∪ W`. Variables of
/// the leading coefficients in `i` are excluded. Empty when there is none.
fn homogeneity_set(p: &Poly, q: &Poly, i: usize) -> Vec<usize> {
    let (m, n) = (p.degree_index(i), q.degree_index(i));
    let (lp, lq) = (p.coeff_of_power(i, m), q.coeff_of_power(i, n));
    let lead_vars: Vec<usize> = lp.used_vars().into_iter().chain(lq.used_vars()).collect();
    let mut cands: Vec<usize> = p.used_vars().into_iter().chain(q.used_vars()).collect();
    cands.sort_unstable();
    cands.dedup();
    cands.retain(|&k| k != i && !lead_vars.contains(&k));
    if cands.is_empty() {
        return Vec::new();
    }
    let fits = |set: &[usize]| {
        let ok = |f: &Poly, d: u32| {
            f.terms()
                .iter()
                .all(|(mono, _)| mono.exponent(i) + set.iter().map(|&k| mono.exponent(k)).sum::<u32>() == d)
        };
        ok(p, m) && ok(q, n)
    };
    let k = cands.len();
    if k > 10 {
        return if fits(&cands) { cands } else { Vec::new() };
    }
    let mut best: Vec<usize> = Vec::new();
    for mask in 1u32..(1 << k) {
        if (mask.count_ones() as usize) <= best.len() {
            continue;
        }
        let set: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| cands[b]).collect();
        if fits(&set) {
            best = set;
        }
    }
    best
}

/// Resultant through the subresultant remainder sequence.
pub fn resultant_prs(p: &Poly, q: &Poly, var: &str) -> Result<Poly> {
    let (p, q, i) = elimination_index(p, q, var)?;
    let m = p.degree_index(i);
    let n = q.degree_index(i);
    if m == 0 && n == 0 {
        return Err(Error::BothConstantInV(var.to_string()));
    }
    if m == 0 {
        return Ok(p.pow(n));
    }
    if n == 0 {
        return Ok(q.pow(m));
    }
    let mut a = UPoly::from_poly(&p, i);
    let mut b = UPoly::from_poly(&q, i);
    let mut negate = false;
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            negate = true;
        }
    }
    let one = Poly::one(p.vars());
    let mut g = one.clone();
    let mut h = one;
    loop {
        let delta = (a.deg() - b.deg()) as u32;
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            negate = !negate;
        }
        let r = a.prem(&b);
        if r.is_zero() {
            return Ok(Poly::zero(p.vars()));
        }
        let divisor = &g * &h.pow(delta);
        let next = r.div_scalar(&divisor)?;
        a = b;
        b = next;
        g = a.lc().clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => exact_div(&g.pow(delta), &h.pow(delta - 1))?,
        };
        if b.deg() == 0 {
            let da = a.deg() as u32;
            let lb = b.lc();
            let res = match da {
                0 => h,
                1 => lb.clone(),
                _ => exact_div(&lb.pow(da), &h.pow(da - 1))?,
            };
            return Ok(if negate { -res } else { res });
        }
    }
}

/// Discriminant with respect to `var`, from `lc * disc = (-1)^(l(l-1)/2) * Res(p, p')`.
pub fn discriminant(p: &Poly, var: &str) -> Result<Poly> {
    let l = p.degree(var).unwrap_or(0);
    if l == 0 {
        return Err(Error::ConstantInV(var.to_string()));
    }
    let dp = p.derivative(var)?;
    let r = resultant(p, &dp, var)?;
    let signed = if (l as u64 * (l as u64 - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    };
    exact_div(&signed, &p.lc(var)?)
}

/// Discriminant of a univariate polynomial with rational coefficients (index = power).
pub fn discriminant_dense(coeffs: &[BigRational]) -> Result<BigRational> {
    let vars = crate::poly::VarTable::new(["t"])?;
    let terms = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| (crate::poly::Monomial::from_exponents([k as u32]), c.clone()));
    let p = Poly::from_terms(&vars, terms)?;
    let d = discriminant(&p, "t")?;
    Ok(d.constant_value()
        .unwrap_or_else(|| BigRational::from_integer(BigInt::from(0))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarTable;

    fn t() -> VarTable {
        VarTable::new(["x", "a", "b", "c", "t"]).unwrap()
    }

    fn p(s: &str) -> Poly {
        Poly::parse(s, Some(&t())).unwrap()
    }

    #[test]
    fn sylvester_layout() {
        let s = sylvester(&p("x^2 - 1"), &p("2*x"), "x").unwrap();
        let expect = [["1", "0", "-1"], ["2", "0", "0"], ["0", "2", "0"]];
        for (r, row) in expect.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                assert_eq!(s.entries[r][c], p(e));
            }
        }
        let s2 = sylvester(&p("x - a"), &p("x - b"), "x").unwrap();
        assert_eq!(s2.entries, vec![vec![p("1"), p("-a")], vec![p("1"), p("-b")]]);
        let s3 = sylvester(&p("a"), &p("x"), "x").unwrap();
        assert_eq!(s3.entries, vec![vec![p("a")]]);
        assert_eq!(
            sylvester(&p("a"), &p("b"), "x"),
            Err(Error::BothConstantInV("x".into()))
        );
        assert_eq!(sylvester(&p("0"), &p("x"), "x"), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn resultants() {
        assert_eq!(resultant(&p("x^2 - 1"), &p("2*x"), "x").unwrap(), p("-4"));
        assert_eq!(resultant(&p("x - a"), &p("x - b"), "x").unwrap(), p("a - b"));
        let common = p("x - 1");
        let f = &common * &p("x^2 + a");
        let g = &common * &p("x + b");
        assert!(resultant(&f, &g, "x").unwrap().is_zero());
        assert!(resultant_prs(&f, &g, "x").unwrap().is_zero());
    }

    #[test]
    fn prs_matches_sylvester() {
        let cases = [
            ("x^3 + a*x + b", "3*x^2 + a"),
            ("a*x^2 + b*x + c", "x - t"),
            ("x - t", "a*x^4 + b*x + c"),
            ("x^2*a + x*b", "x^3 - c"),
        ];
        for (f, g) in cases {
            let (f, g) = (p(f), p(g));
            assert_eq!(
                resultant(&f, &g, "x").unwrap(),
                resultant_prs(&f, &g, "x").unwrap(),
                "{f} / {g}"
            );
        }
    }

    #[test]
    fn homogeneous_inputs_match_prs() {
        let t = VarTable::new(["x", "y", "z", "a", "b"]).unwrap();
        let q = |s: &str| Poly::parse(s, Some(&t)).unwrap();
        let cases = [
            ("a*z^3 + x*y*z + y^3 - b*x^3", "3*a*z^2 + x*y"),
            ("z^2 + x*z - a*y^2", "2*z + x"),
            ("x^2*y + z^3", "z*x + b*y^2"),
        ];
        for (f, g) in cases {
            let (f, g) = (q(f), q(g));
            assert_eq!(
                resultant(&f, &g, "z").unwrap(),
                resultant_prs(&f, &g, "z").unwrap(),
                "{f} / {g}"
            );
        }
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&p("x^2 + b*x + c"), "x").unwrap(), p("b^2 - 4*c"));
        assert_eq!(discriminant(&p("x^2 - 1"), "x").unwrap(), p("4"));
        assert!(discriminant(&p("x^2 - 2*t*x + t^2"), "x").unwrap().is_zero());
        assert_eq!(
            discriminant(&p("a*x^3 + b*x + c"), "x").unwrap(),
            p("-4*a*b^3 - 27*a^2*c^2")
        );
        assert_eq!(discriminant(&p("a + b"), "x"), Err(Error::ConstantInV("x".into())));
    }
}

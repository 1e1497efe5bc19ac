//! Recursive view of a polynomial as univariate in one variable with polynomial
//! coefficients. Shared by the gcd and the subresultant resultant.

use crate::error::Result;
use crate::euclid::exact_div;
use crate::poly::{Poly, VarTable};

#[derive(Clone, Debug)]
pub(crate) struct UPoly {
    pub vars: VarTable,
    pub var: usize,
    /// `coeffs[k]` multiplies `var^k`; trimmed so the last entry is nonzero.
    pub coeffs: Vec<Poly>,
}

impl UPoly {
    pub fn from_poly(p: &Poly, var: usize) -> Self {
        UPoly {
            vars: p.vars().clone(),
            var,
            coeffs: p.coeffs_in(var),
        }
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_coeffs(&self.vars, self.var, &self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; panics on zero.
    pub fn deg(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn lc(&self) -> &Poly {
        self.coeffs.last().expect("nonzero")
    }

    pub fn div_scalar(&self, c: &Poly) -> Result<UPoly> {
        if c.is_one() {
            return Ok(self.clone());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| exact_div(a, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(UPoly {
            vars: self.vars.clone(),
            var: self.var,
            coeffs,
        })
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn prem(&self, b: &UPoly) -> UPoly {
        let db = b.deg();
        let mut r = self.coeffs.clone();
        if r.len() < db + 1 {
            return self.clone();
        }
        let lb = b.lc();
        let mut e = r.len() - db;
        while !r.is_empty() && r.len() > db {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            let shift = dr - db;
            for c in r.iter_mut() {
                *c = &*c * lb;
            }
            for (k, bk) in b.coeffs.iter().enumerate() {
                if bk.is_zero() {
                    continue;
                }
                let t = &lr * bk;
                r[k + shift] = &r[k + shift] - &t;
            }
            debug_assert!(r[dr].is_zero());
            r.pop();
            while matches!(r.last(), Some(c) if c.is_zero()) {
                r.pop();
            }
            e -= 1;
        }
        if e > 0 && !r.is_empty() {
            let f = lb.pow(e as u32);
            for c in r.iter_mut() {
                *c = &*c * &f;
            }
        }
        UPoly {
            vars: self.vars.clone(),
            var: self.var,
            coeffs: r,
        }
    }
}

//! Parser for the polynomial text grammar:
//!
//! ```text
//! poly   := [sign] term (('+'|'-') term)*
//! term   := [coeff] ('*'? factor)*
//! coeff  := integer ('/' integer)?
//! factor := ident ('^' integer)?
//! ident  := [A-Za-z_][A-Za-z0-9_]*
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Coefficient, Monomial, Poly, VarTable};

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        Ok(s.parse().expect("ascii digits"))
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        match self.text.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => self.pos += 1,
            _ => return None,
        }
        while self.pos < self.text.len() && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
        {
            self.pos += 1;
        }
        Some(std::str::from_utf8(&self.text[start..self.pos]).unwrap())
    }
}

type RawTerm = (Coefficient, Vec<(String, u32)>);

fn parse_term(cur: &mut Cursor<'_>) -> Result<RawTerm> {
    let mut coeff = Coefficient::one();
    let mut factors = Vec::new();
    let mut seen_any = false;
    if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
        let n = cur.digits()?;
        let mut c = BigRational::from_integer(n);
        if cur.peek() == Some(b'/') {
            cur.pos += 1;
            let d = cur.digits()?;
            if d.is_zero() {
                return cur.err("zero denominator");
            }
            c /= BigRational::from_integer(d);
        }
        coeff = c;
        seen_any = true;
    }
    loop {
        let star = cur.peek() == Some(b'*');
        if star {
            cur.pos += 1;
        }
        let at = cur.pos;
        match cur.ident() {
            Some(name) => {
                let mut e = 1u32;
                if cur.peek() == Some(b'^') {
                    cur.pos += 1;
                    if !matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
                        return cur.err("exponent must be a nonnegative integer");
                    }
                    let big = cur.digits()?;
                    e = u32::try_from(big).or_else(|_| cur.err("exponent too large"))?;
                }
                factors.push((name.to_string(), e));
                seen_any = true;
            }
            None => {
                if star {
                    cur.pos = at;
                    return cur.err("expected a variable after '*'");
                }
                break;
            }
        }
    }
    if !seen_any {
        return cur.err("expected a term");
    }
    Ok((coeff, factors))
}

pub(crate) fn parse_poly(text: &str, table: Option<&VarTable>) -> Result<Poly> {
    let mut cur = Cursor {
        text: text.as_bytes(),
        pos: 0,
    };
    let mut raw: Vec<RawTerm> = Vec::new();
    let mut negate = false;
    match cur.peek() {
        Some(b'-') => {
            cur.pos += 1;
            negate = true;
        }
        Some(b'+') => cur.pos += 1,
        None => return cur.err("empty input"),
        _ => {}
    }
    loop {
        let (c, fs) = parse_term(&mut cur)?;
        raw.push((if negate { -c } else { c }, fs));
        match cur.peek() {
            Some(b'+') => {
                cur.pos += 1;
                negate = false;
            }
            Some(b'-') => {
                cur.pos += 1;
                negate = true;
            }
            None => break,
            Some(_) => return cur.err("unexpected character"),
        }
    }
    let mut names: Vec<String> = table.map(|t| t.names().to_vec()).unwrap_or_default();
    for (_, fs) in &raw {
        for (n, _) in fs {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
    }
    let vars = match table {
        Some(t) if t.len() == names.len() => t.clone(),
        _ => VarTable::new(names)?,
    };
    let terms = raw.into_iter().map(|(c, fs)| {
        let mut exps = vec![0u32; vars.len()];
        for (n, e) in fs {
            exps[vars.index_of(&n).unwrap()] += e;
        }
        (Monomial::from_exponents(exps), c)
    });
    Poly::from_terms(&vars, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_example_value() {
        let s = "4*a*c*f - a*e^2 - b^2*f + b*d*e - c*d^2";
        let p = parse_poly(s, None).unwrap();
        assert_eq!(p.num_terms(), 5);
        assert_eq!(parse_poly(&p.to_string(), None).unwrap(), p);
    }

    #[test]
    fn rejects_negative_exponent() {
        match parse_poly("x^-1", None) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("", None).is_err());
        assert!(parse_poly("x +", None).is_err());
        assert!(parse_poly("x * * y", None).is_err());
        assert!(parse_poly("3/0", None).is_err());
        assert!(parse_poly("x $ y", None).is_err());
    }

    #[test]
    fn juxtaposition_and_signs() {
        let p = parse_poly("-2 x y^2 + 3x", None).unwrap();
        assert_eq!(p.to_string(), "-2*x*y^2 + 3*x");
        let q = parse_poly("+x - x", None).unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn respects_given_table() {
        let t = VarTable::new(["z", "y", "x"]).unwrap();
        let p = parse_poly("x + y", Some(&t)).unwrap();
        assert_eq!(p.vars(), &t);
        let q = parse_poly("w", Some(&t)).unwrap();
        assert_eq!(q.vars().names().len(), 4);
    }
}

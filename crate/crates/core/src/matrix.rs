//! Exact determinants: fraction-free Bareiss elimination over polynomial and
//! integer entries, plus a multimodular route for large integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::dense::{det_interpolate, interpolation_cost};
use crate::euclid::{exact_div, inv_mod, mulmod};
use crate::poly::{Coefficient, Poly, VarTable};

/// Integer matrices at least this large go through the multimodular route.
pub const MODULAR_THRESHOLD: usize = 40;

/// Polynomial determinants in at most this many variables may go through
/// evaluation and interpolation ...
const INTERPOLATION_MAX_VARS: usize = 3;
/// ... when the evaluation grid has at most this many points ...
const INTERPOLATION_MAX_POINTS: u64 = 40_000;
/// ... and the matrix is at least this large.
const INTERPOLATION_MIN_DIM: usize = 4;

/// Determinant of a square matrix of polynomials over `vars`.
pub fn det_poly(m: &[Vec<Poly>], vars: &VarTable) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(vars);
    }
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    if m.iter().flatten().all(Poly::is_constant) {
        let q: Vec<Vec<Coefficient>> = m
            .iter()
            .map(|r| r.iter().map(|e| e.constant_value().unwrap()).collect())
            .collect();
        return Poly::constant(vars, det_rational(&q));
    }
    let table = m.iter().flatten().fold(vars.clone(), |t, e| t.merge(e.vars()));
    let a: Vec<Vec<Poly>> = m.iter().map(|r| r.iter().map(|e| e.embed(&table)).collect()).collect();
    let used: Vec<usize> = (0..table.len())
        .filter(|&v| a.iter().flatten().any(|e| e.degree_index(v) > 0))
        .collect();
    if n >= INTERPOLATION_MIN_DIM
        && used.len() <= INTERPOLATION_MAX_VARS
        && interpolation_cost(&a, &used) <= INTERPOLATION_MAX_POINTS
    {
        return det_interpolate(&a, &table, &used);
    }
    bareiss_poly(a)
}

/// Fraction-free Gaussian elimination over the polynomial ring.
pub fn bareiss_poly(mut a: Vec<Vec<Poly>>) -> Poly {
    let n = a.len();
    assert!(n > 0, "empty matrix has no variable table");
    let vars = a[0][0].vars().clone();
    let mut negate = false;
    let mut prev = Poly::one(&vars);
    for k in 0..n - 1 {
        let pivot = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| a[i][k].weight());
        let Some(pr) = pivot else {
            return Poly::zero(&vars);
        };
        if pr != k {
            a.swap(pr, k);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let row_k = &top[k];
        let pivot = &row_k[k];
        for row in rest.iter_mut() {
            let lead = std::mem::replace(&mut row[k], Poly::zero(&vars));
            for j in k + 1..n {
                let mut t = if row[j].is_zero() {
                    Poly::zero(&vars)
                } else {
                    pivot * &row[j]
                };
                if !lead.is_zero() && !row_k[j].is_zero() {
                    t = &t - &(&lead * &row_k[j]);
                }
                row[j] = if prev.is_one() {
                    t
                } else {
                    exact_div(&t, &prev).expect("Bareiss division is exact")
                };
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Determinant of a rational matrix, via row scaling to integers.
pub fn det_rational(m: &[Vec<BigRational>]) -> BigRational {
    let mut scale = BigInt::one();
    let rows: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            scale *= &l;
            r.iter().map(|c| c.numer() * (&l / c.denom())).collect()
        })
        .collect();
    BigRational::new(det_integer(&rows), scale)
}

/// Exact integer determinant; dispatches on size.
pub fn det_integer(m: &[Vec<BigInt>]) -> BigInt {
    if m.len() >= MODULAR_THRESHOLD {
        det_multimodular(m)
    } else {
        det_bareiss_int(m)
    }
}

pub fn det_bareiss_int(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        let pivot = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| a[i][k].bits());
        let Some(pr) = pivot else {
            return BigInt::zero();
        };
        if pr != k {
            a.swap(pr, k);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let row_k = &top[k];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let mut t = &row_k[k] * &row[j];
                if !lead.is_zero() {
                    t -= &lead * &row_k[j];
                }
                row[j] = if prev.is_one() { t } else { t / &prev };
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = crate::euclid::pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below 2^31, descending.
pub(crate) fn primes() -> impl Iterator<Item = u64> {
    (1u64..(1 << 31)).rev().filter(|&n| is_prime_u64(n))
}

/// log2 of the Hadamard bound, rounded up.
fn hadamard_bits(m: &[Vec<BigInt>]) -> u64 {
    m.iter()
        .map(|r| {
            let s: BigInt = r.iter().map(|e| e * e).sum();
            s.bits() / 2 + 1
        })
        .sum::<u64>()
        + 1
}

fn det_mod_prime(a: &mut [u64], n: usize, p: u64) -> u64 {
    let mut det = 1u64;
    for k in 0..n {
        let Some(pr) = (k..n).find(|&i| a[i * n + k] != 0) else {
            return 0;
        };
        if pr != k {
            for j in 0..n {
                a.swap(pr * n + j, k * n + j);
            }
            det = (p - det) % p;
        }
        let pivot = a[k * n + k];
        det = mulmod(det, pivot, p);
        let inv = inv_mod(pivot, p);
        for i in k + 1..n {
            let f = a[i * n + k] * inv % p;
            if f == 0 {
                continue;
            }
            let nf = p - f;
            let (upper, lower) = a.split_at_mut(i * n);
            let rk = &upper[k * n..k * n + n];
            let ri = &mut lower[..n];
            for j in k + 1..n {
                ri[j] = (ri[j] + nf * rk[j]) % p;
            }
        }
    }
    det
}

/// Determinant by Chinese remaindering over word-size primes up to the Hadamard bound.
pub fn det_multimodular(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let bound_bits = hadamard_bits(m) + 1;
    let small: Option<Vec<i64>> = m.iter().flatten().map(|e| e.to_i64()).collect();
    let mut modulus = BigInt::one();
    let mut value = BigInt::zero();
    let mut buf = vec![0u64; n * n];
    for p in primes() {
        if modulus.bits() > bound_bits {
            break;
        }
        match &small {
            Some(s) => {
                for (dst, &e) in buf.iter_mut().zip(s.iter()) {
                    *dst = e.rem_euclid(p as i64) as u64;
                }
            }
            None => {
                let bp = BigInt::from(p);
                for (dst, e) in buf.iter_mut().zip(m.iter().flatten()) {
                    *dst = e.mod_floor(&bp).to_u64().unwrap();
                }
            }
        }
        let r = det_mod_prime(&mut buf, n, p);
        // Garner step
        let bp = BigInt::from(p);
        let x_mod = value.mod_floor(&bp).to_u64().unwrap();
        let m_mod = modulus.mod_floor(&bp).to_u64().unwrap();
        let t = mulmod((r + p - x_mod) % p, inv_mod(m_mod, p), p);
        value += &modulus * t;
        modulus *= p;
    }
    let half = &modulus >> 1;
    if value > half {
        value -= &modulus;
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn small_integer_determinants() {
        let m = ints(&[&[1, 0, -1], &[2, 0, 0], &[0, 2, 0]]);
        assert_eq!(det_bareiss_int(&m), BigInt::from(-4));
        assert_eq!(det_multimodular(&m), BigInt::from(-4));
        let singular = ints(&[&[1, 2], &[2, 4]]);
        assert!(det_bareiss_int(&singular).is_zero());
        assert!(det_multimodular(&singular).is_zero());
    }

    #[test]
    fn modular_agrees_with_bareiss() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [5usize, 12, 30] {
            let m: Vec<Vec<BigInt>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000)))
                        .collect()
                })
                .collect();
            assert_eq!(det_bareiss_int(&m), det_multimodular(&m));
        }
    }

    #[test]
    fn rational_determinant() {
        let half = BigRational::new(1.into(), 2.into());
        let m = vec![
            vec![half.clone(), BigRational::from_integer(1.into())],
            vec![BigRational::from_integer(3.into()), half],
        ];
        assert_eq!(det_rational(&m), BigRational::new((-11).into(), 4.into()));
    }

    #[test]
    fn polynomial_determinant() {
        let t = VarTable::new(["a", "b"]).unwrap();
        let p = |s: &str| Poly::parse(s, Some(&t)).unwrap();
        let m = vec![vec![p("1"), p("-a")], vec![p("1"), p("-b")]];
        assert_eq!(det_poly(&m, &t), p("a - b"));
        let m3 = vec![
            vec![p("a"), p("b"), p("0")],
            vec![p("0"), p("a"), p("b")],
            vec![p("b"), p("0"), p("a")],
        ];
        assert_eq!(det_poly(&m3, &t), p("a^3 + b^3"));
    }
}

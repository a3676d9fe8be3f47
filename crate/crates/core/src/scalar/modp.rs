// SPDX-License-Identifier: Apache-2.0

//! Modular images of polynomials, used to prove coprimality cheaply.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::poly::Poly;

const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn add(a: u64, b: u64) -> u64 {
    (a + b) % P
}

fn sub(a: u64, b: u64) -> u64 {
    (a + P - b) % P
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn reduce_int(n: &BigInt) -> u64 {
    let r = n % BigInt::from(P);
    let r = if r < BigInt::zero() { r + BigInt::from(P) } else { r };
    r.to_u64().expect("residue fits")
}

/// `None` when the denominator vanishes modulo the prime.
fn reduce(c: &BigRational) -> Option<u64> {
    let d = reduce_int(c.denom());
    if d == 0 {
        return None;
    }
    Some(mul(reduce_int(c.numer()), inv(d)))
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    (z ^ (z >> 31)) % P
}

/// Coefficients in `u^{v+1}` after substituting `points` for the other coordinates.
fn image(p: &Poly, v: usize, points: &[u64]) -> Option<Vec<u64>> {
    let mut out = vec![0u64; p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = reduce(c)?;
        for (w, &e) in m.exponents().iter().enumerate() {
            if w != v && e > 0 {
                t = mul(t, pow(points[w], e as u64));
            }
        }
        let e = m.exp(v) as usize;
        out[e] = add(out[e], t);
    }
    Some(out)
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn rem(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let lb = inv(*b.last().expect("nonzero divisor"));
    while r.len() >= b.len() {
        let q = mul(*r.last().expect("nonempty"), lb);
        let shift = r.len() - b.len();
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = sub(r[shift + i], mul(q, bc));
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

/// Upper bounds on the degree of `gcd(a, b)` in each coordinate; `None` when
/// every tried evaluation was unlucky.
pub fn degree_bounds(a: &Poly, b: &Poly) -> Option<Vec<u32>> {
    let nvars = match (a.max_var(), b.max_var()) {
        (Some(x), Some(y)) => x.max(y) + 1,
        _ => return Some(Vec::new()),
    };
    let mut state = 0x5EED_u64;
    let mut bounds = vec![0u32; nvars];
    'var: for (v, bound) in bounds.iter_mut().enumerate() {
        let (da, db) = (a.degree_in(v), b.degree_in(v));
        if da == 0 || db == 0 {
            continue;
        }
        for _ in 0..3 {
            let points: Vec<u64> = (0..nvars).map(|_| splitmix(&mut state)).collect();
            let (ia, ib) = (image(a, v, &points)?, image(b, v, &points)?);
            if ia[da as usize] == 0 || ib[db as usize] == 0 {
                continue;
            }
            *bound = gcd_degree(ia, ib) as u32;
            continue 'var;
        }
        return None;
    }
    Some(bounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn poly(text: &str) -> Poly {
        Scalar::parse(text).unwrap().numerator().clone()
    }

    #[test]
    fn bounds_match_true_gcd_degrees() {
        assert_eq!(degree_bounds(&poly("u1^2 - u2 - 1"), &poly("u1*u2 + 3")), Some(vec![0, 0]));
        assert_eq!(degree_bounds(&poly("(u1 + u2)*(u1 - 1)"), &poly("(u1 + u2)*(u2 + 5)")), Some(vec![1, 1]));
        assert_eq!(degree_bounds(&poly("u1^2*u2"), &poly("u1*u2^3 + u1")), Some(vec![1, 0]));
    }
}

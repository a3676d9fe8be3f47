// SPDX-License-Identifier: Apache-2.0

//! Heuristic gcd candidates by integer evaluation and `ξ`-adic reconstruction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::{Mono, Poly};

const ATTEMPTS: usize = 6;

type IntPoly = BTreeMap<Mono, BigInt>;

fn from_poly(p: &Poly) -> Option<IntPoly> {
    p.terms()
        .iter()
        .map(|(m, c)| c.is_integer().then(|| (m.clone(), c.to_integer())))
        .collect()
}

fn to_poly(p: &IntPoly) -> Poly {
    p.iter()
        .fold(Poly::zero(), |acc, (m, c)| acc.add(&Poly::term(m.clone(), BigRational::from_integer(c.clone()))))
}

fn norm(p: &IntPoly) -> BigInt {
    p.values().map(BigInt::abs).max().unwrap_or_default()
}

fn max_var(p: &IntPoly) -> Option<usize> {
    p.keys().filter_map(|m| m.exponents().iter().rposition(|&e| e > 0)).max()
}

fn content(p: &IntPoly) -> BigInt {
    p.values().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn eval(p: &IntPoly, v: usize, xi: &BigInt) -> IntPoly {
    let mut out = IntPoly::new();
    for (m, c) in p {
        let e = m.exp(v);
        let k = m.exponents().iter().enumerate().map(|(w, &x)| if w == v { 0 } else { x }).collect();
        *out.entry(Mono::from_exponents(k)).or_insert_with(BigInt::zero) += c * xi.pow(e);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn symmetric_mod(c: &BigInt, xi: &BigInt) -> BigInt {
    let r = c.mod_floor(xi);
    if &r * 2 > *xi {
        r - xi
    } else {
        r
    }
}

/// Rebuild a polynomial in `u^{v+1}` from its value at `ξ`.
fn lift(mut h: IntPoly, v: usize, xi: &BigInt) -> IntPoly {
    let mut out = IntPoly::new();
    let mut e = 0u32;
    while !h.is_empty() {
        let mut next = IntPoly::new();
        for (m, c) in &h {
            let r = symmetric_mod(c, xi);
            if !r.is_zero() {
                out.insert(m.with_var_exp(v, e), r.clone());
            }
            let q = (c - r) / xi;
            if !q.is_zero() {
                next.insert(m.clone(), q);
            }
        }
        h = next;
        e += 1;
    }
    out
}

fn divides(d: &IntPoly, p: &IntPoly) -> bool {
    to_poly(p).exact_div(&to_poly(d)).is_some()
}

fn candidate(a: &IntPoly, b: &IntPoly) -> Option<IntPoly> {
    let Some(v) = max_var(a).max(max_var(b)) else {
        let g = content(a).gcd(&content(b));
        return Some(IntPoly::from([(Mono::one(), g)]));
    };
    let mut xi = BigInt::from(2) * norm(a).min(norm(b)) + 29;
    for _ in 0..ATTEMPTS {
        let (ea, eb) = (eval(a, v, &xi), eval(b, v, &xi));
        if !ea.is_empty() && !eb.is_empty() {
            if let Some(h) = candidate(&ea, &eb) {
                let mut g = lift(h, v, &xi);
                let c = content(&g);
                if !c.is_zero() {
                    g.values_mut().for_each(|x| *x /= &c);
                    if divides(&g, a) && divides(&g, b) {
                        return Some(g);
                    }
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

/// A common divisor of two integer-coefficient polynomials, usually the greatest.
pub fn common_divisor(a: &Poly, b: &Poly) -> Option<Poly> {
    let g = candidate(&from_poly(a)?, &from_poly(b)?)?;
    let g = to_poly(&g);
    if g.is_zero() {
        return None;
    }
    Some(if g.is_constant() { Poly::one() } else { g })
}

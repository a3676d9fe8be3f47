// SPDX-License-Identifier: Apache-2.0

//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept sorted in descending graded-lexicographic order with no zero
//! coefficients, so two polynomials are equal iff their term vectors are equal.
//! Exponent vectors are trimmed of trailing zeros.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector; entry `v` is the exponent of the coordinate `u^{v+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono(Vec<u32>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(v: usize) -> Self {
        let mut e = vec![0; v + 1];
        e[v] = 1;
        Mono(e)
    }

    pub(super) fn from_exponents(e: Vec<u32>) -> Self {
        Mono::from_vec(e)
    }

    fn from_vec(mut e: Vec<u32>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        Mono(e)
    }

    pub fn exp(&self, v: usize) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let len = self.0.len().max(other.0.len());
        Mono::from_vec((0..len).map(|v| self.exp(v) + other.exp(v)).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut e = self.0.clone();
        for (v, &b) in other.0.iter().enumerate() {
            if e[v] < b {
                return None;
            }
            e[v] -= b;
        }
        Some(Mono::from_vec(e))
    }

    fn meet(&self, other: &Mono) -> Mono {
        let len = self.0.len().min(other.0.len());
        Mono::from_vec((0..len).map(|v| self.exp(v).min(other.exp(v))).collect())
    }

    pub(super) fn with_var_exp(&self, v: usize, e: u32) -> Mono {
        self.with_exp(v, e)
    }

    fn with_exp(&self, v: usize, e: u32) -> Mono {
        let mut x = self.0.clone();
        if x.len() <= v {
            x.resize(v + 1, 0);
        }
        x[v] = e;
        Mono::from_vec(x)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let len = self.0.len().max(other.0.len());
            for v in 0..len {
                match self.exp(v).cmp(&other.exp(v)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, BigRational)>,
}

fn collect(map: BTreeMap<Mono, BigRational>) -> Poly {
    Poly {
        terms: map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Mono::one(), c)],
            }
        }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn var(v: usize) -> Self {
        Poly {
            terms: vec![(Mono::var(v), BigRational::one())],
        }
    }

    pub fn term(m: Mono, c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn terms(&self) -> &[(Mono, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Mono, BigRational)> {
        self.terms.first()
    }

    /// Largest variable index appearing, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.terms
            .iter()
            .filter_map(|(m, _)| m.0.len().checked_sub(1))
            .max()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap().clone()),
                (Some((ma, ca)), Some((mb, cb))) => match ma.cmp(mb) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => out.push(b.next().unwrap().clone()),
                    Ordering::Equal => {
                        let c = ca + cb;
                        if !c.is_zero() {
                            out.push((ma.clone(), c));
                        }
                        a.next();
                        b.next();
                    }
                },
            }
        }
        Poly { terms: out }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        let mut acc: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e = acc.entry(ma.mul(mb)).or_insert_with(BigRational::zero);
                *e += ca * cb;
            }
        }
        collect(acc)
    }

    pub fn mul_term(&self, m: &Mono, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(x, d)| (x.mul(m), d * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> Poly {
        let mut acc: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let dm = m.with_exp(v, e - 1);
            *acc.entry(dm).or_insert_with(BigRational::zero) += c * BigRational::from_integer(BigInt::from(e));
        }
        collect(acc)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, lc)) if lc.is_one() => self.clone(),
            Some((_, lc)) => self.scale(&lc.recip()),
        }
    }

    /// Exact quotient `self / d`; `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if d.terms.len() == 1 {
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                out.push((m.div(dm)?, c / dc));
            }
            return Some(Poly { terms: out });
        }
        let mut rem = self.clone();
        let mut quot: BTreeMap<Mono, BigRational> = BTreeMap::new();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(dm)?;
            let qc = rc / dc;
            rem = rem.sub(&d.mul_term(&qm, &qc));
            quot.insert(qm, qc);
        }
        Some(collect(quot))
    }

    /// Coefficients of `self` viewed as a polynomial in `u^{v+1}` over the other variables.
    fn coefficients_in(&self, v: usize) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut maps: Vec<BTreeMap<Mono, BigRational>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            maps[e].insert(m.with_exp(v, 0), c.clone());
        }
        maps.into_iter().map(collect).collect()
    }

    fn content_in(&self, v: usize) -> Poly {
        let mut g = Poly::zero();
        for c in self.coefficients_in(v) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_in(&self, v: usize) -> Poly {
        let c = self.content_in(v);
        self.exact_div(&c).expect("content divides polynomial").integer_primitive()
    }

    /// Rescale to coprime integer coefficients with a positive leading coefficient.
    fn integer_primitive(&self) -> Poly {
        let Some((_, lc)) = self.leading() else {
            return Poly::zero();
        };
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let mut k = BigRational::new(den, num);
        if lc.is_negative() {
            k = -k;
        }
        self.scale(&k)
    }

    /// Pseudo-remainder of `self` by `d` with respect to `u^{v+1}`.
    fn pseudo_rem(&self, d: &Poly, v: usize) -> Poly {
        let dd = d.degree_in(v);
        let dcoeffs = d.coefficients_in(v);
        let lc = dcoeffs[dd as usize].clone();
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= dd {
            let dr = r.degree_in(v);
            let lr = r.coefficients_in(v)[dr as usize].clone();
            let shift = Mono::var(v);
            let mut xs = Poly::one();
            for _ in 0..(dr - dd) {
                xs = xs.mul_term(&shift, &BigRational::one());
            }
            r = r.mul(&lc).sub(&d.mul(&lr).mul(&xs));
        }
        r
    }
}

fn monomial_gcd(m: &Mono, p: &Poly) -> Poly {
    let mut g = m.clone();
    for (x, _) in p.terms() {
        g = g.meet(x);
        if g.is_one() {
            break;
        }
    }
    Poly::term(g, BigRational::one())
}

/// Monic greatest common divisor (zero iff both inputs are zero).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.terms.len() == 1 {
        return monomial_gcd(&a.terms[0].0, b);
    }
    if b.terms.len() == 1 {
        return monomial_gcd(&b.terms[0].0, a);
    }
    let Some(bounds) = super::modp::degree_bounds(a, b) else {
        return prs_gcd(a, b);
    };
    if bounds.iter().all(|&d| d == 0) {
        return Poly::one();
    }
    // A common divisor whose degrees reach the upper bounds is the gcd.
    if let Some(g) = super::heugcd::common_divisor(&a.integer_primitive(), &b.integer_primitive()) {
        if bounds.iter().enumerate().all(|(v, &d)| g.degree_in(v) == d) {
            return g.monic();
        }
    }
    prs_gcd(a, b)
}

/// Gcd by primitive pseudo-remainder sequences in the highest coordinate.
fn prs_gcd(a: &Poly, b: &Poly) -> Poly {
    let v = a.max_var().max(b.max_var()).expect("non-constant");
    let (da, db) = (a.degree_in(v), b.degree_in(v));
    if da == 0 {
        return gcd(a, &b.content_in(v));
    }
    if db == 0 {
        return gcd(&a.content_in(v), b);
    }
    let (ca, cb) = (a.content_in(v), b.content_in(v));
    let content = gcd(&ca, &cb);
    let (mut p, mut q) = (
        a.exact_div(&ca).expect("content divides").integer_primitive(),
        b.exact_div(&cb).expect("content divides").integer_primitive(),
    );
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = p.pseudo_rem(&q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            return content;
        }
        p = q;
        q = r.primitive_in(v);
    }
    content.mul(&q.primitive_in(v)).monic()
}

impl Poly {
    /// Canonical text form: terms in descending grlex order, `c*u1^2*u3`.
    pub fn write_expr(&self, f: &mut impl fmt::Write) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mut first = true;
            if !mag.is_one() || m.is_one() {
                write!(f, "{}", mag)?;
                first = false;
            }
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                write!(f, "u{}", v + 1)?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_expr(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn x() -> Poly {
        Poly::var(0)
    }

    fn y() -> Poly {
        Poly::var(1)
    }

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        let a = Mono::from_vec(vec![0, 2]);
        let b = Mono::from_vec(vec![1, 0]);
        assert!(a > b);
        let c = Mono::from_vec(vec![1, 1]);
        assert!(c > a);
    }

    #[test]
    fn exact_division_recovers_factor() {
        let f = x().add(&y()).mul(&x().sub(&Poly::one()));
        let g = x().add(&y());
        assert_eq!(f.exact_div(&g).unwrap(), x().sub(&Poly::one()));
        assert!(f.exact_div(&x().add(&Poly::constant(q(2)))).is_none());
    }

    #[test]
    fn gcd_of_products() {
        let common = x().mul(&y()).add(&Poly::one());
        let a = common.mul(&x().add(&Poly::constant(q(3))));
        let b = common.mul(&y().sub(&x()));
        assert_eq!(gcd(&a, &b), common.monic());
        assert!(gcd(&x().add(&Poly::one()), &y()).is_one());
    }

    #[test]
    fn gcd_with_monomial() {
        let a = x().pow(3).mul(&y());
        let b = x().pow(2).add(&x().mul(&y()));
        assert_eq!(gcd(&a, &b), x());
    }

    #[test]
    fn display_is_canonical() {
        let p = x().pow(2).scale(&BigRational::new(BigInt::from(3), BigInt::from(2))).sub(&y()).add(&Poly::one());
        assert_eq!(p.to_string(), "3/2*u1^2 - u2 + 1");
    }
}

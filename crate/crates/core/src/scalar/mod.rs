// SPDX-License-Identifier: Apache-2.0

//! Exact rational functions of the coordinates `u1..un`.
//!
//! A [`Scalar`] is stored as a reduced fraction of [`Poly`]s: the gcd of
//! numerator and denominator is 1 and the denominator's leading coefficient
//! (in grlex order) is 1. Equality of scalars is therefore structural.

mod heugcd;
mod modp;
pub mod poly;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use poly::{Mono, Poly};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_poly(Poly::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar::from_poly(Poly::constant(q))
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar {
            num: p,
            den: Poly::one(),
        }
    }

    /// The coordinate `u^{v+1}` (zero-based index).
    pub fn coord(v: usize) -> Self {
        Scalar::from_poly(Poly::var(v))
    }

    /// Build `num / den` in normal form.
    pub fn fraction(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        let g = poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading().expect("nonzero denominator").1.clone();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = lc.recip();
            Scalar {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// True when the scalar does not depend on any coordinate.
    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Largest coordinate index this scalar depends on.
    pub fn max_var(&self) -> Option<usize> {
        self.num.max_var().max(self.den.max_var())
    }

    pub fn scale(&self, k: &BigRational) -> Scalar {
        if k.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul_parts(&other.den, &other.num))
    }

    pub fn recip(&self) -> Result<Scalar> {
        Scalar::one().checked_div(self)
    }

    pub fn pow(&self, e: i32) -> Result<Scalar> {
        if e < 0 {
            return self.recip()?.pow(-e);
        }
        let e = e as u32;
        Ok(Scalar {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
        .renormalize())
    }

    // Powers of a reduced fraction stay reduced; only the leading coefficient
    // of the denominator needs fixing.
    fn renormalize(self) -> Scalar {
        let lc = self.den.leading().expect("nonzero denominator").1.clone();
        if lc.is_one() {
            self
        } else {
            let inv = lc.recip();
            Scalar {
                num: self.num.scale(&inv),
                den: self.den.scale(&inv),
            }
        }
    }

    fn mul_parts(&self, onum: &Poly, oden: &Poly) -> Scalar {
        if self.is_zero() || onum.is_zero() {
            return Scalar::zero();
        }
        let g1 = poly::gcd(&self.num, oden);
        let g2 = poly::gcd(onum, &self.den);
        let a = self.num.exact_div(&g1).expect("gcd divides");
        let d = oden.exact_div(&g1).expect("gcd divides");
        let c = onum.exact_div(&g2).expect("gcd divides");
        let b = self.den.exact_div(&g2).expect("gcd divides");
        Scalar {
            num: a.mul(&c),
            den: b.mul(&d),
        }
        .renormalize()
    }

    /// Partial derivative with respect to `u^{v+1}`.
    pub fn partial(&self, v: usize) -> Scalar {
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Scalar::reduce(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Scalar::reduce(num, self.den.mul(&self.den))
    }

    /// Substitute `u^{v+1} -> images[v]` for every coordinate.
    pub fn compose(&self, images: &[Scalar]) -> Result<Scalar> {
        let num = eval_poly(&self.num, images)?;
        let den = eval_poly(&self.den, images)?;
        num.checked_div(&den).map_err(|_| Error::ZeroDenominator(self.to_string()))
    }

    /// Parse an expression in the coordinate grammar (no jet variables).
    pub fn parse(text: &str) -> Result<Scalar> {
        crate::expr::parse_scalar(text)
    }
}

fn eval_poly(p: &Poly, images: &[Scalar]) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let mut t = Scalar::from_rational(c.clone());
        for (v, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let img = images.get(v).ok_or(Error::IndexOutOfRange {
                what: "coordinate",
                index: v + 1,
                bound: images.len(),
            })?;
            t = &t * &img.pow(e as i32)?;
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Scalar::reduce(self.num.add(&rhs.num), self.den.clone());
        }
        let g = poly::gcd(&self.den, &rhs.den);
        let bd = self.den.exact_div(&g).expect("gcd divides");
        let dd = rhs.den.exact_div(&g).expect("gcd divides");
        let num = self.num.mul(&dd).add(&rhs.num.mul(&bd));
        if num.is_zero() {
            return Scalar::zero();
        }
        // Common factors of the sum can only come from the shared part of the denominators.
        let h = poly::gcd(&num, &g);
        let (num, g) = if h.is_one() {
            (num, g)
        } else {
            (num.exact_div(&h).expect("gcd divides"), g.exact_div(&h).expect("gcd divides"))
        };
        Scalar { num, den: bd.mul(&dd).mul(&g) }.renormalize()
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        self.mul_parts(&rhs.num, &rhs.den)
    }
}

/// Panics on division by zero; use [`Scalar::checked_div`] for fallible division.
impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero scalar")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return self.num.write_expr(f);
        }
        if self.num.terms().len() == 1 {
            self.num.write_expr(f)?;
        } else {
            f.write_str("(")?;
            self.num.write_expr(f)?;
            f.write_str(")")?;
        }
        f.write_str("/")?;
        let single_power = self.den.terms().len() == 1
            && self.den.terms()[0].1.is_one()
            && self.den.terms()[0].0.exponents().iter().filter(|&&e| e > 0).count() == 1;
        if single_power {
            self.den.write_expr(f)
        } else {
            f.write_str("(")?;
            self.den.write_expr(f)?;
            f.write_str(")")
        }
    }
}

// SPDX-License-Identifier: Apache-2.0

//! The super algebra of differential polynomials.
//!
//! Even generators are the jet variables `u^{i,s}` (`s >= 1`); the coordinates
//! `u^i = u^{i,0}` live inside the [`Scalar`] coefficients. Odd generators are
//! `θ_i^s` (`s >= 0`). Indices `i` are zero-based throughout the Rust API.
//!
//! A monomial stores its even part as a sorted list of `(JetVar, exponent)`
//! pairs ordered by `(i, s)`, and its odd part as a strictly increasing list of
//! `ThetaVar` ordered by `(s, i)`. Partial derivatives with respect to odd
//! variables are left derivatives.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVar {
    pub index: usize,
    pub order: u32,
}

impl JetVar {
    pub fn new(index: usize, order: u32) -> Self {
        debug_assert!(order >= 1, "u^{{i,0}} is a coordinate, not a jet variable");
        JetVar { index, order }
    }
}

// Field order gives the (s, i) ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThetaVar {
    pub order: u32,
    pub index: usize,
}

impl ThetaVar {
    pub fn new(index: usize, order: u32) -> Self {
        ThetaVar { order, index }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    /// Standard degree: total number of x-derivatives.
    Deg,
    /// Number of odd variables.
    Theta,
    /// Polynomial degree in the jet variables `u^{i,s}`, `s >= 1`.
    U,
    /// Number of odd variables of order exactly `k`.
    ThetaOrder(u32),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    even: Vec<(JetVar, u32)>,
    odd: Vec<ThetaVar>,
}

impl Term {
    pub fn one() -> Self {
        Term::default()
    }

    pub fn even(&self) -> &[(JetVar, u32)] {
        &self.even
    }

    pub fn odd(&self) -> &[ThetaVar] {
        &self.odd
    }

    /// Odd variables must be distinct; the returned sign accounts for sorting them.
    pub fn from_parts(mut even: Vec<(JetVar, u32)>, odd: Vec<ThetaVar>) -> Option<(bool, Term)> {
        even.retain(|&(_, e)| e > 0);
        even.sort();
        let mut merged: Vec<(JetVar, u32)> = Vec::with_capacity(even.len());
        for (v, e) in even {
            match merged.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => merged.push((v, e)),
            }
        }
        let mut negate = false;
        let mut sorted: Vec<ThetaVar> = Vec::with_capacity(odd.len());
        for v in odd.into_iter().rev() {
            let (n, rest) = insert_front(&sorted, v)?;
            negate ^= n;
            sorted = rest;
        }
        Some((negate, Term { even: merged, odd: sorted }))
    }

    pub fn grading(&self, g: Grading) -> u32 {
        match g {
            Grading::Deg => {
                self.even.iter().map(|(v, e)| v.order * e).sum::<u32>()
                    + self.odd.iter().map(|v| v.order).sum::<u32>()
            }
            Grading::Theta => self.odd.len() as u32,
            Grading::U => self.even.iter().map(|(_, e)| e).sum(),
            Grading::ThetaOrder(k) => self.odd.iter().filter(|v| v.order == k).count() as u32,
        }
    }

    fn mul(&self, other: &Term) -> Option<(bool, Term)> {
        let even = merge_even(&self.even, &other.even);
        let mut negate = false;
        let mut odd = Vec::with_capacity(self.odd.len() + other.odd.len());
        let (mut i, mut j) = (0, 0);
        while i < self.odd.len() || j < other.odd.len() {
            if j == other.odd.len() || (i < self.odd.len() && self.odd[i] < other.odd[j]) {
                odd.push(self.odd[i]);
                i += 1;
            } else if i == self.odd.len() || other.odd[j] < self.odd[i] {
                // other.odd[j] passes the remaining self.odd[i..]
                if (self.odd.len() - i) % 2 == 1 {
                    negate = !negate;
                }
                odd.push(other.odd[j]);
                j += 1;
            } else {
                return None;
            }
        }
        Some((negate, Term { even, odd }))
    }

    fn with_even_factor(&self, v: JetVar, e: u32) -> Term {
        Term {
            even: merge_even(&self.even, &[(v, e)]),
            odd: self.odd.clone(),
        }
    }

    /// Remove one power of `v` (which must be present).
    fn lower_even(&self, v: JetVar) -> Term {
        let mut even = self.even.clone();
        let pos = even.iter().position(|(w, _)| *w == v).expect("variable present");
        if even[pos].1 == 1 {
            even.remove(pos);
        } else {
            even[pos].1 -= 1;
        }
        Term {
            even,
            odd: self.odd.clone(),
        }
    }

    fn exponent(&self, v: JetVar) -> u32 {
        self.even.iter().find(|(w, _)| *w == v).map(|(_, e)| *e).unwrap_or(0)
    }
}

fn merge_even(a: &[(JetVar, u32)], b: &[(JetVar, u32)]) -> Vec<(JetVar, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

/// Place `v` to the left of the sorted odd list `odd` and re-sort.
/// Returns `None` if `v` is already present.
fn insert_front(odd: &[ThetaVar], v: ThetaVar) -> Option<(bool, Vec<ThetaVar>)> {
    let pos = match odd.binary_search(&v) {
        Ok(_) => return None,
        Err(p) => p,
    };
    let mut out = Vec::with_capacity(odd.len() + 1);
    out.extend_from_slice(&odd[..pos]);
    out.push(v);
    out.extend_from_slice(&odd[pos..]);
    Some((pos % 2 == 1, out))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffPoly {
    terms: BTreeMap<Term, Scalar>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        DiffPoly::from_scalar(Scalar::one())
    }

    pub fn from_scalar(c: Scalar) -> Self {
        DiffPoly::from_term(Term::one(), c)
    }

    pub fn from_term(t: Term, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(t, c);
        }
        DiffPoly { terms }
    }

    /// `u^{i,s}`; for `s = 0` this is the coordinate `u^i` as a scalar.
    pub fn u(index: usize, order: u32) -> Self {
        if order == 0 {
            DiffPoly::from_scalar(Scalar::coord(index))
        } else {
            DiffPoly::from_term(
                Term {
                    even: vec![(JetVar::new(index, order), 1)],
                    odd: Vec::new(),
                },
                Scalar::one(),
            )
        }
    }

    /// `θ_i^s`.
    pub fn theta(index: usize, order: u32) -> Self {
        DiffPoly::from_term(
            Term {
                even: Vec::new(),
                odd: vec![ThetaVar::new(index, order)],
            },
            Scalar::one(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Scalar)> {
        self.terms.iter()
    }

    /// Coefficient of a given monomial (zero if absent).
    pub fn coefficient(&self, t: &Term) -> Scalar {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    /// The scalar value when the polynomial has no jet or odd variables.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (t, c) = self.terms.iter().next().unwrap();
                (t.even.is_empty() && t.odd.is_empty()).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn push(&mut self, t: Term, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(t) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn push_signed(&mut self, negate: bool, t: Term, c: Scalar) {
        if negate {
            self.push(t, -c);
        } else {
            self.push(t, c);
        }
    }

    pub fn add_assign_ref(&mut self, other: &DiffPoly) {
        for (t, c) in &other.terms {
            self.push(t.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &Scalar) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        let mut out = DiffPoly::zero();
        for (t, d) in &self.terms {
            out.push(t.clone(), d * c);
        }
        out
    }

    pub fn scale_rational(&self, q: &BigRational) -> DiffPoly {
        self.scale(&Scalar::from_rational(q.clone()))
    }

    pub fn scale_int(&self, n: i64) -> DiffPoly {
        self.scale(&Scalar::from_int(n))
    }

    pub fn max_coord(&self) -> Option<usize> {
        self.terms.values().filter_map(|c| c.max_var()).max()
    }

    /// Largest `s` with `u^{i,s}` present (0 if none).
    pub fn max_jet_order(&self, index: usize) -> u32 {
        self.terms
            .keys()
            .flat_map(|t| t.even.iter())
            .filter(|(v, _)| v.index == index)
            .map(|(v, _)| v.order)
            .max()
            .unwrap_or(0)
    }

    /// Largest `s` with `θ_i^s` present.
    pub fn max_theta_order(&self, index: usize) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|t| t.odd.iter())
            .filter(|v| v.index == index)
            .map(|v| v.order)
            .max()
    }

    pub fn jet_vars(&self) -> Vec<JetVar> {
        let mut vs: Vec<JetVar> = self.terms.keys().flat_map(|t| t.even.iter().map(|(v, _)| *v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn theta_vars(&self) -> Vec<ThetaVar> {
        let mut vs: Vec<ThetaVar> = self.terms.keys().flat_map(|t| t.odd.iter().copied()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Grading value if every monomial has the same one.
    pub fn homogeneous_degree(&self, g: Grading) -> Option<u32> {
        let mut it = self.terms.keys().map(|t| t.grading(g));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn project(&self, g: Grading, d: u32) -> DiffPoly {
        self.filter(|t| t.grading(g) == d)
    }

    pub fn filter(&self, mut keep: impl FnMut(&Term) -> bool) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| keep(t))
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map_coefficients(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (t, c) in &self.terms {
            out.push(t.clone(), f(c));
        }
        out
    }

    /// Total x-derivative.
    pub fn d_x(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (t, c) in &self.terms {
            if let Some(maxv) = c.max_var() {
                for v in 0..=maxv {
                    let dc = c.partial(v);
                    if !dc.is_zero() {
                        out.push(t.with_even_factor(JetVar::new(v, 1), 1), dc);
                    }
                }
            }
            for &(v, e) in &t.even {
                let lowered = t.lower_even(v);
                let raised = lowered.with_even_factor(JetVar::new(v.index, v.order + 1), 1);
                out.push(raised, c.scale(&BigRational::from_integer(BigInt::from(e))));
            }
            for p in 0..t.odd.len() {
                let mut rest = t.odd.clone();
                let v = rest.remove(p);
                let next = ThetaVar::new(v.index, v.order + 1);
                if let Some((neg, odd)) = insert_front(&rest, next) {
                    // moving θ from position p to the front costs (-1)^p
                    let negate = neg ^ (p % 2 == 1);
                    out.push_signed(
                        negate,
                        Term {
                            even: t.even.clone(),
                            odd,
                        },
                        c.clone(),
                    );
                }
            }
        }
        out
    }

    pub fn d_x_pow(&self, s: u32) -> DiffPoly {
        let mut a = self.clone();
        for _ in 0..s {
            a = a.d_x();
        }
        a
    }

    /// `∂/∂u^i` acting on the scalar coefficients.
    pub fn partial_coord(&self, index: usize) -> DiffPoly {
        self.map_coefficients(|c| c.partial(index))
    }

    /// `∂/∂u^{i,s}` for a jet variable (`s >= 1`).
    pub fn partial_jet(&self, v: JetVar) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (t, c) in &self.terms {
            let e = t.exponent(v);
            if e > 0 {
                out.push(t.lower_even(v), c.scale(&BigRational::from_integer(BigInt::from(e))));
            }
        }
        out
    }

    /// `∂/∂u^{i,s}` for any `s`, with `s = 0` the coordinate derivative.
    pub fn partial_u(&self, index: usize, order: u32) -> DiffPoly {
        if order == 0 {
            self.partial_coord(index)
        } else {
            self.partial_jet(JetVar::new(index, order))
        }
    }

    /// Left derivative `∂/∂θ_i^s`.
    pub fn partial_theta(&self, v: ThetaVar) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (t, c) in &self.terms {
            if let Ok(p) = t.odd.binary_search(&v) {
                let mut odd = t.odd.clone();
                odd.remove(p);
                out.push_signed(
                    p % 2 == 1,
                    Term {
                        even: t.even.clone(),
                        odd,
                    },
                    c.clone(),
                );
            }
        }
        out
    }

    /// `δ/δu^i = Σ_s (-∂_x)^s ∂/∂u^{i,s}`.
    pub fn variational_u(&self, index: usize) -> DiffPoly {
        let top = self.max_jet_order(index);
        let mut out = DiffPoly::zero();
        for s in 0..=top {
            let mut p = self.partial_u(index, s).d_x_pow(s);
            if s % 2 == 1 {
                p = -p;
            }
            out.add_assign_ref(&p);
        }
        out
    }

    /// `δ/δθ_i = Σ_s (-∂_x)^s ∂/∂θ_i^s`.
    pub fn variational_theta(&self, index: usize) -> DiffPoly {
        let mut out = DiffPoly::zero();
        let Some(top) = self.max_theta_order(index) else {
            return out;
        };
        for s in 0..=top {
            let mut p = self.partial_theta(ThetaVar::new(index, s)).d_x_pow(s);
            if s % 2 == 1 {
                p = -p;
            }
            out.add_assign_ref(&p);
        }
        out
    }

    /// Replace every jet variable `v` by `jets(v)` and map coefficients
    /// through `coeff`. Odd variables are kept; jet images must be even.
    pub fn substitute(
        &self,
        mut coeff: impl FnMut(&Scalar) -> crate::Result<Scalar>,
        mut jets: impl FnMut(JetVar) -> DiffPoly,
    ) -> crate::Result<DiffPoly> {
        let mut cache: BTreeMap<JetVar, DiffPoly> = BTreeMap::new();
        let mut out = DiffPoly::zero();
        for (t, c) in &self.terms {
            let mut acc = DiffPoly::from_term(
                Term {
                    even: Vec::new(),
                    odd: t.odd.clone(),
                },
                coeff(c)?,
            );
            for &(v, e) in &t.even {
                let img = cache.entry(v).or_insert_with(|| jets(v)).clone();
                for _ in 0..e {
                    acc = &img * &acc;
                }
            }
            out.add_assign_ref(&acc);
        }
        Ok(out)
    }
}

impl From<Scalar> for DiffPoly {
    fn from(c: Scalar) -> Self {
        DiffPoly::from_scalar(c)
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.push(t.clone(), -c);
        }
        out
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect(),
        }
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ta, ca) in &self.terms {
            for (tb, cb) in &rhs.terms {
                if let Some((negate, t)) = ta.mul(tb) {
                    out.push_signed(negate, t, ca * cb);
                }
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for DiffPoly {
            type Output = DiffPoly;
            fn $m(self, rhs: DiffPoly) -> DiffPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, e) in &self.even {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "u{}_{}", v.index + 1, v.order)?;
            if *e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        for v in &self.odd {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "th{}_{}", v.index + 1, v.order)?;
        }
        Ok(())
    }
}

fn is_negative_constant(c: &Scalar) -> bool {
    c.constant_value().is_some_and(|q| q.is_negative())
}

fn write_coeff_term(f: &mut fmt::Formatter<'_>, t: &Term, c: &Scalar) -> fmt::Result {
    let bare = t.even.is_empty() && t.odd.is_empty();
    if bare {
        return match c.constant_value() {
            Some(_) => write!(f, "{}", c),
            None => write!(f, "({})", c),
        };
    }
    if c.is_one() {
        write!(f, "{}", t)
    } else if c.constant_value().is_some() {
        if (-c).is_one() {
            write!(f, "-{}", t)
        } else {
            write!(f, "{}*{}", c, t)
        }
    } else {
        write!(f, "({})*{}", c, t)
    }
}

/// Text form in the input grammar, with `th{i}_{s}` for odd variables.
impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (t, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                if is_negative_constant(c) {
                    f.write_str(" - ")?;
                    write_coeff_term(f, t, &-c)?;
                    continue;
                }
                f.write_str(" + ")?;
            }
            write_coeff_term(f, t, c)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(i: usize, s: u32) -> DiffPoly {
        DiffPoly::u(i, s)
    }

    fn th(i: usize, s: u32) -> DiffPoly {
        DiffPoly::theta(i, s)
    }

    #[test]
    fn odd_variables_anticommute() {
        assert!((&th(0, 0) * &th(0, 0)).is_zero());
        assert_eq!(&th(0, 0) * &th(1, 0), -(&th(1, 0) * &th(0, 0)));
        let sq = &u(0, 1) * &u(0, 1);
        let (t, _) = sq.terms().next().unwrap();
        assert_eq!(t.even(), &[(JetVar::new(0, 1), 2)]);
    }

    #[test]
    fn d_x_examples() {
        assert_eq!(u(0, 0).d_x(), u(0, 1));
        assert_eq!(th(0, 0).d_x(), th(0, 1));
        let f = DiffPoly::from_scalar(Scalar::parse("u2/u1").unwrap());
        let expect = &(&u(1, 1) * &DiffPoly::from_scalar(Scalar::parse("1/u1").unwrap()))
            - &(&u(0, 1) * &DiffPoly::from_scalar(Scalar::parse("u2/u1^2").unwrap()));
        assert_eq!(f.d_x(), expect);
    }

    #[test]
    fn d_x_resorts_odd_part_with_sign() {
        // d_x(θ_1^0 θ_2^0) = θ_1^1 θ_2^0 + θ_1^0 θ_2^1 ; θ_1^1 θ_2^0 = -θ_2^0 θ_1^1
        let a = &th(0, 0) * &th(1, 0);
        let expect = &(&th(0, 1) * &th(1, 0)) + &(&th(0, 0) * &th(1, 1));
        assert_eq!(a.d_x(), expect);
        // d_x(θ^0 θ^1) of the same index: θ^1θ^1 vanishes
        let b = &th(0, 0) * &th(0, 1);
        assert_eq!(b.d_x(), &th(0, 0) * &th(0, 2));
    }

    #[test]
    fn partial_examples() {
        let a = &th(0, 0) * &th(1, 0);
        assert_eq!(a.partial_theta(ThetaVar::new(0, 0)), th(1, 0));
        assert_eq!(a.partial_theta(ThetaVar::new(1, 0)), -th(0, 0));
        let b = &(&u(0, 1) * &u(0, 1)) * &th(0, 0);
        assert_eq!(b.partial_jet(JetVar::new(0, 1)), (&u(0, 1) * &th(0, 0)).scale_int(2));
    }

    #[test]
    fn variational_examples() {
        let f = &(&(&u(0, 1) * &u(0, 1)) * &th(0, 0)) * &th(1, 1);
        assert!(f.d_x().variational_u(0).is_zero());
        assert!(f.d_x().variational_theta(1).is_zero());
        let sq = &u(0, 1) * &u(0, 1);
        assert_eq!(sq.variational_u(0), u(0, 2).scale_int(-2));
        // ½ g θ_1 θ_1^k with k odd
        for k in [1u32, 3] {
            let g = Scalar::from_int(7);
            let p = (&th(0, 0) * &th(0, k)).scale(&Scalar::from_ratio(7, 2));
            assert_eq!(p.variational_theta(0), th(0, k).scale(&g));
        }
    }

    #[test]
    fn projection_examples() {
        let a = &(&u(0, 1) * &th(0, 0)) + &th(0, 2);
        assert_eq!(a.project(Grading::U, 1), &u(0, 1) * &th(0, 0));
        let b = &th(0, 3) * &th(1, 3);
        assert_eq!(b.project(Grading::ThetaOrder(3), 2), b);
        let k = 4;
        let c = (&th(0, 0) * &th(1, k)).scale(&Scalar::parse("u1").unwrap());
        assert_eq!(c.project(Grading::Deg, k), c);
    }

    #[test]
    fn display_uses_grammar() {
        let a = &(&u(0, 1) * &th(0, 0)).scale_int(-3) + &u(1, 2);
        assert_eq!(a.to_string(), "-3*u1_1*th1_0 + u2_2");
    }
}

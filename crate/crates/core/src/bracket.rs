// SPDX-License-Identifier: Apache-2.0

//! Homogeneous local brackets `{u^i(x), u^j(y)} = Σ_s P_s^{ij} δ^{(s)}(x-y)`.
//!
//! The table `P_s^{ij}` is stored densely for `0 <= s <= k`. Each entry must be
//! a differential polynomial of standard degree `k - s` without odd variables.

use std::fmt;

use crate::combinat::{binomial_q, sign};
use crate::diffpoly::{DiffPoly, Grading, JetVar, Term};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{Matrix, Tensor3};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousBracket {
    n: usize,
    k: u32,
    entries: Vec<DiffPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// Standard degrees found in the entry that differ from `k - s`.
    Degree { expected: u32, found: Vec<u32> },
    OddVariables,
    /// A coordinate or jet variable with index `>= n`.
    ForeignVariable(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub s: u32,
    pub i: usize,
    pub j: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P_{}^{{{}{}}}: ", self.s, self.i + 1, self.j + 1)?;
        match &self.kind {
            ViolationKind::Degree { expected, found } => {
                write!(f, "standard degree {:?}, expected {}", found, expected)
            }
            ViolationKind::OddVariables => f.write_str("contains odd variables"),
            ViolationKind::ForeignVariable(v) => write!(f, "uses variable index {} beyond dimension", v + 1),
        }
    }
}

/// The coefficients `g^{ij}` and `h_{(s)l}^{ij}` that are at most linear in the jets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedCoefficients {
    pub g: Matrix,
    /// `h[s].get(i, j, l)` is `h_{(s)l}^{ij}` for `0 <= s < k`.
    pub h: Vec<Tensor3>,
}

/// Entry of the skew-symmetry defect `P_r^{ji} + Σ_s (-1)^s C(s,r) ∂^{s-r} P_s^{ij}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewDefect {
    pub i: usize,
    pub j: usize,
    pub r: u32,
    pub defect: DiffPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewhViolation {
    pub i: usize,
    pub j: usize,
    pub l: usize,
    pub s: u32,
    pub defect: Scalar,
}

impl fmt::Display for SkewDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(i,j,r) = ({},{},{}): {}", self.i + 1, self.j + 1, self.r, self.defect)
    }
}

impl fmt::Display for SkewhViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(i,j,l,s) = ({},{},{},{}): {}", self.i + 1, self.j + 1, self.l + 1, self.s, self.defect)
    }
}

impl HomogeneousBracket {
    pub fn zero(n: usize, k: u32) -> Self {
        HomogeneousBracket {
            n,
            k,
            entries: vec![DiffPoly::zero(); (k as usize + 1) * n * n],
        }
    }

    /// The constant-coefficient bracket `P_k = eta`, all other entries zero.
    pub fn constant(k: u32, eta: &Matrix) -> Self {
        let n = eta.dim();
        let mut b = HomogeneousBracket::zero(n, k);
        for i in 0..n {
            for j in 0..n {
                b.set(k, i, j, DiffPoly::from_scalar(eta.get(i, j).clone()));
            }
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    fn idx(&self, s: u32, i: usize, j: usize) -> usize {
        assert!(s <= self.k && i < self.n && j < self.n, "bracket index out of range");
        (s as usize * self.n + i) * self.n + j
    }

    pub fn get(&self, s: u32, i: usize, j: usize) -> &DiffPoly {
        &self.entries[self.idx(s, i, j)]
    }

    pub fn set(&mut self, s: u32, i: usize, j: usize, p: DiffPoly) {
        let idx = self.idx(s, i, j);
        self.entries[idx] = p;
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for s in 0..=self.k {
            for i in 0..self.n {
                for j in 0..self.n {
                    let p = self.get(s, i, j);
                    let expected = self.k - s;
                    let mut found: Vec<u32> = p
                        .terms()
                        .map(|(t, _)| t.grading(Grading::Deg))
                        .filter(|&d| d != expected)
                        .collect();
                    found.sort_unstable();
                    found.dedup();
                    if !found.is_empty() {
                        out.push(Violation {
                            s,
                            i,
                            j,
                            kind: ViolationKind::Degree { expected, found },
                        });
                    }
                    if p.terms().any(|(t, _)| !t.odd().is_empty()) {
                        out.push(Violation {
                            s,
                            i,
                            j,
                            kind: ViolationKind::OddVariables,
                        });
                    }
                    let foreign = p
                        .max_coord()
                        .into_iter()
                        .chain(p.jet_vars().iter().map(|v| v.index))
                        .chain(p.theta_vars().iter().map(|v| v.index))
                        .max()
                        .filter(|&v| v >= self.n);
                    if let Some(v) = foreign {
                        out.push(Violation {
                            s,
                            i,
                            j,
                            kind: ViolationKind::ForeignVariable(v),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidBracket(v.to_string())),
        }
    }

    /// `½ Σ_s P_s^{ij} θ_i θ_j^s`.
    pub fn bivector(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        let half = Scalar::from_ratio(1, 2);
        for s in 0..=self.k {
            for i in 0..self.n {
                for j in 0..self.n {
                    let p = self.get(s, i, j);
                    if p.is_zero() {
                        continue;
                    }
                    let tt = &DiffPoly::theta(i, 0) * &DiffPoly::theta(j, s);
                    out.add_assign_ref(&(p * &tt).scale(&half));
                }
            }
        }
        out
    }

    /// `g^{ij}`: the jet-free part of `P_k^{ij}`.
    pub fn metric(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self.get(self.k, i, j).project(Grading::U, 0).coefficient(&Term::one()))
    }

    pub fn extract_named(&self) -> NamedCoefficients {
        let g = self.metric();
        let h = (0..self.k)
            .map(|s| {
                Tensor3::from_fn(self.n, |i, j, l| {
                    let (_, t) = Term::from_parts(vec![(JetVar::new(l, self.k - s), 1)], Vec::new()).unwrap();
                    self.get(s, i, j).coefficient(&t)
                })
            })
            .collect();
        NamedCoefficients { g, h }
    }

    /// Operator-level skewness: `Σ_r P_r^{ji} ∂^r = -Σ_s (-∂)^s ∘ P_s^{ij}`.
    pub fn skew_defects(&self) -> Vec<SkewDefect> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                // adjoint terms: (-∂)^s ∘ P_s^{ij} = Σ_r (-1)^s C(s,r) ∂^{s-r}(P_s^{ij}) ∂^r
                let mut adj = vec![DiffPoly::zero(); self.k as usize + 1];
                for s in 0..=self.k {
                    let p = self.get(s, i, j);
                    if p.is_zero() {
                        continue;
                    }
                    let mut deriv = p.clone();
                    for t in 0..=s {
                        let r = s - t;
                        let c = &sign(s as i64) * &binomial_q(s as i64, r as i64);
                        adj[r as usize].add_assign_ref(&deriv.scale_rational(&c));
                        if t < s {
                            deriv = deriv.d_x();
                        }
                    }
                }
                for r in 0..=self.k {
                    let defect = self.get(r, j, i) + &adj[r as usize];
                    if !defect.is_zero() {
                        out.push(SkewDefect { i, j, r, defect });
                    }
                }
            }
        }
        out
    }

    pub fn check_skew(&self) -> bool {
        self.skew_defects().is_empty()
    }

    /// Linear-in-jets consequences of skewness relating `h_{(s)}` and `∂g`.
    pub fn check_skewh(&self) -> Vec<SkewhViolation> {
        let named = self.extract_named();
        let k = self.k as i64;
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                for l in 0..self.n {
                    let dg = named.g.get(i, j).partial(l);
                    for s in 0..self.k {
                        let mut rhs = dg.scale(&binomial_q(k, s as i64));
                        for t in 0..self.k {
                            let c = &sign(t as i64 + 1) * &binomial_q(t as i64, s as i64);
                            rhs = &rhs + &named.h[t as usize].get(j, i, l).scale(&c);
                        }
                        let defect = named.h[s as usize].get(i, j, l) - &rhs;
                        if !defect.is_zero() {
                            out.push(SkewhViolation { i, j, l, s, defect });
                        }
                    }
                }
            }
        }
        out
    }

    /// Change of coordinates `ũ = forward(u)`.
    pub fn transform(&self, map: &CoordinateMap) -> Result<HomogeneousBracket> {
        self.ensure_valid()?;
        if map.dim() != self.n {
            return Err(Error::Schema(format!(
                "coordinate map has {} components, bracket dimension is {}",
                map.dim(),
                self.n
            )));
        }
        let n = self.n;
        let jac = map.jacobian();
        // ∂_x^t of the Jacobian entries, as differential polynomials in the old coordinates
        let mut jac_derivs: Vec<Vec<DiffPoly>> = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let mut ds = vec![DiffPoly::from_scalar(jac.get(a, b).clone())];
                for t in 1..=self.k {
                    let next = ds[t as usize - 1].d_x();
                    ds.push(next);
                }
                jac_derivs.push(ds);
            }
        }
        let inverse_jets = |v: JetVar| DiffPoly::from_scalar(map.inverse[v.index].clone()).d_x_pow(v.order);
        let mut out = HomogeneousBracket::zero(n, self.k);
        for s in 0..=self.k {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = DiffPoly::zero();
                    for t in 0..=(self.k - s) {
                        let c = Scalar::from_rational(binomial_q((s + t) as i64, s as i64));
                        for a in 0..n {
                            let ja = jac.get(i, a);
                            if ja.is_zero() {
                                continue;
                            }
                            for b in 0..n {
                                let p = self.get(s + t, a, b);
                                let dj = &jac_derivs[j * n + b][t as usize];
                                if p.is_zero() || dj.is_zero() {
                                    continue;
                                }
                                acc.add_assign_ref(&(p * dj).scale(&(ja * &c)));
                            }
                        }
                    }
                    let moved = acc.substitute(|c| c.compose(&map.inverse), inverse_jets)?;
                    out.set(s, i, j, moved);
                }
            }
        }
        Ok(out)
    }
}

/// A rational change of coordinates with its explicit inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateMap {
    forward: Vec<Scalar>,
    inverse: Vec<Scalar>,
}

impl CoordinateMap {
    /// Checks `forward ∘ inverse = id` and `inverse ∘ forward = id`.
    pub fn new(forward: Vec<Scalar>, inverse: Vec<Scalar>) -> Result<Self> {
        if forward.len() != inverse.len() {
            return Err(Error::NotInvertible("forward and inverse have different lengths".into()));
        }
        let n = forward.len();
        for (name, a, b) in [("forward∘inverse", &forward, &inverse), ("inverse∘forward", &inverse, &forward)] {
            for (i, f) in a.iter().enumerate() {
                let composed = f.compose(b).map_err(|e| Error::NotInvertible(format!("{name}: {e}")))?;
                if composed != Scalar::coord(i) {
                    return Err(Error::NotInvertible(format!(
                        "{name} component {} is {}, not u{}",
                        i + 1,
                        composed,
                        i + 1
                    )));
                }
            }
        }
        let too_big = forward.iter().chain(&inverse).filter_map(Scalar::max_var).find(|&v| v >= n);
        if let Some(v) = too_big {
            return Err(Error::IndexOutOfRange {
                what: "coordinate",
                index: v + 1,
                bound: n,
            });
        }
        Ok(CoordinateMap { forward, inverse })
    }

    pub fn identity(n: usize) -> Self {
        let id: Vec<Scalar> = (0..n).map(Scalar::coord).collect();
        CoordinateMap {
            forward: id.clone(),
            inverse: id,
        }
    }

    pub fn dim(&self) -> usize {
        self.forward.len()
    }

    pub fn forward(&self) -> &[Scalar] {
        &self.forward
    }

    pub fn inverse_components(&self) -> &[Scalar] {
        &self.inverse
    }

    pub fn inverse(&self) -> CoordinateMap {
        CoordinateMap {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// `J^i_a = ∂ũ^i/∂u^a` in the old coordinates.
    pub fn jacobian(&self) -> Matrix {
        Matrix::from_fn(self.dim(), |i, a| self.forward[i].partial(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_diffpoly;

    fn s(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    fn eta2() -> Matrix {
        Matrix::from_rows(vec![vec![s("1"), s("0")], vec![s("0"), s("-1")]]).unwrap()
    }

    #[test]
    fn constant_bracket_is_valid() {
        let b = HomogeneousBracket::constant(1, &eta2());
        assert!(b.validate().is_empty());
        assert!(b.check_skew());
        assert!(b.check_skewh().is_empty());
        assert!(b.extract_named().h.iter().all(Tensor3::is_zero));
    }

    #[test]
    fn wrong_degree_is_reported() {
        let mut b = HomogeneousBracket::zero(1, 3);
        b.set(0, 0, 0, parse_diffpoly("u1_1").unwrap());
        let v = b.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(
            v[0].kind,
            ViolationKind::Degree {
                expected: 3,
                found: vec![1]
            }
        );
    }

    #[test]
    fn bivector_of_simple_bracket() {
        let mut b = HomogeneousBracket::zero(1, 1);
        b.set(1, 0, 0, DiffPoly::one());
        let expect = (&DiffPoly::theta(0, 0) * &DiffPoly::theta(0, 1)).scale(&Scalar::from_ratio(1, 2));
        assert_eq!(b.bivector(), expect);
        assert_eq!(b.bivector().homogeneous_degree(Grading::Deg), Some(1));
        assert_eq!(b.bivector().homogeneous_degree(Grading::Theta), Some(2));
    }

    #[test]
    fn even_degree_needs_skew_metric() {
        let sym = Matrix::from_rows(vec![vec![s("1"), s("2")], vec![s("2"), s("3")]]).unwrap();
        assert!(!HomogeneousBracket::constant(2, &sym).check_skew());
        let skew = Matrix::from_rows(vec![vec![s("0"), s("1")], vec![s("-1"), s("0")]]).unwrap();
        assert!(HomogeneousBracket::constant(2, &skew).check_skew());
    }

    #[test]
    fn skewh_at_degree_one() {
        // k = 1: b^{ij}_l + b^{ji}_l = ∂_l g^{ij}
        let mut b = HomogeneousBracket::zero(1, 1);
        b.set(1, 0, 0, DiffPoly::from_scalar(s("u1")));
        b.set(0, 0, 0, parse_diffpoly("1/2*u1_1").unwrap());
        assert!(b.check_skewh().is_empty());
        assert!(b.check_skew());
        b.set(0, 0, 0, parse_diffpoly("u1_1").unwrap());
        let v = b.check_skewh();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].defect, s("1"));
        assert!(!b.check_skew());
    }

    #[test]
    fn linear_map_on_constant_bracket() {
        let a = Matrix::from_rows(vec![vec![s("2"), s("1")], vec![s("1"), s("1")]]).unwrap();
        let map = CoordinateMap::new(vec![s("2*u1 + u2"), s("u1 + u2")], vec![s("u1 - u2"), s("-u1 + 2*u2")]).unwrap();
        let b = HomogeneousBracket::constant(1, &eta2());
        let t = b.transform(&map).unwrap();
        let expect = a.mul(&eta2()).mul(&a.transpose());
        assert_eq!(t, HomogeneousBracket::constant(1, &expect));
        assert_eq!(b.transform(&CoordinateMap::identity(2)).unwrap(), b);
    }

    #[test]
    fn bad_inverse_is_rejected() {
        let err = CoordinateMap::new(vec![s("u1"), s("u1*u2")], vec![s("u1"), s("u2*u1")]).unwrap_err();
        assert!(matches!(err, Error::NotInvertible(_)));
    }
}

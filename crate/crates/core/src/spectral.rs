// SPDX-License-Identifier: Apache-2.0

//! The `deg_u`-graded pieces of `D_P`, the contraction onto the subalgebra
//! `B̂` of jet-free polynomials in `θ^0..θ^k`, and the induced differential `d_1`
//! computed from `D_P`, from its closed form, and from the flat connections.

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::Rng;

use crate::bracket::{HomogeneousBracket, NamedCoefficients};
use crate::combinat::{binomial_q, sign};
use crate::connections::{flat_connections, lower_metric, Connection};
use crate::diffpoly::{DiffPoly, Grading, JetVar, Term, ThetaVar};
use crate::error::{Error, Result};
use crate::jacobi::{check_jacobi, OddDerivation, PoissonDifferential};
use crate::scalar::Scalar;
use crate::tensor::Matrix;

/// An element of `B̂`: no jet variables and odd variables of order at most `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BRing(DiffPoly);

pub fn in_b(a: &DiffPoly, k: u32) -> bool {
    a.terms().all(|(t, _)| t.even().is_empty() && t.odd().iter().all(|v| v.order <= k))
}

impl BRing {
    pub fn new(a: DiffPoly, k: u32) -> Result<Self> {
        if !in_b(&a, k) {
            return Err(Error::Precondition(format!("{a} is not jet-free with odd orders <= {k}")));
        }
        Ok(BRing(a))
    }

    pub fn as_diffpoly(&self) -> &DiffPoly {
        &self.0
    }

    pub fn into_diffpoly(self) -> DiffPoly {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// `π`: drops every monomial containing a jet variable or an odd variable of order `> k`.
pub fn project_b(a: &DiffPoly, k: u32) -> BRing {
    BRing(a.filter(|t| t.even().is_empty() && t.odd().iter().all(|v| v.order <= k)))
}

/// `i`: the inclusion `B̂ → Â`.
pub fn include_b(x: &BRing) -> DiffPoly {
    x.0.clone()
}

/// An odd derivation given by a finite table of generator images; unlisted generators map to zero.
#[derive(Clone, Debug, Default)]
pub struct TableDerivation {
    u: BTreeMap<(usize, u32), DiffPoly>,
    theta: BTreeMap<(usize, u32), DiffPoly>,
}

impl TableDerivation {
    pub fn set_u(&mut self, index: usize, order: u32, image: DiffPoly) {
        self.u.insert((index, order), image);
    }

    pub fn set_theta(&mut self, index: usize, order: u32, image: DiffPoly) {
        self.theta.insert((index, order), image);
    }
}

impl OddDerivation for TableDerivation {
    fn image_u(&self, index: usize, order: u32) -> DiffPoly {
        self.u.get(&(index, order)).cloned().unwrap_or_default()
    }

    fn image_theta(&self, index: usize, order: u32) -> DiffPoly {
        self.theta.get(&(index, order)).cloned().unwrap_or_default()
    }
}

/// `D_{−1} = Σ_{s≥1} g^{ij} θ_j^{k+s} ∂/∂u^{i,s}`, acting on any jet order.
struct LowestPiece<'a> {
    g: &'a Matrix,
    k: u32,
}

impl OddDerivation for LowestPiece<'_> {
    fn image_u(&self, index: usize, order: u32) -> DiffPoly {
        if order == 0 {
            return DiffPoly::zero();
        }
        let mut out = DiffPoly::zero();
        for j in 0..self.g.dim() {
            out.add_assign_ref(&DiffPoly::theta(j, self.k + order).scale(self.g.get(index, j)));
        }
        out
    }

    fn image_theta(&self, _: usize, _: u32) -> DiffPoly {
        DiffPoly::zero()
    }
}

/// Spectral data of a bracket with nondegenerate `g`.
pub struct Spectral {
    n: usize,
    k: u32,
    g: Matrix,
    gl: Matrix,
    dp: PoissonDifferential,
    closed: TableDerivation,
    connection_form: TableDerivation,
}

impl Spectral {
    /// Requires a valid bracket with invertible `g`; `d_1` statements further assume skewness and Jacobi.
    pub fn new(b: &HomogeneousBracket) -> Result<Self> {
        b.ensure_valid()?;
        let named = b.extract_named();
        let gl = lower_metric(&named.g)?;
        let flat = flat_connections(b)?;
        let closed = closed_d1(b.dim(), b.degree(), &named);
        let connection_form = connection_d1(b.dim(), b.degree(), &named.g, &gl, &flat);
        Ok(Spectral {
            n: b.dim(),
            k: b.degree(),
            g: named.g,
            gl,
            dp: PoissonDifferential::new(b),
            closed,
            connection_form,
        })
    }

    /// As [`Spectral::new`], after verifying skewness and the Jacobi identity.
    pub fn poisson(b: &HomogeneousBracket) -> Result<Self> {
        if !check_jacobi(b)? {
            return Err(Error::NotJacobi);
        }
        Spectral::new(b)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn differential(&self) -> &PoissonDifferential {
        &self.dp
    }

    /// The `deg_u`-degree `m` component of `D_P` on a `deg_u`-homogeneous input.
    pub fn apply_graded(&self, m: i32, a: &DiffPoly) -> Result<DiffPoly> {
        if a.is_zero() {
            return Ok(DiffPoly::zero());
        }
        let p = a.homogeneous_degree(Grading::U).ok_or(Error::NotHomogeneous)? as i32;
        if p + m < 0 {
            return Ok(DiffPoly::zero());
        }
        Ok(self.dp.apply(a).project(Grading::U, (p + m) as u32))
    }

    pub fn d_minus1(&self, a: &DiffPoly) -> DiffPoly {
        LowestPiece { g: &self.g, k: self.k }.apply(a)
    }

    /// `h = (1/l) Σ_{s≥1} u^{i,s} g_{ji} ∂/∂θ_j^{k+s}` on each `l`-homogeneous part,
    /// `l` counting jet variables and odd variables of order `> k`.
    pub fn homotopy(&self, a: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (t, c) in a.terms() {
            let l = t.grading(Grading::U) + t.odd().iter().filter(|v| v.order > self.k).count() as u32;
            if l == 0 {
                continue;
            }
            let mono = DiffPoly::from_term(t.clone(), c.clone());
            let mut acc = DiffPoly::zero();
            for v in t.odd().iter().filter(|v| v.order > self.k) {
                let d = mono.partial_theta(*v);
                let s = v.order - self.k;
                for i in 0..self.n {
                    let w = self.gl.get(v.index, i);
                    if !w.is_zero() {
                        acc.add_assign_ref(&(&DiffPoly::u(i, s) * &d).scale(w));
                    }
                }
            }
            out.add_assign_ref(&acc.scale_rational(&BigRational::new(1.into(), (l as i64).into())));
        }
        out
    }

    pub fn project(&self, a: &DiffPoly) -> BRing {
        project_b(a, self.k)
    }

    /// `π ∘ D_0 ∘ i`.
    pub fn d1_spectral(&self, x: &BRing) -> BRing {
        let d0 = self.apply_graded(0, &include_b(x)).expect("elements of B are deg_u homogeneous");
        project_b(&d0, self.k)
    }

    /// `g^{ij}θ_j^k ∂/∂u^i + ½ Σ (−1)^{k−t} C(k+s−t, r) h_{(t)l}^{ij} θ_i^r θ_j^{k+s−r} ∂/∂θ_l^s`.
    pub fn d1_closed(&self, x: &BRing) -> BRing {
        BRing(self.closed.apply(&x.0))
    }

    /// The parts of `d1_closed` raising `deg_{θ^k}` by one and preserving it.
    pub fn d1_split(&self, x: &BRing) -> Result<(BRing, BRing)> {
        let mut raise = DiffPoly::zero();
        let mut keep = DiffPoly::zero();
        for (t, c) in x.0.terms() {
            let m = t.grading(Grading::ThetaOrder(self.k));
            let img = self.closed.apply(&DiffPoly::from_term(t.clone(), c.clone()));
            let up = img.project(Grading::ThetaOrder(self.k), m + 1);
            let same = img.project(Grading::ThetaOrder(self.k), m);
            let rest = &(&img - &up) - &same;
            if !rest.is_zero() {
                return Err(Error::Precondition(format!("d_1 of {t} has parts of other theta^k degree: {rest}")));
            }
            raise.add_assign_ref(&up);
            keep.add_assign_ref(&same);
        }
        Ok((BRing(raise), BRing(keep)))
    }

    /// `d + Σ_{s<k} Γ_{[s]il}^j du^i θ_j^s ∂/∂θ_l^s` with `du^i = g^{ij}θ_j^k`.
    pub fn d1_as_connection(&self, x: &BRing) -> BRing {
        BRing(self.connection_form.apply(&x.0))
    }
}

fn du(g: &Matrix, k: u32, i: usize) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for j in 0..g.dim() {
        out.add_assign_ref(&DiffPoly::theta(j, k).scale(g.get(i, j)));
    }
    out
}

fn closed_d1(n: usize, k: u32, named: &NamedCoefficients) -> TableDerivation {
    let mut d = TableDerivation::default();
    for i in 0..n {
        d.set_u(i, 0, du(&named.g, k, i));
    }
    // h_(t) for t < k, and h_(k)^{ij}_l = ∂_l g^{ij}
    let h = |t: u32, i: usize, j: usize, l: usize| -> Scalar {
        if t == k {
            named.g.get(i, j).partial(l)
        } else {
            named.h[t as usize].get(i, j, l).clone()
        }
    };
    let half = BigRational::new(1.into(), 2.into());
    let (ki, kk) = (k as i64, k);
    for l in 0..n {
        for s in 0..=kk {
            let mut img = DiffPoly::zero();
            for r in s..=kk {
                for t in 0..=kk {
                    let w = &sign(ki - t as i64) * &binomial_q(ki + s as i64 - t as i64, r as i64);
                    if num_traits::Zero::is_zero(&w) {
                        continue;
                    }
                    let w = Scalar::from_rational(&w * &half);
                    for i in 0..n {
                        for j in 0..n {
                            let c = h(t, i, j, l);
                            if c.is_zero() {
                                continue;
                            }
                            let tt = &DiffPoly::theta(i, r) * &DiffPoly::theta(j, kk + s - r);
                            img.add_assign_ref(&tt.scale(&(&c * &w)));
                        }
                    }
                }
            }
            d.set_theta(l, s, img);
        }
    }
    d
}

fn connection_d1(n: usize, k: u32, g: &Matrix, gl: &Matrix, flat: &[Connection]) -> TableDerivation {
    let mut d = TableDerivation::default();
    let dus: Vec<DiffPoly> = (0..n).map(|i| du(g, k, i)).collect();
    for (i, dui) in dus.iter().enumerate() {
        d.set_u(i, 0, dui.clone());
    }
    for l in 0..n {
        for s in 0..k {
            let conn = &flat[s as usize];
            let mut img = DiffPoly::zero();
            for (i, du) in dus.iter().enumerate() {
                for j in 0..n {
                    let c = conn.get(j, i, l);
                    if !c.is_zero() {
                        img.add_assign_ref(&(du * &DiffPoly::theta(j, s)).scale(c));
                    }
                }
            }
            d.set_theta(l, s, img);
        }
        // d(θ_l^k) = d(g_{lj} du^j) = ∂_m g_{lj} du^m du^j
        let mut img = DiffPoly::zero();
        for m in 0..n {
            for j in 0..n {
                let c = gl.get(l, j).partial(m);
                if !c.is_zero() {
                    img.add_assign_ref(&(&dus[m] * &dus[j]).scale(&c));
                }
            }
        }
        d.set_theta(l, k, img);
    }
    d
}

/// Monomials `u^i` and products of distinct `θ_i^s`, `s <= k`, of degree `1..=max_theta`.
pub fn spanning_set(n: usize, k: u32, max_theta: usize) -> Vec<BRing> {
    let vars: Vec<ThetaVar> = (0..=k).flat_map(|s| (0..n).map(move |i| ThetaVar::new(i, s))).collect();
    let mut out: Vec<BRing> = (0..n).map(|i| BRing(DiffPoly::u(i, 0))).collect();
    let mut stack: Vec<(usize, Vec<ThetaVar>)> = vec![(0, Vec::new())];
    while let Some((start, chosen)) = stack.pop() {
        if !chosen.is_empty() {
            let (_, t) = Term::from_parts(Vec::new(), chosen.clone()).expect("distinct odd variables");
            out.push(BRing(DiffPoly::from_term(t, Scalar::one())));
        }
        if chosen.len() == max_theta {
            continue;
        }
        for idx in (start..vars.len()).rev() {
            let mut next = chosen.clone();
            next.push(vars[idx]);
            stack.push((idx + 1, next));
        }
    }
    out
}

/// A random monomial of `Â` with `deg_u <= max_degu`, jet orders `<= max_degu`,
/// odd orders `<= k + max_degu` and a coefficient that is a small rational or a coordinate.
pub fn random_monomial(rng: &mut impl Rng, n: usize, k: u32, max_degu: u32) -> DiffPoly {
    let degu = rng.gen_range(0..=max_degu);
    let even: Vec<(JetVar, u32)> = (0..degu)
        .map(|_| (JetVar::new(rng.gen_range(0..n), rng.gen_range(1..=max_degu.max(1))), 1))
        .collect();
    let n_odd = rng.gen_range(0..=3usize);
    let mut odd: Vec<ThetaVar> = Vec::new();
    for _ in 0..n_odd {
        let v = ThetaVar::new(rng.gen_range(0..n), rng.gen_range(0..=k + max_degu));
        if !odd.contains(&v) {
            odd.push(v);
        }
    }
    let coeff = if rng.gen_bool(0.5) {
        Scalar::from_ratio(rng.gen_range(-5..=5i64).max(1), rng.gen_range(1..=4))
    } else {
        Scalar::coord(rng.gen_range(0..n))
    };
    let (neg, t) = Term::from_parts(even, odd).expect("distinct odd variables");
    let m = DiffPoly::from_term(t, coeff);
    if neg {
        -m
    } else {
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn lowest_piece_examples() {
        let b = fixtures::constant(3);
        let sp = Spectral::new(&b).unwrap();
        let eta = fixtures::constant_eta(3);
        let expect = &DiffPoly::theta(0, 4).scale(eta.get(0, 0)) + &DiffPoly::theta(1, 4).scale(eta.get(0, 1));
        assert_eq!(sp.d_minus1(&DiffPoly::u(0, 1)), expect);
        assert_eq!(sp.apply_graded(-1, &DiffPoly::u(0, 1)).unwrap(), expect);
        assert!(sp.d_minus1(&DiffPoly::u(0, 0)).is_zero());
        assert!(sp.apply_graded(-2, &DiffPoly::u(1, 2)).unwrap().is_zero());
    }

    #[test]
    fn homotopy_examples() {
        let b = fixtures::rational_k3();
        let sp = Spectral::new(&b).unwrap();
        let gl = lower_metric(&b.extract_named().g).unwrap();
        let th = DiffPoly::theta(1, 4);
        let h = sp.homotopy(&th);
        let expect = &DiffPoly::u(0, 1).scale(gl.get(1, 0)) + &DiffPoly::u(1, 1).scale(gl.get(1, 1));
        assert_eq!(h, expect);
        assert!(sp.homotopy(&DiffPoly::u(0, 0)).is_zero());
        let round = &sp.d_minus1(&h) + &sp.homotopy(&sp.d_minus1(&th));
        assert_eq!(round, th);
    }

    #[test]
    fn projection_examples() {
        let k = 3;
        let a = &DiffPoly::u(0, 1) * &DiffPoly::theta(0, 0);
        assert!(project_b(&a, k).is_zero());
        let b = &DiffPoly::theta(0, 3) * &DiffPoly::theta(1, 0);
        assert_eq!(project_b(&b, k).into_diffpoly(), b);
        assert!(BRing::new(DiffPoly::theta(0, 4), k).is_err());
    }

    #[test]
    fn spanning_set_size() {
        // 2 coordinates + C(8,1) + C(8,2) + C(8,3)
        assert_eq!(spanning_set(2, 3, 3).len(), 2 + 8 + 28 + 56);
    }

    #[test]
    fn d1_on_coordinates() {
        let b = fixtures::rational_k3();
        let sp = Spectral::new(&b).unwrap();
        let g = b.extract_named().g;
        for i in 0..2 {
            let x = BRing(DiffPoly::u(i, 0));
            let expect = du(&g, 3, i);
            assert_eq!(sp.d1_spectral(&x).into_diffpoly(), expect);
            assert_eq!(sp.d1_closed(&x).into_diffpoly(), expect);
            assert_eq!(sp.d1_as_connection(&x).into_diffpoly(), expect);
            let (up, same) = sp.d1_split(&x).unwrap();
            assert_eq!(up.into_diffpoly(), expect);
            assert!(same.is_zero());
        }
    }
}

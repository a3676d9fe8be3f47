// SPDX-License-Identifier: Apache-2.0

//! The odd evolutionary derivation `D_P` of a bracket and the Jacobi test `D_P² = 0`.
//!
//! `D_P` acts on generators by
//! `D_P(u^{i,s}) = ∂_x^s(δP/δθ_i)` and `D_P(θ_i^s) = ∂_x^s(δP/δu^i)`,
//! where `P` is the bivector of the bracket. `D_P²` is again a derivation
//! commuting with `∂_x`, so it vanishes identically once it vanishes on
//! `u^i` and `θ_i`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::bracket::HomogeneousBracket;
use crate::diffpoly::DiffPoly;
use crate::error::{Error, Result};

/// An odd derivation of the superalgebra, given by its values on generators.
pub trait OddDerivation {
    /// Image of `u^{i,s}` (`s = 0` is the coordinate `u^i`).
    fn image_u(&self, index: usize, order: u32) -> DiffPoly;
    fn image_theta(&self, index: usize, order: u32) -> DiffPoly;

    /// `X(a) = Σ_v X(v) ∂a/∂v` over all variables of `a`, with left odd derivatives.
    fn apply(&self, a: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        if let Some(top) = a.max_coord() {
            for i in 0..=top {
                let d = a.partial_coord(i);
                if !d.is_zero() {
                    out.add_assign_ref(&(&self.image_u(i, 0) * &d));
                }
            }
        }
        for v in a.jet_vars() {
            let img = self.image_u(v.index, v.order);
            if !img.is_zero() {
                out.add_assign_ref(&(&img * &a.partial_jet(v)));
            }
        }
        for v in a.theta_vars() {
            let img = self.image_theta(v.index, v.order);
            if !img.is_zero() {
                out.add_assign_ref(&(&img * &a.partial_theta(v)));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Slot {
    U(usize),
    Theta(usize),
}

/// `D_P` for a fixed bracket, with memoized generator images.
pub struct PoissonDifferential {
    n: usize,
    k: u32,
    /// `δP/δθ_i`
    var_theta: Vec<DiffPoly>,
    /// `δP/δu^i`
    var_u: Vec<DiffPoly>,
    cache: Mutex<HashMap<Slot, Vec<DiffPoly>>>,
}

impl PoissonDifferential {
    pub fn new(b: &HomogeneousBracket) -> Self {
        let p = b.bivector();
        let n = b.dim();
        PoissonDifferential {
            n,
            k: b.degree(),
            var_theta: (0..n).map(|i| p.variational_theta(i)).collect(),
            var_u: (0..n).map(|i| p.variational_u(i)).collect(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn variational_theta(&self, i: usize) -> &DiffPoly {
        &self.var_theta[i]
    }

    pub fn variational_u(&self, i: usize) -> &DiffPoly {
        &self.var_u[i]
    }

    fn image(&self, slot: Slot, order: u32) -> DiffPoly {
        let base = match slot {
            Slot::U(i) if i < self.n => &self.var_theta[i],
            Slot::Theta(i) if i < self.n => &self.var_u[i],
            _ => return DiffPoly::zero(),
        };
        let mut cache = self.cache.lock().expect("derivative cache poisoned");
        let chain = cache.entry(slot).or_insert_with(|| vec![base.clone()]);
        while chain.len() <= order as usize {
            let next = chain.last().unwrap().d_x();
            chain.push(next);
        }
        chain[order as usize].clone()
    }
}

impl OddDerivation for PoissonDifferential {
    fn image_u(&self, index: usize, order: u32) -> DiffPoly {
        self.image(Slot::U(index), order)
    }

    fn image_theta(&self, index: usize, order: u32) -> DiffPoly {
        self.image(Slot::Theta(index), order)
    }
}

pub fn apply_dp(b: &HomogeneousBracket, a: &DiffPoly) -> DiffPoly {
    PoissonDifferential::new(b).apply(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    U(usize),
    Theta(usize),
}

impl Generator {
    pub fn as_diffpoly(&self) -> DiffPoly {
        match *self {
            Generator::U(i) => DiffPoly::u(i, 0),
            Generator::Theta(i) => DiffPoly::theta(i, 0),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::U(i) => write!(f, "u{}", i + 1),
            Generator::Theta(i) => write!(f, "th{}_0", i + 1),
        }
    }
}

/// A generator on which `D_P²` does not vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiDefect {
    pub generator: Generator,
    pub value: DiffPoly,
}

impl fmt::Display for JacobiDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D_P^2({}) = {}", self.generator, self.value)
    }
}

/// All generators with nonzero `D_P²`; empty iff the Jacobi identity holds.
pub fn jacobi_defects(b: &HomogeneousBracket) -> Result<Vec<JacobiDefect>> {
    b.ensure_valid()?;
    if !b.check_skew() {
        return Err(Error::NotSkew);
    }
    Ok(bivector_square_defects(b))
}

/// `D_P²` on the generators of the bivector of `b`, without the skewness
/// precondition. For a non-skew table the bivector only encodes the skew part.
pub fn bivector_square_defects(b: &HomogeneousBracket) -> Vec<JacobiDefect> {
    let dp = PoissonDifferential::new(b);
    let gens = (0..b.dim()).map(Generator::U).chain((0..b.dim()).map(Generator::Theta));
    gens.filter_map(|g| {
        let once = match g {
            Generator::U(i) => dp.image_u(i, 0),
            Generator::Theta(i) => dp.image_theta(i, 0),
        };
        let value = dp.apply(&once);
        (!value.is_zero()).then_some(JacobiDefect { generator: g, value })
    })
    .collect()
}

pub fn check_jacobi(b: &HomogeneousBracket) -> Result<bool> {
    Ok(jacobi_defects(b)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_diffpoly;
    use crate::scalar::Scalar;
    use crate::tensor::Matrix;

    fn s(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    #[test]
    fn constant_bracket_images() {
        let eta = Matrix::from_rows(vec![vec![s("0"), s("1")], vec![s("-1"), s("0")]]).unwrap();
        let b = HomogeneousBracket::constant(2, &eta);
        let dp = PoissonDifferential::new(&b);
        assert_eq!(dp.apply(&DiffPoly::u(0, 0)), DiffPoly::theta(1, 2));
        assert_eq!(dp.apply(&DiffPoly::u(1, 0)), -DiffPoly::theta(0, 2));
        assert!(dp.apply(&DiffPoly::theta(0, 0)).is_zero());
        assert!(check_jacobi(&b).unwrap());
    }

    #[test]
    fn one_component_hydrodynamic_bracket() {
        // {u, u} = 2u δ' + u_x δ is Poisson
        let mut b = HomogeneousBracket::zero(1, 1);
        b.set(1, 0, 0, parse_diffpoly("2*u1").unwrap());
        b.set(0, 0, 0, parse_diffpoly("u1_1").unwrap());
        assert!(b.check_skew());
        assert!(check_jacobi(&b).unwrap());
    }

    #[test]
    fn non_skew_is_a_precondition_error() {
        let mut b = HomogeneousBracket::zero(1, 1);
        b.set(1, 0, 0, parse_diffpoly("1").unwrap());
        b.set(0, 0, 0, parse_diffpoly("u1_1").unwrap());
        assert!(matches!(check_jacobi(&b), Err(Error::NotSkew)));
    }

    #[test]
    fn degree_shift() {
        let mut b = HomogeneousBracket::zero(1, 1);
        b.set(1, 0, 0, parse_diffpoly("2*u1").unwrap());
        b.set(0, 0, 0, parse_diffpoly("u1_1").unwrap());
        let a = &DiffPoly::u(0, 2) * &DiffPoly::theta(0, 1);
        let img = apply_dp(&b, &a);
        assert_eq!(img.homogeneous_degree(crate::Grading::Deg), Some(4));
        assert_eq!(img.homogeneous_degree(crate::Grading::Theta), Some(2));
    }
}

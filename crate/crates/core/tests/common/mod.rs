// SPDX-License-Identifier: Apache-2.0

//! Random inputs and algebraic laws shared by the property and acceptance suites.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use dnflat::diffpoly::{DiffPoly, Grading};
use dnflat::jacobi::OddDerivation;
use dnflat::scalar::Scalar;
use dnflat::spectral::{include_b, project_b, random_monomial};

const COEFFICIENTS: [&str; 7] = ["1", "-3/2", "u1", "u2/u1", "1/(1 + u2)", "(u1^2 - u2)/(u1 + 2)", "u1*u2 - 5"];

pub fn random_scalar(rng: &mut impl Rng) -> Scalar {
    Scalar::parse(COEFFICIENTS.choose(rng).expect("nonempty")).expect("coefficient parses")
}

/// A monomial of `Â` in two coordinates times a rational-function coefficient.
pub fn random_monomial2(rng: &mut impl Rng, k: u32, max_degu: u32) -> DiffPoly {
    random_monomial(rng, 2, k, max_degu).scale(&random_scalar(rng))
}

/// A sum of up to `terms` random monomials.
pub fn random_poly(rng: &mut impl Rng, k: u32, max_degu: u32, terms: usize) -> DiffPoly {
    let count = rng.gen_range(1..=terms);
    (0..count).fold(DiffPoly::zero(), |acc, _| &acc + &random_monomial2(rng, k, max_degu))
}

/// A differential polynomial without odd variables.
pub fn random_even_poly(rng: &mut impl Rng, max_order: u32, terms: usize) -> DiffPoly {
    let count = rng.gen_range(1..=terms);
    let mut out = DiffPoly::zero();
    for _ in 0..count {
        let mut m = DiffPoly::from_scalar(random_scalar(rng));
        for _ in 0..rng.gen_range(0..=3) {
            m = &m * &DiffPoly::u(rng.gen_range(0..2), rng.gen_range(0..=max_order));
        }
        out = &out + &m;
    }
    out
}

fn parity(a: &DiffPoly) -> usize {
    a.terms().next().map(|(t, _)| t.odd().len() % 2).unwrap_or(0)
}

fn differs(name: &str, lhs: &DiffPoly, rhs: &DiffPoly) -> Option<String> {
    (lhs != rhs).then(|| format!("{name}: difference {}", lhs - rhs))
}

/// `∂_x(ab) = ∂_x(a) b + a ∂_x(b)`.
pub fn dx_leibniz(a: &DiffPoly, b: &DiffPoly) -> Option<String> {
    let lhs = (a * b).d_x();
    let rhs = &(&a.d_x() * b) + &(a * &b.d_x());
    differs("d_x Leibniz", &lhs, &rhs)
}

/// `D(ab) = D(a) b + (-1)^{|a|} a D(b)` for a monomial `a`.
pub fn odd_leibniz(d: &impl OddDerivation, a: &DiffPoly, b: &DiffPoly) -> Option<String> {
    let lhs = d.apply(&(a * b));
    let second = a * &d.apply(b);
    let rhs = if parity(a) == 0 {
        &(&d.apply(a) * b) + &second
    } else {
        &(&d.apply(a) * b) - &second
    };
    differs("odd Leibniz", &lhs, &rhs)
}

/// `D` commutes with `∂_x`.
pub fn commutes_with_dx(d: &impl OddDerivation, a: &DiffPoly) -> Option<String> {
    differs("D d_x = d_x D", &d.apply(&a.d_x()), &d.apply(a).d_x())
}

/// Variational derivatives in every direction vanish on `∂_x a`.
pub fn variational_kills_total_derivative(a: &DiffPoly, n: usize) -> Option<String> {
    let t = a.d_x();
    (0..n).find_map(|i| {
        let du = t.variational_u(i);
        let dt = t.variational_theta(i);
        if !du.is_zero() {
            Some(format!("d/du{}: {du}", i + 1))
        } else if !dt.is_zero() {
            Some(format!("d/dth{}: {dt}", i + 1))
        } else {
            None
        }
    })
}

/// Projections onto graded pieces are idempotent and the pieces sum back to `a`.
pub fn projection_laws(a: &DiffPoly, k: u32) -> Option<String> {
    for g in [Grading::Deg, Grading::Theta, Grading::U, Grading::ThetaOrder(k)] {
        let top = a.terms().map(|(t, _)| t.grading(g)).max().unwrap_or(0);
        let mut sum = DiffPoly::zero();
        for d in 0..=top {
            let p = a.project(g, d);
            if p.project(g, d) != p {
                return Some(format!("{g:?} projection of degree {d} is not idempotent"));
            }
            sum = &sum + &p;
        }
        if &sum != a {
            return Some(format!("{g:?} pieces do not sum back"));
        }
    }
    let once = include_b(&project_b(a, k));
    let twice = include_b(&project_b(&once, k));
    differs("projection to B", &twice, &once)
}

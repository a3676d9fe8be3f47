// SPDX-License-Identifier: Apache-2.0

//! Reference brackets and coordinate maps used by tests, examples and the CLI.

use crate::bracket::{CoordinateMap, HomogeneousBracket};
use crate::diffpoly::DiffPoly;
use crate::expr::parse_diffpoly;
use crate::lowdegree::{canonical_k2, potemin_build};
use crate::scalar::Scalar;
use crate::tensor::{Matrix, Tensor3};

fn s(text: &str) -> Scalar {
    Scalar::parse(text).expect("fixture expression parses")
}

fn matrix(rows: &[&[&str]]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|e| s(e)).collect()).collect()).expect("square fixture")
}

/// Metric and `c^{ij}_l` of the two-component degree-3 example with curved `Γ_(1)`, `Γ_(2)`.
pub fn rational_k3_data() -> (Matrix, Tensor3) {
    let g = matrix(&[&["1", "u2/u1"], &["u2/u1", "(1 + u2^2)/u1^2"]]);
    let c1 = matrix(&[&["0", "-u2/u1^2"], &["0", "-(1 + u2^2)/u1^3"]]);
    let c2 = matrix(&[&["0", "1/u1"], &["0", "u2/u1^2"]]);
    let c = Tensor3::from_fn(2, |i, j, l| if l == 0 { c1.get(i, j).clone() } else { c2.get(i, j).clone() });
    (g, c)
}

pub fn rational_k3() -> HomogeneousBracket {
    let (g, c) = rational_k3_data();
    potemin_build(&g, &c).expect("fixture data is valid")
}

/// The degree-3 example with `P_0^{11}` replaced by `u^{1,3}`; no longer skew.
pub fn rational_k3_single_entry_perturbation() -> HomogeneousBracket {
    let mut b = rational_k3();
    b.set(0, 0, 0, DiffPoly::u(0, 3));
    b
}

/// The degree-3 example with `u^{1,3}` added to `P_0^{12}` and subtracted from `P_0^{21}`; still skew.
pub fn rational_k3_skew_perturbation() -> HomogeneousBracket {
    let mut b = rational_k3();
    let d = DiffPoly::u(0, 3);
    b.set(0, 0, 1, b.get(0, 0, 1) + &d);
    b.set(0, 1, 0, b.get(0, 1, 0) - &d);
    b
}

/// Nondegenerate constant `η` with `η^T = (−1)^{k+1} η` in dimension 2.
pub fn constant_eta(k: u32) -> Matrix {
    if k % 2 == 1 {
        matrix(&[&["2", "1"], &["1", "-1"]])
    } else {
        matrix(&[&["0", "1"], &["-1", "0"]])
    }
}

pub fn constant(k: u32) -> HomogeneousBracket {
    HomogeneousBracket::constant(k, &constant_eta(k))
}

/// `ũ¹ = u¹`, `ũ² = u¹u²`.
pub fn product_map() -> CoordinateMap {
    CoordinateMap::new(vec![s("u1"), s("u1*u2")], vec![s("u1"), s("u2/u1")]).expect("fixture map is invertible")
}

/// `ũ^i = u^i/(1 + u²)`, a projective change of both coordinates.
pub fn rational_map() -> CoordinateMap {
    CoordinateMap::new(
        vec![s("u1/(1 + u2)"), s("u2/(1 + u2)")],
        vec![s("u1/(1 - u2)"), s("u2/(1 - u2)")],
    )
    .expect("fixture map is invertible")
}

/// `ũ¹ = u¹ + (u²)²` on four coordinates, other coordinates fixed.
pub fn shear_map4() -> CoordinateMap {
    CoordinateMap::new(
        vec![s("u1 + u2^2"), s("u2"), s("u3"), s("u4")],
        vec![s("u1 - u2^2"), s("u2"), s("u3"), s("u4")],
    )
    .expect("fixture map is invertible")
}

/// `g^{ij} = diag(u¹, 1)` with `b^{ij}_l = −g^{is}Γ^j_{sl}` from its Levi-Civita connection.
pub fn levi_civita_k1() -> HomogeneousBracket {
    let mut b = HomogeneousBracket::zero(2, 1);
    b.set(1, 0, 0, DiffPoly::u(0, 0));
    b.set(1, 1, 1, DiffPoly::one());
    b.set(0, 0, 0, parse_diffpoly("1/2*u1_1").expect("fixture"));
    b
}

/// `levi_civita_k1` with an antisymmetric change of `b^{12}_1`; skew but torsionful.
pub fn levi_civita_k1_perturbed() -> HomogeneousBracket {
    let mut b = levi_civita_k1();
    b.set(0, 0, 1, DiffPoly::u(0, 1));
    b.set(0, 1, 0, -DiffPoly::u(0, 1));
    b
}

/// Lower metric `ω = Ω + a(u)` on four coordinates with `Ω` constant and
/// `∂_i ω_{jk}` totally skew (`ω_{12} ∋ u³`, `ω_{23} ∋ u¹`, `ω_{31} ∋ u²`).
pub fn linear_skew_form(perturb: bool) -> Matrix {
    let w12 = if perturb { "1 + u3 + u1" } else { "1 + u3" };
    let neg12 = if perturb { "-1 - u3 - u1" } else { "-1 - u3" };
    matrix(&[
        &["0", w12, "-u2", "0"],
        &[neg12, "0", "u1", "0"],
        &["u2", "-u1", "0", "1"],
        &["0", "0", "-1", "0"],
    ])
}

/// `∂ ∘ g ∘ ∂` with `g = ω^{-1}` for [`linear_skew_form`].
pub fn canonical_k2_linear(perturb: bool) -> HomogeneousBracket {
    let g = linear_skew_form(perturb).inverse().expect("form is nondegenerate");
    canonical_k2(&g).expect("inverse of a skew matrix is skew")
}

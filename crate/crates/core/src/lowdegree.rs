// SPDX-License-Identifier: Apache-2.0

//! Classical condition sets for brackets of degree 1 to 4, written in the
//! coefficients `b, c, d, e` of `δ^{(k-1)}, δ^{(k-2)}, …`.

use num_rational::BigRational;

use crate::bracket::HomogeneousBracket;
use crate::connections::{flat_connections, lower_metric, standard_connections, Connection};
use crate::diffpoly::{DiffPoly, JetVar, Term};
use crate::error::{Error, Result};
use crate::report::Check;
use crate::scalar::Scalar;
use crate::tensor::{Matrix, Tensor3};

fn require_degree(b: &HomogeneousBracket, k: u32) -> Result<()> {
    if b.degree() != k {
        return Err(Error::WrongDegree {
            expected: k,
            found: b.degree(),
        });
    }
    b.ensure_valid()
}

fn first_nonzero3(label: &str, t: &Tensor3) -> Option<String> {
    t.first_nonzero()
        .map(|((a, b, c), v)| format!("{label}[{},{},{}] = {v}", a + 1, b + 1, c + 1))
}

fn jet_term(factors: &[(usize, u32)]) -> Term {
    let even = factors.iter().map(|&(l, s)| (JetVar::new(l, s), 1)).collect();
    Term::from_parts(even, Vec::new()).expect("no odd variables").1
}

/// Coefficient `q_{lm}` of `u^l_x u^m_x` in `Σ q_{lm} u^l_x u^m_x` with `q` symmetric.
pub fn quadratic_coefficient(p: &DiffPoly, l: usize, m: usize) -> Scalar {
    let c = p.coefficient(&jet_term(&[(l, 1), (m, 1)]));
    if l == m {
        c
    } else {
        c.scale(&BigRational::new(1.into(), 2.into()))
    }
}

fn matrix_witness(label: &str, m: &Matrix) -> Option<String> {
    let n = m.dim();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !m.get(i, j).is_zero())
        .map(|(i, j)| format!("{label}[{},{}] = {}", i + 1, j + 1, m.get(i, j)))
}

/// Degree 1: `Γ_(0)` flat, torsion-free and compatible with `g`, plus skewness.
pub fn dn_check(b: &HomogeneousBracket) -> Result<Vec<Check>> {
    require_degree(b, 1)?;
    let named = b.extract_named();
    let g = &named.g;
    let mut out = Vec::new();
    let asym = Matrix::from_fn(g.dim(), |i, j| g.get(i, j) - g.get(j, i));
    out.push(Check::from_witness("g symmetric", matrix_witness("g - g^T", &asym)));
    let skewh = b.check_skewh();
    out.push(Check::from_witness(
        "b^ij_l + b^ji_l = d_l g^ij",
        skewh
            .first()
            .map(|v| format!("(i,j,l) = ({},{},{}): defect {}", v.i + 1, v.j + 1, v.l + 1, v.defect)),
    ));
    let gamma = standard_connections(b)?.remove(0);
    out.extend(connection_checks("G(0)", &gamma));
    let gl = lower_metric(g)?;
    out.push(Check::from_witness(
        "G(0) compatible with g",
        first_nonzero3("nabla g_lower", &gamma.flip_torsion().nabla_lower(&gl)),
    ));
    Ok(out)
}

fn connection_checks(label: &str, c: &Connection) -> Vec<Check> {
    let t = c.torsion();
    let r = c.curvature();
    let n = c.dim();
    let mut rw = None;
    'outer: for l in 0..n {
        for tt in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let v = r.get(l, tt, i, j);
                    if !v.is_zero() {
                        rw = Some(format!("R^{}_{{{},{},{}}} = {v}", l + 1, tt + 1, i + 1, j + 1));
                        break 'outer;
                    }
                }
            }
        }
    }
    vec![
        Check::from_witness(format!("{label} torsion-free"), first_nonzero3("T", &t)),
        Check::from_witness(format!("{label} flat"), rw),
    ]
}

/// Degree 2: the five conditions (a)–(e) on `g, b, c^{ij}_l, c^{ij}_{lm}`.
pub fn ferguson_check(b: &HomogeneousBracket) -> Result<Vec<Check>> {
    require_degree(b, 2)?;
    let n = b.dim();
    let named = b.extract_named();
    let g = &named.g;
    let bb = &named.h[1];
    let c1 = &named.h[0];
    let mut out = Vec::new();

    let sym = Matrix::from_fn(n, |i, j| g.get(i, j) + g.get(j, i));
    out.push(Check::from_witness("(a) g skew", matrix_witness("g + g^T", &sym)));

    let gl = lower_metric(g)?;
    let gamma = standard_connections(b)?.remove(0);
    let cc = connection_checks("(b) G(0)", &gamma);
    let b_ok = cc.iter().all(Check::passed);
    let b_witness = cc.iter().find_map(|c| c.witness.clone());
    out.push(Check::from_witness("(b) G(0) flat and torsion-free", if b_ok { None } else { b_witness }));

    let ng = gamma.nabla_lower(&gl);
    let sym_ij = Tensor3::from_fn(n, |i, j, l| ng.get(i, j, l) + ng.get(j, i, l));
    let sym_jl = Tensor3::from_fn(n, |i, j, l| ng.get(i, j, l) + ng.get(i, l, j));
    out.push(Check::from_witness(
        "(c) nabla_i g_jl totally skew",
        first_nonzero3("sym in (i,j)", &sym_ij).or_else(|| first_nonzero3("sym in (j,l)", &sym_jl)),
    ));

    let nu = gamma.nabla_upper(g);
    let d_def = Tensor3::from_fn(n, |l, i, j| {
        let rhs = bb.get(i, j, l) - &c1.get(i, j, l).scale(&BigRational::from_integer(2.into()));
        nu.get(l, i, j) - &rhs
    });
    out.push(Check::from_witness(
        "(d) nabla_l g^ij = b^ij_l - 2 c^ij_l",
        first_nonzero3("defect (l,i,j)", &d_def),
    ));

    let half = BigRational::new(1.into(), 2.into());
    let mut e_witness = None;
    'e: for i in 0..n {
        for j in 0..n {
            let p0 = b.get(0, i, j);
            for q in 0..n {
                for l in q..n {
                    let lhs = quadratic_coefficient(p0, q, l);
                    let mut rhs = (&c1.get(i, j, q).partial(l) + &c1.get(i, j, l).partial(q)).scale(&half);
                    for p in 0..n {
                        for r in 0..n {
                            let sym = &(c1.get(r, i, q) * c1.get(p, j, l)) + &(c1.get(r, i, l) * c1.get(p, j, q));
                            rhs = &rhs - &(gl.get(p, r) * &sym.scale(&half));
                        }
                    }
                    let defect = &lhs - &rhs;
                    if !defect.is_zero() {
                        e_witness = Some(format!("(i,j,q,l) = ({},{},{},{}): defect {defect}", i + 1, j + 1, q + 1, l + 1));
                        break 'e;
                    }
                }
            }
        }
    }
    out.push(Check::from_witness("(e) quadratic coefficients", e_witness));
    Ok(out)
}

/// `P = ∂ ∘ g ∘ ∂`: `P_2 = g`, `P_1 = ∂_x g`, `P_0 = 0`.
pub fn canonical_k2(g: &Matrix) -> Result<HomogeneousBracket> {
    if !g.is_skew() {
        return Err(Error::Precondition("canonical form needs a skew matrix".into()));
    }
    let n = g.dim();
    let mut b = HomogeneousBracket::zero(n, 2);
    for i in 0..n {
        for j in 0..n {
            let gij = DiffPoly::from_scalar(g.get(i, j).clone());
            b.set(1, i, j, gij.d_x());
            b.set(2, i, j, gij);
        }
    }
    Ok(b)
}

/// `P = ∂ ∘ (g ∂ + A) ∘ ∂` with `A^{ij} = c^{ij}_l u^l_x`; `c.get(i, j, l) = c^{ij}_l`.
pub fn potemin_build(g: &Matrix, c: &Tensor3) -> Result<HomogeneousBracket> {
    if !g.is_symmetric() {
        return Err(Error::Precondition("metric must be symmetric".into()));
    }
    g.inverse()?;
    let n = g.dim();
    let mut b = HomogeneousBracket::zero(n, 3);
    for i in 0..n {
        for j in 0..n {
            let gij = DiffPoly::from_scalar(g.get(i, j).clone());
            let mut a = DiffPoly::zero();
            for l in 0..n {
                a.add_assign_ref(&DiffPoly::u(l, 1).scale(c.get(i, j, l)));
            }
            b.set(3, i, j, gij.clone());
            b.set(2, i, j, &gij.d_x() + &a);
            b.set(1, i, j, a.d_x());
        }
    }
    Ok(b)
}

/// The four equations on `(g, c)` of the degree-3 normal form.
pub fn potemin_check(g: &Matrix, c: &Tensor3) -> Result<Vec<Check>> {
    if !g.is_symmetric() {
        return Err(Error::Precondition("metric must be symmetric".into()));
    }
    g.inverse()?;
    let n = g.dim();
    let e1 = Tensor3::from_fn(n, |i, j, l| &(&g.get(i, j).partial(l) - c.get(i, j, l)) - c.get(j, i, l));
    let contract = |i: usize, j: usize, l: usize| -> Scalar {
        // g^{is} c^{jl}_s
        (0..n).fold(Scalar::zero(), |acc, s| &acc + &(g.get(i, s) * c.get(j, l, s)))
    };
    let e2 = Tensor3::from_fn(n, |i, j, l| &contract(i, j, l) + &contract(j, i, l));
    let e3 = Tensor3::from_fn(n, |i, j, l| {
        let a = contract(i, j, l);
        let b = (0..n).fold(Scalar::zero(), |acc, s| &acc + &(g.get(j, s) * c.get(l, i, s)));
        let d = (0..n).fold(Scalar::zero(), |acc, s| &acc + &(g.get(l, s) * c.get(i, j, s)));
        &(&a + &b) + &d
    });
    let mut w4 = None;
    'outer: for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                for m in 0..n {
                    let mut v = Scalar::zero();
                    for s in 0..n {
                        v = &v + &(g.get(l, s) * &c.get(i, j, s).partial(m));
                        v = &v - &(c.get(i, l, s) * c.get(s, j, m));
                        v = &v + &(c.get(l, i, s) * c.get(s, j, m));
                        v = &v + &(c.get(l, j, s) * &g.get(s, i).partial(m));
                    }
                    if !v.is_zero() {
                        w4 = Some(format!("(i,j,l,m) = ({},{},{},{}): defect {v}", i + 1, j + 1, l + 1, m + 1));
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(vec![
        Check::from_witness("d_l g^ij = c^ij_l + c^ji_l", first_nonzero3("defect (i,j,l)", &e1)),
        Check::from_witness("g^is c^jl_s = -g^js c^il_s", first_nonzero3("defect (i,j,l)", &e2)),
        Check::from_witness("cyclic g c sum vanishes", first_nonzero3("defect (i,j,l)", &e3)),
        Check::from_witness("g^ls c^ij_s,m quadratic relation", w4),
    ])
}

/// `Γ^l_{ij} = Σ_a g_{ia} X^{al}_j` for a tensor stored as `x.get(a, l, j)`.
pub fn lower_first(gl: &Matrix, x: &Tensor3) -> Connection {
    let n = gl.dim();
    Connection::from_fn(n, |l, i, j| {
        (0..n).fold(Scalar::zero(), |acc, a| &acc + &(gl.get(i, a) * x.get(a, l, j)))
    })
}

fn combo(parts: &[(i64, &Tensor3)]) -> Tensor3 {
    let n = parts[0].1.dim();
    Tensor3::from_fn(n, |a, b, c| {
        parts.iter().fold(Scalar::zero(), |acc, (w, t)| {
            &acc + &t.get(a, b, c).scale(&BigRational::from_integer((*w).into()))
        })
    })
}

fn compare(label: &str, got: &Connection, expect: &Connection) -> Check {
    Check::from_witness(label, first_nonzero3("difference", &got.symbols().sub(expect.symbols())))
}

/// Degree 3 normal form: `Γ_[1] = g c` and `Γ_[2] = 2 g c − g cᵀ` against the general formulas.
pub fn potemin_connections(g: &Matrix, c: &Tensor3) -> Result<Vec<Check>> {
    let b = potemin_build(g, c)?;
    let gl = lower_metric(g)?;
    let flat = flat_connections(&b)?;
    let n = g.dim();
    let ct = Tensor3::from_fn(n, |s, l, j| c.get(l, s, j).clone());
    let gc = lower_first(&gl, c);
    let second = lower_first(&gl, &combo(&[(2, c), (-1, &ct)]));
    let std0 = standard_connections(&b)?.remove(0);
    Ok(vec![
        Check::from_witness("G(0) vanishes", first_nonzero3("G(0)", std0.symbols())),
        compare("G[1] = g c", &flat[1], &gc),
        compare("G[2] = 2 g c - g c^T", &flat[2], &second),
    ])
}

/// Degree 4: standard and flat connections against closed forms in `b, c, d, e`.
pub fn k4_connection_fixtures(b: &HomogeneousBracket) -> Result<Vec<Check>> {
    require_degree(b, 4)?;
    let named = b.extract_named();
    let gl = lower_metric(&named.g)?;
    let (e, d, c, bb) = (&named.h[0], &named.h[1], &named.h[2], &named.h[3]);
    let std = standard_connections(b)?;
    let flat = flat_connections(b)?;
    let scaled = |t: &Tensor3, num: i64, den: i64| lower_first(&gl, t).scale(&BigRational::new(num.into(), den.into()));
    Ok(vec![
        compare("G(0) = -g e", &std[0], &scaled(e, -1, 1)),
        compare("G(1) = -1/4 g d", &std[1], &scaled(d, -1, 4)),
        compare("G(2) = -1/6 g c", &std[2], &scaled(c, -1, 6)),
        compare("G(3) = -1/4 g b", &std[3], &scaled(bb, -1, 4)),
        compare("G[1] = g(d - 5e)", &flat[1], &lower_first(&gl, &combo(&[(1, d), (-5, e)]))),
        compare(
            "G[2] = g(-c + 5d - 15e)",
            &flat[2],
            &lower_first(&gl, &combo(&[(-1, c), (5, d), (-15, e)])),
        ),
        compare(
            "G[3] = g(b - 5c + 15d - 35e)",
            &flat[3],
            &lower_first(&gl, &combo(&[(1, bb), (-5, c), (15, d), (-35, e)])),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    #[test]
    fn canonical_constant_is_only_top() {
        let g = Matrix::from_rows(vec![vec![s("0"), s("2")], vec![s("-2"), s("0")]]).unwrap();
        let b = canonical_k2(&g).unwrap();
        assert_eq!(b, HomogeneousBracket::constant(2, &g));
        assert!(ferguson_check(&b).unwrap().iter().all(Check::passed));
        assert!(canonical_k2(&Matrix::identity(2)).is_err());
    }

    #[test]
    fn potemin_trivial_data() {
        let g = Matrix::identity(2);
        let c = Tensor3::zeros(2);
        let b = potemin_build(&g, &c).unwrap();
        assert_eq!(b, HomogeneousBracket::constant(3, &g));
        assert!(potemin_check(&g, &c).unwrap().iter().all(Check::passed));
    }

    #[test]
    fn wrong_degree_is_an_error() {
        let b = HomogeneousBracket::constant(3, &Matrix::identity(2));
        assert!(matches!(dn_check(&b), Err(Error::WrongDegree { expected: 1, found: 3 })));
        assert!(matches!(ferguson_check(&b), Err(Error::WrongDegree { .. })));
        assert!(matches!(k4_connection_fixtures(&b), Err(Error::WrongDegree { .. })));
    }

    #[test]
    fn quadratic_coefficient_normalization() {
        let p = crate::expr::parse_diffpoly("3*u1_1*u2_1 + 5*u2_1^2").unwrap();
        assert_eq!(quadratic_coefficient(&p, 0, 1), s("3/2"));
        assert_eq!(quadratic_coefficient(&p, 1, 0), s("3/2"));
        assert_eq!(quadratic_coefficient(&p, 1, 1), s("5"));
    }
}

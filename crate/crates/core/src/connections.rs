// SPDX-License-Identifier: Apache-2.0

//! Standard connections `Γ_(s)` of a bracket, their flat combinations `Γ_[s]`,
//! and curvature, torsion and covariant derivatives of the metric.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bracket::HomogeneousBracket;
use crate::combinat::{binomial_q, sign};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{Matrix, Tensor3};

/// `g_{ij}`, the inverse of `g^{ij}`.
pub fn lower_metric(g: &Matrix) -> Result<Matrix> {
    g.inverse()
}

/// Christoffel symbols `Γ^l_{ij}`, stored as `gamma.get(l, i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    gamma: Tensor3,
}

impl Connection {
    pub fn zero(n: usize) -> Self {
        Connection { gamma: Tensor3::zeros(n) }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize, usize) -> Scalar) -> Self {
        Connection {
            gamma: Tensor3::from_fn(n, f),
        }
    }

    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    /// `Γ^l_{ij}`.
    pub fn get(&self, l: usize, i: usize, j: usize) -> &Scalar {
        self.gamma.get(l, i, j)
    }

    pub fn symbols(&self) -> &Tensor3 {
        &self.gamma
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.is_zero()
    }

    pub fn scale(&self, q: &BigRational) -> Connection {
        let n = self.dim();
        Connection::from_fn(n, |l, i, j| self.get(l, i, j).scale(q))
    }

    /// `Σ_t w_t Γ_t`.
    pub fn combine(parts: &[(BigRational, &Connection)]) -> Connection {
        let n = parts.first().map_or(0, |(_, c)| c.dim());
        Connection::from_fn(n, |l, i, j| {
            parts
                .iter()
                .filter(|(w, _)| !w.is_zero())
                .fold(Scalar::zero(), |acc, (w, c)| &acc + &c.get(l, i, j).scale(w))
        })
    }

    /// `T^l_{ij} = Γ^l_{ij} − Γ^l_{ji}`, stored as `get(l, i, j)`.
    pub fn torsion(&self) -> Tensor3 {
        Tensor3::from_fn(self.dim(), |l, i, j| self.get(l, i, j) - self.get(l, j, i))
    }

    /// `Γ'^l_{ij} = Γ^l_{ji}`: the connection with the opposite torsion.
    pub fn flip_torsion(&self) -> Connection {
        Connection::from_fn(self.dim(), |l, i, j| self.get(l, j, i).clone())
    }

    pub fn curvature(&self) -> CurvatureTensor {
        let n = self.dim();
        let mut data = Vec::with_capacity(n * n * n * n);
        for l in 0..n {
            for t in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let mut r = &self.get(l, j, t).partial(i) - &self.get(l, i, t).partial(j);
                        for q in 0..n {
                            r = &r + &(self.get(l, i, q) * self.get(q, j, t));
                            r = &r - &(self.get(l, j, q) * self.get(q, i, t));
                        }
                        data.push(r);
                    }
                }
            }
        }
        CurvatureTensor { n, data }
    }

    pub fn is_flat(&self) -> bool {
        self.curvature().is_zero()
    }

    /// `∇_l g^{ij} = ∂_l g^{ij} + Γ^i_{lq} g^{qj} + Γ^j_{lq} g^{iq}`, stored as `get(l, i, j)`.
    pub fn nabla_upper(&self, g: &Matrix) -> Tensor3 {
        let n = self.dim();
        Tensor3::from_fn(n, |l, i, j| {
            let mut v = g.get(i, j).partial(l);
            for q in 0..n {
                v = &v + &(self.get(i, l, q) * g.get(q, j));
                v = &v + &(self.get(j, l, q) * g.get(i, q));
            }
            v
        })
    }

    /// `∇_i g_{jl} = ∂_i g_{jl} − Γ^q_{ij} g_{ql} − Γ^q_{il} g_{jq}`, stored as `get(i, j, l)`.
    pub fn nabla_lower(&self, g_lower: &Matrix) -> Tensor3 {
        let n = self.dim();
        Tensor3::from_fn(n, |i, j, l| {
            let mut v = g_lower.get(j, l).partial(i);
            for q in 0..n {
                v = &v - &(self.get(q, i, j) * g_lower.get(q, l));
                v = &v - &(self.get(q, i, l) * g_lower.get(j, q));
            }
            v
        })
    }
}

impl fmt::Display for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        let mut first = true;
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let v = self.get(l, i, j);
                    if v.is_zero() {
                        continue;
                    }
                    if !first {
                        writeln!(f)?;
                    }
                    first = false;
                    write!(f, "G^{}_{{{}{}}} = {}", l + 1, i + 1, j + 1, v)?;
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Sign relating [`CurvatureTensor::labelled`] to the stored components.
const LABEL_SIGN: i64 = 1;

/// `R^l_{t,i,j} = ∂_iΓ^l_{jt} − ∂_jΓ^l_{it} + Γ^l_{iq}Γ^q_{jt} − Γ^l_{jq}Γ^q_{it}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureTensor {
    n: usize,
    data: Vec<Scalar>,
}

impl CurvatureTensor {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `R^l_{t,i,j}`, antisymmetric in `i, j`.
    pub fn get(&self, l: usize, t: usize, i: usize, j: usize) -> &Scalar {
        let n = self.n;
        &self.data[((l * n + t) * n + i) * n + j]
    }

    /// The component written `R^l_{a,b,c}` with the antisymmetric pair first:
    /// `R^l_{a,b,c} = R^l_{c,a,b}` in the stored order.
    pub fn labelled(&self, l: usize, a: usize, b: usize, c: usize) -> Scalar {
        let v = self.get(l, c, a, b);
        if LABEL_SIGN < 0 {
            -v
        } else {
            v.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.n;
        (0..n).all(|l| {
            (0..n).all(|t| (0..n).all(|i| (0..n).all(|j| *self.get(l, t, i, j) == -self.get(l, t, j, i))))
        })
    }

    /// Nonzero components in the labelled form `(l, a, b, c, value)`.
    pub fn nonzero_labelled(&self) -> Vec<(usize, usize, usize, usize, Scalar)> {
        let n = self.n;
        let mut out = Vec::new();
        for l in 0..n {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let v = self.labelled(l, a, b, c);
                        if !v.is_zero() {
                            out.push((l, a, b, c, v));
                        }
                    }
                }
            }
        }
        out
    }
}

/// `c_s^t = (−1)^t C(k+s−t, k) C(k, t)` and its inverse, `0 <= s, t < k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMatrix {
    k: u32,
    c: Vec<Vec<BigRational>>,
    inv: Vec<Vec<BigRational>>,
}

impl CMatrix {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Precondition("degree must be at least 1".into()));
        }
        let kk = k as i64;
        let c = (0..kk)
            .map(|s| {
                (0..kk)
                    .map(|t| &sign(t) * &(&binomial_q(kk + s - t, kk) * &binomial_q(kk, t)))
                    .collect()
            })
            .collect();
        let inv = (0..kk)
            .map(|s| {
                (0..kk)
                    .map(|t| &(&sign(t) * &binomial_q(kk + 1, s - t)) / &binomial_q(kk, s))
                    .collect()
            })
            .collect();
        let m = CMatrix { k, c, inv };
        if let Some(bad) = m.invariant_failures().first() {
            return Err(Error::Precondition(format!("c-matrix invariant fails: {bad}")));
        }
        Ok(m)
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn entry(&self, s: usize, t: usize) -> &BigRational {
        &self.c[s][t]
    }

    pub fn inverse_entry(&self, s: usize, t: usize) -> &BigRational {
        &self.inv[s][t]
    }

    pub fn row(&self, s: usize) -> &[BigRational] {
        &self.c[s]
    }

    pub fn inverse_row(&self, s: usize) -> &[BigRational] {
        &self.inv[s]
    }

    /// Names of the structural invariants that do not hold; empty when all hold.
    pub fn invariant_failures(&self) -> Vec<String> {
        let k = self.k as usize;
        let mut out = Vec::new();
        for (name, m) in [("c", &self.c), ("inverse", &self.inv)] {
            if (0..k).any(|s| (s + 1..k).any(|t| !m[s][t].is_zero())) {
                out.push(format!("{name} is not lower triangular"));
            }
            for (s, row) in m.iter().enumerate() {
                let sum: BigRational = row.iter().sum();
                if !sum.is_one() {
                    out.push(format!("{name} row {s} sums to {sum}"));
                }
            }
        }
        for s in 0..k {
            for t in 0..k {
                let v: BigRational = (0..k).map(|a| &self.c[s][a] * &self.inv[a][t]).sum();
                let expect = if s == t { BigRational::one() } else { BigRational::zero() };
                if v != expect {
                    out.push(format!("product entry ({s},{t}) is {v}"));
                }
            }
        }
        out
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, row) in self.c.iter().enumerate() {
            if s > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `Γ^l_{(s)ij} = −C(k,s)^{-1} g_{ii'} h_{(s)j}^{i'l}` for `s = 0..k-1`.
pub fn standard_connections(b: &HomogeneousBracket) -> Result<Vec<Connection>> {
    let named = b.extract_named();
    let gl = lower_metric(&named.g)?;
    let n = b.dim();
    let k = b.degree() as i64;
    Ok(named
        .h
        .iter()
        .enumerate()
        .map(|(s, h)| {
            let w = -(BigRational::one() / binomial_q(k, s as i64));
            Connection::from_fn(n, |l, i, j| {
                let mut v = Scalar::zero();
                for a in 0..n {
                    v = &v + &(gl.get(i, a) * h.get(a, l, j));
                }
                v.scale(&w)
            })
        })
        .collect())
}

pub fn standard_connection(b: &HomogeneousBracket, s: u32) -> Result<Connection> {
    check_slot(b, s)?;
    Ok(standard_connections(b)?.swap_remove(s as usize))
}

/// `Γ_[s] = Σ_t c_s^t Γ_(t)` for `s = 0..k-1`.
pub fn flat_connections(b: &HomogeneousBracket) -> Result<Vec<Connection>> {
    let std = standard_connections(b)?;
    let cm = CMatrix::new(b.degree())?;
    Ok((0..std.len())
        .map(|s| {
            let parts: Vec<(BigRational, &Connection)> = cm.row(s).iter().cloned().zip(std.iter()).collect();
            Connection::combine(&parts)
        })
        .collect())
}

pub fn flat_combination(b: &HomogeneousBracket, s: u32) -> Result<Connection> {
    check_slot(b, s)?;
    Ok(flat_connections(b)?.swap_remove(s as usize))
}

fn check_slot(b: &HomogeneousBracket, s: u32) -> Result<()> {
    if s >= b.degree() {
        return Err(Error::IndexOutOfRange {
            what: "connection index",
            index: s as usize,
            bound: b.degree() as usize,
        });
    }
    Ok(())
}

/// Dimension of the affine span of the standard connections.
pub fn genericity(b: &HomogeneousBracket) -> Result<usize> {
    let std = standard_connections(b)?;
    let rows: Vec<Vec<Scalar>> = std[1..]
        .iter()
        .map(|c| c.symbols().sub(std[0].symbols()).entries().to_vec())
        .collect();
    Ok(rank(rows))
}

/// Rank over the field of rational functions.
pub fn rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip().expect("pivot is nonzero");
        let pivot: Vec<Scalar> = rows[r].iter().map(|v| v * &inv).collect();
        for row in rows.iter_mut().skip(r + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x = &*x - &(&f * p);
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

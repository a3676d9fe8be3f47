// SPDX-License-Identifier: Apache-2.0

//! Check suites shared by the command line, the C ABI and the tests.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bracket::{CoordinateMap, HomogeneousBracket};
use crate::connections::{flat_combination, flat_connections, genericity, standard_connection, CMatrix, Connection};
use crate::diffpoly::DiffPoly;
use crate::error::{Error, Result};
use crate::jacobi::jacobi_defects;
use crate::lowdegree::{dn_check, ferguson_check, k4_connection_fixtures, potemin_check, potemin_connections};
use crate::report::{timed, Check};
use crate::spectral::{include_b, project_b, random_monomial, spanning_set, BRing, Spectral};
use crate::tensor::{Matrix, Tensor3};

/// Which connection family a curvature query refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `Γ_(s)`.
    Standard,
    /// `Γ_[s]`.
    Flat,
}

impl Family {
    pub fn label(self, s: u32) -> String {
        match self {
            Family::Standard => format!("G({s})"),
            Family::Flat => format!("G[{s}]"),
        }
    }
}

/// Spot-check sizes for [`spectral`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectralOptions {
    pub seed: u64,
    pub max_degu: u32,
    pub samples: usize,
    pub max_theta: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            seed: 0,
            max_degu: 3,
            samples: 100,
            max_theta: 3,
        }
    }
}

fn first<T: ToString>(items: &[T]) -> Option<String> {
    items.first().map(ToString::to_string)
}

fn lines(text: impl ToString) -> Vec<String> {
    text.to_string().lines().map(str::to_owned).collect()
}

/// Homogeneity, skewness and the linear-in-jets skewness relations.
pub fn validate(b: &HomogeneousBracket) -> Vec<Check> {
    let violations = b.validate();
    let mut out = vec![Check::from_witness("homogeneous", first(&violations))];
    if !violations.is_empty() {
        out.push(Check::skip("skew", "entries are not homogeneous"));
        out.push(Check::skip("skew (linear terms)", "entries are not homogeneous"));
        return out;
    }
    out.push(timed(|| Check::from_witness("skew", first(&b.skew_defects()))));
    out.push(Check::from_witness("skew (linear terms)", first(&b.check_skewh())));
    out
}

/// Skewness and `D_P² = 0` on the generators.
pub fn jacobi(b: &HomogeneousBracket) -> Vec<Check> {
    let mut out = validate(b);
    if !out.iter().all(Check::passed) {
        out.push(Check::skip("jacobi", "bracket is not a valid skew bracket"));
        return out;
    }
    out.push(timed(|| match jacobi_defects(b) {
        Ok(d) => Check::from_witness("jacobi", first(&d)),
        Err(e) => Check::fail("jacobi", e.to_string()),
    }));
    out
}

fn is_poisson(b: &HomogeneousBracket) -> bool {
    b.validate().is_empty() && b.check_skew() && jacobi_defects(b).map(|d| d.is_empty()).unwrap_or(false)
}

/// The c-matrix, every `Γ_(s)` and every `Γ_[s]`, printed as details.
pub fn connections(b: &HomogeneousBracket) -> Result<Vec<Check>> {
    b.ensure_valid()?;
    let k = b.degree();
    let c = CMatrix::new(k)?;
    let mut out = vec![Check::from_witness("c-matrix", c.invariant_failures().first().cloned()).with_details(lines(&c))];
    for s in 0..k {
        let g = standard_connection(b, s)?;
        out.push(Check::pass(Family::Standard.label(s)).with_details(lines(&g)));
    }
    for (s, g) in flat_connections(b)?.iter().enumerate() {
        out.push(Check::pass(Family::Flat.label(s as u32)).with_details(lines(g)));
    }
    Ok(out)
}

fn connection(b: &HomogeneousBracket, which: Family, s: u32) -> Result<Connection> {
    if s >= b.degree() {
        return Err(Error::Precondition(format!(
            "connection index {s} out of range 0..={}",
            b.degree() - 1
        )));
    }
    match which {
        Family::Standard => standard_connection(b, s),
        Family::Flat => flat_combination(b, s),
    }
}

fn curvature_lines(c: &Connection) -> Vec<String> {
    let r = c.curvature();
    let comps = r.nonzero_labelled();
    if comps.is_empty() {
        return vec!["R = 0".to_owned()];
    }
    comps
        .iter()
        .map(|(l, a, b, c, v)| format!("R^{}_{{{},{},{}}} = {}", l + 1, a + 1, b + 1, c + 1, v))
        .collect()
}

fn flatness_check(label: &str, c: &Connection) -> Check {
    timed(|| {
        let r = c.curvature();
        let comps = r.nonzero_labelled();
        let witness = comps
            .first()
            .map(|(l, a, b, cc, v)| format!("R^{}_{{{},{},{}}} = {}", l + 1, a + 1, b + 1, cc + 1, v));
        Check::from_witness(format!("{label} flat"), witness)
    })
}

/// Curvature of one connection. `Γ_[s]` and `Γ_(0)` are expected flat; other
/// standard connections are reported without a pass criterion.
pub fn curvature(b: &HomogeneousBracket, which: Family, s: u32) -> Result<Vec<Check>> {
    b.ensure_valid()?;
    let c = connection(b, which, s)?;
    let label = which.label(s);
    let r = c.curvature();
    let mut out = vec![Check::from_witness(
        format!("R({label}) antisymmetric"),
        (!r.is_antisymmetric()).then(|| "R^l_{t,i,j} + R^l_{t,j,i} != 0".to_owned()),
    )];
    if which == Family::Flat || s == 0 {
        out.push(flatness_check(&label, &c).with_details(curvature_lines(&c)));
    } else {
        out.push(Check::pass(format!("R({label})")).with_details(curvature_lines(&c)));
    }
    Ok(out)
}

/// Skewness, Jacobi, flatness of every `Γ_[s]`, the properties of `Γ_(0)`,
/// curvature of the other standard connections and genericity.
pub fn flatness(b: &HomogeneousBracket) -> Result<Vec<Check>> {
    let mut out = jacobi(b);
    if !out.iter().all(Check::passed) {
        return Ok(out);
    }
    for (s, c) in flat_connections(b)?.iter().enumerate() {
        out.push(flatness_check(&Family::Flat.label(s as u32), c));
    }
    let g0 = standard_connection(b, 0)?;
    out.push(Check::from_witness(
        "G(0) torsion-free",
        g0.torsion()
            .first_nonzero()
            .map(|((l, i, j), v)| format!("T^{}_{{{}{}}} = {}", l + 1, i + 1, j + 1, v)),
    ));
    out.push(flatness_check("G(0)", &g0));
    for s in 1..b.degree() {
        let c = standard_connection(b, s)?;
        out.push(Check::pass(format!("R(G({s}))")).with_details(curvature_lines(&c)));
    }
    let span = genericity(b)?;
    out.push(Check::pass("genericity").with_details(vec![format!(
        "affine span of standard connections has dimension {span} (generic: {})",
        b.degree() - 1
    )]));
    Ok(out)
}

fn first_difference(a: &HomogeneousBracket, b: &HomogeneousBracket) -> Option<String> {
    for s in 0..=a.degree() {
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                if a.get(s, i, j) != b.get(s, i, j) {
                    return Some(format!("P_{s}^{{{}{}}}: {} vs {}", i + 1, j + 1, a.get(s, i, j), b.get(s, i, j)));
                }
            }
        }
    }
    None
}

fn bracket_lines(b: &HomogeneousBracket) -> Vec<String> {
    let mut out = Vec::new();
    for s in (0..=b.degree()).rev() {
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                let p = b.get(s, i, j);
                if !p.is_zero() {
                    out.push(format!("P_{s}^{{{}{}}} = {}", i + 1, j + 1, p));
                }
            }
        }
    }
    out
}

fn preserved(name: String, before: bool, after: bool) -> Check {
    Check::from_witness(name, (before != after).then(|| format!("before {before}, after {after}")))
}

/// Transform by `map`, transform back, and compare the structural properties.
pub fn transform(b: &HomogeneousBracket, map: &CoordinateMap) -> Result<Vec<Check>> {
    b.ensure_valid()?;
    if map.dim() != b.dim() {
        return Err(Error::Precondition(format!(
            "map has {} components, bracket has dimension {}",
            map.dim(),
            b.dim()
        )));
    }
    let t = b.transform(map)?;
    let back = t.transform(&map.inverse())?;
    let mut out = vec![
        Check::pass("transformed bracket").with_details(bracket_lines(&t)),
        Check::from_witness("round trip", first_difference(b, &back)),
        Check::from_witness("transformed homogeneous", first(&t.validate())),
    ];
    let (sb, st) = (b.check_skew(), t.check_skew());
    out.push(preserved("skew preserved".into(), sb, st));
    if sb && st {
        let (pb, pt) = (is_poisson(b), is_poisson(&t));
        out.push(timed(|| preserved("jacobi preserved".into(), pb, pt)));
        if pb && pt {
            let (fb, ft) = (flat_connections(b)?, flat_connections(&t)?);
            for (s, (x, y)) in fb.iter().zip(&ft).enumerate() {
                out.push(timed(|| {
                    preserved(format!("{} flatness preserved", Family::Flat.label(s as u32)), x.is_flat(), y.is_flat())
                }));
            }
        }
    }
    Ok(out)
}

/// Input data of a bracket in Potëmin form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoteminData {
    pub g: Matrix,
    /// `c.get(i, j, l)` is `c^{ij}_l`.
    pub c: Tensor3,
}

/// Degree-specific conditions: degree 1, degree 2, Potëmin data at degree 3, closed forms at degree 4.
pub fn lowdegree(b: &HomogeneousBracket, potemin: Option<&PoteminData>) -> Result<Vec<Check>> {
    b.ensure_valid()?;
    match b.degree() {
        1 => dn_check(b),
        2 => {
            let mut out = ferguson_check(b)?;
            if out[..4].iter().all(Check::passed) {
                out.push(flatness_check("G[1]", &flat_combination(b, 1)?));
            } else {
                out.push(Check::skip("G[1] flat", "conditions (a)-(d) do not hold"));
            }
            Ok(out)
        }
        3 => match potemin {
            Some(p) => {
                let mut out = potemin_check(&p.g, &p.c)?;
                out.extend(potemin_connections(&p.g, &p.c)?);
                Ok(out)
            }
            None => Ok(vec![Check::skip("potemin", "document does not use the potemin construction")]),
        },
        4 => k4_connection_fixtures(b),
        k => Ok(vec![Check::skip("lowdegree", format!("no low-degree conditions for degree {k}"))]),
    }
}

fn mismatch(x: &BRing, lhs: &BRing, rhs: &BRing) -> Option<String> {
    (lhs != rhs).then(|| {
        let diff = &include_b(lhs) - &include_b(rhs);
        format!("at {}: difference {}", include_b(x), diff)
    })
}

fn first_mismatch(set: &[BRing], mut f: impl FnMut(&BRing) -> Result<Option<String>>) -> Result<Option<String>> {
    for x in set {
        if let Some(w) = f(x)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// `d_1` two ways on the spanning set, the graded identities of its split,
/// the connection form of its raising part, and the homotopy identity on random monomials.
pub fn spectral(b: &HomogeneousBracket, opts: &SpectralOptions) -> Result<Vec<Check>> {
    b.ensure_valid()?;
    if !is_poisson(b) {
        return Ok(vec![Check::skip("spectral", "bracket is not Poisson")]);
    }
    let sp = Spectral::new(b)?;
    let (n, k) = (b.dim(), b.degree());
    let set = spanning_set(n, k, opts.max_theta);
    let size = format!("{} spanning elements", set.len());
    let mut out = Vec::new();

    let mut run = |name: &str, f: &mut dyn FnMut(&BRing) -> Result<Option<String>>| -> Result<()> {
        let start = std::time::Instant::now();
        let w = first_mismatch(&set, f)?;
        let mut c = Check::from_witness(name, w).with_details(vec![size.clone()]);
        c.elapsed_ms = start.elapsed().as_millis() as u64;
        out.push(c);
        Ok(())
    };
    run("d1 spectral = closed form", &mut |x| Ok(mismatch(x, &sp.d1_spectral(x), &sp.d1_closed(x))))?;
    run("d1 raising part = connection form", &mut |x| {
        Ok(mismatch(x, &sp.d1_split(x)?.0, &sp.d1_as_connection(x)))
    })?;
    let zero = BRing::new(DiffPoly::zero(), k)?;
    run("d1(1)^2 = 0", &mut |x| {
        let (up, _) = sp.d1_split(x)?;
        Ok(mismatch(x, &sp.d1_split(&up)?.0, &zero))
    })?;
    run("d1(1) d1(0) + d1(0) d1(1) = 0", &mut |x| {
        let (up, same) = sp.d1_split(x)?;
        let a = include_b(&sp.d1_split(&up)?.1);
        let c = include_b(&sp.d1_split(&same)?.0);
        Ok(mismatch(x, &project_b(&(&a + &c), k), &zero))
    })?;
    run("d1(0)^2 = 0", &mut |x| {
        let (_, same) = sp.d1_split(x)?;
        Ok(mismatch(x, &sp.d1_split(&same)?.1, &zero))
    })?;

    out.push(timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut witness = None;
        for _ in 0..opts.samples {
            let a = random_monomial(&mut rng, n, k, opts.max_degu);
            let lhs = &sp.d_minus1(&sp.homotopy(&a)) + &sp.homotopy(&sp.d_minus1(&a));
            let rhs = &a - &include_b(&project_b(&a, k));
            if lhs != rhs {
                witness = Some(format!("at {a}: difference {}", &lhs - &rhs));
                break;
            }
        }
        Check::from_witness("homotopy identity", witness).with_details(vec![format!(
            "{} random monomials, seed {}, deg_u <= {}",
            opts.samples, opts.seed, opts.max_degu
        )])
    }));
    out.push(timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(1));
        let witness = (0..opts.samples).find_map(|_| {
            let a = random_monomial(&mut rng, n, k, opts.max_degu);
            let sq = sp.d_minus1(&sp.d_minus1(&a));
            (!sq.is_zero()).then(|| format!("at {a}: {sq}"))
        });
        Check::from_witness("D(-1)^2 = 0", witness)
    }));
    Ok(out)
}

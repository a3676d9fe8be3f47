// SPDX-License-Identifier: Apache-2.0

//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dnflat::connections::{flat_connections, standard_connection};
use dnflat::document::BracketDocument;
use dnflat::jacobi::{check_jacobi, jacobi_defects, PoissonDifferential};
use dnflat::lowdegree::{dn_check, ferguson_check, potemin_build, potemin_check, potemin_connections};
use dnflat::spectral::{spanning_set, Spectral};
use dnflat::suite::{self, SpectralOptions};
use dnflat::{fixtures, CMatrix, Check, Error, HomogeneousBracket, Scalar, Tensor3};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(label: &str, checks: &[Check]) -> Result<(), String> {
    match checks.iter().find(|c| !c.passed()) {
        None => Ok(()),
        Some(c) => Err(format!("{label}: {} failed ({})", c.name, c.witness.clone().unwrap_or_default())),
    }
}

fn s(text: &str) -> Scalar {
    Scalar::parse(text).expect("expression parses")
}

fn is_poisson(b: &HomogeneousBracket) -> bool {
    b.check_skew() && check_jacobi(b).unwrap_or(false)
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

/// Curvature of the degree-3 example: flat combinations vanish, the standard
/// connections match the listed components and vanish elsewhere.
fn degree_three_example() -> Outcome {
    let loaded = BracketDocument::load(&data("nonflat_k3.json")).map_err(|e| e.to_string())?;
    let b = loaded.bracket;
    ensure(b == fixtures::rational_k3(), || "document differs from fixture".into())?;
    for (s, c) in flat_connections(&b).map_err(|e| e.to_string())?.iter().enumerate() {
        ensure(c.curvature().is_zero(), || format!("G[{s}] is curved"))?;
    }
    // (connection, l, a, b, c, value) with 1-based indices
    let listed: [(u32, usize, usize, usize, usize, &str); 10] = [
        (1, 2, 2, 1, 1, "4/(9*u1^2)"),
        (1, 2, 1, 2, 1, "-4/(9*u1^2)"),
        (2, 1, 1, 2, 1, "8*u2/(9*u1)"),
        (2, 1, 2, 1, 1, "-8*u2/(9*u1)"),
        (2, 2, 2, 1, 2, "8*u2/(9*u1)"),
        (2, 2, 1, 2, 2, "-8*u2/(9*u1)"),
        (2, 2, 1, 2, 1, "4*(2*u2^2 - 3)/(9*u1^2)"),
        (2, 2, 2, 1, 1, "-4*(2*u2^2 - 3)/(9*u1^2)"),
        (2, 1, 2, 1, 2, "8/9"),
        (2, 1, 1, 2, 2, "-8/9"),
    ];
    for conn in [1u32, 2] {
        let r = standard_connection(&b, conn).map_err(|e| e.to_string())?.curvature();
        ensure(!r.is_zero(), || format!("G({conn}) is flat"))?;
        let nonzero = r.nonzero_labelled();
        let expected: Vec<_> = listed.iter().filter(|x| x.0 == conn).collect();
        ensure(nonzero.len() == expected.len(), || {
            format!("G({conn}) has {} nonzero components, {} listed", nonzero.len(), expected.len())
        })?;
        for &&(_, l, a, bb, c, v) in &expected {
            let got = r.labelled(l - 1, a - 1, bb - 1, c - 1);
            ensure(got == s(v), || format!("R({conn})^{l}_{{{a},{bb},{c}}} = {got}, listed {v}"))?;
        }
    }
    Ok("G[0..2] flat; 10 listed components of G(1), G(2) match, others vanish".into())
}

fn jacobi_machinery() -> Outcome {
    let b = fixtures::rational_k3();
    ensure(matches!(check_jacobi(&b), Ok(true)), || "example fails Jacobi".into())?;

    let single = BracketDocument::load(&data("nonflat_k3_perturbed.json")).map_err(|e| e.to_string())?;
    ensure(single.bracket == fixtures::rational_k3_single_entry_perturbation(), || {
        "perturbed document differs from fixture".into()
    })?;
    let report = suite::jacobi(&single.bracket);
    let fail = report.iter().find(|c| !c.passed()).ok_or("single-entry perturbation passes")?;
    let witness = fail.witness.clone().unwrap_or_default();
    ensure(!witness.is_empty() && !witness.ends_with(": 0"), || "empty witness".into())?;
    ensure(matches!(check_jacobi(&single.bracket), Err(Error::NotSkew)), || {
        "single-entry perturbation not rejected".into()
    })?;

    let skew = fixtures::rational_k3_skew_perturbation();
    ensure(skew.check_skew(), || "skew perturbation is not skew".into())?;
    let defects = jacobi_defects(&skew).map_err(|e| e.to_string())?;
    ensure(defects.iter().any(|d| !d.value.is_zero()), || "skew perturbation passes Jacobi".into())?;

    for k in 1..=5u32 {
        let eta = fixtures::constant_eta(k);
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let parity = (0..2).all(|i| (0..2).all(|j| *eta.get(j, i) == eta.get(i, j).scale(&BigRational::from_integer(sign.into()))));
        ensure(parity, || format!("eta has the wrong parity for k = {k}"))?;
        let c = fixtures::constant(k);
        ensure(is_poisson(&c), || format!("constant bracket k = {k} fails"))?;
    }
    Ok(format!(
        "example passes; single entry fails with witness `{witness}`; skew-preserving change fails on {} generators; constants k = 1..5 pass",
        defects.iter().filter(|d| !d.value.is_zero()).count()
    ))
}

fn c_matrix_suite() -> Outcome {
    let q = |n: i64| BigRational::from_integer(n.into());
    for k in 1..=8u32 {
        let c = CMatrix::new(k).map_err(|e| e.to_string())?;
        if let Some(f) = c.invariant_failures().first() {
            return Err(format!("k = {k}: {f}"));
        }
        let ki = k as i64;
        let rows: Vec<Vec<BigRational>> = vec![
            vec![q(1)],
            vec![q(ki + 1), q(-ki)],
            vec![q((ki + 2) * (ki + 1) / 2), q(-ki * (ki + 1)), q(ki * (ki - 1) / 2)],
        ];
        for (sidx, row) in rows.iter().enumerate().take(k as usize) {
            ensure(&c.row(sidx)[..=sidx] == row.as_slice(), || format!("k = {k}: row {sidx} is {:?}", c.row(sidx)))?;
        }
    }
    let c4 = CMatrix::new(4).map_err(|e| e.to_string())?;
    ensure(c4.row(3) == [q(35), q(-60), q(30), q(-4)], || format!("k = 4 row 3 is {:?}", c4.row(3)))?;
    Ok("k = 1..8 triangular, unit row sums, inverse; displayed rows agree".into())
}

fn spectral_oracles() -> Outcome {
    let opts = SpectralOptions::default();
    let mut sizes = Vec::new();
    for (name, b) in [("degree 3", fixtures::rational_k3()), ("canonical degree 2", fixtures::canonical_k2_linear(false))] {
        let checks = suite::spectral(&b, &opts).map_err(|e| e.to_string())?;
        ensure(checks.iter().all(|c| c.status == dnflat::Status::Pass), || {
            format!("{name}: {:?}", checks.iter().find(|c| c.status != dnflat::Status::Pass))
        })?;
        sizes.push(spanning_set(b.dim(), b.degree(), opts.max_theta).len());
    }
    Ok(format!(
        "d1 two ways and graded identities on {} + {} spanning elements; homotopy on {} monomials",
        sizes[0], sizes[1], opts.samples
    ))
}

fn connection_form() -> Outcome {
    let mut count = 0;
    for b in [fixtures::rational_k3(), fixtures::canonical_k2_linear(false), fixtures::constant(4)] {
        let sp = Spectral::new(&b).map_err(|e| e.to_string())?;
        for x in spanning_set(b.dim(), b.degree(), 3) {
            let (raise, _) = sp.d1_split(&x).map_err(|e| e.to_string())?;
            let conn = sp.d1_as_connection(&x);
            ensure(raise == conn, || format!("mismatch at {}", x.as_diffpoly()))?;
            count += 1;
        }
    }
    Ok(format!("{count} spanning elements across degrees 2, 3, 4"))
}

fn low_degree() -> Outcome {
    let agrees = |label: &str, checks: &[Check], b: &HomogeneousBracket| -> Result<bool, String> {
        let conds = checks.iter().all(Check::passed);
        let poisson = is_poisson(b);
        ensure(conds == poisson, || format!("{label}: conditions {conds}, skew and Jacobi {poisson}"))?;
        Ok(poisson)
    };
    let mut seen = Vec::new();
    for (label, b) in [("k=1", fixtures::levi_civita_k1()), ("k=1 perturbed", fixtures::levi_civita_k1_perturbed())] {
        seen.push(agrees(label, &dn_check(&b).map_err(|e| e.to_string())?, &b)?);
    }
    ensure(seen == [true, false], || format!("degree-1 family not discriminating: {seen:?}"))?;

    let sheared = fixtures::canonical_k2_linear(false)
        .transform(&fixtures::shear_map4())
        .map_err(|e| e.to_string())?;
    let mut seen = Vec::new();
    for (label, b) in [
        ("k=2", fixtures::canonical_k2_linear(false)),
        ("k=2 perturbed", fixtures::canonical_k2_linear(true)),
        ("k=2 sheared", sheared),
        ("k=2 constant", fixtures::constant(2)),
    ] {
        let checks = ferguson_check(&b).map_err(|e| e.to_string())?;
        seen.push(agrees(label, &checks, &b)?);
        if checks[..4].iter().all(Check::passed) {
            let flat = flat_connections(&b).map_err(|e| e.to_string())?;
            ensure(flat[1].is_flat(), || format!("{label}: (a)-(d) hold but G[1] is curved"))?;
        }
        if label == "k=2 perturbed" {
            ensure(!checks[2].passed(), || "perturbation does not break (c)".into())?;
        }
    }
    ensure(seen == [true, false, true, true], || format!("degree-2 family not discriminating: {seen:?}"))?;

    let (g, c) = fixtures::rational_k3_data();
    all_pass("potemin", &potemin_check(&g, &c).map_err(|e| e.to_string())?)?;
    ensure(is_poisson(&potemin_build(&g, &c).map_err(|e| e.to_string())?), || "built bracket fails".into())?;
    all_pass("potemin connections", &potemin_connections(&g, &c).map_err(|e| e.to_string())?)?;
    let c_zeroed = Tensor3::from_fn(2, |i, j, l| if l == 1 { Scalar::zero() } else { c.get(i, j, l).clone() });
    let broken = potemin_check(&g, &c_zeroed).map_err(|e| e.to_string())?;
    ensure(broken.iter().any(|x| !x.passed()), || "zeroed c_2 still passes".into())?;
    Ok("degree 1, 2 equivalences on 6 brackets; Potemin data implies Jacobi; G[1], G[2] identities hold".into())
}

fn doyle() -> Outcome {
    let mut set: Vec<(String, HomogeneousBracket)> = vec![
        ("degree 3 example".into(), fixtures::rational_k3()),
        ("degree 1 Levi-Civita".into(), fixtures::levi_civita_k1()),
        ("canonical degree 2".into(), fixtures::canonical_k2_linear(false)),
    ];
    for k in 1..=5 {
        set.push((format!("constant k = {k}"), fixtures::constant(k)));
    }
    let t = |b: &HomogeneousBracket, m| b.transform(m).map_err(|e: Error| e.to_string());
    let (projective, product, shear) = (fixtures::rational_map(), fixtures::product_map(), fixtures::shear_map4());
    set.push(("projective image".into(), t(&fixtures::rational_k3(), &projective)?));
    set.push(("product image".into(), t(&fixtures::rational_k3(), &product)?));
    set.push(("sheared canonical".into(), t(&fixtures::canonical_k2_linear(false), &shear)?));
    for k in [3, 4] {
        set.push((format!("projective constant k = {k}"), t(&fixtures::constant(k), &projective)?));
    }
    for (name, b) in &set {
        ensure(is_poisson(b), || format!("{name} is not Poisson"))?;
        let g0 = standard_connection(b, 0).map_err(|e| e.to_string())?;
        ensure(g0.torsion().is_zero(), || format!("{name}: G(0) has torsion"))?;
        ensure(g0.is_flat(), || format!("{name}: G(0) is curved"))?;
    }
    Ok(format!("G(0) torsion-free and flat on {} Poisson brackets", set.len()))
}

fn transform_invariance() -> Outcome {
    let b = fixtures::rational_k3();
    for (name, m) in [("projective", fixtures::rational_map()), ("product", fixtures::product_map())] {
        all_pass(name, &suite::transform(&b, &m).map_err(|e| e.to_string())?)?;
        let t = b.transform(&m).map_err(|e| e.to_string())?;
        ensure(t != b, || format!("{name} map acts trivially"))?;
        ensure(is_poisson(&t), || format!("{name}: image is not Poisson"))?;
        let flat = flat_connections(&t).map_err(|e| e.to_string())?;
        ensure(flat.iter().all(|c| c.is_flat()), || format!("{name}: a flat combination is curved"))?;
        let back = t.transform(&m.inverse()).map_err(|e| e.to_string())?;
        ensure(back == b, || format!("{name}: round trip differs"))?;
    }
    Ok("projective and product maps: skew, Jacobi, flatness preserved; round trip exact".into())
}

fn algebra_properties() -> Outcome {
    const CASES: usize = 500;
    let seed: u64 = std::env::var("DNFLAT_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dp = PoissonDifferential::new(&fixtures::rational_k3());
    for case in 0..CASES {
        let a = common::random_monomial2(&mut rng, 3, 2);
        let b = common::random_poly(&mut rng, 3, 2, 2);
        let failure = common::dx_leibniz(&a, &b)
            .or_else(|| common::odd_leibniz(&dp, &a, &b))
            .or_else(|| common::commutes_with_dx(&dp, &a))
            .or_else(|| common::variational_kills_total_derivative(&b, 2))
            .or_else(|| common::projection_laws(&b, 3));
        if let Some(w) = failure {
            return Err(format!("case {case} (seed {seed}): {w}"));
        }
    }
    Ok(format!("{CASES} cases, seed {seed}"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, Option<u64>, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("degree-three curvature example", Some(10), degree_three_example),
        ("Jacobi machinery", Some(30), jacobi_machinery),
        ("c-matrix suite", Some(1), c_matrix_suite),
        ("spectral oracle pair", Some(120), spectral_oracles),
        ("d1 as connection", Some(60), connection_form),
        ("low-degree equivalences", Some(120), low_degree),
        ("Doyle property", None, doyle),
        ("transform invariance", Some(120), transform_invariance),
        ("algebra property suite", None, algebra_properties),
    ];
    let mut failed = 0;
    for (idx, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = f();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(secs)) = (&outcome, limit) {
            if elapsed > Duration::from_secs(*secs) {
                outcome = Err(format!("took {elapsed:?}, limit {secs} s"));
            }
        }
        let ms = elapsed.as_millis();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({ms} ms): {detail}", idx + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({ms} ms): {why}", idx + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all {} criteria pass", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria fail", criteria.len());
        ExitCode::FAILURE
    }
}

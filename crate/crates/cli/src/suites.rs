//! Seeded verification suites behind `verify --suite`.

use std::f64::consts::PI;

use serde::Serialize;

use phillips_core::csym::{similarity_residual, similarity_witness, solve_stable_c, verify_csymmetry};
use phillips_core::extensions::{eigenvector_candidate, j_unitarity_defect, k_matrix, Extension, KParams};
use phillips_core::krein::{canonical_projectors, transition_to_c};
use phillips_core::linalg::{c64, max_abs, min_hermitian_eigenvalue, op_norm, CMat, IM};
use phillips_core::phillips::FiberSymmetry;
use phillips_core::random;
use phillips_core::triplet::{characteristic, green_residual, weyl, Triplet};
use phillips_core::{Error, Result, Tolerances};

use crate::report::{SAMPLE_MU, TOOL_VERSION};

pub const SUITES: [&str; 8] = ["green", "theta", "weyl", "junitary", "csym", "similarity", "eigen", "krein"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Bound {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub passed: bool,
}

impl Case {
    fn upper(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Case { name: name.into(), value, tolerance, bound: Bound::Upper, passed: value <= tolerance }
    }

    fn lower(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Case { name: name.into(), value, tolerance, bound: Bound::Lower, passed: value > tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: Vec<Case>,
    /// Largest value among upper-bounded cases.
    pub max_residual: f64,
    pub passed: bool,
    pub tolerance_config: Tolerances,
    pub tool_version: &'static str,
}

fn setup() -> Result<(FiberSymmetry, Triplet)> {
    let fs = FiberSymmetry::sigma3();
    let t = Triplet::canonical(&fs)?;
    Ok((fs, t))
}

const ZETAS: [f64; 7] = [-3.0, -1.0, -0.3, 0.0, 0.3, 1.0, 3.0];
const ANGLES: [f64; 5] = [0.0, PI / 3.0, PI / 2.0, 1.1 * PI, 1.9 * PI];

fn grid() -> Result<Vec<KParams>> {
    let mut out = Vec::with_capacity(ZETAS.len() * ANGLES.len().pow(3));
    for &z in &ZETAS {
        for &p in &ANGLES {
            for &w in &ANGLES {
                for &x in &ANGLES {
                    out.push(KParams::new(z, p, w, x)?);
                }
            }
        }
    }
    Ok(out)
}

fn label(p: &KParams) -> String {
    format!("zeta={:.3} phi={:.3} omega={:.3} xi={:.3}", p.zeta, p.phi, p.omega, p.xi)
}

fn green(seed: u64, tol: &Tolerances) -> Result<Vec<Case>> {
    let (_, t) = setup()?;
    let mut rng = random::rng(seed);
    Ok((0..200)
        .map(|k| {
            let psi = random::domain_vector(&mut rng, 2);
            let phi = random::domain_vector(&mut rng, 2);
            Case::upper(format!("pair {k}"), green_residual(&psi, &phi, &t), tol.green)
        })
        .collect())
}

fn mu_grid() -> impl Iterator<Item = phillips_core::linalg::C64> {
    (0..10).flat_map(|a| (1..=10).map(move |b| c64(-5.0 + 10.0 * a as f64 / 9.0, 0.5 * b as f64)))
}

fn theta(tol: &Tolerances) -> Result<Vec<Case>> {
    let (_, t) = setup()?;
    mu_grid()
        .map(|mu| Ok(Case::upper(format!("mu={mu}"), op_norm(&characteristic(mu, &t)?), tol.theta)))
        .collect()
}

fn weyl_suite(tol: &Tolerances) -> Result<Vec<Case>> {
    let (_, t) = setup()?;
    let i2 = CMat::identity(2, 2) * IM;
    mu_grid()
        .map(|mu| Ok(Case::upper(format!("mu={mu}"), max_abs((weyl(mu, &t)? - &i2).iter()), tol.weyl)))
        .collect()
}

fn junitary(tol: &Tolerances) -> Result<Vec<Case>> {
    grid()?
        .iter()
        .map(|p| Ok(Case::upper(label(p), j_unitarity_defect(&k_matrix(p))?, tol.j_unitary)))
        .collect()
}

fn csym(seed: u64, tol: &Tolerances) -> Result<Vec<Case>> {
    let (fs, t) = setup()?;
    let mut cases = Vec::new();
    for (i, p) in grid()?.iter().enumerate() {
        let ext = Extension::regular(*p, &t, tol)?;
        let sol = solve_stable_c(p, &t);
        let r = verify_csymmetry(&ext, &sol, &fs, tol, seed.wrapping_add(i as u64), 4)?;
        let l = label(p);
        cases.push(Case::upper(format!("{l} cSquare"), r.c_square, tol.c_square));
        cases.push(Case::lower(format!("{l} jcPositivity"), r.jc_positivity, tol.positivity));
        cases.push(Case::upper(format!("{l} cmEqualsM"), r.cm_equals_m, tol.cm_equals_m));
        cases.push(Case::upper(format!("{l} commutatorA"), r.commutator_a, tol.commutator_a));
        cases.push(Case::upper(format!("{l} commutatorS"), r.commutator_s, tol.commutator_s));
        cases.push(Case::upper(format!("{l} intertwine"), r.intertwine, tol.intertwine));
    }
    Ok(cases)
}

fn similarity(seed: u64, tol: &Tolerances) -> Result<Vec<Case>> {
    let (fs, t) = setup()?;
    let mut rng = random::rng(seed);
    let mut cases = Vec::new();
    for i in 0..10u64 {
        let (a, b) = (random::complex(&mut rng), random::complex(&mut rng));
        let p = KParams::new(3.0 * a.re.tanh(), a.arg(), b.arg(), (a * b).arg())?;
        let ext = Extension::regular(p, &t, tol)?;
        let sol = solve_stable_c(&p, &t);
        let w = similarity_witness(&sol, &fs, &t, tol)?;
        cases.push(Case::upper(label(&p), similarity_residual(&ext, &w, seed.wrapping_add(i), 20), tol.similarity));
    }
    Ok(cases)
}

fn eigen(tol: &Tolerances) -> Result<Vec<Case>> {
    let (_, t) = setup()?;
    let mut cases = Vec::new();
    for a in 0..5 {
        for b in 0..5 {
            let (k1, k2) = (2.0 * PI * a as f64 / 5.0, 2.0 * PI * b as f64 / 5.0);
            let ext = Extension::degenerate(k1, k2, &t)?;
            for &(re, im) in &SAMPLE_MU {
                let r = eigenvector_candidate(&ext, c64(re, im), tol)?.map_or(f64::INFINITY, |(_, r)| r);
                cases.push(Case::upper(format!("k1={k1:.3} k2={k2:.3} mu={re}{im:+}i"), r, tol.eigen));
            }
        }
    }
    Ok(cases)
}

fn krein(seed: u64, tol: &Tolerances) -> Result<Vec<Case>> {
    let mut rng = random::rng(seed);
    let mut cases = Vec::new();
    for (p, m) in [(1, 1), (2, 2)] {
        let sp = random::diagonal_space(p, m);
        let n = sp.dim();
        let id = CMat::identity(n, n);
        for k in 0..50 {
            let tr = random::transition(&mut rng, &sp, tol)?;
            let c = transition_to_c(&tr, &sp)?;
            let (lp, lm) = canonical_projectors(&tr, &sp)?;
            let proj = [
                op_norm(&(&lp * &lp - &lp)),
                op_norm(&(&lm * &lm - &lm)),
                op_norm(&(&lp + &lm - &id)),
                op_norm(&(&c - (&lp - &lm))),
            ]
            .into_iter()
            .fold(0.0, f64::max);
            cases.push(Case::upper(format!("dim {n} #{k} cSquare"), op_norm(&(&c * &c - &id)), tol.transition));
            cases.push(Case::lower(format!("dim {n} #{k} jcPositivity"), min_hermitian_eigenvalue(&(sp.j() * &c)), tol.positivity));
            cases.push(Case::upper(format!("dim {n} #{k} projectors"), proj, tol.transition));
        }
    }
    Ok(cases)
}

pub fn run(name: &str, seed: u64, tol: &Tolerances) -> Result<SuiteReport> {
    let cases = match name {
        "green" => green(seed, tol)?,
        "theta" => theta(tol)?,
        "weyl" => weyl_suite(tol)?,
        "junitary" => junitary(tol)?,
        "csym" => csym(seed, tol)?,
        "similarity" => similarity(seed, tol)?,
        "eigen" => eigen(tol)?,
        "krein" => krein(seed, tol)?,
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    let max_residual = cases
        .iter()
        .filter(|c| c.bound == Bound::Upper)
        .map(|c| c.value)
        .fold(0.0, f64::max);
    let passed = cases.iter().all(|c| c.passed);
    Ok(SuiteReport {
        suite: name.to_string(),
        seed,
        cases,
        max_residual,
        passed,
        tolerance_config: *tol,
        tool_version: TOOL_VERSION,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_at_defaults() {
        let tol = Tolerances::default();
        for s in SUITES {
            let r = run(s, 0, &tol).unwrap();
            assert!(r.passed, "{s}: {:?}", r.cases.iter().find(|c| !c.passed));
            assert!(!r.cases.is_empty());
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(run("nope", 0, &Tolerances::default()), Err(Error::UnknownSuite(_))));
    }
}

//! Per-extension reports.

use std::collections::BTreeMap;

use serde::Serialize;

use phillips_core::csym::{similarity_residual, similarity_witness, solve_stable_c, verify_csymmetry, CSolution};
use phillips_core::extensions::{
    classify_spectrum, eigenvector_candidate, j_unitarity_defect, Extension, KParams, SpectrumClass,
};
use phillips_core::linalg::{c64, op_norm, CMat};
use phillips_core::phillips::FiberSymmetry;
use phillips_core::random;
use phillips_core::triplet::{characteristic, green_residual, Triplet};
use phillips_core::{Result, Tolerances};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Sample points for eigenvector residuals.
pub const SAMPLE_MU: [(f64, f64); 6] = [(0.0, 1.0), (0.0, 2.0), (1.0, 1.0), (0.0, -1.0), (0.0, -2.0), (-1.0, -1.0)];

const GREEN_PAIRS: usize = 50;
const PROBES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Input {
    Regular { zeta: f64, phi: f64, omega: f64, xi: f64 },
    Degenerate { k1: f64, k2: f64 },
}

/// Complex matrix as rows of `[re, im]` pairs.
pub type MatrixView = Vec<Vec<[f64; 2]>>;

pub fn matrix_view(m: &CMat) -> MatrixView {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CSolutionView {
    pub chi_tilde: f64,
    pub omega_tilde: f64,
    pub chi_hat: f64,
    pub omega_hat: f64,
    pub c_plus: MatrixView,
    pub c_plus_hat: MatrixView,
    pub c_minus: MatrixView,
}

impl From<&CSolution> for CSolutionView {
    fn from(s: &CSolution) -> Self {
        CSolutionView {
            chi_tilde: s.chi_tilde,
            omega_tilde: s.omega_tilde,
            chi_hat: s.chi_hat,
            omega_hat: s.omega_hat,
            c_plus: matrix_view(&s.c_plus),
            c_plus_hat: matrix_view(&s.c_plus_hat),
            c_minus: matrix_view(&s.c_minus),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResidual {
    pub mu: [f64; 2],
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Residuals {
    pub green: f64,
    pub theta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_unitary: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intertwine: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_square: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jc_positivity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cm_equals_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commutator_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commutator_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub similarity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigen_residuals: Option<Vec<EigenResidual>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub input: Input,
    pub spectrum_class: SpectrumClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_solution: Option<CSolutionView>,
    pub residuals: Residuals,
    pub pass: BTreeMap<String, bool>,
    pub passed: bool,
    pub tool_version: &'static str,
    pub tolerance_config: Tolerances,
}

impl Report {
    /// Largest upper-bounded residual; positivity is excluded.
    pub fn max_residual(&self) -> f64 {
        let r = &self.residuals;
        let mut vals = vec![r.green, r.theta];
        vals.extend(
            [r.j_unitary, r.intertwine, r.c_square, r.cm_equals_m, r.commutator_a, r.commutator_s, r.similarity]
                .into_iter()
                .flatten(),
        );
        if let Some(e) = &r.eigen_residuals {
            vals.extend(e.iter().map(|e| e.residual));
        }
        vals.into_iter().fold(0.0, f64::max)
    }
}

fn triplet_checks(t: &Triplet, seed: u64) -> Result<(f64, f64)> {
    let mut rng = random::rng(seed);
    let mut green: f64 = 0.0;
    for _ in 0..GREEN_PAIRS {
        let psi = random::domain_vector(&mut rng, 2);
        let phi = random::domain_vector(&mut rng, 2);
        green = green.max(green_residual(&psi, &phi, t));
    }
    let mut theta: f64 = 0.0;
    for k in 0..10 {
        let mu = c64(-5.0 + k as f64, 0.25 + 0.5 * k as f64);
        theta = theta.max(op_norm(&characteristic(mu, t)?));
    }
    Ok((green, theta))
}

/// Runs every applicable check for one extension of the canonical triplet
/// over `J± = diag(1, −1)`.
pub fn build(input: Input, tol: &Tolerances, seed: u64) -> Result<Report> {
    let fs = FiberSymmetry::sigma3();
    let t = Triplet::canonical(&fs)?;
    let (green, theta) = triplet_checks(&t, seed)?;
    let mut residuals = Residuals { green, theta, ..Default::default() };
    let mut pass = BTreeMap::new();
    pass.insert("green".to_string(), green < tol.green);
    pass.insert("theta".to_string(), theta < tol.theta);
    let mut c_solution = None;

    let ext = match input {
        Input::Regular { zeta, phi, omega, xi } => {
            let p = KParams::new(zeta, phi, omega, xi)?;
            let ext = Extension::regular(p, &t, tol)?;
            let sol = solve_stable_c(&p, &t);
            let cs = verify_csymmetry(&ext, &sol, &fs, tol, seed, PROBES)?;
            let witness = similarity_witness(&sol, &fs, &t, tol)?;
            let sim = similarity_residual(&ext, &witness, seed, PROBES);
            let ju = j_unitarity_defect(ext.k().expect("regular"))?;
            residuals.j_unitary = Some(ju);
            residuals.intertwine = Some(cs.intertwine);
            residuals.c_square = Some(cs.c_square);
            residuals.jc_positivity = Some(cs.jc_positivity);
            residuals.cm_equals_m = Some(cs.cm_equals_m);
            residuals.commutator_a = Some(cs.commutator_a);
            residuals.commutator_s = Some(cs.commutator_s);
            residuals.similarity = Some(sim);
            pass.insert("jUnitary".into(), ju < tol.j_unitary);
            pass.insert("intertwine".into(), cs.intertwine <= tol.intertwine);
            pass.insert("cSquare".into(), cs.c_square <= tol.c_square);
            pass.insert("jcPositivity".into(), cs.jc_positivity > tol.positivity);
            pass.insert("cmEqualsM".into(), cs.cm_equals_m <= tol.cm_equals_m);
            pass.insert("commutatorA".into(), cs.commutator_a <= tol.commutator_a);
            pass.insert("commutatorS".into(), cs.commutator_s <= tol.commutator_s);
            pass.insert("similarity".into(), sim < tol.similarity);
            c_solution = Some(CSolutionView::from(&sol));
            ext
        }
        Input::Degenerate { k1, k2 } => {
            if !(k1.is_finite() && k2.is_finite()) {
                return Err(phillips_core::Error::BadParameters("non-finite k1/k2".into()));
            }
            let ext = Extension::degenerate(k1, k2, &t)?;
            let mut eig = Vec::new();
            let mut ok = true;
            for &(re, im) in &SAMPLE_MU {
                match eigenvector_candidate(&ext, c64(re, im), tol)? {
                    Some((_, r)) => {
                        ok &= r < tol.eigen;
                        eig.push(EigenResidual { mu: [re, im], residual: r });
                    }
                    None => {
                        ok = false;
                        eig.push(EigenResidual { mu: [re, im], residual: f64::INFINITY });
                    }
                }
            }
            residuals.eigen_residuals = Some(eig);
            pass.insert("eigenResiduals".into(), ok);
            ext
        }
    };
    let spectrum_class = classify_spectrum(&ext, tol);
    let expected = match input {
        Input::Regular { .. } => SpectrumClass::RealLine,
        Input::Degenerate { .. } => SpectrumClass::WholePlane,
    };
    pass.insert("spectrumClass".into(), spectrum_class == expected);
    let passed = pass.values().all(|&v| v);
    Ok(Report {
        input,
        spectrum_class,
        c_solution,
        residuals,
        pass,
        passed,
        tool_version: TOOL_VERSION,
        tolerance_config: *tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_report_is_complete() {
        let tol = Tolerances::default();
        let r = build(Input::Regular { zeta: 1.0, phi: 0.0, omega: 0.0, xi: 0.0 }, &tol, 0).unwrap();
        assert_eq!(r.spectrum_class, SpectrumClass::RealLine);
        assert!(r.passed, "{:?}", r.pass);
        let json = serde_json::to_value(&r).unwrap();
        for key in ["jUnitary", "intertwine", "cSquare", "jcPositivity", "commutatorA", "commutatorS", "similarity"] {
            assert!(json["residuals"].get(key).is_some(), "{key}");
        }
        assert!(json["residuals"].get("eigenResiduals").is_none());
    }

    #[test]
    fn degenerate_report_has_eigen_residuals() {
        let tol = Tolerances::default();
        let r = build(Input::Degenerate { k1: 0.0, k2: 0.0 }, &tol, 0).unwrap();
        assert_eq!(r.spectrum_class, SpectrumClass::WholePlane);
        assert!(r.passed);
        assert!(r.c_solution.is_none());
        assert_eq!(r.residuals.eigen_residuals.as_ref().unwrap().len(), 6);
    }
}

//! Stable C-symmetries of regular extensions.
//!
//! A C-symmetry commuting with `S` is block-constant, `C₋` at positions `≤ 0`
//! and `C₊` at positions `≥ 1`. In boundary coordinates it acts as
//! `blockdiag(C̃, Q⁻¹ĈQ)`, and `CM = M` for `M = {(β, −Q⁻¹Kβ)}` reduces to
//! the intertwining `KC̃ = ĈK`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extensions::{membership_residual, Extension, ExtensionKind, KParams};
use crate::linalg::{
    cis, max_abs, min_hermitian_eigenvalue, op_norm, span_excess, sqrt_hpd2, to_dmat, to_mat2, CMat, C64,
};
use crate::phillips::{apply_cayley, apply_sstar, apply_symmetric, make_fiber_c, BlockOperator, FiberC, FiberSymmetry};
use crate::random;
use crate::tolerance::Tolerances;
use crate::triplet::Triplet;

/// `[[cosh χ, sinh χ e^{−iω}], [−sinh χ e^{iω}, −cosh χ]]`.
pub fn c_matrix(chi: f64, omega: f64) -> CMat {
    let (c, s) = (C64::from(chi.cosh()), C64::from(chi.sinh()));
    CMat::from_row_slice(2, 2, &[c, s * cis(-omega), -s * cis(omega), -c])
}

/// Matrices are in boundary coordinates: `c_plus = C̃` acts on `β`,
/// `c_minus = Q⁻¹ĈQ` on `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct CSolution {
    pub chi_tilde: f64,
    pub omega_tilde: f64,
    pub chi_hat: f64,
    pub omega_hat: f64,
    pub c_plus: CMat,
    pub c_plus_hat: CMat,
    pub c_minus: CMat,
}

impl CSolution {
    pub fn from_angles(chi_tilde: f64, omega_tilde: f64, chi_hat: f64, omega_hat: f64, t: &Triplet) -> Self {
        let c_plus = c_matrix(chi_tilde, omega_tilde);
        let c_plus_hat = c_matrix(chi_hat, omega_hat);
        let c_minus = t.q_inv() * &c_plus_hat * t.q();
        CSolution {
            chi_tilde,
            omega_tilde,
            chi_hat,
            omega_hat,
            c_plus,
            c_plus_hat,
            c_minus,
        }
    }

    /// Fiber matrices `C₊ = Bn C̃ Bn*`, `C₋ = Bm (Q⁻¹ĈQ) Bm*`.
    pub fn fiber_c(&self, t: &Triplet) -> FiberC {
        let (bn, bm) = (t.basis().bn(), t.basis().bm());
        FiberC {
            cplus: &bn * &self.c_plus * bn.adjoint(),
            cminus: &bm * &self.c_minus * bm.adjoint(),
        }
    }

    /// `blockdiag(C̃, Q⁻¹ĈQ)`.
    pub fn boundary_matrix(&self) -> CMat {
        let mut m = CMat::zeros(4, 4);
        m.view_mut((0, 0), (2, 2)).copy_from(&self.c_plus);
        m.view_mut((2, 2), (2, 2)).copy_from(&self.c_minus);
        m
    }
}

/// The branch `ω̃ = ω − φ`, `ω̂ = ω + φ`, `χ̃ = χ̂ = −ζ`.
pub fn solve_stable_c(p: &KParams, t: &Triplet) -> CSolution {
    let chi = 0.0 - p.zeta;
    CSolution::from_angles(chi, p.omega - p.phi, chi, p.omega + p.phi, t)
}

/// Both scalar equations of the intertwining system, evaluated directly on
/// the angles of `sol`.
pub fn angle_equation_residuals(p: &KParams, sol: &CSolution) -> (C64, C64) {
    let (ct, st) = (sol.chi_tilde.cosh(), sol.chi_tilde.sinh());
    let (ch, sh) = (sol.chi_hat.cosh(), sol.chi_hat.sinh());
    let th = p.zeta.tanh();
    let (w, wt, wh, phi) = (p.omega, sol.omega_tilde, sol.omega_hat, p.phi);
    let first = C64::from(ch - ct) + (cis(wh - w - phi) * sh - cis(w - wt - phi) * st) * th;
    let second = C64::from(th * (ch + ct)) + cis(phi + w - wh) * sh + cis(-(phi - w + wt)) * st;
    (first, second)
}

/// `‖KC̃ − ĈK‖`.
pub fn intertwining_residual(k: &CMat, sol: &CSolution) -> f64 {
    op_norm(&(k * &sol.c_plus - &sol.c_plus_hat * k))
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

/// Equal-`χ` solution for prescribed `ω̃, ω̂`. Requires `ω ≡ (ω̂ + ω̃)/2`
/// modulo `π` and `|tanh ζ| < |cos(φ + (ω̃ − ω̂)/2)|`; then
/// `tanh χ = −s·tanh ζ / cos(φ + (ω̃ − ω̂)/2)` with `s = e^{i(ω − (ω̂+ω̃)/2)} = ±1`.
pub fn solve_general_c(
    p: &KParams,
    omega_tilde: f64,
    omega_hat: f64,
    t: &Triplet,
    tol: &Tolerances,
) -> Option<CSolution> {
    let mid = (omega_hat + omega_tilde) / 2.0;
    let s = if angle_distance(p.omega, mid) <= 1e-12 {
        1.0
    } else if angle_distance(p.omega, mid + std::f64::consts::PI) <= 1e-12 {
        -1.0
    } else {
        return None;
    };
    let cos = (p.phi + (omega_tilde - omega_hat) / 2.0).cos();
    let th = p.zeta.tanh();
    if th.abs() >= cos.abs() - tol.solvability_margin {
        return None;
    }
    let chi = (-s * th / cos).atanh();
    Some(CSolution::from_angles(chi, omega_tilde, chi, omega_hat, t))
}

/// Residuals of the stable C-symmetry conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CsymReport {
    /// `max ‖C±² − I‖`.
    pub c_square: f64,
    /// `min λ(J±C±)`; must be positive.
    pub jc_positivity: f64,
    /// Distance of `CM` from `M`.
    pub cm_equals_m: f64,
    /// `‖(CA_M − A_MC)ψ‖`, including the domain defect of `Cψ`.
    pub commutator_a: f64,
    /// `‖(SC − CS)u‖` with `S(Cu)` recomputed from the lattice vector `Cu`.
    pub commutator_s: f64,
    /// `‖KC̃ − ĈK‖`.
    pub intertwine: f64,
}

impl CsymReport {
    pub fn passed(&self, tol: &Tolerances) -> bool {
        self.c_square <= tol.c_square
            && self.jc_positivity > tol.positivity
            && self.cm_equals_m <= tol.cm_equals_m
            && self.commutator_a <= tol.commutator_a
            && self.commutator_s <= tol.commutator_s
            && self.intertwine <= tol.intertwine
    }
}

/// Fiber-level residuals of `sol` against `fs` without the positivity gate of
/// [`make_fiber_c`].
fn fiber_residuals(fc: &FiberC, fs: &FiberSymmetry) -> (f64, f64) {
    let id = CMat::identity(2, 2);
    let mut square: f64 = 0.0;
    let mut positivity = f64::INFINITY;
    for (c, j) in [(&fc.cminus, fs.jminus()), (&fc.cplus, fs.jplus())] {
        square = square.max(op_norm(&(c * c - &id)));
        positivity = positivity.min(min_hermitian_eigenvalue(&(j * c)));
    }
    (square, positivity)
}

/// Evaluates all conditions on `probes` seeded random vectors of `D(A_M)`
/// and of `D(S)`.
pub fn verify_csymmetry(
    ext: &Extension,
    sol: &CSolution,
    fs: &FiberSymmetry,
    tol: &Tolerances,
    seed: u64,
    probes: usize,
) -> Result<CsymReport> {
    let ExtensionKind::Regular { k, .. } = ext.kind() else {
        return Err(Error::Unsupported("degenerate extensions have no C-symmetry"));
    };
    let t = ext.triplet();
    let fc = sol.fiber_c(t);
    let (c_square, jc_positivity) = fiber_residuals(&fc, fs);
    let c = BlockOperator {
        minus: fc.cminus.clone(),
        plus: fc.cplus.clone(),
    };
    let cm_equals_m = span_excess(&(sol.boundary_matrix() * ext.m_basis()), ext.m_basis(), tol.rank);

    let mut rng = random::rng(seed);
    let mut commutator_a: f64 = 0.0;
    for _ in 0..probes {
        let psi = random::extension_vector(&mut rng, ext).normalized();
        let c_psi = c.apply_domain(&psi);
        let domain = membership_residual(ext, &c_psi);
        let action = (&c.apply(&apply_sstar(&psi)) - &apply_sstar(&c_psi)).norm();
        commutator_a = commutator_a.max(domain).max(action);
    }
    let mut commutator_s: f64 = 0.0;
    for _ in 0..probes {
        let u = random::regular_vector(&mut rng, 2).normalized();
        let (u_vec, su) = apply_cayley(u.xseq.as_lattice());
        let s_cu = match apply_symmetric(&c.apply(&u_vec), tol) {
            Ok(v) => v,
            Err(_) => {
                commutator_s = f64::INFINITY;
                continue;
            }
        };
        commutator_s = commutator_s.max((&s_cu - &c.apply(&su)).norm());
    }
    Ok(CsymReport {
        c_square,
        jc_positivity,
        cm_equals_m,
        commutator_a,
        commutator_s,
        intertwine: intertwining_residual(k, sol),
    })
}

/// `W± = (J±C±)^{1/2}` as a block operator.
pub fn similarity_witness(sol: &CSolution, fs: &FiberSymmetry, t: &Triplet, tol: &Tolerances) -> Result<BlockOperator> {
    let fc = sol.fiber_c(t);
    make_fiber_c(&fc, fs, tol)?;
    let mut roots = Vec::new();
    for (c, j) in [(&fc.cminus, fs.jminus()), (&fc.cplus, fs.jplus())] {
        let g = j * c;
        let g = (&g + g.adjoint()).scale(0.5);
        let low = min_hermitian_eigenvalue(&g);
        if low <= tol.positivity {
            return Err(Error::NotPositiveDefinite(low));
        }
        roots.push(to_dmat(&sqrt_hpd2(&to_mat2(&g))));
    }
    let plus = roots.pop().expect("two blocks");
    let minus = roots.pop().expect("two blocks");
    Ok(BlockOperator { minus, plus })
}

/// `max ‖W±² − J±C±‖`.
pub fn witness_square_residual(w: &BlockOperator, sol: &CSolution, fs: &FiberSymmetry, t: &Triplet) -> f64 {
    let fc = sol.fiber_c(t);
    let a = max_abs((&w.minus * &w.minus - fs.jminus() * &fc.cminus).iter());
    let b = max_abs((&w.plus * &w.plus - fs.jplus() * &fc.cplus).iter());
    a.max(b)
}

/// `max |(W A_M ψ, Wφ) − (Wψ, W A_M φ)|` over seeded unit probe pairs, which
/// is the symmetry defect of `W A_M W⁻¹` on the probes `x = Wψ`, `y = Wφ`.
pub fn similarity_residual(ext: &Extension, w: &BlockOperator, seed: u64, pairs: usize) -> f64 {
    let mut rng = random::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let psi = random::extension_vector(&mut rng, ext).normalized();
        let phi = random::extension_vector(&mut rng, ext).normalized();
        let bx = w.apply(&apply_sstar(&psi));
        let by = w.apply(&apply_sstar(&phi));
        let x = w.apply(&psi.materialize());
        let y = w.apply(&phi.materialize());
        worst = worst.max((bx.inner(&y) - x.inner(&by)).norm());
    }
    worst
}

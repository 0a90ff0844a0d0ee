//! J-self-adjoint extensions of the Phillips operator for deficiency indices
//! ⟨2,2⟩.
//!
//! An extension is fixed by a hypermaximal neutral subspace `M` of the
//! 4-dimensional boundary space with coordinates `(β₊, β₋, α₊, α₋)` (see
//! [`crate::triplet`]) and metric `diag(1, −1, −1, 1)`, which is the `JZ`
//! form. Regular extensions are `K(Γ₁ + iΓ₀)ψ = (Γ₁ − iΓ₀)ψ`, that is
//! `α = −Q⁻¹Kβ`; degenerate ones contain a vector of `𝔑_{−i}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::krein::{classify_subspace, IndefiniteSpace, SubspaceBasis, SubspaceClass};
use crate::linalg::{
    cis, intersection_dim, max_abs, null_space, op_norm, span_distance, CMat, CVec, C64, ONE, ZERO,
};
use crate::phillips::{apply_sstar, embed_conjugate_defect, embed_defect, DomainVector, LatticeVector};
use crate::tolerance::Tolerances;
use crate::triplet::{boundary_maps, Triplet};

const TAU: f64 = std::f64::consts::TAU;

fn wrap(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// `(ζ, φ, ω, ξ)` with angles reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KParams {
    pub zeta: f64,
    pub phi: f64,
    pub omega: f64,
    pub xi: f64,
}

impl KParams {
    pub fn new(zeta: f64, phi: f64, omega: f64, xi: f64) -> Result<Self> {
        if ![zeta, phi, omega, xi].iter().all(|v| v.is_finite()) {
            return Err(Error::BadParameters(format!("non-finite parameters ({zeta}, {phi}, {omega}, {xi})")));
        }
        Ok(KParams {
            zeta,
            phi: wrap(phi),
            omega: wrap(omega),
            xi: wrap(xi),
        })
    }

    /// Same angles, `ζ ↦ −ζ`.
    pub fn negated(&self) -> Self {
        KParams { zeta: -self.zeta, ..*self }
    }

    /// One parameter set (with `ζ ≥ 0`) whose matrix equals the given
    /// J-unitary `k`. Parameters are not unique: `ξ ↦ ξ + π` together with
    /// `φ, ω ↦ φ + π, ω + π` gives the same matrix.
    pub fn from_matrix(k: &CMat, tol: &Tolerances) -> Result<Self> {
        let defect = j_unitarity_defect(k)?;
        if defect > tol.j_unitary.max(1e-10) * norm_scale(k) {
            return Err(Error::NotJUnitary(defect));
        }
        let det = k[(0, 0)] * k[(1, 1)] - k[(0, 1)] * k[(1, 0)];
        // det K = −e^{−2iξ}.
        let xi = wrap(-(-det).arg() / 2.0);
        let phase = cis(xi);
        let c = (k[(1, 1)] * phase).norm();
        let zeta = c.max(1.0).acosh();
        let phi = wrap((k[(1, 1)] * phase).arg());
        let omega = if zeta > 0.0 && (k[(0, 1)] * phase).norm() > 0.0 {
            wrap(-(k[(0, 1)] * phase).arg())
        } else {
            0.0
        };
        KParams::new(zeta, phi, omega, xi)
    }
}

/// `e^{−iξ}·[[−cosh ζ e^{−iφ}, sinh ζ e^{−iω}], [−sinh ζ e^{iω}, cosh ζ e^{iφ}]]`.
pub fn k_matrix(p: &KParams) -> CMat {
    let (c, s) = (C64::from(p.zeta.cosh()), C64::from(p.zeta.sinh()));
    let g = cis(-p.xi);
    CMat::from_row_slice(
        2,
        2,
        &[
            -c * cis(-p.phi) * g,
            s * cis(-p.omega) * g,
            -s * cis(p.omega) * g,
            c * cis(p.phi) * g,
        ],
    )
}

fn sigma3() -> CMat {
    CMat::from_diagonal(&CVec::from_vec(vec![ONE, -ONE]))
}

/// Rounding in `K*σ₃K` grows like `‖K‖²`, so preconditions scale by it.
fn norm_scale(k: &CMat) -> f64 {
    op_norm(k).powi(2).max(1.0)
}

/// `‖K*σ₃K − σ₃‖`.
pub fn j_unitarity_defect(k: &CMat) -> Result<f64> {
    if k.shape() != (2, 2) {
        return Err(Error::DimensionMismatch { expected: 2, found: k.nrows() });
    }
    let s = sigma3();
    Ok(op_norm(&(k.adjoint() * &s * k - &s)))
}

pub fn is_j_unitary(k: &CMat, tol: &Tolerances) -> bool {
    j_unitarity_defect(k).map(|d| d < tol.j_unitary).unwrap_or(false)
}

/// The boundary space with its `JZ` metric.
pub fn boundary_space() -> IndefiniteSpace {
    IndefiniteSpace::diagonal(&[1.0, -1.0, -1.0, 1.0]).expect("diagonal signs")
}

/// `J` on boundary coordinates.
pub fn boundary_j() -> CMat {
    CMat::from_diagonal(&CVec::from_vec(vec![ONE, -ONE, ONE, -ONE]))
}

fn stack(beta: &CMat, alpha: &CMat) -> CMat {
    let mut m = CMat::zeros(4, beta.ncols());
    m.view_mut((0, 0), (2, beta.ncols())).copy_from(beta);
    m.view_mut((2, 0), (2, alpha.ncols())).copy_from(alpha);
    m
}

fn require_hmn(m: &CMat, tol: &Tolerances) -> Result<SubspaceBasis> {
    let basis = SubspaceBasis::new(m.clone(), tol)?;
    match classify_subspace(&basis, &boundary_space(), tol)? {
        SubspaceClass::HypermaximalNeutral => Ok(basis),
        _ => Err(Error::NotHypermaximalNeutral),
    }
}

/// Basis `{(n, −Q⁻¹Kn) : n = e₁, e₂}` of `M`, checked hypermaximal neutral.
pub fn domain_subspace(k: &CMat, t: &Triplet, tol: &Tolerances) -> Result<SubspaceBasis> {
    let defect = j_unitarity_defect(k)?;
    if defect > tol.j_unitary * norm_scale(k) {
        return Err(Error::NotJUnitary(defect));
    }
    let alpha = -(t.q_inv() * k);
    require_hmn(&stack(&CMat::identity(2, 2), &alpha), tol)
}

/// `span{e₊₊ + e^{ik₁}e₊₋, e₋₋ + e^{ik₂}e₋₊}`.
pub fn degenerate_subspace(k1: f64, k2: f64) -> CMat {
    CMat::from_column_slice(4, 2, &[ONE, cis(k1), ZERO, ZERO, ZERO, ZERO, cis(k2), ONE])
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExtensionKind {
    Regular { params: KParams, k: CMat },
    Degenerate { k1: f64, k2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SpectrumClass {
    RealLine,
    WholePlane,
}

/// `A_M = S*↾D(A_M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Extension {
    kind: ExtensionKind,
    m_basis: CMat,
    triplet: Triplet,
}

impl Extension {
    pub fn regular(params: KParams, t: &Triplet, tol: &Tolerances) -> Result<Self> {
        let k = k_matrix(&params);
        let m = domain_subspace(&k, t, tol)?;
        Ok(Extension {
            kind: ExtensionKind::Regular { params, k },
            m_basis: m.matrix().clone(),
            triplet: t.clone(),
        })
    }

    pub fn degenerate(k1: f64, k2: f64, t: &Triplet) -> Result<Self> {
        if !(k1.is_finite() && k2.is_finite()) {
            return Err(Error::BadParameters(format!("non-finite (k1, k2) = ({k1}, {k2})")));
        }
        Ok(Extension {
            kind: ExtensionKind::Degenerate { k1: wrap(k1), k2: wrap(k2) },
            m_basis: degenerate_subspace(k1, k2),
            triplet: t.clone(),
        })
    }

    /// Recovers the extension of an arbitrary hypermaximal neutral `M`.
    pub fn from_subspace(m: &CMat, t: &Triplet, tol: &Tolerances) -> Result<Self> {
        if m.shape() != (4, 2) {
            return Err(Error::DimensionMismatch { expected: 4, found: m.nrows() });
        }
        require_hmn(m, tol)?;
        let beta = m.rows(0, 2).into_owned();
        let alpha = m.rows(2, 2).into_owned();
        let in_minus = null_space(&alpha, tol.rank);
        if in_minus.ncols() == 0 {
            let inv = beta.try_inverse().ok_or(Error::Singular("β-block of M"))?;
            let k = -(t.q() * alpha * inv);
            let params = KParams::from_matrix(&k, tol)?;
            return Extension::regular(params, t, tol);
        }
        // M ∩ 𝔑_{−i} is spanned by β ∝ (1, e^{ik₁}), M ∩ 𝔑_i by α ∝ (e^{ik₂}, 1).
        let b = &beta * in_minus.column(0);
        let in_plus = null_space(&beta, tol.rank);
        if in_plus.ncols() == 0 {
            return Err(Error::NotHypermaximalNeutral);
        }
        let a = &alpha * in_plus.column(0);
        let k1 = (b[1] / b[0]).arg();
        let k2 = (a[0] / a[1]).arg();
        Extension::degenerate(k1, k2, t)
    }

    pub fn kind(&self) -> &ExtensionKind {
        &self.kind
    }

    /// 4x2 matrix whose columns span `M`.
    pub fn m_basis(&self) -> &CMat {
        &self.m_basis
    }

    pub fn triplet(&self) -> &Triplet {
        &self.triplet
    }

    pub fn params(&self) -> Option<&KParams> {
        match &self.kind {
            ExtensionKind::Regular { params, .. } => Some(params),
            ExtensionKind::Degenerate { .. } => None,
        }
    }

    pub fn k(&self) -> Option<&CMat> {
        match &self.kind {
            ExtensionKind::Regular { k, .. } => Some(k),
            ExtensionKind::Degenerate { .. } => None,
        }
    }

    /// The domain vector with no `D(S)` part and boundary coordinates `M·c`.
    pub fn boundary_vector(&self, c: &CVec) -> Result<DomainVector> {
        if c.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: c.len() });
        }
        let v = &self.m_basis * c;
        let beta = v.rows(0, 2).into_owned();
        let alpha = v.rows(2, 2).into_owned();
        let (a, b) = self.triplet.basis().fiber_vectors(&beta, &alpha);
        DomainVector::from_defects(a, b)
    }
}

/// `(β, α)` stacked into the 4-vector `(β₊, β₋, α₊, α₋)`.
pub fn boundary_coordinates(psi: &DomainVector, t: &Triplet) -> CVec {
    let (beta, alpha) = t.basis().coordinates(psi);
    CVec::from_iterator(4, beta.iter().chain(alpha.iter()).cloned())
}

/// Boundary-condition residual of `ψ`: `‖K(Γ₁+iΓ₀)ψ − (Γ₁−iΓ₀)ψ‖` for
/// regular extensions, distance from `span M` for degenerate ones.
/// Relative to `max(1, ‖(a, b)‖)`.
pub fn membership_residual(ext: &Extension, psi: &DomainVector) -> f64 {
    let scale = (psi.a.norm_squared() + psi.b.norm_squared()).sqrt().max(1.0);
    match &ext.kind {
        ExtensionKind::Regular { k, .. } => {
            let (g0, g1) = boundary_maps(psi, &ext.triplet);
            let lhs = k * (&g1 + &g0 * crate::linalg::IM);
            let rhs = &g1 - &g0 * crate::linalg::IM;
            (lhs - rhs).norm() / scale
        }
        ExtensionKind::Degenerate { .. } => {
            let v = boundary_coordinates(psi, &ext.triplet);
            let q = crate::linalg::column_basis(&ext.m_basis, 1e-14);
            let proj = &q * (q.adjoint() * &v);
            (v - proj).norm() / scale
        }
    }
}

pub fn member_of_domain(ext: &Extension, psi: &DomainVector, tol: &Tolerances) -> bool {
    membership_residual(ext, psi) <= tol.membership
}

pub fn apply_extension(ext: &Extension, psi: &DomainVector, tol: &Tolerances) -> Result<LatticeVector> {
    let r = membership_residual(ext, psi);
    if r > tol.membership {
        return Err(Error::NotInDomain(r));
    }
    Ok(apply_sstar(psi))
}

/// The Hilbert adjoint `A_K* = A_{K(−ζ)}`.
pub fn adjoint_extension(ext: &Extension, tol: &Tolerances) -> Result<Extension> {
    match &ext.kind {
        ExtensionKind::Regular { params, .. } => Extension::regular(params.negated(), &ext.triplet, tol),
        ExtensionKind::Degenerate { .. } => Err(Error::Unsupported("adjoint of a degenerate extension")),
    }
}

/// Spectrum of `span M` given as any 4x2 basis: the whole plane iff `M`
/// meets `𝔑_{−i}`.
pub fn classify_boundary_subspace(m: &CMat, tol: &Tolerances) -> SpectrumClass {
    let n_minus_i = CMat::identity(4, 2);
    if intersection_dim(m, &n_minus_i, tol.rank) > 0 {
        SpectrumClass::WholePlane
    } else {
        SpectrumClass::RealLine
    }
}

pub fn classify_spectrum(ext: &Extension, tol: &Tolerances) -> SpectrumClass {
    classify_boundary_subspace(&ext.m_basis, tol)
}

/// Eigenvector of `A_M` for a nonreal `μ` built from `M ∩ 𝔑_{−i}` (for
/// `Im μ > 0`) or `M ∩ 𝔑_i` (for `Im μ < 0`), with relative residual
/// `‖(S* − μ)ψ‖/‖ψ‖`. `None` when the intersection is trivial.
pub fn eigenvector_candidate(
    ext: &Extension,
    mu: C64,
    tol: &Tolerances,
) -> Result<Option<(DomainVector, f64)>> {
    if mu.im == 0.0 {
        return Err(Error::RealParameter(format!("{mu}")));
    }
    let beta = ext.m_basis.rows(0, 2).into_owned();
    let alpha = ext.m_basis.rows(2, 2).into_owned();
    let basis = ext.triplet.basis();
    let psi = if mu.im > 0.0 {
        let ker = null_space(&alpha, tol.rank);
        if ker.ncols() == 0 {
            return Ok(None);
        }
        let b = basis.bn() * (&beta * ker.column(0));
        embed_conjugate_defect(mu, &b)?
    } else {
        let ker = null_space(&beta, tol.rank);
        if ker.ncols() == 0 {
            return Ok(None);
        }
        let a = basis.bm() * (&alpha * ker.column(0));
        embed_defect(mu.conj(), &a)?
    };
    let v = psi.materialize();
    let residual = (&apply_sstar(&psi) - &v.scaled(mu)).norm() / v.norm();
    Ok(Some((psi, residual)))
}

/// `span M` versus `span JM` in boundary coordinates.
pub fn j_invariance_defect(ext: &Extension, tol: &Tolerances) -> f64 {
    span_distance(&(boundary_j() * &ext.m_basis), &ext.m_basis, tol.rank)
}

/// `‖M(K) − M(e^{−iα}K)‖` as spans, exposing that the global phase moves the
/// domain even though it never changes the spectral class.
pub fn phase_shift_distance(p: &KParams, alpha: f64, t: &Triplet, tol: &Tolerances) -> Result<f64> {
    let a = domain_subspace(&k_matrix(p), t, tol)?;
    let shifted = KParams::new(p.zeta, p.phi, p.omega, p.xi + alpha)?;
    let b = domain_subspace(&k_matrix(&shifted), t, tol)?;
    Ok(span_distance(a.matrix(), b.matrix(), tol.rank))
}

/// Entry-wise `‖A − B‖_max`, used by tests and reports.
pub fn max_entry_distance(a: &CMat, b: &CMat) -> f64 {
    max_abs((a - b).iter())
}

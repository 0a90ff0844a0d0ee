//! The canonical boundary triplet `(𝔑_{−i}, Γ₀, Γ₁)` of the Phillips operator
//! and its Weyl and characteristic functions.
//!
//! Boundary values are coordinates in pinned bases: `b = β₊n₊ + β₋n₋` for the
//! `𝔑_{−i}` part and `a = α₊m₊ + α₋m₋` for the `𝔑_i` part, where `n±` and `m±`
//! are unit `±1` eigenvectors of `J₊` and `J₋`. In these bases the map
//! `Q : 𝔑_i → 𝔑_{−i}` is a 2x2 unitary commuting with `diag(1, −1)`, and
//! `Γ₀ = β + Qα`, `Γ₁ = i(β − Qα)`.

use crate::error::{Error, Result};
use crate::linalg::{max_abs, CMat, CVec, C64, IM, ONE};
use crate::phillips::{
    apply_sstar, embed_conjugate_defect, make_fundamental_symmetry, DomainVector, FiberSymmetry,
    LatticeVector,
};

/// Which defect subspace a boundary basis vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefectKind {
    /// `𝔑_i = N@0`.
    PlusI,
    /// `𝔑_{−i} = N@1`.
    MinusI,
}

/// One entry of the sign table: `Je = j·e` and `Ze = z·e`, where `Z` is `+1`
/// on `𝔑_{−i}` and `−1` on `𝔑_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignRow {
    pub kind: DefectKind,
    pub j: i8,
    pub z: i8,
}

/// The basis `e₊₊, e₊₋, e₋₊, e₋₋` of `𝔑_{−i} ∔ 𝔑_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryBasis {
    n_plus: CVec,
    n_minus: CVec,
    m_plus: CVec,
    m_minus: CVec,
    signs: [SignRow; 4],
}

/// Unit vector spanning the range of a rank-one projector, phase-fixed so
/// its largest entry is real and positive.
fn unit_eigenvector(proj: &CMat) -> CVec {
    let k = (0..proj.ncols())
        .max_by(|&i, &j| proj.column(i).norm().total_cmp(&proj.column(j).norm()))
        .expect("nonempty");
    let mut v: CVec = proj.column(k).into_owned();
    v /= C64::from(v.norm());
    let big = v
        .iter()
        .cloned()
        .max_by(|x, y| x.norm().total_cmp(&y.norm()))
        .expect("nonempty");
    v * (big.conj() / big.norm())
}

fn split(j: &CMat) -> Result<(CVec, CVec)> {
    let n = j.nrows();
    let id = CMat::identity(n, n);
    let plus = (&id + j).scale(0.5);
    let minus = (&id - j).scale(0.5);
    let trace = |p: &CMat| p.trace().re.round() as i64;
    if trace(&plus) != 1 || trace(&minus) != 1 {
        return Err(Error::WrongSignature);
    }
    Ok((unit_eigenvector(&plus), unit_eigenvector(&minus)))
}

/// Builds the pinned basis and checks the sign table against the actual
/// action of `J` on the lattice vectors `f_{∓i}(·)`.
pub fn canonical_boundary_basis(fs: &FiberSymmetry) -> Result<BoundaryBasis> {
    fs.fiber().require_two()?;
    let (n_plus, n_minus) = split(fs.jplus())?;
    let (m_plus, m_minus) = split(fs.jminus())?;
    let basis = BoundaryBasis {
        n_plus,
        n_minus,
        m_plus,
        m_minus,
        signs: [
            SignRow { kind: DefectKind::MinusI, j: 1, z: 1 },
            SignRow { kind: DefectKind::MinusI, j: -1, z: 1 },
            SignRow { kind: DefectKind::PlusI, j: 1, z: -1 },
            SignRow { kind: DefectKind::PlusI, j: -1, z: -1 },
        ],
    };
    let residual = basis.sign_table_residual(fs);
    if residual > 1e-12 {
        return Err(Error::NotHermitianInvolution(residual));
    }
    Ok(basis)
}

impl BoundaryBasis {
    pub fn n_plus(&self) -> &CVec {
        &self.n_plus
    }

    pub fn n_minus(&self) -> &CVec {
        &self.n_minus
    }

    pub fn m_plus(&self) -> &CVec {
        &self.m_plus
    }

    pub fn m_minus(&self) -> &CVec {
        &self.m_minus
    }

    pub fn signs(&self) -> &[SignRow; 4] {
        &self.signs
    }

    /// `[n₊ n₋]`.
    pub fn bn(&self) -> CMat {
        CMat::from_columns(&[self.n_plus.clone(), self.n_minus.clone()])
    }

    /// `[m₊ m₋]`.
    pub fn bm(&self) -> CMat {
        CMat::from_columns(&[self.m_plus.clone(), self.m_minus.clone()])
    }

    /// The four basis vectors as elements of `l2(ℤ, N)`, in the order
    /// `e₊₊, e₊₋, e₋₊, e₋₋`.
    pub fn lattice_vectors(&self) -> [LatticeVector; 4] {
        [
            LatticeVector::point(1, self.n_plus.clone()),
            LatticeVector::point(1, self.n_minus.clone()),
            LatticeVector::point(0, self.m_plus.clone()),
            LatticeVector::point(0, self.m_minus.clone()),
        ]
    }

    /// Largest deviation of `Je − j·e` and `Ze − z·e` over the basis.
    pub fn sign_table_residual(&self, fs: &FiberSymmetry) -> f64 {
        let j = make_fundamental_symmetry(fs);
        let mut worst: f64 = 0.0;
        for (e, row) in self.lattice_vectors().iter().zip(self.signs.iter()) {
            let je = j.apply(e);
            worst = worst.max((&je - &e.scaled(C64::from(row.j as f64))).norm());
            // Z is +1 on N@1 and −1 on N@0.
            let ze = &LatticeVector::point(1, e.entry(1)) - &LatticeVector::point(0, e.entry(0));
            worst = worst.max((&ze - &e.scaled(C64::from(row.z as f64))).norm());
            let expected_kind = if e.entry(1).norm() > 0.0 { DefectKind::MinusI } else { DefectKind::PlusI };
            if expected_kind != row.kind {
                worst = f64::INFINITY;
            }
        }
        worst
    }

    /// `(β, α)` with `b = Bn β`, `a = Bm α`.
    pub fn coordinates(&self, psi: &DomainVector) -> (CVec, CVec) {
        (self.bn().adjoint() * &psi.b, self.bm().adjoint() * &psi.a)
    }

    /// The `(a, b)` fiber vectors of boundary coordinates `(β, α)`.
    pub fn fiber_vectors(&self, beta: &CVec, alpha: &CVec) -> (CVec, CVec) {
        (self.bm() * alpha, self.bn() * beta)
    }
}

/// The canonical triplet with a choice of `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Triplet {
    basis: BoundaryBasis,
    q: CMat,
}

fn sigma3() -> CMat {
    CMat::from_diagonal(&CVec::from_vec(vec![ONE, -ONE]))
}

impl Triplet {
    /// `Q = I`, i.e. `Qe₋₊ = e₊₊`, `Qe₋₋ = e₊₋`.
    pub fn canonical(fs: &FiberSymmetry) -> Result<Self> {
        Ok(Triplet {
            basis: canonical_boundary_basis(fs)?,
            q: CMat::identity(2, 2),
        })
    }

    pub fn with_q(fs: &FiberSymmetry, q: CMat) -> Result<Self> {
        if q.shape() != (2, 2) {
            return Err(Error::DimensionMismatch { expected: 2, found: q.nrows() });
        }
        let unitary = max_abs((q.adjoint() * &q - CMat::identity(2, 2)).iter());
        if unitary > 1e-12 {
            return Err(Error::NotUnitary(unitary));
        }
        let s = sigma3();
        let comm = max_abs((&q * &s - &s * &q).iter());
        if comm > 1e-12 {
            return Err(Error::QNotCommuting(comm));
        }
        Ok(Triplet {
            basis: canonical_boundary_basis(fs)?,
            q,
        })
    }

    pub fn basis(&self) -> &BoundaryBasis {
        &self.basis
    }

    pub fn q(&self) -> &CMat {
        &self.q
    }

    /// `Q⁻¹ = Q*`.
    pub fn q_inv(&self) -> CMat {
        self.q.adjoint()
    }
}

/// `(Γ₀ψ, Γ₁ψ)`.
pub fn boundary_maps(psi: &DomainVector, t: &Triplet) -> (CVec, CVec) {
    let (beta, alpha) = t.basis.coordinates(psi);
    boundary_maps_from_coordinates(&beta, &alpha, t)
}

pub fn boundary_maps_from_coordinates(beta: &CVec, alpha: &CVec, t: &Triplet) -> (CVec, CVec) {
    let qa = &t.q * alpha;
    (beta + &qa, (beta - &qa) * IM)
}

/// A `ψ` with `(Γ₀ψ, Γ₁ψ) = (g0, g1)` and no `D(S)` part.
pub fn boundary_preimage(g0: &CVec, g1: &CVec, t: &Triplet) -> Result<DomainVector> {
    if g0.len() != 2 || g1.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: g0.len().min(g1.len()) });
    }
    let half = C64::from(0.5);
    let beta = (g0 - g1 * IM) * half;
    let alpha = t.q_inv() * (g0 + g1 * IM) * half;
    let (a, b) = t.basis.fiber_vectors(&beta, &alpha);
    DomainVector::from_defects(a, b)
}

fn ip(x: &CVec, y: &CVec) -> C64 {
    y.dotc(x)
}

/// `|(S*ψ, φ) − (ψ, S*φ) − (Γ₁ψ, Γ₀φ) + (Γ₀ψ, Γ₁φ)|`.
pub fn green_residual(psi: &DomainVector, phi: &DomainVector, t: &Triplet) -> f64 {
    let (sp, sf) = (apply_sstar(psi), apply_sstar(phi));
    let (p, f) = (psi.materialize(), phi.materialize());
    let lhs = sp.inner(&f) - p.inner(&sf);
    let (g0p, g1p) = boundary_maps(psi, t);
    let (g0f, g1f) = boundary_maps(phi, t);
    let rhs = ip(&g1p, &g0f) - ip(&g0p, &g1f);
    (lhs - rhs).norm()
}

fn require_upper(mu: C64) -> Result<()> {
    if mu.im > 0.0 {
        Ok(())
    } else {
        Err(Error::NotUpperHalfPlane(format!("{mu}")))
    }
}

/// `(Γ₀ f_μ̄, Γ₁ f_μ̄)` as 2x2 matrices whose columns run over `f_μ̄` built on
/// `n₊` and `n₋`.
fn boundary_images(mu: C64, t: &Triplet) -> Result<(CMat, CMat)> {
    require_upper(mu)?;
    let mut g0 = Vec::new();
    let mut g1 = Vec::new();
    for x in [t.basis.n_plus.clone(), t.basis.n_minus.clone()] {
        let psi = embed_conjugate_defect(mu, &x)?;
        let (a, b) = boundary_maps(&psi, t);
        g0.push(a);
        g1.push(b);
    }
    Ok((CMat::from_columns(&g0), CMat::from_columns(&g1)))
}

/// `M(μ)` solving `M(μ)Γ₀f_μ̄ = Γ₁f_μ̄`.
pub fn weyl(mu: C64, t: &Triplet) -> Result<CMat> {
    let (g0, g1) = boundary_images(mu, t)?;
    let inv = g0.try_inverse().ok_or(Error::Singular("Γ₀ restricted to the defect space"))?;
    Ok(g1 * inv)
}

/// `Θ(μ)` solving `Θ(μ)(Γ₁ + iΓ₀)f_μ̄ = (Γ₁ − iΓ₀)f_μ̄`.
pub fn characteristic(mu: C64, t: &Triplet) -> Result<CMat> {
    let (g0, g1) = boundary_images(mu, t)?;
    let plus = &g1 + &g0 * IM;
    let minus = &g1 - &g0 * IM;
    let inv = plus.try_inverse().ok_or(Error::Singular("Γ₁ + iΓ₀ on the defect space"))?;
    Ok(minus * inv)
}

/// `(Γ₁ − iΓ₀)f_μ̄` over the fiber basis; vanishes identically for Phillips.
pub fn characteristic_kernel(mu: C64, t: &Triplet) -> Result<CMat> {
    let (g0, g1) = boundary_images(mu, t)?;
    Ok(&g1 - &g0 * IM)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krein::unit;
    use crate::linalg::{c64, ZERO};
    use crate::phillips::{embed_defect, PuncturedSequence};

    fn e1() -> CVec {
        unit(2, 0)
    }

    #[test]
    fn sigma3_basis_is_standard() {
        let b = canonical_boundary_basis(&FiberSymmetry::sigma3()).unwrap();
        assert_eq!(b.n_plus(), &unit(2, 0));
        assert_eq!(b.n_minus(), &unit(2, 1));
        assert_eq!(b.m_plus(), &unit(2, 0));
        assert_eq!(b.m_minus(), &unit(2, 1));
    }

    #[test]
    fn sign_table_for_rotated_symmetry() {
        // J₊ = J₋ = σ₁ has eigenvectors (1, ±1)/√2.
        let s1 = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let fs = FiberSymmetry::new(s1.clone(), s1).unwrap();
        let b = canonical_boundary_basis(&fs).unwrap();
        assert!(b.sign_table_residual(&fs) < 1e-14);
    }

    #[test]
    fn identity_has_no_basis() {
        let fs = FiberSymmetry::diagonal(&[1.0, -1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(canonical_boundary_basis(&fs), Err(Error::WrongSignature));
    }

    #[test]
    fn boundary_maps_examples() {
        let t = Triplet::canonical(&FiberSymmetry::sigma3()).unwrap();
        let x = LatticeVector::point(-2, e1());
        let u = DomainVector::regular(PuncturedSequence::new(x).unwrap());
        let (g0, g1) = boundary_maps(&u, &t);
        assert_eq!(g0.norm() + g1.norm(), 0.0);

        let fmi = DomainVector::from_defects(CVec::zeros(2), e1()).unwrap();
        let (g0, g1) = boundary_maps(&fmi, &t);
        assert_eq!(g0, e1());
        assert_eq!(g1, e1() * IM);

        let fi = DomainVector::from_defects(e1(), CVec::zeros(2)).unwrap();
        let (g0, g1) = boundary_maps(&fi, &t);
        assert_eq!(g0, e1());
        assert_eq!(g1, e1() * (-IM));
    }

    #[test]
    fn green_identity_on_f_i() {
        let t = Triplet::canonical(&FiberSymmetry::sigma3()).unwrap();
        let fi = DomainVector::from_defects(e1(), CVec::zeros(2)).unwrap();
        let lhs = apply_sstar(&fi).inner(&fi.materialize()) - fi.materialize().inner(&apply_sstar(&fi));
        assert!((lhs - c64(0.0, -2.0)).norm() < 1e-15);
        assert!(green_residual(&fi, &fi, &t) < 1e-15);
    }

    #[test]
    fn weyl_and_characteristic_examples() {
        let t = Triplet::canonical(&FiberSymmetry::sigma3()).unwrap();
        let i2 = CMat::identity(2, 2) * IM;
        for mu in [c64(0.0, 2.0), c64(1.0, 1.0)] {
            assert!(max_abs((weyl(mu, &t).unwrap() - &i2).iter()) < 1e-12);
        }
        for mu in [IM, c64(3.0, 0.5)] {
            assert!(max_abs(characteristic(mu, &t).unwrap().iter()) < 1e-12);
            assert!(max_abs(characteristic_kernel(mu, &t).unwrap().iter()) < 1e-12);
        }
        assert!(weyl(c64(1.0, -1.0), &t).is_err());
    }

    #[test]
    fn surjectivity_round_trip() {
        let q = CMat::from_diagonal(&CVec::from_vec(vec![c64(0.6, 0.8), c64(0.0, 1.0)]));
        let t = Triplet::with_q(&FiberSymmetry::sigma3(), q).unwrap();
        let g0 = CVec::from_vec(vec![c64(1.0, -2.0), c64(0.3, 0.0)]);
        let g1 = CVec::from_vec(vec![c64(0.0, 0.5), c64(-1.0, 4.0)]);
        let psi = boundary_preimage(&g0, &g1, &t).unwrap();
        let (h0, h1) = boundary_maps(&psi, &t);
        assert!((h0 - g0).norm() + (h1 - g1).norm() < 1e-14);
    }

    #[test]
    fn boundary_maps_commute_with_j() {
        let q = CMat::from_diagonal(&CVec::from_vec(vec![c64(0.0, 1.0), c64(-1.0, 0.0)]));
        let fs = FiberSymmetry::sigma3();
        let t = Triplet::with_q(&fs, q).unwrap();
        let j = make_fundamental_symmetry(&fs);
        let psi = embed_defect(c64(0.5, 1.5), &CVec::from_vec(vec![c64(1.0, 1.0), c64(2.0, -1.0)])).unwrap();
        let (g0, g1) = boundary_maps(&j.apply_domain(&psi), &t);
        let (h0, h1) = boundary_maps(&psi, &t);
        let s = sigma3();
        assert!((g0 - &s * h0).norm() + (g1 - &s * h1).norm() < 1e-14);
    }

    #[test]
    fn rejects_q_mixing_signs() {
        let q = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        assert!(matches!(Triplet::with_q(&FiberSymmetry::sigma3(), q), Err(Error::QNotCommuting(_))));
    }
}

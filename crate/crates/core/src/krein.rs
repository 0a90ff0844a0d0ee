//! Finite-dimensional Krein spaces: indefinite inner products, operators of
//! transition, the associated `C` operators and the classification of
//! subspaces by the sign of the indefinite Gram matrix.
//!
//! Vectors are columns of `CMat`/`CVec`; every inner product is linear in the
//! first argument.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    column_basis, hermitian_eigenvalues, is_hermitian, max_abs, min_hermitian_eigenvalue, op_norm,
    rank, CMat, CVec, C64, ONE,
};
use crate::tolerance::Tolerances;

/// A finite-dimensional space with a fundamental symmetry `J` (`J = J*`, `J² = I`).
#[derive(Debug, Clone, PartialEq)]
pub struct IndefiniteSpace {
    j: CMat,
}

impl IndefiniteSpace {
    pub fn new(j: CMat) -> Result<Self> {
        if !j.is_square() || j.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: j.nrows().max(1),
                found: j.ncols(),
            });
        }
        let n = j.nrows();
        let herm = max_abs((&j - j.adjoint()).iter());
        let inv = max_abs((&j * &j - CMat::identity(n, n)).iter());
        let residual = herm.max(inv);
        if residual > 1e-12 {
            return Err(Error::NotHermitianInvolution(residual));
        }
        Ok(IndefiniteSpace { j })
    }

    /// `J = diag(signs)`; every sign must be `±1`.
    pub fn diagonal(signs: &[f64]) -> Result<Self> {
        let d = CVec::from_iterator(signs.len(), signs.iter().map(|&s| C64::from(s)));
        Self::new(CMat::from_diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.j.nrows()
    }

    pub fn j(&self) -> &CMat {
        &self.j
    }

    /// `(P₊, P₋) = (½(I+J), ½(I−J))`.
    pub fn fundamental_projectors(&self) -> (CMat, CMat) {
        let n = self.dim();
        let id = CMat::identity(n, n);
        ((&id + &self.j).scale(0.5), (&id - &self.j).scale(0.5))
    }

    /// Dimensions of the `+1` and `−1` eigenspaces of `J`.
    pub fn signature(&self) -> (usize, usize) {
        let ev = hermitian_eigenvalues(&self.j);
        let pos = ev.iter().filter(|&&l| l > 0.0).count();
        (pos, ev.len() - pos)
    }

    fn check_vec(&self, len: usize) -> Result<()> {
        if len == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: len,
            })
        }
    }

    fn check_square(&self, m: &CMat) -> Result<()> {
        if m.nrows() == self.dim() && m.ncols() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: if m.nrows() == self.dim() { m.ncols() } else { m.nrows() },
            })
        }
    }
}

/// `[x, y]_J = (Jx, y)`.
pub fn indefinite_inner(x: &CVec, y: &CVec, sp: &IndefiniteSpace) -> Result<C64> {
    sp.check_vec(x.len())?;
    sp.check_vec(y.len())?;
    Ok(y.dotc(&(sp.j() * x)))
}

/// Indefinite Gram matrix `B* J B` of the columns of `b`.
pub fn indefinite_gram(b: &CMat, sp: &IndefiniteSpace) -> Result<CMat> {
    sp.check_vec(b.nrows())?;
    Ok(b.adjoint() * sp.j() * b)
}

/// Residuals of the three defining conditions `T = T*`, `‖T‖ < 1`, `JT = −TJ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionDefects {
    pub hermitian: f64,
    pub norm: f64,
    pub anticommutator: f64,
}

pub fn transition_defects(t: &CMat, sp: &IndefiniteSpace) -> Result<TransitionDefects> {
    sp.check_square(t)?;
    Ok(TransitionDefects {
        hermitian: max_abs((t - t.adjoint()).iter()),
        norm: op_norm(t),
        anticommutator: max_abs((sp.j() * t + t * sp.j()).iter()),
    })
}

pub fn is_valid_transition(t: &CMat, sp: &IndefiniteSpace, tol: &Tolerances) -> Result<bool> {
    let d = transition_defects(t, sp)?;
    Ok(d.hermitian <= tol.transition
        && d.norm < 1.0 - tol.transition
        && d.anticommutator <= tol.transition)
}

/// An operator of transition from the fundamental decomposition to a
/// canonical one.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionOperator {
    t: CMat,
}

impl TransitionOperator {
    pub fn new(t: CMat, sp: &IndefiniteSpace, tol: &Tolerances) -> Result<Self> {
        let d = transition_defects(&t, sp)?;
        if d.hermitian > tol.transition {
            return Err(Error::InvalidTransition("T is not self-adjoint"));
        }
        if d.norm >= 1.0 - tol.transition {
            return Err(Error::InvalidTransition("operator norm is not < 1"));
        }
        if d.anticommutator > tol.transition {
            return Err(Error::InvalidTransition("T does not anticommute with J"));
        }
        Ok(TransitionOperator { t })
    }

    pub fn matrix(&self) -> &CMat {
        &self.t
    }
}

/// `C = J(I−T)(I+T)⁻¹`.
pub fn transition_to_c(t: &TransitionOperator, sp: &IndefiniteSpace) -> Result<CMat> {
    sp.check_square(t.matrix())?;
    let n = sp.dim();
    let id = CMat::identity(n, n);
    let inv = (&id + t.matrix())
        .try_inverse()
        .ok_or(Error::Singular("I + T"))?;
    Ok(sp.j() * (&id - t.matrix()) * inv)
}

/// Projectors onto `𝔏₊` and `𝔏₋` along the canonical decomposition:
/// `P_{𝔏₊} = (I−T)⁻¹(P₊ − TP₋)`, `P_{𝔏₋} = (I−T)⁻¹(P₋ − TP₊)`.
pub fn canonical_projectors(t: &TransitionOperator, sp: &IndefiniteSpace) -> Result<(CMat, CMat)> {
    sp.check_square(t.matrix())?;
    let n = sp.dim();
    let id = CMat::identity(n, n);
    let inv = (&id - t.matrix())
        .try_inverse()
        .ok_or(Error::Singular("I - T"))?;
    let (pp, pm) = sp.fundamental_projectors();
    let plus = &inv * (&pp - t.matrix() * &pm);
    let minus = &inv * (&pm - t.matrix() * &pp);
    Ok((plus, minus))
}

/// Linearly independent vectors, stored as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    vectors: CMat,
}

impl SubspaceBasis {
    pub fn new(vectors: CMat, tol: &Tolerances) -> Result<Self> {
        if vectors.ncols() == 0 || rank(&vectors, tol.rank) < vectors.ncols() {
            return Err(Error::DependentBasis);
        }
        Ok(SubspaceBasis { vectors })
    }

    pub fn from_vectors(vectors: &[CVec], tol: &Tolerances) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::DependentBasis);
        }
        Self::new(CMat::from_columns(vectors), tol)
    }

    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> CVec {
        self.vectors.column(k).into_owned()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SubspaceClass {
    UniformlyPositive,
    UniformlyNegative,
    Neutral,
    HypermaximalNeutral,
    /// Anything else: mixed signs, or semidefinite without being neutral.
    Indefinite,
}

/// Classifies `span(basis)` by the eigenvalues of the indefinite Gram matrix of
/// an orthonormalized copy of the basis, so the verdict is scale invariant.
pub fn classify_subspace(
    basis: &SubspaceBasis,
    sp: &IndefiniteSpace,
    tol: &Tolerances,
) -> Result<SubspaceClass> {
    sp.check_vec(basis.ambient_dim())?;
    let q = column_basis(basis.matrix(), tol.rank);
    if q.ncols() < basis.dim() {
        return Err(Error::DependentBasis);
    }
    let gram = indefinite_gram(&q, sp)?;
    let ev = hermitian_eigenvalues(&gram);
    let eps = tol.positivity;
    let class = if ev.iter().all(|&l| l > eps) {
        SubspaceClass::UniformlyPositive
    } else if ev.iter().all(|&l| l < -eps) {
        SubspaceClass::UniformlyNegative
    } else if ev.iter().all(|&l| l.abs() <= eps) {
        if 2 * basis.dim() == sp.dim() {
            SubspaceClass::HypermaximalNeutral
        } else {
            SubspaceClass::Neutral
        }
    } else {
        SubspaceClass::Indefinite
    };
    Ok(class)
}

/// Bases of the ranges of `½(I+C)` and `½(I−C)`.
pub fn c_subspaces(c: &CMat, tol: &Tolerances) -> Result<(SubspaceBasis, SubspaceBasis)> {
    if !c.is_square() {
        return Err(Error::DimensionMismatch {
            expected: c.nrows(),
            found: c.ncols(),
        });
    }
    let n = c.nrows();
    let id = CMat::identity(n, n);
    let residual = max_abs((c * c - &id).iter());
    if residual > tol.c_square {
        return Err(Error::NotInvolution(residual));
    }
    let plus = column_basis(&(&id + c).scale(0.5), tol.rank);
    let minus = column_basis(&(&id - c).scale(0.5), tol.rank);
    Ok((SubspaceBasis { vectors: plus }, SubspaceBasis { vectors: minus }))
}

/// Checks the characterization `C² = I`, `JC ≻ 0`; returns the pair
/// `(‖C² − I‖, λ_min(JC))`.
pub fn c_operator_defects(c: &CMat, sp: &IndefiniteSpace) -> Result<(f64, f64)> {
    sp.check_square(c)?;
    let n = sp.dim();
    let sq = op_norm(&(c * c - CMat::identity(n, n)));
    Ok((sq, min_hermitian_eigenvalue(&(sp.j() * c))))
}

pub fn is_c_operator(c: &CMat, sp: &IndefiniteSpace, tol: &Tolerances) -> Result<bool> {
    let (sq, pos) = c_operator_defects(c, sp)?;
    let herm = is_hermitian(&(sp.j() * c), tol.c_square);
    Ok(sq <= tol.c_square && pos > tol.positivity && herm)
}

/// Standard basis vector `e_k` of `ℂⁿ`.
pub fn unit(n: usize, k: usize) -> CVec {
    let mut v = CVec::zeros(n);
    v[k] = ONE;
    v
}

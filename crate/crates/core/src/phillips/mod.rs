//! The lattice model of the Phillips symmetric operator on `l2(ℤ, N)`.
//!
//! `U` is the bilateral shift `(Ux)_j = x_{j−1}` with wandering subspace
//! `N@0`; its Cayley transform `A` acts by `f = (U−I)x ↦ i(U+I)x`, and `S` is
//! the restriction of `A` to sequences with `x₀ = 0`. The defect subspaces are
//! `𝔑_i = N@0`, `𝔑_{−i} = N@1`, and for `μ ∈ ℂ₊` they are spanned by exact
//! geometric tails with ratio `r_μ = (μ−i)/(μ+i)`.

mod domain;
mod lattice;

pub use domain::{apply_sstar, DomainVector, PuncturedSequence};
pub use lattice::{LatticeVector, Tail};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, max_abs, min_hermitian_eigenvalue, CMat, CVec, C64, IM, ONE};
use crate::tolerance::Tolerances;

/// The auxiliary fiber `N = ℂⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiberSpace {
    n: usize,
}

impl Default for FiberSpace {
    fn default() -> Self {
        FiberSpace { n: 2 }
    }
}

impl FiberSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::FiberDimension(n));
        }
        Ok(FiberSpace { n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Extensions and C-symmetries are only built for deficiency indices ⟨2,2⟩.
    pub fn require_two(&self) -> Result<()> {
        if self.n == 2 {
            Ok(())
        } else {
            Err(Error::FiberDimension(self.n))
        }
    }
}

/// `(Uv)_j = v_{j−1}`.
pub fn apply_shift(v: &LatticeVector) -> LatticeVector {
    v.shift(1)
}

/// The restriction `V` of `U` to `{v : v₀ = 0}`.
pub fn apply_restricted_shift(v: &LatticeVector, tol: &Tolerances) -> Result<LatticeVector> {
    let at_origin = v.entry(0).norm();
    if at_origin > tol.membership * v.norm().max(1.0) {
        return Err(Error::NonzeroAtOrigin);
    }
    Ok(v.shift(1))
}

/// `(f, Af)` with `f_j = x_{j−1} − x_j` and `(Af)_j = i(x_{j−1} + x_j)`.
pub fn apply_cayley(xseq: &LatticeVector) -> (LatticeVector, LatticeVector) {
    let ux = xseq.shift(1);
    let f = &ux - xseq;
    let af = (&ux + xseq).scaled(IM);
    (f, af)
}

/// Solves `f = (U − I)x` for `x ∈ l2`, in closed form on the canonical
/// window: `x_j = Σ_{k>j} f_k` from the right, checked against
/// `x_j = −Σ_{k≤j} f_k` from the left. Fails when `Σ f ≠ 0`, i.e. when `f`
/// is not in the range of `U − I`.
pub fn cayley_preimage(f: &LatticeVector, tol: &Tolerances) -> Result<LatticeVector> {
    let n = f.dim();
    let c = f.canonical();
    let keys: Vec<i64> = c
        .support()
        .keys()
        .cloned()
        .chain(c.left_tails().iter().map(|t| t.start + 1))
        .chain(c.right_tails().iter().map(|t| t.start - 1))
        .collect();
    let (Some(&lo), Some(&hi)) = (keys.iter().min(), keys.iter().max()) else {
        return Ok(LatticeVector::zero(n));
    };
    let lo = lo.min(hi + 1);

    let mut x = LatticeVector::zero(n);
    let mut x_hi = CVec::zeros(n);
    for t in c.right_tails() {
        let base = &t.base / (ONE - t.ratio);
        x_hi += &base;
        x = x.with_right_tail(hi, base, t.ratio)?;
    }
    let left_bases: CVec = c
        .left_tails()
        .iter()
        .fold(CVec::zeros(n), |acc, t| acc + &t.base);
    let mut current = x_hi;
    for j in (lo - 2..hi).rev() {
        let next_entry = if j + 1 >= lo {
            c.support().get(&(j + 1)).cloned().unwrap_or_else(|| CVec::zeros(n))
        } else {
            left_bases.clone()
        };
        current += next_entry;
        if j >= lo - 1 {
            x.add_entry(j, current.clone())?;
        }
    }
    let mut from_left = CVec::zeros(n);
    for t in c.left_tails() {
        let base = &t.base * (-t.ratio / (ONE - t.ratio));
        from_left += &base;
        if t.ratio != C64::from(0.0) {
            x = x.with_left_tail(lo - 2, base, t.ratio)?;
        }
    }
    let mismatch = (&current - &from_left).norm();
    if mismatch > tol.membership * f.norm().max(1.0) {
        return Err(Error::NotInRange);
    }
    Ok(x)
}

/// `Su` for `u` given as a plain lattice vector; fails unless `u ∈ D(S)`.
pub fn apply_symmetric(u: &LatticeVector, tol: &Tolerances) -> Result<LatticeVector> {
    let x = cayley_preimage(u, tol)?;
    let x0 = x.entry(0).norm();
    if x0 > tol.membership * u.norm().max(1.0) {
        return Err(Error::NotInSymmetricDomain(x0));
    }
    Ok(apply_cayley(&x).1)
}

/// `r_μ = (μ − i)/(μ + i)`.
pub fn r_mu(mu: C64) -> Result<C64> {
    let den = mu + IM;
    if den.norm() < f64::EPSILON {
        return Err(Error::Pole);
    }
    Ok((mu - IM) / den)
}

fn check_fiber_vector(x: &CVec) -> Result<()> {
    if x.norm() == 0.0 {
        return Err(Error::BadParameters("defect vectors need a nonzero fiber vector".into()));
    }
    Ok(())
}

/// The element `f_μ(x)` of `𝔑_μ = ker(S* − μ̄)`: for `μ ∈ ℂ₊` a left tail
/// `r̄_μ^k x` ending at 0, for `μ ∈ ℂ₋` a right tail `r_{μ̄}^k x` starting at 1.
pub fn defect_vector(mu: C64, x: &CVec) -> Result<LatticeVector> {
    check_fiber_vector(x)?;
    if mu.im > 0.0 {
        let r = r_mu(mu)?.conj();
        let v = LatticeVector::point(0, x.clone());
        if r == C64::from(0.0) {
            Ok(v)
        } else {
            v.with_left_tail(-1, x * r, r)
        }
    } else if mu.im < 0.0 {
        let r = r_mu(mu.conj())?;
        let v = LatticeVector::point(1, x.clone());
        if r == C64::from(0.0) {
            Ok(v)
        } else {
            v.with_right_tail(2, x * r, r)
        }
    } else {
        Err(Error::RealParameter(format!("{mu}")))
    }
}

fn require_upper(mu: C64) -> Result<()> {
    if mu.im > 0.0 {
        Ok(())
    } else {
        Err(Error::NotUpperHalfPlane(format!("{mu}")))
    }
}

/// `f_μ((1 − r̄_μ)x) = u + f_i(x)` with `u ∈ D(S)`, `μ ∈ ℂ₊`.
/// The `D(S)` part is `x_{−k} = −r̄_μ^k x` for `k ≥ 1`.
pub fn embed_defect(mu: C64, x: &CVec) -> Result<DomainVector> {
    require_upper(mu)?;
    let r = r_mu(mu)?.conj();
    let n = x.len();
    let mut seq = LatticeVector::zero(n);
    if r != C64::from(0.0) {
        seq = seq.with_left_tail(-1, x * (-r), r)?;
    }
    DomainVector::new(PuncturedSequence::new(seq)?, x.clone(), CVec::zeros(n))
}

/// `f_μ̄((1 − r_μ)x) = v + f_{−i}(x)` with `v ∈ D(S)`, `μ ∈ ℂ₊`.
/// The `D(S)` part is `x_k = r_μ^k x` for `k ≥ 1`.
pub fn embed_conjugate_defect(mu: C64, x: &CVec) -> Result<DomainVector> {
    require_upper(mu)?;
    let r = r_mu(mu)?;
    let n = x.len();
    let mut seq = LatticeVector::zero(n);
    if r != C64::from(0.0) {
        seq = seq.with_right_tail(1, x * r, r)?;
    }
    DomainVector::new(PuncturedSequence::new(seq)?, CVec::zeros(n), x.clone())
}

fn involution_residual(m: &CMat) -> f64 {
    let n = m.nrows();
    let herm = max_abs((m - m.adjoint()).iter());
    let inv = max_abs((m * m - CMat::identity(n, n)).iter());
    herm.max(inv)
}

/// The pair `(J₋, J₊)` of fundamental symmetries of `N` that defines a
/// fundamental symmetry of `l2(ℤ, N)` commuting with `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberSymmetry {
    jminus: CMat,
    jplus: CMat,
}

impl FiberSymmetry {
    pub fn new(jminus: CMat, jplus: CMat) -> Result<Self> {
        if !jminus.is_square() || jminus.shape() != jplus.shape() {
            return Err(Error::DimensionMismatch {
                expected: jminus.nrows(),
                found: jplus.nrows(),
            });
        }
        for m in [&jminus, &jplus] {
            let residual = involution_residual(m);
            if residual > 1e-12 {
                return Err(Error::NotHermitianInvolution(residual));
            }
        }
        Ok(FiberSymmetry { jminus, jplus })
    }

    pub fn diagonal(minus: &[f64], plus: &[f64]) -> Result<Self> {
        let d = |s: &[f64]| CMat::from_diagonal(&CVec::from_iterator(s.len(), s.iter().map(|&x| C64::from(x))));
        Self::new(d(minus), d(plus))
    }

    /// `J₊ = J₋ = diag(1, −1)`.
    pub fn sigma3() -> Self {
        Self::diagonal(&[1.0, -1.0], &[1.0, -1.0]).expect("diag(1,-1) is an involution")
    }

    pub fn jminus(&self) -> &CMat {
        &self.jminus
    }

    pub fn jplus(&self) -> &CMat {
        &self.jplus
    }

    pub fn fiber(&self) -> FiberSpace {
        FiberSpace { n: self.jplus.nrows() }
    }
}

/// A bounded operator acting by one fiber matrix at positions `≤ 0` and
/// another at positions `≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator {
    pub minus: CMat,
    pub plus: CMat,
}

impl BlockOperator {
    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        v.map_blocks(&self.minus, &self.plus)
    }

    /// Action on von Neumann coordinates: `x_j ↦ B₋x_j` for `j ≤ −1`,
    /// `B₊x_j` for `j ≥ 1`, `a ↦ B₋a`, `b ↦ B₊b`.
    pub fn apply_domain(&self, psi: &DomainVector) -> DomainVector {
        let x = psi.xseq.as_lattice().map_blocks(&self.minus, &self.plus);
        DomainVector::new(
            PuncturedSequence::new(x).expect("block maps keep x₀ = 0"),
            &self.minus * &psi.a,
            &self.plus * &psi.b,
        )
        .expect("dimensions preserved")
    }
}

pub fn make_fundamental_symmetry(fs: &FiberSymmetry) -> BlockOperator {
    BlockOperator {
        minus: fs.jminus.clone(),
        plus: fs.jplus.clone(),
    }
}

/// `Σ_J(S) ≠ ∅` iff `dim (I−J₊)N = dim (I−J₋)N`.
pub fn extensions_exist(fs: &FiberSymmetry) -> bool {
    let negatives = |m: &CMat| hermitian_eigenvalues(m).iter().filter(|&&l| l < 0.0).count();
    negatives(&fs.jplus) == negatives(&fs.jminus)
}

/// Fiber data `(C₋, C₊)` of a C-operator commuting with `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberC {
    pub cminus: CMat,
    pub cplus: CMat,
}

/// Residuals `(‖C±² − I‖, λ_min(J±C±), ‖J±C± − (J±C±)*‖)`, worst over both signs.
pub fn fiber_c_defects(fc: &FiberC, fs: &FiberSymmetry) -> Result<(f64, f64, f64)> {
    let n = fs.jplus.nrows();
    let mut square: f64 = 0.0;
    let mut positivity = f64::INFINITY;
    let mut hermitian: f64 = 0.0;
    for (c, j) in [(&fc.cminus, &fs.jminus), (&fc.cplus, &fs.jplus)] {
        if c.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.nrows(),
            });
        }
        square = square.max(max_abs((c * c - CMat::identity(n, n)).iter()));
        let jc = j * c;
        positivity = positivity.min(min_hermitian_eigenvalue(&jc));
        hermitian = hermitian.max(max_abs((&jc - jc.adjoint()).iter()));
    }
    Ok((square, positivity, hermitian))
}

pub fn make_fiber_c(fc: &FiberC, fs: &FiberSymmetry, tol: &Tolerances) -> Result<BlockOperator> {
    let (square, positivity, hermitian) = fiber_c_defects(fc, fs)?;
    if square > tol.c_square {
        return Err(Error::InvalidC(format!("C±² ≠ I (residual {square:e})")));
    }
    if hermitian > tol.c_square {
        return Err(Error::InvalidC(format!("J±C± not Hermitian (residual {hermitian:e})")));
    }
    if positivity <= tol.positivity {
        return Err(Error::InvalidC(format!("J±C± not positive (min eigenvalue {positivity:e})")));
    }
    Ok(BlockOperator {
        minus: fc.cminus.clone(),
        plus: fc.cplus.clone(),
    })
}

/// `‖S(Bu) − B(Su)‖` for `u = (U−I)x ∈ D(S)`, with `S(Bu)` computed from the
/// lattice vector `Bu` alone. Fails when `Bu ∉ D(S)`.
pub fn s_commutator<F>(op: F, x: &PuncturedSequence, tol: &Tolerances) -> Result<f64>
where
    F: Fn(&LatticeVector) -> LatticeVector,
{
    let (u, su) = apply_cayley(x.as_lattice());
    let s_bu = apply_symmetric(&op(&u), tol)?;
    Ok((&s_bu - &op(&su)).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, ZERO};

    fn e1() -> CVec {
        CVec::from_vec(vec![ONE, ZERO])
    }

    #[test]
    fn r_mu_examples() {
        assert_eq!(r_mu(IM).unwrap(), ZERO);
        assert_eq!(r_mu(ZERO).unwrap(), -ONE);
        assert!((r_mu(c64(0.0, 2.0)).unwrap() - c64(1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert_eq!(r_mu(-IM), Err(Error::Pole));
    }

    #[test]
    fn defect_vector_examples() {
        let fi = defect_vector(IM, &e1()).unwrap();
        assert_eq!(fi.support().len(), 1);
        assert_eq!(fi.entry(0), e1());
        assert!(!fi.has_tails());
        let fmi = defect_vector(-IM, &e1()).unwrap();
        assert_eq!(fmi.entry(1), e1());
        assert!(!fmi.has_tails());
        let f = defect_vector(c64(0.0, -2.0), &e1()).unwrap();
        assert!((f.right_tails()[0].ratio - c64(1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!(matches!(defect_vector(C64::from(1.0), &e1()), Err(Error::RealParameter(_))));
    }

    #[test]
    fn cayley_example() {
        let x = LatticeVector::point(0, e1());
        let (f, af) = apply_cayley(&x);
        assert_eq!(f.entry(0), -e1());
        assert_eq!(f.entry(1), e1());
        assert_eq!(af.entry(0), &e1() * IM);
        assert_eq!(af.entry(1), &e1() * IM);
        let (f0, af0) = apply_cayley(&LatticeVector::zero(2));
        assert_eq!(f0.norm(), 0.0);
        assert_eq!(af0.norm(), 0.0);
    }

    #[test]
    fn restricted_shift_requires_zero_at_origin() {
        let tol = Tolerances::default();
        assert!(apply_restricted_shift(&LatticeVector::point(0, e1()), &tol).is_err());
        let v = apply_restricted_shift(&LatticeVector::point(-1, e1()), &tol).unwrap();
        assert_eq!(v.entry(0), e1());
    }

    #[test]
    fn embed_defect_at_i_is_trivial() {
        let psi = embed_defect(IM, &e1()).unwrap();
        assert_eq!(psi.a, e1());
        assert!(psi.xseq.as_lattice().norm() == 0.0);
        assert!(embed_defect(C64::from(1.0), &e1()).is_err());
        assert!(embed_defect(-IM, &e1()).is_err());
    }

    #[test]
    fn preimage_inverts_cayley_with_tails() {
        let tol = Tolerances::default();
        let x = LatticeVector::point(2, e1())
            .with_left_tail(-3, e1(), c64(0.2, -0.5))
            .unwrap()
            .with_right_tail(1, CVec::from_vec(vec![ZERO, c64(1.0, 1.0)]), c64(-0.7, 0.0))
            .unwrap();
        let (f, _) = apply_cayley(&x);
        let back = cayley_preimage(&f, &tol).unwrap();
        assert!((&back - &x).norm() < 1e-13);
    }

    #[test]
    fn preimage_rejects_nonzero_total_sum() {
        let tol = Tolerances::default();
        assert_eq!(cayley_preimage(&LatticeVector::point(0, e1()), &tol), Err(Error::NotInRange));
    }

    #[test]
    fn apply_symmetric_rejects_range_of_a_outside_s() {
        let tol = Tolerances::default();
        // f = (U−I)(e₁@0) lies in D(A) but x₀ ≠ 0.
        let (f, _) = apply_cayley(&LatticeVector::point(0, e1()));
        assert!(matches!(apply_symmetric(&f, &tol), Err(Error::NotInSymmetricDomain(_))));
    }

    #[test]
    fn extensions_exist_truth_table() {
        let s = FiberSymmetry::diagonal;
        assert!(extensions_exist(&s(&[1.0, -1.0], &[1.0, -1.0]).unwrap()));
        assert!(!extensions_exist(&s(&[1.0, -1.0], &[1.0, 1.0]).unwrap()));
        assert!(extensions_exist(&s(&[1.0, -1.0], &[-1.0, 1.0]).unwrap()));
    }

    #[test]
    fn fiber_c_example() {
        let tol = Tolerances::default();
        let fs = FiberSymmetry::sigma3();
        let (ch, sh) = (1f64.cosh(), 1f64.sinh());
        let cplus = CMat::from_row_slice(2, 2, &[C64::from(ch), C64::from(sh), C64::from(-sh), C64::from(-ch)]);
        let fc = FiberC { cminus: fs.jminus().clone(), cplus };
        assert!(make_fiber_c(&fc, &fs, &tol).is_ok());
        let bad = FiberC { cminus: fs.jminus().clone(), cplus: -fs.jplus().clone() };
        assert!(matches!(make_fiber_c(&bad, &fs, &tol), Err(Error::InvalidC(_))));
    }
}

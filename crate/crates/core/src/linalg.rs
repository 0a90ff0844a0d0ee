//! Small dense complex linear algebra shared by every module.

use nalgebra::{Complex, DMatrix, DVector, Matrix2, Vector2};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type Mat2 = Matrix2<C64>;
pub type Vec2 = Vector2<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const IM: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e^{i t}`
#[inline]
pub fn cis(t: f64) -> C64 {
    C64::from_polar(1.0, t)
}

pub fn sigma3() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, -ONE)
}

pub fn to_dmat(m: &Mat2) -> CMat {
    CMat::from_iterator(2, 2, m.iter().cloned())
}

pub fn to_mat2(m: &CMat) -> Mat2 {
    assert_eq!(m.shape(), (2, 2));
    Mat2::from_iterator(m.iter().cloned())
}

pub fn max_abs<'a, I: IntoIterator<Item = &'a C64>>(entries: I) -> f64 {
    entries.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    m.is_square() && max_abs((m - m.adjoint()).iter()) <= tol
}

/// Eigenvalues of the Hermitian part `(M + M*)/2`, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().cloned().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn min_hermitian_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigenvalues(m).first().cloned().unwrap_or(f64::INFINITY)
}

/// Numerical rank: singular values above `tol * max(1, s_max)`.
pub fn rank(m: &CMat, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let cut = tol * smax.max(1.0);
    sv.iter().filter(|&&s| s > cut).count()
}

/// Orthonormal basis of the column span, by modified Gram-Schmidt with one
/// reorthogonalization pass. Columns are visited in order, so a column that is
/// already a unit vector orthogonal to its predecessors is returned unchanged.
pub fn column_basis(m: &CMat, tol: f64) -> CMat {
    let rows = m.nrows();
    let scale = (0..m.ncols())
        .map(|j| m.column(j).norm())
        .fold(0.0, f64::max)
        .max(1.0);
    let mut basis: Vec<CVec> = Vec::new();
    for j in 0..m.ncols() {
        let mut v: CVec = m.column(j).into_owned();
        for _ in 0..2 {
            for q in &basis {
                let proj = q.dotc(&v);
                v -= q * proj;
            }
        }
        let n = v.norm();
        if n > tol * scale {
            basis.push(v / C64::from(n));
        }
    }
    if basis.is_empty() {
        return CMat::zeros(rows, 0);
    }
    CMat::from_columns(&basis)
}

/// Orthogonal projector onto the column span.
pub fn span_projector(m: &CMat, tol: f64) -> CMat {
    let q = column_basis(m, tol);
    &q * q.adjoint()
}

/// Orthonormal basis of `ker m`.
pub fn null_space(m: &CMat, tol: f64) -> CMat {
    let n = m.ncols();
    let p = span_projector(&m.adjoint(), tol);
    column_basis(&(CMat::identity(n, n) - p), tol)
}

/// Largest distance of a unit vector of `span(a)` from `span(b)`.
pub fn span_excess(a: &CMat, b: &CMat, tol: f64) -> f64 {
    let qa = column_basis(a, tol);
    if qa.ncols() == 0 {
        return 0.0;
    }
    let pb = span_projector(b, tol);
    let n = a.nrows();
    op_norm(&((CMat::identity(n, n) - pb) * qa))
}

/// Symmetric span distance; zero iff the column spans coincide.
pub fn span_distance(a: &CMat, b: &CMat, tol: f64) -> f64 {
    span_excess(a, b, tol).max(span_excess(b, a, tol))
}

/// `dim(span a ∩ span b)` from the rank identity.
pub fn intersection_dim(a: &CMat, b: &CMat, tol: f64) -> usize {
    let joined = CMat::from_columns(
        &a.column_iter()
            .chain(b.column_iter())
            .map(|c| c.into_owned())
            .collect::<Vec<_>>(),
    );
    (rank(a, tol) + rank(b, tol)).saturating_sub(rank(&joined, tol))
}

/// Principal square root of a 2x2 Hermitian positive-definite matrix,
/// `sqrt(G) = (G + sqrt(det G) I) / sqrt(tr G + 2 sqrt(det G))`.
pub fn sqrt_hpd2(g: &Mat2) -> Mat2 {
    let det = (g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)]).re;
    let tr = (g[(0, 0)] + g[(1, 1)]).re;
    let s = det.sqrt();
    let t = (tr + 2.0 * s).sqrt();
    (g + Mat2::identity() * C64::from(s)) / C64::from(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_rank_one() {
        let m = CMat::from_row_slice(1, 2, &[ONE, ONE]);
        let ns = null_space(&m, 1e-12);
        assert_eq!(ns.ncols(), 1);
        assert!(max_abs((&m * &ns).iter()) < 1e-14);
    }

    #[test]
    fn intersection_of_coordinate_planes() {
        let a = CMat::from_columns(&[
            CVec::from_vec(vec![ONE, ZERO, ZERO]),
            CVec::from_vec(vec![ZERO, ONE, ZERO]),
        ]);
        let b = CMat::from_columns(&[
            CVec::from_vec(vec![ZERO, ONE, ZERO]),
            CVec::from_vec(vec![ZERO, ZERO, ONE]),
        ]);
        assert_eq!(intersection_dim(&a, &b, 1e-10), 1);
        assert_eq!(intersection_dim(&a, &a, 1e-10), 2);
    }

    #[test]
    fn column_basis_keeps_unit_columns() {
        let m = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO]);
        let q = column_basis(&m, 1e-12);
        assert_eq!(q.ncols(), 1);
        assert_eq!(q[(0, 0)], ONE);
    }

    #[test]
    fn sqrt_hpd2_matches_eigen_route() {
        let g = Mat2::new(c64(3.0, 0.0), c64(1.0, -0.5), c64(1.0, 0.5), c64(2.0, 0.0));
        let w = sqrt_hpd2(&g);
        assert!(max_abs((w * w - g).iter()) < 1e-14);
        let eig = to_dmat(&g).symmetric_eigen();
        let d = CMat::from_diagonal(&eig.eigenvalues.map(|l| C64::from(l.sqrt())));
        let w2 = &eig.eigenvectors * d * eig.eigenvectors.adjoint();
        assert!(max_abs((to_dmat(&w) - w2).iter()) < 1e-13);
    }
}

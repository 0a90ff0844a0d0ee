//! Seeded generators for probe vectors, transition operators and subspaces.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::extensions::Extension;
use crate::krein::{IndefiniteSpace, TransitionOperator};
use crate::linalg::{c64, cis, op_norm, CMat, CVec, C64};
use crate::phillips::{DomainVector, LatticeVector, PuncturedSequence};
use crate::tolerance::Tolerances;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex<R: Rng>(rng: &mut R) -> C64 {
    c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn fiber<R: Rng>(rng: &mut R, n: usize) -> CVec {
    CVec::from_iterator(n, (0..n).map(|_| complex(rng)))
}

pub fn matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_iterator(rows, cols, (0..rows * cols).map(|_| complex(rng)))
}

/// Ratio in the open disk of radius `0.9`.
pub fn ratio<R: Rng>(rng: &mut R) -> C64 {
    cis(rng.gen_range(0.0..std::f64::consts::TAU)) * rng.gen_range(0.0..0.9)
}

/// A sequence with `x₀ = 0`: a few entries in `[−4, 4]` and, each with
/// probability one half, a left and a right geometric tail.
pub fn punctured<R: Rng>(rng: &mut R, n: usize) -> PuncturedSequence {
    let mut x = LatticeVector::zero(n);
    for _ in 0..rng.gen_range(1..=4) {
        let mut j: i64 = rng.gen_range(-4..=3);
        if j >= 0 {
            j += 1;
        }
        x.add_entry(j, fiber(rng, n)).expect("dimension");
    }
    if rng.gen_bool(0.5) {
        let start = rng.gen_range(-8..=-1);
        x = x.with_left_tail(start, fiber(rng, n), ratio(rng)).expect("ratio in disk");
    }
    if rng.gen_bool(0.5) {
        let start = rng.gen_range(1..=8);
        x = x.with_right_tail(start, fiber(rng, n), ratio(rng)).expect("ratio in disk");
    }
    PuncturedSequence::new(x).expect("origin avoided")
}

pub fn domain_vector<R: Rng>(rng: &mut R, n: usize) -> DomainVector {
    let x = punctured(rng, n);
    DomainVector::new(x, fiber(rng, n), fiber(rng, n)).expect("dimension")
}

pub fn regular_vector<R: Rng>(rng: &mut R, n: usize) -> DomainVector {
    DomainVector::regular(punctured(rng, n))
}

/// A random vector of `D(A_M)`: random `D(S)` part plus boundary coordinates
/// in `span M`.
pub fn extension_vector<R: Rng>(rng: &mut R, ext: &Extension) -> DomainVector {
    let boundary = ext.boundary_vector(&fiber(rng, 2)).expect("two coefficients");
    DomainVector::new(punctured(rng, 2), boundary.a, boundary.b).expect("dimension")
}

/// `e^{iγ}[[a, b], [−b̄, ā]]` with `|a|² + |b|² = 1`.
pub fn unitary2<R: Rng>(rng: &mut R) -> CMat {
    let t = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
    let a = cis(rng.gen_range(0.0..std::f64::consts::TAU)) * t.cos();
    let b = cis(rng.gen_range(0.0..std::f64::consts::TAU)) * t.sin();
    let g = cis(rng.gen_range(0.0..std::f64::consts::TAU));
    CMat::from_row_slice(2, 2, &[a * g, b * g, -b.conj() * g, a.conj() * g])
}

/// `J = diag(1,…,1,−1,…,−1)` with `p` plus and `m` minus signs.
pub fn diagonal_space(p: usize, m: usize) -> IndefiniteSpace {
    let signs: Vec<f64> = std::iter::repeat_n(1.0, p).chain(std::iter::repeat_n(-1.0, m)).collect();
    IndefiniteSpace::diagonal(&signs).expect("signs")
}

/// A transition operator for `J = diag(I_p, −I_m)`: `T = [[0, X], [X*, 0]]`
/// with `‖X‖` uniform in `(0, 0.95)`.
pub fn transition<R: Rng>(rng: &mut R, sp: &IndefiniteSpace, tol: &Tolerances) -> Result<TransitionOperator> {
    let n = sp.dim();
    let p = (0..n).filter(|&k| sp.j()[(k, k)].re > 0.0).count();
    let m = n - p;
    let mut x = matrix(rng, p, m);
    let s = op_norm(&x);
    if s > 0.0 {
        x *= C64::from(rng.gen_range(0.05..0.95) / s);
    }
    let mut t = CMat::zeros(n, n);
    t.view_mut((0, p), (p, m)).copy_from(&x);
    t.view_mut((p, 0), (m, p)).copy_from(&x.adjoint());
    TransitionOperator::new(t, sp, tol)
}

/// A hypermaximal neutral subspace of the boundary space with metric
/// `diag(1, −1, −1, 1)`: the graph `{p + Up}` of a unitary from the positive
/// coordinates `{0, 3}` to the negative coordinates `{1, 2}`.
pub fn hypermaximal_neutral<R: Rng>(rng: &mut R) -> CMat {
    let u = unitary2(rng);
    let mut m = CMat::zeros(4, 2);
    for k in 0..2 {
        m[([0, 3][k], k)] = c64(1.0, 0.0);
        m[(1, k)] = u[(0, k)];
        m[(2, k)] = u[(1, k)];
    }
    // Mix the columns so the basis is not the graph basis.
    m * (matrix(rng, 2, 2) + CMat::identity(2, 2) * c64(2.0, 0.0))
}

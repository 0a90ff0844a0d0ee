use std::f64::consts::TAU;

use proptest::prelude::*;

use phillips_core::csym::{
    intertwining_residual, solve_stable_c, angle_equation_residuals, verify_csymmetry,
};
use phillips_core::extensions::{
    adjoint_extension, apply_extension, classify_boundary_subspace, classify_spectrum, k_matrix,
    member_of_domain, Extension, KParams, SpectrumClass,
};
use phillips_core::krein::{classify_subspace, SubspaceBasis, SubspaceClass};
use phillips_core::linalg::{c64, max_abs, op_norm, CMat, CVec, C64, IM, ONE};
use phillips_core::phillips::{
    apply_cayley, apply_sstar, apply_symmetric, cayley_preimage, defect_vector, embed_conjugate_defect,
    embed_defect, make_fundamental_symmetry, r_mu, FiberSymmetry, LatticeVector,
};
use phillips_core::random;
use phillips_core::triplet::{characteristic, green_residual, weyl, Triplet};
use phillips_core::Tolerances;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn sigma3_triplet() -> (FiberSymmetry, Triplet) {
    let fs = FiberSymmetry::sigma3();
    let t = Triplet::canonical(&fs).unwrap();
    (fs, t)
}

/// `J₊ = U σ₃ U*`, `J₋ = V σ₃ V*` for seeded unitaries.
fn rotated_symmetry(seed: u64) -> FiberSymmetry {
    let mut rng = random::rng(seed);
    let s = CMat::from_diagonal(&CVec::from_vec(vec![ONE, -ONE]));
    let herm = |m: CMat| (&m + m.adjoint()).scale(0.5);
    let (u, v) = (random::unitary2(&mut rng), random::unitary2(&mut rng));
    FiberSymmetry::new(herm(&v * &s * v.adjoint()), herm(&u * &s * u.adjoint())).unwrap()
}

fn random_tailed(seed: u64) -> LatticeVector {
    let mut rng = random::rng(seed);
    let x = random::punctured(&mut rng, 2);
    let mut v = x.as_lattice().clone();
    v.add_entry(0, random::fiber(&mut rng, 2)).unwrap();
    v
}

fn params() -> impl Strategy<Value = KParams> {
    (-3.0f64..3.0, 0.0f64..TAU, 0.0f64..TAU, 0.0f64..TAU)
        .prop_map(|(z, p, w, x)| KParams::new(z, p, w, x).unwrap())
}

fn upper() -> impl Strategy<Value = C64> {
    (-5.0f64..5.0, 0.05f64..5.0).prop_map(|(re, im)| c64(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn shift_is_isometric(seed in any::<u64>()) {
        let v = random_tailed(seed);
        let n = v.norm();
        prop_assert!((v.shift(1).norm() - n).abs() <= 1e-12 * n.max(1.0));
        prop_assert!((v.window_inner(&v, 400).re - v.norm_sq()).abs() <= 1e-10 * v.norm_sq().max(1.0));
    }

    #[test]
    fn cayley_transform_is_symmetric(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (f, af) = apply_cayley(&random_tailed(s1));
        let (g, ag) = apply_cayley(&random_tailed(s2));
        let lhs = af.inner(&g);
        let rhs = f.inner(&ag);
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn preimage_inverts_cayley(seed in any::<u64>()) {
        let x = random_tailed(seed);
        let (f, _) = apply_cayley(&x);
        let back = cayley_preimage(&f, &tol()).unwrap();
        prop_assert!((&back - &x).norm() < 1e-11 * x.norm().max(1.0));
    }

    #[test]
    fn s_is_symmetric(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (mut r1, mut r2) = (random::rng(s1), random::rng(s2));
        let u = random::regular_vector(&mut r1, 2);
        let v = random::regular_vector(&mut r2, 2);
        let (su, sv) = (apply_sstar(&u), apply_sstar(&v));
        let gap = su.inner(&v.materialize()) - u.materialize().inner(&sv);
        prop_assert!(gap.norm() < 1e-10);
    }

    #[test]
    fn lattice_route_agrees_with_sstar_on_domain(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let u = random::regular_vector(&mut rng, 2);
        let direct = apply_symmetric(&u.materialize(), &tol()).unwrap();
        prop_assert!((&direct - &apply_sstar(&u)).norm() < 1e-10);
    }

    #[test]
    fn r_maps_upper_half_plane_into_disk(re in -10.0f64..10.0, im in -10.0f64..10.0) {
        prop_assume!(im.abs() > 1e-6);
        let r = r_mu(c64(re, im)).unwrap();
        prop_assert_eq!(r.norm() < 1.0, im > 0.0);
    }

    #[test]
    fn defect_vectors_are_eigenvectors_of_sstar(mu in upper(), seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let x = random::fiber(&mut rng, 2);
        let r = r_mu(mu).unwrap();

        let psi = embed_defect(mu, &x).unwrap();
        let f = defect_vector(mu, &(&x * (ONE - r.conj()))).unwrap();
        prop_assert!((&psi.materialize() - &f).norm() <= 1e-12 * f.norm());
        let res = (&apply_sstar(&psi) - &f.scaled(mu.conj())).norm() / f.norm();
        prop_assert!(res < 1e-12);

        let phi = embed_conjugate_defect(mu, &x).unwrap();
        let g = defect_vector(mu.conj(), &(&x * (ONE - r))).unwrap();
        prop_assert!((&phi.materialize() - &g).norm() <= 1e-12 * g.norm());
        let res = (&apply_sstar(&phi) - &g.scaled(mu)).norm() / g.norm();
        prop_assert!(res < 1e-12);
    }

    #[test]
    fn green_identity_with_rotated_bases(s1 in any::<u64>(), s2 in any::<u64>(), a in 0.0f64..TAU, b in 0.0f64..TAU) {
        let fs = rotated_symmetry(s1);
        let q = CMat::from_diagonal(&CVec::from_vec(vec![phillips_core::linalg::cis(a), phillips_core::linalg::cis(b)]));
        let t = Triplet::with_q(&fs, q).unwrap();
        let mut rng = random::rng(s2);
        let psi = random::domain_vector(&mut rng, 2);
        let phi = random::domain_vector(&mut rng, 2);
        prop_assert!(green_residual(&psi, &phi, &t) < 1e-10);
    }

    #[test]
    fn weyl_is_constant_and_matches_characteristic(mu in upper(), s in any::<u64>()) {
        let t = Triplet::canonical(&rotated_symmetry(s)).unwrap();
        let m = weyl(mu, &t).unwrap();
        let i2 = CMat::identity(2, 2) * IM;
        prop_assert!(max_abs((&m - &i2).iter()) < 1e-12);
        let theta = characteristic(mu, &t).unwrap();
        // Θ = (M − iI)(M + iI)⁻¹; M + iI = 2iI is invertible.
        let via_m = (&m - &i2) * (&m + &i2).try_inverse().unwrap();
        prop_assert!(max_abs((theta - via_m).iter()) < 1e-12);
    }

    #[test]
    fn fundamental_symmetry_commutes_with_s(s1 in any::<u64>(), s2 in any::<u64>()) {
        let j = make_fundamental_symmetry(&rotated_symmetry(s1));
        let mut rng = random::rng(s2);
        let x = random::punctured(&mut rng, 2);
        let r = phillips_core::phillips::s_commutator(|v| j.apply(v), &x, &tol()).unwrap();
        prop_assert!(r < 1e-12 * x.as_lattice().norm().max(1.0) * 10.0);
    }

    #[test]
    fn regular_extensions_are_hypermaximal_neutral_and_real(p in params()) {
        let (_, t) = sigma3_triplet();
        let ext = Extension::regular(p, &t, &tol()).unwrap();
        let sp = phillips_core::extensions::boundary_space();
        let basis = SubspaceBasis::new(ext.m_basis().clone(), &tol()).unwrap();
        prop_assert_eq!(classify_subspace(&basis, &sp, &tol()).unwrap(), SubspaceClass::HypermaximalNeutral);
        prop_assert_eq!(classify_spectrum(&ext, &tol()), SpectrumClass::RealLine);
    }

    #[test]
    fn extensions_are_j_self_adjoint(p in params(), k1 in 0.0f64..TAU, k2 in 0.0f64..TAU, seed in any::<u64>()) {
        let (fs, t) = sigma3_triplet();
        let j = make_fundamental_symmetry(&fs);
        let mut rng = random::rng(seed);
        for ext in [Extension::regular(p, &t, &tol()).unwrap(), Extension::degenerate(k1, k2, &t).unwrap()] {
            let psi = random::extension_vector(&mut rng, &ext).normalized();
            let phi = random::extension_vector(&mut rng, &ext).normalized();
            prop_assert!(member_of_domain(&ext, &psi, &tol()));
            let a_psi = apply_extension(&ext, &psi, &tol()).unwrap();
            let a_phi = apply_extension(&ext, &phi, &tol()).unwrap();
            let gap = j.apply(&a_psi).inner(&phi.materialize()) - j.apply(&psi.materialize()).inner(&a_phi);
            prop_assert!(gap.norm() < 1e-10);
        }
    }

    #[test]
    fn adjoint_is_an_involution_fixing_only_unitary_k(p in params()) {
        let (_, t) = sigma3_triplet();
        let ext = Extension::regular(p, &t, &tol()).unwrap();
        let adj = adjoint_extension(&ext, &tol()).unwrap();
        prop_assert_eq!(adjoint_extension(&adj, &tol()).unwrap(), ext.clone());
        let k = k_matrix(&p);
        let s = CMat::from_diagonal(&CVec::from_vec(vec![ONE, -ONE]));
        let ka = adj.k().unwrap();
        prop_assert!(max_abs((ka - &s * &k * &s).iter()) < 1e-12 * p.zeta.cosh());
        prop_assert!(op_norm(&(ka * k.adjoint() - CMat::identity(2, 2))) < 1e-10 * p.zeta.cosh().powi(2));
        let fixed = max_abs((ka - &k).iter()) < 1e-12;
        prop_assert_eq!(fixed, p.zeta == 0.0);
    }

    #[test]
    fn canonical_c_solves_the_system(p in params()) {
        let (_, t) = sigma3_triplet();
        let sol = solve_stable_c(&p, &t);
        let (a, b) = angle_equation_residuals(&p, &sol);
        prop_assert!(a.norm() < 1e-12 && b.norm() < 1e-12);
        prop_assert!(intertwining_residual(&k_matrix(&p), &sol) < 1e-12 * p.zeta.cosh().powi(2));
    }

    #[test]
    fn subspace_classifier_matches_block_determinant(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (_, t) = sigma3_triplet();
        let m = if seed % 2 == 0 {
            random::hypermaximal_neutral(&mut rng)
        } else {
            let (a, b) = (random::complex(&mut rng).arg(), random::complex(&mut rng).arg());
            phillips_core::extensions::degenerate_subspace(a, b) * (random::matrix(&mut rng, 2, 2) + CMat::identity(2, 2) * c64(2.0, 0.0))
        };
        // Brute force: M meets 𝔑_{−i} iff its α-block is singular.
        let alpha = m.rows(2, 2).into_owned();
        let scale = alpha.norm().max(1.0).powi(2);
        let singular = (alpha[(0, 0)] * alpha[(1, 1)] - alpha[(0, 1)] * alpha[(1, 0)]).norm() < 1e-10 * scale;
        let expected = if singular { SpectrumClass::WholePlane } else { SpectrumClass::RealLine };
        prop_assert_eq!(classify_boundary_subspace(&m, &tol()), expected);
        let ext = Extension::from_subspace(&m, &t, &tol()).unwrap();
        prop_assert_eq!(classify_spectrum(&ext, &tol()), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stable_c_verifies_everywhere(p in params(), seed in any::<u64>()) {
        let (fs, t) = sigma3_triplet();
        let ext = Extension::regular(p, &t, &tol()).unwrap();
        let r = verify_csymmetry(&ext, &solve_stable_c(&p, &t), &fs, &tol(), seed, 3).unwrap();
        prop_assert!(r.passed(&tol()), "{:?}", r);
    }

    #[test]
    fn adjoint_has_a_stable_c_symmetry(p in params(), seed in any::<u64>()) {
        let (fs, t) = sigma3_triplet();
        let adj = adjoint_extension(&Extension::regular(p, &t, &tol()).unwrap(), &tol()).unwrap();
        let sol = solve_stable_c(adj.params().unwrap(), &t);
        prop_assert!(verify_csymmetry(&adj, &sol, &fs, &tol(), seed, 3).unwrap().passed(&tol()));
    }
}

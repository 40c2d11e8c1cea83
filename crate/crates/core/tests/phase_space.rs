mod common;

use common::{expr, hsc_lift, kahler_lift, rng, sample_point, FAMILIES};
use nalgebra::DMatrix;
use natlift_core::lift::{MuSpec, Perturbation};
use natlift_core::phase::{energy_density, inverse_system_residual, max_abs};
use natlift_core::{closedness_residual, nijenhuis_at, LambdaSpec, NaturalLift, SpaceForm};

fn identity(dim: usize) -> DMatrix<f64> {
    DMatrix::identity(dim, dim)
}

#[test]
fn energy_density_on_sphere_chart() {
    // phi = 1 + |x|^2/4 = 1.025, t = phi^2 |p|^2 / 2.
    let b = SpaceForm::new(2, 1.0).geometry_at(&[0.3, -0.1]).unwrap();
    let t = energy_density(&b, &[0.4, 0.2]);
    assert!((t - 0.1050625).abs() < 1e-15);
}

#[test]
fn flat_diagonal_structure_is_standard() {
    let lift = kahler_lift(2, 0.0, "1", "0", "1");
    let lp = lift.at(&[0.1, 0.2], &[0.3, -0.4]).unwrap();
    let s = lp.structure().unwrap();
    let dim = 4;
    assert_eq!(s.g.assemble(), identity(dim));
    assert_eq!(s.h.assemble(), identity(dim));
    let j = s.j.assemble();
    assert_eq!(&j * &j, -identity(dim));
    assert_eq!(s.j.j1, ndarray::Array2::<f64>::eye(2));
    assert_eq!(s.j.j3, ndarray::Array2::<f64>::zeros((2, 2)));
}

#[test]
fn zero_covector_drops_quadratic_terms() {
    let lift = kahler_lift(3, 1.0, "1+t", "t", "1/(1+t)");
    let lp = lift.at(&[0.2, -0.1, 0.3], &[0.0; 3]).unwrap();
    assert_eq!(lp.point.t, 0.0);
    let s = lp.structure().unwrap();
    let g = &lp.point.base.g;
    assert_eq!(s.j.j1, g * 1.0);
    assert_eq!(s.j.j3, ndarray::Array2::<f64>::zeros((3, 3)));
    assert_eq!(s.g.g1, g * lp.coeffs.c1.value());
    assert_eq!(s.g.g3, ndarray::Array2::<f64>::zeros((3, 3)));
}

#[test]
fn algebraic_identities_at_random_points() {
    let mut r = rng(31);
    for (c, k) in [(1.0, 4.0), (-1.0, -4.0)] {
        for n in [2, 3] {
            for (a1, a3) in FAMILIES {
                let lift = hsc_lift(n, c, a1, a3);
                let generic = kahler_lift(n, c, a1, a3, "1/(1+t)");
                assert_eq!(lift.lambda, LambdaSpec::ConstantHsc { k });
                for l in [&lift, &generic] {
                    for _ in 0..20 {
                        let (q, p) = sample_point(&mut r, &l.space, 0.4);
                        let lp = l.at(&q, &p).unwrap();
                        let s = lp.structure().unwrap();
                        let (j, g, h) = (s.j.assemble(), s.g.assemble(), s.h.assemble());
                        let id = identity(2 * n);
                        assert!(max_abs(&(&j * &j + &id)) < 1e-11);
                        assert!(max_abs(&(j.transpose() * &g * &j - &g)) < 1e-11);
                        assert!(inverse_system_residual(&s.g, &s.h) < 1e-11);
                        let dense = g.clone().try_inverse().unwrap();
                        assert!(max_abs(&(&dense - &h)) < 1e-10);
                        let om = &g * &j;
                        for i in 0..n {
                            for jj in 0..n {
                                let closed = s.omega[[i, jj]];
                                assert!((om[(n + i, jj)] - closed).abs() < 1e-11);
                                assert!((om[(jj, n + i)] + closed).abs() < 1e-11);
                            }
                        }
                        assert!(max_abs(&(&om + om.transpose())) < 1e-11);
                    }
                }
            }
        }
    }
}

#[test]
fn nijenhuis_vanishes_for_integrable_structures() {
    let flat = kahler_lift(2, 0.0, "1", "0", "1");
    assert!(nijenhuis_at(&flat, &[0.1, 0.2], &[0.3, 0.1], 1e-4).unwrap() < 1e-7);
    let mut r = rng(32);
    for n in [2, 3] {
        let lift = kahler_lift(n, 1.0, "1+t", "t", "1/(1+t)");
        for _ in 0..5 {
            let (q, p) = sample_point(&mut r, &lift.space, 0.3);
            assert!(nijenhuis_at(&lift, &q, &p, 1e-4).unwrap() < 1e-5);
        }
    }
}

#[test]
fn nijenhuis_detects_perturbed_coefficients() {
    let p = [0.3, -0.25, 0.2];
    let q = [0.1, 0.2, -0.1];
    for pert in [
        Perturbation { b1_offset: 0.05, ..Default::default() },
        Perturbation { a3_offset: 0.05, ..Default::default() },
    ] {
        let lift = kahler_lift(3, 1.0, "1+t", "t", "1/(1+t)").with_perturbation(pert);
        assert!(nijenhuis_at(&lift, &q, &p, 1e-4).unwrap() > 1e-3, "{pert:?}");
    }
}

#[test]
fn closedness_tracks_kahler_condition() {
    let (q, p) = ([0.2, -0.1], [0.3, 0.25]);
    let trivial = kahler_lift(2, 1.0, "1", "0", "1");
    assert!(closedness_residual(&trivial, &q, &p, 1e-4).unwrap() < 1e-6);
    let kahler = kahler_lift(2, 1.0, "1", "0", "1+t").with_mu(MuSpec::Profile(expr("1")));
    assert!(closedness_residual(&kahler, &q, &p, 1e-4).unwrap() < 1e-6);
    let broken = kahler_lift(2, 1.0, "1", "0", "1+t").with_mu(MuSpec::Profile(expr("0")));
    assert!(closedness_residual(&broken, &q, &p, 1e-4).unwrap() > 1e-2);
}

#[test]
fn lifts_reject_invalid_regions() {
    let lift = NaturalLift::new(
        SpaceForm::new(2, 1.0),
        expr("1"),
        expr("0"),
        LambdaSpec::ConstantHsc { k: 4.0 },
    );
    // t = 0.5 hits the vanishing integrability denominator 1 - 2ct.
    assert!(lift.at(&[0.0, 0.0], &[1.0, 0.0]).is_err());
    assert!(lift.at(&[0.0, 0.0, 0.0], &[1.0, 0.0]).is_err());
}

mod common;

use common::{hsc_lift, kahler_lift, rng, sample_point, FAMILIES};
use natlift_core::lift::Perturbation;
use natlift_core::oracle::{model_curvature_full, vertical_fd};
use natlift_core::{
    connection_block_derivatives, connection_blocks, curvature_blocks, curvature_difference,
    model_curvature_blocks, BlockName, CurvatureBlocks, Error, NaturalLift,
};

fn flatten3(a: &ndarray::Array3<f64>) -> Vec<f64> {
    a.iter().copied().collect()
}

#[test]
fn flat_bundle_has_no_connection_or_curvature() {
    let lift = kahler_lift(3, 0.0, "1", "0", "1");
    let lp = lift.at(&[0.1, -0.2, 0.3], &[0.4, 0.1, -0.3]).unwrap();
    let conn = connection_blocks(&lp.point, &lp.coeffs);
    for (_, a) in conn.named() {
        assert!(a.iter().all(|v| *v == 0.0));
    }
    let d = connection_block_derivatives(&lp.point, &lp.coeffs);
    for (_, a) in d.named() {
        assert!(a.iter().all(|v| *v == 0.0));
    }
    assert_eq!(curvature_blocks(&lp.point, &lp.coeffs).max_abs(), 0.0);
    let s = lp.structure().unwrap();
    assert_eq!(model_curvature_blocks(&s, 0.0).max_abs(), 0.0);
}

#[test]
fn horizontal_vertical_block_vanishes_at_zero_covector() {
    let lift = kahler_lift(3, 1.0, "1+t/2", "t/2", "1/(1+t)");
    let lp = lift.at(&[0.2, 0.1, -0.3], &[0.0; 3]).unwrap();
    let conn = connection_blocks(&lp.point, &lp.coeffs);
    assert!(conn.s.iter().all(|v| *v == 0.0));
    assert!(conn.st.iter().all(|v| *v == 0.0));
}

#[test]
fn connection_symmetries() {
    let mut r = rng(41);
    let lift = kahler_lift(3, -1.0, "1+t/2", "t/2", "1/(1+t)");
    for _ in 0..10 {
        let (q, p) = sample_point(&mut r, &lift.space, 0.4);
        let lp = lift.at(&q, &p).unwrap();
        let c = connection_blocks(&lp.point, &lp.coeffs);
        let b = &lp.point.base;
        // The bracket [delta_i, delta_j] = p_a R^a_hij dp^h is vertical, so
        // the vertical part S is symmetric only up to that term.
        for ((i, j, h), v) in c.s.indexed_iter() {
            let r0: f64 = (0..3).map(|a| lp.point.p[a] * b.riemann[[a, h, i, j]]).sum();
            assert!((v - c.s[[j, i, h]] - r0).abs() < 1e-12);
            assert!((c.st[[i, j, h]] - c.st[[j, i, h]]).abs() < 1e-12);
            assert!((c.q[[i, j, h]] - c.q[[j, i, h]]).abs() < 1e-12);
            assert!((c.qt[[i, j, h]] - c.qt[[j, i, h]]).abs() < 1e-12);
        }
    }
}

#[test]
fn vertical_derivatives_match_finite_differences() {
    let mut r = rng(42);
    for (c, n) in [(1.0, 2), (1.0, 3), (-1.0, 3)] {
        for (a1, a3) in FAMILIES {
            let lift = kahler_lift(n, c, a1, a3, "1/(1+t)");
            for k in 0..3 {
                let (q, mut p) = sample_point(&mut r, &lift.space, 0.35);
                if k == 0 {
                    p = vec![0.0; n];
                }
                let lp = lift.at(&q, &p).unwrap();
                let closed = connection_block_derivatives(&lp.point, &lp.coeffs);
                let names = ["Q", "Qt", "P", "Pt", "S", "St"];
                for (idx, name) in names.iter().enumerate() {
                    let f = |pp: &[f64]| {
                        let lp = lift.at(&q, pp)?;
                        let b = connection_blocks(&lp.point, &lp.coeffs);
                        Ok(flatten3(b.named()[idx].1))
                    };
                    let fd = vertical_fd(f, &p, 1e-4).unwrap();
                    let arr = closed.named()[idx].1;
                    for ((m, a, b, h), v) in arr.indexed_iter() {
                        let e = fd[m][(a * n + b) * n + h];
                        assert!((v - e).abs() < 1e-5, "{name} c={c} n={n}: {v} vs {e}");
                    }
                }
            }
        }
    }
}

#[test]
fn curvature_blocks_are_antisymmetric() {
    let mut r = rng(43);
    let lift = kahler_lift(3, 1.0, "1+t/2", "t/2", "1/(1+t)");
    for _ in 0..5 {
        let (q, p) = sample_point(&mut r, &lift.space, 0.4);
        let lp = lift.at(&q, &p).unwrap();
        let k = curvature_blocks(&lp.point, &lp.coeffs);
        for b in [
            BlockName::Qqqq,
            BlockName::Qqqp,
            BlockName::Qqpq,
            BlockName::Qqpp,
            BlockName::Ppqq,
            BlockName::Ppqp,
            BlockName::Pppq,
            BlockName::Pppp,
        ] {
            for ((i, j, kk, h), v) in k.block(b).indexed_iter() {
                assert!((v + k.block(b)[[j, i, kk, h]]).abs() < 1e-11, "{b}");
            }
        }
    }
}

#[test]
fn model_blocks_agree_with_invariant_assembly() {
    let mut r = rng(44);
    for (c, n) in [(1.0, 2), (-1.0, 3)] {
        for (a1, a3) in FAMILIES {
            let lift = kahler_lift(n, c, a1, a3, "1/(1+t)");
            for _ in 0..5 {
                let (q, p) = sample_point(&mut r, &lift.space, 0.4);
                let s = lift.at(&q, &p).unwrap().structure().unwrap();
                for k in [4.0 * c, 1.7] {
                    let blocks = model_curvature_blocks(&s, k);
                    let full = model_curvature_full(&s.g.assemble(), &s.j.assemble(), k);
                    assert!(blocks.max_abs_diff(&CurvatureBlocks::from_full(&full)) < 1e-11);
                }
            }
        }
    }
}

#[test]
fn constant_holomorphic_curvature_theorem() {
    let mut r = rng(45);
    for (c, k) in [(1.0, 4.0), (-1.0, -4.0)] {
        for n in [2, 3] {
            for (a1, a3) in FAMILIES {
                let lift = hsc_lift(n, c, a1, a3);
                let scaled = lift.clone().with_perturbation(Perturbation {
                    lambda_scale: 1.01,
                    ..Default::default()
                });
                let mut worst_scaled: f64 = f64::INFINITY;
                for _ in 0..25 {
                    let (q, p) = sample_point(&mut r, &lift.space, 0.4);
                    assert!(curvature_difference(&lift, &q, &p, k).unwrap() < 1e-7);
                    let d = curvature_difference(&scaled, &q, &p, k).unwrap();
                    worst_scaled = worst_scaled.min(d);
                }
                assert!(worst_scaled > 1e-3, "c={c} n={n} {a1},{a3}: {worst_scaled}");
            }
        }
    }
}

#[test]
fn diagonal_sphere_example() {
    let lift = hsc_lift(2, 1.0, "1", "0");
    let (q, p) = ([0.25, -0.1], [0.5, 0.3]);
    assert!(curvature_difference(&lift, &q, &p, 4.0).unwrap() < 1e-7);
    let lam1 = kahler_lift(2, 1.0, "1", "0", "1");
    assert!(curvature_difference(&lam1, &q, &p, 4.0).unwrap() > 1e-3);
}

#[test]
fn flat_base_has_no_admissible_lambda() {
    let lift = NaturalLift::new(
        natlift_core::SpaceForm::new(2, 0.0),
        common::expr("1"),
        common::expr("0"),
        natlift_core::LambdaSpec::ConstantHsc { k: 4.0 },
    );
    let err = curvature_difference(&lift, &[0.1, 0.1], &[0.2, 0.2], 4.0).unwrap_err();
    assert_eq!(err, Error::ZeroCurvature);
}

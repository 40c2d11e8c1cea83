mod common;

use common::{hsc_lift, kahler_lift, rng, sample_point, FAMILIES};
use nalgebra::DMatrix;
use natlift_core::oracle::{
    adapted_connection, coordinate_geometry, coordinate_metric, first_bianchi_residual,
    mixed_torsion_residual, oracle_connection, oracle_curvature, split_connection, FrameChange,
    OracleSteps,
};
use natlift_core::phase::max_abs;
use natlift_core::{connection_blocks, curvature_blocks, fd, CurvatureBlocks};
use rand::Rng;

fn join(q: &[f64], p: &[f64]) -> Vec<f64> {
    q.iter().chain(p).copied().collect()
}

#[test]
fn frame_change_is_inverted_exactly() {
    let lift = kahler_lift(3, 1.0, "1+t", "t", "1/(1+t)");
    let lp = lift.at(&[0.2, -0.3, 0.1], &[0.4, 0.1, -0.2]).unwrap();
    let f = FrameChange::at(&lp.point);
    let id = DMatrix::identity(6, 6);
    assert!(max_abs(&(&f.f * &f.f_inv - &id)) < 1e-13);
}

#[test]
fn coordinate_metric_special_cases() {
    let flat = kahler_lift(2, 0.0, "1", "0", "1");
    let g = coordinate_metric(&flat, &[0.1, 0.2, 0.3, 0.4]).unwrap();
    assert_eq!(g, DMatrix::identity(4, 4));

    let lift = kahler_lift(2, 1.0, "1+t", "t", "1/(1+t)");
    let lp = lift.at(&[0.0, 0.0], &[0.3, 0.2]).unwrap();
    let at_origin = coordinate_metric(&lift, &[0.0, 0.0, 0.3, 0.2]).unwrap();
    assert_eq!(at_origin, lp.structure().unwrap().g.assemble());
}

#[test]
fn coordinate_metric_is_congruent_to_frame_blocks() {
    let mut r = rng(51);
    let lift = kahler_lift(3, 1.0, "1+t/2", "t/2", "1/(1+t)");
    for _ in 0..10 {
        let (q, p) = sample_point(&mut r, &lift.space, 0.4);
        let lp = lift.at(&q, &p).unwrap();
        let gc = coordinate_metric(&lift, &join(&q, &p)).unwrap();
        let f = FrameChange::at(&lp.point);
        let back = f.f.transpose() * gc * &f.f;
        assert!(max_abs(&(back - lp.structure().unwrap().g.assemble())) < 1e-12);
    }
}

#[test]
fn oracle_christoffel_is_metric_compatible() {
    let lift = kahler_lift(2, 1.0, "1+t", "t", "1/(1+t)");
    let z = [0.2, -0.1, 0.3, 0.25];
    let geo = coordinate_geometry(&lift, &z, OracleSteps::default(), false).unwrap();
    let dim = 4;
    let dg = fd::gradient(
        |w| coordinate_metric(&lift, w).map(|m| m.transpose().as_slice().to_vec()),
        &z,
        1e-4,
    )
    .unwrap();
    let (g, gm) = (&geo.metric, &geo.christoffel);
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                let mut r = dg[a][b * dim + c];
                for d in 0..dim {
                    r -= gm[[d, a, b]] * g[(d, c)] + gm[[d, a, c]] * g[(b, d)];
                }
                assert!(r.abs() < 1e-6);
                assert!((gm[[a, b, c]] - gm[[a, c, b]]).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn oracle_curvature_self_checks() {
    let lift = hsc_lift(2, 1.0, "1+t/2", "t/2");
    let z = [0.2, -0.1, 0.3, 0.25];
    let geo = coordinate_geometry(&lift, &z, OracleSteps::default(), true).unwrap();
    let r = geo.riemann.unwrap();
    let g = &geo.metric;
    let dim = 4;
    assert!(first_bianchi_residual(&r) < 1e-4);
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                for d in 0..dim {
                    assert!((r[[a, b, c, d]] + r[[a, b, d, c]]).abs() < 1e-12);
                    let low = |x: usize, y: usize| -> f64 {
                        (0..dim).map(|e| g[(x, e)] * r[[e, y, c, d]]).sum()
                    };
                    assert!((low(a, b) + low(b, a)).abs() < 1e-4);
                }
            }
        }
    }
    let flat = kahler_lift(2, 0.0, "1", "0", "1");
    let flat_geo = coordinate_geometry(&flat, &z, OracleSteps::default(), true).unwrap();
    assert!(flat_geo.christoffel.iter().all(|v| v.abs() < 1e-12));
    assert!(flat_geo.riemann.unwrap().iter().all(|v| v.abs() < 1e-9));
}

#[test]
fn frame_round_trip_on_random_tensor() {
    let mut r = rng(52);
    let lift = kahler_lift(3, -1.0, "1+t", "t", "1/(1+t)");
    let lp = lift.at(&[0.3, 0.1, -0.2], &[0.2, 0.5, -0.1]).unwrap();
    let frame = FrameChange::at(&lp.point);
    let dim = 6;
    let t = ndarray::Array4::from_shape_fn((dim, dim, dim, dim), |_| r.random_range(-1.0..1.0));
    let k = frame.tensor13_to_frame(&t);
    // Only blocks antisymmetric in (C, D) survive the 12-block split, so
    // round-trip the antisymmetric part.
    let anti = ndarray::Array4::from_shape_fn((dim, dim, dim, dim), |(a, b, c, d)| {
        0.5 * (k[[a, b, c, d]] - k[[a, b, d, c]])
    });
    let rebuilt = CurvatureBlocks::from_full(&anti).to_full();
    let diff = rebuilt.iter().zip(anti.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(diff < 1e-12);
    let back = frame.tensor13_to_coordinates(&k);
    let diff = back.iter().zip(t.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(diff < 1e-12);

    let identity = FrameChange {
        f: DMatrix::identity(dim, dim),
        f_inv: DMatrix::identity(dim, dim),
    };
    assert_eq!(identity.tensor13_to_frame(&t), t);
}

#[test]
fn closed_form_connection_matches_oracle() {
    let mut r = rng(53);
    for (c, n) in [(1.0, 2), (1.0, 3), (-1.0, 2), (-1.0, 3)] {
        for (a1, a3) in FAMILIES {
            for lift in [hsc_lift(n, c, a1, a3), kahler_lift(n, c, a1, a3, "1/(1+t)")] {
                for _ in 0..2 {
                    let (q, p) = sample_point(&mut r, &lift.space, 0.4);
                    let lp = lift.at(&q, &p).unwrap();
                    let z = join(&q, &p);
                    let geo = coordinate_geometry(&lift, &z, OracleSteps::default(), false).unwrap();
                    let omega = adapted_connection(&geo.christoffel, &lp.point);
                    assert!(mixed_torsion_residual(&omega, &lp.point) < 1e-6);
                    let oracle = split_connection(&omega, &lp.point);
                    let closed = connection_blocks(&lp.point, &lp.coeffs);
                    assert!(closed.max_abs_diff(&oracle) < 1e-5);
                }
            }
        }
    }
}

#[test]
fn closed_form_curvature_matches_oracle() {
    let mut r = rng(54);
    for (c, n) in [(1.0, 2), (-1.0, 3)] {
        for (a1, a3) in FAMILIES {
            for lift in [hsc_lift(n, c, a1, a3), kahler_lift(n, c, a1, a3, "1/(1+t)")] {
                let (q, p) = sample_point(&mut r, &lift.space, 0.4);
                let lp = lift.at(&q, &p).unwrap();
                let oracle = oracle_curvature(&lift, &q, &p, OracleSteps::default()).unwrap();
                let closed = curvature_blocks(&lp.point, &lp.coeffs);
                for (b, d) in closed.block_diffs(&oracle) {
                    assert!(d < 1e-4, "{b}: {d}");
                }
            }
        }
    }
}

#[test]
fn oracle_connection_matches_on_non_kahler_metric() {
    // The connection formulas only use the block structure of G, so they
    // must also hold when mu is not lambda'.
    let lift = kahler_lift(2, 1.0, "1+t", "t", "1/(1+t)")
        .with_mu(natlift_core::MuSpec::Profile(common::expr("0.3")));
    let (q, p) = ([0.1, -0.2], [0.3, 0.2]);
    let lp = lift.at(&q, &p).unwrap();
    let oracle = oracle_connection(&lift, &q, &p, OracleSteps::default()).unwrap();
    assert!(connection_blocks(&lp.point, &lp.coeffs).max_abs_diff(&oracle) < 1e-5);
}

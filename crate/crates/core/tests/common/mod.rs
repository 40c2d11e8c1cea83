#![allow(dead_code)]

use natlift_core::{LambdaSpec, NaturalLift, ScalarExpr, SpaceForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn expr(s: &str) -> ScalarExpr {
    s.parse().unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Base point uniform in the ball of radius 0.5 and a covector scaled to a
/// uniformly drawn energy density in `[0, t_max]`.
pub fn sample_point(rng: &mut ChaCha8Rng, space: &SpaceForm, t_max: f64) -> (Vec<f64>, Vec<f64>) {
    let n = space.dim();
    let q = loop {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-0.5..0.5)).collect();
        if x.iter().map(|v| v * v).sum::<f64>() <= 0.25 {
            break x;
        }
    };
    let dir: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let t: f64 = rng.random_range(0.0..t_max);
    let base = space.geometry_at(&q).unwrap();
    let d = ndarray::Array1::from(dir.clone());
    let norm = d.dot(&base.g_inv.dot(&d));
    let s = (2.0 * t / norm).sqrt();
    (q, dir.iter().map(|v| v * s).collect())
}

pub fn hsc_lift(n: usize, c: f64, a1: &str, a3: &str) -> NaturalLift {
    NaturalLift::new(SpaceForm::new(n, c), expr(a1), expr(a3), LambdaSpec::ConstantHsc { k: 4.0 * c })
}

pub fn kahler_lift(n: usize, c: f64, a1: &str, a3: &str, lambda: &str) -> NaturalLift {
    NaturalLift::new(SpaceForm::new(n, c), expr(a1), expr(a3), LambdaSpec::Profile(expr(lambda)))
}

/// The three profile families of the scenario matrix.
pub const FAMILIES: [(&str, &str); 3] = [("1", "0"), ("1 + t/2", "0"), ("1 + t/2", "t/2")];

//! Seeded sampling of phase-space points.
//!
//! Base points are uniform in the ball `|x| <= 0.5`, shrunk to 90% of the
//! chart radius on hyperbolic bases with a small chart. Covector directions
//! are uniform on the sphere and the length is chosen so that the energy
//! density is uniform in `[0, t_max]`.

use natlift_core::SpaceForm;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

pub const BALL_RADIUS: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplePoint {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub t: f64,
}

fn radius(space: &SpaceForm) -> f64 {
    let limit = space.chart_radius_sq();
    if limit.is_finite() {
        BALL_RADIUS.min(0.9 * limit.sqrt())
    } else {
        BALL_RADIUS
    }
}

pub fn sample_points(space: &SpaceForm, t_max: f64, count: usize, seed: u64) -> Vec<SamplePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = space.dim();
    let r = radius(space);
    (0..count)
        .map(|_| {
            let q = loop {
                let x: Vec<f64> = (0..n).map(|_| rng.random_range(-r..=r)).collect();
                if x.iter().map(|v| v * v).sum::<f64>() <= r * r {
                    break x;
                }
            };
            let dir: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let t = if t_max > 0.0 { rng.random_range(0.0..=t_max) } else { 0.0 };
            // g^ij = phi^2 delta^ij in the conformal chart.
            let phi = 1.0 + 0.25 * space.curvature() * q.iter().map(|v| v * v).sum::<f64>();
            let norm_sq = phi * phi * dir.iter().map(|v| v * v).sum::<f64>();
            let scale = (2.0 * t / norm_sq).sqrt();
            SamplePoint { p: dir.iter().map(|v| v * scale).collect(), q, t }
        })
        .collect()
}

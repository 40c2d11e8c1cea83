//! Integrability and closedness by finite differences in coordinates.

use nalgebra::DMatrix;
use ndarray::Array3;

use crate::error::Result;
use crate::fd;
use crate::lift::NaturalLift;
use crate::oracle::{coordinate_complex_structure, coordinate_fundamental_form};
use crate::tensor::t3;

fn flatten(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}

fn joined(q: &[f64], p: &[f64]) -> Vec<f64> {
    q.iter().chain(p).copied().collect()
}

/// Nijenhuis tensor of the lifted structure in coordinates,
/// `n[[a, b, c]] = N^a_bc` with
/// `N^a_bc = J^d_b d_d J^a_c - J^d_c d_d J^a_b - J^a_d (d_b J^d_c - d_c J^d_b)`.
pub fn nijenhuis_tensor(lift: &NaturalLift, q: &[f64], p: &[f64], h: f64) -> Result<Array3<f64>> {
    let z = joined(q, p);
    let dim = z.len();
    let j = coordinate_complex_structure(lift, &z)?;
    let dj = fd::gradient(|w| coordinate_complex_structure(lift, w).map(|m| flatten(&m)), &z, h)?;
    let d = |e: usize, a: usize, b: usize| dj[e][a * dim + b];
    Ok(t3(dim, |a, b, c| {
        (0..dim)
            .map(|e| {
                j[(e, b)] * d(e, a, c) - j[(e, c)] * d(e, a, b)
                    - j[(a, e)] * (d(b, e, c) - d(c, e, b))
            })
            .sum()
    }))
}

/// `(d Omega)_abc = d_a Omega_bc + d_b Omega_ca + d_c Omega_ab` in
/// coordinates; returns its largest absolute entry.
pub fn closedness_residual(lift: &NaturalLift, q: &[f64], p: &[f64], h: f64) -> Result<f64> {
    let z = joined(q, p);
    let dim = z.len();
    let dom = fd::gradient(|w| coordinate_fundamental_form(lift, w).map(|m| flatten(&m)), &z, h)?;
    let d = |e: usize, a: usize, b: usize| dom[e][a * dim + b];
    let mut worst: f64 = 0.0;
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                worst = worst.max((d(a, b, c) + d(b, c, a) + d(c, a, b)).abs());
            }
        }
    }
    Ok(worst)
}

/// Largest absolute component of the Nijenhuis tensor at `(q, p)`.
pub fn nijenhuis_at(lift: &NaturalLift, q: &[f64], p: &[f64], h: f64) -> Result<f64> {
    Ok(crate::tensor::max_abs(nijenhuis_tensor(lift, q, p, h)?.iter()))
}

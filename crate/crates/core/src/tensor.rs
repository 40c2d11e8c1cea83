//! Small dense index helpers shared by the curvature code.

use ndarray::{Array3, Array4};

#[inline]
pub fn kd(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

pub fn t3<F: Fn(usize, usize, usize) -> f64>(n: usize, f: F) -> Array3<f64> {
    Array3::from_shape_fn((n, n, n), |(a, b, c)| f(a, b, c))
}

pub fn t4<F: Fn(usize, usize, usize, usize) -> f64>(n: usize, f: F) -> Array4<f64> {
    Array4::from_shape_fn((n, n, n, n), |(a, b, c, d)| f(a, b, c, d))
}

/// `sum_l f(l)` over `0..n`.
#[inline]
pub fn sum<F: Fn(usize) -> f64>(n: usize, f: F) -> f64 {
    (0..n).map(f).sum()
}

pub fn max_abs<'a, I: IntoIterator<Item = &'a f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
}

pub fn max_abs_diff<'a, I, J>(a: I, b: J) -> f64
where
    I: IntoIterator<Item = &'a f64>,
    J: IntoIterator<Item = &'a f64>,
{
    a.into_iter()
        .zip(b)
        .fold(0.0, |acc: f64, (x, y)| acc.max((x - y).abs()))
}

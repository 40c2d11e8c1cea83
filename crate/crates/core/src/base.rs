//! Space forms in the conformally flat chart.
//!
//! `g_ij(x) = delta_ij / phi(x)^2` with `phi = 1 + (c/4)|x|^2` has constant
//! sectional curvature `c`. Writing `g = exp(2 sigma) delta` with
//! `sigma = -ln phi`, the Christoffel symbols are
//! `Gamma^k_ij = delta^k_i s_j + delta^k_j s_i - delta_ij s_k` where
//! `s_i = d_i sigma`, and their derivatives follow from the Hessian of
//! `sigma`. Everything here is closed form.
//!
//! Array layouts: `gamma[[k, i, j]] = Gamma^k_ij`,
//! `dgamma[[l, k, i, j]] = d_l Gamma^k_ij`,
//! `riemann[[h, k, i, j]] = R^h_kij` with `R(d_i, d_j) d_k = R^h_kij d_h`.

use ndarray::{Array1, Array2, Array3, Array4};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceForm {
    n: usize,
    c: f64,
}

impl SpaceForm {
    /// Panics if `n < 2`.
    pub fn new(n: usize, c: f64) -> Self {
        assert!(n >= 2, "space form dimension must be at least 2");
        Self { n, c }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn curvature(&self) -> f64 {
        self.c
    }

    /// Squared chart radius limit `-4/c` for `c < 0`, infinite otherwise.
    pub fn chart_radius_sq(&self) -> f64 {
        if self.c < 0.0 {
            -4.0 / self.c
        } else {
            f64::INFINITY
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().map(|v| v * v).sum::<f64>() < self.chart_radius_sq()
    }

    pub fn metric(&self, x: &[f64]) -> Result<Array2<f64>> {
        let phi = self.conformal_factor(x)?;
        Ok(Array2::eye(self.n) / (phi * phi))
    }

    fn conformal_factor(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let limit = self.chart_radius_sq();
        if r2 >= limit {
            return Err(Error::OutsideChart { radius_sq: r2, limit });
        }
        Ok(1.0 + 0.25 * self.c * r2)
    }

    pub fn geometry_at(&self, x: &[f64]) -> Result<BaseGeometry> {
        let n = self.n;
        let c = self.c;
        let phi = self.conformal_factor(x)?;
        let g = Array2::eye(n) / (phi * phi);
        let g_inv = Array2::eye(n) * (phi * phi);

        let s: Vec<f64> = x.iter().map(|xi| -0.5 * c * xi / phi).collect();
        let hess = Array2::from_shape_fn((n, n), |(i, j)| {
            let diag = if i == j { -0.5 * c / phi } else { 0.0 };
            diag + 0.25 * c * c * x[i] * x[j] / (phi * phi)
        });
        let kd = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };

        let gamma = Array3::from_shape_fn((n, n, n), |(k, i, j)| {
            kd(k, i) * s[j] + kd(k, j) * s[i] - kd(i, j) * s[k]
        });
        let dgamma = Array4::from_shape_fn((n, n, n, n), |(l, k, i, j)| {
            kd(k, i) * hess[[j, l]] + kd(k, j) * hess[[i, l]] - kd(i, j) * hess[[k, l]]
        });
        // R^k_hij = d_i Gamma^k_jh - d_j Gamma^k_ih + Gamma^k_il Gamma^l_jh - Gamma^k_jl Gamma^l_ih
        let riemann = Array4::from_shape_fn((n, n, n, n), |(k, h, i, j)| {
            let mut r = dgamma[[i, k, j, h]] - dgamma[[j, k, i, h]];
            for l in 0..n {
                r += gamma[[k, i, l]] * gamma[[l, j, h]] - gamma[[k, j, l]] * gamma[[l, i, h]];
            }
            r
        });

        Ok(BaseGeometry {
            x: Array1::from(x.to_vec()),
            c,
            g,
            g_inv,
            gamma,
            dgamma,
            riemann,
        })
    }

    /// Max deviation of the curvature tensor from `c (delta^h_i g_kj - delta^h_j g_ki)`.
    pub fn sectional_curvature_check(&self, x: &[f64]) -> Result<f64> {
        Ok(self.geometry_at(x)?.constant_curvature_residual())
    }
}

#[derive(Debug, Clone)]
pub struct BaseGeometry {
    pub x: Array1<f64>,
    pub c: f64,
    pub g: Array2<f64>,
    pub g_inv: Array2<f64>,
    pub gamma: Array3<f64>,
    pub dgamma: Array4<f64>,
    pub riemann: Array4<f64>,
}

impl BaseGeometry {
    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn constant_curvature_residual(&self) -> f64 {
        let n = self.dim();
        let kd = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        let mut worst: f64 = 0.0;
        for ((h, k, i, j), r) in self.riemann.indexed_iter() {
            let model = self.c * (kd(h, i) * self.g[[k, j]] - kd(h, j) * self.g[[k, i]]);
            worst = worst.max((r - model).abs());
        }
        debug_assert_eq!(self.riemann.len(), n.pow(4));
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_space_is_trivial() {
        let geo = SpaceForm::new(3, 0.0).geometry_at(&[0.4, -1.0, 2.0]).unwrap();
        assert_eq!(geo.g, Array2::eye(3));
        assert!(geo.gamma.iter().all(|v| *v == 0.0));
        assert!(geo.riemann.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn sphere_at_origin() {
        let geo = SpaceForm::new(2, 1.0).geometry_at(&[0.0, 0.0]).unwrap();
        assert_eq!(geo.g, Array2::eye(2));
        assert!(geo.gamma.iter().all(|v| *v == 0.0));
        assert_eq!(geo.constant_curvature_residual(), 0.0);
    }

    #[test]
    fn metric_inverse_and_symmetry() {
        let geo = SpaceForm::new(3, -1.0).geometry_at(&[0.2, 0.1, 0.05]).unwrap();
        let prod = geo.g.dot(&geo.g_inv);
        for ((i, j), v) in prod.indexed_iter() {
            assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-13);
        }
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(geo.gamma[[k, i, j]], geo.gamma[[k, j, i]]);
                }
            }
        }
        assert!(geo.constant_curvature_residual() < 1e-10);
    }

    #[test]
    fn hyperbolic_chart_boundary() {
        let h = SpaceForm::new(2, -1.0);
        assert!(matches!(h.geometry_at(&[2.0, 0.0]), Err(Error::OutsideChart { .. })));
        assert!(h.geometry_at(&[1.9, 0.0]).is_ok());
        assert!(matches!(
            h.geometry_at(&[0.1, 0.0, 0.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
    }
}

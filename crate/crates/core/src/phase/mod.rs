//! Lifted structures on the cotangent bundle at a single point.
//!
//! Conventions for the adapted frame `{delta_i = d/dq^i + Gamma0_ih d/dp_h,
//! dp^i = d/dp_i}`:
//!
//! * assembled `2n x 2n` matrices order the horizontal vectors first and the
//!   vertical ones second;
//! * a matrix of a `(1,1)` tensor has the image of basis vector `B` in
//!   column `B`;
//! * `j1[[i, j]] = J1_ij`, `j2[[i, j]] = J2^ij`,
//!   `j3[[i, j]] = J3^i_j = a3 delta + b3 g0^i p_j`,
//!   `j4[[j, i]] = J4^j_i = a4 delta + b4 g0^j p_i`, so that
//!   `J delta_i = J1_ij dp^j + J4^j_i delta_j` and
//!   `J dp^i = J3^i_j dp^j - J2^ij delta_j`;
//! * `g3[[i, j]] = G(delta_i, dp^j) = c3 delta + d3 p_i g0^j`;
//! * `h3[[k, l]] = H3^k_l = e3 delta + f3 g0^k p_l` is the (horizontal k,
//!   vertical l) entry of the inverse matrix;
//! * `omega[[i, j]] = Omega(dp^i, delta_j) = lambda delta + mu g0^i p_j`
//!   where `Omega(X, Y) = G(X, JY)`.

mod checks;

pub use checks::{closedness_residual, nijenhuis_at, nijenhuis_tensor};

use nalgebra::DMatrix;
use ndarray::{Array1, Array2};

use crate::base::BaseGeometry;
use crate::error::{Error, Result};
use crate::profiles::{CoefficientBundle, MetricCoefficients};

/// A covector over a base point together with the derived contractions.
#[derive(Debug, Clone)]
pub struct PhasePoint {
    pub base: BaseGeometry,
    pub p: Array1<f64>,
    /// Energy density `t = g^ik p_i p_k / 2`.
    pub t: f64,
    /// Raised covector `g0^i = g^ih p_h`.
    pub g0: Array1<f64>,
    /// `gamma0[[i, h]] = p_k Gamma^k_ih`.
    pub gamma0: Array2<f64>,
}

pub fn energy_density(base: &BaseGeometry, p: &[f64]) -> f64 {
    let p = ndarray::ArrayView1::from(p);
    0.5 * p.dot(&base.g_inv.dot(&p))
}

impl PhasePoint {
    pub fn new(base: BaseGeometry, p: &[f64]) -> Result<Self> {
        let n = base.dim();
        if p.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.len() });
        }
        let p = Array1::from(p.to_vec());
        let g0 = base.g_inv.dot(&p);
        let t = 0.5 * p.dot(&g0);
        let gamma0 = Array2::from_shape_fn((n, n), |(i, h)| {
            (0..n).map(|k| p[k] * base.gamma[[k, i, h]]).sum()
        });
        Ok(Self { base, p, t, g0, gamma0 })
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    fn outer(&self, u: &Array1<f64>, v: &Array1<f64>) -> Array2<f64> {
        let n = self.dim();
        Array2::from_shape_fn((n, n), |(i, j)| u[i] * v[j])
    }
}

#[derive(Debug, Clone)]
pub struct JBlocks {
    pub j1: Array2<f64>,
    pub j2: Array2<f64>,
    pub j3: Array2<f64>,
    pub j4: Array2<f64>,
}

#[derive(Debug, Clone)]
pub struct GBlocks {
    pub g1: Array2<f64>,
    pub g2: Array2<f64>,
    pub g3: Array2<f64>,
}

#[derive(Debug, Clone)]
pub struct HBlocks {
    pub h1: Array2<f64>,
    pub h2: Array2<f64>,
    pub h3: Array2<f64>,
}

/// Everything algebraic at a point: `J`, `G`, its inverse, and `Omega`.
#[derive(Debug, Clone)]
pub struct StructureBlocks {
    pub j: JBlocks,
    pub g: GBlocks,
    pub h: HBlocks,
    pub omega: Array2<f64>,
}

impl StructureBlocks {
    pub fn build(
        point: &PhasePoint,
        bundle: &CoefficientBundle,
        coeffs: &MetricCoefficients,
    ) -> Result<Self> {
        Ok(Self {
            j: build_j(point, bundle),
            g: build_g(point, coeffs)?,
            h: invert_g(point, coeffs),
            omega: fundamental_form(point, coeffs),
        })
    }
}

pub fn build_j(point: &PhasePoint, bundle: &CoefficientBundle) -> JBlocks {
    let b = &point.base;
    let pp = point.outer(&point.p, &point.p);
    let gg = point.outer(&point.g0, &point.g0);
    let gp = point.outer(&point.g0, &point.p);
    let id = Array2::<f64>::eye(point.dim());
    JBlocks {
        j1: &b.g * bundle.a1.value() + &pp * bundle.b1.value(),
        j2: &b.g_inv * bundle.a2.value() + &gg * bundle.b2.value(),
        j3: &id * bundle.a3.value() + &gp * bundle.b3.value(),
        j4: &id * bundle.a4.value() + &gp * bundle.b4.value(),
    }
}

pub fn build_g(point: &PhasePoint, coeffs: &MetricCoefficients) -> Result<GBlocks> {
    let b = &point.base;
    let blocks = GBlocks {
        g1: &b.g * coeffs.c1.value() + point.outer(&point.p, &point.p) * coeffs.d1.value(),
        g2: &b.g_inv * coeffs.c2.value() + point.outer(&point.g0, &point.g0) * coeffs.d2.value(),
        g3: Array2::<f64>::eye(point.dim()) * coeffs.c3.value()
            + point.outer(&point.p, &point.g0) * coeffs.d3.value(),
    };
    if blocks.assemble().cholesky().is_none() {
        return Err(Error::IndefiniteMetric {
            detail: format!("assembled metric has a nonpositive eigenvalue at t = {}", point.t),
        });
    }
    Ok(blocks)
}

pub fn invert_g(point: &PhasePoint, coeffs: &MetricCoefficients) -> HBlocks {
    let b = &point.base;
    HBlocks {
        h1: &b.g_inv * coeffs.e1.value() + point.outer(&point.g0, &point.g0) * coeffs.f1.value(),
        h2: &b.g * coeffs.e2.value() + point.outer(&point.p, &point.p) * coeffs.f2.value(),
        h3: Array2::<f64>::eye(point.dim()) * coeffs.e3.value()
            + point.outer(&point.g0, &point.p) * coeffs.f3.value(),
    }
}

pub fn fundamental_form(point: &PhasePoint, coeffs: &MetricCoefficients) -> Array2<f64> {
    Array2::<f64>::eye(point.dim()) * coeffs.lambda.value()
        + point.outer(&point.g0, &point.p) * coeffs.mu.value()
}

fn block_matrix(tl: &Array2<f64>, tr: &Array2<f64>, bl: &Array2<f64>, br: &Array2<f64>) -> DMatrix<f64> {
    let n = tl.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |r, c| match (r < n, c < n) {
        (true, true) => tl[[r, c]],
        (true, false) => tr[[r, c - n]],
        (false, true) => bl[[r - n, c]],
        (false, false) => br[[r - n, c - n]],
    })
}

impl JBlocks {
    pub fn assemble(&self) -> DMatrix<f64> {
        block_matrix(
            &self.j4,
            &(-self.j2.t().to_owned()),
            &self.j1.t().to_owned(),
            &self.j3.t().to_owned(),
        )
    }
}

impl GBlocks {
    pub fn assemble(&self) -> DMatrix<f64> {
        block_matrix(&self.g1, &self.g3, &self.g3.t().to_owned(), &self.g2)
    }
}

impl HBlocks {
    pub fn assemble(&self) -> DMatrix<f64> {
        block_matrix(&self.h1, &self.h3, &self.h3.t().to_owned(), &self.h2)
    }
}

/// Max residual of the four block equations `G H = I`, written out block by
/// block as `G1 H1 + G3 H3^T = I`, `G1 H3 + G3 H2 = 0`,
/// `G3^T H1 + G2 H3^T = 0`, `G3^T H3 + G2 H2 = I`.
pub fn inverse_system_residual(g: &GBlocks, h: &HBlocks) -> f64 {
    let n = g.g1.nrows();
    let id = Array2::<f64>::eye(n);
    let h3t = h.h3.t();
    let g3t = g.g3.t();
    let eqs = [
        g.g1.dot(&h.h1) + g.g3.dot(&h3t) - &id,
        g.g1.dot(&h.h3) + g.g3.dot(&h.h2),
        g3t.dot(&h.h1) + g.g2.dot(&h3t),
        g3t.dot(&h.h3) + g.g2.dot(&h.h2) - &id,
    ];
    eqs.iter()
        .flat_map(|m| m.iter())
        .fold(0.0, |acc: f64, v| acc.max(v.abs()))
}

/// `Omega(X, Y) = G(X, JY)` as an assembled matrix.
pub fn omega_matrix(g: &DMatrix<f64>, j: &DMatrix<f64>) -> DMatrix<f64> {
    g * j
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::SpaceForm;
    use crate::profiles::{complex_coefficients, metric_coefficients};

    fn e(s: &str) -> crate::expr::ScalarExpr {
        s.parse().unwrap()
    }

    #[test]
    fn energy_density_examples() {
        let flat = SpaceForm::new(2, 0.0).geometry_at(&[0.3, 0.1]).unwrap();
        assert_eq!(energy_density(&flat, &[1.0, 0.0]), 0.5);
        let sphere = SpaceForm::new(2, 1.0).geometry_at(&[0.3, -0.1]).unwrap();
        assert_eq!(energy_density(&sphere, &[0.0, 0.0]), 0.0);
    }

    #[test]
    fn flat_diagonal_structure_is_standard() {
        let base = SpaceForm::new(2, 0.0).geometry_at(&[0.1, 0.2]).unwrap();
        let pt = PhasePoint::new(base, &[0.3, -0.4]).unwrap();
        let bundle = complex_coefficients(&e("1"), &e("0"), 0.0, pt.t).unwrap();
        let coeffs = metric_coefficients(&bundle, &e("1")).unwrap();
        let s = StructureBlocks::build(&pt, &bundle, &coeffs).unwrap();
        assert_eq!(s.j.j1, Array2::eye(2));
        assert_eq!(s.j.j2, Array2::eye(2));
        assert!(s.j.j3.iter().chain(s.j.j4.iter()).all(|v| *v == 0.0));
        assert_eq!(s.g.assemble(), DMatrix::identity(4, 4));
        assert_eq!(s.h.h1, Array2::eye(2));
        assert_eq!(s.omega, Array2::eye(2));
        let j = s.j.assemble();
        assert_eq!(&j * &j, -DMatrix::identity(4, 4));
    }

    #[test]
    fn zero_covector_drops_quadratic_terms() {
        let base = SpaceForm::new(3, 1.0).geometry_at(&[0.2, 0.1, -0.3]).unwrap();
        let g = base.g.clone();
        let pt = PhasePoint::new(base, &[0.0; 3]).unwrap();
        assert_eq!(pt.t, 0.0);
        let bundle = complex_coefficients(&e("1+t"), &e("0.5+t"), 1.0, 0.0).unwrap();
        let coeffs = metric_coefficients(&bundle, &e("2")).unwrap();
        let s = StructureBlocks::build(&pt, &bundle, &coeffs).unwrap();
        assert_eq!(s.j.j1, &g * 1.0);
        assert_eq!(s.j.j3, Array2::eye(3) * 0.5);
        assert_eq!(s.g.g1, &g * 2.0);
        assert_eq!(s.g.g3, Array2::eye(3) * 1.0);
    }

    #[test]
    fn indefinite_metric_rejected() {
        let base = SpaceForm::new(2, 0.0).geometry_at(&[0.0, 0.0]).unwrap();
        let pt = PhasePoint::new(base, &[1.0, 0.0]).unwrap();
        let bundle = complex_coefficients(&e("1"), &e("0"), 0.0, pt.t).unwrap();
        let mut coeffs = metric_coefficients(&bundle, &e("1")).unwrap();
        coeffs.c1 = crate::jet::Jet::constant(-1.0);
        assert!(matches!(build_g(&pt, &coeffs), Err(Error::IndefiniteMetric { .. })));
    }
}

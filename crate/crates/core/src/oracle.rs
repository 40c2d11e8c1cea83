//! Independent reference for the connection and curvature.
//!
//! The oracle never touches the closed-form connection. It assembles the
//! lifted metric in plain coordinates `(q^1..q^n, p_1..p_n)`, obtains the
//! Christoffel symbols and the Riemann tensor by finite differences, and
//! only then changes to the adapted frame so the result can be compared
//! block by block.

use nalgebra::DMatrix;
use ndarray::{Array3, Array4, Axis};

use crate::connection::{connection_blocks, ConnectionBlocks, ConnectionDerivatives, CurvatureBlocks};
use crate::error::{Error, Result};
use crate::fd;
use crate::lift::NaturalLift;
use crate::phase::PhasePoint;
use crate::tensor::t3;

/// Finite-difference steps used by the oracle. Second derivatives use a
/// larger step so that round-off (which grows like `eps / h^2`) stays below
/// the extrapolated truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSteps {
    pub gradient: f64,
    pub hessian: f64,
}

impl Default for OracleSteps {
    fn default() -> Self {
        Self { gradient: fd::DEFAULT_STEP, hessian: 1e-3 }
    }
}

/// Change of basis between coordinate vectors and the adapted frame. Column
/// `B` of `f` holds the coordinate components of the frame vector `E_B`.
#[derive(Debug, Clone)]
pub struct FrameChange {
    pub f: DMatrix<f64>,
    pub f_inv: DMatrix<f64>,
}

impl FrameChange {
    pub fn at(point: &PhasePoint) -> Self {
        let n = point.dim();
        let mut f = DMatrix::identity(2 * n, 2 * n);
        let mut f_inv = DMatrix::identity(2 * n, 2 * n);
        for h in 0..n {
            for i in 0..n {
                f[(n + h, i)] = point.gamma0[[i, h]];
                f_inv[(n + h, i)] = -point.gamma0[[i, h]];
            }
        }
        Self { f, f_inv }
    }

    /// `out[a]` is the derivative of `f` along coordinate `a`.
    pub fn derivatives(point: &PhasePoint) -> Vec<DMatrix<f64>> {
        let n = point.dim();
        let b = &point.base;
        let mut out = vec![DMatrix::zeros(2 * n, 2 * n); 2 * n];
        for h in 0..n {
            for i in 0..n {
                for l in 0..n {
                    out[l][(n + h, i)] = (0..n).map(|k| point.p[k] * b.dgamma[[l, k, i, h]]).sum();
                }
                for m in 0..n {
                    out[n + m][(n + h, i)] = b.gamma[[m, i, h]];
                }
            }
        }
        out
    }

    /// Coordinate matrix of a bilinear form given in the frame.
    pub fn form_to_coordinates(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        self.f_inv.transpose() * m * &self.f_inv
    }

    /// Coordinate matrix of an endomorphism given in the frame.
    pub fn endomorphism_to_coordinates(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        &self.f * m * &self.f_inv
    }

    /// `K^A_BCD = (F^-1)^A_a R^a_bcd F^b_B F^c_C F^d_D`.
    pub fn tensor13_to_frame(&self, r: &Array4<f64>) -> Array4<f64> {
        transform13(r, &self.f_inv, &self.f)
    }

    pub fn tensor13_to_coordinates(&self, k: &Array4<f64>) -> Array4<f64> {
        transform13(k, &self.f, &self.f_inv)
    }
}

fn transform13(r: &Array4<f64>, up: &DMatrix<f64>, down: &DMatrix<f64>) -> Array4<f64> {
    let dim = r.shape()[0];
    let mut cur = r.clone();
    for axis in 0..4 {
        let mut next = Array4::<f64>::zeros((dim, dim, dim, dim));
        for ((a, b, c, d), out) in next.indexed_iter_mut() {
            let idx = [a, b, c, d];
            let mut s = 0.0;
            for e in 0..dim {
                let mut src = idx;
                src[axis] = e;
                let w = if axis == 0 { up[(idx[0], e)] } else { down[(e, idx[axis])] };
                s += w * cur[src];
            }
            *out = s;
        }
        cur = next;
    }
    cur
}

fn split(z: &[f64]) -> (&[f64], &[f64]) {
    z.split_at(z.len() / 2)
}

fn flatten(m: &DMatrix<f64>) -> Vec<f64> {
    // Row-major so that index `a * dim + b` is entry `(a, b)`.
    m.transpose().as_slice().to_vec()
}

/// Lifted metric in coordinates at `z = (q, p)`.
pub fn coordinate_metric(lift: &NaturalLift, z: &[f64]) -> Result<DMatrix<f64>> {
    let (q, p) = split(z);
    let lp = lift.at(q, p)?;
    let s = lp.structure()?;
    Ok(FrameChange::at(&lp.point).form_to_coordinates(&s.g.assemble()))
}

/// Lifted almost complex structure in coordinates at `z = (q, p)`.
pub fn coordinate_complex_structure(lift: &NaturalLift, z: &[f64]) -> Result<DMatrix<f64>> {
    let (q, p) = split(z);
    let lp = lift.at(q, p)?;
    let s = lp.structure()?;
    Ok(FrameChange::at(&lp.point).endomorphism_to_coordinates(&s.j.assemble()))
}

/// `Omega(X, Y) = G(X, JY)` in coordinates at `z = (q, p)`.
pub fn coordinate_fundamental_form(lift: &NaturalLift, z: &[f64]) -> Result<DMatrix<f64>> {
    let (q, p) = split(z);
    let lp = lift.at(q, p)?;
    let s = lp.structure()?;
    let om = s.g.assemble() * s.j.assemble();
    Ok(FrameChange::at(&lp.point).form_to_coordinates(&om))
}

/// Coordinate Levi-Civita data: `christoffel[[a, b, c]] = Gamma^a_bc`
/// (`nabla_{d_b} d_c = Gamma^a_bc d_a`) and, when requested,
/// `riemann[[a, b, c, d]] = R^a_bcd` with `R(d_c, d_d) d_b = R^a_bcd d_a`.
#[derive(Debug, Clone)]
pub struct CoordinateGeometry {
    pub metric: DMatrix<f64>,
    pub christoffel: Array3<f64>,
    pub riemann: Option<Array4<f64>>,
}

fn inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    m.clone().try_inverse().ok_or_else(|| Error::IndefiniteMetric {
        detail: "coordinate metric is singular".into(),
    })
}

pub fn coordinate_geometry(
    lift: &NaturalLift,
    z: &[f64],
    steps: OracleSteps,
    with_curvature: bool,
) -> Result<CoordinateGeometry> {
    let dim = z.len();
    let metric_fn = |w: &[f64]| coordinate_metric(lift, w).map(|m| flatten(&m));
    let g = coordinate_metric(lift, z)?;
    let gi = inverse(&g)?;
    let dg_flat = fd::gradient(metric_fn, z, steps.gradient)?;
    let dg = |e: usize, a: usize, b: usize| dg_flat[e][a * dim + b];

    // l[[d, b, c]] = (d_b G_dc + d_c G_db - d_d G_bc) / 2
    let l = t3(dim, |d, b, c| 0.5 * (dg(b, d, c) + dg(c, d, b) - dg(d, b, c)));
    let christoffel = t3(dim, |a, b, c| (0..dim).map(|d| gi[(a, d)] * l[[d, b, c]]).sum());

    let riemann = if with_curvature {
        let ddg_flat = fd::hessian(metric_fn, z, steps.hessian)?;
        let ddg = |e: usize, f: usize, a: usize, b: usize| ddg_flat[e][f][a * dim + b];
        // d_e G^-1 = -G^-1 (d_e G) G^-1
        let dgi: Vec<DMatrix<f64>> = (0..dim)
            .map(|e| {
                let dge = DMatrix::from_fn(dim, dim, |a, b| dg(e, a, b));
                -(&gi * dge * &gi)
            })
            .collect();
        let dgamma = Array4::<f64>::from_shape_fn((dim, dim, dim, dim), |(e, a, b, c)| {
            (0..dim)
                .map(|d| {
                    let dl = 0.5 * (ddg(e, b, d, c) + ddg(e, c, d, b) - ddg(e, d, b, c));
                    dgi[e][(a, d)] * l[[d, b, c]] + gi[(a, d)] * dl
                })
                .sum()
        });
        let gm = &christoffel;
        Some(Array4::from_shape_fn((dim, dim, dim, dim), |(a, b, c, d)| {
            let mut r = dgamma[[c, a, d, b]] - dgamma[[d, a, c, b]];
            for e in 0..dim {
                r += gm[[a, c, e]] * gm[[e, d, b]] - gm[[a, d, e]] * gm[[e, c, b]];
            }
            r
        }))
    } else {
        None
    };
    Ok(CoordinateGeometry { metric: g, christoffel, riemann })
}

/// Connection coefficients in the adapted frame:
/// `omega[[C, A, B]]` with `nabla_{E_A} E_B = omega^C_AB E_C`.
pub fn adapted_connection(christoffel: &Array3<f64>, point: &PhasePoint) -> Array3<f64> {
    let dim = 2 * point.dim();
    let frame = FrameChange::at(point);
    let df = FrameChange::derivatives(point);
    let (f, fi) = (&frame.f, &frame.f_inv);
    // inner[[c, A, B]] = F^a_A (d_a F^c_B + Gamma^c_ad F^d_B)
    let inner = t3(dim, |c, a_, b_| {
        (0..dim)
            .map(|a| {
                let gf: f64 = (0..dim).map(|d| christoffel[[c, a, d]] * f[(d, b_)]).sum();
                f[(a, a_)] * (df[a][(c, b_)] + gf)
            })
            .sum()
    });
    t3(dim, |cc, a_, b_| (0..dim).map(|c| fi[(cc, c)] * inner[[c, a_, b_]]).sum())
}

/// Splits adapted-frame connection coefficients into the six families.
pub fn split_connection(omega: &Array3<f64>, point: &PhasePoint) -> ConnectionBlocks {
    let n = point.dim();
    let gamma = &point.base.gamma;
    ConnectionBlocks {
        q: t3(n, |i, j, h| omega[[n + h, n + i, n + j]]),
        qt: t3(n, |i, j, h| omega[[h, n + i, n + j]]),
        p: t3(n, |j, i, h| omega[[h, n + i, j]]),
        pt: t3(n, |j, i, h| omega[[n + h, n + i, j]]),
        s: t3(n, |i, j, h| omega[[n + h, i, j]]),
        st: t3(n, |i, j, h| omega[[h, i, j]] - gamma[[h, i, j]]),
    }
}

/// Largest violation of torsion freeness in the mixed families:
/// `nabla_{delta_i} dp^j - nabla_{dp^j} delta_i = -Gamma^j_ih dp^h`.
pub fn mixed_torsion_residual(omega: &Array3<f64>, point: &PhasePoint) -> f64 {
    let n = point.dim();
    let gamma = &point.base.gamma;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for h in 0..n {
                let hor = omega[[h, i, n + j]] - omega[[h, n + j, i]];
                let ver = omega[[n + h, i, n + j]] - omega[[n + h, n + j, i]] + gamma[[j, i, h]];
                worst = worst.max(hor.abs()).max(ver.abs());
            }
        }
    }
    worst
}

/// Max of `|R^a_bcd + R^a_cdb + R^a_dbc|`.
pub fn first_bianchi_residual(r: &Array4<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for ((a, b, c, d), v) in r.indexed_iter() {
        worst = worst.max((v + r[[a, c, d, b]] + r[[a, d, b, c]]).abs());
    }
    worst
}

/// Reference connection blocks at `(q, p)`.
pub fn oracle_connection(
    lift: &NaturalLift,
    q: &[f64],
    p: &[f64],
    steps: OracleSteps,
) -> Result<ConnectionBlocks> {
    let z: Vec<f64> = q.iter().chain(p).copied().collect();
    let lp = lift.at(q, p)?;
    let geo = coordinate_geometry(lift, &z, steps, false)?;
    let omega = adapted_connection(&geo.christoffel, &lp.point);
    Ok(split_connection(&omega, &lp.point))
}

/// Reference curvature blocks at `(q, p)`.
pub fn oracle_curvature(
    lift: &NaturalLift,
    q: &[f64],
    p: &[f64],
    steps: OracleSteps,
) -> Result<CurvatureBlocks> {
    let z: Vec<f64> = q.iter().chain(p).copied().collect();
    let lp = lift.at(q, p)?;
    let geo = coordinate_geometry(lift, &z, steps, true)?;
    let r = geo.riemann.expect("curvature requested");
    let k = FrameChange::at(&lp.point).tensor13_to_frame(&r);
    Ok(CurvatureBlocks::from_full(&k))
}

/// The model tensor assembled directly from the `2n x 2n` matrices of `G`
/// and `J` in the frame, as `k[[A, B, C, D]]` with
/// `K0(E_C, E_D) E_B = k^A_BCD E_A`.
pub fn model_curvature_full(g: &DMatrix<f64>, j: &DMatrix<f64>, k: f64) -> Array4<f64> {
    let dim = g.nrows();
    let jtg = j.transpose() * g;
    let gj = g * j;
    let q = k / 4.0;
    let kd = crate::tensor::kd;
    Array4::from_shape_fn((dim, dim, dim, dim), |(a, b, c, d)| {
        q * (g[(d, b)] * kd(a, c) - g[(c, b)] * kd(a, d) + jtg[(d, b)] * j[(a, c)]
            - jtg[(c, b)] * j[(a, d)]
            + 2.0 * gj[(c, d)] * j[(a, b)])
    })
}

/// Vertical derivatives of any point-wise block function by finite
/// differences in `p`. `out[[m, ...]]` differentiates along `p_m`.
pub fn vertical_fd<F>(f: F, p: &[f64], h: f64) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    fd::gradient(f, p, h)
}

/// Vertical derivatives of the closed-form connection blocks by finite
/// differences in `p`, laid out like [`ConnectionDerivatives`].
pub fn connection_derivatives_fd(
    lift: &NaturalLift,
    q: &[f64],
    p: &[f64],
    h: f64,
) -> Result<ConnectionDerivatives> {
    let n = p.len();
    let family = |idx: usize| -> Result<Array4<f64>> {
        let f = |pp: &[f64]| -> Result<Vec<f64>> {
            let lp = lift.at(q, pp)?;
            let b = connection_blocks(&lp.point, &lp.coeffs);
            Ok(b.named()[idx].1.iter().copied().collect())
        };
        let d = vertical_fd(f, p, h)?;
        let mut out = Array4::<f64>::zeros((n, n, n, n));
        for (m, mut slab) in out.axis_iter_mut(Axis(0)).enumerate() {
            for (dst, src) in slab.iter_mut().zip(&d[m]) {
                *dst = *src;
            }
        }
        Ok(out)
    };
    Ok(ConnectionDerivatives {
        q: family(0)?,
        qt: family(1)?,
        p: family(2)?,
        pt: family(3)?,
        s: family(4)?,
        st: family(5)?,
    })
}

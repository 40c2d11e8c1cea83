//! Closed-form Levi-Civita connection and curvature of a lifted metric,
//! written in the adapted frame `{delta_i, dp^i}`.
//!
//! Array layouts (all indices are frame indices):
//!
//! | array | entry           | meaning                                   |
//! |-------|-----------------|-------------------------------------------|
//! | `q`   | `[[i, j, h]]`   | `Q^ij_h`: dp^h part of `nabla_{dp^i} dp^j`  |
//! | `qt`  | `[[i, j, h]]`   | `Qt^ijh`: delta_h part of `nabla_{dp^i} dp^j` |
//! | `p`   | `[[j, i, h]]`   | `P_j^ih`: delta_h part of `nabla_{dp^i} delta_j` |
//! | `pt`  | `[[j, i, h]]`   | `Pt_j^i_h`: dp^h part of `nabla_{dp^i} delta_j` |
//! | `s`   | `[[i, j, h]]`   | `S_ijh`: dp^h part of `nabla_{delta_i} delta_j` |
//! | `st`  | `[[i, j, h]]`   | `St_ij^h`: delta_h part minus `Gamma^h_ij`  |
//!
//! The remaining two families follow from torsion freeness:
//! `nabla_{delta_i} dp^j = nabla_{dp^j} delta_i - Gamma^j_ih dp^h`.
//!
//! Vertical derivatives are stored with the differentiating index first,
//! `dq[[m, i, j, h]] = d/dp_m Q^ij_h`.
//!
//! Curvature blocks use the operator `R(X, Y) Z` and are indexed
//! `[[i, j, k, h]]` with the output component `h` last; the four-letter
//! block name lists the types of `X`, `Y`, `Z` and the output, with `Q`
//! for horizontal and `P` for vertical.

use ndarray::{Array1, Array2, Array3, Array4};

use crate::error::Result;
use crate::jet::Jet;
use crate::lift::NaturalLift;
use crate::phase::{PhasePoint, StructureBlocks};
use crate::profiles::MetricCoefficients;
use crate::tensor::{kd, max_abs, max_abs_diff, sum, t3, t4};

#[derive(Debug, Clone)]
pub struct ConnectionBlocks {
    pub q: Array3<f64>,
    pub qt: Array3<f64>,
    pub p: Array3<f64>,
    pub pt: Array3<f64>,
    pub s: Array3<f64>,
    pub st: Array3<f64>,
}

#[derive(Debug, Clone)]
pub struct ConnectionDerivatives {
    pub q: Array4<f64>,
    pub qt: Array4<f64>,
    pub p: Array4<f64>,
    pub pt: Array4<f64>,
    pub s: Array4<f64>,
    pub st: Array4<f64>,
}

impl ConnectionBlocks {
    pub fn named(&self) -> [(&'static str, &Array3<f64>); 6] {
        [
            ("Q", &self.q),
            ("Qt", &self.qt),
            ("P", &self.p),
            ("Pt", &self.pt),
            ("S", &self.s),
            ("St", &self.st),
        ]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.named()
            .iter()
            .zip(other.named().iter())
            .map(|((_, a), (_, b))| max_abs_diff(a.iter(), b.iter()))
            .fold(0.0, f64::max)
    }
}

impl ConnectionDerivatives {
    pub fn named(&self) -> [(&'static str, &Array4<f64>); 6] {
        [
            ("Q", &self.q),
            ("Qt", &self.qt),
            ("P", &self.p),
            ("Pt", &self.pt),
            ("S", &self.s),
            ("St", &self.st),
        ]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.named()
            .iter()
            .zip(other.named().iter())
            .map(|((_, a), (_, b))| max_abs_diff(a.iter(), b.iter()))
            .fold(0.0, f64::max)
    }
}

/// Identifies one of the twelve independent curvature blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockName {
    Qqqq,
    Qqqp,
    Qqpq,
    Qqpp,
    Ppqq,
    Ppqp,
    Pppq,
    Pppp,
    Pqqq,
    Pqqp,
    Pqpq,
    Pqpp,
}

impl BlockName {
    pub const ALL: [BlockName; 12] = [
        BlockName::Qqqq,
        BlockName::Qqqp,
        BlockName::Qqpq,
        BlockName::Qqpp,
        BlockName::Ppqq,
        BlockName::Ppqp,
        BlockName::Pppq,
        BlockName::Pppp,
        BlockName::Pqqq,
        BlockName::Pqqp,
        BlockName::Pqpq,
        BlockName::Pqpp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BlockName::Qqqq => "QQQQ",
            BlockName::Qqqp => "QQQP",
            BlockName::Qqpq => "QQPQ",
            BlockName::Qqpp => "QQPP",
            BlockName::Ppqq => "PPQQ",
            BlockName::Ppqp => "PPQP",
            BlockName::Pppq => "PPPQ",
            BlockName::Pppp => "PPPP",
            BlockName::Pqqq => "PQQQ",
            BlockName::Pqqp => "PQQP",
            BlockName::Pqpq => "PQPQ",
            BlockName::Pqpp => "PQPP",
        }
    }

    /// Whether `(X, Y, Z, output)` are vertical.
    pub fn vertical_slots(self) -> [bool; 4] {
        let s = self.as_str().as_bytes();
        [s[0] == b'P', s[1] == b'P', s[2] == b'P', s[3] == b'P']
    }
}

impl std::fmt::Display for BlockName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The twelve curvature blocks. The other four mixed families are fixed by
/// antisymmetry in `(X, Y)`.
#[derive(Debug, Clone)]
pub struct CurvatureBlocks {
    pub qqqq: Array4<f64>,
    pub qqqp: Array4<f64>,
    pub qqpq: Array4<f64>,
    pub qqpp: Array4<f64>,
    pub ppqq: Array4<f64>,
    pub ppqp: Array4<f64>,
    pub pppq: Array4<f64>,
    pub pppp: Array4<f64>,
    pub pqqq: Array4<f64>,
    pub pqqp: Array4<f64>,
    pub pqpq: Array4<f64>,
    pub pqpp: Array4<f64>,
}

/// The invariant model tensor has the same block shape.
pub type ModelCurvatureBlocks = CurvatureBlocks;

impl CurvatureBlocks {
    pub fn block(&self, name: BlockName) -> &Array4<f64> {
        match name {
            BlockName::Qqqq => &self.qqqq,
            BlockName::Qqqp => &self.qqqp,
            BlockName::Qqpq => &self.qqpq,
            BlockName::Qqpp => &self.qqpp,
            BlockName::Ppqq => &self.ppqq,
            BlockName::Ppqp => &self.ppqp,
            BlockName::Pppq => &self.pppq,
            BlockName::Pppp => &self.pppp,
            BlockName::Pqqq => &self.pqqq,
            BlockName::Pqqp => &self.pqqp,
            BlockName::Pqpq => &self.pqpq,
            BlockName::Pqpp => &self.pqpp,
        }
    }

    /// Builds the blocks from a function of the block name.
    pub fn from_fn<F: FnMut(BlockName) -> Array4<f64>>(mut f: F) -> Self {
        Self {
            qqqq: f(BlockName::Qqqq),
            qqqp: f(BlockName::Qqqp),
            qqpq: f(BlockName::Qqpq),
            qqpp: f(BlockName::Qqpp),
            ppqq: f(BlockName::Ppqq),
            ppqp: f(BlockName::Ppqp),
            pppq: f(BlockName::Pppq),
            pppp: f(BlockName::Pppp),
            pqqq: f(BlockName::Pqqq),
            pqqp: f(BlockName::Pqqp),
            pqpq: f(BlockName::Pqpq),
            pqpp: f(BlockName::Pqpp),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (BlockName, &Array4<f64>)> {
        BlockName::ALL.into_iter().map(move |b| (b, self.block(b)))
    }

    pub fn dim(&self) -> usize {
        self.qqqq.shape()[0]
    }

    pub fn max_abs(&self) -> f64 {
        self.iter().map(|(_, a)| max_abs(a.iter())).fold(0.0, f64::max)
    }

    pub fn block_diffs(&self, other: &Self) -> Vec<(BlockName, f64)> {
        BlockName::ALL
            .into_iter()
            .map(|b| (b, max_abs_diff(self.block(b).iter(), other.block(b).iter())))
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.block_diffs(other).into_iter().map(|(_, d)| d).fold(0.0, f64::max)
    }

    /// Slices a full `(1,3)` tensor `k[[A, B, C, D]]` (meaning
    /// `R(E_C, E_D) E_B = k^A_BCD E_A` in a frame of size `2n`, horizontal
    /// first) into blocks.
    pub fn from_full(full: &Array4<f64>) -> Self {
        let n = full.shape()[0] / 2;
        Self::from_fn(|b| {
            let [vx, vy, vz, vo] = b.vertical_slots();
            let off = |v: bool| if v { n } else { 0 };
            let (ox, oy, oz, oo) = (off(vx), off(vy), off(vz), off(vo));
            t4(n, |i, j, k, h| full[[oo + h, oz + k, ox + i, oy + j]])
        })
    }

    /// Reassembles the full tensor, filling the four dependent families by
    /// antisymmetry in `(X, Y)`.
    pub fn to_full(&self) -> Array4<f64> {
        let n = self.dim();
        let mut full = Array4::<f64>::zeros((2 * n, 2 * n, 2 * n, 2 * n));
        for (b, arr) in self.iter() {
            let [vx, vy, vz, vo] = b.vertical_slots();
            let off = |v: bool| if v { n } else { 0 };
            let (ox, oy, oz, oo) = (off(vx), off(vy), off(vz), off(vo));
            for ((i, j, k, h), v) in arr.indexed_iter() {
                full[[oo + h, oz + k, ox + i, oy + j]] = *v;
                if vx != vy {
                    full[[oo + h, oz + k, oy + j, ox + i]] = -*v;
                }
            }
        }
        full
    }
}

/// A tensor family `X = alpha S + beta v (x) w` with its first and second
/// vertical derivatives. `kv[[m, j]] = d v_j / dp_m`.
struct Natural {
    x: Array2<f64>,
    dx: Array3<f64>,
    ddx: Array4<f64>,
}

#[allow(clippy::too_many_arguments)]
fn natural(
    alpha: Jet,
    beta: Jet,
    s: &Array2<f64>,
    v: &Array1<f64>,
    w: &Array1<f64>,
    kv: &Array2<f64>,
    kw: &Array2<f64>,
    g0: &Array1<f64>,
    ginv: &Array2<f64>,
) -> Natural {
    let n = g0.len();
    let (a0, a1, a2) = (alpha.value(), alpha.deriv(1), alpha.deriv(2));
    let (b0, b1, b2) = (beta.value(), beta.deriv(1), beta.deriv(2));
    let x = Array2::from_shape_fn((n, n), |(j, k)| a0 * s[[j, k]] + b0 * v[j] * w[k]);
    let dx = t3(n, |i, j, k| {
        a1 * g0[i] * s[[j, k]]
            + b1 * g0[i] * v[j] * w[k]
            + b0 * (kv[[i, j]] * w[k] + v[j] * kw[[i, k]])
    });
    let ddx = t4(n, |m, i, j, k| {
        let vw = v[j] * w[k];
        a2 * g0[m] * g0[i] * s[[j, k]]
            + a1 * ginv[[m, i]] * s[[j, k]]
            + b2 * g0[m] * g0[i] * vw
            + b1 * ginv[[m, i]] * vw
            + b1 * g0[i] * (kv[[m, j]] * w[k] + v[j] * kw[[m, k]])
            + b1 * g0[m] * (kv[[i, j]] * w[k] + v[j] * kw[[i, k]])
            + b0 * (kv[[i, j]] * kw[[m, k]] + kv[[m, j]] * kw[[i, k]])
    });
    Natural { x, dx, ddx }
}

/// Per-point data shared by the connection, its derivatives and the
/// curvature: the metric families, their inverse families and the
/// contracted base curvature.
pub struct ConnectionData {
    n: usize,
    g0: Array1<f64>,
    c3: Jet,
    g1: Natural,
    g2: Natural,
    /// `m3[[j, k]] = G(dp^j, delta_k)`.
    m3: Natural,
    h1: Natural,
    h2: Natural,
    n3: Natural,
    r: Array4<f64>,
    /// `r0[[l, i, j]] = p_a R^a_lij`.
    r0: Array3<f64>,
}

impl ConnectionData {
    pub fn new(point: &PhasePoint, coeffs: &MetricCoefficients) -> Self {
        let n = point.dim();
        let b = &point.base;
        let id = Array2::<f64>::eye(n);
        let (g0, p, g, gi) = (&point.g0, &point.p, &b.g, &b.g_inv);
        let r = b.riemann.clone();
        let r0 = t3(n, |l, i, j| sum(n, |a| p[a] * r[[a, l, i, j]]));
        Self {
            n,
            g0: g0.clone(),
            c3: coeffs.c3,
            g1: natural(coeffs.c1, coeffs.d1, g, p, p, &id, &id, g0, gi),
            g2: natural(coeffs.c2, coeffs.d2, gi, g0, g0, gi, gi, g0, gi),
            m3: natural(coeffs.c3, coeffs.d3, &id, g0, p, gi, &id, g0, gi),
            h1: natural(coeffs.e1, coeffs.f1, gi, g0, g0, gi, gi, g0, gi),
            h2: natural(coeffs.e2, coeffs.f2, g, p, p, &id, &id, g0, gi),
            n3: natural(coeffs.e3, coeffs.f3, &id, g0, p, gi, &id, g0, gi),
            r,
            r0,
        }
    }

    /// `sum_k wd[a,b,k] N3[k,h] + wp[a,b,k] H2[k,h]`.
    fn vert(&self, wd: &Array3<f64>, wp: &Array3<f64>) -> Array3<f64> {
        let (n3, h2) = (&self.n3.x, &self.h2.x);
        t3(self.n, |a, b, h| {
            sum(self.n, |k| wd[[a, b, k]] * n3[[k, h]] + wp[[a, b, k]] * h2[[k, h]])
        })
    }

    /// `sum_k wd[a,b,k] H1[k,h] + wp[a,b,k] N3[h,k]`.
    fn hor(&self, wd: &Array3<f64>, wp: &Array3<f64>) -> Array3<f64> {
        let (n3, h1) = (&self.n3.x, &self.h1.x);
        t3(self.n, |a, b, h| {
            sum(self.n, |k| wd[[a, b, k]] * h1[[k, h]] + wp[[a, b, k]] * n3[[h, k]])
        })
    }

    fn dvert(
        &self,
        (wd, wp): (&Array3<f64>, &Array3<f64>),
        (dwd, dwp): (&Array4<f64>, &Array4<f64>),
    ) -> Array4<f64> {
        let (n3, dn3, h2, dh2) = (&self.n3.x, &self.n3.dx, &self.h2.x, &self.h2.dx);
        t4(self.n, |m, a, b, h| {
            sum(self.n, |k| {
                dwd[[m, a, b, k]] * n3[[k, h]]
                    + wd[[a, b, k]] * dn3[[m, k, h]]
                    + dwp[[m, a, b, k]] * h2[[k, h]]
                    + wp[[a, b, k]] * dh2[[m, k, h]]
            })
        })
    }

    fn dhor(
        &self,
        (wd, wp): (&Array3<f64>, &Array3<f64>),
        (dwd, dwp): (&Array4<f64>, &Array4<f64>),
    ) -> Array4<f64> {
        let (n3, dn3, h1, dh1) = (&self.n3.x, &self.n3.dx, &self.h1.x, &self.h1.dx);
        t4(self.n, |m, a, b, h| {
            sum(self.n, |k| {
                dwd[[m, a, b, k]] * h1[[k, h]]
                    + wd[[a, b, k]] * dh1[[m, k, h]]
                    + dwp[[m, a, b, k]] * n3[[h, k]]
                    + wp[[a, b, k]] * dn3[[m, h, k]]
            })
        })
    }

    /// Lowered pieces `(VQ, WQ, VP, WP, VS, WS)`: the `delta` and `dp`
    /// components of each covariant derivative paired with the metric.
    fn pieces(&self) -> [Array3<f64>; 6] {
        let n = self.n;
        let (a1, a2, a3) = (&self.g1.dx, &self.g2.dx, &self.m3.dx);
        let (r0, g2, c3) = (&self.r0, &self.g2.x, self.c3.value());
        [
            t3(n, |i, j, k| 0.5 * (a3[[i, j, k]] + a3[[j, i, k]])),
            t3(n, |i, j, k| 0.5 * (a2[[i, j, k]] + a2[[j, i, k]] - a2[[k, i, j]])),
            t3(n, |j, i, k| {
                0.5 * (a1[[i, j, k]] - sum(n, |l| r0[[l, j, k]] * g2[[l, i]]))
            }),
            t3(n, |j, i, k| 0.5 * (a3[[i, k, j]] - a3[[k, i, j]])),
            t3(n, |i, j, k| -c3 * r0[[i, j, k]]),
            t3(n, |i, j, k| {
                0.5 * (sum(n, |l| r0[[l, i, j]] * g2[[l, k]]) - a1[[k, i, j]])
            }),
        ]
    }

    fn piece_derivatives(&self) -> [Array4<f64>; 6] {
        let n = self.n;
        let (b1, b2, b3) = (&self.g1.ddx, &self.g2.ddx, &self.m3.ddx);
        let (r, r0, g2, a2) = (&self.r, &self.r0, &self.g2.x, &self.g2.dx);
        let (c3, dc3, g0) = (self.c3.value(), self.c3.deriv(1), &self.g0);
        [
            t4(n, |m, i, j, k| 0.5 * (b3[[m, i, j, k]] + b3[[m, j, i, k]])),
            t4(n, |m, i, j, k| {
                0.5 * (b2[[m, i, j, k]] + b2[[m, j, i, k]] - b2[[m, k, i, j]])
            }),
            t4(n, |m, j, i, k| {
                0.5 * (b1[[m, i, j, k]]
                    - sum(n, |l| r[[m, l, j, k]] * g2[[l, i]] + r0[[l, j, k]] * a2[[m, l, i]]))
            }),
            t4(n, |m, j, i, k| 0.5 * (b3[[m, i, k, j]] - b3[[m, k, i, j]])),
            t4(n, |m, i, j, k| -dc3 * g0[m] * r0[[i, j, k]] - c3 * r[[m, i, j, k]]),
            t4(n, |m, i, j, k| {
                0.5 * (sum(n, |l| r[[m, l, i, j]] * g2[[l, k]] + r0[[l, i, j]] * a2[[m, l, k]])
                    - b1[[m, k, i, j]])
            }),
        ]
    }

    pub fn blocks(&self) -> ConnectionBlocks {
        let [vq, wq, vp, wp, vs, ws] = self.pieces();
        ConnectionBlocks {
            q: self.vert(&vq, &wq),
            qt: self.hor(&vq, &wq),
            p: self.hor(&vp, &wp),
            pt: self.vert(&vp, &wp),
            s: self.vert(&vs, &ws),
            st: self.hor(&vs, &ws),
        }
    }

    pub fn derivatives(&self) -> ConnectionDerivatives {
        let [vq, wq, vp, wp, vs, ws] = self.pieces();
        let [dvq, dwq, dvp, dwp, dvs, dws] = self.piece_derivatives();
        ConnectionDerivatives {
            q: self.dvert((&vq, &wq), (&dvq, &dwq)),
            qt: self.dhor((&vq, &wq), (&dvq, &dwq)),
            p: self.dhor((&vp, &wp), (&dvp, &dwp)),
            pt: self.dvert((&vp, &wp), (&dvp, &dwp)),
            s: self.dvert((&vs, &ws), (&dvs, &dws)),
            st: self.dhor((&vs, &ws), (&dvs, &dws)),
        }
    }

    /// Curvature from the connection, its vertical derivatives and the base
    /// curvature.
    pub fn curvature(&self) -> CurvatureBlocks {
        let c = self.blocks();
        let d = self.derivatives();
        curvature_from_connection(&c, &d, &self.r, &self.r0)
    }
}

pub fn connection_blocks(point: &PhasePoint, coeffs: &MetricCoefficients) -> ConnectionBlocks {
    ConnectionData::new(point, coeffs).blocks()
}

pub fn connection_block_derivatives(
    point: &PhasePoint,
    coeffs: &MetricCoefficients,
) -> ConnectionDerivatives {
    ConnectionData::new(point, coeffs).derivatives()
}

pub fn curvature_blocks(point: &PhasePoint, coeffs: &MetricCoefficients) -> CurvatureBlocks {
    ConnectionData::new(point, coeffs).curvature()
}

fn curvature_from_connection(
    c: &ConnectionBlocks,
    d: &ConnectionDerivatives,
    r: &Array4<f64>,
    r0: &Array3<f64>,
) -> CurvatureBlocks {
    let n = c.q.shape()[0];
    let (q, qt, p, pt, s, st) = (&c.q, &c.qt, &c.p, &c.pt, &c.s, &c.st);
    let (dq, dqt, dp, dpt, ds, dst) = (&d.q, &d.qt, &d.p, &d.pt, &d.s, &d.st);
    CurvatureBlocks::from_fn(|b| match b {
        BlockName::Qqqq => t4(n, |i, j, k, h| {
            r[[h, k, i, j]]
                + sum(n, |l| {
                    st[[j, k, l]] * st[[i, l, h]] + p[[i, l, h]] * s[[j, k, l]]
                        - st[[j, l, h]] * st[[i, k, l]]
                        - p[[j, l, h]] * s[[i, k, l]]
                        - r0[[l, i, j]] * p[[k, l, h]]
                })
        }),
        BlockName::Qqqp => t4(n, |i, j, k, h| {
            sum(n, |l| {
                st[[j, k, l]] * s[[i, l, h]] + pt[[i, l, h]] * s[[j, k, l]]
                    - st[[i, k, l]] * s[[j, l, h]]
                    - pt[[j, l, h]] * s[[i, k, l]]
                    - pt[[k, l, h]] * r0[[l, i, j]]
            })
        }),
        BlockName::Qqpq => t4(n, |i, j, k, h| {
            sum(n, |l| {
                pt[[j, k, l]] * p[[i, l, h]] + p[[j, k, l]] * st[[i, l, h]]
                    - pt[[i, k, l]] * p[[j, l, h]]
                    - p[[i, k, l]] * st[[j, l, h]]
                    - r0[[l, i, j]] * qt[[l, k, h]]
            })
        }),
        BlockName::Qqpp => t4(n, |i, j, k, h| {
            -r[[k, h, i, j]]
                + sum(n, |l| {
                    pt[[j, k, l]] * pt[[i, l, h]] + p[[j, k, l]] * s[[i, l, h]]
                        - pt[[i, k, l]] * pt[[j, l, h]]
                        - p[[i, k, l]] * s[[j, l, h]]
                        - r0[[l, i, j]] * q[[l, k, h]]
                })
        }),
        BlockName::Ppqq => t4(n, |i, j, k, h| {
            dp[[i, k, j, h]] - dp[[j, k, i, h]]
                + sum(n, |l| {
                    pt[[k, j, l]] * qt[[i, l, h]] + p[[k, j, l]] * p[[l, i, h]]
                        - pt[[k, i, l]] * qt[[j, l, h]]
                        - p[[k, i, l]] * p[[l, j, h]]
                })
        }),
        BlockName::Ppqp => t4(n, |i, j, k, h| {
            dpt[[i, k, j, h]] - dpt[[j, k, i, h]]
                + sum(n, |l| {
                    pt[[k, j, l]] * q[[i, l, h]] + p[[k, j, l]] * pt[[l, i, h]]
                        - pt[[k, i, l]] * q[[j, l, h]]
                        - p[[k, i, l]] * pt[[l, j, h]]
                })
        }),
        BlockName::Pppq => t4(n, |i, j, k, h| {
            dqt[[i, j, k, h]] - dqt[[j, i, k, h]]
                + sum(n, |l| {
                    q[[j, k, l]] * qt[[i, l, h]] + qt[[j, k, l]] * p[[l, i, h]]
                        - q[[i, k, l]] * qt[[j, l, h]]
                        - qt[[i, k, l]] * p[[l, j, h]]
                })
        }),
        BlockName::Pppp => t4(n, |i, j, k, h| {
            dq[[i, j, k, h]] - dq[[j, i, k, h]]
                + sum(n, |l| {
                    q[[j, k, l]] * q[[i, l, h]] + qt[[j, k, l]] * pt[[l, i, h]]
                        - q[[i, k, l]] * q[[j, l, h]]
                        - qt[[i, k, l]] * pt[[l, j, h]]
                })
        }),
        BlockName::Pqqq => t4(n, |i, j, k, h| {
            dst[[i, j, k, h]]
                + sum(n, |l| {
                    s[[j, k, l]] * qt[[i, l, h]] + st[[j, k, l]] * p[[l, i, h]]
                        - pt[[k, i, l]] * p[[j, l, h]]
                        - p[[k, i, l]] * st[[j, l, h]]
                })
        }),
        BlockName::Pqqp => t4(n, |i, j, k, h| {
            ds[[i, j, k, h]]
                + sum(n, |l| {
                    s[[j, k, l]] * q[[i, l, h]] + st[[j, k, l]] * pt[[l, i, h]]
                        - pt[[k, i, l]] * pt[[j, l, h]]
                        - p[[k, i, l]] * s[[j, l, h]]
                })
        }),
        BlockName::Pqpq => t4(n, |i, j, k, h| {
            dp[[i, j, k, h]]
                + sum(n, |l| {
                    pt[[j, k, l]] * qt[[i, l, h]] + p[[j, k, l]] * p[[l, i, h]]
                        - q[[i, k, l]] * p[[j, l, h]]
                        - qt[[i, k, l]] * st[[j, l, h]]
                })
        }),
        BlockName::Pqpp => t4(n, |i, j, k, h| {
            dpt[[i, j, k, h]]
                + sum(n, |l| {
                    pt[[j, k, l]] * q[[i, l, h]] + p[[j, k, l]] * pt[[l, i, h]]
                        - q[[i, k, l]] * pt[[j, l, h]]
                        - qt[[i, k, l]] * s[[j, l, h]]
                })
        }),
    })
}

/// Blocks of the model tensor of constant holomorphic sectional curvature
/// `k`, evaluated from the algebraic structure at the point:
///
/// `K0(X,Y)Z = k/4 [G(Y,Z)X - G(X,Z)Y + G(JY,Z)JX - G(JX,Z)JY + 2G(X,JY)JZ]`.
pub fn model_curvature_blocks(s: &StructureBlocks, k: f64) -> ModelCurvatureBlocks {
    let n = s.j.j1.nrows();
    let (j1, j2, j3) = (&s.j.j1, &s.j.j2, &s.j.j3);
    let (g1, g2) = (&s.g.g1, &s.g.g2);
    let m3 = s.g.g3.t().to_owned();
    let mat = |f: &dyn Fn(usize, usize) -> f64| Array2::from_shape_fn((n, n), |(a, b)| f(a, b));
    let x = mat(&|j, k| sum(n, |l| j1[[j, l]] * m3[[l, k]] - j3[[l, j]] * g1[[l, k]]));
    let y = mat(&|j, k| sum(n, |l| j1[[j, l]] * g2[[l, k]] - j3[[l, j]] * m3[[k, l]]));
    let z = mat(&|j, k| sum(n, |l| j3[[j, l]] * m3[[l, k]] - j2[[j, l]] * g1[[l, k]]));
    let w = mat(&|j, k| sum(n, |l| j3[[j, l]] * g2[[l, k]] - j2[[j, l]] * m3[[k, l]]));
    let q = k / 4.0;
    let (x, y, z, w) = (&x, &y, &z, &w);
    let m3 = &m3;
    CurvatureBlocks::from_fn(|b| match b {
        BlockName::Qqqq => t4(n, |i, j, k, h| {
            q * (g1[[j, k]] * kd(h, i) - g1[[i, k]] * kd(h, j) - j3[[h, i]] * x[[j, k]]
                + j3[[h, j]] * x[[i, k]]
                - 2.0 * j3[[h, k]] * x[[j, i]])
        }),
        BlockName::Qqqp => t4(n, |i, j, k, h| {
            q * (j1[[i, h]] * x[[j, k]] - j1[[j, h]] * x[[i, k]] + 2.0 * j1[[k, h]] * x[[j, i]])
        }),
        BlockName::Qqpq => t4(n, |i, j, k, h| {
            q * (m3[[k, j]] * kd(h, i) - m3[[k, i]] * kd(h, j) - j3[[h, i]] * y[[j, k]]
                + j3[[h, j]] * y[[i, k]]
                - 2.0 * j2[[k, h]] * x[[j, i]])
        }),
        BlockName::Qqpp => t4(n, |i, j, k, h| {
            q * (j1[[i, h]] * y[[j, k]] - j1[[j, h]] * y[[i, k]] + 2.0 * j3[[k, h]] * x[[j, i]])
        }),
        BlockName::Ppqq => t4(n, |i, j, k, h| {
            q * (-j2[[i, h]] * z[[j, k]] + j2[[j, h]] * z[[i, k]] - 2.0 * j3[[h, k]] * w[[j, i]])
        }),
        BlockName::Ppqp => t4(n, |i, j, k, h| {
            q * (m3[[j, k]] * kd(i, h) - m3[[i, k]] * kd(j, h) + j3[[i, h]] * z[[j, k]]
                - j3[[j, h]] * z[[i, k]]
                + 2.0 * j1[[k, h]] * w[[j, i]])
        }),
        BlockName::Pppq => t4(n, |i, j, k, h| {
            q * (-j2[[i, h]] * w[[j, k]] + j2[[j, h]] * w[[i, k]] - 2.0 * j2[[k, h]] * w[[j, i]])
        }),
        BlockName::Pppp => t4(n, |i, j, k, h| {
            q * (g2[[j, k]] * kd(i, h) - g2[[i, k]] * kd(j, h) + j3[[i, h]] * w[[j, k]]
                - j3[[j, h]] * w[[i, k]]
                + 2.0 * j3[[k, h]] * w[[j, i]])
        }),
        BlockName::Pqqq => t4(n, |i, j, k, h| {
            q * (-m3[[i, k]] * kd(j, h) - j2[[i, h]] * x[[j, k]] + j3[[h, j]] * z[[i, k]]
                - 2.0 * j3[[h, k]] * y[[j, i]])
        }),
        BlockName::Pqqp => t4(n, |i, j, k, h| {
            q * (g1[[j, k]] * kd(i, h) + j3[[i, h]] * x[[j, k]] - j1[[j, h]] * z[[i, k]]
                + 2.0 * j1[[k, h]] * y[[j, i]])
        }),
        BlockName::Pqpq => t4(n, |i, j, k, h| {
            q * (-g2[[i, k]] * kd(j, h) - j2[[i, h]] * y[[j, k]] + j3[[h, j]] * w[[i, k]]
                - 2.0 * j2[[k, h]] * y[[j, i]])
        }),
        BlockName::Pqpp => t4(n, |i, j, k, h| {
            q * (m3[[k, j]] * kd(i, h) + j3[[i, h]] * y[[j, k]] - j1[[j, h]] * w[[i, k]]
                + 2.0 * j3[[k, h]] * y[[j, i]])
        }),
    })
}

/// Largest block difference between the curvature of the lifted metric and
/// the model tensor with constant `k`, at `(q, p)`.
pub fn curvature_difference(lift: &NaturalLift, q: &[f64], p: &[f64], k: f64) -> Result<f64> {
    let lp = lift.at(q, p)?;
    let structure = lp.structure()?;
    let r = curvature_blocks(&lp.point, &lp.coeffs);
    let k0 = model_curvature_blocks(&structure, k);
    Ok(r.max_abs_diff(&k0))
}

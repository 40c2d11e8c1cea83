//! Point-wise residuals for each verification suite.

use nalgebra::DMatrix;
use natlift_core::oracle::{
    connection_derivatives_fd, model_curvature_full, oracle_connection, oracle_curvature,
    OracleSteps,
};
use natlift_core::phase::{inverse_system_residual, max_abs};
use natlift_core::{
    closedness_residual, connection_block_derivatives, connection_blocks, curvature_blocks,
    curvature_difference, fd, model_curvature_blocks, CurvatureBlocks, LiftPoint, NaturalLift,
    Perturbation, Result, StructureBlocks,
};

use crate::config::Suite;

/// Relative perturbation of `lambda` used by the sensitivity suite.
pub const LAMBDA_SENSITIVITY_SCALE: f64 = 1.01;

/// Everything a suite may need at one sample point.
pub struct PointContext<'a> {
    pub lift: &'a NaturalLift,
    pub k: Option<f64>,
    pub q: &'a [f64],
    pub p: &'a [f64],
    pub point: LiftPoint,
    pub structure: StructureBlocks,
}

impl<'a> PointContext<'a> {
    pub fn new(lift: &'a NaturalLift, k: Option<f64>, q: &'a [f64], p: &'a [f64]) -> Result<Self> {
        let point = lift.at(q, p)?;
        let structure = point.structure()?;
        Ok(Self { lift, k, q, p, point, structure })
    }

    fn k(&self) -> f64 {
        self.k.expect("suites needing k are skipped when it is absent")
    }
}

fn shifted_identity(m: DMatrix<f64>, s: f64) -> DMatrix<f64> {
    let dim = m.nrows();
    m + DMatrix::identity(dim, dim) * s
}

pub fn evaluate(suite: Suite, ctx: &PointContext<'_>) -> Result<f64> {
    let s = &ctx.structure;
    let lp = &ctx.point;
    let n = lp.point.dim();
    match suite {
        Suite::AlmostComplex => {
            let j = s.j.assemble();
            let (r1, r2) = lp.bundle.almost_complex_residuals();
            Ok(max_abs(&shifted_identity(&j * &j, 1.0)).max(r1).max(r2))
        }
        Suite::Hermitian => {
            let (j, g) = (s.j.assemble(), s.g.assemble());
            let herm = max_abs(&(j.transpose() * &g * &j - &g));
            let om = &g * &j;
            let mut worst = herm;
            for i in 0..n {
                for jj in 0..n {
                    let closed = s.omega[[i, jj]];
                    worst = worst
                        .max((om[(n + i, jj)] - closed).abs())
                        .max((om[(jj, n + i)] + closed).abs());
                }
            }
            Ok(worst.max(max_abs(&(&om + om.transpose()))))
        }
        Suite::InverseSystem => {
            let g = s.g.assemble();
            let dense = g.try_inverse().ok_or_else(|| natlift_core::Error::IndefiniteMetric {
                detail: "assembled metric is singular".into(),
            })?;
            Ok(inverse_system_residual(&s.g, &s.h).max(max_abs(&(dense - s.h.assemble()))))
        }
        Suite::Nijenhuis => natlift_core::nijenhuis_at(ctx.lift, ctx.q, ctx.p, fd::DEFAULT_STEP),
        Suite::Closedness => closedness_residual(ctx.lift, ctx.q, ctx.p, fd::DEFAULT_STEP),
        Suite::ConnectionVsOracle => {
            let oracle = oracle_connection(ctx.lift, ctx.q, ctx.p, OracleSteps::default())?;
            Ok(connection_blocks(&lp.point, &lp.coeffs).max_abs_diff(&oracle))
        }
        Suite::DerivativeClosedFormVsFd => {
            let fd = connection_derivatives_fd(ctx.lift, ctx.q, ctx.p, fd::DEFAULT_STEP)?;
            Ok(connection_block_derivatives(&lp.point, &lp.coeffs).max_abs_diff(&fd))
        }
        Suite::CurvatureVsOracle => {
            let oracle = oracle_curvature(ctx.lift, ctx.q, ctx.p, OracleSteps::default())?;
            Ok(curvature_blocks(&lp.point, &lp.coeffs).max_abs_diff(&oracle))
        }
        Suite::K0Consistency => {
            let k = ctx.k();
            let blocks = model_curvature_blocks(s, k);
            let full = model_curvature_full(&s.g.assemble(), &s.j.assemble(), k);
            Ok(blocks.max_abs_diff(&CurvatureBlocks::from_full(&full)))
        }
        Suite::MainTheorem => {
            let k0 = model_curvature_blocks(s, ctx.k());
            Ok(curvature_blocks(&lp.point, &lp.coeffs).max_abs_diff(&k0))
        }
        Suite::LambdaSensitivity => {
            let base = ctx.lift.perturbation;
            let scaled = ctx.lift.clone().with_perturbation(Perturbation {
                lambda_scale: base.lambda_scale * LAMBDA_SENSITIVITY_SCALE,
                ..base
            });
            curvature_difference(&scaled, ctx.q, ctx.p, ctx.k())
        }
    }
}

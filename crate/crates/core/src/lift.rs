//! A complete natural lift description: base space form, profiles, and the
//! rule that fixes the proportionality factor. Evaluating it at `(q, p)`
//! yields everything the point-wise checks need.

use crate::base::SpaceForm;
use crate::error::Result;
use crate::expr::ScalarExpr;
use crate::jet::{Jet, MAX_ORDER};
use crate::phase::{PhasePoint, StructureBlocks};
use crate::profiles::{lambda_constant_hsc_jets, CoefficientBundle, MetricCoefficients};

#[derive(Debug, Clone, PartialEq)]
pub enum LambdaSpec {
    /// An explicit profile `lambda(t)`.
    Profile(ScalarExpr),
    /// The value that makes the holomorphic sectional curvature equal `k`.
    ConstantHsc { k: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum MuSpec {
    /// `mu = lambda'`: the Kähler case.
    Derivative,
    /// An explicit `mu(t)`, for almost Hermitian controls.
    Profile(ScalarExpr),
}

/// Deliberate departures from a consistent structure, for negative controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    pub lambda_scale: f64,
    pub b1_offset: f64,
    pub a3_offset: f64,
}

impl Default for Perturbation {
    fn default() -> Self {
        Self { lambda_scale: 1.0, b1_offset: 0.0, a3_offset: 0.0 }
    }
}

impl Perturbation {
    pub fn is_identity(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaturalLift {
    pub space: SpaceForm,
    pub a1: ScalarExpr,
    pub a3: ScalarExpr,
    pub lambda: LambdaSpec,
    pub mu: MuSpec,
    pub perturbation: Perturbation,
}

/// All point data of a lift at one `(q, p)`.
#[derive(Debug, Clone)]
pub struct LiftPoint {
    pub point: PhasePoint,
    pub bundle: CoefficientBundle,
    pub coeffs: MetricCoefficients,
}

impl NaturalLift {
    pub fn new(space: SpaceForm, a1: ScalarExpr, a3: ScalarExpr, lambda: LambdaSpec) -> Self {
        Self {
            space,
            a1,
            a3,
            lambda,
            mu: MuSpec::Derivative,
            perturbation: Perturbation::default(),
        }
    }

    pub fn with_mu(mut self, mu: MuSpec) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_perturbation(mut self, perturbation: Perturbation) -> Self {
        self.perturbation = perturbation;
        self
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn coefficients(&self, t: f64) -> Result<(CoefficientBundle, MetricCoefficients)> {
        let c = self.space.curvature();
        let a1 = self.a1.eval_jet(t, MAX_ORDER)?;
        let a3 = self.a3.eval_jet(t, MAX_ORDER)?;
        let mut bundle = CoefficientBundle::from_profile_jets(a1, a3, c, t)?;
        let pert = self.perturbation;
        if pert.b1_offset != 0.0 {
            bundle = bundle.with_b1_offset(pert.b1_offset);
        }
        if pert.a3_offset != 0.0 {
            bundle = bundle.with_a3_offset(pert.a3_offset);
        }
        let lambda = self.lambda_jet(a1, a3, t)?.scale(pert.lambda_scale);
        let mu = match &self.mu {
            MuSpec::Derivative => lambda.derivative(),
            MuSpec::Profile(e) => e.eval_jet(t, MAX_ORDER)?,
        };
        let coeffs = MetricCoefficients::from_jets(&bundle, lambda, mu)?;
        Ok((bundle, coeffs))
    }

    fn lambda_jet(&self, a1: Jet, a3: Jet, t: f64) -> Result<Jet> {
        match &self.lambda {
            LambdaSpec::Profile(e) => e.eval_jet(t, MAX_ORDER),
            LambdaSpec::ConstantHsc { k } => {
                lambda_constant_hsc_jets(a1, a3, self.space.curvature(), *k, t)
            }
        }
    }

    pub fn at(&self, q: &[f64], p: &[f64]) -> Result<LiftPoint> {
        let base = self.space.geometry_at(q)?;
        let point = PhasePoint::new(base, p)?;
        let (bundle, coeffs) = self.coefficients(point.t)?;
        Ok(LiftPoint { point, bundle, coeffs })
    }
}

impl LiftPoint {
    pub fn structure(&self) -> Result<StructureBlocks> {
        StructureBlocks::build(&self.point, &self.bundle, &self.coeffs)
    }
}

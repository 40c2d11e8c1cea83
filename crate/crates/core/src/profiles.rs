//! The coefficient chain of a natural lift Kähler structure.
//!
//! The free data are two profiles `a1(t)`, `a3(t)` for the complex structure
//! and a proportionality factor `lambda(t)` for the metric. Everything else
//! follows:
//!
//! * `a2 = (1 + a3^2) / a1`, `a4 = -a3`, `b4 = -b3`;
//! * `b1, b2, b3` from the integrability conditions on a base of constant
//!   sectional curvature `c`;
//! * `c_i = lambda a_i` and `d_i = mu a_i + (lambda + 2 t mu) b_i` with
//!   `mu = lambda'` (Kähler case);
//! * `e_i, f_i` are the coefficients of the inverse metric blocks.
//!
//! All quantities are [`Jet`]s in `t` so that the curvature formulas can use
//! derivatives up to second order of the metric coefficients.

use crate::error::{Error, Result};
use crate::expr::ScalarExpr;
use crate::jet::{Jet, MAX_ORDER};

/// The integrability denominator must stay at least this far from zero.
pub const DENOMINATOR_GUARD: f64 = 1e-10;

/// Coefficients of the almost complex structure `J` at one value of `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientBundle {
    pub a1: Jet,
    pub a2: Jet,
    pub a3: Jet,
    pub a4: Jet,
    pub b1: Jet,
    pub b2: Jet,
    pub b3: Jet,
    pub b4: Jet,
    /// Sectional curvature of the base.
    pub c: f64,
    pub t: f64,
}

/// Evaluates the complex-structure coefficient chain from the profiles.
pub fn complex_coefficients(
    a1: &ScalarExpr,
    a3: &ScalarExpr,
    c: f64,
    t: f64,
) -> Result<CoefficientBundle> {
    let a1 = a1.eval_jet(t, MAX_ORDER)?;
    let a3 = a3.eval_jet(t, MAX_ORDER)?;
    CoefficientBundle::from_profile_jets(a1, a3, c, t)
}

impl CoefficientBundle {
    pub fn from_profile_jets(a1: Jet, a3: Jet, c: f64, t: f64) -> Result<Self> {
        if a1.value() <= 0.0 {
            return Err(Error::NonpositiveA1 { t, value: a1.value() });
        }
        let tj = Jet::variable(t);
        let a2 = (1.0 + a3.square()) / a1;
        let (da1, da2, da3) = (a1.derivative(), a2.derivative(), a3.derivative());

        let den = a1 - 2.0 * tj * da1 - 2.0 * c * tj * a2 - 4.0 * c * tj.square() * da2;
        if den.value().abs() <= DENOMINATOR_GUARD {
            return Err(Error::DegenerateDenominator { t, value: den.value() });
        }
        let b1 = (2.0 * c * c * tj * a2.square() + 2.0 * c * tj * a1 * da2 + a1 * da1 - c
            + 3.0 * c * a3.square())
            / den;
        let b2 = (2.0 * tj * da3.square() - 2.0 * tj * da1 * da2
            + c * a2.square()
            + 2.0 * c * tj * a2 * da2
            + a1 * da2)
            / den;
        let b3 = (a1 * da3 + 2.0 * c * a2 * a3 + 4.0 * c * tj * da2 * a3
            - 2.0 * c * tj * a2 * da3)
            / den;

        let bundle = Self {
            a1,
            a2,
            a3,
            a4: -a3,
            b1,
            b2,
            b3,
            b4: -b3,
            c,
            t,
        };
        bundle.check_positivity()?;
        Ok(bundle)
    }

    fn check_positivity(&self) -> Result<()> {
        let t = self.t;
        let radial1 = self.a1.value() + 2.0 * t * self.b1.value();
        if radial1 <= 0.0 {
            return Err(Error::DegenerateStructure { quantity: "a1 + 2t b1", t, value: radial1 });
        }
        let radial2 = self.a2.value() + 2.0 * t * self.b2.value();
        if radial2 <= 0.0 {
            return Err(Error::DegenerateStructure { quantity: "a2 + 2t b2", t, value: radial2 });
        }
        Ok(())
    }

    /// Relative residuals of `a1 a2 = 1 + a3^2` and
    /// `(a1 + 2t b1)(a2 + 2t b2) = 1 + (a3 + 2t b3)^2`.
    pub fn almost_complex_residuals(&self) -> (f64, f64) {
        let t = self.t;
        let (a1, a2, a3) = (self.a1.value(), self.a2.value(), self.a3.value());
        let (b1, b2, b3) = (self.b1.value(), self.b2.value(), self.b3.value());
        let first = 1.0 + a3 * a3;
        let second = 1.0 + (a3 + 2.0 * t * b3).powi(2);
        (
            (a1 * a2 - first).abs() / first,
            ((a1 + 2.0 * t * b1) * (a2 + 2.0 * t * b2) - second).abs() / second,
        )
    }

    /// Shifts `b1` by a constant. Negative control for the integrability
    /// checks; the result is generally not an almost complex structure.
    pub fn with_b1_offset(&self, delta: f64) -> Self {
        Self { b1: self.b1 + delta, ..*self }
    }

    /// Shifts `a3` (and `a4 = -a3`) by a constant while keeping
    /// `a1 a2 = 1 + a3^2`; the `b` coefficients stay those of the
    /// unperturbed profiles, so integrability is broken.
    pub fn with_a3_offset(&self, delta: f64) -> Self {
        let a3 = self.a3 + delta;
        Self {
            a3,
            a4: -a3,
            a2: (1.0 + a3.square()) / self.a1,
            ..*self
        }
    }
}

/// Coefficients of the lifted metric `G` and of its inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricCoefficients {
    pub c1: Jet,
    pub c2: Jet,
    pub c3: Jet,
    pub d1: Jet,
    pub d2: Jet,
    pub d3: Jet,
    pub e1: Jet,
    pub e2: Jet,
    pub e3: Jet,
    pub f1: Jet,
    pub f2: Jet,
    pub f3: Jet,
    pub lambda: Jet,
    pub mu: Jet,
    pub t: f64,
}

/// Metric coefficients for the Kähler case `mu = lambda'`.
pub fn metric_coefficients(
    bundle: &CoefficientBundle,
    lambda: &ScalarExpr,
) -> Result<MetricCoefficients> {
    let lam = lambda.eval_jet(bundle.t, MAX_ORDER)?;
    MetricCoefficients::from_jets(bundle, lam, lam.derivative())
}

impl MetricCoefficients {
    /// Builds the coefficients from explicit `lambda` and `mu` jets. Passing
    /// `mu != lambda'` gives an almost Hermitian structure that is not Kähler.
    pub fn from_jets(bundle: &CoefficientBundle, lambda: Jet, mu: Jet) -> Result<Self> {
        let t = bundle.t;
        let tj = Jet::variable(t);
        if lambda.value() <= 0.0 {
            return Err(Error::NonpositiveLambda { quantity: "lambda", t, value: lambda.value() });
        }
        let radial = lambda + 2.0 * tj * mu;
        if radial.value() <= 0.0 {
            return Err(Error::NonpositiveLambda {
                quantity: "lambda + 2t mu",
                t,
                value: radial.value(),
            });
        }

        let c1 = lambda * bundle.a1;
        let c2 = lambda * bundle.a2;
        let c3 = lambda * bundle.a3;
        let d1 = mu * bundle.a1 + radial * bundle.b1;
        let d2 = mu * bundle.a2 + radial * bundle.b2;
        let d3 = mu * bundle.a3 + radial * bundle.b3;

        let r1 = c1 + 2.0 * tj * d1;
        let r2 = c2 + 2.0 * tj * d2;
        let r3 = c3 + 2.0 * tj * d3;
        let radial_det = r1 * r2 - r3.square();
        if r1.value() <= 0.0 || r2.value() <= 0.0 || radial_det.value() <= 0.0 {
            return Err(Error::IndefiniteMetric {
                detail: format!(
                    "c1+2td1 = {}, c2+2td2 = {}, radial determinant = {} at t = {t}",
                    r1.value(),
                    r2.value(),
                    radial_det.value()
                ),
            });
        }

        let det = c1 * c2 - c3.square();
        let e1 = c2 / det;
        let e2 = c1 / det;
        let e3 = -c3 / det;

        let f1 = -(c2 * d1 * e1 - c3 * d3 * e1 - c3 * d2 * e3 + c2 * d3 * e3
            + 2.0 * d1 * d2 * e1 * tj
            - 2.0 * d3.square() * e1 * tj)
            / (det + 2.0 * c2 * d1 * tj + 2.0 * c1 * d2 * tj - 4.0 * c3 * d3 * tj
                + 4.0 * d1 * d2 * tj.square()
                - 4.0 * d3.square() * tj.square());
        let mixed = (d3 * e1 + d2 * e3) * r1 - (d1 * e1 + d3 * e3) * r3;
        let f2 = r3 * mixed / (r2 * radial_det) - (d2 * e2 + d3 * e3) / r2;
        let f3 = -mixed / radial_det;

        Ok(Self {
            c1,
            c2,
            c3,
            d1,
            d2,
            d3,
            e1,
            e2,
            e3,
            f1,
            f2,
            f3,
            lambda,
            mu,
            t,
        })
    }

    pub fn c(&self) -> [Jet; 3] {
        [self.c1, self.c2, self.c3]
    }

    pub fn d(&self) -> [Jet; 3] {
        [self.d1, self.d2, self.d3]
    }
}

/// The proportionality factor for which the lifted Kähler structure has
/// constant holomorphic sectional curvature `k`:
/// `lambda = 4 a1 c / (k (a1^2 + 2ct + 2 a3^2 c t))`.
pub fn lambda_constant_hsc(
    a1: &ScalarExpr,
    a3: &ScalarExpr,
    c: f64,
    k: f64,
    t: f64,
) -> Result<Jet> {
    let a1 = a1.eval_jet(t, MAX_ORDER)?;
    let a3 = a3.eval_jet(t, MAX_ORDER)?;
    lambda_constant_hsc_jets(a1, a3, c, k, t)
}

pub fn lambda_constant_hsc_jets(a1: Jet, a3: Jet, c: f64, k: f64, t: f64) -> Result<Jet> {
    if c == 0.0 {
        return Err(Error::ZeroCurvature);
    }
    if k == 0.0 {
        return Err(Error::ZeroHolomorphicCurvature);
    }
    let tj = Jet::variable(t);
    let den = k * (a1.square() + 2.0 * c * tj + 2.0 * c * tj * a3.square());
    if den.value().abs() < crate::expr::RECIPROCAL_GUARD {
        return Err(Error::Domain {
            t,
            value: den.value(),
            tolerance: crate::expr::RECIPROCAL_GUARD,
        });
    }
    let lambda = 4.0 * c * a1 / den;
    if lambda.value() <= 0.0 {
        return Err(Error::NonpositiveLambda { quantity: "lambda", t, value: lambda.value() });
    }
    Ok(lambda)
}

/// Right-hand side of the first-order condition on `lambda`:
/// `lambda' = -lambda [a1'(a1^2 - 2ct - 2a3^2 ct) + 2 a1 c (1 + a3^2 + 2 a3 a3' t)]
///            / [a1 (a1^2 + 2ct + 2 a3^2 ct)]`.
pub fn lambda_prime_condition(a1: Jet, a3: Jet, lambda: f64, c: f64, t: f64) -> f64 {
    let (a1v, da1) = (a1.value(), a1.deriv(1));
    let (a3v, da3) = (a3.value(), a3.deriv(1));
    let num = da1 * (a1v * a1v - 2.0 * c * t - 2.0 * a3v * a3v * c * t)
        + 2.0 * a1v * c * (1.0 + a3v * a3v + 2.0 * a3v * da3 * t);
    let den = a1v * (a1v * a1v + 2.0 * c * t + 2.0 * a3v * a3v * c * t);
    -lambda * num / den
}

//! Scenario files.
//!
//! A scenario is a TOML document:
//!
//! ```toml
//! name = "sphere-diagonal"
//! n = 2
//! c = 1.0
//! k = 4.0              # optional; absent means no model comparison
//! a1 = "1"
//! a3 = "0"
//! lambda = "1/(1+t)"   # optional when k is given
//! mu = "0"             # optional; default is lambda'
//! samples = 100
//! seed = 7
//! t_max = 0.4
//! suites = ["almost_complex", "main_theorem"]
//!
//! [tolerances]
//! main_theorem = 1e-7
//!
//! [perturbation]       # optional negative controls
//! lambda_scale = 1.0
//! b1_offset = 0.0
//! a3_offset = 0.0
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use natlift_core::{LambdaSpec, MuSpec, NaturalLift, Perturbation, ScalarExpr, SpaceForm};
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// The verification suites a scenario can request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    AlmostComplex,
    Hermitian,
    InverseSystem,
    Nijenhuis,
    Closedness,
    ConnectionVsOracle,
    DerivativeClosedFormVsFd,
    CurvatureVsOracle,
    K0Consistency,
    MainTheorem,
    LambdaSensitivity,
}

/// Whether a suite's residual must stay below its tolerance, or (for
/// negative controls) exceed it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Upper,
    Lower,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::AlmostComplex,
        Suite::Hermitian,
        Suite::InverseSystem,
        Suite::Nijenhuis,
        Suite::Closedness,
        Suite::ConnectionVsOracle,
        Suite::DerivativeClosedFormVsFd,
        Suite::CurvatureVsOracle,
        Suite::K0Consistency,
        Suite::MainTheorem,
        Suite::LambdaSensitivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::AlmostComplex => "almost_complex",
            Suite::Hermitian => "hermitian",
            Suite::InverseSystem => "inverse_system",
            Suite::Nijenhuis => "nijenhuis",
            Suite::Closedness => "closedness",
            Suite::ConnectionVsOracle => "connection_vs_oracle",
            Suite::DerivativeClosedFormVsFd => "derivative_closed_form_vs_fd",
            Suite::CurvatureVsOracle => "curvature_vs_oracle",
            Suite::K0Consistency => "k0_consistency",
            Suite::MainTheorem => "main_theorem",
            Suite::LambdaSensitivity => "lambda_sensitivity",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::AlmostComplex
            | Suite::Hermitian
            | Suite::InverseSystem
            | Suite::K0Consistency => 1e-11,
            Suite::Nijenhuis | Suite::ConnectionVsOracle | Suite::DerivativeClosedFormVsFd => 1e-5,
            Suite::Closedness => 1e-6,
            Suite::CurvatureVsOracle => 1e-4,
            Suite::MainTheorem => 1e-7,
            Suite::LambdaSensitivity => 1e-3,
        }
    }

    pub fn bound(self) -> Bound {
        match self {
            Suite::LambdaSensitivity => Bound::Lower,
            _ => Bound::Upper,
        }
    }

    /// Suites that compare against the model tensor and need `k`.
    pub fn needs_k(self) -> bool {
        matches!(self, Suite::K0Consistency | Suite::MainTheorem | Suite::LambdaSensitivity)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationConfig {
    #[serde(default = "one")]
    pub lambda_scale: f64,
    #[serde(default)]
    pub b1_offset: f64,
    #[serde(default)]
    pub a3_offset: f64,
}

fn one() -> f64 {
    1.0
}

fn default_samples() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: Option<String>,
    pub n: usize,
    pub c: f64,
    #[serde(default)]
    pub k: Option<f64>,
    pub a1: String,
    pub a3: String,
    #[serde(default)]
    pub lambda: Option<String>,
    #[serde(default)]
    pub mu: Option<String>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    pub t_max: f64,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub suites: Vec<Suite>,
    #[serde(default)]
    pub perturbation: Option<PerturbationConfig>,
}

impl Scenario {
    pub fn from_toml(src: &str) -> Result<Self, ConfigError> {
        let s: Scenario = toml::from_str(src).map_err(|e| ConfigError::Toml(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&src)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        if self.samples < 1 {
            return bad("samples must be at least 1".into());
        }
        if !(self.t_max >= 0.0 && self.t_max.is_finite()) {
            return bad(format!("t_max must be a finite nonnegative number, got {}", self.t_max));
        }
        if self.lambda.is_none() && self.k.is_none() {
            return bad("either lambda or k must be given".into());
        }
        for key in self.tolerances.keys() {
            key.parse::<Suite>()?;
        }
        let mut seen = std::collections::BTreeSet::new();
        for s in &self.suites {
            if !seen.insert(*s) {
                return bad(format!("suite `{s}` listed twice"));
            }
        }
        self.lift()?;
        Ok(())
    }

    pub fn tolerance(&self, suite: Suite) -> f64 {
        self.tolerances.get(suite.name()).copied().unwrap_or(suite.default_tolerance())
    }

    fn profile(field: &str, src: &str) -> Result<ScalarExpr, ConfigError> {
        src.parse().map_err(|e| ConfigError::Profile { field: field.to_string(), message: format!("{e}") })
    }

    /// The lift described by the scenario, including any perturbation.
    pub fn lift(&self) -> Result<NaturalLift, ConfigError> {
        let lambda = match (&self.lambda, self.k) {
            (Some(l), _) => LambdaSpec::Profile(Self::profile("lambda", l)?),
            (None, Some(k)) => LambdaSpec::ConstantHsc { k },
            (None, None) => return Err(ConfigError::Invalid("either lambda or k must be given".into())),
        };
        let mut lift = NaturalLift::new(
            SpaceForm::new(self.n, self.c),
            Self::profile("a1", &self.a1)?,
            Self::profile("a3", &self.a3)?,
            lambda,
        );
        if let Some(mu) = &self.mu {
            lift = lift.with_mu(MuSpec::Profile(Self::profile("mu", mu)?));
        }
        if let Some(p) = &self.perturbation {
            lift = lift.with_perturbation(Perturbation {
                lambda_scale: p.lambda_scale,
                b1_offset: p.b1_offset,
                a3_offset: p.a3_offset,
            });
        }
        Ok(lift)
    }
}

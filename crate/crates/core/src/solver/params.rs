use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SolverError;

/// Dissipation tuple `(ν1, ν2, η1, η2)` and parabolic regularization `ε`.
///
/// Velocity diffuses as `ν1 ∂xx + ν2 ∂yy`, the magnetic field as
/// `η1 ∂xx + η2 ∂yy`; `ε > 0` adds `ε Δ` to both.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MhdParams {
    pub nu1: f64,
    pub nu2: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub epsilon: f64,
}

impl MhdParams {
    pub fn new(nu1: f64, nu2: f64, eta1: f64, eta2: f64) -> Result<Self, SolverError> {
        let p = Self {
            nu1,
            nu2,
            eta1,
            eta2,
            epsilon: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn ideal() -> Self {
        Self::default()
    }

    /// `(0, ν, η, 0)`: vertical viscosity, horizontal magnetic diffusion.
    pub fn mixed_case_a(nu: f64, eta: f64) -> Self {
        Self {
            nu2: nu,
            eta1: eta,
            ..Self::default()
        }
    }

    /// `(ν, 0, 0, η)`: the axis-swapped image of [`MhdParams::mixed_case_a`].
    pub fn mixed_case_b(nu: f64, eta: f64) -> Self {
        Self {
            nu1: nu,
            eta2: eta,
            ..Self::default()
        }
    }

    /// `(0, 0, η, η)`: inviscid flow with full magnetic diffusion.
    pub fn magnetic_only(eta: f64) -> Self {
        Self {
            eta1: eta,
            eta2: eta,
            ..Self::default()
        }
    }

    pub fn with_epsilon(self, epsilon: f64) -> Self {
        Self { epsilon, ..self }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        for (name, v) in [
            ("nu1", self.nu1),
            ("nu2", self.nu2),
            ("eta1", self.eta1),
            ("eta2", self.eta2),
            ("epsilon", self.epsilon),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(SolverError::InvalidParams(format!(
                    "{name} = {v} must be finite and nonnegative"
                )));
            }
        }
        Ok(())
    }

    /// Parameters of the system obtained by exchanging `x` and `y`.
    pub fn swapped(&self) -> Self {
        Self {
            nu1: self.nu2,
            nu2: self.nu1,
            eta1: self.eta2,
            eta2: self.eta1,
            epsilon: self.epsilon,
        }
    }

    /// Common magnetic diffusivity when `η1 = η2 > 0` and the flow is inviscid.
    pub fn magnetic_only_eta(&self) -> Option<f64> {
        (self.nu1 == 0.0 && self.nu2 == 0.0 && self.eta1 == self.eta2 && self.eta1 > 0.0)
            .then_some(self.eta1)
    }

    pub fn is_ideal(&self) -> bool {
        self.nu1 == 0.0
            && self.nu2 == 0.0
            && self.eta1 == 0.0
            && self.eta2 == 0.0
            && self.epsilon == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "mixed_case_A")]
    MixedCaseA,
    #[serde(rename = "mixed_case_B")]
    MixedCaseB,
    #[serde(rename = "magnetic_only")]
    MagneticOnly,
    #[serde(rename = "ideal")]
    Ideal,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::MixedCaseA,
        Preset::MixedCaseB,
        Preset::MagneticOnly,
        Preset::Ideal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::MixedCaseA => "mixed_case_A",
            Preset::MixedCaseB => "mixed_case_B",
            Preset::MagneticOnly => "magnetic_only",
            Preset::Ideal => "ideal",
        }
    }

    /// Which of `nu` / `eta` the preset consumes.
    pub fn uses(self) -> (bool, bool) {
        match self {
            Preset::MixedCaseA | Preset::MixedCaseB => (true, true),
            Preset::MagneticOnly => (false, true),
            Preset::Ideal => (false, false),
        }
    }

    pub fn params(self, nu: f64, eta: f64) -> MhdParams {
        match self {
            Preset::MixedCaseA => MhdParams::mixed_case_a(nu, eta),
            Preset::MixedCaseB => MhdParams::mixed_case_b(nu, eta),
            Preset::MagneticOnly => MhdParams::magnetic_only(eta),
            Preset::Ideal => MhdParams::ideal(),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
                format!(
                    "unknown preset '{s}' (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

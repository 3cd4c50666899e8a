//! Experiment configuration.

use std::path::{Path, PathBuf};

use jones_core::banach::NormedSpace;
use jones_core::cores::CoreParams;
use jones_core::curve::{Flatness, Lambda};
use jones_core::net::pow2;
use serde::{Deserialize, Serialize};

use crate::generators::CurveSpec;
use crate::LabError;

/// Where the curve comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveSource {
    Generator(CurveSpec),
    File { path: PathBuf },
}

/// ε-profile: named or explicit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Profile {
    Named(ProfileName),
    Explicit { eps1: f64, eps2: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileName {
    Paper,
    Lab,
}

impl Profile {
    pub fn flatness(&self, inflation: f64) -> Flatness {
        match self {
            Profile::Named(ProfileName::Paper) => Flatness::asymptotic(inflation),
            Profile::Named(ProfileName::Lab) => Flatness::lab(inflation),
            Profile::Explicit { eps1, eps2 } => Flatness { eps1: *eps1, eps2: *eps2 },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub curve: CurveSource,
    #[serde(default = "default_space")]
    pub space: NormedSpace,
    /// A in Q = B(x, A·2^{-k}).
    #[serde(default = "default_inflation")]
    pub inflation: f64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default)]
    pub unsafe_lambda: bool,
    #[serde(default = "default_profile")]
    pub profile: Profile,
    /// Level stride of the cores.
    #[serde(default = "default_j", rename = "J")]
    pub j: u32,
    #[serde(default = "default_c")]
    pub c: f64,
    /// Coarsest level; defaults to ⌊log₂(1/diam Γ)⌋.
    #[serde(default)]
    pub k_min: Option<i32>,
    /// Finest level; defaults to k_min + 8.
    #[serde(default)]
    pub k_max: Option<i32>,
    /// Exponent of the Jones sum.
    #[serde(default = "default_p")]
    pub p: f64,
    /// For p = 1 only balls with diam Q ≤ c1·diam Γ enter the Jones sum.
    #[serde(default = "default_c1")]
    pub c1: f64,
    /// q used by the weight bounds.
    #[serde(default = "default_q")]
    pub q: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

fn default_space() -> NormedSpace {
    NormedSpace::euclidean(2)
}
fn default_inflation() -> f64 {
    4.0
}
fn default_lambda() -> f64 {
    1.0
}
fn default_profile() -> Profile {
    Profile::Named(ProfileName::Lab)
}
fn default_j() -> u32 {
    6
}
fn default_c() -> f64 {
    pow2(-12)
}
fn default_p() -> f64 {
    2.0
}
fn default_c1() -> f64 {
    1.0
}
fn default_q() -> f64 {
    jones_core::martingale::DEFAULT_Q
}

impl ExperimentConfig {
    pub fn for_curve(spec: CurveSpec) -> Self {
        Self {
            curve: CurveSource::Generator(spec),
            space: default_space(),
            inflation: default_inflation(),
            lambda: default_lambda(),
            unsafe_lambda: false,
            profile: default_profile(),
            j: default_j(),
            c: default_c(),
            k_min: None,
            k_max: None,
            p: default_p(),
            c1: default_c1(),
            q: default_q(),
            out: None,
            seed: 0,
        }
    }

    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::BadInput(format!("{}: {e}", path.display())))?;
        let cfg: Self =
            serde_json::from_str(&text).map_err(|e| LabError::BadInput(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), LabError> {
        self.lambda()?;
        self.core_params()?;
        if !(self.inflation > 1.0) {
            return Err(LabError::BadInput(format!("inflation must exceed 1, got {}", self.inflation)));
        }
        if !(self.p >= 1.0) {
            return Err(LabError::BadInput(format!("Jones sum exponent must be at least 1, got {}", self.p)));
        }
        if !(self.c1 > 0.0) {
            return Err(LabError::BadInput(format!("c1 must be positive, got {}", self.c1)));
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(LabError::BadInput(format!("q must lie in (0, 1), got {}", self.q)));
        }
        if let Profile::Explicit { eps1, eps2 } = self.profile {
            if !(eps1 > 0.0 && eps2 > 0.0) {
                return Err(LabError::BadInput("explicit ε₁, ε₂ must be positive".into()));
            }
        }
        if let (Some(a), Some(b)) = (self.k_min, self.k_max) {
            if a > b {
                return Err(LabError::BadInput(format!("k_min {a} > k_max {b}")));
            }
        }
        Ok(())
    }

    pub fn lambda(&self) -> Result<Lambda, LabError> {
        Lambda::new(self.lambda, self.unsafe_lambda).map_err(|e| LabError::BadInput(e.to_string()))
    }

    pub fn core_params(&self) -> Result<CoreParams, LabError> {
        CoreParams::new(self.j, self.c).map_err(|e| LabError::BadInput(e.to_string()))
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn flatness(&self) -> Flatness {
        self.profile.flatness(self.inflation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_defaults_and_roundtrip() {
        let cfg: ExperimentConfig = serde_json::from_str(r#"{"curve":{"name":"koch","depth":3}}"#).unwrap();
        assert_eq!(cfg.j, 6);
        assert_eq!(cfg.profile, Profile::Named(ProfileName::Lab));
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
        let explicit: ExperimentConfig =
            serde_json::from_str(r#"{"curve":{"name":"segment"},"profile":{"eps1":0.01,"eps2":0.1},"J":8}"#).unwrap();
        assert_eq!(explicit.flatness().eps2, 0.1);
        assert_eq!(explicit.j, 8);
        let file: ExperimentConfig = serde_json::from_str(r#"{"curve":{"path":"c.json"}}"#).unwrap();
        assert!(matches!(file.curve, CurveSource::File { .. }));
    }

    #[test]
    fn validation() {
        let mut cfg = ExperimentConfig::for_curve(CurveSpec::Segment { length: 1.0 });
        assert!(cfg.validate().is_ok());
        cfg.lambda = 3.0;
        assert!(cfg.validate().is_err());
        cfg.unsafe_lambda = true;
        assert!(cfg.validate().is_ok());
        cfg.j = 2;
        assert!(cfg.validate().is_err());
    }
}

//! Run configuration. Every field has a default, and the defaults are the
//! values written out in configs/default.toml.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::folmodel::{CircleDiffeo, FourierTerm, ModelError, SeamProfile, SuspensionModel};
use crate::gvnum::{default_kernels, BumpKernel, GridSpec, GvError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("bad config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("bad config: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub diffeo: DiffeoConfig,
    pub weil: WeilConfig,
    pub bott: BottConfig,
    pub derive: DeriveConfig,
    pub nerve: NerveConfig,
    pub model: ModelConfig,
    pub gv: GvConfig,
    pub tolerances: Tolerances,
    /// Check ids reported as skipped.
    pub skip: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiffeoConfig {
    /// f(z) = z + Σ a sin(nz) + b cos(nz); n = 0 is a rotation by b.
    pub terms: Vec<FourierTerm>,
    pub seam_order: u32,
    /// Rotation angle used by the flat-case checks.
    pub flat_rotation: f64,
}

impl Default for DiffeoConfig {
    fn default() -> Self {
        DiffeoConfig { terms: vec![FourierTerm { n: 1, a: 0.3, b: 0.0 }], seam_order: 2, flat_rotation: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeilConfig {
    pub ranks: Vec<usize>,
}

impl Default for WeilConfig {
    fn default() -> Self {
        WeilConfig { ranks: vec![1, 2, 3] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BottCase {
    pub q: usize,
    pub poly: String,
    /// Inclusive nerve level range.
    pub levels: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BottConfig {
    pub cases: Vec<BottCase>,
    /// Rank and polynomial for the wrong-sign Maurer-Cartan control.
    pub control_q: usize,
    pub control_poly: String,
}

impl Default for BottConfig {
    fn default() -> Self {
        BottConfig {
            cases: vec![
                BottCase { q: 1, poly: "c1^2".into(), levels: [0, 2] },
                BottCase { q: 2, poly: "c1*c2".into(), levels: [0, 3] },
            ],
            control_q: 2,
            control_poly: "c1*c2".into(),
        }
    }
}

/// Lowest polynomial of degree q + 1 used when only a rank is given.
pub fn default_bott_poly(q: usize) -> String {
    match q {
        1 => "c1^2".into(),
        2 => "c1*c2".into(),
        _ => format!("c1*c{q}"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeriveConfig {
    pub q: usize,
    pub levels: [usize; 2],
}

impl Default for DeriveConfig {
    fn default() -> Self {
        DeriveConfig { q: 1, levels: [0, 3] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NerveConfig {
    /// Random cochains are drawn at every level up to this one.
    pub max_level: usize,
    pub q: usize,
    pub trials: usize,
    pub terms: usize,
    pub seed: u64,
}

impl Default for NerveConfig {
    fn default() -> Self {
        NerveConfig { max_level: 3, q: 2, trials: 4, terms: 6, seed: 11 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub steps: usize,
    /// Coarse step counts for the quadrature order estimate.
    pub order_steps: [usize; 3],
    pub basepoints: usize,
    pub max_winding: i32,
    pub random_pairs: usize,
    pub seed: u64,
    pub profile_orders: Vec<u32>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            steps: 1000,
            order_steps: [8, 16, 32],
            basepoints: 32,
            max_winding: 3,
            random_pairs: 1000,
            seed: 2024,
            profile_orders: vec![1, 2, 3, 5],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GvConfig {
    pub nx: usize,
    pub nz: usize,
    pub nt: usize,
    pub tau_max: f64,
    /// Largest |winding| a kernel or product may carry.
    pub window: i32,
    pub tau_shift: f64,
    pub kernels: Vec<BumpKernel>,
}

impl Default for GvConfig {
    fn default() -> Self {
        GvConfig { nx: 64, nz: 64, nt: 32, tau_max: 3.0, window: 2, tau_shift: 0.25, kernels: default_kernels() }
    }
}

impl GvConfig {
    pub fn grid(&self) -> Result<GridSpec, GvError> {
        GridSpec::new(self.nx, self.nz, self.nt, self.tau_max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub cocycle: f64,
    pub path_integral: f64,
    pub path_order: f64,
    pub holonomy: f64,
    pub profile: f64,
    pub pairing: f64,
    pub pairing_order: f64,
    pub log_delta: f64,
    pub tau_shift: f64,
    pub flat: f64,
    /// Differences below this are treated as exact when estimating orders.
    pub roundoff: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            cocycle: 1e-10,
            path_integral: 1e-6,
            path_order: 2.0,
            holonomy: 1e-10,
            profile: 1e-8,
            pairing: 1e-3,
            pairing_order: 1.8,
            log_delta: 1e-10,
            tau_shift: 1e-3,
            flat: 1e-12,
            roundoff: 1e-13,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let c: Config = toml::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    /// Structural checks only; whether f is a diffeomorphism is left to the
    /// constructor so the suite can report it.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |s: String| Err(ConfigError::Invalid(s));
        if self.weil.ranks.contains(&0) {
            return bad("weil.ranks: rank must be at least 1".into());
        }
        for c in &self.bott.cases {
            if c.q == 0 {
                return bad("bott.cases: rank must be at least 1".into());
            }
            if c.levels[0] > c.levels[1] {
                return bad(format!("bott.cases: empty level range {:?}", c.levels));
            }
        }
        if self.bott.control_q == 0 || self.derive.q == 0 || self.nerve.q == 0 {
            return bad("rank must be at least 1".into());
        }
        if self.derive.levels[0] > self.derive.levels[1] {
            return bad(format!("derive.levels: empty range {:?}", self.derive.levels));
        }
        if self.model.basepoints == 0 || self.model.max_winding < 0 {
            return bad("model: need at least one basepoint and max_winding ≥ 0".into());
        }
        if self.gv.kernels.len() < 3 {
            return bad("gv.kernels: three kernels are needed".into());
        }
        if self.gv.window < 1 {
            return bad("gv.window must be at least 1".into());
        }
        self.gv.grid().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(())
    }

    pub fn diffeo(&self) -> Result<CircleDiffeo, ModelError> {
        CircleDiffeo::new(self.diffeo.terms.clone())
    }

    pub fn suspension(&self) -> Result<SuspensionModel, ModelError> {
        SuspensionModel::new(self.diffeo()?, SeamProfile::new(self.diffeo.seam_order)?, self.model.steps)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

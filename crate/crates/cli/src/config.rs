//! Suite files: a TOML document holding a list of `[[run]]` tables.
//!
//! ```toml
//! [[run]]
//! theorem = "hardy"
//! group = "euclidean:3"
//! p = [2, 2, 2]
//! u = "bump:center=1,1,1;radius=0.5"
//! domain = { lo = [0.5, 0.5, 0.5], hi = [1.5, 1.5, 1.5] }
//! quadrature = { method = "mc", samples = 200000, seed = 1 }
//! ```
//!
//! Every key except `theorem` is optional; missing values take the
//! per-theorem defaults listed in [`crate::resolve`].

use serde::{Deserialize, Serialize};

use hardy_core::{Excision, QuadConfig};

/// Tags the runner knows how to execute.
pub const TAGS: &[&str] = &[
    "picone",
    "hardy",
    "rellich",
    "multi_singular_hardy",
    "uncertainty",
    "harmonicity",
    "lemma_3_1",
    "many_particle",
    "rho_identities",
    "ground_state",
    "total_separation",
    "exponential_weight",
    "ibp_identity",
    "horizontal_hardy",
    "hardy_sharpness",
];

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default, rename = "run", skip_serializing_if = "Vec::is_empty")]
    pub runs: Vec<RunSpec>,
}

/// A scalar or one value per direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Alpha {
    Scalar(f64),
    Vector(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PiconeOrder {
    First,
    Second,
    Both,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<Vec<f64>>,
    /// Alternative to `lo`/`hi`: the cube `center ± radius`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub excisions: Vec<Excision>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonneg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smooth_eps: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub theorem: String,
    /// Group spec; for the particle theorems this is the single-particle group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    /// Positive field of the ground-state substitution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Alpha>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singularities: Option<Vec<Vec<f64>>>,
    /// Particle count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    /// Components of the vector field for `lemma_3_1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector_field: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<PiconeOrder>,
    /// Number of seeded `(u, v)` pairs for `picone` when `u`, `v` are absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<usize>,
    /// Sample size for the pointwise checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<ToleranceSpec>,
}

impl RunSpec {
    pub fn new(theorem: &str) -> Self {
        RunSpec {
            theorem: theorem.to_string(),
            ..Default::default()
        }
    }
}

impl SuiteConfig {
    /// Parse a suite file. Errors carry the line and column reported by the
    /// TOML parser, and unknown keys are rejected by name.
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let cfg: SuiteConfig = toml::from_str(text).map_err(|e| anyhow::anyhow!("{e}"))?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("suite configs serialize")
    }
}

//! Quadrature checks of the inequalities and pointwise checks of the exact
//! identities.
//!
//! Every inequality verifier integrates its left- and right-hand sides on
//! the same nodes, so the error of the margin accounts for their
//! correlation. A check passes when the slack is at least `-3σ`; equality
//! checks pass when `|lhs - rhs| <= 3σ`.

mod hardy;
mod particles;
mod singular;
mod weighted;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::ScalarField;
use crate::group::StratifiedGroup;
use crate::hcalc::jet_point;
use crate::quad::{Domain, Excision, Method, QuadConfig, QuadratureResult};
use crate::verdict::Verdict;

pub use hardy::{
    hardy_constant, rellich_constant, sharpness_probe, verify_hardy, verify_rellich,
    RellichParams, SharpnessFamily, SharpnessRow, SharpnessTable,
};
pub use particles::{
    check_rho_identities, total_separation_alpha, total_separation_constant, verify_ground_state,
    verify_many_particle, verify_total_separation, GroundStateParams, ManyParticleConfig, Rho2,
};
pub use singular::{
    check_harmonicity_of_w, check_lemma_3_1, verify_hardy_multi_singular, verify_uncertainty,
    MultiSingularWeight, SingularityList,
};
pub use weighted::{
    check_ibp_identity, verify_exponential_weight, verify_horizontal_hardy,
    ExponentialWeightParams,
};

/// Every check reachable by tag.
pub const REGISTRY: &[&str] = &[
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

/// Which way the inequality points, read as `lhs ? rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Eq => "==",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadEcho {
    pub method: Method,
    /// Sample count for Monte Carlo, nodes per axis for Gauss–Legendre.
    pub n: usize,
    pub seed: u64,
}

impl From<&QuadConfig> for QuadEcho {
    fn from(c: &QuadConfig) -> Self {
        QuadEcho {
            method: c.method,
            n: match c.method {
                Method::Mc => c.samples,
                Method::Gl => c.nodes,
            },
            seed: c.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub group: String,
    pub relation: Relation,
    pub params: serde_json::Value,
    pub domain: Domain,
    pub quadrature: QuadEcho,
    pub lhs: QuadratureResult,
    pub rhs: QuadratureResult,
    /// Signed slack: `lhs - rhs` for `>=` and `==`, `rhs - lhs` for `<=`.
    pub margin: f64,
    /// Standard error of the margin.
    pub combined_error: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Margin and verdict for sides `lhs`, `rhs` whose difference has error `sigma`.
pub fn judge(relation: Relation, lhs: f64, rhs: f64, sigma: f64) -> (f64, Verdict) {
    let margin = match relation {
        Relation::Ge | Relation::Eq => lhs - rhs,
        Relation::Le => rhs - lhs,
    };
    if !margin.is_finite() || !sigma.is_finite() {
        return (margin, Verdict::Inconclusive);
    }
    let band = 3.0 * sigma;
    let verdict = match relation {
        Relation::Ge | Relation::Le => {
            if margin >= -band {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
        Relation::Eq => {
            if margin == 0.0 {
                Verdict::Pass
            } else if band > lhs.abs().max(rhs.abs()) {
                Verdict::Inconclusive
            } else if margin.abs() <= band {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
    };
    (margin, verdict)
}

/// Shared state while assembling a report.
pub(crate) struct Run<'a> {
    pub tag: &'static str,
    pub group: &'a StratifiedGroup,
    pub dom: Domain,
    pub cfg: &'a QuadConfig,
    pub params: serde_json::Value,
    pub notes: Vec<String>,
}

impl<'a> Run<'a> {
    pub fn new(
        tag: &'static str,
        group: &'a StratifiedGroup,
        dom: &Domain,
        cfg: &'a QuadConfig,
        params: serde_json::Value,
    ) -> Result<Self> {
        dom.check_group(group)?;
        Ok(Run {
            tag,
            group,
            dom: dom.clone(),
            cfg,
            params,
            notes: Vec::new(),
        })
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Adds `|x'_i| >= eps` for every listed first-stratum axis the box
    /// meets, unless an excision on that axis is already present.
    pub fn excise_hyperplanes(&mut self, axes: impl IntoIterator<Item = usize>) -> Result<()> {
        let mut added = Vec::new();
        for i in axes {
            let present = self
                .dom
                .excisions
                .iter()
                .any(|e| matches!(e, Excision::Hyperplane { index, .. } if *index == i));
            if !present && self.dom.lo[i] <= 0.0 && self.dom.hi[i] >= 0.0 {
                let eps = self.dom.default_epsilon(i);
                self.dom.excisions.push(Excision::Hyperplane { index: i, epsilon: eps });
                added.push(format!("|x'_{}| >= {eps:.4}", i + 1));
            }
        }
        if !added.is_empty() {
            self.dom.validate()?;
            self.note(format!(
                "singular hyperplanes excised: {}",
                added.join(", ")
            ));
        }
        Ok(())
    }

    pub fn finish(
        self,
        relation: Relation,
        lhs: QuadratureResult,
        rhs: QuadratureResult,
        sigma: f64,
    ) -> VerificationReport {
        let (margin, verdict) = judge(relation, lhs.value, rhs.value, sigma);
        VerificationReport {
            theorem: self.tag.to_string(),
            group: self.group.label().to_string(),
            relation,
            params: self.params,
            domain: self.dom,
            quadrature: QuadEcho::from(self.cfg),
            lhs,
            rhs,
            margin,
            combined_error: sigma,
            verdict,
            notes: self.notes,
        }
    }
}

/// `f(x)` and its horizontal gradient.
pub(crate) fn value_and_gradient(
    g: &StratifiedGroup,
    f: &dyn ScalarField,
    x: &[f64],
) -> (f64, Vec<f64>) {
    let n = g.first_dim();
    let mut grad = Vec::with_capacity(n);
    let mut value = 0.0;
    for k in 0..n {
        let j = f.eval_jet(&jet_point(g, k, x));
        value = j.re;
        grad.push(j.du);
    }
    (value, grad)
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum()
}

pub(crate) fn is_flat(value: f64, grad: &[f64]) -> bool {
    value == 0.0 && grad.iter().all(|g| *g == 0.0)
}

pub(crate) fn require_nonnegative(value: f64, x: &[f64]) -> Result<()> {
    if value < 0.0 {
        return Err(crate::error::Error::DomainViolation {
            point: x.to_vec(),
            reason: format!("u = {value} < 0; the inequality is stated for u >= 0"),
        });
    }
    Ok(())
}

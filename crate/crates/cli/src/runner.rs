//! Executes resolved jobs and writes their reports.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use hardy_core::picone::check_picone;
use hardy_core::verify::{
    check_harmonicity_of_w, check_ibp_identity, check_lemma_3_1, check_rho_identities,
    sharpness_probe, verify_exponential_weight, verify_ground_state, verify_hardy,
    verify_hardy_multi_singular, verify_horizontal_hardy, verify_many_particle, verify_rellich,
    verify_total_separation, verify_uncertainty, SharpnessTable,
};
use hardy_core::{IdentityReport, Verdict, VerificationReport};

use crate::config::{RunSpec, SuiteConfig};
use crate::resolve::{resolve_all, Job, JobKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledIdentity {
    pub label: String,
    pub tolerance: f64,
    pub report: IdentityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "result", rename_all = "lowercase")]
pub enum Outcome {
    Quadrature(VerificationReport),
    Pointwise(Vec<LabeledIdentity>),
    Sharpness(SharpnessTable),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Error,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::Error => "error",
        })
    }
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Fail => Status::Fail,
            Verdict::Inconclusive => Status::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub index: usize,
    pub theorem: String,
    pub spec: RunSpec,
    pub status: Status,
    /// Signed slack; for pointwise checks the smallest `tolerance - residual`.
    pub margin: Option<f64>,
    pub three_sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub jobs: Option<usize>,
    pub allow_inconclusive: bool,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub records: Vec<RunRecord>,
    pub allow_inconclusive: bool,
}

impl SuiteOutcome {
    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| {
            r.status == Status::Pass || (self.allow_inconclusive && r.status == Status::Inconclusive)
        })
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn table(&self) -> String {
        summary_table(&self.records)
    }
}

fn pointwise(items: Vec<(String, f64, IdentityReport)>) -> (Status, f64, Outcome) {
    let mut margin = f64::INFINITY;
    let mut status = Status::Pass;
    let mut out = Vec::with_capacity(items.len());
    for (label, tolerance, report) in items {
        margin = margin.min(tolerance - report.max_abs_residual);
        if report.verdict != Verdict::Pass && status == Status::Pass {
            status = report.verdict.into();
        }
        out.push(LabeledIdentity { label, tolerance, report });
    }
    (status, margin, Outcome::Pointwise(out))
}

fn quadrature(r: VerificationReport) -> (Status, f64, f64, Outcome) {
    (r.verdict.into(), r.margin, 3.0 * r.combined_error, Outcome::Quadrature(r))
}

/// Evaluates one job; failures of the numerics are reported as `Status::Error`.
pub fn execute(job: &Job) -> RunRecord {
    let result: hardy_core::Result<(Status, f64, f64, Outcome)> = (|| {
        Ok(match &job.kind {
            JobKind::Picone { g, p, checks, sample, seed } => {
                let mut items = Vec::with_capacity(checks.len());
                for c in checks {
                    let r = check_picone(c.order, g, p, &c.pair, sample, &c.tol, *seed)?;
                    items.push((c.label.clone(), c.tol.residual, r));
                }
                let (s, m, o) = pointwise(items);
                (s, m, 0.0, o)
            }
            JobKind::Harmonicity { g, sing, sample, seed, tol } => {
                let r = check_harmonicity_of_w(g, sing, sample, *seed, *tol)?;
                let (s, m, o) = pointwise(vec![("harmonicity".into(), *tol, r)]);
                (s, m, 0.0, o)
            }
            JobKind::Rho { mp, sample, seed, tol } => {
                let r = check_rho_identities(mp, sample, *seed, *tol)?;
                let (s, m, o) = pointwise(vec![("rho_identities".into(), *tol, r)]);
                (s, m, 0.0, o)
            }
            JobKind::Hardy { g, p, u, dom, cfg } => quadrature(verify_hardy(g, p, u, dom, cfg)?),
            JobKind::Rellich { g, p, params, u, dom, cfg } => {
                quadrature(verify_rellich(g, p, params, u, dom, cfg)?)
            }
            JobKind::MultiSingular { g, sing, u, dom, cfg } => {
                quadrature(verify_hardy_multi_singular(g, sing, u, dom, cfg)?)
            }
            JobKind::Uncertainty { g, sing, u, dom, cfg } => {
                quadrature(verify_uncertainty(g, sing, u, dom, cfg)?)
            }
            JobKind::Lemma { g, a, u, dom, cfg } => quadrature(check_lemma_3_1(g, a, u, dom, cfg)?),
            JobKind::ManyParticle { mp, u, dom, cfg } => {
                quadrature(verify_many_particle(mp, u, dom, cfg)?)
            }
            JobKind::GroundState { g, params, u, dom, cfg } => {
                quadrature(verify_ground_state(g, params, u, dom, cfg)?)
            }
            JobKind::TotalSeparation { mp, u, dom, cfg } => {
                quadrature(verify_total_separation(mp, u, dom, cfg)?)
            }
            JobKind::ExponentialWeight { g, params, u, dom, cfg } => {
                quadrature(verify_exponential_weight(g, params, u, dom, cfg)?)
            }
            JobKind::Ibp { g, params, u, dom, cfg } => {
                quadrature(check_ibp_identity(g, params, u, dom, cfg)?)
            }
            JobKind::HorizontalHardy { g, u, dom, cfg } => {
                quadrature(verify_horizontal_hardy(g, u, dom, cfg)?)
            }
            JobKind::Sharpness { g, p, deltas, cfg } => {
                let t = sharpness_probe("hardy", g, p, deltas, cfg)?;
                let margin = t.rows.iter().map(|r| r.ratio - 1.0).fold(f64::INFINITY, f64::min);
                let band = t.rows.iter().map(|r| 3.0 * r.ratio_stderr).fold(0.0, f64::max);
                let ok = t.rows.iter().all(|r| r.ratio - 1.0 >= -3.0 * r.ratio_stderr);
                let status = if ok { Status::Pass } else { Status::Fail };
                (status, margin, band, Outcome::Sharpness(t))
            }
        })
    })();
    let (status, margin, three_sigma, outcome, error) = match result {
        Ok((s, m, t, o)) => (s, Some(m), Some(t), Some(o), None),
        Err(e) => (Status::Error, None, None, None, Some(e.to_string())),
    };
    RunRecord {
        index: job.index,
        theorem: job.tag.to_string(),
        spec: job.spec.clone(),
        status,
        margin,
        three_sigma,
        outcome,
        error,
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{v:.4e}"),
        Some(v) => v.to_string(),
        None => "-".into(),
    }
}

pub fn summary_table(records: &[RunRecord]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<4} {:<22} | {:>12} | {:>12} | verdict", "#", "theorem", "margin", "3σ");
    for r in records {
        let _ = writeln!(
            s,
            "{:<4} {:<22} | {:>12} | {:>12} | {}",
            r.index + 1,
            r.theorem,
            fmt_opt(r.margin),
            fmt_opt(r.three_sigma),
            r.status
        );
    }
    s
}

fn write_reports(out: &Path, records: &[RunRecord]) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for r in records {
        let path = out.join(format!("{:03}_{}.json", r.index + 1, r.theorem));
        let mut text = serde_json::to_string_pretty(r)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    fs::write(out.join("summary.txt"), summary_table(records))?;
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let runs: Vec<_> = records
        .iter()
        .map(|r| {
            serde_json::json!({
                "index": r.index + 1,
                "theorem": r.theorem,
                "status": r.status,
                "margin": r.margin,
                "three_sigma": r.three_sigma,
            })
        })
        .collect();
    let summary = serde_json::json!({ "generated_at": stamp, "runs": runs });
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    fs::write(out.join("summary.json"), text)?;
    Ok(())
}

/// Type-checks every run, evaluates them on a pool of `jobs` threads and
/// writes the reports in run order.
pub fn run_suite(cfg: &SuiteConfig, opts: &RunOptions) -> Result<SuiteOutcome> {
    let jobs = resolve_all(&cfg.runs)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = opts.jobs {
        builder = builder.num_threads(k.max(1));
    }
    let pool = builder.build().context("building thread pool")?;
    let records: Vec<RunRecord> = pool.install(|| jobs.par_iter().map(execute).collect());
    if let Some(out) = &opts.out {
        write_reports(out, &records)?;
    }
    Ok(SuiteOutcome { records, allow_inconclusive: opts.allow_inconclusive })
}

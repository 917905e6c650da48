//! Integration over boxes with excised singular sets.
//!
//! Monte Carlo runs in fixed-size blocks, each drawing from its own ChaCha
//! stream, and block statistics are merged in block order. Results are
//! therefore bit-identical for a given seed regardless of thread count.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::StratifiedGroup;

const BLOCK: usize = 4096;
const MIN_ACCEPTANCE: f64 = 0.01;
pub const MAX_GL_DIM: usize = 6;

pub const DEFAULT_MC_SAMPLES: usize = 200_000;
pub const DEFAULT_GL_NODES: usize = 16;
/// Default excision radius as a fraction of the box half-width.
pub const DEFAULT_EPS_FRACTION: f64 = 0.05;

/// A region removed from the integration box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Excision {
    /// Keeps `|x_index| >= epsilon`.
    Hyperplane { index: usize, epsilon: f64 },
    /// Keeps `|x' - center| >= epsilon`, with `center` in the first stratum.
    Point { center: Vec<f64>, epsilon: f64 },
    /// Keeps `|x'_i - x'_j| >= epsilon` for first-stratum blocks of size `block`.
    Diagonal {
        block: usize,
        i: usize,
        j: usize,
        epsilon: f64,
    },
}

impl Excision {
    fn epsilon(&self) -> f64 {
        match self {
            Excision::Hyperplane { epsilon, .. }
            | Excision::Point { epsilon, .. }
            | Excision::Diagonal { epsilon, .. } => *epsilon,
        }
    }

    fn keeps(&self, x: &[f64]) -> bool {
        match self {
            Excision::Hyperplane { index, epsilon } => x[*index].abs() >= *epsilon,
            Excision::Point { center, epsilon } => {
                let d2: f64 = center.iter().zip(x).map(|(c, v)| (v - c) * (v - c)).sum();
                d2 >= epsilon * epsilon
            }
            Excision::Diagonal { block, i, j, epsilon } => {
                let (a, b) = (&x[i * block..(i + 1) * block], &x[j * block..(j + 1) * block]);
                let d2: f64 = a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum();
                d2 >= epsilon * epsilon
            }
        }
    }
}

/// A box `[lo_j, hi_j]` over all coordinates with excisions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub first_dim: usize,
    #[serde(default)]
    pub excisions: Vec<Excision>,
    #[serde(default)]
    pub label: String,
}

impl Domain {
    pub fn new(group: &StratifiedGroup, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let dom = Domain {
            lo,
            hi,
            first_dim: group.first_dim(),
            excisions: Vec::new(),
            label: format!("box in {}", group.label()),
        };
        dom.check_group(group)?;
        dom.validate()?;
        Ok(dom)
    }

    /// The bounding box of the Euclidean ball of given radius.
    pub fn around(group: &StratifiedGroup, center: &[f64], radius: f64) -> Result<Self> {
        let lo = center.iter().map(|c| c - radius).collect();
        let hi = center.iter().map(|c| c + radius).collect();
        Self::new(group, lo, hi)
    }

    pub fn with_excision(mut self, e: Excision) -> Result<Self> {
        self.excisions.push(e);
        self.validate()?;
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }

    pub fn half_width(&self, j: usize) -> f64 {
        0.5 * (self.hi[j] - self.lo[j])
    }

    pub fn mean_half_width(&self) -> f64 {
        (0..self.dim()).map(|j| self.half_width(j)).sum::<f64>() / self.dim() as f64
    }

    pub fn check_group(&self, group: &StratifiedGroup) -> Result<()> {
        if self.dim() != group.dim() || self.first_dim != group.first_dim() {
            return Err(Error::InvalidDomain(format!(
                "domain of dimension {} (first stratum {}) does not fit group {}",
                self.dim(),
                self.first_dim,
                group.label()
            )));
        }
        Ok(())
    }

    /// Whether the box meets the hyperplane `x_index = 0`.
    pub fn straddles_zero(&self, index: usize) -> bool {
        self.lo[index] < 0.0 && self.hi[index] > 0.0
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (l, h))| v >= l && v <= h)
            && self.excisions.iter().all(|e| e.keeps(x))
    }

    pub fn validate(&self) -> Result<()> {
        if self.lo.len() != self.hi.len() || self.lo.is_empty() {
            return Err(Error::InvalidDomain("bounds must be nonempty and of equal length".into()));
        }
        for (j, (l, h)) in self.lo.iter().zip(&self.hi).enumerate() {
            if !(l < h) || !l.is_finite() || !h.is_finite() {
                return Err(Error::InvalidDomain(format!("need lo < hi on axis {j}, got [{l}, {h}]")));
            }
        }
        for e in &self.excisions {
            if !(e.epsilon() > 0.0) {
                return Err(Error::InvalidDomain(format!("excision epsilon must be positive: {e:?}")));
            }
            match e {
                Excision::Hyperplane { index, .. } if *index >= self.first_dim => {
                    return Err(Error::InvalidDomain(format!(
                        "hyperplane index {index} outside the first stratum"
                    )))
                }
                Excision::Point { center, .. } if center.len() != self.first_dim => {
                    return Err(Error::InvalidDomain(format!(
                        "point excision center must have {} coordinates",
                        self.first_dim
                    )))
                }
                Excision::Diagonal { block, i, j, .. }
                    if *block == 0 || i == j || (i.max(j) + 1) * block > self.first_dim =>
                {
                    return Err(Error::InvalidDomain(format!("bad diagonal excision {e:?}")))
                }
                _ => {}
            }
        }
        let rate = self.acceptance_estimate(4096, 0x5eed);
        if rate <= 0.0 {
            return Err(Error::InvalidDomain("excisions remove the whole box".into()));
        }
        Ok(())
    }

    /// Fraction of uniform box samples that survive the excisions.
    pub fn acceptance_estimate(&self, n: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = vec![0.0; self.dim()];
        let mut hits = 0usize;
        for _ in 0..n {
            self.sample_box(&mut rng, &mut x);
            if self.contains(&x) {
                hits += 1;
            }
        }
        hits as f64 / n as f64
    }

    fn sample_box<R: Rng>(&self, rng: &mut R, x: &mut [f64]) {
        for (j, v) in x.iter_mut().enumerate() {
            let u: f64 = rng.random();
            *v = self.lo[j] + u * (self.hi[j] - self.lo[j]);
        }
    }

    /// Default excision radius for a hyperplane through axis `j`.
    pub fn default_epsilon(&self, j: usize) -> f64 {
        DEFAULT_EPS_FRACTION * self.half_width(j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Monte Carlo with rejection of excised points.
    Mc,
    /// Tensor Gauss–Legendre.
    Gl,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Mc => "mc",
            Method::Gl => "gl",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub method: Method,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_samples() -> usize {
    DEFAULT_MC_SAMPLES
}

fn default_nodes() -> usize {
    DEFAULT_GL_NODES
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            method: Method::Mc,
            samples: DEFAULT_MC_SAMPLES,
            nodes: DEFAULT_GL_NODES,
            seed: 0,
        }
    }
}

impl QuadConfig {
    pub fn mc(samples: usize, seed: u64) -> Self {
        QuadConfig {
            method: Method::Mc,
            samples,
            seed,
            ..Default::default()
        }
    }

    pub fn gl(nodes: usize) -> Self {
        QuadConfig {
            method: Method::Gl,
            nodes,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub stderr: f64,
    pub n_evals: u64,
    pub method: Method,
}

impl QuadratureResult {
    pub fn exact(value: f64, method: Method) -> Self {
        QuadratureResult {
            value,
            stderr: 0.0,
            n_evals: 1,
            method,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum ErrorModel {
    /// Covariance matrix of the component estimates (row-major).
    Covariance(Vec<f64>),
    /// Deterministic per-component error bounds.
    Bounds(Vec<f64>),
}

/// Joint estimate of several integrals over the same nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiEstimate {
    pub method: Method,
    pub values: Vec<f64>,
    pub n_evals: u64,
    errors: ErrorModel,
}

impl MultiEstimate {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn stderr(&self, i: usize) -> f64 {
        match &self.errors {
            ErrorModel::Covariance(c) => c[i * self.len() + i].max(0.0).sqrt(),
            ErrorModel::Bounds(b) => b[i],
        }
    }

    pub fn result(&self, i: usize) -> QuadratureResult {
        QuadratureResult {
            value: self.values[i],
            stderr: self.stderr(i),
            n_evals: self.n_evals,
            method: self.method,
        }
    }

    /// Value and error of `sum_i c_i I_i`.
    pub fn linear(&self, coeffs: &[f64]) -> QuadratureResult {
        let k = self.len();
        let value = coeffs.iter().zip(&self.values).map(|(c, v)| c * v).sum();
        let stderr = match &self.errors {
            ErrorModel::Covariance(cov) => {
                let mut var = 0.0;
                for i in 0..k {
                    for j in 0..k {
                        var += coeffs[i] * coeffs[j] * cov[i * k + j];
                    }
                }
                var.max(0.0).sqrt()
            }
            ErrorModel::Bounds(b) => coeffs.iter().zip(b).map(|(c, e)| c.abs() * e).sum(),
        };
        QuadratureResult {
            value,
            stderr,
            n_evals: self.n_evals,
            method: self.method,
        }
    }

    /// First-order (delta method) error of a smooth function of the
    /// estimates, given its gradient at `values`.
    pub fn propagate(&self, gradient: &[f64]) -> f64 {
        self.linear(gradient).stderr
    }
}

#[derive(Clone)]
struct BlockStats {
    n: u64,
    accepted: u64,
    mean: Vec<f64>,
    comoment: Vec<f64>,
}

impl BlockStats {
    fn new(k: usize) -> Self {
        BlockStats {
            n: 0,
            accepted: 0,
            mean: vec![0.0; k],
            comoment: vec![0.0; k * k],
        }
    }

    fn push(&mut self, v: &[f64], delta: &mut [f64]) {
        let k = v.len();
        self.n += 1;
        let inv = 1.0 / self.n as f64;
        for i in 0..k {
            delta[i] = v[i] - self.mean[i];
            self.mean[i] += delta[i] * inv;
        }
        for i in 0..k {
            let after = v[i] - self.mean[i];
            for j in 0..k {
                self.comoment[i * k + j] += after * delta[j];
            }
        }
    }

    fn merge(&mut self, other: &BlockStats) {
        if other.n == 0 {
            return;
        }
        let k = self.mean.len();
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        let delta: Vec<f64> = (0..k).map(|i| other.mean[i] - self.mean[i]).collect();
        for i in 0..k {
            for j in 0..k {
                self.comoment[i * k + j] +=
                    other.comoment[i * k + j] + delta[i] * delta[j] * na * nb / n;
            }
        }
        for i in 0..k {
            self.mean[i] += delta[i] * nb / n;
        }
        self.n += other.n;
        self.accepted += other.accepted;
    }
}

/// Integrand producing `k` values at a point.
pub type MultiIntegrand<'a> = dyn Fn(&[f64], &mut [f64]) -> Result<()> + Sync + 'a;

/// Monte Carlo estimate of `k` integrals sharing one sample set.
pub fn integrate_mc_multi(
    k: usize,
    f: &MultiIntegrand<'_>,
    dom: &Domain,
    n: usize,
    seed: u64,
) -> Result<MultiEstimate> {
    if n < 100 {
        return Err(Error::InvalidParameter(format!(
            "Monte Carlo needs at least 100 samples, got {n}"
        )));
    }
    let blocks = n.div_ceil(BLOCK);
    let d = dom.dim();
    let partials: Vec<Result<BlockStats>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = BLOCK.min(n - b * BLOCK);
            let mut stats = BlockStats::new(k);
            let mut x = vec![0.0; d];
            let mut out = vec![0.0; k];
            let zeros = vec![0.0; k];
            let mut delta = vec![0.0; k];
            for _ in 0..count {
                dom.sample_box(&mut rng, &mut x);
                if dom.contains(&x) {
                    out.iter_mut().for_each(|o| *o = 0.0);
                    f(&x, &mut out)?;
                    if let Some(bad) = out.iter().position(|v| !v.is_finite()) {
                        return Err(Error::NonFinite {
                            what: format!("integrand component {bad}"),
                            point: x.clone(),
                        });
                    }
                    stats.accepted += 1;
                    stats.push(&out, &mut delta);
                } else {
                    stats.push(&zeros, &mut delta);
                }
            }
            Ok(stats)
        })
        .collect();

    let mut total = BlockStats::new(k);
    for p in partials {
        total.merge(&p?);
    }
    let rate = total.accepted as f64 / total.n as f64;
    if rate < MIN_ACCEPTANCE {
        return Err(Error::DegenerateDomain(format!(
            "acceptance rate {:.3}% is below {}%",
            100.0 * rate,
            100.0 * MIN_ACCEPTANCE
        )));
    }
    let vol = dom.volume();
    let nn = total.n as f64;
    let values = total.mean.iter().map(|m| m * vol).collect();
    // covariance of the estimator: vol^2 * sample covariance / n
    let cov = total
        .comoment
        .iter()
        .map(|c| vol * vol * c / ((nn - 1.0) * nn))
        .collect();
    Ok(MultiEstimate {
        method: Method::Mc,
        values,
        n_evals: total.accepted,
        errors: ErrorModel::Covariance(cov),
    })
}

/// Monte Carlo estimate of a single integral.
pub fn integrate_mc<F>(f: F, dom: &Domain, n: usize, seed: u64) -> Result<QuadratureResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let multi = integrate_mc_multi(
        1,
        &|x: &[f64], out: &mut [f64]| {
            out[0] = f(x);
            Ok(())
        },
        dom,
        n,
        seed,
    )?;
    Ok(multi.result(0))
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_m(z) and P_{m-1}(z)
            let (mut p0, mut p1) = (1.0, z);
            if m == 1 {
                p1 = z;
                p0 = 1.0;
            } else {
                for j in 2..=m {
                    let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[m - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

fn axis_rule(lo: f64, hi: f64, cut: Option<f64>, m: usize) -> Vec<(f64, f64)> {
    let mut intervals = Vec::new();
    match cut {
        Some(eps) if lo < eps && hi > -eps => {
            if lo < -eps {
                intervals.push((lo, -eps));
            }
            if hi > eps {
                intervals.push((eps, hi));
            }
        }
        _ => intervals.push((lo, hi)),
    }
    let (z, w) = gauss_legendre(m);
    let mut out = Vec::with_capacity(m * intervals.len());
    for (a, b) in intervals {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        for (zi, wi) in z.iter().zip(&w) {
            out.push((mid + half * zi, half * wi));
        }
    }
    out
}

fn tensor_sum(k: usize, f: &MultiIntegrand<'_>, rules: &[Vec<(f64, f64)>]) -> Result<(Vec<f64>, u64)> {
    let d = rules.len();
    let sizes: Vec<usize> = rules.iter().map(|r| r.len()).collect();
    let total: usize = sizes.iter().product();
    let chunk = 1024usize;
    let partials: Vec<Result<Vec<f64>>> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; k];
            let mut out = vec![0.0; k];
            let mut x = vec![0.0; d];
            for flat in c * chunk..((c + 1) * chunk).min(total) {
                let mut rem = flat;
                let mut w = 1.0;
                for j in (0..d).rev() {
                    let (node, weight) = rules[j][rem % sizes[j]];
                    rem /= sizes[j];
                    x[j] = node;
                    w *= weight;
                }
                out.iter_mut().for_each(|o| *o = 0.0);
                f(&x, &mut out)?;
                for i in 0..k {
                    acc[i] += w * out[i];
                }
            }
            Ok(acc)
        })
        .collect();
    let mut sum = vec![0.0; k];
    for p in partials {
        for (s, v) in sum.iter_mut().zip(p?) {
            *s += v;
        }
    }
    if let Some(bad) = sum.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            what: format!("tensor quadrature component {bad}"),
            point: vec![],
        });
    }
    Ok((sum, total as u64))
}

/// Tensor Gauss–Legendre estimate of `k` integrals; the error is the change
/// against the rule with half the nodes.
pub fn integrate_gl_multi(
    k: usize,
    f: &MultiIntegrand<'_>,
    dom: &Domain,
    nodes: usize,
) -> Result<MultiEstimate> {
    let d = dom.dim();
    if d > MAX_GL_DIM {
        return Err(Error::InvalidParameter(format!(
            "tensor quadrature limited to dimension {MAX_GL_DIM}, got {d}"
        )));
    }
    if nodes < 2 {
        return Err(Error::InvalidParameter("need at least 2 nodes per axis".into()));
    }
    let mut cuts: Vec<Option<f64>> = vec![None; d];
    for e in &dom.excisions {
        match e {
            Excision::Hyperplane { index, epsilon } => {
                let c = cuts[*index].get_or_insert(0.0);
                *c = c.max(*epsilon);
            }
            other => {
                return Err(Error::UnsupportedExcision(format!(
                    "{other:?} is not axis-aligned; use Monte Carlo"
                )))
            }
        }
    }
    let rules = |m: usize| -> Vec<Vec<(f64, f64)>> {
        (0..d).map(|j| axis_rule(dom.lo[j], dom.hi[j], cuts[j], m)).collect()
    };
    let (fine, n_fine) = tensor_sum(k, f, &rules(nodes))?;
    let (coarse, n_coarse) = tensor_sum(k, f, &rules((nodes / 2).max(1)))?;
    let bounds = fine.iter().zip(&coarse).map(|(a, b)| (a - b).abs()).collect();
    Ok(MultiEstimate {
        method: Method::Gl,
        values: fine,
        n_evals: n_fine + n_coarse,
        errors: ErrorModel::Bounds(bounds),
    })
}

pub fn integrate_gl<F>(f: F, dom: &Domain, nodes: usize) -> Result<QuadratureResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let multi = integrate_gl_multi(
        1,
        &|x: &[f64], out: &mut [f64]| {
            out[0] = f(x);
            Ok(())
        },
        dom,
        nodes,
    )?;
    Ok(multi.result(0))
}

/// Dispatch on the configured method.
pub fn integrate_multi(
    k: usize,
    f: &MultiIntegrand<'_>,
    dom: &Domain,
    cfg: &QuadConfig,
) -> Result<MultiEstimate> {
    match cfg.method {
        Method::Mc => integrate_mc_multi(k, f, dom, cfg.samples, cfg.seed),
        Method::Gl => integrate_gl_multi(k, f, dom, cfg.nodes),
    }
}

const PRIMES: [u64; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    out
}

/// Randomly shifted Halton points inside the domain (excised points are
/// skipped). The shift is drawn from `seed`.
pub fn halton_points(dom: &Domain, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let d = dom.dim();
    if d > PRIMES.len() {
        return Err(Error::InvalidParameter(format!(
            "Halton sampling supports up to {} dimensions",
            PRIMES.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..d).map(|_| rng.random()).collect();
    let mut out = Vec::with_capacity(count);
    let limit = (count as u64).saturating_mul(200).max(10_000);
    let mut i = 1u64;
    while out.len() < count && i <= limit {
        let x: Vec<f64> = (0..d)
            .map(|j| {
                let u = (radical_inverse(i, PRIMES[j]) + shift[j]).fract();
                dom.lo[j] + u * (dom.hi[j] - dom.lo[j])
            })
            .collect();
        if dom.contains(&x) {
            out.push(x);
        }
        i += 1;
    }
    if out.len() < count {
        return Err(Error::DegenerateDomain(format!(
            "only {} of {count} Halton points survived the excisions",
            out.len()
        )));
    }
    Ok(out)
}

/// A smooth integrand on the unit cube with its exact integral.
#[derive(Debug, Clone, Copy)]
pub struct SmoothBenchmark {
    pub name: &'static str,
    pub dim: usize,
    pub f: fn(&[f64]) -> f64,
    pub exact: f64,
}

/// Cross-validation integrands. Exact values are closed forms.
pub fn smooth_benchmarks() -> Vec<SmoothBenchmark> {
    let e1 = std::f64::consts::E - 1.0;
    let c = 0.6 * std::f64::consts::PI;
    // Re(-e^{ic} (e^i - 1)^2)
    let (a, b) = (1f64.cos() - 1.0, 1f64.sin());
    let (sq_re, sq_im) = (a * a - b * b, 2.0 * a * b);
    let osc = -(c.cos() * sq_re - c.sin() * sq_im);
    vec![
        SmoothBenchmark {
            name: "exp_sum",
            dim: 3,
            f: |x| x.iter().sum::<f64>().exp(),
            exact: e1.powi(3),
        },
        SmoothBenchmark {
            name: "cos_product",
            dim: 4,
            f: |x| x.iter().map(|v| v.cos()).product(),
            exact: 1f64.sin().powi(4),
        },
        SmoothBenchmark {
            name: "rational",
            dim: 3,
            f: |x| x.iter().map(|v| 1.0 / (1.0 + v)).product(),
            exact: std::f64::consts::LN_2.powi(3),
        },
        SmoothBenchmark {
            name: "polynomial",
            dim: 3,
            f: |x| x[0] * x[0] * x[1] + x[2],
            exact: 2.0 / 3.0,
        },
        SmoothBenchmark {
            name: "oscillatory",
            dim: 2,
            f: |x| (0.6 * std::f64::consts::PI + x[0] + x[1]).cos(),
            exact: osc,
        },
        SmoothBenchmark {
            name: "gaussian_5d",
            dim: 5,
            f: |x| (-x.iter().map(|v| v * v).sum::<f64>()).exp(),
            // (sqrt(pi)/2 erf(1))^5
            exact: 0.746_824_132_812_427_f64.powi(5),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box(d: usize) -> Domain {
        let g = StratifiedGroup::euclidean(d).unwrap();
        Domain::new(&g, vec![0.0; d], vec![1.0; d]).unwrap()
    }

    #[test]
    fn gauss_legendre_rules() {
        for m in 1..=20 {
            let (z, w) = gauss_legendre(m);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "m={m}");
            // exact for degree 2m-1
            let deg = 2 * m as i32 - 1;
            let q: f64 = z.iter().zip(&w).map(|(x, w)| w * x.powi(deg - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((q - exact).abs() < 1e-13, "m={m}: {q} vs {exact}");
        }
    }

    #[test]
    fn gl_exact_on_polynomials() {
        let r = integrate_gl(|x| x[0].powi(3) * x[1], &unit_box(2), 4).unwrap();
        assert!((r.value - 0.125).abs() < 1e-14);
        let g = StratifiedGroup::euclidean(1).unwrap();
        let dom = Domain::new(&g, vec![0.0], vec![1.0]).unwrap();
        let r = integrate_gl(|x| x[0].exp(), &dom, 8).unwrap();
        assert!((r.value - (std::f64::consts::E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn mc_volume_and_moments() {
        let r = integrate_mc(|_| 1.0, &unit_box(3), 10_000, 1).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(r.stderr < 1e-12);
        let r = integrate_mc(|x| x[0] * x[0], &unit_box(2), 1_000_000, 9).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 3.0 * r.stderr, "{r:?}");
        assert!(r.stderr > 0.0);
    }

    #[test]
    fn excised_inverse_weight() {
        let g = StratifiedGroup::euclidean(2).unwrap();
        let dom = Domain::new(&g, vec![-1.0, -1.0], vec![1.0, 1.0])
            .unwrap()
            .with_excision(Excision::Hyperplane { index: 0, epsilon: 0.1 })
            .unwrap();
        let exact = 4.0 * 10f64.ln();
        let gl = integrate_gl(|x| 1.0 / x[0].abs(), &dom, 24).unwrap();
        assert!((gl.value - exact).abs() < 1e-6, "{gl:?}");
        let mc = integrate_mc(|x| 1.0 / x[0].abs(), &dom, 400_000, 3).unwrap();
        assert!((mc.value - exact).abs() < 3.0 * mc.stderr, "{mc:?} vs {exact}");
    }

    #[test]
    fn seeded_runs_are_bit_identical() {
        let dom = unit_box(3);
        let f = |x: &[f64]| (x[0] * 3.0).sin() * x[1] + x[2];
        let a = integrate_mc(f, &dom, 50_000, 42).unwrap();
        let b = integrate_mc(f, &dom, 50_000, 42).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        let c = integrate_mc(f, &dom, 50_000, 43).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn rejects_bad_inputs() {
        let dom = unit_box(2);
        assert!(integrate_mc(|_| 1.0, &dom, 50, 0).is_err());
        let g = StratifiedGroup::euclidean(2).unwrap();
        assert!(Domain::new(&g, vec![0.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(dom.clone().with_excision(Excision::Hyperplane { index: 0, epsilon: 0.0 }).is_err());
        let pt = dom
            .clone()
            .with_excision(Excision::Point { center: vec![0.5, 0.5], epsilon: 0.1 })
            .unwrap();
        assert!(matches!(
            integrate_gl(|_| 1.0, &pt, 4),
            Err(Error::UnsupportedExcision(_))
        ));
        let g7 = StratifiedGroup::euclidean(7).unwrap();
        let d7 = Domain::new(&g7, vec![0.0; 7], vec![1.0; 7]).unwrap();
        assert!(integrate_gl(|_| 1.0, &d7, 2).is_err());
    }

    #[test]
    fn degenerate_domain_is_reported() {
        let g = StratifiedGroup::euclidean(2).unwrap();
        let dom = Domain::new(&g, vec![-1.0, -1.0], vec![1.0, 1.0])
            .unwrap()
            .with_excision(Excision::Point { center: vec![0.0, 0.0], epsilon: 1.41 })
            .unwrap();
        assert!(matches!(
            integrate_mc(|_| 1.0, &dom, 20_000, 0),
            Err(Error::DegenerateDomain(_))
        ));
    }

    #[test]
    fn linear_combination_uses_covariance() {
        let dom = unit_box(2);
        let est = integrate_mc_multi(
            2,
            &|x: &[f64], out: &mut [f64]| {
                out[0] = x[0];
                out[1] = x[0] + 1e-3 * x[1];
                Ok(())
            },
            &dom,
            20_000,
            5,
        )
        .unwrap();
        let diff = est.linear(&[1.0, -1.0]);
        // strongly correlated components: the difference is far better
        // resolved than either integral alone
        assert!(diff.stderr < 0.05 * est.stderr(0));
        assert!((diff.value + 5e-4).abs() < 3.0 * diff.stderr + 1e-12);
    }

    #[test]
    fn halton_points_avoid_excisions() {
        let g = StratifiedGroup::euclidean(3).unwrap();
        let dom = Domain::new(&g, vec![-1.0; 3], vec![1.0; 3])
            .unwrap()
            .with_excision(Excision::Hyperplane { index: 1, epsilon: 0.2 })
            .unwrap();
        let pts = halton_points(&dom, 500, 7).unwrap();
        assert_eq!(pts.len(), 500);
        assert!(pts.iter().all(|p| p[1].abs() >= 0.2 && dom.contains(p)));
        assert_eq!(pts, halton_points(&dom, 500, 7).unwrap());
        assert_ne!(pts, halton_points(&dom, 500, 8).unwrap());
    }
}

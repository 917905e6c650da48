//! Anisotropic Hardy and Rellich inequalities with weights `|x'_i|^{-p_i}`
//! and `|x'_i|^{-2 p_i}`.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{is_flat, require_nonnegative, value_and_gradient, Relation, Run, VerificationReport};
use crate::catalog::PowerProduct;
use crate::error::{Error, Result};
use crate::exponent::ExponentVector;
use crate::field::{Field, FieldInfo, FieldRef, Scalar, SignClass, Smoothness};
use crate::group::StratifiedGroup;
use crate::hcalc::{field_jet, second_field};
use crate::quad::{halton_points, integrate_multi, Domain, QuadConfig};

/// `((p - 1) / p)^p`.
pub fn hardy_constant(p: f64) -> f64 {
    ((p - 1.0) / p).powf(p)
}

/// `(a(a-1))^{p-1} (ap - 2p - a + 2)(ap - 2p - a + 1)`.
pub fn rellich_constant(alpha: f64, p: f64) -> f64 {
    (alpha * (alpha - 1.0)).powf(p - 1.0)
        * (alpha * p - 2.0 * p - alpha + 2.0)
        * (alpha * p - 2.0 * p - alpha + 1.0)
}

/// `sum_i ∫|X_i u|^{p_i} >= sum_i K_i ∫|u|^{p_i} / |x'_i|^{p_i}` with
/// `K_i = hardy_constant(p_i)`. Hyperplanes `x'_i = 0` met by the box are
/// excised.
pub fn verify_hardy(
    g: &StratifiedGroup,
    p: &ExponentVector,
    u: &FieldRef,
    dom: &Domain,
    cfg: &QuadConfig,
) -> Result<VerificationReport> {
    let n = g.first_dim();
    p.check_len(n)?;
    let consts: Vec<f64> = p.as_slice().iter().map(|&pi| hardy_constant(pi)).collect();
    let mut run = Run::new(
        "hardy",
        g,
        dom,
        cfg,
        json!({ "p": p.as_slice(), "u": u.info().name, "constants": consts }),
    )?;
    run.excise_hyperplanes(0..n)?;
    let large: Vec<String> = p
        .as_slice()
        .iter()
        .enumerate()
        .filter(|(_, &pi)| pi >= n as f64)
        .map(|(i, pi)| format!("p_{} = {pi}", i + 1))
        .collect();
    if !large.is_empty() {
        run.note(format!(
            "warning: {} not below N = {n}; checked anyway",
            large.join(", ")
        ));
    }
    let ps = p.as_slice();
    let est = integrate_multi(
        1 + n,
        &|x: &[f64], out: &mut [f64]| {
            let (u0, grad) = value_and_gradient(g, &**u, x);
            if is_flat(u0, &grad) {
                return Ok(());
            }
            require_nonnegative(u0, x)?;
            for i in 0..n {
                out[0] += grad[i].abs().powf(ps[i]);
                out[1 + i] = u0.abs().powf(ps[i]) / x[i].abs().powf(ps[i]);
            }
            Ok(())
        },
        &run.dom,
        cfg,
    )?;
    let mut rhs_coeffs = vec![0.0];
    rhs_coeffs.extend(&consts);
    let mut diff = vec![1.0];
    diff.extend(consts.iter().map(|c| -c));
    let sigma = est.linear(&diff).stderr;
    Ok(run.finish(Relation::Ge, est.result(0), est.linear(&rhs_coeffs), sigma))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RellichParams {
    pub alpha: Vec<f64>,
}

impl RellichParams {
    pub fn new(alpha: Vec<f64>) -> Self {
        RellichParams { alpha }
    }

    pub fn uniform(alpha: f64, n: usize) -> Self {
        RellichParams {
            alpha: vec![alpha; n],
        }
    }

    /// Enforces `2 < alpha_i < N - 2`, which needs `N >= 5`.
    pub fn check(&self, n: usize) -> Result<()> {
        if self.alpha.len() != n {
            return Err(Error::AlphaOutOfRange(format!(
                "expected {n} exponents alpha, got {}",
                self.alpha.len()
            )));
        }
        let hi = n as f64 - 2.0;
        for (i, &a) in self.alpha.iter().enumerate() {
            if !(a > 2.0 && a < hi) {
                return Err(Error::AlphaOutOfRange(format!(
                    "alpha_{} = {a} must lie in (2, N - 2) = (2, {hi}); \
                     the window is nonempty only for first-stratum dimension N >= 5",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn constants(&self, p: &ExponentVector) -> Vec<f64> {
        self.alpha
            .iter()
            .zip(p.as_slice())
            .map(|(&a, &pi)| rellich_constant(a, pi))
            .collect()
    }
}

pub fn verify_rellich(
    g: &StratifiedGroup,
    p: &ExponentVector,
    params: &RellichParams,
    u: &FieldRef,
    dom: &Domain,
    cfg: &QuadConfig,
) -> Result<VerificationReport> {
    let n = g.first_dim();
    p.check_len(n)?;
    params.check(n)?;
    if u.info().smoothness != Smoothness::C2 {
        return Err(Error::NotTwiceDifferentiable(u.info().name));
    }
    let consts = params.constants(p);
    let mut run = Run::new(
        "rellich",
        g,
        dom,
        cfg,
        json!({
            "p": p.as_slice(),
            "alpha": params.alpha,
            "u": u.info().name,
            "constants": consts,
        }),
    )?;
    run.excise_hyperplanes(0..n)?;
    let negative: Vec<String> = consts
        .iter()
        .enumerate()
        .filter(|(_, c)| **c < 0.0)
        .map(|(i, c)| format!("C_{} = {c}", i + 1))
        .collect();
    if !negative.is_empty() {
        run.note(format!(
            "negative constants ({}): the right-hand side is nonpositive",
            negative.join(", ")
        ));
    }

    // sign of X_i^2 v for the auxiliary v = prod |x'_j|^{alpha_j}
    let v = PowerProduct {
        alphas: params.alpha.clone(),
    };
    let probes = halton_points(&run.dom, 64, cfg.seed)?;
    let (mut positive, mut total) = (0usize, 0usize);
    for x in &probes {
        for i in 0..n {
            let s = second_field(g, i, &v, x)?;
            total += 1;
            if s > 0.0 {
                positive += 1;
            }
        }
    }
    run.note(format!(
        "auxiliary v = prod |x'_j|^alpha_j has X_i^2 v > 0 at {positive}/{total} sampled (point, i)"
    ));

    let ps = p.as_slice();
    let est = integrate_multi(
        1 + n,
        &|x: &[f64], out: &mut [f64]| {
            let u0 = u.eval_real(x);
            let mut second = vec![0.0; n];
            for (i, s) in second.iter_mut().enumerate() {
                *s = field_jet(g, i, &**u, x)?.du;
            }
            if is_flat(u0, &second) {
                return Ok(());
            }
            require_nonnegative(u0, x)?;
            for i in 0..n {
                out[0] += second[i].abs().powf(ps[i]);
                out[1 + i] = u0.abs().powf(ps[i]) / x[i].abs().powf(2.0 * ps[i]);
            }
            Ok(())
        },
        &run.dom,
        cfg,
    )?;
    let mut rhs_coeffs = vec![0.0];
    rhs_coeffs.extend(&consts);
    let mut diff = vec![1.0];
    diff.extend(consts.iter().map(|c| -c));
    let sigma = est.linear(&diff).stderr;
    Ok(run.finish(Relation::Ge, est.result(0), est.linear(&rhs_coeffs), sigma))
}

/// `prod_j x_j^{a_j} B(ln x_j / ln(1/delta))` on `[delta, 1/delta]^N`, with
/// `B(s) = exp(1 - 1/(1 - s^2))`: a smooth truncation of the Hardy
/// extremal profile.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessFamily {
    pub alphas: Vec<f64>,
    pub delta: f64,
}

impl Field for SharpnessFamily {
    fn info(&self) -> FieldInfo {
        FieldInfo::new(
            format!("truncated_extremal(delta={})", self.delta),
            Smoothness::C2,
            SignClass::Nonnegative,
        )
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let scale = 1.0 / (1.0 / self.delta).ln();
        let mut out = S::one();
        for (&xi, &a) in x.iter().zip(&self.alphas) {
            if xi.value() <= 0.0 {
                return S::zero();
            }
            let s = xi.ln() * scale;
            let q = S::one() - s * s;
            if q.value() <= 0.0 {
                return S::zero();
            }
            out *= xi.powf(a) * (S::one() - q.recip()).exp();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessRow {
    pub delta: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub ratio_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessTable {
    pub theorem: String,
    pub rows: Vec<SharpnessRow>,
    pub trend: String,
}

/// LHS/RHS ratios of the Hardy inequality along the truncated extremal
/// family, for each `delta` in decreasing order.
pub fn sharpness_probe(
    tag: &str,
    g: &StratifiedGroup,
    p: &ExponentVector,
    deltas: &[f64],
    cfg: &QuadConfig,
) -> Result<SharpnessTable> {
    if tag != "hardy" {
        return Err(Error::Unsupported(format!(
            "no extremal family is defined for `{tag}`"
        )));
    }
    if g.step() != 1 {
        return Err(Error::Unsupported(
            "the truncated extremal family is defined on Euclidean groups".into(),
        ));
    }
    let n = g.first_dim();
    p.check_len(n)?;
    if deltas.is_empty() {
        return Err(Error::InvalidParameter("no delta values".into()));
    }
    let mut deltas = deltas.to_vec();
    for &d in &deltas {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta = {d} must lie in (0, 1); delta = 0 is the untruncated profile, which is not C^1"
            )));
        }
    }
    deltas.sort_by(|a, b| b.total_cmp(a));
    let alphas: Vec<f64> = p.as_slice().iter().map(|pi| (pi - 1.0) / pi).collect();
    let consts: Vec<f64> = p.as_slice().iter().map(|&pi| hardy_constant(pi)).collect();
    let ps = p.as_slice();
    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in &deltas {
        let u = SharpnessFamily {
            alphas: alphas.clone(),
            delta,
        };
        let dom = Domain::new(g, vec![delta; n], vec![1.0 / delta; n])?;
        let est = integrate_multi(
            2,
            &|x: &[f64], out: &mut [f64]| {
                let (u0, grad) = value_and_gradient(g, &u, x);
                for i in 0..n {
                    out[0] += grad[i].abs().powf(ps[i]);
                    out[1] += consts[i] * u0.abs().powf(ps[i]) / x[i].abs().powf(ps[i]);
                }
                Ok(())
            },
            &dom,
            cfg,
        )?;
        let (l, r) = (est.values[0], est.values[1]);
        let ratio = l / r;
        let ratio_stderr = est.propagate(&[1.0 / r, -l / (r * r)]);
        rows.push(SharpnessRow {
            delta,
            lhs: l,
            rhs: r,
            ratio,
            ratio_stderr,
        });
    }
    let decreasing = rows.windows(2).all(|w| w[1].ratio < w[0].ratio);
    let trend = if rows.len() < 2 {
        "single delta; no trend".to_string()
    } else if decreasing {
        format!(
            "ratio decreases from {:.4} to {:.4} as delta shrinks",
            rows[0].ratio,
            rows[rows.len() - 1].ratio
        )
    } else {
        "ratio is not monotone in delta".to_string()
    };
    Ok(SharpnessTable {
        theorem: tag.to_string(),
        rows,
        trend,
    })
}

//! Hardy inequality with the Gaussian weight `exp(-|(x x0^{-1})'|^2 / 4λ)`
//! and the integration-by-parts identity behind it.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{is_flat, norm2, value_and_gradient, Relation, Run, VerificationReport};
use crate::error::{Error, Result};
use crate::field::FieldRef;
use crate::group::StratifiedGroup;
use crate::quad::{integrate_multi, Domain, QuadConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentialWeightParams {
    pub x0: Vec<f64>,
    pub lambda: f64,
}

impl ExponentialWeightParams {
    pub fn check(&self, g: &StratifiedGroup) -> Result<()> {
        g.check_point(&self.x0)?;
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    /// `y = (x x0^{-1})'` and `W = exp(-|y|^2 / 4λ)`.
    fn shift_and_weight(&self, g: &StratifiedGroup, x: &[f64]) -> (Vec<f64>, f64) {
        let y = g.first_stratum_difference(x, &self.x0);
        let w = (-norm2(&y) / (4.0 * self.lambda)).exp();
        (y, w)
    }
}

fn require_n3(g: &StratifiedGroup) -> Result<usize> {
    let n = g.first_dim();
    if n < 3 {
        return Err(Error::InvalidGroup(format!(
            "first-stratum dimension N = {n}; the inequality needs N >= 3"
        )));
    }
    Ok(n)
}

/// `∫ W ((N-2)^2/(4|x'|^2) - N/(4λ) + |y|^2/(16λ^2)) |u|^2 <= ∫ W |∇u|^2`.
pub fn verify_exponential_weight(
    g: &StratifiedGroup,
    params: &ExponentialWeightParams,
    u: &FieldRef,
    dom: &Domain,
    cfg: &QuadConfig,
) -> Result<VerificationReport> {
    let n = require_n3(g)?;
    params.check(g)?;
    let mut run = Run::new(
        "exponential_weight",
        g,
        dom,
        cfg,
        json!({ "x0": params.x0, "lambda": params.lambda, "u": u.info().name }),
    )?;
    run.note("constant term taken as -N/(4*lambda)");
    run.excise_hyperplanes(0..n)?;
    let lam = params.lambda;
    let h = (n as f64 - 2.0).powi(2) / 4.0;
    let est = integrate_multi(
        2,
        &|x: &[f64], out: &mut [f64]| {
            let (u0, grad) = value_and_gradient(g, &**u, x);
            if is_flat(u0, &grad) {
                return Ok(());
            }
            let (y, w) = params.shift_and_weight(g, x);
            let xp2 = norm2(&x[..n]);
            let pot = h / xp2 - n as f64 / (4.0 * lam) + norm2(&y) / (16.0 * lam * lam);
            out[0] = w * pot * u0 * u0;
            out[1] = w * norm2(&grad);
            Ok(())
        },
        &run.dom,
        cfg,
    )?;
    let sigma = est.linear(&[1.0, -1.0]).stderr;
    Ok(run.finish(Relation::Le, est.result(0), est.result(1), sigma))
}

/// `(N-2)^2/4 ∫|u|^2/|x'|^2 <= ∫|∇u|^2`, the unweighted limit of the
/// exponential-weight inequality.
pub fn verify_horizontal_hardy(
    g: &StratifiedGroup,
    u: &FieldRef,
    dom: &Domain,
    cfg: &QuadConfig,
) -> Result<VerificationReport> {
    let n = require_n3(g)?;
    let mut run = Run::new("horizontal_hardy", g, dom, cfg, json!({ "u": u.info().name }))?;
    run.excise_hyperplanes(0..n)?;
    let h = (n as f64 - 2.0).powi(2) / 4.0;
    let est = integrate_multi(
        2,
        &|x: &[f64], out: &mut [f64]| {
            let (u0, grad) = value_and_gradient(g, &**u, x);
            if is_flat(u0, &grad) {
                return Ok(());
            }
            out[0] = h * u0 * u0 / norm2(&x[..n]);
            out[1] = norm2(&grad);
            Ok(())
        },
        &run.dom,
        cfg,
    )?;
    let sigma = est.linear(&[1.0, -1.0]).stderr;
    Ok(run.finish(Relation::Le, est.result(0), est.result(1), sigma))
}

/// Equality `∫ (y·∇u) u W = -1/2 ∫ (N - |y|^2/(2λ)) W |u|^2`.
pub fn check_ibp_identity(
    g: &StratifiedGroup,
    params: &ExponentialWeightParams,
    u: &FieldRef,
    dom: &Domain,
    cfg: &QuadConfig,
) -> Result<VerificationReport> {
    params.check(g)?;
    let n = g.first_dim();
    let mut run = Run::new(
        "ibp_identity",
        g,
        dom,
        cfg,
        json!({ "x0": params.x0, "lambda": params.lambda, "u": u.info().name }),
    )?;
    run.note("u must vanish near the domain boundary for the identity to hold");
    let lam = params.lambda;
    let est = integrate_multi(
        2,
        &|x: &[f64], out: &mut [f64]| {
            let (u0, grad) = value_and_gradient(g, &**u, x);
            if is_flat(u0, &grad) {
                return Ok(());
            }
            let (y, w) = params.shift_and_weight(g, x);
            let dot: f64 = y.iter().zip(&grad).map(|(a, b)| a * b).sum();
            out[0] = dot * u0 * w;
            out[1] = -0.5 * (n as f64 - norm2(&y) / (2.0 * lam)) * w * u0 * u0;
            Ok(())
        },
        &run.dom,
        cfg,
    )?;
    let sigma = est.linear(&[1.0, -1.0]).stderr;
    Ok(run.finish(Relation::Eq, est.result(0), est.result(1), sigma))
}

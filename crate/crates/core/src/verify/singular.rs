//! Hardy inequality with several singular points, the matching uncertainty
//! principle, harmonicity of the superposed kernel, and the Euclidean
//! building-block inequality for a vector field `A`.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{is_flat, norm2, value_and_gradient, Relation, Run, VerificationReport};
use crate::error::{Error, Result};
use crate::field::{Field, FieldInfo, FieldRef, HorizontalVectorField, Scalar, SignClass, Smoothness};
use crate::group::StratifiedGroup;
use crate::hcalc::{horizontal_divergence, second_field};
use crate::picone::IdentityReport;
use crate::quad::{integrate_multi, Domain, Excision, QuadConfig, QuadratureResult};
use crate::verdict::Verdict;

/// Singular points `a_1, ..., a_m` of the group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularityList {
    pub points: Vec<Vec<f64>>,
    first_dim: usize,
}

impl SingularityList {
    pub fn new(g: &StratifiedGroup, points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("need at least one singularity".into()));
        }
        let n = g.first_dim();
        for a in &points {
            g.check_point(a)?;
        }
        for i in 0..points.len() {
            for j in 0..i {
                if points[i][..n] == points[j][..n] {
                    return Err(Error::InvalidParameter(format!(
                        "singularities {} and {} share first-stratum part {:?}",
                        j + 1,
                        i + 1,
                        &points[i][..n]
                    )));
                }
            }
        }
        Ok(SingularityList { points, first_dim: n })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `a'_k`.
    pub fn first_stratum(&self, k: usize) -> &[f64] {
        &self.points[k][..self.first_dim]
    }
}

/// `w(x) = sum_k |x' - a'_k|^{2-N}` with the derived Hardy weight.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSingularWeight {
    pub centers: Vec<Vec<f64>>,
    pub first_dim: usize,
}

impl MultiSingularWeight {
    /// The optimisation parameter fixed by `div A = -|A|^2`.
    pub const LAMBDA: f64 = 0.5;

    pub fn new(g: &StratifiedGroup, sing: &SingularityList) -> Result<Self> {
        let n = g.first_dim();
        if n < 3 {
            return Err(Error::InvalidGroup(format!(
                "first-stratum dimension N = {n}; the kernel |x'|^(2-N) needs N >= 3"
            )));
        }
        Ok(MultiSingularWeight {
            centers: (0..sing.len()).map(|k| sing.first_stratum(k).to_vec()).collect(),
            first_dim: n,
        })
    }

    /// `sum_k (x' - a'_k) / |x' - a'_k|^N` and `w`.
    fn parts(&self, x: &[f64]) -> (Vec<f64>, f64) {
        let n = self.first_dim;
        let mut s = vec![0.0; n];
        let mut w = 0.0;
        for a in &self.centers {
            let y: Vec<f64> = (0..n).map(|j| x[j] - a[j]).collect();
            let r = norm2(&y).sqrt();
            w += r.powf(2.0 - n as f64);
            let rn = r.powi(n as i32);
            for j in 0..n {
                s[j] += y[j] / rn;
            }
        }
        (s, w)
    }

    /// `sum_j |sum_k y_kj / |y_k|^N|^2 / w^2`.
    pub fn weight(&self, x: &[f64]) -> f64 {
        let (s, w) = self.parts(x);
        norm2(&s) / (w * w)
    }

    /// `A = grad log w = -(N - 2) / w * sum_k y_k / |y_k|^N`.
    pub fn a_field(&self, x: &[f64]) -> Vec<f64> {
        let (s, w) = self.parts(x);
        let c = -(self.first_dim as f64 - 2.0) / w;
        s.into_iter().map(|v| c * v).collect()
    }

    pub fn constant(&self) -> f64 {
        let h = (self.first_dim as f64 - 2.0) / 2.0;
        h * h
    }
}

impl Field for MultiSingularWeight {
    fn info(&self) -> FieldInfo {
        FieldInfo::new(
            format!("w(m={})", self.centers.len()),
            Smoothness::C2,
            SignClass::Positive,
        )
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let mut w = S::zero();
        for a in &self.centers {
            let mut q = S::zero();
            for (&xi, &ai) in x.iter().zip(a) {
                let d = xi - ai;
                q += d * d;
            }
            w += q.powf(0.5 * (2.0 - self.first_dim as f64));
        }
        w
    }
}

fn require_point_excisions(dom: &Domain, sing: &SingularityList) -> Result<()> {
    let n = dom.first_dim;
    for k in 0..sing.len() {
        let a = sing.first_stratum(k);
        let inside = (0..n).all(|j| a[j] >= dom.lo[j] && a[j] <= dom.hi[j]);
        let excised = dom.excisions.iter().any(|e| match e {
            Excision::Point { center, .. } => {
                center.iter().zip(a).all(|(c, v)| (c - v).abs() <= 1e-12)
            }
            _ => false,
        });
        if inside && !excised {
            return Err(Error::SingularityInDomain {
                point: sing.points[k].clone(),
            });
        }
    }
    Ok(())
}

fn points_json(sing: &SingularityList) -> serde_json::Value {
    json!(sing.points)
}

/// `∫|∇u|^2 >= ((N-2)/2)^2 ∫ W |u|^2` with the multi-singular weight `W`.
pub fn verify_hardy_multi_singular(
    g: &StratifiedGroup,
    sing: &SingularityList,
    u: &FieldRef,
    dom: &Domain,
    cfg: &QuadConfig,
) -> Result<VerificationReport> {
    let w = MultiSingularWeight::new(g, sing)?;
    let run = Run::new(
        "multi_singular_hardy",
        g,
        dom,
        cfg,
        json!({ "singularities": points_json(sing), "u": u.info().name, "constant": w.constant() }),
    )?;
    require_point_excisions(&run.dom, sing)?;
    let est = integrate_multi(
        2,
        &|x: &[f64], out: &mut [f64]| {
            let (u0, grad) = value_and_gradient(g, &**u, x);
            if is_flat(u0, &grad) {
                return Ok(());
            }
            out[0] = norm2(&grad);
            out[1] = w.weight(x) * u0 * u0;
            Ok(())
        },
        &run.dom,
        cfg,
    )?;
    let c = w.constant();
    let sigma = est.linear(&[1.0, -c]).stderr;
    Ok(run.finish(Relation::Ge, est.result(0), est.linear(&[0.0, c]), sigma))
}

/// `(N-2)/2 ∫|u|^2 <= (∫|∇u|^2)^{1/2} (∫ |u|^2 / W)^{1/2}`.
pub fn verify_uncertainty(
    g: &StratifiedGroup,
    sing: &SingularityList,
    u: &FieldRef,
    dom: &Domain,
    cfg: &QuadConfig,
) -> Result<VerificationReport> {
    let w = MultiSingularWeight::new(g, sing)?;
    let run = Run::new(
        "uncertainty",
        g,
        dom,
        cfg,
        json!({ "singularities": points_json(sing), "u": u.info().name }),
    )?;
    require_point_excisions(&run.dom, sing)?;
    let est = integrate_multi(
        3,
        &|x: &[f64], out: &mut [f64]| {
            let (u0, grad) = value_and_gradient(g, &**u, x);
            if is_flat(u0, &grad) {
                return Ok(());
            }
            out[0] = u0 * u0;
            out[1] = norm2(&grad);
            out[2] = u0 * u0 / w.weight(x);
            Ok(())
        },
        &run.dom,
        cfg,
    )?;
    let h = (g.first_dim() as f64 - 2.0) / 2.0;
    let (ig, iw) = (est.values[1], est.values[2]);
    let lhs = est.linear(&[h, 0.0, 0.0]);
    let prod = (ig * iw).sqrt();
    // d(sqrt(ig iw)) = (sqrt(iw/ig) dig + sqrt(ig/iw) diw) / 2
    let grad_rhs = if prod > 0.0 {
        [0.0, 0.5 * (iw / ig).sqrt(), 0.5 * (ig / iw).sqrt()]
    } else {
        [0.0; 3]
    };
    let rhs = QuadratureResult {
        value: prod,
        stderr: est.propagate(&grad_rhs),
        n_evals: est.n_evals,
        method: est.method,
    };
    let sigma = est.propagate(&[-h, grad_rhs[1], grad_rhs[2]]);
    Ok(run.finish(Relation::Le, lhs, rhs, sigma))
}

/// Relative residual `|L w| / sum_k |X_k^2 w|` over the sample.
pub fn check_harmonicity_of_w(
    g: &StratifiedGroup,
    sing: &SingularityList,
    sample: &[Vec<f64>],
    seed: u64,
    tol: f64,
) -> Result<IdentityReport> {
    let w = MultiSingularWeight::new(g, sing)?;
    if sample.is_empty() {
        return Err(Error::EmptySample("no sample points".into()));
    }
    let mut max_res = 0.0f64;
    for x in sample {
        let mut total = 0.0;
        let mut scale = 0.0;
        for k in 0..g.first_dim() {
            let s = second_field(g, k, &w, x)?;
            total += s;
            scale += s.abs();
        }
        let res = if scale > 0.0 { total.abs() / scale } else { total.abs() };
        max_res = max_res.max(res);
    }
    Ok(IdentityReport {
        max_abs_residual: max_res,
        min_l: None,
        excluded_count: 0,
        sample_size: sample.len(),
        seed,
        verdict: if max_res <= tol {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        parts: Vec::new(),
    })
}

/// `∫|∇u|^2 >= (∫ div A |u|^2)^2 / (4 ∫|A|^2 |u|^2)`.
pub fn check_lemma_3_1(
    g: &StratifiedGroup,
    a: &HorizontalVectorField,
    u: &FieldRef,
    dom: &Domain,
    cfg: &QuadConfig,
) -> Result<VerificationReport> {
    let n = g.first_dim();
    if a.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: a.len(),
        });
    }
    let names: Vec<String> = a.components.iter().map(|c| c.info().name).collect();
    let mut run = Run::new(
        "lemma_3_1",
        g,
        dom,
        cfg,
        json!({ "A": names, "u": u.info().name }),
    )?;
    if g.step() != 1 {
        run.note("checked with horizontal derivatives on a non-Euclidean group");
    }
    let est = integrate_multi(
        3,
        &|x: &[f64], out: &mut [f64]| {
            let (u0, grad) = value_and_gradient(g, &**u, x);
            if is_flat(u0, &grad) {
                return Ok(());
            }
            out[0] = norm2(&grad);
            let div = horizontal_divergence(g, a, x)?;
            let a2: f64 = a.components.iter().map(|c| c.eval_real(x).powi(2)).sum();
            out[1] = div * u0 * u0;
            out[2] = a2 * u0 * u0;
            Ok(())
        },
        &run.dom,
        cfg,
    )?;
    let (id, ia) = (est.values[1], est.values[2]);
    let (rhs_value, grad) = if ia == 0.0 && id == 0.0 {
        run.note("div A and |A|^2 integrate to 0; right-hand side read as 0");
        (0.0, [0.0; 3])
    } else {
        if ia <= 3.0 * est.stderr(2) {
            return Err(Error::ZeroDenominator(format!(
                "∫|A|^2|u|^2 = {ia:e} is within 3σ = {:e} of zero",
                3.0 * est.stderr(2)
            )));
        }
        (
            0.25 * id * id / ia,
            [0.0, 0.5 * id / ia, -0.25 * id * id / (ia * ia)],
        )
    };
    let rhs = QuadratureResult {
        value: rhs_value,
        stderr: est.propagate(&grad),
        n_evals: est.n_evals,
        method: est.method,
    };
    let sigma = est.propagate(&[1.0, -grad[1], -grad[2]]);
    Ok(run.finish(Relation::Ge, est.result(0), rhs, sigma))
}

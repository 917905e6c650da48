//! Many-particle Hardy inequality, the identities for
//! `rho^2 = sum_{i<j} |x'_i - x'_j|^2`, the ground-state representation and
//! the total-separation identity on the product group `G^n`.

use serde_json::json;

use super::{is_flat, norm2, value_and_gradient, Relation, Run, VerificationReport};
use crate::error::{Error, Result};
use crate::field::{Field, FieldInfo, FieldRef, Scalar, SignClass, Smoothness};
use crate::group::StratifiedGroup;
use crate::hcalc::{field_jet, horizontal_gradient, jet_point, sub_laplacian};
use crate::jet::Real;
use crate::picone::{IdentityReport, NamedResidual};
use crate::quad::{integrate_multi, Domain, Excision, QuadConfig};
use crate::verdict::Verdict;

/// `n` particles in the base group `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyParticleConfig {
    pub base: StratifiedGroup,
    pub n: usize,
    group: StratifiedGroup,
}

impl ManyParticleConfig {
    pub fn new(base: StratifiedGroup, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("need n >= 2 particles, got {n}")));
        }
        let group = StratifiedGroup::power(&base, n)?;
        Ok(ManyParticleConfig { base, n, group })
    }

    /// The product group `G^n`.
    pub fn group(&self) -> &StratifiedGroup {
        &self.group
    }

    /// First-stratum dimension `N` of one particle.
    pub fn particle_dim(&self) -> usize {
        self.base.first_dim()
    }

    /// `x'_i` inside a point of `G^n`.
    pub fn particle_first(&self, x: &[f64], i: usize) -> Vec<f64> {
        let n = self.particle_dim();
        x[i * n..(i + 1) * n].to_vec()
    }

    /// Coordinates of particle `i` as a point of `G`.
    pub fn particle(&self, x: &[f64], i: usize) -> Vec<f64> {
        self.group
            .factor_coords(i)
            .expect("product group")
            .iter()
            .map(|&c| x[c])
            .collect()
    }

    /// `r_ij = |x'_i - x'_j|`.
    pub fn r(&self, x: &[f64], i: usize, j: usize) -> f64 {
        let n = self.particle_dim();
        (0..n)
            .map(|k| (x[i * n + k] - x[j * n + k]).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn rho2_field(&self) -> Rho2 {
        Rho2 {
            n: self.n,
            particle_dim: self.particle_dim(),
        }
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j)))
    }

    /// Adds `|x'_i - x'_j| >= eps` for every pair lacking one.
    fn excise_diagonals(&self, run: &mut Run<'_>) -> Result<()> {
        let eps = 0.05 * run.dom.mean_half_width();
        let mut added = 0;
        for (i, j) in self.pairs() {
            let present = run.dom.excisions.iter().any(|e| {
                matches!(e, Excision::Diagonal { i: a, j: b, .. }
                    if (*a, *b) == (i, j) || (*a, *b) == (j, i))
            });
            if !present {
                run.dom.excisions.push(Excision::Diagonal {
                    block: self.particle_dim(),
                    i,
                    j,
                    epsilon: eps,
                });
                added += 1;
            }
        }
        if added > 0 {
            run.dom.validate()?;
            run.note(format!("excised {added} particle diagonals with r_ij >= {eps:.4}"));
        }
        Ok(())
    }
}

/// `rho^2(x) = sum_{i<j} |x'_i - x'_j|^2` on `G^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rho2 {
    pub n: usize,
    pub particle_dim: usize,
}

impl Field for Rho2 {
    fn info(&self) -> FieldInfo {
        FieldInfo::new("rho^2", Smoothness::C2, SignClass::Nonnegative)
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let m = self.particle_dim;
        let mut out = S::zero();
        for i in 0..self.n {
            for j in i + 1..self.n {
                for k in 0..m {
                    let d = x[i * m + k] - x[j * m + k];
                    out += d * d;
                }
            }
        }
        out
    }
}

/// `∫|∇u|^2 >= (N-2)^2 / n ∫ sum_{i<j} |u|^2 / r_ij^2`.
pub fn verify_many_particle(
    cfg: &ManyParticleConfig,
    u: &FieldRef,
    dom: &Domain,
    qcfg: &QuadConfig,
) -> Result<VerificationReport> {
    let (n, big_n) = (cfg.n, cfg.particle_dim());
    if n < 3 {
        return Err(Error::InvalidParameter(format!("the inequality needs n >= 3, got {n}")));
    }
    if big_n < 2 {
        return Err(Error::InvalidParameter(format!("needs N >= 2, got {big_n}")));
    }
    let g = cfg.group();
    let c = (big_n as f64 - 2.0).powi(2) / n as f64;
    let mut run = Run::new(
        "many_particle",
        g,
        dom,
        qcfg,
        json!({ "base": cfg.base.label(), "n": n, "u": u.info().name, "constant": c }),
    )?;
    cfg.excise_diagonals(&mut run)?;
    if big_n == 2 {
        run.note("N = 2: the constant (N-2)^2/n vanishes and the right-hand side is 0");
    }
    let est = integrate_multi(
        2,
        &|x: &[f64], out: &mut [f64]| {
            let (u0, grad) = value_and_gradient(g, &**u, x);
            if is_flat(u0, &grad) {
                return Ok(());
            }
            out[0] = norm2(&grad);
            out[1] = cfg.pairs().map(|(i, j)| u0 * u0 / cfg.r(x, i, j).powi(2)).sum();
            Ok(())
        },
        &run.dom,
        qcfg,
    )?;
    let sigma = est.linear(&[1.0, -c]).stderr;
    Ok(run.finish(Relation::Ge, est.result(0), est.linear(&[0.0, c]), sigma))
}

/// Pointwise relative residuals of `L rho^2 = 2n(n-1)N`,
/// `|∇rho^2|^2 = 4n rho^2` and
/// `sum_k sum_{i<j} (x_k x_i^{-1})'·(x_k x_j^{-1})' = (n-2)/2 sum_{i<j} |(x_i x_j^{-1})'|^2`.
pub fn check_rho_identities(
    cfg: &ManyParticleConfig,
    sample: &[Vec<f64>],
    seed: u64,
    tol: f64,
) -> Result<IdentityReport> {
    if sample.is_empty() {
        return Err(Error::EmptySample("no sample points".into()));
    }
    let g = cfg.group();
    let (n, big_n) = (cfg.n as f64, cfg.particle_dim() as f64);
    let rho2 = cfg.rho2_field();
    let lap_target = 2.0 * n * (n - 1.0) * big_n;
    let mut res = [0.0f64; 3];
    for x in sample {
        g.check_point(x)?;
        let r2 = rho2.eval(x.as_slice());
        let lap = sub_laplacian(g, &rho2, x)?;
        res[0] = res[0].max((lap - lap_target).abs() / lap_target);
        let grad = horizontal_gradient(g, &rho2, x)?;
        let target = 4.0 * n * r2;
        res[1] = res[1].max((norm2(&grad) - target).abs() / target.max(f64::MIN_POSITIVE));

        let parts: Vec<Vec<f64>> = (0..cfg.n).map(|i| cfg.particle(x, i)).collect();
        let diff = |a: usize, b: usize| -> Vec<f64> {
            let inv = cfg.base.inverse_law(&parts[b]);
            let prod = cfg.base.product_law(&parts[a], &inv);
            prod[..cfg.particle_dim()].to_vec()
        };
        let mut lhs = 0.0;
        let mut sq = 0.0;
        for (i, j) in cfg.pairs() {
            sq += norm2(&diff(i, j));
            for k in 0..cfg.n {
                let (a, b) = (diff(k, i), diff(k, j));
                lhs += a.iter().zip(&b).map(|(p, q)| p * q).sum::<f64>();
            }
        }
        let rhs = (n - 2.0) / 2.0 * sq;
        res[2] = res[2].max((lhs - rhs).abs() / sq.max(f64::MIN_POSITIVE));
    }
    let max = res.iter().copied().fold(0.0, f64::max);
    let names = ["sublaplacian_rho2", "gradient_rho2", "pair_sum"];
    Ok(IdentityReport {
        max_abs_residual: max,
        min_l: None,
        excluded_count: 0,
        sample_size: sample.len(),
        seed,
        verdict: if max <= tol { Verdict::Pass } else { Verdict::Fail },
        parts: names
            .iter()
            .zip(res)
            .map(|(name, r)| NamedResidual {
                name: name.to_string(),
                max_abs_residual: r,
            })
            .collect(),
    })
}

/// `f > 0` and exponent `alpha` in the substitution `v = f^{-alpha} u`.
#[derive(Clone, Debug)]
pub struct GroundStateParams {
    pub f: FieldRef,
    pub alpha: f64,
}

/// `[|∇u|^2, (a(1-a)|∇f|^2/f^2 - a Lf/f)|u|^2, |∇(f^{-a} u)|^2 f^{2a}]` at `x`.
fn ground_state_terms(
    g: &StratifiedGroup,
    f: &FieldRef,
    alpha: f64,
    u: &FieldRef,
    x: &[f64],
    out: &mut [f64],
) -> Result<()> {
    let (u0, grad_u) = value_and_gradient(g, &**u, x);
    if is_flat(u0, &grad_u) {
        return Ok(());
    }
    let n = g.first_dim();
    let mut f0 = 0.0;
    let mut grad_f2 = 0.0;
    let mut lap_f = 0.0;
    let mut grad_v2 = 0.0;
    for k in 0..n {
        let z = jet_point(g, k, x);
        let fj = f.eval_jet(&z);
        let uj = u.eval_jet(&z);
        f0 = fj.re;
        if !(f0 > 0.0) {
            return Err(Error::DomainViolation {
                point: x.to_vec(),
                reason: format!("f = {f0} <= 0"),
            });
        }
        grad_f2 += fj.du * fj.du;
        let vj = fj.powf(-alpha) * uj;
        grad_v2 += vj.du * vj.du;
        if alpha != 0.0 {
            lap_f += field_jet(g, k, &**f, x)?.du;
        }
    }
    out[0] = norm2(&grad_u);
    out[1] = (alpha * (1.0 - alpha) * grad_f2 / (f0 * f0) - alpha * lap_f / f0) * u0 * u0;
    out[2] = grad_v2 * f0.powf(2.0 * alpha);
    Ok(())
}

/// Equality `∫|∇u|^2 = ∫(a(1-a)|∇f|^2/f^2 - a Lf/f)|u|^2 + ∫|∇v|^2 f^{2a}`.
pub fn verify_ground_state(
    g: &StratifiedGroup,
    params: &GroundStateParams,
    u: &FieldRef,
    dom: &Domain,
    qcfg: &QuadConfig,
) -> Result<VerificationReport> {
    let (f, alpha) = (&params.f, params.alpha);
    if alpha != 0.0 && f.info().smoothness != Smoothness::C2 {
        return Err(Error::NotTwiceDifferentiable(f.info().name));
    }
    let mut run = Run::new(
        "ground_state",
        g,
        dom,
        qcfg,
        json!({ "f": f.info().name, "alpha": alpha, "u": u.info().name }),
    )?;
    run.note("u must vanish near the domain boundary for the identity to hold");
    let est = integrate_multi(
        3,
        &|x: &[f64], out: &mut [f64]| ground_state_terms(g, f, alpha, u, x, out),
        &run.dom,
        qcfg,
    )?;
    let sigma = est.linear(&[1.0, -1.0, -1.0]).stderr;
    Ok(run.finish(Relation::Eq, est.result(0), est.linear(&[0.0, 1.0, 1.0]), sigma))
}

/// `(2 - (n-1)N) / 4`.
pub fn total_separation_alpha(n: usize, big_n: usize) -> f64 {
    (2.0 - (n as f64 - 1.0) * big_n as f64) / 4.0
}

/// `n ((n-1)N/2 - 1)^2`.
pub fn total_separation_constant(n: usize, big_n: usize) -> f64 {
    let n = n as f64;
    n * ((n - 1.0) * big_n as f64 / 2.0 - 1.0).powi(2)
}

/// Equality `∫|∇u|^2 = c ∫|u|^2/rho^2 + ∫|∇(rho^{-2a} u)|^2 rho^{4a}`.
pub fn verify_total_separation(
    cfg: &ManyParticleConfig,
    u: &FieldRef,
    dom: &Domain,
    qcfg: &QuadConfig,
) -> Result<VerificationReport> {
    let (n, big_n) = (cfg.n, cfg.particle_dim());
    let alpha = total_separation_alpha(n, big_n);
    let c = total_separation_constant(n, big_n);
    let g = cfg.group();
    let mut run = Run::new(
        "total_separation",
        g,
        dom,
        qcfg,
        json!({
            "base": cfg.base.label(),
            "n": n,
            "alpha": alpha,
            "constant": c,
            "u": u.info().name,
        }),
    )?;
    cfg.excise_diagonals(&mut run)?;
    if c == 0.0 {
        run.note("the constant n((n-1)N/2 - 1)^2 vanishes");
    }
    let rho2 = cfg.rho2_field();
    let est = integrate_multi(
        3,
        &|x: &[f64], out: &mut [f64]| {
            let (u0, grad_u) = value_and_gradient(g, &**u, x);
            if is_flat(u0, &grad_u) {
                return Ok(());
            }
            let mut grad_v2 = 0.0;
            let mut r2 = 0.0;
            for k in 0..g.first_dim() {
                let z = jet_point(g, k, x);
                let rj = rho2.eval(z.as_slice());
                r2 = rj.re;
                let vj = rj.powf(-alpha) * u.eval_jet(&z);
                grad_v2 += vj.du * vj.du;
            }
            out[0] = norm2(&grad_u);
            out[1] = u0 * u0 / r2;
            out[2] = grad_v2 * r2.powf(2.0 * alpha);
            Ok(())
        },
        &run.dom,
        qcfg,
    )?;
    let sigma = est.linear(&[1.0, -c, -1.0]).stderr;
    Ok(run.finish(Relation::Eq, est.result(0), est.linear(&[0.0, c, 1.0]), sigma))
}

//! First- and second-order Picone expressions and their sampled verification.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::ExponentVector;
use crate::field::{FieldRef, Smoothness};
use crate::group::StratifiedGroup;
use crate::hcalc::{jet2_point, jet_point, DEFAULT_SMOOTH_EPS};
use crate::jet::Real;
use crate::verdict::Verdict;

/// `u >= 0` and `v > 0`.
#[derive(Clone, Debug)]
pub struct PiconePair {
    pub u: FieldRef,
    pub v: FieldRef,
}

impl PiconePair {
    pub fn new(u: FieldRef, v: FieldRef) -> Self {
        PiconePair { u, v }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    First,
    Second,
}

/// Per-direction summands of `L` and `R` (or `L_1` and `R_1`).
#[derive(Debug, Clone, PartialEq)]
pub struct PiconeTerms {
    pub l: Vec<f64>,
    pub r: Vec<f64>,
}

impl PiconeTerms {
    pub fn l_sum(&self) -> f64 {
        self.l.iter().sum()
    }

    pub fn r_sum(&self) -> f64 {
        self.r.iter().sum()
    }
}

fn domain_violation(x: &[f64], reason: String) -> Error {
    Error::DomainViolation {
        point: x.to_vec(),
        reason,
    }
}

fn check_signs(u: f64, v: f64, x: &[f64]) -> Result<()> {
    if !(u >= 0.0) {
        return Err(domain_violation(x, format!("u = {u} < 0")));
    }
    if !(v > 0.0) {
        return Err(domain_violation(x, format!("v = {v} <= 0")));
    }
    Ok(())
}

fn check_inputs(g: &StratifiedGroup, p: &ExponentVector, x: &[f64]) -> Result<()> {
    g.check_point(x)?;
    p.check_len(g.first_dim())
}

fn finite_terms(t: PiconeTerms, x: &[f64]) -> Result<PiconeTerms> {
    if t.l.iter().chain(&t.r).all(|v| v.is_finite()) {
        Ok(t)
    } else {
        Err(Error::NonFinite {
            what: "Picone terms".into(),
            point: x.to_vec(),
        })
    }
}

/// Summands of `L(u,v)` and `R(u,v)` at `x`.
pub fn first_order_terms(
    g: &StratifiedGroup,
    p: &ExponentVector,
    pair: &PiconePair,
    x: &[f64],
    eps: f64,
) -> Result<PiconeTerms> {
    check_inputs(g, p, x)?;
    let n = g.first_dim();
    let mut l = Vec::with_capacity(n);
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let pi = p.get(i);
        let z = jet_point(g, i, x);
        let u = pair.u.eval_jet(&z);
        let v = pair.v.eval_jet(&z);
        check_signs(u.re, v.re, x)?;
        let (xu, xv) = (u.du, v.du);
        if pi < 2.0 && xv.abs() < eps {
            return Err(Error::NonSmoothPoint {
                point: x.to_vec(),
                reason: format!("|X_{} v| = {:e} with p = {pi}", i + 1, xv.abs()),
            });
        }
        let flux = xv.signed_powf(pi - 2.0);
        // X_i(u^p / v^(p-1)) from the same jet
        let ratio = u.abs_powf(pi) / v.powf(pi - 1.0);
        let w = u.re / v.re;
        let grad = xu.abs().powf(pi);
        r.push(grad - ratio.du * flux);
        l.push(
            grad - pi * w.powf(pi - 1.0) * flux * xu + (pi - 1.0) * w.powf(pi) * xv.abs().powf(pi),
        );
    }
    finite_terms(PiconeTerms { l, r }, x)
}

/// Summands of `L_1(u,v)` and `R_1(u,v)` at `x`. Requires `X_i^2 v < 0`.
pub fn second_order_terms(
    g: &StratifiedGroup,
    p: &ExponentVector,
    pair: &PiconePair,
    x: &[f64],
    eps: f64,
) -> Result<PiconeTerms> {
    check_inputs(g, p, x)?;
    for f in [&pair.u, &pair.v] {
        if f.info().smoothness != Smoothness::C2 {
            return Err(Error::NotTwiceDifferentiable(f.info().name));
        }
    }
    let n = g.first_dim();
    let mut l = Vec::with_capacity(n);
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let pi = p.get(i);
        let z = jet2_point(g, i, x);
        let u = pair.u.eval_jet2(&z);
        let v = pair.v.eval_jet2(&z);
        let (u0, v0) = (u.re.re, v.re.re);
        check_signs(u0, v0, x)?;
        let (xu, x2u) = (u.du.re, u.du.du);
        let (xv, x2v) = (v.du.re, v.du.du);
        if !(x2v < 0.0) {
            return Err(Error::SignViolation {
                point: x.to_vec(),
                reason: format!("X_{}^2 v = {x2v} is not negative", i + 1),
            });
        }
        if pi < 2.0 && x2v.abs() < eps {
            return Err(Error::NonSmoothPoint {
                point: x.to_vec(),
                reason: format!("|X_{}^2 v| = {:e} with p = {pi}", i + 1, x2v.abs()),
            });
        }
        if pi < 2.0 && u0 < eps {
            return Err(domain_violation(
                x,
                format!("u = {u0:e} near zero makes u^(p-2) diverge (p_{} = {pi})", i + 1),
            ));
        }
        let flux = x2v.signed_powf(pi - 2.0);
        let ratio = u.abs_powf(pi) / v.powf(pi - 1.0);
        let w = u0 / v0;
        let grad = x2u.abs().powf(pi);
        r.push(grad - ratio.du.du * flux);
        let deficit = xu - w * xv;
        l.push(
            grad - pi * w.powf(pi - 1.0) * x2u * flux
                + (pi - 1.0) * w.powf(pi) * x2v.abs().powf(pi)
                - pi * (pi - 1.0) * u0.powf(pi - 2.0) / v0.powf(pi - 1.0)
                    * flux
                    * deficit
                    * deficit,
        );
    }
    finite_terms(PiconeTerms { l, r }, x)
}

pub fn terms(
    order: Order,
    g: &StratifiedGroup,
    p: &ExponentVector,
    pair: &PiconePair,
    x: &[f64],
    eps: f64,
) -> Result<PiconeTerms> {
    match order {
        Order::First => first_order_terms(g, p, pair, x, eps),
        Order::Second => second_order_terms(g, p, pair, x, eps),
    }
}

pub fn picone_r(g: &StratifiedGroup, p: &ExponentVector, pair: &PiconePair, x: &[f64]) -> Result<f64> {
    Ok(first_order_terms(g, p, pair, x, DEFAULT_SMOOTH_EPS)?.r_sum())
}

pub fn picone_l(g: &StratifiedGroup, p: &ExponentVector, pair: &PiconePair, x: &[f64]) -> Result<f64> {
    Ok(first_order_terms(g, p, pair, x, DEFAULT_SMOOTH_EPS)?.l_sum())
}

pub fn picone_r1(g: &StratifiedGroup, p: &ExponentVector, pair: &PiconePair, x: &[f64]) -> Result<f64> {
    Ok(second_order_terms(g, p, pair, x, DEFAULT_SMOOTH_EPS)?.r_sum())
}

pub fn picone_l1(g: &StratifiedGroup, p: &ExponentVector, pair: &PiconePair, x: &[f64]) -> Result<f64> {
    Ok(second_order_terms(g, p, pair, x, DEFAULT_SMOOTH_EPS)?.l_sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiconeTolerance {
    /// Bound on `|L - R|`.
    pub residual: f64,
    /// `L >= -nonneg` is accepted as nonnegative.
    pub nonneg: f64,
    /// Guard threshold for vanishing derivatives.
    pub smooth_eps: f64,
}

impl PiconeTolerance {
    pub fn for_order(order: Order) -> Self {
        match order {
            Order::First => PiconeTolerance {
                residual: 1e-8,
                nonneg: 1e-10,
                smooth_eps: DEFAULT_SMOOTH_EPS,
            },
            Order::Second => PiconeTolerance {
                residual: 1e-6,
                nonneg: 1e-8,
                smooth_eps: DEFAULT_SMOOTH_EPS,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub max_abs_residual: f64,
    #[serde(rename = "min_L")]
    pub min_l: Option<f64>,
    pub excluded_count: usize,
    pub sample_size: usize,
    pub seed: u64,
    pub verdict: Verdict,
    /// Residuals of the individual identities, when several are checked.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<NamedResidual>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedResidual {
    pub name: String,
    pub max_abs_residual: f64,
}

/// Evaluates `L` and `R` at every sample point.
///
/// Points rejected by the smoothness guards (and, for the second order, by
/// the `u ≈ 0` guard) are counted in `excluded_count`. Negative `u`,
/// nonpositive `v` and a nonnegative `X_i^2 v` abort the check with the
/// offending point.
pub fn check_picone(
    order: Order,
    g: &StratifiedGroup,
    p: &ExponentVector,
    pair: &PiconePair,
    sample: &[Vec<f64>],
    tol: &PiconeTolerance,
    seed: u64,
) -> Result<IdentityReport> {
    if sample.is_empty() {
        return Err(Error::EmptySample("no sample points".into()));
    }
    let results: Vec<Result<Option<(f64, f64)>>> = sample
        .par_iter()
        .map(|x| {
            check_signs(pair.u.eval_real(x), pair.v.eval_real(x), x)?;
            match terms(order, g, p, pair, x, tol.smooth_eps) {
                Ok(t) => {
                    let (l, r) = (t.l_sum(), t.r_sum());
                    Ok(Some(((l - r).abs(), l)))
                }
                Err(e) if e.is_guard_exclusion() => Ok(None),
                // signs were checked above, so this is the u ≈ 0 guard
                Err(Error::DomainViolation { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut max_res = 0.0f64;
    let mut min_l = f64::INFINITY;
    let mut excluded = 0;
    for r in results {
        match r? {
            Some((res, l)) => {
                max_res = max_res.max(res);
                min_l = min_l.min(l);
            }
            None => excluded += 1,
        }
    }
    if excluded == sample.len() {
        return Err(Error::EmptySample(format!(
            "all {} points were excluded by the guards",
            sample.len()
        )));
    }
    let verdict = if max_res <= tol.residual && min_l >= -tol.nonneg {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(IdentityReport {
        max_abs_residual: max_res,
        min_l: Some(min_l),
        excluded_count: excluded,
        sample_size: sample.len(),
        seed,
        verdict,
        parts: Vec::new(),
    })
}

/// Largest deviation of the `i`-th summand of `L` from `lambda^{p_i}` times
/// itself under `(u, v) -> (lambda u, lambda v)`.
pub fn homogeneity_residual(
    g: &StratifiedGroup,
    p: &ExponentVector,
    pair: &PiconePair,
    x: &[f64],
    lambda: f64,
) -> Result<f64> {
    use crate::catalog::Scaled;
    use std::sync::Arc;
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter("lambda must be positive".into()));
    }
    let scaled = PiconePair::new(
        Arc::new(Scaled {
            inner: pair.u.clone(),
            factor: lambda,
        }),
        Arc::new(Scaled {
            inner: pair.v.clone(),
            factor: lambda,
        }),
    );
    let base = first_order_terms(g, p, pair, x, DEFAULT_SMOOTH_EPS)?;
    let big = first_order_terms(g, p, &scaled, x, DEFAULT_SMOOTH_EPS)?;
    Ok(base
        .l
        .iter()
        .zip(&big.l)
        .zip(p.as_slice())
        .map(|((a, b), &pi)| (b - lambda.powf(pi) * a).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{Bump, Constant, Paraboloid, Polynomial, PositiveMix, Scaled, Zero};
    use std::sync::Arc;

    fn e2() -> StratifiedGroup {
        StratifiedGroup::euclidean(2).unwrap()
    }

    fn poly(s: &str) -> FieldRef {
        Arc::new(Polynomial::parse(s).unwrap())
    }

    #[test]
    fn polynomial_pair_matches_hand_expansion() {
        // u = x0^2 + x1^2, v = 1 + x0^2, p = (2, 2), x = (1, 1):
        // u = 2, v = 2, grad u = (2, 2), grad v = (2, 0)
        // R_1 = |2|^2 - d1(u^2/v) * 2 with d1(u^2/v) = (2 u u1 v - u^2 v1)/v^2 = (16 - 8)/4 = 2
        // R_2 = |2|^2 - 0
        let pair = PiconePair::new(poly("x0^2 + x1^2"), poly("1 + x0^2"));
        let p = ExponentVector::uniform(2.0, 2).unwrap();
        let x = [1.0, 1.0];
        let r = picone_r(&e2(), &p, &pair, &x).unwrap();
        let l = picone_l(&e2(), &p, &pair, &x).unwrap();
        assert!((r - 4.0).abs() < 1e-14, "{r}");
        // L_1 = 4 - 2*1*2*2 + 1*1*4 = 0, L_2 = 4
        assert!((l - 4.0).abs() < 1e-14, "{l}");
    }

    #[test]
    fn proportional_pairs_vanish() {
        let g = StratifiedGroup::heisenberg(1).unwrap();
        let v: FieldRef = Arc::new(PositiveMix::new(3, 4, false));
        let p = ExponentVector::new(vec![1.5, 3.0]).unwrap();
        for c in [0.5, 1.0, 3.0] {
            let u: FieldRef = Arc::new(Scaled {
                inner: v.clone(),
                factor: c,
            });
            let pair = PiconePair::new(u, v.clone());
            for x in [[0.1, 0.2, 0.3], [-0.4, 0.7, 1.1]] {
                assert!(picone_l(&g, &p, &pair, &x).unwrap().abs() < 1e-9);
                assert!(picone_r(&g, &p, &pair, &x).unwrap().abs() < 1e-9);
            }
        }
    }

    #[test]
    fn zero_u_gives_zero() {
        let pair = PiconePair::new(Arc::new(Zero), poly("2 + x0"));
        let p = ExponentVector::new(vec![1.5, 2.5]).unwrap();
        assert_eq!(picone_r(&e2(), &p, &pair, &[0.3, 0.1]).unwrap(), 0.0);
        assert_eq!(picone_l(&e2(), &p, &pair, &[0.3, 0.1]).unwrap(), 0.0);
    }

    #[test]
    fn guards() {
        let p = ExponentVector::new(vec![1.5, 2.0]).unwrap();
        let bad_v = PiconePair::new(Arc::new(Constant(1.0)), poly("x0"));
        assert!(matches!(
            picone_l(&e2(), &p, &bad_v, &[-1.0, 0.0]),
            Err(Error::DomainViolation { .. })
        ));
        // X_1 v = 0 with p_1 < 2
        let flat = PiconePair::new(Arc::new(Constant(1.0)), poly("1 + x1^2"));
        assert!(matches!(
            picone_l(&e2(), &p, &flat, &[0.0, 0.5]),
            Err(Error::NonSmoothPoint { .. })
        ));
        let convex = PiconePair::new(Arc::new(Constant(1.0)), poly("1 + x0^2"));
        assert!(matches!(
            picone_l1(&e2(), &p, &convex, &[0.2, 0.5]),
            Err(Error::SignViolation { .. })
        ));
    }

    #[test]
    fn second_order_identity_on_concave_v() {
        let g = StratifiedGroup::euclidean(3).unwrap();
        let v: FieldRef = Arc::new(Paraboloid {
            peak: 2.0,
            curvature: 0.25,
            first_dim: 3,
        });
        let u: FieldRef = Arc::new(Bump::new(vec![0.1, 0.0, -0.1], 0.9, 1.0));
        let pair = PiconePair::new(u, v);
        for p in [vec![2.0, 2.0, 2.0], vec![2.0, 3.0, 2.5]] {
            let p = ExponentVector::new(p).unwrap();
            for x in [[0.2, 0.1, 0.0], [0.0, -0.3, 0.25], [-0.5, 0.2, 0.1]] {
                let t = second_order_terms(&g, &p, &pair, &x, DEFAULT_SMOOTH_EPS).unwrap();
                assert!((t.l_sum() - t.r_sum()).abs() < 1e-8);
                assert!(t.l_sum() >= -1e-8);
            }
        }
    }

    #[test]
    fn summands_scale_with_their_exponent() {
        let g = StratifiedGroup::heisenberg(1).unwrap();
        let pair = PiconePair::new(
            Arc::new(PositiveMix::new(3, 8, true)),
            Arc::new(PositiveMix::new(3, 8, false)),
        );
        let p = ExponentVector::new(vec![1.5, 3.0]).unwrap();
        for lambda in [0.5, 2.0, 3.7] {
            let r = homogeneity_residual(&g, &p, &pair, &[0.3, -0.2, 0.5], lambda).unwrap();
            assert!(r <= 1e-9, "{r}");
        }
    }

    #[test]
    fn report_excludes_guarded_points() {
        let p = ExponentVector::new(vec![1.5, 2.0]).unwrap();
        let pair = PiconePair::new(poly("1 + x0^2"), poly("2 + x0^2"));
        let sample = vec![vec![0.0, 0.3], vec![0.5, 0.1], vec![-0.4, 0.2]];
        let tol = PiconeTolerance::for_order(Order::First);
        let rep = check_picone(Order::First, &e2(), &p, &pair, &sample, &tol, 1).unwrap();
        assert_eq!(rep.excluded_count, 1);
        assert_eq!(rep.sample_size, 3);
        assert_eq!(rep.verdict, Verdict::Pass);
        let json = serde_json::to_value(&rep).unwrap();
        assert!(json.get("min_L").is_some());
        let only_bad = vec![vec![0.0, 0.3]];
        assert!(matches!(
            check_picone(Order::First, &e2(), &p, &pair, &only_bad, &tol, 1),
            Err(Error::EmptySample(_))
        ));
    }
}

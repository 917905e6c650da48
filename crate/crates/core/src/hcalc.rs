//! Horizontal derivatives of scalar fields via nested forward jets.

use crate::error::{Error, Result};
use crate::exponent::ExponentVector;
use crate::field::{HorizontalVectorField, ScalarField, Smoothness};
use crate::group::StratifiedGroup;
use crate::jet::{Dual, Jet, Jet2, Real};

/// Default threshold below which `|X_i f|` counts as vanishing.
pub const DEFAULT_SMOOTH_EPS: f64 = 1e-10;

fn check_index(g: &StratifiedGroup, k: usize) -> Result<()> {
    if k >= g.first_dim() {
        return Err(Error::FieldIndex {
            index: k,
            dim: g.first_dim(),
        });
    }
    Ok(())
}

fn finite(v: f64, what: &str, x: &[f64]) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            what: what.to_string(),
            point: x.to_vec(),
        })
    }
}

/// `x + ε c_k(x)`: evaluating a field here yields `X_k f(x)` in the `ε` slot.
pub fn jet_point(g: &StratifiedGroup, k: usize, x: &[f64]) -> Vec<Jet> {
    let mut c = vec![0.0; x.len()];
    g.field_coeffs(k, x, &mut c);
    x.iter().zip(c).map(|(&xi, ci)| Dual::new(xi, ci)).collect()
}

/// Nested seed for `X_k` applied twice.
///
/// The outer slot moves along `c_k` evaluated at the inner point, and the
/// inner point itself moves along `c_k(x)`. The result `f(z)` has
/// `z.du.re = X_k f(x)` and `z.du.du = X_k X_k f(x)`.
pub fn jet2_point(g: &StratifiedGroup, k: usize, x: &[f64]) -> Vec<Jet2> {
    let inner = jet_point(g, k, x);
    let mut c = vec![Jet::constant(0.0); x.len()];
    g.field_coeffs(k, &inner, &mut c);
    inner
        .into_iter()
        .zip(c)
        .map(|(y, cy)| Dual::new(y, cy))
        .collect()
}

/// `(X_k f)(x)`.
pub fn apply_field(g: &StratifiedGroup, k: usize, f: &dyn ScalarField, x: &[f64]) -> Result<f64> {
    g.check_point(x)?;
    check_index(g, k)?;
    finite(f.eval_jet(&jet_point(g, k, x)).du, "X_k f", x)
}

/// `(X_k f)(x)` and `(X_k^2 f)(x)` from one nested evaluation.
pub fn field_jet(g: &StratifiedGroup, k: usize, f: &dyn ScalarField, x: &[f64]) -> Result<Jet> {
    g.check_point(x)?;
    check_index(g, k)?;
    if f.info().smoothness != Smoothness::C2 {
        return Err(Error::NotTwiceDifferentiable(f.info().name));
    }
    let d = f.eval_jet2(&jet2_point(g, k, x)).du;
    finite(d.re, "X_k f", x)?;
    finite(d.du, "X_k^2 f", x)?;
    Ok(d)
}

/// `(X_k^2 f)(x)`.
pub fn second_field(g: &StratifiedGroup, k: usize, f: &dyn ScalarField, x: &[f64]) -> Result<f64> {
    Ok(field_jet(g, k, f, x)?.du)
}

/// `∇_G f(x) = (X_1 f, ..., X_N f)(x)`.
pub fn horizontal_gradient(g: &StratifiedGroup, f: &dyn ScalarField, x: &[f64]) -> Result<Vec<f64>> {
    g.check_point(x)?;
    (0..g.first_dim())
        .map(|k| finite(f.eval_jet(&jet_point(g, k, x)).du, "X_k f", x))
        .collect()
}

/// `div_G V = sum_k X_k V_k`.
pub fn horizontal_divergence(
    g: &StratifiedGroup,
    v: &HorizontalVectorField,
    x: &[f64],
) -> Result<f64> {
    g.check_point(x)?;
    if v.len() != g.first_dim() {
        return Err(Error::DimensionMismatch {
            expected: g.first_dim(),
            actual: v.len(),
        });
    }
    let mut acc = 0.0;
    for (k, comp) in v.components.iter().enumerate() {
        acc += comp.eval_jet(&jet_point(g, k, x)).du;
    }
    finite(acc, "div_G V", x)
}

/// `L f = sum_k X_k^2 f`.
pub fn sub_laplacian(g: &StratifiedGroup, f: &dyn ScalarField, x: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for k in 0..g.first_dim() {
        acc += second_field(g, k, f, x)?;
    }
    Ok(acc)
}

/// Per-direction terms `X_i(|X_i f|^{p_i-2} X_i f)(x)`.
///
/// Directions with `p_i < 2` where `|X_i f(x)| < eps` are rejected with
/// [`Error::NonSmoothPoint`]; for `p_i >= 2` the term is smooth there.
pub fn p_sublaplacian_terms(
    g: &StratifiedGroup,
    p: &ExponentVector,
    f: &dyn ScalarField,
    x: &[f64],
    eps: f64,
) -> Result<Vec<f64>> {
    p.check_len(g.first_dim())?;
    (0..g.first_dim())
        .map(|i| {
            let d = field_jet(g, i, f, x)?;
            let pi = p.get(i);
            if pi < 2.0 && d.re.abs() < eps {
                return Err(Error::NonSmoothPoint {
                    point: x.to_vec(),
                    reason: format!("|X_{} f| = {:e} below guard with p = {pi}", i + 1, d.re.abs()),
                });
            }
            finite(d.signed_powf(pi - 2.0).du, "p-sub-Laplacian term", x)
        })
        .collect()
}

/// `L_p f = sum_i X_i(|X_i f|^{p_i-2} X_i f)`.
pub fn anisotropic_p_sublaplacian(
    g: &StratifiedGroup,
    p: &ExponentVector,
    f: &dyn ScalarField,
    x: &[f64],
    eps: f64,
) -> Result<f64> {
    Ok(p_sublaplacian_terms(g, p, f, x, eps)?.iter().sum())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catalog::{Constant, Polynomial};
    use crate::field::{Field, FieldInfo, Scalar, SignClass};

    fn poly(s: &str) -> Arc<dyn ScalarField> {
        Arc::new(Polynomial::parse(s).unwrap())
    }

    struct InverseNorm;
    impl Field for InverseNorm {
        fn info(&self) -> FieldInfo {
            FieldInfo::new("1/|x|", Smoothness::C2, SignClass::Positive)
        }
        fn eval<S: Scalar>(&self, x: &[S]) -> S {
            let mut q = S::zero();
            for &v in x {
                q += v * v;
            }
            q.sqrt().recip()
        }
    }

    struct OnlyC1;
    impl Field for OnlyC1 {
        fn info(&self) -> FieldInfo {
            FieldInfo::new("c1", Smoothness::C1, SignClass::Unrestricted)
        }
        fn eval<S: Scalar>(&self, x: &[S]) -> S {
            x[0]
        }
    }

    #[test]
    fn apply_field_examples() {
        let h = StratifiedGroup::heisenberg(1).unwrap();
        let e2 = StratifiedGroup::euclidean(2).unwrap();
        assert_eq!(apply_field(&h, 0, &*poly("x2"), &[1.0, 2.0, 3.0]).unwrap(), -1.0);
        assert_eq!(apply_field(&e2, 0, &*poly("x0^2*x1"), &[3.0, 5.0]).unwrap(), 30.0);
        let f = poly("x0^2 + x1^2");
        for x in [[0.3, -1.0, 4.0], [-2.0, 0.5, -1.0]] {
            assert_eq!(apply_field(&h, 0, &*f, &x).unwrap(), 2.0 * x[0]);
        }
        assert!(apply_field(&h, 2, &*f, &[0.0; 3]).is_err());
        assert!(apply_field(&h, 0, &*f, &[0.0; 2]).is_err());
    }

    #[test]
    fn second_field_examples() {
        let e2 = StratifiedGroup::euclidean(2).unwrap();
        let h = StratifiedGroup::heisenberg(1).unwrap();
        assert_eq!(second_field(&e2, 0, &*poly("x0^3"), &[2.0, 0.0]).unwrap(), 12.0);
        assert_eq!(second_field(&h, 0, &*poly("x0^2 + x1^2"), &[0.7, -0.2, 9.0]).unwrap(), 2.0);
        // X_1(X_1 t^2) = X_1(-y t) = y^2/2; cross-checked by finite differences below
        let t2 = poly("x2^2");
        let x = [0.4, 1.3, -0.8];
        let v = second_field(&h, 0, &*t2, &x).unwrap();
        assert!((v - 1.3 * 1.3 / 2.0).abs() < 1e-14);
        let xf = |p: [f64; 3]| -> f64 { -p[1] * p[2] }; // X_1 t^2 = -y t
        let hh = 1e-5;
        let step = |s: f64| [x[0] + s, x[1], x[2] - s * x[1] / 2.0];
        let fd = (xf(step(hh)) - xf(step(-hh))) / (2.0 * hh);
        assert!((v - fd).abs() < 1e-8);
        assert!(matches!(
            second_field(&e2, 0, &OnlyC1, &[0.0, 0.0]),
            Err(Error::NotTwiceDifferentiable(_))
        ));
    }

    #[test]
    fn gradient_and_divergence_examples() {
        let e3 = StratifiedGroup::euclidean(3).unwrap();
        let h = StratifiedGroup::heisenberg(1).unwrap();
        let half_sq = poly("0.5*x0^2 + 0.5*x1^2 + 0.5*x2^2");
        assert_eq!(horizontal_gradient(&e3, &*half_sq, &[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(horizontal_gradient(&h, &*poly("x2"), &[1.0, 2.0, 3.0]).unwrap(), vec![-1.0, 0.5]);
        let c: Arc<dyn ScalarField> = Arc::new(Constant(4.0));
        assert_eq!(horizontal_gradient(&h, &*c, &[1.0, 2.0, 3.0]).unwrap(), vec![0.0, 0.0]);

        let id = HorizontalVectorField::new(vec![poly("x0"), poly("x1"), poly("x2")]);
        assert_eq!(horizontal_divergence(&e3, &id, &[0.3, 0.1, 7.0]).unwrap(), 3.0);
        let e2 = StratifiedGroup::euclidean(2).unwrap();
        let rot = HorizontalVectorField::new(vec![poly("x1"), poly("-x0")]);
        assert_eq!(horizontal_divergence(&e2, &rot, &[1.0, 2.0]).unwrap(), 0.0);
        assert!(horizontal_divergence(&e3, &rot, &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn sub_laplacian_examples() {
        let e3 = StratifiedGroup::euclidean(3).unwrap();
        let h = StratifiedGroup::heisenberg(1).unwrap();
        assert_eq!(sub_laplacian(&e3, &*poly("x0^2 + x1^2 + x2^2"), &[1.0, -2.0, 0.5]).unwrap(), 6.0);
        assert_eq!(sub_laplacian(&h, &*poly("x0^2 + x1^2"), &[1.0, -2.0, 0.5]).unwrap(), 4.0);
        let v = sub_laplacian(&e3, &InverseNorm, &[0.7, -0.4, 1.1]).unwrap();
        assert!(v.abs() < 1e-13, "{v}");
    }

    #[test]
    fn p_sublaplacian_examples() {
        let e3 = StratifiedGroup::euclidean(3).unwrap();
        let p2 = ExponentVector::uniform(2.0, 3).unwrap();
        let sq = poly("x0^2 + x1^2 + x2^2");
        let x = [0.4, 1.0, -0.3];
        assert_eq!(anisotropic_p_sublaplacian(&e3, &p2, &*sq, &x, DEFAULT_SMOOTH_EPS).unwrap(), 6.0);

        // d/dx1 (2 x1)^3 = 24 x1^2
        let e2 = StratifiedGroup::euclidean(2).unwrap();
        let p = ExponentVector::new(vec![4.0, 2.0]).unwrap();
        let terms = p_sublaplacian_terms(&e2, &p, &*poly("x0^2"), &[1.0, 1.0], DEFAULT_SMOOTH_EPS).unwrap();
        assert!((terms[0] - 24.0).abs() < 1e-12);
        assert_eq!(terms[1], 0.0);
        let fd = {
            let g = |s: f64| (2.0 * s).powi(3);
            (g(1.0 + 1e-5) - g(1.0 - 1e-5)) / 2e-5
        };
        assert!((terms[0] - fd).abs() < 1e-5);

        let c: Arc<dyn ScalarField> = Arc::new(Constant(1.0));
        let p3 = ExponentVector::new(vec![2.0, 3.0, 4.5]).unwrap();
        assert_eq!(anisotropic_p_sublaplacian(&e3, &p3, &*c, &x, DEFAULT_SMOOTH_EPS).unwrap(), 0.0);
        let p15 = ExponentVector::new(vec![1.5, 2.0, 2.0]).unwrap();
        assert!(matches!(
            anisotropic_p_sublaplacian(&e3, &p15, &*c, &x, DEFAULT_SMOOTH_EPS),
            Err(Error::NonSmoothPoint { .. })
        ));
    }

    #[test]
    fn p_laplacian_chain_rule() {
        // X_i(|X_i f|^{p-2} X_i f) = (p-1) |X_i f|^{p-2} X_i^2 f
        let h = StratifiedGroup::heisenberg(1).unwrap();
        let f = poly("x0^3 + x0*x1 + x2^2 + x1");
        let p = ExponentVector::new(vec![1.7, 3.3]).unwrap();
        let x = [0.6, -0.9, 0.4];
        let terms = p_sublaplacian_terms(&h, &p, &*f, &x, DEFAULT_SMOOTH_EPS).unwrap();
        for i in 0..2 {
            let d = field_jet(&h, i, &*f, &x).unwrap();
            let want = (p.get(i) - 1.0) * d.re.abs().powf(p.get(i) - 2.0) * d.du;
            assert!((terms[i] - want).abs() < 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn jet_type_is_consistent_with_real_evaluation() {
        let h = StratifiedGroup::heisenberg(2).unwrap();
        let f = poly("x0*x4 + x3^2 - x1*x2");
        let x = [0.1, 0.2, -0.3, 0.4, 0.5];
        let j = f.eval_jet(&jet_point(&h, 1, &x));
        assert_eq!(j.re, f.eval_real(&x));
    }
}

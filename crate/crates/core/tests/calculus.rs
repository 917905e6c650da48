//! Group laws and horizontal derivatives against finite differences along
//! one-parameter subgroups `t -> x exp(t e_k)`.

use std::sync::Arc;

use hardy_core::catalog::{Gauss, LeftTranslated, Polynomial};
use hardy_core::hcalc::{apply_field, horizontal_gradient, second_field, sub_laplacian};
use hardy_core::{FieldRef, StratifiedGroup};
use proptest::prelude::*;

fn groups() -> Vec<StratifiedGroup> {
    vec![
        StratifiedGroup::euclidean(3).unwrap(),
        StratifiedGroup::heisenberg(1).unwrap(),
        StratifiedGroup::heisenberg(2).unwrap(),
        StratifiedGroup::power(&StratifiedGroup::heisenberg(1).unwrap(), 2).unwrap(),
    ]
}

fn group_and_points(count: usize) -> impl Strategy<Value = (StratifiedGroup, Vec<Vec<f64>>)> {
    (0..4usize).prop_flat_map(move |i| {
        let g = groups()[i].clone();
        let d = g.dim();
        (Just(g), prop::collection::vec(prop::collection::vec(-2.0..2.0f64, d), count))
    })
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

/// `x exp(t e_k)` where `e_k` is the k-th first-stratum coordinate.
fn flow(g: &StratifiedGroup, k: usize, x: &[f64], t: f64) -> Vec<f64> {
    let mut e = vec![0.0; g.dim()];
    e[k] = t;
    g.product_law(x, &e)
}

fn test_field(g: &StratifiedGroup) -> FieldRef {
    let d = g.dim();
    let mut expr = String::from("1");
    for i in 0..d {
        expr.push_str(&format!(" + {}*x{}^2", 0.3 + 0.1 * i as f64, i));
        if i + 1 < d {
            expr.push_str(&format!(" - 0.7*x{}*x{}", i, i + 1));
        }
    }
    expr.push_str(" + 0.2*x0^3");
    Arc::new(hardy_core::catalog::Product {
        left: Arc::new(Polynomial::parse(&expr).unwrap()),
        right: Arc::new(Gauss::new(vec![0.1; d], 1.5, 1.0)),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative((g, pts) in group_and_points(3)) {
        let ab_c = g.product_law(&g.product_law(&pts[0], &pts[1]), &pts[2]);
        let a_bc = g.product_law(&pts[0], &g.product_law(&pts[1], &pts[2]));
        prop_assert!(close(&ab_c, &a_bc, 1e-12));
    }

    #[test]
    fn inverse_and_identity((g, pts) in group_and_points(1)) {
        let x = &pts[0];
        let e = g.product_law(x, &g.inverse_law(x));
        prop_assert!(e.iter().all(|v| v.abs() < 1e-12));
        let id = vec![0.0; g.dim()];
        prop_assert!(close(&g.product_law(&id, x), x, 1e-15));
    }

    #[test]
    fn dilations_are_automorphisms((g, pts) in group_and_points(2), lambda in 0.2..3.0f64) {
        let lhs = g.dilate_law(lambda, &g.product_law(&pts[0], &pts[1]));
        let rhs = g.product_law(&g.dilate_law(lambda, &pts[0]), &g.dilate_law(lambda, &pts[1]));
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn fields_match_flow_derivatives((g, pts) in group_and_points(1)) {
        let f = test_field(&g);
        let x = &pts[0];
        let h = 1e-4;
        for k in 0..g.first_dim() {
            let fp = f.eval_real(&flow(&g, k, x, h));
            let fm = f.eval_real(&flow(&g, k, x, -h));
            let f0 = f.eval_real(x);
            let d1 = (fp - fm) / (2.0 * h);
            let d2 = (fp - 2.0 * f0 + fm) / (h * h);
            let a1 = apply_field(&g, k, &*f, x).unwrap();
            let a2 = second_field(&g, k, &*f, x).unwrap();
            prop_assert!((a1 - d1).abs() <= 1e-6 * (1.0 + d1.abs()), "X_{k}: {a1} vs {d1}");
            prop_assert!((a2 - d2).abs() <= 1e-4 * (1.0 + d2.abs()), "X_{k}^2: {a2} vs {d2}");
        }
    }

    #[test]
    fn fields_are_left_invariant((g, pts) in group_and_points(2)) {
        let f = test_field(&g);
        let (a, x) = (&pts[0], &pts[1]);
        let shifted = LeftTranslated { inner: f.clone(), group: g.clone(), shift: a.clone() };
        let ax = g.product_law(a, x);
        for k in 0..g.first_dim() {
            let lhs = apply_field(&g, k, &shifted, x).unwrap();
            let rhs = apply_field(&g, k, &*f, &ax).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn leibniz_rule((g, pts) in group_and_points(1)) {
        let f = test_field(&g);
        let h: FieldRef = Arc::new(Gauss::new(vec![-0.3; g.dim()], 0.8, 2.0));
        let fh = hardy_core::catalog::Product { left: f.clone(), right: h.clone() };
        let x = &pts[0];
        for k in 0..g.first_dim() {
            let lhs = apply_field(&g, k, &fh, x).unwrap();
            let rhs = apply_field(&g, k, &*f, x).unwrap() * h.eval_real(x)
                + f.eval_real(x) * apply_field(&g, k, &*h, x).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn first_stratum_functions_see_euclidean_partials((g, pts) in group_and_points(1)) {
        let n = g.first_dim();
        let expr: Vec<String> = (0..n).map(|i| format!("{}*x{}^3", i + 1, i)).collect();
        let f = Polynomial::parse(&expr.join(" + ")).unwrap();
        let x = &pts[0];
        for k in 0..n {
            let got = apply_field(&g, k, &f, x).unwrap();
            let want = 3.0 * (k + 1) as f64 * x[k] * x[k];
            prop_assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
    }
}

#[test]
fn sublaplacian_of_quadratic_first_layer() {
    for g in groups() {
        let n = g.first_dim();
        let expr: Vec<String> = (0..n).map(|i| format!("x{i}^2")).collect();
        let f = Polynomial::parse(&expr.join(" + ")).unwrap();
        let x = vec![0.4; g.dim()];
        assert!((sub_laplacian(&g, &f, &x).unwrap() - 2.0 * n as f64).abs() < 1e-12);
        let grad = horizontal_gradient(&g, &f, &x).unwrap();
        assert!(grad.iter().all(|v| (v - 0.8).abs() < 1e-14));
    }
}

#[test]
fn heisenberg_fields_by_hand() {
    // X = d_x - y/2 d_t, Y = d_y + x/2 d_t; f = t gives X f = -y/2, Y f = x/2
    let g = StratifiedGroup::heisenberg(1).unwrap();
    let f = Polynomial::parse("x2").unwrap();
    let x = [0.6, -1.4, 0.3];
    assert!((apply_field(&g, 0, &f, &x).unwrap() - 0.7).abs() < 1e-15);
    assert!((apply_field(&g, 1, &f, &x).unwrap() - 0.3).abs() < 1e-15);
    // L (x^2 + y^2)^2 = 16 (x^2 + y^2) off the centre, independent of t
    let q = Polynomial::parse("x0^4 + 2*x0^2*x1^2 + x1^4").unwrap();
    let lap = sub_laplacian(&g, &q, &x).unwrap();
    assert!((lap - 16.0 * (0.36 + 1.96)).abs() < 1e-12);
}

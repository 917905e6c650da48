//! Verifier reports checked against a plain Monte Carlo oracle with
//! finite-difference gradients, plus the closed-form reductions.

use std::sync::Arc;

use hardy_core::catalog::{Bump, Constant, Polynomial, RadialComponent, Scaled, Zero};
use hardy_core::quad::{integrate_mc, Domain};
use hardy_core::verify::*;
use hardy_core::{
    Excision, ExponentVector, FieldRef, HorizontalVectorField, QuadConfig, ScalarField,
    StratifiedGroup, Verdict,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn e(n: usize) -> StratifiedGroup {
    StratifiedGroup::euclidean(n).unwrap()
}

fn bump(center: &[f64], radius: f64) -> FieldRef {
    Arc::new(Bump::new(center.to_vec(), radius, 1.0))
}

fn zero() -> FieldRef {
    Arc::new(Zero)
}

/// Rejection test written independently of `Domain::contains`.
fn inside(dom: &Domain, x: &[f64]) -> bool {
    dom.excisions.iter().all(|ex| match ex {
        Excision::Hyperplane { index, epsilon } => x[*index].abs() >= *epsilon,
        Excision::Point { center, epsilon } => {
            let n = center.len();
            x[..n].iter().zip(center).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() >= *epsilon
        }
        Excision::Diagonal { block, i, j, epsilon } => {
            let d: f64 = (0..*block).map(|k| (x[i * block + k] - x[j * block + k]).powi(2)).sum();
            d.sqrt() >= *epsilon
        }
    })
}

/// Uniform Monte Carlo mean of `f` times the box volume, with its standard error.
fn oracle(dom: &Domain, n: usize, seed: u64, f: impl Fn(&[f64]) -> f64) -> (f64, f64) {
    let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed);
    let vol: f64 = dom.lo.iter().zip(&dom.hi).map(|(a, b)| b - a).product();
    let (mut s, mut s2) = (0.0, 0.0);
    let mut x = vec![0.0; dom.lo.len()];
    for _ in 0..n {
        for (k, xi) in x.iter_mut().enumerate() {
            *xi = rng.random_range(dom.lo[k]..dom.hi[k]);
        }
        let v = if inside(dom, &x) { f(&x) } else { 0.0 };
        s += v;
        s2 += v * v;
    }
    let mean = s / n as f64;
    let var = (s2 / n as f64 - mean * mean).max(0.0);
    (vol * mean, vol * (var / n as f64).sqrt())
}

/// Central difference along `t -> x exp(t e_k)`.
fn fd(g: &StratifiedGroup, f: &dyn ScalarField, k: usize, x: &[f64]) -> f64 {
    let h = 1e-5;
    let mut e = vec![0.0; g.dim()];
    e[k] = h;
    let plus = f.eval_real(&g.product_law(x, &e));
    e[k] = -h;
    let minus = f.eval_real(&g.product_law(x, &e));
    (plus - minus) / (2.0 * h)
}

fn fd_grad2(g: &StratifiedGroup, f: &dyn ScalarField, x: &[f64]) -> f64 {
    (0..g.first_dim()).map(|k| fd(g, f, k, x).powi(2)).sum()
}

fn agrees(got: &hardy_core::QuadratureResult, want: (f64, f64)) -> bool {
    let band = 4.0 * (got.stderr.powi(2) + want.1.powi(2)).sqrt();
    (got.value - want.0).abs() <= band + 1e-6 * want.0.abs()
}

const N_ORACLE: usize = 200_000;

#[test]
fn zero_field_passes_every_inequality() {
    let cfg = QuadConfig::mc(4096, 1);
    let r3 = e(3);
    let dom = Domain::new(&r3, vec![-1.0; 3], vec![1.0; 3]).unwrap();
    let p = ExponentVector::uniform(2.0, 3).unwrap();
    let mut reports = vec![verify_hardy(&r3, &p, &zero(), &dom, &cfg).unwrap()];
    let r5 = e(5);
    let dom5 = Domain::new(&r5, vec![0.5; 5], vec![1.5; 5]).unwrap();
    reports.push(
        verify_rellich(&r5, &ExponentVector::uniform(2.0, 5).unwrap(), &RellichParams::uniform(2.5, 5), &zero(), &dom5, &cfg)
            .unwrap(),
    );
    let sing = SingularityList::new(&r3, vec![vec![0.0; 3]]).unwrap();
    let domp = dom.clone().with_excision(Excision::Point { center: vec![0.0; 3], epsilon: 0.1 }).unwrap();
    reports.push(verify_hardy_multi_singular(&r3, &sing, &zero(), &domp, &cfg).unwrap());
    reports.push(verify_uncertainty(&r3, &sing, &zero(), &domp, &cfg).unwrap());
    let mp = ManyParticleConfig::new(r3.clone(), 3).unwrap();
    let dom9 = Domain::new(mp.group(), vec![-1.0; 9], vec![1.0; 9]).unwrap();
    reports.push(verify_many_particle(&mp, &zero(), &dom9, &cfg).unwrap());
    let ew = ExponentialWeightParams { x0: vec![1.0; 3], lambda: 1.0 };
    reports.push(verify_exponential_weight(&r3, &ew, &zero(), &dom, &cfg).unwrap());
    reports.push(check_ibp_identity(&r3, &ew, &zero(), &dom, &cfg).unwrap());
    reports.push(verify_horizontal_hardy(&r3, &zero(), &dom, &cfg).unwrap());
    for r in reports {
        assert_eq!(r.margin, 0.0, "{}", r.theorem);
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.theorem);
    }
}

#[test]
fn hardy_matches_oracle_on_r3() {
    let g = e(3);
    let u = bump(&[1.0; 3], 0.5);
    let dom = Domain::new(&g, vec![0.5; 3], vec![1.5; 3]).unwrap();
    let p = ExponentVector::uniform(2.0, 3).unwrap();
    let r = verify_hardy(&g, &p, &u, &dom, &QuadConfig::mc(200_000, 7)).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.margin > 0.0);
    let lhs = oracle(&r.domain, N_ORACLE, 1, |x| fd_grad2(&g, &*u, x));
    let rhs = oracle(&r.domain, N_ORACLE, 1, |x| {
        (0..3).map(|i| 0.25 * u.eval_real(x).powi(2) / x[i].powi(2)).sum()
    });
    assert!(agrees(&r.lhs, lhs), "{:?} vs {lhs:?}", r.lhs);
    assert!(agrees(&r.rhs, rhs), "{:?} vs {rhs:?}", r.rhs);
}

#[test]
fn hardy_mixed_exponents_match_oracle() {
    let g = e(4);
    let ps = [1.5, 2.0, 2.5, 3.0];
    let u = bump(&[1.0, 0.9, 1.1, 1.0], 0.5);
    let dom = Domain::new(&g, vec![0.4; 4], vec![1.6; 4]).unwrap();
    let p = ExponentVector::new(ps.to_vec()).unwrap();
    let r = verify_hardy(&g, &p, &u, &dom, &QuadConfig::mc(200_000, 3)).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    let lhs = oracle(&r.domain, N_ORACLE, 2, |x| (0..4).map(|i| fd(&g, &*u, i, x).abs().powf(ps[i])).sum());
    let rhs = oracle(&r.domain, N_ORACLE, 2, |x| {
        (0..4)
            .map(|i| ((ps[i] - 1.0) / ps[i]).powf(ps[i]) * u.eval_real(x).powf(ps[i]) / x[i].abs().powf(ps[i]))
            .sum()
    });
    assert!(agrees(&r.lhs, lhs), "{:?} vs {lhs:?}", r.lhs);
    assert!(agrees(&r.rhs, rhs), "{:?} vs {rhs:?}", r.rhs);
}

#[test]
fn hardy_on_heisenberg_with_n_at_most_p() {
    let g = StratifiedGroup::heisenberg(1).unwrap();
    let u = bump(&[0.8, 0.8, 0.0], 0.5);
    let dom = Domain::new(&g, vec![0.2, 0.2, -0.6], vec![1.4, 1.4, 0.6]).unwrap();
    let r = verify_hardy(&g, &ExponentVector::uniform(2.0, 2).unwrap(), &u, &dom, &QuadConfig::mc(100_000, 5)).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.notes.iter().any(|n| n.contains("not below N")), "{:?}", r.notes);
    let lhs = oracle(&r.domain, N_ORACLE, 3, |x| fd_grad2(&g, &*u, x));
    assert!(agrees(&r.lhs, lhs), "{:?} vs {lhs:?}", r.lhs);
}

#[test]
fn hardy_margin_sign_survives_dilation() {
    let g = e(3);
    let base = bump(&[1.0; 3], 0.5);
    let p = ExponentVector::uniform(2.0, 3).unwrap();
    let cfg = QuadConfig::mc(100_000, 11);
    let r0 = verify_hardy(&g, &p, &base, &Domain::new(&g, vec![0.5; 3], vec![1.5; 3]).unwrap(), &cfg).unwrap();
    for lambda in [0.5, 2.0] {
        let u: FieldRef = Arc::new(hardy_core::catalog::Dilated { inner: base.clone(), group: g.clone(), lambda });
        let dom = Domain::new(&g, vec![0.5 / lambda; 3], vec![1.5 / lambda; 3]).unwrap();
        let r = verify_hardy(&g, &p, &u, &dom, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.margin > 0.0);
        // both sides scale by lambda^{2-3}
        let scale = lambda.powi(-1);
        let band = 3.0 * (r.combined_error + scale * r0.combined_error);
        assert!((r.margin - scale * r0.margin).abs() <= band, "lambda {lambda}");
    }
}

#[test]
fn rellich_on_r5() {
    let g = e(5);
    let u = bump(&[1.0; 5], 0.5);
    let dom = Domain::new(&g, vec![0.5; 5], vec![1.5; 5]).unwrap();
    let p = ExponentVector::uniform(2.0, 5).unwrap();
    let params = RellichParams::uniform(2.5, 5);
    let r = verify_rellich(&g, &p, &params, &u, &dom, &QuadConfig::mc(200_000, 9)).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.notes.iter().any(|n| n.contains("X_i^2 v")), "{:?}", r.notes);
    let c = rellich_constant(2.5, 2.0);
    assert_eq!(c, -0.9375);
    // RHS as one integrand against the sum of constant times integral
    let gl = QuadConfig::gl(6);
    let r_gl = verify_rellich(&g, &p, &params, &u, &dom, &gl).unwrap();
    let mut by_parts = 0.0;
    for i in 0..5 {
        let gl_term = hardy_core::quad::integrate_gl(|x: &[f64]| u.eval_real(x).powi(2) / x[i].powi(4), &r_gl.domain, 6)
            .unwrap();
        by_parts += c * gl_term.value;
    }
    assert!((r_gl.rhs.value - by_parts).abs() <= 1e-12 * by_parts.abs());
    let second = oracle(&r.domain, N_ORACLE, 4, |x| {
        let h = 1e-4;
        (0..5)
            .map(|i| {
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                xp[i] += h;
                xm[i] -= h;
                ((u.eval_real(&xp) - 2.0 * u.eval_real(x) + u.eval_real(&xm)) / (h * h)).powi(2)
            })
            .sum()
    });
    assert!(agrees(&r.lhs, second), "{:?} vs {second:?}", r.lhs);
}

#[test]
fn rellich_rejects_small_groups() {
    let g = e(4);
    let dom = Domain::new(&g, vec![0.5; 4], vec![1.5; 4]).unwrap();
    let err = verify_rellich(
        &g,
        &ExponentVector::uniform(2.0, 4).unwrap(),
        &RellichParams::uniform(2.5, 4),
        &zero(),
        &dom,
        &QuadConfig::mc(4096, 0),
    )
    .unwrap_err();
    assert!(err.to_string().contains("N >= 5"), "{err}");
}

fn point_domain(g: &StratifiedGroup, lo: Vec<f64>, hi: Vec<f64>, centers: &[Vec<f64>], eps: f64) -> Domain {
    let mut dom = Domain::new(g, lo, hi).unwrap();
    for c in centers {
        dom = dom.with_excision(Excision::Point { center: c.clone(), epsilon: eps }).unwrap();
    }
    dom
}

#[test]
fn single_singularity_reduces_to_classical_weight() {
    let g = e(3);
    let a = vec![vec![0.0; 3]];
    let sing = SingularityList::new(&g, a.clone()).unwrap();
    let dom = point_domain(&g, vec![-1.0; 3], vec![1.0; 3], &a, 0.1);
    let u = bump(&[0.2, 0.1, 0.0], 0.7);
    let cfg = QuadConfig::mc(100_000, 21);
    let r = verify_hardy_multi_singular(&g, &sing, &u, &dom, &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    let classic = integrate_mc(
        |x: &[f64]| 0.25 * u.eval_real(x).powi(2) / (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]),
        &dom,
        cfg.samples,
        cfg.seed,
    )
    .unwrap();
    assert!((r.rhs.value - classic.value).abs() <= 1e-10 * classic.value.abs());
}

#[test]
fn multi_singular_runs_pass() {
    let g = e(3);
    let cases = [
        vec![vec![0.0; 3], vec![1.0, 0.0, 0.0]],
        vec![vec![0.0; 3], vec![1.0, 0.0, 0.0], vec![0.5, 0.8, 0.0]],
    ];
    for (m, centers) in cases.iter().enumerate() {
        let sing = SingularityList::new(&g, centers.clone()).unwrap();
        let dom = point_domain(&g, vec![-1.0; 3], vec![2.0, 1.5, 1.0], centers, 0.1);
        let u = bump(&[0.5, 0.3, 0.0], 0.9);
        let r = verify_hardy_multi_singular(&g, &sing, &u, &dom, &QuadConfig::mc(200_000, m as u64)).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "m = {}", centers.len());
        let w = MultiSingularWeight::new(&g, &sing).unwrap();
        let rhs = oracle(&r.domain, N_ORACLE, 5, |x| {
            // weight |A|^2 / 4 with A = grad ln w, A computed by differences of ln w
            let lw = |y: &[f64]| w.eval_real(y).ln();
            let h = 1e-5;
            let a2: f64 = (0..3)
                .map(|k| {
                    let mut p = x.to_vec();
                    let mut q = x.to_vec();
                    p[k] += h;
                    q[k] -= h;
                    ((lw(&p) - lw(&q)) / (2.0 * h)).powi(2)
                })
                .sum();
            0.25 * a2 * u.eval_real(x).powi(2)
        });
        assert!(agrees(&r.rhs, rhs), "{:?} vs {rhs:?}", r.rhs);
    }
}

#[test]
fn harmonicity_of_the_weight() {
    let g = e(3);
    let mut rng = StdRng::seed_from_u64(3);
    let sample: Vec<Vec<f64>> = (0..1000).map(|_| (0..3).map(|_| rng.random_range(2.0..4.0)).collect()).collect();
    let one = SingularityList::new(&g, vec![vec![0.0; 3]]).unwrap();
    let rep = check_harmonicity_of_w(&g, &one, &sample, 3, 1e-8).unwrap();
    assert!(rep.max_abs_residual <= 1e-8, "{}", rep.max_abs_residual);
    let three: Vec<Vec<f64>> = (0..3).map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    let sing = SingularityList::new(&g, three).unwrap();
    let rep = check_harmonicity_of_w(&g, &sing, &sample, 3, 1e-7).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass, "{}", rep.max_abs_residual);
    let h1 = StratifiedGroup::heisenberg(1).unwrap();
    assert!(SingularityList::new(&h1, vec![vec![0.0; 3]]).and_then(|s| MultiSingularWeight::new(&h1, &s)).is_err());
}

#[test]
fn uncertainty_with_one_singularity() {
    let g = e(3);
    let a = vec![vec![0.0; 3]];
    let sing = SingularityList::new(&g, a.clone()).unwrap();
    let dom = point_domain(&g, vec![-1.0; 3], vec![1.0; 3], &a, 0.1);
    let u = bump(&[0.3, 0.0, 0.0], 0.6);
    let r = verify_uncertainty(&g, &sing, &u, &dom, &QuadConfig::mc(200_000, 4)).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    let ig = oracle(&r.domain, N_ORACLE, 6, |x| fd_grad2(&g, &*u, x));
    let iw = oracle(&r.domain, N_ORACLE, 6, |x| u.eval_real(x).powi(2) * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    let prod = (ig.0 * iw.0).sqrt();
    let err = 0.5 * prod * (ig.1 / ig.0 + iw.1 / iw.0);
    assert!(agrees(&r.rhs, (prod, err)), "{:?} vs {prod}", r.rhs);
}

#[test]
fn lemma_with_constant_field_has_zero_rhs() {
    let g = e(3);
    let a = HorizontalVectorField::new(vec![Arc::new(Constant(1.0)), Arc::new(Constant(-2.0)), Arc::new(Constant(0.5))]);
    let u = bump(&[0.0; 3], 0.8);
    let dom = Domain::new(&g, vec![-1.0; 3], vec![1.0; 3]).unwrap();
    let r = check_lemma_3_1(&g, &a, &u, &dom, &QuadConfig::mc(50_000, 1)).unwrap();
    assert_eq!(r.rhs.value, 0.0);
    assert_eq!(r.verdict, Verdict::Pass);
}

fn radial_field(power: f64, factor: f64) -> HorizontalVectorField {
    HorizontalVectorField::new(
        (0..3)
            .map(|i| -> FieldRef {
                Arc::new(Scaled {
                    inner: Arc::new(RadialComponent { index: i, power, center: vec![0.0; 3] }),
                    factor,
                })
            })
            .collect(),
    )
}

#[test]
fn lemma_with_radial_fields() {
    let g = e(3);
    let dom = point_domain(&g, vec![-1.0; 3], vec![1.0; 3], &[vec![0.0; 3]], 0.1);
    let u = bump(&[0.2, 0.0, 0.0], 0.7);
    let cfg = QuadConfig::mc(200_000, 8);
    let r = check_lemma_3_1(&g, &radial_field(-2.0, 1.0), &u, &dom, &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    // A = grad ln |x|^{-1} = -x/|x|^2 turns the lemma into (1/4) ∫ |A|^2 u^2 <= ∫ |grad u|^2
    let r = check_lemma_3_1(&g, &radial_field(-2.0, -1.0), &u, &dom, &cfg).unwrap();
    let quarter = integrate_mc(
        |x: &[f64]| 0.25 * u.eval_real(x).powi(2) / (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]),
        &r.domain,
        cfg.samples,
        cfg.seed,
    )
    .unwrap();
    assert!((r.rhs.value - quarter.value).abs() <= 3.0 * r.rhs.stderr.max(quarter.stderr));
    assert_eq!(r.verdict, Verdict::Pass);
}

fn spaced_center(mp: &ManyParticleConfig, gap: f64) -> Vec<f64> {
    let g = mp.group();
    let mut c = vec![0.0; g.dim()];
    for i in 0..mp.n {
        c[i * mp.particle_dim()] = gap * i as f64;
    }
    c
}

#[test]
fn many_particle_on_r3() {
    let mp = ManyParticleConfig::new(e(3), 3).unwrap();
    let c = spaced_center(&mp, 1.5);
    let dom = Domain::around(mp.group(), &c, 1.0).unwrap();
    let u = bump(&c, 1.0);
    let r = verify_many_particle(&mp, &u, &dom, &QuadConfig::mc(200_000, 2)).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.domain.excisions.len(), 3);
    let g = mp.group().clone();
    let rhs = oracle(&r.domain, N_ORACLE, 7, |x| {
        let s: f64 = [(0, 1), (0, 2), (1, 2)].iter().map(|&(i, j)| u.eval_real(x).powi(2) / mp.r(x, i, j).powi(2)).sum();
        s / 3.0
    });
    let lhs = oracle(&r.domain, N_ORACLE, 7, |x| fd_grad2(&g, &*u, x));
    assert!(agrees(&r.rhs, rhs), "{:?} vs {rhs:?}", r.rhs);
    assert!(agrees(&r.lhs, lhs), "{:?} vs {lhs:?}", r.lhs);
}

#[test]
fn many_particle_constant_vanishes_on_heisenberg() {
    let mp = ManyParticleConfig::new(StratifiedGroup::heisenberg(1).unwrap(), 3).unwrap();
    let c = spaced_center(&mp, 1.5);
    let dom = Domain::around(mp.group(), &c, 1.0).unwrap();
    let r = verify_many_particle(&mp, &bump(&c, 1.0), &dom, &QuadConfig::mc(20_000, 2)).unwrap();
    assert_eq!(r.rhs.value, 0.0);
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.notes.iter().any(|n| n.contains("N = 2")));
    let two = ManyParticleConfig::new(e(3), 2).unwrap();
    let dom = Domain::around(two.group(), &[0.0; 6], 1.0).unwrap();
    assert!(verify_many_particle(&two, &zero(), &dom, &QuadConfig::mc(4096, 0)).is_err());
}

#[test]
fn rho_identities_hold_pointwise() {
    let mut rng = StdRng::seed_from_u64(17);
    for (n, big_n) in [(2, 2), (3, 2), (3, 3), (4, 3)] {
        // N = 2 particles live in H^1, N = 3 in R^3
        let base = if big_n == 2 { StratifiedGroup::heisenberg(1).unwrap() } else { e(3) };
        let mp = ManyParticleConfig::new(base, n).unwrap();
        let d = mp.group().dim();
        let sample: Vec<Vec<f64>> = (0..1000).map(|_| (0..d).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        let rep = check_rho_identities(&mp, &sample, 17, 1e-9).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "(n, N) = ({n}, {big_n}): {:?}", rep.parts);
        if n == 2 {
            assert!(rep.parts[2].max_abs_residual <= 1e-10);
        }
    }
    let mp = ManyParticleConfig::new(StratifiedGroup::heisenberg(1).unwrap(), 3).unwrap();
    let x: Vec<f64> = (0..9).map(|i| (i as f64 * 0.37).sin()).collect();
    let lap = hardy_core::hcalc::sub_laplacian(mp.group(), &mp.rho2_field(), &x).unwrap();
    assert_eq!(lap, 24.0);
}

#[test]
fn pair_sum_by_brute_force() {
    // the same left-hand side with the product group's own law on whole points
    let mp = ManyParticleConfig::new(StratifiedGroup::heisenberg(1).unwrap(), 4).unwrap();
    let base = &mp.base;
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..50 {
        let pts: Vec<Vec<f64>> = (0..4).map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let diff = |a: usize, b: usize| -> Vec<f64> { base.first_stratum_difference(&pts[a], &pts[b]) };
        let mut lhs = 0.0;
        let mut sq = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                sq += diff(i, j).iter().map(|v| v * v).sum::<f64>();
                for k in 0..4 {
                    lhs += diff(k, i).iter().zip(diff(k, j)).map(|(a, b)| a * b).sum::<f64>();
                }
            }
        }
        let rhs = (4.0 - 2.0) / 2.0 * sq;
        assert!((lhs - rhs).abs() <= 1e-12 * sq);
    }
}

#[test]
fn ground_state_collapses() {
    let g = e(3);
    let u = bump(&[0.0; 3], 0.8);
    let dom = Domain::new(&g, vec![-1.0; 3], vec![1.0; 3]).unwrap();
    let cfg = QuadConfig::mc(50_000, 3);
    let f: FieldRef = Arc::new(Polynomial::parse("1 + x0^2 + x1^2 + x2^2").unwrap());
    let r = verify_ground_state(&g, &GroundStateParams { f, alpha: 0.0 }, &u, &dom, &cfg).unwrap();
    assert!(r.margin.abs() <= 1e-12 * r.lhs.value);
    assert_eq!(r.verdict, Verdict::Pass);
    let one: FieldRef = Arc::new(Constant(1.0));
    let r = verify_ground_state(&g, &GroundStateParams { f: one, alpha: 0.7 }, &u, &dom, &cfg).unwrap();
    assert!(r.margin.abs() <= 1e-12 * r.lhs.value);
    let neg: FieldRef = Arc::new(Polynomial::parse("x0").unwrap());
    assert!(verify_ground_state(&g, &GroundStateParams { f: neg, alpha: 0.5 }, &u, &dom, &cfg).is_err());
}

#[test]
fn ground_state_equality_on_r3() {
    let g = e(3);
    let u = bump(&[0.1, 0.0, -0.1], 0.8);
    let dom = Domain::new(&g, vec![-1.0; 3], vec![1.0; 3]).unwrap();
    let f: FieldRef = Arc::new(Polynomial::parse("1 + x0^2 + x1^2 + x2^2").unwrap());
    let r = verify_ground_state(&g, &GroundStateParams { f, alpha: 0.7 }, &u, &dom, &QuadConfig::mc(500_000, 12)).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.margin.abs() <= 3.0 * r.combined_error);
    // middle term against its closed form: |grad f|^2 = 4|x|^2, L f = 6
    let mid = oracle(&dom, N_ORACLE, 8, |x| {
        let q = 1.0 + x.iter().map(|v| v * v).sum::<f64>();
        let r2 = q - 1.0;
        (0.7 * 0.3 * 4.0 * r2 / (q * q) - 0.7 * 6.0 / q) * u.eval_real(x).powi(2)
    });
    let rem = oracle(&dom, N_ORACLE, 8, |x| {
        let q = 1.0 + x.iter().map(|v| v * v).sum::<f64>();
        let v = |y: &[f64]| (1.0 + y.iter().map(|t| t * t).sum::<f64>()).powf(-0.7) * u.eval_real(y);
        let h = 1e-5;
        let g2: f64 = (0..3)
            .map(|k| {
                let mut p = x.to_vec();
                let mut m = x.to_vec();
                p[k] += h;
                m[k] -= h;
                ((v(&p) - v(&m)) / (2.0 * h)).powi(2)
            })
            .sum();
        g2 * q.powf(1.4)
    });
    let want = (mid.0 + rem.0, (mid.1.powi(2) + rem.1.powi(2)).sqrt());
    assert!(agrees(&r.rhs, want), "{:?} vs {want:?}", r.rhs);
}

#[test]
fn total_separation_equality_and_cross_check() {
    let mp = ManyParticleConfig::new(StratifiedGroup::heisenberg(1).unwrap(), 3).unwrap();
    let c = spaced_center(&mp, 1.5);
    let dom = Domain::around(mp.group(), &c, 1.0).unwrap();
    let u = bump(&c, 1.0);
    let cfg = QuadConfig::mc(500_000, 5);
    let r = verify_total_separation(&mp, &u, &dom, &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.margin.abs() <= 3.0 * r.combined_error);
    let alpha = total_separation_alpha(3, 2);
    assert_eq!(alpha, -0.5);
    let gs = GroundStateParams { f: Arc::new(mp.rho2_field()), alpha };
    let r2 = verify_ground_state(mp.group(), &gs, &u, &r.domain, &cfg).unwrap();
    assert!((r2.rhs.value - r.rhs.value).abs() <= 1e-10 * r.rhs.value.abs());
}

#[test]
fn total_separation_two_planar_particles() {
    let mp = ManyParticleConfig::new(StratifiedGroup::heisenberg(1).unwrap(), 2).unwrap();
    assert_eq!(total_separation_constant(2, 2), 0.0);
    let c = spaced_center(&mp, 1.5);
    let dom = Domain::around(mp.group(), &c, 1.0).unwrap();
    let r = verify_total_separation(&mp, &bump(&c, 1.0), &dom, &QuadConfig::mc(100_000, 5)).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.margin.abs() <= 3.0 * r.combined_error);
}

#[test]
fn exponential_weight_and_its_flat_limit() {
    let g = e(3);
    let u = bump(&[1.0; 3], 0.5);
    let dom = Domain::new(&g, vec![0.5; 3], vec![1.5; 3]).unwrap();
    let cfg = QuadConfig::mc(200_000, 13);
    let ew = ExponentialWeightParams { x0: vec![1.0; 3], lambda: 1.0 };
    let r = verify_exponential_weight(&g, &ew, &u, &dom, &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.notes.iter().any(|n| n.contains("lambda")));
    let lhs = oracle(&r.domain, N_ORACLE, 9, |x| {
        let y2: f64 = x.iter().map(|v| (v - 1.0).powi(2)).sum();
        let x2: f64 = x.iter().map(|v| v * v).sum();
        let w = (-y2 / 4.0).exp();
        w * (0.25 / x2 - 0.75 + y2 / 16.0) * u.eval_real(x).powi(2)
    });
    assert!(agrees(&r.lhs, lhs), "{:?} vs {lhs:?}", r.lhs);

    let flat = ExponentialWeightParams { x0: vec![1.0; 3], lambda: 1e6 };
    let r = verify_exponential_weight(&g, &flat, &u, &dom, &cfg).unwrap();
    let plain = verify_horizontal_hardy(&g, &u, &dom, &cfg).unwrap();
    assert!((r.margin - plain.margin).abs() <= 3.0 * (r.combined_error + plain.combined_error));

    let bad = ExponentialWeightParams { x0: vec![1.0; 3], lambda: 0.0 };
    assert!(verify_exponential_weight(&g, &bad, &u, &dom, &cfg).is_err());
    assert!(verify_exponential_weight(&StratifiedGroup::heisenberg(1).unwrap(), &ew, &u, &dom, &cfg).is_err());
}

#[test]
fn ibp_identity_for_two_widths() {
    let g = e(3);
    let u = bump(&[0.8, 1.0, 1.1], 0.5);
    let dom = Domain::new(&g, vec![0.2; 3], vec![1.8; 3]).unwrap();
    for lambda in [0.25, 1.0] {
        let ew = ExponentialWeightParams { x0: vec![1.0; 3], lambda };
        let r = check_ibp_identity(&g, &ew, &u, &dom, &QuadConfig::mc(200_000, 6)).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "lambda {lambda}: {r:?}");
        let lhs = oracle(&dom, N_ORACLE, 10, |x| {
            let y: Vec<f64> = x.iter().map(|v| v - 1.0).collect();
            let w = (-y.iter().map(|v| v * v).sum::<f64>() / (4.0 * lambda)).exp();
            let dot: f64 = (0..3).map(|k| y[k] * fd(&g, &*u, k, x)).sum();
            dot * u.eval_real(x) * w
        });
        assert!(agrees(&r.lhs, lhs), "{:?} vs {lhs:?}", r.lhs);
    }
}

#[test]
fn sharpness_table_for_hardy() {
    let g = e(3);
    let p = ExponentVector::uniform(2.0, 3).unwrap();
    let t = sharpness_probe("hardy", &g, &p, &[0.1, 0.4, 0.2], &QuadConfig::mc(100_000, 4)).unwrap();
    let deltas: Vec<f64> = t.rows.iter().map(|r| r.delta).collect();
    assert_eq!(deltas, vec![0.4, 0.2, 0.1]);
    for row in &t.rows {
        assert!(row.ratio >= 1.0 - 3.0 * row.ratio_stderr, "{row:?}");
    }
    assert!(sharpness_probe("hardy", &g, &p, &[0.0], &QuadConfig::mc(1000, 4)).is_err());
    assert!(sharpness_probe("rellich", &g, &p, &[0.2], &QuadConfig::mc(1000, 4)).is_err());
}

#[test]
fn reports_round_trip_through_json() {
    let g = e(3);
    let u = bump(&[1.0; 3], 0.5);
    let dom = Domain::new(&g, vec![0.5; 3], vec![1.5; 3]).unwrap();
    let r = verify_hardy(&g, &ExponentVector::uniform(2.0, 3).unwrap(), &u, &dom, &QuadConfig::mc(20_000, 1)).unwrap();
    let s = serde_json::to_string(&r).unwrap();
    let back: VerificationReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back, r);
    for key in ["theorem", "group", "params", "domain", "quadrature", "lhs", "rhs", "margin", "combined_error", "verdict", "notes"] {
        assert!(s.contains(&format!("\"{key}\"")), "{key}");
    }
}

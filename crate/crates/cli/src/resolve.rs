//! Type-checking of suite runs: every run is completed with its defaults and
//! turned into a [`Job`] before anything is evaluated.
//!
//! Defaults by theorem (N is the first-stratum dimension, `1` the point
//! with ones on the first stratum and zeros above it):
//!
//! | theorem | group | test function and domain |
//! |---|---|---|
//! | picone | heisenberg:1 | 10 seeded pairs, 10^4 Halton points in `[-1,1]^d` |
//! | hardy, horizontal_hardy | euclidean:3 | bump at `1`, radius 0.5, box `1 ± 0.5` |
//! | rellich | euclidean:5 | as hardy, `alpha = 2.5` |
//! | multi_singular_hardy, uncertainty | euclidean:3 | bump between the singularities, balls of radius 0.1 excised |
//! | harmonicity | euclidean:3 | three singularities, 10^3 points in `[2,4]^d` |
//! | lemma_3_1 | euclidean:3 | `A = x'/|x'|^2`, ball of radius 0.1 excised |
//! | many_particle | 3 copies of euclidean:3 | bump on separated particles |
//! | rho_identities | 3 copies of heisenberg:1 | 10^3 points in `[-2,2]^d` |
//! | ground_state | euclidean:3 | `f = 1 + |x'|^2`, `alpha = 0.7`, 5·10^5 samples |
//! | total_separation | 3 copies of heisenberg:1 | 5·10^5 samples |
//! | exponential_weight, ibp_identity | euclidean:3 | `x0 = 1`, `lambda = 1` |
//! | hardy_sharpness | euclidean:3 | `delta` in {0.4, 0.2, 0.1} |

use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};

use hardy_core::catalog::{parse_field, Paraboloid, PositiveMix};
use hardy_core::quad::{halton_points, Domain};
use hardy_core::verify::{
    ExponentialWeightParams, GroundStateParams, ManyParticleConfig, RellichParams,
    SingularityList,
};
use hardy_core::{
    Excision, ExponentVector, FieldRef, HorizontalVectorField, Order, PiconePair,
    PiconeTolerance, QuadConfig, StratifiedGroup,
};

use crate::config::{Alpha, DomainSpec, PiconeOrder, RunSpec, TAGS};

/// A run that has passed type-checking.
pub struct Job {
    pub index: usize,
    pub tag: &'static str,
    /// The run with every default filled in.
    pub spec: RunSpec,
    pub kind: JobKind,
}

pub struct PiconeCheck {
    pub label: String,
    pub order: Order,
    pub pair: PiconePair,
    pub tol: PiconeTolerance,
}

pub enum JobKind {
    Picone {
        g: StratifiedGroup,
        p: ExponentVector,
        checks: Vec<PiconeCheck>,
        sample: Vec<Vec<f64>>,
        seed: u64,
    },
    Hardy {
        g: StratifiedGroup,
        p: ExponentVector,
        u: FieldRef,
        dom: Domain,
        cfg: QuadConfig,
    },
    Rellich {
        g: StratifiedGroup,
        p: ExponentVector,
        params: RellichParams,
        u: FieldRef,
        dom: Domain,
        cfg: QuadConfig,
    },
    MultiSingular {
        g: StratifiedGroup,
        sing: SingularityList,
        u: FieldRef,
        dom: Domain,
        cfg: QuadConfig,
    },
    Uncertainty {
        g: StratifiedGroup,
        sing: SingularityList,
        u: FieldRef,
        dom: Domain,
        cfg: QuadConfig,
    },
    Harmonicity {
        g: StratifiedGroup,
        sing: SingularityList,
        sample: Vec<Vec<f64>>,
        seed: u64,
        tol: f64,
    },
    Lemma {
        g: StratifiedGroup,
        a: HorizontalVectorField,
        u: FieldRef,
        dom: Domain,
        cfg: QuadConfig,
    },
    ManyParticle {
        mp: ManyParticleConfig,
        u: FieldRef,
        dom: Domain,
        cfg: QuadConfig,
    },
    Rho {
        mp: ManyParticleConfig,
        sample: Vec<Vec<f64>>,
        seed: u64,
        tol: f64,
    },
    GroundState {
        g: StratifiedGroup,
        params: GroundStateParams,
        u: FieldRef,
        dom: Domain,
        cfg: QuadConfig,
    },
    TotalSeparation {
        mp: ManyParticleConfig,
        u: FieldRef,
        dom: Domain,
        cfg: QuadConfig,
    },
    ExponentialWeight {
        g: StratifiedGroup,
        params: ExponentialWeightParams,
        u: FieldRef,
        dom: Domain,
        cfg: QuadConfig,
    },
    Ibp {
        g: StratifiedGroup,
        params: ExponentialWeightParams,
        u: FieldRef,
        dom: Domain,
        cfg: QuadConfig,
    },
    HorizontalHardy {
        g: StratifiedGroup,
        u: FieldRef,
        dom: Domain,
        cfg: QuadConfig,
    },
    Sharpness {
        g: StratifiedGroup,
        p: ExponentVector,
        deltas: Vec<f64>,
        cfg: QuadConfig,
    },
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn known_tag(tag: &str) -> Result<&'static str> {
    TAGS.iter()
        .copied()
        .find(|t| *t == tag)
        .ok_or_else(|| anyhow!("unknown theorem tag `{tag}`; known tags: {}", TAGS.join(", ")))
}

fn is_particle(tag: &str) -> bool {
    matches!(tag, "many_particle" | "rho_identities" | "total_separation")
}

fn default_group(tag: &str) -> &'static str {
    match tag {
        "picone" | "rho_identities" | "total_separation" => "heisenberg:1",
        "rellich" => "euclidean:5",
        _ => "euclidean:3",
    }
}

/// Keys each theorem reads besides `theorem`, `group` and `quadrature`.
fn allowed_keys(tag: &str) -> &'static [&'static str] {
    match tag {
        "picone" => &["p", "u", "v", "order", "pairs", "points", "domain", "tolerance"],
        "hardy" => &["p", "u", "domain"],
        "rellich" => &["p", "alpha", "u", "domain"],
        "multi_singular_hardy" | "uncertainty" => &["singularities", "u", "domain"],
        "harmonicity" => &["singularities", "points", "domain", "tolerance"],
        "lemma_3_1" => &["vector_field", "u", "domain"],
        "many_particle" | "total_separation" => &["n", "u", "domain"],
        "rho_identities" => &["n", "points", "domain", "tolerance"],
        "ground_state" => &["f", "alpha", "u", "domain"],
        "exponential_weight" | "ibp_identity" => &["x0", "lambda", "u", "domain"],
        "horizontal_hardy" => &["u", "domain"],
        "hardy_sharpness" => &["p", "deltas"],
        _ => &[],
    }
}

fn present_keys(s: &RunSpec) -> Vec<&'static str> {
    let mut out = Vec::new();
    macro_rules! check {
        ($($f:ident),*) => { $( if s.$f.is_some() { out.push(stringify!($f)); } )* };
    }
    check!(p, u, v, f, alpha, singularities, n, lambda, x0, vector_field, order, pairs, points, deltas, domain, tolerance);
    out
}

/// Point with `c` on the first stratum and zeros above it.
fn first_stratum_point(g: &StratifiedGroup, c: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; g.dim()];
    x[..c.len()].copy_from_slice(c);
    x
}

fn particle_center(mp: &ManyParticleConfig, gap: f64) -> Vec<f64> {
    let mut c = vec![0.0; mp.group().dim()];
    for i in 0..mp.n {
        c[i * mp.particle_dim()] = gap * i as f64;
    }
    c
}

fn cube(center: &[f64], radius: f64) -> DomainSpec {
    DomainSpec {
        lo: Some(center.iter().map(|c| c - radius).collect()),
        hi: Some(center.iter().map(|c| c + radius).collect()),
        ..Default::default()
    }
}

fn bump_spec(center: &[f64], radius: f64) -> String {
    format!("bump:center={};radius={radius}", join(center))
}

fn pad(g: &StratifiedGroup, first: &[f64]) -> Vec<f64> {
    first_stratum_point(g, &first[..first.len().min(g.first_dim())])
}

/// Fills every default for `spec` in place. `g` is the working group.
fn complete(spec: &mut RunSpec, tag: &str, g: &StratifiedGroup, mp: Option<&ManyParticleConfig>) {
    let n = g.first_dim();
    let d = g.dim();
    let ones = first_stratum_point(g, &vec![1.0; n]);
    let quad = |samples: usize| QuadConfig::mc(samples, 0);
    match tag {
        "picone" => {
            spec.p.get_or_insert_with(|| (0..n).map(|i| [1.5, 3.0, 2.0][i % 3]).collect());
            spec.order.get_or_insert(PiconeOrder::Both);
            if spec.u.is_none() && spec.v.is_none() {
                spec.pairs.get_or_insert(10);
            }
            spec.points.get_or_insert(10_000);
            spec.domain.get_or_insert_with(|| cube(&vec![0.0; d], 1.0));
        }
        "hardy" | "horizontal_hardy" | "rellich" => {
            if tag != "horizontal_hardy" {
                spec.p.get_or_insert_with(|| vec![2.0; n]);
            }
            if tag == "rellich" {
                spec.alpha.get_or_insert(Alpha::Scalar(2.5));
            }
            spec.u.get_or_insert_with(|| bump_spec(&ones, 0.5));
            spec.domain.get_or_insert_with(|| cube(&ones, 0.5));
        }
        "multi_singular_hardy" | "uncertainty" => {
            let sing = spec.singularities.get_or_insert_with(|| {
                if tag == "uncertainty" {
                    vec![vec![0.0; d]]
                } else {
                    vec![vec![0.0; d], pad(g, &[1.0])]
                }
            });
            let sing = sing.clone();
            let (c, r) = if tag == "uncertainty" { (pad(g, &[0.3]), 0.6) } else { (pad(g, &[0.5, 0.3]), 0.9) };
            spec.u.get_or_insert_with(|| bump_spec(&c, r));
            spec.domain.get_or_insert_with(|| {
                let mut dom = cube(&vec![0.0; d], 1.0);
                if tag == "multi_singular_hardy" {
                    let hi = dom.hi.as_mut().unwrap();
                    hi[0] = 2.0;
                    if n > 1 {
                        hi[1] = 1.5;
                    }
                }
                dom.excisions = sing
                    .iter()
                    .map(|a| Excision::Point { center: a[..n].to_vec(), epsilon: 0.1 })
                    .collect();
                dom
            });
        }
        "harmonicity" => {
            spec.singularities
                .get_or_insert_with(|| vec![vec![0.0; d], pad(g, &[1.0]), pad(g, &[0.5, 0.8])]);
            spec.points.get_or_insert(1000);
            spec.domain.get_or_insert_with(|| cube(&vec![3.0; d], 1.0));
        }
        "lemma_3_1" => {
            spec.vector_field.get_or_insert_with(|| {
                (0..n)
                    .map(|i| format!("radial:index={i};power=-2;center={}", join(&vec![0.0; n])))
                    .collect()
            });
            spec.u.get_or_insert_with(|| bump_spec(&pad(g, &[0.2]), 0.7));
            spec.domain.get_or_insert_with(|| {
                let mut dom = cube(&vec![0.0; d], 1.0);
                dom.excisions = vec![Excision::Point { center: vec![0.0; n], epsilon: 0.1 }];
                dom
            });
        }
        "many_particle" | "total_separation" => {
            let c = particle_center(mp.expect("particle run"), 1.5);
            spec.u.get_or_insert_with(|| bump_spec(&c, 1.0));
            spec.domain.get_or_insert_with(|| cube(&c, 1.0));
            if tag == "total_separation" {
                spec.quadrature.get_or_insert(quad(500_000));
            }
        }
        "rho_identities" => {
            spec.points.get_or_insert(1000);
            spec.domain.get_or_insert_with(|| cube(&vec![0.0; d], 2.0));
        }
        "ground_state" => {
            spec.f.get_or_insert_with(|| {
                let terms: Vec<String> = (0..n).map(|i| format!("x{i}^2")).collect();
                format!("poly:1 + {}", terms.join(" + "))
            });
            spec.alpha.get_or_insert(Alpha::Scalar(0.7));
            spec.u.get_or_insert_with(|| bump_spec(&vec![0.0; d], 0.8));
            spec.domain.get_or_insert_with(|| cube(&vec![0.0; d], 1.0));
            spec.quadrature.get_or_insert(quad(500_000));
        }
        "exponential_weight" | "ibp_identity" => {
            spec.x0.get_or_insert_with(|| ones.clone());
            spec.lambda.get_or_insert(1.0);
            spec.u.get_or_insert_with(|| bump_spec(&ones, 0.5));
            spec.domain.get_or_insert_with(|| cube(&ones, 0.5));
        }
        "hardy_sharpness" => {
            spec.p.get_or_insert_with(|| vec![2.0; n]);
            spec.deltas.get_or_insert_with(|| vec![0.4, 0.2, 0.1]);
        }
        _ => {}
    }
    spec.quadrature.get_or_insert(quad(hardy_core::quad::DEFAULT_MC_SAMPLES));
}

fn build_domain(g: &StratifiedGroup, spec: &mut DomainSpec) -> Result<Domain> {
    let (lo, hi) = match (&spec.lo, &spec.hi, &spec.center, spec.radius) {
        (Some(lo), Some(hi), None, None) => (lo.clone(), hi.clone()),
        (None, None, Some(c), Some(r)) => (
            c.iter().map(|x| x - r).collect(),
            c.iter().map(|x| x + r).collect(),
        ),
        _ => bail!("domain needs either `lo` and `hi`, or `center` and `radius`"),
    };
    let mut dom = Domain::new(g, lo.clone(), hi.clone())?;
    for e in &spec.excisions {
        dom = dom.with_excision(e.clone())?;
    }
    spec.lo = Some(lo);
    spec.hi = Some(hi);
    spec.center = None;
    spec.radius = None;
    Ok(dom)
}

fn field(spec: &Option<String>, key: &str, g: &StratifiedGroup) -> Result<FieldRef> {
    let s = spec.as_deref().ok_or_else(|| anyhow!("missing `{key}`"))?;
    parse_field(s, g).with_context(|| format!("field `{key}`"))
}

fn exponents(p: &Option<Vec<f64>>, n: usize) -> Result<ExponentVector> {
    let p = ExponentVector::new(p.clone().unwrap_or_default()).context("field `p`")?;
    p.check_len(n).context("field `p`")?;
    Ok(p)
}

fn tolerance(spec: &RunSpec, default: f64) -> f64 {
    spec.tolerance.and_then(|t| t.residual).unwrap_or(default)
}

fn picone_tol(spec: &RunSpec, order: Order) -> PiconeTolerance {
    let mut tol = PiconeTolerance::for_order(order);
    if let Some(t) = spec.tolerance {
        if let Some(r) = t.residual {
            tol.residual = r;
        }
        if let Some(r) = t.nonneg {
            tol.nonneg = r;
        }
        if let Some(r) = t.smooth_eps {
            tol.smooth_eps = r;
        }
    }
    tol
}

fn singularities(spec: &RunSpec, g: &StratifiedGroup) -> Result<SingularityList> {
    let pts = spec.singularities.clone().unwrap_or_default();
    SingularityList::new(g, pts).context("field `singularities`")
}

/// Tensor Gauss–Legendre handles boxes with hyperplane excisions only.
fn check_tensor_rule(tag: &str, g: &StratifiedGroup, cfg: &QuadConfig, dom: Option<&Domain>) -> Result<()> {
    if cfg.method != hardy_core::Method::Gl {
        return Ok(());
    }
    if g.dim() > hardy_core::quad::MAX_GL_DIM {
        bail!(
            "field `quadrature`: gl is limited to dimension {}, the group has dimension {}",
            hardy_core::quad::MAX_GL_DIM,
            g.dim()
        );
    }
    let ball = dom.is_some_and(|d| d.excisions.iter().any(|e| !matches!(e, Excision::Hyperplane { .. })));
    if ball || matches!(tag, "many_particle" | "total_separation") {
        bail!("field `quadrature`: gl cannot integrate around point or diagonal excisions; use mc");
    }
    Ok(())
}

fn require_excised(dom: &Domain, sing: &SingularityList) -> Result<()> {
    for a in &sing.points {
        if dom.lo.iter().zip(&dom.hi).zip(a).all(|((l, h), x)| l <= x && x <= h) && dom.contains(a) {
            bail!("singularity {a:?} lies inside the domain without an excision around it");
        }
    }
    Ok(())
}

/// Type-checks one run.
pub fn resolve(index: usize, run: &RunSpec) -> Result<Job> {
    let tag = known_tag(&run.theorem)?;
    let mut spec = run.clone();
    let allowed = allowed_keys(tag);
    for key in present_keys(&spec) {
        if !allowed.contains(&key) {
            bail!("key `{key}` is not used by `{tag}`");
        }
    }
    let group_spec = spec.group.clone().unwrap_or_else(|| default_group(tag).to_string());
    let base = StratifiedGroup::from_spec(&group_spec).context("field `group`")?;
    spec.group = Some(base.label().to_string());
    let mp = if is_particle(tag) {
        let n = *spec.n.get_or_insert(3);
        Some(ManyParticleConfig::new(base.clone(), n).context("field `n`")?)
    } else {
        None
    };
    let g = mp.as_ref().map(|m| m.group().clone()).unwrap_or(base);
    complete(&mut spec, tag, &g, mp.as_ref());
    let cfg = spec.quadrature.expect("completed");
    let n = g.first_dim();
    let mut dom_spec = spec.domain.take();
    let dom = match dom_spec.as_mut() {
        Some(d) => Some(build_domain(&g, d).context("field `domain`")?),
        None => None,
    };
    spec.domain = dom_spec;
    check_tensor_rule(tag, &g, &cfg, dom.as_ref())?;
    let dom = || dom.clone().expect("completed");
    let sample = |count: usize| -> Result<Vec<Vec<f64>>> {
        halton_points(&dom(), count, cfg.seed).context("sampling")
    };

    let kind = match tag {
        "picone" => {
            let p = exponents(&spec.p, n)?;
            let order = spec.order.expect("completed");
            let mut checks = Vec::new();
            let first = matches!(order, PiconeOrder::First | PiconeOrder::Both);
            let second = matches!(order, PiconeOrder::Second | PiconeOrder::Both);
            let explicit = match (&spec.u, &spec.v) {
                (Some(_), Some(_)) => Some(PiconePair::new(field(&spec.u, "u", &g)?, field(&spec.v, "v", &g)?)),
                (None, None) => None,
                _ => bail!("`u` and `v` must be given together"),
            };
            if explicit.is_some() && spec.pairs.is_some() {
                bail!("`pairs` draws seeded pairs and cannot be combined with `u`, `v`");
            }
            let pairs = spec.pairs.unwrap_or(1);
            let concave: FieldRef = Arc::new(Paraboloid { peak: 2.0, curvature: 0.25, first_dim: n });
            for (ord, on, name) in [(Order::First, first, "first"), (Order::Second, second, "second")] {
                if !on {
                    continue;
                }
                let tol = picone_tol(&spec, ord);
                match &explicit {
                    Some(pair) => checks.push(PiconeCheck { label: name.into(), order: ord, pair: pair.clone(), tol }),
                    None => {
                        for k in 0..pairs as u64 {
                            let s = cfg.seed.wrapping_add(k);
                            let u: FieldRef = Arc::new(PositiveMix::new(g.dim(), s, true));
                            let v: FieldRef = match ord {
                                Order::First => Arc::new(PositiveMix::new(g.dim(), s, false)),
                                Order::Second => concave.clone(),
                            };
                            checks.push(PiconeCheck {
                                label: format!("{name}:pair={s}"),
                                order: ord,
                                pair: PiconePair::new(u, v),
                                tol,
                            });
                        }
                    }
                }
            }
            JobKind::Picone { g, p, checks, sample: sample(spec.points.unwrap())?, seed: cfg.seed }
        }
        "hardy" => JobKind::Hardy { p: exponents(&spec.p, n)?, u: field(&spec.u, "u", &g)?, dom: dom(), cfg, g },
        "horizontal_hardy" => JobKind::HorizontalHardy { u: field(&spec.u, "u", &g)?, dom: dom(), cfg, g },
        "rellich" => {
            let params = match spec.alpha.clone().expect("completed") {
                Alpha::Scalar(a) => RellichParams::uniform(a, n),
                Alpha::Vector(v) => RellichParams::new(v),
            };
            params.check(n).context("field `alpha`")?;
            JobKind::Rellich { p: exponents(&spec.p, n)?, params, u: field(&spec.u, "u", &g)?, dom: dom(), cfg, g }
        }
        "multi_singular_hardy" | "uncertainty" => {
            let sing = singularities(&spec, &g)?;
            hardy_core::verify::MultiSingularWeight::new(&g, &sing)?;
            let d = dom();
            require_excised(&d, &sing)?;
            let u = field(&spec.u, "u", &g)?;
            if tag == "uncertainty" {
                JobKind::Uncertainty { g, sing, u, dom: d, cfg }
            } else {
                JobKind::MultiSingular { g, sing, u, dom: d, cfg }
            }
        }
        "harmonicity" => {
            let sing = singularities(&spec, &g)?;
            hardy_core::verify::MultiSingularWeight::new(&g, &sing)?;
            let tol = tolerance(&spec, 1e-7);
            JobKind::Harmonicity { sample: sample(spec.points.unwrap())?, g, sing, seed: cfg.seed, tol }
        }
        "lemma_3_1" => {
            let comps = spec.vector_field.clone().unwrap_or_default();
            if comps.len() != n {
                bail!("field `vector_field`: expected {n} components, got {}", comps.len());
            }
            let a = comps
                .iter()
                .map(|c| parse_field(c, &g).context("field `vector_field`"))
                .collect::<Result<Vec<_>>>()?;
            JobKind::Lemma { a: HorizontalVectorField::new(a), u: field(&spec.u, "u", &g)?, dom: dom(), cfg, g }
        }
        "many_particle" => {
            let mp = mp.expect("particle run");
            if mp.n < 3 {
                bail!("field `n`: the many-particle inequality needs n >= 3");
            }
            JobKind::ManyParticle { u: field(&spec.u, "u", &g)?, dom: dom(), cfg, mp }
        }
        "total_separation" => JobKind::TotalSeparation { u: field(&spec.u, "u", &g)?, dom: dom(), cfg, mp: mp.expect("particle run") },
        "rho_identities" => {
            let tol = tolerance(&spec, 1e-9);
            JobKind::Rho { sample: sample(spec.points.unwrap())?, mp: mp.expect("particle run"), seed: cfg.seed, tol }
        }
        "ground_state" => {
            let alpha = match spec.alpha.clone().expect("completed") {
                Alpha::Scalar(a) => a,
                Alpha::Vector(_) => bail!("field `alpha`: ground_state takes a single exponent"),
            };
            let params = GroundStateParams { f: field(&spec.f, "f", &g)?, alpha };
            JobKind::GroundState { params, u: field(&spec.u, "u", &g)?, dom: dom(), cfg, g }
        }
        "exponential_weight" | "ibp_identity" => {
            let params = ExponentialWeightParams { x0: spec.x0.clone().unwrap(), lambda: spec.lambda.unwrap() };
            params.check(&g).context("fields `x0`, `lambda`")?;
            let u = field(&spec.u, "u", &g)?;
            if tag == "ibp_identity" {
                JobKind::Ibp { g, params, u, dom: dom(), cfg }
            } else {
                if n < 3 {
                    bail!("field `group`: the exponential-weight inequality needs N >= 3, got N = {n}");
                }
                JobKind::ExponentialWeight { g, params, u, dom: dom(), cfg }
            }
        }
        "hardy_sharpness" => {
            let deltas = spec.deltas.clone().unwrap();
            if let Some(d) = deltas.iter().find(|d| !(**d > 0.0 && **d < 1.0)) {
                bail!("field `deltas`: delta = {d} must lie in (0, 1)");
            }
            JobKind::Sharpness { p: exponents(&spec.p, n)?, deltas, cfg, g }
        }
        _ => unreachable!("tag list and resolver agree"),
    };
    Ok(Job { index, tag, spec, kind })
}

/// Resolves every run, reporting all failures together.
pub fn resolve_all(runs: &[RunSpec]) -> Result<Vec<Job>> {
    let mut jobs = Vec::with_capacity(runs.len());
    let mut errors = Vec::new();
    for (i, run) in runs.iter().enumerate() {
        match resolve(i, run) {
            Ok(job) => jobs.push(job),
            Err(e) => errors.push(format!("run {} ({}): {e:#}", i + 1, run.theorem)),
        }
    }
    if !errors.is_empty() {
        bail!("{}", errors.join("\n"));
    }
    Ok(jobs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_the_echo() {
        let job = resolve(0, &RunSpec::new("hardy")).unwrap();
        assert_eq!(job.spec.group.as_deref(), Some("euclidean:3"));
        assert_eq!(job.spec.p, Some(vec![2.0; 3]));
        assert_eq!(job.spec.domain.as_ref().unwrap().lo, Some(vec![0.5; 3]));
        assert!(job.spec.quadrature.is_some());
    }

    #[test]
    fn unused_keys_are_rejected() {
        let mut run = RunSpec::new("hardy");
        run.lambda = Some(1.0);
        let err = resolve(0, &run).err().unwrap().to_string();
        assert!(err.contains("lambda"), "{err}");
    }

    #[test]
    fn small_exponents_are_rejected() {
        let mut run = RunSpec::new("hardy");
        run.group = Some("euclidean:2".into());
        run.p = Some(vec![0.5, 2.0]);
        let err = format!("{:#}", resolve(0, &run).err().unwrap());
        assert!(err.contains("p_i must exceed 1"), "{err}");
    }

    #[test]
    fn rellich_window_reports_admissible_dimension() {
        let mut run = RunSpec::new("rellich");
        run.group = Some("heisenberg:2".into());
        let err = format!("{:#}", resolve(0, &run).err().unwrap());
        assert!(err.contains("N >= 5"), "{err}");
    }

    #[test]
    fn unexcised_singularity_is_caught_early() {
        let mut run = RunSpec::new("multi_singular_hardy");
        run.domain = Some(cube(&[0.0; 3], 1.0));
        let err = format!("{:#}", resolve(0, &run).err().unwrap());
        assert!(err.contains("singularity"), "{err}");
    }

    #[test]
    fn tensor_rule_rejects_ball_excisions() {
        let mut run = RunSpec::new("uncertainty");
        run.quadrature = Some(QuadConfig::gl(8));
        let err = format!("{:#}", resolve(0, &run).err().unwrap());
        assert!(err.contains("use mc"), "{err}");
        let mut run = RunSpec::new("hardy");
        run.quadrature = Some(QuadConfig::gl(8));
        assert!(resolve(0, &run).is_ok());
        run.group = Some("heisenberg:3".into());
        run.p = None;
        let err = format!("{:#}", resolve(0, &run).err().unwrap());
        assert!(err.contains("dimension 7"), "{err}");
    }

    #[test]
    fn all_errors_are_collected() {
        let runs = vec![RunSpec::new("nope"), RunSpec::new("hardy"), RunSpec::new("also_nope")];
        let err = resolve_all(&runs).err().unwrap().to_string();
        assert!(err.contains("run 1 (nope)") && err.contains("run 3 (also_nope)"), "{err}");
    }
}

//! Built-in test fields, addressable by name.
//!
//! Spec strings have the shape `name` or `name:key=value;key=value`, with
//! vectors written comma-separated:
//!
//! * `zero`, `const:2.5`
//! * `bump:center=1,1,1;radius=0.5;amp=1`: `amp * exp(-1/(1-|x-c|^2/r^2))` inside the ball, 0 outside
//! * `gauss:center=0,0,0;width=1;amp=1`
//! * `power:0.5,0.5,0.5`: `prod_j |x'_j|^{a_j}` over the first stratum
//! * `poly:1 + x0^2 - 0.5*x1*x2`
//! * `paraboloid:peak=2;curvature=0.25`: `peak - curvature/2 |x'|^2`
//! * `mix:seed=7;role=u`: seeded positive smooth field (role `u` or `v`)
//! * `radial:index=0;power=-2;center=0,0,0`: `(x'_i - c_i) |x' - c'|^s`, a
//!   component of a radial vector field in the first stratum

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldInfo, FieldRef, Scalar, SignClass, Smoothness};
use crate::group::StratifiedGroup;

#[derive(Debug, Clone, Copy)]
pub struct Zero;

impl Field for Zero {
    fn info(&self) -> FieldInfo {
        FieldInfo::new("zero", Smoothness::C2, SignClass::Nonnegative)
    }
    fn eval<S: Scalar>(&self, _x: &[S]) -> S {
        S::zero()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Constant(pub f64);

impl Field for Constant {
    fn info(&self) -> FieldInfo {
        let sign = if self.0 > 0.0 {
            SignClass::Positive
        } else if self.0 == 0.0 {
            SignClass::Nonnegative
        } else {
            SignClass::Unrestricted
        };
        FieldInfo::new(format!("const:{}", self.0), Smoothness::C2, sign)
    }
    fn eval<S: Scalar>(&self, _x: &[S]) -> S {
        S::cst(self.0)
    }
}

/// Smooth compactly supported bump on a Euclidean ball in coordinate space.
#[derive(Debug, Clone, PartialEq)]
pub struct Bump {
    pub center: Vec<f64>,
    pub radius: f64,
    pub amp: f64,
}

impl Bump {
    pub fn new(center: Vec<f64>, radius: f64, amp: f64) -> Self {
        Bump { center, radius, amp }
    }

    /// A bump whose center is jittered by up to `jitter` per coordinate and
    /// whose radius and amplitude vary by up to 10%, drawn from `seed`.
    pub fn seeded(center: &[f64], radius: f64, jitter: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let center = center
            .iter()
            .map(|c| c + jitter * rng.random_range(-1.0..1.0))
            .collect();
        let radius = radius * rng.random_range(0.9..1.0);
        let amp = rng.random_range(0.9..1.1);
        Bump { center, radius, amp }
    }
}

impl Field for Bump {
    fn info(&self) -> FieldInfo {
        FieldInfo::new(
            format!("bump(r={})", self.radius),
            Smoothness::C2,
            SignClass::Nonnegative,
        )
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let inv_r2 = 1.0 / (self.radius * self.radius);
        let mut q = S::zero();
        for (&xi, &ci) in x.iter().zip(&self.center) {
            let d = xi - ci;
            q += d * d;
        }
        q = q * inv_r2;
        if q.value() >= 1.0 {
            return S::zero();
        }
        (-(S::one() - q).recip()).exp() * self.amp
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gauss {
    pub center: Vec<f64>,
    pub width: f64,
    pub amp: f64,
}

impl Gauss {
    pub fn new(center: Vec<f64>, width: f64, amp: f64) -> Self {
        Gauss { center, width, amp }
    }
}

impl Field for Gauss {
    fn info(&self) -> FieldInfo {
        FieldInfo::new(
            format!("gauss(w={})", self.width),
            Smoothness::C2,
            if self.amp > 0.0 {
                SignClass::Positive
            } else {
                SignClass::Unrestricted
            },
        )
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let mut q = S::zero();
        for (&xi, &ci) in x.iter().zip(&self.center) {
            let d = xi - ci;
            q += d * d;
        }
        (q * (-0.5 / (self.width * self.width))).exp() * self.amp
    }
}

/// `prod_j |x'_j|^{alpha_j}`, smooth off the coordinate hyperplanes.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerProduct {
    pub alphas: Vec<f64>,
}

impl Field for PowerProduct {
    fn info(&self) -> FieldInfo {
        FieldInfo::new(
            format!("power:{}", join(&self.alphas)),
            Smoothness::C2,
            SignClass::Nonnegative,
        )
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let mut out = S::one();
        for (&xi, &a) in x.iter().zip(&self.alphas) {
            out *= xi.abs_powf(a);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coef: f64,
    /// (coordinate index, power)
    pub factors: Vec<(usize, u32)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
    pub source: String,
}

impl Polynomial {
    pub fn parse(expr: &str) -> Result<Self> {
        let compact: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::parse(expr, "empty polynomial"));
        }
        // split into signed terms, leaving exponents like 1e-3 intact
        let mut pieces: Vec<(f64, String)> = Vec::new();
        let mut sign = 1.0;
        let mut cur = String::new();
        let chars: Vec<char> = compact.chars().collect();
        for (i, &c) in chars.iter().enumerate() {
            let in_exponent = i > 1
                && matches!(chars[i - 1], 'e' | 'E')
                && chars[i - 2].is_ascii_digit();
            if (c == '+' || c == '-') && !in_exponent {
                if !cur.is_empty() {
                    pieces.push((sign, std::mem::take(&mut cur)));
                } else if i > 0 {
                    return Err(Error::parse(expr, "dangling operator"));
                }
                sign = if c == '-' { -1.0 } else { 1.0 };
            } else {
                cur.push(c);
            }
        }
        if cur.is_empty() {
            return Err(Error::parse(expr, "trailing operator"));
        }
        pieces.push((sign, cur));

        let mut terms = Vec::with_capacity(pieces.len());
        for (sign, piece) in pieces {
            let mut coef = sign;
            let mut factors = Vec::new();
            for factor in piece.split('*') {
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, pow) = match var.split_once('^') {
                        Some((i, p)) => (i, p),
                        None => (var, "1"),
                    };
                    let idx = idx
                        .parse::<usize>()
                        .map_err(|_| Error::parse(expr, format!("bad variable `{factor}`")))?;
                    let pow = pow
                        .parse::<u32>()
                        .map_err(|_| Error::parse(expr, format!("bad power in `{factor}`")))?;
                    factors.push((idx, pow));
                } else {
                    coef *= factor
                        .parse::<f64>()
                        .map_err(|_| Error::parse(expr, format!("bad factor `{factor}`")))?;
                }
            }
            terms.push(Monomial { coef, factors });
        }
        Ok(Polynomial {
            terms,
            source: expr.trim().to_string(),
        })
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter().map(|f| f.0))
            .max()
    }
}

impl Field for Polynomial {
    fn info(&self) -> FieldInfo {
        FieldInfo::new(
            format!("poly:{}", self.source),
            Smoothness::C2,
            SignClass::Unrestricted,
        )
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let mut out = S::zero();
        for term in &self.terms {
            let mut m = S::cst(term.coef);
            for &(i, p) in &term.factors {
                m *= x[i].powi(p as i32);
            }
            out += m;
        }
        out
    }
}

/// Concave paraboloid in the first stratum: `peak - curvature/2 |x'|^2`.
/// Every `X_i^2` of it equals `-curvature` on every catalog group.
#[derive(Debug, Clone, PartialEq)]
pub struct Paraboloid {
    pub peak: f64,
    pub curvature: f64,
    pub first_dim: usize,
}

impl Field for Paraboloid {
    fn info(&self) -> FieldInfo {
        FieldInfo::new(
            format!("paraboloid(peak={},k={})", self.peak, self.curvature),
            Smoothness::C2,
            SignClass::Unrestricted,
        )
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let mut q = S::zero();
        for &xi in &x[..self.first_dim] {
            q += xi * xi;
        }
        -(q * (0.5 * self.curvature)) + self.peak
    }
}

/// Seeded strictly positive smooth field, used to draw random Picone pairs.
///
/// `u`-role: `amp (1 + sum a_j (x_j - m_j)^2) exp(-sum b_j (x_j - c_j)^2)`;
/// `v`-role: `(1 + sum a_j (x_j - m_j)^2) exp(sum k_j x_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveMix {
    pub seed: u64,
    pub role_u: bool,
    amp: f64,
    quad: Vec<(f64, f64)>,
    expo: Vec<(f64, f64)>,
}

impl PositiveMix {
    pub fn new(dim: usize, seed: u64, role_u: bool) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(2).wrapping_add(role_u as u64));
        let amp = rng.random_range(0.5..2.0);
        let quad = (0..dim)
            .map(|_| (rng.random_range(0.1..1.0), rng.random_range(-0.5..0.5)))
            .collect();
        let expo = (0..dim)
            .map(|_| {
                if role_u {
                    (rng.random_range(0.2..1.0), rng.random_range(-0.5..0.5))
                } else {
                    (rng.random_range(-0.4..0.4), 0.0)
                }
            })
            .collect();
        PositiveMix {
            seed,
            role_u,
            amp,
            quad,
            expo,
        }
    }
}

impl Field for PositiveMix {
    fn info(&self) -> FieldInfo {
        FieldInfo::new(
            format!("mix:seed={};role={}", self.seed, if self.role_u { "u" } else { "v" }),
            Smoothness::C2,
            SignClass::Positive,
        )
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let mut poly = S::one();
        let mut arg = S::zero();
        for ((&xi, &(a, m)), &(b, c)) in x.iter().zip(&self.quad).zip(&self.expo) {
            let d = xi - m;
            poly += d * d * a;
            if self.role_u {
                let e = xi - c;
                arg -= e * e * b;
            } else {
                arg += xi * b;
            }
        }
        poly * arg.exp() * self.amp
    }
}

/// `(x'_i - c_i) |x' - c'|^power`, smooth off `x' = c'`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialComponent {
    pub index: usize,
    pub power: f64,
    pub center: Vec<f64>,
}

impl Field for RadialComponent {
    fn info(&self) -> FieldInfo {
        FieldInfo::new(
            format!("radial(i={},s={})", self.index, self.power),
            Smoothness::C2,
            SignClass::Unrestricted,
        )
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let mut q = S::zero();
        for (&xi, &ci) in x.iter().zip(&self.center) {
            let d = xi - ci;
            q += d * d;
        }
        (x[self.index] - self.center[self.index]) * q.powf(0.5 * self.power)
    }
}

/// `c * f`.
#[derive(Clone, Debug)]
pub struct Scaled {
    pub inner: FieldRef,
    pub factor: f64,
}

impl Field for Scaled {
    fn info(&self) -> FieldInfo {
        let mut info = self.inner.info();
        info.name = format!("{}*{}", self.factor, info.name);
        if self.factor < 0.0 {
            info.sign = SignClass::Unrestricted;
        }
        info
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        S::eval_field(&*self.inner, x) * self.factor
    }
}

/// `f(delta_lambda x)`.
#[derive(Clone, Debug)]
pub struct Dilated {
    pub inner: FieldRef,
    pub group: StratifiedGroup,
    pub lambda: f64,
}

impl Field for Dilated {
    fn info(&self) -> FieldInfo {
        let mut info = self.inner.info();
        info.name = format!("{}∘δ({})", info.name, self.lambda);
        info
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        S::eval_field(&*self.inner, &self.group.dilate_law(self.lambda, x))
    }
}

/// `f(a x)`, the left translate of `f` by `a`.
#[derive(Clone, Debug)]
pub struct LeftTranslated {
    pub inner: FieldRef,
    pub group: StratifiedGroup,
    pub shift: Vec<f64>,
}

impl Field for LeftTranslated {
    fn info(&self) -> FieldInfo {
        let mut info = self.inner.info();
        info.name = format!("{}∘L_a", info.name);
        info
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let a: Vec<S> = self.shift.iter().map(|&v| S::cst(v)).collect();
        S::eval_field(&*self.inner, &self.group.product_law(&a, x))
    }
}

/// Pointwise product `f g`.
#[derive(Clone, Debug)]
pub struct Product {
    pub left: FieldRef,
    pub right: FieldRef,
}

impl Field for Product {
    fn info(&self) -> FieldInfo {
        let (l, r) = (self.left.info(), self.right.info());
        let smoothness = if l.smoothness == Smoothness::C2 && r.smoothness == Smoothness::C2 {
            Smoothness::C2
        } else {
            Smoothness::C1
        };
        FieldInfo::new(format!("({})*({})", l.name, r.name), smoothness, SignClass::Unrestricted)
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        S::eval_field(&*self.left, x) * S::eval_field(&*self.right, x)
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_vec(spec: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::parse(spec, format!("`{t}` is not a number")))
        })
        .collect()
}

struct Params<'a> {
    spec: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(spec: &'a str, body: &'a str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in body.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::parse(spec, format!("expected key=value, got `{item}`")))?;
            pairs.push((k.trim(), v.trim()));
        }
        Ok(Params { spec, pairs })
    }

    fn get(&self, key: &str) -> Option<&'a str> {
        self.pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    fn num(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            Some(v) => v
                .parse::<f64>()
                .map_err(|_| Error::parse(self.spec, format!("`{key}` must be a number"))),
            None => Ok(default),
        }
    }

    fn vec(&self, key: &str, dim: usize) -> Result<Vec<f64>> {
        match self.get(key) {
            Some(v) => {
                let out = parse_vec(self.spec, v)?;
                if out.len() != dim {
                    return Err(Error::parse(
                        self.spec,
                        format!("`{key}` has {} entries, expected {dim}", out.len()),
                    ));
                }
                Ok(out)
            }
            None => Ok(vec![0.0; dim]),
        }
    }

    fn reject_unknown(&self, known: &[&str]) -> Result<()> {
        for (k, _) in &self.pairs {
            if !known.contains(k) {
                return Err(Error::parse(self.spec, format!("unknown key `{k}`")));
            }
        }
        Ok(())
    }
}

/// Build a catalog field for a group from its spec string.
pub fn parse_field(spec: &str, group: &StratifiedGroup) -> Result<FieldRef> {
    let dim = group.dim();
    let spec = spec.trim();
    let (name, body) = spec.split_once(':').unwrap_or((spec, ""));
    let field: FieldRef = match name {
        "zero" => Arc::new(Zero),
        "const" => Arc::new(Constant(
            body.trim()
                .parse()
                .map_err(|_| Error::parse(spec, "const needs a number"))?,
        )),
        "bump" => {
            let p = Params::parse(spec, body)?;
            p.reject_unknown(&["center", "radius", "amp"])?;
            let radius = p.num("radius", 0.5)?;
            if radius <= 0.0 {
                return Err(Error::parse(spec, "radius must be positive"));
            }
            Arc::new(Bump::new(p.vec("center", dim)?, radius, p.num("amp", 1.0)?))
        }
        "gauss" => {
            let p = Params::parse(spec, body)?;
            p.reject_unknown(&["center", "width", "amp"])?;
            let width = p.num("width", 1.0)?;
            if width <= 0.0 {
                return Err(Error::parse(spec, "width must be positive"));
            }
            Arc::new(Gauss {
                center: p.vec("center", dim)?,
                width,
                amp: p.num("amp", 1.0)?,
            })
        }
        "power" => {
            let alphas = parse_vec(spec, body)?;
            if alphas.len() != group.first_dim() {
                return Err(Error::parse(
                    spec,
                    format!("expected {} exponents", group.first_dim()),
                ));
            }
            Arc::new(PowerProduct { alphas })
        }
        "poly" => {
            let poly = Polynomial::parse(body)?;
            if poly.max_index().is_some_and(|i| i >= dim) {
                return Err(Error::parse(spec, format!("variable index exceeds dimension {dim}")));
            }
            Arc::new(poly)
        }
        "paraboloid" => {
            let p = Params::parse(spec, body)?;
            p.reject_unknown(&["peak", "curvature"])?;
            Arc::new(Paraboloid {
                peak: p.num("peak", 2.0)?,
                curvature: p.num("curvature", 0.25)?,
                first_dim: group.first_dim(),
            })
        }
        "mix" => {
            let p = Params::parse(spec, body)?;
            p.reject_unknown(&["seed", "role"])?;
            let seed = p.num("seed", 0.0)?;
            if seed < 0.0 || seed.fract() != 0.0 {
                return Err(Error::parse(spec, "seed must be a nonnegative integer"));
            }
            let role_u = match p.get("role").unwrap_or("u") {
                "u" => true,
                "v" => false,
                other => return Err(Error::parse(spec, format!("unknown role `{other}`"))),
            };
            Arc::new(PositiveMix::new(dim, seed as u64, role_u))
        }
        "radial" => {
            let p = Params::parse(spec, body)?;
            p.reject_unknown(&["index", "power", "center"])?;
            let index = p.num("index", 0.0)?;
            if index < 0.0 || index.fract() != 0.0 || index as usize >= group.first_dim() {
                return Err(Error::parse(spec, "index must name a first-stratum coordinate"));
            }
            Arc::new(RadialComponent {
                index: index as usize,
                power: p.num("power", -2.0)?,
                center: p.vec("center", group.first_dim())?,
            })
        }
        _ => return Err(Error::parse(spec, format!("unknown test field `{name}`"))),
    };
    Ok(field)
}

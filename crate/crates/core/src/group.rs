//! Stratified groups in exponential coordinates.
//!
//! The catalog covers Euclidean spaces, Heisenberg groups and finite products
//! of catalog groups. Coordinates are ordered stratum by stratum, so the first
//! `N` coordinates of every point are its first-stratum part `x'`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Real;

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Euclidean,
    /// `H^n` with coordinates `(x_1..x_n, y_1..y_n, t)`.
    Heisenberg { n: usize },
    /// `copies` copies of `inner`; `layout[i][j]` is the global coordinate of
    /// local coordinate `j` of factor `i`.
    Product {
        inner: Box<StratifiedGroup>,
        copies: usize,
        layout: Vec<Vec<usize>>,
    },
}

/// An immutable stratified group.
#[derive(Debug, Clone, PartialEq)]
pub struct StratifiedGroup {
    kind: Kind,
    strata: Vec<usize>,
    dim: usize,
    homogeneous_dim: usize,
    label: String,
}

/// A point of a group, in global coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The first-stratum part `x'`, given the first-stratum dimension.
    pub fn first_stratum(&self, n: usize) -> &[f64] {
        &self.coords[..n]
    }

    /// Everything above the first stratum, `x''`.
    pub fn upper_strata(&self, n: usize) -> &[f64] {
        &self.coords[n..]
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point { coords }
    }
}

impl StratifiedGroup {
    pub fn euclidean(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("euclidean dimension must be positive".into()));
        }
        Ok(StratifiedGroup {
            kind: Kind::Euclidean,
            strata: vec![n],
            dim: n,
            homogeneous_dim: n,
            label: format!("euclidean:{n}"),
        })
    }

    pub fn heisenberg(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("heisenberg rank must be positive".into()));
        }
        Ok(StratifiedGroup {
            kind: Kind::Heisenberg { n },
            strata: vec![2 * n, 1],
            dim: 2 * n + 1,
            homogeneous_dim: 2 * n + 2,
            label: format!("heisenberg:{n}"),
        })
    }

    /// The direct product of `copies` copies of `inner`.
    pub fn power(inner: &StratifiedGroup, copies: usize) -> Result<Self> {
        if copies == 0 {
            return Err(Error::InvalidGroup("product needs at least one factor".into()));
        }
        let strata: Vec<usize> = inner.strata.iter().map(|s| s * copies).collect();
        let mut layout = vec![Vec::with_capacity(inner.dim); copies];
        let mut global_offset = 0;
        for &size in &inner.strata {
            for (i, local) in layout.iter_mut().enumerate() {
                for o in 0..size {
                    local.push(global_offset + i * size + o);
                }
            }
            global_offset += size * copies;
        }
        Ok(StratifiedGroup {
            kind: Kind::Product {
                inner: Box::new(inner.clone()),
                copies,
                layout,
            },
            dim: inner.dim * copies,
            homogeneous_dim: inner.homogeneous_dim * copies,
            strata,
            label: format!("product:{}:{copies}", inner.label),
        })
    }

    /// Parse `euclidean:N`, `heisenberg:n` or `product:<inner>:n`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let count = |s: &str| -> Result<usize> {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::parse(spec, format!("`{s}` is not a positive integer")))
        };
        if let Some(rest) = spec.strip_prefix("euclidean:") {
            Self::euclidean(count(rest)?)
        } else if let Some(rest) = spec.strip_prefix("heisenberg:") {
            Self::heisenberg(count(rest)?)
        } else if let Some(rest) = spec.strip_prefix("product:") {
            let (inner, n) = rest
                .rsplit_once(':')
                .ok_or_else(|| Error::parse(spec, "expected product:<inner>:<n>"))?;
            Self::power(&Self::from_spec(inner)?, count(n)?)
        } else {
            Err(Error::parse(
                spec,
                "unknown group; expected euclidean:N, heisenberg:n or product:<inner>:n",
            ))
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Topological dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn strata_sizes(&self) -> &[usize] {
        &self.strata
    }

    pub fn step(&self) -> usize {
        self.strata.len()
    }

    /// Dimension `N` of the first stratum.
    pub fn first_dim(&self) -> usize {
        self.strata[0]
    }

    pub fn homogeneous_dim(&self) -> usize {
        self.homogeneous_dim
    }

    /// For product groups: the factor group and the number of factors.
    pub fn factors(&self) -> Option<(&StratifiedGroup, usize)> {
        match &self.kind {
            Kind::Product { inner, copies, .. } => Some((inner, *copies)),
            _ => None,
        }
    }

    /// Global indices of the coordinates that belong to factor `i`.
    pub fn factor_coords(&self, i: usize) -> Option<&[usize]> {
        match &self.kind {
            Kind::Product { layout, .. } => layout.get(i).map(|v| v.as_slice()),
            _ => None,
        }
    }

    pub fn identity(&self) -> Point {
        Point::new(vec![0.0; self.dim])
    }

    /// Stratum level (1-based) of every coordinate.
    pub fn levels(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.dim);
        for (l, &size) in self.strata.iter().enumerate() {
            out.extend(std::iter::repeat(l as u32 + 1).take(size));
        }
        out
    }

    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: x.len(),
            });
        }
        Ok(())
    }

    /// Group law on raw coordinate slices, generic over the number type.
    pub fn product_law<S: Real>(&self, a: &[S], b: &[S]) -> Vec<S> {
        debug_assert_eq!(a.len(), self.dim);
        debug_assert_eq!(b.len(), self.dim);
        match &self.kind {
            Kind::Euclidean => a.iter().zip(b).map(|(&p, &q)| p + q).collect(),
            Kind::Heisenberg { n } => {
                let n = *n;
                let mut out: Vec<S> = a.iter().zip(b).map(|(&p, &q)| p + q).collect();
                let mut form = S::zero();
                for i in 0..n {
                    form += a[i] * b[n + i] - a[n + i] * b[i];
                }
                out[2 * n] += form * 0.5;
                out
            }
            Kind::Product { inner, layout, .. } => {
                let mut out = vec![S::zero(); self.dim];
                let mut la = Vec::with_capacity(inner.dim);
                let mut lb = Vec::with_capacity(inner.dim);
                for idx in layout {
                    la.clear();
                    lb.clear();
                    la.extend(idx.iter().map(|&g| a[g]));
                    lb.extend(idx.iter().map(|&g| b[g]));
                    for (&g, v) in idx.iter().zip(inner.product_law(&la, &lb)) {
                        out[g] = v;
                    }
                }
                out
            }
        }
    }

    /// Inverse on raw coordinates. Every catalog group has inverse = negation
    /// in these coordinates.
    pub fn inverse_law<S: Real>(&self, a: &[S]) -> Vec<S> {
        a.iter().map(|&v| -v).collect()
    }

    pub fn product(&self, a: &Point, b: &Point) -> Result<Point> {
        self.check_point(&a.coords)?;
        self.check_point(&b.coords)?;
        Ok(Point::new(self.product_law(&a.coords, &b.coords)))
    }

    pub fn inverse(&self, a: &Point) -> Result<Point> {
        self.check_point(&a.coords)?;
        Ok(Point::new(self.inverse_law(&a.coords)))
    }

    /// Anisotropic dilation: stratum `l` scales by `lambda^l`.
    pub fn dilate(&self, lambda: f64, x: &Point) -> Result<Point> {
        self.check_point(&x.coords)?;
        Ok(Point::new(self.dilate_law(lambda, &x.coords)))
    }

    pub fn dilate_law<S: Real>(&self, lambda: f64, x: &[S]) -> Vec<S> {
        let mut out = Vec::with_capacity(self.dim);
        let mut i = 0;
        for (l, &size) in self.strata.iter().enumerate() {
            let s = lambda.powi(l as i32 + 1);
            for _ in 0..size {
                out.push(x[i] * s);
                i += 1;
            }
        }
        out
    }

    /// Coefficients of the left-invariant field `X_k` as a first-order
    /// operator: `X_k = sum_j out[j] d/dx_j`.
    pub fn field_coeffs<S: Real>(&self, k: usize, x: &[S], out: &mut [S]) {
        debug_assert!(k < self.first_dim());
        for o in out.iter_mut() {
            *o = S::zero();
        }
        match &self.kind {
            Kind::Euclidean => out[k] = S::one(),
            Kind::Heisenberg { n } => {
                let n = *n;
                out[k] = S::one();
                out[2 * n] = if k < n {
                    -(x[n + k] * 0.5)
                } else {
                    x[k - n] * 0.5
                };
            }
            Kind::Product { inner, layout, .. } => {
                let inner_n = inner.first_dim();
                let (factor, local_k) = (k / inner_n, k % inner_n);
                let idx = &layout[factor];
                let local: Vec<S> = idx.iter().map(|&g| x[g]).collect();
                let mut local_out = vec![S::zero(); inner.dim];
                inner.field_coeffs(local_k, &local, &mut local_out);
                for (&g, v) in idx.iter().zip(local_out) {
                    out[g] = v;
                }
            }
        }
    }

    /// Checked variant of [`field_coeffs`](Self::field_coeffs) on a point.
    pub fn field_vector(&self, k: usize, x: &Point) -> Result<Vec<f64>> {
        self.check_point(&x.coords)?;
        if k >= self.first_dim() {
            return Err(Error::FieldIndex {
                index: k,
                dim: self.first_dim(),
            });
        }
        let mut out = vec![0.0; self.dim];
        self.field_coeffs(k, &x.coords, &mut out);
        Ok(out)
    }

    /// First-stratum part of `x a^{-1}`.
    pub fn first_stratum_difference<S: Real>(&self, x: &[S], a: &[S]) -> Vec<S> {
        let prod = self.product_law(x, &self.inverse_law(a));
        prod[..self.first_dim()].to_vec()
    }
}

impl fmt::Display for StratifiedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

//! Scalar fields that can be evaluated on reals and on first/second order jets.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::jet::{Jet, Jet2, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothness {
    C1,
    C2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignClass {
    Nonnegative,
    Positive,
    Unrestricted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub name: String,
    pub smoothness: Smoothness,
    pub sign: SignClass,
}

impl FieldInfo {
    pub fn new(name: impl Into<String>, smoothness: Smoothness, sign: SignClass) -> Self {
        FieldInfo {
            name: name.into(),
            smoothness,
            sign,
        }
    }
}

/// Object-safe view of a scalar field.
///
/// Implement [`Field`] instead; every `Field` is a `ScalarField`.
pub trait ScalarField: Send + Sync {
    fn info(&self) -> FieldInfo;
    fn eval_real(&self, x: &[f64]) -> f64;
    fn eval_jet(&self, x: &[Jet]) -> Jet;
    fn eval_jet2(&self, x: &[Jet2]) -> Jet2;
}

/// A pure map from coordinates to a scalar, generic over the number type so
/// jets propagate through it.
pub trait Field: Send + Sync {
    fn info(&self) -> FieldInfo;
    fn eval<S: Scalar>(&self, x: &[S]) -> S;
}

impl<F: Field> ScalarField for F {
    fn info(&self) -> FieldInfo {
        Field::info(self)
    }
    fn eval_real(&self, x: &[f64]) -> f64 {
        self.eval(x)
    }
    fn eval_jet(&self, x: &[Jet]) -> Jet {
        self.eval(x)
    }
    fn eval_jet2(&self, x: &[Jet2]) -> Jet2 {
        self.eval(x)
    }
}

/// The number types a [`ScalarField`] can be evaluated on. Lets generic code
/// call back into type-erased fields.
pub trait Scalar: Real {
    fn eval_field(f: &dyn ScalarField, x: &[Self]) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn eval_field(f: &dyn ScalarField, x: &[Self]) -> Self {
        f.eval_real(x)
    }
}

impl Scalar for Jet {
    #[inline]
    fn eval_field(f: &dyn ScalarField, x: &[Self]) -> Self {
        f.eval_jet(x)
    }
}

impl Scalar for Jet2 {
    #[inline]
    fn eval_field(f: &dyn ScalarField, x: &[Self]) -> Self {
        f.eval_jet2(x)
    }
}

pub type FieldRef = Arc<dyn ScalarField>;

impl fmt::Debug for dyn ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarField({})", self.info().name)
    }
}

/// A vector of `N` scalar fields, one per first-stratum direction.
#[derive(Clone, Debug)]
pub struct HorizontalVectorField {
    pub components: Vec<FieldRef>,
}

impl HorizontalVectorField {
    pub fn new(components: Vec<FieldRef>) -> Self {
        HorizontalVectorField { components }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

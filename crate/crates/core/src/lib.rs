//! Horizontal calculus on stratified Lie groups, with numerical checks of
//! Picone identities and of Hardy, Rellich, many-particle and
//! exponentially weighted Hardy inequalities.

pub mod catalog;
pub mod error;
pub mod exponent;
pub mod field;
pub mod group;
pub mod hcalc;
pub mod jet;
pub mod picone;
pub mod quad;
pub mod verdict;
pub mod verify;

pub use error::{Error, Result};
pub use exponent::ExponentVector;
pub use field::{Field, FieldInfo, FieldRef, HorizontalVectorField, Scalar, ScalarField, SignClass, Smoothness};
pub use group::{Point, StratifiedGroup};
pub use jet::{Dual, Jet, Jet2, Real};
pub use quad::{Domain, Excision, Method, MultiEstimate, QuadConfig, QuadratureResult};
pub use picone::{IdentityReport, NamedResidual, Order, PiconePair, PiconeTolerance};
pub use verdict::Verdict;
pub use verify::{judge, Relation, VerificationReport, REGISTRY};

//! Forward-mode dual numbers.
//!
//! A [`Dual<T>`] carries a value and one directional derivative. Nesting
//! (`Dual<Dual<f64>>`) gives exact second directional derivatives, which is
//! all the horizontal calculus needs: the outer level differentiates along
//! `X_k` at a moving base point, the inner level moves the base point along
//! the same field.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Number types that the scalar fields are generic over.
pub trait Real:
    Copy
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn cst(v: f64) -> Self;

    /// The underlying real value, with all infinitesimal parts dropped.
    fn value(&self) -> f64;

    fn zero() -> Self {
        Self::cst(0.0)
    }

    fn one() -> Self {
        Self::cst(1.0)
    }

    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn abs(self) -> Self;
    fn powi(self, n: i32) -> Self;

    /// `self^q`; intended for nonnegative bases.
    fn powf(self, q: f64) -> Self;

    /// `|self|^q`.
    fn abs_powf(self, q: f64) -> Self;

    /// `|self|^q * self`, the odd extension of the power.
    fn signed_powf(self, q: f64) -> Self;

    fn recip(self) -> Self {
        Self::one() / self
    }

    fn is_finite(&self) -> bool;
}

impl Real for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(&self) -> f64 {
        *self
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    #[inline]
    fn powf(self, q: f64) -> Self {
        f64::powf(self, q)
    }
    #[inline]
    fn abs_powf(self, q: f64) -> Self {
        f64::powf(f64::abs(self), q)
    }
    #[inline]
    fn signed_powf(self, q: f64) -> Self {
        if self == 0.0 {
            // 0 * inf would poison the value; the limit is 0 for q > -1.
            return if q > -1.0 { 0.0 } else { f64::NAN };
        }
        f64::powf(f64::abs(self), q) * self
    }
    #[inline]
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

/// Value plus one infinitesimal part: `re + du·ε` with `ε² = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dual<T> {
    pub re: T,
    pub du: T,
}

/// First-order jet over reals.
pub type Jet = Dual<f64>;
/// Second-order (nested) jet over reals.
pub type Jet2 = Dual<Dual<f64>>;

impl<T: Real> Dual<T> {
    #[inline]
    pub fn new(re: T, du: T) -> Self {
        Dual { re, du }
    }

    /// A variable seeded with unit derivative.
    #[inline]
    pub fn var(re: T) -> Self {
        Dual { re, du: T::one() }
    }

    #[inline]
    pub fn constant(re: T) -> Self {
        Dual { re, du: T::zero() }
    }
}

impl<T: Real> Add for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.re + rhs.re, self.du + rhs.du)
    }
}

impl<T: Real> Sub for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.re - rhs.re, self.du - rhs.du)
    }
}

impl<T: Real> Mul for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Dual::new(self.re * rhs.re, self.re * rhs.du + self.du * rhs.re)
    }
}

impl<T: Real> Div for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.re.recip();
        let q = self.re * inv;
        Dual::new(q, (self.du - q * rhs.du) * inv)
    }
}

impl<T: Real> Neg for Dual<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.du)
    }
}

impl<T: Real> Add<f64> for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: f64) -> Self {
        Dual::new(self.re + rhs, self.du)
    }
}

impl<T: Real> Sub<f64> for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: f64) -> Self {
        Dual::new(self.re - rhs, self.du)
    }
}

impl<T: Real> Mul<f64> for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: f64) -> Self {
        Dual::new(self.re * rhs, self.du * rhs)
    }
}

impl<T: Real> Div<f64> for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: f64) -> Self {
        Dual::new(self.re / rhs, self.du / rhs)
    }
}

impl<T: Real> AddAssign for Dual<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real> SubAssign for Dual<T> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T: Real> MulAssign for Dual<T> {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<T: Real> Real for Dual<T> {
    #[inline]
    fn cst(v: f64) -> Self {
        Dual::constant(T::cst(v))
    }

    #[inline]
    fn value(&self) -> f64 {
        self.re.value()
    }

    #[inline]
    fn exp(self) -> Self {
        let e = self.re.exp();
        Dual::new(e, self.du * e)
    }

    #[inline]
    fn ln(self) -> Self {
        Dual::new(self.re.ln(), self.du / self.re)
    }

    #[inline]
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        Dual::new(s, self.du / (s * 2.0))
    }

    #[inline]
    fn sin(self) -> Self {
        Dual::new(self.re.sin(), self.du * self.re.cos())
    }

    #[inline]
    fn cos(self) -> Self {
        Dual::new(self.re.cos(), -(self.du * self.re.sin()))
    }

    #[inline]
    fn abs(self) -> Self {
        if self.re.value() < 0.0 {
            -self
        } else {
            self
        }
    }

    #[inline]
    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::one();
        }
        Dual::new(self.re.powi(n), self.re.powi(n - 1) * (n as f64) * self.du)
    }

    #[inline]
    fn powf(self, q: f64) -> Self {
        if q == 0.0 {
            return Self::one();
        }
        if q == 1.0 {
            return self;
        }
        Dual::new(self.re.powf(q), self.re.powf(q - 1.0) * q * self.du)
    }

    #[inline]
    fn abs_powf(self, q: f64) -> Self {
        if q == 0.0 {
            return Self::one();
        }
        // d|s|^q = q |s|^(q-2) s ds
        Dual::new(self.re.abs_powf(q), self.re.signed_powf(q - 2.0) * q * self.du)
    }

    #[inline]
    fn signed_powf(self, q: f64) -> Self {
        if q == 0.0 {
            return self;
        }
        // d(|s|^q s) = (q+1) |s|^q ds
        Dual::new(self.re.signed_powf(q), self.re.abs_powf(q) * (q + 1.0) * self.du)
    }

    #[inline]
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.du.is_finite()
    }
}

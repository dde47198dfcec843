//! Arithmetic contract shared by the reconstruction kernel.
//!
//! Two realizations exist: `f64`, and [`MpFloat`](crate::mpfr::MpFloat) with a
//! precision chosen at runtime. The context carries whatever a value needs to
//! be created from scratch (nothing for `f64`, the precision in bits for
//! `MpFloat`).

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::exact::{self, Rational};

/// `x^n` by binary exponentiation with a fixed operation order, so every
/// binary64 code path that raises to a power rounds the same way.
#[inline(always)]
pub fn powi_f64(mut x: f64, mut n: u32) -> f64 {
    let mut acc = 1.0;
    loop {
        if n & 1 == 1 {
            acc *= x;
        }
        n >>= 1;
        if n == 0 {
            return acc;
        }
        x *= x;
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    type Context: Copy + Debug + Send + Sync;

    fn context(&self) -> Self::Context;
    fn from_rational(q: &Rational, ctx: Self::Context) -> Self;
    fn from_f64(x: f64, ctx: Self::Context) -> Self;

    fn from_i64(n: i64, ctx: Self::Context) -> Self {
        Self::from_rational(&exact::int(n), ctx)
    }

    fn zero(ctx: Self::Context) -> Self {
        Self::from_f64(0.0, ctx)
    }

    fn one(ctx: Self::Context) -> Self {
        Self::from_f64(1.0, ctx)
    }

    fn powi(&self, n: u32) -> Self;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn recip(&self) -> Self;
    fn is_finite(&self) -> bool;
    fn to_f64(&self) -> f64;

    /// Unit roundoff `2^(1 - precision)`.
    fn epsilon(ctx: Self::Context) -> f64;

    /// Scientific notation with `digits` significant digits and a two-digit
    /// exponent, e.g. `2.86e-06`.
    fn to_sci_string(&self, digits: usize) -> String {
        format_sci(self.to_f64(), digits)
    }
}

/// Formats `x` like `%.{digits-1}e` in C, with at least two exponent digits.
pub fn format_sci(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{:.*e}", digits.saturating_sub(1), x);
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    let sign = if e < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", e.abs())
}

impl Scalar for f64 {
    type Context = ();

    #[inline]
    fn context(&self) {}

    fn from_rational(q: &Rational, _: ()) -> Self {
        exact::to_f64(q)
    }

    #[inline]
    fn from_f64(x: f64, _: ()) -> Self {
        x
    }

    #[inline]
    fn from_i64(n: i64, _: ()) -> Self {
        n as f64
    }

    #[inline]
    fn powi(&self, n: u32) -> Self {
        powi_f64(*self, n)
    }

    #[inline]
    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    #[inline]
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    #[inline]
    fn exp(&self) -> Self {
        f64::exp(*self)
    }

    #[inline]
    fn ln(&self) -> Self {
        f64::ln(*self)
    }

    #[inline]
    fn recip(&self) -> Self {
        1.0 / *self
    }

    #[inline]
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    #[inline]
    fn to_f64(&self) -> f64 {
        *self
    }

    fn epsilon(_: ()) -> f64 {
        f64::EPSILON
    }
}

/// Converts a rational vector into scalars of the given context.
pub fn convert_vec<S: Scalar>(v: &[Rational], ctx: S::Context) -> Vec<S> {
    v.iter().map(|q| S::from_rational(q, ctx)).collect()
}

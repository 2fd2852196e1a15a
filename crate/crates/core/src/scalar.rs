//! Scalar traits: exact integer coordinates, metric values and fitting reals.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Float, FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Exact integer coordinate of a group element (`i64`, `i128`, `BigInt`, ...).
pub trait Coord:
    Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Clone
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Coord for T where
    T: Integer
        + Signed
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Clone
        + Hash
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

pub(crate) fn add<T: Coord>(a: &T, b: &T) -> Result<T> {
    a.checked_add(b).ok_or(Error::overflow("add"))
}

pub(crate) fn sub<T: Coord>(a: &T, b: &T) -> Result<T> {
    a.checked_sub(b).ok_or(Error::overflow("sub"))
}

pub(crate) fn mul<T: Coord>(a: &T, b: &T) -> Result<T> {
    a.checked_mul(b).ok_or(Error::overflow("mul"))
}

pub(crate) fn neg<T: Coord>(a: &T) -> Result<T> {
    T::zero().checked_sub(a).ok_or(Error::overflow("neg"))
}

pub(crate) fn from_i64<T: Coord>(v: i64) -> T {
    T::from_i64(v).expect("every coordinate type holds i64")
}

/// |a| as u64, failing when it does not fit.
pub(crate) fn abs_u64<T: Coord>(a: &T) -> Result<u64> {
    a.abs().to_u64().ok_or(Error::overflow("abs"))
}

/// Value of a metric. Distances are exact: integers or rationals.
pub trait Distance: Copy + Debug + Display + Ord + Hash + Send + Sync + 'static {
    fn zero() -> Self;
    fn from_u64(v: u64) -> Self;
    fn to_f64(self) -> f64;
    /// Largest value not exceeding half of `self` that the type can hold.
    fn half(self) -> Self;
}

impl Distance for u64 {
    fn zero() -> Self {
        0
    }
    fn from_u64(v: u64) -> Self {
        v
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
    fn half(self) -> Self {
        self / 2
    }
}

impl Distance for Ratio<i64> {
    fn zero() -> Self {
        Ratio::from_integer(0)
    }
    fn from_u64(v: u64) -> Self {
        Ratio::from_integer(v as i64)
    }
    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
    fn half(self) -> Self {
        self / 2
    }
}

/// Floating type used by fits (growth exponents, quasi-isometry constants).
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl Real for f32 {}
impl Real for f64 {}

pub(crate) fn real<F: Real>(v: f64) -> F {
    F::from_f64(v).expect("finite f64 converts")
}

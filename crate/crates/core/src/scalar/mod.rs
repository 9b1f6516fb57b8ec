//! Exact scalars: rationals, the real quadratic fields `ℚ(λ)`, and the
//! traits that let the group code run over either (or over `f64`).

pub mod quadratic;
pub mod rational;

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use quadratic::{Approximation, ArithOp, QuadraticContext, QuadraticNumber};
pub use rational::{floor_rational, int, parse_rational, rat, rational_to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("cannot parse {input:?} at offset {position}: {message}")]
    Parse {
        input: String,
        position: usize,
        message: String,
    },
    #[error("operands live in different quadratic fields ({left} vs {right})")]
    ContextMismatch { left: String, right: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid quadratic context: {0}")]
    InvalidContext(String),
}

/// Field operations shared by every coordinate type.
///
/// Constructors take `&self` so that quadratic numbers can inherit their
/// context from an existing value.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational_like(&self, r: &Rational) -> Self;

    fn zero_like(&self) -> Self {
        self.from_rational_like(&Rational::zero())
    }

    fn one_like(&self) -> Self {
        self.from_rational_like(&int(1))
    }

    fn from_int_like(&self, n: &BigInt) -> Self {
        self.from_rational_like(&Rational::from_integer(n.clone()))
    }

    fn vanishes(&self) -> bool;

    /// `self / 2`.
    fn halved(&self) -> Self {
        self.clone() * self.from_rational_like(&rat(1, 2))
    }

    fn approx(&self) -> f64;
}

/// Scalars with an order, hence a floor.
pub trait RealScalar: Scalar {
    fn sign(&self) -> i32;

    fn floor_int(&self) -> BigInt;

    /// `(n, r)` with `self = n + r` and `0 ≤ r < 1`.
    fn split_mod1(&self) -> (BigInt, Self) {
        let n = self.floor_int();
        let r = self.clone() - self.from_int_like(&n);
        (n, r)
    }

    fn frac(&self) -> Self {
        self.split_mod1().1
    }

    fn lt(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).sign() < 0
    }

    fn le(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).sign() <= 0
    }
}

impl Scalar for Rational {
    fn from_rational_like(&self, r: &Rational) -> Self {
        r.clone()
    }

    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }

    fn approx(&self) -> f64 {
        rational_to_f64(self)
    }
}

impl RealScalar for Rational {
    fn sign(&self) -> i32 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }

    fn floor_int(&self) -> BigInt {
        floor_rational(self)
    }
}

impl Scalar for QuadraticNumber {
    fn from_rational_like(&self, r: &Rational) -> Self {
        self.rational_like(r.clone())
    }

    fn vanishes(&self) -> bool {
        self.is_zero()
    }

    fn halved(&self) -> Self {
        self.mul_rational(&rat(1, 2))
    }

    fn approx(&self) -> f64 {
        self.to_f64()
    }
}

impl RealScalar for QuadraticNumber {
    fn sign(&self) -> i32 {
        self.signum()
    }

    fn floor_int(&self) -> BigInt {
        self.floor()
    }

    fn split_mod1(&self) -> (BigInt, Self) {
        self.floor_mod1()
    }
}

impl Scalar for f64 {
    fn from_rational_like(&self, r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn vanishes(&self) -> bool {
        *self == 0.0
    }

    fn halved(&self) -> Self {
        self * 0.5
    }

    fn approx(&self) -> f64 {
        *self
    }
}

impl RealScalar for f64 {
    fn sign(&self) -> i32 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }

    fn floor_int(&self) -> BigInt {
        BigInt::from(self.floor().to_i64().unwrap_or(0))
    }

    fn split_mod1(&self) -> (BigInt, Self) {
        let n = self.floor();
        let mut r = self - n;
        // rounding can push tiny negatives up to exactly 1.0
        if r >= 1.0 {
            r = 0.0;
        }
        (BigInt::from(n.to_i64().unwrap_or(0)), r)
    }
}

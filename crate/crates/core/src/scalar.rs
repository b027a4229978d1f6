//! Scalar abstraction for measure weights, operator coefficients and circle phases.
//!
//! Everything on the exact side of the crate is generic over [`Weight`]. The
//! canonical instantiation is [`BigRational`](num_rational::BigRational); the
//! primitive floats and `Ratio<i64>` are supported for callers that accept
//! rounding or bounded denominators.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An ordered field-like scalar with enough structure for atom weights and
/// phase arithmetic.
pub trait Weight: Num + Signed + PartialOrd + Clone + Debug + Display + FromPrimitive {
    /// Largest integer not exceeding `self`.
    fn floor_value(&self) -> Self;

    fn is_integral(&self) -> bool;

    /// Integer value, if `self` is integral and fits in `i64`.
    fn integer_value(&self) -> Option<i64>;

    fn from_int(k: i64) -> Self {
        Self::from_i64(k).expect("every i64 is representable")
    }

    /// Reduction modulo one into `[0, 1)`; the representation of a circle
    /// element as a fraction of a full turn.
    fn turn(&self) -> Self {
        self.clone() - self.floor_value()
    }

    fn is_positive_weight(&self) -> bool {
        *self > Self::zero()
    }
}

impl<T> Weight for Ratio<T>
where
    T: Integer + Signed + Clone + Debug + Display + ToPrimitive,
    Ratio<T>: FromPrimitive,
{
    fn floor_value(&self) -> Self {
        self.floor()
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn integer_value(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }
}

macro_rules! float_weight {
    ($($t:ty),*) => {$(
        impl Weight for $t {
            fn floor_value(&self) -> Self {
                self.floor()
            }

            fn is_integral(&self) -> bool {
                self.is_finite() && self.fract() == 0.0
            }

            fn integer_value(&self) -> Option<i64> {
                if self.is_integral() { self.to_i64() } else { None }
            }
        }
    )*};
}

float_weight!(f32, f64);

/// Exact rational helper: `p/q` as a [`BigRational`](num_rational::BigRational).
pub fn ratio(p: i64, q: i64) -> Ratio<BigInt> {
    Ratio::new(BigInt::from(p), BigInt::from(q))
}

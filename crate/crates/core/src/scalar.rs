//! Scalar abstractions shared by the linear algebra and the cyclotomic code.
//!
//! Exact types (rationals, cyclotomic numbers) compare against zero exactly;
//! floating point types use [`FLOAT_TOLERANCE`].

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// Absolute tolerance used by floating point fields.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// A commutative field usable by Gaussian elimination.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Multiplicative inverse. Callers must not pass a negligible value.
    fn inv(&self) -> Self;

    /// Zero test: exact for exact fields, within tolerance for floats.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    /// Pivot preference for elimination; larger is better.
    fn pivot_weight(&self) -> f64 {
        if self.is_negligible() {
            0.0
        } else {
            1.0
        }
    }

    /// True if values of this type are computed exactly.
    fn is_exact() -> bool {
        true
    }
}

/// A field with a compatible total order (needed for Sylvester inertia).
pub trait OrderedField: Field + PartialOrd {}

macro_rules! impl_float_field {
    ($($t:ty),*) => {$(
        impl Field for $t {
            fn inv(&self) -> Self {
                1.0 / *self
            }
            fn is_negligible(&self) -> bool {
                (*self as f64).abs() < FLOAT_TOLERANCE
            }
            fn pivot_weight(&self) -> f64 {
                if self.is_negligible() { 0.0 } else { (*self as f64).abs() }
            }
            fn is_exact() -> bool {
                false
            }
        }
        impl OrderedField for $t {}

        impl Field for Complex<$t> {
            fn inv(&self) -> Self {
                Complex::new(1.0, 0.0) / *self
            }
            fn is_negligible(&self) -> bool {
                (self.norm() as f64) < FLOAT_TOLERANCE
            }
            fn pivot_weight(&self) -> f64 {
                if self.is_negligible() { 0.0 } else { self.norm() as f64 }
            }
            fn is_exact() -> bool {
                false
            }
        }
    )*};
}

impl_float_field!(f32, f64);

impl<T> Field for Ratio<T>
where
    T: Integer + Signed + Clone + Debug + Send + Sync,
{
    fn inv(&self) -> Self {
        self.recip()
    }
}

impl<T> OrderedField for Ratio<T> where T: Integer + Signed + Clone + Debug + Send + Sync {}

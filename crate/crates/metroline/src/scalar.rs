//! Scalar traits the algebra layer is generic over.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};

/// Scalars that can live inside a max-plus value: ordered, addable, and
/// free of invalid encodings.
///
/// `is_valid` exists so that float instantiations can reject NaN at
/// construction time; exact types are always valid.
pub trait TropScalar: Clone + PartialOrd + Add<Output = Self> + Debug {
    fn is_valid(&self) -> bool {
        true
    }
}

impl TropScalar for f64 {
    fn is_valid(&self) -> bool {
        !self.is_nan()
    }
}

impl TropScalar for f32 {
    fn is_valid(&self) -> bool {
        !self.is_nan()
    }
}

impl TropScalar for i32 {}
impl TropScalar for i64 {}
impl TropScalar for BigRational {}

/// Scalars the cycle-ratio algorithms run over: an ordered field with
/// conversion from small integers (edge shift counts).
///
/// The production path instantiates this with [`BigRational`] so that
/// policy iteration terminates on exact comparisons; `f64` works too and
/// is used in tests on small integer-weighted graphs.
pub trait CycleScalar:
    Clone
    + PartialOrd
    + Debug
    + Zero
    + One
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + FromPrimitive
{
    fn from_shift(shift: u32) -> Self {
        Self::from_u32(shift).expect("shift count representable in scalar")
    }
}

impl CycleScalar for f64 {}
impl CycleScalar for BigRational {}

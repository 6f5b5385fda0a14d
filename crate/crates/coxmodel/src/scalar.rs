//! Scalar bound for exact class-function arithmetic.

use std::fmt::Debug;
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, Signed, ToPrimitive};

/// Integer scalar usable as a class-function value type.
pub trait Scalar:
    Integer + Signed + CheckedAdd + CheckedMul + FromPrimitive + ToPrimitive + Copy + Debug + Hash + Send + Sync
{
}

impl<T> Scalar for T where
    T: Integer + Signed + CheckedAdd + CheckedMul + FromPrimitive + ToPrimitive + Copy + Debug + Hash + Send + Sync
{
}

pub type Rational = Ratio<i64>;
pub type IntClassFunction = crate::oracle::ClassFunction<i64>;

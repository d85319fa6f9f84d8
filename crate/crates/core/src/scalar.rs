use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num, Signed};

/// Coefficient field for polynomials, operators and matrices.
///
/// Anything that behaves like a field with exact (or at least
/// deterministic) arithmetic qualifies: `BigRational`, `Ratio<i64>`, `f64`.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    fn from_count(n: usize) -> Self {
        Self::from_u64(n as u64).expect("integer not representable in scalar field")
    }

    fn from_i64_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("integer not representable in scalar field")
            / Self::from_i64(den).expect("integer not representable in scalar field")
    }
}

impl<T> Scalar for T where
    T: Clone + Debug + Display + PartialEq + Num + Signed + FromPrimitive + Send + Sync + 'static
{
}

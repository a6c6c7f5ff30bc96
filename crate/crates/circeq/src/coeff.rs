//! Scalar traits for the exact numeric kernels.
//!
//! Everything in this crate computes over exact scalars: arbitrary-precision
//! integers by default, machine words where an enumeration is bounded and a
//! cross-validation test justifies the narrowing, exact rationals for the
//! linear algebra. [`Coeff`] bundles the bounds the kernels need so that
//! signatures stay readable; it is implemented by `BigInt`, the primitive
//! signed integers, and `Ratio<T>` of those.

use num_traits::{FromPrimitive, Signed, ToPrimitive};
use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{AddAssign, SubAssign};

/// An exact, totally ordered scalar with by-reference accumulation.
pub trait Coeff:
    Clone
    + Ord
    + Eq
    + Hash
    + Debug
    + Display
    + Signed
    + FromPrimitive
    + ToPrimitive
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    /// Convenience constructor; panics only if the scalar cannot represent
    /// small integers, which no implementor of this trait does.
    fn of(v: i64) -> Self {
        Self::from_i64(v).expect("scalar must represent small integers")
    }
}

impl<T> Coeff for T where
    T: Clone
        + Ord
        + Eq
        + Hash
        + Debug
        + Display
        + Signed
        + FromPrimitive
        + ToPrimitive
        + for<'a> AddAssign<&'a Self>
        + for<'a> SubAssign<&'a Self>
{
}

/// An exact integer scalar: adds Euclidean structure (gcd, div/rem) on top of
/// [`Coeff`]. Used by the Hermite-normal-form routines.
pub trait IntCoeff: Coeff + num_integer::Integer {}

impl<T> IntCoeff for T where T: Coeff + num_integer::Integer {}

/// Checked conversion from `BigInt`, used when a reduction table computed in
/// arbitrary precision is narrowed to a bounded scalar.
pub trait FromBigInt: Sized {
    /// Panics when the value does not fit; the arbitrary-precision tables are
    /// authoritative, so a failed narrowing must never pass silently.
    fn from_bigint(v: &num_bigint::BigInt) -> Self;
}

impl FromBigInt for num_bigint::BigInt {
    fn from_bigint(v: &num_bigint::BigInt) -> Self {
        v.clone()
    }
}

impl FromBigInt for i64 {
    fn from_bigint(v: &num_bigint::BigInt) -> Self {
        v.to_i64()
            .expect("coefficient exceeds i64; use the arbitrary-precision scalar")
    }
}

impl FromBigInt for i128 {
    fn from_bigint(v: &num_bigint::BigInt) -> Self {
        v.to_i128()
            .expect("coefficient exceeds i128; use the arbitrary-precision scalar")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{FastInt, FastRat, Int, Rat};

    fn takes_coeff<T: Coeff>(a: T, b: &T) -> T {
        let mut x = a;
        x += b;
        x
    }

    #[test]
    fn implementors_cover_the_intended_aliases() {
        assert_eq!(takes_coeff(Int::of(2), &Int::of(3)), Int::of(5));
        assert_eq!(takes_coeff(2i64 as FastInt, &3), 5);
        assert_eq!(
            takes_coeff(Rat::new(Int::of(1), Int::of(2)), &Rat::new(Int::of(1), Int::of(3))),
            Rat::new(Int::of(5), Int::of(6))
        );
        assert_eq!(
            takes_coeff(FastRat::new(1, 2), &FastRat::new(1, 3)),
            FastRat::new(5, 6)
        );
    }

    #[test]
    fn narrowing_round_trips() {
        let v = Int::of(-123456789);
        assert_eq!(i64::from_bigint(&v), -123456789);
        assert_eq!(Int::from_bigint(&v), v);
    }
}

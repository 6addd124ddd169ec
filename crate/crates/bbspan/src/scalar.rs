//! Abstract arithmetic domain shared by the conversion algorithms.
//!
//! Every coefficient recurrence in this crate is written once, generically,
//! against the [`Scalar`] trait and then instantiated three ways:
//!
//! * [`f64`] — the production path,
//! * [`BigRational`] — exact rational arithmetic, used as ground truth
//!   (every `f64` is itself a dyadic rational, so lifting a knot into this
//!   domain is lossless),
//! * [`CountedF64`] — machine floats whose `+ − × ÷` increment a
//!   thread-local counter, used to measure operation counts.
//!
//! Coincident-knot handling follows the convention that a quotient with an
//! identically-zero knot difference contributes zero; callers must branch on
//! exact equality of the knots *before* dividing, so no instance of this
//! trait ever sees a division by zero.

use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use std::cell::Cell;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

/// A field with exact embeddings of knot values and small integers.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Zero
    + One
{
    /// Embeds a knot value. Must be exact: two knots compare equal in the
    /// scalar domain iff they are the same `f64`.
    fn from_knot(value: f64) -> Self;

    /// Nearest `f64`, for reporting. Lossy for [`BigRational`].
    fn to_f64(&self) -> f64;

    /// Exact embedding of a small integer (|v| < 2^53).
    fn from_int(v: i64) -> Self {
        Self::from_knot(v as f64)
    }
}

impl Scalar for f64 {
    #[inline]
    fn from_knot(value: f64) -> Self {
        value
    }

    #[inline]
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn from_knot(value: f64) -> Self {
        BigRational::from_f64(value).expect("knot values must be finite")
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
}

/// Nearest `f64` of a rational, stable for arbitrarily large numerators and
/// denominators: both are reduced to their top 53 bits and the binary
/// exponents are recombined through `exp2`, so ratios like 2^-900 come back
/// as (denormal or zero) floats instead of NaN.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::Signed;

    if r.is_zero() {
        return 0.0;
    }
    let top = |x: &num_bigint::BigInt| -> (f64, i64) {
        let bits = x.bits() as i64;
        let shift = (bits - 53).max(0);
        let head = (x >> shift)
            .to_f64()
            .expect("53-bit head always converts");
        (head, shift)
    };
    let (num_head, num_shift) = top(&r.numer().abs());
    let (den_head, den_shift) = top(r.denom());
    let sign = if r.numer().is_negative() { -1.0 } else { 1.0 };
    sign * (num_head / den_head) * f64::exp2((num_shift - den_shift) as f64)
}

thread_local! {
    static OP_COUNT: Cell<u64> = const { Cell::new(0) };
}

/// An `f64` whose arithmetic increments a per-thread operation counter.
///
/// Comparisons and embeddings are free; only `+ − × ÷` count. Used by the
/// complexity tests to confirm the quadratic/cubic growth of the two
/// conversion methods.
#[derive(Clone, Copy, PartialEq, PartialOrd, Debug)]
pub struct CountedF64(pub f64);

/// Resets the current thread's operation counter to zero.
pub fn reset_op_count() {
    OP_COUNT.with(|c| c.set(0));
}

/// Number of `CountedF64` arithmetic operations on this thread since the
/// last [`reset_op_count`].
pub fn op_count() -> u64 {
    OP_COUNT.with(|c| c.get())
}

#[inline]
fn tick() {
    OP_COUNT.with(|c| c.set(c.get() + 1));
}

impl Add for CountedF64 {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        tick();
        CountedF64(self.0 + rhs.0)
    }
}

impl Sub for CountedF64 {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        tick();
        CountedF64(self.0 - rhs.0)
    }
}

impl Mul for CountedF64 {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        tick();
        CountedF64(self.0 * rhs.0)
    }
}

impl Div for CountedF64 {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        tick();
        CountedF64(self.0 / rhs.0)
    }
}

impl Zero for CountedF64 {
    fn zero() -> Self {
        CountedF64(0.0)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0.0
    }
}

impl One for CountedF64 {
    fn one() -> Self {
        CountedF64(1.0)
    }
}

impl Scalar for CountedF64 {
    #[inline]
    fn from_knot(value: f64) -> Self {
        CountedF64(value)
    }

    #[inline]
    fn to_f64(&self) -> f64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_embedding_is_exact() {
        let x = 0.1_f64; // not a dyadic-looking literal, but a dyadic f64
        let r = BigRational::from_knot(x);
        assert_eq!(rational_to_f64(&r), x);
        // 0.1 as an f64 is 3602879701896397 / 2^55
        let back = BigRational::new(3602879701896397_i64.into(), (1_i64 << 55).into());
        assert_eq!(r, back);
    }

    #[test]
    fn huge_ratios_convert_to_f64() {
        let big: num_bigint::BigInt = num_bigint::BigInt::from(1) << 900;
        let tiny = BigRational::new(1.into(), big.clone());
        assert_eq!(rational_to_f64(&tiny), f64::exp2(-900.0));
        let huge = BigRational::new(big, 1.into());
        assert_eq!(rational_to_f64(&huge), f64::exp2(900.0));
        let three_halves = BigRational::new(3.into(), 2.into());
        assert_eq!(rational_to_f64(&(-three_halves)), -1.5);
    }

    #[test]
    fn counted_ops_tally() {
        reset_op_count();
        let a = CountedF64(3.0);
        let b = CountedF64(4.0);
        let _ = (a + b) * (a - b) / b;
        assert_eq!(op_count(), 4);
        reset_op_count();
        assert_eq!(op_count(), 0);
    }
}

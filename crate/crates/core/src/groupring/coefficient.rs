use std::fmt;

use num_traits::{One, Zero};

use crate::cyclotomic::CyclotomicNumber;
use crate::exact::{format_rational, Rational};

/// Scalars a group ring can carry. The context pins down the field
/// (nothing for `ℚ`, the order `N` for `ℚ(ζ_N)`).
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display {
    type Context: Clone + PartialEq + fmt::Debug;

    fn context(&self) -> Self::Context;
    fn zero_in(ctx: &Self::Context) -> Self;
    fn from_rational_in(ctx: &Self::Context, r: Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn conj(&self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    fn to_json(&self) -> serde_json::Value;

    fn one_in(ctx: &Self::Context) -> Self {
        Self::from_rational_in(ctx, Rational::one())
    }
}

impl Coefficient for Rational {
    type Context = ();

    fn context(&self) {}

    fn zero_in(_: &()) -> Self {
        Rational::zero()
    }

    fn from_rational_in(_: &(), r: Rational) -> Self {
        r
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn scale(&self, r: &Rational) -> Self {
        self * r
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }
}

impl Coefficient for CyclotomicNumber {
    type Context = u64;

    fn context(&self) -> u64 {
        self.order()
    }

    fn zero_in(order: &u64) -> Self {
        CyclotomicNumber::zero(*order)
    }

    fn from_rational_in(order: &u64, r: Rational) -> Self {
        CyclotomicNumber::from_rational(*order, r)
    }

    fn is_zero(&self) -> bool {
        CyclotomicNumber::is_zero(self)
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self = &*self + other;
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn conj(&self) -> Self {
        CyclotomicNumber::conj(self)
    }

    fn scale(&self, r: &Rational) -> Self {
        CyclotomicNumber::scale(self, r)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("cyclotomic numbers serialize")
    }
}

//! Binary fixed-point balls with outward rounding.
//!
//! A ball `(c, r, p)` denotes the closed interval `[(c - r)·2^-p, (c + r)·2^-p]`.
//! Every operation returns a ball containing the exact image of its inputs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    center: BigInt,
    radius: BigUint,
    prec: u32,
}

/// Wire form of a [`Ball`]: decimal strings whose interval contains the ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallSerde {
    pub center_decimal: String,
    pub radius_decimal: String,
    pub prec_bits: u32,
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k as usize
}

fn round_nearest(num: &BigInt, den: &BigInt) -> (BigInt, bool) {
    // den > 0
    let (q, r) = num.div_mod_floor(den);
    if r.is_zero() {
        return (q, true);
    }
    let twice: BigInt = &r * 2u32;
    if &twice >= den {
        (q + 1u32, false)
    } else {
        (q, false)
    }
}

fn ceil_div(num: &BigInt, den: &BigInt) -> BigInt {
    -((-num).div_floor(den))
}

fn to_uint(x: BigInt) -> BigUint {
    x.to_biguint().expect("radius is nonnegative")
}

impl Ball {
    /// Ball from raw scaled parts.
    pub fn from_parts(center: BigInt, radius: BigUint, prec: u32) -> Self {
        Ball { center, radius, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Ball::from_parts(BigInt::zero(), BigUint::zero(), prec)
    }

    /// Nearest dyadic center; the radius is 0 when `x` is representable and one ulp otherwise.
    pub fn from_rational(x: &Rational, prec: u32) -> Self {
        let num = x.numer() << prec as usize;
        let (center, exact) = round_nearest(&num, x.denom());
        let radius = if exact { BigUint::zero() } else { BigUint::one() };
        Ball { center, radius, prec }
    }

    pub fn from_integer(n: impl Into<BigInt>, prec: u32) -> Self {
        Ball::from_parts(n.into() << prec as usize, BigUint::zero(), prec)
    }

    /// Smallest ball at `prec` (up to rounding) covering `[lo, hi]`.
    pub fn from_interval(lo: &Rational, hi: &Rational, prec: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid("empty interval: lo > hi"));
        }
        let mid = (lo + hi) / Rational::from_integer(2.into());
        let center = Ball::from_rational(&mid, prec).center;
        let scale = Rational::from_integer(pow2(prec));
        let c = Rational::from_integer(center.clone());
        let reach = (&c - lo * &scale).max(hi * &scale - &c);
        let radius = to_uint(ceil_div(reach.numer(), reach.denom()).max(BigInt::zero()));
        Ok(Ball { center, radius, prec })
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn center_scaled(&self) -> &BigInt {
        &self.center
    }

    pub fn radius_scaled(&self) -> &BigUint {
        &self.radius
    }

    pub fn is_exact(&self) -> bool {
        self.radius.is_zero()
    }

    fn scale(&self) -> Rational {
        Rational::from_integer(pow2(self.prec))
    }

    pub fn center(&self) -> Rational {
        Rational::new(self.center.clone(), pow2(self.prec))
    }

    pub fn radius(&self) -> Rational {
        Rational::new(BigInt::from(self.radius.clone()), pow2(self.prec))
    }

    pub fn lower(&self) -> Rational {
        Rational::new(&self.center - BigInt::from(self.radius.clone()), pow2(self.prec))
    }

    pub fn upper(&self) -> Rational {
        Rational::new(&self.center + BigInt::from(self.radius.clone()), pow2(self.prec))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }

    pub fn contains_zero(&self) -> bool {
        self.center.magnitude() <= &self.radius
    }

    /// True when the two enclosures share at least one point.
    pub fn intersects(&self, other: &Ball) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// Same ball re-expressed at a finer precision (exact).
    pub fn with_prec(&self, prec: u32) -> Ball {
        if prec >= self.prec {
            let shift = (prec - self.prec) as usize;
            Ball::from_parts(&self.center << shift, &self.radius << shift, prec)
        } else {
            let shift = self.prec - prec;
            let den = pow2(shift);
            let (center, exact) = round_nearest(&self.center, &den);
            let mut radius = to_uint(ceil_div(&BigInt::from(self.radius.clone()), &den));
            if !exact {
                radius += 1u32;
            }
            Ball::from_parts(center, radius, prec)
        }
    }

    /// Enlarges the radius by a nonnegative rational amount.
    pub fn add_error(&self, err: &Rational) -> Ball {
        let scaled = err.abs() * self.scale();
        let extra = to_uint(ceil_div(scaled.numer(), scaled.denom()));
        Ball::from_parts(self.center.clone(), &self.radius + extra, self.prec)
    }

    fn aligned(&self, other: &Ball) -> (Ball, Ball) {
        let p = self.prec.max(other.prec);
        (self.with_prec(p), other.with_prec(p))
    }

    pub fn abs_upper(&self) -> Rational {
        self.lower().abs().max(self.upper().abs())
    }

    /// Enclosure of `1/x`; fails when the ball contains zero.
    pub fn recip(&self) -> Result<Ball> {
        if self.contains_zero() {
            return Err(Error::invalid("reciprocal of a ball containing zero"));
        }
        let (lo, hi) = (self.lower(), self.upper());
        Ball::from_interval(&hi.recip(), &lo.recip(), self.prec)
    }

    pub fn checked_div(&self, other: &Ball) -> Result<Ball> {
        Ok(self * &other.recip()?)
    }

    /// Division by a positive integer.
    pub fn div_u64(&self, d: u64) -> Ball {
        assert!(d > 0, "division by zero");
        let den = BigInt::from(d);
        let (center, exact) = round_nearest(&self.center, &den);
        let mut radius = to_uint(ceil_div(&BigInt::from(self.radius.clone()), &den));
        if !exact {
            radius += 1u32;
        }
        Ball::from_parts(center, radius, self.prec)
    }

    /// Certified enclosure of `ln x` for a positive rational `x`.
    pub fn ln_rational(x: &Rational, prec: u32) -> Result<Ball> {
        if !x.is_positive() {
            return Err(Error::invalid("logarithm of a nonpositive number"));
        }
        let work = prec + 32;
        // x = 2^k · y with 1 <= y < 2
        let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
        let two = Rational::from_integer(2.into());
        let mut y = x / super::rational::pow_int(&two, k);
        while y >= two {
            y /= &two;
            k += 1;
        }
        while y < Rational::one() {
            y *= &two;
            k -= 1;
        }
        let ln_y = atanh_series(&((&y - Rational::one()) / (&y + Rational::one())), work)?;
        let ln_2 = atanh_series(&Rational::new(1.into(), 3.into()), work)?;
        let total = &(&ln_y + &ln_y) + &(&(&ln_2 + &ln_2) * &Ball::from_integer(k, work));
        Ok(total.with_prec(prec))
    }

    /// Decimal rendering of the center with `digits` fractional digits, plus a
    /// decimal radius that covers both the ball radius and the rendering error.
    pub fn to_serde(&self) -> BallSerde {
        let digits = (self.prec as usize * 30103).div_ceil(100000) + 2;
        BallSerde {
            center_decimal: self.center_decimal(digits),
            radius_decimal: self.radius_decimal(digits),
            prec_bits: self.prec,
        }
    }

    pub fn center_decimal(&self, digits: usize) -> String {
        let ten_pow = num_traits::pow(BigInt::from(10), digits);
        let scaled = self.center() * Rational::from_integer(ten_pow.clone());
        let (n, _) = round_nearest(scaled.numer(), scaled.denom());
        render_scaled(&n, digits)
    }

    /// Upper bound for `radius + |center - rendered center|` as a decimal with `digits` places.
    pub fn radius_decimal(&self, digits: usize) -> String {
        let ten_pow = Rational::from_integer(num_traits::pow(BigInt::from(10), digits));
        let rendered =
            super::rational::parse_rational(&self.center_decimal(digits)).expect("own rendering");
        let err = (self.center() - rendered).abs() + self.radius();
        let scaled = err * ten_pow;
        render_scaled(&ceil_div(scaled.numer(), scaled.denom()), digits)
    }
}

fn render_scaled(n: &BigInt, digits: usize) -> String {
    let neg = n.sign() == Sign::Minus;
    let s = n.magnitude().to_string();
    let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
    let (int_part, frac) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

// atanh(z) = Σ z^(2i+1)/(2i+1) for 0 <= z < 1, tail <= z^(2M+1) / ((2M+1)(1 - z²)).
fn atanh_series(z: &Rational, prec: u32) -> Result<Ball> {
    if z.is_negative() || z >= &Rational::one() {
        return Err(Error::invalid("atanh series needs 0 <= z < 1"));
    }
    if z.is_zero() {
        return Ok(Ball::zero(prec));
    }
    let zb = Ball::from_rational(z, prec);
    let z2 = &zb * &zb;
    let z2_exact = z * z;
    let target = Rational::new(BigInt::one(), pow2(prec + 2));
    let mut power = zb;
    let mut power_exact_bound = z.clone();
    let mut sum = Ball::zero(prec);
    let mut i: u64 = 0;
    loop {
        sum = &sum + &power.div_u64(2 * i + 1);
        i += 1;
        power = &power * &z2;
        power_exact_bound = &power_exact_bound * &z2_exact;
        let tail = &power_exact_bound
            / (Rational::from_integer(BigInt::from(2 * i + 1)) * (Rational::one() - &z2_exact));
        if tail < target {
            return Ok(sum.add_error(&tail));
        }
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball::from_parts(-&self.center, self.radius.clone(), self.prec)
    }
}

impl Add for &Ball {
    type Output = Ball;
    fn add(self, other: &Ball) -> Ball {
        let (a, b) = self.aligned(other);
        Ball::from_parts(a.center + b.center, a.radius + b.radius, a.prec)
    }
}

impl Sub for &Ball {
    type Output = Ball;
    fn sub(self, other: &Ball) -> Ball {
        self + &(-other)
    }
}

impl Mul for &Ball {
    type Output = Ball;
    fn mul(self, other: &Ball) -> Ball {
        let (a, b) = self.aligned(other);
        let den = pow2(a.prec);
        let (center, exact) = round_nearest(&(&a.center * &b.center), &den);
        let ra = BigInt::from(a.radius.clone());
        let rb = BigInt::from(b.radius.clone());
        let spread = a.center.abs() * &rb + b.center.abs() * &ra + &ra * &rb;
        let mut radius = to_uint(ceil_div(&spread, &den));
        if !exact {
            radius += 1u32;
        }
        Ball::from_parts(center, radius, a.prec)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.prec as usize * 30103) / 100000).min(40);
        write!(f, "{} ± {}", self.center_decimal(digits), self.radius_decimal(digits))
    }
}

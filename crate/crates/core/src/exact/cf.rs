use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::rational::Rational;
use crate::error::{Error, Result};

/// Continued-fraction prefix shared by every real number of an interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuedFractionReport {
    /// Partial quotients `[a_0; a_1, ...]`.
    #[serde(serialize_with = "ser_bigints")]
    pub certified_terms: Vec<BigInt>,
    #[serde(serialize_with = "ser_rationals")]
    pub convergents: Vec<Rational>,
    pub certified: usize,
    /// Both endpoints coincide and their expansion ran to completion.
    pub terminated: bool,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_rationals<S: serde::Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(super::format_rational))
}

impl ContinuedFractionReport {
    pub fn last_convergent(&self) -> Option<&Rational> {
        self.convergents.last()
    }

    /// Denominator of the deepest certified convergent.
    pub fn largest_denominator(&self) -> BigInt {
        self.convergents.last().map(|c| c.denom().clone()).unwrap_or_else(BigInt::one)
    }
}

/// Runs the Euclidean expansion on both endpoints and keeps the common prefix.
///
/// The set of reals whose expansion starts with a given prefix is an interval,
/// so agreement at both endpoints certifies the prefix for everything between.
pub fn cf_expand(lo: &Rational, hi: &Rational, max_terms: usize) -> Result<ContinuedFractionReport> {
    if lo > hi {
        return Err(Error::invalid("empty interval: lo > hi"));
    }
    let mut x = lo.clone();
    let mut y = hi.clone();
    let mut terms = Vec::new();
    let mut terminated = false;
    while terms.len() < max_terms {
        let a = x.numer().div_floor(x.denom());
        let b = y.numer().div_floor(y.denom());
        if a != b {
            break;
        }
        let fx = &x - Rational::from_integer(a.clone());
        let fy = &y - Rational::from_integer(a.clone());
        terms.push(a);
        if fx.is_zero() || fy.is_zero() {
            terminated = fx.is_zero() && fy.is_zero();
            break;
        }
        x = fx.recip();
        y = fy.recip();
    }
    let convergents = convergents_of(&terms);
    Ok(ContinuedFractionReport {
        certified: terms.len(),
        certified_terms: terms,
        convergents,
        terminated,
    })
}

pub(crate) fn convergents_of(terms: &[BigInt]) -> Vec<Rational> {
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    terms
        .iter()
        .map(|a| {
            let h_next = a * &h + &h_prev;
            let k_next = a * &k + &k_prev;
            h_prev = std::mem::replace(&mut h, h_next);
            k_prev = std::mem::replace(&mut k, k_next);
            Rational::new(h.clone(), k.clone())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_rational, rat};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn forty_five_sixteenths() {
        let r = cf_expand(&rat(45, 16), &rat(45, 16), 10).unwrap();
        assert_eq!(r.certified_terms, ints(&[2, 1, 4, 3]));
        assert_eq!(r.certified, 4);
        assert!(r.terminated);
        assert_eq!(r.last_convergent(), Some(&rat(45, 16)));
    }

    #[test]
    fn integer_point() {
        let r = cf_expand(&rat(7, 1), &rat(7, 1), 10).unwrap();
        assert_eq!(r.certified_terms, ints(&[7]));
        assert_eq!(r.certified, 1);
    }

    #[test]
    fn sqrt_two_bracket() {
        let lo = parse_rational("1.41421356").unwrap();
        let hi = parse_rational("1.41421357").unwrap();
        let r = cf_expand(&lo, &hi, 20).unwrap();
        assert!(r.certified >= 5);
        assert_eq!(r.certified_terms[0], BigInt::from(1));
        assert!(r.certified_terms[1..].iter().all(|a| *a == BigInt::from(2)));
        assert!(!r.terminated);
    }

    #[test]
    fn empty_interval_rejected() {
        assert!(cf_expand(&rat(1, 2), &rat(1, 3), 5).is_err());
    }

    #[test]
    fn negative_values_floor_correctly() {
        let r = cf_expand(&rat(-7, 3), &rat(-7, 3), 10).unwrap();
        assert_eq!(r.certified_terms, ints(&[-3, 1, 2]));
        assert_eq!(r.last_convergent(), Some(&rat(-7, 3)));
    }

    #[test]
    fn max_terms_caps_output() {
        let r = cf_expand(&rat(45, 16), &rat(45, 16), 2).unwrap();
        assert_eq!(r.certified, 2);
        assert!(!r.terminated);
    }

    proptest! {
        #[test]
        fn point_interval_reproduces_value(n in -10_000i64..10_000, d in 1i64..10_000) {
            let x = rat(n, d);
            let r = cf_expand(&x, &x, 1000).unwrap();
            prop_assert_eq!(r.last_convergent(), Some(&x));
            prop_assert!(r.terminated);
        }

        #[test]
        fn convergent_recurrence_and_growth(n in 1i64..1_000_000, d in 1i64..1_000_000) {
            let x = rat(n, d);
            let r = cf_expand(&x, &x, 1000).unwrap();
            let dens: Vec<BigInt> = r.convergents.iter().map(|c| c.denom().clone()).collect();
            for k in 2..dens.len() {
                prop_assert!(dens[k] > dens[k - 1]);
            }
            for k in 2..r.convergents.len() {
                let a = &r.certified_terms[k];
                let expect = a * r.convergents[k - 1].denom() + r.convergents[k - 2].denom();
                prop_assert_eq!(&expect, r.convergents[k].denom());
            }
        }

        #[test]
        fn prefix_holds_inside_interval(n in 1i64..100_000, d in 1i64..100_000, w in 1i64..1000, t in 0i64..=1000) {
            let lo = rat(n, d);
            let hi = &lo + rat(w, 1_000_000);
            let mid = &lo + (&hi - &lo) * rat(t, 1000);
            let r = cf_expand(&lo, &hi, 50).unwrap();
            let inner = cf_expand(&mid, &mid, 1000).unwrap();
            let prefix_len = r.certified.min(inner.certified);
            prop_assert_eq!(&r.certified_terms[..prefix_len], &inner.certified_terms[..prefix_len]);
        }
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

/// Laurent polynomial in one variable with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
    var: String,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new(), var: "μ".to_string() }
    }

    pub fn monomial(exp: i64, coeff: Rational) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, Rational::one())
    }

    /// `μ + μ⁻¹`.
    pub fn mu_plus_inverse() -> Self {
        &LaurentPoly::monomial(1, Rational::one()) + &LaurentPoly::monomial(-1, Rational::one())
    }

    pub fn with_var(mut self, var: &str) -> Self {
        self.var = var.to_string();
        self
    }

    fn add_term(&mut self, exp: i64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        let (d_lo, d_hi) = (divisor.min_exp()?, divisor.max_exp()?);
        let Some(a_lo) = self.min_exp() else {
            return Some(LaurentPoly::zero().with_var(&self.var));
        };
        // Long division on the polynomial parts after clearing negative exponents.
        let lead = divisor.coeff(d_hi);
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero().with_var(&self.var);
        while let Some(r_hi) = rem.max_exp() {
            if r_hi - a_lo < d_hi - d_lo {
                return None;
            }
            let shift = r_hi - d_hi;
            let c = rem.coeff(r_hi) / &lead;
            quot.add_term(shift, c.clone());
            for (e, dc) in divisor.terms() {
                rem.add_term(e + shift, -(dc * &c));
            }
        }
        Some(quot)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
            var: self.var.clone(),
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, other: &LaurentPoly) -> LaurentPoly {
        self + &(-other)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero().with_var(&self.var);
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let show_coeff = !mag.is_one() || e == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "{}", self.var)?,
                _ => write!(f, "{}^{}", self.var, e)?,
            }
        }
        Ok(())
    }
}

/// `det(A_n + (μ + μ⁻¹) I_{n-1})` for the 0/1 path adjacency matrix `A_n`.
///
/// First-row expansion gives `d_k = (μ + μ⁻¹) d_{k-1} - d_{k-2}` with `d_1 = 1`
/// (empty matrix) and `d_2 = μ + μ⁻¹`.
pub fn laurent_det_tridiagonal(n: usize) -> Result<LaurentPoly> {
    if n < 2 {
        return Err(Error::invalid(format!("tridiagonal determinant needs n >= 2, got {n}")));
    }
    let s = LaurentPoly::mu_plus_inverse();
    let mut prev = LaurentPoly::one();
    let mut cur = s.clone();
    for _ in 3..=n {
        let next = &(&s * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

//! Truncated gcd series `Φ(x, y) = Σ gcd(m, n) xᵐyⁿ`, its diagonal, and
//! finite checks of the coefficient-gap hypothesis for `a(n) = Σ_{i≤n} gcd(i, n)`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_rational, Rational};
use crate::numtheory::{
    a_of_factorization, a_of_n, first_primes, factorize_with, gcd_phi_sum_check, Factorization,
    DEFAULT_FACTOR_BUDGET, DEFAULT_SEED,
};

pub const MAX_SERIES_ORDER: u64 = 500;

/// Coefficients `(i, j) ↦ c_{ij}` for `1 ≤ i, j ≤ K`.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariateSeries {
    order: u64,
    coeffs: Vec<Vec<Rational>>,
}

impl BivariateSeries {
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coefficient of `xⁱyʲ`; `None` beyond the truncation order.
    pub fn coeff(&self, i: u64, j: u64) -> Option<&Rational> {
        if i == 0 || j == 0 || i > self.order || j > self.order {
            return None;
        }
        Some(&self.coeffs[i as usize - 1][j as usize - 1])
    }

    pub fn is_symmetric(&self) -> bool {
        (1..=self.order).all(|i| (1..i).all(|j| self.coeff(i, j) == self.coeff(j, i)))
    }

    /// `[xⁿ]` of the diagonal specialization `y = x`, for `n ≤ K + 1`.
    pub fn diagonal_coeff(&self, n: u64) -> Option<Rational> {
        if n > self.order + 1 {
            return None;
        }
        let mut total = Rational::from_integer(0.into());
        for i in 1..n {
            total += self.coeff(i, n - i)?;
        }
        Some(total)
    }
}

/// `Φ(x, y)` truncated at order `K`.
pub fn phi_series(k: u64) -> Result<BivariateSeries> {
    if !(1..=MAX_SERIES_ORDER).contains(&k) {
        return Err(Error::BudgetExceeded(format!(
            "series order {k} outside 1..={MAX_SERIES_ORDER}"
        )));
    }
    let coeffs = (1..=k)
        .map(|i| (1..=k).map(|j| Rational::from_integer(BigInt::from(i.gcd(&j)))).collect())
        .collect();
    Ok(BivariateSeries { order: k, coeffs })
}

/// `a(n) − [xⁿ]Φ(x, x) = n` for `1 ≤ n ≤ K`.
pub fn diagonal_bridge_check(k: u64) -> Result<bool> {
    if k < 1 {
        return Err(Error::invalid("K must be at least 1"));
    }
    let series = phi_series(k.max(1))?;
    for n in 1..=k {
        let diag = series
            .diagonal_coeff(n)
            .ok_or_else(|| Error::Internal(format!("diagonal coefficient {n} beyond order")))?;
        let a = Rational::from_integer(BigInt::from(a_of_n(n)?));
        if a - diag != Rational::from_integer(n.into()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Σ_{k | gcd(i,j)} φ(k) = gcd(i, j)` for all `i, j ≤ limit`.
pub fn gcd_phi_identity_check(limit: u64) -> bool {
    (1..=limit).all(|i| (1..=limit).all(|j| gcd_phi_sum_check(i, j)))
}

/// Comparison of `a(m)` with one neighbour `a(m + j)`.
#[derive(Clone, Debug, Serialize)]
pub struct GapEntry {
    pub j: i64,
    pub a: String,
    /// `a(m + j)/a(m)`.
    #[serde(with = "crate::exact::rational_serde")]
    pub ratio: Rational,
    /// `a(m) > N·a(m + j)`.
    pub pass: bool,
    /// Prime factors of `m + j` counted with multiplicity.
    pub omega: u32,
    #[serde(skip)]
    pub factorization: Factorization,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapCheck {
    pub m: String,
    pub n: u64,
    pub a_m: String,
    pub entries: Vec<GapEntry>,
    pub all_pass: bool,
}

impl GapCheck {
    pub fn max_ratio(&self) -> Rational {
        self.entries
            .iter()
            .map(|e| e.ratio.clone())
            .max()
            .unwrap_or_else(|| Rational::from_integer(0.into()))
    }
}

fn gap_check_with(m: u64, a_m: BigUint, n: u64, seed: u64, budget: u64) -> Result<GapCheck> {
    let mut entries = Vec::new();
    for j in (-(n as i64)..=n as i64).filter(|&j| j != 0) {
        let target = m
            .checked_add_signed(j)
            .ok_or_else(|| Error::invalid(format!("m + {j} leaves the u64 range")))?;
        let f = factorize_with(target, seed, budget)?;
        let a = a_of_factorization(&f);
        let pass = a_m > &a * n;
        let ratio = Rational::new(BigInt::from(a.clone()), BigInt::from(a_m.clone()));
        entries.push(GapEntry { j, a: a.to_string(), ratio, pass, omega: f.big_omega(), factorization: f });
    }
    let all_pass = entries.iter().all(|e| e.pass);
    Ok(GapCheck { m: m.to_string(), n, a_m: a_m.to_string(), entries, all_pass })
}

/// Whether `a(m) > N·a(m + j)` for every `1 ≤ |j| ≤ N`.
pub fn gap_condition_check(m: u64, n: u64) -> Result<GapCheck> {
    gap_condition_check_with(m, n, DEFAULT_SEED, DEFAULT_FACTOR_BUDGET)
}

pub fn gap_condition_check_with(m: u64, n: u64, seed: u64, budget: u64) -> Result<GapCheck> {
    if n < 1 || m <= n {
        return Err(Error::invalid(format!("need m > N >= 1, got m = {m}, N = {n}")));
    }
    let a_m = a_of_factorization(&factorize_with(m, seed, budget)?);
    gap_check_with(m, a_m, n, seed, budget)
}

/// `m_Q = Π_{i≤Q} p_i · Π_{i≤N} p_i^N` and the gap comparisons at `m_Q`.
#[derive(Clone, Debug)]
pub struct GapWitness {
    pub q: u64,
    pub n: u64,
    pub m_q: BigUint,
    pub m_q_factorization: Factorization,
    pub check: GapCheck,
    /// For each `j`, prime factors of `m_Q + j` that are at least `p_Q`, with multiplicity.
    pub z: BTreeMap<i64, u32>,
}

impl GapWitness {
    pub fn max_ratio(&self) -> Rational {
        self.check.max_ratio()
    }

    pub fn record(&self) -> GapWitnessRecord {
        let key = |j: i64| format!("{j:+}");
        GapWitnessRecord {
            q: self.q,
            n: self.n,
            m_q: self.m_q.to_string(),
            a_m_q: self.check.a_m.clone(),
            ratios: self.check.entries.iter().map(|e| (key(e.j), format_rational(&e.ratio))).collect(),
            ratio_decimals: self
                .check
                .entries
                .iter()
                .map(|e| (key(e.j), e.ratio.to_f64().unwrap_or(f64::NAN)))
                .collect(),
            passes: self.check.entries.iter().map(|e| (key(e.j), e.pass)).collect(),
            all_pass: self.check.all_pass,
            z: self.z.iter().map(|(&j, &v)| (key(j), v)).collect(),
            omega: self.check.entries.iter().map(|e| (key(e.j), e.omega)).collect(),
            max_ratio: format_rational(&self.max_ratio()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GapWitnessRecord {
    #[serde(rename = "Q")]
    pub q: u64,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "mQ")]
    pub m_q: String,
    #[serde(rename = "a_mQ")]
    pub a_m_q: String,
    pub ratios: BTreeMap<String, String>,
    pub ratio_decimals: BTreeMap<String, f64>,
    pub passes: BTreeMap<String, bool>,
    #[serde(rename = "allPass")]
    pub all_pass: bool,
    pub z: BTreeMap<String, u32>,
    #[serde(rename = "Omega")]
    pub omega: BTreeMap<String, u32>,
    pub max_ratio: String,
}

/// Factorization of `m_Q`, read off from its definition.
pub fn witness_factorization(q: u64, n: u64) -> Result<Factorization> {
    if q < 1 || n < 1 {
        return Err(Error::invalid(format!("need Q, N >= 1, got Q = {q}, N = {n}")));
    }
    let count = q.max(n) as usize;
    let primes = first_primes(count);
    let pairs = primes
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let i = i as u64 + 1;
            let e = u32::from(i <= q) + if i <= n { n as u32 } else { 0 };
            (p, e)
        })
        .collect();
    Factorization::from_pairs(pairs)
}

pub fn gap_witness(q: u64, n: u64) -> Result<GapWitness> {
    gap_witness_with(q, n, DEFAULT_SEED, DEFAULT_FACTOR_BUDGET)
}

pub fn gap_witness_with(q: u64, n: u64, seed: u64, budget: u64) -> Result<GapWitness> {
    let f = witness_factorization(q, n)?;
    let m_q = f.value();
    let m = m_q
        .to_u64()
        .filter(|m| m.checked_add(n).is_some())
        .ok_or_else(|| Error::BudgetExceeded(format!("m_Q = {m_q} exceeds the 64-bit factorization range")))?;
    let check = gap_check_with(m, a_of_factorization(&f), n, seed, budget)?;
    let p_q = *first_primes(q as usize).last().expect("Q >= 1");
    let z = check
        .entries
        .iter()
        .map(|e| {
            let count = e.factorization.pairs().iter().filter(|&&(p, _)| p >= p_q).map(|&(_, k)| k).sum();
            (e.j, count)
        })
        .collect();
    Ok(GapWitness { q, n, m_q, m_q_factorization: f, check, z })
}

/// Witnesses for `Q = 1..=q_max` at fixed `N`.
pub fn gap_witness_sweep(q_max: u64, n: u64) -> Result<Vec<GapWitness>> {
    (1..=q_max).map(|q| gap_witness(q, n)).collect()
}

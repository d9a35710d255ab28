//! Exact arithmetic in `ℚ(ζ_N)` with dense coefficient vectors modulo `Φ_N`,
//! plus the exact eigen-data of the path matrix `A_n`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{format_rational, to_f64, Rational};
use crate::numtheory::divisors;

type IntPoly = Vec<BigInt>;

/// Reduced power basis of `ℚ(ζ_N)`: entry `k` holds `x^k mod Φ_N` for `0 ≤ k < N`.
struct FieldData {
    phi_poly: IntPoly,
    powers: Vec<IntPoly>,
}

fn poly_cache() -> &'static RwLock<HashMap<u64, IntPoly>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, IntPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn field_cache() -> &'static RwLock<HashMap<u64, Arc<FieldData>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<FieldData>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

// Exact division of integer polynomials by a monic divisor (coefficients low to high).
fn div_monic(num: &IntPoly, den: &IntPoly) -> IntPoly {
    let dd = den.len() - 1;
    let mut rem = num.clone();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for k in (dd..num.len()).rev() {
        let c = rem[k].clone();
        if c.is_zero() {
            continue;
        }
        quot[k - dd] = c.clone();
        for (i, d) in den.iter().enumerate() {
            rem[k - dd + i] -= &c * d;
        }
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// `Φ_N` with integer coefficients, lowest degree first, via
/// `Φ_N = (x^N - 1) / Π_{d | N, d < N} Φ_d`.
pub fn cyclotomic_polynomial(n: u64) -> IntPoly {
    assert!(n >= 1, "Φ_0 is undefined");
    if let Some(p) = poly_cache().read().expect("poly cache poisoned").get(&n) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d < n {
            num = div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    poly_cache().write().expect("poly cache poisoned").insert(n, num.clone());
    num
}

fn field(n: u64) -> Arc<FieldData> {
    if let Some(f) = field_cache().read().expect("field cache poisoned").get(&n) {
        return f.clone();
    }
    let phi_poly = cyclotomic_polynomial(n);
    let deg = phi_poly.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![BigInt::zero(); deg];
    cur[0] = BigInt::one();
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x and reduce the overflow coefficient
        let top = cur.pop().unwrap_or_default();
        cur.insert(0, BigInt::zero());
        if deg > 0 {
            for i in 0..deg {
                cur[i] -= &top * &phi_poly[i];
            }
        }
    }
    let data = Arc::new(FieldData { phi_poly, powers });
    field_cache().write().expect("field cache poisoned").insert(n, data.clone());
    data
}

/// Element of `ℚ(ζ_N)` as `Σ_{k<φ(N)} c_k ζ_N^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn zero(order: u64) -> Self {
        let deg = field(order).phi_poly.len() - 1;
        CyclotomicNumber { order, coeffs: vec![Rational::zero(); deg] }
    }

    pub fn one(order: u64) -> Self {
        CyclotomicNumber::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u64, r: Rational) -> Self {
        let mut z = CyclotomicNumber::zero(order);
        z.coeffs[0] = r;
        z
    }

    /// `ζ_N^k` for any integer `k`.
    pub fn zeta_pow(order: u64, k: i64) -> Self {
        let f = field(order);
        let idx = k.rem_euclid(order as i64) as usize;
        CyclotomicNumber {
            order,
            coeffs: f.powers[idx].iter().map(|c| Rational::from_integer(c.clone())).collect(),
        }
    }

    /// Builds `Σ c_k ζ^k` from arbitrary exponents, reducing modulo `Φ_N`.
    pub fn from_exponents(order: u64, terms: &[(i64, Rational)]) -> Self {
        let f = field(order);
        let mut out = CyclotomicNumber::zero(order);
        for (k, c) in terms {
            let idx = k.rem_euclid(order as i64) as usize;
            for (slot, p) in out.coeffs.iter_mut().zip(&f.powers[idx]) {
                if !p.is_zero() {
                    *slot += c * Rational::from_integer(p.clone());
                }
            }
        }
        out
    }

    pub fn from_coeffs(order: u64, coeffs: Vec<Rational>) -> Result<Self> {
        let deg = field(order).phi_poly.len() - 1;
        if coeffs.len() != deg {
            return Err(Error::invalid(format!(
                "ℚ(ζ_{order}) needs {deg} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(CyclotomicNumber { order, coeffs })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational, if it lies in `ℚ`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CyclotomicNumber { order: self.order, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// Complex conjugation `ζ ↦ ζ⁻¹`.
    pub fn conj(&self) -> Self {
        let terms: Vec<(i64, Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (-(k as i64), c.clone()))
            .collect();
        CyclotomicNumber::from_exponents(self.order, &terms)
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Image under `ℚ(ζ_N) ⊂ ℚ(ζ_M)`, `ζ_N ↦ ζ_M^{M/N}`; requires `N | M`.
    pub fn embed(&self, target: u64) -> Result<Self> {
        if !target.is_multiple_of(self.order) {
            return Err(Error::invalid(format!(
                "ℚ(ζ_{}) does not embed in ℚ(ζ_{target})",
                self.order
            )));
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let step = (target / self.order) as i64;
        let terms: Vec<(i64, Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i64 * step, c.clone()))
            .collect();
        Ok(CyclotomicNumber::from_exponents(target, &terms))
    }

    /// Complex embedding with `ζ_N = e^{2πi/N}`.
    pub fn to_complex(&self) -> (f64, f64) {
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / self.order as f64;
            let v = to_f64(c);
            (re + v * angle.cos(), im + v * angle.sin())
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.to_complex().0
    }

    fn mul_raw(&self, other: &Self) -> Self {
        let f = field(self.order);
        let deg = self.coeffs.len();
        let mut prod = vec![Rational::zero(); 2 * deg.max(1) - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        reduce_mod(&mut prod, &f.phi_poly);
        prod.truncate(deg);
        CyclotomicNumber { order: self.order, coeffs: prod }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Φ_N`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::invalid("inverse of zero"));
        }
        let f = field(self.order);
        let modulus: Vec<Rational> =
            f.phi_poly.iter().map(|c| Rational::from_integer(c.clone())).collect();
        let (g, s) = ext_gcd(&trim(self.coeffs.clone()), &modulus);
        if g.len() != 1 {
            return Err(Error::Internal("element shares a factor with Φ_N".into()));
        }
        let inv_g = g[0].recip();
        let mut coeffs: Vec<Rational> = s.into_iter().map(|c| c * &inv_g).collect();
        reduce_mod(&mut coeffs, &f.phi_poly);
        coeffs.resize(self.coeffs.len(), Rational::zero());
        Ok(CyclotomicNumber { order: self.order, coeffs })
    }

    fn check_same_field(&self, other: &Self) {
        assert_eq!(
            self.order, other.order,
            "mixing ℚ(ζ_{}) with ℚ(ζ_{}); embed into a common field first",
            self.order, other.order
        );
    }
}

fn reduce_mod(poly: &mut Vec<Rational>, modulus: &IntPoly) {
    let d = modulus.len() - 1;
    for k in (d..poly.len()).rev() {
        let c = std::mem::take(&mut poly[k]);
        if c.is_zero() {
            continue;
        }
        for i in 0..d {
            if !modulus[i].is_zero() {
                poly[k - d + i] -= &c * Rational::from_integer(modulus[i].clone());
            }
        }
    }
    if poly.len() > d {
        poly.truncate(d.max(1));
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (vec![Rational::zero()], rem);
    }
    let lead = b.last().expect("nonempty").clone();
    let mut quot = vec![Rational::zero(); rem.len() - b.len() + 1];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + b.len() - 1] / &lead;
        if !c.is_zero() {
            for (i, bc) in b.iter().enumerate() {
                rem[k + i] -= &c * bc;
            }
        }
        quot[k] = c;
    }
    (trim(quot), trim(rem))
}

fn poly_sub_mul(a: &[Rational], q: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = a.to_vec();
    let len = (q.len() + b.len()).saturating_sub(1).max(out.len());
    out.resize(len, Rational::zero());
    for (i, qc) in q.iter().enumerate() {
        for (j, bc) in b.iter().enumerate() {
            out[i + j] -= qc * bc;
        }
    }
    trim(out)
}

// Returns (g, s) with s·a ≡ g (mod m).
fn ext_gcd(a: &[Rational], m: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut s0, mut s1) = (vec![Rational::zero()], vec![Rational::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub_mul(&s0, &q, &s1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, other: &CyclotomicNumber) -> CyclotomicNumber {
        self.check_same_field(other);
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, other: &CyclotomicNumber) -> CyclotomicNumber {
        self.check_same_field(other);
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, other: &CyclotomicNumber) -> CyclotomicNumber {
        self.check_same_field(other);
        self.mul_raw(other)
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})ζ{}", self.order),
                _ => format!("({c})ζ{}^{k}", self.order),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CyclotomicNumber", 2)?;
        st.serialize_field("N", &self.order)?;
        let coeffs: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

fn check_range(m: u64, n: u64) -> Result<()> {
    if n < 2 || m < 1 || m >= n {
        return Err(Error::invalid(format!("need 1 <= m <= n-1 and n >= 2, got m={m}, n={n}")));
    }
    Ok(())
}

/// Field `ℚ(ζ_{4n})` hosting both `λ_{m,n}` and the sine entries.
pub fn ambient_order(n: u64) -> u64 {
    4 * n
}

/// `λ_{m,n} = 2cos(mπ/n) = ζ_{4n}^{2m} + ζ_{4n}^{-2m}`.
pub fn lambda_exact(m: u64, n: u64) -> Result<CyclotomicNumber> {
    check_range(m, n)?;
    let two_m = 2 * m as i64;
    Ok(CyclotomicNumber::from_exponents(
        ambient_order(n),
        &[(two_m, Rational::one()), (-two_m, Rational::one())],
    ))
}

/// `sin(kπ/n) = (ζ_{4n}^{2k} - ζ_{4n}^{-2k}) / (2i)` with `1/i = ζ_{4n}^{3n}`.
pub fn sine_exact(k: i64, n: u64) -> CyclotomicNumber {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let n_i = n as i64;
    CyclotomicNumber::from_exponents(
        ambient_order(n),
        &[(2 * k + 3 * n_i, half.clone()), (-2 * k + 3 * n_i, -half)],
    )
}

/// Unnormalized eigenvector `v_j = sin(mjπ/n)`, `1 ≤ j ≤ n-1`, of `A_n` for `λ_{m,n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenvectorEntries {
    pub n: u64,
    pub m: u64,
    pub entries: Vec<CyclotomicNumber>,
}

impl EigenvectorEntries {
    /// `Σ_j v_j²`, which equals `n/2`.
    pub fn squared_norm(&self) -> Result<Rational> {
        let total = self
            .entries
            .iter()
            .fold(CyclotomicNumber::zero(ambient_order(self.n)), |acc, v| &acc + &(v * v));
        total.as_rational().ok_or_else(|| Error::Internal("squared norm is not rational".into()))
    }
}

pub fn eigen_entries(m: u64, n: u64) -> Result<EigenvectorEntries> {
    check_range(m, n)?;
    let entries = (1..n).map(|j| sine_exact((m * j) as i64, n)).collect();
    Ok(EigenvectorEntries { n, m, entries })
}

/// `Σ_j v_j(m)·v_j(m')`, which must equal `(n/2)·δ_{m,m'}`.
pub fn orthogonality_inner(m: u64, m_prime: u64, n: u64) -> Result<Rational> {
    let a = eigen_entries(m, n)?;
    let b = eigen_entries(m_prime, n)?;
    let total = a
        .entries
        .iter()
        .zip(&b.entries)
        .fold(CyclotomicNumber::zero(ambient_order(n)), |acc, (x, y)| &acc + &(x * y));
    total
        .as_rational()
        .ok_or_else(|| Error::Internal(format!("inner product ({m},{m_prime},{n}) is not rational")))
}

/// `α_{i,j} = 1` when `|i - j| = 1`.
pub fn alpha(i: u64, j: u64) -> bool {
    i.abs_diff(j) == 1
}

/// Checks `Σ_j v_j·α_{j,k} = λ_{m,n}·v_k` for every `k`.
pub fn eigen_relation_check(m: u64, n: u64) -> Result<bool> {
    let v = eigen_entries(m, n)?;
    let lambda = lambda_exact(m, n)?;
    let zero = CyclotomicNumber::zero(ambient_order(n));
    Ok((1..n).all(|k| {
        let lhs = (1..n)
            .filter(|&j| alpha(j, k))
            .fold(zero.clone(), |acc, j| &acc + &v.entries[(j - 1) as usize]);
        lhs == &lambda * &v.entries[(k - 1) as usize]
    }))
}

/// `gcd`-reduced rotation `(m, n)`, useful for matching `λ` values across `n`.
pub fn reduced_rotation(m: u64, n: u64) -> (u64, u64) {
    let g = m.gcd(&n);
    (m / g, n / g)
}

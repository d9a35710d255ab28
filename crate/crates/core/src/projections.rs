//! Projections of prescribed rational trace in `ℚ[C_n]` with `n·e ∈ ℤ[C_n]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_rational, rat, Rational};
use crate::groupring::{avg_projection, FiniteAbelianGroup, GroupRingElement, TermRecord};

pub type CyclicElement = GroupRingElement<FiniteAbelianGroup, Rational>;

/// `q = m/n` with `n = 2^r·s`, `s` odd, `2^r ≥ s − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizedFraction {
    pub m: u64,
    pub n: u64,
    pub r: u32,
    pub s: u64,
}

fn split_two_power(n: u64) -> (u32, u64) {
    let r = n.trailing_zeros();
    (r, n >> r)
}

/// Whether `n = 2^r·s` (with `s` odd) satisfies `2^r ≥ s − 1`.
pub fn is_valid_denominator(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let (r, s) = split_two_power(n);
    r >= 64 || (1u64 << r) >= s - 1
}

fn check_unit_interval(q: &Rational) -> Result<()> {
    if q.is_negative() || *q > Rational::one() {
        return Err(Error::invalid(format!("q = {} is outside [0, 1]", format_rational(q))));
    }
    Ok(())
}

/// The smallest valid denominator for `q`, reached by doubling numerator and denominator.
pub fn normalize_denominator(q: &Rational) -> Result<NormalizedFraction> {
    check_unit_interval(q)?;
    let mut m = q.numer().to_u64().ok_or_else(|| Error::invalid("numerator too large"))?;
    let mut n = q.denom().to_u64().ok_or_else(|| Error::invalid("denominator too large"))?;
    while !is_valid_denominator(n) {
        m = m.checked_mul(2).ok_or_else(|| Error::invalid("denominator overflow"))?;
        n = n.checked_mul(2).ok_or_else(|| Error::invalid("denominator overflow"))?;
    }
    let (r, s) = split_two_power(n);
    Ok(NormalizedFraction { m, n, r, s })
}

fn cyclic(n: u64) -> Result<FiniteAbelianGroup> {
    let n = u32::try_from(n).map_err(|_| Error::invalid(format!("group order {n} too large")))?;
    FiniteAbelianGroup::cyclic(n)
}

/// `e(c) ∈ ℚ[C_{2^r}]` with trace `c/2^r`.
///
/// For `c ≤ 2^{r−1}` this is the image of `e(c) ∈ ℚ[C_{2^{r−1}}]` under
/// `t ↦ h·t`, `h = (1 + t^{2^{r−1}})/2`; otherwise `1 − e(2^r − c)`.
pub fn dyadic_projection(c: u64, r: u32) -> Result<CyclicElement> {
    if r > 20 {
        return Err(Error::invalid(format!("r = {r} is too large")));
    }
    let size = 1u64 << r;
    if c > size {
        return Err(Error::invalid(format!("c = {c} exceeds 2^{r} = {size}")));
    }
    let group = cyclic(size)?;
    if c == 0 {
        return Ok(CyclicElement::zero(group));
    }
    if c == size {
        return Ok(CyclicElement::one(group));
    }
    let half = size / 2;
    if c > half {
        let rest = dyadic_projection(size - c, r)?;
        return CyclicElement::one(group).sub(&rest);
    }
    let inner = dyadic_projection(c, r - 1)?;
    let lifted = CyclicElement::from_terms(
        group.clone(),
        inner.terms().iter().map(|(&j, x)| (j, x.clone())),
    );
    let h = CyclicElement::from_terms(group, [(0, rat(1, 2)), (half as u32, rat(1, 2))]);
    h.ring_mul(&lifted)
}

/// A projection `e ∈ ℚ[C_n]` with `tr(e) = q` and its construction data.
#[derive(Clone, Debug)]
pub struct RationalProjectionCertificate {
    pub q: Rational,
    pub m: u64,
    pub n: u64,
    pub r: u32,
    pub s: u64,
    pub a: u64,
    pub b: u64,
    pub e: CyclicElement,
    /// `e(a)·f` and `e(b)·(1 − f)`.
    pub parts: (CyclicElement, CyclicElement),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateChecks {
    pub projection: bool,
    pub trace: bool,
    pub integral: bool,
    pub decomposition: bool,
    pub orthogonal_parts: bool,
}

impl CertificateChecks {
    pub fn all(&self) -> bool {
        self.projection && self.trace && self.integral && self.decomposition && self.orthogonal_parts
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateRecord {
    pub q: String,
    pub m: u64,
    pub n: u64,
    pub r: u32,
    pub s: u64,
    pub a: u64,
    pub b: u64,
    pub e: Vec<TermRecord>,
}

impl RationalProjectionCertificate {
    pub fn verify(&self) -> CertificateChecks {
        let pow = 1u64 << self.r;
        let decomposition = self.a <= pow
            && self.b <= pow
            && self.a + (self.s - 1) * self.b == self.m
            && pow * self.s == self.n
            && self.q == rat(self.m as i64, self.n as i64);
        CertificateChecks {
            projection: self.e.is_projection(),
            trace: self.e.trace() == self.q,
            integral: self.e.scale(&Rational::from_integer(BigInt::from(self.n))).is_integral(),
            decomposition,
            orthogonal_parts: self.parts.0.ring_mul(&self.parts.1).is_ok_and(|x| x.is_zero()),
        }
    }

    pub fn record(&self) -> CertificateRecord {
        CertificateRecord {
            q: format_rational(&self.q),
            m: self.m,
            n: self.n,
            r: self.r,
            s: self.s,
            a: self.a,
            b: self.b,
            e: self.e.to_records(),
        }
    }
}

/// Certificate for `q`, using the minimal valid denominator.
pub fn rational_projection(q: &Rational) -> Result<RationalProjectionCertificate> {
    let NormalizedFraction { m, n, .. } = normalize_denominator(q)?;
    rational_projection_with(m, n)
}

/// Certificate for `q = m/n` with `n` itself of valid form.
pub fn rational_projection_with(m: u64, n: u64) -> Result<RationalProjectionCertificate> {
    if !is_valid_denominator(n) {
        return Err(Error::invalid(format!("n = {n} is not of the form 2^r·s with 2^r >= s - 1")));
    }
    if m > n {
        return Err(Error::invalid(format!("m = {m} exceeds n = {n}")));
    }
    let (r, s) = split_two_power(n);
    let pow = 1u64 << r;
    let (a, b) = if s == 1 {
        (m, 0)
    } else if m >= pow * (s - 1) {
        (m - (s - 1) * pow, pow)
    } else {
        let (b, a) = m.div_rem(&(s - 1));
        (a, b)
    };
    let group = cyclic(n)?;
    // C_{2^r} × C_s → C_n via t_{2^r} ↦ t^s and t_s ↦ t^{2^r}
    let from_dyadic = |x: &CyclicElement| {
        CyclicElement::from_terms(
            group.clone(),
            x.terms().iter().map(|(&j, c)| (((j as u64 * s) % n) as u32, c.clone())),
        )
    };
    let f_odd = avg_projection(&cyclic(s)?);
    let f = CyclicElement::from_terms(
        group.clone(),
        f_odd.terms().iter().map(|(&j, c)| (((j as u64 * pow) % n) as u32, c.clone())),
    );
    let one = CyclicElement::one(group.clone());
    let ea = from_dyadic(&dyadic_projection(a, r)?);
    let eb = from_dyadic(&dyadic_projection(b, r)?);
    let first = ea.ring_mul(&f)?;
    let second = eb.ring_mul(&one.sub(&f)?)?;
    let e = first.add(&second)?;
    Ok(RationalProjectionCertificate {
        q: rat(m as i64, n as i64),
        m,
        n,
        r,
        s,
        a,
        b,
        e,
        parts: (first, second),
    })
}

/// Every `(m, n)` with `n ≤ n_max` of valid form and `0 ≤ m ≤ n`.
pub fn sweep_pairs(n_max: u64) -> impl Iterator<Item = (u64, u64)> {
    (1..=n_max)
        .filter(|&n| is_valid_denominator(n))
        .flat_map(|n| (0..=n).map(move |m| (m, n)))
}

/// Certificate checks for every pair of [`sweep_pairs`]; returns the first failure, if any.
pub fn sweep(n_max: u64) -> Result<Option<(u64, u64, CertificateChecks)>> {
    for (m, n) in sweep_pairs(n_max) {
        let checks = rational_projection_with(m, n)?.verify();
        if !checks.all() {
            return Ok(Some((m, n, checks)));
        }
    }
    Ok(None)
}

/// Smallest positive integer `k` with `k·x` integral for every coefficient.
pub fn integral_multiplier(x: &CyclicElement) -> BigInt {
    let l = x.denominator_lcm();
    if l.is_zero() {
        BigInt::one()
    } else {
        l
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        let nf = |a, b| {
            let x = normalize_denominator(&rat(a, b)).unwrap();
            (x.m, x.n, x.r, x.s)
        };
        assert_eq!(nf(1, 2), (1, 2, 1, 1));
        assert_eq!(nf(1, 3), (2, 6, 1, 3));
        assert_eq!(nf(3, 5), (12, 20, 2, 5));
        assert_eq!(nf(0, 1), (0, 1, 0, 1));
        assert_eq!(nf(1, 1), (1, 1, 0, 1));
        assert!(normalize_denominator(&rat(3, 2)).is_err());
        assert!(normalize_denominator(&rat(-1, 2)).is_err());
    }

    #[test]
    fn dyadic_examples() {
        assert!(dyadic_projection(0, 3).unwrap().is_zero());
        let e11 = dyadic_projection(1, 1).unwrap();
        let c2 = FiniteAbelianGroup::cyclic(2).unwrap();
        assert_eq!(e11, CyclicElement::from_terms(c2, [(0, rat(1, 2)), (1, rat(1, 2))]));
        for r in 0..=5u32 {
            for c in 0..=(1u64 << r) {
                let e = dyadic_projection(c, r).unwrap();
                assert!(e.is_projection(), "c={c} r={r}");
                assert_eq!(e.trace(), rat(c as i64, 1 << r));
            }
        }
        assert!(dyadic_projection(5, 2).is_err());
    }

    #[test]
    fn certificate_examples() {
        let zero = rational_projection(&rat(0, 1)).unwrap();
        assert!(zero.e.is_zero());
        let third = rational_projection(&rat(1, 3)).unwrap();
        assert_eq!((third.n, third.a, third.b), (6, 0, 1));
        assert!(third.verify().all());
        let five_eighths = rational_projection(&rat(5, 8)).unwrap();
        assert_eq!((five_eighths.n, five_eighths.s, five_eighths.a, five_eighths.b), (8, 1, 5, 0));
        assert_eq!(five_eighths.e, dyadic_projection(5, 3).unwrap());
        assert!(five_eighths.verify().all());
    }

    #[test]
    fn upper_branch() {
        // n = 12 = 4·3, m = 11 ≥ 2^r(s−1) = 8
        let c = rational_projection_with(11, 12).unwrap();
        assert_eq!((c.a, c.b), (3, 4));
        assert!(c.verify().all());
        assert!(rational_projection_with(1, 3).is_err());
    }

    #[test]
    fn complement_traces() {
        for (a, b) in [(1, 3), (2, 5), (3, 7)] {
            let q = rat(a, b);
            let e = rational_projection(&q).unwrap().e;
            let ec = rational_projection(&(rat(1, 1) - &q)).unwrap().e;
            let one = CyclicElement::one(e.group().clone());
            assert_eq!(ec.trace(), one.sub(&e).unwrap().trace());
        }
    }
}

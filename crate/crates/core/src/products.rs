//! The operator `T − S` on `(U≀ℤ) × (V≀ℤ)`: its kernel dimension as a gcd double
//! sum and as a single totient sum `κ(p, q)`, certified evaluation of `κ`, and the
//! integral multiple `Z` of `T − S`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cyclotomic::lambda_exact;
use crate::error::{Error, Result};
use crate::exact::{cf_expand, format_rational, pow_int, Ball, BallSerde, ContinuedFractionReport, Rational};
use crate::groupring::{product_embed, ProductGroup, RationalWreathElement, WreathProduct};
use crate::numtheory::euler_phi;
use crate::projections::rational_projection;
use crate::spectral::SpectralSetup;

pub const MAX_DIGITS: u64 = 10_000;
const GUARD_DIGITS: u64 = 20;
const LOG2_10: f64 = std::f64::consts::LOG2_10;

fn check_xy(x: &Rational, y: &Rational) -> Result<()> {
    let one = Rational::one();
    if *x <= one || *y <= one {
        return Err(Error::invalid(format!(
            "X and Y must exceed 1, got X = {}, Y = {}",
            format_rational(x),
            format_rational(y)
        )));
    }
    Ok(())
}

fn prefactor(x: &Rational, y: &Rational) -> Rational {
    let one = Rational::one();
    let a = x - &one;
    let b = y - &one;
    &a * &a * &b * &b
}

/// Approximate `log₁₀|r|` for nonzero `r`, valid far outside the `f64` exponent range.
pub fn log10_abs(r: &Rational) -> f64 {
    fn log2_big(n: &BigInt) -> f64 {
        let bits = n.bits();
        let shift = bits.saturating_sub(60);
        let top = (n.abs() >> shift as usize).to_f64().unwrap_or(f64::MAX);
        top.log2() + shift as f64
    }
    (log2_big(r.numer()) - log2_big(r.denom())) / LOG2_10
}

/// Truncated gcd double sum with a rigorous bound on what was left out.
#[derive(Clone, Debug, Serialize)]
pub struct DoubleSum {
    #[serde(with = "crate::exact::rational_serde")]
    pub partial: Rational,
    #[serde(with = "crate::exact::rational_serde")]
    pub tail_bound: Rational,
    pub trunc_n: u64,
}

impl DoubleSum {
    /// `[partial, partial + tail_bound]` as a ball.
    pub fn enclosure(&self, prec: u32) -> Result<Ball> {
        Ball::from_interval(&self.partial, &(&self.partial + &self.tail_bound), prec)
    }
}

/// `Σ_{n,n' ≤ N} (gcd(n,n')−1)(X−1)²(Y−1)²/(XⁿY^{n'})` and a bound on the rest,
/// using `gcd(n,n') − 1 < min(n,n')`.
pub fn dim_ker_ts(x: &Rational, y: &Rational, trunc_n: u64) -> Result<DoubleSum> {
    check_xy(x, y)?;
    let n = trunc_n as usize;
    // x^{-k} = (qx/px)^k; put everything over px^N · py^N
    let (px, qx) = (x.numer().clone(), x.denom().clone());
    let (py, qy) = (y.numer().clone(), y.denom().clone());
    let weights = |p: &BigInt, q: &BigInt| -> Vec<BigInt> {
        (0..=n)
            .map(|k| num_traits::pow(q.clone(), k) * num_traits::pow(p.clone(), n - k))
            .collect()
    };
    let wx = weights(&px, &qx);
    let wy = weights(&py, &qy);
    let mut total = BigInt::zero();
    for (i, wxi) in wx.iter().enumerate().skip(2) {
        let mut row = BigInt::zero();
        for (j, wyj) in wy.iter().enumerate().skip(2) {
            let g = i.gcd(&j) - 1;
            if g > 0 {
                row += wyj * g;
            }
        }
        total += row * wxi;
    }
    let denom = num_traits::pow(px, n) * num_traits::pow(py, n);
    let pre = prefactor(x, y);
    let partial = Rational::new(total, denom) * &pre;

    let one = Rational::one();
    let xi = x.recip();
    let yi = y.recip();
    let exp = trunc_n as i64 + 1;
    let a = pow_int(&xi, exp) / (&one - &xi) * &yi / ((&one - &yi) * (&one - &yi));
    let b = pow_int(&yi, exp) / (&one - &yi) * &xi / ((&one - &xi) * (&one - &xi));
    Ok(DoubleSum { partial, tail_bound: (a + b) * pre, trunc_n })
}

/// `#{(m, m') : 1 ≤ m < n, 1 ≤ m' < n', m/n = m'/n'}` by enumeration.
pub fn b_count_bruteforce(n: u64, n_prime: u64) -> u64 {
    let mut count = 0;
    for m in 1..n {
        for m_prime in 1..n_prime {
            if m * n_prime == m_prime * n {
                count += 1;
            }
        }
    }
    count
}

/// Coefficient table of `Σ_{k≤K} φ(k) Σ_i Σ_j x^{ik} y^{jk}` for exponents up to `K`;
/// entry `[m−1][n−1]` is the coefficient of `x^m y^n`.
pub fn gcd_series_coefficients(k_max: u64) -> Result<Vec<Vec<u64>>> {
    let size = k_max as usize;
    let mut table = vec![vec![0u64; size]; size];
    for k in 1..=k_max {
        let phi = euler_phi(k)?;
        for i in (k..=k_max).step_by(k as usize) {
            for j in (k..=k_max).step_by(k as usize) {
                table[i as usize - 1][j as usize - 1] += phi;
            }
        }
    }
    Ok(table)
}

/// The truncated totient series has coefficient `gcd(m, n)` at `x^m y^n` for all `m, n ≤ K`.
pub fn series_identity_check(k_max: u64) -> Result<bool> {
    if k_max < 1 {
        return Err(Error::invalid("K must be at least 1"));
    }
    let table = gcd_series_coefficients(k_max)?;
    Ok((1..=k_max).all(|m| (1..=k_max).all(|n| table[m as usize - 1][n as usize - 1] == m.gcd(&n))))
}

/// Inputs to [`kappa_eval`].
#[derive(Clone, Debug)]
pub struct KappaParams {
    pub p: Rational,
    pub q: Rational,
    pub digits: u64,
    /// Fixed number of series terms; chosen from `digits` when absent.
    pub terms: Option<u64>,
}

impl KappaParams {
    pub fn new(p: Rational, q: Rational, digits: u64) -> Self {
        KappaParams { p, q, digits, terms: None }
    }

    pub fn with_terms(mut self, terms: u64) -> Self {
        self.terms = Some(terms);
        self
    }

    fn validate(&self) -> Result<(Rational, Rational)> {
        if self.digits > MAX_DIGITS {
            return Err(Error::BudgetExceeded(format!(
                "{} digits requested, limit is {MAX_DIGITS}",
                self.digits
            )));
        }
        for (name, v) in [("p", &self.p), ("q", &self.q)] {
            if !v.is_positive() || *v >= Rational::one() {
                return Err(Error::invalid(format!("{name} = {} must lie in (0, 1)", format_rational(v))));
            }
        }
        Ok((self.p.recip(), self.q.recip()))
    }
}

/// Certified enclosure of `κ(p, q)`.
#[derive(Clone, Debug)]
pub struct KappaReport {
    pub p: Rational,
    pub q: Rational,
    pub digits: u64,
    pub value: Ball,
    pub terms_used: u64,
    pub tail_bound: Ball,
    /// Exact rational majorant behind `tail_bound`.
    pub tail_exact: Rational,
    pub cf: ContinuedFractionReport,
    /// Denominator of the deepest certified convergent.
    pub min_denominator_witness: BigInt,
}

impl KappaReport {
    pub fn width(&self) -> Rational {
        self.value.upper() - self.value.lower()
    }

    /// Number `d` of decimal digits with `width ≤ 10^{-d}`.
    pub fn certified_digits(&self) -> u64 {
        let w = self.width();
        if w.is_zero() {
            return u64::MAX;
        }
        let d = (-log10_abs(&w)).floor();
        if d <= 0.0 {
            0
        } else {
            // guard the float estimate with an exact comparison
            let mut d = d as u64;
            while d > 0 && w > pow_int(&Rational::from_integer(10.into()), -(d as i64)) {
                d -= 1;
            }
            d
        }
    }

    /// Smallest `e` with `tail_exact < 10^e`.
    pub fn tail_exponent(&self) -> i64 {
        let upper = self.tail_exact.clone();
        if upper.is_zero() {
            return i64::MIN;
        }
        let mut e = log10_abs(&upper).ceil() as i64;
        let ten = Rational::from_integer(10.into());
        while upper >= pow_int(&ten, e) {
            e += 1;
        }
        while upper < pow_int(&ten, e - 1) {
            e -= 1;
        }
        e
    }

    pub fn record(&self) -> KappaRecord {
        let shown = self.digits.min(self.certified_digits()) as usize;
        KappaRecord {
            p: format_rational(&self.p),
            q: format_rational(&self.q),
            digits: self.digits,
            certified_digits: self.certified_digits(),
            value: self.value.center_decimal(shown),
            ball: self.value.to_serde(),
            terms_used: self.terms_used,
            tail_exp: self.tail_exponent(),
            tail_bound: self.tail_bound.to_serde(),
            cf_terms: self.cf.certified_terms.iter().map(|t| t.to_string()).collect(),
            cf_certified: self.cf.certified,
            min_denominator_witness: self.min_denominator_witness.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaRecord {
    pub p: String,
    pub q: String,
    pub digits: u64,
    pub certified_digits: u64,
    pub value: String,
    pub ball: BallSerde,
    pub terms_used: u64,
    pub tail_exp: i64,
    pub tail_bound: BallSerde,
    pub cf_terms: Vec<String>,
    pub cf_certified: usize,
    pub min_denominator_witness: String,
}

/// `Σ_{k>K} k·z^k·(1−1/X)⁻¹(1−1/Y)⁻¹·(X−1)²(Y−1)²` with `z = 1/(XY)`, which dominates
/// the prefactored remainder `Σ_{k>K} (X−1)²(Y−1)² φ(k)/((X^k−1)(Y^k−1))`.
pub fn kappa_tail_bound(x: &Rational, y: &Rational, k: u64) -> Rational {
    let one = Rational::one();
    let z = (x * y).recip();
    let kk = Rational::from_integer(k.into());
    let geometric = pow_int(&z, k as i64 + 1) * ((&kk + &one) - &kk * &z) / ((&one - &z) * (&one - &z));
    let damping = (&one - x.recip()) * (&one - y.recip());
    geometric / damping * prefactor(x, y)
}

fn terms_for_digits(x: &Rational, y: &Rational, digits: u64) -> u64 {
    let target = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits as usize + 1));
    let per_term = log10_abs(&(x * y)).max(1e-6);
    let mut k = ((digits as f64 + 1.0) / per_term).ceil().max(2.0) as u64;
    while kappa_tail_bound(x, y, k) >= target {
        k += 1 + k / 16;
    }
    k
}

/// Working precision in bits for `digits` decimal digits plus guard digits.
pub fn working_precision(digits: u64) -> u32 {
    ((digits + GUARD_DIGITS) as f64 * LOG2_10).ceil() as u32 + 8
}

/// `κ = (X−1)²(Y−1)² Σ_{k≥2} φ(k)/((X^k−1)(Y^k−1))` as a certified ball.
pub fn kappa_eval(params: &KappaParams) -> Result<KappaReport> {
    let (x, y) = params.validate()?;
    let prec = working_precision(params.digits);
    let k_max = match params.terms {
        Some(k) => k.max(1),
        None => terms_for_digits(&x, &y, params.digits),
    };
    let pre = prefactor(&x, &y);
    let one = Rational::one();
    let mut xk = x.clone();
    let mut yk = y.clone();
    let mut sum = Ball::zero(prec);
    for k in 2..=k_max {
        xk *= &x;
        yk *= &y;
        let phi = Rational::from_integer(euler_phi(k)?.into());
        let term = &pre * phi / ((&xk - &one) * (&yk - &one));
        sum = &sum + &Ball::from_rational(&term, prec);
    }
    let tail_exact = kappa_tail_bound(&x, &y, k_max);
    let tail_bound = Ball::from_rational(&tail_exact, prec);
    // the remainder is nonnegative and below tail_exact
    let value = sum.add_error(&tail_exact);
    let max_terms = (params.digits as usize) * 3 + 16;
    let cf = cf_expand(&value.lower(), &value.upper(), max_terms)?;
    let min_denominator_witness = cf.largest_denominator();
    Ok(KappaReport {
        p: params.p.clone(),
        q: params.q.clone(),
        digits: params.digits,
        value,
        terms_used: k_max,
        tail_bound,
        tail_exact,
        cf,
        min_denominator_witness,
    })
}

/// Statement a certified enclosure supports about rationality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RationalityVerdict {
    /// The enclosure is a single rational point.
    Rational { value: String },
    /// Any rational inside the enclosure has numerator and denominator at least
    /// those of the deepest certified convergent, which exceed the bound.
    DenominatorExceeds { bound: String },
    /// Certified convergents do not yet exceed the bound.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct RationalityProbe {
    pub certified_cf_terms: usize,
    pub largest_convergent_denominator: String,
    pub largest_convergent_numerator: String,
    pub verdict: RationalityVerdict,
}

/// Reads off the sound consequences of the certified continued-fraction prefix.
pub fn rationality_probe(report: &KappaReport, bound: &BigInt) -> Result<RationalityProbe> {
    rationality_probe_interval(&report.value.lower(), &report.value.upper(), bound)
}

pub fn rationality_probe_interval(lo: &Rational, hi: &Rational, bound: &BigInt) -> Result<RationalityProbe> {
    if !bound.is_positive() {
        return Err(Error::invalid("bound must be positive"));
    }
    let width = hi - lo;
    if width.is_zero() {
        let cf = cf_expand(lo, hi, usize::MAX)?;
        let last = cf.last_convergent().cloned().unwrap_or_else(|| lo.clone());
        return Ok(RationalityProbe {
            certified_cf_terms: cf.certified,
            largest_convergent_denominator: last.denom().to_string(),
            largest_convergent_numerator: last.numer().to_string(),
            verdict: RationalityVerdict::Rational { value: format_rational(lo) },
        });
    }
    let b = Rational::from_integer(bound.clone());
    if &width * &b * &b > Rational::one() {
        let have = (-log10_abs(&width)).floor().max(0.0) as u64;
        let need = (2.0 * log10_abs(&b)).ceil() as u64;
        return Err(Error::NeedsMoreDigits { have, need });
    }
    let max_terms = (2.0 * log10_abs(&b) * 3.0) as usize + 64;
    let cf = cf_expand(lo, hi, max_terms)?;
    let last = cf.last_convergent().cloned().unwrap_or_else(Rational::zero);
    let verdict = if last.denom() > bound {
        RationalityVerdict::DenominatorExceeds { bound: bound.to_string() }
    } else {
        RationalityVerdict::Inconclusive
    };
    Ok(RationalityProbe {
        certified_cf_terms: cf.certified,
        largest_convergent_denominator: last.denom().to_string(),
        largest_convergent_numerator: last.numer().to_string(),
        verdict,
    })
}

type ProductRing = ProductGroup<WreathProduct, WreathProduct>;

/// One eigen-relation check on `p_{a,b}·q_{a',b'}`.
#[derive(Clone, Debug, Serialize)]
pub struct ProductEigenCheck {
    pub a: u64,
    pub b: u64,
    pub a_prime: u64,
    pub b_prime: u64,
    pub eigen: bool,
    pub trace: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZReport {
    pub p: String,
    pub q: String,
    /// Orders of the cyclic groups carrying `e` and `f`.
    pub m: u64,
    pub n: u64,
    pub multiplier: u64,
    pub integral: bool,
    /// Smallest positive integer `k` with `k(T − S)` integral.
    pub minimal_multiplier: String,
    pub distinct_coefficients: Vec<String>,
    pub eigen_checks: Vec<ProductEigenCheck>,
}

impl ZReport {
    pub fn all(&self) -> bool {
        self.integral && self.eigen_checks.iter().all(|c| c.eigen && c.trace)
    }
}

/// `T ⊗ 1 − 1 ⊗ S` in `ℚ[(U≀ℤ) × (V≀ℤ)]`.
pub fn t_minus_s(u: &SpectralSetup, v: &SpectralSetup) -> Result<crate::groupring::GroupRingElement<ProductRing, Rational>> {
    let one_u = RationalWreathElement::one(u.wreath().clone());
    let one_v = RationalWreathElement::one(v.wreath().clone());
    let t = product_embed(u.t_operator(), &one_v)?;
    let s = product_embed(&one_u, v.t_operator())?;
    t.sub(&s)
}

/// Builds `Z = mn(T − S)` from the rational-trace projections for `p` and `q`,
/// checks integrality, and checks `(T − S)·p_{a,b}q_{a',b'} = (λ_{a,b} − λ_{a',b'})·p_{a,b}q_{a',b'}`
/// together with trace multiplicativity for all `b, b' ≤ n_max`.
pub fn build_z_and_check(p: &Rational, q: &Rational, n_max: u64) -> Result<ZReport> {
    let ce = rational_projection(p)?;
    let cf = rational_projection(q)?;
    let u = SpectralSetup::new(ce.e.clone())?;
    let v = SpectralSetup::new(cf.e.clone())?;
    let d = t_minus_s(&u, &v)?;
    let multiplier = ce.n * cf.n;
    let z = d.scale(&Rational::from_integer(multiplier.into()));
    let mut distinct: Vec<Rational> = z.terms().values().cloned().collect();
    distinct.sort();
    distinct.dedup();

    let mut eigen_checks = Vec::new();
    for b in 2..=n_max {
        for b_prime in 2..=n_max {
            for a in 1..b {
                for a_prime in 1..b_prime {
                    eigen_checks.push(product_eigen_check(&u, &v, &d, (a, b), (a_prime, b_prime))?);
                }
            }
        }
    }
    Ok(ZReport {
        p: format_rational(p),
        q: format_rational(q),
        m: ce.n,
        n: cf.n,
        multiplier,
        integral: z.is_integral(),
        minimal_multiplier: d.denominator_lcm().to_string(),
        distinct_coefficients: distinct.iter().map(format_rational).collect(),
        eigen_checks,
    })
}

fn product_eigen_check(
    u: &SpectralSetup,
    v: &SpectralSetup,
    d: &crate::groupring::GroupRingElement<ProductRing, Rational>,
    (a, b): (u64, u64),
    (a_prime, b_prime): (u64, u64),
) -> Result<ProductEigenCheck> {
    let order = 4 * b.lcm(&b_prime);
    let pp = u.build_p(a, b)?.embed_field(order)?;
    let qq = v.build_p(a_prime, b_prime)?.embed_field(order)?;
    let pq = product_embed(&pp, &qq)?;
    let shift = &lambda_exact(a, b)?.embed(order)? - &lambda_exact(a_prime, b_prime)?.embed(order)?;
    let eigen = d.mul_cyclotomic(&pq)? == pq.scale_by(&shift);
    let expected = &u.expected_q_trace(b) * &v.expected_q_trace(b_prime);
    let trace = pq.trace().as_rational() == Some(expected);
    Ok(ProductEigenCheck { a, b, a_prime, b_prime, eigen, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn double_sum_examples() {
        let two = rat(2, 1);
        assert_eq!(dim_ker_ts(&two, &two, 2).unwrap().partial, rat(1, 16));
        assert_eq!(dim_ker_ts(&two, &rat(3, 1), 1).unwrap().partial, rat(0, 1));
        assert!(dim_ker_ts(&rat(1, 1), &two, 5).is_err());
        let ds = dim_ker_ts(&two, &two, 60).unwrap();
        let k = kappa_eval(&KappaParams::new(rat(1, 2), rat(1, 2), 12)).unwrap();
        assert!(ds.enclosure(80).unwrap().intersects(&k.value));
    }

    #[test]
    fn double_sum_tail_dominates() {
        // the bound after N must cover the exact difference to a much longer truncation
        let (x, y) = (rat(2, 1), rat(5, 2));
        let short = dim_ker_ts(&x, &y, 10).unwrap();
        let long = dim_ker_ts(&x, &y, 80).unwrap();
        let diff = &long.partial - &short.partial;
        assert!(!diff.is_negative());
        assert!(diff <= short.tail_bound);
    }

    #[test]
    fn b_counts() {
        for n in 1..=12 {
            for m in 1..=12 {
                assert_eq!(b_count_bruteforce(n, m), n.gcd(&m) - 1);
            }
        }
    }

    #[test]
    fn series_examples() {
        assert!(series_identity_check(1).unwrap());
        assert!(series_identity_check(12).unwrap());
        let t = gcd_series_coefficients(6).unwrap();
        assert_eq!(t[5][3], 2);
        assert_eq!(t[0][0], 1);
    }

    #[test]
    fn kappa_ten_digits() {
        let k = kappa_eval(&KappaParams::new(rat(1, 2), rat(1, 2), 10)).unwrap();
        assert_eq!(k.value.center_decimal(10), "0.1659457149");
        assert!(k.certified_digits() >= 10);
        assert!(k.tail_bound.upper() < rat(1, 10_000_000_000));
    }

    #[test]
    fn kappa_tail_at_four_hundred_terms() {
        let t = kappa_tail_bound(&rat(2, 1), &rat(2, 1), 400);
        let bound = pow_int(&rat(10, 1), -201);
        assert!(t < bound);
    }

    #[test]
    fn kappa_nested_as_terms_grow() {
        let base = KappaParams::new(rat(1, 2), rat(1, 3), 30);
        let a = kappa_eval(&base.clone().with_terms(40)).unwrap();
        let b = kappa_eval(&base.with_terms(70)).unwrap();
        assert!(b.value.lower() >= a.value.lower());
        assert!(b.value.upper() <= a.value.upper());
    }

    #[test]
    fn kappa_rejects_bad_params() {
        assert!(matches!(
            kappa_eval(&KappaParams::new(rat(1, 2), rat(1, 2), 20_000)),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(kappa_eval(&KappaParams::new(rat(1, 1), rat(1, 2), 10)).is_err());
        assert!(kappa_eval(&KappaParams::new(rat(0, 1), rat(1, 2), 10)).is_err());
    }

    #[test]
    fn probe_paths() {
        let third = rat(1, 3);
        let r = rationality_probe_interval(&third, &third, &BigInt::from(10)).unwrap();
        assert_eq!(r.verdict, RationalityVerdict::Rational { value: "1/3".into() });
        let k = kappa_eval(&KappaParams::new(rat(1, 2), rat(1, 2), 15)).unwrap();
        let bound = num_traits::pow(BigInt::from(10), 100);
        assert!(matches!(rationality_probe(&k, &bound), Err(Error::NeedsMoreDigits { .. })));
        let k = kappa_eval(&KappaParams::new(rat(1, 2), rat(1, 2), 60)).unwrap();
        let small = num_traits::pow(BigInt::from(10), 20);
        let r = rationality_probe(&k, &small).unwrap();
        assert!(matches!(r.verdict, RationalityVerdict::DenominatorExceeds { .. }));
    }

    #[test]
    fn z_for_halves() {
        let z = build_z_and_check(&rat(1, 2), &rat(1, 2), 3).unwrap();
        assert_eq!(z.multiplier, 4);
        assert!(z.integral);
        assert_eq!(z.distinct_coefficients, vec!["-2/1".to_string(), "2/1".to_string()]);
        assert!(z.all(), "{:?}", z.eigen_checks);
        let diag = z.eigen_checks.iter().find(|c| (c.a, c.b, c.a_prime, c.b_prime) == (1, 2, 1, 2)).unwrap();
        assert!(diag.eigen);
    }

    #[test]
    fn z_for_half_third() {
        let z = build_z_and_check(&rat(1, 2), &rat(1, 3), 2).unwrap();
        assert_eq!((z.m, z.n, z.multiplier), (2, 6, 12));
        assert!(z.integral);
        assert_eq!(z.minimal_multiplier, "6");
        assert!(z.all());
    }
}

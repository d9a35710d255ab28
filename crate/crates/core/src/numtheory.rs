//! Arithmetic functions, factorization of `u64` integers, and the inequality
//! checks that drive the coefficient-gap argument.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Ball, Rational};

/// Default step budget for the rho splitter.
pub const DEFAULT_FACTOR_BUDGET: u64 = 10_000_000;
pub const DEFAULT_SEED: u64 = 0x5eed;

const TRIAL_BOUND: u64 = 1000;

/// Prime factorization as `(prime, exponent)` pairs in increasing prime order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn from_pairs(mut factors: Vec<(u64, u32)>) -> Result<Self> {
        factors.sort_unstable();
        for w in factors.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::invalid(format!("repeated prime {}", w[0].0)));
            }
        }
        for &(p, e) in &factors {
            if e == 0 || !is_prime(p) {
                return Err(Error::invalid(format!("invalid factor {p}^{e}")));
            }
        }
        Ok(Factorization { factors })
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, &(p, e)| acc * num_traits::pow(BigUint::from(p), e as usize))
    }

    /// Ω: number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn divisor_count(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, &(_, e)| acc * (e + 1))
    }

    /// Merges another factorization (multiplication of the underlying integers).
    pub fn merge(&self, other: &Factorization) -> Factorization {
        let mut out: Vec<(u64, u32)> = self.factors.clone();
        for &(p, e) in &other.factors {
            match out.iter_mut().find(|(q, _)| *q == p) {
                Some(slot) => slot.1 += e,
                None => out.push((p, e)),
            }
        }
        out.sort_unstable();
        Factorization { factors: out }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve prime bases are exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while out.len() < count {
        if is_prime(candidate) {
            out.push(candidate);
        }
        candidate += if candidate == 2 { 1 } else { 2 };
    }
    out
}

// Brent's variant of Pollard rho with batched gcds.
fn rho_split(n: u64, rng: &mut ChaCha8Rng, budget: &mut u64) -> Result<u64> {
    let exhausted = || Error::FactorizationBudgetExceeded { n: n.to_string(), budget: 0 };
    loop {
        let c = rng.gen_range(1..n);
        let mut y = rng.gen_range(0..n);
        let f = |v: u64| ((mul_mod(v, v, n) as u128 + c as u128) % n as u128) as u64;
        let m = 128u64;
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
                let spent = m.min(r);
                if *budget < spent {
                    return Err(exhausted());
                }
                *budget -= spent;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Ok(g);
        }
        // Unlucky cycle; retry with fresh parameters from the same stream.
    }
}

/// Factorization with an explicit seed and step budget.
///
/// Trial division up to a small bound, then Brent–Pollard rho; every reported
/// prime passes the deterministic Miller–Rabin check.
pub fn factorize_with(n: u64, seed: u64, budget: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::invalid("cannot factor 0"));
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let push = |factors: &mut Vec<(u64, u32)>, p: u64| match factors.iter_mut().find(|(q, _)| *q == p) {
        Some(slot) => slot.1 += 1,
        None => factors.push((p, 1)),
    };
    let mut rest = n;
    let mut p = 2u64;
    while p <= TRIAL_BOUND && p * p <= rest {
        while rest.is_multiple_of(p) {
            push(&mut factors, p);
            rest /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut remaining_budget = budget;
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            push(&mut factors, m);
            continue;
        }
        let d = rho_split(m, &mut rng, &mut remaining_budget).map_err(|_| {
            Error::FactorizationBudgetExceeded { n: n.to_string(), budget }
        })?;
        stack.push(d);
        stack.push(m / d);
    }
    factors.sort_unstable();
    Ok(Factorization { factors })
}

pub fn factorize(n: u64) -> Result<Factorization> {
    factorize_with(n, DEFAULT_SEED, DEFAULT_FACTOR_BUDGET)
}

/// Euler's totient via factorization.
pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::invalid("φ(0) is undefined"));
    }
    Ok(phi_of(&factorize(n)?))
}

pub fn phi_of(f: &Factorization) -> u64 {
    f.pairs().iter().fold(1u64, |acc, &(p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Checks `Σ_{k | gcd(m,n)} φ(k) = gcd(m,n)`.
pub fn gcd_phi_sum_check(m: u64, n: u64) -> bool {
    let g = m.gcd(&n);
    if g == 0 {
        return false;
    }
    let total: u64 = divisors(g).into_iter().map(|k| euler_phi(k).unwrap_or(0)).sum();
    total == g
}

/// `a(n) = Σ_{i≤n} gcd(i, n)`, evaluated multiplicatively from a factorization:
/// `a(p^e) = p^e + e·p^(e-1)·(p-1)`.
pub fn a_of_factorization(f: &Factorization) -> BigUint {
    f.pairs().iter().fold(BigUint::one(), |acc, &(p, e)| {
        let p_big = BigUint::from(p);
        let pe = num_traits::pow(p_big.clone(), e as usize);
        let pe1 = num_traits::pow(p_big, (e - 1) as usize);
        acc * (pe + pe1 * e * (p - 1))
    })
}

pub fn a_of_n(n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::invalid("a(0) is undefined"));
    }
    Ok(a_of_factorization(&factorize(n)?))
}

pub fn a_of_n_with(n: u64, seed: u64, budget: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::invalid("a(0) is undefined"));
    }
    Ok(a_of_factorization(&factorize_with(n, seed, budget)?))
}

/// `Σ_{i≤n} gcd(i, n)` by direct summation.
pub fn a_by_gcd_sum(n: u64) -> u64 {
    (1..=n).map(|i| i.gcd(&n)).sum()
}

/// `Σ_{d|n} (n/d)·φ(d)`.
pub fn a_by_divisor_sum(n: u64) -> Result<u64> {
    divisors(n).into_iter().map(|d| Ok((n / d) * euler_phi(d)?)).sum()
}

/// The three evaluations of `a(n)` agree for every `1 ≤ n ≤ limit`.
pub fn a_three_way_check(limit: u64) -> Result<bool> {
    for n in 1..=limit {
        let closed = a_of_n(n)?;
        let by_gcd = a_by_gcd_sum(n);
        if closed != BigUint::from(by_gcd) || a_by_divisor_sum(n)? != by_gcd {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the three large-`Q` inequalities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LargeQChecks {
    pub q: u64,
    /// `Q! ≤ (Q/2)^Q`
    pub factorial: bool,
    /// `3/4 ≤ p_Q / (Q log Q) ≤ 5/4`
    pub prime_growth: bool,
    /// `Π_{i≤Q} (1 - 1/p_i) ≥ 1/Q`
    pub mertens: bool,
}

impl LargeQChecks {
    pub fn all(&self) -> bool {
        self.factorial && self.prime_growth && self.mertens
    }
}

pub fn large_q_checks(q: u64) -> Result<LargeQChecks> {
    if q < 2 {
        return Err(Error::invalid("large-Q checks need Q >= 2"));
    }
    let qb = BigUint::from(q);
    // Q!·2^Q ≤ Q^Q
    let factorial = (1..=q).fold(BigUint::one(), |acc, i| acc * i) << q as usize;
    let factorial_ok = factorial <= num_traits::pow(qb.clone(), q as usize);

    let primes = first_primes(q as usize);
    let product = primes.iter().fold(Rational::one(), |acc, &p| {
        acc * Rational::new(BigInt::from(p - 1), BigInt::from(p))
    });
    let mertens_ok = product >= Rational::new(BigInt::one(), BigInt::from(q));

    let p_q = *primes.last().expect("q >= 2");
    let prime_growth_ok = prime_growth_check(p_q, q)?;
    Ok(LargeQChecks { q, factorial: factorial_ok, prime_growth: prime_growth_ok, mertens: mertens_ok })
}

// Decides 3/4 ≤ p/(Q ln Q) ≤ 5/4 with certified logarithm enclosures, doubling
// precision until neither comparison is ambiguous.
fn prime_growth_check(p: u64, q: u64) -> Result<bool> {
    let mut prec = 64u32;
    let q_rat = Rational::from_integer(BigInt::from(q));
    let p_rat = Rational::from_integer(BigInt::from(p));
    let bounds = [Rational::new(3.into(), 4.into()), Rational::new(5.into(), 4.into())];
    loop {
        let ln_q = Ball::ln_rational(&q_rat, prec)?;
        let denom = &ln_q * &Ball::from_rational(&q_rat, prec);
        let ratio = Ball::from_rational(&p_rat, prec).checked_div(&denom)?;
        let decided = bounds.iter().all(|b| !ratio.contains(b));
        if decided {
            return Ok(ratio.lower() >= bounds[0] && ratio.upper() <= bounds[1]);
        }
        if prec > 1 << 16 {
            return Err(Error::BudgetExceeded(format!(
                "prime growth comparison undecided at {prec} bits for Q = {q}"
            )));
        }
        prec *= 2;
    }
}

/// Smallest `Q₁` in `lo..=hi` such that every `Q ∈ Q₁..=hi` passes all three checks.
pub fn large_q_threshold(lo: u64, hi: u64) -> Result<Option<u64>> {
    let mut threshold = None;
    for q in (lo.max(2)..=hi).rev() {
        if large_q_checks(q)?.all() {
            threshold = Some(q);
        } else {
            break;
        }
    }
    Ok(threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_phi(n: u64) -> u64 {
        (1..=n).filter(|&i| i.gcd(&n) == 1).count() as u64
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(12).unwrap(), 4);
        assert_eq!(euler_phi(1 << 10).unwrap(), 512);
        assert!(euler_phi(0).is_err());
        for n in 1..500 {
            assert_eq!(euler_phi(n).unwrap(), brute_phi(n));
        }
    }

    #[test]
    fn gcd_phi_examples() {
        assert!(gcd_phi_sum_check(6, 4));
        assert!(gcd_phi_sum_check(1, 1));
        assert!(gcd_phi_sum_check(12, 18));
    }

    #[test]
    fn a_examples() {
        assert_eq!(a_of_n(1).unwrap(), BigUint::from(1u32));
        assert_eq!(a_of_n(6).unwrap(), BigUint::from(15u32));
        assert_eq!(a_of_n(4).unwrap(), BigUint::from(8u32));
        assert_eq!(a_of_n(8).unwrap(), BigUint::from(20u32));
    }

    #[test]
    fn a_three_way_agreement() {
        for n in 1..=2000u64 {
            let by_gcd: u64 = (1..=n).map(|i| i.gcd(&n)).sum();
            let by_divisors: u64 = divisors(n).into_iter().map(|d| (n / d) * brute_phi(d)).sum();
            let closed = a_of_n(n).unwrap();
            assert_eq!(closed, BigUint::from(by_gcd), "n = {n}");
            assert_eq!(by_gcd, by_divisors, "n = {n}");
        }
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().pairs().is_empty());
        assert_eq!(factorize(216).unwrap().pairs(), &[(2, 3), (3, 3)]);
        assert_eq!(factorize(10403).unwrap().pairs(), &[(101, 1), (103, 1)]);
        assert!(factorize(0).is_err());
    }

    #[test]
    fn factorize_hard_semiprimes() {
        let p = 1_000_000_007u64;
        let q = 998_244_353u64;
        assert_eq!(factorize(p * q).unwrap().pairs(), &[(q, 1), (p, 1)]);
        let big_prime = 18_446_744_073_709_551_557u64;
        assert_eq!(factorize(big_prime).unwrap().pairs(), &[(big_prime, 1)]);
        let square = 4_294_967_291u64 * 4_294_967_291u64;
        assert_eq!(factorize(square).unwrap().pairs(), &[(4_294_967_291, 2)]);
    }

    #[test]
    fn factorization_budget_is_enforced() {
        let n = 1_000_000_007u64 * 998_244_353u64;
        match factorize_with(n, 1, 10) {
            Err(Error::FactorizationBudgetExceeded { budget, .. }) => assert_eq!(budget, 10),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn factorization_is_seed_independent() {
        let n = 600_851_475_143u64;
        let a = factorize_with(n, 1, DEFAULT_FACTOR_BUDGET).unwrap();
        let b = factorize_with(n, 99, DEFAULT_FACTOR_BUDGET).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.pairs(), &[(71, 1), (839, 1), (1471, 1), (6857, 1)]);
    }

    #[test]
    fn primes_list() {
        assert_eq!(first_primes(10), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(!is_prime(1) && !is_prime(0) && is_prime(2));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn large_q_examples() {
        assert!(large_q_checks(8).unwrap().factorial);
        assert!(!large_q_checks(2).unwrap().factorial);
        assert!(large_q_checks(100).unwrap().mertens);
        // p_10 = 29 and 29 / (10 ln 10) ≈ 1.2595 > 5/4.
        assert!(!large_q_checks(10).unwrap().prime_growth);
        assert!(large_q_checks(11).unwrap().prime_growth);
        assert!(large_q_checks(1).is_err());
    }

    #[test]
    fn divisor_listing() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    proptest! {
        #[test]
        fn phi_multiplicative(m in 1u64..1_000_000, n in 1u64..1_000_000) {
            prop_assume!(m.gcd(&n) == 1);
            prop_assert_eq!(euler_phi(m * n).unwrap(), euler_phi(m).unwrap() * euler_phi(n).unwrap());
        }

        #[test]
        fn factorization_reassembles(n in 1u64..1_000_000_000_000) {
            let f = factorize(n).unwrap();
            prop_assert_eq!(f.value(), BigUint::from(n));
            for &(p, _) in f.pairs() {
                prop_assert!(is_prime(p));
            }
            for w in f.pairs().windows(2) {
                prop_assert!(w[0].0 < w[1].0);
            }
        }
    }
}

//! The operator `T = e·t + t⁻¹·e` on `U ≀ ℤ`, its eigenprojections `p_{m,n}`,
//! and the spectral measure of `T` with respect to the trace.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cyclotomic::{alpha, ambient_order, eigen_entries, lambda_exact, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::exact::{format_rational, laurent_det_tridiagonal, pow_int, rat, LaurentPoly, Rational};
use crate::groupring::{
    avg_projection, CyclotomicWreathElement, FiniteAbelianGroup, Group, GroupRingElement,
    RationalWreathElement, WreathElement, WreathProduct,
};

/// Largest `n` scanned when matching a decimal `μ` against `2cos(mπ/n)`.
pub const DEFAULT_RECOGNITION_MAX: u64 = 64;
pub const RECOGNITION_TOLERANCE: f64 = 1e-9;
/// Above this support size `p² = p` is certified through `r·q_n = r` and
/// `r*r = (n/2)·q_n` instead of by squaring `p`.
const DIRECT_SQUARE_LIMIT: usize = 200;

type QKey = (u64, u64, i64);

/// A nontrivial projection `e ∈ ℚ[U]` and the operator `T` it defines.
#[derive(Debug)]
pub struct SpectralSetup {
    base: FiniteAbelianGroup,
    wreath: WreathProduct,
    e_base: GroupRingElement<FiniteAbelianGroup, Rational>,
    e: RationalWreathElement,
    w: Rational,
    t_op: RationalWreathElement,
    q_cache: Mutex<HashMap<u64, Arc<RationalWreathElement>>>,
    x_cache: Mutex<HashMap<QKey, Arc<RationalWreathElement>>>,
}

impl SpectralSetup {
    pub fn new(e_base: GroupRingElement<FiniteAbelianGroup, Rational>) -> Result<Self> {
        if !e_base.is_projection() {
            return Err(Error::invalid("e is not a projection"));
        }
        let base = e_base.group().clone();
        if e_base.is_zero() || e_base == GroupRingElement::one(base.clone()) {
            return Err(Error::invalid("e must differ from 0 and 1"));
        }
        let tr = e_base.trace();
        let w = tr.recip();
        if w <= Rational::one() {
            return Err(Error::invalid(format!("W = {} must exceed 1", format_rational(&w))));
        }
        let wreath = WreathProduct::new(base.clone());
        let e = e_base.lift_to_wreath();
        let t = RationalWreathElement::monomial(wreath.clone(), WreathElement::t_pow(1), Rational::one());
        let t_inv = RationalWreathElement::monomial(wreath.clone(), WreathElement::t_pow(-1), Rational::one());
        let t_op = e.ring_mul(&t)?.add(&t_inv.ring_mul(&e)?)?;
        Ok(SpectralSetup {
            base,
            wreath,
            e_base,
            e,
            w,
            t_op,
            q_cache: Mutex::new(HashMap::new()),
            x_cache: Mutex::new(HashMap::new()),
        })
    }

    /// `e = avg(U)`, so `W = |U|`.
    pub fn avg(u: FiniteAbelianGroup) -> Result<Self> {
        SpectralSetup::new(avg_projection(&u))
    }

    pub fn base(&self) -> &FiniteAbelianGroup {
        &self.base
    }

    pub fn wreath(&self) -> &WreathProduct {
        &self.wreath
    }

    pub fn e_base(&self) -> &GroupRingElement<FiniteAbelianGroup, Rational> {
        &self.e_base
    }

    pub fn e(&self) -> &RationalWreathElement {
        &self.e
    }

    pub fn w(&self) -> &Rational {
        &self.w
    }

    pub fn t_operator(&self) -> &RationalWreathElement {
        &self.t_op
    }

    fn t_pow(&self, k: i64) -> WreathElement {
        WreathElement::t_pow(k)
    }

    /// `e_i = t^{-i}·e·t^i`, supported at lamp index `i`.
    pub fn e_i(&self, i: i64) -> RationalWreathElement {
        self.e.left_translate(&self.t_pow(-i)).right_translate(&self.t_pow(i))
    }

    /// `f_i = 1 − e_i`.
    pub fn f_i(&self, i: i64) -> RationalWreathElement {
        RationalWreathElement::one(self.wreath.clone())
            .sub(&self.e_i(i))
            .expect("same group")
    }

    /// `q_n = f_1·e_2⋯e_{n-1}·f_n`.
    pub fn build_q(&self, n: u64) -> Result<Arc<RationalWreathElement>> {
        if n < 2 {
            return Err(Error::invalid(format!("q_n needs n >= 2, got {n}")));
        }
        if let Some(q) = self.q_cache.lock().expect("cache lock").get(&n) {
            return Ok(q.clone());
        }
        let mut q = self.f_i(1);
        for i in 2..n as i64 {
            q = q.ring_mul(&self.e_i(i))?;
        }
        q = q.ring_mul(&self.f_i(n as i64))?;
        let q = Arc::new(q);
        self.q_cache.lock().expect("cache lock").insert(n, q.clone());
        Ok(q)
    }

    /// `(W−1)²/Wⁿ`.
    pub fn expected_q_trace(&self, n: u64) -> Rational {
        let one = Rational::one();
        let d = &self.w - &one;
        &d * &d / pow_int(&self.w, n as i64)
    }

    /// `q_{n'}·t^d·q_n`, cached.
    fn sandwich(&self, n_prime: u64, n: u64, d: i64) -> Result<Arc<RationalWreathElement>> {
        let key = (n_prime, n, d);
        if let Some(x) = self.x_cache.lock().expect("cache lock").get(&key) {
            return Ok(x.clone());
        }
        let left = self.build_q(n_prime)?;
        let right = self.build_q(n)?.left_translate(&self.t_pow(d));
        let x = Arc::new(left.ring_mul(&right)?);
        self.x_cache.lock().expect("cache lock").insert(key, x.clone());
        Ok(x)
    }

    /// `q_{n'}·t^{-m'}·t^m·q_n = δ_{n,n'}·δ_{m,m'}·q_n` for one index quadruple.
    pub fn orthogonality_holds(&self, n_prime: u64, m_prime: u64, n: u64, m: u64) -> Result<bool> {
        let x = self.sandwich(n_prime, n, m as i64 - m_prime as i64)?;
        Ok(if n == n_prime && m == m_prime { *x == *self.build_q(n)? } else { x.is_zero() })
    }

    /// All quadruples with `2 ≤ n, n' ≤ n_max`, `1 ≤ m < n`, `1 ≤ m' < n'`.
    pub fn check_q_orthogonality(&self, n_max: u64) -> Result<bool> {
        check_n_max(n_max)?;
        for n in 2..=n_max {
            for n_prime in 2..=n_max {
                for m in 1..n {
                    for m_prime in 1..n_prime {
                        if !self.orthogonality_holds(n_prime, m_prime, n, m)? {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// `T·(t^m q_n) = Σ_i α_{m,i}·t^i q_n` for every `1 ≤ m ≤ n−1`.
    pub fn check_action(&self, n: u64) -> Result<bool> {
        let q = self.build_q(n)?;
        for m in 1..n {
            let lhs = self.t_op.ring_mul(&q.left_translate(&self.t_pow(m as i64)))?;
            let mut rhs = RationalWreathElement::zero(self.wreath.clone());
            for i in (1..n).filter(|&i| alpha(m, i)) {
                rhs = rhs.add(&q.left_translate(&self.t_pow(i as i64)))?;
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `r_{m,n} = Σ_i sin(miπ/n)·t^i q_n` over `ℚ(ζ_{4n})`.
    pub fn build_r(&self, m: u64, n: u64) -> Result<CyclotomicWreathElement> {
        let v = eigen_entries(m, n)?;
        let q = self.build_q(n)?;
        let order = ambient_order(n);
        let mut terms = Vec::with_capacity(q.support_len() * v.entries.len());
        for (idx, vi) in v.entries.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            let shift = self.t_pow(idx as i64 + 1);
            for (g, c) in q.terms() {
                terms.push((self.wreath.op(&shift, g), vi.scale(c)));
            }
        }
        Ok(GroupRingElement::from_terms_in(self.wreath.clone(), order, terms))
    }

    /// `p_{m,n} = (2/n)·r_{m,n}·r_{m,n}*`, assembled as `Σ_{i,j} (2/n)v_i v_j·t^i q_n t^{-j}`.
    pub fn build_p(&self, m: u64, n: u64) -> Result<CyclotomicWreathElement> {
        let v = eigen_entries(m, n)?;
        let q = self.build_q(n)?;
        let order = ambient_order(n);
        let scale = rat(2, n as i64);
        let mut terms = Vec::new();
        for (i, vi) in v.entries.iter().enumerate() {
            for (j, vj) in v.entries.iter().enumerate() {
                let c = (vi * &vj.conj()).scale(&scale);
                if c.is_zero() {
                    continue;
                }
                let sandwich = q
                    .left_translate(&self.t_pow(i as i64 + 1))
                    .right_translate(&self.t_pow(-(j as i64) - 1));
                for (g, x) in sandwich.terms() {
                    terms.push((g.clone(), c.scale(x)));
                }
            }
        }
        Ok(GroupRingElement::from_terms_in(self.wreath.clone(), order, terms))
    }

    /// `r*_{m',n'}·r_{m,n}`, expanded bilinearly over the cached `q_{n'} t^d q_n`.
    pub fn r_star_r(&self, m_prime: u64, n_prime: u64, m: u64, n: u64) -> Result<CyclotomicWreathElement> {
        let order = ambient_order(n.lcm(&n_prime));
        let v = eigen_entries(m, n)?;
        let vp = eigen_entries(m_prime, n_prime)?;
        let mut coeffs: HashMap<i64, CyclotomicNumber> = HashMap::new();
        for (i, vi) in v.entries.iter().enumerate() {
            let vi = vi.embed(order)?;
            for (j, vj) in vp.entries.iter().enumerate() {
                let c = &vj.conj().embed(order)? * &vi;
                let d = i as i64 - j as i64;
                let slot = coeffs.entry(d).or_insert_with(|| CyclotomicNumber::zero(order));
                *slot = &*slot + &c;
            }
        }
        let mut ds: Vec<i64> = coeffs.keys().copied().collect();
        ds.sort_unstable();
        let mut terms = Vec::new();
        for d in ds {
            let c = &coeffs[&d];
            if c.is_zero() {
                continue;
            }
            let x = self.sandwich(n_prime, n, d)?;
            for (g, r) in x.terms() {
                terms.push((g.clone(), c.scale(r)));
            }
        }
        Ok(GroupRingElement::from_terms_in(self.wreath.clone(), order, terms))
    }

    /// `r*_{m',n'} r_{m,n} = (n/2)·δ_{n,n'}δ_{m,m'}·q_n` for every pair with `n, n' ≤ n_max`.
    pub fn check_p_orthogonality(&self, n_max: u64) -> Result<bool> {
        check_n_max(n_max)?;
        for n in 2..=n_max {
            for n_prime in 2..=n_max {
                for m in 1..n {
                    for m_prime in 1..n_prime {
                        if !self.r_orthogonality_holds(m_prime, n_prime, m, n)? {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn r_orthogonality_holds(&self, m_prime: u64, n_prime: u64, m: u64, n: u64) -> Result<bool> {
        let prod = self.r_star_r(m_prime, n_prime, m, n)?;
        if n == n_prime && m == m_prime {
            let expected = self.build_q(n)?.scale(&rat(n as i64, 2)).promote(*prod.context());
            Ok(prod == expected)
        } else {
            Ok(prod.is_zero())
        }
    }

    /// Every exact property of `p_{m,n}`.
    pub fn verify_p(&self, m: u64, n: u64) -> Result<PChecks> {
        let p = self.build_p(m, n)?;
        let lambda = lambda_exact(m, n)?;
        let self_adjoint = p.is_self_adjoint();
        let (idempotent, method) = if p.support_len() <= DIRECT_SQUARE_LIMIT {
            (p.ring_mul(&p)? == p, IdempotenceMethod::Direct)
        } else {
            let r = self.build_r(m, n)?;
            let q = self.build_q(n)?;
            let absorbs = r.mul_rational(&q)? == r;
            (absorbs && self.r_orthogonality_holds(m, n, m, n)?, IdempotenceMethod::Factorized)
        };
        let eigen = self.t_op.mul_cyclotomic(&p)? == p.scale_by(&lambda);
        let trace = p.trace().as_rational() == Some(self.expected_q_trace(n));
        Ok(PChecks { m, n, self_adjoint, idempotent, idempotence_method: method, eigen, trace })
    }

    /// `p_{m,n}` with its checks and the atom it contributes to.
    pub fn report(&self, m: u64, n: u64) -> Result<AtomReport> {
        let checks = self.verify_p(m, n)?;
        let (m0, n0) = reduce_rotation(m, n)?;
        let mass = spectral_mass(&self.w, n0)?;
        Ok(AtomReport {
            atom: AtomSummary {
                m: m0,
                n: n0,
                lambda_decimal: format!("{:.15}", lambda_f64(m0, n0)),
                mass: format_rational(&mass),
            },
            checks,
        })
    }
}

/// Outcome of every exact identity up to `n_max`.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub n_max: u64,
    /// `q_n` is a projection of trace `(W−1)²/Wⁿ`.
    pub q_projections: bool,
    pub orthogonality: bool,
    pub action: bool,
    pub r_orthogonality: bool,
    pub p_checks: Vec<PChecks>,
}

impl SuiteReport {
    pub fn all(&self) -> bool {
        self.q_projections
            && self.orthogonality
            && self.action
            && self.r_orthogonality
            && self.p_checks.iter().all(PChecks::all)
    }

    pub fn p_all(&self) -> bool {
        self.p_checks.iter().all(PChecks::all)
    }
}

impl SpectralSetup {
    pub fn verify_suite(&self, n_max: u64) -> Result<SuiteReport> {
        check_n_max(n_max)?;
        let mut q_projections = true;
        let mut action = true;
        let mut p_checks = Vec::new();
        for n in 2..=n_max {
            let q = self.build_q(n)?;
            q_projections &= q.trace() == self.expected_q_trace(n) && q.is_projection();
            action &= self.check_action(n)?;
            for m in 1..n {
                p_checks.push(self.verify_p(m, n)?);
            }
        }
        Ok(SuiteReport {
            n_max,
            q_projections,
            orthogonality: self.check_q_orthogonality(n_max)?,
            action,
            r_orthogonality: self.check_p_orthogonality(n_max)?,
            p_checks,
        })
    }
}

fn check_n_max(n_max: u64) -> Result<()> {
    if n_max < 2 {
        return Err(Error::invalid(format!("n_max must be at least 2, got {n_max}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdempotenceMethod {
    Direct,
    Factorized,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PChecks {
    pub m: u64,
    pub n: u64,
    pub self_adjoint: bool,
    pub idempotent: bool,
    pub idempotence_method: IdempotenceMethod,
    pub eigen: bool,
    pub trace: bool,
}

impl PChecks {
    pub fn all(&self) -> bool {
        self.self_adjoint && self.idempotent && self.eigen && self.trace
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AtomSummary {
    pub m: u64,
    pub n: u64,
    pub lambda_decimal: String,
    pub mass: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AtomReport {
    pub atom: AtomSummary,
    pub checks: PChecks,
}

/// One eigenvalue `λ_{m,n}` of `T` and its mass.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralAtom {
    pub m: u64,
    pub n: u64,
    pub lambda: CyclotomicNumber,
    pub mass: Rational,
}

impl SpectralAtom {
    pub fn new(w: &Rational, m: u64, n: u64) -> Result<Self> {
        if n < 2 || m == 0 || m >= n || m.gcd(&n) != 1 {
            return Err(Error::invalid(format!("({m},{n}) is not a reduced rotation")));
        }
        Ok(SpectralAtom { m, n, lambda: lambda_exact(m, n)?, mass: spectral_mass(w, n)? })
    }
}

pub fn lambda_f64(m: u64, n: u64) -> f64 {
    2.0 * (m as f64 * std::f64::consts::PI / n as f64).cos()
}

/// Reduces `(m, n)` by `gcd(m, n)`; the result must satisfy `1 ≤ m < n`.
pub fn reduce_rotation(m: u64, n: u64) -> Result<(u64, u64)> {
    if n < 2 || m == 0 || m >= n {
        return Err(Error::invalid(format!("rotation m/n needs 1 <= m <= n-1, got {m}/{n}")));
    }
    let g = m.gcd(&n);
    Ok((m / g, n / g))
}

fn check_w(w: &Rational) -> Result<()> {
    if *w <= Rational::one() {
        return Err(Error::invalid(format!("W must exceed 1, got {}", format_rational(w))));
    }
    Ok(())
}

/// `(W−1)²/(Wⁿ−1)`.
pub fn spectral_mass(w: &Rational, n: u64) -> Result<Rational> {
    check_w(w)?;
    let one = Rational::one();
    let d = w - &one;
    Ok(&d * &d / (pow_int(w, n as i64) - one))
}

/// Where `μ` was supplied from.
#[derive(Clone, Debug, PartialEq)]
pub enum Mu {
    Rotation { m: u64, n: u64 },
    Decimal(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureValue {
    #[serde(with = "crate::exact::rational_serde")]
    pub mass: Rational,
    /// The reduced rotation `(m, n)` with `μ = 2cos(mπ/n)`, when one was found.
    pub rotation: Option<(u64, u64)>,
    pub recognized: bool,
}

/// `dim ker(T − μ)`, using `n ≤ DEFAULT_RECOGNITION_MAX` for decimal `μ`.
pub fn spectral_measure(w: &Rational, mu: &Mu) -> Result<MeasureValue> {
    spectral_measure_with(w, mu, DEFAULT_RECOGNITION_MAX)
}

pub fn spectral_measure_with(w: &Rational, mu: &Mu, recognition_max: u64) -> Result<MeasureValue> {
    check_w(w)?;
    let rotation = match *mu {
        Mu::Rotation { m, n } => Some(reduce_rotation(m, n)?),
        Mu::Decimal(x) => recognize_mu(x, recognition_max),
    };
    match rotation {
        Some((m, n)) => Ok(MeasureValue { mass: spectral_mass(w, n)?, rotation: Some((m, n)), recognized: true }),
        None => Ok(MeasureValue { mass: Rational::zero(), rotation: None, recognized: false }),
    }
}

/// The reduced `(m, n)` with `|2cos(mπ/n) − x| < 10⁻⁹`, smallest `n` first.
pub fn recognize_mu(x: f64, n_max: u64) -> Option<(u64, u64)> {
    if !x.is_finite() {
        return None;
    }
    (2..=n_max)
        .flat_map(|n| (1..n).filter(move |m| m.gcd(&n) == 1).map(move |m| (m, n)))
        .find(|&(m, n)| (lambda_f64(m, n) - x).abs() < RECOGNITION_TOLERANCE)
}

/// `Σ_{n=2}^{N} (n−1)(W−1)²/Wⁿ`.
pub fn completeness_partial_sum(w: &Rational, n_terms: u64) -> Result<Rational> {
    check_w(w)?;
    if n_terms < 2 {
        return Err(Error::invalid(format!("N must be at least 2, got {n_terms}")));
    }
    let one = Rational::one();
    let d2 = (w - &one) * (w - &one);
    let x = w.recip();
    let mut power = &x * &x;
    let mut sum = Rational::zero();
    for n in 2..=n_terms {
        sum += Rational::from_integer((n - 1).into()) * &d2 * &power;
        power *= &x;
    }
    Ok(sum)
}

/// `1 − Σ_{n≤N} = x^{N−1}(N − (N−1)x)` with `x = 1/W`.
pub fn completeness_tail(w: &Rational, n_terms: u64) -> Result<Rational> {
    check_w(w)?;
    if n_terms < 2 {
        return Err(Error::invalid(format!("N must be at least 2, got {n_terms}")));
    }
    let x = w.recip();
    let big_n = Rational::from_integer(n_terms.into());
    let n_minus = Rational::from_integer((n_terms - 1).into());
    Ok(pow_int(&x, n_terms as i64 - 1) * (big_n - n_minus * x))
}

/// Checks `Σ_{i=1}^{K} (W−1)²/W^{i n₀} + tail = (W−1)²/(W^{n₀}−1)` with the
/// geometric tail in closed form.
pub fn atom_regrouping_check(w: &Rational, n0: u64, k: u64) -> Result<bool> {
    check_w(w)?;
    let one = Rational::one();
    let d2 = (w - &one) * (w - &one);
    let y = pow_int(w, -(n0 as i64));
    let mut partial = Rational::zero();
    let mut power = y.clone();
    for _ in 0..k {
        partial += &d2 * &power;
        power *= &y;
    }
    let tail = &d2 * &power / (&one - &y);
    Ok(partial + tail == spectral_mass(w, n0)?)
}

/// `det(A_n + (μ+μ⁻¹)I)·(μ − μ⁻¹) = μⁿ − μ⁻ⁿ` for `2 ≤ n ≤ n_max`.
pub fn det_identity_check(n_max: u64) -> Result<bool> {
    check_n_max(n_max)?;
    let one = Rational::one();
    let diff = &LaurentPoly::monomial(1, one.clone()) - &LaurentPoly::monomial(-1, one.clone());
    for n in 2..=n_max {
        let det = laurent_det_tridiagonal(n as usize)?;
        let rhs = &LaurentPoly::monomial(n as i64, one.clone()) - &LaurentPoly::monomial(-(n as i64), one.clone());
        if &det * &diff != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `λ` has the expected floating value `2cos(mπ/n)`.
pub fn lambda_consistent(m: u64, n: u64) -> Result<bool> {
    let exact = lambda_exact(m, n)?.to_f64();
    Ok((exact - lambda_f64(m, n)).abs() < 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(n: u32) -> SpectralSetup {
        SpectralSetup::avg(FiniteAbelianGroup::cyclic(n).unwrap()).unwrap()
    }

    #[test]
    fn q_traces() {
        let s2 = setup(2);
        assert_eq!(s2.build_q(2).unwrap().trace(), rat(1, 4));
        assert_eq!(s2.build_q(3).unwrap().trace(), rat(1, 8));
        assert_eq!(setup(3).build_q(2).unwrap().trace(), rat(4, 9));
        for n in 2..=5 {
            let q = s2.build_q(n).unwrap();
            assert!(q.is_projection());
            assert_eq!(q.trace(), s2.expected_q_trace(n));
        }
        assert!(s2.build_q(1).is_err());
    }

    #[test]
    fn setup_rejects_trivial_projections() {
        let u = FiniteAbelianGroup::cyclic(2).unwrap();
        assert!(SpectralSetup::new(GroupRingElement::one(u.clone())).is_err());
        assert!(SpectralSetup::new(GroupRingElement::zero(u.clone())).is_err());
        let not_proj = GroupRingElement::monomial(u, 1, rat(1, 1));
        assert!(SpectralSetup::new(not_proj).is_err());
    }

    #[test]
    fn orthogonality_examples() {
        let s = setup(2);
        assert!(s.check_q_orthogonality(3).unwrap());
        assert!(s.orthogonality_holds(2, 1, 2, 1).unwrap());
        assert!(s.sandwich(3, 2, 0).unwrap().is_zero());
    }

    #[test]
    fn action_examples() {
        let s = setup(2);
        let q2 = s.build_q(2).unwrap();
        let t1 = q2.left_translate(&WreathElement::t_pow(1));
        assert!(s.t_operator().ring_mul(&t1).unwrap().is_zero());
        let q3 = s.build_q(3).unwrap();
        let lhs = s.t_operator().ring_mul(&q3.left_translate(&WreathElement::t_pow(1))).unwrap();
        assert_eq!(lhs, q3.left_translate(&WreathElement::t_pow(2)));
        let s3 = setup(3);
        let q4 = s3.build_q(4).unwrap();
        let lhs = s3.t_operator().ring_mul(&q4.left_translate(&WreathElement::t_pow(2))).unwrap();
        let rhs = q4
            .left_translate(&WreathElement::t_pow(1))
            .add(&q4.left_translate(&WreathElement::t_pow(3)))
            .unwrap();
        assert_eq!(lhs, rhs);
        assert!(s.check_action(4).unwrap());
    }

    #[test]
    fn p_examples() {
        let s = setup(2);
        let p = s.build_p(1, 2).unwrap();
        let q2 = s.build_q(2).unwrap();
        let expected = q2
            .left_translate(&WreathElement::t_pow(1))
            .right_translate(&WreathElement::t_pow(-1))
            .promote(8);
        assert_eq!(p, expected);
        for (m, n) in [(1, 2), (1, 3), (2, 3)] {
            let c = s.verify_p(m, n).unwrap();
            assert!(c.all(), "{c:?}");
        }
        let p13 = s.build_p(1, 3).unwrap();
        assert_eq!(s.t_operator().mul_cyclotomic(&p13).unwrap(), p13);
        let p23 = s.build_p(2, 3).unwrap();
        assert_eq!(s.t_operator().mul_cyclotomic(&p23).unwrap(), p23.neg());
    }

    #[test]
    fn r_orthogonality_examples() {
        let s = setup(2);
        assert!(s.check_p_orthogonality(3).unwrap());
        let same = s.r_star_r(1, 2, 1, 2).unwrap();
        assert_eq!(same, s.build_q(2).unwrap().promote(8));
        assert!(s.r_star_r(1, 2, 1, 3).unwrap().is_zero());
    }

    #[test]
    fn factorized_idempotence_agrees_with_direct() {
        let s = setup(2);
        let p = s.build_p(1, 4).unwrap();
        assert_eq!(p.ring_mul(&p).unwrap(), p);
        let r = s.build_r(1, 4).unwrap();
        assert_eq!(r.mul_rational(&s.build_q(4).unwrap()).unwrap(), r);
        assert!(s.r_orthogonality_holds(1, 4, 1, 4).unwrap());
    }

    #[test]
    fn measure_examples() {
        let two = rat(2, 1);
        let v = spectral_measure(&two, &Mu::Rotation { m: 1, n: 2 }).unwrap();
        assert_eq!(v.mass, rat(1, 3));
        assert_eq!(spectral_measure(&two, &Mu::Rotation { m: 1, n: 3 }).unwrap().mass, rat(1, 7));
        let miss = spectral_measure(&two, &Mu::Decimal(0.123)).unwrap();
        assert_eq!(miss.mass, rat(0, 1));
        assert!(!miss.recognized);
        let hit = spectral_measure(&two, &Mu::Decimal(1.0)).unwrap();
        assert_eq!(hit.rotation, Some((1, 3)));
        let reduced = spectral_measure(&two, &Mu::Rotation { m: 2, n: 4 }).unwrap();
        assert_eq!(reduced.rotation, Some((1, 2)));
        assert!(spectral_measure(&rat(1, 1), &Mu::Rotation { m: 1, n: 2 }).is_err());
        assert!(spectral_measure(&two, &Mu::Rotation { m: 3, n: 3 }).is_err());
        assert_eq!(spectral_mass(&rat(5, 2), 2).unwrap(), rat(9, 4) / rat(21, 4));
    }

    #[test]
    fn completeness() {
        let two = rat(2, 1);
        assert_eq!(completeness_partial_sum(&two, 2).unwrap(), rat(1, 4));
        assert_eq!(completeness_partial_sum(&two, 3).unwrap(), rat(1, 2));
        let s20 = completeness_partial_sum(&two, 20).unwrap();
        assert_eq!(rat(1, 1) - s20, rat(21, 1 << 20));
        for w in [rat(2, 1), rat(3, 1), rat(5, 2)] {
            for n in 2..15 {
                assert_eq!(
                    completeness_partial_sum(&w, n).unwrap() + completeness_tail(&w, n).unwrap(),
                    rat(1, 1)
                );
            }
        }
    }

    #[test]
    fn regrouping_and_det() {
        for n0 in 2..8 {
            assert!(atom_regrouping_check(&rat(2, 1), n0, 5).unwrap());
            assert!(atom_regrouping_check(&rat(7, 3), n0, 3).unwrap());
        }
        assert!(det_identity_check(2).unwrap());
        assert!(det_identity_check(12).unwrap());
        for n in 2..20 {
            for m in 1..n {
                assert!(lambda_consistent(m, n).unwrap());
            }
        }
    }
}

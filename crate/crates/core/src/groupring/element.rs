use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use super::coefficient::Coefficient;
use super::group::{FiniteAbelianGroup, Group, ProductGroup, WreathElement, WreathProduct};
use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::exact::Rational;

/// A finite formal sum `Σ c_g g`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupRingElement<G: Group, C: Coefficient> {
    group: G,
    ctx: C::Context,
    terms: BTreeMap<G::Element, C>,
}

/// One serialized term.
#[derive(Clone, Debug, Serialize)]
pub struct TermRecord {
    pub element: String,
    pub coeff: serde_json::Value,
}

impl<G: Group, C: Coefficient> GroupRingElement<G, C> {
    pub fn zero_in(group: G, ctx: C::Context) -> Self {
        GroupRingElement { group, ctx, terms: BTreeMap::new() }
    }

    pub fn one_in(group: G, ctx: C::Context) -> Self {
        let id = group.identity();
        let c = C::one_in(&ctx);
        Self::monomial_in(group, ctx, id, c)
    }

    pub fn monomial_in(group: G, ctx: C::Context, g: G::Element, c: C) -> Self {
        let mut out = Self::zero_in(group, ctx);
        if !c.is_zero() {
            out.terms.insert(g, c);
        }
        out
    }

    pub fn from_terms_in(
        group: G,
        ctx: C::Context,
        terms: impl IntoIterator<Item = (G::Element, C)>,
    ) -> Self {
        let mut out = Self::zero_in(group, ctx);
        for (g, c) in terms {
            out.add_term(g, &c);
        }
        out
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn context(&self) -> &C::Context {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<G::Element, C> {
        &self.terms
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: &G::Element) -> C {
        self.terms.get(g).cloned().unwrap_or_else(|| C::zero_in(&self.ctx))
    }

    fn add_term(&mut self, g: G::Element, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::invalid("group ring elements live over different groups"));
        }
        if self.ctx != other.ctx {
            return Err(Error::invalid("group ring elements use different coefficient fields"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg_ref())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map_coeffs(|c| c.scale(r))
    }

    pub fn scale_by(&self, s: &C) -> Self {
        self.map_coeffs(|c| s.mul_ref(c))
    }

    fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(g, c)| {
                let d = f(c);
                (!d.is_zero()).then(|| (g.clone(), d))
            })
            .collect();
        GroupRingElement { group: self.group.clone(), ctx: self.ctx.clone(), terms }
    }

    /// Convolution product.
    pub fn ring_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(convolve(&self.group, self.ctx.clone(), &self.terms, &other.terms, |a, b| a.mul_ref(b)))
    }

    /// `g · a`; a bijection on supports, so no coefficients collide.
    pub fn left_translate(&self, g: &G::Element) -> Self {
        let terms = self.terms.iter().map(|(h, c)| (self.group.op(g, h), c.clone())).collect();
        GroupRingElement { group: self.group.clone(), ctx: self.ctx.clone(), terms }
    }

    /// `a · g`.
    pub fn right_translate(&self, g: &G::Element) -> Self {
        let terms = self.terms.iter().map(|(h, c)| (self.group.op(h, g), c.clone())).collect();
        GroupRingElement { group: self.group.clone(), ctx: self.ctx.clone(), terms }
    }

    /// Conjugate coefficients and invert group elements.
    pub fn star(&self) -> Self {
        let terms = self.terms.iter().map(|(g, c)| (self.group.inverse(g), c.conj())).collect();
        GroupRingElement { group: self.group.clone(), ctx: self.ctx.clone(), terms }
    }

    /// Coefficient of the identity.
    pub fn trace(&self) -> C {
        self.coeff(&self.group.identity())
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.star() == *self
    }

    /// `a = a* = a²`, exactly.
    pub fn is_projection(&self) -> bool {
        self.is_self_adjoint() && self.ring_mul(self).is_ok_and(|sq| sq == *self)
    }

    /// Pushes the element forward along a group homomorphism into `target`.
    pub fn map_group<H: Group>(&self, target: H, f: impl Fn(&G::Element) -> H::Element) -> GroupRingElement<H, C> {
        let mut out = GroupRingElement::zero_in(target, self.ctx.clone());
        for (g, c) in &self.terms {
            out.add_term(f(g), c);
        }
        out
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(g, c)| TermRecord { element: self.group.render(g), coeff: c.to_json() })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_records()).expect("term records serialize")
    }
}

fn convolve<G: Group, A, B, C: Coefficient>(
    group: &G,
    ctx: C::Context,
    left: &BTreeMap<G::Element, A>,
    right: &BTreeMap<G::Element, B>,
    mul: impl Fn(&A, &B) -> C,
) -> GroupRingElement<G, C> {
    let mut acc: HashMap<G::Element, C> = HashMap::with_capacity(left.len() * right.len());
    for (g, a) in left {
        for (h, b) in right {
            let c = mul(a, b);
            if c.is_zero() {
                continue;
            }
            match acc.entry(group.op(g, h)) {
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
                std::collections::hash_map::Entry::Occupied(mut o) => o.get_mut().add_assign_ref(&c),
            }
        }
    }
    let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    GroupRingElement { group: group.clone(), ctx, terms }
}

impl<G: Group> GroupRingElement<G, Rational> {
    pub fn zero(group: G) -> Self {
        Self::zero_in(group, ())
    }

    pub fn one(group: G) -> Self {
        Self::one_in(group, ())
    }

    pub fn monomial(group: G, g: G::Element, c: Rational) -> Self {
        Self::monomial_in(group, (), g, c)
    }

    pub fn from_terms(group: G, terms: impl IntoIterator<Item = (G::Element, Rational)>) -> Self {
        Self::from_terms_in(group, (), terms)
    }

    /// Embeds into `ℚ(ζ_N)[G]`.
    pub fn promote(&self, order: u64) -> GroupRingElement<G, CyclotomicNumber> {
        let terms = self
            .terms
            .iter()
            .map(|(g, c)| (g.clone(), CyclotomicNumber::from_rational(order, c.clone())))
            .collect();
        GroupRingElement { group: self.group.clone(), ctx: order, terms }
    }

    /// `self · b` for cyclotomic `b`, without promoting `self`.
    pub fn mul_cyclotomic(&self, b: &GroupRingElement<G, CyclotomicNumber>) -> Result<GroupRingElement<G, CyclotomicNumber>> {
        if self.group != b.group {
            return Err(Error::invalid("group ring elements live over different groups"));
        }
        Ok(convolve(&self.group, b.ctx, &self.terms, &b.terms, |r, c| c.scale(r)))
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> num_bigint::BigInt {
        self.terms.values().fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

impl<G: Group> GroupRingElement<G, CyclotomicNumber> {
    /// `self · b` for rational `b`.
    pub fn mul_rational(&self, b: &GroupRingElement<G, Rational>) -> Result<Self> {
        if self.group != b.group {
            return Err(Error::invalid("group ring elements live over different groups"));
        }
        Ok(convolve(&self.group, self.ctx, &self.terms, &b.terms, |c, r| c.scale(r)))
    }

    /// Moves every coefficient into `ℚ(ζ_target)`.
    pub fn embed_field(&self, target: u64) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(g, c)| Ok((g.clone(), c.embed(target)?)))
            .collect::<Result<_>>()?;
        Ok(GroupRingElement { group: self.group.clone(), ctx: target, terms })
    }

    /// The element with rational coefficients, if every coefficient is rational.
    pub fn as_rational(&self) -> Option<GroupRingElement<G, Rational>> {
        let terms = self
            .terms
            .iter()
            .map(|(g, c)| c.as_rational().map(|r| (g.clone(), r)))
            .collect::<Option<_>>()?;
        Some(GroupRingElement { group: self.group.clone(), ctx: (), terms })
    }
}

impl<C: Coefficient> GroupRingElement<FiniteAbelianGroup, C> {
    /// Places `U` at lamp index 0 of `U ≀ ℤ`.
    pub fn lift_to_wreath(&self) -> GroupRingElement<WreathProduct, C> {
        let w = WreathProduct::new(self.group.clone());
        self.map_group(w, |&u| WreathElement::lamp(0, u))
    }
}

impl<G: Group, C: Coefficient> fmt::Display for GroupRingElement<G, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, c)| format!("({c})·{}", self.group.render(g)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `(1/|U|) Σ_{u∈U} u`.
pub fn avg_projection(u: &FiniteAbelianGroup) -> GroupRingElement<FiniteAbelianGroup, Rational> {
    let w = Rational::new(1.into(), u.order().into());
    GroupRingElement::from_terms(u.clone(), u.elements().map(|g| (g, w.clone())))
}

/// The product `a·b` inside the group ring of `G × H`.
pub fn product_embed<A: Group, B: Group, C: Coefficient>(
    a: &GroupRingElement<A, C>,
    b: &GroupRingElement<B, C>,
) -> Result<GroupRingElement<ProductGroup<A, B>, C>> {
    if a.ctx != b.ctx {
        return Err(Error::invalid("group ring elements use different coefficient fields"));
    }
    let group = ProductGroup::new(a.group.clone(), b.group.clone());
    let id_b = b.group.identity();
    let id_a = a.group.identity();
    let left = a.map_group(group.clone(), |g| (g.clone(), id_b.clone()));
    let right = b.map_group(group, |h| (id_a.clone(), h.clone()));
    left.ring_mul(&right)
}

use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};

/// A group whose elements are plain values; the group value itself carries
/// any parameters (orders of the cyclic factors, base group of a wreath product).
pub trait Group: Clone + PartialEq + fmt::Debug {
    type Element: Clone + Eq + Ord + Hash + fmt::Debug;

    fn identity(&self) -> Self::Element;
    fn op(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn inverse(&self, a: &Self::Element) -> Self::Element;
    /// Canonical string form, `"1"` for the identity.
    fn render(&self, a: &Self::Element) -> String;
    fn parse(&self, s: &str) -> Result<Self::Element>;

    fn is_identity(&self, a: &Self::Element) -> bool {
        *a == self.identity()
    }
}

/// `C_{n_1} × ⋯ × C_{n_k}`; elements are encoded as mixed-radix integers with
/// the first factor least significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    orders: Vec<u32>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        if orders.is_empty() || orders.contains(&0) {
            return Err(Error::invalid("cyclic orders must be a nonempty list of positive integers"));
        }
        let total = orders.iter().try_fold(1u64, |acc, &o| acc.checked_mul(o as u64));
        if total.is_none_or(|t| t > u32::MAX as u64) {
            return Err(Error::invalid("group order too large"));
        }
        Ok(FiniteAbelianGroup { orders })
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        FiniteAbelianGroup::new(vec![n])
    }

    /// Parses `"C2"`, `"C2xC3"` or `"C4×C5"`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let orders = spec
            .split(['x', '×', '*'])
            .map(|part| {
                part.trim()
                    .strip_prefix('C')
                    .and_then(|n| n.parse::<u32>().ok())
                    .ok_or_else(|| Error::invalid(format!("bad group factor {part:?} in {spec:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteAbelianGroup::new(orders)
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn order(&self) -> u32 {
        self.orders.iter().product()
    }

    pub fn encode(&self, residues: &[u32]) -> u32 {
        assert_eq!(residues.len(), self.orders.len(), "residue vector length");
        residues
            .iter()
            .zip(&self.orders)
            .rev()
            .fold(0u32, |acc, (&r, &o)| acc * o + r % o)
    }

    pub fn decode(&self, mut code: u32) -> Vec<u32> {
        self.orders
            .iter()
            .map(|&o| {
                let r = code % o;
                code /= o;
                r
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order()
    }

    /// The `i`-th cyclic generator.
    pub fn generator(&self, i: usize) -> u32 {
        let mut residues = vec![0; self.orders.len()];
        residues[i] = 1 % self.orders[i];
        self.encode(&residues)
    }

    pub fn describe(&self) -> String {
        self.orders.iter().map(|o| format!("C{o}")).collect::<Vec<_>>().join("×")
    }

    fn render_exponent(&self, code: u32) -> String {
        let r = self.decode(code);
        if r.len() == 1 {
            r[0].to_string()
        } else {
            format!("({})", r.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
        }
    }

    fn parse_exponent(&self, s: &str) -> Result<u32> {
        let bad = || Error::invalid(format!("bad exponent {s:?} for {}", self.describe()));
        let residues: Vec<u32> = match s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            Some(inner) => inner
                .split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<_>>()?,
            None => vec![s.trim().parse::<u32>().map_err(|_| bad())?],
        };
        if residues.len() != self.orders.len() {
            return Err(bad());
        }
        Ok(self.encode(&residues))
    }
}

impl Group for FiniteAbelianGroup {
    type Element = u32;

    fn identity(&self) -> u32 {
        0
    }

    fn op(&self, a: &u32, b: &u32) -> u32 {
        if self.orders.len() == 1 {
            return (a + b) % self.orders[0];
        }
        let (x, y) = (self.decode(*a), self.decode(*b));
        let sum: Vec<u32> = x.iter().zip(&y).zip(&self.orders).map(|((p, q), o)| (p + q) % o).collect();
        self.encode(&sum)
    }

    fn inverse(&self, a: &u32) -> u32 {
        let inv: Vec<u32> =
            self.decode(*a).iter().zip(&self.orders).map(|(r, o)| (o - r) % o).collect();
        self.encode(&inv)
    }

    fn render(&self, a: &u32) -> String {
        if *a == 0 {
            "1".to_string()
        } else {
            format!("u^{}", self.render_exponent(*a))
        }
    }

    fn parse(&self, s: &str) -> Result<u32> {
        let s = s.trim();
        if s == "1" {
            return Ok(0);
        }
        let exp = s
            .strip_prefix("u^")
            .ok_or_else(|| Error::invalid(format!("bad element {s:?}")))?;
        self.parse_exponent(exp)
    }
}

/// Element `x·t^shift` of `U ≀ ℤ`, where `x ∈ ⊕_ℤ U` is a finite lamp configuration.
///
/// Conjugation satisfies `t⁻¹·(g_k)·t = (g_{k-1})`, so `t^s·x·t^{-s}` moves the
/// lamp at index `k` to index `k - s`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WreathElement {
    /// Sorted by index; never holds the identity of `U`.
    lamps: Vec<(i64, u32)>,
    shift: i64,
}

impl WreathElement {
    pub fn identity() -> Self {
        WreathElement { lamps: Vec::new(), shift: 0 }
    }

    pub fn t_pow(k: i64) -> Self {
        WreathElement { lamps: Vec::new(), shift: k }
    }

    /// The lamp `u` at `index`, with no shift.
    pub fn lamp(index: i64, u: u32) -> Self {
        let lamps = if u == 0 { Vec::new() } else { vec![(index, u)] };
        WreathElement { lamps, shift: 0 }
    }

    pub fn from_lamps(mut lamps: Vec<(i64, u32)>, shift: i64) -> Result<Self> {
        lamps.retain(|&(_, u)| u != 0);
        lamps.sort_unstable();
        if lamps.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid("repeated lamp index"));
        }
        Ok(WreathElement { lamps, shift })
    }

    pub fn lamps(&self) -> &[(i64, u32)] {
        &self.lamps
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Lamp configuration `x` moved by `delta` index positions.
    fn shifted_lamps(&self, delta: i64) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.lamps.iter().map(move |&(i, u)| (i + delta, u))
    }
}

/// `U ≀ ℤ = (⊕_ℤ U) ⋊ ⟨t⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathProduct {
    base: FiniteAbelianGroup,
}

impl WreathProduct {
    pub fn new(base: FiniteAbelianGroup) -> Self {
        WreathProduct { base }
    }

    pub fn base(&self) -> &FiniteAbelianGroup {
        &self.base
    }

    fn merge(&self, a: impl Iterator<Item = (i64, u32)>, b: impl Iterator<Item = (i64, u32)>) -> Vec<(i64, u32)> {
        let mut out = Vec::new();
        let mut a = a.peekable();
        let mut b = b.peekable();
        loop {
            match (a.peek().copied(), b.peek().copied()) {
                (Some(x), Some(y)) if x.0 == y.0 => {
                    let u = self.base.op(&x.1, &y.1);
                    if u != 0 {
                        out.push((x.0, u));
                    }
                    a.next();
                    b.next();
                }
                (Some(x), Some(y)) if x.0 < y.0 => {
                    out.push(x);
                    a.next();
                }
                (Some(_), Some(y)) => {
                    out.push(y);
                    b.next();
                }
                (Some(x), None) => {
                    out.push(x);
                    a.next();
                }
                (None, Some(y)) => {
                    out.push(y);
                    b.next();
                }
                (None, None) => return out,
            }
        }
    }
}

impl Group for WreathProduct {
    type Element = WreathElement;

    fn identity(&self) -> WreathElement {
        WreathElement::identity()
    }

    // (x t^s)(y t^r) = (x · t^s y t^-s) t^(s+r)
    fn op(&self, a: &WreathElement, b: &WreathElement) -> WreathElement {
        let lamps = self.merge(a.lamps.iter().copied(), b.shifted_lamps(-a.shift));
        WreathElement { lamps, shift: a.shift + b.shift }
    }

    // (x t^s)^-1 = t^-s x^-1 = (t^-s x^-1 t^s) t^-s
    fn inverse(&self, a: &WreathElement) -> WreathElement {
        let lamps = a
            .lamps
            .iter()
            .map(|&(i, u)| (i + a.shift, self.base.inverse(&u)))
            .collect();
        WreathElement { lamps, shift: -a.shift }
    }

    /// Rendered as `t^s·y` with `y = t^-s x t^s`, e.g. `"t^-2·u[0]^1·u[3]^2"`.
    fn render(&self, a: &WreathElement) -> String {
        let mut parts = Vec::new();
        if a.shift != 0 {
            parts.push(format!("t^{}", a.shift));
        }
        for (i, u) in a.shifted_lamps(a.shift) {
            parts.push(format!("u[{i}]^{}", self.base.render_exponent(u)));
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("·")
        }
    }

    fn parse(&self, s: &str) -> Result<WreathElement> {
        let s = s.trim();
        if s == "1" {
            return Ok(WreathElement::identity());
        }
        let bad = |part: &str| Error::invalid(format!("bad wreath factor {part:?} in {s:?}"));
        let mut shift = 0i64;
        let mut lamps = Vec::new();
        for (pos, part) in s.split('·').enumerate() {
            if let Some(k) = part.strip_prefix("t^") {
                if pos != 0 {
                    return Err(bad(part));
                }
                shift = k.parse().map_err(|_| bad(part))?;
            } else if let Some(rest) = part.strip_prefix("u[") {
                let (idx, exp) = rest.split_once("]^").ok_or_else(|| bad(part))?;
                let idx: i64 = idx.parse().map_err(|_| bad(part))?;
                lamps.push((idx - shift, self.base.parse_exponent(exp)?));
            } else {
                return Err(bad(part));
            }
        }
        WreathElement::from_lamps(lamps, shift)
    }
}

/// Direct product `G × H`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductGroup<A, B> {
    pub left: A,
    pub right: B,
}

impl<A: Group, B: Group> ProductGroup<A, B> {
    pub fn new(left: A, right: B) -> Self {
        ProductGroup { left, right }
    }
}

impl<A: Group, B: Group> Group for ProductGroup<A, B> {
    type Element = (A::Element, B::Element);

    fn identity(&self) -> Self::Element {
        (self.left.identity(), self.right.identity())
    }

    fn op(&self, a: &Self::Element, b: &Self::Element) -> Self::Element {
        (self.left.op(&a.0, &b.0), self.right.op(&a.1, &b.1))
    }

    fn inverse(&self, a: &Self::Element) -> Self::Element {
        (self.left.inverse(&a.0), self.right.inverse(&a.1))
    }

    fn render(&self, a: &Self::Element) -> String {
        format!("({} | {})", self.left.render(&a.0), self.right.render(&a.1))
    }

    fn parse(&self, s: &str) -> Result<Self::Element> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::invalid(format!("bad product element {s:?}")))?;
        let (l, r) = inner
            .split_once(" | ")
            .ok_or_else(|| Error::invalid(format!("bad product element {s:?}")))?;
        Ok((self.left.parse(l)?, self.right.parse(r)?))
    }
}

//! Group rings over finite abelian groups `U`, wreath products `U ≀ ℤ`, and
//! direct products of two groups, with rational or cyclotomic coefficients.

mod coefficient;
mod element;
mod group;

pub use coefficient::Coefficient;
pub use element::{avg_projection, product_embed, GroupRingElement, TermRecord};
pub use group::{FiniteAbelianGroup, Group, ProductGroup, WreathElement, WreathProduct};

/// `ℚ[U≀ℤ]` with rational coefficients.
pub type RationalWreathElement = GroupRingElement<WreathProduct, crate::exact::Rational>;
/// `ℚ(ζ_N)[U≀ℤ]`.
pub type CyclotomicWreathElement =
    GroupRingElement<WreathProduct, crate::cyclotomic::CyclotomicNumber>;

//! Exact group-ring computations for lamplighter-type wreath products `U ≀ ℤ`.
//!
//! The crate builds the spectral projections of the operator `T = e·t + t⁻¹·e`
//! inside `ℚ(ζ)[U ≀ ℤ]`, verifies the identities they satisfy with exact
//! arithmetic, and evaluates the resulting L²-dimensions (including the
//! constants `κ(p, q)` for products of two wreath products) with certified
//! ball arithmetic.
//!
//! Module map:
//!
//! - [`exact`]: rationals, dyadic balls, Laurent polynomials, continued fractions
//! - [`numtheory`]: φ, divisors, factorization, `a(n)` and the large-`Q` inequalities
//! - [`cyclotomic`]: exact arithmetic in `ℚ(ζ_N)`, eigenvalues `2cos(mπ/n)` and sine eigenvectors
//! - [`groupring`]: finite abelian groups, wreath products, products, and their group rings
//! - [`spectral`]: `q_n`, `r_{m,n}`, `p_{m,n}` and the spectral measure of `T`
//! - [`products`]: `dim ker(T − S)` on `(U≀ℤ)×(V≀ℤ)` and `κ(p, q)`
//! - [`projections`]: projections of prescribed rational trace in `ℚ[C_n]`
//! - [`series`]: the gcd generating series and the coefficient-gap witnesses

pub mod cyclotomic;
pub mod error;
pub mod exact;
pub mod groupring;
pub mod numtheory;
pub mod products;
pub mod projections;
pub mod series;
pub mod spectral;

pub use error::{Error, Result};
pub use exact::{Ball, ContinuedFractionReport, LaurentPoly, Rational};

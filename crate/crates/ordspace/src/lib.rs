//! Exact computation with finite spaces of orderings.
//!
//! The crate has five layers:
//!
//! - [`ratpoly`]: exact rational arithmetic and univariate polynomial algebra
//!   over Q — gcd, square-free and coprime decomposition, Sturm sequences,
//!   real root isolation, and sign evaluation at symbolic points.
//! - [`space`]: the finite space-of-orderings data model — characters on an
//!   exponent-2 group, value sets, Harrison sets, generated subspaces,
//!   quotient structures, and axiom verification by exhaustive scan.
//! - [`structure`]: the construction algebra — direct sums, group extensions,
//!   fans, connected components, stability index, and the decomposition of a
//!   finite space into sums and extensions of one-point spaces.
//! - [`qx`]: finite quotients of the space of orderings of Q(x) built from a
//!   list of polynomials, restriction of symbolic orderings, and towers of
//!   quotients forming verified inverse systems.
//! - [`ppform`]: positive-primitive formulas — parsing, brute-force
//!   evaluation on finite spaces, counterexample-subspace search, tower
//!   checks, and the B(n, k) cardinality bound.

pub mod error;
pub mod gf2;
pub mod ppform;
pub mod qx;
pub mod ratpoly;
pub mod space;
pub mod structure;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

//! Exact rational arithmetic and univariate polynomial algebra over Q.
//!
//! Everything here is exact: coefficients are arbitrary-precision rationals,
//! real roots are represented by isolating intervals with rational endpoints,
//! and signs are decided by Sturm sequences and exact evaluation. No
//! floating point is used anywhere.

mod factor;
mod poly;
mod roots;

pub use factor::{coprime_basis, gcd, squarefree_decomposition, squarefree_part, BasisExpression, CoprimeBasis};
pub use poly::{parse_polynomial, parse_rational, sign_at_rational, Polynomial, Rational};
pub use roots::{
    count_real_roots, count_roots_in, has_root_in_closed, isolate_roots, refine_root, root_free_right_extension,
    simplest_rational_between, Interval,
};

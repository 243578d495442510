//! Abelian ideals of the Borel subalgebra of `sp(2n, C)` and the cohomology
//! of its nilradical.
//!
//! * [`roots`]: positive roots of type C_n in a fixed canonical order.
//! * [`weyl`]: signed permutations, inversion sets and standard forms.
//! * [`ideals`]: up-sets of the long/sum roots, i.e. abelian ideals.
//! * [`correspondence`]: the bijection `W ↔ S_n × ideals` and its inverse.
//! * [`liealg`]: an integer matrix realization and its structure constants.
//! * [`ce`]: Chevalley–Eilenberg cochains, Betti numbers and cocycle checks.
//! * [`poincare`]: integer polynomials and the generating-function identities.
//!
//! All arithmetic is exact.

pub mod ce;
pub mod correspondence;
pub mod error;
pub mod ideals;
pub mod liealg;
pub mod linalg;
pub mod poincare;
pub mod report;
pub mod roots;
pub mod weyl;

/// Largest rank any type here supports (`n^2` roots fit in a `u128`).
pub const MAX_RANK: usize = 11;

pub use correspondence::{CorrespondencePair, InverseRoute, XiBound};
pub use error::{Error, Result};
pub use ideals::IncreasingSet;
pub use poincare::IntPolynomial;
pub use report::{CheckRecord, VerificationReport};
pub use roots::{Root, RootSet, SignedRoot};
pub use weyl::{Perm, SignOrdering, SignedPerm, StandardForm, WeylGroup};

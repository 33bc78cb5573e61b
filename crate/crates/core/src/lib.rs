//! Green functions of the standard random walk on amalgamated free products
//! `G_{m_1,…,m_N}` of copies of the integers over a common central
//! subgroup, computed exactly through operator-valued R-transforms.
//!
//! The crate is organized bottom-up:
//!
//! - [`exact`]: integer polynomials, `ξ`-valued power series, resultants and
//!   relation reconstruction.
//! - [`cyclo`]: the single-factor Cauchy transform and its path-count oracle.
//! - [`transform`]: Cauchy ↔ R conversions and free additive summation.
//! - [`green`]: branch lifting, the trace, return probabilities and the
//!   spectral radius estimate.
//! - [`elliptic`]: closed forms for index-two amalgams.
//! - [`walk`]: exact path counting on normal forms of group elements.
//! - [`cli`]: the command-line front end.

pub mod cli;
pub mod cyclo;
pub mod elliptic;
pub mod error;
pub mod exact;
pub mod green;
pub mod transform;
pub mod walk;

pub use error::{Error, Result};

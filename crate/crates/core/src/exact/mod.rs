//! Exact arithmetic kernel: integer polynomials in `(X, b, ξ)`, truncated
//! `ξ`-valued series, resultants, squarefree parts and reconstruction of
//! minimal relations from series.

pub mod gcd;
pub mod linalg;
pub mod modp;
pub mod mpoly;
pub mod relation;
pub mod resultant;
pub mod series;

pub use gcd::{gcd, squarefree_part};
pub use mpoly::{MPoly, Var};
pub use relation::{minimal_relation, minimal_relation_dividing, AlgebraicRelation, DegreeBounds, RelationKind};
pub use resultant::resultant;
pub use series::{XiPoly, XiSeries};

//! Constant-dimension subspace codes for random network coding.
//!
//! This crate implements two classical code families together with their
//! message codecs:
//!
//! * **Desarguesian spread codes** — the Grassmannian line `G_{q^k}(1, m)`
//!   lifted into `G_q(k, n)` through the companion matrix of a primitive
//!   polynomial, with integer messages mapped onto projective points
//!   ([`spread_codes`]).
//! * **Cyclic orbit codes** — orbits of a seed subspace under a cyclic
//!   matrix group, encoded by group exponents and decoded by a
//!   Pohlig-Hellman discrete logarithm ([`orbit_codes`]).
//!
//! The two are glued by [`hybrid`]: a linear isometry carries the spread
//! used for message indexing onto an orbit spread used on the channel, so
//! message decoding never touches a discrete logarithm.
//!
//! Supporting layers: exact arithmetic in `F_p` and `F_{p^e}`
//! ([`finite_field`]), dense matrices over `F_p` ([`fq_matrix`]), and
//! Grassmannian points with the subspace metric ([`subspace`]). The
//! [`cli`] module backs the `subspace-codes` binary.
//!
//! The base field is restricted to prime `q`; orders and messages are
//! capped at 128 bits.

pub mod cli;
pub mod error;
pub mod finite_field;
pub mod fq_matrix;
pub mod hybrid;
pub mod orbit_codes;
pub mod spread_codes;
pub mod subspace;

pub use error::{Error, Result};
pub use finite_field::{FieldContext, FieldElem};
pub use fq_matrix::FqMatrix;
pub use hybrid::HybridCodec;
pub use orbit_codes::OrbitContext;
pub use spread_codes::{ProjPoint, SpreadContext};
pub use subspace::{Subspace, SubspaceCode};

//! Exact toolkit for complex symplectic quotients of diagonal torus
//! representations, driven entirely by the weight matrix.
//!
//! A rank-`l` torus acting diagonally on `C^n` is encoded by an `l x n`
//! integer matrix whose columns are the characters of the action. The
//! crate analyzes the associated shell and quotient (stability,
//! modularity, slice representations, stratification), reduces the
//! module to minimal data with the same quotient, and decides
//! isomorphism of quotients through canonical forms, all in arbitrary
//! precision integer and rational arithmetic.
//!
//! ```
//! use torq::{isoclass::canonical_form, reduction::reduce, IntMatrix};
//!
//! let a = IntMatrix::from_i64_rows(&[&[-1, 0, 2, 2], &[0, -2, 5, 5]]);
//! let (data, trace) = reduce(&a).unwrap();
//! assert_eq!(trace.steps.len(), 1);
//! // The rank-2 action on C^4 collapses to a circle acting on C^3.
//! let block = data.torus_block.as_ref().unwrap();
//! assert_eq!(block.matrix(), &IntMatrix::from_i64_rows(&[&[-2, 9, 9]]));
//! let form = canonical_form(&data);
//! assert_eq!(
//!     form.canonical_matrix.unwrap(),
//!     IntMatrix::from_i64_rows(&[&[2, 9, 9]])
//! );
//! ```
//!
//! Every nontrivial computation is paired with an independent check:
//! truncated Hilbert series certify reductions, sampled shell points
//! cross-examine the stratum enumeration, and naive re-implementations
//! shadow the fast criteria (see [`oracle`]).

pub mod error;
pub mod feasibility;
pub mod isoclass;
pub mod lattice;
pub mod mat;
pub mod module;
pub mod oracle;
pub mod reduction;
pub mod report;
pub mod strata;
pub(crate) mod ser;
pub(crate) mod util;

pub use error::{Error, Result};
pub use mat::IntMatrix;
pub use module::{SignVector, TorusModule};

//! Accessible paths in random fitness landscapes on the directed binary hypercube.
//!
//! The crate covers landscape generation for the house-of-cards family, rough
//! Mount Fuji and site percolation, exact path counting, the permutation
//! component numbers `T(n, k)` behind the second moment of the path count, and
//! reproducible Monte Carlo estimators.

// `!(a < b)` is used on purpose so that NaN inputs are rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod combinatorics;
pub mod error;
pub mod experiments;
pub mod hypercube;
pub mod landscape;
pub mod par;
pub mod pathcount;
pub mod rng;

pub use error::{Error, Result};
pub use hypercube::NodeId;
pub use landscape::{EtaSpec, Landscape, ModelSpec};
pub use par::ExecMode;
pub use pathcount::PathCount;

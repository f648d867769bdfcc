//! Exact minimum-bandwidth regenerating codes over small finite fields.
//!
//! * [`rbt`] — repair-by-transfer codes built from a skew-symmetric message
//!   matrix and a congruence transform; repair moves symbols without any
//!   arithmetic.
//! * [`mbr`] — product-matrix codes with a systematic encoding matrix taken
//!   from partially systematic Reed–Solomon codes (or a plain Vandermonde
//!   matrix), with full and partial data reconstruction.
//! * [`psrs`] — the partially systematic Reed–Solomon codes themselves.
//! * [`shah`] — the complete-graph repair-by-transfer baseline.
//!
//! Every arithmetic routine takes an [`OpCounter`] so callers can measure
//! field multiplications and additions per operation.

pub mod counter;
pub mod error;
pub mod gf;
pub mod matrix;
pub mod mbr;
pub mod params;
pub mod plan;
pub mod poly;
pub mod psrs;
pub mod rbt;
pub mod shah;

pub use counter::{OpCount, OpCounter};
pub use error::{Error, Result};
pub use gf::{Elem, Field, FieldKind};
pub use matrix::{FieldMatrix, SkewSymmetric};
pub use params::CodeParams;
pub use plan::{DownloadPlan, Fragment, Scheme};

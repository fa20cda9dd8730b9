//! Upper bounds on the size of subspace codes over finite fields.
//!
//! The crate builds every bound from exact rational data: q-binomials and
//! ball volumes ([`qcombinat`]), q-Hahn polynomials ([`qhahn`]), the
//! classical and Delsarte bounds for constant-dimension codes
//! ([`grassmann`]), the Etzion-Vardy linear program ([`projective_lp`]) and
//! the symmetry-reduced semidefinite program ([`projective_sdp`]) for codes
//! in the full projective space. [`optim`] holds the solvers and [`oracle`]
//! the brute-force ground truth over `F_2`.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

mod error;
pub mod grassmann;
pub mod optim;
pub mod oracle;
pub mod projective_lp;
pub mod projective_sdp;
pub mod qcombinat;
pub mod qhahn;

pub use error::{Error, Result};
pub use qcombinat::{Exact, FieldOrder, GrassmannParams, Metric, ProjectiveParams};

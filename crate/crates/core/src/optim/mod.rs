//! Solvers and model formats: exact simplex, branch-and-bound, a dense
//! interior-point SDP solver, SDPA sparse files and an LP text format.

pub mod bnb;
pub mod ipm;
pub mod lp;
pub mod lptext;
pub mod sdp;
pub mod sdpa;
pub mod simplex;

pub use bnb::{branch_and_bound, IntegerSolution};
pub use ipm::{ipm_solve, ipm_solve_sdpa, IpmOptions, IpmResult, IpmStatus};
pub use lp::{LinearProgram, LinearRow, RowTag, Sense};
pub use lptext::{export_lp_text, parse_lp_text};
pub use sdp::{PsdBlock, SemidefiniteProgram};
pub use sdpa::{export_sdpa, parse_sdpa, BlockKind, SdpaEntry, SdpaProblem};
pub use simplex::{certify, simplex, simplex_solve, Arithmetic, LpSolution};

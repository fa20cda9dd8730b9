//! Exactly-constructed semidefinite programs in "inequality form":
//!
//! ```text
//! maximize  Σ_v objective[v] · x_v
//! s.t.      x_v >= 0,  linear rows,  M_0 + Σ_v x_v M_v ⪰ 0 for every block
//! ```

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::optim::lp::{LinearRow, Sense};
use crate::optim::sdpa::{BlockKind, SdpaEntry, SdpaProblem};
use crate::qcombinat::Exact;

/// One upper-triangle entry (`row <= col`) of a block's coefficient matrix
/// for variable `var` (`None` for the constant matrix `M_0`).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockEntry {
    pub var: Option<usize>,
    pub row: usize,
    pub col: usize,
    pub value: Exact,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PsdBlock {
    pub size: usize,
    pub entries: Vec<BlockEntry>,
}

impl PsdBlock {
    pub fn new(size: usize) -> Self {
        PsdBlock { size, entries: Vec::new() }
    }

    /// Adds `value · x_var` at `(row, col)`; the mirrored entry is implied.
    pub fn push(&mut self, var: Option<usize>, row: usize, col: usize, value: Exact) {
        if value.is_zero() {
            return;
        }
        let (row, col) = if row <= col { (row, col) } else { (col, row) };
        debug_assert!(col < self.size);
        self.entries.push(BlockEntry { var, row, col, value });
    }

    /// Per-row powers of two `d_r` with `d_r² · max_v |(M_v)_rr| ≈ 1`.
    fn balancing(&self) -> Vec<f64> {
        let mut peak = alloc::vec![0.0f64; self.size];
        for e in self.entries.iter().filter(|e| e.row == e.col) {
            let v = e.value.to_f64().unwrap_or(0.0).abs();
            peak[e.row] = peak[e.row].max(v);
        }
        peak.into_iter()
            .map(|p| if p > 0.0 && p.is_finite() { libm::exp2(-libm::round(libm::log2(p) / 2.0)) } else { 1.0 })
            .collect()
    }

    /// The symmetric matrix `M_0 + Σ x_v M_v`, evaluated exactly.
    pub fn evaluate(&self, x: &[Exact]) -> Vec<Vec<Exact>> {
        let mut m = alloc::vec![alloc::vec![Exact::zero(); self.size]; self.size];
        for e in &self.entries {
            let v = match e.var {
                Some(j) => &e.value * &x[j],
                None => e.value.clone(),
            };
            m[e.row][e.col] += &v;
            if e.row != e.col {
                m[e.col][e.row] += v;
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SemidefiniteProgram {
    pub var_names: Vec<String>,
    pub objective: Vec<Exact>,
    pub rows: Vec<LinearRow>,
    pub blocks: Vec<PsdBlock>,
}

impl SemidefiniteProgram {
    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn objective_value(&self, x: &[Exact]) -> Exact {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Whether every linear constraint holds exactly at `x`.
    pub fn linear_feasible(&self, x: &[Exact]) -> bool {
        x.iter().all(|v| !v.is_negative()) && self.rows.iter().all(|r| r.is_satisfied(x))
    }

    /// Converts to the SDPA standard form `min c·x s.t. Σ F_i x_i - F_0 ⪰ 0`.
    ///
    /// The dense blocks keep their order; a final diagonal block holds
    /// `x_v >= 0` for every variable followed by the linear rows, with an
    /// equality written as two opposite inequalities. `c = -objective`.
    ///
    /// Each dense block goes through a diagonal congruence by powers of two
    /// that brings its diagonal coefficients near 1. This changes neither
    /// the feasible set nor the optimum, is exact in floating point, and
    /// keeps external solvers from mistaking tiny blocks for slack ones.
    pub fn to_sdpa(&self) -> SdpaProblem {
        let m = self.num_vars();
        let f = |v: &Exact| v.to_f64().unwrap_or(f64::NAN);
        let mut entries = Vec::new();
        let mut kinds = Vec::with_capacity(self.blocks.len() + 1);
        for (b, block) in self.blocks.iter().enumerate() {
            kinds.push(BlockKind::Dense(block.size));
            let scale = block.balancing();
            for e in &block.entries {
                let (mat, value) = match e.var {
                    Some(j) => (j + 1, f(&e.value)),
                    None => (0, -f(&e.value)),
                };
                let value = value * scale[e.row] * scale[e.col];
                entries.push(SdpaEntry { mat, block: b, row: e.row, col: e.col, value });
            }
        }
        let lp_block = self.blocks.len();
        let mut next = 0usize;
        let diag = |mat: usize, row: usize, value: f64, entries: &mut Vec<SdpaEntry>| {
            if value != 0.0 {
                entries.push(SdpaEntry { mat, block: lp_block, row, col: row, value });
            }
        };
        for j in 0..m {
            diag(j + 1, next, 1.0, &mut entries);
            next += 1;
        }
        for row in &self.rows {
            // each orientation `sign · (a·x - rhs) >= 0`
            let signs: &[f64] = match row.sense {
                Sense::Ge => &[1.0],
                Sense::Le => &[-1.0],
                Sense::Eq => &[1.0, -1.0],
            };
            for &sign in signs {
                for (j, c) in &row.coeffs {
                    diag(j + 1, next, sign * f(c), &mut entries);
                }
                diag(0, next, sign * f(&row.rhs), &mut entries);
                next += 1;
            }
        }
        kinds.push(BlockKind::Diagonal(next));
        let c = self.objective.iter().map(|v| -f(v)).collect();
        let mut problem = SdpaProblem { num_vars: m, blocks: kinds, c, entries };
        problem.normalize();
        problem
    }
}

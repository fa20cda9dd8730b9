use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{Signed, Zero};

use crate::error::{invalid, Error};
use crate::qcombinat::Exact;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn as_str(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// Where a row came from. The declaration order is the export order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowTag {
    DimensionCap,
    Packing,
    SingleLarge,
    PairCap,
    ComplementPair,
    Delsarte,
    Normalization,
    Branch,
    Other,
}

impl RowTag {
    pub const ALL: [RowTag; 9] = [
        RowTag::DimensionCap,
        RowTag::Packing,
        RowTag::SingleLarge,
        RowTag::PairCap,
        RowTag::ComplementPair,
        RowTag::Delsarte,
        RowTag::Normalization,
        RowTag::Branch,
        RowTag::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RowTag::DimensionCap => "dimension_cap",
            RowTag::Packing => "packing",
            RowTag::SingleLarge => "single_large",
            RowTag::PairCap => "pair_cap",
            RowTag::ComplementPair => "complement_pair",
            RowTag::Delsarte => "delsarte",
            RowTag::Normalization => "normalization",
            RowTag::Branch => "branch",
            RowTag::Other => "other",
        }
    }
}

impl fmt::Display for RowTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RowTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        RowTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| invalid!("unknown row tag {s:?}"))
    }
}

/// `Σ coeffs · x  (sense)  rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRow {
    pub tag: RowTag,
    pub index: usize,
    pub coeffs: Vec<(usize, Exact)>,
    pub sense: Sense,
    pub rhs: Exact,
}

impl LinearRow {
    pub fn new(tag: RowTag, index: usize, coeffs: Vec<(usize, Exact)>, sense: Sense, rhs: Exact) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        LinearRow { tag, index, coeffs, sense, rhs }
    }

    pub fn lhs(&self, x: &[Exact]) -> Exact {
        self.coeffs.iter().map(|(j, c)| c * &x[*j]).sum()
    }

    pub fn is_satisfied(&self, x: &[Exact]) -> bool {
        let lhs = self.lhs(x);
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Ge => lhs >= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }

    /// Multiplies the row by a positive constant.
    pub fn scaled(&self, factor: &Exact) -> Self {
        assert!(factor.is_positive());
        LinearRow {
            coeffs: self.coeffs.iter().map(|(j, c)| (*j, c * factor)).collect(),
            rhs: &self.rhs * factor,
            ..self.clone()
        }
    }
}

/// `maximize objective · x` over `x >= 0` subject to `rows`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearProgram {
    pub var_names: Vec<String>,
    pub objective: Vec<Exact>,
    pub rows: Vec<LinearRow>,
    pub integer: Vec<bool>,
}

impl LinearProgram {
    pub fn new(var_names: Vec<String>, objective: Vec<Exact>) -> Self {
        let n = var_names.len();
        assert_eq!(n, objective.len());
        LinearProgram { var_names, objective, rows: Vec::new(), integer: alloc::vec![false; n] }
    }

    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn push_row(&mut self, row: LinearRow) {
        debug_assert!(row.coeffs.iter().all(|(j, _)| *j < self.num_vars()));
        self.rows.push(row);
    }

    pub fn objective_value(&self, x: &[Exact]) -> Exact {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn is_feasible(&self, x: &[Exact]) -> bool {
        x.len() == self.num_vars()
            && x.iter().all(|v| !v.is_negative())
            && self.rows.iter().all(|r| r.is_satisfied(x))
    }

    pub fn rows_tagged(&self, tag: RowTag) -> impl Iterator<Item = &LinearRow> {
        self.rows.iter().filter(move |r| r.tag == tag)
    }
}

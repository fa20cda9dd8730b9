//! The Etzion-Vardy linear program for codes in `P(F_q^n)`.
//!
//! Variable `x_k` counts the codewords of dimension `k`. Each `x_k` is capped
//! by a constant-dimension bound, and for every `k` the radius-`e` balls
//! around the codewords hit at most all `k`-spaces. Both metrics use
//! `e = ⌊(d-1)/2⌋`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{invalid, Error, Result};
use crate::grassmann::combined_bound;
use crate::optim::bnb::branch_and_bound;
use crate::optim::lp::{LinearProgram, LinearRow, RowTag, Sense};
use crate::optim::simplex::simplex_solve;
use crate::qcombinat::{ball_slice_injection, ball_slice_subspace, qbinom, Exact, FieldOrder, GrassmannParams, Metric, ProjectiveParams};

/// A bound on `A_q(n, k, 2δ)` as a function of `(n, k, δ)`.
pub type CapFn<'a> = &'a dyn Fn(usize, usize, usize) -> BigInt;

/// The combined floored chain for field order `q`; the default cap.
pub fn combined_cap(q: FieldOrder) -> impl Fn(usize, usize, usize) -> BigInt {
    move |n, k, delta| match GrassmannParams::new(n, k, delta, q) {
        Ok(p) => combined_bound(&p),
        Err(_) => BigInt::one(),
    }
}

fn int(v: BigInt) -> Exact {
    Exact::from_integer(v)
}

pub fn ev_model(p: &ProjectiveParams, cap: CapFn<'_>) -> LinearProgram {
    let n = p.n;
    let q = p.q;
    let e = p.packing_radius();
    let delta = p.grassmann_delta();
    let names = (0..=n).map(|k| format!("x_{k}")).collect();
    let mut lp = LinearProgram::new(names, vec![Exact::one(); n + 1]);
    for k in 0..=n {
        lp.push_row(LinearRow::new(RowTag::DimensionCap, k, vec![(k, Exact::one())], Sense::Le, int(cap(n, k, delta))));
    }
    for k in 0..=n {
        let coeffs = (0..=n)
            .map(|i| {
                let c = match p.metric {
                    Metric::Subspace => ball_slice_subspace(n, i, k, e, q),
                    Metric::Injection => ball_slice_injection(n, i, k, e, q),
                };
                (i, int(c))
            })
            .collect();
        lp.push_row(LinearRow::new(RowTag::Packing, k, coeffs, Sense::Le, int(qbinom(n as i64, k as i64, q))));
    }
    lp
}

/// Whether `d + 2c + 2 < 2n < 2d + 2c + 2` with `c = ⌈d/2⌉`.
pub fn pair_cut_window(n: usize, d: usize) -> bool {
    let c = d.div_ceil(2);
    d + 2 * c + 2 < 2 * n && 2 * n < 2 * d + 2 * c + 2
}

/// Extra rows for the subspace metric in the window of [`pair_cut_window`].
///
/// With `c = ⌈d/2⌉` and `m = 2n-d-c-1`, at most one codeword has dimension
/// `m`, and if one does then `x_c <= B = ⌊(q^n - q^m)/(q^c - q^{n-d-1})⌋`.
/// When `B <= cap_c - 1` this implication is equivalent to the linear row
/// `x_c + x_m <= cap_c` because `x_m ∈ {0, 1}`; the complement dimensions
/// give the mirrored row.
pub fn pair_cuts(n: usize, d: usize, q: FieldOrder, cap_c: &BigInt) -> Vec<LinearRow> {
    if !pair_cut_window(n, d) {
        return Vec::new();
    }
    let c = d.div_ceil(2);
    let m = 2 * n - d - c - 1;
    let one = Exact::one;
    let mut rows = vec![LinearRow::new(RowTag::SingleLarge, m, vec![(m, one())], Sense::Le, one())];
    let b = (q.pow(n as u32) - q.pow(m as u32)) / (q.pow(c as u32) - q.pow((n - d - 1) as u32));
    if &b <= &(cap_c - 1) {
        let cap = int(cap_c.clone());
        rows.push(LinearRow::new(RowTag::PairCap, c, vec![(c, one()), (m, one())], Sense::Le, cap.clone()));
        rows.push(LinearRow::new(RowTag::ComplementPair, n - c, vec![(n - m, one()), (n - c, one())], Sense::Le, cap));
    }
    rows
}

/// The ratio `B` of [`pair_cuts`], if the window applies.
pub fn pair_cut_ratio(n: usize, d: usize, q: FieldOrder) -> Option<BigInt> {
    if !pair_cut_window(n, d) {
        return None;
    }
    let c = d.div_ceil(2);
    let m = 2 * n - d - c - 1;
    Some((q.pow(n as u32) - q.pow(m as u32)) / (q.pow(c as u32) - q.pow((n - d - 1) as u32)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvMode {
    Real,
    Integer,
}

impl EvMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EvMode::Real => "real",
            EvMode::Integer => "integer",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvReport {
    pub mode: EvMode,
    /// Exact optimum in the requested mode.
    pub value: Exact,
    pub floored: BigInt,
    /// Optimum of the real relaxation.
    pub relaxation: Exact,
    pub x: Vec<Exact>,
    pub cuts: Vec<RowTag>,
    pub nodes: usize,
}

pub fn solve_ev(model: &LinearProgram, cuts: &[LinearRow], mode: EvMode) -> Result<EvReport> {
    let mut lp = model.clone();
    lp.rows.extend(cuts.iter().cloned());
    let bug = |e: Error| match e {
        Error::Infeasible => invalid!("projective LP is infeasible, but the empty code is always feasible"),
        other => other,
    };
    let cut_tags = cuts.iter().map(|r| r.tag).collect();
    match mode {
        EvMode::Real => {
            let sol = simplex_solve(&lp).map_err(bug)?;
            Ok(EvReport {
                mode,
                floored: sol.value.floor().to_integer(),
                relaxation: sol.value.clone(),
                value: sol.value,
                x: sol.x,
                cuts: cut_tags,
                nodes: 1,
            })
        }
        EvMode::Integer => {
            lp.integer = vec![true; lp.num_vars()];
            let sol = branch_and_bound(&lp).map_err(bug)?;
            Ok(EvReport {
                mode,
                floored: sol.value.floor().to_integer(),
                value: sol.value,
                relaxation: sol.relaxation,
                x: sol.x,
                cuts: cut_tags,
                nodes: sol.nodes,
            })
        }
    }
}

/// Model with the default caps, optional extra cuts, solved in `mode`.
pub fn ev_bound(p: &ProjectiveParams, extra_cuts: bool, mode: EvMode) -> Result<EvReport> {
    let cap = combined_cap(p.q);
    let model = ev_model(p, &cap);
    let cuts = if extra_cuts && p.metric == Metric::Subspace {
        pair_cuts(p.n, p.d, p.q, &cap(p.n, p.d.div_ceil(2), p.d.div_ceil(2)))
    } else {
        Vec::new()
    };
    solve_ev(&model, &cuts, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(n: usize, d: usize, metric: Metric) -> ProjectiveParams {
        ProjectiveParams::new(n, d, FieldOrder::BINARY, metric).unwrap()
    }

    #[test]
    fn small_rows() {
        let r = ev_bound(&pp(4, 3, Metric::Subspace), false, EvMode::Real).unwrap();
        assert_eq!(r.floored, BigInt::from(6));
        assert_eq!(ev_model(&pp(4, 3, Metric::Subspace), &combined_cap(FieldOrder::BINARY)).rows.len(), 10);
    }

    #[test]
    fn seven_five_cuts() {
        let cuts = pair_cuts(7, 5, FieldOrder::BINARY, &BigInt::from(17));
        let shape: Vec<(RowTag, Vec<usize>, Exact)> =
            cuts.iter().map(|r| (r.tag, r.coeffs.iter().map(|c| c.0).collect(), r.rhs.clone())).collect();
        assert_eq!(
            shape,
            vec![
                (RowTag::SingleLarge, vec![5], int(BigInt::from(1))),
                (RowTag::PairCap, vec![3, 5], int(BigInt::from(17))),
                (RowTag::ComplementPair, vec![2, 4], int(BigInt::from(17))),
            ]
        );
        assert_eq!(pair_cut_ratio(7, 5, FieldOrder::BINARY), Some(BigInt::from(16)));
        assert!(pair_cuts(8, 3, FieldOrder::BINARY, &BigInt::from(100)).is_empty());
    }

    #[test]
    fn pair_cut_needs_room_below_the_cap() {
        // B = 16 is not below a cap of 16, so only the single row remains
        assert_eq!(pair_cuts(7, 5, FieldOrder::BINARY, &BigInt::from(16)).len(), 1);
    }
}

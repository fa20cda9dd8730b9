//! Best-first branch-and-bound on top of the exact simplex.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed};

use crate::error::{invalid, Error, Result};
use crate::optim::lp::{LinearProgram, LinearRow, RowTag, Sense};
use crate::optim::simplex::{simplex_solve, LpSolution};
use crate::qcombinat::Exact;

pub const MAX_INTEGER_VARS: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct IntegerSolution {
    pub value: Exact,
    pub x: Vec<Exact>,
    /// Optimum of the root relaxation.
    pub relaxation: Exact,
    pub nodes: usize,
}

struct Node {
    bound: Exact,
    branches: Vec<LinearRow>,
    solution: LpSolution<Exact>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.cmp(&other.bound)
    }
}

fn solve_node(lp: &LinearProgram, branches: &[LinearRow]) -> Result<Option<LpSolution<Exact>>> {
    let mut sub = lp.clone();
    sub.rows.extend(branches.iter().cloned());
    match simplex_solve(&sub) {
        Ok(sol) => Ok(Some(sol)),
        Err(Error::Infeasible) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Exact integer optimum of `lp` with the flagged variables restricted to
/// integers. Branches on the most fractional variable.
pub fn branch_and_bound(lp: &LinearProgram) -> Result<IntegerSolution> {
    let int_vars: Vec<usize> = (0..lp.num_vars()).filter(|&j| lp.integer[j]).collect();
    if int_vars.len() > MAX_INTEGER_VARS {
        return Err(invalid!("{} integer variables exceed the limit of {MAX_INTEGER_VARS}", int_vars.len()));
    }
    // with an integral objective on integral variables, node bounds can be floored
    let integral_objective = lp
        .objective
        .iter()
        .enumerate()
        .all(|(j, c)| c.is_integer() && (lp.integer[j] || num_traits::Zero::is_zero(c)));
    let prune_bound = |v: &Exact| if integral_objective { v.floor() } else { v.clone() };

    let root = solve_node(lp, &[])?.ok_or(Error::Infeasible)?;
    let relaxation = root.value.clone();
    let mut incumbent: Option<(Exact, Vec<Exact>)> = None;
    let mut heap = BinaryHeap::new();
    heap.push(Node { bound: root.value.clone(), branches: Vec::new(), solution: root });
    let mut nodes = 0usize;

    while let Some(node) = heap.pop() {
        nodes += 1;
        if let Some((best, _)) = &incumbent {
            if prune_bound(&node.bound) <= *best {
                break;
            }
        }
        let sol = &node.solution;
        // rounding heuristic: floor every integer variable
        let rounded: Vec<Exact> = sol
            .x
            .iter()
            .enumerate()
            .map(|(j, v)| if lp.integer[j] { v.floor() } else { v.clone() })
            .collect();
        if lp.is_feasible(&rounded) && node.branches.iter().all(|r| r.is_satisfied(&rounded)) {
            let value = lp.objective_value(&rounded);
            if incumbent.as_ref().is_none_or(|(best, _)| value > *best) {
                incumbent = Some((value, rounded));
            }
        }
        let branch_var = int_vars
            .iter()
            .copied()
            .filter(|&j| !sol.x[j].is_integer())
            .max_by(|&a, &b| {
                let fa = fractionality(&sol.x[a]);
                let fb = fractionality(&sol.x[b]);
                fa.cmp(&fb).then(b.cmp(&a))
            });
        let Some(j) = branch_var else {
            let value = sol.value.clone();
            if incumbent.as_ref().is_none_or(|(best, _)| value > *best) {
                incumbent = Some((value, sol.x.clone()));
            }
            continue;
        };
        let v = &sol.x[j];
        let one = Exact::one();
        for (sense, rhs) in [(Sense::Le, v.floor()), (Sense::Ge, v.ceil())] {
            let mut branches = node.branches.clone();
            branches.push(LinearRow::new(RowTag::Branch, j, alloc::vec![(j, one.clone())], sense, rhs));
            if let Some(child) = solve_node(lp, &branches)? {
                let keep = incumbent.as_ref().is_none_or(|(best, _)| prune_bound(&child.value) > *best);
                if keep {
                    heap.push(Node { bound: child.value.clone(), branches, solution: child });
                }
            }
        }
    }
    let (value, x) = incumbent.ok_or(Error::Infeasible)?;
    Ok(IntegerSolution { value, x, relaxation, nodes })
}

/// Distance from `v` to the nearest integer.
fn fractionality(v: &Exact) -> Exact {
    let f = v - v.floor();
    let g = v.ceil() - v;
    if f < g { f } else { g }.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use num_bigint::BigInt;

    fn ex(a: i64, b: i64) -> Exact {
        Exact::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn knapsack_gap() {
        // max 5x + 4y s.t. 6x + 4y <= 24, x + 2y <= 6; LP 21, IP 20
        let mut lp = LinearProgram::new(vec!["x".to_string(), "y".to_string()], vec![ex(5, 1), ex(4, 1)]);
        lp.push_row(LinearRow::new(RowTag::Other, 0, vec![(0, ex(6, 1)), (1, ex(4, 1))], Sense::Le, ex(24, 1)));
        lp.push_row(LinearRow::new(RowTag::Other, 1, vec![(0, ex(1, 1)), (1, ex(2, 1))], Sense::Le, ex(6, 1)));
        lp.integer = vec![true, true];
        let sol = branch_and_bound(&lp).unwrap();
        assert_eq!(sol.relaxation, ex(21, 1));
        assert_eq!(sol.value, ex(20, 1));
        assert!(lp.is_feasible(&sol.x));
    }

    #[test]
    fn integral_relaxation_is_kept() {
        let mut lp = LinearProgram::new(vec!["x".to_string()], vec![ex(1, 1)]);
        lp.push_row(LinearRow::new(RowTag::Other, 0, vec![(0, ex(1, 1))], Sense::Le, ex(3, 1)));
        lp.integer = vec![true];
        let sol = branch_and_bound(&lp).unwrap();
        assert_eq!(sol.value, ex(3, 1));
        assert_eq!(sol.nodes, 1);
    }

    #[test]
    fn fractional_objective() {
        // max x/2 s.t. 2x <= 3
        let mut lp = LinearProgram::new(vec!["x".to_string()], vec![ex(1, 2)]);
        lp.push_row(LinearRow::new(RowTag::Other, 0, vec![(0, ex(2, 1))], Sense::Le, ex(3, 1)));
        lp.integer = vec![true];
        assert_eq!(branch_and_bound(&lp).unwrap().value, ex(1, 2));
    }
}

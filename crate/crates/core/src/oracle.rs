//! Brute-force ground truth over `F_2` for small `n`.
//!
//! A subspace of `F_2^n` (`n <= 6`) is stored as its reduced row echelon
//! basis, rows being bit masks, together with the 64-bit set of its
//! elements. Everything here is exhaustive and only meant for validating
//! the closed formulas and the reduced programs.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::optim::ipm::{ipm_solve, IpmOptions, IpmResult};
use crate::optim::lp::{LinearRow, RowTag, Sense};
use crate::optim::sdp::{PsdBlock, SemidefiniteProgram};
use crate::qcombinat::{Exact, Metric};

pub const MAX_ENUM_N: usize = 6;
pub const MAX_SEARCH_N: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    /// Ambient dimension.
    pub n: usize,
    /// Canonical RREF rows, pivot (highest set bit) strictly decreasing.
    pub basis: Vec<u8>,
    /// Bit `v` is set iff vector `v` lies in the subspace.
    pub elements: u64,
}

/// Reduces a spanning set to its canonical reduced row echelon form.
pub fn rref(vectors: &[u8]) -> Vec<u8> {
    let mut rows: Vec<u8> = Vec::new();
    for &v in vectors {
        let mut v = v;
        for &r in &rows {
            if v & high_bit(r) != 0 {
                v ^= r;
            }
        }
        if v != 0 {
            // clear the new pivot from earlier rows
            let hb = high_bit(v);
            for r in rows.iter_mut() {
                if *r & hb != 0 {
                    *r ^= v;
                }
            }
            rows.push(v);
            rows.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    // full back-substitution so the form is unique
    for a in 0..rows.len() {
        for b in 0..rows.len() {
            if a != b && rows[b] & high_bit(rows[a]) != 0 {
                rows[b] ^= rows[a];
            }
        }
    }
    rows.sort_unstable_by(|a, b| b.cmp(a));
    rows
}

fn high_bit(v: u8) -> u8 {
    if v == 0 {
        0
    } else {
        1 << (7 - v.leading_zeros())
    }
}

fn span_mask(basis: &[u8]) -> u64 {
    let mut elems = 1u64; // the zero vector
    for &b in basis {
        let mut next = elems;
        let mut m = elems;
        while m != 0 {
            let v = m.trailing_zeros() as u8;
            next |= 1u64 << (v ^ b);
            m &= m - 1;
        }
        elems = next;
    }
    elems
}

impl Subspace {
    pub fn from_spanning(n: usize, vectors: &[u8]) -> Self {
        let basis = rref(vectors);
        Subspace { n, elements: span_mask(&basis), basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Rank over `F_2` of a set of vectors.
pub fn rank(vectors: &[u8]) -> usize {
    rref(vectors).len()
}

pub fn intersection_dim(u: &Subspace, v: &Subspace) -> usize {
    let stacked: Vec<u8> = u.basis.iter().chain(&v.basis).copied().collect();
    u.dim() + v.dim() - rank(&stacked)
}

pub fn distance(u: &Subspace, v: &Subspace, metric: Metric) -> usize {
    metric.distance(u.dim(), v.dim(), intersection_dim(u, v))
}

/// Every subspace of `F_2^n`, ordered by dimension and then basis.
pub fn enumerate_projective(n: usize) -> Result<Vec<Subspace>> {
    if n > MAX_ENUM_N {
        return Err(invalid!("enumeration is limited to n <= {MAX_ENUM_N}, got {n}"));
    }
    let mut seen: BTreeSet<(usize, Vec<u8>)> = BTreeSet::new();
    let mut frontier = vec![Vec::<u8>::new()];
    seen.insert((0, Vec::new()));
    while let Some(basis) = frontier.pop() {
        let elems = span_mask(&basis);
        for v in 1..(1u16 << n) {
            if elems & (1u64 << v) != 0 {
                continue;
            }
            let mut vecs = basis.clone();
            vecs.push(v as u8);
            let next = rref(&vecs);
            if seen.insert((next.len(), next.clone())) {
                frontier.push(next);
            }
        }
    }
    Ok(seen.into_iter().map(|(_, basis)| Subspace { n, elements: span_mask(&basis), basis }).collect())
}

/// Adjacency of the conflict graph: distinct subspaces closer than `d`.
/// Only for at most 128 vertices.
fn conflict_graph(space: &[Subspace], d: usize, metric: Metric) -> Vec<u128> {
    let mut adj = vec![0u128; space.len()];
    for a in 0..space.len() {
        for b in a + 1..space.len() {
            if distance(&space[a], &space[b], metric) < d {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
    }
    adj
}

/// Maximum independent set of a graph on at most 128 vertices.
pub fn max_independent_set(adj: &[u128]) -> Vec<usize> {
    assert!(adj.len() <= 128);
    let all: u128 = if adj.len() == 128 { u128::MAX } else { (1u128 << adj.len()) - 1 };
    let mut best = Vec::new();
    let mut current = Vec::new();
    expand(adj, all, &mut current, &mut best);
    best
}

/// Greedy coloring of the candidates in the complement graph: vertices in
/// one color class are pairwise adjacent in `adj`, so an independent set
/// meets each class at most once.
fn color_bound(adj: &[u128], cand: u128) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::new();
    let mut colors = Vec::new();
    let mut rest = cand;
    let mut color = 0;
    while rest != 0 {
        color += 1;
        let mut avail = rest;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= !(1u128 << v);
            // keep only candidates adjacent to every vertex in the class
            avail &= adj[v];
            rest &= !(1u128 << v);
            order.push(v);
            colors.push(color);
        }
    }
    (order, colors)
}

fn expand(adj: &[u128], cand: u128, current: &mut Vec<usize>, best: &mut Vec<usize>) {
    let (order, colors) = color_bound(adj, cand);
    let mut cand = cand;
    for idx in (0..order.len()).rev() {
        if current.len() + colors[idx] <= best.len() {
            return;
        }
        let v = order[idx];
        current.push(v);
        let next = cand & !adj[v] & !(1u128 << v);
        if next == 0 {
            if current.len() > best.len() {
                *best = current.clone();
            }
        } else {
            expand(adj, next, current, best);
        }
        current.pop();
        cand &= !(1u128 << v);
    }
}

/// The largest code in `P(F_2^n)` with minimum distance `d`, with a witness.
pub fn max_code_exact(n: usize, d: usize, metric: Metric) -> Result<(usize, Vec<Subspace>)> {
    if n > MAX_SEARCH_N {
        return Err(invalid!("exact search is limited to n <= {MAX_SEARCH_N}, got {n}"));
    }
    let space = enumerate_projective(n)?;
    let adj = conflict_graph(&space, d, metric);
    let set = max_independent_set(&adj);
    Ok((set.len(), set.into_iter().map(|v| space[v].clone()).collect()))
}

/// `ϑ'` of a graph as a primal SDP: maximize `Σ F(x,y)` over symmetric
/// `F ⪰ 0`, `F >= 0`, `tr F = 1`, `F(x,y) = 0` on edges. Only entries
/// off the edge set are variables.
pub fn theta_prime_model(adj: &[Vec<bool>]) -> SemidefiniteProgram {
    let v = adj.len();
    let mut names = Vec::new();
    let mut objective = Vec::new();
    let mut block = PsdBlock::new(v);
    let mut trace = Vec::new();
    for a in 0..v {
        for b in a..v {
            if a != b && adj[a][b] {
                continue;
            }
            let j = names.len();
            names.push(alloc::format!("F_{a}_{b}"));
            objective.push(Exact::from_integer(if a == b { 1 } else { 2 }.into()));
            block.push(Some(j), a, b, Exact::from_integer(1.into()));
            if a == b {
                trace.push((j, Exact::from_integer(1.into())));
            }
        }
    }
    let mut sdp = SemidefiniteProgram { var_names: names, objective, rows: Vec::new(), blocks: vec![block] };
    sdp.rows.push(LinearRow::new(RowTag::Normalization, 0, trace, Sense::Eq, Exact::from_integer(1.into())));
    sdp
}

pub fn theta_prime(adj: &[Vec<bool>], opts: &IpmOptions) -> Result<IpmResult> {
    ipm_solve(&theta_prime_model(adj), opts)
}

/// `ϑ'` of the conflict graph on all of `P(F_2^n)`, without any symmetry
/// reduction.
pub fn theta_prime_unreduced(n: usize, d: usize, metric: Metric, opts: &IpmOptions) -> Result<IpmResult> {
    if n > MAX_SEARCH_N {
        return Err(invalid!("unreduced theta is limited to n <= {MAX_SEARCH_N}, got {n}"));
    }
    let space = enumerate_projective(n)?;
    let adj: Vec<Vec<bool>> = space
        .iter()
        .map(|u| space.iter().map(|w| u != w && distance(u, w, metric) < d).collect())
        .collect();
    theta_prime(&adj, opts)
}

/// `ϑ'` of the 5-cycle equals `√5`.
pub fn cycle_graph(len: usize) -> Vec<Vec<bool>> {
    (0..len).map(|a| (0..len).map(|b| (a + 1) % len == b || (b + 1) % len == a).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let sizes: Vec<usize> = (0..=5).map(|n| enumerate_projective(n).unwrap().len()).collect();
        assert_eq!(sizes, vec![1, 2, 5, 16, 67, 374]);
        assert!(enumerate_projective(7).is_err());
    }

    #[test]
    fn rref_is_canonical() {
        let a = Subspace::from_spanning(4, &[0b1100, 0b0110]);
        let b = Subspace::from_spanning(4, &[0b1010, 0b0110, 0b1100]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert_eq!(a.elements.count_ones(), 4);
    }

    #[test]
    fn complementary_planes() {
        let u = Subspace::from_spanning(4, &[0b1000, 0b0100]);
        let v = Subspace::from_spanning(4, &[0b0010, 0b0001]);
        assert_eq!(distance(&u, &v, Metric::Subspace), 4);
        assert_eq!(distance(&u, &v, Metric::Injection), 2);
        assert_eq!(distance(&u, &u, Metric::Subspace), 0);
    }

    #[test]
    fn exact_search() {
        assert_eq!(max_code_exact(4, 3, Metric::Subspace).unwrap().0, 5);
        assert_eq!(max_code_exact(4, 1, Metric::Subspace).unwrap().0, 67);
        assert_eq!(max_code_exact(2, 2, Metric::Subspace).unwrap().0, 3);
    }

    #[test]
    fn five_cycle_theta() {
        let r = theta_prime(&cycle_graph(5), &IpmOptions::default()).unwrap();
        assert!((r.primal - libm::sqrt(5.0)).abs() < 1e-6, "{r:?}");
    }
}

//! Dense primal-dual interior-point method for block-diagonal SDPs.
//!
//! Internally the solver works on the pair
//!
//! ```text
//! (P)  maximize b·y  s.t.  S = C - Σ y_i A_i ⪰ 0
//! (D)  minimize C•X  s.t.  A_i•X = b_i,  X ⪰ 0
//! ```
//!
//! with an infeasible start, the HKM search direction and Mehrotra's
//! predictor-corrector. An SDPA problem `min c·x, Σ F_i x_i - F_0 ⪰ 0` maps
//! to it with `y = x`, `b = -c`, `A_i = -F_i`, `C = -F_0`. Equalities that an
//! SDPA file encodes as two opposite diagonal rows are eliminated first,
//! since such a pair leaves (P) without interior points.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::optim::sdp::SemidefiniteProgram;
use crate::optim::sdpa::{BlockKind, SdpaEntry, SdpaProblem};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IpmOptions {
    /// Target relative duality gap.
    pub tol: f64,
    /// Target relative primal and dual infeasibility.
    pub feas_tol: f64,
    pub max_iter: usize,
    /// Fraction of the distance to the cone boundary taken per step.
    pub step_fraction: f64,
}

impl Default for IpmOptions {
    fn default() -> Self {
        IpmOptions { tol: 1e-8, feas_tol: 1e-7, max_iter: 150, step_fraction: 0.95 }
    }
}

impl IpmOptions {
    pub fn with_tol(tol: f64) -> Self {
        IpmOptions { tol, feas_tol: tol.max(1e-7), ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum IpmStatus {
    Optimal,
    MaxIterations,
    /// Step lengths collapsed before the tolerances were met.
    Stalled,
    NumericalFailure(String),
}

impl IpmStatus {
    pub fn as_str(&self) -> &str {
        match self {
            IpmStatus::Optimal => "optimal",
            IpmStatus::MaxIterations => "max_iterations",
            IpmStatus::Stalled => "stalled",
            IpmStatus::NumericalFailure(_) => "numerical_failure",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IpmResult {
    pub status: IpmStatus,
    /// `b·y`: objective of the maximization at the returned point.
    pub primal: f64,
    /// `C•X`: the dual objective, an upper bound when `X` is feasible.
    pub dual: f64,
    /// `dual - primal`.
    pub gap: f64,
    pub rel_gap: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub iterations: usize,
    /// Values of the original variables.
    pub x: Vec<f64>,
    pub history: Vec<IpmIterate>,
}

/// Progress record of one iteration, taken before its step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IpmIterate {
    pub primal: f64,
    pub dual: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub mu: f64,
    pub step_primal: f64,
    pub step_dual: f64,
}

/// Solves an exactly-built model; its objective is maximized.
pub fn ipm_solve(sdp: &SemidefiniteProgram, opts: &IpmOptions) -> Result<IpmResult> {
    ipm_solve_sdpa(&sdp.to_sdpa(), opts)
}

/// Solves an SDPA-form problem. `primal`/`dual` in the result refer to the
/// maximization of `-c·x`, i.e. they are the negated SDPA objective values.
pub fn ipm_solve_sdpa(p: &SdpaProblem, opts: &IpmOptions) -> Result<IpmResult> {
    let reduced = Reduced::from_sdpa(p)?;
    let mut res = solve_reduced(&reduced.problem, opts);
    res.x = reduced.recover(&res.x);
    Ok(res)
}

type Entry = (usize, usize, usize, f64); // (block, row, col) with row <= col

/// `maximize b·y + offset s.t. C - Σ y_i A_i ⪰ 0`.
#[derive(Debug, Clone)]
struct Problem {
    blocks: Vec<BlockKind>,
    b: Vec<f64>,
    a: Vec<Vec<Entry>>,
    c: Vec<Entry>,
    offset: f64,
}

struct Substitution {
    var: usize,
    /// `x_var = constant - Σ coeffs · x`
    constant: f64,
    coeffs: Vec<(usize, f64)>,
}

struct Reduced {
    problem: Problem,
    num_vars: usize,
    kept: Vec<usize>,
    subs: Vec<Substitution>,
}

fn merge(entries: &mut Vec<Entry>) {
    entries.sort_by(|x, y| (x.0, x.1, x.2).cmp(&(y.0, y.1, y.2)));
    let mut out: Vec<Entry> = Vec::with_capacity(entries.len());
    for e in entries.drain(..) {
        match out.last_mut() {
            Some(l) if (l.0, l.1, l.2) == (e.0, e.1, e.2) => l.3 += e.3,
            _ => out.push(e),
        }
    }
    out.retain(|e| e.3 != 0.0);
    *entries = out;
}

impl Reduced {
    fn from_sdpa(p: &SdpaProblem) -> Result<Self> {
        let m = p.num_vars;
        if p.c.len() != m {
            return Err(Error::Solver("objective length does not match variable count".into()));
        }
        // f[0] = F_0, f[i] = F_i
        let mut f: Vec<Vec<Entry>> = vec![Vec::new(); m + 1];
        for e in &p.entries {
            let (r, c) = if e.row <= e.col { (e.row, e.col) } else { (e.col, e.row) };
            f[e.mat].push((e.block, r, c, e.value));
        }
        f.iter_mut().for_each(merge);
        let mut cost = p.c.clone();
        let mut offset = 0.0;
        let mut removed_rows: Vec<(usize, usize)> = Vec::new();
        let mut eliminated = vec![false; m + 1];
        let mut subs = Vec::new();

        for (blk, r1, r2) in equality_pairs(p, &f) {
            // Σ_i g_i x_i - g_0 = 0 read off row r1 in the current data
            let row_val = |mat: &Vec<Entry>| -> f64 {
                mat.iter().filter(|e| e.0 == blk && e.1 == r1 && e.2 == r1).map(|e| e.3).sum()
            };
            let g: Vec<f64> = f.iter().map(row_val).collect();
            let pivot = (1..=m)
                .filter(|&i| !eliminated[i] && g[i] != 0.0)
                .max_by(|&x, &y| g[x].abs().total_cmp(&g[y].abs()));
            removed_rows.push((blk, r1));
            removed_rows.push((blk, r2));
            let Some(piv) = pivot else {
                if g[0].abs() > 1e-12 {
                    return Err(Error::Solver("inconsistent equality constraint".into()));
                }
                continue;
            };
            let gp = g[piv];
            let fp = core::mem::take(&mut f[piv]);
            for i in 0..=m {
                if i == piv || g[i] == 0.0 {
                    continue;
                }
                let factor = -g[i] / gp;
                f[i].extend(fp.iter().map(|&(b, r, c, v)| (b, r, c, v * factor)));
                merge(&mut f[i]);
            }
            // the constant term has the opposite sign convention (-F_0)
            offset += cost[piv - 1] * g[0] / gp;
            let cp = cost[piv - 1];
            for i in 1..=m {
                if i != piv && g[i] != 0.0 {
                    cost[i - 1] -= cp * g[i] / gp;
                }
            }
            cost[piv - 1] = 0.0;
            eliminated[piv] = true;
            subs.push(Substitution {
                var: piv - 1,
                constant: g[0] / gp,
                coeffs: (1..=m).filter(|&i| i != piv && g[i] != 0.0).map(|i| (i - 1, g[i] / gp)).collect(),
            });
        }

        // drop the equality rows and renumber the diagonal blocks
        let mut blocks = p.blocks.clone();
        let mut row_map: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (b, kind) in p.blocks.iter().enumerate() {
            if let BlockKind::Diagonal(size) = kind {
                let mut next = 0;
                for r in 0..*size {
                    if !removed_rows.contains(&(b, r)) {
                        row_map.insert((b, r), next);
                        next += 1;
                    }
                }
                blocks[b] = BlockKind::Diagonal(next);
            }
        }
        let remap = |entries: &Vec<Entry>| -> Vec<Entry> {
            entries
                .iter()
                .filter_map(|&(b, r, c, v)| match p.blocks[b] {
                    BlockKind::Dense(_) => Some((b, r, c, v)),
                    BlockKind::Diagonal(_) => row_map.get(&(b, r)).map(|&nr| (b, nr, nr, v)),
                })
                .collect()
        };
        let kept: Vec<usize> = (1..=m).filter(|&i| !eliminated[i]).map(|i| i - 1).collect();
        let neg = |entries: Vec<Entry>| -> Vec<Entry> { entries.into_iter().map(|(b, r, c, v)| (b, r, c, -v)).collect() };
        let problem = Problem {
            blocks,
            b: kept.iter().map(|&i| -cost[i]).collect(),
            a: kept.iter().map(|&i| neg(remap(&f[i + 1]))).collect(),
            c: neg(remap(&f[0])),
            offset: -offset,
        };
        Ok(Reduced { problem, num_vars: m, kept, subs })
    }

    fn recover(&self, y: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.num_vars];
        for (k, &i) in self.kept.iter().enumerate() {
            x[i] = y.get(k).copied().unwrap_or(0.0);
        }
        for s in self.subs.iter().rev() {
            x[s.var] = s.constant - s.coeffs.iter().map(|&(j, g)| g * x[j]).sum::<f64>();
        }
        x
    }
}

/// Pairs of rows `(block, r1, r2)` in diagonal blocks whose data are exact
/// negatives of each other.
fn equality_pairs(p: &SdpaProblem, f: &[Vec<Entry>]) -> Vec<(usize, usize, usize)> {
    let mut rows: BTreeMap<(usize, usize), Vec<(usize, u64)>> = BTreeMap::new();
    for (mat, entries) in f.iter().enumerate() {
        for &(b, r, _, v) in entries {
            if matches!(p.blocks[b], BlockKind::Diagonal(_)) {
                rows.entry((b, r)).or_default().push((mat, v.to_bits()));
            }
        }
    }
    let mut index: BTreeMap<(usize, Vec<(usize, u64)>), usize> = BTreeMap::new();
    let mut pairs = Vec::new();
    for (&(b, r), sig) in &rows {
        let negated: Vec<(usize, u64)> = sig.iter().map(|&(mat, bits)| (mat, (-f64::from_bits(bits)).to_bits())).collect();
        if let Some(other) = index.remove(&(b, negated)) {
            pairs.push((b, other, r));
        } else {
            index.insert((b, sig.clone()), r);
        }
    }
    pairs
}

#[derive(Debug, Clone)]
enum Mat {
    Dense(DMatrix<f64>),
    Diag(Vec<f64>),
}

type BlockMats = Vec<Mat>;

fn zeros(blocks: &[BlockKind]) -> BlockMats {
    blocks
        .iter()
        .map(|k| match *k {
            BlockKind::Dense(n) => Mat::Dense(DMatrix::zeros(n, n)),
            BlockKind::Diagonal(n) => Mat::Diag(vec![0.0; n]),
        })
        .collect()
}

fn identity(blocks: &[BlockKind], scale: &[f64]) -> BlockMats {
    blocks
        .iter()
        .zip(scale)
        .map(|(k, &s)| match *k {
            BlockKind::Dense(n) => Mat::Dense(DMatrix::identity(n, n) * s),
            BlockKind::Diagonal(n) => Mat::Diag(vec![s; n]),
        })
        .collect()
}

fn add_entries(target: &mut BlockMats, entries: &[Entry], scale: f64) {
    for &(b, r, c, v) in entries {
        match &mut target[b] {
            Mat::Dense(m) => {
                m[(r, c)] += scale * v;
                if r != c {
                    m[(c, r)] += scale * v;
                }
            }
            Mat::Diag(d) => d[r] += scale * v,
        }
    }
}

/// `A•Y` for a sparse symmetric `A` and an arbitrary `Y`.
fn inner_entries(entries: &[Entry], y: &BlockMats) -> f64 {
    entries
        .iter()
        .map(|&(b, r, c, v)| match &y[b] {
            Mat::Dense(m) => {
                if r == c {
                    v * m[(r, r)]
                } else {
                    v * (m[(r, c)] + m[(c, r)])
                }
            }
            Mat::Diag(d) => v * d[r],
        })
        .sum()
}

fn inner(x: &BlockMats, y: &BlockMats) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| match (a, b) {
            (Mat::Dense(a), Mat::Dense(b)) => a.dot(b),
            (Mat::Diag(a), Mat::Diag(b)) => a.iter().zip(b).map(|(p, q)| p * q).sum(),
            _ => unreachable!("block kinds always agree"),
        })
        .sum()
}

fn norm(x: &BlockMats) -> f64 {
    libm::sqrt(inner(x, x))
}

fn lin(x: &BlockMats, a: f64, y: &BlockMats, b: f64) -> BlockMats {
    x.iter()
        .zip(y)
        .map(|(p, q)| match (p, q) {
            (Mat::Dense(p), Mat::Dense(q)) => Mat::Dense(p * a + q * b),
            (Mat::Diag(p), Mat::Diag(q)) => Mat::Diag(p.iter().zip(q).map(|(u, v)| a * u + b * v).collect()),
            _ => unreachable!(),
        })
        .collect()
}

fn mul(x: &BlockMats, y: &BlockMats) -> BlockMats {
    x.iter()
        .zip(y)
        .map(|(p, q)| match (p, q) {
            (Mat::Dense(p), Mat::Dense(q)) => Mat::Dense(p * q),
            (Mat::Diag(p), Mat::Diag(q)) => Mat::Diag(p.iter().zip(q).map(|(u, v)| u * v).collect()),
            _ => unreachable!(),
        })
        .collect()
}

fn symmetrize(x: &mut BlockMats) {
    for m in x.iter_mut() {
        if let Mat::Dense(d) = m {
            let t = d.transpose();
            *d += t;
            *d *= 0.5;
        }
    }
}

fn add_identity(x: &mut BlockMats, s: f64) {
    for m in x.iter_mut() {
        match m {
            Mat::Dense(d) => {
                for i in 0..d.nrows() {
                    d[(i, i)] += s;
                }
            }
            Mat::Diag(d) => d.iter_mut().for_each(|v| *v += s),
        }
    }
}

fn inverse(x: &BlockMats) -> Option<BlockMats> {
    x.iter()
        .map(|m| match m {
            Mat::Dense(d) => Cholesky::new(d.clone()).map(|c| Mat::Dense(c.inverse())),
            Mat::Diag(d) => {
                if d.iter().all(|&v| v > 0.0) {
                    Some(Mat::Diag(d.iter().map(|v| 1.0 / v).collect()))
                } else {
                    None
                }
            }
        })
        .collect()
}

fn is_pd(x: &BlockMats) -> bool {
    x.iter().all(|m| match m {
        Mat::Dense(d) => Cholesky::new(d.clone()).is_some(),
        Mat::Diag(d) => d.iter().all(|&v| v > 0.0),
    })
}

/// Largest `α` with `x + α·dx ⪰ 0` (infinite if the direction stays inside).
fn max_step(x: &BlockMats, dx: &BlockMats) -> Option<f64> {
    let mut alpha = f64::INFINITY;
    for (m, d) in x.iter().zip(dx) {
        match (m, d) {
            (Mat::Dense(m), Mat::Dense(d)) => {
                let l = Cholesky::new(m.clone())?.l();
                let t1 = l.solve_lower_triangular(d)?;
                let mut w = l.solve_lower_triangular(&t1.transpose())?;
                let wt = w.transpose();
                w += wt;
                w *= 0.5;
                let lmin = SymmetricEigen::new(w).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
                if lmin < 0.0 {
                    alpha = alpha.min(-1.0 / lmin);
                }
            }
            (Mat::Diag(m), Mat::Diag(d)) => {
                for (v, dv) in m.iter().zip(d) {
                    if *dv < 0.0 {
                        alpha = alpha.min(-v / dv);
                    }
                }
            }
            _ => unreachable!(),
        }
    }
    Some(alpha)
}

/// Per-block lists of `(var, expanded entries)` used to assemble the Schur
/// complement; both orientations of off-diagonal entries are listed.
struct SchurIndex {
    dense: Vec<Vec<(usize, Vec<(usize, usize, f64)>)>>,
    diag_rows: BTreeMap<(usize, usize), Vec<(usize, f64)>>,
}

impl SchurIndex {
    fn new(p: &Problem) -> Self {
        let mut dense: Vec<Vec<(usize, Vec<(usize, usize, f64)>)>> = vec![Vec::new(); p.blocks.len()];
        let mut diag_rows: BTreeMap<(usize, usize), Vec<(usize, f64)>> = BTreeMap::new();
        for (i, entries) in p.a.iter().enumerate() {
            let mut per_block: BTreeMap<usize, Vec<(usize, usize, f64)>> = BTreeMap::new();
            for &(b, r, c, v) in entries {
                match p.blocks[b] {
                    BlockKind::Dense(_) => {
                        let list = per_block.entry(b).or_default();
                        list.push((r, c, v));
                        if r != c {
                            list.push((c, r, v));
                        }
                    }
                    BlockKind::Diagonal(_) => diag_rows.entry((b, r)).or_default().push((i, v)),
                }
            }
            for (b, list) in per_block {
                dense[b].push((i, list));
            }
        }
        SchurIndex { dense, diag_rows }
    }

    /// `M_ij = Σ_blocks tr(A_i X A_j S^{-1})`.
    fn assemble(&self, m: usize, x: &BlockMats, sinv: &BlockMats) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(m, m);
        for (b, vars) in self.dense.iter().enumerate() {
            let (Mat::Dense(xm), Mat::Dense(sm)) = (&x[b], &sinv[b]) else { continue };
            for (ii, (i, ei)) in vars.iter().enumerate() {
                for (j, ej) in &vars[ii..] {
                    let mut acc = 0.0;
                    for &(a, bb, v) in ei {
                        for &(c, d, w) in ej {
                            acc += v * w * xm[(bb, c)] * sm[(d, a)];
                        }
                    }
                    let (lo, hi) = if i <= j { (*i, *j) } else { (*j, *i) };
                    out[(lo, hi)] += acc;
                }
            }
        }
        for (&(b, r), vars) in &self.diag_rows {
            let (Mat::Diag(xd), Mat::Diag(sd)) = (&x[b], &sinv[b]) else { continue };
            let h = xd[r] * sd[r];
            for (ii, &(i, v)) in vars.iter().enumerate() {
                for &(j, w) in &vars[ii..] {
                    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
                    out[(lo, hi)] += h * v * w;
                }
            }
        }
        for i in 0..m {
            for j in 0..i {
                out[(i, j)] = out[(j, i)];
            }
        }
        out
    }
}

/// Positive diagonal congruence per dense block and positive row scaling
/// on diagonal blocks, so that every diagonal position has largest
/// coefficient magnitude 1. Neither changes the feasible set in `y`.
fn scale_problem(p: &mut Problem) {
    let mut maxabs: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for entries in p.a.iter().chain(core::iter::once(&p.c)) {
        for &(b, r, c, v) in entries {
            if r == c {
                let e = maxabs.entry((b, r)).or_insert(0.0);
                *e = e.max(v.abs());
            }
        }
    }
    let factor = |b: usize, r: usize| -> f64 {
        match maxabs.get(&(b, r)) {
            Some(&v) if v > 0.0 => v,
            _ => 1.0,
        }
    };
    let apply = |entries: &mut Vec<Entry>, blocks: &[BlockKind]| {
        for e in entries.iter_mut() {
            let s = match blocks[e.0] {
                BlockKind::Dense(_) => 1.0 / libm::sqrt(factor(e.0, e.1) * factor(e.0, e.2)),
                BlockKind::Diagonal(_) => 1.0 / factor(e.0, e.1),
            };
            e.3 *= s;
        }
    };
    let blocks = p.blocks.clone();
    for entries in p.a.iter_mut() {
        apply(entries, &blocks);
    }
    apply(&mut p.c, &blocks);
}

/// Rescales every variable so its constraint matrix has unit Frobenius
/// norm; returns the factors `ν` with `y_original = z / ν`.
fn scale_columns(p: &mut Problem) -> Vec<f64> {
    p.a.iter_mut()
        .zip(p.b.iter_mut())
        .map(|(entries, b)| {
            let nu = fro(entries);
            if nu > 0.0 {
                entries.iter_mut().for_each(|e| e.3 /= nu);
                *b /= nu;
                nu
            } else {
                1.0
            }
        })
        .collect()
}

fn fro(entries: &[Entry]) -> f64 {
    libm::sqrt(entries.iter().map(|e| if e.1 == e.2 { e.3 * e.3 } else { 2.0 * e.3 * e.3 }).sum())
}

fn solve_reduced(problem: &Problem, opts: &IpmOptions) -> IpmResult {
    let mut p = problem.clone();
    scale_problem(&mut p);
    let mut col_scale = scale_columns(&mut p);
    let (mut res, balance) = run(&p, opts);
    // A second pass on a problem rebalanced with the first pass's iterates
    // often gets much further when X and S differ wildly in scale.
    if res.status != IpmStatus::Optimal {
        if let Some((x, s)) = balance {
            rebalance(&mut p, &x, &s);
            let nu = scale_columns(&mut p);
            let (second, _) = run(&p, opts);
            let better = second.status == IpmStatus::Optimal || merit_of(&second, opts) < merit_of(&res, opts);
            if better {
                col_scale.iter_mut().zip(&nu).for_each(|(a, b)| *a *= b);
                let iterations = res.iterations + second.iterations;
                let mut history = core::mem::take(&mut res.history);
                history.extend(second.history.iter().cloned());
                res = IpmResult { iterations, history, ..second };
            }
        }
    }
    res.x.iter_mut().zip(&col_scale).for_each(|(v, nu)| *v /= nu);
    res
}

fn merit_of(r: &IpmResult, opts: &IpmOptions) -> f64 {
    (r.rel_gap / opts.tol).max(r.primal_infeasibility / opts.feas_tol).max(r.dual_infeasibility / opts.feas_tol)
}

/// Congruence `D · D` per block with `d_r = (X_rr / S_rr)^(1/4)`, which makes
/// the diagonals of the rescaled `X` and `S` agree.
fn rebalance(p: &mut Problem, x: &BlockMats, s: &BlockMats) {
    let diag = |m: &Mat, r: usize| match m {
        Mat::Dense(d) => d[(r, r)],
        Mat::Diag(v) => v[r],
    };
    let d: Vec<Vec<f64>> = p
        .blocks
        .iter()
        .enumerate()
        .map(|(b, kind)| {
            (0..kind.size())
                .map(|r| {
                    let (xr, sr) = (diag(&x[b], r), diag(&s[b], r));
                    if xr > 0.0 && sr > 0.0 {
                        libm::sqrt(libm::sqrt(xr / sr))
                    } else {
                        1.0
                    }
                })
                .collect()
        })
        .collect();
    for entries in p.a.iter_mut().chain(core::iter::once(&mut p.c)) {
        for e in entries.iter_mut() {
            e.3 *= d[e.0][e.1] * d[e.0][e.2];
        }
    }
}

/// Runs the iteration on an already scaled problem. Also hands back the
/// best iterate's `X` and `S` when the run did not reach the targets.
fn run(p: &Problem, opts: &IpmOptions) -> (IpmResult, Option<(BlockMats, BlockMats)>) {
    let m = p.b.len();
    let nb = p.blocks.len();
    let total_dim: f64 = p.blocks.iter().map(|k| k.size() as f64).sum::<f64>().max(1.0);

    let mut cmat = zeros(&p.blocks);
    add_entries(&mut cmat, &p.c, 1.0);

    if m == 0 {
        let feasible = inverse(&cmat).is_some() || p.blocks.iter().all(|k| k.size() == 0);
        return (IpmResult {
            status: if feasible { IpmStatus::Optimal } else { IpmStatus::NumericalFailure("constant model is infeasible".into()) },
            primal: p.offset,
            dual: p.offset,
            gap: 0.0,
            rel_gap: 0.0,
            primal_infeasibility: 0.0,
            dual_infeasibility: 0.0,
            iterations: 0,
            x: Vec::new(),
            history: Vec::new(),
        }, None);
    }

    // initial point in the style of SDPT3
    let mut xi = vec![0.0; nb];
    let mut eta = vec![0.0; nb];
    for (b, kind) in p.blocks.iter().enumerate() {
        let n = kind.size() as f64;
        let sq = libm::sqrt(n);
        let mut x_scale = 10f64.max(sq);
        let mut s_scale = 10f64.max(sq);
        let cb: Vec<Entry> = p.c.iter().copied().filter(|e| e.0 == b).collect();
        s_scale = s_scale.max(fro(&cb));
        for (i, entries) in p.a.iter().enumerate() {
            let ab: Vec<Entry> = entries.iter().copied().filter(|e| e.0 == b).collect();
            if ab.is_empty() {
                continue;
            }
            let na = fro(&ab);
            x_scale = x_scale.max(sq * (1.0 + p.b[i].abs()) / (1.0 + na));
            s_scale = s_scale.max(na);
        }
        xi[b] = x_scale;
        eta[b] = s_scale;
    }
    let mut x = identity(&p.blocks, &xi);
    let mut s = identity(&p.blocks, &eta);
    let mut y = vec![0.0; m];

    let index = SchurIndex::new(&p);
    let bnorm = libm::sqrt(p.b.iter().map(|v| v * v).sum::<f64>());
    let cnorm = norm(&cmat);
    let at = |y: &[f64]| -> BlockMats {
        let mut out = zeros(&p.blocks);
        for (i, entries) in p.a.iter().enumerate() {
            if y[i] != 0.0 {
                add_entries(&mut out, entries, y[i]);
            }
        }
        out
    };
    let a_of = |yb: &BlockMats| -> Vec<f64> { p.a.iter().map(|e| inner_entries(e, yb)).collect() };

    let mut status = IpmStatus::MaxIterations;
    let mut iterations = 0;
    let mut stall = 0;
    let mut since_best = 0;
    let mut best: Option<(f64, Vec<f64>, f64, f64, f64, f64, BlockMats, BlockMats)> = None;
    let mut history = Vec::new();
    let (mut pobj, mut dobj, mut pinf, mut dinf);
    loop {
        let ax = a_of(&x);
        let rp: Vec<f64> = p.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let aty = at(&y);
        let rd = lin(&lin(&cmat, 1.0, &aty, -1.0), 1.0, &s, -1.0);
        pobj = p.b.iter().zip(&y).map(|(b, v)| b * v).sum::<f64>() + p.offset;
        dobj = inner(&cmat, &x) + p.offset;
        pinf = libm::sqrt(rp.iter().map(|v| v * v).sum::<f64>()) / (1.0 + bnorm);
        dinf = norm(&rd) / (1.0 + cnorm);
        let rel_gap = (dobj - pobj).abs() / 1f64.max((pobj.abs() + dobj.abs()) / 2.0);
        // 1.0 or less means every target is met
        let merit = (rel_gap / opts.tol).max(pinf / opts.feas_tol).max(dinf / opts.feas_tol);
        if best.as_ref().is_none_or(|b| merit < b.0) {
            best = Some((merit, y.clone(), pobj, dobj, pinf, dinf, x.clone(), s.clone()));
            since_best = 0;
        } else {
            since_best += 1;
        }
        if merit <= 1.0 {
            status = IpmStatus::Optimal;
            break;
        }
        // late in the run, rounding error can make the iterates drift away
        // from a point that was already good
        if since_best >= 8 && best.as_ref().is_some_and(|b| b.0 < 1e3) {
            status = IpmStatus::Stalled;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }
        iterations += 1;

        let mu = inner(&x, &s) / total_dim;
        let Some(sinv) = inverse(&s) else {
            status = IpmStatus::NumericalFailure("dual slack lost definiteness".into());
            break;
        };
        let schur = index.assemble(m, &x, &sinv);
        let Some(chol) = factor_schur(schur) else {
            status = IpmStatus::NumericalFailure("Schur complement is singular".into());
            break;
        };
        let xrd = mul(&x, &rd);

        // σμ I - K enters as (X Rd + K - σμ I) S^{-1} on the right-hand side
        let direction = |sigma_mu: f64, k: Option<&BlockMats>| -> (Vec<f64>, BlockMats, BlockMats) {
            let mut g = xrd.clone();
            if let Some(k) = k {
                g = lin(&g, 1.0, k, 1.0);
            }
            add_identity(&mut g, -sigma_mu);
            let mut g = mul(&g, &sinv);
            symmetrize(&mut g);
            let rhs: Vec<f64> = p.b.iter().zip(a_of(&g)).map(|(b, v)| b + v).collect();
            let mut dy: Vec<f64> = chol.solve(&DVector::from_vec(rhs)).iter().copied().collect();
            let complete = |dy: &[f64]| -> (BlockMats, BlockMats) {
                let ds = lin(&rd, 1.0, &at(dy), -1.0);
                // ΔX = (σμ I - K - X ΔS) S^{-1} - X
                let mut t = mul(&x, &ds);
                if let Some(k) = k {
                    t = lin(&t, 1.0, k, 1.0);
                }
                add_identity(&mut t, -sigma_mu);
                let mut dx = lin(&mul(&t, &sinv), -1.0, &x, -1.0);
                symmetrize(&mut dx);
                (ds, dx)
            };
            let (mut ds, mut dx) = complete(&dy);
            // refine Δy against the primal equations A(ΔX) = r_p, which the
            // Schur solve only meets up to its conditioning
            let residual = |dx: &BlockMats| -> Vec<f64> { rp.iter().zip(a_of(dx)).map(|(r, a)| r - a).collect() };
            let size = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();
            let mut resid = residual(&dx);
            for _ in 0..6 {
                let corr = chol.solve(&DVector::from_vec(resid.clone()));
                let trial: Vec<f64> = dy.iter().zip(corr.iter()).map(|(v, c)| v + c).collect();
                let (ts, tx) = complete(&trial);
                let next = residual(&tx);
                if size(&next) >= size(&resid) {
                    break;
                }
                (dy, ds, dx, resid) = (trial, ts, tx, next);
            }
            (dy, dx, ds)
        };

        let (_, dxa, dsa) = direction(0.0, None);
        let (Some(ap), Some(ad)) = (max_step(&x, &dxa), max_step(&s, &dsa)) else {
            status = IpmStatus::NumericalFailure("iterate left the cone".into());
            break;
        };
        let ap = ap.min(1.0);
        let ad = ad.min(1.0);
        let mu_aff = inner(&lin(&x, 1.0, &dxa, ap), &lin(&s, 1.0, &dsa, ad)) / total_dim;
        let sigma = libm::pow((mu_aff / mu).clamp(0.0, 1.0), 3.0);
        // no point centering far below what the gap target needs; tiny μ
        // only costs accuracy in the Schur solves
        let mu_floor = 0.25 * opts.tol * 1f64.max((pobj.abs() + dobj.abs()) / 2.0) / total_dim;
        let k = mul(&dxa, &dsa);
        let (dy, dx, ds) = direction((sigma * mu).max(mu_floor.min(mu)), Some(&k));
        let (Some(ap), Some(ad)) = (max_step(&x, &dx), max_step(&s, &ds)) else {
            status = IpmStatus::NumericalFailure("iterate left the cone".into());
            break;
        };
        let mut ap = (opts.step_fraction * ap).min(1.0);
        let mut ad = (opts.step_fraction * ad).min(1.0);
        // the eigenvalue test can be fooled by rounding; insist on a
        // successful factorization of the new iterates
        let mut x_next = lin(&x, 1.0, &dx, ap);
        let mut s_next = lin(&s, 1.0, &ds, ad);
        let mut tries = 0;
        while !is_pd(&x_next) && tries < 30 {
            ap *= 0.8;
            x_next = lin(&x, 1.0, &dx, ap);
            tries += 1;
        }
        tries = 0;
        while !is_pd(&s_next) && tries < 30 {
            ad *= 0.8;
            s_next = lin(&s, 1.0, &ds, ad);
            tries += 1;
        }
        history.push(IpmIterate {
            primal: pobj,
            dual: dobj,
            primal_infeasibility: pinf,
            dual_infeasibility: dinf,
            mu,
            step_primal: ap,
            step_dual: ad,
        });
        x = x_next;
        s = s_next;
        for (v, d) in y.iter_mut().zip(&dy) {
            *v += ad * d;
        }
        if ap.min(ad) < 1e-8 {
            stall += 1;
            if stall >= 5 {
                status = IpmStatus::Stalled;
                break;
            }
        } else {
            stall = 0;
        }
    }

    let mut balance = None;
    if status != IpmStatus::Optimal {
        if let Some((merit, by, bp, bd, bpi, bdi, bx, bs)) = best {
            if merit <= 1.0 {
                status = IpmStatus::Optimal;
            } else {
                balance = Some((bx, bs));
            }
            y = by;
            pobj = bp;
            dobj = bd;
            pinf = bpi;
            dinf = bdi;
        }
    }
    let gap = dobj - pobj;
    (IpmResult {
        status,
        primal: pobj,
        dual: dobj,
        gap,
        rel_gap: gap.abs() / 1f64.max((pobj.abs() + dobj.abs()) / 2.0),
        primal_infeasibility: pinf,
        dual_infeasibility: dinf,
        iterations,
        x: y,
        history,
    }, balance)
}

fn factor_schur(mut m: DMatrix<f64>) -> Option<Cholesky<f64, nalgebra::Dyn>> {
    let n = m.nrows();
    let maxdiag = (0..n).map(|i| m[(i, i)].abs()).fold(0.0, f64::max).max(1e-300);
    let mut shift = 0.0;
    for _ in 0..8 {
        if let Some(c) = Cholesky::new(m.clone()) {
            return Some(c);
        }
        let next = if shift == 0.0 { 1e-14 * maxdiag } else { shift * 100.0 };
        for i in 0..n {
            m[(i, i)] += next - shift;
        }
        shift = next;
    }
    None
}

impl From<IpmStatus> for Error {
    fn from(s: IpmStatus) -> Self {
        Error::Solver(s.as_str().to_string())
    }
}

/// Convenience used by tests and the exporter round trip.
pub fn sdpa_entry(mat: usize, block: usize, row: usize, col: usize, value: f64) -> SdpaEntry {
    SdpaEntry { mat, block, row, col, value }
}

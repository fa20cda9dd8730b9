//! The symmetry-reduced semidefinite program for codes in `P(F_q^n)`.
//!
//! A code `C` defines `x_{sti} = |{(x,y) ∈ C² : dim x = s, dim y = t,
//! dim(x∩y) = i}| / |C|`. These numbers satisfy `Σ_s x_{sss} = 1`, sum to
//! `|C|`, vanish on pairs closer than `d`, and make every block `F_k`
//! (`k = 0..⌊n/2⌋`, rows and columns indexed by `s, t ∈ k..n-k`) positive
//! semidefinite. Only `s <= t` is stored; `x_{tsi} = x_{sti}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Result};
use crate::optim::ipm::{ipm_solve, IpmOptions, IpmResult, IpmStatus};
use crate::optim::lp::{LinearRow, RowTag, Sense};
use crate::optim::sdp::{PsdBlock, SemidefiniteProgram};
use crate::projective_lp::CapFn;
use crate::qcombinat::{
    ball_slice_injection, ball_slice_subspace, qbinom, realizable, Exact, FieldOrder, Metric, ProjectiveParams, QBinomTable,
};
use crate::qhahn::{hahn_family, HahnPolynomial};

/// A canonical triple `(s, t, i)` with `s <= t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TripleIndex {
    pub s: usize,
    pub t: usize,
    pub i: usize,
}

impl TripleIndex {
    pub fn new(s: usize, t: usize, i: usize) -> Self {
        let (s, t) = if s <= t { (s, t) } else { (t, s) };
        TripleIndex { s, t, i }
    }

    /// Number of ordered pairs `(s,t)`, `(t,s)` the triple stands for.
    pub fn multiplicity(self) -> usize {
        if self.s == self.t {
            1
        } else {
            2
        }
    }

    pub fn is_diagonal(self) -> bool {
        self.s == self.t && self.t == self.i
    }

    pub fn name(self) -> alloc::string::String {
        format!("x_{}_{}_{}", self.s, self.t, self.i)
    }
}

/// Realizable canonical triples that are diagonal or at distance `>= d`.
pub fn omega(n: usize, d: usize, metric: Metric) -> Vec<TripleIndex> {
    let mut out = Vec::new();
    for s in 0..=n {
        for t in s..=n {
            for i in 0..=s {
                let tau = TripleIndex { s, t, i };
                if realizable(n, s, t, i) && (tau.is_diagonal() || metric.distance(s, t, i) >= d) {
                    out.push(tau);
                }
            }
        }
    }
    out
}

/// Coefficient of `x_{sti}` in `(F_k)_{st}`, up to a positive factor that
/// depends only on `k`:
/// `[t-k, s-k] / ([n,t][t,s][n-2k, s-k]) · q^{-k(s-k)} · Q_k(n,s,t; s-i)`.
pub fn fk_entry_coeff(k: usize, s: usize, t: usize, i: usize, n: usize, q: FieldOrder) -> Result<Exact> {
    if s > t || k > s || t + k > n {
        return Err(invalid!("F_k entry needs k <= s <= t <= n-k, got k={k} s={s} t={t} n={n}"));
    }
    if !realizable(n, s, t, i) {
        return Err(invalid!("triple ({s},{t},{i}) is not realizable in dimension {n}"));
    }
    let family = hahn_family(n, s, t, q)?;
    let table = QBinomTable::new(q, n);
    Ok(fk_coeff_with(&table, &family[k], k, s, t, i))
}

fn fk_coeff_with(table: &QBinomTable, qk: &HahnPolynomial, k: usize, s: usize, t: usize, i: usize) -> Exact {
    let n = qk.n as i64;
    let (k, s, t) = (k as i64, s as i64, t as i64);
    let num = table.get(t - k, s - k);
    let den = table.get(n, t) * table.get(t, s) * table.get(n - 2 * k, s - k);
    Exact::new(num, den) * table.q().pow_exact(-k * (s - k)) * qk.eval(s as usize - i)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SdpOptions {
    /// `Σ_{t,i} x_{sti} <= cap(n, s, δ)` for every `s`.
    pub dim_cuts: bool,
    /// The ball-packing rows of the linear program, written in the `x_{sti}`.
    /// Numerically poorly behaved; meant for export and experiments.
    pub packing_rows: bool,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions { dim_cuts: true, packing_rows: false }
    }
}

/// Per-dimension sums `D_s = Σ_{t,i} x_{sti}` as coefficient lists; an
/// off-diagonal canonical variable appears in the rows of both dimensions.
fn dimension_sums(n: usize, vars: &[TripleIndex]) -> Vec<Vec<(usize, Exact)>> {
    let mut rows = alloc::vec![Vec::new(); n + 1];
    for (j, tau) in vars.iter().enumerate() {
        rows[tau.s].push((j, Exact::one()));
        if tau.s != tau.t {
            rows[tau.t].push((j, Exact::one()));
        }
    }
    rows
}

pub fn sdp_model(p: &ProjectiveParams, opts: SdpOptions, cap: CapFn<'_>) -> SemidefiniteProgram {
    let n = p.n;
    let q = p.q;
    let vars = omega(n, p.d, p.metric);
    let index: BTreeMap<TripleIndex, usize> = vars.iter().enumerate().map(|(j, t)| (*t, j)).collect();
    let mut sdp = SemidefiniteProgram {
        var_names: vars.iter().map(|t| t.name()).collect(),
        objective: vars.iter().map(|t| Exact::from_integer(BigInt::from(t.multiplicity()))).collect(),
        rows: Vec::new(),
        blocks: Vec::new(),
    };
    let diag: Vec<(usize, Exact)> = vars.iter().enumerate().filter(|(_, t)| t.is_diagonal()).map(|(j, _)| (j, Exact::one())).collect();
    sdp.rows.push(LinearRow::new(RowTag::Normalization, 0, diag, Sense::Eq, Exact::one()));

    let table = QBinomTable::new(q, n);
    let mut families: BTreeMap<(usize, usize), Vec<HahnPolynomial>> = BTreeMap::new();
    for k in 0..=n / 2 {
        let mut block = PsdBlock::new(n - 2 * k + 1);
        for s in k..=n - k {
            for t in s..=n - k {
                let family = families.entry((s, t)).or_insert_with(|| hahn_family(n, s, t, q).expect("s <= t <= n"));
                for i in 0..=s {
                    if let Some(&j) = index.get(&TripleIndex { s, t, i }) {
                        let c = fk_coeff_with(&table, &family[k], k, s, t, i);
                        block.push(Some(j), s - k, t - k, c);
                    }
                }
            }
        }
        sdp.blocks.push(block);
    }

    let sums = dimension_sums(n, &vars);
    if opts.dim_cuts {
        let delta = p.grassmann_delta();
        for (s, coeffs) in sums.iter().enumerate() {
            let rhs = Exact::from_integer(cap(n, s, delta));
            sdp.rows.push(LinearRow::new(RowTag::DimensionCap, s, coeffs.clone(), Sense::Le, rhs));
        }
    }
    if opts.packing_rows {
        let e = p.packing_radius();
        for k in 0..=n {
            let mut acc: BTreeMap<usize, Exact> = BTreeMap::new();
            for (s, coeffs) in sums.iter().enumerate() {
                let c = match p.metric {
                    Metric::Subspace => ball_slice_subspace(n, s, k, e, q),
                    Metric::Injection => ball_slice_injection(n, s, k, e, q),
                };
                if c.is_zero() {
                    continue;
                }
                let c = Exact::from_integer(c);
                for (j, v) in coeffs {
                    *acc.entry(*j).or_insert_with(Exact::zero) += &c * v;
                }
            }
            let rhs = Exact::from_integer(qbinom(n as i64, k as i64, q));
            sdp.rows.push(LinearRow::new(RowTag::Packing, k, acc.into_iter().collect(), Sense::Le, rhs));
        }
    }
    sdp
}

/// Outcome of one SDP solve. `floored` is only set when the solver
/// converged; it is `⌊primal + 10·|gap|⌋`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpBoundReport {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    pub floored: Option<i64>,
    pub iterations: usize,
    pub status: IpmStatus,
    pub x: Vec<f64>,
}

impl SdpBoundReport {
    pub fn from_ipm(r: IpmResult) -> Self {
        let floored = (r.status == IpmStatus::Optimal).then(|| libm::floor(r.primal + 10.0 * libm::fabs(r.gap)) as i64);
        SdpBoundReport {
            primal: r.primal,
            dual: r.dual,
            gap: r.gap,
            floored,
            iterations: r.iterations,
            status: r.status,
            x: r.x,
        }
    }
}

pub fn solve_sdp(model: &SemidefiniteProgram, tol: f64) -> Result<SdpBoundReport> {
    Ok(SdpBoundReport::from_ipm(ipm_solve(model, &IpmOptions::with_tol(tol))?))
}

/// The triple distribution of an explicit code, given as the dimensions of
/// its members and a function returning `dim(x∩y)` for two members.
pub fn code_distribution(dims: &[usize], meet: impl Fn(usize, usize) -> usize) -> BTreeMap<TripleIndex, Exact> {
    let mut counts: BTreeMap<TripleIndex, BigInt> = BTreeMap::new();
    for (a, &s) in dims.iter().enumerate() {
        for (b, &t) in dims.iter().enumerate() {
            if s <= t {
                *counts.entry(TripleIndex { s, t, i: meet(a, b) }).or_insert_with(BigInt::zero) += 1;
            }
        }
    }
    let size = BigInt::from(dims.len());
    counts.into_iter().map(|(k, v)| (k, Exact::new(v, size.clone()))).collect()
}

/// Lays a triple distribution out over the model's variables; `None` if it
/// uses a triple outside the model.
pub fn distribution_vector(model: &SemidefiniteProgram, dist: &BTreeMap<TripleIndex, Exact>) -> Option<Vec<Exact>> {
    let mut x = alloc::vec![Exact::zero(); model.num_vars()];
    for (tau, v) in dist {
        let j = model.var_names.iter().position(|nm| *nm == tau.name())?;
        x[j] = v.clone();
    }
    Some(x)
}

/// Smallest eigenvalue of every block at `x`, computed in floating point.
pub fn block_min_eigenvalues(model: &SemidefiniteProgram, x: &[Exact]) -> Vec<f64> {
    model
        .blocks
        .iter()
        .map(|b| {
            let m = b.evaluate(x);
            let size = b.size;
            let dm = nalgebra::DMatrix::from_fn(size, size, |r, c| m[r][c].to_f64().unwrap_or(f64::NAN));
            // normalize by the diagonal so tiny entries do not hide in rounding
            let scale: Vec<f64> = (0..size).map(|r| {
                let v = dm[(r, r)].abs();
                if v > 0.0 { 1.0 / libm::sqrt(v) } else { 1.0 }
            }).collect();
            let sm = nalgebra::DMatrix::from_fn(size, size, |r, c| dm[(r, c)] * scale[r] * scale[c]);
            nalgebra::SymmetricEigen::new(sm).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_membership() {
        let om = omega(4, 3, Metric::Subspace);
        assert!(om.contains(&TripleIndex::new(1, 2, 0)));
        assert!(!om.contains(&TripleIndex::new(1, 2, 1)));
        let all = omega(2, 1, Metric::Subspace);
        let realizable_count = (0..=2).flat_map(|s| (s..=2).flat_map(move |t| (0..=s).map(move |i| (s, t, i)))).filter(|&(s, t, i)| realizable(2, s, t, i)).count();
        assert_eq!(all.len(), realizable_count);
    }

    #[test]
    fn k0_coefficient() {
        let q = FieldOrder::BINARY;
        let c = fk_entry_coeff(0, 1, 3, 0, 5, q).unwrap();
        assert_eq!(c, Exact::new(BigInt::one(), qbinom(5, 1, q) * qbinom(5, 3, q)));
        assert!(fk_entry_coeff(1, 2, 2, 0, 4, q).unwrap() < Exact::zero());
        assert!(fk_entry_coeff(2, 1, 2, 0, 4, q).is_err());
    }

    #[test]
    fn block_shapes() {
        let cap = crate::projective_lp::combined_cap(FieldOrder::BINARY);
        let p = ProjectiveParams::new(5, 3, FieldOrder::BINARY, Metric::Subspace).unwrap();
        let m = sdp_model(&p, SdpOptions::default(), &cap);
        let sizes: Vec<usize> = m.blocks.iter().map(|b| b.size).collect();
        assert_eq!(sizes, alloc::vec![6, 4, 2]);
        assert_eq!(m.rows.len(), 1 + 6);
    }
}

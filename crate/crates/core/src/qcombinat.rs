//! Exact q-combinatorics: Gaussian binomials, q-Hahn weights, pair counts
//! and ball volumes in the projective space `P(F_q^n)` for the subspace
//! and injection metrics.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};

/// Exact rational scalar used for every model coefficient.
pub type Exact = BigRational;

/// Order `q` of the underlying finite field. Only `q >= 2` is checked; the
/// formulas never need `q` to be a prime power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldOrder(u32);

impl FieldOrder {
    pub const BINARY: FieldOrder = FieldOrder(2);

    pub fn new(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(invalid!("field order q = {q} must be at least 2"));
        }
        Ok(FieldOrder(q))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// `q^e` as an integer.
    pub fn pow(self, e: u32) -> BigInt {
        num_traits::pow(BigInt::from(self.0), e as usize)
    }

    /// `q^e` for a possibly negative exponent.
    pub fn pow_exact(self, e: i64) -> Exact {
        let p = self.pow(e.unsigned_abs() as u32);
        if e >= 0 {
            Exact::from_integer(p)
        } else {
            Exact::new(BigInt::one(), p)
        }
    }
}

impl fmt::Display for FieldOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Distance on `P(F_q^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// `dim(U+V) - dim(U∩V)`
    Subspace,
    /// `max(dim U, dim V) - dim(U∩V)`
    Injection,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Subspace => "subspace",
            Metric::Injection => "injection",
        }
    }

    /// Distance between subspaces of dimensions `s` and `t` meeting in
    /// dimension `i`.
    pub fn distance(self, s: usize, t: usize, i: usize) -> usize {
        match self {
            Metric::Subspace => s + t - 2 * i,
            Metric::Injection => s.max(t) - i,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters of `A_q(n, k, 2δ)`: constant-dimension codes of dimension `k`
/// in `F_q^n` with subspace distance at least `2δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GrassmannParams {
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub q: FieldOrder,
}

impl GrassmannParams {
    pub fn new(n: usize, k: usize, delta: usize, q: FieldOrder) -> Result<Self> {
        if k > n {
            return Err(invalid!("k = {k} exceeds n = {n}"));
        }
        if delta < 1 {
            return Err(invalid!("delta must be at least 1"));
        }
        Ok(GrassmannParams { n, k, delta, q })
    }

    /// `min(k, n - k)`; the bound for `k` and `n - k` coincide by duality.
    pub fn normalized_k(&self) -> usize {
        self.k.min(self.n - self.k)
    }
}

/// Parameters of `A_q(n, d)` (subspace metric) or `A^inj_q(n, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjectiveParams {
    pub n: usize,
    pub d: usize,
    pub q: FieldOrder,
    pub metric: Metric,
}

impl ProjectiveParams {
    pub fn new(n: usize, d: usize, q: FieldOrder, metric: Metric) -> Result<Self> {
        if d < 1 {
            return Err(invalid!("minimum distance d must be at least 1"));
        }
        if n >= 1 && d > n {
            return Err(invalid!("minimum distance d = {d} exceeds n = {n}"));
        }
        Ok(ProjectiveParams { n, d, q, metric })
    }

    /// Packing radius `e = ⌊(d-1)/2⌋`; balls of this radius around distinct
    /// codewords are disjoint for either metric.
    pub fn packing_radius(&self) -> usize {
        (self.d - 1) / 2
    }

    /// Minimum distance `δ` (in `A_q(n, k, 2δ)` units) forced on the
    /// codewords of one fixed dimension.
    pub fn grassmann_delta(&self) -> usize {
        match self.metric {
            Metric::Subspace => self.d.div_ceil(2),
            Metric::Injection => self.d,
        }
    }
}

/// Gaussian binomial coefficient `[n choose k]_q`; zero outside `0 <= k <= n`.
pub fn qbinom(n: i64, k: i64, q: FieldOrder) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k) as u32;
    let n = n as u32;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= q.pow(n - j) - 1u32;
        den *= q.pow(k - j) - 1u32;
    }
    num / den
}

/// Table of `[m choose j]_q` for `0 <= j <= m <= n_max`, filled by the
/// q-Pascal recurrence. Model builders keep one per build instead of
/// sharing a global memo.
#[derive(Debug, Clone)]
pub struct QBinomTable {
    q: FieldOrder,
    rows: Vec<Vec<BigInt>>,
}

impl QBinomTable {
    pub fn new(q: FieldOrder, n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
        for m in 0..=n_max {
            let mut row = Vec::with_capacity(m + 1);
            for j in 0..=m {
                if j == 0 || j == m {
                    row.push(BigInt::one());
                } else {
                    let prev = &rows[m - 1];
                    row.push(&prev[j - 1] + q.pow(j as u32) * &prev[j]);
                }
            }
            rows.push(row);
        }
        QBinomTable { q, rows }
    }

    pub fn q(&self) -> FieldOrder {
        self.q
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `[n choose k]_q`, zero outside the table's natural range.
    pub fn get(&self, n: i64, k: i64) -> BigInt {
        if n < 0 || k < 0 || k > n {
            return BigInt::zero();
        }
        match self.rows.get(n as usize) {
            Some(row) => row[k as usize].clone(),
            None => qbinom(n, k, self.q),
        }
    }
}

/// The bracket variable `[u] = q^{1-u} [u choose 1]_q = (q - q^{1-u})/(q - 1)`.
pub fn bracket(u: usize, q: FieldOrder) -> Exact {
    let qq = Exact::from_integer(BigInt::from(q.get()));
    let num = &qq - q.pow_exact(1 - u as i64);
    num / (qq - Exact::one())
}

fn check_hahn_range(n: usize, s: usize, t: usize) -> Result<()> {
    if s > t || t > n {
        return Err(invalid!("q-Hahn parameters need 0 <= s <= t <= n, got n={n} s={s} t={t}"));
    }
    Ok(())
}

/// q-Hahn weight `w(n,s,t;i) = [s i][n-s t-s+i] q^{i(t-s+i)}`: the number of
/// `t`-spaces meeting a fixed `s`-space in dimension `s - i`.
pub fn hahn_weight(n: usize, s: usize, t: usize, i: usize, q: FieldOrder) -> Result<BigInt> {
    check_hahn_range(n, s, t)?;
    if i > s.min(n - t) {
        return Err(invalid!("weight index i = {i} outside [0, {}]", s.min(n - t)));
    }
    Ok(hahn_weight_unchecked(n, s, t, i, q))
}

pub(crate) fn hahn_weight_unchecked(n: usize, s: usize, t: usize, i: usize, q: FieldOrder) -> BigInt {
    let (n, s, t, i) = (n as i64, s as i64, t as i64, i as i64);
    qbinom(s, i, q) * qbinom(n - s, t - s + i, q) * q.pow((i * (t - s + i)) as u32)
}

/// Whether subspaces of dimensions `s`, `t` in `F_q^n` can meet in dimension
/// `i`: `max(0, s+t-n) <= i <= min(s,t)`.
pub fn realizable(n: usize, s: usize, t: usize, i: usize) -> bool {
    s <= n && t <= n && i <= s.min(t) && s + t <= n + i
}

/// `N_sti`: ordered pairs `(x, y)` with `dim x = s`, `dim y = t`,
/// `dim(x ∩ y) = i`. Zero for unrealizable triples.
pub fn pair_count(n: usize, s: usize, t: usize, i: usize, q: FieldOrder) -> BigInt {
    if !realizable(n, s, t, i) {
        return BigInt::zero();
    }
    let (lo, hi) = (s.min(t), s.max(t));
    qbinom(n as i64, lo as i64, q) * hahn_weight_unchecked(n, lo, hi, lo - i, q)
}

/// `|B(V, e)|` for the subspace metric, `dim V = i`.
pub fn ball_size_subspace(n: usize, i: usize, e: usize, q: FieldOrder) -> BigInt {
    let (n, i) = (n as i64, i as i64);
    let mut total = BigInt::zero();
    for l in 0..=e as i64 {
        for j in 0..=l {
            if j > i || l - j > n - i {
                continue;
            }
            total += qbinom(i, j, q) * qbinom(n - i, l - j, q) * q.pow((j * (l - j)) as u32);
        }
    }
    total
}

/// `c(i,k,e) = |B(V, e) ∩ G_q(n,k)|` for the subspace metric, `dim V = i`.
pub fn ball_slice_subspace(n: usize, i: usize, k: usize, e: usize, q: FieldOrder) -> BigInt {
    let (n, i, k, e) = (n as i64, i as i64, k as i64, e as i64);
    let lo = num_integer::Integer::div_ceil(&(i + k - e), &2).max(0);
    let mut total = BigInt::zero();
    for j in lo..=k.min(i) {
        if k - j > n - i {
            continue;
        }
        total += qbinom(i, j, q) * qbinom(n - i, k - j, q) * q.pow(((i - j) * (k - j)) as u32);
    }
    total
}

/// `|B^inj(V, e)|` for the injection metric, `dim V = i`.
pub fn ball_size_injection(n: usize, i: usize, e: usize, q: FieldOrder) -> BigInt {
    let (n, i) = (n as i64, i as i64);
    let mut total = BigInt::zero();
    for r in 0..=e as i64 {
        total += q.pow((r * r) as u32) * qbinom(i, r, q) * qbinom(n - i, r, q);
        for alpha in 1..=r {
            let term = qbinom(i, r, q) * qbinom(n - i, r - alpha, q)
                + qbinom(i, r - alpha, q) * qbinom(n - i, r, q);
            total += q.pow((r * (r - alpha)) as u32) * term;
        }
    }
    total
}

/// `c^inj(i,k,e) = |B^inj(V, e) ∩ G_q(n,k)|`, `dim V = i`.
pub fn ball_slice_injection(n: usize, i: usize, k: usize, e: usize, q: FieldOrder) -> BigInt {
    let (n, i, k) = (n as i64, i as i64, k as i64);
    let alpha = (i - k).abs();
    let mut total = BigInt::zero();
    for r in alpha..=e as i64 {
        let binoms = if i >= k {
            qbinom(i, r, q) * qbinom(n - i, r - alpha, q)
        } else {
            qbinom(i, r - alpha, q) * qbinom(n - i, r, q)
        };
        total += q.pow((r * (r - alpha)) as u32) * binoms;
    }
    total
}

/// Number of subspaces of `F_q^n` of every dimension.
pub fn projective_size(n: usize, q: FieldOrder) -> BigInt {
    (0..=n as i64).map(|k| qbinom(n as i64, k, q)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q2: FieldOrder = FieldOrder::BINARY;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn qbinom_values() {
        assert_eq!(qbinom(4, 0, Q2), int(1));
        assert_eq!(qbinom(4, 2, Q2), int(35));
        assert_eq!(qbinom(5, 2, Q2), int(155));
        assert_eq!(qbinom(3, 5, Q2), int(0));
        assert_eq!(qbinom(-1, 0, Q2), int(0));
        assert_eq!(qbinom(6, 3, Q2), int(1395));
    }

    #[test]
    fn table_matches_product_formula() {
        for q in [2, 3, 4] {
            let q = FieldOrder::new(q).unwrap();
            let table = QBinomTable::new(q, 12);
            for n in -1..=14i64 {
                for k in -1..=n + 1 {
                    assert_eq!(table.get(n, k), qbinom(n, k, q), "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn field_order_rejects_small() {
        assert!(FieldOrder::new(1).is_err());
        assert!(FieldOrder::new(0).is_err());
    }

    #[test]
    fn bracket_values() {
        assert_eq!(bracket(0, Q2), Exact::zero());
        assert_eq!(bracket(1, Q2), Exact::one());
        assert_eq!(bracket(2, Q2), Exact::new(int(3), int(2)));
    }

    #[test]
    fn hahn_weight_values() {
        assert_eq!(hahn_weight(4, 2, 2, 0, Q2).unwrap(), int(1));
        assert_eq!(hahn_weight(4, 2, 2, 1, Q2).unwrap(), int(18));
        assert_eq!(hahn_weight(4, 2, 2, 2, Q2).unwrap(), int(16));
        assert!(hahn_weight(4, 2, 2, 3, Q2).is_err());
        assert!(hahn_weight(4, 3, 2, 0, Q2).is_err());
    }

    #[test]
    fn pair_count_values() {
        assert_eq!(pair_count(4, 2, 2, 2, Q2), int(35));
        assert_eq!(pair_count(4, 2, 2, 1, Q2), int(630));
        // a line and a hyperplane of F_2^4 meeting trivially: 15 lines x 8
        assert_eq!(pair_count(4, 1, 3, 0, Q2), int(120));
        assert_eq!(pair_count(4, 3, 3, 1, Q2), int(0));
    }

    #[test]
    fn ball_values() {
        assert_eq!(ball_size_subspace(4, 2, 0, Q2), int(1));
        // V itself, its 3 lines and the 3 hyperplanes through it
        assert_eq!(ball_size_subspace(4, 2, 1, Q2), int(7));
        assert_eq!(ball_size_subspace(4, 2, 8, Q2), projective_size(4, Q2));
        assert_eq!(ball_slice_subspace(6, 0, 2, 2, Q2), int(651));
        assert_eq!(ball_slice_subspace(6, 0, 2, 1, Q2), int(0));
        assert_eq!(ball_slice_injection(7, 3, 3, 1, Q2), int(211));
        assert_eq!(ball_slice_injection(7, 3, 3, 0, Q2), int(1));
        assert_eq!(ball_slice_injection(7, 3, 4, 0, Q2), int(0));
    }

    #[test]
    fn injection_slice_on_diagonal_is_grassmann_sphere() {
        for q in [2u32, 3] {
            let q = FieldOrder::new(q).unwrap();
            for n in 1..=8usize {
                for k in 0..=n {
                    for e in 0..=n {
                        let sphere: BigInt = (0..=e as i64)
                            .map(|r| {
                                q.pow((r * r) as u32)
                                    * qbinom(k as i64, r, q)
                                    * qbinom((n - k) as i64, r, q)
                            })
                            .sum();
                        assert_eq!(ball_slice_injection(n, k, k, e, q), sphere);
                    }
                }
            }
        }
    }

    #[test]
    fn slices_sum_to_balls() {
        for q in [2u32, 3] {
            let q = FieldOrder::new(q).unwrap();
            for n in 0..=9usize {
                for i in 0..=n {
                    for e in 0..=2 * n {
                        let sub: BigInt = (0..=n).map(|k| ball_slice_subspace(n, i, k, e, q)).sum();
                        assert_eq!(sub, ball_size_subspace(n, i, e, q), "n={n} i={i} e={e}");
                        let inj: BigInt = (0..=n).map(|k| ball_slice_injection(n, i, k, e, q)).sum();
                        assert_eq!(inj, ball_size_injection(n, i, e, q), "n={n} i={i} e={e}");
                    }
                }
            }
        }
    }

    #[test]
    fn weights_and_pairs_sum_to_totals() {
        for q in [2u32, 3] {
            let q = FieldOrder::new(q).unwrap();
            for n in 0..=10usize {
                for s in 0..=n {
                    for t in 0..=n {
                        let total: BigInt = (0..=n).map(|i| pair_count(n, s, t, i, q)).sum();
                        assert_eq!(total, qbinom(n as i64, s as i64, q) * qbinom(n as i64, t as i64, q));
                        for i in 0..=n {
                            assert_eq!(pair_count(n, s, t, i, q), pair_count(n, t, s, i, q));
                        }
                        if s <= t {
                            let w: BigInt = (0..=s.min(n - t))
                                .map(|i| hahn_weight(n, s, t, i, q).unwrap())
                                .sum();
                            assert_eq!(w, qbinom(n as i64, t as i64, q));
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn qbinom_symmetry_and_pascal(n in 1i64..30, k in 0i64..30, q in 2u32..6) {
            let q = FieldOrder::new(q).unwrap();
            prop_assert_eq!(qbinom(n, k, q), qbinom(n, n - k, q));
            let pascal = qbinom(n - 1, k - 1, q) + q.pow(k.max(0) as u32) * qbinom(n - 1, k, q);
            prop_assert_eq!(qbinom(n, k, q), pascal);
        }
    }
}

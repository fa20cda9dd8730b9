//! Upper bounds on `A_q(n, k, 2δ)`, the largest set of `k`-spaces of
//! `F_q^n` with pairwise subspace distance at least `2δ`.
//!
//! Every routine first replaces `k` by `min(k, n-k)` (orthogonal
//! complements preserve distances) and returns 1 when `δ` exceeds that,
//! since two distinct `k`-spaces are never further apart than
//! `2·min(k, n-k)`.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::optim::lp::{LinearProgram, LinearRow, RowTag, Sense};
use crate::optim::simplex::simplex_solve;
use crate::qcombinat::{qbinom, Exact, FieldOrder, GrassmannParams};
use crate::qhahn::hahn_family;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GrassmannMethod {
    SpherePacking,
    Singleton,
    Anticode,
    Johnson1,
    Johnson2Chain,
    Combined,
    DelsarteLp,
}

impl GrassmannMethod {
    pub const ALL: [GrassmannMethod; 7] = [
        GrassmannMethod::SpherePacking,
        GrassmannMethod::Singleton,
        GrassmannMethod::Anticode,
        GrassmannMethod::Johnson1,
        GrassmannMethod::Johnson2Chain,
        GrassmannMethod::Combined,
        GrassmannMethod::DelsarteLp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GrassmannMethod::SpherePacking => "sphere_packing",
            GrassmannMethod::Singleton => "singleton",
            GrassmannMethod::Anticode => "anticode",
            GrassmannMethod::Johnson1 => "johnson1",
            GrassmannMethod::Johnson2Chain => "johnson2_chain",
            GrassmannMethod::Combined => "combined",
            GrassmannMethod::DelsarteLp => "delsarte_lp",
        }
    }
}

impl fmt::Display for GrassmannMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GrassmannMethod {
    type Err = Error;

    /// Accepts the snake_case names and the short CLI spellings.
    fn from_str(s: &str) -> Result<Self> {
        let m = match s {
            "sphere" | "sphere_packing" | "sphere-packing" => GrassmannMethod::SpherePacking,
            "singleton" => GrassmannMethod::Singleton,
            "anticode" => GrassmannMethod::Anticode,
            "johnson1" => GrassmannMethod::Johnson1,
            "johnson2" | "johnson2_chain" | "johnson2-chain" => GrassmannMethod::Johnson2Chain,
            "combined" => GrassmannMethod::Combined,
            "delsarte-lp" | "delsarte_lp" | "delsarte" => GrassmannMethod::DelsarteLp,
            _ => return Err(invalid!("unknown Grassmann bound method {s:?}")),
        };
        Ok(m)
    }
}

/// One bound evaluated at one parameter set. `value` is `None` when the
/// method does not apply (the first Johnson bound needs a positive
/// denominator).
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannBoundReport {
    pub params: GrassmannParams,
    pub method: GrassmannMethod,
    pub value: Option<Exact>,
    pub floored: Option<BigInt>,
}

impl GrassmannBoundReport {
    fn new(params: GrassmannParams, method: GrassmannMethod, value: Option<Exact>) -> Self {
        let floored = value.as_ref().map(|v| v.floor().to_integer());
        GrassmannBoundReport { params, method, value, floored }
    }

    pub fn applicable(&self) -> bool {
        self.value.is_some()
    }
}

/// `(n, k')` with `k' = min(k, n-k)`, or `None` when only one codeword fits.
fn normalize(p: &GrassmannParams) -> Option<(usize, usize)> {
    let k = p.normalized_k();
    (p.delta <= k).then_some((p.n, k))
}

fn int(v: BigInt) -> Exact {
    Exact::from_integer(v)
}

fn qm1(q: FieldOrder, e: usize) -> BigInt {
    q.pow(e as u32) - 1
}

pub fn sphere_packing_bound(p: &GrassmannParams) -> Exact {
    let Some((n, k)) = normalize(p) else { return Exact::one() };
    let q = p.q;
    let r = (p.delta - 1) / 2;
    let ball: BigInt = (0..=r)
        .map(|m| qbinom(k as i64, m as i64, q) * qbinom((n - k) as i64, m as i64, q) * q.pow((m * m) as u32))
        .sum();
    Exact::new(qbinom(n as i64, k as i64, q), ball)
}

pub fn singleton_bound(p: &GrassmannParams) -> Exact {
    let Some((n, k)) = normalize(p) else { return Exact::one() };
    let d = p.delta;
    int(qbinom((n - d + 1) as i64, (k - d + 1) as i64, p.q))
}

pub fn anticode_bound(p: &GrassmannParams) -> Exact {
    let Some((n, k)) = normalize(p) else { return Exact::one() };
    (0..=k - p.delta).map(|j| Exact::new(qm1(p.q, n - j), qm1(p.q, k - j))).product()
}

/// The first Johnson-type bound, already floored; `None` unless
/// `(q^k-1)^2 > (q^n-1)(q^{k-δ}-1)`.
pub fn johnson1_bound(p: &GrassmannParams) -> Option<Exact> {
    let Some((n, k)) = normalize(p) else { return Some(Exact::one()) };
    let q = p.q;
    let qk = q.pow(k as u32);
    let qkd = q.pow((k - p.delta) as u32);
    let den = (&qk - 1) * (&qk - 1) - qm1(q, n) * (&qkd - 1);
    if den <= BigInt::zero() {
        return None;
    }
    let num = qm1(q, n) * (qk - qkd);
    Some(int(num.div_floor(&den)))
}

/// `⌊(q^{n-j}-1)/(q^{k-j}-1) · inner⌋` for `j = k-δ-1` down to `0`.
fn wrap_chain(q: FieldOrder, n: usize, k: usize, delta: usize, mut inner: BigInt) -> BigInt {
    for j in (0..k - delta).rev() {
        inner = (qm1(q, n - j) * inner).div_floor(&qm1(q, k - j));
    }
    inner
}

/// The second Johnson-type bound iterated down to `A_q(n-k+δ, δ, 2δ)`,
/// with a floor at every level.
pub fn johnson2_chain_bound(p: &GrassmannParams) -> Exact {
    let Some((n, k)) = normalize(p) else { return Exact::one() };
    let d = p.delta;
    let inner = qm1(p.q, n - k + d).div_floor(&qm1(p.q, d));
    int(wrap_chain(p.q, n, k, d, inner))
}

/// The floored chain with the innermost partial-spread term lowered by one
/// when `δ` does not divide `n-k` (no spread exists then).
pub fn combined_bound(p: &GrassmannParams) -> BigInt {
    let Some((n, k)) = normalize(p) else { return BigInt::one() };
    let d = p.delta;
    let mut inner = qm1(p.q, n - k + d).div_floor(&qm1(p.q, d));
    if (n - k) % d != 0 {
        inner -= 1;
    }
    wrap_chain(p.q, n, k, d, inner)
}

/// Delsarte's linear program in the Grassmann scheme:
/// `min 1 + Σ f_i` over `f >= 0` with `1 + Σ_i f_i Q_i(u) <= 0` for
/// `u = δ..k`, where `Q_i = Q_i(n,k,k;·)`. Solved exactly.
pub fn delsarte_lp_model(p: &GrassmannParams) -> Result<Option<LinearProgram>> {
    let Some((n, k)) = normalize(p) else { return Ok(None) };
    let family = hahn_family(n, k, k, p.q)?;
    let names = (1..=k).map(|i| format!("f_{i}")).collect();
    let mut lp = LinearProgram::new(names, vec![-Exact::one(); k]);
    for u in p.delta..=k {
        let coeffs = (1..=k).map(|i| (i - 1, family[i].eval(u))).collect();
        lp.push_row(LinearRow::new(RowTag::Delsarte, u, coeffs, Sense::Le, -Exact::one()));
    }
    Ok(Some(lp))
}

pub fn delsarte_lp_bound(p: &GrassmannParams) -> Result<Exact> {
    let Some(lp) = delsarte_lp_model(p)? else { return Ok(Exact::one()) };
    match simplex_solve(&lp) {
        Ok(sol) => Ok(Exact::one() - sol.value),
        Err(Error::Infeasible) => Err(Error::Solver(String::from("Delsarte LP has no finite bound"))),
        Err(e) => Err(e),
    }
}

pub fn grassmann_bound(p: &GrassmannParams, method: GrassmannMethod) -> Result<GrassmannBoundReport> {
    let value = match method {
        GrassmannMethod::SpherePacking => Some(sphere_packing_bound(p)),
        GrassmannMethod::Singleton => Some(singleton_bound(p)),
        GrassmannMethod::Anticode => Some(anticode_bound(p)),
        GrassmannMethod::Johnson1 => johnson1_bound(p),
        GrassmannMethod::Johnson2Chain => Some(johnson2_chain_bound(p)),
        GrassmannMethod::Combined => Some(int(combined_bound(p))),
        GrassmannMethod::DelsarteLp => Some(delsarte_lp_bound(p)?),
    };
    Ok(GrassmannBoundReport::new(*p, method, value))
}

/// Reports for each requested method plus the smallest floored value among
/// the applicable ones. An empty method list means `[Combined]`.
pub fn best_grassmann_bound(
    p: &GrassmannParams,
    methods: &[GrassmannMethod],
) -> Result<(BigInt, Vec<GrassmannBoundReport>)> {
    let methods = if methods.is_empty() { &[GrassmannMethod::Combined][..] } else { methods };
    let reports = methods.iter().map(|&m| grassmann_bound(p, m)).collect::<Result<Vec<_>>>()?;
    let best = reports
        .iter()
        .filter_map(|r| r.floored.clone())
        .min()
        .ok_or_else(|| invalid!("none of the requested methods applies"))?;
    Ok((best, reports))
}

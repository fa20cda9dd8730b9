//! The JSON report emitted by `grassmann` and `projective`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Number;
use subspace_bounds_core::grassmann::GrassmannBoundReport;
use subspace_bounds_core::projective_lp::EvReport;
use subspace_bounds_core::projective_sdp::SdpBoundReport;
use subspace_bounds_core::{Exact, GrassmannParams, Metric, ProjectiveParams};

/// Digits after the point in `raw_value` for exact results.
pub const DECIMALS: usize = 9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub q: u32,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Grassmann reports only; `d = 2·delta` there.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<usize>,
    pub d: usize,
    pub metric: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub params: ReportParams,
    pub method: String,
    /// The number that was floored, as a decimal string: the exact optimum
    /// truncated to [`DECIMALS`] places, or for the SDP the primal value
    /// plus the safety margin `10·|gap|`. `null` when the method does not
    /// apply.
    pub raw_value: Option<String>,
    /// `p/q` for results computed in exact arithmetic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_value: Option<String>,
    pub floored_bound: Option<Number>,
    pub status: String,
    pub gap: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primal: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<f64>,
    pub cuts_applied: Vec<String>,
    /// Only filled in with `--timings`, so that default output is
    /// reproducible byte for byte.
    pub wall_ms: Option<u64>,
}

impl BoundReport {
    pub fn floored_i128(&self) -> Option<i128> {
        self.floored_bound.as_ref().and_then(|n| n.as_str().parse().ok())
    }
}

pub fn big_number(v: &BigInt) -> Number {
    // arbitrary_precision keeps every digit
    v.to_string().parse().expect("an integer is a valid JSON number")
}

/// `v` truncated toward zero to `places` digits after the point.
pub fn decimal(v: &Exact, places: usize) -> String {
    let neg = v.is_negative();
    let a = v.abs();
    let int = a.trunc().to_integer();
    let scale = BigInt::from(10).pow(places as u32);
    let frac = ((a.fract() * Exact::from_integer(scale)).trunc()).to_integer();
    let mut out = if neg && !(int.is_zero() && frac.is_zero()) { String::from("-") } else { String::new() };
    out.push_str(&int.to_string());
    if !frac.is_zero() {
        let digits = format!("{frac:0>places$}");
        out.push('.');
        out.push_str(digits.trim_end_matches('0'));
    }
    out
}

fn projective_params(p: &ProjectiveParams) -> ReportParams {
    ReportParams { q: p.q.get(), n: p.n, k: None, delta: None, d: p.d, metric: p.metric.as_str().to_string() }
}

pub fn from_grassmann(r: &GrassmannBoundReport) -> BoundReport {
    grassmann_report(&r.params, r.method.as_str(), r.value.as_ref(), r.floored.as_ref())
}

pub fn grassmann_report(p: &GrassmannParams, method: &str, value: Option<&Exact>, floored: Option<&BigInt>) -> BoundReport {
    BoundReport {
        params: ReportParams {
            q: p.q.get(),
            n: p.n,
            k: Some(p.k),
            delta: Some(p.delta),
            d: 2 * p.delta,
            metric: Metric::Subspace.as_str().to_string(),
        },
        method: method.to_string(),
        raw_value: value.map(|v| decimal(v, DECIMALS)),
        exact_value: value.map(|v| v.to_string()),
        floored_bound: floored.map(big_number),
        status: if value.is_some() { "exact" } else { "not_applicable" }.to_string(),
        gap: 0.0,
        primal: None,
        dual: None,
        cuts_applied: Vec::new(),
        wall_ms: None,
    }
}

pub fn from_ev(p: &ProjectiveParams, method: &str, r: &EvReport) -> BoundReport {
    BoundReport {
        params: projective_params(p),
        method: method.to_string(),
        raw_value: Some(decimal(&r.value, DECIMALS)),
        exact_value: Some(r.value.to_string()),
        floored_bound: Some(big_number(&r.floored)),
        status: "exact".to_string(),
        gap: 0.0,
        primal: None,
        dual: None,
        cuts_applied: r.cuts.iter().map(|t| t.as_str().to_string()).collect(),
        wall_ms: None,
    }
}

pub fn from_sdp(p: &ProjectiveParams, r: &SdpBoundReport, dim_cuts: bool) -> BoundReport {
    let safe = r.primal + 10.0 * r.gap.abs();
    BoundReport {
        params: projective_params(p),
        method: "sdp".to_string(),
        raw_value: Some(format!("{safe:.6}")),
        exact_value: None,
        floored_bound: r.floored.map(Number::from),
        status: r.status.as_str().to_string(),
        gap: r.gap,
        primal: Some(r.primal),
        dual: Some(r.dual),
        cuts_applied: if dim_cuts { vec!["dimension_cap".to_string()] } else { Vec::new() },
        wall_ms: None,
    }
}

/// `A_q(n,d)`-style label.
pub fn label(p: &ReportParams) -> String {
    let inj = if p.metric == Metric::Injection.as_str() { "^inj" } else { "" };
    match (p.k, p.delta) {
        (Some(k), Some(delta)) => format!("A_{}({},{},{})", p.q, p.n, k, 2 * delta),
        _ => format!("A{inj}_{}({},{})", p.q, p.n, p.d),
    }
}

pub fn to_text(r: &BoundReport) -> String {
    let mut out = String::new();
    match (&r.floored_bound, &r.raw_value) {
        (Some(f), _) => out.push_str(&format!("{} <= {}\n", label(&r.params), f)),
        (None, Some(_)) => out.push_str(&format!("{}: no certified bound\n", label(&r.params))),
        (None, None) => out.push_str(&format!("{}: not applicable\n", label(&r.params))),
    }
    out.push_str(&format!("  method: {}\n  status: {}\n", r.method, r.status));
    if let Some(v) = &r.raw_value {
        match &r.exact_value {
            Some(e) if e != v => out.push_str(&format!("  value:  {v} ({e})\n")),
            _ => out.push_str(&format!("  value:  {v}\n")),
        }
    }
    if let (Some(p), Some(d)) = (r.primal, r.dual) {
        out.push_str(&format!("  primal: {p:.6}\n  dual:   {d:.6}\n  gap:    {:.3e}\n", r.gap));
    }
    if !r.cuts_applied.is_empty() {
        out.push_str(&format!("  cuts:   {}\n", r.cuts_applied.join(", ")));
    }
    if let Some(ms) = r.wall_ms {
        out.push_str(&format!("  time:   {ms} ms\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Exact {
        Exact::new(a.into(), b.into())
    }

    #[test]
    fn decimals_truncate() {
        assert_eq!(decimal(&q(4478, 131), 9), "34.183206106");
        assert_eq!(decimal(&q(34, 1), 9), "34");
        assert_eq!(decimal(&q(-1, 4), 9), "-0.25");
        assert_eq!(decimal(&q(1, 3), 3), "0.333");
    }

    #[test]
    fn big_integers_survive() {
        let v: BigInt = "123456789012345678901234567890".parse().unwrap();
        let s = serde_json::to_string(&big_number(&v)).unwrap();
        assert_eq!(s, "123456789012345678901234567890");
    }
}

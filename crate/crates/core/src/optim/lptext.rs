//! A line-oriented text format for linear programs with exact rational
//! coefficients, meant to be read by people.
//!
//! ```text
//! # subspace-bounds LP v1
//! maximize: 1 x_0 + 1 x_1
//! vars: x_0 x_1
//! int: x_1
//! dimension_cap[0]: 1 x_0 <= 1
//! packing[1]: 3/2 x_0 - 1 x_1 <= 35
//! ```
//!
//! Rows are written sorted by tag, then index; terms by variable index.
//! A model without variables is written as the header line alone.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::optim::lp::{LinearProgram, LinearRow, RowTag, Sense};
use crate::qcombinat::Exact;

pub const LP_TEXT_HEADER: &str = "# subspace-bounds LP v1";

fn write_terms(out: &mut String, terms: &[(usize, Exact)], names: &[String]) {
    let mut terms: Vec<&(usize, Exact)> = terms.iter().filter(|(_, c)| !c.is_zero()).collect();
    terms.sort_by_key(|(j, _)| *j);
    if terms.is_empty() {
        out.push('0');
        return;
    }
    for (k, (j, c)) in terms.iter().enumerate() {
        match (k, c.is_negative()) {
            (0, false) => {}
            (0, true) => out.push_str("- "),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        let _ = write!(out, "{} {}", c.abs(), names[*j]);
    }
}

pub fn export_lp_text(lp: &LinearProgram) -> String {
    let mut out = String::from(LP_TEXT_HEADER);
    out.push('\n');
    if lp.num_vars() == 0 && lp.rows.is_empty() {
        return out;
    }
    let objective: Vec<(usize, Exact)> = lp.objective.iter().cloned().enumerate().collect();
    out.push_str("maximize: ");
    write_terms(&mut out, &objective, &lp.var_names);
    out.push('\n');
    let _ = writeln!(out, "vars: {}", lp.var_names.join(" "));
    let ints: Vec<&str> = lp.var_names.iter().zip(&lp.integer).filter(|(_, i)| **i).map(|(n, _)| n.as_str()).collect();
    if !ints.is_empty() {
        let _ = writeln!(out, "int: {}", ints.join(" "));
    }
    let mut rows: Vec<&LinearRow> = lp.rows.iter().collect();
    rows.sort_by_key(|r| (r.tag, r.index));
    for r in rows {
        let _ = write!(out, "{}[{}]: ", r.tag, r.index);
        write_terms(&mut out, &r.coeffs, &lp.var_names);
        let _ = writeln!(out, " {} {}", r.sense.as_str(), r.rhs);
    }
    out
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_exact(tok: &str, line: usize) -> Result<Exact> {
    tok.parse::<Exact>().map_err(|_| err(line, format!("bad number {tok:?}")))
}

fn parse_terms(text: &str, vars: &BTreeMap<String, usize>, line: usize) -> Result<Vec<(usize, Exact)>> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks == ["0"] {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    let mut k = 0;
    let mut negative = false;
    while k < toks.len() {
        match toks[k] {
            "+" => {
                negative = false;
                k += 1;
                continue;
            }
            "-" => {
                negative = true;
                k += 1;
                continue;
            }
            _ => {}
        }
        let name = toks.get(k + 1).ok_or_else(|| err(line, "coefficient without variable"))?;
        let mut c = parse_exact(toks[k], line)?;
        if negative {
            c = -c;
        }
        let j = *vars.get(*name).ok_or_else(|| err(line, format!("undeclared variable {name:?}")))?;
        terms.push((j, c));
        negative = false;
        k += 2;
    }
    Ok(terms)
}

pub fn parse_lp_text(text: &str) -> Result<LinearProgram> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, l)) if l == LP_TEXT_HEADER => {}
        Some((n, _)) => return Err(err(n, "missing header")),
        None => return Err(err(0, "empty input")),
    }
    let mut objective_text: Option<(usize, String)> = None;
    let mut lp = LinearProgram::default();
    let mut vars: BTreeMap<String, usize> = BTreeMap::new();
    for (n, l) in lines {
        let (head, body) = l.split_once(':').ok_or_else(|| err(n, "expected `label: ...`"))?;
        let body = body.trim();
        match head {
            "maximize" => objective_text = Some((n, body.to_string())),
            "vars" => {
                for name in body.split_whitespace() {
                    if vars.insert(name.to_string(), lp.var_names.len()).is_some() {
                        return Err(err(n, format!("duplicate variable {name:?}")));
                    }
                    lp.var_names.push(name.to_string());
                }
                lp.objective = alloc::vec![Exact::zero(); lp.var_names.len()];
                lp.integer = alloc::vec![false; lp.var_names.len()];
            }
            "int" => {
                for name in body.split_whitespace() {
                    let j = *vars.get(name).ok_or_else(|| err(n, format!("undeclared variable {name:?}")))?;
                    lp.integer[j] = true;
                }
            }
            _ => {
                let (tag, index) = head
                    .strip_suffix(']')
                    .and_then(|h| h.split_once('['))
                    .ok_or_else(|| err(n, format!("bad row label {head:?}")))?;
                let tag: RowTag = tag.parse().map_err(|_| err(n, format!("unknown row tag {tag:?}")))?;
                let index: usize = index.parse().map_err(|_| err(n, "bad row index"))?;
                let (sense, pos) = ["<=", ">=", "="]
                    .iter()
                    .find_map(|s| body.rfind(s).map(|p| (*s, p)))
                    .ok_or_else(|| err(n, "row without sense"))?;
                let sense = match sense {
                    "<=" => Sense::Le,
                    ">=" => Sense::Ge,
                    _ => Sense::Eq,
                };
                let coeffs = parse_terms(&body[..pos], &vars, n)?;
                let rhs = parse_exact(body[pos + sense.as_str().len()..].trim(), n)?;
                lp.rows.push(LinearRow::new(tag, index, coeffs, sense, rhs));
            }
        }
    }
    if let Some((n, t)) = objective_text {
        for (j, c) in parse_terms(&t, &vars, n)? {
            lp.objective[j] = c;
        }
    }
    Ok(lp)
}

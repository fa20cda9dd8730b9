//! Floating-point SDPs in SDPA standard form and the SDPA sparse text
//! format (`.dat-s`).
//!
//! ```text
//! minimize  c · x   s.t.   Σ_i F_i x_i - F_0 ⪰ 0
//! ```
//!
//! The file layout is: number of variables `m`; number of blocks; block
//! sizes (negative for diagonal blocks); the `m` entries of `c`; then one
//! line `matno blockno i j value` per nonzero upper-triangle entry with
//! 1-based block and matrix indices, `matno = 0` being `F_0`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Dense(usize),
    Diagonal(usize),
}

impl BlockKind {
    pub fn size(self) -> usize {
        match self {
            BlockKind::Dense(n) | BlockKind::Diagonal(n) => n,
        }
    }

    fn signed_size(self) -> i64 {
        match self {
            BlockKind::Dense(n) => n as i64,
            BlockKind::Diagonal(n) => -(n as i64),
        }
    }
}

/// A nonzero of `F_mat` in block `block` at `(row, col)`, `row <= col`,
/// all indices 0-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpaEntry {
    pub mat: usize,
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SdpaProblem {
    pub num_vars: usize,
    pub blocks: Vec<BlockKind>,
    pub c: Vec<f64>,
    pub entries: Vec<SdpaEntry>,
}

impl SdpaProblem {
    /// Sorts entries by `(mat, block, row, col)`, merges duplicates and
    /// drops zeros.
    pub fn normalize(&mut self) {
        for e in &mut self.entries {
            if e.row > e.col {
                core::mem::swap(&mut e.row, &mut e.col);
            }
        }
        self.entries
            .sort_by(|a, b| (a.mat, a.block, a.row, a.col).cmp(&(b.mat, b.block, b.row, b.col)));
        let mut merged: Vec<SdpaEntry> = Vec::with_capacity(self.entries.len());
        for e in self.entries.drain(..) {
            match merged.last_mut() {
                Some(last) if (last.mat, last.block, last.row, last.col) == (e.mat, e.block, e.row, e.col) => {
                    last.value += e.value;
                }
                _ => merged.push(e),
            }
        }
        merged.retain(|e| e.value != 0.0);
        self.entries = merged;
    }
}

fn push_float(out: &mut String, v: f64) {
    // 17 significant digits round-trip every f64
    let _ = write!(out, "{v:.16e}");
}

/// Serializes in SDPA sparse format.
pub fn export_sdpa(p: &SdpaProblem) -> String {
    let mut sorted = p.clone();
    sorted.normalize();
    let mut out = String::new();
    let _ = writeln!(out, "{}", p.num_vars);
    let _ = writeln!(out, "{}", p.blocks.len());
    let sizes: Vec<String> = p.blocks.iter().map(|b| format!("{}", b.signed_size())).collect();
    let _ = writeln!(out, "{}", sizes.join(" "));
    for (i, v) in p.c.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        push_float(&mut out, *v);
    }
    out.push('\n');
    for e in &sorted.entries {
        let _ = write!(out, "{} {} {} {} ", e.mat, e.block + 1, e.row + 1, e.col + 1);
        push_float(&mut out, e.value);
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses SDPA sparse format. Comment lines (starting with `"` or `*`)
/// and the punctuation `{ } ( ) ,` used by some writers are accepted.
pub fn parse_sdpa(text: &str) -> Result<SdpaProblem> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('"') && !l.starts_with('*'));
    let clean = |l: &str| -> String {
        l.chars().map(|c| if "{}(),".contains(c) { ' ' } else { c }).collect()
    };
    let mut header = |what: &str| -> Result<(usize, String)> {
        lines
            .next()
            .map(|(n, l)| (n, clean(l)))
            .ok_or_else(|| parse_err(0, format!("missing {what}")))
    };

    let (ln, l) = header("variable count")?;
    let num_vars: usize = first_token(&l).parse().map_err(|_| parse_err(ln, "bad variable count"))?;
    let (ln, l) = header("block count")?;
    let nblocks: usize = first_token(&l).parse().map_err(|_| parse_err(ln, "bad block count"))?;
    let (ln, l) = header("block sizes")?;
    let blocks = l
        .split_whitespace()
        .take(nblocks)
        .map(|tok| {
            let s: i64 = tok.parse().map_err(|_| parse_err(ln, format!("bad block size {tok:?}")))?;
            Ok(if s < 0 { BlockKind::Diagonal((-s) as usize) } else { BlockKind::Dense(s as usize) })
        })
        .collect::<Result<Vec<_>>>()?;
    if blocks.len() != nblocks {
        return Err(parse_err(ln, "too few block sizes"));
    }
    let mut c = Vec::with_capacity(num_vars);
    let mut ln = ln;
    while c.len() < num_vars {
        let (n, l) = header("objective vector")?;
        ln = n;
        for tok in l.split_whitespace() {
            c.push(tok.parse::<f64>().map_err(|_| parse_err(ln, format!("bad objective value {tok:?}")))?);
        }
    }
    if c.len() != num_vars {
        return Err(parse_err(ln, "objective vector length mismatch"));
    }
    let mut entries = Vec::new();
    for (ln, l) in lines {
        let l = clean(l);
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() < 5 {
            return Err(parse_err(ln, "entry needs five fields"));
        }
        let idx = |k: usize| -> Result<usize> { toks[k].parse().map_err(|_| parse_err(ln, format!("bad index {:?}", toks[k]))) };
        let (mat, block, row, col) = (idx(0)?, idx(1)?, idx(2)?, idx(3)?);
        let value: f64 = toks[4].parse().map_err(|_| parse_err(ln, format!("bad value {:?}", toks[4])))?;
        if mat > num_vars || block == 0 || block > nblocks {
            return Err(parse_err(ln, "matrix or block index out of range"));
        }
        let kind = blocks[block - 1];
        if row == 0 || col == 0 || row > kind.size() || col > kind.size() {
            return Err(parse_err(ln, "entry position outside its block"));
        }
        if matches!(kind, BlockKind::Diagonal(_)) && row != col {
            return Err(parse_err(ln, "off-diagonal entry in a diagonal block"));
        }
        entries.push(SdpaEntry { mat, block: block - 1, row: row - 1, col: col - 1, value });
    }
    let mut p = SdpaProblem { num_vars, blocks, c, entries };
    p.normalize();
    Ok(p)
}

fn first_token(l: &str) -> &str {
    l.split_whitespace().next().unwrap_or("")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sample() -> SdpaProblem {
        SdpaProblem {
            num_vars: 2,
            blocks: vec![BlockKind::Dense(2), BlockKind::Diagonal(2)],
            c: vec![-1.0, 0.1],
            entries: vec![
                SdpaEntry { mat: 1, block: 0, row: 0, col: 1, value: 1.0 / 3.0 },
                SdpaEntry { mat: 0, block: 0, row: 0, col: 0, value: -2.5e-300 },
                SdpaEntry { mat: 2, block: 1, row: 1, col: 1, value: 7.0 },
                SdpaEntry { mat: 1, block: 1, row: 0, col: 0, value: 1.0 },
            ],
        }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let mut p = sample();
        let text = export_sdpa(&p);
        p.normalize();
        assert_eq!(parse_sdpa(&text).unwrap(), p);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("2"));
        assert_eq!(lines.next(), Some("2"));
        assert_eq!(lines.next(), Some("2 -2"));
    }

    #[test]
    fn accepts_punctuation_and_comments() {
        let text = "\"a comment\n2 =mDIM\n1\n{2}\n(1.0, 2.0)\n0 1 1 1 1.0\n1 1 1 1 1\n2 1 2 2 1\n1 1 1 2 0.5\n";
        let p = parse_sdpa(text).unwrap();
        assert_eq!(p.c, vec![1.0, 2.0]);
        assert_eq!(p.entries.len(), 4);
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(matches!(parse_sdpa("1\n1\n-2\n1\n1 1 1 2 1.0\n"), Err(Error::Parse { line: 5, .. })));
        assert!(parse_sdpa("1\n1\n2\n1\n3 1 1 1 1.0\n").is_err());
        assert!(parse_sdpa("1\n1\n2\n").is_err());
    }
}

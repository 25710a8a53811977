//! The `tomo-pair 1` instance format.
//!
//! ```text
//! tomo-pair 1
//! # optional comments
//! F1 1 1
//! F2 1 2
//! ```
//!
//! Data lines are `F1 <row> <col>` or `F2 <row> <col>`, single-space
//! separated, with decimal coordinates >= 1. Output is sorted by
//! (set, row, col).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::instance::InstancePair;
use crate::lattice::{LatticePoint, PointSet};

pub const PAIR_HEADER: &str = "tomo-pair 1";

fn parse_coord(tok: &str, line: usize) -> Result<usize> {
    let err = |message: String| Error::Parse { line, message };
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(format!("expected a decimal coordinate, got {tok:?}")));
    }
    let v: usize = tok
        .parse()
        .map_err(|_| err(format!("coordinate {tok:?} out of range")))?;
    if v == 0 {
        return Err(err("coordinates must be >= 1".into()));
    }
    Ok(v)
}

/// Parses a pair file. Blank lines and `#` comments are ignored.
pub fn parse_pair(text: &str) -> Result<InstancePair> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    match lines.next() {
        Some((_, h)) if h == PAIR_HEADER => {}
        Some((n, h)) => {
            return Err(Error::Parse {
                line: n,
                message: format!("expected header {PAIR_HEADER:?}, got {h:?}"),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "empty file".into(),
            })
        }
    }
    let mut f1 = PointSet::new();
    let mut f2 = PointSet::new();
    let mut seen = BTreeSet::new();
    for (n, line) in lines {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split(' ').collect();
        let [set, r, c] = toks[..] else {
            return Err(Error::Parse {
                line: n,
                message: format!("expected \"F1|F2 <row> <col>\", got {line:?}"),
            });
        };
        let (row, col) = (parse_coord(r, n)?, parse_coord(c, n)?);
        let p = LatticePoint::new(row, col)?;
        let target = match set {
            "F1" => &mut f1,
            "F2" => &mut f2,
            other => {
                return Err(Error::Parse {
                    line: n,
                    message: format!("unknown set {other:?}"),
                })
            }
        };
        if !seen.insert((set, row, col)) {
            return Err(Error::Parse {
                line: n,
                message: format!("duplicate line {line:?}"),
            });
        }
        target.insert(p);
    }
    Ok(InstancePair::new(f1, f2))
}

/// Renders a pair file, with optional comment lines after the header.
pub fn render_pair_with_comments(pair: &InstancePair, comments: &[String]) -> String {
    let mut out = String::with_capacity(16 * (pair.f1().len() + pair.f2().len() + 1));
    out.push_str(PAIR_HEADER);
    out.push('\n');
    for c in comments {
        for line in c.lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
    }
    for (tag, set) in [("F1", pair.f1()), ("F2", pair.f2())] {
        for p in set {
            out.push_str(&format!("{tag} {} {}\n", p.row(), p.col()));
        }
    }
    out
}

pub fn render_pair(pair: &InstancePair) -> String {
    render_pair_with_comments(pair, &[])
}

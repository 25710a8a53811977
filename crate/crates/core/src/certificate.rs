//! The `tomo-cert 1` staircase certificate and a checker that validates
//! it against the pair alone.
//!
//! ```text
//! tomo-cert 1
//! alpha 2 p 0 u 2
//! S 1: (3,1)/2 -> (1,1)/1 -> (1,2)/2
//! S 2: (2,1)/1
//! ```
//!
//! The checker does not call into the decomposition code: it re-derives
//! the line-sum error itself and checks labels, link geometry,
//! disjointness, coverage and the staircase count.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::error::{Error, Result};
use crate::lattice::PointSet;
use crate::staircase::Decomposition;

pub const CERT_HEADER: &str = "tomo-cert 1";

/// One staircase as written: `(row, col, tag)` with tag 1 or 2.
pub type CertChain = Vec<(usize, usize, u8)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub alpha: usize,
    pub p: usize,
    pub u: usize,
    pub staircases: Vec<CertChain>,
}

pub fn render_certificate(d: &Decomposition) -> String {
    let m = d.source().metrics();
    let mut out = format!(
        "{CERT_HEADER}\nalpha {} p {} u {}\n",
        m.alpha,
        m.p,
        m.sym_diff / 2
    );
    for (k, s) in d.staircases().iter().enumerate() {
        out.push_str(&format!("S {}: {s}\n", k + 1));
    }
    out
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_step(tok: &str, line: usize) -> Result<(usize, usize, u8)> {
    let bad = || perr(line, format!("bad staircase step {tok:?}"));
    let (coords, tag) = tok.split_once('/').ok_or_else(bad)?;
    let inner = coords
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (r, c) = inner.split_once(',').ok_or_else(bad)?;
    let num = |s: &str| -> Result<usize> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        match s.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(bad()),
        }
    };
    let tag = match tag {
        "1" => 1,
        "2" => 2,
        _ => return Err(bad()),
    };
    Ok((num(r)?, num(c)?, tag))
}

pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.first() != Some(&CERT_HEADER) {
        return Err(perr(1, format!("expected header {CERT_HEADER:?}")));
    }
    let metrics_line = lines
        .get(1)
        .ok_or_else(|| perr(2, "missing metrics line"))?;
    let toks: Vec<&str> = metrics_line.split(' ').collect();
    let ["alpha", a, "p", p, "u", u] = toks[..] else {
        return Err(perr(
            2,
            format!("expected \"alpha <a> p <p> u <u>\", got {metrics_line:?}"),
        ));
    };
    let int = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| perr(2, format!("bad integer {s:?}")))
    };
    let (alpha, p, u) = (int(a)?, int(p)?, int(u)?);

    let mut staircases = Vec::new();
    for (k, line) in lines.iter().enumerate().skip(2) {
        let n = k + 1;
        let want = format!("S {}: ", staircases.len() + 1);
        let body = line
            .strip_prefix(want.as_str())
            .ok_or_else(|| perr(n, format!("expected line starting {want:?}")))?;
        let chain = body
            .split(" -> ")
            .map(|t| parse_step(t, n))
            .collect::<Result<CertChain>>()?;
        staircases.push(chain);
    }
    Ok(Certificate {
        alpha,
        p,
        u,
        staircases,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("certificate claims alpha {claimed} p {claimed_p} u {claimed_u}, pair has alpha {alpha} p {p} u {u}")]
    MetricsMismatch {
        claimed: usize,
        claimed_p: usize,
        claimed_u: usize,
        alpha: usize,
        p: usize,
        u: usize,
    },
    #[error("|F1| = {0} and |F2| = {1} differ")]
    SizeMismatch(usize, usize),
    #[error("staircase {staircase}: point ({row},{col}) is not in the set its label /{tag} says")]
    WrongLabel {
        staircase: usize,
        row: usize,
        col: usize,
        tag: u8,
    },
    #[error("staircase {staircase}: labels do not alternate at step {step}")]
    NotAlternating { staircase: usize, step: usize },
    #[error("staircase {staircase}: step {step} is not a valid link")]
    BadLink { staircase: usize, step: usize },
    #[error("staircase {staircase}: point ({row},{col}) already used")]
    Overlap {
        staircase: usize,
        row: usize,
        col: usize,
    },
    #[error("staircase {staircase} is empty")]
    Empty { staircase: usize },
    #[error("{0} points of the symmetric difference are not covered")]
    Uncovered(usize),
    #[error("{count} staircases listed, alpha is {alpha}")]
    WrongCount { count: usize, alpha: usize },
}

fn half_line_error(f1: &PointSet, f2: &PointSet) -> usize {
    let mut rows: HashMap<usize, i64> = HashMap::new();
    let mut cols: HashMap<usize, i64> = HashMap::new();
    for (set, d) in [(f1, 1i64), (f2, -1i64)] {
        for p in set {
            *rows.entry(p.row()).or_default() += d;
            *cols.entry(p.col()).or_default() += d;
        }
    }
    let total: u64 = rows
        .values()
        .chain(cols.values())
        .map(|v| v.unsigned_abs())
        .sum();
    (total / 2) as usize
}

/// Validates a certificate against `(f1, f2)` in the coordinates it was
/// written for. Returns the number of staircases.
pub fn check_certificate(
    f1: &PointSet,
    f2: &PointSet,
    cert: &Certificate,
) -> std::result::Result<usize, CertificateError> {
    if f1.len() != f2.len() {
        return Err(CertificateError::SizeMismatch(f1.len(), f2.len()));
    }
    let alpha = half_line_error(f1, f2);
    let p = f1.intersection_len(f2);
    let u = f1.len() - p;
    if (cert.alpha, cert.p, cert.u) != (alpha, p, u) {
        return Err(CertificateError::MetricsMismatch {
            claimed: cert.alpha,
            claimed_p: cert.p,
            claimed_u: cert.u,
            alpha,
            p,
            u,
        });
    }
    let mut used = BTreeSet::new();
    for (k, chain) in cert.staircases.iter().enumerate() {
        let staircase = k + 1;
        if chain.is_empty() {
            return Err(CertificateError::Empty { staircase });
        }
        for &(row, col, tag) in chain {
            let in1 = f1.contains_coords(row, col);
            let in2 = f2.contains_coords(row, col);
            let ok = match tag {
                1 => in1 && !in2,
                _ => in2 && !in1,
            };
            if !ok {
                return Err(CertificateError::WrongLabel {
                    staircase,
                    row,
                    col,
                    tag,
                });
            }
            if !used.insert((row, col)) {
                return Err(CertificateError::Overlap {
                    staircase,
                    row,
                    col,
                });
            }
        }
        for (s, w) in chain.windows(2).enumerate() {
            let step = s + 1;
            let ((r0, c0, t0), (r1, c1, t1)) = (w[0], w[1]);
            if t0 == t1 {
                return Err(CertificateError::NotAlternating { staircase, step });
            }
            // F1 -> F2 runs right along a row; F2 -> F1 runs up a column
            let link_ok = if t0 == 1 {
                r1 == r0 && c1 > c0
            } else {
                c1 == c0 && r1 < r0
            };
            if !link_ok {
                return Err(CertificateError::BadLink { staircase, step });
            }
        }
    }
    let sym_diff = 2 * u;
    if used.len() != sym_diff {
        return Err(CertificateError::Uncovered(sym_diff - used.len()));
    }
    if cert.staircases.len() != alpha {
        return Err(CertificateError::WrongCount {
            count: cert.staircases.len(),
            alpha,
        });
    }
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::InstancePair;
    use crate::staircase::decompose;

    fn set(c: &[(usize, usize)]) -> PointSet {
        PointSet::from_coords(c.iter().copied()).unwrap()
    }

    #[test]
    fn trivial_certificate_text() {
        let pair = InstancePair::new(set(&[(1, 1)]), set(&[(1, 2)]));
        let text = render_certificate(&decompose(&pair).unwrap());
        assert_eq!(
            text,
            "tomo-cert 1\nalpha 1 p 0 u 1\nS 1: (1,1)/1 -> (1,2)/2\n"
        );
        let cert = parse_certificate(&text).unwrap();
        assert_eq!(check_certificate(pair.f1(), pair.f2(), &cert), Ok(1));
    }

    #[test]
    fn checker_rejects_tampering() {
        let f1 = set(&[(1, 1), (2, 1)]);
        let f2 = set(&[(3, 1), (1, 2)]);
        let pair = InstancePair::new(f1.clone(), f2.clone());
        let text = render_certificate(&decompose(&pair).unwrap());
        assert_eq!(
            text,
            "tomo-cert 1\nalpha 2 p 0 u 2\nS 1: (3,1)/2 -> (1,1)/1 -> (1,2)/2\nS 2: (2,1)/1\n"
        );
        let good = parse_certificate(&text).unwrap();
        assert_eq!(check_certificate(&f1, &f2, &good), Ok(2));

        let mut c = good.clone();
        c.staircases.pop();
        assert_eq!(
            check_certificate(&f1, &f2, &c),
            Err(CertificateError::Uncovered(1))
        );

        let mut c = good.clone();
        c.staircases[0].swap(0, 1);
        assert!(matches!(
            check_certificate(&f1, &f2, &c),
            Err(CertificateError::BadLink { .. })
        ));

        let mut c = good.clone();
        c.staircases[1][0].2 = 2;
        assert!(matches!(
            check_certificate(&f1, &f2, &c),
            Err(CertificateError::WrongLabel { .. })
        ));

        let mut c = good.clone();
        c.staircases[1] = vec![(1, 1, 1)];
        assert!(matches!(
            check_certificate(&f1, &f2, &c),
            Err(CertificateError::Overlap { .. })
        ));

        let mut c = good.clone();
        c.alpha = 3;
        assert!(matches!(
            check_certificate(&f1, &f2, &c),
            Err(CertificateError::MetricsMismatch { .. })
        ));

        // a valid split into more than alpha staircases is still rejected
        let mut c = good;
        let first = c.staircases.remove(0);
        c.staircases.insert(0, first[..1].to_vec());
        c.staircases.insert(1, first[1..].to_vec());
        assert_eq!(
            check_certificate(&f1, &f2, &c),
            Err(CertificateError::WrongCount { count: 3, alpha: 2 })
        );
    }

    #[test]
    fn parse_errors() {
        assert!(parse_certificate("").is_err());
        assert!(parse_certificate("tomo-cert 1\n").is_err());
        assert!(parse_certificate("tomo-cert 1\nalpha 1 p 0\n").is_err());
        assert!(parse_certificate("tomo-cert 1\nalpha 1 p 0 u 1\nS 2: (1,1)/1\n").is_err());
        assert!(parse_certificate("tomo-cert 1\nalpha 1 p 0 u 1\nS 1: (1,1)/3\n").is_err());
        assert!(parse_certificate("tomo-cert 1\nalpha 1 p 0 u 1\nS 1: (0,1)/1\n").is_err());
        assert!(
            parse_certificate("tomo-cert 1\nalpha 1 p 0 u 1\nS 1: (1,1)/1 ->(1,2)/2\n").is_err()
        );
        let empty = parse_certificate("tomo-cert 1\nalpha 0 p 1 u 0\n").unwrap();
        assert!(empty.staircases.is_empty());
    }
}

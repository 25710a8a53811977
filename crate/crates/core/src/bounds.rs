//! Closed-form stability bounds and per-instance bound reports.
//!
//! All logarithms are natural. Integral bounds are compared exactly; real
//! bounds with a relative tolerance of [`REL_TOL`].

use std::fmt;

use crate::error::{Error, Result};
use crate::instance::{InstancePair, Metrics};

pub const REL_TOL: f64 = 1e-9;

/// `sum_{i=1..alpha} floor(alpha / i)`: the largest `|F1|` possible when F1
/// and F2 are disjoint.
pub fn harmonic_bound(alpha: usize) -> u64 {
    assert!(alpha >= 1, "alpha must be positive");
    let n = alpha as u64;
    (1..=n).map(|i| n / i).sum()
}

/// `alpha * (1 + ln alpha)`, which dominates [`harmonic_bound`].
pub fn disjoint_log_bound(alpha: usize) -> f64 {
    assert!(alpha >= 1, "alpha must be positive");
    let a = alpha as f64;
    a * (1.0 + a.ln())
}

/// [`harmonic_bound`] evaluated at `alpha + p`.
pub fn general_harmonic_bound(alpha: usize, p: usize) -> u64 {
    harmonic_bound(alpha + p)
}

/// `(alpha + p)(1 + ln(alpha + p))`.
pub fn general_log_bound(alpha: usize, p: usize) -> f64 {
    disjoint_log_bound(alpha + p)
}

/// Upper bound on `u^2`: `(alpha / 4)(a + b)(a + b + alpha - 1)`.
pub fn u_squared_bound(alpha: usize, a: usize, b: usize) -> f64 {
    let (al, s) = (alpha as f64, (a + b) as f64);
    al / 4.0 * s * (s + al - 1.0)
}

/// Lower bound on `|F1|`: `(a + b)^2 / (4 (alpha + 1))`.
pub fn f1_lower_bound(alpha: usize, a: usize, b: usize) -> f64 {
    let s = (a + b) as f64;
    s * s / (4.0 * (alpha as f64 + 1.0))
}

/// Bound on `a + b` obtained by combining the two bounds above:
/// `beta + sqrt(beta (alpha - 1) + 4 (alpha + 1) p + beta^2)` with
/// `beta = sqrt(alpha) (alpha + 1)`.
fn line_count_bound(alpha: f64, p: f64) -> f64 {
    let beta = alpha.sqrt() * (alpha + 1.0);
    beta + (beta * (alpha - 1.0) + 4.0 * (alpha + 1.0) * p + beta * beta).sqrt()
}

/// `u` bound in the square-root form, before adding `p`.
fn sqrt_u_bound(alpha: f64, p: f64) -> f64 {
    let t = line_count_bound(alpha, p) + (alpha - 1.0) / 2.0;
    (alpha / 4.0 * t * t - (alpha - 1.0).powi(2) * alpha / 16.0).sqrt()
}

/// Square-root bound on `|F1|` in terms of `alpha` and `p`. For
/// `alpha = 1` it equals `p + 1 + sqrt(2p + 1)`.
pub fn sqrt_bound(alpha: usize, p: usize) -> f64 {
    assert!(alpha >= 1, "alpha must be positive");
    p as f64 + sqrt_u_bound(alpha as f64, p as f64)
}

/// `p + (alpha + 1)(alpha - 1/2) + (alpha + 1) sqrt(2p + (2 alpha - 1)^2 / 4)`,
/// the generalized switching-component bound.
pub fn alpers_comparison_bound(alpha: usize, p: usize) -> f64 {
    assert!(alpha >= 1, "alpha must be positive");
    let (a, p) = (alpha as f64, p as f64);
    let w = 2.0 * a - 1.0;
    p + (a + 1.0) * (a - 0.5) + (a + 1.0) * (2.0 * p + w * w / 4.0).sqrt()
}

/// The two size-independent bounds on `|F1 △ F2|`:
/// `2 alpha + 2 (alpha + p) ln(alpha + p)` and the doubled square-root form.
pub fn symmetric_bounds(alpha: usize, p: usize) -> Result<(f64, f64)> {
    if alpha == 0 {
        return Err(Error::InvalidParameters(
            "symmetric bounds need alpha >= 1".into(),
        ));
    }
    let (a, q) = (alpha as f64, (alpha + p) as f64);
    let log_form = 2.0 * a + 2.0 * q * q.ln();
    let t = line_count_bound(a, p as f64) + (a - 1.0) / 2.0;
    let sqrt_form = (a * t * t - (a - 1.0).powi(2) * a / 4.0).sqrt();
    Ok((log_form, sqrt_form))
}

/// Lower bound on `p` for `alpha = 1` from the switching-component analysis:
/// `|F1| + 1/2 - sqrt(2 |F1| + 1/4)`.
pub fn alpers_alpha1_lower(f1_size: usize) -> f64 {
    let n = f1_size as f64;
    n + 0.5 - (2.0 * n + 0.25).sqrt()
}

/// `|F1| - sqrt(2 |F1|)`, the `alpha = 1` case of [`sqrt_bound`] solved for `p`.
pub fn sqrt_alpha1_lower(f1_size: usize) -> f64 {
    let n = f1_size as f64;
    n - (2.0 * n).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// measured <= value
    Upper,
    /// measured >= value
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Applicability {
    /// A theorem whose hypotheses hold: a failure is a violation.
    Asserted,
    /// Evaluated, but a hypothesis of the derivation is not met.
    Conditional,
    /// Shown for comparison only.
    Informational,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundValue {
    Exact(u64),
    Real(f64),
}

impl BoundValue {
    pub fn as_f64(self) -> f64 {
        match self {
            BoundValue::Exact(v) => v as f64,
            BoundValue::Real(v) => v,
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(v) => write!(f, "{v}"),
            BoundValue::Real(v) => write!(f, "{v:.6}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundEntry {
    pub name: &'static str,
    /// What is measured: `|F1|`, `u^2`, `|F1△F2|` or `p`.
    pub quantity: &'static str,
    pub measured: u64,
    pub value: BoundValue,
    pub direction: Direction,
    pub applicability: Applicability,
    pub holds: bool,
    /// Distance to the bound in the direction that satisfies it.
    pub slack: f64,
}

impl BoundEntry {
    fn new(
        name: &'static str,
        quantity: &'static str,
        measured: u64,
        value: BoundValue,
        direction: Direction,
        applicability: Applicability,
    ) -> Self {
        let m = measured as f64;
        let (holds, slack) = match (value, direction) {
            (BoundValue::Exact(v), Direction::Upper) => (measured <= v, v as f64 - m),
            (BoundValue::Exact(v), Direction::Lower) => (measured >= v, m - v as f64),
            (BoundValue::Real(v), dir) => {
                let tol = REL_TOL * v.abs().max(1.0);
                match dir {
                    Direction::Upper => (m <= v + tol, v - m),
                    Direction::Lower => (m >= v - tol, m - v),
                }
            }
        };
        BoundEntry {
            name,
            quantity,
            measured,
            value,
            direction,
            applicability,
            holds,
            slack,
        }
    }

    pub fn is_violation(&self) -> bool {
        self.applicability == Applicability::Asserted && !self.holds
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub metrics: Metrics,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn violations(&self) -> impl Iterator<Item = &BoundEntry> + '_ {
        self.entries.iter().filter(|e| e.is_violation())
    }

    pub fn all_hold(&self) -> bool {
        self.violations().next().is_none()
    }

    pub fn get(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// Whether every row and column holding F1 points also meets `F1 △ F2`.
pub fn pruning_hypothesis(pair: &InstancePair) -> bool {
    let m = pair.metrics();
    let mut rows = vec![false; m.a + 1];
    let mut cols = vec![false; m.b + 1];
    for p in pair.f1().symmetric_difference(pair.f2()).iter() {
        if p.row() <= m.a {
            rows[p.row()] = true;
        }
        if p.col() <= m.b {
            cols[p.col()] = true;
        }
    }
    rows[1..].iter().all(|&x| x) && cols[1..].iter().all(|&x| x)
}

/// Evaluates every bound that applies to a canonical pair.
///
/// Bounds on `|F1|` apply to any sizes; `u^2` and the `|F1|` lower bound
/// need `|F1| = |F2|`. Identical sets (`alpha = 0`) yield no entries.
pub fn report(pair: &InstancePair) -> Result<BoundReport> {
    use Applicability::*;
    use Direction::*;

    pair.check_canonical_unique()?;
    let m = *pair.metrics();
    let mut entries = Vec::new();
    if m.alpha == 0 {
        return Ok(BoundReport {
            metrics: m,
            entries,
        });
    }
    let (alpha, p) = (m.alpha, m.p);
    let f1 = m.f1_size as u64;
    let equal = m.f1_size == m.f2_size;

    if p == 0 {
        entries.push(BoundEntry::new(
            "harmonic",
            "|F1|",
            f1,
            BoundValue::Exact(harmonic_bound(alpha)),
            Upper,
            Asserted,
        ));
        entries.push(BoundEntry::new(
            "disjoint-log",
            "|F1|",
            f1,
            BoundValue::Real(disjoint_log_bound(alpha)),
            Upper,
            Asserted,
        ));
    }
    entries.push(BoundEntry::new(
        "general-harmonic",
        "|F1|",
        f1,
        BoundValue::Exact(general_harmonic_bound(alpha, p)),
        Upper,
        Asserted,
    ));
    entries.push(BoundEntry::new(
        "general-log",
        "|F1|",
        f1,
        BoundValue::Real(general_log_bound(alpha, p)),
        Upper,
        Asserted,
    ));
    if equal {
        let u = (m.sym_diff / 2) as u64;
        entries.push(BoundEntry::new(
            "u-squared",
            "u^2",
            u * u,
            BoundValue::Real(u_squared_bound(alpha, m.a, m.b)),
            Upper,
            Asserted,
        ));
        let f1_lower = if pruning_hypothesis(pair) {
            Asserted
        } else {
            Conditional
        };
        entries.push(BoundEntry::new(
            "f1-lower",
            "|F1|",
            f1,
            BoundValue::Real(f1_lower_bound(alpha, m.a, m.b)),
            Lower,
            f1_lower,
        ));
    }
    entries.push(BoundEntry::new(
        "sqrt",
        "|F1|",
        f1,
        BoundValue::Real(sqrt_bound(alpha, p)),
        Upper,
        Asserted,
    ));
    entries.push(BoundEntry::new(
        "alpers-remark",
        "|F1|",
        f1,
        BoundValue::Real(alpers_comparison_bound(alpha, p)),
        Upper,
        Asserted,
    ));
    let (sym_log, sym_sqrt) = symmetric_bounds(alpha, p)?;
    let sd = m.sym_diff as u64;
    // Rewritten through |F1△F2| = 2(|F1| - p), so only sound for |F2| <= |F1|.
    // F1 = {(1,1)}, F2 = {(1,2),(2,1)} has alpha 1, p 0 and |F1△F2| = 3 > 2.
    let sym = if m.f2_size <= m.f1_size {
        Asserted
    } else {
        Informational
    };
    entries.push(BoundEntry::new(
        "symmetric-log",
        "|F1△F2|",
        sd,
        BoundValue::Real(sym_log),
        Upper,
        sym,
    ));
    entries.push(BoundEntry::new(
        "symmetric-sqrt",
        "|F1△F2|",
        sd,
        BoundValue::Real(sym_sqrt),
        Upper,
        sym,
    ));
    if alpha == 1 && equal {
        entries.push(BoundEntry::new(
            "alpers-alpha1",
            "p",
            p as u64,
            BoundValue::Real(alpers_alpha1_lower(m.f1_size)),
            Lower,
            Informational,
        ));
        entries.push(BoundEntry::new(
            "sqrt-alpha1",
            "p",
            p as u64,
            BoundValue::Real(sqrt_alpha1_lower(m.f1_size)),
            Lower,
            Informational,
        ));
    }
    Ok(BoundReport {
        metrics: m,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::PointSet;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1.0)
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic_bound(1), 1);
        // 8 + 4 + 2 + 2 + 1 + 1 + 1 + 1
        assert_eq!(harmonic_bound(8), 20);
        assert_eq!(general_harmonic_bound(5, 0), harmonic_bound(5));
        // 16+8+5+4+3+2+2+2+1*8
        assert_eq!(general_harmonic_bound(9, 7), 50);
    }

    #[test]
    fn log_values() {
        assert_eq!(disjoint_log_bound(1), 1.0);
        assert!(close(disjoint_log_bound(8), 8.0 * (1.0 + 8f64.ln()), 1e-15));
        assert!(close(disjoint_log_bound(8), 24.635532333, 1e-9));
        assert_eq!(general_log_bound(1, 0), 1.0);
        assert!(close(general_log_bound(9, 7), 60.361419555, 1e-9));
    }

    #[test]
    fn lemma_bounds() {
        // (1/4) * 2 * 2; met with equality by {(1,1)} vs {(1,2)}
        assert_eq!(u_squared_bound(1, 1, 1), 1.0);
        assert_eq!(u_squared_bound(8, 8, 8), 2.0 * 16.0 * 23.0);
        assert_eq!(f1_lower_bound(1, 1, 1), 0.5);
        assert_eq!(f1_lower_bound(8, 8, 8), 256.0 / 36.0);
    }

    #[test]
    fn sqrt_bound_alpha_one() {
        assert!(close(sqrt_bound(1, 0), 2.0, 1e-15));
        for p in [0usize, 1, 7, 100, 9999] {
            let want = p as f64 + 1.0 + (2.0 * p as f64 + 1.0).sqrt();
            assert!(close(sqrt_bound(1, p), want, 1e-12));
        }
    }

    #[test]
    fn alpers_comparison_alpha_one() {
        assert!(close(alpers_comparison_bound(1, 0), 2.0, 1e-15));
        // alpha = 1: p + 1 + 2 sqrt(2p + 1/4)
        let p = 10.0;
        let want = p + 1.0 + 2.0 * (2.0 * p + 0.25f64).sqrt();
        assert!(close(alpers_comparison_bound(1, 10), want, 1e-12));
    }

    #[test]
    fn symmetric_bound_relations() {
        let (l, s) = symmetric_bounds(1, 0).unwrap();
        assert_eq!(l, 2.0);
        assert!(close(s, 2.0 * (sqrt_bound(1, 0) - 0.0), 1e-12));
        assert!(symmetric_bounds(0, 0).is_err());
    }

    #[test]
    fn report_on_trivial_pair() {
        let f1 = PointSet::from_coords([(1, 1)]).unwrap();
        let f2 = PointSet::from_coords([(1, 2)]).unwrap();
        let r = report(&InstancePair::new(f1, f2)).unwrap();
        assert!(r.all_hold());
        let h = r.get("harmonic").unwrap();
        assert_eq!(
            (h.measured, h.value, h.slack),
            (1, BoundValue::Exact(1), 0.0)
        );
        assert!(r.get("alpers-alpha1").is_some());
    }

    #[test]
    fn report_skips_identical_sets() {
        let f = PointSet::from_coords([(1, 1)]).unwrap();
        let r = report(&InstancePair::new(f.clone(), f)).unwrap();
        assert!(r.entries.is_empty());
    }

    #[test]
    fn entry_tolerances() {
        let e = BoundEntry::new(
            "t",
            "|F1|",
            5,
            BoundValue::Real(5.0 - 1e-12),
            Direction::Upper,
            Applicability::Asserted,
        );
        assert!(e.holds);
        let e = BoundEntry::new(
            "t",
            "|F1|",
            5,
            BoundValue::Real(4.99),
            Direction::Upper,
            Applicability::Asserted,
        );
        assert!(!e.holds && e.is_violation());
        let e = BoundEntry::new(
            "t",
            "|F1|",
            5,
            BoundValue::Exact(6),
            Direction::Lower,
            Applicability::Conditional,
        );
        assert!(!e.holds && !e.is_violation());
    }
}

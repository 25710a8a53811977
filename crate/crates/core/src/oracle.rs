//! Exhaustive verification at desk scale.
//!
//! Every uniquely determined F1 up to a size limit is paired with every
//! candidate F2 inside a bounding box, and each pair is run through the
//! decomposition and bound checks. Results are tallied in a
//! [`VerificationSummary`], which merges associatively and keeps the
//! counterexample with the smallest enumeration rank, so serial and
//! parallel runs agree exactly.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use crate::bounds::{report, Applicability};
use crate::error::{Error, Result};
use crate::instance::InstancePair;
use crate::lattice::{LatticePoint, PointSet};
use crate::projection::{projections, triangular_realization, Projections};
use crate::staircase::{check_chain, decompose_traced, equalize, rebalance};

/// Candidate-set count above which enumeration is refused.
pub const GUARD_LIMIT: u128 = 100_000_000;
/// Largest total accepted by [`count_realizations`].
pub const MAX_REALIZATION_CELLS: usize = 16;

/// All partitions of `n` as non-increasing part lists, in lexicographic
/// order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in 1..=n.min(max) {
            prefix.push(k);
            rec(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// Triangular sets of every partition of every `n` in `1..=max_cells`.
pub fn enumerate_unique_sets(max_cells: usize) -> impl Iterator<Item = PointSet> {
    (1..=max_cells).flat_map(|n| {
        partitions(n).into_iter().map(|parts| {
            let cols = crate::projection::conjugate(&parts);
            triangular_realization(&Projections::new(parts, cols))
                .expect("a partition and its conjugate are uniquely realized")
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// `|F2| = |F1|` and `F1 ∩ F2 = ∅`.
    Disjoint,
    /// `|F2| = |F1|`.
    General,
    /// `|F2| = |F1| ± 1`.
    Unequal,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Disjoint => "disjoint",
            Mode::General => "general",
            Mode::Unequal => "unequal",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disjoint" => Ok(Mode::Disjoint),
            "general" => Ok(Mode::General),
            "unequal" => Ok(Mode::Unequal),
            other => Err(Error::InvalidParameters(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoxDims {
    pub rows: usize,
    pub cols: usize,
}

impl BoxDims {
    pub fn cells(&self) -> Vec<LatticePoint> {
        (1..=self.rows)
            .cartesian_product(1..=self.cols)
            .map(|(r, c)| LatticePoint::new(r, c).expect("box coordinates are positive"))
            .collect()
    }
}

impl fmt::Display for BoxDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of F2 candidates `enumerate_counterpart_sets` would yield.
pub fn counterpart_count(f1: &PointSet, dims: BoxDims, mode: Mode) -> u128 {
    let cells = dims.rows * dims.cols;
    let n = f1.len();
    match mode {
        Mode::General => binomial(cells, n),
        Mode::Disjoint => {
            let inside = f1
                .iter()
                .filter(|p| p.row() <= dims.rows && p.col() <= dims.cols)
                .count();
            binomial(cells - inside, n)
        }
        Mode::Unequal => {
            n.checked_sub(1).map_or(0, |k| binomial(cells, k)) + binomial(cells, n + 1)
        }
    }
}

/// All F2 inside the box for the given mode, in combination rank order over
/// the row-major cell list. Refuses when the count exceeds [`GUARD_LIMIT`].
pub fn enumerate_counterpart_sets(
    f1: &PointSet,
    dims: BoxDims,
    mode: Mode,
) -> Result<Box<dyn Iterator<Item = PointSet> + Send>> {
    let candidates = counterpart_count(f1, dims, mode);
    if candidates > GUARD_LIMIT {
        return Err(Error::GuardExceeded {
            candidates,
            limit: GUARD_LIMIT,
        });
    }
    Ok(counterparts_unguarded(f1, dims, mode))
}

fn counterparts_unguarded(
    f1: &PointSet,
    dims: BoxDims,
    mode: Mode,
) -> Box<dyn Iterator<Item = PointSet> + Send> {
    let n = f1.len();
    let cells = dims.cells();
    match mode {
        Mode::General => Box::new(subsets(cells, n)),
        Mode::Disjoint => {
            let free: Vec<_> = cells.into_iter().filter(|p| !f1.contains(p)).collect();
            Box::new(subsets(free, n))
        }
        Mode::Unequal => {
            let smaller = n.checked_sub(1).map(|k| subsets(cells.clone(), k));
            Box::new(smaller.into_iter().flatten().chain(subsets(cells, n + 1)))
        }
    }
}

fn subsets(cells: Vec<LatticePoint>, k: usize) -> impl Iterator<Item = PointSet> + Send {
    cells
        .into_iter()
        .combinations(k)
        .map(|c| c.into_iter().collect::<PointSet>())
}

/// Exact number of point sets with the given projections, by backtracking
/// over rows. Limited to totals of at most [`MAX_REALIZATION_CELLS`].
pub fn count_realizations(pr: &Projections) -> Result<u64> {
    let total = pr.row_total();
    if total != pr.col_total() {
        return Err(Error::NotAProjectionPair {
            rows: total,
            cols: pr.col_total(),
        });
    }
    if total > MAX_REALIZATION_CELLS {
        return Err(Error::InvalidParameters(format!(
            "count_realizations is limited to {MAX_REALIZATION_CELLS} cells, got {total}"
        )));
    }
    fn rec(rows: &[usize], caps: &mut Vec<usize>) -> u64 {
        let Some((&r, rest)) = rows.split_first() else {
            return caps.iter().all(|&c| c == 0) as u64;
        };
        // a column cannot take more points than rows remain
        if caps.iter().any(|&c| c > rows.len()) {
            return 0;
        }
        let open: Vec<usize> = (0..caps.len()).filter(|&j| caps[j] > 0).collect();
        if open.len() < r {
            return 0;
        }
        let mut count = 0;
        for choice in open.into_iter().combinations(r) {
            for &j in &choice {
                caps[j] -= 1;
            }
            count += rec(rest, caps);
            for &j in &choice {
                caps[j] += 1;
            }
        }
        count
    }
    let mut caps = pr.col_sums().to_vec();
    Ok(rec(pr.row_sums(), &mut caps))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumSpec {
    pub max_cells: usize,
    pub dims: BoxDims,
    pub mode: Mode,
}

impl Default for EnumSpec {
    fn default() -> Self {
        EnumSpec {
            max_cells: 6,
            dims: BoxDims { rows: 6, cols: 6 },
            mode: Mode::General,
        }
    }
}

impl EnumSpec {
    pub fn validate(&self) -> Result<()> {
        if self.max_cells == 0 {
            return Err(Error::InvalidParameters("max_cells must be >= 1".into()));
        }
        if self.dims.rows < self.max_cells || self.dims.cols < self.max_cells {
            return Err(Error::InvalidParameters(format!(
                "box {} cannot hold every F1 with {} cells",
                self.dims, self.max_cells
            )));
        }
        Ok(())
    }

    /// Checks the enumeration guard for the largest F1 sizes.
    pub fn check_guard(&self) -> Result<()> {
        for f1 in enumerate_unique_sets(self.max_cells) {
            let candidates = counterpart_count(&f1, self.dims, self.mode);
            if candidates > GUARD_LIMIT {
                return Err(Error::GuardExceeded {
                    candidates,
                    limit: GUARD_LIMIT,
                });
            }
        }
        Ok(())
    }
}

/// Deliberate defects for exercising the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Drop one point from every decomposition before checking it.
    DropStaircasePoint,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub parallel: bool,
    /// Skip the enumeration guard.
    pub allow_large: bool,
    pub fault: Option<Fault>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub checked: u64,
    pub failed: u64,
    /// Failures of a conditional check are recorded but not violations.
    pub asserted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// (index of F1 in enumeration order, rank of F2 among its candidates)
    pub rank: (u64, u64),
    pub check: String,
    pub pair: InstancePair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationSummary {
    pub spec: EnumSpec,
    pub f1_sets: u64,
    pub instances: u64,
    /// Instances with `F2 = F1`.
    pub identical: u64,
    pub checks: BTreeMap<String, Tally>,
    pub first_counterexample: Option<Counterexample>,
}

impl VerificationSummary {
    fn empty(spec: EnumSpec) -> Self {
        VerificationSummary {
            spec,
            f1_sets: 0,
            instances: 0,
            identical: 0,
            checks: BTreeMap::new(),
            first_counterexample: None,
        }
    }

    pub fn violations(&self) -> u64 {
        self.checks
            .values()
            .filter(|t| t.asserted)
            .map(|t| t.failed)
            .sum()
    }

    pub fn is_clean(&self) -> bool {
        self.violations() == 0
    }

    pub fn merge(mut self, other: VerificationSummary) -> Self {
        self.f1_sets += other.f1_sets;
        self.instances += other.instances;
        self.identical += other.identical;
        for (name, t) in other.checks {
            let e = self.checks.entry(name).or_insert(Tally {
                asserted: t.asserted,
                ..Tally::default()
            });
            e.checked += t.checked;
            e.failed += t.failed;
        }
        self.first_counterexample = match (self.first_counterexample, other.first_counterexample) {
            (Some(a), Some(b)) => Some(if b.rank < a.rank { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }

    fn record(
        &mut self,
        check: &str,
        asserted: bool,
        ok: bool,
        rank: (u64, u64),
        pair: &InstancePair,
    ) {
        let t = self.checks.entry(check.to_string()).or_insert(Tally {
            asserted,
            ..Tally::default()
        });
        t.checked += 1;
        if ok {
            return;
        }
        t.failed += 1;
        if asserted
            && self
                .first_counterexample
                .as_ref()
                .is_none_or(|c| rank < c.rank)
        {
            self.first_counterexample = Some(Counterexample {
                rank,
                check: check.to_string(),
                pair: pair.clone(),
            });
        }
    }
}

impl fmt::Display for VerificationSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<24}{}", "mode", self.spec.mode.name())?;
        writeln!(f, "{:<24}{}", "max-cells", self.spec.max_cells)?;
        writeln!(f, "{:<24}{}", "box", self.spec.dims)?;
        writeln!(f, "{:<24}{}", "f1-sets", self.f1_sets)?;
        writeln!(f, "{:<24}{}", "instances", self.instances)?;
        writeln!(f, "{:<24}{}", "identical", self.identical)?;
        writeln!(f, "{:<24}{:>12}{:>10}", "check", "checked", "failed")?;
        for (name, t) in &self.checks {
            let label = if t.asserted {
                name.clone()
            } else {
                format!("{name} (cond)")
            };
            writeln!(f, "{:<24}{:>12}{:>10}", label, t.checked, t.failed)?;
        }
        match &self.first_counterexample {
            None => writeln!(f, "{} violations", self.violations()),
            Some(c) => writeln!(
                f,
                "{} violations; first: {} at f1 #{} f2 #{}",
                self.violations(),
                c.check,
                c.rank.0,
                c.rank.1
            ),
        }
    }
}

/// Total L1 difference of the line sums, computed independently of
/// [`crate::instance::metrics`] so parity can be checked before it asserts.
fn total_line_error(f1: &PointSet, f2: &PointSet) -> usize {
    let (a, b) = (projections(f1), projections(f2));
    let rows = a.row_sums().len().max(b.row_sums().len());
    let cols = a.col_sums().len().max(b.col_sums().len());
    (1..=rows)
        .map(|i| a.row_sum(i).abs_diff(b.row_sum(i)))
        .sum::<usize>()
        + (1..=cols)
            .map(|j| a.col_sum(j).abs_diff(b.col_sum(j)))
            .sum::<usize>()
}

fn check_equal_sizes(
    s: &mut VerificationSummary,
    pair: &InstancePair,
    rank: (u64, u64),
    opts: &VerifyOptions,
    prefix: &str,
) {
    let alpha = pair.metrics().alpha;
    let name = |n: &str| format!("{prefix}{n}");
    match decompose_traced(pair) {
        Err(_) => s.record(&name("decompose"), true, false, rank, pair),
        Ok((mut d, trace)) => {
            if opts.fault == Some(Fault::DropStaircasePoint) {
                d.corrupt_for_testing();
            }
            s.record(&name("staircase-count"), true, d.len() == alpha, rank, pair);
            s.record(&name("partition"), true, d.is_exact_partition(), rank, pair);
            let chains = d
                .staircases()
                .iter()
                .all(|st| check_chain(st.steps()).is_ok());
            s.record(&name("staircase-shape"), true, chains, rank, pair);
            s.record(
                &name("endpoint-balance"),
                true,
                d.endpoint_balance() == (alpha, alpha),
                rank,
                pair,
            );
            let tau_ok = trace.first() == Some(&(2 * alpha))
                && trace.last() == Some(&0)
                && trace.windows(2).all(|w| w[0] == w[1] + 2);
            s.record(&name("tau-trace"), true, tau_ok, rank, pair);
        }
    }
    match rebalance(pair) {
        Err(_) => s.record(&name("rebalance"), true, false, rank, pair),
        Ok(r) => {
            let (m, n) = (pair.metrics(), r.metrics());
            let ok = n.row_error == 0
                && n.alpha <= m.alpha
                && n.sym_diff == m.sym_diff
                && n.p == m.p
                && n.f2_size == m.f2_size
                && r.f1() == pair.f1();
            s.record(&name("rebalance"), true, ok, rank, pair);
        }
    }
    check_bounds(s, pair, rank, prefix);
}

fn check_bounds(s: &mut VerificationSummary, pair: &InstancePair, rank: (u64, u64), prefix: &str) {
    match report(pair) {
        Err(_) => s.record(&format!("{prefix}report"), true, false, rank, pair),
        Ok(rep) => {
            for e in &rep.entries {
                if e.applicability == Applicability::Informational {
                    continue;
                }
                let asserted = e.applicability == Applicability::Asserted;
                s.record(
                    &format!("{prefix}bound:{}", e.name),
                    asserted,
                    e.holds,
                    rank,
                    pair,
                );
            }
        }
    }
}

fn check_instance(
    s: &mut VerificationSummary,
    f1: &PointSet,
    f2: PointSet,
    rank: (u64, u64),
    opts: &VerifyOptions,
) {
    s.instances += 1;
    let parity_ok = total_line_error(f1, &f2).is_multiple_of(2);
    if !parity_ok {
        // metrics() would panic on this pair; record it and stop
        let t = s.checks.entry("parity".into()).or_insert(Tally {
            asserted: true,
            ..Tally::default()
        });
        t.checked += 1;
        t.failed += 1;
        return;
    }
    let pair = InstancePair::new(f1.clone(), f2);
    s.record("parity", true, true, rank, &pair);
    if pair.metrics().alpha == 0 {
        s.identical += 1;
    }
    let m = *pair.metrics();
    if m.f1_size == m.f2_size {
        check_equal_sizes(s, &pair, rank, opts, "");
        return;
    }
    check_bounds(s, &pair, rank, "");
    match equalize(&pair) {
        Err(_) => s.record("equalize", true, false, rank, &pair),
        Ok(eq) => {
            let n = eq.metrics();
            let alpha_ok = if m.f2_size < m.f1_size {
                n.alpha == m.alpha
            } else {
                n.alpha <= m.alpha
            };
            let ok = n.f2_size == m.f1_size && alpha_ok && n.p == m.p && eq.f1() == pair.f1();
            s.record("equalize", true, ok, rank, &pair);
            if ok {
                check_equal_sizes(s, &eq, rank, opts, "equalized:");
            }
        }
    }
}

fn verify_one_f1(
    spec: &EnumSpec,
    index: usize,
    f1: &PointSet,
    opts: &VerifyOptions,
) -> VerificationSummary {
    let mut s = VerificationSummary::empty(*spec);
    s.f1_sets = 1;
    for (k, f2) in counterparts_unguarded(f1, spec.dims, spec.mode).enumerate() {
        check_instance(&mut s, f1, f2, (index as u64, k as u64), opts);
    }
    s
}

/// Runs every check on every enumerated instance.
pub fn verify_all(spec: &EnumSpec, opts: &VerifyOptions) -> Result<VerificationSummary> {
    spec.validate()?;
    if !opts.allow_large {
        spec.check_guard()?;
    }
    let f1s: Vec<PointSet> = enumerate_unique_sets(spec.max_cells).collect();
    let empty = || VerificationSummary::empty(*spec);
    let summary = if opts.parallel {
        f1s.par_iter()
            .enumerate()
            .map(|(i, f1)| verify_one_f1(spec, i, f1, opts))
            .reduce(empty, VerificationSummary::merge)
    } else {
        f1s.iter()
            .enumerate()
            .map(|(i, f1)| verify_one_f1(spec, i, f1, opts))
            .fold(empty(), VerificationSummary::merge)
    };
    Ok(summary)
}

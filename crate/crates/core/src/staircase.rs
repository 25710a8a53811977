//! Staircase decomposition of `F1 △ F2`.
//!
//! A staircase is stored from its bottom-left point to its top-right
//! point. With F1 in triangular shape, an F1-only point is always followed
//! by an F2-only point further right in the same row, and an F2-only point
//! by an F1-only point higher up in the same column.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::instance::InstancePair;
use crate::lattice::{LatticePoint, PointSet};
use crate::projection::projections;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// In `F1 \ F2`.
    F1Only,
    /// In `F2 \ F1`.
    F2Only,
}

impl Side {
    /// 1 or 2, as written in certificates.
    pub fn tag(self) -> u8 {
        match self {
            Side::F1Only => 1,
            Side::F2Only => 2,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::F1Only => Side::F2Only,
            Side::F2Only => Side::F1Only,
        }
    }
}

/// Ways a point chain can fail to be a staircase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StaircaseDefect {
    Empty,
    LabelsRepeat { at: usize },
    BadRowLink { at: usize },
    BadColumnLink { at: usize },
}

impl fmt::Display for StaircaseDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StaircaseDefect::Empty => write!(f, "empty staircase"),
            StaircaseDefect::LabelsRepeat { at } => {
                write!(f, "labels do not alternate at step {at}")
            }
            StaircaseDefect::BadRowLink { at } => {
                write!(f, "step {at}: F1 point must be followed by an F2 point to its right in the same row")
            }
            StaircaseDefect::BadColumnLink { at } => {
                write!(f, "step {at}: F2 point must be followed by an F1 point above it in the same column")
            }
        }
    }
}

/// Checks the chain invariants of a bottom-left to top-right staircase.
pub fn check_chain(steps: &[(LatticePoint, Side)]) -> std::result::Result<(), StaircaseDefect> {
    if steps.is_empty() {
        return Err(StaircaseDefect::Empty);
    }
    for (k, w) in steps.windows(2).enumerate() {
        let ((p, sp), (q, sq)) = (w[0], w[1]);
        if sp == sq {
            return Err(StaircaseDefect::LabelsRepeat { at: k + 1 });
        }
        match sp {
            Side::F1Only if !(q.row() == p.row() && q.col() > p.col()) => {
                return Err(StaircaseDefect::BadRowLink { at: k + 1 });
            }
            Side::F2Only if !(q.col() == p.col() && q.row() < p.row()) => {
                return Err(StaircaseDefect::BadColumnLink { at: k + 1 });
            }
            _ => {}
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Staircase {
    steps: Vec<(LatticePoint, Side)>,
}

impl Staircase {
    pub fn new(steps: Vec<(LatticePoint, Side)>) -> std::result::Result<Self, StaircaseDefect> {
        check_chain(&steps)?;
        Ok(Staircase { steps })
    }

    pub fn steps(&self) -> &[(LatticePoint, Side)] {
        &self.steps
    }

    pub fn points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        self.steps.iter().map(|&(p, _)| p)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Labels of the first and last point (the same point twice for a
    /// one-point staircase).
    pub fn endpoint_sides(&self) -> (Side, Side) {
        (self.steps[0].1, self.steps[self.steps.len() - 1].1)
    }
}

impl fmt::Display for Staircase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (p, s)) in self.steps.iter().enumerate() {
            if k > 0 {
                f.write_str(" -> ")?;
            }
            write!(f, "{p}/{}", s.tag())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    staircases: Vec<Staircase>,
    source: InstancePair,
}

impl Decomposition {
    pub fn staircases(&self) -> &[Staircase] {
        &self.staircases
    }

    pub fn source(&self) -> &InstancePair {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.staircases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.staircases.is_empty()
    }

    /// Counts endpoints labeled (F1-only, F2-only); a one-point staircase
    /// contributes its point twice.
    pub fn endpoint_balance(&self) -> (usize, usize) {
        let mut counts = (0, 0);
        for s in &self.staircases {
            let (a, b) = s.endpoint_sides();
            for side in [a, b] {
                match side {
                    Side::F1Only => counts.0 += 1,
                    Side::F2Only => counts.1 += 1,
                }
            }
        }
        counts
    }

    /// True when the staircases are pairwise disjoint and cover exactly
    /// `F1 △ F2` with correct labels.
    pub fn is_exact_partition(&self) -> bool {
        let (f1, f2) = (self.source.f1(), self.source.f2());
        let mut seen = BTreeSet::new();
        for s in &self.staircases {
            for &(p, side) in s.steps() {
                let ok = match side {
                    Side::F1Only => f1.contains(&p) && !f2.contains(&p),
                    Side::F2Only => f2.contains(&p) && !f1.contains(&p),
                };
                if !ok || !seen.insert(p) {
                    return false;
                }
            }
        }
        seen.len() == self.source.metrics().sym_diff
    }

    /// Test hook: drops the last point of the first staircase.
    #[doc(hidden)]
    pub fn corrupt_for_testing(&mut self) {
        if let Some(s) = self.staircases.first_mut() {
            s.steps.pop();
            if s.steps.is_empty() {
                self.staircases.remove(0);
            }
        }
    }
}

/// Labels every point of `F1 △ F2`.
pub fn labeled_difference(f1: &PointSet, f2: &PointSet) -> Vec<(LatticePoint, Side)> {
    let mut out: Vec<_> = f1
        .difference(f2)
        .iter()
        .map(|&p| (p, Side::F1Only))
        .chain(f2.difference(f1).iter().map(|&p| (p, Side::F2Only)))
        .collect();
    out.sort();
    out
}

/// `sum_i |rho_i(A)| + sum_j |sigma_j(A)|`, where `rho_i` and `sigma_j` are
/// the signed (F1-only minus F2-only) counts of row `i` and column `j`.
pub fn tau<I>(labeled: I) -> usize
where
    I: IntoIterator<Item = (LatticePoint, Side)>,
{
    let mut rho: BTreeMap<usize, i64> = BTreeMap::new();
    let mut sigma: BTreeMap<usize, i64> = BTreeMap::new();
    for (p, side) in labeled {
        let d = match side {
            Side::F1Only => 1,
            Side::F2Only => -1,
        };
        *rho.entry(p.row()).or_default() += d;
        *sigma.entry(p.col()).or_default() += d;
    }
    rho.values()
        .chain(sigma.values())
        .map(|v| v.unsigned_abs() as usize)
        .sum()
}

fn require_decomposable(pair: &InstancePair) -> Result<()> {
    let m = pair.metrics();
    if m.f1_size != m.f2_size {
        return Err(Error::SizeMismatch {
            f1: m.f1_size,
            f2: m.f2_size,
        });
    }
    pair.check_canonical_unique()
}

type Index = BTreeMap<usize, BTreeSet<usize>>;

/// Unused points of the symmetric difference, indexed for the four
/// extension moves.
struct Pool {
    unused: BTreeMap<LatticePoint, Side>,
    f1_by_row: Index,
    f1_by_col: Index,
    f2_by_row: Index,
    f2_by_col: Index,
}

impl Pool {
    fn new(labeled: &[(LatticePoint, Side)]) -> Self {
        let mut pool = Pool {
            unused: BTreeMap::new(),
            f1_by_row: Index::new(),
            f1_by_col: Index::new(),
            f2_by_row: Index::new(),
            f2_by_col: Index::new(),
        };
        for &(p, side) in labeled {
            pool.unused.insert(p, side);
            let (by_row, by_col) = pool.indices_mut(side);
            by_row.entry(p.row()).or_default().insert(p.col());
            by_col.entry(p.col()).or_default().insert(p.row());
        }
        pool
    }

    fn indices_mut(&mut self, side: Side) -> (&mut Index, &mut Index) {
        match side {
            Side::F1Only => (&mut self.f1_by_row, &mut self.f1_by_col),
            Side::F2Only => (&mut self.f2_by_row, &mut self.f2_by_col),
        }
    }

    fn take(&mut self, p: LatticePoint) -> Side {
        let side = self.unused.remove(&p).expect("point already used");
        let (by_row, by_col) = self.indices_mut(side);
        by_row.get_mut(&p.row()).map(|s| s.remove(&p.col()));
        by_col.get_mut(&p.col()).map(|s| s.remove(&p.row()));
        side
    }

    fn point(row: usize, col: usize) -> LatticePoint {
        LatticePoint::new(row, col).expect("pool coordinates are positive")
    }

    /// Next point towards the top-right end.
    fn forward(&self, p: LatticePoint, side: Side) -> Option<LatticePoint> {
        match side {
            Side::F1Only => self
                .f2_by_row
                .get(&p.row())
                .and_then(|cols| cols.range(p.col() + 1..).next())
                .map(|&c| Self::point(p.row(), c)),
            Side::F2Only => self
                .f1_by_col
                .get(&p.col())
                .and_then(|rows| rows.range(..p.row()).next_back())
                .map(|&r| Self::point(r, p.col())),
        }
    }

    /// Next point towards the bottom-left end.
    fn backward(&self, p: LatticePoint, side: Side) -> Option<LatticePoint> {
        match side {
            Side::F1Only => self
                .f2_by_col
                .get(&p.col())
                .and_then(|rows| rows.range(p.row() + 1..).next())
                .map(|&r| Self::point(r, p.col())),
            Side::F2Only => self
                .f1_by_row
                .get(&p.row())
                .and_then(|cols| cols.range(..p.col()).next_back())
                .map(|&c| Self::point(p.row(), c)),
        }
    }

    fn grow_chain(&mut self) -> Option<Vec<(LatticePoint, Side)>> {
        let (&seed, _) = self.unused.iter().next()?;
        let side = self.take(seed);
        let mut chain = VecDeque::from([(seed, side)]);
        loop {
            let &(last, side) = chain.back().unwrap();
            let Some(next) = self.forward(last, side) else {
                break;
            };
            let s = self.take(next);
            chain.push_back((next, s));
        }
        loop {
            let &(first, side) = chain.front().unwrap();
            let Some(prev) = self.backward(first, side) else {
                break;
            };
            let s = self.take(prev);
            chain.push_front((prev, s));
        }
        Some(chain.into())
    }
}

fn decompose_inner(
    pair: &InstancePair,
    mut trace: Option<&mut Vec<usize>>,
) -> Result<Decomposition> {
    require_decomposable(pair)?;
    let labeled = labeled_difference(pair.f1(), pair.f2());
    let mut pool = Pool::new(&labeled);
    if let Some(t) = trace.as_deref_mut() {
        t.push(tau(labeled.iter().copied()));
    }
    let mut staircases = Vec::new();
    while let Some(chain) = pool.grow_chain() {
        debug_assert!(check_chain(&chain).is_ok());
        staircases.push(Staircase { steps: chain });
        if let Some(t) = trace.as_deref_mut() {
            t.push(tau(pool.unused.iter().map(|(&p, &s)| (p, s))));
        }
    }
    Ok(Decomposition {
        staircases,
        source: pair.clone(),
    })
}

/// Splits `F1 △ F2` into staircases by repeatedly growing a chain from
/// the smallest unused point until neither end extends.
///
/// Requires `|F1| = |F2|` and F1 uniquely determined in triangular form.
pub fn decompose(pair: &InstancePair) -> Result<Decomposition> {
    decompose_inner(pair, None)
}

/// Like [`decompose`], also returning `tau` of the remaining set before the
/// first and after every deletion.
pub fn decompose_traced(pair: &InstancePair) -> Result<(Decomposition, Vec<usize>)> {
    let mut trace = Vec::new();
    let d = decompose_inner(pair, Some(&mut trace))?;
    Ok((d, trace))
}

/// Line sums of a set as dense 1-based vectors of the given lengths.
fn sums(set: &PointSet, rows: usize, cols: usize) -> (Vec<usize>, Vec<usize>) {
    let pr = projections(set);
    (
        (0..=rows).map(|i| pr.row_sum(i)).collect(),
        (0..=cols).map(|j| pr.col_sum(j)).collect(),
    )
}

/// Picks the F2-only point of `row` to remove: the leftmost one in a
/// column where F2 exceeds F1, else the leftmost one.
fn removable_in_row(
    f1: &PointSet,
    f2: &PointSet,
    row: usize,
    c1: &[usize],
    c2: &[usize],
) -> LatticePoint {
    let candidates: Vec<LatticePoint> = f2
        .iter()
        .filter(|p| p.row() == row && !f1.contains(p))
        .copied()
        .collect();
    candidates
        .iter()
        .find(|p| c2[p.col()] > c1[p.col()])
        .or_else(|| candidates.first())
        .copied()
        .expect("row with surplus F2 points has an F2-only point")
}

/// Moves F2-only points between rows until every row sum of F2 matches F1,
/// so all projection error sits in the columns. `alpha` never increases;
/// `|F2|`, `p` and `|F1 △ F2|` are unchanged.
pub fn rebalance(pair: &InstancePair) -> Result<InstancePair> {
    require_decomposable(pair)?;
    let f1 = pair.f1().clone();
    let mut f2 = pair.f2().clone();
    let rows = f1.max_row().max(f2.max_row());
    let r1: Vec<usize> = {
        let pr = projections(&f1);
        (0..=rows).map(|i| pr.row_sum(i)).collect()
    };
    loop {
        let width = f1.max_col().max(f2.max_col()) + 1;
        let (r2, c2) = sums(&f2, rows, width);
        let (_, c1) = sums(&f1, rows, width);
        let Some(x) = (1..=rows).find(|&i| r1[i] < r2[i]) else {
            break;
        };
        let x_to = (1..=rows)
            .find(|&i| r1[i] > r2[i])
            .expect("equal sizes: a deficit row balances every surplus row");

        let out = removable_in_row(&f1, &f2, x, &c1, &c2);
        f2.remove(&out);
        let mut c2 = c2;
        c2[out.col()] -= 1;

        let free = |j: usize| !f1.contains_coords(x_to, j) && !f2.contains_coords(x_to, j);
        let target = (1..=width)
            .find(|&j| free(j) && c2[j] < c1[j])
            .or_else(|| (1..=width).find(|&j| free(j)))
            .expect("a row of width+1 columns has a free cell");
        f2.insert(LatticePoint::new(x_to, target)?);
    }
    Ok(InstancePair::new(f1, f2))
}

/// Adds or removes F2 points until `|F2| = |F1|`.
///
/// Growing adds `(i, j)` with `j > b` in a row where F1 has more points,
/// which keeps `alpha` fixed. Shrinking removes F2-only points from rows
/// where F2 has more points, which never increases `alpha`.
pub fn equalize(pair: &InstancePair) -> Result<InstancePair> {
    pair.check_canonical_unique()?;
    let f1 = pair.f1().clone();
    let mut f2 = pair.f2().clone();
    let b = pair.metrics().b;
    let rows = f1.max_row().max(f2.max_row());
    while f2.len() != f1.len() {
        let width = f1.max_col().max(f2.max_col()) + 1;
        let (r1, c1) = sums(&f1, rows, width);
        let (r2, c2) = sums(&f2, rows, width);
        if f2.len() < f1.len() {
            let i = (1..=rows)
                .find(|&i| r1[i] > r2[i])
                .expect("smaller F2 has a row with fewer points");
            let j = (b + 1..)
                .find(|&j| !f2.contains_coords(i, j))
                .expect("unbounded search");
            f2.insert(LatticePoint::new(i, j)?);
        } else {
            let i = (1..=rows)
                .find(|&i| r1[i] < r2[i])
                .expect("larger F2 has a row with more points");
            let out = removable_in_row(&f1, &f2, i, &c1, &c2);
            f2.remove(&out);
        }
    }
    Ok(InstancePair::new(f1, f2))
}

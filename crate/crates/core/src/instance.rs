//! Instance pairs `(F1, F2)`, their stability metrics and canonical
//! renumbering.

use crate::error::{Error, Result};
use crate::lattice::PointSet;
use crate::projection::{is_uniquely_determined, projections, triangular_realization, Projections};

/// Metrics of a pair. `alpha` is half the total L1 distance between the
/// projections; `a` and `b` count the rows and columns occupied by F1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Metrics {
    pub alpha: usize,
    pub p: usize,
    pub sym_diff: usize,
    pub a: usize,
    pub b: usize,
    pub f1_size: usize,
    pub f2_size: usize,
    pub row_error: usize,
    pub col_error: usize,
}

impl Metrics {
    /// Half of `|F1 △ F2|`; `None` when the symmetric difference is odd,
    /// which needs `|F1| != |F2|`.
    pub fn u(&self) -> Option<usize> {
        self.sym_diff.is_multiple_of(2).then_some(self.sym_diff / 2)
    }

    pub fn total_error(&self) -> usize {
        self.row_error + self.col_error
    }
}

fn line_error(a: &[usize], b: &[usize]) -> usize {
    (0..a.len().max(b.len()))
        .map(|k| {
            let x = a.get(k).copied().unwrap_or(0);
            let y = b.get(k).copied().unwrap_or(0);
            x.abs_diff(y)
        })
        .sum()
}

/// Computes the metrics of `(f1, f2)` in their current numbering.
///
/// Panics if the total projection error is odd, which no pair of finite
/// sets can produce.
pub fn metrics(f1: &PointSet, f2: &PointSet) -> Metrics {
    let (p1, p2) = (projections(f1), projections(f2));
    let row_error = line_error(p1.row_sums(), p2.row_sums());
    let col_error = line_error(p1.col_sums(), p2.col_sums());
    assert!(
        (row_error + col_error).is_multiple_of(2),
        "parity violated: total projection error {} is odd",
        row_error + col_error
    );
    let p = f1.intersection_len(f2);
    Metrics {
        alpha: (row_error + col_error) / 2,
        p,
        sym_diff: f1.len() + f2.len() - 2 * p,
        a: f1.occupied_rows(),
        b: f1.occupied_cols(),
        f1_size: f1.len(),
        f2_size: f2.len(),
        row_error,
        col_error,
    }
}

/// The unit of analysis: two point sets with their metrics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstancePair {
    f1: PointSet,
    f2: PointSet,
    metrics: Metrics,
}

impl InstancePair {
    pub fn new(f1: PointSet, f2: PointSet) -> Self {
        let metrics = metrics(&f1, &f2);
        InstancePair { f1, f2, metrics }
    }

    pub fn f1(&self) -> &PointSet {
        &self.f1
    }

    pub fn f2(&self) -> &PointSet {
        &self.f2
    }

    pub fn metrics(&self) -> &Metrics {
        &self.metrics
    }

    pub fn into_sets(self) -> (PointSet, PointSet) {
        (self.f1, self.f2)
    }

    /// Checks that F1 is uniquely determined and already has triangular
    /// shape in the current numbering.
    pub fn check_canonical_unique(&self) -> Result<()> {
        if self.f1.is_empty() {
            return Err(Error::EmptyF1);
        }
        let pr = projections(&self.f1);
        if !is_uniquely_determined(&pr)? {
            return Err(Error::NotUnique);
        }
        match triangular_realization(&pr) {
            Ok(t) if t == self.f1 => Ok(()),
            _ => Err(Error::NotCanonical),
        }
    }

    pub fn f1_projections(&self) -> Projections {
        projections(&self.f1)
    }

    pub fn f2_projections(&self) -> Projections {
        projections(&self.f2)
    }
}

/// A 1-based index map: `new_index(i)` is where old line `i` goes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn new_index(&self, old: usize) -> usize {
        self.0[old - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &v)| v == k + 1)
    }
}

#[derive(Clone, Debug)]
pub struct Canonical {
    pub row_perm: Permutation,
    pub col_perm: Permutation,
    pub pair: InstancePair,
}

/// Stable descending order of `sums` over `n` lines, as an index map.
fn sorting_permutation(sums: &[usize], n: usize) -> Permutation {
    let sum = |k: usize| sums.get(k).copied().unwrap_or(0);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| std::cmp::Reverse(sum(x)));
    let mut map = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        map[old] = new + 1;
    }
    Permutation(map)
}

/// Renumbers rows and columns so that F1's line sums are non-increasing,
/// applying the same renumbering to F2. Ties keep their original order.
pub fn canonicalize(f1: &PointSet, f2: &PointSet) -> Result<Canonical> {
    if f1.is_empty() {
        return Err(Error::EmptyF1);
    }
    let pr = projections(f1);
    let n_rows = f1.max_row().max(f2.max_row());
    let n_cols = f1.max_col().max(f2.max_col());
    let row_perm = sorting_permutation(pr.row_sums(), n_rows);
    let col_perm = sorting_permutation(pr.col_sums(), n_cols);
    let pair = InstancePair::new(
        f1.relabel(&row_perm.0, &col_perm.0),
        f2.relabel(&row_perm.0, &col_perm.0),
    );
    Ok(Canonical {
        row_perm,
        col_perm,
        pair,
    })
}

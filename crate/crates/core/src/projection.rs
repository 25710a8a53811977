//! Row and column sums, the conjugate-partition uniqueness test and two
//! ways of realizing a projection pair.

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, PointSet};

/// Row and column sums of a point set. Index 0 holds line 1; trailing zero
/// sums are trimmed, so lines past the end have sum 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Projections {
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
}

impl Projections {
    pub fn new(mut row_sums: Vec<usize>, mut col_sums: Vec<usize>) -> Self {
        trim(&mut row_sums);
        trim(&mut col_sums);
        Projections { row_sums, col_sums }
    }

    pub fn of(set: &PointSet) -> Self {
        let mut row_sums = vec![0; set.max_row()];
        let mut col_sums = vec![0; set.max_col()];
        for p in set {
            row_sums[p.row() - 1] += 1;
            col_sums[p.col() - 1] += 1;
        }
        Projections { row_sums, col_sums }
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    /// Sum of row `i` (1-based); 0 past the stored range.
    pub fn row_sum(&self, i: usize) -> usize {
        i.checked_sub(1)
            .and_then(|k| self.row_sums.get(k))
            .copied()
            .unwrap_or(0)
    }

    /// Sum of column `j` (1-based); 0 past the stored range.
    pub fn col_sum(&self, j: usize) -> usize {
        j.checked_sub(1)
            .and_then(|k| self.col_sums.get(k))
            .copied()
            .unwrap_or(0)
    }

    pub fn row_total(&self) -> usize {
        self.row_sums.iter().sum()
    }

    pub fn col_total(&self) -> usize {
        self.col_sums.iter().sum()
    }

    fn check_consistent(&self) -> Result<()> {
        let (rows, cols) = (self.row_total(), self.col_total());
        if rows != cols {
            return Err(Error::NotAProjectionPair { rows, cols });
        }
        Ok(())
    }
}

fn trim(v: &mut Vec<usize>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Shorthand for [`Projections::of`].
pub fn projections(set: &PointSet) -> Projections {
    Projections::of(set)
}

/// Conjugate partition: entry `j - 1` counts the parts that are `>= j`.
/// The input need not be sorted; zero parts are ignored.
pub fn conjugate(parts: &[usize]) -> Vec<usize> {
    let largest = parts.iter().copied().max().unwrap_or(0);
    (1..=largest)
        .map(|j| parts.iter().filter(|&&r| r >= j).count())
        .collect()
}

fn sorted_desc(v: &[usize]) -> Vec<usize> {
    let mut s: Vec<usize> = v.iter().copied().filter(|&x| x > 0).collect();
    s.sort_unstable_by(|a, b| b.cmp(a));
    s
}

/// Decides uniqueness from the sums alone: after sorting, the column sums
/// must be the conjugate of the row sums.
pub fn is_uniquely_determined(pr: &Projections) -> Result<bool> {
    pr.check_consistent()?;
    let rows = sorted_desc(&pr.row_sums);
    let cols = sorted_desc(&pr.col_sums);
    Ok(conjugate(&rows) == cols)
}

/// The triangular set `{(i, j) : 1 <= j <= r_i}` for uniquely determined
/// projections that are already in non-increasing order.
pub fn triangular_realization(pr: &Projections) -> Result<PointSet> {
    if !is_uniquely_determined(pr)? {
        return Err(Error::NotUnique);
    }
    let sorted_rows = pr.row_sums.windows(2).all(|w| w[0] >= w[1]);
    let sorted_cols = pr.col_sums.windows(2).all(|w| w[0] >= w[1]);
    if !sorted_rows || !sorted_cols || pr.row_sums.contains(&0) {
        return Err(Error::NotCanonical);
    }
    let mut set = PointSet::new();
    for (i, &r) in pr.row_sums.iter().enumerate() {
        for j in 1..=r {
            set.insert(LatticePoint::new(i + 1, j)?);
        }
    }
    Ok(set)
}

/// Greedy reconstruction: columns in non-increasing sum order, each filled
/// at the rows with the largest residual sums (ties to the smaller row).
pub fn ryser_reconstruct(pr: &Projections) -> Result<PointSet> {
    if pr.check_consistent().is_err() {
        return Err(Error::NoRealization);
    }
    let mut residual = pr.row_sums.clone();
    let mut col_order: Vec<usize> = (0..pr.col_sums.len()).collect();
    col_order.sort_by(|&a, &b| pr.col_sums[b].cmp(&pr.col_sums[a]).then(a.cmp(&b)));

    let mut set = PointSet::new();
    let mut rows: Vec<usize> = (0..residual.len()).collect();
    for j in col_order {
        let need = pr.col_sums[j];
        if need == 0 {
            continue;
        }
        rows.sort_by(|&a, &b| residual[b].cmp(&residual[a]).then(a.cmp(&b)));
        if rows.len() < need || residual[rows[need - 1]] == 0 {
            return Err(Error::NoRealization);
        }
        for &i in &rows[..need] {
            residual[i] -= 1;
            set.insert(LatticePoint::new(i + 1, j + 1)?);
        }
    }
    if residual.iter().any(|&r| r != 0) {
        return Err(Error::NoRealization);
    }
    Ok(set)
}

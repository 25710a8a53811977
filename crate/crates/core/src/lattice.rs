//! Lattice points and finite point sets.
//!
//! Coordinates are 1-based in matrix orientation: row 1 is the top row and
//! column 1 the leftmost column.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint {
    row: usize,
    col: usize,
}

impl LatticePoint {
    pub fn new(row: usize, col: usize) -> Result<Self> {
        if row == 0 || col == 0 {
            return Err(Error::ZeroCoordinate { row, col });
        }
        Ok(LatticePoint { row, col })
    }

    #[inline]
    pub fn row(&self) -> usize {
        self.row
    }

    #[inline]
    pub fn col(&self) -> usize {
        self.col
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// A finite set of lattice points, iterated in (row, col) order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PointSet {
    points: BTreeSet<LatticePoint>,
}

impl PointSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a set from `(row, col)` pairs. Duplicates collapse.
    pub fn from_coords<I>(coords: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        coords
            .into_iter()
            .map(|(r, c)| LatticePoint::new(r, c))
            .collect()
    }

    /// Returns `true` if the point was not already present.
    pub fn insert(&mut self, p: LatticePoint) -> bool {
        self.points.insert(p)
    }

    pub fn remove(&mut self, p: &LatticePoint) -> bool {
        self.points.remove(p)
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.points.contains(p)
    }

    pub fn contains_coords(&self, row: usize, col: usize) -> bool {
        row >= 1 && col >= 1 && self.points.contains(&LatticePoint { row, col })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &LatticePoint> + '_ {
        self.points.iter()
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        self.points.intersection(&other.points).copied().collect()
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        self.points.difference(&other.points).copied().collect()
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        self.points.union(&other.points).copied().collect()
    }

    pub fn symmetric_difference(&self, other: &PointSet) -> PointSet {
        self.points
            .symmetric_difference(&other.points)
            .copied()
            .collect()
    }

    pub fn intersection_len(&self, other: &PointSet) -> usize {
        self.points.intersection(&other.points).count()
    }

    /// Largest occupied row index, 0 when empty.
    pub fn max_row(&self) -> usize {
        self.points.iter().map(|p| p.row).max().unwrap_or(0)
    }

    /// Largest occupied column index, 0 when empty.
    pub fn max_col(&self) -> usize {
        self.points.iter().map(|p| p.col).max().unwrap_or(0)
    }

    /// Number of distinct rows that contain a point.
    pub fn occupied_rows(&self) -> usize {
        self.points
            .iter()
            .map(|p| p.row)
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// Number of distinct columns that contain a point.
    pub fn occupied_cols(&self) -> usize {
        self.points
            .iter()
            .map(|p| p.col)
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// Applies 1-based index maps to every point. `rows[i - 1]` is the new
    /// index of row `i`; the maps must cover every occupied index.
    pub(crate) fn relabel(&self, rows: &[usize], cols: &[usize]) -> PointSet {
        self.points
            .iter()
            .map(|p| LatticePoint {
                row: rows[p.row - 1],
                col: cols[p.col - 1],
            })
            .collect()
    }
}

impl FromIterator<LatticePoint> for PointSet {
    fn from_iter<I: IntoIterator<Item = LatticePoint>>(iter: I) -> Self {
        PointSet {
            points: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a LatticePoint;
    type IntoIter = std::collections::btree_set::Iter<'a, LatticePoint>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coordinates_rejected() {
        assert!(LatticePoint::new(0, 1).is_err());
        assert!(LatticePoint::new(1, 0).is_err());
        assert!(LatticePoint::new(1, 1).is_ok());
    }

    #[test]
    fn set_semantics() {
        let s = PointSet::from_coords([(1, 1), (1, 1), (2, 3)]).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains_coords(2, 3));
        assert!(!s.contains_coords(3, 2));
        assert!(!s.contains_coords(0, 0));
        assert_eq!(s.max_row(), 2);
        assert_eq!(s.max_col(), 3);
        assert_eq!(s.to_string(), "{(1,1),(2,3)}");
    }

    #[test]
    fn set_algebra() {
        let a = PointSet::from_coords([(1, 1), (1, 2)]).unwrap();
        let b = PointSet::from_coords([(1, 2), (2, 1)]).unwrap();
        assert_eq!(a.intersection(&b), PointSet::from_coords([(1, 2)]).unwrap());
        assert_eq!(
            a.symmetric_difference(&b),
            PointSet::from_coords([(1, 1), (2, 1)]).unwrap()
        );
        assert_eq!(a.union(&b).len(), 3);
        assert_eq!(a.intersection_len(&b), 1);
    }
}

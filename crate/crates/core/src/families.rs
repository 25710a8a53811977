//! The three extremal constructions, emitted directly in canonical
//! coordinates.

use std::fmt;

use crate::error::{Error, Result};
use crate::instance::InstancePair;
use crate::lattice::{LatticePoint, PointSet};

/// Largest `m` accepted by the power-of-two families.
pub const MAX_M: u32 = 16;
/// Largest `|F1|` accepted for the third family.
pub const MAX_EXAMPLE3_SIZE: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    /// Disjoint family with `alpha = 2^m`.
    Example1 { m: u32 },
    /// Overlapping family with `p = 2^k - 1`.
    Example2 { k: u32, m: u32 },
    /// Square core with symmetric arms and a trailing F2 anti-diagonal.
    Example3 { n: usize, alpha: usize },
}

/// Closed-form metrics of a family member.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub alpha: u64,
    pub p: u64,
    pub f1_size: u64,
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Example1 { m } => write!(f, "example1 m={m}"),
            FamilySpec::Example2 { k, m } => write!(f, "example2 k={k} m={m}"),
            FamilySpec::Example3 { n, alpha } => write!(f, "example3 n={n} alpha={alpha}"),
        }
    }
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        match *self {
            FamilySpec::Example1 { m } => {
                if !(1..=MAX_M).contains(&m) {
                    return bad(format!("example1 needs 1 <= m <= {MAX_M}, got m={m}"));
                }
            }
            FamilySpec::Example2 { k, m } => {
                if k < 2 || m < 2 * k - 2 || m > MAX_M {
                    return bad(format!(
                        "example2 needs k >= 2 and 2k-2 <= m <= {MAX_M}, got k={k} m={m}"
                    ));
                }
            }
            FamilySpec::Example3 { n, alpha } => {
                if n < 1 || alpha < 1 {
                    return bad(format!(
                        "example3 needs n >= 1 and alpha >= 1, got n={n} alpha={alpha}"
                    ));
                }
                let size = (n as u128).pow(2) * (1 + alpha as u128) + (n * alpha) as u128;
                if size > MAX_EXAMPLE3_SIZE as u128 {
                    return bad(format!(
                        "example3 with |F1|={size} exceeds {MAX_EXAMPLE3_SIZE}"
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn closed_form(&self) -> Result<ClosedForm> {
        self.validate()?;
        Ok(match *self {
            FamilySpec::Example1 { m } => {
                let two_m = 1u64 << m;
                ClosedForm {
                    alpha: two_m,
                    p: 0,
                    f1_size: two_m + m as u64 * (two_m / 2),
                }
            }
            FamilySpec::Example2 { k, m } => {
                let (two_m, two_k) = (1u64 << m, 1u64 << k);
                let (m64, k64) = (m as u64, k as u64);
                ClosedForm {
                    alpha: two_m - two_k + 1,
                    p: two_k - 1,
                    // 2^m + m 2^(m-1) + 2^(k-1) - k 2^(k-1)
                    f1_size: two_m + m64 * (two_m / 2) + two_k / 2 - k64 * (two_k / 2),
                }
            }
            FamilySpec::Example3 { n, alpha } => {
                let (n, a) = (n as u64, alpha as u64);
                ClosedForm {
                    alpha: a,
                    p: n * n + n * n * a - n * a,
                    f1_size: n * n + n * n * a + n * a,
                }
            }
        })
    }

    pub fn generate(&self) -> Result<InstancePair> {
        self.validate()?;
        Ok(match *self {
            FamilySpec::Example1 { m } => gen_example1(m),
            FamilySpec::Example2 { k, m } => gen_example2(k, m),
            FamilySpec::Example3 { n, alpha } => gen_example3(n, alpha),
        })
    }
}

#[derive(Default)]
struct Builder {
    f1: PointSet,
    f2: PointSet,
}

impl Builder {
    fn pt(i: usize, j: usize) -> LatticePoint {
        LatticePoint::new(i, j).expect("family coordinates are positive")
    }

    fn f1_row(&mut self, i: usize, cols: std::ops::RangeInclusive<usize>) {
        for j in cols {
            self.f1.insert(Self::pt(i, j));
        }
    }

    fn f2_row(&mut self, i: usize, cols: std::ops::RangeInclusive<usize>) {
        for j in cols {
            self.f2.insert(Self::pt(i, j));
        }
    }

    fn both(&mut self, i: usize, j: usize) {
        self.f1.insert(Self::pt(i, j));
        self.f2.insert(Self::pt(i, j));
    }

    fn finish(self) -> InstancePair {
        InstancePair::new(self.f1, self.f2)
    }
}

fn pow2(e: u32) -> usize {
    1usize << e
}

fn gen_example1(m: u32) -> InstancePair {
    let mut b = Builder::default();
    b.f1_row(1, 1..=pow2(m));
    b.f2_row(1, pow2(m) + 1..=pow2(m + 1));
    for l in 0..m {
        for i in pow2(l) + 1..=pow2(l + 1) {
            b.f1_row(i, 1..=pow2(m - l - 1));
            b.f2_row(i, pow2(m - l - 1) + 1..=pow2(m - l));
        }
    }
    b.finish()
}

fn gen_example2(k: u32, m: u32) -> InstancePair {
    let mut b = Builder::default();
    let half_k = pow2(k - 1);
    for j in 1..=half_k {
        b.both(1, j);
    }
    b.f1_row(1, half_k + 1..=pow2(m) - half_k + 1);
    b.f2_row(1, pow2(m) - half_k + 2..=pow2(m + 1) - pow2(k) - half_k + 2);

    for l in 0..=k - 2 {
        let split = pow2(m - l - 1) - pow2(k - l - 2) + 1;
        let end = pow2(m - l) - pow2(k - l - 1) + 1;
        for i in pow2(l) + 1..=pow2(l + 1) {
            b.both(i, 1);
            b.f1_row(i, 2..=split);
            b.f2_row(i, split + 1..=end);
        }
    }
    // empty when m = 2k - 2
    for l in k - 1..=m - k {
        for i in pow2(l) + 1..=pow2(l + 1) {
            b.f1_row(i, 1..=pow2(m - l - 1));
            b.f2_row(i, pow2(m - l - 1) + 1..=pow2(m - l));
        }
    }
    for l in m - k + 1..=m - 1 {
        let lo = pow2(l) - pow2(l + k - m - 1) + 2;
        let hi = pow2(l + 1) - pow2(l + k - m) + 1;
        for i in lo..=hi {
            b.f1_row(i, 1..=pow2(m - l - 1));
            b.f2_row(i, pow2(m - l - 1) + 1..=pow2(m - l));
        }
    }
    b.finish()
}

fn gen_example3(n: usize, alpha: usize) -> InstancePair {
    let mut b = Builder::default();
    for i in 1..=n {
        for j in 1..=n {
            b.both(i, j);
        }
    }
    for i in 1..=n {
        let shared_end = n + (n - i) * alpha;
        let f1_end = shared_end + alpha;
        let f2_end = f1_end + alpha;
        for j in n + 1..=shared_end {
            b.both(i, j);
            b.both(j, i);
        }
        for j in shared_end + 1..=f1_end {
            b.f1.insert(Builder::pt(i, j));
            b.f1.insert(Builder::pt(j, i));
        }
        for j in f1_end + 1..=f2_end {
            b.f2.insert(Builder::pt(i, j));
            // Row 1's F2-only arm is not mirrored into column 1; that column
            // carries the error of alpha and |F2| stays equal to |F1|.
            if i > 1 {
                b.f2.insert(Builder::pt(j, i));
            }
        }
    }
    for t in 1..=alpha {
        b.f2.insert(Builder::pt(n + t, n + alpha + 1 - t));
    }
    b.finish()
}

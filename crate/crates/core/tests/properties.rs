use proptest::prelude::*;

use tomo_core::certificate::{check_certificate, parse_certificate, render_certificate};
use tomo_core::oracle::{count_realizations, partitions};
use tomo_core::pairfile::{parse_pair, render_pair};
use tomo_core::staircase::check_chain;
use tomo_core::*;

const BOX: usize = 7;

fn partition_strategy() -> impl Strategy<Value = Vec<usize>> {
    (1usize..=7).prop_flat_map(|n| {
        let all = partitions(n);
        (0..all.len()).prop_map(move |k| all[k].clone())
    })
}

fn triangular(parts: &[usize]) -> PointSet {
    triangular_realization(&Projections::new(parts.to_vec(), conjugate(parts))).unwrap()
}

fn cells() -> Vec<(usize, usize)> {
    (1..=BOX)
        .flat_map(|r| (1..=BOX).map(move |c| (r, c)))
        .collect()
}

/// Canonical F1 from a partition plus an F2 of the same size in the box.
fn equal_pair() -> impl Strategy<Value = InstancePair> {
    partition_strategy().prop_flat_map(|parts| {
        let n: usize = parts.iter().sum();
        proptest::sample::subsequence(cells(), n).prop_map(move |c| {
            InstancePair::new(triangular(&parts), PointSet::from_coords(c).unwrap())
        })
    })
}

/// Canonical F1 with an F2 of any size up to 9.
fn any_size_pair() -> impl Strategy<Value = InstancePair> {
    (partition_strategy(), 0usize..=9).prop_flat_map(|(parts, m)| {
        proptest::sample::subsequence(cells(), m).prop_map(move |c| {
            InstancePair::new(triangular(&parts), PointSet::from_coords(c).unwrap())
        })
    })
}

fn arbitrary_set() -> impl Strategy<Value = PointSet> {
    proptest::collection::btree_set((1usize..=6, 1usize..=6), 1..12)
        .prop_map(|s| PointSet::from_coords(s).unwrap())
}

proptest! {
    #[test]
    fn triangular_round_trip(parts in partition_strategy()) {
        let pr = Projections::new(parts.clone(), conjugate(&parts));
        prop_assert_eq!(is_uniquely_determined(&pr), Ok(true));
        prop_assert_eq!(projections(&triangular_realization(&pr).unwrap()), pr);
    }

    #[test]
    fn ryser_round_trips(set in arbitrary_set()) {
        let pr = projections(&set);
        let rebuilt = ryser_reconstruct(&pr).unwrap();
        prop_assert_eq!(projections(&rebuilt), pr);
    }

    #[test]
    fn canonicalize_is_idempotent(f1 in arbitrary_set(), f2 in arbitrary_set()) {
        let once = canonicalize(&f1, &f2).unwrap();
        let twice = canonicalize(once.pair.f1(), once.pair.f2()).unwrap();
        prop_assert!(twice.row_perm.is_identity());
        prop_assert!(twice.col_perm.is_identity());
        prop_assert_eq!(&twice.pair, &once.pair);
        let (before, after) = (metrics(&f1, &f2), once.pair.metrics());
        prop_assert_eq!(
            (before.f1_size, before.f2_size, before.p, before.sym_diff, before.alpha),
            (after.f1_size, after.f2_size, after.p, after.sym_diff, after.alpha)
        );
    }

    #[test]
    fn canonicalize_makes_unique_sets_triangular(parts in partition_strategy(), seed in any::<u64>()) {
        // scramble the rows and columns of a triangular set
        let f1 = triangular(&parts);
        let n = 8;
        let mut rows: Vec<usize> = (1..=n).collect();
        let mut cols: Vec<usize> = (1..=n).collect();
        let mut s = seed;
        for v in [&mut rows, &mut cols] {
            for i in (1..v.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                v.swap(i, (s >> 33) as usize % (i + 1));
            }
        }
        let scrambled = PointSet::from_coords(f1.iter().map(|p| (rows[p.row() - 1], cols[p.col() - 1]))).unwrap();
        let c = canonicalize(&scrambled, &PointSet::new()).unwrap();
        prop_assert_eq!(c.pair.f1(), &f1);
    }

    #[test]
    fn parity_is_even(f1 in arbitrary_set(), f2 in arbitrary_set()) {
        let m = metrics(&f1, &f2);
        prop_assert_eq!(m.total_error() % 2, 0);
    }

    #[test]
    fn decomposition_invariants(pair in equal_pair()) {
        let alpha = pair.metrics().alpha;
        let (d, trace) = decompose_traced(&pair).unwrap();
        prop_assert_eq!(d.len(), alpha);
        prop_assert!(d.is_exact_partition());
        prop_assert_eq!(d.endpoint_balance(), (alpha, alpha));
        for s in d.staircases() {
            prop_assert!(check_chain(s.steps()).is_ok());
        }
        prop_assert_eq!(trace[0], 2 * alpha);
        prop_assert!(trace.windows(2).all(|w| w[0] == w[1] + 2));
        prop_assert_eq!(*trace.last().unwrap(), 0);
    }

    #[test]
    fn certificates_self_verify(pair in equal_pair()) {
        let d = decompose(&pair).unwrap();
        let cert = parse_certificate(&render_certificate(&d)).unwrap();
        prop_assert_eq!(check_certificate(pair.f1(), pair.f2(), &cert), Ok(pair.metrics().alpha));
    }

    #[test]
    fn rebalance_properties(pair in equal_pair()) {
        let out = rebalance(&pair).unwrap();
        let (m, n) = (pair.metrics(), out.metrics());
        let (pr1, pr2) = (out.f1_projections(), out.f2_projections());
        prop_assert_eq!(pr1.row_sums(), pr2.row_sums());
        prop_assert!(n.alpha <= m.alpha);
        prop_assert_eq!(n.sym_diff, m.sym_diff);
        prop_assert_eq!(n.p, m.p);
        prop_assert_eq!(n.f2_size, m.f2_size);
    }

    #[test]
    fn equalize_properties(pair in any_size_pair()) {
        let out = equalize(&pair).unwrap();
        let (m, n) = (pair.metrics(), out.metrics());
        prop_assert_eq!(n.f2_size, n.f1_size);
        prop_assert_eq!(n.p, m.p);
        if m.f2_size <= m.f1_size {
            prop_assert_eq!(n.alpha, m.alpha);
        } else {
            prop_assert!(n.alpha <= m.alpha);
        }
    }

    #[test]
    fn bounds_hold_on_random_instances(pair in any_size_pair()) {
        let r = report(&pair).unwrap();
        prop_assert!(r.all_hold(), "{:?}", r.violations().collect::<Vec<_>>());
    }

    #[test]
    fn pair_file_round_trip(f1 in arbitrary_set(), f2 in arbitrary_set()) {
        let pair = InstancePair::new(f1, f2);
        let text = render_pair(&pair);
        prop_assert_eq!(parse_pair(&text).unwrap(), pair.clone());
        prop_assert_eq!(render_pair(&parse_pair(&text).unwrap()), text);
    }
}

#[test]
fn uniqueness_matches_realization_count_up_to_six_cells() {
    for n in 1..=6 {
        for rows in partitions(n) {
            for cols in partitions(n) {
                let pr = Projections::new(rows.clone(), cols.clone());
                let unique = is_uniquely_determined(&pr).unwrap();
                let count = count_realizations(&pr).unwrap();
                assert_eq!(unique, count == 1, "rows {rows:?} cols {cols:?}: {count}");
            }
        }
    }
}

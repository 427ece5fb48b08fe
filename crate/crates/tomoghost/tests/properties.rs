//! Property tests for the crate-wide invariants.

use proptest::collection::vec;
use proptest::prelude::*;

use tomoghost::constructions::{hypercube_ghost, paper_example_m5};
use tomoghost::lattice::{Direction, DirectionSet, Grid, PointConfiguration};
use tomoghost::search::{min_ghost, SignedConfiguration, DEFAULT_NODE_BUDGET};
use tomoghost::xray::{count_lines_exact, tomographically_equivalent, xray};

fn nonzero_vector(d: usize) -> impl Strategy<Value = Vec<i64>> {
    vec(-5i64..=5, d).prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
}

/// A valid direction set: random canonical directions, deduplicated, with
/// the unit vectors appended when needed to restore spanning.
fn direction_set(d: usize, max_m: usize) -> impl Strategy<Value = DirectionSet> {
    vec(nonzero_vector(d), 2..=max_m).prop_map(move |raw| {
        let mut dirs: Vec<Direction> = Vec::new();
        for v in &raw {
            let c = Direction::canonicalize(v).unwrap();
            if !dirs.contains(&c) {
                dirs.push(c);
            }
        }
        let rows: Vec<Vec<i64>> = dirs.iter().map(|s| s.coords().to_vec()).collect();
        if tomoghost::lattice::integer_rank(&rows, d) < d {
            for i in 0..d {
                let mut e = vec![0i64; d];
                e[i] = 1;
                let c = Direction::canonicalize(&e).unwrap();
                if !dirs.contains(&c) {
                    dirs.push(c);
                }
            }
        }
        dirs.truncate(max_m);
        // appending units can only have grown the rank; re-append if the
        // truncation dropped them
        let rows: Vec<Vec<i64>> = dirs.iter().map(|s| s.coords().to_vec()).collect();
        if tomoghost::lattice::integer_rank(&rows, d) < d {
            dirs.truncate(max_m - d);
            for i in 0..d {
                let mut e = vec![0i64; d];
                e[i] = 1;
                let c = Direction::canonicalize(&e).unwrap();
                if !dirs.contains(&c) {
                    dirs.push(c);
                }
            }
        }
        DirectionSet::new(dirs, d).expect("constructed to be valid")
    })
}

proptest! {
    #[test]
    fn canonicalize_idempotent(v in nonzero_vector(3)) {
        let once = Direction::canonicalize(&v).unwrap();
        let twice = Direction::canonicalize(once.coords()).unwrap();
        prop_assert_eq!(&once, &twice);
    }

    #[test]
    fn canonicalize_scale_invariant(v in nonzero_vector(3), k in prop_oneof![-4i64..=-1, 1i64..=4]) {
        let scaled: Vec<i64> = v.iter().map(|&c| c * k).collect();
        prop_assert_eq!(
            Direction::canonicalize(&v).unwrap(),
            Direction::canonicalize(&scaled).unwrap()
        );
    }

    #[test]
    fn hypercube_ghost_always_equivalent_2d(s in direction_set(2, 10)) {
        let h = hypercube_ghost(&s).unwrap();
        let m = s.len() as u32;
        prop_assert_eq!(h.raw_even.cardinality(), 1u64 << (m - 1));
        prop_assert_eq!(h.raw_odd.cardinality(), 1u64 << (m - 1));
        prop_assert!(h.pair.size() <= 1u64 << (m - 1));
        let eq = tomographically_equivalent(&h.pair.f, &h.pair.g, &s).unwrap();
        prop_assert!(eq.equivalent);
    }

    #[test]
    fn hypercube_ghost_always_equivalent_3d(s in direction_set(3, 8)) {
        let h = hypercube_ghost(&s).unwrap();
        let m = s.len() as u32;
        prop_assert!(h.pair.size() <= 1u64 << (m - 1));
        let eq = tomographically_equivalent(&h.pair.f, &h.pair.g, &s).unwrap();
        prop_assert!(eq.equivalent);
    }

    #[test]
    fn xray_mass_conservation(points in vec(vec(-6i64..=6, 2), 1..12), v in nonzero_vector(2)) {
        let cfg = PointConfiguration::from_points(2, points).unwrap();
        let dir = Direction::canonicalize(&v).unwrap();
        let profile = xray(&cfg, &dir).unwrap();
        prop_assert_eq!(profile.total(), cfg.cardinality());
        prop_assert!(profile.counts.values().all(|&c| c > 0));
    }

    #[test]
    fn xray_translation_covariant(
        points in vec(vec(-5i64..=5, 2), 1..10),
        t in vec(-7i64..=7, 2),
        v in nonzero_vector(2),
    ) {
        let cfg = PointConfiguration::from_points(2, points).unwrap();
        let moved = cfg.translate(&t).unwrap();
        let dir = Direction::canonicalize(&v).unwrap();
        let mut a: Vec<u64> = xray(&cfg, &dir).unwrap().counts.values().copied().collect();
        let mut b: Vec<u64> = xray(&moved, &dir).unwrap().counts.values().copied().collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn equivalence_invariant_under_common_translation(t in vec(-9i64..=9, 2)) {
        let pair = paper_example_m5();
        let f = pair.f.translate(&t).unwrap();
        let g = pair.g.translate(&t).unwrap();
        let eq = tomographically_equivalent(&f, &g, &pair.directions).unwrap();
        prop_assert!(eq.equivalent);
    }

    /// Each per-direction X-ray of a k-point configuration in the cube grid
    /// is a weak k-composition of the line count l_i.
    #[test]
    fn profiles_are_weak_compositions(
        seed in vec(0u64..1000, 6),
        n in 2u64..=5,
    ) {
        let grid = Grid::cube(2, n);
        let cells = grid.cells();
        let cfg = PointConfiguration::from_points(
            2,
            seed.iter().map(|&s| cells[(s % cells.len() as u64) as usize].clone()),
        ).unwrap();
        let k = cfg.cardinality();
        for v in [[1i64, 0], [0, 1], [1, 1], [2, 1]] {
            let dir = Direction::canonicalize(&v).unwrap();
            let profile = xray(&cfg, &dir).unwrap();
            let l = count_lines_exact(&dir, n, 2).unwrap();
            prop_assert_eq!(profile.total(), k);
            prop_assert!((profile.counts.len() as u128) <= l);
        }
    }

    #[test]
    fn min_ghost_order_independent(perm in Just(()).prop_flat_map(|_| proptest::sample::select(vec![
        vec![0usize, 1, 2], vec![2, 1, 0], vec![1, 0, 2], vec![2, 0, 1],
    ]))) {
        let dirs = [vec![1i64, 0], vec![0, 1], vec![1, 1]];
        let permuted: Vec<Vec<i64>> = perm.iter().map(|&i| dirs[i].clone()).collect();
        let s = DirectionSet::from_vectors(&permuted, 2).unwrap();
        let grid = Grid::new(vec![3, 3], vec![0, 0]).unwrap();
        let out = min_ghost(&s, &grid, 4, DEFAULT_NODE_BUDGET).unwrap();
        prop_assert_eq!(out.minimal_size, Some(3));
    }

    #[test]
    fn signed_configuration_balances(s in direction_set(2, 6)) {
        let h = hypercube_ghost(&s).unwrap();
        let signed = SignedConfiguration::from_pair(&h.pair.f, &h.pair.g);
        let (pos, neg) = signed.masses();
        prop_assert_eq!(pos, neg);
        prop_assert!(signed.all_line_sums_zero(&s).unwrap());
    }
}

use std::collections::BTreeSet;

use latinlab_core::configs::{
    bad_configurations, basic_threatened_pairs, covered_entry_count, exact_expander_check, intersecting_pairs, is_basic_split_bad_configuration,
    split_bad_configurations, threat_witnesses, PermissibleTuple, SplitFilter,
};
use latinlab_core::intercalate::{enumerate_intercalates, stable_intercalates, Intercalate};
use latinlab_core::latin::{all_squares, exact_uniform_sample, Axis, Entry, PartialLatinSquare, Template};
use latinlab_core::leftover::{completions_count, LeftoverGraph};
use latinlab_core::rerandomize::{exact_component_audit, greedy_star, parity_vector, predicted_parity, rerandomize};
use latinlab_core::rng::{seeded, substream};
use latinlab_core::sampler::{chain_sample, TriangleRemoval};
use latinlab_core::search::{max_disjoint, DEFAULT_BUDGET};
use proptest::prelude::*;
use rand::Rng;

fn random_partial(seed: u64, n: usize, density: f64) -> PartialLatinSquare {
    let mut rng = seeded(seed);
    let l = if n <= 5 { exact_uniform_sample(n, &mut rng).unwrap() } else { chain_sample(n, 30 * n * n, &mut rng).unwrap() };
    Template::sample(n, density, &mut rng).unwrap().intersect(&l)
}

#[test]
fn completions_match_enumeration() {
    for (i, n) in [(0u64, 4usize), (1, 4), (2, 4), (3, 5), (4, 5), (5, 5)] {
        for density in [0.0, 0.2, 0.4, 0.7] {
            let p = random_partial(100 + i, n, density);
            let by_scan = all_squares(n).unwrap().iter().filter(|l| p.entries().all(|e| l.contains(&e))).count() as u128;
            assert_eq!(completions_count(&p).unwrap(), by_scan);
        }
    }
}

#[test]
fn count_on_empty_grid() {
    assert_eq!(completions_count(&PartialLatinSquare::new(5)).unwrap(), 161_280);
}

#[test]
fn seven_entry_intersecting_fixture() {
    let e = Entry::new;
    let p = PartialLatinSquare::from_entries(4, [e(0, 0, 0), e(0, 1, 1), e(1, 0, 1), e(1, 1, 0), e(1, 2, 2), e(2, 1, 2), e(2, 2, 0)]).unwrap();
    assert_eq!(intersecting_pairs(&p).len(), 1);
    let filter = SplitFilter::Rows(BTreeSet::from([0]));
    let configs = split_bad_configurations(&p, &filter);
    assert_eq!(configs.len(), 1);
    assert_eq!(configs[0].special, [e(0, 0, 0), e(0, 1, 1)]);
    assert_eq!(covered_entry_count(&p, &filter), 2);
    assert!(is_basic_split_bad_configuration(4, &p.entries().collect::<Vec<_>>(), &BTreeSet::from([0])));
    assert_eq!(covered_entry_count(&p, &SplitFilter::Rows(BTreeSet::from([3]))), 0);
}

#[test]
fn expander_check_matches_brute_force() {
    let subsets: Vec<BTreeSet<usize>> = (0u32..16).map(|m| (0..4).filter(|i| m >> i & 1 == 1).collect()).collect();
    let big: Vec<&BTreeSet<usize>> = subsets.iter().filter(|s| s.len() >= 2).collect();
    let stars: Vec<&BTreeSet<usize>> = subsets.iter().filter(|s| s.len() == 1).collect();
    for seed in 0..6 {
        let p = random_partial(200 + seed, 4, 0.9);
        let stable = stable_intercalates(&p);
        let mut brute_fails = false;
        'outer: for r_star in &stars {
            for r in &big {
                for c in &big {
                    for c_star in &big {
                        for s in &big {
                            for s_star in &big {
                                let t = PermissibleTuple {
                                    r: (*r).clone(),
                                    r_star: (*r_star).clone(),
                                    c: (*c).clone(),
                                    c_star: (*c_star).clone(),
                                    s: (*s).clone(),
                                    s_star: (*s_star).clone(),
                                };
                                if !stable.iter().any(|a| t.is_split(a)) {
                                    brute_fails = true;
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
        }
        let found = exact_expander_check(&p, 1, 0.5).unwrap();
        assert_eq!(found.is_some(), brute_fails, "seed {seed}");
        if let Some(t) = found {
            assert!(t.is_permissible(4, 1, 0.5));
            assert!(!stable.iter().any(|a| t.is_split(a)));
        }
    }
}

#[test]
fn no_stable_means_no_expander() {
    let p = PartialLatinSquare::new(4);
    assert!(exact_expander_check(&p, 1, 0.5).unwrap().is_some());
}

#[test]
fn lone_stable_intercalate_with_full_sets() {
    let e = Entry::new;
    let p = PartialLatinSquare::from_entries(2, [e(0, 0, 0), e(0, 1, 1), e(1, 0, 1), e(1, 1, 0)]).unwrap();
    assert_eq!(stable_intercalates(&p).len(), 1);
    assert!(exact_expander_check(&p, 1, 1.0).unwrap().is_none());
    let q = PartialLatinSquare::from_entries(4, [e(0, 0, 0), e(0, 1, 1), e(1, 0, 1), e(1, 1, 0)]).unwrap();
    assert!(exact_expander_check(&p, 2, 1.0).unwrap().is_none());
    // a starred row outside the first two splits nothing
    let t = exact_expander_check(&q, 1, 1.0).unwrap().unwrap();
    assert!(t.r_star.iter().all(|&r| r >= 2));
}

#[test]
fn component_audit_on_random_templates() {
    for i in 0..4 {
        let mut rng = substream(300, i);
        let t = Template::sample(4, rng.gen_range(0.3..1.0), &mut rng).unwrap();
        let audit = exact_component_audit(4, &t).unwrap();
        assert!(audit.passed(), "{:?}", audit.violations);
        assert_eq!(audit.squares, 576);
    }
}

fn star_sets(stable: &[Intercalate], axis: Axis, line: usize, n: usize) -> Vec<Vec<usize>> {
    stable
        .iter()
        .filter(|a| {
            let k = a.sigma();
            let pair = match axis {
                Axis::Row => k.rows,
                Axis::Col => k.cols,
                Axis::Sym => k.syms,
            };
            pair.contains(&line)
        })
        .map(|a| {
            let k = a.sigma();
            let mut ids: Vec<usize> = [(Axis::Row, k.rows), (Axis::Col, k.cols), (Axis::Sym, k.syms)]
                .iter()
                .enumerate()
                .flat_map(|(b, (ax, pair))| pair.iter().filter(move |&&x| !(*ax == axis && x == line)).map(move |&x| b * n + x))
                .collect();
            ids.sort();
            ids
        })
        .collect()
}

#[test]
fn greedy_star_is_within_factor_five() {
    for seed in 0..30 {
        let n = 9;
        let p = random_partial(400 + seed, n, 0.8);
        let stable = stable_intercalates(&p);
        for axis in Axis::ALL {
            for line in 0..n {
                let greedy = greedy_star(&stable, axis, line).len();
                let exact = max_disjoint(&star_sets(&stable, axis, line, n), DEFAULT_BUDGET);
                assert!(exact.exact);
                assert!(greedy <= exact.chosen.len());
                assert!(5 * greedy >= exact.chosen.len());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn leftover_triangles_are_addable_entries(seed in any::<u64>(), n in 2usize..8, density in 0.0f64..1.0) {
        let p = random_partial(seed, n, density);
        let g = LeftoverGraph::new(&p);
        let brute = (0..n).flat_map(|r| (0..n).flat_map(move |c| (0..n).map(move |s| Entry::new(r, c, s)))).filter(|e| p.can_add(e)).count();
        prop_assert_eq!(g.triangle_count(), brute);
        prop_assert_eq!(TriangleRemoval::from_partial(&p).unwrap().triangle_count(), brute);
        prop_assert_eq!(g.edge_count(), 3 * (n * n - p.len()));
    }

    #[test]
    fn predicted_parity_law(seed in any::<u64>(), n in 3usize..=8, density in 0.3f64..1.0) {
        let mut rng = seeded(seed);
        let l = if n <= 5 { exact_uniform_sample(n, &mut rng).unwrap() } else { chain_sample(n, 30 * n * n, &mut rng).unwrap() };
        let t = Template::sample(n, density, &mut rng).unwrap();
        let out = rerandomize(&l, &t, &mut rng);
        prop_assert_eq!(predicted_parity(&parity_vector(&l), &out.stable, &out.switched).unwrap(), parity_vector(&out.square));
    }

    #[test]
    fn threat_witnesses_are_confirmed(seed in any::<u64>(), n in 4usize..=7) {
        let p = random_partial(seed, n, 0.6);
        let r_star: BTreeSet<usize> = BTreeSet::from([0, 1]);
        for w in threat_witnesses(&p, &r_star) {
            let mut q = p.clone();
            for e in w.pair {
                prop_assert!(!p.contains(&e));
                q.insert(e).unwrap();
            }
            prop_assert!(bad_configurations(&q).contains(&w.witness.config));
            prop_assert!(r_star.contains(&w.pair[0].row) && w.pair[0].row == w.pair[1].row);
        }
    }

    #[test]
    fn basic_pairs_complete_basic_configurations(seed in any::<u64>(), n in 4usize..=7) {
        let p = random_partial(seed, n, 0.7);
        let r_star: BTreeSet<usize> = (0..n / 2).collect();
        for b in basic_threatened_pairs(&p, &r_star) {
            let f: Vec<Entry> = b.embedding.entries().into_iter().chain(b.pair).collect();
            prop_assert!(is_basic_split_bad_configuration(n, &f, &r_star));
        }
    }

    #[test]
    fn intersecting_pairs_share_one_entry(seed in any::<u64>(), n in 4usize..=8) {
        let p = random_partial(seed, n, 1.0);
        let all = enumerate_intercalates(&p);
        for (a, b) in intersecting_pairs(&p) {
            prop_assert!(all.contains(&a) && all.contains(&b));
            let shared = a.entries().iter().filter(|e| b.entries().contains(e)).count();
            prop_assert_eq!(shared, 1);
        }
    }
}

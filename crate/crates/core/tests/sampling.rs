mod common;

use std::collections::HashMap;

use common::{to_f64, trp_tree};
use latinlab_core::latin::{all_squares, exact_uniform_sample, random_ordered_subset, Entry, LatinSquare, OrderedPartialLatinSquare};
use latinlab_core::rng::{seeded, substream};
use latinlab_core::sampler::{
    binomial_hypergraph, strip_conflicts, trp_log_probability, trp_probability_exact, trp_run, ChainSampler, Hypergraph,
};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn chi_square_p(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    1.0 - ChiSquared::new((counts.len() - 1) as f64).unwrap().cdf(stat)
}

fn histogram(n: usize, samples: impl Iterator<Item = LatinSquare>) -> Vec<u64> {
    let all = all_squares(n).unwrap();
    let index: HashMap<&LatinSquare, usize> = all.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut counts = vec![0u64; all.len()];
    for l in samples {
        counts[index[&l]] += 1;
    }
    counts
}

#[test]
fn trp_tree_matches_closed_form() {
    for m in 1..=4 {
        let tree = trp_tree(2, m);
        let total = tree.values().fold(BigRational::zero(), |a, b| a + b);
        assert_eq!(total, BigRational::one(), "m = {m}");
        for (key, prob) in &tree {
            let Some(entries) = key else { continue };
            let ordered = OrderedPartialLatinSquare::new(2, entries.clone()).unwrap();
            assert_eq!(&trp_probability_exact(&ordered).unwrap(), prob);
            assert!((trp_log_probability(&ordered).unwrap() - to_f64(prob).ln()).abs() < 1e-12);
        }
    }
}

#[test]
fn trp_simulation_within_three_sigma() {
    let runs = 100_000u64;
    for m in 1..=4 {
        let tree = trp_tree(2, m);
        let mut counts: HashMap<Option<Vec<Entry>>, u64> = HashMap::new();
        let mut rng = substream(5, m as u64);
        for _ in 0..runs {
            let out = trp_run(2, m, &mut rng).unwrap();
            *counts.entry(out.result.map(|o| o.entries().to_vec())).or_insert(0) += 1;
        }
        assert!(counts.keys().all(|k| tree.contains_key(k)));
        for (key, prob) in &tree {
            let p = to_f64(prob);
            let observed = *counts.get(key).unwrap_or(&0) as f64;
            let sigma = (runs as f64 * p * (1.0 - p)).sqrt();
            assert!((observed - runs as f64 * p).abs() <= 3.0 * sigma.max(1.0), "m = {m}, {key:?}: {observed} vs {p}");
        }
    }
}

#[test]
fn n2_bottom_mass() {
    for m in 3..=4 {
        let tree = trp_tree(2, m);
        assert_eq!(tree[&None], BigRational::new(1.into(), 4.into()));
        assert_eq!(tree.len(), 49);
    }
    assert!(!trp_tree(2, 2).contains_key(&None));
}

#[test]
fn exact_sampler_is_uniform() {
    let mut rng = seeded(11);
    let counts = histogram(4, (0..57_600).map(|_| exact_uniform_sample(4, &mut rng).unwrap()));
    let p = chi_square_p(&counts);
    assert!(p > 1e-4, "p = {p}");
}

#[test]
fn chain_is_uniform_n3() {
    let mut rng = seeded(12);
    let mut chain = ChainSampler::new(&LatinSquare::cyclic(3));
    let counts = histogram(3, chain.thinned(1000, 20, &mut rng).take(24_000));
    let p = chi_square_p(&counts);
    assert!(p > 1e-4, "p = {p}");
}

#[test]
fn chain_is_uniform_n4() {
    let mut rng = seeded(13);
    let mut chain = ChainSampler::new(&LatinSquare::cyclic(4));
    let counts = histogram(4, chain.thinned(2000, 40, &mut rng).take(57_600));
    assert!(counts.iter().all(|&c| c > 0));
    let p = chi_square_p(&counts);
    assert!(p > 1e-4, "p = {p}");
}

#[test]
fn random_subsets_are_ordered_subsets() {
    let mut rng = seeded(14);
    let l = exact_uniform_sample(5, &mut rng).unwrap();
    let o = random_ordered_subset(&l, 10, &mut rng).unwrap();
    assert_eq!(o.len(), 10);
    assert!(o.entries().iter().all(|e| l.contains(e)));
}

fn has_conflict(h: &Hypergraph, e: &Entry) -> bool {
    h.edges.iter().any(|f| f != e && ((f.row == e.row) as u8 + (f.col == e.col) as u8 + (f.sym == e.sym) as u8) >= 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conflict_cleanup(seed in any::<u64>(), n in 1usize..9, p in 0.0f64..0.5) {
        let mut rng = seeded(seed);
        let h = binomial_hypergraph(n, p, &mut rng).unwrap();
        let clean = strip_conflicts(&h);
        for e in &h.edges {
            prop_assert_eq!(clean.contains(e), !has_conflict(&h, e));
        }
        prop_assert!(clean.entries().all(|e| h.edges.contains(&e)));
    }

    #[test]
    fn trp_outputs_are_partial_squares(seed in any::<u64>(), n in 2usize..8) {
        let mut rng = seeded(seed);
        let m = n * n / 2;
        let out = trp_run(n, m, &mut rng).unwrap();
        prop_assert_eq!(out.triangle_counts.len(), out.steps_taken);
        if let Some(o) = out.result {
            prop_assert_eq!(o.len(), m);
            let lp = trp_log_probability(&o).unwrap();
            let direct = -out.triangle_counts.iter().map(|&t| (t as f64).ln()).sum::<f64>();
            prop_assert!((lp - direct).abs() < 1e-9);
        }
    }
}

#[test]
fn library_tree_matches_oracle() {
    use latinlab_core::sampler::trp_outcome_law;
    for m in 1..=4 {
        let tree = trp_tree(2, m);
        let (leaves, bottom) = trp_outcome_law(2, m).unwrap();
        assert_eq!(tree.get(&None).cloned().unwrap_or_default(), bottom);
        assert_eq!(leaves.len() + (bottom != Default::default()) as usize, tree.len());
        for (o, mass) in leaves {
            assert_eq!(tree[&Some(o.entries().to_vec())], mass);
        }
    }
}

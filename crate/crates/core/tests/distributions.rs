mod common;

use common::{conditioned_triple_binomial, naive_parities, to_f64};
use latinlab_core::dist::*;
use latinlab_core::latin::{all_squares, f_of_n, ParityTriple};
use latinlab_core::rng::seeded;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn n5_row_law_fixture() {
    let law = exhaustive_parity_law(5).unwrap().marginal(0);
    assert_eq!(law.support, vec![0, 1, 4, 5]);
    assert_eq!(law.mass, vec![q(3, 56), q(25, 56), q(25, 56), q(3, 56)]);
    let tv = tv_exact(&law, &binomial_exact(5));
    assert_eq!(tv, q(5, 8));
    assert!((tv_distance(&law.to_float(), &binomial_pmf(5)) - 0.625).abs() < 1e-12);
}

#[test]
fn n5_row_law_from_inversions() {
    let mut counts = [0u64; 6];
    for l in all_squares(5).unwrap() {
        counts[naive_parities(l)[0]] += 1;
    }
    assert_eq!(counts, [8640, 72000, 0, 0, 72000, 8640]);
}

#[test]
fn n4_triple_law_fixture() {
    let law = exhaustive_parity_law(4).unwrap();
    assert_eq!(law.support, vec![[0, 0, 0], [0, 4, 4], [2, 2, 2], [4, 0, 4], [4, 4, 0]]);
    assert_eq!(law.mass, vec![q(1, 16), q(1, 16), q(3, 4), q(1, 16), q(1, 16)]);
    assert_eq!(tv_exact(&law.marginal(0), &binomial_exact(4)), q(1, 2));
}

#[test]
fn mu_star_matches_independent_formula() {
    for n in [1usize, 2, 5, 8, 13] {
        let law = mu_star_exact(n).unwrap();
        assert_eq!(law.total(), BigRational::one());
        for x in 0..=n as u64 {
            for y in 0..=n as u64 {
                for z in 0..=n as u64 {
                    assert_eq!(law.mass_at(&[x, y, z]), conditioned_triple_binomial(n as u64, [x, y, z], f_of_n(n) as u64));
                }
            }
        }
    }
}

#[test]
fn mu_star_equals_mixture() {
    for n in [3u64, 6, 9] {
        let mix = mu_star_as_mixture(n);
        mix.validate().unwrap();
        let regular = mix.regular_part().unwrap();
        let direct = mu_star_pmf(n as usize).unwrap();
        let as_i64 = Pmf { support: direct.support.iter().map(|x| x.map(|v| v as i64)).collect(), mass: direct.mass.clone() };
        assert!(tv_distance(&regular, &as_i64) < 1e-12);
    }
}

#[test]
fn float_mu_star_beyond_exact_range() {
    let p = mu_star_pmf(80).unwrap();
    assert!((p.total() - 1.0).abs() < 1e-9);
}

#[test]
fn local_clt_at_center() {
    let n = 100u64;
    let f = f_of_n(n as usize) as u64;
    // center point (50, 50, 50) has even sum; f(100) = 0
    let exact = to_f64(&conditioned_triple_binomial(n, [50, 50, 50], f));
    let approx = local_clt_density([50.0; 3], n as f64, LatticeFactor::SumParity);
    assert!(((approx - exact) / exact).abs() < 0.05);
    for x in [[51u64, 50, 49], [52, 52, 50], [45, 50, 55]] {
        let e = to_f64(&conditioned_triple_binomial(n, x, f));
        let a = local_clt_density(x.map(|v| v as f64), n as f64, LatticeFactor::SumParity);
        assert!(((a - e) / e).abs() < 0.1, "{x:?}");
    }
}

#[test]
fn entropy_and_rate() {
    assert_eq!(entropy_h2(0.5).unwrap(), 1.0);
    assert_eq!(entropy_h2(0.0).unwrap(), 0.0);
    assert_eq!(rate_i([0.5; 3]).unwrap(), 0.0);
    assert!(rate_i([0.1, 0.5, 0.5]).unwrap() > 0.0);
    assert!(entropy_h2(1.5).is_err());
}

#[test]
fn parity_table_rejects_bad_pattern() {
    let good = ParityTriple { row: 2, col: 2, sym: 2 };
    let t = parity_mod2_counts(&[good, good], 4).unwrap();
    assert_eq!(t.counts["000"], 2);
    assert_eq!(t.counts.len(), 4);
    let bad = ParityTriple { row: 1, col: 0, sym: 0 };
    assert!(parity_mod2_counts(&[bad], 4).is_err());
}

#[test]
fn near_binomial_guards() {
    let ok = NearBinomialSpec { n: 10, d: 2, offsets: [1, 0, -3], sizes: [9, 10, 8], parity: None };
    ok.validate().unwrap();
    assert!((near_binomial_pmf(&ok).unwrap().total() - 1.0).abs() < 1e-12);
    let bad = NearBinomialSpec { sizes: [7, 10, 8], ..ok.clone() };
    assert!(bad.validate().is_err());
    let empty = NearBinomialSpec { n: 1, d: 1, offsets: [0, 0, 0], sizes: [0, 1, 1], parity: Some([1, 0, 0]) };
    assert!(empty.validate().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tv_is_a_metric_on_binomials(a in 1usize..30, b in 1usize..30, c in 1usize..30) {
        let (p, q2, r) = (binomial_pmf(a), binomial_pmf(b), binomial_pmf(c));
        let d = tv_distance(&p, &q2);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&d));
        prop_assert!((d - tv_distance(&q2, &p)).abs() < 1e-15);
        prop_assert!(d <= tv_distance(&p, &r) + tv_distance(&r, &q2) + 1e-12);
    }

    #[test]
    fn parity_conditioned_samples_respect_parity(seed in any::<u64>(), bits in prop::array::uniform3(0u8..2)) {
        let spec = NearBinomialSpec { n: 12, d: 1, offsets: [1, 0, 0], sizes: [12, 11, 12], parity: Some(bits) };
        let mut rng = seeded(seed);
        for _ in 0..20 {
            let x = spec.sample(&mut rng).unwrap();
            for i in 0..3 {
                prop_assert_eq!(x[i].rem_euclid(2) as u8, bits[i]);
            }
        }
        let pmf = near_binomial_pmf(&spec).unwrap();
        prop_assert!((pmf.total() - 1.0).abs() < 1e-9);
    }
}

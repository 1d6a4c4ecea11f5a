//! Exact and floating-point laws for parity counts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::latin::{all_squares, f_of_n, ParityTriple};

/// Largest order for which the triple law is computed in exact arithmetic.
pub const MAX_EXACT_ORDER: usize = 64;

/// A finitely supported law with support sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pmf<P> {
    pub support: Vec<P>,
    pub mass: Vec<f64>,
}

impl<P: Ord + Clone> Pmf<P> {
    pub fn from_map(map: BTreeMap<P, f64>) -> Self {
        let (support, mass) = map.into_iter().unzip();
        Pmf { support, mass }
    }

    /// Relative frequencies of `samples`.
    pub fn empirical<I: IntoIterator<Item = P>>(samples: I) -> Self {
        let mut counts: BTreeMap<P, u64> = BTreeMap::new();
        let mut total = 0u64;
        for x in samples {
            *counts.entry(x).or_insert(0) += 1;
            total += 1;
        }
        Pmf::from_map(counts.into_iter().map(|(k, c)| (k, c as f64 / total as f64)).collect())
    }

    pub fn mass_at(&self, x: &P) -> f64 {
        self.support.binary_search(x).map_or(0.0, |i| self.mass[i])
    }

    /// Sum of the masses, with compensated summation.
    pub fn total(&self) -> f64 {
        kahan(self.mass.iter().copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&P, f64)> {
        self.support.iter().zip(self.mass.iter().copied())
    }
}

fn kahan(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let y = x - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// A finitely supported law with exact rational masses.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPmf<P> {
    pub support: Vec<P>,
    pub mass: Vec<BigRational>,
}

impl<P: Ord + Clone> ExactPmf<P> {
    pub fn to_float(&self) -> Pmf<P> {
        Pmf { support: self.support.clone(), mass: self.mass.iter().map(|m| m.to_f64().unwrap()).collect() }
    }

    pub fn total(&self) -> BigRational {
        self.mass.iter().fold(BigRational::zero(), |acc, m| acc + m)
    }

    pub fn mass_at(&self, x: &P) -> BigRational {
        self.support.binary_search(x).map_or_else(|_| BigRational::zero(), |i| self.mass[i].clone())
    }
}

impl ExactPmf<[u64; 3]> {
    /// Law of one coordinate (0 rows, 1 columns, 2 symbols).
    pub fn marginal(&self, coord: usize) -> ExactPmf<u64> {
        let mut map: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (x, m) in self.support.iter().zip(&self.mass) {
            *map.entry(x[coord]).or_insert_with(BigRational::zero) += m;
        }
        let (support, mass) = map.into_iter().unzip();
        ExactPmf { support, mass }
    }
}

/// Exact law of `(N_row, N_col, N_sym)` for a uniform square of order
/// `n <= 5`, by enumeration.
pub fn exhaustive_parity_law(n: usize) -> Result<ExactPmf<[u64; 3]>> {
    let all = all_squares(n)?;
    let mut counts: BTreeMap<[u64; 3], u64> = BTreeMap::new();
    for l in all {
        let t = l.parity_counts().as_array();
        *counts.entry(t.map(|x| x as u64)).or_insert(0) += 1;
    }
    let total = BigInt::from(all.len());
    let (support, mass) = counts.into_iter().map(|(k, c)| (k, BigRational::new(BigInt::from(c), total.clone()))).unzip();
    Ok(ExactPmf { support, mass })
}

fn binomial_coefficients(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = &row[k] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// `Bin(n, 1/2)` in exact arithmetic.
pub fn binomial_exact(n: usize) -> ExactPmf<u64> {
    let denom = BigInt::one() << n;
    ExactPmf {
        support: (0..=n as u64).collect(),
        mass: binomial_coefficients(n).into_iter().map(|c| BigRational::new(c, denom.clone())).collect(),
    }
}

fn log_binomial_half(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut lc = 0.0f64;
    for k in 0..=n {
        out.push(lc - n as f64 * std::f64::consts::LN_2);
        if k < n {
            lc += ((n - k) as f64).ln() - ((k + 1) as f64).ln();
        }
    }
    out
}

/// `Bin(n, 1/2)` in floating point.
pub fn binomial_pmf(n: usize) -> Pmf<u64> {
    if n <= MAX_EXACT_ORDER {
        return binomial_exact(n).to_float();
    }
    Pmf { support: (0..=n as u64).collect(), mass: log_binomial_half(n).into_iter().map(f64::exp).collect() }
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::BadOrder(n));
    }
    Ok(())
}

/// Three independent `Bin(n, 1/2)` conditioned on `x1 + x2 + x3 = f(n)`
/// mod 2, in exact arithmetic.
pub fn mu_star_exact(n: usize) -> Result<ExactPmf<[u64; 3]>> {
    check_order(n)?;
    if n > MAX_EXACT_ORDER {
        return Err(Error::TooLarge(format!("exact triple law is limited to n <= {MAX_EXACT_ORDER}")));
    }
    let coeffs = binomial_coefficients(n);
    let denom = BigInt::one() << (3 * n - 1);
    let f = f_of_n(n) as u64;
    let mut support = Vec::new();
    let mut mass = Vec::new();
    for x in 0..=n {
        for y in 0..=n {
            let cxy = &coeffs[x] * &coeffs[y];
            for z in 0..=n {
                if (x + y + z) as u64 % 2 == f {
                    support.push([x as u64, y as u64, z as u64]);
                    mass.push(BigRational::new(&cxy * &coeffs[z], denom.clone()));
                }
            }
        }
    }
    Ok(ExactPmf { support, mass })
}

/// The triple law in floating point; exact up to [`MAX_EXACT_ORDER`].
pub fn mu_star_pmf(n: usize) -> Result<Pmf<[u64; 3]>> {
    if n <= MAX_EXACT_ORDER {
        return Ok(mu_star_exact(n)?.to_float());
    }
    let lb = log_binomial_half(n);
    let f = f_of_n(n) as usize;
    let mut support = Vec::new();
    let mut mass = Vec::new();
    for x in 0..=n {
        for y in 0..=n {
            for z in 0..=n {
                if (x + y + z) % 2 == f {
                    support.push([x as u64, y as u64, z as u64]);
                    mass.push(2.0 * (lb[x] + lb[y] + lb[z]).exp());
                }
            }
        }
    }
    Ok(Pmf { support, mass })
}

/// Total variation distance `1/2 sum |p - q|`.
pub fn tv_distance<P: Ord + Clone>(p: &Pmf<P>, q: &Pmf<P>) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut diffs = Vec::with_capacity(p.support.len() + q.support.len());
    while i < p.support.len() || j < q.support.len() {
        let ord = match (p.support.get(i), q.support.get(j)) {
            (Some(a), Some(b)) => a.cmp(b),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        match ord {
            std::cmp::Ordering::Less => {
                diffs.push(p.mass[i].abs());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                diffs.push(q.mass[j].abs());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                diffs.push((p.mass[i] - q.mass[j]).abs());
                i += 1;
                j += 1;
            }
        }
    }
    0.5 * kahan(diffs.into_iter())
}

/// Total variation distance in exact arithmetic.
pub fn tv_exact<P: Ord + Clone>(p: &ExactPmf<P>, q: &ExactPmf<P>) -> BigRational {
    let mut keys: Vec<&P> = p.support.iter().chain(q.support.iter()).collect();
    keys.sort();
    keys.dedup();
    let total = keys.into_iter().fold(BigRational::zero(), |acc, k| {
        let d = p.mass_at(k) - q.mass_at(k);
        acc + if d < BigRational::zero() { -d } else { d }
    });
    total / BigInt::from(2)
}

/// `(c_i + Bin(n_i, 1/2))_{i=1..3}`, optionally conditioned on the parity
/// of each coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearBinomialSpec {
    pub n: u64,
    pub d: u64,
    pub offsets: [i64; 3],
    pub sizes: [u64; 3],
    pub parity: Option<[u8; 3]>,
}

impl NearBinomialSpec {
    /// Checks `n - d <= n_i <= n` and `c_i <= d`.
    pub fn validate(&self) -> Result<()> {
        let lo = self.n.saturating_sub(self.d);
        for i in 0..3 {
            if self.sizes[i] < lo || self.sizes[i] > self.n {
                return Err(Error::InvalidParameter(format!("n_{} = {} outside [{lo}, {}]", i + 1, self.sizes[i], self.n)));
            }
            if self.offsets[i] > self.d as i64 {
                return Err(Error::InvalidParameter(format!("c_{} = {} exceeds d = {}", i + 1, self.offsets[i], self.d)));
            }
        }
        if let Some(bits) = self.parity {
            if bits.iter().any(|&b| b > 1) {
                return Err(Error::InvalidParameter("parity bits must be 0 or 1".into()));
            }
            if (0..3).any(|i| self.sizes[i] == 0 && (self.offsets[i].rem_euclid(2) as u8) != bits[i]) {
                return Err(Error::EmptyConditioning);
            }
        }
        Ok(())
    }

    fn admits(&self, x: &[i64; 3]) -> bool {
        self.parity.is_none_or(|bits| (0..3).all(|i| x[i].rem_euclid(2) as u8 == bits[i]))
    }

    fn coordinate_factor(&self, i: usize) -> f64 {
        if self.parity.is_some() && self.sizes[i] > 0 {
            2.0
        } else {
            1.0
        }
    }

    /// Draws one point.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<[i64; 3]> {
        self.validate()?;
        let mut out = [0i64; 3];
        for i in 0..3 {
            let bin = Binomial::new(self.sizes[i], 0.5).map_err(|e| Error::InvalidParameter(e.to_string()))?;
            out[i] = loop {
                let v = self.offsets[i] + bin.sample(rng) as i64;
                if self.parity.is_none_or(|bits| v.rem_euclid(2) as u8 == bits[i]) {
                    break v;
                }
            };
        }
        Ok(out)
    }
}

/// The law described by `spec`.
pub fn near_binomial_pmf(spec: &NearBinomialSpec) -> Result<Pmf<[i64; 3]>> {
    spec.validate()?;
    let margs: Vec<Pmf<u64>> = spec.sizes.iter().map(|&k| binomial_pmf(k as usize)).collect();
    let factor: f64 = (0..3).map(|i| spec.coordinate_factor(i)).product();
    let mut map = BTreeMap::new();
    for (x, px) in margs[0].iter() {
        for (y, py) in margs[1].iter() {
            for (z, pz) in margs[2].iter() {
                let point = [spec.offsets[0] + *x as i64, spec.offsets[1] + *y as i64, spec.offsets[2] + *z as i64];
                if spec.admits(&point) {
                    map.insert(point, factor * px * py * pz);
                }
            }
        }
    }
    Ok(Pmf::from_map(map))
}

/// A finite mixture of near-binomial laws plus an unspecified exceptional part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub components: Vec<(f64, NearBinomialSpec)>,
    pub exceptional_mass: f64,
}

/// A draw from a mixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixtureDraw {
    Component { index: usize, point: [i64; 3] },
    Exceptional,
}

impl MixtureSpec {
    /// Weights and exceptional mass must be non-negative and sum to 1.
    pub fn validate(&self) -> Result<()> {
        if self.components.iter().any(|(w, _)| *w < 0.0) || self.exceptional_mass < 0.0 {
            return Err(Error::InvalidParameter("negative mixture weight".into()));
        }
        let total: f64 = self.components.iter().map(|(w, _)| w).sum::<f64>() + self.exceptional_mass;
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("mixture weights sum to {total}")));
        }
        self.components.iter().try_for_each(|(_, s)| s.validate())
    }

    /// The non-exceptional part as a sub-probability law.
    pub fn regular_part(&self) -> Result<Pmf<[i64; 3]>> {
        self.validate()?;
        let mut map: BTreeMap<[i64; 3], f64> = BTreeMap::new();
        for (w, spec) in &self.components {
            for (x, p) in near_binomial_pmf(spec)?.iter() {
                *map.entry(*x).or_insert(0.0) += w * p;
            }
        }
        Ok(Pmf::from_map(map))
    }
}

/// Draws from `mix`.
pub fn mixture_sample<R: Rng + ?Sized>(mix: &MixtureSpec, rng: &mut R) -> Result<MixtureDraw> {
    mix.validate()?;
    let mut u: f64 = rng.gen();
    for (index, (w, spec)) in mix.components.iter().enumerate() {
        if u < *w {
            return Ok(MixtureDraw::Component { index, point: spec.sample(rng)? });
        }
        u -= w;
    }
    Ok(MixtureDraw::Exceptional)
}

/// The triple law as the uniform mixture of the four admissible
/// coordinate-parity conditionings.
pub fn mu_star_as_mixture(n: u64) -> MixtureSpec {
    let f = f_of_n(n as usize);
    let components = (0u8..8)
        .map(|m| [m & 1, m >> 1 & 1, m >> 2 & 1])
        .filter(|b| (b[0] + b[1] + b[2]) % 2 == f)
        .map(|bits| (0.25, NearBinomialSpec { n, d: 0, offsets: [0; 3], sizes: [n; 3], parity: Some(bits) }))
        .collect();
    MixtureSpec { components, exceptional_mass: 0.0 }
}

/// Lattice factor in the local limit approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeFactor {
    /// Parity of the sum is fixed.
    SumParity,
    /// Parity of each coordinate is fixed.
    CoordinateParity,
}

impl LatticeFactor {
    pub fn value(self) -> f64 {
        match self {
            LatticeFactor::SumParity => 2.0,
            LatticeFactor::CoordinateParity => 8.0,
        }
    }
}

/// `factor (2 pi n/4)^{-3/2} exp(-sum (x_i - n/2)^2 / (2 n/4))`.
pub fn local_clt_density(x: [f64; 3], n: f64, factor: LatticeFactor) -> f64 {
    let var = n / 4.0;
    let q: f64 = x.iter().map(|xi| (xi - n / 2.0).powi(2)).sum();
    factor.value() * (2.0 * std::f64::consts::PI * var).powf(-1.5) * (-q / (2.0 * var)).exp()
}

/// Binary entropy in bits.
pub fn entropy_h2(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::BadFraction(alpha.to_string()));
    }
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * p.log2() };
    Ok(term(alpha) + term(1.0 - alpha))
}

/// `3 - H2(a1) - H2(a2) - H2(a3)`.
pub fn rate_i(alpha: [f64; 3]) -> Result<f64> {
    let mut total = 3.0;
    for a in alpha {
        total -= entropy_h2(a)?;
    }
    Ok(total)
}

/// Counts of parity patterns mod 2 with a chi-square statistic against
/// uniform over the four admissible patterns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParityTable {
    pub n: usize,
    /// Keys are patterns `"abc"` with bits for rows, columns, symbols.
    pub counts: BTreeMap<String, u64>,
    pub total: u64,
    pub chi_square: f64,
}

/// Tabulates `samples` by parity pattern. Every sample must satisfy
/// `N_row + N_col + N_sym = f(n)` mod 2.
pub fn parity_mod2_counts(samples: &[ParityTriple], n: usize) -> Result<ParityTable> {
    let f = f_of_n(n);
    let mut counts = BTreeMap::new();
    for m in 0u8..8 {
        let b = [m >> 2 & 1, m >> 1 & 1, m & 1];
        if (b[0] + b[1] + b[2]) % 2 == f {
            counts.insert(format!("{}{}{}", b[0], b[1], b[2]), 0u64);
        }
    }
    for s in samples {
        let b = s.bits();
        let key = format!("{}{}{}", b[0], b[1], b[2]);
        *counts.get_mut(&key).ok_or(Error::InadmissibleParity(b))? += 1;
    }
    let total = samples.len() as u64;
    let expected = total as f64 / 4.0;
    let chi_square = if total == 0 { 0.0 } else { counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum() };
    Ok(ParityTable { n, counts, total, chi_square })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small() {
        let b = binomial_exact(2);
        assert_eq!(b.mass[1], BigRational::new(1.into(), 2.into()));
        assert_eq!(b.total(), BigRational::one());
    }

    #[test]
    fn mu_star_small() {
        let m = mu_star_exact(1).unwrap();
        assert_eq!(m.support.len(), 4);
        assert!(m.mass.iter().all(|x| *x == BigRational::new(1.into(), 4.into())));
        assert_eq!(mu_star_exact(6).unwrap().total(), BigRational::one());
        assert!(mu_star_exact(0).is_err());
    }

    #[test]
    fn tv_basics() {
        let p = binomial_pmf(4);
        assert_eq!(tv_distance(&p, &p), 0.0);
        let a = Pmf { support: vec![0u64], mass: vec![1.0] };
        let b = Pmf { support: vec![1u64], mass: vec![1.0] };
        assert_eq!(tv_distance(&a, &b), 1.0);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy_h2(0.5).unwrap(), 1.0);
        assert_eq!(entropy_h2(0.0).unwrap(), 0.0);
        assert_eq!(rate_i([0.5; 3]).unwrap(), 0.0);
        assert!(entropy_h2(1.5).is_err());
    }

    #[test]
    fn parity_table_rejects_inadmissible() {
        let ok = ParityTriple { row: 0, col: 0, sym: 3 };
        let t = parity_mod2_counts(&[ok], 3).unwrap();
        assert_eq!(t.counts["001"], 1);
        let bad = ParityTriple { row: 0, col: 0, sym: 0 };
        assert_eq!(parity_mod2_counts(&[bad], 3), Err(Error::InadmissibleParity([0, 0, 0])));
    }

    #[test]
    fn near_binomial_validation() {
        let spec = NearBinomialSpec { n: 10, d: 2, offsets: [0, 1, 2], sizes: [10, 9, 8], parity: None };
        assert!(spec.validate().is_ok());
        let bad = NearBinomialSpec { sizes: [7, 9, 8], ..spec.clone() };
        assert!(bad.validate().is_err());
        let p = near_binomial_pmf(&spec).unwrap();
        assert!((p.total() - 1.0).abs() < 1e-12);
        let cond = NearBinomialSpec { parity: Some([1, 0, 1]), ..spec };
        assert!((near_binomial_pmf(&cond).unwrap().total() - 1.0).abs() < 1e-12);
    }
}

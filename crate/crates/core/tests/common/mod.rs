//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use latinlab_core::latin::{Entry, LatinSquare};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Outcome of the triangle removal process: the ordered entries, or `None`
/// for running out of triangles.
pub type TrpKey = Option<Vec<Entry>>;

fn addable(n: usize, used: &[Entry]) -> Vec<Entry> {
    let mut out = Vec::new();
    for r in 0..n {
        for c in 0..n {
            for s in 0..n {
                let clash = used.iter().any(|e| (e.row == r && e.col == c) || (e.row == r && e.sym == s) || (e.col == c && e.sym == s));
                if !clash {
                    out.push(Entry::new(r, c, s));
                }
            }
        }
    }
    out
}

fn walk(n: usize, m: usize, prefix: &mut Vec<Entry>, prob: BigRational, out: &mut BTreeMap<TrpKey, BigRational>) {
    if prefix.len() == m {
        *out.entry(Some(prefix.clone())).or_insert_with(BigRational::zero) += prob;
        return;
    }
    let options = addable(n, prefix);
    if options.is_empty() {
        *out.entry(None).or_insert_with(BigRational::zero) += prob;
        return;
    }
    let share = prob / BigInt::from(options.len());
    for e in options {
        prefix.push(e);
        walk(n, m, prefix, share.clone(), out);
        prefix.pop();
    }
}

/// Exact distribution of the process after `m` steps, by walking the full
/// outcome tree.
pub fn trp_tree(n: usize, m: usize) -> BTreeMap<TrpKey, BigRational> {
    let mut out = BTreeMap::new();
    walk(n, m, &mut Vec::new(), BigRational::one(), &mut out);
    out
}

pub fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}

/// Parity of a permutation via its inversion count.
pub fn inversion_parity(p: &[usize]) -> bool {
    let mut inv = 0usize;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            inv += (p[i] > p[j]) as usize;
        }
    }
    inv % 2 == 1
}

/// Row, column and symbol parity counts, computed from inversions.
pub fn naive_parities(l: &LatinSquare) -> [usize; 3] {
    let n = l.n();
    let mut counts = [0; 3];
    for i in 0..n {
        // row i: column -> symbol
        let row: Vec<usize> = (0..n).map(|c| l.get(i, c)).collect();
        // column i: row -> symbol
        let col: Vec<usize> = (0..n).map(|r| l.get(r, i)).collect();
        // symbol i: row -> column
        let mut sym = vec![0; n];
        for r in 0..n {
            for c in 0..n {
                if l.get(r, c) == i {
                    sym[r] = c;
                }
            }
        }
        counts[0] += inversion_parity(&row) as usize;
        counts[1] += inversion_parity(&col) as usize;
        counts[2] += inversion_parity(&sym) as usize;
    }
    counts
}

/// All `x` with `x^T M = 0`, by trying every vector.
pub fn brute_left_kernel(m: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for mask in 0u64..1 << rows {
        let ok = (0..cols).all(|j| (0..rows).filter(|&i| mask >> i & 1 == 1 && m[i][j] == 1).count() % 2 == 0);
        if ok {
            out.push((0..rows).map(|i| (mask >> i & 1) as u8).collect());
        }
    }
    out.sort();
    out
}

/// Span of a set of vectors over GF(2), listed exhaustively.
pub fn span(basis: &[Vec<u8>], len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for mask in 0u64..1 << basis.len() {
        let mut v = vec![0u8; len];
        for (k, b) in basis.iter().enumerate() {
            if mask >> k & 1 == 1 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x ^= y;
                }
            }
        }
        out.push(v);
    }
    out.sort();
    out.dedup();
    out
}

fn binom(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exact mass of `(a, b, c)` under three independent `Bin(n, 1/2)`
/// conditioned on `a + b + c` having parity `parity`.
pub fn conditioned_triple_binomial(n: u64, x: [u64; 3], parity: u64) -> BigRational {
    if x.iter().sum::<u64>() % 2 != parity {
        return BigRational::zero();
    }
    let num = binom(n, x[0]) * binom(n, x[1]) * binom(n, x[2]) * BigInt::from(2);
    BigRational::new(num, BigInt::one() << (3 * n as usize))
}

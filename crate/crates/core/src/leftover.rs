//! The leftover graph of a partial Latin square and the statistics tracked
//! along the triangle removal process.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::latin::{Axis, Entry, OrderedPartialLatinSquare, PartialLatinSquare};

/// Largest order accepted by [`completions_count`].
pub const MAX_COMPLETION_ORDER: usize = 6;

/// A vertex of `K_{n,n,n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub axis: Axis,
    pub index: usize,
}

impl Vertex {
    pub fn row(i: usize) -> Self {
        Vertex { axis: Axis::Row, index: i }
    }
    pub fn col(i: usize) -> Self {
        Vertex { axis: Axis::Col, index: i }
    }
    pub fn sym(i: usize) -> Self {
        Vertex { axis: Axis::Sym, index: i }
    }
}

/// `K_{n,n,n}` minus the edges of the triangles of a partial square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftoverGraph {
    n: usize,
    rc: Vec<bool>,
    rs: Vec<bool>,
    cs: Vec<bool>,
    edges: usize,
}

impl LeftoverGraph {
    pub fn new(p: &PartialLatinSquare) -> Self {
        let n = p.n();
        let mut g = LeftoverGraph { n, rc: vec![true; n * n], rs: vec![true; n * n], cs: vec![true; n * n], edges: 3 * n * n };
        for e in p.entries() {
            g.cover(&e);
        }
        g
    }

    fn cover(&mut self, e: &Entry) {
        let n = self.n;
        self.rc[e.row * n + e.col] = false;
        self.rs[e.row * n + e.sym] = false;
        self.cs[e.col * n + e.sym] = false;
        self.edges -= 3;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// `e(G) / 3n^2`.
    pub fn density(&self) -> f64 {
        self.edges as f64 / (3 * self.n * self.n) as f64
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let n = self.n;
        match (u.axis, v.axis) {
            (Axis::Row, Axis::Col) => self.rc[u.index * n + v.index],
            (Axis::Col, Axis::Row) => self.rc[v.index * n + u.index],
            (Axis::Row, Axis::Sym) => self.rs[u.index * n + v.index],
            (Axis::Sym, Axis::Row) => self.rs[v.index * n + u.index],
            (Axis::Col, Axis::Sym) => self.cs[u.index * n + v.index],
            (Axis::Sym, Axis::Col) => self.cs[v.index * n + u.index],
            _ => false,
        }
    }

    pub fn triangle_count(&self) -> usize {
        let n = self.n;
        let mut t = 0;
        for r in 0..n {
            for c in 0..n {
                if self.rc[r * n + c] {
                    t += (0..n).filter(|&s| self.rs[r * n + s] && self.cs[c * n + s]).count();
                }
            }
        }
        t
    }

    /// Number of common neighbours of two vertices in different parts.
    pub fn codegree(&self, u: Vertex, v: Vertex) -> Result<usize> {
        if u.axis == v.axis {
            return Err(Error::InvalidParameter("codegree needs vertices in different parts".into()));
        }
        if u.index >= self.n || v.index >= self.n {
            return Err(Error::IndexOutOfRange { index: u.index.max(v.index), n: self.n });
        }
        let third = Axis::ALL.into_iter().find(|&a| a != u.axis && a != v.axis).unwrap();
        Ok((0..self.n)
            .filter(|&i| {
                let w = Vertex { axis: third, index: i };
                self.has_edge(u, w) && self.has_edge(v, w)
            })
            .count())
    }

    /// Triangle count within a factor `1 +- eps` of `n^3 dens^3`.
    pub fn is_triangle_typical(&self, eps: f64) -> bool {
        let expected = (self.n as f64).powi(3) * self.density().powi(3);
        within(self.triangle_count() as f64, expected, eps)
    }

    /// Every cross-part codegree within a factor `1 +- gamma` of `n dens^2`.
    pub fn is_quasirandom(&self, gamma: f64) -> bool {
        self.max_codegree_deviation() <= gamma + 1e-12
    }

    /// Largest relative deviation of a cross-part codegree from `n dens^2`.
    pub fn max_codegree_deviation(&self) -> f64 {
        let n = self.n;
        let expected = n as f64 * self.density().powi(2);
        let mut worst: f64 = 0.0;
        for (a, b) in [(Axis::Row, Axis::Col), (Axis::Row, Axis::Sym), (Axis::Col, Axis::Sym)] {
            for i in 0..n {
                for j in 0..n {
                    let d = self.codegree(Vertex { axis: a, index: i }, Vertex { axis: b, index: j }).unwrap() as f64;
                    worst = worst.max(relative_deviation(d, expected));
                }
            }
        }
        worst
    }
}

fn relative_deviation(value: f64, expected: f64) -> f64 {
    if expected == 0.0 {
        if value == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (value - expected).abs() / expected
    }
}

fn within(value: f64, expected: f64, eps: f64) -> bool {
    relative_deviation(value, expected) <= eps + 1e-12
}

/// Leftover statistics of one prefix of an ordered partial square.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrefixRecord {
    pub prefix_len: usize,
    pub density: f64,
    pub triangles: usize,
    pub expected: f64,
    pub ratio: f64,
    pub typical: bool,
}

/// Triangle statistics after each prefix `0..=len` of `ordered`.
pub fn prefix_records(ordered: &OrderedPartialLatinSquare, eps: f64) -> Vec<PrefixRecord> {
    let n = ordered.n();
    let mut g = LeftoverGraph::new(&PartialLatinSquare::new(n));
    let mut out = Vec::with_capacity(ordered.len() + 1);
    for k in 0..=ordered.len() {
        if k > 0 {
            g.cover(&ordered.entries()[k - 1]);
        }
        let triangles = g.triangle_count();
        let expected = (n as f64).powi(3) * g.density().powi(3);
        out.push(PrefixRecord {
            prefix_len: k,
            density: g.density(),
            triangles,
            expected,
            ratio: if expected > 0.0 { triangles as f64 / expected } else { f64::NAN },
            typical: within(triangles as f64, expected, eps),
        });
    }
    out
}

/// True if every prefix of `ordered` has an `eps`-triangle-typical leftover.
pub fn is_ordered_triangle_typical(ordered: &OrderedPartialLatinSquare, eps: f64) -> bool {
    prefix_records(ordered, eps).iter().all(|r| r.typical)
}

/// Number of Latin squares extending `p`. Limited to small orders.
pub fn completions_count(p: &PartialLatinSquare) -> Result<u128> {
    let n = p.n();
    if n > MAX_COMPLETION_ORDER {
        return Err(Error::TooLarge(format!("completion counting is limited to n <= {MAX_COMPLETION_ORDER}")));
    }
    let mut grid: Vec<Option<usize>> = (0..n * n).map(|k| p.get(k / n, k % n)).collect();
    let mut row = vec![0u32; n];
    let mut col = vec![0u32; n];
    for e in p.entries() {
        row[e.row] |= 1 << e.sym;
        col[e.col] |= 1 << e.sym;
    }
    Ok(count_fill(n, &mut grid, &mut row, &mut col))
}

fn count_fill(n: usize, grid: &mut [Option<usize>], row: &mut [u32], col: &mut [u32]) -> u128 {
    let full = (1u32 << n) - 1;
    let mut best: Option<(usize, u32)> = None;
    for k in 0..n * n {
        if grid[k].is_none() {
            let free = full & !(row[k / n] | col[k % n]);
            if best.is_none_or(|(_, b)| free.count_ones() < b.count_ones()) {
                best = Some((k, free));
                if free.count_ones() <= 1 {
                    break;
                }
            }
        }
    }
    let Some((k, free)) = best else { return 1 };
    let (r, c) = (k / n, k % n);
    let mut total = 0;
    for s in 0..n {
        if free >> s & 1 == 1 {
            grid[k] = Some(s);
            row[r] |= 1 << s;
            col[c] |= 1 << s;
            total += count_fill(n, grid, row, col);
            row[r] &= !(1 << s);
            col[c] &= !(1 << s);
        }
    }
    grid[k] = None;
    total
}

/// Freedman-type tail bound `P(|X - EX| >= t)` for a sum of independent
/// indicators with success probabilities `p_i` and weights at most `k_i`,
/// where `k` bounds every weight. Capped at 1.
pub fn freedman_bound(t: f64, weights: &[(f64, f64)], k: f64) -> Result<f64> {
    if t < 0.0 || k < 0.0 || weights.iter().any(|&(p, w)| !(0.0..=1.0).contains(&p) || w < 0.0) {
        return Err(Error::InvalidParameter("freedman bound needs t, K, weights >= 0 and p in [0, 1]".into()));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let variance: f64 = weights.iter().map(|&(p, w)| p * w * w).sum();
    let denom = 2.0 * variance + 2.0 * k * t / 3.0;
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok((2.0 * (-t * t / denom).exp()).min(1.0))
}

/// Chernoff-type bound `P(|X - EX| >= delta EX)` for a weighted sum of
/// independent indicators with weights in `[0, max_weight]`. Capped at 1.
pub fn chernoff_bound(delta: f64, mean: f64, max_weight: f64) -> Result<f64> {
    if delta < 0.0 || mean < 0.0 || max_weight <= 0.0 {
        return Err(Error::InvalidParameter("chernoff bound needs delta, EX >= 0 and a positive weight bound".into()));
    }
    let exponent = delta * delta * mean / ((2.0 + 2.0 * delta / 3.0) * max_weight);
    Ok((2.0 * (-exponent).exp()).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_entry() -> PartialLatinSquare {
        PartialLatinSquare::from_entries(2, [Entry::new(0, 0, 0)]).unwrap()
    }

    #[test]
    fn empty_graph_statistics() {
        let g = LeftoverGraph::new(&PartialLatinSquare::new(4));
        assert_eq!(g.density(), 1.0);
        assert_eq!(g.triangle_count(), 64);
        assert!(g.is_quasirandom(0.0));
        assert!(g.is_triangle_typical(0.0));
    }

    #[test]
    fn single_entry_statistics() {
        let g = LeftoverGraph::new(&one_entry());
        assert_eq!(g.edge_count(), 9);
        assert_eq!(g.triangle_count(), 4);
        assert!(g.is_triangle_typical(0.9));
        assert!(!g.is_triangle_typical(0.1));
        assert_eq!(g.codegree(Vertex::row(0), Vertex::col(0)).unwrap(), 1);
        assert_eq!(g.codegree(Vertex::row(1), Vertex::col(1)).unwrap(), 2);
        assert!(!g.is_quasirandom(0.2));
        assert!(g.codegree(Vertex::row(0), Vertex::row(1)).is_err());
    }

    #[test]
    fn complete_square_leaves_nothing() {
        let g = LeftoverGraph::new(&crate::latin::LatinSquare::cyclic(3).to_partial());
        assert_eq!(g.density(), 0.0);
        assert_eq!(g.triangle_count(), 0);
        assert!(g.is_triangle_typical(0.0));
    }

    #[test]
    fn prefix_records_track_counts() {
        let p = OrderedPartialLatinSquare::new(
            2,
            vec![Entry::new(0, 0, 0), Entry::new(0, 1, 1), Entry::new(1, 0, 1), Entry::new(1, 1, 0)],
        )
        .unwrap();
        let recs = prefix_records(&p, 0.9);
        let t: Vec<usize> = recs.iter().map(|r| r.triangles).collect();
        assert_eq!(t, vec![8, 4, 2, 1, 0]);
        assert!((recs[1].expected - 3.375).abs() < 1e-12);
        assert!(recs[1].typical);
        assert!(!recs[2].typical);
        assert!(!is_ordered_triangle_typical(&p, 0.9));
    }

    #[test]
    fn completion_counts() {
        let counts: Vec<u128> = (1..=4).map(|n| completions_count(&PartialLatinSquare::new(n)).unwrap()).collect();
        assert_eq!(counts, vec![1, 2, 12, 576]);
        assert_eq!(completions_count(&one_entry()).unwrap(), 1);
        let stuck = PartialLatinSquare::from_entries(2, [Entry::new(0, 0, 0), Entry::new(1, 1, 1)]).unwrap();
        assert_eq!(completions_count(&stuck).unwrap(), 0);
        assert!(completions_count(&PartialLatinSquare::new(7)).is_err());
    }

    #[test]
    fn tail_bounds() {
        assert_eq!(freedman_bound(0.0, &[(0.5, 1.0)], 1.0).unwrap(), 1.0);
        let b = freedman_bound(10.0, &[(0.5, 1.0); 100], 1.0).unwrap();
        let expect = 2.0 * (-100.0f64 / (100.0 + 20.0 / 3.0)).exp();
        assert!((b - expect).abs() < 1e-15);
        assert!(freedman_bound(-1.0, &[], 1.0).is_err());
        assert_eq!(chernoff_bound(0.0, 10.0, 1.0).unwrap(), 1.0);
        let c = chernoff_bound(0.5, 100.0, 1.0).unwrap();
        assert!((c - 2.0 * (-25.0f64 / (2.0 + 1.0 / 3.0)).exp()).abs() < 1e-15);
        assert!(chernoff_bound(0.5, -1.0, 1.0).is_err());
    }
}

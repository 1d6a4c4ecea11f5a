//! Random Latin squares and partial Latin squares.
//!
//! * the triangle removal process on `K_{n,n,n}`,
//! * the binomial random 3-partite hypergraph with its conflict cleanup,
//! * the Jacobson–Matthews Markov chain on Latin squares.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::latin::{Entry, LatinSquare, OrderedPartialLatinSquare, PartialLatinSquare};

const ABSENT: u32 = u32::MAX;

/// Live state of the triangle removal process.
///
/// Keeps the three bipartite edge sets of the leftover graph and an indexed
/// list of the triangles still present.
#[derive(Debug, Clone)]
pub struct TriangleRemoval {
    n: usize,
    rc: Vec<bool>,
    rs: Vec<bool>,
    cs: Vec<bool>,
    triangles: Vec<u32>,
    pos: Vec<u32>,
}

impl TriangleRemoval {
    /// The complete tripartite graph `K_{n,n,n}`.
    pub fn new(n: usize) -> Result<Self> {
        Self::from_partial(&PartialLatinSquare::new(n))
    }

    /// The leftover graph of `base`, with its triangles in lexicographic order.
    pub fn from_partial(base: &PartialLatinSquare) -> Result<Self> {
        let n = base.n();
        if n == 0 || (n as u64).pow(3) >= ABSENT as u64 {
            return Err(Error::BadOrder(n));
        }
        let mut state = TriangleRemoval {
            n,
            rc: vec![true; n * n],
            rs: vec![true; n * n],
            cs: vec![true; n * n],
            triangles: Vec::new(),
            pos: vec![ABSENT; n * n * n],
        };
        for e in base.entries() {
            state.cover(e);
        }
        for r in 0..n {
            for c in 0..n {
                for s in 0..n {
                    let e = Entry::new(r, c, s);
                    if state.is_triangle(&e) {
                        let code = state.code(&e);
                        state.pos[code as usize] = state.triangles.len() as u32;
                        state.triangles.push(code);
                    }
                }
            }
        }
        Ok(state)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of triangles currently present.
    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_triangle(&self, e: &Entry) -> bool {
        let n = self.n;
        e.row < n && e.col < n && e.sym < n && self.rc[e.row * n + e.col] && self.rs[e.row * n + e.sym] && self.cs[e.col * n + e.sym]
    }

    fn code(&self, e: &Entry) -> u32 {
        ((e.row * self.n + e.col) * self.n + e.sym) as u32
    }

    fn decode(&self, code: u32) -> Entry {
        let k = code as usize;
        Entry::new(k / (self.n * self.n), k / self.n % self.n, k % self.n)
    }

    fn cover(&mut self, e: Entry) {
        let n = self.n;
        self.rc[e.row * n + e.col] = false;
        self.rs[e.row * n + e.sym] = false;
        self.cs[e.col * n + e.sym] = false;
    }

    fn drop_triangle(&mut self, e: Entry) {
        let code = self.code(&e) as usize;
        let p = self.pos[code];
        if p == ABSENT {
            return;
        }
        let last = self.triangles.pop().unwrap();
        if (p as usize) < self.triangles.len() {
            self.triangles[p as usize] = last;
            self.pos[last as usize] = p;
        }
        self.pos[code] = ABSENT;
    }

    /// Removes the triangle `e` and every triangle sharing an edge with it.
    pub fn remove(&mut self, e: Entry) -> Result<()> {
        if !self.is_triangle(&e) {
            return Err(Error::Conflict(e.row, e.col, e.sym));
        }
        let n = self.n;
        for x in 0..n {
            self.drop_triangle(Entry::new(e.row, e.col, x));
            self.drop_triangle(Entry::new(e.row, x, e.sym));
            self.drop_triangle(Entry::new(x, e.col, e.sym));
        }
        self.cover(e);
        Ok(())
    }

    /// Removes a uniformly random triangle, or returns `None` if none is left.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<Entry> {
        if self.triangles.is_empty() {
            return None;
        }
        let e = self.decode(self.triangles[rng.gen_range(0..self.triangles.len())]);
        self.remove(e).expect("listed triangles are present");
        Some(e)
    }
}

/// Result of running the triangle removal process for `m` steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrpOutcome {
    /// The ordered partial square, or `None` if triangles ran out first.
    pub result: Option<OrderedPartialLatinSquare>,
    /// Steps completed before stopping.
    pub steps_taken: usize,
    /// Triangle count before each completed step.
    pub triangle_counts: Vec<usize>,
}

impl TrpOutcome {
    pub fn is_bottom(&self) -> bool {
        self.result.is_none()
    }
}

/// Runs the process from `K_{n,n,n}` for `m` steps.
pub fn trp_run<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<TrpOutcome> {
    trp_from_partial(&PartialLatinSquare::new(n), m, rng)
}

/// Runs the process from the leftover graph of `base` for `m` steps.
/// The outcome lists only the new entries.
pub fn trp_from_partial<R: Rng + ?Sized>(base: &PartialLatinSquare, m: usize, rng: &mut R) -> Result<TrpOutcome> {
    let n = base.n();
    if base.len() + m > n * n {
        return Err(Error::TooMany { requested: m, available: n * n - base.len() });
    }
    let mut state = TriangleRemoval::from_partial(base)?;
    let mut entries = Vec::with_capacity(m);
    let mut counts = Vec::with_capacity(m);
    while entries.len() < m {
        counts.push(state.triangle_count());
        match state.step(rng) {
            Some(e) => entries.push(e),
            None => {
                counts.pop();
                return Ok(TrpOutcome { result: None, steps_taken: entries.len(), triangle_counts: counts });
            }
        }
    }
    Ok(TrpOutcome {
        result: Some(OrderedPartialLatinSquare::new_unchecked(n, entries)),
        steps_taken: m,
        triangle_counts: counts,
    })
}

/// Triangle counts `T_1, ..., T_m` seen while replaying `ordered` on top of
/// `base`, or `None` if some entry is not a triangle at its step.
pub fn replay_counts(base: &PartialLatinSquare, ordered: &OrderedPartialLatinSquare) -> Result<Option<Vec<usize>>> {
    if base.n() != ordered.n() {
        return Err(Error::InvalidParameter("order mismatch".into()));
    }
    let mut state = TriangleRemoval::from_partial(base)?;
    let mut counts = Vec::with_capacity(ordered.len());
    for &e in ordered.entries() {
        counts.push(state.triangle_count());
        if state.remove(e).is_err() {
            return Ok(None);
        }
    }
    Ok(Some(counts))
}

/// Natural log of the probability that the process outputs `ordered`.
/// Negative infinity for outcomes the process cannot produce.
pub fn trp_log_probability(ordered: &OrderedPartialLatinSquare) -> Result<f64> {
    Ok(match replay_counts(&PartialLatinSquare::new(ordered.n()), ordered)? {
        Some(counts) => -counts.iter().map(|&t| (t as f64).ln()).sum::<f64>(),
        None => f64::NEG_INFINITY,
    })
}

/// Exact probability that the process outputs `ordered`.
pub fn trp_probability_exact(ordered: &OrderedPartialLatinSquare) -> Result<BigRational> {
    Ok(match replay_counts(&PartialLatinSquare::new(ordered.n()), ordered)? {
        Some(counts) => counts.iter().fold(BigRational::one(), |acc, &t| acc / BigInt::from(t)),
        None => BigRational::from_integer(BigInt::from(0)),
    })
}

/// Largest number of outcome-tree leaves [`trp_outcome_law`] will visit.
pub const MAX_TREE_LEAVES: usize = 5_000_000;

/// Ordered outcomes with their masses.
pub type OutcomeMasses = Vec<(OrderedPartialLatinSquare, BigRational)>;

/// Exact law of the process run for `m` steps from `K_{n,n,n}`: the mass of
/// every ordered outcome, and the mass of running out of triangles.
pub fn trp_outcome_law(n: usize, m: usize) -> Result<(OutcomeMasses, BigRational)> {
    if n == 0 || m > n * n {
        return Err(Error::InvalidParameter(format!("need n >= 1 and m <= n^2, got n = {n}, m = {m}")));
    }
    let mut leaves = Vec::new();
    let mut bottom = BigRational::from_integer(BigInt::from(0));
    let mut visited = 0usize;
    let mut prefix = Vec::with_capacity(m);
    let state = TriangleRemoval::new(n)?;
    tree_walk(&state, m, &mut prefix, BigRational::one(), &mut leaves, &mut bottom, &mut visited)?;
    Ok((leaves, bottom))
}

fn tree_walk(
    state: &TriangleRemoval,
    m: usize,
    prefix: &mut Vec<Entry>,
    mass: BigRational,
    leaves: &mut OutcomeMasses,
    bottom: &mut BigRational,
    visited: &mut usize,
) -> Result<()> {
    *visited += 1;
    if *visited > MAX_TREE_LEAVES {
        return Err(Error::TooLarge(format!("outcome tree exceeds {MAX_TREE_LEAVES} nodes")));
    }
    if prefix.len() == m {
        leaves.push((OrderedPartialLatinSquare::new_unchecked(state.n(), prefix.clone()), mass));
        return Ok(());
    }
    let t = state.triangle_count();
    if t == 0 {
        *bottom += mass;
        return Ok(());
    }
    let n = state.n();
    let share = mass / BigInt::from(t);
    for r in 0..n {
        for c in 0..n {
            for s in 0..n {
                let e = Entry::new(r, c, s);
                if state.is_triangle(&e) {
                    let mut next = state.clone();
                    next.remove(e)?;
                    prefix.push(e);
                    tree_walk(&next, m, prefix, share.clone(), leaves, bottom, visited)?;
                    prefix.pop();
                }
            }
        }
    }
    Ok(())
}

/// A set of triples `(row, col, sym)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    pub n: usize,
    pub edges: Vec<Entry>,
}

/// Includes each of the `n^3` triples independently with probability `p`.
pub fn binomial_hypergraph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Hypergraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadFraction(p.to_string()));
    }
    if n == 0 {
        return Err(Error::BadOrder(n));
    }
    let mut edges = Vec::new();
    for r in 0..n {
        for c in 0..n {
            for s in 0..n {
                if rng.gen_bool(p) {
                    edges.push(Entry::new(r, c, s));
                }
            }
        }
    }
    Ok(Hypergraph { n, edges })
}

/// Deletes every hyperedge that shares two vertices with another one.
pub fn strip_conflicts(h: &Hypergraph) -> PartialLatinSquare {
    let n = h.n;
    let mut rc = vec![0u32; n * n];
    let mut rs = vec![0u32; n * n];
    let mut cs = vec![0u32; n * n];
    for e in &h.edges {
        rc[e.row * n + e.col] += 1;
        rs[e.row * n + e.sym] += 1;
        cs[e.col * n + e.sym] += 1;
    }
    let mut p = PartialLatinSquare::new(n);
    for e in &h.edges {
        if rc[e.row * n + e.col] == 1 && rs[e.row * n + e.sym] == 1 && cs[e.col * n + e.sym] == 1 {
            p.insert_unchecked(*e);
        }
    }
    p
}

/// The Jacobson–Matthews chain on incidence cubes.
///
/// Proper states are Latin squares; improper states carry a single `-1`
/// entry. The chain is symmetric, so its proper states are visited
/// uniformly in the long run.
#[derive(Debug, Clone)]
pub struct ChainSampler {
    n: usize,
    cube: Vec<i8>,
    improper: Option<[usize; 3]>,
}

impl ChainSampler {
    pub fn new(start: &LatinSquare) -> Self {
        let n = start.n();
        let mut cube = vec![0i8; n * n * n];
        for e in start.entries() {
            cube[(e.row * n + e.col) * n + e.sym] = 1;
        }
        ChainSampler { n, cube, improper: None }
    }

    fn at(&self, r: usize, c: usize, s: usize) -> i8 {
        self.cube[(r * self.n + c) * self.n + s]
    }

    fn add(&mut self, r: usize, c: usize, s: usize, d: i8) {
        let n = self.n;
        self.cube[(r * n + c) * n + s] += d;
    }

    pub fn is_proper(&self) -> bool {
        self.improper.is_none()
    }

    /// The current square, if the state is proper.
    pub fn square(&self) -> Option<LatinSquare> {
        if !self.is_proper() {
            return None;
        }
        let n = self.n;
        let mut grid = vec![0u16; n * n];
        for r in 0..n {
            for c in 0..n {
                grid[r * n + c] = (0..n).find(|&s| self.at(r, c, s) == 1).unwrap() as u16;
            }
        }
        Some(LatinSquare::from_grid_unchecked(n, grid))
    }

    /// One move of the chain.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let n = self.n;
        if n < 2 {
            return;
        }
        let (r, c, s, r2, c2, s2) = match self.improper {
            None => {
                let (r, c, s) = loop {
                    let (r, c, s) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                    if self.at(r, c, s) == 0 {
                        break (r, c, s);
                    }
                };
                let r2 = (0..n).find(|&x| self.at(x, c, s) == 1).unwrap();
                let c2 = (0..n).find(|&x| self.at(r, x, s) == 1).unwrap();
                let s2 = (0..n).find(|&x| self.at(r, c, x) == 1).unwrap();
                (r, c, s, r2, c2, s2)
            }
            Some([r, c, s]) => {
                let pick = |rng: &mut R, xs: Vec<usize>| xs[rng.gen_range(0..xs.len())];
                let rows = (0..n).filter(|&x| self.at(x, c, s) == 1).collect();
                let cols = (0..n).filter(|&x| self.at(r, x, s) == 1).collect();
                let syms = (0..n).filter(|&x| self.at(r, c, x) == 1).collect();
                let r2 = pick(rng, rows);
                let c2 = pick(rng, cols);
                let s2 = pick(rng, syms);
                (r, c, s, r2, c2, s2)
            }
        };
        self.add(r, c, s, 1);
        self.add(r, c2, s, -1);
        self.add(r2, c, s, -1);
        self.add(r, c, s2, -1);
        self.add(r, c2, s2, 1);
        self.add(r2, c, s2, 1);
        self.add(r2, c2, s, 1);
        self.add(r2, c2, s2, -1);
        self.improper = (self.at(r2, c2, s2) == -1).then_some([r2, c2, s2]);
    }

    /// Proper states observed every `thin` moves after `burn_in` moves.
    /// Checkpoints landing on an improper state are skipped.
    pub fn thinned<'a, R: Rng + ?Sized>(&'a mut self, burn_in: usize, thin: usize, rng: &'a mut R) -> impl Iterator<Item = LatinSquare> + 'a {
        for _ in 0..burn_in {
            self.step(rng);
        }
        let thin = thin.max(1);
        std::iter::repeat(()).filter_map(move |_| {
            for _ in 0..thin {
                self.step(rng);
            }
            self.square()
        })
    }
}

/// Runs the chain from the cyclic square for `steps` moves, then until the
/// state is proper.
pub fn chain_sample<R: Rng + ?Sized>(n: usize, steps: usize, rng: &mut R) -> Result<LatinSquare> {
    if n == 0 {
        return Err(Error::BadOrder(n));
    }
    let mut chain = ChainSampler::new(&LatinSquare::cyclic(n));
    for _ in 0..steps {
        chain.step(rng);
    }
    while !chain.is_proper() {
        chain.step(rng);
    }
    Ok(chain.square().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn n2_completion_probability() {
        let p = OrderedPartialLatinSquare::new(
            2,
            vec![Entry::new(0, 0, 0), Entry::new(0, 1, 1), Entry::new(1, 0, 1), Entry::new(1, 1, 0)],
        )
        .unwrap();
        let base = PartialLatinSquare::new(2);
        assert_eq!(replay_counts(&base, &p).unwrap(), Some(vec![8, 4, 2, 1]));
        assert!((trp_log_probability(&p).unwrap() + (64f64).ln()).abs() < 1e-12);
        assert_eq!(trp_probability_exact(&p).unwrap(), BigRational::new(1.into(), 64.into()));
    }

    #[test]
    fn n2_runs_either_complete_or_stick() {
        let mut rng = seeded(5);
        for _ in 0..100 {
            let out = trp_run(2, 4, &mut rng).unwrap();
            match &out.result {
                Some(p) => assert_eq!(p.to_partial().len(), 4),
                None => assert_eq!(out.steps_taken, 2),
            }
        }
    }

    #[test]
    fn stuck_prefix_probability() {
        let p = OrderedPartialLatinSquare::new(2, vec![Entry::new(0, 0, 0), Entry::new(1, 1, 1)]).unwrap();
        assert!((trp_log_probability(&p).unwrap() + (32f64).ln()).abs() < 1e-12);
        let mut state = TriangleRemoval::new(2).unwrap();
        state.remove(Entry::new(0, 0, 0)).unwrap();
        state.remove(Entry::new(1, 1, 1)).unwrap();
        assert_eq!(state.triangle_count(), 0);
        assert!(state.remove(Entry::new(0, 1, 1)).is_err());
    }

    #[test]
    fn trp_edge_cases() {
        let mut rng = seeded(1);
        assert!(trp_run(3, 0, &mut rng).unwrap().result.unwrap().is_empty());
        assert!(trp_run(3, 10, &mut rng).is_err());
        let square = LatinSquare::cyclic(3).to_partial();
        assert!(trp_from_partial(&square, 0, &mut rng).unwrap().result.is_some());
    }

    #[test]
    fn from_partial_respects_base() {
        let mut rng = seeded(9);
        let base = PartialLatinSquare::from_entries(5, [Entry::new(0, 0, 0), Entry::new(1, 1, 0)]).unwrap();
        for _ in 0..50 {
            let out = trp_from_partial(&base, 6, &mut rng).unwrap();
            if let Some(p) = out.result {
                let mut all = base.clone();
                for &e in p.entries() {
                    all.insert(e).unwrap();
                }
            }
        }
    }

    #[test]
    fn binomial_extremes() {
        let mut rng = seeded(3);
        assert!(binomial_hypergraph(8, 0.0, &mut rng).unwrap().edges.is_empty());
        let full = binomial_hypergraph(3, 1.0, &mut rng).unwrap();
        assert_eq!(full.edges.len(), 27);
        assert!(strip_conflicts(&full).is_empty());
        assert!(binomial_hypergraph(3, 1.5, &mut rng).is_err());
    }

    #[test]
    fn chain_zero_steps_is_cyclic() {
        let mut rng = seeded(0);
        assert_eq!(chain_sample(4, 0, &mut rng).unwrap(), LatinSquare::cyclic(4));
    }

    #[test]
    fn chain_moves_stay_valid() {
        let mut rng = seeded(4);
        let mut chain = ChainSampler::new(&LatinSquare::cyclic(6));
        for _ in 0..2000 {
            chain.step(&mut rng);
            for r in 0..6 {
                for c in 0..6 {
                    let line: i32 = (0..6).map(|s| chain.at(r, c, s) as i32).sum();
                    assert_eq!(line, 1);
                }
            }
            if let Some(l) = chain.square() {
                let rows: Vec<Vec<usize>> = l.rows().into_iter().map(|r| r.into_iter().map(|s| s + 1).collect()).collect();
                assert!(crate::latin::validate_square(&rows).is_ok());
            }
        }
    }
}

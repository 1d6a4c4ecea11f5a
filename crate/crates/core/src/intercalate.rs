//! Intercalates (2x2 Latin subsquares), critical sets and stability.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::latin::{Entry, PartialLatinSquare};
use crate::search::{max_disjoint, DEFAULT_BUDGET};

/// Largest critical set considered.
pub const MAX_CRITICAL_SIZE: usize = 4;

/// An intercalate on rows `r1 < r2` and columns `c1 < c2`, with symbol `a`
/// at `(r1, c1)` and `(r2, c2)` and symbol `b` at `(r1, c2)` and `(r2, c1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Intercalate {
    pub rows: [usize; 2],
    pub cols: [usize; 2],
    pub a: usize,
    pub b: usize,
}

/// Row, column and symbol pairs of an intercalate, without the orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SigmaKey {
    pub rows: [usize; 2],
    pub cols: [usize; 2],
    pub syms: [usize; 2],
}

impl Intercalate {
    /// Builds the intercalate on the given rows and columns, taking `a` as
    /// the symbol at (smaller row, smaller column).
    pub fn new(rows: [usize; 2], cols: [usize; 2], a: usize, b: usize) -> Self {
        assert!(rows[0] != rows[1] && cols[0] != cols[1] && a != b, "degenerate intercalate");
        let flip = (rows[0] > rows[1]) != (cols[0] > cols[1]);
        let (a, b) = if flip { (b, a) } else { (a, b) };
        let mut rows = rows;
        let mut cols = cols;
        rows.sort_unstable();
        cols.sort_unstable();
        Intercalate { rows, cols, a, b }
    }

    pub fn entries(&self) -> [Entry; 4] {
        let [r1, r2] = self.rows;
        let [c1, c2] = self.cols;
        [Entry::new(r1, c1, self.a), Entry::new(r1, c2, self.b), Entry::new(r2, c1, self.b), Entry::new(r2, c2, self.a)]
    }

    pub fn cells(&self) -> [(usize, usize); 4] {
        let [r1, r2] = self.rows;
        let [c1, c2] = self.cols;
        [(r1, c1), (r1, c2), (r2, c1), (r2, c2)]
    }

    /// The intercalate on the same cells with the two symbols exchanged.
    pub fn switched(&self) -> Intercalate {
        Intercalate { a: self.b, b: self.a, ..*self }
    }

    pub fn sigma(&self) -> SigmaKey {
        let mut syms = [self.a, self.b];
        syms.sort_unstable();
        SigmaKey { rows: self.rows, cols: self.cols, syms }
    }

    pub fn shares_entry(&self, other: &Intercalate) -> bool {
        let mine = self.entries();
        other.entries().iter().any(|e| mine.contains(e))
    }

    pub fn shares_cell(&self, other: &Intercalate) -> bool {
        let mine = self.cells();
        other.cells().iter().any(|c| mine.contains(c))
    }

    pub fn is_in(&self, p: &PartialLatinSquare) -> bool {
        self.entries().iter().all(|e| p.contains(e))
    }

    /// The intercalate occupying cells `rows x cols` of `p`, if any.
    pub fn at(p: &PartialLatinSquare, rows: [usize; 2], cols: [usize; 2]) -> Option<Intercalate> {
        let x11 = p.get(rows[0], cols[0])?;
        let x12 = p.get(rows[0], cols[1])?;
        let x21 = p.get(rows[1], cols[0])?;
        let x22 = p.get(rows[1], cols[1])?;
        (x11 == x22 && x12 == x21 && x11 != x12).then(|| Intercalate::new(rows, cols, x11, x12))
    }
}

/// All intercalates of `p`, sorted.
pub fn enumerate_intercalates(p: &PartialLatinSquare) -> Vec<Intercalate> {
    let n = p.n();
    let mut out = Vec::new();
    for r1 in 0..n {
        for r2 in r1 + 1..n {
            for c1 in 0..n {
                let (Some(a), Some(b)) = (p.get(r1, c1), p.get(r2, c1)) else { continue };
                let Some(c2) = p.col_of(r1, b) else { continue };
                if c2 > c1 && p.get(r2, c2) == Some(a) {
                    out.push(Intercalate::new([r1, r2], [c1, c2], a, b));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Intercalates of `p` containing the entry `e`.
pub fn intercalates_through(p: &PartialLatinSquare, e: &Entry) -> Vec<Intercalate> {
    if !p.contains(e) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for r2 in (0..p.n()).filter(|&r| r != e.row) {
        let Some(b) = p.get(r2, e.col) else { continue };
        let Some(c2) = p.col_of(e.row, b) else { continue };
        if p.get(r2, c2) == Some(e.sym) {
            out.push(Intercalate::new([e.row, r2], [e.col, c2], e.sym, b));
        }
    }
    out.sort_unstable();
    out
}

/// Replaces the intercalate `a` of `p` by its switch.
pub fn switch_intercalate(p: &PartialLatinSquare, a: &Intercalate) -> Result<PartialLatinSquare> {
    let mut q = p.clone();
    switch_in_place(&mut q, a)?;
    Ok(q)
}

fn switch_in_place(p: &mut PartialLatinSquare, a: &Intercalate) -> Result<()> {
    if !a.is_in(p) {
        return Err(Error::NotAnIntercalate);
    }
    for e in a.entries() {
        p.remove(&e);
    }
    for e in a.switched().entries() {
        p.insert_unchecked(e);
    }
    Ok(())
}

/// Intercalates of `p` sharing no entry with any other intercalate of `p`.
pub fn isolated_intercalates(p: &PartialLatinSquare) -> Vec<Intercalate> {
    isolated_among(p, &enumerate_intercalates(p))
}

fn isolated_among(p: &PartialLatinSquare, all: &[Intercalate]) -> Vec<Intercalate> {
    let n = p.n();
    let mut cover = vec![0u8; n * n];
    for x in all {
        for (r, c) in x.cells() {
            cover[r * n + c] = cover[r * n + c].saturating_add(1);
        }
    }
    all.iter().filter(|x| x.cells().iter().all(|&(r, c)| cover[r * n + c] == 1)).copied().collect()
}

/// How a created intercalate must differ from what was there before.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NewIntercalateRule {
    /// Different from every member of the critical set (switched or not).
    #[default]
    DistinctFromMembers,
    /// Additionally not an intercalate of the original square.
    AbsentFromSource,
}

/// A family of isolated intercalates such that switching `switched` among
/// them creates `created`, an intercalate meeting every member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CriticalSet {
    pub members: Vec<Intercalate>,
    pub switched: Vec<bool>,
    pub created: Intercalate,
}

impl CriticalSet {
    /// Members after the switch.
    pub fn switched_members(&self) -> Vec<Intercalate> {
        self.members.iter().zip(&self.switched).map(|(m, &s)| if s { m.switched() } else { *m }).collect()
    }
}

/// A created intercalate together with the isolated intercalates covering
/// its cells and the subset that was switched.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Witness {
    pub created: Intercalate,
    pub cover: Vec<Intercalate>,
    pub switched: Vec<bool>,
}

impl Witness {
    /// All critical sets with this witness and at most `max_size` members.
    pub fn critical_sets(&self, max_size: usize) -> Vec<CriticalSet> {
        let k = self.cover.len();
        let forced: u32 = (0..k).filter(|&i| self.switched[i]).fold(0, |m, i| m | 1 << i);
        (0u32..1 << k)
            .filter(|d| d & forced == forced && d.count_ones() as usize <= max_size)
            .map(|d| {
                let idx: Vec<usize> = (0..k).filter(|i| d >> i & 1 == 1).collect();
                CriticalSet {
                    members: idx.iter().map(|&i| self.cover[i]).collect(),
                    switched: idx.iter().map(|&i| self.switched[i]).collect(),
                    created: self.created,
                }
            })
            .collect()
    }
}

/// Intercalate structure of a partial square.
#[derive(Debug, Clone)]
pub struct Stability {
    pub all: Vec<Intercalate>,
    pub isolated: Vec<Intercalate>,
    pub stable: Vec<Intercalate>,
    pub witnesses: Vec<Witness>,
}

/// Computes isolated and stable intercalates and every created intercalate.
///
/// Switching keeps the set of filled cells, and isolated intercalates are
/// cell-disjoint, so a created intercalate sits on four filled cells, each
/// covered by at most one isolated intercalate. The search runs over the
/// rectangles meeting an isolated intercalate and over the switch patterns
/// of the isolated intercalates covering them.
pub fn analyze(p: &PartialLatinSquare, rule: NewIntercalateRule) -> Stability {
    let n = p.n();
    let all = enumerate_intercalates(p);
    let isolated = isolated_among(p, &all);
    let mut owner: Vec<Option<usize>> = vec![None; n * n];
    for (i, x) in isolated.iter().enumerate() {
        for (r, c) in x.cells() {
            owner[r * n + c] = Some(i);
        }
    }
    let mut rects = HashSet::new();
    for x in &isolated {
        for (r, c) in x.cells() {
            for r2 in (0..n).filter(|&r2| r2 != r) {
                for c2 in (0..n).filter(|&c2| c2 != c) {
                    if p.get(r2, c2).is_some() && p.get(r, c2).is_some() && p.get(r2, c).is_some() {
                        rects.insert(([r.min(r2), r.max(r2)], [c.min(c2), c.max(c2)]));
                    }
                }
            }
        }
    }
    let mut rects: Vec<_> = rects.into_iter().collect();
    rects.sort_unstable();

    let mut witnesses = Vec::new();
    let mut unstable = vec![false; isolated.len()];
    for (rows, cols) in rects {
        let found = rect_witnesses(p, rows, cols, &|r, c| owner[r * n + c].map(|o| isolated[o]), rule);
        for w in &found {
            for x in &w.cover {
                unstable[isolated.binary_search(x).unwrap()] = true;
            }
        }
        witnesses.extend(found);
    }
    witnesses.sort();
    let stable = isolated.iter().zip(&unstable).filter(|(_, &u)| !u).map(|(x, _)| *x).collect();
    Stability { all, isolated, stable, witnesses }
}

/// Created intercalates on the filled rectangle `rows x cols`, where `owner`
/// names the isolated intercalate covering a cell, if any.
pub(crate) fn rect_witnesses(
    p: &PartialLatinSquare,
    rows: [usize; 2],
    cols: [usize; 2],
    owner: &dyn Fn(usize, usize) -> Option<Intercalate>,
    rule: NewIntercalateRule,
) -> Vec<Witness> {
    let cells = [(rows[0], cols[0]), (rows[0], cols[1]), (rows[1], cols[0]), (rows[1], cols[1])];
    let owners: Vec<Option<Intercalate>> = cells.iter().map(|&(r, c)| owner(r, c)).collect();
    let mut cover: Vec<Intercalate> = owners.iter().flatten().copied().collect();
    cover.sort_unstable();
    cover.dedup();
    if cover.is_empty() || (cover.len() == 1 && cover[0].cells() == cells) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mask in 1u32..1 << cover.len() {
        let content = |k: usize| {
            let (r, c) = cells[k];
            let v = p.get(r, c).expect("rectangle cells are filled");
            match owners[k] {
                Some(x) if mask >> cover.binary_search(&x).unwrap() & 1 == 1 => {
                    if v == x.a {
                        x.b
                    } else {
                        x.a
                    }
                }
                _ => v,
            }
        };
        let (x11, x12, x21, x22) = (content(0), content(1), content(2), content(3));
        if x11 == x12 || x22 != x11 || x21 != x12 {
            continue;
        }
        let created = Intercalate::new(rows, cols, x11, x12);
        if rule == NewIntercalateRule::AbsentFromSource && created.is_in(p) {
            continue;
        }
        out.push(Witness { created, cover: cover.clone(), switched: (0..cover.len()).map(|i| mask >> i & 1 == 1).collect() });
    }
    out
}

/// Every critical set of `p` with at most `max_size` members, sorted.
pub fn find_critical_sets(p: &PartialLatinSquare, max_size: usize, rule: NewIntercalateRule) -> Vec<CriticalSet> {
    let mut out: Vec<CriticalSet> = analyze(p, rule).witnesses.iter().flat_map(|w| w.critical_sets(max_size)).collect();
    out.sort();
    out.dedup();
    out
}

/// Isolated intercalates of `p` lying in no critical set.
pub fn stable_intercalates(p: &PartialLatinSquare) -> Vec<Intercalate> {
    analyze(p, NewIntercalateRule::default()).stable
}

/// The row, column and symbol pairs of the stable intercalates of `p`.
pub fn sigma_set(p: &PartialLatinSquare) -> BTreeSet<SigmaKey> {
    stable_intercalates(p).iter().map(Intercalate::sigma).collect()
}

/// Checks that switching the stable intercalate `a` leaves the stable
/// pair structure of `p` unchanged.
pub fn verify_canonicity(p: &PartialLatinSquare, a: &Intercalate) -> Result<bool> {
    let st = analyze(p, NewIntercalateRule::default());
    if !st.stable.contains(a) {
        return Err(Error::NotStable);
    }
    let before: BTreeSet<SigmaKey> = st.stable.iter().map(Intercalate::sigma).collect();
    Ok(before == sigma_set(&switch_intercalate(p, a)?))
}

/// Switches every intercalate of `family` (pairwise cell-disjoint).
pub fn switch_all(p: &PartialLatinSquare, family: &[Intercalate]) -> Result<PartialLatinSquare> {
    let mut q = p.clone();
    for a in family {
        switch_in_place(&mut q, a)?;
    }
    Ok(q)
}

/// Size of a largest family of pairwise entry-disjoint intercalates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointCount {
    pub size: usize,
    pub exact: bool,
    pub family: Vec<Intercalate>,
}

/// Maximum number of pairwise disjoint intercalates among `candidates`.
pub fn max_disjoint_among(n: usize, candidates: &[Intercalate]) -> DisjointCount {
    let sets: Vec<Vec<usize>> = candidates.iter().map(|x| x.cells().iter().map(|&(r, c)| r * n + c).collect()).collect();
    let packing = max_disjoint(&sets, DEFAULT_BUDGET);
    DisjointCount {
        size: packing.chosen.len(),
        exact: packing.exact,
        family: packing.chosen.iter().map(|&i| candidates[i]).collect(),
    }
}

/// Maximum number of pairwise disjoint intercalates of `p`.
pub fn count_disjoint_intercalates_max(p: &PartialLatinSquare) -> DisjointCount {
    max_disjoint_among(p.n(), &enumerate_intercalates(p))
}

/// Direct search over families, kept as a cross-check for [`analyze`].
pub mod reference {
    use super::*;

    /// Every critical set, found by switching each subset of each family of
    /// at most `max_size` isolated intercalates and rescanning.
    pub fn critical_sets(p: &PartialLatinSquare, max_size: usize, rule: NewIntercalateRule) -> Vec<CriticalSet> {
        let isolated = isolated_intercalates(p);
        let source: BTreeSet<Intercalate> = enumerate_intercalates(p).into_iter().collect();
        let mut out = Vec::new();
        let k = isolated.len();
        let mut family = Vec::new();
        subsets(k, max_size, 0, &mut family, &mut |idx: &[usize]| {
            let t = idx.len();
            for mask in 1u32..1 << t {
                let switched: Vec<bool> = (0..t).map(|i| mask >> i & 1 == 1).collect();
                let to_switch: Vec<Intercalate> = idx.iter().zip(&switched).filter(|(_, &s)| s).map(|(&i, _)| isolated[i]).collect();
                let q = switch_all(p, &to_switch).expect("isolated intercalates are disjoint");
                let after: Vec<Intercalate> =
                    idx.iter().zip(&switched).map(|(&i, &s)| if s { isolated[i].switched() } else { isolated[i] }).collect();
                for created in enumerate_intercalates(&q) {
                    if after.iter().any(|b| b.sigma() == created.sigma()) {
                        continue;
                    }
                    if !after.iter().all(|b| b.shares_entry(&created)) {
                        continue;
                    }
                    if rule == NewIntercalateRule::AbsentFromSource && source.contains(&created) {
                        continue;
                    }
                    out.push(CriticalSet { members: idx.iter().map(|&i| isolated[i]).collect(), switched: switched.clone(), created });
                }
            }
        });
        out.sort();
        out.dedup();
        out
    }

    fn subsets(k: usize, max: usize, from: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if !cur.is_empty() {
            f(cur);
        }
        if cur.len() == max {
            return;
        }
        for i in from..k {
            cur.push(i);
            subsets(k, max, i + 1, cur, f);
            cur.pop();
        }
    }

    /// Stable intercalates derived from [`critical_sets`].
    pub fn stable_intercalates(p: &PartialLatinSquare) -> Vec<Intercalate> {
        let critical: BTreeSet<Intercalate> =
            critical_sets(p, MAX_CRITICAL_SIZE, NewIntercalateRule::default()).into_iter().flat_map(|c| c.members).collect();
        isolated_intercalates(p).into_iter().filter(|x| !critical.contains(x)).collect()
    }
}

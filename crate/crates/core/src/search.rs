//! Maximum families of pairwise disjoint small sets.

/// Outcome of a packing search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packing {
    /// Indices of the chosen sets.
    pub chosen: Vec<usize>,
    /// False if the node budget ran out; `chosen` is then a lower bound.
    pub exact: bool,
}

/// Default number of search nodes before falling back to the best found.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// Largest family of pairwise disjoint sets among `sets`.
///
/// Branch and bound on the conflict graph, one connected component at a
/// time, with a greedy clique partition as the upper bound.
pub fn max_disjoint(sets: &[Vec<usize>], budget: u64) -> Packing {
    let k = sets.len();
    let words = k.div_ceil(64).max(1);
    let mut adj = vec![vec![0u64; words]; k];
    let mut owners: std::collections::HashMap<usize, Vec<usize>> = std::collections::HashMap::new();
    for (i, s) in sets.iter().enumerate() {
        for &x in s {
            owners.entry(x).or_default().push(i);
        }
    }
    for list in owners.values() {
        for &a in list {
            for &b in list {
                if a != b {
                    adj[a][b / 64] |= 1 << (b % 64);
                }
            }
        }
    }
    let adjacent = |a: usize, b: usize| adj[a][b / 64] >> (b % 64) & 1 == 1;

    let mut seen = vec![false; k];
    let mut chosen = Vec::new();
    let mut exact = true;
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < comp.len() {
            let v = comp[head];
            head += 1;
            for u in 0..k {
                if !seen[u] && adjacent(v, u) {
                    seen[u] = true;
                    comp.push(u);
                }
            }
        }
        comp.sort_unstable();
        let mut bb = Branch { adjacent: &adjacent, best: greedy(&comp, &adjacent), nodes: 0, budget, aborted: false };
        let mut cur = Vec::new();
        bb.expand(comp, &mut cur);
        exact &= !bb.aborted;
        chosen.extend(bb.best);
    }
    chosen.sort_unstable();
    Packing { chosen, exact }
}

fn greedy(cand: &[usize], adjacent: &dyn Fn(usize, usize) -> bool) -> Vec<usize> {
    let mut order: Vec<usize> = cand.to_vec();
    order.sort_by_key(|&v| cand.iter().filter(|&&u| adjacent(v, u)).count());
    let mut out: Vec<usize> = Vec::new();
    for v in order {
        if out.iter().all(|&u| !adjacent(u, v)) {
            out.push(v);
        }
    }
    out
}

struct Branch<'a> {
    adjacent: &'a dyn Fn(usize, usize) -> bool,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl Branch<'_> {
    fn clique_bound(&self, cand: &[usize]) -> usize {
        let mut used = vec![false; cand.len()];
        let mut cliques = 0;
        for i in 0..cand.len() {
            if used[i] {
                continue;
            }
            cliques += 1;
            used[i] = true;
            let mut members = vec![cand[i]];
            for j in i + 1..cand.len() {
                if !used[j] && members.iter().all(|&m| (self.adjacent)(m, cand[j])) {
                    used[j] = true;
                    members.push(cand[j]);
                }
            }
        }
        cliques
    }

    fn expand(&mut self, cand: Vec<usize>, cur: &mut Vec<usize>) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        if cand.is_empty() {
            if cur.len() > self.best.len() {
                self.best = cur.clone();
            }
            return;
        }
        if cur.len() + self.clique_bound(&cand) <= self.best.len() {
            return;
        }
        let degree = |v: usize| cand.iter().filter(|&&u| (self.adjacent)(v, u)).count();
        let v = *cand.iter().max_by_key(|&&v| degree(v)).unwrap();
        let with: Vec<usize> = cand.iter().copied().filter(|&u| u != v && !(self.adjacent)(v, u)).collect();
        cur.push(v);
        self.expand(with, cur);
        cur.pop();
        if degree(v) > 0 {
            let without: Vec<usize> = cand.into_iter().filter(|&u| u != v).collect();
            self.expand(without, cur);
        }
    }
}

//! Bad configurations, threatened pairs and the four basic patterns.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intercalate::{
    analyze, enumerate_intercalates, intercalates_through, rect_witnesses, CriticalSet, Intercalate, NewIntercalateRule,
    MAX_CRITICAL_SIZE,
};
use crate::latin::{Entry, OrderedPartialLatinSquare, PartialLatinSquare};

/// Six sets of lines `(R, R*, C, C*, S, S*)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PermissibleTuple {
    pub r: BTreeSet<usize>,
    pub r_star: BTreeSet<usize>,
    pub c: BTreeSet<usize>,
    pub c_star: BTreeSet<usize>,
    pub s: BTreeSet<usize>,
    pub s_star: BTreeSet<usize>,
}

fn pair_split(pair: [usize; 2], x: &BTreeSet<usize>, x_star: &BTreeSet<usize>) -> bool {
    (x.contains(&pair[0]) && x_star.contains(&pair[1])) || (x.contains(&pair[1]) && x_star.contains(&pair[0]))
}

impl PermissibleTuple {
    /// `|R*| = ell` and each of the other five sets has at least `beta n` lines.
    pub fn is_permissible(&self, n: usize, ell: usize, beta: f64) -> bool {
        let all = [&self.r, &self.r_star, &self.c, &self.c_star, &self.s, &self.s_star];
        if all.iter().any(|set| set.iter().any(|&x| x >= n)) {
            return false;
        }
        let min = (beta * n as f64 - 1e-9).ceil().max(0.0) as usize;
        self.r_star.len() == ell && [&self.r, &self.c, &self.c_star, &self.s, &self.s_star].iter().all(|set| set.len() >= min)
    }

    /// True if the rows, columns and symbols of `a` each meet the tuple in
    /// the pattern one-in-X, one-in-X*.
    pub fn is_split(&self, a: &Intercalate) -> bool {
        let sigma = a.sigma();
        pair_split(sigma.rows, &self.r, &self.r_star)
            && pair_split(sigma.cols, &self.c, &self.c_star)
            && pair_split(sigma.syms, &self.s, &self.s_star)
    }

    /// Rows of `a` that can play the starred role in a split of `a`.
    fn special_rows(&self, a: &Intercalate) -> Vec<usize> {
        let sigma = a.sigma();
        if !pair_split(sigma.cols, &self.c, &self.c_star) || !pair_split(sigma.syms, &self.s, &self.s_star) {
            return Vec::new();
        }
        let [r1, r2] = a.rows;
        let mut out = Vec::new();
        if self.r_star.contains(&r1) && self.r.contains(&r2) {
            out.push(r1);
        }
        if self.r_star.contains(&r2) && self.r.contains(&r1) {
            out.push(r2);
        }
        out
    }
}

/// Which intercalates count as split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitFilter {
    /// Split when a row lies in the given set `R*`.
    Rows(BTreeSet<usize>),
    /// Split in the sense of a full tuple.
    Tuple(PermissibleTuple),
}

impl SplitFilter {
    /// Rows of `a` whose entries would be the special entries.
    pub fn special_rows(&self, a: &Intercalate) -> Vec<usize> {
        match self {
            SplitFilter::Rows(rs) => a.rows.iter().copied().filter(|r| rs.contains(r)).collect(),
            SplitFilter::Tuple(t) => t.special_rows(a),
        }
    }

    pub fn is_split(&self, a: &Intercalate) -> bool {
        !self.special_rows(a).is_empty()
    }
}

/// Kind of a bad configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BadKind {
    /// Two intercalates sharing exactly one entry.
    Intersecting,
    /// The members of a critical set with the surviving entries of the
    /// created intercalate.
    Critical,
}

/// A bad configuration of a partial square.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BadConfiguration {
    pub kind: BadKind,
    pub intercalates: Vec<Intercalate>,
    pub entries: BTreeSet<Entry>,
    pub created: Option<Intercalate>,
}

impl BadConfiguration {
    fn intersecting(a: Intercalate, b: Intercalate) -> Self {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let entries = a.entries().into_iter().chain(b.entries()).collect();
        BadConfiguration { kind: BadKind::Intersecting, intercalates: vec![a, b], entries, created: None }
    }

    fn critical(p: &PartialLatinSquare, cs: &CriticalSet) -> Self {
        let mut entries: BTreeSet<Entry> = cs.members.iter().flat_map(|m| m.entries()).collect();
        entries.extend(cs.created.entries().into_iter().filter(|e| p.contains(e)));
        BadConfiguration { kind: BadKind::Critical, intercalates: cs.members.clone(), entries, created: Some(cs.created) }
    }
}

/// Pairs of intercalates of `p` sharing exactly one entry.
pub fn intersecting_pairs(p: &PartialLatinSquare) -> Vec<(Intercalate, Intercalate)> {
    let mut out = BTreeSet::new();
    for a in enumerate_intercalates(p) {
        for e in a.entries() {
            for b in intercalates_through(p, &e) {
                if b > a {
                    out.insert((a, b));
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Every bad configuration of `p`.
pub fn bad_configurations(p: &PartialLatinSquare) -> Vec<BadConfiguration> {
    let mut out: Vec<BadConfiguration> = intersecting_pairs(p).into_iter().map(|(a, b)| BadConfiguration::intersecting(a, b)).collect();
    let st = analyze(p, NewIntercalateRule::default());
    let mut critical: Vec<CriticalSet> = st.witnesses.iter().flat_map(|w| w.critical_sets(MAX_CRITICAL_SIZE)).collect();
    critical.sort();
    critical.dedup();
    out.extend(critical.iter().map(|cs| BadConfiguration::critical(p, cs)));
    out
}

/// A bad configuration with a chosen split member and its special entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplitBadConfiguration {
    pub config: BadConfiguration,
    pub split_member: Intercalate,
    /// The two entries of the split member in its starred row.
    pub special: [Entry; 2],
}

fn special_copies(config: &BadConfiguration, filter: &SplitFilter) -> Vec<SplitBadConfiguration> {
    let mut out = Vec::new();
    for m in &config.intercalates {
        for row in filter.special_rows(m) {
            let mut special: Vec<Entry> = m.entries().into_iter().filter(|e| e.row == row).collect();
            special.sort();
            out.push(SplitBadConfiguration { config: config.clone(), split_member: *m, special: [special[0], special[1]] });
        }
    }
    out
}

/// Every split bad configuration of `p`, one copy per choice of split
/// member and starred row.
pub fn split_bad_configurations(p: &PartialLatinSquare, filter: &SplitFilter) -> Vec<SplitBadConfiguration> {
    bad_configurations(p).iter().flat_map(|c| special_copies(c, filter)).collect()
}

/// Number of entries in starred rows that are special entries of some split
/// bad configuration.
pub fn covered_entry_count(p: &PartialLatinSquare, filter: &SplitFilter) -> usize {
    split_bad_configurations(p, filter).iter().flat_map(|c| c.special).collect::<BTreeSet<Entry>>().len()
}

/// A pair of absent entries whose addition would complete a split bad
/// configuration having them as its special entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThreatRecord {
    pub pair: [Entry; 2],
    pub witness: SplitBadConfiguration,
}

/// Counts of threatened pairs, by pair and by witnessing configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ThreatCounts {
    pub pairs: usize,
    pub copies: usize,
}

fn isolated_owner(p: &PartialLatinSquare, r: usize, c: usize) -> Option<Intercalate> {
    let e = Entry::new(r, c, p.get(r, c)?);
    let through = intercalates_through(p, &e);
    if through.len() != 1 {
        return None;
    }
    let x = through[0];
    x.entries().iter().all(|f| intercalates_through(p, f).len() == 1).then_some(x)
}

/// Split bad configurations of `q` in which `a` is the split member.
fn configurations_on(q: &PartialLatinSquare, a: &Intercalate) -> Vec<BadConfiguration> {
    let mut out = BTreeSet::new();
    for e in a.entries() {
        for b in intercalates_through(q, &e) {
            if b != *a {
                out.insert(BadConfiguration::intersecting(*a, b));
            }
        }
    }
    if isolated_owner(q, a.rows[0], a.cols[0]) == Some(*a) {
        let n = q.n();
        let mut rects = BTreeSet::new();
        for (r, c) in a.cells() {
            for r2 in (0..n).filter(|&x| x != r) {
                for c2 in (0..n).filter(|&x| x != c) {
                    if q.get(r2, c2).is_some() && q.get(r, c2).is_some() && q.get(r2, c).is_some() {
                        rects.insert(([r.min(r2), r.max(r2)], [c.min(c2), c.max(c2)]));
                    }
                }
            }
        }
        for (rows, cols) in rects {
            for w in rect_witnesses(q, rows, cols, &|r, c| isolated_owner(q, r, c), NewIntercalateRule::default()) {
                for cs in w.critical_sets(MAX_CRITICAL_SIZE) {
                    if cs.members.contains(a) {
                        out.insert(BadConfiguration::critical(q, &cs));
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Every (pair, witness) with the pair in a row of `r_star`.
pub fn threat_witnesses(p: &PartialLatinSquare, r_star: &BTreeSet<usize>) -> Vec<ThreatRecord> {
    let n = p.n();
    let mut out = Vec::new();
    for r2 in 0..n {
        for c1 in 0..n {
            let Some(s1) = p.get(r2, c1) else { continue };
            for c2 in c1 + 1..n {
                let Some(s2) = p.get(r2, c2) else { continue };
                for &r in r_star.iter().filter(|&&r| r != r2 && r < n) {
                    let e1 = Entry::new(r, c1, s2);
                    let e2 = Entry::new(r, c2, s1);
                    if !p.can_add(&e1) || !p.can_add(&e2) {
                        continue;
                    }
                    let mut q = p.clone();
                    q.insert(e1).unwrap();
                    q.insert(e2).unwrap();
                    let a = Intercalate::new([r, r2], [c1, c2], s2, s1);
                    for config in configurations_on(&q, &a) {
                        out.push(ThreatRecord { pair: [e1, e2], witness: SplitBadConfiguration { config, split_member: a, special: [e1, e2] } });
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Threatened pairs in rows of `r_star`, one record per pair.
pub fn threatened_pairs(p: &PartialLatinSquare, r_star: &BTreeSet<usize>) -> Vec<ThreatRecord> {
    let mut seen = BTreeSet::new();
    threat_witnesses(p, r_star).into_iter().filter(|t| seen.insert(t.pair)).collect()
}

pub fn threat_counts(p: &PartialLatinSquare, r_star: &BTreeSet<usize>) -> ThreatCounts {
    let all = threat_witnesses(p, r_star);
    ThreatCounts { pairs: all.iter().map(|t| t.pair).collect::<BTreeSet<_>>().len(), copies: all.len() }
}

/// The four basic patterns. Vertices are `r1*, r2, r3`, `c1, c2, c3`,
/// `s1, s2, s3`, numbered `0, 1, 2` in each part; `r1*` is the starred row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QType {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl QType {
    pub const ALL: [QType; 4] = [QType::Q1, QType::Q2, QType::Q3, QType::Q4];

    pub fn index(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_index(t: u8) -> Result<QType> {
        match t {
            1 => Ok(QType::Q1),
            2 => Ok(QType::Q2),
            3 => Ok(QType::Q3),
            4 => Ok(QType::Q4),
            _ => Err(Error::InvalidParameter(format!("pattern type {t} is not in 1..=4"))),
        }
    }

    /// The five entries of the pattern, in the block order used for
    /// consistency with an ordering.
    pub fn pattern(self) -> [Entry; 5] {
        let e = Entry::new;
        match self {
            QType::Q1 => [e(2, 2, 1), e(1, 2, 2), e(2, 1, 2), e(1, 1, 0), e(1, 0, 1)],
            QType::Q2 => [e(2, 2, 1), e(1, 2, 2), e(2, 1, 2), e(1, 1, 1), e(1, 0, 0)],
            QType::Q3 => [e(2, 2, 1), e(0, 2, 2), e(2, 1, 2), e(1, 1, 1), e(1, 0, 0)],
            QType::Q4 => [e(2, 2, 1), e(0, 2, 2), e(2, 1, 2), e(1, 1, 0), e(1, 0, 1)],
        }
    }

    /// The two entries in row `r1*` completing the configuration.
    pub fn special_pattern(self) -> [Entry; 2] {
        let e = Entry::new;
        match self {
            QType::Q1 | QType::Q4 => [e(0, 0, 0), e(0, 1, 1)],
            QType::Q2 | QType::Q3 => [e(0, 0, 1), e(0, 1, 0)],
        }
    }
}

/// An injective, part-preserving map of the pattern vertices into a square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Embedding {
    pub kind: QType,
    pub rows: [usize; 3],
    pub cols: [usize; 3],
    pub syms: [usize; 3],
}

impl Embedding {
    fn map(&self, e: &Entry) -> Entry {
        Entry::new(self.rows[e.row], self.cols[e.col], self.syms[e.sym])
    }

    /// Images of the pattern entries, in block order.
    pub fn entries(&self) -> [Entry; 5] {
        self.kind.pattern().map(|e| self.map(&e))
    }

    /// Images of the two special entries.
    pub fn special_pair(&self) -> [Entry; 2] {
        self.kind.special_pattern().map(|e| self.map(&e))
    }
}

struct Embedder<'a> {
    p: &'a PartialLatinSquare,
    r_star: &'a BTreeSet<usize>,
    pattern: [Entry; 5],
    maps: [[Option<usize>; 3]; 3],
    out: Vec<[[usize; 3]; 3]>,
}

impl Embedder<'_> {
    fn bind(&mut self, part: usize, var: usize, value: usize) -> Option<bool> {
        match self.maps[part][var] {
            Some(v) => (v == value).then_some(false),
            None => {
                if self.maps[part].contains(&Some(value)) {
                    return None;
                }
                if part == 0 && var == 0 && !self.r_star.contains(&value) {
                    return None;
                }
                self.maps[part][var] = Some(value);
                Some(true)
            }
        }
    }

    fn candidates(&self, pe: &Entry) -> Vec<Entry> {
        let p = self.p;
        let n = p.n();
        let (r, c, s) = (self.maps[0][pe.row], self.maps[1][pe.col], self.maps[2][pe.sym]);
        match (r, c, s) {
            (Some(r), Some(c), _) => p.get(r, c).map(|s| Entry::new(r, c, s)).into_iter().collect(),
            (Some(r), None, Some(s)) => p.col_of(r, s).map(|c| Entry::new(r, c, s)).into_iter().collect(),
            (None, Some(c), Some(s)) => p.row_of(c, s).map(|r| Entry::new(r, c, s)).into_iter().collect(),
            (Some(r), None, None) => (0..n).filter_map(|c| p.get(r, c).map(|s| Entry::new(r, c, s))).collect(),
            (None, Some(c), None) => (0..n).filter_map(|r| p.get(r, c).map(|s| Entry::new(r, c, s))).collect(),
            (None, None, Some(s)) => (0..n).filter_map(|r| p.col_of(r, s).map(|c| Entry::new(r, c, s))).collect(),
            (None, None, None) => p.entries().collect(),
        }
    }

    fn search(&mut self, k: usize) {
        if k == self.pattern.len() {
            if self.maps[0][0].is_some() {
                self.out.push(self.maps.map(|part| part.map(Option::unwrap)));
            } else {
                let stars: Vec<usize> = self.r_star.iter().copied().filter(|&r| r < self.p.n()).collect();
                for r in stars {
                    if self.bind(0, 0, r) == Some(true) {
                        self.out.push(self.maps.map(|part| part.map(Option::unwrap)));
                        self.maps[0][0] = None;
                    }
                }
            }
            return;
        }
        let pe = self.pattern[k];
        for e in self.candidates(&pe) {
            let saved = self.maps;
            if self.bind(0, pe.row, e.row).is_some() && self.bind(1, pe.col, e.col).is_some() && self.bind(2, pe.sym, e.sym).is_some() {
                self.search(k + 1);
            }
            self.maps = saved;
        }
    }
}

/// Every embedding of the pattern `kind` into `p` with `r1*` mapped into `r_star`.
pub fn embeddings(p: &PartialLatinSquare, r_star: &BTreeSet<usize>, kind: QType) -> Vec<Embedding> {
    let mut e = Embedder { p, r_star, pattern: kind.pattern(), maps: [[None; 3]; 3], out: Vec::new() };
    e.search(0);
    let mut out: Vec<Embedding> = e.out.into_iter().map(|[rows, cols, syms]| Embedding { kind, rows, cols, syms }).collect();
    out.sort();
    out
}

/// Number of embeddings whose `i`-th pattern entry lies in the `i`-th fifth
/// of the ordering.
pub fn pi_consistent_count(ordered: &OrderedPartialLatinSquare, r_star: &BTreeSet<usize>, kind: QType) -> usize {
    let m = ordered.len();
    let pos: HashMap<Entry, usize> = ordered.entries().iter().enumerate().map(|(i, e)| (*e, i + 1)).collect();
    embeddings(&ordered.to_partial(), r_star, kind)
        .iter()
        .filter(|emb| {
            emb.entries().iter().enumerate().all(|(i, e)| {
                let p = pos[e];
                i * m / 5 < p && p <= (i + 1) * m / 5
            })
        })
        .count()
}

/// A pair completing an embedded basic pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasicThreat {
    pub kind: QType,
    pub pair: [Entry; 2],
    pub embedding: Embedding,
}

/// Pairs in rows of `r_star`, absent from `p` and addable to it, that
/// complete an embedded basic pattern.
pub fn basic_threatened_pairs(p: &PartialLatinSquare, r_star: &BTreeSet<usize>) -> Vec<BasicThreat> {
    let mut out = Vec::new();
    for kind in QType::ALL {
        for emb in embeddings(p, r_star, kind) {
            let pair = emb.special_pair();
            if p.can_add(&pair[0]) && p.can_add(&pair[1]) {
                out.push(BasicThreat { kind, pair, embedding: emb });
            }
        }
    }
    out.sort();
    out
}

/// True if `f` is seven entries containing an intercalate with a row in
/// `r_star` such that `f`, or `f` with that intercalate switched, is the
/// union of two intercalates sharing one entry.
pub fn is_basic_split_bad_configuration(n: usize, f: &[Entry], r_star: &BTreeSet<usize>) -> bool {
    let set: BTreeSet<Entry> = f.iter().copied().collect();
    if set.len() != 7 {
        return false;
    }
    let Ok(p) = PartialLatinSquare::from_entries(n, set.iter().copied()) else { return false };
    let two_intersecting = |q: &PartialLatinSquare| {
        let xs = enumerate_intercalates(q);
        xs.iter().enumerate().any(|(i, a)| {
            xs[i + 1..].iter().any(|b| {
                let union: BTreeSet<Entry> = a.entries().into_iter().chain(b.entries()).collect();
                union.len() == 7
            })
        })
    };
    enumerate_intercalates(&p).iter().filter(|a| a.rows.iter().any(|r| r_star.contains(r))).any(|a| {
        two_intersecting(&p) || two_intersecting(&crate::intercalate::switch_intercalate(&p, a).unwrap())
    })
}

/// Outcome of sampling permissible tuples against the stable intercalates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub tuples_tested: usize,
    pub failures: usize,
    pub witness_tuples: Vec<PermissibleTuple>,
    pub intercalates: usize,
    pub stable: usize,
    /// Stable intercalates as a fraction of all intercalates.
    pub stable_found_fraction: f64,
}

fn check_audit_params(n: usize, ell: usize, beta: f64) -> Result<usize> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::BadFraction(beta.to_string()));
    }
    if ell == 0 || ell > n {
        return Err(Error::InvalidParameter(format!("ell = {ell} must lie in 1..={n}")));
    }
    Ok(((beta * n as f64 - 1e-9).ceil() as usize).clamp(1, n))
}

fn random_set<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> BTreeSet<usize> {
    sample(rng, n, k).into_iter().collect()
}

/// Samples `tuples` permissible tuples and records those splitting no
/// stable intercalate of `p`.
pub fn expander_audit<R: Rng + ?Sized>(p: &PartialLatinSquare, ell: usize, beta: f64, tuples: usize, rng: &mut R) -> Result<AuditReport> {
    let n = p.n();
    let k = check_audit_params(n, ell, beta)?;
    let st = analyze(p, NewIntercalateRule::default());
    let mut witness_tuples = Vec::new();
    for _ in 0..tuples {
        let t = PermissibleTuple {
            r_star: random_set(n, ell, rng),
            r: random_set(n, k, rng),
            c: random_set(n, k, rng),
            c_star: random_set(n, k, rng),
            s: random_set(n, k, rng),
            s_star: random_set(n, k, rng),
        };
        if !st.stable.iter().any(|a| t.is_split(a)) {
            witness_tuples.push(t);
        }
    }
    Ok(AuditReport {
        tuples_tested: tuples,
        failures: witness_tuples.len(),
        witness_tuples,
        intercalates: st.all.len(),
        stable: st.stable.len(),
        stable_found_fraction: if st.all.is_empty() { 0.0 } else { st.stable.len() as f64 / st.all.len() as f64 },
    })
}

/// Largest order accepted by [`exact_expander_check`].
pub const MAX_EXACT_EXPANDER_ORDER: usize = 8;

/// Decides over all permissible tuples whether every one splits a stable
/// intercalate of `p`. Returns a tuple splitting none, if there is one.
pub fn exact_expander_check(p: &PartialLatinSquare, ell: usize, beta: f64) -> Result<Option<PermissibleTuple>> {
    let n = p.n();
    if n > MAX_EXACT_EXPANDER_ORDER {
        return Err(Error::TooLarge(format!("exact expander check is limited to n <= {MAX_EXACT_EXPANDER_ORDER}")));
    }
    let k = check_audit_params(n, ell, beta)?;
    let stable = analyze(p, NewIntercalateRule::default()).stable;
    let subsets = |size: usize| -> Vec<u32> { (0u32..1 << n).filter(|m| m.count_ones() as usize == size).collect() };
    let to_set = |m: u32| -> BTreeSet<usize> { (0..n).filter(|i| m >> i & 1 == 1).collect() };
    let split = |pair: [usize; 2], x: u32, xs: u32| (x >> pair[0] & 1 == 1 && xs >> pair[1] & 1 == 1) || (x >> pair[1] & 1 == 1 && xs >> pair[0] & 1 == 1);
    let small = subsets(k);
    let keys: Vec<_> = stable.iter().map(|a| a.sigma()).collect();
    for r_star in subsets(ell) {
        for &r in &small {
            let by_row: Vec<_> = keys.iter().filter(|s| split(s.rows, r, r_star)).collect();
            for &c in &small {
                for &c_star in &small {
                    let mut adj = vec![0u32; n];
                    for s in by_row.iter().filter(|s| split(s.cols, c, c_star)) {
                        adj[s.syms[0]] |= 1 << s.syms[1];
                        adj[s.syms[1]] |= 1 << s.syms[0];
                    }
                    for &s in &small {
                        let reach = (0..n).filter(|i| s >> i & 1 == 1).fold(0u32, |acc, i| acc | adj[i]);
                        let free = !reach & ((1u32 << n) - 1);
                        if free.count_ones() as usize >= k {
                            let s_star = (0..n).filter(|i| free >> i & 1 == 1).take(k).fold(0u32, |acc, i| acc | 1 << i);
                            return Ok(Some(PermissibleTuple {
                                r: to_set(r),
                                r_star: to_set(r_star),
                                c: to_set(c),
                                c_star: to_set(c_star),
                                s: to_set(s),
                                s_star: to_set(s_star),
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Group split bad configurations by their special pair.
pub fn group_by_special(configs: &[SplitBadConfiguration]) -> BTreeMap<[Entry; 2], usize> {
    let mut out = BTreeMap::new();
    for c in configs {
        *out.entry(c.special).or_insert(0) += 1;
    }
    out
}

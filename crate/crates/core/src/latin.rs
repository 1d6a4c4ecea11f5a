//! Latin squares, partial Latin squares and their parities.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

const EMPTY: u16 = u16::MAX;

/// Largest order for which exhaustive enumeration is offered.
pub const MAX_ENUMERATION_ORDER: usize = 5;

/// One of the three parts of the tripartite vertex set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    Row,
    Col,
    Sym,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Row, Axis::Col, Axis::Sym];
}

/// A filled cell: symbol `sym` at row `row`, column `col`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub sym: usize,
}

impl Entry {
    pub const fn new(row: usize, col: usize, sym: usize) -> Self {
        Entry { row, col, sym }
    }

    /// Builds an entry from 1-based coordinates.
    pub const fn one_based(row: usize, col: usize, sym: usize) -> Self {
        Entry { row: row - 1, col: col - 1, sym: sym - 1 }
    }

    /// Coordinate along `axis`.
    pub fn coord(&self, axis: Axis) -> usize {
        match axis {
            Axis::Row => self.row,
            Axis::Col => self.col,
            Axis::Sym => self.sym,
        }
    }

    fn in_range(&self, n: usize) -> bool {
        self.row < n && self.col < n && self.sym < n
    }

    /// The entry with row and `axis` coordinates exchanged.
    fn swap_with_row(self, axis: Axis) -> Entry {
        match axis {
            Axis::Row => self,
            Axis::Col => Entry::new(self.col, self.row, self.sym),
            Axis::Sym => Entry::new(self.sym, self.col, self.row),
        }
    }
}

/// A permutation of `0..n`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x];
            }
        }
        cycles
    }

    /// True for odd permutations.
    pub fn is_odd(&self) -> bool {
        (self.0.len() - self.cycle_count()) % 2 == 1
    }
}

/// Numbers of odd row, column and symbol permutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParityTriple {
    pub row: usize,
    pub col: usize,
    pub sym: usize,
}

impl ParityTriple {
    pub fn as_array(&self) -> [usize; 3] {
        [self.row, self.col, self.sym]
    }

    pub fn total(&self) -> usize {
        self.row + self.col + self.sym
    }

    /// Residues mod 2.
    pub fn bits(&self) -> [u8; 3] {
        [(self.row % 2) as u8, (self.col % 2) as u8, (self.sym % 2) as u8]
    }
}

/// Parity of the total count forced on every order-`n` square.
pub fn f_of_n(n: usize) -> u8 {
    match n % 4 {
        0 | 1 => 0,
        _ => 1,
    }
}

/// A complete Latin square with symbols `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatinSquare {
    n: usize,
    grid: Vec<u16>,
}

/// Checks a grid of 1-based symbols and returns the square.
///
/// Cells are scanned in row-major order; the first violation is reported.
pub fn validate_square(grid: &[Vec<usize>]) -> Result<LatinSquare> {
    let n = grid.len();
    if n == 0 || n >= EMPTY as usize {
        return Err(Error::BadOrder(n));
    }
    for (r, row) in grid.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Ragged { row: r, found: row.len(), expected: n });
        }
    }
    let mut row_seen = vec![false; n * n];
    let mut col_seen = vec![false; n * n];
    let mut cells = Vec::with_capacity(n * n);
    for (r, row) in grid.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::SymbolOutOfRange { row: r, col: c, symbol: v, n });
            }
            let s = v - 1;
            if std::mem::replace(&mut row_seen[r * n + s], true) {
                return Err(Error::DuplicateInRow { row: r, col: c });
            }
            if std::mem::replace(&mut col_seen[c * n + s], true) {
                return Err(Error::DuplicateInColumn { row: r, col: c });
            }
            cells.push(s as u16);
        }
    }
    Ok(LatinSquare { n, grid: cells })
}

impl LatinSquare {
    /// Builds a square from rows of 0-based symbols.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let shifted: Vec<Vec<usize>> = rows.iter().map(|r| r.iter().map(|s| s + 1).collect()).collect();
        validate_square(&shifted)
    }

    /// The cyclic square `L(r, c) = r + c mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0 && n < EMPTY as usize);
        let grid = (0..n * n).map(|k| ((k / n + k % n) % n) as u16).collect();
        LatinSquare { n, grid }
    }

    pub(crate) fn from_grid_unchecked(n: usize, grid: Vec<u16>) -> Self {
        debug_assert_eq!(grid.len(), n * n);
        LatinSquare { n, grid }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.grid[row * self.n + col] as usize
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|r| (0..self.n).map(|c| self.get(r, c)).collect()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = Entry> + '_ {
        (0..self.n * self.n).map(move |k| Entry::new(k / self.n, k % self.n, self.grid[k] as usize))
    }

    pub fn contains(&self, e: &Entry) -> bool {
        e.in_range(self.n) && self.get(e.row, e.col) == e.sym
    }

    pub fn to_partial(&self) -> PartialLatinSquare {
        let mut p = PartialLatinSquare::new(self.n);
        for e in self.entries() {
            p.insert_unchecked(e);
        }
        p
    }

    /// The permutation of line `index` along `axis`.
    ///
    /// Row `r` maps column to symbol, column `c` maps row to symbol and
    /// symbol `s` maps row to the column holding `s`.
    pub fn slice_permutation(&self, axis: Axis, index: usize) -> Result<Permutation> {
        let n = self.n;
        if index >= n {
            return Err(Error::IndexOutOfRange { index, n });
        }
        let image = match axis {
            Axis::Row => (0..n).map(|c| self.get(index, c)).collect(),
            Axis::Col => (0..n).map(|r| self.get(r, index)).collect(),
            Axis::Sym => {
                let mut v = vec![0; n];
                for r in 0..n {
                    for c in 0..n {
                        if self.get(r, c) == index {
                            v[r] = c;
                        }
                    }
                }
                v
            }
        };
        Ok(Permutation(image))
    }

    /// Counts of odd row, column and symbol permutations.
    pub fn parity_counts(&self) -> ParityTriple {
        let n = self.n;
        let mut sym_perm = vec![vec![0usize; n]; n];
        for e in self.entries() {
            sym_perm[e.sym][e.row] = e.col;
        }
        let odd = |axis: Axis| (0..n).filter(|&i| self.slice_permutation(axis, i).unwrap().is_odd()).count();
        ParityTriple {
            row: odd(Axis::Row),
            col: odd(Axis::Col),
            sym: sym_perm.into_iter().filter(|p| Permutation(p.clone()).is_odd()).count(),
        }
    }

    /// Per-line parity bits along `axis` (1 for odd).
    pub fn parity_vector(&self, axis: Axis) -> Vec<u8> {
        (0..self.n).map(|i| self.slice_permutation(axis, i).unwrap().is_odd() as u8).collect()
    }

    /// Switches the alternating cycle through `start` between two lines.
    pub fn cycle_switch(&self, axis: Axis, lines: (usize, usize), start: Entry) -> Result<(LatinSquare, usize)> {
        let (p, len) = self.to_partial().cycle_switch(axis, lines, start)?;
        Ok((p.to_latin().expect("switching keeps the square complete"), len))
    }
}

/// A partial Latin square: a conflict-free set of entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialLatinSquare {
    n: usize,
    cell: Vec<u16>,
    col_of: Vec<u16>,
    row_of: Vec<u16>,
    len: usize,
}

impl PartialLatinSquare {
    pub fn new(n: usize) -> Self {
        assert!(n < EMPTY as usize, "order too large");
        PartialLatinSquare {
            n,
            cell: vec![EMPTY; n * n],
            col_of: vec![EMPTY; n * n],
            row_of: vec![EMPTY; n * n],
            len: 0,
        }
    }

    /// Builds a partial square, rejecting conflicting or duplicate entries.
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = Entry>) -> Result<Self> {
        if n == 0 || n >= EMPTY as usize {
            return Err(Error::BadOrder(n));
        }
        let mut p = PartialLatinSquare::new(n);
        for e in entries {
            p.insert(e)?;
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_complete(&self) -> bool {
        self.len == self.n * self.n
    }

    /// Symbol in cell `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> Option<usize> {
        opt(self.cell[row * self.n + col])
    }

    /// Column holding `sym` in `row`.
    pub fn col_of(&self, row: usize, sym: usize) -> Option<usize> {
        opt(self.col_of[row * self.n + sym])
    }

    /// Row holding `sym` in `col`.
    pub fn row_of(&self, col: usize, sym: usize) -> Option<usize> {
        opt(self.row_of[col * self.n + sym])
    }

    pub fn contains(&self, e: &Entry) -> bool {
        e.in_range(self.n) && self.get(e.row, e.col) == Some(e.sym)
    }

    /// True if `e` can be added without a conflict.
    pub fn can_add(&self, e: &Entry) -> bool {
        e.in_range(self.n)
            && self.get(e.row, e.col).is_none()
            && self.col_of(e.row, e.sym).is_none()
            && self.row_of(e.col, e.sym).is_none()
    }

    pub fn insert(&mut self, e: Entry) -> Result<()> {
        if !e.in_range(self.n) {
            return Err(Error::EntryOutOfRange(e.row, e.col, e.sym, self.n));
        }
        if !self.can_add(&e) {
            return Err(Error::Conflict(e.row, e.col, e.sym));
        }
        self.insert_unchecked(e);
        Ok(())
    }

    pub(crate) fn insert_unchecked(&mut self, e: Entry) {
        let n = self.n;
        self.cell[e.row * n + e.col] = e.sym as u16;
        self.col_of[e.row * n + e.sym] = e.col as u16;
        self.row_of[e.col * n + e.sym] = e.row as u16;
        self.len += 1;
    }

    /// Removes `e`; returns false if it was absent.
    pub fn remove(&mut self, e: &Entry) -> bool {
        if !self.contains(e) {
            return false;
        }
        let n = self.n;
        self.cell[e.row * n + e.col] = EMPTY;
        self.col_of[e.row * n + e.sym] = EMPTY;
        self.row_of[e.col * n + e.sym] = EMPTY;
        self.len -= 1;
        true
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = Entry> + '_ {
        (0..self.n * self.n)
            .filter(move |&k| self.cell[k] != EMPTY)
            .map(move |k| Entry::new(k / self.n, k % self.n, self.cell[k] as usize))
    }

    pub fn entry_set(&self) -> BTreeSet<Entry> {
        self.entries().collect()
    }

    pub fn to_latin(&self) -> Option<LatinSquare> {
        self.is_complete().then(|| LatinSquare { n: self.n, grid: self.cell.clone() })
    }

    /// The conjugate with the row axis exchanged for `axis`.
    fn swap_with_row(&self, axis: Axis) -> PartialLatinSquare {
        if axis == Axis::Row {
            return self.clone();
        }
        let mut out = PartialLatinSquare::new(self.n);
        for e in self.entries() {
            out.insert_unchecked(e.swap_with_row(axis));
        }
        out
    }

    /// Switches the alternating cycle through `start` between the two lines
    /// `lines` along `axis`. `start` must lie in `lines.0`. Returns the new
    /// square and the number of cells changed in each line.
    pub fn cycle_switch(&self, axis: Axis, lines: (usize, usize), start: Entry) -> Result<(PartialLatinSquare, usize)> {
        let n = self.n;
        let (i, j) = lines;
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange { index: i.max(j), n });
        }
        if i == j {
            return Err(Error::SameLine);
        }
        if !self.contains(&start) || start.coord(axis) != i {
            return Err(Error::BadStart);
        }
        let conj = self.swap_with_row(axis);
        let c0 = start.swap_with_row(axis).col;
        let mut cols = vec![c0];
        let mut c = c0;
        loop {
            let below = conj.get(j, c).ok_or(Error::IncompleteCycle)?;
            c = conj.col_of(i, below).ok_or(Error::IncompleteCycle)?;
            if c == c0 {
                break;
            }
            cols.push(c);
        }
        let mut out = conj.clone();
        for &c in &cols {
            let a = conj.get(i, c).unwrap();
            let b = conj.get(j, c).unwrap();
            out.remove(&Entry::new(i, c, a));
            out.remove(&Entry::new(j, c, b));
        }
        for &c in &cols {
            let a = conj.get(i, c).unwrap();
            let b = conj.get(j, c).unwrap();
            out.insert(Entry::new(i, c, b))?;
            out.insert(Entry::new(j, c, a))?;
        }
        Ok((out.swap_with_row(axis), cols.len()))
    }
}

fn opt(v: u16) -> Option<usize> {
    (v != EMPTY).then_some(v as usize)
}

/// A partial Latin square together with an ordering of its entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedPartialLatinSquare {
    n: usize,
    entries: Vec<Entry>,
}

impl OrderedPartialLatinSquare {
    /// Checks that the entries are in range and pairwise conflict-free.
    pub fn new(n: usize, entries: Vec<Entry>) -> Result<Self> {
        PartialLatinSquare::from_entries(n, entries.iter().copied())?;
        Ok(OrderedPartialLatinSquare { n, entries })
    }

    pub(crate) fn new_unchecked(n: usize, entries: Vec<Entry>) -> Self {
        OrderedPartialLatinSquare { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_partial(&self) -> PartialLatinSquare {
        PartialLatinSquare::from_entries(self.n, self.entries.iter().copied()).expect("validated on construction")
    }

    /// Positions `floor(from*m)+1 ..= floor(to*m)` (1-based) of the ordering.
    pub fn block_range(&self, from: Ratio<u64>, to: Ratio<u64>) -> Result<std::ops::Range<usize>> {
        for f in [from, to] {
            if f > Ratio::from_integer(1) {
                return Err(Error::BadFraction(f.to_string()));
            }
        }
        if from > to {
            return Err(Error::BadBlock(from.to_string(), to.to_string()));
        }
        let m = self.entries.len() as u64;
        let lo = (from * m).floor().to_integer() as usize;
        let hi = (to * m).floor().to_integer() as usize;
        Ok(lo..hi)
    }

    /// The unordered block of entries between the fractions `from` and `to`.
    pub fn block_slice(&self, from: Ratio<u64>, to: Ratio<u64>) -> Result<PartialLatinSquare> {
        let range = self.block_range(from, to)?;
        Ok(PartialLatinSquare::from_entries(self.n, self.entries[range].iter().copied()).expect("subset of a valid square"))
    }
}

/// A set of (row, column) cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Template {
    n: usize,
    mask: Vec<bool>,
}

impl Template {
    pub fn empty(n: usize) -> Self {
        Template { n, mask: vec![false; n * n] }
    }

    pub fn full(n: usize) -> Self {
        Template { n, mask: vec![true; n * n] }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut t = Template::empty(n);
        for (r, c) in pairs {
            if r >= n || c >= n {
                return Err(Error::IndexOutOfRange { index: r.max(c), n });
            }
            t.mask[r * n + c] = true;
        }
        Ok(t)
    }

    /// Includes each cell independently with probability `density`.
    pub fn sample<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::BadFraction(density.to_string()));
        }
        let mask = (0..n * n).map(|_| rng.gen_bool(density)).collect();
        Ok(Template { n, mask })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.mask[row * self.n + col]
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n * self.n).filter(move |&k| self.mask[k]).map(move |k| (k / self.n, k % self.n))
    }

    /// The entries of `square` whose cells lie in the template.
    pub fn intersect(&self, square: &LatinSquare) -> PartialLatinSquare {
        assert_eq!(self.n, square.n(), "order mismatch");
        let mut p = PartialLatinSquare::new(self.n);
        for e in square.entries().filter(|e| self.contains(e.row, e.col)) {
            p.insert_unchecked(e);
        }
        p
    }
}

/// Streams every Latin square of order `n` in lexicographic row-major order.
pub fn enumerate_all(n: usize) -> Result<SquareEnumerator> {
    if n == 0 || n > MAX_ENUMERATION_ORDER {
        return Err(Error::TooLarge(format!("enumeration is limited to 1 <= n <= {MAX_ENUMERATION_ORDER}")));
    }
    Ok(SquareEnumerator {
        n,
        grid: vec![EMPTY; n * n],
        row_used: vec![0; n],
        col_used: vec![0; n],
        started: false,
        done: false,
    })
}

/// Iterator returned by [`enumerate_all`].
#[derive(Debug, Clone)]
pub struct SquareEnumerator {
    n: usize,
    grid: Vec<u16>,
    row_used: Vec<u32>,
    col_used: Vec<u32>,
    started: bool,
    done: bool,
}

impl Iterator for SquareEnumerator {
    type Item = LatinSquare;

    fn next(&mut self) -> Option<LatinSquare> {
        if self.done {
            return None;
        }
        let n = self.n;
        let nn = n * n;
        let mut k: isize = if self.started { nn as isize - 1 } else { 0 };
        self.started = true;
        loop {
            if k < 0 {
                self.done = true;
                return None;
            }
            let ku = k as usize;
            let (r, c) = (ku / n, ku % n);
            let first = match self.grid[ku] {
                EMPTY => 0,
                s => {
                    self.row_used[r] &= !(1 << s);
                    self.col_used[c] &= !(1 << s);
                    s as usize + 1
                }
            };
            let used = self.row_used[r] | self.col_used[c];
            match (first..n).find(|&s| used & (1 << s) == 0) {
                Some(s) => {
                    self.grid[ku] = s as u16;
                    self.row_used[r] |= 1 << s;
                    self.col_used[c] |= 1 << s;
                    if ku + 1 == nn {
                        return Some(LatinSquare { n, grid: self.grid.clone() });
                    }
                    k += 1;
                }
                None => {
                    self.grid[ku] = EMPTY;
                    k -= 1;
                }
            }
        }
    }
}

/// All squares of order `n` (cached after the first call).
pub fn all_squares(n: usize) -> Result<&'static [LatinSquare]> {
    static CACHE: [OnceLock<Vec<LatinSquare>>; MAX_ENUMERATION_ORDER + 1] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let it = enumerate_all(n)?;
    Ok(CACHE[n].get_or_init(|| it.collect()))
}

/// A uniformly random square of order `n <= 5`, drawn from the enumeration.
pub fn exact_uniform_sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<LatinSquare> {
    let all = all_squares(n)?;
    Ok(all[rng.gen_range(0..all.len())].clone())
}

/// A uniformly random ordered `m`-subset of the entries of `square`.
pub fn random_ordered_subset<R: Rng + ?Sized>(square: &LatinSquare, m: usize, rng: &mut R) -> Result<OrderedPartialLatinSquare> {
    let n = square.n();
    if m > n * n {
        return Err(Error::TooMany { requested: m, available: n * n });
    }
    let mut cells: Vec<usize> = rand::seq::index::sample(rng, n * n, m).into_vec();
    cells.shuffle(rng);
    let entries = cells.into_iter().map(|k| Entry::new(k / n, k % n, square.get(k / n, k % n))).collect();
    Ok(OrderedPartialLatinSquare::new_unchecked(n, entries))
}

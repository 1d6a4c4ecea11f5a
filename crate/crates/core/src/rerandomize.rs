//! Random switching of stable intercalates and the checks around it.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::incidence_matrix;
use crate::intercalate::{sigma_set, stable_intercalates, switch_all, Intercalate, SigmaKey};
use crate::latin::{all_squares, Axis, LatinSquare, Template};

/// Largest order for which the exact component audit is offered.
pub const MAX_AUDIT_ORDER: usize = 5;

/// Stable intercalates of `T ∩ L`.
pub fn t_stable_intercalates(square: &LatinSquare, template: &Template) -> Vec<Intercalate> {
    stable_intercalates(&template.intersect(square))
}

/// One rerandomization step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rerandomized {
    pub square: LatinSquare,
    pub stable: Vec<Intercalate>,
    /// `switched[i]` tells whether `stable[i]` was switched.
    pub switched: Vec<bool>,
}

/// Switches each `T`-stable intercalate of `square` independently with
/// probability 1/2.
pub fn rerandomize<R: Rng + ?Sized>(square: &LatinSquare, template: &Template, rng: &mut R) -> Rerandomized {
    let stable = t_stable_intercalates(square, template);
    let switched: Vec<bool> = stable.iter().map(|_| rng.gen_bool(0.5)).collect();
    let chosen: Vec<Intercalate> = stable.iter().zip(&switched).filter(|(_, &s)| s).map(|(a, _)| *a).collect();
    let square = switch_square(square, &chosen);
    Rerandomized { square, stable, switched }
}

fn switch_square(square: &LatinSquare, family: &[Intercalate]) -> LatinSquare {
    switch_all(&square.to_partial(), family).expect("stable intercalates are disjoint entries of the square").to_latin().unwrap()
}

/// Row, column and symbol parity bits, concatenated.
pub fn parity_vector(square: &LatinSquare) -> Vec<u8> {
    Axis::ALL.iter().flat_map(|&a| square.parity_vector(a)).collect()
}

/// Parity vector predicted after switching: `y + M r` over GF(2), where `M`
/// is the incidence matrix of `stable` against all lines.
pub fn predicted_parity(before: &[u8], stable: &[Intercalate], switched: &[bool]) -> Result<Vec<u8>> {
    let n = before.len() / 3;
    let lines: Vec<usize> = (0..n).collect();
    let keys: Vec<SigmaKey> = stable.iter().map(Intercalate::sigma).collect();
    let m = incidence_matrix(&lines, &lines, &lines, &keys)?;
    Ok(m.matrix.mul_vec(switched).iter().zip(before).map(|(a, b)| (a + b) % 2).collect())
}

/// Result of the exhaustive check of the rerandomization chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentAudit {
    pub squares: usize,
    pub components: usize,
    pub max_stable: usize,
    pub stationary: bool,
    pub violations: Vec<String>,
}

impl ComponentAudit {
    pub fn passed(&self) -> bool {
        self.stationary && self.violations.is_empty()
    }
}

/// Builds the transition graph of one rerandomization step over all squares
/// of order `n` and checks that every component is a clique of size
/// `2^|S|` with uniform transitions, the stable pair structure is constant
/// on components and the uniform distribution is stationary (in exact
/// arithmetic).
pub fn exact_component_audit(n: usize, template: &Template) -> Result<ComponentAudit> {
    if n > MAX_AUDIT_ORDER || template.n() != n {
        return Err(Error::InvalidParameter(format!("audit needs n <= {MAX_AUDIT_ORDER} and a matching template")));
    }
    let all = all_squares(n)?;
    let index: HashMap<&LatinSquare, usize> = all.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut sigma: Vec<BTreeSet<SigmaKey>> = Vec::with_capacity(all.len());
    let mut stable_size = Vec::with_capacity(all.len());
    let mut nbrs: Vec<BTreeMap<usize, u64>> = Vec::with_capacity(all.len());
    for l in all {
        let p = template.intersect(l);
        let stable = stable_intercalates(&p);
        sigma.push(sigma_set(&p));
        let mut out = BTreeMap::new();
        for mask in 0u64..1 << stable.len() {
            let chosen: Vec<Intercalate> = (0..stable.len()).filter(|i| mask >> i & 1 == 1).map(|i| stable[i]).collect();
            *out.entry(index[&switch_square(l, &chosen)]).or_insert(0) += 1;
        }
        stable_size.push(stable.len());
        nbrs.push(out);
    }
    let mut violations = Vec::new();
    let mut components = BTreeSet::new();
    for i in 0..all.len() {
        let size = 1usize << stable_size[i];
        if nbrs[i].len() != size || nbrs[i].values().any(|&c| c != 1) {
            violations.push(format!("square {i}: {} distinct neighbours, expected {size}", nbrs[i].len()));
        }
        for &j in nbrs[i].keys() {
            if nbrs[j].keys().ne(nbrs[i].keys()) {
                violations.push(format!("squares {i} and {j}: neighbourhoods differ"));
            }
            if sigma[j] != sigma[i] {
                violations.push(format!("squares {i} and {j}: stable pairs differ"));
            }
        }
        components.insert(nbrs[i].keys().copied().collect::<Vec<_>>());
    }
    let mut inflow = vec![Ratio::<u64>::from_integer(0); all.len()];
    for i in 0..all.len() {
        let total = 1u64 << stable_size[i];
        for (&j, &c) in &nbrs[i] {
            inflow[j] += Ratio::new(c, total);
        }
    }
    let stationary = inflow.iter().all(|x| *x == Ratio::from_integer(1));
    violations.truncate(50);
    Ok(ComponentAudit {
        squares: all.len(),
        components: components.len(),
        max_stable: stable_size.iter().copied().max().unwrap_or(0),
        stationary,
        violations,
    })
}

/// Rows, columns and symbols carrying many stable intercalates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RcsSelection {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub syms: Vec<usize>,
    /// Size of the greedy family found for each line.
    pub row_support: Vec<usize>,
    pub col_support: Vec<usize>,
    pub sym_support: Vec<usize>,
    pub threshold: usize,
    /// True if each of the three sets has at least `n - ell` lines.
    pub success: bool,
}

fn lines_of(a: &Intercalate, axis: Axis) -> [usize; 2] {
    let k = a.sigma();
    match axis {
        Axis::Row => k.rows,
        Axis::Col => k.cols,
        Axis::Sym => k.syms,
    }
}

/// Greedy family of intercalates through line `line` of `axis` that are
/// otherwise pairwise disjoint in rows, columns and symbols.
pub fn greedy_star(stable: &[Intercalate], axis: Axis, line: usize) -> Vec<Intercalate> {
    let mut used: [BTreeSet<usize>; 3] = Default::default();
    let mut out = Vec::new();
    for a in stable.iter().filter(|a| lines_of(a, axis).contains(&line)) {
        let others: Vec<(usize, usize)> = Axis::ALL
            .iter()
            .enumerate()
            .flat_map(|(k, &ax)| lines_of(a, ax).into_iter().map(move |x| (k, x)))
            .filter(|&(k, x)| !(Axis::ALL[k] == axis && x == line))
            .collect();
        if others.iter().all(|(k, x)| !used[*k].contains(x)) {
            for (k, x) in others {
                used[k].insert(x);
            }
            out.push(*a);
        }
    }
    out
}

/// Keeps the lines that meet at least `6 ell` stable intercalates forming
/// a star as in [`greedy_star`].
pub fn find_rcs(p: &crate::latin::PartialLatinSquare, ell: usize) -> RcsSelection {
    let n = p.n();
    let stable = stable_intercalates(p);
    let threshold = 6 * ell;
    let support = |axis: Axis| -> Vec<usize> { (0..n).map(|i| greedy_star(&stable, axis, i).len()).collect() };
    let (rs, cs, ss) = (support(Axis::Row), support(Axis::Col), support(Axis::Sym));
    let pick = |sup: &[usize]| -> Vec<usize> { (0..n).filter(|&i| sup[i] >= threshold).collect() };
    let (rows, cols, syms) = (pick(&rs), pick(&cs), pick(&ss));
    let need = n.saturating_sub(ell);
    let success = rows.len() >= need && cols.len() >= need && syms.len() >= need;
    RcsSelection { rows, cols, syms, row_support: rs, col_support: cs, sym_support: ss, threshold, success }
}

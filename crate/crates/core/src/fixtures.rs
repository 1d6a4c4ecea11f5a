//! Worked examples: the 6×6 switching example, the four basic patterns and
//! incidence matrices with known rank.
//!
//! Coordinates in the tables below are written 1-based, as `(row, col, sym)`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::configs::{basic_threatened_pairs, embeddings, threatened_pairs, QType};
use crate::f2::{incidence_matrix, IncidenceMatrixF2};
use crate::intercalate::{enumerate_intercalates, isolated_intercalates, switch_all, Intercalate, SigmaKey};
use crate::latin::{Entry, LatinSquare, PartialLatinSquare};

const LEFT: [[usize; 3]; 14] = [
    [2, 4, 3], [2, 5, 4],
    [3, 2, 1], [3, 3, 2], [3, 4, 4], [3, 5, 3],
    [4, 1, 3], [4, 3, 5], [4, 4, 6], [4, 6, 2],
    [5, 1, 5], [5, 3, 3],
    [6, 4, 2], [6, 6, 6],
];

const RIGHT: [[usize; 3]; 14] = [
    [2, 4, 4], [2, 5, 3],
    [3, 2, 1], [3, 3, 2], [3, 4, 3], [3, 5, 4],
    [4, 1, 5], [4, 3, 3], [4, 4, 2], [4, 6, 6],
    [5, 1, 3], [5, 3, 5],
    [6, 4, 6], [6, 6, 2],
];

fn build(table: &[[usize; 3]]) -> PartialLatinSquare {
    let entries = table.iter().map(|t| Entry::one_based(t[0], t[1], t[2]));
    PartialLatinSquare::from_entries(6, entries).expect("fixture is a partial Latin square")
}

/// Left panel of the switching example.
pub fn switch_example_left() -> PartialLatinSquare {
    build(&LEFT)
}

/// Right panel of the switching example.
pub fn switch_example_right() -> PartialLatinSquare {
    build(&RIGHT)
}

/// The three highlighted intercalates of the left panel.
pub fn switch_example_highlighted() -> [Intercalate; 3] {
    [
        Intercalate::new([1, 2], [3, 4], 2, 3),
        Intercalate::new([3, 5], [3, 5], 5, 1),
        Intercalate::new([3, 4], [0, 2], 2, 4),
    ]
}

/// The orange pair in the starred first row.
pub fn switch_example_pair() -> [Entry; 2] {
    [Entry::one_based(1, 2, 2), Entry::one_based(1, 3, 1)]
}

/// Starred rows of the switching example.
pub fn switch_example_r_star() -> BTreeSet<usize> {
    BTreeSet::from([0])
}

/// The pattern `kind` on its own 3×3 grid, starred row first.
pub fn q_fixture(kind: QType) -> PartialLatinSquare {
    PartialLatinSquare::from_entries(3, kind.pattern()).expect("pattern is a partial Latin square")
}

/// An order-12 square whose 46 intercalates give an incidence matrix of
/// rank 33 against all lines. Symbols are 0-based.
pub const PLANTED_KERNEL_SQUARE: [[usize; 12]; 12] = [
    [4, 9, 10, 8, 5, 6, 11, 0, 2, 3, 1, 7],
    [1, 2, 9, 6, 11, 4, 3, 7, 10, 5, 8, 0],
    [11, 4, 8, 3, 10, 7, 1, 2, 9, 0, 6, 5],
    [10, 8, 0, 2, 6, 3, 4, 5, 1, 11, 7, 9],
    [3, 6, 5, 7, 9, 11, 0, 8, 4, 1, 2, 10],
    [6, 11, 4, 5, 0, 10, 2, 1, 7, 8, 9, 3],
    [0, 5, 7, 11, 1, 8, 9, 3, 6, 2, 10, 4],
    [9, 3, 1, 0, 8, 2, 10, 4, 11, 7, 5, 6],
    [2, 0, 11, 9, 7, 5, 8, 6, 3, 10, 4, 1],
    [5, 7, 3, 4, 2, 1, 6, 10, 0, 9, 11, 8],
    [7, 1, 6, 10, 3, 9, 5, 11, 8, 4, 0, 2],
    [8, 10, 2, 1, 4, 0, 7, 9, 5, 6, 3, 11],
];

pub fn planted_kernel_square() -> LatinSquare {
    LatinSquare::from_rows(&PLANTED_KERNEL_SQUARE.map(|r| r.to_vec())).expect("fixture is a Latin square")
}

/// Incidence matrix of the planted square's intercalates against all lines.
pub fn planted_incidence() -> IncidenceMatrixF2 {
    let l = planted_kernel_square();
    let keys: Vec<SigmaKey> = enumerate_intercalates(&l.to_partial()).iter().map(Intercalate::sigma).collect();
    let lines: Vec<usize> = (0..l.n()).collect();
    incidence_matrix(&lines, &lines, &lines, &keys).expect("keys use only listed lines")
}

/// Every key on `k` rows, `k` columns and `k` symbols.
pub fn complete_key_family(k: usize) -> IncidenceMatrixF2 {
    let pairs: Vec<[usize; 2]> = (0..k).flat_map(|a| (a + 1..k).map(move |b| [a, b])).collect();
    let mut keys = Vec::new();
    for &rows in &pairs {
        for &cols in &pairs {
            for &syms in &pairs {
                keys.push(SigmaKey { rows, cols, syms });
            }
        }
    }
    let lines: Vec<usize> = (0..k).collect();
    incidence_matrix(&lines, &lines, &lines, &keys).expect("keys use only listed lines")
}

/// One named check and its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FigureCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> FigureCheck {
    FigureCheck { name: name.to_string(), passed, detail }
}

/// Reproduces both worked examples and reports each step.
pub fn verify_figures() -> Vec<FigureCheck> {
    let mut out = Vec::new();
    let left = switch_example_left();
    let right = switch_example_right();
    let highlighted = switch_example_highlighted();
    let pair = switch_example_pair();
    let r_star = switch_example_r_star();

    let isolated = isolated_intercalates(&left);
    let all_isolated = highlighted.iter().all(|a| isolated.contains(a));
    out.push(check("switch-example: highlighted intercalates are isolated", all_isolated, format!("{} isolated in left panel", isolated.len())));

    let switched = switch_all(&left, &highlighted);
    let exact = switched.as_ref().is_ok_and(|q| *q == right);
    out.push(check("switch-example: three switches map left panel to right panel", exact, format!("{} entries", right.len())));

    let before = threatened_pairs(&left, &r_star);
    let threatened = before.iter().any(|t| t.pair == pair);
    out.push(check("switch-example: orange pair is threatened on the left", threatened, format!("{} threatened pairs", before.len())));

    let basic_before = basic_threatened_pairs(&left, &r_star).iter().any(|b| b.pair == pair);
    out.push(check("switch-example: orange pair is not basic on the left", !basic_before, String::new()));

    let after = basic_threatened_pairs(&right, &r_star);
    let kinds: Vec<u8> = after.iter().filter(|b| b.pair == pair).map(|b| b.kind.index()).collect();
    out.push(check("switch-example: orange pair is basic on the right", !kinds.is_empty(), format!("types {kinds:?}")));

    for kind in QType::ALL {
        let p = q_fixture(kind);
        let star = BTreeSet::from([0]);
        let counts: Vec<usize> = QType::ALL.iter().map(|&k| embeddings(&p, &star, k).len()).collect();
        let own = kind.index() as usize - 1;
        let only_own = (0..4).all(|k| (counts[k] > 0) == (k == own));
        let basic = basic_threatened_pairs(&p, &star);
        let labelled = basic.iter().all(|b| b.kind == kind) && basic.iter().any(|b| b.pair == kind.special_pattern());
        out.push(check(
            &format!("pattern Q{}: detected with its own label only", kind.index()),
            only_own && labelled,
            format!("embeddings by type {counts:?}"),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panels_have_expected_sizes() {
        assert_eq!(switch_example_left().len(), 14);
        assert_eq!(switch_example_right().len(), 14);
    }
}

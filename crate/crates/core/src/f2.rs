//! Linear algebra over GF(2) and the line-by-intercalate incidence matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intercalate::SigmaKey;

/// A dense matrix over GF(2), rows packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        BitMatrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Ragged { row: i, found: row.len(), expected: cols });
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v & 1 == 1);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.data[i * self.words + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] ^= 1 << (j % 64);
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) as u8).collect()).collect()
    }

    /// `M x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[bool]) -> Vec<u8> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| (0..self.cols).filter(|&j| x[j] && self.get(i, j)).count() as u8 % 2).collect()
    }

    /// `x^T M` for a row vector `x`.
    pub fn left_mul(&self, x: &[u8]) -> Vec<u8> {
        assert_eq!(x.len(), self.rows);
        (0..self.cols).map(|j| (0..self.rows).filter(|&i| x[i] & 1 == 1 && self.get(i, j)).count() as u8 % 2).collect()
    }
}

/// Rank of `M` and a basis of `{x : x^T M = 0}` in reduced echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelBasis {
    pub rank: usize,
    pub basis: Vec<Vec<u8>>,
}

/// Gaussian elimination on `[M | I]`.
pub fn f2_rank_kernel(m: &BitMatrix) -> KernelBasis {
    let (rows, cols) = (m.rows, m.cols);
    let total = cols + rows;
    let mut aug = BitMatrix::zeros(rows, total);
    for i in 0..rows {
        for j in 0..cols {
            if m.get(i, j) {
                aug.set(i, j, true);
            }
        }
        aug.set(i, cols + i, true);
    }
    let w = aug.words;
    let mut pivot_row = 0;
    for j in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&i| aug.get(i, j)) else { continue };
        if p != pivot_row {
            for k in 0..w {
                aug.data.swap(p * w + k, pivot_row * w + k);
            }
        }
        for i in 0..rows {
            if i != pivot_row && aug.get(i, j) {
                for k in 0..w {
                    let v = aug.data[pivot_row * w + k];
                    aug.data[i * w + k] ^= v;
                }
            }
        }
        pivot_row += 1;
    }
    let rank = pivot_row;
    let mut basis: Vec<Vec<u8>> = (rank..rows).map(|i| (0..rows).map(|k| aug.get(i, cols + k) as u8).collect()).collect();
    reduce_echelon(&mut basis);
    KernelBasis { rank, basis }
}

/// Puts a list of independent vectors into reduced row echelon form.
pub fn reduce_echelon(vs: &mut Vec<Vec<u8>>) {
    let len = vs.first().map_or(0, Vec::len);
    let mut r = 0;
    for j in 0..len {
        let Some(p) = (r..vs.len()).find(|&i| vs[i][j] == 1) else { continue };
        vs.swap(r, p);
        for i in 0..vs.len() {
            if i != r && vs[i][j] == 1 {
                let pivot = vs[r].clone();
                for (x, y) in vs[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        r += 1;
    }
    vs.truncate(r);
}

/// The matrix with one row per chosen row, column and symbol and one column
/// per intercalate, with a 1 where the line meets the intercalate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrixF2 {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub syms: Vec<usize>,
    pub intercalates: Vec<SigmaKey>,
    pub matrix: BitMatrix,
}

/// Builds the incidence matrix of `keys` against the lines `R`, `C`, `S`.
pub fn incidence_matrix(rows: &[usize], cols: &[usize], syms: &[usize], keys: &[SigmaKey]) -> Result<IncidenceMatrixF2> {
    let height = rows.len() + cols.len() + syms.len();
    let mut m = BitMatrix::zeros(height, keys.len());
    for (j, k) in keys.iter().enumerate() {
        for (offset, lines, pair) in [(0, rows, k.rows), (rows.len(), cols, k.cols), (rows.len() + cols.len(), syms, k.syms)] {
            for x in pair {
                let i = lines.iter().position(|&l| l == x).ok_or(Error::OutsideBlocks { line: x })?;
                m.set(offset + i, j, true);
            }
        }
    }
    Ok(IncidenceMatrixF2 { rows: rows.to_vec(), cols: cols.to_vec(), syms: syms.to_vec(), intercalates: keys.to_vec(), matrix: m })
}

impl IncidenceMatrixF2 {
    /// The eight vectors constant on each of the three blocks.
    pub fn block_constant_vectors(&self) -> Vec<Vec<u8>> {
        let sizes = [self.rows.len(), self.cols.len(), self.syms.len()];
        (0u8..8)
            .map(|mask| sizes.iter().enumerate().flat_map(|(b, &len)| std::iter::repeat_n(mask >> b & 1, len)).collect())
            .collect()
    }

    /// True if the left kernel is exactly the block-constant vectors.
    pub fn kernel_is_block_constant(&self) -> bool {
        let kb = f2_rank_kernel(&self.matrix);
        let mut expected: Vec<Vec<u8>> = self.block_constant_vectors().into_iter().filter(|v| v.contains(&1)).collect();
        reduce_echelon(&mut expected);
        let mut got = kb.basis.clone();
        reduce_echelon(&mut got);
        got == expected
    }
}

/// Serializable summary of a kernel computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub rank: usize,
    pub kernel_dim: usize,
    pub kernel_basis: Vec<String>,
    pub block_sizes: [usize; 3],
    pub block_constant: bool,
}

impl KernelReport {
    pub fn new(m: &IncidenceMatrixF2) -> Self {
        let kb = f2_rank_kernel(&m.matrix);
        KernelReport {
            rank: kb.rank,
            kernel_dim: kb.basis.len(),
            kernel_basis: kb.basis.iter().map(|v| v.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect()).collect(),
            block_sizes: [m.rows.len(), m.cols.len(), m.syms.len()],
            block_constant: m.kernel_is_block_constant(),
        }
    }
}

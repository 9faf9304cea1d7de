//! Bit-packed boolean and counting matrix products, and the max-entry
//! product.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense 0/1 matrix, rows packed into `u64` words. Padding bits past `cols`
/// are always zero.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        Self { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| true)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i == j)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix row by row from the column indices set in each row.
    pub fn from_rows<I, R>(cols: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = usize>,
    {
        let words = cols.div_ceil(64);
        let mut data = Vec::new();
        let mut count = 0;
        for row in rows {
            let start = data.len();
            data.resize(start + words, 0);
            for j in row {
                assert!(j < cols, "column {j} out of range");
                data[start + j / 64] |= 1 << (j % 64);
            }
            count += 1;
        }
        Self { rows: count, cols, words, data }
    }

    /// Rows `indices` of `self`, in that order.
    pub fn select_rows(&self, indices: &[usize]) -> BitMatrix {
        let mut data = Vec::with_capacity(indices.len() * self.words);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Self { rows: indices.len(), cols: self.cols, words: self.words, data }
    }

    /// Row `i` is the AND of rows `pairs[i].0` and `pairs[i].1`.
    pub fn and_rows(&self, pairs: &[(usize, usize)]) -> BitMatrix {
        let mut data = Vec::with_capacity(pairs.len() * self.words);
        for &(a, b) in pairs {
            data.extend(self.row(a).iter().zip(self.row(b)).map(|(x, y)| x & y));
        }
        Self { rows: pairs.len(), cols: self.cols, words: self.words, data }
    }

    pub fn random<R: Rng>(rows: usize, cols: usize, density: f64, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen_bool(density) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.data[i * self.words + j / 64];
        if value {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    pub fn row_popcount(&self, i: usize) -> u32 {
        self.row(i).iter().map(|w| w.count_ones()).sum()
    }

    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row_ones(i) {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Entrywise complement, keeping the padding clear.
    pub fn complement(&self) -> BitMatrix {
        let mut c = self.clone();
        let tail = self.cols % 64;
        for i in 0..self.rows {
            let row = &mut c.data[i * self.words..(i + 1) * self.words];
            for w in row.iter_mut() {
                *w = !*w;
            }
            if tail != 0 {
                if let Some(last) = row.last_mut() {
                    *last &= (1u64 << tail) - 1;
                }
            }
        }
        c
    }
}

/// Dense matrix of nonnegative counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl CountMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

fn check_dims(a: &BitMatrix, b: &BitMatrix) -> Result<()> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            left_rows: a.rows,
            left_cols: a.cols,
            right_rows: b.rows,
            right_cols: b.cols,
        });
    }
    Ok(())
}

#[inline]
fn and_popcount(x: &[u64], y: &[u64]) -> u32 {
    x.iter().zip(y).map(|(a, b)| (a & b).count_ones()).sum()
}

#[inline]
fn and_is_zero(x: &[u64], y: &[u64]) -> bool {
    x.iter().zip(y).all(|(a, b)| a & b == 0)
}

/// Boolean product: each output row is the OR of the rows of `b` selected by
/// the corresponding row of `a`.
pub fn product_bool(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    check_dims(a, b)?;
    let words = b.words;
    let mut out = BitMatrix::zeros(a.rows, b.cols);
    if words > 0 {
        out.data.par_chunks_mut(words).enumerate().for_each(|(i, row)| {
            for k in a.row_ones(i) {
                for (o, w) in row.iter_mut().zip(b.row(k)) {
                    *o |= w;
                }
            }
        });
    }
    Ok(out)
}

/// Integer product over the inner dimension.
pub fn product_count(a: &BitMatrix, b: &BitMatrix) -> Result<CountMatrix> {
    check_dims(a, b)?;
    let bt = b.transpose();
    Ok(product_count_transposed(a, &bt))
}

/// `a * bt^T`, where `bt` already holds the right operand's columns as rows.
pub fn product_count_transposed(a: &BitMatrix, bt: &BitMatrix) -> CountMatrix {
    assert_eq!(a.cols, bt.cols, "inner dimensions differ");
    let cols = bt.rows;
    let mut data = vec![0u32; a.rows * cols];
    if cols > 0 {
        data.par_chunks_mut(cols).enumerate().for_each(|(i, row)| {
            let ai = a.row(i);
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = and_popcount(ai, bt.row(j));
            }
        });
    }
    CountMatrix { rows: a.rows, cols, data }
}

/// All `(i, j)` with `(a * bt^T)[i][j] = 0`, in row-major order, without
/// materializing the product. Returns `None` once more than `limit` pairs
/// are found.
pub fn zero_entries_transposed(a: &BitMatrix, bt: &BitMatrix, limit: usize) -> Option<Vec<(usize, usize)>> {
    assert_eq!(a.cols, bt.cols, "inner dimensions differ");
    let found = std::sync::atomic::AtomicUsize::new(0);
    let chunks: Vec<Option<Vec<(usize, usize)>>> = (0..a.rows)
        .into_par_iter()
        .map(|i| {
            if found.load(std::sync::atomic::Ordering::Relaxed) > limit {
                return None;
            }
            let ai = a.row(i);
            let row: Vec<(usize, usize)> =
                (0..bt.rows).filter(|&j| and_is_zero(ai, bt.row(j))).map(|j| (i, j)).collect();
            let total = found.fetch_add(row.len(), std::sync::atomic::Ordering::Relaxed) + row.len();
            (total <= limit).then_some(row)
        })
        .collect();
    let mut out = Vec::new();
    for chunk in chunks {
        out.extend(chunk?);
    }
    Some(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxEntryMode {
    Exact,
    /// Compress the inner dimension into seeded random buckets for several
    /// rounds, keep pairs that pass every round, then verify them exactly.
    Hashed { seed: u64, repetitions: Option<usize> },
}

impl MaxEntryMode {
    /// Offsets the seed so that independent calls draw different buckets.
    pub fn reseeded(self, salt: u64) -> Self {
        match self {
            MaxEntryMode::Exact => MaxEntryMode::Exact,
            MaxEntryMode::Hashed { seed, repetitions } => MaxEntryMode::Hashed {
                seed: seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15),
                repetitions,
            },
        }
    }
}

/// Default number of hashed rounds: `ceil(log2(rows * cols)) + 8`.
pub fn default_repetitions(rows: usize, cols: usize) -> usize {
    let cells = (rows * cols).max(1);
    (usize::BITS - (cells - 1).leading_zeros()) as usize + 8
}

/// All `(i, j)` with `(B C)[i][j]` equal to the number of ones in row `i` of
/// `B`, i.e. column `j` of `C` covers every one of row `i`. Rows of zeros
/// match every column. Output is sorted.
pub fn max_entry_product(b: &BitMatrix, c: &BitMatrix, mode: MaxEntryMode) -> Result<Vec<(usize, usize)>> {
    check_dims(b, c)?;
    // (i, j) is a witness iff row i of B misses column j of the complement
    let missing_t = c.complement().transpose();
    match mode {
        MaxEntryMode::Exact => Ok(zero_entries_transposed(b, &missing_t, usize::MAX).expect("no limit")),
        MaxEntryMode::Hashed { seed, repetitions } => {
            let reps = repetitions.unwrap_or_else(|| default_repetitions(b.rows, c.cols)).max(1);
            let inner = b.cols;
            let buckets = (inner / 2).max(1);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut candidates: Option<Vec<(usize, usize)>> = None;
            for _ in 0..reps {
                let assign: Vec<usize> = (0..inner).map(|_| rng.gen_range(0..buckets)).collect();
                let mut bb = BitMatrix::zeros(b.rows, buckets);
                for i in 0..b.rows {
                    for k in b.row_ones(i) {
                        bb.set(i, assign[k], true);
                    }
                }
                // bucket column j of C is set if any column entry in the bucket is set
                let mut cbt = BitMatrix::zeros(c.cols, buckets);
                for k in 0..c.rows {
                    for j in c.row_ones(k) {
                        cbt.set(j, assign[k], true);
                    }
                }
                let missing = cbt.complement();
                let round: Vec<(usize, usize)> = match &candidates {
                    None => zero_entries_transposed(&bb, &missing, usize::MAX).expect("no limit"),
                    Some(prev) => prev
                        .iter()
                        .copied()
                        .filter(|&(i, j)| and_is_zero(bb.row(i), missing.row(j)))
                        .collect(),
                };
                let empty = round.is_empty();
                candidates = Some(round);
                if empty {
                    break;
                }
            }
            Ok(candidates
                .unwrap_or_default()
                .into_iter()
                .filter(|&(i, j)| and_is_zero(b.row(i), missing_t.row(j)))
                .collect())
        }
    }
}

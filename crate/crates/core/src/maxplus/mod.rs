//! Online matrix-vector (max,+) multiplication.
//!
//! `(A * b)[i] = max_j (A[i, j] + b[j])` over ℝ ∪ {−∞}. Besides the value,
//! every engine reports the column achieving the maximum; ties go to the
//! largest column, and a row whose maximum is −∞ reports the last column.
//! Columns are 0-based in this API and 1-based in the text format.

mod block;
mod spliced;

pub use block::{BlockIndex, BlockPreprocessed};
pub use spliced::{SplicedMultiplier, DEFAULT_MEMORY_BUDGET};

use std::fmt::Write as _;

use crate::dominance::{DominanceTable, DominanceTree};
use crate::error::{Error, ParseError, Result};
use crate::extended::{ExtendedValue, Triple};
use crate::text::Lines;

pub type TreeMultiplier = SplicedMultiplier<DominanceTree<Triple>>;
pub type TableMultiplier = SplicedMultiplier<DominanceTable<Triple>>;

/// Dense row-major `rows × cols` matrix over ℝ ∪ {−∞}.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxPlusMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExtendedValue>,
}

impl MaxPlusMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ExtendedValue>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty("matrix dimensions must be positive"));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        Ok(MaxPlusMatrix { rows, cols, entries })
    }

    /// Builds from raw `f64`s; `f64::NEG_INFINITY` stands for −∞.
    pub fn from_f64(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let entries = entries
            .iter()
            .map(|&x| ExtendedValue::new(x))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, cols, entries)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                actual: bad.len(),
            });
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_f64(rows.len(), cols, &flat)
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
    pub fn get(&self, i: usize, j: usize) -> ExtendedValue {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[ExtendedValue] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Columns `start..start + width`, with −∞ beyond the last real column.
    pub fn column_block(&self, start: usize, width: usize) -> MaxPlusMatrix {
        let mut entries = Vec::with_capacity(self.rows * width);
        for i in 0..self.rows {
            for j in start..start + width {
                entries.push(if j < self.cols {
                    self.get(i, j)
                } else {
                    ExtendedValue::NEG_INFINITY
                });
            }
        }
        MaxPlusMatrix {
            rows: self.rows,
            cols: width,
            entries,
        }
    }

    pub fn transpose(&self) -> MaxPlusMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        MaxPlusMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }
}

/// Row maxima and the (0-based) columns achieving them.
#[derive(Clone, Debug, PartialEq)]
pub struct MulResult {
    pub values: Vec<ExtendedValue>,
    pub argmax: Vec<usize>,
}

/// Work counters for one multiplication.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MulStats {
    /// Dominance-structure work, see [`crate::dominance::QueryStats::visits`].
    pub tree_visits: u64,
    /// Rows reported across all pivot queries; exactly `rows` per block.
    pub reported_rows: u64,
    /// Row-level writes and merges: `rows` per block.
    pub merge_ops: u64,
}

impl MulStats {
    pub fn work_units(&self) -> u64 {
        self.tree_visits + self.merge_ops
    }
}

impl std::ops::AddAssign for MulStats {
    fn add_assign(&mut self, o: MulStats) {
        self.tree_visits += o.tree_visits;
        self.reported_rows += o.reported_rows;
        self.merge_ops += o.merge_ops;
    }
}

/// Row-by-row evaluation in `rows · cols` additions and comparisons.
pub fn multiply_trivial(a: &MaxPlusMatrix, b: &[ExtendedValue]) -> Result<MulResult> {
    if b.len() != a.cols {
        return Err(Error::DimensionMismatch {
            expected: a.cols,
            actual: b.len(),
        });
    }
    let mut values = Vec::with_capacity(a.rows);
    let mut argmax = Vec::with_capacity(a.rows);
    for i in 0..a.rows {
        let mut best = ExtendedValue::NEG_INFINITY;
        let mut arg = 0;
        for (j, (&x, &y)) in a.row(i).iter().zip(b).enumerate() {
            let s = x + y;
            if s >= best {
                best = s;
                arg = j;
            }
        }
        values.push(best);
        argmax.push(arg);
    }
    Ok(MulResult { values, argmax })
}

pub fn parse_matrix(text: &str) -> Result<MaxPlusMatrix, ParseError> {
    let mut lines = Lines::new(text);
    let header = lines.next_exact(2, "matrix header \"m n\"")?;
    let m = header[0].parse_usize("row count")?;
    let n = header[1].parse_usize("column count")?;
    if m == 0 || n == 0 {
        return Err(header[0].error("matrix dimensions must be positive"));
    }
    let mut entries = Vec::with_capacity(m * n);
    for i in 0..m {
        for tok in lines.next_exact(n, &format!("matrix row {}", i + 1))? {
            entries.push(tok.parse_extended()?);
        }
    }
    lines.expect_end()?;
    Ok(MaxPlusMatrix {
        rows: m,
        cols: n,
        entries,
    })
}

pub fn parse_vector(text: &str) -> Result<Vec<ExtendedValue>, ParseError> {
    let mut lines = Lines::new(text);
    let header = lines.next_exact(1, "vector length")?;
    let n = header[0].parse_usize("vector length")?;
    if n == 0 {
        return Err(header[0].error("vector length must be positive"));
    }
    let values = lines
        .next_exact(n, "vector entries")?
        .iter()
        .map(|t| t.parse_extended())
        .collect::<Result<Vec<_>, _>>()?;
    lines.expect_end()?;
    Ok(values)
}

pub fn format_matrix(a: &MaxPlusMatrix) -> String {
    let mut s = format!("{} {}\n", a.rows, a.cols);
    for i in 0..a.rows {
        push_row(&mut s, a.row(i));
    }
    s
}

pub fn format_vector(b: &[ExtendedValue]) -> String {
    let mut s = format!("{}\n", b.len());
    push_row(&mut s, b);
    s
}

fn push_row(s: &mut String, row: &[ExtendedValue]) {
    for (j, x) in row.iter().enumerate() {
        if j > 0 {
            s.push(' ');
        }
        write!(s, "{x}").unwrap();
    }
    s.push('\n');
}

use super::{MaxPlusMatrix, MulResult, MulStats};
use crate::dominance::{DominanceIndex, DominanceTable, DominanceTree, PointSet};
use crate::error::{Error, Result};
use crate::extended::{lift_matrix_entry, lift_vector_entry, ExtendedValue, Triple};

/// A dominance structure that can serve as the per-pivot index of a block.
pub trait BlockIndex: DominanceIndex<Triple> + Sized {
    fn build_index(points: PointSet<Triple>, budget_bytes: u128) -> Result<Self>;

    /// Estimated resident bytes of one index over `rows` points of dimension
    /// `width`.
    fn predicted_bytes(rows: usize, width: usize) -> u128;
}

impl BlockIndex for DominanceTree<Triple> {
    fn build_index(points: PointSet<Triple>, _budget_bytes: u128) -> Result<Self> {
        DominanceTree::build(points)
    }

    fn predicted_bytes(rows: usize, width: usize) -> u128 {
        DominanceTree::<Triple>::predicted_bytes(rows, width)
    }
}

impl BlockIndex for DominanceTable<Triple> {
    fn build_index(points: PointSet<Triple>, budget_bytes: u128) -> Result<Self> {
        let entries = (budget_bytes / 4).min(u64::MAX as u128) as u64;
        DominanceTable::build_with_budget(&points, entries)
    }

    // Slots alone; the table enforces the stored-entry budget while building.
    fn predicted_bytes(rows: usize, width: usize) -> u128 {
        let radix = rows as u128 + 1;
        (0..width)
            .try_fold(1u128, |acc, _| acc.checked_mul(radix))
            .and_then(|slots| slots.checked_mul(8))
            .unwrap_or(u128::MAX)
    }
}

/// An `m × t` block preprocessed for repeated multiplication.
///
/// For every pivot column `p` the rows are turned into the `t`-dimensional
/// points `(A[i, j] - A[i, p])_j` (in triple arithmetic) and indexed. Row `i`
/// attains its maximum at pivot `p` exactly when its point is dominated by
/// `(b[p] - b[j])_j`, so the `t` pivot queries together report each row once.
#[derive(Clone, Debug)]
pub struct BlockPreprocessed<I> {
    rows: usize,
    width: usize,
    entries: Vec<ExtendedValue>,
    pivots: Vec<I>,
}

/// Reusable buffers for [`BlockPreprocessed::multiply_emit`].
#[derive(Default)]
pub(crate) struct BlockScratch {
    lifted: Vec<Triple>,
    query: Vec<Triple>,
    hits: Vec<u32>,
    reports: Vec<u32>,
}

impl<I: BlockIndex> BlockPreprocessed<I> {
    pub fn new(block: &MaxPlusMatrix) -> Result<Self> {
        Self::with_budget(block, u128::MAX)
    }

    pub fn with_budget(block: &MaxPlusMatrix, budget_bytes: u128) -> Result<Self> {
        let (m, t) = (block.rows(), block.cols());
        let needed = I::predicted_bytes(m, t).saturating_mul(t as u128);
        if needed > budget_bytes {
            return Err(Error::BudgetExceeded {
                what: "block preprocessing bytes",
                needed,
                budget: budget_bytes,
            });
        }
        let lifted: Vec<Triple> = (0..m)
            .flat_map(|i| (0..t).map(move |j| (i, j)))
            .map(|(i, j)| lift_matrix_entry(block.get(i, j)))
            .collect();
        let mut pivots = Vec::with_capacity(t);
        for p in 0..t {
            let mut coords = Vec::with_capacity(m * t);
            for row in lifted.chunks_exact(t) {
                coords.extend(row.iter().map(|&x| x - row[p]));
            }
            pivots.push(I::build_index(PointSet::from_flat(t, m, coords)?, budget_bytes / t as u128)?);
        }
        Ok(BlockPreprocessed {
            rows: m,
            width: t,
            entries: (0..m).flat_map(|i| block.row(i).to_vec()).collect(),
            pivots,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pivot_index(&self, pivot: usize) -> &I {
        &self.pivots[pivot]
    }

    /// The difference point of `row` under `pivot`, as stored in its index.
    pub fn difference_vector(&self, pivot: usize, row: usize) -> Vec<Triple> {
        let r = &self.entries[row * self.width..(row + 1) * self.width];
        let base = lift_matrix_entry(r[pivot]);
        r.iter().map(|&x| lift_matrix_entry(x) - base).collect()
    }

    /// `A * b` with block-local columns.
    pub fn multiply(&self, b: &[ExtendedValue]) -> Result<(MulResult, MulStats)> {
        let mut values = vec![ExtendedValue::NEG_INFINITY; self.rows];
        let mut argmax = vec![0; self.rows];
        let stats = self.multiply_emit(b, &mut BlockScratch::default(), |i, v, p| {
            values[i] = v;
            argmax[i] = p;
        })?;
        for (v, a) in values.iter().zip(argmax.iter_mut()) {
            if v.is_neg_infinity() {
                *a = self.width - 1;
            }
        }
        Ok((MulResult { values, argmax }, stats))
    }

    /// Runs the `t` pivot queries and calls `emit(row, value, pivot)` once per
    /// row. Fails if any row is reported by zero or several pivots.
    pub(crate) fn multiply_emit(
        &self,
        b: &[ExtendedValue],
        scratch: &mut BlockScratch,
        mut emit: impl FnMut(usize, ExtendedValue, usize),
    ) -> Result<MulStats> {
        let t = self.width;
        if b.len() != t {
            return Err(Error::DimensionMismatch {
                expected: t,
                actual: b.len(),
            });
        }
        scratch.lifted.clear();
        for (j, &x) in b.iter().enumerate() {
            scratch.lifted.push(lift_vector_entry(x, j + 1)?);
        }
        scratch.query.resize(t, Triple::ZERO);
        scratch.reports.clear();
        scratch.reports.resize(self.rows, 0);

        let mut stats = MulStats::default();
        for p in 0..t {
            let pivot = scratch.lifted[p];
            for (q, &x) in scratch.query.iter_mut().zip(&scratch.lifted) {
                *q = pivot - x;
            }
            scratch.hits.clear();
            let qs = self.pivots[p].query_into(&scratch.query, &mut scratch.hits)?;
            stats.tree_visits += qs.visits;
            stats.reported_rows += scratch.hits.len() as u64;
            for &row in &scratch.hits {
                let i = row as usize;
                scratch.reports[i] += 1;
                emit(i, self.entries[i * t + p] + b[p], p);
            }
        }
        if stats.reported_rows != self.rows as u64 {
            let (row, &reports) = scratch
                .reports
                .iter()
                .enumerate()
                .find(|(_, &c)| c != 1)
                .expect("miscounted reports");
            return Err(Error::TieEncoding {
                row,
                reports: reports as usize,
            });
        }
        stats.merge_ops += self.rows as u64;
        Ok(stats)
    }
}

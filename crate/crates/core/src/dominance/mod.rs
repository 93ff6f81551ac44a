//! Online dominance reporting: preprocess a point set `B` so that
//! `δ_B(p) = { b ∈ B : b ⪯ p }` can be listed for query points `p`
//! revealed later.
//!
//! Two structures are provided. [`DominanceTree`] is the divide-and-conquer
//! tree whose query work grows sublinearly in `|B|`; [`DominanceTable`]
//! precomputes every answer indexed by per-coordinate ranks and only suits
//! tiny inputs. Both report original row indices (0-based).

mod table;
mod tree;

pub use table::{DominanceTable, DEFAULT_TABLE_BUDGET};
pub use tree::{BuildStats, DominanceTree, TreeSize, LEAF_SIZE};

use crate::error::{Error, Result};

/// `len` points of dimension `dim`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet<C> {
    dim: usize,
    len: usize,
    coords: Vec<C>,
}

impl<C: Copy> PointSet<C> {
    pub fn from_rows<R: AsRef<[C]>>(dim: usize, rows: impl IntoIterator<Item = R>) -> Result<Self> {
        let mut coords = Vec::new();
        let mut len = 0;
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            coords.extend_from_slice(row);
            len += 1;
        }
        Ok(PointSet { dim, len, coords })
    }

    pub fn from_flat(dim: usize, len: usize, coords: Vec<C>) -> Result<Self> {
        if coords.len() != dim * len {
            return Err(Error::DimensionMismatch {
                expected: dim * len,
                actual: coords.len(),
            });
        }
        Ok(PointSet { dim, len, coords })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn point(&self, row: usize) -> &[C] {
        &self.coords[row * self.dim..(row + 1) * self.dim]
    }

    pub(crate) fn into_coords(self) -> Vec<C> {
        self.coords
    }
}

/// Per-query instrumentation.
///
/// `visits` follows the cost model `T_d(n) = T_{d-1}(n/2) + T_d(n/2) + 1`,
/// `T_d(1) = d`, `T_0(n) = 0`: one unit per internal node entered plus one per
/// coordinate checked at a leaf. Emitting the output is counted
/// separately in `output_size`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub visits: u64,
    pub internal_visits: u64,
    pub output_size: u64,
}

impl std::ops::AddAssign for QueryStats {
    fn add_assign(&mut self, rhs: QueryStats) {
        self.visits += rhs.visits;
        self.internal_visits += rhs.internal_visits;
        self.output_size += rhs.output_size;
    }
}

/// A preprocessed structure answering domination-set queries.
pub trait DominanceIndex<C> {
    fn dim(&self) -> usize;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Appends the rows dominated by `p` to `out`.
    fn query_into(&self, p: &[C], out: &mut Vec<u32>) -> Result<QueryStats>;

    fn query(&self, p: &[C]) -> Result<(Vec<u32>, QueryStats)> {
        let mut out = Vec::new();
        let stats = self.query_into(p, &mut out)?;
        Ok((out, stats))
    }
}

/// Every `(red, blue)` pair with `blue ⪯ red`, sorted.
///
/// Builds one tree over `blue` and issues one query per red point.
pub fn report_all_dominating_pairs<C: Ord + Copy>(
    red: &PointSet<C>,
    blue: &PointSet<C>,
) -> Result<Vec<(usize, usize)>> {
    if red.dim() != blue.dim() {
        return Err(Error::DimensionMismatch {
            expected: blue.dim(),
            actual: red.dim(),
        });
    }
    if blue.is_empty() || red.is_empty() {
        return Ok(Vec::new());
    }
    let tree = DominanceTree::build(blue.clone())?;
    let mut pairs = Vec::new();
    let mut hits = Vec::new();
    for r in 0..red.len() {
        hits.clear();
        tree.query_into(red.point(r), &mut hits)?;
        hits.sort_unstable();
        pairs.extend(hits.iter().map(|&b| (r, b as usize)));
    }
    Ok(pairs)
}

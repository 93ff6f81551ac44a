use super::block::BlockScratch;
use super::{BlockIndex, BlockPreprocessed, MaxPlusMatrix, MulResult, MulStats};
use crate::error::{Error, Result};
use crate::extended::ExtendedValue;

/// Default cap on the resident bytes of a [`SplicedMultiplier`].
pub const DEFAULT_MEMORY_BUDGET: u64 = 4 << 30;

/// An `m × n` matrix cut into `⌈n/t⌉` blocks of width `t`, each
/// preprocessed independently. The last block is padded with −∞ columns.
#[derive(Clone, Debug)]
pub struct SplicedMultiplier<I> {
    rows: usize,
    cols: usize,
    width: usize,
    blocks: Vec<BlockPreprocessed<I>>,
}

impl<I: BlockIndex> SplicedMultiplier<I> {
    pub fn new(a: &MaxPlusMatrix, width: usize) -> Result<Self> {
        Self::with_budget(a, width, DEFAULT_MEMORY_BUDGET)
    }

    /// Refuses before building anything if the predicted footprint exceeds
    /// `budget_bytes`.
    pub fn with_budget(a: &MaxPlusMatrix, width: usize, budget_bytes: u64) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidArgument("block width must be at least 1".into()));
        }
        let (m, n) = (a.rows(), a.cols());
        let blocks = n.div_ceil(width);
        let per_block = I::predicted_bytes(m, width)
            .saturating_mul(width as u128)
            .saturating_add((m * width * std::mem::size_of::<ExtendedValue>()) as u128);
        let needed = per_block.saturating_mul(blocks as u128);
        if needed > budget_bytes as u128 {
            return Err(Error::BudgetExceeded {
                what: "spliced multiplier bytes",
                needed,
                budget: budget_bytes as u128,
            });
        }
        let block_budget = budget_bytes as u128 / blocks as u128;
        let blocks = (0..blocks)
            .map(|l| BlockPreprocessed::with_budget(&a.column_block(l * width, width), block_budget))
            .collect::<Result<Vec<_>>>()?;
        Ok(SplicedMultiplier {
            rows: m,
            cols: n,
            width,
            blocks,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn padded_cols(&self) -> usize {
        self.blocks.len() * self.width
    }

    pub fn blocks(&self) -> &[BlockPreprocessed<I>] {
        &self.blocks
    }

    /// `A * b` with global (0-based) columns.
    pub fn multiply(&self, b: &[ExtendedValue]) -> Result<(MulResult, MulStats)> {
        let mut out = MulResult {
            values: Vec::new(),
            argmax: Vec::new(),
        };
        let stats = self.multiply_into(b, &mut out)?;
        Ok((out, stats))
    }

    /// Like [`multiply`](Self::multiply), reusing `out`'s allocations.
    ///
    /// Blocks are merged in column order and a later block wins ties, so
    /// the reported column is the largest one achieving the maximum.
    pub fn multiply_into(&self, b: &[ExtendedValue], out: &mut MulResult) -> Result<MulStats> {
        if b.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: b.len(),
            });
        }
        let t = self.width;
        out.values.clear();
        out.values.resize(self.rows, ExtendedValue::NEG_INFINITY);
        out.argmax.clear();
        out.argmax.resize(self.rows, 0);

        let mut padded = b.to_vec();
        padded.resize(self.padded_cols(), ExtendedValue::NEG_INFINITY);
        let mut scratch = BlockScratch::default();
        let mut stats = MulStats::default();
        let (values, argmax) = (&mut out.values, &mut out.argmax);
        for (l, block) in self.blocks.iter().enumerate() {
            let offset = l * t;
            stats += block.multiply_emit(&padded[offset..offset + t], &mut scratch, |i, v, p| {
                if v >= values[i] {
                    values[i] = v;
                    argmax[i] = offset + p;
                }
            })?;
        }
        for (v, a) in values.iter().zip(argmax.iter_mut()) {
            if v.is_neg_infinity() {
                *a = self.cols - 1;
            }
        }
        Ok(stats)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxplus::{multiply_trivial, TableMultiplier, TreeMultiplier};
    use rand::{Rng, SeedableRng};

    const NINF: f64 = f64::NEG_INFINITY;

    fn ext(xs: &[f64]) -> Vec<ExtendedValue> {
        xs.iter().map(|&x| ExtendedValue::new(x).unwrap()).collect()
    }

    fn random(rng: &mut impl Rng, m: usize, n: usize, ninf: f64) -> MaxPlusMatrix {
        let entries: Vec<f64> = (0..m * n)
            .map(|_| if rng.random_bool(ninf) { NINF } else { 1.0 - rng.random::<f64>() })
            .collect();
        MaxPlusMatrix::from_f64(m, n, &entries).unwrap()
    }

    #[test]
    fn padding_arithmetic() {
        let a = MaxPlusMatrix::from_f64(2, 5, &[0.5; 10]).unwrap();
        let sm = TreeMultiplier::new(&a, 2).unwrap();
        assert_eq!((sm.padded_cols(), sm.blocks().len()), (6, 3));
        let last = &sm.blocks()[2];
        assert_eq!(last.difference_vector(0, 0)[1].inf_count, -1);

        let a = MaxPlusMatrix::from_f64(3, 8, &[0.25; 24]).unwrap();
        let sm = TreeMultiplier::new(&a, 3).unwrap();
        assert_eq!((sm.padded_cols(), sm.blocks().len()), (9, 3));
    }

    #[test]
    fn single_block_equals_block_engine() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let a = random(&mut rng, 10, 3, 0.0);
        let sm = TreeMultiplier::new(&a, 3).unwrap();
        let bp = BlockPreprocessed::<crate::dominance::DominanceTree<_>>::new(&a).unwrap();
        for _ in 0..20 {
            let b = ext(&[rng.random(), rng.random(), rng.random()]);
            assert_eq!(sm.multiply(&b).unwrap(), bp.multiply(&b).unwrap());
        }
    }

    #[test]
    fn random_instances_match_trivial() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let m = rng.random_range(1..=32);
            let n = rng.random_range(1..=32);
            let t = rng.random_range(2..=4);
            let ninf = if rng.random_bool(0.2) { 0.3 } else { 0.0 };
            let a = random(&mut rng, m, n, ninf);
            let sm = TreeMultiplier::new(&a, t).unwrap();
            for _ in 0..5 {
                let b: Vec<ExtendedValue> = random(&mut rng, 1, n, ninf).row(0).to_vec();
                let (got, stats) = sm.multiply(&b).unwrap();
                assert_eq!(got, multiply_trivial(&a, &b).unwrap());
                assert_eq!(stats.reported_rows, (m * sm.blocks().len()) as u64);
            }
        }
    }

    #[test]
    fn small_integer_ties_match_trivial() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let (m, n, t) = (rng.random_range(1..=6), rng.random_range(1..=7), rng.random_range(1..=3));
            let entries: Vec<f64> = (0..m * n)
                .map(|_| if rng.random_bool(0.15) { NINF } else { rng.random_range(0..3) as f64 })
                .collect();
            let a = MaxPlusMatrix::from_f64(m, n, &entries).unwrap();
            let tree = TreeMultiplier::new(&a, t).unwrap();
            let table = TableMultiplier::new(&a, t).unwrap();
            let b: Vec<f64> = (0..n)
                .map(|_| if rng.random_bool(0.15) { NINF } else { rng.random_range(0..3) as f64 })
                .collect();
            let b = ext(&b);
            let expected = multiply_trivial(&a, &b).unwrap();
            assert_eq!(tree.multiply(&b).unwrap().0, expected);
            assert_eq!(table.multiply(&b).unwrap().0, expected);
        }
    }

    #[test]
    fn all_neg_infinity_vector() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let a = random(&mut rng, 5, 7, 0.0);
        let sm = TreeMultiplier::new(&a, 3).unwrap();
        let (r, _) = sm.multiply(&ext(&[NINF; 7])).unwrap();
        assert!(r.values.iter().all(|v| v.is_neg_infinity()));
        assert!(r.argmax.iter().all(|&j| j < 7));
    }

    #[test]
    fn errors() {
        let a = MaxPlusMatrix::from_f64(2, 3, &[0.5; 6]).unwrap();
        assert!(TreeMultiplier::new(&a, 0).is_err());
        let sm = TreeMultiplier::new(&a, 2).unwrap();
        assert!(matches!(
            sm.multiply(&ext(&[1.0, 2.0])),
            Err(Error::DimensionMismatch { expected: 3, actual: 2 })
        ));
        assert!(matches!(
            TreeMultiplier::with_budget(&a, 2, 16),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}

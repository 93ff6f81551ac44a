use super::{DominanceIndex, PointSet, QueryStats};
use crate::error::{Error, Result};

/// Default cap on table slots plus stored row indices.
pub const DEFAULT_TABLE_BUDGET: u64 = 1 << 30;

/// Lookup-table dominance structure.
///
/// For every coordinate `k` the points are kept sorted by `b[k]`. A query
/// computes, per coordinate, the rank `r_k` = number of points with
/// `b[k] <= p[k]` by binary search, and returns the precomputed
/// intersection of the `k`-wise prefixes of length `r_k`. The table holds
/// `(|B| + 1)^d` answers.
#[derive(Clone, Debug)]
pub struct DominanceTable<C> {
    dim: usize,
    len: usize,
    /// `keys[k]` is coordinate `k` of the points in `order[k]`, non-decreasing.
    keys: Vec<Vec<C>>,
    order: Vec<Vec<u32>>,
    offsets: Vec<usize>,
    pool: Vec<u32>,
}

impl<C: Ord + Copy> DominanceTable<C> {
    pub fn build(points: &PointSet<C>) -> Result<Self> {
        Self::build_with_budget(points, DEFAULT_TABLE_BUDGET)
    }

    /// Refuses (without building anything) when the slot count or the total
    /// number of stored indices would exceed `budget`.
    pub fn build_with_budget(points: &PointSet<C>, budget: u64) -> Result<Self> {
        let n = points.len();
        let d = points.dim();
        if n == 0 {
            return Err(Error::Empty("dominance table needs at least one point"));
        }
        let radix = n as u128 + 1;
        let slots = (0..d).try_fold(1u128, |acc, _| acc.checked_mul(radix));
        let slots = match slots {
            Some(s) if s <= budget as u128 => s as usize,
            other => {
                return Err(Error::BudgetExceeded {
                    what: "dominance table slots",
                    needed: other.unwrap_or(u128::MAX),
                    budget: budget as u128,
                })
            }
        };

        let mut order = Vec::with_capacity(d);
        let mut keys = Vec::with_capacity(d);
        // position[k][row] = 1-based position of `row` in the k-th order.
        let mut position = vec![vec![0usize; n]; d];
        for k in 0..d {
            let mut rows: Vec<u32> = (0..n as u32).collect();
            rows.sort_by(|&a, &b| points.point(a as usize)[k].cmp(&points.point(b as usize)[k]));
            for (pos, &row) in rows.iter().enumerate() {
                position[k][row as usize] = pos + 1;
            }
            keys.push(rows.iter().map(|&r| points.point(r as usize)[k]).collect());
            order.push(rows);
        }

        let mut offsets = Vec::with_capacity(slots + 1);
        let mut pool = Vec::new();
        let mut ranks = vec![0usize; d];
        let mut stored = slots as u64;
        offsets.push(0);
        for _ in 0..slots {
            for row in 0..n {
                if (0..d).all(|k| position[k][row] <= ranks[k]) {
                    pool.push(row as u32);
                    stored += 1;
                }
            }
            if stored > budget {
                return Err(Error::BudgetExceeded {
                    what: "dominance table entries",
                    needed: stored as u128,
                    budget: budget as u128,
                });
            }
            offsets.push(pool.len());
            // Mixed-radix increment, coordinate 0 fastest.
            for r in ranks.iter_mut() {
                *r += 1;
                if *r <= n {
                    break;
                }
                *r = 0;
            }
        }

        Ok(DominanceTable {
            dim: d,
            len: n,
            keys,
            order,
            offsets,
            pool,
        })
    }

    pub fn slots(&self) -> usize {
        self.offsets.len() - 1
    }

    /// The stored answer for a rank tuple.
    pub fn entry(&self, ranks: &[usize]) -> Result<&[u32]> {
        if ranks.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: ranks.len(),
            });
        }
        if ranks.iter().any(|&r| r > self.len) {
            return Err(Error::InvalidArgument("rank out of range".into()));
        }
        let slot = self.slot_of(ranks.iter().copied());
        Ok(&self.pool[self.offsets[slot]..self.offsets[slot + 1]])
    }

    /// Rows sorted by coordinate `k`.
    pub fn sorted_rows(&self, k: usize) -> &[u32] {
        &self.order[k]
    }

    fn slot_of(&self, ranks: impl DoubleEndedIterator<Item = usize>) -> usize {
        ranks.rev().fold(0, |acc, r| acc * (self.len + 1) + r)
    }

    /// Upper bound on comparisons of one binary search over `len` keys.
    fn search_cost(&self) -> u64 {
        (usize::BITS - self.len.leading_zeros()) as u64
    }
}

impl<C: Ord + Copy> DominanceIndex<C> for DominanceTable<C> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn len(&self) -> usize {
        self.len
    }

    fn query_into(&self, p: &[C], out: &mut Vec<u32>) -> Result<QueryStats> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: p.len(),
            });
        }
        let slot = self.slot_of(
            self.keys
                .iter()
                .zip(p)
                .map(|(keys, q)| keys.partition_point(|c| c <= q)),
        );
        let hits = &self.pool[self.offsets[slot]..self.offsets[slot + 1]];
        out.extend_from_slice(hits);
        Ok(QueryStats {
            visits: self.search_cost() * self.dim as u64,
            internal_visits: 0,
            output_size: hits.len() as u64,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominance::DominanceTree;

    fn set(dim: usize, rows: &[&[i32]]) -> PointSet<i32> {
        PointSet::from_rows(dim, rows.iter().copied()).unwrap()
    }

    #[test]
    fn one_dimension_two_points() {
        let t = DominanceTable::build(&set(1, &[&[1], &[2]])).unwrap();
        assert_eq!(t.slots(), 3);
        assert!(t.entry(&[0]).unwrap().is_empty());
        assert_eq!(t.entry(&[1]).unwrap(), &[0]);
        assert_eq!(t.entry(&[2]).unwrap(), &[0, 1]);
    }

    #[test]
    fn crossing_pair_entries() {
        let b = set(2, &[&[1, 2], &[2, 1]]);
        let t = DominanceTable::build(&b).unwrap();
        assert_eq!(t.slots(), 9);
        assert_eq!(t.entry(&[2, 2]).unwrap(), &[0, 1]);
        assert!(t.entry(&[1, 1]).unwrap().is_empty());
        // Enumerate every rank tuple against the prefix-intersection definition.
        for r0 in 0..=2 {
            for r1 in 0..=2 {
                let p0: Vec<u32> = t.sorted_rows(0)[..r0].to_vec();
                let p1: Vec<u32> = t.sorted_rows(1)[..r1].to_vec();
                let expected: Vec<u32> = (0..2).filter(|r| p0.contains(r) && p1.contains(r)).collect();
                assert_eq!(t.entry(&[r0, r1]).unwrap(), expected.as_slice());
            }
        }
    }

    #[test]
    fn single_point_four_entries() {
        let t = DominanceTable::build(&set(2, &[&[1, 1]])).unwrap();
        assert_eq!(t.slots(), 4);
        for (r, expect) in [([0, 0], 0), ([1, 0], 0), ([0, 1], 0), ([1, 1], 1)] {
            assert_eq!(t.entry(&r).unwrap().len(), expect);
        }
    }

    #[test]
    fn ties_are_inclusive() {
        let b = set(2, &[&[2, 3], &[2, 1], &[5, 3]]);
        let t = DominanceTable::build(&b).unwrap();
        let mut got = t.query(&[2, 3]).unwrap().0;
        got.sort_unstable();
        assert_eq!(got, vec![0, 1]);
        assert!(t.query(&[1, 0]).unwrap().0.is_empty());
    }

    #[test]
    fn budget_refusal() {
        let rows: Vec<Vec<i32>> = (0..10).map(|i| vec![i, i, i]).collect();
        let b = PointSet::from_rows(3, &rows).unwrap();
        // 11^3 = 1331 slots.
        let err = DominanceTable::build_with_budget(&b, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        // Slots fit but stored indices do not.
        let err = DominanceTable::build_with_budget(&b, 1400).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        assert!(DominanceTable::build_with_budget(&b, 1 << 20).is_ok());
    }

    #[test]
    fn agrees_with_tree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let d = rng.random_range(1..=3);
            let n = rng.random_range(1..=16);
            let rows: Vec<Vec<i32>> = (0..n)
                .map(|_| (0..d).map(|_| rng.random_range(0..5)).collect())
                .collect();
            let b = PointSet::from_rows(d, &rows).unwrap();
            let table = DominanceTable::build(&b).unwrap();
            let tree = DominanceTree::build(b).unwrap();
            for _ in 0..20 {
                let p: Vec<i32> = (0..d).map(|_| rng.random_range(-1..6)).collect();
                let mut a = table.query(&p).unwrap().0;
                let mut c = tree.query(&p).unwrap().0;
                a.sort_unstable();
                c.sort_unstable();
                assert_eq!(a, c);
            }
        }
    }
}

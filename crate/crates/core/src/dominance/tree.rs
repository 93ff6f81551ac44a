use std::collections::HashMap;

use super::{DominanceIndex, PointSet, QueryStats};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
enum Node<C> {
    /// Points on the minus side have `coord[axis] <= gamma`, points on the
    /// plus side `>= gamma`. `projected` is the minus side with `axis`
    /// dropped.
    Split {
        gamma: C,
        axis: u32,
        minus: u32,
        plus: u32,
        projected: u32,
    },
    /// At most [`LEAF_SIZE`] rows whose first `dim` coordinates are still
    /// unchecked.
    Scan { start: u32, len: u32, dim: u32 },
    /// No coordinates left to check: every row is reported.
    All { start: u32, len: u32 },
}

/// Largest point set stored as a scanned leaf.
pub const LEAF_SIZE: usize = 2;

/// Counters collected while building a tree.
///
/// `work` follows `U_d(n) = 2·U_d(n/2) + U_{d-1}(n/2) + n` with `U_0(n) = n`
/// and `n` at a leaf.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub internal_nodes: u64,
    pub leaves: u64,
    pub height: u32,
    pub work: u64,
}

impl BuildStats {
    pub fn nodes(&self) -> u64 {
        self.internal_nodes + self.leaves
    }
}

/// Exact size of the tree over `n` points in `d` dimensions. The shape only
/// depends on `(n, d)`, never on the coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TreeSize {
    pub nodes: u64,
    pub pool_entries: u64,
    pub work: u64,
}

impl std::ops::Add for TreeSize {
    type Output = TreeSize;

    fn add(self, o: TreeSize) -> TreeSize {
        TreeSize {
            nodes: self.nodes + o.nodes,
            pool_entries: self.pool_entries + o.pool_entries,
            work: self.work + o.work,
        }
    }
}

/// Divide-and-conquer dominance tree.
///
/// Each internal node over a set `B_u` with active dimension `d_u` sorts
/// `B_u` by coordinate `d_u` (stably), sends the first `⌊|B_u|/2⌋` points to
/// the minus child and the rest to the plus child, and keeps a third child
/// holding the minus points with coordinate `d_u` dropped. A query whose
/// coordinate is below the split value only descends into the minus child;
/// otherwise it descends into the plus and projected children.
#[derive(Clone, Debug)]
pub struct DominanceTree<C> {
    dim: usize,
    len: usize,
    coords: Vec<C>,
    nodes: Vec<Node<C>>,
    pool: Vec<u32>,
    root: u32,
    stats: BuildStats,
}

impl<C: Ord + Copy> DominanceTree<C> {
    pub fn build(points: PointSet<C>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("dominance tree needs at least one point"));
        }
        if points.len() > u32::MAX as usize {
            return Err(Error::InvalidArgument("too many points".into()));
        }
        let dim = points.dim();
        let len = points.len();
        let size = Self::predicted_size(len, dim);
        let mut tree = DominanceTree {
            dim,
            len,
            coords: points.into_coords(),
            nodes: Vec::with_capacity(size.nodes as usize),
            pool: Vec::with_capacity(size.pool_entries as usize),
            root: 0,
            stats: BuildStats::default(),
        };
        let mut rows: Vec<u32> = (0..len as u32).collect();
        tree.root = tree.build_node(&mut rows, dim, 0);
        debug_assert_eq!(tree.stats.nodes(), size.nodes);
        debug_assert_eq!(tree.stats.work, size.work);
        Ok(tree)
    }

    #[inline]
    fn coord(&self, row: u32, k: usize) -> C {
        self.coords[row as usize * self.dim + k]
    }

    fn build_node(&mut self, rows: &mut [u32], dim: usize, depth: u32) -> u32 {
        self.stats.height = self.stats.height.max(depth);
        let id = self.nodes.len() as u32;
        if dim == 0 {
            let start = self.pool.len() as u32;
            self.pool.extend_from_slice(rows);
            self.stats.leaves += 1;
            self.stats.work += rows.len() as u64;
            self.nodes.push(Node::All {
                start,
                len: rows.len() as u32,
            });
            return id;
        }
        if rows.len() <= LEAF_SIZE {
            let start = self.pool.len() as u32;
            self.pool.extend_from_slice(rows);
            self.stats.leaves += 1;
            self.stats.work += rows.len() as u64;
            self.nodes.push(Node::Scan {
                start,
                len: rows.len() as u32,
                dim: dim as u32,
            });
            return id;
        }

        let axis = dim - 1;
        rows.sort_by(|&a, &b| self.coord(a, axis).cmp(&self.coord(b, axis)));
        let half = rows.len() / 2;
        let gamma = self.coord(rows[half], axis);
        self.stats.internal_nodes += 1;
        self.stats.work += rows.len() as u64;
        self.nodes.push(Node::Split {
            gamma,
            axis: axis as u32,
            minus: 0,
            plus: 0,
            projected: 0,
        });

        let mut projected_rows = rows[..half].to_vec();
        let (lo, hi) = rows.split_at_mut(half);
        let minus = self.build_node(lo, dim, depth + 1);
        let plus = self.build_node(hi, dim, depth + 1);
        let projected = self.build_node(&mut projected_rows, dim - 1, depth + 1);
        if let Node::Split {
            minus: m,
            plus: p,
            projected: q,
            ..
        } = &mut self.nodes[id as usize]
        {
            *m = minus;
            *p = plus;
            *q = projected;
        }
        id
    }

    /// Node count, index-pool size and build work for `n` points in `d`
    /// dimensions, computed from the split rule alone.
    pub fn predicted_size(n: usize, d: usize) -> TreeSize {
        fn go(n: usize, d: usize, memo: &mut HashMap<(usize, usize), TreeSize>) -> TreeSize {
            if d == 0 {
                return TreeSize {
                    nodes: 1,
                    pool_entries: n as u64,
                    work: n as u64,
                };
            }
            if n <= LEAF_SIZE {
                return TreeSize {
                    nodes: 1,
                    pool_entries: n as u64,
                    work: n as u64,
                };
            }
            if let Some(&s) = memo.get(&(n, d)) {
                return s;
            }
            let half = n / 2;
            let own = TreeSize {
                nodes: 1,
                pool_entries: 0,
                work: n as u64,
            };
            let s = own + go(half, d, memo) + go(n - half, d, memo) + go(half, d - 1, memo);
            memo.insert((n, d), s);
            s
        }
        go(n, d, &mut HashMap::new())
    }

    /// Approximate resident bytes of a tree over `n` points in `d` dimensions.
    pub fn predicted_bytes(n: usize, d: usize) -> u128 {
        let s = Self::predicted_size(n, d);
        s.nodes as u128 * std::mem::size_of::<Node<C>>() as u128
            + s.pool_entries as u128 * 4
            + (n * d) as u128 * std::mem::size_of::<C>() as u128
    }

    pub fn build_stats(&self) -> BuildStats {
        self.stats
    }

    fn visit(&self, node: u32, p: &[C], out: &mut Vec<u32>, stats: &mut QueryStats) {
        match self.nodes[node as usize] {
            Node::Split {
                gamma,
                axis,
                minus,
                plus,
                projected,
            } => {
                stats.internal_visits += 1;
                stats.visits += 1;
                if p[axis as usize] < gamma {
                    self.visit(minus, p, out, stats);
                } else {
                    self.visit(plus, p, out, stats);
                    self.visit(projected, p, out, stats);
                }
            }
            Node::Scan { start, len, dim } => {
                let dim = dim as usize;
                let start = start as usize;
                for &row in &self.pool[start..start + len as usize] {
                    stats.visits += dim as u64;
                    let base = row as usize * self.dim;
                    let point = &self.coords[base..base + dim];
                    if point.iter().zip(p).all(|(b, q)| b <= q) {
                        out.push(row);
                        stats.output_size += 1;
                    }
                }
            }
            Node::All { start, len } => {
                let start = start as usize;
                out.extend_from_slice(&self.pool[start..start + len as usize]);
                stats.output_size += len as u64;
            }
        }
    }
}

impl<C: Ord + Copy> DominanceIndex<C> for DominanceTree<C> {
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
        let mut stats = QueryStats::default();
        self.visit(self.root, p, out, &mut stats);
        Ok(stats)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scan(points: &PointSet<i32>, p: &[i32]) -> Vec<u32> {
        (0..points.len())
            .filter(|&r| points.point(r).iter().zip(p).all(|(b, q)| b <= q))
            .map(|r| r as u32)
            .collect()
    }

    fn sorted(mut v: Vec<u32>) -> Vec<u32> {
        v.sort_unstable();
        v
    }

    fn set(dim: usize, rows: &[&[i32]]) -> PointSet<i32> {
        PointSet::from_rows(dim, rows.iter().copied()).unwrap()
    }

    fn ceil_log2(n: usize) -> u32 {
        n.next_power_of_two().trailing_zeros()
    }

    /// `T_d(n)` evaluated on the power of two at or above `n`.
    fn t_bound(d: usize, n: usize) -> u64 {
        if d == 0 {
            0
        } else if n <= 1 {
            d as u64
        } else {
            let h = n.next_power_of_two() / 2;
            t_bound(d - 1, h) + t_bound(d, h) + 1
        }
    }

    #[test]
    fn empty_set_rejected() {
        let e: PointSet<i32> = PointSet::from_rows(2, Vec::<Vec<i32>>::new()).unwrap();
        assert!(matches!(DominanceTree::build(e), Err(Error::Empty(_))));
    }

    #[test]
    fn single_point_is_one_leaf() {
        let t = DominanceTree::build(set(1, &[&[5]])).unwrap();
        assert_eq!(t.build_stats().nodes(), 1);
        assert_eq!(t.query(&[5]).unwrap().0, vec![0]);
        assert!(t.query(&[4]).unwrap().0.is_empty());
    }

    #[test]
    fn two_dimensional_split() {
        let b = set(2, &[&[1, 2], &[3, 1], &[2, 4], &[4, 3]]);
        let t = DominanceTree::build(b.clone()).unwrap();
        // Sorted by the second coordinate: 1, 2, 3, 4 -> gamma is the third.
        match t.nodes[t.root as usize] {
            Node::Split { gamma, axis, .. } => {
                assert_eq!(axis, 1);
                assert!(gamma == 2 || gamma == 3);
            }
            _ => panic!("root should split"),
        }
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(sorted(t.query(&[x, y]).unwrap().0), scan(&b, &[x, y]));
            }
        }
    }

    #[test]
    fn query_examples() {
        let b = set(2, &[&[1, 5], &[2, 2], &[4, 1]]);
        let t = DominanceTree::build(b).unwrap();
        assert_eq!(t.query(&[3, 3]).unwrap().0, vec![1]);
        assert!(t.query(&[0, 0]).unwrap().0.is_empty());
        assert_eq!(sorted(t.query(&[10, 10]).unwrap().0), vec![0, 1, 2]);
        assert!(matches!(
            t.query(&[1]),
            Err(Error::DimensionMismatch { expected: 2, actual: 1 })
        ));
    }

    #[test]
    fn all_identical_points() {
        for d in 1..5 {
            let rows: Vec<Vec<i32>> = (0..13).map(|_| vec![3; d]).collect();
            let b = PointSet::from_rows(d, &rows).unwrap();
            let t = DominanceTree::build(b).unwrap();
            assert_eq!(t.query(&vec![3; d]).unwrap().0.len(), 13);
            let mut below = vec![3; d];
            below[d - 1] = 2;
            assert!(t.query(&below).unwrap().0.is_empty());
        }
    }

    #[test]
    fn zero_dimensional_set_reports_everything() {
        let b: PointSet<i32> = PointSet::from_flat(0, 4, vec![]).unwrap();
        let t = DominanceTree::build(b).unwrap();
        let (out, stats) = t.query(&[]).unwrap();
        assert_eq!(sorted(out), vec![0, 1, 2, 3]);
        assert_eq!(stats.visits, 0);
    }

    #[test]
    fn predicted_size_matches_small_cases() {
        let s = DominanceTree::<i32>::predicted_size(2, 3);
        assert_eq!((s.nodes, s.pool_entries, s.work), (1, 2, 2));
        // Root, a one-point and a two-point leaf, and a projected all-leaf.
        let s = DominanceTree::<i32>::predicted_size(3, 1);
        assert_eq!((s.nodes, s.pool_entries, s.work), (4, 4, 3 + 1 + 2 + 1));
        for (n, d) in [(2, 1), (4, 2), (100, 3), (1000, 6)] {
            let h = (n as usize).next_power_of_two().trailing_zeros();
            assert!(DominanceTree::<i32>::predicted_size(n, d).nodes <= 3u64.pow(h));
        }
    }

    proptest! {
        #[test]
        fn matches_scan_and_respects_bounds(
            d in 1usize..5,
            n in 1usize..80,
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let rows: Vec<Vec<i32>> = (0..n)
                .map(|_| (0..d).map(|_| rng.random_range(0..8)).collect())
                .collect();
            let b = PointSet::from_rows(d, &rows).unwrap();
            let t = DominanceTree::build(b.clone()).unwrap();
            let st = t.build_stats();
            let h = ceil_log2(n);
            prop_assert!(st.height <= h);
            prop_assert!(st.nodes() <= 3u64.pow(h));
            let bound = 3.0 * (n as f64).powf(3f64.log2());
            prop_assert!((st.work as f64) <= bound);
            prop_assert_eq!(st.work, DominanceTree::<i32>::predicted_size(n, d).work);
            for _ in 0..20 {
                let p: Vec<i32> = (0..d).map(|_| rng.random_range(-1..9)).collect();
                let (out, qs) = t.query(&p).unwrap();
                prop_assert_eq!(sorted(out), scan(&b, &p));
                prop_assert!(qs.visits <= t_bound(d, n));
                prop_assert!(qs.visits <= (d * n) as u64);
            }
        }
    }
}

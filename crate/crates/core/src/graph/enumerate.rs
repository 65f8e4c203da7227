use super::mis::{all_of_size, max_within};
use super::Graph;
use crate::bitset::VertexSet;
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Every independent set of size `α(G)`, sorted lexicographically.
pub fn enumerate_maximum_independent_sets(g: &Graph, cap: usize, budget: Budget) -> Result<Vec<VertexSet>> {
    let (alpha, _) = max_within(g, &VertexSet::full(g.n()), budget)?;
    all_of_size(g, alpha, cap, budget)
}

/// Every containment-maximal independent set of size at least `min_size`,
/// sorted lexicographically. Maximality is among loop-free vertices.
///
/// Bron–Kerbosch with Tomita pivoting, run on the non-adjacency relation.
pub fn enumerate_maximal_independent_sets(g: &Graph, min_size: usize, cap: usize) -> Result<Vec<VertexSet>> {
    let n = g.n();
    let allowed = g.loop_free_vertices();
    let open: Vec<VertexSet> = (0..n)
        .map(|v| {
            let mut row = allowed.difference(g.neighbors(v));
            row.remove(v);
            row
        })
        .collect();
    let mut out = Vec::new();
    let mut state = Bk { open: &open, min_size, cap, out: &mut out };
    state.run(VertexSet::empty(n), allowed, VertexSet::empty(n))?;
    out.sort();
    Ok(out)
}

struct Bk<'a> {
    open: &'a [VertexSet],
    min_size: usize,
    cap: usize,
    out: &'a mut Vec<VertexSet>,
}

impl Bk<'_> {
    fn run(&mut self, r: VertexSet, mut p: VertexSet, mut x: VertexSet) -> Result<()> {
        if p.is_empty() {
            if x.is_empty() && r.count() >= self.min_size {
                if self.out.len() >= self.cap {
                    return Err(Error::CapExceeded { cap: self.cap, found: self.out.len() });
                }
                self.out.push(r);
            }
            return Ok(());
        }
        if r.count() + p.count() < self.min_size {
            return Ok(());
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| (p.intersection_count(&self.open[u]), std::cmp::Reverse(u)))
            .expect("p is non-empty");
        let branch = p.difference(&self.open[pivot]);
        for v in branch.iter() {
            let mut r2 = r.clone();
            r2.insert(v);
            self.run(r2, p.intersection(&self.open[v]), x.intersection(&self.open[v]))?;
            p.remove(v);
            x.insert(v);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(v: &[VertexSet]) -> Vec<Vec<usize>> {
        v.iter().map(VertexSet::to_vec).collect()
    }

    #[test]
    fn maximal_sets_small() {
        let tri = Graph::complete(3).unwrap();
        assert_eq!(sets(&enumerate_maximal_independent_sets(&tri, 1, 100).unwrap()), vec![vec![0], vec![1], vec![2]]);
        let path = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(sets(&enumerate_maximal_independent_sets(&path, 1, 100).unwrap()), vec![vec![0, 2], vec![1]]);
        assert_eq!(sets(&enumerate_maximal_independent_sets(&path, 2, 100).unwrap()), vec![vec![0, 2]]);
    }

    #[test]
    fn maximum_sets_small() {
        let c5 = Graph::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let all = enumerate_maximum_independent_sets(&c5, 100, Budget::unlimited()).unwrap();
        assert_eq!(sets(&all), vec![vec![0, 2], vec![0, 3], vec![1, 3], vec![1, 4], vec![2, 4]]);
        let e3 = Graph::edgeless(3).unwrap();
        assert_eq!(
            sets(&enumerate_maximum_independent_sets(&e3, 100, Budget::unlimited()).unwrap()),
            vec![vec![0, 1, 2]]
        );
    }

    #[test]
    fn caps_are_enforced() {
        let c5 = Graph::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(
            enumerate_maximum_independent_sets(&c5, 3, Budget::unlimited()),
            Err(Error::CapExceeded { cap: 3, found: 3 })
        );
        assert!(matches!(enumerate_maximal_independent_sets(&c5, 1, 2), Err(Error::CapExceeded { cap: 2, .. })));
    }

    #[test]
    fn self_loops_never_appear() {
        let g = Graph::new(3, [(0, 0), (1, 2)]).unwrap();
        let maximal = enumerate_maximal_independent_sets(&g, 1, 10).unwrap();
        assert_eq!(sets(&maximal), vec![vec![1], vec![2]]);
        let g1 = Graph::new(1, [(0, 0)]).unwrap();
        assert_eq!(
            sets(&enumerate_maximum_independent_sets(&g1, 10, Budget::unlimited()).unwrap()),
            vec![Vec::<usize>::new()]
        );
    }
}

//! Undirected graphs on `0..n` with packed bit-vector adjacency rows.
//!
//! A vertex `v` is self-looped iff `v ∈ adj(v)`. Self-looped vertices never
//! belong to an independent set.

mod enumerate;
mod io;
mod mis;

pub use enumerate::{enumerate_maximal_independent_sets, enumerate_maximum_independent_sets};
pub use io::{parse_graph, parse_labels, write_graph, write_graph_with_labels};
pub use mis::{independence_number_within, max_independent_set, MisResult};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={})", self.n, self.edge_count())
    }
}

impl Graph {
    /// Builds a graph from an edge list. `(v, v)` declares a self-loop and
    /// duplicate edges collapse.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut g = Graph::edgeless(n)?;
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { index: x, n });
                }
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn edgeless(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(Graph { n, adj: vec![VertexSet::empty(n); n] })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::edgeless(n)?;
        for v in 0..n {
            let mut row = VertexSet::full(n);
            row.remove(v);
            g.adj[v] = row;
        }
        Ok(g)
    }

    /// Builds from precomputed rows. Callers guarantee symmetry; checked in
    /// debug builds.
    pub(crate) fn from_rows(adj: Vec<VertexSet>) -> Result<Self> {
        let n = adj.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let g = Graph { n, adj };
        debug_assert!(g.is_symmetric());
        Ok(g)
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn self_loop(&self, v: usize) -> bool {
        self.adj[v].contains(v)
    }

    /// Degree, counting a self-loop once.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    /// Vertices that may belong to some independent set.
    pub fn loop_free_vertices(&self) -> VertexSet {
        VertexSet::from_indices(self.n, (0..self.n).filter(|&v| !self.self_loop(v)))
    }

    /// Edges as `(u, v)` with `u <= v`, in row order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|u| self.adj[u].iter().filter(move |&v| v >= u).map(move |v| (u, v))).collect()
    }

    pub fn edge_count(&self) -> usize {
        let loops = (0..self.n).filter(|&v| self.self_loop(v)).count();
        let total: usize = self.adj.iter().map(VertexSet::count).sum();
        (total - loops) / 2 + loops
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| self.adj[u].iter().all(|v| self.adj[v].contains(u)))
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| !self.adj[v].intersects(set))
    }

    /// Subgraph induced on `set`, reindexed in increasing original order.
    ///
    /// The empty selection has no graph representation; callers needing
    /// `α(G[∅]) = 0` use [`independence_number_within`] instead.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<Graph> {
        let keep = set.to_vec();
        if keep.is_empty() {
            return Err(Error::EmptyGraph);
        }
        if let Some(&bad) = keep.iter().find(|&&v| v >= self.n) {
            return Err(Error::VertexOutOfRange { index: bad, n: self.n });
        }
        let rows = keep
            .iter()
            .map(|&u| {
                VertexSet::from_indices(
                    keep.len(),
                    keep.iter().enumerate().filter(|(_, &v)| self.adj[u].contains(v)).map(|(j, _)| j),
                )
            })
            .collect();
        Graph::from_rows(rows)
    }

    /// Disjoint union with `other` placed after `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        let mut rows = Vec::with_capacity(n);
        for row in &self.adj {
            rows.push(VertexSet::from_indices(n, row.iter()));
        }
        for row in &other.adj {
            rows.push(VertexSet::from_indices(n, row.iter().map(|v| v + self.n)));
        }
        Graph { n, adj: rows }
    }

    /// `copies` disjoint copies of `self`.
    pub fn repeat(&self, copies: usize) -> Graph {
        assert!(copies >= 1);
        let mut g = self.clone();
        for _ in 1..copies {
            g = g.disjoint_union(self);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn triangle_is_complete() {
        let g = triangle();
        assert!((0..3).all(|v| g.degree(v) == 2));
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g, Graph::complete(3).unwrap());
    }

    #[test]
    fn duplicates_collapse_and_symmetry_holds() {
        let g = Graph::new(3, [(0, 1), (1, 0), (0, 1), (2, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.is_symmetric());
        assert!(g.self_loop(2) && !g.self_loop(0));
        assert_eq!(g.edges(), vec![(0, 1), (2, 2)]);
    }

    #[test]
    fn out_of_range_rejected() {
        assert_eq!(Graph::new(2, [(0, 2)]), Err(Error::VertexOutOfRange { index: 2, n: 2 }));
        assert_eq!(Graph::new(0, []), Err(Error::EmptyGraph));
    }

    #[test]
    fn induced_subgraph_reindexes() {
        let g = triangle();
        let h = g.induced_subgraph(&VertexSet::from_indices(3, [0, 2])).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(h.edges(), vec![(0, 1)]);
        assert_eq!(g.induced_subgraph(&VertexSet::empty(3)), Err(Error::EmptyGraph));
    }

    #[test]
    fn induced_subgraph_keeps_self_loops() {
        let g = Graph::new(3, [(0, 0), (0, 1), (1, 2)]).unwrap();
        let h = g.induced_subgraph(&VertexSet::from_indices(3, [0, 2])).unwrap();
        assert!(h.self_loop(0));
        assert_eq!(h.edge_count(), 1);
    }
}

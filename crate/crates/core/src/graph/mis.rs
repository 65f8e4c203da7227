//! Exact maximum independent sets by branch-and-bound on the complement.
//!
//! An independent set of `G` is a clique of the complement, so the search is a
//! bit-parallel maximum-clique search (vertices packed into words, greedy
//! colouring of the candidate set as the upper bound, branching on candidates
//! in decreasing colour order). Vertex order and branching order are fixed, so
//! the witness is a function of the input alone.

use num_rational::BigRational;

use super::Graph;
use crate::bitset::VertexSet;
use crate::budget::{Budget, Meter};
use crate::error::{Error, Result};
use crate::ratio::ratio;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisResult {
    pub alpha: usize,
    pub witness: VertexSet,
    pub alpha_bar: BigRational,
}

pub fn max_independent_set(g: &Graph, budget: Budget) -> Result<MisResult> {
    let (alpha, witness) = max_within(g, &VertexSet::full(g.n()), budget)?;
    Ok(MisResult { alpha, witness, alpha_bar: ratio(alpha as u64, g.n() as u64) })
}

/// `α(G[cand])` and a witness, without a budget. Returns `(0, ∅)` for an empty
/// candidate set.
pub fn independence_number_within(g: &Graph, cand: &VertexSet) -> (usize, VertexSet) {
    max_within(g, cand, Budget::unlimited()).expect("unlimited budget cannot be exceeded")
}

pub(crate) fn max_within(g: &Graph, cand: &VertexSet, budget: Budget) -> Result<(usize, VertexSet)> {
    let local = Local::new(g, cand);
    if local.k == 0 {
        return Ok((0, VertexSet::empty(g.n())));
    }
    let meter = budget.meter();
    let mut search = Search::new(&local, &meter, Mode::Maximum);
    let root = local.all();
    let upper = local.colour_count(&root);
    // Greedy seed: the first colour class is an independent set of G.
    search.seed_greedy(&root);
    if !search.expand(&root) {
        return Err(Error::BudgetExceeded { lower: search.best, upper });
    }
    Ok((search.best, local.to_global(&search.best_set, g.n())))
}

/// All independent sets of `G` of size exactly `target`, sorted, or
/// `CapExceeded` once more than `cap` exist.
pub(crate) fn all_of_size(g: &Graph, target: usize, cap: usize, budget: Budget) -> Result<Vec<VertexSet>> {
    let local = Local::new(g, &VertexSet::full(g.n()));
    if target == 0 {
        return Ok(vec![VertexSet::empty(g.n())]);
    }
    let meter = budget.meter();
    let mut search = Search::new(&local, &meter, Mode::Exactly { target, cap });
    let root = local.all();
    let completed = search.expand(&root);
    if let Some(e) = search.overflow {
        return Err(e);
    }
    if !completed {
        return Err(Error::BudgetExceeded { lower: search.found.len(), upper: usize::MAX });
    }
    let mut sets: Vec<VertexSet> = search.found.iter().map(|s| local.to_global(s, g.n())).collect();
    sets.sort();
    sets.dedup();
    Ok(sets)
}

struct Local {
    k: usize,
    words: usize,
    map: Vec<usize>,
    /// Row-major `k × words`: bit `j` of row `i` set iff `i ≠ j` and the two
    /// vertices are non-adjacent in `G`.
    nb: Vec<u64>,
}

impl Local {
    fn new(g: &Graph, cand: &VertexSet) -> Self {
        let allowed = cand.intersection(&g.loop_free_vertices());
        let mut map: Vec<usize> = allowed.to_vec();
        // High G-degree last: those vertices have few complement neighbours and
        // are coloured late.
        let deg: Vec<usize> = (0..g.n())
            .map(|v| if allowed.contains(v) { g.neighbors(v).intersection_count(&allowed) } else { 0 })
            .collect();
        map.sort_by_key(|&v| (deg[v], v));
        let k = map.len();
        let words = k.div_ceil(64).max(1);
        let mut nb = vec![0u64; k * words];
        for i in 0..k {
            let row = g.neighbors(map[i]);
            for j in 0..k {
                if i != j && !row.contains(map[j]) {
                    nb[i * words + (j >> 6)] |= 1 << (j & 63);
                }
            }
        }
        Local { k, words, map, nb }
    }

    fn all(&self) -> Vec<u64> {
        let mut p = vec![0u64; self.words];
        for i in 0..self.k {
            p[i >> 6] |= 1 << (i & 63);
        }
        p
    }

    #[inline]
    fn row(&self, v: usize) -> &[u64] {
        &self.nb[v * self.words..(v + 1) * self.words]
    }

    fn colour_count(&self, p: &[u64]) -> usize {
        let mut order = Vec::new();
        self.colour_sort(p, 1, &mut order);
        order.last().map_or(0, |&(_, c)| c)
    }

    /// Greedy sequential colouring of `p` in vertex order. Pushes `(v, colour)`
    /// for every vertex whose colour is at least `kmin`, in non-decreasing
    /// colour order.
    fn colour_sort(&self, p: &[u64], kmin: usize, order: &mut Vec<(usize, usize)>) {
        let mut uncoloured = p.to_vec();
        let mut q = vec![0u64; self.words];
        let mut colour = 0;
        while uncoloured.iter().any(|&w| w != 0) {
            colour += 1;
            q.copy_from_slice(&uncoloured);
            while let Some(v) = first_bit(&q) {
                uncoloured[v >> 6] &= !(1 << (v & 63));
                q[v >> 6] &= !(1 << (v & 63));
                for (qw, nw) in q.iter_mut().zip(self.row(v)) {
                    *qw &= !nw;
                }
                if colour >= kmin {
                    order.push((v, colour));
                }
            }
        }
    }

    fn to_global(&self, set: &[usize], n: usize) -> VertexSet {
        VertexSet::from_indices(n, set.iter().map(|&i| self.map[i]))
    }
}

#[inline]
fn first_bit(words: &[u64]) -> Option<usize> {
    words.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
}

enum Mode {
    Maximum,
    Exactly { target: usize, cap: usize },
}

struct Search<'a> {
    local: &'a Local,
    meter: &'a Meter,
    mode: Mode,
    current: Vec<usize>,
    best: usize,
    best_set: Vec<usize>,
    found: Vec<Vec<usize>>,
    overflow: Option<Error>,
}

impl<'a> Search<'a> {
    fn new(local: &'a Local, meter: &'a Meter, mode: Mode) -> Self {
        Search {
            local,
            meter,
            mode,
            current: Vec::new(),
            best: 0,
            best_set: Vec::new(),
            found: Vec::new(),
            overflow: None,
        }
    }

    fn seed_greedy(&mut self, p: &[u64]) {
        let mut q = p.to_vec();
        let mut set = Vec::new();
        while let Some(v) = first_bit(&q) {
            set.push(v);
            q[v >> 6] &= !(1 << (v & 63));
            for (qw, nw) in q.iter_mut().zip(self.local.row(v)) {
                *qw &= nw;
            }
        }
        self.best = set.len();
        self.best_set = set;
    }

    /// Returns `false` when the search was cut short (budget or cap).
    fn expand(&mut self, p: &[u64]) -> bool {
        if !self.meter.tick() {
            return false;
        }
        let size = self.current.len();
        let kmin = match self.mode {
            // Colours c with size + c <= best cannot improve.
            Mode::Maximum => (self.best + 1).saturating_sub(size).max(1),
            // Colours c with size + c < target cannot reach it.
            Mode::Exactly { target, .. } => target.saturating_sub(size).max(1),
        };
        let mut order = Vec::new();
        self.local.colour_sort(p, kmin, &mut order);
        let mut p = p.to_vec();
        let mut child = vec![0u64; self.local.words];
        for &(v, colour) in order.iter().rev() {
            match self.mode {
                Mode::Maximum if size + colour <= self.best => return true,
                Mode::Exactly { target, .. } if size + colour < target => return true,
                _ => {}
            }
            let mut any = false;
            for ((c, pw), nw) in child.iter_mut().zip(&p).zip(self.local.row(v)) {
                *c = pw & nw;
                any |= *c != 0;
            }
            self.current.push(v);
            match self.mode {
                Mode::Maximum => {
                    if !any {
                        if self.current.len() > self.best {
                            self.best = self.current.len();
                            self.best_set = self.current.clone();
                        }
                    } else if !self.expand(&child) {
                        return false;
                    }
                }
                Mode::Exactly { target, cap } => {
                    if self.current.len() == target {
                        if self.found.len() >= cap {
                            self.overflow = Some(Error::CapExceeded { cap, found: self.found.len() });
                            return false;
                        }
                        self.found.push(self.current.clone());
                    } else if any && !self.expand(&child) {
                        return false;
                    }
                }
            }
            self.current.pop();
            p[v >> 6] &= !(1 << (v & 63));
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn small_cases() {
        let tri = Graph::complete(3).unwrap();
        assert_eq!(max_independent_set(&tri, Budget::unlimited()).unwrap().alpha, 1);
        let empty = Graph::edgeless(2).unwrap();
        let r = max_independent_set(&empty, Budget::unlimited()).unwrap();
        assert_eq!(r.alpha, 2);
        assert_eq!(r.alpha_bar, ratio(1, 1));
        let looped = Graph::new(1, [(0, 0)]).unwrap();
        let r = max_independent_set(&looped, Budget::unlimited()).unwrap();
        assert_eq!(r.alpha, 0);
        assert!(r.witness.is_empty());
        assert_eq!(max_independent_set(&cycle(5), Budget::unlimited()).unwrap().alpha, 2);
        assert_eq!(max_independent_set(&cycle(8), Budget::unlimited()).unwrap().alpha, 4);
    }

    #[test]
    fn restricted_candidates() {
        let g = cycle(6);
        let (a, w) = independence_number_within(&g, &VertexSet::from_indices(6, [0, 1, 2]));
        assert_eq!(a, 2);
        assert_eq!(w.to_vec(), vec![0, 2]);
        assert_eq!(independence_number_within(&g, &VertexSet::empty(6)).0, 0);
    }

    #[test]
    fn budget_exceeded_reports_bounds() {
        let g = cycle(61);
        match max_independent_set(&g, Budget::nodes(1)) {
            Err(Error::BudgetExceeded { lower, upper }) => {
                assert!(lower <= 30 && upper >= 30, "{lower} {upper}");
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn witness_is_deterministic() {
        let g = cycle(9);
        let a = max_independent_set(&g, Budget::unlimited()).unwrap();
        let b = max_independent_set(&g, Budget::unlimited()).unwrap();
        assert_eq!(a, b);
        assert!(g.is_independent(&a.witness));
        assert_eq!(a.witness.count(), a.alpha);
    }
}

//! Minimum hitting sets, mainly for the maximum independent sets of a graph.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::bitset::VertexSet;
use crate::budget::{Budget, Meter};
use crate::error::{Error, Result};
use crate::graph::{
    enumerate_maximal_independent_sets, enumerate_maximum_independent_sets, max_independent_set, Graph,
};
use crate::par::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSetResult {
    pub h: usize,
    pub witness: VertexSet,
    pub num_targets: usize,
    /// Size of a pairwise disjoint sub-collection; `h` is at least this.
    pub lower_bound_cert: usize,
    /// `false` when the budget ran out and `witness` is only an upper bound.
    pub exact: bool,
}

/// Repeatedly takes the element hitting the most unhit sets, least index on
/// ties.
pub fn greedy_hitting(sets: &[VertexSet], universe: usize) -> VertexSet {
    let mut chosen = VertexSet::empty(universe);
    let mut unhit: Vec<&VertexSet> = sets.iter().filter(|s| !s.is_empty()).collect();
    while !unhit.is_empty() {
        let mut counts = vec![0usize; universe];
        for s in &unhit {
            for v in s.iter() {
                counts[v] += 1;
            }
        }
        let best = (0..universe).max_by_key(|&v| (counts[v], std::cmp::Reverse(v))).expect("non-empty universe");
        chosen.insert(best);
        unhit.retain(|s| !s.contains(best));
    }
    chosen
}

/// Greedy packing of pairwise disjoint sets, smallest first.
pub fn disjoint_packing(sets: &[&VertexSet], universe: usize) -> usize {
    let mut order: Vec<&VertexSet> = sets.to_vec();
    order.sort_by_key(|s| s.count());
    let mut used = VertexSet::empty(universe);
    let mut count = 0;
    for s in order {
        if !s.intersects(&used) {
            used.union_with(s);
            count += 1;
        }
    }
    count
}

struct Search<'a> {
    sets: &'a [VertexSet],
    universe: usize,
    incumbent: &'a AtomicUsize,
    meter: &'a Meter,
}

impl Search<'_> {
    /// Best hitting set extending `chosen` that avoids `excluded`; only
    /// solutions no larger than the incumbent are recorded, so every branch
    /// containing an optimum reaches the same first optimum in its own order.
    fn run(&self, chosen: &mut VertexSet, excluded: &VertexSet, local: &mut Option<VertexSet>) -> bool {
        if !self.meter.tick() {
            return false;
        }
        let mut unhit: Vec<VertexSet> = Vec::new();
        for s in self.sets {
            if !s.intersects(chosen) {
                let open = s.difference(excluded);
                if open.is_empty() {
                    return true;
                }
                unhit.push(open);
            }
        }
        let size = chosen.count();
        let bound = self.incumbent.load(Ordering::Relaxed).min(local.as_ref().map_or(usize::MAX, VertexSet::count));
        if unhit.is_empty() {
            if local.as_ref().is_none_or(|w| size < w.count()) && size <= bound {
                *local = Some(chosen.clone());
                self.incumbent.fetch_min(size, Ordering::Relaxed);
            }
            return true;
        }
        let refs: Vec<&VertexSet> = unhit.iter().collect();
        if size + disjoint_packing(&refs, self.universe) > bound {
            return true;
        }
        let pivot = unhit.iter().min_by_key(|s| s.count()).expect("unhit is non-empty").clone();
        let mut excluded = excluded.clone();
        for v in pivot.iter() {
            chosen.insert(v);
            let completed = self.run(chosen, &excluded, local);
            chosen.remove(v);
            if !completed {
                return false;
            }
            excluded.insert(v);
        }
        true
    }
}

/// Exact minimum hitting set by branch and bound.
///
/// Branches on the elements of a smallest unhit set, pruning with a greedy
/// disjoint packing of the remaining sets. Root branches run in parallel; the
/// smallest witness from the lowest branch wins. When the budget runs out the
/// best set found so far (at worst the greedy one) is returned with
/// `exact == false`.
pub fn min_hitting_set(sets: &[VertexSet], universe: usize, budget: Budget) -> Result<HittingSetResult> {
    if sets.is_empty() {
        return Err(Error::InvalidParameter("hitting set needs at least one target".into()));
    }
    if sets.iter().any(|s| s.len() != universe) {
        return Err(Error::InvalidParameter("target sets must share the universe size".into()));
    }
    if sets.iter().any(VertexSet::is_empty) {
        return Err(Error::InvalidParameter("an empty target cannot be hit".into()));
    }
    let greedy = greedy_hitting(sets, universe);
    let refs: Vec<&VertexSet> = sets.iter().collect();
    let lower_bound_cert = disjoint_packing(&refs, universe);
    let incumbent = AtomicUsize::new(greedy.count());
    let meter = budget.meter();
    let search = Search { sets, universe, incumbent: &incumbent, meter: &meter };
    let pivot = sets.iter().min_by_key(|s| s.count()).expect("non-empty").to_vec();
    let branches: Vec<(bool, Option<VertexSet>)> = (0..pivot.len())
        .into_par_iter()
        .map(|b| {
            let excluded = VertexSet::from_indices(universe, pivot[..b].iter().copied());
            let mut chosen = VertexSet::from_indices(universe, [pivot[b]]);
            let mut local = None;
            let completed = search.run(&mut chosen, &excluded, &mut local);
            (completed, local)
        })
        .collect();
    let exact = branches.iter().all(|(c, _)| *c);
    let mut witness = greedy;
    for found in branches.into_iter().filter_map(|(_, w)| w) {
        if found.count() < witness.count() {
            witness = found;
        }
    }
    debug_assert!(sets.iter().all(|s| s.intersects(&witness)));
    if !sets.iter().all(|s| s.intersects(&witness)) {
        return Err(Error::InvalidParameter("internal: witness misses a target".into()));
    }
    Ok(HittingSetResult { h: witness.count(), witness, num_targets: sets.len(), lower_bound_cert, exact })
}

/// Minimum number of vertices meeting every maximum independent set, or with
/// `threshold = Some(ε)`, every maximal independent set of size at least
/// `(ᾱ − ε)n`.
pub fn h_of_graph(g: &Graph, cap: usize, budget: Budget, threshold: Option<&BigRational>) -> Result<HittingSetResult> {
    let targets = match threshold {
        None => enumerate_maximum_independent_sets(g, cap, budget)?,
        Some(eps) => {
            if eps.is_negative() {
                return Err(Error::InvalidParameter("threshold must be non-negative".into()));
            }
            let alpha = max_independent_set(g, budget)?.alpha;
            let slack = (eps * BigRational::from_integer(BigInt::from(g.n()))).floor().to_integer();
            let min_size = BigInt::from(alpha) - slack;
            let min_size = if min_size.is_positive() { min_size.to_usize().unwrap_or(0) } else { 0 };
            enumerate_maximal_independent_sets(g, min_size.max(1), cap)?
        }
    };
    min_hitting_set(&targets, g.n(), budget)
}

/// Hamming distance on `m`-bit words.
fn distance(a: u32, b: u32) -> u32 {
    (a ^ b).count_ones()
}

/// Whether every `m`-bit word lies within `radius` of some codeword.
pub fn covering_code_check(m: usize, radius: usize, code: &[u32]) -> Result<bool> {
    if m > 24 {
        return Err(Error::Guard { what: "covering code words", size: 1u128 << m, limit: 1 << 24 });
    }
    if let Some(&w) = code.iter().find(|&&w| (w as u64) >> m != 0) {
        return Err(Error::InvalidParameter(format!("codeword {w} has more than {m} bits")));
    }
    let all: Vec<u32> = (0..1u32 << m).collect();
    let covered =
        all.into_par_iter().map(|x| code.iter().any(|&c| distance(x, c) as usize <= radius)).collect::<Vec<bool>>();
    Ok(covered.into_iter().all(|c| c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cayley_distance_graph, shift_graph, shift_pairs, DEFAULT_SIZE_LIMIT};

    fn sets(universe: usize, raw: &[&[usize]]) -> Vec<VertexSet> {
        raw.iter().map(|s| VertexSet::from_indices(universe, s.iter().copied())).collect()
    }

    fn c5_targets() -> Vec<VertexSet> {
        sets(5, &[&[0, 2], &[0, 3], &[1, 3], &[1, 4], &[2, 4]])
    }

    fn brute_force(targets: &[VertexSet], universe: usize) -> usize {
        (0..1u64 << universe)
            .filter(|mask| {
                let s = VertexSet::from_indices(universe, (0..universe).filter(|v| mask >> v & 1 == 1));
                targets.iter().all(|t| t.intersects(&s))
            })
            .map(|mask| mask.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn small_collections() {
        let r = min_hitting_set(&sets(2, &[&[0], &[1]]), 2, Budget::unlimited()).unwrap();
        assert_eq!((r.h, r.lower_bound_cert, r.exact), (2, 2, true));
        let r = min_hitting_set(&sets(4, &[&[1, 2, 3]]), 4, Budget::unlimited()).unwrap();
        assert_eq!(r.h, 1);
        let r = min_hitting_set(&c5_targets(), 5, Budget::unlimited()).unwrap();
        assert_eq!(r.h, 3);
        assert_eq!(r.witness.to_vec(), vec![0, 1, 2]);
        assert!(min_hitting_set(&[], 3, Budget::unlimited()).is_err());
        assert!(min_hitting_set(&sets(3, &[&[]]), 3, Budget::unlimited()).is_err());
    }

    #[test]
    fn greedy_bounds() {
        let g = greedy_hitting(&c5_targets(), 5);
        assert!((3..=4).contains(&g.count()));
        assert_eq!(greedy_hitting(&sets(4, &[&[2, 3]]), 4).count(), 1);
        let chain = sets(5, &[&[3], &[1, 3], &[1, 2, 3], &[0, 1, 2, 3, 4]]);
        assert_eq!(greedy_hitting(&chain, 5).to_vec(), vec![3]);
    }

    #[test]
    fn budget_returns_greedy_bound() {
        let r = min_hitting_set(&c5_targets(), 5, Budget::nodes(1)).unwrap();
        assert!(!r.exact);
        assert!(r.h >= 3 && c5_targets().iter().all(|t| t.intersects(&r.witness)));
    }

    #[test]
    fn matches_brute_force_on_random_collections() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let universe = rng.random_range(3..11);
            let count = rng.random_range(1..9);
            let targets: Vec<VertexSet> = (0..count)
                .map(|_| {
                    let mut s = VertexSet::from_indices(universe, (0..universe).filter(|_| rng.random_bool(0.35)));
                    if s.is_empty() {
                        s.insert(rng.random_range(0..universe));
                    }
                    s
                })
                .collect();
            let r = min_hitting_set(&targets, universe, Budget::unlimited()).unwrap();
            assert_eq!(r.h, brute_force(&targets, universe));
            assert!(r.h >= r.lower_bound_cert);
            let again = with_threads(1, || min_hitting_set(&targets, universe, Budget::unlimited()).unwrap());
            assert_eq!(again, r);
        }
    }

    #[test]
    fn shift_graphs() {
        for k in 1..=3usize {
            let g = shift_graph(k, DEFAULT_SIZE_LIMIT).unwrap();
            let r = h_of_graph(&g, 10_000, Budget::unlimited(), None).unwrap();
            assert_eq!(r.num_targets as u64, num_integer::binomial(2 * k as u64, k as u64));
            assert_eq!(r.h, k + 1);
        }
        // The arcs of a directed 4-cycle on {1,2,3,4} hit every optimum of G_3.
        let g = shift_graph(3, DEFAULT_SIZE_LIMIT).unwrap();
        let pairs = shift_pairs(3);
        let cycle = [(1, 2), (2, 3), (3, 4), (4, 1)];
        let hit = VertexSet::from_indices(g.n(), cycle.iter().map(|p| pairs.iter().position(|q| q == p).unwrap()));
        let targets = enumerate_maximum_independent_sets(&g, 100, Budget::unlimited()).unwrap();
        assert!(targets.iter().all(|t| t.intersects(&hit)));
    }

    #[test]
    fn cayley_and_covering_codes() {
        let g = cayley_distance_graph(4, 1, DEFAULT_SIZE_LIMIT).unwrap();
        let r = h_of_graph(&g, 1000, Budget::unlimited(), None).unwrap();
        assert_eq!(r.num_targets, 16);
        let code: Vec<u32> = r.witness.iter().map(|v| v as u32).collect();
        assert!(covering_code_check(4, 1, &code).unwrap());
        assert_eq!(r.h, 4);
        assert!(r.h >= 2);
        assert!(covering_code_check(4, 4, &[0]).unwrap());
        assert!(!covering_code_check(4, 0, &[0]).unwrap());
        assert!(covering_code_check(4, 1, &[16]).is_err());
        // No three words cover {0,1}^4 at radius 1.
        for a in 0..16u32 {
            for b in a..16 {
                for c in b..16 {
                    assert!(!covering_code_check(4, 1, &[a, b, c]).unwrap());
                }
            }
        }
    }

    #[test]
    fn threshold_targets_include_maximum_sets() {
        let c5 = Graph::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let zero = BigRational::from_integer(0.into());
        assert_eq!(h_of_graph(&c5, 100, Budget::unlimited(), Some(&zero)).unwrap().h, 3);
        let path = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let plain = h_of_graph(&path, 100, Budget::unlimited(), None).unwrap();
        let loose = h_of_graph(&path, 100, Budget::unlimited(), Some(&crate::ratio::ratio(1, 4))).unwrap();
        assert!(loose.num_targets >= plain.num_targets && loose.h >= plain.h);
    }
}

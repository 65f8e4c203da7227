use hatlab::constructions::{
    cayley_distance_graph, hamming_power, hamming_product, kneser_hypercube, random_gnp, shift_graph, shift_pairs,
    ProductIndex, DEFAULT_SIZE_LIMIT,
};
use hatlab::graph::{enumerate_maximum_independent_sets, max_independent_set};
use hatlab::{Budget, Graph, VertexSet};
use proptest::prelude::*;

fn fibers_are_copies(g: &Graph, t: usize) {
    let power = hamming_power(g, t, 1 << 16).unwrap();
    let index = ProductIndex::new(vec![g.n(); t]).unwrap();
    for flat in 0..power.n() {
        let base = index.decode(flat);
        for i in 0..t {
            let fiber = VertexSet::from_indices(
                power.n(),
                (0..g.n()).map(|x| {
                    let mut c = base.clone();
                    c[i] = x;
                    index.encode(&c)
                }),
            );
            let f = power.induced_subgraph(&fiber).unwrap();
            // A looped coordinate elsewhere loops the whole fiber; other edges are exactly G's.
            let looped_elsewhere = (0..t).any(|j| j != i && g.self_loop(base[j]));
            for x in 0..g.n() {
                assert_eq!(f.self_loop(x), g.self_loop(x) || looped_elsewhere, "fiber {i} through {base:?}");
                for y in (0..g.n()).filter(|&y| y != x) {
                    assert_eq!(f.has_edge(x, y), g.has_edge(x, y), "fiber {i} through {base:?}");
                }
            }
        }
    }
}

#[test]
fn fibers_of_kneser_powers() {
    fibers_are_copies(&kneser_hypercube(2).unwrap(), 3);
    fibers_are_copies(&kneser_hypercube(3).unwrap(), 2);
    fibers_are_copies(&shift_graph(2, DEFAULT_SIZE_LIMIT).unwrap(), 2);
}

#[test]
fn product_is_associative_as_flat_indices() {
    let a = kneser_hypercube(1).unwrap();
    let b = random_gnp(3, 0.5, 2).unwrap();
    let c = kneser_hypercube(2).unwrap();
    let left = hamming_product(&hamming_product(&a, &b, 1024).unwrap(), &c, 1024).unwrap();
    let right = hamming_product(&a, &hamming_product(&b, &c, 1024).unwrap(), 1024).unwrap();
    assert_eq!(left, right);
}

#[test]
fn kneser_powers_are_non_increasing() {
    for (n, t_max) in [(1usize, 4usize), (2, 3), (3, 2)] {
        let k = kneser_hypercube(n).unwrap();
        let ratios: Vec<_> = (1..=t_max)
            .map(|t| {
                max_independent_set(&hamming_power(&k, t, 1 << 12).unwrap(), Budget::unlimited()).unwrap().alpha_bar
            })
            .collect();
        assert!(ratios.windows(2).all(|w| w[1] <= w[0]), "K({n}): {ratios:?}");
    }
}

#[test]
fn shift_graph_optima_are_split_products() {
    for k in 1..=3usize {
        let g = shift_graph(k, DEFAULT_SIZE_LIMIT).unwrap();
        let pairs = shift_pairs(k);
        let optima = enumerate_maximum_independent_sets(&g, 1000, Budget::unlimited()).unwrap();
        assert_eq!(optima.len() as u64, num_integer::binomial(2 * k as u64, k as u64));
        for set in &optima {
            let s: Vec<usize> = set.iter().map(|v| pairs[v].0).collect();
            let t: Vec<usize> = set.iter().map(|v| pairs[v].1).collect();
            let (mut s, mut t) = (s, t);
            s.sort_unstable();
            s.dedup();
            t.sort_unstable();
            t.dedup();
            assert_eq!((s.len(), t.len()), (k, k));
            assert!(s.iter().all(|x| !t.contains(x)));
            assert_eq!(set.count(), k * k);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cayley_adjacency_is_translation_invariant(case in prop_oneof![Just((4usize, 1usize)), Just((6, 1)), Just((8, 1)), Just((10, 1))], shift in any::<u32>()) {
        let (m, t) = case;
        let g = cayley_distance_graph(m, t, DEFAULT_SIZE_LIMIT).unwrap();
        let s = (shift as usize) & ((1 << m) - 1);
        for u in 0..g.n() {
            for v in 0..g.n() {
                prop_assert_eq!(g.has_edge(u, v), g.has_edge(u ^ s, v ^ s));
            }
        }
    }

    #[test]
    fn gnp_is_a_function_of_its_seed(n in 1usize..40, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = random_gnp(n, p, seed).unwrap();
        prop_assert_eq!(&g, &random_gnp(n, p, seed).unwrap());
        prop_assert!((0..n).all(|v| !g.self_loop(v)));
        prop_assert!(g.is_symmetric());
    }
}

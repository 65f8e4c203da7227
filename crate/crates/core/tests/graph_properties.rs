use hatlab::graph::{
    enumerate_maximal_independent_sets, enumerate_maximum_independent_sets, max_independent_set, parse_graph,
    write_graph,
};
use hatlab::{Budget, Graph, VertexSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn independent_mask(rows: &[u64], mask: u64) -> bool {
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros();
        rest &= rest - 1;
        if rows[v as usize] & mask != 0 {
            return false;
        }
    }
    true
}

fn rows(g: &Graph) -> Vec<u64> {
    (0..g.n()).map(|v| g.neighbors(v).mask()).collect()
}

fn brute_alpha(g: &Graph) -> usize {
    let r = rows(g);
    (0..1u64 << g.n()).filter(|&m| independent_mask(&r, m)).map(|m| m.count_ones() as usize).max().unwrap()
}

fn to_set(n: usize, mask: u64) -> VertexSet {
    VertexSet::from_indices(n, (0..n).filter(|v| mask >> v & 1 == 1))
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..=2 * n * n / 3).prop_map(move |edges| Graph::new(n, edges).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn mis_matches_brute_force(g in arb_graph(14)) {
        let r = max_independent_set(&g, Budget::unlimited()).unwrap();
        prop_assert_eq!(r.alpha, brute_alpha(&g));
        prop_assert!(g.is_independent(&r.witness));
        prop_assert_eq!(r.witness.count(), r.alpha);
    }

    #[test]
    fn maximum_sets_match_brute_force(g in arb_graph(11)) {
        let r = rows(&g);
        let alpha = brute_alpha(&g);
        let mut expected: Vec<VertexSet> = (0..1u64 << g.n())
            .filter(|&m| m.count_ones() as usize == alpha && independent_mask(&r, m))
            .map(|m| to_set(g.n(), m))
            .collect();
        expected.sort();
        let found = enumerate_maximum_independent_sets(&g, 1 << 12, Budget::unlimited()).unwrap();
        prop_assert_eq!(&found, &expected);
        let witness = max_independent_set(&g, Budget::unlimited()).unwrap().witness;
        prop_assert!(found.contains(&witness));
    }

    #[test]
    fn maximal_sets_match_brute_force(g in arb_graph(10)) {
        let r = rows(&g);
        let loop_free: u64 = (0..g.n()).filter(|&v| !g.self_loop(v)).fold(0, |m, v| m | 1 << v);
        let mut expected: Vec<VertexSet> = (0..1u64 << g.n())
            .filter(|&m| independent_mask(&r, m))
            .filter(|&m| (0..g.n()).all(|v| m >> v & 1 == 1 || loop_free >> v & 1 == 0 || !independent_mask(&r, m | 1 << v)))
            .map(|m| to_set(g.n(), m))
            .collect();
        expected.sort();
        let found = enumerate_maximal_independent_sets(&g, 0, 1 << 12).unwrap();
        prop_assert_eq!(found, expected);
    }

    #[test]
    fn induced_subgraphs_never_gain(g in arb_graph(14), mask in any::<u64>()) {
        let s = to_set(g.n(), mask & ((1u64 << g.n()) - 1));
        let whole = max_independent_set(&g, Budget::unlimited()).unwrap().alpha;
        if !s.is_empty() {
            let sub = g.induced_subgraph(&s).unwrap();
            prop_assert!(max_independent_set(&sub, Budget::unlimited()).unwrap().alpha <= whole);
        }
    }

    #[test]
    fn self_loops_never_returned(g in arb_graph(12)) {
        let loops = VertexSet::from_indices(g.n(), (0..g.n()).filter(|&v| g.self_loop(v)));
        let w = max_independent_set(&g, Budget::unlimited()).unwrap().witness;
        prop_assert!(!w.intersects(&loops));
        for s in enumerate_maximal_independent_sets(&g, 0, 1 << 12).unwrap() {
            prop_assert!(!s.intersects(&loops));
        }
    }

    #[test]
    fn text_format_round_trips(g in arb_graph(20)) {
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }
}

#[test]
fn mis_matches_brute_force_up_to_twenty_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for n in 15..=20 {
        for _ in 0..2 {
            let p = rng.random_range(0.1..0.6);
            let edges: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.random_bool(p)).collect();
            let g = Graph::new(n, edges).unwrap();
            assert_eq!(max_independent_set(&g, Budget::unlimited()).unwrap().alpha, brute_alpha(&g), "n={n}");
        }
    }
}

use hatlab::blockers::lemma_bound;
use hatlab::constructions::kneser_hypercube;
use hatlab::hat_game::{
    best_response, check_positive_correlation, coordinate_ascent, count_winning, exact_value_one_player,
    exact_value_two_players, nested_lower_bound, r_v_distribution, winning_family, winning_set_of_strategy, FamilyKind,
    Strategy, WinningFamily, DEFAULT_TABLE_BUDGET,
};
use hatlab::random_subgraphs::{partition_bound_eval, partition_from_table, Sampler};
use hatlab::ratio::{dyadic, ratio};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KINDS: [FamilyKind; 3] = [FamilyKind::Dictator, FamilyKind::Intersecting, FamilyKind::Monotone];

fn random_strategy(rng: &mut ChaCha8Rng, family: &WinningFamily, t: usize) -> Strategy {
    let views = 1usize << (family.n() * (t - 1));
    let tables = (0..t).map(|_| (0..views).map(|_| rng.random_range(0..family.len() as u32)).collect()).collect();
    Strategy { t, n: family.n(), tables }
}

/// Plays every tuple directly: player `i` sees the other words, major-first.
fn simulate(family: &WinningFamily, s: &Strategy) -> u64 {
    let (t, n) = (s.t, s.n);
    let points = 1usize << n;
    let mut coords = vec![0usize; t];
    let mut wins = 0;
    loop {
        let all_right = (0..t).all(|i| {
            let view = (0..t).filter(|&j| j != i).fold(0usize, |acc, j| acc * points + coords[j]);
            family.contains(s.tables[i][view] as usize, coords[i])
        });
        wins += all_right as u64;
        let mut k = t;
        loop {
            if k == 0 {
                return wins;
            }
            k -= 1;
            coords[k] += 1;
            if coords[k] < points {
                break;
            }
            coords[k] = 0;
        }
    }
}

fn exact2(kind: FamilyKind, n: usize) -> BigRational {
    exact_value_two_players(&winning_family(kind, n).unwrap(), DEFAULT_TABLE_BUDGET).unwrap().value
}

#[test]
fn winning_sets_match_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for kind in KINDS {
        for n in 1..=4usize {
            let family = winning_family(kind, n).unwrap();
            for t in 1..=4usize {
                if n * t > 16 {
                    continue;
                }
                for _ in 0..3 {
                    let s = random_strategy(&mut rng, &family, t);
                    let wins = simulate(&family, &s);
                    let (set, measure) = winning_set_of_strategy(&family, &s).unwrap();
                    assert_eq!(set.count() as u64, wins, "{kind} n={n} t={t}");
                    assert_eq!(measure, dyadic(wins, (n * t) as u32));
                    assert_eq!(count_winning(&family, &s).unwrap(), wins);
                }
            }
        }
    }
}

#[test]
fn two_players_two_hats_against_all_strategy_pairs() {
    let family = winning_family(FamilyKind::Dictator, 2).unwrap();
    let table = |c: u32| (0..4).map(|v| c >> v & 1).collect::<Vec<u32>>();
    let best = (0..256u32)
        .map(|code| simulate(&family, &Strategy { t: 2, n: 2, tables: vec![table(code & 15), table(code >> 4)] }))
        .max()
        .unwrap();
    assert_eq!(exact2(FamilyKind::Dictator, 2), dyadic(best, 4));
}

#[test]
fn family_sandwich() {
    for n in 1..=4 {
        let values: Vec<_> =
            KINDS.iter().map(|&k| exact_value_one_player(&winning_family(k, n).unwrap()).value).collect();
        assert!(values.iter().all(|v| *v == ratio(1, 2)));
    }
    for n in 1..=3 {
        let (d, i, m) =
            (exact2(FamilyKind::Dictator, n), exact2(FamilyKind::Intersecting, n), exact2(FamilyKind::Monotone, n));
        assert!(d <= i && i <= m, "n={n}: {d} {i} {m}");
    }
}

#[test]
fn two_player_values_grow_with_hats() {
    let v: Vec<_> = (1..=3).map(|n| exact2(FamilyKind::Dictator, n)).collect();
    assert!(v.windows(2).all(|w| w[0] <= w[1]), "{v:?}");
    assert!(v.iter().all(|x| *x < ratio(1, 2)));
    let lemma = lemma_bound(&ratio(1, 2), &BigUint::from(2u8), &BigRational::one());
    assert!(v.iter().all(|x| *x <= lemma));
}

#[test]
fn best_response_dominates_every_table() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let family = winning_family(FamilyKind::Dictator, 2).unwrap();
    for _ in 0..10 {
        let g2: Vec<u32> = (0..4).map(|_| rng.random_range(0..2)).collect();
        let (table, value) = best_response(&family, &g2).unwrap();
        let replay = simulate(&family, &Strategy { t: 2, n: 2, tables: vec![table, g2.clone()] });
        assert_eq!(value, dyadic(replay, 4));
        let best = (0..16u32)
            .map(|c| {
                simulate(
                    &family,
                    &Strategy { t: 2, n: 2, tables: vec![(0..4).map(|v| c >> v & 1).collect(), g2.clone()] },
                )
            })
            .max()
            .unwrap();
        assert_eq!(value, dyadic(best, 4));
    }
}

#[test]
fn partition_bound_reproduces_best_response() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 2..=3 {
        let graph = kneser_hypercube(n).unwrap();
        for kind in [FamilyKind::Intersecting, FamilyKind::Dictator] {
            let family = winning_family(kind, n).unwrap();
            for _ in 0..6 {
                let g2: Vec<u32> = (0..1 << n).map(|_| rng.random_range(0..family.len() as u32)).collect();
                let (_, value) = best_response(&family, &g2).unwrap();
                let parts = partition_from_table(&g2, family.len());
                let bound = partition_bound_eval(&graph, &parts, Sampler::RV(&family), 0, 0).unwrap().value;
                // Independent sets of K(n) are the intersecting families, so the
                // bound is tight there and only an upper bound for dictators.
                if kind == FamilyKind::Intersecting {
                    assert_eq!(bound, value);
                } else {
                    assert!(value <= bound);
                }
            }
        }
    }
}

#[test]
fn three_player_bounds_sit_below_two_players() {
    assert_eq!(
        nested_lower_bound(&winning_family(FamilyKind::Dictator, 1).unwrap(), 3, 0, 2).unwrap().value,
        ratio(1, 8)
    );
    for kind in KINDS {
        for n in 1..=3 {
            let family = winning_family(kind, n).unwrap();
            let lower = nested_lower_bound(&family, 3, 5, 3).unwrap();
            assert!(lower.value <= exact2(kind, n), "{kind} n={n}");
            let replay = simulate(&family, lower.witness.as_ref().unwrap());
            assert_eq!(lower.value, dyadic(replay, (3 * n) as u32));
        }
    }
}

#[test]
fn ascent_never_decreases() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let family = winning_family(FamilyKind::Intersecting, 3).unwrap();
    for _ in 0..4 {
        let start = random_strategy(&mut rng, &family, 3);
        let before = simulate(&family, &start);
        let (end, history) = coordinate_ascent(&family, start).unwrap();
        assert!(history.windows(2).all(|w| w[0] <= w[1]));
        assert!(history.first().is_none_or(|&h| h >= before));
        assert_eq!(*history.last().unwrap(), simulate(&family, &end));
    }
}

#[test]
fn r_v_sets_and_correlation() {
    let d3 = winning_family(FamilyKind::Dictator, 3).unwrap();
    assert_eq!(r_v_distribution(&d3, 0b111), vec![0, 1, 2]);
    assert!(r_v_distribution(&d3, 0).is_empty());
    for kind in [FamilyKind::Intersecting, FamilyKind::Monotone] {
        let f = winning_family(kind, 3).unwrap();
        let r = f.len();
        for i in 0..r {
            let hits = (0..8).filter(|&v| r_v_distribution(&f, v).contains(&i)).count();
            assert_eq!(hits, 4);
            assert_eq!(check_positive_correlation(&f, &[], i).unwrap().0, ratio(1, 2));
            for a in 0..r {
                for b in a..r {
                    let (_, pass) = check_positive_correlation(&f, &[a, b], i).unwrap();
                    assert!(pass, "{kind} i={i} J={{{a},{b}}}");
                }
            }
        }
    }
    let d2 = winning_family(FamilyKind::Dictator, 2).unwrap();
    assert_eq!(check_positive_correlation(&d2, &[0], 1).unwrap(), (ratio(1, 2), true));
}

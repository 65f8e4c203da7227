//! The acceptance battery: thirteen checks with fixed parameters and seeds.
//!
//! Each check returns a [`CriterionReport`]; `detail` carries the computed
//! values so a failing line can be diagnosed without rerunning.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::One;

use crate::bitset::VertexSet;
use crate::blockers::{blocker_schedule, build_ell_tuples, build_level, lemma_bound, verify_blocker, TupleOptions};
use crate::budget::Budget;
use crate::constructions::{
    cayley_distance_graph, hamming_power, kneser_hypercube, random_gnp, shift_graph, DEFAULT_SIZE_LIMIT,
};
use crate::error::{Error, Result};
use crate::graph::{enumerate_maximum_independent_sets, max_independent_set, Graph};
use crate::hat_game::{
    exact_value_one_player, exact_value_two_players, nested_lower_bound, winning_family, FamilyKind, ValueMode,
    DEFAULT_TABLE_BUDGET,
};
use crate::hitting_sets::{covering_code_check, h_of_graph};
use crate::par::with_threads;
use crate::random_subgraphs::{
    alpha_star_star_exact, alpha_star_star_mc, epsilon_probe, hajnal_check, partition_bound_eval, probe_corpus,
    removal_trace, t16_margin, EstimateMode, Sampler,
};
use crate::ratio::{ratio, to_f64, to_string as rs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

pub const CRITERIA: [(u8, &str); 13] = [
    (1, "kneser baseline"),
    (2, "intersecting value equals power ratio"),
    (3, "monotonicity in players"),
    (4, "folklore bound"),
    (5, "strict monotonicity at desk scale"),
    (6, "blocker certification"),
    (7, "schedule exactness"),
    (8, "shift graph regression"),
    (9, "cayley distance graph"),
    (10, "hajnal property"),
    (11, "alpha** oracles"),
    (12, "alpha** margin"),
    (13, "determinism"),
];

/// Runs every criterion in order.
pub fn run_suite(tier: Tier) -> Vec<CriterionReport> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, tier)).collect()
}

/// Runs one criterion; an internal error is reported as a failure.
pub fn run_criterion(id: u8, tier: Tier) -> CriterionReport {
    let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1);
    let start = Instant::now();
    let outcome = match id {
        1 => kneser_baseline(),
        2 => intersecting_matches_power(),
        3 => monotonicity_in_players(tier),
        4 => folklore_bound(),
        5 => strict_monotonicity(),
        6 => blocker_certification(),
        7 => schedule_exactness(),
        8 => shift_regression(),
        9 => cayley_check(tier),
        10 => hajnal_property(tier),
        11 => alpha_star_star_oracles(tier),
        12 => alpha_star_star_margin(tier),
        13 => determinism(tier),
        _ => Err(Error::InvalidParameter(format!("no criterion {id}"))),
    };
    let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionReport { id, name, pass, detail, elapsed_ms: start.elapsed().as_millis() }
}

type Outcome = Result<(bool, String)>;

fn alpha_bar_of(g: &Graph, budget: Budget) -> Result<BigRational> {
    Ok(max_independent_set(g, budget)?.alpha_bar)
}

fn kneser_power(n: usize, t: usize) -> Result<Graph> {
    hamming_power(&kneser_hypercube(n)?, t, DEFAULT_SIZE_LIMIT)
}

fn kneser_baseline() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 2..=5 {
        let g = kneser_hypercube(n)?;
        let start = Instant::now();
        let alpha = max_independent_set(&g, Budget::unlimited())?.alpha;
        let took = start.elapsed();
        pass &= alpha == 1 << (n - 1) && took < Duration::from_secs(1);
        parts.push(format!("n={n} alpha={alpha} ({} us)", took.as_micros()));
    }
    Ok((pass, parts.join("; ")))
}

fn intersecting_matches_power() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 2..=3 {
        let family = winning_family(FamilyKind::Intersecting, n)?;
        let game = exact_value_two_players(&family, DEFAULT_TABLE_BUDGET)?;
        let graph = alpha_bar_of(&kneser_power(n, 2)?, Budget::unlimited())?;
        pass &= game.mode == ValueMode::Exact && game.value == graph;
        parts.push(format!("n={n} game={} graph={}", rs(&game.value), rs(&graph)));
    }
    pass &= start.elapsed() < Duration::from_secs(300);
    Ok((pass, parts.join("; ")))
}

fn monotonicity_in_players(tier: Tier) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, t_max) in [(2usize, 3usize), (3, 2)] {
        let values: Vec<BigRational> =
            (1..=t_max).map(|t| alpha_bar_of(&kneser_power(n, t)?, Budget::unlimited())).collect::<Result<_>>()?;
        pass &= values.windows(2).all(|w| w[1] <= w[0]);
        parts.push(format!("K({n}): {}", values.iter().map(rs).collect::<Vec<_>>().join(" >= ")));
    }
    if tier == Tier::Full {
        // Stretch case: reported, not required.
        let stretch =
            kneser_power(3, 3).and_then(|g| max_independent_set(&g, Budget::nodes(200_000).with_env_override()));
        parts.push(match stretch {
            Ok(r) => format!("K(3)^3 alpha_bar={}", rs(&r.alpha_bar)),
            Err(Error::BudgetExceeded { lower, upper }) => {
                format!("K(3)^3 stretch budget-limited: {lower} <= alpha <= {upper}")
            }
            Err(e) => format!("K(3)^3 stretch skipped: {e}"),
        });
    }
    Ok((pass, parts.join("; ")))
}

fn folklore_bound() -> Outcome {
    let three_eighths = ratio(3, 8);
    let lemma = lemma_bound(&ratio(1, 2), &BigUint::from(2u8), &BigRational::one());
    let mut pass = lemma == three_eighths;
    let mut parts = vec![format!("lemma_bound(1/2,2,1)={}", rs(&lemma))];
    for n in 1..=3 {
        let v = exact_value_two_players(&winning_family(FamilyKind::Dictator, n)?, DEFAULT_TABLE_BUDGET)?;
        pass &= v.mode == ValueMode::Exact && v.value <= three_eighths;
        parts.push(format!("p_dict(2,{n})={}", rs(&v.value)));
    }
    Ok((pass, parts.join("; ")))
}

fn strict_monotonicity() -> Outcome {
    let level2 = &blocker_schedule(2)[1];
    let shrink = &level2.beta / BigRational::from_integer((BigUint::from(12u8) << 12usize).into());
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 1..=3 {
        let family = winning_family(FamilyKind::Dictator, n)?;
        let one = exact_value_one_player(&family).value;
        let two = exact_value_two_players(&family, DEFAULT_TABLE_BUDGET)?;
        let upper = lemma_bound(&two.value, &level2.k, &level2.beta);
        let lower = nested_lower_bound(&family, 3, 0, 4)?.value;
        pass &= one == ratio(1, 2) && two.mode == ValueMode::Exact && two.value < one;
        pass &= upper == &two.value - &shrink && lower <= upper;
        parts.push(format!(
            "n={n} p1={} p2={} p3 >= {} lemma(p2) = {}",
            rs(&one),
            rs(&two.value),
            rs(&lower),
            rs(&upper)
        ));
    }
    // The level-2 blockers behind the bound exist from n = 4 on.
    let dict4 = winning_family(FamilyKind::Dictator, 4)?;
    let level = build_level(2, 4, 1, false)?;
    let verified = level
        .blockers
        .iter()
        .map(|b| verify_blocker(4, 2, b, &dict4, Budget::unlimited()).map(|v| v.is_blocker()))
        .collect::<Result<Vec<_>>>()?;
    pass &= verified.iter().all(|&v| v) && level.blocker_size() == 12;
    parts.push(format!(
        "level-2 blockers at n=4: {}/{} verified",
        verified.iter().filter(|&&v| v).count(),
        verified.len()
    ));
    Ok((pass, parts.join("; ")))
}

const BLOCKER_SEEDS: [u64; 3] = [1, 2, 3];

fn blocker_certification() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 4..=6 {
        let family = winning_family(FamilyKind::Dictator, n)?;
        let mut certified = 0;
        let mut distinct = std::collections::HashSet::new();
        for &seed in &BLOCKER_SEEDS {
            let level = build_level(2, n, seed, true)?;
            for b in &level.blockers {
                let v = verify_blocker(n, 2, b, &family, Budget::unlimited())?;
                pass &= v.is_blocker();
                certified += v.is_blocker() as usize;
                let mut key = b.clone();
                key.sort_unstable();
                distinct.insert(key);
            }
        }
        pass &= certified >= 20;
        parts.push(format!("n={n}: {certified} certified ({} distinct)", distinct.len()));
    }
    let (agree, blockers) = brute_force_agreement(200, 2024)?;
    pass &= agree == 200;
    parts.push(format!("n=2 brute force agrees on {agree}/200 ({blockers} blockers)"));
    pass &= start.elapsed() < Duration::from_secs(600);
    Ok((pass, parts.join("; ")))
}

/// Compares the verifier with all 256 two-player dictator strategies at `n = 2`
/// on random candidate sets of `B^2`.
pub fn brute_force_agreement(candidates: usize, seed: u64) -> Result<(usize, usize)> {
    use crate::hat_game::{winning_set_of_strategy, Strategy};
    use rand::{Rng, SeedableRng};
    let family = winning_family(FamilyKind::Dictator, 2)?;
    let table = |c: u32| (0..4).map(|v| c >> v & 1).collect::<Vec<u32>>();
    let winning = (0..256u32)
        .map(|code| {
            let s = Strategy { t: 2, n: 2, tables: vec![table(code & 15), table(code >> 4)] };
            winning_set_of_strategy(&family, &s).map(|w| w.0)
        })
        .collect::<Result<Vec<VertexSet>>>()?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (mut agree, mut blockers) = (0, 0);
    for _ in 0..candidates {
        let mask: u16 = rng.random();
        let points: Vec<usize> = (0..16).filter(|x| mask >> x & 1 == 1).collect();
        let a: Vec<Vec<u32>> = points.iter().map(|&x| vec![(x >> 2) as u32, (x & 3) as u32]).collect();
        let expected = winning.iter().all(|w| points.iter().any(|&x| w.contains(x)));
        let verdict = verify_blocker(2, 2, &a, &family, Budget::unlimited())?;
        agree += (verdict.is_blocker() == expected) as usize;
        blockers += expected as usize;
    }
    Ok((agree, blockers))
}

fn schedule_exactness() -> Outcome {
    let s = blocker_schedule(3);
    let c24 = binomial(BigUint::from(24u8), BigUint::from(12u8));
    let ks = [BigUint::from(2u8), BigUint::from(12u8), BigUint::from(32_449_872u32)];
    let betas = [BigRational::one(), ratio(1, 12), BigRational::new(1.into(), (BigUint::from(24u8) * c24).into())];
    let pass = s.iter().zip(&ks).all(|(e, k)| &e.k == k) && s.iter().zip(&betas).all(|(e, b)| &e.beta == b);
    let detail = s.iter().map(|e| format!("k({})={} beta={}", e.d, e.k, rs(&e.beta))).collect::<Vec<_>>().join("; ");
    Ok((pass, detail))
}

fn shift_regression() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for k in 1..=3usize {
        let g = shift_graph(k, DEFAULT_SIZE_LIMIT)?;
        let alpha = max_independent_set(&g, Budget::unlimited())?.alpha;
        let hit = h_of_graph(&g, 10_000, Budget::unlimited(), None)?;
        let optima = binomial(2 * k as u64, k as u64) as usize;
        pass &= alpha == k * k && hit.num_targets == optima && hit.h == k + 1 && hit.exact;
        parts.push(format!("k={k} alpha={alpha} optima={} h={}", hit.num_targets, hit.h));
    }
    pass &= start.elapsed() < Duration::from_secs(60);
    Ok((pass, parts.join("; ")))
}

/// `Σ_{i ≤ r} C(m, i)`: the largest `m`-bit code of diameter `2r`.
fn ball_volume(m: usize, r: usize) -> usize {
    (0..=r).map(|i| binomial(m as u64, i as u64) as usize).sum()
}

/// Words of a radius-`r` Hamming ball around `c` in `{0,1}^m`.
fn ball(m: usize, c: usize, r: usize) -> VertexSet {
    VertexSet::from_indices(1 << m, (0..1usize << m).filter(|x| ((x ^ c).count_ones() as usize) <= r))
}

fn cayley_check(tier: Tier) -> Outcome {
    let g = cayley_distance_graph(4, 1, DEFAULT_SIZE_LIMIT)?;
    let alpha = max_independent_set(&g, Budget::unlimited())?.alpha;
    let optima = enumerate_maximum_independent_sets(&g, 1000, Budget::unlimited())?;
    let mut centres: Vec<usize> = optima.iter().filter_map(|s| (0..16).find(|&c| *s == ball(4, c, 1))).collect();
    centres.dedup();
    let hit = h_of_graph(&g, 1000, Budget::unlimited(), None)?;
    let code: Vec<u32> = hit.witness.iter().map(|v| v as u32).collect();
    let covers = covering_code_check(4, 1, &code)?;
    // Optimality from the other side: no smaller code covers.
    let smaller_covers = smaller_code_covers(4, 1, hit.h - 1)?;
    let mut pass = alpha == 5
        && alpha == ball_volume(4, 1)
        && optima.len() == 16
        && centres.len() == 16
        && hit.exact
        && covers
        && !smaller_covers
        && hit.h >= 2;
    let mut detail = format!(
        "m=4: alpha={alpha} optima={} balls={} h={} code={code:?} covers={covers} smaller_covers={smaller_covers}",
        optima.len(),
        centres.len(),
        hit.h
    );
    if tier == Tier::Full {
        let start = Instant::now();
        let g6 = cayley_distance_graph(6, 1, DEFAULT_SIZE_LIMIT)?;
        let a6 = max_independent_set(&g6, Budget::unlimited())?.alpha;
        let took = start.elapsed();
        pass &= a6 == 22 && a6 == ball_volume(6, 2) && took < Duration::from_secs(300);
        detail.push_str(&format!("; m=6: alpha={a6} ({} ms)", took.as_millis()));
    }
    Ok((pass, detail))
}

/// Whether some code of `size` words covers `{0,1}^m` at `radius`.
fn smaller_code_covers(m: usize, radius: usize, size: usize) -> Result<bool> {
    let words = 1u32 << m;
    let mut pick: Vec<u32> = (0..size as u32).collect();
    if size == 0 {
        return Ok(false);
    }
    loop {
        if covering_code_check(m, radius, &pick)? {
            return Ok(true);
        }
        let mut i = size;
        loop {
            if i == 0 {
                return Ok(false);
            }
            i -= 1;
            if pick[i] < words - (size - i) as u32 {
                break;
            }
        }
        pick[i] += 1;
        for j in i + 1..size {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

fn hajnal_property(tier: Tier) -> Outcome {
    let per_p = if tier == Tier::Full { 200 } else { 40 };
    let mut failures = 0;
    let mut total = 0;
    for (j, p) in [0.1, 0.2, 0.3, 0.4, 0.5].into_iter().enumerate() {
        for i in 0..per_p {
            let g = random_gnp(12, p, 10_000 * j as u64 + i)?;
            let report = hajnal_check(&g, 100_000)?;
            failures += !report.pass as usize;
            total += 1;
        }
    }
    Ok((failures == 0, format!("{total} graphs, {failures} failures")))
}

/// Seeded graphs with at most 12 vertices for the Monte Carlo cross-check.
fn small_corpus(count: usize) -> Result<Vec<Graph>> {
    (0..count as u64).map(|i| random_gnp(4 + (i as usize % 9), 0.15 + 0.1 * (i % 6) as f64, 500 + i)).collect()
}

fn alpha_star_star_oracles(tier: Tier) -> Outcome {
    let edge = alpha_star_star_exact(&Graph::complete(2)?)?.value;
    let edgeless = alpha_star_star_exact(&Graph::edgeless(7)?)?.value;
    let mut pass = edge == ratio(3, 8) && edgeless == ratio(1, 2);
    let count = if tier == Tier::Full { 50 } else { 10 };
    let mut worst: f64 = 0.0;
    let mut agree = 0;
    for (i, g) in small_corpus(count)?.iter().enumerate() {
        let exact = to_f64(&alpha_star_star_exact(g)?.value);
        let mc = alpha_star_star_mc(g, 4000, 77 + i as u64)?;
        let z = if mc.stderr > 0.0 { (mc.mean() - exact).abs() / mc.stderr } else { 0.0 };
        let ok = (mc.mean() - exact).abs() <= 5.0 * mc.stderr;
        agree += ok as usize;
        worst = worst.max(z);
    }
    pass &= agree == count;
    Ok((
        pass,
        format!(
            "edge={} edgeless={}; mc within 5 stderr on {agree}/{count} (max z={worst:.2})",
            rs(&edge),
            rs(&edgeless)
        ),
    ))
}

/// Seeded graphs with `ᾱ = 1/4 + τ`, `τ ∈ [0.02, 0.2]`: small ones for the
/// exact mode and a few larger ones for Monte Carlo.
pub fn margin_corpus(tier: Tier) -> Result<Vec<Graph>> {
    let lo = ratio(27, 100);
    let hi = ratio(45, 100);
    let mut out =
        vec![Graph::complete(3)?.repeat(4), Graph::complete(3)?.repeat(3).disjoint_union(&Graph::complete(2)?)];
    let large = if tier == Tier::Full { 4 } else { 1 };
    let mut seed = 9000;
    let mut large_found = 0;
    while out.len() < 20 {
        seed += 1;
        let want_large = large_found < large;
        let n = if want_large { 24 + (seed as usize % 3) * 4 } else { 10 + (seed as usize % 6) };
        let g = random_gnp(n, 0.2 + 0.05 * (seed % 5) as f64, seed)?;
        let ab = alpha_bar_of(&g, Budget::unlimited())?;
        if ab >= lo && ab <= hi {
            large_found += want_large as usize;
            out.push(g);
        }
    }
    Ok(out)
}

fn alpha_star_star_margin(tier: Tier) -> Outcome {
    let corpus = margin_corpus(tier)?;
    let samples = if tier == Tier::Full { 3000 } else { 500 };
    let mut passes = 0;
    let mut exact_runs = 0;
    let mut min_slack = f64::INFINITY;
    for (i, g) in corpus.iter().enumerate() {
        let r = t16_margin(g, samples, 300 + i as u64)?;
        passes += r.pass as usize;
        exact_runs += (r.estimate.mode == EstimateMode::Exact) as usize;
        min_slack = min_slack.min(to_f64(&r.bound) - r.estimate.mean());
    }
    Ok((
        passes == corpus.len(),
        format!("{passes}/{} within bound ({exact_runs} exact); min bound - estimate = {min_slack:.4}", corpus.len()),
    ))
}

/// Ten seeded computations rendered as strings, for comparison across thread
/// counts.
pub fn determinism_records(tier: Tier) -> Result<Vec<String>> {
    let g = random_gnp(22, 0.3, 41)?;
    let samples = if tier == Tier::Full { 400 } else { 100 };
    let dict6 = winning_family(FamilyKind::Dictator, 6)?;
    let dict3 = winning_family(FamilyKind::Dictator, 3)?;
    let mut out = Vec::new();
    out.push(format!("{:?}", random_gnp(40, 0.2, 5)?));
    out.push(format!("{:?}", alpha_star_star_mc(&g, samples, 3)?));
    out.push(format!("{:?}", removal_trace(&g, 8, 12, &ratio(1, 3))?));
    out.push(format!("{:?}", build_ell_tuples(8, 2, 6, &TupleOptions::for_base(2).saturating())?));
    let level = build_level(2, 6, 4, true)?;
    let mut broken = level.blockers[0].clone();
    broken.truncate(7);
    out.push(format!("{:?}", verify_blocker(6, 2, &broken, &dict6, Budget::unlimited())?));
    let singletons: Vec<VertexSet> = (0..22).map(|v| VertexSet::from_indices(22, [v])).collect();
    out.push(format!("{:?}", partition_bound_eval(&g, &singletons, Sampler::Binomial, samples, 8)?));
    out.push(format!("{:?}", nested_lower_bound(&dict3, 3, 17, 3)?));
    out.push(format!("{:?}", t16_margin(&margin_corpus(Tier::Quick)?[19], samples, 2)?));
    out.push(format!("{:?}", epsilon_probe(&probe_corpus(1)?[..4], samples, 1)?));
    out.push(format!("{:?}", hajnal_check(&random_gnp(12, 0.3, 99)?, 10_000)?));
    Ok(out)
}

fn determinism(tier: Tier) -> Outcome {
    let one = with_threads(1, || determinism_records(tier))?;
    let four = with_threads(4, || determinism_records(tier))?;
    let same = one.iter().zip(&four).filter(|(a, b)| a == b).count();
    Ok((same == one.len() && one.len() == 10, format!("{same}/{} spot checks identical at 1 and 4 threads", one.len())))
}

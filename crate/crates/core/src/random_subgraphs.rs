//! Independent sets inside random vertex subsets.
//!
//! `α**(G)` is the expected value of `α(G[W])/n` over a uniform subset `W`.
//! The partition bound generalises it: parts `V_1..V_r` are kept according to
//! a random index set `R` and the best independent set inside `⋃_{i∈R} V_i`
//! is measured.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::VertexSet;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{enumerate_maximum_independent_sets, independence_number_within, max_independent_set, Graph};
use crate::hat_game::WinningFamily;
use crate::par::*;
use crate::ratio::{ratio, to_f64};

/// Largest `n` for which [`alpha_star_star_exact`] enumerates all subsets.
pub const EXACT_GUARD: usize = 15;
/// Hard ceiling for the exact subset table (one byte per subset).
pub const EXACT_CEILING: usize = 26;
/// Largest number of parts for which the partition bound is evaluated exactly.
pub const PARTITION_EXACT_PARTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMode {
    Exact,
    MonteCarlo,
}

impl EstimateMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimateMode::Exact => "exact",
            EstimateMode::MonteCarlo => "monte_carlo",
        }
    }
}

/// An expectation, either exact or a sample mean.
///
/// `value` is always a rational: the exact expectation, or the exact mean of
/// the drawn samples. `stderr` is zero in exact mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub mode: EstimateMode,
    pub value: BigRational,
    pub stderr: f64,
    pub samples: u64,
    pub seed: Option<u64>,
}

impl Estimate {
    pub fn mean(&self) -> f64 {
        to_f64(&self.value)
    }

    fn exact(value: BigRational, samples: u64) -> Self {
        Estimate { mode: EstimateMode::Exact, value, stderr: 0.0, samples, seed: None }
    }

    /// Mean and standard error of `counts[s] / scale`.
    fn from_counts(counts: &[u64], scale: u64, seed: u64) -> Self {
        let samples = counts.len() as u64;
        let sum: u128 = counts.iter().map(|&c| c as u128).sum();
        let sum_sq: u128 = counts.iter().map(|&c| (c as u128) * (c as u128)).sum();
        let value = ratio(BigInt::from(sum), BigInt::from(samples as u128 * scale as u128));
        let stderr = if samples > 1 {
            let n = samples as f64;
            let mean = sum as f64 / n;
            let var = ((sum_sq as f64 - mean * sum as f64) / (n - 1.0)).max(0.0);
            var.sqrt() / scale as f64 / n.sqrt()
        } else {
            0.0
        };
        Estimate { mode: EstimateMode::MonteCarlo, value, stderr, samples, seed: Some(seed) }
    }
}

pub type AlphaStarStarResult = Estimate;

/// Subset `sample` of a `len`-element ground set: one fair coin per element,
/// drawn from stream `sample` of the seeded generator.
pub fn sample_subset(seed: u64, sample: u64, len: usize) -> VertexSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample);
    let mut set = VertexSet::empty(len);
    let mut word = 0u64;
    for v in 0..len {
        if v % 64 == 0 {
            word = rng.next_u64();
        }
        if word >> (v % 64) & 1 == 1 {
            set.insert(v);
        }
    }
    set
}

/// Exact `α**` with the default size guard.
pub fn alpha_star_star_exact(g: &Graph) -> Result<AlphaStarStarResult> {
    alpha_star_star_exact_with_guard(g, EXACT_GUARD)
}

/// Exact `α**` for graphs with at most `max_n` vertices, by a table of
/// `α(G[W])` over all subsets: the lowest vertex of `W` is either dropped or
/// taken together with the removal of its neighbourhood.
pub fn alpha_star_star_exact_with_guard(g: &Graph, max_n: usize) -> Result<AlphaStarStarResult> {
    let n = g.n();
    let limit = max_n.min(EXACT_CEILING);
    if n > limit {
        return Err(Error::Guard { what: "subsets for exact alpha**", size: 1u128 << n, limit: 1u128 << limit });
    }
    let closed: Vec<u32> = (0..n).map(|v| g.neighbors(v).mask() as u32 | 1 << v).collect();
    let mut table = vec![0u8; 1 << n];
    let mut total: u64 = 0;
    for mask in 1usize..1 << n {
        let v = mask.trailing_zeros() as usize;
        let without = table[mask & (mask - 1)];
        table[mask] = if g.self_loop(v) { without } else { without.max(1 + table[mask & !(closed[v] as usize)]) };
        total += table[mask] as u64;
    }
    Ok(Estimate::exact(ratio(total, (n as u64) << n), 1 << n))
}

/// Monte Carlo `α**`; identical for any thread count given the seed.
pub fn alpha_star_star_mc(g: &Graph, samples: u64, seed: u64) -> Result<AlphaStarStarResult> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let n = g.n();
    let counts: Vec<u64> = (0..samples)
        .into_par_iter()
        .map(|s| independence_number_within(g, &sample_subset(seed, s, n)).0 as u64)
        .collect();
    Ok(Estimate::from_counts(&counts, n as u64, seed))
}

/// Exact when `n` is within the default guard, otherwise Monte Carlo.
pub fn alpha_star_star(g: &Graph, samples: u64, seed: u64) -> Result<AlphaStarStarResult> {
    if g.n() <= EXACT_GUARD {
        alpha_star_star_exact(g)
    } else {
        alpha_star_star_mc(g, samples, seed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HajnalReport {
    pub alpha: usize,
    pub num_sets: usize,
    pub intersection: VertexSet,
    pub union: VertexSet,
    pub intersection_size: usize,
    pub union_size: usize,
    pub pass: bool,
}

/// Intersection and union of all maximum independent sets.
pub fn hajnal_check(g: &Graph, cap: usize) -> Result<HajnalReport> {
    let sets = enumerate_maximum_independent_sets(g, cap, Budget::unlimited())?;
    let n = g.n();
    let mut intersection = VertexSet::full(n);
    let mut union = VertexSet::empty(n);
    for s in &sets {
        intersection.intersect_with(s);
        union.union_with(s);
    }
    let alpha = sets.first().map_or(0, VertexSet::count);
    let (intersection_size, union_size) = (intersection.count(), union.count());
    Ok(HajnalReport {
        alpha,
        num_sets: sets.len(),
        intersection,
        union,
        intersection_size,
        union_size,
        pass: intersection_size + union_size >= 2 * alpha,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovalStep {
    pub step: usize,
    pub removed: usize,
    pub alpha: usize,
    pub successful: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovalTrace {
    pub seed: u64,
    pub initial_alpha: usize,
    pub m_final: usize,
    pub steps: Vec<RemovalStep>,
}

impl RemovalTrace {
    pub fn successful_steps(&self) -> usize {
        self.steps.iter().filter(|s| s.successful).count()
    }

    pub fn final_alpha(&self) -> usize {
        self.steps.last().map_or(self.initial_alpha, |s| s.alpha)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,removed_vertex,alpha,successful\n");
        for s in &self.steps {
            out.push_str(&format!("{},{},{},{}\n", s.step, s.removed, s.alpha, s.successful));
        }
        out
    }
}

/// Removes uniformly random vertices one at a time until `m` remain.
///
/// Step `i` is successful when `α(G_{i-1}) < threshold·n` already, or when
/// removing the vertex strictly lowers the independence number.
pub fn removal_trace(g: &Graph, m: usize, seed: u64, threshold: &BigRational) -> Result<RemovalTrace> {
    let n = g.n();
    if m > n {
        return Err(Error::InvalidParameter(format!("target size {m} exceeds n = {n}")));
    }
    let cutoff = threshold * BigRational::from_integer(BigInt::from(n));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alive = VertexSet::full(n);
    let (mut alpha, mut witness) = independence_number_within(g, &alive);
    let initial_alpha = alpha;
    let mut steps = Vec::with_capacity(n - m);
    for step in 1..=n - m {
        let remaining = alive.to_vec();
        let removed = remaining[rng.random_range(0..remaining.len())];
        alive.remove(removed);
        let before = alpha;
        if witness.contains(removed) {
            (alpha, witness) = independence_number_within(g, &alive);
        }
        let already_small = BigRational::from_integer(BigInt::from(before)) < cutoff;
        steps.push(RemovalStep { step, removed, alpha, successful: already_small || alpha < before });
    }
    Ok(RemovalTrace { seed, initial_alpha, m_final: m, steps })
}

#[derive(Debug, Clone, PartialEq)]
pub struct T16Report {
    pub alpha_bar: BigRational,
    pub tau: BigRational,
    pub bound: BigRational,
    pub estimate: AlphaStarStarResult,
    pub pass: bool,
}

/// `1/4 + τ − τ²/3`.
pub fn t16_bound(tau: &BigRational) -> BigRational {
    ratio(1, 4) + tau - tau * tau / BigRational::from_integer(BigInt::from(3))
}

/// Compares `α**(G)` with `1/4 + τ − τ²/3` where `ᾱ(G) = 1/4 + τ`, `0 < τ < 1/4`.
pub fn t16_margin(g: &Graph, samples: u64, seed: u64) -> Result<T16Report> {
    let mis = max_independent_set(g, Budget::unlimited().with_env_override())?;
    let alpha_bar = mis.alpha_bar;
    if alpha_bar <= ratio(1, 4) || alpha_bar >= ratio(1, 2) {
        return Err(Error::RatioOutOfRange(format!(
            "independence ratio {} outside the open interval (1/4, 1/2)",
            crate::ratio::to_string(&alpha_bar)
        )));
    }
    let tau = &alpha_bar - ratio(1, 4);
    let bound = t16_bound(&tau);
    let estimate = alpha_star_star(g, samples, seed)?;
    let pass = match estimate.mode {
        EstimateMode::Exact => estimate.value <= bound,
        EstimateMode::MonteCarlo => estimate.mean() <= to_f64(&bound) + 3.0 * estimate.stderr,
    };
    Ok(T16Report { alpha_bar, tau, bound, estimate, pass })
}

/// Distribution of the random index set `R`.
#[derive(Debug, Clone, Copy)]
pub enum Sampler<'a> {
    /// Every index independently with probability 1/2.
    Binomial,
    /// `R_v` for a uniform point `v`.
    RV(&'a WinningFamily),
}

fn check_partition(n: usize, partition: &[VertexSet]) -> Result<()> {
    let mut seen = VertexSet::empty(n);
    for (i, part) in partition.iter().enumerate() {
        if part.len() != n {
            return Err(Error::MalformedPartition(format!("part {i} has ground size {} not {n}", part.len())));
        }
        if part.intersects(&seen) {
            return Err(Error::MalformedPartition(format!("part {i} overlaps an earlier part")));
        }
        seen.union_with(part);
    }
    if seen.count() != n {
        return Err(Error::MalformedPartition(format!("parts cover {} of {n} vertices", seen.count())));
    }
    Ok(())
}

fn union_of(n: usize, partition: &[VertexSet], pick: impl Iterator<Item = usize>) -> VertexSet {
    let mut u = VertexSet::empty(n);
    for i in pick {
        u.union_with(&partition[i]);
    }
    u
}

/// `E_R[max_I μ(I ∩ ⋃_{i∈R} V_i)]` over independent sets `I` of `G`.
///
/// Exact when `r ≤ 20` (binomial) or the family has at most `2^20` points
/// (`R_v`); otherwise a Monte Carlo mean over `samples` draws.
pub fn partition_bound_eval(
    g: &Graph,
    partition: &[VertexSet],
    sampler: Sampler<'_>,
    samples: u64,
    seed: u64,
) -> Result<Estimate> {
    let n = g.n();
    check_partition(n, partition)?;
    let r = partition.len();
    let value = |u: &VertexSet| independence_number_within(g, u).0 as u64;
    match sampler {
        Sampler::Binomial => {
            if r <= PARTITION_EXACT_PARTS {
                let total: u64 = (0..1u64 << r)
                    .into_par_iter()
                    .map(|code| value(&union_of(n, partition, (0..r).filter(|i| code >> i & 1 == 1))))
                    .collect::<Vec<_>>()
                    .into_iter()
                    .sum();
                return Ok(Estimate::exact(ratio(total, (n as u64) << r), 1 << r));
            }
            check_samples(samples)?;
            let counts: Vec<u64> = (0..samples)
                .into_par_iter()
                .map(|s| value(&union_of(n, partition, sample_subset(seed, s, r).iter())))
                .collect();
            Ok(Estimate::from_counts(&counts, n as u64, seed))
        }
        Sampler::RV(family) => {
            if family.len() != r {
                return Err(Error::MalformedPartition(format!(
                    "{r} parts but the family has {} winning sets",
                    family.len()
                )));
            }
            let points = family.points();
            let r_v = |v: usize| (0..r).filter(move |&i| family.contains(i, v));
            if points <= 1 << PARTITION_EXACT_PARTS {
                let total: u64 = (0..points)
                    .into_par_iter()
                    .map(|v| value(&union_of(n, partition, r_v(v))))
                    .collect::<Vec<_>>()
                    .into_iter()
                    .sum();
                return Ok(Estimate::exact(ratio(total, n as u64 * points as u64), points as u64));
            }
            check_samples(samples)?;
            let counts: Vec<u64> = (0..samples)
                .into_par_iter()
                .map(|s| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(s);
                    value(&union_of(n, partition, r_v(rng.random_range(0..points))))
                })
                .collect();
            Ok(Estimate::from_counts(&counts, n as u64, seed))
        }
    }
}

fn check_samples(samples: u64) -> Result<()> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    Ok(())
}

/// Preimages `g2^{-1}(i)` of a guess table, one part per winning-set index.
pub fn partition_from_table(table: &[u32], parts: usize) -> Vec<VertexSet> {
    let mut out = vec![VertexSet::empty(table.len()); parts];
    for (x, &g) in table.iter().enumerate() {
        out[g as usize].insert(x);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRow {
    pub name: String,
    pub n: usize,
    pub alpha_bar: BigRational,
    pub estimate: Estimate,
    /// `ᾱ − α**`, from the exact value or the sample mean.
    pub gap: f64,
}

/// Probe corpus: small extremal graphs, their unions, and seeded `G(n, p)`.
pub fn probe_corpus(seed: u64) -> Result<Vec<(String, Graph)>> {
    use crate::constructions::{cayley_distance_graph, random_gnp, shift_graph, DEFAULT_SIZE_LIMIT};
    let triangle = Graph::complete(3)?;
    let c5 = Graph::new(5, (0..5).map(|i| (i, (i + 1) % 5)))?;
    let mut corpus = vec![
        ("edge".to_string(), Graph::complete(2)?),
        ("triangle".to_string(), triangle.clone()),
        ("triangles x4".to_string(), triangle.repeat(4)),
        ("c5".to_string(), c5.clone()),
        ("c5 + triangle".to_string(), c5.disjoint_union(&triangle)),
        ("k4 + c5".to_string(), Graph::complete(4)?.disjoint_union(&c5)),
        ("shift:2".to_string(), shift_graph(2, DEFAULT_SIZE_LIMIT)?),
        ("cayley:4,1".to_string(), cayley_distance_graph(4, 1, DEFAULT_SIZE_LIMIT)?),
    ];
    for (j, &p) in [0.3, 0.5, 0.7].iter().enumerate() {
        for n in [12usize, 14] {
            let s = seed.wrapping_add((j * 16 + n) as u64);
            corpus.push((format!("gnp:{n},{p},{s}"), random_gnp(n, p, s)?));
        }
    }
    Ok(corpus)
}

/// `ᾱ − α**` across a corpus; the minimum observed gap is an upper estimate
/// of `ε**` at the smallest `ᾱ` probed.
pub fn epsilon_probe(corpus: &[(String, Graph)], samples: u64, seed: u64) -> Result<Vec<ProbeRow>> {
    corpus
        .iter()
        .map(|(name, g)| {
            let mis = max_independent_set(g, Budget::unlimited())?;
            let estimate = alpha_star_star(g, samples, seed)?;
            let gap = match estimate.mode {
                EstimateMode::Exact => to_f64(&(&mis.alpha_bar - &estimate.value)),
                EstimateMode::MonteCarlo => to_f64(&mis.alpha_bar) - estimate.mean(),
            };
            Ok(ProbeRow { name: name.clone(), n: g.n(), alpha_bar: mis.alpha_bar, estimate, gap })
        })
        .collect()
}

/// Exact `α**` by one solver call per subset, independent of the subset table.
pub fn alpha_star_star_by_solves(g: &Graph) -> Result<BigRational> {
    let n = g.n();
    if n > EXACT_GUARD {
        return Err(Error::Guard { what: "subsets for direct alpha**", size: 1u128 << n, limit: 1u128 << EXACT_GUARD });
    }
    let total: u64 = (0..1u64 << n)
        .into_par_iter()
        .map(|mask| {
            independence_number_within(g, &VertexSet::from_indices(n, (0..n).filter(|v| mask >> v & 1 == 1))).0 as u64
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    if n == 0 {
        return Ok(BigRational::zero());
    }
    Ok(ratio(total, (n as u64) << n))
}

/// Whether `value` lies in `{0, 1/n, …, α/n}`.
pub fn is_sample_value(value: &BigRational, n: usize, alpha: usize) -> bool {
    let scaled = value * BigRational::from_integer(BigInt::from(n));
    scaled.is_integer() && scaled.to_integer().to_usize().is_some_and(|k| k <= alpha)
}

//! Disjoint blocker families for the dictator hat game.
//!
//! A blocker is a set of point tuples in `B^t` meeting the winning set of every
//! strategy. Level 1 uses the complementary pairs `{x, x̄}`; level `d + 1`
//! takes products `b × Y` of a level-`d` blocker `b` with an ℓ-tuple `Y` of
//! words whose supports are unions of exactly `k(d)` parts of a random ordered
//! partition of the coordinates into `2k(d)` parts.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::budget::{Budget, Meter};
use crate::error::{Error, Result};
use crate::hat_game::WinningFamily;
use crate::par::*;
use crate::ratio::{dyadic, ratio};

/// One point of `B^t`: the words on each player's head, in player order.
pub type PointTuple = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockerSchedule {
    pub d: usize,
    pub k: BigUint,
    pub beta: BigRational,
    /// `C(2k(d-1), k(d-1))`, the ℓ-tuple size used to reach level `d`.
    pub ell: Option<BigUint>,
}

/// `k(1) = 2`, `β(1) = 1`, `k(d+1) = k(d)·C(2k(d), k(d))`,
/// `β(d+1) = β(d) / (2·C(2k(d), k(d)))`.
pub fn blocker_schedule(d_max: usize) -> Vec<BlockerSchedule> {
    let mut out: Vec<BlockerSchedule> = Vec::with_capacity(d_max);
    for d in 1..=d_max {
        let entry = match out.last() {
            None => BlockerSchedule { d, k: BigUint::from(2u8), beta: BigRational::one(), ell: None },
            Some(prev) => {
                let ell = binomial(BigUint::from(2u8) * &prev.k, prev.k.clone());
                let k = &prev.k * &ell;
                let beta = &prev.beta / BigRational::from_integer(BigInt::from(2u8) * BigInt::from(ell.clone()));
                BlockerSchedule { d, k, beta, ell: Some(ell) }
            }
        };
        out.push(entry);
    }
    out
}

/// `p_t − 2^(−k)·β/k`.
pub fn lemma_bound(p_t: &BigRational, k: &BigUint, beta: &BigRational) -> BigRational {
    let shift = k.to_usize().expect("k fits in memory");
    let denom = BigInt::from(k.clone()) << shift;
    p_t - beta / BigRational::from_integer(denom)
}

/// Pairwise disjoint blockers of common size with their exact union measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockerFamily {
    pub t: usize,
    pub n: usize,
    pub blockers: Vec<Vec<PointTuple>>,
    pub union_measure: BigRational,
}

impl BlockerFamily {
    /// Validates disjointness, common size and tuple shape.
    pub fn new(t: usize, n: usize, blockers: Vec<Vec<PointTuple>>) -> Result<Self> {
        let size = blockers.first().map_or(0, Vec::len);
        let mut seen = HashSet::new();
        for b in &blockers {
            if b.len() != size {
                return Err(Error::InvalidParameter("blockers must share a common size".into()));
            }
            for p in b {
                if p.len() != t || p.iter().any(|&w| (w as u64) >> n != 0) {
                    return Err(Error::InvalidParameter(format!("point {p:?} is not in B^{t} for n={n}")));
                }
                if !seen.insert(p.clone()) {
                    return Err(Error::InvalidParameter(format!("blockers overlap at {p:?}")));
                }
            }
        }
        let union_measure = dyadic(seen.len() as u64, (n * t) as u32);
        Ok(BlockerFamily { t, n, blockers, union_measure })
    }

    pub fn blocker_size(&self) -> usize {
        self.blockers.first().map_or(0, Vec::len)
    }
}

/// `2^(n-1)` pairs `{x, x̄}` covering `B`.
pub fn pair_blockers(n: usize) -> Result<BlockerFamily> {
    if n == 0 || n > 31 {
        return Err(Error::InvalidParameter(format!("pair_blockers needs 1 <= n <= 31, got {n}")));
    }
    let all = (1u32 << n) - 1;
    let blockers = (0..1u32 << (n - 1)).map(|x| vec![vec![x], vec![x ^ all]]).collect();
    BlockerFamily::new(1, n, blockers)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleFamily {
    pub n: usize,
    pub k_base: usize,
    /// Per accepted tuple, the part (in `0..2k_base`) of every coordinate.
    pub partitions: Vec<Vec<u8>>,
    pub tuples: Vec<Vec<u32>>,
    pub union_measure: BigRational,
}

impl TupleFamily {
    pub fn ell(&self) -> usize {
        self.tuples.first().map_or(0, Vec::len)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleOptions {
    /// Stop once the union measure reaches this value.
    pub target: BigRational,
    /// Keep adding tuples past the target until `retry_cap` consecutive
    /// candidates are rejected.
    pub saturate: bool,
    /// Consecutive rejected candidates tolerated before giving up.
    pub retry_cap: usize,
}

impl TupleOptions {
    /// Target `1/(2ℓ)` with `ℓ = C(2k_base, k_base)`.
    pub fn for_base(k_base: usize) -> Self {
        let ell = binomial(2 * k_base as u64, k_base as u64);
        TupleOptions { target: ratio(1, 2 * ell), saturate: false, retry_cap: 10_000 }
    }

    pub fn saturating(mut self) -> Self {
        self.saturate = true;
        self
    }
}

/// Uniform ordered partition of `0..n` into `parts` non-empty parts, by
/// rejection of uniform assignments with an empty part.
fn sample_partition(rng: &mut ChaCha8Rng, n: usize, parts: usize) -> Vec<u8> {
    loop {
        let assignment: Vec<u8> = (0..n).map(|_| rng.random_range(0..parts) as u8).collect();
        let mut used = vec![false; parts];
        for &p in &assignment {
            used[p as usize] = true;
        }
        if used.iter().all(|&u| u) {
            return assignment;
        }
    }
}

/// Words whose 1-support is the union of exactly `k` parts, one per `k`-subset
/// of parts in lexicographic order.
pub fn tuple_from_partition(partition: &[u8], k: usize) -> Vec<u32> {
    let parts = 2 * k;
    let mut part_masks = vec![0u32; parts];
    for (coord, &p) in partition.iter().enumerate() {
        part_masks[p as usize] |= 1 << coord;
    }
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        out.push(pick.iter().fold(0u32, |acc, &p| acc | part_masks[p]));
        // Next k-subset in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pick[i] < parts - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

/// Samples ℓ-tuples from random partitions, keeping those disjoint from all
/// earlier ones, until the union measure reaches the target.
pub fn build_ell_tuples(n: usize, k_base: usize, seed: u64, options: &TupleOptions) -> Result<TupleFamily> {
    if k_base == 0 || n < 2 * k_base || n > 30 {
        return Err(Error::InvalidParameter(format!("build_ell_tuples needs 2k <= n <= 30 (n={n}, k={k_base})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = HashSet::new();
    let mut family =
        TupleFamily { n, k_base, partitions: Vec::new(), tuples: Vec::new(), union_measure: BigRational::zero() };
    let mut rejected = 0;
    loop {
        let reached = family.union_measure >= options.target;
        if reached && !options.saturate {
            return Ok(family);
        }
        if rejected >= options.retry_cap {
            return if reached {
                Ok(family)
            } else {
                Err(Error::RetryCapExceeded { cap: options.retry_cap, accepted: family.tuples.len() })
            };
        }
        let partition = sample_partition(&mut rng, n, 2 * k_base);
        let words = tuple_from_partition(&partition, k_base);
        if words.iter().any(|w| used.contains(w)) {
            rejected += 1;
            continue;
        }
        rejected = 0;
        used.extend(words.iter().copied());
        family.partitions.push(partition);
        family.tuples.push(words);
        family.union_measure = dyadic(used.len() as u64, n as u32);
    }
}

/// All products `b × Y`, blockers outermost, tuples innermost.
pub fn lift_blockers(base: &BlockerFamily, tuples: &TupleFamily) -> Result<BlockerFamily> {
    if base.n != tuples.n {
        return Err(Error::InvalidParameter("base blockers and tuples disagree on n".into()));
    }
    let mut blockers = Vec::with_capacity(base.blockers.len() * tuples.tuples.len());
    for b in &base.blockers {
        for y in &tuples.tuples {
            let lifted = b
                .iter()
                .flat_map(|a| {
                    y.iter().map(move |&w| {
                        let mut p = a.clone();
                        p.push(w);
                        p
                    })
                })
                .collect();
            blockers.push(lifted);
        }
    }
    let lifted = BlockerFamily::new(base.t + 1, base.n, blockers)?;
    debug_assert_eq!(lifted.union_measure, &base.union_measure * &tuples.union_measure);
    Ok(lifted)
}

/// Level-`level` blockers for `B^level` at `n` bits.
pub fn build_level(level: usize, n: usize, seed: u64, saturate: bool) -> Result<BlockerFamily> {
    if level == 0 {
        return Err(Error::InvalidParameter("levels start at 1".into()));
    }
    let mut family = pair_blockers(n)?;
    for step in 1..level {
        let k_base = family.blocker_size();
        let mut options = TupleOptions::for_base(k_base);
        options.saturate = saturate;
        let tuples = build_ell_tuples(n, k_base, seed.wrapping_add(step as u64), &options)?;
        family = lift_blockers(&family, &tuples)?;
    }
    Ok(family)
}

/// Guesses that make a strategy's winning set avoid a candidate blocker,
/// restricted to the views the candidate produces. `guesses[i]` lists
/// `(view, winning-set index)` for player `i`, sorted by view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialStrategy {
    pub t: usize,
    pub guesses: Vec<Vec<(u64, u32)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockerVerdict {
    Blocker,
    Avoidable(PartialStrategy),
    Unknown { nodes: u64 },
}

impl BlockerVerdict {
    pub fn is_blocker(&self) -> bool {
        matches!(self, BlockerVerdict::Blocker)
    }
}

/// Flattened view of player `i` at `p` (other words major-first).
fn view_key(p: &[u32], i: usize, n: usize) -> u64 {
    p.iter().enumerate().filter(|&(k, _)| k != i).fold(0u64, |acc, (_, &w)| (acc << n) | w as u64)
}

struct Csp {
    vars: Vec<(usize, u64)>,
    /// Per constraint: `(variable, guesses under which the player misses)`.
    cons: Vec<Vec<(usize, u64)>>,
    var_cons: Vec<Vec<usize>>,
    order: Vec<usize>,
    full_domain: u64,
}

impl Csp {
    fn new(n: usize, t: usize, a: &[PointTuple], family: &WinningFamily) -> Self {
        let r = family.len();
        let mut vars = Vec::new();
        let mut index = std::collections::HashMap::new();
        let mut cons = Vec::with_capacity(a.len());
        for p in a {
            let mut c = Vec::with_capacity(t);
            for i in 0..t {
                let key = (i, view_key(p, i, n));
                let v = *index.entry(key).or_insert_with(|| {
                    vars.push(key);
                    vars.len() - 1
                });
                let miss = (0..r).filter(|&g| !family.contains(g, p[i] as usize)).fold(0u64, |m, g| m | 1 << g);
                c.push((v, miss));
            }
            cons.push(c);
        }
        let mut var_cons = vec![Vec::new(); vars.len()];
        for (ci, c) in cons.iter().enumerate() {
            for &(v, _) in c {
                var_cons[v].push(ci);
            }
        }
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(var_cons[v].len()), v));
        let full_domain = if r == 64 { u64::MAX } else { (1u64 << r) - 1 };
        Csp { vars, cons, var_cons, order, full_domain }
    }

    /// Applies `v = g`; narrows domains of last-unassigned variables. Returns
    /// `false` on a violated constraint.
    fn propagate(&self, v: usize, assign: &[Option<u32>], domains: &mut [u64]) -> bool {
        for &ci in &self.var_cons[v] {
            let mut open = None;
            let mut open_count = 0;
            let mut satisfied = false;
            for &(u, miss) in &self.cons[ci] {
                match assign[u] {
                    Some(g) if miss >> g & 1 == 1 => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open_count += 1;
                        open = Some((u, miss));
                    }
                }
            }
            if satisfied {
                continue;
            }
            match (open_count, open) {
                (0, _) => return false,
                (1, Some((u, miss))) => {
                    domains[u] &= miss;
                    if domains[u] == 0 {
                        return false;
                    }
                }
                _ => {}
            }
        }
        true
    }

    fn search(&self, depth: usize, assign: &mut Vec<Option<u32>>, domains: &[u64], meter: &Meter) -> Outcome {
        if depth == self.order.len() {
            return Outcome::Found;
        }
        if !meter.tick() {
            return Outcome::Aborted;
        }
        let v = self.order[depth];
        let mut dom = domains[v];
        while dom != 0 {
            let g = dom.trailing_zeros();
            dom &= dom - 1;
            assign[v] = Some(g);
            let mut next = domains.to_vec();
            next[v] = 1 << g;
            if self.propagate(v, assign, &mut next) {
                match self.search(depth + 1, assign, &next, meter) {
                    Outcome::Exhausted => {}
                    other => return other,
                }
            }
            assign[v] = None;
        }
        Outcome::Exhausted
    }

    fn to_partial(&self, t: usize, assign: &[Option<u32>]) -> PartialStrategy {
        let mut guesses = vec![Vec::new(); t];
        for (v, &(i, view)) in self.vars.iter().enumerate() {
            guesses[i].push((view, assign[v].expect("complete assignment")));
        }
        for g in &mut guesses {
            g.sort_unstable();
        }
        PartialStrategy { t, guesses }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Found,
    Exhausted,
    Aborted,
}

/// Decides whether every strategy's winning set meets `a`.
///
/// Only the guesses at views `a^{(-i)}` for `a ∈ A` matter: a winning set
/// avoids `A` iff those guesses can be chosen so that every `a ∈ A` has some
/// player naming a set without `a_i`. The search runs over exactly those
/// guesses, parallel over the first variable's values; the least value with an
/// avoiding completion supplies the counterexample.
pub fn verify_blocker(
    n: usize,
    t: usize,
    a: &[PointTuple],
    family: &WinningFamily,
    budget: Budget,
) -> Result<BlockerVerdict> {
    if t < 1 || family.n() != n || family.len() > 64 {
        return Err(Error::InvalidParameter("verify_blocker needs t >= 1, matching n and r <= 64".into()));
    }
    if a.iter().any(|p| p.len() != t || p.iter().any(|&w| (w as u64) >> n != 0)) {
        return Err(Error::InvalidParameter(format!("candidate contains a point outside B^{t}")));
    }
    if a.is_empty() {
        return Ok(BlockerVerdict::Avoidable(PartialStrategy { t, guesses: vec![Vec::new(); t] }));
    }
    let csp = Csp::new(n, t, a, family);
    let meter = budget.meter();
    let first = csp.order[0];
    let values: Vec<u32> = (0..family.len() as u32).collect();
    let results: Vec<(Outcome, Option<PartialStrategy>)> = values
        .into_par_iter()
        .map(|g| {
            let mut assign = vec![None; csp.vars.len()];
            let mut domains = vec![csp.full_domain; csp.vars.len()];
            assign[first] = Some(g);
            domains[first] = 1 << g;
            if !csp.propagate(first, &assign, &mut domains) {
                return (Outcome::Exhausted, None);
            }
            match csp.search(1, &mut assign, &domains, &meter) {
                Outcome::Found => (Outcome::Found, Some(csp.to_partial(t, &assign))),
                other => (other, None),
            }
        })
        .collect();
    if let Some((_, Some(p))) = results.iter().find(|(o, _)| *o == Outcome::Found) {
        return Ok(BlockerVerdict::Avoidable(p.clone()));
    }
    if results.iter().any(|(o, _)| *o == Outcome::Aborted) {
        return Ok(BlockerVerdict::Unknown { nodes: meter.nodes() });
    }
    Ok(BlockerVerdict::Blocker)
}

/// Checks that `partial` really avoids `a`: for every point some player's
/// recorded guess misses that player's word.
pub fn partial_strategy_avoids(n: usize, a: &[PointTuple], family: &WinningFamily, partial: &PartialStrategy) -> bool {
    a.iter().all(|p| {
        (0..partial.t).any(|i| {
            let view = view_key(p, i, n);
            match partial.guesses[i].binary_search_by_key(&view, |&(v, _)| v) {
                Ok(k) => !family.contains(partial.guesses[i][k].1 as usize, p[i] as usize),
                Err(_) => false,
            }
        })
    })
}

/// Renders blockers as JSON: an array of blockers, each an array of tuples of
/// binary strings (most significant coordinate first).
pub fn blockers_to_json(n: usize, blockers: &[Vec<PointTuple>]) -> Value {
    Value::Array(
        blockers
            .iter()
            .map(|b| {
                Value::Array(
                    b.iter()
                        .map(|p| Value::Array(p.iter().map(|&w| Value::String(format!("{w:0n$b}"))).collect()))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Parses a blocker file: either one blocker (array of tuples) or an array of
/// blockers. Returns `(n, t, blockers)`.
pub fn parse_blocker_json(value: &Value) -> Result<(usize, usize, Vec<Vec<PointTuple>>)> {
    let bad = |m: &str| Error::InvalidParameter(format!("blocker file: {m}"));
    let outer = value.as_array().ok_or_else(|| bad("expected a JSON array"))?;
    let nested = outer.first().and_then(Value::as_array).and_then(|t| t.first()).is_some_and(Value::is_array);
    let raw: Vec<&Value> = if nested { outer.iter().collect() } else { vec![value] };
    let mut width: Option<usize> = None;
    let mut arity: Option<usize> = None;
    let mut blockers = Vec::new();
    for b in raw {
        let tuples = b.as_array().ok_or_else(|| bad("blocker must be an array"))?;
        let mut points = Vec::new();
        for tuple in tuples {
            let words = tuple.as_array().ok_or_else(|| bad("tuple must be an array"))?;
            if *arity.get_or_insert(words.len()) != words.len() || words.is_empty() {
                return Err(bad("tuples must share a common non-zero arity"));
            }
            let mut p = Vec::new();
            for w in words {
                let s = w.as_str().ok_or_else(|| bad("words must be binary strings"))?;
                if s.is_empty() || s.len() > 31 || *width.get_or_insert(s.len()) != s.len() {
                    return Err(bad("words must be binary strings of a common width <= 31"));
                }
                p.push(u32::from_str_radix(s, 2).map_err(|_| bad("invalid binary string"))?);
            }
            points.push(p);
        }
        blockers.push(points);
    }
    Ok((width.ok_or_else(|| bad("no words"))?, arity.unwrap_or(0), blockers))
}

//! Hat-guessing games over `B = {0,1}^n`.
//!
//! Points of `B` are `n`-bit words (bit `j` is coordinate `x_{j+1}`). Winning
//! sets are indexed from 0. A `t`-tuple over `B` is flattened major-first:
//! player 0 occupies the most significant `n` bits. A player's *view* is the
//! tuple with that player's own coordinate deleted, flattened the same way
//! (remaining players in increasing order).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::constructions::kneser_hypercube;
use crate::error::{Error, Result};
use crate::graph::enumerate_maximal_independent_sets;
use crate::par::*;
use crate::ratio::{dyadic, ratio};

/// Largest tuple space (in points) materialised as a membership vector.
pub const MEMBERSHIP_GUARD: u128 = 1 << 24;
/// Largest tuple space the coordinate-ascent search will sweep.
pub const ASCENT_GUARD: u128 = 1 << 22;
/// Default number of player-2 tables the exact two-player search may visit.
pub const DEFAULT_TABLE_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Dictator,
    Intersecting,
    Monotone,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Dictator => "dictator",
            FamilyKind::Intersecting => "intersecting",
            FamilyKind::Monotone => "monotone",
        })
    }
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dictator" | "dict" => Ok(FamilyKind::Dictator),
            "intersecting" => Ok(FamilyKind::Intersecting),
            "monotone" => Ok(FamilyKind::Monotone),
            _ => Err(Error::InvalidParameter(format!("unknown family kind {s:?}"))),
        }
    }
}

/// An indexed family of winning sets `W_0, …, W_{r-1} ⊆ {0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinningFamily {
    n: usize,
    kind: FamilyKind,
    sets: Vec<VertexSet>,
}

impl WinningFamily {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    /// Number of winning sets `r`.
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn points(&self) -> usize {
        1 << self.n
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    #[inline]
    pub fn contains(&self, set: usize, point: usize) -> bool {
        self.sets[set].contains(point)
    }

    pub fn measure(&self, set: usize) -> BigRational {
        dyadic(self.sets[set].count() as u64, self.n as u32)
    }

    /// Membership masks, available when `2^n <= 64`.
    fn masks(&self) -> Result<Vec<u64>> {
        if self.n > 6 {
            return Err(Error::Guard { what: "hat stack depth for mask kernels", size: self.n as u128, limit: 6 });
        }
        Ok(self.sets.iter().map(VertexSet::mask).collect())
    }
}

/// Builds the full indexed family of the given kind.
///
/// Dictators are `W_i = {x : x_{i+1} = 1}` in coordinate order. Intersecting
/// families are the maximal independent sets of the Kneser hypercube; balanced
/// monotone families come from recursive up-set enumeration. Both are sorted
/// lexicographically by membership vector.
pub fn winning_family(kind: FamilyKind, n: usize) -> Result<WinningFamily> {
    let limit = match kind {
        FamilyKind::Dictator => 16,
        FamilyKind::Intersecting => 4,
        FamilyKind::Monotone => 5,
    };
    if n == 0 || n > limit {
        return Err(Error::Guard { what: "hat stack depth", size: n as u128, limit: limit as u128 });
    }
    let points = 1usize << n;
    let sets = match kind {
        FamilyKind::Dictator => {
            (0..n).map(|i| VertexSet::from_indices(points, (0..points).filter(|x| (x >> i) & 1 == 1))).collect()
        }
        FamilyKind::Intersecting => enumerate_maximal_independent_sets(&kneser_hypercube(n)?, 1, 1 << 20)?,
        FamilyKind::Monotone => {
            let mut sets: Vec<VertexSet> = monotone_masks(n)
                .into_iter()
                .filter(|m| m.count_ones() as usize == points / 2)
                .map(|m| VertexSet::from_mask(points, m))
                .collect();
            sets.sort();
            sets
        }
    };
    Ok(WinningFamily { n, kind, sets })
}

/// Truth tables (bit `x` = value at `x`) of every up-closed set in `{0,1}^n`,
/// `n <= 6`.
fn monotone_masks(n: usize) -> Vec<u64> {
    if n == 0 {
        return vec![0, 1];
    }
    let lower = monotone_masks(n - 1);
    let half = 1u32 << (n - 1);
    let mut out = Vec::new();
    for &f1 in &lower {
        for &f0 in &lower {
            // Raising coordinate n maps x to x + 2^{n-1}, so f0 ⊆ f1.
            if f0 & !f1 == 0 {
                out.push(f0 | (f1 << half));
            }
        }
    }
    out
}

/// Per-player guess tables. `tables[i][view]` is the winning-set index player
/// `i` names on seeing `view`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strategy {
    pub t: usize,
    pub n: usize,
    pub tables: Vec<Vec<u32>>,
}

impl Strategy {
    /// Every player always names winning set 0.
    pub fn least_index(t: usize, n: usize) -> Self {
        let views = view_count(t, n);
        Strategy { t, n, tables: vec![vec![0; views]; t] }
    }

    pub fn validate(&self, family: &WinningFamily) -> Result<()> {
        if self.t == 0 || self.n != family.n() || self.tables.len() != self.t {
            return Err(Error::InvalidParameter("strategy shape does not match game".into()));
        }
        let views = view_count(self.t, self.n);
        for table in &self.tables {
            if table.len() != views || table.iter().any(|&g| g as usize >= family.len()) {
                return Err(Error::InvalidParameter("strategy table has wrong size or index".into()));
            }
        }
        Ok(())
    }
}

fn view_count(t: usize, n: usize) -> usize {
    1usize << (n * (t - 1))
}

fn tuple_space(t: usize, n: usize) -> u128 {
    if n * t >= 128 {
        u128::MAX
    } else {
        1u128 << (n * t)
    }
}

/// Coordinate of player `i` in the flattened tuple `x`.
#[inline]
pub fn coordinate(x: usize, i: usize, t: usize, n: usize) -> usize {
    (x >> (n * (t - 1 - i))) & ((1 << n) - 1)
}

/// View of player `i`: `x` with coordinate `i` deleted.
#[inline]
pub fn view_of(x: usize, i: usize, t: usize, n: usize) -> usize {
    let low_bits = n * (t - 1 - i);
    let low = x & ((1usize << low_bits) - 1);
    let high = x >> (low_bits + n);
    (high << low_bits) | low
}

/// Inverse of [`view_of`]: the tuple whose view for player `i` is `view` and
/// whose own coordinate is `own`.
#[inline]
pub fn insert_coordinate(view: usize, own: usize, i: usize, t: usize, n: usize) -> usize {
    let low_bits = n * (t - 1 - i);
    let low = view & ((1usize << low_bits) - 1);
    let high = view >> low_bits;
    (((high << n) | own) << low_bits) | low
}

#[inline]
fn wins(family: &WinningFamily, s: &Strategy, x: usize) -> bool {
    (0..s.t).all(|i| family.contains(s.tables[i][view_of(x, i, s.t, s.n)] as usize, coordinate(x, i, s.t, s.n)))
}

/// Winning set of `s` as a membership vector over the flattened tuple space,
/// with its exact uniform measure.
pub fn winning_set_of_strategy(family: &WinningFamily, s: &Strategy) -> Result<(VertexSet, BigRational)> {
    s.validate(family)?;
    let size = tuple_space(s.t, s.n);
    if size > MEMBERSHIP_GUARD {
        return Err(Error::Guard { what: "tuple space", size, limit: MEMBERSHIP_GUARD });
    }
    let size = size as usize;
    let members = VertexSet::from_indices(size, (0..size).filter(|&x| wins(family, s, x)));
    let measure = dyadic(members.count() as u64, (s.n * s.t) as u32);
    Ok((members, measure))
}

/// Number of winning tuples, streamed without materialising the set.
pub fn count_winning(family: &WinningFamily, s: &Strategy) -> Result<u64> {
    s.validate(family)?;
    let size = tuple_space(s.t, s.n);
    if size > u64::MAX as u128 / 2 {
        return Err(Error::Guard { what: "tuple space", size, limit: u64::MAX as u128 / 2 });
    }
    Ok((0..size as usize).into_par_iter().filter(|&x| wins(family, s, x)).count() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueMode {
    Exact,
    LowerBound,
    UpperBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameValue {
    pub t: usize,
    pub n: usize,
    pub kind: FamilyKind,
    pub value: BigRational,
    pub witness: Option<Strategy>,
    pub mode: ValueMode,
}

pub fn exact_value_one_player(family: &WinningFamily) -> GameValue {
    let best = (0..family.len()).rev().max_by_key(|&i| family.sets[i].count()).unwrap_or(0);
    GameValue {
        t: 1,
        n: family.n(),
        kind: family.kind(),
        value: family.measure(best),
        witness: Some(Strategy { t: 1, n: family.n(), tables: vec![vec![best as u32]] }),
        mode: ValueMode::Exact,
    }
}

/// Optimal table of player 0 (indexed by the point on player 1's head) given
/// player 1's table `g2` (indexed by the point on player 0's head), with the
/// count of winning pairs for the pair of tables.
fn best_response_kernel(masks: &[u64], points: usize, g2: &[u32], table: &mut [u32]) -> u64 {
    // reach[y] = points x on player 0's head such that player 1 wins at (x, y).
    let mut reach = [0u64; 64];
    for (x, &guess) in g2.iter().enumerate() {
        let mut w = masks[guess as usize];
        while w != 0 {
            let y = w.trailing_zeros() as usize;
            reach[y] |= 1 << x;
            w &= w - 1;
        }
    }
    let mut total = 0u64;
    for y in 0..points {
        let mut best = 0u32;
        let mut best_j = 0u32;
        for (j, &m) in masks.iter().enumerate() {
            let c = (m & reach[y]).count_ones();
            if c > best {
                best = c;
                best_j = j as u32;
            }
        }
        table[y] = best_j;
        total += best as u64;
    }
    total
}

/// Two-player best response: for a fixed table of the second player, the
/// optimal table of the first and the exact value of the pair. Ties pick the
/// least winning-set index.
pub fn best_response(family: &WinningFamily, g2: &[u32]) -> Result<(Vec<u32>, BigRational)> {
    let masks = family.masks()?;
    let points = family.points();
    if g2.len() != points || g2.iter().any(|&g| g as usize >= family.len()) {
        return Err(Error::InvalidParameter("player-2 table has wrong size or index".into()));
    }
    let mut table = vec![0u32; points];
    let total = best_response_kernel(&masks, points, g2, &mut table);
    Ok((table, dyadic(total, 2 * family.n() as u32)))
}

fn decode_table(mut index: u64, r: u64, points: usize, out: &mut [u32]) {
    for slot in out[..points].iter_mut().rev() {
        *slot = (index % r) as u32;
        index /= r;
    }
}

/// Advances a mixed-radix counter (last slot least significant).
fn increment_table(table: &mut [u32], r: u32) {
    for slot in table.iter_mut().rev() {
        *slot += 1;
        if *slot < r {
            return;
        }
        *slot = 0;
    }
}

/// Exact `p(2, n)` for the family by enumerating every table of the second
/// player (equivalently every partition `B = ∪ V_i`) and best-responding.
///
/// If the `r^(2^n)` tables exceed `table_budget`, falls back to coordinate
/// ascent and reports a lower bound.
pub fn exact_value_two_players(family: &WinningFamily, table_budget: u64) -> Result<GameValue> {
    let masks = family.masks()?;
    let points = family.points();
    let r = family.len() as u64;
    let total = (r as u128).checked_pow(points as u32).unwrap_or(u128::MAX);
    if total > table_budget as u128 {
        let mut v = nested_lower_bound(family, 2, 0, 4)?;
        v.mode = ValueMode::LowerBound;
        return Ok(v);
    }
    let total = total as u64;
    let chunks = total.clamp(1, 4096);
    let per = total.div_ceil(chunks);
    // (count, index) of the best table per chunk; the first maximum wins.
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * per;
            let end = ((c + 1) * per).min(total);
            let mut g2 = vec![0u32; points];
            let mut scratch = vec![0u32; points];
            let mut best: Option<(u64, u64)> = None;
            if start < end {
                decode_table(start, r, points, &mut g2);
            }
            for index in start..end {
                let v = best_response_kernel(&masks, points, &g2, &mut scratch);
                if best.is_none_or(|(b, _)| v > b) {
                    best = Some((v, index));
                }
                increment_table(&mut g2, r as u32);
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .fold((0u64, 0u64), |acc, b| if b.0 > acc.0 { b } else { acc });
    let mut g2 = vec![0u32; points];
    decode_table(best.1, r, points, &mut g2);
    let (table, value) = best_response(family, &g2)?;
    Ok(GameValue {
        t: 2,
        n: family.n(),
        kind: family.kind(),
        value,
        witness: Some(Strategy { t: 2, n: family.n(), tables: vec![table, g2] }),
        mode: ValueMode::Exact,
    })
}

/// Replaces player `i`'s table by an exact best response to the others and
/// returns the new number of winning tuples.
pub fn improve_player(family: &WinningFamily, s: &mut Strategy, i: usize) -> u64 {
    let (t, n) = (s.t, s.n);
    let points = 1usize << n;
    let views = view_count(t, n);
    let r = family.len();
    let frozen = &*s;
    let updates: Vec<(u32, u64)> = (0..views)
        .into_par_iter()
        .map(|view| {
            // Points on player i's head for which every other player wins.
            let mut others = VertexSet::empty(points);
            for own in 0..points {
                let x = insert_coordinate(view, own, i, t, n);
                let ok = (0..t)
                    .filter(|&k| k != i)
                    .all(|k| family.contains(frozen.tables[k][view_of(x, k, t, n)] as usize, coordinate(x, k, t, n)));
                if ok {
                    others.insert(own);
                }
            }
            let mut best = (0u64, 0u32);
            for j in 0..r {
                let c = family.sets[j].intersection_count(&others) as u64;
                if c > best.0 {
                    best = (c, j as u32);
                }
            }
            (best.1, best.0)
        })
        .collect();
    let mut total = 0;
    for (slot, (guess, count)) in s.tables[i].iter_mut().zip(updates) {
        *slot = guess;
        total += count;
    }
    total
}

/// Coordinate ascent from `start`: cycles through the players replacing each
/// table by its best response until a full round brings no strict gain.
/// Returns the final strategy and the winning count after every replacement.
pub fn coordinate_ascent(family: &WinningFamily, start: Strategy) -> Result<(Strategy, Vec<u64>)> {
    start.validate(family)?;
    let size = tuple_space(start.t, start.n);
    if size > ASCENT_GUARD {
        return Err(Error::Guard { what: "tuple space for ascent", size, limit: ASCENT_GUARD });
    }
    let mut s = start;
    let mut history = vec![count_winning(family, &s)?];
    loop {
        let before = *history.last().expect("non-empty");
        for i in 0..s.t {
            history.push(improve_player(family, &mut s, i));
        }
        if *history.last().expect("non-empty") <= before {
            break;
        }
    }
    Ok((s, history))
}

/// A certified lower bound on `p(t, n)`: coordinate ascent from the
/// least-index strategy and from `restarts` seeded random strategies. The
/// reported value is recounted from the returned witness.
pub fn nested_lower_bound(family: &WinningFamily, t: usize, seed: u64, restarts: usize) -> Result<GameValue> {
    if t == 0 {
        return Err(Error::InvalidParameter("need at least one player".into()));
    }
    let n = family.n();
    let views = view_count(t, n);
    let r = family.len() as u32;
    let mut best: Option<(u64, Strategy)> = None;
    for restart in 0..=restarts {
        let start = if restart == 0 {
            Strategy::least_index(t, n)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(restart as u64);
            let tables = (0..t).map(|_| (0..views).map(|_| rng.random_range(0..r)).collect()).collect();
            Strategy { t, n, tables }
        };
        let (s, history) = coordinate_ascent(family, start)?;
        let value = *history.last().expect("non-empty");
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, s));
        }
    }
    let (claimed, witness) = best.expect("at least one start");
    let value = if tuple_space(t, n) <= MEMBERSHIP_GUARD {
        winning_set_of_strategy(family, &witness)?.1
    } else {
        dyadic(count_winning(family, &witness)?, (n * t) as u32)
    };
    debug_assert_eq!(value, dyadic(claimed, (n * t) as u32));
    Ok(GameValue { t, n, kind: family.kind(), value, witness: Some(witness), mode: ValueMode::LowerBound })
}

/// `R_v = {i : v ∈ W_i}`.
pub fn r_v_distribution(family: &WinningFamily, v: usize) -> Vec<usize> {
    (0..family.len()).filter(|&i| family.contains(i, v)).collect()
}

/// Exact `Pr[i ∈ R_v | J ⊆ R_v]` over uniform `v ∈ B`, and whether it is at
/// least 1/2.
pub fn check_positive_correlation(family: &WinningFamily, j: &[usize], i: usize) -> Result<(BigRational, bool)> {
    if i >= family.len() || j.iter().any(|&x| x >= family.len()) {
        return Err(Error::InvalidParameter("winning-set index out of range".into()));
    }
    let mut condition = 0u64;
    let mut joint = 0u64;
    for v in 0..family.points() {
        if j.iter().all(|&x| family.contains(x, v)) {
            condition += 1;
            if family.contains(i, v) {
                joint += 1;
            }
        }
    }
    if condition == 0 {
        return Err(Error::EmptyConditioning);
    }
    let p = ratio(joint, condition);
    let pass = p >= BigRational::new(BigInt::from(1), BigInt::from(2));
    Ok((p, pass))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> BigRational {
        ratio(1, 2)
    }

    #[test]
    fn dictator_family() {
        let f = winning_family(FamilyKind::Dictator, 3).unwrap();
        assert_eq!(f.len(), 3);
        assert!((0..3).all(|i| f.measure(i) == half()));
        assert!(f.contains(1, 0b010) && !f.contains(1, 0b101));
    }

    #[test]
    fn intersecting_n2_is_two_dictators() {
        let f = winning_family(FamilyKind::Intersecting, 2).unwrap();
        let sets: Vec<Vec<usize>> = f.sets().iter().map(VertexSet::to_vec).collect();
        assert_eq!(sets, vec![vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn monotone_n2_is_two_dictators() {
        assert_eq!(monotone_masks(2).len(), 6);
        let f = winning_family(FamilyKind::Monotone, 2).unwrap();
        let sets: Vec<Vec<usize>> = f.sets().iter().map(VertexSet::to_vec).collect();
        assert_eq!(sets, vec![vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn monotone_function_counts() {
        // Dedekind numbers.
        let counts: Vec<usize> = (0..=5).map(|n| monotone_masks(n).len()).collect();
        assert_eq!(counts, vec![2, 3, 6, 20, 168, 7581]);
    }

    #[test]
    fn guards() {
        assert!(winning_family(FamilyKind::Intersecting, 5).is_err());
        assert!(winning_family(FamilyKind::Monotone, 6).is_err());
        assert!(winning_family(FamilyKind::Dictator, 0).is_err());
    }

    #[test]
    fn view_codec() {
        let (t, n) = (3, 2);
        for x in 0..64 {
            for i in 0..t {
                let v = view_of(x, i, t, n);
                assert!(v < 16);
                assert_eq!(insert_coordinate(v, coordinate(x, i, t, n), i, t, n), x);
            }
        }
        // x = (01, 10, 11): player 1 sees (01, 11).
        assert_eq!(view_of(0b01_10_11, 1, 3, 2), 0b01_11);
    }

    #[test]
    fn one_player_values() {
        for n in 1..=4 {
            assert_eq!(exact_value_one_player(&winning_family(FamilyKind::Dictator, n).unwrap()).value, half());
            assert_eq!(exact_value_one_player(&winning_family(FamilyKind::Intersecting, n).unwrap()).value, half());
        }
        assert_eq!(exact_value_one_player(&winning_family(FamilyKind::Monotone, 5).unwrap()).value, half());
    }

    #[test]
    fn single_player_winning_set_is_the_chosen_set() {
        let f = winning_family(FamilyKind::Intersecting, 3).unwrap();
        let s = Strategy { t: 1, n: 3, tables: vec![vec![2]] };
        let (w, m) = winning_set_of_strategy(&f, &s).unwrap();
        assert_eq!(w, f.sets()[2]);
        assert_eq!(m, f.measure(2));
    }

    #[test]
    fn two_players_one_hat() {
        let f = winning_family(FamilyKind::Dictator, 1).unwrap();
        let s = Strategy::least_index(2, 1);
        let (w, m) = winning_set_of_strategy(&f, &s).unwrap();
        assert_eq!(w.to_vec(), vec![0b11]);
        assert_eq!(m, ratio(1, 4));
        let (_, v) = best_response(&f, &[0, 0]).unwrap();
        assert_eq!(v, ratio(1, 4));
        assert_eq!(exact_value_two_players(&f, 1 << 20).unwrap().value, ratio(1, 4));
    }

    #[test]
    fn three_players_one_hat_forced() {
        let f = winning_family(FamilyKind::Dictator, 1).unwrap();
        let v = nested_lower_bound(&f, 3, 1, 2).unwrap();
        assert_eq!(v.value, ratio(1, 8));
        assert_eq!(v.mode, ValueMode::LowerBound);
    }

    #[test]
    fn correlation_checks() {
        let d = winning_family(FamilyKind::Dictator, 2).unwrap();
        assert_eq!(r_v_distribution(&d, 0b11), vec![0, 1]);
        assert!(r_v_distribution(&d, 0).is_empty());
        assert_eq!(check_positive_correlation(&d, &[0], 1).unwrap(), (half(), true));
        assert_eq!(check_positive_correlation(&d, &[], 1).unwrap(), (half(), true));
        let f = winning_family(FamilyKind::Intersecting, 3).unwrap();
        for i in 0..f.len() {
            let marginal = (0..8).filter(|&v| r_v_distribution(&f, v).contains(&i)).count();
            assert_eq!(marginal, 4);
        }
    }

    #[test]
    fn empty_conditioning_is_an_error() {
        // Two disjoint-support conditions never hold together.
        let f = winning_family(FamilyKind::Dictator, 1).unwrap();
        let mut g = f.clone();
        g.sets.push(VertexSet::empty(2));
        assert_eq!(check_positive_correlation(&g, &[1], 0), Err(Error::EmptyConditioning));
    }

    #[test]
    fn budget_fallback_reports_lower_bound() {
        let f = winning_family(FamilyKind::Dictator, 3).unwrap();
        let v = exact_value_two_players(&f, 10).unwrap();
        assert_eq!(v.mode, ValueMode::LowerBound);
        let exact = exact_value_two_players(&f, 1 << 20).unwrap();
        assert!(v.value <= exact.value);
    }
}

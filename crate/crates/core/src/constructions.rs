//! Graph families used throughout the crate.
//!
//! Indexing conventions:
//!
//! * Hypercube words: vertex `i` is the `n`-bit word `i`, bit `j` of the word
//!   being coordinate `x_{j+1}`.
//! * Shift graph: ordered pairs `(i, j)` over `1..=2k`, `i != j`, in
//!   lexicographic order.
//! * Products: mixed radix, first factor most significant, so
//!   `(x, v) ↦ x·|V(H)| + v`.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par::*;

/// Default vertex-count limit for products, powers and hypercube families.
pub const DEFAULT_SIZE_LIMIT: usize = 4096;

/// Mixed-radix codec between flat product indices and coordinate tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductIndex {
    sizes: Vec<usize>,
}

impl ProductIndex {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::InvalidParameter("product factors must be non-empty".into()));
        }
        sizes
            .iter()
            .try_fold(1usize, |acc, &s| acc.checked_mul(s))
            .ok_or_else(|| Error::InvalidParameter("product size overflows".into()))?;
        Ok(ProductIndex { sizes })
    }

    pub fn factor_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn encode(&self, coords: &[usize]) -> usize {
        assert_eq!(coords.len(), self.sizes.len());
        coords.iter().zip(&self.sizes).fold(0, |acc, (&c, &s)| {
            debug_assert!(c < s);
            acc * s + c
        })
    }

    pub fn decode(&self, mut flat: usize) -> Vec<usize> {
        let mut coords = vec![0; self.sizes.len()];
        for (c, &s) in coords.iter_mut().zip(&self.sizes).rev() {
            *c = flat % s;
            flat /= s;
        }
        coords
    }
}

fn guard(what: &'static str, size: u128, limit: usize) -> Result<()> {
    if size > limit as u128 {
        return Err(Error::Guard { what, size, limit: limit as u128 });
    }
    Ok(())
}

/// `K(n)`: words of `{0,1}^n`, adjacent iff their supports are disjoint. The
/// all-zero word is disjoint from itself and carries a self-loop.
pub fn kneser_hypercube(n: usize) -> Result<Graph> {
    if !(1..=20).contains(&n) {
        return Err(Error::InvalidParameter(format!("kneser_hypercube needs 1 <= n <= 20, got {n}")));
    }
    let size = 1usize << n;
    let rows = (0..size)
        .into_par_iter()
        .map(|x| {
            // Disjoint support: y ⊆ complement(x). Enumerate submasks.
            let free = !x & (size - 1);
            let mut row = VertexSet::empty(size);
            let mut y = free;
            loop {
                row.insert(y);
                if y == 0 {
                    break;
                }
                y = (y - 1) & free;
            }
            row
        })
        .collect();
    Graph::from_rows(rows)
}

/// `G □ H` with `G` as the major factor. The vertex `(x, v)` is self-looped iff
/// `x` or `v` is.
pub fn hamming_product(g: &Graph, h: &Graph, limit: usize) -> Result<Graph> {
    guard("product vertex count", g.n() as u128 * h.n() as u128, limit)?;
    let index = ProductIndex::new(vec![g.n(), h.n()])?;
    let n = index.len();
    let hn = h.n();
    let rows = (0..n)
        .into_par_iter()
        .map(|flat| {
            let (x, v) = (flat / hn, flat % hn);
            let mut row = VertexSet::empty(n);
            for u in h.neighbors(v).iter() {
                row.insert(x * hn + u);
            }
            for y in g.neighbors(x).iter() {
                row.insert(y * hn + v);
            }
            row
        })
        .collect();
    Graph::from_rows(rows)
}

/// `G^{□t}`, left-associated.
pub fn hamming_power(g: &Graph, t: usize, limit: usize) -> Result<Graph> {
    if t == 0 {
        return Err(Error::InvalidParameter("hamming_power needs t >= 1".into()));
    }
    let size = (g.n() as u128).checked_pow(t as u32).unwrap_or(u128::MAX);
    guard("power vertex count", size, limit)?;
    let mut acc = g.clone();
    for _ in 1..t {
        acc = hamming_product(&acc, g, limit)?;
    }
    Ok(acc)
}

/// Shift graph on ordered pairs over `1..=2k`; `(a, b) ~ (c, d)` iff `b = c` or
/// `d = a`.
pub fn shift_graph(k: usize, limit: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::InvalidParameter("shift_graph needs k >= 1".into()));
    }
    let pairs = shift_pairs(k);
    guard("shift graph vertex count", pairs.len() as u128, limit)?;
    let n = pairs.len();
    let mut g = Graph::edgeless(n)?;
    for (u, &(a, b)) in pairs.iter().enumerate() {
        for (v, &(c, d)) in pairs.iter().enumerate().skip(u + 1) {
            if b == c || d == a {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// Vertex labels of [`shift_graph`] as 1-based ordered pairs.
pub fn shift_pairs(k: usize) -> Vec<(usize, usize)> {
    let m = 2 * k;
    (1..=m).flat_map(|i| (1..=m).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

/// Cayley graph of `Z_2^m`: words adjacent iff their Hamming distance exceeds
/// `m - 2t`.
pub fn cayley_distance_graph(m: usize, t: usize, limit: usize) -> Result<Graph> {
    if m == 0 || !m.is_multiple_of(2) || t == 0 || 4 * t * t > m {
        return Err(Error::InvalidParameter(format!(
            "cayley_distance_graph needs even m, t >= 1 and 4t^2 <= m (got m={m}, t={t})"
        )));
    }
    if m >= 64 {
        return Err(Error::Guard { what: "cayley graph vertex count", size: u128::MAX, limit: limit as u128 });
    }
    guard("cayley graph vertex count", 1u128 << m, limit)?;
    let size = 1usize << m;
    let threshold = (m - 2 * t) as u32;
    let rows = (0..size)
        .into_par_iter()
        .map(|x| VertexSet::from_indices(size, (0..size).filter(|&y| ((x ^ y) as u64).count_ones() > threshold)))
        .collect();
    Graph::from_rows(rows)
}

/// `G(n, p)` from a ChaCha8 stream seeded with `seed`; pairs are visited in
/// lexicographic order.
pub fn random_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::edgeless(n)?;
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// A named construction, as accepted on the command line
/// (`kneser:3`, `kneser-power:3,2`, `shift:2`, `cayley:4,1`, `gnp:30,0.5,7`,
/// `edgeless:5`, `complete:5`, `cycle:5`).
#[derive(Debug, Clone, PartialEq)]
pub enum Construction {
    Kneser { n: usize },
    KneserPower { n: usize, t: usize },
    Shift { k: usize },
    Cayley { m: usize, t: usize },
    Gnp { n: usize, p: f64, seed: u64 },
    Edgeless { n: usize },
    Complete { n: usize },
    Cycle { n: usize },
}

impl Construction {
    pub fn build(&self, limit: usize) -> Result<Graph> {
        match *self {
            Construction::Kneser { n } => {
                guard("kneser vertex count", 1u128 << n.min(64), limit)?;
                kneser_hypercube(n)
            }
            Construction::KneserPower { n, t } => hamming_power(&kneser_hypercube(n)?, t, limit),
            Construction::Shift { k } => shift_graph(k, limit),
            Construction::Cayley { m, t } => cayley_distance_graph(m, t, limit),
            Construction::Gnp { n, p, seed } => random_gnp(n, p, seed),
            Construction::Edgeless { n } => Graph::edgeless(n),
            Construction::Complete { n } => Graph::complete(n),
            Construction::Cycle { n } => {
                if n < 3 {
                    return Err(Error::InvalidParameter("cycle needs n >= 3".into()));
                }
                Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
            }
        }
    }

    /// Semantic label of every vertex.
    pub fn labels(&self) -> Vec<String> {
        let word = |x: usize, bits: usize| format!("{x:0bits$b}");
        match *self {
            Construction::Kneser { n } => (0..1usize << n).map(|x| word(x, n)).collect(),
            Construction::KneserPower { n, t } => {
                let index = ProductIndex::new(vec![1 << n; t]).expect("valid factors");
                (0..index.len())
                    .map(|flat| {
                        let parts: Vec<String> = index.decode(flat).into_iter().map(|x| word(x, n)).collect();
                        format!("({})", parts.join(","))
                    })
                    .collect()
            }
            Construction::Shift { k } => shift_pairs(k).into_iter().map(|(i, j)| format!("({i},{j})")).collect(),
            Construction::Cayley { m, .. } => (0..1usize << m).map(|x| word(x, m)).collect(),
            Construction::Gnp { n, .. }
            | Construction::Edgeless { n }
            | Construction::Complete { n }
            | Construction::Cycle { n } => (0..n).map(|v| v.to_string()).collect(),
        }
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unrecognised construction {s:?}"));
        let (name, args) = s.split_once(':').ok_or_else(bad)?;
        let args: Vec<&str> = args.split(',').map(str::trim).collect();
        let int = |i: usize| -> Result<usize> { args.get(i).and_then(|a| a.parse().ok()).ok_or_else(bad) };
        let arity = |k: usize| if args.len() == k { Ok(()) } else { Err(bad()) };
        Ok(match name {
            "kneser" => {
                arity(1)?;
                Construction::Kneser { n: int(0)? }
            }
            "kneser-power" => {
                arity(2)?;
                Construction::KneserPower { n: int(0)?, t: int(1)? }
            }
            "shift" => {
                arity(1)?;
                Construction::Shift { k: int(0)? }
            }
            "cayley" => {
                arity(2)?;
                Construction::Cayley { m: int(0)?, t: int(1)? }
            }
            "gnp" => {
                arity(3)?;
                let p = args[1].parse().map_err(|_| bad())?;
                let seed = args[2].parse().map_err(|_| bad())?;
                Construction::Gnp { n: int(0)?, p, seed }
            }
            "edgeless" => {
                arity(1)?;
                Construction::Edgeless { n: int(0)? }
            }
            "complete" => {
                arity(1)?;
                Construction::Complete { n: int(0)? }
            }
            "cycle" => {
                arity(1)?;
                Construction::Cycle { n: int(0)? }
            }
            _ => return Err(bad()),
        })
    }
}

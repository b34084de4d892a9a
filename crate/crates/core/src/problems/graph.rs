use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::mix_seed;
use crate::error::{Error, Result};

/// Pairing attempts before the generator gives up.
const MAX_PAIRING_ATTEMPTS: u64 = 100_000;

/// Simple undirected graph on vertices `0..n_vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
    seed: u64,
}

impl Graph {
    /// Builds a graph from an edge list. Pairs are canonicalised to `(lo, hi)`
    /// and sorted; self-loops, duplicates and out-of-range vertices are rejected.
    pub fn new(
        n_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        seed: u64,
    ) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::Parameter("graph needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n_vertices || b >= n_vertices {
                return Err(Error::Parameter(format!(
                    "edge ({a}, {b}) out of range for {n_vertices} vertices"
                )));
            }
            if a == b {
                return Err(Error::Parameter(format!("self-loop on vertex {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::Parameter(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(Graph { n_vertices, edges: set.into_iter().collect(), seed })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Edges as sorted `(lo, hi)` pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }
}

/// Random `d`-regular simple graph from the pairing (configuration) model.
///
/// Each attempt shuffles the `n*d` half-edges with a ChaCha8 stream seeded
/// from `(seed, attempt)` and pairs neighbours; pairings with loops or
/// multi-edges are rejected and the next derived sub-seed is tried.
pub fn gen_regular_graph(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if n == 0 || d == 0 {
        return Err(Error::Parameter("n and d must be positive".into()));
    }
    if d >= n {
        return Err(Error::Parameter(format!("degree {d} must be below n = {n}")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(Error::Parameter(format!("n*d = {} must be even", n * d)));
    }

    let mut stubs: Vec<usize> = Vec::with_capacity(n * d);
    'attempt: for attempt in 0..MAX_PAIRING_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, attempt));
        stubs.clear();
        stubs.extend((0..n).flat_map(|v| std::iter::repeat_n(v, d)));
        stubs.shuffle(&mut rng);

        let mut edges = BTreeSet::new();
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !edges.insert((a, b)) {
                continue 'attempt;
            }
        }
        return Graph::new(n, edges, seed);
    }
    Err(Error::Resource(format!(
        "pairing model produced no simple {d}-regular graph on {n} vertices in {MAX_PAIRING_ATTEMPTS} attempts"
    )))
}

//! Fixed Watts-Strogatz small-world social graph.

use std::collections::{BTreeSet, VecDeque};
use std::io::Write;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("base degree k={0} must be even and at least 2")]
    InvalidDegree(usize),
    #[error("node count n={n} must exceed base degree k={k}")]
    TooFewNodes { n: usize, k: usize },
    #[error("rewiring probability p={0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("node index {index} out of range for graph of {n} nodes")]
    IndexOutOfRange { index: usize, n: usize },
}

/// Undirected simple graph stored as sorted adjacency sets. Immutable once
/// built.
#[derive(Debug, Clone, PartialEq)]
pub struct SocialGraph {
    k: usize,
    p: f64,
    adjacency: Vec<BTreeSet<usize>>,
}

impl SocialGraph {
    /// Ring lattice joining each node to its `k/2` nearest neighbours on
    /// either side, then each lattice edge `(i, i+j)` visited in `(i, j)` order
    /// and, with probability `p`, rewired to a uniform new endpoint that is
    /// neither `i` nor an existing neighbour of `i`. Edges with no valid new
    /// endpoint are kept.
    pub fn watts_strogatz<R: Rng + ?Sized>(
        n: usize,
        k: usize,
        p: f64,
        rng: &mut R,
    ) -> Result<Self, GraphError> {
        if k < 2 || !k.is_multiple_of(2) {
            return Err(GraphError::InvalidDegree(k));
        }
        if n <= k {
            return Err(GraphError::TooFewNodes { n, k });
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(GraphError::InvalidProbability(p));
        }
        let mut adjacency = vec![BTreeSet::new(); n];
        for i in 0..n {
            for j in 1..=k / 2 {
                let v = (i + j) % n;
                adjacency[i].insert(v);
                adjacency[v].insert(i);
            }
        }
        for i in 0..n {
            for j in 1..=k / 2 {
                let v = (i + j) % n;
                if !rng.random_bool(p) {
                    continue;
                }
                let candidates: Vec<usize> = (0..n)
                    .filter(|&w| w != i && !adjacency[i].contains(&w))
                    .collect();
                if candidates.is_empty() {
                    continue;
                }
                let w = candidates[rng.random_range(0..candidates.len())];
                adjacency[i].remove(&v);
                adjacency[v].remove(&i);
                adjacency[i].insert(w);
                adjacency[w].insert(i);
            }
        }
        Ok(Self { k, p, adjacency })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn base_degree(&self) -> usize {
        self.k
    }

    pub fn rewiring_probability(&self) -> f64 {
        self.p
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Neighbours of `index` in ascending order.
    pub fn neighbors(&self, index: usize) -> Result<Vec<usize>, GraphError> {
        self.adjacency
            .get(index)
            .map(|s| s.iter().copied().collect())
            .ok_or(GraphError::IndexOutOfRange {
                index,
                n: self.node_count(),
            })
    }

    pub(crate) fn neighbor_set(&self, index: usize) -> &BTreeSet<usize> {
        &self.adjacency[index]
    }

    /// Every edge once as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.range(i + 1..).map(move |&j| (i, j)))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == n
    }

    /// One `i j` pair per line.
    pub fn write_edgelist<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (i, j) in self.edges() {
            writeln!(out, "{i} {j}")?;
        }
        Ok(())
    }
}

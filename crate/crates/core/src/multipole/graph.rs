use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected multigraph on vertices `0..n`. Loops and parallel edges
/// are representable; edge ids are positions in `edges`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Graph> {
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::MalformedInput(format!("edge ({a},{b}) out of range for {n} vertices")));
        }
        Ok(Graph { n, edges })
    }

    pub fn empty() -> Graph {
        Graph { n: 0, edges: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// For every vertex, its `(neighbour, edge id)` pairs in edge order.
    /// A loop appears twice.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum()
    }

    pub fn is_cubic(&self) -> bool {
        self.adjacency().iter().all(|a| a.len() == 3)
    }

    pub fn require_cubic(&self) -> Result<()> {
        match self.adjacency().iter().position(|a| a.len() != 3) {
            None => Ok(()),
            Some(v) => Err(Error::NotCubic(format!("vertex {v} has degree {}", self.degree(v)))),
        }
    }

    /// No loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().all(|&(a, b)| a != b && seen.insert((a.min(b), a.max(b))))
    }

    /// Id of the first edge joining `u` and `v`.
    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.iter().position(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        self.adjacency()[v].iter().map(|&(w, _)| w).collect()
    }

    /// Relabels vertices by `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::MalformedInput("permutation length differs from order".into()));
        }
        Graph::new(self.n, self.edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect())
    }

    /// Edges as sorted pairs, sorted. Two graphs on the same labelled
    /// vertex set are equal as labelled multigraphs iff these agree.
    pub fn canonical_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        e.sort_unstable();
        e
    }

    pub fn same_labelled(&self, other: &Graph) -> bool {
        self.n == other.n && self.canonical_edges() == other.canonical_edges()
    }
}

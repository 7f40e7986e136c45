//! Catalogue of small cubic graphs. All builders are deterministic.

use super::Graph;
use crate::error::{Error, Result};

/// Keys accepted by [`named_graph`].
pub const NAMED_GRAPHS: [&str; 8] = ["K4", "K33", "Petersen", "Heawood", "Q3", "GP(8,3)", "GP(10,3)", "GP(12,5)"];

pub fn k4() -> Graph {
    Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

/// Parts `{0,1,2}` and `{3,4,5}`.
pub fn k33() -> Graph {
    let edges = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
    Graph::new(6, edges).unwrap()
}

/// Outer cycle `0..n`, spokes `i ~ n+i`, inner edges `n+i ~ n+(i+k mod n)`.
pub fn generalized_petersen(n: usize, k: usize) -> Result<Graph> {
    if n < 3 || k == 0 || 2 * k >= n {
        return Err(Error::MalformedInput(format!("GP({n},{k}) needs n >= 3 and 0 < k < n/2")));
    }
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.extend((0..n).map(|i| (i, n + i)));
    edges.extend((0..n).map(|i| (n + i, n + (i + k) % n)));
    Graph::new(2 * n, edges)
}

pub fn petersen() -> Graph {
    generalized_petersen(5, 2).unwrap()
}

/// Hamiltonian cycle `0..14` plus chords `i ~ i+5` for even `i`.
pub fn heawood() -> Graph {
    let mut edges: Vec<(usize, usize)> = (0..14).map(|i| (i, (i + 1) % 14)).collect();
    edges.extend((0..14).step_by(2).map(|i| (i, (i + 5) % 14)));
    Graph::new(14, edges).unwrap()
}

/// The 3-cube: vertices are 3-bit words, adjacent when they differ in one bit.
pub fn cube() -> Graph {
    let mut edges = Vec::new();
    for v in 0..8usize {
        for bit in [1, 2, 4] {
            if v & bit == 0 {
                edges.push((v, v | bit));
            }
        }
    }
    Graph::new(8, edges).unwrap()
}

pub fn named_graph(key: &str) -> Result<Graph> {
    let norm: String = key.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    match norm.as_str() {
        "k4" => Ok(k4()),
        "k33" | "k3,3" => Ok(k33()),
        "petersen" => Ok(petersen()),
        "heawood" => Ok(heawood()),
        "q3" | "cube" => Ok(cube()),
        _ => {
            let inner = norm
                .strip_prefix("gp(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| Error::MalformedInput(format!("unknown graph {key:?}")))?;
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| Error::MalformedInput(format!("unknown graph {key:?}")))?;
            let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::MalformedInput(format!("unknown graph {key:?}")));
            generalized_petersen(parse(a)?, parse(b)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipole::{girth, is_bipartite};

    #[test]
    fn orders_and_girths() {
        let expected = [
            ("K4", 4, 3),
            ("K33", 6, 4),
            ("Petersen", 10, 5),
            ("Heawood", 14, 6),
            ("Q3", 8, 4),
            ("GP(8,3)", 16, 6),
            ("GP(10,3)", 20, 6),
            ("GP(12,5)", 24, 6),
        ];
        for (key, n, g) in expected {
            let graph = named_graph(key).unwrap();
            assert_eq!(graph.n(), n, "{key}");
            assert!(graph.is_cubic() && graph.is_simple(), "{key}");
            assert_eq!(girth(&graph).unwrap(), g, "{key}");
        }
    }

    #[test]
    fn bipartite_members() {
        for key in ["K33", "Heawood", "Q3", "GP(8,3)", "GP(10,3)", "GP(12,5)"] {
            assert!(is_bipartite(&named_graph(key).unwrap()).is_some(), "{key}");
        }
        assert!(is_bipartite(&petersen()).is_none());
        assert!(named_graph("nope").is_err());
    }
}

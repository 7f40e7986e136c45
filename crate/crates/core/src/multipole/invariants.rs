use std::collections::VecDeque;

use rayon::prelude::*;

use super::Graph;
use crate::error::{Error, Result};

/// Default vertex cap for [`cyclic_edge_connectivity_at_least`].
pub const CYCLIC_CUT_CAP: usize = 128;

/// Length of a shortest cycle. Loops count 1, parallel edges 2.
pub fn girth(g: &Graph) -> Result<usize> {
    if g.edges().iter().any(|&(a, b)| a == b) {
        return Ok(1);
    }
    if !g.is_simple() {
        return Ok(2);
    }
    let adj = g.adjacency();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; g.n()];
    let mut via = vec![usize::MAX; g.n()];
    for root in 0..g.n() {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] + 1 >= best {
                break;
            }
            for &(y, e) in &adj[x] {
                if e == via[x] && dist[x] > 0 {
                    continue;
                }
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    via[y] = e;
                    queue.push_back(y);
                } else {
                    best = best.min(dist[x] + dist[y] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Err(Error::Acyclic)
    } else {
        Ok(best)
    }
}

/// A proper 2-colouring, or `None` if the graph has an odd cycle.
pub fn is_bipartite(g: &Graph) -> Option<Vec<u8>> {
    let adj = g.adjacency();
    let mut colour = vec![u8::MAX; g.n()];
    for s in 0..g.n() {
        if colour[s] != u8::MAX {
            continue;
        }
        colour[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &adj[x] {
                if colour[y] == u8::MAX {
                    colour[y] = 1 - colour[x];
                    queue.push_back(y);
                } else if colour[y] == colour[x] {
                    return None;
                }
            }
        }
    }
    Some(colour)
}

pub fn is_connected(g: &Graph) -> bool {
    if g.n() == 0 {
        return true;
    }
    let adj = g.adjacency();
    let mut seen = vec![false; g.n()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(y, _) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// True iff some edge lies on no cycle.
pub fn has_bridge(g: &Graph) -> bool {
    let adj = g.adjacency();
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // (vertex, edge used to enter, next adjacency index)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        while let Some(&mut (x, pe, ref mut i)) = stack.last_mut() {
            if *i < adj[x].len() {
                let (y, e) = adj[x][*i];
                *i += 1;
                if e == pe {
                    continue;
                }
                if disc[y] == usize::MAX {
                    disc[y] = time;
                    low[y] = time;
                    time += 1;
                    stack.push((y, e, 0));
                } else {
                    low[x] = low[x].min(disc[y]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[x]);
                    if low[x] > disc[p] {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Number of components of `g - removed` that contain a cycle.
fn cyclic_components(g: &Graph, removed: &[usize]) -> usize {
    let mut parent: Vec<usize> = (0..g.n()).collect();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if !removed.contains(&e) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let mut verts = vec![0usize; g.n()];
    let mut edges = vec![0usize; g.n()];
    for v in 0..g.n() {
        let r = find(&mut parent, v);
        verts[r] += 1;
    }
    for (e, &(a, _)) in g.edges().iter().enumerate() {
        if !removed.contains(&e) {
            let r = find(&mut parent, a);
            edges[r] += 1;
        }
    }
    (0..g.n()).filter(|&r| verts[r] > 0 && edges[r] >= verts[r]).count()
}

/// True iff no set of fewer than `k` edges separates two subgraphs that both
/// contain a cycle. Exhaustive over edge subsets of size `< k`; graphs with
/// more than `cap` vertices are rejected.
pub fn cyclic_edge_connectivity_at_least(g: &Graph, k: usize, cap: usize) -> Result<bool> {
    if g.n() > cap {
        return Err(Error::TooLarge { size: g.n(), cap });
    }
    if cyclic_components(g, &[]) >= 2 {
        return Ok(false);
    }
    let m = g.edge_count();
    for size in 1..k {
        let separated = (0..m).into_par_iter().any(|first| {
            let mut subset = vec![first];
            search_cuts(g, &mut subset, size)
        });
        if separated {
            return Ok(false);
        }
    }
    Ok(true)
}

fn search_cuts(g: &Graph, subset: &mut Vec<usize>, size: usize) -> bool {
    if subset.len() == size {
        return cyclic_components(g, subset) >= 2;
    }
    let last = *subset.last().unwrap();
    for e in last + 1..g.edge_count() {
        subset.push(e);
        let hit = search_cuts(g, subset, size);
        subset.pop();
        if hit {
            return true;
        }
    }
    false
}

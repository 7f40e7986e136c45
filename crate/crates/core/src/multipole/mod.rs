//! Cubic graphs and multipoles: graphs with dangling edges whose free ends
//! (semiedges) are grouped into ordered connectors.
//!
//! A dipole is a multipole with exactly two connectors, the input and the
//! output. An `(a,b;c)`-pole additionally carries `c` residual semiedges
//! that belong to neither connector.

mod formats;
mod graph;
mod invariants;
mod named;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use formats::{emit_dot, emit_graph6, emit_json, multipole_dot, parse_graph6, parse_json};
pub use graph::Graph;
pub use invariants::{
    cyclic_edge_connectivity_at_least, girth, has_bridge, is_bipartite, is_connected, CYCLIC_CUT_CAP,
};
pub use named::{cube, generalized_petersen, heawood, k33, k4, named_graph, petersen, NAMED_GRAPHS};

/// One end of an edge.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum End {
    Vertex(usize),
    Free,
}

/// The free end `side` (0 or 1) of edge `edge`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Semiedge {
    pub edge: usize,
    pub side: usize,
}

impl fmt::Display for Semiedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.edge, self.side)
    }
}

/// Sizes of the connectors and the number of residual semiedges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleKind {
    pub connectors: Vec<usize>,
    pub residual: usize,
}

impl PoleKind {
    pub fn is(&self, connectors: &[usize], residual: usize) -> bool {
        self.connectors == connectors && self.residual == residual
    }
}

impl fmt::Display for PoleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.connectors.iter().map(|c| c.to_string()).collect();
        write!(f, "({}", c.join(","))?;
        if self.residual > 0 {
            write!(f, ";{}", self.residual)?;
        }
        write!(f, ")")
    }
}

/// A cubic multipole. Vertices are `0..n`; each edge has two ends, each a
/// vertex or free. Free ends are listed exactly once, either in a
/// connector or among the residual semiedges. Edges whose both ends were
/// joined to each other during a junction survive only as `free_loops`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multipole {
    n: usize,
    edges: Vec<[End; 2]>,
    connectors: Vec<Vec<Semiedge>>,
    residual: Vec<Semiedge>,
    free_loops: usize,
}

impl Multipole {
    pub fn new(
        n: usize,
        edges: Vec<[End; 2]>,
        connectors: Vec<Vec<Semiedge>>,
        residual: Vec<Semiedge>,
    ) -> Result<Multipole> {
        let m = Multipole { n, edges, connectors, residual, free_loops: 0 };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let mut degree = vec![0usize; self.n];
        let mut listed: HashMap<Semiedge, bool> = HashMap::new();
        for (e, ends) in self.edges.iter().enumerate() {
            for (side, end) in ends.iter().enumerate() {
                match *end {
                    End::Vertex(v) if v < self.n => degree[v] += 1,
                    End::Vertex(v) => {
                        return Err(Error::MalformedInput(format!("edge {e} ends at missing vertex {v}")))
                    }
                    End::Free => {
                        listed.insert(Semiedge { edge: e, side }, false);
                    }
                }
            }
        }
        if let Some(v) = degree.iter().position(|&d| d != 3) {
            return Err(Error::NotCubic(format!("vertex {v} has degree {}", degree[v])));
        }
        for s in self.connectors.iter().flatten().chain(self.residual.iter()) {
            match listed.get_mut(s) {
                Some(seen @ false) => *seen = true,
                Some(true) => return Err(Error::MalformedInput(format!("semiedge {s} listed twice"))),
                None => return Err(Error::SemiedgeNotFree(s.to_string())),
            }
        }
        if let Some((s, _)) = listed.iter().find(|(_, &seen)| !seen) {
            return Err(Error::MalformedInput(format!("semiedge {s} belongs to no connector")));
        }
        Ok(())
    }

    pub fn from_graph(g: &Graph) -> Result<Multipole> {
        let edges = g.edges().iter().map(|&(a, b)| [End::Vertex(a), End::Vertex(b)]).collect();
        Multipole::new(g.n(), edges, Vec::new(), Vec::new())
    }

    /// A single vertex with three dangling edges forming one connector.
    pub fn star() -> Multipole {
        let edges = vec![[End::Vertex(0), End::Free]; 3];
        let conn = (0..3).map(|e| Semiedge { edge: e, side: 1 }).collect();
        Multipole { n: 1, edges, connectors: vec![conn], residual: Vec::new(), free_loops: 0 }
    }

    /// A single dangling edge whose two semiedges form one connector each.
    pub fn bare_edge() -> Multipole {
        Multipole {
            n: 0,
            edges: vec![[End::Free, End::Free]],
            connectors: vec![vec![Semiedge { edge: 0, side: 0 }], vec![Semiedge { edge: 0, side: 1 }]],
            residual: Vec::new(),
            free_loops: 0,
        }
    }

    /// Two adjacent vertices; the input hangs off one, the output off
    /// the other.
    pub fn edge_dipole() -> Multipole {
        let v = End::Vertex;
        let edges = vec![[v(0), v(1)], [v(0), End::Free], [v(0), End::Free], [v(1), End::Free], [v(1), End::Free]];
        let s = |e| Semiedge { edge: e, side: 1 };
        Multipole { n: 2, edges, connectors: vec![vec![s(1), s(2)], vec![s(3), s(4)]], residual: Vec::new(), free_loops: 0 }
    }

    pub fn empty() -> Multipole {
        Multipole { n: 0, edges: Vec::new(), connectors: Vec::new(), residual: Vec::new(), free_loops: 0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[[End; 2]] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn connectors(&self) -> &[Vec<Semiedge>] {
        &self.connectors
    }

    pub fn connector(&self, i: usize) -> &[Semiedge] {
        &self.connectors[i]
    }

    pub fn residual(&self) -> &[Semiedge] {
        &self.residual
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    /// All semiedges: connectors in order, then the residual ones.
    pub fn semiedges(&self) -> Vec<Semiedge> {
        self.connectors.iter().flatten().chain(self.residual.iter()).copied().collect()
    }

    pub fn semiedge_count(&self) -> usize {
        self.connectors.iter().map(Vec::len).sum::<usize>() + self.residual.len()
    }

    pub fn kind(&self) -> PoleKind {
        PoleKind { connectors: self.connectors.iter().map(Vec::len).collect(), residual: self.residual.len() }
    }

    pub fn is_dipole(&self) -> bool {
        self.connectors.len() == 2
    }

    pub fn require_kind(&self, connectors: &[usize], residual: usize) -> Result<()> {
        let k = self.kind();
        if k.is(connectors, residual) {
            Ok(())
        } else {
            let want = PoleKind { connectors: connectors.to_vec(), residual };
            Err(Error::ArityMismatch(format!("expected a {want}-pole, got a {k}-pole")))
        }
    }

    /// The three edge ids at every vertex; a loop is listed twice.
    pub fn incidence(&self) -> Vec<[usize; 3]> {
        let mut inc = vec![[usize::MAX; 3]; self.n];
        let mut fill = vec![0usize; self.n];
        for (e, ends) in self.edges.iter().enumerate() {
            for end in ends {
                if let End::Vertex(v) = *end {
                    inc[v][fill[v]] = e;
                    fill[v] += 1;
                }
            }
        }
        inc
    }

    /// Underlying graph when there are no semiedges.
    pub fn to_graph(&self) -> Result<Graph> {
        if self.semiedge_count() > 0 {
            return Err(Error::ArityMismatch(format!("{}-pole still has semiedges", self.kind())));
        }
        if self.free_loops > 0 {
            return Err(Error::MalformedInput("closure contains a vertex-free circle".into()));
        }
        let edges = self
            .edges
            .iter()
            .map(|ends| match ends {
                [End::Vertex(a), End::Vertex(b)] => (*a, *b),
                _ => unreachable!("no free ends remain"),
            })
            .collect();
        Graph::new(self.n, edges)
    }

    /// Replaces the connector layout without joining anything.
    pub fn with_layout(&self, connectors: Vec<Vec<Semiedge>>, residual: Vec<Semiedge>) -> Result<Multipole> {
        let m = Multipole { connectors, residual, ..self.clone() };
        m.validate()?;
        Ok(m)
    }

    /// Swaps the input and output connectors of a dipole.
    pub fn reversed(&self) -> Result<Multipole> {
        if !self.is_dipole() {
            return Err(Error::ArityMismatch("only dipoles can be reversed".into()));
        }
        let mut m = self.clone();
        m.connectors.swap(0, 1);
        Ok(m)
    }

    /// Disjoint union; connectors and residual semiedges are concatenated
    /// in argument order. Also returns each part's `(vertex, edge)` offset.
    pub fn disjoint_union(parts: &[&Multipole]) -> (Multipole, Vec<(usize, usize)>) {
        let mut out = Multipole::empty();
        let mut offsets = Vec::with_capacity(parts.len());
        for p in parts {
            let (vo, eo) = (out.n, out.edges.len());
            offsets.push((vo, eo));
            out.n += p.n;
            out.free_loops += p.free_loops;
            out.edges.extend(p.edges.iter().map(|ends| {
                ends.map(|end| match end {
                    End::Vertex(v) => End::Vertex(v + vo),
                    End::Free => End::Free,
                })
            }));
            let shift = |s: &Semiedge| Semiedge { edge: s.edge + eo, side: s.side };
            out.connectors.extend(p.connectors.iter().map(|c| c.iter().map(shift).collect()));
            out.residual.extend(p.residual.iter().map(shift));
        }
        (out, offsets)
    }

    /// Performs the junctions `pairs` simultaneously and installs the new
    /// layout. Layout semiedges are given in terms of `self` and must be
    /// exactly the semiedges left free by the junctions.
    pub fn weld(
        &self,
        pairs: &[(Semiedge, Semiedge)],
        connectors: &[Vec<Semiedge>],
        residual: &[Semiedge],
    ) -> Result<Multipole> {
        let mut link: HashMap<Semiedge, Semiedge> = HashMap::new();
        for &(s, t) in pairs {
            for x in [s, t] {
                if x.edge >= self.edges.len() || self.edges[x.edge][x.side] != End::Free || link.contains_key(&x) {
                    return Err(Error::SemiedgeNotFree(x.to_string()));
                }
            }
            if s == t {
                return Err(Error::SemiedgeNotFree(s.to_string()));
            }
            link.insert(s, t);
            link.insert(t, s);
        }
        let mut visited = vec![false; self.edges.len()];
        let mut new_edges: Vec<[End; 2]> = Vec::new();
        let mut remap: HashMap<Semiedge, Semiedge> = HashMap::new();
        for e in 0..self.edges.len() {
            if visited[e] {
                continue;
            }
            let start_side = match (0..2).find(|&side| !link.contains_key(&Semiedge { edge: e, side })) {
                Some(side) => side,
                None => continue,
            };
            visited[e] = true;
            let mut cur = Semiedge { edge: e, side: 1 - start_side };
            while let Some(&next) = link.get(&cur) {
                visited[next.edge] = true;
                cur = Semiedge { edge: next.edge, side: 1 - next.side };
            }
            let id = new_edges.len();
            let start = Semiedge { edge: e, side: start_side };
            let start_end = self.edges[e][start_side];
            let finish_end = self.edges[cur.edge][cur.side];
            if start_end == End::Free {
                remap.insert(start, Semiedge { edge: id, side: 0 });
            }
            if finish_end == End::Free {
                remap.insert(cur, Semiedge { edge: id, side: 1 });
            }
            new_edges.push([start_end, finish_end]);
        }
        let mut free_loops = self.free_loops;
        for e in 0..self.edges.len() {
            if visited[e] {
                continue;
            }
            // Every end of this chain is linked: a circle without vertices.
            free_loops += 1;
            let mut cur = Semiedge { edge: e, side: 1 };
            while !visited[cur.edge] {
                visited[cur.edge] = true;
                let next = link[&cur];
                cur = Semiedge { edge: next.edge, side: 1 - next.side };
            }
        }
        let map = |s: &Semiedge| remap.get(s).copied().ok_or_else(|| Error::SemiedgeNotFree(s.to_string()));
        let connectors = connectors.iter().map(|c| c.iter().map(map).collect()).collect::<Result<Vec<_>>>()?;
        let residual = residual.iter().map(map).collect::<Result<Vec<_>>>()?;
        let m = Multipole { n: self.n, edges: new_edges, connectors, residual, free_loops };
        m.validate()?;
        Ok(m)
    }

    /// Junction of two free semiedges; they leave their connectors.
    pub fn junction(&self, s: Semiedge, t: Semiedge) -> Result<Multipole> {
        let keep = |x: &&Semiedge| **x != s && **x != t;
        let connectors: Vec<Vec<Semiedge>> =
            self.connectors.iter().map(|c| c.iter().filter(keep).copied().collect()).collect();
        let residual: Vec<Semiedge> = self.residual.iter().filter(keep).copied().collect();
        self.weld(&[(s, t)], &connectors, &residual)
    }

    /// Junction of output `i` with input `pairing[i]` of an `(a,a)`-pole.
    pub fn closure(&self, pairing: Option<&[usize]>) -> Result<Graph> {
        self.closure_multipole(pairing)?.to_graph()
    }

    pub fn closure_multipole(&self, pairing: Option<&[usize]>) -> Result<Multipole> {
        if self.connectors.is_empty() && self.residual.is_empty() {
            return Ok(self.clone());
        }
        if !self.is_dipole() || !self.residual.is_empty() || self.connectors[0].len() != self.connectors[1].len() {
            return Err(Error::ArityMismatch(format!("closure needs an (a,a)-pole, got a {}-pole", self.kind())));
        }
        let a = self.connectors[0].len();
        let pairing = checked_pairing(pairing, a)?;
        let pairs: Vec<_> = (0..a).map(|i| (self.connectors[1][i], self.connectors[0][pairing[i]])).collect();
        self.weld(&pairs, &[], &[])
    }

    /// Join `self ∘ other`: output `i` of `self` meets input `pairing[i]`
    /// of `other`. Residual semiedges of `self` come first.
    pub fn join(&self, other: &Multipole, pairing: Option<&[usize]>) -> Result<Multipole> {
        if !self.is_dipole() || !other.is_dipole() || self.connectors[1].len() != other.connectors[0].len() {
            return Err(Error::ArityMismatch(format!("cannot join a {}-pole with a {}-pole", self.kind(), other.kind())));
        }
        let (u, _) = Multipole::disjoint_union(&[self, other]);
        let pairing = checked_pairing(pairing, self.connectors[1].len())?;
        let pairs: Vec<_> = (0..pairing.len()).map(|i| (u.connectors[1][i], u.connectors[2][pairing[i]])).collect();
        u.weld(&pairs, &[u.connectors[0].clone(), u.connectors[3].clone()], &u.residual)
    }

    /// Join of several dipoles from left to right.
    pub fn join_all(parts: &[&Multipole]) -> Result<Multipole> {
        let (first, rest) = parts.split_first().ok_or_else(|| Error::InvalidParts("nothing to join".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, p| acc.join(p, None))
    }

    /// Composition `self ⊙ other` of two `(2,2;1)`-poles: their join with
    /// both residual semiedges attached to a new vertex, which receives a
    /// new residual dangling edge.
    pub fn odot(&self, other: &Multipole, pairing: Option<&[usize]>) -> Result<Multipole> {
        self.require_kind(&[2, 2], 1)?;
        other.require_kind(&[2, 2], 1)?;
        let j = self.join(other, pairing)?;
        let (u, _) = Multipole::disjoint_union(&[&j, &Multipole::star()]);
        let star = &u.connectors[2];
        let pairs = [(u.residual[0], star[0]), (u.residual[1], star[1])];
        u.weld(&pairs, &u.connectors[..2], &[star[2]])
    }

    /// Connects the two residual semiedges of a `(2,2;2)`-pole.
    pub fn close_residuals(&self) -> Result<Multipole> {
        self.require_kind(&[2, 2], 2)?;
        self.weld(&[(self.residual[0], self.residual[1])], &self.connectors, &[])
    }

    /// `G_v`, `G_uv` or `G_uwv`: removes the vertices of a path with one,
    /// two or three vertices. Semiedges formerly at `u` form the input,
    /// those at `v` the output, the one at `w` is residual; within a
    /// connector they follow the order of the original edge ids.
    pub fn remove_path(g: &Graph, path: &[usize]) -> Result<Multipole> {
        g.require_cubic()?;
        let bad = || Error::PathNotInGraph(path.to_vec());
        if path.is_empty() || path.len() > 3 || path.iter().any(|&v| v >= g.n()) {
            return Err(bad());
        }
        for i in 0..path.len() {
            if path[..i].contains(&path[i]) {
                return Err(bad());
            }
        }
        let mut path_edges = Vec::new();
        for w in path.windows(2) {
            path_edges.push(g.find_edge(w[0], w[1]).ok_or_else(bad)?);
        }
        let removed = |v: usize| path.iter().position(|&p| p == v);
        let mut new_id = vec![usize::MAX; g.n()];
        let mut n = 0;
        for (v, id) in new_id.iter_mut().enumerate() {
            if removed(v).is_none() {
                *id = n;
                n += 1;
            }
        }
        let mut edges = Vec::new();
        let mut groups: Vec<Vec<Semiedge>> = vec![Vec::new(); path.len()];
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            if path_edges.contains(&e) {
                continue;
            }
            let id = edges.len();
            let mut ends = [End::Free; 2];
            for (side, x) in [a, b].into_iter().enumerate() {
                match removed(x) {
                    Some(k) => groups[k].push(Semiedge { edge: id, side }),
                    None => ends[side] = End::Vertex(new_id[x]),
                }
            }
            edges.push(ends);
        }
        let (connectors, residual) = match path.len() {
            1 => (vec![groups.remove(0)], Vec::new()),
            2 => (groups, Vec::new()),
            _ => (vec![groups[0].clone(), groups[2].clone()], groups[1].clone()),
        };
        Multipole::new(n, edges, connectors, residual)
    }

    /// The multipole induced on `vertices`, with one dangling edge per
    /// boundary edge. Boundary edges are named by `(inside, outside)`
    /// vertex pairs of `g`; every boundary edge must be named exactly once.
    /// Vertex `vertices[i]` becomes vertex `i`.
    pub fn extract(
        g: &Graph,
        vertices: &[usize],
        connectors: &[Vec<(usize, usize)>],
        residual: &[(usize, usize)],
    ) -> Result<Multipole> {
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= g.n() || local[v] != usize::MAX {
                return Err(Error::InvalidParts(format!("bad or repeated vertex {v}")));
            }
            local[v] = i;
        }
        let inside = |v: usize| local[v] != usize::MAX;
        let mut edges = Vec::new();
        let mut boundary: Vec<(usize, usize, usize)> = Vec::new();
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            match (inside(a), inside(b)) {
                (true, true) => edges.push([End::Vertex(local[a]), End::Vertex(local[b])]),
                (true, false) => boundary.push((e, a, b)),
                (false, true) => boundary.push((e, b, a)),
                (false, false) => {}
            }
        }
        let mut used = vec![false; boundary.len()];
        let mut take = |(u, v): (usize, usize), edges: &mut Vec<[End; 2]>| -> Result<Semiedge> {
            let k = (0..boundary.len())
                .find(|&k| !used[k] && boundary[k].1 == u && boundary[k].2 == v)
                .ok_or_else(|| Error::InvalidParts(format!("({u},{v}) is not a boundary edge")))?;
            used[k] = true;
            edges.push([End::Vertex(local[u]), End::Free]);
            Ok(Semiedge { edge: edges.len() - 1, side: 1 })
        };
        let mut conns = Vec::new();
        for c in connectors {
            let mut out = Vec::new();
            for &p in c {
                out.push(take(p, &mut edges)?);
            }
            conns.push(out);
        }
        let mut res = Vec::new();
        for &p in residual {
            res.push(take(p, &mut edges)?);
        }
        if let Some(k) = used.iter().position(|u| !u) {
            let (_, a, b) = boundary[k];
            return Err(Error::InvalidParts(format!("boundary edge ({a},{b}) not assigned to a connector")));
        }
        Multipole::new(vertices.len(), edges, conns, res)
    }
}

fn checked_pairing(pairing: Option<&[usize]>, a: usize) -> Result<Vec<usize>> {
    match pairing {
        None => Ok((0..a).collect()),
        Some(p) => {
            let mut sorted = p.to_vec();
            sorted.sort_unstable();
            if sorted != (0..a).collect::<Vec<_>>() {
                return Err(Error::ArityMismatch(format!("{p:?} is not a pairing of {a} semiedges")));
            }
            Ok(p.to_vec())
        }
    }
}

impl TryFrom<&Graph> for Multipole {
    type Error = Error;
    fn try_from(g: &Graph) -> Result<Multipole> {
        Multipole::from_graph(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn junction_of_bare_edges() {
        let (u, _) = Multipole::disjoint_union(&[&Multipole::bare_edge(), &Multipole::bare_edge()]);
        let s = u.connectors()[1][0];
        let t = u.connectors()[2][0];
        let j = u.junction(s, t).unwrap();
        assert_eq!(j.edge_count(), 1);
        assert_eq!(j.semiedge_count(), 2);
        assert_eq!(j.edges()[0], [End::Free, End::Free]);
    }

    #[test]
    fn junction_of_path_gives_cycle() {
        let e = Multipole::bare_edge();
        let j = e.junction(e.connectors()[0][0], e.connectors()[1][0]).unwrap();
        assert_eq!(j.free_loops(), 1);
        assert_eq!(j.edge_count(), 0);
    }

    #[test]
    fn junction_rejects_used_semiedges() {
        let e = Multipole::bare_edge();
        let s = e.connectors()[0][0];
        assert!(matches!(e.junction(s, s), Err(Error::SemiedgeNotFree(_))));
        let bogus = Semiedge { edge: 7, side: 0 };
        assert!(matches!(e.junction(s, bogus), Err(Error::SemiedgeNotFree(_))));
    }

    #[test]
    fn remove_path_shapes() {
        let p = petersen();
        let d = Multipole::remove_path(&p, &[0, 1]).unwrap();
        assert_eq!(d.n(), 8);
        assert!(d.kind().is(&[2, 2], 0));
        let b = Multipole::remove_path(&k33(), &[0, 3, 1]).unwrap();
        assert_eq!(b.n(), 3);
        assert!(b.kind().is(&[2, 2], 1));
        let hw = Multipole::remove_path(&heawood(), &[0, 1, 2]).unwrap();
        assert_eq!(hw.n(), 11);
        let v = Multipole::remove_path(&k33(), &[0]).unwrap();
        assert!(v.kind().is(&[3], 0));
        assert!(matches!(Multipole::remove_path(&p, &[0, 2]), Err(Error::PathNotInGraph(_))));
        assert!(matches!(Multipole::remove_path(&p, &[0, 1, 0]), Err(Error::PathNotInGraph(_))));
    }

    #[test]
    fn remove_path_in_triangle_keeps_isolated_edge() {
        // K4 minus the path 0-1-2 leaves the edge 0-2 dangling at both ends.
        let d = Multipole::remove_path(&k4(), &[0, 1, 2]).unwrap();
        assert_eq!(d.n(), 1);
        assert!(d.kind().is(&[2, 2], 1));
        assert!(d.edges().contains(&[End::Free, End::Free]));
    }

    #[test]
    fn closure_counts() {
        let d = Multipole::remove_path(&petersen(), &[0, 1]).unwrap();
        let g = d.closure(None).unwrap();
        assert_eq!(g.n(), 8);
        assert_eq!(g.edge_count(), d.edge_count() - 2);
        assert!(g.is_cubic());
        assert_eq!(Multipole::empty().closure(None).unwrap().n(), 0);
        let b = Multipole::remove_path(&k33(), &[0, 3, 1]).unwrap();
        assert!(matches!(b.closure(None), Err(Error::ArityMismatch(_))));
    }

    #[test]
    fn join_and_odot_orders() {
        let d = Multipole::remove_path(&petersen(), &[0, 1]).unwrap();
        let b = Multipole::remove_path(&k33(), &[0, 3, 1]).unwrap();
        let f = d.join(&b, None).unwrap();
        assert_eq!(f.n(), 11);
        assert!(f.kind().is(&[2, 2], 1));
        let ff = f.odot(&f, None).unwrap();
        assert_eq!(ff.n(), 23);
        assert!(ff.kind().is(&[2, 2], 1));
        assert!(matches!(d.odot(&d, None), Err(Error::ArityMismatch(_))));
    }

    #[test]
    fn join_is_associative() {
        let d = Multipole::remove_path(&petersen(), &[0, 1]).unwrap();
        let k = Multipole::remove_path(&k4(), &[0, 1]).unwrap();
        let b = Multipole::remove_path(&k33(), &[0, 3, 1]).unwrap();
        let left = d.join(&k, None).unwrap().join(&b, None).unwrap();
        let right = d.join(&k.join(&b, None).unwrap(), None).unwrap();
        assert_eq!(left.n(), right.n());
        assert_eq!(left.kind(), right.kind());
        // Same structure up to edge numbering: compare closures after
        // capping the residual.
        let cap = |m: &Multipole| {
            let (u, _) = Multipole::disjoint_union(&[m, &Multipole::star()]);
            let star = u.connectors()[2].clone();
            let pairs = [(u.residual()[0], star[0])];
            let m = u.weld(&pairs, &u.connectors()[..2], &star[1..]).unwrap();
            let mut e: Vec<_> = m.edges().to_vec();
            e.sort();
            e
        };
        assert_eq!(cap(&left), cap(&right));
    }

    #[test]
    fn remove_edge_then_reattach_roundtrip() {
        let g = petersen();
        let (u, v) = (0, 1);
        let d = Multipole::remove_path(&g, &[u, v]).unwrap();
        // Re-add u and v as two stars joined by an edge.
        let (mut un, off) = Multipole::disjoint_union(&[&d, &Multipole::star(), &Multipole::star()]);
        let su = un.connectors()[2].clone();
        let sv = un.connectors()[3].clone();
        let mut pairs = vec![(su[0], sv[0])];
        for i in 0..2 {
            pairs.push((un.connectors()[0][i], su[i + 1]));
            pairs.push((un.connectors()[1][i], sv[i + 1]));
        }
        un = un.weld(&pairs, &[], &[]).unwrap();
        let h = un.to_graph().unwrap();
        // Old vertex x > 1 became x - 2; the stars are 8 and 9.
        let (ou, ov) = (off[1].0, off[2].0);
        let perm: Vec<usize> = (0..10).map(|x| if x == ou { u } else if x == ov { v } else { x + 2 }).collect();
        assert!(h.relabel(&perm).unwrap().same_labelled(&g));
    }

    #[test]
    fn extract_matches_remove_path() {
        let g = petersen();
        let d = Multipole::remove_path(&g, &[0, 1]).unwrap();
        let rest: Vec<usize> = (2..10).collect();
        let adj = g.adjacency();
        let conn = |x: usize, skip: usize| -> Vec<(usize, usize)> {
            adj[x].iter().filter(|&&(w, _)| w != skip).map(|&(w, _)| (w, x)).collect()
        };
        let e = Multipole::extract(&g, &rest, &[conn(0, 1), conn(1, 0)], &[]).unwrap();
        assert_eq!(e.kind(), d.kind());
        assert_eq!(e.n(), d.n());
        assert!(Multipole::extract(&g, &rest, &[conn(0, 1)], &[]).is_err());
    }
}

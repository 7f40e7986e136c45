//! Backtracking engine for "every vertex sees a line" constraint problems.
//!
//! Variables carry 4-bit values with domains stored as `u16` bitmasks.
//! Every constraint ties three variables `(x, y, z)` and allows exactly the
//! ordered triples with `y ∈ partners[x]` and `z = x ^ y`; this covers both
//! the lines of a tetrahedron (tetrahedral flows) and proper 3-edge-colourings
//! read as nowhere-zero `Z2 x Z2` flows. Propagation is arc consistency on
//! these ternary constraints; branching picks the smallest domain, ties
//! broken by a fixed variable rank, and tries values in increasing order.

use std::collections::{BTreeSet, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{permutations4, Point4, Tetrahedron};
use crate::multipole::{End, Multipole};

#[derive(Clone, Debug)]
pub(crate) struct Problem {
    cons: Vec<[u32; 3]>,
    var_cons: Vec<Vec<u32>>,
    partners: [u16; 16],
    init: Vec<u16>,
    rank: Vec<u32>,
    infeasible: bool,
    /// Value maps of a group preserving `partners`, and one representative
    /// value per orbit; used for symmetry breaking.
    group: Vec<[u8; 16]>,
    reps: u16,
}

fn bits(mask: u16) -> impl Iterator<Item = u8> {
    (0u8..16).filter(move |&b| mask & (1 << b) != 0)
}

impl Problem {
    fn build(m: &Multipole, partners: [u16; 16], full: u16, group: Vec<[u8; 16]>, reps: u16) -> Problem {
        let nvars = m.edge_count();
        let mut cons = Vec::with_capacity(m.n());
        let mut infeasible = false;
        for inc in m.incidence() {
            if inc[0] == inc[1] || inc[1] == inc[2] || inc[0] == inc[2] {
                // A loop would need two equal values at one vertex.
                infeasible = true;
            }
            cons.push(inc.map(|e| e as u32));
        }
        let mut var_cons = vec![Vec::new(); nvars];
        for (c, slots) in cons.iter().enumerate() {
            for &v in slots {
                if !var_cons[v as usize].contains(&(c as u32)) {
                    var_cons[v as usize].push(c as u32);
                }
            }
        }
        let rank = dfs_rank(m);
        Problem { cons, var_cons, partners, init: vec![full; nvars], rank, infeasible, group, reps }
    }

    /// Lines of the coordinate tetrahedron `T0`.
    pub fn t0_lines(m: &Multipole) -> Problem {
        let t0 = Tetrahedron::t0();
        let mut partners = [0u16; 16];
        let mut full = 0u16;
        for &x in t0.points() {
            full |= 1 << x.bits();
            for &y in t0.points() {
                if t0.is_line_of(x, y, x + y) {
                    partners[x.bits() as usize] |= 1 << y.bits();
                }
            }
        }
        let group = permutations4()
            .into_iter()
            .map(|perm| {
                let mut map = [0u8; 16];
                for (v, slot) in map.iter_mut().enumerate() {
                    let p = Point4::new(v as u8).unwrap();
                    let image = (0..4).filter(|&i| p.coord(i) == 1).fold(0u8, |acc, i| acc | Point4::unit(perm[i]).bits());
                    *slot = image;
                }
                map
            })
            .collect();
        // One corner and one midpoint represent the two orbits.
        let reps = (1 << 0b0001) | (1 << 0b0011);
        Problem::build(m, partners, full, group, reps)
    }

    /// Proper 3-edge-colourings with colours 1, 2, 3.
    pub fn tait(m: &Multipole) -> Problem {
        let mut partners = [0u16; 16];
        for (x, p) in partners.iter_mut().enumerate().take(4).skip(1) {
            *p = 0b1110 & !(1 << x);
        }
        let perms3 = [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]];
        let group = perms3
            .iter()
            .map(|p| {
                let mut map = [0u8; 16];
                map[1..4].copy_from_slice(p);
                map
            })
            .collect();
        Problem::build(m, partners, 0b1110, group, 1 << 1)
    }

    fn symmetric(&self) -> bool {
        let full = self.init.first().copied().unwrap_or(0);
        self.init.iter().all(|&d| d == full)
    }
}

/// Variables ranked by DFS discovery over the vertex graph; dangling
/// edges follow the vertex that owns them.
fn dfs_rank(m: &Multipole) -> Vec<u32> {
    let inc = m.incidence();
    let mut rank = vec![u32::MAX; m.edge_count()];
    let mut next = 0u32;
    let mut seen = vec![false; m.n()];
    let other = |e: usize, v: usize| -> Option<usize> {
        match m.edges()[e] {
            [End::Vertex(a), End::Vertex(b)] => Some(if a == v { b } else { a }),
            _ => None,
        }
    };
    for root in 0..m.n() {
        if seen[root] {
            continue;
        }
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            for &e in inc[v].iter() {
                if rank[e] == u32::MAX {
                    rank[e] = next;
                    next += 1;
                }
                if let Some(w) = other(e, v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
    }
    for r in rank.iter_mut() {
        if *r == u32::MAX {
            *r = next;
            next += 1;
        }
    }
    rank
}

#[derive(Clone)]
struct State {
    dom: Vec<u16>,
    trail: Vec<(u32, u16)>,
    queued: Vec<bool>,
    queue: Vec<u32>,
}

struct Limits<'a> {
    budget: Option<u64>,
    nodes: &'a AtomicU64,
    stop: &'a AtomicBool,
    local: u64,
}

impl Limits<'_> {
    fn tick(&mut self) -> Result<()> {
        self.local += 1;
        if self.local == 1024 {
            let total = self.nodes.fetch_add(self.local, Ordering::Relaxed) + self.local;
            self.local = 0;
            if let Some(b) = self.budget {
                if total > b {
                    self.stop.store(true, Ordering::Relaxed);
                    return Err(Error::BudgetExceeded(b));
                }
            }
        }
        Ok(())
    }

    fn flush(&mut self) {
        self.nodes.fetch_add(self.local, Ordering::Relaxed);
        self.local = 0;
    }
}

impl State {
    fn new(p: &Problem) -> State {
        State { dom: p.init.clone(), trail: Vec::new(), queued: vec![false; p.cons.len()], queue: Vec::new() }
    }

    fn set(&mut self, var: usize, mask: u16) {
        if self.dom[var] != mask {
            self.trail.push((var as u32, self.dom[var]));
            self.dom[var] = mask;
        }
    }

    fn undo(&mut self, len: usize) {
        while self.trail.len() > len {
            let (v, d) = self.trail.pop().unwrap();
            self.dom[v as usize] = d;
        }
    }

    fn enqueue_var(&mut self, p: &Problem, var: usize) {
        for &c in &p.var_cons[var] {
            if !self.queued[c as usize] {
                self.queued[c as usize] = true;
                self.queue.push(c);
            }
        }
    }

    fn propagate(&mut self, p: &Problem) -> bool {
        while let Some(c) = self.queue.pop() {
            self.queued[c as usize] = false;
            let slots = p.cons[c as usize];
            for k in 0..3 {
                let (a, b, d) = (slots[k] as usize, slots[(k + 1) % 3] as usize, slots[(k + 2) % 3] as usize);
                let (da, db, dd) = (self.dom[a], self.dom[b], self.dom[d]);
                let mut keep = 0u16;
                for x in bits(da) {
                    if bits(p.partners[x as usize] & db).any(|y| dd & (1 << (x ^ y)) != 0) {
                        keep |= 1 << x;
                    }
                }
                if keep != da {
                    if keep == 0 {
                        for &q in &self.queue {
                            self.queued[q as usize] = false;
                        }
                        self.queue.clear();
                        return false;
                    }
                    self.set(a, keep);
                    self.enqueue_var(p, a);
                }
            }
        }
        true
    }

    /// Narrows `var` to `mask` and propagates.
    fn assign(&mut self, p: &Problem, var: usize, mask: u16) -> bool {
        let m = self.dom[var] & mask;
        if m == 0 {
            return false;
        }
        self.set(var, m);
        self.enqueue_var(p, var);
        self.propagate(p)
    }

    fn init(&mut self, p: &Problem) -> bool {
        if p.infeasible || self.dom.contains(&0) {
            return false;
        }
        for c in 0..p.cons.len() {
            self.queued[c] = true;
            self.queue.push(c as u32);
        }
        self.propagate(p)
    }

    fn branch_var(&self, p: &Problem) -> Option<usize> {
        let mut best: Option<(u32, u32, usize)> = None;
        for (v, &d) in self.dom.iter().enumerate() {
            let size = d.count_ones();
            if size > 1 {
                let key = (size, p.rank[v], v);
                if best.is_none_or(|b| (key.0, key.1) < (b.0, b.1)) {
                    best = Some(key);
                }
            }
        }
        best.map(|b| b.2)
    }

    fn values(&self) -> Vec<u8> {
        self.dom.iter().map(|&d| d.trailing_zeros() as u8).collect()
    }
}

/// Depth-first search from `st`. `visit` returns `false` to stop. Returns
/// `Ok(false)` if stopped early.
fn dfs(
    p: &Problem,
    st: &mut State,
    lim: &mut Limits,
    rng: &mut Option<StdRng>,
    visit: &mut dyn FnMut(&[u8]) -> bool,
) -> Result<bool> {
    if lim.stop.load(Ordering::Relaxed) {
        return Ok(false);
    }
    lim.tick()?;
    let var = match st.branch_var(p) {
        None => return Ok(visit(&st.values())),
        Some(v) => v,
    };
    let mut vals: Vec<u8> = bits(st.dom[var]).collect();
    if let Some(r) = rng.as_mut() {
        vals.shuffle(r);
    }
    for x in vals {
        let mark = st.trail.len();
        if st.assign(p, var, 1 << x) && !dfs(p, st, lim, rng, visit)? {
            st.undo(mark);
            return Ok(false);
        }
        st.undo(mark);
    }
    Ok(true)
}

/// Expands the search tree breadth-first until at least `target` open
/// subproblems exist (or the tree is exhausted). Order is deterministic.
fn split(p: &Problem, root: State, target: usize) -> Vec<State> {
    let mut jobs = vec![root];
    loop {
        if jobs.len() >= target {
            return jobs;
        }
        let mut next = Vec::new();
        let mut grew = false;
        for st in jobs {
            match st.branch_var(p) {
                None => next.push(st),
                Some(var) => {
                    grew = true;
                    for x in bits(st.dom[var]) {
                        let mut child = st.clone();
                        child.trail.clear();
                        if child.assign(p, var, 1 << x) {
                            child.trail.clear();
                            next.push(child);
                        }
                    }
                }
            }
        }
        jobs = next;
        if !grew {
            return jobs;
        }
    }
}

fn parallel_target() -> usize {
    16 * rayon::current_num_threads().max(1)
}

/// Any one solution. Applies symmetry breaking when the problem is
/// symmetric, so the witness is some representative.
pub(crate) fn first(p: &Problem, budget: Option<u64>) -> Result<Option<Vec<u8>>> {
    let mut root = State::new(p);
    if !root.init(p) {
        return Ok(None);
    }
    if p.symmetric() {
        if let Some(var) = root.branch_var(p) {
            if root.dom[var] == p.init[var] && !root.assign(p, var, p.reps) {
                return Ok(None);
            }
        }
    }
    root.trail.clear();
    let jobs = split(p, root, parallel_target());
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let found: Vec<Result<Option<Vec<u8>>>> = jobs
        .into_par_iter()
        .map(|mut st| {
            let mut lim = Limits { budget, nodes: &nodes, stop: &stop, local: 0 };
            let mut hit = None;
            let r = dfs(p, &mut st, &mut lim, &mut None, &mut |vals| {
                hit = Some(vals.to_vec());
                false
            });
            lim.flush();
            if hit.is_some() {
                stop.store(true, Ordering::Relaxed);
            }
            r.map(|_| hit)
        })
        .collect();
    // A found witness wins over a budget error raised elsewhere.
    let mut err = None;
    for r in found {
        match r {
            Ok(Some(v)) => return Ok(Some(v)),
            Ok(None) => {}
            Err(e) => err = Some(e),
        }
    }
    match err {
        Some(e) => Err(e),
        None => Ok(None),
    }
}

/// Exact number of solutions.
pub(crate) fn count(p: &Problem, budget: Option<u64>) -> Result<u64> {
    let mut root = State::new(p);
    if !root.init(p) {
        return Ok(0);
    }
    let jobs = split(p, root, parallel_target());
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    jobs.into_par_iter()
        .map(|mut st| {
            let mut lim = Limits { budget, nodes: &nodes, stop: &stop, local: 0 };
            let mut n = 0u64;
            dfs(p, &mut st, &mut lim, &mut None, &mut |_| {
                n += 1;
                true
            })?;
            lim.flush();
            Ok(n)
        })
        .sum()
}

/// Every solution in deterministic order; `visit` returns `false` to stop.
pub(crate) fn enumerate(p: &Problem, budget: Option<u64>, visit: &mut dyn FnMut(&[u8]) -> bool) -> Result<()> {
    let mut root = State::new(p);
    if !root.init(p) {
        return Ok(());
    }
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let mut lim = Limits { budget, nodes: &nodes, stop: &stop, local: 0 };
    dfs(p, &mut root, &mut lim, &mut None, visit)?;
    Ok(())
}

/// A solution found with a seeded random value order.
pub(crate) fn sample(p: &Problem, seed: u64) -> Option<Vec<u8>> {
    let mut root = State::new(p);
    if !root.init(p) {
        return None;
    }
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let mut lim = Limits { budget: None, nodes: &nodes, stop: &stop, local: 0 };
    let mut hit = None;
    let _ = dfs(p, &mut root, &mut lim, &mut Some(StdRng::seed_from_u64(seed)), &mut |v| {
        hit = Some(v.to_vec());
        false
    });
    hit
}

/// All value tuples on `vars` that extend to a full solution.
pub(crate) fn project(p: &Problem, vars: &[usize], budget: Option<u64>) -> Result<BTreeSet<Vec<u8>>> {
    let mut root = State::new(p);
    if !root.init(p) {
        return Ok(BTreeSet::new());
    }
    let broken = !vars.is_empty() && p.symmetric() && root.dom[vars[0]] == p.init[vars[0]];
    if broken && !root.assign(p, vars[0], p.reps) {
        return Ok(BTreeSet::new());
    }
    root.trail.clear();
    // Open the boundary two levels deep, then finish each branch in parallel.
    let mut jobs = vec![(root, 0usize)];
    let depth = vars.len().min(2);
    for _ in 0..depth {
        let mut next = Vec::new();
        for (st, k) in jobs {
            for x in bits(st.dom[vars[k]]) {
                let mut child = st.clone();
                if child.assign(p, vars[k], 1 << x) {
                    child.trail.clear();
                    next.push((child, k + 1));
                }
            }
        }
        jobs = next;
    }
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let parts: Vec<Result<Vec<Vec<u8>>>> = jobs
        .into_par_iter()
        .map(|(mut st, k)| {
            let mut lim = Limits { budget, nodes: &nodes, stop: &stop, local: 0 };
            let mut out = Vec::new();
            project_rec(p, vars, k, &mut st, &mut lim, &mut HashSet::new(), &mut out)?;
            lim.flush();
            Ok(out)
        })
        .collect();
    let mut result = BTreeSet::new();
    for part in parts {
        for tuple in part? {
            if broken {
                for g in &p.group {
                    result.insert(tuple.iter().map(|&v| g[v as usize]).collect());
                }
            } else {
                result.insert(tuple);
            }
        }
    }
    Ok(result)
}

/// Checks each partial boundary assignment for a completion before going
/// deeper; every completion found also marks its full boundary tuple as
/// feasible, which spares a later search.
fn project_rec(
    p: &Problem,
    vars: &[usize],
    k: usize,
    st: &mut State,
    lim: &mut Limits,
    known: &mut HashSet<Vec<u8>>,
    out: &mut Vec<Vec<u8>>,
) -> Result<()> {
    let current = |st: &State| -> Option<Vec<u8>> {
        vars.iter().map(|&v| (st.dom[v].count_ones() == 1).then(|| st.dom[v].trailing_zeros() as u8)).collect()
    };
    if let Some(t) = current(st) {
        if known.contains(&t) {
            out.push(t);
            return Ok(());
        }
    }
    let mut witness = None;
    let mark = st.trail.len();
    dfs(p, st, lim, &mut None, &mut |vals| {
        witness = Some(vars.iter().map(|&v| vals[v]).collect::<Vec<u8>>());
        false
    })?;
    st.undo(mark);
    let Some(w) = witness else {
        return Ok(());
    };
    known.insert(w);
    if let Some(t) = current(st) {
        out.push(t);
        return Ok(());
    }
    lim.tick()?;
    let var = vars[k..].iter().copied().find(|&v| st.dom[v].count_ones() > 1).expect("some boundary value is open");
    for x in bits(st.dom[var]) {
        let mark = st.trail.len();
        if st.assign(p, var, 1 << x) {
            project_rec(p, vars, k, st, lim, known, out)?;
        }
        st.undo(mark);
    }
    Ok(())
}

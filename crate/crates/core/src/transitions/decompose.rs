//! Exact boundary projection by divide and conquer: split the vertex set
//! along a small edge cut, project both sides onto their boundary edges,
//! and join on the cut. Small pieces go to the backtracking engine.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::csp::{self, Problem};
use crate::error::Result;
use crate::multipole::{End, Multipole, Semiedge};

/// Pieces up to this many vertices are projected directly.
const SMALL: usize = 14;
/// Largest boundary accepted for a piece.
const CAP: usize = 7;

/// Rows pack one 4-bit value per column.
struct Table {
    cols: Vec<usize>,
    rows: HashSet<u64>,
}

fn get(row: u64, i: usize) -> u8 {
    ((row >> (4 * i)) & 0xf) as u8
}

struct Ctx<'a> {
    m: &'a Multipole,
    ends: Vec<[Option<usize>; 2]>,
    budget: Option<u64>,
    small: usize,
    cap: usize,
}

impl Ctx<'_> {
    /// Edges with exactly one end in `inside`, in edge order.
    fn boundary(&self, inside: &[bool]) -> Vec<usize> {
        let ins = |x: Option<usize>| x.is_some_and(|v| inside[v]);
        (0..self.ends.len()).filter(|&e| ins(self.ends[e][0]) != ins(self.ends[e][1])).collect()
    }

    fn mask(&self, s: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.m.n()];
        for &v in s {
            inside[v] = true;
        }
        inside
    }

    fn direct(&self, s: &[usize], cols: &[usize]) -> Result<Table> {
        let mut local = vec![usize::MAX; self.m.n()];
        for (i, &v) in s.iter().enumerate() {
            local[v] = i;
        }
        let inside = |x: Option<usize>| x.filter(|&v| local[v] != usize::MAX);
        let mut edges = Vec::new();
        for e in 0..self.ends.len() {
            if let (Some(a), Some(b)) = (inside(self.ends[e][0]), inside(self.ends[e][1])) {
                edges.push([End::Vertex(local[a]), End::Vertex(local[b])]);
            }
        }
        let mut conn = Vec::new();
        for &e in cols {
            let v = inside(self.ends[e][0]).or(inside(self.ends[e][1])).expect("boundary edge");
            conn.push(Semiedge { edge: edges.len(), side: 1 });
            edges.push([End::Vertex(local[v]), End::Free]);
        }
        let vars: Vec<usize> = conn.iter().map(|s| s.edge).collect();
        let piece = Multipole::new(s.len(), edges, vec![conn], Vec::new())?;
        let raw = csp::project(&Problem::t0_lines(&piece), &vars, self.budget)?;
        let rows = raw.into_iter().map(|t| t.iter().enumerate().fold(0u64, |r, (i, &x)| r | (x as u64) << (4 * i))).collect();
        Ok(Table { cols: cols.to_vec(), rows })
    }

    /// Boundary sizes of every prefix and suffix of `order`.
    fn best_cut(&self, order: &[usize]) -> Option<(usize, usize)> {
        let n = order.len();
        let mut inside = vec![false; self.m.n()];
        let outer = self.mask(order);
        let mut pre = vec![0usize; n + 1];
        let mut suf = vec![0usize; n + 1];
        for i in 1..n {
            inside[order[i - 1]] = true;
            pre[i] = self.boundary(&inside).len();
            let rest: Vec<bool> = (0..self.m.n()).map(|v| outer[v] && !inside[v]).collect();
            suf[i] = self.boundary(&rest).len();
        }
        let lo = (n / 5).max(2);
        (lo..=n.saturating_sub(lo))
            .map(|i| (pre[i].max(suf[i]), i.abs_diff(n / 2), i))
            .min()
            .filter(|&(b, _, _)| b <= self.cap)
            .map(|(b, _, i)| (b, i))
    }

    /// Greedy layout keeping the running boundary small.
    fn greedy(&self, s: &[usize], start: usize) -> Vec<usize> {
        let mut inside = vec![false; self.m.n()];
        let allowed = self.mask(s);
        let mut order = vec![start];
        inside[start] = true;
        while order.len() < s.len() {
            let candidates: Vec<usize> = s.iter().copied().filter(|&v| !inside[v]).collect();
            let mut best = (usize::MAX, usize::MAX);
            for v in candidates {
                inside[v] = true;
                best = best.min((self.boundary_within(&inside, &allowed), v));
                inside[v] = false;
            }
            let next = best.1;
            inside[next] = true;
            order.push(next);
        }
        order
    }

    fn boundary_within(&self, inside: &[bool], allowed: &[bool]) -> usize {
        // Only edges touching the piece matter for its layout.
        let ins = |x: Option<usize>| x.is_some_and(|v| inside[v]);
        let touches = |x: Option<usize>| x.is_some_and(|v| allowed[v]);
        (0..self.ends.len())
            .filter(|&e| {
                let [a, b] = self.ends[e];
                (touches(a) || touches(b)) && ins(a) != ins(b)
            })
            .count()
    }

    fn split(&self, s: &[usize]) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut orders = vec![s.to_vec()];
        let starts = s.len().min(12);
        orders.extend((0..starts).map(|k| self.greedy(s, s[k * s.len() / starts])));
        let best = orders.iter().filter_map(|o| self.best_cut(o).map(|(b, i)| (b, i.abs_diff(s.len() / 2), o, i))).min_by_key(|x| (x.0, x.1))?;
        let (o, i) = (best.2, best.3);
        Some((o[..i].to_vec(), o[i..].to_vec()))
    }

    fn table(&self, s: &[usize]) -> Result<Table> {
        let cols = self.boundary(&self.mask(s));
        if s.len() <= self.small {
            return self.direct(s, &cols);
        }
        let Some((a, b)) = self.split(s) else {
            return self.direct(s, &cols);
        };
        let (ta, tb) = rayon::join(|| self.table(&a), || self.table(&b));
        Ok(join(&ta?, &tb?, &cols))
    }
}

fn join(a: &Table, b: &Table, cols: &[usize]) -> Table {
    let common: Vec<usize> = a.cols.iter().copied().filter(|c| b.cols.contains(c)).collect();
    let pos = |t: &Table, c: usize| t.cols.iter().position(|&x| x == c).unwrap();
    let key = |t: &Table, row: u64| common.iter().fold(0u64, |k, &c| k << 4 | get(row, pos(t, c)) as u64);
    let mut index: HashMap<u64, Vec<u64>> = HashMap::new();
    for &r in &a.rows {
        index.entry(key(a, r)).or_default().push(r);
    }
    // Output column j comes from a or b.
    let src: Vec<(bool, usize)> =
        cols.iter().map(|&c| if a.cols.contains(&c) { (true, pos(a, c)) } else { (false, pos(b, c)) }).collect();
    let rows = b
        .rows
        .par_iter()
        .fold(HashSet::new, |mut acc, &rb| {
            if let Some(list) = index.get(&key(b, rb)) {
                for &ra in list {
                    let row = src
                        .iter()
                        .enumerate()
                        .fold(0u64, |r, (j, &(from_a, i))| r | (get(if from_a { ra } else { rb }, i) as u64) << (4 * j));
                    acc.insert(row);
                }
            }
            acc
        })
        .reduce(HashSet::new, |mut x, y| {
            x.extend(y);
            x
        });
    Table { cols: cols.to_vec(), rows }
}

/// Every tuple of values on `m.semiedges()` that extends to a `T0`-flow.
pub(crate) fn semiedge_tuples(m: &Multipole, budget: Option<u64>) -> Result<Vec<Vec<u8>>> {
    tuples_with(m, budget, SMALL, CAP)
}

pub(crate) fn tuples_with(m: &Multipole, budget: Option<u64>, small: usize, cap: usize) -> Result<Vec<Vec<u8>>> {
    let sem = m.semiedges();
    let vars: Vec<usize> = sem.iter().map(|s| s.edge).collect();
    let bare = m.edges().iter().any(|e| e[0] == End::Free && e[1] == End::Free);
    if bare || m.n() <= small || vars.len() > 16 {
        return Ok(csp::project(&Problem::t0_lines(m), &vars, budget)?.into_iter().collect());
    }
    let ends = m.edges().iter().map(|e| e.map(|x| if let End::Vertex(v) = x { Some(v) } else { None })).collect();
    let ctx = Ctx { m, ends, budget, small, cap };
    let all: Vec<usize> = (0..m.n()).collect();
    let t = ctx.table(&all)?;
    let idx: Vec<usize> = vars.iter().map(|e| t.cols.iter().position(|c| c == e).unwrap()).collect();
    let mut out: Vec<Vec<u8>> = t.rows.iter().map(|&r| idx.iter().map(|&i| get(r, i)).collect()).collect();
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipole::{heawood, petersen};

    fn direct(m: &Multipole) -> Vec<Vec<u8>> {
        let vars: Vec<usize> = m.semiedges().iter().map(|s| s.edge).collect();
        csp::project(&Problem::t0_lines(m), &vars, None).unwrap().into_iter().collect()
    }

    #[test]
    fn agrees_with_direct_projection() {
        let cases = [
            Multipole::remove_path(&petersen(), &[0, 1]).unwrap(),
            Multipole::remove_path(&heawood(), &[0, 1, 2]).unwrap(),
            Multipole::remove_path(&heawood(), &[3]).unwrap(),
        ];
        for m in cases {
            for (small, cap) in [(3, 6), (4, 8), (6, 7)] {
                assert_eq!(tuples_with(&m, None, small, cap).unwrap(), direct(&m));
            }
        }
    }
}

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multipole::{has_bridge, Graph};

pub const DEFAULT_CNZF_BUDGET: u64 = 50_000_000;

/// Largest order for which the cut spectrum is enumerated.
const CUT_SPECTRUM_CAP: usize = 22;

struct Cnzf {
    order: Vec<usize>,
    ends: Vec<(usize, usize)>,
    left: Vec<usize>,
    sum: Vec<i64>,
    lo: i64,
    hi: i64,
    nodes: u64,
    budget: Option<u64>,
}

impl Cnzf {
    fn ok_at(&self, v: usize) -> bool {
        let s = self.sum[v].abs();
        match self.left[v] {
            0 => s == 0,
            1 => self.lo <= s && s <= self.hi,
            k => s <= k as i64 * self.hi,
        }
    }

    fn rec(&mut self, k: usize) -> Result<bool> {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Err(Error::BudgetExceeded(self.budget.unwrap()));
        }
        if k == self.order.len() {
            return Ok(true);
        }
        let e = self.order[k];
        let (a, b) = self.ends[e];
        if a == b {
            return self.rec(k + 1);
        }
        // Value x means x units from a to b.
        let forced = if self.left[a] == 1 {
            Some(-self.sum[a])
        } else if self.left[b] == 1 {
            Some(self.sum[b])
        } else {
            None
        };
        let candidates: Vec<i64> = match forced {
            Some(x) => vec![x],
            None if k == 0 => (self.lo..=self.hi).collect(),
            None => (self.lo..=self.hi).flat_map(|x| [x, -x]).collect(),
        };
        for x in candidates {
            if x.abs() < self.lo || x.abs() > self.hi {
                continue;
            }
            self.sum[a] += x;
            self.sum[b] -= x;
            self.left[a] -= 1;
            self.left[b] -= 1;
            let ok = self.ok_at(a) && self.ok_at(b) && self.rec(k + 1)?;
            self.sum[a] -= x;
            self.sum[b] += x;
            self.left[a] += 1;
            self.left[b] += 1;
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn reduce(p: u64, q: u64) -> Result<(u64, u64)> {
    if q == 0 || p < 2 * q {
        return Err(Error::MalformedInput(format!("need p/q >= 2, got {p}/{q}")));
    }
    let r = Ratio::new(p, q);
    Ok((*r.numer(), *r.denom()))
}

/// Whether `g` has a nowhere-zero circular `p/q`-flow, in integer form: an
/// orientation and flow with every value in `[q, p-q]`.
pub fn has_cnzf(g: &Graph, p: u64, q: u64, budget: Option<u64>) -> Result<bool> {
    let (p, q) = reduce(p, q)?;
    if has_bridge(g) {
        return Err(Error::NotBridgeless);
    }
    // BFS vertex order; each edge is placed by its later endpoint so
    // vertices close early and force their last value.
    let adj = g.adjacency();
    let mut pos = vec![usize::MAX; g.n()];
    let mut next = 0;
    for root in 0..g.n() {
        if pos[root] != usize::MAX {
            continue;
        }
        pos[root] = next;
        next += 1;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &adj[v] {
                if pos[w] == usize::MAX {
                    pos[w] = next;
                    next += 1;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by_key(|&e| {
        let (a, b) = g.edges()[e];
        (pos[a].max(pos[b]), pos[a].min(pos[b]), e)
    });
    let mut left = vec![0; g.n()];
    for &(a, b) in g.edges() {
        if a != b {
            left[a] += 1;
            left[b] += 1;
        }
    }
    let mut s = Cnzf {
        order,
        ends: g.edges().to_vec(),
        left,
        sum: vec![0; g.n()],
        lo: q as i64,
        hi: (p - q) as i64,
        nodes: 0,
        budget,
    };
    s.rec(0)
}

/// The set of sizes `|δ(X)|` over nonempty proper vertex subsets `X`.
pub fn cut_sizes(g: &Graph) -> Result<BTreeSet<usize>> {
    let n = g.n();
    if n > CUT_SPECTRUM_CAP {
        return Err(Error::TooLarge { size: n, cap: CUT_SPECTRUM_CAP });
    }
    let mut out = BTreeSet::new();
    if n < 2 {
        return Ok(out);
    }
    // Vertex n-1 stays outside X; Gray code order updates the cut in O(deg).
    let adj = g.adjacency();
    let mut inside = vec![false; n];
    let mut cut = 0i64;
    for i in 1u64..(1 << (n - 1)) {
        let v = i.trailing_zeros() as usize;
        inside[v] = !inside[v];
        for &(w, _) in &adj[v] {
            if w != v {
                cut += if inside[v] == inside[w] { -1 } else { 1 };
            }
        }
        out.insert(cut as usize);
    }
    Ok(out)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CfnStep {
    pub p: u64,
    pub q: u64,
    pub exists: bool,
}

/// Evidence about the circular flow number from a ladder of `(p, q)`
/// checks: `lower < Φc <= upper`, and `exact` when the cut spectrum leaves
/// no room between the two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfnLadder {
    pub steps: Vec<CfnStep>,
    pub lower: Option<Ratio<u64>>,
    pub upper: Option<Ratio<u64>>,
    pub exact: Option<Ratio<u64>>,
}

fn ratio_str(r: &Ratio<u64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl CfnLadder {
    pub fn bound_statement(&self) -> String {
        if let Some(x) = &self.exact {
            return format!("Φc = {}", ratio_str(x));
        }
        match (&self.lower, &self.upper) {
            (Some(l), Some(u)) => format!("{} < Φc <= {}", ratio_str(l), ratio_str(u)),
            (Some(l), None) => format!("Φc > {}", ratio_str(l)),
            (None, Some(u)) => format!("Φc <= {}", ratio_str(u)),
            (None, None) => "no bound".into(),
        }
    }
}

impl fmt::Display for CfnLadder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let steps: Vec<String> =
            self.steps.iter().map(|s| format!("{} {}/{}", if s.exists { "yes" } else { "no" }, s.p, s.q)).collect();
        write!(f, "{} => {}", steps.join(", "), self.bound_statement())
    }
}

impl Serialize for CfnLadder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Dump<'a> {
            steps: &'a [CfnStep],
            lower: Option<String>,
            upper: Option<String>,
            exact: Option<String>,
            statement: String,
        }
        Dump {
            steps: &self.steps,
            lower: self.lower.as_ref().map(ratio_str),
            upper: self.upper.as_ref().map(ratio_str),
            exact: self.exact.as_ref().map(ratio_str),
            statement: self.bound_statement(),
        }
        .serialize(s)
    }
}

/// Checks reduced fractions `p/q` in `[2, 6]` with `q <= q_max` in
/// increasing order, stopping at the first that admits a flow (every
/// bridgeless graph has a 6-flow, so the ladder always ends).
///
/// The circular flow number equals `|δ(X)| / |δ+(X)|` for some cut, so
/// when no fraction with a cut size as numerator lies strictly between
/// the bounds, the upper bound is exact.
pub fn circular_flow_ladder(g: &Graph, q_max: u64, budget: Option<u64>) -> Result<CfnLadder> {
    if q_max == 0 {
        return Err(Error::MalformedInput("q_max must be at least 1".into()));
    }
    if has_bridge(g) {
        return Err(Error::NotBridgeless);
    }
    let mut cands: BTreeSet<Ratio<u64>> = BTreeSet::new();
    for q in 1..=q_max {
        for p in 2 * q..=6 * q {
            cands.insert(Ratio::new(p, q));
        }
    }
    let mut ladder = CfnLadder { steps: Vec::new(), lower: None, upper: None, exact: None };
    for r in cands {
        let exists = has_cnzf(g, *r.numer(), *r.denom(), budget)?;
        ladder.steps.push(CfnStep { p: *r.numer(), q: *r.denom(), exists });
        if exists {
            ladder.upper = Some(r);
            break;
        }
        ladder.lower = Some(r);
    }
    if let Some(u) = ladder.upper {
        match ladder.lower {
            None => ladder.exact = Some(u),
            Some(l) if g.n() <= CUT_SPECTRUM_CAP => {
                let gap = cut_sizes(g)?.into_iter().any(|a| {
                    (1..=a as u64).any(|b| {
                        let x = Ratio::new(a as u64, b);
                        l < x && x < u
                    })
                });
                if !gap {
                    ladder.exact = Some(u);
                }
            }
            Some(_) => {}
        }
    }
    Ok(ladder)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipole::{k33, k4, petersen};

    #[test]
    fn petersen_flows() {
        let g = petersen();
        assert!(has_cnzf(&g, 5, 1, None).unwrap());
        assert!(!has_cnzf(&g, 4, 1, None).unwrap());
        assert!(!has_cnzf(&g, 9, 2, None).unwrap());
        // 10/2 reduces to 5/1.
        assert!(has_cnzf(&g, 10, 2, None).unwrap());
    }

    #[test]
    fn k4_is_exactly_four() {
        let l = circular_flow_ladder(&k4(), 1, None).unwrap();
        assert_eq!(l.exact, Some(Ratio::from_integer(4)));
        assert_eq!(l.to_string(), "no 2/1, no 3/1, yes 4/1 => Φc = 4");
    }

    #[test]
    fn petersen_ladder() {
        let l = circular_flow_ladder(&petersen(), 2, None).unwrap();
        assert_eq!(l.lower, Some(Ratio::new(9, 2)));
        assert_eq!(l.upper, Some(Ratio::from_integer(5)));
        assert!(l.to_string().contains("no 4/1, no 9/2, yes 5/1"));
    }

    #[test]
    fn cut_spectrum() {
        assert_eq!(cut_sizes(&k4()).unwrap(), BTreeSet::from([3, 4]));
        assert_eq!(cut_sizes(&k33()).unwrap().into_iter().max(), Some(9));
    }

    #[test]
    fn bridges_are_rejected() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(has_cnzf(&g, 5, 1, None), Err(Error::NotBridgeless));
        assert!(has_cnzf(&k4(), 3, 2, None).is_err());
    }
}

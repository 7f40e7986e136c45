use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize, Serializer};

use super::tflow::{find_tflow, TFlow};
use crate::csp::{self, Problem};
use crate::error::{Error, Result};
use crate::geometry::{Collineation, Point4, Tetrahedron};
use crate::multipole::{has_bridge, Graph, Multipole};

/// An ordered list of perfect matchings, each a sorted list of edge ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PMCover {
    pub matchings: Vec<Vec<usize>>,
}

impl PMCover {
    pub fn new(mut matchings: Vec<Vec<usize>>) -> PMCover {
        for m in matchings.iter_mut() {
            m.sort_unstable();
            m.dedup();
        }
        PMCover { matchings }
    }

    pub fn len(&self) -> usize {
        self.matchings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matchings.is_empty()
    }

    /// Every member is a perfect matching of `g` and together they cover
    /// all edges.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut covered = vec![false; g.edge_count()];
        for (i, m) in self.matchings.iter().enumerate() {
            let mut hit = vec![0u8; g.n()];
            for &e in m {
                let &(a, b) =
                    g.edges().get(e).ok_or_else(|| Error::NotACover(format!("edge {e} does not exist")))?;
                if a == b {
                    return Err(Error::NotACover(format!("matching {i} contains the loop {e}")));
                }
                hit[a] += 1;
                hit[b] += 1;
                covered[e] = true;
            }
            if let Some(v) = hit.iter().position(|&h| h != 1) {
                return Err(Error::NotACover(format!("matching {i} is not perfect at vertex {v}")));
            }
        }
        if let Some(e) = covered.iter().position(|c| !c) {
            return Err(Error::NotACover(format!("edge {e} is not covered")));
        }
        Ok(())
    }
}

/// Reads the four matchings off a T1-flow: `M_i` holds the edges whose
/// value has coordinate `i` equal to zero.
pub fn cover_from_tflow(flow: &TFlow) -> Result<PMCover> {
    if *flow.tetra() != Tetrahedron::t1() {
        return Err(Error::NotAT1Flow(format!("flow lives in {:?}", flow.tetra())));
    }
    Ok(cover_by(flow))
}

/// The same correspondence for `T0`-flows, through the involution that
/// swaps unit vectors with their antipodes. Note that `{e : φ(e)_i = 1}`
/// is not a matching: a vertex seeing `e_i, e_j, e_i + e_j` meets it twice.
pub fn cover_from_t0_flow(flow: &TFlow) -> Result<PMCover> {
    if *flow.tetra() != Tetrahedron::t0() {
        return Err(Error::MalformedInput(format!("expected a T0-flow, got {:?}", flow.tetra())));
    }
    Ok(cover_by(&flow.map(&Collineation::lambda())))
}

fn cover_by(flow: &TFlow) -> PMCover {
    let matchings =
        (0..4).map(|i| (0..flow.values().len()).filter(|&e| flow.value(e).coord(i) == 0).collect()).collect();
    PMCover { matchings }
}

/// The T1-flow of a 4-cover: coordinate `i` of an edge's value is zero iff
/// the edge lies in `M_i`.
pub fn tflow_from_cover(g: &Graph, cover: &PMCover) -> Result<TFlow> {
    if cover.len() != 4 {
        return Err(Error::NotACover(format!("need 4 matchings, got {}", cover.len())));
    }
    cover.validate(g)?;
    let mut values = vec![Point4::from_coords([1, 1, 1, 1]); g.edge_count()];
    for (i, m) in cover.matchings.iter().enumerate() {
        for &e in m {
            values[e] = values[e] + Point4::unit(i);
        }
    }
    let flow = TFlow::new(Tetrahedron::t1(), values)?;
    flow.validate(g)?;
    Ok(flow)
}

/// A proper 3-edge-colouring with colours 1, 2, 3, if one exists.
pub fn three_edge_colouring(g: &Graph) -> Result<Option<Vec<u8>>> {
    let m = Multipole::from_graph(g)?;
    csp::first(&Problem::tait(&m), None)
}

pub fn is_3_edge_colourable(g: &Graph) -> Result<bool> {
    Ok(three_edge_colouring(g)?.is_some())
}

fn colouring_cover(col: &[u8]) -> PMCover {
    PMCover::new((1..=3).map(|c| (0..col.len()).filter(|&e| col[e] == c).collect()).collect())
}

fn matchings_rec(
    adj: &[Vec<(usize, usize)>],
    matched: &mut Vec<bool>,
    current: &mut Vec<usize>,
    out: &mut Vec<FixedBitSet>,
    m: usize,
    cap: Option<usize>,
) -> Result<()> {
    let Some(v) = matched.iter().position(|x| !x) else {
        let mut set = FixedBitSet::with_capacity(m);
        set.extend(current.iter().copied());
        out.push(set);
        if cap.is_some_and(|c| out.len() > c) {
            return Err(Error::TooManyMatchings(cap.unwrap()));
        }
        return Ok(());
    };
    matched[v] = true;
    for &(w, e) in &adj[v] {
        if w != v && !matched[w] {
            matched[w] = true;
            current.push(e);
            matchings_rec(adj, matched, current, out, m, cap)?;
            current.pop();
            matched[w] = false;
        }
    }
    matched[v] = false;
    Ok(())
}

fn matching_sets(g: &Graph, cap: Option<usize>) -> Result<Vec<FixedBitSet>> {
    let mut out = Vec::new();
    if g.n() % 2 == 1 {
        return Ok(out);
    }
    let adj = g.adjacency();
    matchings_rec(&adj, &mut vec![false; g.n()], &mut Vec::new(), &mut out, g.edge_count(), cap)?;
    Ok(out)
}

/// All perfect matchings of `g`, each a sorted list of edge ids. Fails
/// with `TooManyMatchings` once more than `cap` are found.
pub fn perfect_matchings(g: &Graph, cap: Option<usize>) -> Result<Vec<Vec<usize>>> {
    Ok(matching_sets(g, cap)?.iter().map(|s| s.ones().collect()).collect())
}

struct CoverSearch<'a> {
    mats: &'a [FixedBitSet],
    by_edge: Vec<Vec<usize>>,
    half: usize,
    nodes: u64,
    budget: Option<u64>,
}

impl CoverSearch<'_> {
    fn rec(&mut self, uncovered: &FixedBitSet, left: usize, chosen: &mut Vec<usize>) -> Result<bool> {
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                return Err(Error::BudgetExceeded(b));
            }
        }
        let need = uncovered.count_ones(..);
        if need == 0 {
            return Ok(true);
        }
        if left == 0 || need > left * self.half {
            return Ok(false);
        }
        let best = self.mats.iter().map(|m| m.intersection(uncovered).count()).max().unwrap_or(0);
        if best * left < need {
            return Ok(false);
        }
        let e = uncovered.ones().min_by_key(|&e| (self.by_edge[e].len(), e)).unwrap();
        for i in self.by_edge[e].clone() {
            let mut rest = uncovered.clone();
            rest.difference_with(&self.mats[i]);
            chosen.push(i);
            if self.rec(&rest, left - 1, chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

/// A cover of `g` by exactly `k` perfect matchings (repeats allowed), or
/// `None` if there is none.
pub fn cover_with_k_matchings(g: &Graph, k: usize, cap: Option<usize>, budget: Option<u64>) -> Result<Option<PMCover>> {
    if k == 0 || g.n() % 2 == 1 {
        return Ok(None);
    }
    let mats = matching_sets(g, cap)?;
    let mut by_edge = vec![Vec::new(); g.edge_count()];
    for (i, m) in mats.iter().enumerate() {
        for e in m.ones() {
            by_edge[e].push(i);
        }
    }
    if g.edge_count() > 0 && by_edge.iter().any(|l| l.is_empty()) {
        return Ok(None);
    }
    let mut all = FixedBitSet::with_capacity(g.edge_count());
    all.insert_range(..);
    let mut search = CoverSearch { mats: &mats, by_edge, half: g.n() / 2, nodes: 0, budget };
    let mut chosen = Vec::new();
    if !search.rec(&all, k, &mut chosen)? {
        return Ok(None);
    }
    if chosen.is_empty() {
        // Only the empty graph is covered by nothing.
        return Ok(Some(PMCover::new(vec![Vec::new(); k])));
    }
    while chosen.len() < k {
        chosen.push(chosen[0]);
    }
    Ok(Some(PMCover::new(chosen.iter().map(|&i| mats[i].ones().collect()).collect())))
}

/// The perfect matching index, or the honest lower bound when no
/// 5-cover was found within budget.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum PmiValue {
    Three,
    Four,
    Five,
    AtLeastFive,
}

impl fmt::Display for PmiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PmiValue::Three => "3",
            PmiValue::Four => "4",
            PmiValue::Five => "5",
            PmiValue::AtLeastFive => ">=5",
        })
    }
}

impl Serialize for PmiValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PmiWitness {
    /// The colour classes of a 3-edge-colouring.
    Colouring { cover: PMCover },
    /// A T1-flow and the 4-cover it encodes.
    Flow { flow: TFlow, cover: PMCover },
    Cover { cover: PMCover },
    /// No T-flow; the 5-cover search gave up.
    Exhausted { reason: String },
}

impl PmiWitness {
    pub fn cover(&self) -> Option<&PMCover> {
        match self {
            PmiWitness::Colouring { cover } | PmiWitness::Flow { cover, .. } | PmiWitness::Cover { cover } => {
                Some(cover)
            }
            PmiWitness::Exhausted { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PmiResult {
    pub value: PmiValue,
    pub witness: PmiWitness,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PmiOptions {
    /// Node budget for each search.
    pub budget: Option<u64>,
    /// Largest order searched directly.
    pub direct_cap: usize,
    /// Largest number of perfect matchings enumerated for the 5-cover.
    pub matching_cap: Option<usize>,
}

impl Default for PmiOptions {
    fn default() -> PmiOptions {
        PmiOptions { budget: Some(10_000_000), direct_cap: 60, matching_cap: Some(200_000) }
    }
}

pub fn perfect_matching_index(g: &Graph, opts: &PmiOptions) -> Result<PmiResult> {
    g.require_cubic()?;
    if g.n() > opts.direct_cap {
        return Err(Error::TooLarge { size: g.n(), cap: opts.direct_cap });
    }
    if has_bridge(g) {
        return Err(Error::NotBridgeless);
    }
    let m = Multipole::from_graph(g)?;
    if let Some(col) = csp::first(&Problem::tait(&m), opts.budget)? {
        return Ok(PmiResult { value: PmiValue::Three, witness: PmiWitness::Colouring { cover: colouring_cover(&col) } });
    }
    if let Some(flow) = find_tflow(g, &Tetrahedron::t1(), opts.budget)? {
        let cover = cover_from_tflow(&flow)?;
        return Ok(PmiResult { value: PmiValue::Four, witness: PmiWitness::Flow { flow, cover } });
    }
    match cover_with_k_matchings(g, 5, opts.matching_cap, opts.budget) {
        Ok(Some(cover)) => Ok(PmiResult { value: PmiValue::Five, witness: PmiWitness::Cover { cover } }),
        Ok(None) => Ok(PmiResult {
            value: PmiValue::AtLeastFive,
            witness: PmiWitness::Exhausted { reason: "no cover by five perfect matchings exists".into() },
        }),
        Err(e @ (Error::BudgetExceeded(_) | Error::TooManyMatchings(_))) => {
            Ok(PmiResult { value: PmiValue::AtLeastFive, witness: PmiWitness::Exhausted { reason: e.to_string() } })
        }
        Err(e) => Err(e),
    }
}

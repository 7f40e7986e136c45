use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Shape;
use crate::multipole::{Graph, Multipole};
use crate::transitions::{
    compose_relations, transition_relation, weighted_transition_relation, Compose, Named, Relation, RelationOptions,
    ShapeTransition,
};

/// A subgraph of the certified graph with its boundary edges, named as
/// `(inside, outside)` vertex pairs, and its relation (shape level).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartRecord {
    pub vertices: Vec<usize>,
    pub input: Vec<(usize, usize)>,
    pub output: Vec<(usize, usize)>,
    #[serde(default)]
    pub residual: Vec<(usize, usize)>,
    pub relation: Relation,
}

impl PartRecord {
    pub(crate) fn extract(&self, g: &Graph) -> Result<Multipole> {
        let res: &[(usize, usize)] = &self.residual;
        Multipole::extract(g, &self.vertices, &[self.input.clone(), self.output.clone()], res)
    }

    fn compute_relation(&self, g: &Graph, fresh: bool) -> Result<Relation> {
        let m = self.extract(g)?;
        let opts = RelationOptions { fresh, ..Default::default() };
        let r = if self.residual.is_empty() {
            transition_relation(&m, &opts)?
        } else {
            weighted_transition_relation(&m, &opts)?
        };
        Ok(r.without_pairs())
    }
}

/// An inner tree vertex and its neighbours in plane order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeVertex {
    pub vertex: usize,
    pub rotation: Vec<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// Three fragments around one vertex; no closed walk through their
    /// relations closes up with exactly one weight-2 step.
    WindmillWalk,
    /// Halin snark: tree induction over the odot composition, then the
    /// block and the decollineator of the first fragment.
    HalinInductive,
    /// A circuit of dipoles whose composed relation has no stationary entry.
    Composite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub step: String,
    pub relation: Relation,
}

/// Replayable evidence that a cubic graph has no T-flow, hence perfect
/// matching index at least 5.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub kind: CertificateKind,
    pub order: usize,
    /// Fragments in perimeter order, or the dipoles of a composite circuit.
    pub parts: Vec<PartRecord>,
    /// The decollineator and block of `parts[0]` (Halin kind only).
    #[serde(default)]
    pub decollineator: Option<PartRecord>,
    #[serde(default)]
    pub block: Option<PartRecord>,
    #[serde(default)]
    pub tree: Vec<TreeVertex>,
    pub chain: Vec<ChainStep>,
}

impl Certificate {
    /// Whether the recorded chain ends with no stationary transition.
    pub fn concludes(&self) -> bool {
        self.chain.last().is_some_and(|s| s.relation.is_empty())
            && self.chain.iter().filter(|s| s.step.starts_with("stationary")).all(|s| s.relation.is_empty())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))
    }
}

fn mismatch(msg: impl Into<String>) -> Error {
    Error::CertificateMismatch(msg.into())
}

fn stationary(r: &Relation) -> Relation {
    r.iter().filter(|t| t.input == t.output).copied().collect()
}

fn restrict_admissible(r: &Relation) -> Relation {
    r.iter().filter(|t| Named::A.relation().contains(t)).copied().collect()
}

/// Transitions through `r1 ∘ r2` when the two residual semiedges are
/// joined: the weights on both sides must agree.
pub(crate) fn residual_junction(r1: &Relation, r2: &Relation) -> Relation {
    let mut out = Vec::new();
    for s in r1.iter() {
        for t in r2.iter().filter(|t| t.input == s.output && t.weight == s.weight && s.weight.is_some()) {
            out.push(ShapeTransition::new(s.input, t.output, None));
        }
    }
    Relation::from_shapes(out)
}

#[derive(Clone, Debug)]
pub(crate) enum TreeNode {
    Leaf(usize),
    Inner(usize, Box<TreeNode>, Box<TreeNode>),
}

impl TreeNode {
    fn leaves(&self, out: &mut Vec<usize>) {
        match self {
            TreeNode::Leaf(j) => out.push(*j),
            TreeNode::Inner(_, l, r) => {
                l.leaves(out);
                r.leaves(out);
            }
        }
    }
}

fn odot_bound(node: &TreeNode, frags: &[Relation], steps: &mut Vec<ChainStep>) -> Result<Relation> {
    match node {
        TreeNode::Leaf(j) => Ok(frags[*j].clone()),
        TreeNode::Inner(v, l, r) => {
            let a = odot_bound(l, frags, steps)?;
            let b = odot_bound(r, frags, steps)?;
            let m = Named::M.relation();
            let mut x = compose_relations(&a, &b, Compose::Odot)?;
            // Inside M, the only way from dpt to alt with weight 1 is blocked.
            let rule = a.is_subset(m) && b.is_subset(m);
            if rule {
                x = x.difference(&Relation::parse("dpt <->1 alt").expect("fixed entry"));
            }
            let label = if rule { "odot, restricted" } else { "odot" };
            steps.push(ChainStep { step: format!("X at {v} ({label})"), relation: x.clone() });
            Ok(x)
        }
    }
}

pub(crate) fn halin_chain(frags: &[Relation], d0: &Relation, b0: &Relation, root: &TreeNode) -> Result<Vec<ChainStep>> {
    let mut steps = Vec::new();
    let x = odot_bound(root, frags, &mut steps)?;
    let y = restrict_admissible(&residual_junction(b0, &x));
    steps.push(ChainStep { step: "Y = B0 ∘ X, residuals joined".into(), relation: y.clone() });
    let z = restrict_admissible(&compose_relations(d0, &y, Compose::Join)?);
    steps.push(ChainStep { step: "Z = D0 ∘ Y".into(), relation: z.clone() });
    steps.push(ChainStep { step: "stationary in Z".into(), relation: stationary(&z) });
    Ok(steps)
}

pub(crate) fn windmill_chain(frags: &[Relation]) -> Result<Vec<ChainStep>> {
    let mut steps = Vec::new();
    let generic = Named::DB.relation();
    let g12 = compose_relations(generic, generic, Compose::Odot)?;
    let gw = residual_junction(&g12, generic);
    steps.push(ChainStep { step: "stationary closed walks in DB".into(), relation: stationary(&gw) });
    let f12 = compose_relations(&frags[0], &frags[1], Compose::Odot)?;
    steps.push(ChainStep { step: "F1 ⊙ F2".into(), relation: f12.clone() });
    let w = residual_junction(&f12, &frags[2]);
    steps.push(ChainStep { step: "(F1 ⊙ F2) ∘ F3, residuals joined".into(), relation: w.clone() });
    steps.push(ChainStep { step: "stationary closed walks".into(), relation: stationary(&w) });
    Ok(steps)
}

pub(crate) fn composite_chain(parts: &[Relation]) -> Result<Vec<ChainStep>> {
    let mut steps = Vec::new();
    let mut acc = parts[0].clone();
    for (i, r) in parts.iter().enumerate().skip(1) {
        acc = restrict_admissible(&compose_relations(&acc, r, Compose::Join)?);
        steps.push(ChainStep { step: format!("parts 0..={i}"), relation: acc.clone() });
    }
    steps.push(ChainStep { step: "stationary in the circuit".into(), relation: stationary(&acc) });
    Ok(steps)
}

/// Walks the tree from the vertex next to the first fragment, children in
/// rotation order after the entry point.
pub(crate) fn odot_tree(tree: &[TreeVertex], residual_owner: &HashMap<usize, usize>, hub: usize, entry: usize) -> Result<TreeNode> {
    let by_vertex: HashMap<usize, &TreeVertex> = tree.iter().map(|t| (t.vertex, t)).collect();
    fn go(
        v: usize,
        entry: usize,
        by_vertex: &HashMap<usize, &TreeVertex>,
        owner: &HashMap<usize, usize>,
        depth: usize,
    ) -> Result<TreeNode> {
        if depth > by_vertex.len() {
            return Err(mismatch("the tree has a cycle"));
        }
        let t = by_vertex.get(&v).ok_or_else(|| mismatch(format!("{v} is not a tree vertex")))?;
        let rot = &t.rotation;
        let at = rot.iter().position(|&x| x == entry).ok_or_else(|| mismatch(format!("{entry} is not next to {v}")))?;
        let [a, b] = [rot[(at + 1) % 3], rot[(at + 2) % 3]];
        let child = |w: usize| -> Result<TreeNode> {
            if by_vertex.contains_key(&w) {
                go(w, v, by_vertex, owner, depth + 1)
            } else {
                owner.get(&w).map(|&j| TreeNode::Leaf(j)).ok_or_else(|| mismatch(format!("{w} is neither tree nor fragment")))
            }
        };
        Ok(TreeNode::Inner(v, Box::new(child(a)?), Box::new(child(b)?)))
    }
    if tree.iter().any(|t| t.rotation.len() != 3) {
        return Err(mismatch("tree vertices need three neighbours"));
    }
    go(hub, entry, &by_vertex, residual_owner, 0)
}

fn check_structure(c: &Certificate, g: &Graph) -> Result<()> {
    if c.order != g.n() {
        return Err(mismatch(format!("order {} recorded, graph has {}", c.order, g.n())));
    }
    let mut owner = vec![usize::MAX; g.n()];
    let tree_ids = c.tree.iter().map(|t| t.vertex);
    let part_ids = c.parts.iter().flat_map(|p| p.vertices.iter().copied());
    for (k, v) in part_ids.chain(tree_ids).enumerate() {
        if v >= g.n() || owner[v] != usize::MAX {
            return Err(mismatch(format!("vertex {v} is missing from the graph or covered twice")));
        }
        owner[v] = k;
    }
    if owner.contains(&usize::MAX) {
        return Err(mismatch("parts and tree do not cover the graph"));
    }
    let k = c.parts.len();
    for i in 0..k {
        let (p, q) = (&c.parts[i], &c.parts[(i + 1) % k]);
        let back: Vec<(usize, usize)> = q.input.iter().map(|&(a, b)| (b, a)).collect();
        if p.output != back {
            return Err(mismatch(format!("part {i} is not welded to part {}", (i + 1) % k)));
        }
    }
    let tree: HashMap<usize, &TreeVertex> = c.tree.iter().map(|t| (t.vertex, t)).collect();
    for t in &c.tree {
        let mut a = g.neighbours(t.vertex);
        let mut b = t.rotation.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(mismatch(format!("rotation at {} does not match the graph", t.vertex)));
        }
    }
    for (i, p) in c.parts.iter().enumerate() {
        let expected = if c.tree.is_empty() { 0 } else { 1 };
        if p.residual.len() != expected {
            return Err(mismatch(format!("part {i} has {} residual edges", p.residual.len())));
        }
        if let Some(&(inside, outside)) = p.residual.first() {
            if !tree.get(&outside).is_some_and(|t| t.rotation.contains(&inside)) {
                return Err(mismatch(format!("residual of part {i} does not reach the tree")));
            }
        }
    }
    if c.kind == CertificateKind::HalinInductive {
        let (d, b) = match (&c.decollineator, &c.block) {
            (Some(d), Some(b)) => (d, b),
            _ => return Err(mismatch("missing split of the first fragment")),
        };
        let f = &c.parts[0];
        let mut dv: Vec<usize> = d.vertices.iter().chain(&b.vertices).copied().collect();
        let mut fv = f.vertices.clone();
        dv.sort_unstable();
        fv.sort_unstable();
        let back: Vec<(usize, usize)> = b.input.iter().map(|&(x, y)| (y, x)).collect();
        if dv != fv || d.input != f.input || b.output != f.output || b.residual != f.residual || d.output != back {
            return Err(mismatch("the split does not match the first fragment"));
        }
    }
    Ok(())
}

pub(crate) fn residual_owners(parts: &[PartRecord]) -> HashMap<usize, usize> {
    parts.iter().enumerate().filter_map(|(j, p)| p.residual.first().map(|&(inside, _)| (inside, j))).collect()
}

pub(crate) fn replay(c: &Certificate, parts: &[Relation], d0: Option<&Relation>, b0: Option<&Relation>) -> Result<Vec<ChainStep>> {
    match c.kind {
        CertificateKind::WindmillWalk => {
            if parts.len() != 3 {
                return Err(mismatch("a windmill has three fragments"));
            }
            windmill_chain(parts)
        }
        CertificateKind::Composite => {
            if parts.len() < 2 {
                return Err(mismatch("a circuit needs two parts"));
            }
            composite_chain(parts)
        }
        CertificateKind::HalinInductive => {
            let (d0, b0) = d0.zip(b0).ok_or_else(|| mismatch("missing split of the first fragment"))?;
            let (inside, hub) = c.parts[0].residual.first().copied().ok_or_else(|| mismatch("no residual"))?;
            let root = odot_tree(&c.tree, &residual_owners(&c.parts), hub, inside)?;
            let mut order = Vec::new();
            root.leaves(&mut order);
            if order != (1..c.parts.len()).collect::<Vec<_>>() {
                return Err(mismatch(format!("tree visits fragments in order {order:?}")));
            }
            halin_chain(parts, d0, b0, &root)
        }
    }
}

/// Replays the certificate on `g`: checks that the recorded parts tile the
/// graph as claimed, recomputes every relation by flow enumeration on the
/// actual subgraphs (bypassing caches, in parallel), rebuilds the chain and
/// compares. Returns whether the chain excludes every stationary closure.
pub fn verify_certificate(c: &Certificate, g: &Graph) -> Result<bool> {
    check_structure(c, g)?;
    let mut records: Vec<&PartRecord> = c.parts.iter().collect();
    records.extend(c.decollineator.iter());
    records.extend(c.block.iter());
    let fresh: Vec<Relation> = records.par_iter().map(|p| p.compute_relation(g, true)).collect::<Result<_>>()?;
    for (i, (p, r)) in records.iter().zip(&fresh).enumerate() {
        if p.relation != *r {
            return Err(mismatch(format!("relation of part {i} recorded as {}, computed {}", p.relation, r)));
        }
    }
    let k = c.parts.len();
    let chain = replay(c, &fresh[..k], fresh.get(k), fresh.get(k + 1))?;
    if chain != c.chain {
        return Err(mismatch("the derivation chain differs from its replay"));
    }
    Ok(c.concludes())
}

/// Shapes of the merged alphabet that start a stationary entry.
pub fn stationary_shapes(r: &Relation) -> Vec<Shape> {
    stationary(r).iter().map(|t| t.input).collect()
}

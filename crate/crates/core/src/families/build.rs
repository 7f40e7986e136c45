use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::blocks::{heawood_dipole, HalinFragment};
use super::certificate::{
    composite_chain, replay, windmill_chain, Certificate, CertificateKind, PartRecord, TreeVertex,
};
use super::halin::{build_halin, HalinGraph, TreeSpec};
use crate::error::{Error, Result};
use crate::multipole::{generalized_petersen, heawood, End, Graph, Multipole, Semiedge};
use crate::transitions::{
    classify_dipole, transition_relation, weighted_transition_relation, DipoleClass, Relation, RelationOptions,
};

/// Which way the fragments are welded around the perimeter.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Output of the fragment at leaf `i` meets the input at leaf `i + 1`.
    #[default]
    Forward,
    /// Output at leaf `i + 1` meets the input at leaf `i`.
    Reverse,
}

/// A constructed graph together with its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub graph: Graph,
    pub certificate: Certificate,
    pub description: String,
}

#[derive(Copy, Clone, Debug)]
enum Slot {
    In(usize),
    Out(usize),
    Res,
    Leaf(usize),
}

/// A disjoint union of pieces with named ports.
struct Assembly {
    union: Multipole,
    offsets: Vec<usize>,
    conn_start: Vec<usize>,
    res_start: Vec<usize>,
    sizes: Vec<usize>,
}

impl Assembly {
    fn new(pieces: &[&Multipole]) -> Assembly {
        let (union, offs) = Multipole::disjoint_union(pieces);
        let (mut c, mut r) = (0, 0);
        let (mut conn_start, mut res_start) = (Vec::new(), Vec::new());
        for p in pieces {
            conn_start.push(c);
            res_start.push(r);
            c += p.connectors().len();
            r += p.residual().len();
        }
        Assembly {
            union,
            offsets: offs.iter().map(|o| o.0).collect(),
            conn_start,
            res_start,
            sizes: pieces.iter().map(|p| p.n()).collect(),
        }
    }

    fn port(&self, piece: usize, slot: Slot) -> Semiedge {
        let c = self.union.connectors();
        match slot {
            Slot::In(j) => c[self.conn_start[piece]][j],
            Slot::Out(j) => c[self.conn_start[piece] + 1][j],
            Slot::Leaf(j) => c[self.conn_start[piece]][j],
            Slot::Res => self.union.residual()[self.res_start[piece]],
        }
    }

    fn vertex(&self, s: Semiedge) -> usize {
        match self.union.edges()[s.edge][1 - s.side] {
            End::Vertex(v) => v,
            End::Free => unreachable!("pieces have no bare edges"),
        }
    }

    fn vertices(&self, piece: usize) -> Vec<usize> {
        (self.offsets[piece]..self.offsets[piece] + self.sizes[piece]).collect()
    }

    /// `(inside, outside)` for a port welded to `other`.
    fn pair(&self, p: (usize, Slot), other: (usize, Slot)) -> (usize, usize) {
        (self.vertex(self.port(p.0, p.1)), self.vertex(self.port(other.0, other.1)))
    }
}

fn weighted(m: &Multipole) -> Result<Relation> {
    Ok(weighted_transition_relation(m, &RelationOptions::default())?.without_pairs())
}

fn unweighted(m: &Multipole) -> Result<Relation> {
    Ok(transition_relation(m, &RelationOptions::default())?.without_pairs())
}

struct HalinLayout {
    graph: Graph,
    parts: Vec<PartRecord>,
    d0: PartRecord,
    b0: PartRecord,
    tree: Vec<TreeVertex>,
}

/// Welds the fragments around the perimeter of `h` (forward orientation)
/// and records where every piece ended up. Pieces are `D0, B0, F1, ...,
/// F(k-1)` followed by the inner tree.
fn layout(h: &HalinGraph, fragments: &[HalinFragment]) -> Result<HalinLayout> {
    let k = h.perimeter.len();
    let tree = h.tree_part();
    let mut pieces: Vec<&Multipole> = vec![&fragments[0].d, &fragments[0].b];
    pieces.extend(fragments[1..].iter().map(|f| &f.f));
    pieces.push(&tree);
    let a = Assembly::new(&pieces);
    let t = pieces.len() - 1;
    // Piece holding the input / output / residual of fragment i.
    let input_piece = |i: usize| if i == 0 { 0 } else { i + 1 };
    let output_piece = |i: usize| i + 1;
    let mut welds = vec![];
    for j in 0..2 {
        welds.push(((0, Slot::Out(j)), (1, Slot::In(j))));
    }
    for i in 0..k {
        for j in 0..2 {
            welds.push(((output_piece(i), Slot::Out(j)), (input_piece((i + 1) % k), Slot::In(j))));
        }
        welds.push(((output_piece(i), Slot::Res), (t, Slot::Leaf(i))));
    }
    let pairs: Vec<(Semiedge, Semiedge)> = welds.iter().map(|&(x, y)| (a.port(x.0, x.1), a.port(y.0, y.1))).collect();
    let graph = a.union.weld(&pairs, &[], &[])?.to_graph()?;

    let prev = |i: usize| (i + k - 1) % k;
    let part = |vertices: Vec<usize>, i: usize| PartRecord {
        vertices,
        input: (0..2).map(|j| a.pair((input_piece(i), Slot::In(j)), (output_piece(prev(i)), Slot::Out(j)))).collect(),
        output: (0..2).map(|j| a.pair((output_piece(i), Slot::Out(j)), (input_piece((i + 1) % k), Slot::In(j)))).collect(),
        residual: vec![a.pair((output_piece(i), Slot::Res), (t, Slot::Leaf(i)))],
        relation: Relation::default(),
    };
    let mut parts = Vec::new();
    parts.push(part([a.vertices(0), a.vertices(1)].concat(), 0));
    for i in 1..k {
        parts.push(part(a.vertices(i + 1), i));
    }
    let d0 = PartRecord {
        vertices: a.vertices(0),
        input: parts[0].input.clone(),
        output: (0..2).map(|j| a.pair((0, Slot::Out(j)), (1, Slot::In(j)))).collect(),
        residual: Vec::new(),
        relation: Relation::default(),
    };
    let b0 = PartRecord {
        vertices: a.vertices(1),
        input: (0..2).map(|j| a.pair((1, Slot::In(j)), (0, Slot::Out(j)))).collect(),
        output: parts[0].output.clone(),
        residual: parts[0].residual.clone(),
        relation: Relation::default(),
    };
    // Inner vertex h.inner[i] sits at offset + i; leaves map to the vertex
    // carrying their fragment's residual.
    let leaf_index: HashMap<usize, usize> = h.perimeter.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let inner_index: HashMap<usize, usize> = h.inner.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let global = |v: usize| match inner_index.get(&v) {
        Some(&i) => a.offsets[t] + i,
        None => parts[leaf_index[&v]].residual[0].0,
    };
    let tree = h
        .inner
        .iter()
        .map(|&v| TreeVertex { vertex: global(v), rotation: h.rotation[v].iter().map(|&w| global(w)).collect() })
        .collect();
    Ok(HalinLayout { graph, parts, d0, b0, tree })
}

fn fill_relations(l: &mut HalinLayout) -> Result<()> {
    use rayon::prelude::*;
    let g = &l.graph;
    let mut all: Vec<&mut PartRecord> = l.parts.iter_mut().collect();
    all.push(&mut l.d0);
    all.push(&mut l.b0);
    all.par_iter_mut().try_for_each(|p| -> Result<()> {
        let m = p.extract(g)?;
        p.relation = if p.residual.is_empty() { unweighted(&m)? } else { weighted(&m)? };
        Ok(())
    })
}

fn halin_layout(h: &HalinGraph, fragments: &[HalinFragment], orientation: Orientation) -> Result<HalinLayout> {
    let k = h.perimeter.len();
    if fragments.len() != k {
        return Err(Error::FragmentCountMismatch { expected: k, got: fragments.len() });
    }
    let l = match orientation {
        Orientation::Forward => layout(h, fragments)?,
        Orientation::Reverse => {
            let mirror = build_halin(&h.spec.mirrored())?;
            let rev: Vec<HalinFragment> = fragments.iter().rev().cloned().collect();
            layout(&mirror, &rev)?
        }
    };
    let expected = fragments.iter().map(|f| f.order()).sum::<usize>() + h.inner.len();
    assert_eq!(l.graph.n(), expected, "order bookkeeping");
    Ok(l)
}

/// Substitutes the perimeter vertices of `h` by the fragments, one per
/// leaf in perimeter order, and certifies the result.
pub fn halin_snark(h: &HalinGraph, fragments: &[HalinFragment], orientation: Orientation) -> Result<FamilyMember> {
    let mut l = halin_layout(h, fragments, orientation)?;
    fill_relations(&mut l)?;
    let mut c = Certificate {
        schema: 1,
        kind: CertificateKind::HalinInductive,
        order: l.graph.n(),
        parts: l.parts,
        decollineator: Some(l.d0),
        block: Some(l.b0),
        tree: l.tree,
        chain: Vec::new(),
    };
    let rels: Vec<Relation> = c.parts.iter().map(|p| p.relation.clone()).collect();
    c.chain = replay(&c, &rels, c.decollineator.as_ref().map(|p| &p.relation), c.block.as_ref().map(|p| &p.relation))?;
    Ok(FamilyMember { graph: l.graph, certificate: c, description: format!("Halin snark on tree {}", h.spec) })
}

/// All fragments `F_Ps`.
pub fn treelike(h: &HalinGraph) -> Result<FamilyMember> {
    let f = HalinFragment::petersen();
    let mut m = halin_snark(h, &vec![f; h.perimeter.len()], Orientation::Forward)?;
    m.description = format!("treelike snark on tree {}", h.spec);
    Ok(m)
}

/// Three fragments around a common vertex.
pub fn windmill(f1: &HalinFragment, f2: &HalinFragment, f3: &HalinFragment) -> Result<FamilyMember> {
    let h = build_halin(&TreeSpec::claw())?;
    let mut l = halin_layout(&h, &[f1.clone(), f2.clone(), f3.clone()], Orientation::Forward)?;
    fill_relations(&mut l)?;
    let rels: Vec<Relation> = l.parts.iter().map(|p| p.relation.clone()).collect();
    let chain = windmill_chain(&rels)?;
    let c = Certificate {
        schema: 1,
        kind: CertificateKind::WindmillWalk,
        order: l.graph.n(),
        parts: l.parts,
        decollineator: None,
        block: None,
        tree: l.tree,
        chain,
    };
    Ok(FamilyMember { graph: l.graph, certificate: c, description: "windmill".into() })
}

/// The Halin `(2,2;1)`-, `(2,2)`- and extended `(2,2)`-poles obtained
/// from a Halin snark by removing the first fragment, only its
/// decollineator, or by severing the two edges entering it.
#[derive(Clone, Debug)]
pub struct HalinPoles {
    pub x: Multipole,
    pub y: Multipole,
    pub z: Multipole,
}

pub fn halin_poles(h: &HalinGraph, fragments: &[HalinFragment]) -> Result<HalinPoles> {
    let l = halin_layout(h, fragments, Orientation::Forward)?;
    let g = &l.graph;
    let k = l.parts.len();
    let f0 = &l.parts[0];
    let rest: Vec<usize> = (0..g.n()).filter(|v| !f0.vertices.contains(v)).collect();
    let flip = |p: &[(usize, usize)]| p.iter().map(|&(a, b)| (b, a)).collect::<Vec<_>>();
    let x = Multipole::extract(g, &rest, &[flip(&f0.output), l.parts[k - 1].output.clone()], &flip(&f0.residual))?;
    let outside_d: Vec<usize> = (0..g.n()).filter(|v| !l.d0.vertices.contains(v)).collect();
    let y = Multipole::extract(g, &outside_d, &[l.b0.input.clone(), l.parts[k - 1].output.clone()], &[])?;
    let d = Multipole::extract(g, &l.d0.vertices, &[l.d0.input.clone(), l.d0.output.clone()], &[])?;
    let z = d.join(&y, None)?;
    Ok(HalinPoles { x, y, z })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CompositeVariant {
    /// A decollineator followed by Halin `(2,2)`-poles.
    #[serde(rename = "G+1")]
    DecollineatorFirst,
    /// Extended Halin `(2,2)`-poles only.
    #[serde(rename = "G+2")]
    Extended,
}

/// Closes the circuit `parts[0] ∘ ... ∘ parts[k-1]` and certifies it.
pub fn composite_family(parts: &[Multipole], variant: CompositeVariant) -> Result<FamilyMember> {
    use rayon::prelude::*;
    if parts.len() < 2 {
        return Err(Error::InvalidParts("need at least two parts".into()));
    }
    for p in parts {
        p.require_kind(&[2, 2], 0).map_err(|e| Error::InvalidParts(e.to_string()))?;
    }
    let rels: Vec<Relation> = parts.par_iter().map(unweighted).collect::<Result<_>>()?;
    match variant {
        CompositeVariant::DecollineatorFirst => {
            if !classify_dipole(&rels[0]).contains(&DipoleClass::Decollineator) {
                return Err(Error::InvalidParts("the first part is not a decollineator".into()));
            }
            if let Some(i) = (1..parts.len()).find(|&i| !classify_dipole(&rels[i]).contains(&DipoleClass::Collineator)) {
                return Err(Error::InvalidParts(format!("part {i} is not a collineator")));
            }
        }
        CompositeVariant::Extended => {
            let ext = Relation::parse("ang -> ls").expect("fixed entry");
            if let Some(i) = rels.iter().position(|r| !r.is_subset(&ext)) {
                return Err(Error::InvalidParts(format!("part {i} has transitions beyond ang -> ls")));
            }
        }
    }
    let refs: Vec<&Multipole> = parts.iter().collect();
    let a = Assembly::new(&refs);
    let k = parts.len();
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in 0..2 {
            pairs.push((a.port(i, Slot::Out(j)), a.port((i + 1) % k, Slot::In(j))));
        }
    }
    let graph = a.union.weld(&pairs, &[], &[])?.to_graph()?;
    let records: Vec<PartRecord> = (0..k)
        .map(|i| PartRecord {
            vertices: a.vertices(i),
            input: (0..2).map(|j| a.pair((i, Slot::In(j)), ((i + k - 1) % k, Slot::Out(j)))).collect(),
            output: (0..2).map(|j| a.pair((i, Slot::Out(j)), ((i + 1) % k, Slot::In(j)))).collect(),
            residual: Vec::new(),
            relation: rels[i].clone(),
        })
        .collect();
    let chain = composite_chain(&rels)?;
    let c = Certificate {
        schema: 1,
        kind: CertificateKind::Composite,
        order: graph.n(),
        parts: records,
        decollineator: None,
        block: None,
        tree: Vec::new(),
        chain,
    };
    let name = match variant {
        CompositeVariant::DecollineatorFirst => "G+1",
        CompositeVariant::Extended => "G+2",
    };
    Ok(FamilyMember { graph, certificate: c, description: format!("{name} circuit of {k} parts") })
}

/// A nontrivial Halin snark of every even order `n >= 42`: a base graph
/// of order 42 to 52 (windmills with larger blocks, or the treelike snark
/// on the prism) plus Heawood insertions adding 12 vertices each.
pub fn even_order_family(n: usize) -> Result<FamilyMember> {
    if n < 42 || n % 2 == 1 {
        return Err(Error::UnsupportedOrder(n));
    }
    let base = 42 + (n - 42) % 12;
    let steps = (n - base) / 12;
    let ps = HalinFragment::petersen();
    let hw = || HalinFragment::petersen_with_block(&heawood());
    let gp = |a, b| generalized_petersen(a, b).and_then(|g| HalinFragment::petersen_with_block(&g));
    let (spec, mut frags, name) = match base {
        42 => (TreeSpec::claw(), vec![hw()?, ps.clone(), ps.clone()], "G42"),
        44 => (TreeSpec::claw(), vec![gp(8, 3)?, ps.clone(), ps.clone()], "windmill with a GP(8,3) block"),
        46 => (TreeSpec::parse("[[],[],[[],[]]]")?, vec![ps.clone(); 4], "treelike snark on the prism"),
        48 => (TreeSpec::claw(), vec![gp(10, 3)?, ps.clone(), ps.clone()], "windmill with a GP(10,3) block"),
        50 => (TreeSpec::claw(), vec![hw()?, hw()?, ps.clone()], "G42 with a second Heawood block"),
        _ => (TreeSpec::claw(), vec![gp(12, 5)?, ps.clone(), ps.clone()], "windmill with a GP(12,5) block"),
    };
    let m = heawood_dipole();
    let k = frags.len();
    for s in 0..steps {
        frags[s % k] = frags[s % k].with_inserted(&m)?;
    }
    let h = build_halin(&spec)?;
    let mut out = halin_snark(&h, &frags, Orientation::Forward)?;
    debug_assert_eq!(out.graph.n(), n);
    out.description = if steps == 0 { name.to_string() } else { format!("{name} with {steps} Heawood insertion(s)") };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::verify_certificate;
    use crate::multipole::{girth, petersen};

    fn w34() -> FamilyMember {
        let f = HalinFragment::petersen();
        windmill(&f, &f, &f).unwrap()
    }

    #[test]
    fn windmill_w34() {
        let w = w34();
        assert_eq!(w.graph.n(), 34);
        assert_eq!(girth(&w.graph).unwrap(), 5);
        assert!(w.certificate.concludes());
        assert_eq!(verify_certificate(&w.certificate, &w.graph), Ok(true));
    }

    #[test]
    fn halin_certificate_on_k4() {
        let h = build_halin(&TreeSpec::claw()).unwrap();
        let f = HalinFragment::petersen();
        for o in [Orientation::Forward, Orientation::Reverse] {
            let m = halin_snark(&h, &[f.clone(), f.clone(), f.clone()], o).unwrap();
            assert_eq!(m.graph.n(), 34);
            assert!(m.certificate.concludes(), "{:#?}", m.certificate.chain);
            assert_eq!(verify_certificate(&m.certificate, &m.graph), Ok(true));
        }
    }

    #[test]
    fn fragment_count_is_checked() {
        let h = build_halin(&TreeSpec::claw()).unwrap();
        let f = HalinFragment::petersen();
        let r = halin_snark(&h, &[f.clone(), f], Orientation::Forward);
        assert_eq!(r.unwrap_err(), Error::FragmentCountMismatch { expected: 3, got: 2 });
    }

    #[test]
    fn tampering_is_detected() {
        let w = w34();
        let mut c = w.certificate.clone();
        let first = *c.parts[1].relation.iter().next().unwrap();
        c.parts[1].relation = c.parts[1].relation.iter().filter(|t| **t != first).copied().collect();
        assert!(matches!(verify_certificate(&c, &w.graph), Err(Error::CertificateMismatch(_))));
        let mut c = w.certificate.clone();
        c.chain[1].relation = Relation::default();
        assert!(matches!(verify_certificate(&c, &w.graph), Err(Error::CertificateMismatch(_))));
        assert!(matches!(verify_certificate(&w.certificate, &petersen()), Err(Error::CertificateMismatch(_))));
    }

    #[test]
    fn unsupported_orders() {
        for n in [40, 41, 43, 0] {
            assert_eq!(even_order_family(n).unwrap_err(), Error::UnsupportedOrder(n));
        }
    }

    #[test]
    fn certificate_json_round_trip() {
        let c = w34().certificate;
        assert_eq!(Certificate::from_json(&c.to_json()).unwrap(), c);
    }
}

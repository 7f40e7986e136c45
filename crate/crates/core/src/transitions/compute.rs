use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use super::named::Named;
use super::{PairTransition, Relation, ShapeTransition};
use crate::error::{Error, Result};
use crate::geometry::{Incidence, Point4, Shape, Tetrahedron};
use crate::multipole::{is_bipartite, Graph, Multipole};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationOptions {
    /// Keep `dc` and `dm` apart instead of merging them into `dpt`.
    pub split_degenerate: bool,
    pub budget: Option<u64>,
    /// Recompute instead of consulting the tuple cache.
    pub fresh: bool,
}

type Tuples = Arc<BTreeSet<Vec<Point4>>>;

fn cache() -> &'static Mutex<HashMap<Multipole, Tuples>> {
    static CACHE: OnceLock<Mutex<HashMap<Multipole, Tuples>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Every tuple of values on the semiedges of `m` (connectors in order,
/// then residual semiedges) that extends to a `T0`-flow. Results are
/// cached per labelled multipole.
pub fn boundary_tuples(m: &Multipole, budget: Option<u64>) -> Result<Tuples> {
    if let Some(hit) = cache().lock().unwrap().get(m) {
        return Ok(hit.clone());
    }
    let tuples = project_tuples(m, budget)?;
    cache().lock().unwrap().insert(m.clone(), tuples.clone());
    Ok(tuples)
}

fn project_tuples(m: &Multipole, budget: Option<u64>) -> Result<Tuples> {
    let raw = super::decompose::semiedge_tuples(m, budget)?;
    Ok(Arc::new(raw.into_iter().map(|t| t.into_iter().map(|b| Point4::new(b).unwrap()).collect()).collect()))
}

fn relation_of(m: &Multipole, weighted: bool, opts: &RelationOptions) -> Result<Relation> {
    let tuples = if opts.fresh { project_tuples(m, opts.budget)? } else { boundary_tuples(m, opts.budget)? };
    let t0 = Tetrahedron::t0();
    let pairs = tuples
        .iter()
        .map(|t| PairTransition::new([t[0], t[1]], [t[2], t[3]], weighted.then(|| t0.weight(t[4]))))
        .collect();
    Ok(Relation::from_pairs(pairs, opts.split_degenerate))
}

/// The transition relation of a `(2,2)`-pole, pair level included.
pub fn transition_relation(d: &Multipole, opts: &RelationOptions) -> Result<Relation> {
    d.require_kind(&[2, 2], 0)?;
    relation_of(d, false, opts)
}

/// The weighted transition relation of a `(2,2;1)`-pole.
pub fn weighted_transition_relation(d: &Multipole, opts: &RelationOptions) -> Result<Relation> {
    d.require_kind(&[2, 2], 1)?;
    relation_of(d, true, opts)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Compose {
    /// Output of the first to input of the second.
    Join,
    /// Join, then both residual semiedges meet at a new vertex.
    Odot,
}

/// Composes relations through a shared middle shape. `Join` allows at
/// most one weighted side and inherits its weight; `Odot` needs both sides
/// weighted and keeps `(i, j)` only when `i + j <= 3`, giving `3 - ij`.
pub fn compose_relations(r1: &Relation, r2: &Relation, op: Compose) -> Result<Relation> {
    let (w1, w2) = match (r1.weighted(), r2.weighted()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::WeightArityMismatch("relation mixes weighted and unweighted entries".into())),
    };
    let (a, b) = if r1.is_split() == r2.is_split() { (r1.clone(), r2.clone()) } else { (r1.merged(), r2.merged()) };
    let pick = |x: Option<u8>, y: Option<u8>| -> Option<Option<u8>> {
        match op {
            Compose::Join => Some(x.or(y)),
            Compose::Odot => {
                let (i, j) = (x?, y?);
                (i + j <= 3).then(|| Some(3 - i * j))
            }
        }
    };
    match op {
        Compose::Join if w1 && w2 => {
            return Err(Error::WeightArityMismatch("join of two weighted relations".into()));
        }
        Compose::Odot if !(w1 || a.is_empty()) || !(w2 || b.is_empty()) => {
            return Err(Error::WeightArityMismatch("odot needs weighted relations".into()));
        }
        _ => {}
    }
    let mut out = BTreeSet::new();
    for s in a.iter() {
        for t in b.iter().filter(|t| t.input == s.output) {
            if let Some(w) = pick(s.weight, t.weight) {
                out.insert(ShapeTransition::new(s.input, t.output, w));
            }
        }
    }
    Ok(Relation::from_shapes(out))
}

/// `m1 ∘ m2` or `m1 ⊙ m2` with default pairings.
pub fn compose_dipoles(m1: &Multipole, m2: &Multipole, op: Compose) -> Result<Multipole> {
    match op {
        Compose::Join => m1.join(m2, None),
        Compose::Odot => m1.odot(m2, None),
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DipoleClass {
    Stationary,
    Decollineator,
    Deangulator,
    Collineator,
}

impl fmt::Display for DipoleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DipoleClass::Stationary => "stationary",
            DipoleClass::Decollineator => "decollineator",
            DipoleClass::Deangulator => "deangulator",
            DipoleClass::Collineator => "collineator",
        })
    }
}

/// Tags satisfied by an unweighted relation.
pub fn classify_dipole(r: &Relation) -> BTreeSet<DipoleClass> {
    let r = r.merged();
    let mut out = BTreeSet::new();
    if r.iter().all(|t| t.is_stationary()) {
        out.insert(DipoleClass::Stationary);
    }
    if !r.has("ls -> ls") && !r.has("hl -> hl") {
        out.insert(DipoleClass::Decollineator);
    }
    if !r.has("ang -> ang") {
        out.insert(DipoleClass::Deangulator);
    }
    if r.without_pairs().is_subset(Named::C.relation()) {
        out.insert(DipoleClass::Collineator);
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub violations: Vec<String>,
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks an unweighted relation against the admissible transitions and,
/// where pair data exists (in `T0`), against the finer rules: half-lines
/// keep their target, segments map to themselves, an angle maps to the
/// opposite segment of its triangle, and altitudes stay in their triangle.
pub fn check_admissible(r: &Relation) -> Admissibility {
    let mut violations = Vec::new();
    let a = Named::A.relation();
    for t in r.merged().iter() {
        if t.weight.is_some() || !a.contains(t) {
            violations.push(format!("{t} is not admissible"));
        }
    }
    let t0 = Tetrahedron::t0();
    for p in r.pairs().into_iter().flatten() {
        let (i, o) = (p.input, p.output);
        let (si, so) = match (t0.classify_pair(i[0], i[1], true), t0.classify_pair(o[0], o[1], true)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                violations.push(format!("{p} leaves T0"));
                continue;
            }
        };
        if p.input_trace() != p.output_trace() {
            violations.push(format!("{p} changes the trace"));
        }
        let ok = match (si, so) {
            (Shape::Hl, Shape::Hl) => t0.half_line_target(i[0], i[1]) == t0.half_line_target(o[0], o[1]),
            (Shape::Ls, Shape::Ls) => i == o,
            (Shape::Ang, Shape::Ls) => {
                let apex = Point4::new(i[0].bits() & i[1].bits()).unwrap();
                let opposite = PairTransition::new([i[0] + apex, i[1] + apex], o, None);
                opposite.input == o
            }
            (Shape::Alt, Shape::Alt) => (i[0].bits() | i[1].bits()) == (o[0].bits() | o[1].bits()),
            _ => true,
        };
        if !ok {
            violations.push(format!("{p} breaks the {si} -> {so} rule"));
        }
    }
    Admissibility { violations }
}

/// For a bipartite cubic `g`: whether the three semiedge values of `G - v`
/// form a line under every T-flow (never a circle).
pub fn bip_3pole_check(g: &Graph, v: usize) -> Result<bool> {
    if is_bipartite(g).is_none() {
        return Err(Error::NotBipartite);
    }
    three_pole_lines(g, v)
}

/// The same test without the bipartite precondition.
pub(crate) fn three_pole_lines(g: &Graph, v: usize) -> Result<bool> {
    let m = Multipole::remove_path(g, &[v])?;
    let t0 = Tetrahedron::t0();
    let tuples = boundary_tuples(&m, None)?;
    Ok(tuples.iter().all(|t| t0.line_or_circle(t[0], t[1], t[2]) == Ok(Incidence::Line)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipole::{heawood, k33, k4, petersen};

    fn rel(text: &str) -> Relation {
        Relation::parse(text).unwrap()
    }

    #[test]
    fn two_adjacent_vertices_are_collinear() {
        let r = transition_relation(&Multipole::edge_dipole(), &RelationOptions::default()).unwrap();
        assert_eq!(r.without_pairs(), *Named::C.relation());
        assert!(classify_dipole(&r).contains(&DipoleClass::Collineator));
        assert!(check_admissible(&r).is_admissible());
    }

    #[test]
    fn odot_weight_rule() {
        let cases = [((1, 1), Some(2)), ((1, 2), Some(1)), ((2, 1), Some(1)), ((2, 2), None)];
        for ((i, j), k) in cases {
            let r1 = rel(&format!("hl ->{i} ls"));
            let r2 = rel(&format!("ls ->{j} hl"));
            let c = compose_relations(&r1, &r2, Compose::Odot).unwrap();
            match k {
                Some(k) => assert_eq!(c, rel(&format!("hl ->{k} hl"))),
                None => assert!(c.is_empty()),
            }
        }
        let c = compose_relations(&rel("dpt ->2 ang"), &rel("ang ->1 alt"), Compose::Odot).unwrap();
        assert_eq!(c, rel("dpt ->1 alt"));
    }

    #[test]
    fn weight_arity_is_enforced() {
        let w = rel("ls ->1 hl");
        let u = rel("hl -> hl");
        assert!(matches!(compose_relations(&w, &w, Compose::Join), Err(Error::WeightArityMismatch(_))));
        assert!(matches!(compose_relations(&u, &w, Compose::Odot), Err(Error::WeightArityMismatch(_))));
        assert_eq!(compose_relations(&u, &w, Compose::Join).unwrap(), Relation::default());
        assert_eq!(compose_relations(&w, &u, Compose::Join).unwrap(), rel("ls ->1 hl"));
    }

    #[test]
    fn petersen_dipole_is_exactly_d() {
        let d = Multipole::remove_path(&petersen(), &[0, 1]).unwrap();
        let r = transition_relation(&d, &RelationOptions::default()).unwrap();
        assert_eq!(r.without_pairs(), *Named::D.relation());
        assert!(classify_dipole(&r).contains(&DipoleClass::Decollineator));
        assert!(check_admissible(&r).is_admissible());
    }

    #[test]
    fn k4_dipole_is_a_deangulator() {
        let d = Multipole::remove_path(&k4(), &[0, 1]).unwrap();
        let r = transition_relation(&d, &RelationOptions::default()).unwrap();
        assert!(!r.has("ang -> ang"));
        assert!(classify_dipole(&r).contains(&DipoleClass::Deangulator));
        assert!(check_admissible(&r).is_admissible());
    }

    #[test]
    fn k33_fragment_split_alphabet() {
        let b = Multipole::remove_path(&k33(), &[0, 3, 1]).unwrap();
        let opts = RelationOptions { split_degenerate: true, ..Default::default() };
        let r = weighted_transition_relation(&b, &opts).unwrap();
        assert!(r.merged().without_pairs().is_subset(Named::B.relation()));
        assert!(!r.has("dc ->2 ls"));
        assert!(r.has("dm ->2 ls"));
    }

    #[test]
    fn bipartite_three_poles() {
        for v in 0..6 {
            assert!(bip_3pole_check(&k33(), v).unwrap());
        }
        assert!(bip_3pole_check(&heawood(), 0).unwrap());
        assert_eq!(bip_3pole_check(&petersen(), 0), Err(Error::NotBipartite));
        assert!(!three_pole_lines(&petersen(), 0).unwrap());
    }

    #[test]
    fn admissibility_flags_foreign_entries() {
        let a = check_admissible(&rel("hl -> ls"));
        assert!(!a.is_admissible());
        let bad = PairTransition::new(
            [Point4::from_coords([1, 0, 0, 0]), Point4::from_coords([0, 1, 0, 0])],
            [Point4::from_coords([1, 0, 0, 0]), Point4::from_coords([1, 1, 0, 0])],
            None,
        );
        let r = Relation::from_pairs(BTreeSet::from([bad]), false);
        assert!(!check_admissible(&r).is_admissible());
    }
}

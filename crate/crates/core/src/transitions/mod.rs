//! Transition relations of `(2,2)`- and `(2,2;1)`-poles.
//!
//! A transition records the unordered pairs of flow values on the input
//! and output connectors of some T-flow, and for `(2,2;1)`-poles the weight
//! of the residual value. At the shape level the pairs are replaced by
//! their shapes. Pair-level data always refers to the coordinate
//! tetrahedron `T0`.

mod compute;
mod decompose;
mod named;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point4, Shape};

pub use compute::{
    bip_3pole_check, boundary_tuples, check_admissible, classify_dipole, compose_dipoles, compose_relations,
    transition_relation, weighted_transition_relation, Admissibility, Compose, DipoleClass, RelationOptions,
};
pub use named::{self_check, Named};

/// `input -> output`, with the residual weight for `(2,2;1)`-poles.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "(Shape, Shape, Option<u8>)", from = "(Shape, Shape, Option<u8>)")]
pub struct ShapeTransition {
    pub input: Shape,
    pub output: Shape,
    pub weight: Option<u8>,
}

impl From<ShapeTransition> for (Shape, Shape, Option<u8>) {
    fn from(t: ShapeTransition) -> Self {
        (t.input, t.output, t.weight)
    }
}

impl From<(Shape, Shape, Option<u8>)> for ShapeTransition {
    fn from((input, output, weight): (Shape, Shape, Option<u8>)) -> Self {
        ShapeTransition { input, output, weight }
    }
}

impl ShapeTransition {
    pub fn new(input: Shape, output: Shape, weight: Option<u8>) -> ShapeTransition {
        ShapeTransition { input, output, weight }
    }

    pub fn reversed(self) -> ShapeTransition {
        ShapeTransition { input: self.output, output: self.input, ..self }
    }

    pub fn merged(self) -> ShapeTransition {
        ShapeTransition { input: self.input.merged(), output: self.output.merged(), ..self }
    }

    pub fn is_stationary(self) -> bool {
        self.input.merged() == self.output.merged()
    }

    /// Parses `s -> t`, `s ->2 t` or the symmetric `s <->1 t`, which yields
    /// both directions.
    pub fn parse_entry(text: &str) -> Result<Vec<ShapeTransition>> {
        let bad = || Error::MalformedInput(format!("cannot parse transition {text:?}"));
        let words: Vec<&str> = text.split_whitespace().collect();
        let [s, arrow, t] = words[..] else { return Err(bad()) };
        let (both, rest) = match arrow.strip_prefix("<->") {
            Some(r) => (true, r),
            None => (false, arrow.strip_prefix("->").ok_or_else(bad)?),
        };
        let weight = match rest {
            "" => None,
            "1" => Some(1),
            "2" => Some(2),
            _ => return Err(bad()),
        };
        let fwd = ShapeTransition::new(s.parse()?, t.parse()?, weight);
        Ok(if both { vec![fwd, fwd.reversed()] } else { vec![fwd] })
    }
}

impl fmt::Display for ShapeTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.weight {
            Some(w) => write!(f, "{} ->{} {}", self.input, w, self.output),
            None => write!(f, "{} -> {}", self.input, self.output),
        }
    }
}

impl FromStr for ShapeTransition {
    type Err = Error;
    fn from_str(s: &str) -> Result<ShapeTransition> {
        match ShapeTransition::parse_entry(s)?[..] {
            [t] => Ok(t),
            _ => Err(Error::MalformedInput(format!("{s:?} denotes two transitions"))),
        }
    }
}

/// `{x, y} -> {x', y'}` over unordered pairs (stored sorted).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "([Point4; 2], [Point4; 2], Option<u8>)", from = "([Point4; 2], [Point4; 2], Option<u8>)")]
pub struct PairTransition {
    pub input: [Point4; 2],
    pub output: [Point4; 2],
    pub residual_weight: Option<u8>,
}

fn sorted(mut p: [Point4; 2]) -> [Point4; 2] {
    p.sort();
    p
}

impl From<PairTransition> for ([Point4; 2], [Point4; 2], Option<u8>) {
    fn from(t: PairTransition) -> Self {
        (t.input, t.output, t.residual_weight)
    }
}

impl From<([Point4; 2], [Point4; 2], Option<u8>)> for PairTransition {
    fn from((i, o, w): ([Point4; 2], [Point4; 2], Option<u8>)) -> Self {
        PairTransition::new(i, o, w)
    }
}

impl PairTransition {
    pub fn new(input: [Point4; 2], output: [Point4; 2], residual_weight: Option<u8>) -> PairTransition {
        PairTransition { input: sorted(input), output: sorted(output), residual_weight }
    }

    pub fn input_trace(&self) -> Point4 {
        self.input[0] + self.input[1]
    }

    pub fn output_trace(&self) -> Point4 {
        self.output[0] + self.output[1]
    }
}

impl fmt::Display for PairTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.residual_weight {
            Some(w) => format!("->{w}"),
            None => "->".into(),
        };
        write!(f, "{{{},{}}} {arrow} {{{},{}}}", self.input[0], self.input[1], self.output[0], self.output[1])
    }
}

/// A set of shape transitions, optionally backed by pair-level data whose
/// image it then is.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    shapes: BTreeSet<ShapeTransition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pairs: Option<BTreeSet<PairTransition>>,
}

impl Relation {
    pub fn from_shapes(shapes: impl IntoIterator<Item = ShapeTransition>) -> Relation {
        Relation { shapes: shapes.into_iter().collect(), pairs: None }
    }

    /// Builds a relation from pair-level transitions classified in `T0`.
    pub fn from_pairs(pairs: BTreeSet<PairTransition>, split_degenerate: bool) -> Relation {
        let t0 = crate::geometry::Tetrahedron::t0();
        let shape = |p: [Point4; 2]| t0.classify_pair(p[0], p[1], !split_degenerate).expect("pairs lie in T0");
        let shapes = pairs.iter().map(|p| ShapeTransition::new(shape(p.input), shape(p.output), p.residual_weight));
        Relation { shapes: shapes.collect(), pairs: Some(pairs) }
    }

    /// Parses entries separated by commas, semicolons or newlines.
    pub fn parse(text: &str) -> Result<Relation> {
        let mut shapes = BTreeSet::new();
        for entry in text.split([',', ';', '\n']).map(str::trim).filter(|e| !e.is_empty()) {
            shapes.extend(ShapeTransition::parse_entry(entry)?);
        }
        Ok(Relation { shapes, pairs: None })
    }

    pub fn shapes(&self) -> &BTreeSet<ShapeTransition> {
        &self.shapes
    }

    pub fn pairs(&self) -> Option<&BTreeSet<PairTransition>> {
        self.pairs.as_ref()
    }

    pub fn without_pairs(&self) -> Relation {
        Relation { shapes: self.shapes.clone(), pairs: None }
    }

    pub fn iter(&self) -> impl Iterator<Item = &ShapeTransition> {
        self.shapes.iter()
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn contains(&self, t: &ShapeTransition) -> bool {
        self.shapes.contains(t)
    }

    /// Shorthand for `contains` on a parsed entry such as `"hl ->2 hl"`.
    pub fn has(&self, entry: &str) -> bool {
        ShapeTransition::parse_entry(entry).is_ok_and(|ts| ts.iter().all(|t| self.contains(t)))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.shapes.is_subset(&other.shapes)
    }

    /// Entries of `self` missing from `other`.
    pub fn difference(&self, other: &Relation) -> Relation {
        Relation::from_shapes(self.shapes.difference(&other.shapes).copied())
    }

    pub fn union(&self, other: &Relation) -> Relation {
        Relation::from_shapes(self.shapes.union(&other.shapes).copied())
    }

    /// Whether `dc`/`dm` appear instead of `dpt`.
    pub fn is_split(&self) -> bool {
        self.shapes.iter().any(|t| matches!(t.input, Shape::Dc | Shape::Dm) || matches!(t.output, Shape::Dc | Shape::Dm))
    }

    /// The relation over the merged alphabet (pair data kept).
    pub fn merged(&self) -> Relation {
        Relation { shapes: self.shapes.iter().map(|t| t.merged()).collect(), pairs: self.pairs.clone() }
    }

    /// `Some(true)` if every entry carries a weight, `Some(false)` if none
    /// does, `None` when mixed. The empty relation counts as both; it
    /// reports `Some(false)`.
    pub fn weighted(&self) -> Option<bool> {
        let w = self.shapes.iter().filter(|t| t.weight.is_some()).count();
        if w == 0 {
            Some(false)
        } else if w == self.shapes.len() {
            Some(true)
        } else {
            None
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.shapes.iter().all(|t| self.shapes.contains(&t.reversed()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("relations serialise")
    }

    pub fn from_json(text: &str) -> Result<Relation> {
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))
    }

    /// A DOT digraph on shapes. Symmetric pairs with equal weights become
    /// one two-headed edge, as in hand-drawn diagrams.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph \"{name}\" {{\n");
        let nodes: BTreeSet<Shape> = self.shapes.iter().flat_map(|t| [t.input, t.output]).collect();
        for s in nodes {
            out.push_str(&format!("  {s};\n"));
        }
        for t in &self.shapes {
            let rev = t.reversed();
            let both = rev != *t && self.shapes.contains(&rev);
            if both && rev < *t {
                continue;
            }
            let mut attrs = Vec::new();
            if let Some(w) = t.weight {
                attrs.push(format!("label=\"{w}\""));
            }
            if both {
                attrs.push("dir=both".into());
            }
            let attrs = if attrs.is_empty() { String::new() } else { format!(" [{}]", attrs.join(", ")) };
            out.push_str(&format!("  {} -> {}{attrs};\n", t.input, t.output));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.shapes.iter().map(|t| t.to_string()).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

impl FromIterator<ShapeTransition> for Relation {
    fn from_iter<I: IntoIterator<Item = ShapeTransition>>(iter: I) -> Relation {
        Relation::from_shapes(iter)
    }
}

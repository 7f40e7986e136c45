use std::borrow::Cow;
use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::csp::{self, Problem};
use crate::error::{Error, Result};
use crate::geometry::{Collineation, Point4, Tetrahedron};
use crate::multipole::{Graph, Multipole};

/// Anything a flow can live on: cubic graphs and multipoles.
pub trait FlowInput {
    fn as_multipole(&self) -> Result<Cow<'_, Multipole>>;
}

impl FlowInput for Multipole {
    fn as_multipole(&self) -> Result<Cow<'_, Multipole>> {
        Ok(Cow::Borrowed(self))
    }
}

impl FlowInput for Graph {
    fn as_multipole(&self) -> Result<Cow<'_, Multipole>> {
        Multipole::from_graph(self).map(Cow::Owned)
    }
}

/// A T-flow: one point of `tetra` per edge id (dangling edges included).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TFlow {
    tetra: Tetrahedron,
    values: Vec<Point4>,
}

impl TFlow {
    /// Wraps raw values; use [`TFlow::validate`] to check the line
    /// condition against a graph.
    pub fn new(tetra: Tetrahedron, values: Vec<Point4>) -> Result<TFlow> {
        if let Some(v) = values.iter().find(|v| !tetra.contains(**v)) {
            return Err(Error::PointNotInTetrahedron(v.to_string()));
        }
        Ok(TFlow { tetra, values })
    }

    pub fn tetra(&self) -> &Tetrahedron {
        &self.tetra
    }

    pub fn values(&self) -> &[Point4] {
        &self.values
    }

    pub fn value(&self, edge: usize) -> Point4 {
        self.values[edge]
    }

    /// Checks the line condition at every vertex of `x`, and separately
    /// that incident values sum to zero.
    pub fn validate<X: FlowInput + ?Sized>(&self, x: &X) -> Result<()> {
        let m = x.as_multipole()?;
        if self.values.len() != m.edge_count() {
            return Err(Error::ArityMismatch(format!(
                "flow has {} values, multipole has {} edges",
                self.values.len(),
                m.edge_count()
            )));
        }
        for (v, inc) in m.incidence().iter().enumerate() {
            let [a, b, c] = inc.map(|e| self.values[e]);
            if a + b + c != Point4::ZERO {
                return Err(Error::MalformedInput(format!("values at vertex {v} do not sum to zero")));
            }
            if !self.tetra.is_line_of(a, b, c) {
                return Err(Error::MalformedInput(format!("values at vertex {v} are not a line")));
            }
        }
        Ok(())
    }

    pub fn is_valid<X: FlowInput + ?Sized>(&self, x: &X) -> bool {
        self.validate(x).is_ok()
    }

    /// The same flow pushed through a collineation.
    pub fn map(&self, c: &Collineation) -> TFlow {
        TFlow { tetra: c.map_tetrahedron(&self.tetra), values: self.values.iter().map(|&v| c.apply(v)).collect() }
    }

    /// Values on the semiedges of `m`, in `m.semiedges()` order.
    pub fn semiedge_values(&self, m: &Multipole) -> Vec<Point4> {
        m.semiedges().iter().map(|s| self.values[s.edge]).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct FlowDump {
    tetra: [Point4; 4],
    values: BTreeMap<usize, Point4>,
}

impl Serialize for TFlow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FlowDump { tetra: self.tetra.corners(), values: self.values.iter().copied().enumerate().collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TFlow {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<TFlow, D::Error> {
        use serde::de::Error as _;
        let dump = FlowDump::deserialize(d)?;
        let tetra = Tetrahedron::new(dump.tetra).map_err(D::Error::custom)?;
        let n = dump.values.len();
        if dump.values.keys().copied().ne(0..n) {
            return Err(D::Error::custom("flow values must be keyed by edges 0..m"));
        }
        TFlow::new(tetra, dump.values.into_values().collect()).map_err(D::Error::custom)
    }
}

/// Searches in `T0`; results are carried to `t` by the collineation
/// sending corners to corners.
fn to_tetra(t: &Tetrahedron) -> Collineation {
    Collineation::from_bases(Tetrahedron::t0().corners(), t.corners()).expect("tetrahedra have bases as corners")
}

fn lift(raw: &[u8], c: &Collineation, t: &Tetrahedron) -> TFlow {
    let values = raw.iter().map(|&b| c.apply(Point4::new(b).unwrap())).collect();
    TFlow { tetra: t.clone(), values }
}

/// Some T-flow on `x`, or `None`. Fails only when `budget` search nodes
/// are exhausted or `x` is not cubic.
pub fn find_tflow<X: FlowInput + ?Sized>(x: &X, t: &Tetrahedron, budget: Option<u64>) -> Result<Option<TFlow>> {
    let m = x.as_multipole()?;
    let c = to_tetra(t);
    Ok(csp::first(&Problem::t0_lines(&m), budget)?.map(|raw| lift(&raw, &c, t)))
}

/// Exact number of T-flows on `x`.
pub fn count_tflows<X: FlowInput + ?Sized>(x: &X, budget: Option<u64>) -> Result<u64> {
    let m = x.as_multipole()?;
    csp::count(&Problem::t0_lines(&m), budget)
}

/// Streams every T-flow in a fixed order; `visit` returns `false` to stop.
pub fn for_each_tflow<X: FlowInput + ?Sized>(
    x: &X,
    t: &Tetrahedron,
    budget: Option<u64>,
    mut visit: impl FnMut(&TFlow) -> bool,
) -> Result<()> {
    let m = x.as_multipole()?;
    let c = to_tetra(t);
    csp::enumerate(&Problem::t0_lines(&m), budget, &mut |raw| visit(&lift(raw, &c, t)))
}

pub fn enumerate_tflows<X: FlowInput + ?Sized>(x: &X, t: &Tetrahedron, budget: Option<u64>) -> Result<Vec<TFlow>> {
    let mut out = Vec::new();
    for_each_tflow(x, t, budget, |f| {
        out.push(f.clone());
        true
    })?;
    Ok(out)
}

/// A T-flow found with a seeded random value order, for property tests.
pub fn sample_tflow<X: FlowInput + ?Sized>(x: &X, t: &Tetrahedron, seed: u64) -> Result<Option<TFlow>> {
    let m = x.as_multipole()?;
    let c = to_tetra(t);
    Ok(csp::sample(&Problem::t0_lines(&m), seed).map(|raw| lift(&raw, &c, t)))
}

use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::multipole::{End, Graph, Multipole, Semiedge};

/// A plane tree given by nested lists: a node is the list of its
/// children, left to right, and a leaf is `[]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeSpec {
    pub children: Vec<TreeSpec>,
}

impl TreeSpec {
    pub fn leaf() -> TreeSpec {
        TreeSpec { children: Vec::new() }
    }

    pub fn node(children: Vec<TreeSpec>) -> TreeSpec {
        TreeSpec { children }
    }

    /// A root with three leaves; its Halin graph is `K4`.
    pub fn claw() -> TreeSpec {
        TreeSpec::node(vec![TreeSpec::leaf(), TreeSpec::leaf(), TreeSpec::leaf()])
    }

    /// A path of `k >= 1` internal vertices, each carrying leaves.
    pub fn caterpillar(k: usize) -> TreeSpec {
        let leaf = TreeSpec::leaf;
        if k <= 1 {
            return TreeSpec::claw();
        }
        let mut chain = TreeSpec::node(vec![leaf(), leaf()]);
        for _ in 2..k {
            chain = TreeSpec::node(vec![leaf(), chain]);
        }
        TreeSpec::node(vec![leaf(), leaf(), chain])
    }

    pub fn parse(text: &str) -> Result<TreeSpec> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::InvalidTreeSpec(e.to_string()))?;
        fn walk(v: &Value) -> Result<TreeSpec> {
            match v {
                Value::Array(items) => Ok(TreeSpec::node(items.iter().map(walk).collect::<Result<_>>()?)),
                other => Err(Error::InvalidTreeSpec(format!("expected a list, found {other}"))),
            }
        }
        walk(&v)
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn leaves(&self) -> usize {
        if self.is_leaf() {
            1
        } else {
            self.children.iter().map(|c| c.leaves()).sum()
        }
    }

    pub fn internal(&self) -> usize {
        if self.is_leaf() {
            0
        } else {
            1 + self.children.iter().map(|c| c.internal()).sum::<usize>()
        }
    }

    /// The mirror image: every child list reversed.
    pub fn mirrored(&self) -> TreeSpec {
        TreeSpec::node(self.children.iter().rev().map(|c| c.mirrored()).collect())
    }

    fn validate(&self) -> Result<()> {
        if self.children.len() != 3 {
            return Err(Error::InvalidTreeSpec(format!("the root needs 3 children, has {}", self.children.len())));
        }
        fn inner(t: &TreeSpec) -> Result<()> {
            match t.children.len() {
                0 => Ok(()),
                2 => t.children.iter().try_for_each(inner),
                k => Err(Error::InvalidTreeSpec(format!("an inner vertex has {k} children; cubic needs 2"))),
            }
        }
        self.children.iter().try_for_each(inner)
    }
}

impl fmt::Display for TreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.children.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// A cubic Halin graph: a plane tree plus the circuit through its leaves.
/// Vertices are numbered in preorder (root 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalinGraph {
    pub spec: TreeSpec,
    pub graph: Graph,
    /// Neighbours of each inner vertex in the cyclic order of the plane
    /// embedding: `(parent, children...)`, or the children for the root.
    pub rotation: Vec<Vec<usize>>,
    pub parent: Vec<Option<usize>>,
    pub inner: Vec<usize>,
    /// Leaves in perimeter order.
    pub perimeter: Vec<usize>,
}

pub fn build_halin(spec: &TreeSpec) -> Result<HalinGraph> {
    spec.validate()?;
    let mut parent = Vec::new();
    let mut kids: Vec<Vec<usize>> = Vec::new();
    fn walk(t: &TreeSpec, p: Option<usize>, parent: &mut Vec<Option<usize>>, kids: &mut Vec<Vec<usize>>) -> usize {
        let id = parent.len();
        parent.push(p);
        kids.push(Vec::new());
        for c in &t.children {
            let cid = walk(c, Some(id), parent, kids);
            kids[id].push(cid);
        }
        id
    }
    walk(spec, None, &mut parent, &mut kids);
    let n = parent.len();
    let perimeter: Vec<usize> = (0..n).filter(|&v| kids[v].is_empty()).collect();
    let inner: Vec<usize> = (0..n).filter(|&v| !kids[v].is_empty()).collect();
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (parent[v].unwrap(), v)).collect();
    let k = perimeter.len();
    for i in 0..k {
        edges.push((perimeter[i], perimeter[(i + 1) % k]));
    }
    let rotation = (0..n).map(|v| parent[v].into_iter().chain(kids[v].iter().copied()).collect()).collect();
    let graph = Graph::new(n, edges)?;
    graph.require_cubic()?;
    Ok(HalinGraph { spec: spec.clone(), graph, rotation, parent, inner, perimeter })
}

impl HalinGraph {
    pub fn order(&self) -> usize {
        self.graph.n()
    }

    /// The inner tree with one dangling edge per leaf, all in a single
    /// connector in perimeter order. Inner vertex `inner[i]` becomes `i`.
    pub(crate) fn tree_part(&self) -> Multipole {
        let mut local = vec![usize::MAX; self.order()];
        for (i, &v) in self.inner.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for &v in &self.inner {
            if let Some(p) = self.parent[v] {
                edges.push([End::Vertex(local[p]), End::Vertex(local[v])]);
            }
        }
        let mut conn = Vec::new();
        for &leaf in &self.perimeter {
            conn.push(Semiedge { edge: edges.len(), side: 1 });
            edges.push([End::Vertex(local[self.parent[leaf].unwrap()]), End::Free]);
        }
        Multipole::new(self.inner.len(), edges, vec![conn], Vec::new()).expect("inner vertices are cubic")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipole::{girth, k4};

    #[test]
    fn claw_gives_k4() {
        let h = build_halin(&TreeSpec::claw()).unwrap();
        assert!(h.graph.same_labelled(&k4()));
        assert_eq!(h.perimeter, vec![1, 2, 3]);
    }

    #[test]
    fn prism() {
        let h = build_halin(&TreeSpec::parse("[[],[],[[],[]]]").unwrap()).unwrap();
        assert_eq!(h.order(), 6);
        assert_eq!(h.perimeter.len(), 4);
        assert_eq!(girth(&h.graph).unwrap(), 3);
    }

    #[test]
    fn caterpillars() {
        for k in 1..6 {
            let t = TreeSpec::caterpillar(k);
            let h = build_halin(&t).unwrap();
            assert_eq!(h.inner.len(), k);
            assert_eq!(h.perimeter.len(), k + 2);
        }
    }

    #[test]
    fn rejects_bad_trees() {
        for bad in ["[[],[]]", "[[],[],[[]]]", "[[],[],[],[]]", "{}", "[1,2,3]", "[[],[],[[],[],[]]]"] {
            let r = TreeSpec::parse(bad).and_then(|t| build_halin(&t));
            assert!(matches!(r, Err(Error::InvalidTreeSpec(_))), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        let t = TreeSpec::parse("[[],[[],[]],[]]").unwrap();
        assert_eq!(TreeSpec::parse(&t.to_string()).unwrap(), t);
        assert_eq!(t.mirrored().to_string(), "[[],[[],[]],[]]");
    }
}

use crate::error::{Error, Result};
use crate::multipole::{heawood, is_bipartite, k33, petersen, Graph, Multipole};
use crate::transitions::{
    classify_dipole, transition_relation, weighted_transition_relation, DipoleClass, Named, RelationOptions,
};

/// A Halin fragment `F = D ∘ B`: a decollineator followed by a bipartite
/// block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalinFragment {
    pub d: Multipole,
    pub b: Multipole,
    pub f: Multipole,
}

impl HalinFragment {
    pub fn new(d: Multipole, b: Multipole) -> Result<HalinFragment> {
        d.require_kind(&[2, 2], 0)?;
        b.require_kind(&[2, 2], 1)?;
        let f = d.join(&b, None)?;
        Ok(HalinFragment { d, b, f })
    }

    /// The 11-vertex fragment from the Petersen graph and `K33`.
    pub fn petersen() -> HalinFragment {
        static CELL: std::sync::OnceLock<HalinFragment> = std::sync::OnceLock::new();
        CELL.get_or_init(|| {
            let d = decollineator_from_snark(&petersen(), 0, 1).expect("Petersen gives a decollineator");
            let b = bipartite_block(&k33(), first_path(&k33())).expect("K33 gives a block");
            HalinFragment::new(d, b).expect("kinds fit")
        })
        .clone()
    }

    /// `D_Ps ∘ B` for the block `B` of a bipartite cubic graph.
    pub fn petersen_with_block(g: &Graph) -> Result<HalinFragment> {
        let b = bipartite_block(g, first_path(g))?;
        HalinFragment::new(HalinFragment::petersen().d, b)
    }

    /// `D ∘ (B ∘ M)`: the block extended by a `(2,2)`-pole.
    pub fn with_inserted(&self, m: &Multipole) -> Result<HalinFragment> {
        HalinFragment::new(self.d.clone(), self.b.join(m, None)?)
    }

    pub fn order(&self) -> usize {
        self.f.n()
    }
}

/// `G_uv` of a snark, asserted to be a decollineator. The perfect
/// matching index of `g` is not recomputed: the relation check is what
/// the constructions rely on.
pub fn decollineator_from_snark(g: &Graph, u: usize, v: usize) -> Result<Multipole> {
    let d = Multipole::remove_path(g, &[u, v])?;
    let r = transition_relation(&d, &RelationOptions::default())?;
    if !classify_dipole(&r).contains(&DipoleClass::Decollineator) {
        return Err(Error::NotADecollineator);
    }
    Ok(d)
}

/// `G_uwv` of a bipartite cubic graph, asserted to have its weighted
/// relation inside `B`.
pub fn bipartite_block(g: &Graph, path: [usize; 3]) -> Result<Multipole> {
    if is_bipartite(g).is_none() {
        return Err(Error::NotBipartite);
    }
    let b = Multipole::remove_path(g, &path)?;
    let r = weighted_transition_relation(&b, &RelationOptions::default())?.without_pairs();
    if !r.is_subset(Named::B.relation()) {
        return Err(Error::RelationOutsideB(r.difference(Named::B.relation()).to_string()));
    }
    Ok(b)
}

/// The lexicographically first path `u w v`: `u = 0`, then smallest
/// neighbours.
pub fn first_path(g: &Graph) -> [usize; 3] {
    let mut nw = g.neighbours(0);
    nw.sort_unstable();
    let w = nw[0];
    let mut nv: Vec<usize> = g.neighbours(w).into_iter().filter(|&x| x != 0).collect();
    nv.sort_unstable();
    [0, w, nv[0]]
}

/// `M_Hw`: the Heawood graph minus an edge.
pub fn heawood_dipole() -> Multipole {
    Multipole::remove_path(&heawood(), &[0, 1]).expect("Heawood has edge 01")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipole::{cube, generalized_petersen, k4};

    #[test]
    fn petersen_fragment() {
        let f = HalinFragment::petersen();
        assert_eq!((f.d.n(), f.b.n(), f.order()), (8, 3, 11));
        let r = weighted_transition_relation(&f.f, &RelationOptions::default()).unwrap();
        assert_eq!(&r.without_pairs(), Named::DB.relation());
    }

    #[test]
    fn decollineators() {
        assert_eq!(decollineator_from_snark(&petersen(), 3, 4).unwrap().n(), 8);
        assert_eq!(decollineator_from_snark(&k4(), 0, 1), Err(Error::NotADecollineator));
    }

    #[test]
    fn blocks() {
        assert_eq!(bipartite_block(&heawood(), first_path(&heawood())).unwrap().n(), 11);
        let mk = generalized_petersen(8, 3).unwrap();
        assert_eq!(bipartite_block(&mk, first_path(&mk)).unwrap().n(), 13);
        assert_eq!(bipartite_block(&cube(), first_path(&cube())).unwrap().n(), 5);
        assert_eq!(bipartite_block(&petersen(), [0, 1, 2]), Err(Error::NotBipartite));
        assert_eq!(first_path(&k33()), [0, 3, 1]);
    }

    #[test]
    fn heawood_dipole_is_stationary() {
        let r = transition_relation(&heawood_dipole(), &RelationOptions::default()).unwrap();
        assert!(classify_dipole(&r).contains(&DipoleClass::Stationary));
    }
}

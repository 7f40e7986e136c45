//! Random fixtures and property checks shared by the property suite and
//! the acceptance harness.
#![allow(dead_code)]

use proptest::prelude::*;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use snarkforge_core::flows::{sample_tflow, TFlow};
use snarkforge_core::multipole::{is_connected, Graph};
use snarkforge_core::transitions::{
    check_admissible, transition_relation, weighted_transition_relation, Named, RelationOptions,
};
use snarkforge_core::{Collineation, Multipole, Point4, Tetrahedron};

pub type Check = Result<(), TestCaseError>;

/// A random simple connected cubic graph on `n` vertices (pairing model
/// with rejection).
pub fn random_cubic(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let mut points: Vec<usize> = (0..3 * n).map(|i| i / 3).collect();
        points.shuffle(rng);
        let edges: Vec<(usize, usize)> = points.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
        let mut sorted = edges.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == edges.len() && edges.iter().all(|(a, b)| a != b) {
            let g = Graph::new(n, edges).unwrap();
            if is_connected(&g) {
                return g;
            }
        }
    }
}

/// A random simple connected bipartite cubic graph: three random perfect
/// matchings between `0..m` and `m..2m`.
pub fn random_bipartite_cubic(m: usize, rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let mut edges = Vec::new();
        for _ in 0..3 {
            let mut perm: Vec<usize> = (0..m).collect();
            perm.shuffle(rng);
            edges.extend(perm.iter().enumerate().map(|(a, &b)| (a, m + b)));
        }
        let mut sorted = edges.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == edges.len() {
            let g = Graph::new(2 * m, edges).unwrap();
            if is_connected(&g) {
                return g;
            }
        }
    }
}

/// A random path with `len` vertices.
pub fn random_path(g: &Graph, len: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut path = vec![rng.random_range(0..g.n())];
    while path.len() < len {
        let last = *path.last().unwrap();
        let next: Vec<usize> = g.neighbours(last).into_iter().filter(|v| !path.contains(v)).collect();
        path.push(*next.choose(rng).unwrap());
    }
    path
}

pub fn random_collineation(rng: &mut ChaCha8Rng) -> Collineation {
    let t0 = Tetrahedron::t0();
    loop {
        let basis: Vec<Point4> = (0..4).map(|_| Point4::new(rng.random_range(1..16)).unwrap()).collect();
        if let Ok(c) = Collineation::from_bases(t0.corners(), [basis[0], basis[1], basis[2], basis[3]]) {
            return c;
        }
    }
}

pub fn weight2_count(t0: &Tetrahedron, values: &[Point4]) -> usize {
    values.iter().filter(|&&v| t0.weight(v) == 2).count()
}


pub fn semiedge_parity(seed: u64, half: usize, len: usize, flow_seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_cubic(2 * half, &mut rng);
    let path = random_path(&g, len, &mut rng);
    let m = Multipole::remove_path(&g, &path).unwrap();
    let t0 = Tetrahedron::t0();
    if let Some(phi) = sample_tflow(&m, &t0, flow_seed).unwrap() {
        let k = m.semiedge_count();
        prop_assert_eq!(weight2_count(&t0, &phi.semiedge_values(&m)) % 2, k % 2);
    }
    Ok(())
}

pub fn bipartite_balance(seed: u64, m: usize, flow_seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_bipartite_cubic(m, &mut rng);
    let path = random_path(&g, 3, &mut rng);
    let b = Multipole::remove_path(&g, &path).unwrap();
    let t0 = Tetrahedron::t0();
    if let Some(phi) = sample_tflow(&b, &t0, flow_seed).unwrap() {
        let vals = phi.semiedge_values(&b);
        let u = weight2_count(&t0, &vals[0..2]);
        let v = weight2_count(&t0, &vals[2..4]);
        let w = weight2_count(&t0, &vals[4..5]);
        prop_assert!(u + v <= 2);
        prop_assert_eq!(u + v, w + 1);
    }
    Ok(())
}

pub fn bipartite_block_in_b(seed: u64, m: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_bipartite_cubic(m, &mut rng);
    let path = random_path(&g, 3, &mut rng);
    let b = Multipole::remove_path(&g, &path).unwrap();
    let r = weighted_transition_relation(&b, &RelationOptions::default()).unwrap();
    prop_assert!(r.without_pairs().is_subset(Named::B.relation()), "{}", r);
    Ok(())
}

fn random_dipole(seed: u64, half: usize) -> Multipole {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_cubic(2 * half, &mut rng);
    let path = random_path(&g, 2, &mut rng);
    Multipole::remove_path(&g, &path).unwrap()
}

pub fn trace_preserved(seed: u64, half: usize) -> Check {
    let r = transition_relation(&random_dipole(seed, half), &RelationOptions::default()).unwrap();
    for p in r.pairs().unwrap() {
        prop_assert_eq!(p.input_trace(), p.output_trace(), "{}", p);
    }
    Ok(())
}

pub fn admissible(seed: u64, half: usize) -> Check {
    let r = transition_relation(&random_dipole(seed, half), &RelationOptions::default()).unwrap();
    let a = check_admissible(&r);
    prop_assert!(a.is_admissible(), "{:?}", a.violations);
    prop_assert!(r.without_pairs().is_subset(Named::A.relation()));
    Ok(())
}

pub fn equivariance(seed: u64, half: usize, flow_seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_cubic(2 * half, &mut rng);
    let theta = random_collineation(&mut rng);
    let t0 = Tetrahedron::t0();
    if let Some(phi) = sample_tflow(&g, &t0, flow_seed).unwrap() {
        let psi: TFlow = phi.map(&theta);
        prop_assert_eq!(psi.tetra(), &theta.map_tetrahedron(&t0));
        prop_assert!(psi.validate(&g).is_ok());
        prop_assert!(psi.map(&theta.inverse()).validate(&g).is_ok());
        // Searching directly in the image tetrahedron also succeeds.
        prop_assert!(sample_tflow(&g, psi.tetra(), flow_seed).unwrap().is_some());
    }
    Ok(())
}

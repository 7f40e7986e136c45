use std::time::Instant;

use snarkforge_core::families::*;
use snarkforge_core::flows::find_tflow;
use snarkforge_core::multipole::{cyclic_edge_connectivity_at_least, girth, CYCLIC_CUT_CAP};
use snarkforge_core::transitions::{
    classify_dipole, transition_relation, weighted_transition_relation, DipoleClass, Named, Relation, RelationOptions,
};
use snarkforge_core::{Multipole, Tetrahedron};

fn ps() -> HalinFragment {
    HalinFragment::petersen()
}

fn w34() -> FamilyMember {
    windmill(&ps(), &ps(), &ps()).unwrap()
}

fn shapes(m: &Multipole) -> Relation {
    let o = RelationOptions::default();
    if m.residual().is_empty() {
        transition_relation(m, &o).unwrap().without_pairs()
    } else {
        weighted_transition_relation(m, &o).unwrap().without_pairs()
    }
}

#[test]
fn w34_is_a_nontrivial_snark() {
    let w = w34();
    assert_eq!(w.graph.n(), 34);
    assert_eq!(girth(&w.graph).unwrap(), 5);
    assert!(cyclic_edge_connectivity_at_least(&w.graph, 4, CYCLIC_CUT_CAP).unwrap());
    let t = Instant::now();
    assert_eq!(find_tflow(&w.graph, &Tetrahedron::t1(), None).unwrap(), None);
    eprintln!("direct search on W34: {:?}", t.elapsed());
    assert_eq!(verify_certificate(&w.certificate, &w.graph), Ok(true));
}

#[test]
fn even_orders() {
    for n in (42..=54).step_by(2) {
        let t = Instant::now();
        let m = even_order_family(n).unwrap();
        assert_eq!(m.graph.n(), n);
        assert!(girth(&m.graph).unwrap() >= 5, "{n}");
        assert!(cyclic_edge_connectivity_at_least(&m.graph, 4, CYCLIC_CUT_CAP).unwrap(), "{n}");
        assert_eq!(verify_certificate(&m.certificate, &m.graph), Ok(true), "{n}");
        eprintln!("{n}: {} built and verified in {:?}", m.description, t.elapsed());
    }
}

#[test]
fn direct_search_agrees_up_to_46() {
    for n in [42, 44, 46] {
        let m = even_order_family(n).unwrap();
        let t = Instant::now();
        assert_eq!(find_tflow(&m.graph, &Tetrahedron::t1(), None).unwrap(), None, "{n}");
        eprintln!("direct search on {n}: {:?}", t.elapsed());
    }
}

#[test]
fn halin_pole_bounds() {
    let mprime = Named::MPrime.relation();
    let coll = Named::C.relation();
    let ext = Relation::parse("ang -> ls").unwrap();
    let cases: Vec<(TreeSpec, Vec<HalinFragment>)> = vec![
        (TreeSpec::claw(), vec![ps(); 3]),
        (TreeSpec::parse("[[],[],[[],[]]]").unwrap(), vec![ps(); 4]),
    ];
    for (spec, frags) in cases {
        let h = build_halin(&spec).unwrap();
        let p = halin_poles(&h, &frags).unwrap();
        let (x, y, z) = (shapes(&p.x), shapes(&p.y), shapes(&p.z));
        assert!(x.is_subset(mprime), "{spec}: {x}");
        assert!(y.is_subset(coll), "{spec}: {y}");
        assert!(z.is_subset(&ext), "{spec}: {z}");
        if spec == TreeSpec::claw() {
            assert_eq!(p.y.n(), 26);
            assert_eq!(&y, coll, "the 26-vertex pole attains both collinear transitions");
        }
    }
}

#[test]
fn w34_gives_a_decollineator() {
    let w = w34();
    let d = decollineator_from_snark(&w.graph, 0, w.graph.neighbours(0)[0]).unwrap();
    assert_eq!(d.n(), 32);
}

#[test]
fn composite_families() {
    let h = build_halin(&TreeSpec::claw()).unwrap();
    let p = halin_poles(&h, &vec![ps(); 3]).unwrap();
    let g1 = composite_family(&[ps().d, p.y.clone()], CompositeVariant::DecollineatorFirst).unwrap();
    assert_eq!(g1.graph.n(), 34);
    assert_eq!(verify_certificate(&g1.certificate, &g1.graph), Ok(true));
    let g2 = composite_family(&[p.z.clone(), p.z.clone()], CompositeVariant::Extended).unwrap();
    assert_eq!(g2.graph.n(), 68);
    assert_eq!(verify_certificate(&g2.certificate, &g2.graph), Ok(true));
    assert!(girth(&g2.graph).unwrap() >= 5);
    let bad = composite_family(&[p.y.clone(), p.y], CompositeVariant::DecollineatorFirst);
    assert!(matches!(bad, Err(snarkforge_core::Error::InvalidParts(_))));
    assert!(classify_dipole(&shapes(&p.z)).contains(&DipoleClass::Decollineator));
}

#[test]
fn treelike_orders() {
    for k in 1..=3 {
        let h = build_halin(&TreeSpec::caterpillar(k)).unwrap();
        let m = treelike(&h).unwrap();
        assert_eq!(m.graph.n(), 11 * (k + 2) + k);
        assert_eq!(verify_certificate(&m.certificate, &m.graph), Ok(true));
    }
}

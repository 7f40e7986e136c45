//! Acceptance harness: one line per criterion, nonzero exit on any failure.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_rational::Ratio;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use snarkforge_core::families::*;
use snarkforge_core::flows::{
    circular_flow_ladder, cover_from_tflow, cover_with_k_matchings, enumerate_tflows, find_tflow,
    is_3_edge_colourable, perfect_matching_index, perfect_matchings, tflow_from_cover, PMCover, PmiOptions, PmiValue,
};
use snarkforge_core::geometry::all_lines;
use snarkforge_core::multipole::{
    cube, cyclic_edge_connectivity_at_least, girth, heawood, k33, k4, petersen, Graph, CYCLIC_CUT_CAP,
};
use snarkforge_core::transitions::{
    compose_dipoles, compose_relations, transition_relation, weighted_transition_relation, Compose, Named, Relation,
    RelationOptions,
};
use snarkforge_core::{Multipole, Point4, Shape, Tetrahedron};

type Outcome = Result<String, String>;

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn e<T: std::fmt::Debug>(x: T) -> String {
    format!("{x:?}")
}

fn shapes(m: &Multipole) -> Result<Relation, String> {
    let o = RelationOptions::default();
    let r = if m.residual().is_empty() { transition_relation(m, &o) } else { weighted_transition_relation(m, &o) };
    r.map(|r| r.without_pairs()).map_err(e)
}

fn g_uv(g: &Graph) -> Multipole {
    let v = g.neighbours(0)[0];
    Multipole::remove_path(g, &[0, v]).unwrap()
}

fn c1_geometry() -> Outcome {
    let points: Vec<Point4> = Point4::all_points().collect();
    ensure(points.len() == 15, "15 points")?;
    let lines = all_lines();
    ensure(lines.len() == 35, format!("{} lines", lines.len()))?;
    // Zero-sum triples, counted from scratch.
    let mut triples = 0;
    for a in 1u8..16 {
        for b in a + 1..16 {
            let c = a ^ b;
            if c > b {
                triples += 1;
            }
        }
    }
    ensure(triples == 35, "zero-sum triples")?;
    let want = [
        (Shape::Ls, 6),
        (Shape::Hl, 12),
        (Shape::Ang, 12),
        (Shape::Alt, 12),
        (Shape::Ax, 3),
        (Shape::Dc, 4),
        (Shape::Dm, 6),
    ];
    let mut tetrahedra = 0;
    for a in 0..15 {
        for b in a + 1..15 {
            for c in b + 1..15 {
                for d in c + 1..15 {
                    let Ok(t) = Tetrahedron::new([a, b, c, d].map(|i| points[i])) else { continue };
                    tetrahedra += 1;
                    let census = t.shape_census();
                    for (s, n) in want {
                        ensure(census.get(&s).copied().unwrap_or(0) == n, format!("{s:?} count in {:?}", t.corners()))?;
                    }
                    ensure(census.values().sum::<usize>() == 55, "census sums to 55")?;
                }
            }
        }
    }
    ensure(tetrahedra == 840, format!("{tetrahedra} tetrahedra"))?;
    Ok(format!("15 points, 35 lines, census (6,12,12,12,3,4,6) on all {tetrahedra} tetrahedra"))
}

fn c2_k4_bijection() -> Outcome {
    let g = k4();
    let flows = enumerate_tflows(&g, &Tetrahedron::t1(), None).map_err(e)?;
    let pms = perfect_matchings(&g, None).map_err(e)?;
    // Ordered 4-tuples of perfect matchings covering every edge.
    let mut covers = 0;
    for a in &pms {
        for b in &pms {
            for c in &pms {
                for d in &pms {
                    let seen: BTreeSet<usize> = [a, b, c, d].into_iter().flatten().copied().collect();
                    if seen.len() == g.edge_count() {
                        covers += 1;
                        let cover = PMCover { matchings: vec![a.clone(), b.clone(), c.clone(), d.clone()] };
                        let back = cover_from_tflow(&tflow_from_cover(&g, &cover).map_err(e)?).map_err(e)?;
                        ensure(back == cover, "cover -> flow -> cover")?;
                    }
                }
            }
        }
    }
    ensure(flows.len() == 36, format!("{} T1-flows", flows.len()))?;
    ensure(covers == 36, format!("{covers} covers"))?;
    for f in &flows {
        let back = tflow_from_cover(&g, &cover_from_tflow(f).map_err(e)?).map_err(e)?;
        ensure(&back == f, "flow -> cover -> flow")?;
    }
    Ok("36 T1-flows = 36 ordered covers, both round trips identity".into())
}

fn c3_petersen() -> Outcome {
    let g = petersen();
    ensure(!is_3_edge_colourable(&g).map_err(e)?, "Petersen colourable")?;
    ensure(find_tflow(&g, &Tetrahedron::t1(), None).map_err(e)?.is_none(), "Petersen has a T1-flow")?;
    let cover = cover_with_k_matchings(&g, 5, None, None).map_err(e)?.ok_or("no 5-cover")?;
    cover.validate(&g).map_err(e)?;
    ensure(cover.len() == 5, "cover size")?;
    let pmi = perfect_matching_index(&g, &PmiOptions::default()).map_err(e)?;
    ensure(pmi.value == PmiValue::Five, format!("pmi {}", pmi.value))?;
    Ok("not colourable, no T-flow, 5-cover found: π = 5".into())
}

fn c4_small_relations() -> Outcome {
    let edge = shapes(&Multipole::edge_dipole())?;
    ensure(&edge == Named::C.relation(), format!("edge dipole: {edge}"))?;
    let ps = shapes(&g_uv(&petersen()))?;
    ensure(&ps == Named::D.relation(), format!("Petersen G_uv: {ps}"))?;
    let k = shapes(&g_uv(&k4()))?;
    ensure(!k.has("ang -> ang"), format!("K4 G_uv: {k}"))?;
    Ok(format!("edge = C, Petersen G_uv = D, K4 G_uv = {k}"))
}

fn c5_bipartite_blocks() -> Outcome {
    let k = k33();
    let b = bipartite_block(&k, first_path(&k)).map_err(e)?;
    let merged = shapes(&b)?;
    ensure(merged.is_subset(Named::B.relation()), format!("K33 block: {merged}"))?;
    let split = weighted_transition_relation(&b, &RelationOptions { split_degenerate: true, ..Default::default() })
        .map_err(e)?;
    ensure(!split.has("dc ->2 ls"), "dc ->2 ls present on K33")?;
    ensure(split.has("dm ->2 ls"), "dm ->2 ls absent on K33")?;
    let h = heawood();
    let hw = shapes(&Multipole::remove_path(&h, &first_path(&h)).map_err(e)?)?;
    ensure(&hw == Named::B.relation(), format!("Heawood block: {hw}"))?;
    Ok("K33 ⊆ B with dc absent / dm present; Heawood = B".into())
}

fn c6_petersen_fragment() -> Outcome {
    let f = HalinFragment::petersen();
    let r = shapes(&f.f)?;
    ensure(&r == Named::DB.relation(), format!("fragment: {r}"))?;
    Ok(format!("T(D_Ps ∘ B(K33)) = D∘B, {} entries", r.len()))
}

fn c7_composition() -> Outcome {
    let dipoles: Vec<(&str, Multipole)> = vec![
        ("edge", Multipole::edge_dipole()),
        ("Ps", g_uv(&petersen())),
        ("K4", g_uv(&k4())),
        ("cube", g_uv(&cube())),
        ("K33", Multipole::remove_path(&k33(), &[0, 3]).unwrap()),
    ];
    let mut checked = 0;
    for (n1, m1) in &dipoles {
        for (n2, m2) in &dipoles {
            if m1.n() + m2.n() > 16 {
                continue;
            }
            let lhs = shapes(&compose_dipoles(m1, m2, Compose::Join).map_err(e)?)?;
            let rhs = compose_relations(&shapes(m1)?, &shapes(m2)?, Compose::Join).map_err(e)?;
            ensure(lhs == rhs, format!("{n1}∘{n2}: {lhs} vs {rhs}"))?;
            checked += 1;
        }
    }
    ensure(checked >= 5, "too few pairs")?;
    // Weight of the new residual when two residual values meet at a vertex
    // inside T0.
    let t0 = Tetrahedron::t0();
    for i in 1..=2u8 {
        for j in 1..=2u8 {
            let mut seen = BTreeSet::new();
            for &x in t0.points().iter().filter(|&&x| t0.weight(x) == i) {
                for &y in t0.points().iter().filter(|&&y| t0.weight(y) == j) {
                    for &z in t0.points() {
                        if t0.is_line_of(x, y, z) {
                            seen.insert(t0.weight(z));
                        }
                    }
                }
            }
            let expect: BTreeSet<u8> = if i + j <= 3 { [3 - i * j].into() } else { BTreeSet::new() };
            ensure(seen == expect, format!("weights ({i},{j}) give {seen:?}"))?;
            let r1 = Relation::parse(&format!("ls ->{i} ls")).map_err(e)?;
            let r2 = Relation::parse(&format!("ls ->{j} ls")).map_err(e)?;
            let c = compose_relations(&r1, &r2, Compose::Odot).map_err(e)?;
            let got: BTreeSet<u8> = c.iter().filter_map(|s| s.weight).collect();
            ensure(got == expect, format!("odot ({i},{j}) gives {got:?}"))?;
        }
    }
    ensure(Named::MPrime.relation().is_subset(Named::M.relation()), "M' not inside M")?;
    Ok(format!("{checked} join pairs exact, ⊙ weights 3-ij on all (i,j), M' ⊆ M"))
}

fn c8_w34() -> Outcome {
    let ps = HalinFragment::petersen();
    let w = windmill(&ps, &ps, &ps).map_err(e)?;
    let g = &w.graph;
    ensure(g.n() == 34, "order")?;
    ensure(girth(g).map_err(e)? == 5, "girth")?;
    ensure(cyclic_edge_connectivity_at_least(g, 4, CYCLIC_CUT_CAP).map_err(e)?, "cyclic connectivity")?;
    let t = Instant::now();
    ensure(find_tflow(g, &Tetrahedron::t1(), None).map_err(e)?.is_none(), "W34 has a T-flow")?;
    let direct = t.elapsed();
    let t = Instant::now();
    ensure(verify_certificate(&w.certificate, g) == Ok(true), "certificate")?;
    let cert = t.elapsed();
    let pmi = perfect_matching_index(g, &PmiOptions::default()).map_err(e)?;
    ensure(pmi.value == PmiValue::Five, format!("pmi {}", pmi.value))?;
    let cover = pmi.witness.cover().ok_or("no witness")?;
    cover.validate(g).map_err(e)?;
    ensure(cover.len() == 5, "witness size")?;
    Ok(format!("W34 girth 5, c4ec, direct search {direct:.1?}, certificate {cert:.1?}, π = 5"))
}

fn c9_halin() -> Outcome {
    let ps = HalinFragment::petersen();
    let mprime = Named::MPrime.relation();
    let coll = Named::C.relation();
    let ext = Relation::parse("ang -> ls").map_err(e)?;
    let cases = [(TreeSpec::claw(), 3), (TreeSpec::parse("[[],[],[[],[]]]").map_err(e)?, 4)];
    let mut attained = false;
    for (spec, k) in cases {
        let h = build_halin(&spec).map_err(e)?;
        let p = halin_poles(&h, &vec![ps.clone(); k]).map_err(e)?;
        let (x, y, z) = (shapes(&p.x)?, shapes(&p.y)?, shapes(&p.z)?);
        ensure(x.is_subset(mprime), format!("{spec} X: {x}"))?;
        ensure(y.is_subset(coll), format!("{spec} Y: {y}"))?;
        ensure(z.is_subset(&ext), format!("{spec} Z: {z}"))?;
        if p.y.n() == 26 {
            ensure(&y == coll, format!("26-vertex Y: {y}"))?;
            attained = true;
        }
    }
    ensure(attained, "no 26-vertex fixture")?;
    Ok("X ⊆ M', Y ⊆ C (26-vertex Y = C), Z ⊆ {ang->ls}".into())
}

fn c10_even_orders() -> Outcome {
    let mut times = Vec::new();
    for n in (42..=54).step_by(2) {
        let t = Instant::now();
        let m = even_order_family(n).map_err(e)?;
        let g = &m.graph;
        ensure(g.n() == n, format!("order {}", g.n()))?;
        ensure(girth(g).map_err(e)? >= 5, format!("{n}: girth"))?;
        ensure(cyclic_edge_connectivity_at_least(g, 4, CYCLIC_CUT_CAP).map_err(e)?, format!("{n}: c4ec"))?;
        ensure(verify_certificate(&m.certificate, g) == Ok(true), format!("{n}: certificate"))?;
        if n <= 46 {
            ensure(find_tflow(g, &Tetrahedron::t1(), None).map_err(e)?.is_none(), format!("{n}: T-flow"))?;
        }
        times.push(format!("{n}:{:.0?}", t.elapsed()));
    }
    Ok(format!("42..54 certified, direct search clean up to 46 [{}]", times.join(" ")))
}

fn c11_circular() -> Outcome {
    let p = circular_flow_ladder(&petersen(), 2, None).map_err(e)?;
    let step = |l: &snarkforge_core::flows::CfnLadder, a: u64, b: u64| {
        l.steps.iter().find(|s| s.p == a && s.q == b).map(|s| s.exists)
    };
    ensure(step(&p, 4, 1) == Some(false), "Petersen (4,1)")?;
    ensure(step(&p, 9, 2) == Some(false), "Petersen (9,2)")?;
    ensure(step(&p, 5, 1) == Some(true), "Petersen (5,1)")?;
    ensure(p.lower == Some(Ratio::new(9, 2)) && p.upper == Some(Ratio::from_integer(5)), p.bound_statement())?;
    let k = circular_flow_ladder(&k4(), 2, None).map_err(e)?;
    ensure(k.exact == Some(Ratio::from_integer(4)), format!("K4: {}", k.bound_statement()))?;
    Ok(format!("Petersen: {}; K4: {}", p.bound_statement(), k.bound_statement()))
}

fn c12_properties() -> Outcome {
    let cases = 128;
    let run = |name: &str, f: &dyn Fn(u64, usize, usize, u64) -> common::Check| -> Result<(), String> {
        let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
        runner
            .run(&(any::<u64>(), 3usize..7, 1usize..4, any::<u64>()), |(s, a, b, fs)| f(s, a, b, fs))
            .map_err(|err| format!("{name}: {err}"))
    };
    run("semiedge parity", &|s, a, b, fs| common::semiedge_parity(s, a + 1, b, fs))?;
    run("bipartite balance", &|s, a, _, fs| common::bipartite_balance(s, a, fs))?;
    run("bipartite blocks", &|s, a, _, _| common::bipartite_block_in_b(s, a))?;
    run("trace", &|s, a, _, _| common::trace_preserved(s, a))?;
    run("admissibility", &|s, a, _, _| common::admissible(s, a))?;
    run("equivariance", &|s, a, _, fs| common::equivariance(s, a + 1, fs))?;
    Ok(format!("6 properties x {cases} cases, no violations"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        ("geometry census", c1_geometry),
        ("K4 flow/cover bijection", c2_k4_bijection),
        ("Petersen", c3_petersen),
        ("small (2,2)-pole relations", c4_small_relations),
        ("bipartite blocks", c5_bipartite_blocks),
        ("Petersen fragment", c6_petersen_fragment),
        ("composition laws", c7_composition),
        ("W34 windmill", c8_w34),
        ("Halin pole bounds", c9_halin),
        ("even orders 42..54", c10_even_orders),
        ("circular flow ladders", c11_circular),
        ("property suites", c12_properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("[PASS] {:>2} {name}: {msg} ({secs:.1}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {msg} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

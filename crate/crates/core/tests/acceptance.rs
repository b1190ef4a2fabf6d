//! Acceptance criteria 1 to 10, one line each. Exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use tevtrop::construction::{enumerate_solutions_full, reference_point, verify_solution, Solution};
use tevtrop::counting::{lemma_check, tevelev_degree};
use tevtrop::cover::{hanging_copies, HurwitzData, TropicalCover};
use tevtrop::graph::{isomorphic, stabilize, total_genus};
use tevtrop::hurwitz::{local_hurwitz, triple_hurwitz_marked, vertex_profile, DirectionProfile, LocalVertexProfile, Partition};
use tevtrop::multiplicity::{dilation_matrix, local_degree, select_coordinates};
use tevtrop::numeric::{determinant, rat, ratio};
use tevtrop::oracle::run_and_compare;
use tevtrop::ExecMode;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn solutions(g: usize) -> Result<Vec<Solution>, String> {
    enumerate_solutions_full(g, ExecMode::default()).map_err(|e| format!("g={g}: {e}"))
}

fn c1_degree() -> Outcome {
    let t = Instant::now();
    for g in 1..=8 {
        let (deg, certs) = tevelev_degree(g).map_err(|e| format!("g={g}: {e}"))?;
        check(deg == BigInt::one() << g, format!("g={g}: degree {deg}"))?;
        check(certs.len() == 1 << g, format!("g={g}: {} certificates", certs.len()))?;
        check(certs.iter().all(|(_, c)| c.local_degree.is_one()), format!("g={g}: non-unit certificate"))?;
    }
    let el = t.elapsed();
    check(el < Duration::from_secs(60), format!("took {el:?}"))?;
    Ok(format!("Tev_g = 2^g for g = 1..8, all certificates 1 ({:.1?})", el))
}

fn c2_genus_one() -> Outcome {
    let p = reference_point(1);
    let sols = solutions(1)?;
    check(sols.len() == 2, format!("{} solutions", sols.len()))?;
    for s in &sols {
        let c = local_degree(&s.cover, &p).map_err(|e| e.to_string())?;
        check(c.dilation_det.abs() == BigInt::from(2), format!("{}: det {}", s.index, c.dilation_det))?;
        check(c.aut_ratio == ratio(1, 2), format!("{}: aut ratio {}", s.index, c.aut_ratio))?;
        check(c.hurwitz_product == rat(1), format!("{}: Hurwitz {}", s.index, c.hurwitz_product))?;
        check(c.local_degree == rat(1), format!("{}: certificate {}", s.index, c.local_degree))?;
    }
    Ok("2 solutions, |det| = 2, aut ratio 1/2, Hurwitz 1, certificate 1".into())
}

fn c3_genus_two() -> Outcome {
    let p = reference_point(2);
    let sols = solutions(2)?;
    check(sols.len() == 4, format!("{} solutions", sols.len()))?;
    for s in &sols {
        let m = dilation_matrix(&s.cover, &p).map_err(|e| e.to_string())?;
        let det = determinant(&m.matrix).map_err(|e| e.to_string())?;
        check(det.abs() == BigInt::from(4), format!("{}: det {det}", s.index))?;
        check(m.is_block_diagonal(), format!("{}: not block diagonal", s.index))?;
        check(m.genus_block().rows() == 4 && m.tree_block().rows() == 6, format!("{}: block sizes", s.index))?;
    }
    Ok("4 solutions, |det| = 4, blocks 4 + 6".into())
}

fn c4_genus_three() -> Outcome {
    let n = solutions(3)?.len();
    check(n == 8, format!("{n} solutions"))?;
    Ok("8 solutions".into())
}

fn c5_blocks() -> Outcome {
    for g in 1..=6 {
        let p = reference_point(g);
        for s in solutions(g)? {
            let m = dilation_matrix(&s.cover, &p).map_err(|e| e.to_string())?;
            let tree = determinant(&m.tree_block()).map_err(|e| e.to_string())?;
            let genus = determinant(&m.genus_block()).map_err(|e| e.to_string())?;
            check(m.is_block_diagonal(), format!("{}: not block diagonal", s.index))?;
            check(tree.abs().is_one(), format!("{}: tree block det {tree}", s.index))?;
            check(genus.abs() == BigInt::one() << g, format!("{}: genus block det {genus}", s.index))?;
        }
    }
    Ok("|det tree| = 1, |det genus| = 2^g for g <= 6".into())
}

fn c6_lemma() -> Outcome {
    for d in 2..=12 {
        lemma_check(d).map_err(|e| format!("d={d}: {e}"))?;
    }
    Ok("cumulative tallies, recurrence and weighted totals for d <= 12".into())
}

fn c7_hurwitz() -> Outcome {
    let p = |v: &[usize]| Partition::new(v.to_vec());
    let h = triple_hurwitz_marked(&p(&[4]), &p(&[4]), &p(&[1, 1, 1, 1])).map_err(|e| e.to_string())?;
    check(h == rat(6), format!("H((4),(4),(1^4)) = {h}"))?;
    let dir = |v: &[usize], k: Vec<usize>| DirectionProfile { partition: p(v), is_leg: false, interchangeable: k };
    let fig = LocalVertexProfile::new(vec![dir(&[4], vec![]), dir(&[4], vec![]), dir(&[1, 1, 1, 1], vec![3])]);
    let adjusted = local_hurwitz(&fig).map_err(|e| e.to_string())?;
    check(adjusted == rat(1), format!("adjusted value {adjusted}"))?;
    let mut vertices = 0;
    for g in 1..=6 {
        for s in solutions(g)? {
            let copies = hanging_copies(&s.cover).map_err(|e| e.to_string())?;
            for v in 0..s.cover.source.num_vertices() {
                let h = local_hurwitz(&vertex_profile(&s.cover, v, &copies)).map_err(|e| format!("{} v{v}: {e}", s.index))?;
                check(h == rat(1), format!("{} vertex {v}: {h}", s.index))?;
                vertices += 1;
            }
        }
    }
    Ok(format!("anchor 6 -> 1; all {vertices} source vertices for g <= 6 have H = 1"))
}

fn mutate_expansion(c: &TropicalCover) -> TropicalCover {
    let mut m = c.clone();
    let e = m.edge_map.iter().position(|x| x.expansion == 1).expect("an edge of expansion 1");
    m.edge_map[e].expansion = 2;
    m
}

/// Moves mark 1 onto the unmarked leg over the same target end.
fn mutate_mark(c: &TropicalCover) -> TropicalCover {
    let mut m = c.clone();
    let l1 = m.source.leg_with_mark(1).unwrap();
    let t = m.leg_map[l1].target;
    let other = m.leg_preimages(t).into_iter().find(|&l| l != l1).expect("a second preimage");
    m.source.legs[l1].mark = None;
    m.source.legs[other].mark = Some(1);
    m
}

/// Exchanges two marks on the source only.
fn swap_marks(c: &TropicalCover, a: usize, b: usize) -> TropicalCover {
    let mut m = c.clone();
    let (la, lb) = (m.source.leg_with_mark(a).unwrap(), m.source.leg_with_mark(b).unwrap());
    m.source.legs[la].mark = Some(b);
    m.source.legs[lb].mark = Some(a);
    m
}

fn c8_validators() -> Outcome {
    let mut covers = 0;
    for g in 1..=6 {
        let p = reference_point(g);
        let h = HurwitzData::new(g);
        for s in solutions(g)? {
            let c = &s.cover;
            let fail = |e: tevtrop::Error| format!("{}: {e}", s.index);
            c.validate_harmonic().map_err(fail)?;
            c.validate_local_rh().map_err(fail)?;
            c.check_hurwitz_data(&h).map_err(fail)?;
            c.validate_lengths().map_err(fail)?;
            select_coordinates(c).map_err(fail)?;
            c.validate_all(&h).map_err(fail)?;
            verify_solution(c, &p).map_err(fail)?;

            let bad = mutate_expansion(c);
            check(bad.validate_all(&h).is_err() && bad.validate_harmonic().is_err(), format!("{}: expansion mutant accepted", s.index))?;
            let bad = mutate_mark(c);
            check(verify_solution(&bad, &p).is_err(), format!("{}: moved mark verified", s.index))?;
            let bad = swap_marks(c, 1, g + 3);
            check(bad.check_hurwitz_data(&h).is_err(), format!("{}: swapped marks accepted", s.index))?;
            covers += 1;
        }
    }
    Ok(format!("{covers} covers pass every validator; expansion and mark mutants rejected"))
}

fn c9_oracle() -> Outcome {
    let t = Instant::now();
    let p = reference_point(1);
    let run = run_and_compare(&p.default_base(), ExecMode::default()).map_err(|e| e.to_string())?;
    let r = &run.report;
    check(r.labeled_trees == 10395, format!("{} labeled trees", r.labeled_trees))?;
    check(r.distinct_covers == 2, format!("{} distinct covers", r.distinct_covers))?;
    check(r.matches_construction == Some(true), "oracle covers differ from the construction")?;
    check(!r.totals.contains_key("underdetermined"), "an underdetermined length system")?;
    let el = t.elapsed();
    check(el < Duration::from_secs(300), format!("took {el:?}"))?;
    Ok(format!(
        "{} topologies x {} lifts, {} positive lifts, 2 covers = construction ({:.1?})",
        r.topologies, r.lift_assignments, r.positive_covers, el
    ))
}

fn c10_stabilization() -> Outcome {
    for seed in 0..100 {
        let (g, keep) = common::random_graph(seed);
        let s = stabilize(&g, &keep).map_err(|e| format!("seed {seed}: {e}"))?;
        let again = stabilize(&s.graph, &keep).map_err(|e| format!("seed {seed}: {e}"))?;
        check(again.graph == s.graph, format!("seed {seed}: not idempotent"))?;
        check(isomorphic(&again.graph, &s.graph, true).ok().flatten().is_some(), format!("seed {seed}: not isomorphic"))?;
        let (a, b) = (total_genus(&g).map_err(|e| e.to_string())?, total_genus(&s.graph).map_err(|e| e.to_string())?);
        check(a == b, format!("seed {seed}: genus {a} -> {b}"))?;
        check(s.provenance_holds(&g), format!("seed {seed}: provenance"))?;
    }
    Ok("100 random graphs: idempotent, genus-preserving, provenance exact".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("degree reproduction", c1_degree),
        ("g=1 worked example", c2_genus_one),
        ("g=2 worked example", c3_genus_two),
        ("g=3 worked example", c4_genus_three),
        ("block determinants", c5_blocks),
        ("lattice path lemma", c6_lemma),
        ("Hurwitz anchor", c7_hurwitz),
        ("validator suite", c8_validators),
        ("oracle equivalence", c9_oracle),
        ("stabilization contract", c10_stabilization),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

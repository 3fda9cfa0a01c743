//! Acceptance criteria, one pass/fail line each with its timing.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use vkh::circuit::{check_nt_morphism, compare_glued, glue_complexes, random_crossing_circuit, CircuitError, NtVerdict};
use vkh::closures::{compare_closures, is_nice, ClosureVerdict};
use vkh::cube::{CubeOptions, GeometricComplex, XMarker};
use vkh::diagram::library::*;
use vkh::diagram::{parse_diagram, ClosureKind, Niceness, VTangleDiagram};
use vkh::euler::graded_euler;
use vkh::homology::{homology_over, HomologySummary};
use vkh::lee::lee_generator_prediction;
use vkh::matrix::SparseMatrix;
use vkh::moves::{apply_move, MoveKind};
use vkh::random::{random_link, random_small_link};
use vkh::snf::smith_normal_form;
use vkh::tqft::{apply_tqft, check_faces};
use vkh::{parse_circuit, RingTag, Z};

const VTREFOIL_CIRCUIT: &str = include_str!("../../../data/virtual_trefoil.vcd");
const CROSSING: &str = include_str!("../../../data/crossing.vtd");
const CAP_CIRCUIT: &str = include_str!("../../../data/cap.vcd");

type Outcome = Result<String, String>;

/// Counts homology computations and the Smith forms certified for them.
#[derive(Default)]
struct Tally {
    summaries: usize,
    certified: usize,
    missing: Vec<String>,
}

impl Tally {
    fn homology(&mut self, tag: RingTag, gc: &GeometricComplex, t: i64) -> Result<HomologySummary, String> {
        let h = homology_over(tag, gc, t).map_err(|e| format!("{}: {e}", gc.diagram().name()))?;
        self.summaries += 1;
        self.certified += h.certified;
        if h.certified + 1 != h.degrees.len() {
            self.missing.push(format!("{} over {tag} at t={t}", gc.diagram().name()));
        }
        Ok(h)
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn build(d: &VTangleDiagram) -> Result<GeometricComplex, String> {
    GeometricComplex::build(d, &CubeOptions::default()).map_err(|e| format!("{}: {e}", d.name()))
}

fn concentrated(h: &HomologySummary, degree: i32, rank: usize) -> bool {
    h.degrees.iter().all(|(&i, g)| g.torsion.is_empty() && g.rank == if i == degree { rank } else { 0 })
}

fn corpus() -> Vec<VTangleDiagram> {
    vec![
        VTangleDiagram::unknot(),
        virtual_trefoil(),
        kinked_virtual_trefoil(),
        trefoil(),
        hopf_link(),
        kinked_unknot(),
        unlink(2),
    ]
}

fn random_links(seed: u64, count: usize, max_crossings: usize) -> Vec<VTangleDiagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_small_link(&mut rng, max_crossings, 3)).collect()
}

fn c1(tally: &mut Tally) -> Outcome {
    let d = virtual_trefoil();
    let gc = build(&d)?;
    let h = tally.homology(RingTag::Q, &gc, 1)?;
    ensure(concentrated(&h, 0, 2), || format!("Lee homology {:?}", h.degrees))?;
    let cc = apply_tqft::<Z>(&gc, 1).map_err(|e| e.to_string())?;
    let m = cc.differential(1).ok_or("no differential in degree 1")?;
    ensure(m.rows() == m.cols() && rational_rank(m) == m.rows(), || format!("d^1 is {}x{} of rank {}", m.rows(), m.cols(), rational_rank(m)))?;
    let p = lee_generator_prediction(&d).map_err(|e| e.to_string())?;
    ensure(p.generators == 2 && p.degrees.get(&0) == Some(&2), || format!("prediction {p:?}"))?;
    Ok(format!("virtual trefoil: Lee homology Q^2 in degree 0, d^1 is {0}x{0} and invertible", m.rows()))
}

fn c2(tally: &mut Tally) -> Outcome {
    let d = kinked_virtual_trefoil();
    let gc = build(&d)?;
    let h = tally.homology(RingTag::Q, &gc, 1)?;
    ensure(concentrated(&h, 0, 2), || format!("Lee homology {:?}", h.degrees))?;
    let na = d.non_alternating_resolutions().map_err(|e| e.to_string())?;
    let hit: Vec<String> = na.iter().map(|r| r.state.to_string()).collect();
    ensure(hit == ["011", "011"], || format!("non-alternating states {hit:?}"))?;
    Ok("three-crossing virtual knot: Lee homology Q^2 in degree 0, only state 011 hit, twice".into())
}

fn c3(tally: &mut Tally) -> Outcome {
    let links = random_links(2024, 200, 6);
    let mut knots = 0;
    for d in &links {
        let h = tally.homology(RingTag::Q, &build(d)?, 1)?;
        let n = d.component_count();
        ensure(h.total_rank() == 1 << n, || format!("{d}: Lee rank {} with {n} components", h.total_rank()))?;
        if n == 1 {
            knots += 1;
            ensure(concentrated(&h, 0, 2), || format!("{d}: knot with Lee homology {:?}", h.degrees))?;
        }
        let p = lee_generator_prediction(d).map_err(|e| e.to_string())?;
        for (&i, g) in &h.degrees {
            let predicted = p.degrees.get(&i).copied().unwrap_or(0);
            ensure(g.rank == predicted, || format!("{d}: rank {} in degree {i}, predicted {predicted}", g.rank))?;
        }
    }
    Ok(format!("200 random links (<=6 crossings, <=3 components, {knots} knots): Lee rank 2^n in the predicted degrees"))
}

fn c4() -> Outcome {
    let mut diagrams = corpus();
    diagrams.extend(random_links(77, 200, 6));
    for d in &diagrams {
        let n = d.component_count();
        let na = d.non_alternating_resolutions().map_err(|e| e.to_string())?;
        let orientations = d.orientations().map_err(|e| e.to_string())?.len();
        ensure(na.len() == 1 << n && orientations == 1 << n, || format!("{d}: {} resolutions, {orientations} orientations", na.len()))?;
        let distinct: BTreeSet<(String, Vec<bool>)> = na.iter().map(|r| (r.state.to_string(), r.resolution.reversed().to_vec())).collect();
        ensure(distinct.len() == na.len(), || format!("{d}: two orientations give the same oriented resolution"))?;
        let mut ours: Vec<String> = oriented_states(d).iter().map(|s| s.iter().map(|b| b.to_string()).collect()).collect();
        let mut theirs: Vec<String> = na.iter().map(|r| r.state.to_string()).collect();
        ours.sort();
        theirs.sort();
        ensure(ours == theirs, || format!("{d}: states {theirs:?}, oracle {ours:?}"))?;
    }
    Ok(format!("{} diagrams: 2^n non-alternating resolutions, injective on oriented resolutions", diagrams.len()))
}

fn c5(tally: &mut Tally) -> Outcome {
    let mut diagrams = corpus();
    diagrams.extend(random_links(2024, 200, 6));
    let mut torsion = 0;
    for d in &diagrams {
        let gc = build(d)?;
        let hz = tally.homology(RingTag::Z, &gc, 1)?;
        let hq = tally.homology(RingTag::Q, &gc, 1)?;
        for (&i, g) in &hz.degrees {
            ensure(g.torsion.iter().all(|t| t.is_power_of_two()), || format!("{d}: torsion {:?} in degree {i}", g.torsion))?;
            ensure(g.rank == hq.degree(i).rank, || format!("{d}: free rank {} over Z, {} over Q in degree {i}", g.rank, hq.degree(i).rank))?;
            torsion += g.torsion.len();
        }
    }
    Ok(format!("{} diagrams over Z at t=1: {torsion} torsion summands, all powers of 2; free ranks equal rational ranks", diagrams.len()))
}

fn c6(tally: &mut Tally) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut diagrams = corpus();
    diagrams.extend(random_links(8, 50, 8));
    let mut faces = 0;
    for d in &diagrams {
        let gc = build(d)?;
        for t in [0, 1] {
            faces += check_faces(&gc, t).map_err(|e| format!("{d}: {e}"))?;
            let bad = apply_tqft::<Z>(&gc, t).map_err(|e| e.to_string())?.d_squared_failures();
            ensure(bad.is_empty(), || format!("{d}: d∘d != 0 over Z at t={t} in degrees {bad:?}"))?;
        }
    }
    let mut small = corpus();
    small.extend(random_links(9, 30, 5));
    let mut variants = 0;
    for d in &small {
        for (tag, t) in [(RingTag::Z, 0), (RingTag::Q, 1)] {
            let base = tally.homology(tag, &build(d)?, t)?;
            let nm = d.n_minus() as i32;
            for flips in d.orientations().map_err(|e| e.to_string())? {
                let e = d.reoriented(&flips);
                let h = tally.homology(tag, &build(&e)?, t)?;
                let shift = e.n_minus() as i32 - nm;
                ensure(first_difference_shifted(&base, &h, shift).is_none(), || format!("{d}: orientation {flips:?} changes homology at t={t}"))?;
                variants += 1;
            }
            let e = renumbered(d, &mut rng);
            let h = tally.homology(tag, &build(&e)?, t)?;
            ensure(base.same_groups(&h), || format!("{d}: renumbering changes homology at t={t}"))?;
            let opts = CubeOptions {
                xmarkers: (0..d.crossing_count()).map(|_| XMarker::ALL[rng.gen_range(0..4)]).collect(),
                ..Default::default()
            };
            let gc = GeometricComplex::build(d, &opts).map_err(|e| e.to_string())?;
            let h = tally.homology(tag, &gc, t)?;
            ensure(base.same_groups(&h), || format!("{d}: x-markers {:?} change homology at t={t}", opts.xmarkers))?;
            variants += 2;
        }
    }
    Ok(format!(
        "d∘d = 0 over Z for t in {{0,1}} on {} diagrams ({faces} faces); {variants} reoriented, renumbered or re-marked variants agree",
        diagrams.len()
    ))
}

fn c7(tally: &mut Tally) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bases = vec![virtual_trefoil(), trefoil(), hopf_link(), kinked_virtual_trefoil(), braid_closure(3, &[(0, true), (1, false)])];
    for _ in 0..5 {
        let n = rng.gen_range(2..=3);
        let k = rng.gen_range(1..=2);
        bases.push(random_link(&mut rng, n, k));
    }
    let mut applications = 0;
    for kind in MoveKind::ALL {
        for i in 0..30 {
            let d = &bases[i % bases.len()];
            let app = apply_move(d, kind, &mut rng, false).map_err(|e| format!("{d}: {e}"))?;
            for t in [0, 1] {
                let before = tally.homology(RingTag::Q, &build(&app.before)?, t)?;
                let after = tally.homology(RingTag::Q, &build(&app.after)?, t)?;
                ensure(before.same_groups(&after), || {
                    format!("{kind} at arcs {:?} of {d}: t={t} differs in degree {:?}", app.sites, before.first_difference(&after))
                })?;
                if t == 0 {
                    ensure(before.euler == after.euler, || format!("{kind} at arcs {:?} of {d}: Euler characteristic changes", app.sites))?;
                }
            }
            applications += 1;
        }
    }
    let mut classical = vec![trefoil(), hopf_link(), kinked_unknot(), unlink(2)];
    for _ in 0..40 {
        let strands = rng.gen_range(2..=4);
        classical.push(random_braid_closure(&mut rng, strands, 6));
    }
    for d in &classical {
        ensure(d.is_classical(), || format!("{d} is not classical"))?;
        let cc = apply_tqft::<Z>(&build(d)?, 0).map_err(|e| e.to_string())?;
        let chi: Poly = graded_euler(&cc).map_err(|e| e.to_string())?.terms().collect();
        let sum = kauffman_state_sum(d);
        ensure(chi == sum, || format!("{d}: graded Euler {chi:?}, state sum {sum:?}"))?;
    }
    Ok(format!(
        "{applications} move applications (7 types x 30) keep homology over Q for t in {{0,1}}; {} classical Euler characteristics match the state sum",
        classical.len()
    ))
}

fn c8() -> Outcome {
    let cd = parse_circuit(VTREFOIL_CIRCUIT).map_err(|e| e.to_string())?;
    let crossing = parse_diagram(CROSSING).map_err(|e| e.to_string())?;
    let inputs = [crossing.clone(), crossing];
    for t in [0, 1] {
        let r = compare_glued(&cd, &inputs, ClosureKind::Star, RingTag::Q, t, true).map_err(|e| e.to_string())?;
        ensure(r.verdict == NtVerdict::Equal && r.chain_isomorphic == Some(true), || format!("virtual trefoil circuit at t={t}: {:?}", r.verdict))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let m = rng.gen_range(1..=4);
        let (cd, inputs) = random_crossing_circuit(&mut rng, m);
        for t in [0, 1] {
            let r = check_nt_morphism(&cd, &inputs, RingTag::Q, t, true).map_err(|e| format!("{cd}: {e}"))?;
            ensure(r.verdict == NtVerdict::Equal, || format!("{cd} at t={t}: {:?}", r.verdict))?;
        }
    }
    let d = non_nice_crossing();
    let verdict = compare_closures(&d).map_err(|e| e.to_string())?.verdict;
    ensure(matches!(verdict, ClosureVerdict::Mismatch { .. }), || "closures of the non-nice tangle agree".into())?;
    ensure(is_nice(&d).map_err(|e| e.to_string())? == Niceness::NotNice, || "tangle reported nice".into())?;
    let cap = parse_circuit(CAP_CIRCUIT).map_err(|e| e.to_string())?;
    let mut zero = Vec::new();
    for kind in [ClosureKind::Star, ClosureKind::Alternate] {
        let gc = GeometricComplex::build_tangle(&d, kind, &CubeOptions::default()).map_err(|e| e.to_string())?;
        let glued = glue_complexes(&cap, &[gc]).map_err(|e| e.to_string())?;
        zero.push(glued.complex.saddles().iter().any(|s| s.indicator == 0));
    }
    ensure(zero[0] != zero[1], || format!("indicator-0 saddles under star/alternate closure: {zero:?}"))?;
    ensure(
        matches!(check_nt_morphism(&cap, &[d], RingTag::Q, 1, false), Err(CircuitError::NotNice(0))),
        || "non-nice input accepted".into(),
    )?;
    Ok("virtual trefoil circuit and 20 random single-crossing composites EQUAL; the non-nice tangle has an indicator-0 saddle under one closure only".into())
}

fn c9(tally: &Tally) -> Outcome {
    ensure(tally.missing.is_empty(), || format!("uncertified: {:?}", tally.missing))?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..300 {
        let (r, c) = (rng.gen_range(1..=7), rng.gen_range(1..=7));
        let dense: Vec<Vec<Z>> = (0..r).map(|_| (0..c).map(|_| BigInt::from(rng.gen_range(-6..=6) * rng.gen_range(0..=1))).collect()).collect();
        let m = SparseMatrix::from_dense(dense);
        let f = smith_normal_form(&m).map_err(|e| e.to_string())?;
        f.certify(&m).map_err(|e| format!("{m:?}: {e}"))?;
    }
    Ok(format!("{} Smith forms certified over {} homology computations, plus 300 random integer matrices", tally.certified, tally.summaries))
}

fn main() -> ExitCode {
    let mut tally = Tally::default();
    let mut failed = 0;
    let mut report = |name: &str, limit: Option<u64>, run: &mut dyn FnMut(&mut Tally) -> Outcome, tally: &mut Tally| {
        let start = Instant::now();
        let outcome = run(tally);
        let elapsed = start.elapsed();
        let over = limit.is_some_and(|l| elapsed > Duration::from_millis(l));
        let limit_text = limit.map_or(String::new(), |l| format!(" (limit {:.1}s)", l as f64 / 1000.0));
        let (verdict, detail) = match outcome {
            Ok(_) if over => ("FAIL", "time limit exceeded".to_string()),
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("{name} {verdict} {:.3}s{limit_text}: {detail}", elapsed.as_secs_f64());
    };
    report("C1", Some(100), &mut |t| c1(t), &mut tally);
    report("C2", Some(100), &mut |t| c2(t), &mut tally);
    report("C3", Some(60_000), &mut |t| c3(t), &mut tally);
    report("C4", Some(10_000), &mut |_| c4(), &mut tally);
    report("C5", Some(120_000), &mut |t| c5(t), &mut tally);
    report("C6", Some(120_000), &mut |t| c6(t), &mut tally);
    report("C7", Some(120_000), &mut |t| c7(t), &mut tally);
    report("C8", Some(60_000), &mut |_| c8(), &mut tally);
    let snapshot = std::mem::take(&mut tally);
    report("C9", None, &mut |_| c9(&snapshot), &mut tally);
    if failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria fail");
        ExitCode::FAILURE
    }
}

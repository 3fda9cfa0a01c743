mod common;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use vkh::diagram::library::*;
use vkh::diagram::{State, VTangleDiagram};
use vkh::euler::graded_euler;
use vkh::homology::homology;
use vkh::lee::{admits_colouring, DualEdge, DualGraph};
use vkh::random::random_small_link;
use vkh::tqft::apply_tqft;
use vkh::{Q, Z};

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

fn sample(seed: u64, count: usize, max_crossings: usize) -> Vec<VTangleDiagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = corpus();
    out.extend((0..count).map(|_| random_small_link(&mut rng, max_crossings, 3)));
    for _ in 0..count {
        let strands = rng.gen_range(2..=4);
        out.push(random_braid_closure(&mut rng, strands, max_crossings));
    }
    out
}

fn euler_poly(d: &VTangleDiagram) -> Poly {
    let cc = apply_tqft::<Z>(&closed_complex(d), 0).unwrap();
    graded_euler(&cc).unwrap().terms().collect()
}

#[test]
fn tracer_matches_resolutions() {
    for d in sample(1, 40, 5) {
        let n = d.crossing_count();
        for idx in 0..1usize << n {
            let s = State::from_index(idx, n);
            assert_eq!(d.resolve(&s).unwrap().circle_count(), circle_count(&d, s.bits()), "{d} at {s}");
        }
        assert_eq!(d.component_count(), components(&d).0, "{d}");
    }
}

#[test]
fn braid_closures_are_classical() {
    let t = braid_closure(2, &[(0, true); 3]);
    assert!(t.is_classical());
    assert_eq!(components(&t).0, 1);
    assert_eq!(euler_poly(&t), euler_poly(&trefoil()));
    let h = braid_closure(2, &[(0, false); 2]);
    assert_eq!(components(&h).0, 2);
    assert_eq!(braid_closure(3, &[]).loops().len(), 3);
}

#[test]
fn euler_matches_state_sum() {
    for d in sample(2, 40, 5) {
        assert_eq!(euler_poly(&d), kauffman_state_sum(&d), "{d}");
    }
}

#[test]
fn oriented_states_match_library() {
    for d in sample(3, 40, 6) {
        let mut ours: Vec<String> =
            oriented_states(&d).iter().map(|s| State::new(s.clone()).to_string()).collect();
        let mut theirs: Vec<String> =
            d.non_alternating_resolutions().unwrap().iter().map(|r| r.state.to_string()).collect();
        ours.sort();
        theirs.sort();
        assert_eq!(ours, theirs, "{d}");
    }
}

#[test]
fn colouring_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..2000 {
        let vertices = rng.gen_range(1..=6);
        let m = rng.gen_range(0..=8);
        let mut edges = Vec::new();
        let mut constraints = Vec::new();
        for r in 0..m {
            let (a, b) = (rng.gen_range(0..vertices), rng.gen_range(0..vertices));
            if a == b {
                continue;
            }
            let e = match rng.gen_range(0..3) {
                0 => DualEdge::Virtual,
                1 => DualEdge::Crossing { crossing: r, alternating: true },
                _ => DualEdge::Crossing { crossing: r, alternating: false },
            };
            constraints.push((a, b, matches!(e, DualEdge::Crossing { alternating: true, .. })));
            edges.push((a, b, e));
        }
        let g = DualGraph { vertices, edges };
        assert_eq!(admits_colouring(&g), brute_force_colourable(vertices, &constraints), "{g:?}");
    }
}

#[test]
fn betti_numbers_match_elimination() {
    for d in sample(5, 25, 5) {
        for t in [0, 1] {
            let gc = closed_complex(&d);
            let ours = rational_betti(&apply_tqft::<Z>(&gc, t).unwrap());
            let h = homology(&apply_tqft::<Q>(&gc, t).unwrap()).unwrap();
            let theirs: BTreeMap<i32, usize> = h.degrees.iter().map(|(&i, g)| (i, g.rank)).collect();
            assert_eq!(ours, theirs, "{d} t={t}");
            let hz = homology(&apply_tqft::<Z>(&gc, t).unwrap()).unwrap();
            let free: BTreeMap<i32, usize> = hz.degrees.iter().map(|(&i, g)| (i, g.rank)).collect();
            assert_eq!(free, theirs, "{d} t={t}");
        }
    }
}

#[test]
fn shifted_comparison() {
    let h = homology(&apply_tqft::<Z>(&closed_complex(&trefoil()), 0).unwrap()).unwrap();
    assert_eq!(first_difference_shifted(&h, &h, 0), None);
    assert!(first_difference_shifted(&h, &h, 1).is_some());
}

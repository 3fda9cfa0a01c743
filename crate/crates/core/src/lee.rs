//! Lee degeneration: dual graphs of resolutions, their colourings, and the
//! generators predicted by the non-alternating resolutions.
//!
//! At a crossing whose two local arcs carry orientations, the picture is
//! *non-alternating* when both arcs run the same way (the oriented smoothing
//! of some crossing), which happens exactly when the two entry ports are
//! neighbours.

use std::collections::{BTreeMap, BTreeSet};

use crate::cube::{GeometricComplex, SaddleKind};
use crate::diagram::{ArcId, DiagramError, Resolution, State, VTangleDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DualEdge {
    /// The two circles meet at a virtual crossing.
    Virtual,
    /// The two circles are the two saddle circles of a crossing.
    Crossing { crossing: usize, alternating: bool },
}

/// Simple graph on the circles of a resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, DualEdge)>,
}

/// Whether the oriented local arcs at crossing `r` run against each other.
pub fn is_alternating(res: &Resolution, r: usize) -> bool {
    (res.entry_port(r, 0) + res.entry_port(r, 1)).is_multiple_of(2)
}

/// The dual graph of an oriented resolution of `d`. Loops are dropped, and
/// of several parallel edges of one type only the first is kept.
pub fn dual_graph(d: &VTangleDiagram, res: &Resolution) -> DualGraph {
    let mut comp_of: BTreeMap<ArcId, usize> = BTreeMap::new();
    for (ci, c) in res.components().iter().enumerate() {
        for &(a, _) in &c.arcs {
            comp_of.insert(a, ci);
        }
    }
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    let mut add = |a: usize, b: usize, e: DualEdge| {
        if a == b {
            return;
        }
        let (a, b) = (a.min(b), a.max(b));
        let kind = match e {
            DualEdge::Virtual => None,
            DualEdge::Crossing { alternating, .. } => Some(alternating),
        };
        if seen.insert((a, b, kind)) {
            edges.push((a, b, e));
        }
    };
    for v in d.virtuals() {
        add(comp_of[&v.ports[0]], comp_of[&v.ports[1]], DualEdge::Virtual);
    }
    for r in 0..d.crossing_count() {
        let (c0, c1) = (res.local_arc(r, 0).component, res.local_arc(r, 1).component);
        add(c0, c1, DualEdge::Crossing { crossing: r, alternating: is_alternating(res, r) });
    }
    DualGraph { vertices: res.len(), edges }
}

/// Two-colouring where virtual and non-alternating edges join equal colours
/// and alternating edges join different ones. Decided by union-find with
/// parity.
pub fn admits_colouring(g: &DualGraph) -> bool {
    let mut parent: Vec<usize> = (0..g.vertices).collect();
    // parity of each vertex relative to its parent
    let mut parity = vec![false; g.vertices];
    fn find(parent: &mut [usize], parity: &mut [bool], x: usize) -> (usize, bool) {
        if parent[x] == x {
            return (x, false);
        }
        let (root, p) = find(parent, parity, parent[x]);
        parent[x] = root;
        parity[x] ^= p;
        (root, parity[x])
    }
    for &(a, b, e) in &g.edges {
        let differ = matches!(e, DualEdge::Crossing { alternating: true, .. });
        let (ra, pa) = find(&mut parent, &mut parity, a);
        let (rb, pb) = find(&mut parent, &mut parity, b);
        if ra == rb {
            if pa ^ pb != differ {
                return false;
            }
        } else {
            parent[ra] = rb;
            parity[ra] = pa ^ pb ^ differ;
        }
    }
    true
}

/// Whether the resolution at `s` is the bottom of a merge or the top of a
/// split at some crossing. Such resolutions carry no Lee generators.
pub fn is_killed(gc: &GeometricComplex, s: &State) -> bool {
    (0..s.len()).any(|r| {
        if s.get(r) == 0 {
            gc.saddle(s, r).is_some_and(|sd| sd.kind == SaddleKind::Split)
        } else {
            gc.saddle(&s.with(r, 0), r).is_some_and(|sd| sd.kind == SaddleKind::Merge)
        }
    })
}

/// Whether the resolution at `s` survives in the Lee complex: it is not
/// killed and some orientation of its circles admits a colouring of the
/// dual graph.
pub fn survives(gc: &GeometricComplex, s: &State) -> bool {
    if is_killed(gc, s) {
        return false;
    }
    let res = gc.resolution(s);
    let c = res.len();
    (0..1usize << c).any(|mask| {
        let o: Vec<bool> = (0..c).map(|i| mask >> i & 1 == 1).collect();
        admits_colouring(&dual_graph(gc.diagram(), &res.clone().with_orientation(o)))
    })
}

/// Lee generators predicted from the non-alternating resolutions: one per
/// orientation of the link, in the homological degree of its state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeePrediction {
    pub generators: usize,
    pub degrees: BTreeMap<i32, usize>,
    /// Distinct non-alternating states, ascending.
    pub states: Vec<State>,
}

pub fn lee_generator_prediction(d: &VTangleDiagram) -> Result<LeePrediction, DiagramError> {
    let nm = d.n_minus() as i32;
    let mut degrees = BTreeMap::new();
    let mut states = BTreeSet::new();
    let na = d.non_alternating_resolutions()?;
    for r in &na {
        *degrees.entry(r.state.height() as i32 - nm).or_insert(0) += 1;
        states.insert(r.state.clone());
    }
    Ok(LeePrediction { generators: na.len(), degrees, states: states.into_iter().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::CubeOptions;
    use crate::diagram::library::*;

    fn g(vertices: usize, edges: Vec<(usize, usize, DualEdge)>) -> DualGraph {
        DualGraph { vertices, edges }
    }

    const ALT: DualEdge = DualEdge::Crossing { crossing: 0, alternating: true };
    const NON: DualEdge = DualEdge::Crossing { crossing: 0, alternating: false };

    #[test]
    fn colourings() {
        assert!(admits_colouring(&g(3, vec![])));
        assert!(admits_colouring(&g(2, vec![(0, 1, ALT)])));
        assert!(!admits_colouring(&g(3, vec![(0, 1, ALT), (1, 2, ALT), (0, 2, ALT)])));
        assert!(admits_colouring(&g(3, vec![(0, 1, ALT), (1, 2, ALT), (0, 2, NON)])));
        assert!(!admits_colouring(&g(2, vec![(0, 1, ALT), (0, 1, DualEdge::Virtual)])));
    }

    #[test]
    fn single_circle() {
        let d = VTangleDiagram::unknot();
        let res = d.resolve(&State::zeros(0)).unwrap();
        assert_eq!(dual_graph(&d, &res), g(1, vec![]));
    }

    #[test]
    fn predictions() {
        let p = lee_generator_prediction(&virtual_trefoil()).unwrap();
        assert_eq!(p.generators, 2);
        assert_eq!(p.degrees, BTreeMap::from([(0, 2)]));
        let p = lee_generator_prediction(&unlink(3)).unwrap();
        assert_eq!(p.generators, 8);
        let p = lee_generator_prediction(&hopf_link()).unwrap();
        assert_eq!(p.generators, 4);
        assert_eq!(p.states.len(), 2);
    }

    #[test]
    fn kinked_virtual_trefoil_resolutions() {
        let d = kinked_virtual_trefoil();
        let counts: Vec<usize> = (0..8).map(|i| d.resolve(&State::from_index(i, 3)).unwrap().len()).collect();
        // three circles at 000, each neighbour merges two of them
        assert_eq!([counts[0], counts[1], counts[2], counts[4]], [3, 2, 2, 2]);
        let p = lee_generator_prediction(&d).unwrap();
        assert_eq!(p.states, vec!["011".parse().unwrap()]);
        assert_eq!(p.degrees, BTreeMap::from([(0, 2)]));
        let gc = GeometricComplex::build(&d, &CubeOptions::default()).unwrap();
        let s011: State = "011".parse().unwrap();
        let res = gc.resolution(&s011);
        // the resolution oriented by the knot colours its dual graph
        let na = d.non_alternating_resolutions().unwrap();
        assert!(admits_colouring(&dual_graph(&d, &na[0].resolution)));
        assert!(!is_killed(&gc, &s011));
        assert_eq!(res.len(), 2);
        let s000 = State::zeros(3);
        assert!(!survives(&gc, &s000));
    }

    #[test]
    fn non_alternating_states_survive() {
        for d in [trefoil(), hopf_link(), virtual_trefoil(), kinked_unknot(), kinked_virtual_trefoil()] {
            let gc = GeometricComplex::build(&d, &CubeOptions::default()).unwrap();
            let p = lee_generator_prediction(&d).unwrap();
            let n = d.crossing_count();
            let surviving: Vec<State> =
                (0..1usize << n).map(|i| State::from_index(i, n)).filter(|s| survives(&gc, s)).collect();
            assert_eq!(surviving, p.states, "{}", d.name());
        }
    }
}

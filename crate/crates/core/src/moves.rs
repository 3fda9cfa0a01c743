//! Generalized Reidemeister moves as local rewrites of diagrams.
//!
//! Kinks are added on a single arc. Every other move is a braid relation
//! inserted on two or three arcs cut open at random: the arcs run upward
//! through a small braid, and the move replaces one braid word by another.
//! The braid strands reach their arcs through virtual detours, so any arcs
//! can be chosen.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{ArcId, End, VTangleDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MoveKind {
    Rm1,
    Rm2,
    Rm3,
    Vrm1,
    Vrm2,
    Vrm3,
    /// A strand passes a classical crossing through two virtual ones.
    Mixed,
}

impl MoveKind {
    pub const ALL: [MoveKind; 7] =
        [MoveKind::Rm1, MoveKind::Rm2, MoveKind::Rm3, MoveKind::Vrm1, MoveKind::Vrm2, MoveKind::Vrm3, MoveKind::Mixed];

    /// Number of arcs the move is applied to.
    pub fn sites(self) -> usize {
        match self {
            MoveKind::Rm1 | MoveKind::Vrm1 => 1,
            MoveKind::Rm2 | MoveKind::Vrm2 => 2,
            MoveKind::Rm3 | MoveKind::Vrm3 | MoveKind::Mixed => 3,
        }
    }

    pub fn is_classical(self) -> bool {
        matches!(self, MoveKind::Rm1 | MoveKind::Rm2 | MoveKind::Rm3)
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MoveKind::Rm1 => "RM1",
            MoveKind::Rm2 => "RM2",
            MoveKind::Rm3 => "RM3",
            MoveKind::Vrm1 => "vRM1",
            MoveKind::Vrm2 => "vRM2",
            MoveKind::Vrm3 => "vRM3",
            MoveKind::Mixed => "mRM",
        };
        f.write_str(s)
    }
}

impl FromStr for MoveKind {
    type Err = MoveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MoveKind::ALL
            .into_iter()
            .find(|k| k.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| MoveError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("{kind} needs {needed} distinct arcs with ends, the diagram has {found}")]
    Inapplicable { kind: MoveKind, needed: usize, found: usize },
    #[error("unknown move {0:?}")]
    UnknownKind(String),
}

/// Braid generator between positions `i` and `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Gen {
    /// Classical, the left strand over the right one.
    Over,
    /// Classical, the left strand under the right one.
    Under,
    Virtual,
}

impl Gen {
    fn inverse(self) -> Gen {
        match self {
            Gen::Over => Gen::Under,
            Gen::Under => Gen::Over,
            Gen::Virtual => Gen::Virtual,
        }
    }
}

type Word = Vec<(usize, Gen)>;

fn inverse(word: &[(usize, Gen)]) -> Word {
    word.iter().rev().map(|&(i, g)| (i, g.inverse())).collect()
}

/// A diagram before and after one move.
#[derive(Clone, Debug)]
pub struct MoveApplication {
    pub kind: MoveKind,
    /// Arcs of the input the move was applied to.
    pub sites: Vec<ArcId>,
    pub before: VTangleDiagram,
    pub after: VTangleDiagram,
}

/// Applies a move of `kind` at randomly chosen arcs.
///
/// For kinks and the second moves `before` is the input itself. For moves
/// on three strands `before` carries the left braid word `W`; with `padded`
/// it carries `W W⁻¹` instead, which second moves undo, so that `before`
/// and `after` stay equivalent to the input.
pub fn apply_move<R: Rng>(d: &VTangleDiagram, kind: MoveKind, rng: &mut R, padded: bool) -> Result<MoveApplication, MoveError> {
    let candidates: Vec<ArcId> = d.arcs().into_iter().filter(|a| !d.loops().contains(a)).collect();
    if candidates.len() < kind.sites() {
        return Err(MoveError::Inapplicable { kind, needed: kind.sites(), found: candidates.len() });
    }
    let sites: Vec<ArcId> = sample(rng, candidates.len(), kind.sites()).into_iter().map(|i| candidates[i]).collect();
    let name = format!("{} after {kind}", d.name());
    let classical = if rng.gen_bool(0.5) { Gen::Over } else { Gen::Under };
    let (left, right): (Word, Word) = match kind {
        MoveKind::Rm1 | MoveKind::Vrm1 => {
            let node = if kind == MoveKind::Rm1 { NodeKind::Classical } else { NodeKind::Virtual };
            let after = kink(d, sites[0], node, rng.gen_range(0..2), rng.gen_bool(0.5)).with_name(name);
            return Ok(MoveApplication { kind, sites, before: d.clone(), after });
        }
        MoveKind::Rm2 => (vec![], vec![(0, classical), (0, classical.inverse())]),
        MoveKind::Vrm2 => (vec![], vec![(0, Gen::Virtual), (0, Gen::Virtual)]),
        MoveKind::Rm3 => (vec![(0, classical), (1, classical), (0, classical)], vec![(1, classical), (0, classical), (1, classical)]),
        MoveKind::Vrm3 => (
            vec![(0, Gen::Virtual), (1, Gen::Virtual), (0, Gen::Virtual)],
            vec![(1, Gen::Virtual), (0, Gen::Virtual), (1, Gen::Virtual)],
        ),
        MoveKind::Mixed => (
            vec![(0, classical), (1, Gen::Virtual), (0, Gen::Virtual)],
            vec![(1, Gen::Virtual), (0, Gen::Virtual), (1, classical)],
        ),
    };
    let pad = if padded { inverse(&left) } else { vec![] };
    let before = if left.is_empty() {
        d.clone()
    } else {
        insert_braid(d, &sites, &[left.clone(), pad.clone()].concat()).with_name(d.name())
    };
    let after = insert_braid(d, &sites, &[right, pad].concat()).with_name(name);
    Ok(MoveApplication { kind, sites, before, after })
}

/// Applies `count` random padded moves, each to `d` itself, so every
/// `after` is equivalent to `d`. Inapplicable moves are returned as errors
/// in place.
pub fn random_moves<R: Rng>(d: &VTangleDiagram, count: usize, kinds: &[MoveKind], rng: &mut R) -> Vec<Result<MoveApplication, MoveError>> {
    (0..count)
        .map(|_| {
            let kind = kinds[rng.gen_range(0..kinds.len())];
            apply_move(d, kind, rng, true)
        })
        .collect()
}

#[derive(Clone, Copy)]
enum NodeKind {
    Classical,
    Virtual,
}

/// Adds a kink on arc `a`. The strand enters the new crossing at port
/// `first`, leaves through the opposite port, and comes back on the side
/// given by `turn_left`.
fn kink(d: &VTangleDiagram, a: ArcId, node: NodeKind, first: u8, turn_left: bool) -> VTangleDiagram {
    let mut w = d.to_wiring();
    let head = head_of(d, a);
    let (l, out) = (d.max_arc() + 1, d.max_arc() + 2);
    let back = if turn_left { (first + 3) % 4 } else { (first + 1) % 4 };
    let mut ports = [0; 4];
    ports[first as usize] = a;
    ports[(first as usize + 2) % 4] = l;
    ports[back as usize] = l;
    ports[(back as usize + 2) % 4] = out;
    match node {
        NodeKind::Classical => w.classical.push(ports),
        NodeKind::Virtual => w.virtuals.push(ports),
    }
    w.set_arc_at(head, out);
    w.into_diagram(d.name().to_string()).expect("a kink keeps the diagram valid")
}

fn head_of(d: &VTangleDiagram, a: ArcId) -> End {
    d.arc_ends(a).expect("sites are arcs with ends").1
}

/// Cuts the `sites` open and runs them, left to right, upward through the
/// braid `word`. Classical crossings have counterclockwise ports starting
/// at the lower end of the under-strand.
fn insert_braid(d: &VTangleDiagram, sites: &[ArcId], word: &[(usize, Gen)]) -> VTangleDiagram {
    let mut w = d.to_wiring();
    let heads: Vec<End> = sites.iter().map(|&a| head_of(d, a)).collect();
    let mut next = d.max_arc();
    let mut fresh = || {
        next += 1;
        next
    };
    // current arc at each position, and which site's strand it belongs to
    let mut cur: Vec<ArcId> = sites.to_vec();
    let mut strand: Vec<usize> = (0..sites.len()).collect();
    for &(i, g) in word {
        let (l, r) = (cur[i], cur[i + 1]);
        let (l2, r2) = (fresh(), fresh());
        // legs: l at lower left, r at lower right, l2 at upper right, r2 at upper left
        match g {
            Gen::Over => w.classical.push([r, l2, r2, l]),
            Gen::Under => w.classical.push([l, r, l2, r2]),
            Gen::Virtual => w.virtuals.push([l, r, l2, r2]),
        }
        cur[i] = r2;
        cur[i + 1] = l2;
        strand.swap(i, i + 1);
    }
    for (pos, &s) in strand.iter().enumerate() {
        if cur[pos] == sites[s] {
            continue;
        }
        w.set_arc_at(heads[s], cur[pos]);
    }
    w.into_diagram(d.name().to_string()).expect("a braid keeps the diagram valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{CubeOptions, GeometricComplex};
    use crate::diagram::library::*;
    use crate::diagram::State;
    use crate::homology::homology;
    use crate::tqft::apply_tqft;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn same_homology(a: &VTangleDiagram, b: &VTangleDiagram) -> bool {
        [0, 1].into_iter().all(|t| {
            let h = |d: &VTangleDiagram| {
                let gc = GeometricComplex::build(d, &CubeOptions::default()).unwrap();
                homology(&apply_tqft::<BigRational>(&gc, t).unwrap()).unwrap()
            };
            h(a).same_groups(&h(b))
        })
    }

    #[test]
    fn names_round_trip() {
        for k in MoveKind::ALL {
            assert_eq!(k.to_string().parse::<MoveKind>().unwrap(), k);
        }
        assert!("RM4".parse::<MoveKind>().is_err());
    }

    #[test]
    fn kinks_keep_orientation() {
        let d = trefoil();
        for first in 0..2 {
            for left in [false, true] {
                let k = kink(&d, 1, NodeKind::Classical, first, left);
                assert_eq!(k.crossing_count(), 4);
                assert_eq!(k.component_count(), 1);
                let signs = |d: &VTangleDiagram| d.crossings().iter().map(|c| c.sign).collect::<Vec<_>>();
                assert_eq!(signs(&k)[..3], signs(&d)[..]);
                assert!(same_homology(&d, &k));
            }
        }
    }

    #[test]
    fn second_move_adds_opposite_crossings() {
        let d = hopf_link();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let app = apply_move(&d, MoveKind::Rm2, &mut rng, false).unwrap();
        assert_eq!(app.after.crossing_count(), 4);
        assert_eq!(app.after.writhe(), d.writhe());
        assert_eq!(app.after.component_count(), 2);
        let n = app.after.crossing_count();
        // the bigon shows up as a circle count pattern shared with the input
        assert!(app.after.resolve(&State::zeros(n)).is_ok());
    }

    #[test]
    fn braid_relation_keeps_strands() {
        let d = virtual_trefoil();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for kind in [MoveKind::Rm3, MoveKind::Vrm3, MoveKind::Mixed] {
            for padded in [false, true] {
                let app = apply_move(&d, kind, &mut rng, padded).unwrap();
                assert_eq!(app.before.component_count(), d.component_count());
                assert_eq!(app.after.component_count(), d.component_count());
                assert_eq!(app.before.writhe(), app.after.writhe());
            }
        }
    }

    #[test]
    fn every_move_preserves_homology() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [trefoil(), virtual_trefoil(), hopf_link()] {
            for kind in MoveKind::ALL {
                let app = apply_move(&d, kind, &mut rng, false).unwrap();
                assert!(same_homology(&app.before, &app.after), "{kind} on {}", d.name());
            }
        }
    }

    #[test]
    fn padded_moves_stay_equivalent() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let d = virtual_trefoil();
        for kind in [MoveKind::Vrm3, MoveKind::Mixed] {
            let app = apply_move(&d, kind, &mut rng, true).unwrap();
            assert!(same_homology(&d, &app.before));
            assert!(same_homology(&d, &app.after));
        }
    }

    #[test]
    fn inapplicable_on_loops() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let err = apply_move(&VTangleDiagram::unknot(), MoveKind::Rm1, &mut rng, false).unwrap_err();
        assert_eq!(err, MoveError::Inapplicable { kind: MoveKind::Rm1, needed: 1, found: 0 });
        let r = random_moves(&kinked_unknot(), 6, &MoveKind::ALL, &mut rng);
        assert_eq!(r.len(), 6);
        assert!(r.iter().any(|a| a.is_err()));
    }

    #[test]
    fn tangles_accept_moves() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let d = single_crossing(true);
        for kind in MoveKind::ALL {
            let app = apply_move(&d, kind, &mut rng, true).unwrap();
            assert_eq!(app.after.boundary_count(), 4);
        }
    }
}

//! Seeded random virtual link diagrams from random Gauss codes.
//!
//! A Gauss code fixes a closed diagram up to virtual moves, and closed
//! diagrams never need their virtual crossings listed: strands pass through
//! them transparently. Generated diagrams therefore carry no `V` lines.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::diagram::{ArcId, Crossing, CrossingSign, VTangleDiagram};

/// One passage of a strand through a classical crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussPass {
    pub crossing: usize,
    pub over: bool,
}

/// Builds a closed diagram from per-component Gauss words. Every crossing
/// must be passed exactly once over and once under.
pub fn from_gauss(name: &str, words: &[Vec<GaussPass>], signs: &[CrossingSign]) -> VTangleDiagram {
    let n = signs.len();
    let mut slots = vec![[0 as ArcId; 4]; n];
    let mut loops = Vec::new();
    let mut next: ArcId = 1;
    for w in words {
        if w.is_empty() {
            loops.push(next);
            next += 1;
            continue;
        }
        let m = w.len();
        let first = next;
        // arc k runs from pass k to pass k+1
        for (k, p) in w.iter().enumerate() {
            let out_arc = first + k as ArcId;
            let in_arc = if k == 0 { first + m as ArcId - 1 } else { first + k as ArcId - 1 };
            let s = &mut slots[p.crossing];
            if p.over {
                s[1] = in_arc;
                s[3] = out_arc;
            } else {
                s[0] = in_arc;
                s[2] = out_arc;
            }
        }
        next += m as ArcId;
    }
    let crossings = slots.iter().zip(signs).map(|(s, &sign)| Crossing::new(*s, sign)).collect();
    VTangleDiagram::new(name, crossings, vec![], vec![], loops).expect("Gauss words describe a valid diagram")
}

/// Random closed diagram with `crossings` classical crossings spread over
/// `components` link components.
pub fn random_link<R: Rng>(rng: &mut R, crossings: usize, components: usize) -> VTangleDiagram {
    assert!(components >= 1);
    let mut passes: Vec<GaussPass> = (0..crossings)
        .flat_map(|c| [GaussPass { crossing: c, over: true }, GaussPass { crossing: c, over: false }])
        .collect();
    passes.shuffle(rng);
    // cut the shuffled sequence into `components` words
    let mut cuts: Vec<usize> = (0..components - 1).map(|_| rng.gen_range(0..=passes.len())).collect();
    cuts.sort_unstable();
    let mut words = Vec::with_capacity(components);
    let mut start = 0;
    for &c in cuts.iter().chain(std::iter::once(&passes.len())) {
        words.push(passes[start..c].to_vec());
        start = c;
    }
    let signs: Vec<CrossingSign> = (0..crossings)
        .map(|_| if rng.gen_bool(0.5) { CrossingSign::Positive } else { CrossingSign::Negative })
        .collect();
    from_gauss(&format!("random {crossings}x{components}"), &words, &signs)
}

/// Random closed diagram with at most `max_crossings` crossings and at most
/// `max_components` components.
pub fn random_small_link<R: Rng>(rng: &mut R, max_crossings: usize, max_components: usize) -> VTangleDiagram {
    let n = rng.gen_range(0..=max_crossings);
    let k = rng.gen_range(1..=max_components);
    random_link(rng, n, k)
}

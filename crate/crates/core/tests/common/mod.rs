//! Independent oracles: a strand tracer working from the raw crossing data,
//! the Kauffman state sum, brute-force colourings, rational ranks by
//! fraction-free elimination, and homology comparison up to degree shifts.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use vkh::cube::{CubeOptions, GeometricComplex};
use vkh::diagram::{ArcId, Crossing, CrossingSign, VTangleDiagram};
use vkh::homology::HomologySummary;
use vkh::matrix::SparseMatrix;
use vkh::tqft::ChainComplex;
use vkh::Z;

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }

    fn classes(&mut self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().map(|x| self.find(x)).collect::<BTreeSet<_>>().len()
    }
}

/// Counterclockwise ports of a crossing, derived from the planar picture of
/// a positive crossing (over strand from bottom left to top right) and a
/// negative one (over strand from bottom right to top left).
pub fn ccw_ports(c: &Crossing) -> [ArcId; 4] {
    match c.sign {
        CrossingSign::Positive => [c.under_in, c.over_out, c.under_out, c.over_in],
        CrossingSign::Negative => [c.under_in, c.over_in, c.under_out, c.over_out],
    }
}

/// Slots are arc ends: `(node, port)` pairs numbered densely. Arcs join
/// their two ends, nodes join ends by `pairing`.
fn trace(d: &VTangleDiagram, pairing: impl Fn(usize, usize) -> usize) -> (Dsu, Vec<usize>) {
    let n = d.crossing_count();
    let slot_count = 4 * (n + d.virtuals().len()) + d.boundary().len();
    let mut dsu = Dsu::new(slot_count);
    let mut ends: BTreeMap<ArcId, Vec<usize>> = BTreeMap::new();
    for (i, c) in d.crossings().iter().enumerate() {
        for (p, a) in ccw_ports(c).into_iter().enumerate() {
            ends.entry(a).or_default().push(4 * i + p);
        }
        for p in 0..4 {
            dsu.union(4 * i + p, 4 * i + pairing(i, p));
        }
    }
    for (i, v) in d.virtuals().iter().enumerate() {
        let base = 4 * (n + i);
        for (p, &a) in v.ports.iter().enumerate() {
            ends.entry(a).or_default().push(base + p);
        }
        dsu.union(base, base + 2);
        dsu.union(base + 1, base + 3);
    }
    for (i, &a) in d.boundary().iter().enumerate() {
        ends.entry(a).or_default().push(4 * (n + d.virtuals().len()) + i);
    }
    for e in ends.values() {
        assert_eq!(e.len(), 2, "every arc has two ends");
        dsu.union(e[0], e[1]);
    }
    (dsu, (0..slot_count).collect())
}

/// Number of circles of a closed diagram in the resolution `state`, where
/// bit `0` joins each port to its counterclockwise neighbour pairwise
/// (`0-1`, `2-3`) and bit `1` joins the other pairs (`1-2`, `3-0`).
pub fn circle_count(d: &VTangleDiagram, state: &[u8]) -> usize {
    assert!(d.is_closed());
    let (mut dsu, slots) = trace(d, |i, p| if state[i] == 0 { p ^ 1 } else { 3 - p });
    dsu.classes(slots) + d.loops().len()
}

/// Link components, with the component index of the under and the over
/// strand at every crossing.
pub fn components(d: &VTangleDiagram) -> (usize, Vec<(usize, usize)>) {
    let (mut dsu, slots) = trace(d, |_, p| (p + 2) % 4);
    let roots: Vec<usize> = slots.iter().map(|&s| dsu.find(s)).collect::<BTreeSet<_>>().into_iter().collect();
    let index = |dsu: &mut Dsu, s: usize| roots.iter().position(|&r| r == dsu.find(s)).unwrap();
    let strands = (0..d.crossing_count()).map(|i| (index(&mut dsu, 4 * i), index(&mut dsu, 4 * i + 1))).collect();
    (roots.len() + d.loops().len(), strands)
}

pub type Poly = BTreeMap<i32, i64>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (i, x) in a {
        for (j, y) in b {
            *out.entry(i + j).or_insert(0) += x * y;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Kauffman state sum in the normalization of the Khovanov cube:
/// `Σ_s (-1)^(|s| - n₋) q^(|s| + n₊ - 2n₋) (q + q⁻¹)^(circles)`.
pub fn kauffman_state_sum(d: &VTangleDiagram) -> Poly {
    let n = d.crossing_count();
    let (np, nm) = (d.n_plus() as i32, d.n_minus() as i32);
    let mut total = Poly::new();
    for idx in 0..1usize << n {
        let state: Vec<u8> = (0..n).map(|i| (idx >> i & 1) as u8).collect();
        let h = state.iter().map(|&b| b as i32).sum::<i32>();
        let mut term = Poly::from([(h + np - 2 * nm, if (h - nm) % 2 == 0 { 1 } else { -1 })]);
        for _ in 0..circle_count(d, &state) {
            term = poly_mul(&term, &Poly::from([(-1, 1), (1, 1)]));
        }
        for (e, c) in term {
            *total.entry(e).or_insert(0) += c;
        }
    }
    total.retain(|_, c| *c != 0);
    total
}

/// States of the oriented smoothings, one per orientation of the link.
/// Flipping a component changes the sign of each crossing where it meets
/// a component that keeps its orientation.
pub fn oriented_states(d: &VTangleDiagram) -> Vec<Vec<u8>> {
    let (k, strands) = components(d);
    (0..1usize << k)
        .map(|mask| {
            d.crossings()
                .iter()
                .zip(&strands)
                .map(|(c, &(u, o))| {
                    let flip = (mask >> u & 1) ^ (mask >> o & 1) == 1;
                    let positive = (c.sign == CrossingSign::Positive) != flip;
                    if positive {
                        0
                    } else {
                        1
                    }
                })
                .collect()
        })
        .collect()
}

/// Whether some two-colouring satisfies every constraint `(a, b, differ)`.
pub fn brute_force_colourable(vertices: usize, edges: &[(usize, usize, bool)]) -> bool {
    (0..1usize << vertices).any(|c| edges.iter().all(|&(a, b, differ)| ((c >> a & 1) != (c >> b & 1)) == differ))
}

/// Rank over `Q` by fraction-free Gaussian elimination.
pub fn rational_rank(m: &SparseMatrix<Z>) -> usize {
    let mut a = m.to_dense();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                a[r][c] = (&a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c]) / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Betti numbers over `Q` of an integral complex.
pub fn rational_betti(cc: &ChainComplex<Z>) -> BTreeMap<i32, usize> {
    let ranks: Vec<usize> = cc.differentials.iter().map(rational_rank).collect();
    cc.degrees()
        .enumerate()
        .map(|(k, i)| {
            let out = ranks.get(k).copied().unwrap_or(0);
            let inc = k.checked_sub(1).map_or(0, |p| ranks[p]);
            (i, cc.ranks[k] - out - inc)
        })
        .collect()
}

/// Degree `j` of `b` is compared with degree `j + shift` of `a`. Returns the
/// first degree of `b` where the groups differ.
pub fn first_difference_shifted(a: &HomologySummary, b: &HomologySummary, shift: i32) -> Option<i32> {
    let degrees: BTreeSet<i32> = a.degrees.keys().map(|i| i - shift).chain(b.degrees.keys().copied()).collect();
    degrees.into_iter().find(|&j| a.degree(j + shift) != b.degree(j))
}

pub fn closed_complex(d: &VTangleDiagram) -> GeometricComplex {
    GeometricComplex::build(d, &CubeOptions::default()).expect("closed diagrams build")
}

/// Closure of the braid `word` on `strands` strands, oriented upwards.
/// Generator `(i, true)` is a positive crossing of positions `i` and `i+1`.
pub fn braid_closure(strands: usize, word: &[(usize, bool)]) -> VTangleDiagram {
    let mut cur: Vec<ArcId> = (1..=strands as ArcId).collect();
    let mut next = strands as ArcId + 1;
    let mut raw = Vec::new();
    for &(i, positive) in word {
        let (bl, br) = (cur[i], cur[i + 1]);
        let (tl, tr) = (next, next + 1);
        next += 2;
        // slots: under in, over in, under out, over out
        raw.push(if positive { ([br, bl, tl, tr], CrossingSign::Positive) } else { ([bl, br, tr, tl], CrossingSign::Negative) });
        cur[i] = tl;
        cur[i + 1] = tr;
    }
    let close: BTreeMap<ArcId, ArcId> = cur.iter().enumerate().map(|(p, &a)| (a, p as ArcId + 1)).collect();
    let f = |a: ArcId| close.get(&a).copied().unwrap_or(a);
    let crossings = raw.into_iter().map(|(s, sign)| Crossing::new(s.map(f), sign)).collect();
    let loops = (0..strands).filter(|&p| cur[p] == p as ArcId + 1).map(|p| p as ArcId + 1).collect();
    VTangleDiagram::new("braid closure", crossings, vec![], vec![], loops).expect("braid closures are valid")
}

pub fn random_braid_closure<R: Rng>(rng: &mut R, strands: usize, max_len: usize) -> VTangleDiagram {
    let len = rng.gen_range(0..=max_len);
    let word: Vec<(usize, bool)> = (0..len).map(|_| (rng.gen_range(0..strands - 1), rng.gen_bool(0.5))).collect();
    braid_closure(strands, &word)
}

/// Injective renaming of every arc by a random permutation of fresh ids.
pub fn renumbered<R: Rng>(d: &VTangleDiagram, rng: &mut R) -> VTangleDiagram {
    let arcs: Vec<ArcId> = d.arcs().into_iter().collect();
    let mut ids: Vec<ArcId> = (1..=arcs.len() as ArcId).map(|a| a + 100).collect();
    ids.shuffle(rng);
    let map: BTreeMap<ArcId, ArcId> = arcs.into_iter().zip(ids).collect();
    d.relabeled(|a| map[&a])
}

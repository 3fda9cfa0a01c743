//! The Frobenius algebra `A_t = R[X]/(X^2 = t)` applied to a geometric
//! complex. `t = 0` is Khovanov's algebra, `t = 1` Lee's deformation.
//!
//! ```text
//! m(1⊗1) = 1   m(1⊗X) = m(X⊗1) = X   m(X⊗X) = t·1
//! Δ(1) = 1⊗X + X⊗1                   Δ(X) = X⊗X + t·1⊗1
//! Φ(1) = 1     Φ(X) = -X             θ = 0
//! ```
//!
//! A resolution with `c` circles becomes `A^{⊗c}` with basis indexed by
//! `c`-bit words, bit `i` set meaning `X` on component `i`.

use thiserror::Error;

use crate::cube::{CubeError, DecoratedSaddle, GeometricComplex, SaddleKind};
use crate::diagram::State;
use crate::matrix::SparseMatrix;
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TqftError {
    #[error("t must be 0 or 1, got {0}")]
    BadDeformation(i64),
}

fn bit(x: usize, i: usize) -> bool {
    x >> i & 1 == 1
}

/// Image of the basis vector `x` under a decorated saddle, with integer
/// coefficients.
pub(crate) fn saddle_action(sd: &DecoratedSaddle, t: i64, x: usize) -> Vec<(usize, i64)> {
    if sd.indicator == 0 {
        return vec![];
    }
    let map = &sd.map;
    let mut c = sd.sign as i64;
    for &(circ, plus) in &map.upper {
        if !plus && bit(x, circ) {
            c = -c;
        }
    }
    let mut y = 0usize;
    for &(s, tg, same) in &map.cylinders {
        if bit(x, s) {
            y |= 1 << tg;
            if !same {
                c = -c;
            }
        }
    }
    let mut terms: Vec<(usize, i64)> = Vec::with_capacity(2);
    match sd.kind {
        SaddleKind::Merge => {
            let (a, b, m) = (map.upper[0].0, map.upper[1].0, map.lower[0].0);
            match (bit(x, a), bit(x, b)) {
                (false, false) => terms.push((y, c)),
                (true, false) | (false, true) => terms.push((y | 1 << m, c)),
                (true, true) => terms.push((y, c * t)),
            }
        }
        SaddleKind::Split => {
            let (s, a, b) = (map.upper[0].0, map.lower[0].0, map.lower[1].0);
            if bit(x, s) {
                terms.push((y | 1 << a | 1 << b, c));
                terms.push((y, c * t));
            } else {
                terms.push((y | 1 << a, c));
                terms.push((y | 1 << b, c));
            }
        }
        SaddleKind::Theta => unreachable!(),
    }
    terms.retain(|&(_, v)| v != 0);
    for term in &mut terms {
        for &(circ, plus) in &map.lower {
            if !plus && bit(term.0, circ) {
                term.1 = -term.1;
            }
        }
    }
    terms
}

/// Checks that every square face of the cube anticommutes after applying
/// `A_t`, exactly over ℤ. Returns the first failing face.
pub fn check_faces(gc: &GeometricComplex, t: i64) -> Result<usize, CubeError> {
    let n = gc.crossing_count();
    let mut faces = 0;
    for idx in 0..1usize << n {
        let a = State::from_index(idx, n);
        for i in 0..n {
            for j in i + 1..n {
                if a.get(i) == 1 || a.get(j) == 1 {
                    continue;
                }
                faces += 1;
                let ai = a.with(i, 1);
                let aj = a.with(j, 1);
                let paths = [
                    (gc.saddle(&a, i).unwrap(), gc.saddle(&ai, j).unwrap()),
                    (gc.saddle(&a, j).unwrap(), gc.saddle(&aj, i).unwrap()),
                ];
                let c = gc.resolution(&a).len();
                for x in 0..1usize << c {
                    let mut acc: std::collections::BTreeMap<usize, i64> = Default::default();
                    for (first, second) in &paths {
                        for (y, u) in saddle_action(first, t, x) {
                            for (z, v) in saddle_action(second, t, y) {
                                *acc.entry(z).or_default() += u * v;
                            }
                        }
                    }
                    if acc.values().any(|&v| v != 0) {
                        return Err(CubeError::Face { state: a, i, j });
                    }
                }
            }
        }
    }
    Ok(faces)
}

/// A cochain complex of free modules, `d^i : C^i -> C^{i+1}`.
#[derive(Clone, Debug)]
pub struct ChainComplex<R: Ring> {
    /// Degree of the first module.
    pub start: i32,
    pub ranks: Vec<usize>,
    /// `differentials[k]` maps degree `start + k` to `start + k + 1`.
    pub differentials: Vec<SparseMatrix<R>>,
    /// Quantum degree of every generator, per degree (only for `t = 0`).
    pub qdegrees: Option<Vec<Vec<i32>>>,
    pub t: i64,
}

impl<R: Ring> ChainComplex<R> {
    pub fn degrees(&self) -> std::ops::Range<i32> {
        self.start..self.start + self.ranks.len() as i32
    }

    pub fn rank(&self, i: i32) -> usize {
        let k = i - self.start;
        if k < 0 {
            return 0;
        }
        self.ranks.get(k as usize).copied().unwrap_or(0)
    }

    /// The differential leaving degree `i`.
    pub fn differential(&self, i: i32) -> Option<&SparseMatrix<R>> {
        let k = i - self.start;
        if k < 0 {
            return None;
        }
        self.differentials.get(k as usize)
    }

    /// Degrees where `d ∘ d` fails to vanish.
    pub fn d_squared_failures(&self) -> Vec<i32> {
        self.differentials
            .windows(2)
            .enumerate()
            .filter(|(_, w)| !w[1].mul(&w[0]).is_zero())
            .map(|(k, _)| self.start + k as i32)
            .collect()
    }
}

/// Basis offsets of the states in one degree.
pub(crate) fn degree_layout(gc: &GeometricComplex, i: i32) -> (Vec<State>, Vec<usize>, usize) {
    let states = gc.states_in_degree(i);
    let mut offsets = Vec::with_capacity(states.len());
    let mut total = 0;
    for s in &states {
        offsets.push(total);
        total += 1usize << gc.resolution(s).len();
    }
    (states, offsets, total)
}

/// Applies `A_t` to a geometric complex of a closed diagram.
pub fn apply_tqft<R: Ring>(gc: &GeometricComplex, t: i64) -> Result<ChainComplex<R>, TqftError> {
    if t != 0 && t != 1 {
        return Err(TqftError::BadDeformation(t));
    }
    let degrees: Vec<i32> = gc.degrees().collect();
    let layouts: Vec<_> = degrees.iter().map(|&i| degree_layout(gc, i)).collect();
    let ranks: Vec<usize> = layouts.iter().map(|l| l.2).collect();
    let mut differentials = Vec::with_capacity(degrees.len().saturating_sub(1));
    for k in 0..degrees.len().saturating_sub(1) {
        let (src_states, src_off, src_dim) = &layouts[k];
        let (tgt_states, tgt_off, tgt_dim) = &layouts[k + 1];
        let tgt_pos: std::collections::BTreeMap<&State, usize> =
            tgt_states.iter().enumerate().map(|(p, s)| (s, tgt_off[p])).collect();
        let mut entries = Vec::new();
        for (p, s) in src_states.iter().enumerate() {
            let c = gc.resolution(s).len();
            for r in 0..s.len() {
                if s.get(r) == 1 {
                    continue;
                }
                let sd = gc.saddle(s, r).unwrap();
                let base = tgt_pos[&sd.target];
                for x in 0..1usize << c {
                    for (y, v) in saddle_action(sd, t, x) {
                        entries.push((base + y, src_off[p] + x, R::from_i64(v)));
                    }
                }
            }
        }
        differentials.push(SparseMatrix::from_triplets(*tgt_dim, *src_dim, entries));
    }
    let qdegrees = (t == 0).then(|| {
        let shift = gc.n_plus() as i32 - 2 * gc.n_minus() as i32;
        layouts
            .iter()
            .map(|(states, _, _)| {
                let mut q = Vec::new();
                for s in states {
                    let c = gc.resolution(s).len();
                    for x in 0..1usize << c {
                        let xs = x.count_ones() as i32;
                        q.push((c as i32 - 2 * xs) + s.height() as i32 + shift);
                    }
                }
                q
            })
            .collect()
    });
    Ok(ChainComplex { start: degrees[0], ranks, differentials, qdegrees, t })
}

//! Normal forms of decorated cobordism pieces.
//!
//! A piece is a cylinder, a merge, a split or a Möbius saddle. Its boundary
//! circles are numbered top first, then bottom. A [`Decoration`] on a piece
//! records where `Φ` is applied, an indicator factor and a scalar; the
//! decorated piece stands for `scalar · Φ^(bottom flips) ∘ C ∘ Φ^(top flips)`
//! where `C` is the piece with its indicator multiplied by the factor.
//!
//! Two relations drive the normal form. Indicator changes and `Φ` commute
//! with a piece of indicator `0`, which carries no gluing numbers at all.
//! On a piece of indicator `±1`, flipping a set of positions equals `±1`
//! times flipping the complementary set.

use std::collections::BTreeSet;

use crate::cube::SaddleKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Piece {
    Cylinder,
    Merge,
    Split,
    Theta,
}

impl Piece {
    pub const ALL: [Piece; 4] = [Piece::Cylinder, Piece::Merge, Piece::Split, Piece::Theta];

    /// Number of top and bottom boundary circles.
    pub fn arity(self) -> (usize, usize) {
        match self {
            Piece::Cylinder | Piece::Theta => (1, 1),
            Piece::Merge => (2, 1),
            Piece::Split => (1, 2),
        }
    }

    pub fn positions(self) -> usize {
        let (a, b) = self.arity();
        a + b
    }

    /// Indicator of the undecorated piece.
    pub fn indicator(self) -> i8 {
        match self {
            Piece::Cylinder | Piece::Merge => 1,
            Piece::Split => -1,
            Piece::Theta => 0,
        }
    }
}

impl From<SaddleKind> for Piece {
    fn from(k: SaddleKind) -> Self {
        match k {
            SaddleKind::Merge => Piece::Merge,
            SaddleKind::Split => Piece::Split,
            SaddleKind::Theta => Piece::Theta,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decoration {
    /// Boundary positions carrying `Φ`.
    pub flips: BTreeSet<usize>,
    /// Multiplies the indicator of the piece: `0`, `1` or `-1`.
    pub indicator: i8,
    pub scalar: i8,
}

impl Default for Decoration {
    fn default() -> Self {
        Decoration::identity()
    }
}

impl Decoration {
    pub fn identity() -> Self {
        Decoration { flips: BTreeSet::new(), indicator: 1, scalar: 1 }
    }

    pub fn flip(pos: usize) -> Self {
        Decoration { flips: BTreeSet::from([pos]), ..Decoration::identity() }
    }

    pub fn indicator_change(factor: i8) -> Self {
        let mut d = Decoration { indicator: factor, ..Decoration::identity() };
        if factor == 0 {
            d.flips.clear();
        }
        d
    }

    pub fn negated(mut self) -> Self {
        self.scalar = -self.scalar;
        self
    }

    /// Indicator of `piece` carrying this decoration.
    pub fn effective_indicator(&self, piece: Piece) -> i8 {
        piece.indicator() * self.indicator
    }

    /// The same morphism with every position flipped the other way: the
    /// complementary flip set, scaled by the effective indicator. Pieces of
    /// indicator `0` are returned without flips.
    pub fn moved(&self, piece: Piece) -> Decoration {
        let e = self.effective_indicator(piece);
        if e == 0 {
            return Decoration { flips: BTreeSet::new(), ..self.clone() };
        }
        let flips = (0..piece.positions()).filter(|p| !self.flips.contains(p)).collect();
        Decoration { flips, indicator: self.indicator, scalar: self.scalar * e }
    }

    /// Canonical representative: no flips on indicator `0`, and otherwise
    /// the form that leaves the last position unflipped.
    pub fn normalized(&self, piece: Piece) -> Decoration {
        let last = piece.positions() - 1;
        if self.effective_indicator(piece) == 0 || self.flips.contains(&last) {
            self.moved(piece)
        } else {
            self.clone()
        }
    }
}

/// Stacks `outer` on top of `inner` on the same piece, in normal form. Both
/// are normalized first; then flips cancel in pairs, and indicators and
/// scalars multiply.
pub fn compose_decorations(outer: &Decoration, inner: &Decoration, piece: Piece) -> Decoration {
    let (outer, inner) = (outer.normalized(piece), inner.normalized(piece));
    let flips = outer.flips.symmetric_difference(&inner.flips).copied().collect();
    let d = Decoration { flips, indicator: outer.indicator * inner.indicator, scalar: outer.scalar * inner.scalar };
    d.normalized(piece)
}

/// Indicator of a glued piece: `0` after an odd number of mismatched gluing
/// numbers, the product of the parts otherwise.
pub fn glue_indicators(parts: &[i8], mismatch_count: usize) -> i8 {
    if mismatch_count % 2 == 1 {
        0
    } else {
        parts.iter().product()
    }
}

/// Dense integer matrix of a decorated piece under `A_t`, with rows indexed
/// by bottom basis words and columns by top ones (bit `i` set for `X` at
/// the `i`-th circle). Defined when the indicator factor is `0` or `1`.
pub fn piece_matrix(piece: Piece, dec: &Decoration, t: i64) -> Option<Vec<Vec<i64>>> {
    if dec.indicator == -1 {
        return None;
    }
    let (a, b) = piece.arity();
    let mut m = vec![vec![0i64; 1 << a]; 1 << b];
    if dec.indicator == 0 || piece == Piece::Theta {
        return Some(m);
    }
    let phi = |word: usize, offset: usize, len: usize| -> i64 {
        let flipped_x = (0..len).filter(|&i| word >> i & 1 == 1 && dec.flips.contains(&(offset + i))).count();
        if flipped_x % 2 == 0 {
            1
        } else {
            -1
        }
    };
    for x in 0..1usize << a {
        let image: Vec<(usize, i64)> = match piece {
            Piece::Cylinder => vec![(x, 1)],
            Piece::Merge => match (x & 1, x >> 1) {
                (1, 1) => vec![(0, t)],
                (0, 0) => vec![(0, 1)],
                _ => vec![(1, 1)],
            },
            Piece::Split => {
                if x == 0 {
                    vec![(0b10, 1), (0b01, 1)]
                } else {
                    vec![(0b11, 1), (0, t)]
                }
            }
            Piece::Theta => unreachable!(),
        };
        let sx = phi(x, 0, a);
        for (y, c) in image {
            m[y][x] += dec.scalar as i64 * sx * phi(y, a, b) * c;
        }
    }
    Some(m)
}

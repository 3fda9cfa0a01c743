//! Comparing the two closures of a tangle, niceness certificates, and
//! isomorphisms between cubes found along a spanning tree.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::cobordism::{Decoration, Piece};
use crate::cube::{CubeError, CubeOptions, DecoratedSaddle, GeometricComplex};
use crate::diagram::{ClosureKind, DiagramError, Niceness, State, VTangleDiagram};
use crate::tqft::saddle_action;

/// Indicators of one saddle in the star and the alternate closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndicatorPair {
    pub source: State,
    pub crossing: usize,
    pub star: i8,
    pub alternate: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ClosureVerdict {
    Ok,
    /// The first saddle that is zero in exactly one closure.
    Mismatch { source: State, crossing: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub pairs: Vec<IndicatorPair>,
    pub verdict: ClosureVerdict,
}

/// Builds the complexes of both closures of a tangle and compares which
/// saddles have indicator `0`.
pub fn compare_closures(d: &VTangleDiagram) -> Result<ClosureReport, CubeError> {
    if d.is_closed() {
        return Err(CubeError::Invalid("closures can only be compared for tangles with k > 0".into()));
    }
    let opts = CubeOptions::default();
    let star = GeometricComplex::build_tangle(d, ClosureKind::Star, &opts)?;
    let alt = GeometricComplex::build_tangle(d, ClosureKind::Alternate, &opts)?;
    let mut pairs = Vec::new();
    let mut verdict = ClosureVerdict::Ok;
    for (a, b) in star.saddles().iter().zip(alt.saddles()) {
        if verdict == ClosureVerdict::Ok && (a.indicator == 0) != (b.indicator == 0) {
            verdict = ClosureVerdict::Mismatch { source: a.source.clone(), crossing: a.crossing };
        }
        pairs.push(IndicatorPair {
            source: a.source.clone(),
            crossing: a.crossing,
            star: a.indicator,
            alternate: b.indicator,
        });
    }
    Ok(ClosureReport { pairs, verdict })
}

/// Three-valued niceness test. `Nice` when the virtual crossings are
/// negligible for an evident reason, `NotNice` when the closures disagree on
/// a zero indicator, `Unknown` otherwise.
pub fn is_nice(d: &VTangleDiagram) -> Result<Niceness, DiagramError> {
    if d.has_negligible_virtuals() {
        return Ok(Niceness::Nice);
    }
    match compare_closures(d) {
        Ok(r) if r.verdict != ClosureVerdict::Ok => Ok(Niceness::NotNice),
        Ok(_) => Ok(Niceness::Unknown),
        Err(CubeError::Diagram(e)) => Err(e),
        Err(e) => Err(DiagramError::Invalid(e.to_string())),
    }
}

/// Per-state data of a chain isomorphism between two cubes: a sign for
/// every state, and for every nonzero saddle the decoration converting the
/// saddle of the second cube into the one of the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeIsomorphism {
    pub signs: Vec<i8>,
    pub conversions: BTreeMap<(State, usize), Decoration>,
}

impl CubeIsomorphism {
    pub fn is_identity(&self) -> bool {
        self.signs.iter().all(|&s| s == 1) && self.conversions.values().all(|d| *d == Decoration::identity())
    }
}

/// Decoration of a saddle: `Φ` on every boundary circle with gluing number
/// `-`, carried by the piece of its kind.
fn saddle_decoration(sd: &DecoratedSaddle) -> Decoration {
    let mut d = Decoration::identity();
    if let Some(g) = &sd.gluing {
        for (pos, &plus) in g.upper.iter().chain(&g.lower).enumerate() {
            if !plus {
                d.flips.insert(pos);
            }
        }
    }
    d.scalar = sd.sign;
    d.normalized(Piece::from(sd.kind))
}

/// Looks for per-state signs that, together with the decoration changes
/// allowed on each saddle, turn `c2` into `c1`.
///
/// The cube is walked breadth first from the all-zero state; every state
/// gets its sign from the tree edge it is first reached by, and all other
/// edges are checked afterwards. Returns `None` when the two cubes disagree
/// on a zero indicator or when no signs fit.
pub fn spanning_tree_isomorphism(c1: &GeometricComplex, c2: &GeometricComplex) -> Result<Option<CubeIsomorphism>, CubeError> {
    let n = c1.crossing_count();
    if n != c2.crossing_count() || c1.saddles().len() != c2.saddles().len() {
        return Err(CubeError::Invalid("cubes of different shape".into()));
    }
    let mut conversions = BTreeMap::new();
    // edge ratio: sign with which the converted saddle of c2 equals the one of c1
    let mut ratio = BTreeMap::new();
    for (a, b) in c1.saddles().iter().zip(c2.saddles()) {
        if a.source != b.source || a.crossing != b.crossing {
            return Err(CubeError::Invalid("cubes of different shape".into()));
        }
        if (a.indicator == 0) != (b.indicator == 0) {
            return Ok(None);
        }
        if a.indicator == 0 {
            continue;
        }
        let (da, db) = (saddle_decoration(a), saddle_decoration(b));
        let r = da.scalar * db.scalar;
        let mut conv = Decoration { flips: da.flips.symmetric_difference(&db.flips).copied().collect(), ..Decoration::identity() };
        if a.kind != b.kind {
            conv.indicator = -1;
        }
        ratio.insert((a.source.index(), a.crossing), r);
        conversions.insert((a.source.clone(), a.crossing), conv);
    }
    let mut signs = vec![0i8; 1 << n];
    signs[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let st = State::from_index(s, n);
        for r in 0..n {
            let (src, tgt) = if st.get(r) == 0 { (s, st.with(r, 1).index()) } else { (st.with(r, 0).index(), s) };
            let next = if src == s { tgt } else { src };
            if signs[next] != 0 {
                continue;
            }
            // zero edges give no constraint; an isolated state keeps sign 1
            let e = ratio.get(&(src, r)).copied().unwrap_or(1);
            signs[next] = signs[s] * e;
            queue.push_back(next);
        }
    }
    for (&(src, r), &e) in &ratio {
        let tgt = State::from_index(src, n).with(r, 1).index();
        if signs[tgt] != signs[src] * e {
            return Ok(None);
        }
    }
    Ok(Some(CubeIsomorphism { signs, conversions }))
}

/// Looks for a chain isomorphism between two cubes of the same diagram
/// that differ only in orientations, numberings, signs and zero saddles.
///
/// At every state the candidate map is a sign times `Φ` on the circles
/// whose orientations differ. Each nonzero edge must intertwine these maps
/// up to one sign, on every basis vector and for both `t = 0` and `t = 1`;
/// the state signs then come from a spanning tree and are checked on all
/// edges. Returns the state signs.
pub fn exact_chain_isomorphism(c1: &GeometricComplex, c2: &GeometricComplex) -> Result<Option<Vec<i8>>, CubeError> {
    let n = c1.crossing_count();
    if n != c2.crossing_count() {
        return Err(CubeError::Invalid("cubes of different shape".into()));
    }
    let mut masks = Vec::with_capacity(1 << n);
    for (r1, r2) in c1.resolutions().iter().zip(c2.resolutions()) {
        let same = r1.len() == r2.len()
            && r1.components().iter().zip(r2.components()).all(|(a, b)| {
                let mut x: Vec<_> = a.arcs.iter().map(|e| e.0).collect();
                let mut y: Vec<_> = b.arcs.iter().map(|e| e.0).collect();
                x.sort_unstable();
                y.sort_unstable();
                x == y
            });
        if !same {
            return Err(CubeError::Invalid("cubes of different diagrams".into()));
        }
        let mask: usize = (0..r1.len()).filter(|&c| r1.is_reversed(c) != r2.is_reversed(c)).map(|c| 1 << c).sum();
        masks.push(mask);
    }
    let phi = |s: usize, x: usize| if (x & masks[s]).count_ones().is_multiple_of(2) { 1i64 } else { -1 };
    let mut ratio = BTreeMap::new();
    for (a, b) in c1.saddles().iter().zip(c2.saddles()) {
        let (src, tgt) = (a.source.index(), a.target.index());
        let mut rho: Option<i64> = None;
        for t in [0, 1] {
            for x in 0..1usize << c1.resolution(&a.source).len() {
                let image2: BTreeMap<usize, i64> = saddle_action(b, t, x).into_iter().map(|(y, v)| (y, v * phi(src, x))).collect();
                let image1: BTreeMap<usize, i64> = saddle_action(a, t, x).into_iter().map(|(y, v)| (y, v * phi(tgt, y))).collect();
                if image1.keys().ne(image2.keys()) {
                    return Ok(None);
                }
                for (y, v1) in &image1 {
                    let r = image2[y] / v1;
                    if image2[y] != r * v1 || r.abs() != 1 || rho.is_some_and(|p| p != r) {
                        return Ok(None);
                    }
                    rho = Some(r);
                }
            }
        }
        if let Some(r) = rho {
            ratio.insert((src, a.crossing), r as i8);
        }
    }
    let mut signs = vec![0i8; 1 << n];
    signs[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let st = State::from_index(s, n);
        for r in 0..n {
            let (src, tgt) = if st.get(r) == 0 { (s, st.with(r, 1).index()) } else { (st.with(r, 0).index(), s) };
            let next = if src == s { tgt } else { src };
            if signs[next] != 0 {
                continue;
            }
            signs[next] = signs[s] * ratio.get(&(src, r)).copied().unwrap_or(1);
            queue.push_back(next);
        }
    }
    for (&(src, r), &e) in &ratio {
        let tgt = State::from_index(src, n).with(r, 1).index();
        if signs[tgt] != signs[src] * e {
            return Ok(None);
        }
    }
    Ok(Some(signs))
}

//! Virtual tangle diagrams: arcs joined at classical crossings, virtual
//! crossings and boundary points on a disk carrying a `*`-marker.
//!
//! A classical crossing is stored by its four arc slots
//! `(under_in, over_in, under_out, over_out)` plus an explicit sign. The sign
//! fixes the planar cyclic order of the slots:
//!
//! ```text
//! positive: ccw = (under_in, over_out, under_out, over_in)
//! negative: ccw = (under_in, over_in,  under_out, over_out)
//! ```
//!
//! With `p0..p3` the ports in counterclockwise order starting at `under_in`,
//! the 0-smoothing joins `p0-p1` and `p2-p3`, the 1-smoothing joins `p1-p2`
//! and `p3-p0`. Neither depends on the orientation of the strands.

mod parse;
mod parts;
mod resolve;
mod wiring;

pub use parse::parse_diagram;
pub use parts::{ConnectedPart, Niceness};
pub use resolve::{Component, LocalArc, NonAlternating, Resolution, State};

pub(crate) use parse::{parse_arcs, parse_kv, syntax, tokens};
pub(crate) use resolve::{partner_port, Partner};
pub(crate) use wiring::{End, Node, Wiring};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type ArcId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("arc {arc} is used {count} times (expected exactly twice)")]
    ArcUsage { arc: ArcId, count: usize },
    #[error("arc {arc} has inconsistent orientation: {msg}")]
    Orientation { arc: ArcId, msg: String },
    #[error("header declares k={declared} but {found} boundary points are listed")]
    BoundaryCount { declared: usize, found: usize },
    #[error("closure needs an even number of boundary points, found {0}")]
    OddBoundary(usize),
    #[error("operation requires a closed diagram (k=0), found k={0}")]
    NotClosed(usize),
    #[error("state has length {found}, diagram has {expected} crossings")]
    StateLength { expected: usize, found: usize },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CrossingSign {
    Positive,
    Negative,
}

impl CrossingSign {
    pub fn value(self) -> i32 {
        match self {
            CrossingSign::Positive => 1,
            CrossingSign::Negative => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            CrossingSign::Positive => CrossingSign::Negative,
            CrossingSign::Negative => CrossingSign::Positive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub under_in: ArcId,
    pub over_in: ArcId,
    pub under_out: ArcId,
    pub over_out: ArcId,
    pub sign: CrossingSign,
}

impl Crossing {
    pub fn new(slots: [ArcId; 4], sign: CrossingSign) -> Self {
        let [under_in, over_in, under_out, over_out] = slots;
        Crossing { under_in, over_in, under_out, over_out, sign }
    }

    /// Ports in counterclockwise order, starting at the incoming under-strand.
    pub fn ports(&self) -> [ArcId; 4] {
        match self.sign {
            CrossingSign::Positive => [self.under_in, self.over_out, self.under_out, self.over_in],
            CrossingSign::Negative => [self.under_in, self.over_in, self.under_out, self.over_out],
        }
    }

    /// Whether the arc at `port` ends (has its head) at this crossing.
    pub fn port_is_incoming(&self, port: usize) -> bool {
        match self.sign {
            CrossingSign::Positive => [true, false, false, true][port],
            CrossingSign::Negative => [true, true, false, false][port],
        }
    }

    /// Rebuilds slot form from counterclockwise ports and incoming flags.
    /// Ports 0 and 2 must carry the under-strand.
    pub(crate) fn from_ports(ports: [ArcId; 4], incoming: [bool; 4]) -> Self {
        let (p, inc) = if incoming[0] {
            (ports, incoming)
        } else {
            ([ports[2], ports[3], ports[0], ports[1]], [incoming[2], incoming[3], incoming[0], incoming[1]])
        };
        if inc[1] {
            Crossing::new([p[0], p[1], p[2], p[3]], CrossingSign::Negative)
        } else {
            Crossing::new([p[0], p[3], p[2], p[1]], CrossingSign::Positive)
        }
    }
}

/// A virtual crossing `V a b c d`: strands `a -> c` and `b -> d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VirtualCrossing {
    pub ports: [ArcId; 4],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClosureKind {
    /// Caps join boundary points `(0,1), (2,3), ...` counted from the marker.
    Star,
    /// Caps join boundary points `(1,2), (3,4), ..., (k-1,0)`.
    Alternate,
}

impl ClosureKind {
    /// Pairs of boundary indices joined by the caps of this closure.
    pub fn caps(self, k: usize) -> Vec<(usize, usize)> {
        if k == 0 {
            return vec![];
        }
        match self {
            ClosureKind::Star => (0..k / 2).map(|i| (2 * i, 2 * i + 1)).collect(),
            ClosureKind::Alternate => (0..k / 2).map(|i| (2 * i + 1, (2 * i + 2) % k)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VTangleDiagram {
    name: String,
    crossings: Vec<Crossing>,
    virtuals: Vec<VirtualCrossing>,
    boundary: Vec<ArcId>,
    loops: Vec<ArcId>,
    // tail and head end of every non-loop arc
    ends: BTreeMap<ArcId, (End, End)>,
}

impl VTangleDiagram {
    pub fn new(
        name: impl Into<String>,
        crossings: Vec<Crossing>,
        virtuals: Vec<VirtualCrossing>,
        boundary: Vec<ArcId>,
        loops: Vec<ArcId>,
    ) -> Result<Self, DiagramError> {
        let mut occ: BTreeMap<ArcId, Vec<(End, Option<bool>)>> = BTreeMap::new();
        for (i, c) in crossings.iter().enumerate() {
            for (pos, a) in c.ports().into_iter().enumerate() {
                let end = End { node: Node::Classical(i), port: pos as u8 };
                occ.entry(a).or_default().push((end, Some(c.port_is_incoming(pos))));
            }
        }
        for (i, v) in virtuals.iter().enumerate() {
            for (pos, a) in v.ports.into_iter().enumerate() {
                let end = End { node: Node::Virtual(i), port: pos as u8 };
                occ.entry(a).or_default().push((end, Some(pos < 2)));
            }
        }
        for (i, &a) in boundary.iter().enumerate() {
            occ.entry(a).or_default().push((End { node: Node::Boundary(i), port: 0 }, None));
        }
        let mut seen_loops = BTreeSet::new();
        for &l in &loops {
            if occ.contains_key(&l) || !seen_loops.insert(l) {
                let count = occ.get(&l).map_or(0, |v| v.len()) + 2;
                return Err(DiagramError::ArcUsage { arc: l, count });
            }
        }

        let mut ends = BTreeMap::new();
        for (arc, list) in occ {
            if list.len() != 2 {
                return Err(DiagramError::ArcUsage { arc, count: list.len() });
            }
            let (e0, r0) = list[0];
            let (e1, r1) = list[1];
            let (tail, head) = match (r0, r1) {
                (Some(true), Some(true)) => {
                    return Err(DiagramError::Orientation { arc, msg: "enters two crossings".into() })
                }
                (Some(false), Some(false)) => {
                    return Err(DiagramError::Orientation { arc, msg: "leaves two crossings".into() })
                }
                (Some(true), _) | (None, Some(false)) => (e1, e0),
                (Some(false), _) | (None, Some(true)) => (e0, e1),
                (None, None) => (e0, e1),
            };
            ends.insert(arc, (tail, head));
        }

        Ok(VTangleDiagram { name: name.into(), crossings, virtuals, boundary, loops, ends })
    }

    pub fn empty() -> Self {
        VTangleDiagram::new("empty", vec![], vec![], vec![], vec![]).unwrap()
    }

    pub fn unknot() -> Self {
        VTangleDiagram::new("unknot", vec![], vec![], vec![], vec![1]).unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn virtuals(&self) -> &[VirtualCrossing] {
        &self.virtuals
    }

    pub fn boundary(&self) -> &[ArcId] {
        &self.boundary
    }

    pub fn loops(&self) -> &[ArcId] {
        &self.loops
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_closed(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn is_classical(&self) -> bool {
        self.virtuals.is_empty()
    }

    pub fn arcs(&self) -> BTreeSet<ArcId> {
        self.ends.keys().copied().chain(self.loops.iter().copied()).collect()
    }

    pub fn max_arc(&self) -> ArcId {
        self.arcs().into_iter().next_back().unwrap_or(0)
    }

    pub fn n_plus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign == CrossingSign::Positive).count()
    }

    pub fn n_minus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign == CrossingSign::Negative).count()
    }

    pub fn writhe(&self) -> i32 {
        self.crossings.iter().map(|c| c.sign.value()).sum()
    }

    pub(crate) fn arc_ends(&self, arc: ArcId) -> Option<(End, End)> {
        self.ends.get(&arc).copied()
    }

    pub(crate) fn arc_at(&self, end: End) -> ArcId {
        match end.node {
            Node::Classical(i) => self.crossings[i].ports()[end.port as usize],
            Node::Virtual(i) => self.virtuals[i].ports[end.port as usize],
            Node::Boundary(i) => self.boundary[i],
        }
    }

    pub(crate) fn to_wiring(&self) -> Wiring {
        Wiring {
            classical: self.crossings.iter().map(|c| c.ports()).collect(),
            virtuals: self.virtuals.iter().map(|v| v.ports).collect(),
            boundary: self.boundary.clone(),
            loops: self.loops.clone(),
            tails: self.ends.iter().map(|(&a, &(t, _))| (a, t)).collect(),
        }
    }

    /// Link components (strands for tangles), each as its arc sequence.
    pub fn strands(&self) -> Vec<Vec<(ArcId, bool)>> {
        resolve::walk_all(self, |_| resolve::Partner::Straight)
            .into_iter()
            .map(|w| w.arcs)
            .collect()
    }

    pub fn component_count(&self) -> usize {
        self.strands().len()
    }

    /// Caps neighbouring boundary points without new virtual crossings. The
    /// closed strands are reoriented where caps would meet head-to-head; the
    /// surviving arc of every capped chain is its least arc id.
    pub fn closure(&self, which: ClosureKind) -> Result<VTangleDiagram, DiagramError> {
        let k = self.boundary.len();
        if k % 2 == 1 {
            return Err(DiagramError::OddBoundary(k));
        }
        if k == 0 {
            return Ok(self.clone());
        }
        let caps = which.caps(k);
        let mut w = self.to_wiring();
        w.cap(&caps)?;
        w.into_diagram(self.name.clone())
    }

    pub fn closure_arc_map(&self, which: ClosureKind) -> Result<BTreeMap<ArcId, ArcId>, DiagramError> {
        let k = self.boundary.len();
        if k % 2 == 1 {
            return Err(DiagramError::OddBoundary(k));
        }
        let caps = which.caps(k);
        Ok(self.to_wiring().cap_map(&caps))
    }

    /// Reverses the orientation of the selected link components, recomputing
    /// crossing signs. `flips[i]` refers to `self.strands()[i]`.
    pub fn reoriented(&self, flips: &[bool]) -> VTangleDiagram {
        let strands = self.strands();
        let mut w = self.to_wiring();
        for (s, &f) in strands.iter().zip(flips) {
            if f {
                for &(a, _) in s {
                    w.reverse_arc(a);
                }
            }
        }
        w.into_diagram(self.name.clone()).expect("reversing whole strands keeps the diagram valid")
    }

    /// All `2^n` orientations of a closed diagram with `n` components, as
    /// flip masks over `strands()`.
    pub fn orientations(&self) -> Result<Vec<Vec<bool>>, DiagramError> {
        if !self.is_closed() {
            return Err(DiagramError::NotClosed(self.boundary.len()));
        }
        let n = self.component_count();
        Ok((0..1usize << n).map(|m| (0..n).map(|i| m >> i & 1 == 1).collect()).collect())
    }

    /// Renames every arc through `f`, which must be injective.
    pub fn relabeled(&self, f: impl Fn(ArcId) -> ArcId) -> VTangleDiagram {
        let crossings = self
            .crossings
            .iter()
            .map(|c| Crossing::new([f(c.under_in), f(c.over_in), f(c.under_out), f(c.over_out)], c.sign))
            .collect();
        let virtuals = self.virtuals.iter().map(|v| VirtualCrossing { ports: v.ports.map(&f) }).collect();
        let boundary = self.boundary.iter().map(|&a| f(a)).collect();
        let loops = self.loops.iter().map(|&a| f(a)).collect();
        VTangleDiagram::new(self.name.clone(), crossings, virtuals, boundary, loops)
            .expect("injective relabeling keeps the diagram valid")
    }
}

impl fmt::Display for VTangleDiagram {
    /// Writes the diagram in `.vtd` form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.name)?;
        writeln!(f, "tangle k={}", self.boundary.len())?;
        for c in &self.crossings {
            let s = if c.sign == CrossingSign::Positive { '+' } else { '-' };
            writeln!(f, "C{} {} {} {} {}", s, c.under_in, c.over_in, c.under_out, c.over_out)?;
        }
        for v in &self.virtuals {
            writeln!(f, "V {} {} {} {}", v.ports[0], v.ports[1], v.ports[2], v.ports[3])?;
        }
        for b in &self.boundary {
            writeln!(f, "B {}", b)?;
        }
        for l in &self.loops {
            writeln!(f, "O {}", l)?;
        }
        Ok(())
    }
}

/// Diagrams used throughout tests, examples and the CLI.
pub mod library {
    use super::*;

    fn c(slots: [ArcId; 4], positive: bool) -> Crossing {
        Crossing::new(slots, if positive { CrossingSign::Positive } else { CrossingSign::Negative })
    }

    /// Virtual trefoil: two positive classical crossings and one virtual one.
    /// Gauss code `O1+ O2+ U1+ U2+`.
    pub fn virtual_trefoil() -> VTangleDiagram {
        // 1 -> X1(over) -> 2 -> V -> 5 -> X2(over) -> 3 -> X1(under) -> 4 -> V -> 6 -> X2(under) -> 1
        VTangleDiagram::new(
            "virtual trefoil",
            vec![c([3, 1, 4, 2], true), c([6, 5, 1, 3], true)],
            vec![VirtualCrossing { ports: [2, 4, 5, 6] }],
            vec![],
            vec![],
        )
        .unwrap()
    }

    /// Mirror image of the virtual trefoil with a positive kink added in
    /// front: crossing signs `+, -, -`. The only non-alternating state is
    /// `011`.
    pub fn kinked_virtual_trefoil() -> VTangleDiagram {
        VTangleDiagram::new(
            "kinked virtual trefoil",
            vec![c([1, 7, 7, 8], true), c([8, 3, 2, 4], false), c([5, 6, 3, 1], false)],
            vec![VirtualCrossing { ports: [2, 4, 5, 6] }],
            vec![],
            vec![],
        )
        .unwrap()
    }

    /// Right-handed trefoil (the mirror of `PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]`).
    pub fn trefoil() -> VTangleDiagram {
        VTangleDiagram::new(
            "trefoil",
            vec![c([1, 4, 2, 5], true), c([3, 6, 4, 1], true), c([5, 2, 6, 3], true)],
            vec![],
            vec![],
            vec![],
        )
        .unwrap()
    }

    /// Hopf link with two positive crossings.
    pub fn hopf_link() -> VTangleDiagram {
        VTangleDiagram::new("hopf link", vec![c([1, 3, 2, 4], true), c([4, 2, 3, 1], true)], vec![], vec![], vec![])
            .unwrap()
    }

    /// Unknot drawn with a single positive kink.
    pub fn kinked_unknot() -> VTangleDiagram {
        VTangleDiagram::new("kinked unknot", vec![c([2, 1, 1, 2], true)], vec![], vec![], vec![]).unwrap()
    }

    pub fn unlink(n: usize) -> VTangleDiagram {
        VTangleDiagram::new(format!("{n}-component unlink"), vec![], vec![], vec![], (1..=n as ArcId).collect())
            .unwrap()
    }

    /// A single classical crossing with four boundary points, read
    /// counterclockwise from the marker: `in, out, out, in` for `under, over`.
    pub fn single_crossing(positive: bool) -> VTangleDiagram {
        let cr = c([1, 2, 3, 4], positive);
        // boundary order follows the counterclockwise ports
        let boundary = cr.ports().to_vec();
        VTangleDiagram::new(if positive { "crossing+" } else { "crossing-" }, vec![cr], vec![], boundary, vec![])
            .unwrap()
    }

    /// The identity strand with two boundary points.
    pub fn identity_strand() -> VTangleDiagram {
        VTangleDiagram::new("identity strand", vec![], vec![], vec![1, 1], vec![]).unwrap()
    }

    /// Single crossing whose first two legs cross virtually before reaching
    /// the boundary. Its two closures give a merge and a Möbius saddle.
    pub fn non_nice_crossing() -> VTangleDiagram {
        // crossing ports (ccw) 1 5 3 6 ; legs 1 and 5 are swapped by a virtual crossing
        let cr = c([1, 6, 3, 5], true);
        debug_assert_eq!(cr.ports(), [1, 5, 3, 6]);
        // boundary arcs 7 (to leg 1) and 8 (from leg 5) cross virtually
        VTangleDiagram::new(
            "non-nice crossing",
            vec![cr],
            vec![VirtualCrossing { ports: [7, 5, 1, 8] }],
            vec![8, 7, 3, 6],
            vec![],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::library::*;
    use super::*;

    #[test]
    fn ports_follow_sign() {
        let p = Crossing::new([1, 2, 3, 4], CrossingSign::Positive);
        assert_eq!(p.ports(), [1, 4, 3, 2]);
        let n = Crossing::new([1, 2, 3, 4], CrossingSign::Negative);
        assert_eq!(n.ports(), [1, 2, 3, 4]);
        for c in [p, n] {
            let inc: [bool; 4] = std::array::from_fn(|i| c.port_is_incoming(i));
            assert_eq!(Crossing::from_ports(c.ports(), inc), c);
            // starting from the other under end describes the same crossing
            let rot = [c.ports()[2], c.ports()[3], c.ports()[0], c.ports()[1]];
            let inc_rot = [inc[2], inc[3], inc[0], inc[1]];
            assert_eq!(Crossing::from_ports(rot, inc_rot), c);
        }
    }

    #[test]
    fn component_counts() {
        assert_eq!(VTangleDiagram::empty().component_count(), 0);
        assert_eq!(VTangleDiagram::unknot().component_count(), 1);
        assert_eq!(trefoil().component_count(), 1);
        assert_eq!(hopf_link().component_count(), 2);
        assert_eq!(virtual_trefoil().component_count(), 1);
        assert_eq!(unlink(3).component_count(), 3);
        assert_eq!(single_crossing(true).component_count(), 2);
    }

    #[test]
    fn arc_used_three_times() {
        let err = VTangleDiagram::new(
            "bad",
            vec![Crossing::new([1, 1, 1, 2], CrossingSign::Positive)],
            vec![],
            vec![],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, DiagramError::ArcUsage { arc: 1, count: 3 }));
    }

    #[test]
    fn orientation_inconsistency() {
        let err = VTangleDiagram::new(
            "bad",
            vec![Crossing::new([1, 2, 3, 4], CrossingSign::Positive), Crossing::new([1, 2, 3, 4], CrossingSign::Positive)],
            vec![],
            vec![],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, DiagramError::Orientation { .. }));
    }

    #[test]
    fn closure_of_closed_is_identity() {
        let d = trefoil();
        assert_eq!(d.closure(ClosureKind::Star).unwrap(), d);
        assert_eq!(d.closure(ClosureKind::Alternate).unwrap(), d);
    }

    #[test]
    fn closure_of_identity_strand() {
        for which in [ClosureKind::Star, ClosureKind::Alternate] {
            let cl = identity_strand().closure(which).unwrap();
            assert!(cl.is_closed());
            assert_eq!(cl.crossing_count(), 0);
            assert_eq!(cl.component_count(), 1);
        }
    }

    #[test]
    fn closure_odd_boundary() {
        // a single string is the only way to list an arc twice on the boundary;
        // an odd count cannot be valid, so build one by hand
        let d = VTangleDiagram::new("x", vec![], vec![], vec![1, 1, 2, 2], vec![]).unwrap();
        assert!(d.closure(ClosureKind::Star).is_ok());
        let mut w = d.to_wiring();
        w.boundary.pop();
        assert_eq!(w.boundary.len() % 2, 1);
    }

    #[test]
    fn two_closures_of_cup_cap() {
        // strands b0-b1 and b2-b3
        let d = VTangleDiagram::new("cups", vec![], vec![], vec![1, 1, 2, 2], vec![]).unwrap();
        assert_eq!(d.closure(ClosureKind::Star).unwrap().component_count(), 2);
        assert_eq!(d.closure(ClosureKind::Alternate).unwrap().component_count(), 1);
    }

    #[test]
    fn closure_reorients_consistently() {
        // both boundary points of the crossing's over strand sit next to each other
        for pos in [true, false] {
            let d = single_crossing(pos);
            for which in [ClosureKind::Star, ClosureKind::Alternate] {
                let cl = d.closure(which).unwrap();
                assert_eq!(cl.crossing_count(), 1);
                assert!(cl.is_closed());
            }
        }
    }

    #[test]
    fn reorienting_flips_signs_of_mixed_crossings() {
        let h = hopf_link();
        let r = h.reoriented(&[true, false]);
        assert_eq!(r.n_minus(), 2);
        let rr = h.reoriented(&[true, true]);
        assert_eq!(rr.n_plus(), 2);
        assert_eq!(h.orientations().unwrap().len(), 4);
    }

    #[test]
    fn display_roundtrip() {
        for d in [trefoil(), virtual_trefoil(), single_crossing(false), non_nice_crossing(), unlink(2)] {
            let text = d.to_string();
            let back = parse_diagram(&text).unwrap();
            assert_eq!(back.crossings(), d.crossings());
            assert_eq!(back.virtuals(), d.virtuals());
            assert_eq!(back.boundary(), d.boundary());
            assert_eq!(back.loops(), d.loops());
        }
    }
}

//! Circuit diagrams and the operation that places tangles into their holes.
//!
//! A circuit diagram is a disk with `m` holes whose wires cross each other
//! only virtually. Hole `j` lists its wire ends counterclockwise from its
//! marker, and its `i`-th end is joined to the `i`-th boundary point of the
//! tangle placed into the hole.
//!
//! Gluing orients every composite strand or circle by the "lower first"
//! rule: it takes the orientation of its least string, where strings are
//! ordered by input and then by their number inside that input. Strings
//! that end up reversed carry a red dot and all others a green dot.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::closures::{exact_chain_isomorphism, is_nice};
use crate::cobordism::glue_indicators;
use crate::cube::{CubeError, CubeOptions, GeometricComplex};
use crate::diagram::library::single_crossing;
use crate::diagram::{
    parse_arcs, parse_kv, partner_port, syntax, tokens, ArcId, ClosureKind, DiagramError, End, Niceness, Node,
    Partner, State, VTangleDiagram, VirtualCrossing, Wiring,
};
use crate::homology::{homology_over, HomologyError, HomologySummary};
use crate::ring::RingTag;
use crate::tqft::TqftError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("line {line}: circuit diagrams cannot contain classical crossings")]
    ClassicalCrossing { line: usize },
    #[error("hole {hole} has {expected} wire ends but its input has {found} boundary points")]
    Arity { hole: usize, expected: usize, found: usize },
    #[error("circuit has {expected} holes but {found} inputs were given")]
    InputCount { expected: usize, found: usize },
    #[error("input {0} is not certified nice")]
    NotNice(usize),
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error(transparent)]
    Tqft(#[from] TqftError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

impl CircuitError {
    /// Whether the error is a mismatch between holes and inputs.
    pub fn is_arity(&self) -> bool {
        matches!(self, CircuitError::Arity { .. } | CircuitError::InputCount { .. })
    }

    /// Whether the error comes from reading a file.
    pub fn is_parse(&self) -> bool {
        matches!(self, CircuitError::Diagram(_) | CircuitError::ClassicalCrossing { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitDiagram {
    /// Wire ends of each hole, counterclockwise from its marker.
    pub holes: Vec<Vec<ArcId>>,
    pub virtuals: Vec<VirtualCrossing>,
    /// Wire ends on the outer boundary, counterclockwise from its marker.
    pub boundary: Vec<ArcId>,
    /// Closed wires.
    pub loops: Vec<ArcId>,
}

impl CircuitDiagram {
    /// Checks that every wire has exactly two ends and closed wires none.
    pub fn new(
        holes: Vec<Vec<ArcId>>,
        virtuals: Vec<VirtualCrossing>,
        boundary: Vec<ArcId>,
        loops: Vec<ArcId>,
    ) -> Result<Self, CircuitError> {
        let cd = CircuitDiagram { holes, virtuals, boundary, loops };
        let mut count: BTreeMap<ArcId, usize> = BTreeMap::new();
        for a in cd.ends().map(|(a, _)| a) {
            *count.entry(a).or_default() += 1;
        }
        for (&arc, &c) in &count {
            if c != 2 {
                return Err(DiagramError::ArcUsage { arc, count: c }.into());
            }
        }
        let mut seen = BTreeSet::new();
        for &l in &cd.loops {
            if count.contains_key(&l) || !seen.insert(l) {
                return Err(DiagramError::ArcUsage { arc: l, count: count.get(&l).map_or(0, |c| c + 2) }.into());
            }
        }
        Ok(cd)
    }

    /// One hole with `k` straight wires to the outer boundary.
    pub fn identity(k: usize) -> Self {
        let arcs: Vec<ArcId> = (1..=k as ArcId).collect();
        CircuitDiagram { holes: vec![arcs.clone()], virtuals: vec![], boundary: arcs, loops: vec![] }
    }

    pub fn hole_count(&self) -> usize {
        self.holes.len()
    }

    pub fn arity(&self, hole: usize) -> usize {
        self.holes[hole].len()
    }

    pub fn outer_count(&self) -> usize {
        self.boundary.len()
    }

    fn ends(&self) -> impl Iterator<Item = (ArcId, Point)> + '_ {
        let holes = self
            .holes
            .iter()
            .enumerate()
            .flat_map(|(h, ws)| ws.iter().enumerate().map(move |(s, &a)| (a, Point::Wire { hole: h, slot: s })));
        let virtuals = self.virtuals.iter().enumerate().flat_map(|(v, x)| {
            x.ports.iter().enumerate().map(move |(p, &a)| (a, Point::Slot { node: Node::Virtual(v), port: p as u8 }))
        });
        let outer = self.boundary.iter().enumerate().map(|(i, &a)| (a, Point::Outer(i)));
        holes.chain(virtuals).chain(outer)
    }

    fn max_arc(&self) -> ArcId {
        self.ends().map(|(a, _)| a).chain(self.loops.iter().copied()).max().unwrap_or(0)
    }

    /// Places `inner` into hole `hole`: its outer boundary is joined to the
    /// hole's wire ends, and its holes take the place of `hole` in order.
    pub fn compose(&self, hole: usize, inner: &CircuitDiagram) -> Result<CircuitDiagram, CircuitError> {
        if hole >= self.holes.len() {
            return Err(CircuitError::InputCount { expected: self.holes.len(), found: hole + 1 });
        }
        if inner.outer_count() != self.arity(hole) {
            return Err(CircuitError::Arity { hole, expected: self.arity(hole), found: inner.outer_count() });
        }
        let off = self.max_arc();
        let mut parent: BTreeMap<ArcId, ArcId> = BTreeMap::new();
        fn find(parent: &mut BTreeMap<ArcId, ArcId>, a: ArcId) -> ArcId {
            let p = *parent.get(&a).unwrap_or(&a);
            if p == a {
                return a;
            }
            let r = find(parent, p);
            parent.insert(a, r);
            r
        }
        for (&b, &w) in inner.boundary.iter().zip(&self.holes[hole]) {
            let (x, y) = (find(&mut parent, b + off), find(&mut parent, w));
            if x != y {
                parent.insert(x.max(y), x.min(y));
            }
        }
        let mut f = |a: ArcId| find(&mut parent, a);
        let mut holes: Vec<Vec<ArcId>> = Vec::new();
        for (j, ws) in self.holes.iter().enumerate() {
            if j == hole {
                holes.extend(inner.holes.iter().map(|ws| ws.iter().map(|&a| f(a + off)).collect()));
            } else {
                holes.push(ws.iter().map(|&a| f(a)).collect());
            }
        }
        let mut virtuals: Vec<VirtualCrossing> =
            self.virtuals.iter().map(|v| VirtualCrossing { ports: v.ports.map(&mut f) }).collect();
        virtuals.extend(inner.virtuals.iter().map(|v| VirtualCrossing { ports: v.ports.map(|a| f(a + off)) }));
        let boundary: Vec<ArcId> = self.boundary.iter().map(|&a| f(a)).collect();
        let mut loops: Vec<ArcId> = self.loops.iter().copied().chain(inner.loops.iter().map(|&a| a + off)).collect();
        // chains running only between the glued ends close up
        let mut used = BTreeSet::new();
        for ws in &holes {
            used.extend(ws.iter().copied());
        }
        for v in &virtuals {
            used.extend(v.ports);
        }
        used.extend(boundary.iter().copied());
        let mut closed = BTreeSet::new();
        for &w in &self.holes[hole] {
            let r = f(w);
            if !used.contains(&r) {
                closed.insert(r);
            }
        }
        loops.extend(closed);
        CircuitDiagram::new(holes, virtuals, boundary, loops)
    }
}

impl fmt::Display for CircuitDiagram {
    /// Writes the circuit in `.vcd` form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuit m={} outer={}", self.holes.len(), self.boundary.len())?;
        for (j, ws) in self.holes.iter().enumerate() {
            write!(f, "hole {j}")?;
            for a in ws {
                write!(f, " {a}")?;
            }
            writeln!(f)?;
        }
        for v in &self.virtuals {
            writeln!(f, "V {} {} {} {}", v.ports[0], v.ports[1], v.ports[2], v.ports[3])?;
        }
        for b in &self.boundary {
            writeln!(f, "B {b}")?;
        }
        for l in &self.loops {
            writeln!(f, "O {l}")?;
        }
        Ok(())
    }
}

/// Reads the line-based `.vcd` format:
///
/// ```text
/// circuit m=2 outer=0
/// hole 0 3 2 4 1
/// hole 1 6 3 1 5
/// V 2 4 5 6
/// ```
pub fn parse_circuit(text: &str) -> Result<CircuitDiagram, CircuitError> {
    let mut header: Option<(usize, usize)> = None;
    let mut holes: BTreeMap<usize, Vec<ArcId>> = BTreeMap::new();
    let mut virtuals = Vec::new();
    let mut boundary = Vec::new();
    let mut loops = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&first) = toks.first() else { continue };
        let Some((m, _)) = header else {
            if first.1 != "circuit" || toks.len() != 3 {
                return Err(syntax(line, first.0, "expected header `circuit m=<int> outer=<int>`").into());
            }
            header = Some((parse_kv(line, toks[1], "m")?, parse_kv(line, toks[2], "outer")?));
            continue;
        };
        let rest = &toks[1..];
        match first.1 {
            "hole" => {
                let Some(&(col, j)) = rest.first() else {
                    return Err(syntax(line, first.0, "hole needs an index").into());
                };
                let j: usize = j.parse().map_err(|_| syntax(line, col, format!("expected a hole index, found {j:?}")))?;
                if j >= m {
                    return Err(syntax(line, col, format!("hole index {j} out of range for m={m}")).into());
                }
                if holes.contains_key(&j) {
                    return Err(syntax(line, col, format!("hole {j} listed twice")).into());
                }
                let arcs = rest[1..]
                    .iter()
                    .map(|&(c, t)| t.parse::<ArcId>().map_err(|_| syntax(line, c, format!("expected an arc id, found {t:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                holes.insert(j, arcs);
            }
            "V" => virtuals.push(VirtualCrossing { ports: parse_arcs::<4>(line, first, rest)? }),
            "B" => boundary.push(parse_arcs::<1>(line, first, rest)?[0]),
            "O" => loops.push(parse_arcs::<1>(line, first, rest)?[0]),
            "C+" | "C-" => return Err(CircuitError::ClassicalCrossing { line }),
            "circuit" => return Err(syntax(line, first.0, "duplicate header").into()),
            other => return Err(syntax(line, first.0, format!("unknown directive {other:?}")).into()),
        }
    }
    let (m, outer) = header.ok_or_else(|| syntax(1, 1, "missing header `circuit m=<int> outer=<int>`"))?;
    if outer != boundary.len() {
        return Err(DiagramError::BoundaryCount { declared: outer, found: boundary.len() }.into());
    }
    if let Some(j) = (0..m).find(|j| !holes.contains_key(j)) {
        return Err(DiagramError::Invalid(format!("hole {j} is not listed")).into());
    }
    CircuitDiagram::new(holes.into_values().collect(), virtuals, boundary, loops)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Dot {
    Green,
    Red,
}

/// Colour of one input string: a strand of an input diagram, or a string
/// of an input resolution when `state` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StringDot {
    pub state: Option<State>,
    pub input: usize,
    /// Least arc of the string, in the input's own labels.
    pub string: ArcId,
    pub dot: Dot,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DotReport {
    pub strings: Vec<StringDot>,
    /// Saddles, by source state and crossing, whose two local strings lie
    /// on one glued circle with different dots in source and target.
    pub bolts: Vec<(State, usize)>,
}

impl DotReport {
    pub fn red(&self) -> impl Iterator<Item = &StringDot> {
        self.strings.iter().filter(|s| s.dot == Dot::Red)
    }

    pub fn all_green(&self) -> bool {
        self.red().next().is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Point {
    /// A port of a classical or virtual crossing, numbered globally.
    Slot { node: Node, port: u8 },
    /// Boundary point of the input in a hole.
    Inner { hole: usize, slot: usize },
    /// Wire end at a hole.
    Wire { hole: usize, slot: usize },
    Outer(usize),
}

#[derive(Clone, Copy, Debug)]
enum Owner {
    Input { input: usize, arc: ArcId },
    Wire,
}

#[derive(Clone, Debug)]
struct Segment {
    owner: Owner,
    /// Tail and head; `None` for closed loops.
    ends: Option<(Point, Point)>,
    /// Index of the input strand containing the segment.
    strand: usize,
}

#[derive(Clone, Debug)]
struct Path {
    segs: Vec<(usize, bool)>,
    closed: bool,
}

/// Input arcs and circuit wires as one graph, with every classical crossing
/// labelled as in its input diagram.
struct Layout {
    segs: Vec<Segment>,
    at: BTreeMap<Point, (usize, bool)>,
    /// Input and local index of every global crossing.
    owner: Vec<(usize, usize)>,
    /// Segment at each port of every global crossing.
    ports: Vec<[usize; 4]>,
    crossing_offset: Vec<usize>,
    virtual_count: usize,
    outer: usize,
}

impl Layout {
    fn new(cd: &CircuitDiagram, inputs: &[&VTangleDiagram]) -> Result<Self, CircuitError> {
        if inputs.len() != cd.hole_count() {
            return Err(CircuitError::InputCount { expected: cd.hole_count(), found: inputs.len() });
        }
        for (j, t) in inputs.iter().enumerate() {
            if t.boundary_count() != cd.arity(j) {
                return Err(CircuitError::Arity { hole: j, expected: cd.arity(j), found: t.boundary_count() });
            }
        }
        let mut segs = Vec::new();
        let mut at = BTreeMap::new();
        let mut owner = Vec::new();
        let mut crossing_offset = Vec::new();
        let (mut c_off, mut v_off) = (0, 0);
        for (j, t) in inputs.iter().enumerate() {
            let mut strand_of = BTreeMap::new();
            for (k, s) in t.strands().iter().enumerate() {
                for &(a, _) in s {
                    strand_of.insert(a, k);
                }
            }
            let point = |e: End| match e.node {
                Node::Classical(i) => Point::Slot { node: Node::Classical(c_off + i), port: e.port },
                Node::Virtual(v) => Point::Slot { node: Node::Virtual(v_off + v), port: e.port },
                Node::Boundary(i) => Point::Inner { hole: j, slot: i },
            };
            for a in t.arcs() {
                let ends = t.arc_ends(a).map(|(tl, hd)| (point(tl), point(hd)));
                if let Some((tl, hd)) = ends {
                    at.insert(tl, (segs.len(), true));
                    at.insert(hd, (segs.len(), false));
                }
                let strand = strand_of.get(&a).copied().unwrap_or(usize::MAX);
                segs.push(Segment { owner: Owner::Input { input: j, arc: a }, ends, strand });
            }
            crossing_offset.push(c_off);
            owner.extend((0..t.crossing_count()).map(|i| (j, i)));
            c_off += t.crossing_count();
            v_off += t.virtuals().len();
        }
        let mut wire_ends: BTreeMap<ArcId, Vec<Point>> = BTreeMap::new();
        for (a, p) in cd.ends() {
            let p = match p {
                Point::Slot { node: Node::Virtual(v), port } => Point::Slot { node: Node::Virtual(v_off + v), port },
                other => other,
            };
            wire_ends.entry(a).or_default().push(p);
        }
        for (_, eps) in wire_ends {
            // a wire leaves a virtual crossing at ports 2 and 3
            let leaves = |p: &Point| matches!(p, Point::Slot { port: 2 | 3, .. });
            let enters = |p: &Point| matches!(p, Point::Slot { port: 0 | 1, .. });
            let (tl, hd) = if leaves(&eps[1]) || enters(&eps[0]) { (eps[1], eps[0]) } else { (eps[0], eps[1]) };
            at.insert(tl, (segs.len(), true));
            at.insert(hd, (segs.len(), false));
            segs.push(Segment { owner: Owner::Wire, ends: Some((tl, hd)), strand: usize::MAX });
        }
        for _ in &cd.loops {
            segs.push(Segment { owner: Owner::Wire, ends: None, strand: usize::MAX });
        }
        let ports = (0..c_off)
            .map(|c| std::array::from_fn(|p| at[&Point::Slot { node: Node::Classical(c), port: p as u8 }].0))
            .collect();
        Ok(Layout {
            segs,
            at,
            owner,
            ports,
            crossing_offset,
            virtual_count: v_off + cd.virtuals.len(),
            outer: cd.outer_count(),
        })
    }

    fn input_of(&self, seg: usize) -> Option<usize> {
        match self.segs[seg].owner {
            Owner::Input { input, .. } => Some(input),
            Owner::Wire => None,
        }
    }

    /// Traces the active segments. Classical crossings are passed as `how`
    /// says, virtual crossings straight, and other points through `link`.
    /// Each path starts at its least segment traversed forward unless it is
    /// open, in which case it starts at an open end.
    fn walk(&self, active: impl Fn(usize) -> bool, link: impl Fn(Point) -> Option<Point>, how: impl Fn(usize) -> Partner) -> Vec<Path> {
        let step = |seg: usize, fwd: bool| -> Option<(usize, bool)> {
            let (tl, hd) = self.segs[seg].ends?;
            let p = if fwd { hd } else { tl };
            let q = match p {
                Point::Slot { node: Node::Classical(c), port } => Point::Slot { node: Node::Classical(c), port: partner_port(port, how(c)) },
                Point::Slot { node, port } => Point::Slot { node, port: (port + 2) % 4 },
                other => link(other)?,
            };
            let (next, is_tail) = self.at[&q];
            debug_assert!(active(next));
            Some((next, is_tail))
        };
        let mut visited = vec![false; self.segs.len()];
        let mut paths = Vec::new();
        for s in 0..self.segs.len() {
            if visited[s] || !active(s) {
                continue;
            }
            visited[s] = true;
            let mut segs = vec![(s, true)];
            let mut open = false;
            let mut cur = (s, true);
            loop {
                match step(cur.0, cur.1) {
                    None => {
                        open = true;
                        break;
                    }
                    Some(next) if next.0 == s => break,
                    Some(next) => {
                        visited[next.0] = true;
                        segs.push(next);
                        cur = next;
                    }
                }
            }
            if open {
                let mut before = Vec::new();
                let mut cur = (s, false);
                while let Some(next) = step(cur.0, cur.1) {
                    visited[next.0] = true;
                    before.push((next.0, !next.1));
                    cur = next;
                }
                before.reverse();
                before.extend(segs);
                segs = before;
            }
            paths.push(Path { segs, closed: !open });
        }
        paths
    }

    fn head(&self, seg: usize, fwd: bool) -> Option<Point> {
        self.segs[seg].ends.map(|(t, h)| if fwd { h } else { t })
    }
}

/// Composite diagram with the segments it was assembled from.
struct Assembly {
    layout: Layout,
    diagram: VTangleDiagram,
    segs_of: BTreeMap<ArcId, Vec<usize>>,
    /// Whether the composite's orientation runs along each segment.
    forward: Vec<bool>,
    report: DotReport,
}

fn assemble(cd: &CircuitDiagram, inputs: &[&VTangleDiagram], caps: Option<ClosureKind>) -> Result<Assembly, CircuitError> {
    let layout = Layout::new(cd, inputs)?;
    let mut partner = BTreeMap::new();
    if let Some(kind) = caps {
        if layout.outer % 2 == 1 {
            return Err(DiagramError::OddBoundary(layout.outer).into());
        }
        for (i, j) in kind.caps(layout.outer) {
            partner.insert(i, j);
            partner.insert(j, i);
        }
    }
    let link = |p: Point| match p {
        Point::Inner { hole, slot } => Some(Point::Wire { hole, slot }),
        Point::Wire { hole, slot } => Some(Point::Inner { hole, slot }),
        Point::Outer(i) => partner.get(&i).map(|&j| Point::Outer(j)),
        Point::Slot { .. } => None,
    };
    let mut strands = layout.walk(|_| true, link, |_| Partner::Straight);
    let mut forward = vec![true; layout.segs.len()];
    for path in &mut strands {
        let lead = path
            .segs
            .iter()
            .filter_map(|&(s, d)| layout.input_of(s).map(|j| ((j, layout.segs[s].strand, s), d)))
            .min();
        if let Some((_, false)) = lead {
            path.segs.reverse();
            for x in &mut path.segs {
                x.1 = !x.1;
            }
        }
        for &(s, d) in &path.segs {
            forward[s] = d;
        }
    }

    // strand dots
    let mut dots: BTreeMap<(usize, usize), (ArcId, Dot)> = BTreeMap::new();
    for (s, seg) in layout.segs.iter().enumerate() {
        if let Owner::Input { input, arc } = seg.owner {
            let dot = if forward[s] { Dot::Green } else { Dot::Red };
            let e = dots.entry((input, seg.strand)).or_insert((arc, dot));
            e.0 = e.0.min(arc);
            debug_assert_eq!(e.1, dot);
        }
    }
    let report = DotReport {
        strings: dots
            .into_iter()
            .map(|((input, _), (string, dot))| StringDot { state: None, input, string, dot })
            .collect(),
        bolts: vec![],
    };

    // split the oriented strands into arcs at crossing ports
    let mut pieces: Vec<(Vec<usize>, Option<Point>)> = Vec::new();
    for path in &strands {
        let segs = &path.segs;
        let at_node = |i: usize| matches!(layout.head(segs[i].0, segs[i].1), Some(Point::Slot { .. }));
        let closed = path.closed;
        let start = if closed { (0..segs.len()).find(|&i| at_node(i)).map_or(0, |i| i + 1) % segs.len() } else { 0 };
        let order: Vec<(usize, bool)> = segs[start..].iter().chain(&segs[..start]).copied().collect();
        let mut cur: Vec<usize> = Vec::new();
        let mut tail: Option<Point> = None;
        for (i, &(s, d)) in order.iter().enumerate() {
            if cur.is_empty() {
                tail = layout.head(s, !d);
            }
            cur.push(s);
            let last = i + 1 == order.len();
            let cut = matches!(layout.head(s, d), Some(Point::Slot { .. }));
            if cut || last {
                let has_node = cut || tail.is_some_and(|p| matches!(p, Point::Slot { .. } | Point::Outer(_)));
                pieces.push((std::mem::take(&mut cur), if has_node || !closed { tail } else { None }));
            }
        }
    }
    pieces.sort_by_key(|p| p.0.iter().copied().min());
    let mut arc_of = vec![0 as ArcId; layout.segs.len()];
    let mut segs_of = BTreeMap::new();
    let mut tails = BTreeMap::new();
    let mut loops = Vec::new();
    for (i, (segs, tail)) in pieces.iter().enumerate() {
        let id = i as ArcId + 1;
        for &s in segs {
            arc_of[s] = id;
        }
        segs_of.insert(id, segs.clone());
        match tail {
            Some(Point::Slot { node, port }) => {
                tails.insert(id, End { node: *node, port: *port });
            }
            Some(Point::Outer(i)) if partner.is_empty() => {
                tails.insert(id, End { node: Node::Boundary(*i), port: 0 });
            }
            _ => loops.push(id),
        }
    }
    let arc_at = |p: Point| arc_of[layout.at[&p].0];
    let classical = (0..layout.ports.len())
        .map(|c| std::array::from_fn(|p| arc_at(Point::Slot { node: Node::Classical(c), port: p as u8 })))
        .collect();
    let virtuals = (0..layout.virtual_count)
        .map(|v| std::array::from_fn(|p| arc_at(Point::Slot { node: Node::Virtual(v), port: p as u8 })))
        .collect();
    let boundary = if partner.is_empty() { (0..layout.outer).map(|i| arc_at(Point::Outer(i))).collect() } else { vec![] };
    let wiring = Wiring { classical, virtuals, boundary, loops, tails };
    let names: Vec<&str> = inputs.iter().map(|d| d.name()).collect();
    let diagram = wiring.into_diagram(format!("circuit({})", names.join(", ")))?;
    Ok(Assembly { layout, diagram, segs_of, forward, report })
}

/// Places the inputs into the holes of `cd`. Composite strands are
/// oriented by the lower first rule; the report marks every input strand
/// whose orientation had to be reversed.
pub fn operate_diagrams(cd: &CircuitDiagram, inputs: &[VTangleDiagram]) -> Result<(VTangleDiagram, DotReport), CircuitError> {
    let refs: Vec<&VTangleDiagram> = inputs.iter().collect();
    let asm = assemble(cd, &refs, None)?;
    Ok((asm.diagram, asm.report))
}

/// Result of gluing complexes through a circuit.
#[derive(Clone, Debug)]
pub struct GluedComplex {
    pub complex: GeometricComplex,
    pub report: DotReport,
    /// Saddles whose input saddle already has indicator `0`.
    pub inherited_zeros: Vec<(State, usize)>,
}

/// Glues the cubes of the inputs through `cd`.
///
/// A state of the composite is a tuple of input states. Every glued circle
/// takes the orientation and the number of its least input string, where
/// the input strings carry the orientations of the input circles; this
/// fixes the orientation and numbering overrides of the composite cube. A
/// saddle gets indicator `0` when its input saddle has indicator `0`, or
/// when its two local strings meet on one glued circle with different dots
/// in source and target (a bolt). Signs are then solved on the glued cube.
/// Tangle composites are closed with the closure of the first input that
/// has one.
pub fn glue_complexes(cd: &CircuitDiagram, inputs: &[GeometricComplex]) -> Result<GluedComplex, CircuitError> {
    let tangles: Vec<&VTangleDiagram> = inputs.iter().map(|g| g.tangle()).collect();
    let kind = inputs.iter().find_map(|g| g.closure()).unwrap_or(ClosureKind::Star);
    let asm = assemble(cd, &tangles, Some(kind))?;
    let layout = &asm.layout;
    let d = &asm.diagram;
    let n = d.crossing_count();
    let input_caps: Vec<BTreeMap<usize, usize>> = inputs
        .iter()
        .map(|g| {
            let k = g.tangle().boundary_count();
            g.closure().map_or_else(Vec::new, |c| c.caps(k)).into_iter().flat_map(|(a, b)| [(a, b), (b, a)]).collect()
        })
        .collect();
    let local_state = |s: &State, j: usize| -> State {
        let off = layout.crossing_offset[j];
        State::new(s.bits()[off..off + tangles[j].crossing_count()].to_vec())
    };

    let mut opts = CubeOptions::default();
    let mut strings = Vec::new();
    // per state: component of each segment and whether its dot is red
    let mut colouring: Vec<(Vec<usize>, Vec<bool>)> = Vec::with_capacity(1 << n);
    for idx in 0..1usize << n {
        let s = State::from_index(idx, n);
        let how = |c: usize| Partner::Smooth(s.get(c));
        let res = d.resolve(&s)?;
        let mut comp = vec![usize::MAX; layout.segs.len()];
        let mut canonical = vec![true; layout.segs.len()];
        for (k, c) in res.components().iter().enumerate() {
            for &(a, f) in &c.arcs {
                for &seg in &asm.segs_of[&a] {
                    comp[seg] = k;
                    canonical[seg] = f == asm.forward[seg];
                }
            }
        }
        // circles of each input's closure at its local state
        let mut key = vec![None; layout.segs.len()];
        let mut input_dir = vec![true; layout.segs.len()];
        for (j, caps) in input_caps.iter().enumerate() {
            let circles = layout.walk(
                |x| layout.input_of(x) == Some(j),
                |p| match p {
                    Point::Inner { hole, slot } if hole == j => caps.get(&slot).map(|&t| Point::Inner { hole, slot: t }),
                    _ => None,
                },
                how,
            );
            for (q, circle) in circles.iter().enumerate() {
                for &(x, dir) in &circle.segs {
                    key[x] = Some((j, q, x));
                    input_dir[x] = dir;
                }
            }
        }
        // lower first
        let mut lead: Vec<(usize, usize, usize)> = vec![(usize::MAX, 0, usize::MAX); res.len()];
        for x in 0..layout.segs.len() {
            let k = comp[x];
            let kx = key[x].unwrap_or((usize::MAX, 0, x));
            if kx < lead[k] {
                lead[k] = kx;
            }
        }
        let reversed: Vec<bool> = lead.iter().map(|&(j, _, x)| j != usize::MAX && canonical[x] != input_dir[x]).collect();
        let mut order: Vec<usize> = (0..res.len()).collect();
        order.sort_by_key(|&k| lead[k]);
        let mut numbers = vec![0; res.len()];
        for (rank, &k) in order.iter().enumerate() {
            numbers[k] = rank + 1;
        }
        let red: Vec<bool> = (0..layout.segs.len())
            .map(|x| key[x].is_some() && (canonical[x] ^ reversed[comp[x]]) != input_dir[x])
            .collect();
        // strings of the inputs at this state
        for j in 0..inputs.len() {
            let open = layout.walk(|x| layout.input_of(x) == Some(j), |_| None, how);
            for p in open {
                let string = p
                    .segs
                    .iter()
                    .filter_map(|&(x, _)| match layout.segs[x].owner {
                        Owner::Input { arc, .. } => Some(arc),
                        Owner::Wire => None,
                    })
                    .min()
                    .unwrap();
                let dot = if red[p.segs[0].0] { Dot::Red } else { Dot::Green };
                strings.push(StringDot { state: Some(s.clone()), input: j, string, dot });
            }
        }
        opts.reversed.insert(s.clone(), reversed);
        opts.numbering.insert(s, numbers);
        colouring.push((comp, red));
    }

    let mismatch = |idx: usize, r: usize| -> bool {
        let (comp, red) = &colouring[idx];
        let [a, _, b, _] = layout.ports[r];
        comp[a] == comp[b] && red[a] != red[b]
    };
    let mut bolts = Vec::new();
    let mut inherited = Vec::new();
    for idx in 0..1usize << n {
        let s = State::from_index(idx, n);
        for r in 0..n {
            if s.get(r) == 1 {
                continue;
            }
            let (j, rl) = layout.owner[r];
            let part = inputs[j].saddle(&local_state(&s, j), rl).map_or(0, |sd| sd.indicator);
            let bolt = mismatch(idx, r) && mismatch(s.with(r, 1).index(), r);
            if bolt {
                bolts.push((s.clone(), r));
            }
            if part == 0 {
                inherited.push((s.clone(), r));
            }
            if glue_indicators(&[part], bolt as usize) == 0 {
                opts.zero_saddles.insert((s.clone(), r));
            }
        }
    }
    let mut complex = GeometricComplex::build(d, &opts)?;
    if cd.outer_count() > 0 {
        let open = assemble(cd, &tangles, None)?;
        complex = complex.with_tangle(open.diagram, kind);
    }
    Ok(GluedComplex { complex, report: DotReport { strings, bolts }, inherited_zeros: inherited })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum NtVerdict {
    Equal,
    /// The first degree where the homologies differ, or none when only
    /// the chain isomorphism is missing.
    Unequal { degree: Option<i32> },
}

#[derive(Clone, Debug, Serialize)]
pub struct NtReport {
    pub verdict: NtVerdict,
    pub glued: HomologySummary,
    pub direct: HomologySummary,
    /// Whether a chain isomorphism was found, when asked for.
    pub chain_isomorphic: Option<bool>,
    pub report: DotReport,
}

/// Compares the homology of the glued complex with the homology of the
/// complex of the composite diagram, with every input closed by `kind`.
/// With `strict`, also looks for a chain isomorphism between the glued
/// complex and the plain complex of the same closed diagram.
pub fn compare_glued(
    cd: &CircuitDiagram,
    inputs: &[VTangleDiagram],
    kind: ClosureKind,
    ring: RingTag,
    t: i64,
    strict: bool,
) -> Result<NtReport, CircuitError> {
    let opts = CubeOptions::default();
    let complexes = inputs
        .iter()
        .map(|d| GeometricComplex::build_tangle(d, kind, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let glued = glue_complexes(cd, &complexes)?;
    let (composite, _) = operate_diagrams(cd, inputs)?;
    let direct = GeometricComplex::build_tangle(&composite, kind, &opts)?;
    let hg = homology_over(ring, &glued.complex, t)?;
    let hd = homology_over(ring, &direct, t)?;
    let chain_isomorphic = if strict {
        let plain = GeometricComplex::build(glued.complex.diagram(), &opts)?;
        Some(exact_chain_isomorphism(&glued.complex, &plain)?.is_some())
    } else {
        None
    };
    let verdict = match hg.first_difference(&hd) {
        Some(degree) => NtVerdict::Unequal { degree: Some(degree) },
        None if chain_isomorphic == Some(false) => NtVerdict::Unequal { degree: None },
        None => NtVerdict::Equal,
    };
    Ok(NtReport { verdict, glued: hg, direct: hd, chain_isomorphic, report: glued.report })
}

/// [`compare_glued`] for inputs certified nice, closed by the star closure.
pub fn check_nt_morphism(
    cd: &CircuitDiagram,
    inputs: &[VTangleDiagram],
    ring: RingTag,
    t: i64,
    strict: bool,
) -> Result<NtReport, CircuitError> {
    for (j, d) in inputs.iter().enumerate() {
        if is_nice(d)? != Niceness::Nice {
            return Err(CircuitError::NotNice(j));
        }
    }
    compare_glued(cd, inputs, ClosureKind::Star, ring, t, strict)
}

/// Closed circuit with `m` holes holding single crossings of random sign,
/// with the `4m` wire ends matched at random. Wires cross virtually
/// wherever they meet, so no virtual crossings are listed.
pub fn random_crossing_circuit<R: Rng>(rng: &mut R, m: usize) -> (CircuitDiagram, Vec<VTangleDiagram>) {
    let mut slots: Vec<(usize, usize)> = (0..m).flat_map(|h| (0..4).map(move |s| (h, s))).collect();
    slots.shuffle(rng);
    let mut holes = vec![vec![0 as ArcId; 4]; m];
    for (w, pair) in slots.chunks(2).enumerate() {
        for &(h, s) in pair {
            holes[h][s] = w as ArcId + 1;
        }
    }
    let inputs = (0..m).map(|_| single_crossing(rng.gen_bool(0.5))).collect();
    let cd = CircuitDiagram::new(holes, vec![], vec![], vec![]).expect("a matching of wire ends is a valid circuit");
    (cd, inputs)
}

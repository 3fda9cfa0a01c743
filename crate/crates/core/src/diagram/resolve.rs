//! Tracing strands and smoothed circles through a diagram.
//!
//! Smoothings do not depend on which under end a crossing is read from, so the
//! port conventions of `Crossing::ports` can be used directly.

use std::collections::BTreeMap;
use std::fmt;

use super::{ArcId, DiagramError, End, Node, VTangleDiagram};

/// A state word: one letter in `{0, 1}` per classical crossing. The derived
/// ordering is lexicographic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct State(Vec<u8>);

impl State {
    pub fn new(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b < 2), "state letters must be 0 or 1");
        State(bits)
    }

    pub fn zeros(n: usize) -> Self {
        State(vec![0; n])
    }

    /// The state whose letters are the binary digits of `idx`, most
    /// significant first. Integer order then agrees with lexicographic order.
    pub fn from_index(idx: usize, n: usize) -> Self {
        State((0..n).map(|i| ((idx >> (n - 1 - i)) & 1) as u8).collect())
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn with(&self, i: usize, b: u8) -> Self {
        let mut s = self.clone();
        s.0[i] = b;
        s
    }

    /// Number of 1-letters.
    pub fn height(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl serde::Serialize for State {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::str::FromStr for State {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(DiagramError::Invalid(format!("bad state letter {c:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(State)
    }
}

/// How a walk continues through a classical crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Partner {
    Straight,
    Smooth(u8),
}

/// Port joined to `port` at a classical crossing.
pub(crate) fn partner_port(port: u8, how: Partner) -> u8 {
    match how {
        Partner::Straight => (port + 2) % 4,
        Partner::Smooth(0) => port ^ 1,
        Partner::Smooth(_) => 3 - port,
    }
}

/// One passage of a walk through a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Pass {
    pub node: Node,
    pub in_port: u8,
    pub out_port: u8,
}

#[derive(Clone, Debug)]
pub(crate) struct Walk {
    /// Arcs in traversal order, `true` when traversed tail to head.
    pub arcs: Vec<(ArcId, bool)>,
    pub passes: Vec<Pass>,
    pub closed: bool,
}

impl Walk {
    fn min_arc(&self) -> ArcId {
        self.arcs.iter().map(|a| a.0).min().unwrap()
    }

    fn reverse(&mut self) {
        self.arcs.reverse();
        for a in &mut self.arcs {
            a.1 = !a.1;
        }
        self.passes.reverse();
        for p in &mut self.passes {
            std::mem::swap(&mut p.in_port, &mut p.out_port);
        }
    }
}

/// Traces every component, choosing the passage through crossing `i` by
/// `how(i)`. Walks are returned by ascending least arc id, each oriented so
/// that its least arc is traversed tail to head.
pub(crate) fn walk_all(d: &VTangleDiagram, how: impl Fn(usize) -> Partner) -> Vec<Walk> {
    let mut visited: BTreeMap<ArcId, bool> = BTreeMap::new();
    let mut walks = Vec::new();

    let step = |arc: ArcId, forward: bool| -> Option<(Pass, ArcId, bool)> {
        let (tail, head) = d.arc_ends(arc).unwrap();
        let at = if forward { head } else { tail };
        let out_port = match at.node {
            Node::Boundary(_) => return None,
            Node::Classical(i) => partner_port(at.port, how(i)),
            Node::Virtual(_) => (at.port + 2) % 4,
        };
        let next_end = End { node: at.node, port: out_port };
        let next = d.arc_at(next_end);
        let (ntail, _) = d.arc_ends(next).unwrap();
        Some((Pass { node: at.node, in_port: at.port, out_port }, next, ntail == next_end))
    };

    let trace = |start: ArcId, forward: bool, visited: &mut BTreeMap<ArcId, bool>| -> Walk {
        let mut arcs = vec![(start, forward)];
        let mut passes = Vec::new();
        visited.insert(start, true);
        let (mut arc, mut fwd) = (start, forward);
        let closed = loop {
            match step(arc, fwd) {
                None => break false,
                Some((pass, next, nfwd)) => {
                    passes.push(pass);
                    if next == start && nfwd == forward {
                        break true;
                    }
                    arcs.push((next, nfwd));
                    visited.insert(next, true);
                    arc = next;
                    fwd = nfwd;
                }
            }
        };
        Walk { arcs, passes, closed }
    };

    for (i, &b) in d.boundary().iter().enumerate() {
        if visited.contains_key(&b) {
            continue;
        }
        let (tail, _) = d.arc_ends(b).unwrap();
        let forward = tail == (End { node: Node::Boundary(i), port: 0 });
        walks.push(trace(b, forward, &mut visited));
    }
    let arcs: Vec<ArcId> = d.arcs().into_iter().collect();
    for a in arcs {
        if visited.contains_key(&a) {
            continue;
        }
        if d.loops().contains(&a) {
            visited.insert(a, true);
            walks.push(Walk { arcs: vec![(a, true)], passes: vec![], closed: true });
            continue;
        }
        walks.push(trace(a, true, &mut visited));
    }
    for w in &mut walks {
        let m = w.min_arc();
        let forward = w.arcs.iter().find(|x| x.0 == m).unwrap().1;
        if !forward {
            w.reverse();
        }
        if w.closed {
            let pos = w.arcs.iter().position(|x| x.0 == m).unwrap();
            w.arcs.rotate_left(pos);
        }
    }
    walks.sort_by_key(|w| w.min_arc());
    walks
}

/// A circle or string of a resolution, in canonical orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Arcs in traversal order, `true` when traversed tail to head.
    pub arcs: Vec<(ArcId, bool)>,
    pub closed: bool,
    /// Number of virtual crossings passed (twice for self-crossings).
    pub vcross_traversals: usize,
}

impl Component {
    pub fn least_arc(&self) -> ArcId {
        self.arcs.iter().map(|a| a.0).min().unwrap()
    }
}

/// One of the two local arcs of a smoothed crossing: local arc `j` is the one
/// through port `2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalArc {
    pub component: usize,
    /// Port through which the component enters, in its canonical orientation.
    pub entry_port: u8,
}

/// A resolved diagram with an orientation and numbering of its components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    state: State,
    components: Vec<Component>,
    local: Vec<[LocalArc; 2]>,
    reversed: Vec<bool>,
    numbers: Vec<usize>,
}

impl Resolution {
    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn circle_count(&self) -> usize {
        self.components.iter().filter(|c| c.closed).count()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Whether component `c` is oriented against its canonical direction.
    pub fn is_reversed(&self, c: usize) -> bool {
        self.reversed[c]
    }

    /// 1-based number of component `c`.
    pub fn number(&self, c: usize) -> usize {
        self.numbers[c]
    }

    pub fn numbers(&self) -> &[usize] {
        &self.numbers
    }

    pub fn reversed(&self) -> &[bool] {
        &self.reversed
    }

    pub fn with_orientation(mut self, reversed: Vec<bool>) -> Self {
        assert_eq!(reversed.len(), self.components.len());
        self.reversed = reversed;
        self
    }

    /// Replaces the numbering; `numbers` must be a permutation of `1..=len`.
    pub fn with_numbering(mut self, numbers: Vec<usize>) -> Self {
        let mut sorted = numbers.clone();
        sorted.sort_unstable();
        assert!(sorted.iter().enumerate().all(|(i, &n)| n == i + 1), "numbering must be a bijection");
        self.numbers = numbers;
        self
    }

    /// Local arc `j` at crossing `r`.
    pub fn local_arc(&self, r: usize, j: usize) -> LocalArc {
        self.local[r][j]
    }

    /// Port at which the local arc is entered under the current orientation.
    pub fn entry_port(&self, r: usize, j: usize) -> u8 {
        let la = self.local[r][j];
        if self.reversed[la.component] {
            partner_port(la.entry_port, Partner::Smooth(self.state.get(r)))
        } else {
            la.entry_port
        }
    }

    /// Component containing the given port of crossing `r`.
    pub fn component_at_port(&self, r: usize, port: u8) -> usize {
        let b = self.state.get(r);
        let j = if port == 0 || partner_port(0, Partner::Smooth(b)) == port { 0 } else { 1 };
        self.local[r][j].component
    }

    /// Local arc index at crossing `r` containing `port`.
    pub fn local_index(&self, r: usize, port: u8) -> usize {
        let b = self.state.get(r);
        if port == 0 || partner_port(0, Partner::Smooth(b)) == port {
            0
        } else {
            1
        }
    }
}

impl VTangleDiagram {
    /// Replaces each classical crossing by the smoothing named in `state` and
    /// traces the result. Components are numbered by ascending least arc id.
    pub fn resolve(&self, state: &State) -> Result<Resolution, DiagramError> {
        let n = self.crossing_count();
        if state.len() != n {
            return Err(DiagramError::StateLength { expected: n, found: state.len() });
        }
        let walks = walk_all(self, |i| Partner::Smooth(state.get(i)));
        let mut local = vec![[LocalArc { component: usize::MAX, entry_port: 0 }; 2]; n];
        let mut components = Vec::with_capacity(walks.len());
        for (ci, w) in walks.into_iter().enumerate() {
            let mut vx = 0;
            for p in &w.passes {
                match p.node {
                    Node::Classical(r) => {
                        let j = if p.in_port == 0 || p.out_port == 0 { 0 } else { 1 };
                        local[r][j] = LocalArc { component: ci, entry_port: p.in_port };
                    }
                    Node::Virtual(_) => vx += 1,
                    Node::Boundary(_) => {}
                }
            }
            components.push(Component { arcs: w.arcs, closed: w.closed, vcross_traversals: vx });
        }
        let len = components.len();
        Ok(Resolution {
            state: state.clone(),
            components,
            local,
            reversed: vec![false; len],
            numbers: (1..=len).collect(),
        })
    }

    /// Every orientation of a closed diagram sends each crossing to its
    /// oriented smoothing. Returns, per orientation (as flip mask over
    /// `strands()`), the induced state and the resolution with the circles
    /// oriented by the link.
    pub fn non_alternating_resolutions(&self) -> Result<Vec<NonAlternating>, DiagramError> {
        let orients = self.orientations()?;
        let strands = self.strands();
        let mut strand_of = BTreeMap::new();
        for (i, s) in strands.iter().enumerate() {
            for &(a, _) in s {
                strand_of.insert(a, i);
            }
        }
        let mut out = Vec::with_capacity(orients.len());
        for flips in orients {
            let d = self.reoriented(&flips);
            let state = State::new(
                d.crossings().iter().map(|c| if c.sign == super::CrossingSign::Positive { 0 } else { 1 }).collect(),
            );
            let res = self.resolve(&state)?;
            let reversed = res
                .components()
                .iter()
                .map(|c| {
                    let (a, fwd) = c.arcs[0];
                    // canonical orientation runs along the least arc forward
                    debug_assert!(fwd);
                    flips[strand_of[&a]]
                })
                .collect();
            let res = res.with_orientation(reversed);
            out.push(NonAlternating { orientation: flips, state, resolution: res });
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonAlternating {
    pub orientation: Vec<bool>,
    pub state: State,
    pub resolution: Resolution,
}

use std::collections::{BTreeMap, BTreeSet};

use super::{ArcId, Crossing, DiagramError, VTangleDiagram, VirtualCrossing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Node {
    Classical(usize),
    Virtual(usize),
    Boundary(usize),
}

/// One end of an arc: the node it is attached to and the port there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct End {
    pub node: Node,
    pub port: u8,
}

/// Unvalidated port graph used while rewriting diagrams. Classical crossings
/// are stored by counterclockwise ports with the under-strand on ports 0 and 2;
/// orientation lives only in `tails`.
#[derive(Clone, Debug, Default)]
pub(crate) struct Wiring {
    pub classical: Vec<[ArcId; 4]>,
    pub virtuals: Vec<[ArcId; 4]>,
    pub boundary: Vec<ArcId>,
    pub loops: Vec<ArcId>,
    pub tails: BTreeMap<ArcId, End>,
}

impl Wiring {
    pub fn ends(&self) -> BTreeMap<ArcId, Vec<End>> {
        let mut out: BTreeMap<ArcId, Vec<End>> = BTreeMap::new();
        for (i, ps) in self.classical.iter().enumerate() {
            for (p, &a) in ps.iter().enumerate() {
                out.entry(a).or_default().push(End { node: Node::Classical(i), port: p as u8 });
            }
        }
        for (i, ps) in self.virtuals.iter().enumerate() {
            for (p, &a) in ps.iter().enumerate() {
                out.entry(a).or_default().push(End { node: Node::Virtual(i), port: p as u8 });
            }
        }
        for (i, &a) in self.boundary.iter().enumerate() {
            out.entry(a).or_default().push(End { node: Node::Boundary(i), port: 0 });
        }
        out
    }

    pub fn arc_at(&self, e: End) -> ArcId {
        match e.node {
            Node::Classical(i) => self.classical[i][e.port as usize],
            Node::Virtual(i) => self.virtuals[i][e.port as usize],
            Node::Boundary(i) => self.boundary[i],
        }
    }

    pub fn set_arc_at(&mut self, e: End, a: ArcId) {
        match e.node {
            Node::Classical(i) => self.classical[i][e.port as usize] = a,
            Node::Virtual(i) => self.virtuals[i][e.port as usize] = a,
            Node::Boundary(i) => self.boundary[i] = a,
        }
    }

    pub fn reverse_arc(&mut self, a: ArcId) {
        if let Some(t) = self.tails.get(&a).copied() {
            let ends = self.ends();
            if let Some(es) = ends.get(&a) {
                let other = if es[0] == t { es[1] } else { es[0] };
                self.tails.insert(a, other);
            }
        }
    }

    fn other_end(ends: &BTreeMap<ArcId, Vec<End>>, a: ArcId, e: End) -> End {
        let es = &ends[&a];
        if es[0] == e {
            es[1]
        } else {
            es[0]
        }
    }

    /// Arc chains joined by caps between boundary indices, with the arc id that
    /// survives for each original arc.
    pub fn cap_map(&self, caps: &[(usize, usize)]) -> BTreeMap<ArcId, ArcId> {
        let mut partner = BTreeMap::new();
        for &(i, j) in caps {
            partner.insert(i, j);
            partner.insert(j, i);
        }
        let ends = self.ends();
        let mut map = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for &a in ends.keys() {
            if seen.contains(&a) {
                continue;
            }
            // collect the chain containing `a`
            let mut chain = vec![a];
            seen.insert(a);
            let mut stack = vec![a];
            while let Some(x) = stack.pop() {
                for e in &ends[&x] {
                    if let Node::Boundary(i) = e.node {
                        if let Some(&j) = partner.get(&i) {
                            let y = self.boundary[j];
                            if seen.insert(y) {
                                chain.push(y);
                                stack.push(y);
                            }
                        }
                    }
                }
            }
            let id = *chain.iter().min().unwrap();
            for x in chain {
                map.insert(x, id);
            }
        }
        for &l in &self.loops {
            map.insert(l, l);
        }
        map
    }

    /// Joins boundary points pairwise and removes the boundary.
    pub fn cap(&mut self, caps: &[(usize, usize)]) -> Result<(), DiagramError> {
        let mut partner = BTreeMap::new();
        for &(i, j) in caps {
            partner.insert(i, j);
            partner.insert(j, i);
        }
        if partner.len() != self.boundary.len() {
            return Err(DiagramError::Invalid("caps must cover every boundary point once".into()));
        }
        let ends = self.ends();
        let map = self.cap_map(caps);
        let mut groups: BTreeMap<ArcId, Vec<ArcId>> = BTreeMap::new();
        for (&a, &id) in &map {
            if ends.contains_key(&a) {
                groups.entry(id).or_default().push(a);
            }
        }
        let mut new_tails = self.tails.clone();
        for (&id, members) in &groups {
            if members.len() == 1 && !ends[&id].iter().any(|e| matches!(e.node, Node::Boundary(_))) {
                continue;
            }
            for &m in members {
                new_tails.remove(&m);
            }
            // follow the chain from the surviving arc in both directions
            let walk = |start_end: End| -> Option<End> {
                let mut e = start_end;
                let mut steps = 0;
                loop {
                    match e.node {
                        Node::Boundary(i) => {
                            let j = partner[&i];
                            let arc = self.boundary[j];
                            let entry = End { node: Node::Boundary(j), port: 0 };
                            e = Self::other_end(&ends, arc, entry);
                            steps += 1;
                            if arc == id && steps > 0 && matches!(e.node, Node::Boundary(_)) && e == start_end {
                                return None;
                            }
                            if steps > ends.len() * 2 + 2 {
                                return None;
                            }
                        }
                        _ => return Some(e),
                    }
                }
            };
            let (t0, h0) = match self.tails.get(&id) {
                Some(&t) => (t, Self::other_end(&ends, id, t)),
                None => (ends[&id][0], ends[&id][1]),
            };
            let tail_end = walk(t0);
            let head_end = walk(h0);
            match (tail_end, head_end) {
                (Some(t), Some(h)) => {
                    self.set_arc_at(t, id);
                    self.set_arc_at(h, id);
                    new_tails.insert(id, t);
                }
                _ => {
                    // closed chain with no crossings
                    self.loops.push(id);
                }
            }
        }
        self.boundary.clear();
        self.tails = new_tails;
        Ok(())
    }

    /// Makes orientations consistent along every strand, starting each strand
    /// from its least arc in that arc's preferred direction, then validates.
    pub fn into_diagram(mut self, name: String) -> Result<VTangleDiagram, DiagramError> {
        let ends = self.ends();
        for (a, es) in &ends {
            if es.len() != 2 {
                return Err(DiagramError::ArcUsage { arc: *a, count: es.len() });
            }
        }
        let straight = |e: End| -> Option<End> {
            match e.node {
                Node::Boundary(_) => None,
                _ => Some(End { node: e.node, port: (e.port + 2) % 4 }),
            }
        };
        let mut fixed: BTreeMap<ArcId, End> = BTreeMap::new();
        for &a in ends.keys() {
            if fixed.contains_key(&a) {
                continue;
            }
            let t = self.tails.get(&a).copied().unwrap_or(ends[&a][0]);
            fixed.insert(a, t);
            // forward
            let mut arc = a;
            let mut tail = t;
            loop {
                let head = Self::other_end(&ends, arc, tail);
                let Some(next_end) = straight(head) else { break };
                let next = self.arc_at(next_end);
                if fixed.contains_key(&next) {
                    break;
                }
                fixed.insert(next, next_end);
                arc = next;
                tail = next_end;
            }
            // backward
            let mut tail = t;
            loop {
                let Some(prev_end) = straight(tail) else { break };
                let prev = self.arc_at(prev_end);
                if fixed.contains_key(&prev) {
                    break;
                }
                let prev_tail = Self::other_end(&ends, prev, prev_end);
                fixed.insert(prev, prev_tail);
                tail = prev_tail;
            }
        }
        self.tails = fixed;

        let incoming = |node: Node, port: usize, a: ArcId| -> bool { self.tails[&a] != End { node, port: port as u8 } };
        let crossings = self
            .classical
            .iter()
            .enumerate()
            .map(|(i, ps)| {
                let inc: [bool; 4] = std::array::from_fn(|p| incoming(Node::Classical(i), p, ps[p]));
                Crossing::from_ports(*ps, inc)
            })
            .collect();
        let virtuals = self
            .virtuals
            .iter()
            .enumerate()
            .map(|(i, ps)| {
                let inc = |p: usize| incoming(Node::Virtual(i), p, ps[p]);
                let (a, c) = if inc(0) { (ps[0], ps[2]) } else { (ps[2], ps[0]) };
                let (b, d) = if inc(1) { (ps[1], ps[3]) } else { (ps[3], ps[1]) };
                VirtualCrossing { ports: [a, b, c, d] }
            })
            .collect();
        VTangleDiagram::new(name, crossings, virtuals, self.boundary, self.loops)
    }
}

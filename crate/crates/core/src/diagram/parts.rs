//! Connected parts of the four-valent graph of a diagram, where virtual
//! crossings do not join their two strands.

use std::collections::BTreeMap;

use super::{ArcId, Node, VTangleDiagram};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectedPart {
    pub crossings: Vec<usize>,
    pub arcs: Vec<ArcId>,
    /// Virtual crossings one of whose strands belongs to this part.
    pub virtuals: Vec<usize>,
    /// True if the part touches no boundary point.
    pub fully_internal: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Niceness {
    Nice,
    NotNice,
    Unknown,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl VTangleDiagram {
    /// Parts ordered by their least arc id.
    pub fn connected_parts(&self) -> Vec<ConnectedPart> {
        let arcs: Vec<ArcId> = self.arcs().into_iter().collect();
        let index: BTreeMap<ArcId, usize> = arcs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let n = self.crossing_count();
        // vertices: arcs first, then crossings
        let mut uf = UnionFind((0..arcs.len() + n).collect());
        for (i, c) in self.crossings().iter().enumerate() {
            for a in c.ports() {
                uf.union(index[&a], arcs.len() + i);
            }
        }
        for v in self.virtuals() {
            uf.union(index[&v.ports[0]], index[&v.ports[2]]);
            uf.union(index[&v.ports[1]], index[&v.ports[3]]);
        }
        let mut parts: BTreeMap<usize, ConnectedPart> = BTreeMap::new();
        for (i, &a) in arcs.iter().enumerate() {
            let r = uf.find(i);
            let p = parts.entry(r).or_insert_with(|| ConnectedPart {
                crossings: vec![],
                arcs: vec![],
                virtuals: vec![],
                fully_internal: true,
            });
            p.arcs.push(a);
            if let Some((t, h)) = self.arc_ends(a) {
                for e in [t, h] {
                    match e.node {
                        Node::Boundary(_) => p.fully_internal = false,
                        Node::Virtual(v) if !p.virtuals.contains(&v) => p.virtuals.push(v),
                        _ => {}
                    }
                }
            }
        }
        for i in 0..n {
            let r = uf.find(arcs.len() + i);
            parts.get_mut(&r).expect("crossing has arcs").crossings.push(i);
        }
        let mut out: Vec<ConnectedPart> = parts.into_values().collect();
        for p in &mut out {
            p.virtuals.sort_unstable();
        }
        out.sort_by_key(|p| p.arcs[0]);
        out
    }

    /// Sufficient test for niceness: no virtual crossings, no boundary, or
    /// every virtual crossing sits inside fully internal parts.
    pub fn has_negligible_virtuals(&self) -> bool {
        if self.is_classical() || self.is_closed() {
            return true;
        }
        self.connected_parts().iter().all(|p| p.fully_internal || p.virtuals.is_empty())
    }
}

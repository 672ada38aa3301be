//! Embedded planar graphs given by a rotation system.
//!
//! A dart is an edge with a direction: dart `2e` runs from `ends[0]` to
//! `ends[1]` of edge `e`, dart `2e + 1` runs back. Faces are never stored;
//! they are recovered by walking darts with the rotation system.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    /// Incident `(neighbor, edge)` pairs in counter-clockwise order.
    pub neighbors: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub id: usize,
    pub ends: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// The two virtual boundary nodes, first one is the "left" node.
    pub virtual_pair: Option<[usize; 2]>,
}

#[inline]
pub fn twin(d: usize) -> usize {
    d ^ 1
}

#[inline]
pub fn edge_of(d: usize) -> usize {
    d >> 1
}

/// Dart-level view of the rotation system.
#[derive(Clone, Debug)]
pub struct Rotation {
    pub origin: Vec<usize>,
    /// Next dart counter-clockwise around the origin.
    pub next: Vec<usize>,
    pub prev: Vec<usize>,
}

/// Faces as cyclic dart sequences; every dart has its face on the left.
#[derive(Clone, Debug)]
pub struct Faces {
    pub face_of: Vec<usize>,
    pub darts: Vec<Vec<usize>>,
}

impl Faces {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Left and right face of edge `e` seen from `ends[0]`.
    pub fn sides(&self, e: usize) -> [usize; 2] {
        [self.face_of[2 * e], self.face_of[2 * e + 1]]
    }
}

impl EmbeddedGraph {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Builds a graph from vertex positions. Each edge carries, for each end,
    /// a point that fixes the direction in which the edge leaves that end;
    /// incident edges are sorted by that angle.
    pub fn from_geometry(
        positions: &[[f64; 2]],
        edges: &[([usize; 2], [[f64; 2]; 2])],
        virtual_pair: Option<[usize; 2]>,
    ) -> Self {
        let mut incident: Vec<Vec<(f64, usize, usize)>> = vec![Vec::new(); positions.len()];
        for (id, &(ends, toward)) in edges.iter().enumerate() {
            for s in 0..2 {
                let p = positions[ends[s]];
                let t = toward[s];
                let angle = (t[1] - p[1]).atan2(t[0] - p[0]);
                incident[ends[s]].push((angle, ends[1 - s], id));
            }
        }
        let vertices = incident
            .into_iter()
            .enumerate()
            .map(|(id, mut inc)| {
                inc.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
                Vertex {
                    id,
                    neighbors: inc.into_iter().map(|(_, n, e)| (n, e)).collect(),
                    pos: Some(positions[id]),
                }
            })
            .collect();
        let edges = edges
            .iter()
            .enumerate()
            .map(|(id, &(ends, _))| Edge { id, ends })
            .collect();
        EmbeddedGraph { vertices, edges, virtual_pair }
    }

    pub fn dart_from(&self, v: usize, e: usize) -> usize {
        let ends = self.edges[e].ends;
        if ends[0] == v {
            2 * e
        } else {
            debug_assert_eq!(ends[1], v);
            2 * e + 1
        }
    }

    pub fn target(&self, d: usize) -> usize {
        self.edges[edge_of(d)].ends[1 - (d & 1)]
    }

    pub fn origin(&self, d: usize) -> usize {
        self.edges[edge_of(d)].ends[d & 1]
    }

    pub fn rotation(&self) -> Rotation {
        let nd = 2 * self.edges.len();
        let mut origin = vec![usize::MAX; nd];
        let mut next = vec![usize::MAX; nd];
        let mut prev = vec![usize::MAX; nd];
        for v in &self.vertices {
            let darts: Vec<usize> = v.neighbors.iter().map(|&(_, e)| self.dart_from(v.id, e)).collect();
            let k = darts.len();
            for i in 0..k {
                let d = darts[i];
                origin[d] = v.id;
                next[d] = darts[(i + 1) % k];
                prev[d] = darts[(i + k - 1) % k];
            }
        }
        Rotation { origin, next, prev }
    }

    pub fn faces(&self) -> Faces {
        let rot = self.rotation();
        self.faces_with(&rot)
    }

    pub fn faces_with(&self, rot: &Rotation) -> Faces {
        let nd = rot.next.len();
        let mut face_of = vec![usize::MAX; nd];
        let mut darts = Vec::new();
        for start in 0..nd {
            if face_of[start] != usize::MAX {
                continue;
            }
            let f = darts.len();
            let mut cycle = Vec::new();
            let mut d = start;
            loop {
                face_of[d] = f;
                cycle.push(d);
                d = rot.prev[twin(d)];
                if d == start {
                    break;
                }
            }
            darts.push(cycle);
        }
        Faces { face_of, darts }
    }

    /// The unique edge joining the two virtual nodes.
    pub fn virtual_edge(&self) -> Result<usize> {
        let [a, b] = self
            .virtual_pair
            .ok_or_else(|| Error::Construction("graph has no virtual pair".into()))?;
        let found: Vec<usize> = self.vertices[a]
            .neighbors
            .iter()
            .filter(|&&(n, _)| n == b)
            .map(|&(_, e)| e)
            .collect();
        match found.as_slice() {
            [e] => Ok(*e),
            _ => Err(Error::Construction(format!(
                "virtual nodes must share exactly one edge, found {}",
                found.len()
            ))),
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &(n, _) in &self.vertices[v].neighbors {
                if !seen[n] {
                    seen[n] = true;
                    count += 1;
                    queue.push_back(n);
                }
            }
        }
        count == self.vertices.len()
    }

    /// Checks ids, rotation consistency, connectivity and Euler's formula.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Construction(m));
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id != i {
                return bad(format!("vertex {i} has id {}", v.id));
            }
        }
        let mut seen = vec![[0u8; 2]; self.edges.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if e.id != i {
                return bad(format!("edge {i} has id {}", e.id));
            }
            if e.ends[0] == e.ends[1] {
                return bad(format!("edge {i} is a loop"));
            }
            if e.ends.iter().any(|&v| v >= self.vertices.len()) {
                return bad(format!("edge {i} has an endpoint out of range"));
            }
        }
        for v in &self.vertices {
            for &(n, e) in &v.neighbors {
                if e >= self.edges.len() {
                    return bad(format!("vertex {} lists unknown edge {e}", v.id));
                }
                let ends = self.edges[e].ends;
                let s = if ends[0] == v.id {
                    0
                } else if ends[1] == v.id {
                    1
                } else {
                    return bad(format!("vertex {} lists non-incident edge {e}", v.id));
                };
                if ends[1 - s] != n {
                    return bad(format!("vertex {} has wrong neighbor for edge {e}", v.id));
                }
                seen[e][s] += 1;
            }
        }
        if let Some(e) = seen.iter().position(|c| *c != [1, 1]) {
            return bad(format!("edge {e} does not appear exactly once at each end"));
        }
        if !self.is_connected() {
            return bad("graph is disconnected".into());
        }
        let f = self.faces().len() as i64;
        let euler = self.vertices.len() as i64 - self.edges.len() as i64 + f;
        if euler != 2 {
            return bad(format!("Euler characteristic {euler} != 2"));
        }
        if let Some([a, b]) = self.virtual_pair {
            if a == b || a >= self.vertices.len() || b >= self.vertices.len() {
                return bad("invalid virtual pair".into());
            }
            self.virtual_edge()?;
        }
        Ok(())
    }

    /// Embedded dual: one vertex per face, one edge per primal edge.
    /// The dual virtual pair are the two faces beside the virtual edge.
    pub fn dual(&self) -> Result<EmbeddedGraph> {
        let ev = self.virtual_edge()?;
        let faces = self.faces();
        let mut vertices = Vec::with_capacity(faces.len());
        for (f, cycle) in faces.darts.iter().enumerate() {
            let mut neighbors = Vec::with_capacity(cycle.len());
            let mut acc = [0.0, 0.0];
            let mut have_pos = true;
            for &d in cycle {
                let e = edge_of(d);
                let other = faces.face_of[twin(d)];
                if other == f {
                    return Err(Error::Construction(format!("edge {e} is a bridge")));
                }
                neighbors.push((other, e));
                match self.vertices[self.origin(d)].pos {
                    Some(p) => {
                        acc[0] += p[0];
                        acc[1] += p[1];
                    }
                    None => have_pos = false,
                }
            }
            let k = cycle.len() as f64;
            vertices.push(Vertex {
                id: f,
                neighbors,
                pos: have_pos.then(|| [acc[0] / k, acc[1] / k]),
            });
        }
        let edges = (0..self.edges.len())
            .map(|e| Edge { id: e, ends: faces.sides(e) })
            .collect();
        let pair = faces.sides(ev);
        Ok(EmbeddedGraph { vertices, edges, virtual_pair: Some(pair) })
    }

    /// Shortest path lengths (in edges) from `src`, skipping `skip_edge`.
    pub fn bfs_distances(&self, src: usize, skip_edge: Option<usize>) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertices.len()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for &(n, e) in &self.vertices[v].neighbors {
                if Some(e) == skip_edge || dist[n] != usize::MAX {
                    continue;
                }
                dist[n] = dist[v] + 1;
                queue.push_back(n);
            }
        }
        dist
    }
}

/// Embedded-graph isomorphism, orientation-reversing maps allowed.
/// With `match_virtual`, the virtual pair must map onto the virtual pair.
pub fn isomorphic(g: &EmbeddedGraph, h: &EmbeddedGraph, match_virtual: bool) -> bool {
    if g.num_vertices() != h.num_vertices() || g.num_edges() != h.num_edges() {
        return false;
    }
    if g.num_edges() == 0 {
        return true;
    }
    let rg = g.rotation();
    let rh = h.rotation();
    let deg = |gr: &EmbeddedGraph, r: &Rotation, d: usize| gr.vertices[r.origin[d]].neighbors.len();
    let is_virtual = |gr: &EmbeddedGraph, v: usize| gr.virtual_pair.is_some_and(|p| p.contains(&v));
    if match_virtual && g.virtual_pair.is_some() != h.virtual_pair.is_some() {
        return false;
    }
    // Anchor on a dart leaving a lowest-degree vertex to limit the candidates.
    let d0 = (0..2 * g.num_edges()).min_by_key(|&d| (deg(g, &rg, d), d)).unwrap();
    let k0 = deg(g, &rg, d0);
    for mirror in [false, true] {
        for c in 0..2 * h.num_edges() {
            if deg(h, &rh, c) != k0 {
                continue;
            }
            if try_map(g, h, &rg, &rh, d0, c, mirror, match_virtual, &is_virtual) {
                return true;
            }
        }
    }
    false
}

#[allow(clippy::too_many_arguments)]
fn try_map(
    g: &EmbeddedGraph,
    h: &EmbeddedGraph,
    rg: &Rotation,
    rh: &Rotation,
    d0: usize,
    c0: usize,
    mirror: bool,
    match_virtual: bool,
    is_virtual: &dyn Fn(&EmbeddedGraph, usize) -> bool,
) -> bool {
    let nd = rg.next.len();
    let mut fwd = vec![usize::MAX; nd];
    let mut bwd = vec![usize::MAX; nd];
    let mut vmap = vec![usize::MAX; g.num_vertices()];
    let mut queue = VecDeque::new();
    let mut assign = |d: usize, c: usize, fwd: &mut Vec<usize>, bwd: &mut Vec<usize>, q: &mut VecDeque<usize>| -> bool {
        if fwd[d] != usize::MAX {
            return fwd[d] == c;
        }
        if bwd[c] != usize::MAX {
            return false;
        }
        let (vg, vh) = (rg.origin[d], rh.origin[c]);
        if vmap[vg] == usize::MAX {
            if g.vertices[vg].neighbors.len() != h.vertices[vh].neighbors.len() {
                return false;
            }
            if match_virtual && is_virtual(g, vg) != is_virtual(h, vh) {
                return false;
            }
            vmap[vg] = vh;
        } else if vmap[vg] != vh {
            return false;
        }
        fwd[d] = c;
        bwd[c] = d;
        q.push_back(d);
        true
    };
    if !assign(d0, c0, &mut fwd, &mut bwd, &mut queue) {
        return false;
    }
    while let Some(d) = queue.pop_front() {
        let c = fwd[d];
        let (cn, cp) = if mirror { (rh.prev[c], rh.next[c]) } else { (rh.next[c], rh.prev[c]) };
        let pairs = [(twin(d), twin(c)), (rg.next[d], cn), (rg.prev[d], cp)];
        for (x, y) in pairs {
            if !assign(x, y, &mut fwd, &mut bwd, &mut queue) {
                return false;
            }
        }
    }
    fwd.iter().all(|&c| c != usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A square with one diagonal, plus the virtual edge drawn outside.
    fn square_with_diagonal() -> EmbeddedGraph {
        let pos = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let seg = |a: usize, b: usize| ([a, b], [pos[b], pos[a]]);
        let edges = vec![seg(0, 1), seg(1, 2), seg(2, 3), seg(3, 0), seg(0, 2)];
        EmbeddedGraph::from_geometry(&pos, &edges, None)
    }

    #[test]
    fn euler_and_faces() {
        let g = square_with_diagonal();
        g.validate().unwrap();
        let f = g.faces();
        assert_eq!(f.len(), 3);
        let mut sizes: Vec<usize> = f.darts.iter().map(|c| c.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![3, 3, 4]);
    }

    #[test]
    fn interior_faces_run_counter_clockwise() {
        let g = square_with_diagonal();
        let f = g.faces();
        for cycle in &f.darts {
            let pts: Vec<[f64; 2]> = cycle.iter().map(|&d| g.vertices[g.origin(d)].pos.unwrap()).collect();
            let area: f64 = (0..pts.len())
                .map(|i| {
                    let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
                    a[0] * b[1] - a[1] * b[0]
                })
                .sum();
            // The outer face is the only clockwise one.
            if cycle.len() == 4 {
                assert!(area < 0.0);
            } else {
                assert!(area > 0.0);
            }
        }
    }

    #[test]
    fn isomorphism_detects_relabeling_and_mirror() {
        let g = square_with_diagonal();
        let mut h = g.clone();
        // Mirror: reverse every rotation.
        for v in &mut h.vertices {
            v.neighbors.reverse();
        }
        assert!(isomorphic(&g, &h, false));
        let pos = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let seg = |a: usize, b: usize| ([a, b], [pos[b], pos[a]]);
        let path = vec![seg(0, 1), seg(1, 2), seg(2, 3), seg(3, 0), seg(1, 3)];
        let k = EmbeddedGraph::from_geometry(&pos, &path, None);
        assert!(isomorphic(&g, &k, false));
        let cycle4: Vec<_> = vec![seg(0, 1), seg(1, 2), seg(2, 3), seg(3, 0)];
        let c = EmbeddedGraph::from_geometry(&pos, &cycle4, None);
        assert!(!isomorphic(&g, &c, false));
    }

    #[test]
    fn broken_rotation_fails_validation() {
        let mut g = square_with_diagonal();
        g.vertices[0].neighbors.pop();
        assert!(g.validate().is_err());
    }
}

//! Majorana (C4) representation of a surface code.
//!
//! Every qubit carries four Majorana modes, one per corner of its edge in the
//! embedding. For a qubit on edge `e` with tail `u`, head `v`, left face `f`
//! and right face `g` the slots are, clockwise,
//!
//! ```text
//!   slot 0 (u, f)   slot 1 (v, f)
//!   slot 3 (u, g)   slot 2 (v, g)
//! ```
//!
//! with `X = i c0 c1`, `S X = i c2 c3`, `Z = i c1 c2` and, on the `S = +1`
//! subspace, `Z = i c0 c3`. Each corner of the embedding joins the modes of
//! two neighbouring qubits by a link dimer; the slot of a corner qubit that
//! faces the virtual edge is an extra mode used by the logical dimers.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::code::{SurfaceCode, Topology};
use crate::error::{Error, Result};
use crate::graph::edge_of;

/// Oriented pair `(p, q)` standing for the operator `i c_p c_q`.
pub type Dimer = (usize, usize);

/// Logical basis used to close the open boundary faces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
    Y,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::Z, Basis::X, Basis::Y];

    fn index(self) -> usize {
        match self {
            Basis::Z => 0,
            Basis::X => 1,
            Basis::Y => 2,
        }
    }
}

#[inline]
pub fn mode(qubit: usize, slot: usize) -> usize {
    4 * qubit + slot
}

/// One corner of the embedding: the two qubits meeting there and the
/// stabilizer regions on either side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corner {
    /// `(qubit, slot)` before and after the corner in counter-clockwise order
    /// around `vertex`.
    pub ends: [(usize, usize); 2],
    pub vertex: usize,
    pub face: usize,
}

/// Qubit adjacency graph whose faces are the stabilizers.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntermediateGraph {
    pub num_qubits: usize,
    pub corners: Vec<Corner>,
    pub degree: Vec<usize>,
    /// Z-stabilizer faces as cyclic qubit sequences, in stabilizer order.
    pub z_faces: Vec<Vec<usize>>,
    pub x_faces: Vec<Vec<usize>>,
    /// `(qubit, slot)` of the extra mode at corners a, b, c, d.
    pub extra: [(usize, usize); 4],
}

impl IntermediateGraph {
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_qubits];
        for c in &self.corners {
            let (a, b) = (c.ends[0].0, c.ends[1].0);
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        adj
    }
}

fn slot_after(d: usize) -> usize {
    if d % 2 == 0 {
        0
    } else {
        2
    }
}

fn slot_before(d: usize) -> usize {
    if d % 2 == 0 {
        3
    } else {
        1
    }
}

/// Builds the intermediate graph: one edge per corner of the embedding that
/// does not touch the virtual edge.
pub fn build_intermediate_graph(code: &SurfaceCode) -> Result<IntermediateGraph> {
    let g = &code.embedding;
    let topo = Topology::new(g)?;
    let n = topo.num_qubits();
    let ev = topo.virtual_edge;
    let mut corners = Vec::new();
    let mut degree = vec![0; n];
    for x in 0..topo.rot.next.len() {
        let y = topo.rot.next[x];
        let (ex, ey) = (edge_of(x), edge_of(y));
        if ex == ev || ey == ev {
            continue;
        }
        let (qx, qy) = (topo.qubit_of_edge[ex].unwrap(), topo.qubit_of_edge[ey].unwrap());
        if qx == qy {
            return Err(Error::Construction(format!("vertex {} has degree one", topo.rot.origin[x])));
        }
        degree[qx] += 1;
        degree[qy] += 1;
        corners.push(Corner {
            ends: [(qx, slot_after(x)), (qy, slot_before(y))],
            vertex: topo.rot.origin[x],
            face: topo.faces.face_of[x],
        });
    }
    let [v1, v2] = topo.v_virtual;
    let [f1, f2] = topo.f_virtual;
    let extra_at = |v: usize, f: usize| -> Result<(usize, usize)> {
        let q = topo.corner_at(g, v, f)?;
        let d = g.dart_from(v, ev);
        // The corner qubit follows the virtual dart when `f` is left of it.
        let slot = if topo.faces.face_of[d] == f {
            slot_before(topo.rot.next[d])
        } else {
            slot_after(topo.rot.prev[d])
        };
        Ok((q, slot))
    };
    let extra = [extra_at(v1, f1)?, extra_at(v1, f2)?, extra_at(v2, f1)?, extra_at(v2, f2)?];

    let q = |d: usize| topo.qubit_of_edge[edge_of(d)];
    let mut z_faces = Vec::new();
    for v in 0..g.num_vertices() {
        if topo.zstab_of_vertex[v].is_some() {
            z_faces.push(g.vertices[v].neighbors.iter().filter_map(|&(_, e)| topo.qubit_of_edge[e]).collect());
        }
    }
    let mut x_faces = Vec::new();
    for (f, cycle) in topo.faces.darts.iter().enumerate() {
        if topo.xstab_of_face[f].is_some() {
            x_faces.push(cycle.iter().filter_map(|&d| q(d)).collect());
        }
    }
    Ok(IntermediateGraph { num_qubits: n, corners, degree, z_faces, x_faces, extra })
}

/// Product of Majorana operators `i^phase c_{m_1} ... c_{m_k}` with sorted,
/// distinct modes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub phase: u8,
    pub modes: Vec<usize>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { phase: 0, modes: Vec::new() }
    }

    pub fn dimer((p, q): Dimer) -> Self {
        Monomial::one().mul(&Monomial { phase: 1, modes: vec![p] }).mul(&Monomial { phase: 0, modes: vec![q] })
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut swaps = 0usize;
        for &y in &other.modes {
            swaps += self.modes.len() - self.modes.partition_point(|&x| x <= y);
        }
        let mut merged: Vec<usize> = Vec::with_capacity(self.modes.len() + other.modes.len());
        let (mut i, mut j) = (0, 0);
        while i < self.modes.len() || j < other.modes.len() {
            let take_left = j == other.modes.len() || (i < self.modes.len() && self.modes[i] <= other.modes[j]);
            let m = if take_left {
                i += 1;
                self.modes[i - 1]
            } else {
                j += 1;
                other.modes[j - 1]
            };
            if merged.last() == Some(&m) {
                merged.pop();
            } else {
                merged.push(m);
            }
        }
        let phase = (self.phase + other.phase + if swaps % 2 == 1 { 2 } else { 0 }) % 4;
        Monomial { phase, modes: merged }
    }

    /// `Some(+1 | -1)` if the monomial is a real scalar.
    pub fn sign(&self) -> Option<i32> {
        match (self.modes.is_empty(), self.phase) {
            (true, 0) => Some(1),
            (true, 2) => Some(-1),
            _ => None,
        }
    }
}

/// A face of the Majorana graph as a counter-clockwise cycle of modes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MajoranaFace {
    pub kind: FaceKind,
    pub modes: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceKind {
    Qubit(usize),
    ZStabilizer(usize),
    XStabilizer(usize),
    /// Boundary face closed by the logical dimers of the given basis.
    Logical(Basis),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MajoranaGraph {
    pub num_qubits: usize,
    pub mode_count: usize,
    /// `qubit_modes[a] = [c1, c2, c3, c4]`.
    pub qubit_modes: Vec<[usize; 4]>,
    pub link_dimers: Vec<Dimer>,
    /// Indexed by `Basis::{Z, X, Y}`.
    pub logical_dimers: [[Dimer; 2]; 3],
    /// Extra modes of corner qubits a, b, c, d.
    pub extra_modes: [usize; 4],
    pub faces: Vec<MajoranaFace>,
    /// Qubits in measurement order.
    pub order: Vec<usize>,
}

/// Pauli dimers of one qubit: X, Z (head side), S X, Z (tail side).
pub fn pauli_dimers(qubit: usize) -> [Dimer; 4] {
    let m = |s| mode(qubit, s);
    [(m(0), m(1)), (m(1), m(2)), (m(2), m(3)), (m(0), m(3))]
}

struct Region {
    /// Pauli dimers of the qubits on the region boundary.
    paulis: Vec<Dimer>,
    /// Indices into the corner list, in counter-clockwise order.
    links: Vec<usize>,
    /// Mode cycle, counter-clockwise.
    modes: Vec<usize>,
}

fn z_region(topo: &Topology, corner_at_dart: &[Option<usize>], v: usize, g: &crate::graph::EmbeddedGraph) -> Region {
    let mut r = Region { paulis: Vec::new(), links: Vec::new(), modes: Vec::new() };
    let darts: Vec<usize> = g.vertices[v].neighbors.iter().map(|&(_, e)| g.dart_from(v, e)).collect();
    // Start right after the virtual edge so that open regions are contiguous.
    let start = darts.iter().position(|&d| edge_of(d) == topo.virtual_edge).map_or(0, |i| i + 1);
    for k in 0..darts.len() {
        let d = darts[(start + k) % darts.len()];
        let Some(q) = topo.qubit_of_edge[edge_of(d)] else { continue };
        let (before, after) = (mode(q, slot_before(d)), mode(q, slot_after(d)));
        r.modes.push(before);
        r.modes.push(after);
        r.paulis.push(if d % 2 == 0 { (after, before) } else { (before, after) });
        if let Some(c) = corner_at_dart[d] {
            r.links.push(c);
        }
    }
    r
}

fn x_region(topo: &Topology, corner_at_dart: &[Option<usize>], f: usize) -> Region {
    let mut r = Region { paulis: Vec::new(), links: Vec::new(), modes: Vec::new() };
    let cycle = &topo.faces.darts[f];
    let start = cycle.iter().position(|&d| edge_of(d) == topo.virtual_edge).map_or(0, |i| i + 1);
    for k in 0..cycle.len() {
        let d = cycle[(start + k) % cycle.len()];
        let Some(q) = topo.qubit_of_edge[edge_of(d)] else { continue };
        let (a, b) = if d % 2 == 0 { (mode(q, 0), mode(q, 1)) } else { (mode(q, 2), mode(q, 3)) };
        r.modes.push(a);
        r.modes.push(b);
        r.paulis.push((a, b));
        // The corner at the head of `d` inside `f` sits between the next
        // dart of the face and the twin of `d`.
        let next = topo.rot.prev[d ^ 1];
        if let Some(c) = corner_at_dart[next] {
            r.links.push(c);
        }
    }
    r
}

fn product(dimers: impl IntoIterator<Item = Dimer>) -> Monomial {
    dimers.into_iter().fold(Monomial::one(), |acc, d| acc.mul(&Monomial::dimer(d)))
}

/// Multiplies `m` by link dimers until only extra modes remain.
fn reduce(mut m: Monomial, link_of_mode: &[Option<usize>], links: &[Dimer]) -> Monomial {
    while let Some(&x) = m.modes.iter().find(|&&x| link_of_mode[x].is_some()) {
        m = m.mul(&Monomial::dimer(links[link_of_mode[x].unwrap()]));
    }
    m
}

/// Orientation making `phase * c_x c_y` equal `+1`.
fn orient(m: &Monomial) -> Result<Dimer> {
    match (m.modes.as_slice(), m.phase) {
        (&[x, y], 1) => Ok((x, y)),
        (&[x, y], 3) => Ok((y, x)),
        _ => Err(Error::Construction(format!("logical realization reduced to {m:?}"))),
    }
}

pub fn build_majorana(ig: &IntermediateGraph, code: &SurfaceCode) -> Result<MajoranaGraph> {
    let g = &code.embedding;
    let topo = Topology::new(g)?;
    let n = ig.num_qubits;
    let nm = 4 * n;
    let mut corner_at_dart = vec![None; topo.rot.next.len()];
    {
        let mut k = 0;
        for (x, slot) in corner_at_dart.iter_mut().enumerate() {
            let y = topo.rot.next[x];
            if edge_of(x) == topo.virtual_edge || edge_of(y) == topo.virtual_edge {
                continue;
            }
            *slot = Some(k);
            k += 1;
        }
    }
    let mut links: Vec<Dimer> = ig
        .corners
        .iter()
        .map(|c| (mode(c.ends[0].0, c.ends[0].1), mode(c.ends[1].0, c.ends[1].1)))
        .collect();
    let mut link_of_mode = vec![None; nm];
    for (k, &(p, q)) in links.iter().enumerate() {
        link_of_mode[p] = Some(k);
        link_of_mode[q] = Some(k);
    }
    let extra_modes = ig.extra.map(|(q, s)| mode(q, s));
    if extra_modes.iter().any(|&m| link_of_mode[m].is_some()) || link_of_mode.iter().filter(|l| l.is_none()).count() != 4 {
        return Err(Error::Construction("corner modes are not exactly the four extra modes".into()));
    }

    let mut regions: Vec<(FaceKind, Region)> = Vec::new();
    for v in 0..g.num_vertices() {
        if let Some(k) = topo.zstab_of_vertex[v] {
            regions.push((FaceKind::ZStabilizer(k), z_region(&topo, &corner_at_dart, v, g)));
        }
    }
    for f in 0..topo.faces.len() {
        if let Some(k) = topo.xstab_of_face[f] {
            regions.push((FaceKind::XStabilizer(k), x_region(&topo, &corner_at_dart, f)));
        }
    }

    // Fix link orientations face by face along a BFS tree rooted at the
    // boundary, leaves first, so every stabilizer reads +1.
    let mut owner: Vec<Vec<usize>> = vec![Vec::new(); links.len()];
    for (r, (_, reg)) in regions.iter().enumerate() {
        for &c in &reg.links {
            owner[c].push(r);
        }
    }
    let root = regions.len();
    let other = |c: usize, r: usize| -> usize { owner[c].iter().copied().find(|&s| s != r).unwrap_or(root) };
    let mut parent_link = vec![usize::MAX; regions.len()];
    let mut seen = vec![false; regions.len() + 1];
    let mut bfs = Vec::new();
    let mut queue = VecDeque::new();
    seen[root] = true;
    for c in 0..links.len() {
        if owner[c].len() == 1 && !seen[owner[c][0]] {
            seen[owner[c][0]] = true;
            parent_link[owner[c][0]] = c;
            queue.push_back(owner[c][0]);
        }
    }
    while let Some(r) = queue.pop_front() {
        bfs.push(r);
        for &c in &regions[r].1.links {
            let s = other(c, r);
            if !seen[s] {
                seen[s] = true;
                parent_link[s] = c;
                queue.push_back(s);
            }
        }
    }
    if bfs.len() != regions.len() {
        return Err(Error::Construction("stabilizer faces not connected to the boundary".into()));
    }
    let sign = |reg: &Region, links: &[Dimer]| -> Result<i32> {
        product(reg.paulis.iter().copied().chain(reg.links.iter().map(|&c| links[c])))
            .sign()
            .ok_or_else(|| Error::Construction("stabilizer face does not close".into()))
    };
    for &r in bfs.iter().rev() {
        if sign(&regions[r].1, &links)? < 0 {
            let c = parent_link[r];
            links[c] = (links[c].1, links[c].0);
        }
    }

    // Open boundary regions: V1, V2 (Z type) and F1, F2 (X type).
    let [v1, v2] = topo.v_virtual;
    let [f1, f2] = topo.f_virtual;
    let zr = [z_region(&topo, &corner_at_dart, v1, g), z_region(&topo, &corner_at_dart, v2, g)];
    let xr = [x_region(&topo, &corner_at_dart, f1), x_region(&topo, &corner_at_dart, f2)];
    let realize = |m: Monomial| orient(&reduce(m, &link_of_mode, &links));
    let zl = |k: usize| product(zr[k].paulis.iter().copied());
    let xl = |k: usize| product(xr[k].paulis.iter().copied());
    let i_unit = Monomial { phase: 1, modes: Vec::new() };
    let logical_dimers = [
        [realize(zl(0))?, realize(zl(1))?],
        [realize(xl(0))?, realize(xl(1))?],
        [realize(i_unit.mul(&xl(0)).mul(&zl(0)))?, realize(i_unit.mul(&xl(0)).mul(&zl(1)))?],
    ];

    let mut faces = Vec::new();
    for q in 0..n {
        // Counter-clockwise traversal of the clockwise slot order.
        faces.push(MajoranaFace { kind: FaceKind::Qubit(q), modes: vec![mode(q, 0), mode(q, 3), mode(q, 2), mode(q, 1)] });
    }
    for (kind, reg) in regions {
        faces.push(MajoranaFace { kind, modes: reg.modes });
    }
    for reg in zr.into_iter() {
        faces.push(MajoranaFace { kind: FaceKind::Logical(Basis::Z), modes: reg.modes });
    }
    for reg in xr.into_iter() {
        faces.push(MajoranaFace { kind: FaceKind::Logical(Basis::X), modes: reg.modes });
    }

    Ok(MajoranaGraph {
        num_qubits: n,
        mode_count: nm,
        qubit_modes: (0..n).map(|q| [0, 1, 2, 3].map(|s| mode(q, s))).collect(),
        link_dimers: links,
        logical_dimers,
        extra_modes,
        faces,
        order: measurement_order(ig),
    })
}

/// Reverse breadth-first order from qubit 0: the qubits not yet measured
/// always form a connected subgraph.
pub fn measurement_order(ig: &IntermediateGraph) -> Vec<usize> {
    let adj = ig.neighbors();
    let mut seen = vec![false; ig.num_qubits];
    let mut order = Vec::with_capacity(ig.num_qubits);
    let mut queue = VecDeque::new();
    if ig.num_qubits > 0 {
        seen[0] = true;
        queue.push_back(0);
    }
    while let Some(q) = queue.pop_front() {
        order.push(q);
        for &r in &adj[q] {
            if !seen[r] {
                seen[r] = true;
                queue.push_back(r);
            }
        }
    }
    order.reverse();
    order
}

impl MajoranaGraph {
    pub fn logical(&self, basis: Basis) -> [Dimer; 2] {
        self.logical_dimers[basis.index()]
    }

    /// Link dimers followed by the logical dimers of `basis`.
    pub fn initial_matching(&self, basis: Basis) -> Vec<Dimer> {
        let mut m = self.link_dimers.clone();
        m.extend_from_slice(&self.logical(basis));
        m
    }

    /// Orientation of every edge: Pauli dimers, links and the logical dimers
    /// of the Z and X bases.
    pub fn orientation(&self) -> HashMap<(usize, usize), Dimer> {
        let mut map = HashMap::new();
        let mut add = |d: Dimer| {
            map.insert((d.0.min(d.1), d.0.max(d.1)), d);
        };
        for q in 0..self.num_qubits {
            pauli_dimers(q).into_iter().for_each(&mut add);
        }
        self.link_dimers.iter().copied().for_each(&mut add);
        self.logical(Basis::Z).into_iter().for_each(&mut add);
        self.logical(Basis::X).into_iter().for_each(&mut add);
        map
    }

    /// Number of clockwise edges of every face; a face closed by a logical
    /// dimer of the matching basis includes that dimer.
    pub fn clockwise_counts(&self) -> Vec<(FaceKind, usize)> {
        let orient = self.orientation();
        self.faces
            .iter()
            .map(|f| {
                let k = f.modes.len();
                let cw = (0..k)
                    .filter(|&i| {
                        let (a, b) = (f.modes[i], f.modes[(i + 1) % k]);
                        orient.get(&(a.min(b), a.max(b))).map_or(false, |&(p, _)| p == b)
                    })
                    .count();
                (f.kind, cw)
            })
            .collect()
    }

    /// True if every face has an odd number of clockwise edges.
    pub fn verify_kasteleyn(&self) -> bool {
        self.clockwise_counts().iter().all(|&(_, c)| c % 2 == 1)
    }

    /// Reverses one link dimer; used for negative controls.
    pub fn flip_link(&mut self, k: usize) {
        let (p, q) = self.link_dimers[k];
        self.link_dimers[k] = (q, p);
    }
}

/// Intermediate graph, Majorana graph and measurement order for `code`.
pub fn encode(code: &SurfaceCode) -> Result<MajoranaGraph> {
    let ig = build_intermediate_graph(code)?;
    build_majorana(&ig, code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{generate_code, LatticeFamily};

    #[test]
    fn monomial_anticommutation() {
        let a = Monomial { phase: 0, modes: vec![1] };
        let b = Monomial { phase: 0, modes: vec![0] };
        assert_eq!(a.mul(&b), Monomial { phase: 2, modes: vec![0, 1] });
        assert_eq!(a.mul(&a), Monomial::one());
        let d = Monomial::dimer((3, 5));
        assert_eq!(d.mul(&d).sign(), Some(1));
        assert_eq!(Monomial::dimer((5, 3)), Monomial { phase: 3, modes: vec![3, 5] });
    }

    #[test]
    fn square_three_intermediate_graph() {
        let code = generate_code(LatticeFamily::Square, 3).unwrap();
        let ig = build_intermediate_graph(&code).unwrap();
        assert_eq!(ig.degree.iter().filter(|&&d| d == 3).count(), 4);
        assert!(ig.degree.iter().all(|&d| d == 3 || d == 4));
        let mut corners: Vec<usize> = ig.extra.iter().map(|e| e.0).collect();
        corners.sort_unstable();
        let mut expect = code.corner_qubits.to_vec();
        expect.sort_unstable();
        assert_eq!(corners, expect);
    }

    #[test]
    fn stabilizer_regions_close() {
        let code = generate_code(LatticeFamily::Hexagonal, 3).unwrap();
        let m = encode(&code).unwrap();
        assert!(m.verify_kasteleyn(), "{:?}", m.clockwise_counts());
    }

    #[test]
    fn kasteleyn_all_families() {
        for fam in LatticeFamily::ALL {
            for size in fam.small_sizes() {
                let code = generate_code(fam, size).unwrap();
                let m = encode(&code).unwrap();
                assert!(m.verify_kasteleyn(), "{fam} {size}");
                let counts = m.clockwise_counts();
                let stabs = counts.iter().filter(|(k, _)| matches!(k, FaceKind::ZStabilizer(_) | FaceKind::XStabilizer(_))).count();
                assert_eq!(stabs, code.num_x() + code.num_z());
            }
        }
    }
}

//! Lattice families: periodic tilings cut to a rectangular patch.
//!
//! Vertices strictly inside the window are kept. An edge leaving through
//! the left (right) side is re-attached to the virtual node V1 (V2), edges
//! leaving through the top or bottom are dropped. V1 and V2 are joined by
//! the virtual edge, drawn below the patch.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::code::{build_named_code, SurfaceCode};
use crate::error::{Error, Result};
use crate::graph::{edge_of, twin, Edge, EmbeddedGraph, Rotation, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeFamily {
    Square,
    Hexagonal,
    Kagome,
    TriHex,
    DualHexagonal,
    DualKagome,
    DualTriHex,
    DoublyOdd,
}

impl LatticeFamily {
    pub const ALL: [LatticeFamily; 8] = [
        LatticeFamily::Square,
        LatticeFamily::Hexagonal,
        LatticeFamily::Kagome,
        LatticeFamily::TriHex,
        LatticeFamily::DualHexagonal,
        LatticeFamily::DualKagome,
        LatticeFamily::DualTriHex,
        LatticeFamily::DoublyOdd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LatticeFamily::Square => "square",
            LatticeFamily::Hexagonal => "hexagonal",
            LatticeFamily::Kagome => "kagome",
            LatticeFamily::TriHex => "tri-hex",
            LatticeFamily::DualHexagonal => "dual-hexagonal",
            LatticeFamily::DualKagome => "dual-kagome",
            LatticeFamily::DualTriHex => "dual-tri-hex",
            LatticeFamily::DoublyOdd => "doubly-odd",
        }
    }

    /// Two smallest valid sizes.
    pub fn small_sizes(self) -> [usize; 2] {
        match self.primal().unwrap_or(self) {
            LatticeFamily::Kagome => [4, 6],
            LatticeFamily::TriHex => [5, 7],
            _ => [3, 5],
        }
    }

    /// The family whose patch this one is the dual of.
    pub fn primal(self) -> Option<LatticeFamily> {
        match self {
            LatticeFamily::DualHexagonal => Some(LatticeFamily::Hexagonal),
            LatticeFamily::DualKagome => Some(LatticeFamily::Kagome),
            LatticeFamily::DualTriHex => Some(LatticeFamily::TriHex),
            _ => None,
        }
    }
}

impl fmt::Display for LatticeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LatticeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LatticeFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown lattice family '{s}'")))
    }
}

/// A doubly periodic planar graph.
#[derive(Clone, Debug)]
pub struct Tiling {
    pub a1: [f64; 2],
    pub a2: [f64; 2],
    pub sites: Vec<[f64; 2]>,
    /// `(u, v, di, dj)`: site `u` of cell `(i, j)` joins site `v` of cell
    /// `(i + di, j + dj)`.
    pub bonds: Vec<(usize, usize, i64, i64)>,
}

/// Axis-aligned open rectangle `x0 < x < x1`, `y0 < y < y1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Tiling {
    /// Square lattice rotated by 45 degrees; vertices at half-integer points
    /// `(a + 1/2, b + 1/2)` with `a + b` even.
    pub fn rotated_square() -> Tiling {
        Tiling {
            a1: [2.0, 0.0],
            a2: [1.0, 1.0],
            sites: vec![[0.5, 0.5]],
            bonds: vec![(0, 0, 0, 1), (0, 0, 1, -1)],
        }
    }

    /// Honeycomb with vertical bonds (zigzag rows).
    pub fn honeycomb() -> Tiling {
        let s = 3f64.sqrt();
        Tiling {
            a1: [s, 0.0],
            a2: [s / 2.0, 1.5],
            sites: vec![[0.0, 0.0], [0.0, 1.0]],
            bonds: vec![(0, 1, 0, 0), (0, 1, 0, -1), (0, 1, 1, -1)],
        }
    }

    /// Kagome: the bond midpoints of a triangular lattice.
    pub fn kagome() -> Tiling {
        let h = 3f64.sqrt();
        Tiling {
            a1: [2.0, 0.0],
            a2: [1.0, h],
            sites: vec![[0.0, 0.0], [1.0, 0.0], [0.5, h / 2.0]],
            bonds: vec![(0, 1, 0, 0), (1, 2, 0, 0), (2, 0, 0, 0), (1, 0, 1, 0), (2, 0, 0, 1), (2, 1, -1, 1)],
        }
    }

    /// Truncated hexagonal tiling (3.12.12): every honeycomb vertex becomes
    /// a small triangle.
    pub fn tri_hex() -> Tiling {
        let s = 3f64.sqrt();
        let t = 0.3;
        let a = [0.0, 0.0];
        let b = [0.0, 1.0];
        let up = [0.0, 1.0];
        let dl = [-s / 2.0, -0.5];
        let dr = [s / 2.0, -0.5];
        let at = |p: [f64; 2], d: [f64; 2], sign: f64| [p[0] + sign * t * d[0], p[1] + sign * t * d[1]];
        Tiling {
            a1: [s, 0.0],
            a2: [s / 2.0, 1.5],
            // A-triangle: up, down-left, down-right; B-triangle mirrored.
            sites: vec![at(a, up, 1.0), at(a, dl, 1.0), at(a, dr, 1.0), at(b, up, -1.0), at(b, dl, -1.0), at(b, dr, -1.0)],
            bonds: vec![
                (0, 1, 0, 0),
                (1, 2, 0, 0),
                (2, 0, 0, 0),
                (3, 4, 0, 0),
                (4, 5, 0, 0),
                (5, 3, 0, 0),
                (0, 3, 0, 0),
                (1, 4, 0, -1),
                (2, 5, 1, -1),
            ],
        }
    }

    /// Self-dual tiling by triangles and pentagons with vertex degrees 3
    /// and 5. Start from the square lattice, add the anti-diagonal in every
    /// face `(x + 1/2, y + 1/2)` with `x = y (mod 3)`, and split every vertex
    /// with `x = y (mod 3)` into an (E, N) and a (W, S) half joined by a
    /// new edge.
    pub fn doubly_odd() -> Tiling {
        let d = 0.2;
        Tiling {
            a1: [3.0, 0.0],
            a2: [1.0, 1.0],
            sites: vec![[d, d], [-d, -d], [1.0, 0.0], [2.0, 0.0]],
            bonds: vec![
                (0, 2, 0, 0),
                (2, 3, 0, 0),
                (3, 1, 1, 0),
                (0, 3, -1, 1),
                (2, 1, 0, 1),
                (3, 2, 0, 1),
                (2, 3, -1, 1),
                (0, 1, 0, 0),
            ],
        }
    }

    /// The same tiling turned by a quarter turn counter-clockwise.
    pub fn rotated90(&self) -> Tiling {
        let r = |p: [f64; 2]| [-p[1], p[0]];
        Tiling {
            a1: r(self.a1),
            a2: r(self.a2),
            sites: self.sites.iter().map(|&p| r(p)).collect(),
            bonds: self.bonds.clone(),
        }
    }

    fn position(&self, i: i64, j: i64, s: usize) -> [f64; 2] {
        let (fi, fj) = (i as f64, j as f64);
        [
            fi * self.a1[0] + fj * self.a2[0] + self.sites[s][0],
            fi * self.a1[1] + fj * self.a2[1] + self.sites[s][1],
        ]
    }

    /// All tiling vertices inside `[x0, x1] x [y0, y1]` and the bonds among
    /// them, as a straight-line embedded graph. Keys are `(i, j, site)`.
    pub fn chunk(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> (EmbeddedGraph, Vec<(i64, i64, usize)>) {
        let det = self.a1[0] * self.a2[1] - self.a1[1] * self.a2[0];
        let (mut imin, mut imax, mut jmin, mut jmax) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for c in [[x0, y0], [x1, y0], [x0, y1], [x1, y1]] {
            let fi = (c[0] * self.a2[1] - c[1] * self.a2[0]) / det;
            let fj = (self.a1[0] * c[1] - self.a1[1] * c[0]) / det;
            imin = imin.min(fi.floor() as i64 - 2);
            imax = imax.max(fi.ceil() as i64 + 2);
            jmin = jmin.min(fj.floor() as i64 - 2);
            jmax = jmax.max(fj.ceil() as i64 + 2);
        }
        let mut verts: Vec<((i64, i64, usize), [f64; 2])> = Vec::new();
        for i in imin..=imax {
            for j in jmin..=jmax {
                for s in 0..self.sites.len() {
                    let p = self.position(i, j, s);
                    if p[0] >= x0 && p[0] <= x1 && p[1] >= y0 && p[1] <= y1 {
                        verts.push(((i, j, s), p));
                    }
                }
            }
        }
        verts.sort_by(|a, b| a.1[1].total_cmp(&b.1[1]).then(a.1[0].total_cmp(&b.1[0])));
        let index: HashMap<(i64, i64, usize), usize> = verts.iter().enumerate().map(|(k, v)| (v.0, k)).collect();
        let positions: Vec<[f64; 2]> = verts.iter().map(|v| v.1).collect();
        let mut edges = Vec::new();
        for (k, &((i, j, u), _)) in verts.iter().enumerate() {
            for &(bu, bv, di, dj) in &self.bonds {
                if bu != u {
                    continue;
                }
                if let Some(&m) = index.get(&(i + di, j + dj, bv)) {
                    edges.push(([k, m], [positions[m], positions[k]]));
                }
            }
        }
        let g = EmbeddedGraph::from_geometry(&positions, &edges, None);
        (g, verts.into_iter().map(|v| v.0).collect())
    }

    /// Cuts the tiling to the open rectangle `w`: exterior vertices beside
    /// the left (right) side become V1 (V2), the rest are deleted.
    pub fn cut(&self, w: &Window) -> Option<EmbeddedGraph> {
        let side = |p: [f64; 2], _| {
            if p[0] <= w.x0 {
                Side::Left
            } else if p[0] >= w.x1 {
                Side::Right
            } else if p[1] >= w.y1 {
                Side::Top
            } else if p[1] <= w.y0 {
                Side::Bottom
            } else {
                Side::Keep
            }
        };
        // A bond leaving through a side attaches only if it crosses that
        // side strictly between the corners.
        let attach = |a: [f64; 2], b: [f64; 2]| {
            if b[0] > w.x0 && b[0] < w.x1 {
                return true;
            }
            let x = if b[0] <= w.x0 { w.x0 } else { w.x1 };
            let y = a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0]);
            y > w.y0 && y < w.y1
        };
        self.cut_region(w, side, attach)
    }

    /// Cuts out the vertices classified `Keep`. The `Left` and `Right`
    /// exteriors are contracted to V1 and V2, `Top` and `Bottom` are deleted,
    /// and the virtual edge runs through the bottom exterior. A bond from a
    /// kept vertex at `a` to a kept or contracted vertex at `b` survives only
    /// when `attach(a, b)` holds. `frame` bounds the kept region. Returns `None`
    /// if the result is not a valid patch.
    pub fn cut_region(
        &self,
        frame: &Window,
        side: impl Fn([f64; 2], (i64, i64, usize)) -> Side,
        attach: impl Fn([f64; 2], [f64; 2]) -> bool,
    ) -> Option<EmbeddedGraph> {
        let m = 4.0 + self.a1[0].abs().max(self.a2[0].abs()) + self.a1[1].abs().max(self.a2[1].abs());
        let (chunk, keys) = self.chunk(frame.x0 - m, frame.x1 + m, frame.y0 - m, frame.y1 + m);
        let n = chunk.num_vertices();
        let pos = |v: usize| chunk.vertices[v].pos.unwrap();
        let mut sides: Vec<Side> = (0..n).map(|v| side(pos(v), keys[v])).collect();
        let rot = chunk.rotation();

        let usable = |sides: &[Side], a: usize, b: usize| match sides[b] {
            Side::Keep | Side::Left | Side::Right => attach(pos(a), pos(b)),
            _ => false,
        };
        // Prune kept vertices left with fewer than two usable bonds.
        let mut pruned = vec![false; n];
        loop {
            let mut changed = false;
            for v in 0..n {
                if sides[v] != Side::Keep {
                    continue;
                }
                let deg = chunk.vertices[v].neighbors.iter().filter(|&&(u, _)| usable(&sides, v, u)).count();
                if deg < 2 {
                    sides[v] = Side::Top;
                    pruned[v] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        let kept: Vec<usize> = (0..n).filter(|&v| sides[v] == Side::Keep).collect();
        if kept.is_empty() {
            return None;
        }
        let mut new_id = vec![usize::MAX; n];
        for (k, &v) in kept.iter().enumerate() {
            new_id[v] = k;
        }
        let v1 = kept.len();
        let v2 = v1 + 1;

        let mut edges: Vec<Edge> = Vec::new();
        let mut edge_of_chunk: HashMap<usize, usize> = HashMap::new();
        let endpoint = |v: usize| match sides[v] {
            Side::Keep => Some(new_id[v]),
            Side::Left => Some(v1),
            Side::Right => Some(v2),
            _ => None,
        };
        for ce in &chunk.edges {
            let [a, b] = ce.ends;
            let ok = match (sides[a], sides[b]) {
                (Side::Keep, _) => usable(&sides, a, b),
                (_, Side::Keep) => usable(&sides, b, a),
                _ => false,
            };
            if ok {
                edge_of_chunk.insert(ce.id, edges.len());
                edges.push(Edge { id: edges.len(), ends: [endpoint(a)?, endpoint(b)?] });
            }
        }
        let ev = edges.len();
        edges.push(Edge { id: ev, ends: [v1, v2] });

        let mut vertices: Vec<Vertex> = kept
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let neighbors = chunk.vertices[v]
                    .neighbors
                    .iter()
                    .filter_map(|&(u, ce)| Some((endpoint(u)?, *edge_of_chunk.get(&ce)?)))
                    .collect();
                Vertex { id: k, neighbors, pos: chunk.vertices[v].pos }
            })
            .collect();

        let ym = 0.5 * (frame.y0 + frame.y1);
        let span = (frame.x1 - frame.x0) + (frame.y1 - frame.y0);
        for (vid, region, x) in [(v1, Side::Left, frame.x0 - span), (v2, Side::Right, frame.x1 + span)] {
            let darts = contracted_rotation(&chunk, &rot, &sides, region)?;
            let kind = |d: usize| match sides[chunk.target(d)] {
                Side::Keep if edge_of_chunk.contains_key(&edge_of(d)) => Some(Side::Keep),
                s @ (Side::Top | Side::Bottom) if !pruned[chunk.target(d)] => Some(s),
                _ => None,
            };
            // The virtual edge goes between the kept run and the bottom run.
            let marked: Vec<(usize, Side)> =
                darts.iter().enumerate().filter_map(|(i, &d)| Some((i, kind(d)?))).collect();
            let k = marked.len();
            let mut slots = (0..k).filter_map(|j| {
                let (a, b) = (marked[j], marked[(j + 1) % k]);
                match (a.1, b.1) {
                    (Side::Keep, Side::Bottom) | (Side::Bottom, Side::Keep) => Some(a.0 + 1),
                    _ => None,
                }
            });
            let slot = slots.next()?;
            if slots.next().is_some() {
                return None;
            }
            let other = if vid == v1 { v2 } else { v1 };
            let mut neighbors = Vec::new();
            for (i, &d) in darts.iter().enumerate() {
                if kind(d) == Some(Side::Keep) {
                    neighbors.push((new_id[chunk.target(d)], edge_of_chunk[&edge_of(d)]));
                }
                if i + 1 == slot {
                    neighbors.push((other, ev));
                }
            }
            vertices.push(Vertex { id: vid, neighbors, pos: Some([x, ym]) });
        }
        let g = EmbeddedGraph { vertices, edges, virtual_pair: Some([v1, v2]) };
        g.validate().ok()?;
        Some(g)
    }
}

/// Darts leaving the connected vertex set `region`, in the rotation order of
/// the vertex obtained by contracting it.
fn contracted_rotation(chunk: &EmbeddedGraph, rot: &Rotation, sides: &[Side], region: Side) -> Option<Vec<usize>> {
    let members = sides.iter().filter(|&&s| s == region).count();
    if !connected_subset(chunk, sides, region, members) {
        return None;
    }
    let start = (0..rot.origin.len()).find(|&d| sides[rot.origin[d]] == region && sides[chunk.target(d)] != region)?;
    let mut out = Vec::new();
    let mut d = start;
    loop {
        out.push(d);
        let mut nd = rot.next[d];
        while sides[chunk.target(nd)] == region {
            nd = rot.next[twin(nd)];
        }
        d = nd;
        if d == start {
            return Some(out);
        }
        if out.len() > rot.origin.len() {
            return None;
        }
    }
}

/// Classification of tiling vertices for [`Tiling::cut_region`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Keep,
    Left,
    Right,
    Top,
    Bottom,
}

fn connected_subset(g: &EmbeddedGraph, sides: &[Side], region: Side, members: usize) -> bool {
    let Some(start) = (0..g.num_vertices()).find(|&v| sides[v] == region) else { return false };
    let mut seen = vec![false; g.num_vertices()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &(u, _) in &g.vertices[v].neighbors {
            if !seen[u] && sides[u] == region {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == members
}

/// Window and tiling used for `(family, size)`.
fn patch(family: LatticeFamily, size: usize) -> Result<(Tiling, Window)> {
    let invalid = |m: &str| Err(Error::InvalidParameter(format!("{family} size {size}: {m}")));
    if size < 2 {
        return invalid("size must be at least 2");
    }
    let s = size as f64;
    let r3 = 3f64.sqrt();
    let (x0, y0) = (0.5123, 0.0171);
    match family {
        LatticeFamily::Square => {
            if size % 2 == 0 {
                return invalid("square lattice needs an odd distance");
            }
            Ok((Tiling::rotated_square(), Window { x0: 0.0, x1: s - 1.0, y0: -1.0, y1: s }))
        }
        LatticeFamily::Hexagonal => {
            if size % 2 == 0 {
                return invalid("hexagonal lattice needs an odd distance");
            }
            let w = Window { x0, x1: x0 + 0.75 * (s - 1.0), y0, y1: y0 + s * r3 };
            Ok((Tiling::honeycomb().rotated90(), w))
        }
        LatticeFamily::Kagome => {
            if size % 2 == 1 || size < 4 {
                return invalid("kagome lattice needs an even size of at least 4");
            }
            let w = Window { x0, x1: x0 + s - 1.5, y0, y1: y0 + (s + 1.0) * r3 / 2.0 };
            Ok((Tiling::kagome(), w))
        }
        LatticeFamily::TriHex => {
            if size % 2 == 0 || size < 5 {
                return invalid("tri-hex lattice needs an odd size of at least 5");
            }
            // X-distance comes out one below the Z-distance.
            let k = (s + 1.0) / 2.0;
            let w = Window { x0, x1: x0 + 0.75 * (k - 1.0), y0, y1: y0 + 2.0 * k * r3 };
            Ok((Tiling::tri_hex().rotated90(), w))
        }
        _ => invalid("no rectangular window for this family"),
    }
}

/// Self-dual patch of the doubly-odd tiling with distance `size`.
///
/// The tiling is mapped onto its own dual by a half-period shift along the
/// diagonal followed by the reflection `x <-> y`. Vertices inside a box are
/// kept as Z-checks, the faces at the mirrored, shifted vertex positions
/// are kept as X-checks, and a bond is a qubit when it touches a kept vertex
/// and a kept face. The box is taller than wide so that the kept faces
/// overhang on the left and right (rough) and fall short at the top and
/// bottom (smooth).
fn doubly_odd_patch(size: usize) -> Result<EmbeddedGraph> {
    if size < 3 || size % 2 == 0 {
        return Err(Error::InvalidParameter(format!("doubly-odd size {size}: needs an odd distance of at least 3")));
    }
    let tiling = Tiling::doubly_odd();
    let s = size as f64;
    let y0 = 1.0 / 3.0 + 0.013;
    let y1 = y0 + s + 1.0;
    let frame = Window { x0: y0 + 1.0, x1: y1 - 2.0 / 3.0, y0, y1 };
    let inside = |p: [f64; 2]| p[0] > frame.x0 && p[0] < frame.x1 && p[1] > frame.y0 && p[1] < frame.y1;

    let (chunk, _) = tiling.chunk(frame.x0 - 3.0, frame.x1 + 3.0, frame.y0 - 3.0, frame.y1 + 3.0);
    let faces = chunk.faces();
    let pos = |v: usize| chunk.vertices[v].pos.unwrap();
    let polygons: Vec<Vec<[f64; 2]>> =
        faces.darts.iter().map(|ds| ds.iter().map(|&d| pos(chunk.origin(d))).collect()).collect();
    // The unbounded face winds clockwise; skip it when locating points.
    let bounded: Vec<bool> = polygons.iter().map(|p| signed_area(p) > 0.0).collect();
    let mut kept_face = vec![false; faces.len()];
    for v in 0..chunk.num_vertices() {
        let p = pos(v);
        if inside(p) {
            let q = [p[1] + 0.5, p[0] + 0.5];
            let f = (0..faces.len())
                .find(|&f| bounded[f] && contains(&polygons[f], q))
                .ok_or_else(|| Error::Construction("doubly-odd patch exceeds its chunk".into()))?;
            kept_face[f] = true;
        }
    }
    let mut qubits = std::collections::HashSet::new();
    for e in &chunk.edges {
        let [a, b] = e.ends;
        let [f, g] = faces.sides(e.id);
        if (inside(pos(a)) || inside(pos(b))) && (kept_face[f] || kept_face[g]) {
            qubits.insert((grid_key(pos(a)), grid_key(pos(b))));
            qubits.insert((grid_key(pos(b)), grid_key(pos(a))));
        }
    }
    let side = |p: [f64; 2], _| {
        if inside(p) {
            Side::Keep
        } else if p[0] <= frame.x0 {
            Side::Left
        } else if p[0] >= frame.x1 {
            Side::Right
        } else if p[1] >= frame.y1 {
            Side::Top
        } else {
            Side::Bottom
        }
    };
    let attach = |a: [f64; 2], b: [f64; 2]| qubits.contains(&(grid_key(a), grid_key(b)));
    tiling
        .cut_region(&frame, side, attach)
        .ok_or_else(|| Error::Construction(format!("doubly-odd size {size}: degenerate patch")))
}

fn grid_key(p: [f64; 2]) -> (i64, i64) {
    ((p[0] * 20.0).round() as i64, (p[1] * 20.0).round() as i64)
}

fn signed_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| poly[i][0] * poly[(i + 1) % n][1] - poly[(i + 1) % n][0] * poly[i][1]).sum::<f64>() / 2.0
}

fn contains(poly: &[[f64; 2]], q: [f64; 2]) -> bool {
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a[1] > q[1]) != (b[1] > q[1]) && q[0] < a[0] + (q[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]) {
            inside = !inside;
        }
    }
    inside
}

/// The Z-stabilizer graph of `(family, size)` with its two virtual nodes.
pub fn generate_lattice(family: LatticeFamily, size: usize) -> Result<EmbeddedGraph> {
    if let Some(p) = family.primal() {
        return generate_lattice(p, size)?.dual();
    }
    if family == LatticeFamily::DoublyOdd {
        return doubly_odd_patch(size);
    }
    let (tiling, window) = patch(family, size)?;
    tiling
        .cut(&window)
        .ok_or_else(|| Error::InvalidParameter(format!("{family} size {size}: degenerate patch")))
}

/// `generate_lattice` followed by `build_code`.
pub fn generate_code(family: LatticeFamily, size: usize) -> Result<SurfaceCode> {
    let g = generate_lattice(family, size)?;
    build_named_code(&g, family.name(), size)
}

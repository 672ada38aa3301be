//! Surface codes built from an embedded Z-stabilizer graph.
//!
//! Qubits sit on the primal edges (except the edge joining the two virtual
//! nodes), Z-stabilizers on the real vertices and X-stabilizers on the real
//! faces. The virtual vertices V1, V2 carry the two realizations of Z_L,
//! the virtual faces F1, F2 the two realizations of X_L.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{edge_of, EmbeddedGraph, Faces, Rotation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum CodeClass {
    OddZ,
    EvenZ_OddLogical,
    EvenZ_EvenLogical,
}

impl std::fmt::Display for CodeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CodeClass::OddZ => "OddZ",
            CodeClass::EvenZ_OddLogical => "EvenZ_OddLogical",
            CodeClass::EvenZ_EvenLogical => "EvenZ_EvenLogical",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCode {
    pub family: String,
    pub size: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub z_stabilizers: Vec<Vec<usize>>,
    pub x_stabilizers: Vec<Vec<usize>>,
    pub logical_z: Vec<usize>,
    pub logical_x: Vec<usize>,
    /// Qubits at (V1,F1), (V1,F2), (V2,F1), (V2,F2).
    pub corner_qubits: [usize; 4],
    pub parity_class: CodeClass,
    pub embedding: EmbeddedGraph,
}

/// Combinatorial data derived from the embedding, shared by the Majorana
/// construction and the decoder.
#[derive(Clone, Debug)]
pub struct Topology {
    pub rot: Rotation,
    pub faces: Faces,
    pub virtual_edge: usize,
    /// V1, V2.
    pub v_virtual: [usize; 2],
    /// F1, F2 (F1 lies left of the dart V1 -> V2).
    pub f_virtual: [usize; 2],
    /// Qubit index of every primal edge (`None` for the virtual edge).
    pub qubit_of_edge: Vec<Option<usize>>,
    pub edge_of_qubit: Vec<usize>,
    /// Z-stabilizer index of each primal vertex.
    pub zstab_of_vertex: Vec<Option<usize>>,
    /// X-stabilizer index of each face.
    pub xstab_of_face: Vec<Option<usize>>,
}

impl Topology {
    pub fn new(g: &EmbeddedGraph) -> Result<Self> {
        let [v1, v2] = g
            .virtual_pair
            .ok_or_else(|| Error::Construction("missing virtual pair".into()))?;
        let ev = g.virtual_edge()?;
        let rot = g.rotation();
        let faces = g.faces_with(&rot);
        let d = g.dart_from(v1, ev);
        let f_virtual = [faces.face_of[d], faces.face_of[d ^ 1]];
        if f_virtual[0] == f_virtual[1] {
            return Err(Error::Construction("virtual edge is a bridge".into()));
        }
        let mut qubit_of_edge = vec![None; g.num_edges()];
        let mut edge_of_qubit = Vec::with_capacity(g.num_edges() - 1);
        for e in 0..g.num_edges() {
            if e != ev {
                qubit_of_edge[e] = Some(edge_of_qubit.len());
                edge_of_qubit.push(e);
            }
        }
        let mut zstab_of_vertex = vec![None; g.num_vertices()];
        let mut k = 0;
        for v in 0..g.num_vertices() {
            if v != v1 && v != v2 {
                zstab_of_vertex[v] = Some(k);
                k += 1;
            }
        }
        let mut xstab_of_face = vec![None; faces.len()];
        let mut k = 0;
        for f in 0..faces.len() {
            if !f_virtual.contains(&f) {
                xstab_of_face[f] = Some(k);
                k += 1;
            }
        }
        Ok(Topology {
            rot,
            faces,
            virtual_edge: ev,
            v_virtual: [v1, v2],
            f_virtual,
            qubit_of_edge,
            edge_of_qubit,
            zstab_of_vertex,
            xstab_of_face,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.edge_of_qubit.len()
    }

    /// Qubit on the edge next to the virtual edge at virtual vertex `v`, on
    /// the side of virtual face `face`.
    pub fn corner_at(&self, g: &EmbeddedGraph, v: usize, face: usize) -> Result<usize> {
        let ev = self.virtual_edge;
        let d = g.dart_from(v, ev);
        // The sector between the virtual dart and its ccw successor is the
        // face left of the virtual dart; the one before it is the right face.
        let dn = self.rot.next[d];
        let dp = self.rot.prev[d];
        let cand = if self.faces.face_of[d] == face {
            dn
        } else if self.faces.face_of[d ^ 1] == face {
            dp
        } else {
            return Err(Error::Construction("virtual face not beside virtual edge".into()));
        };
        self.qubit_of_edge[edge_of(cand)]
            .ok_or_else(|| Error::Construction("virtual vertices of degree 1".into()))
    }
}

impl SurfaceCode {
    pub fn topology(&self) -> Result<Topology> {
        Topology::new(&self.embedding)
    }

    pub fn num_x(&self) -> usize {
        self.x_stabilizers.len()
    }

    pub fn num_z(&self) -> usize {
        self.z_stabilizers.len()
    }

    /// Length of the shortest Z-logical: dual path between F1 and F2.
    pub fn z_distance(&self) -> usize {
        let dual = self.embedding.dual().expect("valid code has a dual");
        let ev = self.embedding.virtual_edge().unwrap();
        let [f1, f2] = dual.virtual_pair.unwrap();
        dual.bfs_distances(f1, Some(ev))[f2]
    }

    /// Length of the shortest X-logical: primal path between V1 and V2.
    pub fn x_distance(&self) -> usize {
        let ev = self.embedding.virtual_edge().unwrap();
        let [v1, v2] = self.embedding.virtual_pair.unwrap();
        self.embedding.bfs_distances(v1, Some(ev))[v2]
    }

    /// Syndrome (+1/-1 per X-stabilizer) of a Z-error pattern.
    pub fn syndrome_of(&self, z_error: &[bool]) -> Vec<bool> {
        self.x_stabilizers
            .iter()
            .map(|s| s.iter().filter(|&&q| z_error[q]).count() % 2 == 1)
            .collect()
    }

    /// X-stabilizers touching each qubit.
    pub fn x_incidence(&self) -> Vec<Vec<usize>> {
        incidence(self.n, &self.x_stabilizers)
    }

    pub fn z_incidence(&self) -> Vec<Vec<usize>> {
        incidence(self.n, &self.z_stabilizers)
    }

    /// Checks the stabilizer-code invariants.
    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Validation(m));
        let zinc = self.z_incidence();
        for (i, xs) in self.x_stabilizers.iter().enumerate() {
            let mut overlap: HashMap<usize, usize> = HashMap::new();
            for &q in xs {
                for &z in &zinc[q] {
                    *overlap.entry(z).or_default() += 1;
                }
            }
            if let Some((z, _)) = overlap.iter().find(|(_, &c)| c % 2 == 1) {
                return bad(format!("X-stabilizer {i} and Z-stabilizer {z} overlap oddly"));
            }
        }
        let lz: std::collections::HashSet<usize> = self.logical_z.iter().copied().collect();
        let common = self.logical_x.iter().filter(|q| lz.contains(q)).count();
        if common != 1 {
            return bad(format!("logical supports overlap on {common} qubits"));
        }
        for (i, xs) in self.x_stabilizers.iter().enumerate() {
            if xs.iter().filter(|q| lz.contains(q)).count() % 2 == 1 {
                return bad(format!("logical Z anticommutes with X-stabilizer {i}"));
            }
        }
        let lx: std::collections::HashSet<usize> = self.logical_x.iter().copied().collect();
        for (i, zs) in self.z_stabilizers.iter().enumerate() {
            if zs.iter().filter(|q| lx.contains(q)).count() % 2 == 1 {
                return bad(format!("logical X anticommutes with Z-stabilizer {i}"));
            }
        }
        if self.num_x() + self.num_z() + 1 != self.n {
            return bad("stabilizer count does not leave one logical qubit".into());
        }
        Ok(())
    }
}

fn incidence(n: usize, stabs: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut inc = vec![Vec::new(); n];
    for (i, s) in stabs.iter().enumerate() {
        for &q in s {
            inc[q].push(i);
        }
    }
    inc
}

pub fn classify(code: &SurfaceCode) -> CodeClass {
    class_of(&code.z_stabilizers, code.logical_z.len())
}

fn class_of(z_stabilizers: &[Vec<usize>], logical_z_len: usize) -> CodeClass {
    if z_stabilizers.iter().any(|s| s.len() % 2 == 1) {
        CodeClass::OddZ
    } else if logical_z_len % 2 == 1 {
        CodeClass::EvenZ_OddLogical
    } else {
        CodeClass::EvenZ_EvenLogical
    }
}

pub fn build_code(zgraph: &EmbeddedGraph) -> Result<SurfaceCode> {
    build_named_code(zgraph, "custom", 0)
}

pub fn build_named_code(zgraph: &EmbeddedGraph, family: &str, size: usize) -> Result<SurfaceCode> {
    zgraph.validate()?;
    let topo = Topology::new(zgraph)?;
    for e in 0..zgraph.num_edges() {
        let [l, r] = topo.faces.sides(e);
        if l == r {
            return Err(Error::Construction(format!("edge {e} borders the same face twice")));
        }
    }
    let q = |e: usize| topo.qubit_of_edge[e];
    let [v1, v2] = topo.v_virtual;
    let mut z_stabilizers = Vec::new();
    for v in &zgraph.vertices {
        if v.id == v1 || v.id == v2 {
            continue;
        }
        let mut s: Vec<usize> = v.neighbors.iter().filter_map(|&(_, e)| q(e)).collect();
        if s.is_empty() {
            return Err(Error::Construction(format!("vertex {} has no qubits", v.id)));
        }
        s.sort_unstable();
        z_stabilizers.push(s);
    }
    let mut x_stabilizers = Vec::new();
    for (f, cycle) in topo.faces.darts.iter().enumerate() {
        if topo.f_virtual.contains(&f) {
            continue;
        }
        let mut s: Vec<usize> = cycle.iter().filter_map(|&d| q(edge_of(d))).collect();
        s.sort_unstable();
        x_stabilizers.push(s);
    }
    let mut logical_z: Vec<usize> = zgraph.vertices[v1].neighbors.iter().filter_map(|&(_, e)| q(e)).collect();
    logical_z.sort_unstable();
    let mut logical_x: Vec<usize> = topo.faces.darts[topo.f_virtual[0]]
        .iter()
        .filter_map(|&d| q(edge_of(d)))
        .collect();
    logical_x.sort_unstable();
    let [f1, f2] = topo.f_virtual;
    let corner_qubits = [
        topo.corner_at(zgraph, v1, f1)?,
        topo.corner_at(zgraph, v1, f2)?,
        topo.corner_at(zgraph, v2, f1)?,
        topo.corner_at(zgraph, v2, f2)?,
    ];
    let parity_class = class_of(&z_stabilizers, logical_z.len());
    let code = SurfaceCode {
        family: family.to_string(),
        size,
        n: topo.num_qubits(),
        z_stabilizers,
        x_stabilizers,
        logical_z,
        logical_x,
        corner_qubits,
        parity_class,
        embedding: zgraph.clone(),
    };
    code.check().map_err(|e| Error::Construction(e.to_string()))?;
    Ok(code)
}

/// Relabels qubits by a permutation (`perm[old] = new`), dropping the
/// embedding-dependent fields' consistency; used to test label invariance.
pub fn relabel_qubits(code: &SurfaceCode, perm: &[usize]) -> SurfaceCode {
    let map = |s: &Vec<usize>| {
        let mut t: Vec<usize> = s.iter().map(|&q| perm[q]).collect();
        t.sort_unstable();
        t
    };
    SurfaceCode {
        z_stabilizers: code.z_stabilizers.iter().map(map).collect(),
        x_stabilizers: code.x_stabilizers.iter().map(map).collect(),
        logical_z: map(&code.logical_z),
        logical_x: map(&code.logical_x),
        corner_qubits: code.corner_qubits.map(|q| perm[q]),
        ..code.clone()
    }
}

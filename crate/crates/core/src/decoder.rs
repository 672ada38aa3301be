//! Minimum-weight perfect matching decoder for Z errors.
//!
//! Defects live on the X-stabilizer graph: one node per X-stabilizer plus the
//! two virtual faces as boundary nodes, one edge per qubit. Every defect gets
//! a private boundary copy at the distance of its nearest boundary; two copies
//! are joined at zero cost whenever their defects may be paired.

use std::collections::VecDeque;

use mwmatching::{Matching, SENTINEL};

use crate::code::SurfaceCode;
use crate::error::{Error, Result};

const UNREACHED: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct MatchingContext {
    pub num_stabilizers: usize,
    /// The two boundary nodes are `num_stabilizers` and `num_stabilizers + 1`.
    pub adjacency: Vec<Vec<(usize, usize)>>,
    /// `dist[u][v]` in hops.
    pub dist: Vec<Vec<u32>>,
    /// `pred[u][v] = (w, qubit)`: last step of the canonical path from `u` to `v`.
    pred: Vec<Vec<(u32, u32)>>,
    num_qubits: usize,
}

impl MatchingContext {
    pub fn new(code: &SurfaceCode) -> Result<Self> {
        let topo = code.topology()?;
        let nx = code.num_x();
        let node_of_face = |f: usize| -> usize {
            match topo.xstab_of_face[f] {
                Some(k) => k,
                None if f == topo.f_virtual[0] => nx,
                None => nx + 1,
            }
        };
        let mut adjacency = vec![Vec::new(); nx + 2];
        for (q, &e) in topo.edge_of_qubit.iter().enumerate() {
            let [l, r] = topo.faces.sides(e);
            let (a, b) = (node_of_face(l), node_of_face(r));
            if a == b {
                return Err(Error::Construction(format!("qubit {q} borders the same X region on both sides")));
            }
            adjacency[a].push((b, q));
            adjacency[b].push((a, q));
        }
        for l in &mut adjacency {
            l.sort_unstable();
        }
        let n = nx + 2;
        let mut dist = Vec::with_capacity(n);
        let mut pred = Vec::with_capacity(n);
        for s in 0..n {
            let d = bfs(&adjacency, s);
            if d.iter().any(|&x| x == UNREACHED) {
                return Err(Error::Construction("X-stabilizer graph is disconnected".into()));
            }
            let p = (0..n)
                .map(|v| {
                    if v == s {
                        return (v as u32, u32::MAX);
                    }
                    let &(w, q) = adjacency[v].iter().find(|&&(w, _)| d[w] + 1 == d[v]).unwrap();
                    (w as u32, q as u32)
                })
                .collect();
            dist.push(d);
            pred.push(p);
        }
        Ok(MatchingContext { num_stabilizers: nx, adjacency, dist, pred, num_qubits: code.n })
    }

    pub fn boundary(&self) -> [usize; 2] {
        [self.num_stabilizers, self.num_stabilizers + 1]
    }

    /// Nearest boundary node of `u` and its distance; ties go to the first.
    pub fn nearest_boundary(&self, u: usize) -> (usize, u32) {
        let [b0, b1] = self.boundary();
        if self.dist[u][b1] < self.dist[u][b0] {
            (b1, self.dist[u][b1])
        } else {
            (b0, self.dist[u][b0])
        }
    }

    /// Flips the qubits along the canonical shortest path from `u` to `v`.
    pub fn flip_path(&self, u: usize, v: usize, h: &mut [bool]) {
        let mut x = v;
        while x != u {
            let (w, q) = self.pred[u][x];
            h[q as usize] ^= true;
            x = w as usize;
        }
    }

    /// Defect pairing of minimum total hop length. Each entry is
    /// `(defect, Some(partner))` or `(defect, None)` for a boundary match.
    ///
    /// Two defects with `d_ij >= b_i + b_j` never need to be paired with each
    /// other, so the clusters of the remaining pairs are matched separately.
    pub fn pair_defects(&self, defects: &[usize]) -> Result<Vec<(usize, Option<usize>)>> {
        let k = defects.len();
        let bdist: Vec<u32> = defects.iter().map(|&u| self.nearest_boundary(u).1).collect();
        let mut close = vec![Vec::new(); k];
        for i in 0..k {
            for j in i + 1..k {
                let d = self.dist[defects[i]][defects[j]];
                if d < bdist[i] + bdist[j] {
                    close[i].push((j, d));
                    close[j].push((i, d));
                }
            }
        }
        let mut cluster = vec![usize::MAX; k];
        let mut pairs = Vec::with_capacity(k);
        for start in 0..k {
            if cluster[start] != usize::MAX {
                continue;
            }
            cluster[start] = start;
            let mut members = vec![start];
            let mut head = 0;
            while head < members.len() {
                let i = members[head];
                head += 1;
                for &(j, _) in &close[i] {
                    if cluster[j] == usize::MAX {
                        cluster[j] = start;
                        members.push(j);
                    }
                }
            }
            members.sort_unstable();
            match members.len() {
                1 => pairs.push((start, None)),
                _ => pairs.extend(self.match_cluster(&members, &close, &bdist)?),
            }
        }
        pairs.sort_unstable();
        Ok(pairs)
    }

    fn match_cluster(&self, members: &[usize], close: &[Vec<(usize, u32)>], bdist: &[u32]) -> Result<Vec<(usize, Option<usize>)>> {
        let k = members.len();
        let local = |g: usize| members.binary_search(&g).unwrap();
        let mut raw = Vec::new();
        for (a, &i) in members.iter().enumerate() {
            raw.push((a, k + a, bdist[i]));
            for &(j, d) in &close[i] {
                if j > i {
                    // Copies are left over exactly in pairs whose defects meet.
                    let b = local(j);
                    raw.push((a, b, d));
                    raw.push((k + a, k + b, 0));
                }
            }
        }
        let big = raw.iter().map(|e| e.2).max().unwrap_or(0) as i64 + 1;
        if big * (k as i64 + 1) > i32::MAX as i64 {
            return Err(Error::SizeCap(format!("matching weights overflow for {k} defects")));
        }
        let edges = raw.into_iter().map(|(a, b, w)| (a, b, (big - w as i64) as i32)).collect();
        let mate = Matching::new(edges).max_cardinality().solve();
        let mut pairs = Vec::with_capacity(k);
        for a in 0..k {
            let m = mate.get(a).copied().unwrap_or(SENTINEL);
            if m == SENTINEL {
                return Err(Error::Construction("matching is not perfect".into()));
            }
            if m >= k {
                pairs.push((members[a], None));
            } else if m > a {
                pairs.push((members[a], Some(members[m])));
            }
        }
        Ok(pairs)
    }

    /// Correction bit-string `h` whose syndrome equals `syndrome`.
    pub fn decode(&self, syndrome: &[bool]) -> Result<Vec<bool>> {
        if syndrome.len() != self.num_stabilizers {
            return Err(Error::InvalidParameter(format!(
                "syndrome has {} entries, code has {} X-stabilizers",
                syndrome.len(),
                self.num_stabilizers
            )));
        }
        let defects: Vec<usize> = (0..syndrome.len()).filter(|&i| syndrome[i]).collect();
        let mut h = vec![false; self.num_qubits];
        for (i, partner) in self.pair_defects(&defects)? {
            let u = defects[i];
            match partner {
                Some(j) => self.flip_path(u, defects[j], &mut h),
                None => self.flip_path(u, self.nearest_boundary(u).0, &mut h),
            }
        }
        Ok(h)
    }

    /// Total hop length of a pairing as returned by `pair_defects`.
    pub fn pairing_weight(&self, defects: &[usize], pairs: &[(usize, Option<usize>)]) -> u32 {
        pairs
            .iter()
            .map(|&(i, p)| match p {
                Some(j) => self.dist[defects[i]][defects[j]],
                None => self.nearest_boundary(defects[i]).1,
            })
            .sum()
    }
}

fn bfs(adjacency: &[Vec<(usize, usize)>], s: usize) -> Vec<u32> {
    let mut d = vec![UNREACHED; adjacency.len()];
    d[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in &adjacency[u] {
            if d[v] == UNREACHED {
                d[v] = d[u] + 1;
                queue.push_back(v);
            }
        }
    }
    d
}

/// Whether the coherent decoder replaces `C_s` by `C_s Z_L`: only when that
/// strictly lowers the Bloch-averaged infidelity, i.e. `q_s > 1`.
pub fn coherent_choice(q_s: f64) -> bool {
    (1.0 - q_s) / (1.0 + q_s) < 0.0
}

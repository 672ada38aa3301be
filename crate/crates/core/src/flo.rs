//! Fermionic Gaussian states for fermion linear optics.
//!
//! The covariance matrix `gamma[p][q] = <i c_p c_q>` is stored in two parts:
//! an active block holding every mode that has been touched since it left a
//! product state, and a store of decoupled dimers `(p, q, ±1)`. Modes enter
//! the block when an operation touches them and leave it once a measurement
//! has fixed them into a dimer again, so the block stays as small as the
//! measurement frontier.

use rand::Rng;

use crate::error::{Error, Result};
use crate::majorana::Dimer;

/// Outcomes with probability below this are treated as impossible.
pub const ZERO_PROB: f64 = 1e-12;
/// Measurements between two re-purifications of the active block.
pub const PURIFY_EVERY: usize = 256;

const NONE: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct GaussianState {
    n: usize,
    /// `(partner, value)` for modes in the dimer store.
    stored: Vec<Option<(usize, f64)>>,
    /// Position in the active block, or `NONE`.
    pos: Vec<usize>,
    active: Vec<usize>,
    cap: usize,
    block: Vec<f64>,
    pub log_prob: f64,
    since_purify: usize,
}

impl GaussianState {
    /// Product state with every oriented pair `p -> q` at `i c_p c_q = +1`.
    pub fn from_matching(n: usize, matching: &[Dimer]) -> Result<Self> {
        let mut stored = vec![None; n];
        for &(p, q) in matching {
            if p >= n || q >= n || p == q || stored[p].is_some() || stored[q].is_some() {
                return Err(Error::InvalidParameter(format!("dimer ({p}, {q}) does not fit a matching on {n} modes")));
            }
            stored[p] = Some((q, 1.0));
            stored[q] = Some((p, -1.0));
        }
        if stored.iter().any(Option::is_none) {
            return Err(Error::InvalidParameter("matching is not perfect".into()));
        }
        Ok(GaussianState {
            n,
            stored,
            pos: vec![NONE; n],
            active: Vec::new(),
            cap: 0,
            block: Vec::new(),
            log_prob: 0.0,
            since_purify: 0,
        })
    }

    pub fn num_modes(&self) -> usize {
        self.n
    }

    /// Size of the active block.
    pub fn active_len(&self) -> usize {
        self.active.len()
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.block[i * self.cap + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.block[i * self.cap + j] = v;
    }

    /// `<i c_p c_q>`.
    pub fn get(&self, p: usize, q: usize) -> f64 {
        if p == q {
            return 0.0;
        }
        match (self.pos[p], self.pos[q]) {
            (NONE, _) | (_, NONE) => match self.stored[p] {
                Some((r, v)) if r == q => v,
                _ => 0.0,
            },
            (i, j) => self.at(i, j),
        }
    }

    /// Full covariance matrix; for tests and small systems.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|p| (0..self.n).map(|q| self.get(p, q)).collect()).collect()
    }

    fn grow(&mut self, need: usize) {
        if need <= self.cap {
            return;
        }
        let cap = need.max(2 * self.cap).max(16);
        let mut block = vec![0.0; cap * cap];
        let k = self.active.len();
        for i in 0..k {
            block[i * cap..i * cap + k].copy_from_slice(&self.block[i * self.cap..i * self.cap + k]);
        }
        self.block = block;
        self.cap = cap;
    }

    fn activate(&mut self, p: usize) {
        if self.pos[p] != NONE {
            return;
        }
        let (q, v) = self.stored[p].take().expect("mode is neither active nor stored");
        self.stored[q] = None;
        let k = self.active.len();
        self.grow(k + 2);
        for i in 0..k + 2 {
            for j in [k, k + 1] {
                self.set(i, j, 0.0);
                self.set(j, i, 0.0);
            }
        }
        self.set(k, k + 1, v);
        self.set(k + 1, k, -v);
        self.active.push(p);
        self.active.push(q);
        self.pos[p] = k;
        self.pos[q] = k + 1;
    }

    /// Moves the last active mode into slot `i`, dropping mode `active[i]`.
    fn drop_slot(&mut self, i: usize) {
        let last = self.active.len() - 1;
        let gone = self.active[i];
        if i != last {
            for j in 0..=last {
                let v = self.at(last, j);
                self.set(i, j, v);
                self.set(j, i, -v);
            }
            self.set(i, i, 0.0);
            let moved = self.active[last];
            self.active[i] = moved;
            self.pos[moved] = i;
        }
        self.active.pop();
        self.pos[gone] = NONE;
    }

    /// Applies `exp(theta c_p c_q)`.
    pub fn apply_rotation(&mut self, p: usize, q: usize, theta: f64) {
        assert!(p != q, "rotation needs two distinct modes");
        if theta == 0.0 {
            return;
        }
        self.activate(p);
        self.activate(q);
        let (i, j) = (self.pos[p], self.pos[q]);
        let (c, s) = ((2.0 * theta).cos(), (2.0 * theta).sin());
        let k = self.active.len();
        for r in 0..k {
            let (a, b) = (self.at(i, r), self.at(j, r));
            self.set(i, r, c * a + s * b);
            self.set(j, r, c * b - s * a);
        }
        for r in 0..k {
            let (a, b) = (self.at(r, i), self.at(r, j));
            self.set(r, i, c * a + s * b);
            self.set(r, j, c * b - s * a);
        }
    }

    /// Probability of reading `m` on `i c_p c_q`.
    pub fn probability(&self, p: usize, q: usize, m: i8) -> f64 {
        (1.0 + f64::from(m) * self.get(p, q)) / 2.0
    }

    /// Projects onto `i c_p c_q = m` and returns the probability of that
    /// outcome.
    pub fn measure(&mut self, p: usize, q: usize, m: i8) -> Result<f64> {
        assert!(p != q, "measurement needs two distinct modes");
        let prob = self.probability(p, q, m);
        if prob < ZERO_PROB {
            return Err(Error::ImpossiblePostselection(prob));
        }
        let mf = f64::from(m);
        if self.pos[p] == NONE && self.pos[q] == NONE && matches!(self.stored[p], Some((r, _)) if r == q) {
            // Already a stored dimer with the requested value.
            self.log_prob += prob.ln();
            return Ok(prob);
        }
        self.activate(p);
        self.activate(q);
        let (i, j) = (self.pos[p], self.pos[q]);
        let k = self.active.len();
        let f = mf / (1.0 + mf * self.at(i, j));
        let (ci, cj): (Vec<f64>, Vec<f64>) = (0..k).map(|r| (self.at(r, i), self.at(r, j))).unzip();
        for a in 0..k {
            if a == i || a == j {
                continue;
            }
            let (u, w) = (f * ci[a], f * cj[a]);
            let row = &mut self.block[a * self.cap..a * self.cap + k];
            // gamma[a][b] += f (gamma[a][p] gamma[q][b] - gamma[a][q] gamma[p][b])
            for b in 0..k {
                row[b] += w * ci[b] - u * cj[b];
            }
        }
        for r in 0..k {
            for (x, y) in [(i, r), (j, r), (r, i), (r, j)] {
                self.set(x, y, 0.0);
            }
        }
        for a in 0..k {
            self.set(a, a, 0.0);
        }
        // Release the measured pair into the store.
        self.stored[p] = Some((q, mf));
        self.stored[q] = Some((p, -mf));
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        self.drop_slot(hi);
        self.drop_slot(lo);
        self.log_prob += prob.ln();
        self.since_purify += 1;
        if self.since_purify >= PURIFY_EVERY {
            self.purify();
        }
        Ok(prob)
    }

    /// Draws `m` with probability `(1 + m gamma[p][q]) / 2` and projects.
    pub fn sample<R: Rng + ?Sized>(&mut self, p: usize, q: usize, rng: &mut R) -> Result<i8> {
        let m = if rng.gen::<f64>() < self.probability(p, q, 1) { 1 } else { -1 };
        self.measure(p, q, m)?;
        Ok(m)
    }

    /// Joint probability of `i c_a c_b = m` followed by `i c_c c_d = m`.
    pub fn pair_weight(&self, (a, b): Dimer, (c, d): Dimer, m: i8) -> f64 {
        let mf = f64::from(m);
        let g = |x, y| self.get(x, y);
        ((1.0 + mf * g(a, b)) * (1.0 + mf * g(c, d)) + g(c, a) * g(b, d) - g(c, b) * g(a, d)) / 4.0
    }

    /// One Newton-Schulz step towards the nearest orthogonal matrix.
    pub fn purify(&mut self) {
        self.since_purify = 0;
        let k = self.active.len();
        if k == 0 {
            return;
        }
        let g: Vec<f64> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| self.at(i, j)).collect();
        // G^3 for antisymmetric G; G (3 I + G^2) / 2 = G (3 I - G^T G) / 2.
        let mut g2 = vec![0.0; k * k];
        for i in 0..k {
            for l in 0..k {
                let x = g[i * k + l];
                if x != 0.0 {
                    for j in 0..k {
                        g2[i * k + j] += x * g[l * k + j];
                    }
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                let mut g3 = 0.0;
                for l in 0..k {
                    g3 += g[i * k + l] * g2[l * k + j];
                }
                self.set(i, j, (3.0 * g[i * k + j] + g3) / 2.0);
            }
        }
    }

    /// Largest deviation of `gamma gamma^T` from the identity.
    pub fn purity_error(&self) -> f64 {
        let k = self.active.len();
        let mut err: f64 = 0.0;
        for i in 0..k {
            for j in 0..k {
                let s: f64 = (0..k).map(|l| self.at(i, l) * self.at(j, l)).sum();
                err = err.max((s - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        err
    }
}

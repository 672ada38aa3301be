//! Gaussian-state engine against a Jordan-Wigner state-vector model.

use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surfcoh_core::flo::GaussianState;

/// Jordan-Wigner Majorana operators on `n / 2` qubits:
/// `c_{2k} = Z..Z X_k`, `c_{2k+1} = Z..Z Y_k`.
struct Dense {
    dim: usize,
}

impl Dense {
    fn new(n: usize) -> Self {
        Dense { dim: 1 << (n / 2) }
    }

    fn apply(&self, p: usize, v: &[C]) -> Vec<C> {
        let site = p / 2;
        let mut out = vec![C::new(0.0, 0.0); self.dim];
        for (col, &x) in v.iter().enumerate() {
            let parity = (col & ((1 << site) - 1)).count_ones() % 2;
            let mut f = if parity == 1 { C::new(-1.0, 0.0) } else { C::new(1.0, 0.0) };
            if p % 2 == 1 {
                f *= if (col >> site) & 1 == 0 { C::new(0.0, 1.0) } else { C::new(0.0, -1.0) };
            }
            out[col ^ (1 << site)] = f * x;
        }
        out
    }

    /// `i c_p c_q |v>`.
    fn dimer(&self, p: usize, q: usize, v: &[C]) -> Vec<C> {
        self.apply(p, &self.apply(q, v)).into_iter().map(|x| x * C::new(0.0, 1.0)).collect()
    }

    fn expect(&self, p: usize, q: usize, v: &[C]) -> f64 {
        let w = self.dimer(p, q, v);
        v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum::<C>().re
    }

    /// `(1 + m i c_p c_q) / 2 |v>`.
    fn project(&self, p: usize, q: usize, m: f64, v: &[C]) -> Vec<C> {
        let w = self.dimer(p, q, v);
        v.iter().zip(&w).map(|(a, b)| (a + b * m) * 0.5).collect()
    }

    /// `exp(theta c_p c_q) |v>`.
    fn rotate(&self, p: usize, q: usize, theta: f64, v: &[C]) -> Vec<C> {
        let w = self.apply(p, &self.apply(q, v));
        v.iter().zip(&w).map(|(a, b)| a * theta.cos() + b * theta.sin()).collect()
    }
}

fn norm2(v: &[C]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum()
}

fn normalize(v: Vec<C>) -> Vec<C> {
    let s = norm2(&v).sqrt();
    v.into_iter().map(|x| x / s).collect()
}

enum Op {
    Rotate(usize, usize, f64),
    Measure(usize, usize, i8),
}

fn random_program(rng: &mut ChaCha8Rng, n: usize, len: usize) -> (Vec<(usize, usize)>, Vec<Op>) {
    let mut modes: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        modes.swap(i, rng.gen_range(0..=i));
    }
    let pairs = modes.chunks(2).map(|c| (c[0], c[1])).collect();
    let ops = (0..len)
        .map(|_| {
            let p = rng.gen_range(0..n);
            let q = (p + rng.gen_range(1..n)) % n;
            if rng.gen_bool(0.5) {
                Op::Rotate(p, q, rng.gen_range(-1.6..1.6))
            } else {
                Op::Measure(p, q, if rng.gen_bool(0.5) { 1 } else { -1 })
            }
        })
        .collect();
    (pairs, ops)
}

fn run_against_oracle(seed: u64, n: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (pairs, ops) = random_program(&mut rng, n, 40);
    let dense = Dense::new(n);
    let mut v: Vec<C> = (0..dense.dim).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    for &(p, q) in &pairs {
        v = normalize(dense.project(p, q, 1.0, &v));
    }
    let mut s = GaussianState::from_matching(n, &pairs).unwrap();
    let mut log_prob = 0.0;
    for op in ops {
        match op {
            Op::Rotate(p, q, t) => {
                s.apply_rotation(p, q, t);
                v = dense.rotate(p, q, t, &v);
            }
            Op::Measure(p, q, m) => {
                let w = dense.project(p, q, f64::from(m), &v);
                let prob = norm2(&w);
                match s.measure(p, q, m) {
                    Ok(got) => {
                        assert!((got - prob).abs() < 1e-8, "seed {seed}: prob {got} vs {prob}");
                        log_prob += prob.ln();
                        v = normalize(w);
                    }
                    Err(_) => assert!(prob < 1e-10, "seed {seed}: engine refused outcome of prob {prob}"),
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    let want = dense.expect(p, q, &v);
                    assert!((s.get(p, q) - want).abs() < 1e-8, "seed {seed}: gamma[{p}][{q}] {} vs {want}", s.get(p, q));
                }
            }
        }
    }
    assert!((s.log_prob - log_prob).abs() < 1e-8);
}

#[test]
fn engine_matches_dense_model() {
    for seed in 0..40 {
        run_against_oracle(seed, if seed % 2 == 0 { 12 } else { 8 });
    }
}

#[test]
fn physical_z_rotation_mapping() {
    // One qubit on modes 0..4 with X = i c0 c1 and Z = i c1 c2, prepared in
    // X = SX = +1. exp(i eta Z) is the rotation on (1, 2) by -eta.
    let eta: f64 = 0.37;
    let mut s = GaussianState::from_matching(4, &[(0, 1), (2, 3)]).unwrap();
    s.apply_rotation(1, 2, -eta);
    // <X> after exp(i eta Z) on |+> is cos(2 eta).
    assert!((s.get(0, 1) - (2.0 * eta).cos()).abs() < 1e-12);
    let dense = Dense::new(4);
    let mut v: Vec<C> = vec![C::new(1.0, 0.0); 4];
    v = normalize(dense.project(0, 1, 1.0, &v));
    v = normalize(dense.project(2, 3, 1.0, &v));
    v = dense.rotate(1, 2, -eta, &v);
    // exp(i eta Z) applied directly with Z = i c1 c2.
    let mut u: Vec<C> = vec![C::new(1.0, 0.0); 4];
    u = normalize(dense.project(0, 1, 1.0, &u));
    u = normalize(dense.project(2, 3, 1.0, &u));
    let zu = dense.dimer(1, 2, &u);
    let u: Vec<C> = u.iter().zip(&zu).map(|(a, b)| a * eta.cos() + b * C::new(0.0, eta.sin())).collect();
    let overlap: C = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
    assert!((overlap.norm() - 1.0).abs() < 1e-12);
    assert!((overlap - C::new(1.0, 0.0)).norm() < 1e-12);
}

proptest! {
    #[test]
    fn antisymmetry_purity_and_idempotence(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 20;
        let (pairs, ops) = random_program(&mut rng, n, 60);
        let mut s = GaussianState::from_matching(n, &pairs).unwrap();
        for op in ops {
            match op {
                Op::Rotate(p, q, t) => s.apply_rotation(p, q, t),
                Op::Measure(p, q, m) => {
                    let (a, b) = (s.probability(p, q, 1), s.probability(p, q, -1));
                    prop_assert!((a + b - 1.0).abs() < 1e-12);
                    if s.measure(p, q, m).is_ok() {
                        let again = s.clone();
                        prop_assert!((s.measure(p, q, m).unwrap() - 1.0).abs() < 1e-12);
                        prop_assert_eq!(s.to_dense(), again.to_dense());
                    }
                }
            }
        }
        let g = s.to_dense();
        for p in 0..n {
            for q in 0..n {
                prop_assert!((g[p][q] + g[q][p]).abs() < 1e-12);
                prop_assert!(g[p][q].abs() <= 1.0 + 1e-9);
            }
        }
        prop_assert!(s.purity_error() < 1e-8);
    }
}

//! State-vector reference for small codes.
//!
//! Logical states are built by projecting computational basis states with
//! the X-stabilizers, the rotation is applied as a diagonal phase, and
//! syndromes are resolved after a Walsh-Hadamard transform, where every
//! X-stabilizer projector is diagonal.

use std::collections::HashSet;

use num_complex::Complex64 as C;
use serde::Serialize;

use crate::code::{CodeClass, SurfaceCode};
use crate::decoder::MatchingContext;
use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 20;
pub const MAX_TWIRL_QUBITS: usize = 20;
pub const MAX_X_STABILIZERS: usize = 20;

/// Exact per-syndrome quantities.
#[derive(Clone, Debug, Serialize)]
pub struct OracleSyndrome {
    pub syndrome: Vec<bool>,
    pub correction: Vec<bool>,
    /// Probability for the `|+_L>` input.
    pub p: f64,
    /// `<0_L| C_s Pi_s U |0_L>` and `<1_L| C_s Pi_s U |1_L>`.
    pub a: C,
    pub b: C,
    pub k: C,
    pub l: C,
    pub q: f64,
    pub r: f64,
    /// `A conj(B) / P`.
    pub c: C,
    /// Bloch vector of the corrected state for the `|+_L>` input.
    pub bloch: [f64; 3],
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleChannel {
    pub syndromes: Vec<OracleSyndrome>,
    /// `sum_s A_s conj(B_s)`.
    pub gamma: C,
    /// `sum_s |A_s|^2` and `sum_s |B_s|^2`.
    pub alpha: f64,
    pub beta: f64,
}

fn mask(support: &[usize]) -> usize {
    support.iter().fold(0, |m, &a| m | 1 << a)
}

/// Amplitudes of `|0_L>` and `|1_L>` in the computational basis.
pub fn logical_states(code: &SurfaceCode) -> Result<(Vec<C>, Vec<C>)> {
    if code.n > MAX_QUBITS.max(MAX_TWIRL_QUBITS) {
        return Err(Error::SizeCap(format!("{} qubits exceed the dense cap", code.n)));
    }
    let dim = 1usize << code.n;
    let gens: Vec<usize> = code.x_stabilizers.iter().map(|s| mask(s)).collect();
    // The X-stabilizer group applied to |0...0> spans the |0_L> support.
    let mut span = HashSet::from([0usize]);
    for g in gens {
        let add: Vec<usize> = span.iter().map(|&x| x ^ g).collect();
        span.extend(add);
    }
    let amp = C::new(1.0 / (span.len() as f64).sqrt(), 0.0);
    let xl = mask(&code.logical_x);
    let mut zero = vec![C::new(0.0, 0.0); dim];
    let mut one = vec![C::new(0.0, 0.0); dim];
    for &x in &span {
        zero[x] = amp;
        one[x ^ xl] = amp;
    }
    Ok((zero, one))
}

/// `exp(i sum_j eta_j Z_j)` on a computational-basis vector.
pub fn apply_rotation(v: &mut [C], eta: &[f64]) {
    for (x, amp) in v.iter_mut().enumerate() {
        let phase: f64 = eta.iter().enumerate().map(|(j, &e)| if x >> j & 1 == 1 { -e } else { e }).sum();
        *amp *= C::from_polar(1.0, phase);
    }
}

/// In-place normalized Walsh-Hadamard transform.
pub fn hadamard_all(v: &mut [C]) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
    let s = 1.0 / (n as f64).sqrt();
    v.iter_mut().for_each(|x| *x *= s);
}

/// `P_s`, `A_s`, `B_s` and derived quantities for every syndrome.
pub fn exact_channel(code: &SurfaceCode, ctx: &MatchingContext, eta: &[f64]) -> Result<OracleChannel> {
    if code.n > MAX_QUBITS {
        return Err(Error::SizeCap(format!("{} qubits exceed the oracle cap of {MAX_QUBITS}", code.n)));
    }
    let nx = code.num_x();
    if nx > MAX_X_STABILIZERS {
        return Err(Error::SizeCap(format!("{nx} X-stabilizers exceed the oracle cap of {MAX_X_STABILIZERS}")));
    }
    let (mut w0, mut w1) = logical_states(code)?;
    let (mut v0, mut v1) = (w0.clone(), w1.clone());
    apply_rotation(&mut v0, eta);
    apply_rotation(&mut v1, eta);
    for v in [&mut w0, &mut w1, &mut v0, &mut v1] {
        hadamard_all(v);
    }
    let masks: Vec<usize> = code.x_stabilizers.iter().map(|s| mask(s)).collect();
    let syndrome_of = |x: usize| masks.iter().enumerate().fold(0usize, |s, (j, &m)| s | (((x & m).count_ones() as usize & 1) << j));
    let ns = 1usize << nx;
    let mut h_masks = vec![usize::MAX; ns];
    let mut corrections = vec![Vec::new(); ns];
    let mut a = vec![C::new(0.0, 0.0); ns];
    let mut b = vec![C::new(0.0, 0.0); ns];
    let mut p0 = vec![0.0; ns];
    for x in 0..v0.len() {
        let s = syndrome_of(x);
        if h_masks[s] == usize::MAX {
            let bits: Vec<bool> = (0..nx).map(|j| s >> j & 1 == 1).collect();
            let h = ctx.decode(&bits)?;
            h_masks[s] = h.iter().enumerate().fold(0, |m, (i, &f)| if f { m | 1 << i } else { m });
            corrections[s] = h;
        }
        let h = h_masks[s];
        // Z(h) flips X-basis labels.
        a[s] += w0[x ^ h].conj() * v0[x];
        b[s] += w1[x ^ h].conj() * v1[x];
        p0[s] += v0[x].norm_sqr();
    }
    let mut out = Vec::new();
    for s in 0..ns {
        if corrections[s].is_empty() {
            continue;
        }
        // Independent route: the projected weight of |0_L> equals |A_s|^2.
        if (p0[s] - a[s].norm_sqr()).abs() > 1e-10 {
            return Err(Error::Validation(format!("syndrome {s}: projected weight {} vs |A|^2 {}", p0[s], a[s].norm_sqr())));
        }
        let (aa, bb) = (a[s], b[s]);
        let p = 0.5 * (aa.norm_sqr() + bb.norm_sqr());
        if p < 1e-300 {
            continue;
        }
        let i = C::new(0.0, 1.0);
        let ratio = |x: C, y: C| if y.norm_sqr() == 0.0 { f64::INFINITY } else { x.norm_sqr() / y.norm_sqr() };
        let c = aa * bb.conj() / p;
        let norm = aa.norm_sqr() + bb.norm_sqr();
        let bloch = [2.0 * (aa.conj() * bb).re / norm, 2.0 * (aa.conj() * bb).im / norm, (aa.norm_sqr() - bb.norm_sqr()) / norm];
        out.push(OracleSyndrome {
            syndrome: (0..nx).map(|j| s >> j & 1 == 1).collect(),
            correction: corrections[s].clone(),
            p,
            a: aa,
            b: bb,
            k: (aa + bb) / 2.0,
            l: (aa - bb) / 2.0,
            q: ratio(aa - bb, aa + bb),
            r: ratio(aa - i * bb, aa + i * bb),
            c,
            bloch,
        });
    }
    let gamma = out.iter().map(|s| s.a * s.b.conj()).sum();
    let alpha = out.iter().map(|s| s.a.norm_sqr()).sum();
    let beta = out.iter().map(|s| s.b.norm_sqr()).sum();
    Ok(OracleChannel { syndromes: out, gamma, alpha, beta })
}

/// Largest violation of the class-specific form of `D_s = k I + l Z_L`,
/// after normalizing by `sqrt(P_s)` and removing the global phase.
#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub class: CodeClass,
    /// `max |Im k|, |Re l|` over syndromes.
    pub unitary_violation: f64,
    /// `max |Im k|, |Im l|` over syndromes.
    pub real_violation: f64,
    /// Syndromes violating both forms by more than the tolerance.
    pub complex_syndromes: usize,
    pub passed: bool,
}

pub const CLASS_TOL: f64 = 1e-10;

fn unitary_violation(k: C, l: C) -> f64 {
    let phase = if k.norm() >= l.norm() { k.arg() } else { l.arg() - std::f64::consts::FRAC_PI_2 };
    let rot = C::from_polar(1.0, -phase);
    let (k, l) = (k * rot, l * rot);
    k.im.abs().max(l.re.abs())
}

fn real_violation(k: C, l: C) -> f64 {
    let phase = if k.norm() >= l.norm() { k.arg() } else { l.arg() };
    let rot = C::from_polar(1.0, -phase);
    let (k, l) = (k * rot, l * rot);
    k.im.abs().max(l.im.abs())
}

pub fn verify_class_structure(code: &SurfaceCode, ctx: &MatchingContext, eta: &[f64]) -> Result<ClassReport> {
    let ch = exact_channel(code, ctx, eta)?;
    let mut uv: f64 = 0.0;
    let mut rv: f64 = 0.0;
    let mut complex_syndromes = 0;
    for s in &ch.syndromes {
        let norm = s.p.sqrt();
        let (k, l) = (s.k / norm, s.l / norm);
        let (u, r) = (unitary_violation(k, l), real_violation(k, l));
        if u > CLASS_TOL && r > CLASS_TOL {
            complex_syndromes += 1;
        }
        uv = uv.max(u);
        rv = rv.max(r);
    }
    let passed = match code.parity_class {
        CodeClass::EvenZ_OddLogical => uv <= CLASS_TOL,
        CodeClass::EvenZ_EvenLogical => rv <= CLASS_TOL,
        CodeClass::OddZ => true,
    };
    Ok(ClassReport { class: code.parity_class, unitary_violation: uv, real_violation: rv, complex_syndromes, passed })
}

/// Exact failure probability of the twirled channel with flip probability
/// `p`, summing over all flip patterns.
pub fn twirl_exhaustive(code: &SurfaceCode, ctx: &MatchingContext, p: f64) -> Result<f64> {
    if code.n > MAX_TWIRL_QUBITS {
        return Err(Error::SizeCap(format!("{} qubits exceed the twirl oracle cap of {MAX_TWIRL_QUBITS}", code.n)));
    }
    let n = code.n;
    let masks: Vec<usize> = code.x_stabilizers.iter().map(|s| mask(s)).collect();
    let xl = mask(&code.logical_x);
    let mut cache = std::collections::HashMap::new();
    let mut fail = 0.0;
    for f in 0usize..1 << n {
        let s: Vec<bool> = masks.iter().map(|&m| (f & m).count_ones() % 2 == 1).collect();
        let h = match cache.get(&s) {
            Some(&h) => h,
            None => {
                let bits = ctx.decode(&s)?;
                let h = bits.iter().enumerate().fold(0usize, |m, (i, &b)| if b { m | 1 << i } else { m });
                cache.insert(s, h);
                h
            }
        };
        if ((f ^ h) & xl).count_ones() % 2 == 1 {
            let w = f.count_ones() as i32;
            fail += p.powi(w) * (1.0 - p).powi(n as i32 - w);
        }
    }
    Ok(fail)
}

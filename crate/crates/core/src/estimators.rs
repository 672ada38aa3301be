//! Per-syndrome records and the logical-channel observables built from them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::code::CodeClass;
use crate::error::{Error, Result};

/// Number of histogram bins on `[0, 2/3]`.
pub const HIST_BINS: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    /// FNV-1a hash of the syndrome bits.
    pub syndrome_hash: u64,
    pub correction_weight: usize,
    pub q: f64,
    pub r: f64,
    pub c_re: f64,
    pub c_im: f64,
    pub delta2: f64,
    pub delta2_coh: f64,
    pub theta: Option<f64>,
}

pub fn syndrome_hash(bits: &[bool]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bits {
        h ^= u64::from(b) + 1;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// `(1 - x) / (1 + x)`, with the limit `-1` for infinite ratios.
fn contrast(x: f64) -> f64 {
    if x.is_infinite() {
        -1.0
    } else {
        (1.0 - x) / (1.0 + x)
    }
}

impl SampleRecord {
    pub fn from_ratios(q: f64, r: f64, class: CodeClass) -> Self {
        let (c_re, c_im) = (contrast(q), contrast(r));
        let delta2 = (1.0 - c_re) / 3.0;
        let delta2_coh = (1.0 - c_re.abs()) / 3.0;
        let theta = (class == CodeClass::EvenZ_OddLogical).then(|| c_im.signum() * q.sqrt().atan());
        SampleRecord { syndrome_hash: 0, correction_weight: 0, q, r, c_re, c_im, delta2, delta2_coh, theta }
    }

    pub fn c(&self) -> Complex64 {
        Complex64::new(self.c_re, self.c_im)
    }

    /// The record seen by the coherent decoder, which appends `Z_L` to the
    /// correction when `q > 1`.
    pub fn coherent(&self) -> SampleRecord {
        if !crate::decoder::coherent_choice(self.q) {
            return self.clone();
        }
        let inv = |x: f64| if x == 0.0 { f64::INFINITY } else { 1.0 / x };
        let (q, r) = (inv(self.q), inv(self.r));
        SampleRecord {
            q,
            r,
            c_re: -self.c_re,
            c_im: -self.c_im,
            delta2: (1.0 + self.c_re) / 3.0,
            theta: self.theta.map(|t| t - std::f64::consts::FRAC_PI_2 * t.signum()),
            ..self.clone()
        }
    }
}

/// Rotation angle of the logical channel for codes acting unitarily.
pub fn rotation_angle(record: &SampleRecord, class: CodeClass) -> Result<f64> {
    if class != CodeClass::EvenZ_OddLogical {
        return Err(Error::InvalidParameter(format!("rotation angle undefined for class {class:?}")));
    }
    Ok(record.c_im.signum() * record.q.sqrt().atan())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimates {
    pub samples: usize,
    pub gamma_re: f64,
    pub gamma_im: f64,
    pub gamma_re_se: f64,
    pub gamma_im_se: f64,
    pub p_l: f64,
    pub p_l_se: f64,
    pub delta: f64,
    pub delta_se: f64,
    pub epsilon_p_mean: f64,
    pub epsilon_c_mean: f64,
}

fn mean_se(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    if n < 2.0 {
        return (mean, 0.0);
    }
    let var = xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Plain sample means; the jackknife supplies the error of `p_L = |gamma - 1|`.
pub fn estimate_gamma(records: &[SampleRecord]) -> Result<Estimates> {
    if records.len() < 2 {
        return Err(Error::InvalidParameter("need at least two records".into()));
    }
    let n = records.len() as f64;
    let (gamma_re, gamma_re_se) = mean_se(records.iter().map(|r| r.c_re));
    let (gamma_im, gamma_im_se) = mean_se(records.iter().map(|r| r.c_im));
    let gamma = Complex64::new(gamma_re, gamma_im);
    let p_l = (gamma - 1.0).norm();
    let loo: Vec<f64> = records.iter().map(|r| ((gamma * n - r.c()) / (n - 1.0) - 1.0).norm()).collect();
    let loo_mean = loo.iter().sum::<f64>() / n;
    let p_l_se = ((n - 1.0) / n * loo.iter().map(|x| (x - loo_mean).powi(2)).sum::<f64>()).sqrt();
    let (delta, delta_se) = mean_se(records.iter().map(|r| r.delta2_coh));
    let eps_p = |r: &SampleRecord| 1.5 * r.delta2;
    let epsilon_p_mean = records.iter().map(eps_p).sum::<f64>() / n;
    let epsilon_c_mean = records.iter().map(|r| (eps_p(r) * (1.0 - eps_p(r))).max(0.0).sqrt()).sum::<f64>() / n;
    Ok(Estimates {
        samples: records.len(),
        gamma_re,
        gamma_im,
        gamma_re_se,
        gamma_im_se,
        p_l,
        p_l_se,
        delta,
        delta_se,
        epsilon_p_mean,
        epsilon_c_mean,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaDistribution {
    /// Counts of `delta2` in `HIST_BINS` uniform bins on `[0, 2/3]`.
    pub delta2_counts: Vec<u64>,
    pub delta2_coh_counts: Vec<u64>,
    pub delta: f64,
    pub delta_se: f64,
}

impl DeltaDistribution {
    pub fn bin_edges(i: usize) -> (f64, f64) {
        let w = 2.0 / 3.0 / HIST_BINS as f64;
        (i as f64 * w, (i + 1) as f64 * w)
    }

    /// Fraction of `delta2` mass within `tol` of 0 or 2/3, from the raw records.
    pub fn peak_fraction(records: &[SampleRecord], tol: f64) -> f64 {
        let hits = records.iter().filter(|r| r.delta2 <= tol || r.delta2 >= 2.0 / 3.0 - tol).count();
        hits as f64 / records.len() as f64
    }
}

fn bin(x: f64) -> usize {
    ((x / (2.0 / 3.0) * HIST_BINS as f64).floor().max(0.0) as usize).min(HIST_BINS - 1)
}

pub fn estimate_delta_distribution(records: &[SampleRecord]) -> Result<DeltaDistribution> {
    if records.is_empty() {
        return Err(Error::InvalidParameter("no records".into()));
    }
    let mut delta2_counts = vec![0; HIST_BINS];
    let mut delta2_coh_counts = vec![0; HIST_BINS];
    for r in records {
        delta2_counts[bin(r.delta2)] += 1;
        delta2_coh_counts[bin(r.delta2_coh)] += 1;
    }
    let (delta, delta_se) = mean_se(records.iter().map(|r| r.delta2_coh));
    Ok(DeltaDistribution { delta2_counts, delta2_coh_counts, delta, delta_se })
}

/// `p_L = |gamma - 1|` for a phase-flip channel with `gamma = 1 - 2 f`.
pub fn twirl_logical_rate(failures: usize, trials: usize) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::InvalidParameter("no trials".into()));
    }
    let f = failures as f64 / trials as f64;
    Ok((2.0 * f, 2.0 * (f * (1.0 - f) / trials as f64).sqrt()))
}

/// Binary Shannon entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// `p_z` on the hashing bound `1 - h(p_x) - h(p_z) = 0`.
pub fn hashing_bound(p_x: f64) -> Result<f64> {
    if !(p_x > 0.0 && p_x < 0.5) {
        return Err(Error::InvalidParameter(format!("p_x = {p_x} outside (0, 1/2)")));
    }
    let target = 1.0 - binary_entropy(p_x);
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if binary_entropy(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

//! Parallel Monte Carlo over samples with per-sample random streams, so
//! results do not depend on the number of workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::SurfaceCode;
use crate::decoder::MatchingContext;
use crate::error::{Error, Result};
use crate::estimators::{estimate_delta_distribution, estimate_gamma, twirl_logical_rate, DeltaDistribution, SampleRecord};
use crate::sampler::{CoherentSimulator, RotationProfile};
use crate::twirl::run_twirl_trial;

/// Largest tolerated fraction of discarded degenerate samples.
pub const DEGENERATE_CAP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorModel {
    Coherent,
    Twirl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    Mwpm,
    Coherent,
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Key of one sweep point, mixed into the seed.
pub fn point_key(family: &str, size: usize, eta: f64) -> u64 {
    let mut h = splitmix(size as u64) ^ eta.to_bits();
    for b in family.bytes() {
        h = splitmix(h ^ u64::from(b));
    }
    h
}

/// Random stream of sample `index` at one sweep point.
pub fn sample_rng(seed: u64, key: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed) ^ key);
    rng.set_stream(index);
    rng
}

fn is_degenerate(e: &Error) -> bool {
    matches!(e, Error::Degenerate(_) | Error::ImpossiblePostselection(_))
}

/// Coherent samples in index order, plus the number discarded as degenerate.
pub fn coherent_records(
    sim: &CoherentSimulator,
    profile: &RotationProfile,
    samples: usize,
    seed: u64,
    key: u64,
) -> Result<(Vec<SampleRecord>, usize)> {
    let out: Vec<Result<Option<SampleRecord>>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, key, i as u64);
            match sim.sample(profile, &mut rng) {
                Ok(r) => Ok(Some(r)),
                Err(e) if is_degenerate(&e) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut records = Vec::with_capacity(samples);
    let mut discarded = 0;
    for r in out {
        match r? {
            Some(r) => records.push(r),
            None => discarded += 1,
        }
    }
    if discarded as f64 > DEGENERATE_CAP * samples as f64 {
        return Err(Error::Degenerate(format!("{discarded} of {samples} samples degenerate")));
    }
    Ok((records, discarded))
}

/// Number of logical failures among `trials` twirled trials.
pub fn twirl_failures(code: &SurfaceCode, ctx: &MatchingContext, eta: f64, trials: usize, seed: u64, key: u64) -> Result<usize> {
    let fails: Result<Vec<bool>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, key, i as u64);
            run_twirl_trial(code, ctx, eta, &mut rng).map(|t| t.failed)
        })
        .collect();
    Ok(fails?.into_iter().filter(|&f| f).count())
}

/// One row of the results table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub run_id: String,
    pub family: String,
    pub size: usize,
    pub distance: usize,
    pub eta_rad: f64,
    pub samples: usize,
    pub gamma_re: f64,
    pub gamma_im: f64,
    #[serde(rename = "p_L")]
    pub p_l: f64,
    #[serde(rename = "p_L_se")]
    pub p_l_se: f64,
    #[serde(rename = "Delta")]
    pub delta: Option<f64>,
    #[serde(rename = "Delta_se")]
    pub delta_se: Option<f64>,
    pub discarded: usize,
}

pub struct PointOutput {
    pub result: PointResult,
    pub histogram: Option<DeltaDistribution>,
    pub records: Vec<SampleRecord>,
}

pub fn run_coherent_point(sim: &CoherentSimulator, eta: f64, samples: usize, seed: u64, decoder: DecoderKind, run_id: &str) -> Result<PointOutput> {
    let code = &sim.code;
    let key = point_key(&code.family, code.size, eta);
    let profile = RotationProfile::uniform(code.n, eta);
    let (mut records, discarded) = coherent_records(sim, &profile, samples, seed, key)?;
    if decoder == DecoderKind::Coherent {
        records = records.iter().map(SampleRecord::coherent).collect();
    }
    let est = estimate_gamma(&records)?;
    let histogram = estimate_delta_distribution(&records)?;
    Ok(PointOutput {
        result: PointResult {
            run_id: run_id.to_string(),
            family: code.family.clone(),
            size: code.size,
            distance: code.z_distance(),
            eta_rad: eta,
            samples: records.len(),
            gamma_re: est.gamma_re,
            gamma_im: est.gamma_im,
            p_l: est.p_l,
            p_l_se: est.p_l_se,
            delta: Some(est.delta),
            delta_se: Some(est.delta_se),
            discarded,
        },
        histogram: Some(histogram),
        records,
    })
}

pub fn run_twirl_point(code: &SurfaceCode, ctx: &MatchingContext, eta: f64, trials: usize, seed: u64, run_id: &str) -> Result<PointOutput> {
    let key = point_key(&code.family, code.size, eta);
    let fails = twirl_failures(code, ctx, eta, trials, seed, key)?;
    let (p_l, p_l_se) = twirl_logical_rate(fails, trials)?;
    Ok(PointOutput {
        result: PointResult {
            run_id: run_id.to_string(),
            family: code.family.clone(),
            size: code.size,
            distance: code.z_distance(),
            eta_rad: eta,
            samples: trials,
            gamma_re: 1.0 - p_l,
            gamma_im: 0.0,
            p_l,
            p_l_se,
            delta: None,
            delta_se: None,
            discarded: 0,
        },
        histogram: None,
        records: Vec::new(),
    })
}

use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Subcommand};
use serde::Serialize;
use surfcoh_core::decoder::MatchingContext;
use surfcoh_core::estimators::{DeltaDistribution, SampleRecord, HIST_BINS};
use surfcoh_core::sampler::CoherentSimulator;
use surfcoh_core::sweep::{run_coherent_point, run_twirl_point, DecoderKind, ErrorModel, PointResult};
use surfcoh_core::{generate_code, LatticeFamily};

use crate::angle::{parse_angles, parse_sizes};
use crate::io::{code_hash, json_hash, write_csv, Provenance};

pub const COHERENT_SAMPLES: usize = 10_000;
pub const TWIRL_SAMPLES: usize = 40_000;

#[derive(Subcommand)]
pub enum SimCmd {
    /// Coherent Z-rotations simulated with fermion linear optics.
    Coherent(SimArgs),
    /// Pauli-twirled phase flips with probability sin^2(eta).
    Twirl(SimArgs),
}

#[derive(Args)]
pub struct SimArgs {
    #[arg(long)]
    family: LatticeFamily,
    /// Comma-separated sizes.
    #[arg(long)]
    sizes: String,
    /// Comma-separated angles, radians or `0.1pi`; `a:b:step` ranges allowed.
    #[arg(long)]
    eta: String,
    /// Default: 10^4 coherent, 4x10^4 twirl.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value = "mwpm")]
    decoder: Decoder,
    #[arg(long)]
    out: PathBuf,
    /// Histogram of delta2 per point (coherent only).
    #[arg(long)]
    histogram: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
pub enum Decoder {
    Mwpm,
    Coherent,
}

impl From<Decoder> for DecoderKind {
    fn from(d: Decoder) -> Self {
        match d {
            Decoder::Mwpm => DecoderKind::Mwpm,
            Decoder::Coherent => DecoderKind::Coherent,
        }
    }
}

/// Everything that determines the output bytes; paths and workers excluded.
#[derive(Serialize)]
struct RunConfig<'a> {
    command: &'a str,
    error_model: ErrorModel,
    family: &'a str,
    sizes: &'a [usize],
    eta: &'a [f64],
    samples: usize,
    seed: u64,
    decoder: DecoderKind,
}

#[derive(Serialize)]
struct HistogramRow<'a> {
    family: &'a str,
    size: usize,
    eta_rad: f64,
    bin_lo: f64,
    bin_hi: f64,
    count: u64,
}

fn warn_large_eta(etas: &[f64]) {
    for &e in etas {
        if e.abs() > FRAC_PI_4 {
            eprintln!("warning: eta = {e} exceeds pi/4");
        }
    }
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        Some(n) => Ok(rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(f)),
        None => Ok(f()),
    }
}

pub fn run(cmd: SimCmd) -> Result<()> {
    let (model, a) = match cmd {
        SimCmd::Coherent(a) => (ErrorModel::Coherent, a),
        SimCmd::Twirl(a) => (ErrorModel::Twirl, a),
    };
    let sizes = parse_sizes(&a.sizes)?;
    let etas = parse_angles(&a.eta)?;
    warn_large_eta(&etas);
    let samples = a.samples.unwrap_or(match model {
        ErrorModel::Coherent => COHERENT_SAMPLES,
        ErrorModel::Twirl => TWIRL_SAMPLES,
    });
    let decoder = DecoderKind::from(a.decoder);
    let config = RunConfig { command: "sim", error_model: model, family: a.family.name(), sizes: &sizes, eta: &etas, samples, seed: a.seed, decoder };
    let config_hash = json_hash(&config)?;
    let run_id = &config_hash[..12];

    let mut rows: Vec<PointResult> = Vec::new();
    let mut hist_rows = Vec::new();
    let mut prov = Provenance { config_hash: config_hash.clone(), codes: Vec::new() };
    let family = a.family.name();
    for &size in &sizes {
        let code = generate_code(a.family, size)?;
        prov.codes.push((family.to_string(), size, code_hash(&code)?));
        match model {
            ErrorModel::Coherent => {
                let sim = CoherentSimulator::new(code)?;
                for &eta in &etas {
                    let out = with_workers(a.workers, || run_coherent_point(&sim, eta, samples, a.seed, decoder, run_id))??;
                    log_point(&out.result);
                    if let Some(h) = &out.histogram {
                        for (i, &count) in h.delta2_counts.iter().enumerate() {
                            let (bin_lo, bin_hi) = DeltaDistribution::bin_edges(i);
                            hist_rows.push((size, eta, bin_lo, bin_hi, count));
                        }
                    }
                    rows.push(out.result);
                }
            }
            ErrorModel::Twirl => {
                let ctx = MatchingContext::new(&code)?;
                for &eta in &etas {
                    let out = with_workers(a.workers, || run_twirl_point(&code, &ctx, eta, samples, a.seed, run_id))??;
                    log_point(&out.result);
                    rows.push(out.result);
                }
            }
        }
    }
    write_csv(&a.out, &prov, &rows)?;
    if let Some(path) = &a.histogram {
        if model == ErrorModel::Twirl {
            eprintln!("warning: no histogram for twirl runs");
        } else {
            let rows: Vec<HistogramRow> = hist_rows
                .iter()
                .map(|&(size, eta_rad, bin_lo, bin_hi, count)| HistogramRow { family, size, eta_rad, bin_lo, bin_hi, count })
                .collect();
            debug_assert_eq!(rows.len() % HIST_BINS, 0);
            write_csv(path, &prov, &rows)?;
        }
    }
    Ok(())
}

fn log_point(r: &PointResult) {
    eprintln!(
        "{} size {} eta {:.5}: p_L {:.5} +- {:.5}{}",
        r.family,
        r.size,
        r.eta_rad,
        r.p_l,
        r.p_l_se,
        r.delta.map(|d| format!(", Delta {d:.5}")).unwrap_or_default()
    );
}

#[derive(Args)]
pub struct DistArgs {
    #[arg(long)]
    family: LatticeFamily,
    #[arg(long)]
    size: usize,
    /// A single angle, radians or `0.1pi`.
    #[arg(long)]
    eta: String,
    #[arg(long, default_value_t = COHERENT_SAMPLES)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value = "mwpm")]
    decoder: Decoder,
    /// Per-sample records.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    histogram: Option<PathBuf>,
}

#[derive(Serialize)]
struct RecordRow {
    index: usize,
    syndrome_hash: String,
    correction_weight: usize,
    q: f64,
    r: f64,
    c_re: f64,
    c_im: f64,
    delta2: f64,
    delta2_coh: f64,
    theta: Option<f64>,
}

impl RecordRow {
    fn new(index: usize, r: &SampleRecord) -> Self {
        RecordRow {
            index,
            syndrome_hash: format!("{:016x}", r.syndrome_hash),
            correction_weight: r.correction_weight,
            q: r.q,
            r: r.r,
            c_re: r.c_re,
            c_im: r.c_im,
            delta2: r.delta2,
            delta2_coh: r.delta2_coh,
            theta: r.theta,
        }
    }
}

/// Per-sample final-state records at one point.
pub fn dist(a: DistArgs) -> Result<()> {
    let etas = parse_angles(&a.eta)?;
    if etas.len() != 1 {
        return Err(surfcoh_core::Error::InvalidParameter("dist takes a single eta".into()).into());
    }
    let eta = etas[0];
    warn_large_eta(&etas);
    let decoder = DecoderKind::from(a.decoder);
    let config = RunConfig {
        command: "dist",
        error_model: ErrorModel::Coherent,
        family: a.family.name(),
        sizes: &[a.size],
        eta: &etas,
        samples: a.samples,
        seed: a.seed,
        decoder,
    };
    let config_hash = json_hash(&config)?;
    let sim = CoherentSimulator::new(generate_code(a.family, a.size)?)?;
    let prov = Provenance { config_hash: config_hash.clone(), codes: vec![(a.family.name().to_string(), a.size, code_hash(&sim.code)?)] };
    let out = with_workers(a.workers, || run_coherent_point(&sim, eta, a.samples, a.seed, decoder, &config_hash[..12]))??;
    log_point(&out.result);
    let rows: Vec<RecordRow> = out.records.iter().enumerate().map(|(i, r)| RecordRow::new(i, r)).collect();
    write_csv(&a.out, &prov, &rows)?;
    if let (Some(path), Some(h)) = (&a.histogram, &out.histogram) {
        let family = a.family.name();
        let rows: Vec<HistogramRow> = h
            .delta2_counts
            .iter()
            .enumerate()
            .map(|(i, &count)| {
                let (bin_lo, bin_hi) = DeltaDistribution::bin_edges(i);
                HistogramRow { family, size: a.size, eta_rad: eta, bin_lo, bin_hi, count }
            })
            .collect();
        write_csv(path, &prov, &rows)?;
    }
    Ok(())
}

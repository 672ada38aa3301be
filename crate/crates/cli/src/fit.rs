use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, ValueEnum};
use serde::Serialize;
use surfcoh_core::fit::{fit_threshold, FitPoint, FitResult};
use surfcoh_core::Error;

use crate::io::{read_header, read_results, sha256_hex, write_json};

#[derive(Clone, Copy, ValueEnum, Serialize)]
pub enum Observable {
    #[value(name = "p_L")]
    #[serde(rename = "p_L")]
    PL,
    #[value(name = "Delta")]
    Delta,
}

#[derive(Args)]
pub struct FitArgs {
    /// Results CSV from `sim`.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "p_L")]
    observable: Observable,
    /// Required when the file holds several families.
    #[arg(long)]
    family: Option<String>,
    /// Seed of the bootstrap resampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct FitReport {
    family: String,
    observable: Observable,
    input_sha256: String,
    input_header: Vec<String>,
    eta_th_over_pi: f64,
    sin2_eta_th: f64,
    #[serde(flatten)]
    fit: FitResult,
}

pub fn run(a: FitArgs) -> Result<()> {
    let rows = read_results(&a.input)?;
    let mut families: Vec<&str> = rows.iter().map(|r| r.family.as_str()).collect();
    families.sort_unstable();
    families.dedup();
    let family = match (&a.family, families.as_slice()) {
        (Some(f), _) => f.clone(),
        (None, [f]) => f.to_string(),
        (None, []) => return Err(Error::Fit("no rows in the results file".into()).into()),
        (None, _) => return Err(Error::InvalidParameter(format!("several families ({}); pick one with --family", families.join(", "))).into()),
    };
    let mut points = Vec::new();
    for r in rows.iter().filter(|r| r.family == family) {
        let (y, se) = match a.observable {
            Observable::PL => (r.p_l, r.p_l_se),
            Observable::Delta => match (r.delta, r.delta_se) {
                (Some(d), Some(s)) => (d, s),
                _ => return Err(Error::InvalidParameter("Delta is missing (twirl results?)".into()).into()),
            },
        };
        points.push(FitPoint { eta: r.eta_rad, distance: r.distance, y, se });
    }
    let fit = fit_threshold(&points, a.seed)?;
    eprintln!("eta_th = {:.5} ({:.4} pi) +- {:.5}, nu = {:.3}", fit.eta_th, fit.eta_th / std::f64::consts::PI, fit.eta_th_se, fit.nu);
    let report = FitReport {
        family,
        observable: a.observable,
        input_sha256: sha256_hex(&std::fs::read(&a.input)?),
        input_header: read_header(&a.input)?,
        eta_th_over_pi: fit.eta_th / std::f64::consts::PI,
        sin2_eta_th: fit.eta_th.sin().powi(2),
        fit,
    };
    write_json(a.out.as_deref(), &report)
}

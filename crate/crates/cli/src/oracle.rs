use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use serde::Serialize;
use surfcoh_core::majorana::FaceKind;
use surfcoh_core::oracle::{exact_channel, twirl_exhaustive, verify_class_structure, ClassReport};
use surfcoh_core::sampler::{syndrome_probability, CoherentSimulator, RotationProfile};
use surfcoh_core::{generate_code, Error, LatticeFamily};

use crate::angle::parse_angles;
use crate::io::write_json;

pub const TOLERANCE: f64 = 1e-8;

#[derive(Args)]
pub struct OracleArgs {
    #[arg(long, default_value = "square")]
    family: LatticeFamily,
    #[arg(long, default_value_t = 3)]
    size: usize,
    /// Uniform rotation angles to test.
    #[arg(long, default_value = "0.05pi,0.1pi,0.15pi")]
    eta: String,
    /// Reverse one link of the Kasteleyn orientation (negative control).
    #[arg(long)]
    corrupt_orientation: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SyndromeDiff {
    syndrome: String,
    p_oracle: f64,
    p_flo: f64,
    q_oracle: f64,
    q_flo: f64,
    r_oracle: f64,
    r_flo: f64,
}

#[derive(Serialize)]
struct EtaReport {
    eta_rad: f64,
    max_p_diff: f64,
    max_q_diff: f64,
    max_r_diff: f64,
    class: ClassReport,
    twirl_failure_exact: f64,
    syndromes: Vec<SyndromeDiff>,
}

#[derive(Serialize)]
struct Report {
    family: String,
    size: usize,
    n: usize,
    kasteleyn: bool,
    /// Faces with an even number of clockwise edges.
    orientation_defects: Vec<String>,
    tolerance: f64,
    passed: bool,
    points: Vec<EtaReport>,
}

/// Relative difference; both sides above `1e12` count as equal (infinite).
fn ratio_diff(a: f64, b: f64) -> f64 {
    if a > 1e12 && b > 1e12 {
        0.0
    } else if a > 1e12 || b > 1e12 {
        f64::INFINITY
    } else {
        (a - b).abs() / (1.0 + b)
    }
}

pub fn run(a: OracleArgs) -> Result<()> {
    let code = generate_code(a.family, a.size)?;
    let etas = parse_angles(&a.eta)?;
    let mut majorana = surfcoh_core::majorana::encode(&code)?;
    if a.corrupt_orientation {
        majorana.flip_link(0);
    }
    let orientation_defects: Vec<String> = majorana
        .clockwise_counts()
        .iter()
        .enumerate()
        .filter(|(_, &(_, c))| c % 2 == 0)
        .map(|(i, (kind, c))| format!("face {i} ({}): {c} clockwise edges", face_name(*kind)))
        .collect();
    let kasteleyn = orientation_defects.is_empty();
    let decoder = surfcoh_core::decoder::MatchingContext::new(&code)?;
    let sim = CoherentSimulator { code, majorana, decoder };

    let mut points = Vec::new();
    let mut passed = kasteleyn;
    for &eta in &etas {
        let profile = RotationProfile::uniform(sim.code.n, eta);
        let ch = exact_channel(&sim.code, &sim.decoder, &profile.eta)?;
        let mut syndromes = Vec::new();
        let (mut dp, mut dq, mut dr) = (0.0f64, 0.0f64, 0.0f64);
        for s in &ch.syndromes {
            let p = syndrome_probability(&sim.code, &sim.majorana, &profile, &s.correction);
            let qr = sim.ratios(&profile, &s.correction);
            let (p, (q, r)) = match (p, qr) {
                (Ok(p), Ok(qr)) => (p, qr),
                _ => (f64::NAN, (f64::NAN, f64::NAN)),
            };
            let gap = |x: f64| if x.is_nan() { f64::INFINITY } else { x };
            dp = dp.max(gap((p - s.p).abs()));
            dq = dq.max(gap(ratio_diff(q, s.q)));
            dr = dr.max(gap(ratio_diff(r, s.r)));
            syndromes.push(SyndromeDiff {
                syndrome: s.syndrome.iter().map(|&b| if b { '1' } else { '0' }).collect(),
                p_oracle: s.p,
                p_flo: p,
                q_oracle: s.q,
                q_flo: q,
                r_oracle: s.r,
                r_flo: r,
            });
        }
        let class = verify_class_structure(&sim.code, &sim.decoder, &profile.eta)?;
        let twirl_failure_exact = twirl_exhaustive(&sim.code, &sim.decoder, eta.sin().powi(2))?;
        passed &= dp <= TOLERANCE && dq <= TOLERANCE && dr <= TOLERANCE && class.passed;
        eprintln!("eta {eta:.5}: max |dP| {dp:.2e}, max |dq| {dq:.2e}, max |dr| {dr:.2e}, class check {}", if class.passed { "ok" } else { "FAILED" });
        points.push(EtaReport { eta_rad: eta, max_p_diff: dp, max_q_diff: dq, max_r_diff: dr, class, twirl_failure_exact, syndromes });
    }
    for d in &orientation_defects {
        eprintln!("orientation: {d}");
    }
    let report = Report {
        family: sim.code.family.clone(),
        size: sim.code.size,
        n: sim.code.n,
        kasteleyn,
        orientation_defects,
        tolerance: TOLERANCE,
        passed,
        points,
    };
    write_json(a.out.as_deref(), &report)?;
    if !passed {
        let why = if kasteleyn { "FLO and oracle disagree" } else { "orientation is not Kasteleyn" };
        return Err(Error::Validation(format!("oracle suite failed: {why}")).into());
    }
    eprintln!("oracle suite passed");
    Ok(())
}

fn face_name(kind: FaceKind) -> String {
    match kind {
        FaceKind::Qubit(q) => format!("qubit {q}"),
        FaceKind::ZStabilizer(k) => format!("Z-stabilizer {k}"),
        FaceKind::XStabilizer(k) => format!("X-stabilizer {k}"),
        FaceKind::Logical(b) => format!("logical {b:?}"),
    }
}

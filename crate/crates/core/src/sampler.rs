//! Syndrome sampling under coherent Z-rotations and the overlap ratios
//! `q_s`, `r_s`, all on top of the Gaussian-state engine.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;

use crate::code::SurfaceCode;
use crate::decoder::MatchingContext;
use crate::error::{Error, Result};
use crate::estimators::{syndrome_hash, SampleRecord};
use crate::flo::{GaussianState, ZERO_PROB};
use crate::majorana::{mode, Basis, MajoranaGraph};

/// Per-qubit rotation angles `eta_j` of `exp(i eta_j Z_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationProfile {
    pub eta: Vec<f64>,
}

impl RotationProfile {
    pub fn uniform(n: usize, eta: f64) -> Self {
        RotationProfile { eta: vec![eta; n] }
    }

    /// Folds the correction `Z(h)` into the angles; global phases are dropped.
    pub fn absorb(&self, h: &[bool]) -> Self {
        assert_eq!(h.len(), self.eta.len(), "correction length");
        let eta = self.eta.iter().zip(h).map(|(&e, &b)| if b { e + FRAC_PI_2 } else { e }).collect();
        RotationProfile { eta }
    }

    /// Folds `Z` on each qubit of `support`.
    pub fn absorb_support(&self, support: &[usize]) -> Self {
        let mut eta = self.eta.clone();
        for &a in support {
            eta[a] += FRAC_PI_2;
        }
        RotationProfile { eta }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementRecord {
    /// Single-qubit X outcomes `m_a = ±1`.
    pub m: Vec<i8>,
    pub log_prob: f64,
}

/// `true` marks an X-stabilizer reading -1.
pub fn syndrome_of_outcomes(code: &SurfaceCode, m: &[i8]) -> Vec<bool> {
    code.x_stabilizers.iter().map(|s| s.iter().filter(|&&a| m[a] < 0).count() % 2 == 1).collect()
}

fn x_dimers(a: usize) -> ((usize, usize), (usize, usize)) {
    ((mode(a, 0), mode(a, 1)), (mode(a, 2), mode(a, 3)))
}

fn rotate(state: &mut GaussianState, a: usize, eta: f64) {
    // exp(i eta Z) with Z = i c2 c3 is exp(-eta c2 c3).
    state.apply_rotation(mode(a, 1), mode(a, 2), -eta);
}

/// Samples single-qubit X outcomes of the rotated logical state of `basis`.
pub fn sample_syndrome<R: Rng + ?Sized>(
    code: &SurfaceCode,
    mg: &MajoranaGraph,
    profile: &RotationProfile,
    basis: Basis,
    rng: &mut R,
) -> Result<(MeasurementRecord, Vec<bool>)> {
    let mut state = GaussianState::from_matching(mg.mode_count, &mg.initial_matching(basis))?;
    let mut m = vec![0i8; mg.num_qubits];
    for &a in &mg.order {
        rotate(&mut state, a, profile.eta[a]);
        let (x, sx) = x_dimers(a);
        let wp = state.pair_weight(x, sx, 1);
        let wm = state.pair_weight(x, sx, -1);
        let total = wp + wm;
        if total < ZERO_PROB {
            return Err(Error::ImpossiblePostselection(total));
        }
        let out: i8 = if rng.gen::<f64>() * total < wp { 1 } else { -1 };
        state.measure(x.0, x.1, out)?;
        state.measure(sx.0, sx.1, out)?;
        m[a] = out;
    }
    let syndrome = syndrome_of_outcomes(code, &m);
    Ok((MeasurementRecord { m, log_prob: state.log_prob }, syndrome))
}

/// `ln` of the probability of reading `+1` on every qubit, or `None` if some
/// step is impossible.
pub fn log_postselect_all_plus(mg: &MajoranaGraph, profile: &RotationProfile, basis: Basis) -> Result<Option<f64>> {
    let mut state = GaussianState::from_matching(mg.mode_count, &mg.initial_matching(basis))?;
    for &a in &mg.order {
        rotate(&mut state, a, profile.eta[a]);
        let (x, sx) = x_dimers(a);
        for (p, q) in [x, sx] {
            match state.measure(p, q, 1) {
                Ok(_) => {}
                Err(Error::ImpossiblePostselection(_)) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Some(state.log_prob))
}

pub fn postselect_all_plus(mg: &MajoranaGraph, profile: &RotationProfile, basis: Basis) -> Result<f64> {
    Ok(log_postselect_all_plus(mg, profile, basis)?.map_or(0.0, f64::exp))
}

/// Ratio of the all-plus probabilities with and without `Z_L` folded in.
/// A vanishing denominator alone gives an infinite ratio.
pub fn overlap_ratio(code: &SurfaceCode, mg: &MajoranaGraph, profile_s: &RotationProfile, basis: Basis) -> Result<f64> {
    let den = log_postselect_all_plus(mg, profile_s, basis)?;
    let num = log_postselect_all_plus(mg, &profile_s.absorb_support(&code.logical_z), basis)?;
    match (num, den) {
        (Some(n), Some(d)) => Ok((n - d).exp()),
        (None, Some(_)) => Ok(0.0),
        (Some(_), None) => Ok(f64::INFINITY),
        (None, None) => Err(Error::Degenerate("both all-plus outcomes have zero probability".into())),
    }
}

pub fn compute_qs(code: &SurfaceCode, mg: &MajoranaGraph, profile_s: &RotationProfile) -> Result<f64> {
    overlap_ratio(code, mg, profile_s, Basis::X)
}

pub fn compute_rs(code: &SurfaceCode, mg: &MajoranaGraph, profile_s: &RotationProfile) -> Result<f64> {
    overlap_ratio(code, mg, profile_s, Basis::Y)
}

/// `P_s` of the syndrome corrected by `h`, from the two all-plus
/// probabilities normalized by the unrotated one.
pub fn syndrome_probability(code: &SurfaceCode, mg: &MajoranaGraph, profile: &RotationProfile, h: &[bool]) -> Result<f64> {
    let ps = profile.absorb(h);
    let norm = postselect_all_plus(mg, &RotationProfile::uniform(code.n, 0.0), Basis::X)?;
    if norm <= 0.0 {
        return Err(Error::Degenerate("unrotated all-plus outcome has zero probability".into()));
    }
    let plus = postselect_all_plus(mg, &ps, Basis::X)? + postselect_all_plus(mg, &ps.absorb_support(&code.logical_z), Basis::X)?;
    Ok(plus / norm)
}

/// Everything one coherent Monte Carlo sample needs, shared read-only.
pub struct CoherentSimulator {
    pub code: SurfaceCode,
    pub majorana: MajoranaGraph,
    pub decoder: MatchingContext,
}

impl CoherentSimulator {
    pub fn new(code: SurfaceCode) -> Result<Self> {
        let majorana = crate::majorana::encode(&code)?;
        if !majorana.verify_kasteleyn() {
            return Err(Error::Validation("Majorana graph is not Kasteleyn oriented".into()));
        }
        let decoder = MatchingContext::new(&code)?;
        Ok(CoherentSimulator { code, majorana, decoder })
    }

    /// Ratios `(q_s, r_s)` for the syndrome with correction `h`.
    pub fn ratios(&self, profile: &RotationProfile, h: &[bool]) -> Result<(f64, f64)> {
        let ps = profile.absorb(h);
        Ok((compute_qs(&self.code, &self.majorana, &ps)?, compute_rs(&self.code, &self.majorana, &ps)?))
    }

    /// One sample: draw a syndrome, decode it and evaluate `q_s`, `r_s`.
    pub fn sample<R: Rng + ?Sized>(&self, profile: &RotationProfile, rng: &mut R) -> Result<SampleRecord> {
        let (_, syndrome) = sample_syndrome(&self.code, &self.majorana, profile, Basis::X, rng)?;
        let h = self.decoder.decode(&syndrome)?;
        let (q, r) = self.ratios(profile, &h)?;
        let mut rec = SampleRecord::from_ratios(q, r, self.code.parity_class);
        rec.syndrome_hash = syndrome_hash(&syndrome);
        rec.correction_weight = h.iter().filter(|&&b| b).count();
        Ok(rec)
    }
}

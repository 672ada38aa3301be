//! Pauli-twirled baseline: independent Z flips with probability `sin^2 eta`.

use rand::Rng;

use crate::code::SurfaceCode;
use crate::decoder::MatchingContext;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwirlTrial {
    pub flips: Vec<bool>,
    pub correction: Vec<bool>,
    pub failed: bool,
}

/// Whether the residual `Z(f + h)` acts as `Z_L`, i.e. overlaps `X_L` oddly.
pub fn is_logical_failure(code: &SurfaceCode, residual: &[bool]) -> bool {
    code.logical_x.iter().filter(|&&a| residual[a]).count() % 2 == 1
}

pub fn run_twirl_trial<R: Rng + ?Sized>(code: &SurfaceCode, ctx: &MatchingContext, eta: f64, rng: &mut R) -> Result<TwirlTrial> {
    let p = eta.sin().powi(2);
    let flips: Vec<bool> = (0..code.n).map(|_| rng.gen::<f64>() < p).collect();
    let correction = ctx.decode(&code.syndrome_of(&flips))?;
    let residual: Vec<bool> = flips.iter().zip(&correction).map(|(a, b)| a ^ b).collect();
    let failed = is_logical_failure(code, &residual);
    Ok(TwirlTrial { flips, correction, failed })
}

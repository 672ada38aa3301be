//! Fixtures shared by the benchmarks.

use surfcoh_core::decoder::MatchingContext;
use surfcoh_core::sampler::CoherentSimulator;
use surfcoh_core::{generate_code, LatticeFamily, SurfaceCode};

pub fn code(family: LatticeFamily, size: usize) -> SurfaceCode {
    generate_code(family, size).expect("benchmark code")
}

pub fn simulator(family: LatticeFamily, size: usize) -> CoherentSimulator {
    CoherentSimulator::new(code(family, size)).expect("benchmark simulator")
}

pub fn matching(code: &SurfaceCode) -> MatchingContext {
    MatchingContext::new(code).expect("benchmark matching context")
}

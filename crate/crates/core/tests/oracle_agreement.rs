//! FLO pipeline against the state-vector oracle, syndrome by syndrome.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surfcoh_core::majorana::Basis;
use surfcoh_core::oracle::exact_channel;
use surfcoh_core::sampler::{postselect_all_plus, CoherentSimulator, RotationProfile};
use surfcoh_core::{generate_code, LatticeFamily};

/// Relative gap; ratios above `1e12` count as infinite on both sides.
fn ratio_gap(flo: f64, oracle: f64) -> f64 {
    if flo > 1e12 || oracle > 1e12 {
        return if flo > 1e12 && oracle > 1e12 { 0.0 } else { f64::INFINITY };
    }
    (flo - oracle).abs() / (1.0 + oracle)
}

fn compare(fam: LatticeFamily, size: usize, eta: &[f64]) -> (f64, f64, f64) {
    let sim = CoherentSimulator::new(generate_code(fam, size).unwrap()).unwrap();
    let profile = RotationProfile { eta: eta.to_vec() };
    let ch = exact_channel(&sim.code, &sim.decoder, eta).unwrap();
    let m2 = postselect_all_plus(&sim.majorana, &RotationProfile::uniform(sim.code.n, 0.0), Basis::X).unwrap();
    let (mut dq, mut dr, mut dp) = (0.0f64, 0.0f64, 0.0f64);
    for s in &ch.syndromes {
        let ps = profile.absorb(&s.correction);
        let (q, r) = sim.ratios(&profile, &s.correction).unwrap();
        let p = (postselect_all_plus(&sim.majorana, &ps, Basis::X).unwrap()
            + postselect_all_plus(&sim.majorana, &ps.absorb_support(&sim.code.logical_z), Basis::X).unwrap())
            / m2;
        dq = dq.max(ratio_gap(q, s.q));
        dr = dr.max(ratio_gap(r, s.r));
        dp = dp.max((p - s.p).abs());
    }
    (dq, dr, dp)
}

#[test]
fn small_codes_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (fam, size) in [(LatticeFamily::Square, 3), (LatticeFamily::Hexagonal, 3), (LatticeFamily::Kagome, 4), (LatticeFamily::DualHexagonal, 3)] {
        let n = generate_code(fam, size).unwrap().n;
        for _ in 0..3 {
            let eta: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::FRAC_PI_4)).collect();
            let (dq, dr, dp) = compare(fam, size, &eta);
            assert!(dq < 1e-8 && dr < 1e-8 && dp < 1e-10, "{fam} {size}: dq {dq:e} dr {dr:e} dp {dp:e}");
        }
    }
}

#[test]
fn uniform_rotation_hits_infinite_ratios() {
    // Square d = 3 at uniform 0.1 pi has syndromes that send |+_L> to |-_L>.
    let code = generate_code(LatticeFamily::Square, 3).unwrap();
    let eta = vec![0.1 * std::f64::consts::PI; code.n];
    let sim = CoherentSimulator::new(code).unwrap();
    let ch = exact_channel(&sim.code, &sim.decoder, &eta).unwrap();
    assert!(ch.syndromes.iter().any(|s| s.q > 1e12));
    let (dq, dr, dp) = compare(LatticeFamily::Square, 3, &eta);
    assert!(dq < 1e-8 && dr < 1e-8 && dp < 1e-10, "dq {dq:e} dr {dr:e} dp {dp:e}");
}

use proptest::prelude::*;
use surfcoh_core::code::relabel_qubits;
use surfcoh_core::graph::isomorphic;
use surfcoh_core::{classify, generate_code, generate_lattice, CodeClass, LatticeFamily, SurfaceCode};

fn overlap(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|q| b.contains(q)).count()
}

fn all_small_codes() -> Vec<SurfaceCode> {
    LatticeFamily::ALL
        .into_iter()
        .flat_map(|f| f.small_sizes().into_iter().map(move |s| generate_code(f, s).unwrap()))
        .collect()
}

#[test]
fn square_patches_are_rotated() {
    for d in [3, 5, 7] {
        let code = generate_code(LatticeFamily::Square, d).unwrap();
        assert_eq!(code.n, d * d);
        assert_eq!(code.logical_z.len(), d);
        assert_eq!(code.z_distance(), d);
        assert_eq!(code.x_distance(), d);
        assert!(code.z_stabilizers.iter().all(|s| s.len() == 2 || s.len() == 4));
    }
    assert_eq!(generate_code(LatticeFamily::Square, 25).unwrap().n, 625);
}

#[test]
fn hexagonal_has_weight_three_checks() {
    let code = generate_code(LatticeFamily::Hexagonal, 5).unwrap();
    let w3 = code.z_stabilizers.iter().filter(|s| s.len() == 3).count();
    assert!(2 * w3 > code.z_stabilizers.len());
}

#[test]
fn commutation_and_logical_overlap() {
    for code in all_small_codes() {
        let tag = format!("{} {}", code.family, code.size);
        for x in &code.x_stabilizers {
            for z in &code.z_stabilizers {
                assert_eq!(overlap(x, z) % 2, 0, "{tag}");
            }
            assert_eq!(overlap(x, &code.logical_z) % 2, 0, "{tag}");
        }
        for z in &code.z_stabilizers {
            assert_eq!(overlap(z, &code.logical_x) % 2, 0, "{tag}");
        }
        assert_eq!(overlap(&code.logical_z, &code.logical_x), 1, "{tag}");
    }
}

#[test]
fn euler_formula() {
    for fam in LatticeFamily::ALL {
        for size in fam.small_sizes() {
            let g = generate_lattice(fam, size).unwrap();
            let (v, e, f) = (g.num_vertices() as i64, g.num_edges() as i64, g.faces().len() as i64);
            assert_eq!(v - e + f, 2, "{fam} {size}");
        }
    }
}

#[test]
fn class_table() {
    use CodeClass::*;
    let expect = [
        (LatticeFamily::Square, EvenZ_OddLogical),
        (LatticeFamily::DualHexagonal, EvenZ_OddLogical),
        (LatticeFamily::Kagome, EvenZ_EvenLogical),
        (LatticeFamily::Hexagonal, OddZ),
        (LatticeFamily::TriHex, OddZ),
        (LatticeFamily::DualTriHex, OddZ),
        (LatticeFamily::DualKagome, OddZ),
    ];
    for (fam, class) in expect {
        for size in fam.small_sizes() {
            let code = generate_code(fam, size).unwrap();
            assert_eq!(classify(&code), class, "{fam} {size}");
            assert_eq!(code.parity_class, class);
        }
    }
}

#[test]
fn dual_is_an_involution() {
    for fam in LatticeFamily::ALL {
        for size in fam.small_sizes() {
            let g = generate_lattice(fam, size).unwrap();
            let dd = g.dual().unwrap().dual().unwrap();
            assert!(isomorphic(&g, &dd, true), "{fam} {size}");
        }
    }
    let hex = generate_lattice(LatticeFamily::Hexagonal, 5).unwrap();
    assert!(isomorphic(&hex.dual().unwrap(), &generate_lattice(LatticeFamily::DualHexagonal, 5).unwrap(), true));
}

#[test]
fn dual_needs_virtual_pair() {
    let mut g = generate_lattice(LatticeFamily::Square, 3).unwrap();
    g.virtual_pair = None;
    assert!(g.dual().is_err());
}

#[test]
fn doubly_odd_self_dual_with_odd_bulk() {
    for size in [3, 5, 7] {
        let g = generate_lattice(LatticeFamily::DoublyOdd, size).unwrap();
        assert!(isomorphic(&g, &g.dual().unwrap(), true), "size {size}");
        // Faces of the dual are the vertices of g.
        for h in [g.clone(), g.dual().unwrap()] {
            let vp = h.virtual_pair.unwrap();
            let faces = h.faces();
            let bulk: Vec<usize> =
                faces.darts.iter().filter(|ds| !ds.iter().any(|&d| vp.contains(&h.origin(d)))).map(Vec::len).collect();
            assert!(bulk.len() > 2);
            assert!(bulk.iter().all(|&k| k == 3 || k == 5), "size {size}: {bulk:?}");
        }
    }
}

#[test]
fn generation_is_deterministic() {
    for fam in [LatticeFamily::TriHex, LatticeFamily::DoublyOdd, LatticeFamily::DualKagome] {
        let s = fam.small_sizes()[1];
        assert_eq!(generate_code(fam, s).unwrap(), generate_code(fam, s).unwrap());
    }
}

#[test]
fn unsupported_sizes_are_rejected() {
    assert!(generate_lattice(LatticeFamily::Square, 4).is_err());
    assert!(generate_lattice(LatticeFamily::Square, 1).is_err());
    assert!(generate_lattice(LatticeFamily::Kagome, 3).is_err());
    assert!(generate_lattice(LatticeFamily::DoublyOdd, 6).is_err());
}

fn family() -> impl Strategy<Value = LatticeFamily> {
    prop::sample::select(LatticeFamily::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn class_ignores_qubit_labels(fam in family(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let code = generate_code(fam, fam.small_sizes()[0]).unwrap();
        let mut perm: Vec<usize> = (0..code.n).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(classify(&relabel_qubits(&code, &perm)), classify(&code));
    }
}

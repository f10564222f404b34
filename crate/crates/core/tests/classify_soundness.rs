//! Every P verdict names a solver that agrees with brute force on random
//! instances built from the classified types.

use orientkit::classify::{classify, GammaSpec};
use orientkit::instance::validate;
use orientkit::random::pool_instance;
use orientkit::solve::{solve_brute, Algorithm};
use orientkit::{SymmetricSpec, VertexKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn s(j: usize, set: &[usize]) -> SymmetricSpec {
    SymmetricSpec::new(j, set.iter().copied()).unwrap()
}

fn gamma(types: &[SymmetricSpec], dups: &[VertexKind], constants: bool) -> GammaSpec {
    GammaSpec {
        symmetric_types: types.to_vec(),
        duplicators: dups.iter().map(|k| k.expand()).collect(),
        has_constants: constants,
        terminators: Default::default(),
        other: Vec::new(),
    }
}

#[test]
fn p_verdicts_are_sound() {
    let cases: Vec<(GammaSpec, bool, Algorithm)> = vec![
        (gamma(&[s(2, &[0, 1, 2]), s(3, &[0, 1])], &[], true), false, Algorithm::TwoSat),
        (gamma(&[s(4, &[0, 2, 4]), s(3, &[1, 3])], &[], true), false, Algorithm::Affine),
        (gamma(&[s(3, &[0, 2, 3]), s(3, &[1])], &[], true), false, Algorithm::GapFree),
        (gamma(&[s(5, &[1]), s(5, &[0, 5])], &[], true), true, Algorithm::PlanarK5),
        (gamma(&[s(5, &[4]), s(5, &[0, 5]), s(3, &[2])], &[], true), true, Algorithm::PlanarK5),
        (gamma(&[s(7, &[0, 3]), s(3, &[0, 1]), s(3, &[1, 2, 3])], &[], false), false, Algorithm::TopDown),
        (gamma(&[s(7, &[4, 7]), s(3, &[2, 3]), s(3, &[0, 1, 2])], &[], false), false, Algorithm::BottomUp),
        (gamma(&[s(3, &[1])], &[VertexKind::Equalizer(5)], false), true, Algorithm::PlanarK5),
        (gamma(&[s(4, &[0]), s(4, &[4])], &[VertexKind::Equalizer(3)], false), false, Algorithm::TwoSat),
        (gamma(&[s(4, &[1]), s(5, &[2]), s(2, &[1])], &[VertexKind::Synchronizer], false), false, Algorithm::NetFlow),
        (gamma(&[s(4, &[3]), s(3, &[2])], &[VertexKind::Synchronizer], false), false, Algorithm::NetFlow),
        (gamma(&[s(3, &[0]), s(3, &[1]), s(3, &[3])], &[VertexKind::Synchronizer], false), false, Algorithm::NetFlow),
        (gamma(&[s(4, &[0]), s(4, &[3]), s(4, &[4])], &[VertexKind::Synchronizer], false), false, Algorithm::NetFlow),
        (gamma(&[s(4, &[2]), s(3, &[1])], &[VertexKind::Alternator(4)], false), true, Algorithm::PlanarLp),
        (gamma(&[s(5, &[1]), s(1, &[0])], &[VertexKind::Alternator(4), VertexKind::Alternator(6)], false), true, Algorithm::PlanarLp),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (g, planar, want) in cases {
        let v = classify(&g, planar).unwrap();
        assert_eq!(v.algorithm(), Some(want), "{g:?}");
        let kinds = g.kinds();
        let (mut done, mut sat) = (0, 0);
        while done < 500 {
            let Some(inst) = pool_instance(&mut rng, &kinds, 10, planar) else {
                continue;
            };
            let got = want.run(&inst).unwrap_or_else(|e| panic!("{want} on {g:?}: {e}"));
            let truth = solve_brute(&inst).unwrap();
            assert_eq!(got.is_some(), truth.is_some(), "{want} on {g:?}");
            if let Some(o) = got {
                assert!(validate(&inst, &o).is_empty());
                sat += 1;
            }
            done += 1;
        }
        assert!(sat > 0 && sat < 500, "{want}: {sat} of 500 satisfiable");
    }
}

mod common;

use std::f64::consts::FRAC_PI_4;

use entangle_teleport::formulas;
use entangle_teleport::measures::{correlation_information, entanglement};
use entangle_teleport::states::{bloch_decompose, random_mixed, random_pure, schmidt_pure, singlet};
use entangle_teleport::teleport::{teleport_closed_form, teleport_one, teleport_two};
use entangle_teleport::{Side, WernerChannel};

fn phi_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

#[test]
fn oracle_matches_closed_form_with_independent_channels() {
    for seed in 0..200u64 {
        let rho = random_pure(seed).projector();
        let rep = bloch_decompose(&rho).unwrap();
        // every input sees a few (Φ1, Φ2) pairs, every pair is covered
        for k in 0..3 {
            let idx = (seed as usize * 3 + k) % 121;
            let (p1, p2) = (phi_grid()[idx / 11], phi_grid()[idx % 11]);
            let ch1 = WernerChannel::new(p1).unwrap();
            let ch2 = WernerChannel::new(p2).unwrap();
            let out = teleport_two(&rho, ch1, ch2).unwrap();
            let expected = teleport_closed_form(&rep, ch1.kappa(), ch2.kappa());
            let got = bloch_decompose(&out.state).unwrap();
            assert!(got.max_abs_diff(&expected) < 1e-10, "seed {seed} Φ=({p1},{p2})");
        }
    }
}

#[test]
fn oracle_matches_closed_form_on_full_channel_grid() {
    let rho = random_pure(1234).projector();
    let rep = bloch_decompose(&rho).unwrap();
    for &p1 in &phi_grid() {
        for &p2 in &phi_grid() {
            let ch1 = WernerChannel::new(p1).unwrap();
            let ch2 = WernerChannel::new(p2).unwrap();
            let got = bloch_decompose(&teleport_two(&rho, ch1, ch2).unwrap().state).unwrap();
            assert!(got.max_abs_diff(&teleport_closed_form(&rep, ch1.kappa(), ch2.kappa())) < 1e-10);
        }
    }
}

#[test]
fn single_teleport_is_partial_contraction() {
    for seed in 0..50 {
        let rho = random_mixed(seed);
        let rep = bloch_decompose(&rho).unwrap();
        let ch = WernerChannel::new(-0.8 + 0.035 * seed as f64).unwrap();
        let a = bloch_decompose(&teleport_one(&rho, Side::A, ch).unwrap().state).unwrap();
        assert!(a.max_abs_diff(&teleport_closed_form(&rep, ch.kappa(), 1.0)) < 1e-10);
        let b = bloch_decompose(&teleport_one(&rho, Side::B, ch).unwrap().state).unwrap();
        assert!(b.max_abs_diff(&teleport_closed_form(&rep, 1.0, ch.kappa())) < 1e-10);
    }
}

#[test]
fn two_single_teleports_compose_to_double() {
    for seed in 0..30 {
        let rho = if seed % 2 == 0 { random_pure(seed).projector() } else { random_mixed(seed) };
        let ch1 = WernerChannel::new(0.1 * (seed % 11) as f64).unwrap();
        let ch2 = WernerChannel::new(1.0 - 0.07 * (seed % 13) as f64).unwrap();
        let step = teleport_one(&rho, Side::A, ch1).unwrap().state;
        let chained = teleport_one(&step, Side::B, ch2).unwrap().state;
        let joint = teleport_two(&rho, ch1, ch2).unwrap().state;
        assert!(chained.matrix().max_abs_diff(joint.matrix()) < 1e-10, "seed {seed}");
    }
}

#[test]
fn perfect_channels_reproduce_any_input() {
    for seed in 0..50 {
        let rho = random_mixed(seed);
        let out = teleport_two(&rho, WernerChannel::perfect(), WernerChannel::perfect()).unwrap();
        assert!(out.state.matrix().max_abs_diff(rho.matrix()) < 1e-10);
        for o in &out.outcomes {
            assert!(o.conditional_state.matrix().max_abs_diff(rho.matrix()) < 1e-10);
        }
    }
}

#[test]
fn outcome_probabilities_uniform_for_all_channels() {
    for seed in 0..20 {
        let rho = random_mixed(seed);
        for phi in [-1.0, -0.5, 0.0, 0.4, 1.0] {
            let ch = WernerChannel::new(phi).unwrap();
            let two = teleport_two(&rho, ch, WernerChannel::new(-phi / 2.0).unwrap()).unwrap();
            assert!(two.outcomes.iter().all(|o| (o.probability - 1.0 / 16.0).abs() < 1e-12));
            assert!((two.probability_sum() - 1.0).abs() < 1e-12);
            let one = teleport_one(&rho, Side::B, ch).unwrap();
            assert!(one.outcomes.iter().all(|o| (o.probability - 0.25).abs() < 1e-12));
        }
    }
}

#[test]
fn teleportation_is_linear_over_mixtures() {
    for seed in 0..30 {
        let r1 = random_mixed(seed);
        let r2 = random_pure(seed + 1000).projector();
        let p = (seed as f64 * 0.618).fract();
        let mix = r1.mix(&r2, p).unwrap();
        let ch1 = WernerChannel::new(0.3).unwrap();
        let ch2 = WernerChannel::new(0.75).unwrap();
        let lhs = teleport_two(&mix, ch1, ch2).unwrap().state;
        let rhs =
            teleport_two(&r1, ch1, ch2).unwrap().state.mix(&teleport_two(&r2, ch1, ch2).unwrap().state, p).unwrap();
        assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-12);
    }
}

#[test]
fn equal_e12_gives_equal_replica_entanglement() {
    // local-unitary covariance: any pure input with the same entanglement
    let mut rng = common::rng(3);
    for i in 1..=10 {
        let theta = FRAC_PI_4 * i as f64 / 10.0;
        let base = schmidt_pure(theta).projector();
        let moved =
            common::local_conjugate(&base, &common::random_unitary(&mut rng), &common::random_unitary(&mut rng));
        let ch = WernerChannel::new(0.7).unwrap();
        let e_base = entanglement(&teleport_two(&base, ch, ch).unwrap().state).unwrap();
        let e_moved = entanglement(&teleport_two(&moved, ch, ch).unwrap().state).unwrap();
        assert!((e_base - e_moved).abs() < 1e-10);
    }
}

#[test]
fn documented_examples() {
    let e = entanglement(
        &teleport_two(
            &schmidt_pure(FRAC_PI_4).projector(),
            WernerChannel::new(0.5).unwrap(),
            WernerChannel::new(0.5).unwrap(),
        )
        .unwrap()
        .state,
    )
    .unwrap();
    assert!((e - 1.5 / 9.0).abs() < 1e-12);

    let rho = schmidt_pure(0.5).projector();
    let out = teleport_two(&rho, WernerChannel::perfect(), WernerChannel::perfect()).unwrap();
    assert!(out.state.matrix().max_abs_diff(rho.matrix()) < 1e-10);

    let rep =
        bloch_decompose(&teleport_one(&singlet(), Side::A, WernerChannel::new(0.5).unwrap()).unwrap().state).unwrap();
    for n in 0..3 {
        assert!((rep.c[n][n] + 2.0 / 3.0).abs() < 1e-12);
    }
}

#[test]
fn inverse_intermediate_map_matches_oracle() {
    for i in 0..=10 {
        let e12 = i as f64 / 10.0;
        let rho = schmidt_pure(0.5 * e12.asin()).projector();
        for j in 0..=10 {
            let ew = j as f64 / 10.0;
            let rho72 = teleport_one(&rho, Side::A, WernerChannel::from_entanglement(ew).unwrap()).unwrap().state;
            let e72 = entanglement(&rho72).unwrap();
            assert!((e72 - formulas::intermediate_entanglement(e12, ew).unwrap()).abs() < 1e-10, "e12={e12} ew={ew}");
            if ew > 0.0 {
                let ic72 = correlation_information(&rho72).unwrap();
                assert!((formulas::intermediate_correlation_exact(e72, ew).unwrap() - ic72).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn singlet_through_channel_is_werner_with_channel_entanglement() {
    // a separate route to the intermediate state: a singlet stays Werner
    for j in 1..=10 {
        let ew = j as f64 / 10.0;
        let rho72 = teleport_one(&singlet(), Side::A, WernerChannel::from_entanglement(ew).unwrap()).unwrap().state;
        let werner = entangle_teleport::states::werner(ew).unwrap();
        assert!(rho72.matrix().max_abs_diff(werner.matrix()) < 1e-12);
        assert!((entanglement(&rho72).unwrap() - ew).abs() < 1e-10);
    }
}

mod common;

use qssamp::markov::{gen_family, stationary_distribution, Family, StationaryMethod};
use qssamp::sim::{acceptance_frequency, run_protocol, Mode, ProtocolConfig, SPrime};

#[test]
fn exact_parameters_reach_precision_on_ensemble() {
    for (name, chain) in common::protocol_ensemble() {
        let pi = stationary_distribution(&chain, StationaryMethod::LinearSolve).unwrap();
        let r = run_protocol(&chain, common::argmin(&pi), &ProtocolConfig::new(0.05)).unwrap();
        assert!(r.fidelity_sq >= 0.95, "{name}: {}", r.fidelity_sq);
        assert!((1.0 - r.fidelity_sq - r.infidelity).abs() < 1e-12, "{name}");
        assert_eq!(r.stage1.diagnostics.rounds, 7);
        assert_eq!(r.s_prime_source, "oracle-assisted");
    }
}

#[test]
fn sampled_acceptance_matches_conditional_probabilities() {
    let trials = 20_000u64;
    for (name, chain) in common::protocol_ensemble() {
        let pi = stationary_distribution(&chain, StationaryMethod::LinearSolve).unwrap();
        let r = run_protocol(&chain, common::argmin(&pi), &ProtocolConfig::new(0.05)).unwrap();
        for (stage, d) in [(1, &r.stage1.diagnostics), (2, &r.stage2.diagnostics)] {
            let p = d.success_prob;
            let freq = acceptance_frequency(&d.round_probabilities, trials, 17 + stage);
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            assert!(
                (freq - p).abs() <= 3.0 * se.max(1.0 / trials as f64),
                "{name} stage {stage}: {freq} vs {p} (se {se})"
            );
        }
    }
}

#[test]
fn sampled_mode_counts_restarts() {
    let chain = gen_family(Family::BirthDeath { up: 0.4, down: 0.25 }, 4, 0).unwrap();
    let exact = run_protocol(&chain, 0, &ProtocolConfig::new(0.05)).unwrap();
    let mut total_attempts = 0;
    for seed in 0..200 {
        let mut cfg = ProtocolConfig::new(0.05);
        cfg.mode = Mode::Sampled(seed);
        let r = run_protocol(&chain, 0, &cfg).unwrap();
        assert_eq!(r.fidelity_sq, exact.fidelity_sq);
        let a1 = r.stage1.attempts.unwrap();
        let a2 = r.stage2.attempts.unwrap();
        assert!(r.total_evolution_time >= exact.total_evolution_time - 1e-9);
        if a1 + a2 == 2 {
            assert!((r.total_evolution_time - exact.total_evolution_time).abs() < 1e-9);
        }
        total_attempts += a1 + a2;
    }
    // mean attempts per stage is 1/p
    let expected = 200.0 / exact.stage1.diagnostics.success_prob + 200.0 / exact.stage2.diagnostics.success_prob;
    assert!((total_attempts as f64 - expected).abs() / expected < 0.25);
}

#[test]
fn moving_off_s_star_lowers_fidelity() {
    let chain = gen_family(Family::BirthDeath { up: 0.4, down: 0.25 }, 4, 0).unwrap();
    let at = run_protocol(&chain, 0, &ProtocolConfig::new(0.05)).unwrap();
    let mut cfg = ProtocolConfig::new(0.05);
    cfg.s_prime = SPrime::StarOffset(0.08);
    let off = run_protocol(&chain, 0, &cfg).unwrap();
    assert!((off.s_prime - at.s_prime - 0.08).abs() < 1e-12);
    assert!(off.fidelity_sq < at.fidelity_sq);
    assert!(off.infidelity > at.infidelity);
    // stage 1 accepts more often closer to s = 1, where |j⟩ overlaps the zero-eigenvector more
    assert!(off.stage1.diagnostics.success_prob > at.stage1.diagnostics.success_prob);
}

#[test]
fn user_s_prime_is_labelled() {
    let chain = gen_family(Family::CycleLazy, 5, 0).unwrap();
    let r = run_protocol(&chain, 0, &ProtocolConfig::new(0.05).with_s_prime(0.7)).unwrap();
    assert_eq!(r.s_prime_source, "user");
    assert_eq!(r.s_prime, 0.7);
}

// One filtering stage on the pointer register: exact gap vs. a gap underestimated by half.

use nalgebra::DVector;
use num_complex::Complex64;
use qssamp::cost::default_copies;
use qssamp::hamiltonian::HamiltonianModel;
use qssamp::markov::{gen_family, spectral_gap, Family};
use qssamp::sim::{default_pointer_size, filter_stage, init_pointer, StageParams, TimeRule};

pub fn run_example() -> qssamp::Result<()> {
    let chain = gen_family(Family::TwoState { p: 0.1, q: 0.3 }, 2, 0)?;
    let h = HamiltonianModel::for_chain(&chain)?;
    let gap = spectral_gap(&chain)?;
    let eps = 0.05;
    let psi = DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);

    for (label, estimate) in [("exact gap", gap), ("gap / 2", gap / 2.0)] {
        let rule = TimeRule::default();
        let t = rule.round_time(estimate, 1.0)?;
        let pointer = init_pointer(default_pointer_size(t, 1.0), 1.0)?;
        let params = StageParams {
            eps,
            gap_estimate: estimate,
            copies: default_copies(eps)?,
            time_rule: rule,
        };
        let (_, d) = filter_stage(&h, &psi, &params, &pointer)?;
        println!(
            "{label:>9}: {} rounds of t = {:.3} on L = {}, overlap {:.4} -> {:.12}, success {:.4}, leakage {:.2e}",
            d.rounds, d.t_per_round, d.pointer_size, d.overlap_in, d.overlap_out, d.success_prob, d.leakage
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("filter failed");
}

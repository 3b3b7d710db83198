// Stationary distribution, spectral gap, mixing and hitting times of a small chain.

use qssamp::interpolation::{s_star, valid_targets};
use qssamp::markov::{
    chain_statistics, gen_family, relaxation_bounds, stationary_distribution, Family, StationaryMethod,
};

pub fn run_example() -> qssamp::Result<()> {
    let chain = gen_family(Family::BirthDeath { up: 0.4, down: 0.25 }, 5, 0)?;
    let power = stationary_distribution(&chain, StationaryMethod::PowerIteration)?;
    let solved = stationary_distribution(&chain, StationaryMethod::LinearSolve)?;
    println!("pi (power)  = {:.6?}", power.as_slice());
    println!("pi (solve)  = {:.6?}", solved.as_slice());

    for eps_mix in [0.25, 0.01] {
        let stats = chain_statistics(&chain, eps_mix, 0)?;
        let pi_min = solved.min();
        let (lo, hi) = relaxation_bounds(stats.delta, eps_mix, pi_min);
        println!(
            "eps_mix = {eps_mix}: gap {:.5}, t_mix {} in [{lo:.2}, {hi:.2}], t_hit(0) {:.3}",
            stats.delta, stats.t_mix, stats.t_hit
        );
    }

    for j in valid_targets(&solved) {
        println!("j = {j}: pi_j = {:.4}, s* = {:.4}", solved[j], s_star(solved[j])?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("analysis failed");
}

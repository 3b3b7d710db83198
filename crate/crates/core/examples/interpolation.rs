// The interpolated chain P(s) between a chain and its j-absorbing variant.
// At s* the stationary mass on j is exactly one half.

use qssamp::interpolation::{interpolated_chain, interpolated_stationary, s_star};
use qssamp::markov::{gen_family, stationary_distribution, Family, StationaryMethod};

pub fn run_example() -> qssamp::Result<()> {
    let chain = gen_family(Family::RandomReversible, 4, 7)?;
    let pi = stationary_distribution(&chain, StationaryMethod::LinearSolve)?;
    let j = pi.imin();
    let star = s_star(pi[j])?;
    println!("target j = {j}, pi_j = {:.4}, s* = {star:.6}", pi[j]);

    for s in [0.0, 0.5, star, 0.99] {
        let closed = interpolated_stationary(&chain, j, s)?;
        // same distribution, computed from P(s) directly
        let direct = stationary_distribution(&interpolated_chain(&chain, j, s)?, StationaryMethod::LinearSolve)?;
        println!(
            "s = {s:.4}: pi_j(s) = {:.6}, max |closed - direct| = {:.1e}",
            closed[j],
            (&closed - &direct).amax()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("interpolation failed");
}

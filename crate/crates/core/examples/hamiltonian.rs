// H = sqrt(I - D^2) built from the discriminant of a reversible chain.

use qssamp::hamiltonian::{hamiltonian_gap_from_chain_gap, HamiltonianModel};
use qssamp::markov::{gen_family, spectral_gap, stationary_distribution, Family, StationaryMethod};

pub fn run_example() -> qssamp::Result<()> {
    let chain = gen_family(Family::CycleLazy, 6, 0)?;
    let h = HamiltonianModel::for_chain(&chain)?;
    println!("chain eigenvalues {:.4?}", h.chain_eigenvalues());
    println!("mu                {:.4?}", h.mu());

    let pi = stationary_distribution(&chain, StationaryMethod::LinearSolve)?;
    let err = (h.zero_eigenvector() - pi.map(f64::sqrt)).amax();
    println!("|u_0 - sqrt(pi)|_max = {err:.1e}");

    let delta = spectral_gap(&chain)?;
    println!(
        "chain gap {delta:.5}, Hamiltonian gap {:.5} (from chain gap: {:.5})",
        h.gap(),
        hamiltonian_gap_from_chain_gap(delta)
    );
    for (mu, proj) in h.eigenspace_projectors(1e-9) {
        println!("  eigenspace mu = {mu:.4}, rank {:.0}", proj.trace());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("hamiltonian failed");
}

// Audits 1/gap(s') >= 4 T_hit / (1 - alpha^2) at s' = s* over two small ensembles.

use qssamp::cli::{audit_target, hitbound_ensemble};
use qssamp::cost::hitting_bound_ratio;
use qssamp::interpolation::s_star;
use qssamp::markov::{stationary_distribution, Family, StationaryMethod};

pub fn run_example() -> qssamp::Result<()> {
    for family in [Family::Complete, Family::RandomReversible] {
        let ensemble = hitbound_ensemble(family, 3, 8, 2, 0).map_err(|e| qssamp::Error::Config(e.message))?;
        let mut worst = f64::INFINITY;
        for m in &ensemble {
            let pi = stationary_distribution(&m.chain, StationaryMethod::LinearSolve)?;
            let j = audit_target(&pi);
            let hb = hitting_bound_ratio(&m.chain, j, s_star(pi[j])?)?;
            worst = worst.min(hb.ratio);
        }
        println!("{:>17}: {} chains, smallest ratio {worst:.4}", family.name(), ensemble.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("audit failed");
}

// What an overestimated gap costs: extra pointer copies vs. a longer second stage.

use qssamp::cost::{
    compare_routes, cost_report, sensitivity_copies, sensitivity_delta, underestimate_effect, CostInputs,
    GapStage,
};
use qssamp::interpolation::s_star;

pub fn run_example() -> qssamp::Result<()> {
    let eps = 0.05;
    println!("    C  copies  delta      cheaper");
    for c in [1.0, 1.25, 1.5, 1.75, 1.9] {
        let cmp = compare_routes(c, eps, 0.01, 0.004, GapStage::Stage1)?;
        println!(
            "{c:5.2}  {:6}  {:.4}  {:?}",
            sensitivity_copies(c, eps)?,
            sensitivity_delta(c, eps)?,
            cmp.cheaper
        );
    }
    if let Err(e) = sensitivity_copies(2.0, eps) {
        println!("C = 2: {e}");
    }

    let pi_j = 0.1;
    let report = cost_report(CostInputs {
        pi_j,
        s_prime: s_star(pi_j)?,
        eps,
        delta_s: 0.004,
        delta: 0.01,
        t_hit: 60.0,
        t_mix: 400.0,
    })?;
    let slower = underestimate_effect(&report, GapStage::Stage2, 0.01, 0.005)?;
    println!(
        "A = {:.3}, B = {:.3}; stage 2 with half the gap: cost x{:.4}, precision preserved: {}",
        report.a, report.b, slower.gap_inflation.1, slower.precision_preserved
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("sensitivity failed");
}

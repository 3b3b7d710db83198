// The two-stage protocol at s*, slightly off s*, and in sampled mode.

use qssamp::markov::{gen_family, Family};
use qssamp::sim::{run_protocol, Mode, ProtocolConfig, SPrime};

pub fn run_example() -> qssamp::Result<()> {
    let chain = gen_family(Family::BirthDeath { up: 0.4, down: 0.25 }, 4, 0)?;

    let at_star = run_protocol(&chain, 0, &ProtocolConfig::new(0.05))?;
    let mut off = ProtocolConfig::new(0.05);
    off.s_prime = SPrime::StarOffset(0.08);
    let off_star = run_protocol(&chain, 0, &off)?;

    for (label, r) in [("s*", &at_star), ("s* + 0.08", &off_star)] {
        println!(
            "{label:>9}: s' = {:.4}, fidelity^2 = 1 - {:.3e}, success {:.4}, evolution time {:.2}",
            r.s_prime, r.infidelity, r.success_prob, r.total_evolution_time
        );
    }

    let mut sampled = ProtocolConfig::new(0.05);
    sampled.mode = Mode::Sampled(11);
    let r = run_protocol(&chain, 0, &sampled)?;
    println!(
        "  sampled: attempts ({}, {}), evolution time incl. restarts {:.2}",
        r.stage1.attempts.unwrap_or(0),
        r.stage2.attempts.unwrap_or(0),
        r.total_evolution_time
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("protocol failed");
}

// A(s') and B(s') sweeps for the two reference (eps, pi_j) pairs, written as CSV.
//
// `cargo run --example figure1 -- out_dir` (defaults to a temp directory).

use qssamp::cost::{sweep_ab, DEFAULT_SWEEP_GRID, FIGURE1_PRESETS};
use std::path::PathBuf;

pub fn run_example() -> qssamp::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("qssamp-figure1"));
    std::fs::create_dir_all(&dir)?;

    for (eps, pi_j) in FIGURE1_PRESETS {
        let sweep = sweep_ab(pi_j, eps, DEFAULT_SWEEP_GRID)?;
        let path = dir.join(sweep.file_name());
        std::fs::write(&path, sweep.to_csv())?;
        let first = &sweep.rows[0];
        let last = sweep.rows.last().expect("non-empty grid");
        println!(
            "eps = {eps}, pi_j = {pi_j}: s* = {:?}, argmin A = {:.4}, B {:.3} -> {:.3}, A(last) = {:.1}  [{}]",
            sweep.s_star,
            sweep.argmin_a,
            first.b,
            last.b,
            last.a,
            path.display()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("sweep failed");
}

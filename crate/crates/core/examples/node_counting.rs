// Eigenvectors and their sign changes. The n-th state has n nodes.

use lagmesh::harness::{solve_spectrum, RunConfig};
use lagmesh::prelude::*;

fn main() -> Result<()> {
    let config = RunConfig::new(ExactReal::from_integer(1), 40)
        .with_states(6)
        .with_precision(60)
        .with_vectors(true);
    let report = solve_spectrum(&config)?;

    for (e, pair) in report.energies.iter().zip(&report.spectrum.pairs) {
        let v = pair.vector.as_deref().unwrap_or_default();
        // coarse picture of the bulk of the vector
        let profile: String = v
            .iter()
            .map(|c| match c.to_f64() {
                x if x > 0.05 => '+',
                x if x < -0.05 => '-',
                _ => '.',
            })
            .collect();
        println!("E{}  nodes {}  {profile}", e.index, e.nodes.unwrap_or(0));
    }
    Ok(())
}

// Reproduce stored convergence markers: each says how many decimal places a
// level must match at a given mesh size.

use lagmesh::harness::check_against_reference;
use lagmesh::prelude::*;

fn main() -> Result<()> {
    let max_points: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(50);
    let outcomes = check_against_reference(max_points, 60, KineticVariant::default())?;

    for o in &outcomes {
        println!(
            "{} lambda={} E{} N={} required={} matched={}",
            if o.passed() { "PASS" } else { "FAIL" },
            o.lambda,
            o.state,
            o.mesh_points,
            o.required,
            o.matched
        );
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    println!("{passed}/{} markers reproduced", outcomes.len());
    Ok(())
}

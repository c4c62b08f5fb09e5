// Decimal places gained as the mesh grows, scored against stored reference
// digits.

use lagmesh::harness::convergence_study;
use lagmesh::prelude::*;

fn main() -> Result<()> {
    let lambda = ExactReal::from_integer(1);
    let rows = convergence_study(&lambda, 0, &[20, 40, 60, 80], 80, KineticVariant::default())?;

    println!("{:>5}  {:>7}  energy", "N", "matched");
    for row in &rows {
        println!(
            "{:>5}  {:>7}  {}",
            row.mesh_points,
            row.matched_decimal_places,
            row.energy.truncated(row.matched_decimal_places + 2)
        );
    }
    Ok(())
}

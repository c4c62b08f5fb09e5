// Tunnelling splitting in the double well lambda = 16. The lowest pair is
// nearly degenerate, so it takes many digits to resolve the gap.

use lagmesh::harness::{solve_spectrum, RunConfig};
use lagmesh::prelude::*;

fn main() -> Result<()> {
    let p = 80;
    let ctx = with_precision(p)?;
    let config = RunConfig::new(ExactReal::from_integer(16), 100)
        .with_states(4)
        .with_precision(p);
    let report = solve_spectrum(&config)?;

    for e in &report.energies {
        println!("E{}  {}  ({} places)", e.index, e.digits, e.digits.fraction_len());
    }
    for k in [0, 2] {
        let (lo, hi) = (&report.spectrum.pairs[k].value, &report.spectrum.pairs[k + 1].value);
        let gap = BigReal::with_val(ctx.bits(), hi - lo);
        println!("E{} - E{} = {}", k + 1, k, gap.to_string_radix(10, Some(12)));
    }
    Ok(())
}

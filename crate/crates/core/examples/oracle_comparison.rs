// The mesh result next to a harmonic-oscillator basis diagonalization of the
// same Hamiltonian.

use lagmesh::harness::{solve_spectrum, RunConfig};
use lagmesh::oracle::{oracle_energies, HOBasisSpec};
use lagmesh::prelude::*;

fn main() -> Result<()> {
    let p = 60;
    let ctx = with_precision(p)?;

    let config = RunConfig::new(ExactReal::from_integer(1), 80)
        .with_states(3)
        .with_precision(p)
        .with_check_increment(None);
    let mesh = solve_spectrum(&config)?;

    let spec = HOBasisSpec::new(100, &ctx.one(), &ctx);
    let basis = oracle_energies(&spec, 3, None, &ctx)?;

    for (m, b) in mesh.energies.iter().zip(basis.values()) {
        let b = to_decimal_string(b, ctx.max_reported_digits(), &ctx)?;
        let agree = matched_decimal_places(&m.full_digits, &b);
        println!("E{}  mesh {}  basis {}  agree to {agree} places", m.index, m.full_digits.truncated(20), b.truncated(20));
    }
    Ok(())
}

// Lowest levels of V(x) = -(lambda/2) x^2 + x^4/4, assembled by hand from
// the mesh, the Hamiltonian and the eigensolver.

use lagmesh::prelude::*;

fn main() -> Result<()> {
    let ctx = with_precision(60)?;
    let mesh = build_mesh(60, &ctx.one(), &ctx)?;
    let pot = PotentialSpec::quartic(&ctx.real(-1), &ctx);
    let h = hamiltonian_matrix(&mesh, &pot, KineticVariant::default())?;
    let spectrum = solve_symmetric(&h, &EigenRequest::lowest(4))?;

    println!("lambda = -1, N = {}", mesh.len());
    for pair in &spectrum.pairs {
        println!("E{}  {}", pair.index, to_decimal_string(&pair.value, 14, &ctx)?);
    }
    Ok(())
}

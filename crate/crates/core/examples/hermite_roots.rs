// Zeros of a Hermite polynomial at 50 significant digits.
//
// Run with `cargo run --example hermite_roots -- 12`.

use lagmesh::prelude::*;

fn main() -> Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let ctx = with_precision(50)?;
    let roots = hermite_roots(n, &ctx)?;

    println!("zeros of H_{n}");
    for (i, x) in roots.roots().iter().enumerate() {
        println!("{i:>3}  {}", to_decimal_string(x, 40, &ctx)?);
    }

    // zeros come in +/- pairs
    let sum = roots.roots().iter().fold(ctx.zero(), |acc, x| acc + x);
    println!("sum of zeros: {}", sum.to_string_radix(10, Some(3)));
    Ok(())
}

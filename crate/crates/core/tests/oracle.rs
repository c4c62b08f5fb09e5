use lagmesh::numerics::{with_precision, BigReal, PrecisionContext};
use lagmesh::oracle::{oracle_energies, HOBasisSpec};

fn energies(m: usize, lambda: i32, omega: BigReal, k: usize, ctx: &PrecisionContext) -> Vec<BigReal> {
    let spec = HOBasisSpec::new(m, &ctx.real(lambda), ctx).with_omega(omega);
    oracle_energies(&spec, k, None, ctx)
        .unwrap()
        .values()
        .cloned()
        .collect()
}

#[test]
fn variational_monotonicity() {
    let ctx = with_precision(40).unwrap();
    let slack = ctx.ten_to_minus(25);
    for lambda in [-1, 1, 16] {
        let runs: Vec<Vec<BigReal>> = [20, 40, 80]
            .iter()
            .map(|&m| energies(m, lambda, ctx.one(), 5, &ctx))
            .collect();
        for pair in runs.windows(2) {
            for (coarse, fine) in pair[0].iter().zip(&pair[1]) {
                assert!(BigReal::with_val(ctx.bits(), coarse + &slack) >= *fine, "lambda {lambda}");
            }
        }
    }
}

#[test]
fn frequency_does_not_change_converged_energies() {
    let ctx = with_precision(40).unwrap();
    let a = energies(80, 1, ctx.one(), 3, &ctx);
    let b = energies(80, 1, ctx.real(2), 3, &ctx);
    for (x, y) in a.iter().zip(&b) {
        assert!(BigReal::with_val(ctx.bits(), x - y).abs() < ctx.ten_to_minus(8));
    }
}

#[test]
fn anharmonic_ground_state_above_harmonic_part() {
    // V = x^2/2 + x^4/4 >= x^2/2, so E0 > 1/2
    let ctx = with_precision(40).unwrap();
    let e = energies(40, -1, ctx.one(), 1, &ctx);
    assert!(e[0] > 0.5);
    assert!(e[0] < 0.7);
}

//! Full-scale runs at the largest stored markers. Minutes to hours each;
//! run with `cargo test --release --test extended -- --ignored`.

use lagmesh::harness::*;
use lagmesh::numerics::ExactReal;

fn reference_places(lambda: i64, state: usize, n: usize, precision: u32) -> usize {
    let config = RunConfig::new(ExactReal::from_integer(lambda), n)
        .with_states(state + 1)
        .with_precision(precision)
        .with_check_increment(None);
    solve_spectrum(&config).unwrap().energies[state].matched_reference.unwrap()
}

#[test]
#[ignore]
fn lambda_minus_one_at_2000() {
    assert!(reference_places(-1, 0, 2000, 300) >= 246);
}

#[test]
#[ignore]
fn lambda_one_state_19_at_2000() {
    assert!(reference_places(1, 19, 2000, 300) >= 219);
}

#[test]
#[ignore]
fn all_markers() {
    let outcomes = check_against_reference(2000, 120, Default::default()).unwrap();
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed()).collect();
    println!("{} of {} markers reproduced", outcomes.len() - failed.len(), outcomes.len());
    for o in &failed {
        println!("{o:?}");
    }
}

//! Physicists' Hermite polynomials and their zeros at working precision.
//!
//! Zeros are seeded from a double-precision Golub-Welsch computation (the
//! eigenvalues of the Jacobi matrix of the three-term recurrence) and then
//! polished by Newton's method in stages of doubling precision, so that most
//! iterations run at low precision and only the last stage pays for `P`
//! digits.

use rayon::prelude::*;
use rug::Assign;

use crate::error::{Error, Result};
use crate::numerics::{BigReal, PrecisionContext, MIN_DIGITS};

/// Newton steps allowed per precision stage.
pub const NEWTON_BUDGET: usize = 8;

#[derive(Debug, Clone)]
pub struct HermiteEvaluation {
    pub n: usize,
    pub x: BigReal,
    /// `H_n(x)`
    pub value: BigReal,
    /// `H_n'(x) = 2n H_{n-1}(x)`
    pub derivative: BigReal,
}

/// Evaluates `H_n(x)` and `H_n'(x)` by the three-term recurrence
/// `H_{k+1} = 2x H_k - 2k H_{k-1}`.
pub fn hermite_eval(n: usize, x: &BigReal, ctx: &PrecisionContext) -> Result<HermiteEvaluation> {
    let (value, previous) = recurrence(n, x, ctx.bits());
    let mut derivative = previous;
    derivative *= 2 * n as u64;
    if !value.is_finite() || !derivative.is_finite() {
        return Err(Error::Overflow("Hermite recurrence"));
    }
    Ok(HermiteEvaluation {
        n,
        x: ctx.lift(x),
        value,
        derivative,
    })
}

/// Returns `(H_n(x), H_{n-1}(x))`, with `H_{-1} = 0`.
fn recurrence(n: usize, x: &BigReal, bits: u32) -> (BigReal, BigReal) {
    let mut prev = BigReal::new(bits);
    let mut cur = BigReal::with_val(bits, 1);
    if n == 0 {
        return (cur, prev);
    }
    let two_x = BigReal::with_val(bits, x * 2u32);
    prev.assign(&cur);
    cur.assign(&two_x);
    let mut scratch = BigReal::new(bits);
    for k in 1..n {
        // scratch = 2x H_k - 2k H_{k-1}
        prev *= 2 * k as u64;
        scratch.assign(&two_x * &cur);
        scratch -= &prev;
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut scratch);
    }
    (cur, prev)
}

/// Newton correction `H_n(x) / H_n'(x)` at `bits` precision.
fn newton_correction(n: usize, x: &BigReal, bits: u32) -> Result<BigReal> {
    let (value, previous) = recurrence(n, x, bits);
    let mut step = value;
    step /= &previous;
    step /= 2 * n as u64;
    if !step.is_finite() {
        return Err(Error::Overflow("Hermite recurrence"));
    }
    Ok(step)
}

/// The `n` zeros of `H_n`, ascending.
#[derive(Debug, Clone)]
pub struct RootSet {
    n: usize,
    roots: Vec<BigReal>,
}

impl RootSet {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn roots(&self) -> &[BigReal] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// All zeros of `H_n` to working precision.
///
/// Only the positive half is polished; the negative half is its exact
/// mirror and `0` is inserted for odd `n`.
pub fn hermite_roots(n: usize, ctx: &PrecisionContext) -> Result<RootSet> {
    if n == 0 {
        return Err(Error::Config("Hermite roots need degree n >= 1".into()));
    }
    let guesses = positive_jacobi_eigenvalues(n);
    let stages = precision_stages(ctx.decimal_digits());
    let positive: Vec<BigReal> = guesses
        .par_iter()
        .map(|&guess| polish(n, guess, &stages))
        .collect::<Result<_>>()?;

    let mut roots = Vec::with_capacity(n);
    roots.extend(positive.iter().rev().map(|r| -r.clone()));
    if n % 2 == 1 {
        roots.push(ctx.zero());
    }
    roots.extend(positive);
    Ok(RootSet { n, roots })
}

/// Decimal precisions for the Newton stages: 30, 60, 120, ... capped at `p`.
fn precision_stages(p: u32) -> Vec<PrecisionContext> {
    let mut digits = MIN_DIGITS.min(p);
    let mut stages = Vec::new();
    loop {
        stages.push(PrecisionContext::new(digits).expect("stage precision above floor"));
        if digits >= p {
            break stages;
        }
        digits = (2 * digits).min(p);
    }
}

fn polish(n: usize, guess: f64, stages: &[PrecisionContext]) -> Result<BigReal> {
    let mut x = BigReal::with_val(53, guess);
    for stage in stages {
        x = stage.lift(&x);
        let threshold = stage.ten_to_minus(stage.decimal_digits() - 5);
        let mut converged = false;
        for _ in 0..NEWTON_BUDGET {
            let step = newton_correction(n, &x, stage.bits())?;
            x -= &step;
            let scale = x.clone().abs().max(&stage.one());
            if step.abs() < threshold.clone() * scale {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                what: "Newton polish of a Hermite root",
                iterations: NEWTON_BUDGET,
            });
        }
    }
    Ok(x)
}

/// Positive eigenvalues of the Jacobi matrix of the Hermite recurrence
/// (zero diagonal, off-diagonal `sqrt(k/2)`), ascending, in double precision.
fn positive_jacobi_eigenvalues(n: usize) -> Vec<f64> {
    let off_sq: Vec<f64> = (1..n).map(|k| k as f64 / 2.0).collect();
    // Count of eigenvalues strictly below mu.
    let count_below = |mu: f64| -> usize {
        let mut count = 0;
        let mut q = -mu;
        if q < 0.0 {
            count += 1;
        }
        for e2 in &off_sq {
            if q == 0.0 {
                q = f64::MIN_POSITIVE;
            }
            q = -mu - e2 / q;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    // Gershgorin: |x| <= 2 sqrt(n / 2).
    let bound = 2.0 * (n as f64 / 2.0).sqrt() + 1.0;
    let first_positive = n / 2 + n % 2;
    (first_positive..n)
        .map(|k| {
            let (mut lo, mut hi) = (0.0f64, bound);
            while hi - lo > 4.0 * f64::EPSILON * hi {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if count_below(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::with_precision;
    use rug::Integer;

    fn ctx(p: u32) -> PrecisionContext {
        with_precision(p).unwrap()
    }

    /// Exact integer coefficients of `H_n`, lowest power first.
    fn hermite_coefficients(n: usize) -> Vec<Integer> {
        let mut prev = vec![Integer::from(1)];
        if n == 0 {
            return prev;
        }
        let mut cur = vec![Integer::from(0), Integer::from(2)];
        for k in 1..n {
            let mut next = vec![Integer::new(); k + 2];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] += Integer::from(c * 2u32);
            }
            for (i, c) in prev.iter().enumerate() {
                next[i] -= Integer::from(c * (2 * k as u32));
            }
            prev = cur;
            cur = next;
        }
        cur
    }

    #[test]
    fn low_degree_values() {
        let c = ctx(40);
        let e = hermite_eval(2, &c.real(1), &c).unwrap();
        assert_eq!(e.value, 2);
        assert_eq!(e.derivative, 8);
        let e = hermite_eval(3, &c.zero(), &c).unwrap();
        assert_eq!(e.value, 0);
        assert_eq!(e.derivative, -12);
        let e = hermite_eval(0, &c.real(5), &c).unwrap();
        assert_eq!(e.value, 1);
        assert_eq!(e.derivative, 0);
    }

    #[test]
    fn degree_25_matches_exact_coefficient_sum() {
        let c = ctx(60);
        // x = 3/2 exactly: sum c_k (3/2)^k as an exact rational.
        let coeffs = hermite_coefficients(25);
        let mut exact = rug::Rational::new();
        let x = rug::Rational::from((3, 2));
        let mut power = rug::Rational::from(1);
        for coef in &coeffs {
            exact += rug::Rational::from(coef * &power);
            power *= &x;
        }
        let got = hermite_eval(25, &c.ratio(3, 2), &c).unwrap();
        let expected = c.real(&exact);
        let rel = BigReal::with_val(c.bits(), &got.value - &expected).abs() / expected.abs();
        assert!(rel < c.ten_to_minus(55), "relative error {rel}");

        // derivative through the coefficient list as well
        let mut exact_d = rug::Rational::new();
        let mut power = rug::Rational::from(1);
        for (k, coef) in coeffs.iter().enumerate().skip(1) {
            exact_d += rug::Rational::from(coef * &power) * k as u32;
            power *= &x;
        }
        let expected_d = c.real(&exact_d);
        let rel = BigReal::with_val(c.bits(), &got.derivative - &expected_d).abs() / expected_d.abs();
        assert!(rel < c.ten_to_minus(55));
    }

    #[test]
    fn closed_form_roots() {
        let c = ctx(80);
        let tol = c.ten_to_minus(75);
        let r1 = hermite_roots(1, &c).unwrap();
        assert_eq!(r1.roots().len(), 1);
        assert!(r1.roots()[0].is_zero());

        let r2 = hermite_roots(2, &c).unwrap();
        let s = c.ratio(1, 2).sqrt();
        assert!(BigReal::with_val(c.bits(), &r2.roots()[1] - &s).abs() < tol);
        assert_eq!(r2.roots()[0], -r2.roots()[1].clone());

        let r3 = hermite_roots(3, &c).unwrap();
        let s = c.ratio(3, 2).sqrt();
        assert!(r3.roots()[1].is_zero());
        assert!(BigReal::with_val(c.bits(), &r3.roots()[2] - &s).abs() < tol);
    }

    #[test]
    fn rejects_degree_zero() {
        assert!(hermite_roots(0, &ctx(30)).is_err());
    }

    #[test]
    fn residual_criterion_and_idempotence() {
        let c = ctx(100);
        let n = 50;
        let set = hermite_roots(n, &c).unwrap();
        let tol = c.ten_to_minus(c.decimal_digits() - 5);
        for r in set.roots() {
            // one more Newton step moves a converged root by less than tol
            let scale = r.clone().abs().max(&c.one());
            let step = newton_correction(n, r, c.bits()).unwrap();
            assert!(step.abs() < tol.clone() * &scale);
        }
    }

    #[test]
    fn interlacing_and_symmetry() {
        let c = ctx(40);
        let mut previous = hermite_roots(1, &c).unwrap();
        for n in 2..=100 {
            let set = hermite_roots(n, &c).unwrap();
            assert_eq!(set.len(), n);
            for w in set.roots().windows(2) {
                assert!(w[0] < w[1]);
            }
            for (a, b) in set.roots().iter().zip(set.roots().iter().rev()) {
                assert_eq!(*a, -b.clone());
            }
            // r_i < s_i < r_{i+1} with s the roots of H_{n-1}
            for (i, s) in previous.roots().iter().enumerate() {
                assert!(set.roots()[i] < *s && *s < set.roots()[i + 1], "n = {n}");
            }
            previous = set;
        }
    }

    #[test]
    fn sum_of_squares() {
        let c = ctx(120);
        for n in [7, 40, 101] {
            let set = hermite_roots(n, &c).unwrap();
            let mut sum = c.zero();
            let mut sq = c.zero();
            for r in set.roots() {
                sum += r;
                sq += r.clone().square();
            }
            assert!(sum.abs() < c.ten_to_minus(110));
            let expected = c.real(n * (n - 1)) / 2u32;
            let diff = BigReal::with_val(c.bits(), &sq - &expected).abs();
            assert!(diff < c.ten_to_minus(110), "n = {n}: {diff}");
        }
    }

    #[test]
    fn deterministic_across_pools() {
        let c = ctx(60);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| hermite_roots(33, &c).unwrap())
        };
        assert_eq!(run(1).roots(), run(3).roots());
    }
}

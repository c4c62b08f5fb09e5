use rug::Assign;

use super::Tridiagonal;
use crate::error::{Error, Result};
use crate::numerics::{BigReal, GUARD_DIGITS};

/// Sturm-sequence data for repeated counts on one tridiagonal matrix.
pub(crate) struct SturmSequence<'a> {
    t: &'a Tridiagonal,
    offdiag_sq: Vec<BigReal>,
    pivmin: BigReal,
}

impl<'a> SturmSequence<'a> {
    pub(crate) fn new(t: &'a Tridiagonal) -> Self {
        let ctx = t.context();
        let offdiag_sq: Vec<BigReal> = t.offdiag.iter().map(|e| e.clone().square()).collect();
        let mut pivmin = ctx.one();
        for e2 in &offdiag_sq {
            if *e2 > pivmin {
                pivmin.assign(e2);
            }
        }
        // far below anything representable at working precision
        pivmin >>= 2 * ctx.bits();
        SturmSequence {
            t,
            offdiag_sq,
            pivmin,
        }
    }

    /// Number of eigenvalues strictly below `mu`.
    ///
    /// Counts negative pivots of the LDL^T factorization of `T - mu I`. An
    /// exactly zero pivot is replaced by `+pivmin`, which is the pivot of
    /// `T - (mu - 0) I` approached from below, so an eigenvalue equal to `mu`
    /// is not counted.
    pub(crate) fn count(&self, mu: &BigReal) -> usize {
        let ctx = self.t.context();
        let mut q = ctx.zero();
        let mut ratio = ctx.zero();
        let mut count = 0;
        for (i, d) in self.t.diag.iter().enumerate() {
            if i == 0 {
                q.assign(d - mu);
            } else {
                if q.is_zero() {
                    q.assign(&self.pivmin);
                }
                ratio.assign(&self.offdiag_sq[i - 1] / &q);
                q.assign(d - mu);
                q -= &ratio;
            }
            if q.is_sign_negative() && !q.is_zero() {
                count += 1;
            }
        }
        count
    }
}

/// Number of eigenvalues of `t` strictly below `mu`.
pub fn sturm_count(t: &Tridiagonal, mu: &BigReal) -> usize {
    SturmSequence::new(t).count(mu)
}

/// Gershgorin interval `[lo, hi]` containing every eigenvalue of `t`.
pub fn gershgorin_bounds(t: &Tridiagonal) -> (BigReal, BigReal) {
    let ctx = t.context();
    let n = t.order();
    let mut lo: Option<BigReal> = None;
    let mut hi: Option<BigReal> = None;
    for i in 0..n {
        let mut radius = ctx.zero();
        if i > 0 {
            radius += &*t.offdiag[i - 1].as_abs();
        }
        if i + 1 < n {
            radius += &*t.offdiag[i].as_abs();
        }
        let low = BigReal::with_val(ctx.bits(), &t.diag[i] - &radius);
        let high = BigReal::with_val(ctx.bits(), &t.diag[i] + &radius);
        if lo.as_ref().map_or(true, |l| low < *l) {
            lo = Some(low);
        }
        if hi.as_ref().map_or(true, |h| high > *h) {
            hi = Some(high);
        }
    }
    (lo.unwrap_or_else(|| ctx.zero()), hi.unwrap_or_else(|| ctx.zero()))
}

/// `10^-(P-10) * max(|lo|, |hi|)` over the Gershgorin interval (at least `10^-(P-10)`).
pub fn default_tolerance(t: &Tridiagonal) -> BigReal {
    let ctx = t.context();
    let (lo, hi) = gershgorin_bounds(t);
    let mut scale = lo.abs().max(&hi.abs());
    if scale < 1 {
        scale = ctx.one();
    }
    scale * ctx.ten_to_minus(ctx.decimal_digits() - GUARD_DIGITS)
}

/// Gershgorin interval widened so the counts at its ends are certainly `0` and `N`.
pub(crate) fn safe_bracket(t: &Tridiagonal) -> (BigReal, BigReal) {
    let ctx = t.context();
    let (mut lo, mut hi) = gershgorin_bounds(t);
    let mut margin = lo.clone().abs().max(&hi.clone().abs());
    margin += 1u32;
    margin *= ctx.ten_to_minus(ctx.decimal_digits() / 2);
    lo -= &margin;
    hi += &margin;
    (lo, hi)
}

/// The `k`-th smallest eigenvalue (0-based), bisected until the bracket is narrower than `tol`.
pub fn bisect_eigenvalue(t: &Tridiagonal, k: usize, tol: &BigReal) -> Result<BigReal> {
    bisect_with(&SturmSequence::new(t), k, tol)
}

pub(crate) fn bisect_with(seq: &SturmSequence<'_>, k: usize, tol: &BigReal) -> Result<BigReal> {
    let t = seq.t;
    let ctx = t.context();
    let n = t.order();
    if k >= n {
        return Err(Error::Config(format!(
            "eigenvalue index {k} out of range for order {n}"
        )));
    }
    let (mut lo, mut hi) = safe_bracket(t);
    let (count_lo, count_hi) = (seq.count(&lo), seq.count(&hi));
    if count_lo != 0 || count_hi != n {
        return Err(Error::InconsistentSturm(format!(
            "counts {count_lo} and {count_hi} at the Gershgorin bounds of an order-{n} matrix"
        )));
    }

    let mut width = ctx.zero();
    let mut mid = ctx.zero();
    loop {
        width.assign(&hi - &lo);
        if width < *tol {
            break;
        }
        mid.assign(&lo + &hi);
        mid /= 2u32;
        if mid <= lo || mid >= hi {
            break;
        }
        if seq.count(&mid) > k {
            hi.assign(&mid);
        } else {
            lo.assign(&mid);
        }
    }
    mid.assign(&lo + &hi);
    mid /= 2u32;
    Ok(mid)
}

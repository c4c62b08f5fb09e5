use std::cmp::Ordering;

use rug::ops::NegAssign;
use rug::Assign;

use super::Tridiagonal;
use crate::error::{Error, Result};
use crate::numerics::{BigReal, PrecisionContext};

/// Iterations allowed per eigenvector.
pub const INVERSE_ITERATION_BUDGET: usize = 4;

/// LU factorization of `T - shift I` with partial pivoting.
///
/// `U` has two superdiagonals (`du`, `du2`) because row interchanges fill in
/// one extra band.
struct ShiftedLu {
    dl: Vec<BigReal>,
    d: Vec<BigReal>,
    du: Vec<BigReal>,
    du2: Vec<BigReal>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &Tridiagonal, shift: &BigReal) -> Self {
        let ctx = t.context();
        let n = t.order();
        let mut dl: Vec<BigReal> = t.offdiag.clone();
        let mut du: Vec<BigReal> = t.offdiag.clone();
        let mut du2 = vec![ctx.zero(); n.saturating_sub(2)];
        let mut d: Vec<BigReal> = t
            .diag
            .iter()
            .map(|x| BigReal::with_val(ctx.bits(), x - shift))
            .collect();
        let mut swapped = vec![false; n.saturating_sub(1)];
        let mut fact = ctx.zero();
        let mut temp = ctx.zero();

        for i in 0..n.saturating_sub(1) {
            if d[i].cmp_abs(&dl[i]) != Some(Ordering::Less) {
                if !d[i].is_zero() {
                    fact.assign(&dl[i] / &d[i]);
                    dl[i].assign(&fact);
                    temp.assign(&fact * &du[i]);
                    d[i + 1] -= &temp;
                }
            } else {
                // interchange rows i and i + 1
                fact.assign(&d[i] / &dl[i]);
                std::mem::swap(&mut d[i], &mut dl[i]);
                dl[i].assign(&fact);
                std::mem::swap(&mut du[i], &mut d[i + 1]);
                // d[i+1] = old du[i] - fact * old d[i+1]
                temp.assign(&fact * &du[i]);
                d[i + 1] -= &temp;
                if i + 2 < n {
                    du2[i].assign(&du[i + 1]);
                    du[i + 1] *= &fact;
                    du[i + 1].neg_assign();
                }
                swapped[i] = true;
            }
        }

        // A zero pivot means the shift hit an eigenvalue exactly; perturb it.
        let mut scale = ctx.one();
        for x in t.diag.iter().chain(t.offdiag.iter()) {
            if x.cmp_abs(&scale) == Some(Ordering::Greater) {
                scale.assign(&*x.as_abs());
            }
        }
        let tiny = scale * ctx.ten_to_minus(ctx.decimal_digits());
        for di in d.iter_mut() {
            if di.is_zero() {
                di.assign(&tiny);
            }
        }
        ShiftedLu {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [BigReal], ctx: &PrecisionContext) {
        let n = self.d.len();
        let mut temp = ctx.zero();
        for i in 0..n.saturating_sub(1) {
            let (head, tail) = b.split_at_mut(i + 1);
            if self.swapped[i] {
                std::mem::swap(&mut head[i], &mut tail[0]);
                temp.assign(&self.dl[i] * &head[i]);
                tail[0] -= &temp;
            } else {
                tail[0] -= &self.dl[i] * &head[i];
            }
        }
        for i in (0..n).rev() {
            let mut acc = ctx.lift(&b[i]);
            if i + 1 < n {
                acc -= &self.du[i] * &b[i + 1];
            }
            if i + 2 < n {
                acc -= &self.du2[i] * &b[i + 2];
            }
            acc /= &self.d[i];
            b[i] = acc;
        }
    }
}

fn norm(v: &[BigReal], ctx: &PrecisionContext) -> BigReal {
    let mut s = ctx.zero();
    for x in v {
        s += x.clone().square();
    }
    s.sqrt()
}

fn orthogonalize(v: &mut [BigReal], against: &[Vec<BigReal>], ctx: &PrecisionContext) {
    for u in against {
        let mut dot = ctx.zero();
        for (a, b) in v.iter().zip(u) {
            dot += a * b;
        }
        for (a, b) in v.iter_mut().zip(u) {
            *a -= &dot * b;
        }
    }
}

/// Deterministic starting vector with no special symmetry.
fn start_vector(n: usize, ctx: &PrecisionContext) -> Vec<BigReal> {
    (0..n)
        .map(|i| ctx.real(1 + (i * 7919 + 13) % 101) / 101u32)
        .collect()
}

/// Unit eigenvector of `t` for the eigenvalue approximation `e`, orthogonal to
/// the unit vectors in `prior`.
///
/// Stops once `||T v - e v|| <= residual_bound`.
pub(crate) fn tridiagonal_inverse_iteration(
    t: &Tridiagonal,
    e: &BigReal,
    prior: &[Vec<BigReal>],
    residual_bound: &BigReal,
) -> Result<Vec<BigReal>> {
    let ctx = t.context();
    let lu = ShiftedLu::factor(t, e);
    let mut v = start_vector(t.order(), ctx);
    for _ in 0..INVERSE_ITERATION_BUDGET {
        orthogonalize(&mut v, prior, ctx);
        lu.solve(&mut v, ctx);
        orthogonalize(&mut v, prior, ctx);
        let nv = norm(&v, ctx);
        if nv.is_zero() || !nv.is_finite() {
            return Err(Error::NoConvergence {
                what: "inverse iteration",
                iterations: INVERSE_ITERATION_BUDGET,
            });
        }
        for x in v.iter_mut() {
            *x /= &nv;
        }
        let tv = t.mul_vec(&v);
        let residual: Vec<BigReal> = tv
            .into_iter()
            .zip(&v)
            .map(|(mut r, x)| {
                r -= e * x;
                r
            })
            .collect();
        if norm(&residual, ctx) <= *residual_bound {
            return Ok(v);
        }
    }
    Err(Error::NoConvergence {
        what: "inverse iteration",
        iterations: INVERSE_ITERATION_BUDGET,
    })
}

/// Flips `v` so that its first component above `10^(-P/2)` in magnitude is positive.
pub(crate) fn fix_sign(v: &mut [BigReal], ctx: &PrecisionContext) {
    let threshold = ctx.ten_to_minus(ctx.decimal_digits() / 2);
    let flip = v
        .iter()
        .find(|x| x.cmp_abs(&threshold) == Some(Ordering::Greater))
        .is_some_and(|x| x.is_sign_negative());
    if flip {
        for x in v.iter_mut() {
            x.neg_assign();
        }
    }
}

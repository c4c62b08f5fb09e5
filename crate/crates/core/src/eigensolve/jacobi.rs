use rug::Assign;

use super::{Eigenpair, Spectrum};
use crate::error::{Error, Result};
use crate::mesh::SymmetricMatrix;
use crate::numerics::BigReal;

/// Largest order accepted by [`jacobi_eigen_full`].
pub const JACOBI_MAX_ORDER: usize = 64;

const SWEEP_BUDGET: usize = 60;

/// Full spectrum with vectors by cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius norm drops below `tol`. Meant as an
/// independent check on small matrices.
pub fn jacobi_eigen_full(a: &SymmetricMatrix, tol: &BigReal) -> Result<Spectrum> {
    let n = a.order();
    if n > JACOBI_MAX_ORDER {
        return Err(Error::Config(format!(
            "Jacobi diagonalization is limited to order {JACOBI_MAX_ORDER}, got {n}"
        )));
    }
    let ctx = *a.context();
    let mut m: Vec<Vec<BigReal>> = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j).clone()).collect())
        .collect();
    let mut v: Vec<Vec<BigReal>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { ctx.one() } else { ctx.zero() }).collect())
        .collect();

    let off_norm = |m: &[Vec<BigReal>]| {
        let mut s = ctx.zero();
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    s += x.clone().square();
                }
            }
        }
        s.sqrt()
    };

    let (mut theta, mut t, mut c, mut s, mut tmp) =
        (ctx.zero(), ctx.zero(), ctx.zero(), ctx.zero(), ctx.zero());
    let mut converged = off_norm(&m) < *tol;
    let mut sweeps = 0;
    while !converged {
        if sweeps == SWEEP_BUDGET {
            return Err(Error::NoConvergence {
                what: "Jacobi sweep",
                iterations: SWEEP_BUDGET,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].is_zero() {
                    continue;
                }
                // theta = (a_qq - a_pp) / (2 a_pq); t = sgn(theta) / (|theta| + sqrt(theta^2 + 1))
                theta.assign(&m[q][q] - &m[p][p]);
                tmp.assign(&m[p][q] * 2u32);
                theta /= &tmp;
                tmp.assign(&*theta.as_abs());
                t.assign(theta.square_ref());
                t += 1u32;
                t.sqrt_mut();
                t += &tmp;
                t.recip_mut();
                if theta.is_sign_negative() {
                    t = -t;
                }
                c.assign(t.square_ref());
                c += 1u32;
                c.sqrt_mut();
                c.recip_mut();
                s.assign(&t * &c);

                // A' = J^T A J with J the rotation in the (p, q) plane
                for k in 0..n {
                    let (akp, akq) = (m[k][p].clone(), m[k][q].clone());
                    m[k][p] = BigReal::with_val(ctx.bits(), &c * &akp) - BigReal::with_val(ctx.bits(), &s * &akq);
                    m[k][q] = BigReal::with_val(ctx.bits(), &s * &akp) + BigReal::with_val(ctx.bits(), &c * &akq);
                }
                for k in 0..n {
                    let (apk, aqk) = (m[p][k].clone(), m[q][k].clone());
                    m[p][k] = BigReal::with_val(ctx.bits(), &c * &apk) - BigReal::with_val(ctx.bits(), &s * &aqk);
                    m[q][k] = BigReal::with_val(ctx.bits(), &s * &apk) + BigReal::with_val(ctx.bits(), &c * &aqk);
                }
                m[p][q] = ctx.zero();
                m[q][p] = ctx.zero();
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p].clone(), row[q].clone());
                    row[p] = BigReal::with_val(ctx.bits(), &c * &vkp) - BigReal::with_val(ctx.bits(), &s * &vkq);
                    row[q] = BigReal::with_val(ctx.bits(), &s * &vkp) + BigReal::with_val(ctx.bits(), &c * &vkq);
                }
            }
        }
        converged = off_norm(&m) < *tol;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].partial_cmp(&m[j][j]).unwrap().then(i.cmp(&j)));
    let pairs = order
        .into_iter()
        .enumerate()
        .map(|(index, col)| {
            let mut vector: Vec<BigReal> = v.iter().map(|row| row[col].clone()).collect();
            super::inverse::fix_sign(&mut vector, &ctx);
            Eigenpair {
                index,
                value: m[col][col].clone(),
                vector: Some(vector),
            }
        })
        .collect();
    Ok(Spectrum { pairs })
}

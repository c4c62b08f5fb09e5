use rayon::prelude::*;

use crate::mesh::SymmetricMatrix;
use crate::numerics::{BigReal, PrecisionContext};

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<BigReal>,
    pub offdiag: Vec<BigReal>,
    ctx: PrecisionContext,
}

impl Tridiagonal {
    pub fn new(diag: Vec<BigReal>, offdiag: Vec<BigReal>, ctx: &PrecisionContext) -> Self {
        assert_eq!(
            offdiag.len() + 1,
            diag.len().max(1),
            "off-diagonal must be one shorter than the diagonal"
        );
        let diag = diag.iter().map(|x| ctx.lift(x)).collect();
        let offdiag = offdiag.iter().map(|x| ctx.lift(x)).collect();
        Tridiagonal { diag, offdiag, ctx: *ctx }
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn context(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn to_symmetric(&self) -> SymmetricMatrix {
        let n = self.order();
        let mut m = SymmetricMatrix::zeros(n, &self.ctx);
        for i in 0..n {
            m.set(i, i, &self.diag[i]);
            if i + 1 < n {
                m.set(i + 1, i, &self.offdiag[i]);
            }
        }
        m
    }

    /// `T v`.
    pub fn mul_vec(&self, v: &[BigReal]) -> Vec<BigReal> {
        let n = self.order();
        (0..n)
            .map(|i| {
                let mut acc = self.ctx.zero();
                acc += &self.diag[i] * &v[i];
                if i > 0 {
                    acc += &self.offdiag[i - 1] * &v[i - 1];
                }
                if i + 1 < n {
                    acc += &self.offdiag[i] * &v[i + 1];
                }
                acc
            })
            .collect()
    }
}

/// Householder reflector `I - beta v v^T` acting on components `start..`.
#[derive(Debug, Clone)]
struct Reflector {
    start: usize,
    v: Vec<BigReal>,
    beta: BigReal,
}

impl Reflector {
    fn apply(&self, x: &mut [BigReal], ctx: &PrecisionContext) {
        let tail = &mut x[self.start..];
        let mut dot = ctx.zero();
        for (vi, xi) in self.v.iter().zip(tail.iter()) {
            dot += vi * xi;
        }
        dot *= &self.beta;
        for (vi, xi) in self.v.iter().zip(tail.iter_mut()) {
            *xi -= &dot * vi;
        }
    }
}

/// Tridiagonal form `T = Q^T A Q` together with the reflectors making up `Q`.
#[derive(Debug, Clone)]
pub struct TridiagonalForm {
    pub tridiagonal: Tridiagonal,
    reflectors: Vec<Reflector>,
}

impl TridiagonalForm {
    /// Maps a vector from the tridiagonal basis back to the original one: `Q y`.
    pub fn to_original(&self, y: &[BigReal]) -> Vec<BigReal> {
        let ctx = self.tridiagonal.context();
        let mut x: Vec<BigReal> = y.iter().map(|v| ctx.lift(v)).collect();
        for r in self.reflectors.iter().rev() {
            r.apply(&mut x, ctx);
        }
        x
    }

    /// Maps a vector of the original basis into the tridiagonal one: `Q^T x`.
    pub fn to_tridiagonal_basis(&self, x: &[BigReal]) -> Vec<BigReal> {
        let ctx = self.tridiagonal.context();
        let mut y: Vec<BigReal> = x.iter().map(|v| ctx.lift(v)).collect();
        for r in &self.reflectors {
            r.apply(&mut y, ctx);
        }
        y
    }
}

/// Reduces `a` to tridiagonal form by an orthogonal similarity.
pub fn householder_tridiagonalize(a: &SymmetricMatrix) -> Tridiagonal {
    householder_decompose(a).tridiagonal
}

/// Householder reduction keeping the reflectors for eigenvector back-transformation.
pub fn householder_decompose(a: &SymmetricMatrix) -> TridiagonalForm {
    let ctx = *a.context();
    let n = a.order();
    let mut rows: Vec<Vec<BigReal>> = a.lower_rows().to_vec();
    let mut diag = Vec::with_capacity(n);
    let mut offdiag = Vec::with_capacity(n.saturating_sub(1));
    let mut reflectors = Vec::new();

    for k in 0..n.saturating_sub(2) {
        let start = k + 1;
        let x: Vec<BigReal> = (start..n).map(|i| rows[i][k].clone()).collect();
        let mut tail_sq = ctx.zero();
        for xi in &x[1..] {
            tail_sq += xi.clone().square();
        }
        diag.push(rows[k][k].clone());
        if tail_sq.is_zero() {
            offdiag.push(x[0].clone());
            continue;
        }

        let mut norm = x[0].clone().square();
        norm += &tail_sq;
        norm.sqrt_mut();
        let alpha = if x[0].is_sign_negative() { norm } else { -norm };

        let mut v = x;
        v[0] -= &alpha;
        let mut vtv = v[0].clone().square();
        vtv += &tail_sq;
        let beta = BigReal::with_val(ctx.bits(), 2u32 / &vtv);

        // p = beta A22 v, with A22 the trailing block from row/column `start`
        let p: Vec<BigReal> = (start..n)
            .into_par_iter()
            .map(|i| {
                let mut acc = ctx.zero();
                for (jj, vj) in v.iter().enumerate() {
                    let j = start + jj;
                    let aij = if j <= i { &rows[i][j] } else { &rows[j][i] };
                    acc += aij * vj;
                }
                acc *= &beta;
                acc
            })
            .collect();

        // w = p - (beta v^T p / 2) v
        let mut kappa = ctx.zero();
        for (vi, pi) in v.iter().zip(&p) {
            kappa += vi * pi;
        }
        kappa *= &beta;
        kappa /= 2u32;
        let w: Vec<BigReal> = p
            .into_iter()
            .zip(&v)
            .map(|(mut pi, vi)| {
                pi -= &kappa * vi;
                pi
            })
            .collect();

        // A22 -= v w^T + w v^T
        rows[start..].par_iter_mut().enumerate().for_each(|(ii, row)| {
            let (vi, wi) = (&v[ii], &w[ii]);
            for (jj, entry) in row[start..].iter_mut().enumerate() {
                *entry -= vi * &w[jj];
                *entry -= wi * &v[jj];
            }
        });

        offdiag.push(alpha);
        reflectors.push(Reflector { start, v, beta });
    }

    match n {
        0 => {}
        1 => diag.push(rows[0][0].clone()),
        _ => {
            diag.push(rows[n - 2][n - 2].clone());
            diag.push(rows[n - 1][n - 1].clone());
            offdiag.push(rows[n - 1][n - 2].clone());
        }
    }

    TridiagonalForm {
        tridiagonal: Tridiagonal {
            diag,
            offdiag,
            ctx,
        },
        reflectors,
    }
}

//! Baseline solver in a truncated harmonic-oscillator eigenbasis.
//!
//! The quartic Hamiltonian is projected onto the first `M` eigenstates of
//! `p^2/2 + omega^2 x^2/2`. Because the basis is nested in `M`, every
//! eigenvalue is a variational upper bound that decreases as `M` grows. This
//! path shares nothing with the Lagrange-mesh assembly and serves as an
//! independent check on its energies.

use crate::eigensolve::{solve_symmetric, EigenRequest, Spectrum};
use crate::error::{Error, Result};
use crate::mesh::SymmetricMatrix;
use crate::numerics::{BigReal, PrecisionContext};

/// Truncated basis for `-(1/2) d^2/dx^2 - (lambda/2) x^2 + q x^4`.
#[derive(Debug, Clone)]
pub struct HOBasisSpec {
    pub size: usize,
    pub omega: BigReal,
    pub lambda: BigReal,
    pub quartic_coefficient: BigReal,
}

impl HOBasisSpec {
    /// Basis of `size` states with `omega = 1` and `q = 1/4`.
    pub fn new(size: usize, lambda: &BigReal, ctx: &PrecisionContext) -> Self {
        HOBasisSpec {
            size,
            omega: ctx.one(),
            lambda: ctx.lift(lambda),
            quartic_coefficient: ctx.ratio(1, 4),
        }
    }

    pub fn with_omega(mut self, omega: BigReal) -> Self {
        self.omega = omega;
        self
    }

    pub fn with_quartic_coefficient(mut self, q: BigReal) -> Self {
        self.quartic_coefficient = q;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.size < 2 {
            return Err(Error::Config("oscillator basis needs at least 2 states".into()));
        }
        if !(self.omega.is_finite() && self.omega > 0) {
            return Err(Error::Config("oscillator frequency must be positive".into()));
        }
        Ok(())
    }
}

/// `<m|x^2|n>` in the oscillator basis of frequency `omega` (0-based states):
/// `(2n + 1)/(2 omega)` on the diagonal, `sqrt((n+1)(n+2))/(2 omega)` two off it.
pub fn x_squared_matrix(size: usize, omega: &BigReal, ctx: &PrecisionContext) -> SymmetricMatrix {
    let mut two_omega = ctx.lift(omega);
    two_omega *= 2u32;
    SymmetricMatrix::from_fn(size, ctx, |i, j| {
        let mut x = if i == j {
            ctx.real(2 * i + 1)
        } else if i == j + 2 {
            ctx.real((j + 1) * (j + 2)).sqrt()
        } else {
            return ctx.zero();
        };
        x /= &two_omega;
        x
    })
}

/// Square of a symmetric matrix, skipping zero entries, restricted to the
/// leading `keep` rows and columns.
fn leading_square(m: &SymmetricMatrix, keep: usize) -> SymmetricMatrix {
    let ctx = *m.context();
    let n = m.order();
    SymmetricMatrix::from_fn(keep, &ctx, |i, j| {
        let mut acc = ctx.zero();
        for k in 0..n {
            let (a, b) = (m.get(i, k), m.get(k, j));
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    })
}

/// `H = diag(omega (n + 1/2)) - ((lambda + omega^2)/2) X2 + q X4`.
///
/// `X4` is the leading `M x M` block of the square of the `(M + 2)`-state
/// `x^2` matrix. Since `x^2` only couples `|n>` to `|n +- 2>`, that block is
/// exactly the projected `x^4`.
pub fn ho_hamiltonian(spec: &HOBasisSpec, ctx: &PrecisionContext) -> Result<SymmetricMatrix> {
    spec.validate()?;
    let m = spec.size;
    let x2 = x_squared_matrix(m, &spec.omega, ctx);
    let x4 = leading_square(&x_squared_matrix(m + 2, &spec.omega, ctx), m);

    let mut c2 = spec.omega.clone().square();
    c2 += &spec.lambda;
    c2 /= 2u32;
    let q = ctx.lift(&spec.quartic_coefficient);

    let mut h = SymmetricMatrix::from_fn(m, ctx, |i, j| {
        let mut entry = ctx.zero();
        entry -= &c2 * x2.get(i, j);
        entry += &q * x4.get(i, j);
        entry
    });
    let diag: Vec<BigReal> = (0..m)
        .map(|n| ctx.real(2 * n + 1) * &spec.omega / 2u32)
        .collect();
    h.add_diagonal(&diag);
    Ok(h)
}

/// The `k` lowest energies in the truncated basis.
///
/// Only the lower half of a truncated spectrum is trusted, so `k <= M/2`.
pub fn oracle_energies(
    spec: &HOBasisSpec,
    k: usize,
    tol: Option<BigReal>,
    ctx: &PrecisionContext,
) -> Result<Spectrum> {
    if k > spec.size / 2 {
        return Err(Error::Config(format!(
            "{k} states requested from a basis of {} (at most {})",
            spec.size,
            spec.size / 2
        )));
    }
    let h = ho_hamiltonian(spec, ctx)?;
    let mut request = EigenRequest::lowest(k);
    request.tolerance = tol;
    solve_symmetric(&h, &request)
}

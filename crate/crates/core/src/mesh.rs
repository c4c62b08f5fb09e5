//! Lagrange-mesh Hamiltonian on the Hermite lattice.
//!
//! The basis functions are Lagrange functions attached to the zeros `u_i` of
//! `H_N`; physical mesh points are `x_i = h u_i`. In this basis the potential
//! is diagonal, `V(x_i)`, and the kinetic energy is a dense matrix with a
//! closed form in the `u_i`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use rug::Assign;

use crate::error::{Error, Result};
use crate::hermite::{hermite_roots, RootSet};
use crate::numerics::{BigReal, PrecisionContext};

/// Polynomial potential `V(x) = sum_k c_k x^k`.
#[derive(Debug, Clone)]
pub struct PotentialSpec {
    coefficients: Vec<(u32, BigReal)>,
}

impl PotentialSpec {
    /// Builds a potential from `(power, coefficient)` pairs. Repeated powers add up.
    pub fn new(coefficients: Vec<(u32, BigReal)>) -> Result<Self> {
        let spec = PotentialSpec { coefficients };
        spec.check_confining()?;
        Ok(spec)
    }

    /// `V(x) = -(lambda/2) x^2 + x^4/4`.
    pub fn quartic(lambda: &BigReal, ctx: &PrecisionContext) -> Self {
        let mut c2 = ctx.lift(lambda);
        c2 /= -2i32;
        PotentialSpec {
            coefficients: vec![(2, c2), (4, ctx.ratio(1, 4))],
        }
    }

    pub fn coefficients(&self) -> &[(u32, BigReal)] {
        &self.coefficients
    }

    /// Dense coefficients `c_0..=c_d`, with `d` the highest power listed.
    fn dense(&self, bits: u32) -> Vec<BigReal> {
        let degree = self.coefficients.iter().map(|(k, _)| *k).max().unwrap_or(0);
        let mut dense = vec![BigReal::new(bits); degree as usize + 1];
        for (k, c) in &self.coefficients {
            dense[*k as usize] += c;
        }
        dense
    }

    /// The highest power with a nonzero coefficient must be even and carry a
    /// positive coefficient.
    pub fn check_confining(&self) -> Result<()> {
        let dense = self.dense(64.max(self.max_prec()));
        match dense.iter().enumerate().rev().find(|(_, c)| !c.is_zero()) {
            Some((k, c)) if k > 0 && k % 2 == 0 && c.is_sign_positive() => Ok(()),
            Some((k, c)) => Err(Error::NonConfining(format!(
                "leading term has power {k} and coefficient {}",
                c.to_string_radix(10, Some(12))
            ))),
            None => Err(Error::NonConfining("potential is identically zero".into())),
        }
    }

    /// True when only even powers carry nonzero coefficients.
    pub fn is_even(&self) -> bool {
        self.coefficients
            .iter()
            .all(|(k, c)| k % 2 == 0 || c.is_zero())
    }

    fn max_prec(&self) -> u32 {
        self.coefficients.iter().map(|(_, c)| c.prec()).max().unwrap_or(64)
    }

    /// Horner evaluation at working precision.
    pub fn evaluate(&self, x: &BigReal, ctx: &PrecisionContext) -> BigReal {
        let dense = self.dense(ctx.bits());
        let mut acc = ctx.zero();
        for c in dense.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }
}

/// The discretization lattice: zeros of `H_N` and a scaling factor `h`.
#[derive(Debug, Clone)]
pub struct LagrangeMesh {
    scaling: BigReal,
    points: RootSet,
    ctx: PrecisionContext,
}

pub fn build_mesh(n: usize, h: &BigReal, ctx: &PrecisionContext) -> Result<LagrangeMesh> {
    if n == 0 {
        return Err(Error::Config("a mesh needs at least one point".into()));
    }
    if !(h.is_finite() && h.is_sign_positive() && !h.is_zero()) {
        return Err(Error::Config("mesh scaling h must be positive".into()));
    }
    Ok(LagrangeMesh {
        scaling: ctx.lift(h),
        points: hermite_roots(n, ctx)?,
        ctx: *ctx,
    })
}

impl LagrangeMesh {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn scaling(&self) -> &BigReal {
        &self.scaling
    }

    pub fn context(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// Hermite zeros `u_i`.
    pub fn points(&self) -> &[BigReal] {
        self.points.roots()
    }

    pub fn root_set(&self) -> &RootSet {
        &self.points
    }

    /// Physical coordinate `x_i = h u_i`.
    pub fn physical_point(&self, i: usize) -> BigReal {
        let mut x = self.ctx.lift(&self.points.roots()[i]);
        x *= &self.scaling;
        x
    }
}

/// Symmetric matrix holding only its lower triangle, row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    rows: Vec<Vec<BigReal>>,
    ctx: PrecisionContext,
}

impl SymmetricMatrix {
    pub fn zeros(order: usize, ctx: &PrecisionContext) -> Self {
        let rows = (0..order).map(|i| vec![ctx.zero(); i + 1]).collect();
        SymmetricMatrix { rows, ctx: *ctx }
    }

    /// Fills entry `(i, j)` with `f(i, j)` for `j <= i`, rows in parallel.
    pub fn from_fn<F>(order: usize, ctx: &PrecisionContext, f: F) -> Self
    where
        F: Fn(usize, usize) -> BigReal + Sync,
    {
        let rows = (0..order)
            .into_par_iter()
            .map(|i| (0..=i).map(|j| ctx.lift(&f(i, j))).collect())
            .collect();
        SymmetricMatrix { rows, ctx: *ctx }
    }

    /// Builds from a full row-major square array; only the lower triangle is read.
    pub fn from_dense(entries: &[Vec<BigReal>], ctx: &PrecisionContext) -> Self {
        Self::from_fn(entries.len(), ctx, |i, j| entries[i][j].clone())
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn context(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> &BigReal {
        if j <= i {
            &self.rows[i][j]
        } else {
            &self.rows[j][i]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: &BigReal) {
        let (r, c) = if j <= i { (i, j) } else { (j, i) };
        self.rows[r][c].assign(value);
    }

    pub(crate) fn lower_rows(&self) -> &[Vec<BigReal>] {
        &self.rows
    }

    pub fn max_abs(&self) -> BigReal {
        let mut best = self.ctx.zero();
        for x in self.rows.iter().flatten() {
            if x.cmp_abs(&best) == Some(std::cmp::Ordering::Greater) {
                best.assign(&*x.as_abs());
            }
        }
        best
    }

    pub fn trace(&self) -> BigReal {
        let mut t = self.ctx.zero();
        for (i, row) in self.rows.iter().enumerate() {
            t += &row[i];
        }
        t
    }

    /// `A v`, rows in parallel with a fixed summation order.
    pub fn mul_vec(&self, v: &[BigReal]) -> Vec<BigReal> {
        let n = self.order();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut acc = self.ctx.zero();
                for (j, vj) in v.iter().enumerate() {
                    acc += self.get(i, j) * vj;
                }
                acc
            })
            .collect()
    }

    /// Adds `d_i` to the diagonal.
    pub fn add_diagonal(&mut self, d: &[BigReal]) {
        for (i, x) in d.iter().enumerate() {
            self.rows[i][i] += x;
        }
    }
}

/// Which closed form of the Lagrange-Hermite kinetic matrix to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum KineticVariant {
    /// Exact matrix elements of `-d^2/du^2`.
    Exact,
    /// Matrix elements evaluated with the N-point Gauss-Hermite rule.
    #[default]
    GaussApprox,
}

impl KineticVariant {
    pub fn name(self) -> &'static str {
        match self {
            KineticVariant::Exact => "exact",
            KineticVariant::GaussApprox => "gauss",
        }
    }
}

impl fmt::Display for KineticVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KineticVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(KineticVariant::Exact),
            "gauss" | "gaussapprox" | "gauss-approx" => Ok(KineticVariant::GaussApprox),
            other => Err(Error::Config(format!("unknown kinetic variant {other:?}"))),
        }
    }
}

impl serde::Serialize for KineticVariant {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Kinetic matrix `(1 / 2h^2) T`, with `T` the matrix of `-d^2/du^2`:
///
/// * exact: `T_ii = (4N - 1 - 2u_i^2) / 6`, `T_ij = (-1)^(i-j) [2/(u_i - u_j)^2 - 1/2]`
/// * Gauss: `T_ii = (2N + 1 - u_i^2) / 3`, `T_ij = (-1)^(i-j) 2/(u_i - u_j)^2`
pub fn kinetic_matrix(mesh: &LagrangeMesh, variant: KineticVariant) -> SymmetricMatrix {
    let ctx = mesh.context();
    let n = mesh.len();
    let u = mesh.points();
    let mut prefactor = mesh.scaling().clone().square();
    prefactor *= 2u32;
    prefactor.recip_mut();

    SymmetricMatrix::from_fn(n, ctx, |i, j| {
        let mut t = if i == j {
            let u2 = ctx.lift(&u[i]).square();
            match variant {
                KineticVariant::Exact => (ctx.real(4 * n - 1) - u2 * 2u32) / 6u32,
                KineticVariant::GaussApprox => (ctx.real(2 * n + 1) - u2) / 3u32,
            }
        } else {
            let mut d = ctx.lift(&u[i]);
            d -= &u[j];
            let mut t = d.square().recip() * 2u32;
            if variant == KineticVariant::Exact {
                t -= 0.5f64;
            }
            if (i - j) % 2 == 1 {
                t = -t;
            }
            t
        };
        t *= &prefactor;
        t
    })
}

/// `V(h u_i)` for every mesh point.
pub fn potential_on_mesh(mesh: &LagrangeMesh, pot: &PotentialSpec) -> Vec<BigReal> {
    (0..mesh.len())
        .into_par_iter()
        .map(|i| pot.evaluate(&mesh.physical_point(i), mesh.context()))
        .collect()
}

/// `H = T + diag(V)`.
pub fn hamiltonian_matrix(
    mesh: &LagrangeMesh,
    pot: &PotentialSpec,
    variant: KineticVariant,
) -> Result<SymmetricMatrix> {
    pot.check_confining()?;
    let mut h = kinetic_matrix(mesh, variant);
    h.add_diagonal(&potential_on_mesh(mesh, pot));
    Ok(h)
}

/// Plain-text dump: header `N P variant h`, then one row of decimal strings per line.
pub fn write_matrix_dump<W: Write>(
    out: &mut W,
    matrix: &SymmetricMatrix,
    mesh: &LagrangeMesh,
    variant: KineticVariant,
) -> Result<()> {
    let ctx = matrix.context();
    let digits = ctx.decimal_digits() as usize;
    writeln!(
        out,
        "{} {} {} {}",
        matrix.order(),
        ctx.decimal_digits(),
        variant,
        mesh.scaling().to_string_radix(10, Some(digits))
    )?;
    for i in 0..matrix.order() {
        let row: Vec<String> = (0..matrix.order())
            .map(|j| matrix.get(i, j).to_string_radix(10, Some(digits)))
            .collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

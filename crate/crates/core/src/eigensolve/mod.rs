//! Selected eigenpairs of dense symmetric matrices in working precision.
//!
//! Production path: Householder reduction to tridiagonal form, Sturm-sequence
//! bisection for each requested eigenvalue, then inverse iteration on the
//! tridiagonal matrix for eigenvectors, mapped back through the stored
//! reflectors. Cyclic Jacobi ([`jacobi_eigen_full`]) is an independent path
//! for small orders and is only used to cross-check.

mod bisection;
mod householder;
mod inverse;
mod jacobi;

use rayon::prelude::*;
use rug::Assign;

pub use bisection::{bisect_eigenvalue, default_tolerance, gershgorin_bounds, sturm_count};
pub use householder::{householder_decompose, householder_tridiagonalize, Tridiagonal, TridiagonalForm};
pub use inverse::INVERSE_ITERATION_BUDGET;
pub use jacobi::{jacobi_eigen_full, JACOBI_MAX_ORDER};

use crate::error::{Error, Result};
use crate::mesh::SymmetricMatrix;
use crate::numerics::BigReal;

/// Which eigenpairs to compute.
#[derive(Debug, Clone)]
pub struct EigenRequest {
    /// Ascending-order indices, 0 = lowest.
    pub indices: Vec<usize>,
    pub want_vectors: bool,
    /// Bisection bracket width; `None` selects [`default_tolerance`].
    pub tolerance: Option<BigReal>,
}

impl EigenRequest {
    /// The `k` lowest eigenvalues.
    pub fn lowest(k: usize) -> Self {
        EigenRequest {
            indices: (0..k).collect(),
            want_vectors: false,
            tolerance: None,
        }
    }

    pub fn with_vectors(mut self, want: bool) -> Self {
        self.want_vectors = want;
        self
    }

    pub fn with_tolerance(mut self, tol: BigReal) -> Self {
        self.tolerance = Some(tol);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub index: usize,
    pub value: BigReal,
    /// Unit Euclidean norm; first component above `10^(-P/2)` is positive.
    pub vector: Option<Vec<BigReal>>,
}

/// Eigenpairs in ascending order of eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub pairs: Vec<Eigenpair>,
}

impl Spectrum {
    pub fn values(&self) -> impl Iterator<Item = &BigReal> {
        self.pairs.iter().map(|p| &p.value)
    }

    pub fn get(&self, index: usize) -> Option<&Eigenpair> {
        self.pairs.iter().find(|p| p.index == index)
    }
}

/// Eigenvalues of `t` at the given indices, bisected in parallel.
pub fn tridiagonal_eigenvalues(t: &Tridiagonal, indices: &[usize], tol: &BigReal) -> Result<Vec<BigReal>> {
    let seq = bisection::SturmSequence::new(t);
    indices
        .par_iter()
        .map(|&k| bisection::bisect_with(&seq, k, tol))
        .collect()
}

/// `tol * max|A_ij| * N`, the residual allowed for a returned eigenvector.
pub fn residual_bound(a: &SymmetricMatrix, tol: &BigReal) -> BigReal {
    let mut scale = a.max_abs();
    if scale < 1 {
        scale = a.context().one();
    }
    scale * tol * a.order() as u64
}

/// `||A v - e v||_2`.
pub fn residual_norm(a: &SymmetricMatrix, e: &BigReal, v: &[BigReal]) -> BigReal {
    let ctx = a.context();
    let av = a.mul_vec(v);
    let mut sum = ctx.zero();
    let mut r = ctx.zero();
    for (avi, vi) in av.iter().zip(v) {
        r.assign(e * vi);
        r -= avi;
        r.square_mut();
        sum += &r;
    }
    sum.sqrt()
}

/// Eigenvector of `a` for the (already accurate) eigenvalue `e`, orthogonal
/// to `prior_vectors`.
pub fn inverse_iteration(
    a: &SymmetricMatrix,
    e: &BigReal,
    prior_vectors: &[Vec<BigReal>],
) -> Result<Vec<BigReal>> {
    let form = householder_decompose(a);
    let tol = default_tolerance(&form.tridiagonal);
    eigenvector_from_form(a, &form, e, prior_vectors, &tol)
}

fn eigenvector_from_form(
    a: &SymmetricMatrix,
    form: &TridiagonalForm,
    e: &BigReal,
    prior_vectors: &[Vec<BigReal>],
    tol: &BigReal,
) -> Result<Vec<BigReal>> {
    let ctx = a.context();
    let bound = residual_bound(a, tol);
    let prior: Vec<Vec<BigReal>> = prior_vectors
        .iter()
        .map(|v| form.to_tridiagonal_basis(v))
        .collect();
    let y = inverse::tridiagonal_inverse_iteration(&form.tridiagonal, e, &prior, &bound)?;
    let mut x = form.to_original(&y);
    inverse::fix_sign(&mut x, ctx);
    if residual_norm(a, e, &x) > bound {
        return Err(Error::NoConvergence {
            what: "inverse iteration (back-transformed residual)",
            iterations: INVERSE_ITERATION_BUDGET,
        });
    }
    Ok(x)
}

/// Requested eigenpairs of `a`.
///
/// Vectors are computed in ascending order; each is orthogonalized against
/// earlier ones whose eigenvalue lies within `10^(-P/2)` of its own, which
/// separates quasi-degenerate pairs.
pub fn solve_symmetric(a: &SymmetricMatrix, request: &EigenRequest) -> Result<Spectrum> {
    let form = householder_decompose(a);
    solve_from_form(a, &form, request)
}

/// Same as [`solve_symmetric`] for a matrix already reduced by [`householder_decompose`].
pub fn solve_from_form(a: &SymmetricMatrix, form: &TridiagonalForm, request: &EigenRequest) -> Result<Spectrum> {
    let mut indices = request.indices.clone();
    indices.sort_unstable();
    indices.dedup();
    let values = eigenvalues_from_form(form, &indices, request.tolerance.as_ref())?;
    let mut pairs: Vec<Eigenpair> = indices
        .into_iter()
        .zip(values)
        .map(|(index, value)| Eigenpair {
            index,
            value,
            vector: None,
        })
        .collect();
    if request.want_vectors {
        attach_vectors(a, form, &mut pairs, request.tolerance.as_ref())?;
    }
    Ok(Spectrum { pairs })
}

/// Eigenvalues only, from an existing reduction.
pub fn eigenvalues_from_form(
    form: &TridiagonalForm,
    indices: &[usize],
    tolerance: Option<&BigReal>,
) -> Result<Vec<BigReal>> {
    let tol = tolerance
        .cloned()
        .unwrap_or_else(|| default_tolerance(&form.tridiagonal));
    tridiagonal_eigenvalues(&form.tridiagonal, indices, &tol)
}

/// Fills in `vector` for every pair, ascending.
pub fn attach_vectors(
    a: &SymmetricMatrix,
    form: &TridiagonalForm,
    pairs: &mut [Eigenpair],
    tolerance: Option<&BigReal>,
) -> Result<()> {
    let ctx = a.context();
    let tol = tolerance
        .cloned()
        .unwrap_or_else(|| default_tolerance(&form.tridiagonal));
    let cluster = ctx.ten_to_minus(ctx.decimal_digits() / 2);
    for i in 0..pairs.len() {
        let prior: Vec<Vec<BigReal>> = pairs[..i]
            .iter()
            .filter(|p| BigReal::with_val(ctx.bits(), &p.value - &pairs[i].value).abs() < cluster)
            .filter_map(|p| p.vector.clone())
            .collect();
        let v = eigenvector_from_form(a, form, &pairs[i].value, &prior, &tol)?;
        pairs[i].vector = Some(v);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{with_precision, PrecisionContext};

    fn ctx() -> PrecisionContext {
        with_precision(60).unwrap()
    }

    fn sym(c: &PrecisionContext, rows: &[&[i64]]) -> SymmetricMatrix {
        SymmetricMatrix::from_fn(rows.len(), c, |i, j| c.real(rows[i][j]))
    }

    fn close(a: &BigReal, b: &BigReal, digits: u32, c: &PrecisionContext) -> bool {
        BigReal::with_val(c.bits(), a - b).abs() < c.ten_to_minus(digits)
    }

    #[test]
    fn small_orders_pass_through() {
        let c = ctx();
        let d = sym(&c, &[&[5, 0, 0], &[0, 2, 0], &[0, 0, 7]]);
        let t = householder_tridiagonalize(&d);
        assert_eq!(t.diag, vec![c.real(5), c.real(2), c.real(7)]);
        assert!(t.offdiag.iter().all(|x| x.is_zero()));
        let m = sym(&c, &[&[2, 1], &[1, 2]]);
        let t = householder_tridiagonalize(&m);
        assert_eq!(t.diag, vec![c.real(2), c.real(2)]);
        assert_eq!(t.offdiag, vec![c.real(1)]);
    }

    #[test]
    fn sturm_counts() {
        let c = ctx();
        let t = Tridiagonal::new(vec![c.real(1), c.real(2), c.real(3)], vec![c.zero(), c.zero()], &c);
        assert_eq!(sturm_count(&t, &c.ratio(5, 2)), 2);
        assert_eq!(sturm_count(&t, &c.real(2)), 1);
        let (lo, hi) = gershgorin_bounds(&t);
        assert_eq!(sturm_count(&t, &(lo - 1u32)), 0);
        assert_eq!(sturm_count(&t, &(hi + 1u32)), 3);
    }

    #[test]
    fn bisection_small() {
        let c = ctx();
        let t = Tridiagonal::new(vec![c.real(2), c.real(2)], vec![c.real(1)], &c);
        let tol = default_tolerance(&t);
        assert!(close(&bisect_eigenvalue(&t, 0, &tol).unwrap(), &c.real(1), 49, &c));
        assert!(close(&bisect_eigenvalue(&t, 1, &tol).unwrap(), &c.real(3), 49, &c));
        assert!(bisect_eigenvalue(&t, 2, &tol).is_err());

        let t = Tridiagonal::new(vec![c.real(-61), c.zero(), c.real(42)], vec![c.zero(), c.zero()], &c);
        let tol = default_tolerance(&t);
        assert!(close(&bisect_eigenvalue(&t, 0, &tol).unwrap(), &c.real(-61), 45, &c));
    }

    #[test]
    fn bisection_bracket_postcondition() {
        let c = ctx();
        let m = sym(&c, &[&[4, 1, 0, 2], &[1, -3, 1, 0], &[0, 1, 0, 5], &[2, 0, 5, 1]]);
        let t = householder_tridiagonalize(&m);
        let tol = default_tolerance(&t);
        for k in 0..4 {
            let e = bisect_eigenvalue(&t, k, &tol).unwrap();
            let below = BigReal::with_val(c.bits(), &e - &tol);
            let above = BigReal::with_val(c.bits(), &e + &tol);
            assert!(sturm_count(&t, &below) <= k);
            assert!(k < sturm_count(&t, &above));
        }
    }

    #[test]
    fn inverse_iteration_small() {
        let c = ctx();
        let d = sym(&c, &[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let v = inverse_iteration(&d, &c.real(2), &[]).unwrap();
        assert!(close(&v[0], &c.zero(), 45, &c));
        assert!(close(&v[1], &c.one(), 45, &c));
        assert!(close(&v[2], &c.zero(), 45, &c));

        let m = sym(&c, &[&[2, 1], &[1, 2]]);
        let v = inverse_iteration(&m, &c.real(1), &[]).unwrap();
        let s = c.ratio(1, 2).sqrt();
        assert!(close(&v[0], &s, 45, &c));
        assert!(close(&v[1], &-s, 45, &c));
    }

    #[test]
    fn degenerate_pair_gets_orthogonal_vectors() {
        let c = ctx();
        let m = sym(&c, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 5]]);
        let spec = solve_symmetric(&m, &EigenRequest::lowest(3).with_vectors(true)).unwrap();
        let v0 = spec.pairs[0].vector.as_ref().unwrap();
        let v1 = spec.pairs[1].vector.as_ref().unwrap();
        let mut dot = c.zero();
        for (a, b) in v0.iter().zip(v1) {
            dot += a * b;
        }
        assert!(dot.abs() < c.ten_to_minus(40));
    }

    #[test]
    fn jacobi_small() {
        let c = ctx();
        let tol = c.ten_to_minus(50);
        let m = sym(&c, &[&[2, 1], &[1, 2]]);
        let s = jacobi_eigen_full(&m, &tol).unwrap();
        assert!(close(&s.pairs[0].value, &c.real(1), 49, &c));
        assert!(close(&s.pairs[1].value, &c.real(3), 49, &c));
        let d = sym(&c, &[&[3, 0, 0], &[0, -1, 0], &[0, 0, 2]]);
        let s = jacobi_eigen_full(&d, &tol).unwrap();
        let vals: Vec<BigReal> = s.values().cloned().collect();
        assert_eq!(vals, vec![c.real(-1), c.real(2), c.real(3)]);
        let big = SymmetricMatrix::zeros(65, &c);
        assert!(jacobi_eigen_full(&big, &tol).is_err());
    }
}

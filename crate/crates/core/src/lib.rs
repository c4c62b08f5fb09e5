//! Arbitrary-precision Lagrange-mesh eigensolver for the one-dimensional
//! Schrödinger equation with polynomial potentials.
//!
//! The mesh points are the zeros of the Hermite polynomial `H_N`; the
//! Hamiltonian on that mesh is a dense symmetric matrix whose lowest
//! eigenvalues approximate the bound-state energies with an error that falls
//! off geometrically in `N`. Everything runs in MPFR arithmetic at a
//! user-chosen number of decimal digits, so hundreds of correct digits are
//! reachable.
//!
//! ```no_run
//! use lagmesh::prelude::*;
//!
//! let ctx = with_precision(120)?;
//! let mesh = build_mesh(100, &ctx.one(), &ctx)?;
//! let pot = PotentialSpec::quartic(&ctx.real(-1), &ctx);
//! let h = hamiltonian_matrix(&mesh, &pot, KineticVariant::default())?;
//! let spectrum = solve_symmetric(&h, &EigenRequest::lowest(1))?;
//! let e0 = to_decimal_string(&spectrum.pairs[0].value, 25, &ctx)?;
//! assert_eq!(e0.to_string(), "0.6209270298257486608580357");
//! # Ok::<(), lagmesh::Error>(())
//! ```

pub mod eigensolve;
pub mod error;
pub mod harness;
pub mod hermite;
pub mod mesh;
pub mod numerics;
pub mod oracle;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::eigensolve::{solve_symmetric, EigenRequest, Spectrum};
    pub use crate::error::{Error, Result};
    pub use crate::hermite::hermite_roots;
    pub use crate::mesh::{build_mesh, hamiltonian_matrix, KineticVariant, PotentialSpec};
    pub use crate::numerics::{
        matched_decimal_places, to_decimal_string, with_precision, BigReal, DecimalString,
        ExactReal, PrecisionContext,
    };
}

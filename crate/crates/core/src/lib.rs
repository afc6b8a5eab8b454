//! Numerical toolkit for convex bodies of revolution.
//!
//! A body of revolution about the `x_n` axis is described by the profile
//! `eta` of its support function, `h_K(x) = eta(x_n)`. The crate assembles
//! the one-dimensional Sturm-Liouville operators `L_m` that realize the
//! operator `D_K` on each isotypical space `E_m`, certifies the spectral gap
//! of `D_K` and evaluates the local `L^p`/logarithmic Brunn-Minkowski
//! quadratic forms built from it.
//!
//! Module map:
//!
//! - [`profile`]: profiles, `A_1 eta`, `A_2 eta`, cap heights.
//! - [`quadrature`]: Gauss-Jacobi rules and the weighted inner products.
//! - [`basis`]: Gegenbauer bases and the exact ball spectrum.
//! - [`spectral`]: Galerkin assembly, eigen solves, gap checks, homotopy
//!   scans and the inter-space identities.
//! - [`geometry`]: volumes, mixed quantities and inequality deficits.

// Negated comparisons such as `!(x <= tol)` are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod profile;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
pub use profile::{DimensionedProfile, Profile, ProfileKind};

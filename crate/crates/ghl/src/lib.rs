//! Generation and numerical certification of the focusing Gardner and mKdV
//! hierarchies.
//!
//! The crate has three layers:
//!
//! * exact algebra ([`diffpoly`], [`hierarchy`]): differential polynomials
//!   over Gaussian rationals, the recursion that generates every hierarchy
//!   member, and the dispersion data extracted from it;
//! * closed forms ([`closedform`], [`elliptic`], [`jet`]): solitons, breathers
//!   and periodic breathers evaluated to machine precision, with analytic
//!   space/time derivatives through truncated Taylor jets;
//! * verification ([`numerics`], [`functionals`], [`evolve`], [`illposed`],
//!   [`suite`]): spectral grid machinery, conserved quantities, residual
//!   certificates for every closed form, pseudospectral evolution, and the
//!   low-regularity norm-separation experiment.
//!
//! The `ghl` binary exposes all of it behind a reproducible CLI.

pub mod closedform;
pub mod coeff;
pub mod diffpoly;
pub mod elliptic;
pub mod evolve;
pub mod functionals;
pub mod hierarchy;
pub mod illposed;
pub mod jet;
pub mod numerics;
pub mod report;
pub mod suite;

pub use coeff::Coeff;
pub use diffpoly::{DiffMonomial, DiffPoly, DiffPolyError};
pub use hierarchy::{gardner_rhs, lenard, mkdv_rhs, velocity_pair, HierarchyEquation};

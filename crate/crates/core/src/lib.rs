//! Exact-arithmetic toolkit for the positroid stratification of the
//! Grassmannian G(k,n), its dictionary with vector bundles on a cycle of n
//! projective lines, and the twisted standard Poisson structure.
//!
//! The crate cross-validates three independent constructions of the
//! Poisson bivector (the elementary-matrix realization with its Cartan
//! twist, the four-index-table form, and the Massey-product closed form)
//! and the combinatorial leaf-dimension predictions coming from the
//! bundle side. Everything is computed over exact rationals or integers;
//! there are no tolerances anywhere.

pub mod affperm;
pub mod bundles;
pub mod error;
pub mod poisson;
pub mod poly;
pub mod rankmat;
pub mod rat;
pub mod ratmat;
pub mod sample;
pub mod verify;

pub use affperm::{AffinePermutation, PermClass};
pub use bundles::{BinaryPeriodicMatrix, BundleType, Summand};
pub use error::{Error, Result};
pub use poisson::{BivectorMethod, GrassmannPoint, LeafReport, SkewForm};
pub use rankmat::CyclicRankMatrix;
pub use ratmat::RatMat;

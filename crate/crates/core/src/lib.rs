//! Numerical and symbolic tools for pointwise multiplication in anisotropic
//! Besov and Triebel-Lizorkin spaces.
//!
//! The numerical side works on periodic grids: a smooth dyadic partition of
//! unity in an anisotropic modulus, Besov/Triebel-Lizorkin quasi-norms,
//! paraproduct splittings and explicit test functions with known norms. The
//! symbolic side decides, for given parameter triples, whether the product is
//! bounded and which spaces can receive it.

pub mod calculus;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod limits;
pub mod norms;
pub mod paraproduct;
pub mod partition;
pub mod witness;

pub use error::{Error, Result};
pub use geometry::{aniso_modulus, dilate, Weight};
pub use grid::{band_project, dft, idft, smooth_truncate, Decomposition, GridFunction, Spectrum, TorusGrid};
pub use norms::{besov_norm, lp_norm, lq_seq, tl_norm, weighted_cumulative_check, NormParams, Scale};
pub use partition::LpSystem;

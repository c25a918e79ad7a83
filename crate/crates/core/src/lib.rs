//! Coherent-state chains of the 2:1 anisotropic quantum harmonic oscillator.
//!
//! The non-linear ladder operators `A+ = alpha b+ + beta a+ b-` and
//! `A- = (A+)^dagger` shift the organised level `2n + m` by one. Their zero
//! modes seed chains of states; the chain on the ground state gives
//! su(2)-like coherent states with a resolution of the identity and
//! Lissajous-shaped position densities.
//!
//! Units: `hbar = omega = m = 1`.

// `!(x > 0.0)` is used on purpose to reject NaN alongside non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aniso;
pub mod chains;
pub mod cli;
pub mod error;
pub mod fock;
pub mod position;
pub mod principal;
pub mod quadrature;
pub mod resolution;
pub mod selftest;
mod serial;
pub mod special;
pub mod zero_modes;

pub use aniso::{apply_a_minus, apply_a_plus, apply_commutator, ModeParams};
pub use chains::{
    chain_state_bruteforce, chain_state_closed, decompose_a_minus, f_ladder, gamma_coeff,
    gram_matrix, ChainLabel, ChainState, Decomposition,
};
pub use error::{Error, Result};
pub use fock::{
    apply_ladder, hamiltonian_apply, inner, level_basis, EnergyLevel, FockIndex, FockVector,
    Ladder, Mode,
};
pub use position::{density_grid, ho_eigenfunction, DensityGrid, Grid2D, GridGeometry};
pub use principal::{
    b_lowering_check, chen_state, modified_binomial, principal_norm_sq, principal_state,
    pseudo_hermite, uncertainty_direct, uncertainty_products, PrincipalState, UncertaintyReport,
};
pub use resolution::{
    fullspace_identity_check, radial_integral_exponential, radial_integral_gaussian,
    subspace_identity_matrix, QuadratureSpec,
};
pub use zero_modes::{
    gamma_closed, gamma_recursive, odd_level_null_space_dim, zero_mode_state, ZeroModeCoeffs,
};

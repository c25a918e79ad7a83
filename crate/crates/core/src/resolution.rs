//! Numerical resolution of the identity by the principal chain.
//!
//! With `alpha = |alpha| e^{i theta}`, `beta = |beta| e^{i phi}` and measure
//! `mu_nu = e^{-|alpha| - |beta|^2/4} / (8 pi^2 nu! |alpha|^{nu+1})`,
//! `int d2alpha d2beta mu_nu N_nu |phi_nu><phi_nu|` is the identity on level
//! `nu`. Angular integrals are done analytically (they select `k' = k`), the
//! radial ones by Gauss-Laguerre: `e^{-|alpha|}` directly and `e^{-|beta|^2/4}`
//! after `u = |beta|^2 / 4`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{level_basis, FockIndex, FockVector};
use crate::principal::ln_unnormalized_weight;
use crate::quadrature::GaussLaguerre;
use crate::special::ln_factorial;

/// Doubling the node counts must change no entry by more than this.
pub const CONVERGENCE_TOL: f64 = 1e-6;
pub const MIN_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScheme {
    GaussLaguerre,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub radial_nodes_alpha: usize,
    pub radial_nodes_beta: usize,
    pub scheme: QuadratureScheme,
    /// Largest entry change tolerated when the node counts are doubled.
    pub convergence_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radial_nodes_alpha: 64,
            radial_nodes_beta: 64,
            scheme: QuadratureScheme::GaussLaguerre,
            convergence_tol: CONVERGENCE_TOL,
        }
    }
}

impl QuadratureSpec {
    pub fn with_nodes(nodes: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            radial_nodes_alpha: nodes,
            radial_nodes_beta: nodes,
            ..Default::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes_alpha < MIN_NODES || self.radial_nodes_beta < MIN_NODES {
            return Err(Error::domain(format!(
                "quadrature needs at least {MIN_NODES} nodes per axis"
            )));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::domain("convergence tolerance must be positive"));
        }
        Ok(())
    }

    fn doubled(&self) -> Self {
        QuadratureSpec {
            radial_nodes_alpha: 2 * self.radial_nodes_alpha,
            radial_nodes_beta: 2 * self.radial_nodes_beta,
            ..*self
        }
    }
}

/// `mu_nu(|alpha|, |beta|)`.
pub fn measure_weight(nu: usize, abs_alpha: f64, abs_beta: f64) -> f64 {
    let ln = -abs_alpha
        - abs_beta * abs_beta / 4.0
        - (8.0 * PI * PI).ln()
        - ln_factorial(nu)
        - (nu + 1) as f64 * abs_alpha.ln();
    ln.exp()
}

/// `int_0^inf x^{2k+1} e^{-c x^2} dx = k! / (2 c^{k+1})`.
pub fn radial_integral_gaussian(k: usize, c: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::domain("gaussian rate must be positive"));
    }
    Ok((ln_factorial(k) - (k + 1) as f64 * c.ln()).exp() / 2.0)
}

/// Quadrature evaluation of [`radial_integral_gaussian`] through `u = c x^2`.
pub fn radial_integral_gaussian_quadrature(k: usize, c: f64, rule: &GaussLaguerre) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::domain("gaussian rate must be positive"));
    }
    // x^{2k+1} dx = u^k du / (2 c^{k+1})
    let scale = 0.5 * (-((k + 1) as f64) * c.ln()).exp();
    Ok(scale * rule.integrate(|u| u.powi(k as i32)))
}

/// `int_0^inf x^n e^{-d x} dx = n! / d^{n+1}`.
pub fn radial_integral_exponential(n: usize, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::domain("exponential rate must be positive"));
    }
    Ok((ln_factorial(n) - (n + 1) as f64 * d.ln()).exp())
}

/// Quadrature evaluation of [`radial_integral_exponential`] through `u = d x`.
pub fn radial_integral_exponential_quadrature(
    n: usize,
    d: f64,
    rule: &GaussLaguerre,
) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::domain("exponential rate must be positive"));
    }
    let scale = (-((n + 1) as f64) * d.ln()).exp();
    Ok(scale * rule.integrate(|u| u.powi(n as i32)))
}

/// `int dtheta dphi` of the phase factor `e^{i(k'-k)(theta - phi)}` carried
/// by `conj(Lambda_k') Lambda_k`.
pub fn angular_factor(k_prime: usize, k: usize) -> f64 {
    if k_prime == k {
        4.0 * PI * PI
    } else {
        0.0
    }
}

fn subspace_matrix_at(nu: usize, spec: &QuadratureSpec) -> Result<DMatrix<Complex64>> {
    spec.validate()?;
    let rule_a = GaussLaguerre::new(spec.radial_nodes_alpha)?;
    let rule_u = GaussLaguerre::new(spec.radial_nodes_beta)?;
    let dim = nu / 2 + 1;
    let ln_prefactor = -(8.0 * PI * PI).ln() - ln_factorial(nu);
    let mut out = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let angular = angular_factor(k, k);
        let mut total = 0.0;
        for (&a, &wa) in rule_a.nodes.iter().zip(&rule_a.weights) {
            for (&u, &wu) in rule_u.nodes.iter().zip(&rule_u.weights) {
                let b = 2.0 * u.sqrt();
                // |alpha| d|alpha| * |alpha|^{-(nu+1)}, cancelled against N |Lambda_k|^2;
                // |beta| d|beta| = 2 du
                let ln_integrand = ln_unnormalized_weight(nu, k, a, b) - nu as f64 * a.ln()
                    + 2f64.ln()
                    + ln_prefactor;
                total += wa * wu * ln_integrand.exp();
            }
        }
        out[(k, k)] = Complex64::new(angular * total, 0.0);
    }
    Ok(out)
}

/// The level-`nu` resolution of the identity on [`level_basis`]`(nu)`.
///
/// Fails with [`Error::Convergence`] if doubling both node counts moves any
/// entry by more than `spec.convergence_tol` ([`CONVERGENCE_TOL`] by default).
pub fn subspace_identity_matrix(nu: usize, spec: &QuadratureSpec) -> Result<DMatrix<Complex64>> {
    let m = subspace_matrix_at(nu, spec)?;
    let fine = subspace_matrix_at(nu, &spec.doubled())?;
    let change = (&m - &fine).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if change > spec.convergence_tol {
        return Err(Error::Convergence { change });
    }
    Ok(m)
}

/// `max |M - I|` for the level-`nu` matrix at the given nodes, without the
/// convergence check.
pub fn subspace_identity_deviation(nu: usize, spec: &QuadratureSpec) -> Result<f64> {
    let m = subspace_matrix_at(nu, spec)?;
    Ok(max_identity_deviation(&m))
}

fn max_identity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut dev = 0.0f64;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let target = if r == c { 1.0 } else { 0.0 };
            dev = dev.max((m[(r, c)] - target).norm());
        }
    }
    dev
}

#[derive(Debug, Clone, Serialize)]
pub struct SubspaceReport {
    pub nu: usize,
    pub nodes: usize,
    pub diagonal: Vec<f64>,
    pub max_deviation: f64,
}

pub fn subspace_report(nu: usize, spec: &QuadratureSpec) -> Result<SubspaceReport> {
    let m = subspace_identity_matrix(nu, spec)?;
    Ok(SubspaceReport {
        nu,
        nodes: spec.radial_nodes_alpha,
        diagonal: (0..m.nrows()).map(|i| m[(i, i)].re).collect(),
        max_deviation: max_identity_deviation(&m),
    })
}

/// How many levels `nu <= nu_max` contain each basis ket of the truncation.
pub fn coverage_census(nu_max: usize) -> BTreeMap<FockIndex, usize> {
    let mut census = BTreeMap::new();
    for nu in 0..=nu_max {
        for idx in level_basis(nu) {
            *census.entry(idx).or_insert(0) += 1;
        }
    }
    census
}

/// Sums the level resolutions for `nu <= nu_max` and returns the largest
/// entry of `|T|n,m> - |n,m>|` over every `|n,m>` with `2n + m <= nu_max`.
pub fn fullspace_identity_check(nu_max: usize, spec: &QuadratureSpec) -> Result<f64> {
    let mut total: BTreeMap<(FockIndex, FockIndex), Complex64> = BTreeMap::new();
    for nu in 0..=nu_max {
        let m = subspace_identity_matrix(nu, spec)?;
        let basis = level_basis(nu);
        for (r, row_idx) in basis.iter().enumerate() {
            for (c, col_idx) in basis.iter().enumerate() {
                *total.entry((*row_idx, *col_idx)).or_default() += m[(r, c)];
            }
        }
    }
    let mut deviation = 0.0f64;
    for idx in coverage_census(nu_max).keys() {
        let image = FockVector::from_entries(
            total
                .iter()
                .filter(|((_, col), _)| col == idx)
                .map(|((row, _), z)| (*row, *z)),
        );
        deviation = deviation.max(image.max_abs_diff(&FockVector::basis(idx.n, idx.m)));
    }
    Ok(deviation)
}

//! The principal chain `|phi_nu^{(0)}>`, built on the ground state.
//!
//! Amplitudes are `alpha^{nu-k} beta^k sqrt(binom_2(nu, k))` on `|k, nu-2k>`
//! with normalisation `N_nu = (|alpha||beta|/2)^nu H_nu(|alpha|/|beta|)`,
//! where `H_nu` is the pseudo-Hermite polynomial. Also: the `b-` lowering
//! relation along the chain, position-momentum uncertainty products, and
//! the fixed-ratio comparison ansatz used by earlier work.

use std::ops::Mul;

use num_complex::Complex64;

use crate::aniso::ModeParams;
use crate::error::{Error, Result};
use crate::fock::{
    apply_ladder, inner, momentum_apply, position_apply, FockIndex, FockVector, Ladder, Mode,
};
use crate::special::{ln_binomial, ln_factorial, ln_sum_exp, LogComplex};

/// `ln binom_t(n, k) = ln( n! / (k! (n - t k)! t^{2k}) )`.
pub fn ln_modified_binomial(n: usize, k: usize, t: usize) -> Result<f64> {
    if t * k > n {
        return Err(Error::domain(format!(
            "binom_{t}({n}, {k}) needs n - t k >= 0"
        )));
    }
    if t == 0 && k > 0 {
        return Err(Error::domain("binom_0(n, k) is unbounded for k > 0"));
    }
    let ln_t = if k == 0 { 0.0 } else { (t as f64).ln() };
    Ok(ln_factorial(n) - ln_factorial(k) - ln_factorial(n - t * k) - 2.0 * k as f64 * ln_t)
}

pub fn modified_binomial(n: usize, k: usize, t: usize) -> Result<f64> {
    ln_modified_binomial(n, k, t).map(f64::exp)
}

fn ln_binom2(nu: usize, k: usize) -> f64 {
    ln_modified_binomial(nu, k, 2).expect("k <= nu/2")
}

fn ln_pseudo_hermite_terms(nu: usize, x: f64) -> impl Iterator<Item = f64> {
    let ln_2x = (2.0 * x).ln();
    (0..=nu / 2).map(move |k| {
        let power = nu - 2 * k;
        let ln_pow = if power == 0 {
            0.0
        } else {
            power as f64 * ln_2x
        };
        ln_factorial(nu) - ln_factorial(power) - ln_factorial(k) + ln_pow
    })
}

/// `ln H_nu(x)` for `x >= 0`.
pub fn ln_pseudo_hermite(nu: usize, x: f64) -> f64 {
    ln_sum_exp(ln_pseudo_hermite_terms(nu, x))
}

/// `H_nu(x) = sum_k nu! / ((nu-2k)! k!) (2x)^{nu-2k}` for `x >= 0`.
pub fn pseudo_hermite(nu: usize, x: f64) -> f64 {
    ln_pseudo_hermite(nu, x).exp()
}

/// `ln(N_nu |Lambda_k|^2) = ln(|alpha|^{2(nu-k)} |beta|^{2k} binom_2(nu, k))`,
/// the unnormalised weight of `|k, nu-2k>` at radii `(|alpha|, |beta|)`.
pub fn ln_unnormalized_weight(nu: usize, k: usize, abs_alpha: f64, abs_beta: f64) -> f64 {
    let pow = |x: f64, e: usize| if e == 0 { 0.0 } else { e as f64 * x.ln() };
    pow(abs_alpha, 2 * (nu - k)) + pow(abs_beta, 2 * k) + ln_binom2(nu, k)
}

/// `ln N_nu` as the sum of the unnormalised amplitude weights.
pub fn ln_principal_norm_sq_direct(nu: usize, p: &ModeParams) -> f64 {
    let (a, b) = (p.alpha().norm(), p.beta().norm());
    ln_sum_exp((0..=nu / 2).map(|k| ln_unnormalized_weight(nu, k, a, b)))
}

/// `ln N_nu` from the pseudo-Hermite product form.
pub fn ln_principal_norm_sq(nu: usize, p: &ModeParams) -> f64 {
    if nu == 0 {
        return 0.0;
    }
    let (a, b) = (p.alpha().norm(), p.beta().norm());
    if a == 0.0 {
        return f64::NEG_INFINITY;
    }
    nu as f64 * (a * b / 2.0).ln() + ln_pseudo_hermite(nu, a / b)
}

/// `N_nu^{(0)} = (|alpha||beta|/2)^nu H_nu(|alpha|/|beta|)`.
pub fn principal_norm_sq(nu: usize, p: &ModeParams) -> f64 {
    ln_principal_norm_sq(nu, p).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalState {
    pub nu: usize,
    /// Amplitude of `|k, nu - 2k>`, `k = 0..=nu/2`.
    pub coeffs: Vec<Complex64>,
    pub norm_sq: f64,
    pub ln_norm_sq: f64,
}

impl PrincipalState {
    pub fn to_vector(&self) -> FockVector {
        FockVector::from_entries(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (FockIndex::new(k, self.nu - 2 * k), *c)),
        )
    }
}

fn require_nonzero(nu: usize, p: &ModeParams) -> Result<()> {
    if nu > 0 && p.alpha().norm() == 0.0 {
        return Err(Error::Degenerate(format!(
            "principal state at level {nu} vanishes identically for alpha = 0"
        )));
    }
    Ok(())
}

pub fn principal_state(nu: usize, p: &ModeParams) -> Result<PrincipalState> {
    require_nonzero(nu, p)?;
    let ln_norm_sq = ln_principal_norm_sq(nu, p);
    let alpha = LogComplex::from_complex(p.alpha());
    let beta = LogComplex::from_complex(p.beta());
    let coeffs = (0..=nu / 2)
        .map(|k| {
            alpha
                .powi(nu - k)
                .mul(beta.powi(k))
                .scale_ln(0.5 * (ln_binom2(nu, k) - ln_norm_sq))
                .to_complex()
        })
        .collect();
    Ok(PrincipalState {
        nu,
        coeffs,
        norm_sq: ln_norm_sq.exp(),
        ln_norm_sq,
    })
}

/// `|| b- phi_nu - alpha sqrt(nu) sqrt(N_{nu-1}/N_nu) phi_{nu-1} ||`.
pub fn b_lowering_check(nu: usize, p: &ModeParams) -> Result<f64> {
    if nu == 0 {
        return Err(Error::domain("b- lowering needs nu >= 1"));
    }
    let upper = principal_state(nu, p)?;
    let lower = principal_state(nu - 1, p)?;
    let factor =
        p.alpha() * (nu as f64).sqrt() * (0.5 * (lower.ln_norm_sq - upper.ln_norm_sq)).exp();
    let lowered = apply_ladder(Ladder::BMinus, &upper.to_vector());
    Ok(lowered.sub(&lower.to_vector().scale(factor)).norm())
}

/// Products `(dQ)^2 (dP)^2` in each mode of a principal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub nu: usize,
    pub product_a: f64,
    pub product_b: f64,
}

/// Closed-form uncertainty products
/// `a: 1/4 (1 + |alpha|^2 |beta|^2 nu(nu-1) N_{nu-2} / (2 N_nu))^2` and
/// `b: (1/2 + |alpha|^2 nu N_{nu-1} / N_nu)^2`.
pub fn uncertainty_products(nu: usize, p: &ModeParams) -> Result<UncertaintyReport> {
    require_nonzero(nu, p)?;
    let a2 = p.alpha().norm_sqr();
    let b2 = p.beta().norm_sqr();
    let ln_n = ln_principal_norm_sq(nu, p);
    let ratio = |below: usize| {
        if below > nu {
            0.0
        } else {
            (ln_principal_norm_sq(nu - below, p) - ln_n).exp()
        }
    };
    let nuf = nu as f64;
    let n_a = if nu >= 2 {
        0.25 * a2 * b2 * nuf * (nuf - 1.0) * ratio(2)
    } else {
        0.0
    };
    let n_b = if nu >= 1 { a2 * nuf * ratio(1) } else { 0.0 };
    Ok(UncertaintyReport {
        nu,
        product_a: 0.25 * (1.0 + 2.0 * n_a).powi(2),
        product_b: (0.5 + n_b).powi(2),
    })
}

fn expectation(v: &FockVector, op: impl Fn(&FockVector) -> FockVector) -> f64 {
    inner(v, &op(v)).re
}

/// `(dQ)^2 (dP)^2` for one mode, evaluated directly from the quadrature
/// operators acting on the principal state.
pub fn uncertainty_direct(nu: usize, p: &ModeParams, mode: Mode) -> Result<f64> {
    let v = principal_state(nu, p)?.to_vector();
    let q = |x: &FockVector| position_apply(mode, x);
    let pm = |x: &FockVector| momentum_apply(mode, x);
    let mean_q = expectation(&v, q);
    let mean_p = expectation(&v, pm);
    let q2 = expectation(&v, |x| q(&q(x)));
    let p2 = expectation(&v, |x| pm(&pm(x)));
    Ok((q2 - mean_q * mean_q) * (p2 - mean_p * mean_p))
}

/// `<phi_nu| s+ s- |phi_nu>` by direct action of the ladders.
pub fn mode_occupation(nu: usize, p: &ModeParams, mode: Mode) -> Result<f64> {
    let v = principal_state(nu, p)?.to_vector();
    let lowered = apply_ladder(Ladder::lowering(mode), &v);
    Ok(inner(&v, &apply_ladder(Ladder::raising(mode), &lowered)).re)
}

/// The fixed-ratio ansatz `sum_k a^k b^{nu-k} sqrt(C(nu, k)) |k, 2(nu - k)>`,
/// normalised. It lives on level `2 nu` and never populates odd b-quanta.
pub fn chen_state(nu: usize, a: Complex64, b: Complex64) -> Result<FockVector> {
    let la = LogComplex::from_complex(a);
    let lb = LogComplex::from_complex(b);
    let terms: Vec<(FockIndex, LogComplex)> = (0..=nu)
        .map(|k| {
            let t = la
                .powi(k)
                .mul(lb.powi(nu - k))
                .scale_ln(0.5 * ln_binomial(nu, k));
            (FockIndex::new(k, 2 * (nu - k)), t)
        })
        .collect();
    let ln_ref = terms
        .iter()
        .map(|(_, t)| t.ln_abs)
        .fold(f64::NEG_INFINITY, f64::max);
    if ln_ref == f64::NEG_INFINITY {
        return Err(Error::Degenerate("comparison state with a = b = 0".into()));
    }
    Ok(FockVector::from_entries(terms.iter().map(|(i, t)| (*i, t.scaled_by(ln_ref)))).normalized())
}

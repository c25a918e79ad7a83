//! Oracle-equivalence checks run by the `selftest` subcommand.
//!
//! Each check compares two independent routes (closed form against literal
//! operator application, recursion, or quadrature) over a fixed set of
//! parameter points.

use num_complex::Complex64;

use crate::aniso::{apply_a_minus, apply_a_plus_pow, ModeParams};
use crate::chains::{
    chain_state_bruteforce, chain_state_closed, decompose_a_minus, gram_matrix, ChainLabel,
};
use crate::fock::{FockVector, Mode};
use crate::principal::{
    b_lowering_check, ln_principal_norm_sq, ln_principal_norm_sq_direct, uncertainty_direct,
    uncertainty_products,
};
use crate::resolution::{fullspace_identity_check, subspace_identity_deviation, QuadratureSpec};
use crate::special::ln_factorial;
use crate::zero_modes::{gamma_closed, gamma_recursive, odd_level_null_space_dim, zero_mode_state};

/// Points with `|alpha| >= 2 |beta|`, where row Gram matrices up to row 13
/// stay below the conditioning limit. Smaller ratios degrade quickly: at
/// `alpha = beta = 1` row 11 already exceeds 1e12.
pub fn well_conditioned_params() -> Vec<ModeParams> {
    [
        ((3.0, 0.0), (0.0, std::f64::consts::FRAC_1_SQRT_2)),
        ((2.2, -0.9), (0.6, 0.4)),
        ((-1.7, 2.1), (0.9, -0.5)),
        ((0.0, 2.5), (-0.8, 0.3)),
        ((2.8, 1.4), (0.2, -1.1)),
    ]
    .into_iter()
    .map(|((ar, ai), (br, bi))| {
        ModeParams::new(Complex64::new(ar, ai), Complex64::new(br, bi)).expect("non-zero beta")
    })
    .collect()
}

/// Fixed, generic parameter points.
pub fn sample_params() -> Vec<ModeParams> {
    [
        ((0.8, 0.3), (-0.5, 1.1)),
        ((1.3, -0.6), (0.7, 0.2)),
        ((-0.4, 0.9), (1.5, -0.8)),
        ((0.6, 0.0), (0.0, 0.9)),
        ((2.0, 1.0), (-1.2, -0.3)),
    ]
    .into_iter()
    .map(|((ar, ai), (br, bi))| {
        ModeParams::new(Complex64::new(ar, ai), Complex64::new(br, bi)).expect("non-zero beta")
    })
    .collect()
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed error for the check.
    pub worst: f64,
    pub tolerance: f64,
}

fn check(name: &'static str, tolerance: f64, worst: Option<f64>) -> CheckResult {
    // a failed construction counts as an infinite error
    let worst = worst.unwrap_or(f64::INFINITY);
    CheckResult {
        name,
        passed: worst <= tolerance,
        worst,
        tolerance,
    }
}

fn max_over<I: IntoIterator<Item = Option<f64>>>(it: I) -> Option<f64> {
    it.into_iter()
        .try_fold(0.0f64, |acc, v| v.map(|v| acc.max(v)))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn run_all() -> Vec<CheckResult> {
    let params = sample_params();
    let mut out = Vec::new();

    out.push(check(
        "gamma closed form vs recursion (n <= 30)",
        1e-12,
        max_over(params.iter().flat_map(|p| {
            (0..=30).map(move |n| {
                let rec = gamma_recursive(n, p);
                max_over((0..=n).map(|j| {
                    gamma_closed(n, j, p)
                        .ok()
                        .map(|g| (g - rec[j]).norm() / rec[j].norm().max(1e-300))
                }))
            })
        })),
    ));

    out.push(check(
        "zero modes annihilated by A- (n <= 20)",
        1e-10,
        max_over(params.iter().flat_map(|p| {
            (0..=20).map(move |n| Some(apply_a_minus(p, &zero_mode_state(n, p)).norm() / p.scale()))
        })),
    ));

    out.push(check(
        "A- kernel dimension per level (nu <= 15)",
        0.0,
        max_over(params.iter().flat_map(|p| {
            (0..=15).map(move |nu| {
                let expect = if nu % 2 == 0 { 1 } else { 0 };
                Some(if odd_level_null_space_dim(nu, p) == expect {
                    0.0
                } else {
                    1.0
                })
            })
        })),
    ));

    out.push(check(
        "chain closed form vs brute force (2n, nu <= 10)",
        1e-9,
        max_over(params.iter().flat_map(|p| {
            (0..=5).flat_map(move |n| {
                (0..=10).map(move |nu| {
                    let l = ChainLabel::new(2 * n, nu).ok()?;
                    let c = chain_state_closed(l, p).ok()?;
                    let b = chain_state_bruteforce(l, p).ok()?;
                    Some(
                        (c.vector.max_abs_diff(&b.vector) / b.vector.max_abs())
                            .max(rel(c.norm_sq, b.norm_sq)),
                    )
                })
            })
        })),
    ));

    out.push(check(
        "pseudo-Hermite normalisation vs coefficient sum (nu <= 30)",
        1e-10,
        max_over(params.iter().flat_map(|p| {
            (0..=30).map(move |nu| {
                Some(rel(
                    ln_principal_norm_sq(nu, p).exp(),
                    ln_principal_norm_sq_direct(nu, p).exp(),
                ))
            })
        })),
    ));

    out.push(check(
        "||(A+)^nu |0,0>||^2 = nu! N_nu (nu <= 25)",
        1e-10,
        max_over(params.iter().flat_map(|p| {
            (0..=25).map(move |nu| {
                let brute = apply_a_plus_pow(p, nu, &FockVector::basis(0, 0)).norm_sq();
                let closed = (ln_factorial(nu) + ln_principal_norm_sq(nu, p)).exp();
                Some(rel(brute, closed))
            })
        })),
    ));

    out.push(check(
        "zero mode orthogonal to principal state (nu <= 10)",
        1e-10,
        max_over(params.iter().flat_map(|p| {
            (1..=10).map(move |nu| gram_matrix(2 * nu, p).ok().map(|g| g[(nu, 0)].norm()))
        })),
    ));

    let wide = well_conditioned_params();
    out.push(check(
        "A- decomposition residual (chain + level <= 14)",
        1e-8,
        max_over(wide.iter().flat_map(|p| {
            (0..=7).flat_map(move |n| {
                (1..=14usize.saturating_sub(2 * n)).map(move |nu| {
                    let l = ChainLabel::new(2 * n, nu).ok()?;
                    decompose_a_minus(l, p).ok().map(|d| d.relative_residual)
                })
            })
        })),
    ));

    let spec = QuadratureSpec::default();
    out.push(check(
        "subspace resolution of identity (nu <= 8)",
        1e-8,
        max_over((0..=8).map(|nu| subspace_identity_deviation(nu, &spec).ok())),
    ));
    out.push(check(
        "full-space resolution on 2n+m <= 6",
        1e-8,
        fullspace_identity_check(6, &spec).ok(),
    ));

    out.push(check(
        "uncertainty closed forms vs expectation values (nu <= 30)",
        1e-9,
        max_over(params.iter().flat_map(|p| {
            (0..=30).map(move |nu| {
                let u = uncertainty_products(nu, p).ok()?;
                let a = uncertainty_direct(nu, p, Mode::A).ok()?;
                let b = uncertainty_direct(nu, p, Mode::B).ok()?;
                Some(rel(u.product_a, a).max(rel(u.product_b, b)))
            })
        })),
    ));

    out.push(check(
        "b- lowering along the principal chain (nu <= 20)",
        1e-10,
        max_over(
            params
                .iter()
                .flat_map(|p| (1..=20).map(move |nu| b_lowering_check(nu, p).ok())),
        ),
    ));

    out
}

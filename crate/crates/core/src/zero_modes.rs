//! Zero modes of `A-`.
//!
//! Every even level `2n` carries exactly one state annihilated by `A-`,
//! `sum_j gamma_j |j, 2(n-j)>`, and odd levels carry none.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::aniso::{apply_a_minus, ModeParams};
use crate::error::{Error, Result};
use crate::fock::{level_basis, FockIndex, FockVector};
use crate::special::{ln_factorial, LogComplex};

/// Relative singular-value cutoff for the numerical rank of `A-` on a level.
pub const NULL_SPACE_RTOL: f64 = 1e-10;

/// Coefficients of the unnormalised zero mode at level `2n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroModeCoeffs {
    pub n: usize,
    /// `gamma[j]` multiplies `|j, 2(n-j)>`; `gamma[0] = 1`.
    pub gamma: Vec<Complex64>,
    /// `sum_j |gamma_j|^2`.
    pub norm_sq: f64,
}

impl ZeroModeCoeffs {
    pub fn new(n: usize, p: &ModeParams) -> Self {
        let gamma: Vec<Complex64> = (0..=n)
            .map(|j| gamma_closed_log(n, j, p).to_complex())
            .collect();
        let norm_sq = gamma.iter().map(|g| g.norm_sqr()).sum();
        ZeroModeCoeffs { n, gamma, norm_sq }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Coeff {
            j: usize,
            re: f64,
            im: f64,
        }
        #[derive(Serialize)]
        struct Out {
            n: usize,
            level: usize,
            norm_sq: f64,
            gamma: Vec<Coeff>,
        }
        let out = Out {
            n: self.n,
            level: 2 * self.n,
            norm_sq: self.norm_sq,
            gamma: self
                .gamma
                .iter()
                .enumerate()
                .map(|(j, g)| Coeff {
                    j,
                    re: g.re,
                    im: g.im,
                })
                .collect(),
        };
        serde_json::to_string(&out).expect("zero-mode json")
    }
}

/// `gamma_j^{(2n)}` in log-polar form.
pub(crate) fn gamma_closed_log(n: usize, j: usize, p: &ModeParams) -> LogComplex {
    debug_assert!(j <= n);
    // (-2 conj(alpha)/conj(beta))^j n!/(n-j)! sqrt((2(n-j))! / (j! (2n)!))
    let ratio = LogComplex::from_complex(-2.0 * p.alpha().conj() / p.beta().conj());
    let ln_mag = ln_factorial(n) - ln_factorial(n - j)
        + 0.5 * (ln_factorial(2 * (n - j)) - ln_factorial(j) - ln_factorial(2 * n));
    ratio.powi(j).scale_ln(ln_mag)
}

/// Closed-form zero-mode coefficient `gamma_j^{(2n)}`.
pub fn gamma_closed(n: usize, j: usize, p: &ModeParams) -> Result<Complex64> {
    if j > n {
        return Err(Error::domain(format!("gamma index j={j} outside 0..={n}")));
    }
    Ok(gamma_closed_log(n, j, p).to_complex())
}

/// Zero-mode coefficients from the two-term recursion obtained by
/// demanding that `A-` annihilate the level-`2n` ansatz:
/// `gamma_{j+1} = -(conj a / conj b) sqrt(2(n-j)) / (sqrt(j+1) sqrt(2(n-j)-1)) gamma_j`.
pub fn gamma_recursive(n: usize, p: &ModeParams) -> Vec<Complex64> {
    let ratio = -p.alpha().conj() / p.beta().conj();
    let mut out = Vec::with_capacity(n + 1);
    let mut g = Complex64::new(1.0, 0.0);
    out.push(g);
    for j in 0..n {
        let top = (2 * (n - j)) as f64;
        let f = top.sqrt() / (((j + 1) as f64).sqrt() * (top - 1.0).sqrt());
        g *= ratio * f;
        out.push(g);
    }
    out
}

/// The normalised zero mode `|phi_0^{(2n)}>`.
pub fn zero_mode_state(n: usize, p: &ModeParams) -> FockVector {
    let coeffs = ZeroModeCoeffs::new(n, p);
    let s = 1.0 / coeffs.norm_sq.sqrt();
    FockVector::from_entries(
        coeffs
            .gamma
            .iter()
            .enumerate()
            .map(|(j, g)| (FockIndex::new(j, 2 * (n - j)), g * s)),
    )
}

/// Matrix of `A-` from the level-`nu` basis (columns) to the level-`nu - 1`
/// basis (rows), both ordered as in [`level_basis`].
pub fn a_minus_level_matrix(nu: usize, p: &ModeParams) -> DMatrix<Complex64> {
    let cols = level_basis(nu);
    let rows = if nu == 0 {
        Vec::new()
    } else {
        level_basis(nu - 1)
    };
    let mut mat = DMatrix::zeros(rows.len(), cols.len());
    for (c, idx) in cols.iter().enumerate() {
        let img = apply_a_minus(p, &FockVector::basis(idx.n, idx.m));
        for (r, target) in rows.iter().enumerate() {
            mat[(r, c)] = img.get(*target);
        }
    }
    mat
}

/// Dimension of the kernel of `A-` restricted to level `nu`.
///
/// Intended for odd `nu`, where it is zero for non-vanishing parameters; even
/// levels serve as a control and give one.
pub fn odd_level_null_space_dim(nu: usize, p: &ModeParams) -> usize {
    let mat = a_minus_level_matrix(nu, p);
    let cols = mat.ncols();
    if mat.nrows() == 0 {
        return cols;
    }
    let sv = mat.singular_values();
    let largest = sv.iter().copied().fold(0.0, f64::max);
    if largest == 0.0 {
        return cols;
    }
    let rank = sv
        .iter()
        .filter(|&&s| s > NULL_SPACE_RTOL * largest)
        .count();
    cols - rank
}

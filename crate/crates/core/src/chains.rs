//! Chains of states generated by `A+` from each zero mode.
//!
//! The state `|phi_nu^{(2n)}>` is `(A+)^nu |phi_0^{(2n)}>` normalised. It lives
//! on the energy row `2n + nu`. Two constructions are provided: literal
//! repeated application of `A+` and the normal-ordered triple sum. The states
//! of one row form a non-orthogonal basis of that row, which is used to
//! expand `A-` of a chain state over the row below.

use std::ops::Mul;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::aniso::{apply_a_minus, apply_a_plus_pow, ModeParams};
use crate::error::{Error, Result};
use crate::fock::{inner, AmplitudeRecord, FockIndex, FockVector};
use crate::serial::{matrix_json, ComplexJson};
use crate::special::{ln_factorial, ln_pochhammer, LogComplex};
use crate::zero_modes::{gamma_closed_log, zero_mode_state, ZeroModeCoeffs};

/// Gram systems with a condition estimate above this are rejected.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ChainLabel {
    /// Even zero-mode level `2n` the chain starts from.
    pub chain: usize,
    /// Number of `A+` applications.
    pub level: usize,
}

impl ChainLabel {
    pub fn new(chain: usize, level: usize) -> Result<Self> {
        if !chain.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "chain index {chain} is odd; zero modes exist only on even levels"
            )));
        }
        Ok(ChainLabel { chain, level })
    }

    /// Zero-mode index `n` with `chain = 2n`.
    pub fn zero_mode(&self) -> usize {
        self.chain / 2
    }

    /// Energy row `2n + nu`.
    pub fn row(&self) -> usize {
        self.chain + self.level
    }
}

/// All chain states living on `row`, by increasing chain index.
pub fn row_labels(row: usize) -> Vec<ChainLabel> {
    (0..=row / 2)
        .map(|k| ChainLabel {
            chain: 2 * k,
            level: row - 2 * k,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    pub label: ChainLabel,
    /// Unit-norm state.
    pub vector: FockVector,
    /// Squared norm of `(A+)^nu |phi_0^{(2n)}>`.
    pub norm_sq: f64,
    pub ln_norm_sq: f64,
}

impl ChainState {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            chain: usize,
            level: usize,
            norm_sq: f64,
            ln_norm_sq: f64,
            vector: &'a [AmplitudeRecord],
        }
        let records = self.vector.to_records();
        serde_json::to_string(&Out {
            chain: self.label.chain,
            level: self.label.level,
            norm_sq: self.norm_sq,
            ln_norm_sq: self.ln_norm_sq,
            vector: &records,
        })
        .expect("chain json")
    }
}

fn degenerate(label: ChainLabel) -> Error {
    Error::Degenerate(format!(
        "chain state (chain {}, level {}) vanishes for these parameters",
        label.chain, label.level
    ))
}

/// Applies `A+` `level` times to the normalised zero mode.
pub fn chain_state_bruteforce(label: ChainLabel, p: &ModeParams) -> Result<ChainState> {
    let zero = zero_mode_state(label.zero_mode(), p);
    let psi = apply_a_plus_pow(p, label.level, &zero);
    let norm_sq = psi.norm_sq();
    if norm_sq == 0.0 || !norm_sq.is_finite() {
        return Err(degenerate(label));
    }
    Ok(ChainState {
        label,
        vector: psi.normalized(),
        norm_sq,
        ln_norm_sq: norm_sq.ln(),
    })
}

fn j_range(n: usize, nu: usize, m: usize, k: usize) -> std::ops::RangeInclusive<usize> {
    // (b-)^{nu-2k-j} must not annihilate |m, 2(n-m)>
    let lo = (nu as isize - 2 * (k + n - m) as isize).max(0) as usize;
    lo..=nu - 2 * k
}

/// `Gamma_{m,k,j}^{(2n),(nu)}` in log-polar form. Indices must be in range.
fn gamma_coeff_log(
    n: usize,
    nu: usize,
    m: usize,
    k: usize,
    j: usize,
    p: &ModeParams,
) -> LogComplex {
    let alpha = LogComplex::from_complex(p.alpha());
    let beta = LogComplex::from_complex(p.beta());
    let lowered = nu - 2 * k - j;
    let raised_a = nu - k - j;
    // b-mode occupation after (b-)^{lowered}
    let b_left = 2 * (n - m) + 2 * k + j - nu;
    let ln_mag = ln_factorial(nu)
        - ln_factorial(lowered)
        - ln_factorial(k)
        - ln_factorial(j)
        - k as f64 * std::f64::consts::LN_2
        + 0.5 * ln_pochhammer(m + 1, raised_a)
        + 0.5 * ln_pochhammer(b_left + 1, j)
        + 0.5 * ln_pochhammer(b_left + 1, lowered);
    alpha
        .powi(j + k)
        .mul(beta.powi(nu - k - j))
        .mul(gamma_closed_log(n, m, p))
        .scale_ln(ln_mag)
}

/// Coefficient of `|m + nu - k - j, 2(n-m) - nu + 2k + 2j>` in the expansion of
/// the unnormalised chain state (before the `1/sqrt(N_0)` zero-mode factor).
pub fn gamma_coeff(
    n: usize,
    nu: usize,
    m: usize,
    k: usize,
    j: usize,
    p: &ModeParams,
) -> Result<Complex64> {
    if m > n || 2 * k > nu || !j_range(n, nu, m, k).contains(&j) {
        return Err(Error::domain(format!(
            "Gamma indices out of range: n={n} nu={nu} m={m} k={k} j={j}"
        )));
    }
    Ok(gamma_coeff_log(n, nu, m, k, j, p).to_complex())
}

/// Chain state from the normal-ordered expansion of `(A+)^nu`.
///
/// Terms are accumulated relative to the largest term magnitude so that
/// very long chains neither overflow nor underflow.
pub fn chain_state_closed(label: ChainLabel, p: &ModeParams) -> Result<ChainState> {
    let n = label.zero_mode();
    let nu = label.level;
    let ln_zero_norm = ZeroModeCoeffs::new(n, p).norm_sq.ln();

    let mut terms: Vec<(FockIndex, LogComplex)> = Vec::new();
    for m in 0..=n {
        for k in 0..=nu / 2 {
            for j in j_range(n, nu, m, k) {
                let t = gamma_coeff_log(n, nu, m, k, j, p);
                if t.is_zero() {
                    continue;
                }
                let ket = FockIndex::new(m + nu - k - j, 2 * (n - m) + 2 * k + 2 * j - nu);
                terms.push((ket, t.scale_ln(-0.5 * ln_zero_norm)));
            }
        }
    }
    let ln_ref = terms
        .iter()
        .map(|(_, t)| t.ln_abs)
        .fold(f64::NEG_INFINITY, f64::max);
    if ln_ref == f64::NEG_INFINITY {
        return Err(degenerate(label));
    }
    let scaled = FockVector::from_entries(terms.iter().map(|(i, t)| (*i, t.scaled_by(ln_ref))));
    let s = scaled.norm_sq();
    if s == 0.0 {
        return Err(degenerate(label));
    }
    let ln_norm_sq = 2.0 * ln_ref + s.ln();
    Ok(ChainState {
        label,
        vector: scaled.normalized(),
        norm_sq: ln_norm_sq.exp(),
        ln_norm_sq,
    })
}

/// `f(nu) = N_nu / N_{nu-1}` along one chain, so that
/// `A+ |phi_{nu-1}> = sqrt(f(nu)) |phi_nu>`.
pub fn f_ladder(label: ChainLabel, p: &ModeParams) -> Result<f64> {
    if label.level == 0 {
        return Err(Error::domain("f(nu) requires level >= 1"));
    }
    let below = ChainLabel {
        level: label.level - 1,
        ..label
    };
    let hi = chain_state_closed(label, p)?;
    let lo = chain_state_closed(below, p)?;
    Ok((hi.ln_norm_sq - lo.ln_norm_sq).exp())
}

/// The normalised chain states of one row, ordered as [`row_labels`].
pub fn row_states(row: usize, p: &ModeParams) -> Result<Vec<ChainState>> {
    row_labels(row)
        .into_iter()
        .map(|l| chain_state_closed(l, p))
        .collect()
}

fn gram_of(states: &[ChainState]) -> DMatrix<Complex64> {
    let d = states.len();
    DMatrix::from_fn(d, d, |r, c| {
        if r == c {
            // exact by normalisation
            Complex64::new(states[r].vector.norm_sq(), 0.0)
        } else {
            inner(&states[r].vector, &states[c].vector)
        }
    })
}

/// Overlap matrix `G_kj = <phi^{(2k)}|phi^{(2j)}>` of the chain states on `row`.
pub fn gram_matrix(row: usize, p: &ModeParams) -> Result<DMatrix<Complex64>> {
    Ok(gram_of(&row_states(row, p)?))
}

pub fn gram_json(row: usize, g: &DMatrix<Complex64>) -> String {
    #[derive(Serialize)]
    struct Out {
        row: usize,
        labels: Vec<ChainLabel>,
        entries: Vec<Vec<ComplexJson>>,
    }
    serde_json::to_string(&Out {
        row,
        labels: row_labels(row),
        entries: matrix_json(g),
    })
    .expect("gram json")
}

/// Ratio of extreme singular values.
pub fn condition_number(m: &DMatrix<Complex64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Solves `G x = b` for Hermitian positive definite `G`, with two steps of
/// iterative refinement. Falls back to LU if Cholesky fails.
pub fn hermitian_solve(
    g: &DMatrix<Complex64>,
    b: &DVector<Complex64>,
) -> Result<DVector<Complex64>> {
    hermitian_solve_limited(g, b, MAX_GRAM_CONDITION)
}

/// [`hermitian_solve`] with a caller-chosen condition limit.
pub fn hermitian_solve_limited(
    g: &DMatrix<Complex64>,
    b: &DVector<Complex64>,
    max_condition: f64,
) -> Result<DVector<Complex64>> {
    let condition = condition_number(g);
    if !(condition <= max_condition) {
        return Err(Error::IllConditioned { condition });
    }
    let solve = |rhs: &DVector<Complex64>| -> Option<DVector<Complex64>> {
        match g.clone().cholesky() {
            Some(ch) => Some(ch.solve(rhs)),
            None => g.clone().lu().solve(rhs),
        }
    };
    let mut x = solve(b).ok_or(Error::IllConditioned { condition })?;
    for _ in 0..2 {
        let r = b - g * &x;
        match solve(&r) {
            Some(dx) => x += dx,
            None => break,
        }
    }
    Ok(x)
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub label: ChainLabel,
    /// `A- |phi_label> = sum coeff |phi_target>` over the row below.
    pub terms: Vec<(ChainLabel, Complex64)>,
    pub condition: f64,
    /// `||A- phi - reconstruction|| / ||A- phi||`.
    pub relative_residual: f64,
}

impl Decomposition {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Term {
            chain: usize,
            level: usize,
            re: f64,
            im: f64,
        }
        #[derive(Serialize)]
        struct Out {
            chain: usize,
            level: usize,
            condition: f64,
            relative_residual: f64,
            terms: Vec<Term>,
        }
        serde_json::to_string(&Out {
            chain: self.label.chain,
            level: self.label.level,
            condition: self.condition,
            relative_residual: self.relative_residual,
            terms: self
                .terms
                .iter()
                .map(|(l, c)| Term {
                    chain: l.chain,
                    level: l.level,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        })
        .expect("decomposition json")
    }
}

/// Expands `A- |phi_label>` over the chain states of the row below by
/// solving the Gram system.
pub fn decompose_a_minus(label: ChainLabel, p: &ModeParams) -> Result<Decomposition> {
    decompose_a_minus_limited(label, p, MAX_GRAM_CONDITION)
}

/// [`decompose_a_minus`] with a caller-chosen Gram condition limit.
pub fn decompose_a_minus_limited(
    label: ChainLabel,
    p: &ModeParams,
    max_condition: f64,
) -> Result<Decomposition> {
    if label.level == 0 {
        return Err(Error::domain(
            "zero modes are annihilated by A-; level must be >= 1",
        ));
    }
    let state = chain_state_closed(label, p)?;
    let image = apply_a_minus(p, &state.vector);
    let below = row_states(label.row() - 1, p)?;
    let g = gram_of(&below);
    let rhs = DVector::from_iterator(below.len(), below.iter().map(|s| inner(&s.vector, &image)));
    let condition = condition_number(&g);
    let x = hermitian_solve_limited(&g, &rhs, max_condition)?;

    let reconstruction = below
        .iter()
        .zip(x.iter())
        .fold(FockVector::zero(), |acc, (s, c)| acc.axpy(*c, &s.vector));
    let residual = reconstruction.sub(&image).norm();
    let scale = image.norm();
    let relative_residual = if scale > 0.0 {
        residual / scale
    } else {
        residual
    };

    Ok(Decomposition {
        label,
        terms: below
            .iter()
            .map(|s| s.label)
            .zip(x.iter().copied())
            .collect(),
        condition,
        relative_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockIndex;

    fn params() -> ModeParams {
        ModeParams::new(Complex64::new(0.8, 0.3), Complex64::new(-0.5, 1.1)).unwrap()
    }

    fn label(chain: usize, level: usize) -> ChainLabel {
        ChainLabel::new(chain, level).unwrap()
    }

    #[test]
    fn odd_chain_rejected() {
        assert!(ChainLabel::new(3, 1).is_err());
    }

    #[test]
    fn bruteforce_examples() {
        let p = params();
        let a = p.alpha();
        let b = p.beta();
        let s = chain_state_bruteforce(label(0, 0), &p).unwrap();
        assert_eq!(s.vector, FockVector::basis(0, 0));
        assert_eq!(s.norm_sq, 1.0);

        let s = chain_state_bruteforce(label(0, 1), &p).unwrap();
        assert!((s.norm_sq - a.norm_sqr()).abs() < 1e-14);
        assert!((s.vector.get(FockIndex::new(0, 1)) - a / a.norm()).norm() < 1e-14);

        let s = chain_state_bruteforce(label(0, 2), &p).unwrap();
        let expect_norm = 2.0 * a.norm_sqr().powi(2) + a.norm_sqr() * b.norm_sqr();
        assert!((s.norm_sq - expect_norm).abs() < 1e-13);
        let raw = FockVector::from_entries([
            (FockIndex::new(0, 2), 2f64.sqrt() * a * a),
            (FockIndex::new(1, 0), a * b),
        ]);
        assert!(s.vector.max_abs_diff(&raw.normalized()) < 1e-14);
    }

    #[test]
    fn gamma_coeff_examples() {
        let p = params();
        let a = p.alpha();
        let b = p.beta();
        assert!((gamma_coeff(0, 1, 0, 0, 1, &p).unwrap() - a).norm() < 1e-14);
        assert!((gamma_coeff(0, 2, 0, 0, 2, &p).unwrap() - 2f64.sqrt() * a * a).norm() < 1e-14);
        assert!((gamma_coeff(0, 2, 0, 1, 0, &p).unwrap() - a * b).norm() < 1e-14);
        assert!(gamma_coeff(0, 2, 0, 0, 0, &p).is_err());
        assert!(gamma_coeff(1, 2, 2, 0, 0, &p).is_err());
    }

    #[test]
    fn closed_zero_level_is_zero_mode() {
        let p = params();
        let s = chain_state_closed(label(2, 0), &p).unwrap();
        assert!(s.vector.max_abs_diff(&zero_mode_state(1, &p)) < 1e-14);
        assert!((s.norm_sq - 1.0).abs() < 1e-14);
    }

    #[test]
    fn closed_matches_bruteforce_small() {
        let p = params();
        for chain in [0, 2, 4] {
            for level in 0..6 {
                let l = label(chain, level);
                let c = chain_state_closed(l, &p).unwrap();
                let b = chain_state_bruteforce(l, &p).unwrap();
                assert!(c.vector.max_abs_diff(&b.vector) < 1e-12, "{l:?}");
                assert!((c.norm_sq - b.norm_sq).abs() < 1e-11 * b.norm_sq, "{l:?}");
            }
        }
    }

    #[test]
    fn f_ladder_examples() {
        let p = params();
        let a2 = p.alpha().norm_sqr();
        let b2 = p.beta().norm_sqr();
        assert!((f_ladder(label(0, 1), &p).unwrap() - a2).abs() < 1e-13);
        let f2 = (2.0 * a2 * a2 + a2 * b2) / a2;
        assert!((f_ladder(label(0, 2), &p).unwrap() - f2).abs() < 1e-12);
        assert!(f_ladder(label(0, 0), &p).is_err());
    }

    #[test]
    fn gram_examples() {
        let p = params();
        let g = gram_matrix(1, &p).unwrap();
        assert_eq!(g.nrows(), 1);
        assert!((g[(0, 0)] - 1.0).norm() < 1e-14);
        for row in 2..9 {
            let g = gram_matrix(row, &p).unwrap();
            for i in 0..g.nrows() {
                assert!((g[(i, i)] - 1.0).norm() < 1e-12);
            }
            if row % 2 == 0 {
                // zero mode at the end of the row against the principal state
                assert!(g[(row / 2, 0)].norm() < 1e-10, "row {row}");
            }
        }
    }

    #[test]
    fn decompose_first_level() {
        let p = params();
        let d = decompose_a_minus(label(0, 1), &p).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert!((d.terms[0].1.norm() - p.alpha().norm()).abs() < 1e-13);
        assert!(d.relative_residual < 1e-12);
    }

    #[test]
    fn decompose_row_three_examples() {
        let p = params();
        for l in [label(0, 3), label(2, 1)] {
            let d = decompose_a_minus(l, &p).unwrap();
            assert_eq!(d.terms.len(), 2);
            assert!(d.relative_residual < 1e-10, "{l:?}");
            assert_eq!(d.terms[0].0, label(0, 2));
            assert_eq!(d.terms[1].0, label(2, 0));
        }
        assert!(decompose_a_minus(label(2, 0), &p).is_err());
    }

    #[test]
    fn condition_guard() {
        let g = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        let b = DVector::from_element(2, Complex64::new(1.0, 0.0));
        assert!(matches!(
            hermitian_solve(&g, &b),
            Err(Error::IllConditioned { .. })
        ));
    }
}

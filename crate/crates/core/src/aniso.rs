//! The non-linear ladder operators
//! `A+ = alpha b+ + beta a+ b-` and `A- = conj(alpha) b- + conj(beta) a- b+`.
//!
//! Both raise/lower the organised level `2n + m` by exactly one.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{apply_word, FockVector, Ladder};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    alpha: Complex64,
    beta: Complex64,
}

impl ModeParams {
    /// `beta` must be non-zero and both parameters finite; `alpha` may vanish.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
        if !finite(alpha) || !finite(beta) {
            return Err(Error::domain("mode parameters must be finite"));
        }
        if beta == Complex64::new(0.0, 0.0) {
            return Err(Error::domain("beta must be non-zero"));
        }
        Ok(ModeParams { alpha, beta })
    }

    /// Real-valued convenience constructor.
    pub fn real(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0))
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// A representative magnitude of the parameters, `max(|alpha|, |beta|)`.
    pub fn scale(&self) -> f64 {
        self.alpha.norm().max(self.beta.norm())
    }
}

pub fn apply_a_plus(p: &ModeParams, v: &FockVector) -> FockVector {
    let b_up = apply_word(&[Ladder::BPlus], v);
    let mix = apply_word(&[Ladder::APlus, Ladder::BMinus], v);
    b_up.scale(p.alpha).axpy(p.beta, &mix)
}

pub fn apply_a_minus(p: &ModeParams, v: &FockVector) -> FockVector {
    let b_down = apply_word(&[Ladder::BMinus], v);
    let mix = apply_word(&[Ladder::AMinus, Ladder::BPlus], v);
    b_down.scale(p.alpha.conj()).axpy(p.beta.conj(), &mix)
}

/// `[A-, A+] v` by literal composition.
pub fn apply_commutator(p: &ModeParams, v: &FockVector) -> FockVector {
    let mp = apply_a_minus(p, &apply_a_plus(p, v));
    let pm = apply_a_plus(p, &apply_a_minus(p, v));
    mp.sub(&pm)
}

/// `(A+)^k v`.
pub fn apply_a_plus_pow(p: &ModeParams, k: usize, v: &FockVector) -> FockVector {
    (0..k).fold(v.clone(), |acc, _| apply_a_plus(p, &acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockIndex;

    fn params() -> ModeParams {
        ModeParams::new(Complex64::new(0.7, -0.4), Complex64::new(-1.1, 0.3)).unwrap()
    }

    #[test]
    fn rejects_zero_beta() {
        assert!(ModeParams::real(1.0, 0.0).is_err());
        assert!(ModeParams::real(0.0, 1.0).is_ok());
        assert!(ModeParams::real(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn a_plus_examples() {
        let p = params();
        let v = apply_a_plus(&p, &FockVector::basis(0, 0));
        assert_eq!(v.len(), 1);
        assert!((v.get(FockIndex::new(0, 1)) - p.alpha()).norm() < 1e-15);

        let v = apply_a_plus(&p, &FockVector::basis(0, 1));
        assert!((v.get(FockIndex::new(0, 2)) - p.alpha() * 2f64.sqrt()).norm() < 1e-15);
        assert!((v.get(FockIndex::new(1, 0)) - p.beta()).norm() < 1e-15);
        assert_eq!(v.len(), 2);

        assert!(apply_a_plus(&p, &FockVector::zero()).is_zero());
    }

    #[test]
    fn a_minus_examples() {
        let p = params();
        assert!(apply_a_minus(&p, &FockVector::basis(0, 0)).is_zero());
        let v = apply_a_minus(&p, &FockVector::basis(1, 0));
        assert_eq!(v.len(), 1);
        assert!((v.get(FockIndex::new(0, 1)) - p.beta().conj()).norm() < 1e-15);
        let v = apply_a_minus(&p, &FockVector::basis(0, 2));
        assert_eq!(v.len(), 1);
        assert!((v.get(FockIndex::new(0, 1)) - p.alpha().conj() * 2f64.sqrt()).norm() < 1e-15);
    }

    #[test]
    fn commutator_examples() {
        let p = params();
        let a2 = p.alpha().norm_sqr();
        let b2 = p.beta().norm_sqr();
        let cases = [((0, 0), a2), ((1, 0), a2 - b2), ((1, 1), a2)];
        for ((n, m), expect) in cases {
            let v = apply_commutator(&p, &FockVector::basis(n, m));
            assert_eq!(v.len(), 1, "({n},{m})");
            assert!((v.get(FockIndex::new(n, m)) - expect).norm() < 1e-13);
        }
    }
}

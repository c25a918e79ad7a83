//! Log-space factorials, Pochhammer symbols and a small polar-log complex
//! number used to keep products of large factorials and powers finite.

use std::ops::Mul;

use num_complex::Complex64;
use statrs::function::factorial::ln_factorial as statrs_ln_factorial;

/// `ln(n!)`.
pub fn ln_factorial(n: usize) -> f64 {
    statrs_ln_factorial(n as u64)
}

/// `ln((x)_k)` for the rising factorial `(x)_k = x (x+1) ... (x+k-1)`, `x >= 1`.
pub fn ln_pochhammer(x: usize, k: usize) -> f64 {
    debug_assert!(x >= 1 || k == 0);
    if k == 0 {
        return 0.0;
    }
    ln_factorial(x + k - 1) - ln_factorial(x - 1)
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// A complex number stored as `exp(ln_abs) * phase` with `|phase| = 1`.
///
/// Zero is `ln_abs = -inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    pub ln_abs: f64,
    pub phase: Complex64,
}

impl LogComplex {
    pub const ONE: LogComplex = LogComplex {
        ln_abs: 0.0,
        phase: Complex64 { re: 1.0, im: 0.0 },
    };

    pub const ZERO: LogComplex = LogComplex {
        ln_abs: f64::NEG_INFINITY,
        phase: Complex64 { re: 1.0, im: 0.0 },
    };

    pub fn from_complex(z: Complex64) -> Self {
        let r = z.norm();
        if r == 0.0 {
            Self::ZERO
        } else {
            LogComplex {
                ln_abs: r.ln(),
                phase: z / r,
            }
        }
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.ln_abs == f64::NEG_INFINITY
    }

    /// `self^e`, with `0^0 = 1`.
    pub fn powi(self, e: usize) -> Self {
        if e == 0 {
            return Self::ONE;
        }
        if self.is_zero() {
            return Self::ZERO;
        }
        LogComplex {
            ln_abs: self.ln_abs * e as f64,
            phase: self.phase.powu(e as u32),
        }
    }

    /// Multiply by `exp(ln_factor)` for a real positive factor.
    pub fn scale_ln(self, ln_factor: f64) -> Self {
        if self.is_zero() {
            return self;
        }
        LogComplex {
            ln_abs: self.ln_abs + ln_factor,
            phase: self.phase,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            Complex64::new(0.0, 0.0)
        } else {
            self.phase * self.ln_abs.exp()
        }
    }

    /// Value relative to a reference scale, i.e. `self / exp(ln_ref)`.
    pub fn scaled_by(self, ln_ref: f64) -> Complex64 {
        if self.is_zero() {
            Complex64::new(0.0, 0.0)
        } else {
            self.phase * (self.ln_abs - ln_ref).exp()
        }
    }
}

impl Mul for LogComplex {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        LogComplex {
            ln_abs: self.ln_abs + other.ln_abs,
            phase: self.phase * other.phase,
        }
    }
}

/// `ln(sum_i exp(x_i))`, ignoring `-inf` entries. Returns `-inf` for an empty
/// or all-zero input.
pub fn ln_sum_exp(terms: impl IntoIterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.into_iter().filter(|t| t.is_finite()).collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

//! Gauss-Laguerre rules for integrals `int_0^inf f(x) e^{-x} dx`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GaussLaguerre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

const MAX_NEWTON: usize = 200;
const RESCALE: f64 = 1e150;

/// Laguerre recurrence at `z`, returning `(L_n, L_{n-1}, ln_scale)` where
/// the true values are the returned ones times `exp(ln_scale)`.
fn laguerre_pair(n: usize, z: f64) -> (f64, f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    let mut ln_scale = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
        if p1.abs() > RESCALE {
            p1 /= RESCALE;
            p2 /= RESCALE;
            ln_scale += RESCALE.ln();
        }
    }
    (p1, p2, ln_scale)
}

/// Double-double value `hi + lo`. The plain recurrence loses digits to
/// cancellation near the small roots, which the weights amplify.
#[derive(Clone, Copy)]
struct Dd(f64, f64);

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd(s, (a - (s - bb)) + (b - bb))
}

impl Dd {
    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.0, o.0);
        let t = s.1 + self.1 + o.1;
        two_sum(s.0, t)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p);
        two_sum(p, e + self.0 * o.1 + self.1 * o.0)
    }

    fn div_f64(self, d: f64) -> Dd {
        let q = self.0 / d;
        let r = Dd(self.0, self.1).add(Dd(-q * d, -(q.mul_add(d, -(q * d)))));
        two_sum(q, r.0 / d)
    }
}

/// [`laguerre_pair`] carried in double-double.
fn laguerre_pair_dd(n: usize, z: f64) -> (f64, f64, f64) {
    let mut p1 = Dd(1.0, 0.0);
    let mut p2 = Dd(0.0, 0.0);
    let mut ln_scale = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        let c = two_sum(2.0 * jf - 1.0, -z);
        p1 = c.mul(p2).add(p3.mul(Dd(-(jf - 1.0), 0.0))).div_f64(jf);
        if p1.0.abs() > RESCALE {
            p1 = p1.div_f64(RESCALE);
            p2 = p2.div_f64(RESCALE);
            ln_scale += RESCALE.ln();
        }
    }
    (p1.0 + p1.1, p2.0 + p2.1, ln_scale)
}

impl GaussLaguerre {
    /// The `n`-point rule. Exact for polynomials of degree `< 2n`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("Gauss-Laguerre rule needs at least one node"));
        }
        let nf = n as f64;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let mut z = 0.0;
        for i in 0..n {
            // initial guesses after Stroud & Secrest
            z = match i {
                0 => 3.0 / (1.0 + 2.4 * nf),
                1 => z + 15.0 / (1.0 + 2.5 * nf),
                _ => {
                    let ai = (i - 1) as f64;
                    z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
                }
            };
            // Newton may dither at the last ulp, so settle for a few ulps and
            // take the derivative data from a final evaluation at the root
            let mut step = f64::INFINITY;
            for _ in 0..MAX_NEWTON {
                let (p1, p2, _) = laguerre_pair(n, z);
                let pp = nf * (p1 - p2) / z;
                let z1 = z;
                z = z1 - p1 / pp;
                step = (z - z1).abs();
                if step <= 8.0 * f64::EPSILON * z.abs() {
                    break;
                }
            }
            if !z.is_finite() || step > 1e-12 * z.abs() {
                return Err(Error::Convergence { change: step });
            }
            for _ in 0..2 {
                let (p1, p2, _) = laguerre_pair_dd(n, z);
                z -= p1 * z / (nf * (p1 - p2));
            }
            // at a root L_n' = -n L_{n-1} / z, so w = z / (n L_{n-1})^2
            let (_, prev, ln_scale) = laguerre_pair_dd(n, z);
            nodes[i] = z;
            weights[i] = z * (-2.0 * ln_scale).exp() / (nf * prev).powi(2);
        }
        Ok(GaussLaguerre { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_i w_i f(x_i)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

#![allow(dead_code)]

use std::f64::consts::PI;

use aladders::fock::{FockIndex, FockVector};
use aladders::ModeParams;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn polar(rng: &mut StdRng, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(-PI..PI))
}

/// Magnitudes of alpha and beta drawn from [0.3, 2.5] with uniform phases.
pub fn random_params(rng: &mut StdRng) -> ModeParams {
    ModeParams::new(polar(rng, 0.3, 2.5), polar(rng, 0.3, 2.5)).unwrap()
}

/// Parameters with `|alpha| / |beta|` in [3, 5], where the row Gram
/// matrices up to row 13 stay well inside the conditioning limit.
pub fn random_dominant_alpha(rng: &mut StdRng) -> ModeParams {
    let beta = polar(rng, 0.3, 1.0);
    let ratio = rng.gen_range(3.0..5.0);
    let alpha = Complex64::from_polar(ratio * beta.norm(), rng.gen_range(-PI..PI));
    ModeParams::new(alpha, beta).unwrap()
}

/// A normalised state with 1 to 6 random amplitudes on `n, m <= 12`.
pub fn random_sparse_state(rng: &mut StdRng) -> FockVector {
    let size = rng.gen_range(1..=6);
    let entries: Vec<_> = (0..size)
        .map(|_| {
            let idx = FockIndex::new(rng.gen_range(0..=12), rng.gen_range(0..=12));
            (idx, polar(rng, 0.1, 1.0))
        })
        .collect();
    FockVector::from_entries(entries).normalized()
}

/// `max |u_i - v_i| / max(max |v_i|, floor)`.
pub fn rel_diff(u: &FockVector, v: &FockVector, floor: f64) -> f64 {
    u.max_abs_diff(v) / v.max_abs().max(floor)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

//! Sparse two-mode Fock space.
//!
//! States are sparse maps `|n, m> -> amplitude` kept in lexicographic order
//! on `(n, m)`. The `a` mode carries two quanta of energy per excitation and
//! the `b` mode one, so `H |n, m> = (2n + m + 3/2) |n, m>`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Amplitudes with magnitude below this are pruned after every operation.
pub const DEFAULT_DROP_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockIndex {
    /// Quanta in the a-mode.
    pub n: usize,
    /// Quanta in the b-mode.
    pub m: usize,
}

impl FockIndex {
    pub const fn new(n: usize, m: usize) -> Self {
        FockIndex { n, m }
    }

    /// The organised level `nu = 2n + m`.
    pub const fn level(&self) -> usize {
        2 * self.n + self.m
    }

    pub fn energy(&self) -> f64 {
        self.level() as f64 + 1.5
    }
}

impl fmt::Display for FockIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{}>", self.n, self.m)
    }
}

/// The organised energy level of the 2:1 oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    pub nu: usize,
    pub energy: f64,
}

impl EnergyLevel {
    pub fn new(nu: usize) -> Self {
        EnergyLevel {
            nu,
            energy: nu as f64 + 1.5,
        }
    }
}

/// All `|k, nu - 2k>` for `k = 0..=nu/2`, in increasing `k`.
pub fn level_basis(nu: usize) -> Vec<FockIndex> {
    (0..=nu / 2)
        .map(|k| FockIndex::new(k, nu - 2 * k))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    AMinus,
    APlus,
    BMinus,
    BPlus,
}

impl Ladder {
    pub fn lowering(mode: Mode) -> Self {
        match mode {
            Mode::A => Ladder::AMinus,
            Mode::B => Ladder::BMinus,
        }
    }

    pub fn raising(mode: Mode) -> Self {
        match mode {
            Mode::A => Ladder::APlus,
            Mode::B => Ladder::BPlus,
        }
    }

    /// Image of a basis ket together with its matrix element, `None` if annihilated.
    fn act(self, idx: FockIndex) -> Option<(FockIndex, f64)> {
        let FockIndex { n, m } = idx;
        match self {
            Ladder::AMinus if n > 0 => Some((FockIndex::new(n - 1, m), (n as f64).sqrt())),
            Ladder::BMinus if m > 0 => Some((FockIndex::new(n, m - 1), (m as f64).sqrt())),
            Ladder::APlus => Some((FockIndex::new(n + 1, m), ((n + 1) as f64).sqrt())),
            Ladder::BPlus => Some((FockIndex::new(n, m + 1), ((m + 1) as f64).sqrt())),
            _ => None,
        }
    }
}

/// A sparse state vector over the two-mode Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: BTreeMap<FockIndex, Complex64>,
    drop_tol: f64,
}

impl Default for FockVector {
    fn default() -> Self {
        Self::zero()
    }
}

impl FockVector {
    pub fn zero() -> Self {
        FockVector {
            amps: BTreeMap::new(),
            drop_tol: DEFAULT_DROP_TOL,
        }
    }

    /// The basis ket `|n, m>`.
    pub fn basis(n: usize, m: usize) -> Self {
        Self::from_entries([(FockIndex::new(n, m), Complex64::new(1.0, 0.0))])
    }

    /// Builds a vector by summing the given entries; repeated indices accumulate.
    pub fn from_entries(entries: impl IntoIterator<Item = (FockIndex, Complex64)>) -> Self {
        Self::zero().rebuilt(entries)
    }

    pub fn with_drop_tol(mut self, tol: f64) -> Self {
        self.drop_tol = tol;
        self.prune();
        self
    }

    pub fn drop_tol(&self) -> f64 {
        self.drop_tol
    }

    fn rebuilt(&self, entries: impl IntoIterator<Item = (FockIndex, Complex64)>) -> Self {
        let mut amps: BTreeMap<FockIndex, Complex64> = BTreeMap::new();
        for (idx, c) in entries {
            *amps.entry(idx).or_default() += c;
        }
        let mut out = FockVector {
            amps,
            drop_tol: self.drop_tol,
        };
        out.prune();
        out
    }

    fn prune(&mut self) {
        let tol = self.drop_tol;
        self.amps.retain(|_, c| c.norm() >= tol);
    }

    pub fn get(&self, idx: FockIndex) -> Complex64 {
        self.amps.get(&idx).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (FockIndex, Complex64)> + '_ {
        self.amps.iter().map(|(i, c)| (*i, *c))
    }

    pub fn support(&self) -> impl Iterator<Item = FockIndex> + '_ {
        self.amps.keys().copied()
    }

    /// Number of stored (non-pruned) amplitudes.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.amps
            .values()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.rebuilt(self.iter().map(|(i, c)| (i, c * s)))
    }

    pub fn add(&self, other: &FockVector) -> Self {
        self.rebuilt(self.iter().chain(other.iter()))
    }

    pub fn sub(&self, other: &FockVector) -> Self {
        self.rebuilt(self.iter().chain(other.iter().map(|(i, c)| (i, -c))))
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: Complex64, other: &FockVector) -> Self {
        self.rebuilt(self.iter().chain(other.iter().map(|(i, c)| (i, s * c))))
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.values().fold(0.0, |s, c| s + c.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Unit-norm copy; the zero vector is returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scale(Complex64::new(1.0 / n, 0.0))
        }
    }

    /// Largest amplitude magnitude.
    pub fn max_abs(&self) -> f64 {
        self.amps.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest quantum numbers `(n_max, m_max)` present in the support.
    pub fn max_quanta(&self) -> (usize, usize) {
        self.support()
            .fold((0, 0), |(a, b), i| (a.max(i.n), b.max(i.m)))
    }

    /// Largest per-entry difference `max |self - other|`.
    pub fn max_abs_diff(&self, other: &FockVector) -> f64 {
        let mut diff = 0.0f64;
        for (i, c) in self.iter() {
            diff = diff.max((c - other.get(i)).norm());
        }
        for (i, c) in other.iter() {
            if !self.amps.contains_key(&i) {
                diff = diff.max(c.norm());
            }
        }
        diff
    }

    pub fn to_records(&self) -> Vec<AmplitudeRecord> {
        self.iter()
            .map(|(i, c)| AmplitudeRecord {
                n: i.n,
                m: i.m,
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    pub fn from_records(records: &[AmplitudeRecord]) -> Self {
        Self::from_entries(
            records
                .iter()
                .map(|r| (FockIndex::new(r.n, r.m), Complex64::new(r.re, r.im))),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_records()).expect("records serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        let records: Vec<AmplitudeRecord> = serde_json::from_str(s)?;
        Ok(Self::from_records(&records))
    }
}

/// One serialized amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeRecord {
    pub n: usize,
    pub m: usize,
    pub re: f64,
    pub im: f64,
}

/// `<u|v>`, conjugate-linear in `u`.
pub fn inner(u: &FockVector, v: &FockVector) -> Complex64 {
    let (small, large, conj_small) = if u.len() <= v.len() {
        (u, v, true)
    } else {
        (v, u, false)
    };
    small
        .iter()
        .map(|(i, c)| {
            let d = large.get(i);
            if conj_small {
                c.conj() * d
            } else {
                d.conj() * c
            }
        })
        .sum()
}

pub fn apply_ladder(which: Ladder, v: &FockVector) -> FockVector {
    v.rebuilt(
        v.iter()
            .filter_map(|(i, c)| which.act(i).map(|(j, factor)| (j, c * factor))),
    )
}

/// Applies a product of ladder operators; the rightmost acts first.
pub fn apply_word(word: &[Ladder], v: &FockVector) -> FockVector {
    word.iter()
        .rev()
        .fold(v.clone(), |acc, &l| apply_ladder(l, &acc))
}

/// `H = 2 a+a- + b+b- + 3/2`.
pub fn hamiltonian_apply(v: &FockVector) -> FockVector {
    v.rebuilt(v.iter().map(|(i, c)| (i, c * i.energy())))
}

/// Number operator `s+ s-` of one mode.
pub fn number_apply(mode: Mode, v: &FockVector) -> FockVector {
    v.rebuilt(v.iter().map(|(i, c)| {
        let q = match mode {
            Mode::A => i.n,
            Mode::B => i.m,
        };
        (i, c * q as f64)
    }))
}

/// Position operator reconstructed from the ladders:
/// `Q_a = (a+ + a-)/2`, `Q_b = (b+ + b-)/sqrt 2`.
pub fn position_apply(mode: Mode, v: &FockVector) -> FockVector {
    let up = apply_ladder(Ladder::raising(mode), v);
    let down = apply_ladder(Ladder::lowering(mode), v);
    let s = match mode {
        Mode::A => 0.5,
        Mode::B => std::f64::consts::FRAC_1_SQRT_2,
    };
    up.add(&down).scale(Complex64::new(s, 0.0))
}

/// Momentum operator: `P_a = i(a+ - a-)`, `P_b = i(b+ - b-)/sqrt 2`.
pub fn momentum_apply(mode: Mode, v: &FockVector) -> FockVector {
    let up = apply_ladder(Ladder::raising(mode), v);
    let down = apply_ladder(Ladder::lowering(mode), v);
    let s = match mode {
        Mode::A => 1.0,
        Mode::B => std::f64::consts::FRAC_1_SQRT_2,
    };
    up.sub(&down).scale(Complex64::new(0.0, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ladder_examples() {
        let up = apply_ladder(Ladder::APlus, &FockVector::basis(0, 0));
        assert_eq!(up, FockVector::basis(1, 0));
        assert!(apply_ladder(Ladder::BMinus, &FockVector::basis(0, 0)).is_zero());
        let down = apply_ladder(Ladder::BMinus, &FockVector::basis(0, 2));
        assert!((down.get(FockIndex::new(0, 1)) - c(2f64.sqrt(), 0.0)).norm() < 1e-15);
        assert_eq!(down.len(), 1);
    }

    #[test]
    fn inner_examples() {
        let e10 = FockVector::basis(1, 0);
        assert_eq!(inner(&e10, &e10), c(1.0, 0.0));
        assert_eq!(inner(&e10, &FockVector::basis(0, 2)), c(0.0, 0.0));
        let u = FockVector::basis(0, 1).scale(c(0.0, 2.0));
        let v = FockVector::basis(0, 1).scale(c(3.0, 0.0));
        assert_eq!(inner(&u, &v), c(0.0, -6.0));
        assert_eq!(inner(&v, &u), c(0.0, 6.0));
    }

    #[test]
    fn hamiltonian_examples() {
        let h = hamiltonian_apply(&FockVector::basis(0, 0));
        assert_eq!(h.get(FockIndex::new(0, 0)), c(1.5, 0.0));
        let h = hamiltonian_apply(&FockVector::basis(1, 1));
        assert_eq!(h.get(FockIndex::new(1, 1)), c(4.5, 0.0));
        let v = FockVector::basis(0, 1).add(&FockVector::basis(1, 0));
        let h = hamiltonian_apply(&v);
        assert_eq!(h.get(FockIndex::new(0, 1)), c(2.5, 0.0));
        assert_eq!(h.get(FockIndex::new(1, 0)), c(3.5, 0.0));
    }

    #[test]
    fn level_basis_examples() {
        assert_eq!(level_basis(0), vec![FockIndex::new(0, 0)]);
        assert_eq!(
            level_basis(3),
            vec![FockIndex::new(0, 3), FockIndex::new(1, 1)]
        );
        assert_eq!(
            level_basis(4),
            vec![
                FockIndex::new(0, 4),
                FockIndex::new(1, 2),
                FockIndex::new(2, 0)
            ]
        );
        for nu in 0..40 {
            let b = level_basis(nu);
            assert_eq!(b.len(), nu / 2 + 1);
            assert!(b.iter().all(|i| i.level() == nu));
        }
    }

    #[test]
    fn energy_level() {
        let e = EnergyLevel::new(7);
        assert_eq!(e.energy, 8.5);
    }

    #[test]
    fn tiny_amplitudes_are_pruned() {
        let v = FockVector::from_entries([
            (FockIndex::new(0, 0), c(1.0, 0.0)),
            (FockIndex::new(0, 1), c(1e-16, 0.0)),
        ]);
        assert_eq!(v.len(), 1);
        let w = FockVector::basis(2, 3).sub(&FockVector::basis(2, 3));
        assert!(w.is_zero());
    }

    #[test]
    fn json_is_sorted_records() {
        let v = FockVector::from_entries([
            (FockIndex::new(1, 0), c(0.5, -1.0)),
            (FockIndex::new(0, 3), c(2.0, 0.0)),
        ]);
        assert_eq!(
            v.to_json(),
            r#"[{"n":0,"m":3,"re":2.0,"im":0.0},{"n":1,"m":0,"re":0.5,"im":-1.0}]"#
        );
        assert_eq!(FockVector::from_json(&v.to_json()).unwrap(), v);
    }

    #[test]
    fn canonical_quadratures_on_vacuum() {
        let v = FockVector::basis(0, 0);
        for mode in [Mode::A, Mode::B] {
            let qp = position_apply(mode, &momentum_apply(mode, &v));
            let pq = momentum_apply(mode, &position_apply(mode, &v));
            let comm = pq.sub(&qp);
            // [Q, P] = i  =>  QP - PQ = i
            assert!(qp.sub(&pq).max_abs_diff(&v.scale(c(0.0, 1.0))) < 1e-15);
            assert!(comm.norm() > 0.0);
        }
    }
}

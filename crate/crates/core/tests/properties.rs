use std::f64::consts::PI;

use aladders::aniso::{apply_a_minus, apply_a_plus, apply_commutator};
use aladders::chains::{condition_number, gram_matrix, row_states};
use aladders::fock::{
    hamiltonian_apply, inner, momentum_apply, number_apply, position_apply, FockIndex, FockVector,
    Mode,
};
use aladders::zero_modes::{gamma_closed, gamma_recursive, zero_mode_state};
use aladders::ModeParams;
use num_complex::Complex64;
use proptest::prelude::*;

mod common;

fn params() -> impl Strategy<Value = ModeParams> {
    (0.2f64..3.0, -PI..PI, 0.2f64..3.0, -PI..PI).prop_map(|(ra, pa, rb, pb)| {
        ModeParams::new(Complex64::from_polar(ra, pa), Complex64::from_polar(rb, pb)).unwrap()
    })
}

fn sparse_state() -> impl Strategy<Value = FockVector> {
    prop::collection::vec((0usize..=10, 0usize..=10, -1.0f64..1.0, -1.0f64..1.0), 1..8)
        .prop_filter_map("non-zero state", |entries| {
            let v = FockVector::from_entries(
                entries
                    .into_iter()
                    .map(|(n, m, re, im)| (FockIndex::new(n, m), Complex64::new(re, im))),
            );
            (v.norm() > 1e-3).then(|| v.normalized())
        })
}

fn close(u: &FockVector, v: &FockVector, tol: f64) -> bool {
    u.max_abs_diff(v) <= tol * v.max_abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn commutator_matches_closed_form(p in params(), v in sparse_state()) {
        let lhs = apply_commutator(&p, &v);
        let nb_na = number_apply(Mode::B, &v).sub(&number_apply(Mode::A, &v));
        let rhs = v.scale(p.alpha().norm_sqr().into()).add(&nb_na.scale(p.beta().norm_sqr().into()));
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn ladder_property_of_a_plus_and_a_minus(p in params(), v in sparse_state()) {
        let up = apply_a_plus(&p, &v);
        let h_up = hamiltonian_apply(&up).sub(&apply_a_plus(&p, &hamiltonian_apply(&v)));
        prop_assert!(close(&h_up, &up, 1e-12));
        let down = apply_a_minus(&p, &v);
        let h_down = hamiltonian_apply(&down).sub(&apply_a_minus(&p, &hamiltonian_apply(&v)));
        prop_assert!(close(&h_down, &down.scale((-1.0).into()), 1e-12));
    }

    #[test]
    fn a_minus_is_adjoint_of_a_plus(p in params(), u in sparse_state(), v in sparse_state()) {
        let lhs = inner(&apply_a_plus(&p, &u), &v);
        let rhs = inner(&u, &apply_a_minus(&p, &v));
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(rhs.norm()).max(1.0));
    }

    #[test]
    fn canonical_quadratures(v in sparse_state()) {
        for mode in [Mode::A, Mode::B] {
            let qp = position_apply(mode, &momentum_apply(mode, &v));
            let pq = momentum_apply(mode, &position_apply(mode, &v));
            prop_assert!(close(&qp.sub(&pq), &v.scale(Complex64::i()), 1e-12));
        }
    }

    #[test]
    fn gamma_closed_form_equals_recursion(p in params(), n in 0usize..=20) {
        let rec = gamma_recursive(n, &p);
        for (j, r) in rec.iter().enumerate() {
            let c = gamma_closed(n, j, &p).unwrap();
            prop_assert!((c - r).norm() <= 1e-10 * r.norm().max(1.0), "n={} j={} {} vs {}", n, j, c, r);
        }
    }

    #[test]
    fn zero_modes_are_annihilated(p in params(), n in 0usize..=20) {
        prop_assert!(apply_a_minus(&p, &zero_mode_state(n, &p)).norm() <= 1e-10);
    }
}

#[test]
fn commutator_is_not_canonical() {
    let p = ModeParams::real(1.0, 0.5).unwrap();
    let v = FockVector::basis(1, 0);
    let c = apply_commutator(&p, &v);
    assert!((c.get(FockIndex::new(1, 0)) - Complex64::new(0.75, 0.0)).norm() < 1e-15);
}

#[test]
fn gram_matrices_are_hermitian_positive_definite() {
    let params = [
        ModeParams::new(Complex64::new(2.0, 0.4), Complex64::new(-0.3, 0.5)).unwrap(),
        ModeParams::new(Complex64::new(-1.5, 1.8), Complex64::new(0.7, 0.2)).unwrap(),
    ];
    for p in &params {
        for row in 1..=20 {
            let g = gram_matrix(row, p).unwrap();
            let h = g.adjoint();
            assert!(
                (&g - &h).iter().all(|z| z.norm() < 1e-12),
                "row {row} not Hermitian"
            );
            assert!(g
                .diagonal()
                .iter()
                .all(|d| (d - Complex64::new(1.0, 0.0)).norm() < 1e-12));
            assert!(
                g.clone().cholesky().is_some(),
                "row {row} not positive definite"
            );
            assert!(condition_number(&g).is_finite());
        }
    }
}

#[test]
fn row_states_live_on_their_energy_row() {
    let p = ModeParams::new(Complex64::new(1.1, -0.4), Complex64::new(0.6, 0.9)).unwrap();
    for row in 1..=12 {
        for s in row_states(row, &p).unwrap() {
            assert!(s.vector.support().all(|i| i.level() == row));
            assert_eq!(s.label.chain + s.label.level, row);
        }
    }
}

#[test]
fn gamma_closed_form_equals_recursion_up_to_thirty() {
    let mut rng = common::rng(7);
    for _ in 0..12 {
        let p = common::random_params(&mut rng);
        for n in 0..=30 {
            let rec = gamma_recursive(n, &p);
            for (j, r) in rec.iter().enumerate() {
                let c = gamma_closed(n, j, &p).unwrap();
                assert!((c - r).norm() <= 1e-12 * r.norm(), "n={n} j={j} {c} vs {r}");
            }
        }
    }
}

use std::f64::consts::PI;

use aladders::fock::{FockIndex, FockVector};
use aladders::position::{
    density_grid, hermite_functions, ho_eigenfunction, read_grid_binary, write_grid_binary,
    write_grid_csv, GridGeometry, GRID_MAGIC, OMEGA_A, OMEGA_B,
};
use aladders::principal::principal_state;
use aladders::{Error, ModeParams};
use num_complex::Complex64;

#[test]
fn ground_state_values() {
    assert!((ho_eigenfunction(0, 2.0, 0.0).unwrap() - (2.0 / PI).powf(0.25)).abs() < 1e-15);
    for w in [0.5, 1.0, 2.0] {
        assert_eq!(ho_eigenfunction(1, w, 0.0).unwrap(), 0.0);
    }
    assert!(ho_eigenfunction(0, 0.0, 1.0).is_err());
}

#[test]
fn eigenfunctions_are_orthonormal_up_to_120() {
    // the window must reach past the turning point sqrt(2n+1)/sqrt(omega) of n = 120
    let n_max = 120;
    for omega in [OMEGA_A, OMEGA_B] {
        let half = ((2 * n_max + 1) as f64).sqrt() / omega.sqrt() + 10.0 / omega.sqrt();
        let h = 0.01 / omega.sqrt();
        let steps = (2.0 * half / h).ceil() as usize;
        let h = 2.0 * half / steps as f64;
        let mut gram = vec![0.0; (n_max + 1) * (n_max + 1)];
        for s in 0..=steps {
            let w = if s == 0 || s == steps { 0.5 * h } else { h };
            let psi = hermite_functions(n_max, omega, -half + s as f64 * h);
            for i in 0..=n_max {
                for j in 0..=i {
                    gram[i * (n_max + 1) + j] += w * psi[i] * psi[j];
                }
            }
        }
        for i in 0..=n_max {
            for j in 0..=i {
                let expected = if i == j { 1.0 } else { 0.0 };
                let got = gram[i * (n_max + 1) + j];
                assert!(
                    (got - expected).abs() < 1e-8,
                    "omega={omega} ({i},{j}): {got}"
                );
            }
        }
    }
}

#[test]
fn deep_tail_does_not_underflow_early() {
    let psi = ho_eigenfunction(500, 1.0, 40.0).unwrap();
    assert!(psi.is_finite() && psi != 0.0 && psi.abs() < 1e-10);
}

#[test]
fn vacuum_density() {
    let g = GridGeometry::new(-8.0, 8.0, -8.0, 8.0, 400, 400).unwrap();
    let d = density_grid(&FockVector::basis(0, 0), &g).unwrap();
    assert!((d.total_mass - 1.0).abs() < 1e-6);
    // the grid has no node at the origin; compare the peak to the analytic value there
    let peak = d.grid.values.iter().copied().fold(0.0, f64::max);
    let analytic = (2.0 / PI).sqrt() * (1.0 / PI).sqrt();
    let (x, y) = (g.x(199), g.y(199));
    let at_node = analytic * (-OMEGA_A * x * x - OMEGA_B * y * y).exp();
    assert!((peak - at_node).abs() < 1e-12, "{peak} vs {at_node}");
    assert!(peak < analytic && peak > 0.99 * analytic);
}

#[test]
fn mass_matches_norm_on_covering_window() {
    let v = FockVector::from_entries([
        (FockIndex::new(3, 0), Complex64::new(0.6, 0.0)),
        (FockIndex::new(0, 7), Complex64::new(0.0, -0.5)),
        (FockIndex::new(10, 25), Complex64::new(0.3, 0.4)),
        (FockIndex::new(1, 40), Complex64::new(-0.2, 0.1)),
    ]);
    let (n, m) = v.max_quanta();
    let g = GridGeometry::covering(n, m, 300, 400).unwrap();
    let d = density_grid(&v, &g).unwrap();
    assert!((d.total_mass - v.norm_sq()).abs() < 1e-3 * v.norm_sq());
    assert!(d.grid.values.iter().all(|&p| p >= 0.0));
}

#[test]
fn quantum_numbers_above_limit_are_rejected() {
    let g = GridGeometry::new(-1.0, 1.0, -1.0, 1.0, 4, 4).unwrap();
    let err = density_grid(&FockVector::basis(0, 501), &g).unwrap_err();
    assert!(matches!(
        err,
        Error::OutOfRange {
            found: 501,
            bound: 500
        }
    ));
}

#[test]
fn density_is_deterministic_across_thread_counts() {
    let p = ModeParams::new(Complex64::new(3.0, 0.0), Complex64::new(0.0, 0.5)).unwrap();
    let v = principal_state(30, &p).unwrap().to_vector();
    let g = GridGeometry::new(-6.0, 6.0, -10.0, 10.0, 90, 120).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = single.install(|| density_grid(&v, &g).unwrap());
    let b = many.install(|| density_grid(&v, &g).unwrap());
    assert_eq!(a.grid.values, b.grid.values);
}

#[test]
fn binary_and_csv_layouts() {
    let g = GridGeometry::new(-1.5, 2.5, -3.0, 3.0, 5, 3).unwrap();
    let d = density_grid(&FockVector::basis(1, 2), &g).unwrap();

    let mut bin = Vec::new();
    write_grid_binary(&d.grid, &mut bin).unwrap();
    assert_eq!(&bin[..8], GRID_MAGIC);
    assert_eq!(u32::from_le_bytes(bin[8..12].try_into().unwrap()), 5);
    assert_eq!(u32::from_le_bytes(bin[12..16].try_into().unwrap()), 3);
    assert_eq!(f32::from_le_bytes(bin[16..20].try_into().unwrap()), -1.5);
    assert_eq!(bin.len(), 32 + 8 * 15);
    let back = read_grid_binary(&mut bin.as_slice()).unwrap();
    assert_eq!(back.values, d.grid.values);
    assert_eq!(back.geometry, g);

    let mut csv = Vec::new();
    write_grid_csv(&d.grid, &mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "x,y,density");
    assert_eq!(lines.len(), 16);
    let second: Vec<f64> = lines[2].split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!((second[0], second[1]), (g.x(1), g.y(0)));
    assert_eq!(second[2], d.grid.at(1, 0));
}

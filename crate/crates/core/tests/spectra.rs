mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use common::j0_first_zero;
use drumhead::discretize::integrate;
use drumhead::geometry::{rectangle, EllipseDomain};
use drumhead::spectral::{dirichlet_spectrum, interval_eigenpairs, SolverOptions};
use drumhead::{Domain, Point2};

#[test]
fn rectangle_eigenvalues_match_separation_of_variables() {
    let d: Domain = rectangle(Point2::ORIGIN, Point2::new(2.0, 1.0)).unwrap().into();
    let s = dirichlet_spectrum(&d, 1.0 / 64.0, 3, SolverOptions::default()).unwrap();
    let mut exact: Vec<f64> = (1..5)
        .flat_map(|m| (1..5).map(move |n| PI * PI * ((m * m) as f64 / 4.0 + (n * n) as f64)))
        .collect();
    exact.sort_by(f64::total_cmp);
    for j in 1..=3 {
        assert_relative_eq!(s.lambda(j), exact[j - 1], max_relative = 2e-3);
    }
}

#[test]
fn disk_eigenvalue_matches_bessel_zero() {
    let j = j0_first_zero();
    assert!((j - 2.404_825_557_7).abs() < 1e-9);
    let d: Domain = EllipseDomain::disk(Point2::ORIGIN, 1.0).unwrap().into();
    let s = dirichlet_spectrum(&d, 1.0 / 64.0, 1, SolverOptions::default()).unwrap();
    assert_relative_eq!(s.lambda(1), j * j, max_relative = 5e-3);
}

#[test]
fn eigenfunctions_are_normalised_and_positive() {
    let d: Domain = EllipseDomain::new(Point2::new(0.3, -0.2), 1.0, 0.6, 0.4).unwrap().into();
    let s = dirichlet_spectrum(&d, 1.0 / 48.0, 2, SolverOptions::default()).unwrap();
    let g = s.grid();
    let sq = drumhead::GridField::new(g, s.phi(1).values().iter().map(|v| v * v).collect()).unwrap();
    assert_relative_eq!(integrate(g, &sq).unwrap(), 1.0, max_relative = 1e-12);
    assert!(s.phi(1).values().iter().all(|&v| v > 0.0));
    // second mode changes sign
    assert!(s.phi(2).values().iter().any(|&v| v < 0.0));
    assert!(s.lambda(1) < s.lambda(2));
}

#[test]
fn eigenvalues_scale_with_inverse_square_of_size() {
    let base: Domain = rectangle(Point2::ORIGIN, Point2::new(1.0, 1.0)).unwrap().into();
    let big = base.dilate(2.0, Point2::ORIGIN).unwrap();
    let a = dirichlet_spectrum(&base, 1.0 / 32.0, 1, SolverOptions::default()).unwrap();
    let b = dirichlet_spectrum(&big, 1.0 / 16.0, 1, SolverOptions::default()).unwrap();
    assert_relative_eq!(a.lambda(1), 4.0 * b.lambda(1), max_relative = 1e-10);
}

#[test]
fn interval_eigenpairs_are_discrete_sines() {
    let s = interval_eigenpairs(2.0, 1.0 / 128.0, 3, 1e-12).unwrap();
    for (j, lam) in s.eigenvalues.iter().enumerate() {
        let k = (j + 1) as f64;
        // exact eigenvalues of the three-point stencil
        let exact = (2.0 / s.h * (k * PI * s.h / 4.0).sin()).powi(2);
        assert_relative_eq!(*lam, exact, max_relative = 1e-9);
    }
    let phi1 = &s.eigenfunctions[0];
    for (x, f) in s.nodes.iter().zip(phi1) {
        assert_relative_eq!(*f, (PI * x / 2.0).sin(), max_relative = 1e-6, epsilon = 1e-9);
    }
}

//! Worked eigen-quadruple examples, checked against published values and a numeric oracle.

mod common;

use approx::assert_relative_eq;
use common::{direction, eigen_distance, eval, matrix, poly, series};
use nalgebra::DMatrix;
use perron_core::eigen_expand::{
    deepen, deepen_rank1, expand_perron, expand_simple, pencil_solve, pq_matrices, residual_valuation,
    EigenError, EigenQuadruple,
};
use perron_core::{Exponent, PuiseuxMatrix, Valuation};

fn intro_matrix() -> PuiseuxMatrix {
    matrix(vec![
        vec![poly(&[1.0, -1.0]), poly(&[1.0, 1.0])],
        vec![poly(&[1.0, 0.0, 1.0]), poly(&[1.0, -1.0])],
    ])
}

fn simple_three() -> PuiseuxMatrix {
    matrix(vec![
        vec![poly(&[1.0, 0.0, 1.0]), poly(&[0.0, 2.0]), poly(&[2.0])],
        vec![poly(&[1.0, 1.0]), poly(&[2.0, -1.0]), poly(&[0.0, 2.0])],
        vec![poly(&[2.0]), poly(&[0.0, 0.0, 1.0]), poly(&[1.0, 0.0, 1.0])],
    ])
}

fn semisimple_three() -> PuiseuxMatrix {
    matrix(vec![
        vec![poly(&[1.0]), poly(&[1.0, -1.0]), poly(&[0.0, 1.0])],
        vec![poly(&[0.0, 1.0]), poly(&[2.0]), poly(&[0.0, 2.0])],
        vec![poly(&[0.0, 2.0]), poly(&[0.0, 0.0, 1.0]), poly(&[2.0, 1.0])],
    ])
}

fn failing_three() -> PuiseuxMatrix {
    matrix(vec![
        vec![poly(&[1.0]), poly(&[1.0, -1.0]), poly(&[0.0, 1.0])],
        vec![poly(&[0.0, 1.0]), poly(&[2.0]), poly(&[0.0, 0.0, 2.0])],
        vec![poly(&[0.0, 2.0]), poly(&[0.0, 0.0, 1.0]), poly(&[2.0, 1.0])],
    ])
}

/// The failing matrix conjugated by `diag(1, t^{1/2}, 1)`.
fn conjugated_three() -> PuiseuxMatrix {
    matrix(vec![
        vec![poly(&[1.0]), series(&[(1, 2, 1.0), (3, 2, -1.0)]), poly(&[0.0, 1.0])],
        vec![series(&[(1, 2, 1.0)]), poly(&[2.0]), series(&[(3, 2, 2.0)])],
        vec![poly(&[0.0, 2.0]), series(&[(5, 2, 1.0)]), poly(&[2.0, 1.0])],
    ])
}

fn real(rows: usize, data: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(rows, data.len() / rows, data)
}

#[test]
fn intro_pair_to_second_order() {
    let y = intro_matrix();
    let simple = expand_simple(&y, 2.0, Exponent::integer(2), None).unwrap();
    assert!(simple.lambda.approx_eq(&poly(&[2.0, -0.5, 0.375]), 1e-12));
    let perron = expand_perron(&y, Exponent::integer(2), None).unwrap();
    assert!(perron.lambda.approx_eq(&simple.lambda, 1e-12));
    assert!(residual_valuation(&y, &perron.lambda, &perron.right) > Exponent::integer(2));
    // Published vector (1 + t/2 − 5t²/8, 1), compared after fixing the second entry.
    let published = [poly(&[1.0, 0.5, -0.625]), poly(&[1.0])];
    for t in [1e-2, 2e-2] {
        let ours = direction(&perron.right, t, 1);
        let theirs = direction(&published, t, 1);
        assert!((ours[0] - theirs[0]).abs() < 10.0 * t.powi(3));
    }
}

#[test]
fn simple_three_by_three_eigenvalue() {
    let y = simple_three();
    let simple = expand_simple(&y, 3.0, Exponent::integer(2), None).unwrap();
    assert!(simple.lambda.approx_eq(&poly(&[3.0, 1.0, 2.75]), 1e-12));
    for t in [1e-2, 5e-3] {
        assert!(eigen_distance(&y, t, eval(&simple.lambda, t)) < 50.0 * t.powi(3));
    }
    assert!(residual_valuation(&y, &simple.lambda, &simple.vector) > Exponent::integer(2));
    // The published first-order correction (1/2, 3/2, 0) holds up to the kernel direction (1, 1, 1).
    let x1: Vec<f64> = simple.vector.iter().map(|s| s.coeff(Exponent::integer(1)).unwrap()).collect();
    let x0: Vec<f64> = simple.vector.iter().map(|s| s.coeff(Exponent::integer(0)).unwrap()).collect();
    let k = (x1[2] - 0.0) / x0[2];
    assert_relative_eq!(x1[0] - k * x0[0], 0.5, epsilon = 1e-10);
    assert_relative_eq!(x1[1] - k * x0[1], 1.5, epsilon = 1e-10);
}

#[test]
fn pq_of_diagonal_quadruple() {
    let y = matrix(vec![
        vec![poly(&[2.0, 1.0]), poly(&[0.0, 0.0, 1.0])],
        vec![poly(&[0.0, -1.0]), poly(&[2.0, 2.0])],
    ]);
    let x0 = EigenQuadruple::initial(&y, 2.0, None).unwrap();
    let pq = pq_matrices(&x0).unwrap();
    assert_eq!(pq.p, real(2, &[1.0, 0.0, -1.0, 2.0]));
    assert_eq!(pq.q, DMatrix::identity(2, 2));
}

#[test]
fn semisimple_first_pencil() {
    let x0 = EigenQuadruple::initial(&semisimple_three(), 2.0, None).unwrap();
    let pq = pq_matrices(&x0).unwrap();
    assert_eq!(pq.p, real(2, &[1.0, 2.0, 2.0, 1.0]));
    assert_eq!(pq.q, DMatrix::identity(2, 2));
    let roots = pencil_solve(&pq).unwrap();
    assert_relative_eq!(roots[0].zeta, 3.0, epsilon = 1e-12);
    let c = &roots[0].basis[0];
    assert_relative_eq!(c[0], c[1], epsilon = 1e-12);
}

#[test]
fn semisimple_expansion() {
    let y = semisimple_three();
    let x1 = deepen(&EigenQuadruple::initial(&y, 2.0, None).unwrap()).unwrap();
    assert_eq!(x1.rank(), 1);
    let x2 = deepen_rank1(&x1).unwrap();
    assert_eq!(x2.lambda_coeffs().len(), 3);
    assert_relative_eq!(x2.lambda_coeffs()[1], 3.0, epsilon = 1e-10);
    assert_relative_eq!(x2.lambda_coeffs()[2], -4.0, epsilon = 1e-10);

    let perron = expand_perron(&y, Exponent::integer(2), None).unwrap();
    assert!(perron.lambda.approx_eq(&poly(&[2.0, 3.0, -4.0]), 1e-10));
    assert!(residual_valuation(&y, &perron.lambda, &perron.right) > Exponent::integer(2));
    let published = [poly(&[2.0]), poly(&[2.0, 6.0, -7.0]), poly(&[2.0, 5.0])];
    for t in [1e-2, 5e-3] {
        let ours = direction(&perron.right, t, 0);
        let theirs = direction(&published, t, 0);
        for (a, b) in ours.iter().zip(&theirs) {
            assert!((a - b).abs() < 200.0 * t.powi(3));
        }
        assert!(eigen_distance(&y, t, eval(&perron.lambda, t)) < 50.0 * t.powi(3));
    }
}

#[test]
fn failing_example_reports_empty_pencil() {
    let y = failing_three();
    let x1 = deepen(&EigenQuadruple::initial(&y, 2.0, None).unwrap()).unwrap();
    assert_relative_eq!(x1.lambda_coeffs()[1], 1.0, epsilon = 1e-12);
    assert_eq!(deepen(&x1).unwrap_err(), EigenError::PencilEmpty);
    assert_eq!(expand_perron(&y, Exponent::integer(2), None).unwrap_err(), EigenError::PencilEmpty);
}

#[test]
fn conjugated_example_reaches_root_six() {
    let z = conjugated_three();
    let perron = expand_perron(&z, Exponent::new(3, 2), Some(2)).unwrap();
    let mu = perron.quadruple.lambda_coeffs();
    assert_eq!(mu.len(), 4);
    for (got, want) in mu.iter().zip([2.0, 0.0, 1.0, 6f64.sqrt()]) {
        assert_relative_eq!(*got, want, epsilon = 1e-9);
    }
    assert!(residual_valuation(&z, &perron.lambda, &perron.right) > Exponent::new(3, 2));
    let (r3, r2) = (3f64.sqrt(), 2f64.sqrt());
    let published =
        [series(&[(1, 2, r3), (1, 1, r2), (3, 2, -2.0 * r3)]), series(&[(0, 1, r3)]), series(&[(0, 1, r2)])];
    for t in [1e-4, 4e-4] {
        let ours = direction(&perron.right, t, 1);
        let theirs = direction(&published, t, 1);
        for (a, b) in ours.iter().zip(&theirs) {
            assert!((a - b).abs() < 100.0 * t.powi(2));
        }
    }
}

#[test]
fn exact_pair_has_infinite_residual() {
    let y = PuiseuxMatrix::identity(2);
    let x = [poly(&[1.0]), poly(&[0.0])];
    assert_eq!(residual_valuation(&y, &poly(&[1.0]), &x), Valuation::Infinite);
    assert_eq!(residual_valuation(&y, &poly(&[1.0, 1.0]), &x), Exponent::integer(1));
}

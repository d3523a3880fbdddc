//! The recursion for a simple leading eigenvalue.

use nalgebra::{DMatrix, DVector};

use super::linalg::{null_space, scale_of, PseudoInverse};
use super::quadruple::GradedVector;
use super::{EigenError, PENCIL_TOL};
use crate::series_core::{Exponent, PuiseuxMatrix, PuiseuxSeries, PuiseuxVector, Valuation};

/// Next coefficients `(μ_n, x_n)` of a simple eigenpair, with `n = xs.len()`.
///
/// `z[k]` is the coefficient of `Y` at `t^{v + k/q}`, `mu` holds `μ_0..μ_{n−1}`,
/// `w` is a left kernel vector of `Z_0 − μ_0` with `wᵀx_0 = 1`, and `f` a right
/// inverse of `Z_0 − μ_0` on its image.
pub fn simple_step(
    z: &[DMatrix<f64>],
    mu: &[f64],
    xs: &[DVector<f64>],
    w: &DVector<f64>,
    f: &PseudoInverse,
) -> Result<(f64, DVector<f64>), EigenError> {
    let n = xs.len();
    if n == 0 || z.len() <= n || mu.len() < n {
        return Err(EigenError::InvalidQuadruple("too few coefficients for the next step".into()));
    }
    let dim = xs[0].len();
    let w_at = |i: usize, mu_i: f64| &z[i] - DMatrix::identity(dim, dim) * mu_i;
    let inner = (1..n).fold(DVector::zeros(dim), |acc, i| acc + w_at(i, mu[i]) * &xs[n - i]);
    let mu_n = w.dot(&(&z[n] * &xs[0] + &inner));
    let residual = inner + w_at(n, mu_n) * &xs[0];
    let scale = z.iter().map(scale_of).fold(1.0, f64::max) * xs.iter().map(|x| x.amax()).fold(1.0, f64::max);
    if f.image_defect(&residual) > PENCIL_TOL * scale {
        return Err(EigenError::ResidualNotInImage);
    }
    Ok((mu_n, -f.apply(&residual)))
}

/// A simple eigenvalue with its right eigenvector, both known up to the requested depth.
#[derive(Debug, Clone)]
pub struct SimpleExpansion {
    pub lambda: PuiseuxSeries,
    pub vector: PuiseuxVector,
}

/// Expands the eigenpair of `Y` whose leading coefficient `μ_0` is a simple
/// eigenvalue of the leading term, through `depth` above `v(Y)`.
pub fn expand_simple(
    y: &PuiseuxMatrix,
    mu0: f64,
    depth: Exponent,
    q: Option<i64>,
) -> Result<SimpleExpansion, EigenError> {
    if !y.is_square() || y.nrows() == 0 {
        return Err(EigenError::NotSquare);
    }
    let q = q.unwrap_or_else(|| y.ramification());
    if q <= 0 || q % y.ramification() != 0 {
        return Err(EigenError::BadRamification(q));
    }
    let v = y.val().finite().ok_or(EigenError::ZeroMatrix)?;
    let steps = depth.ceil_steps(q).max(0) as usize;
    let z: Vec<DMatrix<f64>> =
        (0..=steps).map(|k| y.coeff_matrix(v + Exponent::new(k as i64, q))).collect::<Result<_, _>>()?;
    let n = y.nrows();
    let shifted = &z[0] - DMatrix::identity(n, n) * mu0;
    let (right, left) = (null_space(&shifted, PENCIL_TOL), null_space(&shifted.transpose(), PENCIL_TOL));
    let ([x0], [w]) = (right.as_slice(), left.as_slice()) else {
        return Err(EigenError::NotSemisimple);
    };
    let pairing = w.dot(x0);
    if pairing.abs() <= PENCIL_TOL * w.norm() * x0.norm() {
        return Err(EigenError::NotSemisimple);
    }
    let w = w / pairing;
    let f = PseudoInverse::new(&z[0], mu0);
    let mut mu = vec![mu0];
    let mut xs = vec![x0.clone()];
    for _ in 0..steps {
        let (mu_n, x_n) = simple_step(&z, &mu, &xs, &w, &f)?;
        mu.push(mu_n);
        xs.push(x_n);
    }
    let lambda = PuiseuxSeries::from_terms(
        mu.iter().enumerate().map(|(k, &c)| (v + Exponent::new(k as i64, q), c)),
        Valuation::Finite(v + Exponent::new(steps as i64, q)),
    );
    let vector = GradedVector { coeffs: xs, lead: 0 }.to_puiseux(q);
    Ok(SimpleExpansion { lambda, vector })
}

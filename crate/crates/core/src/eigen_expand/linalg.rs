//! Dense real helpers: null spaces, right inverses on images, Perron pairs.

use nalgebra::{DMatrix, DVector};

use super::{EigenError, RANK_TOL};
use crate::dense::{singular_values, svd};
use crate::tropical::strong_components;

/// Largest absolute entry, or `1` for a zero matrix.
pub(crate) fn scale_of(a: &DMatrix<f64>) -> f64 {
    let m = a.amax();
    if m > 0.0 {
        m
    } else {
        1.0
    }
}

/// Null space basis by reduced row echelon form with partial pivoting.
///
/// Entries below `tol · max|a|` count as zero. Each basis vector has a `1`
/// in one free column and zeros in the others, so the basis of the zero
/// matrix is the standard basis.
pub fn null_space(a: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let (rows, cols) = a.shape();
    let threshold = tol * scale_of(a);
    let mut m = a.clone();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let (best, value) =
            (r..rows)
                .map(|i| (i, m[(i, col)].abs()))
                .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if value <= threshold {
            continue;
        }
        m.swap_rows(r, best);
        let p = m[(r, col)];
        for j in 0..cols {
            m[(r, j)] /= p;
        }
        for i in 0..rows {
            if i != r {
                let factor = m[(i, col)];
                if factor != 0.0 {
                    for j in 0..cols {
                        m[(i, j)] -= factor * m[(r, j)];
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = DVector::zeros(cols);
            v[free] = 1.0;
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = -m[(k, free)];
            }
            v
        })
        .collect()
}

/// Numerical rank with singular values above `tol · σ_max`.
pub fn numerical_rank(a: &DMatrix<f64>, tol: f64) -> usize {
    if a.is_empty() {
        return 0;
    }
    let sv = singular_values(a);
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * top).count()
}

/// A right inverse of `A − μ` on its image, realized by the Moore–Penrose pseudo-inverse.
#[derive(Debug, Clone)]
pub struct PseudoInverse {
    pub(crate) shifted: DMatrix<f64>,
    pub(crate) pinv: DMatrix<f64>,
}

impl PseudoInverse {
    /// Minimum-norm solver for `(A − μ)·z = b` with `b` in the image.
    pub fn new(a: &DMatrix<f64>, mu: f64) -> Self {
        let n = a.nrows();
        let shifted = a - DMatrix::identity(n, n) * mu;
        let pinv = svd(&shifted).map_or_else(
            || DMatrix::zeros(n, n),
            |f| f.pseudo_inverse(RANK_TOL * f.top().max(f64::MIN_POSITIVE)),
        );
        PseudoInverse { shifted, pinv }
    }

    /// `f(z)`; for `z` in the image `(A − μ)·f(z) = z`.
    pub fn apply(&self, z: &DVector<f64>) -> DVector<f64> {
        &self.pinv * z
    }

    /// Distance from `z` to the image, measured as `‖(A − μ)f(z) − z‖`.
    pub fn image_defect(&self, z: &DVector<f64>) -> f64 {
        (&self.shifted * self.apply(z) - z).norm()
    }

    /// The matrix `A − μ`.
    pub fn shifted(&self) -> &DMatrix<f64> {
        &self.shifted
    }
}

/// `pseudo_inverse_on_image(A, μ)`: a linear right inverse of `A − μ` on its image.
pub fn pseudo_inverse_on_image(a: &DMatrix<f64>, mu: f64) -> PseudoInverse {
    PseudoInverse::new(a, mu)
}

/// Strongly connected blocks of the nonzero pattern of a square matrix.
pub(crate) fn pattern_components(a: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let n = a.nrows();
    let arcs = (0..n).flat_map(|i| (0..n).filter(move |&j| a[(i, j)] != 0.0).map(move |j| (j, i)));
    strong_components(n, arcs.collect::<Vec<_>>())
}

/// Perron root and positive Perron vectors of a nonnegative irreducible matrix.
///
/// Returns `(ρ, x, y)` with `A·x = ρ·x`, `Aᵀ·y = ρ·y`, `‖x‖ = 1` and `yᵀx = 1`.
pub fn perron_real(a: &DMatrix<f64>) -> Result<(f64, DVector<f64>, DVector<f64>), EigenError> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(EigenError::NotIrreducible);
    }
    if n == 1 {
        return Ok((a[(0, 0)], DVector::from_element(1, 1.0), DVector::from_element(1, 1.0)));
    }
    let scale = scale_of(a);
    if a.iter().any(|&x| x < -RANK_TOL * scale) || pattern_components(a).len() != 1 {
        return Err(EigenError::NotIrreducible);
    }
    let rho = a.clone().complex_eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let x = positive_null_vector(&(a - DMatrix::identity(n, n) * rho))?;
    let y = positive_null_vector(&(a.transpose() - DMatrix::identity(n, n) * rho))?;
    let x = &x / x.norm();
    let y = &y / y.dot(&x);
    let rho = y.dot(&(a * &x));
    let defect = (a * &x - &x * rho).norm().max((a.transpose() * &y - &y * rho).norm() / y.norm());
    if !defect.is_finite() || defect > 1e-8 * scale {
        return Err(EigenError::ConvergenceFailure);
    }
    Ok((rho, x, y))
}

/// Right singular vector of the least singular value, signed to have positive sum.
fn positive_null_vector(m: &DMatrix<f64>) -> Result<DVector<f64>, EigenError> {
    let f = svd(m).ok_or(EigenError::ConvergenceFailure)?;
    let (k, _) =
        f.s.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let mut v: DVector<f64> = f.v_t.row(k).transpose();
    if v.sum() < 0.0 {
        v = -v;
    }
    let top = v.amax();
    if v.iter().any(|&c| c <= 1e-12 * top) {
        return Err(EigenError::ConvergenceFailure);
    }
    Ok(v)
}

/// Spectral radius of a nonnegative matrix: the largest Perron root over its irreducible blocks.
pub fn nonnegative_spectral_radius(a: &DMatrix<f64>) -> Result<f64, EigenError> {
    pattern_components(a)
        .iter()
        .map(|block| {
            let sub = DMatrix::from_fn(block.len(), block.len(), |i, j| a[(block[i], block[j])]);
            if block.len() == 1 {
                Ok(sub[(0, 0)])
            } else {
                perron_real(&sub).map(|(rho, _, _)| rho)
            }
        })
        .try_fold(f64::NEG_INFINITY, |acc, r| r.map(|r| acc.max(r)))
}

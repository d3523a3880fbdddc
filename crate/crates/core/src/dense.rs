//! Singular value decompositions of dense real matrices, computed by faer.

use nalgebra::{DMatrix, DVector};

/// `A = U·diag(s)·Vᵀ` with singular values in decreasing order.
#[derive(Debug, Clone)]
pub(crate) struct Svd {
    pub(crate) u: DMatrix<f64>,
    pub(crate) s: DVector<f64>,
    pub(crate) v_t: DMatrix<f64>,
}

impl Svd {
    pub(crate) fn top(&self) -> f64 {
        self.s.iter().copied().fold(0.0, f64::max)
    }

    /// Moore–Penrose pseudo-inverse, dropping singular values at or below `cutoff`.
    pub(crate) fn pseudo_inverse(&self, cutoff: f64) -> DMatrix<f64> {
        let inv = DVector::from_iterator(
            self.s.len(),
            self.s.iter().map(|&x| if x > cutoff { 1.0 / x } else { 0.0 }),
        );
        self.v_t.transpose() * DMatrix::from_diagonal(&inv) * self.u.transpose()
    }
}

fn to_faer(a: &DMatrix<f64>) -> faer::Mat<f64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Thin SVD, or `None` if the iteration fails or `a` is empty.
pub(crate) fn svd(a: &DMatrix<f64>) -> Option<Svd> {
    if a.is_empty() {
        return None;
    }
    let f = to_faer(a).thin_svd().ok()?;
    let (u, s, v) = (f.U(), f.S().column_vector(), f.V());
    Some(Svd {
        u: DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]),
        s: DVector::from_fn(s.nrows(), |i, _| s[i]),
        v_t: DMatrix::from_fn(v.ncols(), v.nrows(), |i, j| v[(j, i)]),
    })
}

/// Singular values in decreasing order; empty for an empty matrix or a failed iteration.
pub(crate) fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    to_faer(a).singular_values().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_near_singular_matrix() {
        let mut a = DMatrix::from_row_slice(
            3,
            3,
            &[
                1.756073665826577,
                1.3573621277863654,
                0.9769755580116886,
                0.730845365403106,
                1.650457364860328,
                0.8053913108250828,
                0.3551288591917492,
                0.2,
                1.2098919233663812,
            ],
        );
        for i in 0..3 {
            a[(i, i)] -= 2.9938143355936875;
        }
        let f = svd(&a).unwrap();
        let back = &f.u * DMatrix::from_diagonal(&f.s) * &f.v_t;
        assert!((back - &a).norm() < 1e-13);
        assert!(f.s[2] < 1e-13 && f.s[0] >= f.s[1]);
        let p = f.pseudo_inverse(1e-9 * f.top());
        assert!((&a * &p * &a - &a).norm() < 1e-13);
        assert_eq!(singular_values(&a).len(), 3);
    }
}

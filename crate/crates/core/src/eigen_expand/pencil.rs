//! Real solutions of the pencil `(P − ζQ)c = 0`.

use std::f64::consts::{E, PI, SQRT_2};

use nalgebra::{DMatrix, DVector};

use super::linalg::{null_space, scale_of};
use super::quadruple::{invert_checked, PQPair};
use super::{EigenError, PENCIL_TOL};

/// A real root `ζ` of the pencil with a basis of `L(ζ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilRoot {
    pub zeta: f64,
    pub basis: Vec<DVector<f64>>,
}

/// Real finite roots of `det(Δ − ζΩ) = 0`, largest first, each lifted to `L(ζ)`.
///
/// The principal pencil is solved through `(Δ − σΩ)⁻¹Ω`, whose nonzero
/// eigenvalues `ν` give `ζ = σ + 1/ν`. Each basis vector `v` of
/// `Ker(Δ − ζΩ)` is lifted to `c = (v, −Γ⁻¹(A − ζB)v)`.
pub fn pencil_solve(pq: &PQPair) -> Result<Vec<PencilRoot>, EigenError> {
    let gamma_inv = invert_checked(&pq.gamma()).ok_or(EigenError::GammaSingular)?;
    if pq.rank == 0 {
        return Ok(Vec::new());
    }
    let delta = pq.delta();
    let omega = pq.omega();
    let mut roots = Vec::new();
    for zeta in principal_roots(&delta, &omega) {
        let shifted = &delta - &omega * zeta;
        let kernel = null_space(&shifted, PENCIL_TOL);
        if kernel.is_empty() {
            continue;
        }
        let lift = &gamma_inv * (pq.a() - pq.b() * zeta);
        let basis = kernel
            .into_iter()
            .map(|v| {
                let tail = -(&lift * &v);
                DVector::from_iterator(pq.size(), v.iter().copied().chain(tail.iter().copied()))
            })
            .collect();
        roots.push(PencilRoot { zeta, basis });
    }
    Ok(roots)
}

/// Distinct real finite generalized eigenvalues of `(Δ, Ω)`, in decreasing order.
fn principal_roots(delta: &DMatrix<f64>, omega: &DMatrix<f64>) -> Vec<f64> {
    let scale = scale_of(delta).max(scale_of(omega));
    let shifts = [0.0, 0.618_034, -SQRT_2, E, -PI].map(|s| s * scale);
    let Some((sigma, solved)) =
        shifts.iter().find_map(|&sigma| invert_checked(&(delta - omega * sigma)).map(|m| (sigma, m * omega)))
    else {
        return Vec::new();
    };
    // Eigenvalues ν near zero correspond to infinite ζ and are dropped.
    let mut zetas: Vec<f64> = solved
        .complex_eigenvalues()
        .iter()
        .filter(|nu| nu.norm() * 1e8 * scale > 1.0 && nu.im.abs() <= 1e-6 * nu.norm())
        .map(|nu| sigma + 1.0 / nu.re)
        .collect();
    zetas.sort_by(|a, b| b.total_cmp(a));
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for z in zetas {
        match clusters.last_mut() {
            Some(c) if (c[0] - z).abs() <= 1e-6 * (scale + c[0].abs()) => c.push(z),
            _ => clusters.push(vec![z]),
        }
    }
    clusters.iter().map(|c| c.iter().sum::<f64>() / c.len() as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pair(p: &[f64], q: &[f64], g: usize, rank: usize) -> PQPair {
        PQPair { p: DMatrix::from_row_slice(g, g, p), q: DMatrix::from_row_slice(g, g, q), rank }
    }

    #[test]
    fn symmetric_pencil_has_root_three() {
        let roots = pencil_solve(&pair(&[1.0, 2.0, 2.0, 1.0], &[1.0, 0.0, 0.0, 1.0], 2, 2)).unwrap();
        assert_eq!(roots.len(), 2);
        assert_relative_eq!(roots[0].zeta, 3.0, epsilon = 1e-10);
        assert_eq!(roots[0].basis.len(), 1);
        let c = &roots[0].basis[0];
        assert_relative_eq!(c[0], c[1], epsilon = 1e-10);
        assert_relative_eq!(roots[1].zeta, -1.0, epsilon = 1e-10);
    }

    #[test]
    fn degenerate_omega_has_no_root() {
        let roots = pencil_solve(&pair(&[1.0, 0.0, 1.0, 2.0], &[0.0, 0.0, 1.0, 0.0], 2, 1)).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn identity_pencil_returns_standard_basis() {
        let roots = pencil_solve(&pair(&[1.0, 0.0, 0.0, 1.0], &[1.0, 0.0, 0.0, 1.0], 2, 2)).unwrap();
        assert_eq!(roots.len(), 1);
        assert_relative_eq!(roots[0].zeta, 1.0, epsilon = 1e-10);
        assert_eq!(roots[0].basis[0], DVector::from_vec(vec![1.0, 0.0]));
    }

    #[test]
    fn singular_gamma_is_reported() {
        let r = pencil_solve(&pair(&[1.0, 0.0, 1.0, 0.0], &[1.0, 0.0, 0.0, 0.0], 2, 1));
        assert!(matches!(r, Err(EigenError::GammaSingular)));
    }
}

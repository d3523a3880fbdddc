//! Quasi bases, eigen-quadruples and their P/Q matrices.

use nalgebra::{DMatrix, DVector};

use super::linalg::{nonnegative_spectral_radius, null_space};
use super::{EigenError, RANK_TOL};
use crate::dense::singular_values;
use crate::series_core::{Exponent, PuiseuxMatrix, PuiseuxSeries, PuiseuxVector, Valuation};

/// A truncated vector `Σ_k coeffs[k]·s^k` with `s = t^{1/q}`.
///
/// `lead` is the index of its leading term: `0` for leading vectors, and
/// `≥ 1` for tail vectors, which are stored already multiplied by `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedVector {
    pub(crate) coeffs: Vec<DVector<f64>>,
    pub(crate) lead: usize,
}

impl GradedVector {
    pub(crate) fn constant(x: DVector<f64>) -> Self {
        GradedVector { coeffs: vec![x], lead: 0 }
    }

    /// Coefficient of `s^k` (zero above the stored range).
    pub fn coeff(&self, k: usize) -> DVector<f64> {
        self.coeffs.get(k).cloned().unwrap_or_else(|| DVector::zeros(self.dim()))
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].len()
    }

    /// `ℓt(x)`: the coefficient at the lead index.
    pub fn leading(&self) -> &DVector<f64> {
        &self.coeffs[self.lead]
    }

    /// Multiplication by `s`.
    pub(crate) fn shifted(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(DVector::zeros(self.dim()));
        coeffs.extend(self.coeffs.iter().cloned());
        GradedVector { coeffs, lead: self.lead + 1 }
    }

    pub(crate) fn scaled(&self, k: f64) -> Self {
        GradedVector { coeffs: self.coeffs.iter().map(|c| c * k).collect(), lead: self.lead }
    }

    /// Puiseux form with exponents `k/q`, known up to `(len − 1)/q`.
    pub fn to_puiseux(&self, q: i64) -> PuiseuxVector {
        let trunc = Valuation::Finite(Exponent::new(self.coeffs.len() as i64 - 1, q));
        (0..self.dim())
            .map(|i| {
                PuiseuxSeries::from_terms(
                    self.coeffs.iter().enumerate().map(|(k, c)| (Exponent::new(k as i64, q), c[i])),
                    trunc,
                )
            })
            .collect()
    }
}

/// Linear combination `Σ c_i·v_i` of graded vectors of equal length.
pub(crate) fn combine(vectors: &[GradedVector], c: &DVector<f64>) -> Vec<DVector<f64>> {
    let len = vectors.iter().map(|v| v.coeffs.len()).max().unwrap_or(0);
    let dim = vectors.first().map_or(0, GradedVector::dim);
    (0..len)
        .map(|k| {
            vectors.iter().zip(c.iter()).fold(DVector::zeros(dim), |acc, (v, &ci)| acc + v.coeff(k) * ci)
        })
        .collect()
}

/// Generators of the approximate eigenvector module: `rank` leading vectors then tails.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiBasis {
    pub(crate) vectors: Vec<GradedVector>,
    pub(crate) rank: usize,
    pub(crate) q: i64,
}

impl QuasiBasis {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.vectors.len()
    }

    pub fn ramification(&self) -> i64 {
        self.q
    }

    pub fn graded(&self) -> &[GradedVector] {
        &self.vectors
    }

    /// The stored vectors as Puiseux vectors (tails already multiplied by `t^{1/q}`).
    pub fn vectors(&self) -> Vec<PuiseuxVector> {
        self.vectors.iter().map(|v| v.to_puiseux(self.q)).collect()
    }

    /// Columns `ℓt(x^1), …, ℓt(x^g)`.
    pub fn leading_matrix(&self) -> DMatrix<f64> {
        let n = self.vectors.first().map_or(0, GradedVector::dim);
        DMatrix::from_fn(n, self.size(), |i, j| self.vectors[j].leading()[i])
    }
}

/// An eigen-quadruple `(Y; λ; right; left)` of depth `Λ`.
///
/// `mu[k]` is the coefficient of `λ` at `t^{v + k/q}` with `v = v(Y)`; the
/// depth is `(mu.len() − 1)/q`.
#[derive(Debug, Clone)]
pub struct EigenQuadruple {
    pub(crate) y: PuiseuxMatrix,
    pub(crate) v: Exponent,
    pub(crate) q: i64,
    pub(crate) mu: Vec<f64>,
    pub(crate) right: QuasiBasis,
    pub(crate) left: QuasiBasis,
}

impl EigenQuadruple {
    /// Depth-0 quadruple at `λ = μ₀·t^{v(Y)}` with kernel bases of `Y_v − μ₀`.
    ///
    /// `q` defaults to the ramification of `Y` and must be a multiple of it.
    pub fn initial(y: &PuiseuxMatrix, mu0: f64, q: Option<i64>) -> Result<Self, EigenError> {
        if !y.is_square() || y.nrows() == 0 {
            return Err(EigenError::NotSquare);
        }
        let q = q.unwrap_or_else(|| y.ramification());
        if q <= 0 || q % y.ramification() != 0 {
            return Err(EigenError::BadRamification(q));
        }
        let v = y.val().finite().ok_or(EigenError::ZeroMatrix)?;
        let z0 = y.coeff_matrix(v)?;
        let n = z0.nrows();
        let shifted = &z0 - DMatrix::identity(n, n) * mu0;
        let xs = null_space(&shifted, super::PENCIL_TOL);
        let ys = null_space(&shifted.transpose(), super::PENCIL_TOL);
        if xs.is_empty() || xs.len() != ys.len() {
            return Err(EigenError::NotSemisimple);
        }
        let right: Vec<GradedVector> = xs.into_iter().map(GradedVector::constant).collect();
        let left: Vec<GradedVector> = ys.into_iter().map(GradedVector::constant).collect();
        let r = right.len();
        let mut eq = EigenQuadruple {
            y: y.clone(),
            v,
            q,
            mu: vec![mu0],
            right: QuasiBasis { vectors: right, rank: r, q },
            left: QuasiBasis { vectors: left, rank: r, q },
        };
        if !eq.biorthogonalize() {
            return Err(EigenError::NotSemisimple);
        }
        Ok(eq)
    }

    /// Depth-0 quadruple at the spectral radius of the leading term of a nonnegative `Y`.
    pub fn perron_initial(y: &PuiseuxMatrix, q: Option<i64>) -> Result<Self, EigenError> {
        let lead = y.leading_term()?;
        let rho = nonnegative_spectral_radius(&lead)?;
        Self::initial(y, rho, q)
    }

    pub fn matrix(&self) -> &PuiseuxMatrix {
        &self.y
    }

    pub fn right(&self) -> &QuasiBasis {
        &self.right
    }

    pub fn left(&self) -> &QuasiBasis {
        &self.left
    }

    pub fn rank(&self) -> usize {
        self.right.rank
    }

    pub fn size(&self) -> usize {
        self.right.size()
    }

    pub fn ramification(&self) -> i64 {
        self.q
    }

    /// Valuation `v(Y)` at which `λ` starts.
    pub fn base_valuation(&self) -> Exponent {
        self.v
    }

    /// Number of `1/q` steps taken: `Λ·q`.
    pub fn steps(&self) -> usize {
        self.mu.len() - 1
    }

    pub fn depth(&self) -> Exponent {
        Exponent::new(self.steps() as i64, self.q)
    }

    /// Coefficients of `λ` at `t^{v + k/q}`.
    pub fn lambda_coeffs(&self) -> &[f64] {
        &self.mu
    }

    /// `λ` known up to `t^{v + Λ}`.
    pub fn lambda(&self) -> PuiseuxSeries {
        PuiseuxSeries::from_terms(
            self.mu.iter().enumerate().map(|(k, &c)| (self.v + Exponent::new(k as i64, self.q), c)),
            Valuation::Finite(self.v + self.depth()),
        )
    }

    /// The transposed quadruple `(Yᵀ; λ; left; right)`.
    pub fn transpose(&self) -> Self {
        EigenQuadruple {
            y: self.y.transpose(),
            v: self.v,
            q: self.q,
            mu: self.mu.clone(),
            right: self.left.clone(),
            left: self.right.clone(),
        }
    }

    /// Coefficient matrices `Z_k` of `Y` at `t^{v + k/q}` for `k = 0..=upto`.
    pub(crate) fn z_terms(&self, upto: usize) -> Result<Vec<DMatrix<f64>>, EigenError> {
        (0..=upto)
            .map(|k| self.y.coeff_matrix(self.v + Exponent::new(k as i64, self.q)).map_err(EigenError::from))
            .collect()
    }

    /// Rescales the leading left vectors so that `Ω = Id`; false if `Ω` is singular.
    pub(crate) fn biorthogonalize(&mut self) -> bool {
        let r = self.rank();
        let x0 = self.right.leading_matrix().columns(0, r).into_owned();
        let y0 = self.left.leading_matrix().columns(0, r).into_owned();
        let omega = y0.transpose() * &x0;
        let Some(inv) = invert_checked(&omega) else {
            return false;
        };
        let old: Vec<GradedVector> = self.left.vectors[..r].to_vec();
        for i in 0..r {
            let coeffs = combine(&old, &inv.row(i).transpose());
            self.left.vectors[i] = GradedVector { coeffs, lead: 0 };
        }
        true
    }
}

/// Inverse of a square matrix whose smallest singular value is above tolerance.
pub(crate) fn invert_checked(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    if m.is_empty() {
        return Some(m.clone());
    }
    let sv = singular_values(m);
    let top = sv.iter().copied().fold(0.0, f64::max);
    let low = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if top == 0.0 || low <= RANK_TOL * top {
        return None;
    }
    m.clone().try_inverse()
}

/// The real matrices `P(X)` and `Q(X)` with their block partition at the rank.
#[derive(Debug, Clone, PartialEq)]
pub struct PQPair {
    pub p: DMatrix<f64>,
    pub q: DMatrix<f64>,
    pub rank: usize,
}

impl PQPair {
    pub fn size(&self) -> usize {
        self.p.nrows()
    }

    /// Principal block `Δ` of `P`.
    pub fn delta(&self) -> DMatrix<f64> {
        self.p.view((0, 0), (self.rank, self.rank)).into_owned()
    }

    /// Principal block `Ω` of `Q`.
    pub fn omega(&self) -> DMatrix<f64> {
        self.q.view((0, 0), (self.rank, self.rank)).into_owned()
    }

    /// Lower-left block `A` of `P`.
    pub fn a(&self) -> DMatrix<f64> {
        let t = self.size() - self.rank;
        self.p.view((self.rank, 0), (t, self.rank)).into_owned()
    }

    /// Lower-left block `B` of `Q`.
    pub fn b(&self) -> DMatrix<f64> {
        let t = self.size() - self.rank;
        self.q.view((self.rank, 0), (t, self.rank)).into_owned()
    }

    /// Lower-right block `Γ` of `P`.
    pub fn gamma(&self) -> DMatrix<f64> {
        let t = self.size() - self.rank;
        self.p.view((self.rank, self.rank), (t, t)).into_owned()
    }
}

/// `P_ij = ℓt(y^i)ᵀ·Σ_{k=0}^{D} W_{D+1−k}·x^j_k` with `W_m = Z_m − μ_m` and
/// `μ_{D+1} = 0`; `Q_ij = ℓt(y^i)ᵀ·x^j_0`. The upper-right blocks are set to zero.
pub fn pq_matrices(x: &EigenQuadruple) -> Result<PQPair, EigenError> {
    let d = x.steps();
    let z = x.z_terms(d + 1)?;
    let g = x.size();
    let r = x.rank();
    let n = x.y.nrows();
    let w = |m: usize| -> DMatrix<f64> {
        let mu = x.mu.get(m).copied().unwrap_or(0.0);
        &z[m] - DMatrix::identity(n, n) * mu
    };
    let residuals: Vec<DVector<f64>> = x
        .right
        .vectors
        .iter()
        .map(|xj| (0..=d).fold(DVector::zeros(n), |acc, k| acc + w(d + 1 - k) * xj.coeff(k)))
        .collect();
    let mut p = DMatrix::zeros(g, g);
    let mut q = DMatrix::zeros(g, g);
    for (i, yi) in x.left.vectors.iter().enumerate() {
        let lt = yi.leading();
        for (j, xj) in x.right.vectors.iter().enumerate() {
            if i < r && j >= r {
                continue;
            }
            p[(i, j)] = lt.dot(&residuals[j]);
            if j < r {
                q[(i, j)] = lt.dot(&xj.coeff(0));
            }
        }
    }
    Ok(PQPair { p, q, rank: r })
}

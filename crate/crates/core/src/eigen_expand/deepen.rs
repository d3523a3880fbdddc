//! Deepening an eigen-quadruple by one power of `t^{1/q}`.

use nalgebra::{DMatrix, DVector};

use super::linalg::{null_space, numerical_rank, scale_of, PseudoInverse};
use super::pencil::{pencil_solve, PencilRoot};
use super::quadruple::{
    combine, invert_checked, pq_matrices, EigenQuadruple, GradedVector, PQPair, QuasiBasis,
};
use super::{EigenError, PENCIL_TOL, RANK_TOL};
use crate::series_core::{
    Exponent, PuiseuxMatrix, PuiseuxSeries, PuiseuxVector, Valuation, DEFAULT_ZERO_TOL,
};

/// One step at the root `ζ` with right coefficient vectors `root.basis`.
///
/// The left quasi basis is advanced at the same `ζ` from the pencil of the
/// transposed quadruple.
pub fn deepen_semisimple(x: &EigenQuadruple, root: &PencilRoot) -> Result<EigenQuadruple, EigenError> {
    if root.basis.is_empty() {
        return Err(EigenError::PencilEmpty);
    }
    let transposed = x.transpose();
    let left_cs = lift_at(&pq_matrices(&transposed)?, root.zeta)?;
    if left_cs.len() != root.basis.len() {
        return Err(EigenError::PencilEmpty);
    }
    let right = advance(x, root.zeta, &root.basis)?;
    let left = advance(&transposed, root.zeta, &left_cs)?;
    Ok(assemble(x, root.zeta, right, left))
}

/// One step of a rank-one quadruple: `ζ = P₁₁/Q₁₁`, `c = (1, −Γ⁻¹(p − ζq))`.
pub fn deepen_rank1(x: &EigenQuadruple) -> Result<EigenQuadruple, EigenError> {
    if x.rank() != 1 {
        return Err(EigenError::InvalidQuadruple(format!("rank {} is not 1", x.rank())));
    }
    let pq = pq_matrices(x)?;
    let q11 = pq.q[(0, 0)];
    if q11.abs() <= RANK_TOL * scale_of(&pq.q) {
        return Err(EigenError::PencilEmpty);
    }
    let zeta = pq.p[(0, 0)] / q11;
    let right_c = rank1_lift(&pq, zeta)?;
    let transposed = x.transpose();
    let left_c = rank1_lift(&pq_matrices(&transposed)?, zeta)?;
    let right = advance(x, zeta, &[right_c])?;
    let left = advance(&transposed, zeta, &[left_c])?;
    Ok(assemble(x, zeta, right, left))
}

/// One step at the largest real root of the pencil.
pub fn deepen(x: &EigenQuadruple) -> Result<EigenQuadruple, EigenError> {
    let roots = pencil_solve(&pq_matrices(x)?)?;
    let root = roots.first().ok_or(EigenError::PencilEmpty)?;
    deepen_semisimple(x, root)
}

fn rank1_lift(pq: &PQPair, zeta: f64) -> Result<DVector<f64>, EigenError> {
    let gamma_inv = invert_checked(&pq.gamma()).ok_or(EigenError::GammaSingular)?;
    let tail = -(gamma_inv * (pq.a() - pq.b() * zeta)).column(0).into_owned();
    Ok(DVector::from_iterator(pq.size(), std::iter::once(1.0).chain(tail.iter().copied())))
}

/// Lifted kernel of `Δ − ζΩ` at a prescribed `ζ`.
fn lift_at(pq: &PQPair, zeta: f64) -> Result<Vec<DVector<f64>>, EigenError> {
    let gamma_inv = invert_checked(&pq.gamma()).ok_or(EigenError::GammaSingular)?;
    let kernel = null_space(&(pq.delta() - pq.omega() * zeta), PENCIL_TOL);
    let lift = gamma_inv * (pq.a() - pq.b() * zeta);
    Ok(kernel
        .into_iter()
        .map(|v| {
            let tail = -(&lift * &v);
            DVector::from_iterator(pq.size(), v.iter().copied().chain(tail.iter().copied()))
        })
        .collect())
}

/// The next right quasi basis: new leading vectors from `cs`, then the
/// retained old leading vectors and the old tails, all shifted by `s`.
fn advance(x: &EigenQuadruple, zeta: f64, cs: &[DVector<f64>]) -> Result<QuasiBasis, EigenError> {
    let d = x.steps();
    let z = x.z_terms(d + 1)?;
    let n = x.y.nrows();
    let w = |m: usize| {
        let mu = if m == d + 1 { zeta } else { x.mu[m] };
        &z[m] - DMatrix::identity(n, n) * mu
    };
    let f = PseudoInverse::new(&z[0], x.mu[0]);
    let z_scale = z.iter().map(scale_of).fold(1.0, f64::max);
    let basis = &x.right;

    let mut leading = Vec::with_capacity(basis.size());
    for c in cs {
        let mut coeffs = combine(&basis.vectors, c);
        coeffs.resize(d + 1, DVector::zeros(n));
        let residual = (1..=d + 1).fold(DVector::zeros(n), |acc, i| acc + w(i) * &coeffs[d + 1 - i]);
        let x_scale = coeffs.iter().map(|v| v.amax()).fold(1.0, f64::max);
        if f.image_defect(&residual) > PENCIL_TOL * z_scale * x_scale {
            return Err(EigenError::ResidualNotInImage);
        }
        coeffs.push(-f.apply(&residual));
        leading.push(GradedVector { coeffs, lead: 0 });
    }
    let rank = leading.len();

    let mut spanned: Vec<DVector<f64>> = leading.iter().map(|v| v.coeffs[0].clone()).collect();
    let mut retained = Vec::new();
    for old in &basis.vectors[..basis.rank] {
        if spanned.len() == basis.rank {
            break;
        }
        let mut trial = spanned.clone();
        trial.push(old.coeffs[0].clone());
        if numerical_rank(&DMatrix::from_columns(&trial), RANK_TOL) == trial.len() {
            spanned = trial;
            retained.push(old.shifted());
        }
    }
    let tails = basis.vectors[basis.rank..].iter().map(GradedVector::shifted);
    let mut vectors = leading;
    vectors.extend(retained);
    vectors.extend(tails);
    Ok(QuasiBasis { vectors, rank, q: basis.q })
}

fn assemble(x: &EigenQuadruple, zeta: f64, right: QuasiBasis, left: QuasiBasis) -> EigenQuadruple {
    let mut mu = x.mu.clone();
    mu.push(zeta);
    let mut next = EigenQuadruple { y: x.y.clone(), v: x.v, q: x.q, mu, right, left };
    // A singular Ω leaves the pairing as is; the next pencil then has no root.
    next.biorthogonalize();
    next
}

/// The Perron root of a nonnegative Puiseux matrix with first right and left vectors.
#[derive(Debug, Clone)]
pub struct PerronExpansion {
    pub lambda: PuiseuxSeries,
    pub right: PuiseuxVector,
    pub left: PuiseuxVector,
    pub quadruple: EigenQuadruple,
}

/// Deepens from the Perron root of the leading term until the depth above
/// `v(Y)` reaches `depth`, using the rank-one step whenever it applies.
pub fn expand_perron(
    y: &PuiseuxMatrix,
    depth: Exponent,
    q: Option<i64>,
) -> Result<PerronExpansion, EigenError> {
    let mut eq = EigenQuadruple::perron_initial(y, q)?;
    let target = depth.ceil_steps(eq.q).max(0) as usize;
    while eq.steps() < target {
        eq = if eq.rank() == 1 { deepen_rank1(&eq)? } else { deepen(&eq)? };
    }
    let oriented = |v: &GradedVector| {
        if v.leading().sum() < 0.0 {
            v.scaled(-1.0)
        } else {
            v.clone()
        }
    };
    let right = oriented(&eq.right.vectors[0]).to_puiseux(eq.q);
    let left = oriented(&eq.left.vectors[0]).to_puiseux(eq.q);
    Ok(PerronExpansion { lambda: eq.lambda(), right, left, quadruple: eq })
}

/// Valuation of `(Y − λ)x`, with cancellation noise below `1e-9` of the
/// largest coefficient of `Y·x` and `λ·x` discarded.
///
/// `Valuation::Infinite` means every computable term vanishes.
pub fn residual_valuation(y: &PuiseuxMatrix, lambda: &PuiseuxSeries, x: &[PuiseuxSeries]) -> Valuation {
    let Ok(yx) = y.mat_vec(x) else {
        return Valuation::Infinite;
    };
    let lx: Vec<PuiseuxSeries> = x.iter().map(|xi| lambda.mul_tol(xi, 0.0)).collect();
    let scale =
        yx.iter().chain(lx.iter()).flat_map(|s| s.terms().iter().map(|&(_, c)| c.abs())).fold(0.0, f64::max);
    yx.iter()
        .zip(lx.iter())
        .map(|(a, b)| {
            let diff = a.add_tol(&-b, 0.0);
            let kept = diff.terms().iter().find(|&&(_, c)| c.abs() > 1e-9 * scale.max(DEFAULT_ZERO_TOL));
            kept.map_or(Valuation::Infinite, |&(e, _)| Valuation::Finite(e))
        })
        .min()
        .unwrap_or(Valuation::Infinite)
}

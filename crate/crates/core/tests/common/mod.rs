//! Shared builders and numeric oracles for integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use perron_core::{Exponent, PuiseuxMatrix, PuiseuxSeries, Valuation};

/// Exact series from `(numer, denom, coeff)` triples.
pub fn series(terms: &[(i64, i64, f64)]) -> PuiseuxSeries {
    PuiseuxSeries::from_terms(terms.iter().map(|&(n, d, c)| (Exponent::new(n, d), c)), Valuation::Infinite)
}

/// Exact polynomial in `t` from integer-power coefficients `c_0, c_1, …`.
pub fn poly(coeffs: &[f64]) -> PuiseuxSeries {
    let terms: Vec<_> = coeffs.iter().enumerate().map(|(k, &c)| (k as i64, 1, c)).collect();
    series(&terms)
}

pub fn matrix(rows: Vec<Vec<PuiseuxSeries>>) -> PuiseuxMatrix {
    PuiseuxMatrix::from_rows(rows).unwrap()
}

pub fn eval(s: &PuiseuxSeries, t: f64) -> f64 {
    s.terms().iter().map(|&(e, c)| c * t.powf(e.to_f64())).sum()
}

pub fn eval_matrix(y: &PuiseuxMatrix, t: f64) -> DMatrix<f64> {
    DMatrix::from_fn(y.nrows(), y.ncols(), |i, j| eval(y.get(i, j), t))
}

/// Real eigenvalues of `Y(t)`.
pub fn real_eigenvalues(y: &PuiseuxMatrix, t: f64) -> Vec<f64> {
    eval_matrix(y, t).complex_eigenvalues().iter().filter(|z| z.im.abs() < 1e-9).map(|z| z.re).collect()
}

/// Distance from `value` to the nearest real eigenvalue of `Y(t)`.
pub fn eigen_distance(y: &PuiseuxMatrix, t: f64, value: f64) -> f64 {
    real_eigenvalues(y, t).iter().map(|e| (e - value).abs()).fold(f64::INFINITY, f64::min)
}

/// Ratios `x_i(t)/x_k(t)` of a series vector at a numeric `t`.
pub fn direction(x: &[PuiseuxSeries], t: f64, k: usize) -> Vec<f64> {
    let base = eval(&x[k], t);
    x.iter().map(|s| eval(s, t) / base).collect()
}

/// Coefficients `a … k` of the three-node family
/// `[[a, bt, ct²], [dt², et³, f], [g, h, kt]]`.
#[derive(Debug, Clone, Copy)]
pub struct Family {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub h: f64,
    pub k: f64,
}

impl Family {
    pub fn unit() -> Self {
        Self { a: 1.0, b: 1.0, c: 1.0, d: 1.0, e: 1.0, f: 1.0, g: 1.0, h: 1.0, k: 1.0 }
    }

    pub fn with(self, a: f64, f: f64, h: f64) -> Self {
        Self { a, f, h, ..self }
    }

    pub fn matrix(&self) -> PuiseuxMatrix {
        let m = |c: f64, e: (i64, i64)| series(&[(e.0, e.1, c)]);
        matrix(vec![
            vec![m(self.a, (0, 1)), m(self.b, (1, 1)), m(self.c, (2, 1))],
            vec![m(self.d, (2, 1)), m(self.e, (3, 1)), m(self.f, (0, 1))],
            vec![m(self.g, (0, 1)), m(self.h, (0, 1)), m(self.k, (1, 1))],
        ])
    }

    /// The family conjugated so that its valuation graph is flat-slanted.
    pub fn flat(&self) -> PuiseuxMatrix {
        let m = |c: f64, e: (i64, i64)| series(&[(e.0, e.1, c)]);
        matrix(vec![
            vec![m(self.a, (0, 1)), m(self.b, (1, 2)), m(self.c, (3, 2))],
            vec![m(self.d, (5, 2)), m(self.e, (3, 1)), m(self.f, (0, 1))],
            vec![m(self.g, (1, 2)), m(self.h, (0, 1)), m(self.k, (1, 1))],
        ])
    }
}

/// Tridiagonal `λ₀` on the diagonal, `1` above it and `t^{A_j}` below it.
pub fn chain(lambda0: f64, a: &[Exponent]) -> PuiseuxMatrix {
    let n = a.len() + 1;
    PuiseuxMatrix::from_fn(n, n, |i, j| {
        if i == j {
            PuiseuxSeries::constant(lambda0)
        } else if j == i + 1 {
            PuiseuxSeries::one()
        } else if i == j + 1 {
            PuiseuxSeries::monomial(1.0, a[j])
        } else {
            PuiseuxSeries::zero()
        }
    })
}

/// The chain conjugated so that nodes `1, 2` balance at `A₁/2` and every
/// later node hangs below its predecessor at `A₁/2 + ε`.
pub fn chain_balanced(lambda0: f64, a: &[Exponent], eps: Exponent) -> PuiseuxMatrix {
    let n = a.len() + 1;
    let half = a[0] / 2;
    PuiseuxMatrix::from_fn(n, n, |i, j| {
        let mono = |e: Exponent| PuiseuxSeries::monomial(1.0, e);
        match (i, j) {
            _ if i == j => PuiseuxSeries::constant(lambda0),
            (0, 1) | (1, 0) => mono(half),
            _ if j == i + 1 => mono(a[i] - half - eps),
            _ if i == j + 1 => mono(half + eps),
            _ => PuiseuxSeries::zero(),
        }
    })
}

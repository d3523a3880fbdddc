//! Min-plus linear algebra over `Q ∪ {+∞}`.

use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::series_core::{Exponent, PuiseuxMatrix, Valuation};

/// A tropical scalar: a rational or `+∞`.
pub type TropicalValue = Valuation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TropicalError {
    #[error("dimension mismatch: {left:?} against {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("matrix is not square")]
    NotSquare,
    #[error("adjacency graph is not strongly connected")]
    NotIrreducible,
}

/// A matrix over the tropical semifield; entry `(i, j)` weighs the arc `j → i`.
#[derive(Clone, PartialEq, Eq)]
pub struct TropicalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<TropicalValue>,
}

/// A tropical diagonal matrix, stored by its finite diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalDiagonal(pub(crate) Vec<Exponent>);

impl TropicalDiagonal {
    pub fn new(diag: Vec<Exponent>) -> Self {
        TropicalDiagonal(diag)
    }

    pub fn entries(&self) -> &[Exponent] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Exponent> {
        self.0
    }
}

impl TropicalMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> TropicalValue) -> Self {
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        TropicalMatrix { rows, cols, entries }
    }

    /// Builds a matrix from rows; `None` entries are `+∞`.
    pub fn from_rows(rows: &[Vec<Option<Exponent>>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        Self::from_fn(n, m, |i, j| rows[i][j].map_or(Valuation::Infinite, Valuation::Finite))
    }

    /// Tropical identity: `0` on the diagonal, `+∞` elsewhere.
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Valuation::ZERO } else { Valuation::Infinite })
    }

    /// The valuation matrix of a Puiseux matrix.
    pub fn valuation_matrix(y: &PuiseuxMatrix) -> Self {
        Self::from_fn(y.nrows(), y.ncols(), |i, j| y.get(i, j).val())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> TropicalValue {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: TropicalValue) {
        self.entries[i * self.cols + j] = v;
    }

    /// `(−Γ) ⊙ C ⊙ Γ`: entry `(i, j)` becomes `C_ij − Γ_i + Γ_j`.
    pub fn scaled(&self, gamma: &TropicalDiagonal) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + (gamma.0[j] - gamma.0[i]))
    }

    /// `C_ij − λ` for finite entries.
    fn shifted(&self, lambda: Exponent) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + (-lambda))
    }

    /// Arcs `j → i` with finite weight, as `(src, dst, weight)`.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, Exponent)> + '_ {
        (0..self.rows)
            .flat_map(move |i| (0..self.cols).filter_map(move |j| self.get(i, j).finite().map(|w| (j, i, w))))
    }
}

impl fmt::Debug for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect();
        write!(f, "{rows:?}")
    }
}

/// Strongly connected components of a graph on `0..n`, each sorted, listed by smallest node.
pub(crate) fn strong_components(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    let nodes: Vec<NodeIndex> = (0..n).map(|_| g.add_node(())).collect();
    for (s, d) in arcs {
        g.add_edge(nodes[s], nodes[d], ());
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(NodeIndex::index).collect();
            v.sort_unstable();
            v
        })
        .collect();
    comps.sort_by_key(|c| c[0]);
    comps
}

/// `X_ij = min_k (C_ik + D_kj)`.
pub fn trop_product(c: &TropicalMatrix, d: &TropicalMatrix) -> Result<TropicalMatrix, TropicalError> {
    if c.cols != d.rows {
        return Err(TropicalError::DimensionMismatch { left: (c.rows, c.cols), right: (d.rows, d.cols) });
    }
    Ok(TropicalMatrix::from_fn(c.rows, d.cols, |i, j| {
        (0..c.cols).map(|k| c.get(i, k) + d.get(k, j)).min().unwrap_or(Valuation::Infinite)
    }))
}

/// Minimum cycle mean of the adjacency graph (`+∞` if acyclic), by Karp's algorithm per component.
pub fn trop_eigenvalue(c: &TropicalMatrix) -> Result<TropicalValue, TropicalError> {
    if c.rows != c.cols {
        return Err(TropicalError::NotSquare);
    }
    let comps = strong_components(c.rows, c.arcs().map(|(s, d, _)| (s, d)));
    Ok(comps.iter().map(|comp| karp(c, comp)).min().unwrap_or(Valuation::Infinite))
}

/// Karp's minimum cycle mean restricted to one strongly connected component.
fn karp(c: &TropicalMatrix, comp: &[usize]) -> TropicalValue {
    let m = comp.len();
    if m == 1 {
        return c.get(comp[0], comp[0]);
    }
    // walks[k][v]: least weight of a walk with k arcs from comp[0] to comp[v].
    let mut walks = vec![vec![Valuation::Infinite; m]; m + 1];
    walks[0][0] = Valuation::ZERO;
    for k in 1..=m {
        for v in 0..m {
            walks[k][v] = (0..m)
                .map(|u| walks[k - 1][u] + c.get(comp[v], comp[u]))
                .min()
                .unwrap_or(Valuation::Infinite);
        }
    }
    (0..m)
        .filter_map(|v| {
            let top = walks[m][v].finite()?;
            (0..m).filter_map(|k| walks[k][v].finite().map(|w| (top - w) / (m - k) as i64)).max()
        })
        .min()
        .map_or(Valuation::Infinite, Valuation::Finite)
}

/// Least weights of nonempty paths (`A⁺`); requires no negative cycle.
fn plus_closure(a: &TropicalMatrix) -> TropicalMatrix {
    let n = a.rows;
    let mut d = a.clone();
    for k in 0..n {
        for i in 0..n {
            let dik = d.get(i, k);
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let via = dik + d.get(k, j);
                if via < d.get(i, j) {
                    d.set(i, j, via);
                }
            }
        }
    }
    d
}

/// Kleene star `A* = Id ⊕ A⁺` of a matrix whose cycles are all nonnegative.
pub fn kleene_star(a: &TropicalMatrix) -> TropicalMatrix {
    let mut star = plus_closure(a);
    for i in 0..a.rows {
        star.set(i, i, star.get(i, i).min(Valuation::ZERO));
    }
    star
}

/// Nodes lying on a cycle of mean `Λ`, in increasing order.
pub fn critical_nodes(c: &TropicalMatrix) -> Result<Vec<usize>, TropicalError> {
    let Valuation::Finite(lambda) = trop_eigenvalue(c)? else {
        return Ok(Vec::new());
    };
    let plus = plus_closure(&c.shifted(lambda));
    Ok((0..c.rows).filter(|&i| plus.get(i, i) == Valuation::ZERO).collect())
}

/// Eigenvector `V` with `C ⊙ V = Λ + V`, taken from the Kleene star column at the
/// smallest critical node and normalized so that its least finite entry is `0`.
pub fn trop_eigenvector(
    c: &TropicalMatrix,
    lambda: TropicalValue,
) -> Result<Vec<TropicalValue>, TropicalError> {
    if c.rows != c.cols {
        return Err(TropicalError::NotSquare);
    }
    let Valuation::Finite(lam) = lambda else {
        return Err(TropicalError::NotIrreducible);
    };
    if c.rows == 1 {
        return Ok(vec![Valuation::ZERO]);
    }
    let plus = plus_closure(&c.shifted(lam));
    let critical =
        (0..c.rows).find(|&i| plus.get(i, i) == Valuation::ZERO).ok_or(TropicalError::NotIrreducible)?;
    let column: Vec<TropicalValue> = (0..c.rows)
        .map(|i| if i == critical { Valuation::ZERO.min(plus.get(i, i)) } else { plus.get(i, critical) })
        .collect();
    let floor = column.iter().filter_map(|v| v.finite()).min().unwrap_or(Exponent::ZERO);
    Ok(column.into_iter().map(|v| v + (-floor)).collect())
}

/// Diagonal `Γ` such that every row of `(−Γ) ⊙ C ⊙ Γ` has minimum `Λ`.
pub fn row_min_scaling(c: &TropicalMatrix) -> Result<TropicalDiagonal, TropicalError> {
    if c.rows != c.cols {
        return Err(TropicalError::NotSquare);
    }
    let comps = strong_components(c.rows, c.arcs().map(|(s, d, _)| (s, d)));
    if comps.len() != 1 {
        return Err(TropicalError::NotIrreducible);
    }
    let lambda = trop_eigenvalue(c)?;
    let v = trop_eigenvector(c, lambda)?;
    v.into_iter()
        .map(|x| x.finite().ok_or(TropicalError::NotIrreducible))
        .collect::<Result<Vec<_>, _>>()
        .map(TropicalDiagonal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: &[&[i64]]) -> TropicalMatrix {
        TropicalMatrix::from_fn(rows.len(), rows[0].len(), |i, j| {
            Valuation::Finite(Exponent::integer(rows[i][j]))
        })
    }

    fn fin(p: i64, q: i64) -> TropicalValue {
        Valuation::Finite(Exponent::new(p, q))
    }

    fn worked() -> TropicalMatrix {
        int_matrix(&[&[1, 1, 0], &[0, 4, 2], &[3, 3, 2]])
    }

    #[test]
    fn products() {
        let c = worked();
        assert_eq!(trop_product(&c, &TropicalMatrix::identity(3)).unwrap(), c);
        assert_eq!(trop_product(&c, &c).unwrap(), int_matrix(&[&[1, 2, 1], &[1, 1, 0], &[3, 4, 3]]));
        let inf = TropicalMatrix::from_fn(3, 3, |_, _| Valuation::Infinite);
        assert_eq!(trop_product(&inf, &c).unwrap(), inf);
        assert!(trop_product(&c, &TropicalMatrix::identity(2)).is_err());
    }

    #[test]
    fn eigenvalue_and_vector() {
        let c = worked();
        assert_eq!(trop_eigenvalue(&c).unwrap(), fin(1, 2));
        let v = trop_eigenvector(&c, fin(1, 2)).unwrap();
        assert_eq!(v, vec![fin(1, 2), fin(0, 1), fin(5, 2)]);
        assert_eq!(critical_nodes(&c).unwrap(), vec![0, 1]);
        let single = int_matrix(&[&[7]]);
        assert_eq!(trop_eigenvalue(&single).unwrap(), fin(7, 1));
        assert_eq!(trop_eigenvector(&single, fin(7, 1)).unwrap(), vec![Valuation::ZERO]);
    }

    #[test]
    fn scaling_meets_row_minimum() {
        let c = worked();
        let gamma = row_min_scaling(&c).unwrap();
        assert_eq!(gamma.entries(), &[Exponent::new(1, 2), Exponent::ZERO, Exponent::new(5, 2)]);
        let j = c.scaled(&gamma);
        for i in 0..3 {
            let row_min = (0..3).map(|k| j.get(i, k)).min().unwrap();
            assert_eq!(row_min, fin(1, 2));
        }
    }

    #[test]
    fn acyclic_has_infinite_eigenvalue() {
        let c = TropicalMatrix::from_rows(&[vec![None, None], vec![Some(Exponent::ONE), None]]);
        assert_eq!(trop_eigenvalue(&c).unwrap(), Valuation::Infinite);
        assert_eq!(row_min_scaling(&c), Err(TropicalError::NotIrreducible));
    }
}

//! Perron roots of nonnegative Puiseux matrices by block-wise diagonal conjugation.
//!
//! [`run`] looks for a conjugation `Z = t^{-r} Y t^{r}` on which the
//! eigen-quadruple recursion reaches the requested depth. It starts from the
//! flat-slanted form of the valuation graph and keeps Perron-Frobenius data
//! for a partition of the nodes into blocks. Each round flat-slants the block
//! graph and merges every group of blocks joined by its leading term: a group
//! with a dominant eigenvalue through the resolvent of that eigenvalue
//! ([`process_b`]), a group of equal eigenvalues by expanding its submatrix
//! ([`process_c`]).

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;

use crate::eigen_expand::{expand_perron, residual_valuation, EigenError, PerronExpansion};
use crate::series_core::{
    solve_linear, Exponent, PuiseuxMatrix, PuiseuxSeries, PuiseuxVector, SeriesError, Valuation,
};
use crate::wdigraph::{
    adjacency_graph, default_slant, flat_slanted_form_with, gently_slanted_form, is_e_forest,
    is_flat_slanted, GraphError, SimilarityTransform, WeightedDigraph,
};

/// Relative tolerance for comparing eigenvalue coefficients and signs.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Halvings of the default slant tried before giving up.
const SLANT_HALVINGS: usize = 32;

/// Deeper expansions tried when undoing the conjugation costs depth.
const CONCLUDE_ATTEMPTS: usize = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DriverError {
    #[error("matrix must be square and nonempty")]
    NotSquare,
    #[error("entry ({0}, {1}) has a negative leading coefficient")]
    NotNonnegative(usize, usize),
    #[error("valuation graph is not flat-slanted")]
    NotFlatSlanted,
    #[error("group {0:?} does not index blocks of the data")]
    UnknownGroup(Vec<usize>),
    #[error("a group needs at least two blocks")]
    SingleBlock,
    #[error("the group has no dominant eigenvalue")]
    Singular,
    #[error("the group has a dominant eigenvalue")]
    NotSingular,
    #[error("the group has positive depth {0}")]
    NotDepthZero(Exponent),
    #[error("{0}")]
    GenericnessViolation(SingularityReport),
    #[error("eigenvalues {0} and {1} differ by less than the tolerance allows to decide")]
    DegenerateDominance(String, String),
    #[error("resolvent entry at node {0} is negative")]
    NegativeResolvent(usize),
    #[error("expansion is not a nonnegative Perron pair")]
    NotPerron,
    #[error("residual valuation {found} does not exceed {required}")]
    Inaccurate { found: Valuation, required: Exponent },
    #[error("no expansion after {0} rounds")]
    RoundLimit(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A group of blocks whose Perron roots agree at positive depth.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularityReport {
    pub blocks: Vec<Vec<usize>>,
    pub lambda: PuiseuxSeries,
    pub depth: Exponent,
}

impl fmt::Display for SingularityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "genericness violated: blocks")?;
        for b in &self.blocks {
            write!(f, " {b:?}")?;
        }
        write!(f, " share the eigenvalue {} at depth {}", self.lambda, self.depth)
    }
}

/// Perron-Frobenius data of one block: the Perron root of `Z[nodes]` with
/// right and left vectors, indexed like `nodes`.
#[derive(Debug, Clone, PartialEq)]
pub struct PFBlock {
    pub(crate) nodes: Vec<usize>,
    pub(crate) lambda: PuiseuxSeries,
    pub(crate) right: PuiseuxVector,
    pub(crate) left: PuiseuxVector,
    pub(crate) depth: Exponent,
}

impl PFBlock {
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn lambda(&self) -> &PuiseuxSeries {
        &self.lambda
    }

    pub fn right(&self) -> &[PuiseuxSeries] {
        &self.right
    }

    pub fn left(&self) -> &[PuiseuxSeries] {
        &self.left
    }

    /// Depth above `v(Z)` to which the block data is an eigen-quadruple.
    pub fn depth(&self) -> Exponent {
        self.depth
    }

    /// Positive root and nonnegative vectors with a positive pairing.
    pub fn is_perron_frobenius(&self, tol: f64) -> bool {
        let pairing =
            self.right.iter().zip(&self.left).fold(PuiseuxSeries::zero(), |acc, (x, y)| &acc + &(x * y));
        self.lambda.leading_coeff().is_some_and(|c| c > 0.0)
            && leading_nonnegative(&self.right, tol)
            && leading_nonnegative(&self.left, tol)
            && pairing.leading_coeff().is_some_and(|c| c > 0.0)
    }
}

/// A conjugated matrix with Perron-Frobenius data on a partition of its nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PFData {
    pub(crate) matrix: PuiseuxMatrix,
    pub(crate) blocks: Vec<PFBlock>,
}

impl PFData {
    pub fn matrix(&self) -> &PuiseuxMatrix {
        &self.matrix
    }

    pub fn blocks(&self) -> &[PFBlock] {
        &self.blocks
    }

    /// Least block depth.
    pub fn depth(&self) -> Exponent {
        self.blocks.iter().map(|b| b.depth).min().unwrap_or(Exponent::ZERO)
    }

    /// Node sets of the blocks.
    pub fn partition(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.nodes.clone()).collect()
    }

    /// Arc `i → j` of weight `v(Z[β_j, β_i])` for every pair of distinct blocks.
    pub fn block_graph(&self) -> WeightedDigraph {
        let labels = self.blocks.iter().map(|b| format!("{:?}", b.nodes)).collect();
        let mut g = WeightedDigraph::with_labels(labels);
        for (i, src) in self.blocks.iter().enumerate() {
            for (j, dst) in self.blocks.iter().enumerate() {
                if i != j {
                    if let Valuation::Finite(w) = self.matrix.submatrix(&dst.nodes, &src.nodes).val() {
                        g.add_arc(i, j, w);
                    }
                }
            }
        }
        g
    }

    fn base_valuation(&self) -> Result<Exponent, DriverError> {
        self.matrix.val().finite().ok_or(DriverError::Eigen(EigenError::ZeroMatrix))
    }

    /// Indices of the blocks covering exactly `nodes`.
    fn blocks_covering(&self, nodes: &[usize]) -> Vec<usize> {
        (0..self.blocks.len()).filter(|&k| self.blocks[k].nodes.iter().all(|v| nodes.contains(v))).collect()
    }

    fn replace(&self, matrix: PuiseuxMatrix, group: &[usize], merged: Vec<PFBlock>) -> PFData {
        let mut blocks: Vec<PFBlock> =
            (0..self.blocks.len()).filter(|k| !group.contains(k)).map(|k| self.blocks[k].clone()).collect();
        blocks.extend(merged);
        blocks.sort_by_key(|b| b.nodes[0]);
        PFData { matrix, blocks }
    }
}

/// Which process produced a transcript step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Process {
    A,
    B,
    C,
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Process::A => "A",
            Process::B => "B",
            Process::C => "C",
        };
        f.write_str(tag)
    }
}

/// One process application with the node-level conjugation it applied.
#[derive(Debug, Clone, PartialEq)]
pub struct DriverStep {
    pub process: Process,
    pub transform: SimilarityTransform,
    pub partition_before: Vec<Vec<usize>>,
    pub partition_after: Vec<Vec<usize>>,
    pub depth_before: Exponent,
    pub depth_after: Exponent,
    /// Slant `δ` of a Process B step.
    pub delta: Option<Exponent>,
    pub graph_before: WeightedDigraph,
    pub graph_after: WeightedDigraph,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DriverTranscript {
    pub steps: Vec<DriverStep>,
    /// Block rounds run before the expansion succeeded.
    pub rounds: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Depth above `v(Y)` to which `λ` and the vectors are computed.
    pub target_depth: Exponent,
    /// Slant of the flat-slanted forms; halved from a default when `None`.
    pub slant: Option<Exponent>,
    /// Slant of the gently-slanted forms; halved from a default when `None`.
    pub delta: Option<Exponent>,
    pub tol: f64,
    /// Block rounds allowed; `N²` when `None`.
    pub max_rounds: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            target_depth: Exponent::integer(2),
            slant: None,
            delta: None,
            tol: DEFAULT_TOL,
            max_rounds: None,
        }
    }
}

/// The Perron root of `Y` with its vectors, in original and conjugated coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PerronResult {
    pub lambda: PuiseuxSeries,
    /// Right Perron vector of `Y`, scaled to valuation `0`.
    pub vector: PuiseuxVector,
    /// Left Perron vector of `Y`, scaled to valuation `0`.
    pub left: PuiseuxVector,
    /// Node shifts `r` with `Z = t^{-r} Y t^{r}`.
    pub shifts: Vec<Exponent>,
    pub conjugated: PuiseuxMatrix,
    /// Right Perron vector of the conjugated matrix.
    pub working_vector: PuiseuxVector,
    /// The collapsed PF-data: one block over all nodes of the conjugated matrix.
    pub pfdata: PFData,
    pub transcript: DriverTranscript,
}

/// Rejects non-square input and entries with a negative leading coefficient.
pub fn check_input(y: &PuiseuxMatrix) -> Result<(), DriverError> {
    if !y.is_square() || y.nrows() == 0 {
        return Err(DriverError::NotSquare);
    }
    for i in 0..y.nrows() {
        for j in 0..y.ncols() {
            if y.get(i, j).leading_coeff().is_some_and(|c| c < 0.0) {
                return Err(DriverError::NotNonnegative(i, j));
            }
        }
    }
    Ok(())
}

/// Perron-Frobenius data on the leading components of a flat-slanted `Z`.
///
/// A single node is an exact block and gets depth `horizon`; larger blocks
/// get depth `0`. Eigenvalues are expanded through `horizon` above `v(Z)`
/// when the expansion allows.
pub fn seed_pfdata(z: &PuiseuxMatrix, horizon: Exponent) -> Result<PFData, DriverError> {
    check_input(z)?;
    let g = adjacency_graph(z);
    if !is_flat_slanted(&g) {
        return Err(DriverError::NotFlatSlanted);
    }
    let v = z.val().finite().ok_or(DriverError::Eigen(EigenError::ZeroMatrix))?;
    let blocks = g
        .leading_term()
        .weak_components()
        .into_iter()
        .map(|nodes| {
            let (lambda, right, left) = block_expansion(z, &nodes, v, horizon, Exponent::ZERO)?;
            let depth = if nodes.len() == 1 { horizon } else { Exponent::ZERO };
            Ok(PFBlock { nodes, lambda, right, left, depth })
        })
        .collect::<Result<_, DriverError>>()?;
    Ok(PFData { matrix: z.clone(), blocks })
}

/// Perron pair of `Z[nodes]` through `horizon` above `v`, or through `floor` if that fails.
fn block_expansion(
    z: &PuiseuxMatrix,
    nodes: &[usize],
    v: Exponent,
    horizon: Exponent,
    floor: Exponent,
) -> Result<(PuiseuxSeries, PuiseuxVector, PuiseuxVector), DriverError> {
    let sub = z.submatrix(nodes, nodes);
    if nodes.len() == 1 {
        let lambda = sub.get(0, 0).truncated(Valuation::Finite(v + horizon.max(floor)));
        let one = vec![PuiseuxSeries::one()];
        return Ok((lambda, one.clone(), one));
    }
    let sub_v = sub.val().finite().ok_or(DriverError::Eigen(EigenError::ZeroMatrix))?;
    let relative = |d: Exponent| (v + d - sub_v).max(Exponent::ZERO);
    let exp = match expansion(&sub, relative(horizon.max(floor))) {
        Ok(e) => e,
        Err(_) => expansion(&sub, relative(floor))?,
    };
    Ok((exp.lambda, exp.right, exp.left))
}

fn expansion(z: &PuiseuxMatrix, depth: Exponent) -> Result<PerronExpansion, EigenError> {
    let q = z.ramification().lcm(&depth.denom());
    expand_perron(z, depth, Some(q))
}

/// Process A: flat-slants the block graph and conjugates each block by its shift.
///
/// Block data is unchanged since every block moves as a whole.
pub fn process_a(pf: &PFData, slant: Option<Exponent>) -> Result<(PFData, SimilarityTransform), DriverError> {
    if pf.blocks.len() < 2 {
        return Ok((pf.clone(), SimilarityTransform::identity()));
    }
    let (_, s) = flat_slanted_form_with(&pf.block_graph(), slant)?;
    let transform = pf
        .blocks
        .iter()
        .enumerate()
        .flat_map(|(k, b)| b.nodes.iter().map(move |&v| (v, k)))
        .fold(SimilarityTransform::identity(), |acc, (v, k)| acc.then(v, s.shift(k)));
    let matrix = conjugate(&pf.matrix, &transform)?;
    Ok((PFData { matrix, blocks: pf.blocks.clone() }, transform))
}

fn conjugate(z: &PuiseuxMatrix, s: &SimilarityTransform) -> Result<PuiseuxMatrix, DriverError> {
    if s.is_identity() {
        return Ok(z.clone());
    }
    Ok(z.diag_conjugate(&s.to_vec(z.nrows()))?)
}

/// Orders two eigenvalues by their first coefficient at an exponent up to
/// `upto` that differs by more than `tol` relative to the larger coefficients.
///
/// A difference between `tol/1000` and `tol` is ambiguous and reported.
pub fn compare_eigenvalues(
    a: &PuiseuxSeries,
    b: &PuiseuxSeries,
    upto: Exponent,
    tol: f64,
) -> Result<Ordering, DriverError> {
    let known = |e: Exponent| Valuation::Finite(e) < a.trunc() && Valuation::Finite(e) < b.trunc();
    let scale = a.terms().iter().chain(b.terms()).map(|&(_, c)| c.abs()).fold(1.0, f64::max);
    let mut exps: Vec<Exponent> =
        a.terms().iter().chain(b.terms()).map(|&(e, _)| e).filter(|&e| e <= upto && known(e)).collect();
    exps.sort();
    exps.dedup();
    for e in exps {
        let diff = a.coeff(e)? - b.coeff(e)?;
        if diff.abs() > tol * scale {
            return Ok(diff.partial_cmp(&0.0).unwrap_or(Ordering::Equal));
        }
        if diff.abs() > 1e-3 * tol * scale {
            return Err(DriverError::DegenerateDominance(a.to_string(), b.to_string()));
        }
    }
    Ok(Ordering::Equal)
}

/// Blocks of one group with the depth through which their data is compared.
struct Group<'a> {
    blocks: Vec<&'a PFBlock>,
    /// `v(Z)`.
    base: Exponent,
    /// Leading weight of the group's block graph.
    coupling: Exponent,
    /// Least block depth, capped by the coupling `s − v(Z)`.
    depth: Exponent,
}

impl<'a> Group<'a> {
    fn new(pf: &'a PFData, group: &[usize]) -> Result<Self, DriverError> {
        if group.iter().any(|&k| k >= pf.blocks.len()) {
            return Err(DriverError::UnknownGroup(group.to_vec()));
        }
        if group.len() < 2 {
            return Err(DriverError::SingleBlock);
        }
        let blocks: Vec<&PFBlock> = group.iter().map(|&k| &pf.blocks[k]).collect();
        let base = pf.base_valuation()?;
        let coupling = pf
            .block_graph()
            .induced(group)
            .smallest_weight()
            .finite()
            .ok_or(DriverError::Graph(GraphError::NotStronglyConnected))?;
        let least = blocks.iter().map(|b| b.depth).min().unwrap_or(Exponent::ZERO);
        Ok(Self { blocks, base, coupling, depth: least.min(coupling - base) })
    }

    /// Positions of the blocks with the largest eigenvalue through the group depth.
    fn dominant(&self, tol: f64) -> Result<Vec<usize>, DriverError> {
        let upto = self.base + self.depth;
        let mut best = vec![0];
        for k in 1..self.blocks.len() {
            match compare_eigenvalues(&self.blocks[k].lambda, &self.blocks[best[0]].lambda, upto, tol)? {
                Ordering::Greater => best = vec![k],
                Ordering::Equal => best.push(k),
                Ordering::Less => {}
            }
        }
        Ok(best)
    }

    fn is_singular(&self, tol: f64) -> Result<bool, DriverError> {
        Ok(self.dominant(tol)?.len() == self.blocks.len())
    }

    fn report(&self) -> SingularityReport {
        let lambda =
            self.blocks[0].lambda.terms().iter().copied().filter(|&(e, _)| e <= self.base + self.depth);
        SingularityReport {
            blocks: self.blocks.iter().map(|b| b.nodes.clone()).collect(),
            lambda: PuiseuxSeries::from_terms(lambda, Valuation::Infinite),
            depth: self.depth,
        }
    }
}

/// Flags a group of blocks whose eigenvalues agree through a positive depth.
pub fn check_genericness(pf: &PFData, group: &[usize], tol: f64) -> Result<(), DriverError> {
    let g = Group::new(pf, group)?;
    if g.depth.is_positive() && g.is_singular(tol)? {
        return Err(DriverError::GenericnessViolation(g.report()));
    }
    Ok(())
}

/// Process B: merges a group with a dominant eigenvalue.
///
/// The group's block graph is put into gently-slanted form with respect to
/// the dominant blocks. Each resulting tree becomes one block whose right
/// vector extends the root's by `(λ − Z[D])^{-1} Z[D, R] x_R` on the
/// subordinate nodes `D` and whose left vector extends the root's by zero.
/// Depth rises by the slant `δ`.
pub fn process_b(
    pf: &PFData,
    group: &[usize],
    delta: Option<Exponent>,
    horizon: Exponent,
    tol: f64,
) -> Result<(PFData, SimilarityTransform), DriverError> {
    let g = Group::new(pf, group)?;
    let (blocks, v) = (&g.blocks, g.base);
    let e = g.dominant(tol)?;
    if e.len() == group.len() {
        return Err(DriverError::Singular);
    }
    let h = pf.block_graph().induced(group);
    let (f, local, delta) = gentle(&h, &e, delta)?;
    let transform = group
        .iter()
        .enumerate()
        .flat_map(|(k, &b)| pf.blocks[b].nodes.iter().map(move |&v| (v, k)))
        .fold(SimilarityTransform::identity(), |acc, (v, k)| acc.then(v, local.shift(k)));
    let matrix = conjugate(&pf.matrix, &transform)?;
    let depth = g.depth + delta;

    let mut merged = Vec::new();
    for comp in f.leading_term().weak_components() {
        let root = *comp.iter().find(|k| e.contains(k)).ok_or(GraphError::BadE)?;
        let root_block = blocks[root];
        let subs: Vec<usize> = comp.iter().copied().filter(|&k| k != root).collect();
        if subs.is_empty() {
            merged.push(PFBlock { depth: root_block.depth.max(depth), ..root_block.clone() });
            continue;
        }
        let mut sub_nodes: Vec<usize> = subs.iter().flat_map(|&k| blocks[k].nodes.iter().copied()).collect();
        sub_nodes.sort_unstable();
        let order = v + horizon.max(depth);
        let coupling = matrix.submatrix(&sub_nodes, &root_block.nodes).mat_vec(&root_block.right)?;
        let rhs: PuiseuxVector = coupling.iter().map(|c| -c).collect();
        let shifted = matrix.submatrix(&sub_nodes, &sub_nodes).sub_scalar(&root_block.lambda);
        let p = solve_linear(&shifted, &rhs, order)?;
        if let Some(k) = p.iter().position(|s| s.leading_coeff().is_some_and(|c| c < -tol)) {
            return Err(DriverError::NegativeResolvent(sub_nodes[k]));
        }
        let mut nodes: Vec<usize> = root_block.nodes.iter().chain(&sub_nodes).copied().collect();
        nodes.sort_unstable();
        let pick = |root_vec: &[PuiseuxSeries], sub_vec: Option<&[PuiseuxSeries]>| -> PuiseuxVector {
            nodes
                .iter()
                .map(|n| match root_block.nodes.iter().position(|m| m == n) {
                    Some(k) => root_vec[k].clone(),
                    None => sub_vec.map_or_else(PuiseuxSeries::zero, |s| {
                        s[sub_nodes.iter().position(|m| m == n).unwrap()].clone()
                    }),
                })
                .collect()
        };
        let right = pick(&root_block.right, Some(&p));
        let left = pick(&root_block.left, None);
        let lambda = match block_expansion(&matrix, &nodes, v, horizon, depth) {
            Ok((l, _, _)) => l,
            Err(_) => root_block.lambda.truncated(Valuation::Finite(v + depth)),
        };
        merged.push(PFBlock { nodes, lambda, right, left, depth });
    }
    Ok((pf.replace(matrix, group, merged), transform))
}

/// Gently-slanted form of `h` for the dominant set `e`, with the slant used.
///
/// A leading term that is already an `e`-forest is kept as it is.
fn gentle(
    h: &WeightedDigraph,
    e: &[usize],
    delta: Option<Exponent>,
) -> Result<(WeightedDigraph, SimilarityTransform, Exponent), DriverError> {
    if is_e_forest(h, e) {
        let d = delta.unwrap_or_else(|| default_slant(h));
        return Ok((h.clone(), SimilarityTransform::identity(), d));
    }
    if let Some(d) = delta {
        let (f, s) = gently_slanted_form(h, e, d)?;
        return Ok((f, s, d));
    }
    let mut d = default_slant(h);
    for _ in 0..SLANT_HALVINGS {
        match gently_slanted_form(h, e, d) {
            Ok((f, s)) => return Ok((f, s, d)),
            Err(GraphError::DeltaTooLarge(_)) => d = d / 2,
            Err(err) => return Err(err.into()),
        }
    }
    Err(GraphError::DeltaTooLarge(d).into())
}

/// Process C: merges a group of equal eigenvalues at depth `0` by expanding
/// the Perron pair of its submatrix through the group's leading weight.
pub fn process_c(pf: &PFData, group: &[usize], horizon: Exponent, tol: f64) -> Result<PFData, DriverError> {
    let g = Group::new(pf, group)?;
    if !g.is_singular(tol)? {
        return Err(DriverError::NotSingular);
    }
    if g.depth.is_positive() {
        return Err(DriverError::NotDepthZero(g.depth));
    }
    let v = g.base;
    let mut nodes: Vec<usize> = g.blocks.iter().flat_map(|b| b.nodes.iter().copied()).collect();
    nodes.sort_unstable();
    let depth = g.coupling - v;
    let (lambda, right, left) = block_expansion(&pf.matrix, &nodes, v, horizon, depth)?;
    let block = PFBlock { nodes, lambda, right, left, depth };
    if !block.is_perron_frobenius(tol) {
        return Err(DriverError::NotPerron);
    }
    Ok(pf.replace(pf.matrix.clone(), group, vec![block]))
}

/// Leading coefficients are nonnegative up to `tol` of the largest one.
fn leading_nonnegative(v: &[PuiseuxSeries], tol: f64) -> bool {
    let scale = v.iter().filter_map(PuiseuxSeries::leading_coeff).map(f64::abs).fold(0.0, f64::max);
    v.iter().filter_map(PuiseuxSeries::leading_coeff).all(|c| c >= -tol * scale)
        && v.iter().any(|s| s.leading_coeff().is_some_and(|c| c > 0.0))
}

/// Expands the Perron pair of `z` through `target` and checks it.
fn finish(z: &PuiseuxMatrix, target: Exponent, tol: f64) -> Result<PerronExpansion, DriverError> {
    let exp = expansion(z, target)?;
    if !exp.lambda.leading_coeff().is_some_and(|c| c > 0.0)
        || !leading_nonnegative(&exp.right, tol)
        || !leading_nonnegative(&exp.left, tol)
    {
        return Err(DriverError::NotPerron);
    }
    let required = z.val().finite().unwrap_or(Exponent::ZERO) + target;
    let found = residual_valuation(z, &exp.lambda, &exp.right);
    if found <= Valuation::Finite(required) {
        return Err(DriverError::Inaccurate { found, required });
    }
    Ok(exp)
}

/// Perron root and vectors of a nonnegative Puiseux matrix.
///
/// Tries the expansion on `Y` itself, after the initial flat-slanted
/// conjugation and after every block balancing and merge, and stops at the
/// first one that reaches the target depth with a nonnegative pair.
pub fn run(y: &PuiseuxMatrix, opts: &RunOptions) -> Result<PerronResult, DriverError> {
    check_input(y)?;
    let n = y.nrows();
    let target = opts.target_depth;
    if let Ok(exp) = finish(y, target, opts.tol) {
        return conclude(y, y.clone(), vec![Exponent::ZERO; n], exp, DriverTranscript::default(), opts);
    }
    let g = adjacency_graph(y);
    let (_, s0) = flat_slanted_form_with(&g, opts.slant)?;
    let z = conjugate(y, &s0)?;
    let mut pf = seed_pfdata(&z, target)?;
    let mut shifts = s0.to_vec(n);
    let mut transcript = DriverTranscript::default();
    transcript.steps.push(DriverStep {
        process: Process::A,
        transform: s0,
        partition_before: (0..n).map(|k| vec![k]).collect(),
        partition_after: pf.partition(),
        depth_before: Exponent::ZERO,
        depth_after: Exponent::ZERO,
        delta: None,
        graph_before: g,
        graph_after: adjacency_graph(&z),
    });
    let max_rounds = opts.max_rounds.unwrap_or(n * n);
    loop {
        let last = match finish(&pf.matrix, target, opts.tol) {
            Ok(exp) => return conclude(y, pf.matrix, shifts, exp, transcript, opts),
            Err(err) => err,
        };
        if pf.blocks.len() < 2 {
            return Err(last);
        }
        if transcript.rounds == max_rounds {
            return Err(DriverError::RoundLimit(max_rounds));
        }
        transcript.rounds += 1;
        let (balanced, moved) = balance(pf, opts, &mut shifts, &mut transcript)?;
        pf = balanced;
        if moved {
            if let Ok(exp) = finish(&pf.matrix, target, opts.tol) {
                return conclude(y, pf.matrix, shifts, exp, transcript, opts);
            }
        }
        pf = merge(pf, opts, &mut shifts, &mut transcript)?;
    }
}

/// Process A on the block graph; reports whether any block moved.
fn balance(
    pf: PFData,
    opts: &RunOptions,
    shifts: &mut [Exponent],
    transcript: &mut DriverTranscript,
) -> Result<(PFData, bool), DriverError> {
    let graph_before = pf.block_graph();
    let (pf, transform) = process_a(&pf, opts.slant)?;
    let moved = !transform.is_identity();
    if moved {
        accumulate(shifts, &transform);
        transcript.steps.push(DriverStep {
            process: Process::A,
            transform,
            partition_before: pf.partition(),
            partition_after: pf.partition(),
            depth_before: pf.depth(),
            depth_after: pf.depth(),
            delta: None,
            graph_before,
            graph_after: pf.block_graph(),
        });
    }
    Ok((pf, moved))
}

/// Process B or C on every group of blocks joined by the leading term of the block graph.
fn merge(
    mut pf: PFData,
    opts: &RunOptions,
    shifts: &mut [Exponent],
    transcript: &mut DriverTranscript,
) -> Result<PFData, DriverError> {
    let graph = pf.block_graph();
    let groups: Vec<Vec<usize>> = graph
        .leading_term()
        .weak_components()
        .into_iter()
        .filter(|c| c.len() >= 2)
        .map(|c| {
            let mut nodes: Vec<usize> = c.iter().flat_map(|&k| pf.blocks[k].nodes.iter().copied()).collect();
            nodes.sort_unstable();
            nodes
        })
        .collect();
    for nodes in groups {
        let group = pf.blocks_covering(&nodes);
        check_genericness(&pf, &group, opts.tol)?;
        let g = Group::new(&pf, &group)?;
        let depth_before = g.depth;
        let partition_before = pf.partition();
        let graph_before = pf.block_graph();
        let (next, process, transform) = if g.is_singular(opts.tol)? {
            (
                process_c(&pf, &group, opts.target_depth, opts.tol)?,
                Process::C,
                SimilarityTransform::identity(),
            )
        } else {
            let (next, t) = process_b(&pf, &group, opts.delta, opts.target_depth, opts.tol)?;
            (next, Process::B, t)
        };
        accumulate(shifts, &transform);
        let covering = next.blocks_covering(&nodes);
        let depth_after = covering.iter().map(|&k| next.blocks[k].depth).min().unwrap_or(depth_before);
        transcript.steps.push(DriverStep {
            process,
            transform,
            partition_before,
            partition_after: next.partition(),
            depth_before,
            depth_after,
            delta: (process == Process::B).then(|| depth_after - depth_before),
            graph_before,
            graph_after: next.block_graph(),
        });
        pf = next;
    }
    Ok(pf)
}

fn accumulate(shifts: &mut [Exponent], s: &SimilarityTransform) {
    for (k, v) in s.iter() {
        shifts[k] = shifts[k] + v;
    }
}

/// Undoes the conjugation and checks the residual against `Y` itself,
/// expanding `Z` further while the shifts eat into the depth.
fn conclude(
    y: &PuiseuxMatrix,
    z: PuiseuxMatrix,
    shifts: Vec<Exponent>,
    mut exp: PerronExpansion,
    transcript: DriverTranscript,
    opts: &RunOptions,
) -> Result<PerronResult, DriverError> {
    let required = y.val().finite().unwrap_or(Exponent::ZERO) + opts.target_depth;
    let mut depth = opts.target_depth;
    for _ in 0..CONCLUDE_ATTEMPTS {
        let result = assemble(z.clone(), depth, shifts.clone(), exp, transcript.clone());
        let found = residual_valuation(y, &result.lambda, &result.vector);
        let Valuation::Finite(reached) = found else {
            return Ok(result);
        };
        if reached > required {
            return Ok(result);
        }
        let q = result.conjugated.ramification().lcm(&depth.denom());
        depth = depth + (required - reached) + Exponent::new(1, q);
        exp = finish(&z, depth, opts.tol)?;
    }
    let result = assemble(z, depth, shifts, exp, transcript);
    let found = residual_valuation(y, &result.lambda, &result.vector);
    if found > Valuation::Finite(required) {
        Ok(result)
    } else {
        Err(DriverError::Inaccurate { found, required })
    }
}

/// The result in original coordinates; its PF-data is the single block
/// spanned by the expansion.
fn assemble(
    z: PuiseuxMatrix,
    depth: Exponent,
    shifts: Vec<Exponent>,
    exp: PerronExpansion,
    transcript: DriverTranscript,
) -> PerronResult {
    let restore = |x: &[PuiseuxSeries], sign: i64| -> PuiseuxVector {
        let moved: Vec<PuiseuxSeries> = x.iter().zip(&shifts).map(|(s, &r)| s.shift(r * sign)).collect();
        let low = moved.iter().filter_map(|s| s.val().finite()).min().unwrap_or(Exponent::ZERO);
        moved.iter().map(|s| s.shift(-low)).collect()
    };
    let block = PFBlock {
        nodes: (0..z.nrows()).collect(),
        lambda: exp.lambda.clone(),
        right: exp.right.clone(),
        left: exp.left.clone(),
        depth,
    };
    PerronResult {
        lambda: exp.lambda,
        vector: restore(&exp.right, 1),
        left: restore(&exp.left, -1),
        shifts,
        conjugated: z.clone(),
        working_vector: exp.right,
        pfdata: PFData { matrix: z, blocks: vec![block] },
        transcript,
    }
}

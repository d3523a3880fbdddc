//! Weighted digraphs with exact rational weights and their slanted canonical forms.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;

use crate::series_core::{Exponent, PuiseuxMatrix, Valuation};
use crate::tropical::{row_min_scaling, strong_components, TropicalError, TropicalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("node {0} does not exist")]
    UnknownNode(usize),
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("graph is not flat-slanted")]
    NotFlatSlanted,
    #[error("node subset must be proper and meet every leading component")]
    BadE,
    #[error("slant {0} is too large for the graph")]
    DeltaTooLarge(Exponent),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
}

/// A digraph on nodes `0..n` with at most one arc per ordered pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDigraph {
    labels: Vec<String>,
    arcs: BTreeMap<(usize, usize), Exponent>,
}

impl WeightedDigraph {
    /// An arcless graph on `n` nodes labelled `1..=n`.
    pub fn new(n: usize) -> Self {
        Self::with_labels((1..=n).map(|i| i.to_string()).collect())
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        WeightedDigraph { labels, arcs: BTreeMap::new() }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Inserts `src → dst`, keeping the lighter weight if the arc exists.
    pub fn add_arc(&mut self, src: usize, dst: usize, weight: Exponent) {
        self.arcs.entry((src, dst)).and_modify(|w| *w = (*w).min(weight)).or_insert(weight);
    }

    pub fn arc(&self, src: usize, dst: usize) -> Option<Exponent> {
        self.arcs.get(&(src, dst)).copied()
    }

    /// Arcs as `(src, dst, weight)` in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, Exponent)> + '_ {
        self.arcs.iter().map(|(&(s, d), &w)| (s, d, w))
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// `s(G)`: the least arc weight, `+∞` if arcless.
    pub fn smallest_weight(&self) -> Valuation {
        self.arcs.values().copied().min().map_or(Valuation::Infinite, Valuation::Finite)
    }

    /// Arcs of weight `s(G)`.
    pub fn leading_term(&self) -> WeightedDigraph {
        truncate_graph(self, self.smallest_weight())
    }

    /// Graph of a tropical matrix: entry `(i, j)` is the arc `j → i`.
    pub fn from_tropical(c: &TropicalMatrix) -> Self {
        let mut g = WeightedDigraph::new(c.nrows());
        for (s, d, w) in c.arcs() {
            g.add_arc(s, d, w);
        }
        g
    }

    pub fn to_tropical(&self) -> TropicalMatrix {
        TropicalMatrix::from_fn(self.node_count(), self.node_count(), |i, j| {
            self.arc(j, i).map_or(Valuation::Infinite, Valuation::Finite)
        })
    }

    /// Subgraph induced on `nodes`, renumbered in the given order.
    pub fn induced(&self, nodes: &[usize]) -> WeightedDigraph {
        let position: BTreeMap<usize, usize> = nodes.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut g = WeightedDigraph::with_labels(nodes.iter().map(|&v| self.labels[v].clone()).collect());
        for (s, d, w) in self.arcs() {
            if let (Some(&a), Some(&b)) = (position.get(&s), position.get(&d)) {
                g.add_arc(a, b, w);
            }
        }
        g
    }

    /// Strongly connected components, each sorted, listed by smallest node.
    pub fn strong_components(&self) -> Vec<Vec<usize>> {
        strong_components(self.node_count(), self.arcs().map(|(s, d, _)| (s, d)))
    }

    /// Weakly connected components, each sorted, listed by smallest node.
    pub fn weak_components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut uf = UnionFind::new(n);
        for (s, d, _) in self.arcs() {
            uf.union(s, d);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        let mut comps: Vec<Vec<usize>> = groups.into_values().collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.strong_components().len() <= 1
    }

    /// DOT text with lines `src -> dst [weight="p/q"]`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n");
        for label in &self.labels {
            let _ = writeln!(out, "  \"{label}\";");
        }
        for (s, d, w) in self.arcs() {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [weight=\"{w}\"];", self.labels[s], self.labels[d]);
        }
        out.push_str("}\n");
        out
    }
}

/// A map of nodes onto the nodes of a quotient graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMorphism {
    map: Vec<usize>,
    target_size: usize,
}

impl GraphMorphism {
    pub fn identity(n: usize) -> Self {
        GraphMorphism { map: (0..n).collect(), target_size: n }
    }

    /// Projection sending every node of `classes[k]` to `k`.
    pub fn from_classes(n: usize, classes: &[Vec<usize>]) -> Self {
        let mut map = vec![0; n];
        for (k, class) in classes.iter().enumerate() {
            for &v in class {
                map[v] = k;
            }
        }
        GraphMorphism { map, target_size: classes.len() }
    }

    pub fn apply(&self, node: usize) -> usize {
        self.map[node]
    }

    pub fn source_size(&self) -> usize {
        self.map.len()
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    /// Fibres of the map, indexed by target node.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.target_size];
        for (v, &k) in self.map.iter().enumerate() {
            out[k].push(v);
        }
        out
    }

    /// Weight condition: each arc across fibres maps onto an arc no heavier than it.
    pub fn is_homomorphism(&self, source: &WeightedDigraph, target: &WeightedDigraph) -> bool {
        source.arcs().all(|(s, d, w)| {
            let (a, b) = (self.apply(s), self.apply(d));
            a == b || target.arc(a, b).is_some_and(|tw| tw <= w)
        })
    }
}

/// A composition of translations `S_k(ν)`, canonicalized by node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SimilarityTransform {
    shifts: BTreeMap<usize, Exponent>,
}

impl SimilarityTransform {
    pub fn identity() -> Self {
        Self::default()
    }

    /// The single translation `S_k(ν)`.
    pub fn single(node: usize, shift: Exponent) -> Self {
        Self::identity().then(node, shift)
    }

    /// Translation by `shifts[k]` at node `k`.
    pub fn from_shifts(shifts: &[Exponent]) -> Self {
        shifts.iter().enumerate().fold(Self::identity(), |s, (k, &v)| s.then(k, v))
    }

    /// Composes with `S_k(ν)`.
    pub fn then(mut self, node: usize, shift: Exponent) -> Self {
        let total = self.shift(node) + shift;
        if total.is_zero() {
            self.shifts.remove(&node);
        } else {
            self.shifts.insert(node, total);
        }
        self
    }

    pub fn compose(&self, other: &SimilarityTransform) -> Self {
        other.iter().fold(self.clone(), |s, (k, v)| s.then(k, v))
    }

    pub fn shift(&self, node: usize) -> Exponent {
        self.shifts.get(&node).copied().unwrap_or(Exponent::ZERO)
    }

    /// Nonzero shifts in node order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Exponent)> + '_ {
        self.shifts.iter().map(|(&k, &v)| (k, v))
    }

    /// Shift vector on `0..n`.
    pub fn to_vec(&self, n: usize) -> Vec<Exponent> {
        (0..n).map(|k| self.shift(k)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.shifts.is_empty()
    }

    fn check_nodes(&self, n: usize) -> Result<(), GraphError> {
        match self.shifts.keys().find(|&&k| k >= n) {
            Some(&k) => Err(GraphError::UnknownNode(k)),
            None => Ok(()),
        }
    }
}

/// `G(Y)`: arc `j → i` weighted by the valuation of `Y_ij` when finite.
pub fn adjacency_graph(y: &PuiseuxMatrix) -> WeightedDigraph {
    WeightedDigraph::from_tropical(&TropicalMatrix::valuation_matrix(y))
}

/// Drops arcs heavier than `mu`.
pub fn truncate_graph(g: &WeightedDigraph, mu: Valuation) -> WeightedDigraph {
    WeightedDigraph {
        labels: g.labels.clone(),
        arcs: g.arcs.iter().filter(|(_, &w)| Valuation::Finite(w) <= mu).map(|(&k, &w)| (k, w)).collect(),
    }
}

/// Quotient of `g` by the classes, with min weights on arcs across classes.
pub fn quotient(g: &WeightedDigraph, classes: &[Vec<usize>]) -> (WeightedDigraph, GraphMorphism) {
    let f = GraphMorphism::from_classes(g.node_count(), classes);
    let labels = classes
        .iter()
        .map(|c| match c.as_slice() {
            [v] => g.labels[*v].clone(),
            _ => format!("{{{}}}", c.iter().map(|&v| g.labels[v].as_str()).collect::<Vec<_>>().join(",")),
        })
        .collect();
    let mut q = WeightedDigraph::with_labels(labels);
    for (s, d, w) in g.arcs() {
        let (a, b) = (f.apply(s), f.apply(d));
        if a != b {
            q.add_arc(a, b, w);
        }
    }
    (q, f)
}

/// Quotient by connected components of the leading term.
pub fn condense(g: &WeightedDigraph) -> (WeightedDigraph, GraphMorphism) {
    quotient(g, &g.leading_term().weak_components())
}

/// Quotient by strongly connected components of the leading term.
pub fn strong_condense(g: &WeightedDigraph) -> (WeightedDigraph, GraphMorphism) {
    quotient(g, &g.leading_term().strong_components())
}

/// `S·G`: arcs leaving `k` gain `ν`, arcs entering `k` lose `ν`.
pub fn similarity_translate(
    g: &WeightedDigraph,
    s: &SimilarityTransform,
) -> Result<WeightedDigraph, GraphError> {
    s.check_nodes(g.node_count())?;
    Ok(WeightedDigraph {
        labels: g.labels.clone(),
        arcs: g.arcs().map(|(a, b, w)| ((a, b), w + s.shift(a) - s.shift(b))).collect(),
    })
}

/// `f*S`: each node inherits the shift of its image.
pub fn pull_back(s: &SimilarityTransform, f: &GraphMorphism) -> Result<SimilarityTransform, GraphError> {
    s.check_nodes(f.target_size())?;
    Ok((0..f.source_size()).fold(SimilarityTransform::identity(), |acc, v| acc.then(v, s.shift(f.apply(v)))))
}

/// Every connected component of the leading term is strongly connected.
pub fn is_flat_slanted(g: &WeightedDigraph) -> bool {
    let lead = g.leading_term();
    lead.weak_components().len() == lead.strong_components().len()
}

/// The leading term is a forest of arborescences, each rooted at its unique `E`-node.
pub fn is_e_forest(g: &WeightedDigraph, e: &[usize]) -> bool {
    let lead = g.leading_term();
    let e: BTreeSet<usize> = e.iter().copied().collect();
    let mut indegree = vec![0usize; g.node_count()];
    for (_, d, _) in lead.arcs() {
        indegree[d] += 1;
    }
    lead.weak_components().iter().all(|comp| {
        let roots: Vec<usize> = comp.iter().copied().filter(|v| e.contains(v)).collect();
        roots.len() == 1 && comp.iter().all(|&v| indegree[v] == usize::from(v != roots[0]))
    })
}

/// Default slant: half of `(w₂ − w₁) / (2N)` over the two lightest distinct weights.
pub fn default_slant(g: &WeightedDigraph) -> Exponent {
    let weights: BTreeSet<Exponent> = g.arcs().map(|(_, _, w)| w).collect();
    let mut it = weights.iter().copied();
    let gap = match (it.next(), it.next()) {
        (Some(w1), Some(w2)) => w2 - w1,
        (Some(w1), None) if w1.is_positive() => w1,
        _ => Exponent::ONE,
    };
    gap / (4 * g.node_count().max(1) as i64)
}

/// Flat-slanted form with the default slant.
pub fn flat_slanted_form(g: &WeightedDigraph) -> Result<(WeightedDigraph, SimilarityTransform), GraphError> {
    flat_slanted_form_with(g, None)
}

/// Row-min scaling followed by separating the leading-term components.
///
/// With `epsilon = None` the default slant is halved until the result
/// passes the flat-slanted check; an explicit value is used as given.
pub fn flat_slanted_form_with(
    g: &WeightedDigraph,
    epsilon: Option<Exponent>,
) -> Result<(WeightedDigraph, SimilarityTransform), GraphError> {
    if !g.is_strongly_connected() {
        return Err(GraphError::NotStronglyConnected);
    }
    if is_flat_slanted(g) {
        return Ok((g.clone(), SimilarityTransform::identity()));
    }
    let scaling = SimilarityTransform::from_shifts(row_min_scaling(&g.to_tropical())?.entries());
    let j = similarity_translate(g, &scaling)?;
    if is_flat_slanted(&j) {
        return Ok((j, scaling));
    }
    let rank = reverse_topological_rank(&j.leading_term());
    let mut eps = epsilon.unwrap_or_else(|| default_slant(&j));
    for _ in 0..64 {
        let separation = SimilarityTransform::from_shifts(&rank.iter().map(|&r| eps * r).collect::<Vec<_>>());
        let h = similarity_translate(&j, &separation)?;
        if is_flat_slanted(&h) && h.smallest_weight() == j.smallest_weight() {
            return Ok((h, scaling.compose(&separation)));
        }
        if epsilon.is_some() {
            return Err(GraphError::DeltaTooLarge(eps));
        }
        eps = eps / 2;
    }
    Err(GraphError::DeltaTooLarge(eps))
}

/// Rank of each node's strong component in reverse topological order of the
/// component DAG: sinks get `0`, ties broken by smallest node label.
fn reverse_topological_rank(lead: &WeightedDigraph) -> Vec<i64> {
    let comps = lead.strong_components();
    let (dag, f) = quotient(lead, &comps);
    let m = comps.len();
    let mut outdeg = vec![0usize; m];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (s, d, _) in dag.arcs() {
        outdeg[s] += 1;
        preds[d].push(s);
    }
    let mut ready: BTreeSet<usize> = (0..m).filter(|&c| outdeg[c] == 0).collect();
    let mut rank = vec![0i64; m];
    let mut next = 0;
    while let Some(c) = ready.pop_first() {
        rank[c] = next;
        next += 1;
        for &p in &preds[c] {
            outdeg[p] -= 1;
            if outdeg[p] == 0 {
                ready.insert(p);
            }
        }
    }
    (0..lead.node_count()).map(|v| rank[f.apply(v)]).collect()
}

/// `E`-gently-slanted form of a flat-slanted graph with slant `delta`.
///
/// In each leading component not contained in `E`, node `j` is shifted by
/// `d(j)·δ`, where `d(j)` is the least leading-path length from the `k`-th
/// `E`-node of the component plus `(k−1)/e`.
pub fn gently_slanted_form(
    h: &WeightedDigraph,
    e: &[usize],
    delta: Exponent,
) -> Result<(WeightedDigraph, SimilarityTransform), GraphError> {
    let n = h.node_count();
    if let Some(&bad) = e.iter().find(|&&v| v >= n) {
        return Err(GraphError::UnknownNode(bad));
    }
    let e_set: BTreeSet<usize> = e.iter().copied().collect();
    if e_set.is_empty() || e_set.len() == n {
        return Err(GraphError::BadE);
    }
    if !is_flat_slanted(h) {
        return Err(GraphError::NotFlatSlanted);
    }
    if !delta.is_positive() {
        return Err(GraphError::DeltaTooLarge(delta));
    }
    let lead = h.leading_term();
    let mut transform = SimilarityTransform::identity();
    for comp in lead.strong_components() {
        let starts: Vec<usize> = comp.iter().copied().filter(|v| e_set.contains(v)).collect();
        if starts.is_empty() {
            return Err(GraphError::BadE);
        }
        if starts.len() == comp.len() {
            continue;
        }
        let depth = layer_function(&lead, &starts);
        for &v in &comp {
            transform = transform.then(v, depth[&v] * delta);
        }
    }
    let f = similarity_translate(h, &transform)?;
    let expected = h.smallest_weight() + (-delta);
    if is_e_forest(&f, e) && f.smallest_weight() == expected {
        Ok((f, transform))
    } else {
        Err(GraphError::DeltaTooLarge(delta))
    }
}

/// `d(j) = min_k [dist(i_k, j) + (k−1)/e]` over leading paths from the starts.
fn layer_function(lead: &WeightedDigraph, starts: &[usize]) -> BTreeMap<usize, Exponent> {
    let e = starts.len() as i64;
    let mut best: BTreeMap<usize, Exponent> = BTreeMap::new();
    for (k, &start) in starts.iter().enumerate() {
        let offset = Exponent::new(k as i64, e);
        let mut dist: BTreeMap<usize, i64> = BTreeMap::from([(start, 0)]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for (s, d, _) in lead.arcs() {
                if s == u && !dist.contains_key(&d) {
                    dist.insert(d, dist[&u] + 1);
                    queue.push_back(d);
                }
            }
        }
        for (v, steps) in dist {
            let value = Exponent::integer(steps) + offset;
            best.entry(v).and_modify(|b| *b = (*b).min(value)).or_insert(value);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Exponent {
        Exponent::new(p, d)
    }

    /// Valuation graph of the worked 3x3 tropical example (1-based arcs in comments).
    fn worked() -> WeightedDigraph {
        let c = TropicalMatrix::from_rows(&[
            vec![Some(q(1, 1)), Some(q(1, 1)), Some(q(0, 1))],
            vec![Some(q(0, 1)), Some(q(4, 1)), Some(q(2, 1))],
            vec![Some(q(3, 1)), Some(q(3, 1)), Some(q(2, 1))],
        ]);
        WeightedDigraph::from_tropical(&c)
    }

    fn flat() -> WeightedDigraph {
        flat_slanted_form_with(&worked(), Some(q(1, 4))).unwrap().0
    }

    #[test]
    fn translation_preserves_two_cycles() {
        let g = worked();
        let s = SimilarityTransform::from_shifts(&[q(1, 2), q(0, 1), q(5, 2)]);
        let j = similarity_translate(&g, &s).unwrap();
        assert_eq!(j.arc(1, 0), Some(q(1, 2)));
        assert_eq!(j.arc(0, 1), Some(q(1, 2)));
        assert_eq!(j.arc(1, 2), Some(q(1, 2)));
        assert_eq!(j.arc(0, 2), Some(q(1, 1)));
        assert_eq!(j.arc(2, 0), Some(q(2, 1)));
        assert_eq!(j.arc(2, 1), Some(q(9, 2)));
        assert_eq!(j.arc(0, 0), g.arc(0, 0));
        assert!(matches!(
            similarity_translate(&g, &SimilarityTransform::single(7, q(1, 1))),
            Err(GraphError::UnknownNode(7))
        ));
    }

    #[test]
    fn flat_slanted_worked_example() {
        let h = flat();
        let expected = [
            ((0, 0), q(1, 1)),
            ((1, 1), q(4, 1)),
            ((2, 2), q(2, 1)),
            ((1, 0), q(1, 2)),
            ((0, 1), q(1, 2)),
            ((0, 2), q(5, 4)),
            ((1, 2), q(3, 4)),
            ((2, 0), q(7, 4)),
            ((2, 1), q(17, 4)),
        ];
        for ((s, d), w) in expected {
            assert_eq!(h.arc(s, d), Some(w), "arc {s}->{d}");
        }
        assert!(is_flat_slanted(&h));
        assert!(!is_flat_slanted(&worked()));
        let lead = h.leading_term().strong_components();
        assert_eq!(lead, vec![vec![0, 1], vec![2]]);
        let (c, f) = condense(&h);
        assert_eq!(c.node_count(), 2);
        assert_eq!(f.classes(), vec![vec![0, 1], vec![2]]);
        assert_eq!(c.arc(0, 1), Some(q(3, 4)));
        assert_eq!(c.arc(1, 0), Some(q(7, 4)));
        assert!(f.is_homomorphism(&h, &c));
    }

    #[test]
    fn default_slant_is_flat() {
        let (h, s) = flat_slanted_form(&worked()).unwrap();
        assert!(is_flat_slanted(&h));
        assert_eq!(similarity_translate(&worked(), &s).unwrap(), h);
        let (same, id) = flat_slanted_form(&h).unwrap();
        assert_eq!(same, h);
        assert!(id.is_identity());
    }

    #[test]
    fn gently_slanted_cases() {
        let mut h = flat();
        for v in 0..3 {
            h.arcs.remove(&(v, v));
        }
        let eps = q(1, 16);
        let (f, s) = gently_slanted_form(&h, &[0, 2], eps).unwrap();
        assert_eq!(s, SimilarityTransform::single(1, eps));
        assert_eq!(f.arc(0, 1), Some(q(1, 2) - eps));
        assert_eq!(f.arc(1, 0), Some(q(1, 2) + eps));
        assert_eq!(f.arc(1, 2), Some(q(3, 4) + eps));
        assert_eq!(f.arc(2, 1), Some(q(17, 4) - eps));
        assert!(is_e_forest(&f, &[0, 2]));
        let (f2, s2) = gently_slanted_form(&h, &[1, 2], eps).unwrap();
        assert_eq!(s2, SimilarityTransform::single(0, eps));
        assert_eq!(f2.arc(0, 2), Some(q(5, 4) + eps));
        assert_eq!(f2.arc(2, 0), Some(q(7, 4) - eps));
        assert!(matches!(gently_slanted_form(&h, &[0], eps), Err(GraphError::BadE)));
        assert!(matches!(gently_slanted_form(&h, &[0, 1, 2], eps), Err(GraphError::BadE)));
    }

    #[test]
    fn oversized_slant_is_rejected() {
        let mut g = WeightedDigraph::new(3);
        g.add_arc(0, 1, Exponent::ZERO);
        g.add_arc(1, 2, Exponent::ZERO);
        g.add_arc(2, 0, Exponent::ZERO);
        g.add_arc(0, 2, Exponent::ONE);
        let (f, s) = gently_slanted_form(&g, &[0], q(1, 4)).unwrap();
        assert_eq!(s.to_vec(3), vec![Exponent::ZERO, q(1, 4), q(1, 2)]);
        assert_eq!(f.smallest_weight(), Valuation::Finite(q(-1, 4)));
        assert!(matches!(gently_slanted_form(&g, &[0], q(1, 1)), Err(GraphError::DeltaTooLarge(_))));
    }

    #[test]
    fn forest_predicate() {
        let mut g = WeightedDigraph::new(2);
        g.add_arc(0, 1, Exponent::ZERO);
        g.add_arc(1, 0, Exponent::ZERO);
        assert!(!is_e_forest(&g, &[0, 1]));
        let mut t = WeightedDigraph::new(5);
        t.add_arc(0, 1, Exponent::ZERO);
        t.add_arc(0, 2, Exponent::ZERO);
        t.add_arc(3, 4, Exponent::ZERO);
        t.add_arc(4, 0, Exponent::ONE);
        assert!(is_e_forest(&t, &[0, 3]));
        assert!(!is_e_forest(&t, &[1, 3]));
    }

    #[test]
    fn pull_back_copies_shift_to_fibre() {
        let f = GraphMorphism::from_classes(3, &[vec![0, 1], vec![2]]);
        let s = pull_back(&SimilarityTransform::single(0, q(1, 3)), &f).unwrap();
        assert_eq!(s.to_vec(3), vec![q(1, 3), q(1, 3), Exponent::ZERO]);
        assert!(pull_back(&SimilarityTransform::single(5, q(1, 3)), &f).is_err());
    }

    #[test]
    fn dot_export() {
        let dot = flat().to_dot();
        assert!(dot.contains("\"1\" -> \"2\" [weight=\"1/2\"];"));
        assert!(dot.contains("\"3\" -> \"1\" [weight=\"7/4\"];"));
    }
}

//! Domain types: instances, hyperedge profiles, dihypergraphs and the
//! bipartite pairs that encode them.
//!
//! Vertices are 0-indexed everywhere inside the crate. The JSON documents in
//! [`InstanceDoc`] and [`DihypergraphDoc`] use 1-indexed vertices, matching
//! the `[n]` convention of the literature; conversion happens only there.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Side};

/// Hyperedge size profile: `(tail size, head size) -> count`, positive
/// entries only, iterated in key order.
pub type Profile = BTreeMap<(usize, usize), usize>;

/// Degree sequences plus hyperedge size profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub n: usize,
    pub d_plus: Vec<usize>,
    pub d_minus: Vec<usize>,
    pub mu: Profile,
}

impl Instance {
    /// Builds and validates an instance.
    pub fn new(n: usize, d_plus: Vec<usize>, d_minus: Vec<usize>, mu: Profile) -> Result<Self> {
        let inst = Instance {
            n,
            d_plus,
            d_minus,
            mu,
        };
        validate_instance(&inst)?;
        Ok(inst)
    }

    /// Total out-degree `M+`.
    pub fn m_plus(&self) -> usize {
        self.d_plus.iter().sum()
    }

    /// Total in-degree `M-`.
    pub fn m_minus(&self) -> usize {
        self.d_minus.iter().sum()
    }

    /// Number of hyperedges.
    pub fn edge_count(&self) -> usize {
        self.mu.values().sum()
    }

    pub fn k_vectors(&self) -> KVectors {
        build_k_vectors(&self.mu)
    }

    /// The instance with every hyperedge reversed: degrees swap roles and
    /// profile keys are transposed.
    pub fn reversed(&self) -> Instance {
        Instance {
            n: self.n,
            d_plus: self.d_minus.clone(),
            d_minus: self.d_plus.clone(),
            mu: self.mu.iter().map(|(&(a, b), &c)| ((b, a), c)).collect(),
        }
    }
}

/// Checks degree/profile consistency, nonempty sides and positive mass.
pub fn validate_instance(inst: &Instance) -> Result<()> {
    if inst.d_plus.len() != inst.n {
        return Err(Error::LengthMismatch {
            what: "d_plus",
            len: inst.d_plus.len(),
            expected: inst.n,
        });
    }
    if inst.d_minus.len() != inst.n {
        return Err(Error::LengthMismatch {
            what: "d_minus",
            len: inst.d_minus.len(),
            expected: inst.n,
        });
    }
    for (&(tail, head), &count) in &inst.mu {
        if tail == 0 || head == 0 {
            return Err(Error::EmptySide { tail, head });
        }
        if count == 0 {
            return Err(Error::ZeroCount { tail, head });
        }
    }
    let profile_plus: usize = inst.mu.iter().map(|(&(a, _), &c)| a * c).sum();
    let profile_minus: usize = inst.mu.iter().map(|(&(_, b), &c)| b * c).sum();
    let m_plus = inst.m_plus();
    let m_minus = inst.m_minus();
    if m_plus != profile_plus {
        return Err(Error::SumMismatch {
            side: Side::Tail,
            degrees: m_plus,
            profile: profile_plus,
        });
    }
    if m_minus != profile_minus {
        return Err(Error::SumMismatch {
            side: Side::Head,
            degrees: m_minus,
            profile: profile_minus,
        });
    }
    if m_plus == 0 || m_minus == 0 {
        return Err(Error::ZeroMass {
            plus: m_plus,
            minus: m_minus,
        });
    }
    Ok(())
}

/// Per-hyperedge tail and head sizes in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KVectors {
    pub k_plus: Vec<usize>,
    pub k_minus: Vec<usize>,
}

impl KVectors {
    pub fn m(&self) -> usize {
        self.k_plus.len()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.k_plus.iter().copied().zip(self.k_minus.iter().copied())
    }
}

/// Expands the profile into one `(tail, head)` pair per hyperedge, sorted in
/// descending lexicographic order (tail size first).
pub fn build_k_vectors(mu: &Profile) -> KVectors {
    let mut pairs: Vec<(usize, usize)> = mu
        .iter()
        .flat_map(|(&key, &count)| std::iter::repeat_n(key, count))
        .collect();
    pairs.sort_unstable_by(|a, b| b.cmp(a));
    KVectors {
        k_plus: pairs.iter().map(|p| p.0).collect(),
        k_minus: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Minimum hyperedge size `tail + head` over the profile.
pub fn kappa(mu: &Profile) -> Result<usize> {
    mu.keys().map(|&(a, b)| a + b).min().ok_or(Error::EmptyProfile)
}

/// Summary statistics of a nonnegative integer sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    /// Sum of the entries.
    pub sum: usize,
    /// Sum of falling factorials `a(a-1)`.
    pub falling2: usize,
    pub max: usize,
    /// Absolute deviation from the mean, `sum |a_i - mean|`.
    pub n1: f64,
}

pub fn moments(seq: &[usize]) -> Moments {
    let sum: usize = seq.iter().sum();
    let falling2 = seq.iter().map(|&a| a * a.saturating_sub(1)).sum();
    let max = seq.iter().copied().max().unwrap_or(0);
    // n * |a_i - mean| = |n a_i - sum|, kept in integers until the final division
    let len = seq.len();
    let scaled: u128 = seq
        .iter()
        .map(|&a| (len as i128 * a as i128 - sum as i128).unsigned_abs())
        .sum();
    let n1 = if len == 0 {
        0.0
    } else {
        scaled as f64 / len as f64
    };
    Moments {
        sum,
        falling2,
        max,
        n1,
    }
}

/// A directed hyperedge: nonempty disjoint tail and head, each sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperedge {
    pub tail: Vec<usize>,
    pub head: Vec<usize>,
}

impl Hyperedge {
    pub fn new(mut tail: Vec<usize>, mut head: Vec<usize>) -> Result<Self> {
        tail.sort_unstable();
        head.sort_unstable();
        if tail.is_empty() || head.is_empty() {
            return Err(Error::InvalidEdge("tail and head must be nonempty".into()));
        }
        if tail.windows(2).any(|w| w[0] == w[1]) || head.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidEdge("repeated vertex inside a tail or head".into()));
        }
        if tail.iter().any(|v| head.binary_search(v).is_ok()) {
            return Err(Error::InvalidEdge(format!(
                "tail {tail:?} and head {head:?} intersect"
            )));
        }
        Ok(Hyperedge { tail, head })
    }
}

/// A directed hypergraph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dihypergraph {
    pub n: usize,
    pub edges: BTreeSet<Hyperedge>,
}

impl Dihypergraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Hyperedge>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for e in edges {
            if let Some(&v) = e.tail.iter().chain(&e.head).find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if e.tail.is_empty() || e.head.is_empty() {
                return Err(Error::InvalidEdge("tail and head must be nonempty".into()));
            }
            if e.tail.iter().any(|v| e.head.contains(v)) {
                return Err(Error::InvalidEdge(format!(
                    "tail {:?} and head {:?} intersect",
                    e.tail, e.head
                )));
            }
            let desc = format!("{e:?}");
            if !set.insert(e) {
                return Err(Error::RepeatedEdge(desc));
            }
        }
        Ok(Dihypergraph { n, edges: set })
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            for &v in &e.tail {
                d[v] += 1;
            }
        }
        d
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            for &v in &e.head {
                d[v] += 1;
            }
        }
        d
    }

    pub fn profile(&self) -> Profile {
        let mut mu = Profile::new();
        for e in &self.edges {
            *mu.entry((e.tail.len(), e.head.len())).or_insert(0) += 1;
        }
        mu
    }

    /// True when degrees and profile equal those of `inst`.
    pub fn matches(&self, inst: &Instance) -> bool {
        self.n == inst.n
            && self.out_degrees() == inst.d_plus
            && self.in_degrees() == inst.d_minus
            && self.profile() == inst.mu
    }

    /// Edges in the canonical order: sorted by size profile in descending
    /// lexicographic order, ties broken by vertex sets ascending. This lines
    /// edge `j` up with the `j`-th entry of the k-vectors.
    pub fn edges_in_k_order(&self) -> Vec<Hyperedge> {
        let mut edges: Vec<Hyperedge> = self.edges.iter().cloned().collect();
        edges.sort_by(|a, b| {
            (b.tail.len(), b.head.len())
                .cmp(&(a.tail.len(), a.head.len()))
                .then_with(|| a.cmp(b))
        });
        edges
    }
}

/// Simple bipartite graph on `left` (V) and `right` (U) vertex sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BipartiteGraph {
    pub n_left: usize,
    pub n_right: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn empty(n_left: usize, n_right: usize) -> Self {
        BipartiteGraph {
            n_left,
            n_right,
            edges: BTreeSet::new(),
        }
    }

    pub fn new(
        n_left: usize,
        n_right: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (v, u) in edges {
            if v >= n_left || u >= n_right {
                return Err(Error::InvalidGraph(format!(
                    "edge ({v}, {u}) outside {n_left} x {n_right}"
                )));
            }
            if !set.insert((v, u)) {
                return Err(Error::InvalidGraph(format!("repeated edge ({v}, {u})")));
            }
        }
        Ok(BipartiteGraph {
            n_left,
            n_right,
            edges: set,
        })
    }

    pub fn contains(&self, v: usize, u: usize) -> bool {
        self.edges.contains(&(v, u))
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n_left];
        for &(v, _) in &self.edges {
            d[v] += 1;
        }
        d
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n_right];
        for &(_, u) in &self.edges {
            d[u] += 1;
        }
        d
    }

    /// Neighbourhood of right vertex `u`, sorted.
    pub fn right_neighbors(&self, u: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|&&(_, w)| w == u)
            .map(|&(v, _)| v)
            .collect()
    }

    pub fn left_neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .range((v, 0)..(v + 1, 0))
            .map(|&(_, u)| u)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_disjoint(&self, other: &BipartiteGraph) -> bool {
        self.edges.is_disjoint(&other.edges)
    }
}

/// Two edge-disjoint bipartite graphs over the same bipartition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartitePair {
    pub plus: BipartiteGraph,
    pub minus: BipartiteGraph,
}

impl BipartitePair {
    pub fn new(plus: BipartiteGraph, minus: BipartiteGraph) -> Result<Self> {
        if plus.n_left != minus.n_left || plus.n_right != minus.n_right {
            return Err(Error::InvalidGraph(
                "graphs of a pair must share the bipartition".into(),
            ));
        }
        if !plus.is_disjoint(&minus) {
            return Err(Error::InvalidGraph("graphs of a pair share an edge".into()));
        }
        Ok(BipartitePair { plus, minus })
    }
}

/// Encodes the hyperedges, labelled in `edge_order`, as a bipartite pair:
/// right vertex `j` is joined to the tail of edge `j` in the first graph and
/// to its head in the second.
pub fn to_bipartite_pair(h: &Dihypergraph, edge_order: &[Hyperedge]) -> Result<BipartitePair> {
    let as_set: BTreeSet<&Hyperedge> = edge_order.iter().collect();
    if edge_order.len() != h.edges.len()
        || as_set.len() != edge_order.len()
        || !edge_order.iter().all(|e| h.edges.contains(e))
    {
        return Err(Error::PreconditionViolated(
            "edge order must be a permutation of the hyperedges".into(),
        ));
    }
    let m = edge_order.len();
    let mut plus = BipartiteGraph::empty(h.n, m);
    let mut minus = BipartiteGraph::empty(h.n, m);
    for (j, e) in edge_order.iter().enumerate() {
        plus.edges.extend(e.tail.iter().map(|&v| (v, j)));
        minus.edges.extend(e.head.iter().map(|&v| (v, j)));
    }
    BipartitePair::new(plus, minus)
}

/// Inverse of [`to_bipartite_pair`], forgetting the labels.
pub fn from_bipartite_pair(p: &BipartitePair) -> Result<Dihypergraph> {
    let edges = (0..p.plus.n_right)
        .map(|u| Hyperedge::new(p.plus.right_neighbors(u), p.minus.right_neighbors(u)))
        .collect::<Result<Vec<_>>>()?;
    Dihypergraph::new(p.plus.n_left, edges)
}

/// True iff no two right vertices have identical neighbourhoods in both
/// graphs, i.e. the pair encodes a dihypergraph without repeated hyperedges.
pub fn check_no_repeated_edges(p: &BipartitePair) -> bool {
    let mut seen = BTreeSet::new();
    (0..p.plus.n_right)
        .all(|u| seen.insert((p.plus.right_neighbors(u), p.minus.right_neighbors(u))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub tail: usize,
    pub head: usize,
    pub count: usize,
}

/// JSON form of an [`Instance`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub n: usize,
    pub d_plus: Vec<usize>,
    pub d_minus: Vec<usize>,
    pub mu: Vec<ProfileEntry>,
}

impl InstanceDoc {
    pub fn into_instance(self) -> Result<Instance> {
        let mut mu = Profile::new();
        for e in self.mu {
            if mu.insert((e.tail, e.head), e.count).is_some() {
                return Err(Error::DuplicateProfile {
                    tail: e.tail,
                    head: e.head,
                });
            }
        }
        Instance::new(self.n, self.d_plus, self.d_minus, mu)
    }
}

impl From<&Instance> for InstanceDoc {
    fn from(inst: &Instance) -> Self {
        InstanceDoc {
            n: inst.n,
            d_plus: inst.d_plus.clone(),
            d_minus: inst.d_minus.clone(),
            mu: inst
                .mu
                .iter()
                .map(|(&(tail, head), &count)| ProfileEntry { tail, head, count })
                .collect(),
        }
    }
}

pub fn parse_instance(json: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    doc.into_instance()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperedgeDoc {
    pub tail: Vec<usize>,
    pub head: Vec<usize>,
}

/// JSON form of a [`Dihypergraph`]; vertices 1-indexed, edges canonical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DihypergraphDoc {
    pub n: usize,
    pub edges: Vec<HyperedgeDoc>,
}

impl From<&Dihypergraph> for DihypergraphDoc {
    fn from(h: &Dihypergraph) -> Self {
        DihypergraphDoc {
            n: h.n,
            edges: h
                .edges
                .iter()
                .map(|e| HyperedgeDoc {
                    tail: e.tail.iter().map(|v| v + 1).collect(),
                    head: e.head.iter().map(|v| v + 1).collect(),
                })
                .collect(),
        }
    }
}

impl DihypergraphDoc {
    pub fn into_dihypergraph(self) -> Result<Dihypergraph> {
        let n = self.n;
        let shift = |vs: Vec<usize>| -> Result<Vec<usize>> {
            vs.into_iter()
                .map(|v| {
                    if v == 0 || v > n {
                        Err(Error::VertexOutOfRange { vertex: v, n })
                    } else {
                        Ok(v - 1)
                    }
                })
                .collect()
        };
        let edges = self
            .edges
            .into_iter()
            .map(|e| Hyperedge::new(shift(e.tail)?, shift(e.head)?))
            .collect::<Result<Vec<_>>>()?;
        Dihypergraph::new(n, edges)
    }
}

//! Exact counting by memoised backtracking, in arbitrary precision.
//!
//! Bipartite graphs live on `(V, U)` with `V` the left side. Degree
//! sequences are passed as `(left, right)`, so `count_bipartite(x, y)`
//! counts graphs with degree `x[v]` at `v in V` and `y[u]` at `u in U`.
//! Infeasible sequences count as zero; only bad input, budget exhaustion and
//! internal inconsistencies are errors.
//!
//! Every call owns its memo tables, so an [`Oracle`] can be shared freely
//! across threads.

mod classes;
mod hyper;
pub(crate) mod masks;
mod pairs;
mod switching;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{BipartiteGraph, Dihypergraph, Instance};
use masks::{count_masked, enumerate_masked, Chooser};

pub use switching::{apply_switching, SwitchingSets};

/// Exact nonnegative count.
pub type ExactCount = BigUint;

/// Default node-expansion budget for [`Oracle::default`].
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Node-expansion counter shared by the engines of one call.
#[derive(Debug)]
pub(crate) struct Work {
    budget: Option<u64>,
    used: u64,
}

impl Work {
    #[cfg(test)]
    pub fn unbounded() -> Self {
        Work::with_budget(None)
    }

    pub fn with_budget(budget: Option<u64>) -> Self {
        Work { budget, used: 0 }
    }

    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        match self.budget {
            Some(b) if self.used > b => Err(Error::BudgetExceeded { budget: b }),
            _ => Ok(()),
        }
    }
}

/// Edges a bipartite graph must contain and edges it must avoid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ForcedAvoidConstraint {
    include: BTreeSet<(usize, usize)>,
    avoid: BTreeSet<(usize, usize)>,
}

impl ForcedAvoidConstraint {
    pub fn new(
        include: impl IntoIterator<Item = (usize, usize)>,
        avoid: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let include: BTreeSet<_> = include.into_iter().collect();
        let avoid: BTreeSet<_> = avoid.into_iter().collect();
        if let Some(&(v, u)) = include.intersection(&avoid).next() {
            return Err(Error::InvalidEdge(format!(
                "edge ({v}, {u}) is both included and avoided"
            )));
        }
        Ok(ForcedAvoidConstraint { include, avoid })
    }

    pub fn avoiding(x: &BipartiteGraph) -> Self {
        ForcedAvoidConstraint {
            include: BTreeSet::new(),
            avoid: x.edges.clone(),
        }
    }

    pub fn including(x: &BipartiteGraph) -> Self {
        ForcedAvoidConstraint {
            include: x.edges.clone(),
            avoid: BTreeSet::new(),
        }
    }

    pub fn include(&self) -> &BTreeSet<(usize, usize)> {
        &self.include
    }

    pub fn avoid(&self) -> &BTreeSet<(usize, usize)> {
        &self.avoid
    }

    /// One chooser per right vertex, with forced and forbidden left masks.
    fn choosers(&self, s: &[usize], t: &[usize]) -> Result<Vec<Chooser>> {
        masks::check_width(s.len())?;
        let mut out: Vec<Chooser> = t.iter().map(|&d| Chooser::free(d)).collect();
        for (set, forced) in [(&self.include, true), (&self.avoid, false)] {
            for &(v, u) in set {
                if v >= s.len() || u >= t.len() {
                    return Err(Error::InvalidEdge(format!(
                        "edge ({v}, {u}) outside {} x {}",
                        s.len(),
                        t.len()
                    )));
                }
                if forced {
                    out[u].required |= 1 << v;
                } else {
                    out[u].forbidden |= 1 << v;
                }
            }
        }
        Ok(out)
    }
}

fn masks_to_graph(n_left: usize, sol: &[u64]) -> BipartiteGraph {
    let mut g = BipartiteGraph::empty(n_left, sol.len());
    for (u, &mask) in sol.iter().enumerate() {
        let mut bits = mask;
        while bits != 0 {
            g.edges.insert((bits.trailing_zeros() as usize, u));
            bits &= bits - 1;
        }
    }
    g
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Exact counter with a per-call work budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    budget: Option<u64>,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle::new(Some(DEFAULT_BUDGET))
    }
}

impl Oracle {
    /// `budget` caps memo misses per call; `None` means unbounded.
    pub fn new(budget: Option<u64>) -> Self {
        Oracle { budget }
    }

    pub fn unbounded() -> Self {
        Oracle::new(None)
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    fn work(&self) -> Work {
        Work::with_budget(self.budget)
    }

    /// `B(x, y)`.
    pub fn count_bipartite(&self, x: &[usize], y: &[usize]) -> Result<ExactCount> {
        classes::count_bipartite(x, y, &mut self.work())
    }

    /// Graphs with degrees `(s, t)` containing every included edge and no
    /// avoided edge.
    pub fn count_bipartite_constrained(
        &self,
        s: &[usize],
        t: &[usize],
        c: &ForcedAvoidConstraint,
    ) -> Result<ExactCount> {
        let choosers = c.choosers(s, t)?;
        count_masked(&choosers, s, &mut self.work())
    }

    /// `B^(A)(s, t, X)`.
    pub fn count_bipartite_avoiding(&self, s: &[usize], t: &[usize], x: &BipartiteGraph) -> Result<ExactCount> {
        self.count_bipartite_constrained(s, t, &ForcedAvoidConstraint::avoiding(x))
    }

    /// `B^(I)(s, t, X)`.
    pub fn count_bipartite_including(&self, s: &[usize], t: &[usize], x: &BipartiteGraph) -> Result<ExactCount> {
        self.count_bipartite_constrained(s, t, &ForcedAvoidConstraint::including(x))
    }

    /// Every graph in `B(x, y)`.
    pub fn enumerate_bipartite(&self, x: &[usize], y: &[usize]) -> Result<Vec<BipartiteGraph>> {
        self.enumerate_bipartite_constrained(x, y, &ForcedAvoidConstraint::default())
    }

    pub fn enumerate_bipartite_constrained(
        &self,
        x: &[usize],
        y: &[usize],
        c: &ForcedAvoidConstraint,
    ) -> Result<Vec<BipartiteGraph>> {
        let choosers = c.choosers(x, y)?;
        let sols = enumerate_masked(&choosers, x, &mut self.work())?;
        Ok(sols.iter().map(|s| masks_to_graph(x.len(), s)).collect())
    }

    /// `BP(s, t, x, y)`: edge-disjoint pairs with `G+` in `B(s, t)` and `G-`
    /// in `B(x, y)`.
    pub fn count_bipartite_pairs(&self, s: &[usize], t: &[usize], x: &[usize], y: &[usize]) -> Result<ExactCount> {
        classes::count_pairs(s, t, x, y, &mut self.work())
    }

    /// `BP` as the sum of `B^(A)(s, t, X)` over every `X` in `B(x, y)`.
    pub fn count_bipartite_pairs_by_sum(
        &self,
        s: &[usize],
        t: &[usize],
        x: &[usize],
        y: &[usize],
    ) -> Result<ExactCount> {
        check_pair_lengths(s, t, x, y)?;
        let mut work = self.work();
        let all = enumerate_masked(&ForcedAvoidConstraint::default().choosers(x, y)?, x, &mut work)?;
        let mut total = BigUint::zero();
        for sol in all {
            let g = masks_to_graph(x.len(), &sol);
            let choosers = ForcedAvoidConstraint::avoiding(&g).choosers(s, t)?;
            total += count_masked(&choosers, s, &mut work)?;
        }
        Ok(total)
    }

    /// `BP` by direct enumeration of pairs.
    pub fn count_bipartite_pairs_direct(
        &self,
        s: &[usize],
        t: &[usize],
        x: &[usize],
        y: &[usize],
    ) -> Result<ExactCount> {
        Ok(pairs::count_pairs_split(s, t, x, y, &mut self.work())?.total())
    }

    /// `L`: pairs in which no two right vertices share both neighbourhoods.
    pub fn count_labelled(
        &self,
        d_plus: &[usize],
        k_plus: &[usize],
        d_minus: &[usize],
        k_minus: &[usize],
    ) -> Result<ExactCount> {
        Ok(pairs::count_pairs_split(d_plus, k_plus, d_minus, k_minus, &mut self.work())?.distinct)
    }

    /// `Q(s, t, x, y)`: pairs with at least one pair of right vertices
    /// sharing both neighbourhoods.
    pub fn count_q(&self, s: &[usize], t: &[usize], x: &[usize], y: &[usize]) -> Result<ExactCount> {
        Ok(pairs::count_pairs_split(s, t, x, y, &mut self.work())?.colliding)
    }

    /// `P = L / BP` as an exact rational.
    pub fn prob_no_repeat(
        &self,
        d_plus: &[usize],
        k_plus: &[usize],
        d_minus: &[usize],
        k_minus: &[usize],
    ) -> Result<BigRational> {
        let split = pairs::count_pairs_split(d_plus, k_plus, d_minus, k_minus, &mut self.work())?;
        let total = split.total();
        if total.is_zero() {
            return Err(Error::EmptyEnsemble("no bipartite pair has these degrees".into()));
        }
        Ok(BigRational::new(split.distinct.into(), total.into()))
    }

    /// `H` by direct backtracking over hyperedges.
    pub fn count_dihypergraphs_direct(&self, inst: &Instance) -> Result<ExactCount> {
        hyper::count_dihypergraphs_direct(inst, &mut self.work())
    }

    /// `H` computed both directly and as `L / prod mu!`; the two must agree.
    pub fn count_dihypergraphs(&self, inst: &Instance) -> Result<ExactCount> {
        let mut work = self.work();
        let direct = hyper::count_dihypergraphs_direct(inst, &mut work)?;
        let k = inst.k_vectors();
        let labelled = pairs::count_pairs_split(&inst.d_plus, &k.k_plus, &inst.d_minus, &k.k_minus, &mut work)?.distinct;
        let divisor = inst
            .mu
            .values()
            .fold(BigUint::one(), |acc, &c| acc * factorial(c));
        if !(&labelled % &divisor).is_zero() {
            return Err(Error::NotDivisible {
                labelled: labelled.to_string(),
                divisor: divisor.to_string(),
            });
        }
        let via_pairs = labelled / divisor;
        if via_pairs != direct {
            return Err(Error::RouteMismatch {
                what: "dihypergraph count",
                left: direct.to_string(),
                right: via_pairs.to_string(),
            });
        }
        Ok(direct)
    }

    /// Every dihypergraph realising the instance.
    pub fn enumerate_dihypergraphs(&self, inst: &Instance) -> Result<Vec<Dihypergraph>> {
        hyper::enumerate_dihypergraphs(inst, &mut self.work())
    }

    /// `sum over X in B(x, y) of exp(-sum_{vu in X} s_v t_u / M_st)`.
    pub fn exp_neg_phi_sum(&self, s: &[usize], t: &[usize], x: &[usize], y: &[usize]) -> Result<f64> {
        check_pair_lengths(s, t, x, y)?;
        let m_st: usize = s.iter().sum();
        let all = self.enumerate_bipartite(x, y)?;
        if m_st == 0 {
            return Ok(all.len() as f64);
        }
        Ok(all
            .iter()
            .map(|g| {
                let phi: usize = g.edges.iter().map(|&(v, u)| s[v] * t[u]).sum();
                (-(phi as f64) / m_st as f64).exp()
            })
            .sum())
    }

    /// `(B*(f, f'), B*(f', f))` for the prefix `y_j` of the sequential
    /// generator; `f = (v, u)` and `f_alt = (v, u')`.
    pub fn enumerate_switching_sets(
        &self,
        y_j: &BipartiteGraph,
        f: (usize, usize),
        f_alt: (usize, usize),
        x: &[usize],
        y: &[usize],
    ) -> Result<SwitchingSets> {
        switching::enumerate_switching_sets(self, y_j, f, f_alt, x, y)
    }
}

fn check_pair_lengths(s: &[usize], t: &[usize], x: &[usize], y: &[usize]) -> Result<()> {
    if s.len() != x.len() || t.len() != y.len() {
        return Err(Error::LengthMismatch {
            what: "pair degree sequences",
            len: s.len().max(t.len()),
            expected: x.len().max(y.len()),
        });
    }
    Ok(())
}

/// Lossy conversion for reporting; `None` above `f64` range.
pub fn count_to_f64(c: &ExactCount) -> Option<f64> {
    c.to_f64().filter(|v| v.is_finite())
}

/// Natural log of an exact count; `None` for zero.
pub fn ln_count(c: &ExactCount) -> Option<f64> {
    if c.is_zero() {
        return None;
    }
    let bits = c.bits();
    if bits < 1000 {
        return c.to_f64().map(f64::ln);
    }
    let shift = bits - 900;
    let top = (c >> shift).to_f64()?;
    Some(top.ln() + shift as f64 * std::f64::consts::LN_2)
}

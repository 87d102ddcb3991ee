//! Exact uniform sampling.
//!
//! The sequential generator visits left vertices in index order and gives
//! vertex `v_i` its `x_i` edges one at a time. With prefix graph `G` and slot
//! `j` of `v_i`, edge `v_i u` is chosen with probability
//!
//! ```text
//! rho(u) = B^(I)(x, y, G + v_i u) / ((x_i - j + 1) B^(I)(x, y, G))
//! ```
//!
//! which makes every full edge sequence equally likely. Completion counts
//! are exact and cached, keyed by the residual right capacities.
//!
//! Random streams: a sampler seeded with `seed` draws sample number `k` from
//! `ChaCha8Rng::seed_from_u64(seed)` with stream `k`.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{check_no_repeated_edges, from_bipartite_pair, BipartiteGraph, BipartitePair, Dihypergraph, Instance};
use crate::oracle::masks::{check_width, subsets_of_size};
use crate::oracle::Oracle;

/// Rejection cap for [`sample_dihypergraph`].
pub const DEFAULT_MAX_REJECTS: u64 = 1_000_000;

/// The random generator for sample number `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A prefix of the sequential generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplerState {
    pub prefix: Vec<(usize, usize)>,
    /// `x_a(j)`: edges still owed by each left vertex.
    pub remaining_left: Vec<usize>,
    /// `y_b(j)`: edges still owed by each right vertex.
    pub remaining_right: Vec<usize>,
    /// Vertex being processed; `None` once the sequence is complete.
    pub current_vertex: Option<usize>,
    /// 1-based slot of the next edge of `current_vertex`.
    pub current_slot: usize,
}

impl SamplerState {
    pub fn empty(x: &[usize], y: &[usize]) -> Self {
        let mut st = SamplerState {
            prefix: Vec::new(),
            remaining_left: x.to_vec(),
            remaining_right: y.to_vec(),
            current_vertex: None,
            current_slot: 1,
        };
        st.current_vertex = st.remaining_left.iter().position(|&c| c > 0);
        st
    }

    /// Replays `prefix`, checking that each edge belongs to the vertex the
    /// generator would be processing and respects capacities.
    pub fn from_prefix(x: &[usize], y: &[usize], prefix: &[(usize, usize)]) -> Result<Self> {
        let mut st = SamplerState::empty(x, y);
        for &e in prefix {
            st.push(e)?;
        }
        Ok(st)
    }

    /// Appends one edge.
    pub fn push(&mut self, (v, u): (usize, usize)) -> Result<()> {
        if self.current_vertex != Some(v)
            || u >= self.remaining_right.len()
            || self.remaining_right[u] == 0
            || self.prefix.contains(&(v, u))
        {
            return Err(Error::InvalidPrefix);
        }
        self.prefix.push((v, u));
        self.remaining_left[v] -= 1;
        self.remaining_right[u] -= 1;
        if self.remaining_left[v] == 0 {
            self.current_vertex = (v + 1..self.remaining_left.len()).find(|&w| self.remaining_left[w] > 0);
            self.current_slot = 1;
        } else {
            self.current_slot += 1;
        }
        Ok(())
    }

    pub fn is_complete(&self) -> bool {
        self.current_vertex.is_none()
    }

    /// Right vertices already joined to the current vertex, as a mask.
    fn current_mask(&self) -> u64 {
        match self.current_vertex {
            Some(v) => self
                .prefix
                .iter()
                .filter(|e| e.0 == v)
                .fold(0, |m, &(_, u)| m | 1 << u),
            None => 0,
        }
    }

    pub fn graph(&self, n_left: usize, n_right: usize) -> BipartiteGraph {
        BipartiteGraph {
            n_left,
            n_right,
            edges: self.prefix.iter().copied().collect(),
        }
    }
}

/// `rho` on the right vertices, with exact probabilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDistribution {
    /// Right vertices with positive probability, in index order.
    pub support: Vec<(usize, BigRational)>,
}

impl EdgeDistribution {
    pub fn total(&self) -> BigRational {
        self.support.iter().map(|(_, p)| p.clone()).sum()
    }

    pub fn prob(&self, u: usize) -> BigRational {
        self.support
            .iter()
            .find(|(w, _)| *w == u)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(BigRational::zero)
    }
}

type TailKey = (usize, Vec<usize>);

/// Sequential generator for `B(x, y)` with cached completion counts.
#[derive(Debug)]
pub struct EdgeSequenceSampler {
    x: Vec<usize>,
    y: Vec<usize>,
    oracle: Oracle,
    tails: Mutex<HashMap<TailKey, BigUint>>,
    total: BigUint,
}

impl EdgeSequenceSampler {
    /// Fails with `EmptyEnsemble` when `B(x, y) = 0`.
    pub fn new(x: &[usize], y: &[usize], oracle: Oracle) -> Result<Self> {
        check_width(y.len())?;
        let mut s = EdgeSequenceSampler {
            x: x.to_vec(),
            y: y.to_vec(),
            oracle,
            tails: Mutex::new(HashMap::new()),
            total: BigUint::zero(),
        };
        s.total = s.tail_count(0, y)?;
        if s.total.is_zero() {
            return Err(Error::EmptyEnsemble(format!("no bipartite graph with degrees {x:?} and {y:?}")));
        }
        Ok(s)
    }

    pub fn left_degrees(&self) -> &[usize] {
        &self.x
    }

    pub fn right_degrees(&self) -> &[usize] {
        &self.y
    }

    /// `B(x, y)`.
    pub fn graph_count(&self) -> &BigUint {
        &self.total
    }

    /// `|S(x, y)| = B(x, y) prod x_i!`.
    pub fn sequence_count(&self) -> BigUint {
        self.x.iter().fold(self.total.clone(), |acc, &d| {
            acc * (1..=d).fold(BigUint::one(), |f, i| f * BigUint::from(i))
        })
    }

    /// `B(x[from..], residual)`.
    fn tail_count(&self, from: usize, residual: &[usize]) -> Result<BigUint> {
        let mut key = residual.to_vec();
        key.sort_unstable();
        let key = (from, key);
        if let Some(v) = self.tails.lock().expect("cache poisoned").get(&key) {
            return Ok(v.clone());
        }
        let v = self.oracle.count_bipartite(&self.x[from..], residual)?;
        self.tails.lock().expect("cache poisoned").insert(key, v.clone());
        Ok(v)
    }

    /// Completions of a prefix whose current vertex `i` already holds
    /// `chosen` and whose residual right capacities are `residual`.
    fn completions(&self, i: usize, chosen: u64, residual: &[usize]) -> Result<BigUint> {
        let owed = self.x[i] - chosen.count_ones() as usize;
        let avail = residual
            .iter()
            .enumerate()
            .filter(|(u, &c)| c > 0 && chosen & (1 << u) == 0)
            .fold(0u64, |m, (u, _)| m | 1 << u);
        let mut total = BigUint::zero();
        for t in subsets_of_size(avail, owed) {
            let mut r = residual.to_vec();
            let mut bits = t;
            while bits != 0 {
                r[bits.trailing_zeros() as usize] -= 1;
                bits &= bits - 1;
            }
            total += self.tail_count(i + 1, &r)?;
        }
        Ok(total)
    }

    /// Unnormalised weights `B^(I)(G + v_i u)` for every right vertex `u`.
    fn weights(&self, state: &SamplerState) -> Result<(Vec<BigUint>, BigUint)> {
        let i = state.current_vertex.ok_or(Error::PreconditionViolated(
            "the edge sequence is already complete".into(),
        ))?;
        if state.remaining_left.len() != self.x.len() || state.remaining_right.len() != self.y.len() {
            return Err(Error::InvalidPrefix);
        }
        let chosen = state.current_mask();
        let mut out = Vec::with_capacity(self.y.len());
        for u in 0..self.y.len() {
            if chosen & (1 << u) != 0 || state.remaining_right[u] == 0 {
                out.push(BigUint::zero());
                continue;
            }
            let mut r = state.remaining_right.clone();
            r[u] -= 1;
            out.push(self.completions(i, chosen | 1 << u, &r)?);
        }
        let sum: BigUint = out.iter().sum();
        if sum.is_zero() {
            return Err(Error::DeadEnd);
        }
        Ok((out, sum))
    }

    /// `rho` at `state`, which must come from [`SamplerState::from_prefix`]
    /// with this sampler's degrees.
    pub fn rho_distribution(&self, state: &SamplerState) -> Result<EdgeDistribution> {
        let (w, sum) = self.weights(state)?;
        let i = state.current_vertex.expect("checked by weights");
        let slots = BigUint::from(self.x[i] - state.current_slot + 1);
        let base = self.completions(i, state.current_mask(), &state.remaining_right)?;
        debug_assert_eq!(&slots * &base, sum);
        let den = slots * base;
        Ok(EdgeDistribution {
            support: w
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(u, c)| (u, BigRational::new(c.into(), den.clone().into())))
                .collect(),
        })
    }

    /// Exact probability that the generator outputs `seq`.
    pub fn sequence_probability(&self, seq: &[(usize, usize)]) -> Result<BigRational> {
        let mut state = SamplerState::empty(&self.x, &self.y);
        let mut p = BigRational::one();
        for &e in seq {
            let rho = self.rho_distribution(&state)?;
            p *= rho.prob(e.1);
            state.push(e)?;
        }
        if !state.is_complete() {
            return Err(Error::InvalidPrefix);
        }
        Ok(p)
    }

    pub fn sample_sequence<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<(usize, usize)>> {
        let mut state = SamplerState::empty(&self.x, &self.y);
        while let Some(v) = state.current_vertex {
            let (w, sum) = self.weights(&state)?;
            let mut r = rng.gen_biguint_below(&sum);
            let u = w
                .iter()
                .position(|c| {
                    if r < *c {
                        true
                    } else {
                        r -= c;
                        false
                    }
                })
                .expect("r is below the total weight");
            state.push((v, u))?;
        }
        Ok(state.prefix)
    }

    pub fn sample_graph<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Result<BipartiteGraph> {
        let seq = self.sample_sequence(rng)?;
        Ok(BipartiteGraph {
            n_left: self.x.len(),
            n_right: self.y.len(),
            edges: seq.into_iter().collect(),
        })
    }
}

/// `rho` at `state` for degrees `(x, y)`, counted with an unbounded oracle.
pub fn rho_distribution(state: &SamplerState, x: &[usize], y: &[usize]) -> Result<EdgeDistribution> {
    EdgeSequenceSampler::new(x, y, Oracle::unbounded())?.rho_distribution(state)
}

pub fn sample_edge_sequence(x: &[usize], y: &[usize], seed: u64) -> Result<Vec<(usize, usize)>> {
    EdgeSequenceSampler::new(x, y, Oracle::default())?.sample_sequence(&mut sample_rng(seed, 0))
}

pub fn sample_bipartite_uniform(x: &[usize], y: &[usize], seed: u64) -> Result<BipartiteGraph> {
    EdgeSequenceSampler::new(x, y, Oracle::default())?.sample_graph(&mut sample_rng(seed, 0))
}

/// Rejection sampler: independent uniform tail and head graphs, kept when
/// they are edge-disjoint and encode no repeated hyperedge.
#[derive(Debug)]
pub struct DihypergraphSampler {
    plus: EdgeSequenceSampler,
    minus: EdgeSequenceSampler,
    max_rejects: u64,
}

impl DihypergraphSampler {
    pub fn new(inst: &Instance, oracle: Oracle, max_rejects: u64) -> Result<Self> {
        let k = inst.k_vectors();
        Ok(DihypergraphSampler {
            plus: EdgeSequenceSampler::new(&inst.d_plus, &k.k_plus, oracle)?,
            minus: EdgeSequenceSampler::new(&inst.d_minus, &k.k_minus, oracle)?,
            max_rejects,
        })
    }

    /// One accepted dihypergraph and the number of attempts it took.
    pub fn sample_counted<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Result<(Dihypergraph, u64)> {
        for attempt in 1..=self.max_rejects.saturating_add(1) {
            let plus = self.plus.sample_graph(rng)?;
            let minus = self.minus.sample_graph(rng)?;
            if !plus.is_disjoint(&minus) {
                continue;
            }
            let pair = BipartitePair::new(plus, minus)?;
            if !check_no_repeated_edges(&pair) {
                continue;
            }
            return Ok((from_bipartite_pair(&pair)?, attempt));
        }
        Err(Error::RejectBudgetExceeded(self.max_rejects))
    }

    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Result<Dihypergraph> {
        Ok(self.sample_counted(rng)?.0)
    }

    /// `B(d+, k+) B(d-, k-)`, the number of equally likely attempts.
    pub fn attempt_space(&self) -> BigUint {
        self.plus.graph_count() * self.minus.graph_count()
    }
}

pub fn sample_dihypergraph(inst: &Instance, seed: u64, max_rejects: u64) -> Result<Dihypergraph> {
    DihypergraphSampler::new(inst, Oracle::default(), max_rejects)?.sample(&mut sample_rng(seed, 0))
}

/// Monte Carlo mean and standard error of `exp(-Phi(Y))` for uniform `Y` in
/// `B(x, y)`, where `Phi(Y) = sum_{vu in Y} s_v t_u / M_st`.
pub fn estimate_exp_neg_phi(
    s: &[usize],
    t: &[usize],
    x: &[usize],
    y: &[usize],
    num_samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if s.len() != x.len() || t.len() != y.len() {
        return Err(Error::LengthMismatch {
            what: "pair degree sequences",
            len: s.len().max(t.len()),
            expected: x.len().max(y.len()),
        });
    }
    if num_samples == 0 {
        return Err(Error::PreconditionViolated("need at least one sample".into()));
    }
    let sampler = EdgeSequenceSampler::new(x, y, Oracle::default())?;
    let m_st: usize = s.iter().sum();
    if m_st == 0 {
        return Ok((1.0, 0.0));
    }
    let mut values = Vec::with_capacity(num_samples);
    for k in 0..num_samples {
        let g = sampler.sample_graph(&mut sample_rng(seed, k as u64))?;
        let phi: usize = g.edges.iter().map(|&(v, u)| s[v] * t[u]).sum();
        values.push((-(phi as f64) / m_st as f64).exp());
    }
    let n = num_samples as f64;
    let mean = values.iter().sum::<f64>() / n;
    if num_samples == 1 {
        return Ok((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

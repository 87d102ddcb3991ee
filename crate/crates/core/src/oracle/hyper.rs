//! Direct backtracking over hyperedges in k-vector order.
//!
//! Hyperedges with equal size profile are unordered, so within a run of equal
//! profiles the chosen `(tail, head)` masks must strictly increase. This
//! counts sets of hyperedges, i.e. unlabelled dihypergraphs, without going
//! through bipartite pairs.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::masks::{caps_to_key, check_width, subsets_of_size};
use super::Work;
use crate::error::Result;
use crate::model::{Dihypergraph, Hyperedge, Instance};

type Key = (usize, Vec<u8>, Vec<u8>, Option<(u64, u64)>);

struct HyperCounter<'a> {
    sizes: Vec<(usize, usize)>,
    memo: HashMap<Key, BigUint>,
    work: &'a mut Work,
}

fn avail(caps: &[u8]) -> u64 {
    caps.iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(0, |m, (i, _)| m | 1u64 << i)
}

fn take(caps: &mut [u8], mut bits: u64) {
    while bits != 0 {
        caps[bits.trailing_zeros() as usize] -= 1;
        bits &= bits - 1;
    }
}

fn mask_to_vertices(mut bits: u64) -> Vec<usize> {
    let mut out = Vec::new();
    while bits != 0 {
        out.push(bits.trailing_zeros() as usize);
        bits &= bits - 1;
    }
    out
}

impl HyperCounter<'_> {
    /// Candidate `(tail, head)` masks for edge `j`, respecting the increasing
    /// order inside a run of equal profiles.
    fn choices(&self, j: usize, plus: &[u8], minus: &[u8], prev: Option<(u64, u64)>) -> Vec<(u64, u64)> {
        let (a, b) = self.sizes[j];
        let mut out = Vec::new();
        for tail in subsets_of_size(avail(plus), a) {
            for head in subsets_of_size(avail(minus) & !tail, b) {
                if prev.is_none_or(|p| (tail, head) > p) {
                    out.push((tail, head));
                }
            }
        }
        out
    }

    fn prev_for_next(&self, j: usize, chosen: (u64, u64)) -> Option<(u64, u64)> {
        (j + 1 < self.sizes.len() && self.sizes[j + 1] == self.sizes[j]).then_some(chosen)
    }

    fn count(&mut self, j: usize, plus: &[u8], minus: &[u8], prev: Option<(u64, u64)>) -> Result<BigUint> {
        if j == self.sizes.len() {
            let done = plus.iter().chain(minus).all(|&c| c == 0);
            return Ok(if done { BigUint::one() } else { BigUint::zero() });
        }
        let key = (j, plus.to_vec(), minus.to_vec(), prev);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        self.work.tick()?;
        let mut total = BigUint::zero();
        for (tail, head) in self.choices(j, plus, minus, prev) {
            let mut np = plus.to_vec();
            let mut nm = minus.to_vec();
            take(&mut np, tail);
            take(&mut nm, head);
            let next_prev = self.prev_for_next(j, (tail, head));
            total += self.count(j + 1, &np, &nm, next_prev)?;
        }
        self.memo.insert(key, total.clone());
        Ok(total)
    }

    fn enumerate(
        &mut self,
        j: usize,
        plus: &[u8],
        minus: &[u8],
        prev: Option<(u64, u64)>,
        stack: &mut Vec<(u64, u64)>,
        out: &mut Vec<Vec<(u64, u64)>>,
    ) -> Result<()> {
        if j == self.sizes.len() {
            if plus.iter().chain(minus).all(|&c| c == 0) {
                out.push(stack.clone());
            }
            return Ok(());
        }
        for (tail, head) in self.choices(j, plus, minus, prev) {
            let mut np = plus.to_vec();
            let mut nm = minus.to_vec();
            take(&mut np, tail);
            take(&mut nm, head);
            let next_prev = self.prev_for_next(j, (tail, head));
            if self.count(j + 1, &np, &nm, next_prev)?.is_zero() {
                continue;
            }
            self.work.tick()?;
            stack.push((tail, head));
            self.enumerate(j + 1, &np, &nm, next_prev, stack, out)?;
            stack.pop();
        }
        Ok(())
    }
}

fn setup<'a>(inst: &Instance, work: &'a mut Work) -> Result<(HyperCounter<'a>, Vec<u8>, Vec<u8>)> {
    check_width(inst.n)?;
    let k = inst.k_vectors();
    let counter = HyperCounter {
        sizes: k.pairs().collect(),
        memo: HashMap::new(),
        work,
    };
    Ok((counter, caps_to_key(&inst.d_plus)?, caps_to_key(&inst.d_minus)?))
}

pub(crate) fn count_dihypergraphs_direct(inst: &Instance, work: &mut Work) -> Result<BigUint> {
    let (mut counter, plus, minus) = setup(inst, work)?;
    counter.count(0, &plus, &minus, None)
}

pub(crate) fn enumerate_dihypergraphs(inst: &Instance, work: &mut Work) -> Result<Vec<Dihypergraph>> {
    let (mut counter, plus, minus) = setup(inst, work)?;
    let mut raw = Vec::new();
    counter.enumerate(0, &plus, &minus, None, &mut Vec::new(), &mut raw)?;
    raw.into_iter()
        .map(|edges| {
            let edges = edges
                .into_iter()
                .map(|(t, h)| Hyperedge::new(mask_to_vertices(t), mask_to_vertices(h)))
                .collect::<Result<Vec<_>>>()?;
            Dihypergraph::new(inst.n, edges)
        })
        .collect()
}

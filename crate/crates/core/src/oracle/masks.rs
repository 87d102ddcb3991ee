//! Backtracking over "chooser" vertices, each picking a neighbourhood (a
//! bitmask over the opposite side) subject to forced and forbidden edges and
//! to remaining capacities on the opposite side.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::Work;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Chooser {
    pub degree: usize,
    pub required: u64,
    pub forbidden: u64,
}

impl Chooser {
    pub fn free(degree: usize) -> Self {
        Chooser {
            degree,
            required: 0,
            forbidden: 0,
        }
    }
}

/// All `k`-subsets of the set bits of `cand`.
pub(crate) fn subsets_of_size(cand: u64, k: usize) -> Vec<u64> {
    fn rec(rest: u64, k: usize, acc: u64, out: &mut Vec<u64>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        if (rest.count_ones() as usize) < k {
            return;
        }
        let low = rest & rest.wrapping_neg();
        rec(rest & !low, k - 1, acc | low, out);
        rec(rest & !low, k, acc, out);
    }
    let mut out = Vec::new();
    rec(cand, k, 0, &mut out);
    out
}

pub(crate) fn caps_to_key(caps: &[usize]) -> Result<Vec<u8>> {
    caps.iter()
        .map(|&c| u8::try_from(c).map_err(|_| Error::TooLarge(format!("capacity {c} exceeds 255"))))
        .collect()
}

pub(crate) fn check_width(len: usize) -> Result<()> {
    if len > 64 {
        return Err(Error::TooLarge(format!(
            "{len} vertices on the bitmask side; at most 64 supported"
        )));
    }
    Ok(())
}

pub(crate) fn full_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

fn avail_mask(caps: &[u8]) -> u64 {
    caps.iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(0u64, |m, (i, _)| m | (1u64 << i))
}

struct MaskCounter<'a> {
    choosers: &'a [Chooser],
    memo: HashMap<(usize, Vec<u8>), BigUint>,
    work: &'a mut Work,
}

impl MaskCounter<'_> {
    fn count(&mut self, idx: usize, caps: &[u8]) -> Result<BigUint> {
        if idx == self.choosers.len() {
            return Ok(if caps.iter().all(|&c| c == 0) {
                BigUint::one()
            } else {
                BigUint::zero()
            });
        }
        let key = (idx, caps.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        self.work.tick()?;
        let mut total = BigUint::zero();
        for chosen in candidate_sets(&self.choosers[idx], caps) {
            let next = take(caps, chosen);
            total += self.count(idx + 1, &next)?;
        }
        self.memo.insert(key, total.clone());
        Ok(total)
    }
}

fn candidate_sets(ch: &Chooser, caps: &[u8]) -> Vec<u64> {
    let avail = avail_mask(caps);
    if ch.required & !avail != 0 || ch.required & ch.forbidden != 0 {
        return Vec::new();
    }
    let forced = ch.required.count_ones() as usize;
    if forced > ch.degree {
        return Vec::new();
    }
    let cand = avail & !ch.forbidden & !ch.required;
    subsets_of_size(cand, ch.degree - forced)
        .into_iter()
        .map(|s| s | ch.required)
        .collect()
}

fn take(caps: &[u8], chosen: u64) -> Vec<u8> {
    let mut next = caps.to_vec();
    let mut bits = chosen;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        next[i] -= 1;
        bits &= bits - 1;
    }
    next
}

fn precheck(choosers: &[Chooser], caps: &[usize]) -> Result<bool> {
    check_width(caps.len())?;
    let demand: usize = choosers.iter().map(|c| c.degree).sum();
    let supply: usize = caps.iter().sum();
    let limit = full_mask(caps.len());
    if choosers
        .iter()
        .any(|c| (c.required | c.forbidden) & !limit != 0)
    {
        return Err(Error::InvalidGraph("constraint edge outside the bipartition".into()));
    }
    Ok(demand == supply)
}

/// Number of ways every chooser can pick a neighbourhood so that all
/// capacities are used exactly.
pub(crate) fn count_masked(choosers: &[Chooser], caps: &[usize], work: &mut Work) -> Result<BigUint> {
    if !precheck(choosers, caps)? {
        return Ok(BigUint::zero());
    }
    let caps = caps_to_key(caps)?;
    let mut counter = MaskCounter {
        choosers,
        memo: HashMap::new(),
        work,
    };
    counter.count(0, &caps)
}

/// Every solution counted by [`count_masked`], as one mask per chooser.
pub(crate) fn enumerate_masked(
    choosers: &[Chooser],
    caps: &[usize],
    work: &mut Work,
) -> Result<Vec<Vec<u64>>> {
    if !precheck(choosers, caps)? {
        return Ok(Vec::new());
    }
    let caps = caps_to_key(caps)?;
    let mut counter = MaskCounter {
        choosers,
        memo: HashMap::new(),
        work,
    };
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(choosers.len());
    enumerate_rec(&mut counter, 0, &caps, &mut stack, &mut out)?;
    Ok(out)
}

fn enumerate_rec(
    counter: &mut MaskCounter<'_>,
    idx: usize,
    caps: &[u8],
    stack: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) -> Result<()> {
    if idx == counter.choosers.len() {
        if caps.iter().all(|&c| c == 0) {
            out.push(stack.clone());
        }
        return Ok(());
    }
    for chosen in candidate_sets(&counter.choosers[idx], caps) {
        let next = take(caps, chosen);
        // only descend into branches that complete
        if counter.count(idx + 1, &next)?.is_zero() {
            continue;
        }
        counter.work.tick()?;
        stack.push(chosen);
        enumerate_rec(counter, idx + 1, &next, stack, out)?;
        stack.pop();
    }
    Ok(())
}

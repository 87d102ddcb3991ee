//! Counting by capacity classes.
//!
//! When no edge is forced or forbidden, left vertices with equal remaining
//! capacity are interchangeable, so the state is just "how many left
//! vertices have capacity c" (or, for pairs, capacity `(a, b)`). Right
//! vertices are processed in decreasing degree order.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::Work;
use crate::error::{Error, Result};

fn binomial_table(n: usize) -> Vec<Vec<u128>> {
    let mut t = vec![vec![0u128; n + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1;
        for j in 1..=i {
            t[i][j] = t[i - 1][j - 1] + if j < i { t[i - 1][j] } else { 0 };
        }
    }
    t
}

fn too_large() -> Error {
    Error::TooLarge("multinomial weight overflows 128 bits".into())
}

/// `B(x, y)`: bipartite graphs with left degrees `x` and right degrees `y`.
pub(crate) fn count_bipartite(x: &[usize], y: &[usize], work: &mut Work) -> Result<BigUint> {
    if x.iter().sum::<usize>() != y.iter().sum::<usize>() {
        return Ok(BigUint::zero());
    }
    if y.iter().any(|&d| d > x.len()) || x.iter().any(|&d| d > y.len()) {
        return Ok(BigUint::zero());
    }
    let cmax = x.iter().copied().max().unwrap_or(0);
    let mut classes = vec![0u16; cmax + 1];
    for &c in x {
        classes[c] += 1;
    }
    let mut degrees: Vec<usize> = y.to_vec();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    let mut counter = SingleCounter {
        degrees: &degrees,
        binom: binomial_table(x.len()),
        memo: HashMap::new(),
        work,
    };
    counter.count(0, &classes)
}

struct SingleCounter<'a> {
    degrees: &'a [usize],
    binom: Vec<Vec<u128>>,
    memo: HashMap<(usize, Vec<u16>), BigUint>,
    work: &'a mut Work,
}

impl SingleCounter<'_> {
    fn count(&mut self, idx: usize, classes: &[u16]) -> Result<BigUint> {
        if idx == self.degrees.len() {
            let done = classes.iter().skip(1).all(|&k| k == 0);
            return Ok(if done { BigUint::one() } else { BigUint::zero() });
        }
        let key = (idx, classes.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        self.work.tick()?;
        let mut moves = Vec::new();
        let mut next = classes.to_vec();
        self.distribute(classes, classes.len() - 1, self.degrees[idx], 1, &mut next, &mut moves)?;
        let mut total = BigUint::zero();
        for (weight, state) in moves {
            let sub = self.count(idx + 1, &state)?;
            if !sub.is_zero() {
                total += sub * BigUint::from(weight);
            }
        }
        self.memo.insert(key, total.clone());
        Ok(total)
    }

    /// Chooses how many vertices of each capacity class (from `c` down to 1)
    /// join the current right vertex.
    fn distribute(
        &self,
        old: &[u16],
        c: usize,
        left: usize,
        weight: u128,
        next: &mut Vec<u16>,
        out: &mut Vec<(u128, Vec<u16>)>,
    ) -> Result<()> {
        if left == 0 {
            out.push((weight, next.clone()));
            return Ok(());
        }
        if c == 0 {
            return Ok(());
        }
        let avail = old[c] as usize;
        for k in 0..=avail.min(left) {
            let w = weight
                .checked_mul(self.binom[avail][k])
                .ok_or_else(too_large)?;
            next[c] -= k as u16;
            next[c - 1] += k as u16;
            self.distribute(old, c - 1, left - k, w, next, out)?;
            next[c] += k as u16;
            next[c - 1] -= k as u16;
        }
        Ok(())
    }
}

/// `BP(s, t, x, y)`: edge-disjoint pairs `(G+, G-)` with `G+` of degrees
/// `(s, t)` and `G-` of degrees `(x, y)`.
pub(crate) fn count_pairs(
    s: &[usize],
    t: &[usize],
    x: &[usize],
    y: &[usize],
    work: &mut Work,
) -> Result<BigUint> {
    if s.len() != x.len() || t.len() != y.len() {
        return Err(Error::LengthMismatch {
            what: "pair degree sequences",
            len: s.len().max(t.len()),
            expected: x.len().max(y.len()),
        });
    }
    if s.iter().sum::<usize>() != t.iter().sum::<usize>()
        || x.iter().sum::<usize>() != y.iter().sum::<usize>()
    {
        return Ok(BigUint::zero());
    }
    let amax = s.iter().copied().max().unwrap_or(0);
    let bmax = x.iter().copied().max().unwrap_or(0);
    let width = bmax + 1;
    let mut classes = vec![0u16; (amax + 1) * width];
    for (&a, &b) in s.iter().zip(x) {
        classes[a * width + b] += 1;
    }
    let mut profiles: Vec<(usize, usize)> = t.iter().copied().zip(y.iter().copied()).collect();
    profiles.sort_unstable_by(|a, b| b.cmp(a));
    let mut counter = PairClassCounter {
        profiles: &profiles,
        width,
        binom: binomial_table(s.len()),
        memo: HashMap::new(),
        work,
    };
    counter.count(0, &classes)
}

struct PairClassCounter<'a> {
    profiles: &'a [(usize, usize)],
    width: usize,
    binom: Vec<Vec<u128>>,
    memo: HashMap<(usize, Vec<u16>), BigUint>,
    work: &'a mut Work,
}

impl PairClassCounter<'_> {
    fn count(&mut self, idx: usize, classes: &[u16]) -> Result<BigUint> {
        if idx == self.profiles.len() {
            let done = classes.iter().skip(1).all(|&k| k == 0);
            return Ok(if done { BigUint::one() } else { BigUint::zero() });
        }
        let key = (idx, classes.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        self.work.tick()?;
        let (p, q) = self.profiles[idx];
        let mut moves = Vec::new();
        let mut next = classes.to_vec();
        self.distribute(classes, classes.len(), p, q, 1, &mut next, &mut moves)?;
        let mut total = BigUint::zero();
        for (weight, state) in moves {
            let sub = self.count(idx + 1, &state)?;
            if !sub.is_zero() {
                total += sub * BigUint::from(weight);
            }
        }
        self.memo.insert(key, total.clone());
        Ok(total)
    }

    /// Walks classes from the highest index down; class `cls` encodes
    /// remaining capacities `(a, b)` with `cls = a * width + b`.
    #[allow(clippy::too_many_arguments)]
    fn distribute(
        &self,
        old: &[u16],
        cls: usize,
        p: usize,
        q: usize,
        weight: u128,
        next: &mut Vec<u16>,
        out: &mut Vec<(u128, Vec<u16>)>,
    ) -> Result<()> {
        if p == 0 && q == 0 {
            out.push((weight, next.clone()));
            return Ok(());
        }
        if cls == 0 {
            return Ok(());
        }
        let cls = cls - 1;
        let (a, b) = (cls / self.width, cls % self.width);
        let avail = old[cls] as usize;
        let max_i = if a > 0 { avail.min(p) } else { 0 };
        for i in 0..=max_i {
            let max_j = if b > 0 { (avail - i).min(q) } else { 0 };
            for j in 0..=max_j {
                if i + j == 0 {
                    self.distribute(old, cls, p, q, weight, next, out)?;
                    continue;
                }
                let w = weight
                    .checked_mul(self.binom[avail][i])
                    .and_then(|w| w.checked_mul(self.binom[avail - i][j]))
                    .ok_or_else(too_large)?;
                next[cls] -= (i + j) as u16;
                if i > 0 {
                    next[cls - self.width] += i as u16;
                }
                if j > 0 {
                    next[cls - 1] += j as u16;
                }
                self.distribute(old, cls, p - i, q - j, w, next, out)?;
                next[cls] += (i + j) as u16;
                if i > 0 {
                    next[cls - self.width] -= i as u16;
                }
                if j > 0 {
                    next[cls - 1] -= j as u16;
                }
            }
        }
        Ok(())
    }
}

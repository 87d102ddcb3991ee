//! Direct enumeration of bipartite pairs, split by whether two right
//! vertices end up with identical neighbourhoods in both graphs.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use super::masks::{caps_to_key, check_width, subsets_of_size};
use super::Work;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct PairSplit {
    /// Pairs in which all right vertices have distinct neighbourhood pairs.
    pub distinct: BigUint,
    /// Pairs with at least one colliding right-vertex pair.
    pub colliding: BigUint,
}

impl PairSplit {
    fn add(&mut self, other: &PairSplit) {
        self.distinct += &other.distinct;
        self.colliding += &other.colliding;
    }

    pub fn total(&self) -> BigUint {
        &self.distinct + &self.colliding
    }
}

type Key = (usize, Vec<u8>, Vec<u8>, Vec<(u64, u64)>, bool);

struct PairEnumerator<'a> {
    profiles: &'a [(usize, usize)],
    memo: HashMap<Key, PairSplit>,
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

impl PairEnumerator<'_> {
    fn count(
        &mut self,
        idx: usize,
        plus: &[u8],
        minus: &[u8],
        group: &[(u64, u64)],
        collided: bool,
    ) -> Result<PairSplit> {
        if idx == self.profiles.len() {
            let mut out = PairSplit::default();
            if plus.iter().chain(minus).all(|&c| c == 0) {
                if collided {
                    out.colliding = 1u32.into();
                } else {
                    out.distinct = 1u32.into();
                }
            }
            return Ok(out);
        }
        let key = (idx, plus.to_vec(), minus.to_vec(), group.to_vec(), collided);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        self.work.tick()?;
        let (p, q) = self.profiles[idx];
        let same_next = idx + 1 < self.profiles.len() && self.profiles[idx + 1] == (p, q);
        let mut total = PairSplit::default();
        for sp in subsets_of_size(avail(plus), p) {
            let mut next_plus = plus.to_vec();
            take(&mut next_plus, sp);
            for sm in subsets_of_size(avail(minus) & !sp, q) {
                let mut next_minus = minus.to_vec();
                take(&mut next_minus, sm);
                let hit = collided || group.contains(&(sp, sm));
                let next_group: Vec<(u64, u64)> = if same_next && !hit {
                    let mut g = group.to_vec();
                    g.push((sp, sm));
                    g.sort_unstable();
                    g
                } else {
                    Vec::new()
                };
                let sub = self.count(idx + 1, &next_plus, &next_minus, &next_group, hit)?;
                total.add(&sub);
            }
        }
        self.memo.insert(key, total.clone());
        Ok(total)
    }
}

pub(crate) fn count_pairs_split(
    s: &[usize],
    t: &[usize],
    x: &[usize],
    y: &[usize],
    work: &mut Work,
) -> Result<PairSplit> {
    if s.len() != x.len() || t.len() != y.len() {
        return Err(Error::LengthMismatch {
            what: "pair degree sequences",
            len: s.len().max(t.len()),
            expected: x.len().max(y.len()),
        });
    }
    check_width(s.len())?;
    if s.iter().sum::<usize>() != t.iter().sum::<usize>()
        || x.iter().sum::<usize>() != y.iter().sum::<usize>()
    {
        return Ok(PairSplit::default());
    }
    let mut profiles: Vec<(usize, usize)> = t.iter().copied().zip(y.iter().copied()).collect();
    profiles.sort_unstable_by(|a, b| b.cmp(a));
    let plus = caps_to_key(s)?;
    let minus = caps_to_key(x)?;
    let mut e = PairEnumerator {
        profiles: &profiles,
        memo: HashMap::new(),
        work,
    };
    let out = e.count(0, &plus, &minus, &[], false)?;
    debug_assert!(!out.total().is_zero() || out.distinct.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_identical_profiles_can_collide() {
        // both right vertices are forced onto tail {0} and head {1, 2}
        let mut w = Work::unbounded();
        let split = count_pairs_split(&[2, 0, 0], &[1, 1], &[0, 2, 2], &[2, 2], &mut w).unwrap();
        assert_eq!(split.distinct, BigUint::zero());
        assert_eq!(split.colliding, BigUint::from(1u32));
    }

    #[test]
    fn matching_pairs_never_collide() {
        let mut w = Work::unbounded();
        let split = count_pairs_split(&[1, 1], &[1, 1], &[1, 1], &[1, 1], &mut w).unwrap();
        assert_eq!(split.distinct, BigUint::from(2u32));
        assert!(split.colliding.is_zero());
    }
}

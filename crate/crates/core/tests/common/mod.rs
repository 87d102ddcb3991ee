//! Brute-force reference counts, written without any of the library's
//! counting machinery: plain enumeration of edge subsets.

#![allow(dead_code)]

use std::collections::BTreeSet;

pub type Edges = BTreeSet<(usize, usize)>;
type Shape = (Vec<usize>, Vec<usize>);

/// Every simple bipartite graph on `x.len() x y.len()` with the given
/// degrees, by filtering all subsets of the complete bipartite graph.
pub fn all_bipartite(x: &[usize], y: &[usize]) -> Vec<Edges> {
    let cells: Vec<(usize, usize)> = (0..x.len())
        .flat_map(|v| (0..y.len()).map(move |u| (v, u)))
        .collect();
    assert!(cells.len() <= 20, "brute force limited to 20 cells");
    let mut out = Vec::new();
    for mask in 0u32..(1 << cells.len()) {
        let mut dl = vec![0; x.len()];
        let mut dr = vec![0; y.len()];
        let mut edges = Edges::new();
        for (i, &(v, u)) in cells.iter().enumerate() {
            if mask >> i & 1 == 1 {
                dl[v] += 1;
                dr[u] += 1;
                edges.insert((v, u));
            }
        }
        if dl == x && dr == y {
            out.push(edges);
        }
    }
    out
}

pub fn count_bipartite(x: &[usize], y: &[usize]) -> u64 {
    all_bipartite(x, y).len() as u64
}

/// Same count as [`count_bipartite`], choosing each left vertex's
/// neighbourhood in turn; usable beyond 20 cells.
pub fn count_by_rows(x: &[usize], y: &[usize]) -> u64 {
    fn rec(x: &[usize], y: &mut [usize], v: usize) -> u64 {
        if v == x.len() {
            return u64::from(y.iter().all(|&c| c == 0));
        }
        let mut total = 0;
        for row in subsets(y.len(), x[v]) {
            if row.iter().all(|&u| y[u] > 0) {
                row.iter().for_each(|&u| y[u] -= 1);
                total += rec(x, y, v + 1);
                row.iter().for_each(|&u| y[u] += 1);
            }
        }
        total
    }
    rec(x, &mut y.to_vec(), 0)
}

pub fn count_constrained(s: &[usize], t: &[usize], include: &Edges, avoid: &Edges) -> u64 {
    all_bipartite(s, t)
        .iter()
        .filter(|g| include.is_subset(g) && g.is_disjoint(avoid))
        .count() as u64
}

fn neighbourhood(g: &Edges, u: usize) -> Vec<usize> {
    g.iter().filter(|e| e.1 == u).map(|e| e.0).collect()
}

/// `(BP, L)`: edge-disjoint pairs, and those with no two right vertices
/// sharing both neighbourhoods.
pub fn count_pairs(s: &[usize], t: &[usize], x: &[usize], y: &[usize]) -> (u64, u64) {
    let plus = all_bipartite(s, t);
    let minus = all_bipartite(x, y);
    let (mut bp, mut l) = (0, 0);
    for a in &plus {
        for b in &minus {
            if !a.is_disjoint(b) {
                continue;
            }
            bp += 1;
            let keys: BTreeSet<_> = (0..t.len())
                .map(|u| (neighbourhood(a, u), neighbourhood(b, u)))
                .collect();
            if keys.len() == t.len() {
                l += 1;
            }
        }
    }
    (bp, l)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

/// `H` by choosing sets of distinct hyperedges directly.
pub fn count_dihypergraphs(n: usize, d_plus: &[usize], d_minus: &[usize], mu: &[((usize, usize), usize)]) -> u64 {
    let mut slots = Vec::new();
    for &((a, b), c) in mu {
        let mut cands = Vec::new();
        for tail in subsets(n, a) {
            for head in subsets(n, b) {
                if tail.iter().all(|v| !head.contains(v)) {
                    cands.push((tail.clone(), head));
                }
            }
        }
        slots.push((cands, c));
    }
    fn rec(
        slots: &[(Vec<Shape>, usize)],
        si: usize,
        from: usize,
        left: usize,
        dp: &mut Vec<usize>,
        dm: &mut Vec<usize>,
    ) -> u64 {
        if si == slots.len() {
            return u64::from(dp.iter().chain(dm.iter()).all(|&c| c == 0));
        }
        if left == 0 {
            let next = slots.get(si + 1).map_or(0, |s| s.1);
            return rec(slots, si + 1, 0, next, dp, dm);
        }
        let mut total = 0;
        for i in from..slots[si].0.len() {
            let (tail, head) = &slots[si].0[i];
            if tail.iter().any(|&v| dp[v] == 0) || head.iter().any(|&v| dm[v] == 0) {
                continue;
            }
            tail.iter().for_each(|&v| dp[v] -= 1);
            head.iter().for_each(|&v| dm[v] -= 1);
            total += rec(slots, si, i + 1, left - 1, dp, dm);
            tail.iter().for_each(|&v| dp[v] += 1);
            head.iter().for_each(|&v| dm[v] += 1);
        }
        total
    }
    let first = slots.first().map_or(0, |s| s.1);
    rec(&slots, 0, 0, first, &mut d_plus.to_vec(), &mut d_minus.to_vec())
}

pub fn factorial(k: u64) -> u64 {
    (1..=k).product()
}

/// Every edge set of `K_{|s|,|t|}` whose degrees stay below `(s, t)`.
pub fn all_subgraphs_below(s: &[usize], t: &[usize]) -> Vec<Edges> {
    let cells: Vec<(usize, usize)> = (0..s.len())
        .flat_map(|v| (0..t.len()).map(move |u| (v, u)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << cells.len()) {
        let mut dl = vec![0; s.len()];
        let mut dr = vec![0; t.len()];
        let mut edges = Edges::new();
        for (i, &(v, u)) in cells.iter().enumerate() {
            if mask >> i & 1 == 1 {
                dl[v] += 1;
                dr[u] += 1;
                edges.insert((v, u));
            }
        }
        if dl.iter().zip(s).all(|(a, b)| a <= b) && dr.iter().zip(t).all(|(a, b)| a <= b) {
            out.push(edges);
        }
    }
    out
}

//! Switching sets for the sequential edge generator.
//!
//! While the generator processes left vertex `v`, a prefix `Y_j` holds every
//! edge of the vertices before `v`, some edges of `v` and nothing after `v`.
//! For `f = vu` and `f' = vu'`, `B*(f, f')` collects the completions of
//! `Y_j + f` that avoid `f'` and have no `w > v` adjacent to both `u` and
//! `u'`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::BipartiteGraph;

use super::{ForcedAvoidConstraint, Oracle};

/// `B*(f, f')` and `B*(f', f)` together with the degree deficits of `u` and
/// `u'` after the prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingSets {
    pub forward: Vec<BipartiteGraph>,
    pub backward: Vec<BipartiteGraph>,
    /// `y_u(j)`.
    pub deficit_u: usize,
    /// `y_{u'}(j)`.
    pub deficit_u_alt: usize,
}

impl SwitchingSets {
    /// Both sides of the double count `y_{u'}(j) |B*(f, f')|` and
    /// `y_u(j) |B*(f', f)|`.
    pub fn double_count(&self) -> (usize, usize) {
        (
            self.deficit_u_alt * self.forward.len(),
            self.deficit_u * self.backward.len(),
        )
    }
}

/// Checks that `y_j` has the shape of a generator prefix while processing
/// `v`, and that it extends to a graph in `B(x, y)`.
fn check_prefix(oracle: &Oracle, y_j: &BipartiteGraph, v: usize, x: &[usize], y: &[usize]) -> Result<()> {
    if y_j.n_left != x.len() || y_j.n_right != y.len() || v >= x.len() {
        return Err(Error::InvalidPrefix);
    }
    let deg = y_j.left_degrees();
    let shaped = (0..x.len()).all(|w| match w.cmp(&v) {
        std::cmp::Ordering::Less => deg[w] == x[w],
        std::cmp::Ordering::Equal => deg[w] < x[w],
        std::cmp::Ordering::Greater => deg[w] == 0,
    });
    if !shaped || oracle.count_bipartite_including(x, y, y_j)?.is_zero() {
        return Err(Error::InvalidPrefix);
    }
    Ok(())
}

fn has_common_late_neighbour(g: &BipartiteGraph, v: usize, u: usize, u_alt: usize) -> bool {
    (v + 1..g.n_left).any(|w| g.contains(w, u) && g.contains(w, u_alt))
}

fn one_side(
    oracle: &Oracle,
    y_j: &BipartiteGraph,
    add: (usize, usize),
    skip: (usize, usize),
    x: &[usize],
    y: &[usize],
) -> Result<Vec<BipartiteGraph>> {
    let include = y_j.edges.iter().copied().chain([add]);
    let c = ForcedAvoidConstraint::new(include, [skip])?;
    let (v, u) = add;
    let u_alt = skip.1;
    Ok(oracle
        .enumerate_bipartite_constrained(x, y, &c)?
        .into_iter()
        .filter(|g| !has_common_late_neighbour(g, v, u, u_alt))
        .collect())
}

pub(crate) fn enumerate_switching_sets(
    oracle: &Oracle,
    y_j: &BipartiteGraph,
    f: (usize, usize),
    f_alt: (usize, usize),
    x: &[usize],
    y: &[usize],
) -> Result<SwitchingSets> {
    let (v, u) = f;
    let u_alt = f_alt.1;
    if f_alt.0 != v || u == u_alt {
        return Err(Error::PreconditionViolated(
            "f and f' must share their left endpoint and differ on the right".into(),
        ));
    }
    check_prefix(oracle, y_j, v, x, y)?;
    if u >= y.len() || u_alt >= y.len() || y_j.contains(v, u) || y_j.contains(v, u_alt) {
        return Err(Error::PreconditionViolated("f and f' must be new edges".into()));
    }
    for e in [f, f_alt] {
        let mut ext = y_j.clone();
        ext.edges.insert(e);
        if oracle.count_bipartite_including(x, y, &ext)?.is_zero() {
            return Err(Error::PreconditionViolated(format!(
                "prefix plus ({}, {}) has no completion",
                e.0, e.1
            )));
        }
    }
    let right = y_j.right_degrees();
    Ok(SwitchingSets {
        forward: one_side(oracle, y_j, f, f_alt, x, y)?,
        backward: one_side(oracle, y_j, f_alt, f, x, y)?,
        deficit_u: y[u] - right[u],
        deficit_u_alt: y[u_alt] - right[u_alt],
    })
}

/// `G - {vu, wu'} + {vu', wu}`.
pub fn apply_switching(g: &BipartiteGraph, v: usize, u: usize, u_alt: usize, w: usize) -> Result<BipartiteGraph> {
    let ok = w > v
        && g.contains(v, u)
        && g.contains(w, u_alt)
        && !g.contains(v, u_alt)
        && !g.contains(w, u);
    if !ok {
        return Err(Error::PreconditionViolated(format!(
            "switching at v={v}, u={u}, u'={u_alt}, w={w} needs vu, wu' present, vu', wu absent and w > v"
        )));
    }
    let mut out = g.clone();
    out.edges.remove(&(v, u));
    out.edges.remove(&(w, u_alt));
    out.edges.insert((v, u_alt));
    out.edges.insert((w, u));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn switching_swaps_the_four_edges() {
        // v=0, w=1, u=0, u'=1: solid vu and wu', dashed vu' and wu
        let g = BipartiteGraph::new(2, 2, [(0, 0), (1, 1)]).unwrap();
        let h = apply_switching(&g, 0, 0, 1, 1).unwrap();
        assert_eq!(h, BipartiteGraph::new(2, 2, [(0, 1), (1, 0)]).unwrap());
        assert_eq!(apply_switching(&h, 0, 1, 0, 1).unwrap(), g);
        assert!(apply_switching(&g, 1, 1, 0, 0).is_err());
    }

    #[test]
    fn non_prefix_is_rejected() {
        let o = Oracle::unbounded();
        // vertex 1 has an edge while vertex 0 is still open
        let y_j = BipartiteGraph::new(3, 3, [(1, 0)]).unwrap();
        let r = o.enumerate_switching_sets(&y_j, (0, 0), (0, 1), &[2, 1, 1], &[2, 1, 1]);
        assert_eq!(r, Err(Error::InvalidPrefix));
    }
}

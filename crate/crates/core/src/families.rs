//! Parametrised instance families used by sweeps and convergence checks.

use crate::error::{Error, Result};
use crate::model::Instance;

/// `m` hyperedges with one tail vertex and two head vertices each, all on
/// distinct vertices: `n = 3m`, unit degrees, `mu = {(1, 2): m}`.
///
/// Every correction term of the estimate vanishes here and
/// `H = (2m)! / 2^m`.
pub fn disjoint_support(m: usize) -> Result<Instance> {
    if m == 0 {
        return Err(Error::EmptyProfile);
    }
    let n = 3 * m;
    let d_plus = (0..n).map(|i| usize::from(i < m)).collect();
    let d_minus = (0..n).map(|i| usize::from(i >= m)).collect();
    Instance::new(n, d_plus, d_minus, [((1, 2), m)].into())
}

/// One hyperedge with a two-vertex tail and `m - 1` with a one-vertex tail,
/// all heads of the complementary shape: `mu = {(2, 1): 1, (1, 2): m - 1}`.
/// Tail vertex 0 has degree 2, tail vertices `1..m` degree 1, and the
/// remaining `2m - 1` vertices are unit-degree heads; `n = 3m - 1`.
///
/// Defined for `m >= 2`; at `m = 1` the lone size-two tail would need two
/// distinct tail vertices.
pub fn irregular_tail(m: usize) -> Result<Instance> {
    if m < 2 {
        return Err(Error::PreconditionViolated(format!(
            "irregular_tail needs m >= 2, got {m}"
        )));
    }
    let n = 3 * m - 1;
    let mut d_plus = vec![0; n];
    d_plus[0] = 2;
    for d in d_plus.iter_mut().take(m).skip(1) {
        *d = 1;
    }
    let d_minus = (0..n).map(|i| usize::from(i >= m)).collect();
    Instance::new(n, d_plus, d_minus, [((2, 1), 1), ((1, 2), m - 1)].into())
}

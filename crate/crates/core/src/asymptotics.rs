//! Closed-form estimates and their error parameters, in natural-log space.
//!
//! Naming follows the bipartite setting: `(s, t)` are the left/right degrees
//! of the tail graph and `(x, y)` those of the head graph. For an instance
//! that is `(d+, k+, d-, k-)`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result, Side};
use crate::model::{kappa, moments, BipartiteGraph, Instance};
use crate::oracle::{ln_count, Oracle};

/// Log of a nonnegative quantity plus the error parameters that bound its
/// accuracy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogValue {
    /// Natural log; `-inf` when `is_zero`.
    pub log_value: f64,
    pub is_zero: bool,
    pub err_params: BTreeMap<String, f64>,
}

impl LogValue {
    fn finite(log_value: f64) -> Self {
        LogValue {
            log_value,
            is_zero: false,
            err_params: BTreeMap::new(),
        }
    }

    fn zero() -> Self {
        LogValue {
            log_value: f64::NEG_INFINITY,
            is_zero: true,
            err_params: BTreeMap::new(),
        }
    }

    fn with(mut self, name: &str, value: f64) -> Self {
        self.err_params.insert(name.to_string(), value);
        self
    }

    pub fn value(&self) -> f64 {
        if self.is_zero {
            0.0
        } else {
            self.log_value.exp()
        }
    }
}

fn lnf(k: usize) -> f64 {
    ln_factorial(k as u64)
}

fn sum_lnf(seq: &[usize]) -> f64 {
    seq.iter().map(|&a| lnf(a)).sum()
}

fn dot(a: &[usize], b: &[usize]) -> f64 {
    a.iter().zip(b).map(|(&p, &q)| (p * q) as f64).sum()
}

fn check_side(left: &[usize], right: &[usize], side: Side) -> Result<usize> {
    let l: usize = left.iter().sum();
    let r: usize = right.iter().sum();
    if l != r {
        return Err(Error::SumMismatch {
            side,
            degrees: l,
            profile: r,
        });
    }
    Ok(l)
}

fn check_lengths(s: &[usize], t: &[usize], x: &[usize], y: &[usize]) -> Result<()> {
    if s.len() != x.len() || t.len() != y.len() {
        return Err(Error::LengthMismatch {
            what: "pair degree sequences",
            len: s.len().max(t.len()),
            expected: x.len().max(y.len()),
        });
    }
    Ok(())
}

/// Log of the pair estimate `F^(s, t, x, y)`.
pub fn eval_fhat(s: &[usize], t: &[usize], x: &[usize], y: &[usize]) -> Result<LogValue> {
    check_lengths(s, t, x, y)?;
    let m_st = check_side(s, t, Side::Tail)?;
    let m_xy = check_side(x, y, Side::Head)?;
    if m_st == 0 || m_xy == 0 {
        return Err(Error::ZeroMass {
            plus: m_st,
            minus: m_xy,
        });
    }
    let (ms, mt, mx, my) = (moments(s), moments(t), moments(x), moments(y));
    let (a, b) = (m_st as f64, m_xy as f64);
    let lead = lnf(m_st) + lnf(m_xy) - sum_lnf(s) - sum_lnf(t) - sum_lnf(x) - sum_lnf(y);
    let corr = (ms.falling2 * mt.falling2) as f64 / (2.0 * a * a)
        + (mx.falling2 * my.falling2) as f64 / (2.0 * b * b)
        + dot(s, x) * dot(t, y) / (a * b);
    Ok(LogValue::finite(lead - corr))
}

/// Log of `F(d+, d-, mu)`, the estimate of the number of dihypergraphs.
pub fn eval_f(inst: &Instance) -> Result<LogValue> {
    let k = inst.k_vectors();
    let fhat = eval_fhat(&inst.d_plus, &k.k_plus, &inst.d_minus, &k.k_minus)?;
    let mu_term: f64 = inst.mu.values().map(|&c| lnf(c)).sum();
    let bundle = compute_error_bundle(inst)?;
    Ok(LogValue::finite(fhat.log_value - mu_term)
        .with("eta", bundle.eta)
        .with("eta_plus", bundle.eta_plus)
        .with("eta_minus", bundle.eta_minus)
        .with("eta_star_plus", bundle.eta_star_plus)
        .with("eta_star_minus", bundle.eta_star_minus))
}

/// Log of the estimate for `B^(A)(s, t, X)`, graphs with degrees `(s, t)`
/// avoiding every edge of `X`.
pub fn eval_mckay_ba(s: &[usize], t: &[usize], x: &BipartiteGraph) -> Result<LogValue> {
    let m_st = check_side(s, t, Side::Tail)?;
    if m_st == 0 {
        return Err(Error::ZeroMass { plus: 0, minus: 0 });
    }
    if x.n_left != s.len() || x.n_right != t.len() {
        return Err(Error::InvalidGraph(format!(
            "X is {} x {}, degrees are {} x {}",
            x.n_left,
            x.n_right,
            s.len(),
            t.len()
        )));
    }
    let (ms, mt) = (moments(s), moments(t));
    let (mx, my) = (moments(&x.left_degrees()), moments(&x.right_degrees()));
    let m = m_st as f64;
    let lead = lnf(m_st) - sum_lnf(s) - sum_lnf(t);
    let through_x: usize = x.edges.iter().map(|&(v, u)| s[v] * t[u]).sum();
    let corr = (ms.falling2 * mt.falling2) as f64 / (2.0 * m * m) + through_x as f64 / m;
    let delta = ((ms.max + mt.max) * (ms.max + mt.max + mx.max + my.max)) as f64;
    Ok(LogValue::finite(lead - corr)
        .with("delta", delta)
        .with("delta_sq_over_m", delta * delta / m))
}

/// Main term of `B^(I)(s, t, X + wz) / B^(I)(s, t, X)` for `wz` not in `X`.
/// The degrees of `X` play the role of `(x, y)`.
pub fn eval_ratio_main_term(
    s: &[usize],
    t: &[usize],
    x_graph: &BipartiteGraph,
    w: usize,
    z: usize,
) -> Result<LogValue> {
    if x_graph.n_left != s.len() || x_graph.n_right != t.len() || w >= s.len() || z >= t.len() {
        return Err(Error::PreconditionViolated("X, w and z must lie in the bipartition".into()));
    }
    if x_graph.contains(w, z) {
        return Err(Error::PreconditionViolated(format!("edge ({w}, {z}) already in X")));
    }
    let (x, y) = (x_graph.left_degrees(), x_graph.right_degrees());
    if s.iter().zip(&x).any(|(a, b)| a < b) || t.iter().zip(&y).any(|(a, b)| a < b) {
        return Err(Error::PreconditionViolated("X must fit inside (s, t)".into()));
    }
    let m_prime = check_side(s, t, Side::Tail)? - x_graph.len();
    if m_prime < 2 {
        return Err(Error::PreconditionViolated(format!("M' = {m_prime} < 2")));
    }
    let (smax, tmax) = (moments(s).max, moments(t).max);
    let dt = ((smax + tmax) * (smax + tmax)) as f64;
    let m = m_prime as f64;
    let out = if s[w] == x[w] || t[z] == y[z] {
        LogValue::zero()
    } else {
        let reduced: usize = x_graph.edges.iter().map(|&(v, u)| (s[v] - x[v]) * (t[u] - y[u])).sum();
        let lead = (((s[w] - x[w]) * (t[z] - y[z])) as f64 / m).ln();
        LogValue::finite(lead - reduced as f64 / (m * (m - 1.0)))
    };
    Ok(out.with("delta_tilde", dt).with("delta_tilde_sq_over_m", dt * dt / m))
}

/// `log B(x, y) - (sum s_v x_v)(sum t_u y_u) / (M_xy M_st)`, with `B(x, y)`
/// counted exactly.
pub fn eval_lemma10_rhs(s: &[usize], t: &[usize], x: &[usize], y: &[usize], oracle: &Oracle) -> Result<LogValue> {
    check_lengths(s, t, x, y)?;
    let m_st = check_side(s, t, Side::Tail)?;
    let m_xy = check_side(x, y, Side::Head)?;
    let (ms, mt, mx, my) = (moments(s), moments(t), moments(x), moments(y));
    let err = if m_st == 0 {
        0.0
    } else {
        let a = (ms.max * mt.max) as f64;
        let b = ((mx.max + my.max) as f64).powi(8);
        a * a * b * (m_xy + m_st) as f64 / (m_st as f64).powi(2)
    };
    let b = oracle.count_bipartite(x, y)?;
    let Some(log_b) = ln_count(&b) else {
        return Ok(LogValue::zero().with("xi_star_st", err));
    };
    let corr = if m_st == 0 || m_xy == 0 {
        0.0
    } else {
        dot(s, x) * dot(t, y) / (m_xy as f64 * m_st as f64)
    };
    Ok(LogValue::finite(log_b - corr).with("xi_star_st", err))
}

/// Error parameters of the bipartite-pair estimates for one orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BipartiteErrorParams {
    pub xi: f64,
    pub xi_s: f64,
    pub xi_t: f64,
    pub xi_star_st: f64,
    pub delta: f64,
    pub delta_tilde: f64,
}

pub fn bipartite_error_params(s: &[usize], t: &[usize], x: &[usize], y: &[usize]) -> Result<BipartiteErrorParams> {
    check_lengths(s, t, x, y)?;
    let m_st = check_side(s, t, Side::Tail)?;
    let m_xy = check_side(x, y, Side::Head)?;
    if m_st == 0 || m_xy == 0 {
        return Err(Error::ZeroMass {
            plus: m_st,
            minus: m_xy,
        });
    }
    let (ms, mt, mx, my) = (moments(s), moments(t), moments(x), moments(y));
    let (a, b) = (m_st as f64, m_xy as f64);
    let st = (ms.max + mt.max) as f64;
    let xy = (mx.max + my.max) as f64;
    let prod = (ms.max * mt.max) as f64;
    Ok(BipartiteErrorParams {
        xi: st.powi(4) / a + st * st * xy * xy / a + xy.powi(4) / b,
        xi_s: ms.n1 * (mt.max * mx.max) as f64 / a,
        xi_t: mt.n1 * (ms.max * my.max) as f64 / a,
        xi_star_st: prod * prod * xy.powi(8) * (a + b) / (a * a),
        delta: st * (st + xy),
        delta_tilde: st * st,
    })
}

/// Every error parameter of the enumeration theorems for one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBundle {
    pub eta: f64,
    pub eta_plus: f64,
    pub eta_minus: f64,
    pub eta_star_plus: f64,
    pub eta_star_minus: f64,
    /// Minimum over both orientations.
    pub xi: f64,
    pub xi_s: f64,
    pub xi_t: f64,
    pub xi_star_st: f64,
    pub delta: f64,
    pub delta_tilde: f64,
    /// `(d- max + k- max)^12 / M-`.
    pub side_minus: f64,
    /// `(d+ max + k+ max)^12 / M+`.
    pub side_plus: f64,
    /// `(s, t, x, y) = (d+, k+, d-, k-)`.
    pub forward: BipartiteErrorParams,
    /// `(s, t, x, y) = (d-, k-, d+, k+)`.
    pub reverse: BipartiteErrorParams,
}

impl ErrorBundle {
    pub fn theorem1(&self) -> f64 {
        self.eta + self.eta_plus.min(self.eta_minus)
    }

    pub fn theorem2a(&self) -> f64 {
        self.eta + self.eta_star_minus
    }

    pub fn theorem2b(&self) -> f64 {
        self.eta + self.eta_star_plus
    }
}

pub fn compute_error_bundle(inst: &Instance) -> Result<ErrorBundle> {
    let k = inst.k_vectors();
    let (dp, dm) = (moments(&inst.d_plus), moments(&inst.d_minus));
    let (kp, km) = (moments(&k.k_plus), moments(&k.k_minus));
    if dp.sum == 0 || dm.sum == 0 {
        return Err(Error::ZeroMass {
            plus: dp.sum,
            minus: dm.sum,
        });
    }
    let (mp, mm) = (dp.sum as f64, dm.sum as f64);
    let a = (dp.max + kp.max) as f64;
    let b = (dm.max + km.max) as f64;
    let ab2 = a * a * b * b;
    let eta_minus = (ab2
        + (dm.n1 * (dp.max * km.max) as f64).min(km.n1 * (dm.max * kp.max) as f64))
        / mm;
    let eta_plus = (ab2
        + (dp.n1 * (dm.max * kp.max) as f64).min(kp.n1 * (dp.max * km.max) as f64))
        / mp;
    let dk_minus = (dm.max * km.max) as f64;
    let dk_plus = (dp.max * kp.max) as f64;
    let forward = bipartite_error_params(&inst.d_plus, &k.k_plus, &inst.d_minus, &k.k_minus)?;
    let reverse = bipartite_error_params(&inst.d_minus, &k.k_minus, &inst.d_plus, &k.k_plus)?;
    Ok(ErrorBundle {
        eta: a.powi(4) / mp + b.powi(4) / mm,
        eta_plus,
        eta_minus,
        eta_star_minus: ab2 / mp + dk_minus * dk_minus * a.powi(8) * (mp + mm) / (mm * mm),
        eta_star_plus: ab2 / mm + dk_plus * dk_plus * b.powi(8) * (mp + mm) / (mp * mp),
        xi: forward.xi.min(reverse.xi),
        xi_s: forward.xi_s.min(reverse.xi_s),
        xi_t: forward.xi_t.min(reverse.xi_t),
        xi_star_st: forward.xi_star_st.min(reverse.xi_star_st),
        delta: forward.delta.min(reverse.delta),
        delta_tilde: forward.delta_tilde.min(reverse.delta_tilde),
        side_minus: b.powi(12) / mm,
        side_plus: a.powi(12) / mp,
        forward,
        reverse,
    })
}

/// Cut-off below which an error quantity counts as small.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub threshold: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { threshold: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremCheck {
    pub theorem: &'static str,
    pub quantity: f64,
    pub side_condition: Option<f64>,
    pub applicable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApplicabilityReport {
    pub kappa: usize,
    pub kappa_ok: bool,
    pub threshold: f64,
    pub theorems: Vec<TheoremCheck>,
}

impl ApplicabilityReport {
    pub fn any_applicable(&self) -> bool {
        self.theorems.iter().any(|t| t.applicable)
    }
}

pub fn applicability_report(inst: &Instance, thresholds: Thresholds) -> Result<ApplicabilityReport> {
    let bundle = compute_error_bundle(inst)?;
    let kappa = kappa(&inst.mu)?;
    let kappa_ok = kappa >= 3;
    let th = thresholds.threshold;
    let check = |theorem, quantity: f64, side: Option<f64>| TheoremCheck {
        theorem,
        quantity,
        side_condition: side,
        applicable: kappa_ok && quantity < th && side.is_none_or(|v| v < th),
    };
    Ok(ApplicabilityReport {
        kappa,
        kappa_ok,
        threshold: th,
        theorems: vec![
            check("1", bundle.theorem1(), None),
            check("2a", bundle.theorem2a(), Some(bundle.side_minus)),
            check("2b", bundle.theorem2b(), Some(bundle.side_plus)),
        ],
    })
}

/// Slow path: the leading factorial ratio and the exponent are built as exact
/// big integers and rationals, and only the final log is taken in floating
/// point.
pub mod exact {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive};

    use super::*;

    fn factorial(k: usize) -> BigUint {
        (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
    }

    fn prod_factorials(seq: &[usize]) -> BigUint {
        seq.iter().fold(BigUint::one(), |acc, &a| acc * factorial(a))
    }

    fn falling2(seq: &[usize]) -> BigInt {
        seq.iter().map(|&a| BigInt::from(a * a.saturating_sub(1))).sum()
    }

    fn exact_dot(a: &[usize], b: &[usize]) -> BigInt {
        a.iter().zip(b).map(|(&p, &q)| BigInt::from(p * q)).sum()
    }

    fn ratio(num: BigInt, den: BigInt) -> BigRational {
        BigRational::new(num, den)
    }

    /// Exact rational exponent and log of the exact factorial ratio of `F^`.
    pub fn log_fhat(s: &[usize], t: &[usize], x: &[usize], y: &[usize]) -> Result<f64> {
        check_lengths(s, t, x, y)?;
        let m_st = check_side(s, t, Side::Tail)?;
        let m_xy = check_side(x, y, Side::Head)?;
        if m_st == 0 || m_xy == 0 {
            return Err(Error::ZeroMass {
                plus: m_st,
                minus: m_xy,
            });
        }
        let num = factorial(m_st) * factorial(m_xy);
        let den = prod_factorials(s) * prod_factorials(t) * prod_factorials(x) * prod_factorials(y);
        let a = BigInt::from(m_st);
        let b = BigInt::from(m_xy);
        let two = BigInt::from(2);
        let exponent = -(ratio(falling2(s) * falling2(t), &two * &a * &a)
            + ratio(falling2(x) * falling2(y), &two * &b * &b)
            + ratio(exact_dot(s, x) * exact_dot(t, y), &a * &b));
        let lead = ln_count(&num).unwrap_or(0.0) - ln_count(&den).unwrap_or(0.0);
        Ok(lead + exponent.to_f64().unwrap_or(f64::NAN))
    }

    /// Same as [`log_fhat`] minus `log prod mu!`, computed exactly.
    pub fn log_f(inst: &Instance) -> Result<f64> {
        let k = inst.k_vectors();
        let mu: BigUint = inst.mu.values().fold(BigUint::one(), |acc, &c| acc * factorial(c));
        Ok(log_fhat(&inst.d_plus, &k.k_plus, &inst.d_minus, &k.k_minus)? - ln_count(&mu).unwrap_or(0.0))
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn exact_and_float_paths_agree() {
            let (s, t, x, y) = ([2, 1, 1, 2], [3, 3], [1, 2, 1, 0], [2, 2]);
            let fast = eval_fhat(&s, &t, &x, &y).unwrap().log_value;
            let slow = log_fhat(&s, &t, &x, &y).unwrap();
            assert!((fast - slow).abs() < 1e-10 * slow.abs().max(1.0));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_edge() -> Instance {
        Instance::new(3, vec![1, 0, 0], vec![0, 1, 1], [((1, 2), 1)].into()).unwrap()
    }

    #[test]
    fn single_edge_estimate_is_exact() {
        let f = eval_f(&single_edge()).unwrap();
        assert!(f.log_value.abs() < 1e-12);
    }

    #[test]
    fn mckay_examples() {
        let empty = BipartiteGraph::empty(2, 2);
        let v = eval_mckay_ba(&[1, 1], &[1, 1], &empty).unwrap();
        assert!((v.log_value - 2f64.ln()).abs() < 1e-12);
        let one = BipartiteGraph::new(2, 2, [(0, 0)]).unwrap();
        let v = eval_mckay_ba(&[1, 1], &[1, 1], &one).unwrap();
        assert!((v.log_value - (2f64.ln() - 0.5)).abs() < 1e-12);
        // (1 + 1)(1 + 1 + 1 + 1)
        assert_eq!(v.err_params["delta"], 8.0);
        assert_eq!(v.err_params["delta_sq_over_m"], 32.0);
    }

    #[test]
    fn ratio_main_term_examples() {
        let empty = BipartiteGraph::empty(2, 2);
        let r = eval_ratio_main_term(&[1, 1], &[1, 1], &empty, 0, 0).unwrap();
        assert!((r.value() - 0.5).abs() < 1e-12);
        let x = BipartiteGraph::new(3, 3, [(0, 0)]).unwrap();
        let r = eval_ratio_main_term(&[1, 2, 2], &[2, 2, 1], &x, 0, 1).unwrap();
        assert!(r.is_zero);
        assert!(eval_ratio_main_term(&[1, 2, 2], &[2, 2, 1], &x, 0, 0).is_err());
    }

    #[test]
    fn eta_of_unit_tails() {
        // d+max = k+max = 1, M+ = 2
        let inst = Instance::new(
            6,
            vec![1, 1, 0, 0, 0, 0],
            vec![0, 0, 1, 1, 1, 1],
            [((1, 2), 2)].into(),
        )
        .unwrap();
        let b = compute_error_bundle(&inst).unwrap();
        let head_part = 3f64.powi(4) / 4.0;
        assert!((b.eta - (16.0 / 2.0 + head_part)).abs() < 1e-12);
        // head sizes are regular, so N1(k-) = 0 kills the min
        assert!((b.eta_minus - 4.0 * 9.0 / 4.0).abs() < 1e-12);
    }

    #[test]
    fn kappa_two_is_never_applicable() {
        let inst = Instance::new(2, vec![1, 0], vec![0, 1], [((1, 1), 1)].into()).unwrap();
        let r = applicability_report(&inst, Thresholds { threshold: f64::INFINITY }).unwrap();
        assert!(!r.kappa_ok);
        assert!(!r.any_applicable());
    }

    #[test]
    fn lemma10_with_zero_tail_reduces_to_log_b() {
        let o = Oracle::unbounded();
        let v = eval_lemma10_rhs(&[0, 0], &[0, 0], &[1, 1], &[1, 1], &o).unwrap();
        assert!((v.log_value - 2f64.ln()).abs() < 1e-12);
    }
}

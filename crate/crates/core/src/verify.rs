//! Exhaustive identity suite: the exact counting routes must agree with each
//! other on every small instance.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::model::{BipartiteGraph, Instance};
use crate::oracle::Oracle;

/// Size limits of the generated corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CorpusLimits {
    pub max_n: usize,
    pub max_m: usize,
    pub max_degree: usize,
    /// Bound on `M+ + M-`.
    pub max_total_degree: usize,
    /// Bound on `|X|` in the include/avoid identity.
    pub max_x_edges: usize,
}

impl Default for CorpusLimits {
    fn default() -> Self {
        CorpusLimits {
            max_n: 5,
            max_m: 3,
            max_degree: 3,
            max_total_degree: 14,
            max_x_edges: 6,
        }
    }
}

fn multisets<T: Clone>(items: &[T], k: usize, from: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
    if k == 0 {
        out.push(cur.clone());
        return;
    }
    for i in from..items.len() {
        cur.push(items[i].clone());
        multisets(items, k - 1, i, cur, out);
        cur.pop();
    }
}

/// Nondecreasing lists of `n` vertex degree pairs with the given sums.
fn degree_pairs(
    options: &[(usize, usize)],
    n: usize,
    from: usize,
    plus: usize,
    minus: usize,
    cur: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if n == 0 {
        if plus == 0 && minus == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for i in from..options.len() {
        let (p, q) = options[i];
        if p > plus || q > minus {
            continue;
        }
        cur.push((p, q));
        degree_pairs(options, n - 1, i, plus - p, minus - q, cur, out);
        cur.pop();
    }
}

/// Every instance within `limits`, one per multiset of vertex degree pairs.
pub fn identity_corpus(limits: CorpusLimits) -> Vec<Instance> {
    let mut out = Vec::new();
    for m in 1..=limits.max_m {
        for n in 2..=limits.max_n {
            let shapes: Vec<(usize, usize)> = (1..n)
                .flat_map(|a| (1..=n - a).map(move |b| (a, b)))
                .collect();
            let mut profiles = Vec::new();
            multisets(&shapes, m, 0, &mut Vec::new(), &mut profiles);
            let cap = limits.max_degree.min(m);
            let options: Vec<(usize, usize)> = (0..=cap)
                .flat_map(|p| (0..=cap).map(move |q| (p, q)))
                .filter(|&(p, q)| p + q <= m)
                .collect();
            for profile in profiles {
                let plus: usize = profile.iter().map(|e| e.0).sum();
                let minus: usize = profile.iter().map(|e| e.1).sum();
                if plus + minus > limits.max_total_degree {
                    continue;
                }
                let mut mu = crate::model::Profile::new();
                for &shape in &profile {
                    *mu.entry(shape).or_insert(0) += 1;
                }
                let mut degs = Vec::new();
                degree_pairs(&options, n, 0, plus, minus, &mut Vec::new(), &mut degs);
                for d in degs {
                    let d_plus = d.iter().map(|p| p.0).collect();
                    let d_minus = d.iter().map(|p| p.1).collect();
                    if let Ok(inst) = Instance::new(n, d_plus, d_minus, mu.clone()) {
                        out.push(inst);
                    }
                }
            }
        }
    }
    out
}

/// Every subgraph of `K_{|s|,|t|}` with at most `max_edges` edges whose
/// degrees stay below `(s, t)`.
pub fn bounded_subgraphs(s: &[usize], t: &[usize], max_edges: usize) -> Vec<BipartiteGraph> {
    let cells: Vec<(usize, usize)> = (0..s.len())
        .flat_map(|v| (0..t.len()).map(move |u| (v, u)))
        .collect();
    let mut out = Vec::new();
    let mut left = vec![0; s.len()];
    let mut right = vec![0; t.len()];
    let mut cur = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        cells: &[(usize, usize)],
        i: usize,
        s: &[usize],
        t: &[usize],
        budget: usize,
        left: &mut [usize],
        right: &mut [usize],
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<BipartiteGraph>,
    ) {
        if i == cells.len() {
            out.push(BipartiteGraph {
                n_left: s.len(),
                n_right: t.len(),
                edges: cur.iter().copied().collect(),
            });
            return;
        }
        rec(cells, i + 1, s, t, budget, left, right, cur, out);
        let (v, u) = cells[i];
        if budget > 0 && left[v] < s[v] && right[u] < t[u] {
            left[v] += 1;
            right[u] += 1;
            cur.push((v, u));
            rec(cells, i + 1, s, t, budget - 1, left, right, cur, out);
            cur.pop();
            left[v] -= 1;
            right[u] -= 1;
        }
    }
    rec(&cells, 0, s, t, max_edges, &mut left, &mut right, &mut cur, &mut out);
    out
}

/// Tally of one identity over the corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub description: &'static str,
    pub cases: u64,
    pub failed: u64,
    /// The first few counterexamples.
    pub examples: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &'static str, description: &'static str) -> Self {
        CheckOutcome {
            name,
            description,
            cases: 0,
            failed: 0,
            examples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.examples.len() < 5 {
                self.examples.push(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub instances: usize,
    pub checks: Vec<CheckOutcome>,
    pub elapsed_secs: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Runs checks (a) to (f) over `corpus`.
pub fn run_identity_suite(corpus: &[Instance], oracle: &Oracle, max_x_edges: usize) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut a = CheckOutcome::new("a", "L = BP * P");
    let mut b = CheckOutcome::new("b", "L = H * prod mu!");
    let mut c = CheckOutcome::new("c", "BP(s,t,x,y) = BP(x,y,s,t)");
    let mut d = CheckOutcome::new("d", "B^(I)(s,t,X) = B^(A)(s-x,t-y,X)");
    let mut e = CheckOutcome::new("e", "BP = sum over X in B(x,y) of B^(A)(s,t,X)");
    let mut f = CheckOutcome::new("f", "direct H = L / prod mu!");
    let mut seen_st = BTreeSet::new();
    for inst in corpus {
        let k = inst.k_vectors();
        let (s, t, x, y) = (&inst.d_plus, &k.k_plus, &inst.d_minus, &k.k_minus);
        let tag = || format!("n={} d+={:?} d-={:?} mu={:?}", inst.n, inst.d_plus, inst.d_minus, inst.mu);

        let bp = oracle.count_bipartite_pairs(s, t, x, y)?;
        let labelled = oracle.count_labelled(s, t, x, y)?;
        if !bp.is_zero() {
            let p = oracle.prob_no_repeat(s, t, x, y)?;
            let lhs = BigRational::from_integer(labelled.clone().into());
            let rhs = BigRational::from_integer(bp.clone().into()) * p;
            a.record(lhs == rhs, || format!("{}: L={labelled} BP*P={rhs}", tag()));
        }

        let mu_fact = inst.mu.values().fold(BigUint::one(), |acc, &c| acc * factorial(c));
        let listed = BigUint::from(oracle.enumerate_dihypergraphs(inst)?.len());
        b.record(&listed * &mu_fact == labelled, || {
            format!("{}: L={labelled} H={listed} prod={mu_fact}", tag())
        });

        let swapped = oracle.count_bipartite_pairs(x, y, s, t)?;
        c.record(bp == swapped, || format!("{}: {bp} vs {swapped}", tag()));

        let by_sum = oracle.count_bipartite_pairs_by_sum(s, t, x, y)?;
        e.record(bp == by_sum, || format!("{}: {bp} vs {by_sum}", tag()));

        let direct = oracle.count_dihypergraphs_direct(inst)?;
        let exact = (&labelled % &mu_fact).is_zero();
        f.record(exact && direct == &labelled / &mu_fact, || {
            format!("{}: direct={direct} L={labelled} prod={mu_fact}", tag())
        });

        if seen_st.insert((s.clone(), t.clone())) {
            for xg in bounded_subgraphs(s, t, max_x_edges) {
                let (xl, xr) = (xg.left_degrees(), xg.right_degrees());
                let s_red: Vec<usize> = s.iter().zip(&xl).map(|(p, q)| p - q).collect();
                let t_red: Vec<usize> = t.iter().zip(&xr).map(|(p, q)| p - q).collect();
                let inc = oracle.count_bipartite_including(s, t, &xg)?;
                let avo = oracle.count_bipartite_avoiding(&s_red, &t_red, &xg)?;
                d.record(inc == avo, || {
                    format!("s={s:?} t={t:?} X={:?}: {inc} vs {avo}", xg.edges)
                });
            }
        }
    }
    Ok(SuiteReport {
        instances: corpus.len(),
        checks: vec![a, b, c, d, e, f],
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

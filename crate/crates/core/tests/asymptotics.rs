use std::collections::BTreeSet;

use dihyper_core::asymptotics::{
    applicability_report, compute_error_bundle, eval_f, eval_fhat, eval_lemma10_rhs, eval_mckay_ba,
    eval_ratio_main_term, exact, Thresholds,
};
use dihyper_core::families::disjoint_support;
use dihyper_core::oracle::ln_count;
use dihyper_core::{BipartiteGraph, Dihypergraph, Hyperedge, Instance, Oracle};
use proptest::prelude::*;

fn dihypergraph() -> impl Strategy<Value = Dihypergraph> {
    (3usize..=8).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0u8..3, n), 1..7).prop_map(move |rows| {
            let mut edges = BTreeSet::new();
            for row in rows {
                let tail: Vec<usize> = (0..n).filter(|&v| row[v] == 1).collect();
                let head: Vec<usize> = (0..n).filter(|&v| row[v] == 2).collect();
                if let Ok(e) = Hyperedge::new(tail, head) {
                    edges.insert(e);
                }
            }
            if edges.is_empty() {
                edges.insert(Hyperedge::new(vec![0], vec![1, 2]).unwrap());
            }
            Dihypergraph::new(n, edges).unwrap()
        })
    })
}

fn instance_of(h: &Dihypergraph) -> Instance {
    Instance::new(h.n, h.out_degrees(), h.in_degrees(), h.profile()).unwrap()
}

type PairCase<'a> = (&'a [usize], &'a [usize], &'a [usize], &'a [usize]);

fn ln_fact(k: usize) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Straight transcription of the theorem parameters, with no shared code.
fn reference_params(inst: &Instance) -> [f64; 5] {
    let k = inst.k_vectors();
    let max = |v: &[usize]| *v.iter().max().unwrap() as f64;
    let n1 = |v: &[usize]| {
        let mean = v.iter().sum::<usize>() as f64 / v.len() as f64;
        v.iter().map(|&a| (a as f64 - mean).abs()).sum::<f64>()
    };
    let (dp, dm, kp, km) = (&inst.d_plus, &inst.d_minus, &k.k_plus, &k.k_minus);
    let mp = dp.iter().sum::<usize>() as f64;
    let mm = dm.iter().sum::<usize>() as f64;
    let a = max(dp) + max(kp);
    let b = max(dm) + max(km);
    let eta = a.powi(4) / mp + b.powi(4) / mm;
    let eta_minus = (a * a * b * b + (n1(dm) * max(dp) * max(km)).min(n1(km) * max(dm) * max(kp))) / mm;
    let eta_plus = (a * a * b * b + (n1(dp) * max(dm) * max(kp)).min(n1(kp) * max(dp) * max(km))) / mp;
    let eta_star_minus = a * a * b * b / mp + (max(dm) * max(km)).powi(2) * a.powi(8) * (mp + mm) / (mm * mm);
    let eta_star_plus = a * a * b * b / mm + (max(dp) * max(kp)).powi(2) * b.powi(8) * (mp + mm) / (mp * mp);
    [eta, eta_plus, eta_minus, eta_star_plus, eta_star_minus]
}

proptest! {
    #[test]
    fn fhat_exceeds_f_by_log_mu_factorials(h in dihypergraph()) {
        let inst = instance_of(&h);
        let k = inst.k_vectors();
        let fhat = eval_fhat(&inst.d_plus, &k.k_plus, &inst.d_minus, &k.k_minus).unwrap().log_value;
        let f = eval_f(&inst).unwrap().log_value;
        let mu: f64 = inst.mu.values().map(|&c| ln_fact(c)).sum();
        prop_assert!(close(fhat - f, mu, 1e-10));
    }

    #[test]
    fn float_and_exact_paths_agree(h in dihypergraph()) {
        let inst = instance_of(&h);
        let fast = eval_f(&inst).unwrap().log_value;
        let slow = exact::log_f(&inst).unwrap();
        prop_assert!(close(fast, slow, 1e-10));
    }

    #[test]
    fn f_is_symmetric_under_reversal(h in dihypergraph()) {
        let inst = instance_of(&h);
        let a = eval_f(&inst).unwrap().log_value;
        let b = eval_f(&inst.reversed()).unwrap().log_value;
        prop_assert!(close(a, b, 1e-10));
    }

    #[test]
    fn error_bundle_matches_reference(h in dihypergraph()) {
        let inst = instance_of(&h);
        let b = compute_error_bundle(&inst).unwrap();
        let r = reference_params(&inst);
        let got = [b.eta, b.eta_plus, b.eta_minus, b.eta_star_plus, b.eta_star_minus];
        for (g, want) in got.iter().zip(r) {
            prop_assert!(close(*g, want, 1e-10), "{got:?} vs {r:?}");
        }
        for v in [b.xi, b.xi_s, b.xi_t, b.xi_star_st, b.delta, b.delta_tilde, b.side_plus, b.side_minus] {
            prop_assert!(v >= 0.0);
        }
    }

    #[test]
    fn error_bundle_ignores_vertex_order(h in dihypergraph(), rot in 0usize..8, rot2 in 0usize..8) {
        let inst = instance_of(&h);
        let mut d_plus = inst.d_plus.clone();
        let mut d_minus = inst.d_minus.clone();
        d_plus.rotate_left(rot % inst.n);
        d_minus.reverse();
        d_minus.rotate_left(rot2 % inst.n);
        let moved = Instance::new(inst.n, d_plus, d_minus, inst.mu.clone()).unwrap();
        prop_assert_eq!(compute_error_bundle(&inst).unwrap(), compute_error_bundle(&moved).unwrap());
    }
}

#[test]
fn estimate_is_exact_on_the_disjoint_support_family() {
    let o = Oracle::unbounded();
    for m in 1..=4 {
        let inst = disjoint_support(m).unwrap();
        let h = o.count_dihypergraphs(&inst).unwrap();
        let f = eval_f(&inst).unwrap();
        assert!((ln_count(&h).unwrap() - f.log_value).abs() < 1e-9);
    }
}

#[test]
fn mckay_tracks_exact_count_on_regular_family() {
    let o = Oracle::unbounded();
    let mut worst: f64 = 0.0;
    for (d, len) in [(1, 2), (1, 4), (2, 3), (2, 4), (2, 5), (3, 4), (2, 6)] {
        let s = vec![d; len];
        let empty = BipartiteGraph::empty(len, len);
        let exact = o.count_bipartite_avoiding(&s, &s, &empty).unwrap();
        let est = eval_mckay_ba(&s, &s, &empty).unwrap();
        let ratio = (ln_count(&exact).unwrap() - est.log_value).abs() / est.err_params["delta_sq_over_m"];
        worst = worst.max(ratio);
    }
    assert!(worst <= 10.0, "{worst}");
}

#[test]
fn mckay_depends_on_x_only_through_the_weighted_sum() {
    let (s, t) = ([2, 1, 1], [2, 1, 1]);
    // both X have one edge with s_v t_u = 2
    let a = BipartiteGraph::new(3, 3, [(0, 1)]).unwrap();
    let b = BipartiteGraph::new(3, 3, [(1, 0)]).unwrap();
    let ea = eval_mckay_ba(&s, &t, &a).unwrap().log_value;
    let eb = eval_mckay_ba(&s, &t, &b).unwrap().log_value;
    assert_eq!(ea, eb);
}

#[test]
fn ratio_main_term_against_exact_ratio() {
    let o = Oracle::unbounded();
    let s = [2, 2, 2, 2, 2, 2];
    let x = BipartiteGraph::new(6, 6, [(0, 0), (1, 1)]).unwrap();
    let main = eval_ratio_main_term(&s, &s, &x, 2, 3).unwrap();
    let mut bigger = x.clone();
    bigger.edges.insert((2, 3));
    let num = ln_count(&o.count_bipartite_including(&s, &s, &bigger).unwrap()).unwrap();
    let den = ln_count(&o.count_bipartite_including(&s, &s, &x).unwrap()).unwrap();
    let gap = (num - den - main.log_value).abs();
    assert!(gap <= main.err_params["delta_tilde_sq_over_m"], "{gap}");
    // X empty: no exponent at all
    let empty = BipartiteGraph::empty(6, 6);
    let m = eval_ratio_main_term(&s, &s, &empty, 0, 0).unwrap();
    assert!((m.value() - 4.0 / 12.0).abs() < 1e-12);
}

#[test]
fn lemma10_against_exact_weighted_sum() {
    let o = Oracle::unbounded();
    let cases: [PairCase; 3] = [
        (&[2, 2, 1, 1], &[2, 2, 2], &[1, 1, 1, 1], &[2, 1, 1]),
        (&[1, 1, 1, 1], &[2, 2], &[1, 1, 1, 1], &[2, 2]),
        (&[3, 2, 2, 1], &[2, 2, 2, 2], &[1, 1, 1, 2], &[2, 1, 1, 1]),
    ];
    for (s, t, x, y) in cases {
        let rhs = eval_lemma10_rhs(s, t, x, y, &o).unwrap();
        let exact = o.exp_neg_phi_sum(s, t, x, y).unwrap().ln();
        assert!((rhs.log_value - exact).abs() <= rhs.err_params["xi_star_st"], "{s:?} {t:?}");
    }
    let zero = eval_lemma10_rhs(&[0, 0], &[0, 0], &[1, 1], &[1, 1], &o).unwrap();
    assert!((zero.log_value - 2f64.ln()).abs() < 1e-12);
}

#[test]
fn applicability_thresholds() {
    let inst = disjoint_support(3).unwrap();
    let r = applicability_report(&inst, Thresholds { threshold: 0.0 }).unwrap();
    assert!(!r.any_applicable());
    let r = applicability_report(&inst, Thresholds { threshold: f64::INFINITY }).unwrap();
    assert!(r.kappa_ok && r.any_applicable());
    // the theorem 1 quantity shrinks along the family
    let q: Vec<f64> = (1..=20)
        .map(|m| compute_error_bundle(&disjoint_support(m).unwrap()).unwrap().theorem1())
        .collect();
    assert!(q.windows(2).all(|w| w[1] <= w[0]));
}

//! The `count` report.

use std::time::Instant;

use dihyper_core::asymptotics::{
    applicability_report, compute_error_bundle, eval_f, eval_fhat, ApplicabilityReport, ErrorBundle,
    Thresholds,
};
use dihyper_core::model::InstanceDoc;
use dihyper_core::oracle::ln_count;
use dihyper_core::{Error, Instance, Oracle};
use num_traits::Zero;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Asymptotic,
    Both,
}

impl Mode {
    fn exact(self) -> bool {
        self != Mode::Asymptotic
    }

    fn asymptotic(self) -> bool {
        self != Mode::Exact
    }
}

/// Exact counts as decimal strings; `p` is `num/den`.
#[derive(Debug, Clone, Serialize)]
#[allow(non_snake_case)]
pub struct ExactCounts {
    pub H: String,
    pub L: String,
    pub BP: String,
    pub B_plus: String,
    pub B_minus: String,
    pub Q: String,
    pub P: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Asymptotic {
    pub log_f: f64,
    pub log_fhat: f64,
    pub error_bundle: ErrorBundle,
    pub applicability: ApplicabilityReport,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Timings {
    pub exact_secs: Option<f64>,
    pub asymptotic_secs: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub instance: InstanceDoc,
    pub mode: Mode,
    pub budget: Option<u64>,
    pub exact: Option<ExactCounts>,
    /// `log H`, present when `H > 0`.
    pub log_h: Option<f64>,
    #[serde(flatten)]
    pub asymptotic: Option<Asymptotic>,
    /// `|log H - log F|`.
    pub relative_error: Option<f64>,
    pub budget_exceeded: bool,
    pub timings: Timings,
}

fn exact_counts(inst: &Instance, oracle: &Oracle) -> dihyper_core::Result<(ExactCounts, Option<f64>)> {
    let k = inst.k_vectors();
    let (s, t, x, y) = (&inst.d_plus, &k.k_plus, &inst.d_minus, &k.k_minus);
    let h = oracle.count_dihypergraphs(inst)?;
    let bp = oracle.count_bipartite_pairs(s, t, x, y)?;
    let p = if bp.is_zero() {
        None
    } else {
        let p = oracle.prob_no_repeat(s, t, x, y)?;
        Some(format!("{}/{}", p.numer(), p.denom()))
    };
    let counts = ExactCounts {
        L: oracle.count_labelled(s, t, x, y)?.to_string(),
        BP: bp.to_string(),
        B_plus: oracle.count_bipartite(s, t)?.to_string(),
        B_minus: oracle.count_bipartite(x, y)?.to_string(),
        Q: oracle.count_q(s, t, x, y)?.to_string(),
        P: p,
        H: h.to_string(),
    };
    Ok((counts, ln_count(&h)))
}

fn asymptotic(inst: &Instance, threshold: f64) -> dihyper_core::Result<Asymptotic> {
    let k = inst.k_vectors();
    Ok(Asymptotic {
        log_f: eval_f(inst)?.log_value,
        log_fhat: eval_fhat(&inst.d_plus, &k.k_plus, &inst.d_minus, &k.k_minus)?.log_value,
        error_bundle: compute_error_bundle(inst)?,
        applicability: applicability_report(inst, Thresholds { threshold })?,
    })
}

/// Builds the report. A budget overrun still yields a report, flagged in
/// `budget_exceeded`, together with the error.
pub fn run_count(inst: &Instance, mode: Mode, oracle: &Oracle, threshold: f64) -> (RunReport, Option<Error>) {
    let mut report = RunReport {
        instance: InstanceDoc::from(inst),
        mode,
        budget: oracle.budget(),
        exact: None,
        log_h: None,
        asymptotic: None,
        relative_error: None,
        budget_exceeded: false,
        timings: Timings::default(),
    };
    let mut failure = None;
    if mode.asymptotic() {
        let start = Instant::now();
        match asymptotic(inst, threshold) {
            Ok(a) => report.asymptotic = Some(a),
            Err(e) => return (report, Some(e)),
        }
        report.timings.asymptotic_secs = Some(start.elapsed().as_secs_f64());
    }
    if mode.exact() {
        let start = Instant::now();
        match exact_counts(inst, oracle) {
            Ok((counts, log_h)) => {
                report.exact = Some(counts);
                report.log_h = log_h;
            }
            Err(e) => {
                report.budget_exceeded = e.is_budget();
                failure = Some(e);
            }
        }
        report.timings.exact_secs = Some(start.elapsed().as_secs_f64());
    }
    if let (Some(h), Some(a)) = (report.log_h, &report.asymptotic) {
        report.relative_error = Some((h - a.log_f).abs());
    }
    (report, failure)
}

//! Family sweeps: one CSV row per instance.

use dihyper_core::asymptotics::{compute_error_bundle, eval_f};
use dihyper_core::families::{disjoint_support, irregular_tail};
use dihyper_core::model::InstanceDoc;
use dihyper_core::oracle::ln_count;
use dihyper_core::{Error, Instance, Oracle, Result};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Deserialize;

pub const HEADER: [&str; 12] = [
    "param",
    "M_plus",
    "M_minus",
    "log_H_exact",
    "log_F",
    "abs_log_ratio",
    "eta",
    "min_eta_pm",
    "eta_star_minus",
    "eta_star_plus",
    "ratio_to_bound",
    "H_exact",
];

#[derive(Debug, Clone, Deserialize)]
pub struct ExplicitRow {
    pub param: String,
    pub instance: InstanceDoc,
}

/// A family spec file.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    DisjointSupport { params: Vec<usize> },
    IrregularTail { params: Vec<usize> },
    Explicit { rows: Vec<ExplicitRow> },
}

impl FamilySpec {
    /// `(label, instance)` per row; a row that fails to build keeps its error.
    pub fn rows(self) -> Vec<(String, Result<Instance>)> {
        match self {
            FamilySpec::DisjointSupport { params } => {
                params.into_iter().map(|m| (m.to_string(), disjoint_support(m))).collect()
            }
            FamilySpec::IrregularTail { params } => {
                params.into_iter().map(|m| (m.to_string(), irregular_tail(m))).collect()
            }
            FamilySpec::Explicit { rows } => rows
                .into_iter()
                .map(|r| (r.param, r.instance.into_instance()))
                .collect(),
        }
    }
}

/// One evaluated row. Fields are `None` where the value is unavailable.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub param: String,
    pub m_plus: Option<usize>,
    pub m_minus: Option<usize>,
    pub log_h: Option<f64>,
    pub log_f: Option<f64>,
    pub abs_log_ratio: Option<f64>,
    pub eta: Option<f64>,
    pub min_eta_pm: Option<f64>,
    pub eta_star_minus: Option<f64>,
    pub eta_star_plus: Option<f64>,
    pub ratio_to_bound: Option<f64>,
    pub h: Option<String>,
    /// Why the row is incomplete.
    pub error: Option<Error>,
}

impl Row {
    fn empty(param: String) -> Self {
        Row {
            param,
            m_plus: None,
            m_minus: None,
            log_h: None,
            log_f: None,
            abs_log_ratio: None,
            eta: None,
            min_eta_pm: None,
            eta_star_minus: None,
            eta_star_plus: None,
            ratio_to_bound: None,
            h: None,
            error: None,
        }
    }

    /// A row succeeds once its asymptotic side is filled in.
    pub fn succeeded(&self) -> bool {
        self.log_f.is_some()
    }

    pub fn record(&self) -> Vec<String> {
        let f = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| x.to_string());
        let u = |v: Option<usize>| v.map_or_else(|| "NA".to_string(), |x| x.to_string());
        vec![
            self.param.clone(),
            u(self.m_plus),
            u(self.m_minus),
            f(self.log_h),
            f(self.log_f),
            f(self.abs_log_ratio),
            f(self.eta),
            f(self.min_eta_pm),
            f(self.eta_star_minus),
            f(self.eta_star_plus),
            f(self.ratio_to_bound),
            self.h.clone().unwrap_or_else(|| "NA".to_string()),
        ]
    }
}

pub fn evaluate(param: String, inst: Result<Instance>, oracle: &Oracle) -> Row {
    let mut row = Row::empty(param);
    let inst = match inst {
        Ok(i) => i,
        Err(e) => {
            row.error = Some(e);
            return row;
        }
    };
    row.m_plus = Some(inst.m_plus());
    row.m_minus = Some(inst.m_minus());
    let asym = eval_f(&inst).and_then(|f| Ok((f, compute_error_bundle(&inst)?)));
    match asym {
        Ok((f, b)) => {
            row.log_f = Some(f.log_value);
            row.eta = Some(b.eta);
            row.min_eta_pm = Some(b.eta_plus.min(b.eta_minus));
            row.eta_star_minus = Some(b.eta_star_minus);
            row.eta_star_plus = Some(b.eta_star_plus);
        }
        Err(e) => {
            row.error = Some(e);
            return row;
        }
    }
    match oracle.count_dihypergraphs(&inst) {
        Ok(h) => {
            row.log_h = ln_count(&h);
            if !h.is_zero() {
                let gap = (row.log_h.unwrap() - row.log_f.unwrap()).abs();
                row.abs_log_ratio = Some(gap);
                let bound = row.eta.unwrap() + row.min_eta_pm.unwrap();
                row.ratio_to_bound = Some(gap / bound);
            }
            row.h = Some(h.to_string());
        }
        Err(e) => row.error = Some(e),
    }
    row
}

/// Evaluates every row in parallel, keeping input order.
pub fn run_sweep(spec: FamilySpec, oracle: &Oracle) -> Vec<Row> {
    spec.rows()
        .into_par_iter()
        .map(|(param, inst)| evaluate(param, inst, oracle))
        .collect()
}

pub fn write_csv<W: std::io::Write>(rows: &[Row], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

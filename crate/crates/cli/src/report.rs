//! Stable machine-readable output schemas. JSON field order follows struct
//! order and every value is deterministic for fixed inputs and flags, so
//! outputs are byte-identical across runs and thread counts. Timings never
//! appear here; they go to stderr in text mode.

use movoid_core::admissibility::AdmissibilityReport;
use movoid_core::quadric::Quadric;
use movoid_core::search::{SearchOutcome, SearchStatus, SearchWitness};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Serialize)]
pub struct TableRowJson {
    pub q: u64,
    pub r: u32,
    pub case: &'static str,
    pub residues: Vec<u64>,
    pub lb_new: u64,
    pub lb_old: u64,
    pub admissible: Vec<u64>,
    pub nontrivial: Vec<u64>,
}

impl TableRowJson {
    pub fn from_report(rep: &AdmissibilityReport) -> TableRowJson {
        TableRowJson {
            q: rep.q,
            r: rep.r,
            case: rep.case.label(),
            residues: rep.residues.clone(),
            lb_new: rep.lower_bound_new,
            lb_old: rep.lower_bound_old,
            admissible: rep.admissible.iter().map(|v| v.m).collect(),
            nontrivial: rep.nontrivial(),
        }
    }

    pub const CSV_HEADER: &'static str = "q,r,case,residues,lb_new,lb_old,admissible";

    pub fn csv_row(&self) -> String {
        let join = |v: &[u64]| v.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ");
        format!(
            "{},{},{},{},{},{},{}",
            self.q,
            self.r,
            self.case,
            join(&self.residues),
            self.lb_new,
            self.lb_old,
            join(&self.admissible)
        )
    }
}

#[derive(Serialize)]
pub struct BuildJson {
    pub command: &'static str,
    pub q: u64,
    pub r: usize,
    pub points: usize,
    pub lines_through_point: usize,
    pub generators: u64,
}

#[derive(Serialize)]
pub struct VerifyJson {
    pub command: &'static str,
    pub valid: bool,
    pub claim: String,
    pub q: u64,
    pub r: usize,
    pub rows: usize,
    pub m: Option<i64>,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
pub struct ReduceJson {
    pub command: &'static str,
    pub base_q: u64,
    pub e: u32,
    pub source_r: usize,
    pub source_m: i64,
    pub target_r: usize,
    pub m: i64,
    pub size: usize,
    /// number of spread lines when the target has rank 3 and the contained
    /// lines partition the ovoid
    pub spread_lines: Option<usize>,
    pub one_system: Option<bool>,
    pub points: Vec<String>,
}

#[derive(Serialize)]
pub struct SearchJson {
    pub command: &'static str,
    pub q: u64,
    pub r: usize,
    pub mode: String,
    pub m: Option<i64>,
    pub status: String,
    pub nodes: u64,
    pub witness_points: Option<Vec<String>>,
    pub witness_lines: Option<Vec<Vec<String>>>,
}

pub fn status_label(s: SearchStatus) -> &'static str {
    match s {
        SearchStatus::Found => "found",
        SearchStatus::ExhaustedNone => "exhausted-none",
        SearchStatus::BudgetExceeded => "budget-exceeded",
    }
}

pub fn coord_string(q: &Quadric, qi: u32) -> String {
    q.point_coords(qi).iter().map(|e| e.0.to_string()).collect::<Vec<_>>().join(",")
}

impl SearchJson {
    pub fn build(
        q: &Quadric,
        mode: &str,
        m: Option<i64>,
        outcome: &SearchOutcome,
    ) -> SearchJson {
        let (witness_points, witness_lines) = match &outcome.witness {
            Some(SearchWitness::Points(pts)) => {
                (Some(pts.iter().map(|&p| coord_string(q, p)).collect()), None)
            }
            Some(SearchWitness::Lines(lines)) => (
                None,
                Some(
                    lines
                        .iter()
                        .map(|l| l.iter().map(|&p| coord_string(q, p)).collect())
                        .collect(),
                ),
            ),
            None => (None, None),
        };
        SearchJson {
            command: "search",
            q: q.q(),
            r: q.rank(),
            mode: mode.to_string(),
            m,
            status: status_label(outcome.status).to_string(),
            nodes: outcome.nodes,
            witness_points,
            witness_lines,
        }
    }
}

#[derive(Serialize)]
pub struct StatsJson {
    pub command: &'static str,
    pub q: u64,
    pub r: usize,
    pub m: i64,
    pub base_points: usize,
    pub sum_t: i64,
    pub sum_t_sq: i64,
    pub sum_t_t_minus_1: i64,
    /// distinct intersection histograms with the number of base points
    /// exhibiting each
    pub histograms: Vec<HistogramJson>,
}

#[derive(Serialize)]
pub struct HistogramJson {
    pub counts: BTreeMap<String, u64>,
    pub base_points: usize,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialization cannot fail")
}

//! CSV and JSONL result writers. Reals are printed with 6 decimals.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::eval::{BudgetCurve, CorrelationReport};
use crate::router::Decision;

pub const CURVE_HEADER: &str = "large_fraction,hit_at_1,avg_cost";
pub const CORRELATION_HEADER: &str = "group,count,mean_rank,q1,median,q3,min_difficulty,max_difficulty";

pub fn write_curve_csv<W: Write>(mut w: W, curve: &BudgetCurve) -> io::Result<()> {
    writeln!(w, "{CURVE_HEADER}")?;
    for p in curve.points() {
        writeln!(w, "{:.6},{:.6},{:.6}", p.large_fraction, p.hit_at_1, p.avg_cost)?;
    }
    w.flush()
}

pub fn write_correlation_csv<W: Write>(mut w: W, report: &CorrelationReport) -> io::Result<()> {
    writeln!(w, "{CORRELATION_HEADER}")?;
    for g in &report.groups {
        let [q1, q2, q3] = g.answer_rank_quartiles;
        writeln!(
            w,
            "{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
            g.group_index, g.count, g.answer_rank_mean, q1, q2, q3, g.difficulty_min, g.difficulty_max
        )?;
    }
    w.flush()
}

/// One line of `decisions.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionLine {
    pub id: String,
    pub arm: String,
    pub difficulty: f64,
}

impl DecisionLine {
    pub fn new(id: impl Into<String>, decision: &Decision) -> Self {
        Self { id: id.into(), arm: decision.arm_name.clone(), difficulty: decision.difficulty.value() }
    }

    pub fn to_json_line(&self) -> String {
        // Plain struct of strings and a finite f64 always serializes.
        let mut s = serde_json::to_string(self).unwrap_or_default();
        s.push('\n');
        s
    }
}

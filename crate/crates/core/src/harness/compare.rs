//! Data passes needed to reach a grid of training-loss thresholds.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim::TraceRecord;

/// Quantity whose ratio to its initial value is compared with the thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ExcessMetric {
    /// `R_S^r(w_t) - R_S^r(w*)`, when a reference minimizer is known.
    Suboptimality,
    /// `R_S^r(w_t) - floor`, where `floor` is the lowest regularized risk
    /// recorded by any of the compared runs. Used without a reference,
    /// e.g. for the MLP.
    RiskGap { floor: f64 },
}

impl ExcessMetric {
    /// Suboptimality when every record carries it, otherwise the gap to the
    /// best risk seen across all traces.
    pub fn detect<'a>(traces: impl IntoIterator<Item = &'a [TraceRecord]> + Clone) -> Self {
        let all = traces
            .clone()
            .into_iter()
            .all(|rs| !rs.is_empty() && rs.iter().all(|r| r.suboptimality.is_some()));
        if all {
            ExcessMetric::Suboptimality
        } else {
            let floor = traces
                .into_iter()
                .flatten()
                .map(|r| r.reg_risk)
                .fold(f64::INFINITY, f64::min);
            ExcessMetric::RiskGap { floor }
        }
    }

    fn value(self, r: &TraceRecord) -> f64 {
        match self {
            ExcessMetric::Suboptimality => r.suboptimality.unwrap_or(f64::NAN),
            ExcessMetric::RiskGap { floor } => r.reg_risk - floor,
        }
    }
}

/// Data passes of the first record whose metric is at most `threshold`
/// times the metric of the first record.
pub fn passes_to_threshold(records: &[TraceRecord], threshold: f64, metric: ExcessMetric) -> Option<f64> {
    let first = records.first()?;
    let start = metric.value(first);
    records
        .iter()
        .find(|r| metric.value(r) <= threshold * start)
        .map(|r| r.data_passes)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRatio {
    pub numerator: String,
    pub denominator: String,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub threshold: f64,
    /// `None` means "not reached".
    pub passes: BTreeMap<String, Option<f64>>,
    pub ratios: Vec<PairRatio>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSummary {
    pub threshold: f64,
    /// Labels sorted by passes, fewest first; unreached ones are left out.
    pub ordering: Vec<(String, f64)>,
    /// All labels tied for the fewest passes.
    pub winners: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub metric: ExcessMetric,
    pub rows: Vec<ThresholdRow>,
    /// Loosest threshold that some algorithm reached.
    pub early_phase: Option<PhaseSummary>,
    /// Tightest threshold that every algorithm reached.
    pub late_phase: Option<PhaseSummary>,
}

fn summary(row: &ThresholdRow) -> PhaseSummary {
    let mut ordering: Vec<(String, f64)> =
        row.passes.iter().filter_map(|(k, v)| v.map(|p| (k.clone(), p))).collect();
    ordering.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    let best = ordering.first().map(|o| o.1);
    let winners = ordering.iter().filter(|o| Some(o.1) == best).map(|o| o.0.clone()).collect();
    PhaseSummary { threshold: row.threshold, ordering, winners }
}

/// Compares labelled traces of the same problem over a threshold grid.
/// Thresholds are sorted from loosest to tightest.
pub fn compare_report(traces: &[(String, Vec<TraceRecord>)], thresholds: &[f64]) -> Result<ComparisonReport> {
    if traces.len() < 2 {
        return Err(Error::arg("comparison needs at least two traces"));
    }
    if thresholds.is_empty() || thresholds.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::arg("thresholds must be positive and non-empty"));
    }
    let metric = ExcessMetric::detect(traces.iter().map(|(_, r)| r.as_slice()));
    let mut grid = thresholds.to_vec();
    grid.sort_by(|a, b| b.total_cmp(a));
    grid.dedup();

    let rows: Vec<ThresholdRow> = grid
        .iter()
        .map(|&threshold| {
            let passes: BTreeMap<String, Option<f64>> = traces
                .iter()
                .map(|(label, rs)| (label.clone(), passes_to_threshold(rs, threshold, metric)))
                .collect();
            let mut ratios = Vec::new();
            for (a, pa) in &passes {
                for (b, pb) in &passes {
                    if a < b {
                        if let (Some(x), Some(y)) = (pa, pb) {
                            let ratio = if *x == *y { 1.0 } else { x / y };
                            ratios.push(PairRatio { numerator: a.clone(), denominator: b.clone(), ratio });
                        }
                    }
                }
            }
            ThresholdRow { threshold, passes, ratios }
        })
        .collect();
    let early_phase = rows.iter().find(|r| r.passes.values().any(Option::is_some)).map(summary);
    let late_phase = rows
        .iter()
        .rev()
        .find(|r| r.passes.values().all(Option::is_some))
        .map(summary);
    Ok(ComparisonReport { metric, rows, early_phase, late_phase })
}

impl ComparisonReport {
    /// Plain-text table: one row per threshold, one column per trace.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let labels: Vec<&String> = self.rows.first().map(|r| r.passes.keys().collect()).unwrap_or_default();
        let _ = write!(s, "{:>10}", "threshold");
        for l in &labels {
            let _ = write!(s, " {l:>14}");
        }
        s.push('\n');
        for row in &self.rows {
            let _ = write!(s, "{:>10.0e}", row.threshold);
            for l in &labels {
                match row.passes[*l] {
                    Some(p) => {
                        let _ = write!(s, " {p:>14.3}");
                    }
                    None => {
                        let _ = write!(s, " {:>14}", "not reached");
                    }
                }
            }
            s.push('\n');
        }
        for (name, phase) in [("early", &self.early_phase), ("late", &self.late_phase)] {
            if let Some(p) = phase {
                let order: Vec<String> = p.ordering.iter().map(|(l, v)| format!("{l} ({v:.3})")).collect();
                let _ = writeln!(s, "{name} phase @ {:.0e}: {}", p.threshold, order.join(" < "));
            }
        }
        s
    }
}

use serde::{Deserialize, Serialize};

use dualcen::centrality::{DualCentralityResult, RankTable, VerifyReport};
use dualcen::spectral::PerronPair;

/// Machine-readable centrality report. Field order is fixed; vertex ids in
/// `ranking` are 1-based.
#[derive(Debug, Serialize, Deserialize)]
pub struct CentralityReport {
    pub n: usize,
    pub m: usize,
    pub lambda_s: f64,
    pub lambda_d: f64,
    pub x_s: Vec<f64>,
    pub x_d: Vec<f64>,
    pub ranking: Vec<Vec<usize>>,
    pub residual_standard: f64,
    pub residual_dual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_match: Option<bool>,
}

impl CentralityReport {
    pub fn new(
        m: usize,
        result: &DualCentralityResult,
        table: &RankTable,
        table_match: Option<bool>,
    ) -> Self {
        CentralityReport {
            n: result.vertex_count(),
            m,
            lambda_s: result.lambda_s,
            lambda_d: result.lambda_d,
            x_s: result.x_s.clone(),
            x_d: result.x_d.clone(),
            ranking: one_based(&table.groups),
            residual_standard: result.provenance.residual_standard,
            residual_dual: result.provenance.residual_dual,
            table_match,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SpectralReport {
    pub n: usize,
    pub m: usize,
    pub lambda_s: f64,
    pub x_s: Vec<f64>,
    pub iterations: usize,
    pub gap: f64,
    pub residual: f64,
}

impl SpectralReport {
    pub fn new(m: usize, pair: &PerronPair, residual: f64) -> Self {
        SpectralReport {
            n: pair.x_s.len(),
            m,
            lambda_s: pair.lambda_s,
            x_s: pair.x_s.clone(),
            iterations: pair.iterations,
            gap: pair.gap,
            residual,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RankReport {
    pub n: usize,
    pub m: usize,
    pub ranking: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize)]
pub struct VerifyCheckReport {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyReportOut {
    pub pass: bool,
    pub checks: Vec<VerifyCheckReport>,
}

impl VerifyReportOut {
    pub fn new(report: &VerifyReport) -> Self {
        VerifyReportOut {
            pass: report.pass(),
            checks: report
                .checks
                .iter()
                .map(|c| VerifyCheckReport {
                    name: c.name.to_string(),
                    value: c.value,
                    threshold: c.threshold,
                    pass: c.pass,
                })
                .collect(),
        }
    }
}

pub fn one_based(groups: &[Vec<usize>]) -> Vec<Vec<usize>> {
    groups
        .iter()
        .map(|g| g.iter().map(|v| v + 1).collect())
        .collect()
}

/// Fixed-precision decimal with `-0.0000` normalized to `0.0000`.
pub fn fmt_num(v: f64, precision: usize) -> String {
    let mut s = format!("{v:.precision$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s.remove(0);
    }
    s
}

/// Two-row `vertex / value` table in the style of the experiment tables.
pub fn score_table(rows: &[(&str, &[f64])], precision: usize) -> String {
    let n = rows.first().map_or(0, |(_, v)| v.len());
    let label_width = rows
        .iter()
        .map(|(l, _)| l.len())
        .max()
        .unwrap_or(0)
        .max("vertex".len());
    let mut cells: Vec<Vec<String>> = Vec::new();
    cells.push((1..=n).map(|i| i.to_string()).collect());
    for (_, values) in rows {
        cells.push(values.iter().map(|&v| fmt_num(v, precision)).collect());
    }
    let col_width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
    let mut out = String::new();
    let labels: Vec<&str> = std::iter::once("vertex")
        .chain(rows.iter().map(|(l, _)| *l))
        .collect();
    for (label, row) in labels.iter().zip(&cells) {
        out.push_str(&format!("{label:<label_width$}"));
        for cell in row {
            out.push_str(&format!("  {cell:>col_width$}"));
        }
        out.push('\n');
    }
    out
}

pub fn ranking_line(table: &RankTable) -> String {
    table.display_one_based()
}

/// CSV rows `vertex,x_s,x_d,rank_group` (1-based ids and groups).
pub fn centrality_csv(
    result: &DualCentralityResult,
    table: &RankTable,
    precision: usize,
) -> String {
    let mut out = String::from("vertex,x_s,x_d,rank_group\n");
    for v in 0..result.vertex_count() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            v + 1,
            fmt_num(result.x_s[v], precision),
            fmt_num(result.x_d[v], precision),
            table.group_of(v).expect("groups partition the vertices"),
        ));
    }
    out
}

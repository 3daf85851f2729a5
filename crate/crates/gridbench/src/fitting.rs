//! Scaling-exponent estimation: least-squares slope of log2(metric) against
//! log2(n) over the rows of a sweep CSV, grouped by everything that is not
//! the size.

use crate::runner::CliError;
use std::collections::BTreeMap;
use std::path::Path;

/// Metrics `fit` understands, by CSV column name.
pub const FIT_METRICS: [&str; 4] = ["sym_Q", "asym_Q", "work", "span"];

/// One fitted group: all rows sharing (kind, M, B, omega, policy).
#[derive(Debug, Clone, PartialEq)]
pub struct FitLine {
    pub kind: String,
    pub cache_entries: String,
    pub line_entries: String,
    pub omega: String,
    pub policy: String,
    pub metric: String,
    pub sizes: Vec<u64>,
    pub slope: f64,
}

impl std::fmt::Display for FitLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sizes: Vec<String> = self.sizes.iter().map(|n| n.to_string()).collect();
        write!(
            f,
            "kind={} policy={} M={} B={} omega={} metric={} sizes=[{}] slope={:.4}",
            self.kind,
            self.policy,
            self.cache_entries,
            self.line_entries,
            self.omega,
            self.metric,
            sizes.join(","),
            self.slope
        )
    }
}

/// Plain least-squares slope.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Reads a sweep CSV and fits the named metric per group. Requires at
/// least three sizes in some group; sub-threshold groups are skipped.
pub fn fit_csv(path: &Path, metric: &str) -> Result<Vec<FitLine>, CliError> {
    if !FIT_METRICS.contains(&metric) {
        return Err(CliError::Usage(format!(
            "unknown metric `{metric}` (want one of {})",
            FIT_METRICS.join(", ")
        )));
    }
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Io(format!("bad CSV header: {e}")))?
        .clone();
    let col = |name: &str| -> Result<usize, CliError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Usage(format!("CSV lacks a `{name}` column")))
    };
    let kind_col = col("kind")?;
    let n_col = col("n")?;
    let m_col = col("M")?;
    let b_col = col("B")?;
    let omega_col = col("omega")?;
    let policy_col = col("policy")?;
    let metric_col = col(metric)?;

    // Group key -> ascending (n, metric) samples.
    let mut groups: BTreeMap<(String, String, String, String, String), Vec<(u64, f64)>> =
        BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Io(format!("bad CSV record: {e}")))?;
        let field = |i: usize| record.get(i).unwrap_or("").to_string();
        let n: u64 = field(n_col)
            .parse()
            .map_err(|e| CliError::Usage(format!("bad n field: {e}")))?;
        let value: f64 = field(metric_col)
            .parse()
            .map_err(|e| CliError::Usage(format!("bad {metric} field: {e}")))?;
        let key = (field(kind_col), field(m_col), field(b_col), field(omega_col), field(policy_col));
        groups.entry(key).or_default().push((n, value));
    }

    let mut lines = Vec::new();
    for ((kind, m, b, omega, policy), mut samples) in groups {
        samples.sort_unstable_by_key(|(n, _)| *n);
        samples.dedup_by_key(|(n, _)| *n);
        if samples.len() < 3 {
            continue;
        }
        let xs: Vec<f64> = samples.iter().map(|(n, _)| (*n as f64).log2()).collect();
        let ys: Vec<f64> = samples.iter().map(|(_, v)| v.max(f64::MIN_POSITIVE).log2()).collect();
        lines.push(FitLine {
            kind,
            cache_entries: m,
            line_entries: b,
            omega,
            policy,
            metric: metric.to_string(),
            sizes: samples.iter().map(|(n, _)| *n).collect(),
            slope: least_squares_slope(&xs, &ys),
        });
    }
    if lines.is_empty() {
        return Err(CliError::Usage(
            "need at least three distinct sizes per group to fit an exponent".into(),
        ));
    }
    Ok(lines)
}

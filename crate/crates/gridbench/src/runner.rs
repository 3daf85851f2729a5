//! Sweep execution: build instances, solve them under the configured cache
//! and policy, cross-check against the reference evaluator when feasible,
//! and serialize rows as CSV.

use crate::config::{ExperimentConfig, Policy};
use gridsim::{cross_check, predict_q, solve, CacheConfig, Instance, Kind, WeightPreset};
use std::fmt;
use std::io::Write as _;
use std::path::Path;

/// Harness failure with a stable process exit status:
/// usage/cap errors exit 2, I/O failures exit 1, verification mismatches 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
            CliError::Mismatch(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Mismatch(m) => write!(f, "verification mismatch: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// The fixed CSV column order.
pub const CSV_HEADER: &str = "kind,n,M,B,omega,policy,read_transfers,write_transfers,sym_Q,\
                              asym_Q,work,span,peak_temp_entries,predicted_Q,oracle_checked";

/// One measured (kind, n, omega, policy) cell.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub kind: Kind,
    pub n: usize,
    pub cache_entries: usize,
    pub line_entries: usize,
    pub omega: f64,
    pub policy: Policy,
    pub read_transfers: u64,
    pub write_transfers: u64,
    pub sym_q: u64,
    pub asym_q: f64,
    pub work: u64,
    pub span: u64,
    pub peak_temp_entries: usize,
    pub predicted_q: f64,
    pub oracle_checked: bool,
}

impl SweepRow {
    /// Field strings in `CSV_HEADER` order. Floats use Rust's shortest
    /// round-trip formatting, so records are bit-reproducible.
    pub fn record(&self) -> Vec<String> {
        vec![
            self.kind.to_string(),
            self.n.to_string(),
            self.cache_entries.to_string(),
            self.line_entries.to_string(),
            self.omega.to_string(),
            self.policy.to_string(),
            self.read_transfers.to_string(),
            self.write_transfers.to_string(),
            self.sym_q.to_string(),
            self.asym_q.to_string(),
            self.work.to_string(),
            self.span.to_string(),
            self.peak_temp_entries.to_string(),
            self.predicted_q.to_string(),
            self.oracle_checked.to_string(),
        ]
    }
}

/// Runs every (size, omega) cell of the experiment on a fresh simulator,
/// cross-checking against the reference evaluator whenever the size is
/// within the kind's oracle cap.
pub fn execute(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>, CliError> {
    cfg.validate()?;
    let kind = cfg.parsed_kind()?;
    let preset = cfg.parsed_preset()?;
    let mut rows = Vec::with_capacity(cfg.sizes.len() * cfg.omegas.len());
    for &n in &cfg.sizes {
        let inst = Instance::generate(kind, n, preset, cfg.seed);
        for &omega in &cfg.omegas {
            let cache = CacheConfig::new(cfg.cache_entries, cfg.line_entries, omega)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let opts = cfg.exec_options(omega);
            let sol = solve(&inst, cache, &opts)
                .map_err(|e| CliError::Usage(format!("{kind} n={n}: {e}")))?;
            let oracle_checked = n <= kind.oracle_cap();
            if oracle_checked {
                cross_check(&inst, &sol.values, &sol.shape)
                    .map_err(|e| CliError::Mismatch(format!("{kind} n={n}: {e}")))?;
            }
            let predicted_q = predict_q(
                kind.grid_k(),
                sol.report.work as f64,
                cfg.cache_entries,
                cfg.line_entries,
                omega,
                cfg.policy == Policy::Asym,
            );
            rows.push(SweepRow {
                kind,
                n,
                cache_entries: cfg.cache_entries,
                line_entries: cfg.line_entries,
                omega,
                policy: cfg.policy,
                read_transfers: sol.report.read_transfers,
                write_transfers: sol.report.write_transfers,
                sym_q: sol.report.sym_q,
                asym_q: sol.report.asym_q,
                work: sol.report.work,
                span: sol.report.span,
                peak_temp_entries: sol.report.peak_temp_entries,
                predicted_q,
                oracle_checked,
            });
        }
    }
    Ok(rows)
}

/// The full CSV text (header plus one line per row, `\n` separators).
pub fn csv_string(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.record().join(","));
        out.push('\n');
    }
    out
}

/// Writes the CSV file atomically enough for our purposes: full buffer,
/// single write call.
pub fn write_csv(rows: &[SweepRow], path: &Path) -> Result<(), CliError> {
    let text = csv_string(rows);
    let mut file = std::fs::File::create(path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    file.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

/// Solves one instance and compares it against the reference evaluator.
/// `inject_fault` perturbs one output entry first, to demonstrate that a
/// wrong answer is caught and named.
pub fn verify(kind: Kind, n: usize, seed: u64, inject_fault: bool) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Usage("size must be positive".into()));
    }
    if n > kind.oracle_cap() {
        return Err(CliError::Usage(format!(
            "size {n} exceeds the reference-evaluator cap {} for {kind}",
            kind.oracle_cap()
        )));
    }
    let preset = WeightPreset::Random { seed, range: 9 };
    let inst = Instance::generate(kind, n, preset, seed);
    let cache = CacheConfig::new(256, 8, 1.0).expect("fixed verify geometry is valid");
    let opts = gridsim::ExecOptions::default();
    let mut sol = solve(&inst, cache, &opts)
        .map_err(|e| CliError::Usage(format!("{kind} n={n}: {e}")))?;
    if inject_fault {
        let mid = sol.values.len() / 2;
        sol.values[mid] += 1.0;
    }
    cross_check(&inst, &sol.values, &sol.shape)
        .map_err(|e| CliError::Mismatch(format!("{kind} n={n} seed={seed}: {e}")))?;
    Ok(())
}

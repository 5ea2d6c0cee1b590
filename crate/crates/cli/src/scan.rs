//! Batch runs described by a TOML file.
//!
//! ```toml
//! [caps]
//! dim = 64            # largest module dimension N
//! subspaces = 65536   # largest q^N enumerated over the residue field
//! radius = 6          # coordinate range for unbounded polytropes
//!
//! [defaults]
//! level = 2
//! trials = 64
//! seed = 0
//! method = "both"
//! realization = "weyl"
//!
//! [[case]]
//! n = 2
//! lambda = "2"
//! field = "padic"
//! p = 2
//!
//! [[sweep]]
//! degrees = [1, 2, 3]
//! n = [2, 3]
//! field = "padic"
//! primes = [2, 3]
//! core_only = false
//! ```
//!
//! Sweeps skip shapes with more than `n` rows, whose module is zero.

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use schur_lattice::dvr::OrderOptions;
use schur_lattice::{Error, Partition, Realization, Result};

use crate::case::{Case, FieldKind, Method, Options, DEFAULT_CAP_N};
use crate::report::{self, Report, Stages};

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    #[serde(default)]
    pub caps: Caps,
    #[serde(default)]
    pub defaults: Defaults,
    #[serde(default, rename = "case")]
    pub cases: Vec<CaseEntry>,
    #[serde(default, rename = "sweep")]
    pub sweeps: Vec<Sweep>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Caps {
    pub dim: usize,
    pub subspaces: u64,
    pub radius: u32,
}

impl Default for Caps {
    fn default() -> Self {
        let o = Options::default();
        Caps { dim: DEFAULT_CAP_N, subspaces: o.subspace_cap, radius: o.radius }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Defaults {
    pub level: u32,
    pub trials: u32,
    pub seed: u64,
    pub method: Method,
    pub realization: Realization,
}

impl Default for Defaults {
    fn default() -> Self {
        let o = OrderOptions::default();
        Defaults {
            level: o.level,
            trials: o.trials,
            seed: o.seed,
            method: Method::Both,
            realization: Realization::Weyl,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseEntry {
    pub n: usize,
    pub lambda: String,
    pub field: FieldKind,
    #[serde(alias = "q")]
    pub p: u32,
    pub realization: Option<Realization>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub degrees: Vec<usize>,
    pub n: Vec<usize>,
    pub field: FieldKind,
    #[serde(alias = "q")]
    pub primes: Vec<u32>,
    #[serde(default)]
    pub core_only: bool,
    pub realization: Option<Realization>,
}

/// One row of the summary table.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub case: String,
    pub dim: usize,
    pub core: bool,
    pub graduated: Option<bool>,
    pub fixed: Option<usize>,
    pub irreducible: Option<bool>,
    pub status: String,
}

impl ScanConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    fn options(&self) -> Options {
        Options {
            order: OrderOptions { level: self.defaults.level, trials: self.defaults.trials, seed: self.defaults.seed },
            method: self.defaults.method,
            radius: self.caps.radius,
            cap_n: self.caps.dim,
            subspace_cap: self.caps.subspaces,
            timings: false,
        }
    }

    /// Explicit cases followed by sweeps, each with its seed.
    pub fn expand(&self) -> Result<Vec<(Case, u64)>> {
        let mut out = Vec::new();
        for c in &self.cases {
            let lambda: Partition = c.lambda.parse()?;
            let r = c.realization.unwrap_or(self.defaults.realization);
            out.push((Case::new(c.n, lambda, c.field, c.p, r)?, c.seed.unwrap_or(self.defaults.seed)));
        }
        for s in &self.sweeps {
            let r = s.realization.unwrap_or(self.defaults.realization);
            for &d in &s.degrees {
                for lambda in Partition::all_of_size(d) {
                    for &n in &s.n {
                        if lambda.rows() > n {
                            continue;
                        }
                        for &p in &s.primes {
                            let case = Case::new(n, lambda.clone(), s.field, p, r)?;
                            if s.core_only && !lambda.is_core(case.field.residue_characteristic() as usize) {
                                continue;
                            }
                            out.push((case, self.defaults.seed));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Runs every case on a pool of `workers` threads; results keep config order.
pub fn run(config: &ScanConfig, workers: usize, timings: bool) -> Result<Vec<Report>> {
    let cases = config.expand()?;
    let base = Options { timings, ..config.options() };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let done = AtomicUsize::new(0);
    let total = cases.len();
    let reports = pool.install(|| {
        cases
            .par_iter()
            .map(|(case, seed)| {
                let mut opts = base;
                opts.order.seed = *seed;
                let r = report::run(case, &opts, Stages::ALL);
                let k = done.fetch_add(1, Ordering::Relaxed) + 1;
                let status = r.error.as_ref().map_or("ok", |e| e.kind);
                let _ = writeln!(std::io::stderr(), "[{k}/{total}] {case}: {status}");
                r
            })
            .collect()
    });
    Ok(reports)
}

pub fn rows(reports: &[Report]) -> Vec<Row> {
    reports
        .iter()
        .map(|r| {
            let c = &r.case;
            let lambda: Vec<String> = c.lambda.iter().map(usize::to_string).collect();
            Row {
                case: format!("n={} λ=({}) {}", c.n, lambda.join(","), c.field),
                dim: r.dim,
                core: r.core,
                graduated: r.order.as_ref().filter(|o| o.full_rank).map(|o| o.graduated),
                fixed: r.fixed_count(),
                irreducible: r.residue.as_ref().map(|s| s.spans_end),
                status: r.error.as_ref().map_or_else(|| "ok".to_string(), |e| e.kind.to_string()),
            }
        })
        .collect()
}

pub fn table(reports: &[Report]) -> String {
    let cell = |b: Option<bool>| b.map_or("-", |b| if b { "yes" } else { "no" });
    let mut out = format!(
        "{:<28} {:>4} {:>5} {:>9} {:>5} {:>11}  status\n",
        "case", "N", "core", "graduated", "fix", "irreducible"
    );
    for row in rows(reports) {
        out.push_str(&format!(
            "{:<28} {:>4} {:>5} {:>9} {:>5} {:>11}  {}\n",
            row.case,
            row.dim,
            cell(Some(row.core)),
            cell(row.graduated),
            row.fixed.map_or("-".into(), |k| k.to_string()),
            cell(row.irreducible),
            row.status
        ));
    }
    out
}

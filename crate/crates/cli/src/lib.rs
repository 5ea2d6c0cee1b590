//! Command-line front end for `schur-lattice`.
//!
//! Every command produces a serializable value; `--json` prints it as JSON,
//! otherwise a short text rendering is printed. Errors map to exit codes:
//! 2 for invalid input, 3 for an exceeded cap, 4 for a failed cross-check.

pub mod cache;
pub mod case;
pub mod report;
pub mod scan;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use schur_lattice::dvr::OrderOptions;
use schur_lattice::gaussian::{invariance_report, InvarianceReport, LatticeGaussian};
use schur_lattice::{
    compute_order, with_field, AnyField, Error, Lattice, Matrix, Partition, Realization, Result, ValuedField,
};

use case::{Case, FieldKind, Method, Options};
use report::{CaseInfo, Report, Stages};

#[derive(Debug, Parser)]
#[command(name = "schur-lattice", version, about = "Invariant lattices of Schur modules over local fields")]
pub struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock timings in reports.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hook lengths of a partition and whether it is a p-core.
    Hooks {
        #[arg(long, value_parser = parse_partition)]
        lambda: Partition,
        #[arg(long, default_value_t = 0)]
        p: u32,
    },
    /// Dimension of the Schur module.
    Dim {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_partition)]
        lambda: Partition,
    },
    /// The matrix of a group element on the tableau basis.
    Rho {
        #[command(flatten)]
        case: CaseArgs,
        /// Rows separated by ';', entries by ','.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// The order spanned by the image of GL(n, R).
    Order {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        order: OrderArgs,
    },
    /// Fixed vertices in the building.
    Fix {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        order: OrderArgs,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        /// Coordinate range for unbounded polytropes.
        #[arg(long, default_value_t = report::DEFAULT_RADIUS)]
        radius: u32,
        /// Largest q^N enumerated over the residue field.
        #[arg(long, default_value_t = schur_lattice::building::DEFAULT_SUBSPACE_CAP)]
        subspace_cap: u64,
    },
    /// Run every case of a TOML configuration.
    Scan {
        config: PathBuf,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
    },
    /// Sample the Gaussian of the standard lattice and test its invariance.
    Sample {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        order: OrderArgs,
        /// Digits per coordinate.
        #[arg(long, default_value_t = 8)]
        precision: u32,
        /// Samples per uniformity test.
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        /// Random group elements tested.
        #[arg(long, default_value_t = 8)]
        words: usize,
        /// Samples included in the output.
        #[arg(long, default_value_t = 3)]
        show: usize,
    },
    /// Whether the reduction of the order is absolutely irreducible.
    Irreducible {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        order: OrderArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CaseArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_parser = parse_partition)]
    pub lambda: Partition,
    #[arg(long, value_enum, default_value_t = FieldKind::Padic)]
    pub field: FieldKind,
    /// Residue characteristic of Q_p.
    #[arg(long, conflicts_with = "q")]
    pub p: Option<u32>,
    /// Residue field size of F_q((t)).
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long, value_parser = parse_realization, default_value = "weyl")]
    pub realization: Realization,
    /// Largest module dimension N.
    #[arg(long = "cap-N", default_value_t = case::DEFAULT_CAP_N)]
    pub cap_n: usize,
}

impl CaseArgs {
    pub fn case(&self) -> Result<Case> {
        let prime = self.p.or(self.q).ok_or_else(|| Error::InvalidArgument("one of --p or --q is required".into()))?;
        Case::new(self.n, self.lambda.clone(), self.field, prime, self.realization)
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct OrderArgs {
    #[arg(long, default_value_t = OrderOptions::default().level)]
    pub level: u32,
    #[arg(long, default_value_t = OrderOptions::default().trials)]
    pub trials: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl From<OrderArgs> for OrderOptions {
    fn from(a: OrderArgs) -> Self {
        OrderOptions { level: a.level, trials: a.trials, seed: a.seed }
    }
}

fn parse_partition(s: &str) -> std::result::Result<Partition, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_realization(s: &str) -> std::result::Result<Realization, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// What a command writes to stdout, and its exit code.
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

#[derive(Serialize)]
struct HooksOut {
    lambda: Vec<usize>,
    p: u32,
    hooks: Vec<Vec<usize>>,
    core: bool,
}

#[derive(Serialize)]
struct DimOut {
    n: usize,
    lambda: Vec<usize>,
    dim: usize,
}

#[derive(Serialize)]
struct RhoOut {
    case: CaseInfo,
    matrix: Vec<Vec<String>>,
}

#[derive(Serialize)]
pub struct SampleOut {
    pub version: &'static str,
    pub case: CaseInfo,
    pub samples: Vec<Vec<String>>,
    pub invariance: InvarianceReport,
}

#[derive(Serialize)]
struct ErrorOut {
    error: report::ErrorInfo,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn fail(e: &Error, json: bool) -> Outcome {
    let info = report::ErrorInfo::from(e);
    let exit_code = info.exit_code;
    let stdout = if json { to_json(&ErrorOut { error: info }) } else { String::new() };
    eprintln!("error: {e}");
    Outcome { stdout, exit_code }
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(out) => out,
        Err(e) => fail(&e, cli.json),
    }
}

fn render_report(r: &Report, json: bool) -> Outcome {
    if let Some(e) = &r.error {
        eprintln!("error: {}", e.message);
    }
    let stdout = if json { to_json(r) } else { text_report(r) };
    Outcome { stdout, exit_code: r.exit_code() }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let json = cli.json;
    let ok = |stdout| Ok(Outcome { stdout, exit_code: 0 });
    let base = |order: &OrderArgs| Options { order: (*order).into(), timings: cli.timings, ..Options::default() };
    match &cli.command {
        Command::Hooks { lambda, p } => {
            let out = HooksOut {
                lambda: lambda.parts().to_vec(),
                p: *p,
                hooks: lambda.hook_lengths(),
                core: lambda.is_core(*p as usize),
            };
            if json {
                ok(to_json(&out))
            } else {
                let flat: Vec<String> = out.hooks.iter().flatten().map(usize::to_string).collect();
                ok(format!("hooks [{}]\ncore={}\n", flat.join(","), out.core))
            }
        }
        Command::Dim { n, lambda } => {
            let out = DimOut { n: *n, lambda: lambda.parts().to_vec(), dim: lambda.schur_dimension(*n) as usize };
            if json {
                ok(to_json(&out))
            } else {
                ok(format!("{}\n", out.dim))
            }
        }
        Command::Rho { case, matrix } => {
            let c = case.case()?;
            let module = c.module(case.cap_n)?;
            let field = AnyField::new(c.field)?;
            let out = with_field!(&field, f => {
                let g = parse_matrix(f, matrix, c.n)?;
                let m = module.rho(f, &g)?;
                cache::store(&module);
                RhoOut { case: (&c).into(), matrix: m.format(f) }
            });
            if json {
                ok(to_json(&out))
            } else {
                ok(out.matrix.iter().map(|r| r.join("\t") + "\n").collect())
            }
        }
        Command::Order { case, order } => {
            let opts = Options { cap_n: case.cap_n, ..base(order) };
            Ok(render_report(&report::run(&case.case()?, &opts, Stages::ORDER), json))
        }
        Command::Irreducible { case, order } => {
            let opts = Options { cap_n: case.cap_n, ..base(order) };
            Ok(render_report(&report::run(&case.case()?, &opts, Stages::RESIDUE), json))
        }
        Command::Fix { case, order, method, radius, subspace_cap } => {
            let opts = Options {
                cap_n: case.cap_n,
                method: *method,
                radius: *radius,
                subspace_cap: *subspace_cap,
                ..base(order)
            };
            Ok(render_report(&report::run(&case.case()?, &opts, Stages::ALL), json))
        }
        Command::Scan { config, workers } => {
            let text = std::fs::read_to_string(config)
                .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", config.display())))?;
            let cfg = scan::ScanConfig::parse(&text)?;
            let reports = scan::run(&cfg, (*workers).max(1), cli.timings)?;
            let exit_code = if reports.iter().any(|r| r.exit_code() == 4) { 4 } else { 0 };
            let stdout = if json { to_json(&reports) } else { scan::table(&reports) };
            Ok(Outcome { stdout, exit_code })
        }
        Command::Sample { case, order, precision, count, words, show } => {
            let c = case.case()?;
            let out = sample(&c, case.cap_n, &(*order).into(), *precision, *count, *words, *show)?;
            if json {
                ok(to_json(&out))
            } else {
                let mut s = String::new();
                for v in &out.samples {
                    let _ = writeln!(s, "sample [{}]", v.join(", "));
                }
                let r = &out.invariance;
                let _ = writeln!(s, "exact invariant: {}", r.exact_invariant);
                for t in &r.tests {
                    let _ = writeln!(
                        s,
                        "word {:?}: chi2 {:.3} (df {}, critical {:.3}) {}",
                        t.word,
                        t.statistic,
                        t.degrees_of_freedom,
                        t.critical_value,
                        if t.passed { "pass" } else { "fail" }
                    );
                }
                ok(s)
            }
        }
    }
}

/// Parses `"a,b;c,d"` into an `n × n` matrix.
pub fn parse_matrix<F: ValuedField>(f: &F, text: &str, n: usize) -> Result<Matrix<F::Elem>> {
    let rows: Vec<Vec<String>> =
        text.split(';').map(|r| r.split(',').map(|x| x.trim().to_string()).collect()).collect();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!("expected a {n}×{n} matrix, got {text:?}")));
    }
    Matrix::parse(f, &rows)
}

/// Samples the Gaussian of `Λ₀` and tests its invariance under the order.
pub fn sample(
    case: &Case,
    cap_n: usize,
    order: &OrderOptions,
    precision: u32,
    count: usize,
    words: usize,
    show: usize,
) -> Result<SampleOut> {
    let module = case.module(cap_n)?;
    let field = AnyField::new(case.field)?;
    with_field!(&field, f => {
        let gauss = LatticeGaussian::new(Lattice::standard(f, module.dim()), precision, order.seed)?;
        let computed = compute_order(f, &module, order)?;
        cache::store(&module);
        let invariance = invariance_report(f, &gauss, &computed.module, &computed.generator_images, words, count)?;
        let samples = gauss.sample(f, show).iter().map(|v| v.iter().map(|x| f.format(x)).collect()).collect();
        Ok(SampleOut { version: report::VERSION, case: case.into(), samples, invariance })
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Human-readable rendering of a report.
pub fn text_report(r: &Report) -> String {
    let mut s = String::new();
    let c = &r.case;
    let lambda: Vec<String> = c.lambda.iter().map(usize::to_string).collect();
    let _ = writeln!(s, "case: n={} λ=({}) over {}", c.n, lambda.join(","), c.field);
    let _ = writeln!(s, "N = {}, core: {}", r.dim, yes(r.core));
    if let Some(o) = &r.order {
        let _ = writeln!(s, "order: rank {}, divisors {:?}, {}", o.rank, o.divisors, o.certificate.status);
        if let Some(l) = o.congruence_level {
            let _ = writeln!(s, "congruence level: {l}");
        }
        let _ = writeln!(s, "graduated: {}", yes(o.graduated));
        let _ = write!(s, "exponent profile:\n{}", o.exponent_profile);
        if !s.ends_with('\n') {
            s.push('\n');
        }
    }
    if let Some(fix) = &r.fix {
        for (name, set) in [("polytrope", &fix.polytrope), ("bfs", &fix.bfs)] {
            if let Some(set) = set {
                let _ = writeln!(
                    s,
                    "fix ({name}): {} classes, bounded {}, radius {}, convex {}",
                    set.count,
                    yes(set.bounded),
                    set.radius,
                    yes(set.convex)
                );
            }
        }
        if let Some(a) = &fix.agreement {
            let _ = writeln!(s, "methods agree: {}", yes(a.equal));
        }
        if let Some(m) = &fix.middle_family {
            let _ = writeln!(s, "middle family invariant for m = 0..={}: {:?}", m.depth, m.invariant);
        }
    }
    if let Some(res) = &r.residue {
        let subs = res.invariant_subspaces.map_or("-".to_string(), |k| k.to_string());
        let _ = writeln!(s, "residue spans End: {}, invariant subspaces: {subs}", yes(res.spans_end));
    }
    for note in &r.notes {
        let _ = writeln!(s, "note: {note}");
    }
    if let Some(t) = &r.timings {
        for (stage, secs) in t {
            let _ = writeln!(s, "time {stage}: {secs:.3}s");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use schur_lattice::PAdicRationals;

    #[test]
    fn matrix_syntax() {
        let f = PAdicRationals::new(3).unwrap();
        let g = parse_matrix(&f, "1, -2; 1/3, 0", 2).unwrap();
        assert_eq!(g.format(&f), [["1", "-2"], ["1/3", "0"]]);
        assert!(parse_matrix(&f, "1,2;3", 2).is_err());
        assert!(parse_matrix(&f, "1,2;3,4", 3).is_err());
    }

    #[test]
    fn case_arguments_need_a_prime() {
        let cli = Cli::try_parse_from(["schur-lattice", "order", "--n", "2", "--lambda", "2"]).unwrap();
        let out = execute(&cli);
        assert_eq!(out.exit_code, 2);
        assert!(Cli::try_parse_from(["schur-lattice", "order", "--n", "2", "--lambda", "2", "--p", "2", "--q", "2"])
            .is_err());
    }
}

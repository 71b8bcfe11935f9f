//! `graph-energy` command-line frontend.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 unreadable or invalid
//! graph file, 3 eigensolver failure, 4 verification found violations or
//! characterization mismatches.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::energy::{graph_energy, laplacian_energy_checked, weight_stats};
use crate::error::Error;
use crate::generate::{FamilyKind, WeightScheme};
use crate::graph::{WeightRegime, WeightedGraph};
use crate::linalg::eigvalsh;
use crate::sweep::{run_sweep, FamilySpec, MeanMode, SweepConfig, SweepSource};
use crate::theorems::Tolerances;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

/// Magnitudes below this print as `0`.
const PRINT_ZERO: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "graph-energy",
    version,
    about = "Graph energy and weighted Laplacian energy toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies and weight statistics of one graph file.
    Compute {
        #[arg(long)]
        graph: PathBuf,
        /// `file` (weights from the graph file), `degree`, or `const:C`.
        #[arg(long, default_value = "file")]
        weight: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check every bound on a generated family and write a report.
    Verify {
        /// path, cycle, complete, complete_bipartite, star, gnp or random_bipartite.
        #[arg(long)]
        family: FamilyKind,
        /// Vertex count (lower end of the range with `--n-max`).
        #[arg(long)]
        n: usize,
        /// Upper end of the vertex-count range (defaults to `--n`).
        #[arg(long)]
        n_max: Option<usize>,
        /// Edge probabilities for random families, comma separated.
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        /// Second side size for `complete_bipartite`.
        #[arg(long)]
        m: Option<usize>,
        /// `degree`, `const:C` or `uniform:LO:HI`.
        #[arg(long, default_value = "degree")]
        weight: WeightScheme,
        /// Number of generated instances.
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        /// Resample until each generated graph is connected.
        #[arg(long)]
        connected: bool,
        /// Verify disjoint unions of `MIN:MAX` generated components.
        #[arg(long)]
        union_parts: Option<String>,
        #[arg(long, value_enum, default_value_t = Means::Free)]
        means: Means,
        /// A bound holds iff `rhs - lhs >= -abs_tol`.
        #[arg(long, default_value_t = Tolerances::default().abs_tol)]
        abs_tol: f64,
        /// Equality iff `|rhs - lhs| <= eq_tol * (1 + |rhs|)`.
        #[arg(long, default_value_t = Tolerances::default().eq_tol)]
        eq_tol: f64,
    },
    /// Sorted eigenvalues of one matrix of a graph file.
    Spectrum {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        matrix: MatrixKind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Means {
    Free,
    Equal,
    Perturbed,
    Alternate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixKind {
    Adjacency,
    Laplacian,
    Signless,
}

/// Fixed 12-significant-digit decimal rendering with trailing zeros removed.
pub fn format_sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() < PRINT_ZERO {
        return "0".into();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (11 - exponent).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    s
}

#[derive(Debug, Serialize)]
struct ComputeRecord {
    n: usize,
    m: usize,
    weight_regime: WeightRegime,
    mean_weight: f64,
    md_weight: f64,
    var_weight: f64,
    energy: f64,
    laplacian_energy: f64,
    laplacian_energy_matrix: f64,
    bipartite: bool,
    omega_regular: bool,
    connected: bool,
}

impl ComputeRecord {
    fn text(&self) -> String {
        let f = format_sig12;
        let regime = match self.weight_regime {
            WeightRegime::Degree => "degree",
            WeightRegime::Custom => "custom",
        };
        format!(
            "n: {}\nm: {}\nweight_regime: {regime}\nmean_weight: {}\nmd_weight: {}\nvar_weight: {}\n\
             energy: {}\nlaplacian_energy: {}\nlaplacian_energy_matrix: {}\n\
             bipartite: {}\nomega_regular: {}\nconnected: {}\n",
            self.n,
            self.m,
            f(self.mean_weight),
            f(self.md_weight),
            f(self.var_weight),
            f(self.energy),
            f(self.laplacian_energy),
            f(self.laplacian_energy_matrix),
            self.bipartite,
            self.omega_regular,
            self.connected,
        )
    }
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::NoConvergence { .. } | Error::Inconsistent { .. } => EXIT_SOLVER,
        Error::Trial { source, .. } => exit_code(source),
        _ => EXIT_USAGE,
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    usage(format!("{}: {e}", path.display()))
}

fn read_graph(path: &Path) -> Result<WeightedGraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("{}: {e}", path.display()),
    })?;
    WeightedGraph::from_json(&text).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("{}: {e}", path.display()),
    })
}

fn apply_weight_option(g: WeightedGraph, weight: &str) -> Result<WeightedGraph, Failure> {
    match weight {
        "file" => Ok(g),
        "degree" => Ok(g.degree_weighted()),
        other => match other.parse::<WeightScheme>() {
            Ok(WeightScheme::Constant { value }) => {
                Ok(g.reweighted(vec![value; g.vertex_count()])?)
            }
            _ => Err(usage(format!(
                "bad --weight `{other}` (file | degree | const:C)"
            ))),
        },
    }
}

fn compute(graph: &Path, weight: &str, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let g = apply_weight_option(read_graph(graph)?, weight)?;
    let stats = weight_stats(&g);
    let le = laplacian_energy_checked(&g)?;
    let record = ComputeRecord {
        n: g.vertex_count(),
        m: g.edge_count(),
        weight_regime: g.regime(),
        mean_weight: stats.mean,
        md_weight: stats.md,
        var_weight: stats.var,
        energy: graph_energy(&g)?,
        laplacian_energy: le.spectral,
        laplacian_energy_matrix: le.matrix,
        bipartite: g.is_bipartite().is_some(),
        omega_regular: g.is_omega_regular(Tolerances::default().eq_tol),
        connected: g.is_connected(),
    };
    let text = match format {
        Format::Text => record.text(),
        Format::Json => serde_json::to_string_pretty(&record).expect("record serializes") + "\n",
    };
    out.write_all(text.as_bytes())
        .map_err(|e| usage(e.to_string()))
}

fn spectrum(graph: &Path, matrix: MatrixKind, out: &mut dyn Write) -> Result<(), Failure> {
    let g = read_graph(graph)?;
    let m = match matrix {
        MatrixKind::Adjacency => g.adjacency_matrix(),
        MatrixKind::Laplacian => g.laplacian(),
        MatrixKind::Signless => g.signless_laplacian(),
    };
    let snap = 1e-12 * (1.0 + m.frobenius_norm());
    let mut text = String::new();
    for l in eigvalsh(&m)? {
        text.push_str(&format_sig12(if l.abs() <= snap { 0.0 } else { l }));
        text.push('\n');
    }
    out.write_all(text.as_bytes())
        .map_err(|e| usage(e.to_string()))
}

fn parse_part_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || usage(format!("bad --union-parts `{s}` (expected MIN:MAX)"));
    match s.split_once(':') {
        Some((a, b)) => Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?)),
        None => s.parse().map(|k| (k, k)).map_err(|_| bad()),
    }
}

#[allow(clippy::too_many_arguments)]
fn verify_config(
    family: FamilyKind,
    n: usize,
    n_max: Option<usize>,
    p: Vec<f64>,
    m: Option<usize>,
    weight: WeightScheme,
    trials: u64,
    seed: u64,
    connected: bool,
    union_parts: Option<&str>,
    means: Means,
    tolerances: Tolerances,
) -> Result<SweepConfig, Failure> {
    let mut spec = FamilySpec::new(family, n).with_n_range(n, n_max.unwrap_or(n));
    if !p.is_empty() {
        spec = spec.with_ps(p);
    }
    spec.right = m;
    let source = match union_parts {
        None => SweepSource::Graphs {
            family: spec,
            weight,
            connected_only: connected,
        },
        Some(range) => {
            let (min_parts, max_parts) = parse_part_range(range)?;
            SweepSource::Unions {
                family: spec,
                weight,
                connected_only: connected,
                min_parts,
                max_parts,
                means: match means {
                    Means::Free => MeanMode::Free,
                    Means::Equal => MeanMode::Equal,
                    Means::Perturbed => MeanMode::Perturbed,
                    Means::Alternate => MeanMode::Alternate,
                },
            }
        }
    };
    Ok(SweepConfig {
        source,
        trials,
        seed,
        tolerances,
    })
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Compute {
            graph,
            weight,
            format,
        } => compute(&graph, &weight, format, out).map(|_| EXIT_OK),
        Command::Spectrum { graph, matrix } => spectrum(&graph, matrix, out).map(|_| EXIT_OK),
        Command::Verify {
            family,
            n,
            n_max,
            p,
            m,
            weight,
            trials,
            seed,
            out: out_path,
            format,
            connected,
            union_parts,
            means,
            abs_tol,
            eq_tol,
        } => {
            let config = verify_config(
                family,
                n,
                n_max,
                p,
                m,
                weight,
                trials,
                seed,
                connected,
                union_parts.as_deref(),
                means,
                Tolerances { abs_tol, eq_tol },
            )?;
            let report = run_sweep(&config)?;
            let body = match format {
                ReportFormat::Json => report.to_json(),
                ReportFormat::Csv => report.to_csv(),
            };
            let summary = format!(
                "verify: {} trials, {} violations, {} mismatches (family {family}, weight {weight}, seed {seed})\n",
                trials,
                report.total_violations(),
                report.total_mismatches(),
            );
            match out_path {
                Some(path) => {
                    fs::write(&path, body).map_err(|e| io_failure(&path, e))?;
                    out.write_all(summary.as_bytes())
                        .map_err(|e| usage(e.to_string()))?;
                }
                None => {
                    out.write_all(body.as_bytes())
                        .map_err(|e| usage(e.to_string()))?;
                    err.write_all(summary.as_bytes())
                        .map_err(|e| usage(e.to_string()))?;
                }
            }
            Ok(if report.is_clean() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            })
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

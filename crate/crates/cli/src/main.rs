mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dualcen::centrality::{
    builtin_instance, dual_centrality, matches_reference, rank_vertices, reference_table,
    verify_centrality, BuiltinInstance, CentralityConfig, DualCentralityResult, RankTable,
    DEFAULT_RANK_TIE_TOL,
};
use dualcen::spectral::{eigen_residual, perron_pair, SpectralConfig};
use dualcen::{Error, Hypergraph, Perturbation};

use report::{
    centrality_csv, fmt_num, one_based, ranking_line, score_table, CentralityReport, RankReport,
    SpectralReport, VerifyReportOut,
};

/// Absolute tolerance for the reference-table match verdict (covers the
/// 4-decimal rounding of the stored reference scores).
const TABLE_MATCH_TOL: f64 = 5e-4;

#[derive(Parser)]
#[command(
    name = "dualcen",
    version,
    about = "Dual-number spectral analysis and tie-breaking centrality for uniform hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Perron pair (spectral radius and positive eigenvector)
    Spectral(SpectralArgs),
    /// Run the dual-centrality pipeline and report scores and ranking
    Centrality(RunArgs),
    /// Report only the ranking groups
    Rank(RunArgs),
    /// Run the pipeline and check every invariant; exit 6 on any failure
    Verify(VerifyArgs),
    /// Write a built-in instance and its perturbations to files
    Examples(ExamplesArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Hypergraph edge-list file (one edge per line, 1-based ids)
    #[arg(long, value_name = "FILE", conflicts_with = "builtin")]
    input: Option<PathBuf>,
    /// Built-in instance name (fig1-candidate | fig2-candidate)
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,
}

#[derive(Args)]
struct SolverArgs {
    /// Power-iteration stopping tolerance (relative ratio gap)
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Power-iteration cap
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    /// Diagonal shift of the power iteration
    #[arg(long, default_value_t = 1.0)]
    shift: f64,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Decimal places for text and CSV output
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=15))]
    precision: u8,
}

#[derive(Args)]
struct SpectralArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Perturbation file (edge list with optional trailing w=<real>)
    #[arg(long, value_name = "FILE")]
    perturb: Option<PathBuf>,
    /// Inline perturbation `v1,v2,...[,w=W]`; repeatable, summed
    #[arg(long = "perturb-edge", value_name = "SPEC")]
    perturb_edge: Vec<String>,
    /// Which bundled perturbation of a built-in instance to use
    #[arg(long, default_value_t = 0)]
    perturb_index: usize,
    /// Absolute tie tolerance when grouping ranks
    #[arg(long, default_value_t = DEFAULT_RANK_TIE_TOL)]
    tie_tol: f64,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Verify a previously emitted centrality JSON report instead of a fresh
    /// pipeline result
    #[arg(long, value_name = "FILE")]
    result: Option<PathBuf>,
}

#[derive(Args)]
struct ExamplesArgs {
    /// Built-in instance name
    name: String,
    /// Output directory
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

type CmdResult = Result<(String, u8), (u8, String)>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Spectral(args) => cmd_spectral(&args),
        Command::Centrality(args) => cmd_centrality(&args),
        Command::Rank(args) => cmd_rank(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Examples(args) => cmd_examples(&args),
    };
    match outcome {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err((code, message)) => {
            eprintln!("dualcen: {message}");
            ExitCode::from(code)
        }
    }
}

/// Exit-code contract: 2 input/config errors, 3 connectivity, 4 convergence,
/// 5 inconsistent perturbation, 6 invariant violations.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::UnknownInstance(_) | Error::InvalidConfig(_) => 2,
        Error::NotConnected | Error::NotIrreducible(_) => 3,
        Error::NoConvergence { .. } => 4,
        Error::DimensionMismatch(_) | Error::Inconsistent(_) | Error::DegenerateDenominator(_) => 5,
        _ => 6,
    }
}

fn lib_err(e: Error) -> (u8, String) {
    (exit_code(&e), e.to_string())
}

fn read_file(path: &Path) -> Result<String, (u8, String)> {
    fs::read_to_string(path).map_err(|e| (2, format!("cannot read {}: {e}", path.display())))
}

fn load_hypergraph(
    input: &InputArgs,
) -> Result<(Hypergraph, Option<BuiltinInstance>), (u8, String)> {
    match (&input.input, &input.builtin) {
        (Some(path), None) => {
            let text = read_file(path)?;
            let h = Hypergraph::parse(&text).map_err(lib_err)?;
            Ok((h, None))
        }
        (None, Some(name)) => {
            let inst = builtin_instance(name).map_err(lib_err)?;
            Ok((inst.hypergraph.clone(), Some(inst)))
        }
        _ => Err((2, "exactly one of --input and --builtin is required".into())),
    }
}

/// Resolves the perturbation: explicit files/specs are summed; otherwise a
/// built-in instance falls back to its bundled perturbation at
/// `--perturb-index`. Returns the bundled index when one was used, which
/// keys the reference-table verdict.
fn load_perturbation(
    args: &RunArgs,
    builtin: Option<&BuiltinInstance>,
) -> Result<(Perturbation, Option<usize>), (u8, String)> {
    let mut parts = Vec::new();
    if let Some(path) = &args.perturb {
        let text = read_file(path)?;
        parts.push(Perturbation::parse(&text).map_err(lib_err)?);
    }
    for spec in &args.perturb_edge {
        parts.push(Perturbation::parse_inline(spec).map_err(lib_err)?);
    }
    if !parts.is_empty() {
        return Ok((Perturbation::merged(&parts), None));
    }
    if let Some(inst) = builtin {
        if inst.perturbations.is_empty() {
            return Ok((Perturbation::empty(), None));
        }
        let idx = args.perturb_index;
        if idx >= inst.perturbations.len() {
            return Err((
                2,
                format!(
                    "--perturb-index {idx} out of range; `{}` bundles {} perturbation(s)",
                    inst.name,
                    inst.perturbations.len()
                ),
            ));
        }
        return Ok((inst.perturbations[idx].clone(), Some(idx)));
    }
    Ok((Perturbation::empty(), None))
}

fn spectral_config(s: &SolverArgs) -> SpectralConfig {
    SpectralConfig {
        tol: s.tol,
        max_iter: s.max_iter,
        shift: s.shift,
    }
}

fn json_line<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("report serializes");
    s.push('\n');
    s
}

fn cmd_spectral(args: &SpectralArgs) -> CmdResult {
    let (h, _) = load_hypergraph(&args.input)?;
    if !h.is_connected() {
        return Err((3, Error::NotConnected.to_string()));
    }
    let t = h.adjacency_tensor().map_err(lib_err)?;
    let pair = perron_pair(&t, &spectral_config(&args.solver)).map_err(lib_err)?;
    let residual = eigen_residual(&t, pair.lambda_s, &pair.x_s).map_err(lib_err)?;
    let report = SpectralReport::new(h.uniformity(), &pair, residual);
    let precision = args.output.precision as usize;
    let out = match args.output.format {
        Format::Json => json_line(&report),
        Format::Csv => {
            let mut out = String::from("vertex,x_s\n");
            for (v, x) in pair.x_s.iter().enumerate() {
                out.push_str(&format!("{},{}\n", v + 1, fmt_num(*x, precision)));
            }
            out
        }
        Format::Text => {
            let mut out = format!("n = {}, m = {}\n", report.n, report.m);
            out.push_str(&format!(
                "lambda_s = {}\n",
                fmt_num(report.lambda_s, precision)
            ));
            out.push_str(&score_table(&[("x_s", &pair.x_s)], precision));
            out.push_str(&format!(
                "iterations = {}\ngap = {:.3e}\nresidual = {:.3e}\n",
                report.iterations, report.gap, report.residual
            ));
            out
        }
    };
    Ok((out, 0))
}

struct PipelineOutput {
    h: Hypergraph,
    result: DualCentralityResult,
    table: RankTable,
    table_match: Option<bool>,
}

fn run_pipeline(args: &RunArgs) -> Result<PipelineOutput, (u8, String)> {
    if args.tie_tol.is_nan() || args.tie_tol <= 0.0 {
        return Err((2, format!("--tie-tol {} must be positive", args.tie_tol)));
    }
    let (h, builtin) = load_hypergraph(&args.input)?;
    let (perturbation, bundled_idx) = load_perturbation(args, builtin.as_ref())?;
    let cfg = CentralityConfig {
        spectral: spectral_config(&args.solver),
    };
    let result = dual_centrality(&h, &perturbation, &cfg).map_err(lib_err)?;
    let table = rank_vertices(&result, args.tie_tol);
    let table_match = match (&builtin, bundled_idx) {
        (Some(inst), Some(idx)) => {
            reference_table(inst.name, idx).map(|t| matches_reference(&result, &t, TABLE_MATCH_TOL))
        }
        _ => None,
    };
    Ok(PipelineOutput {
        h,
        result,
        table,
        table_match,
    })
}

fn cmd_centrality(args: &RunArgs) -> CmdResult {
    let out = run_pipeline(args)?;
    let precision = args.output.precision as usize;
    let report =
        CentralityReport::new(out.h.uniformity(), &out.result, &out.table, out.table_match);
    let rendered = match args.output.format {
        Format::Json => json_line(&report),
        Format::Csv => centrality_csv(&out.result, &out.table, precision),
        Format::Text => {
            let mut s = format!("n = {}, m = {}\n", report.n, report.m);
            s.push_str(&format!(
                "lambda_s = {}\n",
                fmt_num(report.lambda_s, precision)
            ));
            s.push_str(&format!(
                "lambda_d = {}\n",
                fmt_num(report.lambda_d, precision)
            ));
            s.push_str(&score_table(
                &[("x_s", &out.result.x_s), ("x_d", &out.result.x_d)],
                precision,
            ));
            s.push_str(&format!("ranking: {}\n", ranking_line(&out.table)));
            s.push_str(&format!(
                "residual_standard = {:.3e}\nresidual_dual = {:.3e}\n",
                report.residual_standard, report.residual_dual
            ));
            if let Some(m) = report.table_match {
                s.push_str(&format!("table_match: {m}\n"));
            }
            s
        }
    };
    Ok((rendered, 0))
}

fn cmd_rank(args: &RunArgs) -> CmdResult {
    let out = run_pipeline(args)?;
    let report = RankReport {
        n: out.result.vertex_count(),
        m: out.h.uniformity(),
        ranking: one_based(&out.table.groups),
    };
    let rendered = match args.output.format {
        Format::Json => json_line(&report),
        Format::Csv => {
            let mut s = String::from("vertex,rank_group\n");
            for v in 0..out.result.vertex_count() {
                s.push_str(&format!("{},{}\n", v + 1, out.table.group_of(v).unwrap()));
            }
            s
        }
        Format::Text => format!("{}\n", ranking_line(&out.table)),
    };
    Ok((rendered, 0))
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let (h, builtin) = load_hypergraph(&args.run.input)?;
    let (perturbation, _) = load_perturbation(&args.run, builtin.as_ref())?;
    let (lambda_s, lambda_d, x_s, x_d) = match &args.result {
        Some(path) => {
            let text = read_file(path)?;
            let loaded: CentralityReport = serde_json::from_str(&text).map_err(|e| {
                (
                    2,
                    format!("cannot parse result file {}: {e}", path.display()),
                )
            })?;
            (loaded.lambda_s, loaded.lambda_d, loaded.x_s, loaded.x_d)
        }
        None => {
            let cfg = CentralityConfig {
                spectral: spectral_config(&args.run.solver),
            };
            let r = dual_centrality(&h, &perturbation, &cfg).map_err(lib_err)?;
            (r.lambda_s, r.lambda_d, r.x_s, r.x_d)
        }
    };
    let report =
        verify_centrality(&h, &perturbation, lambda_s, lambda_d, &x_s, &x_d).map_err(lib_err)?;
    let out = VerifyReportOut::new(&report);
    let rendered = match args.run.output.format {
        Format::Json => json_line(&out),
        _ => {
            let mut s = String::new();
            for c in &report.checks {
                s.push_str(&format!(
                    "{} {:<20} value {:.3e}  threshold {:.3e}\n",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.threshold
                ));
            }
            s.push_str(if report.pass() {
                "verdict: PASS\n"
            } else {
                "verdict: FAIL\n"
            });
            s
        }
    };
    if report.pass() {
        Ok((rendered, 0))
    } else {
        let failed: Vec<&str> = report.failures().iter().map(|c| c.name).collect();
        eprintln!("dualcen: invariant check(s) failed: {}", failed.join(", "));
        Ok((rendered, 6))
    }
}

fn cmd_examples(args: &ExamplesArgs) -> CmdResult {
    let inst = builtin_instance(&args.name).map_err(lib_err)?;
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| (2, format!("cannot create {}: {e}", args.out_dir.display())))?;
    let mut out = String::new();
    let hg_path = args.out_dir.join(format!("{}.hg", inst.name));
    let header = format!(
        "# {}: {}-uniform hypergraph on {} vertices\n",
        inst.name,
        inst.hypergraph.uniformity(),
        inst.hypergraph.vertex_count()
    );
    fs::write(
        &hg_path,
        format!("{header}{}", inst.hypergraph.to_file_string()),
    )
    .map_err(|e| (2, format!("cannot write {}: {e}", hg_path.display())))?;
    out.push_str(&format!("{}\n", hg_path.display()));
    for (i, p) in inst.perturbations.iter().enumerate() {
        let p_path = args.out_dir.join(format!("{}-p{}.perturb", inst.name, i));
        let header = format!("# {}: bundled perturbation {}\n", inst.name, i);
        fs::write(&p_path, format!("{header}{}", p.to_file_string()))
            .map_err(|e| (2, format!("cannot write {}: {e}", p_path.display())))?;
        out.push_str(&format!("{}\n", p_path.display()));
    }
    Ok((out, 0))
}

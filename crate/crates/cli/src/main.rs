use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use npcoh::{
    analyze, catalog, mismatch_report, parse_families, render_catalog, render_text, AnalysisRecord, AnalysisRequest,
    CliError, GermSpec, Mode, EXIT_INPUT, EXIT_MISMATCH, EXIT_OK,
};
use npcoh_core::Execution;

#[derive(Parser)]
#[command(name = "npcoh", version, about = "Twisted de Rham cohomology of quasihomogeneous germs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form cohomology of one germ, optionally checked against brute force.
    Analyze {
        #[command(flatten)]
        germ: GermArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value = "closed-form")]
        mode: Mode,
    },
    /// Shorthand for `analyze --mode verify`.
    Verify {
        #[command(flatten)]
        germ: GermArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Sweep the normal-form catalog.
    Catalog {
        /// Comma-separated families: a, d, e, regular, quadratic.
        #[arg(long, default_value = "a,d,e,regular")]
        families: String,
        /// Number of variables; repeatable.
        #[arg(long = "n", default_values_t = [3usize])]
        n: Vec<usize>,
        /// Largest class index per family.
        #[arg(long)]
        max_k: Option<u32>,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value = "verify")]
        mode: Mode,
    },
}

#[derive(Args)]
struct GermArgs {
    /// Polynomial, e.g. "x1^3+x2^2+x3^2".
    #[arg(long)]
    poly: Option<String>,
    /// Comma-separated variable names (default x1..xn).
    #[arg(long)]
    vars: Option<String>,
    /// Comma-separated positive weights; solved from the polynomial if omitted.
    #[arg(long)]
    weights: Option<String>,
    /// Normal-form class: A2, D5, E7, regular, quadratic.
    #[arg(long)]
    class: Option<String>,
    /// Number of variables.
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated signs of the square terms, e.g. "+,-,+".
    #[arg(long, allow_hyphen_values = true)]
    signs: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    /// Value of p; repeatable (default: 0 and n-2).
    #[arg(long = "p", allow_negative_numbers = true)]
    p: Vec<i64>,
    /// Quasidegree window LO:HI for brute force.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Emit JSON instead of tables.
    #[arg(long)]
    json: bool,
    /// Write output to FILE instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl GermArgs {
    fn spec(self) -> GermSpec {
        GermSpec {
            poly: self.poly,
            vars: self.vars,
            weights: self.weights,
            class: self.class,
            n: self.n,
            signs: self.signs,
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("NPCOH_THREADS") else {
        return Ok(());
    };
    let threads: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("NPCOH_THREADS must be a non-negative integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Input(e.to_string()))
}

fn emit(records: &[AnalysisRecord], text: String, run: &RunArgs) -> anyhow::Result<()> {
    let body = if run.json {
        serde_json::to_string_pretty(records)? + "\n"
    } else {
        text
    };
    match &run.out {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{body}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    configure_threads()?;
    let exec = Execution::available();
    let (records, run, batch) = match cli.command {
        Command::Analyze { germ, run, mode } => {
            let req = AnalysisRequest::new(&germ.spec(), &run.p, mode, run.window.as_deref())?;
            (analyze(&req, exec)?, run, false)
        }
        Command::Verify { germ, run } => {
            let req = AnalysisRequest::new(&germ.spec(), &run.p, Mode::Verify, run.window.as_deref())?;
            (analyze(&req, exec)?, run, false)
        }
        Command::Catalog {
            families,
            n,
            max_k,
            run,
            mode,
        } => {
            let families = parse_families(&families)?;
            let records = catalog(&n, &families, max_k, &run.p, mode, run.window.as_deref(), exec)?;
            (records, run, true)
        }
    };
    let text = if batch { render_catalog(&records) } else { render_text(&records) };
    if let Err(e) = emit(&records, text, &run) {
        eprintln!("error: {e:#}");
        return Ok(EXIT_INPUT);
    }
    let mismatches = mismatch_report(&records);
    if mismatches.is_empty() {
        Ok(EXIT_OK)
    } else {
        eprint!("{mismatches}");
        Ok(EXIT_MISMATCH)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}

//! `geowb`: command-line front end.
//!
//! Exit codes: 0 the check holds, 1 it was checked and fails, 2 usage or
//! input error, 3 internal error.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use geowb::existence::CertificateMode;
use geowb::Backend;

use commands::{ObstructArgs, Outcome, RunConfig};
use input::{load_structure, CliError, CliResult};

#[derive(Parser)]
#[command(name = "geowb", version, about = "Invariant-form calculus on complex nilmanifolds and solvmanifolds")]
struct Cli {
    /// Coefficient field: exact (Gaussian rationals) or float. Defaults to the input's own.
    #[arg(long, global = true)]
    backend: Option<Backend>,
    /// Tolerance for float comparisons.
    #[arg(long, global = true, default_value_t = 1e-10)]
    epsilon: f64,
    /// Random simple forms drawn by transversality sampling.
    #[arg(long, global = true, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, global = true, env = "GEOWB_SEED", default_value_t = 0)]
    seed: u64,
    /// Print the machine-readable report instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct Source {
    /// Structure file (complex `dphi` or real `de` + `pairing`).
    #[arg(long)]
    structure: Option<PathBuf>,
    /// Catalog key, optionally `key:preset`.
    #[arg(long)]
    catalog: Option<String>,
    /// Parameter overrides for a catalog entry: `{"name": "p/q" | {"re", "im"}}`.
    #[arg(long)]
    params: Option<PathBuf>,
}

impl Source {
    fn load(&self, backend: Option<Backend>) -> CliResult<input::Loaded> {
        load_structure(
            self.structure.as_deref(),
            self.catalog.as_deref(),
            self.params.as_deref(),
            backend,
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check d² = 0 on the generators and report integrability.
    Validate {
        #[command(flatten)]
        source: Source,
        /// Also check d² on every monomial.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Kähler, SKT, astheno-Kähler, balanced, Gauduchon and strongly Gauduchon flags.
    Classify {
        #[command(flatten)]
        source: Source,
        /// Metric file `{"n", "H"}`; the identity metric when omitted.
        #[arg(long)]
        metric: Option<PathBuf>,
    },
    /// Transversality of a real (p,p)-form.
    Transverse {
        /// Form file `{"n", "terms"}`.
        #[arg(long)]
        form: Option<PathBuf>,
        #[arg(long)]
        p: Option<usize>,
        /// Test the 4-dimensional form Ω_a through the quadric criterion.
        #[arg(long, allow_hyphen_values = true)]
        omega_a: Option<String>,
    },
    /// (n−1)-symplectic check on the fps6, ft8 or st10 family.
    Psymplectic {
        #[arg(long)]
        family: String,
        /// Structure constants, λ letters, and (fps6) metric letters r2 s2 t2 u v w.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
    },
    /// Verify or search for obstruction certificates.
    Obstruct {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long)]
        p: Option<usize>,
        /// d or delbar-del.
        #[arg(long, default_value = "d", value_parser = parse_mode)]
        mode: CertificateMode,
    },
    /// Invariant-level Bott–Chern dimensions for every bidegree.
    BcDims {
        #[command(flatten)]
        source: Source,
    },
    /// Invariant-level ∂∂̄-lemma at (p,q), or at every bidegree.
    DdbarLemma {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
    },
    /// Exact, simple, holomorphic (q,0)-forms on a complex-parallelizable structure.
    SimpleHolo {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        q: usize,
        /// Verify this (q,0)-form instead of searching.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Built-in structures.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Compare a family's condition formula with direct closure on random tuples.
    Sweep {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show {
        key: String,
        #[arg(long)]
        params: Option<PathBuf>,
    },
}

fn parse_mode(s: &str) -> Result<CertificateMode, String> {
    match s {
        "d" => Ok(CertificateMode::D),
        "delbar-del" => Ok(CertificateMode::DelbarDel),
        other => Err(format!("unknown mode `{other}` (d or delbar-del)")),
    }
}

fn run(cli: Cli) -> CliResult<Outcome> {
    let cfg = RunConfig {
        backend: cli.backend,
        epsilon: cli.epsilon,
        samples: cli.samples,
        seed: cli.seed,
        json: cli.json,
    };
    cfg.check()?;
    match cli.command {
        Command::Validate { source, exhaustive } => Ok(commands::validate(source.load(cfg.backend)?, &cfg, exhaustive)),
        Command::Classify { source, metric } => {
            commands::classify_metric(source.load(cfg.backend)?, metric.as_deref(), &cfg)
        }
        Command::Transverse { form, p, omega_a } => commands::transverse(form.as_deref(), p, omega_a.as_deref(), &cfg),
        Command::Psymplectic { family, params, preset } => {
            commands::psymplectic(&family, params.as_deref(), preset.as_deref())
        }
        Command::Obstruct {
            source,
            cert,
            search,
            budget,
            p,
            mode,
        } => commands::obstruct(
            source.structure.as_deref(),
            source.catalog.as_deref(),
            source.params.as_deref(),
            ObstructArgs {
                cert: cert.as_deref(),
                search,
                budget,
                p,
                mode,
            },
            &cfg,
        ),
        Command::BcDims { source } => commands::bc_dims(source.load(cfg.backend)?, &cfg),
        Command::DdbarLemma { source, p, q } => commands::ddbar_lemma(source.load(cfg.backend)?, p, q, &cfg),
        Command::SimpleHolo { source, q, cert } => {
            commands::simple_holo(source.load(cfg.backend)?, q, cert.as_deref(), &cfg)
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => Ok(commands::catalog_list()),
            CatalogAction::Show { key, params } => commands::catalog_show(&key, params.as_deref()),
        },
        Command::Sweep { family, count } => commands::sweep(&family, count, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(cli)));
    match result {
        Ok(Ok(out)) => {
            let body = if json {
                serde_json::to_string_pretty(&out.json).expect("serializable") + "\n"
            } else {
                out.text
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(out.code as u8)
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            let code = match e {
                CliError::Usage(_) | CliError::Io(..) | CliError::Core(_) => 2,
            };
            ExitCode::from(code)
        }
        Err(_) => {
            eprintln!("error: internal failure");
            ExitCode::from(3)
        }
    }
}

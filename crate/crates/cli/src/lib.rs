//! Command-line front end for `idemcore`: JSON problem files, batch
//! verification campaigns, and deterministic reports.

pub mod acceptance;
pub mod commands;
pub mod model;
pub mod parallel;
pub mod report;
pub mod schema;

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use idemcore::report::{Report, Scope};

use crate::acceptance::Acceptance;
use crate::commands::Method;
use crate::report::{CommandReport, EXIT_FAIL, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(name = "idemcore", version, about = "Idempotent cores, factorization systems and Lawvere-Tierney topologies")]
pub struct Cli {
    /// Report format on stdout.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// Write per-phase wall-clock timings to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub timings: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Core,
    Plus,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Core => Method::Core,
            MethodArg::Plus => Method::Plus,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every entity of a problem file.
    Validate { file: PathBuf },
    /// Orthogonality of two morphism classes.
    Orth {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["LEFT", "RIGHT"], required = true)]
        pair: Vec<String>,
        /// Check the enriched (presheaf-valued) variant on the presheaves of the file.
        #[arg(long)]
        enriched: bool,
        /// Category the classes live in, when the file has several.
        #[arg(long)]
        category: Option<String>,
    },
    /// Factorization system checks with stability and closure reports.
    FactsysCheck {
        file: PathBuf,
        #[arg(long)]
        system: Option<String>,
    },
    /// Idempotent core of a monad.
    Core {
        file: PathBuf,
        #[arg(long)]
        monad: String,
        /// Class to use in place of the one generated by the monad.
        #[arg(long)]
        sigma: Option<String>,
        /// Ambient factorization system (defaults to isos and all morphisms).
        #[arg(long)]
        system: Option<String>,
    },
    /// Enumerate Lawvere-Tierney topologies and Grothendieck topologies.
    LtEnum {
        file: PathBuf,
        #[arg(long)]
        category: Option<String>,
    },
    /// Sheafify a presheaf.
    Sheafify {
        file: PathBuf,
        #[arg(long)]
        presheaf: String,
        #[arg(long)]
        topology: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
    /// Bounded sweep of the dense/closed characterization for one topology.
    VerifyLt {
        file: PathBuf,
        #[arg(long)]
        topology: String,
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
    /// Quasitopos classification for bisites.
    Quasitopos {
        file: PathBuf,
        #[arg(long)]
        bisite: Option<String>,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Run the campaigns of a file, or the acceptance criteria without one.
    Suite {
        file: Option<PathBuf>,
        /// Restrict the acceptance run to these criteria.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
        criterion: Vec<u8>,
        /// Fixture directory for the validator criterion.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

/// Loads `file` and runs `f` on the model, or reports the parse failure.
fn with_model(
    command: &str,
    file: &std::path::Path,
    f: impl FnOnce(&mut model::Model) -> CommandReport,
) -> CommandReport {
    match commands::load(file) {
        Ok(mut m) => f(&mut m),
        Err(e) => {
            let mut rep = CommandReport::new(command);
            let mut r = Report::new();
            r.record_witness("parse", Scope::Exact, Some(e));
            rep.absorb("", r);
            rep
        }
    }
}

/// The acceptance criteria as one report with a check per criterion.
pub fn acceptance_report(acc: &Acceptance, only: &[u8]) -> CommandReport {
    let mut rep = CommandReport::new("suite");
    let mut summary = serde_json::Map::new();
    for n in 1..=8u8 {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let out = acc.run(n);
        let problem = if out.passed() {
            None
        } else {
            Some(out.first_problem().unwrap_or_else(|| String::from("nothing checked")))
        };
        let mut r = Report::new();
        r.record_witness(format!("criterion {n}: {}", out.title), Scope::Bounded, problem);
        rep.absorb("", r);
        rep.timings.push((format!("criterion {n}"), out.elapsed));
        summary.insert(
            format!("criterion {n}"),
            serde_json::json!({
                "checks": out.report.checks.len(),
                "failed": out.report.failed(),
                "skipped": out.report.skipped(),
                "summary": out.summary,
            }),
        );
        if rep.budget_exceeded.is_none() {
            rep.budget_exceeded = out.budget.clone();
        }
    }
    rep.data("criteria", serde_json::Value::Object(summary));
    rep
}

/// Runs a parsed command line, writing reports, and returns the exit code.
pub fn run(cli: Cli) -> i32 {
    let rep = match cli.command {
        Command::Validate { file } => commands::validate(&file),
        Command::Orth { file, pair, enriched, category } => {
            with_model("orth", &file, |m| commands::orth(m, &pair[0], &pair[1], enriched, category.as_deref()))
        }
        Command::FactsysCheck { file, system } => {
            with_model("factsys-check", &file, |m| commands::factsys_check(m, system.as_deref()))
        }
        Command::Core { file, monad, sigma, system } => {
            with_model("core", &file, |m| commands::core(m, &monad, sigma.as_deref(), system.as_deref()))
        }
        Command::LtEnum { file, category } => {
            with_model("lt-enum", &file, |m| commands::lt_enum(m, category.as_deref()))
        }
        Command::Sheafify { file, presheaf, topology, method } => {
            with_model("sheafify", &file, |m| commands::sheafify(m, &presheaf, &topology, method.into()))
        }
        Command::VerifyLt { file, topology, bound } => {
            with_model("verify-lt", &file, |m| commands::verify_lt(m, &topology, bound))
        }
        Command::Quasitopos { file, bisite, bound } => {
            with_model("quasitopos", &file, |m| commands::quasitopos(m, bisite.as_deref(), bound))
        }
        Command::Suite { file: Some(file), .. } => with_model("suite", &file, |m| commands::campaigns(&file, m)),
        Command::Suite { file: None, criterion, fixtures } => {
            let acc =
                Acceptance::new(idemcore::Budget::default(), fixtures.unwrap_or_else(acceptance::default_fixtures));
            acceptance_report(&acc, &criterion)
        }
    };
    let out = match cli.format {
        Format::Text => rep.render_text(),
        Format::Json => rep.render_json(),
    };
    print!("{out}");
    if let Some(path) = cli.timings {
        if let Err(e) = fs::write(&path, rep.render_timings()) {
            eprintln!("cannot write {}: {e}", path.display());
            return EXIT_FAIL;
        }
    }
    rep.exit_code()
}

/// Parses `args` and runs; usage errors exit with [`EXIT_USAGE`].
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                0
            }
        }
    }
}

//! `binoc`: decompositions of binomial ideals from the command line.
//!
//! Exit codes: 0 success, 2 certificate failed, 3 unsupported scope,
//! 4 parse or configuration error.

mod commands;
mod document;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use binoc_core::groebner::{global_limits, set_global_limits};
use binoc_core::parse::{parse_ideal_file, IdealFile};
use binoc_core::render::RenderFormat;
use binoc_core::{Error, Fp, Rational};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use commands::{ClosureKind, DecomposeArgs, Mode, RenderArgs};
use document::ResultDocument;

#[derive(Parser)]
#[command(name = "binoc", version, about = "Decompositions of binomial ideals")]
struct Cli {
    /// Worker threads (default: number of processors).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose an ideal and print a result document.
    Decompose {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Greedily drop redundant components.
        #[arg(long)]
        prune: bool,
        /// Box growth rounds for the soccular certificate.
        #[arg(long, default_value_t = 4)]
        rounds: usize,
        /// Attach the binomial-irreducibility report (binoccular mode).
        #[arg(long)]
        report: bool,
        /// Write the document here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Witnesses of every finite localization, or of one prime.
    Witnesses {
        file: PathBuf,
        /// Comma separated variables of the monoid prime.
        #[arg(long)]
        prime: Option<String>,
        #[arg(long)]
        key_only: bool,
    },
    /// Classes and predicates of the localized congruences.
    Congruence {
        file: PathBuf,
        #[arg(long)]
        prime: Option<String>,
    },
    /// Socle bases of the localized quotients.
    Socle {
        file: PathBuf,
        #[arg(long)]
        prime: Option<String>,
    },
    /// Binoccular, soccular or irreducible closure at a prime (default: maximal).
    Closure {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: ClosureKind,
        #[arg(long)]
        prime: Option<String>,
        /// Cogenerator monomial for the irreducible closure.
        #[arg(long)]
        witness: Option<String>,
    },
    /// Re-check a result document against its input.
    Verify { document: PathBuf },
    /// Draw the congruence on N^2.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        /// Draw the localized congruence at this prime.
        #[arg(long)]
        prime: Option<String>,
        /// Draw the soccular closure instead.
        #[arg(long)]
        soccular_closure: bool,
        #[arg(long)]
        width: Option<u32>,
        #[arg(long)]
        height: Option<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Config(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Core(Error::Parse { .. }) | CliError::Config(_) => 4,
            CliError::Core(Error::BoundExceeded { .. } | Error::CrossCheckMismatch(_)) => 2,
            CliError::Core(_) => 3,
        }
    }

    fn kind(&self) -> String {
        match self {
            CliError::Core(e) => format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("").to_string(),
            CliError::Config(_) => "Config".into(),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<IdealFile, CliError> {
    Ok(parse_ideal_file(&read(path)?)?)
}

/// Runs `$body` with `$ideal` bound over the file's coefficient field.
macro_rules! over_field {
    ($file:expr, |$ideal:ident| $body:expr) => {{
        let file: &IdealFile = $file;
        if file.characteristic == 0 {
            let $ideal = file.ideal(&Rational::from_integer(1.into()));
            $body
        } else {
            let $ideal = file.ideal(&Fp::new(1, file.characteristic));
            $body
        }
    }};
}

fn print_json(v: &impl serde::Serialize) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(v).map_err(|e| CliError::Config(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let jobs = cli.jobs.unwrap_or_else(rayon::current_num_threads);
    match cli.command {
        Command::Decompose {
            file,
            mode,
            prune,
            rounds,
            report,
            output,
        } => {
            let f = load(&file)?;
            let args = DecomposeArgs {
                mode,
                prune,
                rounds,
                report,
                jobs,
            };
            let doc = over_field!(&f, |ideal| commands::decompose(&f, &ideal, &args)?);
            let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Config(e.to_string()))?;
            match output {
                Some(p) => std::fs::write(&p, text + "\n").map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?,
                None => println!("{text}"),
            }
            Ok(doc.certificate.verdict)
        }
        Command::Witnesses { file, prime, key_only } => {
            let f = load(&file)?;
            let v = over_field!(&f, |ideal| commands::witnesses(&ideal, prime.as_deref(), key_only, &f.names)?);
            print_json(&v)?;
            Ok(true)
        }
        Command::Congruence { file, prime } => {
            let f = load(&file)?;
            let v = over_field!(&f, |ideal| commands::congruence(&ideal, prime.as_deref(), &f.names)?);
            print_json(&v)?;
            Ok(true)
        }
        Command::Socle { file, prime } => {
            let f = load(&file)?;
            let v = over_field!(&f, |ideal| commands::socle(&ideal, prime.as_deref(), &f.names)?);
            print_json(&v)?;
            Ok(true)
        }
        Command::Closure {
            file,
            kind,
            prime,
            witness,
        } => {
            let f = load(&file)?;
            let v = over_field!(&f, |ideal| commands::closure(
                &ideal,
                kind,
                prime.as_deref(),
                witness.as_deref(),
                &f.names
            )?);
            print_json(&v)?;
            Ok(true)
        }
        Command::Verify { document } => {
            let doc: ResultDocument =
                serde_json::from_str(&read(&document)?).map_err(|e| CliError::Config(format!("{}: {e}", document.display())))?;
            if doc.schema != document::SCHEMA {
                return Err(CliError::Config(format!("unsupported schema version '{}'", doc.schema)));
            }
            let f = parse_ideal_file(&doc.input.to_text())?;
            let (v, ok) = over_field!(&f, |ideal| commands::verify(&doc, &f, &ideal)?);
            print_json(&v)?;
            Ok(ok)
        }
        Command::Render {
            file,
            format,
            prime,
            soccular_closure,
            width,
            height,
        } => {
            let f = load(&file)?;
            let args = RenderArgs {
                format: match format {
                    Format::Ascii => RenderFormat::Ascii,
                    Format::Svg => RenderFormat::Svg,
                },
                prime,
                soccular_closure,
                width,
                height,
            };
            let s = over_field!(&f, |ideal| commands::render_file(&ideal, &args, &f.names)?);
            print!("{s}");
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Ok(v) = std::env::var("BINOC_MAX_DEGREE") {
        match v.parse::<u32>() {
            Ok(d) => set_global_limits(binoc_core::groebner::Limits {
                max_degree: d,
                ..global_limits()
            }),
            Err(_) => {
                eprintln!("{}", json!({"error": "Config", "message": format!("BINOC_MAX_DEGREE is not a number: {v}")}));
                return ExitCode::from(4);
            }
        }
    }
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{}", json!({"error": "Config", "message": e.to_string()}));
            return ExitCode::from(4);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("{}", json!({"error": "CertificateFailed", "message": "certificate did not hold"}));
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.to_string(), "exit": e.code()}));
            ExitCode::from(e.code())
        }
    }
}

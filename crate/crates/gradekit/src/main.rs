use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use gradekit::cli::{self, Caps, Document, Format};

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Structured,
}

/// Exact computations with group-graded algebras over finite fields.
#[derive(Parser)]
#[command(name = "gradekit", version)]
struct Args {
    /// One of: h2, cocycle, algebra, module, obstruction, extend, theorem-a,
    /// wedderburn, correspond, selftest.
    command: String,
    /// Problem document (JSON); `-` reads standard input. Optional for selftest.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "human")]
    format: FormatArg,
    /// Overrides GRADEKIT_SEED and the document seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Cap overrides, e.g. `classes=16`.
    #[arg(long)]
    caps: Option<String>,
    /// Record wall-clock time in the report (breaks byte-identical output).
    #[arg(long)]
    timing: bool,
}

fn read_input(path: &Option<PathBuf>, command: &str) -> std::io::Result<String> {
    match path {
        None if command == "selftest" => Ok(format!("{{\"schema\":\"{}\"}}", cli::DOCUMENT_SCHEMA)),
        None => Err(std::io::Error::new(std::io::ErrorKind::InvalidInput, "--in is required")),
        Some(p) if p.as_os_str() == "-" => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
        Some(p) => std::fs::read_to_string(p),
    }
}

fn execute(args: &Args) -> gradekit::Result<cli::Report> {
    let text = read_input(&args.input, &args.command).map_err(|e| gradekit::Error::parse("--in", e.to_string()))?;
    let doc = Document::parse(&text)?;
    let seed = cli::resolve_seed(args.seed, &doc)?;
    let caps = match &args.caps {
        Some(c) => Caps::parse(c)?,
        None => Caps::default(),
    };
    let start = Instant::now();
    let mut report = cli::run(&args.command, &doc, seed, caps)?;
    if args.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let format = match args.format {
        FormatArg::Human => Format::Human,
        FormatArg::Structured => Format::Structured,
    };
    match execute(&args) {
        Ok(report) => {
            print!("{}", cli::render(&report, format));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            match format {
                Format::Structured => println!("{}", serde_json::to_string_pretty(&cli::error_value(&e)).unwrap()),
                Format::Human => eprintln!("error [{}::{}]: {e}", e.module(), e.kind()),
            }
            ExitCode::from(1)
        }
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use koszulkit::corpus;
use koszulkit::io::{self, Document};
use koszulkit::report::{self, Method, Report, Subject, Which};
use koszulkit::{Error, Field};

#[derive(Parser)]
#[command(name = "koszulkit", version, about = "Exact Koszul duality computations for quadratic and nonhomogeneous presentations")]
struct Cli {
    /// Read scalars over this field instead of the one in the file: `q` or `fp:<p>`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads; falls back to KOSZULKIT_THREADS. Never changes the output.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Distributive,
    Tor,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    First,
    Second,
    Dual,
    Nonhomog,
    Resolution,
}

#[derive(Subcommand)]
enum Command {
    /// Presentation invariants, generation and quadraticity.
    CheckQuadratic {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
    /// Quadratic dual with a dimension table.
    Dualize {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Koszulity up to a degree.
    Koszul {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
    },
    /// Self-consistency equations (a) to (k).
    NonhomogCheck { file: PathBuf },
    /// The dual CDG ring through a degree.
    CdgDual {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Filtered ring dimensions and the PBW certificate.
    Pbw {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// Homology tables of Koszul complexes and resolutions.
    Complexes {
        file: PathBuf,
        #[arg(long, value_enum)]
        which: WhichArg,
        #[arg(long)]
        budget: usize,
    },
    /// Frobenius property of the dual ring.
    Frobenius {
        file: PathBuf,
        #[arg(long)]
        top: usize,
    },
    /// Conversion bimodule isomorphisms in a filtration window.
    Convert {
        file: PathBuf,
        #[arg(long)]
        budget: usize,
    },
    /// Random presentations checked by both Koszulity tests and the Koszul complexes.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: u64,
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
    /// A fixed battery over the built-in corpus.
    Corpus {
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
    /// Write the built-in corpus as `.kz` files.
    ExportCorpus { dir: PathBuf },
}

enum Failure {
    User(String),
    Verdict(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Precondition(_) => Failure::Verdict(e.to_string()),
            Error::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::User(e.to_string()),
        }
    }
}

fn parse_field(s: &str) -> Result<Field, Failure> {
    s.parse::<Field>().map_err(|e| Failure::User(format!("--field: {e}")))
}

struct Ctx {
    field: Option<Field>,
    echo: String,
}

impl Ctx {
    fn subject(&self, path: &Path) -> Result<Subject, Failure> {
        let mut doc = io::load(path)?;
        if let Some(f) = self.field {
            doc.field = io::field_spec(f);
        }
        Ok(Subject::from_document(&doc)?)
    }
}

fn write_doc(doc: &Document, path: &Path) -> Result<(), Failure> {
    Ok(io::save(doc, path)?)
}

fn run(cli: &Cli, ctx: &Ctx) -> Result<Report, Failure> {
    let echo = ctx.echo.as_str();
    let r = match &cli.command {
        Command::CheckQuadratic { file, degree } => {
            let s = ctx.subject(file)?;
            report::check_quadratic(echo, s.presentation()?.quadratic(), *degree)?
        }
        Command::Dualize { file, degree, output } => {
            let s = ctx.subject(file)?;
            let (r, b) = report::dualize(echo, s.presentation()?.quadratic(), *degree)?;
            if let Some(o) = output {
                write_doc(&Document::from_quadratic(&b), o)?;
            }
            r
        }
        Command::Koszul { file, degree, method } => {
            let m = match method {
                MethodArg::Distributive => Method::Distributive,
                MethodArg::Tor => Method::Tor,
                MethodArg::Both => Method::Both,
            };
            let s = ctx.subject(file)?;
            report::koszul(echo, s.presentation()?.quadratic(), *degree, m)?
        }
        Command::NonhomogCheck { file } => {
            let s = ctx.subject(file)?;
            report::nonhomog_check(echo, &s.presentation()?.nonhomogeneous()?)?
        }
        Command::CdgDual { file, degree, output } => {
            let s = ctx.subject(file)?;
            let (r, b) = report::cdg_dual(echo, &s.presentation()?.nonhomogeneous()?, *degree)?;
            if let Some(o) = output {
                write_doc(&Document::from_cdg(&b), o)?;
            }
            r
        }
        Command::Pbw { file, degree } => report::pbw(echo, &ctx.subject(file)?, *degree)?,
        Command::Complexes { file, which, budget } => {
            let w = match which {
                WhichArg::First => Which::First,
                WhichArg::Second => Which::Second,
                WhichArg::Dual => Which::Dual,
                WhichArg::Nonhomog => Which::Nonhomog,
                WhichArg::Resolution => Which::Resolution,
            };
            let s = ctx.subject(file)?;
            report::complexes(echo, s.presentation()?, w, *budget)?
        }
        Command::Frobenius { file, top } => report::frobenius(echo, &ctx.subject(file)?, *top)?,
        Command::Convert { file, budget } => {
            let s = ctx.subject(file)?;
            report::convert(echo, &s.presentation()?.nonhomogeneous()?, *budget)?
        }
        Command::Fuzz { seed, count, degree } => {
            let f = ctx.field.unwrap_or(Field::Prime(5));
            let cases = (0..*count)
                .into_par_iter()
                .map(|i| report::fuzz_case(f, *seed, i, *degree))
                .collect::<Result<Vec<_>, _>>()?;
            report::fuzz_report(echo, &cases)
        }
        Command::Corpus { degree } => {
            let entries = corpus::entries();
            let sections = entries
                .par_iter()
                .map(|e| report::corpus_section(e, *degree))
                .collect::<Result<Vec<_>, _>>()?;
            report::corpus_report(echo, sections)
        }
        Command::ExportCorpus { dir } => {
            std::fs::create_dir_all(dir).map_err(|e| Failure::User(format!("{}: {e}", dir.display())))?;
            let entries = corpus::entries();
            for e in &entries {
                let doc = corpus::document(e);
                write_doc(&doc, &dir.join(format!("{}.kz", e.name)))?;
            }
            let mut r = report::corpus_report(echo, Vec::new());
            r.result = format!("wrote {} files", entries.len());
            r
        }
    };
    Ok(r)
}

fn threads(cli: &Cli) -> Result<Option<usize>, Failure> {
    if let Some(n) = cli.threads {
        return Ok(Some(n));
    }
    match std::env::var("KOSZULKIT_THREADS") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::User(format!("KOSZULKIT_THREADS: not a thread count: {s:?}"))),
        Err(_) => Ok(None),
    }
}

/// Arguments echoed in the report; thread settings are left out so they cannot change it.
fn echo_args(args: impl Iterator<Item = String>) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--threads" {
            skip = true;
        } else if !a.starts_with("--threads=") {
            out.push(a);
        }
    }
    out
}

fn main() -> ExitCode {
    let args = echo_args(std::env::args().skip(1));
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = (|| {
        if let Some(n) = threads(&cli)? {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Internal(e.to_string()))?;
        }
        let ctx = Ctx {
            field: cli.field.as_deref().map(parse_field).transpose()?,
            echo: args.join(" "),
        };
        run(&cli, &ctx)
    })();
    let code = match outcome {
        Ok(r) => {
            print!("{}", if cli.json { r.to_json() } else { r.to_text() });
            r.exit_code() as u8
        }
        Err(Failure::User(m)) => {
            eprintln!("error: {m}");
            1
        }
        Err(Failure::Verdict(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            3
        }
    };
    eprintln!("time: {:.3}s", start.elapsed().as_secs_f64());
    ExitCode::from(code)
}

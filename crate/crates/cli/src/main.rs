//! `frolicher`: spectral sequence pages, Bott-Chern and Aeppli cohomology, page ∂∂̄
//! verdicts, harmonic theory, decompositions and duality for bounded double complexes.

mod compute;
mod error;
mod input;
mod render;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frolicher::bicomplex::{ComplexFile, DoubleComplex};
use frolicher::pairing::{dual_sum, DualityPairing};

use crate::compute::Checked;
use crate::error::CliError;
use crate::report::Report;

#[derive(Parser)]
#[command(name = "frolicher", version, about = "Exact invariants of bounded double complexes over ℚ")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Md)]
    format: Format,
    /// Seed for randomized steps (constructive decomposition, random metrics).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the output here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    out: Option<PathBuf>,
    /// Include witnesses and failing bidegrees with page verdicts.
    #[arg(long, global = true)]
    explain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Args)]
struct Source {
    /// A complex file, a CDGA file or an `example://` URI.
    input: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check d1² = 0, d2² = 0 and d1d2 + d2d1 = 0 at every bidegree.
    Validate(Source),
    /// Dimensions of E_r and Ē_r.
    Pages {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        rmax: Option<usize>,
        /// List class representatives.
        #[arg(long)]
        show_reps: bool,
    },
    /// Dimensions of the page-r Bott-Chern and Aeppli cohomologies.
    Bca {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        rmax: Option<usize>,
    },
    /// The page-(r−1) ∂∂̄ verdict by every criterion.
    CheckPageddbar {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        r: usize,
    },
    /// Harmonic spaces and their Laplacian checks.
    Hodge {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        rmax: Option<usize>,
        /// Gram file, or `random` for a seeded random metric.
        #[arg(long)]
        gram: Option<String>,
    },
    /// Square and zigzag multiplicities.
    Decompose {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        rmax: Option<usize>,
        /// Construct and verify a basis certificate.
        #[arg(long)]
        constructive: bool,
        /// Where to write the certificate.
        #[arg(long, requires = "constructive")]
        certificate: Option<PathBuf>,
    },
    /// Validate a duality pairing and the pairings it induces.
    Duality {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        pairing: String,
        #[arg(long)]
        rmax: Option<usize>,
    },
    /// Every section at once.
    Report {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        rmax: Option<usize>,
        #[arg(long)]
        gram: Option<String>,
        #[arg(long)]
        pairing: Option<String>,
        #[arg(long)]
        constructive: bool,
    },
    /// Re-render a JSON report.
    Render {
        /// A report written with `--format json`.
        report: String,
    },
    /// Write a built-in complex as a complex file.
    #[command(subcommand)]
    Example(Example),
}

#[derive(Subcommand)]
enum Example {
    /// Truncated Calabi-Eckmann model.
    CalabiEckmann {
        #[arg(long)]
        u: u32,
        #[arg(long)]
        v: u32,
        /// Weight bound; defaults to 2(u+v+2).
        #[arg(long)]
        w: Option<u32>,
    },
    /// A single zigzag.
    Zigzag {
        /// Bidegree of the first generator.
        #[arg(long, default_value = "0,1")]
        start: String,
        #[arg(long, default_value_t = 1)]
        gens: usize,
        /// Arrow leaving the first generator downward.
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        left: u8,
        /// Arrow leaving the last generator to the right.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
        right: u8,
        /// Emit the zigzag summed with its signed dual.
        #[arg(long)]
        with_dual: bool,
        /// Where to write the duality pairing of the sum.
        #[arg(long, requires = "with_dual")]
        pairing_out: Option<PathBuf>,
    },
    /// A square with its corner at the given bidegree.
    Square {
        #[arg(long, default_value = "0,0")]
        at: String,
    },
}

/// Rendered output plus the first failed check, which turns into exit code 1.
struct Outcome {
    text: String,
    failure: Option<String>,
}

fn rmax_or_default(c: &DoubleComplex, rmax: Option<usize>) -> Result<usize, CliError> {
    match rmax {
        Some(0) => Err(CliError::Usage("--rmax must be at least 1".into())),
        Some(r) => Ok(r),
        None => Ok(c.grid().default_rmax()),
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        Format::Md => render::markdown(report),
    }
}

fn collect<T>(failures: &mut Vec<String>, checked: Checked<T>) -> T {
    failures.extend(checked.failure);
    checked.value
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn complex_text(c: &DoubleComplex) -> String {
    let mut text = ComplexFile::to_string(c.data());
    if !text.ends_with('\n') {
        text.push('\n');
    }
    text
}

fn example(which: Example) -> Result<String, CliError> {
    match which {
        Example::CalabiEckmann { u, v, w } => Ok(complex_text(&input::calabi_eckmann(u, v, w)?)),
        Example::Square { at } => {
            let at = input::parse_bidegree(&at)?;
            if at.p < 0 || at.q < 0 {
                return Err(CliError::Usage(format!("square corner {at} is negative")));
            }
            Ok(complex_text(&frolicher::models::build_square(at.p, at.q)))
        }
        Example::Zigzag { start, gens, left, right, with_dual, pairing_out } => {
            let z = input::zigzag(input::parse_bidegree(&start)?, gens, left == 1, right == 1)?;
            if !with_dual {
                return Ok(complex_text(&z));
            }
            let (sum, pairing) = dual_sum(&z).map_err(|e| CliError::invalid("pairing", e))?;
            if let Some(path) = pairing_out {
                write_file(&path, &(pairing.to_json() + "\n"))?;
            }
            Ok(complex_text(&sum))
        }
    }
}

fn load_pairing(c: &DoubleComplex, path: &str) -> Result<DualityPairing, CliError> {
    let text = input::read(path)?;
    DualityPairing::from_json(c, &text).map_err(|e| CliError::invalid("pairing", format!("{path}: {e}")))
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let format = cli.format;
    let mut failures = Vec::new();
    let report = match cli.command {
        Command::Example(which) => return Ok(Outcome { text: example(which)?, failure: None }),
        Command::Render { report } => {
            let text = input::read(&report)?;
            let parsed: Report = serde_json::from_str(&text)
                .map_err(|e| CliError::invalid("parse", format!("{report}: {e}")))?;
            if parsed.format_version != report::FORMAT_VERSION {
                return Err(CliError::invalid("parse", format!("{report}: unsupported format version {}", parsed.format_version)));
            }
            return Ok(Outcome { text: render(&parsed, format), failure: None });
        }
        Command::Validate(source) => {
            let data = input::load_data(&source.input)?;
            let mut report = compute::base_report(&data);
            report.validation = Some(collect(&mut failures, compute::validation(&data)));
            report
        }
        Command::Pages { source, rmax, show_reps } => {
            let c = input::load(&source.input)?;
            let rmax = rmax_or_default(&c, rmax)?;
            let mut report = compute::base_report(c.data());
            report.pages = Some(compute::pages(&c, rmax, show_reps));
            report
        }
        Command::Bca { source, rmax } => {
            let c = input::load(&source.input)?;
            let rmax = rmax_or_default(&c, rmax)?;
            let mut report = compute::base_report(c.data());
            report.bca = Some(compute::bca(&c, rmax)?);
            report
        }
        Command::CheckPageddbar { source, r } => {
            let c = input::load(&source.input)?;
            let mut report = compute::base_report(c.data());
            report.verdicts = vec![compute::verdict(&c, r, None, cli.explain)?];
            report
        }
        Command::Hodge { source, rmax, gram } => {
            let c = input::load(&source.input)?;
            let rmax = rmax_or_default(&c, rmax)?;
            let (ip, metric) = compute::inner_product(&c, gram.as_deref(), cli.seed)?;
            let mut report = compute::base_report(c.data());
            report.hodge = Some(collect(&mut failures, compute::hodge(&c, &ip, metric, rmax)));
            report
        }
        Command::Decompose { source, rmax, constructive, certificate } => {
            let c = input::load(&source.input)?;
            let rmax = rmax_or_default(&c, rmax)?;
            let mut report = compute::base_report(c.data());
            let mut found = compute::decomposition(&c, rmax, constructive, cli.seed)?;
            if let (Some(path), Some(cert)) = (&certificate, &found.certificate) {
                write_file(path, &(serde_json::to_string_pretty(cert).expect("certificates serialize") + "\n"))?;
                if let Some(entry) = found.section.certificate.as_mut() {
                    entry.file = Some(path.display().to_string());
                }
            }
            failures.extend(found.failure);
            report.decomposition = Some(found.section);
            report
        }
        Command::Duality { source, pairing, rmax } => {
            let c = input::load(&source.input)?;
            let rmax = rmax_or_default(&c, rmax)?;
            let pairing = load_pairing(&c, &pairing)?;
            let mut report = compute::base_report(c.data());
            report.duality = Some(collect(&mut failures, compute::duality(&c, &pairing, rmax)?));
            report
        }
        Command::Report { source, rmax, gram, pairing, constructive } => {
            let c = input::load(&source.input)?;
            let rmax = rmax_or_default(&c, rmax)?;
            let pairing = pairing.map(|p| load_pairing(&c, &p)).transpose()?;
            let (ip, metric) = compute::inner_product(&c, gram.as_deref(), cli.seed)?;
            let mut report = compute::base_report(c.data());
            report.validation = Some(collect(&mut failures, compute::validation(c.data())));
            report.pages = Some(compute::pages(&c, rmax, false));
            report.bca = Some(compute::bca(&c, rmax)?);
            report.inequality = collect(&mut failures, compute::inequality(&c, rmax)?);
            let found = compute::decomposition(&c, rmax, constructive, cli.seed)?;
            failures.extend(found.failure);
            report.verdicts = (1..=rmax).map(|r| compute::verdict(&c, r, found.inventory.as_ref(), cli.explain)).collect::<Result<_, _>>()?;
            report.hodge = Some(collect(&mut failures, compute::hodge(&c, &ip, metric, rmax)));
            report.decomposition = Some(found.section);
            if let Some(p) = &pairing {
                report.duality = Some(collect(&mut failures, compute::duality(&c, p, rmax)?));
            }
            report.einfty = Some(collect(&mut failures, compute::einfty(&c)));
            report
        }
    };
    Ok(Outcome { text: render(&report, format), failure: failures.into_iter().next() })
}

fn fail(err: &CliError) -> ExitCode {
    eprintln!("{}", err.to_json());
    ExitCode::from(err.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Usage(e.to_string().trim_end().to_string())),
    };
    let out = cli.out.clone();
    let outcome = match run(cli) {
        Ok(outcome) => outcome,
        Err(e) => return fail(&e),
    };
    match &out {
        Some(path) => {
            if let Err(e) = write_file(path, &outcome.text) {
                return fail(&e);
            }
        }
        None => print!("{}", outcome.text),
    }
    match outcome.failure {
        Some(message) => fail(&CliError::invalid("check", message)),
        None => ExitCode::SUCCESS,
    }
}

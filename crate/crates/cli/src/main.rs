mod render;
mod suite;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use relplp_core::relevance::{
    evaluate_all, select_interpretation, EvaluationError, EvaluationErrorKind, HypothesisReport,
    InterpretiveHypothesis, Priors, SelectionError,
};
use relplp_core::wmc::{InferenceError, InferenceMode, InferenceOptions, DEFAULT_MAX_WORLDS};
use relplp_core::Parallelism;

#[derive(Debug, Parser)]
#[command(name = "relplp", version, about = "Score interpretive hypotheses written as probabilistic logic programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Priors file (`atom<TAB>p` lines or a JSON object). Give it once for
    /// all hypotheses or once per hypothesis, in order.
    #[arg(long, global = true)]
    priors: Vec<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    #[arg(long, value_enum, default_value_t = Mode::Auto, global = true)]
    mode: Mode,

    /// Largest number of worlds enumeration may visit per query.
    #[arg(long, default_value_t = DEFAULT_MAX_WORLDS, global = true)]
    max_worlds: u64,

    /// Write each relevant ground program to stderr.
    #[arg(long, global = true)]
    dump_ground: bool,

    /// Disable data-parallel evaluation.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one hypothesis.
    Eval {
        file: PathBuf,
        /// Report label; defaults to the file stem.
        #[arg(long)]
        label: Option<String>,
    },
    /// Evaluate several hypotheses and select an interpretation.
    Compare {
        #[arg(num_args = 2.., required = true)]
        files: Vec<PathBuf>,
        /// One label per file, in order; defaults to the file stems.
        #[arg(long)]
        label: Vec<String>,
    },
    /// Run the bundled five-hypothesis experiment and diff against the
    /// published tables.
    PaperSuite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Auto,
    Enumerate,
    Compiled,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Evaluation(EvaluationError),
    NoInterpretation,
    SuiteFailed(usize),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) | Failure::SuiteFailed(_) => 1,
            Failure::Evaluation(e) => match &e.kind {
                EvaluationErrorKind::Parse(_) => 2,
                EvaluationErrorKind::Grounding(_) => 3,
                EvaluationErrorKind::Inference(InferenceError::InconsistentEvidence { .. }) => 4,
                EvaluationErrorKind::Inference(InferenceError::WorldCapExceeded { .. }) => 5,
                _ => 1,
            },
            Failure::NoInterpretation => 6,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Evaluation(e) => e.to_string(),
            Failure::NoInterpretation => SelectionError::NoInterpretation { eliminated: Vec::new() }.to_string(),
            Failure::SuiteFailed(n) => format!("{n} paper-suite check(s) failed"),
        }
    }
}

fn options(cli: &Cli) -> InferenceOptions {
    InferenceOptions {
        mode: match cli.mode {
            Mode::Auto => InferenceMode::Auto,
            Mode::Enumerate => InferenceMode::Enumerate,
            Mode::Compiled => InferenceMode::Compiled,
        },
        max_worlds: cli.max_worlds,
        parallelism: if cli.sequential {
            Parallelism::Sequential
        } else {
            Parallelism::Parallel
        },
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_priors(path: &Path) -> Result<Priors, Failure> {
    Priors::parse(&read(path)?).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn load_hypotheses(
    files: &[PathBuf],
    labels: &[String],
    priors: &[PathBuf],
) -> Result<Vec<InterpretiveHypothesis>, Failure> {
    if !labels.is_empty() && labels.len() != files.len() {
        return Err(Failure::Usage(format!(
            "got {} --label values for {} files",
            labels.len(),
            files.len()
        )));
    }
    let priors: Vec<Priors> = match priors.len() {
        0 => vec![Priors::new(); files.len()],
        1 => vec![load_priors(&priors[0])?; files.len()],
        n if n == files.len() => priors.iter().map(|p| load_priors(p)).collect::<Result<_, _>>()?,
        n => {
            return Err(Failure::Usage(format!(
                "got {n} --priors files for {} hypotheses; give one, or one per hypothesis",
                files.len()
            )))
        }
    };
    files
        .iter()
        .zip(priors)
        .enumerate()
        .map(|(i, (file, priors))| {
            let label = labels.get(i).cloned().unwrap_or_else(|| stem(file));
            InterpretiveHypothesis::from_source(label, &read(file)?, priors).map_err(Failure::Evaluation)
        })
        .collect()
}

fn dump_ground(hypotheses: &[InterpretiveHypothesis]) -> Result<(), Failure> {
    let mut err = io::stderr().lock();
    for h in hypotheses {
        let gp = h.ground().map_err(Failure::Evaluation)?;
        let _ = writeln!(err, "% ground program: {}", h.label);
        let _ = write!(err, "{}", gp.to_canonical_text());
    }
    Ok(())
}

fn evaluate(cli: &Cli, hypotheses: &[InterpretiveHypothesis]) -> Result<Vec<HypothesisReport>, Failure> {
    if cli.dump_ground {
        dump_ground(hypotheses)?;
    }
    evaluate_all(hypotheses, &options(cli))
        .into_iter()
        .collect::<Result<_, _>>()
        .map_err(Failure::Evaluation)
}

fn run(cli: &Cli, out: &mut String) -> Result<(), Failure> {
    match &cli.command {
        Command::Eval { file, label } => {
            let labels: Vec<String> = label.iter().cloned().collect();
            let hypotheses = load_hypotheses(std::slice::from_ref(file), &labels, &cli.priors)?;
            let reports = evaluate(cli, &hypotheses)?;
            out.push_str(&render::report(&reports[0], cli.format));
            Ok(())
        }
        Command::Compare { files, label } => {
            let hypotheses = load_hypotheses(files, label, &cli.priors)?;
            let reports = evaluate(cli, &hypotheses)?;
            let selection = select_interpretation(&reports);
            out.push_str(&render::comparison(&reports, &selection, cli.format));
            match selection {
                Ok(_) => Ok(()),
                Err(_) => Err(Failure::NoInterpretation),
            }
        }
        Command::PaperSuite => {
            let failed = suite::run(&options(cli), out).map_err(Failure::Evaluation)?;
            if failed == 0 {
                Ok(())
            } else {
                Err(Failure::SuiteFailed(failed))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not errors; every other usage
            // problem exits 1 so that 2 stays reserved for parse errors.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let mut out = String::new();
    let result = run(&cli, &mut out);
    let mut stdout = io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("relplp: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use distmon::distortion::BinaryFamily;
use distmon::exactlin::{Field, Grading};
use distmon::harness::universe::default_parity_universe;
use distmon::harness::{emit_report, load_scenario, run_examples, run_suite, Format, HarnessError};
use distmon::report::CheckBudget;
use distmon::twist::search_structural_idempotents;

#[derive(Parser)]
#[command(name = "distmon", version, about = "Exact checks for distorted monoidal structures on graded vector spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GradingArg {
    Trivial,
    Parity,
    Nat,
}

#[derive(Clone, Copy, ValueEnum)]
enum BraidingArg {
    Koszul,
    Symmetric,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of one scenario file.
    Check {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Stop after the first failing check.
        #[arg(long)]
        fail_fast: bool,
    },
    /// Run the builtin catalog against its expected verdicts.
    Examples {
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Enumerate normalized structural idempotents and their axiom verdicts.
    SearchIdempotents {
        #[arg(long, value_enum)]
        grading: GradingArg,
        #[arg(long, value_enum, default_value = "koszul")]
        braiding: BraidingArg,
    },
}

fn run(cli: Cli) -> Result<bool, HarnessError> {
    match cli.command {
        Command::Check { scenario, seed, samples, format, fail_fast } => {
            let mut s = load_scenario(&scenario)?;
            if let Some(seed) = seed {
                s.seed = seed;
            }
            if let Some(n) = samples {
                s.samples = n;
            }
            let entries = run_suite(&s, fail_fast)?;
            print!("{}", emit_report(&s.hash, s.seed, &entries, format.into()));
            Ok(entries.iter().all(|e| e.report.passed()))
        }
        Command::Examples { format, seed } => {
            let run = run_examples(seed, format.into())?;
            print!("{}", run.document);
            Ok(run.all_match)
        }
        Command::SearchIdempotents { grading, braiding } => {
            let grading = match grading {
                GradingArg::Trivial => Grading::Trivial,
                GradingArg::Parity => Grading::Parity,
                GradingArg::Nat => Grading::Nat,
            };
            let field = Field::Rational;
            let beta = match braiding {
                BraidingArg::Koszul => BinaryFamily::koszul(field),
                BraidingArg::Symmetric => BinaryFamily::symmetric(field),
            };
            let rows = search_structural_idempotents(grading, &beta, field, &default_parity_universe(), &CheckBudget::default())?;
            for row in &rows {
                let cells: Vec<String> = row.reports.iter().map(|r| format!("{}={}", r.axiom, r.verdict)).collect();
                println!("c11={}  {}", row.c11, cells.join("  "));
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

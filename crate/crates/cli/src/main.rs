use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use racah_core::repmat::to_matrix;
use racah_core::{
    print_canonical, DmContext, DslContext, EmbedContext, Mutation, ParamValues, PiBasis,
    RacahContext, Rational, Report, RepError,
};

#[derive(Parser)]
#[command(name = "racah", version, about = "Exact verifier for Racah algebra operator identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Sln,
    Lemma1,
    Racah,
    Embedding,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print its report.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// m for the sln and lemma1 suites, n otherwise
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Deliberately corrupt one coefficient of the embedding formulas.
        #[arg(long, default_value = "none")]
        mutate: String,
    },
    /// Print the normal form of an expression.
    Normalize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        expr: String,
    },
    /// Print the normal form of [lhs, rhs].
    Commute {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Dump the exact matrix of an operator on polynomials of degree <= k.
    Matrix {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        nu: Vec<String>,
        #[arg(long)]
        op: String,
    },
}

/// Failure split by exit status: bad input versus a failed computation.
enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<bool, Failure> {
    match cmd {
        Command::Verify {
            suite,
            n,
            format,
            out,
            mutate,
        } => {
            let mutation = Mutation::from_str(&mutate)?;
            let report = verify(suite, n, mutation)?;
            let text = match format {
                Format::Text => format!("{report}\n"),
                Format::Json => format!("{}\n", report.to_json()),
            };
            match out {
                Some(path) => fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))
                    .map_err(Failure::Runtime)?,
                None => print!("{text}"),
            }
            Ok(report.all_passed())
        }
        Command::Normalize { n, expr } => {
            let ctx = DslContext::new(n)?;
            println!("{}", print_canonical(&ctx.eval(&expr)?));
            Ok(true)
        }
        Command::Commute { n, lhs, rhs } => {
            let ctx = DslContext::new(n)?;
            let c = ctx.eval(&lhs)?.commutator(&ctx.eval(&rhs)?)?;
            println!("{}", print_canonical(&c));
            Ok(true)
        }
        Command::Matrix { n, k, nu, op } => {
            let ctx = DslContext::new(n)?;
            let nus = nu
                .iter()
                .map(|s| {
                    Rational::from_str(s.trim()).map_err(|_| anyhow!("invalid rational '{s}'"))
                })
                .collect::<Result<Vec<_>>>()?;
            let op = ctx.eval(&op)?;
            let basis = PiBasis::new(n - 2, k);
            match to_matrix(&op, &basis, &ParamValues::new(k, nus)) {
                Ok(m) => {
                    print!("{}", m.dump());
                    Ok(true)
                }
                Err(e @ RepError::Leakage { .. }) => Err(Failure::Runtime(e.into())),
                Err(e) => Err(Failure::Usage(e.into())),
            }
        }
    }
}

fn verify(suite: Suite, n: usize, mutation: Mutation) -> Result<Report> {
    Ok(match suite {
        Suite::Sln => DmContext::new(n)?.check_all::<Rational>(),
        Suite::Lemma1 => DmContext::new(n)?.check_lemma1::<Rational>(),
        Suite::Racah => RacahContext::new(n)?.check_racah_structure::<Rational>(),
        Suite::Embedding => EmbedContext::with_mutation(n, mutation)?.verify_embedding::<Rational>(),
        Suite::All => {
            let embed = EmbedContext::with_mutation(n, mutation)?;
            let dm = DmContext::new(n - 1)?;
            Report::merge(
                "all",
                n,
                vec![
                    dm.check_all::<Rational>(),
                    dm.check_lemma1::<Rational>(),
                    embed.racah().check_racah_structure::<Rational>(),
                    embed.verify_embedding::<Rational>(),
                ],
            )
        }
    })
}

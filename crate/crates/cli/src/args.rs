//! Argument parsing and validation.
//!
//! `clap` handles the surface syntax; [`parse_args`] then resolves every
//! cross-flag constraint (vector length, position range, output format,
//! search-space guard) so that execution never sees an invalid command.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dmfb_dilution::analysis::{normalize_positions, space_size};
use dmfb_dilution::export::plan_from_json;
use dmfb_dilution::target::{parse_exact, MAX_ACCURACY};
use dmfb_dilution::vector::Dispositions;
use dmfb_dilution::{
    build_plan, parse_epsilon, parse_target, Error, Exact, MixSplitPlan, Scalar, SplitDisposition, TargetCF,
};

use crate::CliError;

/// Largest accuracy level searched exhaustively without `--force`.
pub const SIGN_SPACE_CAP: u32 = 24;
/// Same, for the skip-inclusive `{+,-,0}` space.
pub const SKIP_SPACE_CAP: u32 = 14;

#[derive(Debug, Parser)]
#[command(name = "dmfb-dilute", version)]
#[command(about = "Two-way dilution plans and split-error analysis for digital microfluidic biochips")]
struct Cli {
    #[command(subcommand)]
    command: Commands,

    /// Arithmetic backend: binary64 or exact rationals
    #[arg(long, value_enum, default_value_t = Backend::Float, global = true)]
    backend: Backend,

    /// Output format (each subcommand has its own default)
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    /// Write data here instead of stdout
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,

    /// Worker threads for enumeration and sweeps
    #[arg(long, env = "DMFB_THREADS", global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Commands {
    /// Print the mix-split schedule for a target CF
    Plan {
        #[arg(long, value_parser = target_arg)]
        target: TargetCF,
    },
    /// Run one plan under one error vector
    Simulate {
        #[command(flatten)]
        source: PlanSource,
        #[arg(long, value_parser = epsilon_arg, default_value = "0")]
        epsilon: Exact,
        /// One of `+`, `-`, `0` per step O_1..O_{n-1}; defaults to error-free
        #[arg(long, value_parser = vector_arg, allow_hyphen_values = true)]
        vector: Option<Dispositions>,
    },
    /// List every error vector over a set of steps
    Enumerate {
        #[arg(long, value_parser = target_arg)]
        target: TargetCF,
        #[arg(long, value_parser = epsilon_arg)]
        epsilon: Exact,
        /// Steps carrying an error, e.g. `1,3,6` (default: all)
        #[arg(long, value_delimiter = ',')]
        positions: Option<Vec<usize>>,
        /// Also enumerate error-free steps (3^k instead of 2^k rows)
        #[arg(long)]
        include_skip: bool,
        #[arg(long, value_parser = tolerance_arg)]
        tolerance: Option<Exact>,
        #[arg(long)]
        force: bool,
    },
    /// Exhaustive search for the error vector with the largest CF error
    WorstCase {
        #[arg(long, value_parser = target_arg)]
        target: TargetCF,
        #[arg(long, value_parser = epsilon_arg)]
        epsilon: Exact,
        #[arg(long)]
        include_skip: bool,
        #[arg(long)]
        force: bool,
    },
    /// Mark each step as critical or non-critical under a lone split-error
    Classify {
        #[arg(long, value_parser = target_arg)]
        target: TargetCF,
        #[arg(long, value_parser = epsilon_arg)]
        epsilon: Exact,
        #[arg(long, value_parser = tolerance_arg)]
        tolerance: Option<Exact>,
    },
    /// Worst case for every odd target at one accuracy level
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=MAX_ACCURACY as i64))]
        accuracy: u32,
        #[arg(long, value_parser = epsilon_arg)]
        epsilon: Exact,
        #[arg(long)]
        force: bool,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct PlanSource {
    #[arg(long, value_parser = target_arg)]
    target: Option<TargetCF>,
    /// Plan JSON as written by `plan --format json`
    #[arg(long)]
    plan_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Float,
    Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Dot,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Dot => "dot",
        }
    }
}

/// A fully validated invocation.
#[derive(Debug, Clone)]
pub struct Command {
    pub action: Action,
    pub backend: Backend,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone)]
pub enum Action {
    Plan {
        plan: MixSplitPlan,
    },
    Simulate {
        plan: MixSplitPlan,
        epsilon: Exact,
        vector: Vec<SplitDisposition>,
    },
    Enumerate {
        plan: MixSplitPlan,
        epsilon: Exact,
        positions: Vec<usize>,
        include_skip: bool,
        tolerance: Option<Exact>,
    },
    WorstCase {
        plan: MixSplitPlan,
        epsilon: Exact,
        include_skip: bool,
    },
    Classify {
        plan: MixSplitPlan,
        epsilon: Exact,
        tolerance: Option<Exact>,
    },
    Sweep {
        accuracy: u32,
        epsilon: Exact,
    },
}

fn target_arg(s: &str) -> Result<TargetCF, String> {
    parse_target(s).map_err(|e| e.to_string())
}

fn epsilon_arg(s: &str) -> Result<Exact, String> {
    parse_epsilon(s).map_err(|e| e.to_string())
}

fn vector_arg(s: &str) -> Result<Dispositions, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn tolerance_arg(s: &str) -> Result<Exact, String> {
    let t = parse_exact(s).map_err(|e| e.to_string())?;
    if t <= Exact::from_ratio(0, 1) {
        return Err(Error::NonPositiveTolerance.to_string());
    }
    Ok(t)
}

/// Refuses exhaustive searches past the default caps unless forced.
fn guard(what: &str, slots: usize, include_skip: bool, per_item: u128, force: bool) -> Result<(), CliError> {
    let (cap, base) = if include_skip { (SKIP_SPACE_CAP, 3u128) } else { (SIGN_SPACE_CAP, 2u128) };
    if force || (slots as u32) < cap {
        return Ok(());
    }
    let vectors = space_size(slots, include_skip);
    let simulations = vectors.saturating_mul(per_item);
    let op_evals = simulations.saturating_mul(slots as u128 + 1);
    Err(CliError::Guard(format!(
        "{what} needs {base}^{slots} = {vectors} error vectors per target ({simulations} simulations, about {op_evals} \
         mix-split evaluations); the limit without --force is accuracy level {cap}"
    )))
}

fn check_format(command: &str, format: Option<Format>, allowed: &[Format]) -> Result<Format, CliError> {
    let format = format.unwrap_or(allowed[0]);
    if allowed.contains(&format) {
        Ok(format)
    } else {
        let names: Vec<_> = allowed.iter().map(|f| f.name()).collect();
        Err(CliError::Usage(format!(
            "`{command}` does not support --format {}; choose one of {}",
            format.name(),
            names.join(", ")
        )))
    }
}

fn load_plan(source: PlanSource) -> Result<MixSplitPlan, CliError> {
    match (source.target, source.plan_file) {
        (Some(t), None) => Ok(build_plan(t)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            plan_from_json(&text).map_err(|source| CliError::Flag { flag: "--plan-file", source })
        }
        _ => unreachable!("clap enforces exactly one plan source"),
    }
}

/// Parses and validates a full argument list (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<Command, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let fmt = cli.format;
    let format;
    let action = match cli.command {
        Commands::Plan { target } => {
            format = check_format("plan", fmt, &[Format::Json, Format::Dot])?;
            Action::Plan { plan: build_plan(target) }
        }
        Commands::Simulate { source, epsilon, vector } => {
            format = check_format("simulate", fmt, &[Format::Json, Format::Csv, Format::Dot])?;
            let plan = load_plan(source)?;
            let vector = vector.map_or_else(|| vec![SplitDisposition::Skip; plan.error_slots()], |d| d.0);
            if vector.len() != plan.error_slots() {
                return Err(CliError::Flag {
                    flag: "--vector",
                    source: Error::LengthMismatch { expected: plan.error_slots(), actual: vector.len() },
                });
            }
            Action::Simulate { plan, epsilon, vector }
        }
        Commands::Enumerate { target, epsilon, positions, include_skip, tolerance, force } => {
            format = check_format("enumerate", fmt, &[Format::Csv, Format::Json])?;
            let plan = build_plan(target);
            let positions = match positions {
                Some(p) => {
                    normalize_positions(&plan, &p).map_err(|source| CliError::Flag { flag: "--positions", source })?
                }
                None => (1..=plan.error_slots()).collect(),
            };
            if positions.is_empty() {
                return Err(CliError::Flag { flag: "--positions", source: Error::EmptyPositions });
            }
            guard("enumerate", positions.len(), include_skip, 1, force)?;
            Action::Enumerate { plan, epsilon, positions, include_skip, tolerance }
        }
        Commands::WorstCase { target, epsilon, include_skip, force } => {
            format = check_format("worst-case", fmt, &[Format::Json, Format::Csv])?;
            let plan = build_plan(target);
            guard("worst-case", plan.error_slots(), include_skip, 1, force)?;
            Action::WorstCase { plan, epsilon, include_skip }
        }
        Commands::Classify { target, epsilon, tolerance } => {
            format = check_format("classify", fmt, &[Format::Csv, Format::Json])?;
            Action::Classify { plan: build_plan(target), epsilon, tolerance }
        }
        Commands::Sweep { accuracy, epsilon, force } => {
            format = check_format("sweep", fmt, &[Format::Csv, Format::Json])?;
            guard("sweep", accuracy as usize - 1, false, 1u128 << (accuracy - 1), force)?;
            Action::Sweep { accuracy, epsilon }
        }
    };
    Ok(Command { action, format, backend: cli.backend, output: cli.output, threads: cli.threads })
}

#[cfg(test)]
mod tests {
    use super::*;
    use dmfb_dilution::vector::parse_dispositions;

    fn parse(line: &str) -> Result<Command, CliError> {
        parse_args(std::iter::once("dmfb-dilute").chain(line.split_whitespace()))
    }

    #[test]
    fn simulate_maps_flags() {
        let cmd = parse("simulate --target 87/128 --epsilon 7% --vector 000+00").unwrap();
        match cmd.action {
            Action::Simulate { plan, epsilon, vector } => {
                assert_eq!(plan.target(), TargetCF::new(87, 7).unwrap());
                assert_eq!(epsilon, Exact::from_ratio(7, 100));
                assert_eq!(parse_dispositions("000+00").unwrap(), vector);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(cmd.format, Format::Json);
        assert_eq!(cmd.backend, Backend::Float);
    }

    #[test]
    fn percent_and_decimal_epsilon_agree() {
        let a = parse("worst-case --target 87/128 --epsilon 0.07").unwrap();
        let b = parse("worst-case --target 87/128 --epsilon 7%").unwrap();
        match (a.action, b.action) {
            (Action::WorstCase { epsilon: x, .. }, Action::WorstCase { epsilon: y, .. }) => assert_eq!(x, y),
            _ => panic!("expected worst-case"),
        }
    }

    #[test]
    fn defaults_per_subcommand() {
        assert_eq!(parse("enumerate --target 87/128 --epsilon 7%").unwrap().format, Format::Csv);
        assert_eq!(parse("plan --target 87/128").unwrap().format, Format::Json);
        match parse("enumerate --target 87/128 --epsilon 7%").unwrap().action {
            Action::Enumerate { positions, .. } => assert_eq!(positions, vec![1, 2, 3, 4, 5, 6]),
            _ => panic!(),
        }
    }

    #[test]
    fn validation_errors_name_the_flag() {
        let msg = |line: &str| parse(line).unwrap_err().to_string();
        assert!(msg("simulate --target 87/129 --epsilon 7%").contains("--target"));
        assert!(msg("simulate --target 87/128 --epsilon 1").contains("--epsilon"));
        assert!(msg("simulate --target 87/128 --epsilon 7% --vector 00x+00").contains("--vector"));
        assert!(msg("classify --target 87/128 --epsilon 7% --tolerance 0").contains("--tolerance"));
        assert!(msg("plan --target 87/128 --bogus").contains("--bogus"));
        assert!(msg("plan --target 87/128 --format csv").contains("--format"));
    }

    #[test]
    fn vector_length_and_positions_are_checked() {
        assert!(matches!(
            parse("simulate --target 87/128 --vector 000+0"),
            Err(CliError::Flag { flag: "--vector", source: Error::LengthMismatch { expected: 6, actual: 5 } })
        ));
        assert!(parse("enumerate --target 87/128 --epsilon 7% --positions 1,7").is_err());
    }

    #[test]
    fn search_space_guard() {
        assert!(parse("worst-case --target 1/33554432 --epsilon 7%").is_err());
        assert!(parse("worst-case --target 1/33554432 --epsilon 7% --force").is_ok());
        assert!(parse("worst-case --target 1/16384 --epsilon 7% --include-skip").is_ok());
        let err = parse("worst-case --target 1/32768 --epsilon 7% --include-skip").unwrap_err();
        assert!(err.to_string().contains("3^14 = 4782969"));
        assert!(parse("sweep --accuracy 25 --epsilon 7%").is_err());
        assert!(parse("sweep --accuracy 7 --epsilon 7%").is_ok());
    }

    #[test]
    fn rational_epsilon_is_exact() {
        match parse("simulate --target 87/128 --epsilon 0.07 --backend rational").unwrap().action {
            Action::Simulate { epsilon, .. } => assert_eq!(epsilon, Exact::from_ratio(7, 100)),
            _ => panic!(),
        }
    }
}

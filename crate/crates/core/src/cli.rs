//! The `bigframe` command line.
//!
//! Exit codes: 0 success, 1 failed suite or operation, 2 usage error,
//! 3 malformed input file. Diagnostics go to stderr prefixed `error:`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::family::BiGFrameSystem;
use crate::frame::classify;
use crate::instances::fixtures::{example_3_4, example_3_6};
use crate::instances::format::{deserialize, deserialize_operator, serialize};
use crate::instances::random::{random_system, GeneratorSpec, SystemKind};
use crate::linalg::SpectralTolerance;
use crate::report::{emit_report, fmt_num, suite_csv, Report};
use crate::suites::{is_known_tag, run_suite, THEOREM_TAGS};
use crate::transforms::{positive_perturb, restrict_range, right_compose, swap, PredictedBounds};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bigframe", version, about = "Analyze K-bi-g-frames and check their transform and stability results")]
pub struct CliConfig {
    #[command(flatten)]
    pub tolerance: ToleranceArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ToleranceArgs {
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, global = true)]
    pub rank_tol: Option<f64>,
    /// Relative Hermiticity allowance for the biframe operator.
    #[arg(long, global = true)]
    pub sym_tol: Option<f64>,
    /// Relative negative-eigenvalue allowance.
    #[arg(long, global = true)]
    pub psd_tol: Option<f64>,
    /// Relative residual for range inclusion and tightness tests.
    #[arg(long, global = true)]
    pub residual_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a system and print its diagnostics.
    Analyze { input: PathBuf },
    /// Print only the optimal bounds.
    Bounds { input: PathBuf },
    /// Run the property suite of one result.
    Verify {
        #[arg(value_parser = parse_tag)]
        theorem: String,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        instances: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write per-trial margins as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded random system.
    Generate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Generic)]
        kind: KindArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Rank of K for `rank-deficient-k`.
        #[arg(long)]
        k_rank: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write one of the two worked examples.
    Example {
        #[arg(value_enum)]
        which: ExampleArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a transform and write the resulting system.
    Transform {
        input: PathBuf,
        #[arg(long, value_enum)]
        op: TransformOp,
        /// Operand file (`operator v1` format) for every op except `swap`.
        #[arg(long)]
        operand: Option<PathBuf>,
        /// Power n in `I + T^n` for `positive-perturb`.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        power: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Generic,
    Diagonal,
    Parseval,
    RankDeficientK,
    Tight,
}

impl From<KindArg> for SystemKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Generic => SystemKind::Generic,
            KindArg::Diagonal => SystemKind::Diagonal,
            KindArg::Parseval => SystemKind::Parseval,
            KindArg::RankDeficientK => SystemKind::RankDeficientK,
            KindArg::Tight => SystemKind::Tight,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleArg {
    #[value(name = "3.4")]
    Example34,
    #[value(name = "3.6")]
    Example36,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformOp {
    Swap,
    RightCompose,
    PositivePerturb,
    RestrictRange,
}

fn parse_tag(s: &str) -> Result<String, String> {
    if is_known_tag(s) {
        Ok(s.to_string())
    } else {
        Err(format!("unknown theorem tag `{s}`; expected one of {}", THEOREM_TAGS.join(", ")))
    }
}

/// Parse arguments, apply the tolerance override and run. `env_tol` is the
/// value of `BIGFRAME_TOL`, if set.
pub fn main_with<I, T>(args: I, env_tol: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let tol = match resolve_tolerance(&config.tolerance, env_tol) {
        Ok(t) => t,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    run(&config, &tol, out, err)
}

/// Defaults, then `BIGFRAME_TOL` (sym, psd and residual tolerances), then
/// explicit flags.
pub fn resolve_tolerance(args: &ToleranceArgs, env_tol: Option<&str>) -> Result<SpectralTolerance, String> {
    let mut tol = SpectralTolerance::default();
    if let Some(raw) = env_tol {
        let v: f64 = raw.trim().parse().map_err(|_| format!("BIGFRAME_TOL `{raw}` is not a decimal number"))?;
        tol.rel_sym_tol = v;
        tol.rel_psd_tol = v;
        tol.rel_residual_tol = v;
    }
    if let Some(v) = args.rank_tol {
        tol.rel_rank_tol = Some(v);
    }
    if let Some(v) = args.sym_tol {
        tol.rel_sym_tol = v;
    }
    if let Some(v) = args.psd_tol {
        tol.rel_psd_tol = v;
    }
    if let Some(v) = args.residual_tol {
        tol.rel_residual_tol = v;
    }
    tol.validate().map_err(|e| e.to_string())?;
    Ok(tol)
}

enum Failure {
    Usage(String),
    Parse(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Parse(e.to_string()),
            other => Failure::Failed(other.to_string()),
        }
    }
}

pub fn run(config: &CliConfig, tol: &SpectralTolerance, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(config, tol, out) {
        Ok(code) => code,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Parse(m) => (EXIT_PARSE, m),
                Failure::Failed(m) => (EXIT_FAILURE, m),
            };
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_system(path: &Path) -> Result<BiGFrameSystem, Failure> {
    Ok(deserialize(&read_text(path)?)?)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Failed(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure::Failed(format!("stdout: {e}"))),
    }
}

fn predicted_header(p: &PredictedBounds) -> String {
    format!(
        "# transform {}: predicted_lower={} predicted_upper={}\n",
        p.source,
        fmt_num(p.lower),
        fmt_num(p.upper)
    )
}

fn execute(config: &CliConfig, tol: &SpectralTolerance, out: &mut dyn Write) -> Result<i32, Failure> {
    match &config.command {
        Command::Analyze { input } => {
            let sys = read_system(input)?;
            let r = classify(&sys, tol);
            let text = format!(
                "system: dim {}, {} members, subspace dims {:?}\n{}\n{}",
                sys.ambient_dim(),
                sys.len(),
                sys.phi.subspace_dims(),
                emit_report(&Report::Classification(&r), false),
                emit_report(&Report::Classification(&r), true)
            );
            emit(out, None, &text)?;
            Ok(EXIT_OK)
        }
        Command::Bounds { input } => {
            let r = classify(&read_system(input)?, tol);
            emit(out, None, &format!("A_opt={}\nB_opt={}\n", fmt_num(r.a_opt), fmt_num(r.b_opt)))?;
            Ok(EXIT_OK)
        }
        Command::Verify { theorem, instances, seed, out: csv } => {
            let summary = run_suite(theorem, *instances as usize, *seed)?;
            if let Some(path) = csv {
                emit(out, Some(path), &suite_csv(&summary))?;
            }
            let text = format!(
                "{}{}",
                emit_report(&Report::Suite(&summary), false),
                emit_report(&Report::Suite(&summary), true)
            );
            emit(out, None, &text)?;
            Ok(if summary.all_passed() { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Generate { dim, count, kind, seed, k_rank, out: path } => {
            let spec = GeneratorSpec { ambient_dim: *dim, family_size: *count, kind: (*kind).into(), seed: *seed, k_rank: *k_rank };
            let sys = random_system(&spec).map_err(|e| Failure::Usage(e.to_string()))?;
            emit(out, path.as_deref(), &serialize(&sys))?;
            Ok(EXIT_OK)
        }
        Command::Example { which, out: path } => {
            let sys = match which {
                ExampleArg::Example34 => example_3_4(),
                ExampleArg::Example36 => example_3_6(),
            };
            emit(out, path.as_deref(), &serialize(&sys))?;
            Ok(EXIT_OK)
        }
        Command::Transform { input, op, operand, power, out: path } => {
            let sys = read_system(input)?;
            let operand = match (op, operand) {
                (TransformOp::Swap, _) => None,
                (_, Some(p)) => Some(deserialize_operator(&read_text(p)?)?),
                (_, None) => return Err(Failure::Usage("--operand is required for this transform".into())),
            };
            let text = match (op, operand) {
                (TransformOp::Swap, _) => format!("# transform 3.7: swap\n{}", serialize(&swap(&sys))),
                (TransformOp::RightCompose, Some(m)) => {
                    let (s, p) = right_compose(&sys, &m, tol)?;
                    format!("{}{}", predicted_header(&p), serialize(&s))
                }
                (TransformOp::RestrictRange, Some(t)) => {
                    let (s, p) = restrict_range(&sys, &t, tol)?;
                    format!("{}{}", predicted_header(&p), serialize(&s))
                }
                (TransformOp::PositivePerturb, Some(t)) => {
                    let s = positive_perturb(&sys, &t, *power, tol)?;
                    format!("# transform 4.2: I + T^{power}\n{}", serialize(&s))
                }
                (_, None) => unreachable!("operand presence checked above"),
            };
            emit(out, path.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("bigframe").chain(args.iter().copied());
        let code = main_with(argv, None, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&[]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "9.9"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "3.7", "--instances", "0"]).0, EXIT_USAGE);
        let (code, _, err) = run_args(&["analyze", "/nonexistent/file.bgf"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.starts_with("error:"));
        assert_eq!(run_args(&["--sym-tol", "2", "example", "3.4"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["generate", "--dim", "65", "--count", "1"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("analyze"));
    }

    #[test]
    fn example_output_parses() {
        let (code, out, _) = run_args(&["example", "3.6"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(deserialize(&out).unwrap(), example_3_6());
    }

    #[test]
    fn tolerance_resolution() {
        let t = resolve_tolerance(&ToleranceArgs::default(), Some("1e-6")).unwrap();
        assert_eq!((t.rel_sym_tol, t.rel_psd_tol, t.rel_residual_tol), (1e-6, 1e-6, 1e-6));
        let args = ToleranceArgs { psd_tol: Some(1e-3), ..Default::default() };
        assert_eq!(resolve_tolerance(&args, Some("1e-6")).unwrap().rel_psd_tol, 1e-3);
        assert!(resolve_tolerance(&ToleranceArgs::default(), Some("tiny")).is_err());
        assert!(resolve_tolerance(&ToleranceArgs::default(), Some("1.5")).is_err());
    }
}

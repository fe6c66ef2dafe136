//! Argument parsing, input loading and exit codes.

use crate::commands::{self, VectorChoice};
use crate::report::{digest, Certificate, Report};
use crate::schema::{parse_input, parse_problem, Input, Problem, SchemaError};
use clap::{Parser, Subcommand, ValueEnum};
use gcover_core::{Tolerance, C64};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_SCHEMA: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "gcover", version, about = "Thin coverings of simple graded modules")]
pub struct Cli {
    /// Relative tolerance for rank and residual decisions.
    #[arg(long, global = true, env = "GCOVER_TOL", default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "GCOVER_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the algebra axioms, grading and module.
    Validate { problem: PathBuf },
    /// Characters whose twist fixes the module, with normalized intertwiners.
    Stabilizer { problem: PathBuf },
    /// Commutation matrix of the twist intertwiners.
    Qtorus { problem: PathBuf },
    /// Normal form of a torus spec file or of a problem's torus.
    NormalForm { input: PathBuf },
    /// Isotypic decomposition over the torus.
    Isotypic { problem: PathBuf },
    /// Thin coverings from a given vector or from seeded samples.
    Thin {
        problem: PathBuf,
        /// Comma-separated complex coordinates, e.g. `1,0` or `0.5+1i,-1`.
        #[arg(long, conflicts_with = "sample", allow_hyphen_values = true)]
        vector: Option<String>,
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Graded module of a thin covering, with the graded round trip.
    GradedModule {
        problem: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        vector: Option<String>,
    },
    /// Isomorphism, twist relation and graded comparison of two modules.
    Compare { a: PathBuf, b: PathBuf },
    /// Truncated multiloop algebra and its loop module.
    Multiloop {
        problem: PathBuf,
        #[arg(long)]
        cutoff: Option<u32>,
    },
    /// Run every stage and stop at the first violated invariant.
    Certify {
        problem: PathBuf,
        /// Add brute-force thinness, the dimension identity and the covering round trip.
        #[arg(long)]
        deep: bool,
    },
}

/// What a run printed and how it ended.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Schema(String),
    Usage(String),
}

fn read(path: &Path) -> Result<(String, Vec<u8>), Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::Schema(format!("{}: not UTF-8", path.display())))?;
    Ok((text, bytes))
}

fn schema(path: &Path, e: SchemaError) -> Failure {
    Failure::Schema(format!("{}: schema error at {e}", path.display()))
}

fn load_problem(path: &Path) -> Result<(Problem, Vec<u8>), Failure> {
    let (text, bytes) = read(path)?;
    let p = parse_problem(&text).map_err(|e| schema(path, e))?;
    Ok((p, bytes))
}

fn parse_vector(s: &str) -> Result<Vec<C64>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<C64>().map_err(|_| Failure::Usage(format!("--vector: cannot read {t:?} as a complex number"))))
        .collect()
}

/// A finished command with the arguments and file bytes that enter the digest.
struct Run {
    name: &'static str,
    args: Vec<String>,
    files: Vec<Vec<u8>>,
    report: Report,
}

fn run_command(cli: &Cli, tol: &Tolerance) -> Result<Run, Failure> {
    let mut args = Vec::new();
    let mut files = Vec::new();
    let (name, report) = match &cli.command {
        Command::Validate { problem } => {
            let (p, b) = load_problem(problem)?;
            files.push(b);
            ("validate", commands::validate_cmd(&p, tol))
        }
        Command::Stabilizer { problem } => {
            let (p, b) = load_problem(problem)?;
            files.push(b);
            ("stabilizer", commands::stabilizer_cmd(&p, tol))
        }
        Command::Qtorus { problem } => {
            let (p, b) = load_problem(problem)?;
            files.push(b);
            ("qtorus", commands::qtorus_cmd(&p, tol))
        }
        Command::NormalForm { input } => {
            let (text, b) = read(input)?;
            files.push(b);
            let report = match parse_input(&text).map_err(|e| schema(input, e))? {
                Input::Torus(t) => commands::normal_form_cmd(Ok(&t.0), tol),
                Input::Problem(p) => commands::normal_form_cmd(Err(&p), tol),
            };
            ("normal-form", report)
        }
        Command::Isotypic { problem } => {
            let (p, b) = load_problem(problem)?;
            files.push(b);
            ("isotypic", commands::isotypic_cmd(&p, tol))
        }
        Command::Thin { problem, vector, sample } => {
            let (p, b) = load_problem(problem)?;
            files.push(b);
            let choice = match (vector, sample) {
                (Some(v), _) => {
                    args.push(format!("--vector={v}"));
                    VectorChoice::Given(parse_vector(v)?)
                }
                (None, k) => {
                    let k = k.unwrap_or(1);
                    args.push(format!("--sample={k}"));
                    VectorChoice::Sample(k)
                }
            };
            ("thin", commands::thin_cmd(&p, &choice, tol))
        }
        Command::GradedModule { problem, vector } => {
            let (p, b) = load_problem(problem)?;
            files.push(b);
            let choice = match vector {
                Some(v) => {
                    args.push(format!("--vector={v}"));
                    VectorChoice::Given(parse_vector(v)?)
                }
                None => VectorChoice::Sample(1),
            };
            ("graded-module", commands::graded_module_cmd(&p, &choice, tol))
        }
        Command::Compare { a, b } => {
            let (pa, ba) = load_problem(a)?;
            let (pb, bb) = load_problem(b)?;
            files.push(ba);
            files.push(bb);
            ("compare", commands::compare_cmd(&pa, &pb, tol).map_err(Failure::Usage)?)
        }
        Command::Multiloop { problem, cutoff } => {
            let (p, b) = load_problem(problem)?;
            files.push(b);
            if let Some(d) = cutoff {
                args.push(format!("--cutoff={d}"));
            }
            ("multiloop", commands::multiloop_cmd(&p, *cutoff, tol).map_err(Failure::Usage)?)
        }
        Command::Certify { problem, deep } => {
            let (p, b) = load_problem(problem)?;
            files.push(b);
            if *deep {
                args.push("--deep".into());
            }
            ("certify", commands::certify_cmd(&p, *deep, tol))
        }
    };
    Ok(Run { name, args, files, report })
}

/// Parses `argv` and runs; exit 0 on success, 2 when a check fails, 3 on
/// malformed input or arguments.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_SCHEMA } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let tol = match Tolerance::new(cli.tol, cli.seed) {
        Ok(t) => t,
        Err(e) => return Outcome { code: EXIT_SCHEMA, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    match run_command(&cli, &tol) {
        Err(Failure::Schema(m) | Failure::Usage(m)) => Outcome { code: EXIT_SCHEMA, stdout: String::new(), stderr: format!("error: {m}\n") },
        Ok(Run { name, mut args, files, report }) => {
            args.insert(0, name.to_string());
            let code = if report.pass() { EXIT_OK } else { EXIT_VERIFICATION };
            let stderr = report.first_failure.as_ref().map_or(String::new(), |f| format!("verification failed: {f}\n"));
            let stdout = match cli.format {
                Format::Table => report.table.clone(),
                Format::Json => {
                    let refs: Vec<&[u8]> = files.iter().map(Vec::as_slice).collect();
                    let cert = Certificate::new(name, digest(&args, &refs), tol.eps, tol.seed, report);
                    cert.to_json() + "\n"
                }
            };
            Outcome { code, stdout, stderr }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors_parse_as_complex_lists() {
        let v = match parse_vector("1, -0.5+2i,i") {
            Ok(v) => v,
            Err(_) => panic!("parse failed"),
        };
        assert_eq!(v, vec![C64::new(1.0, 0.0), C64::new(-0.5, 2.0), C64::new(0.0, 1.0)]);
        assert!(parse_vector("1,x").is_err());
    }

    #[test]
    fn usage_errors_exit_with_schema_code() {
        assert_eq!(run(["gcover", "frobnicate"]).code, EXIT_SCHEMA);
        assert_eq!(run(["gcover", "validate", "/nonexistent.json"]).code, EXIT_SCHEMA);
        assert_eq!(run(["gcover", "--tol", "-1", "validate", "x.json"]).code, EXIT_SCHEMA);
        assert_eq!(run(["gcover", "--help"]).code, EXIT_OK);
    }
}

//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on domain errors and negative verdicts, 2 on
//! usage errors. Results go to stdout, diagnostics to stderr.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::dominance::{check_liftable, dominance_of, lift, DominanceMatrix, Liftability, LiftWitness};
use crate::error::{Error, Result};
use crate::experiments::{run_experiment, sample_dataset, Dataset, Experiment};
use crate::matrix::{format_matrix, format_number, parse_matrix, validate_monotone, validate_stochastic, DEFAULT_TOL};
use crate::realise::{realise_eigenvalue, realise_pair};
use crate::reduction::reduce;
use crate::regions::RegionName;
use crate::sampler::SampleConfig;
use crate::spectra::{spectrum_of_stochastic, EigenPair};

/// Eigenvalues closer than this are reported as one value with multiplicity.
const GROUP_TOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "monospec", version, about = "Spectra of monotone stochastic matrices")]
pub struct Cli {
    /// Numerical tolerance for validation and region predicates.
    #[arg(long, global = true, env = "MONOSPEC_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Round numbers for reading instead of printing 17 significant digits.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a matrix and report the first monotonicity violation.
    Check {
        /// Matrix file; stdin when omitted or `-`.
        file: Option<PathBuf>,
    },
    /// Print the dominance matrix.
    Dominance { file: Option<PathBuf> },
    /// Decide whether a 2×2 matrix is a dominance matrix and lift it.
    Lift {
        file: Option<PathBuf>,
        #[arg(long, requires = "m33")]
        m11: Option<f64>,
        #[arg(long, requires = "m11")]
        m33: Option<f64>,
    },
    /// Print the eigenvalues of a stochastic matrix.
    Spectrum {
        file: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// A monotone 3×3 matrix with the given nontrivial eigenvalue.
    RealiseEig {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
    },
    /// A monotone 3×3 matrix with nontrivial eigenvalues `l2 ≥ l3`.
    RealisePair {
        #[arg(long, allow_hyphen_values = true)]
        l2: f64,
        #[arg(long, allow_hyphen_values = true)]
        l3: f64,
    },
    /// Evaluate a region predicate at a point.
    Region {
        #[arg(long, value_parser = parse_region)]
        name: RegionName,
        /// `x` or `x,y`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        point: Point,
    },
    /// Run the block-wise reduction and print it as JSON.
    Reduce { file: Option<PathBuf> },
    /// Draw seeded monotone matrices and write one record per sample.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Write the data set and an SVG rendering of an experiment.
    Figure {
        #[arg(long, value_parser = parse_experiment)]
        name: Experiment,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 5000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Point(pub Vec<f64>);

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    let coords = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("not a number: `{}`", t.trim())))
        .collect::<std::result::Result<Vec<f64>, String>>()?;
    if coords.is_empty() || coords.len() > 2 {
        return Err("expected `x` or `x,y`".into());
    }
    Ok(Point(coords))
}

fn parse_region(s: &str) -> std::result::Result<RegionName, String> {
    s.parse::<RegionName>().map_err(|e| e.to_string())
}

fn parse_experiment(s: &str) -> std::result::Result<Experiment, String> {
    s.parse::<Experiment>().map_err(|e| e.to_string())
}

/// What a command produced besides its output.
enum Outcome {
    Ok,
    Negative,
}

fn exit_code_of(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) | Error::UnknownExperiment(_) => 2,
        _ => 1,
    }
}

fn read_input(file: &Option<PathBuf>) -> Result<String> {
    match file.as_deref() {
        Some(p) if p != Path::new("-") => Ok(fs::read_to_string(p)?),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn format_complex(z: Complex64, pretty: bool) -> String {
    if z.im == 0.0 {
        return format_number(z.re, pretty);
    }
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", format_number(z.re, pretty), format_number(z.im.abs(), pretty))
}

fn write_dataset(data: &Dataset, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Csv => data.write_csv(out),
        Format::Jsonl => data.write_jsonl(out),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome> {
    let tol = cli.tol;
    let pretty = cli.pretty;
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be a finite non-negative number, got {tol}")));
    }
    match &cli.command {
        Command::Check { file } => {
            let s = validate_stochastic(&parse_matrix(&read_input(file)?)?, tol)?;
            match validate_monotone(s) {
                Ok(m) => {
                    writeln!(out, "monotone (n = {})", m.n())?;
                    Ok(Outcome::Ok)
                }
                Err(Error::MonotoneViolation { k, r, deficit }) => {
                    writeln!(
                        out,
                        "not monotone: row {} does not dominate row {k} at column {r}, deficit {}",
                        k + 1,
                        format_number(deficit, pretty)
                    )?;
                    Ok(Outcome::Negative)
                }
                Err(e) => Err(e),
            }
        }
        Command::Dominance { file } => {
            let m = validate_monotone(validate_stochastic(&parse_matrix(&read_input(file)?)?, tol)?)?;
            write!(out, "{}", format_matrix(&dominance_of(&m)?.rows(), pretty))?;
            Ok(Outcome::Ok)
        }
        Command::Lift { file, m11, m33 } => {
            let d = DominanceMatrix::new(&parse_matrix(&read_input(file)?)?, tol)?;
            let witness = match (m11, m33) {
                (Some(m11), Some(m33)) => LiftWitness { m11: *m11, m33: *m33 },
                _ => match check_liftable(&d, tol)? {
                    Liftability::Feasible(w) => w,
                    Liftability::Infeasible { bound, excess } => {
                        writeln!(out, "not liftable: {bound} exceeded by {}", format_number(excess, pretty))?;
                        return Ok(Outcome::Negative);
                    }
                },
            };
            let m = lift(&d, witness, tol)?;
            writeln!(
                err,
                "witness m11 = {}, m33 = {}",
                format_number(witness.m11, pretty),
                format_number(witness.m33, pretty)
            )?;
            write!(out, "{}", format_matrix(&m.rows(), pretty))?;
            Ok(Outcome::Ok)
        }
        Command::Spectrum { file, json } => {
            let s = validate_stochastic(&parse_matrix(&read_input(file)?)?, tol)?;
            let spectrum = spectrum_of_stochastic(&s)?;
            if *json {
                writeln!(out, "{}", serde_json::to_string(&spectrum).map_err(|e| Error::Io(e.to_string()))?)?;
            } else {
                for (z, k) in spectrum.grouped(GROUP_TOL) {
                    writeln!(out, "{} (×{k})", format_complex(z, pretty))?;
                }
            }
            Ok(Outcome::Ok)
        }
        Command::RealiseEig { lambda } => {
            let (id, m) = realise_eigenvalue(*lambda)?;
            writeln!(err, "family {} alpha = {}", id.family, format_number(id.alpha, pretty))?;
            write!(out, "{}", format_matrix(&m.rows(), pretty))?;
            Ok(Outcome::Ok)
        }
        Command::RealisePair { l2, l3 } => {
            let p = EigenPair { lambda2: *l2, lambda3: *l3 };
            let m = realise_pair(p, tol.max(DEFAULT_TOL))?;
            writeln!(err, "realises (l2, l3) = ({}, {})", format_number(*l2, pretty), format_number(*l3, pretty))?;
            write!(out, "{}", format_matrix(&m.rows(), pretty))?;
            Ok(Outcome::Ok)
        }
        Command::Region { name, point } => {
            let verdict = name.evaluate(&point.0, tol)?;
            writeln!(out, "{verdict}")?;
            Ok(if verdict.member { Outcome::Ok } else { Outcome::Negative })
        }
        Command::Reduce { file } => {
            let m = validate_monotone(validate_stochastic(&parse_matrix(&read_input(file)?)?, tol)?)?;
            writeln!(out, "{}", reduce(&m)?.to_json())?;
            Ok(Outcome::Ok)
        }
        Command::Sample { n, count, seed, out: path, workers, format } => {
            let data = sample_dataset(&SampleConfig { n: *n, count: *count, seed: *seed, workers: *workers })?;
            match path {
                Some(p) => {
                    let mut file = io::BufWriter::new(fs::File::create(p)?);
                    write_dataset(&data, *format, &mut file)?;
                    file.flush()?;
                }
                None => write_dataset(&data, *format, out)?,
            }
            Ok(Outcome::Ok)
        }
        Command::Figure { name, out: dir, count, seed, workers } => {
            let data = run_experiment(*name, &SampleConfig { n: 0, count: *count, seed: *seed, workers: *workers })?;
            fs::create_dir_all(dir)?;
            let csv_path = dir.join(format!("{name}.csv"));
            let svg_path = dir.join(format!("{name}.svg"));
            let mut file = io::BufWriter::new(fs::File::create(&csv_path)?);
            data.write_csv(&mut file)?;
            file.flush()?;
            fs::write(&svg_path, data.to_svg())?;
            writeln!(out, "{}", csv_path.display())?;
            writeln!(out, "{}", svg_path.display())?;
            Ok(Outcome::Ok)
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Negative) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_of(&e)
        }
    }
}

pub fn main() -> ExitCode {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["monospec"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn region_impossibility_example() {
        let (code, out, _) = call(&["region", "--name", "xi3pair", "--point", "1,-0.5"]);
        assert_eq!(code, 1);
        assert!(out.starts_with("not member, violated C4"), "{out}");
    }

    #[test]
    fn region_member() {
        let (code, out, _) = call(&["region", "--name", "theta3", "--point", "-0.5,0"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("member"));
    }

    #[test]
    fn realise_eig_negative_half() {
        let (code, out, err) = call(&["realise-eig", "--lambda", "-0.5"]);
        assert_eq!(code, 0);
        assert!(err.contains("type2"));
        let rows = parse_matrix(&out).unwrap();
        assert_eq!(rows[0], vec![0.5, 0.5, 0.0]);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["region", "--name", "nowhere", "--point", "1"]).0, 2);
        assert_eq!(call(&["region", "--name", "xi3", "--point", "a"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["figure", "--name", "figure9", "--out", "x"]).0, 2);
        assert_eq!(call(&["sample", "--n", "3", "--count", "2", "--workers", "0"]).0, 2);
    }

    #[test]
    fn domain_errors_exit_1() {
        assert_eq!(call(&["realise-eig", "--lambda", "-0.6"]).0, 1);
        assert_eq!(call(&["realise-pair", "--l2", "1", "--l3", "-0.5"]).0, 1);
    }

    #[test]
    fn complex_formatting() {
        assert_eq!(format_complex(Complex64::new(-0.5, -0.25), true), "-0.5-0.25i");
        assert_eq!(format_complex(Complex64::new(1.0, 0.0), true), "1");
    }
}

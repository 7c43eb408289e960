use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lppiep::generate::{self, GeneratedProblem, RandomParams};
use lppiep::io::{to_json_string, BasisFile, EigendataFile, PolynomialFile, ResidualJson, SolveReport};
use lppiep::{encode, residual, solve, BoundPolicy, SolveOptions, StructureBasis, StructureKind, ToleranceConfig};
use nalgebra::DVector;
use serde::Serialize;

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_INCONSISTENT: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;

/// Structured monic matrix polynomials from partial eigendata.
#[derive(Parser)]
#[command(name = "lppiep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a structured monic polynomial with the given eigenpairs.
    ///
    /// Exits 0 when a solution exists, 2 when the eigendata is inconsistent
    /// with the structure.
    Solve(SolveArgs),
    /// Check a polynomial against eigendata. Exits 3 when the relative
    /// residual exceeds the threshold.
    Verify(VerifyArgs),
    /// Write eigendata for a reference or random problem.
    Generate(GenerateArgs),
    /// Show the canonical basis of a structure.
    Basis(BasisArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Eigendata JSON file.
    input: PathBuf,
    /// Structure tag or path to a custom basis JSON file. Defaults to the
    /// hint in the eigendata file.
    #[arg(long, short)]
    structure: Option<String>,
    /// Polynomial degree. Defaults to the hint in the eigendata file.
    #[arg(long, short = 'k')]
    degree: Option<usize>,
    #[arg(long)]
    tol_consistency: Option<f64>,
    /// Singular values at or below this factor times the largest count as zero.
    #[arg(long)]
    tol_rank_factor: Option<f64>,
    /// Free vector of length kr, inline JSON array or a file holding one.
    #[arg(long)]
    y: Option<String>,
    /// Accept more eigencolumns than kn.
    #[arg(long)]
    allow_overdetermined: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Polynomial JSON file (a solve report also works).
    polynomial: PathBuf,
    /// Eigendata JSON file.
    eigendata: PathBuf,
    /// Pass threshold for the relative residual.
    #[arg(long)]
    tol_consistency: Option<f64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemKind {
    Example1,
    Example2,
    Example3,
    Random,
}

#[derive(Args)]
struct GenerateArgs {
    kind: ProblemKind,
    /// Number of eigencolumns (example3 and random).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, short = 'k')]
    degree: Option<usize>,
    #[arg(long, short)]
    structure: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also write the generating polynomial to this file.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct BasisArgs {
    structure: String,
    #[arg(long, short)]
    n: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct BasisReport {
    structure: String,
    n: usize,
    r: usize,
    formula: String,
    formula_r: Option<usize>,
    matrices: Vec<Vec<Vec<f64>>>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Basis(args) => cmd_basis(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<u8> {
    let data: EigendataFile = read_json(&args.input)?;
    let pairs = data.to_eigenpairs().with_context(|| format!("invalid eigendata in {}", args.input.display()))?;
    let ep = encode(&pairs, data.n)?;
    let structure = args
        .structure
        .or_else(|| data.structure.clone())
        .context("no structure given (use --structure)")?;
    let basis = load_basis(&structure, data.n)?;
    let k = args.degree.or(data.k).context("no degree given (use --degree)")?;
    let tol = tolerances(args.tol_consistency.or(data.consistency_tol), args.tol_rank_factor)?;
    let free = match &args.y {
        Some(text) => Some(DVector::from_vec(parse_vector(text)?)),
        None => None,
    };
    if let Some(y) = &free {
        if y.len() != k * basis.r() {
            bail!("--y has length {}, expected k*r = {}", y.len(), k * basis.r());
        }
    }
    let bound = if args.allow_overdetermined { BoundPolicy::AllowOverdetermined } else { BoundPolicy::Strict };
    let opts = SolveOptions { tol, free, bound };
    let outcome = solve(&ep, &basis, k, &opts)?;
    let report = SolveReport::new(basis.kind(), &outcome);
    write_json(&report, args.output.as_deref())?;
    Ok(if outcome.polynomial.is_some() { EXIT_OK } else { EXIT_INCONSISTENT })
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let poly_file: PolynomialFile = read_json(&args.polynomial)?;
    let poly = poly_file.to_polynomial().with_context(|| format!("invalid polynomial in {}", args.polynomial.display()))?;
    let data: EigendataFile = read_json(&args.eigendata)?;
    let pairs = data.to_eigenpairs().with_context(|| format!("invalid eigendata in {}", args.eigendata.display()))?;
    let ep = encode(&pairs, data.n)?;
    let threshold = args.tol_consistency.or(data.consistency_tol).unwrap_or(ToleranceConfig::default().consistency);
    if threshold.is_nan() || threshold <= 0.0 {
        bail!("--tol-consistency must be positive");
    }
    let report = ResidualJson::new(&residual(&poly, &ep)?, threshold);
    write_json(&report, args.output.as_deref())?;
    Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cmd_generate(args: GenerateArgs) -> Result<u8> {
    let problem: GeneratedProblem = match args.kind {
        ProblemKind::Example1 => generate::example1(),
        ProblemKind::Example2 => generate::example2(),
        ProblemKind::Example3 => generate::example3(args.m.unwrap_or(4))?,
        ProblemKind::Random => {
            let structure: StructureKind = args.structure.as_deref().context("random needs --structure")?.parse()?;
            let n = args.n.context("random needs --n")?;
            let degree = args.degree.context("random needs --degree")?;
            let m = args.m.context("random needs --m")?;
            generate::random(RandomParams { structure, n, degree, m, seed: args.seed })?
        }
    };
    if let Some(path) = &args.truth {
        let poly = problem.ground_truth.as_ref().context("this problem has no generating polynomial")?;
        write_json(&PolynomialFile::from_polynomial(poly), Some(path))?;
    }
    write_json(&EigendataFile::from_problem(&problem), args.output.as_deref())?;
    Ok(EXIT_OK)
}

fn cmd_basis(args: BasisArgs) -> Result<u8> {
    let kind: StructureKind = args.structure.parse()?;
    let basis = StructureBasis::build(kind, args.n)?;
    let report = BasisReport {
        structure: kind.as_str().to_string(),
        n: args.n,
        r: basis.r(),
        formula: kind.formula().to_string(),
        formula_r: kind.dimension(args.n),
        matrices: BasisFile::from_basis(&basis).matrices,
    };
    write_json(&report, args.output.as_deref())?;
    Ok(EXIT_OK)
}

/// A structure tag, or a path to a basis JSON file.
fn load_basis(structure: &str, n: usize) -> Result<StructureBasis> {
    if let Ok(kind) = structure.parse::<StructureKind>() {
        if kind != StructureKind::Custom {
            return Ok(StructureBasis::build(kind, n)?);
        }
        bail!("the custom structure is given as a path to a basis file");
    }
    let path = Path::new(structure);
    if !path.exists() {
        bail!("unknown structure '{structure}' and no such basis file");
    }
    let file: BasisFile = read_json(path)?;
    if file.n != n {
        bail!("basis in {} has n = {}, eigendata has n = {n}", path.display(), file.n);
    }
    file.to_basis().with_context(|| format!("invalid basis in {}", path.display()))
}

fn tolerances(consistency: Option<f64>, rank_factor: Option<f64>) -> Result<ToleranceConfig> {
    let mut tol = ToleranceConfig::default();
    if let Some(c) = consistency {
        tol = tol.with_consistency(c);
    }
    tol.rank_cutoff_factor = rank_factor;
    tol.validate()?;
    Ok(tol)
}

fn parse_vector(text: &str) -> Result<Vec<f64>> {
    if let Ok(v) = serde_json::from_str(text) {
        return Ok(v);
    }
    let body = fs::read_to_string(text).with_context(|| format!("--y is neither a JSON array nor a readable file: {text}"))?;
    serde_json::from_str(&body).with_context(|| format!("{text}: expected a JSON array of numbers"))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("malformed JSON in {}", path.display()))
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let text = to_json_string(value)?;
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

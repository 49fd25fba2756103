//! Command-line front end. Exit codes: 0 success, 1 domain violation,
//! 2 I/O or parse failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use qaitchison::basis::{self, labels, BasisLabel};
use qaitchison::io::{format_sig, FileError, FileKind, StateFile, FILE_DIGITS, SCALAR_DIGITS};
use qaitchison::linalg::{
    hermitian_eig, hermiticity_residual, max_abs, DEFAULT_EPS_PD, HERMITIAN_TOL,
};
use qaitchison::modular::relative_entropy;
use qaitchison::qubit::state_to_bloch;
use qaitchison::state::{self, TRACE_TOL};
use qaitchison::{DensityState, GeometryError, HermitianMatrix, InverseTemperature};

/// Largest dimension accepted by `basis`.
const MAX_BASIS_DIM: usize = 16;

/// Gram matrices whose off-diagonal exceeds this make `basis` fail.
const GRAM_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "qaitchison",
    version,
    about = "Log-ratio geometry of quantum states"
)]
struct Cli {
    /// Positivity threshold for input states.
    #[arg(long, global = true, default_value_t = DEFAULT_EPS_PD, value_parser = parse_eps)]
    eps: f64,

    /// Seed for randomized commands (currently unused).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report hermiticity, trace and positivity of a file.
    Validate { path: PathBuf },
    /// A ⊕ B.
    Add(BinaryOut),
    /// A ⊖ B.
    Sub(BinaryOut),
    /// Scalar product of two states.
    Inner(Binary),
    /// Distance between two states.
    Dist(Binary),
    /// Relative entropy S(A‖B).
    Entropy(Binary),
    /// A ⊗ B.
    Tensor(BinaryOut),
    /// λ ⊙ A.
    #[command(allow_negative_numbers = true)]
    Pow {
        lambda: f64,
        #[command(flatten)]
        input: UnaryOut,
    },
    /// ⊖A.
    Neg(UnaryOut),
    /// Centered logarithm, written as a Hamiltonian file.
    Clr(UnaryOut),
    /// Gibbs state exp(-βH)/Tr of a Hamiltonian file.
    #[command(allow_negative_numbers = true)]
    Gibbs {
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        input: UnaryOut,
    },
    /// Bloch vector of a qubit state.
    Bloch { path: PathBuf },
    /// Coordinates in the fixed orthonormal basis.
    Coords { path: PathBuf },
    /// Norm of a state.
    Norm { path: PathBuf },
    /// Sample the arc (t ⊙ A) ⊕ ((1-t) ⊙ B) for t from 0 to 1 as CSV.
    Arc {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 11)]
        steps: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write the orthonormal basis of dimension n and its Gram report.
    Basis {
        #[arg(long)]
        dim: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(clap::Args)]
struct Binary {
    a: PathBuf,
    b: PathBuf,
}

#[derive(clap::Args)]
struct BinaryOut {
    a: PathBuf,
    b: PathBuf,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct UnaryOut {
    path: PathBuf,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn parse_eps(s: &str) -> Result<f64, String> {
    let eps: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if eps.is_finite() && eps >= 0.0 {
        Ok(eps)
    } else {
        Err("eps must be finite and non-negative".into())
    }
}

enum Failure {
    Domain(String),
    Input(String),
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure::Input(e.to_string())
    }
}

type CliResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    let eps = cli.eps;
    match &cli.command {
        Command::Validate { path } => validate(path, eps),
        Command::Add(args) => {
            let (a, b) = load_pair(&args.a, &args.b, eps)?;
            emit_state(&state::perturb(&a, &b)?, args.out.as_deref())
        }
        Command::Sub(args) => {
            let (a, b) = load_pair(&args.a, &args.b, eps)?;
            emit_state(&state::subtract(&a, &b)?, args.out.as_deref())
        }
        Command::Tensor(args) => {
            let (a, b) = (load_state(&args.a, eps)?, load_state(&args.b, eps)?);
            emit_state(&state::tensor(&a, &b)?, args.out.as_deref())
        }
        Command::Inner(args) => {
            let (a, b) = load_pair(&args.a, &args.b, eps)?;
            print_scalar(state::inner(&a, &b)?)
        }
        Command::Dist(args) => {
            let (a, b) = load_pair(&args.a, &args.b, eps)?;
            print_scalar(state::distance(&a, &b)?)
        }
        Command::Entropy(args) => {
            let (a, b) = load_pair(&args.a, &args.b, eps)?;
            print_scalar(relative_entropy(&a, &b)?)
        }
        Command::Pow { lambda, input } => {
            let a = load_state(&input.path, eps)?;
            emit_state(&state::power(*lambda, &a)?, input.out.as_deref())
        }
        Command::Neg(input) => {
            let a = load_state(&input.path, eps)?;
            emit_state(&state::negate(&a)?, input.out.as_deref())
        }
        Command::Clr(input) => {
            let a = load_state(&input.path, eps)?;
            emit(
                &StateFile::from_hamiltonian(&state::clr(&a)?),
                input.out.as_deref(),
            )
        }
        Command::Gibbs { beta, input } => {
            let beta = InverseTemperature::new(*beta)?;
            let file = read_kind(&input.path, FileKind::Hamiltonian)?;
            let h = file.to_hamiltonian()?;
            emit_state(&state::gibbs(&h, beta)?, input.out.as_deref())
        }
        Command::Bloch { path } => {
            let v = state_to_bloch(&load_state(path, eps)?)?;
            let [x, y, z] = v.components().map(|c| format_sig(c, SCALAR_DIGITS));
            println!("{x} {y} {z}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Coords { path } => {
            let c = basis::coordinates(&load_state(path, eps)?)?;
            let mut out = String::new();
            for (label, value) in c.labels().iter().zip(c.coords()) {
                let _ = writeln!(out, "{label} {}", format_sig(*value, SCALAR_DIGITS));
            }
            print!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Norm { path } => print_scalar(state::norm(&load_state(path, eps)?)?),
        Command::Arc { a, b, steps, out } => arc(a, b, *steps, out.as_deref(), eps),
        Command::Basis { dim, out } => write_basis(*dim, out),
    }
}

fn read_kind(path: &Path, kind: FileKind) -> Result<StateFile, Failure> {
    let file = StateFile::read(path)?;
    if file.kind != kind {
        return Err(Failure::Domain(format!(
            "{}: expected a {} file, found {}",
            path.display(),
            kind.as_str(),
            file.kind.as_str()
        )));
    }
    Ok(file)
}

fn load_state(path: &Path, eps: f64) -> Result<DensityState, Failure> {
    read_kind(path, FileKind::State)?
        .to_state(eps)
        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn load_pair(a: &Path, b: &Path, eps: f64) -> Result<(DensityState, DensityState), Failure> {
    let (a, b) = (load_state(a, eps)?, load_state(b, eps)?);
    if a.dim() != b.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        }
        .into());
    }
    Ok((a, b))
}

fn emit_state(s: &DensityState, out: Option<&Path>) -> CliResult {
    emit(&StateFile::from_state(s), out)
}

fn emit(file: &StateFile, out: Option<&Path>) -> CliResult {
    match out {
        Some(path) => file.write(path)?,
        None => print!("{}", file.to_json()),
    }
    Ok(ExitCode::SUCCESS)
}

fn write_text(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_scalar(x: f64) -> CliResult {
    println!("{}", format_sig(x, SCALAR_DIGITS));
    Ok(ExitCode::SUCCESS)
}

fn validate(path: &Path, eps: f64) -> CliResult {
    let file = StateFile::read(path)?;
    let m = &file.matrix;
    let n = file.dim();
    let finite = m.iter().all(|z| z.re.is_finite() && z.im.is_finite());
    if !finite {
        println!(
            "kind={}\ndim={n}\nstatus=invalid: non-finite entries",
            file.kind.as_str()
        );
        return Ok(ExitCode::from(1));
    }
    let residual = hermiticity_residual(m);
    let trace: Complex64 = m.diagonal().iter().sum();
    let min_eig =
        hermitian_eig(&HermitianMatrix::new((m + m.adjoint()).scale(0.5))?)?.min_eigenvalue();

    let mut violations = Vec::new();
    if residual > HERMITIAN_TOL * max_abs(m).max(1.0) {
        violations.push("hermiticity");
    }
    let mut report = format!(
        "kind={}\ndim={n}\nhermiticity_residual={}\n",
        file.kind.as_str(),
        format_sig(residual, SCALAR_DIGITS)
    );
    match file.kind {
        FileKind::State => {
            let deviation = (trace - 1.0).norm();
            if n < 2 {
                violations.push("dimension");
            }
            if deviation > TRACE_TOL {
                violations.push("trace");
            }
            if min_eig <= eps {
                violations.push("positivity");
            }
            let _ = writeln!(
                report,
                "trace_deviation={}",
                format_sig(deviation, SCALAR_DIGITS)
            );
        }
        FileKind::Hamiltonian => {
            let _ = writeln!(report, "trace={}", format_sig(trace.re, SCALAR_DIGITS));
        }
    }
    let _ = writeln!(report, "min_eig={}", format_sig(min_eig, SCALAR_DIGITS));
    if violations.is_empty() {
        report.push_str("status=valid\n");
        print!("{report}");
        Ok(ExitCode::SUCCESS)
    } else {
        let _ = writeln!(report, "status=invalid: {}", violations.join(", "));
        print!("{report}");
        Ok(ExitCode::from(1))
    }
}

fn arc(a: &Path, b: &Path, steps: usize, out: Option<&Path>, eps: f64) -> CliResult {
    if steps < 2 {
        return Err(Failure::Domain(format!(
            "steps must be at least 2, got {steps}"
        )));
    }
    let (a, b) = load_pair(a, b, eps)?;
    let n = a.dim();
    let mut csv = String::from("t,");
    if n == 2 {
        csv.push_str("x,y,z\n");
    } else {
        let names: Vec<String> = labels(n).iter().map(BasisLabel::to_string).collect();
        csv.push_str(&names.join(","));
        csv.push('\n');
    }
    for i in 0..steps {
        let t = i as f64 / (steps - 1) as f64;
        let point = state::arc(&a, &b, t)?;
        let values: Vec<f64> = if n == 2 {
            state_to_bloch(&point)?.components().to_vec()
        } else {
            basis::coordinates(&point)?.coords().to_vec()
        };
        csv.push_str(&format_sig(t, FILE_DIGITS));
        for v in values {
            csv.push(',');
            csv.push_str(&format_sig(v, FILE_DIGITS));
        }
        csv.push('\n');
    }
    write_text(&csv, out)?;
    Ok(ExitCode::SUCCESS)
}

fn write_basis(n: usize, dir: &Path) -> CliResult {
    if !(2..=MAX_BASIS_DIM).contains(&n) {
        return Err(Failure::Domain(format!(
            "dim must be between 2 and {MAX_BASIS_DIM}, got {n}"
        )));
    }
    std::fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    let names = labels(n);
    let states = basis::full_basis(n)?;
    for (label, s) in names.iter().zip(&states) {
        let file = StateFile::from_state(s).with_metadata("label", &label.to_string());
        file.write(&dir.join(format!("{label}.json")))?;
    }

    let k = states.len();
    let mut gram = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let g = state::inner(&states[i], &states[j])?;
            gram[i][j] = g;
            gram[j][i] = g;
        }
    }
    let mut max_off: f64 = 0.0;
    let mut max_diag: f64 = 0.0;
    for (i, row) in gram.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            if i == j {
                max_diag = max_diag.max((g - 1.0).abs());
            } else {
                max_off = max_off.max(g.abs());
            }
        }
    }
    let pass = max_off <= GRAM_TOL && max_diag <= GRAM_TOL;

    let mut report = format!(
        "dim={n}\ncount={k}\nmax_offdiag={}\nmax_diag_deviation={}\nstatus={}\n",
        format_sig(max_off, SCALAR_DIGITS),
        format_sig(max_diag, SCALAR_DIGITS),
        if pass { "pass" } else { "fail" }
    );
    let header: Vec<String> = names.iter().map(BasisLabel::to_string).collect();
    let _ = writeln!(report, "\nlabel,{}", header.join(","));
    for (label, row) in header.iter().zip(&gram) {
        let cells: Vec<String> = row.iter().map(|g| format_sig(*g, SCALAR_DIGITS)).collect();
        let _ = writeln!(report, "{label},{}", cells.join(","));
    }
    write_text(&report, Some(&dir.join("gram.txt")))?;
    println!(
        "wrote {k} states to {}; max off-diagonal {}",
        dir.display(),
        format_sig(max_off, SCALAR_DIGITS)
    );
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

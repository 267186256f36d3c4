use std::f64::consts::PI;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hocl::cochain::Cochain;
use hocl::complexes::ComplexError;
use hocl::diffusion::{classify_equilibrium, diffuse_operator, DiffusionParams, DEFAULT_T_MAX};
use hocl::generators::{
    builtin, directed_triangle, load_complex, save_complex, to_json, triangulated_torus, GeneratorError, TorusSpec,
    TorusType, TriangleCase,
};
use hocl::sweeps::{
    build_operator, commutator_sweep, delta_grid, export_csv, export_json, export_trajectory_csv,
    export_trajectory_json, prepare, spectrum_sweep, zero_eigenvalue_deltas, OperatorTag, DEFAULT_POINTS,
    ZERO_THRESHOLD,
};
use hocl::DirectedSimplicialComplex;

#[derive(Debug, Parser)]
#[command(
    name = "hocl",
    version,
    about = "Connection Laplacians of directed simplicial complexes"
)]
struct Cli {
    /// Worker threads for δ sweeps (defaults to one per core)
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a built-in complex as JSON
    Generate(GenerateArgs),
    /// Sweep the spectrum of an operator over δ ∈ [0, 2π)
    Spectrum(SpectrumArgs),
    /// Sweep ‖[L1up, L1down]‖_F over δ ∈ [0, 2π)
    Commutator(CommutatorArgs),
    /// Print the δ values where the operator has a zero eigenvalue
    Zeros(ZerosArgs),
    /// Integrate dν/dt = −Lν from a seeded random edge cochain
    Diffuse(DiffuseArgs),
    /// Validate a complex and report orientability
    Check(CheckArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("shape").required(true).args(["case", "torus"]))]
struct GenerateArgs {
    /// Single directed triangle, case 1 to 4
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
    case: Option<u32>,
    /// Periodic grid triangulation of size MxN
    #[arg(long, value_name = "MxN", value_parser = parse_size)]
    torus: Option<(usize, usize)>,
    /// Torus type: 1 keeps all triangle flows aligned, 2 reverses the upper triangles
    #[arg(long = "type", value_name = "T", requires = "torus", default_value_t = 1,
          value_parser = clap::value_parser!(u32).range(1..=2))]
    kind: u32,
    /// Output file (standard output if omitted)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SourceArgs {
    /// Built-in name (case1..case4, torusMxNt1, torusMxNt2) or complex JSON file
    #[arg(long, value_name = "SRC")]
    complex: String,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Operator: 1up, 1down, combined, 2down or magnetic
    #[arg(long, value_name = "OP")]
    op: OperatorTag,
    /// Grid points on [0, 2π)
    #[arg(long, default_value_t = DEFAULT_POINTS, value_parser = clap::value_parser!(usize))]
    points: usize,
    /// Output file; .json writes JSON, anything else CSV
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CommutatorArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Grid points on [0, 2π)
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    /// Output file; .json writes JSON, anything else CSV
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ZerosArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Operator: 1up, 1down, combined, 2down or magnetic
    #[arg(long, value_name = "OP")]
    op: OperatorTag,
    /// Grid points used to bracket the zeros
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
}

#[derive(Debug, Args)]
struct DiffuseArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Operator: 1up, 1down, combined or 2down
    #[arg(long, value_name = "OP")]
    op: OperatorTag,
    /// Phase δ in radians; fractions such as pi/3 or 3pi/2 are accepted
    #[arg(long, value_name = "VAL", value_parser = parse_angle, allow_hyphen_values = true)]
    delta: f64,
    /// Seed of the random unit initial cochain
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Final time
    #[arg(long, default_value_t = DEFAULT_T_MAX)]
    tmax: f64,
    /// Step size, or auto
    #[arg(long, default_value = "auto", value_parser = parse_dt)]
    dt: Step,
    /// Output file; .json writes JSON, anything else CSV
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    source: SourceArgs,
}

/// Decimal radians or a multiple of π such as `pi/3`, `2pi/3`, `-pi`, `1.5*pi`.
fn parse_angle(s: &str) -> Result<f64, String> {
    let text: String = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    let bad = || format!("invalid angle '{s}'; use radians or a form like pi/3");
    let Some((coeff, rest)) = text.split_once("pi") else {
        return text.parse::<f64>().map_err(|_| bad());
    };
    let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
    let coeff = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let denom = match rest {
        "" => 1.0,
        r => r
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .ok_or_else(bad)?,
    };
    if denom == 0.0 {
        return Err(bad());
    }
    Ok(coeff * PI / denom)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Step {
    Auto,
    Fixed(f64),
}

fn parse_dt(s: &str) -> Result<Step, String> {
    if s == "auto" {
        return Ok(Step::Auto);
    }
    match s.parse::<f64>() {
        Ok(dt) if dt > 0.0 && dt.is_finite() => Ok(Step::Fixed(dt)),
        _ => Err(format!("invalid step '{s}'; use a positive number or auto")),
    }
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("invalid size '{s}'; expected MxN");
    let (m, n) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((m.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?))
}

fn load_source(src: &str) -> Result<DirectedSimplicialComplex> {
    match builtin(src) {
        Ok(c) => Ok(c),
        Err(GeneratorError::UnknownBuiltin(_)) if Path::new(src).exists() => {
            load_complex(src).with_context(|| format!("loading {src}"))
        }
        Err(GeneratorError::UnknownBuiltin(_)) => {
            bail!("'{src}' is neither a built-in complex nor an existing file")
        }
        Err(e) => Err(e.into()),
    }
}

/// Write a line of data to standard output; a closed pipe is not an error.
fn emit(line: &str) -> Result<()> {
    match writeln!(io::stdout().lock(), "{line}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn check_points(points: usize) -> Result<()> {
    if points == 0 {
        bail!("--points must be positive");
    }
    Ok(())
}

fn generate(args: GenerateArgs) -> Result<()> {
    let c = match (args.case, args.torus) {
        (Some(id), _) => directed_triangle(TriangleCase::from_id(id)?),
        (None, Some((m, n))) => triangulated_torus(TorusSpec::new(m, n, TorusType::from_id(args.kind)?))?,
        (None, None) => unreachable!("clap requires one shape"),
    };
    match args.out {
        Some(path) => save_complex(&c, &path).with_context(|| format!("writing {}", path.display()))?,
        None => emit(&to_json(&c))?,
    }
    Ok(())
}

fn spectrum(args: SpectrumArgs) -> Result<()> {
    check_points(args.points)?;
    let c = load_source(&args.source.complex)?;
    let sweep = spectrum_sweep(&c, args.op, &delta_grid(args.points))?.named(&args.source.complex);
    write_sweep(&sweep, &args.out)
}

fn commutator(args: CommutatorArgs) -> Result<()> {
    check_points(args.points)?;
    let c = load_source(&args.source.complex)?;
    let sweep = commutator_sweep(&c, &delta_grid(args.points))?.named(&args.source.complex);
    write_sweep(&sweep, &args.out)
}

fn write_sweep(sweep: &hocl::sweeps::SweepResult, out: &Path) -> Result<()> {
    if is_json(out) {
        export_json(sweep, out)
    } else {
        export_csv(sweep, out)
    }
    .with_context(|| format!("writing {}", out.display()))
}

fn zeros(args: ZerosArgs) -> Result<()> {
    check_points(args.points)?;
    let c = load_source(&args.source.complex)?;
    let sweep = spectrum_sweep(&c, args.op, &delta_grid(args.points))?;
    let found = zero_eigenvalue_deltas(&c, args.op, &sweep, ZERO_THRESHOLD)?;
    let line = if found.is_empty() {
        "none".to_string()
    } else {
        found.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    };
    emit(&line)
}

fn diffuse(args: DiffuseArgs) -> Result<()> {
    if args.op == OperatorTag::Magnetic {
        bail!("diffusion runs on cochains; choose 1up, 1down, combined or 2down");
    }
    if !(args.tmax >= 0.0 && args.tmax.is_finite()) {
        bail!("--tmax must be a non-negative number");
    }
    let c = prepare(&load_source(&args.source.complex)?, args.op)?;
    let l = build_operator(&c, args.op, args.delta)?;
    let (order, simplices) = match args.op {
        OperatorTag::Down2 => (2, c.triangle_count()),
        _ => (1, c.edge_count()),
    };
    let nu0 = Cochain::random_unit(order, simplices, args.seed);
    let dt = match args.dt {
        Step::Auto => None,
        Step::Fixed(dt) => Some(dt),
    };
    let params = DiffusionParams {
        t_max: args.tmax,
        dt,
        ..DiffusionParams::default()
    };
    let traj = diffuse_operator(&l, &nu0, params)?;
    if is_json(&args.out) {
        export_trajectory_json(&traj, &args.out)
    } else {
        export_trajectory_csv(&traj, &args.out)
    }
    .with_context(|| format!("writing {}", args.out.display()))?;
    let eq = classify_equilibrium(&traj, &l)?;
    emit(&format!(
        "equilibrium: {eq}; final energy {:.6e}; dt {}",
        traj.energies.last().unwrap(),
        traj.dt
    ))
}

fn check(args: CheckArgs) -> Result<()> {
    let c = load_source(&args.source.complex)?;
    let orientation = match c.orient_manifold() {
        Ok(_) => "orientable".to_string(),
        Err(e @ (ComplexError::NotOrientable { .. } | ComplexError::NotPseudoManifold { .. })) => {
            format!("not orientable ({e})")
        }
        Err(e) => return Err(e.into()),
    };
    emit(&format!(
        "valid; {orientation}; V={} E={} T={}",
        c.vertex_count(),
        c.edge_count(),
        c.triangle_count()
    ))
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Commutator(a) => commutator(a),
        Command::Zeros(a) => zeros(a),
        Command::Diffuse(a) => diffuse(a),
        Command::Check(a) => check(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(io::stderr(), "error: {e:#}");
            ExitCode::from(1)
        }
    }
}

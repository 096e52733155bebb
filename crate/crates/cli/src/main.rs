use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use symcat::catbounds::{self, Params, SymmetricFamily, TableFormat};
use symcat::cover::{classify, cover_audit, default_cover};
use symcat::factor::{factor_aii, factor_symmetric};
use symcat::homotopy::{branch_log, contract};
use symcat::spaces::{is_member, sample};
use symcat::{ComplexMatrix, Error, Family, SpaceKind, SpacePoint, Tolerances};

/// Matrix models of SU(n)/SO(n) and SU(2n)/Sp(n): sampling, factorization, contraction,
/// covers, and category bounds.
#[derive(Parser)]
#[command(name = "symcat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw seeded random members as NDJSON.
    Sample {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Report membership residuals for each input record.
    Check(InputArgs),
    /// Factor each member as P·tP (AI) or J·P·J·tP (AII).
    Factor(InputArgs),
    /// Branch-restricted logarithm of each member.
    Log {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        branch: BranchArgs,
    },
    /// Contraction path from each member to a scalar matrix.
    Contract {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        branch: BranchArgs,
        #[arg(long, default_value_t = 16)]
        steps: usize,
    },
    /// Classify members into the default cover, or audit the cover on random samples.
    Cover {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        audit: bool,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, required_if_eq("audit", "true"))]
        seed: Option<u64>,
    },
    /// Print the category table of the classical symmetric spaces.
    Table {
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// Category bounds for one space, e.g. `describe ai 4` or `describe cii 2 1`.
    Describe {
        family: String,
        #[arg(num_args = 1..=2, required = true)]
        params: Vec<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Ai,
    Aii,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Args)]
struct SpaceArgs {
    #[arg(long, value_enum)]
    space: SpaceArg,
    #[arg(long)]
    n: usize,
    /// Membership tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct InputArgs {
    /// JSON or NDJSON file; stdin when omitted.
    #[arg(long)]
    input: Option<String>,
    /// Space for bare matrix records.
    #[arg(long, value_enum)]
    space: Option<SpaceArg>,
    #[arg(long)]
    n: Option<usize>,
    /// Membership tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct BranchArgs {
    /// Branch angle in radians.
    #[arg(long, conflicts_with = "alpha_from_cover")]
    alpha: Option<f64>,
    /// Take the angle of the witness eigenvalue of the default cover (the default).
    #[arg(long)]
    alpha_from_cover: bool,
}

enum Failure {
    Usage(String),
    Domain(Error),
    /// Domain failure already described on stderr.
    Rejected(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn tolerances(tol: Option<f64>) -> CliResult<Tolerances> {
    let mut t = Tolerances::default();
    if let Some(v) = tol {
        t.membership_tol = v;
    }
    t.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(t)
}

fn kind_of(space: SpaceArg, n: usize) -> SpaceKind {
    match space {
        SpaceArg::Ai => SpaceKind::ai(n),
        SpaceArg::Aii => SpaceKind::aii(n),
    }
}

fn read_records(args: &InputArgs) -> CliResult<Vec<SpacePoint>> {
    let text = match &args.input {
        Some(path) => {
            fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?
        }
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
            s
        }
    };
    let mut points = Vec::new();
    for (i, value) in serde_json::Deserializer::from_str(&text)
        .into_iter::<Value>()
        .enumerate()
    {
        let value = value.map_err(|e| Failure::Usage(format!("record {i}: {e}")))?;
        points.push(to_point(value, args, i)?);
    }
    if points.is_empty() {
        return Err(Failure::Usage("no input records".into()));
    }
    Ok(points)
}

fn to_point(value: Value, args: &InputArgs, i: usize) -> CliResult<SpacePoint> {
    let bad = |e: serde_json::Error| Failure::Usage(format!("record {i}: {e}"));
    if value.get("family").is_some() {
        let point: SpacePoint = serde_json::from_value(value).map_err(bad)?;
        if let Some(space) = args.space {
            let expected = kind_of(space, args.n.unwrap_or(point.kind().n));
            if expected != point.kind() {
                return Err(Failure::Usage(format!(
                    "record {i} is {}, but {expected} was requested",
                    point.kind()
                )));
            }
        }
        return Ok(point);
    }
    let matrix: ComplexMatrix = serde_json::from_value(value).map_err(bad)?;
    let space = args
        .space
        .ok_or_else(|| Failure::Usage(format!("record {i} is a bare matrix; pass --space")))?;
    let n = args.n.unwrap_or(match space {
        SpaceArg::Ai => matrix.n(),
        SpaceArg::Aii => matrix.n() / 2,
    });
    Ok(SpacePoint::unchecked(kind_of(space, n), matrix)?)
}

fn resolve_alpha(branch: &BranchArgs, point: &SpacePoint, tol: &Tolerances) -> CliResult<f64> {
    if let Some(a) = branch.alpha {
        return Ok(a);
    }
    let config = default_cover(point.kind());
    let class = classify(&config, point, tol)?;
    let w = class
        .witness
        .ok_or_else(|| Failure::Domain(Error::InvalidCover("point lies in no A_r".into())))?;
    Ok(config.alphas()[w])
}

fn emit<T: serde::Serialize>(out: &mut impl Write, value: &T) -> CliResult<()> {
    let io_err = |e: io::Error| Failure::Usage(format!("stdout: {e}"));
    serde_json::to_writer(&mut *out, value).map_err(|e| io_err(e.into()))?;
    writeln!(out).map_err(io_err)
}

fn run(cli: Cli) -> CliResult<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Sample { space, count, seed } => {
            tolerances(space.tol)?;
            let kind = kind_of(space.space, space.n);
            for i in 0..count {
                let point = sample(kind, seed.wrapping_add(i as u64))?;
                emit(&mut out, &point)?;
            }
            eprintln!("sampled {count} point(s) of {kind} from seed {seed}");
        }
        Command::Check(args) => {
            let tol = tolerances(args.tol)?;
            let mut rejected = 0;
            for point in read_records(&args)? {
                let report = is_member(point.kind(), point.matrix(), &tol)?;
                if !report.member {
                    rejected += 1;
                    eprintln!("{} rejected: {report}", point.kind());
                }
                emit(&mut out, &report)?;
            }
            if rejected > 0 {
                return Err(Failure::Rejected(format!(
                    "{rejected} record(s) not in the space"
                )));
            }
        }
        Command::Factor(args) => {
            let tol = tolerances(args.tol)?;
            for point in read_records(&args)? {
                let result = match point.kind().family {
                    Family::AI => {
                        let report = is_member(point.kind(), point.matrix(), &tol)?;
                        if !report.member {
                            return Err(Error::NotInSpace { report }.into());
                        }
                        factor_symmetric(point.matrix(), &tol)?
                    }
                    Family::AII => factor_aii(&point, &tol)?,
                };
                eprintln!("{}: residual {:.3e}", point.kind(), result.residual);
                emit(&mut out, &result)?;
            }
        }
        Command::Log { input, branch } => {
            let tol = tolerances(input.tol)?;
            for point in read_records(&input)? {
                let alpha = resolve_alpha(&branch, &point, &tol)?;
                let log = branch_log(point.matrix(), alpha, &tol)?;
                eprintln!(
                    "{}: alpha {:.6}, winding {}, margin {:.3e}",
                    point.kind(),
                    log.alpha,
                    log.winding,
                    log.margin
                );
                emit(&mut out, &log)?;
            }
        }
        Command::Contract {
            input,
            branch,
            steps,
        } => {
            let tol = tolerances(input.tol)?;
            for point in read_records(&input)? {
                let report = is_member(point.kind(), point.matrix(), &tol)?;
                if !report.member {
                    return Err(Error::NotInSpace { report }.into());
                }
                let alpha = resolve_alpha(&branch, &point, &tol)?;
                let path = contract(&point, alpha, steps, &tol)?;
                eprintln!(
                    "{}: winding {}, target {}, max residual {:.3e}",
                    point.kind(),
                    path.winding,
                    path.target_scalar,
                    path.max_membership_residual()
                );
                emit(&mut out, &path.samples)?;
            }
        }
        Command::Cover {
            input,
            audit,
            trials,
            seed,
        } => {
            let tol = tolerances(input.tol)?;
            if audit {
                let (Some(space), Some(n), Some(seed)) = (input.space, input.n, seed) else {
                    return Err(Failure::Usage(
                        "cover --audit needs --space, --n and --seed".into(),
                    ));
                };
                let report = cover_audit(kind_of(space, n), trials, seed, &tol)?;
                eprintln!(
                    "{}: covered {}/{} (min witness margin {:.3e})",
                    report.kind, report.covered, report.trials, report.min_witness_margin
                );
                emit(&mut out, &report)?;
            } else {
                for point in read_records(&input)? {
                    let config = default_cover(point.kind());
                    let class = classify(&config, &point, &tol)?;
                    emit(
                        &mut out,
                        &json!({
                            "lambdas": config.lambdas,
                            "memberships": class.memberships,
                            "margins": class.margins,
                            "witness": class.witness,
                        }),
                    )?;
                }
            }
        }
        Command::Table { format } => match format {
            Format::Md => write!(out, "{}", catbounds::render_table(TableFormat::Markdown))
                .map_err(|e| Failure::Usage(format!("stdout: {e}")))?,
            Format::Csv => write!(out, "{}", catbounds::render_table(TableFormat::Csv))
                .map_err(|e| Failure::Usage(format!("stdout: {e}")))?,
            Format::Json => emit(&mut out, &catbounds::table_rows())?,
        },
        Command::Describe { family, params } => {
            let fam = SymmetricFamily::parse(&family)
                .ok_or_else(|| Failure::Usage(format!("unknown family {family:?}")))?;
            let params = match params.as_slice() {
                [n] => Params::Rank(*n),
                [p, q] => Params::Pair(*p, *q),
                _ => unreachable!("clap enforces 1..=2 values"),
            };
            let d = catbounds::describe(fam, params)?;
            emit(&mut out, &d)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Rejected(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}

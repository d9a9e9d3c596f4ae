use clap::{Args, Parser, Subcommand};
use curvenorm::cli::{self, CliError, NumericOptions, Problem};
use curvenorm::regularity::DEFAULT_SLACK;
use curvenorm::zoo::{self, FunctionSpec};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "curvenorm", version, about = "Seminorms, Dirichlet energies and regularity constants of Jordan curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks of a JSON configuration.
    Run { config: PathBuf },
    /// Zoo catalog.
    Zoo {
        #[command(subcommand)]
        what: ZooCommand,
    },
    /// Douglas, spectral, interior and exterior values of one function.
    Energies(EnergiesArgs),
    /// Check every inequality on a curve; exit 4 on any violation.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum ZooCommand {
    /// Print curve families, functions and parameter ranges as JSON.
    List,
}

#[derive(Args)]
struct CurveArgs {
    /// Family name, inline JSON curve spec, or a .json curve file.
    #[arg(long)]
    curve: String,
    #[arg(long = "N", default_value_t = 1024)]
    n: usize,
    #[arg(long = "R")]
    radius: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Lobe count of the star family.
    #[arg(long)]
    lobes: Option<u32>,
    #[arg(long)]
    level: Option<u32>,
    #[arg(long)]
    neck: Option<f64>,
}

impl CurveArgs {
    fn params(&self) -> Vec<(String, f64)> {
        let named = [
            ("R", self.radius),
            ("a", self.a),
            ("b", self.b),
            ("eps", self.eps),
            ("k", self.lobes.map(f64::from)),
            ("level", self.level.map(f64::from)),
            ("neck", self.neck),
        ];
        named
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect()
    }

    fn problem(&self) -> Result<Problem, CliError> {
        cli::parse_curve_argument(&self.curve, &self.params(), self.n)
    }
}

#[derive(Args)]
struct EnergiesArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// fourier_mode, inverse_pole, coordinate or bump.
    #[arg(long = "fn")]
    function: String,
    /// Fourier mode index.
    #[arg(long)]
    k: Option<i64>,
    /// Pole or bump center as "re,im".
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    w: Option<[f64; 2]>,
    #[arg(long)]
    width: Option<f64>,
    /// Grid spacing; defaults to diameter / 256.
    #[arg(long)]
    h: Option<f64>,
    #[arg(long, default_value_t = curvenorm::harmonic::DEFAULT_TOL)]
    tol: f64,
    /// Directory receiving interior_field.csv and exterior_field.csv.
    #[arg(long)]
    dump_field: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    curve: CurveArgs,
    #[arg(long, default_value_t = DEFAULT_SLACK)]
    slack: f64,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON report here as well as to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_point(s: &str) -> Result<[f64; 2], String> {
    let (re, im) = s.split_once(',').ok_or("expected re,im")?;
    let re = re.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let im = im.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok([re, im])
}

fn function_spec(args: &EnergiesArgs) -> Result<FunctionSpec, CliError> {
    let missing = |what: &str| CliError::Config(format!("--fn {} needs --{what}", args.function));
    Ok(match args.function.as_str() {
        "fourier_mode" => FunctionSpec::FourierMode { k: args.k.ok_or_else(|| missing("k"))? },
        "inverse_pole" => FunctionSpec::InversePole { w: args.w.ok_or_else(|| missing("w"))? },
        "coordinate" => FunctionSpec::Coordinate,
        "bump" => FunctionSpec::Bump {
            center: args.w.ok_or_else(|| missing("w"))?,
            width: args.width.ok_or_else(|| missing("width"))?,
        },
        other => return Err(CliError::Config(format!("unknown function '{other}'"))),
    })
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn energies(args: &EnergiesArgs) -> Result<(), CliError> {
    let problem = args.curve.problem()?;
    let spec = function_spec(args)?;
    let f = zoo::make_function(&spec, &problem.curve).map_err(|e| CliError::Config(e.to_string()))?;
    let h = args.h.unwrap_or(problem.curve.diameter() / cli::DEFAULT_CELLS_PER_DIAMETER);
    let summary = cli::energies(&problem.label, &problem.curve, &f, h, args.tol, args.dump_field.as_deref())?;
    print_json(&summary);
    Ok(())
}

fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let problem = args.curve.problem()?;
    let mut numeric = NumericOptions {
        h: args.h,
        slack: args.slack,
        ..NumericOptions::default()
    };
    if let Some(seed) = args.seed {
        numeric.seed = seed;
    }
    if !(numeric.slack >= 0.0) {
        return Err(CliError::Config(format!("slack {} must be nonnegative", numeric.slack)));
    }
    let report = cli::verify(&problem, &numeric)?;
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Some(path) = &args.output {
        std::fs::write(path, format!("{text}\n")).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    println!("{text}");
    report.print_failures();
    match report.failures() {
        0 => Ok(()),
        n => Err(CliError::Verification(n)),
    }
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(args) => args,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(cli::EXIT_CONFIG as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let result = match &args.command {
        Command::Run { config } => cli::run_config_file(config).map(|written| {
            for path in written {
                println!("{}", path.display());
            }
        }),
        Command::Zoo { what: ZooCommand::List } => {
            print_json(&zoo::zoo_listing());
            Ok(())
        }
        Command::Energies(args) => energies(args),
        Command::Verify(args) => verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("curvenorm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

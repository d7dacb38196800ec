//! `mmpe` command-line front end.
//!
//! Distribution files use the format documented in [`mmpe::presets`].

use clap::{Args, Parser, Subcommand, ValueEnum};
use mmpe::engine::{mmpe, McOptions, DEFAULT_SAMPLES, DEFAULT_SEED};
use mmpe::figures::{figure, FIGURES};
use mmpe::model::InputDistribution;
use mmpe::presets::{parse_distribution, preset};
use mmpe::table::{estimates_table, Cell, Table, BOUND_HEADER};
use mmpe::verify::{dominance_reports, verify, Suite, VerifyOptions};
use mmpe::MmpeError;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mmpe", version, about = "Minimum mean p-th error sweeps, figure data and self-checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// mmpe (or every applicable bound) over an (snr, p) grid.
    Curve(CurveArgs),
    /// Data series of a standard figure.
    Figure {
        /// One of fig1a, fig1b, fig2, fig3, fig4a, fig4b.
        id: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::Fast)]
        suite: SuiteArg,
        /// Override the single-crossing constant c_p (fault injection).
        #[arg(long, value_name = "C")]
        inject_cp: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Args)]
struct CurveArgs {
    /// gaussian, bpsk, pam4, asym_pair or pmone_vector.
    #[arg(long, conflicts_with = "dist_file", required_unless_present = "dist_file")]
    preset: Option<String>,
    /// Distribution description (key = value lines or JSON).
    #[arg(long)]
    dist_file: Option<PathBuf>,
    /// `a:step:b` or a comma list.
    #[arg(long)]
    snr: String,
    /// Comma list of orders.
    #[arg(long)]
    p: String,
    /// Dimension for gaussian and pmone_vector presets.
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Emit every applicable bound with its truth instead of the estimates.
    #[arg(long)]
    bounds: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Fast,
    Full,
}

enum Failure {
    Usage(String),
    Runtime(String),
    Verification(String),
}

impl From<MmpeError> for Failure {
    fn from(e: MmpeError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn parse_grid(flag: &str, s: &str) -> Result<Vec<f64>, Failure> {
    let bad = |t: &str| Failure::Usage(format!("--{flag}: '{t}' is not a number"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(t));
    let grid = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Failure::Usage(format!("--{flag}: expected a:step:b, got '{s}'")));
        }
        let (a, step, b) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || b < a {
            return Err(Failure::Usage(format!("--{flag}: need step > 0 and a ≤ b in '{s}'")));
        }
        mmpe::figures::range_grid(a, step, b)
    } else {
        s.split(',').filter(|t| !t.trim().is_empty()).map(num).collect::<Result<Vec<_>, _>>()?
    };
    if grid.is_empty() {
        return Err(Failure::Usage(format!("--{flag}: empty grid")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::Usage(format!("--{flag}: values must be strictly increasing")));
    }
    Ok(grid)
}

fn load_distribution(args: &CurveArgs) -> Result<InputDistribution, Failure> {
    match (&args.preset, &args.dist_file) {
        (Some(name), _) => Ok(preset(name, args.n).map_err(|e| Failure::Usage(e.to_string()))?),
        (None, Some(path)) => {
            let src = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            parse_distribution(&src).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
        }
        (None, None) => Err(Failure::Usage("one of --preset or --dist-file is required".into())),
    }
}

fn curve(args: &CurveArgs) -> Result<Table, Failure> {
    let dist = load_distribution(args)?;
    let snrs = parse_grid("snr", &args.snr)?;
    let ps = parse_grid("p", &args.p)?;
    if args.samples == 0 {
        return Err(Failure::Usage("--samples must be positive".into()));
    }
    let mc = McOptions::new(args.samples, args.seed);
    if args.bounds {
        let mut header = vec!["snr", "p"];
        header.extend(BOUND_HEADER);
        let mut t = Table::new(&header);
        for &snr in &snrs {
            for &p in &ps {
                let rs = dominance_reports(&dist, snr, p, None, mc)?;
                for row in mmpe::table::bounds_table(&rs).rows {
                    let mut full: Vec<Cell> = vec![snr.into(), p.into()];
                    full.extend(row);
                    t.push(full);
                }
            }
        }
        return Ok(t);
    }
    let mut es = Vec::with_capacity(snrs.len() * ps.len());
    for &snr in &snrs {
        for &p in &ps {
            es.push(mmpe(&dist, snr, p, mc)?);
        }
    }
    Ok(estimates_table(&es))
}

fn emit(t: &Table, out: Option<&PathBuf>) -> Result<(), Failure> {
    let csv = t.to_csv()?;
    match out {
        Some(path) => std::fs::write(path, csv).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout().write_all(csv.as_bytes()).map_err(|e| Failure::Runtime(e.to_string())),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Curve(args) => emit(&curve(&args)?, args.out.as_ref()),
        Command::Figure { id, out } => {
            if !FIGURES.contains(&id.as_str()) {
                return Err(Failure::Usage(format!("unknown figure '{id}'; available: {}", FIGURES.join(", "))));
            }
            emit(&figure(&id)?, out.as_ref())
        }
        Command::Verify { suite, inject_cp, seed, samples } => {
            let mut opts = VerifyOptions::new(match suite {
                SuiteArg::Fast => Suite::Fast,
                SuiteArg::Full => Suite::Full,
            });
            opts.cp_override = inject_cp;
            if let Some(s) = seed {
                opts.mc.seed = s;
            }
            if let Some(n) = samples {
                opts.mc.samples = n;
            }
            let report = verify(&opts);
            print!("{report}");
            let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Verification(format!("failed: {}", failed.join(", "))))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) | Err(Failure::Verification(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

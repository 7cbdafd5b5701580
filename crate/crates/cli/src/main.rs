mod commands;
mod input;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use cluster_reduce::Error;
use serde_json::Value;

/// Exact reduction and dynamics of cluster maps from mutation-periodic quivers.
///
/// Matrices, maps and exponent sets are given as paths to JSON files or as
/// `fixture:NAME` (`fixture:NAME#K` for the K-th matrix of a list fixture).
/// Node indices in printed text are 1-based.
///
/// Exit status: 0 on success, 2 when a verification fails, 3 on bad input.
#[derive(Parser, Debug)]
#[command(name = "cluster-reduce", version, about, long_about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print a human-readable summary instead of JSON.
    #[arg(long, global = true)]
    text: bool,

    /// Write the JSON document to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Working precision of float computations, in decimal digits.
    #[arg(long, global = true, env = "CLUSTER_REDUCE_PRECISION", default_value_t = 64)]
    digits: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    /// Null leaves of a presymplectic form.
    Null,
    /// Symplectic leaves of a Poisson structure.
    Casimir,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mutation period of a quiver, or global period of a map.
    #[command(group(ArgGroup::new("input").required(true).args(["matrix", "map"])))]
    Period {
        /// Exchange matrix of the quiver.
        #[arg(long)]
        matrix: Option<String>,
        /// Self-map to test for global periodicity.
        #[arg(long)]
        map: Option<String>,
        /// Largest period tried [default: 8 for quivers, 12 for maps].
        #[arg(long, visible_alias = "max-m")]
        max: Option<usize>,
        /// Also search for points of this period by Newton iteration.
        #[arg(long, value_name = "P", requires = "map")]
        points: Option<usize>,
        /// Also scan seeded orbits for short periods and escape growth.
        #[arg(long, requires = "map")]
        scan: bool,
        /// Orbits followed by --scan.
        #[arg(long, default_value_t = 25)]
        samples: usize,
    },
    /// Cluster map of a mutation-periodic quiver.
    Map {
        #[arg(long)]
        matrix: String,
        /// Largest mutation period tried.
        #[arg(long, default_value_t = 8)]
        max_m: usize,
    },
    /// Invariant log-canonical Poisson structures of a map.
    FindPoisson {
        #[arg(long)]
        map: String,
        /// Keep only structures C with C·B = 0 for this exchange matrix.
        #[arg(long)]
        compatible: Option<String>,
    },
    /// Reduced map on the leaf space of a presymplectic or Poisson structure.
    Reduce {
        #[arg(long)]
        map: String,
        /// Skew matrix B (presymplectic) or C (Poisson).
        #[arg(long)]
        structure: String,
        /// Foliation to reduce by [default: whichever structure the map preserves].
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        /// Exponent rows to express the submersion in; the first r rows are used.
        #[arg(long)]
        align: Option<String>,
    },
    /// Nested foliations of several structures, coarsest first.
    Flag {
        /// Skew matrices, each presymplectic or Poisson.
        #[arg(long, num_args = 1.., required = true)]
        structures: Vec<String>,
        /// Kind of each structure [default: null for the first, casimir for the rest].
        #[arg(long, value_enum, value_delimiter = ',')]
        kinds: Vec<KindArg>,
        /// Exponent rows to express every level in.
        #[arg(long)]
        align: Option<String>,
        /// Also reduce this map along the flag and verify every chain step.
        #[arg(long)]
        map: Option<String>,
    },
    /// Orbit of a point.
    Orbit {
        #[arg(long)]
        map: String,
        /// Comma-separated coordinates, each p/q or decimal.
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
    },
    /// Leaf labels along an orbit, for each given submersion.
    Itinerary {
        #[arg(long)]
        map: String,
        /// Submersion documents, or reduced systems written by `reduce`.
        #[arg(long, num_args = 1.., required = true)]
        submersions: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Labels within 10^TOL count as equal [default: exact equality,
        /// or -digits/2 in float mode].
        #[arg(long, allow_hyphen_values = true)]
        tol: Option<f64>,
    },
    /// Re-check invariance, reductions and first integrals.
    Verify {
        #[arg(long)]
        map: String,
        /// Presymplectic form the map should preserve.
        #[arg(long)]
        presymplectic: Option<String>,
        /// Poisson structures the map should preserve.
        #[arg(long, num_args = 1..)]
        poisson: Vec<String>,
        /// Reduced system whose identity π∘φ = ψ∘π is checked symbolically.
        #[arg(long)]
        system: Option<String>,
        /// Submersion whose components should be invariants of the p-th iterate.
        #[arg(long, requires = "period")]
        first_integral: Option<String>,
        #[arg(long)]
        period: Option<usize>,
        /// Points per pointwise check.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Full analysis of a quiver: structures, reductions, flag and dynamics.
    Pipeline {
        #[arg(long)]
        matrix: String,
        /// Poisson matrices to reduce by [default: the discovered basis].
        #[arg(long, num_args = 1..)]
        poisson: Vec<String>,
        /// Preferred exponent rows for every submersion.
        #[arg(long)]
        align: Option<String>,
        #[arg(long, default_value_t = 8)]
        max_m: usize,
        /// Largest global period tried for reduced maps.
        #[arg(long, default_value_t = 12)]
        max_p: usize,
        /// Steps of exact search in the no-period scan.
        #[arg(long, default_value_t = 20)]
        scan_p: usize,
        /// Points per pointwise check.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Write report.json and report.txt into this directory.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// List the shipped fixtures, or print one.
    Fixtures { name: Option<String> },
}

/// Result of a command: a JSON document, its text rendering, and whether
/// every check it ran passed.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub verified: bool,
}

/// A check that ran and came out negative.
#[derive(Debug)]
pub struct Unverified(pub String);

impl std::fmt::Display for Unverified {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Unverified {}

const VERIFICATION_FAILURE: u8 = 2;
const INPUT_ERROR: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Unverified>().is_some() {
        return VERIFICATION_FAILURE;
    }
    match err.downcast_ref::<Error>() {
        Some(
            Error::InvalidCertificate
            | Error::NotFiberConstant
            | Error::NotReducible { .. }
            | Error::NotAChain { .. }
            | Error::VerificationFailed(_),
        ) => VERIFICATION_FAILURE,
        _ => INPUT_ERROR,
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    if cli.digits == 0 {
        anyhow::bail!("precision must be positive");
    }
    let ctx = commands::Context {
        seed: cli.seed,
        digits: cli.digits,
    };
    match &cli.command {
        Command::Period {
            matrix,
            map,
            max,
            points,
            scan,
            samples,
        } => match (matrix, map) {
            (Some(m), _) => commands::quiver_period(m, max.unwrap_or(8)),
            (_, Some(f)) => commands::map_period(&ctx, f, max.unwrap_or(12), *points, scan.then_some(*samples)),
            _ => unreachable!("clap enforces one input"),
        },
        Command::Map { matrix, max_m } => commands::map(matrix, *max_m),
        Command::FindPoisson { map, compatible } => commands::find_poisson(&ctx, map, compatible.as_deref()),
        Command::Reduce {
            map,
            structure,
            kind,
            align,
        } => commands::reduce(&ctx, map, structure, *kind, align.as_deref()),
        Command::Flag {
            structures,
            kinds,
            align,
            map,
        } => commands::flag(structures, kinds, align.as_deref(), map.as_deref()),
        Command::Orbit {
            map,
            start,
            steps,
            mode,
        } => commands::orbit(&ctx, map, start, *steps, *mode),
        Command::Itinerary {
            map,
            submersions,
            start,
            steps,
            mode,
            tol,
        } => commands::itinerary(&ctx, map, submersions, start, *steps, *mode, *tol),
        Command::Verify {
            map,
            presymplectic,
            poisson,
            system,
            first_integral,
            period,
            samples,
        } => commands::verify(
            &ctx,
            map,
            presymplectic.as_deref(),
            poisson,
            system.as_deref(),
            first_integral.as_deref().zip(*period),
            *samples,
        ),
        Command::Pipeline {
            matrix,
            poisson,
            align,
            max_m,
            max_p,
            scan_p,
            samples,
            output_dir,
        } => commands::pipeline(
            &ctx,
            commands::PipelineArgs {
                matrix,
                poisson,
                align: align.as_deref(),
                max_m: *max_m,
                max_p: *max_p,
                scan_p: *scan_p,
                samples: *samples,
                output_dir: output_dir.as_deref(),
            },
        ),
        Command::Fixtures { name } => commands::fixtures(name.as_deref()),
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> anyhow::Result<()> {
    let json = serde_json::to_string_pretty(&outcome.json)? + "\n";
    if let Some(path) = &cli.out {
        fs::write(path, &json).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
    }
    if cli.text {
        print!("{}", outcome.text);
    } else if cli.out.is_none() {
        print!("{json}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(INPUT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = run(&cli).and_then(|o| emit(&cli, &o).map(|()| o));
    match result {
        Ok(o) if o.verified => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("error: verification failed");
            ExitCode::from(VERIFICATION_FAILURE)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

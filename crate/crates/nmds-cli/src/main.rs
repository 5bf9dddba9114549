//! Command-line front end: build lifted tracks, decide completeness, export
//! generator matrices, and reproduce the verification suites.
//!
//! Exit codes: 0 success, 1 claim failure, 2 usage error, 3 domain error,
//! 4 resource cap exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nmds_core::catalog::{
    append_records, cmd_build, cmd_complete, cmd_reproduce, export_generator, parse_element,
    weierstrass_representatives, all_weierstrass, BuildOptions, CatalogRecord, CompleteOptions,
    CurveParams, FieldDesc, DEFAULT_SEED,
};
use nmds_core::complete::smallq::ScanOptions;
use nmds_core::curves::Curve;
use nmds_core::error::Error;
use nmds_core::field::Field;
use nmds_core::verify::{CheckMode, Limits};

#[derive(Parser)]
#[command(name = "nmds", version, about = "Near-MDS codes from lifted elliptic curves")]
struct Cli {
    /// Worker threads (overrides the NMDS_WORKERS environment variable;
    /// default: available parallelism). Results do not depend on this.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CurveArgs {
    /// Field order q = p or p^2, p >= 5 prime
    #[arg(long)]
    q: u64,

    /// Weierstrass curve y^2 = x^3 + ax + b, e.g. --weierstrass a=0 b=1
    #[arg(long, num_args = 2, value_names = ["a=A", "b=B"], conflicts_with = "hesse")]
    weierstrass: Option<Vec<String>>,

    /// Hesse curve x^3 + y^3 + z^3 = 3c xyz, e.g. --hesse c=1+sqrt3
    #[arg(long, value_name = "c=C")]
    hesse: Option<String>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Print the field description {"p", "h", "modulus"} for an order q
    FieldInfo {
        #[arg(long)]
        q: u64,
    },
    /// Build a curve, lift it into PG(8,q), verify the track conditions
    Build {
        #[command(flatten)]
        curve: CurveArgs,
        /// Write the 9 x n generator matrix to this path
        #[arg(long)]
        export: Option<PathBuf>,
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Track-condition verification mode (default: exhaustive when feasible)
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Decide completeness of the lifted track
    Complete {
        #[command(flatten)]
        curve: CurveArgs,
        /// Sweep every elliptic curve with n >= 9 instead of one curve
        #[arg(long, conflicts_with_all = ["weierstrass", "hesse"])]
        all_curves: bool,
        /// Sweep one representative curve per point count n >= 9
        #[arg(long, conflicts_with_all = ["weierstrass", "hesse", "all_curves"])]
        representatives: bool,
        #[arg(long, value_enum, default_value = "on")]
        pruning: OnOff,
        #[arg(long, default_value_t = 64)]
        partitions: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Raise the exhaustive-scan field cap (default 13)
        #[arg(long)]
        cap_scan: Option<u32>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Export the generator matrix of a lifted track
    Export {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a reproduction suite: small-q | large-q | tracks
    Reproduce {
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        partitions: u32,
        #[arg(long, value_enum, default_value = "on")]
        pruning: OnOff,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

fn parse_curve(field: &Field, args: &CurveArgs) -> Result<CurveParams, Error> {
    let take = |token: &str, key: &str| -> Result<nmds_core::field::Fe, Error> {
        match token.split_once('=') {
            Some((k, v)) if k == key => parse_element(field, v),
            _ => Err(Error::Parse(format!("expected {key}=<value>, got '{token}'"))),
        }
    };
    match (&args.weierstrass, &args.hesse) {
        (Some(ab), None) => {
            let a = take(&ab[0], "a")?;
            let b = take(&ab[1], "b")?;
            Ok(CurveParams::Weierstrass { a, b })
        }
        (None, Some(c)) => Ok(CurveParams::Hesse { c: take(c, "c")? }),
        _ => Err(Error::Parse("specify exactly one of --weierstrass or --hesse".into())),
    }
}

fn emit(record: &CatalogRecord, catalog_path: &Option<PathBuf>) -> Result<(), Error> {
    println!("{}", serde_json::to_string(record).map_err(|e| Error::Io(e.to_string()))?);
    if let Some(path) = catalog_path {
        append_records(path, std::slice::from_ref(record))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let workers = cli
        .workers
        .or_else(|| std::env::var("NMDS_WORKERS").ok().and_then(|v| v.parse().ok()));
    if let Some(n) = workers {
        //結果 independent of the pool size; ignore double-initialization
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }

    match cli.command {
        Command::FieldInfo { q } => {
            let field = Field::from_order(q)?;
            let desc = FieldDesc::of(&field);
            println!("{}", serde_json::to_string(&desc).map_err(|e| Error::Io(e.to_string()))?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Build { curve, export, catalog, seed, mode } => {
            let field = Field::from_order(curve.q)?;
            let params = parse_curve(&field, &curve)?;
            let limits = Limits::default();
            let opts = BuildOptions {
                seed,
                mode: mode.map(|m| match m {
                    ModeArg::Exhaustive => CheckMode::Exhaustive,
                    ModeArg::Sampled => CheckMode::Sampled { seed, trials: limits.sample_trials },
                }),
            };
            let (record, track) = cmd_build(field, &params, &opts, &limits)?;
            if let Some(path) = export {
                export_generator(&track, &path)?;
            }
            emit(&record, &catalog)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Complete {
            curve,
            all_curves,
            representatives,
            pruning,
            partitions,
            seed,
            cap_scan,
            mode,
            catalog,
        } => {
            let field = Field::from_order(curve.q)?;
            let mut limits = Limits::default();
            if let Some(cap) = cap_scan {
                limits.scan_max_q = cap;
            }
            let opts = CompleteOptions {
                build: BuildOptions {
                    seed,
                    mode: mode.map(|m| match m {
                        ModeArg::Exhaustive => CheckMode::Exhaustive,
                        ModeArg::Sampled => {
                            CheckMode::Sampled { seed, trials: limits.sample_trials }
                        }
                    }),
                },
                scan: ScanOptions {
                    pruning: pruning == OnOff::On,
                    partitions,
                    ..ScanOptions::default()
                },
                ..CompleteOptions::default()
            };
            let sweep: Vec<CurveParams> = if all_curves {
                all_weierstrass(&field)
                    .into_iter()
                    .filter(|&(a, b)| {
                        Curve::weierstrass(field, a, b).map(|e| e.n() >= 9).unwrap_or(false)
                    })
                    .map(|(a, b)| CurveParams::Weierstrass { a, b })
                    .collect()
            } else if representatives {
                weierstrass_representatives(&field)
                    .into_iter()
                    .map(|(a, b, _)| CurveParams::Weierstrass { a, b })
                    .collect()
            } else {
                vec![parse_curve(&field, &curve)?]
            };
            for params in sweep {
                let record = cmd_complete(field, &params, &opts, &limits)?;
                emit(&record, &catalog)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { curve, out } => {
            let field = Field::from_order(curve.q)?;
            let params = parse_curve(&field, &curve)?;
            let (_, track) =
                cmd_build(field, &params, &BuildOptions::default(), &Limits::default())?;
            export_generator(&track, &out)?;
            eprintln!("wrote {} ({} columns)", out.display(), track.n());
            Ok(ExitCode::SUCCESS)
        }
        Command::Reproduce { suite, seed, partitions, pruning, catalog } => {
            let report = cmd_reproduce(&suite, seed, partitions, pruning == OnOff::On)?;
            for row in &report.rows {
                let status = if !row.blocking {
                    "INFO"
                } else if row.pass {
                    "PASS"
                } else {
                    "FAIL"
                };
                let detail = if row.detail.is_empty() {
                    String::new()
                } else {
                    format!(" [{}]", row.detail)
                };
                println!("{status}  {}  {}{detail}", row.id, row.description);
            }
            if let Some(path) = catalog {
                append_records(&path, &report.records)?;
            }
            let pass = report.all_pass();
            println!(
                "suite {}: {} ({} claims)",
                report.suite,
                if pass { "all claims pass" } else { "CLAIM FAILURES" },
                report.rows.len()
            );
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

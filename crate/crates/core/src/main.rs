use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use fdconvex::coefficients::CoeffCache;
use fdconvex::hessian::{hessian_fd_check, SimplexPoint};
use fdconvex::multigraphs::{enumerate_multigraphs, Multigraph};
use fdconvex::pipeline::{
    emit_report, verify_degree, OverallVerdict, ReportFormat, RunConfig,
};
use fdconvex::rational::format_rational;
use fdconvex::reduction::theorem_blocks_with;
use fdconvex::repset::{orbit_count_bruteforce, orbit_count_formula};

/// Certifies convexity of the degree-d redundancy-scheduling polynomial
/// over the standard simplex, simultaneously for every number of servers,
/// by reducing each Hessian coefficient family to two constant matrices
/// and one scalar and certifying those exactly.
#[derive(Parser)]
#[command(name = "fdconvex", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full certification for one degree (or a range).
    Verify {
        /// Polynomial degree d (>= 3).
        #[arg(long)]
        degree: u32,
        /// Verify every degree from --degree up to this one.
        #[arg(long)]
        to: Option<u32>,
        /// Worker threads for the per-multigraph fan-out.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        /// Write one JSON certificate per multigraph into this directory.
        #[arg(long)]
        certificates: Option<PathBuf>,
        /// Embed the exact block matrices in the report.
        #[arg(long)]
        dump_blocks: bool,
        /// Use the plain coefficient matrices instead of the gamma!-scaled
        /// family.
        #[arg(long)]
        no_scale: bool,
    },
    /// Enumerate multigraph classes with a given edge count.
    Enumerate {
        /// Number of edges.
        #[arg(long)]
        edges: u32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Print the constant reduction blocks of one multigraph.
    Blocks {
        /// Edge list with repetition, e.g. "1-2,1-3" or "1-2,1-2".
        #[arg(long)]
        multigraph: String,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(long)]
        no_scale: bool,
    },
    /// Compare the orbit-count formula against brute-force counting.
    OrbitCount {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
    },
    /// Check the analytic Hessian against finite differences at random
    /// interior simplex points.
    HessianCheck {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 5)]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow_free::Result<ExitCode> {
    match cli.command {
        Command::Verify {
            degree,
            to,
            jobs,
            format,
            certificates,
            dump_blocks,
            no_scale,
        } => {
            let last = to.unwrap_or(degree);
            if last < degree {
                eprintln!("error: --to must be at least --degree");
                return Ok(ExitCode::from(1));
            }
            let mut all_convex = true;
            for d in degree..=last {
                if d >= 10 {
                    eprintln!("note: degree {d} — extended runtime expected");
                }
                let mut cfg = RunConfig::new(d);
                cfg.jobs = jobs;
                cfg.scaled = !no_scale;
                cfg.dump_blocks = dump_blocks;
                cfg.certificates_dir = certificates
                    .as_ref()
                    .map(|dir| if degree == last { dir.clone() } else { dir.join(format!("d{d}")) });
                let report = verify_degree(&cfg)?;
                all_convex &= report.verdict == OverallVerdict::Convex;
                print!("{}", emit_report(&report, to_report_format(format)));
            }
            Ok(if all_convex {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Enumerate { edges, format } => {
            let graphs = enumerate_multigraphs(edges);
            match format {
                OutputFormat::Json => {
                    let body = json!({
                        "edges": edges,
                        "count": graphs.len(),
                        "multigraphs": graphs.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    });
                    println!("{}", serde_json::to_string_pretty(&body)?);
                }
                _ => {
                    println!("{} multigraphs with {} edges", graphs.len(), edges);
                    for g in &graphs {
                        println!("{g}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Blocks {
            multigraph,
            format,
            no_scale,
        } => {
            let parsed = Multigraph::from_str(&multigraph)?;
            let g = parsed.canonical_form();
            if g != parsed {
                eprintln!("note: canonicalized input to {g}");
            }
            let cache = CoeffCache::new();
            let blocks = theorem_blocks_with(&g, &cache, !no_scale)?;
            let to_rows = |m: &fdconvex::hessian::RationalSymMatrix| -> Vec<Vec<String>> {
                (0..m.order())
                    .map(|i| {
                        (0..m.order())
                            .map(|j| format_rational(m.get(i, j)))
                            .collect()
                    })
                    .collect()
            };
            match format {
                OutputFormat::Json => {
                    let body = json!({
                        "edges": g.to_string(),
                        "k": g.k(),
                        "scalar": format_rational(&blocks.scalar),
                        "b1": to_rows(&blocks.b1),
                        "b2": to_rows(&blocks.b2),
                    });
                    println!("{}", serde_json::to_string_pretty(&body)?);
                }
                _ => {
                    println!("multigraph: {g}");
                    println!("k = {}", g.k());
                    println!("scalar = {}", format_rational(&blocks.scalar));
                    println!("B1 ({0}x{0}):", blocks.b1.order());
                    for row in to_rows(&blocks.b1) {
                        println!("  {}", row.join("  "));
                    }
                    println!("B2 ({0}x{0}):", blocks.b2.order());
                    for row in to_rows(&blocks.b2) {
                        println!("  {}", row.join("  "));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::OrbitCount { k, n } => {
            let formula = orbit_count_formula(k);
            let brute = orbit_count_bruteforce(k, n)?;
            println!("formula: {formula}");
            println!("brute force (k={k}, n={n}): {brute}");
            Ok(if formula == brute {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::HessianCheck {
            degree,
            n,
            samples,
            seed,
        } => {
            let cache = CoeffCache::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = n as usize * (n as usize - 1) / 2;
            let mut worst: f64 = 0.0;
            for s in 0..samples {
                let weights: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=1000)).collect();
                let x = SimplexPoint::from_weights(n, &weights)?;
                let dev = hessian_fd_check(n, degree, &x, 1e-4, &cache)?;
                println!("sample {s}: max deviation {dev:.3e}");
                worst = worst.max(dev);
            }
            println!("worst deviation: {worst:.3e}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Small local result alias so the binary has one error path.
mod anyhow_free {
    pub type Result<T> = std::result::Result<T, Box<dyn std::error::Error>>;
}

fn to_report_format(f: OutputFormat) -> ReportFormat {
    match f {
        OutputFormat::Text => ReportFormat::Text,
        OutputFormat::Json => ReportFormat::Json,
        OutputFormat::Csv => ReportFormat::Csv,
    }
}

//! Per-degree orchestration: enumerate multigraph classes, reduce each to
//! its constant blocks, certify them exactly, and aggregate into a report.

use std::path::PathBuf;
use std::time::Instant;

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::coefficients::CoeffCache;
use crate::error::Error;
use crate::multigraphs::{enumerate_multigraphs, Multigraph};
use crate::psdcert::{jacobi_eigen, ldlt_natural, ldlt_pivoted, Verdict};
use crate::rational::{format_rational, to_f64, Rational};
use crate::reduction::{theorem_blocks_with, ReductionBlocks};
use crate::Result;

/// How concurrent tasks share the coefficient memo table.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CacheMode {
    /// One table shared by all multigraph tasks (idempotent inserts).
    Shared,
    /// A private table per multigraph task.
    Private,
}

impl CacheMode {
    /// Reads `COEFF_CACHE_MODE` (`shared` | `private`), defaulting to shared.
    pub fn from_env() -> CacheMode {
        match std::env::var("COEFF_CACHE_MODE").as_deref() {
            Ok("private") => CacheMode::Private,
            _ => CacheMode::Shared,
        }
    }
}

/// Configuration of one verification run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub degree: u32,
    /// Worker threads for the multigraph fan-out; `None` = rayon default.
    pub jobs: Option<usize>,
    /// Multiply the matrix family by `gamma!` (the pipeline default).
    pub scaled: bool,
    /// Embed the exact block matrices in the report records.
    pub dump_blocks: bool,
    /// Write one certificate file per multigraph into this directory.
    pub certificates_dir: Option<PathBuf>,
    pub cache_mode: CacheMode,
}

impl RunConfig {
    pub fn new(degree: u32) -> Self {
        RunConfig {
            degree,
            jobs: None,
            scaled: true,
            dump_blocks: false,
            certificates_dir: None,
            cache_mode: CacheMode::from_env(),
        }
    }
}

/// Exact and floating-point results for one multigraph class.
#[derive(Clone, Debug)]
pub struct MultigraphRecord {
    pub edges: String,
    pub k: u32,
    pub scalar: Rational,
    pub scalar_nonneg: bool,
    pub b1_psd: bool,
    pub b2_psd: bool,
    pub b1_lambda_min: f64,
    pub b2_lambda_min: f64,
    /// Natural-order LDL^T diagonals (certificate reproduction).
    pub b1_pivots: Vec<Rational>,
    pub b2_pivots: Vec<Rational>,
    pub is_matching: bool,
    /// Present when the run dumps blocks.
    pub blocks: Option<ReductionBlocks>,
}

impl MultigraphRecord {
    /// All three exact conditions hold.
    pub fn certified(&self) -> bool {
        self.scalar_nonneg && self.b1_psd && self.b2_psd
    }

    pub fn lambda_min(&self) -> f64 {
        self.b1_lambda_min.min(self.b2_lambda_min)
    }

    pub fn min_pivot(&self) -> Option<Rational> {
        self.b1_pivots.iter().chain(&self.b2_pivots).min().cloned()
    }
}

/// Aggregate verdict of a degree run. `NotProven` never claims nonconvexity;
/// it only reports that the certificate does not close.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum OverallVerdict {
    #[serde(rename = "CONVEX")]
    Convex,
    #[serde(rename = "NOT_PROVEN")]
    NotProven,
}

/// Full report of one degree run.
#[derive(Clone, Debug)]
pub struct DegreeReport {
    pub degree: u32,
    pub count: usize,
    pub records: Vec<MultigraphRecord>,
    /// Minimum block eigenvalue over all multigraphs (scalar excluded).
    pub lambda_min: f64,
    /// Minimum including each scalar condition as a 1x1 block.
    pub lambda_min_with_scalar: f64,
    /// Minimum natural-order pivot over all block matrices.
    pub min_pivot: Option<Rational>,
    /// The same minimum with the scalars included.
    pub min_pivot_with_scalar: Option<Rational>,
    pub verdict: OverallVerdict,
    pub wall_ms: u128,
}

/// Observations about where the extremes land; reported, never asserted.
#[derive(Clone, Debug, Serialize)]
pub struct Observations {
    /// The global minimum eigenvalue is attained at the all-disjoint
    /// matching multigraph.
    pub min_at_matching: bool,
    /// Every multigraph attains its minimum in the large block.
    pub min_in_b1_everywhere: bool,
}

fn process_one(
    g: &Multigraph,
    cache: &CoeffCache,
    cfg: &RunConfig,
) -> Result<MultigraphRecord> {
    let blocks = theorem_blocks_with(g, cache, cfg.scaled)?;
    let c1 = ldlt_pivoted(&blocks.b1);
    let c2 = ldlt_pivoted(&blocks.b2);
    let e1 = jacobi_eigen(&blocks.b1)?;
    let e2 = jacobi_eigen(&blocks.b2)?;
    let n1 = ldlt_natural(&blocks.b1);
    let n2 = ldlt_natural(&blocks.b2);
    Ok(MultigraphRecord {
        edges: g.to_string(),
        k: g.k(),
        scalar: blocks.scalar.clone(),
        scalar_nonneg: !blocks.scalar.is_negative(),
        b1_psd: c1.verdict == Verdict::Psd,
        b2_psd: c2.verdict == Verdict::Psd,
        b1_lambda_min: e1.min_eigenvalue,
        b2_lambda_min: e2.min_eigenvalue,
        b1_pivots: n1.pivots,
        b2_pivots: n2.pivots,
        is_matching: g.is_matching(),
        blocks: if cfg.dump_blocks { Some(blocks) } else { None },
    })
}

/// Runs the full verification for one degree: every multigraph class with
/// `degree - 2` edges is reduced and certified. Fan-out is per multigraph;
/// aggregation follows the canonical enumeration order regardless of
/// completion order.
pub fn verify_degree(cfg: &RunConfig) -> Result<DegreeReport> {
    if cfg.degree < 3 {
        return Err(Error::DegreeTooSmall {
            got: cfg.degree,
            min: 3,
        });
    }
    let start = Instant::now();
    let graphs = enumerate_multigraphs(cfg.degree - 2);

    let run = |graphs: &[Multigraph]| -> Result<Vec<MultigraphRecord>> {
        match cfg.cache_mode {
            CacheMode::Shared => {
                let cache = CoeffCache::new();
                graphs
                    .par_iter()
                    .map(|g| process_one(g, &cache, cfg))
                    .collect()
            }
            CacheMode::Private => graphs
                .par_iter()
                .map(|g| process_one(g, &CoeffCache::new(), cfg))
                .collect(),
        }
    };

    let records = match cfg.jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| Error::Parse(format!("thread pool: {e}")))?;
            pool.install(|| run(&graphs))?
        }
        None => run(&graphs)?,
    };

    let lambda_min = records
        .iter()
        .map(MultigraphRecord::lambda_min)
        .fold(f64::INFINITY, f64::min);
    let lambda_min_with_scalar = records
        .iter()
        .map(|r| r.lambda_min().min(to_f64(&r.scalar)))
        .fold(f64::INFINITY, f64::min);
    let min_pivot = records.iter().filter_map(MultigraphRecord::min_pivot).min();
    let min_pivot_with_scalar = records
        .iter()
        .filter_map(|r| Some(r.min_pivot()?.min(r.scalar.clone())))
        .min();
    let verdict = if records.iter().all(MultigraphRecord::certified) {
        OverallVerdict::Convex
    } else {
        OverallVerdict::NotProven
    };

    let report = DegreeReport {
        degree: cfg.degree,
        count: records.len(),
        records,
        lambda_min,
        lambda_min_with_scalar,
        min_pivot,
        min_pivot_with_scalar,
        verdict,
        wall_ms: start.elapsed().as_millis(),
    };

    if let Some(dir) = &cfg.certificates_dir {
        write_certificates(&report, dir)?;
    }
    Ok(report)
}

/// Flags whether the experimental extremes hold for this report.
pub fn observe_extremes(r: &DegreeReport) -> Observations {
    let min_at_matching = r
        .records
        .iter()
        .filter(|rec| rec.is_matching)
        .any(|rec| rec.lambda_min() <= r.lambda_min + 1e-12);
    let min_in_b1_everywhere = r
        .records
        .iter()
        .all(|rec| rec.b1_lambda_min <= rec.b2_lambda_min);
    Observations {
        min_at_matching,
        min_in_b1_everywhere,
    }
}

#[derive(Serialize)]
struct RecordJson {
    edges: String,
    k: u32,
    scalar: String,
    b1_lambda_min: f64,
    b2_lambda_min: f64,
    b1_pivots: Vec<String>,
    b2_pivots: Vec<String>,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    b1: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b2: Option<Vec<Vec<String>>>,
}

#[derive(Serialize)]
struct ReportJson {
    degree: u32,
    count: usize,
    lambda_min: f64,
    verdict: OverallVerdict,
    records: Vec<RecordJson>,
    lambda_min_with_scalar: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_pivot: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_pivot_with_scalar: Option<String>,
    observations: Observations,
}

fn matrix_strings(m: &crate::hessian::RationalSymMatrix) -> Vec<Vec<String>> {
    (0..m.order())
        .map(|i| {
            (0..m.order())
                .map(|j| format_rational(m.get(i, j)))
                .collect()
        })
        .collect()
}

fn record_json(rec: &MultigraphRecord) -> RecordJson {
    RecordJson {
        edges: rec.edges.clone(),
        k: rec.k,
        scalar: format_rational(&rec.scalar),
        b1_lambda_min: rec.b1_lambda_min,
        b2_lambda_min: rec.b2_lambda_min,
        b1_pivots: rec.b1_pivots.iter().map(format_rational).collect(),
        b2_pivots: rec.b2_pivots.iter().map(format_rational).collect(),
        verdict: if rec.certified() { "PSD" } else { "NOT_PSD" },
        b1: rec.blocks.as_ref().map(|b| matrix_strings(&b.b1)),
        b2: rec.blocks.as_ref().map(|b| matrix_strings(&b.b2)),
    }
}

/// Report output format.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReportFormat {
    Text,
    Json,
    Csv,
}

/// Serializes a report. Byte-deterministic for a fixed input and version.
pub fn emit_report(r: &DegreeReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => {
            let mut out = String::new();
            out.push_str("d | multigraphs | lambda_min\n");
            out.push_str(&format!(
                "{} | {} | {:.8}\n",
                r.degree, r.count, r.lambda_min
            ));
            out.push_str(&format!("verdict: {}\n", verdict_str(r.verdict)));
            if let Some(p) = &r.min_pivot {
                out.push_str(&format!("min LDL^T pivot: {}\n", format_rational(p)));
            }
            for rec in &r.records {
                out.push_str(&format!(
                    "  {} | k={} | scalar={} | lambda_min={:.8} | {}\n",
                    rec.edges,
                    rec.k,
                    format_rational(&rec.scalar),
                    rec.lambda_min(),
                    if rec.certified() { "PSD" } else { "NOT_PSD" },
                ));
                if let Some(blocks) = &rec.blocks {
                    out.push_str(&format!(
                        "    B1 = {:?}\n    B2 = {:?}\n",
                        matrix_strings(&blocks.b1),
                        matrix_strings(&blocks.b2)
                    ));
                }
            }
            out
        }
        ReportFormat::Json => {
            let json = ReportJson {
                degree: r.degree,
                count: r.count,
                lambda_min: r.lambda_min,
                verdict: r.verdict,
                records: r.records.iter().map(record_json).collect(),
                lambda_min_with_scalar: r.lambda_min_with_scalar,
                min_pivot: r.min_pivot.as_ref().map(format_rational),
                min_pivot_with_scalar: r.min_pivot_with_scalar.as_ref().map(format_rational),
                observations: observe_extremes(r),
            };
            serde_json::to_string_pretty(&json).expect("report serializes")
        }
        ReportFormat::Csv => {
            let mut out = String::from("d,multigraphs,lambda_min,verdict\n");
            out.push_str(&format!(
                "{},{},{:.8},{}\n",
                r.degree,
                r.count,
                r.lambda_min,
                verdict_str(r.verdict)
            ));
            out
        }
    }
}

fn verdict_str(v: OverallVerdict) -> &'static str {
    match v {
        OverallVerdict::Convex => "CONVEX",
        OverallVerdict::NotProven => "NOT_PROVEN",
    }
}

/// One certificate file per multigraph: exact scalar, pivot lists, minimum
/// pivot, and the floating-point minimum eigenvalues.
fn write_certificates(r: &DegreeReport, dir: &PathBuf) -> Result<()> {
    #[derive(Serialize)]
    struct Certificate {
        edges: String,
        k: u32,
        scalar: String,
        b1_pivots: Vec<String>,
        b2_pivots: Vec<String>,
        min_pivot: Option<String>,
        b1_lambda_min: f64,
        b2_lambda_min: f64,
    }
    std::fs::create_dir_all(dir)?;
    for (idx, rec) in r.records.iter().enumerate() {
        let cert = Certificate {
            edges: rec.edges.clone(),
            k: rec.k,
            scalar: format_rational(&rec.scalar),
            b1_pivots: rec.b1_pivots.iter().map(format_rational).collect(),
            b2_pivots: rec.b2_pivots.iter().map(format_rational).collect(),
            min_pivot: rec.min_pivot().as_ref().map(format_rational),
            b1_lambda_min: rec.b1_lambda_min,
            b2_lambda_min: rec.b2_lambda_min,
        };
        let name = format!("d{}_{:04}.json", r.degree, idx);
        let body = serde_json::to_string_pretty(&cert).expect("certificate serializes");
        std::fs::write(dir.join(name), body)?;
    }
    Ok(())
}

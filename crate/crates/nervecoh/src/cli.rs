//! Command-line front end: spec loading, pipeline runs, reports.
//!
//! Exit codes: 0 on success or verification PASS, 2 on verification FAIL,
//! 1 on usage or validation errors (bad flags, malformed spec files,
//! resource-cap rejections).  Reports are written to standard output and are
//! byte-identical across identical invocations; timings and warnings go to
//! standard error.
//!
//! The per-level dimension cap defaults to
//! [`DEFAULT_RESOURCE_CAP`](crate::classifying::DEFAULT_RESOURCE_CAP), can be
//! overridden by the `NERVE_RESOURCE_CAP` environment variable, and the
//! `--resource-cap` flag wins over both.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::classifying::{
    averaging_hypothesis, bg_complex, bsemidirect_triple_complex, verify_equivalence,
    weinstein_equivariant_complex, EquivalenceReport, DEFAULT_RESOURCE_CAP,
};
use crate::group::{semidirect_product, Group, GroupAction, SemidirectProduct};
use crate::homalg::{smith_normal_form, BettiTable, GradedComplex, RingSpec, SparseMatrix};
use crate::identities::{run_identity_suite, IdentitySuite};
use crate::spec_io::{load_group_spec, LoadedGroup};
use crate::torus::{bt_double_complex, cartan_free_circle, weinstein_torus_complex};

#[derive(Parser)]
#[command(
    name = "nervecoh",
    version,
    about = "Exact cohomology of classifying spaces of finite semidirect products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Betti table of the bar complex of a finite group.
    BettiBg(ComplexArgs),
    /// Betti table of the totalized twisted bisimplicial model.
    BettiBsemidirect(ComplexArgs),
    /// Betti table of the invariant-cochain (equivariant) model.
    BettiEquivariant(ComplexArgs),
    /// Betti table of a torus de Rham model.
    BettiBtorus(TorusArgs),
    /// Run all pipelines for one group and compare them degree by degree.
    VerifyEquivalence(VerifyArgs),
    /// Run the randomized structural identity suite.
    VerifyIdentities(IdentityArgs),
    /// Smith normal form of an integer matrix dump.
    Snf(SnfArgs),
}

#[derive(Args)]
struct ComplexArgs {
    /// Path to a JSON group spec.
    #[arg(long)]
    group: PathBuf,
    /// Coefficient ring selector: z, q, or fp:<prime>.
    #[arg(long, default_value = "z")]
    coefficients: String,
    /// Highest cohomology degree to report.
    #[arg(long)]
    max_degree: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TorusArgs {
    /// Rank of the torus.
    #[arg(long)]
    rank: usize,
    /// Which model to compute.
    #[arg(long, value_enum)]
    model: TorusModel,
    /// Highest cohomology degree to report.
    #[arg(long)]
    max_degree: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Path to a JSON group spec.
    #[arg(long)]
    group: PathBuf,
    /// Coefficient ring selector: z, q, or fp:<prime>.
    #[arg(long, default_value = "z")]
    coefficients: String,
    /// Highest cohomology degree to compare.
    #[arg(long)]
    max_degree: usize,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Per-level dimension cap (overrides NERVE_RESOURCE_CAP).
    #[arg(long)]
    resource_cap: Option<usize>,
}

#[derive(Args)]
struct IdentityArgs {
    /// Path to a JSON group spec.
    #[arg(long)]
    group: PathBuf,
    /// Highest simplicial level to exercise (at least 2).
    #[arg(long, default_value_t = 4)]
    levels: usize,
    /// Check budget per identity family and level.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Seed for the sampling generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct SnfArgs {
    /// Path to a matrix dump: a `rows cols` header, then `r c v` triples.
    #[arg(long)]
    matrix: PathBuf,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct OutputArgs {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Per-level dimension cap (overrides NERVE_RESOURCE_CAP).
    #[arg(long)]
    resource_cap: Option<usize>,
    /// Directory receiving one `d<n>.txt` dump per differential.
    #[arg(long)]
    dump_matrices: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TorusModel {
    /// Total complex of the translation-invariant form model on the nerve.
    Bt,
    /// Stacked polynomial-coefficient model.
    Weinstein,
    /// Free circle action model (rank 1 only).
    CartanCircle,
}

/// Runs the CLI on the given argument list and returns the process exit
/// code.
pub fn run<I: IntoIterator<Item = String>>(argv: I) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let kind = err.kind();
            let _ = err.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                0
            } else {
                1
            };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            1
        }
    }
}

fn dispatch(command: Command) -> Result<i32, String> {
    match command {
        Command::BettiBg(args) => betti_group_command(&args, Model::Bar),
        Command::BettiBsemidirect(args) => betti_group_command(&args, Model::Twisted),
        Command::BettiEquivariant(args) => betti_group_command(&args, Model::Invariant),
        Command::BettiBtorus(args) => betti_torus_command(&args),
        Command::VerifyEquivalence(args) => verify_equivalence_command(&args),
        Command::VerifyIdentities(args) => verify_identities_command(&args),
        Command::Snf(args) => snf_command(&args),
    }
}

enum Model {
    Bar,
    Twisted,
    Invariant,
}

fn effective_cap(flag: Option<usize>) -> Result<usize, String> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var("NERVE_RESOURCE_CAP") {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| format!("invalid NERVE_RESOURCE_CAP value {text:?}")),
        Err(_) => Ok(DEFAULT_RESOURCE_CAP),
    }
}

/// The semidirect decomposition of a loaded spec; a plain group is treated
/// as the product with a trivial acting factor.
fn decomposition(loaded: &LoadedGroup) -> Result<SemidirectProduct, String> {
    match loaded.semidirect() {
        Some(sd) => Ok(sd.clone()),
        None => {
            let g = loaded.group().clone();
            let h = Group::trivial();
            let action = GroupAction::trivial(h.clone(), g.clone());
            semidirect_product(&g, &h, &action).map_err(|e| e.to_string())
        }
    }
}

fn describe_sd(sd: &SemidirectProduct) -> String {
    format!(
        "group of order {} = (order {}) x| (order {})",
        sd.product().order(),
        sd.g().order(),
        sd.h().order()
    )
}

struct Hypotheses {
    actor_order: usize,
    ring: RingSpec,
    holds: bool,
}

impl Hypotheses {
    fn new(ring: RingSpec, actor_order: usize) -> Hypotheses {
        Hypotheses {
            actor_order,
            ring,
            holds: averaging_hypothesis(ring, actor_order),
        }
    }

    fn note(&self) -> String {
        if self.holds {
            format!(
                "actor order {} is invertible over {}: comparison in-hypothesis",
                self.actor_order, self.ring
            )
        } else {
            format!(
                "actor order {} is not invertible over {}: comparison out-of-hypothesis",
                self.actor_order, self.ring
            )
        }
    }

    fn to_json(&self) -> serde_json::Value {
        json!({
            "actor_order": self.actor_order,
            "averaging_holds": self.holds,
            "note": self.note(),
        })
    }
}

fn betti_group_command(args: &ComplexArgs, model: Model) -> Result<i32, String> {
    let ring = RingSpec::parse_selector(&args.coefficients).map_err(|e| e.to_string())?;
    let cap = effective_cap(args.output.resource_cap)?;
    let loaded = load_group_spec(&args.group).map_err(|e| e.to_string())?;
    let (pipeline, group_desc, hypotheses, complex) = match model {
        Model::Bar => {
            let complex = bg_complex(loaded.group(), ring, args.max_degree, cap)
                .map_err(|e| e.to_string())?;
            ("bg-bar", loaded.describe(), None, complex)
        }
        Model::Twisted => {
            let sd = decomposition(&loaded)?;
            let complex = bsemidirect_triple_complex(&sd, ring, args.max_degree, cap)
                .map_err(|e| e.to_string())?;
            ("bsemidirect-total", describe_sd(&sd), None, complex)
        }
        Model::Invariant => {
            let sd = decomposition(&loaded)?;
            let hypotheses = Hypotheses::new(ring, sd.h().order());
            if !hypotheses.holds {
                eprintln!("warning: {}", hypotheses.note());
            }
            let complex = weinstein_equivariant_complex(&sd, ring, args.max_degree, cap)
                .map_err(|e| e.to_string())?;
            (
                "weinstein-invariants",
                describe_sd(&sd),
                Some(hypotheses),
                complex,
            )
        }
    };
    if let Some(dir) = &args.output.dump_matrices {
        dump_differentials(dir, &complex)?;
    }
    let table = complex
        .betti_table(args.max_degree)
        .map_err(|e| e.to_string())?;
    let report = ComplexReport {
        pipeline,
        subject: group_desc,
        ring,
        max_degree: args.max_degree,
        model: None,
        hypotheses,
        table: &table,
    };
    print!("{}", report.render(args.output.format));
    Ok(0)
}

fn betti_torus_command(args: &TorusArgs) -> Result<i32, String> {
    let cap = effective_cap(args.output.resource_cap)?;
    let (pipeline, complex) = match args.model {
        TorusModel::Bt => (
            "bt-total",
            bt_double_complex(args.rank, args.max_degree, cap).map_err(|e| e.to_string())?,
        ),
        TorusModel::Weinstein => (
            "weinstein-torus",
            weinstein_torus_complex(args.rank, args.max_degree, cap).map_err(|e| e.to_string())?,
        ),
        TorusModel::CartanCircle => {
            if args.rank != 1 {
                return Err(format!(
                    "the cartan-circle model is rank-1 only, got rank {}",
                    args.rank
                ));
            }
            (
                "cartan-free-circle",
                cartan_free_circle(args.max_degree).map_err(|e| e.to_string())?,
            )
        }
    };
    if let Some(dir) = &args.output.dump_matrices {
        dump_differentials(dir, &complex)?;
    }
    let table = complex
        .betti_table(args.max_degree)
        .map_err(|e| e.to_string())?;
    let model_name = match args.model {
        TorusModel::Bt => "bt",
        TorusModel::Weinstein => "weinstein",
        TorusModel::CartanCircle => "cartan-circle",
    };
    let report = ComplexReport {
        pipeline,
        subject: format!("torus of rank {}", args.rank),
        ring: RingSpec::Rationals,
        max_degree: args.max_degree,
        model: Some(model_name),
        hypotheses: None,
        table: &table,
    };
    print!("{}", report.render(args.output.format));
    Ok(0)
}

fn verify_equivalence_command(args: &VerifyArgs) -> Result<i32, String> {
    let ring = RingSpec::parse_selector(&args.coefficients).map_err(|e| e.to_string())?;
    let cap = effective_cap(args.resource_cap)?;
    let loaded = load_group_spec(&args.group).map_err(|e| e.to_string())?;
    let sd = decomposition(&loaded)?;
    let report = verify_equivalence(&sd, ring, args.max_degree, cap);
    for pipeline in &report.pipelines {
        eprintln!("{}: {:.2}s", pipeline.id, pipeline.seconds);
    }
    print!("{}", render_equivalence(&report, args.format));
    Ok(if report.verdict { 0 } else { 2 })
}

fn verify_identities_command(args: &IdentityArgs) -> Result<i32, String> {
    if args.levels < 2 {
        return Err("levels must be at least 2 so the composition identities have room".into());
    }
    if args.samples == 0 {
        return Err("samples must be at least 1".into());
    }
    let loaded = load_group_spec(&args.group).map_err(|e| e.to_string())?;
    let suite = run_identity_suite(
        loaded.group(),
        loaded.semidirect(),
        args.levels,
        args.samples,
        args.seed,
    );
    print!("{}", render_identities(args, &loaded, &suite));
    Ok(if suite.all_passed() { 0 } else { 2 })
}

fn snf_command(args: &SnfArgs) -> Result<i32, String> {
    let text = std::fs::read_to_string(&args.matrix)
        .map_err(|e| format!("cannot read {}: {e}", args.matrix.display()))?;
    let matrix =
        SparseMatrix::parse_dump(RingSpec::Integers, &text).map_err(|e| e.to_string())?;
    let snf = smith_normal_form(&matrix).map_err(|e| e.to_string())?;
    let factors: Vec<String> = snf
        .diagonal
        .iter()
        .filter(|d| !num_traits::Zero::is_zero(*d))
        .map(|d| d.to_string())
        .collect();
    let out = match args.format {
        Format::Json => {
            let value = json!({
                "command": "snf",
                "rows": matrix.rows(),
                "cols": matrix.cols(),
                "rank": factors.len(),
                "invariant_factors": factors,
            });
            to_pretty(&value)
        }
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "matrix: {} x {}", matrix.rows(), matrix.cols());
            let _ = writeln!(out, "rank: {}", factors.len());
            let _ = writeln!(
                out,
                "invariant factors: {}",
                if factors.is_empty() {
                    "none".to_string()
                } else {
                    factors.join(", ")
                }
            );
            out
        }
    };
    print!("{out}");
    Ok(0)
}

fn dump_differentials(dir: &Path, complex: &GradedComplex) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let mut written = 0usize;
    for n in 0..complex.dims().len() {
        if let Some(d) = complex.differential(n) {
            let path = dir.join(format!("d{n}.txt"));
            std::fs::write(&path, d.to_dump_string())
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            written += 1;
        }
    }
    eprintln!("wrote {written} differentials to {}", dir.display());
    Ok(())
}

struct ComplexReport<'a> {
    pipeline: &'static str,
    subject: String,
    ring: RingSpec,
    max_degree: usize,
    model: Option<&'static str>,
    hypotheses: Option<Hypotheses>,
    table: &'a BettiTable,
}

impl ComplexReport<'_> {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut value = json!({
                    "pipeline": self.pipeline,
                    "group": self.subject,
                    "ring": self.ring.to_string(),
                    "max_degree": self.max_degree,
                    "degrees": degrees_json(self.table),
                });
                if let Some(model) = self.model {
                    value["model"] = json!(model);
                }
                if let Some(hypotheses) = &self.hypotheses {
                    value["hypotheses"] = hypotheses.to_json();
                }
                to_pretty(&value)
            }
            Format::Table => {
                let mut out = String::new();
                let _ = writeln!(out, "pipeline: {}", self.pipeline);
                let _ = writeln!(out, "group: {}", self.subject);
                if let Some(model) = self.model {
                    let _ = writeln!(out, "model: {model}");
                }
                let _ = writeln!(out, "ring: {}", self.ring);
                let _ = writeln!(out, "max degree: {}", self.max_degree);
                if let Some(hypotheses) = &self.hypotheses {
                    let _ = writeln!(out, "hypotheses:");
                    let _ = writeln!(out, "  {}", hypotheses.note());
                }
                out.push_str(&degree_table(self.table));
                let _ = writeln!(out, "betti: {}", betti_csv(self.table));
                out
            }
        }
    }
}

fn degrees_json(table: &BettiTable) -> serde_json::Value {
    json!(table
        .entries
        .iter()
        .map(|e| {
            json!({
                "n": e.degree,
                "betti": e.betti,
                "torsion": e.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "group": e.group_name(table.ring),
            })
        })
        .collect::<Vec<_>>())
}

fn betti_csv(table: &BettiTable) -> String {
    table
        .betti_numbers()
        .iter()
        .map(|b| b.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn degree_table(table: &BettiTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, " n  betti  torsion     group");
    for e in &table.entries {
        let torsion = if e.torsion.is_empty() {
            "-".to_string()
        } else {
            e.torsion
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let _ = writeln!(
            out,
            "{:>2}  {:>5}  {:<10}  {}",
            e.degree,
            e.betti,
            torsion,
            e.group_name(table.ring)
        );
    }
    out
}

fn pipeline_summary(table: &BettiTable) -> String {
    let mut line = betti_csv(table);
    if table.entries.iter().any(|e| !e.torsion.is_empty()) {
        let names: Vec<String> = table
            .entries
            .iter()
            .map(|e| e.group_name(table.ring))
            .collect();
        let _ = write!(line, " ({})", names.join(", "));
    }
    line
}

fn render_equivalence(report: &EquivalenceReport, format: Format) -> String {
    let hypotheses = Hypotheses {
        actor_order: report.actor_order,
        ring: report.ring,
        holds: report.in_hypothesis,
    };
    match format {
        Format::Json => {
            let pipelines: Vec<serde_json::Value> = report
                .pipelines
                .iter()
                .map(|p| match &p.outcome {
                    Ok(table) => json!({
                        "pipeline": p.id,
                        "ring": report.ring.to_string(),
                        "degrees": degrees_json(table),
                    }),
                    Err(message) => json!({
                        "pipeline": p.id,
                        "ring": report.ring.to_string(),
                        "error": message,
                    }),
                })
                .collect();
            let value = json!({
                "command": "verify-equivalence",
                "group": report.group,
                "ring": report.ring.to_string(),
                "max_degree": report.max_degree,
                "hypotheses": hypotheses.to_json(),
                "pipelines": pipelines,
                "verdict": if report.verdict { "PASS" } else { "FAIL" },
            });
            to_pretty(&value)
        }
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "group: {}", report.group);
            let _ = writeln!(out, "ring: {}", report.ring);
            let _ = writeln!(out, "max degree: {}", report.max_degree);
            let _ = writeln!(out, "hypotheses:");
            let _ = writeln!(out, "  {}", hypotheses.note());
            let _ = writeln!(out, "pipelines:");
            for pipeline in &report.pipelines {
                match &pipeline.outcome {
                    Ok(table) => {
                        let _ = writeln!(
                            out,
                            "  {:<22} {}",
                            pipeline.id,
                            pipeline_summary(table)
                        );
                    }
                    Err(message) => {
                        let _ = writeln!(out, "  {:<22} failed: {}", pipeline.id, message);
                    }
                }
            }
            let _ = writeln!(
                out,
                "verdict: {}",
                if report.verdict { "PASS" } else { "FAIL" }
            );
            out
        }
    }
}

fn render_identities(args: &IdentityArgs, loaded: &LoadedGroup, suite: &IdentitySuite) -> String {
    match args.format {
        Format::Json => {
            let families: Vec<serde_json::Value> = suite
                .reports
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "checks": r.checks,
                        "failures": r.failures,
                        "witnesses": r.witnesses,
                    })
                })
                .collect();
            let value = json!({
                "command": "verify-identities",
                "group": loaded.describe(),
                "levels": args.levels,
                "samples": args.samples,
                "seed": args.seed,
                "families": families,
                "verdict": if suite.all_passed() { "PASS" } else { "FAIL" },
            });
            to_pretty(&value)
        }
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "group: {}", loaded.describe());
            let _ = writeln!(out, "levels: {}", args.levels);
            let _ = writeln!(out, "samples: {}", args.samples);
            let _ = writeln!(out, "seed: {}", args.seed);
            let _ = writeln!(out, "families:");
            for report in &suite.reports {
                let status = if report.passed() {
                    "pass".to_string()
                } else {
                    format!("FAIL ({} failures)", report.failures)
                };
                let _ = writeln!(
                    out,
                    "  {:<38} {:>8} checks  {status}",
                    report.name, report.checks
                );
                for witness in &report.witnesses {
                    let _ = writeln!(out, "    witness: {witness}");
                }
            }
            let _ = writeln!(
                out,
                "verdict: {}",
                if suite.all_passed() { "PASS" } else { "FAIL" }
            );
            out
        }
    }
}

fn to_pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report values serialize");
    text.push('\n');
    text
}

//! Command-line interface for the spherical s-distance set toolkit.
//!
//! Subcommands: enumerate, bounds, verify, certify, search, catalog.
//! All results are wrapped in a JSON envelope with the command, an echo of
//! the inputs, the arithmetic mode, the payload, and a timing field; the
//! envelope is byte-identical across repeated runs except for the timing.
//!
//! Exit codes: 0 success/certified, 1 usage error, 2 hypothesis failure,
//! 3 numerically inconclusive.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use sdist_core::bounds::{self, BoundReport};
use sdist_core::certificate::{full_certificate, Verdict};
use sdist_core::config::{self, GramMatrix};
use sdist_core::monomials::{count, enumerate, MonomialSet, SetKind};
use sdist_core::scalar::DEFAULT_FLOAT_TOL;
use sdist_core::search::{generate_family, search_s_distance, FamilySpec};

const EXIT_USAGE: u8 = 1;
const EXIT_HYPOTHESIS: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

/// Refuse to materialize monomial lists beyond this size.
const ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Parser)]
#[command(name = "sdist", version, about = "Spherical s-distance set toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Exact arithmetic (default).
    #[arg(long, global = true, conflicts_with = "float")]
    exact: bool,
    /// Convert inputs to float mode (tolerance 1e-12).
    #[arg(long, global = true)]
    float: bool,
    /// JSON output (default).
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Aligned text output instead of JSON.
    #[arg(long, global = true)]
    table: bool,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List a monomial exponent-vector set in graded-lex order.
    Enumerate {
        /// Set kind: N (all), E (even degree), M (even, first exponent <= 1).
        #[arg(long)]
        kind: String,
        /// Ambient dimension (number of variables).
        #[arg(long)]
        n: usize,
        /// Total degree bound.
        #[arg(long)]
        s: u32,
    },
    /// Evaluate the size bounds at (n, s), or the bounds applicable to a
    /// configuration's profile.
    Bounds {
        /// Dimension.
        #[arg(long, required_unless_present = "profile")]
        n: Option<u32>,
        /// Number of distinct inner products.
        #[arg(long, required_unless_present = "profile")]
        s: Option<u32>,
        /// Gram matrix (path or catalog:NAME) whose profile selects the bounds.
        #[arg(long)]
        profile: Option<String>,
    },
    /// Validate a Gram matrix and report its distance profile.
    Verify {
        /// Gram matrix: a JSON file path or catalog:NAME.
        #[arg(long)]
        gram: String,
    },
    /// Run the full linear-independence certificate on a configuration.
    Certify {
        /// Gram matrix: a JSON file path or catalog:NAME.
        #[arg(long)]
        gram: String,
    },
    /// Search a candidate family for large s-distance subsets.
    Search {
        /// Family spec: signed_basis(n), normalized_pm1(n),
        /// edge_midpoints_simplex(n), or file:PATH.
        #[arg(long)]
        family: String,
        /// Maximum number of distinct inner products in the target subset.
        #[arg(long)]
        s: u32,
        /// Node-expansion budget per allowed set.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Admit inner product -1 (antipodal pairs) into allowed sets.
        #[arg(long)]
        allow_antipodal: bool,
    },
    /// List the built-in Gram matrix catalog.
    Catalog,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders help/version on stdout, true errors on stderr.
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let started = Instant::now();
    let float_mode = cli.float;
    let mode = if float_mode { "float" } else { "exact" };
    match run(&cli.command, float_mode) {
        Ok(output) => {
            let rendered = if cli.table {
                output.table
            } else {
                let envelope = json!({
                    "command": output.name,
                    "input": output.input,
                    "mode": mode,
                    "result": output.result,
                    "timing_ms": started.elapsed().as_secs_f64() * 1e3,
                });
                serde_json::to_string_pretty(&envelope).expect("envelope serialization")
            };
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, rendered + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(EXIT_USAGE);
                    }
                }
                None => {
                    // Tolerate a closed pipe (e.g. piping into head).
                    use std::io::Write;
                    let _ = writeln!(std::io::stdout(), "{rendered}");
                }
            }
            ExitCode::from(output.code)
        }
        Err(failure) => {
            let diag = json!({ "error": failure.message, "exit_code": failure.code });
            eprintln!(
                "{}",
                serde_json::to_string(&diag).expect("diagnostic serialization")
            );
            ExitCode::from(failure.code)
        }
    }
}

struct CommandOutput {
    name: &'static str,
    input: Value,
    result: Value,
    code: u8,
    table: String,
}

fn run(command: &Command, float_mode: bool) -> Result<CommandOutput, Failure> {
    match command {
        Command::Enumerate { kind, n, s } => run_enumerate(kind, *n, *s),
        Command::Bounds { n, s, profile } => run_bounds(*n, *s, profile.as_deref(), float_mode),
        Command::Verify { gram } => run_verify(gram, float_mode),
        Command::Certify { gram } => run_certify(gram, float_mode),
        Command::Search {
            family,
            s,
            budget,
            allow_antipodal,
        } => run_search(family, *s, *budget, *allow_antipodal, float_mode),
        Command::Catalog => run_catalog(),
    }
}

fn load_gram(source: &str, float_mode: bool) -> Result<GramMatrix, Failure> {
    let g = if let Some(name) = source.strip_prefix("catalog:") {
        config::builtin(name).map_err(|e| Failure::usage(e.to_string()))?
    } else {
        let text = std::fs::read_to_string(source)
            .map_err(|e| Failure::usage(format!("cannot read {source}: {e}")))?;
        config::from_json(&text).map_err(|e| Failure::usage(e.to_string()))?
    };
    Ok(if float_mode {
        g.to_float_mode(DEFAULT_FLOAT_TOL)
    } else {
        g
    })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serialization")
}

fn run_enumerate(kind_str: &str, n: usize, s: u32) -> Result<CommandOutput, Failure> {
    let kind: SetKind = kind_str
        .parse()
        .map_err(|_| Failure::usage(format!("unknown set kind {kind_str:?}; use N, E, or M")))?;
    let set = MonomialSet::new(kind, n, s);
    let total = count(set).map_err(|e| Failure::usage(e.to_string()))?;
    if total > ENUMERATION_CAP.into() {
        return Err(Failure::usage(format!(
            "{set} has {total} members, above the enumeration cap {ENUMERATION_CAP}"
        )));
    }
    let members = enumerate(set).map_err(|e| Failure::usage(e.to_string()))?;
    let vectors: Vec<String> = members.iter().map(|v| v.to_string()).collect();
    let table = {
        let mut lines = vec![format!("{set}: {} members", vectors.len())];
        lines.extend(vectors.iter().cloned());
        lines.join("\n")
    };
    Ok(CommandOutput {
        name: "enumerate",
        input: json!({ "kind": set.kind.short_name(), "n": n, "s": s }),
        result: json!({ "count": vectors.len(), "vectors": vectors }),
        code: 0,
        table,
    })
}

fn bounds_table(reports: &[BoundReport]) -> String {
    let mut lines = vec![format!(
        "{:<14} {:>12}  {:<12} {}",
        "theorem", "value", "status", "hypotheses"
    )];
    for r in reports {
        let status = format!("{:?}", r.status).to_lowercase();
        lines.push(format!(
            "{:<14} {:>12}  {:<12} {}",
            r.theorem.name(),
            r.value,
            status,
            r.hypotheses_used.join("; ")
        ));
    }
    lines.join("\n")
}

fn run_bounds(
    n: Option<u32>,
    s: Option<u32>,
    profile_source: Option<&str>,
    float_mode: bool,
) -> Result<CommandOutput, Failure> {
    let (reports, input) = match profile_source {
        Some(source) => {
            let g = load_gram(source, float_mode)?;
            let prof = config::profile(&g).map_err(|e| Failure::usage(e.to_string()))?;
            let dim = n.unwrap_or(g.ambient_n() as u32);
            let reports = bounds::applicable_bounds(&prof, dim);
            let input = json!({
                "profile": source,
                "n": dim,
                "s": prof.s,
                "inner_products": to_value(&prof.inner_products),
            });
            (reports, input)
        }
        None => {
            let n = n.ok_or_else(|| Failure::usage("--n is required without --profile"))?;
            let s = s.ok_or_else(|| Failure::usage("--s is required without --profile"))?;
            if n < 1 || s < 1 {
                return Err(Failure::usage("need n >= 1 and s >= 1"));
            }
            (bounds::formula_bounds(n, s), json!({ "n": n, "s": s }))
        }
    };
    let table = bounds_table(&reports);
    Ok(CommandOutput {
        name: "bounds",
        input,
        result: to_value(&reports),
        code: 0,
        table,
    })
}

fn run_verify(gram: &str, float_mode: bool) -> Result<CommandOutput, Failure> {
    let g = load_gram(gram, float_mode)?;
    let validation = config::validate(&g).map_err(|e| Failure::usage(e.to_string()))?;
    let profile = match config::profile(&g) {
        Ok(p) => Some(p),
        Err(config::ConfigError::ProfileAmbiguous(a, b)) => {
            return Err(Failure {
                code: EXIT_INCONCLUSIVE,
                message: format!("profile ambiguous between {a} and {b}"),
            })
        }
        Err(e) => return Err(Failure::usage(e.to_string())),
    };
    let code = if validation.valid { 0 } else { EXIT_HYPOTHESIS };
    let mut lines = vec![
        format!("r:            {}", validation.r),
        format!("ambient n:    {}", validation.ambient_n),
        format!("unit diag:    {}", validation.unit_diagonal),
        format!("psd:          {}", validation.psd),
        format!("rank:         {}", validation.rank),
        format!("valid:        {}", validation.valid),
    ];
    if let Some(w) = &validation.witness {
        lines.push(format!("witness:      {w}"));
    }
    if let Some(p) = &profile {
        lines.push(format!(
            "inner prods:  {}",
            p.inner_products
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
        lines.push(format!("s:            {}", p.s));
        lines.push(format!(
            "antipodal:    {}",
            match &p.antipodal_type {
                Some(a) => a
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", "),
                None => "none".to_string(),
            }
        ));
    }
    Ok(CommandOutput {
        name: "verify",
        input: json!({ "gram": gram }),
        result: json!({ "validation": to_value(&validation), "profile": to_value(&profile) }),
        code,
        table: lines.join("\n"),
    })
}

fn run_certify(gram: &str, float_mode: bool) -> Result<CommandOutput, Failure> {
    let g = load_gram(gram, float_mode)?;
    let report = full_certificate(&g);
    let code = match report.verdict {
        Verdict::Certified => 0,
        Verdict::HypothesisFailed => EXIT_HYPOTHESIS,
        Verdict::NumericInconclusive => EXIT_INCONCLUSIVE,
    };
    let mut lines = vec![
        format!("verdict:      {:?}", report.verdict),
        format!("r:            {}", report.r),
        format!("n, s, t:      {}, {}, {}", report.n, report.s, report.t),
        format!(
            "a list:       {}",
            report
                .a_list
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
        format!(
            "eval matrix:  ok={}, det={}",
            report.eval_matrix_ok,
            report
                .eval_matrix_det
                .as_ref()
                .map_or("-".to_string(), |d| d.to_string())
        ),
        format!("support ok:   {}", report.support_ok),
        format!("reduction ok: {}", report.reduction_ok),
        format!(
            "rank:         {}",
            report.rank.map_or("-".to_string(), |r| r.to_string())
        ),
        format!("bound:        {}", report.bound),
    ];
    if let Some(w) = &report.failure_witness {
        lines.push(format!("witness:      {w}"));
    }
    Ok(CommandOutput {
        name: "certify",
        input: json!({ "gram": gram }),
        result: to_value(&report),
        code,
        table: lines.join("\n"),
    })
}

fn run_search(
    family_str: &str,
    s: u32,
    budget: u64,
    allow_antipodal: bool,
    float_mode: bool,
) -> Result<CommandOutput, Failure> {
    let spec: FamilySpec = family_str
        .parse()
        .map_err(|e: sdist_core::search::SearchError| Failure::usage(e.to_string()))?;
    let mut family = generate_family(&spec).map_err(|e| Failure::usage(e.to_string()))?;
    if float_mode {
        family.gram = family.gram.to_float_mode(DEFAULT_FLOAT_TOL);
        family.coordinates = None;
    }
    let outcome = search_s_distance(&family, s, budget, allow_antipodal)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let table = {
        let mut lines = vec![
            format!("family:       {}", outcome.family),
            format!("s:            {}", outcome.s),
            format!("best size:    {}", outcome.size),
            format!("witness:      {:?}", outcome.witness),
            format!(
                "allowed:      {}",
                outcome
                    .allowed
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            format!("optimal:      {}", outcome.optimal),
            format!("effective n:  {}", outcome.effective_n),
            String::new(),
        ];
        lines.push(bounds_table(&outcome.bounds));
        lines.join("\n")
    };
    Ok(CommandOutput {
        name: "search",
        input: json!({
            "family": family_str,
            "s": s,
            "budget": budget,
            "allow_antipodal": allow_antipodal,
        }),
        result: to_value(&outcome),
        code: 0,
        table,
    })
}

fn run_catalog() -> Result<CommandOutput, Failure> {
    let demos = [
        "simplex(2)",
        "simplex(3)",
        "cross_polytope(2)",
        "cross_polytope(3)",
        "orthonormal(3)",
        "hexagon_3lines",
        "icosahedron_6lines",
    ];
    let mut entries = Vec::new();
    let mut lines = vec![format!(
        "{:<22} {:>3} {:>3} {:>3}  {}",
        "name", "r", "n", "s", "inner products"
    )];
    for name in demos {
        let g = config::builtin(name).map_err(|e| Failure::usage(e.to_string()))?;
        let prof = config::profile(&g).map_err(|e| Failure::usage(e.to_string()))?;
        let products: Vec<String> = prof.inner_products.iter().map(|v| v.to_string()).collect();
        lines.push(format!(
            "{:<22} {:>3} {:>3} {:>3}  {}",
            name,
            g.size(),
            g.ambient_n(),
            prof.s,
            products.join(", ")
        ));
        entries.push(json!({
            "name": name,
            "r": g.size(),
            "n": g.ambient_n(),
            "s": prof.s,
            "inner_products": products,
            "antipodal_type": prof.antipodal_type.map(|a| {
                a.iter().map(|v| v.to_string()).collect::<Vec<_>>()
            }),
        }));
    }
    lines.push(String::new());
    lines.push(format!("templates: {}", config::catalog_names().join(", ")));
    Ok(CommandOutput {
        name: "catalog",
        input: json!({}),
        result: json!({
            "templates": config::catalog_names(),
            "entries": entries,
        }),
        code: 0,
        table: lines.join("\n"),
    })
}

//! `cycleforge`: validation, realization, small covers and sphere-map
//! certificates from JSON inputs.
//!
//! Exit codes: 0 success, 1 semantic failure, 2 budget exhausted, 3 I/O,
//! parse or usage error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use cycleforge::io::{
    read_json, CharacteristicFile, ComplexFile, IoError, LoadedComplex, MapFile, PairingsFile, Placement,
    PlacementFile, PosetFile,
};
use cycleforge::permutahedron::{constants, RadialChart};
use cycleforge::realization::{
    build_pairings, enumerate_covering, validate_pairings, verify_certificate, ColoredCycleInput, PairingPolicy,
};
use cycleforge::simplicial::{diagnose, map_degree};
use cycleforge::small_cover::{
    flag_square_predicates, induced_domination, real_moment_angle, small_cover, validate_characteristic, SimpleCell,
};
use cycleforge::sphere_maps::{dominate_via_permutahedron, fine_certificate_with_margin, FineData};
use serde::Serialize;
use serde_json::{json, Value};

const EXIT_FAIL: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "cycleforge", version, about = "Small covers, cycle realization and sphere-map certificates")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Exact rational arithmetic where available.
    #[arg(long, global = true, conflicts_with = "float")]
    exact: bool,
    /// Floating-point arithmetic (default).
    #[arg(long, global = true)]
    float: bool,
    /// Float-mode margin, in (0, 1e-3].
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// JSON report (default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Plain-text report.
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a complex, poset, characteristic function or map.
    Check {
        #[arg(long)]
        input: PathBuf,
        /// Also report flagness and empty 4-circuits.
        #[arg(long)]
        flag_square: bool,
        /// Characteristic function to validate against the complex.
        #[arg(long)]
        lambda: Option<PathBuf>,
    },
    /// Realize a colored cycle by a cover of the permutahedral manifold.
    Realize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
        /// Pairing family file; otherwise canonical pairings.
        #[arg(long, conflicts_with = "random_pairings")]
        pairings: Option<PathBuf>,
        /// Random pairings from the seed instead of canonical ones.
        #[arg(long)]
        random_pairings: bool,
        /// Barycentrically subdivide when no regular coloring is supplied.
        #[arg(long)]
        auto_subdivide: bool,
    },
    /// Permutahedron constants for dimension n.
    Constants {
        #[arg(long)]
        n: usize,
    },
    /// Real moment-angle complex or small cover over a simple cell.
    Covers {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, conflicts_with = "real_moment_angle")]
        lambda: Option<PathBuf>,
        #[arg(long)]
        real_moment_angle: bool,
    },
    /// Certify an ε-fine spherical placement.
    CertifyFine {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        eps: f64,
    },
    /// Domination degree from a map file, or from a placement via the permutahedron.
    Dominate {
        #[arg(long)]
        input: PathBuf,
        /// Expected sphere dimension plus one, for placements.
        #[arg(long)]
        n: Option<usize>,
        /// Fineness claimed for a placement; defaults to ε_n.
        #[arg(long)]
        eps: Option<f64>,
    },
}

#[derive(Serialize)]
struct Report {
    command: String,
    status: &'static str,
    payload: Value,
    timing_ms: f64,
    version: &'static str,
}

struct Outcome {
    status: &'static str,
    code: u8,
    payload: Value,
}

impl Outcome {
    fn verdict(pass: bool, payload: Value) -> Self {
        if pass {
            Outcome { status: "pass", code: 0, payload }
        } else {
            Outcome { status: "fail", code: EXIT_FAIL, payload }
        }
    }
}

#[derive(Debug)]
enum CliError {
    /// Unreadable or malformed input, or bad usage.
    Input(String),
    /// Input parsed but the computation rejected it.
    Semantic(String),
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Read { .. }
            | IoError::Json(_)
            | IoError::Kind { .. }
            | IoError::Number(_)
            | IoError::Invalid(_) => CliError::Input(e.to_string()),
            IoError::Simplicial(_) | IoError::Coxeter(_) => CliError::Semantic(e.to_string()),
        }
    }
}

fn semantic<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Semantic(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INPUT),
            };
        }
    };
    if let Some(threads) = std::env::var("CYCLEFORGE_THREADS").ok().and_then(|t| t.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global();
    }
    if !(cli.global.tolerance > 0.0 && cli.global.tolerance <= 1e-3) {
        eprintln!("error: --tolerance must lie in (0, 1e-3]");
        return ExitCode::from(EXIT_INPUT);
    }
    let name = command_name(&cli.command);
    let start = Instant::now();
    let outcome = run(&cli).unwrap_or_else(|e| match e {
        CliError::Input(msg) => Outcome { status: "fail", code: EXIT_INPUT, payload: json!({ "error": msg }) },
        CliError::Semantic(msg) => Outcome { status: "fail", code: EXIT_FAIL, payload: json!({ "error": msg }) },
    });
    let report = Report {
        command: name.to_string(),
        status: outcome.status,
        payload: outcome.payload,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
        version: env!("CARGO_PKG_VERSION"),
    };
    let rendered = if cli.global.text {
        render_text(&report)
    } else {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    };
    let _ = std::io::stdout().lock().write_all(rendered.as_bytes());
    ExitCode::from(outcome.code)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Realize { .. } => "realize",
        Command::Constants { .. } => "constants",
        Command::Covers { .. } => "covers",
        Command::CertifyFine { .. } => "certify-fine",
        Command::Dominate { .. } => "dominate",
    }
}

fn render_text(r: &Report) -> String {
    let mut out = format!("{} {} ({:.1} ms, version {})\n", r.command, r.status, r.timing_ms, r.version);
    match &r.payload {
        Value::Object(map) => {
            for (k, v) in map {
                out += &format!("  {k}: {v}\n");
            }
        }
        other => out += &format!("  {other}\n"),
    }
    out
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Check { input, flag_square, lambda } => cmd_check(input, *flag_square, lambda.as_deref()),
        Command::Realize { input, budget, pairings, random_pairings, auto_subdivide } => {
            let policy = if *random_pairings { PairingPolicy::Seeded(g.seed) } else { PairingPolicy::Canonical };
            cmd_realize(input, *budget, pairings.as_deref(), policy, *auto_subdivide)
        }
        Command::Constants { n } => cmd_constants(*n),
        Command::Covers { input, lambda, real_moment_angle } => {
            cmd_covers(input, lambda.as_deref(), *real_moment_angle)
        }
        Command::CertifyFine { input, eps } => cmd_certify_fine(input, *eps, g),
        Command::Dominate { input, n, eps } => cmd_dominate(input, *n, *eps, g),
    }
}

fn load_complex(path: &Path) -> Result<LoadedComplex, CliError> {
    let f: ComplexFile = read_json(path)?;
    Ok(f.load()?)
}

fn cmd_check(input: &Path, flag_square: bool, lambda: Option<&Path>) -> Result<Outcome, CliError> {
    let raw: Value = read_json(input)?;
    let kind = raw.get("kind").and_then(Value::as_str).unwrap_or("").to_string();
    let parse_err = |e: serde_json::Error| CliError::Input(e.to_string());
    match kind.as_str() {
        "complex" => {
            let loaded = serde_json::from_value::<ComplexFile>(raw).map_err(parse_err)?.load()?;
            let report = diagnose(&loaded.complex, true);
            let mut pass = report.is_clean();
            let mut payload = json!({
                "kind": "complex",
                "dim": loaded.complex.dim(),
                "f_vector": loaded.complex.f_vector(),
                "euler_characteristic": loaded.complex.euler_characteristic(),
                "pseudo_manifold": report.is_clean(),
                "violations": report.violations.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>(),
            });
            if loaded.orientation.is_some() {
                let ok = loaded.pseudo_manifold().is_ok();
                payload["supplied_orientation_valid"] = json!(ok);
                pass &= ok;
            }
            if let Some(col) = &loaded.coloring {
                payload["coloring_regular"] = json!(col.is_regular(&loaded.complex));
            }
            if flag_square {
                payload["flag_square"] =
                    serde_json::to_value(flag_square_predicates(&loaded.complex)).expect("serializable");
            }
            if let Some(path) = lambda {
                let lam: CharacteristicFile = read_json(path)?;
                let lam = lam.load()?;
                let result = validate_characteristic(&SimpleCell::new(loaded.complex.clone()), &lam);
                payload["characteristic_valid"] = json!(result.is_ok());
                if let Err(e) = result {
                    payload["characteristic_error"] = json!(e.to_string());
                    pass = false;
                }
            }
            Ok(Outcome::verdict(pass, payload))
        }
        "poset" => {
            let p = serde_json::from_value::<PosetFile>(raw).map_err(parse_err)?;
            match p.load() {
                Ok(p) => Ok(Outcome::verdict(
                    true,
                    json!({"kind": "poset", "elements": p.size(), "relations": p.relations().len()}),
                )),
                Err(e) => Ok(Outcome::verdict(false, json!({"kind": "poset", "error": e.to_string()}))),
            }
        }
        "map" => {
            let m = serde_json::from_value::<MapFile>(raw).map_err(parse_err)?.load()?;
            let degree = map_degree(&m.map, &m.source, &m.target).map_err(semantic)?;
            Ok(Outcome::verdict(true, json!({"kind": "map", "degree": degree})))
        }
        "characteristic" => {
            let c = serde_json::from_value::<CharacteristicFile>(raw).map_err(parse_err)?.load()?;
            Ok(Outcome::verdict(true, json!({"kind": "characteristic", "rank": c.rank, "facets": c.values.len()})))
        }
        other => Err(CliError::Input(format!("unknown kind \"{other}\""))),
    }
}

fn cmd_realize(
    input: &Path,
    budget: usize,
    pairings: Option<&Path>,
    policy: PairingPolicy,
    auto_subdivide: bool,
) -> Result<Outcome, CliError> {
    if budget == 0 {
        return Err(CliError::Input("--budget must be at least 1".into()));
    }
    let loaded = load_complex(input)?;
    let z = loaded.pseudo_manifold().map_err(semantic)?;
    z.require_strongly_connected().map_err(semantic)?;
    let colored = ColoredCycleInput::prepare(z, loaded.coloring.clone(), auto_subdivide).map_err(semantic)?;
    let fam = match pairings {
        Some(p) => {
            let f: PairingsFile = read_json(p)?;
            let fam = f.load(colored.n())?;
            validate_pairings(&colored, &fam).map_err(semantic)?;
            fam
        }
        None => build_pairings(&colored, policy).map_err(semantic)?,
    };
    let atlas = enumerate_covering(&colored, &fam, budget);
    let cert = verify_certificate(&atlas, &colored);
    let payload = json!({
        "cells": cert.cells,
        "k": cert.k,
        "complete": cert.complete,
        "checks": cert.checks,
        "simplices": cert.simplices,
        "subdivided": colored.subdivided,
        "projection_fiber": cert.projection_fiber,
        "fiber_counts": cert.fiber_counts,
        "witnesses": cert.witnesses,
    });
    Ok(if !cert.witnesses.is_empty() {
        Outcome { status: "fail", code: EXIT_FAIL, payload }
    } else if !cert.complete {
        Outcome { status: "partial", code: EXIT_BUDGET, payload }
    } else {
        Outcome::verdict(cert.passed(), payload)
    })
}

fn cmd_constants(n: usize) -> Result<Outcome, CliError> {
    if n == 0 {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    let c = constants(n).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(Outcome::verdict(
        true,
        json!({
            "n": n,
            "N": c.big_n.to_string(),
            "eps": c.eps,
            "rho": c.rho,
            "circumradius": c.circumradius,
            "inradius": c.facet_distance,
            "identity_residual": c.identity_residual,
            "cos_eps": [c.cos_eps.0.to_string(), c.cos_eps.1.to_string()],
            "eps_enclosure": [c.eps_enclosure.lo, c.eps_enclosure.hi],
        }),
    ))
}

fn cmd_covers(input: &Path, lambda: Option<&Path>, rma: bool) -> Result<Outcome, CliError> {
    let loaded = load_complex(input)?;
    let cell = SimpleCell::new(loaded.complex);
    let q = match (lambda, rma) {
        (Some(path), _) => {
            let lam: CharacteristicFile = read_json(path)?;
            small_cover(&cell, &lam.load()?).map_err(semantic)?
        }
        (None, true) => real_moment_angle(&cell).map_err(semantic)?,
        (None, false) => return Err(CliError::Input("pass --lambda FILE or --real-moment-angle".into())),
    };
    let summary = q.summary();
    let pass = summary.local_ok;
    Ok(Outcome::verdict(pass, serde_json::to_value(summary).expect("serializable")))
}

fn load_fine(input: &Path, eps: f64, g: &Global) -> Result<FineData, CliError> {
    let file: PlacementFile = read_json(input)?;
    let complex = file.complex.clone().load()?.pseudo_manifold().map_err(semantic)?;
    let exact = (file.exact || g.exact) && !g.float;
    let mut as_exact = file.clone();
    as_exact.exact = exact;
    match as_exact.vectors()? {
        Placement::Exact(v) => FineData::exact(complex, v, eps).map_err(semantic),
        Placement::Float(v) => FineData::new(complex, v, eps).map_err(semantic),
    }
}

fn cmd_certify_fine(input: &Path, eps: f64, g: &Global) -> Result<Outcome, CliError> {
    let data = load_fine(input, eps, g)?;
    let report = fine_certificate_with_margin(&data, g.tolerance).map_err(semantic)?;
    let pass = report.passed();
    Ok(Outcome::verdict(pass, serde_json::to_value(report).expect("serializable")))
}

fn cmd_dominate(input: &Path, n: Option<usize>, eps: Option<f64>, g: &Global) -> Result<Outcome, CliError> {
    let raw: Value = read_json(input)?;
    if raw.get("kind").and_then(Value::as_str) == Some("map") {
        let m = serde_json::from_value::<MapFile>(raw).map_err(|e| CliError::Input(e.to_string()))?.load()?;
        let d = induced_domination(&m.map, &m.source, &m.target).map_err(semantic)?;
        let pass = d.degree != 0 && d.degree == d.cell_fiber_degree;
        return Ok(Outcome::verdict(pass, serde_json::to_value(d).expect("serializable")));
    }
    let file: PlacementFile = serde_json::from_value(raw).map_err(|e| CliError::Input(e.to_string()))?;
    let dim = file.complex.dim + 1;
    if let Some(n) = n {
        if n != dim {
            return Err(CliError::Input(format!("--n {n} but the placement complex has dimension {}", dim - 1)));
        }
    }
    let eps = match eps {
        Some(e) => e,
        None => RadialChart::new(dim).map_err(|e| CliError::Input(e.to_string()))?.eps,
    };
    let data = load_fine(input, eps, g)?;
    let p = dominate_via_permutahedron(&data).map_err(semantic)?;
    let pass = p.domination.degree != 0;
    Ok(Outcome::verdict(
        pass,
        json!({
            "phi_degree": p.phi.degree,
            "fine_degree": p.phi.fine_degree,
            "regions": p.phi.regions.iter().map(|w| w.colors()).collect::<Vec<_>>(),
            "homotopy_bound": p.phi.homotopy_bound,
            "domination": p.domination,
        }),
    ))
}

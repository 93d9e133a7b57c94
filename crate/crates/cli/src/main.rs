//! Command-line front end: moralization, chordality certificates, hole
//! enumeration, cycle-orientation classification, forbidden-pattern
//! scans, hole-map reports, theorem sweeps, and orientation censuses.
//!
//! Exit codes: 0 when the run succeeds and the checked property holds,
//! 1 when a property fails or a counterexample is found (a certificate
//! is emitted), 2 on usage or input errors. Output on stdout is
//! byte-identical across runs for identical inputs and seeds; timing
//! goes to stderr.

use clap::{Args, Parser, Subcommand};
use phylograph::*;
use phylograph_cli::doc::{phylogeny_dot, DigraphDocument, GraphDocument};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "phylograph",
    version,
    about = "Competition and phylogeny graphs of degree-bounded acyclic digraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the underlying, competition and phylogeny graphs of a
    /// digraph, with cared edges annotated.
    Moralize {
        /// Digraph document (JSON).
        input: PathBuf,
        /// Emit DOT instead of JSON; cared edges are dashed.
        #[arg(long)]
        dot: bool,
    },
    /// Decide chordality; prints an elimination ordering or a hole.
    Chordal(GraphChoice),
    /// Enumerate every hole of the chosen graph.
    Holes(GraphChoice),
    /// Classify the acyclic orientations of the k-cycle.
    #[command(name = "classify-cycle")]
    ClassifyCycle {
        #[arg(long)]
        k: usize,
        /// Extra vertices the witness search may add.
        #[arg(long, default_value_t = DEFAULT_WITNESS_EXTRA_VERTICES)]
        extra: u32,
    },
    /// Scan a digraph for forbidden induced cycle orientations.
    Scan {
        /// Digraph document (JSON).
        input: PathBuf,
    },
    /// Map holes of the phylogeny graph to holes of the underlying
    /// graph and verify the counting statements.
    Phi {
        /// Digraph document (JSON).
        input: PathBuf,
    },
    /// Sweep (i,j) digraphs and run the theorem checks.
    Verify(VerifyArgs),
    /// Count the acyclic orientations of the k-cycle up to isomorphism.
    Census {
        #[arg(long)]
        k: usize,
    },
}

#[derive(Args)]
struct GraphChoice {
    /// Digraph document (JSON); the graph is chosen with --which.
    input: Option<PathBuf>,
    /// Undirected graph document (JSON) used directly.
    #[arg(long, conflicts_with = "input")]
    graph: Option<PathBuf>,
    /// Which graph of the digraph to analyse: u, c or p.
    #[arg(long, default_value = "p")]
    which: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Vertex count.
    #[arg(long)]
    n: usize,
    /// Sweep every digraph (arcs forward along a fixed order).
    #[arg(long)]
    exhaustive: bool,
    /// Sweep seeded random digraphs instead.
    #[arg(long, conflicts_with = "exhaustive")]
    random: bool,
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated checks (k5, long_hole, chordal_suff,
    /// care_bounds, hole_corr) or "all".
    #[arg(long, default_value = "all")]
    checks: String,
    /// Worker threads; defaults to PHYLOGRAPH_JOBS or all cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Degree bounds as "i,j".
    #[arg(long, default_value = "2,2")]
    bounds: String,
    /// Collapse isomorphic digraphs before checking.
    #[arg(long)]
    dedup: bool,
    /// Write failing digraphs as JSON lines for replay.
    #[arg(long)]
    replay: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Moralize { input, dot } => moralize(&input, dot),
        Command::Chordal(choice) => chordal_cmd(&choice),
        Command::Holes(choice) => holes_cmd(&choice),
        Command::ClassifyCycle { k, extra } => classify_cmd(k, extra),
        Command::Scan { input } => scan_cmd(&input),
        Command::Phi { input } => phi_cmd(&input),
        Command::Verify(args) => verify_cmd(&args),
        Command::Census { k } => census_cmd(k),
    }
}

fn read_digraph(path: &PathBuf) -> Result<(Digraph, Option<Vec<String>>), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc: DigraphDocument =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let d = doc
        .to_digraph()
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((d, doc.labels))
}

fn read_graph(path: &PathBuf) -> Result<SimpleGraph, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc: GraphDocument =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    doc.to_graph()
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

#[derive(Serialize)]
struct CaredEdgeDoc {
    edge: (u32, u32),
    carers: Vec<u32>,
}

#[derive(Serialize)]
struct MoralizeReport {
    n: usize,
    underlying: Vec<(u32, u32)>,
    competition: Vec<(u32, u32)>,
    phylogeny: Vec<(u32, u32)>,
    cared_edges: Vec<CaredEdgeDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

fn moralize(input: &PathBuf, dot: bool) -> Result<u8, String> {
    let (d, labels) = read_digraph(input)?;
    let u = d.underlying_graph();
    let c = competition_graph(&d).map_err(|e| e.to_string())?;
    let p = phylogeny_graph(&d).map_err(|e| e.to_string())?;
    let cared = cared_edges(&d).map_err(|e| e.to_string())?;
    if dot {
        let cared_pairs: Vec<((u32, u32), Vec<u32>)> = cared
            .iter()
            .map(|e| (e.endpoints, e.carers.clone()))
            .collect();
        print!(
            "{}",
            phylogeny_dot(
                "P",
                d.vertex_count(),
                labels.as_deref(),
                u.edges(),
                &cared_pairs
            )
        );
        return Ok(0);
    }
    print_json(&MoralizeReport {
        n: d.vertex_count(),
        underlying: u.edges().to_vec(),
        competition: c.edges().to_vec(),
        phylogeny: p.edges().to_vec(),
        cared_edges: cared
            .into_iter()
            .map(|e| CaredEdgeDoc {
                edge: e.endpoints,
                carers: e.carers,
            })
            .collect(),
        labels,
    });
    Ok(0)
}

fn choose_graph(choice: &GraphChoice) -> Result<SimpleGraph, String> {
    if let Some(path) = &choice.graph {
        return read_graph(path);
    }
    let Some(path) = &choice.input else {
        return Err("provide a digraph file or --graph".into());
    };
    let (d, _) = read_digraph(path)?;
    match choice.which.as_str() {
        "u" => Ok(d.underlying_graph()),
        "c" => competition_graph(&d).map_err(|e| e.to_string()),
        "p" => phylogeny_graph(&d).map_err(|e| e.to_string()),
        other => Err(format!("unknown graph selector {other:?}; use u, c or p")),
    }
}

#[derive(Serialize)]
struct ChordalReport {
    chordal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    elimination_ordering: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hole: Option<Vec<u32>>,
}

fn chordal_cmd(choice: &GraphChoice) -> Result<u8, String> {
    let g = choose_graph(choice)?;
    match is_chordal(&g) {
        ChordalityCertificate::Elimination(order) => {
            print_json(&ChordalReport {
                chordal: true,
                elimination_ordering: Some(order),
                hole: None,
            });
            Ok(0)
        }
        ChordalityCertificate::Hole(hole) => {
            print_json(&ChordalReport {
                chordal: false,
                elimination_ordering: None,
                hole: Some(hole.vertices().to_vec()),
            });
            Ok(1)
        }
    }
}

#[derive(Serialize)]
struct HolesReport {
    count: usize,
    holes: Vec<Vec<u32>>,
}

fn holes_cmd(choice: &GraphChoice) -> Result<u8, String> {
    let g = choose_graph(choice)?;
    let holes = enumerate_holes(&g).map_err(|e| e.to_string())?;
    print_json(&HolesReport {
        count: holes.len(),
        holes: holes.iter().map(|h| h.vertices().to_vec()).collect(),
    });
    Ok(0)
}

#[derive(Serialize)]
struct ClassifiedClass {
    arcs: Vec<(u32, u32)>,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<DigraphDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    searched_up_to: Option<u32>,
}

#[derive(Serialize)]
struct ClassifyReport {
    k: usize,
    extra_vertices: u32,
    classes: Vec<ClassifiedClass>,
}

fn classify_cmd(k: usize, extra: u32) -> Result<u8, String> {
    let classes = enumerate_cycle_orientations(k).map_err(|e| e.to_string())?;
    let classified: Vec<ClassifiedClass> = classes
        .iter()
        .map(|class| {
            let done = classify_orientation(class, extra).map_err(|e| e.to_string())?;
            Ok(match done.status {
                Some(OrientationStatus::Permitted(w)) => ClassifiedClass {
                    arcs: class.representative.arcs().to_vec(),
                    status: "permitted",
                    witness: Some(DigraphDocument::from_digraph(&w)),
                    searched_up_to: None,
                },
                Some(OrientationStatus::NoWitnessUpTo(bound)) => ClassifiedClass {
                    arcs: class.representative.arcs().to_vec(),
                    status: "no_witness_up_to",
                    witness: None,
                    searched_up_to: Some(bound),
                },
                Some(OrientationStatus::ForbiddenByLength) => ClassifiedClass {
                    arcs: class.representative.arcs().to_vec(),
                    status: "forbidden_by_length",
                    witness: None,
                    searched_up_to: None,
                },
                None => unreachable!("classification always sets a status"),
            })
        })
        .collect::<Result<_, String>>()?;
    print_json(&ClassifyReport {
        k,
        extra_vertices: extra,
        classes: classified,
    });
    Ok(0)
}

#[derive(Serialize)]
struct ScanMatch {
    vertices: Vec<u32>,
    length: usize,
    kind: &'static str,
    pattern_arcs: Vec<(u32, u32)>,
}

#[derive(Serialize)]
struct ScanReport {
    matches: Vec<ScanMatch>,
}

fn scan_cmd(input: &PathBuf) -> Result<u8, String> {
    let (d, _) = read_digraph(input)?;
    let matches = scan_forbidden_induced(&d).map_err(|e| e.to_string())?;
    let report = ScanReport {
        matches: matches
            .iter()
            .map(|m| ScanMatch {
                vertices: m.vertices.clone(),
                length: m.class.length,
                kind: match m.class.status {
                    Some(OrientationStatus::ForbiddenByLength) => "long_cycle",
                    _ => "six_cycle_catalog",
                },
                pattern_arcs: m.class.representative.arcs().to_vec(),
            })
            .collect(),
    };
    let found = !report.matches.is_empty();
    print_json(&report);
    Ok(if found { 1 } else { 0 })
}

#[derive(Serialize)]
struct PhiPair {
    hole: Vec<u32>,
    image: Vec<u32>,
}

#[derive(Serialize)]
struct PhiHypotheses {
    p_holes_disjoint: bool,
    no_u_hole_of_length_4_or_6: bool,
}

#[derive(Serialize)]
struct PhiReport {
    holes_p: Vec<Vec<u32>>,
    holes_u: Vec<Vec<u32>>,
    map: Vec<PhiPair>,
    hypotheses: PhiHypotheses,
    injective: bool,
    count_ok: bool,
}

fn phi_cmd(input: &PathBuf) -> Result<u8, String> {
    let (d, _) = read_digraph(input)?;
    let report = match verify_hole_correspondence(&d) {
        Ok(report) => report,
        // A broken guarantee is a failed property, not an input error.
        Err(
            e @ (HoleMapError::TheoremViolation(_) | HoleMapError::InvariantViolation(_)),
        ) => {
            println!("{}", serde_json::json!({ "violation": e.to_string() }));
            return Ok(1);
        }
        Err(e) => return Err(e.to_string()),
    };
    let out = PhiReport {
        holes_p: report
            .holes_p
            .iter()
            .map(|h| h.vertices().to_vec())
            .collect(),
        holes_u: report
            .holes_u
            .iter()
            .map(|h| h.vertices().to_vec())
            .collect(),
        map: report
            .map
            .iter()
            .map(|(h, img)| PhiPair {
                hole: h.vertices().to_vec(),
                image: img.vertices().to_vec(),
            })
            .collect(),
        hypotheses: PhiHypotheses {
            p_holes_disjoint: report.hypotheses.p_holes_disjoint,
            no_u_hole_of_length_4_or_6: report.hypotheses.no_u_hole_of_length_4_or_6,
        },
        injective: report.injective,
        count_ok: report.count_ok,
    };
    print_json(&out);
    let broken = report.hypotheses.met() && !(report.injective && report.count_ok);
    Ok(if broken { 1 } else { 0 })
}

#[derive(Serialize)]
struct VerifyCounterexample {
    digraph: DigraphDocument,
    detail: String,
}

#[derive(Serialize)]
struct VerifyCheck {
    name: &'static str,
    passes: u64,
    failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_counterexample: Option<VerifyCounterexample>,
}

#[derive(Serialize)]
struct VerifyReport {
    mode: &'static str,
    n: usize,
    bounds: (u32, u32),
    digraphs_checked: u64,
    checks: Vec<VerifyCheck>,
}

fn verify_cmd(args: &VerifyArgs) -> Result<u8, String> {
    let bounds = parse_bounds(&args.bounds)?;
    let mut scope = if args.random {
        SweepScope::random(args.n, bounds, args.samples, args.seed)
    } else if args.exhaustive {
        SweepScope::exhaustive(args.n, bounds)
    } else {
        return Err("choose --exhaustive or --random".into());
    };
    if args.dedup {
        scope = scope.with_dedup();
    }
    let checks = parse_checks(&args.checks)?;
    let jobs = args
        .jobs
        .or_else(|| {
            std::env::var("PHYLOGRAPH_JOBS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|p| p.get())
                .unwrap_or(1)
        });
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| e.to_string())?;
    let report = pool
        .install(|| run_suite(&scope, &checks))
        .map_err(|e| e.to_string())?;
    eprintln!(
        "checked {} digraphs in {:?} with {jobs} workers",
        report.digraphs_checked, report.wall_time
    );
    if let Some(path) = &args.replay {
        let mut file = std::fs::File::create(path).map_err(|e| e.to_string())?;
        for outcome in &report.checks {
            if let Some(cex) = &outcome.first_counterexample {
                let record = serde_json::json!({
                    "check": outcome.kind.name(),
                    "detail": cex.detail,
                    "digraph": DigraphDocument::from_digraph(&cex.digraph),
                });
                writeln!(file, "{record}").map_err(|e| e.to_string())?;
            }
        }
    }
    let out = VerifyReport {
        mode: match scope.mode {
            SweepMode::Exhaustive => "exhaustive",
            SweepMode::Random => "random",
        },
        n: scope.n,
        bounds: (bounds.max_in(), bounds.max_out()),
        digraphs_checked: report.digraphs_checked,
        checks: report
            .checks
            .iter()
            .map(|c| VerifyCheck {
                name: c.kind.name(),
                passes: c.passes,
                failures: c.failures,
                first_counterexample: c.first_counterexample.as_ref().map(|cex| {
                    VerifyCounterexample {
                        digraph: DigraphDocument::from_digraph(&cex.digraph),
                        detail: cex.detail.clone(),
                    }
                }),
            })
            .collect(),
    };
    let failed = report.total_failures() > 0;
    print_json(&out);
    Ok(if failed { 1 } else { 0 })
}

fn parse_bounds(text: &str) -> Result<DegreeBounds, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("bounds must look like \"2,2\", got {text:?}"));
    }
    let max_in: u32 = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let max_out: u32 = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    DegreeBounds::new(max_in, max_out).map_err(|e| e.to_string())
}

fn parse_checks(text: &str) -> Result<Vec<CheckKind>, String> {
    if text == "all" {
        return Ok(CheckKind::ALL.to_vec());
    }
    text.split(',')
        .map(|name| {
            CheckKind::from_name(name.trim()).ok_or_else(|| format!("unknown check {name:?}"))
        })
        .collect()
}

#[derive(Serialize)]
struct CensusReport {
    k: usize,
    count: usize,
    classes: Vec<Vec<(u32, u32)>>,
}

fn census_cmd(k: usize) -> Result<u8, String> {
    let classes = enumerate_cycle_orientations(k).map_err(|e| e.to_string())?;
    print_json(&CensusReport {
        k,
        count: classes.len(),
        classes: classes
            .iter()
            .map(|c| c.representative.arcs().to_vec())
            .collect(),
    });
    Ok(0)
}

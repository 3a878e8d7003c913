use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use surfcurve::coords::{validate, violations, CoordError, TCoord, Violation};
use surfcurve::curves::classify_class;
use surfcurve::intersection::{cauchy_check, intersection_report, tightness_search, Budget, CauchyReport};
use surfcurve::lamination::{ml_dimension, ml_membership, subspace_dims, XPoint};
use surfcurve::sample::{sample_cs0, sample_es};
use surfcurve::surface::{builtin_triangulation, from_doc, IdealTriangulation, SurfaceSpec, TriangulationDoc};

/// Curve systems on a triangulated surface: validation, intersection
/// numbers, Cauchy-bound trials and measured-lamination queries.
#[derive(Parser)]
#[command(name = "surfcurve", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the triangulation and any supplied coordinates.
    Validate {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        coords: CoordArgs,
    },
    /// Print the geometric intersection number I(alpha, beta).
    Intersect {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        alpha: PathBuf,
        #[arg(long)]
        beta: PathBuf,
    },
    /// Check |I(a,b) - I(a,c)| <= k |a| |b - c| on one triple or on seeded
    /// random triples.
    Cauchy {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        coords: CoordArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Subspace dimensions and membership of supplied points in ML0.
    Ml {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Edge-weight point `{"x": ["1", "3/2", ...]}`; may be repeated.
        #[arg(long)]
        point: Vec<PathBuf>,
    },
    /// Search for triples attaining the Cauchy bounds with equality.
    Tightness {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SurfaceArgs {
    /// Builtin triangulation of the surface of genus g with r boundaries.
    #[arg(long, value_name = "G,R", value_parser = parse_surface)]
    surface: Option<SurfaceSpec>,
    /// Triangulation file `{"genus", "boundary", "triangles"}`.
    #[arg(long, value_name = "FILE")]
    tri: Option<PathBuf>,
}

#[derive(Args)]
struct CoordArgs {
    #[arg(long, value_name = "FILE")]
    alpha: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    beta: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    gamma: Option<PathBuf>,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 8)]
    max_entry: u64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget { max_entry: self.max_entry, trials: self.trials, seed: self.seed }
    }
}

fn parse_surface(s: &str) -> Result<SurfaceSpec, String> {
    let (g, r) = s.split_once(',').ok_or("expected G,R")?;
    let g = g.trim().parse().map_err(|e| format!("genus: {e}"))?;
    let r = r.trim().parse().map_err(|e| format!("boundary: {e}"))?;
    SurfaceSpec::new(g, r).map_err(|e| e.to_string())
}

/// Why a command stopped early.
enum Failure {
    /// Bad input: unreadable file, malformed JSON. Exit 2.
    Input(String),
    /// The input was read but breaks a rule. Exit 1.
    Violation(String),
}

type Outcome = Result<Report, Failure>;

/// Text and JSON forms of a finished command, and whether it found a
/// violation.
struct Report {
    text: Vec<String>,
    json: Value,
    ok: bool,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let s = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_surface(args: &SurfaceArgs) -> Result<IdealTriangulation, Failure> {
    let built = match (&args.surface, &args.tri) {
        (Some(spec), _) => builtin_triangulation(*spec),
        (None, Some(path)) => from_doc(&read_json::<TriangulationDoc>(path)?),
        (None, None) => return Err(Failure::Input("one of --surface or --tri is required".into())),
    };
    built.map_err(|e| Failure::Violation(format!("triangulation: {e}")))
}

fn load_coord(tri: &IdealTriangulation, path: &Path) -> Result<TCoord, Failure> {
    let c: TCoord = read_json(path)?;
    validate(tri, &c).map_err(|e| Failure::Violation(format!("{}: {e}", path.display())))?;
    Ok(c)
}

fn surface_json(tri: &IdealTriangulation) -> Value {
    let s = tri.spec();
    json!({
        "genus": s.genus,
        "boundary": s.boundary,
        "triangles": tri.triangle_count(),
        "edges": tri.edge_count(),
    })
}

fn surface_line(tri: &IdealTriangulation) -> String {
    let s = tri.spec();
    format!(
        "surface genus {} with {} boundaries: {} triangles, {} edges",
        s.genus,
        s.boundary,
        tri.triangle_count(),
        tri.edge_count()
    )
}

fn cmd_validate(surface: &SurfaceArgs, coords: &CoordArgs) -> Outcome {
    let tri = load_surface(surface)?;
    let mut text = vec![surface_line(&tri)];
    let mut entries = Vec::new();
    let mut ok = true;
    let named = [("alpha", &coords.alpha), ("beta", &coords.beta), ("gamma", &coords.gamma)];
    for (name, path) in named.into_iter().filter_map(|(n, p)| Some((n, p.as_ref()?))) {
        let c: TCoord = read_json(path)?;
        let found: Vec<Violation> = match violations(&tri, &c) {
            Ok(v) => v,
            Err(e @ (CoordError::Length { .. } | CoordError::Ragged(..))) => {
                ok = false;
                text.push(format!("{name}: {e}"));
                entries.push(json!({ "name": name, "valid": false, "error": e.to_string() }));
                continue;
            }
            Err(e) => return Err(Failure::Violation(format!("{name}: {e}"))),
        };
        if found.is_empty() {
            let classes = classify_class(&tri, &c).map_err(|e| Failure::Violation(e.to_string()))?;
            text.push(format!("{name}: valid (closed curve system: {}, no peripheral loops: {})", classes.cs0, classes.cs));
            entries.push(json!({ "name": name, "valid": true, "classes": classes }));
        } else {
            ok = false;
            text.push(format!("{name}: {} violations", found.len()));
            text.extend(found.iter().map(|v| format!("  {v}")));
            entries.push(json!({ "name": name, "valid": false, "violations": found }));
        }
    }
    Ok(Report { text, json: json!({ "surface": surface_json(&tri), "coordinates": entries }), ok })
}

fn cmd_intersect(surface: &SurfaceArgs, alpha: &Path, beta: &Path) -> Outcome {
    let tri = load_surface(surface)?;
    let a = load_coord(&tri, alpha)?;
    let b = load_coord(&tri, beta)?;
    let r = intersection_report(&tri, &a, &b).map_err(|e| Failure::Violation(e.to_string()))?;
    Ok(Report {
        text: vec![format!("I = {}", r.total)],
        json: json!({ "alpha": a, "beta": b, "I": r.total, "detail": r }),
        ok: true,
    })
}

#[derive(Serialize)]
struct TrialSummary {
    trials: u64,
    violations: Vec<(u64, CauchyReport)>,
    /// Largest `lhs / (|a| |b - c|)` seen with closed `a`.
    max_ratio_closed: (u64, u64),
    /// Largest `lhs / (2 |a| |b - c|)` seen.
    max_ratio_general: (u64, u64),
    witnesses_closed: u64,
    witnesses_general: u64,
}

fn raise(best: &mut (u64, u64), lhs: u64, rhs: u64) {
    if rhs > 0 && (best.1 == 0 || lhs as u128 * best.1 as u128 > best.0 as u128 * rhs as u128) {
        *best = (lhs, rhs);
    }
}

fn trial(tri: &IdealTriangulation, budget: &Budget, i: u64) -> CauchyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    rng.set_stream(i);
    let a = if i.is_multiple_of(2) { sample_cs0(tri, budget.max_entry, &mut rng) } else { sample_es(tri, budget.max_entry, &mut rng) };
    let b = sample_es(tri, budget.max_entry, &mut rng);
    let c = sample_es(tri, budget.max_entry, &mut rng);
    cauchy_check(tri, &a, &b, &c).expect("sampled coordinates are valid")
}

/// Runs every trial on a pool of scoped threads. Each trial seeds its own
/// stream, so the result depends only on the budget.
fn run_trials(tri: &IdealTriangulation, budget: &Budget) -> Vec<CauchyReport> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()) as u64;
    let chunk = budget.trials.div_ceil(threads).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..budget.trials)
            .step_by(chunk as usize)
            .map(|start| {
                let end = (start + chunk).min(budget.trials);
                s.spawn(move || (start..end).map(|i| trial(tri, budget, i)).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("trial thread panicked")).collect()
    })
}

fn cmd_cauchy(surface: &SurfaceArgs, coords: &CoordArgs, budget: &BudgetArgs) -> Outcome {
    let tri = load_surface(surface)?;
    if let (Some(a), Some(b), Some(c)) = (&coords.alpha, &coords.beta, &coords.gamma) {
        let (a, b, c) = (load_coord(&tri, a)?, load_coord(&tri, b)?, load_coord(&tri, c)?);
        let r = cauchy_check(&tri, &a, &b, &c).map_err(|e| Failure::Violation(e.to_string()))?;
        let bound = if r.alpha_closed { r.rhs_closed } else { r.rhs_general };
        return Ok(Report {
            text: vec![format!(
                "I(a,b) = {}, I(a,c) = {}, |a| = {}, |b-c| = {}: {} <= {bound} {}",
                r.i_beta,
                r.i_gamma,
                r.alpha_norm,
                r.distance,
                r.lhs,
                if r.ok { "holds" } else { "VIOLATED" }
            )],
            ok: r.ok,
            json: json!(r),
        });
    }
    if coords.alpha.is_some() || coords.beta.is_some() || coords.gamma.is_some() {
        return Err(Failure::Input("a single check needs all of --alpha, --beta and --gamma".into()));
    }
    let budget = budget.budget();
    let mut sum = TrialSummary {
        trials: budget.trials,
        violations: Vec::new(),
        max_ratio_closed: (0, 0),
        max_ratio_general: (0, 0),
        witnesses_closed: 0,
        witnesses_general: 0,
    };
    for (i, r) in run_trials(&tri, &budget).into_iter().enumerate() {
        raise(&mut sum.max_ratio_general, r.lhs, r.rhs_general);
        sum.witnesses_general += u64::from(r.lhs > 0 && r.lhs == r.rhs_general);
        if r.alpha_closed {
            raise(&mut sum.max_ratio_closed, r.lhs, r.rhs_closed);
            sum.witnesses_closed += u64::from(r.lhs > 0 && r.lhs == r.rhs_closed);
        }
        if !r.ok {
            sum.violations.push((i as u64, r));
        }
    }
    let mut text = vec![
        surface_line(&tri),
        format!("{} trials (entries <= {}, seed {}), {} violations", sum.trials, budget.max_entry, budget.seed, sum.violations.len()),
        format!(
            "max ratio: closed alpha {}/{}, any alpha {}/{}",
            sum.max_ratio_closed.0, sum.max_ratio_closed.1, sum.max_ratio_general.0, sum.max_ratio_general.1
        ),
        format!("equality witnesses: {} for constant 1, {} for constant 2", sum.witnesses_closed, sum.witnesses_general),
    ];
    text.extend(sum.violations.iter().take(10).map(|(i, r)| format!("  trial {i}: {} > bound ({r:?})", r.lhs)));
    Ok(Report { ok: sum.violations.is_empty(), json: json!({ "budget": budget, "summary": sum }), text })
}

fn cmd_ml(surface: &SurfaceArgs, points: &[PathBuf]) -> Outcome {
    let tri = load_surface(surface)?;
    let d = subspace_dims(&tri);
    let dim = ml_dimension(&tri).map_err(|e| Failure::Violation(e.to_string()))?;
    let mut text = vec![
        surface_line(&tri),
        format!("dim W = {}, dim V = {}, dim(V∩W) = {}, dim(V∩W⊥) = {}", d.dim_w, d.dim_v, d.dim_v_cap_w, d.dim_v_cap_w_perp),
        format!("dim ML₀ = {dim}"),
    ];
    let mut ok = true;
    let mut verdicts = Vec::new();
    for path in points {
        let p: XPoint = read_json(path)?;
        let m = ml_membership(&tri, &p).map_err(|e| Failure::Violation(format!("{}: {e}", path.display())))?;
        ok &= m.member;
        if m.member {
            text.push(format!("{}: in S", path.display()));
        } else {
            text.extend(m.violations.iter().map(|v| format!("{}: {v}", path.display())));
        }
        verdicts.push(json!({ "point": path.display().to_string(), "membership": m }));
    }
    Ok(Report { text, ok, json: json!({ "surface": surface_json(&tri), "dims": d, "ml_dimension": dim, "points": verdicts }) })
}

fn cmd_tightness(surface: &SurfaceArgs, budget: &BudgetArgs) -> Outcome {
    let tri = load_surface(surface)?;
    let r = tightness_search(&tri, budget.budget()).map_err(|e| Failure::Violation(e.to_string()))?;
    let mut text = vec![surface_line(&tri), format!("{} triples examined", r.examined), r.summary()];
    for w in r.closed.iter().take(3) {
        text.push(format!("  a={} b={} c={}: {} = {}", w.alpha, w.beta, w.gamma, w.lhs, w.rhs));
    }
    Ok(Report { text, ok: true, json: json!(r) })
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate { surface, coords } => cmd_validate(surface, coords),
        Command::Intersect { surface, alpha, beta } => cmd_intersect(surface, alpha, beta),
        Command::Cauchy { surface, coords, budget } => cmd_cauchy(surface, coords, budget),
        Command::Ml { surface, point } => cmd_ml(surface, point),
        Command::Tightness { surface, budget } => cmd_tightness(surface, budget),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", json!({ "ok": report.ok, "report": report.json }));
            } else {
                for line in &report.text {
                    println!("{line}");
                }
            }
            ExitCode::from(if report.ok { 0 } else { 1 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Violation(msg)) => {
            if cli.json {
                println!("{}", json!({ "ok": false, "error": msg }));
            } else {
                println!("violation: {msg}");
            }
            ExitCode::from(1)
        }
    }
}

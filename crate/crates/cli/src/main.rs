//! Command-line harness around the exact gathering simulator: run one
//! scenario, sweep seeded scenario grids, run the built-in verification
//! suite, or demonstrate the gathering-prevention scheduler.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use gather_core::engine::{RunOutcome, Trace};
use gather_core::gen::{generate_scenario, GenOptions, MovementChoice};
use gather_core::scalar::rat;
use gather_core::scenario::{parse_scenario, MovementSpec, Scenario, SchedulerSpec};
use gather_core::verify::{
    check_complexity_bound, demo_impossibility, run_verification, CaseReport, BOUND_C1, BOUND_C2,
};
use gather_core::AlgorithmKind;

/// Relative output paths are resolved against this directory when set.
const OUT_DIR_ENV: &str = "GATHER_OUT_DIR";

/// Run ended with all robots on one point.
const EXIT_GATHERED: u8 = 0;
/// Run stopped at the round cap without gathering.
const EXIT_CAP: u8 = 2;

#[derive(Parser)]
#[command(
    name = "gather",
    version,
    about = "Exact simulator for gathering disoriented robots on the plane"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one scenario file; exit 0 if the robots gather, 2 on a
    /// round-cap hit.
    Run(RunArgs),
    /// Run a grid of seeded scenarios and aggregate rounds-to-gather.
    Sweep(SweepArgs),
    /// Run the built-in case-table verification suite.
    Verify(VerifyArgs),
    /// Drive a lifted line algorithm with the gathering-prevention
    /// scheduler and report whether it ever gathered.
    AdversaryDemo(DemoArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario JSON file.
    scenario: PathBuf,
    /// Write the JSONL trace here (overrides the scenario's own output
    /// settings).
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the CSV round summary here (overrides the scenario).
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Override the scenario's round cap.
    #[arg(long)]
    max_rounds: Option<u64>,
    /// Override the seed of any seeded scheduler or movement policy in
    /// the scenario.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Algorithm to sweep: suig, suir, axis_rdv, lifted_suir, midpoint.
    #[arg(long, default_value = "suig")]
    algo: String,
    /// Number of seeded scenarios to run.
    #[arg(long, default_value_t = 100)]
    seeds: u64,
    /// First seed of the range.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Smallest robot count to draw.
    #[arg(long, default_value_t = 2)]
    robots_min: usize,
    /// Largest robot count to draw.
    #[arg(long, default_value_t = 16)]
    robots_max: usize,
    /// Percentage of scenarios that include a crashed location (0-100).
    #[arg(long, default_value_t = 0)]
    crash_percent: u8,
    /// Movement policy: rigid, min_progress, seeded_random, mixed.
    #[arg(long, default_value = "rigid")]
    movement: String,
    /// Round cap per run.
    #[arg(long, default_value_t = 10_000)]
    max_rounds: u64,
    /// Write the per-seed CSV here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Write the JSON case report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    /// Line algorithm under attack: lifted_suir or midpoint.
    #[arg(long, default_value = "lifted_suir")]
    algo: String,
    /// Robots per occupied point (total is twice this).
    #[arg(long, default_value_t = 1)]
    per_point: usize,
    /// Scheduler horizon in rounds.
    #[arg(long, default_value_t = 10_000)]
    horizon: u64,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write the full JSONL trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
        Command::AdversaryDemo(args) => cmd_demo(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

/// Resolve an output path: absolute paths pass through, relative paths
/// land in $GATHER_OUT_DIR when that is set.
fn resolve_out_path(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn write_file(path: &Path, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<PathBuf> {
    let resolved = resolve_out_path(path);
    if let Some(parent) = resolved.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    let file = fs::File::create(&resolved)
        .with_context(|| format!("creating {}", resolved.display()))?;
    let mut out = BufWriter::new(file);
    write(&mut out)?;
    out.flush()?;
    Ok(resolved)
}

fn parse_algorithm(name: &str) -> Result<AlgorithmKind> {
    Ok(match name {
        "suig" => AlgorithmKind::Suig,
        "suir" => AlgorithmKind::Suir,
        "axis_rdv" => AlgorithmKind::AxisRdv,
        "lifted_suir" => AlgorithmKind::LiftedSuir,
        "midpoint" => AlgorithmKind::Midpoint,
        other => bail!(
            "unknown algorithm {other:?}; expected suig, suir, axis_rdv, lifted_suir or midpoint"
        ),
    })
}

fn parse_movement(name: &str) -> Result<MovementChoice> {
    Ok(match name {
        "rigid" => MovementChoice::Rigid,
        "min_progress" => MovementChoice::MinProgress,
        "seeded_random" => MovementChoice::SeededRandom,
        "mixed" => MovementChoice::Mixed,
        other => bail!(
            "unknown movement policy {other:?}; expected rigid, min_progress, seeded_random or mixed"
        ),
    })
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

fn cmd_run(args: RunArgs) -> Result<u8> {
    let text = fs::read_to_string(&args.scenario)
        .with_context(|| format!("reading {}", args.scenario.display()))?;
    let mut scenario = parse_scenario(&text)
        .with_context(|| format!("parsing {}", args.scenario.display()))?;

    if let Some(cap) = args.max_rounds {
        scenario.round_cap = cap;
    }
    if let Some(seed) = args.seed {
        let mut seeded = false;
        if let SchedulerSpec::SsyncSeededRandom { seed: s } = &mut scenario.scheduler {
            *s = seed;
            seeded = true;
        }
        if let MovementSpec::SeededRandom { seed: s, .. } = &mut scenario.movement {
            *s = seed;
            seeded = true;
        }
        if !seeded {
            eprintln!("warning: --seed given but the scenario has no seeded scheduler or movement policy");
        }
    }

    let mut sim = scenario.build_simulation()?;
    let trace = sim.run()?;

    let trace_path = args
        .trace
        .or_else(|| scenario_output(&scenario, |o| o.trace.as_deref()));
    if let Some(path) = trace_path {
        let written = write_file(&path, |mut out| {
            trace.write_jsonl(&mut out).context("writing trace")
        })?;
        println!("trace: {}", written.display());
    }
    let summary_path = args
        .summary
        .or_else(|| scenario_output(&scenario, |o| o.summary.as_deref()));
    if let Some(path) = summary_path {
        let written = write_file(&path, |mut out| {
            trace.write_csv_summary(&mut out).context("writing summary")
        })?;
        println!("summary: {}", written.display());
    }

    println!("scenario: {}", trace.scenario_digest);
    match &trace.verdict {
        RunOutcome::Gathered { point, round } => {
            println!("gathered at {point} after {round} round(s)");
            Ok(EXIT_GATHERED)
        }
        RunOutcome::RoundCapReached { rounds } => {
            println!("round cap reached after {rounds} round(s) without gathering");
            Ok(EXIT_CAP)
        }
    }
}

fn scenario_output(
    scenario: &Scenario,
    pick: impl Fn(&gather_core::scenario::OutputSpec) -> Option<&str>,
) -> Option<PathBuf> {
    scenario
        .output
        .as_ref()
        .and_then(pick)
        .map(PathBuf::from)
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepRow {
    seed: u64,
    robots: usize,
    crashed: usize,
    rounds: u64,
    gathered: bool,
    bound_applicable: bool,
    level_spread: i64,
    lowest_level: i64,
    bound: String,
    within_bound: bool,
}

fn cmd_sweep(args: SweepArgs) -> Result<u8> {
    let algorithm = parse_algorithm(&args.algo)?;
    let movement = parse_movement(&args.movement)?;
    if args.robots_min < 2 || args.robots_max < args.robots_min {
        bail!("robot range must satisfy 2 <= robots-min <= robots-max");
    }
    if args.crash_percent > 100 {
        bail!("crash-percent must be between 0 and 100");
    }
    let opts = GenOptions {
        algorithm,
        robots_min: args.robots_min,
        robots_max: args.robots_max,
        crash_percent: args.crash_percent,
        movement,
        round_cap: args.max_rounds,
        ..GenOptions::default()
    };

    let seeds: Vec<u64> = (args.seed..args.seed.saturating_add(args.seeds)).collect();
    let rows: Vec<SweepRow> = seeds
        .par_iter()
        .map(|&seed| -> Result<SweepRow> {
            let scenario = generate_scenario(seed, &opts);
            let config = scenario.to_configuration();
            let robots = scenario.robots.len();
            let crashed = scenario.robots.iter().filter(|r| r.crashed).count();
            let mut sim = scenario.build_simulation()?;
            let trace = sim.run()?;
            let check = check_complexity_bound(&config, &trace, &rat(BOUND_C1), &rat(BOUND_C2));
            let (gathered, rounds) = match &trace.verdict {
                RunOutcome::Gathered { round, .. } => (true, *round),
                RunOutcome::RoundCapReached { rounds } => (false, *rounds),
            };
            Ok(SweepRow {
                seed,
                robots,
                crashed,
                rounds,
                gathered,
                bound_applicable: check.applicable,
                level_spread: check.level_spread,
                lowest_level: check.lowest_level,
                bound: gather_core::scalar::format_rational(&check.bound),
                within_bound: !check.applicable || check.pass,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut csv = String::from(
        "seed,algorithm,robots,crashed,rounds,gathered,bound_applicable,level_spread,lowest_level,bound,within_bound\n",
    );
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            row.seed,
            algorithm.name(),
            row.robots,
            row.crashed,
            row.rounds,
            row.gathered,
            row.bound_applicable,
            row.level_spread,
            row.lowest_level,
            row.bound,
            row.within_bound,
        ));
    }

    let total = rows.len();
    let gathered = rows.iter().filter(|r| r.gathered).count();
    let max_rounds = rows.iter().filter(|r| r.gathered).map(|r| r.rounds).max();
    let bound_failures = rows.iter().filter(|r| !r.within_bound).count();

    if let Some(path) = &args.report {
        let written = write_file(path, |out| {
            out.write_all(csv.as_bytes()).context("writing sweep CSV")
        })?;
        println!("report: {}", written.display());
        println!(
            "{total} run(s): {gathered} gathered{}, {bound_failures} outside the round bound",
            match max_rounds {
                Some(m) => format!(" (max {m} rounds)"),
                None => String::new(),
            }
        );
    } else {
        print!("{csv}");
        eprintln!(
            "{total} run(s): {gathered} gathered{}, {bound_failures} outside the round bound",
            match max_rounds {
                Some(m) => format!(" (max {m} rounds)"),
                None => String::new(),
            }
        );
    }

    if gathered < total {
        Ok(EXIT_CAP)
    } else if bound_failures > 0 {
        Ok(1)
    } else {
        Ok(EXIT_GATHERED)
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn print_case_section(name: &str, cases: &[CaseReport]) {
    println!("{name} ({} cases)", cases.len());
    for case in cases {
        let mark = if case.pass { "PASS" } else { "FAIL" };
        if case.pass {
            println!("  {mark} {:<42} {}", case.id, case.observed);
        } else {
            println!(
                "  {mark} {:<42} expected {}; observed {}",
                case.id, case.expected, case.observed
            );
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let report = run_verification();
    print_case_section("common-orientation rendezvous", &report.common);
    print_case_section("opposite-orientation rendezvous", &report.opposite);
    print_case_section("rendezvous with a crash", &report.crash);
    print_case_section("crash geometry", &report.crash_geometry);
    let total = report.common.len()
        + report.opposite.len()
        + report.crash.len()
        + report.crash_geometry.len();
    let failed = [
        &report.common,
        &report.opposite,
        &report.crash,
        &report.crash_geometry,
    ]
    .iter()
    .flat_map(|s| s.iter())
    .filter(|c| !c.pass)
    .count();
    println!(
        "{total} case(s), {} passed, {failed} failed",
        total - failed
    );

    if let Some(path) = &args.report {
        let json = serde_json::to_string_pretty(&report).context("serializing report")?;
        let written = write_file(path, |out| {
            out.write_all(json.as_bytes())?;
            out.write_all(b"\n")?;
            Ok(())
        })?;
        println!("report: {}", written.display());
    }
    Ok(if report.all_pass { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// adversary-demo
// ---------------------------------------------------------------------------

fn cmd_demo(args: DemoArgs) -> Result<u8> {
    let algorithm = parse_algorithm(&args.algo)?;
    if args.per_point == 0 {
        bail!("per-point must be at least 1");
    }
    let (report, trace) = demo_impossibility(algorithm, args.per_point, args.horizon)?;

    println!(
        "algorithm {} on 2 x {} robot(s), horizon {} round(s)",
        report.algorithm, args.per_point, report.horizon
    );
    println!(
        "{} after {} executed round(s)",
        if report.gathered {
            "GATHERED (the schedule failed to prevent gathering)"
        } else {
            "not gathered"
        },
        report.rounds_executed
    );
    println!(
        "rule counts: fallback={} stay={} miss={} exchange={} hold={}",
        report.rule_counts[0],
        report.rule_counts[1],
        report.rule_counts[2],
        report.rule_counts[3],
        report.rule_counts[4],
    );
    if let Some(fairness) = &report.fairness {
        match fairness.max_gap {
            Some(gap) => println!("max activation gap: {gap} round(s)"),
            None => println!("max activation gap: none"),
        }
    }

    if let Some(path) = &args.trace {
        let written = write_file(path, |mut out| {
            Trace::write_jsonl(&trace, &mut out).context("writing trace")
        })?;
        println!("trace: {}", written.display());
    }
    if let Some(path) = &args.report {
        let json = serde_json::to_string_pretty(&report).context("serializing report")?;
        let written = write_file(path, |out| {
            out.write_all(json.as_bytes())?;
            out.write_all(b"\n")?;
            Ok(())
        })?;
        println!("report: {}", written.display());
    }

    Ok(if report.gathered { 1 } else { 0 })
}

//! Checkable claims about the rendezvous and gathering algorithms.
//!
//! This module turns the analysis behind the algorithms into executable
//! verdicts: exhaustive case tables for the two-robot rendezvous rule
//! (common and opposite orientation, with and without a crash), the
//! crash-geometry ratio table, trace monitors for contraction, level
//! growth and hull containment, the round-complexity bound check, the
//! impossibility-scheduler demonstration, and a one-dimensional
//! reference run used to validate the planar lift.

use num_traits::Signed;
use serde::Serialize;

use crate::algo::{
    classify_view, signature_ratios, AlgoError, AlgorithmKind, LineAlgorithm, LineDecision, Phase,
    SuirLine,
};
use crate::engine::{
    EngineError, FairnessReport, MovementAdversary, RunOutcome, Scheduler, Simulation, Trace,
};
use crate::geometry::{convex_hull, dist_sq, point_in_hull, Point2};
use crate::model::{
    delta_level, local_level, lowest_level, observe, side_of, Configuration, Frame, Robot, Side,
};
use crate::scalar::{level_of_sq, rat, ratio, FieldScalar, Rational};

/// Outcome of one scripted verification case.
#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub expected: String,
    pub observed: String,
    pub rounds: u64,
    pub pass: bool,
}

pub fn all_pass(reports: &[CaseReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

// ---------------------------------------------------------------------------
// Two-robot case tables
// ---------------------------------------------------------------------------

/// Base separation 17/256: the identity-frame level is 4, so a robot
/// scaled by 2^-r measures level 4 + r, hitting residue r exactly.
fn base_distance() -> Rational {
    ratio(17, 256)
}

fn axis_robot(x: Rational, a: Rational, crashed: bool) -> Robot {
    Robot {
        position: Point2::new(FieldScalar::from_rational(x), FieldScalar::zero()),
        frame: Frame {
            a,
            b: rat(0),
            reflect: false,
        },
        crashed,
    }
}

/// Scale whose level residue (mod 4) is `r` at the base separation.
fn residue_scale(r: i64) -> Rational {
    crate::scalar::pow2(-r)
}

/// Classify a two-robot configuration where the robots see opposite
/// sides: (level of the left-seer, level of the right-seer), mod 4.
fn common_class(config: &Configuration) -> Option<(i64, i64)> {
    let ((s0, l0), (s1, l1)) = pair_states(config)?;
    match (s0, s1) {
        (Side::Left, Side::Right) => Some((l0, l1)),
        (Side::Right, Side::Left) => Some((l1, l0)),
        _ => None,
    }
}

/// Classify a two-robot configuration where both robots see the same
/// side: (that side, levels mod 4 as a sorted pair).
fn opposite_class(config: &Configuration) -> Option<(Side, i64, i64)> {
    let ((s0, l0), (s1, l1)) = pair_states(config)?;
    if s0 != s1 {
        return None;
    }
    Some((s0, l0.min(l1), l0.max(l1)))
}

fn pair_states(config: &Configuration) -> Option<((Side, i64), (Side, i64))> {
    if config.robots.len() != 2 {
        return None;
    }
    let mut states = Vec::new();
    for i in 0..2 {
        let view = observe(config, i);
        if view.len() != 2 {
            return None;
        }
        let side = side_of(&view).ok()?;
        let level = local_level(&view).ok()?.rem_euclid(4);
        states.push((side, level));
    }
    Some((states[0], states[1]))
}

/// Successor class after one synchronous rigid round, for two robots
/// seeing opposite sides with level residues (i, j); `None` means the
/// pair meets in that round.
fn common_successor(i: i64, j: i64) -> Option<(i64, i64)> {
    match (i, j) {
        (0, 1) => Some((2, 1)),
        (1, 1) => Some((2, 2)),
        (2, 1) => Some((2, 3)),
        (3, 0) => Some((1, 0)),
        (3, 1) => Some((1, 3)),
        (3, 2) => Some((3, 0)),
        (3, 3) => Some((0, 0)),
        _ => None,
    }
}

/// Successor class for two robots seeing the same side, with sorted
/// level residues {i, j}; `None` means the pair meets in that round.
fn opposite_successor(side: Side, i: i64, j: i64) -> Option<(Side, i64, i64)> {
    match (side, i, j) {
        (Side::Left, 0, 3) => Some((Side::Right, 0, 1)),
        (Side::Left, 1, 3) => Some((Side::Right, 0, 2)),
        (Side::Left, 2, 3) => Some((Side::Right, 0, 3)),
        (Side::Left, 3, 3) => Some((Side::Right, 3, 3)),
        (Side::Right, 0, 1) => Some((Side::Left, 1, 2)),
        (Side::Right, 1, 1) => Some((Side::Left, 1, 1)),
        (Side::Right, 1, 2) => Some((Side::Left, 2, 3)),
        (Side::Right, 1, 3) => Some((Side::Left, 0, 2)),
        _ => None,
    }
}

const RENDEZVOUS_IN_ONE: &str = "rendezvous in 1";
const CASE_ROUND_LIMIT: u64 = 3;

/// Drive a two-robot rendezvous instance under the synchronous rigid
/// regime, record the class observed after the first round, and report
/// against the expected first-round outcome.
fn run_pair_case(
    id: String,
    config: Configuration,
    expected: String,
    observe_class: impl Fn(&Configuration) -> Option<String>,
) -> CaseReport {
    let mut sim = Simulation::new(
        config,
        AlgorithmKind::Suir,
        Scheduler::Fsync,
        MovementAdversary::rigid(),
    )
    .with_round_cap(CASE_ROUND_LIMIT + 2);
    let mut observed = String::new();
    let mut rounds = 0u64;
    while !sim.config.is_gathered() && rounds < CASE_ROUND_LIMIT + 1 {
        if let Err(err) = sim.step() {
            return CaseReport {
                id,
                expected,
                observed: format!("engine error: {err}"),
                rounds,
                pass: false,
            };
        }
        rounds += 1;
        if rounds == 1 {
            observed = if sim.config.is_gathered() {
                RENDEZVOUS_IN_ONE.to_string()
            } else {
                observe_class(&sim.config).unwrap_or_else(|| "unclassified".to_string())
            };
        }
    }
    let pass = sim.config.is_gathered() && rounds <= CASE_ROUND_LIMIT && observed == expected;
    CaseReport {
        id,
        expected,
        observed,
        rounds,
        pass,
    }
}

/// All 16 level-residue classes for two robots that see opposite sides
/// of their common line (their frames agree on East up to scale).
pub fn verify_suir_common() -> Vec<CaseReport> {
    let d = base_distance();
    let mut reports = Vec::new();
    for i in 0..4i64 {
        for j in 0..4i64 {
            // Robot 0 sits West and sees the other to the East: left.
            // Robot 1 sits East and sees the other to the West: right.
            let config = Configuration::new(vec![
                axis_robot(rat(0), residue_scale(i), false),
                axis_robot(d.clone(), residue_scale(j), false),
            ]);
            debug_assert_eq!(common_class(&config), Some((i, j)));
            let expected = match common_successor(i, j) {
                Some((a, b)) => format!("class ({a},{b})"),
                None => RENDEZVOUS_IN_ONE.to_string(),
            };
            reports.push(run_pair_case(
                format!("common({i},{j})"),
                config,
                expected,
                |c| common_class(c).map(|(a, b)| format!("class ({a},{b})")),
            ));
        }
    }
    reports
}

/// All 20 classes for two robots that see the same side (one frame is a
/// half-turn of the other), keyed by side and sorted level residues.
pub fn verify_suir_opposite() -> Vec<CaseReport> {
    let d = base_distance();
    let mut reports = Vec::new();
    for side in [Side::Left, Side::Right] {
        for i in 0..4i64 {
            for j in i..4i64 {
                // A positive scale on the West robot makes it see left;
                // negating a scale rotates the frame by a half-turn and
                // flips the side that robot sees.
                let (west_a, east_a) = match side {
                    Side::Left => (residue_scale(i), -residue_scale(j)),
                    Side::Right => (-residue_scale(i), residue_scale(j)),
                };
                let config = Configuration::new(vec![
                    axis_robot(rat(0), west_a, false),
                    axis_robot(d.clone(), east_a, false),
                ]);
                debug_assert_eq!(opposite_class(&config), Some((side, i, j)));
                let expected = match opposite_successor(side, i, j) {
                    Some((s, a, b)) => format!("class {s}{{{a},{b}}}"),
                    None => RENDEZVOUS_IN_ONE.to_string(),
                };
                reports.push(run_pair_case(
                    format!("{side}{{{i},{j}}}"),
                    config,
                    expected,
                    |c| opposite_class(c).map(|(s, a, b)| format!("class {s}{{{a},{b}}}")),
                ));
            }
        }
    }
    reports
}

/// Rendezvous with one crashed robot: the correct robot must reach the
/// crash point, and the number of rounds is determined by its side and
/// level residue alone.
pub fn verify_suir_crash() -> Vec<CaseReport> {
    let d = base_distance();
    let mut reports = Vec::new();
    for side in [Side::Left, Side::Right] {
        for i in 0..4i64 {
            // Crash at the origin; the correct robot keeps a positive
            // scale and takes the position that yields the wanted side.
            let x = match side {
                Side::Left => -d.clone(),
                Side::Right => d.clone(),
            };
            let config = Configuration::new(vec![
                axis_robot(rat(0), rat(1), true),
                axis_robot(x, residue_scale(i), false),
            ]);
            // The correct robot halves until its residue enters the
            // full-move band for its side, then finishes in one round.
            let expected_rounds = match side {
                Side::Right => (1 - i).rem_euclid(4) as u64 + 1,
                Side::Left => (3 - i).rem_euclid(4) as u64 + 1,
            };
            let expected = format!("crash reached in {expected_rounds}");
            let mut sim = Simulation::new(
                config,
                AlgorithmKind::Suir,
                Scheduler::Fsync,
                MovementAdversary::rigid(),
            )
            .with_round_cap(8);
            let mut rounds = 0u64;
            let mut failure = None;
            while !sim.config.is_gathered() && rounds < 6 {
                if let Err(err) = sim.step() {
                    failure = Some(format!("engine error: {err}"));
                    break;
                }
                rounds += 1;
            }
            let at_crash = sim.config.is_gathered()
                && sim.config.occupied_points()[0] == Point2::origin();
            let observed = failure.unwrap_or_else(|| {
                if at_crash {
                    format!("crash reached in {rounds}")
                } else {
                    "did not gather at crash".to_string()
                }
            });
            let pass = observed == expected && expected_rounds <= 4;
            reports.push(CaseReport {
                id: format!("crash({side},{i})"),
                expected,
                observed,
                rounds,
                pass,
            });
        }
    }
    reports
}

// ---------------------------------------------------------------------------
// Crash geometry after one level-residue-1 round
// ---------------------------------------------------------------------------

enum FarGapExpect {
    /// The far-side gap is exactly this fraction of the new span.
    Exact(Rational),
    /// The far-side gap exceeds half of the new span.
    MoreThanHalf,
    /// The far-side gap merely avoids the signature ratio set.
    OffSignature,
}

struct GeoSpec {
    id: &'static str,
    /// Frame scales of correct robots collocated with the crash.
    collocated: Vec<Rational>,
    /// Frame scales of correct robots at the far extremity.
    far: Vec<Rational>,
    /// New extremal span, as a fraction of the old separation.
    span: Rational,
    /// Gap between the crash extremity and its nearest occupied point,
    /// as a fraction of the new span.
    crash_ratio: Rational,
    far_gap: FarGapExpect,
}

/// The seven occupancy patterns around a crash once every correct robot
/// is in a fractional-move band: the resulting spans and gap ratios are
/// exact rationals, the crash extremity is the unique signature match,
/// and one more synchronous round gathers everyone on the crash.
pub fn verify_crash_geometry() -> Vec<CaseReport> {
    // Separation 1, crash at (1, 0), far extremity at the origin.
    // Scale 17/256 puts a robot at level 4 (fractional band, width-1
    // tier); 17/512 puts it at level 5 (the half-move singleton).
    let b = ratio(17, 256);
    let c1 = ratio(17, 512);
    let specs = vec![
        GeoSpec {
            id: "collocated-right/far-right",
            collocated: vec![b.clone()],
            far: vec![-b.clone()],
            span: ratio(9, 10),
            crash_ratio: ratio(1, 9),
            far_gap: FarGapExpect::MoreThanHalf,
        },
        GeoSpec {
            id: "collocated-left/far-right",
            collocated: vec![-b.clone()],
            far: vec![-b.clone()],
            span: ratio(9, 10),
            crash_ratio: ratio(10, 81),
            far_gap: FarGapExpect::MoreThanHalf,
        },
        GeoSpec {
            id: "collocated-right/far-left",
            collocated: vec![b.clone()],
            far: vec![b.clone()],
            span: ratio(8, 9),
            crash_ratio: ratio(9, 80),
            far_gap: FarGapExpect::MoreThanHalf,
        },
        GeoSpec {
            id: "collocated-left/far-left",
            collocated: vec![-b.clone()],
            far: vec![b.clone()],
            span: ratio(8, 9),
            crash_ratio: ratio(1, 8),
            far_gap: FarGapExpect::MoreThanHalf,
        },
        GeoSpec {
            id: "far-left+far-right",
            collocated: vec![],
            far: vec![b.clone(), -b.clone()],
            span: ratio(9, 10),
            crash_ratio: ratio(80, 81),
            far_gap: FarGapExpect::Exact(ratio(1, 81)),
        },
        GeoSpec {
            id: "far-right+far-half",
            collocated: vec![],
            far: vec![-b.clone(), c1.clone()],
            span: ratio(9, 10),
            crash_ratio: ratio(10, 18),
            far_gap: FarGapExpect::OffSignature,
        },
        GeoSpec {
            id: "far-left+far-half",
            collocated: vec![],
            far: vec![b.clone(), c1.clone()],
            span: ratio(8, 9),
            crash_ratio: ratio(9, 16),
            far_gap: FarGapExpect::OffSignature,
        },
    ];
    specs.into_iter().map(run_geo_case).collect()
}

fn run_geo_case(spec: GeoSpec) -> CaseReport {
    let crash_point = Point2::from_ints(1, 0);
    let mut robots = vec![axis_robot(rat(1), rat(1), true)];
    for a in &spec.collocated {
        robots.push(axis_robot(rat(1), a.clone(), false));
    }
    for a in &spec.far {
        robots.push(axis_robot(rat(0), a.clone(), false));
    }
    let expected = format!(
        "span {}, crash gap {}, {}, all views name the crash, gathered in 2",
        spec.span,
        spec.crash_ratio,
        match &spec.far_gap {
            FarGapExpect::Exact(r) => format!("far gap {r}"),
            FarGapExpect::MoreThanHalf => "far gap > 1/2".to_string(),
            FarGapExpect::OffSignature => "far gap off-signature".to_string(),
        },
    );
    let fail = |observed: String, rounds: u64| CaseReport {
        id: format!("crash-geometry({})", spec.id),
        expected: expected.clone(),
        observed,
        rounds,
        pass: false,
    };

    let mut sim = Simulation::new(
        Configuration::new(robots),
        AlgorithmKind::Suig,
        Scheduler::Fsync,
        MovementAdversary::rigid(),
    )
    .with_round_cap(4);
    if let Err(err) = sim.step() {
        return fail(format!("engine error: {err}"), 0);
    }

    // All points stay on the x-axis; sort occupancy West to East.
    let occupied = sim.config.occupied_points();
    if occupied.len() != 3 {
        return fail(format!("{} occupied points after round 1", occupied.len()), 1);
    }
    let xs: Vec<FieldScalar> = occupied.iter().map(|p| p.x.clone()).collect();
    if *occupied.last().unwrap() != crash_point {
        return fail("crash is not the East extremity".to_string(), 1);
    }
    let span = &xs[2] - &xs[0];
    let crash_gap = &xs[2] - &xs[1];
    let far_gap = &xs[1] - &xs[0];
    let span_ok = span == FieldScalar::from_rational(spec.span.clone());
    let crash_ratio = &crash_gap / &span;
    let far_ratio = &far_gap / &span;
    let crash_ok = crash_ratio == FieldScalar::from_rational(spec.crash_ratio.clone());
    let half = FieldScalar::from_rational(ratio(1, 2));
    let far_ok = match &spec.far_gap {
        FarGapExpect::Exact(r) => far_ratio == FieldScalar::from_rational(r.clone()),
        FarGapExpect::MoreThanHalf => far_ratio > half,
        FarGapExpect::OffSignature => true,
    } && !signature_ratios().contains(&far_ratio);

    // Every correct robot must now classify its view as a move onto the
    // crash extremity, expressed in its own frame.
    let mut views_ok = true;
    for (i, robot) in sim.config.robots.iter().enumerate() {
        if robot.crashed {
            continue;
        }
        let view = observe(&sim.config, i);
        let local_crash = robot.frame.to_local(&crash_point.sub(&robot.position));
        match classify_view(&view) {
            Ok(Phase::Text(p)) if p == local_crash => {}
            _ => {
                views_ok = false;
                break;
            }
        }
    }

    if let Err(err) = sim.step() {
        return fail(format!("engine error: {err}"), 1);
    }
    let gathered_at_crash =
        sim.config.is_gathered() && sim.config.occupied_points()[0] == crash_point;

    let observed = format!(
        "span {}, crash gap {}, far gap {}, views {}, gathered {}",
        span,
        crash_ratio,
        far_ratio,
        if views_ok { "name the crash" } else { "diverge" },
        if gathered_at_crash { "in 2" } else { "missed" },
    );
    CaseReport {
        id: format!("crash-geometry({})", spec.id),
        expected,
        observed,
        rounds: 2,
        pass: span_ok && crash_ok && far_ok && views_ok && gathered_at_crash,
    }
}

// ---------------------------------------------------------------------------
// Trace monitors
// ---------------------------------------------------------------------------

/// Exact test of sqrt(x_sq) + c <= sqrt(y_sq) for nonnegative inputs:
/// squaring twice, with the remainder sign guarding the first square.
pub fn sqrt_plus_le(x_sq: &FieldScalar, c: &Rational, y_sq: &FieldScalar) -> bool {
    let c_sq = FieldScalar::from_rational(c * c);
    let rem = y_sq - x_sq - &c_sq;
    if rem.sign() < 0 {
        return false;
    }
    let four = FieldScalar::from_rational(rat(4));
    &rem * &rem >= four * c_sq * x_sq.clone()
}

/// Squared inter-robot distances across a two-robot trace: the initial
/// state followed by one entry per executed round.
fn pair_distance_track(trace: &Trace) -> Result<Vec<FieldScalar>, String> {
    if trace.initial.len() != 2 {
        return Err(format!(
            "contraction monitor needs 2 robots, trace has {}",
            trace.initial.len()
        ));
    }
    let mut track = vec![dist_sq(&trace.initial[0], &trace.initial[1])];
    for round in &trace.rounds {
        if round.positions.len() != 2 {
            return Err(format!("round {}: positions length changed", round.round));
        }
        track.push(dist_sq(&round.positions[0], &round.positions[1]));
    }
    Ok(track)
}

/// Two-round contraction: while the distance is at least the movement
/// floor delta, d(t+2) <= d(t) - min(delta, d(t)/2), checked in exact
/// squared form.
pub fn monitor_contraction(trace: &Trace, delta: &Rational) -> Result<(), String> {
    let track = pair_distance_track(trace)?;
    let delta_sq = FieldScalar::from_rational(delta * delta);
    for t in 0..track.len().saturating_sub(2) {
        let d_sq = &track[t];
        if *d_sq < delta_sq {
            break;
        }
        let next_sq = &track[t + 2];
        // d - min(delta, d/2) is d/2 when d <= 2*delta, d - delta
        // otherwise; compare in squared form in both branches.
        let four_delta_sq = &delta_sq * &FieldScalar::from_rational(rat(4));
        let ok = if *d_sq <= four_delta_sq {
            let quarter = FieldScalar::from_rational(ratio(1, 4));
            *next_sq <= d_sq * &quarter
        } else {
            sqrt_plus_le(next_sq, delta, d_sq)
        };
        if !ok {
            return Err(format!(
                "contraction failed at round {t}: d^2(t)={d_sq}, d^2(t+2)={next_sq}, delta={delta}"
            ));
        }
    }
    Ok(())
}

/// Identity-frame level of a two-point state, if the state has exactly
/// two occupied points.
fn state_level(points: &[Point2]) -> Option<i64> {
    let mut occupied: Vec<&Point2> = points.iter().collect();
    occupied.sort_by(|a, b| a.lex_cmp(b));
    occupied.dedup();
    if occupied.len() != 2 {
        return None;
    }
    level_of_sq(&dist_sq(occupied[0], occupied[1])).ok()
}

/// Maximum level increase between consecutive two-point states. One
/// round moves each robot at most the full separation, so the distance
/// shrinks by at most a known constant factor and the level of the
/// separation can climb by only a bounded amount.
pub const LEVEL_JUMP_LIMIT: i64 = 7;

/// Between consecutive two-point states, the global separation level
/// may rise by at most LEVEL_JUMP_LIMIT.
pub fn monitor_level_jump(trace: &Trace) -> Result<(), String> {
    let mut states: Vec<(u64, Option<i64>)> = vec![(0, state_level(&trace.initial))];
    for round in &trace.rounds {
        states.push((round.round, state_level(&round.positions)));
    }
    let mut prev: Option<(u64, i64)> = None;
    for (round, level) in states {
        if let Some(level) = level {
            if let Some((prev_round, prev_level)) = prev {
                if round == prev_round + 1 && level > prev_level + LEVEL_JUMP_LIMIT {
                    return Err(format!(
                        "level jumped {prev_level} -> {level} across round {round}"
                    ));
                }
            }
            prev = Some((round, level));
        } else {
            prev = None;
        }
    }
    Ok(())
}

/// Every position after a round must lie inside the convex hull of the
/// positions before it: all destinations are convex combinations of
/// observed points, and stopping short stays on the segment.
pub fn monitor_hull(trace: &Trace) -> Result<(), String> {
    let mut prev = trace.initial.clone();
    for round in &trace.rounds {
        let hull = convex_hull(&prev);
        for (i, p) in round.positions.iter().enumerate() {
            if !point_in_hull(p, &hull) {
                return Err(format!(
                    "round {}: robot {i} left the previous hull",
                    round.round
                ));
            }
        }
        prev = round.positions.clone();
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Round-complexity bound
// ---------------------------------------------------------------------------

/// Round-complexity constants, frozen after one calibration sweep over
/// seeded instances and enforced exactly from then on.
pub const BOUND_C1: i64 = 4;
pub const BOUND_C2: i64 = 8;

pub fn ceil_isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let r = (n as u64).isqrt() as i64;
    if r * r < n {
        r + 1
    } else {
        r
    }
}

/// Verdict of the two-robot round-complexity bound on one run.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub level_spread: i64,
    pub lowest_level: i64,
    pub rounds: u64,
    #[serde(with = "crate::scalar::serde_rational")]
    pub bound: Rational,
    pub pass: bool,
}

/// Check rounds <= c1 * (spread^2 + ceil(sqrt(max(lowest, 0)))) + c2
/// against a gathered crash-free run from a two-point start. Any other
/// kind of run yields an inapplicable verdict rather than a failure.
pub fn check_complexity_bound(
    config: &Configuration,
    trace: &Trace,
    c1: &Rational,
    c2: &Rational,
) -> BoundCheck {
    let inapplicable = |reason: &str| BoundCheck {
        applicable: false,
        reason: Some(reason.to_string()),
        level_spread: 0,
        lowest_level: 0,
        rounds: 0,
        bound: rat(0),
        pass: false,
    };
    if config.crash_position().is_some() {
        return inapplicable("crash present: the bound covers crash-free runs");
    }
    if config.occupied_points().len() != 2 {
        return inapplicable("needs a two-point start");
    }
    let rounds = match &trace.verdict {
        RunOutcome::Gathered { round, .. } => *round,
        RunOutcome::RoundCapReached { .. } => return inapplicable("run did not gather"),
    };
    let spread = match delta_level(config) {
        Ok(s) => s,
        Err(_) => return inapplicable("initial levels unavailable"),
    };
    let low = lowest_level(config).unwrap_or(0).max(0);
    let bound = c1 * rat(spread * spread + ceil_isqrt(low)) + c2;
    let pass = Rational::from_integer(rounds.into()) <= bound;
    BoundCheck {
        applicable: true,
        reason: None,
        level_spread: spread,
        lowest_level: low,
        rounds,
        bound,
        pass,
    }
}

// ---------------------------------------------------------------------------
// Impossibility demonstration
// ---------------------------------------------------------------------------

/// Summary of an adversarial-scheduler run against a line algorithm
/// lifted to the plane.
#[derive(Debug, Clone, Serialize)]
pub struct ImpossibilityReport {
    pub algorithm: String,
    pub robots: usize,
    pub horizon: u64,
    pub rounds_executed: u64,
    pub gathered: bool,
    /// How often each scheduler rule fired; index 0 is the fallback for
    /// configurations outside the two-group regime.
    pub rule_counts: [u64; 5],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fairness: Option<FairnessReport>,
}

/// Run `per_point` robots on each of two unit-separated points against
/// the gathering-prevention scheduler and report whether they ever
/// gathered within the horizon.
pub fn demo_impossibility(
    algorithm: AlgorithmKind,
    per_point: usize,
    horizon: u64,
) -> Result<(ImpossibilityReport, Trace), EngineError> {
    let mut robots = Vec::new();
    for _ in 0..per_point {
        robots.push(axis_robot(rat(0), rat(1), false));
    }
    for _ in 0..per_point {
        robots.push(axis_robot(rat(1), rat(1), false));
    }
    let total = robots.len();
    let mut sim = Simulation::new(
        Configuration::new(robots),
        algorithm,
        Scheduler::SsyncImpossibility,
        MovementAdversary::rigid(),
    )
    .with_round_cap(horizon)
    // Coordinates gain a few bits per halving round; give the watchdog
    // room for the full horizon.
    .with_bit_cap(64 * horizon.max(1_000));
    let trace = sim.run()?;
    let mut rule_counts = [0u64; 5];
    for round in &trace.rounds {
        if let Some(rule) = round.rule {
            rule_counts[rule as usize] += 1;
        }
    }
    let report = ImpossibilityReport {
        algorithm: algorithm.name().to_string(),
        robots: total,
        horizon,
        rounds_executed: trace.rounds.len() as u64,
        gathered: trace.verdict.is_gathered(),
        rule_counts,
        fairness: trace.fairness.clone(),
    };
    Ok((report, trace))
}

// ---------------------------------------------------------------------------
// One-dimensional reference run
// ---------------------------------------------------------------------------

/// One robot's decision inside a one-dimensional reference round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineStep {
    pub robot: usize,
    pub side: Side,
    pub level: i64,
    pub fraction: Rational,
}

/// Synchronous rigid run of the level-residue rule directly on a line.
/// Each robot has a signed unit mapping global displacements into its
/// own measurement scale; a negative unit faces the robot the other
/// way. Returns the per-round decisions and whether the pair met.
pub fn line_suir_run(
    mut coords: [FieldScalar; 2],
    units: [FieldScalar; 2],
    cap: u64,
) -> Result<(Vec<[LineStep; 2]>, bool), AlgoError> {
    assert!(
        !units[0].is_zero() && !units[1].is_zero(),
        "line run needs nonzero units"
    );
    let rule = SuirLine;
    let mut rounds = Vec::new();
    for _ in 0..cap {
        if coords[0] == coords[1] {
            return Ok((rounds, true));
        }
        let mut steps = Vec::with_capacity(2);
        let mut fractions = Vec::with_capacity(2);
        for i in 0..2 {
            let toward = &coords[1 - i] - &coords[i];
            let local = &toward * &units[i];
            let side = if local.sign() > 0 {
                Side::Left
            } else {
                Side::Right
            };
            let gap_sq = &local * &local;
            let level = level_of_sq(&gap_sq)?;
            let fraction = match rule.decide(side, &gap_sq)? {
                LineDecision::Fraction(f) => f,
                LineDecision::Stay => rat(0),
            };
            steps.push(LineStep {
                robot: i,
                side,
                level,
                fraction: fraction.clone(),
            });
            fractions.push(fraction);
        }
        let gap = &coords[1] - &coords[0];
        let new0 = &coords[0] + &(&gap * &FieldScalar::from_rational(fractions[0].clone()));
        let new1 = &coords[1] - &(&gap * &FieldScalar::from_rational(fractions[1].clone()));
        coords[0] = new0;
        coords[1] = new1;
        rounds.push([steps.remove(0), steps.remove(0)]);
    }
    let met = coords[0] == coords[1];
    Ok((rounds, met))
}

// ---------------------------------------------------------------------------
// Analytic progress inequality
// ---------------------------------------------------------------------------

/// The two-robot progress inequality behind the contraction monitor:
/// if the robots start d apart, one travels x with
/// min(delta, d/2) <= x <= d/2, and the other travels y with
/// 0 <= y <= d toward it, the new separation |d - x - y| is at most
/// d - min(delta, d/2).
pub fn lemma_middle_progress(d: &Rational, x: &Rational, y: &Rational, delta: &Rational) -> bool {
    let lhs = (d - x - y).abs();
    let half = d / rat(2);
    let floor = if *delta < half { delta.clone() } else { half };
    lhs <= d - floor
}

// ---------------------------------------------------------------------------
// Aggregate report
// ---------------------------------------------------------------------------

/// Full case-table run, as consumed by the command-line `verify` mode.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub common: Vec<CaseReport>,
    pub opposite: Vec<CaseReport>,
    pub crash: Vec<CaseReport>,
    pub crash_geometry: Vec<CaseReport>,
    pub all_pass: bool,
}

pub fn run_verification() -> VerificationReport {
    let common = verify_suir_common();
    let opposite = verify_suir_opposite();
    let crash = verify_suir_crash();
    let crash_geometry = verify_crash_geometry();
    let all = all_pass(&common) && all_pass(&opposite) && all_pass(&crash) && all_pass(&crash_geometry);
    VerificationReport {
        common,
        opposite,
        crash,
        crash_geometry,
        all_pass: all,
    }
}

// ===========================================================================
// Tests
// ===========================================================================

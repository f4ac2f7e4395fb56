//! Round execution: schedulers, the non-rigid movement adversary, crash
//! enforcement, and deterministic trace production.
//!
//! A round is: pick an activation set, let every activated robot look
//! and compute a destination, then move all of them simultaneously with
//! the adversary choosing stop points along the commanded segments.
//! Everything is exact, so replaying a scenario with the same seeds
//! reproduces the trace byte for byte.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algo::{classify_view, AlgoError, AlgorithmKind};
use crate::geometry::{smallest_enclosing_circle, Point2};
use crate::model::{local_level, observe, side_of, Configuration, Side};
use crate::scalar::{rat, FieldScalar, Rational};

use num_traits::{One, Signed};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Algo(#[from] AlgoError),
    #[error("scheduler produced an empty activation set at round {0}")]
    EmptyActivation(u64),
    #[error(
        "coordinate bit complexity {bits} exceeds the cap {cap} at round {round}; \
         raise the cap to continue this run"
    )]
    BitComplexityExceeded { round: u64, bits: u64, cap: u64 },
}

/// Denominator exponent for adversary stop fractions: all random and
/// fallback fractions are multiples of 2^-16, keeping coordinates in
/// the field and runs replayable.
const FRACTION_BITS: u32 = 16;

/// How the adversary interrupts commanded moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MovementPolicy {
    /// Every robot always reaches its destination.
    Rigid,
    /// Every move is cut as short as the guarantee allows.
    MinProgress,
    /// Stop fractions drawn from a seeded generator, within the
    /// admissible range.
    SeededRandom(u64),
    /// Explicit stop fractions per round then per robot index; missing
    /// entries mean "reach the destination". Fractions outside the
    /// admissible range are raised to the minimum the guarantee allows.
    Scripted(Vec<Vec<Rational>>),
}

/// The non-rigid movement adversary: for a commanded segment of length
/// L, the realized travel s satisfies s = L if L <= delta, and
/// s in [delta, L] otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MovementAdversary {
    pub policy: MovementPolicy,
    /// Minimum guaranteed travel, in global units. Must be positive.
    pub delta: Rational,
}

impl MovementAdversary {
    pub fn rigid() -> MovementAdversary {
        MovementAdversary {
            policy: MovementPolicy::Rigid,
            // Rigid moves always complete; delta is irrelevant but kept
            // positive to satisfy the type invariant.
            delta: Rational::one(),
        }
    }

    pub fn min_progress(delta: Rational) -> MovementAdversary {
        MovementAdversary {
            policy: MovementPolicy::MinProgress,
            delta,
        }
    }

    pub fn seeded(seed: u64, delta: Rational) -> MovementAdversary {
        MovementAdversary {
            policy: MovementPolicy::SeededRandom(seed),
            delta,
        }
    }

    pub fn scripted(script: Vec<Vec<Rational>>, delta: Rational) -> MovementAdversary {
        MovementAdversary {
            policy: MovementPolicy::Scripted(script),
            delta,
        }
    }

    fn delta_sq(&self) -> FieldScalar {
        FieldScalar::from_rational(&self.delta * &self.delta)
    }
}

/// Smallest m in [1, 2^FRACTION_BITS] whose squared fraction of l_sq
/// reaches delta_sq, by binary search over exact sign tests.
/// Pre: delta_sq < l_sq, so m = 2^FRACTION_BITS always qualifies.
fn min_fraction_numerator(l_sq: &FieldScalar, delta_sq: &FieldScalar) -> u64 {
    let full: u64 = 1 << FRACTION_BITS;
    let scaled_delta = delta_sq.mul_rat(&rat(1i64 << (2 * FRACTION_BITS)));
    let qualifies = |m: u64| l_sq.mul_rat(&rat((m * m) as i64)) >= scaled_delta;
    let (mut lo, mut hi) = (1u64, full);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if qualifies(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// The fraction realizing travel exactly delta when the segment length
/// is in the field, else the smallest dyadic fraction with travel
/// >= delta. Pre: delta_sq < l_sq.
fn min_progress_fraction(l_sq: &FieldScalar, delta: &Rational) -> FieldScalar {
    if let Some(l) = l_sq.sqrt_in_field() {
        // Exact: travel = (delta / L) * L = delta.
        &FieldScalar::from_rational(delta.clone()) / &l
    } else {
        let delta_sq = FieldScalar::from_rational(delta * delta);
        let m = min_fraction_numerator(l_sq, &delta_sq);
        FieldScalar::from_rational(Rational::new(m.into(), (1u64 << FRACTION_BITS).into()))
    }
}

/// Applies the movement adversary to one commanded move, returning the
/// exact stop point on the segment [from, to].
///
/// Rigid reaches `to`; MinProgress stops at distance exactly
/// min(delta, L) where the segment length L is representable, and at
/// the smallest admissible dyadic fraction otherwise; SeededRandom
/// draws a dyadic fraction from the admissible range; Scripted looks up
/// round/robot in its table (missing entries reach `to`) and raises
/// out-of-range fractions to the admissible floor.
pub fn resolve_move(
    from: &Point2,
    to: &Point2,
    adversary: &MovementAdversary,
    rng: &mut ChaCha8Rng,
    round: u64,
    robot: usize,
) -> Point2 {
    let seg = to.sub(from);
    let l_sq = seg.norm_sq();
    if l_sq.is_zero() {
        return from.clone();
    }
    let delta_sq = adversary.delta_sq();
    // Within delta of the target: the guarantee forces completion.
    let short = l_sq <= delta_sq;
    match &adversary.policy {
        MovementPolicy::Rigid => to.clone(),
        MovementPolicy::MinProgress => {
            if short {
                to.clone()
            } else {
                from.add(&seg.scale(&min_progress_fraction(&l_sq, &adversary.delta)))
            }
        }
        MovementPolicy::SeededRandom(_) => {
            if short {
                return to.clone();
            }
            let full: u64 = 1 << FRACTION_BITS;
            let m_lo = min_fraction_numerator(&l_sq, &delta_sq);
            let m = rng.gen_range(m_lo..=full);
            if m == full {
                to.clone()
            } else {
                from.add(&seg.scale_rat(&Rational::new(m.into(), full.into())))
            }
        }
        MovementPolicy::Scripted(script) => {
            if short {
                return to.clone();
            }
            let f = script
                .get(round as usize)
                .and_then(|row| row.get(robot))
                .cloned();
            match f {
                None => to.clone(),
                Some(f) if f >= Rational::one() => to.clone(),
                Some(f) => {
                    let admissible = f.is_positive()
                        && FieldScalar::from_rational(&f * &f) * l_sq.clone() >= delta_sq;
                    if admissible {
                        from.add(&seg.scale_rat(&f))
                    } else {
                        from.add(&seg.scale(&min_progress_fraction(&l_sq, &adversary.delta)))
                    }
                }
            }
        }
    }
}

/// Which robots wake up each round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scheduler {
    /// Every correct robot, every round.
    Fsync,
    /// Exactly one correct robot per round, cycling in index order.
    SsyncRoundRobin,
    /// A uniformly random nonempty subset of the correct robots.
    SsyncSeededRandom(u64),
    /// The four-rule adversarial scheduler that defeats rendezvous.
    SsyncImpossibility,
}

impl Scheduler {
    pub fn is_ssync(&self) -> bool {
        !matches!(self, Scheduler::Fsync)
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Scheduler::SsyncSeededRandom(seed) => Some(*seed),
            _ => None,
        }
    }
}

/// The adversarial activation rule for a two-robot system, applied to
/// the pending global destinations. `designated` picks the robot the
/// rules call r; the other is r'. Returns the activation set and the
/// rule that fired:
/// 1. r is dictated to stay: activate only r.
/// 2. r moves to a point other than r': activate only r.
/// 3. r moves onto r' and r' moves: activate both.
/// 4. otherwise (r moves onto an idle r'): activate only r'.
pub fn impossibility_schedule(
    positions: [&Point2; 2],
    commands: [&Point2; 2],
    designated: usize,
) -> (Vec<usize>, u8) {
    let r = designated;
    let o = 1 - designated;
    if commands[r] == positions[r] {
        (vec![r], 1)
    } else if commands[r] != positions[o] {
        (vec![r], 2)
    } else if commands[o] != positions[o] {
        (vec![r, o], 3)
    } else {
        (vec![o], 4)
    }
}

/// One activated robot's round: what it saw, what it decided, where the
/// adversary let it stop. Points are global.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobotRecord {
    pub robot: usize,
    pub view_points: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub level: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub side: Option<Side>,
    pub phase: String,
    pub command: Point2,
    pub stop: Point2,
}

/// One executed round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u64,
    pub activated: Vec<usize>,
    /// Which impossibility rule fired (1-4), if that scheduler ran the
    /// round; 0 marks its fallback on configurations outside the
    /// two-group regime.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rule: Option<u8>,
    pub robots: Vec<RobotRecord>,
    /// All robot positions after the round, by robot index.
    pub positions: Vec<Point2>,
}

/// Why a run ended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum RunOutcome {
    Gathered { point: Point2, round: u64 },
    RoundCapReached { rounds: u64 },
}

impl RunOutcome {
    pub fn is_gathered(&self) -> bool {
        matches!(self, RunOutcome::Gathered { .. })
    }
}

/// Maximum activation starvation observed per robot: the longest run of
/// executed rounds in which the robot was correct but never activated.
/// Crashed robots report no gap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FairnessReport {
    pub rounds: u64,
    pub per_robot: Vec<Option<u64>>,
    pub max_gap: Option<u64>,
}

/// A full deterministic run record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub scenario_digest: String,
    pub algorithm: String,
    pub initial: Vec<Point2>,
    pub rounds: Vec<RoundRecord>,
    pub verdict: RunOutcome,
    /// Attached to every SSYNC trace; FSYNC has no starvation by
    /// construction.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fairness: Option<FairnessReport>,
}

#[derive(Serialize)]
struct HeaderLine<'a> {
    record: &'static str,
    digest: &'a str,
    algorithm: &'a str,
    robots: usize,
    initial: &'a [Point2],
}

#[derive(Serialize)]
struct RoundLine<'a> {
    record: &'static str,
    #[serde(flatten)]
    body: &'a RoundRecord,
}

#[derive(Serialize)]
struct VerdictLine<'a> {
    record: &'static str,
    verdict: &'a RunOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    fairness: &'a Option<FairnessReport>,
}

impl Trace {
    /// One JSON object per line: a header, each round, then the verdict.
    pub fn write_jsonl(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        let header = HeaderLine {
            record: "header",
            digest: &self.scenario_digest,
            algorithm: &self.algorithm,
            robots: self.initial.len(),
            initial: &self.initial,
        };
        writeln!(out, "{}", serde_json::to_string(&header)?)?;
        for round in &self.rounds {
            let line = RoundLine {
                record: "round",
                body: round,
            };
            writeln!(out, "{}", serde_json::to_string(&line)?)?;
        }
        let verdict = VerdictLine {
            record: "verdict",
            verdict: &self.verdict,
            fairness: &self.fairness,
        };
        writeln!(out, "{}", serde_json::to_string(&verdict)?)?;
        Ok(())
    }

    pub fn to_jsonl_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }

    /// Per-round summary: occupied-point count, squared SEC diameter,
    /// min/max level over activated robots, and their phase tags.
    pub fn write_csv_summary(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        writeln!(
            out,
            "round,occupied,sec_diameter_sq,min_level,max_level,phases"
        )?;
        let mut write_row = |round: u64, positions: &[Point2], robots: &[RobotRecord]| {
            let mut owned: Vec<Point2> = positions.to_vec();
            owned.sort_by(|a, b| a.lex_cmp(b));
            owned.dedup();
            let diameter_sq = smallest_enclosing_circle(&owned)
                .map(|c| c.radius_sq.mul_rat(&rat(4)))
                .unwrap_or_else(|_| FieldScalar::zero());
            let levels: Vec<i64> = robots.iter().filter_map(|r| r.level).collect();
            let (min_level, max_level) = match (levels.iter().min(), levels.iter().max()) {
                (Some(lo), Some(hi)) => (lo.to_string(), hi.to_string()),
                _ => (String::new(), String::new()),
            };
            let phases: Vec<&str> = robots.iter().map(|r| r.phase.as_str()).collect();
            writeln!(
                out,
                "{},{},{},{},{},{}",
                round,
                owned.len(),
                diameter_sq,
                min_level,
                max_level,
                phases.join("|")
            )
        };
        write_row(0, &self.initial, &[])?;
        for round in &self.rounds {
            write_row(round.round, &round.positions, &round.robots)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv_summary(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("CSV is UTF-8")
    }
}

/// Info computed for a robot that looked this round.
struct Decision {
    robot: usize,
    view_points: usize,
    level: Option<i64>,
    side: Option<Side>,
    phase: String,
    command: Point2,
}

/// A sequential round loop over one configuration.
pub struct Simulation {
    pub config: Configuration,
    pub algorithm: AlgorithmKind,
    pub scheduler: Scheduler,
    pub adversary: MovementAdversary,
    round_cap: u64,
    bit_cap: u64,
    digest: String,
    sched_rng: ChaCha8Rng,
    adv_rng: ChaCha8Rng,
    rr_cursor: usize,
}

impl Simulation {
    pub fn new(
        config: Configuration,
        algorithm: AlgorithmKind,
        scheduler: Scheduler,
        adversary: MovementAdversary,
    ) -> Simulation {
        let sched_seed = scheduler.seed().unwrap_or(0);
        let adv_seed = match adversary.policy {
            MovementPolicy::SeededRandom(seed) => seed,
            _ => 0,
        };
        Simulation {
            config,
            algorithm,
            scheduler,
            adversary,
            round_cap: 10_000,
            bit_cap: 1_000_000,
            digest: String::new(),
            sched_rng: ChaCha8Rng::seed_from_u64(sched_seed),
            adv_rng: ChaCha8Rng::seed_from_u64(adv_seed),
            rr_cursor: 0,
        }
    }

    pub fn with_round_cap(mut self, cap: u64) -> Simulation {
        self.round_cap = cap;
        self
    }

    pub fn with_bit_cap(mut self, cap: u64) -> Simulation {
        self.bit_cap = cap;
        self
    }

    pub fn with_digest(mut self, digest: impl Into<String>) -> Simulation {
        self.digest = digest.into();
        self
    }

    pub fn round_cap(&self) -> u64 {
        self.round_cap
    }

    fn correct_indices(&self) -> Vec<usize> {
        self.config
            .robots
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.crashed)
            .map(|(i, _)| i)
            .collect()
    }

    fn decide(&self, robot: usize) -> Result<Decision, EngineError> {
        let view = observe(&self.config, robot);
        let (level, side) = if view.len() == 2 {
            (
                Some(local_level(&view).map_err(AlgoError::Model)?),
                Some(side_of(&view).map_err(AlgoError::Model)?),
            )
        } else {
            (None, None)
        };
        let phase = classify_view(&view)?.to_string();
        let me = &self.config.robots[robot];
        let local_dest = self.algorithm.decide(&view)?.destination;
        let command = me.position.add(&me.frame.from_local(&local_dest));
        Ok(Decision {
            robot,
            view_points: view.len(),
            level,
            side,
            phase,
            command,
        })
    }

    /// Activation set for the adversarial scheduler. Correct robots are
    /// grouped by occupied point; the rules run on the two groups with
    /// the designated group being robot 0's. Configurations outside the
    /// regime (a crash, more than two groups, or a group whose members
    /// disagree on a command) fall back to activating everyone, marked
    /// rule 0.
    fn impossibility_activation(
        &self,
        correct: &[usize],
        decisions: &[Decision],
    ) -> (Vec<usize>, u8) {
        let fallback = (correct.to_vec(), 0u8);
        if correct.len() != self.config.robots.len() {
            return fallback;
        }
        let occupied = self.config.occupied_points();
        if occupied.len() != 2 {
            return fallback;
        }
        let home = &self.config.robots[0].position;
        let other_point = occupied
            .iter()
            .find(|p| *p != home)
            .expect("two occupied points");
        let mut groups: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for (k, &i) in correct.iter().enumerate() {
            debug_assert_eq!(decisions[k].robot, i);
            let at_home = self.config.robots[i].position == *home;
            groups[if at_home { 0 } else { 1 }].push(k);
        }
        let mut reps: Vec<&Point2> = Vec::new();
        for group in &groups {
            let first = &decisions[group[0]].command;
            if group.iter().any(|&k| &decisions[k].command != first) {
                return fallback;
            }
            reps.push(first);
        }
        let (chosen, rule) =
            impossibility_schedule([home, other_point], [reps[0], reps[1]], 0);
        let mut activated: Vec<usize> = chosen
            .into_iter()
            .flat_map(|g| groups[g].iter().map(|&k| decisions[k].robot))
            .collect();
        activated.sort_unstable();
        (activated, rule)
    }

    /// Executes one round and returns its record.
    pub fn step(&mut self) -> Result<RoundRecord, EngineError> {
        let round = self.config.round;
        let correct = self.correct_indices();
        if correct.is_empty() {
            return Err(EngineError::EmptyActivation(round));
        }

        let (activated, rule, decisions) = match &self.scheduler {
            Scheduler::Fsync => (correct.clone(), None, None),
            Scheduler::SsyncRoundRobin => {
                let pick = correct[self.rr_cursor % correct.len()];
                self.rr_cursor += 1;
                (vec![pick], None, None)
            }
            Scheduler::SsyncSeededRandom(_) => {
                let mut picked = Vec::new();
                while picked.is_empty() {
                    picked = correct
                        .iter()
                        .copied()
                        .filter(|_| self.sched_rng.gen::<bool>())
                        .collect();
                }
                (picked, None, None)
            }
            Scheduler::SsyncImpossibility => {
                let all: Vec<Decision> = correct
                    .iter()
                    .map(|&i| self.decide(i))
                    .collect::<Result<_, _>>()?;
                let (activated, rule) = self.impossibility_activation(&correct, &all);
                (activated, Some(rule), Some(all))
            }
        };
        if activated.is_empty() {
            return Err(EngineError::EmptyActivation(round));
        }

        let decisions: Vec<Decision> = match decisions {
            Some(all) => all
                .into_iter()
                .filter(|d| activated.contains(&d.robot))
                .collect(),
            None => activated
                .iter()
                .map(|&i| self.decide(i))
                .collect::<Result<_, _>>()?,
        };

        let mut robots = Vec::with_capacity(decisions.len());
        for d in decisions {
            let from = &self.config.robots[d.robot].position;
            let stop = resolve_move(
                from,
                &d.command,
                &self.adversary,
                &mut self.adv_rng,
                round,
                d.robot,
            );
            robots.push(RobotRecord {
                robot: d.robot,
                view_points: d.view_points,
                level: d.level,
                side: d.side,
                phase: d.phase,
                command: d.command,
                stop,
            });
        }
        for rec in &robots {
            self.config.robots[rec.robot].position = rec.stop.clone();
        }
        self.config.round += 1;

        let positions: Vec<Point2> = self
            .config
            .robots
            .iter()
            .map(|r| r.position.clone())
            .collect();
        let bits = positions
            .iter()
            .map(|p| p.x.bit_complexity().max(p.y.bit_complexity()))
            .max()
            .unwrap_or(0);
        if bits > self.bit_cap {
            return Err(EngineError::BitComplexityExceeded {
                round: self.config.round,
                bits,
                cap: self.bit_cap,
            });
        }

        Ok(RoundRecord {
            round: self.config.round,
            activated,
            rule,
            robots,
            positions,
        })
    }

    /// Iterates rounds until gathered or the round cap, producing the
    /// full trace. Gathering is absorbing, so the loop stops the first
    /// time a single point is occupied.
    pub fn run(&mut self) -> Result<Trace, EngineError> {
        let initial: Vec<Point2> = self
            .config
            .robots
            .iter()
            .map(|r| r.position.clone())
            .collect();
        let n = self.config.robots.len();
        let mut gap_now: Vec<u64> = vec![0; n];
        let mut gap_max: Vec<u64> = vec![0; n];
        let mut rounds = Vec::new();
        let verdict = loop {
            if self.config.is_gathered() {
                break RunOutcome::Gathered {
                    point: self.config.robots[0].position.clone(),
                    round: self.config.round,
                };
            }
            if self.config.round >= self.round_cap {
                break RunOutcome::RoundCapReached {
                    rounds: self.config.round,
                };
            }
            let record = self.step()?;
            for i in 0..n {
                if self.config.robots[i].crashed {
                    continue;
                }
                if record.activated.contains(&i) {
                    gap_now[i] = 0;
                } else {
                    gap_now[i] += 1;
                    gap_max[i] = gap_max[i].max(gap_now[i]);
                }
            }
            rounds.push(record);
        };
        let fairness = if self.scheduler.is_ssync() {
            let per_robot: Vec<Option<u64>> = (0..n)
                .map(|i| (!self.config.robots[i].crashed).then_some(gap_max[i]))
                .collect();
            let max_gap = per_robot.iter().flatten().copied().max();
            Some(FairnessReport {
                rounds: self.config.round,
                per_robot,
                max_gap,
            })
        } else {
            None
        };
        Ok(Trace {
            scenario_digest: self.digest.clone(),
            algorithm: self.algorithm.name().to_string(),
            initial,
            rounds,
            verdict,
            fairness,
        })
    }
}

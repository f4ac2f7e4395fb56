//! The on-disk scenario format: JSON in, validated run parameters out.
//!
//! All numeric inputs are exact: scalars are strings like `"3/8"` or
//! `"1/2+1/2*sqrt3"` (plain integers are also accepted), never floats.
//! Unknown fields are rejected so typos fail loudly.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algo::AlgorithmKind;
use crate::engine::{MovementAdversary, MovementPolicy, Scheduler, Simulation};
use crate::model::{Configuration, Robot};
use crate::scalar::{serde_rational, Rational};

use num_traits::Signed;

pub const DEFAULT_ROUND_CAP: u64 = 10_000;
pub const DEFAULT_BIT_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("scenario parse error: {0}")]
    Parse(String),
    #[error("scenario invalid:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),
}

/// A rational that serializes as an exact string (or accepts a JSON
/// integer); used where `#[serde(with)]` cannot reach, e.g. inside
/// nested containers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalText(pub Rational);

impl Serialize for RationalText {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serde_rational::serialize(&self.0, serializer)
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        serde_rational::deserialize(deserializer).map(RationalText)
    }
}

/// Scheduler selection as written in scenario files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum SchedulerSpec {
    #[default]
    Fsync,
    SsyncRoundRobin,
    SsyncSeededRandom {
        #[serde(default)]
        seed: u64,
    },
    SsyncImpossibility,
}

impl SchedulerSpec {
    pub fn to_scheduler(&self) -> Scheduler {
        match self {
            SchedulerSpec::Fsync => Scheduler::Fsync,
            SchedulerSpec::SsyncRoundRobin => Scheduler::SsyncRoundRobin,
            SchedulerSpec::SsyncSeededRandom { seed } => Scheduler::SsyncSeededRandom(*seed),
            SchedulerSpec::SsyncImpossibility => Scheduler::SsyncImpossibility,
        }
    }
}

/// Movement adversary selection as written in scenario files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, tag = "policy", rename_all = "snake_case")]
pub enum MovementSpec {
    #[default]
    Rigid,
    MinProgress {
        #[serde(with = "serde_rational")]
        delta: Rational,
    },
    SeededRandom {
        #[serde(default)]
        seed: u64,
        #[serde(with = "serde_rational")]
        delta: Rational,
    },
    Scripted {
        /// Stop fractions indexed by round then robot; missing entries
        /// complete the move.
        script: Vec<Vec<RationalText>>,
        #[serde(with = "serde_rational")]
        delta: Rational,
    },
}

impl MovementSpec {
    pub fn to_adversary(&self) -> MovementAdversary {
        match self {
            MovementSpec::Rigid => MovementAdversary::rigid(),
            MovementSpec::MinProgress { delta } => MovementAdversary::min_progress(delta.clone()),
            MovementSpec::SeededRandom { seed, delta } => {
                MovementAdversary::seeded(*seed, delta.clone())
            }
            MovementSpec::Scripted { script, delta } => MovementAdversary {
                policy: MovementPolicy::Scripted(
                    script
                        .iter()
                        .map(|row| row.iter().map(|f| f.0.clone()).collect())
                        .collect(),
                ),
                delta: delta.clone(),
            },
        }
    }

    fn delta(&self) -> Option<&Rational> {
        match self {
            MovementSpec::Rigid => None,
            MovementSpec::MinProgress { delta }
            | MovementSpec::SeededRandom { delta, .. }
            | MovementSpec::Scripted { delta, .. } => Some(delta),
        }
    }
}

/// Where a run writes its artifacts; paths are free-form and resolved
/// by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
}

/// A complete run description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub algorithm: AlgorithmKind,
    pub robots: Vec<Robot>,
    #[serde(default)]
    pub scheduler: SchedulerSpec,
    #[serde(default)]
    pub movement: MovementSpec,
    #[serde(default = "default_round_cap")]
    pub round_cap: u64,
    #[serde(default = "default_bit_cap")]
    pub bit_cap: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

fn default_round_cap() -> u64 {
    DEFAULT_ROUND_CAP
}

fn default_bit_cap() -> u64 {
    DEFAULT_BIT_CAP
}

impl Scenario {
    pub fn new(algorithm: AlgorithmKind, robots: Vec<Robot>) -> Scenario {
        Scenario {
            algorithm,
            robots,
            scheduler: SchedulerSpec::default(),
            movement: MovementSpec::default(),
            round_cap: DEFAULT_ROUND_CAP,
            bit_cap: DEFAULT_BIT_CAP,
            output: None,
        }
    }

    /// All constraint violations, each prefixed with the offending
    /// field path.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let mut problems = Vec::new();
        if self.robots.is_empty() {
            problems.push("robots: must not be empty".to_string());
        }
        if let Err(config_problems) = self.to_configuration().validate() {
            problems.extend(config_problems);
        }
        if self.round_cap < 1 {
            problems.push("round_cap: must be at least 1".to_string());
        }
        if let Some(delta) = self.movement.delta() {
            if !delta.is_positive() {
                problems.push("movement.delta: must be positive".to_string());
            }
        }
        if let MovementSpec::Scripted { script, .. } = &self.movement {
            for (i, row) in script.iter().enumerate() {
                for (j, f) in row.iter().enumerate() {
                    if f.0.is_negative() || f.0 > Rational::from_integer(1.into()) {
                        problems.push(format!(
                            "movement.script[{i}][{j}]: fraction must be in [0, 1]"
                        ));
                    }
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ScenarioError::Invalid(problems))
        }
    }

    pub fn to_configuration(&self) -> Configuration {
        Configuration::new(self.robots.clone())
    }

    /// SHA-256 of the canonical JSON encoding; identifies the scenario
    /// in traces so replays can be matched to their inputs.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(self).expect("scenario serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        let bytes = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for b in bytes {
            hex.push_str(&format!("{b:02x}"));
        }
        hex
    }

    /// A ready-to-run simulation carrying this scenario's digest.
    pub fn build_simulation(&self) -> Result<Simulation, ScenarioError> {
        self.validate()?;
        Ok(Simulation::new(
            self.to_configuration(),
            self.algorithm,
            self.scheduler.to_scheduler(),
            self.movement.to_adversary(),
        )
        .with_round_cap(self.round_cap)
        .with_bit_cap(self.bit_cap)
        .with_digest(self.digest()))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let scenario: Scenario =
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    scenario.validate()?;
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::RunOutcome;
    use crate::geometry::Point2;
    use crate::model::Frame;
    use crate::scalar::{rat, ratio};

    const MINIMAL: &str = r#"{
        "algorithm": "suir",
        "robots": [
            {"position": {"x": 0, "y": 0}, "frame": {"a": 1, "b": 0}},
            {"position": {"x": 1, "y": 0}, "frame": {"a": 1, "b": 0}}
        ]
    }"#;

    fn two_robots() -> Vec<Robot> {
        vec![
            Robot {
                position: Point2::from_ints(0, 0),
                frame: Frame::identity(),
                crashed: false,
            },
            Robot {
                position: Point2::from_ints(1, 0),
                frame: Frame::identity(),
                crashed: false,
            },
        ]
    }

    #[test]
    fn parses_minimal_scenario_with_defaults() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert_eq!(s.algorithm, AlgorithmKind::Suir);
        assert_eq!(s.scheduler, SchedulerSpec::Fsync);
        assert_eq!(s.movement, MovementSpec::Rigid);
        assert_eq!(s.round_cap, DEFAULT_ROUND_CAP);
        assert_eq!(s.bit_cap, DEFAULT_BIT_CAP);
        assert_eq!(s.robots.len(), 2);
        assert!(!s.robots[0].crashed);
    }

    #[test]
    fn parses_full_scenario() {
        let text = r#"{
            "algorithm": "suig",
            "robots": [
                {"position": {"x": "0", "y": "0"}, "frame": {"a": "3/5", "b": "4/5", "reflect": true}, "crashed": true},
                {"position": {"x": "1/10", "y": "0"}, "frame": {"a": "2", "b": "0"}}
            ],
            "scheduler": {"kind": "ssync_seeded_random", "seed": 9},
            "movement": {"policy": "scripted", "script": [["1/2", 1], ["3/4"]], "delta": "1/100"},
            "round_cap": 500,
            "bit_cap": 4096,
            "output": {"trace": "out.jsonl", "summary": "out.csv"}
        }"#;
        let s = parse_scenario(text).unwrap();
        assert_eq!(s.algorithm, AlgorithmKind::Suig);
        assert!(s.robots[0].crashed);
        assert!(s.robots[0].frame.reflect);
        assert_eq!(s.scheduler, SchedulerSpec::SsyncSeededRandom { seed: 9 });
        match &s.movement {
            MovementSpec::Scripted { script, delta } => {
                assert_eq!(script[0][1], RationalText(rat(1)));
                assert_eq!(script[1][0], RationalText(ratio(3, 4)));
                assert_eq!(delta, &ratio(1, 100));
            }
            other => panic!("wrong movement: {other:?}"),
        }
        assert_eq!(s.round_cap, 500);
        assert_eq!(s.output.as_ref().unwrap().trace.as_deref(), Some("out.jsonl"));
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = MINIMAL.replace("\"algorithm\"", "\"algoritm\"");
        let err = parse_scenario(&text).unwrap_err();
        match err {
            ScenarioError::Parse(msg) => assert!(msg.contains("algoritm"), "{msg}"),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn rejects_two_crash_locations() {
        let mut robots = two_robots();
        robots[0].crashed = true;
        robots[1].crashed = true;
        let s = Scenario::new(AlgorithmKind::Suir, robots);
        let err = s.validate().unwrap_err();
        match err {
            ScenarioError::Invalid(problems) => {
                assert!(
                    problems.iter().any(|p| p.contains("different points")),
                    "{problems:?}"
                );
            }
            other => panic!("expected invalid, got {other}"),
        }
    }

    #[test]
    fn accepts_two_crashed_robots_at_one_point() {
        let mut robots = two_robots();
        robots[1].position = Point2::from_ints(0, 0);
        robots[0].crashed = true;
        robots[1].crashed = true;
        Scenario::new(AlgorithmKind::Suir, robots).validate().unwrap();
    }

    #[test]
    fn rejects_zero_delta_and_zero_cap_and_bad_frame() {
        let mut s = Scenario::new(AlgorithmKind::Suir, two_robots());
        s.movement = MovementSpec::MinProgress { delta: rat(0) };
        s.round_cap = 0;
        s.robots[0].frame = Frame {
            a: rat(0),
            b: rat(0),
            reflect: false,
        };
        let err = s.validate().unwrap_err();
        match err {
            ScenarioError::Invalid(problems) => {
                assert!(problems.iter().any(|p| p.contains("movement.delta")));
                assert!(problems.iter().any(|p| p.contains("round_cap")));
                assert!(problems.iter().any(|p| p.contains("robots[0].frame")));
            }
            other => panic!("expected invalid, got {other}"),
        }
    }

    #[test]
    fn rejects_out_of_range_script_fraction() {
        let mut s = Scenario::new(AlgorithmKind::Suir, two_robots());
        s.movement = MovementSpec::Scripted {
            script: vec![vec![RationalText(ratio(-1, 2))]],
            delta: ratio(1, 10),
        };
        let err = s.validate().unwrap_err();
        match err {
            ScenarioError::Invalid(problems) => {
                assert!(problems.iter().any(|p| p.contains("movement.script[0][0]")));
            }
            other => panic!("expected invalid, got {other}"),
        }
    }

    #[test]
    fn json_round_trip_preserves_scenario() {
        let mut s = Scenario::new(AlgorithmKind::LiftedSuir, two_robots());
        s.scheduler = SchedulerSpec::SsyncImpossibility;
        s.movement = MovementSpec::SeededRandom {
            seed: 3,
            delta: ratio(1, 7),
        };
        let parsed = parse_scenario(&s.to_json_pretty()).unwrap();
        assert_eq!(parsed, s);
    }

    #[test]
    fn digest_is_stable_and_sensitive() {
        let s = Scenario::new(AlgorithmKind::Suir, two_robots());
        let mut t = s.clone();
        assert_eq!(s.digest(), t.digest());
        t.round_cap += 1;
        assert_ne!(s.digest(), t.digest());
        assert_eq!(s.digest().len(), 64);
    }

    #[test]
    fn build_simulation_runs_to_rendezvous() {
        let s = parse_scenario(MINIMAL).unwrap();
        let trace = s.build_simulation().unwrap().run().unwrap();
        match trace.verdict {
            RunOutcome::Gathered { round, .. } => assert_eq!(round, 1),
            other => panic!("expected rendezvous, got {other:?}"),
        }
        assert_eq!(trace.scenario_digest, s.digest());
    }
}

//! Seeded scenario generation for sweeps and property checks.
//!
//! Instances are bivalent: the robots split across two occupied points
//! (with multiplicities), frames mix scales, rational rotations, and
//! reflections, and an optional crash marks a subset of one point's
//! robots. All randomness is dyadic or drawn from fixed rational-unit
//! direction tables, so generated scenarios stay inside the field and
//! regenerate bit-identically from their seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algo::AlgorithmKind;
use crate::geometry::Point2;
use crate::model::{Frame, Robot};
use crate::scalar::{pow2, rat, ratio, FieldScalar, Rational};
use crate::scenario::{Scenario, SchedulerSpec};

/// Movement adversary pool to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MovementChoice {
    Rigid,
    MinProgress,
    SeededRandom,
    /// Uniformly one of the three above, per scenario.
    Mixed,
}

#[derive(Debug, Clone)]
pub struct GenOptions {
    pub algorithm: AlgorithmKind,
    pub robots_min: usize,
    pub robots_max: usize,
    /// Maximum level difference across correct robots.
    pub max_level_spread: u32,
    /// Range of the base (identity-frame) level of the start distance.
    pub level_min: i64,
    pub level_max: i64,
    /// Chance (percent) that one occupied point carries crashed robots.
    pub crash_percent: u8,
    pub allow_reflect: bool,
    pub scheduler: SchedulerSpec,
    pub movement: MovementChoice,
    pub round_cap: u64,
}

impl Default for GenOptions {
    fn default() -> GenOptions {
        GenOptions {
            algorithm: AlgorithmKind::Suig,
            robots_min: 2,
            robots_max: 16,
            max_level_spread: 5,
            level_min: -8,
            level_max: 40,
            crash_percent: 50,
            allow_reflect: true,
            scheduler: SchedulerSpec::Fsync,
            movement: MovementChoice::Mixed,
            round_cap: 10_000,
        }
    }
}

impl GenOptions {
    /// Two-robot rendezvous instances (the rendezvous rule's contract).
    pub fn rendezvous() -> GenOptions {
        GenOptions {
            algorithm: AlgorithmKind::Suir,
            robots_max: 2,
            ..GenOptions::default()
        }
    }
}

/// Exact unit vectors: Pythagorean directions plus the two field
/// directions at 60 and 30 degrees.
fn unit_directions() -> Vec<Point2> {
    let half_root3 = FieldScalar::parts(0, 1, 1, 2);
    let half = FieldScalar::from_rational(ratio(1, 2));
    vec![
        Point2::from_ints(1, 0),
        Point2::from_ints(0, 1),
        Point2::new(
            FieldScalar::from_rational(ratio(3, 5)),
            FieldScalar::from_rational(ratio(4, 5)),
        ),
        Point2::new(
            FieldScalar::from_rational(ratio(5, 13)),
            FieldScalar::from_rational(ratio(12, 13)),
        ),
        Point2::new(
            FieldScalar::from_rational(ratio(8, 17)),
            FieldScalar::from_rational(ratio(15, 17)),
        ),
        Point2::new(half.clone(), half_root3.clone()),
        Point2::new(half_root3, half),
    ]
}

/// Exact rational rotations (cos, sin) available for frames.
fn rotation_table() -> Vec<(Rational, Rational)> {
    vec![
        (rat(1), rat(0)),
        (rat(0), rat(1)),
        (ratio(3, 5), ratio(4, 5)),
        (ratio(4, 5), ratio(-3, 5)),
        (ratio(5, 13), ratio(12, 13)),
        (ratio(-8, 17), ratio(15, 17)),
    ]
}

fn dyadic_in_unit(rng: &mut ChaCha8Rng, bits: u32) -> Rational {
    let den = 1u64 << bits;
    Rational::new(rng.gen_range(0..den).into(), den.into())
}

/// Deterministically generates one scenario from a seed.
pub fn generate_scenario(seed: u64, opts: &GenOptions) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(opts.robots_min..=opts.robots_max);

    // Base segment: anchor point, exact unit direction, distance with a
    // controlled identity-frame level.
    let dirs = unit_directions();
    let mut dir = dirs[rng.gen_range(0..dirs.len())].clone();
    if rng.gen::<bool>() {
        dir = Point2::new(-&dir.x, -&dir.y);
    }
    let anchor = Point2::new(
        FieldScalar::from_rational(&dyadic_in_unit(&mut rng, 3) * &rat(4) - rat(2)),
        FieldScalar::from_rational(&dyadic_in_unit(&mut rng, 3) * &rat(4) - rat(2)),
    );
    let base_level = rng.gen_range(opts.level_min..=opts.level_max);
    // d = 2^-l * (1 + eps) with eps in [0, 1/2): the level of d^2 is
    // exactly l.
    let eps = dyadic_in_unit(&mut rng, 10) / rat(2);
    let distance = &pow2(-base_level) * &(rat(1) + eps);
    let far = anchor.add(&dir.scale_rat(&distance));

    // Split robots across the two points; both sides stay occupied.
    let at_anchor = if n == 2 { 1 } else { rng.gen_range(1..n) };
    let rotations = rotation_table();
    let mut robots = Vec::with_capacity(n);
    for i in 0..n {
        let spread = rng.gen_range(0..=opts.max_level_spread) as i64;
        let scale = pow2(-spread);
        let (ca, cb) = rotations[rng.gen_range(0..rotations.len())].clone();
        let reflect = opts.allow_reflect && rng.gen::<bool>();
        let frame = Frame {
            a: &scale * &ca,
            b: &scale * &cb,
            reflect,
        };
        let position = if i < at_anchor { anchor.clone() } else { far.clone() };
        robots.push(Robot {
            position,
            frame,
            crashed: false,
        });
    }

    // Optionally crash a nonempty subset of one point's robots; the
    // other point keeps everyone correct, so correct robots remain.
    if rng.gen_range(0..100u8) < opts.crash_percent {
        let crash_at_anchor = rng.gen::<bool>();
        let side: Vec<usize> = (0..n)
            .filter(|&i| (i < at_anchor) == crash_at_anchor)
            .collect();
        if !side.is_empty() {
            let count = rng.gen_range(1..=side.len());
            for &i in side.iter().take(count) {
                robots[i].crashed = true;
            }
        }
    }

    let movement = pick_movement(&mut rng, opts, &distance);
    let mut scenario = Scenario::new(opts.algorithm, robots);
    scenario.scheduler = opts.scheduler.clone();
    scenario.movement = movement;
    scenario.round_cap = opts.round_cap;
    scenario
}

fn pick_movement(
    rng: &mut ChaCha8Rng,
    opts: &GenOptions,
    distance: &Rational,
) -> crate::scenario::MovementSpec {
    use crate::scenario::MovementSpec;
    let choice = match opts.movement {
        MovementChoice::Mixed => match rng.gen_range(0..3u8) {
            0 => MovementChoice::Rigid,
            1 => MovementChoice::MinProgress,
            _ => MovementChoice::SeededRandom,
        },
        fixed => fixed,
    };
    // delta well below the start distance so the guarantee bites but
    // every move still makes progress.
    let delta = distance * &pow2(-(rng.gen_range(1..=6) as i64));
    match choice {
        MovementChoice::Rigid => MovementSpec::Rigid,
        MovementChoice::MinProgress => MovementSpec::MinProgress { delta },
        MovementChoice::SeededRandom => MovementSpec::SeededRandom {
            seed: rng.gen(),
            delta,
        },
        MovementChoice::Mixed => unreachable!("resolved above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{delta_level, lowest_level};

    #[test]
    fn generation_is_deterministic() {
        let opts = GenOptions::default();
        for seed in 0..5 {
            assert_eq!(
                generate_scenario(seed, &opts),
                generate_scenario(seed, &opts)
            );
        }
    }

    #[test]
    fn generated_scenarios_validate_and_respect_bounds() {
        let opts = GenOptions::default();
        let mut saw_crash = false;
        let mut saw_reflect = false;
        for seed in 0..100 {
            let s = generate_scenario(seed, &opts);
            s.validate().unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert!(s.robots.len() >= 2 && s.robots.len() <= 16);
            let config = s.to_configuration();
            assert_eq!(config.occupied_points().len(), 2, "seed {seed}");
            let spread = delta_level(&config).unwrap();
            assert!(spread <= 5, "seed {seed}: spread {spread}");
            saw_crash |= s.robots.iter().any(|r| r.crashed);
            saw_reflect |= s.robots.iter().any(|r| r.frame.reflect);
            // At least one robot stays correct.
            assert!(s.robots.iter().any(|r| !r.crashed));
        }
        assert!(saw_crash, "crash branch never exercised");
        assert!(saw_reflect, "reflection branch never exercised");
    }

    #[test]
    fn base_level_lands_in_requested_range() {
        let opts = GenOptions {
            level_min: 3,
            level_max: 3,
            max_level_spread: 0,
            ..GenOptions::default()
        };
        for seed in 0..20 {
            let s = generate_scenario(seed, &opts);
            let config = s.to_configuration();
            // Spread 0 and identity-scale frames: every correct robot
            // measures the base level exactly.
            assert_eq!(lowest_level(&config).unwrap(), 3, "seed {seed}");
            assert_eq!(delta_level(&config).unwrap(), 0, "seed {seed}");
        }
    }

    #[test]
    fn rendezvous_options_make_two_robot_instances() {
        let opts = GenOptions::rendezvous();
        for seed in 0..20 {
            let s = generate_scenario(seed, &opts);
            assert_eq!(s.robots.len(), 2);
            assert_eq!(s.algorithm, AlgorithmKind::Suir);
        }
    }

    #[test]
    fn generated_instances_gather_under_fsync_rigid() {
        let opts = GenOptions {
            movement: MovementChoice::Rigid,
            crash_percent: 0,
            level_min: -2,
            level_max: 8,
            round_cap: 2_000,
            ..GenOptions::default()
        };
        for seed in 0..5 {
            let s = generate_scenario(seed, &opts);
            let trace = s.build_simulation().unwrap().run().unwrap();
            assert!(
                trace.verdict.is_gathered(),
                "seed {seed}: {:?}",
                trace.verdict
            );
        }
    }
}

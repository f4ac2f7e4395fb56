//! Exact simulation of gathering algorithms for oblivious, disoriented
//! robots under look-compute-move scheduling.
//!
//! Everything is computed over the field Q(sqrt 3) with arbitrary
//! precision rationals: positions, destinations, stop points along
//! interrupted moves, and the level machinery driving the decision
//! rules. No floating point is involved anywhere, so runs are exactly
//! reproducible and invariants can be checked with equality rather than
//! tolerances.
//!
//! The crate layers as:
//! - [`scalar`]: the field, sign tests, square roots, binary levels;
//! - [`geometry`]: points, smallest enclosing circles, collinear frames,
//!   convex hulls;
//! - [`model`]: robots, configurations, local views, sides, levels;
//! - [`algo`]: view classification and the decision rules;
//! - [`engine`]: schedulers, movement adversaries, trace production;
//! - [`scenario`]: the on-disk scenario format;
//! - [`gen`]: seeded scenario generation;
//! - [`verify`]: case-table checks, run monitors, and reference
//!   constructions used by the test suite and the CLI.

pub mod algo;
pub mod engine;
pub mod gen;
pub mod geometry;
pub mod model;
pub mod scalar;
pub mod scenario;
pub mod verify;

pub use algo::{classify_view, AlgorithmKind, MoveCommand, Phase};
pub use engine::{MovementAdversary, RunOutcome, Scheduler, Simulation, Trace};
pub use geometry::{smallest_enclosing_circle, Point2};
pub use model::{observe, Configuration, Frame, LocalView, Robot, Side};
pub use scalar::{FieldScalar, Rational};
pub use scenario::Scenario;

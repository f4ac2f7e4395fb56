//! Robots, frames, configurations and local views.
//!
//! A robot observes the world through a private similarity frame: a
//! rational rotation-scaling, optionally composed with a reflection
//! across its local x-axis. Views are sets of exact points with the
//! observer at the origin; collocated robots collapse to one point, so
//! views carry no multiplicity information.

use std::cmp::Ordering;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point2;
use crate::scalar::{level_of_sq, serde_rational, Rational, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("view does not consist of exactly two points")]
    NotTwoPointView,
    #[error("configuration does not occupy exactly two points")]
    NotTwoPointConfiguration,
    #[error("configuration has no correct robot")]
    NoCorrectRobots,
    #[error("frame has zero scale")]
    DegenerateFrame,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A private similarity frame with rational coefficients.
///
/// The linear map is `[[a, -b], [b, a]]`; when `reflect` is set the
/// result is mirrored across the local x-axis afterwards. The scale
/// factor squared is `a^2 + b^2`, so squared distances observed locally
/// are the global ones multiplied by that rational.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Frame {
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub b: Rational,
    #[serde(default)]
    pub reflect: bool,
}

impl Frame {
    pub fn identity() -> Frame {
        Frame {
            a: crate::scalar::rat(1),
            b: crate::scalar::rat(0),
            reflect: false,
        }
    }

    /// Pure scaling by a rational factor (negative values rotate by a
    /// half turn as well).
    pub fn scaling(a: Rational) -> Frame {
        Frame {
            a,
            b: crate::scalar::rat(0),
            reflect: false,
        }
    }

    pub fn scale_sq(&self) -> Rational {
        &self.a * &self.a + &self.b * &self.b
    }

    pub fn is_invertible(&self) -> bool {
        !self.scale_sq().is_zero()
    }

    /// Maps a global offset vector into this frame.
    pub fn to_local(&self, v: &Point2) -> Point2 {
        let x = &v.x.mul_rat(&self.a) - &v.y.mul_rat(&self.b);
        let y = &v.x.mul_rat(&self.b) + &v.y.mul_rat(&self.a);
        if self.reflect {
            Point2::new(x, -y)
        } else {
            Point2::new(x, y)
        }
    }

    /// Maps a local offset vector back to global coordinates.
    pub fn from_local(&self, v: &Point2) -> Point2 {
        let vy = if self.reflect { -v.y.clone() } else { v.y.clone() };
        let n = self.scale_sq();
        let x = &v.x.mul_rat(&self.a) + &vy.mul_rat(&self.b);
        let y = &vy.mul_rat(&self.a) - &v.x.mul_rat(&self.b);
        Point2::new(x.div_rat(&n), y.div_rat(&n))
    }
}

/// One robot: exact position, private frame, crash flag. Identity is the
/// index in the configuration; robots are anonymous to each other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Robot {
    pub position: Point2,
    pub frame: Frame,
    #[serde(default)]
    pub crashed: bool,
}

/// A synchronous-round snapshot of the whole swarm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub robots: Vec<Robot>,
    pub round: u64,
}

impl Configuration {
    pub fn new(robots: Vec<Robot>) -> Configuration {
        Configuration { robots, round: 0 }
    }

    /// Distinct occupied positions, lexicographically sorted.
    pub fn occupied_points(&self) -> Vec<Point2> {
        let mut pts: Vec<Point2> = self.robots.iter().map(|r| r.position.clone()).collect();
        pts.sort_by(|a, b| a.lex_cmp(b));
        pts.dedup();
        pts
    }

    pub fn is_gathered(&self) -> bool {
        self.occupied_points().len() == 1
    }

    /// The single position shared by all crashed robots, if any crashed.
    pub fn crash_position(&self) -> Option<Point2> {
        self.robots
            .iter()
            .find(|r| r.crashed)
            .map(|r| r.position.clone())
    }

    /// Crashed robots must share one position and frames must be
    /// invertible; violations are reported with robot indices.
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut problems = Vec::new();
        let mut crash_pos: Option<(usize, &Point2)> = None;
        for (i, robot) in self.robots.iter().enumerate() {
            if !robot.frame.is_invertible() {
                problems.push(format!("robots[{i}].frame: zero scale"));
            }
            if robot.crashed {
                match crash_pos {
                    None => crash_pos = Some((i, &robot.position)),
                    Some((j, p)) if p != &robot.position => {
                        problems.push(format!(
                            "robots[{i}].position: crashed robots {j} and {i} occupy different points"
                        ));
                    }
                    _ => {}
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems)
        }
    }
}

/// What one robot sees: deduplicated exact points in its own frame,
/// itself at the origin, lexicographically sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalView {
    points: Vec<Point2>,
}

impl LocalView {
    pub fn from_points(mut points: Vec<Point2>) -> LocalView {
        points.sort_by(|a, b| a.lex_cmp(b));
        points.dedup();
        LocalView { points }
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The unique non-origin point of a two-point view.
    pub fn other_point(&self) -> Result<&Point2, ModelError> {
        if self.points.len() != 2 {
            return Err(ModelError::NotTwoPointView);
        }
        self.points
            .iter()
            .find(|p| !p.is_origin())
            .ok_or(ModelError::NotTwoPointView)
    }
}

/// Computes robot `index`'s local view of the configuration.
pub fn observe(config: &Configuration, index: usize) -> LocalView {
    let me = &config.robots[index];
    let points = config
        .occupied_points()
        .iter()
        .map(|p| me.frame.to_local(&p.sub(&me.position)))
        .collect();
    LocalView::from_points(points)
}

/// Which side of a two-point line a robot sees itself on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Side convention on a two-point view: if the other point lies to the
/// East (positive x), or due North (x = 0, positive y), the observer
/// counts itself on the left; otherwise on the right.
pub fn side_of(view: &LocalView) -> Result<Side, ModelError> {
    let q = view.other_point()?;
    let sx = q.x.sign();
    if sx > 0 || (sx == 0 && q.y.sign() > 0) {
        Ok(Side::Left)
    } else {
        Ok(Side::Right)
    }
}

/// Level of the other point's distance, measured in the observer's frame.
pub fn local_level(view: &LocalView) -> Result<i64, ModelError> {
    let q = view.other_point()?;
    Ok(level_of_sq(&q.norm_sq())?)
}

fn correct_levels(config: &Configuration) -> Result<Vec<i64>, ModelError> {
    if config.occupied_points().len() != 2 {
        return Err(ModelError::NotTwoPointConfiguration);
    }
    let mut levels = Vec::new();
    for (i, robot) in config.robots.iter().enumerate() {
        if robot.crashed {
            continue;
        }
        levels.push(local_level(&observe(config, i))?);
    }
    if levels.is_empty() {
        return Err(ModelError::NoCorrectRobots);
    }
    Ok(levels)
}

/// Spread of local levels over correct robots of a two-point
/// configuration; zero when only one correct robot remains.
pub fn delta_level(config: &Configuration) -> Result<i64, ModelError> {
    let levels = correct_levels(config)?;
    let min = *levels.iter().min().unwrap();
    let max = *levels.iter().max().unwrap();
    Ok(max - min)
}

/// Minimum local level over correct robots of a two-point configuration.
pub fn lowest_level(config: &Configuration) -> Result<i64, ModelError> {
    let levels = correct_levels(config)?;
    Ok(*levels.iter().min().unwrap())
}

/// Deterministic order of views, used only for canonical trace output.
pub fn view_cmp(a: &LocalView, b: &LocalView) -> Ordering {
    a.points.len().cmp(&b.points.len()).then_with(|| {
        for (p, q) in a.points.iter().zip(&b.points) {
            let c = p.lex_cmp(q);
            if c != Ordering::Equal {
                return c;
            }
        }
        Ordering::Equal
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio, FieldScalar};

    fn robot_at(x: i64, y: i64, frame: Frame) -> Robot {
        Robot {
            position: Point2::from_ints(x, y),
            frame,
            crashed: false,
        }
    }

    fn scaled(num: i64, den: i64) -> Frame {
        Frame::scaling(ratio(num, den))
    }

    #[test]
    fn frame_round_trip() {
        let frames = [
            Frame::identity(),
            Frame {
                a: rat(0),
                b: rat(1),
                reflect: false,
            },
            Frame {
                a: ratio(3, 5),
                b: ratio(4, 5),
                reflect: true,
            },
            Frame {
                a: ratio(-17, 128),
                b: rat(0),
                reflect: true,
            },
        ];
        let v = Point2::new(FieldScalar::parts(7, 3, -1, 2), FieldScalar::parts(0, 1, 5, 4));
        for f in &frames {
            assert_eq!(f.from_local(&f.to_local(&v)), v);
            assert_eq!(f.to_local(&f.from_local(&v)), v);
        }
    }

    #[test]
    fn rotation_quarter_turn_view() {
        // Frame a=0, b=1 rotates a quarter turn: other robot at global
        // (2,0) appears at local (0,2).
        let config = Configuration::new(vec![
            robot_at(
                0,
                0,
                Frame {
                    a: rat(0),
                    b: rat(1),
                    reflect: false,
                },
            ),
            robot_at(2, 0, Frame::identity()),
        ]);
        let view = observe(&config, 0);
        assert_eq!(view.other_point().unwrap(), &Point2::from_ints(0, 2));
    }

    #[test]
    fn collocated_robots_collapse_in_view() {
        let config = Configuration::new(vec![
            robot_at(1, 1, Frame::identity()),
            robot_at(1, 1, scaled(2, 1)),
            robot_at(1, 1, Frame::identity()),
        ]);
        let view = observe(&config, 0);
        assert_eq!(view.points(), &[Point2::origin()]);
    }

    #[test]
    fn identity_views_of_a_pair() {
        let config = Configuration::new(vec![
            robot_at(0, 0, Frame::identity()),
            robot_at(1, 0, Frame::identity()),
        ]);
        let v0 = observe(&config, 0);
        assert_eq!(
            v0.points(),
            &[Point2::origin(), Point2::from_ints(1, 0)]
        );
        let v1 = observe(&config, 1);
        assert_eq!(
            v1.points(),
            &[Point2::from_ints(-1, 0), Point2::origin()]
        );
    }

    #[test]
    fn observe_is_translation_invariant() {
        let base = Configuration::new(vec![
            robot_at(0, 0, scaled(3, 2)),
            robot_at(5, -2, Frame::identity()),
            robot_at(-1, 4, scaled(-1, 1)),
        ]);
        let shift = Point2::from_ints(13, -8);
        let moved = Configuration::new(
            base.robots
                .iter()
                .map(|r| Robot {
                    position: r.position.add(&shift),
                    frame: r.frame.clone(),
                    crashed: r.crashed,
                })
                .collect(),
        );
        for i in 0..base.robots.len() {
            assert_eq!(observe(&base, i), observe(&moved, i));
        }
    }

    #[test]
    fn side_rule_east_and_north() {
        let mk = |x: i64, y: i64| {
            LocalView::from_points(vec![Point2::origin(), Point2::from_ints(x, y)])
        };
        assert_eq!(side_of(&mk(5, 0)).unwrap(), Side::Left);
        assert_eq!(side_of(&mk(0, 3)).unwrap(), Side::Left);
        assert_eq!(side_of(&mk(-1, 7)).unwrap(), Side::Right);
        assert_eq!(side_of(&mk(0, -3)).unwrap(), Side::Right);
        assert_eq!(side_of(&mk(-4, -4)).unwrap(), Side::Right);
    }

    #[test]
    fn side_requires_two_points() {
        let single = LocalView::from_points(vec![Point2::origin()]);
        assert_eq!(side_of(&single), Err(ModelError::NotTwoPointView));
    }

    #[test]
    fn local_level_examples() {
        let mk = |p: Point2| LocalView::from_points(vec![Point2::origin(), p]);
        assert_eq!(local_level(&mk(Point2::from_ints(1, 0))).unwrap(), 0);
        let p = Point2::new(
            FieldScalar::zero(),
            FieldScalar::from_rational(ratio(3, 8)),
        );
        assert_eq!(local_level(&mk(p)).unwrap(), 2);
    }

    #[test]
    fn frame_scale_shifts_local_level() {
        // Global distance 1 seen through scale 2 gives local distance 2,
        // hence level -1.
        let config = Configuration::new(vec![
            robot_at(0, 0, scaled(2, 1)),
            robot_at(1, 0, Frame::identity()),
        ]);
        assert_eq!(local_level(&observe(&config, 0)).unwrap(), -1);
        assert_eq!(local_level(&observe(&config, 1)).unwrap(), 0);
    }

    #[test]
    fn delta_and_lowest_level() {
        // Levels 3 and 7 from scales 17/128 and 17/2048 at distance 1.
        let config = Configuration::new(vec![
            robot_at(0, 0, scaled(17, 128)),
            robot_at(1, 0, scaled(17, 2048)),
        ]);
        assert_eq!(local_level(&observe(&config, 0)).unwrap(), 3);
        assert_eq!(local_level(&observe(&config, 1)).unwrap(), 7);
        assert_eq!(delta_level(&config).unwrap(), 4);
        assert_eq!(lowest_level(&config).unwrap(), 3);
    }

    #[test]
    fn delta_level_skips_crashed_and_handles_singleton() {
        let mut config = Configuration::new(vec![
            robot_at(0, 0, scaled(17, 128)),
            robot_at(1, 0, scaled(17, 2048)),
        ]);
        config.robots[1].crashed = true;
        assert_eq!(delta_level(&config).unwrap(), 0);
        assert_eq!(lowest_level(&config).unwrap(), 3);
    }

    #[test]
    fn delta_level_requires_two_occupied_points() {
        let gathered = Configuration::new(vec![
            robot_at(1, 1, Frame::identity()),
            robot_at(1, 1, scaled(2, 1)),
        ]);
        assert_eq!(
            delta_level(&gathered),
            Err(ModelError::NotTwoPointConfiguration)
        );
        let three = Configuration::new(vec![
            robot_at(0, 0, Frame::identity()),
            robot_at(1, 0, Frame::identity()),
            robot_at(0, 1, Frame::identity()),
        ]);
        assert_eq!(
            delta_level(&three),
            Err(ModelError::NotTwoPointConfiguration)
        );
    }

    #[test]
    fn reflection_flips_local_y() {
        let f = Frame {
            a: rat(1),
            b: rat(0),
            reflect: true,
        };
        let v = Point2::from_ints(3, 4);
        assert_eq!(f.to_local(&v), Point2::from_ints(3, -4));
    }

    #[test]
    fn validate_rejects_split_crash_and_zero_frame() {
        let mut config = Configuration::new(vec![
            robot_at(0, 0, Frame::identity()),
            robot_at(1, 0, Frame::identity()),
        ]);
        config.robots[0].crashed = true;
        config.robots[1].crashed = true;
        let problems = config.validate().unwrap_err();
        assert_eq!(problems.len(), 1);
        assert!(problems[0].contains("crashed robots"));

        let degenerate = Configuration::new(vec![robot_at(0, 0, scaled(0, 1))]);
        let problems = degenerate.validate().unwrap_err();
        assert!(problems[0].contains("zero scale"));
    }
}
